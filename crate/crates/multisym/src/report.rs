//! JSON verification report.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceInfo {
    pub n: usize,
    #[serde(rename = "N")]
    pub fields: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub identity: String,
    pub params: Map<String, Value>,
    pub status: Status,
    /// Printed `lhs − rhs` for failing cases.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub residual: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub space: SpaceInfo,
    pub cases: Vec<Case>,
    pub summary: Summary,
}

impl Report {
    pub fn new(suite: &str, seed: u64, n: usize, fields: usize, cases: Vec<Case>) -> Self {
        let pass = cases.iter().filter(|c| c.status == Status::Pass).count();
        let summary = Summary { pass, fail: cases.len() - pass };
        Report { suite: suite.to_string(), seed, space: SpaceInfo { n, fields }, cases, summary }
    }

    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Report> {
        serde_json::from_str(text)
    }

    /// Per-identity `(identity, pass, fail)` in first-seen order.
    pub fn tally(&self) -> Vec<(String, usize, usize)> {
        let mut out: Vec<(String, usize, usize)> = Vec::new();
        for c in &self.cases {
            let i = match out.iter().position(|(name, _, _)| *name == c.identity) {
                Some(i) => i,
                None => {
                    out.push((c.identity.clone(), 0, 0));
                    out.len() - 1
                }
            };
            match c.status {
                Status::Pass => out[i].1 += 1,
                Status::Fail => out[i].2 += 1,
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schema_fields() {
        let mut params = Map::new();
        params.insert("r".into(), 1.into());
        let cases = vec![
            Case { identity: "a".into(), params: params.clone(), status: Status::Pass, residual: None },
            Case { identity: "a".into(), params, status: Status::Fail, residual: Some("dx[0]".into()) },
        ];
        let r = Report::new("default", 7, 2, 1, cases);
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["space"]["N"], 1);
        assert_eq!(v["summary"]["fail"], 1);
        assert_eq!(v["cases"][0]["status"], "pass");
        assert!(v["cases"][0].get("residual").is_none());
        assert_eq!(v["cases"][1]["residual"], "dx[0]");
        assert_eq!(Report::from_json(&r.to_json()).unwrap(), r);
        assert_eq!(r.tally(), vec![("a".to_string(), 1, 1)]);
    }
}
