use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use multisym::expr::{parse_form, parse_multivector, print_form, print_multivector};
use multisym::report::Status;
use multisym::suite::{run_suite, SuiteConfig, SuiteError, IDENTITIES};
use multisym_core::multiphase::pullback_horizontal;
use multisym_core::{Error, Form, Metric, Multiphase};

const FAILED: u8 = 1;
const USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "multisym", version, about = "Graded Poisson brackets on multiphase spaces, checked exactly")]
struct Cli {
    /// Spacetime dimension.
    #[arg(long, global = true, default_value_t = 2)]
    n: usize,
    /// Number of fields.
    #[arg(long = "N", global = true, default_value_t = 1)]
    fields: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Maximum coefficient degree of generated instances.
    #[arg(long, global = true, default_value_t = 2)]
    degree: usize,
    /// Instances per identity.
    #[arg(long, global = true, default_value_t = 25)]
    cases: usize,
    #[arg(long, global = true, value_enum, default_value_t = MetricArg::Euclidean)]
    metric: MetricArg,
    /// Write the JSON report to this path.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Cross-check the two bracket formulas.
    #[arg(long, global = true)]
    check: bool,
    #[arg(long, global = true, value_enum, default_value_t = Formula::Main)]
    formula: Formula,
    /// Perturb one identity, to see the harness fail.
    #[arg(long, global = true, hide = true)]
    corrupt: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the verification suite and print a summary.
    Verify {
        /// Identities to run (repeat or separate by commas); all by default.
        #[arg(long = "identity", value_delimiter = ',')]
        identities: Vec<String>,
        /// List the registered identities and exit.
        #[arg(long)]
        list: bool,
    },
    /// Run the verification suite and print the JSON report.
    Report {
        #[arg(long = "identity", value_delimiter = ',')]
        identities: Vec<String>,
    },
    /// Bracket of two forms (expressions or files holding one).
    Bracket {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
    /// Hamiltonian multi-vector field of a form.
    Solve {
        #[arg(allow_hyphen_values = true)]
        f: String,
    },
    /// Canonical lift of a projectable vector field.
    Lift {
        #[arg(allow_hyphen_values = true)]
        xi: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MetricArg {
    Euclidean,
    Lorentzian,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Formula {
    Main,
    Alt,
    Primed,
    Kanatchikov,
}

/// Expression text: the file contents if `arg` names a file, else `arg`.
fn read_input(arg: &str) -> Result<String, String> {
    let path = Path::new(arg);
    if path.is_file() {
        fs::read_to_string(path).map_err(|e| format!("{arg}: {e}"))
    } else {
        Ok(arg.to_string())
    }
}

enum Failure {
    Usage(String),
    Failed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Failed(e.to_string())
    }
}

fn parse_form_arg(arg: &str, space: multisym_core::PhaseSpace) -> Result<Form, Failure> {
    let text = read_input(arg).map_err(Failure::Usage)?;
    parse_form(text.trim(), space).map_err(|e| Failure::Usage(format!("parse error at {e}")))
}

fn config(cli: &Cli, identities: Vec<String>) -> SuiteConfig {
    SuiteConfig {
        n: cli.n,
        fields: cli.fields,
        seed: cli.seed,
        degree: cli.degree,
        cases: cli.cases,
        identities,
        metric: metric(cli.metric),
        corrupt: cli.corrupt.clone(),
    }
}

fn metric(m: MetricArg) -> Metric {
    match m {
        MetricArg::Euclidean => Metric::Euclidean,
        MetricArg::Lorentzian => Metric::Lorentzian,
    }
}

fn suite_failure(e: SuiteError) -> Failure {
    match e {
        SuiteError::Core(e) => Failure::Failed(e.to_string()),
        other => Failure::Usage(other.to_string()),
    }
}

fn write_json(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, format!("{text}\n")).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn verify(cli: &Cli, identities: Vec<String>, list: bool) -> Result<bool, Failure> {
    if list {
        for (name, about) in IDENTITIES {
            println!("{name:24} {about}");
        }
        return Ok(true);
    }
    let report = run_suite(&config(cli, identities)).map_err(suite_failure)?;
    for (name, pass, fail) in report.tally() {
        let verdict = if fail == 0 { "pass" } else { "FAIL" };
        println!("{verdict} {name:24} {pass}/{}", pass + fail);
    }
    for case in report.cases.iter().filter(|c| c.status == Status::Fail) {
        let params = serde_json::Value::Object(case.params.clone());
        println!("  {} {params}: residual {}", case.identity, case.residual.as_deref().unwrap_or("-"));
    }
    println!(
        "summary: {} passed, {} failed (n={}, N={}, seed={})",
        report.summary.pass, report.summary.fail, cli.n, cli.fields, cli.seed
    );
    if let Some(path) = &cli.json {
        write_json(path, &report.to_json())?;
    }
    Ok(report.passed())
}

fn report(cli: &Cli, identities: Vec<String>) -> Result<bool, Failure> {
    let report = run_suite(&config(cli, identities)).map_err(suite_failure)?;
    match &cli.json {
        Some(path) => write_json(path, &report.to_json())?,
        None => println!("{}", report.to_json()),
    }
    Ok(report.passed())
}

fn bracket(cli: &Cli, f: &str, g: &str) -> Result<bool, Failure> {
    let m = Multiphase::new(cli.n, cli.fields)?;
    if cli.formula == Formula::Kanatchikov {
        let o = m.ordinary();
        let (f, g) = (parse_form_arg(f, o)?, parse_form_arg(g, o)?);
        let pf = m.solve_kanatchikov(&f)?;
        let pg = m.solve_kanatchikov(&g)?;
        let value = m.kanatchikov_bracket(&pf, &pg)?;
        println!("{}", print_form(&value));
        if cli.check {
            let ef = m.solve_hamiltonian(&pullback_horizontal(&f)?)?;
            let eg = m.solve_hamiltonian(&pullback_horizontal(&g)?)?;
            let main = m.poisson_bracket(&ef, &eg)?.value;
            let agree = pullback_horizontal(&value)? == main;
            eprintln!("check: pullback {} the corrected bracket", if agree { "equals" } else { "DIFFERS FROM" });
            return Ok(agree);
        }
        return Ok(true);
    }
    let s = m.extended();
    let (f, g) = (parse_form_arg(f, s)?, parse_form_arg(g, s)?);
    let pf = m.solve_hamiltonian(&f)?;
    let pg = m.solve_hamiltonian(&g)?;
    let value = match cli.formula {
        Formula::Main => m.poisson_bracket(&pf, &pg)?.value,
        Formula::Alt => m.poisson_bracket_alt(&pf, &pg)?.value,
        Formula::Primed => m.primed_bracket(&pf, &pg)?.value,
        Formula::Kanatchikov => unreachable!(),
    };
    println!("{}", print_form(&value));
    if cli.formula == Formula::Primed {
        // {f,g} − {f,g}′ = d(potential)
        let potential = m.bracket_correction_potential(&pf, &pg);
        println!("exact term: d({})", print_form(&potential));
    }
    if cli.check {
        let main = m.poisson_bracket(&pf, &pg)?.value;
        let alt = m.poisson_bracket_alt(&pf, &pg)?.value;
        if main == alt {
            eprintln!("check: both bracket formulas agree");
        } else {
            eprintln!("check: formulas DIFFER by {}", print_form(&(&main - &alt)));
            return Ok(false);
        }
    }
    Ok(true)
}

fn solve(cli: &Cli, f: &str) -> Result<bool, Failure> {
    let m = Multiphase::new(cli.n, cli.fields)?;
    let f = parse_form_arg(f, m.extended())?;
    let pair = m.solve_hamiltonian(&f)?;
    let r = cli.n - f.degree();
    let kernel = m.omega_kernel_basis(r)?.len();
    println!("{}", print_multivector(pair.field()));
    println!("kernel dimension: {kernel}");
    Ok(true)
}

fn lift(cli: &Cli, xi: &str) -> Result<bool, Failure> {
    let m = Multiphase::new(cli.n, cli.fields)?;
    let text = read_input(xi).map_err(Failure::Usage)?;
    let xi = parse_multivector(text.trim(), m.extended()).map_err(|e| Failure::Usage(format!("parse error at {e}")))?;
    let lifted = m.canonical_lift(&xi)?;
    if !m.is_exact(&lifted) {
        return Err(Failure::Failed("lift does not preserve θ".into()));
    }
    println!("{}", print_multivector(&lifted));
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Verify { identities, list } => verify(&cli, identities.clone(), *list),
        Command::Report { identities } => report(&cli, identities.clone()),
        Command::Bracket { f, g } => bracket(&cli, f, g),
        Command::Solve { f } => solve(&cli, f),
        Command::Lift { xi } => lift(&cli, xi),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(FAILED),
        Err(Failure::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(FAILED)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE)
        }
    }
}
