//! Text format for scalars, forms and multi-vector fields.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := wedge ('*' wedge)*
//! wedge  := factor ('^' factor)*
//! factor := rational | coord | basis | '(' expr ')' | '-' factor
//! coord  := x[μ] | q[i] | p[μ,i] | pp
//! basis  := dx[μ] | dq[i] | dp[μ,i] | dpp | Dx[μ] | Dq[i] | Dp[μ,i] | Dpp
//! ```
//!
//! Spacetime indices start at 0 and field indices at 1. Degree-0 objects
//! always parse as forms.

use std::fmt;

use multisym_core::exterior::{Graded, Variance};
use multisym_core::scalar::Rational;
use multisym_core::{Coordinate, Error, Form, GradedObject, MultiVector, PhaseSpace, Scalar};
use num_traits::{One, Signed};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(u64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Wedge,
    Slash,
    Comma,
    LParen,
    RParen,
    LBracket,
    RBracket,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(v) => write!(f, "number {v}"),
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Plus => f.write_str("'+'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Star => f.write_str("'*'"),
            Tok::Wedge => f.write_str("'^'"),
            Tok::Slash => f.write_str("'/'"),
            Tok::Comma => f.write_str("','"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::LBracket => f.write_str("'['"),
            Tok::RBracket => f.write_str("']'"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

struct Lexed {
    toks: Vec<(Tok, usize)>,
    /// Start offset of each line, for error positions.
    lines: Vec<usize>,
    text_len: usize,
}

impl Lexed {
    fn position(&self, offset: usize) -> (usize, usize) {
        let line = self.lines.partition_point(|&s| s <= offset);
        (line, offset - self.lines[line - 1] + 1)
    }
}

fn lex(text: &str) -> Result<Lexed, ParseError> {
    // offsets count characters, not bytes
    let chars: Vec<(usize, char)> = text.chars().enumerate().collect();
    let mut lines = vec![0];
    lines.extend(chars.iter().filter(|(_, c)| *c == '\n').map(|(i, _)| i + 1));
    let mut lexed = Lexed { toks: Vec::new(), lines, text_len: chars.len() };
    let mut k = 0;
    while k < chars.len() {
        let (at, c) = chars[k];
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' | '−' => Tok::Minus,
            '*' => Tok::Star,
            '^' | '∧' => Tok::Wedge,
            '/' => Tok::Slash,
            ',' => Tok::Comma,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            c if c.is_ascii_digit() => {
                let start = k;
                while k < chars.len() && chars[k].1.is_ascii_digit() {
                    k += 1;
                }
                let digits: String = chars[start..k].iter().map(|(_, c)| c).collect();
                let value = digits.parse().map_err(|_| lexed.error(at, "number too large"))?;
                lexed.toks.push((Tok::Num(value), at));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                let start = k;
                while k < chars.len() && chars[k].1.is_ascii_alphabetic() {
                    k += 1;
                }
                let word: String = chars[start..k].iter().map(|(_, c)| c).collect();
                lexed.toks.push((Tok::Ident(word), at));
                continue;
            }
            other => return Err(lexed.error(at, &format!("unexpected character '{other}'"))),
        };
        lexed.toks.push((tok, at));
        k += 1;
    }
    lexed.toks.push((Tok::End, chars.len()));
    Ok(lexed)
}

impl Lexed {
    fn error(&self, offset: usize, message: &str) -> ParseError {
        let (line, column) = self.position(offset.min(self.text_len));
        ParseError { line, column, message: message.to_string() }
    }
}

/// Intermediate value: scalars are degree-0 forms.
#[derive(Clone, Debug)]
enum Value {
    Form(Form),
    Vector(MultiVector),
}

impl Value {
    fn scalar(s: Scalar) -> Value {
        Value::Form(Form::from_scalar(s))
    }

    fn as_scalar(&self) -> Option<Scalar> {
        match self {
            Value::Form(f) if f.degree() == 0 => Some(f.as_scalar()),
            _ => None,
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Value::Form(f) => f.is_zero(),
            Value::Vector(x) => x.is_zero(),
        }
    }

    fn neg(self) -> Value {
        match self {
            Value::Form(f) => Value::Form(-f),
            Value::Vector(x) => Value::Vector(-x),
        }
    }
}

struct Parser<'a> {
    lexed: &'a Lexed,
    pos: usize,
    space: PhaseSpace,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.lexed.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.lexed.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.lexed.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, offset: usize, message: &str) -> ParseError {
        self.lexed.error(offset, message)
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.error_at(self.offset(), &format!("expected {want}, found {}", self.peek())))
        }
    }

    fn expr(&mut self) -> Result<Value, ParseError> {
        let mut acc = self.term()?;
        loop {
            let at = self.offset();
            let negate = match self.peek() {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => return Ok(acc),
            };
            self.bump();
            let mut rhs = self.term()?;
            if negate {
                rhs = rhs.neg();
            }
            acc = self.add(acc, rhs, at)?;
        }
    }

    fn term(&mut self) -> Result<Value, ParseError> {
        let mut acc = self.wedge()?;
        while *self.peek() == Tok::Star {
            let at = self.offset();
            self.bump();
            let rhs = self.wedge()?;
            acc = self.multiply(acc, rhs, at)?;
        }
        Ok(acc)
    }

    fn wedge(&mut self) -> Result<Value, ParseError> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Wedge {
            let at = self.offset();
            self.bump();
            let rhs = self.factor()?;
            acc = self.wedge_values(acc, rhs, at)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Value, ParseError> {
        let at = self.offset();
        match self.bump() {
            Tok::Minus => Ok(self.factor()?.neg()),
            Tok::Num(num) => {
                let mut value = Rational::from_integer(num.into());
                if *self.peek() == Tok::Slash {
                    self.bump();
                    let den_at = self.offset();
                    match self.bump() {
                        Tok::Num(0) => return Err(self.error_at(den_at, "zero denominator")),
                        Tok::Num(den) => value /= Rational::from_integer(den.into()),
                        other => return Err(self.error_at(den_at, &format!("expected denominator, found {other}"))),
                    }
                }
                Ok(Value::scalar(Scalar::constant(self.space, value)))
            }
            Tok::LParen => {
                let v = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(v)
            }
            Tok::Ident(word) => self.symbol(&word, at),
            other => Err(self.error_at(at, &format!("expected a factor, found {other}"))),
        }
    }

    fn indices(&mut self) -> Result<Vec<usize>, ParseError> {
        self.expect(Tok::LBracket)?;
        let mut out = Vec::new();
        loop {
            let at = self.offset();
            match self.bump() {
                Tok::Num(v) => out.push(v as usize),
                other => return Err(self.error_at(at, &format!("expected an index, found {other}"))),
            }
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                _ => break,
            }
        }
        self.expect(Tok::RBracket)?;
        Ok(out)
    }

    fn coordinate(&mut self, family: &str, at: usize) -> Result<Coordinate, ParseError> {
        let arity = |p: &mut Self, want: usize| -> Result<Vec<usize>, ParseError> {
            let idx = p.indices()?;
            if idx.len() != want {
                return Err(p.error_at(at, &format!("'{family}' takes {want} index(es), found {}", idx.len())));
            }
            Ok(idx)
        };
        let c = match family {
            "x" => Coordinate::Spacetime(arity(self, 1)?[0]),
            "q" => Coordinate::Field(arity(self, 1)?[0]),
            "p" => {
                let idx = arity(self, 2)?;
                Coordinate::Momentum { mu: idx[0], field: idx[1] }
            }
            "pp" => Coordinate::Energy,
            _ => return Err(self.error_at(at, &format!("unknown symbol '{family}'"))),
        };
        Ok(c)
    }

    fn index_of(&self, c: Coordinate, at: usize) -> Result<usize, ParseError> {
        self.space.index_of(c).map_err(|_| {
            let s = self.space;
            self.error_at(
                at,
                &format!("{} out of range for n={}, N={}, {:?}", coordinate_name(c), s.n(), s.fields(), s.flavor()),
            )
        })
    }

    fn symbol(&mut self, word: &str, at: usize) -> Result<Value, ParseError> {
        let (kind, family) = match word.as_bytes()[0] {
            b'd' if word.len() > 1 => (Some(false), &word[1..]),
            b'D' if word.len() > 1 => (Some(true), &word[1..]),
            _ => (None, word),
        };
        let c = self.coordinate(family, at)?;
        let index = self.index_of(c, at)?;
        Ok(match kind {
            None => Value::scalar(Scalar::var(self.space, index)),
            Some(false) => Value::Form(Form::basis(self.space, &[index])),
            Some(true) => Value::Vector(MultiVector::basis(self.space, &[index])),
        })
    }

    fn add(&self, a: Value, b: Value, at: usize) -> Result<Value, ParseError> {
        if a.is_zero() {
            return Ok(b);
        }
        if b.is_zero() {
            return Ok(a);
        }
        match (a, b) {
            (Value::Form(a), Value::Form(b)) => a.checked_add(&b).map(Value::Form),
            (Value::Vector(a), Value::Vector(b)) => a.checked_add(&b).map(Value::Vector),
            _ => Err(Error::MixedVariance),
        }
        .map_err(|e| self.core_error(e, at, "sum"))
    }

    fn multiply(&self, a: Value, b: Value, at: usize) -> Result<Value, ParseError> {
        if let Some(s) = a.as_scalar() {
            return Ok(scale(b, &s));
        }
        if let Some(s) = b.as_scalar() {
            return Ok(scale(a, &s));
        }
        Err(self.error_at(at, "'*' needs a scalar factor; use '^' for wedge products"))
    }

    fn wedge_values(&self, a: Value, b: Value, at: usize) -> Result<Value, ParseError> {
        if let Some(s) = a.as_scalar() {
            return Ok(scale(b, &s));
        }
        if let Some(s) = b.as_scalar() {
            return Ok(scale(a, &s));
        }
        match (a, b) {
            (Value::Form(a), Value::Form(b)) => Ok(Value::Form(a.wedge(&b))),
            (Value::Vector(a), Value::Vector(b)) => Ok(Value::Vector(a.wedge(&b))),
            _ => Err(self.core_error(Error::MixedVariance, at, "wedge")),
        }
    }

    fn core_error(&self, e: Error, at: usize, what: &str) -> ParseError {
        let msg = match e {
            Error::MixedVariance => format!("mixed variance in {what}: cannot combine forms and multi-vector fields"),
            Error::DegreeMismatch { .. } | Error::DegreeOutOfRange { .. } => {
                format!("inhomogeneous {what}: terms of different degree")
            }
            other => format!("{other}"),
        };
        self.error_at(at, &msg)
    }
}

fn scale(v: Value, s: &Scalar) -> Value {
    match v {
        Value::Form(f) => Value::Form(f.scaled(s)),
        Value::Vector(x) => Value::Vector(x.scaled(s)),
    }
}

/// Parses `text` into a normalized object on `space`.
pub fn parse_expr(text: &str, space: PhaseSpace) -> Result<GradedObject, ParseError> {
    let lexed = lex(text)?;
    let mut p = Parser { lexed: &lexed, pos: 0, space };
    if *p.peek() == Tok::End {
        return Err(p.error_at(0, "empty expression"));
    }
    let v = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error_at(p.offset(), &format!("unexpected {}", p.peek())));
    }
    Ok(match v {
        Value::Form(f) => GradedObject::Form(f),
        Value::Vector(x) if x.is_zero() => GradedObject::Form(Form::zero(space, 0)),
        Value::Vector(x) => GradedObject::MultiVector(x),
    })
}

pub fn parse_form(text: &str, space: PhaseSpace) -> Result<Form, ParseError> {
    match parse_expr(text, space)? {
        GradedObject::Form(f) => Ok(f),
        GradedObject::MultiVector(_) => Err(ParseError { line: 1, column: 1, message: "expected a form".into() }),
    }
}

pub fn parse_multivector(text: &str, space: PhaseSpace) -> Result<MultiVector, ParseError> {
    match parse_expr(text, space)? {
        GradedObject::MultiVector(x) => Ok(x),
        GradedObject::Form(f) if f.degree() == 0 => Ok(MultiVector::from_scalar(f.as_scalar())),
        GradedObject::Form(_) => {
            Err(ParseError { line: 1, column: 1, message: "expected a multi-vector field".into() })
        }
    }
}

fn coordinate_name(c: Coordinate) -> String {
    match c {
        Coordinate::Spacetime(mu) => format!("x[{mu}]"),
        Coordinate::Field(i) => format!("q[{i}]"),
        Coordinate::Momentum { mu, field } => format!("p[{mu},{field}]"),
        Coordinate::Energy => "pp".to_string(),
    }
}

fn write_rational(out: &mut String, r: &Rational) {
    if r.is_integer() {
        out.push_str(&r.numer().to_string());
    } else {
        out.push_str(&format!("{}/{}", r.numer(), r.denom()));
    }
}

fn print_graded<V: Variance>(x: &Graded<V>, prefix: &str) -> String {
    let space = x.space();
    let mut out = String::new();
    for (blade, coeff) in x.terms() {
        for (mono, c) in coeff.terms() {
            let mut factors: Vec<String> = Vec::new();
            for (i, &e) in mono.exponents().iter().enumerate() {
                for _ in 0..e {
                    factors.push(coordinate_name(space.coordinate(i)));
                }
            }
            if !blade.is_empty() {
                let chain: Vec<String> =
                    blade.indices().map(|i| format!("{prefix}{}", coordinate_name(space.coordinate(i)))).collect();
                factors.push(chain.join("^"));
            }
            let magnitude = c.abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            if !magnitude.is_one() || factors.is_empty() {
                write_rational(&mut out, &magnitude);
                if !factors.is_empty() {
                    out.push('*');
                }
            }
            out.push_str(&factors.join("*"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn print_scalar(s: &Scalar) -> String {
    print_form(&Form::from_scalar(s.clone()))
}

pub fn print_form(f: &Form) -> String {
    print_graded(f, "d")
}

pub fn print_multivector(x: &MultiVector) -> String {
    print_graded(x, "D")
}

/// Canonical text: terms in blade order then monomial order, increasing
/// index tuples, magnitude-one coefficients omitted.
pub fn print_expr(obj: &GradedObject) -> String {
    match obj {
        GradedObject::Form(f) => print_form(f),
        GradedObject::MultiVector(x) => print_multivector(x),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use multisym_core::multiphase::{euler_field, theta};
    use multisym_core::Flavor;

    fn ext(n: usize, nf: usize) -> PhaseSpace {
        PhaseSpace::new(n, nf, Flavor::Extended).unwrap()
    }

    #[test]
    fn theta_from_text() {
        let s = ext(2, 1);
        let text = "p[0,1]*dq[1]^dx[1] - p[1,1]*dq[1]^dx[0] + pp*dx[0]^dx[1]";
        assert_eq!(parse_form(text, s).unwrap(), theta(s).unwrap());
    }

    #[test]
    fn repeated_factor_vanishes() {
        let s = ext(2, 1);
        assert!(parse_expr("dq[1]^dq[1]", s).unwrap().is_zero());
        assert_eq!(print_expr(&parse_expr("dq[1]^dq[1]", s).unwrap()), "0");
    }

    #[test]
    fn basis_bivector() {
        let s = ext(2, 1);
        let x = parse_multivector("Dq[1]^Dp[0,1]", s).unwrap();
        assert_eq!(x, MultiVector::basis(s, &[s.q(1), s.momentum(0, 1)]));
        assert_eq!(print_multivector(&x), "Dq[1]^Dp[0,1]");
        let y = parse_multivector("Dp[0,1]^Dq[1]", s).unwrap();
        assert_eq!(y, -x);
    }

    #[test]
    fn euler_field_text() {
        let s = ext(2, 1);
        let sigma = euler_field(s).unwrap();
        assert_eq!(print_multivector(&sigma), "p[0,1]*Dp[0,1] + p[1,1]*Dp[1,1] + pp*Dpp");
    }

    #[test]
    fn zero_prints_as_zero() {
        let s = ext(2, 1);
        assert_eq!(print_form(&Form::zero(s, 3)), "0");
        assert_eq!(print_multivector(&MultiVector::zero(s, 1)), "0");
    }

    #[test]
    fn precedence() {
        let s = ext(2, 1);
        let a = parse_form("2*x[0]*dx[0]^dq[1] + 1/2*dx[1]^dq[1]", s).unwrap();
        let b = parse_form("(2*x[0])*(dx[0]^dq[1]) + (1/2)*(dx[1]^dq[1])", s).unwrap();
        assert_eq!(a, b);
        assert_eq!(print_form(&a), "2*x[0]*dx[0]^dq[1] + 1/2*dx[1]^dq[1]");
        let c = parse_form("-(x[0] - q[1])*(x[0] + q[1])", s).unwrap();
        assert_eq!(print_form(&c), "q[1]*q[1] - x[0]*x[0]");
        assert_eq!(
            parse_form("-3/4", s).unwrap(),
            Form::from_scalar(Scalar::constant(s, Rational::new((-3).into(), 4.into())))
        );
    }

    #[test]
    fn errors_carry_positions() {
        let s = ext(2, 1);
        let e = parse_expr("x[0] +\n  q[2]", s).unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        assert!(e.message.contains("out of range"));
        let e = parse_expr("dx[0]^Dq[1]", s).unwrap_err();
        assert!(e.message.contains("mixed variance"));
        assert_eq!((e.line, e.column), (1, 6));
        let e = parse_expr("dx[0] + dx[0]^dx[1]", s).unwrap_err();
        assert!(e.message.contains("inhomogeneous"));
        assert!(parse_expr("x[0] x[1]", s).is_err());
        assert!(parse_expr("dx[0]*dx[1]", s).is_err());
        assert!(parse_expr("p[0]", s).is_err());
        assert!(parse_expr("1/0", s).is_err());
        assert!(parse_expr("", s).is_err());
        assert!(parse_expr("pp", s.with_flavor(Flavor::Ordinary)).is_err());
        assert!(parse_expr("y[0]", s).is_err());
    }

    #[test]
    fn printer_never_emits_bare_p() {
        let s = ext(1, 1);
        let f = parse_form("pp*p[0,1] - pp*dpp", s);
        assert!(f.is_err());
        let f = parse_form("pp*p[0,1]*dpp", s).unwrap();
        assert_eq!(print_form(&f), "p[0,1]*pp*dpp");
    }
}
