//! Input files and the analysis request they describe.
//!
//! ```text
//! ring: QQ[x,y,z]
//! ideal: x^2-y^2, y^2-z^2, x*y, x*z, y*z
//! checks: hilbert, narita, red2
//! ```
//!
//! Optional lines: `checks`, `seed`, `max-n`, `max-power`, `window`,
//! `trials`, `element`, `powers`, `reduction`, `assume-integrally-closed`.
//! Blank lines and lines starting with `#` are ignored.

use std::fmt;
use std::sync::Arc;

use rrfilt_core::parse::{parse_polynomial, parse_polynomial_list, parse_ring_header, FieldSpec, RingSpec};
use rrfilt_core::{Error, Field, Ideal, MonomialOrder, Polynomial, PrimeField, Rationals, Ring};
use serde::Serialize;

pub const CHECKS: &[&str] = &[
    "hilbert",
    "rr",
    "closure",
    "sigma",
    "reduction",
    "depth",
    "xi",
    "identity",
    "narita",
    "e2",
    "red2",
    "rr_mod",
    "xi_descent",
    "e2_dim2",
];

pub const DEFAULT_CHECKS: &[&str] = &["hilbert", "rr", "reduction", "depth"];

/// A malformed input, located by 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct InputError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl InputError {
    fn at(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self { line, column, message: message.into() }
    }

    fn from_core(line: usize, offset: usize, e: Error) -> Self {
        match e {
            Error::Parse { column, message } => Self::at(line, offset + column, message),
            Error::DivisionNotAllowed(c) => Self::at(line, offset + c, Error::DivisionNotAllowed(c).to_string()),
            other => Self::at(line, offset + 1, other.to_string()),
        }
    }
}

/// Text of one `key: value` line with its position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Located {
    pub text: String,
    #[serde(skip)]
    pub line: usize,
    /// Column of the first character of `text`.
    #[serde(skip)]
    pub column: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Overrides {
    pub checks: Option<Vec<String>>,
    pub max_power: Option<usize>,
    pub max_n: Option<usize>,
    pub window: Option<usize>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub assume_integrally_closed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalysisRequest {
    pub ring: RingSpec,
    pub ideal: Located,
    pub checks: Vec<String>,
    pub params: rrfilt_core::filtration::Params,
    pub assume_integrally_closed: bool,
    /// Element used by `xi_descent`; the certified superficial element
    /// when absent.
    pub element: Option<Located>,
    pub powers: Vec<usize>,
    /// Reduction whose reduction number is reported by `reduction`.
    pub reduction: Option<Located>,
}

impl AnalysisRequest {
    pub fn apply(&mut self, o: &Overrides) -> Result<(), InputError> {
        if let Some(c) = &o.checks {
            self.checks = validate_checks(c.iter().map(String::as_str), 0, 1)?;
        }
        let p = &mut self.params;
        p.max_power = o.max_power.unwrap_or(p.max_power);
        p.max_n = o.max_n.unwrap_or(p.max_n);
        p.window = o.window.unwrap_or(p.window);
        p.trials = o.trials.unwrap_or(p.trials);
        p.seed = o.seed.unwrap_or(p.seed);
        self.assume_integrally_closed |= o.assume_integrally_closed;
        check_params(&self.params)
    }
}

fn check_params(p: &rrfilt_core::filtration::Params) -> Result<(), InputError> {
    for (name, v) in [("window", p.window), ("trials", p.trials), ("max-n", p.max_n), ("max-power", p.max_power)] {
        if v == 0 {
            return Err(InputError::at(0, 0, format!("{name} must be positive")));
        }
    }
    Ok(())
}

fn validate_checks<'a>(names: impl Iterator<Item = &'a str>, line: usize, column: usize) -> Result<Vec<String>, InputError> {
    let mut out: Vec<String> = Vec::new();
    for n in names {
        let n = n.trim();
        if n.is_empty() {
            continue;
        }
        if !CHECKS.contains(&n) {
            return Err(InputError::at(line, column, format!("unknown check `{n}` (known: {})", CHECKS.join(", "))));
        }
        if !out.iter().any(|c| c == n) {
            out.push(n.to_string());
        }
    }
    Ok(out)
}

fn number<T: std::str::FromStr>(v: &Located, key: &str) -> Result<T, InputError> {
    v.text.parse().map_err(|_| InputError::at(v.line, v.column, format!("`{key}` expects a non-negative integer")))
}

/// Parses an input file and loads the ideal once to reject inputs that
/// cannot be analysed.
pub fn parse_input(text: &str) -> Result<AnalysisRequest, InputError> {
    let mut ring = None;
    let mut ideal = None;
    let mut checks = None;
    let mut params = rrfilt_core::filtration::Params::default();
    let mut assume = false;
    let mut element = None;
    let mut powers = vec![1, 2];
    let mut reduction = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some(colon) = raw.find(':') else {
            return Err(InputError::at(line, raw.len() - trimmed.len() + 1, "expected `key: value`"));
        };
        let key = raw[..colon].trim();
        let rest = &raw[colon + 1..];
        let lead = rest.len() - rest.trim_start().len();
        let value = Located {
            text: rest.trim().to_string(),
            line,
            column: raw[..colon + 1 + lead].chars().count() + 1,
        };
        let dup = |seen: bool| if seen { Err(InputError::at(line, 1, format!("duplicate `{key}` line"))) } else { Ok(()) };
        match key {
            "ring" => {
                dup(ring.is_some())?;
                let spec = parse_ring_header(&value.text).map_err(|e| InputError::from_core(line, value.column - 1, e))?;
                ring = Some(spec);
            }
            "ideal" => {
                dup(ideal.is_some())?;
                ideal = Some(value);
            }
            "checks" => {
                dup(checks.is_some())?;
                checks = Some(validate_checks(value.text.split(','), line, value.column)?);
            }
            "seed" => params.seed = number(&value, key)?,
            "max-n" => params.max_n = number(&value, key)?,
            "max-power" => params.max_power = number(&value, key)?,
            "window" => params.window = number(&value, key)?,
            "trials" => params.trials = number(&value, key)?,
            "assume-integrally-closed" => {
                assume = match value.text.as_str() {
                    "true" | "yes" => true,
                    "false" | "no" => false,
                    _ => return Err(InputError::at(line, value.column, "expected true or false")),
                }
            }
            "element" => element = Some(value),
            "reduction" => reduction = Some(value),
            "powers" => {
                powers = value
                    .text
                    .split(',')
                    .map(|p| p.trim().parse::<usize>().ok().filter(|n| *n > 0))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| InputError::at(line, value.column, "`powers` expects positive integers"))?;
            }
            _ => return Err(InputError::at(line, raw.len() - trimmed.len() + 1, format!("unknown key `{key}`"))),
        }
    }
    let ring = ring.ok_or_else(|| InputError::at(1, 1, "missing `ring:` line"))?;
    let ideal = ideal.ok_or_else(|| InputError::at(1, 1, "missing `ideal:` line"))?;
    check_params(&params)?;
    let req = AnalysisRequest {
        ring,
        ideal,
        checks: checks.unwrap_or_else(|| DEFAULT_CHECKS.iter().map(|s| s.to_string()).collect()),
        params,
        assume_integrally_closed: assume,
        element,
        powers,
        reduction,
    };
    match req.ring.field {
        FieldSpec::Rationals => load(&req, Rationals).map(|_| ())?,
        FieldSpec::Prime(p) => load(&req, PrimeField::new(p).expect("checked by the header parser")).map(|_| ())?,
    }
    Ok(req)
}

/// The ideal and the optional polynomials of a request in a concrete ring.
pub struct Loaded<F: Field> {
    pub ring: Arc<Ring<F>>,
    pub ideal: Ideal<F>,
    pub element: Option<Polynomial<F>>,
    pub reduction: Option<Vec<Polynomial<F>>>,
}

pub fn load<F: Field>(req: &AnalysisRequest, field: F) -> Result<Loaded<F>, InputError> {
    let ring = Ring::new(&req.ring.vars, field, MonomialOrder::DegRevLex).map_err(|e| InputError::at(0, 0, e.to_string()))?;
    let at = |l: &Located, e: Error| InputError::from_core(l.line, l.column - 1, e);
    let gens = parse_polynomial_list(&ring, &req.ideal.text).map_err(|e| at(&req.ideal, e))?;
    let ideal = Ideal::new(&ring, gens).map_err(|e| at(&req.ideal, e))?;
    let primary = ideal.is_mprimary().map_err(|e| at(&req.ideal, e))?;
    if !primary {
        let var = ideal
            .missing_pure_power()
            .map_err(|e| at(&req.ideal, e))?
            .unwrap_or_else(|| ring.names()[0].clone());
        return Err(at(&req.ideal, Error::NotMPrimary(var)));
    }
    let element = match &req.element {
        Some(l) => Some(parse_polynomial(&ring, &l.text).map_err(|e| at(l, e))?),
        None => None,
    };
    let reduction = match &req.reduction {
        Some(l) => Some(parse_polynomial_list(&ring, &l.text).map_err(|e| at(l, e))?),
        None => None,
    };
    Ok(Loaded { ring, ideal, element, reduction })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file() {
        let r = parse_input("ring: QQ[x,y]\nideal: x^2, y^2\n").unwrap();
        assert_eq!(r.ring.vars, vec!["x", "y"]);
        assert_eq!(r.checks, DEFAULT_CHECKS);
        assert_eq!(r.powers, vec![1, 2]);
    }

    #[test]
    fn polynomial_error_is_located() {
        let e = parse_input("ring: QQ[x,y]\nideal: x^2 - \n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.column >= 12, "{e}");
    }

    #[test]
    fn ring_error_is_located() {
        let e = parse_input("ring: QQ[x,,y]\nideal: x\n").unwrap_err();
        assert_eq!(e.line, 1);
        assert_eq!(e.column, 12);
    }

    #[test]
    fn unknown_check_is_rejected() {
        let e = parse_input("ring: QQ[x]\nideal: x\nchecks: hilbert, bogus\n").unwrap_err();
        assert!(e.message.contains("bogus"));
        let mut r = parse_input("ring: QQ[x]\nideal: x\n").unwrap();
        assert!(r.apply(&Overrides { checks: Some(vec!["nope".into()]), ..Default::default() }).is_err());
    }

    #[test]
    fn duplicate_variables_are_rejected() {
        let e = parse_input("ring: QQ[x,x]\nideal: x\n").unwrap_err();
        assert!(e.message.contains("duplicate"), "{e}");
    }

    #[test]
    fn non_primary_ideal_names_the_variable() {
        let e = parse_input("ring: QQ[x,y,z]\nideal: x^2, y^3\n").unwrap_err();
        assert!(e.message.contains("`z`"), "{e}");
    }

    #[test]
    fn overrides_win() {
        let mut r = parse_input("ring: GF(32003)[x,y]\nideal: x^2, y^2\nseed: 4\nwindow: 5\n").unwrap();
        assert_eq!(r.params.seed, 4);
        r.apply(&Overrides { seed: Some(9), max_n: Some(12), ..Default::default() }).unwrap();
        assert_eq!((r.params.seed, r.params.window, r.params.max_n), (9, 5, 12));
    }

    #[test]
    fn empty_checks_line() {
        let r = parse_input("ring: QQ[x]\nideal: x\nchecks:\n").unwrap();
        assert!(r.checks.is_empty());
    }
}
