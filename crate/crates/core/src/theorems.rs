//! Verifiers that evaluate theorem statements on a concrete ideal.
//!
//! A verdict is `FAIL` only when every hypothesis holds and a conclusion
//! check fails. A failed hypothesis gives `INAPPLICABLE`; missing data
//! (a search cap, an unsettled `ξ`) gives `UNDETERMINED`.

use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::filtration::FiltrationCache;
use crate::graded::{self, XiReport};
use crate::hilbert;
use crate::poly::Polynomial;
use crate::reductions;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Inapplicable,
    Undetermined,
    Fail,
}

impl Status {
    fn of(b: bool) -> Status {
        if b {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Hypothesis {
    pub condition: String,
    pub status: Status,
    pub witness: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremVerdict {
    pub name: String,
    pub hypotheses: Vec<Hypothesis>,
    pub conclusion: Status,
    pub details: Value,
}

impl TheoremVerdict {
    fn new(name: &str) -> Self {
        Self { name: name.to_string(), hypotheses: Vec::new(), conclusion: Status::Pass, details: json!({}) }
    }

    /// Records a hypothesis; returns whether it holds.
    fn hypothesis(&mut self, condition: &str, holds: bool, witness: Value) -> bool {
        let status = if holds { Status::Pass } else { Status::Fail };
        self.hypotheses.push(Hypothesis { condition: condition.to_string(), status, witness });
        holds
    }

    fn inapplicable(mut self) -> Self {
        self.conclusion = Status::Inapplicable;
        self
    }

    fn detail(&mut self, key: &str, v: Value) {
        if let Value::Object(m) = &mut self.details {
            m.insert(key.to_string(), v);
        }
    }

    /// Verdict for a check that could not be completed.
    pub fn undetermined(name: &str, err: &Error) -> Self {
        let mut v = Self::new(name);
        v.conclusion = Status::Undetermined;
        v.detail("error", json!(err.to_string()));
        v
    }
}

/// Errors that mean "a search cap was hit" rather than "a bug was found".
pub fn is_resource_error(e: &Error) -> bool {
    matches!(
        e,
        Error::HilbertUndetermined(_)
            | Error::UnstableClosure { .. }
            | Error::NoSuperficial { .. }
            | Error::NoReduction { .. }
    )
}

/// Runs a verifier, turning cap-related errors into `UNDETERMINED`.
pub fn run_check(name: &str, f: impl FnOnce() -> Result<TheoremVerdict>) -> Result<TheoremVerdict> {
    match f() {
        Ok(v) => Ok(v),
        Err(e) if is_resource_error(&e) => Ok(TheoremVerdict::undetermined(name, &e)),
        Err(e) => Err(e),
    }
}

fn xi_value<F: Field>(cache: &Arc<FiltrationCache<F>>) -> Result<XiReport> {
    let p = cache.params();
    graded::xi_estimate(cache, p.max_power, p.xi_window)
}

/// `e_2 = ... = e_r = 0` if and only if the Ratliff-Rush graded ring has
/// minimal multiplicity; reports the formula-derived `𝕀` when the
/// coefficients vanish.
pub fn check_narita<F: Field>(cache: &Arc<FiltrationCache<F>>) -> Result<TheoremVerdict> {
    let mut v = TheoremVerdict::new("narita");
    let d = cache.dim();
    if !v.hypothesis("dim >= 2", d >= 2, json!(d)) {
        return Ok(v.inapplicable());
    }
    let adic = hilbert::h_polynomial(cache)?;
    let rr = hilbert::rr_hilbert(cache, &adic)?;
    let red = reductions::minimal_reduction(cache)?;
    let mm = reductions::tilde_minimal_multiplicity(cache, &red, Some(&rr))?;
    let vanish = adic.e[2..=d].iter().all(|e| *e == 0);
    v.conclusion = Status::of(vanish == mm.holds);
    v.detail("e", json!(adic.e));
    v.detail("coefficients_vanish", json!(vanish));
    v.detail("minimal_multiplicity", json!(mm));
    v.detail("reduction", json!(red.summary()));
    if vanish {
        let sign = if (d + 1) % 2 == 0 { 1 } else { -1 };
        v.detail(
            "formula_derived_I_invariant",
            json!({ "value": sign * d as i64 * adic.e[d + 1], "source": "formula in e_(r+1), not computed independently" }),
        );
    }
    Ok(v)
}

fn e2_dim2_conclusions<F: Field>(
    cache: &Arc<FiltrationCache<F>>,
    v: &mut TheoremVerdict,
) -> Result<bool> {
    let red = reductions::minimal_reduction(cache)?;
    let mm = reductions::tilde_minimal_multiplicity(cache, &red, None)?;
    let bound = cache.closure_bound()?;
    let mut inside = Vec::new();
    for i in 1..bound.max(2) {
        let ok = cache.closure(i + 1)?.ideal.is_subset(&cache.power(i)?)?;
        inside.push((i, ok));
    }
    let seq = cache.superficial_sequence(1, cache.params().seed)?;
    let bw = cache.behaves_well_mod(&seq, cache.params().max_n)?;
    let ok_i = mm.holds;
    let ok_ii = inside.iter().all(|(_, ok)| *ok);
    v.detail("closure_is_J_times_closure", json!(mm));
    v.detail("closure_inside_lower_power", json!(inside));
    v.detail("behaves_well", json!(bw));
    Ok(ok_i && ok_ii && bw.holds)
}

/// Consequences of `e_2 = 0`: in dimension 2 the closure identities and
/// good behaviour modulo a superficial element; in dimension 3 the sign of
/// `e_3` and its relation to `ξ`.
pub fn check_e2_consequences<F: Field>(cache: &Arc<FiltrationCache<F>>) -> Result<TheoremVerdict> {
    let mut v = TheoremVerdict::new("e2_consequences");
    let d = cache.dim();
    if !v.hypothesis("dim in {2, 3}", d == 2 || d == 3, json!(d)) {
        return Ok(v.inapplicable());
    }
    let adic = hilbert::h_polynomial(cache)?;
    if !v.hypothesis("e_2 = 0", adic.e[2] == 0, json!(adic.e[2])) {
        return Ok(v.inapplicable());
    }
    v.detail("e", json!(adic.e));
    if d == 2 {
        let ok = e2_dim2_conclusions(cache, &mut v)?;
        v.conclusion = Status::of(ok);
        return Ok(v);
    }
    let e3 = adic.e[3];
    let xi = xi_value(cache)?;
    v.detail("xi", json!(xi));
    let Some(x) = xi.value else {
        v.conclusion = Status::Undetermined;
        return Ok(v);
    };
    let ok = e3 <= 0 && (e3 == 0) == (x == 3) && (e3 < 0) == (x == 1);
    v.conclusion = Status::of(ok);
    Ok(v)
}

/// Reduction number 2 in dimension 3: `e_3 <= 0`, and `e_3 = 0` exactly
/// when `ξ >= 2`.
pub fn check_red2_dim3<F: Field>(cache: &Arc<FiltrationCache<F>>) -> Result<TheoremVerdict> {
    let mut v = TheoremVerdict::new("red2_dim3");
    let d = cache.dim();
    if !v.hypothesis("dim = 3", d == 3, json!(d)) {
        return Ok(v.inapplicable());
    }
    let red = reductions::minimal_reduction(cache)?;
    let summary = red.summary();
    if !v.hypothesis("red = 2", red.red == 2, json!(summary)) {
        return Ok(v.inapplicable());
    }
    let adic = hilbert::h_polynomial(cache)?;
    let e3 = adic.e[3];
    let xi = xi_value(cache)?;
    v.detail("e", json!(adic.e));
    v.detail("xi", json!(xi));
    let Some(x) = xi.value else {
        v.conclusion = if e3 > 0 { Status::Fail } else { Status::Undetermined };
        return Ok(v);
    };
    v.conclusion = Status::of(e3 <= 0 && (e3 == 0) == (x >= 2));
    Ok(v)
}

/// Good behaviour of the Ratliff-Rush filtration modulo a superficial
/// sequence of length `s` must not depend on the sequence.
pub fn check_rr_mod_sequence<F: Field>(cache: &Arc<FiltrationCache<F>>, s: usize, seeds: &[u64]) -> Result<TheoremVerdict> {
    let mut v = TheoremVerdict::new("rr_mod_sequence");
    let d = cache.dim();
    if !v.hypothesis("1 <= s <= dim - 1", s >= 1 && s < d, json!({ "s": s, "dim": d })) {
        return Ok(v.inapplicable());
    }
    if seeds.len() < 2 {
        return Err(Error::Precondition("at least two seeds are needed".into()));
    }
    let mut reports = Vec::new();
    for seed in seeds {
        let seq = cache.superficial_sequence(s, *seed)?;
        reports.push((*seed, cache.behaves_well_mod(&seq, cache.params().max_n)?));
    }
    let agree = reports.windows(2).all(|w| w[0].1.holds == w[1].1.holds);
    let complete = reports.iter().all(|(_, r)| r.complete);
    v.conclusion = if !agree {
        Status::Fail
    } else if !complete {
        Status::Undetermined
    } else {
        Status::Pass
    };
    v.detail("behaves_well", json!(reports[0].1.holds));
    v.detail("runs", json!(reports.iter().map(|(s, r)| json!({ "seed": s, "report": r })).collect::<Vec<_>>()));
    Ok(v)
}

/// `ξ(A/(x^n)) >= ξ(A) - 1`, asserted for the largest `n` in `powers`;
/// strict inequalities are listed.
pub fn check_xi_descent<F: Field>(cache: &Arc<FiltrationCache<F>>, x: &Polynomial<F>, powers: &[usize]) -> Result<TheoremVerdict> {
    let mut v = TheoremVerdict::new("xi_descent");
    let d = cache.dim();
    if !v.hypothesis("dim >= 2", d >= 2, json!(d)) {
        return Ok(v.inapplicable());
    }
    let cert = cache.certify_element(x)?;
    v.hypothesis(
        "x superficial",
        true,
        json!({ "element": x.to_string(), "window_start": cert.window_start, "window_length": cert.window_length }),
    );
    let Some(&largest) = powers.iter().max() else {
        return Err(Error::Precondition("no powers of x given".into()));
    };
    let xi_a = xi_value(cache)?;
    let mut rows = Vec::new();
    let mut strict = Vec::new();
    let mut undetermined = xi_a.value.is_none();
    let mut holds_at_largest = true;
    for &n in powers {
        let mut modulus = cache.modulus().to_vec();
        modulus.push(x.pow(n as u32)?);
        let q = FiltrationCache::with_modulus(cache.base(), modulus, cache.params().clone())?;
        let xi_q = xi_value(&q)?;
        match (xi_a.value, xi_q.value) {
            (Some(a), Some(b)) => {
                if b + 1 > a {
                    strict.push(n);
                }
                if n == largest && b + 1 < a {
                    holds_at_largest = false;
                }
            }
            _ => undetermined = true,
        }
        rows.push(json!({ "n": n, "xi": xi_q }));
    }
    v.detail("xi", json!(xi_a));
    v.detail("quotients", json!(rows));
    v.detail("strict_inequality_at", json!(strict));
    v.conclusion = if !holds_at_largest {
        Status::Fail
    } else if undetermined {
        Status::Undetermined
    } else {
        Status::Pass
    };
    Ok(v)
}

/// The two-dimensional statement: under `e_2 = 0`, or for an integrally
/// closed `I` with `e_2 = e_1 - e_0 + λ(A/I)`, the filtration behaves well
/// modulo a superficial element and `G_(I^n)` is Cohen-Macaulay for large
/// `n`. Integral closedness is not computed; `assume_integrally_closed`
/// asserts it.
pub fn check_e2_dim2<F: Field>(cache: &Arc<FiltrationCache<F>>, assume_integrally_closed: bool) -> Result<TheoremVerdict> {
    let mut v = TheoremVerdict::new("e2_dim2");
    let d = cache.dim();
    if !v.hypothesis("dim = 2", d == 2, json!(d)) {
        return Ok(v.inapplicable());
    }
    let adic = hilbert::h_polynomial(cache)?;
    let e = &adic.e;
    let case1 = e[2] == 0;
    let len1 = cache.length(1)? as i64;
    let case2 = assume_integrally_closed && e[2] == e[1] - e[0] + len1;
    v.hypothesis("e_2 = 0", case1, json!(e[2]));
    v.hypothesis(
        "I integrally closed (assumed) and e_2 = e_1 - e_0 + λ(A/I)",
        case2,
        json!({ "assumed": assume_integrally_closed, "rhs": e[1] - e[0] + len1 }),
    );
    if !case1 && !case2 {
        return Ok(v.inapplicable());
    }
    let seq = cache.superficial_sequence(1, cache.params().seed)?;
    let bw = cache.behaves_well_mod(&seq, cache.params().max_n)?;
    let xi = xi_value(cache)?;
    v.detail("e", json!(e));
    v.detail("behaves_well", json!(bw));
    v.detail("xi", json!(xi));
    v.detail(
        "formula_derived_I_invariant",
        json!({ "value": -2 * e[3], "source": "formula -2 e_3, not computed independently" }),
    );
    v.conclusion = match xi.value {
        _ if !bw.holds => Status::Fail,
        Some(2) => Status::Pass,
        Some(_) => Status::Fail,
        None => Status::Undetermined,
    };
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::Params;
    use crate::{parse::parse_polynomial_list, Ideal, MonomialOrder, Rationals, Ring};

    fn cache(vars: &[&str], gens: &str) -> Arc<FiltrationCache<Rationals>> {
        let r = Ring::new(vars, Rationals, MonomialOrder::DegRevLex).unwrap();
        let i = Ideal::new(&r, parse_polynomial_list(&r, gens).unwrap()).unwrap();
        FiltrationCache::new(&i, Params::default()).unwrap()
    }

    #[test]
    fn narita_on_a_complete_intersection() {
        let c = cache(&["x", "y"], "x^2, y^2");
        let v = check_narita(&c).unwrap();
        assert_eq!(v.conclusion, Status::Pass);
    }

    #[test]
    fn red2_is_inapplicable_in_dimension_two() {
        let c = cache(&["x", "y"], "x, y");
        assert_eq!(check_red2_dim3(&c).unwrap().conclusion, Status::Inapplicable);
    }

    #[test]
    fn e2_gate() {
        // h = 7 + z + z^2, so e_2 = 1
        let c = cache(&["x", "y"], "x^3, x^2*y, y^3");
        assert_eq!(hilbert::h_polynomial(&c).unwrap().e, vec![9, 3, 1, 0]);
        let v = check_e2_consequences(&c).unwrap();
        assert_eq!(v.conclusion, Status::Inapplicable);
    }

    #[test]
    fn maximal_ideal_descent_is_an_equality() {
        let c = cache(&["x", "y"], "x, y");
        let x = parse_polynomial_list(c.ring(), "x").unwrap().remove(0);
        let v = check_xi_descent(&c, &x, &[1]).unwrap();
        assert_eq!(v.conclusion, Status::Pass);
        assert_eq!(v.details["strict_inequality_at"], json!([]));
    }

    #[test]
    fn mod_sequence_on_the_maximal_ideal() {
        let c = cache(&["x", "y"], "x, y");
        let v = check_rr_mod_sequence(&c, 1, &[1, 2]).unwrap();
        assert_eq!(v.conclusion, Status::Pass);
        assert_eq!(v.details["behaves_well"], json!(true));
    }

    #[test]
    fn statuses_serialize_in_upper_case() {
        assert_eq!(serde_json::to_string(&Status::Undetermined).unwrap(), "\"UNDETERMINED\"");
    }
}
