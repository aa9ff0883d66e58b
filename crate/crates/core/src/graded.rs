//! Depth of the associated graded ring by superficial descent, and the
//! eventual depth `ξ` along the powers of `I`.
//!
//! At each level two criteria are computed: whether every Ratliff-Rush
//! closure equals the power (`r = 0`), and whether the superficial element
//! has `b = 0`. They must agree; a disagreement is an error.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::filtration::{FiltrationCache, SuperficialCertificate};

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DescentStep {
    pub element: String,
    pub b_poly: Vec<u64>,
    pub b_zero: bool,
    /// Least `n` with `closure(n) != I^n`, if any.
    pub closure_gap: Option<usize>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PositivityWitness {
    /// Level of the descent at which the gap was found.
    pub level: usize,
    pub degree: usize,
    pub element: Option<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DepthReport {
    pub depth: usize,
    pub dim: usize,
    pub descent_chain: Vec<DescentStep>,
    pub positivity_witness: Option<PositivityWitness>,
    /// Whether depth 0 was cross-checked against the quotient (a positive
    /// depth there would force a regular initial form).
    pub sally_checked: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct XiReport {
    /// `(n, depth G_(I^n))` in the order computed.
    pub per_n: Vec<(usize, usize)>,
    pub value: Option<usize>,
    pub window: usize,
    /// Powers below this index are reported but not counted towards the
    /// window: their closures may still differ from the powers.
    pub window_start: usize,
    pub max_power: usize,
    pub estimate: bool,
}

/// Depth of `G_I(A/Q)` with the descent data.
pub fn depth_assoc_graded<F: Field>(cache: &Arc<FiltrationCache<F>>) -> Result<DepthReport> {
    depth_with(cache, true)
}

/// As [`depth_assoc_graded`]; `sally` enables the quotient cross-check when
/// the depth is zero at the top level.
pub fn depth_with<F: Field>(cache: &Arc<FiltrationCache<F>>, sally: bool) -> Result<DepthReport> {
    let mut chain = Vec::new();
    let mut cur = cache.clone();
    let mut level = 0;
    loop {
        if cur.dim() == 0 {
            return Ok(DepthReport {
                depth: level,
                dim: cache.dim(),
                descent_chain: chain,
                positivity_witness: None,
                sally_checked: false,
            });
        }
        let gap = cur.first_closure_gap()?;
        let cert = cur.superficial()?;
        let b = cur.b_polynomial(&cert)?;
        if let Some(n) = gap {
            if b.is_empty() {
                return Err(Error::CriteriaDisagree(format!(
                    "closure({n}) differs from the power but b = 0 for {}",
                    cert.element
                )));
            }
            chain.push(DescentStep { element: cert.element.to_string(), b_poly: b, b_zero: false, closure_gap: Some(n) });
            let mut sally_checked = false;
            if sally && level == 0 && cur.dim() >= 2 {
                let child = cert.quotient();
                if child.first_closure_gap()?.is_none() {
                    return Err(Error::CriteriaDisagree(format!(
                        "the quotient by {} has positive depth while b != 0",
                        cert.element
                    )));
                }
                sally_checked = true;
            }
            return Ok(DepthReport {
                depth: level,
                dim: cache.dim(),
                descent_chain: chain,
                positivity_witness: Some(PositivityWitness {
                    level,
                    degree: n,
                    element: cur.closure(n)?.witness.as_ref().map(|w| w.to_string()),
                }),
                sally_checked,
            });
        }
        let (cert, b) = if b.is_empty() { (cert, b) } else { regular_element(&cur)? };
        chain.push(DescentStep { element: cert.element.to_string(), b_poly: b, b_zero: true, closure_gap: None });
        cur = cert.quotient().clone();
        level += 1;
    }
}

/// With all closures trivial every superficial element has `b = 0`; looks
/// for one among fresh draws.
fn regular_element<F: Field>(cache: &Arc<FiltrationCache<F>>) -> Result<(Arc<SuperficialCertificate<F>>, Vec<u64>)> {
    let p = cache.params();
    for t in 1..=p.trials {
        let cert = cache.find_superficial(p.trials, p.window, p.seed.wrapping_add(t as u64))?;
        let b = cache.b_polynomial(&cert)?;
        if b.is_empty() {
            return Ok((cert, b));
        }
    }
    Err(Error::CriteriaDisagree(format!(
        "all closures equal the powers but no superficial element with b = 0 in {} draws",
        p.trials
    )))
}

/// Depth of `G_(I^n)` for `n = 1, 2, ...` until `window` consecutive
/// powers from the Ratliff-Rush stabilization index on share a value.
pub fn xi_estimate<F: Field>(cache: &Arc<FiltrationCache<F>>, max_power: usize, window: usize) -> Result<XiReport> {
    let start = cache.closure_bound()?;
    let window = window.max(1);
    let mut per_n = Vec::new();
    let mut value = None;
    for n in 1..=max_power {
        let d = depth_with(&cache.power_filtration(n)?, false)?.depth;
        per_n.push((n, d));
        let counted: Vec<usize> = per_n.iter().filter(|(m, _)| *m >= start).map(|(_, d)| *d).collect();
        if counted.len() >= window && counted[counted.len() - window..].iter().all(|v| *v == d) {
            value = Some(d);
            break;
        }
    }
    Ok(XiReport { per_n, value, window, window_start: start, max_power, estimate: true })
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
    fn complete_intersection_is_cohen_macaulay() {
        let c = cache(&["x", "y"], "x^2, y^2");
        let d = depth_assoc_graded(&c).unwrap();
        assert_eq!(d.depth, 2);
        assert!(d.descent_chain.iter().all(|s| s.b_zero));
        assert!(d.positivity_witness.is_none());
    }

    #[test]
    fn maximal_ideal_xi_is_the_dimension() {
        let c = cache(&["x", "y"], "x, y");
        let xi = xi_estimate(&c, 6, 2).unwrap();
        assert_eq!(xi.value, Some(2));
        assert_eq!(xi.per_n, vec![(1, 2), (2, 2)]);
    }

    #[test]
    fn gap_gives_depth_zero_with_witness() {
        let c = cache(&["x", "y"], "x^4, x^3*y, x*y^3, y^4");
        let d = depth_assoc_graded(&c).unwrap();
        assert_eq!(d.depth, 0);
        let w = d.positivity_witness.unwrap();
        assert_eq!(w.degree, 1);
        assert!(d.sally_checked);
    }
}
