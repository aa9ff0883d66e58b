//! Minimal reductions and reduction numbers.
//!
//! `I^(n+1) = J I^n` is decided by Nakayama: `J I^n + m I^(n+1)` is
//! computed on top of `I^(n+2)` (which it contains) and compared with
//! `I^(n+1)` by length.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::filtration::FiltrationCache;
use crate::hilbert::RRHilbertReport;
use crate::ideal::Ideal;
use crate::poly::Polynomial;

/// A reduction `J` of the filtration's ideal together with its reduction
/// number.
#[derive(Clone, Debug)]
pub struct ReductionCertificate<F: Field> {
    pub generators: Vec<Polynomial<F>>,
    /// `J + Q` where `Q` is the modulus of the ring.
    pub ideal: Ideal<F>,
    pub colength: usize,
    pub red: usize,
    /// `I^(n+1) = J I^n` was checked for `red <= n <= checked_n`.
    pub checked_n: usize,
    /// Reduction numbers of all certified trials, in draw order.
    pub spread: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ReductionSummary {
    pub generators: Vec<String>,
    pub colength: usize,
    pub red: usize,
    pub checked_n: usize,
    pub min_red: Option<usize>,
    pub max_red: Option<usize>,
    pub trials_agree: bool,
}

impl<F: Field> ReductionCertificate<F> {
    pub fn summary(&self) -> ReductionSummary {
        ReductionSummary {
            generators: self.generators.iter().map(|g| g.to_string()).collect(),
            colength: self.colength,
            red: self.red,
            checked_n: self.checked_n,
            min_red: self.spread.iter().min().copied(),
            max_red: self.spread.iter().max().copied(),
            trials_agree: self.spread.windows(2).all(|w| w[0] == w[1]),
        }
    }
}

/// Outcome of the minimal multiplicity test for the Ratliff-Rush graded
/// ring: `closure(j+1) = J closure(j)` for `1 <= j <= checked_up_to`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct MinimalMultiplicityReport {
    pub holds: bool,
    pub first_failure: Option<usize>,
    pub checked_up_to: usize,
    pub sigma: Vec<u64>,
    pub deg_h_tilde: Option<usize>,
}

/// Whether `I^(n+1) = J I^n` in `A/Q`.
pub fn reduces_at<F: Field>(cache: &FiltrationCache<F>, j: &[Polynomial<F>], n: usize) -> Result<bool> {
    let target = cache.length(n + 1)?;
    let next = cache.power(n + 2)?;
    let ring = cache.ring();
    let vars: Vec<Polynomial<F>> = (0..ring.nvars()).map(|i| Polynomial::var(ring, i)).collect();
    let pn1 = cache.power(n + 1)?;
    let lower = next.add_products(&vars, pn1.groebner()?.polys())?;
    let pn = if n == 0 { vec![Polynomial::one(ring)] } else { cache.plain_power(n)?.generators().to_vec() };
    let k = lower.add_products(j, &pn)?;
    let len = k.colength()?.ok_or_else(|| Error::Precondition("reduction test left the m-primary range".into()))?;
    if len < target {
        return Err(Error::IdentityFailed(format!("J I^{n} is not contained in I^{}", n + 1)));
    }
    Ok(len == target)
}

/// Least `n <= n_cap` with `I^(n+1) = J I^n`, or `None`.
fn reduction_number_of<F: Field>(cache: &FiltrationCache<F>, j: &[Polynomial<F>]) -> Result<Option<usize>> {
    for n in 0..=cache.params().n_cap {
        if reduces_at(cache, j, n)? {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

fn certify<F: Field>(cache: &FiltrationCache<F>, j: Vec<Polynomial<F>>) -> Result<Option<ReductionCertificate<F>>> {
    let Some(red) = reduction_number_of(cache, &j)? else {
        return Ok(None);
    };
    // persistence one step further
    if !reduces_at(cache, &j, red + 1)? {
        return Err(Error::IdentityFailed(format!("I^(n+1) = J I^n holds at n = {red} but not at n = {}", red + 1)));
    }
    // Random combinations of generators of different degrees can vanish away
    // from the origin. Adding I^(red+1), which lies in J near the origin,
    // removes those points and leaves the local colength.
    let ideal = cache.power(red + 1)?.add_elements(&j)?;
    let Some(colength) = ideal.colength()? else {
        return Ok(None);
    };
    Ok(Some(ReductionCertificate { generators: j, ideal, colength, red, checked_n: red + 1, spread: vec![red] }))
}

/// Minimal reduction drawn with the cache's parameters. Cached.
pub fn minimal_reduction<F: Field>(cache: &Arc<FiltrationCache<F>>) -> Result<Arc<ReductionCertificate<F>>> {
    cache
        .reduction_slot()
        .get_or_init(|| {
            let p = cache.params();
            minimal_reduction_with(cache, p.trials, p.seed).map(Arc::new)
        })
        .clone()
}

/// Draws `trials` reductions generated by `dim` random combinations of the
/// generators and keeps one with the least reduction number.
pub fn minimal_reduction_with<F: Field>(
    cache: &Arc<FiltrationCache<F>>,
    trials: usize,
    seed: u64,
) -> Result<ReductionCertificate<F>> {
    let dim = cache.dim();
    let mut best: Option<ReductionCertificate<F>> = None;
    let mut spread = Vec::new();
    let draws: Vec<Vec<Polynomial<F>>> = if dim == 0 {
        // the empty ideal is the only candidate
        vec![Vec::new()]
    } else {
        cache.candidates(seed, "reduction", trials * dim).chunks(dim).map(|c| c.to_vec()).collect()
    };
    for j in draws {
        if let Some(cert) = certify(cache, j)? {
            spread.push(cert.red);
            if best.as_ref().is_none_or(|b| cert.red < b.red) {
                best = Some(cert);
            }
        }
    }
    let mut best = best.ok_or(Error::NoReduction { trials, cap: cache.params().n_cap })?;
    best.spread = spread;
    Ok(best)
}

/// Reduction number of `I` with respect to a given `J ⊆ I`.
pub fn reduction_number<F: Field>(cache: &FiltrationCache<F>, j: &[Polynomial<F>]) -> Result<ReductionCertificate<F>> {
    for g in j {
        if !cache.base().contains(g)? {
            return Err(Error::Precondition(format!("{g} is not an element of the ideal")));
        }
    }
    if j.len() != cache.dim() {
        return Err(Error::Precondition(format!("a minimal reduction has {} generators", cache.dim())));
    }
    certify(cache, j.to_vec())?.ok_or(Error::NoReduction { trials: 1, cap: cache.params().n_cap })
}

/// Reduction number of `I^n`.
pub fn reduction_number_of_power<F: Field>(cache: &Arc<FiltrationCache<F>>, n: usize) -> Result<ReductionCertificate<F>> {
    let p = cache.power_filtration(n)?;
    let params = p.params();
    minimal_reduction_with(&p, params.trials, params.seed)
}

/// `σ_j = λ(closure(j+1) / J closure(j))`.
pub fn sigma_term<F: Field>(cache: &Arc<FiltrationCache<F>>, red: &ReductionCertificate<F>, j: usize) -> Result<u64> {
    let upper = cache.closure(j + 1)?.length;
    let lower_bound = cache.power(j + red.red + 1)?;
    let cl: Vec<Polynomial<F>> = if j == 0 {
        vec![Polynomial::one(cache.ring())]
    } else {
        cache.closure(j)?.ideal.groebner()?.polys().to_vec()
    };
    let prod = lower_bound.add_products(&red.generators, &cl)?;
    let len = prod.colength()?.unwrap_or(0);
    if len < upper {
        return Err(Error::IdentityFailed(format!("J closure({j}) is not contained in closure({})", j + 1)));
    }
    Ok((len - upper) as u64)
}

/// Tests `closure(j+1) = J closure(j)` for `1 <= j <= max(bound, red)`.
pub fn tilde_minimal_multiplicity<F: Field>(
    cache: &Arc<FiltrationCache<F>>,
    red: &ReductionCertificate<F>,
    rr: Option<&RRHilbertReport>,
) -> Result<MinimalMultiplicityReport> {
    let up_to = cache.closure_bound()?.max(red.red).max(1);
    let mut sigma = Vec::new();
    let mut first_failure = None;
    for j in 1..=up_to {
        let s = sigma_term(cache, red, j)?;
        if s != 0 && first_failure.is_none() {
            first_failure = Some(j);
        }
        sigma.push(s);
    }
    Ok(MinimalMultiplicityReport {
        holds: first_failure.is_none(),
        first_failure,
        checked_up_to: up_to,
        sigma,
        deg_h_tilde: rr.map(|r| r.tilde.h_poly.len().saturating_sub(1)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::Params;
    use crate::{parse::parse_polynomial_list, MonomialOrder, Rationals, Ring};

    fn cache(vars: &[&str], gens: &str) -> Arc<FiltrationCache<Rationals>> {
        let r = Ring::new(vars, Rationals, MonomialOrder::DegRevLex).unwrap();
        let i = Ideal::new(&r, parse_polynomial_list(&r, gens).unwrap()).unwrap();
        FiltrationCache::new(&i, Params::default()).unwrap()
    }

    #[test]
    fn maximal_ideal_is_its_own_reduction() {
        let c = cache(&["x", "y"], "x, y");
        let r = minimal_reduction(&c).unwrap();
        assert_eq!(r.red, 0);
        assert_eq!(r.colength, 1);
    }

    #[test]
    fn given_reduction_of_a_non_closed_ideal() {
        // (x^2, y^2) is a reduction of m^2 with reduction number 1
        let c = cache(&["x", "y"], "x^2, x*y, y^2");
        let r = c.ring().clone();
        let j = parse_polynomial_list(&r, "x^2, y^2").unwrap();
        let cert = reduction_number(&c, &j).unwrap();
        assert_eq!(cert.red, 1);
        assert_eq!(cert.colength, 4);
        assert!(!reduces_at(&c, &j, 0).unwrap());
    }

    #[test]
    fn colength_of_a_mixed_degree_reduction_is_local() {
        // e(x^5, xy, y^2) = 7, read off the Newton polygon
        let c = cache(&["x", "y"], "x^5, y^2, x*y");
        let j = parse_polynomial_list(c.ring(), "x^5 + y^2 + x*y, x^5 - y^2 + 2*x*y").unwrap();
        let cert = reduction_number(&c, &j).unwrap();
        assert_eq!(cert.colength, 7);
        assert_eq!(minimal_reduction(&c).unwrap().colength, 7);
    }

    #[test]
    fn foreign_reduction_is_rejected() {
        let c = cache(&["x", "y"], "x^2, y^2");
        let j = parse_polynomial_list(c.ring(), "x, y^2").unwrap();
        assert!(reduction_number(&c, &j).is_err());
    }

    #[test]
    fn trial_spread_is_reported() {
        let c = cache(&["x", "y"], "x^3, x*y, y^3");
        let r = minimal_reduction(&c).unwrap();
        let s = r.summary();
        assert_eq!(s.min_red, Some(r.red));
        assert_eq!(r.spread.len(), c.params().trials);
        assert!(s.trials_agree);
    }
}
