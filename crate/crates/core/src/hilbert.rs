//! Hilbert-Samuel functions, h-polynomials and Hilbert coefficients of the
//! `I`-adic and Ratliff-Rush filtrations, σ-invariants and `χ₁`.
//!
//! All quantities are integers; identities between them are checked
//! exactly and a mismatch is reported as [`Error::IdentityFailed`].

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::filtration::{FiltrationCache, SuperficialCertificate};
use crate::reductions::{self, ReductionCertificate};

/// h-polynomial and Hilbert coefficients of a filtration.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct HilbertReport {
    pub dim: usize,
    /// `λ(A/F_(n+1))` for `n = 0..=N`.
    pub hs_values: Vec<usize>,
    /// Coefficients, lowest degree first.
    pub h_poly: Vec<i64>,
    /// `e_0, ..., e_(dim+1)`.
    pub e: Vec<i64>,
    pub postulation_index: usize,
    /// Number of vanishing candidate coefficients past the last nonzero one.
    pub certified_window: usize,
    /// `λ(A/J)` for the minimal reduction used as the `e_0` certificate.
    pub reduction_colength: Option<usize>,
}

/// The Ratliff-Rush counterpart of [`HilbertReport`] with the identities
/// linking the two.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RRHilbertReport {
    pub tilde: HilbertReport,
    pub r_poly: Vec<u64>,
    /// `e_(r+1) = ẽ_(r+1) + (-1)^(r+1) r(1)`.
    pub e_next: i64,
    pub e_next_tilde: i64,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SigmaReport {
    pub reduction: Vec<String>,
    pub sigma: Vec<i64>,
    pub chi1: i64,
    /// `λ(closure(1)/I)`.
    pub closure_gap: i64,
    pub chi1_inequality: bool,
    pub chi1_equality: bool,
    /// `σ_j = 0` for every `j >= 1`.
    pub sigma_tail_vanishes: bool,
    /// `ẽ_k` from the σ-sum for `k = 1..=r+1`.
    pub e_tilde_from_sigma: Vec<i64>,
    pub e_tilde: Vec<i64>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct IdentityReport {
    pub element: String,
    pub h: Vec<i64>,
    pub h_quotient: Vec<i64>,
    pub b_poly: Vec<u64>,
    pub holds: bool,
}

pub fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc as i64
}

/// `λ(A/I^(n+1))` for `n = 0..=max_n`.
pub fn hilbert_samuel<F: Field>(cache: &FiltrationCache<F>, max_n: usize) -> Result<Vec<usize>> {
    (0..=max_n).map(|n| cache.length(n + 1)).collect()
}

/// Coefficients `Σ_j C(j, i) h_j` for `i = 0..=top`.
pub fn coefficients(h: &[i64], top: usize) -> Vec<i64> {
    (0..=top)
        .map(|i| h.iter().enumerate().map(|(j, c)| binomial(j, i) * c).sum())
        .collect()
}

/// `p(1)` for an integer polynomial.
pub fn value_at_one(p: &[i64]) -> i64 {
    p.iter().sum()
}

/// Polynomial product.
pub fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn poly_add(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] += y;
    }
    trim(out)
}

/// `(1 - z)^k`.
pub fn one_minus_z_pow(k: usize) -> Vec<i64> {
    (0..=k)
        .map(|i| if i % 2 == 0 { binomial(k, i) } else { -binomial(k, i) })
        .collect()
}

pub fn trim(mut p: Vec<i64>) -> Vec<i64> {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

/// Reads off the h-polynomial from a length function `len(n) = λ(A/F_n)`.
/// Candidate coefficients are produced until `window` of them vanish in a
/// row; data beyond `max_n + 1` is never requested.
fn h_from_lengths(
    dim: usize,
    window: usize,
    max_n: usize,
    mut len: impl FnMut(usize) -> Result<usize>,
) -> Result<(Vec<i64>, Vec<usize>, usize)> {
    let mut lengths = vec![0usize];
    let mut hilbert = Vec::new();
    let mut h = Vec::new();
    let mut run = 0usize;
    for j in 0..=max_n {
        lengths.push(len(j + 1)?);
        let (a, b) = (lengths[j + 1], lengths[j]);
        if a < b {
            return Err(Error::IdentityFailed(format!("lengths decrease at n = {j}")));
        }
        hilbert.push((a - b) as i64);
        let hj: i64 = (0..=dim.min(j))
            .map(|i| {
                let c = binomial(dim, i) * hilbert[j - i];
                if i % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .sum();
        h.push(hj);
        run = if hj == 0 { run + 1 } else { 0 };
        if run >= window.max(1) {
            let hs = lengths[1..].to_vec();
            return Ok((trim(h), hs, run));
        }
    }
    Err(Error::HilbertUndetermined(max_n))
}

fn report(dim: usize, h: Vec<i64>, hs: Vec<usize>, run: usize, reduction_colength: Option<usize>) -> HilbertReport {
    let e = coefficients(&h, dim + 1);
    HilbertReport {
        dim,
        hs_values: hs,
        postulation_index: h.len().saturating_sub(1),
        h_poly: h,
        e,
        certified_window: run,
        reduction_colength,
    }
}

/// h-polynomial of the `I`-adic filtration, certified by a vanishing window
/// and by `h(1) = λ(A/J)` for a minimal reduction `J`.
pub fn h_polynomial<F: Field>(cache: &Arc<FiltrationCache<F>>) -> Result<HilbertReport> {
    let red = reductions::minimal_reduction(cache)?;
    h_polynomial_with(cache, Some(&red))
}

/// As [`h_polynomial`], with a given reduction as certificate (or none).
pub fn h_polynomial_with<F: Field>(
    cache: &Arc<FiltrationCache<F>>,
    reduction: Option<&ReductionCertificate<F>>,
) -> Result<HilbertReport> {
    let p = cache.params();
    let dim = cache.dim();
    let (h, hs, run) = h_from_lengths(dim, p.window, p.max_n, |n| cache.length(n))?;
    if let Some(red) = reduction {
        if value_at_one(&h) != red.colength as i64 {
            return Err(Error::IdentityFailed(format!(
                "h(1) = {} but the minimal reduction has colength {}",
                value_at_one(&h),
                red.colength
            )));
        }
    }
    Ok(report(dim, h, hs, run, reduction.map(|r| r.colength)))
}

/// `e_0, ..., e_(r+1)` of a certified report.
pub fn hilbert_coefficients(report: &HilbertReport) -> Vec<i64> {
    coefficients(&report.h_poly, report.dim + 1)
}

/// h-polynomial of the Ratliff-Rush filtration. Asserts
/// `h = h̃ + (1-z)^(r+1) r(z)`, `ẽ_i = e_i` for `i <= r` and the relation
/// for `e_(r+1)`.
pub fn rr_hilbert<F: Field>(cache: &Arc<FiltrationCache<F>>, adic: &HilbertReport) -> Result<RRHilbertReport> {
    let p = cache.params();
    let dim = cache.dim();
    let (r_poly, _) = cache.r_polynomial()?;
    let bound = cache.closure_bound()?;
    // closures agree with powers from the bound on, so the data must reach
    // past it for the tail to mean anything
    let max_n = p.max_n.max(bound + p.window + 1);
    let (ht, hs, run) = h_from_lengths(dim, p.window, max_n, |n| Ok(cache.closure(n)?.length))?;
    let tilde = report(dim, ht.clone(), hs, run, adic.reduction_colength);

    let r_signed: Vec<i64> = r_poly.iter().map(|v| *v as i64).collect();
    let rebuilt = poly_add(&ht, &poly_mul(&one_minus_z_pow(dim + 1), &r_signed));
    if rebuilt != adic.h_poly {
        return Err(Error::IdentityFailed(format!(
            "h = {:?} but h~ + (1-z)^(r+1) r = {:?}",
            adic.h_poly, rebuilt
        )));
    }
    for i in 0..=dim {
        if tilde.e[i] != adic.e[i] {
            return Err(Error::IdentityFailed(format!("e~_{i} = {} differs from e_{i} = {}", tilde.e[i], adic.e[i])));
        }
    }
    let r1: i64 = r_signed.iter().sum();
    let sign = if (dim + 1) % 2 == 0 { 1 } else { -1 };
    let e_next = adic.e[dim + 1];
    let e_next_tilde = tilde.e[dim + 1];
    if e_next != e_next_tilde + sign * r1 {
        return Err(Error::IdentityFailed(format!(
            "e_{} = {e_next} but e~_{} + (-1)^{} r(1) = {}",
            dim + 1,
            dim + 1,
            dim + 1,
            e_next_tilde + sign * r1
        )));
    }
    Ok(RRHilbertReport { tilde, r_poly, e_next, e_next_tilde })
}

/// σ-invariants `σ_j = λ(closure(j+1) / J closure(j))` for `dim <= 2`,
/// with the σ-sum formula for `ẽ_k` and the `χ₁` inequality.
pub fn sigma_invariants<F: Field>(
    cache: &Arc<FiltrationCache<F>>,
    red: &ReductionCertificate<F>,
    adic: &HilbertReport,
    rr: &RRHilbertReport,
) -> Result<SigmaReport> {
    let dim = cache.dim();
    if dim == 0 || dim > 2 {
        return Err(Error::Precondition(format!("σ-invariants need dimension 1 or 2, got {dim}")));
    }
    let w = cache.params().window;
    let bound = cache.closure_bound()?.max(red.red);
    let mut sigma = Vec::new();
    let mut run = 0;
    let mut j = 0;
    loop {
        let s = reductions::sigma_term(cache, red, j)?;
        sigma.push(s as i64);
        run = if s == 0 { run + 1 } else { 0 };
        if j >= bound && run >= w {
            break;
        }
        j += 1;
    }
    let sigma = trim(sigma);
    let e_tilde_from_sigma: Vec<i64> = (1..=dim + 1)
        .map(|k| {
            sigma
                .iter()
                .enumerate()
                .filter(|(j, _)| *j + 1 >= k)
                .map(|(j, s)| binomial(j, k - 1) * s)
                .sum()
        })
        .collect();
    let e_tilde: Vec<i64> = rr.tilde.e[1..=dim + 1].to_vec();
    if e_tilde_from_sigma != e_tilde {
        return Err(Error::IdentityFailed(format!(
            "e~_k from σ = {e_tilde_from_sigma:?} but the Ratliff-Rush coefficients are {e_tilde:?}"
        )));
    }
    let len1 = cache.length(1)? as i64;
    let chi1 = adic.e[1] - adic.e[0] + len1;
    let closure_gap = len1 - cache.closure(1)?.length as i64;
    let sigma_tail_vanishes = sigma.iter().skip(1).all(|s| *s == 0);
    let chi1_inequality = chi1 >= closure_gap;
    let chi1_equality = chi1 == closure_gap;
    if !chi1_inequality || chi1_equality != sigma_tail_vanishes {
        return Err(Error::IdentityFailed(format!(
            "χ₁ = {chi1}, λ(closure(1)/I) = {closure_gap}, σ = {sigma:?}"
        )));
    }
    Ok(SigmaReport {
        reduction: red.generators.iter().map(|g| g.to_string()).collect(),
        sigma,
        chi1,
        closure_gap,
        chi1_inequality,
        chi1_equality,
        sigma_tail_vanishes,
        e_tilde_from_sigma,
        e_tilde,
    })
}

/// Checks `h_A = h_(A/x) - (1-z)^r b(z)` and records the outcome in the
/// certificate.
pub fn verify_superficial_identity<F: Field>(
    cache: &Arc<FiltrationCache<F>>,
    cert: &SuperficialCertificate<F>,
) -> Result<IdentityReport> {
    let dim = cache.dim();
    let h = h_polynomial(cache)?.h_poly;
    let quotient = cert.quotient();
    let hq = if quotient.dim() == 0 {
        // zero-dimensional: h is the length of A/I
        h_polynomial_with(quotient, None)?.h_poly
    } else {
        h_polynomial(quotient)?.h_poly
    };
    let b = cache.b_polynomial(cert)?;
    let b_signed: Vec<i64> = b.iter().map(|v| *v as i64).collect();
    let rhs = poly_add(&hq, &poly_mul(&one_minus_z_pow(dim), &b_signed).iter().map(|c| -c).collect::<Vec<_>>());
    let holds = rhs == h;
    let _ = cert.identity_check.set(holds);
    let out = IdentityReport { element: cert.element.to_string(), h, h_quotient: hq, b_poly: b, holds };
    if !holds {
        return Err(Error::NotSuperficial(
            cert.element.to_string(),
            format!("h-identity fails: h = {:?}, h(A/x) = {:?}, b = {:?}", out.h, out.h_quotient, out.b_poly),
        ));
    }
    Ok(out)
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
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(0, 0), 1);
    }

    #[test]
    fn maximal_ideal_has_trivial_h() {
        let c = cache(&["x", "y"], "x, y");
        assert_eq!(hilbert_samuel(&c, 3).unwrap(), vec![1, 3, 6, 10]);
        let h = h_polynomial(&c).unwrap();
        assert_eq!(h.h_poly, vec![1]);
        assert_eq!(h.e, vec![1, 0, 0, 0]);
    }

    #[test]
    fn complete_intersection_has_constant_h() {
        let c = cache(&["x", "y"], "x^2, y^2");
        assert_eq!(hilbert_samuel(&c, 2).unwrap(), vec![4, 12, 24]);
        let h = h_polynomial(&c).unwrap();
        assert_eq!(h.h_poly, vec![4]);
        let rr = rr_hilbert(&c, &h).unwrap();
        assert_eq!(rr.tilde.h_poly, h.h_poly);
        assert!(rr.r_poly.is_empty());
    }

    #[test]
    fn rational_polynomial_helpers() {
        assert_eq!(one_minus_z_pow(2), vec![1, -2, 1]);
        assert_eq!(poly_mul(&[1, 1], &[1, -1]), vec![1, 0, -1]);
        assert_eq!(poly_add(&[1, 2], &[-1, -2]), Vec::<i64>::new());
        // e_i are the Taylor coefficients at 1: h = 5 + 6z^2 - 4z^3 + z^4
        assert_eq!(coefficients(&[5, 0, 6, -4, 1], 3), vec![8, 4, 0, 0]);
    }

    #[test]
    fn undetermined_when_data_runs_out() {
        let err = h_from_lengths(1, 3, 2, |n| Ok(n * n)).unwrap_err();
        assert_eq!(err, Error::HilbertUndetermined(2));
    }
}
