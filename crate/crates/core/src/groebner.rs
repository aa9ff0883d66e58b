//! Multivariate division and Buchberger's algorithm.
//!
//! Pairs are selected by the normal strategy (least lcm first) and pruned
//! with the Gebauer-Moeller installation of Buchberger's two criteria.
//! Intermediate basis elements are kept in the field's normal scaling, so
//! over the rationals all arithmetic stays integral until the final
//! monic interreduction.

use std::cmp::Ordering;
use std::sync::Arc;

use crate::error::Result;
use crate::field::Field;
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{merge_combine, Polynomial, Term};
use crate::ring::Ring;

struct Divisor<'a, F: Field> {
    lead: Monomial,
    sig: u64,
    poly: &'a [Term<F>],
}

fn divisors<F: Field>(basis: &[Polynomial<F>]) -> Vec<Divisor<'_, F>> {
    basis
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| {
            let lead = *g.leading_monomial().unwrap();
            Divisor { lead, sig: lead.signature(), poly: g.terms() }
        })
        .collect()
}

/// Full reduction of `terms`. Returns the remainder up to a nonzero scalar
/// (the scalar is irrelevant for ideal membership and for Buchberger).
fn reduce_terms<F: Field>(
    field: &F,
    order: MonomialOrder,
    mut terms: Vec<Term<F>>,
    divs: &[Divisor<'_, F>],
) -> Vec<Term<F>> {
    let mut pos = 0usize;
    let mut steps = 0usize;
    while pos < terms.len() {
        let (m, c) = &terms[pos];
        let sig = m.signature();
        let hit = divs.iter().find(|d| d.sig & !sig == 0 && d.lead.divides(m));
        match hit {
            None => pos += 1,
            Some(d) => {
                let q = d.lead.quotient_of(m).expect("divides");
                let (a, b) = field.cancel_pair(&d.poly[0].1, c);
                let alpha = if field.is_one(&a) { None } else { Some(&a) };
                terms = merge_combine(field, order, &terms, alpha, d.poly, &b, Some(&q));
                steps += 1;
                if steps % 16 == 0 {
                    let s = field.normalizer(terms.iter().map(|t| &t.1));
                    if !field.is_one(&s) {
                        for t in terms.iter_mut() {
                            t.1 = field.mul(&t.1, &s);
                        }
                    }
                }
            }
        }
    }
    terms
}

/// Normal form of `f` with respect to `basis` in the ring's order: no term
/// of the result is divisible by a leading monomial of the basis, and
/// `f - result` lies in the ideal generated by `basis`. The result is
/// scaled back so that it is an honest remainder (not a multiple of one).
pub fn reduce<F: Field>(f: &Polynomial<F>, basis: &[Polynomial<F>]) -> Polynomial<F> {
    let ring = f.ring();
    let field = ring.field();
    let order = ring.order();
    // division by monic leaders keeps the remainder exact
    let monic: Vec<Polynomial<F>> = basis.iter().filter(|g| !g.is_zero()).map(|g| g.monic()).collect();
    let divs = divisors(&monic);
    let mut terms = f.terms().to_vec();
    let mut out: Vec<Term<F>> = Vec::new();
    while let Some((m, c)) = terms.first().cloned() {
        let sig = m.signature();
        match divs.iter().find(|d| d.sig & !sig == 0 && d.lead.divides(&m)) {
            Some(d) => {
                let q = d.lead.quotient_of(&m).expect("divides");
                terms = merge_combine(field, order, &terms, None, d.poly, &c, Some(&q));
            }
            None => {
                out.push((m, c));
                terms.remove(0);
            }
        }
    }
    Polynomial::from_sorted(ring, out)
}

/// Reduced Groebner basis (monic, sorted by increasing leading monomial).
pub fn groebner_basis<F: Field>(ring: &Arc<Ring<F>>, gens: &[Polynomial<F>]) -> Result<Vec<Polynomial<F>>> {
    let field = ring.field();
    let order = ring.order();
    let mut input: Vec<Polynomial<F>> = gens.iter().filter(|g| !g.is_zero()).map(|g| g.normalized()).collect();
    if input.is_empty() {
        return Ok(Vec::new());
    }
    if input.iter().any(|g| g.is_constant()) {
        return Ok(vec![Polynomial::one(ring)]);
    }
    if input.iter().all(|g| g.is_monomial()) {
        let leads: Vec<Monomial> = input.iter().map(|g| *g.leading_monomial().unwrap()).collect();
        return Ok(minimal_monomials(order, leads)
            .into_iter()
            .map(|m| Polynomial::monomial(ring, m, field.one()))
            .collect());
    }
    // process generators in increasing order so that early pairs are cheap
    input.sort_by(|a, b| order.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));

    let mut basis: Vec<Polynomial<F>> = Vec::new();
    let mut active: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    for g in input {
        let divs = divisors_active(&basis, &active);
        let r = reduce_terms(field, order, g.into_terms(), &divs);
        if r.is_empty() {
            continue;
        }
        let r = Polynomial::from_sorted(ring, r).normalized();
        if r.is_constant() {
            return Ok(vec![Polynomial::one(ring)]);
        }
        add_to_basis(&mut basis, &mut active, &mut pairs, r);
    }

    while let Some(idx) = select_pair(order, &pairs) {
        let p = pairs.swap_remove(idx);
        let s = s_polynomial(field, order, &basis[p.i], &basis[p.j], &p.lcm)?;
        let divs = divisors_active(&basis, &active);
        let r = reduce_terms(field, order, s, &divs);
        if r.is_empty() {
            continue;
        }
        let r = Polynomial::from_sorted(ring, r).normalized();
        if r.is_constant() {
            return Ok(vec![Polynomial::one(ring)]);
        }
        add_to_basis(&mut basis, &mut active, &mut pairs, r);
    }

    Ok(interreduce(ring, active_polys(&basis, &active)))
}

fn active_polys<F: Field>(basis: &[Polynomial<F>], active: &[bool]) -> Vec<Polynomial<F>> {
    basis.iter().zip(active).filter(|(_, a)| **a).map(|(g, _)| g.clone()).collect()
}

fn divisors_active<'a, F: Field>(basis: &'a [Polynomial<F>], active: &[bool]) -> Vec<Divisor<'a, F>> {
    basis
        .iter()
        .zip(active)
        .filter(|(_, a)| **a)
        .map(|(g, _)| {
            let lead = *g.leading_monomial().unwrap();
            Divisor { lead, sig: lead.signature(), poly: g.terms() }
        })
        .collect()
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

fn select_pair(order: MonomialOrder, pairs: &[Pair]) -> Option<usize> {
    // normal strategy: least lcm; ties by degree then by creation indices
    (0..pairs.len()).min_by(|&a, &b| {
        let (pa, pb) = (&pairs[a], &pairs[b]);
        pa.lcm
            .degree()
            .cmp(&pb.lcm.degree())
            .then_with(|| order.cmp(&pa.lcm, &pb.lcm))
            .then_with(|| (pa.j, pa.i).cmp(&(pb.j, pb.i)))
    })
}

fn s_polynomial<F: Field>(
    field: &F,
    order: MonomialOrder,
    f: &Polynomial<F>,
    g: &Polynomial<F>,
    lcm: &Monomial,
) -> Result<Vec<Term<F>>> {
    let lf = f.leading_monomial().unwrap();
    let lg = g.leading_monomial().unwrap();
    let uf = lf.quotient_of(lcm).expect("lcm");
    let ug = lg.quotient_of(lcm).expect("lcm");
    let (a, b) = field.cancel_pair(g.leading_coeff().unwrap(), f.leading_coeff().unwrap());
    // a*uf*f - b*ug*g, with the leading terms cancelling
    let fu = f.mul_monomial(&uf)?;
    let alpha = if field.is_one(&a) { None } else { Some(&a) };
    Ok(merge_combine(field, order, fu.terms(), alpha, g.terms(), &b, Some(&ug)))
}

/// Gebauer-Moeller update after adding `h` to the basis.
fn add_to_basis<F: Field>(
    basis: &mut Vec<Polynomial<F>>,
    active: &mut Vec<bool>,
    pairs: &mut Vec<Pair>,
    h: Polynomial<F>,
) {
    let k = basis.len();
    let lh = *h.leading_monomial().unwrap();

    // candidate pairs (i, k) for active i
    let mut cand: Vec<(Pair, bool)> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        if !active[i] {
            continue;
        }
        let lg = g.leading_monomial().unwrap();
        cand.push((Pair { i, j: k, lcm: lg.lcm(&lh) }, lg.is_coprime(&lh)));
    }

    // criterion M: drop a pair whose lcm is a proper multiple of another's
    let mut keep: Vec<bool> = vec![true; cand.len()];
    for a in 0..cand.len() {
        for b in 0..cand.len() {
            if a != b && keep[b] && cand[b].0.lcm.divides(&cand[a].0.lcm) && cand[b].0.lcm != cand[a].0.lcm {
                keep[a] = false;
                break;
            }
        }
    }
    // criterion F: among equal lcms keep one, preferring a coprime one
    let mut chosen: Vec<usize> = Vec::new();
    for a in 0..cand.len() {
        if !keep[a] {
            continue;
        }
        match chosen.iter().position(|&c| cand[c].0.lcm == cand[a].0.lcm) {
            Some(p) => {
                if cand[a].1 && !cand[chosen[p]].1 {
                    chosen[p] = a;
                }
            }
            None => chosen.push(a),
        }
    }
    // product criterion
    let new_pairs: Vec<Pair> = chosen.into_iter().filter(|&a| !cand[a].1).map(|a| cand[a].0.clone()).collect();

    // criterion B on old pairs
    pairs.retain(|p| {
        if !lh.divides(&p.lcm) {
            return true;
        }
        let li = basis[p.i].leading_monomial().unwrap().lcm(&lh);
        let lj = basis[p.j].leading_monomial().unwrap().lcm(&lh);
        li == p.lcm || lj == p.lcm
    });
    pairs.extend(new_pairs);

    // elements whose leader is divisible by lh become redundant as basis
    // members but stay available for pending pairs
    for (i, g) in basis.iter().enumerate() {
        if active[i] && lh.divides(g.leading_monomial().unwrap()) {
            active[i] = false;
        }
    }
    basis.push(h);
    active.push(true);
}

/// Minimal generators of a monomial ideal, sorted increasingly.
pub fn minimal_monomials(order: MonomialOrder, mut monos: Vec<Monomial>) -> Vec<Monomial> {
    monos.sort_by(|a, b| order.cmp(a, b));
    monos.dedup();
    let mut out: Vec<Monomial> = Vec::with_capacity(monos.len());
    for m in monos {
        let sig = m.signature();
        if !out.iter().any(|o| o.signature() & !sig == 0 && o.divides(&m)) {
            out.push(m);
        }
    }
    out
}

/// Turns a Groebner basis into the reduced one.
fn interreduce<F: Field>(ring: &Arc<Ring<F>>, basis: Vec<Polynomial<F>>) -> Vec<Polynomial<F>> {
    let order = ring.order();
    let field = ring.field();
    let leads: Vec<Monomial> = basis.iter().map(|g| *g.leading_monomial().unwrap()).collect();
    let kept: Vec<Polynomial<F>> = minimal_monomials(order, leads.clone())
        .iter()
        .map(|m| basis[leads.iter().position(|l| l == m).unwrap()].clone())
        .collect();
    let mut out = Vec::with_capacity(kept.len());
    for (i, g) in kept.iter().enumerate() {
        let others: Vec<Polynomial<F>> = kept.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
        let divs = divisors(&others);
        let terms = reduce_tail(field, order, g.terms().to_vec(), &divs);
        out.push(Polynomial::from_sorted(ring, terms).monic());
    }
    out
}

/// Reduces every term but the leader, which no other minimal leader divides.
fn reduce_tail<F: Field>(
    field: &F,
    order: MonomialOrder,
    mut terms: Vec<Term<F>>,
    divs: &[Divisor<'_, F>],
) -> Vec<Term<F>> {
    let mut pos = 1usize;
    while pos < terms.len() {
        let (m, c) = &terms[pos];
        let sig = m.signature();
        match divs.iter().find(|d| d.sig & !sig == 0 && d.lead.divides(m)) {
            None => pos += 1,
            Some(d) => {
                let q = d.lead.quotient_of(m).expect("divides");
                let (a, b) = field.cancel_pair(&d.poly[0].1, c);
                let alpha = if field.is_one(&a) { None } else { Some(&a) };
                terms = merge_combine(field, order, &terms, alpha, d.poly, &b, Some(&q));
            }
        }
    }
    terms
}

pub(crate) fn cmp_leading<F: Field>(order: MonomialOrder, a: &Polynomial<F>, b: &Polynomial<F>) -> Ordering {
    order.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::parse::{parse_polynomial, parse_polynomial_list};

    fn ring(vars: &[&str], order: MonomialOrder) -> Arc<Ring<Rationals>> {
        Ring::new(vars, Rationals, order).unwrap()
    }

    #[test]
    fn one_division_step() {
        let r = ring(&["x", "y"], MonomialOrder::DegRevLex);
        let f = parse_polynomial(&r, "x^2*y").unwrap();
        let g = parse_polynomial(&r, "x^2 - y").unwrap();
        assert_eq!(reduce(&f, &[g]), parse_polynomial(&r, "y^2").unwrap());
    }

    #[test]
    fn lex_cube_sum_reduces_to_zero() {
        let r = ring(&["x", "y"], MonomialOrder::Lex);
        let f = parse_polynomial(&r, "x^3 + y^3").unwrap();
        let g = parse_polynomial(&r, "x + y").unwrap();
        assert!(reduce(&f, &[g]).is_zero());
    }

    #[test]
    fn hand_buchberger_run() {
        let r = ring(&["x", "y"], MonomialOrder::DegRevLex);
        let gens = parse_polynomial_list(&r, "x^2 - y^2, x*y").unwrap();
        let gb = groebner_basis(&r, &gens).unwrap();
        let expected = parse_polynomial_list(&r, "x*y, x^2 - y^2, y^3").unwrap();
        let mut expected = expected;
        expected.sort_by(|a, b| cmp_leading(r.order(), a, b));
        assert_eq!(gb, expected);
    }

    #[test]
    fn generators_reduce_to_zero() {
        let r = ring(&["x", "y", "z"], MonomialOrder::DegRevLex);
        let gens = parse_polynomial_list(&r, "x^2 - y^2, y^2 - z^2, x*y, x*z, y*z").unwrap();
        let gb = groebner_basis(&r, &gens).unwrap();
        for g in &gens {
            assert!(reduce(g, &gb).is_zero());
        }
    }

    #[test]
    fn permuted_generators_give_same_basis() {
        let r = ring(&["x", "y", "z"], MonomialOrder::DegRevLex);
        let mut gens = parse_polynomial_list(&r, "x^3 - y*z, y^2 - x*z + 1, z^3 - x").unwrap();
        let a = groebner_basis(&r, &gens).unwrap();
        gens.reverse();
        let b = groebner_basis(&r, &gens).unwrap();
        assert_eq!(a, b);
        gens.swap(0, 1);
        assert_eq!(a, groebner_basis(&r, &gens).unwrap());
    }

    #[test]
    fn unit_ideal_collapses() {
        let r = ring(&["x", "y"], MonomialOrder::DegRevLex);
        let gens = parse_polynomial_list(&r, "x*y - 1, x").unwrap();
        assert_eq!(groebner_basis(&r, &gens).unwrap(), vec![Polynomial::one(&r)]);
    }
}
