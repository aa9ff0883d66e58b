use std::sync::Arc;

use proptest::prelude::*;
use rrfilt_core::parse::{parse_polynomial, parse_polynomial_list};
use rrfilt_core::{Field, Ideal, MonomialOrder, Polynomial, PrimeField, Rationals, Ring};

const VARS: [&str; 3] = ["x", "y", "z"];

fn qq(order: MonomialOrder) -> Arc<Ring<Rationals>> {
    Ring::new(&VARS, Rationals, order).unwrap()
}

fn term_text(c: i64, e: &[u32]) -> String {
    let mut parts = vec![format!("({c})")];
    for (v, k) in VARS.iter().zip(e) {
        if *k > 0 {
            parts.push(format!("{v}^{k}"));
        }
    }
    parts.join("*")
}

fn poly_text(terms: &[(i64, Vec<u32>)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    terms.iter().map(|(c, e)| term_text(*c, e)).collect::<Vec<_>>().join(" + ")
}

fn terms(max_exp: u32, max_len: usize) -> impl Strategy<Value = Vec<(i64, Vec<u32>)>> {
    prop::collection::vec((-9i64..=9, prop::collection::vec(0..=max_exp, 3)), 0..=max_len)
}

/// An m-primary ideal of `QQ[x,y,z]` given as text: pure powers plus a few
/// integer polynomials.
fn primary_ideal() -> impl Strategy<Value = String> {
    (prop::collection::vec(1u32..=4, 3), prop::collection::vec(terms(3, 3), 0..=2)).prop_map(|(pp, extra)| {
        let mut gens: Vec<String> = VARS.iter().zip(&pp).map(|(v, k)| format!("{v}^{k}")).collect();
        gens.extend(extra.iter().map(|t| poly_text(t)));
        gens.join(", ")
    })
}

fn monomial_leads<F: Field>(i: &Ideal<F>) -> Vec<Vec<u32>> {
    let n = i.ring().nvars();
    let mut v: Vec<Vec<u32>> =
        i.groebner().unwrap().leading_monomials().iter().map(|m| m.exponents(n).to_vec()).collect();
    v.sort();
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_laws(f in terms(3, 5), g in terms(3, 5), h in terms(3, 5)) {
        let r = qq(MonomialOrder::DegRevLex);
        let f = parse_polynomial(&r, &poly_text(&f)).unwrap();
        let g = parse_polynomial(&r, &poly_text(&g)).unwrap();
        let h = parse_polynomial(&r, &poly_text(&h)).unwrap();
        prop_assert_eq!(&(&f + &g) * &h, &(&f * &h) + &(&g * &h));
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&(&f - &g) + &g, f);
    }

    #[test]
    fn display_round_trips(f in terms(4, 6)) {
        let r = qq(MonomialOrder::DegRevLex);
        let p = parse_polynomial(&r, &poly_text(&f)).unwrap();
        prop_assert_eq!(parse_polynomial(&r, &p.to_string()).unwrap(), p);
    }

    #[test]
    fn permuted_generators_give_the_same_basis(text in primary_ideal(), rot in 0usize..5) {
        let r = qq(MonomialOrder::DegRevLex);
        let mut gens = parse_polynomial_list(&r, &text).unwrap();
        let a = Ideal::new(&r, gens.clone()).unwrap().groebner_basis().unwrap();
        let k = rot % gens.len();
        gens.rotate_left(k);
        gens.reverse();
        let b = Ideal::new(&r, gens).unwrap().groebner_basis().unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn combinations_of_generators_reduce_to_zero(text in primary_ideal(), mults in prop::collection::vec(terms(2, 3), 5)) {
        let r = qq(MonomialOrder::DegRevLex);
        let gens = parse_polynomial_list(&r, &text).unwrap();
        let i = Ideal::new(&r, gens.clone()).unwrap();
        let mut f = Polynomial::zero(&r);
        for (g, m) in gens.iter().zip(&mults) {
            let m = parse_polynomial(&r, &poly_text(m)).unwrap();
            f = &f + &(&m * g);
        }
        prop_assert!(i.normal_form(&f).unwrap().is_zero());
        prop_assert!(i.contains(&f).unwrap());
        // adding a standard monomial leaves the ideal, unless there is none
        let std = i.standard_monomials().unwrap().unwrap();
        let Some(w) = std.monomials().last().cloned() else {
            return Ok(());
        };
        let g = &f + &Polynomial::monomial(&r, w, Rationals.from_i64(1));
        prop_assert!(!i.contains(&g).unwrap());
    }

    #[test]
    fn colon_membership_matches_products(a in 1u32..=4, b in 1u32..=4, c in 1u32..=3, f in terms(3, 4)) {
        let r = qq(MonomialOrder::DegRevLex);
        let i = Ideal::new(&r, parse_polynomial_list(&r, &format!("x^{a}, y^{b}, z^{c}, x*y*z")).unwrap()).unwrap();
        let j = Ideal::new(&r, parse_polynomial_list(&r, "x + y, z^2").unwrap()).unwrap();
        let colon = i.colon(&j).unwrap();
        let f = parse_polynomial(&r, &poly_text(&f)).unwrap();
        let by_products = j.generators().iter().all(|g| i.contains(&(&f * g)).unwrap());
        prop_assert_eq!(colon.contains(&f).unwrap(), by_products);
    }

    #[test]
    fn colength_does_not_depend_on_the_order(text in primary_ideal()) {
        let grevlex = qq(MonomialOrder::DegRevLex);
        let lex = qq(MonomialOrder::Lex);
        let a = Ideal::new(&grevlex, parse_polynomial_list(&grevlex, &text).unwrap()).unwrap();
        let b = Ideal::new(&lex, parse_polynomial_list(&lex, &text).unwrap()).unwrap();
        prop_assert_eq!(a.colength().unwrap(), b.colength().unwrap());
    }

    #[test]
    fn prime_field_agrees_with_rationals(text in primary_ideal()) {
        // integer input: the two runs can differ only at a pivot divisible by p
        let r = qq(MonomialOrder::DegRevLex);
        let rp = Ring::new(&VARS, PrimeField::new(32003).unwrap(), MonomialOrder::DegRevLex).unwrap();
        let a = Ideal::new(&r, parse_polynomial_list(&r, &text).unwrap()).unwrap();
        let b = Ideal::new(&rp, parse_polynomial_list(&rp, &text).unwrap()).unwrap();
        prop_assert_eq!(a.colength().unwrap(), b.colength().unwrap());
        prop_assert_eq!(monomial_leads(&a), monomial_leads(&b));
    }
}

#[test]
fn colength_of_pure_power_pairs() {
    let r = Ring::new(&["x", "y"], Rationals, MonomialOrder::DegRevLex).unwrap();
    for a in 1..=5 {
        for b in 1..=5 {
            let i = Ideal::new(&r, parse_polynomial_list(&r, &format!("x^{a}, y^{b}")).unwrap()).unwrap();
            // brute force: monomials x^i y^j outside the ideal
            let grid = (0..a).flat_map(|i| (0..b).map(move |j| (i, j))).count();
            assert_eq!(i.colength().unwrap(), Some(grid));
        }
    }
}
