use std::sync::Arc;

use proptest::prelude::*;
use rrfilt_core::filtration::{FiltrationCache, Params};
use rrfilt_core::hilbert::{h_polynomial, h_polynomial_with, hilbert_coefficients, hilbert_samuel};
use rrfilt_core::parse::parse_polynomial_list;
use rrfilt_core::reductions::{minimal_reduction, minimal_reduction_with};
use rrfilt_core::{Ideal, MonomialOrder, Rationals, Ring};

/// m-primary monomial ideal of `QQ[x,y]` with generators of degree at most
/// six and at most five generators.
fn monomial_ideal() -> impl Strategy<Value = String> {
    (1u32..=6, 1u32..=6, prop::collection::vec((0u32..6, 0u32..6), 0..=3)).prop_map(|(a, b, extra)| {
        let mut gens = vec![format!("x^{a}"), format!("y^{b}")];
        for (i, j) in extra {
            if i + j > 0 && i + j <= 6 && i < a && j < b {
                gens.push(format!("x^{i}*y^{j}"));
            }
        }
        gens.join(", ")
    })
}

fn cache(text: &str) -> Arc<FiltrationCache<Rationals>> {
    let r = Ring::new(&["x", "y"], Rationals, MonomialOrder::DegRevLex).unwrap();
    let i = Ideal::new(&r, parse_polynomial_list(&r, text).unwrap()).unwrap();
    FiltrationCache::new(&i, Params::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn closures_contain_powers_and_absorb_products(text in monomial_ideal()) {
        let c = cache(&text);
        let bound = c.closure_bound().unwrap();
        let gens = c.base_generators().to_vec();
        for n in 1..=bound + 1 {
            let cl = c.closure(n).unwrap();
            prop_assert!(c.power(n).unwrap().is_subset(&cl.ideal).unwrap());
            let basis = cl.ideal.groebner_basis().unwrap();
            prop_assert!(c.closure(n + 1).unwrap().ideal.contains_products(&basis, &gens).unwrap());
            let square = c.plain_power(2).unwrap();
            prop_assert!(c.closure(n + 2).unwrap().ideal.contains_products(&basis, square.generators()).unwrap());
        }
        // closures agree with powers from the bound on
        for n in bound..=bound + 2 {
            prop_assert!(c.closure(n).unwrap().is_trivial());
        }
    }

    #[test]
    fn closure_is_idempotent(text in monomial_ideal(), n in 1usize..=3) {
        let c = cache(&text);
        let cl = c.closure(n).unwrap();
        let again = FiltrationCache::new(&cl.ideal, Params::default()).unwrap();
        let twice = again.closure(1).unwrap();
        prop_assert_eq!(twice.length, cl.length);
        prop_assert!(twice.ideal.equals(&cl.ideal).unwrap());
    }

    #[test]
    fn b_vanishes_exactly_when_top_coefficients_agree(text in monomial_ideal()) {
        let c = cache(&text);
        let cert = c.superficial().unwrap();
        let b = c.b_polynomial(&cert).unwrap();
        let e = h_polynomial(&c).unwrap().e;
        let quotient = h_polynomial_with(cert.quotient(), None).unwrap();
        let eq = hilbert_coefficients(&quotient);
        prop_assert_eq!(b.iter().all(|v| *v == 0), e[2] == eq[2]);
    }

    #[test]
    fn multiplicity_is_the_colength_of_a_reduction(text in monomial_ideal()) {
        let c = cache(&text);
        let h = h_polynomial(&c).unwrap();
        let red = minimal_reduction(&c).unwrap();
        prop_assert_eq!(h.e[0], red.colength as i64);
        prop_assert_eq!(h.h_poly.iter().sum::<i64>(), h.e[0]);
    }

    #[test]
    fn reduction_number_is_stable_across_seeds(text in monomial_ideal()) {
        let c = cache(&text);
        let a = minimal_reduction_with(&c, 3, 1).unwrap();
        let b = minimal_reduction_with(&c, 3, 2).unwrap();
        prop_assert_eq!(a.red, b.red);
        // persistence one step past the reduction number
        prop_assert!(rrfilt_core::reductions::reduces_at(&c, &a.generators, a.red + 1).unwrap());
    }

    #[test]
    fn hilbert_function_is_the_difference_of_lengths(text in monomial_ideal()) {
        let c = cache(&text);
        let hs = hilbert_samuel(&c, 6).unwrap();
        for n in 1..hs.len() {
            let direct = c.length(n + 1).unwrap() - c.length(n).unwrap();
            prop_assert_eq!(hs[n] - hs[n - 1], direct);
        }
    }
}
