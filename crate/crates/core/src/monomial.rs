//! Power products and monomial orders.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum number of variables, including the one auxiliary variable that
/// intersections adjoin.
pub const MAX_VARS: usize = 8;

/// Exponent vector with cached total degree. Unused slots are zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: [u32; MAX_VARS],
    deg: u32,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(i: usize) -> Self {
        let mut m = Self::default();
        m.exps[i] = 1;
        m.deg = 1;
        m
    }

    pub fn from_exponents(exps: &[u32]) -> Result<Self> {
        if exps.len() > MAX_VARS {
            return Err(Error::InvalidRing(format!("at most {MAX_VARS} variables")));
        }
        let mut m = Self::default();
        let mut deg: u32 = 0;
        for (slot, &e) in m.exps.iter_mut().zip(exps) {
            *slot = e;
            deg = deg.checked_add(e).ok_or(Error::ExponentOverflow)?;
        }
        m.deg = deg;
        Ok(m)
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.deg
    }

    #[inline]
    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i]
    }

    pub fn exponents(&self, nvars: usize) -> &[u32] {
        &self.exps[..nvars]
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn checked_mul(&self, other: &Self) -> Option<Self> {
        let mut out = *self;
        for i in 0..MAX_VARS {
            out.exps[i] = out.exps[i].checked_add(other.exps[i])?;
        }
        out.deg = self.deg.checked_add(other.deg)?;
        Some(out)
    }

    /// Product; panics on exponent overflow. Public entry points bound
    /// degrees before multiplying, so this never fires on checked input.
    #[inline]
    pub fn mul(&self, other: &Self) -> Self {
        self.checked_mul(other).expect("exponent overflow")
    }

    pub fn checked_pow(&self, n: u32) -> Option<Self> {
        let mut out = *self;
        for e in out.exps.iter_mut() {
            *e = e.checked_mul(n)?;
        }
        out.deg = self.deg.checked_mul(n)?;
        Some(out)
    }

    #[inline]
    pub fn divides(&self, other: &Self) -> bool {
        self.deg <= other.deg && self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Self) -> Option<Self> {
        if !self.divides(other) {
            return None;
        }
        let mut out = *other;
        for i in 0..MAX_VARS {
            out.exps[i] -= self.exps[i];
        }
        out.deg -= self.deg;
        Some(out)
    }

    pub fn lcm(&self, other: &Self) -> Self {
        let mut out = Self::default();
        let mut deg = 0;
        for i in 0..MAX_VARS {
            out.exps[i] = self.exps[i].max(other.exps[i]);
            deg += out.exps[i];
        }
        out.deg = deg;
        out
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let mut out = Self::default();
        let mut deg = 0;
        for i in 0..MAX_VARS {
            out.exps[i] = self.exps[i].min(other.exps[i]);
            deg += out.exps[i];
        }
        out.deg = deg;
        out
    }

    pub fn is_coprime(&self, other: &Self) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Index of the single variable when this is a pure power `x_i^e`, e ≥ 1.
    pub fn pure_power_var(&self) -> Option<usize> {
        let mut found = None;
        for (i, &e) in self.exps.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }

    /// Bit signature for quick divisibility rejection: `a | b` implies
    /// `sig(a) & !sig(b) == 0`.
    #[inline]
    pub fn signature(&self) -> u64 {
        let mut s = 0u64;
        for (i, &e) in self.exps.iter().enumerate() {
            let k = e.min(8);
            if k > 0 {
                s |= ((1u64 << k) - 1) << (8 * i);
            }
        }
        s
    }

    /// Moves every exponent one slot to the right, freeing slot 0.
    pub(crate) fn shift_right(&self) -> Self {
        let mut out = Self::default();
        for i in (1..MAX_VARS).rev() {
            out.exps[i] = self.exps[i - 1];
        }
        debug_assert_eq!(self.exps[MAX_VARS - 1], 0);
        out.deg = self.deg;
        out
    }

    /// Inverse of [`shift_right`](Self::shift_right); slot 0 must be zero.
    pub(crate) fn shift_left(&self) -> Self {
        debug_assert_eq!(self.exps[0], 0);
        let mut out = Self::default();
        for i in 0..MAX_VARS - 1 {
            out.exps[i] = self.exps[i + 1];
        }
        out.deg = self.deg;
        out
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.exps.iter().rposition(|&e| e > 0).map_or(1, |i| i + 1);
        write!(f, "{:?}", &self.exps[..last])
    }
}

/// Monomial orders. `Elimination { block }` compares the first `block`
/// variables by degrevlex and breaks ties with degrevlex on the rest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MonomialOrder {
    DegRevLex,
    Lex,
    Elimination { block: usize },
}

impl MonomialOrder {
    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match *self {
            MonomialOrder::DegRevLex => degrevlex(a, b, 0, MAX_VARS, a.deg, b.deg),
            MonomialOrder::Lex => a.exps.cmp(&b.exps),
            MonomialOrder::Elimination { block } => {
                let da: u32 = a.exps[..block].iter().sum();
                let db: u32 = b.exps[..block].iter().sum();
                degrevlex(a, b, 0, block, da, db)
                    .then_with(|| degrevlex(a, b, block, MAX_VARS, a.deg - da, b.deg - db))
            }
        }
    }

    /// Whether the order refines total degree (used by selection heuristics).
    pub fn is_graded(&self) -> bool {
        matches!(self, MonomialOrder::DegRevLex)
    }
}

#[inline]
fn degrevlex(a: &Monomial, b: &Monomial, lo: usize, hi: usize, da: u32, db: u32) -> Ordering {
    match da.cmp(&db) {
        Ordering::Equal => {
            for i in (lo..hi).rev() {
                if a.exps[i] != b.exps[i] {
                    return b.exps[i].cmp(&a.exps[i]);
                }
            }
            Ordering::Equal
        }
        o => o,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e).unwrap()
    }

    fn all_monomials(nvars: usize, maxdeg: u32) -> Vec<Monomial> {
        let mut out = vec![];
        let mut cur = vec![0u32; nvars];
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if i == cur.len() {
                out.push(Monomial::from_exponents(cur).unwrap());
                return;
            }
            for e in 0..=left {
                cur[i] = e;
                rec(i + 1, left - e, cur, out);
            }
            cur[i] = 0;
        }
        rec(0, maxdeg, &mut cur, &mut out);
        out
    }

    /// Textbook degrevlex: degree first, then the last differing exponent,
    /// smaller exponent wins.
    fn brute_degrevlex(a: &[u32], b: &[u32]) -> Ordering {
        let da: u32 = a.iter().sum();
        let db: u32 = b.iter().sum();
        if da != db {
            return da.cmp(&db);
        }
        for i in (0..a.len()).rev() {
            if a[i] != b[i] {
                return if a[i] < b[i] { Ordering::Greater } else { Ordering::Less };
            }
        }
        Ordering::Equal
    }

    #[test]
    fn degrevlex_matches_brute_force_up_to_degree_six() {
        let mons = all_monomials(3, 6);
        for a in &mons {
            for b in &mons {
                assert_eq!(
                    MonomialOrder::DegRevLex.cmp(a, b),
                    brute_degrevlex(a.exponents(3), b.exponents(3))
                );
            }
        }
    }

    #[test]
    fn orders_are_multiplicative() {
        let mons = all_monomials(3, 3);
        let orders = [
            MonomialOrder::DegRevLex,
            MonomialOrder::Lex,
            MonomialOrder::Elimination { block: 1 },
        ];
        for o in orders {
            for a in &mons {
                for b in &mons {
                    for c in mons.iter().take(10) {
                        assert_eq!(o.cmp(a, b), o.cmp(&a.mul(c), &b.mul(c)));
                    }
                }
            }
        }
    }

    #[test]
    fn elimination_block_dominates() {
        let o = MonomialOrder::Elimination { block: 1 };
        assert_eq!(o.cmp(&m(&[1, 0, 0]), &m(&[0, 5, 5])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[0, 2, 0]), &m(&[0, 1, 0])), Ordering::Greater);
    }

    #[test]
    fn divisibility_and_signature() {
        let a = m(&[1, 2, 0]);
        let b = m(&[3, 2, 1]);
        assert!(a.divides(&b));
        assert!(!b.divides(&a));
        assert_eq!(a.signature() & !b.signature(), 0);
        assert_eq!(a.quotient_of(&b), Some(m(&[2, 0, 1])));
        assert_eq!(a.lcm(&m(&[0, 3, 1])), m(&[1, 3, 1]));
        assert_eq!(m(&[0, 4, 0]).pure_power_var(), Some(1));
        assert_eq!(a.pure_power_var(), None);
    }

    #[test]
    fn overflow_is_detected() {
        let big = m(&[u32::MAX]);
        assert!(big.checked_mul(&m(&[1])).is_none());
        assert!(Monomial::from_exponents(&[u32::MAX, 1]).is_err());
    }
}
