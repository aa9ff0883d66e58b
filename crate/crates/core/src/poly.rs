//! Sparse multivariate polynomials over an exact field.
//!
//! Terms are kept sorted in decreasing order with respect to the owning
//! ring's monomial order and never store zero coefficients, so structural
//! equality is ideal-theoretic equality of polynomials.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::{Monomial, MonomialOrder};
use crate::ring::Ring;

pub type Term<F> = (Monomial, <F as Field>::Elem);

/// Immutable polynomial value bound to its ring.
#[derive(Clone)]
pub struct Polynomial<F: Field> {
    ring: Arc<Ring<F>>,
    terms: Vec<Term<F>>,
}

impl<F: Field> PartialEq for Polynomial<F> {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring) && self.terms == other.terms
    }
}

impl<F: Field> Eq for Polynomial<F> {}

impl<F: Field> Polynomial<F> {
    pub fn zero(ring: &Arc<Ring<F>>) -> Self {
        Self { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &Arc<Ring<F>>, c: F::Elem) -> Self {
        let terms = if ring.field().is_zero(&c) { vec![] } else { vec![(Monomial::one(), c)] };
        Self { ring: ring.clone(), terms }
    }

    pub fn one(ring: &Arc<Ring<F>>) -> Self {
        Self::constant(ring, ring.field().one())
    }

    pub fn var(ring: &Arc<Ring<F>>, i: usize) -> Self {
        assert!(i < ring.nvars(), "variable index out of range");
        Self { ring: ring.clone(), terms: vec![(Monomial::var(i), ring.field().one())] }
    }

    pub fn monomial(ring: &Arc<Ring<F>>, m: Monomial, c: F::Elem) -> Self {
        let terms = if ring.field().is_zero(&c) { vec![] } else { vec![(m, c)] };
        Self { ring: ring.clone(), terms }
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates and
    /// dropping zeros.
    pub fn from_terms(ring: &Arc<Ring<F>>, mut terms: Vec<Term<F>>) -> Self {
        let field = ring.field();
        let order = ring.order();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut out: Vec<Term<F>> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = field.add(&last.1, &c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|t| !field.is_zero(&t.1));
        Self { ring: ring.clone(), terms: out }
    }

    /// Wraps terms already sorted and free of zeros.
    pub(crate) fn from_sorted(ring: &Arc<Ring<F>>, terms: Vec<Term<F>>) -> Self {
        debug_assert!(terms.windows(2).all(|w| ring.order().cmp(&w[0].0, &w[1].0) == Ordering::Greater));
        debug_assert!(terms.iter().all(|t| !ring.field().is_zero(&t.1)));
        Self { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Arc<Ring<F>> {
        &self.ring
    }

    pub fn field(&self) -> &F {
        self.ring.field()
    }

    pub fn terms(&self) -> &[Term<F>] {
        &self.terms
    }

    pub(crate) fn into_terms(self) -> Vec<Term<F>> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| t.0.is_one())
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coeff(&self) -> Option<&F::Elem> {
        self.terms.first().map(|t| &t.1)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.0.degree()).max()
    }

    /// Least total degree of a term (the m-adic order); `None` for zero.
    pub fn order_at_origin(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.0.degree()).min()
    }

    pub fn coeff(&self, m: &Monomial) -> F::Elem {
        let order = self.ring.order();
        match self.terms.binary_search_by(|t| order.cmp(m, &t.0)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => self.field().zero(),
        }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let field = self.field();
        if field.is_zero(c) {
            return Self::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(m, a)| (*m, field.mul(a, c))).collect();
        Self { ring: self.ring.clone(), terms }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Result<Self> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (t, c) in &self.terms {
            terms.push((t.checked_mul(m).ok_or(Error::ExponentOverflow)?, c.clone()));
        }
        Ok(Self { ring: self.ring.clone(), terms })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let terms = merge_combine(self.field(), self.ring.order(), &self.terms, None, &other.terms, &self.field().neg(&self.field().one()), None);
        Ok(Self { ring: self.ring.clone(), terms })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let terms = merge_combine(self.field(), self.ring.order(), &self.terms, None, &other.terms, &self.field().one(), None);
        Ok(Self { ring: self.ring.clone(), terms })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.ring));
        }
        let (short, long) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let field = self.field();
        let order = self.ring.order();
        let mut acc: Vec<Term<F>> = Vec::new();
        for (m, c) in &short.terms {
            let mut shifted = Vec::with_capacity(long.len());
            for (t, d) in &long.terms {
                shifted.push((t.checked_mul(m).ok_or(Error::ExponentOverflow)?, field.mul(c, d)));
            }
            acc = merge_combine(field, order, &acc, None, &shifted, &field.neg(&field.one()), None);
        }
        Ok(Self { ring: self.ring.clone(), terms: acc })
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut acc = Self::one(&self.ring);
        for _ in 0..n {
            acc = acc.try_mul(self)?;
        }
        Ok(acc)
    }

    /// Scales so that the polynomial is monic.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => self.clone(),
            Some(c) => self.scale(&self.field().inv(c)),
        }
    }

    /// Field-dependent normal scaling: monic over `GF(p)`, primitive integral
    /// with positive leading coefficient over `QQ`.
    pub(crate) fn normalized(&self) -> Self {
        let s = self.field().normalizer(self.terms.iter().map(|t| &t.1));
        self.scale(&s)
    }

    /// Re-expresses the polynomial in a ring with the same variables but a
    /// possibly different order.
    pub fn to_ring(&self, ring: &Arc<Ring<F>>) -> Result<Self> {
        if ring.names() != self.ring.names() || ring.field() != self.ring.field() {
            return Err(Error::RingMismatch);
        }
        if ring.order() == self.ring.order() {
            return Ok(Self { ring: ring.clone(), terms: self.terms.clone() });
        }
        Ok(Self::from_terms(ring, self.terms.clone()))
    }

    pub(crate) fn map_monomials(&self, ring: &Arc<Ring<F>>, f: impl Fn(&Monomial) -> Monomial) -> Self {
        Self::from_terms(ring, self.terms.iter().map(|(m, c)| (f(m), c.clone())).collect())
    }

    /// Exact division by a monomial-free divisor. Returns `None` when the
    /// division leaves a remainder.
    pub fn exact_div(&self, divisor: &Self) -> Result<Option<Self>> {
        self.check_ring(divisor)?;
        if divisor.is_zero() {
            return Err(Error::ColonByZero);
        }
        let field = self.field();
        let order = self.ring.order();
        let lm = divisor.terms[0].0;
        let lc = divisor.terms[0].1.clone();
        let mut rem = self.terms.clone();
        let mut quot: Vec<Term<F>> = Vec::new();
        while let Some((m, c)) = rem.first().cloned() {
            let Some(q) = lm.quotient_of(&m) else {
                return Ok(None);
            };
            let qc = field.div(&c, &lc);
            rem = merge_combine(field, order, &rem, None, &divisor.terms, &qc, Some(&q));
            quot.push((q, qc));
        }
        Ok(Some(Self::from_terms(&self.ring, quot)))
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }
}

/// `alpha * a - beta * shift * b` as a sorted term list. `alpha = None`
/// means one, `shift = None` means the unit monomial.
pub(crate) fn merge_combine<F: Field>(
    field: &F,
    order: MonomialOrder,
    a: &[Term<F>],
    alpha: Option<&F::Elem>,
    b: &[Term<F>],
    beta: &F::Elem,
    shift: Option<&Monomial>,
) -> Vec<Term<F>> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let scale_a = |c: &F::Elem| match alpha {
        Some(s) => field.mul(c, s),
        None => c.clone(),
    };
    let (mut i, mut j) = (0, 0);
    let next_b = |j: usize| -> Monomial {
        match shift {
            Some(s) => b[j].0.mul(s),
            None => b[j].0,
        }
    };
    let mut bm = if b.is_empty() { None } else { Some(next_b(0)) };
    while i < a.len() || bm.is_some() {
        let take = match (a.get(i), bm) {
            (Some(x), Some(y)) => order.cmp(&x.0, &y),
            (Some(_), None) => Ordering::Greater,
            (None, Some(_)) => Ordering::Less,
            (None, None) => unreachable!(),
        };
        match take {
            Ordering::Greater => {
                out.push((a[i].0, scale_a(&a[i].1)));
                i += 1;
            }
            Ordering::Less => {
                let c = field.neg(&field.mul(beta, &b[j].1));
                out.push((bm.unwrap(), c));
                j += 1;
                bm = if j < b.len() { Some(next_b(j)) } else { None };
            }
            Ordering::Equal => {
                let c = field.sub(&scale_a(&a[i].1), &field.mul(beta, &b[j].1));
                if !field.is_zero(&c) {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
                bm = if j < b.len() { Some(next_b(j)) } else { None };
            }
        }
    }
    out
}

impl<F: Field> Add for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn add(self, rhs: Self) -> Polynomial<F> {
        self.try_add(rhs).expect("ring mismatch in addition")
    }
}

impl<F: Field> Sub for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn sub(self, rhs: Self) -> Polynomial<F> {
        self.try_sub(rhs).expect("ring mismatch in subtraction")
    }
}

impl<F: Field> Mul for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn mul(self, rhs: Self) -> Polynomial<F> {
        self.try_mul(rhs).expect("ring mismatch or exponent overflow in multiplication")
    }
}

impl<F: Field> Neg for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn neg(self) -> Polynomial<F> {
        self.scale(&self.field().neg(&self.field().one()))
    }
}

pub(crate) fn format_monomial(m: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, name) in names.iter().enumerate() {
        match m.exp(i) {
            0 => {}
            1 => parts.push(name.clone()),
            e => parts.push(format!("{name}^{e}")),
        }
    }
    parts.join("*")
}

impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let field = self.field();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let (neg, abs) = field.split_sign(c);
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mono = format_monomial(m, self.ring.names());
            if mono.is_empty() {
                write!(f, "{}", field.format_elem(&abs))?;
            } else if field.is_one(&abs) {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{mono}", field.format_elem(&abs))?;
            }
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::parse::parse_polynomial;

    fn qq(vars: &[&str]) -> Arc<Ring<Rationals>> {
        Ring::new(vars, Rationals, MonomialOrder::DegRevLex).unwrap()
    }

    #[test]
    fn display_is_grammar_compatible() {
        let r = qq(&["x", "y"]);
        let p = parse_polynomial(&r, "-x^2 + 3/4*x*y - 1").unwrap();
        assert_eq!(p.to_string(), "-x^2 + 3/4*x*y - 1");
        assert_eq!(parse_polynomial(&r, &p.to_string()).unwrap(), p);
    }

    #[test]
    fn exact_division() {
        let r = qq(&["x", "y"]);
        let f = parse_polynomial(&r, "x^3 + y^3").unwrap();
        let g = parse_polynomial(&r, "x + y").unwrap();
        let q = f.exact_div(&g).unwrap().unwrap();
        assert_eq!(q, parse_polynomial(&r, "x^2 - x*y + y^2").unwrap());
        assert!(parse_polynomial(&r, "x^2 + 1").unwrap().exact_div(&g).unwrap().is_none());
    }

    #[test]
    fn prime_field_display() {
        let r = Ring::new(&["x", "y"], PrimeField::new(5).unwrap(), MonomialOrder::DegRevLex).unwrap();
        let p = parse_polynomial(&r, "(x-y)*(x+y)").unwrap();
        assert_eq!(p.to_string(), "x^2 + 4*y^2");
    }

    #[test]
    fn order_change_preserves_value() {
        let r = qq(&["x", "y"]);
        let lex = r.with_order(MonomialOrder::Lex);
        let p = parse_polynomial(&r, "y^3 + x*y + x^2").unwrap();
        let q = p.to_ring(&lex).unwrap();
        assert_eq!(q.leading_monomial(), Some(&Monomial::from_exponents(&[2, 0]).unwrap()));
        assert_eq!(q.to_ring(&r).unwrap(), p);
    }
}
