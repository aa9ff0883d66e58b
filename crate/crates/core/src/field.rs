//! Exact coefficient fields.
//!
//! Two fields are provided: the rationals (arbitrary precision) and prime
//! fields `GF(p)` with canonical representatives in `[0, p)`. Elimination
//! code never divides eagerly; it asks the field for a pair of cancelling
//! multipliers and normalizes whole rows afterwards, which keeps rational
//! rows integral and coefficient growth in check.

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Arithmetic over an exact field. Elements are plain values; the field
/// object carries any runtime parameters (the modulus).
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync + 'static;

    /// Whether elimination scales rows (and so needs periodic
    /// normalization to keep entries small).
    const FRACTION_FREE: bool;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse. Panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b))
    }

    fn from_i64(&self, n: i64) -> Self::Elem;
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;
    /// `num/den`; fails when `den` vanishes in the field.
    fn from_fraction(&self, num: &BigInt, den: &BigInt) -> Result<Self::Elem, Error>;

    /// Multipliers `(a, b)` with `a * target - b * pivot == 0`.
    ///
    /// Over the rationals both are integers when the inputs are integers,
    /// so fraction-free elimination stays fraction-free.
    fn cancel_pair(&self, pivot: &Self::Elem, target: &Self::Elem) -> (Self::Elem, Self::Elem);

    /// Scalar that turns the given coefficient vector into its normal form:
    /// monic over a prime field, primitive integral with positive leading
    /// entry over the rationals. The first item is the leading coefficient.
    fn normalizer<'a, I>(&self, coeffs: I) -> Self::Elem
    where
        I: Iterator<Item = &'a Self::Elem>,
        Self::Elem: 'a;

    /// Sign and absolute value, for display. Prime-field elements are never
    /// negative.
    fn split_sign(&self, a: &Self::Elem) -> (bool, Self::Elem);
    fn format_elem(&self, a: &Self::Elem) -> String;

    /// Textual field name used in ring headers: `QQ` or `GF(p)`.
    fn name(&self) -> String;
    /// Number of elements, `None` for infinite fields.
    fn size(&self) -> Option<u64>;
}

/// A rational number. Integers that fit a machine word are stored inline;
/// everything else falls back to arbitrary precision.
#[derive(Clone, Debug)]
pub enum Rat {
    Small(i64),
    Big(BigRational),
}

impl Rat {
    fn big(q: BigRational) -> Rat {
        if q.is_integer() {
            if let Some(n) = q.numer().to_i64() {
                return Rat::Small(n);
            }
        }
        Rat::Big(q)
    }

    fn int(n: BigInt) -> Rat {
        match n.to_i64() {
            Some(v) => Rat::Small(v),
            None => Rat::Big(BigRational::from_integer(n)),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rat::Small(n) => BigRational::from_integer(BigInt::from(*n)),
            Rat::Big(q) => q.clone(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rat::Small(_) => true,
            Rat::Big(q) => q.is_integer(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rat::Small(n) => *n < 0,
            Rat::Big(q) => q.is_negative(),
        }
    }

    fn numer(&self) -> BigInt {
        match self {
            Rat::Small(n) => BigInt::from(*n),
            Rat::Big(q) => q.numer().clone(),
        }
    }
}

impl PartialEq for Rat {
    fn eq(&self, other: &Rat) -> bool {
        match (self, other) {
            (Rat::Small(a), Rat::Small(b)) => a == b,
            // the representation is canonical, so mixed forms differ
            (Rat::Big(a), Rat::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Rat {}

impl Hash for Rat {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        match self {
            Rat::Small(n) => {
                0u8.hash(state);
                n.hash(state);
            }
            Rat::Big(q) => {
                1u8.hash(state);
                q.hash(state);
            }
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rat::Small(n) => write!(f, "{n}"),
            Rat::Big(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Rat::Big(q) => write!(f, "{}/{}", q.numer(), q.denom()),
        }
    }
}

fn big_op(
    a: &Rat,
    b: &Rat,
    int: impl Fn(&BigInt, &BigInt) -> BigInt,
    rat: impl Fn(&BigRational, &BigRational) -> BigRational,
) -> Rat {
    if a.is_integer() && b.is_integer() {
        return Rat::int(int(&a.numer(), &b.numer()));
    }
    Rat::big(rat(&a.to_big(), &b.to_big()))
}

/// `n * q` for an integer `n`, by exact division when `q`'s denominator
/// divides `n` (as it does when rows are made primitive).
fn int_times(n: &Rat, q: &BigRational) -> Rat {
    let (quot, rem) = n.numer().div_rem(q.denom());
    if rem.is_zero() {
        return Rat::int(quot * q.numer());
    }
    Rat::big(n.to_big() * q)
}

/// `x * q` without big arithmetic when `q` has word-sized parts.
fn small_times(x: i64, q: &BigRational) -> Option<Rat> {
    let n = q.numer().to_i64()?;
    let d = q.denom().to_i64()?;
    let g = gcd_i64(x, d)?;
    let num = (x / g).checked_mul(n)?;
    let den = d / g;
    if den == 1 {
        Some(Rat::Small(num))
    } else {
        Some(Rat::Big(BigRational::new_raw(BigInt::from(num), BigInt::from(den))))
    }
}

fn gcd_i64(a: i64, b: i64) -> Option<i64> {
    let g = (a.unsigned_abs()).gcd(&b.unsigned_abs());
    i64::try_from(g).ok()
}

/// The field of rational numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = Rat;
    const FRACTION_FREE: bool = true;

    fn zero(&self) -> Rat {
        Rat::Small(0)
    }
    fn one(&self) -> Rat {
        Rat::Small(1)
    }
    fn is_zero(&self, a: &Rat) -> bool {
        matches!(a, Rat::Small(0))
    }
    fn is_one(&self, a: &Rat) -> bool {
        matches!(a, Rat::Small(1))
    }
    fn add(&self, a: &Rat, b: &Rat) -> Rat {
        if let (Rat::Small(x), Rat::Small(y)) = (a, b) {
            if let Some(s) = x.checked_add(*y) {
                return Rat::Small(s);
            }
        }
        big_op(a, b, |x, y| x + y, |x, y| x + y)
    }
    fn sub(&self, a: &Rat, b: &Rat) -> Rat {
        if let (Rat::Small(x), Rat::Small(y)) = (a, b) {
            if let Some(s) = x.checked_sub(*y) {
                return Rat::Small(s);
            }
        }
        big_op(a, b, |x, y| x - y, |x, y| x - y)
    }
    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        match (a, b) {
            (Rat::Small(x), Rat::Small(y)) => match x.checked_mul(*y) {
                Some(p) => Rat::Small(p),
                None => Rat::int(BigInt::from(*x) * BigInt::from(*y)),
            },
            (Rat::Small(1), o) | (o, Rat::Small(1)) => o.clone(),
            (Rat::Small(x), Rat::Big(q)) | (Rat::Big(q), Rat::Small(x)) => match small_times(*x, q) {
                Some(r) => r,
                None => big_op(a, b, |x, y| x * y, |x, y| x * y),
            },
            (n, Rat::Big(q)) | (Rat::Big(q), n) if n.is_integer() && !q.is_integer() => int_times(n, q),
            _ => big_op(a, b, |x, y| x * y, |x, y| x * y),
        }
    }
    fn neg(&self, a: &Rat) -> Rat {
        match a {
            Rat::Small(n) => match n.checked_neg() {
                Some(m) => Rat::Small(m),
                None => Rat::int(-BigInt::from(*n)),
            },
            Rat::Big(q) => Rat::big(-q),
        }
    }
    fn inv(&self, a: &Rat) -> Rat {
        assert!(!self.is_zero(a), "inverse of zero");
        Rat::big(a.to_big().recip())
    }
    fn from_i64(&self, n: i64) -> Rat {
        Rat::Small(n)
    }
    fn from_bigint(&self, n: &BigInt) -> Rat {
        Rat::int(n.clone())
    }
    fn from_fraction(&self, num: &BigInt, den: &BigInt) -> Result<Rat, Error> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rat::big(BigRational::new(num.clone(), den.clone())))
    }

    fn cancel_pair(&self, pivot: &Rat, target: &Rat) -> (Rat, Rat) {
        if let (Rat::Small(p), Rat::Small(t)) = (pivot, target) {
            if let Some(g) = gcd_i64(*p, *t) {
                let (mut a, mut b) = (p / g, t / g);
                if a < 0 {
                    if let (Some(na), Some(nb)) = (a.checked_neg(), b.checked_neg()) {
                        a = na;
                        b = nb;
                        return (Rat::Small(a), Rat::Small(b));
                    }
                } else {
                    return (Rat::Small(a), Rat::Small(b));
                }
            }
        }
        if pivot.is_integer() && target.is_integer() {
            let (p, t) = (pivot.numer(), target.numer());
            // a common factor of two big integers is rarely worth its gcd
            let g = match (p.magnitude().to_u64(), t.magnitude().to_u64()) {
                (Some(x), _) => BigInt::from(x.gcd(&(&t % x).abs().to_u64().expect("remainder fits a word"))),
                (_, Some(y)) => BigInt::from(y.gcd(&(&p % y).abs().to_u64().expect("remainder fits a word"))),
                _ => BigInt::one(),
            };
            let mut a = if g.is_one() { p } else { p / &g };
            let mut b = if g.is_one() { t } else { t / &g };
            if a.is_negative() {
                a = -a;
                b = -b;
            }
            (Rat::int(a), Rat::int(b))
        } else {
            (self.one(), Rat::big(target.to_big() / pivot.to_big()))
        }
    }

    fn normalizer<'a, I>(&self, coeffs: I) -> Rat
    where
        I: Iterator<Item = &'a Rat>,
    {
        // gcd of the numerators: word-sized entries first, so big ones
        // usually only need a remainder; stops once it reaches 1
        let coeffs: Vec<&Rat> = coeffs.filter(|c| !self.is_zero(c)).collect();
        let negative = coeffs.first().map(|c| c.is_negative());
        let mut small_gcd: u64 = 0;
        for c in &coeffs {
            if let Rat::Small(n) = c {
                small_gcd = small_gcd.gcd(&n.unsigned_abs());
                if small_gcd == 1 {
                    break;
                }
            }
        }
        let mut num_gcd: Option<BigInt> = None;
        let mut den_lcm = BigInt::one();
        for c in &coeffs {
            let Rat::Big(q) = c else { continue };
            if small_gcd != 1 {
                if small_gcd > 0 {
                    let r = (q.numer() % small_gcd).abs().to_u64().expect("remainder fits a word");
                    small_gcd = small_gcd.gcd(&r);
                } else {
                    let g = match num_gcd.take() {
                        Some(g) => g.gcd(q.numer()),
                        None => q.numer().abs(),
                    };
                    match g.to_u64() {
                        Some(v) => small_gcd = v,
                        None => num_gcd = Some(g),
                    }
                }
            }
            if !q.denom().is_one() {
                den_lcm = den_lcm.lcm(q.denom());
            }
        }
        let g = match num_gcd {
            Some(g) => g,
            None => BigInt::from(small_gcd),
        };
        if g.is_zero() {
            return self.one();
        }
        if g.is_one() && den_lcm.is_one() {
            return if negative == Some(true) { Rat::Small(-1) } else { self.one() };
        }
        let scale = Rat::big(BigRational::new(den_lcm, g));
        if negative == Some(true) {
            self.neg(&scale)
        } else {
            scale
        }
    }

    fn split_sign(&self, a: &Rat) -> (bool, Rat) {
        if a.is_negative() {
            (true, self.neg(a))
        } else {
            (false, a.clone())
        }
    }

    fn format_elem(&self, a: &Rat) -> String {
        a.to_string()
    }

    fn name(&self) -> String {
        "QQ".to_string()
    }
    fn size(&self) -> Option<u64> {
        None
    }
}

/// Prime field `GF(p)` for an odd prime `p < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, Error> {
        if p <= 2 || p >= (1 << 31) || !is_prime(p) {
            return Err(Error::BadModulus(p));
        }
        Ok(Self { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn reduce_bigint(&self, n: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        let r = n.mod_floor(&p);
        r.to_u64().expect("residue fits")
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field for PrimeField {
    type Elem = u64;
    const FRACTION_FREE: bool = false;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn is_one(&self, a: &u64) -> bool {
        *a == 1
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        self.pow(*a, self.p - 2)
    }
    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
    fn from_bigint(&self, n: &BigInt) -> u64 {
        self.reduce_bigint(n)
    }
    fn from_fraction(&self, num: &BigInt, den: &BigInt) -> Result<u64, Error> {
        let d = self.reduce_bigint(den);
        if d == 0 {
            return Err(Error::ZeroDenominator);
        }
        Ok(self.mul(&self.reduce_bigint(num), &self.inv(&d)))
    }

    fn cancel_pair(&self, pivot: &u64, target: &u64) -> (u64, u64) {
        (1, self.div(target, pivot))
    }

    fn normalizer<'a, I>(&self, mut coeffs: I) -> u64
    where
        I: Iterator<Item = &'a u64>,
    {
        match coeffs.find(|c| **c != 0) {
            Some(lead) => self.inv(lead),
            None => 1,
        }
    }

    fn split_sign(&self, a: &u64) -> (bool, u64) {
        (false, *a)
    }

    fn format_elem(&self, a: &u64) -> String {
        a.to_string()
    }

    fn name(&self) -> String {
        format!("GF({})", self.p)
    }
    fn size(&self) -> Option<u64> {
        Some(self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_rejects_composites_and_two() {
        assert!(PrimeField::new(2).is_err());
        assert!(PrimeField::new(9).is_err());
        assert!(PrimeField::new(32003).is_ok());
    }

    #[test]
    fn prime_field_arithmetic_is_canonical() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.from_i64(-1), 4);
        assert_eq!(f.mul(&f.inv(&3), &3), 1);
        assert_eq!(f.from_fraction(&BigInt::from(1), &BigInt::from(2)).unwrap(), 3);
        assert!(f.from_fraction(&BigInt::from(1), &BigInt::from(10)).is_err());
    }

    #[test]
    fn rational_normalizer_makes_primitive_rows() {
        let q = Rationals;
        let row = [
            q.from_fraction(&BigInt::from(-2), &BigInt::from(3)).unwrap(),
            q.from_fraction(&BigInt::from(4), &BigInt::from(9)).unwrap(),
        ];
        let s = q.normalizer(row.iter());
        let scaled: Vec<_> = row.iter().map(|c| q.mul(c, &s)).collect();
        assert_eq!(scaled[0], q.from_i64(3));
        assert_eq!(scaled[1], q.from_i64(-2));
    }

    #[test]
    fn small_and_big_forms_agree() {
        let q = Rationals;
        let big = q.mul(&q.from_i64(i64::MAX), &q.from_i64(4));
        assert!(matches!(big, Rat::Big(_)));
        let back = q.sub(&big, &q.mul(&q.from_i64(i64::MAX), &q.from_i64(3)));
        assert_eq!(back, q.from_i64(i64::MAX));
        assert_eq!(q.neg(&q.from_i64(i64::MIN)), q.add(&q.from_i64(i64::MAX), &q.one()));
        let half = q.from_fraction(&BigInt::from(1), &BigInt::from(2)).unwrap();
        assert_eq!(q.add(&half, &half), q.one());
        assert_eq!(q.format_elem(&half), "1/2");
    }

    #[test]
    fn cancel_pair_cancels() {
        let q = Rationals;
        let p = q.from_i64(6);
        let t = q.from_i64(-4);
        let (a, b) = q.cancel_pair(&p, &t);
        assert!(q.is_zero(&q.sub(&q.mul(&a, &t), &q.mul(&b, &p))));
        let f = PrimeField::new(7).unwrap();
        let (a, b) = f.cancel_pair(&3, &5);
        assert_eq!(f.sub(&f.mul(&a, &5), &f.mul(&b, &3)), 0);
    }
}
