//! Ideals with cached reduced Groebner bases.
//!
//! Zero-dimensional ideals additionally carry their standard monomials and
//! a memoized normal-form table, which turns sums, colons and lengths into
//! linear algebra on the finite-dimensional quotient.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::groebner::{cmp_leading, groebner_basis, minimal_monomials, reduce};
use crate::linalg::{left_kernel, Echelon, Insert, SparseVec};
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::ring::Ring;

/// Standard monomials of a zero-dimensional ideal, in decreasing order.
#[derive(Debug)]
pub struct Standard {
    monos: Vec<Monomial>,
    index: HashMap<Monomial, u32>,
}

impl Standard {
    fn new(monos: Vec<Monomial>) -> Self {
        let index = monos.iter().enumerate().map(|(i, m)| (*m, i as u32)).collect();
        Self { monos, index }
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monos
    }

    pub fn index_of(&self, m: &Monomial) -> Option<u32> {
        self.index.get(m).copied()
    }
}

type Nf<F> = Arc<SparseVec<<F as Field>::Elem>>;

/// Reduced Groebner basis with derived data.
pub struct Gb<F: Field> {
    ring: Arc<Ring<F>>,
    polys: Vec<Polynomial<F>>,
    leads: Vec<Monomial>,
    sigs: Vec<u64>,
    monomial: bool,
    homogeneous: bool,
    standard: OnceLock<Option<Arc<Standard>>>,
    nf: Mutex<HashMap<Monomial, Nf<F>>>,
}

impl<F: Field> fmt::Debug for Gb<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.polys.iter()).finish()
    }
}

impl<F: Field> Gb<F> {
    fn new(ring: &Arc<Ring<F>>, polys: Vec<Polynomial<F>>) -> Self {
        let leads: Vec<Monomial> = polys.iter().map(|g| *g.leading_monomial().unwrap()).collect();
        let sigs = leads.iter().map(|m| m.signature()).collect();
        let monomial = polys.iter().all(|g| g.is_monomial());
        let homogeneous = polys.iter().all(|g| g.degree() == g.order_at_origin());
        Self {
            ring: ring.clone(),
            polys,
            leads,
            sigs,
            monomial,
            homogeneous,
            standard: OnceLock::new(),
            nf: Mutex::new(HashMap::new()),
        }
    }

    fn with_standard(ring: &Arc<Ring<F>>, polys: Vec<Polynomial<F>>, standard: Standard) -> Self {
        let gb = Self::new(ring, polys);
        let _ = gb.standard.set(Some(Arc::new(standard)));
        gb
    }

    pub fn polys(&self) -> &[Polynomial<F>] {
        &self.polys
    }

    pub fn leading_monomials(&self) -> &[Monomial] {
        &self.leads
    }

    pub fn is_monomial(&self) -> bool {
        self.monomial
    }

    pub fn is_unit(&self) -> bool {
        self.leads.len() == 1 && self.leads[0].is_one()
    }

    pub fn in_leading_ideal(&self, m: &Monomial) -> bool {
        let sig = m.signature();
        self.leads.iter().zip(&self.sigs).any(|(l, s)| s & !sig == 0 && l.divides(m))
    }

    /// Standard monomials when the ideal is zero-dimensional.
    pub fn standard(&self) -> Option<&Arc<Standard>> {
        self.standard.get_or_init(|| self.compute_standard().map(Arc::new)).as_ref()
    }

    fn compute_standard(&self) -> Option<Standard> {
        if self.is_unit() {
            return Some(Standard::new(Vec::new()));
        }
        let d = self.ring.nvars();
        for i in 0..d {
            if !self.leads.iter().any(|l| l.pure_power_var() == Some(i)) {
                return None;
            }
        }
        let mut seen: HashMap<Monomial, ()> = HashMap::new();
        let mut queue = VecDeque::from([Monomial::one()]);
        seen.insert(Monomial::one(), ());
        let mut out = Vec::new();
        while let Some(m) = queue.pop_front() {
            out.push(m);
            for j in 0..d {
                let n = m.mul(&Monomial::var(j));
                if seen.contains_key(&n) || self.in_leading_ideal(&n) {
                    continue;
                }
                seen.insert(n, ());
                queue.push_back(n);
            }
        }
        let order = self.ring.order();
        out.sort_by(|a, b| order.cmp(b, a));
        Some(Standard::new(out))
    }

    fn lead_position(&self, m: &Monomial) -> Option<usize> {
        self.leads.iter().position(|l| l == m)
    }

    /// Normal form of a monomial as a vector over the standard monomials.
    /// Requires a zero-dimensional ideal.
    pub fn nf_monomial(&self, w: &Monomial) -> Nf<F> {
        let std = self.standard().expect("normal-form table needs a zero-dimensional ideal");
        let field = self.ring.field();
        if let Some(i) = std.index_of(w) {
            return Arc::new(vec![(i, field.one())]);
        }
        if self.monomial {
            return Arc::new(Vec::new());
        }
        let mut memo = self.nf.lock().unwrap();
        if let Some(v) = memo.get(w) {
            return v.clone();
        }
        let d = self.ring.nvars();
        let top_degree = if self.homogeneous { std.monos.iter().map(|m| m.degree()).max() } else { None };
        let mut stack = vec![*w];
        while let Some(&top) = stack.last() {
            if memo.contains_key(&top) {
                stack.pop();
                continue;
            }
            if top_degree.is_some_and(|t| top.degree() > t) {
                memo.insert(top, Arc::new(Vec::new()));
                stack.pop();
                continue;
            }
            if let Some(p) = self.lead_position(&top) {
                let tail = &self.polys[p].terms()[1..];
                let mut v: SparseVec<F::Elem> = tail
                    .iter()
                    .map(|(m, c)| (std.index_of(m).expect("reduced tail"), field.neg(c)))
                    .collect();
                v.sort_by_key(|e| e.0);
                memo.insert(top, Arc::new(v));
                stack.pop();
                continue;
            }
            // top = x_j * p with p also a leading-ideal monomial
            let j = (0..d)
                .find(|&j| {
                    top.exp(j) > 0 && {
                        let p = Monomial::var(j).quotient_of(&top).unwrap();
                        std.index_of(&p).is_none()
                    }
                })
                .expect("non-minimal leading monomial");
            let xj = Monomial::var(j);
            let p = xj.quotient_of(&top).unwrap();
            let Some(vp) = memo.get(&p).cloned() else {
                stack.push(p);
                continue;
            };
            let mut pending = false;
            for (s, _) in vp.iter() {
                let n = std.monos[*s as usize].mul(&xj);
                if std.index_of(&n).is_none() && !memo.contains_key(&n) {
                    stack.push(n);
                    pending = true;
                }
            }
            if pending {
                continue;
            }
            let mut acc: HashMap<u32, F::Elem> = HashMap::new();
            for (s, c) in vp.iter() {
                let n = std.monos[*s as usize].mul(&xj);
                match std.index_of(&n) {
                    Some(i) => add_entry(field, &mut acc, i, c.clone()),
                    None => {
                        for (i, e) in memo.get(&n).unwrap().iter() {
                            add_entry(field, &mut acc, *i, field.mul(c, e));
                        }
                    }
                }
            }
            let mut v: SparseVec<F::Elem> = acc.into_iter().filter(|(_, c)| !field.is_zero(c)).collect();
            v.sort_by_key(|e| e.0);
            memo.insert(top, Arc::new(v));
            stack.pop();
        }
        memo.get(w).unwrap().clone()
    }

    /// Normal form of a polynomial as a vector over the standard monomials.
    pub fn nf_vector(&self, f: &Polynomial<F>) -> SparseVec<F::Elem> {
        let field = self.ring.field();
        let mut acc: HashMap<u32, F::Elem> = HashMap::new();
        for (m, c) in f.terms() {
            for (i, e) in self.nf_monomial(m).iter() {
                add_entry(field, &mut acc, *i, field.mul(c, e));
            }
        }
        let mut v: SparseVec<F::Elem> = acc.into_iter().filter(|(_, c)| !field.is_zero(c)).collect();
        v.sort_by_key(|e| e.0);
        v
    }

    /// Normal form of `v * x_j` for a vector over the standard monomials.
    fn mul_var(&self, v: &SparseVec<F::Elem>, j: usize) -> SparseVec<F::Elem> {
        let std = self.standard().unwrap();
        let field = self.ring.field();
        let xj = Monomial::var(j);
        let mut acc: HashMap<u32, F::Elem> = HashMap::new();
        for (s, c) in v {
            let n = std.monos[*s as usize].mul(&xj);
            for (i, e) in self.nf_monomial(&n).iter() {
                add_entry(field, &mut acc, *i, field.mul(c, e));
            }
        }
        let mut out: SparseVec<F::Elem> = acc.into_iter().filter(|(_, c)| !field.is_zero(c)).collect();
        out.sort_by_key(|e| e.0);
        out
    }

    /// Normal form of `v * f` for a vector over the standard monomials.
    pub fn nf_product(&self, v: &SparseVec<F::Elem>, f: &Polynomial<F>) -> SparseVec<F::Elem> {
        let std = self.standard().unwrap();
        let field = self.ring.field();
        let mut acc: HashMap<u32, F::Elem> = HashMap::new();
        for (s, c) in v {
            let base = std.monos[*s as usize];
            for (m, a) in f.terms() {
                let ca = field.mul(c, a);
                for (i, e) in self.nf_monomial(&base.mul(m)).iter() {
                    add_entry(field, &mut acc, *i, field.mul(&ca, e));
                }
            }
        }
        let mut out: SparseVec<F::Elem> = acc.into_iter().filter(|(_, c)| !field.is_zero(c)).collect();
        out.sort_by_key(|e| e.0);
        out
    }

    /// Normal form of `f^k`.
    pub fn nf_power(&self, f: &Polynomial<F>, k: u32) -> SparseVec<F::Elem> {
        let mut v = self.nf_monomial(&Monomial::one()).as_ref().clone();
        for _ in 0..k {
            if v.is_empty() {
                break;
            }
            v = self.nf_product(&v, f);
        }
        v
    }

    pub fn vector_to_poly(&self, v: &SparseVec<F::Elem>) -> Polynomial<F> {
        let std = self.standard().unwrap();
        let terms = v.iter().map(|(i, c)| (std.monos[*i as usize], c.clone())).collect();
        Polynomial::from_terms(&self.ring, terms)
    }

    pub fn normal_form(&self, f: &Polynomial<F>) -> Polynomial<F> {
        if self.standard().is_some() {
            self.vector_to_poly(&self.nf_vector(f))
        } else {
            reduce(f, &self.polys)
        }
    }

    /// The ideal `K0 + W` for a subspace `W` of `A/K0` that is closed under
    /// multiplication by the variables.
    fn extend_by_subspace(&self, w: &Echelon<F>) -> Gb<F> {
        let std = self.standard().unwrap();
        let field = self.ring.field();
        let order = self.ring.order();
        let pivots: Vec<u32> = w.rows().iter().map(|r| r[0].0).collect();
        let mut leads = self.leads.clone();
        leads.extend(pivots.iter().map(|&i| std.monos[i as usize]));
        let minimal = minimal_monomials(order, leads);
        let mut polys = Vec::with_capacity(minimal.len());
        for u in minimal {
            let mut v = (*self.nf_monomial(&u)).clone();
            let s = w.reduce_full(&mut v);
            let mut terms = vec![(u, s)];
            terms.extend(v.into_iter().map(|(i, c)| (std.monos[i as usize], field.neg(&c))));
            polys.push(Polynomial::from_terms(&self.ring, terms).monic());
        }
        polys.sort_by(|a, b| cmp_leading(order, a, b));
        let remaining: Vec<Monomial> =
            std.monos.iter().enumerate().filter(|(i, _)| !w.is_pivot(*i as u32)).map(|(_, m)| *m).collect();
        Gb::with_standard(&self.ring, polys, Standard::new(remaining))
    }

    /// Smallest `A`-submodule of `A/K0` containing the given vectors.
    fn submodule(&self, seeds: Vec<SparseVec<F::Elem>>) -> Echelon<F> {
        let std = self.standard().unwrap();
        let d = self.ring.nvars();
        let mut e = Echelon::new(self.ring.field(), std.len(), false);
        let mut queue: VecDeque<SparseVec<F::Elem>> = seeds.into_iter().collect();
        while let Some(v) = queue.pop_front() {
            if let Insert::Pivot(idx) = e.insert(v, Vec::new()) {
                let row = e.rows()[idx].clone();
                for j in 0..d {
                    let m = self.mul_var(&row, j);
                    if !m.is_empty() {
                        queue.push_back(m);
                    }
                }
            }
        }
        e
    }
}

fn add_entry<F: Field>(field: &F, acc: &mut HashMap<u32, F::Elem>, i: u32, c: F::Elem) {
    match acc.get_mut(&i) {
        Some(e) => *e = field.add(e, &c),
        None => {
            acc.insert(i, c);
        }
    }
}

struct Inner<F: Field> {
    ring: Arc<Ring<F>>,
    gens: Vec<Polynomial<F>>,
    gb: OnceLock<Result<Arc<Gb<F>>>>,
}

/// Shared handle to an ideal. The Groebner basis is computed at most once
/// per handle, even under concurrent access.
pub struct Ideal<F: Field> {
    inner: Arc<Inner<F>>,
}

impl<F: Field> Clone for Ideal<F> {
    fn clone(&self) -> Self {
        Self { inner: self.inner.clone() }
    }
}

impl<F: Field> fmt::Debug for Ideal<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<F: Field> fmt::Display for Ideal<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, g) in self.inner.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

fn same_ring<F: Field>(a: &Arc<Ring<F>>, b: &Arc<Ring<F>>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl<F: Field> Ideal<F> {
    pub fn new(ring: &Arc<Ring<F>>, gens: Vec<Polynomial<F>>) -> Result<Self> {
        if gens.iter().any(|g| !same_ring(g.ring(), ring)) {
            return Err(Error::RingMismatch);
        }
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(Self {
            inner: Arc::new(Inner { ring: ring.clone(), gens, gb: OnceLock::new() }),
        })
    }

    fn from_gb(gb: Gb<F>) -> Self {
        let ring = gb.ring.clone();
        let gens = gb.polys.clone();
        let cell = OnceLock::new();
        let _ = cell.set(Ok(Arc::new(gb)));
        Self { inner: Arc::new(Inner { ring, gens, gb: cell }) }
    }

    pub fn from_monomials(ring: &Arc<Ring<F>>, monos: Vec<Monomial>) -> Self {
        let one = ring.field().one();
        let polys = minimal_monomials(ring.order(), monos)
            .into_iter()
            .map(|m| Polynomial::monomial(ring, m, one.clone()))
            .collect();
        Self::from_gb(Gb::new(ring, polys))
    }

    pub fn unit(ring: &Arc<Ring<F>>) -> Self {
        Self::from_monomials(ring, vec![Monomial::one()])
    }

    pub fn zero(ring: &Arc<Ring<F>>) -> Self {
        Self::from_gb(Gb::new(ring, Vec::new()))
    }

    /// The ideal generated by all variables.
    pub fn maximal(ring: &Arc<Ring<F>>) -> Self {
        Self::from_monomials(ring, (0..ring.nvars()).map(Monomial::var).collect())
    }

    /// `m^n` for the maximal ideal `m`.
    pub fn maximal_power(ring: &Arc<Ring<F>>, n: u32) -> Self {
        let d = ring.nvars();
        let mut monos = Vec::new();
        let mut cur = vec![0u32; d];
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if i + 1 == cur.len() {
                cur[i] = left;
                out.push(Monomial::from_exponents(cur).unwrap());
                cur[i] = 0;
                return;
            }
            for e in 0..=left {
                cur[i] = e;
                rec(i + 1, left - e, cur, out);
            }
            cur[i] = 0;
        }
        rec(0, n, &mut cur, &mut monos);
        Self::from_monomials(ring, monos)
    }

    pub fn ring(&self) -> &Arc<Ring<F>> {
        &self.inner.ring
    }

    pub fn generators(&self) -> &[Polynomial<F>] {
        &self.inner.gens
    }

    pub fn groebner(&self) -> Result<&Arc<Gb<F>>> {
        let cell = self.inner.gb.get_or_init(|| {
            groebner_basis(&self.inner.ring, &self.inner.gens).map(|p| Arc::new(Gb::new(&self.inner.ring, p)))
        });
        match cell {
            Ok(g) => Ok(g),
            Err(e) => Err(e.clone()),
        }
    }

    /// Reduced Groebner basis in the ring's order.
    pub fn groebner_basis(&self) -> Result<Vec<Polynomial<F>>> {
        Ok(self.groebner()?.polys.clone())
    }

    pub fn is_monomial(&self) -> Result<bool> {
        Ok(self.groebner()?.monomial)
    }

    pub fn is_zero(&self) -> bool {
        self.inner.gens.is_empty()
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.groebner()?.is_unit())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_ring(self.ring(), other.ring()) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn contains(&self, f: &Polynomial<F>) -> Result<bool> {
        if !same_ring(f.ring(), self.ring()) {
            return Err(Error::RingMismatch);
        }
        Ok(self.groebner()?.normal_form(f).is_zero())
    }

    pub fn normal_form(&self, f: &Polynomial<F>) -> Result<Polynomial<F>> {
        if !same_ring(f.ring(), self.ring()) {
            return Err(Error::RingMismatch);
        }
        Ok(self.groebner()?.normal_form(f))
    }

    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        self.check(other)?;
        let gb = other.groebner()?;
        Ok(self.inner.gens.iter().all(|g| gb.normal_form(g).is_zero()))
    }

    /// Equality of ideals: identical reduced Groebner bases.
    pub fn equals(&self, other: &Self) -> Result<bool> {
        self.check(other)?;
        if Arc::ptr_eq(&self.inner, &other.inner) {
            return Ok(true);
        }
        Ok(self.groebner()?.polys == other.groebner()?.polys)
    }

    pub fn standard_monomials(&self) -> Result<Option<Arc<Standard>>> {
        Ok(self.groebner()?.standard().cloned())
    }

    /// Length of `A/I`, `None` when infinite.
    pub fn colength(&self) -> Result<Option<usize>> {
        Ok(self.groebner()?.standard().map(|s| s.len()))
    }

    /// Whether the ideal is primary to the maximal ideal of all variables:
    /// `A/I` is finite and every variable acts nilpotently on it.
    pub fn is_mprimary(&self) -> Result<bool> {
        let gb = self.groebner()?;
        let Some(std) = gb.standard() else {
            return Ok(false);
        };
        if gb.is_unit() {
            return Ok(false);
        }
        if gb.homogeneous {
            return Ok(true);
        }
        let n = std.len() as u32;
        for i in 0..self.ring().nvars() {
            let p = Monomial::var(i).checked_pow(n).ok_or(Error::ExponentOverflow)?;
            if !gb.nf_monomial(&p).is_empty() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// First variable without a pure power among the leading monomials.
    pub fn missing_pure_power(&self) -> Result<Option<String>> {
        let gb = self.groebner()?;
        for i in 0..self.ring().nvars() {
            if !gb.leads.iter().any(|l| l.pure_power_var() == Some(i)) {
                return Ok(Some(self.ring().names()[i].clone()));
            }
        }
        Ok(None)
    }

    /// Whether `a * b` lies in the ideal for every `a` in `left` and `b` in
    /// `right`.
    pub fn contains_products(&self, left: &[Polynomial<F>], right: &[Polynomial<F>]) -> Result<bool> {
        let gb = self.groebner()?;
        if gb.standard().is_none() {
            for a in left {
                for b in right {
                    if !gb.normal_form(&a.try_mul(b)?).is_zero() {
                        return Ok(false);
                    }
                }
            }
            return Ok(true);
        }
        for a in left {
            let v = gb.nf_vector(a);
            if v.is_empty() {
                continue;
            }
            for b in right {
                if !gb.nf_product(&v, b).is_empty() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let (a, b) = (self.groebner()?, other.groebner()?);
        if a.monomial && b.monomial {
            let mut monos = a.leads.clone();
            monos.extend(b.leads.iter().copied());
            return Ok(Self::from_monomials(self.ring(), monos));
        }
        if a.standard().is_some() {
            return Ok(self.add_elements(other.generators())?);
        }
        if b.standard().is_some() {
            return Ok(other.add_elements(self.generators())?);
        }
        let mut gens = self.inner.gens.clone();
        gens.extend(other.inner.gens.iter().cloned());
        Self::new(self.ring(), gens)
    }

    /// `I + (f_1, ..., f_k)`.
    pub fn add_elements(&self, elems: &[Polynomial<F>]) -> Result<Self> {
        if elems.iter().any(|g| !same_ring(g.ring(), self.ring())) {
            return Err(Error::RingMismatch);
        }
        let gb = self.groebner()?;
        if elems.iter().all(|f| f.is_zero()) {
            return Ok(self.clone());
        }
        if gb.monomial && elems.iter().all(|f| f.is_monomial()) {
            let mut monos = gb.leads.clone();
            monos.extend(elems.iter().filter_map(|f| f.leading_monomial().copied()));
            return Ok(Self::from_monomials(self.ring(), monos));
        }
        if gb.standard().is_none() {
            let mut gens = self.inner.gens.clone();
            gens.extend(elems.iter().cloned());
            return Self::new(self.ring(), gens);
        }
        let seeds: Vec<SparseVec<F::Elem>> = elems.iter().map(|f| gb.nf_vector(f)).filter(|v| !v.is_empty()).collect();
        let w = gb.submodule(seeds);
        if w.rank() == 0 {
            return Ok(self.clone());
        }
        Ok(Self::from_gb(gb.extend_by_subspace(&w)))
    }

    /// `I + (a * b : a in left, b in right)`. With `I` zero-dimensional and
    /// contained in the product this computes the product ideal by linear
    /// algebra on `A/I`.
    pub fn add_products(&self, left: &[Polynomial<F>], right: &[Polynomial<F>]) -> Result<Self> {
        let gb = self.groebner()?;
        if gb.standard().is_none() || (gb.monomial && left.iter().chain(right).all(|f| f.is_monomial())) {
            let mut prods = Vec::with_capacity(left.len() * right.len());
            for a in left {
                for b in right {
                    prods.push(a.try_mul(b)?);
                }
            }
            return self.add_elements(&prods);
        }
        let mut seeds = Vec::new();
        for a in left {
            let v = gb.nf_vector(a);
            if v.is_empty() {
                continue;
            }
            for b in right {
                let w = gb.nf_product(&v, b);
                if !w.is_empty() {
                    seeds.push(w);
                }
            }
        }
        if seeds.is_empty() {
            return Ok(self.clone());
        }
        let w = gb.submodule(seeds);
        Ok(Self::from_gb(gb.extend_by_subspace(&w)))
    }

    pub fn product(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let (a, b) = (self.groebner()?, other.groebner()?);
        if a.monomial && b.monomial {
            let mut monos = Vec::with_capacity(a.leads.len() * b.leads.len());
            for x in &a.leads {
                for y in &b.leads {
                    monos.push(x.checked_mul(y).ok_or(Error::ExponentOverflow)?);
                }
            }
            return Ok(Self::from_monomials(self.ring(), monos));
        }
        let mut gens = Vec::with_capacity(a.polys.len() * b.polys.len());
        for x in &a.polys {
            for y in &b.polys {
                gens.push(x.try_mul(y)?);
            }
        }
        let out = Self::new(self.ring(), gens)?;
        out.groebner()?;
        Ok(out)
    }

    /// `I^n`, with `I^0 = (1)`.
    pub fn power(&self, n: u32) -> Result<Self> {
        let mut acc = Self::unit(self.ring());
        for _ in 0..n {
            acc = acc.product(self)?;
            // interreduce the generator list before the next step
            acc = Self::from_gb(Gb::new(self.ring(), acc.groebner_basis()?));
        }
        Ok(acc)
    }

    /// Product with the ideal generated by `elems`.
    pub fn times_elements(&self, elems: &[Polynomial<F>]) -> Result<Self> {
        let other = Self::new(self.ring(), elems.to_vec())?;
        self.product(&other)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let (a, b) = (self.groebner()?, other.groebner()?);
        if a.is_unit() {
            return Ok(other.clone());
        }
        if b.is_unit() {
            return Ok(self.clone());
        }
        if a.polys.is_empty() || b.polys.is_empty() {
            return Ok(Self::zero(self.ring()));
        }
        if a.monomial && b.monomial {
            let mut monos = Vec::new();
            for x in &a.leads {
                for y in &b.leads {
                    monos.push(x.lcm(y));
                }
            }
            return Ok(Self::from_monomials(self.ring(), monos));
        }
        if self.ring().nvars() + 1 > crate::monomial::MAX_VARS {
            return Err(Error::InvalidRing("no room for the elimination variable".into()));
        }
        // t*I + (1-t)*J, then eliminate t
        let big = self.ring().with_eliminated_variable();
        let field = self.ring().field();
        let t = Polynomial::var(&big, 0);
        let one_minus_t = &Polynomial::one(&big) - &t;
        let lift = |g: &Polynomial<F>| g.map_monomials(&big, |m| m.shift_right());
        let mut gens = Vec::new();
        for g in &a.polys {
            gens.push(t.try_mul(&lift(g))?);
        }
        for g in &b.polys {
            gens.push(one_minus_t.try_mul(&lift(g))?);
        }
        let gb = groebner_basis(&big, &gens)?;
        let kept: Vec<Polynomial<F>> = gb
            .iter()
            .filter(|g| g.terms().iter().all(|(m, _)| m.exp(0) == 0))
            .map(|g| g.map_monomials(self.ring(), |m| m.shift_left()))
            .collect();
        let _ = field;
        let out = Self::new(self.ring(), kept)?;
        out.groebner()?;
        Ok(out)
    }

    /// `(I : J)`.
    pub fn colon(&self, other: &Self) -> Result<Self> {
        self.colon_with_lower(other, None)
    }

    /// `(I : J)` given an ideal `lower` known to be contained in the
    /// answer. A good lower bound keeps the linear algebra small.
    pub fn colon_with_lower(&self, other: &Self, lower: Option<&Self>) -> Result<Self> {
        self.check(other)?;
        let b = other.groebner()?;
        if b.polys.is_empty() {
            return Err(Error::ColonByZero);
        }
        if b.is_unit() {
            return Ok(self.clone());
        }
        let a = self.groebner()?;
        if a.monomial && b.monomial {
            let mut acc: Option<Self> = None;
            for g in &b.leads {
                let q = self.monomial_colon(g);
                acc = Some(match acc {
                    None => q,
                    Some(p) => p.intersection(&q)?,
                });
            }
            return Ok(acc.unwrap());
        }
        if a.standard().is_some() {
            return self.colon_linear(&b.polys, lower);
        }
        let mut acc: Option<Self> = None;
        for g in &b.polys {
            let q = self.colon_by_element_general(g)?;
            acc = Some(match acc {
                None => q,
                Some(p) => p.intersection(&q)?,
            });
        }
        Ok(acc.unwrap())
    }

    /// `(I : f)`.
    pub fn colon_element(&self, f: &Polynomial<F>, lower: Option<&Self>) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::ColonByZero);
        }
        let a = self.groebner()?;
        if a.monomial && f.is_monomial() {
            return Ok(self.monomial_colon(f.leading_monomial().unwrap()));
        }
        if a.standard().is_some() {
            return self.colon_linear(std::slice::from_ref(f), lower);
        }
        self.colon_by_element_general(f)
    }

    fn monomial_colon(&self, g: &Monomial) -> Self {
        let gb = self.groebner().expect("cached");
        let monos = gb.leads.iter().map(|m| g.gcd(m).quotient_of(m).unwrap()).collect();
        Self::from_monomials(self.ring(), monos)
    }

    fn colon_by_element_general(&self, g: &Polynomial<F>) -> Result<Self> {
        let principal = Self::new(self.ring(), vec![g.clone()])?;
        let inter = self.intersection(&principal)?;
        let mut gens = Vec::new();
        for h in inter.groebner()?.polys.iter() {
            let q = h.exact_div(g)?.ok_or_else(|| Error::IdentityFailed("intersection element not divisible".into()))?;
            gens.push(q);
        }
        let out = Self::new(self.ring(), gens)?;
        out.groebner()?;
        Ok(out)
    }

    /// Kernel of `A/K0 -> (A/I)^s, f -> (f g_1, ..., f g_s)` where `K0` is
    /// `lower` (or `I`). The kernel is `(I : (g))/K0`.
    fn colon_linear(&self, gs: &[Polynomial<F>], lower: Option<&Self>) -> Result<Self> {
        let target = self.groebner()?;
        let tstd = target.standard().unwrap().clone();
        let k0 = match lower {
            Some(l) => {
                self.check(l)?;
                l.clone()
            }
            None => self.clone(),
        };
        let base = k0.groebner()?;
        let Some(dstd) = base.standard().cloned() else {
            return Err(Error::Precondition("lower bound of a colon must be zero-dimensional".into()));
        };
        let field = self.ring().field();
        let nt = tstd.len() as u32;
        let n = dstd.len();
        // increasing monomial order, so each relation leads with the newest
        let rows = (0..n).rev().map(|idx| {
            let s = dstd.monos[idx];
            let mut row: SparseVec<F::Elem> = Vec::new();
            for (k, g) in gs.iter().enumerate() {
                let sg = g.mul_monomial(&s).expect("degree bounded by the quotient");
                let v = target.nf_vector(&sg);
                row.extend(v.into_iter().map(|(i, c)| (i + k as u32 * nt, c)));
            }
            row
        });
        let rels = left_kernel(field, gs.len() * nt as usize, rows);
        if rels.is_empty() {
            return Ok(k0);
        }
        let mut w = Echelon::new(field, n, false);
        for rel in rels {
            let mut v: SparseVec<F::Elem> = rel.into_iter().map(|(p, c)| ((n - 1 - p as usize) as u32, c)).collect();
            v.sort_by_key(|e| e.0);
            w.insert(v, Vec::new());
        }
        Ok(Self::from_gb(base.extend_by_subspace(&w)))
    }
}
