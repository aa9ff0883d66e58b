//! Powers, Ratliff-Rush closures and superficial elements of an m-primary
//! ideal, over the polynomial ring or over a quotient `A/Q` by a regular
//! sequence `Q`.
//!
//! Ideals of `A/Q` are stored as their preimages in `A`, so the `n`-th
//! power of the image of `I` is `I^n + Q` and every length is a colength
//! in `A`.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::ideal::Ideal;
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::reductions::ReductionCertificate;
use crate::ring::Ring;

/// Search and stabilization parameters shared by all computations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Params {
    /// Number of consecutive confirmations required by every window test.
    pub window: usize,
    /// Largest admissible start of a superficiality window; `None` means
    /// `2 * (number of generators) + 6`.
    pub c_max: Option<usize>,
    /// Cap on the length of colon chains.
    pub k_max: usize,
    /// Largest power used for Hilbert functions and closure comparisons.
    pub max_n: usize,
    /// Random candidates tried by generic searches.
    pub trials: usize,
    pub seed: u64,
    /// Largest reduction number searched for.
    pub n_cap: usize,
    /// Largest power `I^n` whose associated graded ring enters `ξ`.
    pub max_power: usize,
    /// Consecutive powers with equal depth needed to settle `ξ`.
    pub xi_window: usize,
}

impl Default for Params {
    fn default() -> Self {
        Self { window: 3, c_max: None, k_max: 12, max_n: 10, trials: 5, seed: 0, n_cap: 10, max_power: 6, xi_window: 2 }
    }
}

/// Plain powers `I^n` in the polynomial ring, shared by every filtration
/// built from the same ideal.
struct PowerTable<F: Field> {
    ideal: Ideal<F>,
    /// least `t` with `m^t` inside `I`
    contains_max: u32,
    powers: Mutex<Vec<(Ideal<F>, u32)>>,
}

impl<F: Field> PowerTable<F> {
    fn new(ideal: &Ideal<F>) -> Result<Self> {
        let t = maximal_power_inside(ideal)?;
        let unit = Ideal::unit(ideal.ring());
        Ok(Self { ideal: ideal.clone(), contains_max: t, powers: Mutex::new(vec![(unit, 0)]) })
    }

    fn get(&self, n: usize) -> Result<Ideal<F>> {
        let mut powers = self.powers.lock().unwrap();
        while powers.len() <= n {
            let (last, t_last) = powers.last().unwrap().clone();
            let next = if self.ideal.is_monomial()? {
                last.product(&self.ideal)?
            } else {
                // m^(t_last + t) lies in I^(k+1); work in the quotient by it
                let bound = t_last + self.contains_max;
                let lower = Ideal::maximal_power(self.ideal.ring(), bound);
                lower.add_products(last.generators(), self.ideal.generators())?
            };
            let t = maximal_power_inside(&next)?;
            powers.push((next, t));
        }
        Ok(powers[n].0.clone())
    }
}

/// Least `t` with `m^t` contained in the m-primary ideal `I`.
pub fn maximal_power_inside<F: Field>(ideal: &Ideal<F>) -> Result<u32> {
    let gb = ideal.groebner()?;
    let std = gb.standard().ok_or_else(|| Error::Precondition("ideal is not zero-dimensional".into()))?;
    let d = ideal.ring().nvars();
    let top = std.monomials().iter().map(|m| m.degree()).max().map_or(0, |t| t + 1);
    // standard monomials bound the answer from below; confirm by normal forms
    let mut t = top;
    loop {
        let all = Ideal::<F>::maximal_power(ideal.ring(), t);
        let ok = all
            .groebner()?
            .leading_monomials()
            .iter()
            .all(|m| gb.nf_monomial(m).is_empty());
        if ok {
            return Ok(t);
        }
        t += 1;
        if t as usize > std.len() + d + top as usize {
            return Err(Error::Precondition("ideal is not primary to the maximal ideal".into()));
        }
    }
}

/// A superficial element together with the window on which
/// `(I^(n+1) : x) = I^n` was verified.
#[derive(Debug)]
pub struct SuperficialCertificate<F: Field> {
    pub element: Polynomial<F>,
    /// least `c` such that the colon equality holds on `[c, c + W]`
    pub window_start: usize,
    pub window_length: usize,
    /// index of the successful candidate within its search
    pub trial: usize,
    pub seed: u64,
    /// whether the h-polynomial identity held, once checked
    pub identity_check: OnceLock<bool>,
    b: Mutex<Vec<u64>>,
    child: Arc<FiltrationCache<F>>,
}

impl<F: Field> SuperficialCertificate<F> {
    /// The filtration of the image ideal in `A/(Q, x)`.
    pub fn quotient(&self) -> &Arc<FiltrationCache<F>> {
        &self.child
    }

    /// Coefficients of `b(z)` computed so far.
    pub fn b_values(&self) -> Vec<u64> {
        self.b.lock().unwrap().clone()
    }
}

/// Ratliff-Rush closure of one power, with the data of both stabilization
/// methods.
#[derive(Debug)]
pub struct ClosureRecord<F: Field> {
    pub degree: usize,
    pub ideal: Ideal<F>,
    pub length: usize,
    pub power_length: usize,
    /// exponent `k` at which the chain `(I^(n+k) : x^k)` stabilized
    pub k_superficial: usize,
    /// least `k` with `(I^(n+k) : I^k)` equal to the closure
    pub k_colon: usize,
    /// an element of the closure outside `I^n`, if any
    pub witness: Option<Polynomial<F>>,
}

impl<F: Field> ClosureRecord<F> {
    pub fn is_trivial(&self) -> bool {
        self.length == self.power_length
    }
}

/// Outcome of comparing closures before and after passing to `A/(x)`.
#[derive(Clone, Debug, Serialize)]
pub struct BehavesWellReport {
    pub holds: bool,
    pub first_failure: Option<usize>,
    pub checked_up_to: usize,
    /// whether the check reached the point beyond which both filtrations
    /// coincide with the powers
    pub complete: bool,
    pub sequence: Vec<String>,
    /// `(n, length of closure image, length of closure in the quotient)`
    pub lengths: Vec<(usize, usize, usize)>,
}

/// Cached data for the `I^s`-adic filtration of `A/Q`.
pub struct FiltrationCache<F: Field> {
    ring: Arc<Ring<F>>,
    table: Arc<PowerTable<F>>,
    stride: usize,
    base: Ideal<F>,
    modulus: Vec<Polynomial<F>>,
    parent: Option<Arc<FiltrationCache<F>>>,
    closure_source: Option<Arc<FiltrationCache<F>>>,
    dim: usize,
    level: usize,
    params: Params,
    powers: Mutex<BTreeMap<usize, Ideal<F>>>,
    closures: Mutex<BTreeMap<usize, Arc<ClosureRecord<F>>>>,
    reference: OnceLock<Result<Arc<SuperficialCertificate<F>>>>,
    reduction: OnceLock<Result<Arc<ReductionCertificate<F>>>>,
}

impl<F: Field> std::fmt::Debug for FiltrationCache<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiltrationCache")
            .field("ideal", &self.table.ideal)
            .field("stride", &self.stride)
            .field("modulus", &self.modulus)
            .field("dim", &self.dim)
            .finish()
    }
}

impl<F: Field> FiltrationCache<F> {
    /// Filtration of an m-primary ideal of the polynomial ring.
    pub fn new(ideal: &Ideal<F>, params: Params) -> Result<Arc<Self>> {
        Self::with_modulus(ideal, Vec::new(), params)
    }

    /// Filtration of the image of `I` in `A/Q`, where the generators of `Q`
    /// form a regular sequence; the dimension is `d - len(Q)`.
    pub fn with_modulus(ideal: &Ideal<F>, modulus: Vec<Polynomial<F>>, params: Params) -> Result<Arc<Self>> {
        let ring = ideal.ring().clone();
        let d = ring.nvars();
        if modulus.len() > d {
            return Err(Error::Precondition("modulus longer than the number of variables".into()));
        }
        let check = ideal.add_elements(&modulus)?;
        if !check.is_mprimary()? {
            let var = check.missing_pure_power()?.unwrap_or_else(|| ring.names()[0].clone());
            return Err(Error::NotMPrimary(var));
        }
        let base_ideal = if ideal.is_mprimary()? { ideal.clone() } else { check.clone() };
        let table = Arc::new(PowerTable::new(&base_ideal)?);
        Ok(Arc::new(Self {
            ring,
            base: table.ideal.clone(),
            table,
            stride: 1,
            modulus: modulus.clone(),
            parent: None,
            closure_source: None,
            dim: d - modulus.len(),
            level: 0,
            params,
            powers: Mutex::new(BTreeMap::new()),
            closures: Mutex::new(BTreeMap::new()),
            reference: OnceLock::new(),
            reduction: OnceLock::new(),
        }))
    }

    /// Filtration by the powers of `I^s` on the same ring. Closures are
    /// shared with `self`, since the closure of an ideal does not depend on
    /// the filtration it is viewed in.
    pub fn power_filtration(self: &Arc<Self>, s: usize) -> Result<Arc<Self>> {
        if self.parent.is_some() || self.stride != 1 {
            return Err(Error::Precondition("power filtrations are built from a base filtration".into()));
        }
        if s == 0 {
            return Err(Error::Precondition("power must be positive".into()));
        }
        if s == 1 {
            return Ok(self.clone());
        }
        Ok(Arc::new(Self {
            ring: self.ring.clone(),
            table: self.table.clone(),
            stride: s,
            base: self.table.get(s)?,
            modulus: self.modulus.clone(),
            parent: None,
            closure_source: Some(self.clone()),
            dim: self.dim,
            level: 0,
            params: self.params.clone(),
            powers: Mutex::new(BTreeMap::new()),
            closures: Mutex::new(BTreeMap::new()),
            reference: OnceLock::new(),
            reduction: OnceLock::new(),
        }))
    }

    /// Filtration of the image ideal in `A/(Q, x)`.
    pub fn quotient_by(self: &Arc<Self>, x: &Polynomial<F>) -> Result<Arc<Self>> {
        if self.dim == 0 {
            return Err(Error::Precondition("cannot cut down a zero-dimensional ring".into()));
        }
        let mut modulus = self.modulus.clone();
        modulus.push(x.clone());
        Ok(Arc::new(Self {
            ring: self.ring.clone(),
            table: self.table.clone(),
            stride: self.stride,
            base: self.base.clone(),
            modulus,
            parent: Some(self.clone()),
            closure_source: None,
            dim: self.dim - 1,
            level: self.level + 1,
            params: self.params.clone(),
            powers: Mutex::new(BTreeMap::new()),
            closures: Mutex::new(BTreeMap::new()),
            reference: OnceLock::new(),
            reduction: OnceLock::new(),
        }))
    }

    pub fn ring(&self) -> &Arc<Ring<F>> {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn stride(&self) -> usize {
        self.stride
    }

    pub fn modulus(&self) -> &[Polynomial<F>] {
        &self.modulus
    }

    /// The ideal whose filtration this is, as an ideal of the polynomial ring
    /// (without the modulus).
    pub fn base(&self) -> &Ideal<F> {
        &self.base
    }

    pub fn base_generators(&self) -> &[Polynomial<F>] {
        self.base.generators()
    }

    /// `I^n` in the polynomial ring.
    pub fn plain_power(&self, n: usize) -> Result<Ideal<F>> {
        self.table.get(self.stride * n)
    }

    /// Preimage of the `n`-th power of the image ideal.
    pub fn power(&self, n: usize) -> Result<Ideal<F>> {
        if let Some(p) = self.powers.lock().unwrap().get(&n) {
            return Ok(p.clone());
        }
        let p = match &self.parent {
            Some(parent) => {
                // adding all cutting elements to the root power at once keeps
                // the linear algebra over the (often monomial) root quotient
                let mut root = parent;
                while let Some(p) = &root.parent {
                    root = p;
                }
                let extra = &self.modulus[root.modulus.len()..];
                root.power(n)?.add_elements(extra)?
            }
            None => self.plain_power(n)?.add_elements(&self.modulus)?,
        };
        p.groebner()?;
        self.powers.lock().unwrap().insert(n, p.clone());
        Ok(p)
    }

    /// Powers computed so far, by index.
    pub fn computed_powers(&self) -> Vec<(usize, Ideal<F>)> {
        self.powers.lock().unwrap().iter().map(|(n, p)| (*n, p.clone())).collect()
    }

    /// Closures computed so far, by index.
    pub fn computed_closures(&self) -> Vec<(usize, Arc<ClosureRecord<F>>)> {
        self.closures.lock().unwrap().iter().map(|(n, c)| (*n, c.clone())).collect()
    }

    pub(crate) fn reduction_slot(&self) -> &OnceLock<Result<Arc<ReductionCertificate<F>>>> {
        &self.reduction
    }

    /// `λ(A / I^n)` in the quotient ring.
    pub fn length(&self, n: usize) -> Result<usize> {
        self.power(n)?
            .colength()?
            .ok_or_else(|| Error::Precondition("power is not primary to the maximal ideal".into()))
    }

    /// The quotient ring itself as an ideal of `A` (its modulus).
    pub fn modulus_ideal(&self) -> Result<Ideal<F>> {
        Ideal::new(&self.ring, self.modulus.clone())
    }

    fn rng(&self, seed: u64, purpose: &str) -> ChaCha8Rng {
        // one independent stream per seed, purpose, stride and descent level
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in purpose.bytes().chain((self.stride as u64).to_le_bytes()).chain((self.level as u64).to_le_bytes()) {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(h);
        rng
    }

    /// Random linear combination of `gens`.
    pub fn random_combination(&self, rng: &mut ChaCha8Rng, gens: &[Polynomial<F>]) -> Polynomial<F> {
        let field = self.ring.field();
        let mut acc = Polynomial::zero(&self.ring);
        for g in gens {
            let c = random_coefficient(field, rng);
            acc = &acc + &g.scale(&c);
        }
        acc
    }

    /// Generic elements of this filtration's ideal, drawn from `seed`.
    pub fn candidates(&self, seed: u64, purpose: &str, count: usize) -> Vec<Polynomial<F>> {
        let mut rng = self.rng(seed, purpose);
        (0..count).map(|_| self.random_combination(&mut rng, self.base_generators())).collect()
    }

    fn c_max(&self) -> usize {
        self.params.c_max.unwrap_or(2 * self.base_generators().len() + 6)
    }

    /// `b_n = λ(A/I^n) - λ(A/(I^(n+1) : x))`, read off from lengths.
    fn b_term(&self, child: &FiltrationCache<F>, n: usize) -> Result<u64> {
        let lhs = self.length(n)? + child.length(n + 1)?;
        let rhs = self.length(n + 1)?;
        if lhs < rhs {
            return Err(Error::IdentityFailed(format!("negative colon length at n = {n}")));
        }
        Ok((lhs - rhs) as u64)
    }

    /// Tests one candidate; `Ok(None)` when no window starts by `c_max`.
    fn certify(
        self: &Arc<Self>,
        x: Polynomial<F>,
        window: usize,
        trial: usize,
        seed: u64,
    ) -> Result<std::result::Result<SuperficialCertificate<F>, Vec<usize>>> {
        let child = self.quotient_by(&x)?;
        let c_max = self.c_max();
        let mut b = Vec::new();
        let mut run = 0usize;
        for n in 0..=c_max + window {
            let bn = self.b_term(&child, n)?;
            b.push(bn);
            run = if bn == 0 { run + 1 } else { 0 };
            if run == window + 1 {
                let c = n - window;
                return Ok(Ok(SuperficialCertificate {
                    element: x,
                    window_start: c,
                    window_length: window,
                    trial,
                    seed,
                    identity_check: OnceLock::new(),
                    b: Mutex::new(b),
                    child,
                }));
            }
        }
        Ok(Err(b.iter().enumerate().filter(|(_, v)| **v != 0).map(|(i, _)| i).collect()))
    }

    /// Searches `trials` random combinations of the generators for one with
    /// `(I^(n+1) : x) = I^n` on a window `[c, c + window]`, `c <= c_max`.
    pub fn find_superficial(self: &Arc<Self>, trials: usize, window: usize, seed: u64) -> Result<Arc<SuperficialCertificate<F>>> {
        if self.dim == 0 {
            return Err(Error::Precondition("a zero-dimensional ring has no superficial elements".into()));
        }
        let mut rng = self.rng(seed, "superficial");
        let mut best: Option<(usize, String, Vec<usize>)> = None;
        for t in 0..trials {
            let x = self.random_combination(&mut rng, self.base_generators());
            if x.is_zero() {
                continue;
            }
            match self.certify(x.clone(), window, t, seed)? {
                Ok(cert) => return Ok(Arc::new(cert)),
                Err(failing) => {
                    let score = failing.len();
                    if best.as_ref().is_none_or(|b| score < b.0) {
                        best = Some((score, x.to_string(), failing));
                    }
                }
            }
        }
        let (_, best, failing) = best.unwrap_or((0, "none".into(), Vec::new()));
        Err(Error::NoSuperficial { trials, best, failing })
    }

    /// Certifies a given element instead of a random one.
    pub fn certify_element(self: &Arc<Self>, x: &Polynomial<F>) -> Result<Arc<SuperficialCertificate<F>>> {
        if self.dim == 0 {
            return Err(Error::Precondition("a zero-dimensional ring has no superficial elements".into()));
        }
        if !self.base.contains(x)? {
            return Err(Error::NotSuperficial(x.to_string(), "not an element of the ideal".into()));
        }
        match self.certify(x.clone(), self.params.window, 0, self.params.seed)? {
            Ok(c) => Ok(Arc::new(c)),
            Err(failing) => Err(Error::NotSuperficial(
                x.to_string(),
                format!("colon equality fails at n = {failing:?}"),
            )),
        }
    }

    /// The superficial element used internally, drawn with the cache's seed.
    pub fn superficial(self: &Arc<Self>) -> Result<Arc<SuperficialCertificate<F>>> {
        self.reference
            .get_or_init(|| self.find_superficial(self.params.trials, self.params.window, self.params.seed))
            .clone()
    }

    /// Coefficient `b_n` of `b(z)` for a certified element.
    pub fn b_coefficient(&self, cert: &SuperficialCertificate<F>, n: usize) -> Result<u64> {
        if let Some(v) = cert.b.lock().unwrap().get(n) {
            return Ok(*v);
        }
        let mut out = 0;
        let start = cert.b.lock().unwrap().len();
        for m in start..=n {
            out = self.b_term(&cert.child, m)?;
            cert.b.lock().unwrap().push(out);
        }
        Ok(out)
    }

    /// `b(z)`, coefficients lowest degree first. Terms vanish from the
    /// certificate window on, so the list has length at most `c`.
    pub fn b_polynomial(&self, cert: &SuperficialCertificate<F>) -> Result<Vec<u64>> {
        let c = cert.window_start;
        for n in c..=c + cert.window_length {
            if self.b_coefficient(cert, n)? != 0 {
                return Err(Error::NotSuperficial(cert.element.to_string(), format!("b_{n} is nonzero")));
            }
        }
        let mut b: Vec<u64> = (0..c).map(|n| self.b_coefficient(cert, n)).collect::<Result<_>>()?;
        while b.last() == Some(&0) {
            b.pop();
        }
        Ok(b)
    }

    /// Index from which every closure equals the power.
    pub fn closure_bound(self: &Arc<Self>) -> Result<usize> {
        if let Some(src) = &self.closure_source {
            let c = src.closure_bound()?;
            return Ok(c.div_ceil(self.stride).max(1));
        }
        Ok(self.superficial()?.window_start.max(1))
    }

    /// Ratliff-Rush closure of the `n`-th power.
    ///
    /// With `x` superficial on `[c, c + W]`, the chain `(I^(n+k) : x^k)` is
    /// constant from `k = c - n` on, which gives the closure directly. The
    /// chain `(I^(n+k) : I^k)` is then followed until it reaches the same
    /// ideal; the two must meet within `k_max` steps.
    pub fn closure(self: &Arc<Self>, n: usize) -> Result<Arc<ClosureRecord<F>>> {
        if let Some(rec) = self.closures.lock().unwrap().get(&n) {
            return Ok(rec.clone());
        }
        let rec = Arc::new(self.compute_closure(n)?);
        self.closures.lock().unwrap().insert(n, rec.clone());
        Ok(rec)
    }

    fn compute_closure(self: &Arc<Self>, n: usize) -> Result<ClosureRecord<F>> {
        if let Some(src) = &self.closure_source {
            let r = src.closure(self.stride * n)?;
            return Ok(ClosureRecord {
                degree: n,
                ideal: r.ideal.clone(),
                length: r.length,
                power_length: r.power_length,
                k_superficial: r.k_superficial,
                k_colon: r.k_colon,
                witness: r.witness.clone(),
            });
        }
        let pn = self.power(n)?;
        let power_length = self.length(n)?;
        if n == 0 {
            return Ok(ClosureRecord {
                degree: 0,
                ideal: pn,
                length: 0,
                power_length: 0,
                k_superficial: 0,
                k_colon: 0,
                witness: None,
            });
        }
        if self.dim == 0 {
            return Err(Error::Precondition("closures need a ring of positive dimension".into()));
        }
        let cert = self.superficial()?;
        let c = cert.window_start;
        if n >= c {
            // (I^(n+1) : x) = I^n, so both chains are constant from k = 0
            if self.b_coefficient(&cert, n)? != 0 {
                return Err(Error::NotSuperficial(cert.element.to_string(), format!("colon equality fails at n = {n}")));
            }
            return Ok(ClosureRecord {
                degree: n,
                ideal: pn,
                length: power_length,
                power_length,
                k_superficial: 0,
                k_colon: 0,
                witness: None,
            });
        }
        let kx = c - n;
        if kx > self.params.k_max {
            return Err(Error::UnstableClosure { degree: n, cap: self.params.k_max, partial: vec![power_length] });
        }
        let target = self.power(c)?;
        let tgb = target.groebner()?;
        let f = tgb.vector_to_poly(&tgb.nf_power(&cert.element, kx as u32));
        let closure = if f.is_zero() {
            Ideal::unit(&self.ring)
        } else {
            target.colon_element(&f, Some(&pn))?
        };
        let length = closure.colength()?.unwrap_or(0);
        let pgb = pn.groebner()?;
        let extra: Vec<Polynomial<F>> = closure
            .groebner()?
            .polys()
            .iter()
            .filter(|g| !pgb.normal_form(g).is_zero())
            .cloned()
            .collect();
        let witness = extra.first().cloned();
        let mut partial = Vec::new();
        let mut k_colon = None;
        for k in 0..=self.params.k_max {
            let pk = self.plain_power(k)?;
            if self.power(n + k)?.contains_products(&extra, pk.generators())? {
                k_colon = Some(k);
                break;
            }
            partial.push(k);
        }
        let Some(k_colon) = k_colon else {
            return Err(Error::UnstableClosure { degree: n, cap: self.params.k_max, partial: vec![power_length, length] });
        };
        Ok(ClosureRecord { degree: n, ideal: closure, length, power_length, k_superficial: kx, k_colon, witness })
    }

    /// Coefficient of `z^n` in `r(z)`: `λ(closure(n+1) / I^(n+1))`.
    pub fn r_coefficient(self: &Arc<Self>, n: usize) -> Result<u64> {
        let rec = self.closure(n + 1)?;
        Ok((rec.power_length - rec.length) as u64)
    }

    /// `r(z)` up to the last nonzero term, together with the last index
    /// examined.
    pub fn r_polynomial(self: &Arc<Self>) -> Result<(Vec<u64>, usize)> {
        let bound = self.closure_bound()?;
        let w = self.params.window;
        let mut coeffs = Vec::new();
        let mut run = 0;
        let mut n = 0;
        loop {
            let v = self.r_coefficient(n)?;
            coeffs.push(v);
            run = if v == 0 { run + 1 } else { 0 };
            if n + 1 >= bound && run >= w {
                break;
            }
            n += 1;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Ok((coeffs, n))
    }

    /// Least `n >= 1` with `closure(n) != I^n`, if any.
    pub fn first_closure_gap(self: &Arc<Self>) -> Result<Option<usize>> {
        let bound = self.closure_bound()?;
        for n in 1..bound {
            if !self.closure(n)?.is_trivial() {
                return Ok(Some(n));
            }
        }
        Ok(None)
    }

    /// Builds `x_1, ..., x_s` with each `x_i` superficial for the image of
    /// the ideal modulo the previous ones.
    pub fn superficial_sequence(self: &Arc<Self>, s: usize, seed: u64) -> Result<Vec<Arc<SuperficialCertificate<F>>>> {
        if s == 0 || s >= self.dim.max(1) {
            return Err(Error::Precondition(format!("sequence length must lie in [1, {}]", self.dim.saturating_sub(1))));
        }
        let mut out: Vec<Arc<SuperficialCertificate<F>>> = Vec::new();
        let mut cur = self.clone();
        for _ in 0..s {
            let cert = cur.find_superficial(self.params.trials, self.params.window, seed)?;
            cur = cert.child.clone();
            out.push(cert);
        }
        Ok(out)
    }

    /// Whether the Ratliff-Rush filtration maps onto that of `A/(xs)`:
    /// compares the image of `closure(n)` with the closure computed in the
    /// quotient. The image is always contained in it, so lengths decide.
    pub fn behaves_well_mod(
        self: &Arc<Self>,
        sequence: &[Arc<SuperficialCertificate<F>>],
        max_n: usize,
    ) -> Result<BehavesWellReport> {
        let Some(last) = sequence.last() else {
            return Err(Error::Precondition("empty superficial sequence".into()));
        };
        let quotient = last.child.clone();
        let xs: Vec<Polynomial<F>> = sequence.iter().map(|c| c.element.clone()).collect();
        let bound = self.closure_bound()?.max(quotient.closure_bound()?);
        let up_to = bound.min(max_n.max(1));
        let mut lengths = Vec::new();
        let mut first_failure = None;
        for n in 1..=up_to {
            let image = self.closure(n)?.ideal.add_elements(&xs)?;
            let lhs = image.colength()?.unwrap_or(0);
            let rhs = quotient.closure(n)?.length;
            if lhs < rhs {
                return Err(Error::IdentityFailed(format!(
                    "image of the closure is not contained in the closure of the image at n = {n}"
                )));
            }
            lengths.push((n, lhs, rhs));
            if lhs != rhs && first_failure.is_none() {
                first_failure = Some(n);
            }
        }
        Ok(BehavesWellReport {
            holds: first_failure.is_none(),
            first_failure,
            checked_up_to: up_to,
            complete: up_to >= bound,
            sequence: xs.iter().map(|x| x.to_string()).collect(),
            lengths,
        })
    }
}

/// Random nonzero coefficient: an integer in `[-64, 64]` over the
/// rationals, a uniform unit over a prime field.
pub fn random_coefficient<F: Field>(field: &F, rng: &mut ChaCha8Rng) -> F::Elem {
    match field.size() {
        Some(p) => field.from_i64(rng.gen_range(1..p) as i64),
        None => {
            let mut v = 0i64;
            while v == 0 {
                v = rng.gen_range(-64..=64);
            }
            field.from_i64(v)
        }
    }
}

/// Monomials of degree `t` in `d` variables.
pub fn monomials_of_degree(d: usize, t: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; d];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(Monomial::from_exponents(cur).unwrap());
            cur[i] = 0;
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    if d > 0 {
        rec(0, t, &mut cur, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::monomial::MonomialOrder;
    use crate::parse::parse_polynomial_list;

    fn cache(vars: &[&str], gens: &str) -> Arc<FiltrationCache<Rationals>> {
        let r = Ring::new(vars, Rationals, MonomialOrder::DegRevLex).unwrap();
        let i = Ideal::new(&r, parse_polynomial_list(&r, gens).unwrap()).unwrap();
        FiltrationCache::new(&i, Params::default()).unwrap()
    }

    #[test]
    fn maximal_ideal_is_closed() {
        let c = cache(&["x", "y"], "x, y");
        for n in 1..=4 {
            assert!(c.closure(n).unwrap().is_trivial());
        }
        assert_eq!(c.r_polynomial().unwrap().0, Vec::<u64>::new());
        assert_eq!(c.superficial().unwrap().window_start, 0);
    }

    #[test]
    fn closure_adds_the_middle_monomial() {
        let c = cache(&["x", "y"], "x^4, x^3*y, x*y^3, y^4");
        let rec = c.closure(1).unwrap();
        let r = c.ring().clone();
        let expected = Ideal::new(&r, parse_polynomial_list(&r, "x^4, x^3*y, x*y^3, y^4, x^2*y^2").unwrap()).unwrap();
        assert!(rec.ideal.equals(&expected).unwrap());
        // brute-force chain (I^(1+k) : I^k), k = 1..4, stabilizes at the same ideal
        let i = c.base().clone();
        let mut last = None;
        for k in 1..=4u32 {
            let q = i.power(1 + k).unwrap().colon(&i.power(k).unwrap()).unwrap();
            last = Some(q);
        }
        assert!(last.unwrap().equals(&expected).unwrap());
        assert_eq!(c.r_coefficient(0).unwrap(), 1);
    }

    #[test]
    fn complete_intersection_has_trivial_closures() {
        let c = cache(&["x", "y"], "x^2, y^2");
        for n in 1..=5 {
            assert!(c.closure(n).unwrap().is_trivial());
        }
        let cert = c.superficial().unwrap();
        assert_eq!(c.b_polynomial(&cert).unwrap(), Vec::<u64>::new());
    }

    #[test]
    fn zero_trials_is_an_error() {
        let c = cache(&["x", "y"], "x, y");
        assert!(matches!(c.find_superficial(0, 3, 1), Err(Error::NoSuperficial { .. })));
    }

    #[test]
    fn marley_plane_ideal_has_a_gap() {
        let c = cache(&["x", "y"], "x^7, x^6*y, x*y^6, y^7");
        let cert = c.superficial().unwrap();
        assert!(cert.window_start <= 2 * 4 + 6);
        assert!(!c.b_polynomial(&cert).unwrap().is_empty());
        assert_eq!(c.first_closure_gap().unwrap(), Some(1));
        assert!(c.closure(1).unwrap().witness.is_some());
    }

    #[test]
    fn powers_of_a_filtration_share_closures() {
        let c = cache(&["x", "y"], "x^4, x^3*y, x*y^3, y^4");
        let c2 = c.power_filtration(2).unwrap();
        assert_eq!(c2.length(1).unwrap(), c.length(2).unwrap());
        assert_eq!(c2.closure(1).unwrap().length, c.closure(2).unwrap().length);
    }

    #[test]
    fn degree_monomials() {
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_of_degree(2, 5).len(), 6);
    }
}
