//! Sparse row echelon forms over an exact field.
//!
//! Vectors are lists of `(column, value)` sorted by column. Column 0 is
//! treated as the most significant one, so the pivot of a row is its first
//! entry. Over the rationals rows are combined fraction-free and kept
//! primitive, which bounds coefficient growth by the size of the minors.

use crate::field::Field;

pub type SparseVec<E> = Vec<(u32, E)>;

const NO_ROW: u32 = u32::MAX;

/// Elimination steps between content removals over the rationals.
const NORMALIZE_EVERY: usize = 32;

/// Result of feeding a vector into an [`Echelon`].
pub enum Insert<E> {
    /// New pivot row at this position.
    Pivot(usize),
    /// The vector was dependent; the payload is its tag after reduction,
    /// i.e. a relation among the inserted vectors.
    Dependent(SparseVec<E>),
}

/// Incrementally built row echelon form, optionally tracking for each row
/// the combination of inserted vectors it came from.
pub struct Echelon<F: Field> {
    field: F,
    rows: Vec<SparseVec<F::Elem>>,
    tags: Vec<SparseVec<F::Elem>>,
    pivot_row: Vec<u32>,
    track: bool,
}

impl<F: Field> Echelon<F> {
    pub fn new(field: &F, ncols: usize, track: bool) -> Self {
        Self {
            field: field.clone(),
            rows: Vec::new(),
            tags: Vec::new(),
            pivot_row: vec![NO_ROW; ncols],
            track,
        }
    }

    pub fn ncols(&self) -> usize {
        self.pivot_row.len()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec<F::Elem>] {
        &self.rows
    }

    pub fn is_pivot(&self, col: u32) -> bool {
        self.pivot_row[col as usize] != NO_ROW
    }

    /// Eliminates pivot columns from the front of `v` until its first entry
    /// is a free column or `v` vanishes.
    pub fn reduce_top(&self, v: &mut SparseVec<F::Elem>, mut tag: Option<&mut SparseVec<F::Elem>>) {
        let mut steps = 0usize;
        while let Some((col, _)) = v.first() {
            let r = self.pivot_row[*col as usize];
            if r == NO_ROW {
                break;
            }
            self.eliminate(v, 0, r as usize, tag.as_deref_mut());
            steps += 1;
            if F::FRACTION_FREE && steps % NORMALIZE_EVERY == 0 {
                self.normalize(v, tag.as_deref_mut());
            }
        }
    }

    /// Eliminates every pivot column from `v`. Returns the factor `s` with
    /// `result = s * v_in - (combination of rows)`.
    pub fn reduce_full(&self, v: &mut SparseVec<F::Elem>) -> F::Elem {
        let f = &self.field;
        let mut scale = f.one();
        let mut pos = 0usize;
        let mut steps = 0usize;
        while pos < v.len() {
            let r = self.pivot_row[v[pos].0 as usize];
            if r == NO_ROW {
                pos += 1;
                continue;
            }
            let a = self.eliminate(v, pos, r as usize, None);
            if !f.is_one(&a) {
                scale = f.mul(&scale, &a);
            }
            steps += 1;
            if F::FRACTION_FREE && steps % NORMALIZE_EVERY == 0 {
                let s = f.normalizer(v.iter().map(|e| &e.1));
                if !f.is_one(&s) {
                    scale_vec(f, v, &s);
                    scale = f.mul(&scale, &s);
                }
            }
        }
        scale
    }

    /// Replaces `v` by `a*v - b*row` so that the entry at `pos` vanishes.
    /// Returns `a`.
    fn eliminate(
        &self,
        v: &mut SparseVec<F::Elem>,
        pos: usize,
        r: usize,
        tag: Option<&mut SparseVec<F::Elem>>,
    ) -> F::Elem {
        let f = &self.field;
        let row = &self.rows[r];
        let (a, b) = f.cancel_pair(&row[0].1, &v[pos].1);
        *v = axpy(f, v, &a, row, &b);
        if let Some(t) = tag {
            *t = axpy(f, t, &a, &self.tags[r], &b);
        }
        a
    }

    fn normalize(&self, v: &mut SparseVec<F::Elem>, tag: Option<&mut SparseVec<F::Elem>>) {
        let f = &self.field;
        // a tracked tag must stay proportional to its row
        let s = match tag.as_deref() {
            Some(t) => f.normalizer(v.iter().chain(t.iter()).map(|e| &e.1)),
            None => f.normalizer(v.iter().map(|e| &e.1)),
        };
        if f.is_one(&s) {
            return;
        }
        scale_vec(f, v, &s);
        if let Some(t) = tag {
            scale_vec(f, t, &s);
        }
    }

    /// Top-reduces `v` and stores it as a new row when it survives. With
    /// tracking enabled `tag` names the vector (usually a unit vector).
    pub fn insert(&mut self, mut v: SparseVec<F::Elem>, mut tag: SparseVec<F::Elem>) -> Insert<F::Elem> {
        if self.track {
            self.reduce_top(&mut v, Some(&mut tag));
        } else {
            self.reduce_top(&mut v, None);
        }
        if v.is_empty() {
            if self.track {
                let s = self.field.normalizer(tag.iter().map(|e| &e.1));
                scale_vec(&self.field, &mut tag, &s);
            }
            return Insert::Dependent(tag);
        }
        let f = &self.field;
        // the normalizer takes its sign from the first entry, the pivot
        let s = if self.track {
            f.normalizer(v.iter().chain(tag.iter()).map(|e| &e.1))
        } else {
            f.normalizer(v.iter().map(|e| &e.1))
        };
        scale_vec(f, &mut v, &s);
        if self.track {
            scale_vec(f, &mut tag, &s);
        }
        let idx = self.rows.len();
        self.pivot_row[v[0].0 as usize] = idx as u32;
        self.rows.push(v);
        if self.track {
            self.tags.push(tag);
        }
        Insert::Pivot(idx)
    }

    /// Brings every row into fully reduced form (each pivot column is zero
    /// in all other rows). Tags are not maintained by this step.
    pub fn make_reduced(&mut self) {
        let f = self.field.clone();
        for i in (0..self.rows.len()).rev() {
            let mut v = std::mem::take(&mut self.rows[i]);
            let lead = v.remove(0);
            let mut tail = v;
            self.pivot_row[lead.0 as usize] = NO_ROW;
            let s = self.reduce_full(&mut tail);
            self.pivot_row[lead.0 as usize] = i as u32;
            let mut row = vec![(lead.0, f.mul(&lead.1, &s))];
            row.extend(tail);
            let n = f.normalizer(row.iter().map(|e| &e.1));
            scale_vec(&f, &mut row, &n);
            self.rows[i] = row;
        }
        self.track = false;
        self.tags.clear();
    }
}

pub(crate) fn scale_vec<F: Field>(f: &F, v: &mut SparseVec<F::Elem>, s: &F::Elem) {
    if f.is_one(s) {
        return;
    }
    for e in v.iter_mut() {
        e.1 = f.mul(&e.1, s);
    }
}

/// `a*x - b*y` for sparse vectors.
pub(crate) fn axpy<F: Field>(
    f: &F,
    x: &SparseVec<F::Elem>,
    a: &F::Elem,
    y: &SparseVec<F::Elem>,
    b: &F::Elem,
) -> SparseVec<F::Elem> {
    let a_one = f.is_one(a);
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            let c = if a_one { x[i].1.clone() } else { f.mul(a, &x[i].1) };
            out.push((x[i].0, c));
            i += 1;
        } else if take_y {
            out.push((y[j].0, f.neg(&f.mul(b, &y[j].1))));
            j += 1;
        } else {
            let xa = if a_one { x[i].1.clone() } else { f.mul(a, &x[i].1) };
            let c = f.sub(&xa, &f.mul(b, &y[j].1));
            if !f.is_zero(&c) {
                out.push((x[i].0, c));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Rank of a list of sparse vectors.
pub fn rank<F: Field>(field: &F, ncols: usize, vectors: impl IntoIterator<Item = SparseVec<F::Elem>>) -> usize {
    let mut e = Echelon::new(field, ncols, false);
    for v in vectors {
        e.insert(v, Vec::new());
    }
    e.rank()
}

/// Basis of the left kernel: relations `sum c_i v_i = 0`, returned as
/// sparse vectors indexed by the position of `v_i` in the input. Relation
/// `k` has its last nonzero entry at a distinct position.
pub fn left_kernel<F: Field>(field: &F, ncols: usize, vectors: impl IntoIterator<Item = SparseVec<F::Elem>>) -> Vec<SparseVec<F::Elem>> {
    let mut e = Echelon::new(field, ncols, true);
    let mut out = Vec::new();
    for (i, v) in vectors.into_iter().enumerate() {
        if let Insert::Dependent(tag) = e.insert(v, vec![(i as u32, field.one())]) {
            out.push(tag);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::field::Rat;

    fn q(rows: &[&[i64]]) -> Vec<SparseVec<Rat>> {
        let f = Rationals;
        rows.iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, &c)| (i as u32, f.from_i64(c)))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn rank_of_small_matrices() {
        let m = q(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(rank(&Rationals, 3, m), 2);
        let m = q(&[&[2, 0, 0], &[0, 3, 0], &[0, 0, 5]]);
        assert_eq!(rank(&Rationals, 3, m), 3);
    }

    #[test]
    fn kernel_relations_vanish() {
        let rows = q(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9], &[2, 4, 6]]);
        let ker = left_kernel(&Rationals, 3, rows.clone());
        assert_eq!(ker.len(), 2);
        let f = Rationals;
        for rel in &ker {
            let mut acc = vec![f.zero(); 3];
            for (i, c) in rel {
                for (j, v) in &rows[*i as usize] {
                    acc[*j as usize] = f.add(&acc[*j as usize], &f.mul(c, v));
                }
            }
            assert!(acc.iter().all(|c| f.is_zero(c)));
        }
    }

    #[test]
    fn full_reduction_clears_pivots() {
        let f = PrimeField::new(101).unwrap();
        let mut e = Echelon::new(&f, 4, false);
        e.insert(vec![(0, 1), (1, 5), (3, 2)], vec![]);
        e.insert(vec![(1, 3), (2, 7)], vec![]);
        e.make_reduced();
        let mut v = vec![(0, 4), (1, 1), (2, 9), (3, 1)];
        e.reduce_full(&mut v);
        assert!(v.iter().all(|(c, _)| !e.is_pivot(*c)));
        for r in e.rows() {
            for (c, _) in &r[1..] {
                assert!(!e.is_pivot(*c));
            }
        }
    }

    #[test]
    fn rational_rows_stay_integral() {
        let rows = q(&[&[6, 4, 2], &[3, 7, 1]]);
        let mut e = Echelon::new(&Rationals, 3, false);
        for r in rows {
            e.insert(r, vec![]);
        }
        for r in e.rows() {
            assert!(r.iter().all(|(_, c)| c.is_integer()));
        }
    }
}
