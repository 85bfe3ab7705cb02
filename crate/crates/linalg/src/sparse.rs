//! Sparse vectors and unit-pivot column elimination.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::int::Int;
use crate::matrix::Matrix;
use crate::ring::RingSpec;

/// Sparse vector: strictly increasing indices, no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct SparseVec {
    entries: Vec<(usize, Int)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(i: usize) -> Self {
        SparseVec { entries: vec![(i, Int::ONE)] }
    }

    /// Builds a normalized vector; repeated indices are summed.
    pub fn from_entries<I>(ring: RingSpec, items: I) -> Self
    where
        I: IntoIterator<Item = (usize, Int)>,
    {
        let mut v: Vec<(usize, Int)> = items.into_iter().collect();
        v.sort_by_key(|(i, _)| *i);
        let mut out: Vec<(usize, Int)> = Vec::with_capacity(v.len());
        for (i, x) in v {
            match out.last_mut() {
                Some((j, acc)) if *j == i => *acc = ring.add(acc, &x),
                _ => out.push((i, ring.reduce(&x))),
            }
        }
        out.retain(|(_, x)| !x.is_zero());
        SparseVec { entries: out }
    }

    pub fn from_dense(ring: RingSpec, xs: &[Int]) -> Self {
        SparseVec::from_entries(ring, xs.iter().enumerate().map(|(i, x)| (i, x.clone())))
    }

    pub fn to_dense(&self, n: usize) -> Vec<Int> {
        let mut out = vec![Int::ZERO; n];
        for (i, x) in &self.entries {
            out[*i] = x.clone();
        }
        out
    }

    pub fn entries(&self) -> &[(usize, Int)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn get(&self, i: usize) -> Int {
        match self.entries.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(k) => self.entries[k].1.clone(),
            Err(_) => Int::ZERO,
        }
    }

    /// `self + k·other`
    pub fn axpy(&self, ring: RingSpec, k: &Int, other: &SparseVec) -> SparseVec {
        if k.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some((j, y))) => {
                    out.push((*j, ring.mul(k, y)));
                    b.next();
                }
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        out.push((*j, ring.mul(k, y)));
                        b.next();
                    } else {
                        let s = ring.add(x, &ring.mul(k, y));
                        if !s.is_zero() {
                            out.push((*i, s));
                        }
                        a.next();
                        b.next();
                    }
                }
            }
        }
        out.retain(|(_, x)| !x.is_zero());
        SparseVec { entries: out }
    }

    pub fn scale(&self, ring: RingSpec, k: &Int) -> SparseVec {
        SparseVec::from_entries(ring, self.entries.iter().map(|(i, x)| (*i, ring.mul(k, x))))
    }

    /// Re-indexes through `f`; entries mapped to `None` are dropped.
    pub fn remap(&self, ring: RingSpec, f: impl Fn(usize) -> Option<usize>) -> SparseVec {
        SparseVec::from_entries(
            ring,
            self.entries.iter().filter_map(|(i, x)| f(*i).map(|j| (j, x.clone()))),
        )
    }

    /// Keeps only indices below `n`.
    pub fn truncate(&self, n: usize) -> SparseVec {
        SparseVec {
            entries: self.entries.iter().filter(|(i, _)| *i < n).cloned().collect(),
        }
    }
}

/// Sum `Σ coeff · vectors[index]`, with `vectors` given by a closure.
pub(crate) fn combine<'a, F>(ring: RingSpec, v: &SparseVec, image: F) -> SparseVec
where
    F: Fn(usize) -> &'a SparseVec,
{
    let mut acc: Vec<(usize, Int)> = Vec::new();
    for (i, x) in v.entries() {
        for (j, y) in image(*i).entries() {
            acc.push((*j, ring.mul(x, y)));
        }
    }
    SparseVec::from_entries(ring, acc)
}

pub(crate) fn dense_from_columns(ring: RingSpec, rows: usize, cols: &[SparseVec]) -> Matrix {
    let mut m = Matrix::zeros(ring, rows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        for (i, x) in c.entries() {
            m.set(*i, j, x.clone());
        }
    }
    m
}

#[derive(Clone, Debug)]
pub(crate) struct Pivot {
    pub row: usize,
    pub col: usize,
    pub unit: Int,
}

/// Outcome of [`eliminate`]. `columns[j]` is the final state of column `j`
/// (for a pivot column: its state when it was chosen as pivot).
#[derive(Debug)]
pub(crate) struct Elimination {
    pub pivots: Vec<Pivot>,
    pub columns: Vec<SparseVec>,
    pub zero_cols: Vec<usize>,
    pub residual: Vec<usize>,
    pub tracks: Vec<SparseVec>,
    pub pivot_rows: Vec<bool>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum ColState {
    Active,
    Pivot,
    Zero,
}

/// Column elimination using unit pivots only.
///
/// Each pivot `(g, c)` clears row `g` from every other column by column
/// operations; afterwards no active column touches a pivot row. Columns that
/// become zero record (when `track` is set) the combination of original
/// columns that produced them. The remaining nonzero columns have no unit
/// entries and form the residual.
pub(crate) fn eliminate(ring: RingSpec, nrows: usize, mut cols: Vec<SparseVec>, track: bool) -> Elimination {
    let ncols = cols.len();
    let mut tracks: Vec<SparseVec> = if track {
        (0..ncols).map(SparseVec::unit).collect()
    } else {
        Vec::new()
    };
    let mut occ: Vec<Vec<usize>> = vec![Vec::new(); nrows];
    let mut state = vec![ColState::Active; ncols];
    let mut zero_cols = Vec::new();
    let mut heap = BinaryHeap::new();
    for (j, c) in cols.iter().enumerate() {
        if c.is_zero() {
            state[j] = ColState::Zero;
            zero_cols.push(j);
            continue;
        }
        for (i, _) in c.entries() {
            occ[*i].push(j);
        }
        heap.push(Reverse((c.len(), j)));
    }

    let mut pivots = Vec::new();
    let mut pivot_rows = vec![false; nrows];
    while let Some(Reverse((len, j))) = heap.pop() {
        if state[j] != ColState::Active || cols[j].len() != len {
            continue;
        }
        let choice = cols[j]
            .entries()
            .iter()
            .filter(|(_, x)| ring.is_unit(x))
            .min_by_key(|(i, _)| (occ[*i].len(), *i))
            .map(|(i, x)| (*i, x.clone()));
        let Some((g, u)) = choice else { continue };
        let u_inv = ring.inv_unit(&u);
        state[j] = ColState::Pivot;
        pivot_rows[g] = true;
        pivots.push(Pivot { row: g, col: j, unit: u.clone() });
        let pivot_col = cols[j].clone();
        let pivot_track = if track { tracks[j].clone() } else { SparseVec::new() };

        let users = std::mem::take(&mut occ[g]);
        for j2 in users {
            if j2 == j || state[j2] != ColState::Active {
                continue;
            }
            let a = cols[j2].get(g);
            if a.is_zero() {
                continue;
            }
            let f = ring.neg(&ring.mul(&a, &u_inv));
            let updated = cols[j2].axpy(ring, &f, &pivot_col);
            for (i, _) in pivot_col.entries() {
                if *i != g && cols[j2].get(*i).is_zero() {
                    occ[*i].push(j2);
                }
            }
            if track {
                tracks[j2] = tracks[j2].axpy(ring, &f, &pivot_track);
            }
            cols[j2] = updated;
            if cols[j2].is_zero() {
                state[j2] = ColState::Zero;
                zero_cols.push(j2);
            } else {
                heap.push(Reverse((cols[j2].len(), j2)));
            }
        }
    }
    let residual = (0..ncols).filter(|&j| state[j] == ColState::Active).collect();
    zero_cols.sort_unstable();
    Elimination { pivots, columns: cols, zero_cols, residual, tracks, pivot_rows }
}

impl Elimination {
    /// The residual block as a dense matrix on the non-pivot rows, together with
    /// the row map `new -> old`.
    pub fn residual_block(&self, ring: RingSpec) -> (Matrix, Vec<usize>) {
        let rows: Vec<usize> = (0..self.pivot_rows.len()).filter(|&i| !self.pivot_rows[i]).collect();
        let mut pos = vec![usize::MAX; self.pivot_rows.len()];
        for (k, &i) in rows.iter().enumerate() {
            pos[i] = k;
        }
        let mut m = Matrix::zeros(ring, rows.len(), self.residual.len());
        for (t, &j) in self.residual.iter().enumerate() {
            for (i, x) in self.columns[j].entries() {
                debug_assert!(pos[*i] != usize::MAX);
                m.set(pos[*i], t, x.clone());
            }
        }
        (m, rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z: RingSpec = RingSpec::Integers;

    fn sv(items: &[(usize, i64)]) -> SparseVec {
        SparseVec::from_entries(Z, items.iter().map(|(i, x)| (*i, Int::from(*x))))
    }

    #[test]
    fn normalization_merges_and_drops_zeros() {
        let v = sv(&[(3, 2), (1, 1), (3, -2), (0, 5)]);
        assert_eq!(v.entries(), &[(0, Int::from(5)), (1, Int::from(1))]);
        let f = SparseVec::from_entries(RingSpec::PrimeField(3), [(0, Int::from(4)), (1, Int::from(3))]);
        assert_eq!(f.entries(), &[(0, Int::from(1))]);
    }

    #[test]
    fn axpy_cancels() {
        let a = sv(&[(0, 1), (2, 3)]);
        let b = sv(&[(0, 1), (1, 1)]);
        assert_eq!(a.axpy(Z, &Int::from(-1), &b), sv(&[(1, -1), (2, 3)]));
    }

    #[test]
    fn binomial_columns_collapse_to_components() {
        // e0 - e1, e1 - e2, e3 - e4 on five rows: components {0,1,2}, {3,4}.
        let cols = vec![sv(&[(0, 1), (1, -1)]), sv(&[(1, 1), (2, -1)]), sv(&[(3, 1), (4, -1)]), sv(&[(0, 1), (2, -1)])];
        let e = eliminate(Z, 5, cols, true);
        assert_eq!(e.pivots.len(), 3);
        assert!(e.residual.is_empty());
        assert_eq!(e.zero_cols, vec![3]);
        // The dependency is col3 - col0 - col1.
        assert_eq!(e.tracks[3], sv(&[(0, -1), (1, -1), (3, 1)]));
    }

    #[test]
    fn non_unit_columns_stay_in_residual() {
        let cols = vec![sv(&[(0, 2), (1, 4)]), sv(&[(1, 6)])];
        let e = eliminate(Z, 2, cols, false);
        assert!(e.pivots.is_empty());
        assert_eq!(e.residual, vec![0, 1]);
        let (m, rows) = e.residual_block(Z);
        assert_eq!(rows, vec![0, 1]);
        assert_eq!(m.get(1, 1), &Int::from(6));
    }
}
