//! Dense exact matrices and their normal forms.

use std::fmt;

use serde::Serialize;

use crate::int::Int;
use crate::ring::RingSpec;
use crate::LinalgError;

/// Dense row-major matrix over a [`RingSpec`]. Entries are kept reduced.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    ring: RingSpec,
    rows: usize,
    cols: usize,
    data: Vec<Int>,
    row_labels: Vec<String>,
    col_labels: Vec<String>,
}

impl Matrix {
    pub fn zeros(ring: RingSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            ring,
            rows,
            cols,
            data: vec![Int::ZERO; rows * cols],
            row_labels: Vec::new(),
            col_labels: Vec::new(),
        }
    }

    pub fn identity(ring: RingSpec, n: usize) -> Self {
        let mut m = Matrix::zeros(ring, n, n);
        for i in 0..n {
            m.data[i * n + i] = Int::ONE;
        }
        m
    }

    pub fn from_rows<T: Into<Int> + Clone>(ring: RingSpec, rows: &[Vec<T>]) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Matrix::zeros(ring, r, c);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(LinalgError::Ragged);
            }
            for (j, x) in row.iter().enumerate() {
                m.set(i, j, x.clone().into());
            }
        }
        Ok(m)
    }

    /// Parses `[[a,b],[c,d]]`.
    pub fn parse(ring: RingSpec, text: &str) -> Result<Self, LinalgError> {
        let rows: Vec<Vec<Int>> =
            serde_json::from_str(text).map_err(|e| LinalgError::Parse(e.to_string()))?;
        Matrix::from_rows(ring, &rows)
    }

    pub fn with_labels(mut self, rows: Vec<String>, cols: Vec<String>) -> Result<Self, LinalgError> {
        let unique = |v: &Vec<String>| {
            let mut s = v.clone();
            s.sort();
            s.dedup();
            s.len() == v.len()
        };
        if rows.len() != self.rows || cols.len() != self.cols || !unique(&rows) || !unique(&cols) {
            return Err(LinalgError::BadLabels);
        }
        self.row_labels = rows;
        self.col_labels = cols;
        Ok(self)
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }
    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        self.data[i * self.cols + j] = self.ring.reduce(&v);
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Int::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t.row_labels = self.col_labels.clone();
        t.col_labels = self.row_labels.clone();
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        if self.ring != other.ring {
            return Err(LinalgError::RingMismatch);
        }
        let mut out = Matrix::zeros(self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = self.ring.add(&out.data[idx], &self.ring.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(Int::ZERO, |acc, (a, b)| {
                    if a.is_zero() || b.is_zero() {
                        acc
                    } else {
                        self.ring.add(&acc, &self.ring.mul(a, b))
                    }
                })
            })
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<Int, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare);
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Int::ONE);
        }
        if let RingSpec::PrimeField(_) = self.ring {
            return Ok(field_det(self));
        }
        let mut a: Vec<Vec<Int>> = self.to_rows();
        let mut sign = 1i32;
        let mut prev = Int::ONE;
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(Int::ZERO),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = num.div_exact(&prev);
                }
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        Ok(if sign < 0 { -d } else { d })
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k · row[src]
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, k: &Int) {
        if k.is_zero() {
            return;
        }
        let ring = self.ring;
        for j in 0..self.cols {
            let s = &self.data[src * self.cols + j];
            if s.is_zero() {
                continue;
            }
            let v = ring.add(&self.data[dst * self.cols + j], &ring.mul(k, s));
            self.data[dst * self.cols + j] = v;
        }
    }

    /// col[dst] += k · col[src]
    pub(crate) fn add_col_multiple(&mut self, dst: usize, src: usize, k: &Int) {
        if k.is_zero() {
            return;
        }
        let ring = self.ring;
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + src];
            if s.is_zero() {
                continue;
            }
            let v = ring.add(&self.data[i * self.cols + dst], &ring.mul(k, s));
            self.data[i * self.cols + dst] = v;
        }
    }

    pub(crate) fn scale_row(&mut self, i: usize, u: &Int) {
        let ring = self.ring;
        for j in 0..self.cols {
            let v = ring.mul(&self.data[i * self.cols + j], u);
            self.data[i * self.cols + j] = v;
        }
    }
}

fn field_det(m: &Matrix) -> Int {
    let ring = m.ring;
    let n = m.rows;
    let mut a = m.clone();
    let mut det = Int::ONE;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a.get(i, k).is_zero()) else {
            return Int::ZERO;
        };
        if p != k {
            a.swap_rows(p, k);
            det = ring.neg(&det);
        }
        let piv = a.get(k, k).clone();
        det = ring.mul(&det, &piv);
        let inv = ring.inv_unit(&piv);
        for i in k + 1..n {
            let f = ring.neg(&ring.mul(a.get(i, k), &inv));
            a.add_row_multiple(i, k, &f);
        }
    }
    det
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[{}]{:?}", self.ring, self.to_rows())
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let r: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
                format!("[{}]", r.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

/// `u · m · v = d` with `u`, `v` invertible and `d` diagonal.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: Matrix,
    pub d: Matrix,
    pub v: Matrix,
    pub rank: usize,
}

impl SmithForm {
    /// The nonzero diagonal entries `d_1 | d_2 | …`.
    pub fn diagonal(&self) -> Vec<Int> {
        (0..self.rank).map(|i| self.d.get(i, i).clone()).collect()
    }
}

/// Smith normal form over ℤ with unimodular transforms.
pub fn smith_normal_form(m: &Matrix) -> Result<SmithForm, LinalgError> {
    if m.ring != RingSpec::Integers {
        return Err(LinalgError::NeedsIntegers);
    }
    Ok(smith(m, true, true))
}

/// Smith form over any supported ring; transforms are skipped when not requested
/// (the corresponding field is then an empty matrix).
pub(crate) fn smith(m: &Matrix, want_u: bool, want_v: bool) -> SmithForm {
    let ring = m.ring;
    let mut a = m.clone();
    a.row_labels.clear();
    a.col_labels.clear();
    let mut u = if want_u { Matrix::identity(ring, a.rows) } else { Matrix::zeros(ring, 0, 0) };
    let mut v = if want_v { Matrix::identity(ring, a.cols) } else { Matrix::zeros(ring, 0, 0) };

    let row_op = |a: &mut Matrix, u: &mut Matrix, dst: usize, src: usize, k: &Int| {
        a.add_row_multiple(dst, src, k);
        if want_u {
            u.add_row_multiple(dst, src, k);
        }
    };
    let col_op = |a: &mut Matrix, v: &mut Matrix, dst: usize, src: usize, k: &Int| {
        a.add_col_multiple(dst, src, k);
        if want_v {
            v.add_col_multiple(dst, src, k);
        }
    };

    let (rows, cols) = (a.rows, a.cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = a.get(i, j);
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| ring.size_cmp(x, a.get(bi, bj)).is_lt()) {
                    best = Some((i, j));
                    if ring.is_unit(x) {
                        break;
                    }
                }
            }
            if best.is_some_and(|(bi, bj)| ring.is_unit(a.get(bi, bj))) {
                break;
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap_rows(t, pi);
        if want_u {
            u.swap_rows(t, pi);
        }
        a.swap_cols(t, pj);
        if want_v {
            v.swap_cols(t, pj);
        }

        loop {
            let mut restart = false;
            for i in t + 1..rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let (q, r) = ring.euclid(a.get(i, t), a.get(t, t));
                row_op(&mut a, &mut u, i, t, &ring.neg(&q));
                if !r.is_zero() {
                    a.swap_rows(t, i);
                    if want_u {
                        u.swap_rows(t, i);
                    }
                    restart = true;
                    break;
                }
            }
            if restart {
                continue;
            }
            for j in t + 1..cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let (q, r) = ring.euclid(a.get(t, j), a.get(t, t));
                col_op(&mut a, &mut v, j, t, &ring.neg(&q));
                if !r.is_zero() {
                    a.swap_cols(t, j);
                    if want_v {
                        v.swap_cols(t, j);
                    }
                    restart = true;
                    break;
                }
            }
            if restart {
                continue;
            }
            // Enforce the divisibility chain: the pivot must divide the trailing block.
            let piv = a.get(t, t).clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !ring.divides(&piv, a.get(i, j))));
            match bad {
                Some(i) => row_op(&mut a, &mut u, t, i, &Int::ONE),
                None => break,
            }
        }
        let unit = ring.normalizing_unit(a.get(t, t));
        if !unit.is_one() {
            a.scale_row(t, &unit);
            if want_u {
                u.scale_row(t, &unit);
            }
        }
        t += 1;
    }
    SmithForm { u, d: a, v, rank: t }
}

/// Row-style Hermite normal form over ℤ: pivots positive, entries above each
/// pivot reduced into `[0, pivot)`, zero rows last. Row lattice is preserved.
pub fn hermite_normal_form(m: &Matrix) -> Result<Matrix, LinalgError> {
    if m.ring != RingSpec::Integers {
        return Err(LinalgError::NeedsIntegers);
    }
    let mut a = m.clone();
    hermite_in_place(&mut a);
    Ok(a)
}

/// Reduced row echelon form over a prime field.
pub fn rref(m: &Matrix) -> Result<Matrix, LinalgError> {
    if !m.ring.is_field() {
        return Err(LinalgError::NeedsField);
    }
    let mut a = m.clone();
    hermite_in_place(&mut a);
    Ok(a)
}

/// Rank over the matrix's ring (over ℤ this is the rank over ℚ).
pub fn rank(m: &Matrix) -> usize {
    let mut a = m.clone();
    hermite_in_place(&mut a)
}

/// Echelon reduction shared by HNF (over ℤ) and RREF (over 𝔽_p).
/// Returns the number of nonzero rows.
pub(crate) fn hermite_in_place(a: &mut Matrix) -> usize {
    let ring = a.ring;
    let (rows, cols) = (a.rows, a.cols);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let piv = (r..rows)
                .filter(|&i| !a.get(i, c).is_zero())
                .min_by(|&x, &y| ring.size_cmp(a.get(x, c), a.get(y, c)));
            let Some(p) = piv else { break };
            a.swap_rows(r, p);
            let mut clean = true;
            for i in r + 1..rows {
                if a.get(i, c).is_zero() {
                    continue;
                }
                let (q, rem) = ring.euclid(a.get(i, c), a.get(r, c));
                a.add_row_multiple(i, r, &ring.neg(&q));
                if !rem.is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if a.get(r, c).is_zero() {
            continue;
        }
        let unit = ring.normalizing_unit(a.get(r, c));
        if !unit.is_one() {
            a.scale_row(r, &unit);
        }
        for i in 0..r {
            if a.get(i, c).is_zero() {
                continue;
            }
            let (q, _) = ring.euclid(a.get(i, c), a.get(r, c));
            a.add_row_multiple(i, r, &ring.neg(&q));
        }
        r += 1;
    }
    r
}

/// Reduces `v` against the nonzero rows of an echelon matrix `h`; the result is
/// zero iff `v` lies in the row span (row lattice over ℤ).
pub(crate) fn reduce_by_echelon(h: &Matrix, v: &mut [Int]) {
    let ring = h.ring;
    for i in 0..h.rows {
        let Some(c) = (0..h.cols).find(|&j| !h.get(i, j).is_zero()) else {
            break;
        };
        if v[c].is_zero() {
            continue;
        }
        let (q, rem) = ring.euclid(&v[c], h.get(i, c));
        if !rem.is_zero() {
            // Not divisible: v is outside the lattice; leave the residue visible.
            return;
        }
        for j in c..h.cols {
            let x = h.get(i, j);
            if !x.is_zero() {
                v[j] = ring.sub(&v[j], &ring.mul(&q, x));
            }
        }
    }
}

/// Column-span membership via a precomputed Smith form (`u` required).
pub(crate) fn in_column_span(snf: &SmithForm, x: &[Int]) -> bool {
    let ring = snf.d.ring;
    let y = snf.u.mul_vec(x);
    y.iter().enumerate().all(|(i, yi)| {
        if i < snf.rank {
            ring.divides(snf.d.get(i, i), yi)
        } else {
            yi.is_zero()
        }
    })
}
