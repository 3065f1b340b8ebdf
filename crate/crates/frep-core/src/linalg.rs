//! Exact linear algebra over the rationals.
//!
//! [`QMatrix`] is a dense row-major matrix with Gauss-Jordan reduction.
//! [`Subspace`] keeps a sparse, fully reduced echelon basis that grows one
//! vector at a time; evaluation and homology code uses it to build spans of
//! many sparse columns without ever materialising the full matrix.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Integer as a rational.
pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num / den` as a rational. Panics when `den == 0`.
pub fn qr(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: QMatrix,
    pub pivot_columns: Vec<usize>,
    pub rank: usize,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from rows; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let v = rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        Self::from_rows(v).expect("ragged integer rows")
    }

    /// Builds an `rows × columns.len()` matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::Shape(format!("column {j} has length {}, expected {rows}", col.len())));
            }
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn from_sparse_columns(rows: usize, columns: &[SparseVec]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, x) in col.iter() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Rational) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn sparse_column(&self, j: usize) -> SparseVec {
        SparseVec::from_dense(&self.column(j))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
            .collect()
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).fold(Rational::zero(), |acc, i| acc + self.get(i, i))
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.rows != other.rows {
            return Err(Error::Shape("hcat with different row counts".into()));
        }
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form. Pivots are found by scanning columns left to
    /// right and, within a column, rows top to bottom.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let pj = m.get(r, j);
                    if !pj.is_zero() {
                        let v = m.get(i, j) - &f * pj;
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        let rank = pivots.len();
        Rref { reduced: m, pivot_columns: pivots, rank }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Columns form a basis of the null space; one column per free variable,
    /// in increasing order of the free column.
    pub fn kernel_basis(&self) -> QMatrix {
        let Rref { reduced, pivot_columns, .. } = self.rref();
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &p in &pivot_columns {
                v[p] = true;
            }
            v
        };
        let free: Vec<usize> = (0..self.cols).filter(|&j| !is_pivot[j]).collect();
        let mut k = QMatrix::zeros(self.cols, free.len());
        for (t, &fj) in free.iter().enumerate() {
            k.set(fj, t, Rational::one());
            for (r, &pc) in pivot_columns.iter().enumerate() {
                let v = -reduced.get(r, fj).clone();
                k.set(pc, t, v);
            }
        }
        k
    }

    /// Some solution of `self · x = b`, with all free variables set to zero.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let rhs = QMatrix::from_columns(self.rows, &[b.to_vec()]).ok()?;
        let aug = self.hcat(&rhs).ok()?;
        let Rref { reduced, pivot_columns, .. } = aug.rref();
        if pivot_columns.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (r, &pc) in pivot_columns.iter().enumerate() {
            x[pc] = reduced.get(r, self.cols).clone();
        }
        Some(x)
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  {}", cells.join(" "))?;
        }
        write!(f, "]")
    }
}

/// A basis of the linear relations `Σ a_i v_i = 0` among `vectors`, each
/// relation given by its coefficient list.
pub fn linear_relations(ambient: usize, vectors: &[SparseVec]) -> Vec<Vec<Rational>> {
    let k = QMatrix::from_sparse_columns(ambient, vectors).kernel_basis();
    (0..k.cols()).map(|j| k.column(j)).collect()
}

/// Result of [`column_span_intersection_and_complement`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanSplit {
    /// Reduced basis of span(W).
    pub sub_basis: QMatrix,
    /// Columns of U that complete `sub_basis` to a basis of span(U).
    pub complement: QMatrix,
}

/// Splits span(U) as span(W) plus a complement taken from U's own columns,
/// chosen greedily left to right. Fails when span(W) is not inside span(U).
pub fn column_span_intersection_and_complement(u: &QMatrix, w: &QMatrix) -> Result<SpanSplit> {
    if u.rows() != w.rows() {
        return Err(Error::Shape("U and W live in different ambient spaces".into()));
    }
    let ambient = u.rows();
    let uspan = Subspace::from_vectors(ambient, (0..u.cols()).map(|j| u.sparse_column(j)));
    let mut sub = Subspace::new(ambient);
    for j in 0..w.cols() {
        let c = w.sparse_column(j);
        if !uspan.contains(&c) {
            return Err(Error::NotSubspace);
        }
        sub.insert(&c);
    }
    let sub_basis = QMatrix::from_sparse_columns(ambient, &sub.basis());
    let mut comp = Vec::new();
    for j in 0..u.cols() {
        let c = u.sparse_column(j);
        if sub.insert(&c).is_some() {
            comp.push(c);
        }
    }
    Ok(SpanSplit { sub_basis, complement: QMatrix::from_sparse_columns(ambient, &comp) })
}

/// Trace of the matrix `M` with `A·B = B·M`, i.e. of `A` restricted to span(B).
pub fn restricted_trace(b: &QMatrix, a: &QMatrix) -> Result<Rational> {
    if a.rows() != a.cols() || a.cols() != b.rows() {
        return Err(Error::Shape("restricted_trace needs square A acting on B's ambient space".into()));
    }
    let ambient = b.rows();
    let mut span = Subspace::new(ambient);
    for j in 0..b.cols() {
        if span.insert(&b.sparse_column(j)).is_none() {
            return Err(Error::Invalid("columns of B are dependent".into()));
        }
    }
    span.trace_of(|v| SparseVec::from_dense(&a.mul_vec(&v.to_dense(ambient))))
}

/// A sparse vector: strictly increasing indices with nonzero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, Rational)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(i: usize) -> Self {
        SparseVec { entries: vec![(i, Rational::one())] }
    }

    pub fn from_dense(v: &[Rational]) -> Self {
        let entries = v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect();
        SparseVec { entries }
    }

    /// Builds from arbitrary `(index, coefficient)` pairs, summing repeats.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, Rational)>) -> Self {
        let mut acc: Vec<(usize, Rational)> = pairs.into_iter().collect();
        acc.sort_by_key(|p| p.0);
        let mut entries: Vec<(usize, Rational)> = Vec::with_capacity(acc.len());
        for (i, x) in acc {
            match entries.last_mut() {
                Some((j, y)) if *j == i => *y += x,
                _ => entries.push((i, x)),
            }
        }
        entries.retain(|(_, x)| !x.is_zero());
        SparseVec { entries }
    }

    pub fn to_dense(&self, len: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); len];
        for (i, x) in &self.entries {
            v[*i] = x.clone();
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.entries.iter().map(|(i, x)| (*i, x))
    }

    pub fn get(&self, i: usize) -> Option<&Rational> {
        self.entries.binary_search_by_key(&i, |p| p.0).ok().map(|k| &self.entries[k].1)
    }

    pub fn leading(&self) -> Option<(usize, &Rational)> {
        self.entries.first().map(|(i, x)| (*i, x))
    }

    pub fn scale(&self, c: &Rational) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec { entries: self.entries.iter().map(|(i, x)| (*i, x * c)).collect() }
    }

    /// `self + c·other`.
    pub fn add_scaled(&self, other: &SparseVec, c: &Rational) -> SparseVec {
        if c.is_zero() {
            return self.clone();
        }
        let (a, b) = (&self.entries, &other.entries);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, &b[j].1 * c));
                j += 1;
            } else {
                let v = &a[i].1 + &b[j].1 * c;
                if !v.is_zero() {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        self.add_scaled(other, &Rational::one())
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        self.add_scaled(other, &-Rational::one())
    }

    /// Shifts every index by `offset`.
    pub fn shifted(&self, offset: usize) -> SparseVec {
        SparseVec { entries: self.entries.iter().map(|(i, x)| (i + offset, x.clone())).collect() }
    }

    /// Entries with index in `start..end`, re-based to start at zero.
    pub fn window(&self, start: usize, end: usize) -> SparseVec {
        let entries =
            self.entries.iter().filter(|(i, _)| *i >= start && *i < end).map(|(i, x)| (i - start, x.clone())).collect();
        SparseVec { entries }
    }

    /// Is the vector a rational multiple of `other`?
    pub fn is_multiple_of(&self, other: &SparseVec) -> bool {
        match (self.leading(), other.leading()) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some((i, x)), Some((j, y))) => i == j && *self == other.scale(&(x / y)),
        }
    }
}

/// A subspace of `ℚ^ambient` kept in fully reduced echelon form: every basis
/// vector has coefficient 1 at its pivot and 0 at every other pivot.
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<SparseVec>,
    pivots: Vec<usize>,
    pivot_row: HashMap<usize, usize>,
}

impl Subspace {
    pub fn new(ambient: usize) -> Self {
        Subspace { ambient, rows: Vec::new(), pivots: Vec::new(), pivot_row: HashMap::new() }
    }

    pub fn from_vectors<I>(ambient: usize, vs: I) -> Self
    where
        I: IntoIterator<Item = SparseVec>,
    {
        let mut s = Self::new(ambient);
        for v in vs {
            if s.dim() == ambient {
                break;
            }
            s.insert(&v);
        }
        s
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    /// The remainder of `v` after subtracting its projection along the pivots.
    /// It is zero exactly when `v` lies in the subspace.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let hits: Vec<(usize, Rational)> =
            v.iter().filter_map(|(i, x)| self.pivot_row.get(&i).map(|&r| (r, x.clone()))).collect();
        if hits.is_empty() {
            return v.clone();
        }
        let mut pairs: Vec<(usize, Rational)> = v.entries.clone();
        for (r, x) in hits {
            for (i, y) in self.rows[r].iter() {
                pairs.push((i, -(y * &x)));
            }
        }
        SparseVec::from_pairs(pairs)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v`; returns the index of the new basis vector, or `None` when
    /// `v` was already in the span.
    pub fn insert(&mut self, v: &SparseVec) -> Option<usize> {
        debug_assert!(v.iter().all(|(i, _)| i < self.ambient));
        let r = self.reduce(v);
        let (p, lead) = r.leading()?;
        let r = r.scale(&lead.recip());
        for row in self.rows.iter_mut() {
            if let Some(c) = row.get(p).cloned() {
                *row = row.add_scaled(&r, &-c);
            }
        }
        self.rows.push(r);
        self.pivots.push(p);
        self.pivot_row.insert(p, self.rows.len() - 1);
        Some(self.rows.len() - 1)
    }

    /// Basis vectors in insertion order.
    pub fn basis(&self) -> Vec<SparseVec> {
        self.rows.clone()
    }

    pub fn basis_ref(&self) -> &[SparseVec] {
        &self.rows
    }

    /// Basis vectors sorted by pivot, i.e. the rows of the reduced row
    /// echelon form of any matrix whose rows span the subspace.
    pub fn canonical_basis(&self) -> Vec<SparseVec> {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| self.pivots[r]);
        order.into_iter().map(|r| self.rows[r].clone()).collect()
    }

    pub fn pivot(&self, row: usize) -> usize {
        self.pivots[row]
    }

    /// Coordinates of `v` in the insertion-order basis. `v` must lie in the span.
    pub fn coordinates(&self, v: &SparseVec) -> Result<Vec<Rational>> {
        if !self.contains(v) {
            return Err(Error::NotInvariant);
        }
        Ok((0..self.rows.len()).map(|r| v.get(self.pivot(r)).cloned().unwrap_or_else(Rational::zero)).collect())
    }

    /// Trace of a linear operator that maps the subspace into itself.
    pub fn trace_of<F>(&self, op: F) -> Result<Rational>
    where
        F: Fn(&SparseVec) -> SparseVec,
    {
        let mut t = Rational::zero();
        for (r, b) in self.rows.iter().enumerate() {
            let image = op(b);
            if !self.contains(&image) {
                return Err(Error::NotInvariant);
            }
            if let Some(x) = image.get(self.pivot(r)) {
                t += x;
            }
        }
        Ok(t)
    }

}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_examples() {
        assert_eq!(QMatrix::from_i64(&[&[1, 2], &[2, 4]]).rank(), 1);
        let r = QMatrix::from_i64(&[&[0, 1], &[1, 0]]).rref();
        assert_eq!(r.rank, 2);
        assert_eq!(r.reduced, QMatrix::identity(2));
        assert_eq!(QMatrix::zeros(0, 0).rank(), 0);
        let m = QMatrix::from_i64(&[&[1, 2, 3], &[2, 4, 7], &[1, 2, 4]]);
        let once = m.rref().reduced;
        assert_eq!(once.rref().reduced, once);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(QMatrix::identity(3).kernel_basis().cols(), 0);
        let k = QMatrix::from_i64(&[&[1, 1]]).kernel_basis();
        assert_eq!(k.column(0), vec![q(-1), q(1)]);
        // rank 3: the last three columns are combinations of the first three
        let m = QMatrix::from_i64(&[&[1, 0, 0, 1, 2, 0], &[0, 1, 0, 1, 0, 3], &[0, 0, 1, 0, 1, 1], &[1, 1, 1, 2, 3, 4]]);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 3);
        assert!(m.mul(&k).unwrap().is_zero());
        assert_eq!(m.rank() + k.cols(), m.cols());
    }

    #[test]
    fn span_split_examples() {
        let u = QMatrix::identity(2);
        let w = QMatrix::from_i64(&[&[1], &[0]]);
        let s = column_span_intersection_and_complement(&u, &w).unwrap();
        assert_eq!(s.complement.cols(), 1);
        assert_eq!(s.complement.column(0), vec![q(0), q(1)]);
        let s = column_span_intersection_and_complement(&u, &u).unwrap();
        assert_eq!(s.complement.cols(), 0);
        let bad = QMatrix::from_i64(&[&[1], &[1], &[1]]);
        let u3 = QMatrix::from_i64(&[&[1], &[0], &[0]]);
        assert!(column_span_intersection_and_complement(&u3, &bad).is_err());
    }

    #[test]
    fn restricted_trace_examples() {
        let a = QMatrix::from_i64(&[&[1, 2], &[3, 4]]);
        assert_eq!(restricted_trace(&QMatrix::identity(2), &a).unwrap(), q(5));
        let b = QMatrix::from_i64(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(restricted_trace(&b, &QMatrix::identity(3)).unwrap(), q(2));
        let a = QMatrix::from_i64(&[&[5, 0], &[0, 2]]);
        let line = QMatrix::from_i64(&[&[1], &[0]]);
        assert_eq!(restricted_trace(&line, &a).unwrap(), q(5));
        let not_invariant = QMatrix::from_i64(&[&[1], &[1]]);
        assert!(restricted_trace(&not_invariant, &a).is_err());
    }

    #[test]
    fn subspace_reduce_is_canonical() {
        let mut s = Subspace::new(3);
        s.insert(&SparseVec::from_dense(&[q(1), q(1), q(0)]));
        s.insert(&SparseVec::from_dense(&[q(0), q(1), q(1)]));
        let a = s.reduce(&SparseVec::from_dense(&[q(1), q(0), q(0)]));
        let b = s.reduce(&SparseVec::from_dense(&[q(0), q(-1), q(0)]));
        assert_eq!(a, b);
        assert!(s.contains(&SparseVec::from_dense(&[q(1), q(0), q(-1)])));
    }

    #[test]
    fn relations_among_vectors() {
        let v = [SparseVec::from_dense(&[q(1), q(0)]), SparseVec::from_dense(&[q(2), q(0)]), SparseVec::unit(1)];
        let rel = linear_relations(2, &v);
        assert_eq!(rel, vec![vec![q(-2), q(1), q(0)]]);
        assert!(linear_relations(2, &[]).is_empty());
    }
}
