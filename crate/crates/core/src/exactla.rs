//! Exact linear algebra over Q.
//!
//! Matrices are stored as sparse rows of [`BigRational`] entries. Row
//! reduction is incremental Gauss–Jordan with the pivot always taken at the
//! first nonzero column, so every reduced basis produced here is the unique
//! reduced row-echelon form of its span. A fraction-free (Bareiss) route is
//! kept for ranks and determinants of dense integer-like matrices.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Rational scalars used throughout the crate.
pub type Rational = BigRational;

/// A sparse row: `(column, value)` pairs sorted by column, no zero values.
pub type SparseRow = Vec<(usize, Rational)>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinAlgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("linear system has no solution")]
    NoSolution,
}

pub type Result<T> = std::result::Result<T, LinAlgError>;

/// Shorthand for an integer-valued rational.
pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`.
pub fn qf(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(LinAlgError::DimensionMismatch { expected, found })
    }
}

pub(crate) fn sparse_from_dense(v: &[Rational]) -> SparseRow {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub(crate) fn dense_from_sparse(len: usize, row: &SparseRow) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (c, v) in row {
        out[*c] = v.clone();
    }
    out
}

fn sparse_get(row: &SparseRow, col: usize) -> Option<&Rational> {
    row.binary_search_by_key(&col, |(c, _)| *c)
        .ok()
        .map(|i| &row[i].1)
}

/// `lhs - factor * rhs`, merged.
fn sparse_axpy(lhs: &SparseRow, factor: &Rational, rhs: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(lhs.len() + rhs.len());
    let (mut i, mut j) = (0, 0);
    while i < lhs.len() || j < rhs.len() {
        let take_left = j == rhs.len() || (i < lhs.len() && lhs[i].0 < rhs[j].0);
        let take_right = i == lhs.len() || (j < rhs.len() && rhs[j].0 < lhs[i].0);
        if take_left {
            out.push(lhs[i].clone());
            i += 1;
        } else if take_right {
            out.push((rhs[j].0, -(factor * &rhs[j].1)));
            j += 1;
        } else {
            let v = &lhs[i].1 - factor * &rhs[j].1;
            if !v.is_zero() {
                out.push((lhs[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// `acc += factor * rhs` for sorted sparse rows.
pub(crate) fn sparse_axpy_into(acc: &mut SparseRow, factor: &Rational, rhs: &SparseRow) {
    *acc = sparse_axpy(acc, &-factor.clone(), rhs);
}

/// Sorts a sparse row by index, merging repeated indices and dropping zeros.
pub(crate) fn sparse_normalize(row: SparseRow) -> SparseRow {
    let mut map = std::collections::BTreeMap::new();
    for (i, c) in row {
        *map.entry(i).or_insert_with(Rational::zero) += c;
    }
    map.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// Incrementally maintained reduced row-echelon basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Echelon {
    ncols: usize,
    /// Rows sorted by pivot column.
    rows: Vec<SparseRow>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub(crate) fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    fn pivot_index(&self, col: usize) -> Option<usize> {
        self.pivots.binary_search(&col).ok()
    }

    /// Eliminates every pivot column from `w`.
    pub(crate) fn reduce_sparse(&self, row: &SparseRow) -> SparseRow {
        let mut w: BTreeMap<usize, Rational> = row.iter().cloned().collect();
        let mut cursor = 0;
        loop {
            let next = w
                .range(cursor..)
                .find(|(c, _)| self.pivot_index(**c).is_some())
                .map(|(c, v)| (*c, v.clone()));
            let Some((col, factor)) = next else { break };
            let basis_row = &self.rows[self.pivot_index(col).unwrap()];
            for (c, v) in basis_row {
                let entry = w.entry(*c).or_insert_with(Rational::zero);
                *entry -= &factor * v;
                if entry.is_zero() {
                    w.remove(c);
                }
            }
            cursor = col + 1;
        }
        w.into_iter().collect()
    }

    /// Adds a row to the span; returns whether the span grew.
    pub(crate) fn insert(&mut self, row: &SparseRow) -> bool {
        let reduced = self.reduce_sparse(row);
        let Some((pivot, lead)) = reduced.first().cloned() else {
            return false;
        };
        let inv = lead.recip();
        let new_row: SparseRow = reduced.into_iter().map(|(c, v)| (c, v * &inv)).collect();
        for existing in self.rows.iter_mut() {
            if let Some(f) = sparse_get(existing, pivot).cloned() {
                *existing = sparse_axpy(existing, &f, &new_row);
            }
        }
        let at = self.pivots.partition_point(|p| *p < pivot);
        self.pivots.insert(at, pivot);
        self.rows.insert(at, new_row);
        true
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    pub(crate) fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub(crate) fn pivots(&self) -> &[usize] {
        &self.pivots
    }
}

/// A dense-dimensioned matrix over Q with sparse row storage.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    nrows: usize,
    ncols: usize,
    rows: Vec<SparseRow>,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.nrows, self.ncols)?;
        for i in 0..self.nrows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl RationalMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        RationalMatrix {
            nrows,
            ncols,
            rows: vec![Vec::new(); nrows],
        }
    }

    pub fn identity(n: usize) -> Self {
        RationalMatrix {
            nrows: n,
            ncols: n,
            rows: (0..n).map(|i| vec![(i, Rational::one())]).collect(),
        }
    }

    /// Builds a matrix from dense rows; every row must have `ncols` entries.
    pub fn from_rows(ncols: usize, rows: Vec<Vec<Rational>>) -> Result<Self> {
        for r in &rows {
            check_dim(ncols, r.len())?;
        }
        Ok(RationalMatrix {
            nrows: rows.len(),
            ncols,
            rows: rows.iter().map(|r| sparse_from_dense(r)).collect(),
        })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(nrows: usize, cols: &[Vec<Rational>]) -> Result<Self> {
        let mut rows = vec![Vec::new(); nrows];
        for (j, col) in cols.iter().enumerate() {
            check_dim(nrows, col.len())?;
            for (i, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    rows[i].push((j, v.clone()));
                }
            }
        }
        Ok(RationalMatrix {
            nrows,
            ncols: cols.len(),
            rows,
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        let dense = rows
            .iter()
            .map(|r| r.iter().map(|x| q(*x)).collect())
            .collect();
        Self::from_rows(ncols, dense).expect("ragged integer matrix")
    }

    pub(crate) fn from_sparse_columns(nrows: usize, cols: &[SparseRow]) -> Self {
        let mut rows = vec![Vec::new(); nrows];
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col {
                rows[*i].push((j, v.clone()));
            }
        }
        RationalMatrix {
            nrows,
            ncols: cols.len(),
            rows,
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        sparse_get(&self.rows[i], j).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn row(&self, i: usize) -> Vec<Rational> {
        dense_from_sparse(self.ncols, &self.rows[i])
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.nrows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        (0..self.nrows).map(|i| self.row(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn transpose(&self) -> Self {
        Self::from_sparse_columns(self.ncols, &self.rows)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        check_dim(self.ncols, v.len())?;
        Ok(self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .fold(Rational::zero(), |acc, (c, x)| acc + x * &v[*c])
            })
            .collect())
    }

    pub fn mul(&self, rhs: &RationalMatrix) -> Result<RationalMatrix> {
        check_dim(self.ncols, rhs.nrows)?;
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
                for (k, a) in r {
                    for (j, b) in &rhs.rows[*k] {
                        *acc.entry(*j).or_insert_with(Rational::zero) += a * b;
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        Ok(RationalMatrix {
            nrows: self.nrows,
            ncols: rhs.ncols,
            rows,
        })
    }

    pub fn sub(&self, rhs: &RationalMatrix) -> Result<RationalMatrix> {
        check_dim(self.nrows, rhs.nrows)?;
        check_dim(self.ncols, rhs.ncols)?;
        let one = Rational::one();
        Ok(RationalMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            rows: self
                .rows
                .iter()
                .zip(&rhs.rows)
                .map(|(a, b)| sparse_axpy(a, &one, b))
                .collect(),
        })
    }

    fn echelon(&self) -> Echelon {
        let mut e = Echelon::new(self.ncols);
        for r in &self.rows {
            e.insert(r);
        }
        e
    }

    /// Reduced row-echelon form and its pivot columns.
    pub fn rref(&self) -> (RationalMatrix, Vec<usize>) {
        let e = self.echelon();
        let mut rows = e.rows.clone();
        rows.resize(self.nrows, Vec::new());
        (
            RationalMatrix {
                nrows: self.nrows,
                ncols: self.ncols,
                rows,
            },
            e.pivots.clone(),
        )
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    pub fn kernel(&self) -> Subspace {
        let e = self.echelon();
        let mut vectors = Vec::new();
        let mut pivot_iter = e.pivots.iter().peekable();
        for free in 0..self.ncols {
            if pivot_iter.peek() == Some(&&free) {
                pivot_iter.next();
                continue;
            }
            let mut v: SparseRow = vec![(free, Rational::one())];
            for (row, p) in e.rows.iter().zip(&e.pivots) {
                if let Some(x) = sparse_get(row, free) {
                    v.push((*p, -x.clone()));
                }
            }
            v.sort_by_key(|(c, _)| *c);
            vectors.push(v);
        }
        Subspace::from_sparse(self.ncols, &vectors)
    }

    /// Column space.
    pub fn image(&self) -> Subspace {
        Subspace::from_sparse(self.nrows, &self.transpose().rows)
    }

    /// Some `x` with `self * x = b`, or [`LinAlgError::NoSolution`].
    pub fn solve(&self, b: &[Rational]) -> Result<Vec<Rational>> {
        check_dim(self.nrows, b.len())?;
        let n = self.ncols;
        let mut e = Echelon::new(n + 1);
        for (r, rhs) in self.rows.iter().zip(b) {
            let mut row = r.clone();
            if !rhs.is_zero() {
                row.push((n, rhs.clone()));
            }
            e.insert(&row);
        }
        if e.pivots.last() == Some(&n) {
            return Err(LinAlgError::NoSolution);
        }
        let mut x = vec![Rational::zero(); n];
        for (row, p) in e.rows.iter().zip(&e.pivots) {
            if let Some(v) = sparse_get(row, n) {
                x[*p] = v.clone();
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Option<RationalMatrix> {
        if self.nrows != self.ncols {
            return None;
        }
        let n = self.ncols;
        if n == 0 {
            return Some(self.clone());
        }
        let mut e = Echelon::new(2 * n);
        for (i, r) in self.rows.iter().enumerate() {
            let mut row = r.clone();
            row.push((n + i, Rational::one()));
            e.insert(&row);
        }
        if e.rank() < n || e.pivots[n - 1] >= n {
            return None;
        }
        let rows = e.rows[..n]
            .iter()
            .map(|r| {
                r.iter()
                    .filter(|(c, _)| *c >= n)
                    .map(|(c, v)| (c - n, v.clone()))
                    .collect()
            })
            .collect();
        Some(RationalMatrix {
            nrows: n,
            ncols: n,
            rows,
        })
    }

    /// Integer rows obtained by clearing each row's denominators, plus the
    /// product of the scale factors used.
    fn integer_rows(&self) -> (Vec<Vec<BigInt>>, BigInt) {
        let mut scale = BigInt::one();
        let rows = (0..self.nrows)
            .map(|i| {
                let lcm = self.rows[i]
                    .iter()
                    .fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
                scale *= &lcm;
                self.row(i)
                    .iter()
                    .map(|v| (v * Rational::from_integer(lcm.clone())).to_integer())
                    .collect()
            })
            .collect();
        (rows, scale)
    }

    /// Rank by fraction-free (Bareiss) elimination.
    pub fn bareiss_rank(&self) -> usize {
        bareiss(self.integer_rows().0, self.ncols).0
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<Rational> {
        check_dim(self.nrows, self.ncols)?;
        if self.nrows == 0 {
            return Ok(Rational::one());
        }
        let (rows, scale) = self.integer_rows();
        let (rank, det) = bareiss(rows, self.ncols);
        if rank < self.nrows {
            return Ok(Rational::zero());
        }
        Ok(Rational::new(det, scale))
    }
}

/// Fraction-free elimination on integer rows; returns the rank and, for a
/// full-rank square input, the determinant.
fn bareiss(mut a: Vec<Vec<BigInt>>, ncols: usize) -> (usize, BigInt) {
    let nrows = a.len();
    let mut prev = BigInt::one();
    let mut sign = 1i32;
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        if p != rank {
            a.swap(p, rank);
            sign = -sign;
        }
        for r in rank + 1..nrows {
            for c in col + 1..ncols {
                let v = &a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c];
                a[r][c] = v / &prev;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    let det = if rank == nrows && nrows == ncols {
        prev * sign
    } else {
        BigInt::zero()
    };
    (rank, det)
}

/// A linear subspace of Q^n, held as its reduced row-echelon basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    echelon: Echelon,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            echelon: Echelon::new(ambient_dim),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        let rows: Vec<SparseRow> = (0..ambient_dim)
            .map(|i| vec![(i, Rational::one())])
            .collect();
        Self::from_sparse(ambient_dim, &rows)
    }

    pub fn span(ambient_dim: usize, vectors: &[Vec<Rational>]) -> Result<Self> {
        let mut echelon = Echelon::new(ambient_dim);
        for v in vectors {
            check_dim(ambient_dim, v.len())?;
            echelon.insert(&sparse_from_dense(v));
        }
        Ok(Subspace {
            ambient_dim,
            echelon,
        })
    }

    pub(crate) fn from_sparse(ambient_dim: usize, rows: &[SparseRow]) -> Self {
        let mut echelon = Echelon::new(ambient_dim);
        for r in rows {
            echelon.insert(r);
        }
        Subspace {
            ambient_dim,
            echelon,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.echelon.rank()
    }

    pub fn pivots(&self) -> &[usize] {
        self.echelon.pivots()
    }

    /// The reduced row-echelon basis, as dense vectors.
    pub fn basis(&self) -> Vec<Vec<Rational>> {
        self.echelon
            .rows()
            .iter()
            .map(|r| dense_from_sparse(self.ambient_dim, r))
            .collect()
    }

    /// `v` with every pivot column of this subspace eliminated. Zero exactly
    /// when `v` is a member.
    pub fn reduce(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        check_dim(self.ambient_dim, v.len())?;
        let r = self.echelon.reduce_sparse(&sparse_from_dense(v));
        Ok(dense_from_sparse(self.ambient_dim, &r))
    }

    pub(crate) fn reduce_sparse(&self, v: &SparseRow) -> SparseRow {
        self.echelon.reduce_sparse(v)
    }

    pub fn member(&self, v: &[Rational]) -> Result<bool> {
        check_dim(self.ambient_dim, v.len())?;
        Ok(self
            .echelon
            .reduce_sparse(&sparse_from_dense(v))
            .is_empty())
    }

    /// Coefficients of `v` in the echelon basis, if `v` is a member.
    pub fn coordinates(&self, v: &[Rational]) -> Result<Option<Vec<Rational>>> {
        if !self.member(v)? {
            return Ok(None);
        }
        Ok(Some(self.pivot_values(v)))
    }

    /// Entries of `v` at the pivot columns. These are the echelon-basis
    /// coordinates whenever `v` lies in the span.
    pub fn pivot_values(&self, v: &[Rational]) -> Vec<Rational> {
        self.pivots().iter().map(|p| v[*p].clone()).collect()
    }

    pub(crate) fn pivot_values_sparse(&self, v: &SparseRow) -> Vec<Rational> {
        self.pivots()
            .iter()
            .map(|p| sparse_get(v, *p).cloned().unwrap_or_else(Rational::zero))
            .collect()
    }

    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        check_dim(self.ambient_dim, other.ambient_dim)?;
        Ok(other
            .echelon
            .rows()
            .iter()
            .all(|r| self.echelon.reduce_sparse(r).is_empty()))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        check_dim(self.ambient_dim, other.ambient_dim)?;
        let mut echelon = self.echelon.clone();
        for r in other.echelon.rows() {
            echelon.insert(r);
        }
        Ok(Subspace {
            ambient_dim: self.ambient_dim,
            echelon,
        })
    }
}

pub fn kernel(m: &RationalMatrix) -> Subspace {
    m.kernel()
}

pub fn image(m: &RationalMatrix) -> Subspace {
    m.image()
}

pub fn solve(m: &RationalMatrix, b: &[Rational]) -> Result<Vec<Rational>> {
    m.solve(b)
}

pub fn member(s: &Subspace, v: &[Rational]) -> Result<bool> {
    s.member(v)
}

/// Coset representatives completing `sub` to `ambient`: the reduced
/// echelon basis of the remainders of `ambient`'s basis modulo `sub`.
///
/// The representatives vanish on the pivot columns of `sub`, so a vector of
/// `ambient` reduced modulo `sub` has the representatives' pivot entries as
/// its coordinates.
pub fn quotient_basis(ambient: &Subspace, sub: &Subspace) -> Result<Vec<Vec<Rational>>> {
    Ok(quotient_subspace(ambient, sub)?.basis())
}

pub(crate) fn quotient_subspace(ambient: &Subspace, sub: &Subspace) -> Result<Subspace> {
    check_dim(ambient.ambient_dim, sub.ambient_dim)?;
    let remainders: Vec<SparseRow> = ambient
        .echelon
        .rows()
        .iter()
        .map(|r| sub.echelon.reduce_sparse(r))
        .collect();
    Ok(Subspace::from_sparse(ambient.ambient_dim, &remainders))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_row_of_ones_is_a_plane() {
        let m = RationalMatrix::from_i64(&[&[1, 1, 1]]);
        let k = kernel(&m);
        assert_eq!(k.dim(), 2);
        for v in k.basis() {
            assert!(m.mul_vec(&v).unwrap().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn solves_two_x_equals_three() {
        let m = RationalMatrix::from_i64(&[&[2]]);
        assert_eq!(solve(&m, &[q(3)]).unwrap(), vec![qf(3, 2)]);
    }

    #[test]
    fn inconsistent_system_has_no_solution() {
        let m = RationalMatrix::from_i64(&[&[1, 1], &[2, 2]]);
        assert_eq!(solve(&m, &[q(1), q(3)]), Err(LinAlgError::NoSolution));
    }

    #[test]
    fn quotient_of_plane_sum() {
        let ambient = Subspace::full(3);
        let sub = Subspace::span(3, &[vec![q(1), q(1), q(1)]]).unwrap();
        let reps = quotient_basis(&ambient, &sub).unwrap();
        assert_eq!(reps.len(), 2);
        let all = sub.sum(&Subspace::span(3, &reps).unwrap()).unwrap();
        assert_eq!(all.dim(), 3);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let m = RationalMatrix::from_i64(&[&[1, 2]]);
        assert_eq!(
            m.mul_vec(&[q(1)]),
            Err(LinAlgError::DimensionMismatch {
                expected: 2,
                found: 1
            })
        );
        assert!(Subspace::zero(2).member(&[q(0)]).is_err());
    }

    #[test]
    fn rref_is_canonical() {
        let a = RationalMatrix::from_i64(&[&[2, 4, 6], &[1, 1, 1]]);
        let b = RationalMatrix::from_i64(&[&[1, 1, 1], &[0, 2, 4]]);
        assert_eq!(a.rref(), b.rref());
        let (r, piv) = a.rref();
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(r.row(0), vec![q(1), q(0), q(-1)]);
        assert_eq!(r.row(1), vec![q(0), q(1), q(2)]);
    }

    #[test]
    fn inverse_and_determinant() {
        let m = RationalMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(m.inverse().unwrap(), m);
        assert_eq!(m.determinant().unwrap(), q(-1));
        let s = RationalMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert!(s.inverse().is_none());
        assert_eq!(s.determinant().unwrap(), q(0));
        let h = RationalMatrix::from_rows(2, vec![vec![qf(1, 2), q(1)], vec![q(3), qf(1, 3)]])
            .unwrap();
        assert_eq!(h.determinant().unwrap(), qf(1, 6) - q(3));
    }

    #[test]
    fn coordinates_in_echelon_basis() {
        let s = Subspace::span(3, &[vec![q(1), q(0), q(2)], vec![q(0), q(1), q(1)]]).unwrap();
        let v = vec![q(3), q(-1), q(5)];
        assert_eq!(s.coordinates(&v).unwrap(), Some(vec![q(3), q(-1)]));
        assert_eq!(s.coordinates(&[q(0), q(0), q(1)]).unwrap(), None);
    }
}
