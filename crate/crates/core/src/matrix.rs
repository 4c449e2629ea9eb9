//! Exact integer linear algebra: matrices over the integers, Smith normal
//! form with recorded unimodular transforms, Hermite-style sublattice bases,
//! and finitely generated abelian groups presented as cokernels.
//!
//! All entries are arbitrary-precision integers; none of the algorithms here
//! ever rounds. Pivoting is deterministic (smallest nonzero absolute value,
//! lowest index on ties), so repeated runs on equal inputs produce identical
//! transforms.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Errors raised by matrix constructors and vector-shaped operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatrixError {
    /// Entry count or row length does not match the announced shape.
    ShapeMismatch { expected: usize, got: usize },
    /// A vector argument has the wrong length for this matrix.
    DimensionMismatch { expected: usize, got: usize },
}

impl fmt::Display for MatrixError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixError::ShapeMismatch { expected, got } => {
                write!(
                    f,
                    "shape mismatch: expected {} entries, got {}",
                    expected, got
                )
            }
            MatrixError::DimensionMismatch { expected, got } => {
                write!(
                    f,
                    "dimension mismatch: expected length {}, got {}",
                    expected, got
                )
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for MatrixError {}

/// A dense matrix over the integers, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntegerMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl IntegerMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, MatrixError> {
        if entries.len() != rows * cols {
            return Err(MatrixError::ShapeMismatch {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Ok(IntegerMatrix {
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from a list of equally long rows.
    pub fn from_rows(rows: &[Vec<BigInt>]) -> Result<Self, MatrixError> {
        let ncols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(MatrixError::ShapeMismatch {
                    expected: ncols,
                    got: row.len(),
                });
            }
            entries.extend(row.iter().cloned());
        }
        Ok(IntegerMatrix {
            rows: rows.len(),
            cols: ncols,
            entries,
        })
    }

    /// Builds a matrix whose columns are the given vectors (all of length `dim`).
    pub fn from_columns(dim: usize, columns: &[Vec<BigInt>]) -> Result<Self, MatrixError> {
        for col in columns {
            if col.len() != dim {
                return Err(MatrixError::ShapeMismatch {
                    expected: dim,
                    got: col.len(),
                });
            }
        }
        let mut m = IntegerMatrix::zero(dim, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    /// Convenience constructor from machine integers, panicking on bad shape.
    /// Intended for literals in tests and examples.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let data: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        IntegerMatrix::from_rows(&data).expect("ragged rows")
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntegerMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        (0..self.cols).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> IntegerMatrix {
        let mut t = IntegerMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Matrix product; panics if the inner dimensions disagree.
    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions disagree");
        let mut out = IntegerMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * other.get(k, j);
                    let cur = out.get(i, j) + add;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[BigInt]) -> Result<Vec<BigInt>, MatrixError> {
        if v.len() != self.cols {
            return Err(MatrixError::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect())
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    /// Panics on non-square input.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i)).collect();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                let swap = (k + 1..n).find(|&i| !m[i][k].is_zero());
                match swap {
                    Some(i) => {
                        m.swap(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = num / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        let det = m[n - 1][n - 1].clone();
        if sign < 0 {
            -det
        } else {
            det
        }
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.determinant().abs().is_one()
    }

    pub fn rank(&self) -> usize {
        smith_normal_form(self).rank
    }
}

/// Smith normal form `U * A * V = D` with `U`, `V` unimodular and `D`
/// diagonal, the diagonal nonnegative with each entry dividing the next.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
    pub rank: usize,
}

impl SmithForm {
    /// Nonzero diagonal entries of `D`, in divisibility order.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d.get(i, i).clone()).collect()
    }
}

// Locate the entry of smallest nonzero absolute value in the submatrix
// d[p.., p..], scanning row-major so ties resolve to the lowest index.
fn min_abs_nonzero(d: &IntegerMatrix, p: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in p..d.rows() {
        for j in p..d.cols() {
            let x = d.get(i, j);
            if x.is_zero() {
                continue;
            }
            match best {
                None => best = Some((i, j)),
                Some((bi, bj)) => {
                    if x.abs() < d.get(bi, bj).abs() {
                        best = Some((i, j));
                    }
                }
            }
        }
    }
    best
}

fn swap_rows(m: &mut IntegerMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols() {
        let x = m.get(a, j).clone();
        let y = m.get(b, j).clone();
        m.set(a, j, y);
        m.set(b, j, x);
    }
}

fn swap_cols(m: &mut IntegerMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.rows() {
        let x = m.get(i, a).clone();
        let y = m.get(i, b).clone();
        m.set(i, a, y);
        m.set(i, b, x);
    }
}

// row_a -= q * row_b
fn row_sub(m: &mut IntegerMatrix, a: usize, b: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for j in 0..m.cols() {
        let val = m.get(a, j) - q * m.get(b, j);
        m.set(a, j, val);
    }
}

// col_a -= q * col_b
fn col_sub(m: &mut IntegerMatrix, a: usize, b: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for i in 0..m.rows() {
        let val = m.get(i, a) - q * m.get(i, b);
        m.set(i, a, val);
    }
}

fn negate_row(m: &mut IntegerMatrix, a: usize) {
    for j in 0..m.cols() {
        let val = -m.get(a, j);
        m.set(a, j, val);
    }
}

/// Computes the Smith normal form of `a`.
///
/// Pivot selection takes the entry of smallest nonzero absolute value with
/// the lowest index on ties, then clears the pivot row and column by
/// division with remainder; the produced transforms are therefore
/// deterministic functions of the input.
pub fn smith_normal_form(a: &IntegerMatrix) -> SmithForm {
    let rows = a.rows();
    let cols = a.cols();
    let mut d = a.clone();
    let mut u = IntegerMatrix::identity(rows);
    let mut v = IntegerMatrix::identity(cols);

    let mut p = 0;
    while p < rows && p < cols {
        match min_abs_nonzero(&d, p) {
            None => break,
            Some((i, j)) => {
                swap_rows(&mut d, p, i);
                swap_rows(&mut u, p, i);
                swap_cols(&mut d, p, j);
                swap_cols(&mut v, p, j);
            }
        }

        // Clear the pivot row and column. Each pass either finishes or
        // strictly shrinks the pivot's absolute value via a remainder.
        loop {
            let mut dirty = false;
            for i in p + 1..rows {
                if d.get(i, p).is_zero() {
                    continue;
                }
                let q = d.get(i, p) / d.get(p, p);
                row_sub(&mut d, i, p, &q);
                row_sub(&mut u, i, p, &q);
                if !d.get(i, p).is_zero() {
                    // remainder is smaller than the pivot; promote it
                    swap_rows(&mut d, p, i);
                    swap_rows(&mut u, p, i);
                    dirty = true;
                }
            }
            for j in p + 1..cols {
                if d.get(p, j).is_zero() {
                    continue;
                }
                let q = d.get(p, j) / d.get(p, p);
                col_sub(&mut d, j, p, &q);
                col_sub(&mut v, j, p, &q);
                if !d.get(p, j).is_zero() {
                    swap_cols(&mut d, p, j);
                    swap_cols(&mut v, p, j);
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }

        // Enforce the divisibility chain: the pivot must divide every entry
        // of the trailing submatrix. Folding an offending row into the pivot
        // row re-enters the clearing loop with a smaller eventual pivot.
        let mut offender = None;
        'search: for i in p + 1..rows {
            for j in p + 1..cols {
                if !d.get(i, j).mod_floor(d.get(p, p)).is_zero() {
                    offender = Some(i);
                    break 'search;
                }
            }
        }
        if let Some(i) = offender {
            let one = BigInt::one();
            // row_p += row_i, expressed as row_p -= (-1) * row_i
            row_sub(&mut d, p, i, &-&one);
            row_sub(&mut u, p, i, &-&one);
            continue;
        }

        if d.get(p, p).is_negative() {
            negate_row(&mut d, p);
            negate_row(&mut u, p);
        }
        p += 1;
    }

    let rank = (0..p).take_while(|&i| !d.get(i, i).is_zero()).count();
    debug_assert_eq!(u.mul(a).mul(&v), d, "transform identity violated");
    SmithForm { u, d, v, rank }
}

/// A finitely generated abelian group `Z^free_rank + Z/f_1 + ... + Z/f_k`
/// with `1 < f_1 | f_2 | ... | f_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroup {
    free_rank: usize,
    invariant_factors: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn new(free_rank: usize, invariant_factors: Vec<BigInt>) -> Self {
        for w in invariant_factors.windows(2) {
            debug_assert!(w[1].mod_floor(&w[0]).is_zero(), "factors must form a chain");
        }
        debug_assert!(invariant_factors.iter().all(|f| *f > BigInt::one()));
        AbelianGroup {
            free_rank,
            invariant_factors,
        }
    }

    pub fn trivial() -> Self {
        AbelianGroup {
            free_rank: 0,
            invariant_factors: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup {
            free_rank: rank,
            invariant_factors: Vec::new(),
        }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_torsion(&self) -> bool {
        self.free_rank == 0
    }

    pub fn has_torsion(&self) -> bool {
        !self.invariant_factors.is_empty()
    }

    /// The group modulo its torsion subgroup.
    pub fn free_part(&self) -> AbelianGroup {
        AbelianGroup::free(self.free_rank)
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut first = true;
        match self.free_rank {
            0 => {}
            1 => {
                write!(f, "Z")?;
                first = false;
            }
            r => {
                write!(f, "Z^{}", r)?;
                first = false;
            }
        }
        for q in &self.invariant_factors {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "Z/{}", q)?;
            first = false;
        }
        Ok(())
    }
}

/// The cokernel `Z^rows(a) / image(a)` of the column map of `a`.
pub fn cokernel(a: &IntegerMatrix) -> AbelianGroup {
    let snf = smith_normal_form(a);
    let free = a.rows() - snf.rank;
    let factors: Vec<BigInt> = snf.diagonal().into_iter().filter(|x| !x.is_one()).collect();
    AbelianGroup::new(free, factors)
}

/// Coordinates of `v` in the cokernel presentation of `a`.
///
/// The free part is zero and all torsion residues vanish exactly when `v`
/// lies in the column image of `a`. Residues are indexed compatibly with
/// `cokernel(a).invariant_factors()` (factors equal to one are dropped) and
/// normalized into `[0, f_i)`.
pub fn class_of(
    a: &IntegerMatrix,
    v: &[BigInt],
) -> Result<(Vec<BigInt>, Vec<BigInt>), MatrixError> {
    if v.len() != a.rows() {
        return Err(MatrixError::DimensionMismatch {
            expected: a.rows(),
            got: v.len(),
        });
    }
    let snf = smith_normal_form(a);
    let w = snf.u.apply(v)?;
    let mut torsion = Vec::new();
    for i in 0..snf.rank {
        let f = snf.d.get(i, i);
        if f.is_one() {
            continue;
        }
        torsion.push(w[i].mod_floor(f));
    }
    let free = w[snf.rank..a.rows()].to_vec();
    Ok((free, torsion))
}

/// A column basis of the sublattice of `Z^dim` generated by `vectors`,
/// in column-style Hermite normal form (deterministic and canonical).
///
/// Empty input yields a `dim x 0` matrix.
pub fn sublattice_basis(dim: usize, vectors: &[Vec<BigInt>]) -> Result<IntegerMatrix, MatrixError> {
    let mut m = IntegerMatrix::from_columns(dim, vectors)?;
    let mut pivot = 0usize;
    for row in 0..dim {
        if pivot == m.cols() {
            break;
        }
        // gcd-clear this row across the active columns
        loop {
            let mut best: Option<usize> = None;
            for j in pivot..m.cols() {
                if m.get(row, j).is_zero() {
                    continue;
                }
                match best {
                    None => best = Some(j),
                    Some(b) => {
                        if m.get(row, j).abs() < m.get(row, b).abs() {
                            best = Some(j);
                        }
                    }
                }
            }
            let Some(j) = best else { break };
            swap_cols(&mut m, pivot, j);
            let mut dirty = false;
            for j2 in pivot + 1..m.cols() {
                if m.get(row, j2).is_zero() {
                    continue;
                }
                let q = m.get(row, j2) / m.get(row, pivot);
                col_sub(&mut m, j2, pivot, &q);
                if !m.get(row, j2).is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }
        if m.get(row, pivot).is_zero() {
            continue; // no pivot in this row
        }
        if m.get(row, pivot).is_negative() {
            for i in 0..m.rows() {
                let val = -m.get(i, pivot);
                m.set(i, pivot, val);
            }
        }
        // canonical form: earlier columns reduced modulo the pivot
        let pivot_val = m.get(row, pivot).clone();
        for j in 0..pivot {
            let q = m.get(row, j).div_floor(&pivot_val);
            col_sub(&mut m, j, pivot, &q);
        }
        pivot += 1;
    }
    let basis_cols: Vec<Vec<BigInt>> = (0..pivot).map(|j| m.column(j)).collect();
    IntegerMatrix::from_columns(dim, &basis_cols)
}

/// Solves `basis * x = v` exactly over the integers, if a solution exists.
pub fn solve_exact(
    basis: &IntegerMatrix,
    v: &[BigInt],
) -> Result<Option<Vec<BigInt>>, MatrixError> {
    if v.len() != basis.rows() {
        return Err(MatrixError::DimensionMismatch {
            expected: basis.rows(),
            got: v.len(),
        });
    }
    let snf = smith_normal_form(basis);
    let w = snf.u.apply(v)?;
    let mut y = vec![BigInt::zero(); basis.cols()];
    for (i, wi) in w.iter().enumerate() {
        if i < snf.rank {
            let f = snf.d.get(i, i);
            let (q, r) = wi.div_rem(f);
            if !r.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        } else if !wi.is_zero() {
            return Ok(None);
        }
    }
    Ok(Some(snf.v.apply(&y)?))
}

/// An integer basis of the kernel of `a` (as columns).
pub fn kernel_basis(a: &IntegerMatrix) -> IntegerMatrix {
    let snf = smith_normal_form(a);
    let cols: Vec<Vec<BigInt>> = (snf.rank..a.cols()).map(|j| snf.v.column(j)).collect();
    IntegerMatrix::from_columns(a.cols(), &cols).expect("kernel columns have matching length")
}
