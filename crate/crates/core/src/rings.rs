//! Closed-form class group and affinity decisions for three ring families:
//! hyperbola rings `A[X,Y]/(XY - U_1^{d_1}...U_r^{d_r})` over a factorial
//! base, determinantal rings of bounded-rank matrices, and the Segre
//! product ring `K[T_i S_j]`.
//!
//! Divisor classes of a hyperbola ring are written in the basis of the
//! height-one primes `p_i = (U_i, X)`; the single relation is the degree
//! vector `d`, and `q_i = (U_i, Y)` is `-p_i` at class level. The local
//! classification is implemented only for a local base ring; for non-local
//! bases the comaximality criterion decides whether the affine class group
//! vanishes.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::matrix::{cokernel, AbelianGroup, IntegerMatrix};

/// Errors for the closed-form ring decisions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingError {
    /// An exponent `d_i < 1` was supplied.
    InvalidExponent { index: usize },
    /// The operation needs the pairwise comaximality relation.
    MissingComaximalData,
    /// The comaximality matrix is not square of size `r` or not symmetric.
    InvalidComaximalData,
    /// The divisor vector length differs from the prime count.
    DimensionMismatch { expected: usize, got: usize },
    /// The operation is only proved over a local base ring.
    BaseNotLocal,
    /// Matrix format or minor size out of range.
    FormatViolation { reason: &'static str },
}

impl fmt::Display for RingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingError::InvalidExponent { index } => {
                write!(f, "exponent at index {} must be at least 1", index)
            }
            RingError::MissingComaximalData => {
                write!(f, "pairwise comaximality data is required")
            }
            RingError::InvalidComaximalData => {
                write!(f, "comaximality relation must be a symmetric r x r matrix")
            }
            RingError::DimensionMismatch { expected, got } => {
                write!(f, "divisor has {} coefficients, expected {}", got, expected)
            }
            RingError::BaseNotLocal => {
                write!(f, "classification requires a local factorial base ring")
            }
            RingError::FormatViolation { reason } => write!(f, "format violation: {}", reason),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for RingError {}

/// A hyperbola ring `A[X,Y]/(XY - U_1^{d_1}...U_r^{d_r})` described by its
/// exponent vector, whether the base is local, and (optionally) which
/// pairs of primes generate the unit ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperbolaData {
    exponents: Vec<BigInt>,
    base_local: bool,
    comaximal: Option<Vec<Vec<bool>>>,
}

impl HyperbolaData {
    pub fn new(
        exponents: Vec<BigInt>,
        base_local: bool,
        comaximal: Option<Vec<Vec<bool>>>,
    ) -> Result<Self, RingError> {
        for (i, d) in exponents.iter().enumerate() {
            if !d.is_positive() {
                return Err(RingError::InvalidExponent { index: i });
            }
        }
        if let Some(rel) = &comaximal {
            let r = exponents.len();
            if rel.len() != r || rel.iter().any(|row| row.len() != r) {
                return Err(RingError::InvalidComaximalData);
            }
            for i in 0..r {
                for j in 0..r {
                    if rel[i][j] != rel[j][i] {
                        return Err(RingError::InvalidComaximalData);
                    }
                }
            }
        }
        Ok(HyperbolaData {
            exponents,
            base_local,
            comaximal,
        })
    }

    /// Local base, no comaximality data (none is possible: a local ring
    /// has no comaximal pairs of primes).
    pub fn local(exponents: Vec<BigInt>) -> Result<Self, RingError> {
        Self::new(exponents, true, None)
    }

    pub fn local_from_i64(exponents: &[i64]) -> Result<Self, RingError> {
        Self::local(exponents.iter().map(|&d| BigInt::from(d)).collect())
    }

    pub fn prime_count(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[BigInt] {
        &self.exponents
    }

    pub fn base_local(&self) -> bool {
        self.base_local
    }

    fn checked_divisor(&self, n: &[BigInt]) -> Result<(), RingError> {
        if n.len() != self.exponents.len() {
            return Err(RingError::DimensionMismatch {
                expected: self.exponents.len(),
                got: n.len(),
            });
        }
        Ok(())
    }

    fn require_local(&self) -> Result<(), RingError> {
        if self.base_local {
            Ok(())
        } else {
            Err(RingError::BaseNotLocal)
        }
    }

    /// The divisor class group `Z^r / Z d`.
    pub fn dkg(&self) -> AbelianGroup {
        let column = IntegerMatrix::from_columns(
            self.exponents.len(),
            core::slice::from_ref(&self.exponents),
        )
        .expect("exponent vector is one column");
        cokernel(&column)
    }

    /// Whether the affine class group vanishes, decided by pairwise
    /// comaximality of the primes `U_i`. Over a local base no pair is
    /// comaximal, so the answer there is `r <= 1`.
    pub fn akg_is_zero(&self) -> Result<bool, RingError> {
        if self.prime_count() <= 1 {
            return Ok(true);
        }
        if self.base_local {
            return Ok(false);
        }
        let rel = self
            .comaximal
            .as_ref()
            .ok_or(RingError::MissingComaximalData)?;
        for i in 0..rel.len() {
            for j in 0..rel.len() {
                if i != j && !rel[i][j] {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Whether the divisor `n_1 p_1 + ... + n_r p_r` is coaffine over a
    /// local base: it must be principal or equivalent to a representative
    /// with `0 < n_i < d_i` in every coordinate.
    ///
    /// The translate `n + k d` lands in the open window exactly when
    /// `d_i` does not divide `n_i` and the candidate `k = -floor(n_i/d_i)`
    /// is the same for every `i`.
    pub fn is_coaffine(&self, n: &[BigInt]) -> Result<bool, RingError> {
        self.require_local()?;
        self.checked_divisor(n)?;
        if self.is_principal(n) {
            return Ok(true);
        }
        let mut shift: Option<BigInt> = None;
        for (ni, di) in n.iter().zip(&self.exponents) {
            let (q, rem) = ni.div_mod_floor(di);
            if rem.is_zero() {
                return Ok(false);
            }
            let k = -q;
            match &shift {
                None => shift = Some(k),
                Some(prev) if *prev == k => {}
                Some(_) => return Ok(false),
            }
        }
        Ok(true)
    }

    /// Whether some positive multiple of the divisor is principal: over a
    /// local base this happens exactly when `n` is proportional to `d`.
    pub fn is_affine_trivial(&self, n: &[BigInt]) -> Result<bool, RingError> {
        self.require_local()?;
        self.checked_divisor(n)?;
        for i in 0..n.len() {
            for j in i + 1..n.len() {
                if &n[i] * &self.exponents[j] != &n[j] * &self.exponents[i] {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The affine class group over a local base: the divisor class group
    /// modulo torsion, a free group of rank `r - 1`.
    pub fn akg(&self) -> Result<AbelianGroup, RingError> {
        self.require_local()?;
        Ok(self.dkg().free_part())
    }

    fn is_principal(&self, n: &[BigInt]) -> bool {
        // n = k d for a single integer k
        let mut k: Option<BigInt> = None;
        for (ni, di) in n.iter().zip(&self.exponents) {
            let (q, rem) = ni.div_rem(di);
            if !rem.is_zero() {
                return false;
            }
            match &k {
                None => k = Some(q),
                Some(prev) if *prev == q => {}
                Some(_) => return false,
            }
        }
        true
    }
}

/// The ring of `m x n` matrices of rank below `k`, with `1 < k <= min(m, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeterminantalData {
    m: u64,
    n: u64,
    k: u64,
}

impl DeterminantalData {
    pub fn new(m: u64, n: u64, k: u64) -> Result<Self, RingError> {
        if m < 1 || n < 1 {
            return Err(RingError::FormatViolation {
                reason: "matrix format needs m, n >= 1",
            });
        }
        if k <= 1 {
            return Err(RingError::FormatViolation {
                reason: "minor size k must exceed 1",
            });
        }
        if k > m.min(n) {
            return Err(RingError::FormatViolation {
                reason: "minor size k exceeds min(m, n)",
            });
        }
        Ok(DeterminantalData { m, n, k })
    }

    pub fn format(&self) -> (u64, u64, u64) {
        (self.m, self.n, self.k)
    }

    /// Krull dimension `(m + n - k + 1)(k - 1)`.
    pub fn dimension(&self) -> u64 {
        (self.m + self.n - self.k + 1) * (self.k - 1)
    }

    /// Height `mn - (m + n - k + 1)(k - 1)` of the defining minor ideal.
    pub fn ideal_height(&self) -> u64 {
        self.m * self.n - self.dimension()
    }

    /// The divisor class group: infinite cyclic, generated by the prime of
    /// the first `k - 1` rows' minors.
    pub fn dkg(&self) -> AbelianGroup {
        AbelianGroup::free(1)
    }

    /// The affine class group, equal to the full divisor class group.
    pub fn akg(&self) -> AbelianGroup {
        AbelianGroup::free(1)
    }

    /// Height `n - k + 2` of the extension of the class-generating prime
    /// under the row-truncation map onto `(k-1) x n` matrices. It is at
    /// least 2 for every admissible format, which is why the prime's
    /// complement is never affine.
    pub fn extension_height(&self) -> u64 {
        self.n - self.k + 2
    }
}

/// Which sort of height-one prime of the Segre product ring is meant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SegreSort {
    Row,
    Col,
}

/// The Segre product ring `K[T_i S_j]` with `n` row primes
/// `p_i = (T_i S_1, ..., T_i S_m)` and `m` column primes
/// `q_j = (T_1 S_j, ..., T_n S_j)`.
///
/// The closed forms below describe the genuine product case `m, n >= 2`;
/// for `m = 1` or `n = 1` the ring degenerates to a polynomial ring and
/// the union rule does not apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SegreFormat {
    pub m: u64,
    pub n: u64,
}

impl SegreFormat {
    pub fn new(m: u64, n: u64) -> Result<Self, RingError> {
        if m < 1 || n < 1 {
            return Err(RingError::FormatViolation {
                reason: "segre format needs m, n >= 1",
            });
        }
        Ok(SegreFormat { m, n })
    }

    /// Whether the union of the listed row and column primes has affine
    /// complement: the empty union always does, and a nonempty union does
    /// exactly when both sorts occur.
    pub fn union_affine(&self, rows: &[u64], cols: &[u64]) -> Result<bool, RingError> {
        if rows.iter().any(|&i| i < 1 || i > self.n) {
            return Err(RingError::FormatViolation {
                reason: "row prime index out of range",
            });
        }
        if cols.iter().any(|&j| j < 1 || j > self.m) {
            return Err(RingError::FormatViolation {
                reason: "column prime index out of range",
            });
        }
        if rows.is_empty() && cols.is_empty() {
            return Ok(true);
        }
        Ok(!rows.is_empty() && !cols.is_empty())
    }

    /// The superheight of a single prime: each prime's extension reaches
    /// the height counting the variables of the *other* sort, so a row
    /// prime has superheight `m` and a column prime `n`.
    pub fn superheight(&self, sort: SegreSort) -> u64 {
        match sort {
            SegreSort::Row => self.m,
            SegreSort::Col => self.n,
        }
    }

    /// Dimension of the Segre product ring, `m + n - 1`.
    pub fn dimension(&self) -> u64 {
        self.m + self.n - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn biv(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| bi(x)).collect()
    }

    #[test]
    fn hyperbola_dkg_examples() {
        let h = HyperbolaData::local_from_i64(&[3, 3]).unwrap();
        assert_eq!(h.dkg(), AbelianGroup::new(1, vec![bi(3)]));

        let principal = HyperbolaData::local_from_i64(&[1]).unwrap();
        assert!(principal.dkg().is_trivial());

        let coprime = HyperbolaData::local_from_i64(&[2, 3]).unwrap();
        assert_eq!(coprime.dkg(), AbelianGroup::free(1));
    }

    #[test]
    fn hyperbola_rejects_bad_exponents() {
        assert_eq!(
            HyperbolaData::local_from_i64(&[2, 0]).unwrap_err(),
            RingError::InvalidExponent { index: 1 }
        );
    }

    #[test]
    fn akg_zero_by_comaximality() {
        let single = HyperbolaData::local_from_i64(&[5]).unwrap();
        assert!(single.akg_is_zero().unwrap());

        let local_pair = HyperbolaData::local_from_i64(&[3, 3]).unwrap();
        assert!(!local_pair.akg_is_zero().unwrap());

        let no_data = HyperbolaData::new(biv(&[2, 2]), false, None).unwrap();
        assert_eq!(no_data.akg_is_zero(), Err(RingError::MissingComaximalData));

        let all_pairs = vec![
            vec![false, true, true],
            vec![true, false, true],
            vec![true, true, false],
        ];
        let comax = HyperbolaData::new(biv(&[2, 3, 5]), false, Some(all_pairs)).unwrap();
        assert!(comax.akg_is_zero().unwrap());

        let one_bad = vec![
            vec![false, true, false],
            vec![true, false, true],
            vec![false, true, false],
        ];
        let partial = HyperbolaData::new(biv(&[2, 3, 5]), false, Some(one_bad)).unwrap();
        assert!(!partial.akg_is_zero().unwrap());
    }

    #[test]
    fn coaffine_window_for_three_three() {
        let h = HyperbolaData::local_from_i64(&[3, 3]).unwrap();
        assert!(h.is_coaffine(&biv(&[1, 2])).unwrap());
        assert!(h.is_coaffine(&biv(&[1, 1])).unwrap());
        assert!(!h.is_coaffine(&biv(&[2, 3])).unwrap());
        assert!(h.is_coaffine(&biv(&[3, 3])).unwrap(), "principal divisor");
        assert!(
            h.is_coaffine(&biv(&[0, 0])).unwrap(),
            "zero divisor is principal"
        );
        // shifted window: (-2, -1) + 1*(3, 3) = (1, 2)
        assert!(h.is_coaffine(&biv(&[-2, -1])).unwrap());
        assert_eq!(
            h.is_coaffine(&biv(&[1])),
            Err(RingError::DimensionMismatch {
                expected: 2,
                got: 1
            })
        );
    }

    #[test]
    fn affine_trivial_is_proportionality() {
        let h = HyperbolaData::local_from_i64(&[3, 3]).unwrap();
        assert!(h.is_affine_trivial(&biv(&[1, 1])).unwrap());
        assert!(!h.is_affine_trivial(&biv(&[1, 2])).unwrap());
        assert!(h.is_affine_trivial(&biv(&[0, 0])).unwrap());
        assert!(h.is_affine_trivial(&biv(&[-2, -2])).unwrap());

        let uneven = HyperbolaData::local_from_i64(&[2, 4]).unwrap();
        assert!(uneven.is_affine_trivial(&biv(&[1, 2])).unwrap());
        assert!(!uneven.is_affine_trivial(&biv(&[2, 1])).unwrap());
    }

    #[test]
    fn non_local_base_is_rejected_for_the_classification() {
        let h = HyperbolaData::new(biv(&[3, 3]), false, None).unwrap();
        assert_eq!(h.is_coaffine(&biv(&[1, 2])), Err(RingError::BaseNotLocal));
        assert_eq!(
            h.is_affine_trivial(&biv(&[1, 1])),
            Err(RingError::BaseNotLocal)
        );
        assert_eq!(h.akg(), Err(RingError::BaseNotLocal));
    }

    #[test]
    fn hyperbola_akg_rank() {
        let h = HyperbolaData::local_from_i64(&[3, 3]).unwrap();
        assert_eq!(h.akg().unwrap(), AbelianGroup::free(1));
        let single = HyperbolaData::local_from_i64(&[7]).unwrap();
        assert!(single.akg().unwrap().is_trivial());
        let triple = HyperbolaData::local_from_i64(&[2, 3, 5]).unwrap();
        assert_eq!(triple.akg().unwrap(), AbelianGroup::free(2));
    }

    // Oracle: scan every shift k in a window large enough to contain any
    // witness and test 0 < n + k d < d directly.
    fn coaffine_by_window_scan(d: &[i64], n: &[i64]) -> bool {
        let r = d.len();
        // principal?
        let principal = (-13i64..=13).any(|k| (0..r).all(|i| n[i] == k * d[i]));
        if principal {
            return true;
        }
        let bound = n.iter().map(|x| x.abs()).max().unwrap_or(0) + 1;
        (-bound..=bound).any(|k| (0..r).all(|i| 0 < n[i] + k * d[i] && n[i] + k * d[i] < d[i]))
    }

    #[test]
    fn coaffine_closed_form_matches_window_scan() {
        for d0 in 1..=4i64 {
            for d1 in 1..=4i64 {
                let h = HyperbolaData::local_from_i64(&[d0, d1]).unwrap();
                for n0 in -6..=6i64 {
                    for n1 in -6..=6i64 {
                        let got = h.is_coaffine(&biv(&[n0, n1])).unwrap();
                        let want = coaffine_by_window_scan(&[d0, d1], &[n0, n1]);
                        assert_eq!(got, want, "d=({},{}), n=({},{})", d0, d1, n0, n1);
                    }
                }
            }
        }
    }

    #[test]
    fn determinantal_formulas() {
        let d = DeterminantalData::new(2, 2, 2).unwrap();
        assert_eq!(d.dimension(), 3);
        assert_eq!(d.ideal_height(), 1);
        assert_eq!(d.akg(), AbelianGroup::free(1));
        assert_eq!(d.extension_height(), 2);

        let d = DeterminantalData::new(3, 3, 2).unwrap();
        assert_eq!(d.dimension(), 5);
        assert_eq!(d.ideal_height(), 4);
        assert_eq!(d.extension_height(), 3);

        let d = DeterminantalData::new(4, 3, 3).unwrap();
        assert_eq!(d.akg(), AbelianGroup::free(1));
        assert_eq!(d.extension_height(), 2);
    }

    #[test]
    fn determinantal_dimension_and_height_sum_to_mn() {
        for m in 1..=6u64 {
            for n in 1..=6u64 {
                for k in 2..=m.min(n) {
                    let d = DeterminantalData::new(m, n, k).unwrap();
                    assert_eq!(d.dimension() + d.ideal_height(), m * n);
                    assert!(d.extension_height() >= 2);
                }
            }
        }
    }

    // Larger minor size means a larger rank-bounded ring: the dimension
    // grows strictly in k, the defining ideal height shrinks.
    #[test]
    fn determinantal_dimension_grows_with_minor_size() {
        for m in 2..=6u64 {
            for n in 2..=6u64 {
                for k in 3..=m.min(n) {
                    let small = DeterminantalData::new(m, n, k - 1).unwrap();
                    let large = DeterminantalData::new(m, n, k).unwrap();
                    assert!(
                        large.dimension() > small.dimension(),
                        "({}, {}, {})",
                        m,
                        n,
                        k
                    );
                    assert!(large.ideal_height() < small.ideal_height());
                    assert!(large.extension_height() < small.extension_height());
                }
            }
        }
    }

    #[test]
    fn determinantal_rejects_bad_formats() {
        assert!(DeterminantalData::new(2, 2, 1).is_err());
        assert!(DeterminantalData::new(2, 2, 3).is_err());
        assert!(DeterminantalData::new(0, 2, 2).is_err());
    }

    #[test]
    fn segre_union_rule() {
        let s = SegreFormat::new(2, 2).unwrap();
        assert!(s.union_affine(&[], &[]).unwrap());
        assert!(!s.union_affine(&[1], &[]).unwrap());
        assert!(s.union_affine(&[1], &[2]).unwrap());
        assert!(!s.union_affine(&[], &[1, 2]).unwrap());
        assert!(s.union_affine(&[1, 2], &[1]).unwrap());
        assert!(s.union_affine(&[3], &[1]).is_err(), "row index beyond n");
    }

    #[test]
    fn segre_superheights() {
        let s = SegreFormat::new(2, 2).unwrap();
        assert_eq!(s.superheight(SegreSort::Row), 2);
        let s = SegreFormat::new(3, 5).unwrap();
        assert_eq!(s.superheight(SegreSort::Col), 5);
        assert_eq!(s.superheight(SegreSort::Row), 3);
        assert_eq!(s.dimension(), 7);
    }
}
