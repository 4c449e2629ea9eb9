//! Torus-invariant Weil divisors on the spectrum of a monoid ring.
//!
//! A monomial divisor is an integer vector indexed by the facets, the
//! coefficient at index `i` multiplying the height-one prime of facet `i`.
//! The divisor class group is the cokernel of the facet-valuation
//! embedding `Z^d -> Z^r`, and the affine class group is its free part:
//! a divisor class is affine-trivial exactly when it is torsion, and the
//! complement of an effective monomial divisor is affine exactly when its
//! support is the support of a single monomial.
//!
//! Only two affinity questions are decided here: complement-affinity of a
//! given effective monomial divisor, and affine-triviality of a class.
//! Whether checking monomial representatives suffices to decide
//! coaffinity of a whole divisor class is not settled and deliberately
//! not offered as an operation.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::cone::{face_of_complement, FacetSystem, MonoidSpec};
use crate::matrix::{class_of, cokernel, AbelianGroup, IntegerMatrix};

/// Errors raised by divisor operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DivisorError {
    /// The operation needs an effective divisor; `index` has a negative
    /// coefficient.
    NotEffective { index: usize },
    /// Coefficient count does not match the facet count.
    DimensionMismatch { expected: usize, got: usize },
    /// The simpliciality equivalences disagreed; this signals a bug in the
    /// library, not bad input.
    InternalInconsistency,
}

impl fmt::Display for DivisorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DivisorError::NotEffective { index } => {
                write!(
                    f,
                    "divisor is not effective: negative coefficient at facet {}",
                    index
                )
            }
            DivisorError::DimensionMismatch { expected, got } => {
                write!(f, "divisor has {} coefficients, expected {}", got, expected)
            }
            DivisorError::InternalInconsistency => {
                write!(f, "simpliciality equivalences disagree (library bug)")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for DivisorError {}

/// A torus-invariant Weil divisor `n_1 p_1 + ... + n_r p_r` written in the
/// facet-prime basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialDivisor {
    coeffs: Vec<BigInt>,
}

impl MonomialDivisor {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        MonomialDivisor { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        MonomialDivisor {
            coeffs: coeffs.iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    /// The effective divisor with coefficient one on each listed facet.
    pub fn from_support(r: usize, support: &BTreeSet<usize>) -> Self {
        let coeffs = (0..r)
            .map(|i| {
                if support.contains(&i) {
                    BigInt::from(1)
                } else {
                    BigInt::zero()
                }
            })
            .collect();
        MonomialDivisor { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_effective(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    fn checked_against(&self, facets: &FacetSystem) -> Result<(), DivisorError> {
        if self.coeffs.len() != facets.count() {
            return Err(DivisorError::DimensionMismatch {
                expected: facets.count(),
                got: self.coeffs.len(),
            });
        }
        Ok(())
    }
}

/// Divisor class group data of a monoid ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassGroupData {
    /// The full divisor class group `Z^r / image(v)`.
    pub dkg: AbelianGroup,
    /// The class group modulo torsion.
    pub akg: AbelianGroup,
    /// The valuation embedding whose cokernel presents `dkg`.
    pub projection: IntegerMatrix,
}

/// Computes the divisor class group and the affine class group.
pub fn divisor_class_group(facets: &FacetSystem) -> ClassGroupData {
    let projection = facets.valuation_matrix().clone();
    let dkg = cokernel(&projection);
    let akg = dkg.free_part();
    ClassGroupData {
        dkg,
        akg,
        projection,
    }
}

/// The affine class group alone: the divisor class group modulo torsion.
pub fn affine_class_group(facets: &FacetSystem) -> AbelianGroup {
    divisor_class_group(facets).akg
}

/// Facet indices carrying a positive coefficient. The divisor must be
/// effective.
pub fn support(divisor: &MonomialDivisor) -> Result<BTreeSet<usize>, DivisorError> {
    if let Some(index) = divisor.coeffs.iter().position(Signed::is_negative) {
        return Err(DivisorError::NotEffective { index });
    }
    Ok(divisor
        .coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.is_positive())
        .map(|(i, _)| i)
        .collect())
}

/// A monomial whose valuation support is exactly `wanted`, if one exists.
///
/// The candidate is the sum of the generators lying on the face cut out by
/// the complement of `wanted`; any realizing monomial is a sum of such
/// generators, so the candidate has the maximal support available and it
/// suffices to compare. The empty set is realized by the zero monomial.
pub fn support_witness(
    monoid: &MonoidSpec,
    facets: &FacetSystem,
    wanted: &BTreeSet<usize>,
) -> Option<Vec<BigInt>> {
    let face = face_of_complement(monoid, facets, wanted);
    let mut candidate = alloc::vec![BigInt::zero(); monoid.dim()];
    for g in &face.generators {
        for (c, x) in candidate.iter_mut().zip(g) {
            *c += x;
        }
    }
    let vals = facets
        .valuations_of(&candidate)
        .expect("candidate has the working dimension");
    let achieved: BTreeSet<usize> = vals
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_positive())
        .map(|(i, _)| i)
        .collect();
    if achieved == *wanted {
        Some(candidate)
    } else {
        None
    }
}

/// Whether some monomial has valuation support exactly `wanted`.
pub fn support_realizable(
    monoid: &MonoidSpec,
    facets: &FacetSystem,
    wanted: &BTreeSet<usize>,
) -> bool {
    support_witness(monoid, facets, wanted).is_some()
}

/// Whether the complement of the given effective divisor is affine.
/// This depends only on the divisor's support.
pub fn complement_is_affine(
    monoid: &MonoidSpec,
    facets: &FacetSystem,
    divisor: &MonomialDivisor,
) -> Result<bool, DivisorError> {
    divisor.checked_against(facets)?;
    let supp = support(divisor)?;
    Ok(support_realizable(monoid, facets, &supp))
}

/// Whether some positive multiple of the divisor is principal, i.e. the
/// divisor's class is torsion. Arbitrary (not necessarily effective)
/// coefficients are allowed.
pub fn is_affine_trivial(
    facets: &FacetSystem,
    divisor: &MonomialDivisor,
) -> Result<bool, DivisorError> {
    divisor.checked_against(facets)?;
    let (free, _torsion) = class_of(facets.valuation_matrix(), divisor.coeffs())
        .expect("coefficient count was checked");
    Ok(free.iter().all(Zero::is_zero))
}

/// The three equivalent simpliciality criteria, checked against each other.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialityReport {
    pub simplicial: bool,
    pub dkg_is_torsion: bool,
    pub akg_zero: bool,
}

/// Evaluates "facet count equals rank", "class group is torsion" and
/// "affine class group vanishes" independently. They agree for every
/// pointed full-dimensional monoid; a disagreement is reported as
/// [`DivisorError::InternalInconsistency`].
pub fn simpliciality_report(facets: &FacetSystem) -> Result<SimplicialityReport, DivisorError> {
    let groups = divisor_class_group(facets);
    let report = SimplicialityReport {
        simplicial: crate::cone::is_simplicial(facets),
        dkg_is_torsion: groups.dkg.is_torsion(),
        akg_zero: groups.akg.is_trivial(),
    };
    if report.simplicial != report.dkg_is_torsion || report.dkg_is_torsion != report.akg_zero {
        return Err(DivisorError::InternalInconsistency);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::{facet_valuations, interior_element, is_monoid_element, segre_monoid};

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn standard_monoid(d: usize) -> (MonoidSpec, FacetSystem) {
        let gens: Vec<Vec<BigInt>> = (0..d)
            .map(|i| {
                let mut v = alloc::vec![BigInt::zero(); d];
                v[i] = bi(1);
                v
            })
            .collect();
        let m = MonoidSpec::build(d, &gens).unwrap();
        let f = facet_valuations(&m).unwrap();
        (m, f)
    }

    fn segre22() -> (MonoidSpec, FacetSystem) {
        let m = segre_monoid(2, 2).unwrap();
        let f = facet_valuations(&m).unwrap();
        (m, f)
    }

    #[test]
    fn polynomial_ring_is_factorial() {
        for d in 1..=4 {
            let (_, f) = standard_monoid(d);
            let groups = divisor_class_group(&f);
            assert!(groups.dkg.is_trivial());
            assert!(groups.akg.is_trivial());
        }
    }

    #[test]
    fn segre_class_group_is_z() {
        let (_, f) = segre22();
        let groups = divisor_class_group(&f);
        assert_eq!(groups.dkg, AbelianGroup::free(1));
        assert_eq!(groups.akg, AbelianGroup::free(1));
    }

    #[test]
    fn quadric_cone_class_group_is_z2() {
        let gens = [alloc::vec![bi(1), bi(0)], alloc::vec![bi(1), bi(2)]];
        let m = MonoidSpec::in_ambient_lattice(2, &gens).unwrap();
        let f = facet_valuations(&m).unwrap();
        let groups = divisor_class_group(&f);
        assert_eq!(groups.dkg, AbelianGroup::new(0, alloc::vec![bi(2)]));
        assert!(groups.akg.is_trivial());
        assert_eq!(affine_class_group(&f), AbelianGroup::trivial());
    }

    #[test]
    fn support_basics() {
        assert_eq!(
            support(&MonomialDivisor::from_i64(&[0, 0, 0, 0])).unwrap(),
            BTreeSet::new()
        );
        let s = support(&MonomialDivisor::from_i64(&[1, 0, 2, 0])).unwrap();
        assert_eq!(s, [0usize, 2].into_iter().collect());
        assert_eq!(
            support(&MonomialDivisor::from_i64(&[1, -1, 0, 0])),
            Err(DivisorError::NotEffective { index: 1 })
        );
    }

    #[test]
    fn realizability_at_the_extremes() {
        let (m, f) = segre22();
        assert!(support_realizable(&m, &f, &BTreeSet::new()));
        let full: BTreeSet<usize> = (0..f.count()).collect();
        let witness = support_witness(&m, &f, &full).unwrap();
        assert_eq!(witness, interior_element(&m));
    }

    #[test]
    fn single_facet_support_on_segre_is_not_realizable() {
        let (m, f) = segre22();
        for i in 0..f.count() {
            let s: BTreeSet<usize> = [i].into_iter().collect();
            assert!(!support_realizable(&m, &f, &s));
            let d = MonomialDivisor::from_support(f.count(), &s);
            assert!(!complement_is_affine(&m, &f, &d).unwrap());
        }
    }

    #[test]
    fn generator_divisors_have_affine_complements() {
        let (m, f) = segre22();
        for g in m.generators() {
            let d = MonomialDivisor::new(f.valuations_of(g).unwrap());
            assert!(complement_is_affine(&m, &f, &d).unwrap());
            assert!(
                is_affine_trivial(&f, &d).unwrap(),
                "principal divisor must be trivial"
            );
        }
    }

    #[test]
    fn complement_affinity_depends_only_on_support() {
        let (m, f) = segre22();
        for coeffs in [[1i64, 0, 1, 0], [3, 0, 7, 0], [2, 0, 1, 0]] {
            let d = MonomialDivisor::from_i64(&coeffs);
            let e = MonomialDivisor::from_support(f.count(), &support(&d).unwrap());
            assert_eq!(
                complement_is_affine(&m, &f, &d).unwrap(),
                complement_is_affine(&m, &f, &e).unwrap()
            );
        }
    }

    #[test]
    fn single_facet_class_generates_z() {
        let (_, f) = segre22();
        let d = MonomialDivisor::from_i64(&[1, 0, 0, 0]);
        assert!(!is_affine_trivial(&f, &d).unwrap());
        let wrong_len = MonomialDivisor::from_i64(&[1, 0]);
        assert!(matches!(
            is_affine_trivial(&f, &wrong_len),
            Err(DivisorError::DimensionMismatch {
                expected: 4,
                got: 2
            })
        ));
    }

    #[test]
    fn simplicial_monoids_have_only_trivial_classes() {
        let (_, f) = standard_monoid(3);
        let report = simpliciality_report(&f).unwrap();
        assert!(report.simplicial && report.dkg_is_torsion && report.akg_zero);
        for coeffs in [[1i64, 0, 0], [2, 5, 1], [0, 3, 0]] {
            let d = MonomialDivisor::from_i64(&coeffs);
            assert!(is_affine_trivial(&f, &d).unwrap());
        }

        let (_, sf) = segre22();
        let sreport = simpliciality_report(&sf).unwrap();
        assert!(!sreport.simplicial && !sreport.dkg_is_torsion && !sreport.akg_zero);
    }

    // The face-sum shortcut must agree with raw enumeration: a support is
    // realizable iff some lattice point in a small box lies in the monoid
    // and has exactly that support.
    #[test]
    fn realizability_matches_bounded_enumeration_on_segre() {
        let (m, f) = segre22();
        let d = m.dim();
        let r = f.count();
        let bound = 3i64;
        let mut realizable_by_search: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut point = alloc::vec![bi(-bound); d];
        'outer: loop {
            if is_monoid_element(&m, &f, &point).unwrap() {
                let vals = f.valuations_of(&point).unwrap();
                let supp: Vec<usize> = vals
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| v.is_positive())
                    .map(|(i, _)| i)
                    .collect();
                realizable_by_search.insert(supp);
            }
            let mut i = 0;
            loop {
                if i == d {
                    break 'outer;
                }
                point[i] += 1;
                if point[i] <= bi(bound) {
                    break;
                }
                point[i] = bi(-bound);
                i += 1;
            }
        }
        for bits in 0..(1u32 << r) {
            let s: BTreeSet<usize> = (0..r).filter(|i| bits & (1 << i) != 0).collect();
            let by_face = support_realizable(&m, &f, &s);
            let by_search = realizable_by_search.contains(&s.iter().copied().collect::<Vec<_>>());
            assert_eq!(by_face, by_search, "support {:?}", s);
        }
    }
}
