//! Pointed normal affine monoids presented by lattice generators.
//!
//! A monoid is stored as a list of generators inside a working lattice
//! `Z^d`. The facets of the rational cone spanned by the generators are
//! computed exactly with the double description method: the dual cone
//! `{ y : <g, y> >= 0 for all generators g }` is built up one halfspace at
//! a time starting from a simplicial subcone, and its extreme rays are the
//! primitive facet valuations `v_1, ..., v_r`. Each valuation is a linear
//! form that is nonnegative on the monoid and cuts out one facet.
//!
//! Two constructors are provided. [`MonoidSpec::build`] re-expresses the
//! generators in a basis of the group they generate, so the working
//! lattice is exactly `ZM`; this is the entry point for monoids handed
//! over by generators. [`MonoidSpec::in_ambient_lattice`] keeps the given
//! lattice `Z^dim`, which is the right choice when the input describes a
//! cone together with an ambient lattice (the associated normal monoid is
//! then the set of lattice points of the cone).

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::matrix::{kernel_basis, solve_exact, sublattice_basis, IntegerMatrix};

/// Errors raised while validating or analyzing a monoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConeError {
    /// No nonzero generators were supplied.
    EmptyGenerators,
    /// A generator has the wrong number of coordinates.
    DimensionMismatch { expected: usize, got: usize },
    /// The cone contains a line; `witness` and its negative both lie in it.
    NotPointed { witness: Vec<BigInt> },
    /// The generators span a proper sublattice of the working lattice.
    NotFullDimensional { rank: usize, dim: usize },
}

impl fmt::Display for ConeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConeError::EmptyGenerators => write!(f, "no nonzero generators"),
            ConeError::DimensionMismatch { expected, got } => {
                write!(
                    f,
                    "generator has {} coordinates, expected {}",
                    got, expected
                )
            }
            ConeError::NotPointed { .. } => write!(f, "cone is not pointed"),
            ConeError::NotFullDimensional { rank, dim } => {
                write!(f, "generators span rank {} inside Z^{}", rank, dim)
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ConeError {}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for x in &v {
        g = g.gcd(x);
    }
    if g > BigInt::from(1) {
        for x in &mut v {
            *x = &*x / &g;
        }
    }
    v
}

/// A pointed, full-dimensional normal affine monoid given by generators in
/// its working lattice `Z^dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidSpec {
    dim: usize,
    generators: Vec<Vec<BigInt>>,
}

impl MonoidSpec {
    /// Validates the generators and re-expresses them in a basis of the
    /// lattice they generate, so the working lattice becomes `ZM`.
    ///
    /// Zero generators are dropped. Rejects empty input, ragged vectors and
    /// non-pointed cones.
    pub fn build(dim: usize, generators: &[Vec<BigInt>]) -> Result<Self, ConeError> {
        let gens = nonzero_checked(dim, generators)?;
        let basis = sublattice_basis(dim, &gens).expect("validated shapes");
        let d = basis.cols();
        let mut in_lattice = Vec::with_capacity(gens.len());
        for g in &gens {
            let coords = solve_exact(&basis, g)
                .expect("validated shapes")
                .expect("generator lies in the lattice it generates");
            in_lattice.push(coords);
        }
        Self::validated(d, in_lattice)
    }

    /// Validates the generators against the ambient lattice `Z^dim` without
    /// changing coordinates. The generators must span a full-rank subgroup.
    pub fn in_ambient_lattice(dim: usize, generators: &[Vec<BigInt>]) -> Result<Self, ConeError> {
        let gens = nonzero_checked(dim, generators)?;
        let rank = sublattice_basis(dim, &gens)
            .expect("validated shapes")
            .cols();
        if rank < dim {
            return Err(ConeError::NotFullDimensional { rank, dim });
        }
        Self::validated(dim, gens)
    }

    fn validated(dim: usize, generators: Vec<Vec<BigInt>>) -> Result<Self, ConeError> {
        let rays = dual_extreme_rays(dim, &generators);
        let ray_matrix = IntegerMatrix::from_rows(&rays).expect("rays share the dimension");
        let ray_rank = if rays.is_empty() {
            0
        } else {
            ray_matrix.rank()
        };
        if ray_rank < dim {
            let witness = if rays.is_empty() {
                // dual cone is {0}: any generator direction works
                primitive(generators[0].clone())
            } else {
                primitive(kernel_basis(&ray_matrix).column(0))
            };
            return Err(ConeError::NotPointed { witness });
        }
        Ok(MonoidSpec { dim, generators })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }

    /// Removes one generator by index, keeping the working lattice fixed.
    /// The remaining generators must still span a full-rank subgroup.
    pub fn without_generator(&self, index: usize) -> Result<Self, ConeError> {
        let gens: Vec<Vec<BigInt>> = self
            .generators
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != index)
            .map(|(_, g)| g.clone())
            .collect();
        Self::in_ambient_lattice(self.dim, &gens)
    }
}

fn nonzero_checked(dim: usize, generators: &[Vec<BigInt>]) -> Result<Vec<Vec<BigInt>>, ConeError> {
    for g in generators {
        if g.len() != dim {
            return Err(ConeError::DimensionMismatch {
                expected: dim,
                got: g.len(),
            });
        }
    }
    let gens: Vec<Vec<BigInt>> = generators
        .iter()
        .filter(|g| g.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    if gens.is_empty() {
        return Err(ConeError::EmptyGenerators);
    }
    Ok(gens)
}

/// The primitive facet valuations of a monoid, in a fixed deterministic
/// order (decreasing lexicographic, so `N^d` yields the identity matrix).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetSystem {
    normals: Vec<Vec<BigInt>>,
    valuation_matrix: IntegerMatrix,
}

impl FacetSystem {
    pub fn count(&self) -> usize {
        self.normals.len()
    }

    pub fn dim(&self) -> usize {
        self.valuation_matrix.cols()
    }

    pub fn normals(&self) -> &[Vec<BigInt>] {
        &self.normals
    }

    /// The matrix of the embedding `Z^d -> Z^r`, one row per facet
    /// valuation. Applied to any monoid element it returns a nonnegative
    /// vector.
    pub fn valuation_matrix(&self) -> &IntegerMatrix {
        &self.valuation_matrix
    }

    /// Evaluates all facet valuations on a lattice vector.
    pub fn valuations_of(&self, x: &[BigInt]) -> Result<Vec<BigInt>, ConeError> {
        if x.len() != self.dim() {
            return Err(ConeError::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(self.normals.iter().map(|n| dot(n, x)).collect())
    }

    /// Whether a lattice vector lies in the cone cut out by the facets.
    pub fn contains(&self, x: &[BigInt]) -> Result<bool, ConeError> {
        Ok(self.valuations_of(x)?.iter().all(|v| !v.is_negative()))
    }
}

/// Computes the facet valuations of the monoid's cone.
pub fn facet_valuations(monoid: &MonoidSpec) -> Result<FacetSystem, ConeError> {
    let d = monoid.dim();
    let span = sublattice_basis(d, monoid.generators()).expect("validated shapes");
    if span.cols() < d {
        return Err(ConeError::NotFullDimensional {
            rank: span.cols(),
            dim: d,
        });
    }
    let rays = dual_extreme_rays(d, monoid.generators());
    // Keep exactly the facet normals: the generators annihilated by the
    // normal must span a hyperplane.
    let mut facets: Vec<Vec<BigInt>> = rays
        .into_iter()
        .filter(|ray| {
            let tight: Vec<Vec<BigInt>> = monoid
                .generators()
                .iter()
                .filter(|g| dot(g, ray).is_zero())
                .cloned()
                .collect();
            // rank d-1 span; for d = 1 the empty set spans the zero face
            sublattice_basis(d, &tight)
                .expect("validated shapes")
                .cols()
                == d - 1
        })
        .collect();
    facets.sort();
    facets.reverse();
    facets.dedup();
    let valuation_matrix = IntegerMatrix::from_rows(&facets).expect("normals share the dimension");
    debug_assert!(monoid
        .generators()
        .iter()
        .all(|g| facets.iter().all(|n| !dot(n, g).is_negative())));
    Ok(FacetSystem {
        normals: facets,
        valuation_matrix,
    })
}

/// True when the facet count equals the lattice rank.
pub fn is_simplicial(facets: &FacetSystem) -> bool {
    facets.count() == facets.dim()
}

/// Extreme rays of the dual cone `{ y : <g, y> >= 0 }` by double
/// description with a simplicial start and the combinatorial adjacency
/// test. Requires the generators to span `Q^dim`.
fn dual_extreme_rays(dim: usize, generators: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    // greedily select dim linearly independent generators for the start
    let mut chosen: Vec<usize> = Vec::new();
    for (idx, _) in generators.iter().enumerate() {
        if chosen.len() == dim {
            break;
        }
        let mut trial: Vec<Vec<BigInt>> = chosen.iter().map(|&i| generators[i].clone()).collect();
        trial.push(generators[idx].clone());
        let rank = sublattice_basis(dim, &trial)
            .expect("validated shapes")
            .cols();
        if rank == trial.len() {
            chosen.push(idx);
        }
    }
    assert_eq!(chosen.len(), dim, "generators do not span the lattice");

    let start_rows: Vec<Vec<BigInt>> = chosen.iter().map(|&i| generators[i].clone()).collect();
    let g0 = IntegerMatrix::from_rows(&start_rows).expect("validated shapes");
    let det = g0.determinant();
    debug_assert!(!det.is_zero());
    let mut rays: Vec<Vec<BigInt>> = (0..dim)
        .map(|j| {
            let col: Vec<BigInt> = (0..dim).map(|i| adjugate_entry(&g0, i, j)).collect();
            let col = if det.is_negative() {
                col.into_iter().map(|x| -x).collect()
            } else {
                col
            };
            primitive(col)
        })
        .collect();

    let mut processed: Vec<usize> = chosen.clone();
    for (idx, g) in generators.iter().enumerate() {
        if chosen.contains(&idx) {
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|r| dot(g, r)).collect();
        if vals.iter().all(|v| !v.is_negative()) {
            processed.push(idx);
            continue;
        }
        let tight_sets: Vec<BTreeSet<usize>> = rays
            .iter()
            .map(|r| {
                processed
                    .iter()
                    .copied()
                    .filter(|&k| dot(&generators[k], r).is_zero())
                    .collect()
            })
            .collect();
        let mut next: Vec<Vec<BigInt>> = Vec::new();
        for (i, r) in rays.iter().enumerate() {
            if !vals[i].is_negative() {
                next.push(r.clone());
            }
        }
        for p in 0..rays.len() {
            if !vals[p].is_positive() {
                continue;
            }
            for n in 0..rays.len() {
                if !vals[n].is_negative() {
                    continue;
                }
                if !adjacent(p, n, &tight_sets) {
                    continue;
                }
                let combined: Vec<BigInt> = rays[p]
                    .iter()
                    .zip(&rays[n])
                    .map(|(rp, rn)| &vals[p] * rn - &vals[n] * rp)
                    .collect();
                next.push(primitive(combined));
            }
        }
        next.sort();
        next.dedup();
        rays = next;
        processed.push(idx);
    }
    rays
}

// Two extreme rays of a pointed cone are adjacent exactly when no third
// ray is tight on every constraint tight at both.
fn adjacent(p: usize, n: usize, tight_sets: &[BTreeSet<usize>]) -> bool {
    let common: BTreeSet<usize> = tight_sets[p]
        .intersection(&tight_sets[n])
        .copied()
        .collect();
    !tight_sets
        .iter()
        .enumerate()
        .any(|(i, t)| i != p && i != n && common.is_subset(t))
}

fn adjugate_entry(m: &IntegerMatrix, i: usize, j: usize) -> BigInt {
    let n = m.rows();
    let sub: Vec<Vec<BigInt>> = (0..n)
        .filter(|&r| r != j)
        .map(|r| {
            (0..n)
                .filter(|&c| c != i)
                .map(|c| m.get(r, c).clone())
                .collect()
        })
        .collect();
    let minor = IntegerMatrix::from_rows(&sub)
        .expect("square submatrix")
        .determinant();
    if (i + j) % 2 == 0 {
        minor
    } else {
        -minor
    }
}

/// A face of the monoid described by the facets it lies on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceData {
    /// Indices of the facet valuations vanishing on the face.
    pub zero_set: Vec<usize>,
    /// The monoid generators lying on the face.
    pub generators: Vec<Vec<BigInt>>,
}

/// The face cut out by all facets *not* in `support`: its generators are
/// the monoid generators on which every valuation outside `support`
/// vanishes. Faces of a monoid are generated by the generators they
/// contain, so this list generates the face.
pub fn face_of_complement(
    monoid: &MonoidSpec,
    facets: &FacetSystem,
    support: &BTreeSet<usize>,
) -> FaceData {
    let zero_set: Vec<usize> = (0..facets.count())
        .filter(|i| !support.contains(i))
        .collect();
    let generators = monoid
        .generators()
        .iter()
        .filter(|g| {
            zero_set
                .iter()
                .all(|&i| dot(&facets.normals()[i], g).is_zero())
        })
        .cloned()
        .collect();
    FaceData {
        zero_set,
        generators,
    }
}

/// The sum of all generators: an element with strictly positive value
/// under every facet valuation.
pub fn interior_element(monoid: &MonoidSpec) -> Vec<BigInt> {
    let mut sum = vec![BigInt::zero(); monoid.dim()];
    for g in monoid.generators() {
        for (s, x) in sum.iter_mut().zip(g) {
            *s += x;
        }
    }
    sum
}

/// Outcome of the bounded saturation search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturationReport {
    /// First lattice point of the cone (in the search order) that is not a
    /// monoid combination of the generators, if any.
    pub witness: Option<Vec<BigInt>>,
    /// Number of cone lattice points inspected.
    pub points_checked: usize,
    pub box_bound: u64,
}

impl SaturationReport {
    pub fn is_saturated(&self) -> bool {
        self.witness.is_none()
    }
}

/// Enumerates every lattice point `x` with `|x_i| <= box_bound` lying in
/// the cone and verifies that each is a sum of generators. The exhaustive
/// search is its own certificate: a reported witness is a cone lattice
/// point the monoid misses, and a clean pass means no such point exists in
/// the box.
///
/// Intended for small bounds (about 6 or less); the box has
/// `(2 * box_bound + 1)^d` candidate points.
pub fn saturation_check(
    monoid: &MonoidSpec,
    facets: &FacetSystem,
    box_bound: u64,
) -> SaturationReport {
    let d = monoid.dim();
    let mut memo: BTreeMap<Vec<BigInt>, bool> = BTreeMap::new();
    let mut point = vec![-BigInt::from(box_bound); d];
    let mut checked = 0usize;
    loop {
        if facets
            .contains(&point)
            .expect("point has the working dimension")
        {
            checked += 1;
            if !is_combination(&point, monoid, facets, &mut memo) {
                return SaturationReport {
                    witness: Some(point),
                    points_checked: checked,
                    box_bound,
                };
            }
        }
        // odometer step through the box
        let mut i = 0;
        loop {
            if i == d {
                return SaturationReport {
                    witness: None,
                    points_checked: checked,
                    box_bound,
                };
            }
            point[i] += 1;
            if point[i] <= BigInt::from(box_bound) {
                break;
            }
            point[i] = -BigInt::from(box_bound);
            i += 1;
        }
    }
}

/// Whether `x` is a sum of monoid generators, decided by exhaustive
/// descent. Exact, but exponential in the worst case; meant for the same
/// desk-scale points as [`saturation_check`].
pub fn is_monoid_element(
    monoid: &MonoidSpec,
    facets: &FacetSystem,
    x: &[BigInt],
) -> Result<bool, ConeError> {
    if x.len() != monoid.dim() {
        return Err(ConeError::DimensionMismatch {
            expected: monoid.dim(),
            got: x.len(),
        });
    }
    if !facets.contains(x)? {
        return Ok(false);
    }
    let mut memo = BTreeMap::new();
    Ok(is_combination(x, monoid, facets, &mut memo))
}

// Membership by descent: x is a generator combination iff subtracting some
// generator stays in the cone and the difference is again a combination.
// Terminates because the sum of all valuations strictly decreases.
fn is_combination(
    x: &[BigInt],
    monoid: &MonoidSpec,
    facets: &FacetSystem,
    memo: &mut BTreeMap<Vec<BigInt>, bool>,
) -> bool {
    if x.iter().all(Zero::is_zero) {
        return true;
    }
    if let Some(&known) = memo.get(x) {
        return known;
    }
    let mut found = false;
    for g in monoid.generators() {
        let y: Vec<BigInt> = x.iter().zip(g).map(|(a, b)| a - b).collect();
        if facets.contains(&y).expect("same dimension") && is_combination(&y, monoid, facets, memo)
        {
            found = true;
            break;
        }
    }
    memo.insert(x.to_vec(), found);
    found
}

/// The monoid of the Segre product ring: generators `e_i + f_j` inside
/// `Z^{m+n}`, re-expressed in the rank `m+n-1` lattice they generate.
pub fn segre_monoid(m: usize, n: usize) -> Result<MonoidSpec, ConeError> {
    let mut gens = Vec::with_capacity(m * n);
    for i in 0..m {
        for j in 0..n {
            let mut v = vec![BigInt::zero(); m + n];
            v[i] = BigInt::from(1);
            v[m + j] = BigInt::from(1);
            gens.push(v);
        }
    }
    MonoidSpec::build(m + n, &gens)
}
