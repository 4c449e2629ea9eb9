//! The built-in regression set: every check pins a worked computation or
//! property suite with its expected values and time budget, and reports
//! pass/fail per item. The deterministic seeds make repeated runs
//! identical.

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use affclass_core::bounds::{
    Configuration, Flag, Interval, InvariantKind, KnowledgeBase, Relation, RuleId,
};
use affclass_core::cone::{
    facet_valuations, is_simplicial, saturation_check, segre_monoid, FacetSystem, MonoidSpec,
};
use affclass_core::divisor::{
    affine_class_group, complement_is_affine, divisor_class_group, simpliciality_report,
    support_realizable, MonomialDivisor,
};
use affclass_core::matrix::{smith_normal_form, AbelianGroup, IntegerMatrix};
use affclass_core::rings::{DeterminantalData, HyperbolaData, SegreFormat};

/// Outcome of one regression item.
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub millis: u128,
}

type CheckFn = fn() -> Result<(), String>;

const CHECKS: [(&str, CheckFn, Option<u128>); 10] = [
    ("segre-2x2-pipeline", check_segre_pipeline, Some(1_000)),
    ("segre-both-sorts-rule", check_both_sorts, Some(10_000)),
    (
        "hyperbola-3-3-examples",
        check_hyperbola_examples,
        Some(1_000),
    ),
    (
        "hyperbola-window-oracle-grid",
        check_hyperbola_grid,
        Some(30_000),
    ),
    (
        "simpliciality-equivalences-random-cones",
        check_random_cones,
        Some(60_000),
    ),
    ("determinantal-formulas", check_determinantal, None),
    ("bounds-worked-examples", check_bounds_examples, None),
    ("bounds-engine-algebra", check_engine_algebra, None),
    ("smith-form-minor-gcd-oracle", check_smith_oracle, None),
    ("saturation-oracle", check_saturation, Some(30_000)),
];

/// Runs every item, never panicking; failures carry a description.
pub fn run_all() -> Vec<Check> {
    CHECKS
        .iter()
        .map(|&(name, f, budget)| run_one(name, f, budget))
        .collect()
}

/// Runs a single item by name.
pub fn run_named(name: &str) -> Option<Check> {
    CHECKS
        .iter()
        .find(|&&(check_name, _, _)| check_name == name)
        .map(|&(check_name, f, budget)| run_one(check_name, f, budget))
}

fn run_one(name: &'static str, f: CheckFn, budget: Option<u128>) -> Check {
    let start = Instant::now();
    let outcome = f();
    let millis = start.elapsed().as_millis();
    let (mut pass, mut detail) = match outcome {
        Ok(()) => (true, String::new()),
        Err(msg) => (false, msg),
    };
    if let Some(limit) = budget {
        if millis > limit {
            pass = false;
            detail = format!("{}took {} ms, budget {} ms", sep(&detail), millis, limit);
        }
    }
    Check {
        name,
        pass,
        detail,
        millis,
    }
}

fn sep(detail: &str) -> String {
    if detail.is_empty() {
        String::new()
    } else {
        format!("{}; ", detail)
    }
}

fn ensure(cond: bool, msg: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

fn bi(x: i64) -> BigInt {
    BigInt::from(x)
}

// 1. The rank-one 2x2 matrix ring: 4 facets, class group Z, affine class
// group Z, and the support of a single facet is not realizable, so the
// union of both variables of one sort has non-affine complement.
fn check_segre_pipeline() -> Result<(), String> {
    let monoid = segre_monoid(2, 2).map_err(|e| e.to_string())?;
    let facets = facet_valuations(&monoid).map_err(|e| e.to_string())?;
    ensure(facets.count() == 4, "expected 4 facets")?;
    let groups = divisor_class_group(&facets);
    ensure(groups.dkg == AbelianGroup::free(1), "dkg must be Z")?;
    ensure(groups.akg == AbelianGroup::free(1), "akg must be Z")?;
    for i in 0..4 {
        let single: BTreeSet<usize> = [i].into_iter().collect();
        ensure(
            !support_realizable(&monoid, &facets, &single),
            "single facet must not realize",
        )?;
        let divisor = MonomialDivisor::from_support(4, &single);
        ensure(
            !complement_is_affine(&monoid, &facets, &divisor).map_err(|e| e.to_string())?,
            "single-facet divisor complement must not be affine",
        )?;
    }
    Ok(())
}

// Classify the facets of segre_monoid(m, n) by which block of generator
// indices they charge. Returns (first-block classes, second-block classes)
// as facet index sets.
fn classify_segre_facets(
    monoid: &MonoidSpec,
    facets: &FacetSystem,
    m: usize,
    n: usize,
) -> Result<(Vec<usize>, Vec<usize>), String> {
    let mut first = Vec::new();
    let mut second = Vec::new();
    for f in 0..facets.count() {
        let mut charged: Vec<(usize, usize)> = Vec::new();
        for (g_index, g) in monoid.generators().iter().enumerate() {
            let vals = facets.valuations_of(g).map_err(|e| e.to_string())?;
            if vals[f].is_positive() {
                charged.push((g_index / n, g_index % n));
            }
        }
        let rows: BTreeSet<usize> = charged.iter().map(|&(i, _)| i).collect();
        let cols: BTreeSet<usize> = charged.iter().map(|&(_, j)| j).collect();
        if rows.len() == 1 && cols.len() == n {
            first.push(f);
        } else if cols.len() == 1 && rows.len() == m {
            second.push(f);
        } else {
            return Err(format!(
                "facet {} charges neither a full row nor a full column",
                f
            ));
        }
    }
    Ok((first, second))
}

// 2. For every format up to 3x3 and every facet subset, realizability of
// the support agrees with the closed-form rule "empty, or both sorts".
fn check_both_sorts() -> Result<(), String> {
    for m in 2..=3usize {
        for n in 2..=3usize {
            let monoid = segre_monoid(m, n).map_err(|e| e.to_string())?;
            let facets = facet_valuations(&monoid).map_err(|e| e.to_string())?;
            ensure(facets.count() == m + n, "facet count must be m + n")?;
            let (first, second) = classify_segre_facets(&monoid, &facets, m, n)?;
            let format = SegreFormat::new(m as u64, n as u64).map_err(|e| e.to_string())?;
            for bits in 0..(1u32 << facets.count()) {
                let subset: BTreeSet<usize> = (0..facets.count())
                    .filter(|i| bits & (1 << i) != 0)
                    .collect();
                // first-block facets play the column primes, second-block
                // facets the row primes; only both-sortedness matters
                let cols: Vec<u64> = first
                    .iter()
                    .enumerate()
                    .filter(|(_, f)| subset.contains(f))
                    .map(|(pos, _)| pos as u64 + 1)
                    .collect();
                let rows: Vec<u64> = second
                    .iter()
                    .enumerate()
                    .filter(|(_, f)| subset.contains(f))
                    .map(|(pos, _)| pos as u64 + 1)
                    .collect();
                let by_rule = format
                    .union_affine(&rows, &cols)
                    .map_err(|e| e.to_string())?;
                let by_toric = support_realizable(&monoid, &facets, &subset);
                if by_rule != by_toric {
                    return Err(format!(
                        "disagreement at format ({}, {}), subset {:?}: rule {}, toric {}",
                        m, n, subset, by_rule, by_toric
                    ));
                }
            }
        }
    }
    Ok(())
}

// 3. The exponent pair (3, 3): (1,1) is affine-trivial and coaffine,
// (1,2) coaffine but not affine-trivial, (2,3) not coaffine.
fn check_hyperbola_examples() -> Result<(), String> {
    let h = HyperbolaData::local_from_i64(&[3, 3]).map_err(|e| e.to_string())?;
    let cases: [(&[i64; 2], bool, bool); 3] = [
        (&[1, 1], true, true),
        (&[1, 2], true, false),
        (&[2, 3], false, false),
    ];
    for (n, coaffine, trivial) in cases {
        let n: Vec<BigInt> = n.iter().map(|&x| bi(x)).collect();
        let got_coaffine = h.is_coaffine(&n).map_err(|e| e.to_string())?;
        let got_trivial = h.is_affine_trivial(&n).map_err(|e| e.to_string())?;
        if got_coaffine != coaffine || got_trivial != trivial {
            return Err(format!(
                "divisor {:?}: coaffine {} (want {}), affine_trivial {} (want {})",
                n, got_coaffine, coaffine, got_trivial, trivial
            ));
        }
    }
    Ok(())
}

fn coaffine_by_window_scan(d: &[i64], n: &[i64]) -> bool {
    let r = d.len();
    let principal_range = n.iter().map(|x| x.abs()).max().unwrap_or(0) + 1;
    if (-principal_range..=principal_range).any(|k| (0..r).all(|i| n[i] == k * d[i])) {
        return true;
    }
    let bound = n.iter().map(|x| x.abs()).max().unwrap_or(0) + 1;
    (-bound..=bound).any(|k| (0..r).all(|i| 0 < n[i] + k * d[i] && n[i] + k * d[i] < d[i]))
}

// 4. Exhaustive grid: the closed form agrees with the shift-scanning
// oracle for r <= 3, exponents up to 4, coefficients in [-6, 6].
fn check_hyperbola_grid() -> Result<(), String> {
    for r in 1..=3usize {
        let mut d = vec![1i64; r];
        loop {
            let h = HyperbolaData::local_from_i64(&d).map_err(|e| e.to_string())?;
            let mut n = vec![-6i64; r];
            loop {
                let n_big: Vec<BigInt> = n.iter().map(|&x| bi(x)).collect();
                let got = h.is_coaffine(&n_big).map_err(|e| e.to_string())?;
                let want = coaffine_by_window_scan(&d, &n);
                if got != want {
                    return Err(format!(
                        "d = {:?}, n = {:?}: closed form {}, oracle {}",
                        d, n, got, want
                    ));
                }
                // affine-trivial divisors and their multiples stay coaffine
                if h.is_affine_trivial(&n_big).map_err(|e| e.to_string())? {
                    for factor in 1..=3i64 {
                        let multiple: Vec<BigInt> = n.iter().map(|&x| bi(x * factor)).collect();
                        if !h.is_coaffine(&multiple).map_err(|e| e.to_string())? {
                            return Err(format!(
                                "d = {:?}: trivial divisor {:?} has non-coaffine multiple",
                                d, n
                            ));
                        }
                    }
                }
                if !advance(&mut n, -6, 6) {
                    break;
                }
            }
            if !advance(&mut d, 1, 4) {
                break;
            }
        }
    }
    Ok(())
}

fn advance(digits: &mut [i64], lo: i64, hi: i64) -> bool {
    for digit in digits.iter_mut() {
        *digit += 1;
        if *digit <= hi {
            return true;
        }
        *digit = lo;
    }
    false
}

// 5. Random pointed full-dimensional cones: the three simpliciality
// criteria always agree.
fn check_random_cones() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0DE);
    let mut produced = 0usize;
    let mut attempts = 0usize;
    while produced < 100 {
        attempts += 1;
        if attempts > 100_000 {
            return Err("could not sample enough pointed cones".into());
        }
        let dim = rng.gen_range(1..=4usize);
        let count = rng.gen_range(dim..=8usize);
        let gens: Vec<Vec<BigInt>> = (0..count)
            .map(|_| (0..dim).map(|_| bi(rng.gen_range(-3..=3))).collect())
            .collect();
        let Ok(monoid) = MonoidSpec::build(dim, &gens) else {
            continue;
        };
        let facets = facet_valuations(&monoid).map_err(|e| e.to_string())?;
        let report =
            simpliciality_report(&facets).map_err(|e| format!("cone {:?}: {}", gens, e))?;
        // recompute the three answers independently and compare
        let groups = divisor_class_group(&facets);
        let expected = [
            is_simplicial(&facets),
            groups.dkg.is_torsion(),
            affine_class_group(&facets).is_trivial(),
        ];
        if [report.simplicial, report.dkg_is_torsion, report.akg_zero] != expected {
            return Err(format!("boolean mismatch on cone {:?}", gens));
        }
        produced += 1;
    }
    Ok(())
}

// 6. Determinantal formulas: the 2x2 rank-one case, the toric cross-check,
// and extension heights over all admissible formats up to 6x6.
fn check_determinantal() -> Result<(), String> {
    let d = DeterminantalData::new(2, 2, 2).map_err(|e| e.to_string())?;
    ensure(d.dimension() == 3, "dimension of the 2x2 case must be 3")?;
    ensure(
        d.ideal_height() == 1,
        "ideal height of the 2x2 case must be 1",
    )?;
    ensure(d.akg() == AbelianGroup::free(1), "akg must be Z")?;
    ensure(
        d.extension_height() == 2,
        "extension height of the 2x2 case must be 2",
    )?;

    // same ring by its monoid presentation
    let monoid = segre_monoid(2, 2).map_err(|e| e.to_string())?;
    let facets = facet_valuations(&monoid).map_err(|e| e.to_string())?;
    ensure(
        affine_class_group(&facets) == d.akg(),
        "toric route must give the same akg",
    )?;

    for m in 1..=6u64 {
        for n in 1..=6u64 {
            for k in 2..=m.min(n) {
                let data = DeterminantalData::new(m, n, k).map_err(|e| e.to_string())?;
                ensure(
                    data.dimension() + data.ideal_height() == m * n,
                    "dimension and height must sum to mn",
                )?;
                ensure(
                    data.extension_height() >= 2,
                    "extension height must be at least 2",
                )?;
                ensure(
                    data.akg() == AbelianGroup::free(1),
                    "akg must be Z for all formats",
                )?;
            }
        }
    }
    Ok(())
}

// 7. (a) maximal ideal in a local 3-dimensional ring pins every invariant;
// (b) the mixed worked example forces afra = 3; (c) superheight above the
// dimension is rejected by the right rule.
fn check_bounds_examples() -> Result<(), String> {
    use InvariantKind::*;

    let kb = KnowledgeBase::new()
        .with_flag(Flag::RingLocal)
        .with_flag(Flag::IdealMaximal)
        .assert_fact(Dim, Relation::Eq, 3)
        .map_err(|e| e.to_string())?;
    let p = kb.propagate().map_err(|e| e.to_string())?;
    for kind in [Ht, Alt, SuphtEnd, Supht, Ara, Afra, Kohoht, Dim] {
        ensure(
            p.kb.query(kind) == Interval::exactly(3),
            "all invariants must equal 3",
        )?;
    }
    ensure(p.kb.query(Cd) == Interval::exactly(2), "cd must be 2")?;

    let mut kb = KnowledgeBase::new();
    for (kind, v) in [(Ht, 2), (Supht, 2), (Kohoht, 3), (Ara, 3)] {
        kb = kb
            .assert_fact(kind, Relation::Eq, v)
            .map_err(|e| e.to_string())?;
    }
    let p = kb.propagate().map_err(|e| e.to_string())?;
    ensure(
        p.kb.query(Afra) == Interval::exactly(3),
        "afra must be forced to 3",
    )?;

    let kb = KnowledgeBase::new()
        .assert_fact(Supht, Relation::Eq, 3)
        .and_then(|kb| kb.assert_fact(Dim, Relation::Eq, 2))
        .map_err(|e| e.to_string())?;
    match kb.propagate() {
        Ok(_) => Err("superheight 3 with dimension 2 must contradict".into()),
        Err(report) => {
            ensure(
                report.rule == RuleId::R2,
                "the dimension bound must be named",
            )?;
            ensure(
                report.trace.last().map(|s| s.rule) == Some(RuleId::R2),
                "trace must end with the violated rule",
            )
        }
    }
}

fn interval_contained(inner: &Interval, outer: &Interval) -> bool {
    inner.lo() >= outer.lo()
        && match (inner.hi(), outer.hi()) {
            (_, None) => true,
            (Some(a), Some(b)) => a <= b,
            (None, Some(_)) => false,
        }
}

// 8. Idempotence, monotonicity and order-confluence on random fact sets.
fn check_engine_algebra() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA15EB);
    let relations = [Relation::Eq, Relation::Le, Relation::Ge];
    for round in 0..1000 {
        let mut kb = KnowledgeBase::new();
        if rng.gen_bool(0.15) {
            kb = kb.with_configuration(Configuration::GeneralScheme);
        }
        for flag in Flag::ALL {
            if rng.gen_bool(0.12) {
                kb = kb.with_flag(flag);
            }
        }
        for _ in 0..rng.gen_range(1..=5usize) {
            let kind = InvariantKind::ALL[rng.gen_range(0..InvariantKind::ALL.len())];
            let rel = relations[rng.gen_range(0..3)];
            let value = rng.gen_range(0..=6u64);
            if let Ok(next) = kb.assert_fact(kind, rel, value) {
                kb = next;
            }
        }

        let canonical = kb.propagate();

        // order confluence: shuffled rule orders give the same outcome
        for _ in 0..3 {
            let mut order = RuleId::UNARY;
            order.shuffle(&mut rng);
            match (&canonical, kb.propagate_with_order(&order)) {
                (Ok(a), Ok(b)) => {
                    if a.kb != b.kb {
                        return Err(format!("round {}: fixpoint depends on rule order", round));
                    }
                }
                (Err(_), Err(_)) => {}
                _ => return Err(format!("round {}: status depends on rule order", round)),
            }
        }

        let Ok(propagated) = canonical else { continue };

        // idempotence
        let again = propagated.kb.propagate().map_err(|e| e.to_string())?;
        if again.kb != propagated.kb || !again.explain().is_empty() {
            return Err(format!("round {}: propagation is not idempotent", round));
        }

        // monotonicity: one more fact never widens an interval
        let kind = InvariantKind::ALL[rng.gen_range(0..InvariantKind::ALL.len())];
        let rel = relations[rng.gen_range(0..3)];
        let value = rng.gen_range(0..=6u64);
        if let Ok(stronger) = kb.assert_fact(kind, rel, value) {
            if let Ok(narrowed) = stronger.propagate() {
                for k in InvariantKind::ALL {
                    if !interval_contained(&narrowed.kb.query(k), &propagated.kb.query(k)) {
                        return Err(format!("round {}: adding a fact widened {}", round, k));
                    }
                }
            }
        }
    }
    Ok(())
}

fn combinations(start: usize, n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in start..n {
        for mut rest in combinations(first + 1, n, k - 1) {
            let mut c = vec![first];
            c.append(&mut rest);
            out.push(c);
        }
    }
    out
}

fn minor_gcd_factors(a: &IntegerMatrix) -> Vec<BigInt> {
    let mut gcds = vec![BigInt::one()];
    for k in 1..=a.rows().min(a.cols()) {
        let mut g = BigInt::zero();
        for rows in combinations(0, a.rows(), k) {
            for cols in combinations(0, a.cols(), k) {
                let sub: Vec<Vec<BigInt>> = rows
                    .iter()
                    .map(|&i| cols.iter().map(|&j| a.get(i, j).clone()).collect())
                    .collect();
                g = g.gcd(&IntegerMatrix::from_rows(&sub).unwrap().determinant());
            }
        }
        if g.is_zero() {
            break;
        }
        gcds.push(g);
    }
    (1..gcds.len()).map(|k| &gcds[k] / &gcds[k - 1]).collect()
}

// 9. Smith form versus the minor-gcd oracle on 200 random matrices, with
// the transform identities asserted on every call.
fn check_smith_oracle() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x57A7);
    for round in 0..200 {
        let entries: Vec<BigInt> = (0..9).map(|_| bi(rng.gen_range(-3..=3))).collect();
        let a = IntegerMatrix::new(3, 3, entries).map_err(|e| e.to_string())?;
        let snf = smith_normal_form(&a);
        if snf.u.mul(&a).mul(&snf.v) != snf.d {
            return Err(format!("round {}: U*A*V != D", round));
        }
        if !snf.u.is_unimodular() || !snf.v.is_unimodular() {
            return Err(format!("round {}: transform not unimodular", round));
        }
        if snf.diagonal() != minor_gcd_factors(&a) {
            return Err(format!(
                "round {}: invariant factors disagree with minor gcds",
                round
            ));
        }
    }
    Ok(())
}

// 10. The bounded saturation search: clean passes on the standard and
// rank-one monoids, and a genuine witness once a generator is removed
// from the degree-two monoid.
fn check_saturation() -> Result<(), String> {
    for d in 2..=3usize {
        let gens: Vec<Vec<BigInt>> = (0..d)
            .map(|i| {
                let mut v = vec![BigInt::zero(); d];
                v[i] = bi(1);
                v
            })
            .collect();
        let monoid = MonoidSpec::build(d, &gens).map_err(|e| e.to_string())?;
        let facets = facet_valuations(&monoid).map_err(|e| e.to_string())?;
        ensure(
            saturation_check(&monoid, &facets, 3).is_saturated(),
            "the standard monoid must be saturated",
        )?;
    }
    let segre = segre_monoid(2, 2).map_err(|e| e.to_string())?;
    let segre_facets = facet_valuations(&segre).map_err(|e| e.to_string())?;
    ensure(
        saturation_check(&segre, &segre_facets, 3).is_saturated(),
        "the rank-one monoid must be saturated",
    )?;

    let veronese = MonoidSpec::build(
        2,
        &[vec![bi(2), bi(0)], vec![bi(1), bi(1)], vec![bi(0), bi(2)]],
    )
    .map_err(|e| e.to_string())?;
    let veronese_facets = facet_valuations(&veronese).map_err(|e| e.to_string())?;
    ensure(
        saturation_check(&veronese, &veronese_facets, 3).is_saturated(),
        "the full degree-two monoid must be saturated",
    )?;

    let pruned = veronese.without_generator(1).map_err(|e| e.to_string())?;
    let pruned_facets = facet_valuations(&pruned).map_err(|e| e.to_string())?;
    let report = saturation_check(&pruned, &pruned_facets, 3);
    let witness = report
        .witness
        .ok_or("removing a generator must produce a witness")?;
    ensure(
        pruned_facets
            .contains(&witness)
            .map_err(|e| e.to_string())?,
        "the witness must lie in the cone",
    )?;
    ensure(
        !affclass_core::cone::is_monoid_element(&pruned, &pruned_facets, &witness)
            .map_err(|e| e.to_string())?,
        "the witness must not be a generator combination",
    )
}
