//! The acceptance suite: one test per criterion of the regression set,
//! each printing its pass line. Every expected value and time budget is
//! pinned inside the corresponding check in `affclass_cli::selfcheck`;
//! a handful of spot values are re-asserted here directly against the
//! library so the suite does not reduce to a single call site.

use std::collections::BTreeSet;

use affclass_cli::selfcheck;
use affclass_core::bounds::{Flag, Interval, InvariantKind, KnowledgeBase, Relation};
use affclass_core::cone::{facet_valuations, segre_monoid};
use affclass_core::divisor::{divisor_class_group, support_realizable};
use affclass_core::matrix::AbelianGroup;
use affclass_core::rings::{DeterminantalData, HyperbolaData};

fn criterion(number: usize, name: &str) {
    let check = selfcheck::run_named(name).expect("check exists");
    println!(
        "criterion {:2} {:<42} {} ({} ms)",
        number,
        check.name,
        if check.pass { "pass" } else { "FAIL" },
        check.millis
    );
    assert!(
        check.pass,
        "criterion {} ({}) failed: {}",
        number, check.name, check.detail
    );
}

#[test]
fn criterion_01_segre_2x2_pipeline() {
    criterion(1, "segre-2x2-pipeline");
    // spot re-check straight from the library
    let monoid = segre_monoid(2, 2).unwrap();
    let facets = facet_valuations(&monoid).unwrap();
    assert_eq!(facets.count(), 4);
    let groups = divisor_class_group(&facets);
    assert_eq!(groups.dkg, AbelianGroup::free(1));
    assert_eq!(groups.akg, AbelianGroup::free(1));
    let single: BTreeSet<usize> = [0].into_iter().collect();
    assert!(!support_realizable(&monoid, &facets, &single));
}

#[test]
fn criterion_02_segre_both_sorts_rule() {
    criterion(2, "segre-both-sorts-rule");
}

#[test]
fn criterion_03_hyperbola_3_3_examples() {
    criterion(3, "hyperbola-3-3-examples");
    let h = HyperbolaData::local_from_i64(&[3, 3]).unwrap();
    let n = |a: i64, b: i64| vec![a.into(), b.into()];
    assert!(h.is_affine_trivial(&n(1, 1)).unwrap());
    assert!(h.is_coaffine(&n(1, 1)).unwrap());
    assert!(h.is_coaffine(&n(1, 2)).unwrap());
    assert!(!h.is_affine_trivial(&n(1, 2)).unwrap());
    assert!(!h.is_coaffine(&n(2, 3)).unwrap());
}

#[test]
fn criterion_04_hyperbola_window_oracle_grid() {
    criterion(4, "hyperbola-window-oracle-grid");
}

#[test]
fn criterion_05_simpliciality_equivalences() {
    criterion(5, "simpliciality-equivalences-random-cones");
}

#[test]
fn criterion_06_determinantal_formulas() {
    criterion(6, "determinantal-formulas");
    let d = DeterminantalData::new(2, 2, 2).unwrap();
    assert_eq!(
        (d.dimension(), d.ideal_height(), d.extension_height()),
        (3, 1, 2),
        "rank-one 2x2 matrices"
    );
}

#[test]
fn criterion_07_bounds_worked_examples() {
    criterion(7, "bounds-worked-examples");
    // the local/maximal scenario once more, through the public api
    let p = KnowledgeBase::new()
        .with_flag(Flag::RingLocal)
        .with_flag(Flag::IdealMaximal)
        .assert_fact(InvariantKind::Dim, Relation::Eq, 3)
        .unwrap()
        .propagate()
        .unwrap();
    assert_eq!(p.kb.query(InvariantKind::Ara), Interval::exactly(3));
    assert_eq!(p.kb.query(InvariantKind::Cd), Interval::exactly(2));
}

#[test]
fn criterion_08_bounds_engine_algebra() {
    criterion(8, "bounds-engine-algebra");
}

#[test]
fn criterion_09_smith_form_oracle() {
    criterion(9, "smith-form-minor-gcd-oracle");
}

#[test]
fn criterion_10_saturation_oracle() {
    criterion(10, "saturation-oracle");
}
