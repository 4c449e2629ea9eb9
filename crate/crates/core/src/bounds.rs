//! Interval constraint propagation over the standard inequalities between
//! height invariants of one configuration: either an ideal in a noetherian
//! ring (together with its open complement) or a single noetherian scheme.
//!
//! The tracked invariants are height `ht`, altitude `alt`, finite
//! superheight `supht_end`, superheight `supht`, arithmetical rank `ara`,
//! affine covering number `afra`, cohomological height `kohoht`,
//! cohomological dimension `cd`, projective height `pd_height` and the
//! ring (or scheme) dimension `dim`. Each invariant carries a closed
//! interval of natural numbers (the upper end possibly infinite); facts
//! intersect intervals, and [`KnowledgeBase::propagate`] narrows all
//! intervals to the least fixpoint of the rule set or reports the first
//! violated rule.
//!
//! Rules only ever shrink intervals, so the fixpoint is independent of the
//! application order, propagation is idempotent, and adding facts can only
//! narrow results.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

/// The invariants the engine reasons about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum InvariantKind {
    Ht,
    Alt,
    SuphtEnd,
    Supht,
    Ara,
    Afra,
    Kohoht,
    Cd,
    PdHeight,
    Dim,
}

impl InvariantKind {
    pub const ALL: [InvariantKind; 10] = [
        InvariantKind::Ht,
        InvariantKind::Alt,
        InvariantKind::SuphtEnd,
        InvariantKind::Supht,
        InvariantKind::Ara,
        InvariantKind::Afra,
        InvariantKind::Kohoht,
        InvariantKind::Cd,
        InvariantKind::PdHeight,
        InvariantKind::Dim,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InvariantKind::Ht => "ht",
            InvariantKind::Alt => "alt",
            InvariantKind::SuphtEnd => "supht_end",
            InvariantKind::Supht => "supht",
            InvariantKind::Ara => "ara",
            InvariantKind::Afra => "afra",
            InvariantKind::Kohoht => "kohoht",
            InvariantKind::Cd => "cd",
            InvariantKind::PdHeight => "pd_height",
            InvariantKind::Dim => "dim",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|k| k.name() == name)
            .or(match name {
                "dim_ring" => Some(InvariantKind::Dim),
                _ => None,
            })
    }

    fn index(self) -> usize {
        Self::ALL
            .iter()
            .position(|&k| k == self)
            .expect("listed in ALL")
    }
}

impl fmt::Display for InvariantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A closed interval of natural numbers; `hi = None` means unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: u64,
    hi: Option<u64>,
}

impl Interval {
    pub const FULL: Interval = Interval { lo: 0, hi: None };

    pub fn exactly(v: u64) -> Self {
        Interval { lo: v, hi: Some(v) }
    }

    pub fn at_least(v: u64) -> Self {
        Interval { lo: v, hi: None }
    }

    pub fn at_most(v: u64) -> Self {
        Interval { lo: 0, hi: Some(v) }
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> Option<u64> {
        self.hi
    }

    pub fn is_empty(&self) -> bool {
        self.hi.is_some_and(|h| h < self.lo)
    }

    pub fn is_point(&self) -> bool {
        self.hi == Some(self.lo)
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        let lo = self.lo.max(other.lo);
        let hi = match (self.hi, other.hi) {
            (None, h) | (h, None) => h,
            (Some(a), Some(b)) => Some(a.min(b)),
        };
        Interval { lo, hi }
    }

    // [lo+1, hi+1]; saturates at the type limit instead of overflowing
    fn up1(&self) -> Interval {
        Interval {
            lo: self.lo.saturating_add(1),
            hi: self.hi.map(|h| h.saturating_add(1)),
        }
    }

    // [lo-1, hi-1] clamped to the naturals; callers must ensure hi >= 1
    fn down1(&self) -> Interval {
        Interval {
            lo: self.lo.saturating_sub(1),
            hi: self.hi.map(|h| h - 1),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.hi {
            Some(h) => write!(f, "[{}, {}]", self.lo, h),
            None => write!(f, "[{}, inf)", self.lo),
        }
    }
}

/// Context facts that switch rules on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Flag {
    RingLocal,
    IdealMaximal,
    RingRegular,
    FiniteTypeOverField,
    NormalDomain,
    FinitePd,
    CharP,
    OpenSetAffine,
    PuncturedLocal,
}

impl Flag {
    pub const ALL: [Flag; 9] = [
        Flag::RingLocal,
        Flag::IdealMaximal,
        Flag::RingRegular,
        Flag::FiniteTypeOverField,
        Flag::NormalDomain,
        Flag::FinitePd,
        Flag::CharP,
        Flag::OpenSetAffine,
        Flag::PuncturedLocal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Flag::RingLocal => "ring_local",
            Flag::IdealMaximal => "ideal_maximal",
            Flag::RingRegular => "ring_regular",
            Flag::FiniteTypeOverField => "finite_type_over_field",
            Flag::NormalDomain => "normal_domain",
            Flag::FinitePd => "finite_pd",
            Flag::CharP => "char_p",
            Flag::OpenSetAffine => "open_set_affine",
            Flag::PuncturedLocal => "punctured_local",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|f| f.name() == name)
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// What one knowledge base models.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Configuration {
    /// An ideal in a noetherian ring, `dim` being the ring dimension. The
    /// open set invariants (`afra`, `kohoht`, `cd`) refer to the ideal's
    /// complement.
    #[default]
    IdealInAffineRing,
    /// A noetherian scheme, `dim` being the scheme dimension.
    GeneralScheme,
}

/// Relations accepted by [`KnowledgeBase::assert_fact`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Le,
    Ge,
}

/// Identifiers of the propagation rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    R9,
    R10,
    R11,
    R12,
    R13,
    R14,
    /// Superheight additivity over an open/closed decomposition (used by
    /// [`decomposition_bound`], not by the unary fixpoint).
    C1,
    /// Cohomological height additivity over an open/closed decomposition.
    C2,
}

impl RuleId {
    pub const UNARY: [RuleId; 14] = [
        RuleId::R1,
        RuleId::R2,
        RuleId::R3,
        RuleId::R4,
        RuleId::R5,
        RuleId::R6,
        RuleId::R7,
        RuleId::R8,
        RuleId::R9,
        RuleId::R10,
        RuleId::R11,
        RuleId::R12,
        RuleId::R13,
        RuleId::R14,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::R1 => "R1",
            RuleId::R2 => "R2",
            RuleId::R3 => "R3",
            RuleId::R4 => "R4",
            RuleId::R5 => "R5",
            RuleId::R6 => "R6",
            RuleId::R7 => "R7",
            RuleId::R8 => "R8",
            RuleId::R9 => "R9",
            RuleId::R10 => "R10",
            RuleId::R11 => "R11",
            RuleId::R12 => "R12",
            RuleId::R13 => "R13",
            RuleId::R14 => "R14",
            RuleId::C1 => "C1",
            RuleId::C2 => "C2",
        }
    }

    /// A self-contained statement of the rule, for traces and reports.
    pub fn statement(self) -> &'static str {
        match self {
            RuleId::R1 => "ht <= alt <= supht_end <= supht <= ara",
            RuleId::R2 => "the superheight of an ideal is at most the ring dimension",
            RuleId::R3 => "supht <= kohoht <= afra, and afra <= ara for an ideal",
            RuleId::R4 => "kohoht = cd + 1",
            RuleId::R5 => {
                "cd is at most the dimension; below it for an open subset of an affine spectrum"
            }
            RuleId::R6 => {
                "for the maximal ideal of a local ring all height numbers equal the dimension"
            }
            RuleId::R7 => "in a regular ring the altitude equals the superheight",
            RuleId::R8 => {
                "for algebras of finite type over a field the finite superheight is the superheight"
            }
            RuleId::R9 => "a module of finite projective dimension has pd_height >= supht",
            RuleId::R10 => "finite projective height in characteristic p bounds kohoht",
            RuleId::R11 => "an affine open set has cohomological dimension zero",
            RuleId::R12 => "the punctured spectrum of a local ring has cd = dim - 1",
            RuleId::R13 => {
                "in a normal domain, altitude below the dimension bounds supht_end below it too"
            }
            RuleId::R14 => "the superheight of a scheme is at most its dimension plus one",
            RuleId::C1 => "supht(whole) <= supht(closed part) + supht(open complement)",
            RuleId::C2 => "kohoht(whole) <= kohoht(open part) + kohoht(closed part)",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One interval narrowing performed during propagation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: RuleId,
    pub statement: &'static str,
    pub kind: InvariantKind,
    pub before: Interval,
    pub after: Interval,
}

/// A rule narrowed an interval to the empty set.
#[derive(Clone, Debug)]
pub struct ContradictionReport {
    pub rule: RuleId,
    pub statement: &'static str,
    pub kind: InvariantKind,
    /// The clashing bounds: lower bound exceeding the upper bound.
    pub lo: u64,
    pub hi: u64,
    /// Steps up to and including the violation.
    pub trace: Vec<TraceStep>,
}

impl fmt::Display for ContradictionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "contradiction at rule {} ({}): {} requires lo {} > hi {}",
            self.rule, self.statement, self.kind, self.lo, self.hi
        )
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ContradictionReport {}

/// A fact intersected an interval to the empty set before any propagation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImmediateContradiction {
    pub kind: InvariantKind,
    pub existing: Interval,
    pub asserted: Interval,
}

impl fmt::Display for ImmediateContradiction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "fact {} {} conflicts with already known {}",
            self.kind, self.asserted, self.existing
        )
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ImmediateContradiction {}

/// Intervals, flags and the configuration switch for one object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnowledgeBase {
    intervals: [Interval; 10],
    flags: BTreeSet<Flag>,
    configuration: Configuration,
}

impl Default for KnowledgeBase {
    fn default() -> Self {
        KnowledgeBase::new()
    }
}

impl KnowledgeBase {
    /// A fresh base: every invariant in `[0, inf)`, no flags, ideal
    /// configuration.
    pub fn new() -> Self {
        KnowledgeBase {
            intervals: [Interval::FULL; 10],
            flags: BTreeSet::new(),
            configuration: Configuration::IdealInAffineRing,
        }
    }

    pub fn with_configuration(mut self, configuration: Configuration) -> Self {
        self.configuration = configuration;
        self
    }

    pub fn with_flag(mut self, flag: Flag) -> Self {
        self.flags.insert(flag);
        self
    }

    pub fn configuration(&self) -> Configuration {
        self.configuration
    }

    pub fn flags(&self) -> impl Iterator<Item = Flag> + '_ {
        self.flags.iter().copied()
    }

    pub fn has_flag(&self, flag: Flag) -> bool {
        self.flags.contains(&flag)
    }

    /// The current interval of an invariant (no propagation implied).
    pub fn query(&self, kind: InvariantKind) -> Interval {
        self.intervals[kind.index()]
    }

    /// Intersects one invariant's interval with a relation; no propagation.
    pub fn assert_fact(
        &self,
        kind: InvariantKind,
        relation: Relation,
        value: u64,
    ) -> Result<KnowledgeBase, ImmediateContradiction> {
        let asserted = match relation {
            Relation::Eq => Interval::exactly(value),
            Relation::Le => Interval::at_most(value),
            Relation::Ge => Interval::at_least(value),
        };
        let existing = self.query(kind);
        let merged = existing.intersect(&asserted);
        if merged.is_empty() {
            return Err(ImmediateContradiction {
                kind,
                existing,
                asserted,
            });
        }
        let mut next = self.clone();
        next.intervals[kind.index()] = merged;
        Ok(next)
    }

    /// Narrows every interval to the least fixpoint of the rule set.
    pub fn propagate(&self) -> Result<Propagation, ContradictionReport> {
        self.propagate_with_order(&RuleId::UNARY)
    }

    /// Propagation with an explicit rule application order. The fixpoint
    /// does not depend on the order; this entry point exists so tests can
    /// verify exactly that.
    pub fn propagate_with_order(
        &self,
        order: &[RuleId],
    ) -> Result<Propagation, ContradictionReport> {
        let mut engine = Engine {
            kb: self.clone(),
            trace: Vec::new(),
        };
        let mut rounds = 0usize;
        loop {
            let mut changed = false;
            for &rule in order {
                changed |= engine.apply(rule)?;
            }
            if !changed {
                break;
            }
            rounds += 1;
            assert!(rounds < 10_000, "propagation failed to reach a fixpoint");
        }
        Ok(Propagation {
            kb: engine.kb,
            trace: engine.trace,
        })
    }
}

/// Result of a successful propagation: the narrowed base plus the ordered
/// list of narrowing steps that led to the fixpoint.
#[derive(Clone, Debug)]
pub struct Propagation {
    pub kb: KnowledgeBase,
    pub trace: Vec<TraceStep>,
}

impl Propagation {
    /// The ordered narrowing steps (rule, statement, interval change).
    pub fn explain(&self) -> &[TraceStep] {
        &self.trace
    }
}

struct Engine {
    kb: KnowledgeBase,
    trace: Vec<TraceStep>,
}

impl Engine {
    fn narrow(
        &mut self,
        rule: RuleId,
        kind: InvariantKind,
        candidate: Interval,
    ) -> Result<bool, ContradictionReport> {
        let before = self.kb.query(kind);
        let after = before.intersect(&candidate);
        if after == before {
            return Ok(false);
        }
        self.trace.push(TraceStep {
            rule,
            statement: rule.statement(),
            kind,
            before,
            after,
        });
        if after.is_empty() {
            return Err(ContradictionReport {
                rule,
                statement: rule.statement(),
                kind,
                lo: after.lo(),
                hi: after.hi().expect("empty interval has an upper bound"),
                trace: self.trace.clone(),
            });
        }
        self.kb.intervals[kind.index()] = after;
        Ok(true)
    }

    // a <= b
    fn le(
        &mut self,
        rule: RuleId,
        a: InvariantKind,
        b: InvariantKind,
    ) -> Result<bool, ContradictionReport> {
        let mut changed = false;
        if let Some(hi) = self.kb.query(b).hi() {
            changed |= self.narrow(rule, a, Interval::at_most(hi))?;
        }
        let lo = self.kb.query(a).lo();
        changed |= self.narrow(rule, b, Interval::at_least(lo))?;
        Ok(changed)
    }

    fn chain(
        &mut self,
        rule: RuleId,
        kinds: &[InvariantKind],
    ) -> Result<bool, ContradictionReport> {
        let mut changed = false;
        for pair in kinds.windows(2) {
            changed |= self.le(rule, pair[0], pair[1])?;
        }
        Ok(changed)
    }

    // a = b
    fn equal(
        &mut self,
        rule: RuleId,
        a: InvariantKind,
        b: InvariantKind,
    ) -> Result<bool, ContradictionReport> {
        let mut changed = false;
        let ib = self.kb.query(b);
        changed |= self.narrow(rule, a, ib)?;
        let ia = self.kb.query(a);
        changed |= self.narrow(rule, b, ia)?;
        Ok(changed)
    }

    // a = b + 1; first forces a >= 1, then shifts in both directions
    fn equal_shifted(
        &mut self,
        rule: RuleId,
        a: InvariantKind,
        b: InvariantKind,
    ) -> Result<bool, ContradictionReport> {
        let mut changed = self.narrow(rule, a, Interval::at_least(1))?;
        let ib = self.kb.query(b);
        changed |= self.narrow(rule, a, ib.up1())?;
        let ia = self.kb.query(a);
        changed |= self.narrow(rule, b, ia.down1())?;
        Ok(changed)
    }

    fn apply(&mut self, rule: RuleId) -> Result<bool, ContradictionReport> {
        use Configuration::*;
        use InvariantKind::*;
        let config = self.kb.configuration;
        let flag = |f: Flag| self.kb.flags.contains(&f);
        match rule {
            RuleId::R1 if config == IdealInAffineRing => {
                self.chain(rule, &[Ht, Alt, SuphtEnd, Supht, Ara])
            }
            RuleId::R2 if config == IdealInAffineRing => self.le(rule, Supht, Dim),
            RuleId::R3 => {
                let mut changed = self.chain(rule, &[Supht, Kohoht, Afra])?;
                if config == IdealInAffineRing {
                    changed |= self.le(rule, Afra, Ara)?;
                }
                Ok(changed)
            }
            RuleId::R4 => self.equal_shifted(rule, Kohoht, Cd),
            RuleId::R5 => {
                let mut changed = self.le(rule, Cd, Dim)?;
                if config == IdealInAffineRing {
                    // strict bound; degenerate zero-dimensional rings are
                    // excluded (there the open set is affine or empty)
                    let dim = self.kb.query(Dim);
                    let cd = self.kb.query(Cd);
                    if dim.lo() >= 1 || cd.lo() >= 1 {
                        changed |= self.narrow(rule, Dim, cd.up1())?;
                        let dim = self.kb.query(Dim);
                        changed |= self.narrow(rule, Cd, dim.down1())?;
                    }
                }
                Ok(changed)
            }
            RuleId::R6
                if config == IdealInAffineRing
                    && flag(Flag::RingLocal)
                    && flag(Flag::IdealMaximal) =>
            {
                let kinds = [Ht, Alt, SuphtEnd, Supht, Ara, Afra, Kohoht, Dim];
                let mut common = Interval::FULL;
                for k in kinds {
                    common = common.intersect(&self.kb.query(k));
                }
                let mut changed = false;
                for k in kinds {
                    changed |= self.narrow(rule, k, common)?;
                }
                Ok(changed)
            }
            RuleId::R7 if config == IdealInAffineRing && flag(Flag::RingRegular) => {
                self.equal(rule, Alt, Supht)
            }
            RuleId::R8 if config == IdealInAffineRing && flag(Flag::FiniteTypeOverField) => {
                self.equal(rule, SuphtEnd, Supht)
            }
            RuleId::R9 if config == IdealInAffineRing && flag(Flag::FinitePd) => {
                self.le(rule, Supht, PdHeight)
            }
            RuleId::R10
                if config == IdealInAffineRing && flag(Flag::FinitePd) && flag(Flag::CharP) =>
            {
                self.le(rule, Kohoht, PdHeight)
            }
            RuleId::R11 if flag(Flag::OpenSetAffine) => self.narrow(rule, Cd, Interval::exactly(0)),
            RuleId::R12 if config == IdealInAffineRing && flag(Flag::PuncturedLocal) => {
                self.equal_shifted(rule, Dim, Cd)
            }
            RuleId::R13 if config == IdealInAffineRing && flag(Flag::NormalDomain) => {
                let alt = self.kb.query(Alt);
                let dim = self.kb.query(Dim);
                // the premise "alt < dim" must be certain before concluding
                match (alt.hi(), dim.hi()) {
                    (Some(alt_hi), Some(dim_hi)) if alt_hi < dim.lo() => {
                        self.narrow(rule, SuphtEnd, Interval::at_most(dim_hi - 1))
                    }
                    _ => Ok(false),
                }
            }
            RuleId::R14 if config == GeneralScheme => {
                let mut changed = false;
                if let Some(dim_hi) = self.kb.query(Dim).hi() {
                    changed |=
                        self.narrow(rule, Supht, Interval::at_most(dim_hi.saturating_add(1)))?;
                }
                let supht_lo = self.kb.query(Supht).lo();
                changed |=
                    self.narrow(rule, Dim, Interval::at_least(supht_lo.saturating_sub(1)))?;
                Ok(changed)
            }
            _ => Ok(false),
        }
    }
}

/// Applies the two cross-object additivity bounds to `whole`, given
/// propagated knowledge about an open subset and its closed complement,
/// then re-propagates `whole`.
///
/// These bounds relate three different objects, so they live outside the
/// unary fixpoint on purpose.
pub fn decomposition_bound(
    whole: &KnowledgeBase,
    open_part: &KnowledgeBase,
    closed_part: &KnowledgeBase,
) -> Result<Propagation, ContradictionReport> {
    let mut engine = Engine {
        kb: whole.clone(),
        trace: Vec::new(),
    };
    if let (Some(a), Some(b)) = (
        open_part.query(InvariantKind::Supht).hi(),
        closed_part.query(InvariantKind::Supht).hi(),
    ) {
        engine.narrow(RuleId::C1, InvariantKind::Supht, Interval::at_most(a + b))?;
    }
    if let (Some(a), Some(b)) = (
        open_part.query(InvariantKind::Kohoht).hi(),
        closed_part.query(InvariantKind::Kohoht).hi(),
    ) {
        engine.narrow(RuleId::C2, InvariantKind::Kohoht, Interval::at_most(a + b))?;
    }
    let followup = engine.kb.propagate()?;
    let mut trace = engine.trace;
    trace.extend(followup.trace);
    Ok(Propagation {
        kb: followup.kb,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use InvariantKind::*;

    fn fact(kb: KnowledgeBase, kind: InvariantKind, rel: Relation, v: u64) -> KnowledgeBase {
        kb.assert_fact(kind, rel, v).unwrap()
    }

    #[test]
    fn fresh_base_is_unbounded() {
        let kb = KnowledgeBase::new();
        for kind in InvariantKind::ALL {
            assert_eq!(kb.query(kind), Interval::FULL);
        }
        // kohoht = cd + 1 >= 1 always, which lifts the covering chain
        let p = kb.propagate().unwrap();
        for kind in [Kohoht, Afra, Ara] {
            assert_eq!(p.kb.query(kind), Interval::at_least(1), "{}", kind);
        }
        for kind in [Ht, Alt, SuphtEnd, Supht, Cd, PdHeight, Dim] {
            assert_eq!(p.kb.query(kind), Interval::FULL, "{}", kind);
        }
    }

    #[test]
    fn immediate_contradiction_on_conflicting_facts() {
        let kb = fact(KnowledgeBase::new(), Supht, Relation::Eq, 2);
        let err = kb.assert_fact(Supht, Relation::Ge, 3).unwrap_err();
        assert_eq!(err.kind, Supht);
        assert_eq!(err.existing, Interval::exactly(2));
    }

    #[test]
    fn le_fact_sets_upper_bound() {
        let kb = fact(KnowledgeBase::new(), Ara, Relation::Le, 3);
        assert_eq!(kb.query(Ara), Interval::at_most(3));
    }

    #[test]
    fn local_maximal_ideal_pins_everything() {
        let kb = fact(
            KnowledgeBase::new()
                .with_flag(Flag::RingLocal)
                .with_flag(Flag::IdealMaximal),
            Dim,
            Relation::Eq,
            3,
        );
        let p = kb.propagate().unwrap();
        for kind in [Ht, Alt, SuphtEnd, Supht, Ara, Afra, Kohoht, Dim] {
            assert_eq!(p.kb.query(kind), Interval::exactly(3), "{}", kind);
        }
        assert_eq!(p.kb.query(Cd), Interval::exactly(2));
        assert!(p.explain().iter().any(|s| s.rule == RuleId::R6));
    }

    #[test]
    fn mixed_point_example_forces_afra() {
        // ht = 2, supht = 2, kohoht = 3, ara = 3: consistent, and the
        // affine covering number is squeezed to exactly 3.
        let mut kb = KnowledgeBase::new();
        for (kind, v) in [(Ht, 2), (Supht, 2), (Kohoht, 3), (Ara, 3)] {
            kb = fact(kb, kind, Relation::Eq, v);
        }
        let p = kb.propagate().unwrap();
        assert_eq!(p.kb.query(Afra), Interval::exactly(3));
        assert_eq!(p.kb.query(Alt), Interval::exactly(2));
        assert_eq!(p.kb.query(SuphtEnd), Interval::exactly(2));
        assert_eq!(p.kb.query(Cd), Interval::exactly(2));
        assert_eq!(p.kb.query(Dim).lo(), 3, "cd = 2 needs dimension at least 3");
    }

    #[test]
    fn superheight_above_dimension_contradicts() {
        let kb = fact(
            fact(KnowledgeBase::new(), Supht, Relation::Eq, 3),
            Dim,
            Relation::Eq,
            2,
        );
        let err = kb.propagate().unwrap_err();
        assert_eq!(err.rule, RuleId::R2);
        assert_eq!(err.trace.last().unwrap().rule, RuleId::R2);
    }

    #[test]
    fn regular_and_finite_type_equalities() {
        let kb = fact(
            KnowledgeBase::new().with_flag(Flag::RingRegular),
            Alt,
            Relation::Eq,
            2,
        );
        let p = kb.propagate().unwrap();
        assert_eq!(p.kb.query(Supht), Interval::exactly(2));

        let kb = fact(
            KnowledgeBase::new().with_flag(Flag::FiniteTypeOverField),
            Supht,
            Relation::Eq,
            4,
        );
        let p = kb.propagate().unwrap();
        assert_eq!(p.kb.query(SuphtEnd), Interval::exactly(4));
    }

    #[test]
    fn projective_height_bounds() {
        let kb = fact(
            KnowledgeBase::new().with_flag(Flag::FinitePd),
            Supht,
            Relation::Ge,
            3,
        );
        let p = kb.propagate().unwrap();
        assert_eq!(p.kb.query(PdHeight).lo(), 3);

        // rank-one matrix ring over the complex numbers: pd_height 2 but
        // kohoht 3 is consistent without characteristic p
        let mut kb = KnowledgeBase::new().with_flag(Flag::FinitePd);
        for (kind, v) in [(Ht, 2), (Supht, 2), (PdHeight, 2), (Kohoht, 3), (Ara, 3)] {
            kb = fact(kb, kind, Relation::Eq, v);
        }
        assert!(kb.propagate().is_ok());

        // in characteristic p the same data violates the frobenius bound
        let err = kb.with_flag(Flag::CharP).propagate().unwrap_err();
        assert_eq!(err.rule, RuleId::R10);
    }

    #[test]
    fn affine_open_set_and_punctured_spectrum() {
        let kb = KnowledgeBase::new().with_flag(Flag::OpenSetAffine);
        let p = kb.propagate().unwrap();
        assert_eq!(p.kb.query(Cd), Interval::exactly(0));
        assert_eq!(p.kb.query(Kohoht), Interval::exactly(1));

        let kb = fact(
            KnowledgeBase::new().with_flag(Flag::PuncturedLocal),
            Dim,
            Relation::Eq,
            4,
        );
        let p = kb.propagate().unwrap();
        assert_eq!(p.kb.query(Cd), Interval::exactly(3));
    }

    #[test]
    fn normal_domain_bounds_finite_superheight() {
        let kb = fact(
            fact(
                KnowledgeBase::new().with_flag(Flag::NormalDomain),
                Dim,
                Relation::Eq,
                3,
            ),
            Alt,
            Relation::Le,
            2,
        );
        let p = kb.propagate().unwrap();
        assert_eq!(p.kb.query(SuphtEnd).hi(), Some(2));
        // without certainty about alt < dim the rule stays quiet and only
        // the plain chain bound supht_end <= supht <= dim remains
        let kb = fact(
            KnowledgeBase::new().with_flag(Flag::NormalDomain),
            Dim,
            Relation::Eq,
            3,
        );
        let p = kb.propagate().unwrap();
        assert_eq!(p.kb.query(SuphtEnd).hi(), Some(3));
    }

    #[test]
    fn scheme_configuration_uses_the_shifted_bound() {
        let kb = fact(
            KnowledgeBase::new().with_configuration(Configuration::GeneralScheme),
            Dim,
            Relation::Eq,
            2,
        );
        let p = kb.propagate().unwrap();
        // a projective surface reaches superheight 3 = dim + 1
        assert_eq!(p.kb.query(Supht).hi(), Some(3));
        assert_eq!(p.kb.query(Cd).hi(), Some(2), "scheme bound is not strict");

        // supht = dim + 1 is consistent for schemes but not for ideals
        let scheme = fact(kb, Supht, Relation::Eq, 3);
        assert!(scheme.propagate().is_ok());
        let ideal = fact(
            fact(KnowledgeBase::new(), Dim, Relation::Eq, 2),
            Supht,
            Relation::Eq,
            3,
        );
        assert!(ideal.propagate().is_err());
    }

    // Superheight of a single prime in the rank-one matrix ring: value m
    // (or n) against ring dimension m + n - 1 is always consistent.
    #[test]
    fn rank_one_matrix_superheights_are_consistent() {
        for m in 2..=4u64 {
            for n in 2..=4u64 {
                for supht in [m, n] {
                    let kb = fact(
                        fact(KnowledgeBase::new(), Supht, Relation::Eq, supht),
                        Dim,
                        Relation::Eq,
                        m + n - 1,
                    );
                    let propagated = kb.propagate();
                    assert!(
                        propagated.is_ok(),
                        "m = {}, n = {}, supht = {}",
                        m,
                        n,
                        supht
                    );
                }
            }
        }
    }

    #[test]
    fn propagation_is_idempotent_and_order_independent() {
        let mut kb = KnowledgeBase::new().with_flag(Flag::FiniteTypeOverField);
        for (kind, v) in [(Ht, 1), (Kohoht, 3), (Ara, 4)] {
            kb = fact(kb, kind, Relation::Eq, v);
        }
        let p = kb.propagate().unwrap();
        let again = p.kb.propagate().unwrap();
        assert_eq!(p.kb, again.kb);
        assert!(again.explain().is_empty());

        let mut reversed = RuleId::UNARY;
        reversed.reverse();
        let q = kb.propagate_with_order(&reversed).unwrap();
        assert_eq!(p.kb, q.kb);
    }

    #[test]
    fn decomposition_bound_narrows_the_whole() {
        let whole = KnowledgeBase::new().with_configuration(Configuration::GeneralScheme);
        let open_part = fact(
            KnowledgeBase::new().with_configuration(Configuration::GeneralScheme),
            Supht,
            Relation::Le,
            1,
        );
        let closed_part = fact(
            KnowledgeBase::new().with_configuration(Configuration::GeneralScheme),
            Supht,
            Relation::Le,
            2,
        );
        let open_part = open_part.assert_fact(Kohoht, Relation::Le, 2).unwrap();
        let closed_part = closed_part.assert_fact(Kohoht, Relation::Le, 2).unwrap();
        let p = decomposition_bound(&whole, &open_part, &closed_part).unwrap();
        assert_eq!(p.kb.query(Supht).hi(), Some(3));
        assert_eq!(p.kb.query(Kohoht).hi(), Some(4));
        assert!(p.trace.iter().any(|s| s.rule == RuleId::C1));
    }
}
