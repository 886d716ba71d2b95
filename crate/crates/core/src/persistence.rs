//! Persistence deciders.
//!
//! A transition `b` enabled at `M` may be *disabled* by another step `a`
//! (it is no longer enabled after `a`), *killed* by it (it can never fire
//! again), or *postponed* by it for `k` steps (it needs a word of length `k`
//! after `a` before it can fire). The four net classes are
//!
//! * **e/e**: no step disables another enabled transition,
//! * **l/l**: no step kills another live transition,
//! * **e/l**: no step kills another enabled transition,
//! * **e/l-k**: every enabled transition disabled by a step can fire again
//!   after at most `k` further steps.
//!
//! Pair and net deciders only inspect the minimal reachable markings at which
//! the relevant transitions are enabled. Disabling, killing and postponing are
//! all inherited downwards by monotonicity, so a violation at any reachable
//! marking shows up at a minimal one below it.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::net::{FiringWord, Marking, Net, TransitionId};
use crate::omega::{ConvexSet, UpSet};
use crate::oracle::{Computed, ReachOracle, Unknown, Verdict};
use crate::statespace::{is_coverable, is_live_from, occurs_within, shallowest_occurrence};
use crate::valk_jantzen::{compute_min, res_eakb, res_live, res_re, ReachableAbove};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PersistenceKind {
    EE,
    LL,
    EL,
    ELK(u32),
}

impl PersistenceKind {
    /// Parses `ee`, `ll`, `el` or `el-k`; the latter takes its bound from `k`.
    pub fn from_property(name: &str, k: Option<u32>) -> Result<Self> {
        match (name, k) {
            ("ee", _) => Ok(PersistenceKind::EE),
            ("ll", _) => Ok(PersistenceKind::LL),
            ("el", _) => Ok(PersistenceKind::EL),
            ("el-k", Some(k)) => Ok(PersistenceKind::ELK(k)),
            ("el-k", None) => Err(Error::InvalidArgument("property el-k needs a bound k".into())),
            _ => Err(Error::InvalidArgument(format!("unknown property `{name}`"))),
        }
    }
}

impl fmt::Display for PersistenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PersistenceKind::EE => f.write_str("e/e"),
            PersistenceKind::LL => f.write_str("l/l"),
            PersistenceKind::EL => f.write_str("e/l"),
            PersistenceKind::ELK(k) => write!(f, "e/l-{k}"),
        }
    }
}

/// A reachable marking at which `a` harms `b`, with a word reaching it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PairWitness {
    pub a: TransitionId,
    pub b: TransitionId,
    pub marking: Marking,
    pub word: FiringWord,
}

/// The minimum marking enabling `a` and `b` together.
pub fn min_enabling(net: &Net, a: TransitionId, b: TransitionId) -> Result<Marking> {
    net.require_distinct(a, b)?;
    Ok(net
        .pre(a)
        .iter()
        .zip(net.pre(b).iter())
        .map(|(&x, &y)| x.max(y))
        .collect::<Vec<_>>()
        .into())
}

/// Whether some reachable marking enables both `a` and `b`.
pub fn mutually_enabled_reachable(net: &Net, a: TransitionId, b: TransitionId) -> Result<bool> {
    let target = min_enabling(net, a, b)?;
    is_coverable(net, net.initial(), &target)
}

/// Same as [`mutually_enabled_reachable`], reusing the oracle's coverability graph.
/// `None` when the graph could not be built within its cap.
fn co_enabled(oracle: &ReachOracle<'_>, a: TransitionId, b: TransitionId) -> Result<Option<bool>> {
    let target = min_enabling(oracle.net(), a, b)?;
    Ok(oracle.coverability().map(|g| g.covers(&target)))
}

/// `Min(RE_{a,b})`, the minimal reachable markings enabling both `a` and `b`.
pub fn min_re(oracle: &ReachOracle<'_>, a: TransitionId, b: TransitionId) -> Result<Computed<Vec<Marking>>> {
    if co_enabled(oracle, a, b)? == Some(false) {
        return Ok(Computed::Done(Vec::new()));
    }
    compute_min(&res_re(oracle, a, b)?)
}

fn witness(oracle: &ReachOracle<'_>, a: TransitionId, b: TransitionId, m: &Marking) -> Result<PairWitness> {
    let word = match oracle.marking_reachable(m)? {
        Verdict::Holds(w) => w.word,
        _ => return Err(Error::OracleContract(format!("minimal element {m} is not reachable"))),
    };
    Ok(PairWitness {
        a,
        b,
        marking: m.clone(),
        word,
    })
}

/// Transitions `b ≠ a` enabled at `m` that cannot fire within `k` steps after `a`.
pub fn elk_step_blocked(net: &Net, m: &Marking, a: TransitionId, k: u32) -> Result<Vec<TransitionId>> {
    let after = net.fire(m, a)?.to_omega();
    let mut out = Vec::new();
    for b in net.transition_ids() {
        if b != a && net.enabled_raw(m, b) && !occurs_within(net, &after, b, k as usize + 1)? {
            out.push(b);
        }
    }
    Ok(out)
}

/// Whether the step `m a` pushes every other enabled transition back by at most `k` steps.
/// Accepts inhibitor nets.
pub fn elk_step(net: &Net, m: &Marking, a: TransitionId, k: u32) -> Result<bool> {
    Ok(elk_step_blocked(net, m, a, k)?.is_empty())
}

/// Whether every step enabled at `m` is e/l-k-persistent.
pub fn elk_marking(net: &Net, m: &Marking, k: u32) -> Result<bool> {
    Ok(marking_violation(net, PersistenceKind::ELK(k), m)?.is_none())
}

/// Transitions `b ≠ a` harmed by the step `m a` in the sense of `kind`.
///
/// For `EL` and `LL` liveness is decided on the coverability graph, so the net
/// must be pure.
pub fn step_violations(net: &Net, kind: PersistenceKind, m: &Marking, a: TransitionId) -> Result<Vec<TransitionId>> {
    if let PersistenceKind::ELK(k) = kind {
        return elk_step_blocked(net, m, a, k);
    }
    let after = net.fire(m, a)?;
    let mut out = Vec::new();
    for b in net.transition_ids().filter(|&b| b != a) {
        let harmed = match kind {
            PersistenceKind::EE => net.enabled_raw(m, b) && !net.enabled_raw(&after, b),
            PersistenceKind::EL => net.enabled_raw(m, b) && !is_live_from(net, &after, b)?,
            PersistenceKind::LL => is_live_from(net, m, b)? && !is_live_from(net, &after, b)?,
            PersistenceKind::ELK(_) => unreachable!(),
        };
        if harmed {
            out.push(b);
        }
    }
    Ok(out)
}

/// First `(a, b)` in declaration order such that the step `m a` harms `b`.
pub fn marking_violation(
    net: &Net,
    kind: PersistenceKind,
    m: &Marking,
) -> Result<Option<(TransitionId, TransitionId)>> {
    net.check_marking(m)?;
    for a in net.transition_ids() {
        if net.enabled_raw(m, a) {
            if let Some(&b) = step_violations(net, kind, m, a)?.first() {
                return Ok(Some((a, b)));
            }
        }
    }
    Ok(None)
}

/// Does `a` postpone `b` for more than `k` steps at some reachable marking?
/// `Holds` carries a minimal such marking.
pub fn elk_transition_violation(
    oracle: &ReachOracle<'_>,
    a: TransitionId,
    b: TransitionId,
    k: u32,
) -> Result<Verdict<PairWitness, ()>> {
    let net = oracle.net();
    let min = match min_re(oracle, a, b)? {
        Computed::Done(min) => min,
        Computed::Unknown(u) => return Ok(Verdict::Unknown(u)),
    };
    for m in &min {
        let after = net.fire_raw(m, a).to_omega();
        if !occurs_within(net, &after, b, k as usize + 1)? {
            return Ok(Verdict::Holds(witness(oracle, a, b, m)?));
        }
    }
    Ok(Verdict::Violated(()))
}

/// Does `a` disable, kill, or postpone `b` (per `kind`) at some reachable marking?
pub fn classic_violation(
    oracle: &ReachOracle<'_>,
    kind: PersistenceKind,
    a: TransitionId,
    b: TransitionId,
) -> Result<Verdict<PairWitness, ()>> {
    let net = oracle.net();
    let min = match kind {
        PersistenceKind::ELK(k) => return elk_transition_violation(oracle, a, b, k),
        PersistenceKind::EE | PersistenceKind::EL => min_re(oracle, a, b)?,
        PersistenceKind::LL => min_live_enabling(oracle, a, b)?,
    };
    let min = match min {
        Computed::Done(min) => min,
        Computed::Unknown(u) => return Ok(Verdict::Unknown(u)),
    };
    for m in &min {
        let after = net.fire_raw(m, a);
        let harmed = match kind {
            PersistenceKind::EE => !net.enabled_raw(&after, b),
            _ => !is_live_from(net, &after, b)?,
        };
        if harmed {
            return Ok(Verdict::Holds(witness(oracle, a, b, m)?));
        }
    }
    Ok(Verdict::Violated(()))
}

/// `Min(R ∩ E_a ∩ Live_b)`: minimal reachable markings enabling `a` at which `b` is live.
pub fn min_live_enabling(oracle: &ReachOracle<'_>, a: TransitionId, b: TransitionId) -> Result<Computed<Vec<Marking>>> {
    let net = oracle.net();
    net.require_distinct(a, b)?;
    let live = match compute_min(&res_live(net, b)?)? {
        Computed::Done(live) => live,
        Computed::Unknown(u) => return Ok(Computed::Unknown(u)),
    };
    let lower = UpSet::principal(net.pre(a).clone()).intersect(&UpSet::new(net.place_count(), live)?)?;
    if lower.is_empty() {
        return Ok(Computed::Done(Vec::new()));
    }
    compute_min(&ReachableAbove::new(oracle, lower)?)
}

/// Folds pair verdicts in lexicographic pair order; the first violation wins.
fn over_pairs(
    oracle: &ReachOracle<'_>,
    mut pair: impl FnMut(TransitionId, TransitionId) -> Result<Verdict<PairWitness, ()>>,
) -> Result<Verdict<(), PairWitness>> {
    let net = oracle.net();
    let mut unknown: Option<Unknown> = None;
    for a in net.transition_ids() {
        for b in net.transition_ids().filter(|&b| b != a) {
            match pair(a, b)? {
                Verdict::Holds(w) => return Ok(Verdict::Violated(w)),
                Verdict::Violated(()) => {}
                Verdict::Unknown(u) => {
                    unknown.get_or_insert(u);
                }
            }
        }
    }
    Ok(match unknown {
        Some(u) => Verdict::Unknown(u),
        None => Verdict::Holds(()),
    })
}

/// Is the net e/l-k-persistent?
pub fn elk_net(oracle: &ReachOracle<'_>, k: u32) -> Result<Verdict<(), PairWitness>> {
    over_pairs(oracle, |a, b| elk_transition_violation(oracle, a, b, k))
}

/// Same decision as [`elk_net`], via reachability of `E_a ∩ E_b ∖ E_{a(k)b}`.
pub fn elk_net_alt(oracle: &ReachOracle<'_>, k: u32) -> Result<Verdict<(), PairWitness>> {
    let net = oracle.net();
    over_pairs(oracle, |a, b| {
        let eakb = match compute_min(&res_eakb(net, a, b, k as usize)?)? {
            Computed::Done(g) => UpSet::new(net.place_count(), g)?,
            Computed::Unknown(u) => return Ok(Verdict::Unknown(u)),
        };
        let bad = ConvexSet::new(UpSet::principal(min_enabling(net, a, b)?), eakb.complement())?;
        Ok(match oracle.set_reachable(&bad)? {
            Verdict::Holds(w) => Verdict::Holds(PairWitness {
                a,
                b,
                marking: w.marking,
                word: w.word,
            }),
            Verdict::Violated(_) => Verdict::Violated(()),
            Verdict::Unknown(u) => Verdict::Unknown(u),
        })
    })
}

/// Is the net persistent in the sense of `kind`?
pub fn classic_net(oracle: &ReachOracle<'_>, kind: PersistenceKind) -> Result<Verdict<(), PairWitness>> {
    over_pairs(oracle, |a, b| classic_violation(oracle, kind, a, b))
}

/// Can `t` fire after some word of length at most `k`?
pub fn k_enabled(net: &Net, m: &Marking, t: TransitionId, k: u32) -> Result<bool> {
    net.check_marking(m)?;
    occurs_within(net, &m.to_omega(), t, k as usize + 1)
}

/// Least postponement bound of a pair, when one exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PairBound {
    /// `a` and `b` are never enabled together.
    NeverCoEnabled,
    /// `a` kills `b` at the witnessed marking.
    Kills(PairWitness),
    /// Every co-enabling marking re-enables `b` within `k` steps after `a`;
    /// `slowest` attains the bound.
    Bound { k: u32, slowest: PairWitness },
}

impl PairBound {
    pub fn k(&self) -> Option<u32> {
        match self {
            PairBound::Bound { k, .. } => Some(*k),
            _ => None,
        }
    }
}

/// Computes `k_{a,b}`.
pub fn k_ab(oracle: &ReachOracle<'_>, a: TransitionId, b: TransitionId) -> Result<Computed<PairBound>> {
    let net = oracle.net();
    let min = match min_re(oracle, a, b)? {
        Computed::Done(min) => min,
        Computed::Unknown(u) => return Ok(Computed::Unknown(u)),
    };
    if min.is_empty() {
        return Ok(Computed::Done(PairBound::NeverCoEnabled));
    }
    let cap = match oracle.coverability() {
        Some(g) => 2 * g.vertices().len() * net.transition_count().max(1),
        None => oracle.config().state_budget,
    };
    let mut best: Option<(u32, &Marking)> = None;
    for m in &min {
        let after = net.fire_raw(m, a);
        if !is_live_from(net, &after, b)? {
            return Ok(Computed::Done(PairBound::Kills(witness(oracle, a, b, m)?)));
        }
        let depth = shallowest_occurrence(net, &after.to_omega(), b, cap)?.ok_or(Error::IterationCap {
            what: "growing the tree after a until b fires",
            cap,
        })?;
        let k = depth as u32 - 1;
        if best.is_none_or(|(bk, _)| k > bk) {
            best = Some((k, m));
        }
    }
    let (k, m) = best.expect("min is not empty");
    Ok(Computed::Done(PairBound::Bound {
        k,
        slowest: witness(oracle, a, b, m)?,
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairReport {
    pub a: TransitionId,
    pub b: TransitionId,
    /// `None` when the bound could not be computed within budget.
    pub bound: Option<PairBound>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    /// Some transition kills another enabled one.
    NotEl(PairWitness),
    /// e/l-k-persistent for this least `k`.
    Elk(u32),
    Unknown(Unknown),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifyReport {
    pub classification: Classification,
    pub pairs: Vec<PairReport>,
}

/// Least `k` such that the net is e/l-k-persistent, or the pair that prevents one.
pub fn classify(oracle: &ReachOracle<'_>) -> Result<ClassifyReport> {
    let net = oracle.net();
    let mut pairs = Vec::new();
    let mut unknown: Option<Unknown> = None;
    let mut k = 0;
    for a in net.transition_ids() {
        for b in net.transition_ids().filter(|&b| b != a) {
            match k_ab(oracle, a, b)? {
                Computed::Unknown(u) => {
                    unknown.get_or_insert(u);
                    pairs.push(PairReport { a, b, bound: None });
                }
                Computed::Done(bound) => {
                    if let PairBound::Kills(w) = &bound {
                        let w = w.clone();
                        pairs.push(PairReport {
                            a,
                            b,
                            bound: Some(bound),
                        });
                        return Ok(ClassifyReport {
                            classification: Classification::NotEl(w),
                            pairs,
                        });
                    }
                    k = k.max(bound.k().unwrap_or(0));
                    pairs.push(PairReport {
                        a,
                        b,
                        bound: Some(bound),
                    });
                }
            }
        }
    }
    let classification = match unknown {
        Some(u) => Classification::Unknown(u),
        None => Classification::Elk(k),
    };
    Ok(ClassifyReport { classification, pairs })
}
