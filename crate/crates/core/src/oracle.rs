//! Three-valued reachability oracle.
//!
//! Queries are answered in three stages: a coverability refutation on the
//! lower generators of the query set, an interval check against the place
//! invariants of the net, and finally a breadth-first enumeration of the
//! reachable markings bounded by [`OracleConfig::state_budget`]. The first two
//! stages can only refute. The enumeration is computed once per oracle and
//! shared by every query, so witnesses are always shortest words.

use std::cell::{Cell, OnceCell};

use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::net::{FiringWord, Marking, Net};
use crate::omega::{ConvexSet, OmegaNat};
use crate::statespace::{build_coverability_graph_from, CoverabilityGraph, Exploration, DEFAULT_COVERABILITY_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OracleConfig {
    /// Maximum number of distinct markings stored by the enumeration.
    pub state_budget: usize,
    /// Turn `Unknown` answers into [`Error::Inexact`].
    pub require_exact: bool,
    /// Use place invariants to refute unreachable sets before enumerating.
    pub place_invariants: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            state_budget: 1_000_000,
            require_exact: false,
            place_invariants: true,
        }
    }
}

impl OracleConfig {
    pub fn with_budget(state_budget: usize) -> Self {
        OracleConfig {
            state_budget,
            ..Default::default()
        }
    }
}

/// Why an analysis gave up.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Unknown {
    pub reason: String,
    pub states_explored: usize,
}

/// Outcome of a yes/no analysis, carrying evidence for either answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<H, V> {
    Holds(H),
    Violated(V),
    Unknown(Unknown),
}

impl<H, V> Verdict<H, V> {
    pub fn is_holds(&self) -> bool {
        matches!(self, Verdict::Holds(_))
    }

    pub fn is_violated(&self) -> bool {
        matches!(self, Verdict::Violated(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown(_))
    }

    /// `"holds"`, `"violated"` or `"unknown"`.
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Holds(_) => "holds",
            Verdict::Violated(_) => "violated",
            Verdict::Unknown(_) => "unknown",
        }
    }

    /// Drops the evidence.
    pub fn outcome(&self) -> Verdict<(), ()> {
        match self {
            Verdict::Holds(_) => Verdict::Holds(()),
            Verdict::Violated(_) => Verdict::Violated(()),
            Verdict::Unknown(u) => Verdict::Unknown(u.clone()),
        }
    }
}

/// Result of a computation that may run out of budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Computed<T> {
    Done(T),
    Unknown(Unknown),
}

impl<T> Computed<T> {
    pub fn done(self) -> Option<T> {
        match self {
            Computed::Done(t) => Some(t),
            Computed::Unknown(_) => None,
        }
    }

    pub fn is_done(&self) -> bool {
        matches!(self, Computed::Done(_))
    }

    pub fn unwrap(self) -> T {
        match self {
            Computed::Done(t) => t,
            Computed::Unknown(u) => panic!("computation gave up: {}", u.reason),
        }
    }
}

/// A reachable marking together with a word reaching it from the initial marking.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Witness {
    pub marking: Marking,
    pub word: FiringWord,
}

/// Evidence that no member of a query set is reachable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Refutation {
    EmptySet,
    Coverability,
    PlaceInvariant,
    Exhaustive,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct OracleStats {
    pub queries: usize,
    pub states_explored: usize,
    pub exploration_complete: bool,
    pub refuted_by_coverability: usize,
    pub refuted_by_invariant: usize,
    pub unknown_answers: usize,
}

/// Reachability oracle bound to one net, caching its state-space artefacts.
#[derive(Debug)]
pub struct ReachOracle<'n> {
    net: &'n Net,
    cfg: OracleConfig,
    exploration: OnceCell<Exploration>,
    coverability: OnceCell<Option<CoverabilityGraph>>,
    invariants: OnceCell<Vec<Vec<i64>>>,
    stats: Cell<OracleStats>,
}

impl<'n> ReachOracle<'n> {
    pub fn new(net: &'n Net, cfg: OracleConfig) -> Result<Self> {
        net.require_pure("reachability oracle")?;
        if cfg.state_budget == 0 {
            return Err(Error::InvalidArgument("state budget must be positive".into()));
        }
        Ok(ReachOracle {
            net,
            cfg,
            exploration: OnceCell::new(),
            coverability: OnceCell::new(),
            invariants: OnceCell::new(),
            stats: Cell::new(OracleStats::default()),
        })
    }

    pub fn net(&self) -> &'n Net {
        self.net
    }

    pub fn config(&self) -> &OracleConfig {
        &self.cfg
    }

    pub fn stats(&self) -> OracleStats {
        self.stats.get()
    }

    fn bump(&self, f: impl FnOnce(&mut OracleStats)) {
        let mut s = self.stats.get();
        f(&mut s);
        self.stats.set(s);
    }

    /// Coverability graph from the initial marking, or `None` if the vertex cap was hit.
    pub fn coverability(&self) -> Option<&CoverabilityGraph> {
        self.coverability
            .get_or_init(|| {
                build_coverability_graph_from(self.net, &self.net.initial().to_omega(), DEFAULT_COVERABILITY_CAP).ok()
            })
            .as_ref()
    }

    pub fn exploration(&self) -> &Exploration {
        self.exploration.get_or_init(|| {
            let ex = Exploration::run(self.net, self.cfg.state_budget);
            self.bump(|s| {
                s.states_explored = ex.len();
                s.exploration_complete = ex.complete();
            });
            ex
        })
    }

    /// Integer basis of the place invariants `y` with `y · C = 0`.
    pub fn place_invariants(&self) -> &[Vec<i64>] {
        self.invariants.get_or_init(|| invariant_basis(self.net))
    }

    pub(crate) fn unknown(&self, reason: impl Into<String>) -> Result<Unknown> {
        let reason = reason.into();
        if self.cfg.require_exact {
            return Err(Error::Inexact(reason));
        }
        self.bump(|s| s.unknown_answers += 1);
        Ok(Unknown {
            reason,
            states_explored: self.exploration().len(),
        })
    }

    /// Is some member of `x` reachable from the initial marking?
    pub fn set_reachable(&self, x: &ConvexSet) -> Result<Verdict<Witness, Refutation>> {
        self.net.check_marking(&vec![0; x.dim()])?;
        self.bump(|s| s.queries += 1);
        if x.is_empty() {
            return Ok(Verdict::Violated(Refutation::EmptySet));
        }
        if let Some(g) = self.coverability() {
            if !x.lower().generators().iter().any(|m| g.covers(m)) {
                self.bump(|s| s.refuted_by_coverability += 1);
                return Ok(Verdict::Violated(Refutation::Coverability));
            }
        }
        if self.cfg.place_invariants && self.refuted_by_invariants(x) {
            self.bump(|s| s.refuted_by_invariant += 1);
            return Ok(Verdict::Violated(Refutation::PlaceInvariant));
        }
        let ex = self.exploration();
        if let Some(i) = ex.markings().iter().position(|m| x.contains(m)) {
            return Ok(Verdict::Holds(Witness {
                marking: ex.markings()[i].clone(),
                word: ex.word_to(i),
            }));
        }
        if ex.complete() {
            return Ok(Verdict::Violated(Refutation::Exhaustive));
        }
        Ok(Verdict::Unknown(self.unknown(format!(
            "state budget of {} exhausted",
            self.cfg.state_budget
        ))?))
    }

    pub fn marking_reachable(&self, m: &Marking) -> Result<Verdict<Witness, Refutation>> {
        self.net.check_marking(m)?;
        self.set_reachable(&ConvexSet::singleton(m))
    }

    /// True when every box of `x` misses the hyperplane of some invariant.
    fn refuted_by_invariants(&self, x: &ConvexSet) -> bool {
        let invariants = self.place_invariants();
        if invariants.is_empty() {
            return false;
        }
        let m0 = self.net.initial();
        x.boxes().all(|(lo, hi)| {
            invariants.iter().any(|y| {
                let target: i128 = y.iter().zip(m0.iter()).map(|(&c, &t)| c as i128 * t as i128).sum();
                let (min, max) = span(y, lo, hi);
                min.is_some_and(|v| target < v) || max.is_some_and(|v| target > v)
            })
        })
    }
}

/// Range of `y · z` over `lo ≤ z ≤ hi`; `None` marks an unbounded end.
fn span(y: &[i64], lo: &[u32], hi: &[OmegaNat]) -> (Option<i128>, Option<i128>) {
    let mut min = Some(0i128);
    let mut max = Some(0i128);
    for ((&c, &l), &h) in y.iter().zip(lo).zip(hi) {
        let c = c as i128;
        let l = c * l as i128;
        let h = h.finite().map(|h| c * h as i128);
        match c.cmp(&0) {
            std::cmp::Ordering::Greater => {
                min = min.map(|m| m + l);
                max = max.zip(h).map(|(m, h)| m + h);
            }
            std::cmp::Ordering::Less => {
                min = min.zip(h).map(|(m, h)| m + h);
                max = max.map(|m| m + l);
            }
            std::cmp::Ordering::Equal => {}
        }
    }
    (min, max)
}

/// Rational nullspace of the transposed incidence matrix, scaled to integers.
fn invariant_basis(net: &Net) -> Vec<Vec<i64>> {
    type Q = Ratio<i128>;
    let places = net.place_count();
    let mut rows: Vec<Vec<Q>> = net
        .transition_ids()
        .map(|t| net.effect(t).into_iter().map(|x| Q::from_integer(x as i128)).collect())
        .collect();

    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..places {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][col] != Q::from_integer(0)) else {
            continue;
        };
        rows.swap(r, p);
        let lead = rows[r][col];
        for x in rows[r].iter_mut() {
            *x /= lead;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][col] != Q::from_integer(0) {
                let f = rows[i][col];
                let pivot = rows[r].clone();
                for (x, v) in rows[i].iter_mut().zip(pivot) {
                    *x -= f * v;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }

    let mut basis = Vec::new();
    for free in (0..places).filter(|c| !pivots.contains(c)) {
        let mut y = vec![Q::from_integer(0); places];
        y[free] = Q::from_integer(1);
        for (row, &pc) in pivots.iter().enumerate() {
            y[pc] = -rows[row][free];
        }
        let denom = y.iter().fold(1i128, |acc, q| acc.lcm(q.denom()));
        let ints: Vec<i128> = y.iter().map(|q| (q * denom).to_integer()).collect();
        let g = ints.iter().fold(0i128, |acc, &v| acc.gcd(&v)).max(1);
        basis.push(ints.into_iter().map(|v| (v / g) as i64).collect());
    }
    basis
}
