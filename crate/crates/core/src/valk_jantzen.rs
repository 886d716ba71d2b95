//! Minimal elements of right-closed sets from a down-closure oracle.
//!
//! A right-closed `X ⊆ ℕ^k` is finitely generated by `Min(X)`. If one can
//! decide, for any ω-vector `v`, whether `↓v` meets `X`, then `Min(X)` can be
//! computed: keep a residual down-set of the space not yet covered by the
//! generators found so far, pick a bound of it that meets `X`, shrink that
//! bound one coordinate at a time to a minimal element, and cut the element's
//! up-closure out of the residual.

use crate::error::{Error, Result};
use crate::net::{Marking, Net, TransitionId};
use crate::omega::{ConvexSet, DownSet, OmegaNat, OmegaVector, UpSet};
use crate::oracle::{Computed, ReachOracle, Verdict};
use crate::persistence::min_enabling;
use crate::statespace::{is_live_from_omega, occurs_within};

/// Decides whether the down-closure of an ω-vector meets a fixed right-closed set.
pub trait ResOracle {
    fn dim(&self) -> usize;

    /// `Holds` iff `↓v ∩ X ≠ ∅`. Must be monotone in `v`.
    fn query(&self, v: &OmegaVector) -> Result<Verdict<(), ()>>;
}

/// Residual rounds allowed before the computation is declared runaway.
pub const MAX_ROUNDS: usize = 100_000;

const GALLOP_LIMIT: u32 = 1 << 30;

/// `Min(X)` for the set described by `oracle`, sorted lexicographically.
pub fn compute_min(oracle: &dyn ResOracle) -> Result<Computed<Vec<Marking>>> {
    let k = oracle.dim();
    let mut residual = DownSet::full(k);
    let mut found: Vec<Marking> = Vec::new();
    // bounds already known to miss X; anything below them misses X too
    let mut misses: Vec<OmegaVector> = Vec::new();

    for _round in 0..MAX_ROUNDS {
        let mut hit = None;
        for v in residual.bounds() {
            if misses.iter().any(|w| v.le(w)) {
                continue;
            }
            match oracle.query(v)? {
                Verdict::Holds(()) => {
                    hit = Some(v.clone());
                    break;
                }
                Verdict::Violated(()) => misses.push(v.clone()),
                Verdict::Unknown(u) => return Ok(Computed::Unknown(u)),
            }
        }
        let Some(v) = hit else {
            found.sort();
            return Ok(Computed::Done(found));
        };
        let m = match minimize(oracle, v)? {
            Computed::Done(m) => m,
            Computed::Unknown(u) => return Ok(Computed::Unknown(u)),
        };
        if found.iter().any(|g| g.le(&m)) {
            return Err(Error::OracleContract(format!(
                "element {m} lies above an element found earlier"
            )));
        }
        residual = residual.intersect(&UpSet::principal(m.clone()).complement())?;
        found.push(m);
    }
    Err(Error::IterationCap {
        what: "computing minimal elements",
        cap: MAX_ROUNDS,
    })
}

/// Shrinks `v` coordinate by coordinate, ascending index, keeping the query true.
fn minimize(oracle: &dyn ResOracle, mut v: OmegaVector) -> Result<Computed<Marking>> {
    for i in 0..v.dim() {
        let ceiling = v[i].finite();
        let ask = |n: u32| -> Result<Verdict<(), ()>> {
            let mut probe = v.clone();
            probe.set(i, OmegaNat::Nat(n));
            oracle.query(&probe)
        };

        // gallop 0, 1, 2, 4, … until the query holds; `lo - 1` always fails
        let mut lo = 0;
        let mut n = 0u32;
        let mut hi = loop {
            if let Some(c) = ceiling.filter(|&c| n >= c) {
                break c;
            }
            match ask(n)? {
                Verdict::Holds(()) => break n,
                Verdict::Violated(()) => lo = n + 1,
                Verdict::Unknown(u) => return Ok(Computed::Unknown(u)),
            }
            if n >= GALLOP_LIMIT {
                return Err(Error::OracleContract(format!(
                    "query holds at {v} but never along coordinate {i}"
                )));
            }
            n = if n == 0 { 1 } else { n * 2 };
        };
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            match ask(mid)? {
                Verdict::Holds(()) => hi = mid,
                Verdict::Violated(()) => lo = mid + 1,
                Verdict::Unknown(u) => return Ok(Computed::Unknown(u)),
            }
        }
        v.set(i, OmegaNat::Nat(lo));
    }
    match oracle.query(&v)? {
        Verdict::Holds(()) => Ok(Computed::Done(v.to_marking().expect("every coordinate was fixed"))),
        Verdict::Unknown(u) => Ok(Computed::Unknown(u)),
        Verdict::Violated(()) => Err(Error::OracleContract(format!(
            "query fails at the minimized vector {v}"
        ))),
    }
}

/// Oracle for an explicitly given up-set.
#[derive(Debug, Clone)]
pub struct UpSetOracle(pub UpSet);

impl ResOracle for UpSetOracle {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn query(&self, v: &OmegaVector) -> Result<Verdict<(), ()>> {
        Ok(bool_verdict(self.0.generators().iter().any(|g| v.covers(g))))
    }
}

fn bool_verdict(b: bool) -> Verdict<(), ()> {
    if b {
        Verdict::Holds(())
    } else {
        Verdict::Violated(())
    }
}

/// Reachable markings above a fixed up-set: `↓v ∩ R ∩ lower ≠ ∅`.
#[derive(Debug)]
pub struct ReachableAbove<'o, 'n> {
    oracle: &'o ReachOracle<'n>,
    lower: UpSet,
}

impl<'o, 'n> ReachableAbove<'o, 'n> {
    pub fn new(oracle: &'o ReachOracle<'n>, lower: UpSet) -> Result<Self> {
        oracle.net().check_marking(&vec![0; lower.dim()])?;
        Ok(ReachableAbove { oracle, lower })
    }
}

impl ResOracle for ReachableAbove<'_, '_> {
    fn dim(&self) -> usize {
        self.lower.dim()
    }

    fn query(&self, v: &OmegaVector) -> Result<Verdict<(), ()>> {
        let x = ConvexSet::new(self.lower.clone(), DownSet::principal(v.clone()))?;
        Ok(match self.oracle.set_reachable(&x)? {
            Verdict::Holds(_) => Verdict::Holds(()),
            Verdict::Violated(_) => Verdict::Violated(()),
            Verdict::Unknown(u) => Verdict::Unknown(u),
        })
    }
}

/// Oracle for the up-closure of the reachable markings enabling both `a` and `b`.
pub fn res_re<'o, 'n>(oracle: &'o ReachOracle<'n>, a: TransitionId, b: TransitionId) -> Result<ReachableAbove<'o, 'n>> {
    let lower = UpSet::principal(min_enabling(oracle.net(), a, b)?);
    ReachableAbove::new(oracle, lower)
}

/// Oracle for `E_{a(k)b}`: markings enabling `a` after which `b` can fire
/// within `k` further steps.
#[derive(Debug, Clone)]
pub struct ResEakb<'n> {
    net: &'n Net,
    a: TransitionId,
    b: TransitionId,
    k: usize,
}

pub fn res_eakb(net: &Net, a: TransitionId, b: TransitionId, k: usize) -> Result<ResEakb<'_>> {
    net.require_distinct(a, b)?;
    net.require_pure("ω-rooted trees need monotonicity")?;
    Ok(ResEakb { net, a, b, k })
}

impl ResOracle for ResEakb<'_> {
    fn dim(&self) -> usize {
        self.net.place_count()
    }

    fn query(&self, v: &OmegaVector) -> Result<Verdict<(), ()>> {
        self.net.check_marking(&vec![0; v.dim()])?;
        if !self.net.enabled_omega(v, self.a) {
            return Ok(Verdict::Violated(()));
        }
        let after = self.net.fire_omega(v, self.a);
        Ok(bool_verdict(occurs_within(self.net, &after, self.b, self.k + 1)?))
    }
}

/// Oracle for `Live_t`, the markings at which `t` can still fire.
#[derive(Debug, Clone)]
pub struct ResLive<'n> {
    net: &'n Net,
    t: TransitionId,
}

pub fn res_live(net: &Net, t: TransitionId) -> Result<ResLive<'_>> {
    net.check_transition(t)?;
    net.require_pure("liveness at ω-markings needs monotonicity")?;
    Ok(ResLive { net, t })
}

impl ResOracle for ResLive<'_> {
    fn dim(&self) -> usize {
        self.net.place_count()
    }

    fn query(&self, v: &OmegaVector) -> Result<Verdict<(), ()>> {
        Ok(bool_verdict(is_live_from_omega(self.net, v, self.t)?))
    }
}
