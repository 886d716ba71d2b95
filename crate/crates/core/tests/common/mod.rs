//! Exhaustive reference implementations used to check the library.
//!
//! Everything here works directly on the pre/post vectors by explicit
//! enumeration of reachable markings and firing words. None of it goes through
//! coverability graphs, minimal-element computations or the reachability oracle.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};

use pnpersist::{Marking, Net, TransitionId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Reachable-set size beyond which a random net counts as unbounded.
pub const STATE_CAP: usize = 3_000;

pub fn enabled(net: &Net, m: &[u32], t: TransitionId) -> bool {
    net.pre(t).iter().zip(m).all(|(&need, &have)| have >= need) && net.inhibitors(t).iter().all(|&p| m[p] == 0)
}

pub fn fire(net: &Net, m: &[u32], t: TransitionId) -> Marking {
    assert!(enabled(net, m, t));
    m.iter()
        .enumerate()
        .map(|(i, &x)| x - net.pre(t)[i] + net.post(t)[i])
        .collect::<Vec<_>>()
        .into()
}

pub fn le(x: &[u32], y: &[u32]) -> bool {
    x.iter().zip(y).all(|(a, b)| a <= b)
}

pub fn minimal(set: &[Marking]) -> Vec<Marking> {
    let mut out: Vec<Marking> = set
        .iter()
        .filter(|m| !set.iter().any(|n| n != *m && le(n, m)))
        .cloned()
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Reachability graph from `m0`; `None` past `cap` markings.
pub struct Graph {
    pub markings: Vec<Marking>,
    pub index: HashMap<Marking, usize>,
    pub edges: Vec<(usize, TransitionId, usize)>,
}

pub fn explore_from(net: &Net, m0: &Marking, cap: usize) -> Option<Graph> {
    let mut g = Graph {
        markings: vec![m0.clone()],
        index: HashMap::from([(m0.clone(), 0)]),
        edges: Vec::new(),
    };
    let mut queue = VecDeque::from([0]);
    while let Some(i) = queue.pop_front() {
        let m = g.markings[i].clone();
        for t in net.transition_ids() {
            if !enabled(net, &m, t) {
                continue;
            }
            let n = fire(net, &m, t);
            let j = match g.index.get(&n) {
                Some(&j) => j,
                None => {
                    if g.markings.len() >= cap {
                        return None;
                    }
                    let j = g.markings.len();
                    g.index.insert(n.clone(), j);
                    g.markings.push(n);
                    queue.push_back(j);
                    j
                }
            };
            g.edges.push((i, t, j));
        }
    }
    Some(g)
}

pub fn explore(net: &Net) -> Option<Graph> {
    explore_from(net, net.initial(), STATE_CAP)
}

pub fn reachable(net: &Net) -> Vec<Marking> {
    explore(net).expect("bounded net").markings
}

/// Whether `b` can fire again from `m` (bounded nets only).
pub fn live(net: &Net, m: &Marking, b: TransitionId) -> bool {
    let g = explore_from(net, m, STATE_CAP).expect("bounded net");
    g.markings.iter().any(|x| enabled(net, x, b))
}

/// Reachable markings enabling both `a` and `b`.
pub fn re(net: &Net, a: TransitionId, b: TransitionId) -> Vec<Marking> {
    reachable(net)
        .into_iter()
        .filter(|m| enabled(net, m, a) && enabled(net, m, b))
        .collect()
}

pub fn min_re(net: &Net, a: TransitionId, b: TransitionId) -> Vec<Marking> {
    minimal(&re(net, a, b))
}

/// Is there a word `w` with `|w| ≤ k` such that `m a w b` is firable?
/// Enumerates every word explicitly.
pub fn exists_short(net: &Net, m: &Marking, a: TransitionId, b: TransitionId, k: u32) -> bool {
    fn go(net: &Net, m: &Marking, b: TransitionId, left: u32) -> bool {
        if enabled(net, m, b) {
            return true;
        }
        left > 0
            && net
                .transition_ids()
                .any(|t| enabled(net, m, t) && go(net, &fire(net, m, t), b, left - 1))
    }
    enabled(net, m, a) && go(net, &fire(net, m, a), b, k)
}

/// Length of the shortest `w` with `m a w b` firable (bounded nets only).
pub fn delay(net: &Net, m: &Marking, a: TransitionId, b: TransitionId) -> Option<u32> {
    let start = fire(net, m, a);
    let mut seen = HashSet::from([start.clone()]);
    let mut layer = vec![start];
    for d in 0.. {
        if layer.is_empty() {
            return None;
        }
        if layer.iter().any(|x| enabled(net, x, b)) {
            return Some(d);
        }
        let mut next = Vec::new();
        for x in &layer {
            for t in net.transition_ids().filter(|&t| enabled(net, x, t)) {
                let y = fire(net, x, t);
                if seen.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        layer = next;
    }
    unreachable!()
}

pub fn ee_violation(net: &Net, a: TransitionId, b: TransitionId) -> bool {
    re(net, a, b).iter().any(|m| !enabled(net, &fire(net, m, a), b))
}

pub fn el_violation(net: &Net, a: TransitionId, b: TransitionId) -> bool {
    re(net, a, b).iter().any(|m| !live(net, &fire(net, m, a), b))
}

pub fn ll_violation(net: &Net, a: TransitionId, b: TransitionId) -> bool {
    reachable(net)
        .iter()
        .any(|m| enabled(net, m, a) && live(net, m, b) && !live(net, &fire(net, m, a), b))
}

pub fn elk_violation(net: &Net, a: TransitionId, b: TransitionId, k: u32) -> bool {
    re(net, a, b).iter().any(|m| !exists_short(net, m, a, b, k))
}

pub fn ordered_pairs(net: &Net) -> Vec<(TransitionId, TransitionId)> {
    net.transition_ids()
        .flat_map(|a| net.transition_ids().filter(move |&b| b != a).map(move |b| (a, b)))
        .collect()
}

pub fn net_ee(net: &Net) -> bool {
    ordered_pairs(net).iter().all(|&(a, b)| !ee_violation(net, a, b))
}

pub fn net_el(net: &Net) -> bool {
    ordered_pairs(net).iter().all(|&(a, b)| !el_violation(net, a, b))
}

pub fn net_ll(net: &Net) -> bool {
    ordered_pairs(net).iter().all(|&(a, b)| !ll_violation(net, a, b))
}

pub fn net_elk(net: &Net, k: u32) -> bool {
    ordered_pairs(net).iter().all(|&(a, b)| !elk_violation(net, a, b, k))
}

/// `k_{a,b}`: `Some(None)` when never co-enabled, `None` when `a` kills `b`.
pub fn k_ab(net: &Net, a: TransitionId, b: TransitionId) -> Option<Option<u32>> {
    let mut worst = None;
    for m in re(net, a, b) {
        let d = delay(net, &m, a, b)?;
        worst = Some(worst.map_or(d, |w: u32| w.max(d)));
    }
    Some(worst)
}

/// Least `k` for which the net is e/l-k-persistent, `None` if it is not e/l.
pub fn least_k(net: &Net) -> Option<u32> {
    let mut k = 0;
    for (a, b) in ordered_pairs(net) {
        k = k.max(k_ab(net, a, b)?.unwrap_or(0));
    }
    Some(k)
}

/// Random net with at most 5 places, 5 transitions and 3 tokens in total.
///
/// Odd ids give state-machine nets (one input, one output) in which some
/// transitions also test a third place; even ids give unrestricted arcs.
pub fn random_net(rng: &mut ChaCha8Rng, id: usize) -> Net {
    let places = rng.gen_range(1..=5);
    let transitions = rng.gen_range(2..=5);
    let mut b = Net::builder(format!("random-{id}"));
    let names: Vec<String> = (0..places).map(|i| format!("p{i}")).collect();
    let mut init = vec![0u32; places];
    for _ in 0..rng.gen_range(1..=3) {
        init[rng.gen_range(0..places)] += 1;
    }
    for (n, &m) in names.iter().zip(&init) {
        b.add_place(n.clone(), m);
    }
    let pick = |rng: &mut ChaCha8Rng, lo: usize| -> Vec<String> {
        let n = rng.gen_range(lo..=2.min(places));
        let mut chosen: Vec<usize> = Vec::new();
        while chosen.len() < n {
            let p = rng.gen_range(0..places);
            if !chosen.contains(&p) {
                chosen.push(p);
            }
        }
        chosen.into_iter().map(|p| names[p].clone()).collect()
    };
    for j in 0..transitions {
        let (inputs, outputs) = if id % 2 == 1 {
            let i = rng.gen_range(0..places);
            let o = rng.gen_range(0..places);
            let mut inputs = vec![names[i].clone()];
            let mut outputs = vec![names[o].clone()];
            let r = rng.gen_range(0..places);
            if r != i && r != o && rng.gen_bool(0.4) {
                inputs.push(names[r].clone());
                outputs.push(names[r].clone());
            }
            (inputs, outputs)
        } else {
            let inputs = pick(rng, 1);
            // a third of the transitions only test their inputs
            let outputs = if rng.gen_bool(0.35) {
                inputs.clone()
            } else {
                pick(rng, 0)
            };
            (inputs, outputs)
        };
        b.add_transition(format!("t{j}"), &inputs, &outputs, &[] as &[String]);
    }
    b.build().expect("generated names are distinct")
}

/// `count` random bounded nets with at least `MIN_STATES` reachable markings,
/// deterministic in `seed`.
pub fn random_bounded_nets(count: usize, seed: u64) -> Vec<Net> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut id = 0;
    while out.len() < count {
        let net = random_net(&mut rng, id);
        id += 1;
        if explore(&net).is_some_and(|g| g.markings.len() >= MIN_STATES) {
            out.push(net);
        }
    }
    out
}

/// Smaller reachable sets make for vacuous checks.
pub const MIN_STATES: usize = 3;

pub const SEED: u64 = 0x5eed_2024;

pub fn t(net: &Net, name: &str) -> TransitionId {
    net.transition(name).unwrap()
}
