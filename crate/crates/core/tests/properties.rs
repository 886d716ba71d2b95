//! Property tests over random nets, checked against the brute force in `common`.

mod common;

use common::{enabled, exists_short, explore, explore_from, minimal};
use pnpersist::persistence::elk_step;
use pnpersist::statespace::{build_coverability_graph, build_k_component, occurs_within};
use pnpersist::valk_jantzen::{compute_min, res_eakb};
use pnpersist::{
    ConvexSet, DownSet, FiringWord, Marking, Net, OmegaVector, OracleConfig, ReachOracle, TransitionId, UpSet, Verdict,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn net_from(seed: u64, family: usize) -> Net {
    common::random_net(&mut ChaCha8Rng::seed_from_u64(seed), family)
}

fn arb_net() -> impl Strategy<Value = Net> {
    (any::<u64>(), 0usize..2).prop_map(|(seed, family)| net_from(seed, family))
}

/// A random word over the net's transitions, fired greedily from `m`:
/// letters that are not enabled are dropped.
fn greedy_word(net: &Net, m: &Marking, picks: &[usize]) -> FiringWord {
    let mut m = m.clone();
    let mut w = FiringWord::empty();
    for &i in picks {
        let t = TransitionId(i % net.transition_count());
        if enabled(net, &m, t) {
            m = net.fire(&m, t).unwrap();
            w.push(t);
        }
    }
    w
}

fn add(m: &Marking, d: &[u32]) -> Marking {
    m.iter().zip(d).map(|(x, y)| x + y).collect::<Vec<_>>().into()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn single_letter_word_is_fire(net in arb_net()) {
        let m0 = net.initial();
        for t in net.transition_ids().filter(|&t| enabled(&net, m0, t)) {
            prop_assert_eq!(
                net.fire_word(m0, &FiringWord::new(vec![t])).unwrap(),
                net.fire(m0, t).unwrap()
            );
        }
    }

    #[test]
    fn firing_is_monotone(net in arb_net(), picks in prop::collection::vec(0usize..8, 0..10), extra in prop::collection::vec(0u32..3, 5)) {
        let m0 = net.initial();
        let w = greedy_word(&net, m0, &picks);
        let after = net.fire_word(m0, &w).unwrap();
        let bigger = add(m0, &extra[..net.place_count()]);
        prop_assert_eq!(net.fire_word(&bigger, &w).unwrap(), add(&after, &extra[..net.place_count()]));
    }

    #[test]
    fn diamond(net in arb_net(), picks in prop::collection::vec(0usize..8, 0..6)) {
        let m = net.fire_word(net.initial(), &greedy_word(&net, net.initial(), &picks)).unwrap();
        for a in net.transition_ids() {
            for b in net.transition_ids() {
                if a == b {
                    continue;
                }
                let ab = net.fire_word(&m, &FiringWord::new(vec![a, b]));
                let ba = net.fire_word(&m, &FiringWord::new(vec![b, a]));
                if let (Ok(x), Ok(y)) = (ab, ba) {
                    prop_assert_eq!(x, y);
                }
            }
        }
    }

    #[test]
    fn words_with_equal_parikh_vectors_end_alike(net in arb_net(), picks in prop::collection::vec(0usize..8, 0..8), rotate in 0usize..8) {
        let m0 = net.initial();
        let w = greedy_word(&net, m0, &picks).into_inner();
        let mut v = w.clone();
        if !v.is_empty() {
            let r = rotate % v.len();
            v.rotate_left(r);
        }
        let (w, v) = (FiringWord::new(w), FiringWord::new(v));
        prop_assert_eq!(net.parikh(&w), net.parikh(&v));
        if let Ok(end) = net.fire_word(m0, &v) {
            prop_assert_eq!(end, net.fire_word(m0, &w).unwrap());
        }
    }

    #[test]
    fn k_components_are_prefixes(net in arb_net(), k in 0usize..4) {
        let root = net.initial().to_omega();
        let small = build_k_component(&net, &root, k).unwrap();
        let large = build_k_component(&net, &root, k + 1).unwrap();
        prop_assert_eq!(small.nodes(), &large.nodes()[..small.len()]);
        for (i, node) in small.nodes().iter().enumerate() {
            prop_assert!(node.depth <= k);
            let reached = net.fire_word(net.initial(), &small.path_to(i)).unwrap();
            prop_assert_eq!(reached.to_omega(), node.marking.clone());
        }
    }

    #[test]
    fn occurs_within_is_monotone_in_k(net in arb_net(), k in 0usize..5) {
        let root = net.initial().to_omega();
        for b in net.transition_ids() {
            if occurs_within(&net, &root, b, k).unwrap() {
                prop_assert!(occurs_within(&net, &root, b, k + 1).unwrap());
            }
        }
    }

    #[test]
    fn elk_steps_are_monotone_in_k(net in arb_net(), k in 0u32..4) {
        let Some(g) = explore(&net) else { return Ok(()) };
        for m in &g.markings {
            for a in net.transition_ids().filter(|&a| enabled(&net, m, a)) {
                if elk_step(&net, m, a, k).unwrap() {
                    prop_assert!(elk_step(&net, m, a, k + 1).unwrap());
                }
            }
        }
    }

    #[test]
    fn coverability_graph_of_a_bounded_net_is_its_reachability_graph(net in arb_net()) {
        let Some(g) = explore(&net) else { return Ok(()) };
        let cg = build_coverability_graph(&net, net.initial()).unwrap();
        prop_assert!(cg.is_bounded());
        let mut vertices: Vec<OmegaVector> = cg.vertices().to_vec();
        let mut states: Vec<OmegaVector> = g.markings.iter().map(Marking::to_omega).collect();
        vertices.sort();
        states.sort();
        prop_assert_eq!(vertices, states);
        prop_assert_eq!(cg.edges().len(), g.edges.len());
    }

    #[test]
    fn oracle_witnesses_replay(net in arb_net()) {
        let Some(g) = explore(&net) else { return Ok(()) };
        let oracle = ReachOracle::new(&net, OracleConfig::default()).unwrap();
        for m in &g.markings {
            match oracle.marking_reachable(m).unwrap() {
                Verdict::Holds(w) => {
                    prop_assert_eq!(&w.marking, m);
                    prop_assert_eq!(&net.fire_word(net.initial(), &w.word).unwrap(), m);
                }
                other => prop_assert!(false, "{} reachable but oracle said {}", m, other.label()),
            }
        }
    }

    #[test]
    fn oracle_is_exact_on_bounded_nets(net in arb_net(), probes in prop::collection::vec(prop::collection::vec(0u32..3, 5), 8)) {
        let Some(g) = explore(&net) else { return Ok(()) };
        let oracle = ReachOracle::new(&net, OracleConfig::default()).unwrap();
        for p in probes {
            let m: Marking = p[..net.place_count()].to_vec().into();
            let truth = g.index.contains_key(&m);
            let got = oracle.marking_reachable(&m).unwrap();
            prop_assert!(!got.is_unknown());
            prop_assert_eq!(got.is_holds(), truth, "{}", m);
        }
    }

    #[test]
    fn oracle_answers_are_stable_under_larger_budgets(net in arb_net(), budget in 1usize..20, lower in prop::collection::vec(0u32..3, 5)) {
        let dim = net.place_count();
        let x = ConvexSet::from_lower(UpSet::principal(lower[..dim].to_vec().into()));
        let small = ReachOracle::new(&net, OracleConfig { state_budget: budget, ..Default::default() }).unwrap();
        let large = ReachOracle::new(&net, OracleConfig { state_budget: budget * 50, ..Default::default() }).unwrap();
        let a = small.set_reachable(&x).unwrap().outcome();
        let b = large.set_reachable(&x).unwrap().outcome();
        if !a.is_unknown() {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn compute_min_of_eakb_matches_word_enumeration(net in arb_net(), k in 0usize..2) {
        let dim = net.place_count();
        // minimal elements have coordinates at most k + 2 with 0/1 arcs
        let bound = k as u32 + 2;
        let boxed: Vec<Marking> = (0..(bound + 1).pow(dim as u32))
            .map(|mut code| {
                (0..dim)
                    .map(|_| {
                        let x = code % (bound + 1);
                        code /= bound + 1;
                        x
                    })
                    .collect::<Vec<_>>()
                    .into()
            })
            .collect();
        for a in net.transition_ids() {
            for b in net.transition_ids().filter(|&b| b != a) {
                let got = compute_min(&res_eakb(&net, a, b, k).unwrap()).unwrap().unwrap();
                let members: Vec<Marking> = boxed
                    .iter()
                    .filter(|m| exists_short(&net, m, a, b, k as u32))
                    .cloned()
                    .collect();
                prop_assert_eq!(got, minimal(&members));
            }
        }
    }

    #[test]
    fn complements_partition_a_box(gens in prop::collection::vec(prop::collection::vec(0u32..4, 3), 0..4), probe in prop::collection::vec(0u32..6, 3)) {
        let up = UpSet::new(3, gens.into_iter().map(Marking::from).collect()).unwrap();
        let down: DownSet = up.complement();
        prop_assert_ne!(up.contains(&probe), down.contains(&probe));
        prop_assert_eq!(down.complement().contains(&probe), up.contains(&probe));
    }

    #[test]
    fn exploration_from_a_reached_marking_stays_inside(net in arb_net(), picks in prop::collection::vec(0usize..8, 0..6)) {
        let Some(g) = explore(&net) else { return Ok(()) };
        let m = net.fire_word(net.initial(), &greedy_word(&net, net.initial(), &picks)).unwrap();
        let sub = explore_from(&net, &m, common::STATE_CAP).unwrap();
        prop_assert!(sub.markings.iter().all(|x| g.index.contains_key(x)));
    }
}
