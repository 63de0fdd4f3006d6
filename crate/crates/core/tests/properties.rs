//! Property-based invariants for the combinatorial core.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use common::vid;
use seqcol::embed::enumerate_embeddings;
use seqcol::engine::{
    lists_from_defining_set, solve, OrderedListGraph, Rounds, SolveOptions,
};
use seqcol::graph::{Color, ColorSet, Coloring, Graph, VertexId, VertexOrder};
use seqcol::marked::MarkedGraph;
use seqcol::oracle::{ListColoringProblem, Oracle};
use seqcol::rulebase::{type1_force, type2_force, ForceOutcome, RuleBase};
use seqcol::sds::{ssdn, verify_sds, wsdn, SdsQuery, SearchOptions, SearchOutcome};
use seqcol::{engine, io};

/// A random simple graph on up to `max_n` vertices, as (n, edge bits).
fn graph_strategy(max_n: u32) -> impl Strategy<Value = Graph> {
    (1..=max_n, any::<u64>()).prop_map(|(n, bits)| {
        let mut g = Graph::new();
        for i in 1..=n {
            g.add_vertex(vid(i));
        }
        let mut b = 0;
        for i in 1..=n {
            for j in i + 1..=n {
                if bits & (1 << (b % 64)) != 0 {
                    g.add_edge(vid(i), vid(j)).unwrap();
                }
                b += 1;
            }
        }
        g
    })
}

/// A random list assignment over palette `t`.
fn lists_strategy(g: &Graph, t: u32) -> impl Strategy<Value = BTreeMap<VertexId, ColorSet>> {
    let vs: Vec<VertexId> = g.vertices().collect();
    proptest::collection::vec(0u32..(1 << t), vs.len()).prop_map(move |masks| {
        vs.iter()
            .zip(masks)
            .map(|(&v, m)| {
                let set: ColorSet = (1..=t).filter(|c| m & (1 << (c - 1)) != 0).map(Color).collect();
                (v, set)
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Balls grow with the radius and stabilize at the component.
    #[test]
    fn ball_monotone_in_radius(g in graph_strategy(8), d in 0u32..4) {
        for v in g.vertices() {
            let small = g.ball(v, d).unwrap();
            let large = g.ball(v, d + 1).unwrap();
            prop_assert!(small.is_subset(&large));
            let far = g.ball(v, g.vertex_count() as u32).unwrap();
            let farther = g.ball(v, g.vertex_count() as u32 + 3).unwrap();
            prop_assert_eq!(far, farther);
        }
    }

    /// |V(A + B)| = |V(A)| + |V(B)| - (shared labels).
    #[test]
    fn amalgam_vertex_count(labels_a in proptest::collection::btree_set("[a-e]", 1..=4),
                            labels_b in proptest::collection::btree_set("[c-h]", 1..=4)) {
        let la: Vec<&str> = labels_a.iter().map(|s| s.as_str()).collect();
        let lb: Vec<&str> = labels_b.iter().map(|s| s.as_str()).collect();
        let a = MarkedGraph::clique(&la);
        let b = MarkedGraph::clique(&lb);
        let shared = labels_a.intersection(&labels_b).count();
        let s = a.amalgam(&b);
        prop_assert_eq!(
            s.graph().vertex_count(),
            la.len() + lb.len() - shared
        );
    }

    /// Embedding enumeration is deterministic and duplicate-free.
    #[test]
    fn embeddings_deterministic_and_distinct(g in graph_strategy(6)) {
        let pattern = MarkedGraph::clique(&["a", "b"]);
        let r = g.vertex_set();
        let once = enumerate_embeddings(&g, &r, &pattern).unwrap();
        let twice = enumerate_embeddings(&g, &r, &pattern).unwrap();
        prop_assert_eq!(&once, &twice);
        let mut images: Vec<_> = once.iter().map(|e| e.image().to_vec()).collect();
        let before = images.len();
        images.sort();
        images.dedup();
        prop_assert_eq!(before, images.len());
        // One ordered pair per edge direction.
        prop_assert_eq!(before, 2 * g.edge_count());
    }

    /// Solution counts do not depend on vertex ids (relabeling invariance).
    #[test]
    fn solution_count_invariant_under_relabeling(g in graph_strategy(6), shift in 1u32..50) {
        let oracle = Oracle::default();
        let p = ListColoringProblem::with_full_lists(g.clone(), 3);
        let base = oracle.count_solutions(&p).unwrap();

        let mut relabeled = Graph::new();
        for v in g.vertices() {
            relabeled.add_vertex(vid(v.0 + shift));
        }
        for (a, b) in g.edges() {
            relabeled.add_edge(vid(a.0 + shift), vid(b.0 + shift)).unwrap();
        }
        let p2 = ListColoringProblem::with_full_lists(relabeled, 3);
        prop_assert_eq!(oracle.count_solutions(&p2).unwrap(), base);
    }

    /// Runs are deterministic (identical results, including the trace), and
    /// every vertex's list shrinks monotonically through the trace.
    #[test]
    fn solve_deterministic_and_monotone(g in graph_strategy(7), seed_bits in any::<u32>()) {
        let oracle = Oracle::default();
        let p = ListColoringProblem::with_full_lists(g.clone(), 3);
        let sols = oracle.enumerate_solutions(&p, None).unwrap().complete().unwrap();
        prop_assume!(!sols.is_empty());
        let gamma = Coloring::new(&g, sols[0].clone(), 3).unwrap();
        let a: BTreeSet<VertexId> = g
            .vertices()
            .enumerate()
            .filter(|(i, _)| seed_bits & (1 << (i % 32)) != 0)
            .map(|(_, v)| v)
            .collect();
        let lists = lists_from_defining_set(&g, &gamma, &a).unwrap();
        let order = VertexOrder::by_id(&g);
        let state = OrderedListGraph::new(g.clone(), order, lists, 3).unwrap();
        let rb = RuleBase::tucker(3).unwrap();

        let r1 = solve(&state, &rb, &SolveOptions::default()).unwrap();
        let r2 = solve(&state, &rb, &SolveOptions::default()).unwrap();
        prop_assert_eq!(r1.outcome, r2.outcome);
        prop_assert_eq!(r1.rounds, r2.rounds);
        prop_assert_eq!(&r1.lists, &r2.lists);
        prop_assert_eq!(r1.trace.len(), r2.trace.len());
        for (a, b) in r1.trace.iter().zip(&r2.trace) {
            prop_assert_eq!(a, b);
        }

        // Monotone shrink: replay the trace.
        let mut current = state.lists.clone();
        for round in &r1.trace {
            for change in round {
                prop_assert!(change.new.is_subset(change.old));
                prop_assert_eq!(current[&change.vertex], change.old);
                current.insert(change.vertex, change.new);
            }
        }
        for (v, l) in &r1.lists {
            prop_assert_eq!(current[v], *l);
        }
    }

    /// The decided set of a capped run grows with the round budget.
    #[test]
    fn closure_monotone_in_rounds(g in graph_strategy(7), seed_bits in any::<u32>()) {
        let oracle = Oracle::default();
        let p = ListColoringProblem::with_full_lists(g.clone(), 3);
        let sols = oracle.enumerate_solutions(&p, None).unwrap().complete().unwrap();
        prop_assume!(!sols.is_empty());
        let gamma = Coloring::new(&g, sols[0].clone(), 3).unwrap();
        let a: BTreeSet<VertexId> = g
            .vertices()
            .enumerate()
            .filter(|(i, _)| seed_bits & (1 << (i % 32)) != 0)
            .map(|(_, v)| v)
            .collect();
        let order = VertexOrder::by_id(&g);
        let rb = RuleBase::tucker(3).unwrap();
        let mut previous: Option<BTreeSet<VertexId>> = None;
        for k in 1..=4u32 {
            let cc = engine::coloring_closure(&a, &g, &order, &gamma, &rb, Rounds::Finite(k)).unwrap();
            if let Some(prev) = &previous {
                prop_assert!(prev.is_subset(&cc.vertices), "closure shrank from k={} to k={k}", k - 1);
            }
            previous = Some(cc.vertices);
        }
    }

    /// ||L^{A,gamma}|| = |A| + t(n - |A|).
    #[test]
    fn seed_lists_norm_identity(g in graph_strategy(8), seed_bits in any::<u32>()) {
        let gamma = Coloring::new(&g, g.vertices().map(|v| (v, Color(1))).collect(), 3).unwrap();
        let a: BTreeSet<VertexId> = g
            .vertices()
            .enumerate()
            .filter(|(i, _)| seed_bits & (1 << (i % 32)) != 0)
            .map(|(_, v)| v)
            .collect();
        let lists = lists_from_defining_set(&g, &gamma, &a).unwrap();
        let norm: usize = lists.values().map(|l| l.len()).sum();
        prop_assert_eq!(norm, a.len() + 3 * (g.vertex_count() - a.len()));
    }

    /// Weak never exceeds strong, and a weak witness is minimal: dropping
    /// any vertex breaks it.
    #[test]
    fn weak_at_most_strong_and_witness_minimal(g in graph_strategy(6), k in 1u32..3) {
        let oracle = Oracle::default();
        let p = ListColoringProblem::with_full_lists(g.clone(), 3);
        let sols = oracle.enumerate_solutions(&p, None).unwrap().complete().unwrap();
        prop_assume!(!sols.is_empty());
        let gamma = Coloring::new(&g, sols[0].clone(), 3).unwrap();
        let order = VertexOrder::by_id(&g);
        let rb = RuleBase::tucker(3).unwrap();
        let q = SdsQuery::new(&g, &order, &gamma, &rb, Rounds::Finite(k)).unwrap();
        let opts = SearchOptions::default();
        let (w, weak_witness) = match wsdn(&q, &opts).unwrap() {
            SearchOutcome::Found { number, witness, .. } => (number, witness),
            other => { prop_assert!(false, "weak search failed: {other:?}"); unreachable!() }
        };
        let (s, _) = match ssdn(&q, &opts).unwrap() {
            SearchOutcome::Found { number, witness, .. } => (number, witness),
            other => { prop_assert!(false, "strong search failed: {other:?}"); unreachable!() }
        };
        prop_assert!(w <= s);
        for &v in &weak_witness.set {
            let mut smaller = weak_witness.set.clone();
            smaller.remove(&v);
            prop_assert!(
                verify_sds(&q, &smaller).unwrap().is_none(),
                "weak witness is not minimal: dropping {v} still verifies"
            );
        }
    }

    /// When the oracle-certified forcings act, the solution set of the
    /// whole problem is unchanged.
    #[test]
    fn forcings_preserve_solutions(g in graph_strategy(6), sub_bits in any::<u32>(), pick in any::<u32>()) {
        prop_assume!(g.vertex_count() >= 2);
        let oracle = Oracle::default();
        let p = ListColoringProblem::with_full_lists(g.clone(), 3);
        let vs: Vec<VertexId> = g.vertices().collect();
        let sub: BTreeSet<VertexId> = vs
            .iter()
            .enumerate()
            .filter(|(i, _)| sub_bits & (1 << (i % 32)) != 0)
            .map(|(_, &v)| v)
            .collect();
        let outside: Vec<VertexId> = vs.iter().filter(|v| !sub.contains(v)).copied().collect();
        prop_assume!(!sub.is_empty() && !outside.is_empty());
        let v = outside[pick as usize % outside.len()];

        let before = oracle.enumerate_solutions(&p, None).unwrap();
        if let ForceOutcome::Forced(updates) = type1_force(&p, &sub, v, 10).unwrap() {
            let mut lists = p.lists.clone();
            lists.extend(updates);
            let after = ListColoringProblem::new(g.clone(), lists, 3).unwrap();
            prop_assert_eq!(oracle.enumerate_solutions(&after, None).unwrap(), before.clone());
        }

        // Reuse the same split for a type-2 attempt on the outside set.
        let vstar: BTreeSet<VertexId> = outside.into_iter().collect();
        if let ForceOutcome::Forced(updates) = type2_force(&p, &sub, &vstar, 10).unwrap() {
            let mut lists = p.lists.clone();
            lists.extend(updates);
            let after = ListColoringProblem::new(g.clone(), lists, 3).unwrap();
            prop_assert_eq!(oracle.enumerate_solutions(&after, None).unwrap(), before);
        }
    }

    /// Instance documents survive a serialize/parse round trip.
    #[test]
    fn instance_document_round_trip(g in graph_strategy(8), lists in proptest::bool::ANY) {
        let order = VertexOrder::by_id(&g);
        let list_map: Option<BTreeMap<VertexId, ColorSet>> = lists.then(|| {
            g.vertices().map(|v| (v, ColorSet::full(3))).collect()
        });
        let doc = io::instance_document(&g, Some(&order), list_map.as_ref(), None, None, Some(3));
        let text = io::to_json(&doc);
        let parsed = io::parse_instance(&text).unwrap();
        prop_assert_eq!(&parsed.graph, &g);
        let doc2 = io::instance_document(
            &parsed.graph,
            Some(&parsed.order),
            parsed.lists.as_ref(),
            None,
            None,
            parsed.palette,
        );
        prop_assert_eq!(io::to_json(&doc2), text);
    }

    /// Rule applications never grow a list (the shrink contract is also a
    /// hard assert inside the engine).
    #[test]
    fn engine_never_grows_lists(g in graph_strategy(6)) {
        let state_lists: BTreeMap<VertexId, ColorSet> =
            g.vertices().map(|v| (v, ColorSet::full(3))).collect();
        let order = VertexOrder::by_id(&g);
        let state = OrderedListGraph::new(g.clone(), order, state_lists, 3).unwrap();
        let rb = RuleBase::tucker(3).unwrap();
        let res = solve(&state, &rb, &SolveOptions::default()).unwrap();
        for (v, l) in &res.lists {
            prop_assert!(l.is_subset(state.lists[v]));
        }
    }
}

// Arbitrary list problems: the solver's surviving lists always contain
// every oracle solution's colors (no sound solution is ever forced out by
// the structural rules).
proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn structural_rules_keep_all_solutions(
        (g, lists) in graph_strategy(5).prop_flat_map(|g| {
            let lists = lists_strategy(&g, 3);
            (Just(g), lists)
        })
    ) {
        let oracle = Oracle::default();
        let problem = ListColoringProblem::new(g.clone(), lists.clone(), 3).unwrap();
        let sols = oracle.enumerate_solutions(&problem, None).unwrap().complete().unwrap();
        let order = VertexOrder::by_id(&g);
        let state = OrderedListGraph::new(g.clone(), order, lists, 3).unwrap();
        let rb = RuleBase::tucker(3).unwrap();
        let res = solve(&state, &rb, &SolveOptions::default()).unwrap();
        for sol in &sols {
            for (v, c) in sol {
                prop_assert!(
                    res.lists[v].contains(*c),
                    "solution color {c:?} of {v} was forced out"
                );
            }
        }
    }
}
