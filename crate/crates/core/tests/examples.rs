//! Worked examples beyond the acceptance criteria: the forcing operations
//! on the eight-vertex example graph, closure behavior on the spine
//! gadgets, the disjoint-split lower-bound certificate, and the
//! coloring-existence decisions.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::*;

use seqcol::engine::{
    coloring_closure, is_solvable, lists_from_defining_set, local_update, OrderedListGraph,
    Rounds,
};
use seqcol::gadgets::{build_d, reduce_3col, ReductionMode};
use seqcol::graph::{Color, ColorSet, Coloring, Graph, VertexId, VertexOrder};
use seqcol::oracle::ListColoringProblem;
use seqcol::rulebase::{type1_force, type2_force, ForceOutcome, RuleBase, DEFAULT_FORCE_CAP};
use seqcol::sds::{
    exists_coloring_with_sdn_le, verify_sds, wsdn, ColoringSearchOutcome, SdsMode, SdsQuery,
    SearchOptions, SearchOutcome,
};

fn set(colors: &[u32]) -> ColorSet {
    colors.iter().map(|&c| Color(c)).collect()
}

/// The list state of the example graph after seeding the first three
/// vertices (and optionally the fourth) and applying edge exclusion once.
fn figure1_lists(seed_v4: bool) -> (Graph, BTreeMap<VertexId, ColorSet>) {
    let inst = figure1();
    let mut lists: BTreeMap<VertexId, ColorSet> = [
        (vid(1), set(&[1])),
        (vid(2), set(&[2])),
        (vid(3), set(&[3])),
        (vid(4), set(&[1, 2, 3])),
        (vid(5), set(&[2, 3])),
        (vid(6), set(&[1, 2, 3])),
        (vid(7), set(&[1, 2, 3])),
        (vid(8), set(&[1, 2])),
    ]
    .into();
    if seed_v4 {
        lists.insert(vid(4), set(&[1]));
        lists.insert(vid(6), set(&[2, 3]));
    }
    (inst.graph, lists)
}

#[test]
fn type1_forcing_on_figure1() {
    // With vertices 5 and 6 confined to {2, 3}, the pair forces vertex 7
    // down to {1}.
    let (g, lists) = figure1_lists(true);
    let p = ListColoringProblem::new(g, lists, 3).unwrap();
    let out = type1_force(&p, &[vid(5), vid(6)].into(), vid(7), DEFAULT_FORCE_CAP).unwrap();
    assert_eq!(out, ForceOutcome::Forced([(vid(7), set(&[1]))].into()));
}

#[test]
fn type2_forcing_on_figure1() {
    // Vertices 5 and 8 share a color in every completion over the block
    // {5, 6, 7, 8}; both lists collapse to the intersection {2}.
    let (g, lists) = figure1_lists(false);
    let p = ListColoringProblem::new(g, lists, 3).unwrap();
    let out = type2_force(
        &p,
        &[vid(6), vid(7)].into(),
        &[vid(5), vid(8)].into(),
        DEFAULT_FORCE_CAP,
    )
    .unwrap();
    assert_eq!(
        out,
        ForceOutcome::Forced([(vid(5), set(&[2])), (vid(8), set(&[2]))].into())
    );
}

#[test]
fn local_update_forces_v7_on_figure1() {
    // One visit of vertex 7 suffices once 5 and 6 hold {2, 3}: the triangle
    // rule subtracts their union.
    let (g, lists) = figure1_lists(true);
    let order = VertexOrder::by_id(&g);
    let state = OrderedListGraph::new(g, order, lists, 3).unwrap();
    let rb = RuleBase::tucker(3).unwrap();
    let (list, done, col) = local_update(&state, vid(7), &rb).unwrap();
    assert_eq!(list, set(&[1]));
    assert!(done && col);
}

#[test]
fn spine_gadget_needs_its_terminal_vertex() {
    // The terminal vertex is in every defining set: seeding it alone
    // decides nothing else, and no small seed set avoiding it works.
    let d2 = build_d(2).unwrap();
    let rb = RuleBase::tucker(3).unwrap();
    let v = d2.vertex("v").unwrap();

    let cc = coloring_closure(
        &[v].into(),
        d2.graph(),
        &d2.order,
        &d2.coloring,
        &rb,
        Rounds::Unbounded,
    )
    .unwrap();
    assert_eq!(cc.vertices, BTreeSet::from([v]));

    let q = SdsQuery::new(d2.graph(), &d2.order, &d2.coloring, &rb, Rounds::Finite(2)).unwrap();
    let others: Vec<VertexId> = d2.graph().vertices().filter(|&u| u != v).collect();
    // Exhaustive over all seed sets of size at most 3 avoiding the
    // terminal vertex.
    for mask in 0u32..(1 << others.len()) {
        if mask.count_ones() > 3 {
            continue;
        }
        let a: BTreeSet<VertexId> = others
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &u)| u)
            .collect();
        assert!(
            verify_sds(&q, &a).unwrap().is_none(),
            "{a:?} avoids the terminal vertex yet verifies"
        );
    }
}

#[test]
fn spine_gadget_round_budgets() {
    // Interface seeding solves in exactly k rounds: strictly fewer is
    // impossible, one more than k as a strict bound succeeds.
    for k in 1..=3u32 {
        let d = build_d(k).unwrap();
        let a = d.vertices_of(&["u", "v"]).unwrap();
        let lists = lists_from_defining_set(d.graph(), &d.coloring, &a).unwrap();
        let state =
            OrderedListGraph::new(d.graph().clone(), d.order.clone(), lists, 3).unwrap();
        let rb = RuleBase::tucker(3).unwrap();
        assert!(is_solvable(&state, &rb, Rounds::Finite(k + 1)).unwrap());
        assert!(!is_solvable(&state, &rb, Rounds::Finite(k)).unwrap());
        assert!(is_solvable(&state, &rb, Rounds::Unbounded).unwrap());
    }
}

#[test]
fn hub_seed_closure_covers_the_next_gadget() {
    // Adding the first chain vertex to the interface seeds turns the
    // (k+1)-round spine into a one-round instance.
    let d2 = build_d(2).unwrap();
    let rb = RuleBase::tucker(3).unwrap();
    let a = d2.vertices_of(&["u", "v", "x_1"]).unwrap();
    let cc = coloring_closure(
        &a,
        d2.graph(),
        &d2.order,
        &d2.coloring,
        &rb,
        Rounds::Finite(1),
    )
    .unwrap();
    assert!(cc.is_whole(d2.graph()));
}

/// Disjoint-split lower bound: when the graph is two independent parts and
/// the closure from either part's own minimum defining set leaves the other
/// part undecided, the whole graph's weak number strictly exceeds both
/// parts' numbers.
#[test]
fn disjoint_split_certificate() {
    let rb = RuleBase::tucker(3).unwrap();
    let k = Rounds::Finite(2);

    // Part 1: the 7-vertex spine gadget. Part 2: a triangle, shifted ids.
    let d2 = build_d(2).unwrap();
    let mut g = d2.graph().clone();
    let shift = 100;
    for i in 1..=3u32 {
        g.add_vertex(vid(shift + i));
    }
    g.add_edge(vid(101), vid(102)).unwrap();
    g.add_edge(vid(102), vid(103)).unwrap();
    g.add_edge(vid(101), vid(103)).unwrap();

    let mut rank: BTreeMap<VertexId, u32> = d2.order.iter().collect();
    let n1 = rank.len() as u32;
    for i in 1..=3u32 {
        rank.insert(vid(shift + i), n1 + i);
    }
    let order = VertexOrder::new(&g, rank).unwrap();
    let mut assign: BTreeMap<VertexId, Color> = d2.coloring.iter().collect();
    assign.extend([(vid(101), Color(1)), (vid(102), Color(2)), (vid(103), Color(3))]);
    let gamma = Coloring::new(&g, assign, 3).unwrap();

    let q = SdsQuery::new(&g, &order, &gamma, &rb, k).unwrap();
    let part1: BTreeSet<VertexId> = d2.graph().vertex_set();
    let part2: BTreeSet<VertexId> = (1..=3).map(|i| vid(shift + i)).collect();

    // Part-local minima (computed on the parts as standalone instances).
    let q1 = SdsQuery::new(d2.graph(), &d2.order, &d2.coloring, &rb, k).unwrap();
    let (w1, witness1) = match wsdn(&q1, &SearchOptions::default()).unwrap() {
        SearchOutcome::Found { number, witness, .. } => (number, witness),
        other => panic!("{other:?}"),
    };
    let tri = Graph::complete(&[vid(101), vid(102), vid(103)]);
    let tri_order = order.induced(&part2);
    let tri_gamma = gamma.induced(&part2);
    let q2 = SdsQuery::new(&tri, &tri_order, &tri_gamma, &rb, k).unwrap();
    let (w2, witness2) = match wsdn(&q2, &SearchOptions::default()).unwrap() {
        SearchOutcome::Found { number, witness, .. } => (number, witness),
        other => panic!("{other:?}"),
    };

    // The certificate: either part's witness leaves the other part dark.
    for witness in [&witness1, &witness2] {
        let cc = coloring_closure(&witness.set, &g, &order, &gamma, &rb, k).unwrap();
        assert!(!cc.is_whole(&g));
    }

    // And indeed the whole graph needs strictly more seeds than either part.
    let (w, _) = match wsdn(&q, &SearchOptions::default()).unwrap() {
        SearchOutcome::Found { number, witness, .. } => (number, witness),
        other => panic!("{other:?}"),
    };
    assert!(w > w1.max(w2), "whole {w} vs parts {w1}, {w2}");
    assert_eq!(w, w1 + w2);
    let _ = part1;
}

#[test]
fn coloring_existence_on_the_triangle_reduction() {
    // The weak-mode instance built from the triangle admits a coloring
    // whose defining sets within one round are as small as the base size.
    let triangle = Graph::complete(&[vid(1), vid(2), vid(3)]);
    let order = VertexOrder::by_id(&triangle);
    let out = reduce_3col(&triangle, &order, 1, ReductionMode::Weak, None).unwrap();
    let rb = RuleBase::tucker(3).unwrap();
    let outcome = exists_coloring_with_sdn_le(
        out.graph(),
        &out.order,
        &rb,
        Rounds::Finite(1),
        3,
        SdsMode::Weak,
        &SearchOptions::default(),
    )
    .unwrap();
    match outcome {
        ColoringSearchOutcome::Yes { witness, .. } => {
            assert!(witness.set.len() <= 3);
            assert_eq!(witness.rounds, 1);
        }
        other => panic!("expected a yes-instance, got {other:?}"),
    }
}

/// The checked-in fuzz corpus stays parseable: every seed must exercise the
/// happy path of its parser.
#[test]
fn fuzz_corpus_seeds_parse() {
    let corpus = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus");
    let read_dir = |name: &str| {
        let mut files: Vec<_> = std::fs::read_dir(corpus.join(name))
            .unwrap_or_else(|e| panic!("corpus dir {name}: {e}"))
            .map(|f| f.unwrap().path())
            .collect();
        files.sort();
        assert!(!files.is_empty(), "no seeds for {name}");
        files
    };
    for path in read_dir("instance_json") {
        let text = std::fs::read_to_string(&path).unwrap();
        seqcol::io::parse_instance(&text).unwrap_or_else(|e| panic!("{path:?}: {e}"));
    }
    for path in read_dir("rulebase_json") {
        let text = std::fs::read_to_string(&path).unwrap();
        seqcol::io::parse_rulebase(&text).unwrap_or_else(|e| panic!("{path:?}: {e}"));
    }
    for path in read_dir("witness_json") {
        let text = std::fs::read_to_string(&path).unwrap();
        seqcol::io::parse_witness(&text).unwrap_or_else(|e| panic!("{path:?}: {e}"));
    }
    for path in read_dir("transverse_json") {
        let text = std::fs::read_to_string(&path).unwrap();
        seqcol::io::parse_transverse(&text).unwrap_or_else(|e| panic!("{path:?}: {e}"));
    }
}

#[test]
fn strong_reduction_certificate_meets_its_bound() {
    // Strong mode: seeding the whole base solves in exactly k rounds, so
    // the certificate's index equals n + k - 1.
    let triangle = Graph::complete(&[vid(1), vid(2), vid(3)]);
    let order = VertexOrder::by_id(&triangle);
    let gamma = Coloring::new(
        &triangle,
        [(vid(1), Color(1)), (vid(2), Color(2)), (vid(3), Color(3))].into(),
        3,
    )
    .unwrap();
    let k = 2;
    let out = reduce_3col(&triangle, &order, k, ReductionMode::Strong, Some(&gamma)).unwrap();
    assert_eq!(out.bound, 3 + k - 1);
    let cert = out.certificate.clone().unwrap();
    let coloring = out.coloring.clone().unwrap();
    let rb = RuleBase::tucker(3).unwrap();
    let q = SdsQuery::new(out.graph(), &out.order, &coloring, &rb, Rounds::Finite(k)).unwrap();
    let w = verify_sds(&q, &cert).unwrap().expect("certificate verifies");
    assert_eq!(w.rounds, k);
    assert_eq!(w.index, out.bound);
}
