//! Shared helpers for the integration suites.

#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use seqcol::graph::{Color, Coloring, Graph, VertexId, VertexOrder};
use seqcol::io;
use seqcol::oracle::{ListColoringProblem, Oracle};

pub fn vid(i: u32) -> VertexId {
    VertexId(i)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The eight-vertex working example graph, loaded from its JSON fixture
/// (also the parser's canonical corpus seed).
pub fn figure1() -> io::Instance {
    io::parse_instance(include_str!("../fixtures/figure1.json")).expect("fixture parses")
}

/// Erdos-Renyi style random graph on `n` vertices with edge probability `p`.
pub fn random_graph(rng: &mut ChaCha8Rng, n: u32, p: f64) -> Graph {
    let mut g = Graph::new();
    for i in 1..=n {
        g.add_vertex(vid(i));
    }
    for i in 1..=n {
        for j in i + 1..=n {
            if rng.gen_bool(p) {
                g.add_edge(vid(i), vid(j)).unwrap();
            }
        }
    }
    g
}

/// A uniformly random proper `t`-coloring, drawn from the oracle's full
/// enumeration; `None` when the graph is not `t`-colorable.
pub fn random_proper_coloring(
    oracle: &Oracle,
    g: &Graph,
    t: u32,
    rng: &mut ChaCha8Rng,
) -> Option<Coloring> {
    let p = ListColoringProblem::with_full_lists(g.clone(), t);
    let sols = oracle
        .enumerate_solutions(&p, None)
        .expect("within cap")
        .complete()
        .expect("uncapped");
    if sols.is_empty() {
        return None;
    }
    let pick = rng.gen_range(0..sols.len());
    Some(Coloring::new(g, sols[pick].clone(), t).expect("solution is a coloring"))
}

/// A random bijective ordering.
pub fn random_order(g: &Graph, rng: &mut ChaCha8Rng) -> VertexOrder {
    let mut vs: Vec<VertexId> = g.vertices().collect();
    vs.shuffle(rng);
    VertexOrder::from_sequence(g, vs).expect("shuffled sequence is bijective")
}

/// Total assignment from a base map plus a default for missing vertices.
pub fn total_coloring(
    g: &Graph,
    base: &BTreeMap<VertexId, Color>,
    default: Color,
    palette: u32,
) -> Coloring {
    let assign = g
        .vertices()
        .map(|v| (v, base.get(&v).copied().unwrap_or(default)))
        .collect();
    Coloring::new(g, assign, palette).expect("total assignment")
}
