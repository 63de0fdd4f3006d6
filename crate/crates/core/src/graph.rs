//! Finite simple graphs, vertex orderings, colorings, and color sets.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Opaque vertex identifier.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A color from a palette `1..=t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Color(pub u32);

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A set of colors drawn from `1..=t`, stored as a bitmask.
///
/// Palettes are capped at 32 colors, far beyond anything the exhaustive
/// searches in this crate can reach.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ColorSet(u32);

impl ColorSet {
    pub const EMPTY: ColorSet = ColorSet(0);
    pub const MAX_PALETTE: u32 = 32;

    /// The full palette `{1..=t}`.
    pub fn full(t: u32) -> ColorSet {
        assert!(t <= Self::MAX_PALETTE, "palette too large");
        if t == 0 {
            ColorSet(0)
        } else {
            ColorSet(u32::MAX >> (32 - t))
        }
    }

    pub fn singleton(c: Color) -> ColorSet {
        let mut s = ColorSet::EMPTY;
        s.insert(c);
        s
    }

    pub fn insert(&mut self, c: Color) {
        assert!(c.0 >= 1 && c.0 <= Self::MAX_PALETTE, "color out of range");
        self.0 |= 1 << (c.0 - 1);
    }

    pub fn contains(self, c: Color) -> bool {
        c.0 >= 1 && c.0 <= Self::MAX_PALETTE && self.0 & (1 << (c.0 - 1)) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: ColorSet) -> ColorSet {
        ColorSet(self.0 | other.0)
    }

    pub fn intersect(self, other: ColorSet) -> ColorSet {
        ColorSet(self.0 & other.0)
    }

    pub fn minus(self, other: ColorSet) -> ColorSet {
        ColorSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: ColorSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Smallest color in the set.
    pub fn min(self) -> Option<Color> {
        if self.0 == 0 {
            None
        } else {
            Some(Color(self.0.trailing_zeros() + 1))
        }
    }

    /// The single member, if the set is a singleton.
    pub fn as_singleton(self) -> Option<Color> {
        if self.len() == 1 {
            self.min()
        } else {
            None
        }
    }

    pub fn iter(self) -> impl Iterator<Item = Color> {
        (1..=Self::MAX_PALETTE)
            .map(Color)
            .filter(move |&c| self.contains(c))
    }

    /// All subsets of the full palette `{1..=t}`, in ascending bitmask order.
    pub fn all_subsets(t: u32) -> impl Iterator<Item = ColorSet> {
        let full = Self::full(t).0;
        (0..=full).map(ColorSet).filter(move |s| s.0 & !full == 0)
    }
}

impl FromIterator<Color> for ColorSet {
    fn from_iter<T: IntoIterator<Item = Color>>(iter: T) -> Self {
        let mut s = ColorSet::EMPTY;
        for c in iter {
            s.insert(c);
        }
        s
    }
}

impl fmt::Debug for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|c| c.0)).finish()
    }
}

/// A finite simple undirected graph over opaque vertex ids.
///
/// No self-loops, no parallel edges; adjacency is kept symmetric by
/// construction. Iteration order over vertices and neighbors is the id
/// order, which keeps every algorithm in the crate deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
}

impl Graph {
    pub fn new() -> Graph {
        Graph::default()
    }

    /// Builds a graph from explicit vertex and edge lists.
    pub fn from_parts(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Graph, Error> {
        let mut g = Graph::new();
        for v in vertices {
            g.add_vertex(v);
        }
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Complete graph on the given vertices.
    pub fn complete(vertices: &[VertexId]) -> Graph {
        let mut g = Graph::new();
        for &v in vertices {
            g.add_vertex(v);
        }
        for (i, &u) in vertices.iter().enumerate() {
            for &v in &vertices[i + 1..] {
                g.add_edge(u, v).expect("complete graph has no self-loops");
            }
        }
        g
    }

    pub fn add_vertex(&mut self, v: VertexId) {
        self.adj.entry(v).or_default();
    }

    /// Inserts an (undirected) edge, adding missing endpoints.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<(), Error> {
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        self.adj.entry(u).or_default().insert(v);
        self.adj.entry(v).or_default().insert(u);
        Ok(())
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adj.get(&u).is_some_and(|ns| ns.contains(&v))
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(|ns| ns.len()).sum::<usize>() / 2
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.keys().copied()
    }

    pub fn vertex_set(&self) -> BTreeSet<VertexId> {
        self.adj.keys().copied().collect()
    }

    /// Edges as `(u, v)` pairs with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (&u, ns) in &self.adj {
            for &v in ns.range(u..) {
                if v > u {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.get(&v).into_iter().flatten().copied()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj.get(&v).map_or(0, |ns| ns.len())
    }

    /// Vertex-induced subgraph on `a`. Rejects sets with vertices outside
    /// the graph.
    pub fn induced_subgraph(&self, a: &BTreeSet<VertexId>) -> Result<Graph, Error> {
        if let Some(&v) = a.iter().find(|v| !self.has_vertex(**v)) {
            return Err(Error::MissingVertex(v));
        }
        let mut g = Graph::new();
        for &v in a {
            g.add_vertex(v);
            for u in self.neighbors(v) {
                if u > v && a.contains(&u) {
                    g.add_edge(v, u)?;
                }
            }
        }
        Ok(g)
    }

    /// All vertices at distance at most `d` from `v` (BFS).
    pub fn ball(&self, v: VertexId, d: u32) -> Result<BTreeSet<VertexId>, Error> {
        if !self.has_vertex(v) {
            return Err(Error::MissingVertex(v));
        }
        let mut seen: BTreeSet<VertexId> = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(v);
        queue.push_back((v, 0u32));
        while let Some((u, dist)) = queue.pop_front() {
            if dist == d {
                continue;
            }
            for w in self.neighbors(u) {
                if seen.insert(w) {
                    queue.push_back((w, dist + 1));
                }
            }
        }
        Ok(seen)
    }

    /// Is `a` a clique in the graph?
    pub fn is_clique(&self, a: &BTreeSet<VertexId>) -> bool {
        let vs: Vec<_> = a.iter().copied().collect();
        for (i, &u) in vs.iter().enumerate() {
            for &v in &vs[i + 1..] {
                if !self.has_edge(u, v) {
                    return false;
                }
            }
        }
        true
    }

    /// Largest distance between any two pattern vertices; `None` when the
    /// graph is disconnected or empty.
    pub fn diameter(&self) -> Option<u32> {
        let n = self.vertex_count();
        if n == 0 {
            return None;
        }
        let mut best = 0u32;
        for v in self.vertices() {
            // BFS distances from v.
            let mut dist: BTreeMap<VertexId, u32> = BTreeMap::new();
            dist.insert(v, 0);
            let mut queue = VecDeque::from([v]);
            while let Some(u) = queue.pop_front() {
                let du = dist[&u];
                for w in self.neighbors(u) {
                    if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(w) {
                        e.insert(du + 1);
                        queue.push_back(w);
                    }
                }
            }
            if dist.len() < n {
                return None;
            }
            best = best.max(dist.values().copied().max().unwrap_or(0));
        }
        Some(best)
    }
}

/// A bijective ranking of a graph's vertices onto `1..=n`; fixes the scan
/// order of the sequential solver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexOrder {
    rank: BTreeMap<VertexId, u32>,
}

impl VertexOrder {
    /// Validates that `rank` is a bijection from the graph's vertex set onto
    /// `1..=n`.
    pub fn new(graph: &Graph, rank: BTreeMap<VertexId, u32>) -> Result<VertexOrder, Error> {
        let n = graph.vertex_count() as u32;
        if rank.len() != n as usize {
            return Err(Error::InvalidOrdering(format!(
                "expected {} ranks, got {}",
                n,
                rank.len()
            )));
        }
        let mut seen = vec![false; n as usize];
        for (&v, &r) in &rank {
            if !graph.has_vertex(v) {
                return Err(Error::InvalidOrdering(format!("rank given for unknown vertex {v}")));
            }
            if r < 1 || r > n {
                return Err(Error::InvalidOrdering(format!("rank {r} of {v} out of 1..={n}")));
            }
            if seen[(r - 1) as usize] {
                return Err(Error::InvalidOrdering(format!("duplicate rank {r}")));
            }
            seen[(r - 1) as usize] = true;
        }
        Ok(VertexOrder { rank })
    }

    /// Ranks vertices by ascending id.
    pub fn by_id(graph: &Graph) -> VertexOrder {
        let rank = graph
            .vertices()
            .enumerate()
            .map(|(i, v)| (v, i as u32 + 1))
            .collect();
        VertexOrder { rank }
    }

    /// Ranks vertices in the order of the supplied sequence.
    pub fn from_sequence(
        graph: &Graph,
        seq: impl IntoIterator<Item = VertexId>,
    ) -> Result<VertexOrder, Error> {
        let rank = seq
            .into_iter()
            .enumerate()
            .map(|(i, v)| (v, i as u32 + 1))
            .collect();
        VertexOrder::new(graph, rank)
    }

    pub fn rank(&self, v: VertexId) -> Option<u32> {
        self.rank.get(&v).copied()
    }

    pub fn len(&self) -> usize {
        self.rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank.is_empty()
    }

    /// Vertices sorted by ascending rank.
    pub fn by_rank(&self) -> Vec<VertexId> {
        let mut vs: Vec<_> = self.rank.iter().map(|(&v, &r)| (r, v)).collect();
        vs.sort();
        vs.into_iter().map(|(_, v)| v).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, u32)> + '_ {
        self.rank.iter().map(|(&v, &r)| (v, r))
    }

    /// Restriction to a vertex subset, with ranks compacted to `1..=|a|`
    /// preserving relative order.
    pub fn induced(&self, a: &BTreeSet<VertexId>) -> VertexOrder {
        let mut vs: Vec<_> = a
            .iter()
            .filter_map(|&v| self.rank(v).map(|r| (r, v)))
            .collect();
        vs.sort();
        let rank = vs
            .into_iter()
            .enumerate()
            .map(|(i, (_, v))| (v, i as u32 + 1))
            .collect();
        VertexOrder { rank }
    }
}

/// A total color assignment on a vertex set, with palette `1..=t`.
///
/// Properness is *not* an invariant: improper assignments are legal inputs
/// in several places (they drive the negative reduction checks), so the
/// check is an explicit operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    assign: BTreeMap<VertexId, Color>,
    palette: u32,
}

impl Coloring {
    pub fn new(
        graph: &Graph,
        assign: BTreeMap<VertexId, Color>,
        palette: u32,
    ) -> Result<Coloring, Error> {
        for v in graph.vertices() {
            match assign.get(&v) {
                None => {
                    return Err(Error::InvalidColoring(format!("vertex {v} is uncolored")));
                }
                Some(c) if c.0 < 1 || c.0 > palette => {
                    return Err(Error::InvalidColoring(format!(
                        "color {c} of {v} outside palette 1..={palette}"
                    )));
                }
                _ => {}
            }
        }
        if assign.len() != graph.vertex_count() {
            return Err(Error::InvalidColoring(
                "coloring mentions vertices outside the graph".into(),
            ));
        }
        Ok(Coloring { assign, palette })
    }

    pub fn get(&self, v: VertexId) -> Option<Color> {
        self.assign.get(&v).copied()
    }

    pub fn palette(&self) -> u32 {
        self.palette
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, Color)> + '_ {
        self.assign.iter().map(|(&v, &c)| (v, c))
    }

    pub fn len(&self) -> usize {
        self.assign.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assign.is_empty()
    }

    /// Checks `γ(u) ≠ γ(v)` over every edge.
    pub fn is_proper(&self, graph: &Graph) -> bool {
        graph
            .edges()
            .iter()
            .all(|&(u, v)| self.assign.get(&u) != self.assign.get(&v))
    }

    /// The partition into nonempty color classes, forgetting color names.
    pub fn classes(&self) -> BTreeSet<BTreeSet<VertexId>> {
        let mut by_color: BTreeMap<Color, BTreeSet<VertexId>> = BTreeMap::new();
        for (&v, &c) in &self.assign {
            by_color.entry(c).or_default().insert(v);
        }
        by_color.into_values().collect()
    }

    /// Restriction to a subset of the vertices.
    pub fn induced(&self, a: &BTreeSet<VertexId>) -> Coloring {
        Coloring {
            assign: self
                .assign
                .iter()
                .filter(|(v, _)| a.contains(v))
                .map(|(&v, &c)| (v, c))
                .collect(),
            palette: self.palette,
        }
    }
}
