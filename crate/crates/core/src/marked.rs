//! Marked graphs and the amalgam (push-out) construction.
//!
//! A marked graph carries an injective map from label strings to vertices.
//! The amalgam of two marked graphs is their disjoint union with vertices
//! carrying the same label identified; n-ary sums are folds of the binary
//! operation. All gadget families are written as sums of marked edges and
//! triangles.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::graph::{Graph, VertexId};

pub type Label = String;

/// A graph together with an injective labelling of some of its vertices.
///
/// Labels keep their insertion order; that order is the canonical label
/// order used when embeddings are sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedGraph {
    graph: Graph,
    label_order: Vec<Label>,
    by_label: BTreeMap<Label, VertexId>,
}

impl MarkedGraph {
    pub fn new(
        graph: Graph,
        marks: impl IntoIterator<Item = (Label, VertexId)>,
    ) -> Result<MarkedGraph, Error> {
        let mut label_order = Vec::new();
        let mut by_label = BTreeMap::new();
        let mut used = BTreeMap::new();
        for (l, v) in marks {
            if !graph.has_vertex(v) {
                return Err(Error::InvalidMarks(format!("label {l:?} marks unknown vertex {v}")));
            }
            if let Some(prev) = used.insert(v, l.clone()) {
                return Err(Error::InvalidMarks(format!(
                    "labels {prev:?} and {l:?} mark the same vertex {v}"
                )));
            }
            if by_label.insert(l.clone(), v).is_some() {
                return Err(Error::InvalidMarks(format!("duplicate label {l:?}")));
            }
            label_order.push(l);
        }
        Ok(MarkedGraph {
            graph,
            label_order,
            by_label,
        })
    }

    pub fn unmarked(graph: Graph) -> MarkedGraph {
        MarkedGraph {
            graph,
            label_order: Vec::new(),
            by_label: BTreeMap::new(),
        }
    }

    /// A clique on fresh vertices `0..labels.len()`, marked by `labels`.
    pub fn clique(labels: &[&str]) -> MarkedGraph {
        let ids: Vec<VertexId> = (0..labels.len() as u32).map(VertexId).collect();
        let graph = Graph::complete(&ids);
        MarkedGraph::new(
            graph,
            labels.iter().map(|l| l.to_string()).zip(ids),
        )
        .expect("fresh clique marks are injective")
    }

    /// A single marked edge.
    pub fn edge(a: &str, b: &str) -> MarkedGraph {
        MarkedGraph::clique(&[a, b])
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn labels(&self) -> &[Label] {
        &self.label_order
    }

    pub fn vertex_of(&self, label: &str) -> Option<VertexId> {
        self.by_label.get(label).copied()
    }

    pub fn label_of(&self, v: VertexId) -> Option<&Label> {
        self.label_order.iter().find(|l| self.by_label[*l] == v)
    }

    pub fn marks(&self) -> impl Iterator<Item = (&Label, VertexId)> + '_ {
        self.label_order.iter().map(|l| (l, self.by_label[l]))
    }

    pub fn is_fully_marked(&self) -> bool {
        self.label_order.len() == self.graph.vertex_count()
    }

    /// Renames every label through `f`. The renaming must stay injective.
    pub fn relabel(&self, mut f: impl FnMut(&str) -> String) -> Result<MarkedGraph, Error> {
        MarkedGraph::new(
            self.graph.clone(),
            self.label_order
                .iter()
                .map(|l| (f(l), self.by_label[l]))
                .collect::<Vec<_>>(),
        )
    }

    /// Disjoint union followed by identification of equally-labelled
    /// vertices. Result vertices are renumbered from 0; marks are the union
    /// of both mark sets (left labels first).
    pub fn amalgam(&self, other: &MarkedGraph) -> MarkedGraph {
        let mut graph = Graph::new();
        let mut next = 0u32;
        let mut fresh = || {
            let id = VertexId(next);
            next += 1;
            id
        };

        let mut left_map: BTreeMap<VertexId, VertexId> = BTreeMap::new();
        for v in self.graph.vertices() {
            let nv = fresh();
            left_map.insert(v, nv);
            graph.add_vertex(nv);
        }

        let mut right_map: BTreeMap<VertexId, VertexId> = BTreeMap::new();
        // Shared labels identify right vertices with their left images.
        for l in &other.label_order {
            if let Some(&lv) = self.by_label.get(l) {
                right_map.insert(other.by_label[l], left_map[&lv]);
            }
        }
        for v in other.graph.vertices() {
            if !right_map.contains_key(&v) {
                let nv = fresh();
                right_map.insert(v, nv);
                graph.add_vertex(nv);
            }
        }

        for (u, v) in self.graph.edges() {
            graph
                .add_edge(left_map[&u], left_map[&v])
                .expect("left edges have distinct endpoints");
        }
        for (u, v) in other.graph.edges() {
            // Identification can only merge equally-labelled vertices, and
            // labels are injective per side, so no edge collapses to a loop.
            graph
                .add_edge(right_map[&u], right_map[&v])
                .expect("identification never merges edge endpoints");
        }

        let mut marks: Vec<(Label, VertexId)> = Vec::new();
        for l in &self.label_order {
            marks.push((l.clone(), left_map[&self.by_label[l]]));
        }
        for l in &other.label_order {
            if !self.by_label.contains_key(l) {
                marks.push((l.clone(), right_map[&other.by_label[l]]));
            }
        }
        MarkedGraph::new(graph, marks).expect("amalgam marks stay injective")
    }

    /// Folds [`MarkedGraph::amalgam`] over a nonempty sequence of parts.
    pub fn sum(parts: impl IntoIterator<Item = MarkedGraph>) -> Option<MarkedGraph> {
        let mut iter = parts.into_iter();
        let first = iter.next()?;
        Some(iter.fold(first, |acc, part| acc.amalgam(&part)))
    }
}
