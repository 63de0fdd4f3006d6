//! Enumeration of pattern embeddings (subgraph monomorphisms).
//!
//! An embedding maps the pattern's vertices injectively into a restricted
//! region of the host so that every pattern edge lands on a host edge.
//! Matches are *not* required to be induced; rules that need non-adjacency
//! state it as an explicit side condition instead.

use std::collections::BTreeSet;

use crate::error::Error;
use crate::graph::{Graph, VertexId};
use crate::marked::{Label, MarkedGraph};

/// An injective map from a fully-marked pattern into a host graph, stored
/// as host vertices in the pattern's label order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    labels: Vec<Label>,
    image: Vec<VertexId>,
}

impl Embedding {
    pub fn image_of(&self, label: &str) -> Option<VertexId> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| self.image[i])
    }

    /// Host vertices in the pattern's label order.
    pub fn image(&self) -> &[VertexId] {
        &self.image
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }
}

/// Enumerates every embedding of `pattern` into `host` whose image lies in
/// `restricted`. The result is deterministic, duplicate-free, and sorted
/// lexicographically by the image tuple in the pattern's label order.
///
/// The pattern must be fully marked; labels name the tuple positions.
pub fn enumerate_embeddings(
    host: &Graph,
    restricted: &BTreeSet<VertexId>,
    pattern: &MarkedGraph,
) -> Result<Vec<Embedding>, Error> {
    enumerate_embeddings_pinned(host, restricted, pattern, &[])
}

/// Same as [`enumerate_embeddings`], with some pattern labels pinned to
/// fixed host vertices.
pub fn enumerate_embeddings_pinned(
    host: &Graph,
    restricted: &BTreeSet<VertexId>,
    pattern: &MarkedGraph,
    pins: &[(&str, VertexId)],
) -> Result<Vec<Embedding>, Error> {
    if !pattern.is_fully_marked() {
        return Err(Error::InvalidMarks(
            "embedding patterns must be fully marked".into(),
        ));
    }
    if let Some(&v) = restricted.iter().find(|v| !host.has_vertex(**v)) {
        return Err(Error::MissingVertex(v));
    }

    let labels: Vec<Label> = pattern.labels().to_vec();
    let p = labels.len();
    let pat_ids: Vec<VertexId> = labels
        .iter()
        .map(|l| pattern.vertex_of(l).expect("fully marked"))
        .collect();
    // Pattern adjacency between label positions.
    let pat_adj: Vec<Vec<usize>> = (0..p)
        .map(|i| {
            (0..p)
                .filter(|&j| j != i && pattern.graph().has_edge(pat_ids[i], pat_ids[j]))
                .collect()
        })
        .collect();

    let mut assignment: Vec<Option<VertexId>> = vec![None; p];
    for (l, v) in pins {
        let Some(i) = labels.iter().position(|x| x == l) else {
            return Err(Error::InvalidMarks(format!("pin for unknown label {l:?}")));
        };
        if !restricted.contains(v) {
            return Ok(Vec::new());
        }
        assignment[i] = Some(*v);
    }
    if has_duplicates(&assignment) {
        return Ok(Vec::new());
    }

    // Static search order: repeatedly pick the unassigned position with the
    // most already-ordered neighbors, so candidate sets stay small.
    let mut order: Vec<usize> = Vec::with_capacity(p);
    let mut placed: Vec<bool> = assignment.iter().map(|a| a.is_some()).collect();
    for (i, pre) in placed.iter().enumerate() {
        if *pre {
            order.push(i);
        }
    }
    while order.len() < p {
        let next = (0..p)
            .filter(|&i| !placed[i])
            .max_by_key(|&i| {
                let known = pat_adj[i].iter().filter(|&&j| placed[j]).count();
                // Ties broken toward earlier label positions (stable order).
                (known, usize::MAX - i)
            })
            .expect("some position unassigned");
        placed[next] = true;
        order.push(next);
    }

    let mut out = Vec::new();
    search(
        host,
        restricted,
        &pat_adj,
        &order,
        pins.len(),
        &mut assignment,
        &mut out,
        &labels,
    );
    out.sort_by(|a, b| a.image.cmp(&b.image));
    Ok(out)
}

fn has_duplicates(assignment: &[Option<VertexId>]) -> bool {
    let mut seen = BTreeSet::new();
    assignment
        .iter()
        .flatten()
        .any(|v| !seen.insert(*v))
}

#[allow(clippy::too_many_arguments)]
fn search(
    host: &Graph,
    restricted: &BTreeSet<VertexId>,
    pat_adj: &[Vec<usize>],
    order: &[usize],
    depth: usize,
    assignment: &mut Vec<Option<VertexId>>,
    out: &mut Vec<Embedding>,
    labels: &[Label],
) {
    if depth == order.len() {
        out.push(Embedding {
            labels: labels.to_vec(),
            image: assignment.iter().map(|a| a.unwrap()).collect(),
        });
        return;
    }
    let pos = order[depth];
    let assigned_neighbors: Vec<VertexId> = pat_adj[pos]
        .iter()
        .filter_map(|&j| assignment[j])
        .collect();

    let candidates: Vec<VertexId> = match assigned_neighbors.split_first() {
        Some((&first, rest)) => host
            .neighbors(first)
            .filter(|v| restricted.contains(v))
            .filter(|&v| rest.iter().all(|&u| host.has_edge(u, v)))
            .collect(),
        None => restricted.iter().copied().collect(),
    };

    for v in candidates {
        if assignment.iter().flatten().any(|&u| u == v) {
            continue;
        }
        assignment[pos] = Some(v);
        search(host, restricted, pat_adj, order, depth + 1, assignment, out, labels);
        assignment[pos] = None;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vid(i: u32) -> VertexId {
        VertexId(i)
    }

    #[test]
    fn edge_into_triangle() {
        let host = Graph::complete(&[vid(1), vid(2), vid(3)]);
        let pat = MarkedGraph::edge("x_1", "x_2");
        let embs = enumerate_embeddings(&host, &host.vertex_set(), &pat).unwrap();
        // Ordered pairs of distinct vertices: 3 * 2.
        assert_eq!(embs.len(), 6);
        // Sorted by image tuple, no duplicates.
        let images: Vec<_> = embs.iter().map(|e| e.image().to_vec()).collect();
        let mut sorted = images.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(images, sorted);
    }

    #[test]
    fn triangle_into_triangle_free_host() {
        let host = Graph::from_parts(
            [vid(1), vid(2), vid(3), vid(4)],
            [(vid(1), vid(2)), (vid(2), vid(3)), (vid(3), vid(4)), (vid(4), vid(1))],
        )
        .unwrap();
        let pat = MarkedGraph::clique(&["a", "b", "c"]);
        let embs = enumerate_embeddings(&host, &host.vertex_set(), &pat).unwrap();
        assert!(embs.is_empty());
    }

    #[test]
    fn triangle_into_triangle() {
        let host = Graph::complete(&[vid(1), vid(2), vid(3)]);
        let pat = MarkedGraph::clique(&["a", "b", "c"]);
        let embs = enumerate_embeddings(&host, &host.vertex_set(), &pat).unwrap();
        // 3! bijections.
        assert_eq!(embs.len(), 6);
    }

    #[test]
    fn non_induced_matching() {
        // A path pattern embeds into a triangle even though the endpoints
        // are adjacent in the host.
        let host = Graph::complete(&[vid(1), vid(2), vid(3)]);
        let pat = MarkedGraph::edge("u", "m").amalgam(&MarkedGraph::edge("m", "w"));
        let embs = enumerate_embeddings(&host, &host.vertex_set(), &pat).unwrap();
        assert_eq!(embs.len(), 6);
    }

    #[test]
    fn pins_fix_label_images() {
        let host = Graph::complete(&[vid(1), vid(2), vid(3)]);
        let pat = MarkedGraph::edge("x_1", "x_2");
        let embs =
            enumerate_embeddings_pinned(&host, &host.vertex_set(), &pat, &[("x_2", vid(3))])
                .unwrap();
        assert_eq!(embs.len(), 2);
        assert!(embs.iter().all(|e| e.image_of("x_2") == Some(vid(3))));
    }

    #[test]
    fn restriction_limits_images() {
        let host = Graph::complete(&[vid(1), vid(2), vid(3)]);
        let pat = MarkedGraph::edge("a", "b");
        let embs =
            enumerate_embeddings(&host, &[vid(1), vid(2)].into(), &pat).unwrap();
        assert_eq!(embs.len(), 2);
    }
}
