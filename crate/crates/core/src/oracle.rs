//! Brute-force ground truth: list-coloring enumeration, unique
//! colorability, chromatic and clique numbers, and transverse systems.
//!
//! Everything here enumerates; nothing consults the rule engine. That
//! independence is the point: engine behavior is audited against these
//! routines.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::Error;
use crate::graph::{Color, ColorSet, Graph, VertexId};

/// Default vertex cap for full enumeration; 3^14 assignments with pruning
/// stays interactive.
pub const DEFAULT_ORACLE_CAP: usize = 14;

/// Enumeration limits. `max_vertices` bounds instance size; callers can
/// additionally cap the number of solutions collected.
#[derive(Debug, Clone, Copy)]
pub struct Oracle {
    pub max_vertices: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            max_vertices: DEFAULT_ORACLE_CAP,
        }
    }
}

/// A list coloring instance: find proper colorings with each vertex colored
/// from its own list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ListColoringProblem {
    pub graph: Graph,
    pub lists: BTreeMap<VertexId, ColorSet>,
    pub palette: u32,
}

impl ListColoringProblem {
    pub fn new(
        graph: Graph,
        lists: BTreeMap<VertexId, ColorSet>,
        palette: u32,
    ) -> Result<ListColoringProblem, Error> {
        let full = ColorSet::full(palette);
        for v in graph.vertices() {
            match lists.get(&v) {
                None => {
                    return Err(Error::InvalidColoring(format!("vertex {v} has no list")));
                }
                Some(l) if !l.is_subset(full) => {
                    return Err(Error::InvalidColoring(format!(
                        "list of {v} leaves the palette 1..={palette}"
                    )));
                }
                _ => {}
            }
        }
        if lists.len() != graph.vertex_count() {
            return Err(Error::InvalidColoring(
                "lists mention vertices outside the graph".into(),
            ));
        }
        Ok(ListColoringProblem {
            graph,
            lists,
            palette,
        })
    }

    /// All lists equal to the full palette.
    pub fn with_full_lists(graph: Graph, palette: u32) -> ListColoringProblem {
        let lists = graph
            .vertices()
            .map(|v| (v, ColorSet::full(palette)))
            .collect();
        ListColoringProblem {
            graph,
            lists,
            palette,
        }
    }
}

/// Result of a capped solution enumeration. Overflow is explicit; results
/// are never silently truncated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Enumeration {
    Complete(Vec<BTreeMap<VertexId, Color>>),
    Overflow { cap: usize },
}

impl Enumeration {
    pub fn complete(self) -> Option<Vec<BTreeMap<VertexId, Color>>> {
        match self {
            Enumeration::Complete(sols) => Some(sols),
            Enumeration::Overflow { .. } => None,
        }
    }
}

impl Oracle {
    pub fn new(max_vertices: usize) -> Oracle {
        Oracle { max_vertices }
    }

    fn check_cap(&self, g: &Graph) -> Result<(), Error> {
        if g.vertex_count() > self.max_vertices {
            return Err(Error::OracleCapExceeded {
                vertices: g.vertex_count(),
                cap: self.max_vertices,
            });
        }
        Ok(())
    }

    /// Enumerates every proper coloring respecting the lists, backtracking
    /// over vertices in ascending id order. Stops with an overflow marker
    /// once more than `cap` solutions are found.
    pub fn enumerate_solutions(
        &self,
        p: &ListColoringProblem,
        cap: Option<usize>,
    ) -> Result<Enumeration, Error> {
        self.check_cap(&p.graph)?;
        let vertices: Vec<VertexId> = p.graph.vertices().collect();
        let mut assign: BTreeMap<VertexId, Color> = BTreeMap::new();
        let mut out = Vec::new();
        let overflowed = backtrack(&p.graph, &p.lists, &vertices, 0, &mut assign, &mut out, cap);
        if overflowed {
            Ok(Enumeration::Overflow { cap: cap.unwrap_or(usize::MAX) })
        } else {
            Ok(Enumeration::Complete(out))
        }
    }

    /// Exact number of solutions (no cap).
    pub fn count_solutions(&self, p: &ListColoringProblem) -> Result<usize, Error> {
        match self.enumerate_solutions(p, None)? {
            Enumeration::Complete(sols) => Ok(sols.len()),
            Enumeration::Overflow { .. } => unreachable!("uncapped enumeration cannot overflow"),
        }
    }

    /// Does the list problem have exactly one solution?
    pub fn is_uniquely_list_colorable(&self, p: &ListColoringProblem) -> Result<bool, Error> {
        Ok(self.solution_count_capped(p, 2)? == Some(1))
    }

    /// Counts solutions up to `cap + 1`; `None` means more than `cap`.
    fn solution_count_capped(
        &self,
        p: &ListColoringProblem,
        cap: usize,
    ) -> Result<Option<usize>, Error> {
        match self.enumerate_solutions(p, Some(cap))? {
            Enumeration::Complete(sols) => Ok(Some(sols.len())),
            Enumeration::Overflow { .. } => Ok(None),
        }
    }

    /// The partition into color classes when it is the same across all
    /// solutions; `None` when there are no solutions or the classes vary.
    pub fn fixed_partition(
        &self,
        p: &ListColoringProblem,
    ) -> Result<Option<BTreeSet<BTreeSet<VertexId>>>, Error> {
        let sols = self
            .enumerate_solutions(p, None)?
            .complete()
            .expect("uncapped");
        let mut iter = sols.iter().map(|s| partition_of(s));
        let Some(first) = iter.next() else {
            return Ok(None);
        };
        for part in iter {
            if part != first {
                return Ok(None);
            }
        }
        Ok(Some(first))
    }

    /// Unique t-colorability up to permutation of colors: the color classes
    /// are fixed across all proper t-colorings.
    pub fn is_ucg(&self, g: &Graph, t: u32) -> Result<bool, Error> {
        let p = ListColoringProblem::with_full_lists(g.clone(), t);
        Ok(self.fixed_partition(&p)?.is_some())
    }

    /// Exact chromatic number by iterative deepening over the palette.
    pub fn chromatic_number(&self, g: &Graph) -> Result<u32, Error> {
        self.check_cap(g)?;
        if g.vertex_count() == 0 {
            return Ok(0);
        }
        for t in 1..=g.vertex_count() as u32 {
            if self.has_proper_coloring(g, t) {
                return Ok(t);
            }
        }
        unreachable!("n colors always suffice")
    }

    fn has_proper_coloring(&self, g: &Graph, t: u32) -> bool {
        let vertices: Vec<VertexId> = g.vertices().collect();
        let mut assign = BTreeMap::new();
        // Symmetry break: a vertex may use at most one color beyond those
        // already in use.
        exists_coloring(g, &vertices, 0, t, 0, &mut assign)
    }

    /// Exact clique number.
    pub fn clique_number(&self, g: &Graph) -> Result<u32, Error> {
        self.check_cap(g)?;
        let vertices: Vec<VertexId> = g.vertices().collect();
        let mut best = 0usize;
        let mut current = Vec::new();
        clique_search(g, &vertices, 0, &mut current, &mut best);
        Ok(best as u32)
    }

    /// `(χ, cl)` in one call.
    pub fn chromatic_and_clique(&self, g: &Graph) -> Result<(u32, u32), Error> {
        Ok((self.chromatic_number(g)?, self.clique_number(g)?))
    }

    /// Checks the transverse-system conditions for a `(t-1)`-chromatic
    /// graph: every `(t-1)`-coloring is hit on all classes by every entry,
    /// and every surjective t-coloring is hit on all classes by some entry.
    pub fn check_transverse(
        &self,
        g: &Graph,
        f: &TransverseSystem,
        t: u32,
    ) -> Result<bool, Error> {
        self.check_cap(g)?;
        if t < 2 {
            return Err(Error::InvalidParameter("transverse systems need t >= 2".into()));
        }
        if self.chromatic_number(g)? != t - 1 {
            return Err(Error::InvalidParameter(format!(
                "graph is not {}-chromatic",
                t - 1
            )));
        }
        for (_, w) in &f.entries {
            if let Some(&v) = w.iter().find(|v| !g.has_vertex(**v)) {
                return Err(Error::MissingVertex(v));
            }
        }

        // Special case: a full clique with the single all-vertices entry.
        let n = g.vertex_count() as u32;
        if n == t - 1
            && g.is_clique(&g.vertex_set())
            && f.entries.len() == 1
            && f.entries[0].1 == g.vertex_set()
        {
            return Ok(true);
        }

        let small = self
            .enumerate_solutions(
                &ListColoringProblem::with_full_lists(g.clone(), t - 1),
                None,
            )?
            .complete()
            .expect("uncapped");
        for sol in &small {
            let classes = partition_of(sol);
            for (_, w) in &f.entries {
                if !hits_all_classes(w, &classes) {
                    return Ok(false);
                }
            }
        }

        let big = self
            .enumerate_solutions(&ListColoringProblem::with_full_lists(g.clone(), t), None)?
            .complete()
            .expect("uncapped");
        for sol in &big {
            let used: BTreeSet<Color> = sol.values().copied().collect();
            if used.len() != t as usize {
                continue; // not onto
            }
            let classes = partition_of(sol);
            if !f.entries.iter().any(|(_, w)| hits_all_classes(w, &classes)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Builds the cone graph over a verified transverse system: one new
    /// vertex per entry, joined to that entry's vertex set. Verifies by
    /// enumeration that the result is t-chromatic with the new vertices as
    /// a fixed color class, and rejects the construction otherwise.
    pub fn build_from_transverse(
        &self,
        g: &Graph,
        f: &TransverseSystem,
        t: u32,
    ) -> Result<(Graph, Vec<VertexId>), Error> {
        if !self.check_transverse(g, f, t)? {
            return Err(Error::ConstructionRejected(
                "not a transverse system for the graph".into(),
            ));
        }
        let mut h = g.clone();
        let mut next = g.vertices().map(|v| v.0).max().map_or(0, |m| m + 1);
        let mut added = Vec::new();
        for (_, w) in &f.entries {
            let nv = VertexId(next);
            next += 1;
            h.add_vertex(nv);
            for &u in w {
                h.add_edge(nv, u)?;
            }
            added.push(nv);
        }

        if h.vertex_count() > self.max_vertices {
            return Err(Error::OracleCapExceeded {
                vertices: h.vertex_count(),
                cap: self.max_vertices,
            });
        }
        if self.chromatic_number(&h)? != t {
            return Err(Error::ConstructionRejected(format!(
                "cone graph is not {t}-chromatic"
            )));
        }
        let vstar: BTreeSet<VertexId> = added.iter().copied().collect();
        if !self.has_fixed_class(&h, t, &vstar)? {
            return Err(Error::ConstructionRejected(
                "new vertices are not a fixed color class".into(),
            ));
        }
        Ok((h, added))
    }

    /// Is `vstar` exactly one color class in every proper t-coloring of `h`?
    pub fn has_fixed_class(
        &self,
        h: &Graph,
        t: u32,
        vstar: &BTreeSet<VertexId>,
    ) -> Result<bool, Error> {
        let sols = self
            .enumerate_solutions(&ListColoringProblem::with_full_lists(h.clone(), t), None)?
            .complete()
            .expect("uncapped");
        if sols.is_empty() {
            return Ok(false);
        }
        Ok(sols.iter().all(|sol| partition_of(sol).contains(vstar)))
    }
}

fn hits_all_classes(w: &BTreeSet<VertexId>, classes: &BTreeSet<BTreeSet<VertexId>>) -> bool {
    classes.iter().all(|cls| cls.iter().any(|v| w.contains(v)))
}

fn partition_of(sol: &BTreeMap<VertexId, Color>) -> BTreeSet<BTreeSet<VertexId>> {
    let mut by_color: BTreeMap<Color, BTreeSet<VertexId>> = BTreeMap::new();
    for (&v, &c) in sol {
        by_color.entry(c).or_default().insert(v);
    }
    by_color.into_values().collect()
}

fn backtrack(
    g: &Graph,
    lists: &BTreeMap<VertexId, ColorSet>,
    vertices: &[VertexId],
    depth: usize,
    assign: &mut BTreeMap<VertexId, Color>,
    out: &mut Vec<BTreeMap<VertexId, Color>>,
    cap: Option<usize>,
) -> bool {
    if depth == vertices.len() {
        if cap.is_some_and(|c| out.len() >= c) {
            return true;
        }
        out.push(assign.clone());
        return false;
    }
    let v = vertices[depth];
    for c in lists[&v].iter() {
        if g.neighbors(v).any(|u| assign.get(&u) == Some(&c)) {
            continue;
        }
        assign.insert(v, c);
        if backtrack(g, lists, vertices, depth + 1, assign, out, cap) {
            assign.remove(&v);
            return true;
        }
        assign.remove(&v);
    }
    false
}

fn exists_coloring(
    g: &Graph,
    vertices: &[VertexId],
    depth: usize,
    t: u32,
    used: u32,
    assign: &mut BTreeMap<VertexId, Color>,
) -> bool {
    if depth == vertices.len() {
        return true;
    }
    let v = vertices[depth];
    let limit = t.min(used + 1);
    for c in 1..=limit {
        let c = Color(c);
        if g.neighbors(v).any(|u| assign.get(&u) == Some(&c)) {
            continue;
        }
        assign.insert(v, c);
        if exists_coloring(g, vertices, depth + 1, t, used.max(c.0), assign) {
            return true;
        }
        assign.remove(&v);
    }
    false
}

fn clique_search(
    g: &Graph,
    candidates: &[VertexId],
    start: usize,
    current: &mut Vec<VertexId>,
    best: &mut usize,
) {
    *best = (*best).max(current.len());
    for i in start..candidates.len() {
        if current.len() + (candidates.len() - i) <= *best {
            break;
        }
        let v = candidates[i];
        if current.iter().all(|&u| g.has_edge(u, v)) {
            current.push(v);
            clique_search(g, candidates, i + 1, current, best);
            current.pop();
        }
    }
}

/// A transverse system: index-tagged vertex sets (repetitions preserved
/// verbatim; duplicates yield distinct cone vertices in the converse
/// construction).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransverseSystem {
    pub entries: Vec<(usize, BTreeSet<VertexId>)>,
}

/// The embedding of a list problem into plain coloring: a fresh anchor
/// t-clique with pinned colors, plus an edge from each vertex to every
/// anchor whose color its list forbids. Solutions correspond one-to-one by
/// restriction.
pub fn embed_list_problem(p: &ListColoringProblem) -> (Graph, Vec<(VertexId, Color)>) {
    let mut h = p.graph.clone();
    let base = p.graph.vertices().map(|v| v.0).max().map_or(0, |m| m + 1);
    let anchors: Vec<(VertexId, Color)> = (0..p.palette)
        .map(|i| (VertexId(base + i), Color(i + 1)))
        .collect();
    for (i, &(a, _)) in anchors.iter().enumerate() {
        h.add_vertex(a);
        for &(b, _) in &anchors[..i] {
            h.add_edge(a, b).expect("anchor ids are fresh");
        }
    }
    for v in p.graph.vertices() {
        let list = p.lists[&v];
        for &(a, c) in &anchors {
            if !list.contains(c) {
                h.add_edge(v, a).expect("anchors differ from base vertices");
            }
        }
    }
    (h, anchors)
}
