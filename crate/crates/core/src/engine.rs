//! The sequential list-coloring engine.
//!
//! One *round* scans every vertex in rank order. Visiting a vertex applies
//! each structural rule over every embedding of its pattern inside the
//! d-ball around the vertex that targets the vertex, repeating until the
//! vertex's list is stable for the visit, then applies the nonstructural
//! rule once (if any, and only while the list is not yet a singleton).
//! Updates made earlier in a round are visible to later vertices of the
//! same round. Only the visited vertex's list ever changes during its
//! visit.
//!
//! The run halts with failure the moment a list empties (mid-round), with
//! success at the end of the first round in which every visited list ended
//! as a singleton, and with a stable failure after a full round that
//! changed nothing.

use std::collections::{BTreeMap, BTreeSet};

use crate::embed::{enumerate_embeddings_pinned, Embedding};
use crate::error::Error;
use crate::graph::{Color, ColorSet, Coloring, Graph, VertexId, VertexOrder};
use crate::oracle::{ListColoringProblem, Oracle};
use crate::rulebase::RuleBase;

/// A graph with a scan order and per-vertex color lists; the solver's
/// immutable input state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedListGraph {
    pub graph: Graph,
    pub order: VertexOrder,
    pub lists: BTreeMap<VertexId, ColorSet>,
    pub palette: u32,
}

impl OrderedListGraph {
    pub fn new(
        graph: Graph,
        order: VertexOrder,
        lists: BTreeMap<VertexId, ColorSet>,
        palette: u32,
    ) -> Result<OrderedListGraph, Error> {
        if order.len() != graph.vertex_count() {
            return Err(Error::InvalidOrdering(
                "ordering does not cover the vertex set".into(),
            ));
        }
        let full = ColorSet::full(palette);
        for v in graph.vertices() {
            if order.rank(v).is_none() {
                return Err(Error::InvalidOrdering(format!("vertex {v} has no rank")));
            }
            match lists.get(&v) {
                None => return Err(Error::InvalidColoring(format!("vertex {v} has no list"))),
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
        Ok(OrderedListGraph {
            graph,
            order,
            lists,
            palette,
        })
    }

    /// Total list size `‖L‖ = Σ_v |L_v|`.
    pub fn list_norm(&self) -> usize {
        self.lists.values().map(|l| l.len()).sum()
    }

    pub fn as_list_problem(&self) -> ListColoringProblem {
        ListColoringProblem {
            graph: self.graph.clone(),
            lists: self.lists.clone(),
            palette: self.palette,
        }
    }
}

/// The seed lists for a vertex subset `a` of a colored graph: members of
/// `a` get their color as a singleton, everyone else the full palette.
pub fn lists_from_defining_set(
    graph: &Graph,
    coloring: &Coloring,
    a: &BTreeSet<VertexId>,
) -> Result<BTreeMap<VertexId, ColorSet>, Error> {
    if let Some(&v) = a.iter().find(|v| !graph.has_vertex(**v)) {
        return Err(Error::MissingVertex(v));
    }
    let full = ColorSet::full(coloring.palette());
    graph
        .vertices()
        .map(|v| {
            if a.contains(&v) {
                let c = coloring
                    .get(v)
                    .ok_or_else(|| Error::InvalidColoring(format!("vertex {v} uncolored")))?;
                Ok((v, ColorSet::singleton(c)))
            } else {
                Ok((v, full))
            }
        })
        .collect()
}

/// A round budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounds {
    Finite(u32),
    Unbounded,
}

impl Rounds {
    pub fn allows(self, rounds: u32) -> bool {
        match self {
            Rounds::Finite(k) => rounds <= k,
            Rounds::Unbounded => true,
        }
    }
}

/// How a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveOutcome {
    /// Every list is a singleton.
    Solved,
    /// A list emptied mid-round at this vertex.
    EmptyList { vertex: VertexId },
    /// A full round changed nothing and lists are not all singletons; no
    /// later round could change anything either.
    Stable,
    /// The round cap was reached with the state still moving.
    RoundCapReached,
}

/// One list change, as recorded in the per-round trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ListChange {
    pub vertex: VertexId,
    pub old: ColorSet,
    pub new: ColorSet,
}

/// A recorded audit failure: a structural rule firing changed the global
/// solution set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditViolation {
    pub rule: String,
    pub vertex: VertexId,
    pub round: u32,
}

#[derive(Debug, Clone, Default)]
pub struct SolveOptions {
    /// Stop after this many completed rounds (the state at the stop is
    /// reported as-is).
    pub round_cap: Option<u32>,
    /// Cross-check every structural firing against the oracle: the global
    /// solution set before and after must agree. Skipped on instances
    /// larger than the oracle cap.
    pub audit: Option<Oracle>,
}

/// The outcome, round count, final lists, and per-round change trace of a
/// run. `rounds` counts completed full scans; a mid-round failure reports
/// the rounds completed before it, with the partial round's changes still
/// present in the trace.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub outcome: SolveOutcome,
    pub rounds: u32,
    pub lists: BTreeMap<VertexId, ColorSet>,
    pub trace: Vec<Vec<ListChange>>,
    pub audit_violations: Vec<AuditViolation>,
}

impl SolveResult {
    pub fn done(&self) -> bool {
        self.outcome == SolveOutcome::Solved
    }

    /// Rounds in which at least one list changed.
    pub fn productive_rounds(&self) -> u32 {
        self.trace.iter().filter(|r| !r.is_empty()).count() as u32
    }

    /// The final singleton lists as a coloring, when solved.
    pub fn coloring(&self, graph: &Graph, palette: u32) -> Option<Coloring> {
        if !self.done() {
            return None;
        }
        let assign: Option<BTreeMap<VertexId, Color>> = self
            .lists
            .iter()
            .map(|(&v, l)| l.as_singleton().map(|c| (v, c)))
            .collect();
        Coloring::new(graph, assign?, palette).ok()
    }

    /// Vertices whose final list is a singleton.
    pub fn decided(&self) -> BTreeSet<VertexId> {
        self.lists
            .iter()
            .filter(|(_, l)| l.len() == 1)
            .map(|(&v, _)| v)
            .collect()
    }
}

/// Per-vertex, per-rule embeddings, precomputed once per run: the graph
/// never changes during a solve, only the lists do.
struct EmbeddingIndex {
    /// `per_vertex[v] = [(rule index, embedding), ...]` in rule order, each
    /// rule's embeddings sorted by the rank tuple of their image.
    per_vertex: BTreeMap<VertexId, Vec<(usize, Embedding)>>,
}

impl EmbeddingIndex {
    fn build(state: &OrderedListGraph, rb: &RuleBase) -> Result<EmbeddingIndex, Error> {
        let mut per_vertex = BTreeMap::new();
        for v in state.graph.vertices() {
            let ball = state.graph.ball(v, rb.bound())?;
            let mut entries: Vec<(usize, Embedding)> = Vec::new();
            for (ri, rule) in rb.structural().iter().enumerate() {
                let mut embs = enumerate_embeddings_pinned(
                    &state.graph,
                    &ball,
                    rule.pattern(),
                    &[(rule.target().as_str(), v)],
                )?;
                // Canonical order: lexicographic by host ranks in the
                // pattern's label order.
                embs.sort_by_key(|e| {
                    e.image()
                        .iter()
                        .map(|&w| state.order.rank(w).unwrap_or(u32::MAX))
                        .collect::<Vec<_>>()
                });
                entries.extend(embs.into_iter().map(|e| (ri, e)));
            }
            per_vertex.insert(v, entries);
        }
        Ok(EmbeddingIndex { per_vertex })
    }
}

/// Runs the solver to completion (or to the round cap). Pure: the input
/// state is not modified.
pub fn solve(state: &OrderedListGraph, rb: &RuleBase, opts: &SolveOptions) -> Result<SolveResult, Error> {
    if rb.palette() != state.palette {
        return Err(Error::InvalidParameter(format!(
            "rule-base palette {} differs from instance palette {}",
            rb.palette(),
            state.palette
        )));
    }
    let index = EmbeddingIndex::build(state, rb)?;
    let scan = state.order.by_rank();
    let mut lists = state.lists.clone();
    let mut trace: Vec<Vec<ListChange>> = Vec::new();
    let mut audit_violations = Vec::new();
    let mut rounds = 0u32;

    loop {
        let mut colored = true;
        let mut round_trace: Vec<ListChange> = Vec::new();
        for &v in &scan {
            let old = lists[&v];
            let (done, col) = update_vertex(
                state,
                rb,
                &index,
                &mut lists,
                v,
                rounds + 1,
                opts.audit.as_ref(),
                &mut audit_violations,
            );
            let new = lists[&v];
            if new != old {
                round_trace.push(ListChange { vertex: v, old, new });
            }
            if !done {
                trace.push(round_trace);
                return Ok(SolveResult {
                    outcome: SolveOutcome::EmptyList { vertex: v },
                    rounds,
                    lists,
                    trace,
                    audit_violations,
                });
            }
            if !col {
                colored = false;
            }
        }
        rounds += 1;
        let idle = round_trace.is_empty();
        trace.push(round_trace);
        if colored {
            let result = SolveResult {
                outcome: SolveOutcome::Solved,
                rounds,
                lists,
                trace,
                audit_violations,
            };
            // A successful run makes progress every round except possibly
            // the final detection round.
            assert!(
                (result.productive_rounds() as usize) <= state.list_norm() - state.graph.vertex_count(),
                "productive rounds exceeded the list-norm bound"
            );
            return Ok(result);
        }
        if idle {
            return Ok(SolveResult {
                outcome: SolveOutcome::Stable,
                rounds,
                lists,
                trace,
                audit_violations,
            });
        }
        if opts.round_cap.is_some_and(|cap| rounds >= cap) {
            return Ok(SolveResult {
                outcome: SolveOutcome::RoundCapReached,
                rounds,
                lists,
                trace,
                audit_violations,
            });
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn update_vertex(
    state: &OrderedListGraph,
    rb: &RuleBase,
    index: &EmbeddingIndex,
    lists: &mut BTreeMap<VertexId, ColorSet>,
    v: VertexId,
    round: u32,
    audit: Option<&Oracle>,
    violations: &mut Vec<AuditViolation>,
) -> (bool, bool) {
    let entries = &index.per_vertex[&v];
    // Structural rules, to saturation for this visit.
    loop {
        let mut changed = false;
        for &(ri, ref emb) in entries {
            let rule = &rb.structural()[ri];
            if let Some(new) = rule.apply(&state.graph, lists, emb) {
                let old = lists[&v];
                assert!(new.is_subset(old), "rule {} grew a list", rule.name());
                if new != old {
                    if let Some(oracle) = audit {
                        audit_firing(state, oracle, lists, v, new, rule.name(), round, violations);
                    }
                    lists.insert(v, new);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    // Nonstructural rule: once per visit, only while undecided.
    if let Some(ns) = rb.nonstructural() {
        let current = lists[&v];
        if current.len() > 1 {
            let mut decided = ColorSet::EMPTY;
            for u in state.graph.neighbors(v) {
                let lu = lists[&u];
                if lu.len() == 1 {
                    decided = decided.union(lu);
                }
            }
            if let Some(new) = ns.apply(current, decided) {
                assert!(new.is_subset(current), "nonstructural rule grew a list");
                lists.insert(v, new);
            }
        }
    }
    let l = lists[&v];
    (!l.is_empty(), l.len() == 1)
}

#[allow(clippy::too_many_arguments)]
fn audit_firing(
    state: &OrderedListGraph,
    oracle: &Oracle,
    lists: &BTreeMap<VertexId, ColorSet>,
    v: VertexId,
    new: ColorSet,
    rule: &str,
    round: u32,
    violations: &mut Vec<AuditViolation>,
) {
    if state.graph.vertex_count() > oracle.max_vertices {
        return;
    }
    let before = ListColoringProblem {
        graph: state.graph.clone(),
        lists: lists.clone(),
        palette: state.palette,
    };
    let mut after_lists = lists.clone();
    after_lists.insert(v, new);
    let after = ListColoringProblem {
        graph: state.graph.clone(),
        lists: after_lists,
        palette: state.palette,
    };
    let same = match (
        oracle.enumerate_solutions(&before, None),
        oracle.enumerate_solutions(&after, None),
    ) {
        (Ok(b), Ok(a)) => b == a,
        _ => false,
    };
    if !same {
        violations.push(AuditViolation {
            rule: rule.to_string(),
            vertex: v,
            round,
        });
    }
}

/// One visit of the named vertex on a copy of the state: the updated list
/// and the `(done, col)` flags. Exposed for tests and worked examples; the
/// solver inlines the same logic.
pub fn local_update(
    state: &OrderedListGraph,
    v: VertexId,
    rb: &RuleBase,
) -> Result<(ColorSet, bool, bool), Error> {
    if !state.graph.has_vertex(v) {
        return Err(Error::MissingVertex(v));
    }
    let index = EmbeddingIndex::build(state, rb)?;
    let mut lists = state.lists.clone();
    let (done, col) = update_vertex(state, rb, &index, &mut lists, v, 1, None, &mut Vec::new());
    Ok((lists[&v], done, col))
}

/// Is the instance solvable with strictly fewer than `r` rounds (and a
/// proper outcome)? The unbounded variant accepts any finite round count.
pub fn is_solvable(state: &OrderedListGraph, rb: &RuleBase, r: Rounds) -> Result<bool, Error> {
    let cap = match r {
        // A run always takes at least one round.
        Rounds::Finite(r) if r <= 1 => return Ok(false),
        Rounds::Finite(r) => Some(r),
        Rounds::Unbounded => None,
    };
    let result = solve(state, rb, &SolveOptions { round_cap: cap, audit: None })?;
    let within = match r {
        Rounds::Finite(b) => result.rounds < b,
        Rounds::Unbounded => true,
    };
    if !result.done() || !within {
        return Ok(false);
    }
    let proper = result
        .coloring(&state.graph, state.palette)
        .is_some_and(|c| c.is_proper(&state.graph));
    Ok(proper)
}

/// The decided fragment after a bounded run: the induced subgraph, with
/// induced (compacted) ordering and the singleton colors, on the vertices
/// whose list is a singleton when the run stops.
#[derive(Debug, Clone)]
pub struct Closure {
    pub vertices: BTreeSet<VertexId>,
    pub graph: Graph,
    pub order: VertexOrder,
    pub coloring: BTreeMap<VertexId, Color>,
    pub result: SolveResult,
}

impl Closure {
    /// Does the closure cover the whole original graph?
    pub fn is_whole(&self, graph: &Graph) -> bool {
        self.vertices == graph.vertex_set()
    }
}

/// Runs the solver from the seed set `a` for at most `k` rounds (when
/// finite) and collects the decided fragment. The seed coloring need not be
/// proper; improper seeds simply fail to spread.
pub fn coloring_closure(
    a: &BTreeSet<VertexId>,
    graph: &Graph,
    order: &VertexOrder,
    coloring: &Coloring,
    rb: &RuleBase,
    k: Rounds,
) -> Result<Closure, Error> {
    let lists = lists_from_defining_set(graph, coloring, a)?;
    let state = OrderedListGraph::new(graph.clone(), order.clone(), lists, coloring.palette())?;
    let cap = match k {
        Rounds::Finite(k) => Some(k),
        // A run that never repeats an idle round stops on its own; the
        // list-norm bound is a safety net, not a driver.
        Rounds::Unbounded => None,
    };
    let result = solve(&state, rb, &SolveOptions { round_cap: cap, audit: None })?;
    let vertices = result.decided();
    let sub = graph.induced_subgraph(&vertices)?;
    let sub_order = order.induced(&vertices);
    let colors = result
        .lists
        .iter()
        .filter_map(|(&v, l)| l.as_singleton().map(|c| (v, c)))
        .collect();
    Ok(Closure {
        vertices,
        graph: sub,
        order: sub_order,
        coloring: colors,
        result,
    })
}
