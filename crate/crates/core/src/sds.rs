//! Verification and exact search for weak/strong sequential defining sets.
//!
//! A seed set `A` is a defining set of a colored ordered graph when the
//! solver, started from the seed lists of `A`, recovers the target coloring
//! within the round budget. The weak number minimizes `|A|`; the strong
//! number minimizes the index `ι(A) = |A| + rounds − 1`.
//!
//! Searches enumerate subsets by (size, lexicographic-by-rank) order, so
//! returned witnesses are canonical. Candidates of one size may be
//! evaluated in parallel; the reduction key includes the enumeration
//! position, so parallel and serial searches return identical results.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::engine::{
    coloring_closure, lists_from_defining_set, solve, OrderedListGraph, Rounds, SolveOptions,
};
use crate::error::Error;
use crate::graph::{Coloring, Graph, VertexId, VertexOrder};
use crate::rulebase::RuleBase;

/// A verified defining set with its round count and index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SdsWitness {
    pub set: BTreeSet<VertexId>,
    pub rounds: u32,
    pub index: u32,
}

/// Weak: minimize the seed-set size. Strong: minimize the index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdsMode {
    Weak,
    Strong,
}

/// A defining-set query over an ordered colored graph. The coloring must be
/// proper and match the rule-base palette.
#[derive(Debug, Clone)]
pub struct SdsQuery<'a> {
    graph: &'a Graph,
    order: &'a VertexOrder,
    coloring: &'a Coloring,
    rulebase: &'a RuleBase,
    k: Rounds,
}

impl<'a> SdsQuery<'a> {
    pub fn new(
        graph: &'a Graph,
        order: &'a VertexOrder,
        coloring: &'a Coloring,
        rulebase: &'a RuleBase,
        k: Rounds,
    ) -> Result<SdsQuery<'a>, Error> {
        if !coloring.is_proper(graph) {
            return Err(Error::InvalidColoring(
                "defining sets are relative to a proper coloring".into(),
            ));
        }
        if coloring.palette() != rulebase.palette() {
            return Err(Error::InvalidParameter(format!(
                "coloring palette {} differs from rule-base palette {}",
                coloring.palette(),
                rulebase.palette()
            )));
        }
        if order.len() != graph.vertex_count() {
            return Err(Error::InvalidOrdering("ordering does not cover the graph".into()));
        }
        if let Rounds::Finite(0) = k {
            return Err(Error::InvalidParameter("round bound must be at least 1".into()));
        }
        Ok(SdsQuery {
            graph,
            order,
            coloring,
            rulebase,
            k,
        })
    }

    pub fn graph(&self) -> &Graph {
        self.graph
    }

    pub fn coloring(&self) -> &Coloring {
        self.coloring
    }
}

/// Checks whether `a` is a defining set within the round budget: the run
/// must succeed with `rounds ≤ k` and reproduce the target coloring.
pub fn verify_sds(q: &SdsQuery, a: &BTreeSet<VertexId>) -> Result<Option<SdsWitness>, Error> {
    let lists = lists_from_defining_set(q.graph, q.coloring, a)?;
    let state = OrderedListGraph::new(
        q.graph.clone(),
        q.order.clone(),
        lists,
        q.coloring.palette(),
    )?;
    let cap = match q.k {
        Rounds::Finite(k) => Some(k),
        Rounds::Unbounded => None,
    };
    let result = solve(&state, q.rulebase, &SolveOptions { round_cap: cap, audit: None })?;
    if !result.done() {
        return Ok(None);
    }
    let Some(found) = result.coloring(q.graph, q.coloring.palette()) else {
        return Ok(None);
    };
    if &found != q.coloring {
        return Ok(None);
    }
    Ok(Some(SdsWitness {
        set: a.clone(),
        rounds: result.rounds,
        index: a.len() as u32 + result.rounds - 1,
    }))
}

/// How a search ended: an exact answer, proof that no defining set exists
/// within the budgeted rounds, or a budget breach with the best bound found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found {
        number: u32,
        witness: SdsWitness,
        explored: u64,
    },
    NoSds {
        explored: u64,
    },
    BudgetExceeded {
        best: Option<SdsWitness>,
        explored: u64,
    },
}

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// Cap on the number of candidate verifications.
    pub budget: Option<u64>,
    /// Skip candidates missing a vertex that provably belongs to every
    /// defining set (sound for structural rule-bases only; ignored
    /// otherwise).
    pub prune: bool,
    /// Evaluate the candidates of each size in parallel.
    pub parallel: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: None,
            prune: true,
            parallel: false,
        }
    }
}

/// Vertices that must belong to every defining set: seeding everything
/// *except* the vertex still fails to decide it, so no smaller seed set can
/// either (list updates are monotone for structural rules).
pub fn must_contain(
    graph: &Graph,
    order: &VertexOrder,
    coloring: &Coloring,
    rb: &RuleBase,
) -> Result<BTreeSet<VertexId>, Error> {
    if !rb.is_structural() {
        return Ok(BTreeSet::new());
    }
    let mut out = BTreeSet::new();
    for v in graph.vertices() {
        let mut rest = graph.vertex_set();
        rest.remove(&v);
        let cc = coloring_closure(&rest, graph, order, coloring, rb, Rounds::Unbounded)?;
        if !cc.vertices.contains(&v) {
            out.insert(v);
        }
    }
    Ok(out)
}

/// Weak search: minimum `|A|` over all defining sets, first witness in
/// (size, lex-by-rank) order.
pub fn wsdn(q: &SdsQuery, opts: &SearchOptions) -> Result<SearchOutcome, Error> {
    search(q, opts, SdsMode::Weak, None)
}

/// Strong search: minimum index `ι(A) = |A| + rounds − 1`. Ties on the
/// index prefer fewer rounds, then the enumeration order; sizes beyond the
/// best index cannot improve it and are not enumerated.
pub fn ssdn(q: &SdsQuery, opts: &SearchOptions) -> Result<SearchOutcome, Error> {
    search(q, opts, SdsMode::Strong, None)
}

/// Weak search restricted to seed sets of size at most `max_size` (the
/// decision form used by the coloring-existence problems).
pub fn wsdn_at_most(
    q: &SdsQuery,
    opts: &SearchOptions,
    max_size: u32,
) -> Result<SearchOutcome, Error> {
    search(q, opts, SdsMode::Weak, Some(max_size))
}

/// Strong search restricted to indices at most `max_index`.
pub fn ssdn_at_most(
    q: &SdsQuery,
    opts: &SearchOptions,
    max_index: u32,
) -> Result<SearchOutcome, Error> {
    search(q, opts, SdsMode::Strong, Some(max_index))
}

fn search(
    q: &SdsQuery,
    opts: &SearchOptions,
    mode: SdsMode,
    limit: Option<u32>,
) -> Result<SearchOutcome, Error> {
    let by_rank: Vec<VertexId> = q.order.by_rank();
    let n = by_rank.len() as u32;
    let required = if opts.prune {
        must_contain(q.graph, q.order, q.coloring, q.rulebase)?
    } else {
        BTreeSet::new()
    };

    let mut explored: u64 = 0;
    let mut best: Option<SdsWitness> = None;

    let max_size = match (mode, limit) {
        (SdsMode::Weak, Some(cap)) => cap.min(n),
        (SdsMode::Weak, None) => n,
        // ι = |A| + rounds − 1 and rounds ≥ 1, so |A| ≤ ι always.
        (SdsMode::Strong, Some(cap)) => cap.min(n),
        (SdsMode::Strong, None) => n,
    };

    for size in 0..=max_size {
        if mode == SdsMode::Strong {
            if let Some(b) = &best {
                if size > b.index {
                    break;
                }
            }
        } else if best.is_some() {
            break;
        }

        let candidates: Vec<BTreeSet<VertexId>> = combinations(&by_rank, size as usize)
            .into_iter()
            .filter(|a| required.iter().all(|v| a.contains(v)))
            .collect();

        if let Some(budget) = opts.budget {
            if explored + candidates.len() as u64 > budget {
                return Ok(SearchOutcome::BudgetExceeded { best, explored });
            }
        }

        // Key: (index, rounds, position). Minimizing it prefers smaller
        // indices, then fewer rounds, then the lexicographically first set.
        let evaluate = |(pos, a): (usize, &BTreeSet<VertexId>)| -> Result<Option<(u32, u32, usize)>, Error> {
            Ok(verify_sds(q, a)?.map(|w| (w.index, w.rounds, pos)))
        };
        let found: Option<(u32, u32, usize)> = if opts.parallel {
            let keys: Vec<Option<(u32, u32, usize)>> = candidates
                .par_iter()
                .enumerate()
                .map(evaluate)
                .collect::<Result<_, Error>>()?;
            keys.into_iter().flatten().min()
        } else {
            let mut best_key: Option<(u32, u32, usize)> = None;
            for (pos, a) in candidates.iter().enumerate() {
                if let Some(key) = evaluate((pos, a))? {
                    best_key = Some(best_key.map_or(key, |b| b.min(key)));
                    if mode == SdsMode::Weak || key.1 == 1 {
                        // Weak: the first hit of a size wins. Strong: a
                        // one-round hit is unbeatable within the size, and
                        // both agree with a full scan's minimum key.
                        break;
                    }
                }
            }
            best_key
        };
        // Charge the whole size, except that a weak success is charged up
        // to its position; serial and parallel runs agree by construction.
        explored += match (mode, &found) {
            (SdsMode::Weak, Some((_, _, pos))) => *pos as u64 + 1,
            _ => candidates.len() as u64,
        };

        if let Some((index, rounds, pos)) = found {
            let witness = SdsWitness {
                set: candidates[pos].clone(),
                rounds,
                index,
            };
            match (&best, mode) {
                (None, _) => best = Some(witness),
                (Some(b), SdsMode::Strong)
                    if (index, rounds) < (b.index, b.rounds) =>
                {
                    best = Some(witness)
                }
                _ => {}
            }
            if let (SdsMode::Strong, Some(cap)) = (mode, limit) {
                if best.as_ref().is_some_and(|b| b.index <= cap) {
                    break;
                }
            }
        }
    }

    match best {
        Some(witness) => {
            if let Some(cap) = limit {
                let value = match mode {
                    SdsMode::Weak => witness.set.len() as u32,
                    SdsMode::Strong => witness.index,
                };
                if value > cap {
                    return Ok(SearchOutcome::NoSds { explored });
                }
            }
            let number = match mode {
                SdsMode::Weak => witness.set.len() as u32,
                SdsMode::Strong => witness.index,
            };
            Ok(SearchOutcome::Found {
                number,
                witness,
                explored,
            })
        }
        None => Ok(SearchOutcome::NoSds { explored }),
    }
}

/// All `size`-subsets of `items` in lexicographic order of positions.
fn combinations(items: &[VertexId], size: usize) -> Vec<BTreeSet<VertexId>> {
    let n = items.len();
    if size > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        // Advance to the next combination.
        let mut i = size;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - size {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Decision outcome for the coloring-existence problems: is there a proper
/// coloring whose weak (or strong) number is at most `ξ`?
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColoringSearchOutcome {
    Yes {
        coloring: Coloring,
        witness: SdsWitness,
        explored: u64,
    },
    No {
        explored: u64,
    },
    BudgetExceeded {
        explored: u64,
    },
}

/// Brute-force decision of the coloring-existence problem: enumerate proper
/// `t`-colorings up to color permutation (backtracking in rank order) and
/// test each for a defining set within the bound.
pub fn exists_coloring_with_sdn_le(
    graph: &Graph,
    order: &VertexOrder,
    rb: &RuleBase,
    k: Rounds,
    xi: u32,
    mode: SdsMode,
    opts: &SearchOptions,
) -> Result<ColoringSearchOutcome, Error> {
    let by_rank = order.by_rank();
    let t = rb.palette();
    let mut explored: u64 = 0;
    let mut assign: BTreeMap<VertexId, crate::graph::Color> = BTreeMap::new();
    let mut result: Option<ColoringSearchOutcome> = None;
    try_colorings(
        graph,
        order,
        rb,
        k,
        xi,
        mode,
        opts,
        &by_rank,
        0,
        0,
        t,
        &mut assign,
        &mut explored,
        &mut result,
    )?;
    Ok(result.unwrap_or(ColoringSearchOutcome::No { explored }))
}

/// Depth-first over canonical colorings: a vertex may use at most one color
/// beyond those already in use, which quotients away color permutations
/// (defining numbers are invariant under them).
#[allow(clippy::too_many_arguments)]
fn try_colorings(
    graph: &Graph,
    order: &VertexOrder,
    rb: &RuleBase,
    k: Rounds,
    xi: u32,
    mode: SdsMode,
    opts: &SearchOptions,
    by_rank: &[VertexId],
    depth: usize,
    used: u32,
    t: u32,
    assign: &mut BTreeMap<VertexId, crate::graph::Color>,
    explored: &mut u64,
    result: &mut Option<ColoringSearchOutcome>,
) -> Result<(), Error> {
    if result.is_some() {
        return Ok(());
    }
    if depth == by_rank.len() {
        let coloring = Coloring::new(graph, assign.clone(), t)?;
        let q = SdsQuery::new(graph, order, &coloring, rb, k)?;
        let inner = match mode {
            SdsMode::Weak => wsdn_at_most(&q, opts, xi)?,
            SdsMode::Strong => ssdn_at_most(&q, opts, xi)?,
        };
        match inner {
            SearchOutcome::Found { witness, explored: e, .. } => {
                *result = Some(ColoringSearchOutcome::Yes {
                    coloring,
                    witness,
                    explored: *explored + e,
                });
            }
            SearchOutcome::NoSds { explored: e } => {
                *explored += e;
                if opts.budget.is_some_and(|b| *explored > b) {
                    *result = Some(ColoringSearchOutcome::BudgetExceeded { explored: *explored });
                }
            }
            SearchOutcome::BudgetExceeded { explored: e, .. } => {
                *result = Some(ColoringSearchOutcome::BudgetExceeded {
                    explored: *explored + e,
                });
            }
        }
        return Ok(());
    }
    let v = by_rank[depth];
    let limit = t.min(used + 1);
    for c in 1..=limit {
        let color = crate::graph::Color(c);
        if graph.neighbors(v).any(|u| assign.get(&u) == Some(&color)) {
            continue;
        }
        assign.insert(v, color);
        try_colorings(
            graph,
            order,
            rb,
            k,
            xi,
            mode,
            opts,
            by_rank,
            depth + 1,
            used.max(c),
            t,
            assign,
            explored,
            result,
        )?;
        assign.remove(&v);
        if result.is_some() {
            return Ok(());
        }
    }
    Ok(())
}
