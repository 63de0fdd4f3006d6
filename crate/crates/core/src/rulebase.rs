//! Coloring rule-bases: pattern-based local rules, the greedy nonstructural
//! rule, rule-soundness validation, and the generic type-1/type-2 forcings.
//!
//! A structural rule names a marked pattern graph, a target label, and a
//! list update. It fires on an embedding of the pattern when its
//! applicability condition holds on the embedded lists; firing shrinks the
//! target's list and must leave the set of solutions of the enclosing list
//! problem unchanged. Nonstructural rules (greedy) shrink lists without that
//! guarantee.

use std::collections::{BTreeMap, BTreeSet};

use crate::embed::Embedding;
use crate::error::Error;
use crate::graph::{Color, ColorSet, Graph, VertexId};
use crate::marked::{Label, MarkedGraph};
use crate::oracle::{ListColoringProblem, Oracle};

/// Default vertex cap for the oracle-certified forcings; unique-colorability
/// certification is exponential, so the cap keeps them total.
pub const DEFAULT_FORCE_CAP: usize = 12;

/// The list update a structural rule performs, together with its
/// applicability condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UpdateKind {
    /// Fires when the union of the non-target pattern lists has exactly
    /// `required_union_size` colors; removes that union from the target.
    SubtractUnion { required_union_size: u32 },
    /// Fires when the union over *all* pattern lists (target included) has
    /// exactly `required_union_size` colors; intersects the target's list
    /// with the partner's.
    IntersectPartner {
        partner: Label,
        required_union_size: u32,
    },
    /// Greedy update packaged as if it were structural; exists so rule
    /// validation can demonstrate which properties it breaks.
    GreedyMin,
}

/// A structural local rule on a fully-marked base pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalRule {
    name: String,
    pattern: MarkedGraph,
    target: Label,
    kind: UpdateKind,
    /// Labels whose images must be non-adjacent in the host for the rule to
    /// fire (a side condition on the embedding, not on the pattern).
    nonadjacent: Option<(Label, Label)>,
}

impl LocalRule {
    pub fn new(
        name: impl Into<String>,
        pattern: MarkedGraph,
        target: impl Into<String>,
        kind: UpdateKind,
        nonadjacent: Option<(Label, Label)>,
    ) -> Result<LocalRule, Error> {
        let target = target.into();
        if !pattern.is_fully_marked() {
            return Err(Error::InvalidRule("rule patterns must be fully marked".into()));
        }
        if pattern.vertex_of(&target).is_none() {
            return Err(Error::InvalidRule(format!("target {target:?} is not a pattern label")));
        }
        if let UpdateKind::IntersectPartner { partner, .. } = &kind {
            if pattern.vertex_of(partner).is_none() {
                return Err(Error::InvalidRule(format!(
                    "partner {partner:?} is not a pattern label"
                )));
            }
        }
        if let Some((a, b)) = &nonadjacent {
            if pattern.vertex_of(a).is_none() || pattern.vertex_of(b).is_none() {
                return Err(Error::InvalidRule(
                    "non-adjacency side condition names unknown labels".into(),
                ));
            }
        }
        Ok(LocalRule {
            name: name.into(),
            pattern,
            target,
            kind,
            nonadjacent,
        })
    }

    /// First Tucker rule at clique size `t`: on a `K_t` whose other `t-1`
    /// lists jointly hold exactly `t-1` colors, remove those colors from
    /// the target.
    pub fn tucker1(t: u32) -> Result<LocalRule, Error> {
        if t < 2 {
            return Err(Error::InvalidParameter("tucker1 needs t >= 2".into()));
        }
        let labels: Vec<String> = (1..=t).map(|i| format!("x_{i}")).collect();
        let refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
        LocalRule::new(
            format!("tucker1({t})"),
            MarkedGraph::clique(&refs),
            format!("x_{t}"),
            UpdateKind::SubtractUnion {
                required_union_size: t - 1,
            },
            None,
        )
    }

    /// Second Tucker rule at clique size `t`: on two `t`-cliques sharing
    /// `t-1` vertices, with the two apexes non-adjacent and the lists of the
    /// whole pattern confined to exactly `t` colors, the apexes must agree;
    /// the target's list is intersected with its partner's.
    pub fn tucker2(t: u32) -> Result<LocalRule, Error> {
        if t < 2 {
            return Err(Error::InvalidParameter("tucker2 needs t >= 2".into()));
        }
        let shared: Vec<String> = (1..t).map(|i| format!("x_{i}")).collect();
        let mut left: Vec<&str> = vec!["u"];
        left.extend(shared.iter().map(|s| s.as_str()));
        let mut right: Vec<&str> = vec!["v"];
        right.extend(shared.iter().map(|s| s.as_str()));
        let pattern = MarkedGraph::clique(&left).amalgam(&MarkedGraph::clique(&right));
        LocalRule::new(
            format!("tucker2({t})"),
            pattern,
            "u",
            UpdateKind::IntersectPartner {
                partner: "v".into(),
                required_union_size: t,
            },
            Some(("u".into(), "v".into())),
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn pattern(&self) -> &MarkedGraph {
        &self.pattern
    }

    pub fn target(&self) -> &Label {
        &self.target
    }

    pub fn kind(&self) -> &UpdateKind {
        &self.kind
    }

    pub fn nonadjacent(&self) -> Option<&(Label, Label)> {
        self.nonadjacent.as_ref()
    }

    pub fn diameter(&self) -> Option<u32> {
        self.pattern.graph().diameter()
    }

    /// Evaluates the rule on one embedding. Returns the target's new list
    /// when the rule fires; `None` when a condition fails. Firing with an
    /// unchanged list is reported as `Some` (the caller decides whether
    /// that counts as progress).
    pub fn apply(
        &self,
        host: &Graph,
        lists: &BTreeMap<VertexId, ColorSet>,
        emb: &Embedding,
    ) -> Option<ColorSet> {
        if let Some((a, b)) = &self.nonadjacent {
            let (ia, ib) = (emb.image_of(a)?, emb.image_of(b)?);
            if host.has_edge(ia, ib) {
                return None;
            }
        }
        let target_host = emb.image_of(&self.target)?;
        let target_list = *lists.get(&target_host)?;
        match &self.kind {
            UpdateKind::SubtractUnion {
                required_union_size,
            } => {
                let mut union = ColorSet::EMPTY;
                for l in self.pattern.labels() {
                    if *l != self.target {
                        union = union.union(*lists.get(&emb.image_of(l)?)?);
                    }
                }
                (union.len() as u32 == *required_union_size)
                    .then(|| target_list.minus(union))
            }
            UpdateKind::IntersectPartner {
                partner,
                required_union_size,
            } => {
                let mut union = ColorSet::EMPTY;
                for l in self.pattern.labels() {
                    union = union.union(*lists.get(&emb.image_of(l)?)?);
                }
                if union.len() as u32 != *required_union_size {
                    return None;
                }
                let partner_list = *lists.get(&emb.image_of(partner)?)?;
                Some(target_list.intersect(partner_list))
            }
            UpdateKind::GreedyMin => {
                let mut decided = ColorSet::EMPTY;
                for l in self.pattern.labels() {
                    if *l != self.target {
                        let lw = *lists.get(&emb.image_of(l)?)?;
                        if lw.len() == 1 {
                            decided = decided.union(lw);
                        }
                    }
                }
                greedy_update(target_list, decided)
            }
        }
    }
}

/// A nonstructural list-update procedure; sees only the target's list and
/// the colors of its decided neighbors, and never picks a decided
/// neighbor's color.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonstructuralRule {
    name: String,
    kind: NonstructuralKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NonstructuralKind {
    /// Pick the least color not held by a decided neighbor.
    GreedyMin,
}

/// The greedy coloring rule.
pub fn greedy() -> NonstructuralRule {
    NonstructuralRule {
        name: "greedy".into(),
        kind: NonstructuralKind::GreedyMin,
    }
}

impl NonstructuralRule {
    pub fn name(&self) -> &str {
        &self.name
    }

    /// `None` signals no-update (the engine, not the rule, detects empty
    /// lists).
    pub fn apply(&self, target_list: ColorSet, decided_neighbors: ColorSet) -> Option<ColorSet> {
        match self.kind {
            NonstructuralKind::GreedyMin => greedy_update(target_list, decided_neighbors),
        }
    }
}

fn greedy_update(target: ColorSet, decided: ColorSet) -> Option<ColorSet> {
    target.minus(decided).min().map(ColorSet::singleton)
}

/// A `t`-coloring rule-base: ordered structural rules, at most one
/// nonstructural rule, a palette, and a locality bound `d` that every
/// pattern's diameter must respect.
///
/// Every rule-base contains the edge-exclusion rule (first Tucker rule at
/// size 2); the constructor injects it when absent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleBase {
    structural: Vec<LocalRule>,
    nonstructural: Option<NonstructuralRule>,
    palette: u32,
    bound: u32,
}

impl RuleBase {
    pub fn new(
        structural: Vec<LocalRule>,
        nonstructural: Option<NonstructuralRule>,
        palette: u32,
        bound: u32,
    ) -> Result<RuleBase, Error> {
        if palette < 1 || palette > ColorSet::MAX_PALETTE {
            return Err(Error::InvalidParameter(format!("palette {palette} out of range")));
        }
        let mut structural = structural;
        if !structural.iter().any(is_edge_exclusion) {
            structural.insert(0, LocalRule::tucker1(2).expect("t = 2 is valid"));
        }
        for rule in &structural {
            match rule.diameter() {
                Some(d) if d <= bound => {}
                Some(d) => {
                    return Err(Error::InvalidRule(format!(
                        "pattern of {:?} has diameter {d} > bound {bound}",
                        rule.name()
                    )));
                }
                None => {
                    return Err(Error::InvalidRule(format!(
                        "pattern of {:?} is empty or disconnected",
                        rule.name()
                    )));
                }
            }
        }
        Ok(RuleBase {
            structural,
            nonstructural,
            palette,
            bound,
        })
    }

    /// The Tucker rule-base: both Tucker rules for every clique size
    /// `2..=t`, no nonstructural rule, locality bound 2.
    pub fn tucker(t: u32) -> Result<RuleBase, Error> {
        let mut rules = Vec::new();
        for s in 2..=t {
            rules.push(LocalRule::tucker1(s)?);
        }
        for s in 2..=t {
            rules.push(LocalRule::tucker2(s)?);
        }
        RuleBase::new(rules, None, t, 2)
    }

    /// The greedy rule-base: edge exclusion plus the greedy rule, locality
    /// bound 1.
    pub fn greedy_base(t: u32) -> Result<RuleBase, Error> {
        RuleBase::new(vec![LocalRule::tucker1(2)?], Some(greedy()), t, 1)
    }

    /// Tucker rules plus greedy.
    pub fn tucker_with_greedy(t: u32) -> Result<RuleBase, Error> {
        let tucker = RuleBase::tucker(t)?;
        RuleBase::new(tucker.structural, Some(greedy()), t, 2)
    }

    /// Looks up a preset by its CLI name.
    pub fn preset(name: &str, t: u32) -> Result<RuleBase, Error> {
        match name {
            "RT" => RuleBase::tucker(t),
            "RG" => RuleBase::greedy_base(t),
            "RT+greedy" => RuleBase::tucker_with_greedy(t),
            other => Err(Error::InvalidParameter(format!("unknown rule-base {other:?}"))),
        }
    }

    pub fn structural(&self) -> &[LocalRule] {
        &self.structural
    }

    pub fn nonstructural(&self) -> Option<&NonstructuralRule> {
        self.nonstructural.as_ref()
    }

    pub fn is_structural(&self) -> bool {
        self.nonstructural.is_none()
    }

    pub fn palette(&self) -> u32 {
        self.palette
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }
}

fn is_edge_exclusion(rule: &LocalRule) -> bool {
    rule.pattern.graph().vertex_count() == 2
        && matches!(
            rule.kind,
            UpdateKind::SubtractUnion {
                required_union_size: 1
            }
        )
        && rule.nonadjacent.is_none()
}

/// One recorded violation from [`validate_rule`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleViolation {
    /// The update grew the target's list.
    Shrink { lists: Vec<ColorSet> },
    /// The update changed the pattern's solution set.
    SolutionSet { lists: Vec<ColorSet> },
    /// Pointwise-contained assignments produced non-contained updates.
    Monotonicity {
        smaller: Vec<ColorSet>,
        larger: Vec<ColorSet>,
    },
}

/// Outcome of exhaustively validating a rule on its own pattern.
#[derive(Debug, Clone, Default)]
pub struct RuleReport {
    pub assignments_checked: u64,
    pub pairs_checked: u64,
    pub violations: Vec<RuleViolation>,
}

impl RuleReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustively checks the three local-rule properties on the rule's own
/// pattern over palette `1..=t`:
///
/// (a) every update shrinks; (b) the pattern's solution set is preserved;
/// (c) pointwise-contained list assignments update to pointwise-contained
/// assignments.
///
/// Property (c) is only meaningful for assignments that admit a solution:
/// the smaller side of each pair is required to be solvable, otherwise
/// vacuous conflicts (two adjacent vertices sharing a singleton list) would
/// condemn every subtract-style rule. Patterns larger than `sample_bound`
/// vertices are rejected.
pub fn validate_rule(
    rule: &LocalRule,
    t: u32,
    sample_bound: usize,
    oracle: &Oracle,
) -> Result<RuleReport, Error> {
    let pattern = rule.pattern();
    let host = pattern.graph().clone();
    let p = host.vertex_count();
    if p > sample_bound {
        return Err(Error::InvalidParameter(format!(
            "pattern has {p} vertices, sample bound is {sample_bound}"
        )));
    }
    let restricted = host.vertex_set();
    let identity: Vec<(&str, VertexId)> = pattern
        .labels()
        .iter()
        .map(|l| (l.as_str(), pattern.vertex_of(l).expect("fully marked")))
        .collect();
    let emb = crate::embed::enumerate_embeddings_pinned(&host, &restricted, pattern, &identity)?
        .pop()
        .expect("identity embedding exists");

    let labels: Vec<Label> = pattern.labels().to_vec();
    let order: Vec<VertexId> = labels
        .iter()
        .map(|l| pattern.vertex_of(l).expect("fully marked"))
        .collect();

    let all: Vec<Vec<ColorSet>> = assignments(t, p);
    let mut report = RuleReport::default();

    let mut updated: Vec<Option<Vec<ColorSet>>> = Vec::with_capacity(all.len());
    let mut solvable: Vec<bool> = Vec::with_capacity(all.len());
    for asg in &all {
        report.assignments_checked += 1;
        let lists: BTreeMap<VertexId, ColorSet> =
            order.iter().copied().zip(asg.iter().copied()).collect();
        let problem = ListColoringProblem::new(host.clone(), lists.clone(), t)?;
        let before = oracle.enumerate_solutions(&problem, None)?.complete().expect("uncapped");
        solvable.push(!before.is_empty());

        match rule.apply(&host, &lists, &emb) {
            None => updated.push(None),
            Some(new_target) => {
                let target_v = emb.image_of(rule.target()).expect("target is a label");
                let old_target = lists[&target_v];
                if !new_target.is_subset(old_target) {
                    report.violations.push(RuleViolation::Shrink { lists: asg.clone() });
                }
                let mut after_lists = lists.clone();
                after_lists.insert(target_v, new_target);
                let after_problem = ListColoringProblem::new(host.clone(), after_lists, t)?;
                let after = oracle
                    .enumerate_solutions(&after_problem, None)?
                    .complete()
                    .expect("uncapped");
                if before != after {
                    report
                        .violations
                        .push(RuleViolation::SolutionSet { lists: asg.clone() });
                }
                let new_asg: Vec<ColorSet> = order
                    .iter()
                    .zip(asg)
                    .map(|(v, &old)| if *v == target_v { new_target } else { old })
                    .collect();
                updated.push(Some(new_asg));
            }
        }
    }

    // Monotonicity over all pointwise-contained pairs with a solvable
    // smaller side. A non-firing side keeps its lists.
    for (i, small) in all.iter().enumerate() {
        if !solvable[i] {
            continue;
        }
        for (j, large) in all.iter().enumerate() {
            if !pointwise_subset(small, large) {
                continue;
            }
            report.pairs_checked += 1;
            let small_after = updated[i].as_ref().unwrap_or(small);
            let large_after = updated[j].as_ref().unwrap_or(large);
            if !pointwise_subset(small_after, large_after) {
                report.violations.push(RuleViolation::Monotonicity {
                    smaller: small.clone(),
                    larger: large.clone(),
                });
            }
        }
    }
    Ok(report)
}

fn assignments(t: u32, p: usize) -> Vec<Vec<ColorSet>> {
    let subsets: Vec<ColorSet> = ColorSet::all_subsets(t).collect();
    let mut out: Vec<Vec<ColorSet>> = vec![Vec::new()];
    for _ in 0..p {
        let mut next = Vec::with_capacity(out.len() * subsets.len());
        for prefix in &out {
            for &s in &subsets {
                let mut asg = prefix.clone();
                asg.push(s);
                next.push(asg);
            }
        }
        out = next;
    }
    out
}

fn pointwise_subset(a: &[ColorSet], b: &[ColorSet]) -> bool {
    a.iter().zip(b).all(|(x, y)| x.is_subset(*y))
}

/// Result of an oracle-certified forcing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ForceOutcome {
    /// The certified update; maps each changed vertex to its new list.
    Forced(BTreeMap<VertexId, ColorSet>),
    /// The certificate does not hold; lists unchanged.
    NotApplicable,
    /// The subproblem exceeds the vertex cap; never guess.
    Undecided,
}

/// Type-1 forcing: when the induced subproblem on `sub` (over the union `A`
/// of its lists) has a single solution up to color permutation and `v`'s
/// neighborhood inside `sub` meets every color class of it, `A` can be
/// removed from `v`'s list without changing the solution set.
pub fn type1_force(
    problem: &ListColoringProblem,
    sub: &BTreeSet<VertexId>,
    v: VertexId,
    cap: usize,
) -> Result<ForceOutcome, Error> {
    if sub.contains(&v) {
        return Err(Error::InvalidParameter("target vertex lies inside the subproblem".into()));
    }
    if !problem.graph.has_vertex(v) {
        return Err(Error::MissingVertex(v));
    }
    if sub.len() > cap {
        return Ok(ForceOutcome::Undecided);
    }
    let sub_graph = problem.graph.induced_subgraph(sub)?;
    let mut union = ColorSet::EMPTY;
    let sub_lists: BTreeMap<VertexId, ColorSet> = sub
        .iter()
        .map(|&u| {
            let l = problem.lists[&u];
            union = union.union(l);
            (u, l)
        })
        .collect();
    if union.len() as u32 > problem.palette {
        return Ok(ForceOutcome::NotApplicable);
    }
    let sub_problem = ListColoringProblem::new(sub_graph, sub_lists, problem.palette)?;
    let oracle = Oracle::new(cap);
    let Some(classes) = oracle.fixed_partition(&sub_problem)? else {
        return Ok(ForceOutcome::NotApplicable);
    };
    // Every solution must use all |A| colors: with fewer nonempty classes
    // than colors in A, the classes' colors are not pinned to A and the
    // subtraction would be unsound.
    if classes.len() != union.len() {
        return Ok(ForceOutcome::NotApplicable);
    }
    let neighborhood: BTreeSet<VertexId> = problem
        .graph
        .neighbors(v)
        .filter(|u| sub.contains(u))
        .collect();
    let hits_all = classes
        .iter()
        .all(|cls| cls.iter().any(|u| neighborhood.contains(u)));
    if !hits_all {
        return Ok(ForceOutcome::NotApplicable);
    }
    let new_list = problem.lists[&v].minus(union);
    Ok(ForceOutcome::Forced([(v, new_list)].into()))
}

/// Type-2 forcing: when, in every coloring of the induced subproblem on
/// `g_sub ∪ vstar` consistent with the lists, `vstar` is a fixed color
/// class, all its lists may be replaced by their intersection.
pub fn type2_force(
    problem: &ListColoringProblem,
    g_sub: &BTreeSet<VertexId>,
    vstar: &BTreeSet<VertexId>,
    cap: usize,
) -> Result<ForceOutcome, Error> {
    if !g_sub.is_disjoint(vstar) {
        return Err(Error::InvalidParameter("subproblem and target set overlap".into()));
    }
    if vstar.is_empty() {
        return Err(Error::InvalidParameter("empty target set".into()));
    }
    let combined: BTreeSet<VertexId> = g_sub.union(vstar).copied().collect();
    if combined.len() > cap {
        return Ok(ForceOutcome::Undecided);
    }
    let sub_graph = problem.graph.induced_subgraph(&combined)?;
    let sub_lists: BTreeMap<VertexId, ColorSet> = combined
        .iter()
        .map(|&u| (u, problem.lists[&u]))
        .collect();
    let sub_problem = ListColoringProblem::new(sub_graph, sub_lists, problem.palette)?;
    let oracle = Oracle::new(cap);
    let sols = oracle
        .enumerate_solutions(&sub_problem, None)?
        .complete()
        .expect("uncapped");
    if sols.is_empty() {
        return Ok(ForceOutcome::NotApplicable);
    }
    let fixed = sols.iter().all(|sol| {
        let mut classes: BTreeMap<Color, BTreeSet<VertexId>> = BTreeMap::new();
        for (&u, &c) in sol {
            classes.entry(c).or_default().insert(u);
        }
        classes.values().any(|cls| cls == vstar)
    });
    if !fixed {
        return Ok(ForceOutcome::NotApplicable);
    }
    let mut intersection = ColorSet::full(problem.palette);
    for &u in vstar {
        intersection = intersection.intersect(problem.lists[&u]);
    }
    Ok(ForceOutcome::Forced(
        vstar.iter().map(|&u| (u, intersection)).collect(),
    ))
}
