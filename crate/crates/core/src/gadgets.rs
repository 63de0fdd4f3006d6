//! Forcing-gadget families and the hardness-reduction builders.
//!
//! Each family comes with its published vertex ordering and proper coloring.
//! Where an ordering formula skips or collides ranks for some parameters,
//! the builder keeps the intended relative order and compacts ranks to a
//! bijection; bijectivity is verified on every construction, and the
//! certificate replays through the solver are the real correctness check.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::Error;
use crate::graph::{Color, Coloring, Graph, VertexId, VertexOrder};
use crate::marked::{Label, MarkedGraph};

/// Which family an instance belongs to, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GadgetKind {
    D { k: u32 },
    GXi { xi: u32, k: u32 },
    F { k: u32 },
    H { n: u32 },
}

/// A fully-labelled gadget: graph, scan order, proper coloring, and the
/// labels of its boundary (interface) vertices.
#[derive(Debug, Clone)]
pub struct GadgetInstance {
    pub marked: MarkedGraph,
    pub order: VertexOrder,
    pub coloring: Coloring,
    pub interface: Vec<Label>,
    pub kind: GadgetKind,
}

impl GadgetInstance {
    pub fn graph(&self) -> &Graph {
        self.marked.graph()
    }

    pub fn vertex(&self, label: &str) -> Option<VertexId> {
        self.marked.vertex_of(label)
    }

    /// Resolves a set of labels to vertex ids.
    pub fn vertices_of(&self, labels: &[&str]) -> Result<BTreeSet<VertexId>, Error> {
        labels
            .iter()
            .map(|l| {
                self.vertex(l)
                    .ok_or_else(|| Error::InvalidMarks(format!("no vertex labelled {l:?}")))
            })
            .collect()
    }
}

fn kt3(a: &str, b: &str, c: &str) -> MarkedGraph {
    MarkedGraph::clique(&[a, b, c])
}

fn edge(a: &str, b: &str) -> MarkedGraph {
    MarkedGraph::edge(a, b)
}

/// Instantiates a gadget from its parts plus per-label ranks and colors.
fn assemble(
    parts: Vec<MarkedGraph>,
    ranks: &BTreeMap<Label, u32>,
    colors: &BTreeMap<Label, Color>,
    palette: u32,
    interface: Vec<Label>,
    kind: GadgetKind,
) -> Result<GadgetInstance, Error> {
    let marked = MarkedGraph::sum(parts).expect("gadgets have at least one part");
    let graph = marked.graph().clone();
    let rank_map: BTreeMap<VertexId, u32> = marked
        .marks()
        .map(|(l, v)| {
            let r = ranks
                .get(l)
                .unwrap_or_else(|| panic!("label {l:?} has no rank"));
            (v, *r)
        })
        .collect();
    // Bijectivity onto 1..=n is enforced here; a failure means the rank
    // formula itself is wrong.
    let order = VertexOrder::new(&graph, rank_map)?;
    let assign: BTreeMap<VertexId, Color> = marked
        .marks()
        .map(|(l, v)| {
            let c = colors
                .get(l)
                .unwrap_or_else(|| panic!("label {l:?} has no color"));
            (v, *c)
        })
        .collect();
    let coloring = Coloring::new(&graph, assign, palette)?;
    assert!(
        coloring.is_proper(&graph),
        "gadget coloring must be proper"
    );
    Ok(GadgetInstance {
        marked,
        order,
        coloring,
        interface,
        kind,
    })
}

/// The spine gadget `D_k` on interface `u, v`: a chain of `k - 1` triangle
/// pairs between `x_1 .. x_k`, a hub `z` seeing `u`, `x_1` and every
/// `v_{1,i}`, and `v` attached at `x_k`. Seeding `u, v` forces the whole
/// gadget in exactly `k` rounds.
///
/// `D_1` degenerates to the path `u - z - v`.
pub fn build_d(k: u32) -> Result<GadgetInstance, Error> {
    if k < 1 {
        return Err(Error::InvalidParameter("D_k needs k >= 1".into()));
    }
    let mut parts = Vec::new();
    let mut ranks: BTreeMap<Label, u32> = BTreeMap::new();
    let mut colors: BTreeMap<Label, Color> = BTreeMap::new();
    for (label, color) in d_base_colors(k) {
        colors.insert(label, color);
    }

    if k == 1 {
        parts.push(edge("u", "z"));
        parts.push(edge("v", "z"));
        ranks.extend([("u".into(), 1), ("v".into(), 2), ("z".into(), 3)]);
        return assemble(parts, &ranks, &colors, 3, vec!["u".into(), "v".into(), "z".into()], GadgetKind::D { k });
    }

    parts.push(edge("u", "z"));
    parts.push(edge("u", &format!("x_{k}")));
    parts.push(edge("v", &format!("x_{k}")));
    parts.push(edge("z", "x_1"));
    for i in 1..k {
        parts.push(kt3(&format!("x_{i}"), &format!("v_{{1,{i}}}"), &format!("v_{{2,{i}}}")));
        parts.push(kt3(&format!("x_{}", i + 1), &format!("v_{{1,{i}}}"), &format!("v_{{2,{i}}}")));
    }
    for i in 1..k {
        parts.push(edge("z", &format!("v_{{1,{i}}}")));
    }

    ranks.insert("u".into(), 1);
    ranks.insert("v".into(), 2);
    ranks.insert("z".into(), k + 3);
    for i in 1..=k {
        ranks.insert(format!("x_{i}"), i + 2);
    }
    for i in 1..k {
        ranks.insert(format!("v_{{1,{i}}}"), k + 2 * i + 2);
        ranks.insert(format!("v_{{2,{i}}}"), k + 2 * i + 3);
    }
    assemble(parts, &ranks, &colors, 3, vec!["u".into(), "v".into()], GadgetKind::D { k })
}

/// Per-label colors of `D_k`, parameterized by the interface colors:
/// `u` gets `a`, `v` gets `b`. The published coloring is `(a, b) = (3, 1)`.
fn d_colors_for(k: u32, a: Color, b: Color) -> BTreeMap<Label, Color> {
    let c = third_color(a, b);
    let mut out: BTreeMap<Label, Color> = BTreeMap::new();
    out.insert("u".into(), a);
    out.insert("v".into(), b);
    // In D_1 the hub is adjacent to both interface vertices and must take
    // the remaining color; for k >= 2 it is only adjacent to u.
    out.insert("z".into(), if k == 1 { c } else { b });
    for i in 1..=k {
        out.insert(format!("x_{i}"), c);
    }
    for i in 1..k {
        out.insert(format!("v_{{1,{i}}}"), a);
        out.insert(format!("v_{{2,{i}}}"), b);
    }
    out
}

fn d_base_colors(k: u32) -> BTreeMap<Label, Color> {
    d_colors_for(k, Color(3), Color(1))
}

fn third_color(a: Color, b: Color) -> Color {
    debug_assert!(a != b && a.0 >= 1 && a.0 <= 3 && b.0 >= 1 && b.0 <= 3);
    Color(6 - a.0 - b.0)
}

/// `G_ξ`: `ξ` copies of `D_{k+1}` amalgamated on the shared interface
/// `u, v`. Interior labels carry a copy suffix. The published interior rank
/// offset collides between copies, so ranks are laid out in contiguous
/// per-copy blocks of `|V(D_{k+1})| - 2` instead, preserving each copy's
/// internal order.
pub fn build_g_xi(xi: u32, k: u32) -> Result<GadgetInstance, Error> {
    if xi < 1 || k < 1 {
        return Err(Error::InvalidParameter("G_xi needs xi >= 1 and k >= 1".into()));
    }
    let inner = build_d(k + 1)?;
    let block = (inner.graph().vertex_count() - 2) as u32;
    let mut parts = Vec::new();
    let mut ranks: BTreeMap<Label, u32> = BTreeMap::new();
    let mut colors: BTreeMap<Label, Color> = BTreeMap::new();
    ranks.insert("u".into(), 1);
    ranks.insert("v".into(), 2);
    let base_colors = d_base_colors(k + 1);
    colors.insert("u".into(), base_colors["u"]);
    colors.insert("v".into(), base_colors["v"]);

    for j in 1..=xi {
        let copy = inner
            .marked
            .relabel(|l| match l {
                "u" | "v" => l.to_string(),
                other => format!("{other}^{{{j}}}"),
            })?;
        for (l, _) in inner.marked.marks() {
            if l == "u" || l == "v" {
                continue;
            }
            let copy_label = format!("{l}^{{{j}}}");
            let inner_rank = inner
                .order
                .rank(inner.vertex(l).expect("gadget label"))
                .expect("gadget rank");
            ranks.insert(copy_label.clone(), 2 + block * (j - 1) + (inner_rank - 2));
            colors.insert(copy_label, base_colors[l]);
        }
        parts.push(copy);
    }
    assemble(parts, &ranks, &colors, 3, vec!["u".into(), "v".into()], GadgetKind::GXi { xi, k })
}

/// The vertex-cover gadget `F_k` on interface `u, v, x, y`; `3k + 12`
/// vertices. Seeding `u, v` and either of `x, y` forces the gadget in
/// exactly `k` rounds.
pub fn build_f(k: u32) -> Result<GadgetInstance, Error> {
    if k < 2 {
        return Err(Error::InvalidParameter("F_k needs k >= 2".into()));
    }
    let mut parts = vec![
        edge("z_1", "x"),
        edge("z~_1", "y"),
        edge("z_1", "v"),
        edge("z~_1", "v"),
        edge("u", "z_3"),
        edge("u", "z~_3"),
        edge("u", "z_5"),
        edge("u", "z~_5"),
        kt3("z_1", "z_2", "z_3"),
        kt3("z~_1", "z~_2", "z~_3"),
        kt3("z_4", "z_2", "z_3"),
        kt3("z~_4", "z~_2", "z~_3"),
        kt3("z_5", "z_4", "y"),
        kt3("z~_5", "z~_4", "x"),
    ];
    for i in 1..k {
        parts.push(kt3(&format!("y_{i}"), &format!("x_{{1,{i}}}"), &format!("x_{{2,{i}}}")));
        parts.push(kt3(&format!("y_{}", i + 1), &format!("x_{{1,{i}}}"), &format!("x_{{2,{i}}}")));
    }
    for i in 1..k {
        parts.push(edge("u", &format!("x_{{1,{i}}}")));
    }
    parts.push(edge("x", &format!("y_{k}")));
    parts.push(edge("y", &format!("y_{k}")));
    parts.push(edge("v", &format!("y_{k}")));

    let mut ranks: BTreeMap<Label, u32> = f_ranks(k);
    let colors = f_colors(k);
    // Interface order fixed by the construction.
    ranks.insert("u".into(), 1);
    assemble(
        parts,
        &ranks,
        &colors,
        3,
        vec!["u".into(), "v".into(), "x".into(), "y".into()],
        GadgetKind::F { k },
    )
}

fn f_ranks(k: u32) -> BTreeMap<Label, u32> {
    let mut r: BTreeMap<Label, u32> = BTreeMap::new();
    r.extend([
        ("u".into(), 1),
        ("v".into(), 2),
        ("x".into(), 3),
        ("y".into(), 4),
        ("z_1".into(), 5),
        ("z~_1".into(), 6),
        ("z_4".into(), 7),
        ("z~_4".into(), 8),
        ("z_5".into(), 9),
        ("z~_5".into(), 10),
        ("z_3".into(), 11),
        ("z~_3".into(), 12),
        ("z_2".into(), 13),
        ("z~_2".into(), 14),
    ]);
    for i in 1..=k {
        r.insert(format!("y_{i}"), 14 + i);
    }
    for i in 1..k {
        r.insert(format!("x_{{1,{i}}}"), 15 + k + 2 * (i - 1));
        r.insert(format!("x_{{2,{i}}}"), 16 + k + 2 * (i - 1));
    }
    r
}

fn f_colors(k: u32) -> BTreeMap<Label, Color> {
    let mut c: BTreeMap<Label, Color> = BTreeMap::new();
    c.extend([
        ("u".into(), Color(1)),
        ("v".into(), Color(2)),
        ("x".into(), Color(1)),
        ("y".into(), Color(1)),
        ("z_1".into(), Color(3)),
        ("z~_1".into(), Color(3)),
        ("z_4".into(), Color(3)),
        ("z~_4".into(), Color(3)),
        ("z_5".into(), Color(2)),
        ("z~_5".into(), Color(2)),
        ("z_3".into(), Color(2)),
        ("z~_3".into(), Color(2)),
        ("z_2".into(), Color(1)),
        ("z~_2".into(), Color(1)),
    ]);
    for i in 1..=k {
        c.insert(format!("y_{i}"), Color(3));
    }
    for i in 1..k {
        c.insert(format!("x_{{1,{i}}}"), Color(2));
        c.insert(format!("x_{{2,{i}}}"), Color(1));
    }
    c
}

/// The rule-base-independent vertex-cover gadget `H_n` on interface
/// `x, y, v`: `n` triangle pairs between `x` and `y`, with `v` attached to
/// every `u_{1,i}`; `2n + 3` vertices. Seeding `v` and either of `x, y`
/// forces everything in one round.
pub fn build_h(n: u32) -> Result<GadgetInstance, Error> {
    if n < 2 {
        return Err(Error::InvalidParameter("H_n needs n >= 2".into()));
    }
    let mut parts = Vec::new();
    for i in 1..=n {
        parts.push(kt3("x", &format!("u_{{1,{i}}}"), &format!("u_{{2,{i}}}")));
        parts.push(kt3("y", &format!("u_{{1,{i}}}"), &format!("u_{{2,{i}}}")));
    }
    for i in 1..=n {
        parts.push(edge("v", &format!("u_{{1,{i}}}")));
    }
    let mut ranks: BTreeMap<Label, u32> = BTreeMap::new();
    let mut colors: BTreeMap<Label, Color> = BTreeMap::new();
    ranks.insert("v".into(), 1);
    ranks.insert("x".into(), 2 * n + 2);
    ranks.insert("y".into(), 2 * n + 3);
    colors.insert("v".into(), Color(3));
    colors.insert("x".into(), Color(1));
    colors.insert("y".into(), Color(1));
    for i in 1..=n {
        ranks.insert(format!("u_{{1,{i}}}"), 2 * i);
        ranks.insert(format!("u_{{2,{i}}}"), 2 * i + 1);
        colors.insert(format!("u_{{1,{i}}}"), Color(2));
        colors.insert(format!("u_{{2,{i}}}"), Color(3));
    }
    assemble(
        parts,
        &ranks,
        &colors,
        3,
        vec!["x".into(), "y".into(), "v".into()],
        GadgetKind::H { n },
    )
}

/// Weak or strong variant of the 3-colorability reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionMode {
    Weak,
    Strong,
}

/// A built reduction instance: the labelled graph with its scan order, the
/// decision bound, the instance coloring when one is intrinsic or supplied,
/// and the certificate seed set for yes-instances.
#[derive(Debug, Clone)]
pub struct ReductionOutput {
    pub marked: MarkedGraph,
    pub order: VertexOrder,
    pub coloring: Option<Coloring>,
    pub bound: u32,
    pub certificate: Option<BTreeSet<VertexId>>,
    /// Where each input vertex landed in the instance.
    pub base_map: BTreeMap<VertexId, VertexId>,
}

impl ReductionOutput {
    pub fn graph(&self) -> &Graph {
        self.marked.graph()
    }
}

/// Label for an input vertex inside a reduction instance. Letter-prefixed
/// so it can never shadow a raw instance id in CLI lookups.
fn base_label(v: VertexId) -> Label {
    format!("b{}", v.0)
}

/// Edges of `g` in lexicographic rank order, each as (lower, higher) by
/// rank; the 1-based position is the edge index.
fn ordered_edges(g: &Graph, order: &VertexOrder) -> Vec<(VertexId, VertexId)> {
    let mut edges: Vec<(u32, u32, VertexId, VertexId)> = g
        .edges()
        .into_iter()
        .map(|(a, b)| {
            let (ra, rb) = (order.rank(a).unwrap_or(0), order.rank(b).unwrap_or(0));
            if ra <= rb {
                (ra, rb, a, b)
            } else {
                (rb, ra, b, a)
            }
        })
        .collect();
    edges.sort();
    edges.into_iter().map(|(_, _, a, b)| (a, b)).collect()
}

/// Isolated copy of the base vertices, labelled by their input id, so the
/// instance keeps vertices that no gadget touches.
fn base_part(g: &Graph) -> MarkedGraph {
    let ids: Vec<VertexId> = (0..g.vertex_count() as u32).map(VertexId).collect();
    let mut base = Graph::new();
    for &v in &ids {
        base.add_vertex(v);
    }
    MarkedGraph::new(base, g.vertices().map(base_label).zip(ids))
        .expect("base labels are distinct")
}

/// Compacts (possibly gappy) rank formulas to a bijection, preserving the
/// relative order and breaking ties by construction sequence.
fn compact_order(
    marked: &MarkedGraph,
    formula: &BTreeMap<Label, (u64, usize)>,
) -> Result<VertexOrder, Error> {
    let mut items: Vec<(u64, usize, VertexId)> = marked
        .marks()
        .map(|(l, v)| {
            let &(r, seq) = formula
                .get(l)
                .unwrap_or_else(|| panic!("label {l:?} has no rank formula"));
            (r, seq, v)
        })
        .collect();
    items.sort();
    let rank = items
        .into_iter()
        .enumerate()
        .map(|(i, (_, _, v))| (v, i as u32 + 1))
        .collect();
    VertexOrder::new(marked.graph(), rank)
}

/// Replaces every edge of `g` by parallel spine-gadget copies. Weak mode
/// uses `n` copies per edge and bound `ξ = n`; strong mode uses `n + k`
/// copies and bound `ξ = n + k - 1`. A supplied proper 3-coloring of `g`
/// yields the instance coloring (interiors forced per edge by the endpoint
/// colors) and the certificate seed set `A = V(g)`.
pub fn reduce_3col(
    g: &Graph,
    order: &VertexOrder,
    k: u32,
    mode: ReductionMode,
    witness: Option<&Coloring>,
) -> Result<ReductionOutput, Error> {
    if k < 1 {
        return Err(Error::InvalidParameter("reduction needs k >= 1".into()));
    }
    if order.len() != g.vertex_count() {
        return Err(Error::InvalidOrdering("ordering does not cover the graph".into()));
    }
    if let Some(w) = witness {
        if w.palette() != 3 || !w.is_proper(g) {
            return Err(Error::InvalidColoring(
                "3-coloring witness must be proper with palette 3".into(),
            ));
        }
    }
    let n = g.vertex_count() as u32;
    let copies = match mode {
        ReductionMode::Weak => n,
        ReductionMode::Strong => n + k,
    };
    let bound = match mode {
        ReductionMode::Weak => n,
        ReductionMode::Strong => n + k - 1,
    };
    let inner = build_d(k)?;
    let interior_block = (inner.graph().vertex_count() - 2) as u64;
    let _ = interior_block;

    let mut parts = vec![base_part(g)];
    let mut formula: BTreeMap<Label, (u64, usize)> = BTreeMap::new();
    let mut colors: BTreeMap<Label, Color> = BTreeMap::new();
    let mut seq = 0usize;
    for v in g.vertices() {
        formula.insert(base_label(v), (order.rank(v).expect("covered") as u64, seq));
        seq += 1;
        if let Some(w) = witness {
            colors.insert(base_label(v), w.get(v).expect("total"));
        }
    }

    for (j, &(eu, ev)) in ordered_edges(g, order).iter().enumerate() {
        let j1 = j as u64 + 1;
        for i in 1..=copies {
            let copy_tag = format!("^{{{i},{j1}}}");
            let copy = inner.marked.relabel(|l| match l {
                "u" => base_label(eu),
                "v" => base_label(ev),
                other => format!("{other}{copy_tag}"),
            })?;
            let witness_colors = witness.map(|w| {
                d_colors_for(k, w.get(eu).expect("total"), w.get(ev).expect("total"))
            });
            for (l, lv) in inner.marked.marks() {
                if l == "u" || l == "v" {
                    continue;
                }
                let copy_label = format!("{l}{copy_tag}");
                let inner_rank = inner.order.rank(lv).expect("gadget rank") as u64;
                let offset = (3 * k as u64 - 1)
                    * (copies as u64 * (j1 - 1) + (i as u64 - 1));
                formula.insert(copy_label.clone(), (n as u64 + offset + inner_rank, seq));
                seq += 1;
                if let Some(wc) = &witness_colors {
                    colors.insert(copy_label, wc[l]);
                }
            }
            parts.push(copy);
        }
    }

    let marked = MarkedGraph::sum(parts).expect("at least the base part");
    let order_out = compact_order(&marked, &formula)?;
    let base_map: BTreeMap<VertexId, VertexId> = g
        .vertices()
        .map(|v| (v, marked.vertex_of(&base_label(v)).expect("base kept")))
        .collect();
    let coloring = match witness {
        Some(_) => {
            let assign: BTreeMap<VertexId, Color> = marked
                .marks()
                .map(|(l, v)| (v, colors[l]))
                .collect();
            let c = Coloring::new(marked.graph(), assign, 3)?;
            assert!(c.is_proper(marked.graph()), "induced reduction coloring must be proper");
            Some(c)
        }
        None => None,
    };
    let certificate = witness.map(|_| base_map.values().copied().collect());
    Ok(ReductionOutput {
        marked,
        order: order_out,
        coloring,
        bound,
        certificate,
        base_map,
    })
}

/// The vertex-cover-to-defining-set reduction: `n + k + 2` copies of `F_k`
/// per edge, all sharing the fresh interface pair `u, v`; bound
/// `t̃ = t + k + 1`. A supplied cover `C` (of size at most `t`) yields the
/// certificate `A₁ = C ∪ {u, v}`.
pub fn reduce_vertexcover_sds(
    g: &Graph,
    order: &VertexOrder,
    t: u32,
    k: u32,
    cover: Option<&BTreeSet<VertexId>>,
) -> Result<ReductionOutput, Error> {
    if k < 2 {
        return Err(Error::InvalidParameter("reduction needs k >= 2".into()));
    }
    if order.len() != g.vertex_count() {
        return Err(Error::InvalidOrdering("ordering does not cover the graph".into()));
    }
    validate_cover(g, t, cover)?;
    let n = g.vertex_count() as u32;
    let copies = n + k + 2;
    let inner = build_f(k)?;
    let block = 3 * k as u64 + 8;

    let mut parts = vec![base_part(g)];
    let mut formula: BTreeMap<Label, (u64, usize)> = BTreeMap::new();
    let mut colors: BTreeMap<Label, Color> = BTreeMap::new();
    let mut seq = 0usize;
    formula.insert("u".into(), (1, seq));
    seq += 1;
    formula.insert("v".into(), (2, seq));
    seq += 1;
    colors.insert("u".into(), Color(1));
    colors.insert("v".into(), Color(2));
    for v in g.vertices() {
        // The published base ranks start at 1 and would collide with u, v;
        // shifting by 2 restores the intended layout (interior ranks start
        // at n + 3).
        formula.insert(base_label(v), (order.rank(v).expect("covered") as u64 + 2, seq));
        seq += 1;
        colors.insert(base_label(v), Color(1));
    }

    for (j, &(ex, ey)) in ordered_edges(g, order).iter().enumerate() {
        let j1 = j as u64 + 1;
        for i in 1..=copies {
            let copy_tag = format!("^{{{i},{j1}}}");
            let copy = inner.marked.relabel(|l| match l {
                "u" | "v" => l.to_string(),
                "x" => base_label(ex),
                "y" => base_label(ey),
                other => format!("{other}{copy_tag}"),
            })?;
            for (l, lv) in inner.marked.marks() {
                if matches!(l.as_str(), "u" | "v" | "x" | "y") {
                    continue;
                }
                let copy_label = format!("{l}{copy_tag}");
                let mu = inner.order.rank(lv).expect("gadget rank") as u64;
                let offset = block * (copies as u64 * (j1 - 1) + (i as u64 - 1));
                formula.insert(copy_label.clone(), (n as u64 + mu - 2 + offset + 2, seq));
                seq += 1;
                colors.insert(
                    copy_label,
                    inner.coloring.get(lv).expect("gadget coloring"),
                );
            }
            parts.push(copy);
        }
    }

    let marked = MarkedGraph::sum(parts).expect("at least the base part");
    let order_out = compact_order(&marked, &formula)?;
    let assign: BTreeMap<VertexId, Color> = marked.marks().map(|(l, v)| (v, colors[l])).collect();
    let coloring = Coloring::new(marked.graph(), assign, 3)?;
    assert!(coloring.is_proper(marked.graph()), "instance coloring must be proper");
    let base_map: BTreeMap<VertexId, VertexId> = g
        .vertices()
        .map(|v| (v, marked.vertex_of(&base_label(v)).expect("base kept")))
        .collect();
    let certificate = cover.map(|c| {
        let mut a: BTreeSet<VertexId> = c.iter().map(|v| base_map[v]).collect();
        a.insert(marked.vertex_of("u").expect("interface"));
        a.insert(marked.vertex_of("v").expect("interface"));
        a
    });
    Ok(ReductionOutput {
        marked,
        order: order_out,
        coloring: Some(coloring),
        bound: t + k + 1,
        certificate,
        base_map,
    })
}

/// The rule-base-independent vertex-cover reduction: one copy of
/// `H_{|V(g)|}` per edge, sharing the fresh apex `v`; bound `t̃ = t + 1`.
/// A supplied cover `C` yields the certificate `A₁ = C ∪ {v}`.
pub fn reduce_vertexcover_rulebase(
    g: &Graph,
    order: &VertexOrder,
    t: u32,
    cover: Option<&BTreeSet<VertexId>>,
) -> Result<ReductionOutput, Error> {
    if order.len() != g.vertex_count() {
        return Err(Error::InvalidOrdering("ordering does not cover the graph".into()));
    }
    let n = g.vertex_count() as u32;
    if n < 2 {
        return Err(Error::InvalidParameter("reduction needs at least 2 vertices".into()));
    }
    validate_cover(g, t, cover)?;
    let inner = build_h(n)?;
    let m = g.edge_count() as u64;

    let mut parts = vec![base_part(g)];
    let mut formula: BTreeMap<Label, (u64, usize)> = BTreeMap::new();
    let mut colors: BTreeMap<Label, Color> = BTreeMap::new();
    let mut seq = 0usize;
    formula.insert("v".into(), (1, seq));
    seq += 1;
    colors.insert("v".into(), Color(3));
    for w in g.vertices() {
        formula.insert(
            base_label(w),
            (2 * n as u64 * m + 1 + order.rank(w).expect("covered") as u64, seq),
        );
        seq += 1;
        colors.insert(base_label(w), Color(1));
    }

    for (j, &(ex, ey)) in ordered_edges(g, order).iter().enumerate() {
        let j1 = j as u64 + 1;
        let copy_tag = format!("^{{{j1}}}");
        let copy = inner.marked.relabel(|l| match l {
            "v" => l.to_string(),
            "x" => base_label(ex),
            "y" => base_label(ey),
            other => format!("{other}{copy_tag}"),
        })?;
        for (l, lv) in inner.marked.marks() {
            if matches!(l.as_str(), "v" | "x" | "y") {
                continue;
            }
            let copy_label = format!("{l}{copy_tag}");
            let omega = inner.order.rank(lv).expect("gadget rank") as u64;
            // The published interior offset leaves rank 2 unused and
            // collides with the first base rank; dropping the +1 restores a
            // contiguous block, and compaction guards the rest.
            formula.insert(copy_label.clone(), (2 * n as u64 * (j1 - 1) + omega, seq));
            seq += 1;
            colors.insert(copy_label, inner.coloring.get(lv).expect("gadget coloring"));
        }
        parts.push(copy);
    }

    let marked = MarkedGraph::sum(parts).expect("at least the base part");
    let order_out = compact_order(&marked, &formula)?;
    let assign: BTreeMap<VertexId, Color> = marked.marks().map(|(l, v)| (v, colors[l])).collect();
    let coloring = Coloring::new(marked.graph(), assign, 3)?;
    assert!(coloring.is_proper(marked.graph()), "instance coloring must be proper");
    let base_map: BTreeMap<VertexId, VertexId> = g
        .vertices()
        .map(|v| (v, marked.vertex_of(&base_label(v)).expect("base kept")))
        .collect();
    let certificate = cover.map(|c| {
        let mut a: BTreeSet<VertexId> = c.iter().map(|v| base_map[v]).collect();
        a.insert(marked.vertex_of("v").expect("interface"));
        a
    });
    Ok(ReductionOutput {
        marked,
        order: order_out,
        coloring: Some(coloring),
        bound: t + 1,
        certificate,
        base_map,
    })
}

fn validate_cover(g: &Graph, t: u32, cover: Option<&BTreeSet<VertexId>>) -> Result<(), Error> {
    let Some(c) = cover else { return Ok(()) };
    if let Some(&v) = c.iter().find(|v| !g.has_vertex(**v)) {
        return Err(Error::MissingVertex(v));
    }
    if c.len() as u32 > t {
        return Err(Error::InvalidParameter(format!(
            "cover has {} vertices, bound is {t}",
            c.len()
        )));
    }
    for (a, b) in g.edges() {
        if !c.contains(&a) && !c.contains(&b) {
            return Err(Error::InvalidParameter(format!(
                "witness does not cover edge {a}-{b}"
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{lists_from_defining_set, solve, OrderedListGraph, SolveOptions};
    use crate::rulebase::RuleBase;

    fn vid(i: u32) -> VertexId {
        VertexId(i)
    }

    fn solve_seeded(inst: &GadgetInstance, seeds: &[&str]) -> crate::engine::SolveResult {
        let a = inst.vertices_of(seeds).unwrap();
        let lists = lists_from_defining_set(inst.graph(), &inst.coloring, &a).unwrap();
        let state =
            OrderedListGraph::new(inst.graph().clone(), inst.order.clone(), lists, 3).unwrap();
        let rb = RuleBase::tucker(3).unwrap();
        solve(&state, &rb, &SolveOptions::default()).unwrap()
    }

    #[test]
    fn d1_is_a_path_with_fixed_ranks() {
        let d1 = build_d(1).unwrap();
        assert_eq!(d1.graph().vertex_count(), 3);
        assert_eq!(d1.graph().edge_count(), 2);
        let u = d1.vertex("u").unwrap();
        let v = d1.vertex("v").unwrap();
        let z = d1.vertex("z").unwrap();
        assert_eq!(d1.order.rank(u), Some(1));
        assert_eq!(d1.order.rank(v), Some(2));
        assert_eq!(d1.order.rank(z), Some(3));
        assert!(!d1.graph().has_edge(u, v));
    }

    #[test]
    fn d_gadget_counts_and_proper_colorings() {
        assert!(build_d(0).is_err());
        for k in 1..=4 {
            let d = build_d(k).unwrap();
            let expected = if k == 1 { 3 } else { 3 * k as usize + 1 };
            assert_eq!(d.graph().vertex_count(), expected, "k = {k}");
            // Edge-by-edge properness check.
            assert!(d.coloring.is_proper(d.graph()));
            // Max rank equals the vertex count.
            let max = d
                .graph()
                .vertices()
                .filter_map(|v| d.order.rank(v))
                .max()
                .unwrap();
            assert_eq!(max as usize, expected);
        }
    }

    #[test]
    fn d_gadget_interface_seed_solves_in_exactly_k_rounds() {
        for k in 1..=3 {
            let d = build_d(k).unwrap();
            let res = solve_seeded(&d, &["u", "v"]);
            assert!(res.done(), "k = {k}");
            assert_eq!(res.rounds, k, "k = {k}");
            // The recovered coloring is the published one.
            let got = res.coloring(d.graph(), 3).unwrap();
            assert_eq!(got, d.coloring);
        }
    }

    #[test]
    fn d_gadget_with_hub_seed_solves_in_one_round() {
        for k in 2..=3 {
            let d = build_d(k).unwrap();
            let res = solve_seeded(&d, &["u", "v", "x_1"]);
            assert!(res.done());
            assert_eq!(res.rounds, 1, "k = {k}");
        }
    }

    #[test]
    fn g_xi_counts_and_single_copy_degenerates() {
        let g1 = build_g_xi(1, 1).unwrap();
        let d2 = build_d(2).unwrap();
        assert_eq!(g1.graph().vertex_count(), d2.graph().vertex_count());
        assert_eq!(g1.graph().edge_count(), d2.graph().edge_count());

        let g2 = build_g_xi(2, 1).unwrap();
        assert_eq!(g2.graph().vertex_count(), 12);
        assert!(g2.coloring.is_proper(g2.graph()));
    }

    #[test]
    fn g_xi_interface_seed_takes_k_plus_one_rounds() {
        let g2 = build_g_xi(2, 1).unwrap();
        let res = solve_seeded(&g2, &["u", "v"]);
        assert!(res.done());
        assert_eq!(res.rounds, 2);
    }

    #[test]
    fn f_gadget_counts_and_colors() {
        assert!(build_f(1).is_err());
        for k in 2..=5 {
            let f = build_f(k).unwrap();
            assert_eq!(f.graph().vertex_count(), 3 * k as usize + 12, "k = {k}");
            assert!(f.coloring.is_proper(f.graph()), "k = {k}");
        }
        let f2 = build_f(2).unwrap();
        let max = f2
            .graph()
            .vertices()
            .filter_map(|v| f2.order.rank(v))
            .max()
            .unwrap();
        assert_eq!(max, 18);
    }

    #[test]
    fn f_gadget_cover_seed_solves_in_k_rounds() {
        for k in 2..=3 {
            let f = build_f(k).unwrap();
            for third in ["x", "y"] {
                let res = solve_seeded(&f, &["u", "v", third]);
                assert!(res.done(), "k = {k}, seed {third}");
                assert_eq!(res.rounds, k, "k = {k}, seed {third}");
            }
            // Without a covered endpoint the gadget must not resolve.
            let res = solve_seeded(&f, &["u", "v"]);
            assert!(!res.done());
        }
    }

    #[test]
    fn h_gadget_counts_and_colors() {
        assert!(build_h(1).is_err());
        for n in 2..=6 {
            let h = build_h(n).unwrap();
            assert_eq!(h.graph().vertex_count(), 2 * n as usize + 3);
            assert!(h.coloring.is_proper(h.graph()));
            let y = h.vertex("y").unwrap();
            assert_eq!(h.order.rank(y), Some(2 * n + 3));
        }
    }

    #[test]
    fn h_gadget_cover_seed_solves_in_one_round() {
        let h = build_h(3).unwrap();
        for third in ["x", "y"] {
            let res = solve_seeded(&h, &["v", third]);
            assert!(res.done(), "seed {third}");
            assert_eq!(res.rounds, 1, "seed {third}");
        }
        let res = solve_seeded(&h, &["v"]);
        assert!(!res.done());
    }

    fn triangle() -> (Graph, VertexOrder) {
        let g = Graph::complete(&[vid(1), vid(2), vid(3)]);
        let o = VertexOrder::by_id(&g);
        (g, o)
    }

    fn proper_triangle_coloring(g: &Graph) -> Coloring {
        Coloring::new(
            g,
            [(vid(1), Color(1)), (vid(2), Color(2)), (vid(3), Color(3))].into(),
            3,
        )
        .unwrap()
    }

    #[test]
    fn reduce_3col_triangle_weak_counts() {
        let (g, o) = triangle();
        let gamma = proper_triangle_coloring(&g);
        let out = reduce_3col(&g, &o, 1, ReductionMode::Weak, Some(&gamma)).unwrap();
        // Each D_1 copy adds one interior vertex: 3 + 3 * 3 * 1.
        assert_eq!(out.graph().vertex_count(), 12);
        assert_eq!(out.bound, 3);
        assert_eq!(out.certificate.as_ref().unwrap().len(), 3);
        assert!(out.coloring.as_ref().unwrap().is_proper(out.graph()));
    }

    #[test]
    fn reduce_3col_k4_weak_counts() {
        let g = Graph::complete(&[vid(1), vid(2), vid(3), vid(4)]);
        let o = VertexOrder::by_id(&g);
        let out = reduce_3col(&g, &o, 1, ReductionMode::Weak, None).unwrap();
        // 4 + 6 edges * 4 copies * 1 interior.
        assert_eq!(out.graph().vertex_count(), 28);
        assert!(out.coloring.is_none());
        assert!(out.certificate.is_none());
    }

    #[test]
    fn reduce_3col_strong_mode_bound() {
        let (g, o) = triangle();
        let out = reduce_3col(&g, &o, 2, ReductionMode::Strong, None).unwrap();
        // n + k copies per edge, bound n + k - 1.
        assert_eq!(out.bound, 4);
        // 3 + 3 edges * 5 copies * (3 * 2 + 1 - 2) interiors.
        assert_eq!(out.graph().vertex_count(), 3 + 3 * 5 * 5);
    }

    #[test]
    fn reduce_vc_sds_p3_counts() {
        let g = Graph::from_parts(
            [vid(1), vid(2), vid(3)],
            [(vid(1), vid(2)), (vid(2), vid(3))],
        )
        .unwrap();
        let o = VertexOrder::by_id(&g);
        let cover: BTreeSet<_> = [vid(2)].into();
        let out = reduce_vertexcover_sds(&g, &o, 1, 2, Some(&cover)).unwrap();
        // 3 base + u, v + 2 edges * 7 copies * 14 interiors.
        assert_eq!(out.graph().vertex_count(), 201);
        assert_eq!(out.bound, 4);
        assert_eq!(out.certificate.as_ref().unwrap().len(), 3);
    }

    #[test]
    fn reduce_vc_rulebase_p3_counts() {
        let g = Graph::from_parts(
            [vid(1), vid(2), vid(3)],
            [(vid(1), vid(2)), (vid(2), vid(3))],
        )
        .unwrap();
        let o = VertexOrder::by_id(&g);
        let cover: BTreeSet<_> = [vid(2)].into();
        let out = reduce_vertexcover_rulebase(&g, &o, 1, Some(&cover)).unwrap();
        // 3 base + v + 2 edges * 2 * 3 interiors.
        assert_eq!(out.graph().vertex_count(), 16);
        assert_eq!(out.bound, 2);
        assert_eq!(out.certificate.as_ref().unwrap().len(), 2);
    }

    #[test]
    fn single_edge_cover_certificates() {
        let g = Graph::complete(&[vid(1), vid(2)]);
        let o = VertexOrder::by_id(&g);
        let cover: BTreeSet<_> = [vid(1)].into();
        assert!(reduce_vertexcover_sds(&g, &o, 1, 2, Some(&cover)).is_ok());
        assert!(reduce_vertexcover_rulebase(&g, &o, 1, Some(&cover)).is_ok());
        // A non-cover is rejected.
        let non_cover: BTreeSet<_> = [].into();
        assert!(reduce_vertexcover_rulebase(&g, &o, 1, Some(&non_cover)).is_err());
    }
}
