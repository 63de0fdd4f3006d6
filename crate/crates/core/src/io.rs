//! JSON interchange for instances, rule-bases, witnesses, and transverse
//! systems, plus DOT export.
//!
//! Instance documents carry a graph with optional ordering, lists, coloring,
//! marks, and palette. Map keys are strings (JSON objects) naming vertex
//! ids. Documents are schema-validated on load; emission uses sorted keys
//! throughout, so identical inputs produce byte-identical outputs.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::graph::{Color, ColorSet, Coloring, Graph, VertexId, VertexOrder};
use crate::marked::{Label, MarkedGraph};
use crate::oracle::TransverseSystem;
use crate::rulebase::{greedy, LocalRule, NonstructuralRule, RuleBase, UpdateKind};

/// Raw instance document, mirroring the JSON schema.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub vertices: Vec<u32>,
    pub edges: Vec<(u32, u32)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ordering: Option<BTreeMap<String, u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lists: Option<BTreeMap<String, Vec<u32>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coloring: Option<BTreeMap<String, u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub marks: Option<BTreeMap<String, u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub palette: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rulebase: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi: Option<u32>,
    /// Gadget and reduction outputs annotate their documents so they can be
    /// fed straight back into other subcommands.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interface: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base_map: Option<BTreeMap<String, u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Vec<u32>>,
}

/// A validated instance: the graph plus whichever optional layers the
/// document carried.
#[derive(Debug, Clone)]
pub struct Instance {
    pub graph: Graph,
    /// Insertion order of the document's vertex array when no explicit
    /// ordering was given.
    pub order: VertexOrder,
    pub explicit_order: bool,
    pub lists: Option<BTreeMap<VertexId, ColorSet>>,
    pub coloring: Option<Coloring>,
    pub marks: Option<MarkedGraph>,
    pub palette: Option<u32>,
    pub rulebase: Option<String>,
    pub k: Option<u32>,
    pub xi: Option<u32>,
    pub interface: Option<Vec<Label>>,
    pub bound: Option<u32>,
    pub certificate: Option<BTreeSet<VertexId>>,
}

impl Instance {
    /// The palette: explicit field, else the largest color mentioned in
    /// lists or coloring.
    pub fn effective_palette(&self) -> Option<u32> {
        if let Some(t) = self.palette {
            return Some(t);
        }
        let mut max = 0;
        if let Some(lists) = &self.lists {
            for l in lists.values() {
                if let Some(c) = l.iter().map(|c| c.0).max() {
                    max = max.max(c);
                }
            }
        }
        if let Some(col) = &self.coloring {
            for (_, c) in col.iter() {
                max = max.max(c.0);
            }
        }
        (max > 0).then_some(max)
    }

    /// Resolves a `label-or-id` token against marks, then raw ids.
    pub fn resolve_vertex(&self, token: &str) -> Result<VertexId, Error> {
        if let Some(m) = &self.marks {
            if let Some(v) = m.vertex_of(token) {
                return Ok(v);
            }
        }
        if let Ok(raw) = token.parse::<u32>() {
            let v = VertexId(raw);
            if self.graph.has_vertex(v) {
                return Ok(v);
            }
        }
        Err(Error::InvalidDocument(format!("unknown vertex {token:?}")))
    }
}

fn parse_id_key(key: &str) -> Result<VertexId, Error> {
    key.parse::<u32>()
        .map(VertexId)
        .map_err(|_| Error::InvalidDocument(format!("bad vertex id key {key:?}")))
}

pub fn parse_instance(json: &str) -> Result<Instance, Error> {
    let doc: InstanceDocument =
        serde_json::from_str(json).map_err(|e| Error::InvalidDocument(e.to_string()))?;
    validate_instance(&doc)
}

/// Validates the raw document: unique vertex ids, edges over known ids
/// without loops or duplicates, bijective ordering, in-palette lists and
/// colors, injective marks.
pub fn validate_instance(doc: &InstanceDocument) -> Result<Instance, Error> {
    let mut graph = Graph::new();
    let mut seen = BTreeSet::new();
    for &raw in &doc.vertices {
        if !seen.insert(raw) {
            return Err(Error::InvalidDocument(format!("duplicate vertex {raw}")));
        }
        graph.add_vertex(VertexId(raw));
    }
    let mut edge_seen = BTreeSet::new();
    for &(a, b) in &doc.edges {
        let (u, v) = (VertexId(a), VertexId(b));
        if !graph.has_vertex(u) || !graph.has_vertex(v) {
            return Err(Error::InvalidDocument(format!("edge [{a},{b}] uses unknown vertices")));
        }
        if u == v {
            return Err(Error::InvalidDocument(format!("self-loop at {a}")));
        }
        if !edge_seen.insert((u.min(v), u.max(v))) {
            return Err(Error::InvalidDocument(format!("duplicate edge [{a},{b}]")));
        }
        graph.add_edge(u, v)?;
    }

    let (order, explicit_order) = match &doc.ordering {
        Some(map) => {
            let rank: BTreeMap<VertexId, u32> = map
                .iter()
                .map(|(k, &r)| Ok((parse_id_key(k)?, r)))
                .collect::<Result<_, Error>>()?;
            (VertexOrder::new(&graph, rank)?, true)
        }
        None => (
            VertexOrder::from_sequence(&graph, doc.vertices.iter().map(|&v| VertexId(v)))?,
            false,
        ),
    };

    let palette = doc.palette;
    let implied = |fallback: u32| palette.unwrap_or(fallback);

    let lists = match &doc.lists {
        Some(map) => {
            let mut max_color = 1;
            let mut parsed: BTreeMap<VertexId, ColorSet> = BTreeMap::new();
            for (k, cs) in map {
                let v = parse_id_key(k)?;
                if !graph.has_vertex(v) {
                    return Err(Error::InvalidDocument(format!("list for unknown vertex {k}")));
                }
                let mut set = ColorSet::EMPTY;
                for &c in cs {
                    if c < 1 || c > ColorSet::MAX_PALETTE {
                        return Err(Error::InvalidDocument(format!("color {c} out of range")));
                    }
                    max_color = max_color.max(c);
                    set.insert(Color(c));
                }
                parsed.insert(v, set);
            }
            let t = implied(max_color);
            let full = ColorSet::full(t);
            for (v, l) in &parsed {
                if !l.is_subset(full) {
                    return Err(Error::InvalidDocument(format!(
                        "list of {v} leaves the palette 1..={t}"
                    )));
                }
            }
            // Unlisted vertices default to the full palette.
            for v in graph.vertices() {
                parsed.entry(v).or_insert(full);
            }
            Some(parsed)
        }
        None => None,
    };

    let coloring = match &doc.coloring {
        Some(map) => {
            let assign: BTreeMap<VertexId, Color> = map
                .iter()
                .map(|(k, &c)| Ok((parse_id_key(k)?, Color(c))))
                .collect::<Result<_, Error>>()?;
            let max = assign.values().map(|c| c.0).max().unwrap_or(1);
            Some(Coloring::new(&graph, assign, implied(max))?)
        }
        None => None,
    };

    let marks = match &doc.marks {
        Some(map) => Some(MarkedGraph::new(
            graph.clone(),
            map.iter().map(|(l, &v)| (l.clone(), VertexId(v))),
        )?),
        None => None,
    };

    if let Some(interface) = &doc.interface {
        let known = marks.as_ref();
        for l in interface {
            if known.and_then(|m| m.vertex_of(l)).is_none() {
                return Err(Error::InvalidDocument(format!(
                    "interface label {l:?} is not a mark"
                )));
            }
        }
    }
    let certificate = match &doc.certificate {
        Some(ids) => {
            let set: BTreeSet<VertexId> = ids.iter().map(|&v| VertexId(v)).collect();
            if let Some(&v) = set.iter().find(|v| !graph.has_vertex(**v)) {
                return Err(Error::InvalidDocument(format!(
                    "certificate names unknown vertex {v}"
                )));
            }
            Some(set)
        }
        None => None,
    };
    if let Some(map) = &doc.base_map {
        for (k, &v) in map {
            parse_id_key(k)?;
            if !graph.has_vertex(VertexId(v)) {
                return Err(Error::InvalidDocument(format!(
                    "base_map names unknown vertex {v}"
                )));
            }
        }
    }

    Ok(Instance {
        graph,
        order,
        explicit_order,
        lists,
        coloring,
        marks,
        palette,
        rulebase: doc.rulebase.clone(),
        k: doc.k,
        xi: doc.xi,
        interface: doc.interface.clone(),
        bound: doc.bound,
        certificate,
    })
}

/// Serializes a graph with its optional layers back into document form.
pub fn instance_document(
    graph: &Graph,
    order: Option<&VertexOrder>,
    lists: Option<&BTreeMap<VertexId, ColorSet>>,
    coloring: Option<&Coloring>,
    marks: Option<&MarkedGraph>,
    palette: Option<u32>,
) -> InstanceDocument {
    InstanceDocument {
        vertices: graph.vertices().map(|v| v.0).collect(),
        edges: graph.edges().into_iter().map(|(a, b)| (a.0, b.0)).collect(),
        ordering: order.map(|o| o.iter().map(|(v, r)| (v.0.to_string(), r)).collect()),
        lists: lists.map(|m| {
            m.iter()
                .map(|(v, l)| (v.0.to_string(), l.iter().map(|c| c.0).collect()))
                .collect()
        }),
        coloring: coloring.map(|c| c.iter().map(|(v, col)| (v.0.to_string(), col.0)).collect()),
        marks: marks.map(|m| m.marks().map(|(l, v)| (l.clone(), v.0)).collect()),
        palette,
        rulebase: None,
        k: None,
        xi: None,
        interface: None,
        bound: None,
        base_map: None,
        certificate: None,
    }
}

pub fn to_json(doc: &InstanceDocument) -> String {
    serde_json::to_string_pretty(doc).expect("document serialization cannot fail")
}

/// Rule-base document: named presets cover the common cases; custom bases
/// list structural rules over explicit patterns.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleBaseDocument {
    pub palette: u32,
    pub bound: u32,
    #[serde(default)]
    pub structural: Vec<RuleDocument>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nonstructural: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleDocument {
    pub name: String,
    pub pattern: PatternDocument,
    pub target: String,
    /// One of `subtract-union`, `intersect-lists`, `greedy-min`.
    pub update: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partner: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub required_union_size: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nonadjacent: Option<(String, String)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternDocument {
    pub vertices: Vec<u32>,
    pub edges: Vec<(u32, u32)>,
    pub marks: BTreeMap<String, u32>,
}

pub fn parse_rulebase(json: &str) -> Result<RuleBase, Error> {
    let doc: RuleBaseDocument =
        serde_json::from_str(json).map_err(|e| Error::InvalidDocument(e.to_string()))?;
    rulebase_from_document(&doc)
}

pub fn rulebase_from_document(doc: &RuleBaseDocument) -> Result<RuleBase, Error> {
    let mut rules = Vec::new();
    for rd in &doc.structural {
        let graph = Graph::from_parts(
            rd.pattern.vertices.iter().map(|&v| VertexId(v)),
            rd.pattern.edges.iter().map(|&(a, b)| (VertexId(a), VertexId(b))),
        )?;
        let pattern = MarkedGraph::new(
            graph,
            rd.pattern.marks.iter().map(|(l, &v)| (l.clone(), VertexId(v))),
        )?;
        let non_target = (pattern.graph().vertex_count() as u32).saturating_sub(1);
        let kind = match rd.update.as_str() {
            "subtract-union" => UpdateKind::SubtractUnion {
                required_union_size: rd.required_union_size.unwrap_or(non_target),
            },
            "intersect-lists" => {
                let partner = rd.partner.clone().ok_or_else(|| {
                    Error::InvalidDocument("intersect-lists needs a partner label".into())
                })?;
                let required = rd.required_union_size.ok_or_else(|| {
                    Error::InvalidDocument("intersect-lists needs required_union_size".into())
                })?;
                UpdateKind::IntersectPartner {
                    partner,
                    required_union_size: required,
                }
            }
            "greedy-min" => UpdateKind::GreedyMin,
            other => {
                return Err(Error::InvalidDocument(format!("unknown update kind {other:?}")));
            }
        };
        rules.push(LocalRule::new(
            rd.name.clone(),
            pattern,
            rd.target.clone(),
            kind,
            rd.nonadjacent.clone(),
        )?);
    }
    let nonstructural: Option<NonstructuralRule> = match doc.nonstructural.as_deref() {
        None => None,
        Some("greedy-min") => Some(greedy()),
        Some(other) => {
            return Err(Error::InvalidDocument(format!(
                "unknown nonstructural rule {other:?}"
            )));
        }
    };
    RuleBase::new(rules, nonstructural, doc.palette, doc.bound)
}

/// Resolves `RT`, `RG`, `RT+greedy`, or `@path/to/rulebase.json`.
pub fn resolve_rulebase(spec: &str, palette: u32) -> Result<RuleBase, Error> {
    if let Some(path) = spec.strip_prefix('@') {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidDocument(format!("cannot read {path}: {e}")))?;
        return parse_rulebase(&text);
    }
    RuleBase::preset(spec, palette)
}

/// Witness document for the reductions: a proper coloring or a vertex
/// cover.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessDocument {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coloring: Option<BTreeMap<String, u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cover: Option<Vec<u32>>,
}

pub fn parse_witness(json: &str) -> Result<WitnessDocument, Error> {
    serde_json::from_str(json).map_err(|e| Error::InvalidDocument(e.to_string()))
}

impl WitnessDocument {
    pub fn coloring_for(&self, graph: &Graph, palette: u32) -> Result<Option<Coloring>, Error> {
        match &self.coloring {
            None => Ok(None),
            Some(map) => {
                let assign: BTreeMap<VertexId, Color> = map
                    .iter()
                    .map(|(k, &c)| Ok((parse_id_key(k)?, Color(c))))
                    .collect::<Result<_, Error>>()?;
                Ok(Some(Coloring::new(graph, assign, palette)?))
            }
        }
    }

    pub fn cover_set(&self) -> Option<BTreeSet<VertexId>> {
        self.cover
            .as_ref()
            .map(|c| c.iter().map(|&v| VertexId(v)).collect())
    }
}

/// Transverse-system document: `t` plus `(index, vertex set)` entries.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransverseDocument {
    pub t: u32,
    pub entries: Vec<(usize, Vec<u32>)>,
}

pub fn parse_transverse(json: &str) -> Result<(u32, TransverseSystem), Error> {
    let doc: TransverseDocument =
        serde_json::from_str(json).map_err(|e| Error::InvalidDocument(e.to_string()))?;
    let entries = doc
        .entries
        .iter()
        .map(|(i, vs)| (*i, vs.iter().map(|&v| VertexId(v)).collect()))
        .collect();
    Ok((doc.t, TransverseSystem { entries }))
}

/// Fill colors for DOT output, one per palette color, wrapping if the
/// palette is deeper than the table.
const DOT_COLORS: &[&str] = &[
    "#e6a1a1", "#a1c8e6", "#a8e6a1", "#e6dca1", "#cba1e6", "#e6bda1", "#a1e6d9", "#c4c4c4",
];

/// Emits the graph in DOT format: colorings render as fill colors, ranks
/// as part of the node label, marks as node names. Output is stable for
/// identical inputs.
pub fn to_dot(
    graph: &Graph,
    order: Option<&VertexOrder>,
    coloring: Option<&Coloring>,
    lists: Option<&BTreeMap<VertexId, ColorSet>>,
    marks: Option<&MarkedGraph>,
) -> String {
    let mut out = String::from("graph g {\n  node [style=filled, fillcolor=white];\n");
    let name = |v: VertexId| -> String {
        marks
            .and_then(|m| m.label_of(v).cloned())
            .unwrap_or_else(|| v.0.to_string())
    };
    let mut vertices: Vec<VertexId> = graph.vertices().collect();
    if let Some(o) = order {
        vertices.sort_by_key(|&v| o.rank(v).unwrap_or(u32::MAX));
    }
    for v in vertices {
        let mut label = name(v);
        if let Some(o) = order {
            if let Some(r) = o.rank(v) {
                label.push_str(&format!("\\nrank {r}"));
            }
        }
        if let Some(ls) = lists {
            if let Some(l) = ls.get(&v) {
                let cs: Vec<String> = l.iter().map(|c| c.0.to_string()).collect();
                label.push_str(&format!("\\n{{{}}}", cs.join(",")));
            }
        }
        let mut attrs = format!("label=\"{label}\"");
        if let Some(c) = coloring.and_then(|c| c.get(v)) {
            let fill = DOT_COLORS[((c.0 - 1) as usize) % DOT_COLORS.len()];
            attrs.push_str(&format!(", fillcolor=\"{fill}\""));
        }
        out.push_str(&format!("  \"{}\" [{attrs}];\n", name(v)));
    }
    for (a, b) in graph.edges() {
        out.push_str(&format!("  \"{}\" -- \"{}\";\n", name(a), name(b)));
    }
    out.push_str("}\n");
    out
}

pub type LabelMap = BTreeMap<Label, VertexId>;
