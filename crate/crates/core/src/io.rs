//! The instance document: one JSON object per file.
//!
//! ```text
//! {
//!   "version": 1,
//!   "kind": "graph",
//!   "meta": {...},                      optional, free-form
//!   "vertices": ["a", "b", "c"],
//!   "edges": [["a", "b", 2], ...],      optional
//!   "arcs": [["from", "to", 1], ...],   optional, an orientation
//!   "pairing": [["a", "c", 1], ...],    optional
//!   "requirements": [["u", "v", 1], ...],  optional, nonzero entries of r
//!   "bounds": [["a", 1, 0], ...],       optional, [label, out, in]
//!   "threshold": 4,                     optional
//!   "set": ["a", "b"]                   optional
//! }
//! ```
//!
//! The writer emits one record per line, edges with the smaller label first
//! and all records sorted, so equal values give identical bytes. Duplicate
//! edge records are merged by summing multiplicities.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::admissibility::Pairing;
use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, MultiGraph, Orientation, VertexId, VertexSet};
use crate::reductions::{BwboInstance, LacoInstance, RequirementTable};

pub const FORMAT_VERSION: u32 = 1;

pub type Record = (String, String, u64);

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub version: u32,
    #[serde(default)]
    pub kind: String,
    #[serde(default)]
    pub meta: Option<serde_json::Value>,
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Option<Vec<Record>>,
    #[serde(default)]
    pub arcs: Option<Vec<Record>>,
    #[serde(default)]
    pub pairing: Option<Vec<Record>>,
    #[serde(default)]
    pub requirements: Option<Vec<Record>>,
    #[serde(default)]
    pub bounds: Option<Vec<(String, u64, u64)>>,
    #[serde(default)]
    pub threshold: Option<u64>,
    #[serde(default)]
    pub set: Option<Vec<String>>,
}

fn edge_records(g: &MultiGraph) -> Vec<Record> {
    g.pairs()
        .iter()
        .map(|p| (g.label(p.u).to_owned(), g.label(p.v).to_owned(), p.mult))
        .collect()
}

impl Document {
    pub fn new(kind: &str, vertices: &[String]) -> Self {
        Document {
            version: FORMAT_VERSION,
            kind: kind.to_owned(),
            vertices: vertices.to_vec(),
            ..Default::default()
        }
    }

    pub fn from_graph(kind: &str, g: &MultiGraph) -> Self {
        let mut d = Document::new(kind, g.labels());
        d.edges = Some(edge_records(g));
        d
    }

    pub fn from_orientation(kind: &str, o: &Orientation) -> Self {
        let g = o.graph();
        let mut d = Document::new(kind, g.labels());
        d.arcs = Some(
            o.arcs()
                .map(|(a, b, c)| (g.label(a).to_owned(), g.label(b).to_owned(), c))
                .collect(),
        );
        d
    }

    pub fn with_pairing(mut self, f: &Pairing) -> Self {
        self.pairing = Some(edge_records(f.graph()));
        self
    }

    pub fn with_meta(mut self, meta: serde_json::Value) -> Self {
        self.meta = Some(meta);
        self
    }

    pub fn with_set(mut self, g: &MultiGraph, x: &VertexSet) -> Self {
        self.set = Some(x.labels(g).into_iter().map(str::to_owned).collect());
        self
    }

    pub fn from_bwbo(inst: &BwboInstance) -> Self {
        let g = &inst.graph;
        let mut d = Document::from_graph("bwbo", g);
        d.bounds = Some(
            g.vertices()
                .map(|v| (g.label(v).to_owned(), inst.out_lower[v.0], inst.in_lower[v.0]))
                .collect(),
        );
        d
    }

    pub fn from_laco(inst: &LacoInstance) -> Self {
        let g = &inst.graph;
        let mut d = Document::from_graph("laco", g);
        d.requirements = Some(
            inst.requirements
                .positive()
                .map(|(u, v, r)| (g.label(u).to_owned(), g.label(v).to_owned(), r))
                .collect(),
        );
        if let Some((x, y)) = inst.terminals {
            d.meta = Some(serde_json::json!({
                "x": g.label(x),
                "y": g.label(y),
            }));
        }
        d
    }

    /// Parses a document; syntax and type errors carry line and column.
    pub fn parse(text: &str) -> Result<Self> {
        let doc: Document = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if doc.version != FORMAT_VERSION {
            return Err(Error::Format(format!("unsupported version {}", doc.version)));
        }
        Ok(doc)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Document::parse(&text)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    /// Canonical text. Record order does not depend on the input order.
    pub fn to_text(&self) -> String {
        let q = |s: &str| serde_json::to_string(s).expect("strings serialize");
        let mut fields: Vec<String> = vec![
            format!("\"version\": {}", self.version),
            format!("\"kind\": {}", q(&self.kind)),
        ];
        if let Some(meta) = &self.meta {
            fields.push(format!("\"meta\": {}", serde_json::to_string(meta).expect("json value")));
        }
        fields.push(format!(
            "\"vertices\": [{}]",
            self.vertices.iter().map(|v| q(v)).collect::<Vec<_>>().join(", ")
        ));
        let records = |name: &str, recs: &[Record], undirected: bool| {
            let mut recs: Vec<Record> = recs
                .iter()
                .map(|(a, b, m)| {
                    if undirected && b < a {
                        (b.clone(), a.clone(), *m)
                    } else {
                        (a.clone(), b.clone(), *m)
                    }
                })
                .collect();
            recs.sort();
            let mut s = format!("\"{name}\": [");
            for (i, (a, b, m)) in recs.iter().enumerate() {
                s.push_str(if i == 0 { "\n    " } else { ",\n    " });
                write!(s, "[{}, {}, {m}]", q(a), q(b)).unwrap();
            }
            s.push_str(if recs.is_empty() { "]" } else { "\n  ]" });
            s
        };
        if let Some(e) = &self.edges {
            fields.push(records("edges", e, true));
        }
        if let Some(a) = &self.arcs {
            fields.push(records("arcs", a, false));
        }
        if let Some(p) = &self.pairing {
            fields.push(records("pairing", p, true));
        }
        if let Some(r) = &self.requirements {
            fields.push(records("requirements", r, false));
        }
        if let Some(b) = &self.bounds {
            let order: BTreeMap<&str, usize> =
                self.vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
            let mut b = b.clone();
            b.sort_by_key(|(l, _, _)| order.get(l.as_str()).copied().unwrap_or(usize::MAX));
            let mut s = String::from("\"bounds\": [");
            for (i, (l, o, n)) in b.iter().enumerate() {
                s.push_str(if i == 0 { "\n    " } else { ",\n    " });
                write!(s, "[{}, {o}, {n}]", q(l)).unwrap();
            }
            s.push_str(if b.is_empty() { "]" } else { "\n  ]" });
            fields.push(s);
        }
        if let Some(t) = self.threshold {
            fields.push(format!("\"threshold\": {t}"));
        }
        if let Some(set) = &self.set {
            fields.push(format!(
                "\"set\": [{}]",
                set.iter().map(|v| q(v)).collect::<Vec<_>>().join(", ")
            ));
        }
        format!("{{\n  {}\n}}\n", fields.join(",\n  "))
    }

    fn builder(&self) -> Result<GraphBuilder> {
        let mut b = GraphBuilder::new();
        for v in &self.vertices {
            b.add_vertex(v.clone())?;
        }
        Ok(b)
    }

    fn add_records(b: &mut GraphBuilder, what: &str, recs: &[Record]) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for (a, c, m) in recs {
            let ia = b.lookup(a).ok_or_else(|| Error::UnknownVertex(a.clone()))?;
            let ic = b.lookup(c).ok_or_else(|| Error::UnknownVertex(c.clone()))?;
            let key = if ia < ic { (ia, ic) } else { (ic, ia) };
            if !seen.insert(key) {
                log::warn!("duplicate {what} record {a}-{c}; multiplicities summed");
            }
            b.add_edge(ia, ic, *m)?;
        }
        Ok(())
    }

    /// The graph given by `vertices` and `edges`. A document holding only
    /// arcs yields the underlying graph of the orientation.
    pub fn graph(&self) -> Result<MultiGraph> {
        let mut b = self.builder()?;
        match (&self.edges, &self.arcs) {
            (Some(e), _) => Document::add_records(&mut b, "edge", e)?,
            (None, Some(a)) => Document::add_records(&mut b, "arc", a)?,
            (None, None) => {}
        }
        Ok(b.build())
    }

    /// Pairing for `g`, from the `pairing` field or else from `edges`.
    pub fn pairing_for(&self, g: &MultiGraph) -> Result<Pairing> {
        let recs = self
            .pairing
            .as_ref()
            .or(self.edges.as_ref())
            .ok_or_else(|| Error::Format("document has neither pairing nor edges".into()))?;
        self.check_vertices(g)?;
        let mut b = GraphBuilder::with_vertices_of(g);
        Document::add_records(&mut b, "pairing", recs)?;
        Pairing::new(g, b.build())
    }

    fn check_vertices(&self, g: &MultiGraph) -> Result<()> {
        let mut mine = self.vertices.clone();
        let mut theirs = g.labels().to_vec();
        mine.sort();
        theirs.sort();
        if mine != theirs {
            return Err(Error::VertexSetMismatch);
        }
        Ok(())
    }

    /// The orientation in `arcs`, over its own underlying graph.
    pub fn orientation(&self) -> Result<Orientation> {
        let arcs = self
            .arcs
            .as_ref()
            .ok_or_else(|| Error::Format("document has no arcs".into()))?;
        let idx = |l: &str| {
            self.vertices
                .iter()
                .position(|v| v == l)
                .map(VertexId)
                .ok_or_else(|| Error::UnknownVertex(l.to_owned()))
        };
        let arcs = arcs
            .iter()
            .map(|(a, b, c)| Ok((idx(a)?, idx(b)?, *c)))
            .collect::<Result<Vec<_>>>()?;
        Orientation::from_arcs(&self.vertices, arcs)
    }

    /// The orientation in `arcs`, which must orient `g` exactly.
    pub fn orientation_of(&self, g: &Arc<MultiGraph>) -> Result<Orientation> {
        self.check_vertices(g)?;
        let o = self.orientation()?;
        let h = o.graph();
        if h.edge_count() != g.edge_count() {
            return Err(Error::OrientationMismatch);
        }
        let mut forward = Vec::with_capacity(g.pairs().len());
        for p in g.pairs() {
            let (u, v) = (h.vertex(g.label(p.u))?, h.vertex(g.label(p.v))?);
            if h.multiplicity(u, v) != p.mult {
                return Err(Error::OrientationMismatch);
            }
            forward.push(o.arc_count(u, v));
        }
        let out = Orientation::new(Arc::clone(g), forward)?;
        Ok(out)
    }

    pub fn set_in(&self, g: &MultiGraph) -> Result<VertexSet> {
        let set = self
            .set
            .as_ref()
            .ok_or_else(|| Error::Format("document has no set".into()))?;
        VertexSet::from_labels(g, set)
    }

    pub fn bwbo(&self) -> Result<BwboInstance> {
        let g = self.graph()?;
        let n = g.vertex_count();
        let (mut out, mut inn) = (vec![0; n], vec![0; n]);
        for (l, o, i) in self.bounds.as_deref().unwrap_or_default() {
            let v = g.vertex(l)?;
            out[v.0] = *o;
            inn[v.0] = *i;
        }
        BwboInstance::new(g, out, inn)
    }

    pub fn laco(&self) -> Result<LacoInstance> {
        let g = self.graph()?;
        let mut r = RequirementTable::zeros(g.vertex_count());
        for (a, b, v) in self.requirements.as_deref().unwrap_or_default() {
            let (u, w) = (g.vertex(a)?, g.vertex(b)?);
            if u == w {
                return Err(Error::SelfLoop(a.clone()));
            }
            r.set(u, w, *v);
        }
        let mut inst = LacoInstance::new(g, r)?;
        if let Some(meta) = &self.meta {
            if let (Some(x), Some(y)) = (meta.get("x").and_then(|v| v.as_str()), meta.get("y").and_then(|v| v.as_str())) {
                inst.terminals = Some((inst.graph.vertex(x)?, inst.graph.vertex(y)?));
            }
        }
        Ok(inst)
    }
}

/// Splits a comma-separated label list, dropping empty items.
pub fn parse_label_list(s: &str) -> Vec<String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(str::to_owned)
        .collect()
}
