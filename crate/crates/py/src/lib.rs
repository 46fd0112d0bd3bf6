use std::sync::Arc;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use wellbalanced::oracles;
use wellbalanced::suite::{self, Profile, SuiteOptions};
use wellbalanced::{
    admissibility, connectivity, eulerian, grid, CaDecision, Document, Error, Limits, MultiGraph, OaDecision,
    Orientation, Pairing, VertexSet,
};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

type Arc3 = (String, String, u64);

/// Undirected multigraph with labelled vertices.
#[pyclass(name = "Graph", module = "wellbalanced_py", frozen)]
struct PyGraph {
    inner: Arc<MultiGraph>,
}

impl PyGraph {
    fn wrap(g: MultiGraph) -> Self {
        PyGraph { inner: Arc::new(g) }
    }

    fn set(&self, labels: Vec<String>) -> PyResult<VertexSet> {
        VertexSet::from_labels(&self.inner, &labels).map_err(err)
    }

    fn pairing(&self, pairs: Vec<(String, String)>) -> PyResult<Pairing> {
        let refs: Vec<(&str, &str)> = pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        Pairing::from_labels(&self.inner, &refs).map_err(err)
    }

    fn orientation(&self, arcs: Vec<Arc3>) -> PyResult<Orientation> {
        let mut doc = Document::new("orientation", self.inner.labels());
        doc.arcs = Some(arcs);
        doc.orientation_of(&self.inner).map_err(err)
    }
}

fn arcs_of(o: &Orientation) -> Vec<Arc3> {
    let g = o.graph();
    o.arcs()
        .map(|(a, b, c)| (g.label(a).to_owned(), g.label(b).to_owned(), c))
        .collect()
}

#[pymethods]
impl PyGraph {
    #[new]
    fn new(vertices: Vec<String>, edges: Vec<Arc3>) -> PyResult<Self> {
        let mut doc = Document::new("graph", &vertices);
        doc.edges = Some(edges);
        doc.graph().map(PyGraph::wrap).map_err(err)
    }

    /// Parses an instance document.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Document::parse(text).and_then(|d| d.graph()).map(PyGraph::wrap).map_err(err)
    }

    fn to_json(&self) -> String {
        Document::from_graph("graph", &self.inner).to_text()
    }

    fn vertices(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    fn edges(&self) -> Vec<Arc3> {
        let g = &self.inner;
        g.pairs()
            .iter()
            .map(|p| (g.label(p.u).to_owned(), g.label(p.v).to_owned(), p.mult))
            .collect()
    }

    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    fn edge_count(&self) -> u64 {
        self.inner.edge_count()
    }

    fn degree(&self, v: &str) -> PyResult<u64> {
        let id = self.inner.vertex(v).map_err(err)?;
        Ok(self.inner.deg(id))
    }

    fn is_eulerian(&self) -> bool {
        self.inner.is_eulerian()
    }

    fn odd_vertices(&self) -> Vec<String> {
        admissibility::odd_vertices(&self.inner)
            .labels(&self.inner)
            .into_iter()
            .map(str::to_owned)
            .collect()
    }

    fn cut_size(&self, x: Vec<String>) -> PyResult<u64> {
        self.inner.cut_size(&self.set(x)?).map_err(err)
    }

    /// Local edge-connectivity and the source side of a minimum cut.
    fn local_connectivity(&self, s: &str, t: &str) -> PyResult<(u64, Vec<String>)> {
        let g = &self.inner;
        let r = connectivity::lambda_undirected(g, g.vertex(s).map_err(err)?, g.vertex(t).map_err(err)?).map_err(err)?;
        Ok((r.value, r.side.labels(g).into_iter().map(str::to_owned).collect()))
    }

    fn r_value(&self, x: Vec<String>) -> PyResult<u64> {
        connectivity::r_value(&self.inner, &self.set(x)?).map_err(err)
    }

    /// `None` when the orientation is well-balanced, else `(s, t, λ_D, required)`.
    fn well_balance_violation(&self, arcs: Vec<Arc3>) -> PyResult<Option<(String, String, u64, u64)>> {
        let d = self.orientation(arcs)?;
        Ok(match connectivity::is_well_balanced(&self.inner, &d).map_err(err)? {
            connectivity::WellBalance::Balanced => None,
            connectivity::WellBalance::Violated {
                source,
                sink,
                directed,
                required,
                ..
            } => Some((
                self.inner.label(source).to_owned(),
                self.inner.label(sink).to_owned(),
                directed,
                required,
            )),
        })
    }

    fn eulerian_orientation(&self) -> PyResult<Vec<Arc3>> {
        eulerian::eulerian_orientation(&self.inner).map(|o| arcs_of(&o)).map_err(err)
    }

    /// First well-balanced orientation by exhaustive search.
    fn well_balanced_orientation(&self) -> PyResult<Vec<Arc3>> {
        oracles::brute_wbo_exists(&self.inner, &Limits::default())
            .map(|o| arcs_of(&o))
            .map_err(err)
    }

    /// `None` if the pairing is cut-admissible, else `(X, d_G(X), d_F(X), R(X))`.
    fn decide_ca(&self, pairs: Vec<(String, String)>) -> PyResult<Option<(Vec<String>, u64, u64, u64)>> {
        let f = self.pairing(pairs)?;
        Ok(match admissibility::decide_ca(&self.inner, &f, &Limits::default()).map_err(err)? {
            CaDecision::CutAdmissible => None,
            CaDecision::Violated(v) => Some((
                v.set.labels(&self.inner).into_iter().map(str::to_owned).collect(),
                v.cut_g,
                v.cut_f,
                v.r,
            )),
        })
    }

    /// `None` if the pairing is orientation-admissible, else the arcs of a
    /// bad eulerian orientation of `G + F` and the failing pair.
    #[allow(clippy::type_complexity)]
    fn decide_oa(&self, pairs: Vec<(String, String)>) -> PyResult<Option<(Vec<Arc3>, String, String)>> {
        let f = self.pairing(pairs)?;
        Ok(match admissibility::decide_oa(&self.inner, &f, &Limits::default()).map_err(err)? {
            OaDecision::OrientationAdmissible => None,
            OaDecision::Counterexample(c) => Some((
                arcs_of(&c.combined()),
                self.inner.label(c.source).to_owned(),
                self.inner.label(c.sink).to_owned(),
            )),
        })
    }

    /// First cut-admissible pairing.
    fn cut_admissible_pairing(&self) -> PyResult<Vec<(String, String)>> {
        let f = oracles::brute_cut_admissible_pairing(&self.inner, &Limits::default()).map_err(err)?;
        Ok(f.edges()
            .map(|(a, b)| (self.inner.label(a).to_owned(), self.inner.label(b).to_owned()))
            .collect())
    }

    fn __repr__(&self) -> String {
        format!("Graph(vertices={}, edges={})", self.inner.vertex_count(), self.inner.edge_count())
    }
}

/// Augmented grid gadget with its `L` and `P` port labels.
#[pyfunction]
fn augmented_grid(alpha: u64, beta: u64) -> PyResult<(PyGraph, Vec<String>, Vec<String>)> {
    let (w, spec) = grid::augmented_grid(alpha, beta).map_err(err)?;
    let lbl = |vs: Vec<wellbalanced::VertexId>| vs.into_iter().map(|v| w.label(v).to_owned()).collect::<Vec<_>>();
    let (l, p) = (lbl(spec.l_family(beta)), lbl(spec.p_family(beta)));
    Ok((PyGraph::wrap(w), l, p))
}

/// Runs the acceptance suite against the bundled fixtures; returns
/// `(passed, report_text)`.
#[pyfunction]
#[pyo3(signature = (full = false, seed = 7, only = None))]
fn run_suite(py: Python<'_>, full: bool, seed: u64, only: Option<Vec<u32>>) -> PyResult<(bool, String)> {
    let opts = SuiteOptions {
        profile: if full { Profile::Full } else { Profile::Quick },
        seed,
        only,
        ..Default::default()
    };
    let report = py.detach(|| suite::run_suite(&opts)).map_err(err)?;
    Ok((report.passed(), report.to_text()))
}

#[pymodule]
fn wellbalanced_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(augmented_grid, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
