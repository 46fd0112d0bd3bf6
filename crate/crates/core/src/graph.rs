//! Undirected multigraphs, vertex sets and orientations.
//!
//! Parallel edges are stored as a multiplicity per unordered vertex pair.
//! An [`Orientation`] splits each multiplicity into a forward count (from
//! the lower-indexed endpoint to the higher one) and a backward count.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// One unordered vertex pair with its multiplicity; always `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgePair {
    pub u: VertexId,
    pub v: VertexId,
    pub mult: u64,
}

impl EdgePair {
    #[inline]
    pub fn other(&self, w: VertexId) -> VertexId {
        if w == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Accumulates vertices and edges; duplicate edge insertions add up.
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    labels: Vec<String>,
    index: HashMap<String, VertexId>,
    edges: BTreeMap<(usize, usize), u64>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Starts from the vertex set of `g`, without its edges.
    pub fn with_vertices_of(g: &MultiGraph) -> Self {
        GraphBuilder {
            labels: g.labels.clone(),
            index: g.index.clone(),
            edges: BTreeMap::new(),
        }
    }

    pub fn add_vertex(&mut self, label: impl Into<String>) -> Result<VertexId> {
        let label = label.into();
        if self.index.contains_key(&label) {
            return Err(Error::DuplicateLabel(label));
        }
        let id = VertexId(self.labels.len());
        self.index.insert(label.clone(), id);
        self.labels.push(label);
        Ok(id)
    }

    /// Returns the existing vertex with this label or creates it.
    pub fn vertex(&mut self, label: &str) -> VertexId {
        if let Some(&id) = self.index.get(label) {
            return id;
        }
        let id = VertexId(self.labels.len());
        self.index.insert(label.to_owned(), id);
        self.labels.push(label.to_owned());
        id
    }

    pub fn lookup(&self, label: &str) -> Option<VertexId> {
        self.index.get(label).copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn add_edge(&mut self, a: VertexId, b: VertexId, mult: u64) -> Result<()> {
        let n = self.labels.len();
        for x in [a, b] {
            if x.0 >= n {
                return Err(Error::UnknownVertex(x.to_string()));
            }
        }
        if a == b {
            return Err(Error::SelfLoop(self.labels[a.0].clone()));
        }
        if mult == 0 {
            return Err(Error::ZeroMultiplicity(
                self.labels[a.0].clone(),
                self.labels[b.0].clone(),
            ));
        }
        let key = (a.0.min(b.0), a.0.max(b.0));
        *self.edges.entry(key).or_insert(0) += mult;
        Ok(())
    }

    pub fn add_edge_by_label(&mut self, a: &str, b: &str, mult: u64) -> Result<()> {
        let a = self.vertex(a);
        let b = self.vertex(b);
        self.add_edge(a, b, mult)
    }

    pub fn build(self) -> MultiGraph {
        let n = self.labels.len();
        let pairs: Vec<EdgePair> = self
            .edges
            .into_iter()
            .map(|((u, v), mult)| EdgePair {
                u: VertexId(u),
                v: VertexId(v),
                mult,
            })
            .collect();
        let mut adj = vec![Vec::new(); n];
        let mut degrees = vec![0u64; n];
        for (i, p) in pairs.iter().enumerate() {
            adj[p.u.0].push((p.v, i));
            adj[p.v.0].push((p.u, i));
            degrees[p.u.0] += p.mult;
            degrees[p.v.0] += p.mult;
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        MultiGraph {
            labels: self.labels,
            index: self.index,
            pairs,
            adj,
            degrees,
        }
    }
}

/// Loopless undirected multigraph with labelled vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiGraph {
    labels: Vec<String>,
    index: HashMap<String, VertexId>,
    pairs: Vec<EdgePair>,
    adj: Vec<Vec<(VertexId, usize)>>,
    degrees: Vec<u64>,
}

impl Default for MultiGraph {
    fn default() -> Self {
        GraphBuilder::new().build()
    }
}

impl MultiGraph {
    pub fn builder() -> GraphBuilder {
        GraphBuilder::new()
    }

    /// Convenience constructor from labelled edge triples.
    pub fn from_edges<'a>(
        vertices: impl IntoIterator<Item = &'a str>,
        edges: impl IntoIterator<Item = (&'a str, &'a str, u64)>,
    ) -> Result<Self> {
        let mut b = GraphBuilder::new();
        for v in vertices {
            b.add_vertex(v)?;
        }
        for (x, y, m) in edges {
            let x = b.lookup(x).ok_or_else(|| Error::UnknownVertex(x.to_owned()))?;
            let y = b.lookup(y).ok_or_else(|| Error::UnknownVertex(y.to_owned()))?;
            b.add_edge(x, y, m)?;
        }
        Ok(b.build())
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    /// Total number of edges, counting multiplicity.
    pub fn edge_count(&self) -> u64 {
        self.pairs.iter().map(|p| p.mult).sum()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.labels.len()).map(VertexId)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v.0]
    }

    pub fn vertex(&self, label: &str) -> Result<VertexId> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(label.to_owned()))
    }

    pub fn pairs(&self) -> &[EdgePair] {
        &self.pairs
    }

    /// Neighbours of `v` with the index of the connecting pair.
    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, usize)] {
        &self.adj[v.0]
    }

    pub fn multiplicity(&self, a: VertexId, b: VertexId) -> u64 {
        self.pair_index(a, b).map_or(0, |i| self.pairs[i].mult)
    }

    pub fn pair_index(&self, a: VertexId, b: VertexId) -> Option<usize> {
        let list = self.adj.get(a.0)?;
        list.binary_search_by(|(w, _)| w.cmp(&b))
            .ok()
            .map(|pos| list[pos].1)
    }

    fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v.0 < self.labels.len() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v.to_string()))
        }
    }

    fn check_set(&self, x: &VertexSet) -> Result<()> {
        if x.universe() == self.vertex_count() {
            Ok(())
        } else {
            Err(Error::UniverseMismatch {
                expected: self.vertex_count(),
                found: x.universe(),
            })
        }
    }

    pub fn degree(&self, v: VertexId) -> Result<u64> {
        self.check_vertex(v)?;
        Ok(self.degrees[v.0])
    }

    /// Degree without bounds reporting; panics on a foreign id.
    #[inline]
    pub fn deg(&self, v: VertexId) -> u64 {
        self.degrees[v.0]
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    /// `d_G(X)`: total multiplicity of edges with exactly one end in `x`.
    pub fn cut_size(&self, x: &VertexSet) -> Result<u64> {
        self.check_set(x)?;
        Ok(self.cut_size_unchecked(x))
    }

    pub(crate) fn cut_size_unchecked(&self, x: &VertexSet) -> u64 {
        self.pairs
            .iter()
            .filter(|p| x.contains(p.u) != x.contains(p.v))
            .map(|p| p.mult)
            .sum()
    }

    /// Cut size for a set given as a bitmask over the first 64 vertices.
    pub(crate) fn cut_size_mask(&self, mask: u64) -> u64 {
        self.pairs
            .iter()
            .filter(|p| ((mask >> p.u.0) ^ (mask >> p.v.0)) & 1 == 1)
            .map(|p| p.mult)
            .sum()
    }

    /// `d_G(X,Y)` for disjoint `x`, `y`.
    pub fn cut_between(&self, x: &VertexSet, y: &VertexSet) -> Result<u64> {
        self.check_set(x)?;
        self.check_set(y)?;
        if let Some(v) = x.iter().find(|&v| y.contains(v)) {
            return Err(Error::Overlap(self.label(v).to_owned()));
        }
        Ok(self
            .pairs
            .iter()
            .filter(|p| {
                (x.contains(p.u) && y.contains(p.v)) || (x.contains(p.v) && y.contains(p.u))
            })
            .map(|p| p.mult)
            .sum())
    }

    /// `G[X]`, with vertices renumbered in their original relative order.
    pub fn induced(&self, x: &VertexSet) -> Result<MultiGraph> {
        self.check_set(x)?;
        let mut b = GraphBuilder::new();
        let mut map = vec![None; self.vertex_count()];
        for v in x.iter() {
            map[v.0] = Some(b.add_vertex(self.label(v))?);
        }
        for p in &self.pairs {
            if let (Some(a), Some(c)) = (map[p.u.0], map[p.v.0]) {
                b.add_edge(a, c, p.mult)?;
            }
        }
        Ok(b.build())
    }

    /// Vertex sets of the connected components, ordered by smallest member.
    pub fn components(&self) -> Vec<VertexSet> {
        let n = self.vertex_count();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut set = VertexSet::empty(n);
            let mut stack = vec![start];
            comp[start] = id;
            while let Some(u) = stack.pop() {
                set.insert(VertexId(u));
                for &(w, _) in &self.adj[u] {
                    if comp[w.0] == usize::MAX {
                        comp[w.0] = id;
                        stack.push(w.0);
                    }
                }
            }
            out.push(set);
        }
        out
    }

    /// Same as [`components`](Self::components) but restricted to `G[X]`,
    /// returned as sets over the full vertex set.
    pub fn components_within(&self, x: &VertexSet) -> Vec<VertexSet> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in x.iter() {
            if seen[start.0] {
                continue;
            }
            let mut set = VertexSet::empty(n);
            let mut stack = vec![start];
            seen[start.0] = true;
            while let Some(u) = stack.pop() {
                set.insert(u);
                for &(w, _) in &self.adj[u.0] {
                    if x.contains(w) && !seen[w.0] {
                        seen[w.0] = true;
                        stack.push(w);
                    }
                }
            }
            out.push(set);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Every degree even. Connectivity is not required.
    pub fn is_eulerian(&self) -> bool {
        self.degrees.iter().all(|d| d % 2 == 0)
    }

    pub fn same_vertices(&self, other: &MultiGraph) -> bool {
        self.labels == other.labels
    }

    /// `G1 + G2` on a shared vertex set; multiplicities add.
    pub fn sum(&self, other: &MultiGraph) -> Result<MultiGraph> {
        if !self.same_vertices(other) {
            return Err(Error::VertexSetMismatch);
        }
        let mut b = GraphBuilder::with_vertices_of(self);
        for p in self.pairs.iter().chain(other.pairs.iter()) {
            b.add_edge(p.u, p.v, p.mult)?;
        }
        Ok(b.build())
    }

    /// Graph with the same vertices and no edges.
    pub fn edgeless_like(&self) -> MultiGraph {
        GraphBuilder::with_vertices_of(self).build()
    }

    /// Merges vertices by `group`; edges inside a group disappear.
    pub fn contract(&self, group_labels: &[String], group: impl Fn(VertexId) -> usize) -> Result<MultiGraph> {
        let mut b = GraphBuilder::new();
        for l in group_labels {
            b.add_vertex(l.clone())?;
        }
        for p in &self.pairs {
            let (a, c) = (group(p.u), group(p.v));
            if a != c {
                b.add_edge(VertexId(a), VertexId(c), p.mult)?;
            }
        }
        Ok(b.build())
    }
}

/// Subset of the vertices of a graph on `universe` vertices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    members: Vec<bool>,
    len: usize,
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|v| v.0)).finish()
    }
}

impl VertexSet {
    pub fn empty(universe: usize) -> Self {
        VertexSet {
            members: vec![false; universe],
            len: 0,
        }
    }

    pub fn full(universe: usize) -> Self {
        VertexSet {
            members: vec![true; universe],
            len: universe,
        }
    }

    pub fn from_vertices(g: &MultiGraph, vs: impl IntoIterator<Item = VertexId>) -> Result<Self> {
        let mut s = VertexSet::empty(g.vertex_count());
        for v in vs {
            g.check_vertex(v)?;
            s.insert(v);
        }
        Ok(s)
    }

    pub fn from_labels<S: AsRef<str>>(g: &MultiGraph, labels: &[S]) -> Result<Self> {
        let mut s = VertexSet::empty(g.vertex_count());
        for l in labels {
            s.insert(g.vertex(l.as_ref())?);
        }
        Ok(s)
    }

    /// Bit `i` of `mask` selects vertex `i`.
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        let mut s = VertexSet::empty(universe);
        for i in 0..universe.min(64) {
            if mask >> i & 1 == 1 {
                s.insert(VertexId(i));
            }
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.members.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, v: VertexId) -> bool {
        self.members.get(v.0).copied().unwrap_or(false)
    }

    pub fn insert(&mut self, v: VertexId) -> bool {
        let slot = &mut self.members[v.0];
        let fresh = !*slot;
        if fresh {
            *slot = true;
            self.len += 1;
        }
        fresh
    }

    pub fn remove(&mut self, v: VertexId) -> bool {
        let slot = &mut self.members[v.0];
        let had = *slot;
        if had {
            *slot = false;
            self.len -= 1;
        }
        had
    }

    pub fn extend(&mut self, other: &VertexSet) {
        for v in other.iter() {
            self.insert(v);
        }
    }

    pub fn complement(&self) -> VertexSet {
        VertexSet {
            members: self.members.iter().map(|b| !b).collect(),
            len: self.members.len() - self.len,
        }
    }

    /// Members in increasing index order.
    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| VertexId(i))
    }

    pub fn labels<'g>(&self, g: &'g MultiGraph) -> Vec<&'g str> {
        self.iter().map(|v| g.label(v)).collect()
    }

    pub fn as_bools(&self) -> &[bool] {
        &self.members
    }
}

/// Direction assignment for every edge instance of a multigraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    graph: Arc<MultiGraph>,
    forward: Vec<u64>,
}

impl Orientation {
    /// `forward[i]` copies of pair `i` point from its lower to its higher endpoint.
    pub fn new(graph: Arc<MultiGraph>, forward: Vec<u64>) -> Result<Self> {
        if forward.len() != graph.pairs().len()
            || forward.iter().zip(graph.pairs()).any(|(&f, p)| f > p.mult)
        {
            return Err(Error::OrientationMismatch);
        }
        Ok(Orientation { graph, forward })
    }

    /// Every copy oriented from lower to higher index.
    pub fn all_forward(graph: Arc<MultiGraph>) -> Self {
        let forward = graph.pairs().iter().map(|p| p.mult).collect();
        Orientation { graph, forward }
    }

    /// Builds the digraph on `vertices` whose arcs are `(from, to, count)`;
    /// the underlying undirected graph is derived from the arcs.
    pub fn from_arcs(
        vertices: &[String],
        arcs: impl IntoIterator<Item = (VertexId, VertexId, u64)>,
    ) -> Result<Self> {
        let mut b = GraphBuilder::new();
        for l in vertices {
            b.add_vertex(l.clone())?;
        }
        let mut counts: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        for (from, to, c) in arcs {
            b.add_edge(from, to, c)?;
            *counts.entry((from.0, to.0)).or_insert(0) += c;
        }
        let graph = Arc::new(b.build());
        let forward = graph
            .pairs()
            .iter()
            .map(|p| counts.get(&(p.u.0, p.v.0)).copied().unwrap_or(0))
            .collect();
        Ok(Orientation { graph, forward })
    }

    pub fn graph(&self) -> &MultiGraph {
        &self.graph
    }

    pub fn graph_arc(&self) -> &Arc<MultiGraph> {
        &self.graph
    }

    pub fn forward_counts(&self) -> &[u64] {
        &self.forward
    }

    pub fn backward(&self, pair: usize) -> u64 {
        self.graph.pairs()[pair].mult - self.forward[pair]
    }

    /// Nonzero arc bundles `(from, to, count)` in pair order.
    pub fn arcs(&self) -> impl Iterator<Item = (VertexId, VertexId, u64)> + '_ {
        self.graph
            .pairs()
            .iter()
            .zip(&self.forward)
            .flat_map(|(p, &f)| [(p.u, p.v, f), (p.v, p.u, p.mult - f)])
            .filter(|a| a.2 > 0)
    }

    /// Number of copies oriented `from -> to`.
    pub fn arc_count(&self, from: VertexId, to: VertexId) -> u64 {
        match self.graph.pair_index(from, to) {
            None => 0,
            Some(i) if from < to => self.forward[i],
            Some(i) => self.backward(i),
        }
    }

    pub fn out_degree(&self, v: VertexId) -> u64 {
        self.graph
            .neighbors(v)
            .iter()
            .map(|&(w, i)| if v < w { self.forward[i] } else { self.backward(i) })
            .sum()
    }

    pub fn in_degree(&self, v: VertexId) -> u64 {
        self.graph.deg(v) - self.out_degree(v)
    }

    /// `d⁺(X)`: arcs leaving `x`.
    pub fn out_cut(&self, x: &VertexSet) -> Result<u64> {
        self.graph.check_set(x)?;
        Ok(self
            .graph
            .pairs()
            .iter()
            .zip(&self.forward)
            .map(|(p, &f)| match (x.contains(p.u), x.contains(p.v)) {
                (true, false) => f,
                (false, true) => p.mult - f,
                _ => 0,
            })
            .sum())
    }

    /// `d⁻(X)`: arcs entering `x`.
    pub fn in_cut(&self, x: &VertexSet) -> Result<u64> {
        self.out_cut(&x.complement())
    }

    pub fn is_eulerian(&self) -> bool {
        self.graph
            .vertices()
            .all(|v| 2 * self.out_degree(v) == self.graph.deg(v))
    }

    /// Every arc turned around.
    pub fn reversed(&self) -> Orientation {
        let forward = self
            .graph
            .pairs()
            .iter()
            .zip(&self.forward)
            .map(|(p, &f)| p.mult - f)
            .collect();
        Orientation {
            graph: Arc::clone(&self.graph),
            forward,
        }
    }

    /// Combines orientations of two graphs on the same vertex set.
    pub fn sum(&self, other: &Orientation) -> Result<Orientation> {
        if !self.graph.same_vertices(&other.graph) {
            return Err(Error::VertexSetMismatch);
        }
        Orientation::from_arcs(self.graph.labels(), self.arcs().chain(other.arcs()))
    }
}
