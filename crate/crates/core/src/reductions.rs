//! The hardness reductions: MAXCUT to AMAXCUT by edge doubling, AMAXCUT to
//! the intermediate graph `G1` and to the cut-admissibility instance
//! `(G2, F)`, and bounded well-balanced orientation to local
//! arc-connectivity orientation, with witness translation.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::admissibility::Pairing;
use crate::connectivity::{even_floor, is_well_balanced, ConnectivityNetwork, LambdaTable, WellBalance};
use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, MultiGraph, Orientation, VertexId, VertexSet};
use crate::grid::{add_augmented_grid, GridSpec};

/// Graph `H` with even `|E| ≥ 6`, all degrees even, and an even threshold `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmaxcutInstance {
    h: MultiGraph,
    k: u64,
}

impl AmaxcutInstance {
    /// Also requires `k ≤ |E|·|V|` so that `M = mn − k` is nonnegative.
    pub fn new(h: MultiGraph, k: u64) -> Result<Self> {
        let m = h.edge_count();
        if m < 6 || m % 2 == 1 {
            return Err(Error::InvalidParameter(format!("edge count must be even and at least 6, got {m}")));
        }
        if let Some(v) = h.vertices().find(|&v| h.deg(v) % 2 == 1) {
            return Err(Error::OddDegree(h.label(v).to_owned()));
        }
        if k % 2 == 1 {
            return Err(Error::InvalidParameter(format!("threshold must be even, got {k}")));
        }
        if k > m * h.vertex_count() as u64 {
            return Err(Error::InvalidParameter(format!("threshold {k} exceeds |E|·|V|")));
        }
        Ok(AmaxcutInstance { h, k })
    }

    pub fn graph(&self) -> &MultiGraph {
        &self.h
    }

    pub fn threshold(&self) -> u64 {
        self.k
    }

    pub fn constants(&self) -> Constants {
        let n = self.h.vertex_count() as u64;
        let m = self.h.edge_count();
        Constants {
            n,
            m,
            k: self.k,
            big_m: m * n - self.k,
        }
    }
}

/// `n = |V_H|`, `m = |E_H|`, `k` and `M = mn − k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Constants {
    pub n: u64,
    pub m: u64,
    pub k: u64,
    #[serde(rename = "M")]
    pub big_m: u64,
}

/// Doubles every edge of `H` and the threshold.
pub fn maxcut_to_amaxcut(h: &MultiGraph, k: u64) -> Result<AmaxcutInstance> {
    if h.edge_count() < 3 {
        return Err(Error::InvalidParameter(format!(
            "MAXCUT instance needs at least 3 edges, got {}",
            h.edge_count()
        )));
    }
    let mut b = GraphBuilder::with_vertices_of(h);
    for p in h.pairs() {
        b.add_edge(p.u, p.v, 2 * p.mult)?;
    }
    AmaxcutInstance::new(b.build(), 2 * k)
}

/// The intermediate graph `G1` on `V_H ∪ {q, s, t}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntermediateGraph {
    pub graph: MultiGraph,
    pub q: VertexId,
    pub s: VertexId,
    pub t: VertexId,
    /// `G1` vertex of the `i`-th vertex of `H`.
    pub h_vertices: Vec<VertexId>,
    pub constants: Constants,
}

impl IntermediateGraph {
    /// `d_{G1}(X) − d_H(X ∩ V_H)`.
    pub fn local_value(&self, h: &MultiGraph, x: &VertexSet) -> Result<i64> {
        let inner = VertexSet::from_vertices(
            h,
            h.vertices().filter(|v| x.contains(self.h_vertices[v.0])),
        )?;
        Ok(self.graph.cut_size(x)? as i64 - h.cut_size(&inner)? as i64)
    }
}

const RESERVED: [&str; 3] = ["q", "s", "t"];

fn check_labels(h: &MultiGraph) -> Result<()> {
    match h.labels().iter().find(|l| RESERVED.contains(&l.as_str()) || l.contains(':')) {
        Some(l) => Err(Error::InvalidParameter(format!(
            "vertex label {l:?} clashes with the reduction's reserved names"
        ))),
        None => Ok(()),
    }
}

/// `M` parallel `q–s` edges, and `m` edges from each of `s` and `t` to every
/// vertex of `H`.
pub fn build_g1(inst: &AmaxcutInstance) -> Result<IntermediateGraph> {
    check_labels(&inst.h)?;
    let c = inst.constants();
    let mut b = GraphBuilder::new();
    let q = b.add_vertex("q")?;
    let s = b.add_vertex("s")?;
    let t = b.add_vertex("t")?;
    let h_vertices = inst
        .h
        .labels()
        .iter()
        .map(|l| b.add_vertex(l.clone()))
        .collect::<Result<Vec<_>>>()?;
    if c.big_m > 0 {
        b.add_edge(q, s, c.big_m)?;
    }
    for &v in &h_vertices {
        b.add_edge(s, v, c.m)?;
        b.add_edge(t, v, c.m)?;
    }
    Ok(IntermediateGraph {
        graph: b.build(),
        q,
        s,
        t,
        h_vertices,
        constants: c,
    })
}

/// The cut-admissibility instance `(G2, F)` built from an AMAXCUT seed.
#[derive(Clone, Debug)]
pub struct CaInstance {
    pub g2: MultiGraph,
    pub pairing: Pairing,
    pub q: VertexId,
    pub t: VertexId,
    pub constants: Constants,
    /// `W^s`.
    pub central: GridSpec,
    /// `W^v`, indexed like the vertices of `H`.
    pub gadgets: Vec<GridSpec>,
    /// `B_v`, indexed like the vertices of `H`.
    pub b_sets: Vec<Vec<VertexId>>,
    pub seed: AmaxcutInstance,
    pub g1: IntermediateGraph,
}

/// Replaces `s` and every `v ∈ V_H` of `G1` by augmented grids and builds the
/// pairing `F` between the leftover odd ports.
///
/// Port matchings are positional: the free ports of `W^s` (`L − L_M`, then
/// `P`) against `L_m(W^v)` for the vertices of `H` in order. Each edge of `H`
/// in pair order takes the lowest free port of `B_u` and of `B_v`.
pub fn build_ca_instance(inst: &AmaxcutInstance) -> Result<CaInstance> {
    let g1 = build_g1(inst)?;
    let c = g1.constants;
    let h = &inst.h;
    let alpha = c.big_m + c.m + 1;
    let mut b = GraphBuilder::new();
    let q = b.add_vertex("q")?;
    let t = b.add_vertex("t")?;
    let central = add_augmented_grid(&mut b, alpha, c.big_m + c.k / 2, "Ws:")?;
    let gadgets = h
        .vertices()
        .map(|v| add_augmented_grid(&mut b, alpha, c.m + h.deg(v) / 2, &format!("W{}:", h.label(v))))
        .collect::<Result<Vec<_>>>()?;

    for j in 1..=c.big_m {
        b.add_edge(q, central.l(j), 1)?;
    }
    let central_ports: Vec<VertexId> = (c.big_m + 1..=central.beta)
        .map(|j| central.l(j))
        .chain(central.p_family(central.beta))
        .collect();
    let gadget_ports: Vec<VertexId> = gadgets.iter().flat_map(|w| w.l_family(c.m)).collect();
    debug_assert_eq!(central_ports.len(), gadget_ports.len());
    for (&a, &z) in central_ports.iter().zip(&gadget_ports) {
        b.add_edge(a, z, 1)?;
    }
    for w in &gadgets {
        for p in w.p_family(c.m) {
            b.add_edge(p, t, 1)?;
        }
    }
    let g2 = b.build();

    let b_sets: Vec<Vec<VertexId>> = gadgets
        .iter()
        .map(|w| {
            (c.m + 1..=w.beta)
                .map(|j| w.l(j))
                .chain((c.m + 1..=w.beta).map(|j| w.p(j)))
                .collect()
        })
        .collect();
    let mut next_free = vec![0usize; gadgets.len()];
    let mut fb = GraphBuilder::with_vertices_of(&g2);
    for p in h.pairs() {
        for _ in 0..p.mult {
            let a = b_sets[p.u.0][next_free[p.u.0]];
            let z = b_sets[p.v.0][next_free[p.v.0]];
            next_free[p.u.0] += 1;
            next_free[p.v.0] += 1;
            fb.add_edge(a, z, 1)?;
        }
    }
    let pairing = Pairing::new(&g2, fb.build())?;
    Ok(CaInstance {
        g2,
        pairing,
        q,
        t,
        constants: c,
        central,
        gadgets,
        b_sets,
        seed: inst.clone(),
        g1,
    })
}

impl CaInstance {
    /// `G1`-vertex that the `G2` vertex `v` contracts to.
    pub fn g1_image(&self, v: VertexId) -> VertexId {
        if v == self.q {
            self.g1.q
        } else if v == self.t {
            self.g1.t
        } else if self.central.contains(v) {
            self.g1.s
        } else {
            let i = self
                .gadgets
                .iter()
                .position(|w| w.contains(v))
                .expect("every G2 vertex lies in a gadget or is q/t");
            self.g1.h_vertices[i]
        }
    }

    /// Contracts every gadget to a single vertex.
    pub fn contract(&self) -> Result<MultiGraph> {
        self.g2
            .contract(self.g1.graph.labels(), |v| self.g1_image(v).0)
    }

    /// Preimage of a `G1` set.
    pub fn expand(&self, x: &VertexSet) -> VertexSet {
        let mut out = VertexSet::empty(self.g2.vertex_count());
        for v in self.g2.vertices() {
            if x.contains(self.g1_image(v)) {
                out.insert(v);
            }
        }
        out
    }

    /// `2⌊min(max deg on X, max deg off X)/2⌋`.
    pub fn degree_formula(&self, x: &VertexSet) -> u64 {
        let side_max = |s: &VertexSet| s.iter().map(|v| self.g2.deg(v)).max().unwrap_or(0);
        even_floor(side_max(x).min(side_max(&x.complement())))
    }
}

/// A `G1` set lifted to `G2`, with both sides of the cut identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedCut {
    /// `X ∪ {q}` over `G1`.
    pub g1_set: VertexSet,
    /// `X'` over `G2`.
    pub set: VertexSet,
    /// `d_{G1}(X ∪ {q}) − d_H(X ∩ V_H)`.
    pub g1_value: i64,
    /// `d_{G2}(X') − d_F(X')`.
    pub g2_value: i64,
}

impl LiftedCut {
    /// Whether `g1_value < M`, the condition that makes `X'` violate the cut condition.
    pub fn violates(&self, c: &Constants) -> bool {
        self.g1_value < c.big_m as i64
    }
}

/// Lifts a selection `X ⊆ V_H ∪ {s}` of `G1` vertices to `X' ⊆ V(G2)`:
/// `q`, every gadget of `X`, and `W^s` when `s ∈ X`. `q` is always added;
/// `t` must not be selected.
pub fn lift_cut(ca: &CaInstance, x: &VertexSet) -> Result<LiftedCut> {
    if x.contains(ca.g1.t) {
        return Err(Error::InvalidParameter("t cannot be in a lifted set".into()));
    }
    let mut g1_set = x.clone();
    ca.g1.graph.cut_size(&g1_set)?;
    g1_set.insert(ca.g1.q);
    let set = ca.expand(&g1_set);
    let g1_value = ca.g1.local_value(ca.seed.graph(), &g1_set)?;
    let g2_value = ca.g2.cut_size(&set)? as i64 - ca.pairing.graph().cut_size(&set)? as i64;
    Ok(LiftedCut {
        g1_set,
        set,
        g1_value,
        g2_value,
    })
}

/// Sets of `G1` to lift, selected by label (`"s"` or a vertex of `H`).
pub fn g1_selection(ca: &CaInstance, labels: &[impl AsRef<str>]) -> Result<VertexSet> {
    VertexSet::from_labels(&ca.g1.graph, labels)
}

/// Routes every `F`-edge along its own path in `G`, paths pairwise
/// edge-disjoint (greedy, shortest paths first come first served). Success
/// proves `d_G(X) ≥ d_F(X)` for every `X`.
pub fn route_pairing(g: &MultiGraph, f: &Pairing) -> bool {
    let mut cap: Vec<u64> = g.pairs().iter().map(|p| p.mult).collect();
    let n = g.vertex_count();
    for (s, t) in f.edges() {
        let mut prev: Vec<Option<(VertexId, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[s.0] = true;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for &(w, pair) in g.neighbors(u) {
                if cap[pair] > 0 && !seen[w.0] {
                    seen[w.0] = true;
                    prev[w.0] = Some((u, pair));
                    queue.push_back(w);
                }
            }
        }
        if !seen[t.0] {
            return false;
        }
        let mut cur = t;
        while let Some((u, pair)) = prev[cur.0] {
            cap[pair] -= 1;
            cur = u;
        }
    }
    true
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct NotbigReport {
    pub sets_checked: u64,
    pub failures: u64,
    pub routed: bool,
}

/// `d_{G2}(X) ≥ d_F(X)` over singletons, whole gadgets, gadget rows and
/// `samples` random sets, plus the edge-disjoint routing certificate.
pub fn check_notbig(ca: &CaInstance, seed: u64, samples: usize) -> Result<NotbigReport> {
    let g = &ca.g2;
    let f = ca.pairing.graph();
    let n = g.vertex_count();
    let mut rep = NotbigReport::default();
    let check = |x: &VertexSet, rep: &mut NotbigReport| -> Result<()> {
        rep.sets_checked += 1;
        if g.cut_size(x)? < f.cut_size(x)? {
            rep.failures += 1;
        }
        Ok(())
    };
    for v in g.vertices() {
        check(&VertexSet::from_vertices(g, [v])?, &mut rep)?;
    }
    for w in std::iter::once(&ca.central).chain(&ca.gadgets) {
        check(&w.vertex_set(n), &mut rep)?;
        for r in 1..=w.rows() {
            check(&w.block(n, r, r, w.columns()), &mut rep)?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let mut x = VertexSet::empty(n);
        for v in g.vertices() {
            if rng.random_bool(0.5) {
                x.insert(v);
            }
        }
        check(&x, &mut rep)?;
    }
    rep.routed = route_pairing(g, &ca.pairing);
    Ok(rep)
}

/// Random unions of whole gadgets, each optionally with `q` and `t`.
pub fn random_gadget_sets(ca: &CaInstance, seed: u64, count: usize) -> Vec<VertexSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = ca.g1.graph.vertex_count();
    (0..count)
        .map(|_| {
            let mask: u64 = rng.random_range(1..(1u64 << k) - 1);
            ca.expand(&VertexSet::from_mask(k, mask))
        })
        .collect()
}

/// Global edge-connectivity of a graph (`min_v λ(v_0, v)`).
pub fn edge_connectivity(g: &MultiGraph) -> u64 {
    let mut net = ConnectivityNetwork::undirected(g);
    (1..g.vertex_count())
        .map(|v| net.max_flow(VertexId(0), VertexId(v), u64::MAX))
        .min()
        .unwrap_or(0)
}

/// Graph with lower bounds on out- and in-degree per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BwboInstance {
    pub graph: MultiGraph,
    pub out_lower: Vec<u64>,
    pub in_lower: Vec<u64>,
}

impl BwboInstance {
    pub fn new(graph: MultiGraph, out_lower: Vec<u64>, in_lower: Vec<u64>) -> Result<Self> {
        let n = graph.vertex_count();
        if out_lower.len() != n || in_lower.len() != n {
            return Err(Error::InvalidParameter(format!("expected {n} bounds per direction")));
        }
        Ok(BwboInstance {
            graph,
            out_lower,
            in_lower,
        })
    }

    /// Whether `forward` meets the degree bounds.
    pub(crate) fn bounds_met(&self, d: &Orientation) -> Option<String> {
        self.graph.vertices().find_map(|v| {
            let (out, inn) = (d.out_degree(v), d.in_degree(v));
            if out < self.out_lower[v.0] {
                Some(format!("out-degree of {} is {out} < {}", self.graph.label(v), self.out_lower[v.0]))
            } else if inn < self.in_lower[v.0] {
                Some(format!("in-degree of {} is {inn} < {}", self.graph.label(v), self.in_lower[v.0]))
            } else {
                None
            }
        })
    }
}

/// Requirement `r(u,v)` for every ordered pair; absent entries are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RequirementTable {
    n: usize,
    values: Vec<u64>,
}

impl RequirementTable {
    pub fn zeros(n: usize) -> Self {
        RequirementTable {
            n,
            values: vec![0; n * n],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: VertexId, v: VertexId) -> u64 {
        self.values[u.0 * self.n + v.0]
    }

    pub fn set(&mut self, u: VertexId, v: VertexId, r: u64) {
        self.values[u.0 * self.n + v.0] = r;
    }

    /// Nonzero entries `(u, v, r)` in lexicographic order.
    pub fn positive(&self) -> impl Iterator<Item = (VertexId, VertexId, u64)> + '_ {
        (0..self.n * self.n)
            .filter(|&i| self.values[i] > 0 && i / self.n != i % self.n)
            .map(move |i| (VertexId(i / self.n), VertexId(i % self.n), self.values[i]))
    }
}

/// Graph with a local arc-connectivity requirement table. Instances made
/// by [`bwbo_to_laco`] also record the added terminals `x` and `y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LacoInstance {
    pub graph: MultiGraph,
    pub requirements: RequirementTable,
    pub terminals: Option<(VertexId, VertexId)>,
}

impl LacoInstance {
    pub fn new(graph: MultiGraph, requirements: RequirementTable) -> Result<Self> {
        if requirements.vertex_count() != graph.vertex_count() {
            return Err(Error::InvalidParameter("requirement table size differs from graph".into()));
        }
        Ok(LacoInstance {
            graph,
            requirements,
            terminals: None,
        })
    }

    /// First requirement not met by `d`, as `(u, v, λ_D(u,v), r(u,v))`.
    pub fn first_unmet(&self, d: &Orientation) -> Result<Option<(VertexId, VertexId, u64, u64)>> {
        if d.graph() != &self.graph {
            return Err(Error::OrientationMismatch);
        }
        let mut net = ConnectivityNetwork::directed(d);
        Ok(self.requirements.positive().find_map(|(u, v, r)| {
            let got = net.max_flow(u, v, r);
            (got < r).then_some((u, v, got, r))
        }))
    }

    fn describe(&self, (u, v, got, r): (VertexId, VertexId, u64, u64)) -> String {
        format!(
            "λ({}, {}) = {got} < r = {r}",
            self.graph.label(u),
            self.graph.label(v)
        )
    }
}

fn fresh_label(g: &MultiGraph, base: &str) -> String {
    let mut label = base.to_owned();
    while g.vertex(&label).is_ok() {
        label.push('\'');
    }
    label
}

/// Adds terminals `x`, `y` joined to every `v` by `d_G(v)` edges each, with
/// `r(u,v) = ⌊λ_G(u,v)/2⌋`, `r(x,v) = d_G(v) + l⁻(v)`, `r(v,y) = d_G(v) + l⁺(v)`
/// and `r(x,y) = 2|E|`.
pub fn bwbo_to_laco(inst: &BwboInstance) -> Result<LacoInstance> {
    let g = &inst.graph;
    let n = g.vertex_count();
    let mut b = GraphBuilder::with_vertices_of(g);
    for p in g.pairs() {
        b.add_edge(p.u, p.v, p.mult)?;
    }
    let x = b.add_vertex(fresh_label(g, "x"))?;
    let y = b.add_vertex(fresh_label(g, "y"))?;
    for v in g.vertices() {
        if g.deg(v) > 0 {
            b.add_edge(v, x, g.deg(v))?;
            b.add_edge(v, y, g.deg(v))?;
        }
    }
    let graph = b.build();
    let table = LambdaTable::compute(g);
    let mut r = RequirementTable::zeros(n + 2);
    for u in g.vertices() {
        for v in g.vertices() {
            if u != v {
                r.set(u, v, table.get(u, v) / 2);
            }
        }
        r.set(x, u, g.deg(u) + inst.in_lower[u.0]);
        r.set(u, y, g.deg(u) + inst.out_lower[u.0]);
    }
    r.set(x, y, 2 * g.edge_count());
    Ok(LacoInstance {
        graph,
        requirements: r,
        terminals: Some((x, y)),
    })
}

fn base_graph(inst: &LacoInstance) -> Result<(MultiGraph, VertexId, VertexId)> {
    let (x, y) = inst
        .terminals
        .ok_or_else(|| Error::InvalidParameter("instance was not produced by the BWBO reduction".into()))?;
    let mut keep = VertexSet::full(inst.graph.vertex_count());
    keep.remove(x);
    keep.remove(y);
    Ok((inst.graph.induced(&keep)?, x, y))
}

/// Restricts an orientation meeting every requirement to the original graph.
pub fn project_laco_witness(inst: &LacoInstance, d: &Orientation) -> Result<Orientation> {
    if let Some(miss) = inst.first_unmet(d)? {
        return Err(Error::RequirementViolated(inst.describe(miss)));
    }
    let (g, _, _) = base_graph(inst)?;
    let forward = g.pairs().iter().map(|p| d.arc_count(p.u, p.v)).collect();
    Orientation::new(Arc::new(g), forward)
}

/// Extends a solution of the BWBO instance by pointing every `x`-edge away
/// from `x` and every `y`-edge into `y`.
pub fn lift_bwbo_witness(bwbo: &BwboInstance, inst: &LacoInstance, d: &Orientation) -> Result<Orientation> {
    let (g, x, y) = base_graph(inst)?;
    if d.graph() != &g || g != bwbo.graph {
        return Err(Error::OrientationMismatch);
    }
    if let Some(msg) = bwbo.bounds_met(d) {
        return Err(Error::RequirementViolated(msg));
    }
    if let WellBalance::Violated {
        source,
        sink,
        directed,
        required,
        ..
    } = is_well_balanced(&g, d)?
    {
        return Err(Error::RequirementViolated(format!(
            "not well-balanced: λ({}, {}) = {directed} < {required}",
            g.label(source),
            g.label(sink)
        )));
    }
    let big = &inst.graph;
    let forward = big
        .pairs()
        .iter()
        .map(|p| {
            // x and y carry the two highest indices, so they are always `p.v`
            if p.v == y {
                p.mult
            } else if p.v == x {
                0
            } else {
                d.arc_count(p.u, p.v)
            }
        })
        .collect();
    Orientation::new(Arc::new(big.clone()), forward)
}
