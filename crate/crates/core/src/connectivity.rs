//! Local edge- and arc-connectivity, the `R_G` functional and
//! well-balancedness.

use crate::error::{Error, Result};
use crate::flow::FlowNetwork;
use crate::graph::{MultiGraph, Orientation, VertexId, VertexSet};

/// A maximum flow value together with a minimum cut side containing the source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowResult {
    pub value: u64,
    pub side: VertexSet,
}

#[inline]
pub(crate) fn even_floor(x: u64) -> u64 {
    x & !1
}

/// Flow network over a graph's vertices, reusable across many queries.
#[derive(Clone, Debug)]
pub struct ConnectivityNetwork {
    net: FlowNetwork,
    n: usize,
}

impl ConnectivityNetwork {
    /// Every edge usable in both directions with its multiplicity as capacity.
    pub fn undirected(g: &MultiGraph) -> Self {
        let mut net = FlowNetwork::new(g.vertex_count());
        for p in g.pairs() {
            net.add_pair(p.u.0, p.v.0, p.mult, p.mult);
        }
        ConnectivityNetwork {
            net,
            n: g.vertex_count(),
        }
    }

    pub fn directed(d: &Orientation) -> Self {
        Self::from_forward(d.graph(), d.forward_counts())
    }

    pub(crate) fn from_forward(g: &MultiGraph, forward: &[u64]) -> Self {
        let mut net = FlowNetwork::new(g.vertex_count());
        for (p, &f) in g.pairs().iter().zip(forward) {
            net.add_pair(p.u.0, p.v.0, f, p.mult - f);
        }
        ConnectivityNetwork {
            net,
            n: g.vertex_count(),
        }
    }

    /// Re-points every pair of `g` to the split given by `forward`.
    pub(crate) fn set_forward(&mut self, g: &MultiGraph, forward: &[u64]) {
        for (i, (p, &f)) in g.pairs().iter().zip(forward).enumerate() {
            self.net.set_pair(2 * i, f, p.mult - f);
        }
    }

    pub fn max_flow(&mut self, s: VertexId, t: VertexId, limit: u64) -> u64 {
        self.net.max_flow(s.0, t.0, limit)
    }

    /// Exact max flow plus the residual-reachable side of `s`.
    pub fn min_cut(&mut self, s: VertexId, t: VertexId) -> FlowResult {
        let value = self.net.max_flow(s.0, t.0, u64::MAX);
        let reach = self.net.residual_reachable(s.0);
        let mut side = VertexSet::empty(self.n);
        for (i, r) in reach.into_iter().enumerate() {
            if r {
                side.insert(VertexId(i));
            }
        }
        FlowResult { value, side }
    }
}

fn check_endpoints(g: &MultiGraph, s: VertexId, t: VertexId) -> Result<()> {
    g.degree(s)?;
    g.degree(t)?;
    if s == t {
        return Err(Error::SameEndpoints(g.label(s).to_owned()));
    }
    Ok(())
}

/// `λ_G(s,t)` with a certifying minimum cut.
pub fn lambda_undirected(g: &MultiGraph, s: VertexId, t: VertexId) -> Result<FlowResult> {
    check_endpoints(g, s, t)?;
    let res = ConnectivityNetwork::undirected(g).min_cut(s, t);
    debug_assert_eq!(g.cut_size_unchecked(&res.side), res.value);
    Ok(res)
}

/// `λ_D(s,t)` with a certifying minimum out-cut.
pub fn lambda_directed(d: &Orientation, s: VertexId, t: VertexId) -> Result<FlowResult> {
    check_endpoints(d.graph(), s, t)?;
    let res = ConnectivityNetwork::directed(d).min_cut(s, t);
    debug_assert_eq!(d.out_cut(&res.side).ok(), Some(res.value));
    Ok(res)
}

/// All-pairs `λ_G`, one flow per unordered pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaTable {
    n: usize,
    values: Vec<u64>,
}

impl LambdaTable {
    pub fn compute(g: &MultiGraph) -> Self {
        let n = g.vertex_count();
        let mut values = vec![0; n * n];
        let mut net = ConnectivityNetwork::undirected(g);
        for u in 0..n {
            for v in u + 1..n {
                let lam = net.max_flow(VertexId(u), VertexId(v), u64::MAX);
                values[u * n + v] = lam;
                values[v * n + u] = lam;
            }
        }
        LambdaTable { n, values }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, u: VertexId, v: VertexId) -> u64 {
        self.values[u.0 * self.n + v.0]
    }

    /// `R_G(X)` read off the table.
    pub fn r_value(&self, x: &VertexSet) -> u64 {
        let mut best = 0;
        for u in x.iter() {
            for v in 0..self.n {
                if !x.contains(VertexId(v)) {
                    best = best.max(even_floor(self.get(u, VertexId(v))));
                }
            }
        }
        best
    }

    /// `R_G(X)` for a bitmask set (vertex `i` is bit `i`).
    pub(crate) fn r_value_mask(&self, mask: u64) -> u64 {
        let mut best = 0;
        for u in 0..self.n {
            if mask >> u & 1 == 0 {
                continue;
            }
            for v in 0..self.n {
                if mask >> v & 1 == 0 {
                    best = best.max(even_floor(self.values[u * self.n + v]));
                }
            }
        }
        best
    }
}

fn by_degree_desc(g: &MultiGraph, set: &VertexSet) -> Vec<VertexId> {
    let mut vs: Vec<VertexId> = set.iter().collect();
    vs.sort_by_key(|&v| (std::cmp::Reverse(g.deg(v)), v));
    vs
}

/// `R_G(X) = max{2⌊λ_G(s,t)/2⌋ : s ∈ X, t ∉ X}`, zero for `X ∈ {∅, V}`.
///
/// Pairs are visited by decreasing degree so the search can stop as soon as
/// the degree bound `2⌊Δ/2⌋` is reached; the bound prunes but is never
/// returned unless a flow attains it.
pub fn r_value(g: &MultiGraph, x: &VertexSet) -> Result<u64> {
    g.cut_size(x)?;
    let n = g.vertex_count();
    if x.is_empty() || x.len() == n {
        return Ok(0);
    }
    let inside = by_degree_desc(g, x);
    let outside = by_degree_desc(g, &x.complement());
    let bound = even_floor(g.deg(inside[0]).min(g.deg(outside[0])));
    let mut net = ConnectivityNetwork::undirected(g);
    let mut best = 0;
    for &u in &inside {
        if even_floor(g.deg(u)) <= best {
            break;
        }
        for &v in &outside {
            let cap = even_floor(g.deg(u).min(g.deg(v)));
            if cap <= best {
                break;
            }
            let lam = net.max_flow(u, v, cap);
            best = best.max(even_floor(lam));
            if best == bound {
                return Ok(best);
            }
        }
    }
    Ok(best)
}

/// First pair `(u, v)`, `u ∈ X`, `v ∉ X`, in vertex order whose
/// `2⌊λ_G(u,v)/2⌋` equals `R_G(X)`, with `λ_G(u,v)`.
pub fn r_value_witness(g: &MultiGraph, x: &VertexSet) -> Result<Option<(VertexId, VertexId, u64)>> {
    let r = r_value(g, x)?;
    if x.is_empty() || x.len() == g.vertex_count() {
        return Ok(None);
    }
    let mut net = ConnectivityNetwork::undirected(g);
    let outside: Vec<VertexId> = x.complement().iter().collect();
    for u in x.iter() {
        if even_floor(g.deg(u)) < r {
            continue;
        }
        for &v in &outside {
            if even_floor(g.deg(u).min(g.deg(v))) < r {
                continue;
            }
            let lam = net.max_flow(u, v, u64::MAX);
            if even_floor(lam) == r {
                return Ok(Some((u, v, lam)));
            }
        }
    }
    unreachable!("R_G(X) is attained by some pair")
}

/// Outcome of a well-balancedness check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WellBalance {
    Balanced,
    /// `λ_D(source, sink) = directed < required = ⌊λ_G(source, sink)/2⌋`.
    Violated {
        source: VertexId,
        sink: VertexId,
        directed: u64,
        undirected: u64,
        required: u64,
    },
}

impl WellBalance {
    pub fn is_balanced(&self) -> bool {
        matches!(self, WellBalance::Balanced)
    }
}

/// Checks `λ_D(s,t) ≥ ⌊λ_G(s,t)/2⌋` for all ordered pairs, in lexicographic
/// order, reporting the first violation.
pub fn is_well_balanced(g: &MultiGraph, d: &Orientation) -> Result<WellBalance> {
    if d.graph() != g {
        return Err(Error::OrientationMismatch);
    }
    let table = LambdaTable::compute(g);
    let mut net = ConnectivityNetwork::directed(d);
    Ok(well_balance_scan(&table, &mut net))
}

pub(crate) fn well_balance_scan(table: &LambdaTable, net: &mut ConnectivityNetwork) -> WellBalance {
    let n = table.vertex_count();
    for s in 0..n {
        for t in 0..n {
            if s == t {
                continue;
            }
            let (s, t) = (VertexId(s), VertexId(t));
            let undirected = table.get(s, t);
            let required = undirected / 2;
            if required == 0 {
                continue;
            }
            let got = net.max_flow(s, t, required);
            if got < required {
                return WellBalance::Violated {
                    source: s,
                    sink: t,
                    directed: got,
                    undirected,
                    required,
                };
            }
        }
    }
    WellBalance::Balanced
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn brute_min_cut(g: &MultiGraph, s: VertexId, t: VertexId) -> u64 {
        let n = g.vertex_count();
        (0u64..1 << n)
            .filter(|m| m >> s.0 & 1 == 1 && m >> t.0 & 1 == 0)
            .map(|m| g.cut_size_mask(m))
            .min()
            .unwrap()
    }

    fn k4() -> MultiGraph {
        MultiGraph::from_edges(
            ["a", "b", "c", "d"],
            [("a", "b", 1), ("a", "c", 1), ("a", "d", 1), ("b", "c", 1), ("b", "d", 1), ("c", "d", 1)],
        )
        .unwrap()
    }

    #[test]
    fn lambda_examples() {
        let g = MultiGraph::from_edges(["s", "t", "u"], [("s", "u", 1)]).unwrap();
        let r = lambda_undirected(&g, VertexId(0), VertexId(1)).unwrap();
        assert_eq!(r.value, 0);
        let tri = MultiGraph::from_edges(["a", "b", "c"], [("a", "b", 1), ("b", "c", 1), ("a", "c", 1)]).unwrap();
        assert_eq!(lambda_undirected(&tri, VertexId(0), VertexId(2)).unwrap().value, 2);
        let k = k4();
        for s in k.vertices() {
            for t in k.vertices() {
                if s != t {
                    assert_eq!(brute_min_cut(&k, s, t), 3);
                    let res = lambda_undirected(&k, s, t).unwrap();
                    assert_eq!(res.value, 3);
                    assert!(res.side.contains(s) && !res.side.contains(t));
                }
            }
        }
        assert!(matches!(
            lambda_undirected(&k, VertexId(1), VertexId(1)),
            Err(Error::SameEndpoints(_))
        ));
    }

    #[test]
    fn directed_examples() {
        let cyc = Arc::new(
            MultiGraph::from_edges(["a", "b", "c"], [("a", "b", 1), ("b", "c", 1), ("a", "c", 1)]).unwrap(),
        );
        // a->b, b->c, c->a
        let d = Orientation::new(Arc::clone(&cyc), vec![1, 0, 1]).unwrap();
        assert!(d.is_eulerian());
        assert_eq!(lambda_directed(&d, VertexId(0), VertexId(1)).unwrap().value, 1);
        // everything into a
        let into = Orientation::new(Arc::clone(&cyc), vec![0, 0, 1]).unwrap();
        assert_eq!(lambda_directed(&into, VertexId(0), VertexId(2)).unwrap().value, 0);
        let dbl = Arc::new(MultiGraph::from_edges(["u", "v"], [("u", "v", 2)]).unwrap());
        let split = Orientation::new(dbl, vec![1]).unwrap();
        assert_eq!(lambda_directed(&split, VertexId(0), VertexId(1)).unwrap().value, 1);
        assert_eq!(lambda_directed(&split, VertexId(1), VertexId(0)).unwrap().value, 1);
    }

    #[test]
    fn r_value_examples() {
        let path = MultiGraph::from_edges(["a", "b", "c"], [("a", "b", 1), ("b", "c", 1)]).unwrap();
        assert_eq!(r_value(&path, &VertexSet::empty(3)).unwrap(), 0);
        assert_eq!(r_value(&path, &VertexSet::full(3)).unwrap(), 0);
        assert_eq!(r_value(&path, &VertexSet::from_labels(&path, &["a"]).unwrap()).unwrap(), 0);
        let dpath = MultiGraph::from_edges(["a", "b", "c"], [("a", "b", 2), ("b", "c", 2)]).unwrap();
        let x = VertexSet::from_labels(&dpath, &["a"]).unwrap();
        assert_eq!(r_value(&dpath, &x).unwrap(), 2);
        assert_eq!(r_value(&dpath, &x.complement()).unwrap(), 2);
        let (u, v, lam) = r_value_witness(&dpath, &x).unwrap().unwrap();
        assert_eq!((u, v, lam), (VertexId(0), VertexId(1), 2));
    }

    #[test]
    fn well_balanced_examples() {
        let tree = Arc::new(MultiGraph::from_edges(["a", "b", "c"], [("a", "b", 1), ("a", "c", 1)]).unwrap());
        for f in [[0, 0], [0, 1], [1, 0], [1, 1]] {
            let d = Orientation::new(Arc::clone(&tree), f.to_vec()).unwrap();
            assert!(is_well_balanced(&tree, &d).unwrap().is_balanced());
        }
        let dbl = Arc::new(MultiGraph::from_edges(["u", "v"], [("u", "v", 2)]).unwrap());
        let same = Orientation::all_forward(Arc::clone(&dbl));
        assert_eq!(
            is_well_balanced(&dbl, &same).unwrap(),
            WellBalance::Violated {
                source: VertexId(1),
                sink: VertexId(0),
                directed: 0,
                undirected: 2,
                required: 1
            }
        );
        let cyc = Arc::new(
            MultiGraph::from_edges(["a", "b", "c"], [("a", "b", 1), ("b", "c", 1), ("a", "c", 1)]).unwrap(),
        );
        let d = Orientation::new(Arc::clone(&cyc), vec![1, 0, 1]).unwrap();
        assert!(is_well_balanced(&cyc, &d).unwrap().is_balanced());
        let other = Orientation::all_forward(Arc::new(k4()));
        assert!(matches!(is_well_balanced(&cyc, &other), Err(Error::OrientationMismatch)));
    }
}
