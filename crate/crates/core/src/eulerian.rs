//! Eulerian orientations and the extension of a fixed orientation of `F`
//! to an eulerian orientation of `G + F`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::flow::FlowNetwork;
use crate::graph::{MultiGraph, Orientation, VertexId, VertexSet};

/// Orientation with in-degree equal to out-degree everywhere.
///
/// Each pair first sends half its copies each way; the leftover single copies
/// form an even simple graph, which is decomposed into closed trails starting
/// from the lowest vertex and always taking the lowest unused neighbour.
pub fn eulerian_orientation(g: &Arc<MultiGraph>) -> Result<Orientation> {
    if let Some(v) = g.vertices().find(|&v| g.deg(v) % 2 == 1) {
        return Err(Error::OddDegree(g.label(v).to_owned()));
    }
    let mut forward: Vec<u64> = g.pairs().iter().map(|p| p.mult / 2).collect();
    let mut unused: Vec<bool> = g.pairs().iter().map(|p| p.mult % 2 == 1).collect();
    let mut cursor = vec![0usize; g.vertex_count()];
    for start in g.vertices() {
        loop {
            let mut cur = start;
            let mut moved = false;
            while let Some((next, pair)) = next_unused(g, cur, &mut cursor, &unused) {
                unused[pair] = false;
                if cur < next {
                    forward[pair] += 1;
                }
                cur = next;
                moved = true;
            }
            debug_assert!(!moved || cur == start);
            if !moved {
                break;
            }
        }
    }
    Orientation::new(Arc::clone(g), forward)
}

fn next_unused(
    g: &MultiGraph,
    v: VertexId,
    cursor: &mut [usize],
    unused: &[bool],
) -> Option<(VertexId, usize)> {
    let list = g.neighbors(v);
    while cursor[v.0] < list.len() {
        let (w, pair) = list[cursor[v.0]];
        if unused[pair] {
            return Some((w, pair));
        }
        cursor[v.0] += 1;
    }
    None
}

/// Result of trying to complete `F⃗` to an eulerian orientation of `G + F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtensionOutcome {
    /// An orientation of `G` making `G⃗ + F⃗` eulerian.
    Extended(Orientation),
    /// A set `X` with `d_G(X) < d⁺_F(X) − d⁻_F(X)`.
    Infeasible(VertexSet),
}

impl ExtensionOutcome {
    pub fn orientation(&self) -> Option<&Orientation> {
        match self {
            ExtensionOutcome::Extended(d) => Some(d),
            ExtensionOutcome::Infeasible(_) => None,
        }
    }
}

/// Finds `G⃗` with `G⃗ + F⃗` eulerian, or a set violating
/// `d_G(X) ≥ d⁺_F(X) − d⁻_F(X)`.
///
/// `G` is first oriented low-to-high; the resulting vertex imbalances are
/// cancelled by one max-flow in which reversing a copy of `u→v` moves one
/// unit of excess from `u` to `v`. When the flow falls short, the vertices
/// reachable from the super source in the residual network form the
/// certificate.
pub fn extend_to_eulerian(g: &Arc<MultiGraph>, f: &Orientation) -> Result<ExtensionOutcome> {
    if !g.same_vertices(f.graph()) {
        return Err(Error::VertexSetMismatch);
    }
    let n = g.vertex_count();
    let mut excess = vec![0i64; n];
    for v in g.vertices() {
        let total = g.deg(v) + f.graph().deg(v);
        if total % 2 == 1 {
            return Err(Error::OddDegree(g.label(v).to_owned()));
        }
        excess[v.0] = f.out_degree(v) as i64 - f.in_degree(v) as i64;
    }
    for p in g.pairs() {
        excess[p.u.0] += p.mult as i64;
        excess[p.v.0] -= p.mult as i64;
    }
    let (source, sink) = (n, n + 1);
    let mut net = FlowNetwork::new(n + 2);
    for p in g.pairs() {
        net.add_pair(p.u.0, p.v.0, p.mult, 0);
    }
    let mut supply = 0u64;
    for (v, &e) in excess.iter().enumerate() {
        debug_assert!(e % 2 == 0);
        if e > 0 {
            net.add_pair(source, v, (e / 2) as u64, 0);
            supply += (e / 2) as u64;
        } else if e < 0 {
            net.add_pair(v, sink, (-e / 2) as u64, 0);
        }
    }
    let routed = net.max_flow(source, sink, u64::MAX);
    if routed < supply {
        let reach = net.residual_reachable(source);
        let mut x = VertexSet::empty(n);
        for v in 0..n {
            if reach[v] {
                x.insert(VertexId(v));
            }
        }
        debug_assert!(!check_ff_condition(g, f, &x).unwrap_or(true));
        return Ok(ExtensionOutcome::Infeasible(x));
    }
    let forward = g
        .pairs()
        .iter()
        .enumerate()
        .map(|(i, p)| p.mult - net.net_flow(2 * i) as u64)
        .collect();
    let d = Orientation::new(Arc::clone(g), forward)?;
    debug_assert!(g
        .vertices()
        .all(|v| d.out_degree(v) + f.out_degree(v) == d.in_degree(v) + f.in_degree(v)));
    Ok(ExtensionOutcome::Extended(d))
}

/// `d_G(X) ≥ d⁺_F(X) − d⁻_F(X)` for the single set `x`.
pub fn check_ff_condition(g: &MultiGraph, f: &Orientation, x: &VertexSet) -> Result<bool> {
    if !g.same_vertices(f.graph()) {
        return Err(Error::VertexSetMismatch);
    }
    let cut = g.cut_size(x)? as i64;
    let imbalance = f.out_cut(x)? as i64 - f.in_cut(x)? as i64;
    Ok(cut >= imbalance)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc_graph(labels: &[&str], arcs: &[(&str, &str)]) -> Orientation {
        let labels: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
        let idx = |l: &str| VertexId(labels.iter().position(|x| x == l).unwrap());
        Orientation::from_arcs(&labels, arcs.iter().map(|&(a, b)| (idx(a), idx(b), 1))).unwrap()
    }

    #[test]
    fn cycle_gets_cyclic_orientation() {
        let g = Arc::new(
            MultiGraph::from_edges(
                ["a", "b", "c", "d"],
                [("a", "b", 1), ("b", "c", 1), ("c", "d", 1), ("a", "d", 1)],
            )
            .unwrap(),
        );
        let d = eulerian_orientation(&g).unwrap();
        assert!(d.is_eulerian());
        let a = |x: &str, y: &str| d.arc_count(g.vertex(x).unwrap(), g.vertex(y).unwrap());
        assert_eq!((a("a", "b"), a("b", "c"), a("c", "d"), a("d", "a")), (1, 1, 1, 1));
    }

    #[test]
    fn eulerian_orientation_edge_cases() {
        let empty = Arc::new(MultiGraph::default());
        assert!(eulerian_orientation(&empty).unwrap().arcs().next().is_none());
        let dbl = Arc::new(MultiGraph::from_edges(["u", "v"], [("u", "v", 2)]).unwrap());
        let d = eulerian_orientation(&dbl).unwrap();
        assert_eq!(d.forward_counts(), &[1]);
        let single = Arc::new(MultiGraph::from_edges(["u", "v"], [("u", "v", 1)]).unwrap());
        assert!(matches!(eulerian_orientation(&single), Err(Error::OddDegree(l)) if l == "u"));
    }

    #[test]
    fn unique_completion_of_two_cycle() {
        let g = Arc::new(MultiGraph::from_edges(["u", "v"], [("u", "v", 1)]).unwrap());
        let f = arc_graph(&["u", "v"], &[("u", "v")]);
        match extend_to_eulerian(&g, &f).unwrap() {
            ExtensionOutcome::Extended(d) => {
                assert_eq!(d.arc_count(VertexId(1), VertexId(0)), 1);
            }
            other => panic!("expected extension, got {other:?}"),
        }
    }

    #[test]
    fn infeasible_square() {
        let g = Arc::new(MultiGraph::from_edges(["a", "b", "c", "d"], [("a", "b", 1), ("c", "d", 1)]).unwrap());
        let f = arc_graph(&["a", "b", "c", "d"], &[("a", "c"), ("b", "d")]);
        let x = match extend_to_eulerian(&g, &f).unwrap() {
            ExtensionOutcome::Infeasible(x) => x,
            other => panic!("expected certificate, got {other:?}"),
        };
        assert_eq!(x.labels(&g), vec!["a", "b"]);
        assert!(!check_ff_condition(&g, &f, &x).unwrap());
        assert!(check_ff_condition(&g, &f, &VertexSet::empty(4)).unwrap());
        // both F arcs inside the set
        let inside = VertexSet::from_labels(&g, &["a", "b", "c", "d"]).unwrap();
        assert!(check_ff_condition(&g, &f, &inside).unwrap());
    }

    #[test]
    fn empty_f_on_eulerian_g() {
        let g = Arc::new(
            MultiGraph::from_edges(["a", "b", "c"], [("a", "b", 1), ("b", "c", 1), ("a", "c", 1)]).unwrap(),
        );
        let f = Orientation::all_forward(Arc::new(g.edgeless_like()));
        let d = extend_to_eulerian(&g, &f).unwrap();
        assert!(d.orientation().unwrap().is_eulerian());
    }

    #[test]
    fn odd_sum_is_error() {
        let g = Arc::new(MultiGraph::from_edges(["u", "v"], [("u", "v", 1)]).unwrap());
        let f = Orientation::all_forward(Arc::new(g.edgeless_like()));
        assert!(matches!(extend_to_eulerian(&g, &f), Err(Error::OddDegree(_))));
    }
}
