//! Exhaustive ground-truth solvers for small instances.
//!
//! Orientations are enumerated as per-pair forward counts: pair 0 varies
//! slowest, each count runs upward from 0. Partial assignments that can no
//! longer meet a per-vertex out- or in-degree floor are cut off; the floors
//! used are always necessary conditions, so the first accepted leaf is the
//! same one a plain scan would return.

use std::sync::Arc;

use crate::admissibility::{decide_ca, decide_oa, enumerate_pairings, odd_vertices, CaDecision, CutViolation, OaDecision, Pairing};
use crate::connectivity::{well_balance_scan, ConnectivityNetwork, LambdaTable};
use crate::error::{Error, Result};
use crate::graph::{MultiGraph, Orientation, VertexSet};
use crate::limits::Limits;
use crate::reductions::{BwboInstance, LacoInstance};

fn too_large(what: &'static str, size: usize, limit: usize, hint: &'static str) -> Error {
    Error::TooLarge { what, size, limit, hint }
}

fn check_edges(g: &MultiGraph, limits: &Limits) -> Result<()> {
    let m = g.edge_count() as usize;
    if m > limits.orientation_max_edges {
        return Err(too_large("edge instances", m, limits.orientation_max_edges, "orientation_max_edges"));
    }
    Ok(())
}

/// Maximum cut by scanning every `X` that omits the last vertex, in mask
/// order; the first maximiser wins.
pub fn brute_maxcut(h: &MultiGraph, limits: &Limits) -> Result<(u64, VertexSet)> {
    let n = h.vertex_count();
    if n > limits.maxcut_max_vertices {
        return Err(too_large("vertices", n, limits.maxcut_max_vertices, "maxcut_max_vertices"));
    }
    if n <= 1 {
        return Ok((0, VertexSet::empty(n)));
    }
    let mut best = (0, 0u64);
    for mask in 0..1u64 << (n - 1) {
        let cut = h.cut_size_mask(mask);
        if cut > best.0 {
            best = (cut, mask);
        }
    }
    Ok((best.0, VertexSet::from_mask(n, best.1)))
}

/// Depth-first search over forward counts with out/in-degree floors.
struct OrientationSearch<'g> {
    g: &'g MultiGraph,
    need_out: Vec<u64>,
    need_in: Vec<u64>,
    out: Vec<u64>,
    inn: Vec<u64>,
    rest: Vec<u64>,
    forward: Vec<u64>,
}

impl<'g> OrientationSearch<'g> {
    fn new(g: &'g MultiGraph, need_out: Vec<u64>, need_in: Vec<u64>) -> Self {
        let n = g.vertex_count();
        OrientationSearch {
            g,
            need_out,
            need_in,
            out: vec![0; n],
            inn: vec![0; n],
            rest: g.degrees().to_vec(),
            forward: vec![0; g.pairs().len()],
        }
    }

    fn viable(&self, v: usize) -> bool {
        self.out[v] + self.rest[v] >= self.need_out[v] && self.inn[v] + self.rest[v] >= self.need_in[v]
    }

    /// Calls `accept` on complete assignments until it returns true.
    fn run(&mut self, accept: &mut impl FnMut(&[u64]) -> bool) -> Option<Vec<u64>> {
        if !self.g.vertices().all(|v| self.viable(v.0)) {
            return None;
        }
        if self.descend(0, accept) {
            Some(self.forward.clone())
        } else {
            None
        }
    }

    fn descend(&mut self, i: usize, accept: &mut impl FnMut(&[u64]) -> bool) -> bool {
        let pairs = self.g.pairs();
        if i == pairs.len() {
            return accept(&self.forward);
        }
        let p = pairs[i];
        let (u, v) = (p.u.0, p.v.0);
        self.rest[u] -= p.mult;
        self.rest[v] -= p.mult;
        for f in 0..=p.mult {
            let b = p.mult - f;
            self.out[u] += f;
            self.inn[v] += f;
            self.out[v] += b;
            self.inn[u] += b;
            self.forward[i] = f;
            let found = self.viable(u) && self.viable(v) && self.descend(i + 1, accept);
            self.out[u] -= f;
            self.inn[v] -= f;
            self.out[v] -= b;
            self.inn[u] -= b;
            if found {
                self.rest[u] += p.mult;
                self.rest[v] += p.mult;
                return true;
            }
        }
        self.rest[u] += p.mult;
        self.rest[v] += p.mult;
        false
    }
}

fn first_well_balanced(g: &MultiGraph, need_out: Vec<u64>, need_in: Vec<u64>) -> Result<Option<Orientation>> {
    let table = LambdaTable::compute(g);
    let mut net = ConnectivityNetwork::from_forward(g, &vec![0; g.pairs().len()]);
    let found = OrientationSearch::new(g, need_out, need_in).run(&mut |forward| {
        net.set_forward(g, forward);
        well_balance_scan(&table, &mut net).is_balanced()
    });
    found
        .map(|forward| Orientation::new(Arc::new(g.clone()), forward))
        .transpose()
}

/// First well-balanced orientation meeting the degree bounds.
pub fn brute_bwbo(inst: &BwboInstance, limits: &Limits) -> Result<Option<Orientation>> {
    check_edges(&inst.graph, limits)?;
    first_well_balanced(&inst.graph, inst.out_lower.clone(), inst.in_lower.clone())
}

/// First well-balanced orientation. Existence is guaranteed for every
/// graph, so not finding one is reported as an error.
pub fn brute_wbo_exists(g: &MultiGraph, limits: &Limits) -> Result<Orientation> {
    check_edges(g, limits)?;
    let n = g.vertex_count();
    first_well_balanced(g, vec![0; n], vec![0; n])?
        .ok_or_else(|| Error::GuaranteeFailed("no well-balanced orientation found".into()))
}

/// First orientation meeting every requirement. Candidates are checked by
/// one bounded flow per positive entry of the table.
pub fn brute_laco(inst: &LacoInstance, limits: &Limits) -> Result<Option<Orientation>> {
    let g = &inst.graph;
    check_edges(g, limits)?;
    let n = g.vertex_count();
    let mut need_out = vec![0; n];
    let mut need_in = vec![0; n];
    let demands: Vec<_> = inst.requirements.positive().collect();
    for &(u, v, r) in &demands {
        need_out[u.0] = need_out[u.0].max(r);
        need_in[v.0] = need_in[v.0].max(r);
    }
    let mut net = ConnectivityNetwork::from_forward(g, &vec![0; g.pairs().len()]);
    let found = OrientationSearch::new(g, need_out, need_in).run(&mut |forward| {
        net.set_forward(g, forward);
        demands.iter().all(|&(u, v, r)| net.max_flow(u, v, r) >= r)
    });
    found
        .map(|forward| Orientation::new(Arc::new(g.clone()), forward))
        .transpose()
}

/// Orientation of `G` making `G⃗ + F⃗` eulerian, by exhaustive search.
pub fn brute_eulerian_extension(g: &MultiGraph, f: &Orientation, limits: &Limits) -> Result<Option<Orientation>> {
    check_edges(g, limits)?;
    if !g.same_vertices(f.graph()) {
        return Err(Error::VertexSetMismatch);
    }
    let mut need_out = Vec::with_capacity(g.vertex_count());
    for v in g.vertices() {
        // out_G − in_G = in_F − out_F and out_G + in_G = d_G
        let twice = g.deg(v) as i64 + f.in_degree(v) as i64 - f.out_degree(v) as i64;
        if twice < 0 || twice % 2 == 1 || twice / 2 > g.deg(v) as i64 {
            return Ok(None);
        }
        need_out.push((twice / 2) as u64);
    }
    let need_in = g.vertices().map(|v| g.deg(v) - need_out[v.0]).collect();
    let found = OrientationSearch::new(g, need_out, need_in).run(&mut |_| true);
    found
        .map(|forward| Orientation::new(Arc::new(g.clone()), forward))
        .transpose()
}

/// First pairing (in enumeration order) that is cut-admissible.
pub fn brute_cut_admissible_pairing(g: &MultiGraph, limits: &Limits) -> Result<Pairing> {
    let n = g.vertex_count();
    if n > limits.pairing_max_vertices {
        return Err(too_large("vertices", n, limits.pairing_max_vertices, "pairing_max_vertices"));
    }
    let odd = odd_vertices(g).len();
    if odd > limits.pairing_max_odd {
        return Err(too_large("odd vertices", odd, limits.pairing_max_odd, "pairing_max_odd"));
    }
    for f in enumerate_pairings(g) {
        if decide_ca(g, &f, limits)?.is_admissible() {
            return Ok(f);
        }
    }
    Err(Error::GuaranteeFailed("no cut-admissible pairing found".into()))
}

/// A pairing that is orientation-admissible but violates the cut condition.
#[derive(Clone, Debug)]
pub struct OaNotCa {
    pub graph: MultiGraph,
    pub pairing: Pairing,
    pub violation: CutViolation,
}

/// Scans candidate graphs and all their pairings for a pairing that
/// `decide_oa` accepts and `decide_ca` rejects. Graphs beyond the decider
/// bounds are skipped.
pub fn find_oa_not_ca<I>(candidates: I, limits: &Limits) -> Result<Option<OaNotCa>>
where
    I: IntoIterator<Item = MultiGraph>,
{
    for g in candidates {
        if g.vertex_count() > limits.ca_max_vertices.min(63) {
            continue;
        }
        for f in enumerate_pairings(&g) {
            if g.edge_count() + f.graph().edge_count() > limits.oa_max_edges as u64 {
                continue;
            }
            let CaDecision::Violated(violation) = decide_ca(&g, &f, limits)? else {
                continue;
            };
            if let OaDecision::OrientationAdmissible = decide_oa(&g, &f, limits)? {
                return Ok(Some(OaNotCa {
                    graph: g,
                    pairing: f,
                    violation,
                }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connectivity::is_well_balanced;
    use crate::graph::VertexId;
    use crate::reductions::{bwbo_to_laco, project_laco_witness, RequirementTable};

    fn g(vs: &[&str], es: &[(&str, &str, u64)]) -> MultiGraph {
        MultiGraph::from_edges(vs.iter().copied(), es.iter().copied()).unwrap()
    }

    #[test]
    fn maxcut_examples() {
        let l = Limits::default();
        let tri = g(&["a", "b", "c"], &[("a", "b", 1), ("b", "c", 1), ("a", "c", 1)]);
        assert_eq!(brute_maxcut(&tri, &l).unwrap().0, 2);
        assert_eq!(brute_maxcut(&g(&["a", "b"], &[("a", "b", 1)]), &l).unwrap().0, 1);
        let (v, x) = brute_maxcut(&g(&["a", "b"], &[("a", "b", 6)]), &l).unwrap();
        assert_eq!((v, x.len()), (6, 1));
        let first = brute_maxcut(&tri, &l).unwrap().1;
        assert_eq!(first.labels(&tri), vec!["a"]);
        let big = MultiGraph::from_edges((0..21).map(|i| format!("v{i}")).collect::<Vec<_>>().iter().map(|s| s.as_str()), []).unwrap();
        assert!(matches!(brute_maxcut(&big, &l), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn bwbo_examples() {
        let l = Limits::default();
        let e = g(&["u", "v"], &[("u", "v", 1)]);
        let d = brute_bwbo(&BwboInstance::new(e.clone(), vec![0, 0], vec![0, 0]).unwrap(), &l).unwrap().unwrap();
        assert_eq!(d.forward_counts(), &[0]);
        assert!(brute_bwbo(&BwboInstance::new(e, vec![1, 1], vec![0, 0]).unwrap(), &l).unwrap().is_none());
        let dbl = g(&["u", "v"], &[("u", "v", 2)]);
        let d = brute_bwbo(&BwboInstance::new(dbl, vec![1, 0], vec![1, 0]).unwrap(), &l).unwrap().unwrap();
        assert_eq!(d.forward_counts(), &[1]);
    }

    #[test]
    fn laco_examples() {
        let l = Limits::default();
        let e = g(&["u", "v"], &[("u", "v", 1)]);
        let zero = LacoInstance::new(e.clone(), RequirementTable::zeros(2)).unwrap();
        assert_eq!(brute_laco(&zero, &l).unwrap().unwrap().forward_counts(), &[0]);
        let mut both = RequirementTable::zeros(2);
        both.set(VertexId(0), VertexId(1), 1);
        both.set(VertexId(1), VertexId(0), 1);
        assert!(brute_laco(&LacoInstance::new(e.clone(), both).unwrap(), &l).unwrap().is_none());

        let bwbo = BwboInstance::new(e, vec![1, 0], vec![0, 0]).unwrap();
        let laco = bwbo_to_laco(&bwbo).unwrap();
        let d = brute_laco(&laco, &l).unwrap().expect("reduced instance is solvable");
        let back = project_laco_witness(&laco, &d).unwrap();
        assert_eq!(back.arc_count(VertexId(0), VertexId(1)), 1);
        assert!(brute_bwbo(&bwbo, &l).unwrap().is_some());
    }

    #[test]
    fn wbo_examples() {
        let l = Limits::default();
        let tree = g(&["a", "b", "c", "d"], &[("a", "b", 1), ("a", "c", 1), ("a", "d", 1)]);
        assert_eq!(brute_wbo_exists(&tree, &l).unwrap().forward_counts(), &[0, 0, 0]);
        let tri = g(&["a", "b", "c"], &[("a", "b", 2), ("b", "c", 2), ("a", "c", 2)]);
        let d = brute_wbo_exists(&tri, &l).unwrap();
        assert!(is_well_balanced(&tri, &d).unwrap().is_balanced());
    }

    #[test]
    fn cut_admissible_pairings() {
        let l = Limits::default();
        let sq = g(&["a", "b", "c", "d"], &[("a", "b", 1), ("b", "c", 1), ("c", "d", 1), ("a", "d", 1)]);
        assert_eq!(brute_cut_admissible_pairing(&sq, &l).unwrap().graph().edge_count(), 0);
        let path = g(&["a", "b", "c"], &[("a", "b", 1), ("b", "c", 1)]);
        let f = brute_cut_admissible_pairing(&path, &l).unwrap();
        assert_eq!(f.partner(VertexId(0)), Some(VertexId(2)));
        let k4 = g(
            &["a", "b", "c", "d"],
            &[("a", "b", 1), ("a", "c", 1), ("a", "d", 1), ("b", "c", 1), ("b", "d", 1), ("c", "d", 1)],
        );
        let f = brute_cut_admissible_pairing(&k4, &l).unwrap();
        assert!(decide_ca(&k4, &f, &l).unwrap().is_admissible());
    }

    #[test]
    fn eulerian_extension_search() {
        let l = Limits::default();
        let e = g(&["u", "v"], &[("u", "v", 1)]);
        let f = Orientation::from_arcs(&["u".into(), "v".into()], [(VertexId(0), VertexId(1), 1)]).unwrap();
        let d = brute_eulerian_extension(&e, &f, &l).unwrap().unwrap();
        assert_eq!(d.arc_count(VertexId(1), VertexId(0)), 1);
        let two = g(&["a", "b", "c", "d"], &[("a", "b", 1), ("c", "d", 1)]);
        let labels: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        let f = Orientation::from_arcs(&labels, [(VertexId(0), VertexId(2), 1), (VertexId(1), VertexId(3), 1)]).unwrap();
        assert!(brute_eulerian_extension(&two, &f, &l).unwrap().is_none());
    }

    #[test]
    fn finds_tree_example() {
        let tree = g(
            &["b", "c", "l1", "l2", "l3", "l4"],
            &[("b", "c", 1), ("b", "l1", 1), ("b", "l2", 1), ("c", "l3", 1), ("c", "l4", 1)],
        );
        let hit = find_oa_not_ca([tree], &Limits::default()).unwrap().expect("tree pairing");
        assert!(hit.violation.slack() < 0);
    }
}
