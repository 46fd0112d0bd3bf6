//! Odd-vertex pairings: validation, enumeration, certificate checks, the
//! exhaustive cut-/orientation-admissibility deciders and the attack that
//! turns a violating cut into a bad eulerian orientation.

use std::sync::Arc;

use crate::connectivity::{
    even_floor, lambda_directed, r_value, r_value_witness, well_balance_scan, ConnectivityNetwork,
    LambdaTable, WellBalance,
};
use crate::error::{Error, Result};
use crate::eulerian::{extend_to_eulerian, ExtensionOutcome};
use crate::graph::{GraphBuilder, MultiGraph, Orientation, VertexId, VertexSet};
use crate::limits::Limits;

pub fn odd_vertices(g: &MultiGraph) -> VertexSet {
    let mut s = VertexSet::empty(g.vertex_count());
    for v in g.vertices().filter(|&v| g.deg(v) % 2 == 1) {
        s.insert(v);
    }
    s
}

/// A perfect matching on the odd-degree vertices of some graph `G`,
/// stored as a graph on `V(G)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing {
    graph: MultiGraph,
}

impl Pairing {
    pub fn new(g: &MultiGraph, f: MultiGraph) -> Result<Self> {
        let p = Pairing { graph: f };
        p.validate_for(g)?;
        Ok(p)
    }

    pub fn from_pairs(g: &MultiGraph, pairs: &[(VertexId, VertexId)]) -> Result<Self> {
        let mut b = GraphBuilder::with_vertices_of(g);
        for &(u, v) in pairs {
            b.add_edge(u, v, 1)?;
        }
        Pairing::new(g, b.build())
    }

    pub fn from_labels(g: &MultiGraph, pairs: &[(&str, &str)]) -> Result<Self> {
        let ids = pairs
            .iter()
            .map(|&(a, b)| Ok((g.vertex(a)?, g.vertex(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Pairing::from_pairs(g, &ids)
    }

    /// Checks the pairing invariants against `g`.
    pub fn validate_for(&self, g: &MultiGraph) -> Result<()> {
        if !g.same_vertices(&self.graph) {
            return Err(Error::VertexSetMismatch);
        }
        if let Some(p) = self.graph.pairs().iter().find(|p| p.mult != 1) {
            return Err(Error::InvalidPairing(format!(
                "{}-{} has multiplicity {}",
                g.label(p.u),
                g.label(p.v),
                p.mult
            )));
        }
        for v in g.vertices() {
            let want = g.deg(v) % 2;
            if self.graph.deg(v) != want {
                return Err(Error::InvalidPairing(format!(
                    "{} has degree {} in G and {} in F",
                    g.label(v),
                    g.deg(v),
                    self.graph.deg(v)
                )));
            }
        }
        Ok(())
    }

    pub fn graph(&self) -> &MultiGraph {
        &self.graph
    }

    pub fn into_graph(self) -> MultiGraph {
        self.graph
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.graph.pairs().iter().map(|p| (p.u, p.v))
    }

    pub fn partner(&self, v: VertexId) -> Option<VertexId> {
        self.graph.neighbors(v).first().map(|&(w, _)| w)
    }
}

/// All pairings of `G` in a fixed order: the lowest unmatched odd vertex is
/// matched to each remaining one in turn, the first choice varying slowest.
pub fn enumerate_pairings(g: &MultiGraph) -> Pairings<'_> {
    let odd: Vec<VertexId> = odd_vertices(g).iter().collect();
    let k = odd.len() / 2;
    Pairings {
        g,
        odd,
        choice: vec![0; k],
        done: false,
    }
}

pub struct Pairings<'g> {
    g: &'g MultiGraph,
    odd: Vec<VertexId>,
    choice: Vec<usize>,
    done: bool,
}

impl Iterator for Pairings<'_> {
    type Item = Pairing;

    fn next(&mut self) -> Option<Pairing> {
        if self.done {
            return None;
        }
        let mut rest = self.odd.clone();
        let mut pairs = Vec::with_capacity(self.choice.len());
        for &c in &self.choice {
            let a = rest.remove(0);
            let b = rest.remove(c);
            pairs.push((a, b));
        }
        let k = self.choice.len();
        self.done = true;
        for i in (0..k).rev() {
            self.choice[i] += 1;
            if self.choice[i] < 2 * (k - i) - 1 {
                self.done = false;
                break;
            }
            self.choice[i] = 0;
        }
        Some(Pairing::from_pairs(self.g, &pairs).expect("matching on odd vertices is a pairing"))
    }
}

/// A set `X` with `d_G(X) − d_F(X) < R_G(X)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutViolation {
    pub set: VertexSet,
    pub cut_g: u64,
    pub cut_f: u64,
    pub r: u64,
}

impl CutViolation {
    /// `d_G(X) − d_F(X)`, which may be negative.
    pub fn slack(&self) -> i64 {
        self.cut_g as i64 - self.cut_f as i64
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateCheck {
    Satisfied { cut_g: u64, cut_f: u64, r: u64 },
    Violation(CutViolation),
}

/// Checks the cut condition for one set.
pub fn check_cut_certificate(g: &MultiGraph, f: &Pairing, x: &VertexSet) -> Result<CertificateCheck> {
    f.validate_for(g)?;
    let cut_g = g.cut_size(x)?;
    let cut_f = f.graph().cut_size(x)?;
    let r = r_value(g, x)?;
    Ok(if (cut_g as i64 - cut_f as i64) < r as i64 {
        CertificateCheck::Violation(CutViolation {
            set: x.clone(),
            cut_g,
            cut_f,
            r,
        })
    } else {
        CertificateCheck::Satisfied { cut_g, cut_f, r }
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CaDecision {
    CutAdmissible,
    Violated(CutViolation),
}

impl CaDecision {
    pub fn is_admissible(&self) -> bool {
        matches!(self, CaDecision::CutAdmissible)
    }
}

/// `true` when the sorted member list of `a` precedes that of `b`.
fn set_order_less(a: u64, b: u64) -> bool {
    let diff = a ^ b;
    if diff == 0 {
        return false;
    }
    let i = diff.trailing_zeros();
    let above = |m: u64| i < 63 && m >> (i + 1) != 0;
    if a >> i & 1 == 1 {
        above(b)
    } else {
        !above(a)
    }
}

/// Exhaustive cut-admissibility decider.
///
/// Scans the `2^{|V|-1}` sets containing the first vertex in Gray-code order
/// with incremental cut updates, and reports the violation whose sorted
/// member list is lexicographically first.
pub fn decide_ca(g: &MultiGraph, f: &Pairing, limits: &Limits) -> Result<CaDecision> {
    f.validate_for(g)?;
    let n = g.vertex_count();
    let limit = limits.ca_max_vertices.min(63);
    if n > limit {
        return Err(Error::TooLarge {
            what: "vertex count",
            size: n,
            limit,
            hint: "check individual sets with check_cut_certificate instead",
        });
    }
    if n < 2 {
        return Ok(CaDecision::CutAdmissible);
    }
    let table = LambdaTable::compute(g);
    let mut demands: Vec<(u64, usize, usize)> = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let r = even_floor(table.get(VertexId(u), VertexId(v)));
            if r > 0 {
                demands.push((r, u, v));
            }
        }
    }
    demands.sort_by(|a, b| b.cmp(a));

    let fg = f.graph();
    let mut mask: u64 = 1;
    let mut cut_g = g.degrees()[0] as i64;
    let mut cut_f = fg.degrees()[0] as i64;
    let mut best: Option<u64> = None;
    let steps: u64 = 1 << (n - 1);
    for step in 0..steps {
        if step > 0 {
            // Gray code: flip the vertex for the lowest set bit of `step`.
            let w = step.trailing_zeros() as usize + 1;
            let inside = mask >> w & 1 == 1;
            for &(z, pair) in g.neighbors(VertexId(w)) {
                let c = g.pairs()[pair].mult as i64;
                let crossing = (mask >> z.0 & 1 == 1) != inside;
                cut_g += if crossing { -c } else { c };
            }
            for &(z, _) in fg.neighbors(VertexId(w)) {
                let crossing = (mask >> z.0 & 1 == 1) != inside;
                cut_f += if crossing { -1 } else { 1 };
            }
            mask ^= 1 << w;
        }
        debug_assert_eq!(cut_g as u64, g.cut_size_mask(mask));
        let slack = cut_g - cut_f;
        let violated = slack < 0
            || demands
                .iter()
                .take_while(|d| d.0 as i64 > slack)
                .any(|&(_, u, v)| (mask >> u & 1) != (mask >> v & 1));
        if violated && best.map_or(true, |b| set_order_less(mask, b)) {
            best = Some(mask);
        }
    }
    Ok(match best {
        None => CaDecision::CutAdmissible,
        Some(mask) => CaDecision::Violated(CutViolation {
            set: VertexSet::from_mask(n, mask),
            cut_g: g.cut_size_mask(mask),
            cut_f: fg.cut_size_mask(mask),
            r: table.r_value_mask(mask),
        }),
    })
}

/// An eulerian orientation of `G + F` whose restriction to `G` is not
/// well-balanced at `(source, sink)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientationCounterexample {
    pub g_orientation: Orientation,
    pub f_orientation: Orientation,
    pub source: VertexId,
    pub sink: VertexId,
    /// `λ` of the restriction to `G` from source to sink.
    pub directed: u64,
    /// `⌊λ_G(source, sink)/2⌋`.
    pub required: u64,
}

impl OrientationCounterexample {
    pub fn combined(&self) -> Orientation {
        self.g_orientation
            .sum(&self.f_orientation)
            .expect("orientations share a vertex set")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OaDecision {
    OrientationAdmissible,
    Counterexample(Box<OrientationCounterexample>),
}

impl OaDecision {
    pub fn is_admissible(&self) -> bool {
        matches!(self, OaDecision::OrientationAdmissible)
    }
}

struct EulerianSearch<'a> {
    /// (u, v, multiplicity) for the pairs of G followed by those of F.
    items: Vec<(usize, usize, u64)>,
    g_items: usize,
    choice: Vec<u64>,
    balance: Vec<i64>,
    remaining: Vec<i64>,
    g: &'a MultiGraph,
    table: LambdaTable,
    net: ConnectivityNetwork,
    found: Option<WellBalance>,
}

impl EulerianSearch<'_> {
    fn run(&mut self, i: usize) -> bool {
        if i == self.items.len() {
            let forward = &self.choice[..self.g_items];
            self.net.set_forward(self.g, forward);
            let wb = well_balance_scan(&self.table, &mut self.net);
            if !wb.is_balanced() {
                self.found = Some(wb);
                return true;
            }
            return false;
        }
        let (u, v, c) = self.items[i];
        self.remaining[u] -= c as i64;
        self.remaining[v] -= c as i64;
        for fwd in 0..=c {
            let delta = 2 * fwd as i64 - c as i64;
            self.balance[u] += delta;
            self.balance[v] -= delta;
            let feasible = self.balance[u].abs() <= self.remaining[u]
                && self.balance[v].abs() <= self.remaining[v];
            self.choice[i] = fwd;
            let stop = feasible && self.run(i + 1);
            self.balance[u] -= delta;
            self.balance[v] += delta;
            if stop {
                self.remaining[u] += c as i64;
                self.remaining[v] += c as i64;
                return true;
            }
        }
        self.remaining[u] += c as i64;
        self.remaining[v] += c as i64;
        false
    }
}

/// Exhaustive orientation-admissibility decider: enumerates the eulerian
/// orientations of `G + F` by backtracking over per-pair forward counts with
/// degree-balance pruning, and checks each restriction to `G`.
pub fn decide_oa(g: &MultiGraph, f: &Pairing, limits: &Limits) -> Result<OaDecision> {
    f.validate_for(g)?;
    let size = (g.edge_count() + f.graph().edge_count()) as usize;
    if size > limits.oa_max_edges {
        return Err(Error::TooLarge {
            what: "edge count of G+F",
            size,
            limit: limits.oa_max_edges,
            hint: "use attack_orientation with a known violating set instead",
        });
    }
    let n = g.vertex_count();
    let mut items: Vec<(usize, usize, u64)> = g.pairs().iter().map(|p| (p.u.0, p.v.0, p.mult)).collect();
    let g_items = items.len();
    items.extend(f.graph().pairs().iter().map(|p| (p.u.0, p.v.0, p.mult)));
    let mut remaining = vec![0i64; n];
    for &(u, v, c) in &items {
        remaining[u] += c as i64;
        remaining[v] += c as i64;
    }
    let mut search = EulerianSearch {
        choice: vec![0; items.len()],
        items,
        g_items,
        balance: vec![0; n],
        remaining,
        g,
        table: LambdaTable::compute(g),
        net: ConnectivityNetwork::from_forward(g, &vec![0; g_items]),
        found: None,
    };
    if !search.run(0) {
        return Ok(OaDecision::OrientationAdmissible);
    }
    let Some(WellBalance::Violated {
        source,
        sink,
        directed,
        required,
        ..
    }) = search.found
    else {
        unreachable!("search stops only on a violation")
    };
    let g_orientation = Orientation::new(Arc::new(g.clone()), search.choice[..g_items].to_vec())?;
    let f_orientation = Orientation::new(Arc::new(f.graph().clone()), search.choice[g_items..].to_vec())?;
    Ok(OaDecision::Counterexample(Box::new(OrientationCounterexample {
        g_orientation,
        f_orientation,
        source,
        sink,
        directed,
        required,
    })))
}

/// Output of [`attack_orientation`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attack {
    pub counterexample: OrientationCounterexample,
    pub violation: CutViolation,
    /// `d⁺(X)` in the restriction to `G`; equals `(d_G(X) − d_F(X)) / 2`.
    pub out_cut: u64,
}

/// Builds a bad eulerian orientation from a violating set `X`: `F`-edges
/// crossing `X` point out of `X`, the others point from lower to higher
/// vertex, and `G` is completed to an eulerian orientation of `G + F`.
/// The pair reported is the first one in vertex order attaining `R_G(X)`.
pub fn attack_orientation(g: &MultiGraph, f: &Pairing, x: &VertexSet) -> Result<Attack> {
    let violation = match check_cut_certificate(g, f, x)? {
        CertificateCheck::Violation(v) => v,
        CertificateCheck::Satisfied { .. } => return Err(Error::NotAViolation),
    };
    let f_graph = Arc::new(f.graph().clone());
    let forward = f_graph
        .pairs()
        .iter()
        .map(|p| u64::from(!(x.contains(p.v) && !x.contains(p.u))))
        .collect();
    let f_orientation = Orientation::new(Arc::clone(&f_graph), forward)?;
    let g_arc = Arc::new(g.clone());
    let g_orientation = match extend_to_eulerian(&g_arc, &f_orientation)? {
        ExtensionOutcome::Extended(d) => d,
        ExtensionOutcome::Infeasible(cert) => {
            return Err(Error::ExtensionInfeasible {
                certificate: cert.labels(g).into_iter().map(str::to_owned).collect(),
            })
        }
    };
    let (source, sink, lambda_g) = r_value_witness(g, x)?.ok_or(Error::NotAViolation)?;
    let directed = lambda_directed(&g_orientation, source, sink)?.value;
    let out_cut = g_orientation.out_cut(x)?;
    debug_assert_eq!(2 * out_cut as i64, violation.slack());
    debug_assert!(directed <= out_cut && out_cut < lambda_g / 2);
    Ok(Attack {
        counterexample: OrientationCounterexample {
            g_orientation,
            f_orientation,
            source,
            sink,
            directed,
            required: lambda_g / 2,
        },
        violation,
        out_cut,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connectivity::is_well_balanced;

    /// Doubled 4-cycle a,b,c,d with pendants p–a and q–c.
    fn pendant_square() -> MultiGraph {
        MultiGraph::from_edges(
            ["a", "b", "c", "d", "p", "q"],
            [
                ("a", "b", 2),
                ("b", "c", 2),
                ("c", "d", 2),
                ("a", "d", 2),
                ("p", "a", 1),
                ("q", "c", 1),
            ],
        )
        .unwrap()
    }

    #[test]
    fn odd_vertex_examples() {
        let tri = MultiGraph::from_edges(["a", "b", "c"], [("a", "b", 1), ("b", "c", 1), ("a", "c", 1)]).unwrap();
        assert!(odd_vertices(&tri).is_empty());
        let e = MultiGraph::from_edges(["a", "b"], [("a", "b", 1)]).unwrap();
        assert_eq!(odd_vertices(&e).len(), 2);
        let path = MultiGraph::from_edges(["a", "b", "c"], [("a", "b", 1), ("b", "c", 1)]).unwrap();
        assert_eq!(odd_vertices(&path).labels(&path), vec!["a", "c"]);
    }

    #[test]
    fn pairing_counts() {
        let tri = MultiGraph::from_edges(["a", "b", "c"], [("a", "b", 1), ("b", "c", 1), ("a", "c", 1)]).unwrap();
        let all: Vec<_> = enumerate_pairings(&tri).collect();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].graph().edge_count(), 0);
        let path = MultiGraph::from_edges(["a", "b", "c"], [("a", "b", 1), ("b", "c", 1)]).unwrap();
        assert_eq!(enumerate_pairings(&path).count(), 1);
        assert_eq!(enumerate_pairings(&pendant_square()).count(), 3);
        let star = MultiGraph::from_edges(
            ["c", "1", "2", "3", "4", "5"],
            [("c", "1", 1), ("c", "2", 1), ("c", "3", 1), ("c", "4", 1), ("c", "5", 1), ("1", "2", 1)],
        )
        .unwrap();
        // odd: c (5), 3, 4, 5 -> 3 pairings; 6 odd vertices would give 15
        assert_eq!(enumerate_pairings(&star).count(), 3);
        let six = MultiGraph::from_edges(
            ["a", "b", "c", "d", "e", "f"],
            [("a", "b", 1), ("c", "d", 1), ("e", "f", 1)],
        )
        .unwrap();
        let ps: Vec<_> = enumerate_pairings(&six).collect();
        assert_eq!(ps.len(), 15);
        for (i, p) in ps.iter().enumerate() {
            assert!(ps[i + 1..].iter().all(|q| q != p));
        }
    }

    #[test]
    fn pairing_validation() {
        let g = pendant_square();
        assert!(matches!(
            Pairing::from_labels(&g, &[("a", "c")]),
            Err(Error::InvalidPairing(_))
        ));
        assert!(matches!(
            Pairing::from_labels(&g, &[("a", "c"), ("p", "b")]),
            Err(Error::InvalidPairing(_))
        ));
        assert!(Pairing::from_labels(&g, &[("a", "c"), ("p", "q")]).is_ok());
    }

    #[test]
    fn certificate_examples() {
        let g = pendant_square();
        let crossing = Pairing::from_labels(&g, &[("a", "c"), ("p", "q")]).unwrap();
        let x = VertexSet::from_labels(&g, &["a", "b", "p"]).unwrap();
        match check_cut_certificate(&g, &crossing, &x).unwrap() {
            CertificateCheck::Violation(v) => assert_eq!((v.cut_g, v.cut_f, v.r), (4, 2, 4)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            check_cut_certificate(&g, &crossing, &VertexSet::empty(6)).unwrap(),
            CertificateCheck::Satisfied { .. }
        ));
        let local = Pairing::from_labels(&g, &[("a", "p"), ("c", "q")]).unwrap();
        for mask in 0u64..64 {
            let x = VertexSet::from_mask(6, mask);
            assert!(matches!(
                check_cut_certificate(&g, &local, &x).unwrap(),
                CertificateCheck::Satisfied { .. }
            ));
        }
    }

    #[test]
    fn set_order_is_lexicographic_on_member_lists() {
        // {0,1,3,4} < {0,1,4} < {0,3,4} < {0,4}
        let a = 0b11011;
        let b = 0b10011;
        let c = 0b11001;
        let d = 0b10001;
        let order = [a, b, c, d];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(set_order_less(order[i], order[j]), i < j, "{i} {j}");
            }
        }
        // prefix first
        assert!(set_order_less(0b01, 0b11));
        assert!(!set_order_less(0b11, 0b01));
    }

    #[test]
    fn decide_ca_examples() {
        let limits = Limits::default();
        let tri = MultiGraph::from_edges(["a", "b", "c"], [("a", "b", 1), ("b", "c", 1), ("a", "c", 1)]).unwrap();
        let empty = Pairing::new(&tri, tri.edgeless_like()).unwrap();
        assert!(decide_ca(&tri, &empty, &limits).unwrap().is_admissible());

        let g = pendant_square();
        let local = Pairing::from_labels(&g, &[("a", "p"), ("c", "q")]).unwrap();
        assert!(decide_ca(&g, &local, &limits).unwrap().is_admissible());
        let crossing = Pairing::from_labels(&g, &[("a", "c"), ("p", "q")]).unwrap();
        match decide_ca(&g, &crossing, &limits).unwrap() {
            CaDecision::Violated(v) => {
                assert_eq!(v.set.labels(&g), vec!["a", "b", "d", "p"]);
                assert_eq!((v.cut_g, v.cut_f, v.r), (4, 2, 4));
            }
            other => panic!("{other:?}"),
        }
        let mut b = GraphBuilder::new();
        for i in 0..23 {
            b.add_vertex(format!("v{i}")).unwrap();
        }
        let too_big = b.build();
        let none = Pairing::new(&too_big, too_big.edgeless_like()).unwrap();
        assert!(matches!(decide_ca(&too_big, &none, &limits), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn decide_oa_examples() {
        let limits = Limits::default();
        let dbl = MultiGraph::from_edges(["u", "v"], [("u", "v", 2)]).unwrap();
        let none = Pairing::new(&dbl, dbl.edgeless_like()).unwrap();
        assert!(decide_oa(&dbl, &none, &limits).unwrap().is_admissible());

        let g = pendant_square();
        let crossing = Pairing::from_labels(&g, &[("a", "c"), ("p", "q")]).unwrap();
        match decide_oa(&g, &crossing, &limits).unwrap() {
            OaDecision::Counterexample(c) => {
                assert!(c.combined().is_eulerian());
                assert!(c.directed < c.required);
                assert!(!is_well_balanced(&g, &c.g_orientation).unwrap().is_balanced());
            }
            other => panic!("{other:?}"),
        }
        let local = Pairing::from_labels(&g, &[("a", "p"), ("c", "q")]).unwrap();
        assert!(decide_oa(&g, &local, &limits).unwrap().is_admissible());
    }

    #[test]
    fn attack_examples() {
        let g = pendant_square();
        let crossing = Pairing::from_labels(&g, &[("a", "c"), ("p", "q")]).unwrap();
        let x = VertexSet::from_labels(&g, &["a", "b", "p"]).unwrap();
        let attack = attack_orientation(&g, &crossing, &x).unwrap();
        let c = &attack.counterexample;
        assert_eq!((g.label(c.source), g.label(c.sink)), ("a", "c"));
        assert_eq!(c.required, 2);
        assert!(c.directed <= 1);
        assert_eq!(attack.out_cut, 1);
        assert!(c.combined().is_eulerian());
        assert!(!is_well_balanced(&g, &c.g_orientation).unwrap().is_balanced());

        let local = Pairing::from_labels(&g, &[("a", "p"), ("c", "q")]).unwrap();
        assert!(matches!(attack_orientation(&g, &local, &x), Err(Error::NotAViolation)));

        let two = MultiGraph::from_edges(["a", "b", "c", "d"], [("a", "b", 1), ("c", "d", 1)]).unwrap();
        let f = Pairing::from_labels(&two, &[("a", "c"), ("b", "d")]).unwrap();
        let x = VertexSet::from_labels(&two, &["a", "b"]).unwrap();
        match attack_orientation(&two, &f, &x) {
            Err(Error::ExtensionInfeasible { certificate }) => assert_eq!(certificate, vec!["a", "b"]),
            other => panic!("{other:?}"),
        }
    }
}
