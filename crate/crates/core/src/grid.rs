//! Augmented `(α,β)`-grids: a cylinder of `αβ` rows and `(α+1)/2` columns
//! with wrap edges between the first and last row, padded with parallel
//! column edges so that every vertex outside the port families `L ∪ P` has
//! degree 4.

use rayon::prelude::*;
use serde::Serialize;

use crate::connectivity::ConnectivityNetwork;
use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, MultiGraph, VertexId, VertexSet};

/// Coordinates and port families of one augmented grid inside some graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridSpec {
    pub alpha: u64,
    pub beta: u64,
    /// Label prefix, e.g. `"Wa:"`; empty for a standalone grid.
    pub prefix: String,
    /// Index of the vertex `(1,1)`; the grid occupies a contiguous block.
    pub offset: usize,
}

impl GridSpec {
    pub fn rows(&self) -> u64 {
        self.alpha * self.beta
    }

    pub fn columns(&self) -> u64 {
        (self.alpha + 1) / 2
    }

    pub fn vertex_count(&self) -> usize {
        (self.rows() * self.columns()) as usize
    }

    /// Vertex at 1-based coordinates `(row, column)`.
    pub fn at(&self, row: u64, column: u64) -> VertexId {
        debug_assert!((1..=self.rows()).contains(&row) && (1..=self.columns()).contains(&column));
        VertexId(self.offset + ((row - 1) * self.columns() + (column - 1)) as usize)
    }

    pub fn coordinates(&self, v: VertexId) -> Option<(u64, u64)> {
        let rel = v.0.checked_sub(self.offset)?;
        if rel >= self.vertex_count() {
            return None;
        }
        let c = self.columns() as usize;
        Some(((rel / c) as u64 + 1, (rel % c) as u64 + 1))
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn label(&self, row: u64, column: u64) -> String {
        format!("{}r{}c{}", self.prefix, row, column)
    }

    /// `l_i = (iα, 1)`, 1-based.
    pub fn l(&self, i: u64) -> VertexId {
        self.at(i * self.alpha, 1)
    }

    /// `p_i = (iα, (α+1)/2)`, 1-based.
    pub fn p(&self, i: u64) -> VertexId {
        self.at(i * self.alpha, self.columns())
    }

    /// `L_γ = {l_1, …, l_γ}`.
    pub fn l_family(&self, gamma: u64) -> Vec<VertexId> {
        (1..=gamma).map(|i| self.l(i)).collect()
    }

    /// `P_γ = {p_1, …, p_γ}`.
    pub fn p_family(&self, gamma: u64) -> Vec<VertexId> {
        (1..=gamma).map(|i| self.p(i)).collect()
    }

    /// `L ∪ P`.
    pub fn ports(&self) -> Vec<VertexId> {
        let mut v = self.l_family(self.beta);
        v.extend(self.p_family(self.beta));
        v
    }

    pub fn is_port(&self, v: VertexId) -> bool {
        match self.coordinates(v) {
            Some((row, col)) => row % self.alpha == 0 && (col == 1 || col == self.columns()),
            None => false,
        }
    }

    pub fn vertex_set(&self, universe: usize) -> VertexSet {
        let mut s = VertexSet::empty(universe);
        for i in 0..self.vertex_count() {
            s.insert(VertexId(self.offset + i));
        }
        s
    }

    /// Rows `first..=last` restricted to columns `1..=columns`.
    pub fn block(&self, universe: usize, first: u64, last: u64, columns: u64) -> VertexSet {
        let mut s = VertexSet::empty(universe);
        for r in first..=last {
            for c in 1..=columns {
                s.insert(self.at(r, c));
            }
        }
        s
    }
}

pub(crate) fn check_grid_parameters(alpha: u64, beta: u64) -> Result<()> {
    if alpha < 3 || alpha % 2 == 0 {
        return Err(Error::InvalidParameter(format!("alpha must be odd and at least 3, got {alpha}")));
    }
    if beta < 2 {
        return Err(Error::InvalidParameter(format!("beta must be at least 2, got {beta}")));
    }
    Ok(())
}

/// Adds an augmented grid to `b`, labelling vertices `<prefix>r<i>c<j>`.
///
/// Padding: in column 1 the non-port rows form runs `kα+1 ..= kα+α−1` of
/// even length; consecutive rows of each run are paired and the column edge
/// between them is doubled. The last column is padded the same way.
pub fn add_augmented_grid(b: &mut GraphBuilder, alpha: u64, beta: u64, prefix: &str) -> Result<GridSpec> {
    check_grid_parameters(alpha, beta)?;
    let spec = GridSpec {
        alpha,
        beta,
        prefix: prefix.to_owned(),
        offset: b.vertex_count(),
    };
    let (rows, cols) = (spec.rows(), spec.columns());
    for r in 1..=rows {
        for c in 1..=cols {
            let id = b.add_vertex(spec.label(r, c))?;
            debug_assert_eq!(id, spec.at(r, c));
        }
    }
    for r in 1..=rows {
        for c in 1..=cols {
            if c < cols {
                b.add_edge(spec.at(r, c), spec.at(r, c + 1), 1)?;
            }
            if r < rows {
                b.add_edge(spec.at(r, c), spec.at(r + 1, c), 1)?;
            }
        }
    }
    for c in 1..=cols {
        b.add_edge(spec.at(1, c), spec.at(rows, c), 1)?;
    }
    for c in [1, cols] {
        for k in 0..beta {
            let mut r = k * alpha + 1;
            while r + 1 < (k + 1) * alpha {
                b.add_edge(spec.at(r, c), spec.at(r + 1, c), 1)?;
                r += 2;
            }
        }
    }
    Ok(spec)
}

/// A standalone augmented `(α,β)`-grid.
pub fn augmented_grid(alpha: u64, beta: u64) -> Result<(MultiGraph, GridSpec)> {
    let mut b = GraphBuilder::new();
    let spec = add_augmented_grid(&mut b, alpha, beta, "")?;
    Ok((b.build(), spec))
}

/// Degree profile check: 3 on `L ∪ P`, 4 elsewhere.
pub fn degree_profile_holds(w: &MultiGraph, spec: &GridSpec) -> bool {
    (0..spec.vertex_count()).all(|i| {
        let v = VertexId(spec.offset + i);
        w.deg(v) == if spec.is_port(v) { 3 } else { 4 }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExhaustiveCutReport {
    pub sets_scanned: u64,
    pub min_cut: u64,
    /// Number of sets `X` (both a set and its complement counted) with `d_W(X) = 3`.
    pub tight_sets: u64,
    /// Every tight set is a port singleton or co-singleton, and all of those are tight.
    pub characterization_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectivityReport {
    pub pairs_checked: u64,
    pub min_lambda: u64,
    pub three_edge_connected: bool,
    pub degree_profile_ok: bool,
    pub exhaustive: Option<ExhaustiveCutReport>,
}

impl ConnectivityReport {
    pub fn passed(&self) -> bool {
        self.three_edge_connected
            && self.degree_profile_ok
            && self.exhaustive.as_ref().map_or(true, |e| e.characterization_holds)
    }
}

/// Checks `λ_W(u,v) ≥ 3` on all pairs by flows and, for grids of at most
/// `exhaustive_max` vertices, that `d_W(X) = 3` forces `X` or its complement
/// to be a port singleton.
pub fn verify_three_edge_connected(w: &MultiGraph, spec: &GridSpec, exhaustive_max: usize) -> ConnectivityReport {
    let n = w.vertex_count();
    let min_lambda = (0..n)
        .into_par_iter()
        .map_init(
            || ConnectivityNetwork::undirected(w),
            |net, u| {
                (u + 1..n)
                    .map(|v| net.max_flow(VertexId(u), VertexId(v), u64::MAX))
                    .min()
                    .unwrap_or(u64::MAX)
            },
        )
        .min()
        .unwrap_or(u64::MAX);
    let exhaustive = (n <= exhaustive_max.min(30)).then(|| exhaustive_cut_scan(w, spec));
    ConnectivityReport {
        pairs_checked: (n * n.saturating_sub(1) / 2) as u64,
        min_lambda,
        three_edge_connected: min_lambda >= 3,
        degree_profile_ok: degree_profile_holds(w, spec),
        exhaustive,
    }
}

fn exhaustive_cut_scan(w: &MultiGraph, spec: &GridSpec) -> ExhaustiveCutReport {
    let n = w.vertex_count();
    let full: u64 = (1 << n) - 1;
    let port_masks: Vec<u64> = spec.ports().iter().map(|v| 1u64 << v.0).collect();
    let mut min_cut = u64::MAX;
    let mut tight = 0;
    let mut ok = true;
    for mask in 1..full {
        let cut = w.cut_size_mask(mask);
        min_cut = min_cut.min(cut);
        if cut == 3 {
            tight += 1;
            let expected = port_masks.iter().any(|&m| mask == m || mask == full ^ m);
            ok &= expected;
        }
    }
    ok &= tight == 2 * port_masks.len() as u64 && min_cut >= 3;
    ExhaustiveCutReport {
        sets_scanned: full - 1,
        min_cut,
        tight_sets: tight,
        characterization_holds: ok,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SeparationCheck {
    /// Some side has no component with two ports; nothing to check.
    Vacuous,
    Holds { cut: u64 },
    Fails { cut: u64 },
}

impl SeparationCheck {
    pub fn is_ok(&self) -> bool {
        !matches!(self, SeparationCheck::Fails { .. })
    }
}

fn has_component_with_two_ports(w: &MultiGraph, spec: &GridSpec, side: &VertexSet) -> bool {
    w.components_within(side)
        .iter()
        .any(|c| c.iter().filter(|&v| spec.is_port(v)).count() >= 2)
}

/// If both `W[X]` and `W[V−X]` have a component holding two ports, checks
/// `d_W(X) > α`.
pub fn verify_separation_bound(w: &MultiGraph, spec: &GridSpec, x: &VertexSet) -> Result<SeparationCheck> {
    let cut = w.cut_size(x)?;
    if !has_component_with_two_ports(w, spec, x) || !has_component_with_two_ports(w, spec, &x.complement()) {
        return Ok(SeparationCheck::Vacuous);
    }
    Ok(if cut > spec.alpha {
        SeparationCheck::Holds { cut }
    } else {
        SeparationCheck::Fails { cut }
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SeparationReport {
    pub sets_checked: u64,
    pub hypothesis_met: u64,
    pub failures: u64,
}

/// Every subset of a small grid.
pub fn separation_exhaustive(w: &MultiGraph, spec: &GridSpec) -> Result<SeparationReport> {
    let n = w.vertex_count();
    if n > 24 {
        return Err(Error::TooLarge {
            what: "grid vertex count",
            size: n,
            limit: 24,
            hint: "use separation_structured",
        });
    }
    let mut rep = SeparationReport::default();
    for mask in 0..(1u64 << n) {
        tally(&mut rep, verify_separation_bound(w, spec, &VertexSet::from_mask(n, mask))?);
    }
    Ok(rep)
}

/// Row intervals (including wrapped ones) intersected with column prefixes.
pub fn separation_structured(w: &MultiGraph, spec: &GridSpec) -> Result<SeparationReport> {
    let n = w.vertex_count();
    let rows = spec.rows();
    let mut rep = SeparationReport::default();
    for first in 1..=rows {
        for len in 1..rows {
            for cols in 1..=spec.columns() {
                let mut x = VertexSet::empty(n);
                for k in 0..len {
                    let r = (first - 1 + k) % rows + 1;
                    for c in 1..=cols {
                        x.insert(spec.at(r, c));
                    }
                }
                tally(&mut rep, verify_separation_bound(w, spec, &x)?);
            }
        }
    }
    for cols in 1..spec.columns() {
        let x = spec.block(n, 1, rows, cols);
        tally(&mut rep, verify_separation_bound(w, spec, &x)?);
    }
    Ok(rep)
}

fn tally(rep: &mut SeparationReport, check: SeparationCheck) {
    rep.sets_checked += 1;
    match check {
        SeparationCheck::Vacuous => {}
        SeparationCheck::Holds { .. } => rep.hypothesis_met += 1,
        SeparationCheck::Fails { .. } => {
            rep.hypothesis_met += 1;
            rep.failures += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_and_degrees() {
        let (w, spec) = augmented_grid(3, 4).unwrap();
        assert_eq!(w.vertex_count(), 24);
        assert_eq!(spec.ports().len(), 8);
        assert_eq!(w.vertices().filter(|&v| w.deg(v) == 4).count(), 16);
        assert_eq!(w.edge_count(), 44);
        let (w, spec) = augmented_grid(3, 2).unwrap();
        assert_eq!((w.vertex_count(), spec.ports().len(), w.edge_count()), (12, 4, 22));
        assert!(matches!(augmented_grid(4, 2), Err(Error::InvalidParameter(_))));
        assert!(matches!(augmented_grid(1, 2), Err(Error::InvalidParameter(_))));
        assert!(matches!(augmented_grid(3, 1), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn port_families() {
        let (w, spec) = augmented_grid(5, 3).unwrap();
        assert_eq!(spec.columns(), 3);
        let l: Vec<_> = spec.l_family(2).iter().map(|&v| w.label(v).to_owned()).collect();
        assert_eq!(l, ["r5c1", "r10c1"]);
        let p: Vec<_> = spec.p_family(3).iter().map(|&v| w.label(v).to_owned()).collect();
        assert_eq!(p, ["r5c3", "r10c3", "r15c3"]);
        assert_eq!(w.vertex_count() as u64, 5 * 3 * 3);
    }

    #[test]
    fn padding_doubles_boundary_column_edges_only() {
        for (a, b) in [(3, 2), (5, 3), (7, 4)] {
            let (w, spec) = augmented_grid(a, b).unwrap();
            for p in w.pairs().iter().filter(|p| p.mult > 1) {
                assert_eq!(p.mult, 2);
                let (r1, c1) = spec.coordinates(p.u).unwrap();
                let (r2, c2) = spec.coordinates(p.v).unwrap();
                assert_eq!(c1, c2);
                assert!(c1 == 1 || c1 == spec.columns());
                assert_eq!(r2, r1 + 1);
                assert!(!spec.is_port(p.u) && !spec.is_port(p.v));
            }
        }
    }

    #[test]
    fn small_grid_separation_example() {
        let (w, spec) = augmented_grid(3, 2).unwrap();
        let x = spec.block(w.vertex_count(), 1, 3, 2);
        assert_eq!(verify_separation_bound(&w, &spec, &x).unwrap(), SeparationCheck::Holds { cut: 4 });
        let lone = VertexSet::from_vertices(&w, [spec.at(1, 1)]).unwrap();
        assert_eq!(verify_separation_bound(&w, &spec, &lone).unwrap(), SeparationCheck::Vacuous);
    }
}
