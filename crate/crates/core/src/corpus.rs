//! Small-graph corpus: every multigraph up to a vertex and edge-instance
//! bound, one representative per isomorphism class.
//!
//! A graph is keyed by its pair-multiplicity vector (pairs in lexicographic
//! order). The canonical form is the smallest such vector over all vertex
//! permutations, and the corpus stores that representative with labels
//! `v0, v1, ...`.

use std::collections::HashSet;
use std::fmt::Write as _;

use itertools::Itertools;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, MultiGraph, VertexId};

fn pair_list(n: usize) -> Vec<(usize, usize)> {
    (0..n).tuple_combinations().collect()
}

fn pair_slot(n: usize, a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    a * (2 * n - a - 1) / 2 + (b - a - 1)
}

/// Smallest pair-multiplicity vector over all relabellings.
pub fn canonical_form(g: &MultiGraph) -> Vec<u64> {
    let n = g.vertex_count();
    let mut vec = vec![0; n * n.saturating_sub(1) / 2];
    for p in g.pairs() {
        vec[pair_slot(n, p.u.0, p.v.0)] = p.mult;
    }
    canonical_vector(n, &vec)
}

fn canonical_vector(n: usize, vec: &[u64]) -> Vec<u64> {
    let pairs = pair_list(n);
    let mut best = vec.to_vec();
    let mut cand = vec![0; vec.len()];
    for perm in (0..n).permutations(n) {
        for (slot, &(a, b)) in pairs.iter().enumerate() {
            cand[pair_slot(n, perm[a], perm[b])] = vec[slot];
        }
        if cand < best {
            best.copy_from_slice(&cand);
        }
    }
    best
}

fn from_vector(n: usize, vec: &[u64]) -> MultiGraph {
    let mut b = GraphBuilder::new();
    for i in 0..n {
        b.add_vertex(format!("v{i}")).expect("fresh labels");
    }
    for (slot, (a, c)) in pair_list(n).into_iter().enumerate() {
        if vec[slot] > 0 {
            b.add_edge(VertexId(a), VertexId(c), vec[slot]).expect("valid pair");
        }
    }
    b.build()
}

fn connected(n: usize, vec: &[u64]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut parts = n;
    for (slot, (a, b)) in pair_list(n).into_iter().enumerate() {
        if vec[slot] > 0 {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
                parts -= 1;
            }
        }
    }
    parts <= 1
}

/// Every multiplicity vector over `slots` pairs with total at most `budget`.
fn vectors(slots: usize, budget: u64, f: &mut impl FnMut(&[u64])) {
    fn rec(i: usize, left: u64, cur: &mut Vec<u64>, f: &mut impl FnMut(&[u64])) {
        if i == cur.len() {
            f(cur);
            return;
        }
        for m in 0..=left {
            cur[i] = m;
            rec(i + 1, left - m, cur, f);
        }
        cur[i] = 0;
    }
    rec(0, budget, &mut vec![0; slots], f);
}

/// Isomorphism classes of multigraphs on exactly `n` vertices with at most
/// `max_edges` edge instances, sorted by edge count then canonical vector.
pub fn graphs_on(n: usize, max_edges: u64, connected_only: bool) -> Vec<MultiGraph> {
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    vectors(n * n.saturating_sub(1) / 2, max_edges, &mut |v| {
        if connected_only && !connected(n, v) {
            return;
        }
        seen.insert(canonical_vector(n, v));
    });
    let mut forms: Vec<Vec<u64>> = seen.into_iter().collect();
    forms.sort_by(|a, b| (a.iter().sum::<u64>(), a).cmp(&(b.iter().sum::<u64>(), b)));
    forms.iter().map(|v| from_vector(n, v)).collect()
}

/// Connected multigraphs with `1..=max_vertices` vertices and at most
/// `max_edges` edge instances.
pub fn generate(max_vertices: usize, max_edges: u64) -> Vec<MultiGraph> {
    (1..=max_vertices)
        .flat_map(|n| graphs_on(n, max_edges, true))
        .collect()
}

fn body(graphs: &[MultiGraph]) -> String {
    let mut out = String::new();
    for g in graphs {
        let n = g.vertex_count();
        let mut vec = vec![0; n * n.saturating_sub(1) / 2];
        for p in g.pairs() {
            vec[pair_slot(n, p.u.0, p.v.0)] = p.mult;
        }
        write!(out, "{n}").unwrap();
        for m in vec {
            write!(out, " {m}").unwrap();
        }
        out.push('\n');
    }
    out
}

fn digest(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Corpus file: a `# sha256 <hex>` header over the body, then one line per
/// graph holding the vertex count and the pair-multiplicity vector.
pub fn write_corpus(graphs: &[MultiGraph]) -> String {
    let body = body(graphs);
    format!("# sha256 {}\n{body}", digest(&body))
}

/// Parses a corpus file and verifies its checksum.
pub fn parse_corpus(text: &str) -> Result<Vec<MultiGraph>> {
    let (header, body) = text
        .split_once('\n')
        .ok_or_else(|| Error::Format("corpus file is empty".into()))?;
    let expected = header
        .strip_prefix("# sha256 ")
        .ok_or_else(|| Error::Format("corpus header must be `# sha256 <hex>`".into()))?;
    let actual = digest(body);
    if expected.trim() != actual {
        return Err(Error::Format(format!("corpus checksum mismatch: header {expected}, body {actual}")));
    }
    body.lines()
        .enumerate()
        .map(|(i, line)| {
            let nums = line
                .split_whitespace()
                .map(|t| t.parse::<u64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse {
                    line: i + 2,
                    column: 1,
                    message: e.to_string(),
                })?;
            let n = *nums.first().ok_or_else(|| Error::Parse {
                line: i + 2,
                column: 1,
                message: "empty line".into(),
            })? as usize;
            if nums.len() != 1 + n * n.saturating_sub(1) / 2 {
                return Err(Error::Parse {
                    line: i + 2,
                    column: 1,
                    message: format!("expected {} multiplicities", n * n.saturating_sub(1) / 2),
                });
            }
            Ok(from_vector(n, &nums[1..]))
        })
        .collect()
}
