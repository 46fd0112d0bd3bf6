//! Integral max-flow (Dinic) over networks whose arcs come in residual pairs.

use std::collections::VecDeque;

/// Arc `2i` and arc `2i + 1` are each other's residual partner.
#[derive(Clone, Debug)]
pub struct FlowNetwork {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u64>,
    initial: Vec<u64>,
    level: Vec<u32>,
    cursor: Vec<usize>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork {
            adj: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
            initial: Vec::new(),
            level: vec![0; nodes],
            cursor: vec![0; nodes],
        }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    /// Adds `u -> v` with capacity `forward` and `v -> u` with capacity
    /// `backward`, sharing residual bookkeeping. Returns the forward arc id.
    pub fn add_pair(&mut self, u: usize, v: usize, forward: u64, backward: u64) -> usize {
        let id = self.to.len();
        self.to.push(v);
        self.cap.push(forward);
        self.initial.push(forward);
        self.adj[u].push(id);
        self.to.push(u);
        self.cap.push(backward);
        self.initial.push(backward);
        self.adj[v].push(id + 1);
        id
    }

    /// Overwrites the capacities of a pair created by [`add_pair`](Self::add_pair).
    pub fn set_pair(&mut self, arc: usize, forward: u64, backward: u64) {
        self.initial[arc] = forward;
        self.initial[arc + 1] = backward;
        self.cap[arc] = forward;
        self.cap[arc + 1] = backward;
    }

    /// Flow currently routed along `arc` in its own direction (may be negative
    /// when the partner carries more).
    pub fn net_flow(&self, arc: usize) -> i64 {
        self.initial[arc] as i64 - self.cap[arc] as i64
    }

    pub fn reset(&mut self) {
        self.cap.copy_from_slice(&self.initial);
    }

    /// Maximum `s`-`t` flow, stopping once `limit` units are routed.
    /// Capacities are reset first.
    pub fn max_flow(&mut self, s: usize, t: usize, limit: u64) -> u64 {
        self.reset();
        let mut total = 0u64;
        while total < limit && self.bfs(s, t) {
            self.cursor.iter_mut().for_each(|c| *c = 0);
            loop {
                let pushed = self.dfs(s, t, limit - total);
                if pushed == 0 {
                    break;
                }
                total += pushed;
                if total >= limit {
                    break;
                }
            }
        }
        total
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = u32::MAX);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.adj[u] {
                let w = self.to[a];
                if self.cap[a] > 0 && self.level[w] == u32::MAX {
                    self.level[w] = self.level[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        self.level[t] != u32::MAX
    }

    fn dfs(&mut self, u: usize, t: usize, want: u64) -> u64 {
        if u == t {
            return want;
        }
        while self.cursor[u] < self.adj[u].len() {
            let a = self.adj[u][self.cursor[u]];
            let w = self.to[a];
            if self.cap[a] > 0 && self.level[w] == self.level[u] + 1 {
                let got = self.dfs(w, t, want.min(self.cap[a]));
                if got > 0 {
                    self.cap[a] -= got;
                    self.cap[a ^ 1] += got;
                    return got;
                }
            }
            self.cursor[u] += 1;
        }
        0
    }

    /// Nodes reachable from `s` in the current residual network.
    pub fn residual_reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &a in &self.adj[u] {
                let w = self.to[a];
                if self.cap[a] > 0 && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }
}
