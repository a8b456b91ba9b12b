//! `(k, l)`-sparsity via the pebble game, with a brute-force oracle.
//!
//! For `0 <= l < 2k` a graph is sparse when every subgraph on at least two
//! vertices has at most `k|V(H)| - l` edges. For `2k <= l < 3k` (for example
//! `(3, 6)`) a single edge already breaks that count, so the count is applied
//! to subgraphs on at least three vertices instead, and only simple graphs
//! are accepted.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A subgraph with more than `k|V(H)| - l` edges. Not necessarily minimal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparsityVerdict {
    pub k: usize,
    pub l: usize,
    pub sparse: bool,
    pub tight: bool,
    pub witness: Option<Witness>,
}

fn check_params(k: usize, l: usize) -> Result<()> {
    if k == 0 || l >= 3 * k {
        return Err(Error::SparsityParams { k, l });
    }
    Ok(())
}

fn upper_range(k: usize, l: usize) -> bool {
    l >= 2 * k
}

/// Smallest subgraph order the count applies to.
fn min_order(k: usize, l: usize) -> u32 {
    if upper_range(k, l) {
        3
    } else {
        2
    }
}

fn is_tight_count(n: usize, m: usize, k: usize, l: usize) -> bool {
    m as i64 == (k * n) as i64 - l as i64
}

struct PebbleGame {
    k: usize,
    pebbles: Vec<usize>,
    /// Out-edges of the orientation; each accepted edge appears once.
    out: Vec<Vec<usize>>,
}

impl PebbleGame {
    fn new(n: usize, k: usize) -> Self {
        Self {
            k,
            pebbles: vec![k; n],
            out: vec![Vec::new(); n],
        }
    }

    /// Move one free pebble to `root` along a directed path avoiding `blocked`.
    /// On failure returns the set of vertices the search reached.
    fn gather(&mut self, root: usize, blocked: usize) -> std::result::Result<(), Vec<bool>> {
        self.gather_avoiding(root, &[blocked])
    }

    fn gather_avoiding(
        &mut self,
        root: usize,
        blocked: &[usize],
    ) -> std::result::Result<(), Vec<bool>> {
        let n = self.pebbles.len();
        let mut seen = vec![false; n];
        let mut parent = vec![usize::MAX; n];
        seen[root] = true;
        for &b in blocked {
            seen[b] = true;
        }
        let mut stack = vec![root];
        while let Some(x) = stack.pop() {
            for &y in &self.out[x] {
                if seen[y] {
                    continue;
                }
                seen[y] = true;
                parent[y] = x;
                if self.pebbles[y] > 0 {
                    self.pebbles[y] -= 1;
                    self.pebbles[root] += 1;
                    let mut cur = y;
                    while cur != root {
                        let p = parent[cur];
                        let pos = self.out[p]
                            .iter()
                            .position(|&t| t == cur)
                            .expect("path edge");
                        self.out[p].swap_remove(pos);
                        self.out[cur].push(p);
                        cur = p;
                    }
                    return Ok(());
                }
                stack.push(y);
            }
        }
        Err(seen)
    }

    /// Collect as many pebbles as possible on the vertex set `targets`.
    /// Returns the pebble count and the final search closure.
    fn gather_on(&mut self, targets: &[usize]) -> (usize, Vec<bool>) {
        let n = self.pebbles.len();
        loop {
            let mut progressed = false;
            let mut closure = vec![false; n];
            for &t in targets {
                closure[t] = true;
            }
            for &t in targets {
                if self.pebbles[t] == self.k {
                    continue;
                }
                let blocked: Vec<usize> = targets.iter().copied().filter(|&x| x != t).collect();
                match self.gather_avoiding(t, &blocked) {
                    Ok(()) => {
                        progressed = true;
                        break;
                    }
                    Err(seen) => {
                        for (c, s) in closure.iter_mut().zip(&seen) {
                            *c |= *s;
                        }
                    }
                }
            }
            if !progressed {
                let total = targets.iter().map(|&t| self.pebbles[t]).sum();
                return (total, closure);
            }
        }
    }

    /// Try to insert `uv`; on rejection return the closed vertex set that forbids it.
    fn insert(&mut self, u: usize, v: usize, l: usize) -> std::result::Result<(), Vec<usize>> {
        while self.pebbles[u] + self.pebbles[v] < l + 1 {
            let fail_u = match self.gather(u, v) {
                Ok(()) => continue,
                Err(seen) => seen,
            };
            match self.gather(v, u) {
                Ok(()) => continue,
                Err(seen_v) => {
                    let reach = fail_u
                        .iter()
                        .zip(&seen_v)
                        .enumerate()
                        .filter(|(_, (a, b))| **a || **b)
                        .map(|(i, _)| i)
                        .collect();
                    return Err(reach);
                }
            }
        }
        if self.pebbles[u] > 0 {
            self.pebbles[u] -= 1;
            self.out[u].push(v);
        } else {
            self.pebbles[v] -= 1;
            self.out[v].push(u);
        }
        debug_assert!(self.pebbles.iter().all(|&p| p <= self.k));
        Ok(())
    }
}

fn violation(
    k: usize,
    l: usize,
    vertices: Vec<usize>,
    edges: Vec<(usize, usize)>,
) -> SparsityVerdict {
    SparsityVerdict {
        k,
        l,
        sparse: false,
        tight: false,
        witness: Some(Witness { vertices, edges }),
    }
}

fn induced(edges: &[(usize, usize)], vertices: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut inside = vec![false; n];
    for &x in vertices {
        inside[x] = true;
    }
    edges
        .iter()
        .copied()
        .filter(|&(a, b)| inside[a] && inside[b])
        .collect()
}

/// Pebble-game test of `(k, l)`-sparsity for `0 <= l < 3k`.
///
/// For `l < 2k` this is the Lee-Streinu game: an edge is accepted when
/// `l + 1` pebbles can be gathered on its endpoints, and multigraph edge
/// lists are allowed. For `2k <= l < 3k` the edges are first oriented by the
/// `(k, 0)` game; the graph is then sparse iff at least `l` pebbles can be
/// gathered on every vertex triple, since the number of pebbles that can be
/// gathered on `T` equals the minimum of `k|V(H)| - |E(H)|` over subgraphs
/// `H` containing `T`.
///
/// Edges are processed in the given order and searches are deterministic,
/// so witnesses are reproducible. Witnesses are not necessarily minimal.
pub fn pebble_game_edges(
    n: usize,
    edges: &[(usize, usize)],
    k: usize,
    l: usize,
) -> Result<SparsityVerdict> {
    check_params(k, l)?;
    let upper = upper_range(k, l);
    if upper {
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in edges {
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge ({u}, {v}) with l >= 2k"
                )));
            }
        }
    }
    let insert_l = if upper { 0 } else { l };
    let mut game = PebbleGame::new(n, k);
    let mut accepted: Vec<(usize, usize)> = Vec::new();
    for &(u, v) in edges {
        if u >= n || v >= n || u == v {
            return Err(Error::InvalidGraph(format!("bad edge ({u}, {v})")));
        }
        match game.insert(u, v, insert_l) {
            Ok(()) => accepted.push((u, v)),
            Err(vertices) => {
                let mut w_edges = induced(&accepted, &vertices, n);
                w_edges.push((u, v));
                return Ok(violation(k, l, vertices, w_edges));
            }
        }
    }
    if upper {
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let (count, closure) = game.gather_on(&[a, b, c]);
                    if count < l {
                        let vertices: Vec<usize> = (0..n).filter(|&x| closure[x]).collect();
                        let w_edges = induced(edges, &vertices, n);
                        return Ok(violation(k, l, vertices, w_edges));
                    }
                }
            }
        }
    }
    Ok(SparsityVerdict {
        k,
        l,
        sparse: true,
        tight: is_tight_count(n, edges.len(), k, l),
        witness: None,
    })
}

pub fn pebble_game(graph: &Graph, k: usize, l: usize) -> Result<SparsityVerdict> {
    pebble_game_edges(graph.n_vertices(), graph.edges(), k, l)
}

/// `(2, 3)`-tight.
pub fn is_laman(graph: &Graph) -> bool {
    pebble_game(graph, 2, 3).map(|v| v.tight).unwrap_or(false)
}

/// Connected, acyclic and spanning `vertex_set`.
pub fn is_spanning_tree(edges: &[(usize, usize)], vertex_set: &[usize]) -> bool {
    let m = vertex_set.len();
    if m == 0 || edges.len() != m - 1 {
        return false;
    }
    let index = |x: usize| vertex_set.iter().position(|&v| v == x);
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(u, v) in edges {
        let (Some(a), Some(b)) = (index(u), index(v)) else {
            return false;
        };
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            return false;
        }
        parent[ra] = rb;
    }
    true
}

/// Largest graph accepted by [`brute_force_sparsity`].
pub const BRUTE_FORCE_CAP: usize = 12;

/// Enumerate every vertex subset the count applies to.
pub fn brute_force_sparsity(graph: &Graph, k: usize, l: usize) -> Result<SparsityVerdict> {
    check_params(k, l)?;
    let n = graph.n_vertices();
    if n > BRUTE_FORCE_CAP {
        return Err(Error::SizeCapExceeded {
            size: n,
            cap: BRUTE_FORCE_CAP,
        });
    }
    let mut adj = vec![0u32; n];
    for &(u, v) in graph.edges() {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    for s in 1u32..(1u32 << n) {
        let size = s.count_ones() as i64;
        if s.count_ones() < min_order(k, l) {
            continue;
        }
        let twice: u32 = (0..n)
            .filter(|&v| s & (1 << v) != 0)
            .map(|v| (adj[v] & s).count_ones())
            .sum();
        if (twice / 2) as i64 > k as i64 * size - l as i64 {
            let vertices: Vec<usize> = (0..n).filter(|&v| s & (1 << v) != 0).collect();
            let edges = graph
                .edges()
                .iter()
                .copied()
                .filter(|&(a, b)| s & (1 << a) != 0 && s & (1 << b) != 0)
                .collect();
            return Ok(SparsityVerdict {
                k,
                l,
                sparse: false,
                tight: false,
                witness: Some(Witness { vertices, edges }),
            });
        }
    }
    Ok(SparsityVerdict {
        k,
        l,
        sparse: true,
        tight: is_tight_count(n, graph.n_edges(), k, l),
        witness: None,
    })
}
