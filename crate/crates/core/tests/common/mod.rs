//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library except to build inputs.

#![allow(dead_code)]

use std::io::Write;

use extender_core::{Dag, Fraction};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn frac(num: u64, den: u64) -> Fraction {
    Fraction::new(num, den).unwrap()
}

/// Prints past the test harness capture so the line shows up in plain
/// `cargo test` output.
pub fn verdict(id: &str, ok: bool, detail: impl AsRef<str>) {
    let status = if ok { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    writeln!(out, "{id} {status}: {}", detail.as_ref()).unwrap();
    out.flush().unwrap();
}

pub fn detail(text: impl AsRef<str>) {
    let mut out = std::io::stdout().lock();
    writeln!(out, "    {}", text.as_ref()).unwrap();
    out.flush().unwrap();
}

pub fn adjacency(m: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); m];
    for &(u, v) in edges {
        adj[u].push(v);
    }
    adj
}

/// Three-colour DFS.
pub fn acyclic(m: usize, edges: &[(usize, usize)]) -> bool {
    fn visit(v: usize, adj: &[Vec<usize>], colour: &mut [u8]) -> bool {
        colour[v] = 1;
        for &w in &adj[v] {
            let c = colour[w];
            if c == 1 || (c == 0 && !visit(w, adj, colour)) {
                return false;
            }
        }
        colour[v] = 2;
        true
    }
    let adj = adjacency(m, edges);
    let mut colour = vec![0u8; m];
    (0..m).all(|v| colour[v] != 0 || visit(v, &adj, &mut colour))
}

/// Longest path (in edges) avoiding `removed`, by memoised DFS. `None` when
/// every vertex is removed.
pub fn longest_path(m: usize, edges: &[(usize, usize)], removed: &[bool]) -> Option<usize> {
    fn from(v: usize, adj: &[Vec<usize>], removed: &[bool], memo: &mut [Option<usize>]) -> usize {
        if let Some(l) = memo[v] {
            return l;
        }
        let mut best = 0;
        for &w in &adj[v] {
            if !removed[w] {
                best = best.max(1 + from(w, adj, removed, memo));
            }
        }
        memo[v] = Some(best);
        best
    }
    let adj = adjacency(m, edges);
    let mut memo = vec![None; m];
    (0..m).filter(|&v| !removed[v]).map(|v| from(v, &adj, removed, &mut memo)).max()
}

pub fn mask_to_removed(m: usize, mask: u64) -> Vec<bool> {
    (0..m).map(|v| mask >> v & 1 == 1).collect()
}

/// `(ε, ρ)`-extender by enumerating every proper subset with `|S| ≤ εm`.
pub fn extender_oracle(m: usize, edges: &[(usize, usize)], eps: Fraction, rho: usize) -> bool {
    let full = (1u64 << m) - 1;
    (0..full)
        .filter(|&mask| {
            let size = mask.count_ones() as u64;
            size * eps.denom() <= eps.numer() * m as u64
        })
        .all(|mask| longest_path(m, edges, &mask_to_removed(m, mask)).unwrap() >= rho)
}

/// Both depth-function conditions, checked literally.
pub fn depth_conditions(m: usize, edges: &[(usize, usize)], f: &[usize]) -> bool {
    let adj = adjacency(m, edges);
    edges.iter().all(|&(a, b)| f[a] == 0 || f[a] > f[b])
        && (0..m).all(|a| f[a] == 0 || adj[a].iter().any(|&b| f[b] + 1 == f[a]))
}

/// Random DAG: random topological order, each forward pair joined with
/// probability `p`.
pub fn random_dag<R: Rng>(rng: &mut R, m: usize, p: f64) -> Dag {
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            if rng.random_bool(p) {
                edges.push((order[i], order[j]));
            }
        }
    }
    Dag::new(m, edges).unwrap()
}

/// Every DAG on `m` labelled vertices, as edge lists.
pub fn all_dags(m: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> =
        (0..m).flat_map(|u| (0..m).filter(move |&v| v != u).map(move |v| (u, v))).collect();
    let mut out = Vec::new();
    for mask in 0u64..1 << pairs.len() {
        let edges: Vec<(usize, usize)> =
            pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        if kahn_bits(m, &edges) {
            out.push(edges);
        }
    }
    out
}

fn kahn_bits(m: usize, edges: &[(usize, usize)]) -> bool {
    let mut preds = vec![0u32; m];
    for &(u, v) in edges {
        preds[v] |= 1 << u;
    }
    let mut done = 0u32;
    loop {
        let ready = (0..m).find(|&v| done >> v & 1 == 0 && preds[v] & !done == 0);
        match ready {
            Some(v) => done |= 1 << v,
            None => return done.count_ones() as usize == m,
        }
    }
}
