#![allow(dead_code)] // each integration test compiles its own copy

//! Brute-force oracles, independent of the library's graph algorithms.
//! Everything here enumerates rather than decomposes.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use chainscope_core::{GapMatrix, Schedule};
use rand::Rng;

/// Random nonnegative gap matrix with a sprinkling of exact zeros.
pub fn random_gap(rng: &mut impl Rng, n: usize, zero_p: f64) -> GapMatrix {
    let mut gap = Vec::with_capacity(n * n);
    for _ in 0..n * n {
        if rng.gen_bool(zero_p) {
            gap.push(0.0);
        } else {
            gap.push(rng.gen_range(0.0..1.0));
        }
    }
    GapMatrix::from_raw(n, gap)
}

/// Lexicographically smallest walk of exactly `len` edges from `x` to `y`,
/// found by ordered depth-first enumeration.
fn walk_of_len(g: &GapMatrix, eps: f64, walk: &mut Vec<usize>, y: usize, len: usize) -> bool {
    if len == 0 {
        return *walk.last().unwrap() == y;
    }
    let last = *walk.last().unwrap();
    for b in 0..g.n() {
        if g.gap(last, b) < eps {
            walk.push(b);
            if walk_of_len(g, eps, walk, y, len - 1) {
                return true;
            }
            walk.pop();
        }
    }
    false
}

/// Shortest walk with at least one edge (lexicographically smallest among
/// the shortest), up to `max_len` edges.
pub fn oracle_reaches(
    g: &GapMatrix,
    eps: f64,
    x: usize,
    y: usize,
    max_len: usize,
) -> Option<Vec<usize>> {
    for len in 1..=max_len {
        let mut walk = vec![x];
        if walk_of_len(g, eps, &mut walk, y, len) {
            return Some(walk);
        }
    }
    None
}

/// Chain-recurrent set by closed-walk enumeration of length <= n.
pub fn oracle_cr_set(g: &GapMatrix, eps: f64) -> Vec<usize> {
    (0..g.n())
        .filter(|&x| oracle_reaches(g, eps, x, x, g.n()).is_some())
        .collect()
}

/// Minimal total gap over walks with 1..=max_len edges.
pub fn oracle_strong_value(g: &GapMatrix, x: usize, y: usize, max_len: usize) -> f64 {
    fn rec(g: &GapMatrix, cur: usize, y: usize, cost: f64, left: usize, best: &mut f64) {
        if cur == y && cost < *best {
            *best = cost;
        }
        if left == 0 {
            return;
        }
        for b in 0..g.n() {
            rec(g, b, y, cost + g.gap(cur, b), left - 1, best);
        }
    }
    let mut best = f64::INFINITY;
    for b in 0..g.n() {
        rec(g, b, y, g.gap(x, b), max_len - 1, &mut best);
    }
    best
}

/// Covering-walk feasibility decided on the product state space
/// `(vertex, visited subset of must)`; complete, no length bound.
pub fn oracle_covering(
    g: &GapMatrix,
    eps: f64,
    x: usize,
    y: usize,
    must: &BTreeSet<usize>,
) -> bool {
    let goals: Vec<usize> = must.iter().copied().filter(|&v| v != x && v != y).collect();
    let full: u32 = (1 << goals.len()) - 1;
    let bit = |v: usize| -> u32 {
        goals
            .iter()
            .position(|&gv| gv == v)
            .map(|i| 1 << i)
            .unwrap_or(0)
    };
    let mut seen: HashSet<(usize, u32)> = HashSet::new();
    let mut queue: VecDeque<(usize, u32)> = VecDeque::new();
    for b in 0..g.n() {
        if g.gap(x, b) < eps {
            let m = bit(b);
            if seen.insert((b, m)) {
                queue.push_back((b, m));
            }
        }
    }
    while let Some((v, m)) = queue.pop_front() {
        if v == y && m == full {
            return true;
        }
        for b in 0..g.n() {
            if g.gap(v, b) < eps {
                let nm = m | bit(b);
                if seen.insert((b, nm)) {
                    queue.push_back((b, nm));
                }
            }
        }
    }
    false
}

/// All point sets realizable by a walk from `x` to `y` with at least one
/// edge, complete over unbounded walk lengths via `(vertex, point set)`
/// saturation.
pub fn oracle_realizable_sets(g: &GapMatrix, eps: f64, x: usize, y: usize) -> HashSet<u64> {
    let mut out = HashSet::new();
    let mut seen: HashSet<(usize, u64)> = HashSet::new();
    let mut queue: VecDeque<(usize, u64)> = VecDeque::new();
    let root = 1u64 << x;
    seen.insert((x, root));
    queue.push_back((x, root));
    while let Some((v, m)) = queue.pop_front() {
        for b in 0..g.n() {
            if g.gap(v, b) < eps {
                let nm = m | (1u64 << b);
                if b == y {
                    out.insert(nm);
                }
                if seen.insert((b, nm)) {
                    queue.push_back((b, nm));
                }
            }
        }
    }
    out
}

/// Nested-family existence by bottom-up choice of realizable point sets
/// with containment between consecutive levels.
pub fn oracle_nested(g: &GapMatrix, sched: &Schedule, x: usize, y: usize) -> bool {
    let per_level: Vec<Vec<u64>> = sched
        .levels()
        .iter()
        .map(|&eps| {
            let mut v: Vec<u64> = oracle_realizable_sets(g, eps, x, y).into_iter().collect();
            v.sort_unstable();
            v
        })
        .collect();
    fn pick(
        per_level: &[Vec<u64>],
        level: usize,
        prev: u64,
        memo: &mut HashMap<(usize, u64), bool>,
    ) -> bool {
        if level == per_level.len() {
            return true;
        }
        if let Some(&r) = memo.get(&(level, prev)) {
            return r;
        }
        let ok = per_level[level]
            .iter()
            .filter(|&&m| m & prev == prev)
            .any(|&m| pick(per_level, level + 1, m, memo));
        memo.insert((level, prev), ok);
        ok
    }
    pick(&per_level, 0, 0, &mut HashMap::new())
}
