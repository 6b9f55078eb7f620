//! The chain-jump relations on a gap matrix: eps-chain reachability with
//! deterministic witnesses, the chain-recurrent set, terminal components,
//! and the pointwise orbit/recurrence/non-wandering relations on systems.

use serde::Serialize;
use std::collections::BTreeSet;

use crate::error::Error;
use crate::gap::{EpsGraph, GapMatrix};
use crate::scc::{condensation_reach, decompose, SccDecomposition};
use crate::system::{EvaluableSystem, OrbitEnd, State};

/// A finite jump sequence over sample indices. Valid at `eps` when every
/// consecutive gap is strictly below `eps`; always has at least one jump.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chain(pub Vec<usize>);

impl Chain {
    pub fn points(&self) -> &[usize] {
        &self.0
    }

    pub fn len_edges(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn point_set(&self) -> BTreeSet<usize> {
        self.0.iter().copied().collect()
    }

    pub fn gaps(&self, g: &GapMatrix) -> Vec<f64> {
        self.0.windows(2).map(|w| g.gap(w[0], w[1])).collect()
    }

    pub fn is_valid(&self, g: &GapMatrix, eps: f64) -> bool {
        self.0.len() >= 2 && self.0.windows(2).all(|w| g.gap(w[0], w[1]) < eps)
    }
}

/// A jump sequence over raw states, for validating chains whose points need
/// not be samples.
#[derive(Clone, Debug)]
pub struct StateChain(pub Vec<State>);

impl StateChain {
    pub fn is_valid(&self, sys: &EvaluableSystem, eps: f64) -> bool {
        self.0.len() >= 2
            && self.0.windows(2).all(|w| match sys.eval(&w[0]) {
                Ok(img) => sys.dist(&img, &w[1]) < eps,
                Err(_) => false,
            })
    }

    pub fn gaps(&self, sys: &EvaluableSystem) -> Vec<f64> {
        self.0
            .windows(2)
            .map(|w| sys.dist(&sys.eval(&w[0]).expect("chain state evaluates"), &w[1]))
            .collect()
    }
}

/// Distances (in jumps) from every vertex to `target` in the graph,
/// following edges forward; `usize::MAX` marks unreachable.
fn dists_to(graph: &EpsGraph, targets: &[usize]) -> Vec<usize> {
    let mut dist = vec![usize::MAX; graph.n];
    let mut queue = std::collections::VecDeque::new();
    for &t in targets {
        if dist[t] == usize::MAX {
            dist[t] = 0;
            queue.push_back(t);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &u in &graph.radj[v] {
            if dist[u] == usize::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    dist
}

/// Reconstructs the lexicographically smallest shortest walk from `x` given
/// distance-to-target labels: at each step take the smallest-index neighbor
/// one level closer.
fn descend(graph: &EpsGraph, dist: &[usize], x: usize) -> Option<Chain> {
    // First jump is mandatory, so minimize 1 + dist over successors.
    let mut best: Option<usize> = None;
    for &z in &graph.adj[x] {
        if dist[z] == usize::MAX {
            continue;
        }
        if best.is_none_or(|b| dist[z] < dist[b]) {
            best = Some(z);
        }
    }
    let mut cur = best?;
    let mut walk = vec![x, cur];
    while dist[cur] > 0 {
        let next = graph.adj[cur]
            .iter()
            .copied()
            .find(|&w| dist[w] == dist[cur] - 1)
            .expect("distance labels are consistent");
        walk.push(next);
        cur = next;
    }
    Some(Chain(walk))
}

/// Whether an eps-chain (at least one jump) leads from `x` to `y`, with the
/// shortest witness, ties broken toward smaller indices.
pub fn chain_reaches(g: &GapMatrix, eps: f64, x: usize, y: usize) -> Option<Chain> {
    let graph = g.eps_graph(eps);
    let dist = dists_to(&graph, &[y]);
    descend(&graph, &dist, x)
}

/// `chain_reaches` restricted to the subgraph induced by `within`.
pub fn chain_reaches_within(
    g: &GapMatrix,
    eps: f64,
    x: usize,
    y: usize,
    within: &BTreeSet<usize>,
) -> Option<Chain> {
    let graph = induced_graph(g, eps, within);
    if !within.contains(&x) || !within.contains(&y) {
        return None;
    }
    let dist = dists_to(&graph, &[y]);
    descend(&graph, &dist, x)
}

fn induced_graph(g: &GapMatrix, eps: f64, within: &BTreeSet<usize>) -> EpsGraph {
    let n = g.n();
    let mut adj = vec![Vec::new(); n];
    let mut radj = vec![Vec::new(); n];
    for &a in within {
        for &b in within {
            if g.gap(a, b) < eps {
                adj[a].push(b);
                radj[b].push(a);
            }
        }
    }
    EpsGraph { n, adj, radj }
}

/// All vertices lying on a closed eps-walk with at least one jump: the
/// members of nontrivial strongly connected components.
pub fn chain_recurrent_set(g: &GapMatrix, eps: f64) -> Vec<usize> {
    let d = decompose(&g.eps_graph(eps));
    let mut out = Vec::new();
    for (cid, comp) in d.components.iter().enumerate() {
        if d.nontrivial[cid] {
            out.extend_from_slice(comp);
        }
    }
    out.sort_unstable();
    out
}

/// Full SCC decomposition, requiring every vertex to have an outgoing edge.
/// Under that precondition at least one terminal component exists and every
/// terminal component is nontrivial.
pub fn scc_terminal_components(g: &GapMatrix, eps: f64) -> Result<SccDecomposition, Error> {
    let missing: Vec<(usize, f64)> = (0..g.n())
        .filter(|&v| g.min_out_gap(v) >= eps)
        .map(|v| (v, g.min_out_gap(v)))
        .collect();
    if !missing.is_empty() {
        return Err(Error::NoOutgoingEdge {
            eps,
            vertices: missing,
        });
    }
    Ok(decompose(&g.eps_graph(eps)))
}

/// The terminal component reachable from `x` with the smallest id, plus an
/// eps-chain from `x` into it.
pub fn reach_transitive(
    g: &GapMatrix,
    eps: f64,
    x: usize,
) -> Result<(usize, Vec<usize>, Chain), Error> {
    let d = scc_terminal_components(g, eps)?;
    let graph = g.eps_graph(eps);
    let reach = condensation_reach(&d.cond_adj);
    let cx = d.comp_of[x];
    let target = (0..d.num_components())
        .find(|&c| d.terminal[c] && reach[cx][c])
        .expect("every vertex reaches a terminal component");
    let dist = dists_to(&graph, &d.components[target]);
    let witness = descend(&graph, &dist, x).expect("terminal component is reachable");
    Ok((target, d.components[target].clone(), witness))
}

/// Outcome of a budgeted relation query. These relations truncate the
/// unbounded quantifiers of their definitions, so a negative answer means
/// "no witness within the budget", not a mathematical refutation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Verdict {
    Found {
        /// Iteration count of the witness.
        k: usize,
        /// Sample index of the intermediate point, for the non-wandering
        /// relation.
        #[serde(skip_serializing_if = "Option::is_none")]
        z: Option<usize>,
    },
    NotFound {
        /// The iteration budget that was exhausted.
        budget: usize,
        /// Whether some orbit scan ended early at a discontinuity ambiguity.
        truncated: bool,
    },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Found { .. })
    }

    pub fn witness_k(&self) -> Option<usize> {
        match self {
            Verdict::Found { k, .. } => Some(*k),
            Verdict::NotFound { .. } => None,
        }
    }
}

/// Orbit relation: some exact iterate `f^k(x) = y` with `1 <= k <= k_max`.
pub fn relation_orbit(sys: &EvaluableSystem, x: &State, y: &State, k_max: usize) -> Verdict {
    let mut orbit = sys.orbit(x, k_max);
    for (k, s) in orbit.by_ref() {
        if &s == y {
            return Verdict::Found { k, z: None };
        }
    }
    Verdict::NotFound {
        budget: k_max,
        truncated: orbit.end() == Some(OrbitEnd::Ambiguous),
    }
}

/// Recurrence relation: some iterate lands in the open eps-ball of `y`,
/// `1 <= k <= k_max`.
pub fn relation_recurrence(
    sys: &EvaluableSystem,
    x: &State,
    y: &State,
    eps: f64,
    k_max: usize,
) -> Verdict {
    let mut orbit = sys.orbit(x, k_max);
    for (k, s) in orbit.by_ref() {
        if sys.dist(&s, y) < eps {
            return Verdict::Found { k, z: None };
        }
    }
    Verdict::NotFound {
        budget: k_max,
        truncated: orbit.end() == Some(OrbitEnd::Ambiguous),
    }
}

/// Non-wandering relation with the eps-correction after the first
/// application: some sample `z` in the eps-ball of `f(x)` has an iterate
/// `f^k(z)`, `0 <= k <= k_max`, in the eps-ball of `y`.
pub fn relation_nonwandering(
    sys: &EvaluableSystem,
    x: &State,
    y: &State,
    eps: f64,
    k_max: usize,
) -> Verdict {
    let image = match sys.eval(x) {
        Ok(s) => s,
        Err(_) => {
            return Verdict::NotFound {
                budget: k_max,
                truncated: false,
            }
        }
    };
    let mut truncated = false;
    for (zi, z) in sys.samples().iter().enumerate() {
        if sys.dist(&image, z) >= eps {
            continue;
        }
        if sys.dist(z, y) < eps {
            return Verdict::Found { k: 0, z: Some(zi) };
        }
        let mut orbit = sys.orbit(z, k_max);
        for (k, s) in orbit.by_ref() {
            if sys.dist(&s, y) < eps {
                return Verdict::Found { k, z: Some(zi) };
            }
        }
        truncated |= orbit.end() == Some(OrbitEnd::Ambiguous);
    }
    Verdict::NotFound {
        budget: k_max,
        truncated,
    }
}

/// Whether every ordered pair of `m` (including equal pairs) is joined by an
/// eps-chain whose points all lie in `m`.
pub fn internally_chain_transitive(g: &GapMatrix, eps: f64, m: &BTreeSet<usize>) -> bool {
    if m.is_empty() {
        return false;
    }
    let graph = induced_graph(g, eps, m);
    for &y in m {
        let dist = dists_to(&graph, &[y]);
        for &x in m {
            // A walk with at least one jump exists iff some successor of x
            // can still reach y.
            if !graph.adj[x].iter().any(|&z| dist[z] != usize::MAX) {
                return false;
            }
        }
    }
    true
}
