//! Locating recurrence by projection: follow the map projected onto the
//! sample set until a state repeats. The repeat closes a cycle whose worst
//! jump certifies a chain-recurrence threshold.

use serde::Serialize;

use crate::error::Error;
use crate::gap::GapMatrix;
use crate::relations::Chain;
use crate::scc::{condensation_reach, decompose};

/// Orbit of the projected map `F(a) = argmin_b gap[a][b]` from a seed,
/// ending at the first revisited vertex.
#[derive(Clone, Debug, Serialize)]
pub struct ProjectedOrbit {
    pub seed: usize,
    /// Visited vertices, seed first; the last entry repeats an earlier one.
    pub steps: Vec<usize>,
    /// Index into `steps` of the first occurrence of the repeated vertex.
    pub cycle_start: usize,
    /// The periodic part.
    pub cycle: Vec<usize>,
    /// Largest gap along the cycle; every cycle vertex is chain-recurrent
    /// at any threshold above it.
    pub eps_star: f64,
    /// Projection resolution of the whole matrix.
    pub rho: f64,
    /// Set when the cycle involves a non-exact jump (`eps_star > 0`): the
    /// recurrence may be an artifact of projection rather than an exact
    /// periodic orbit, since every projected jump is at most `rho`.
    pub artifact: bool,
}

/// Projected step: the closest sample to the image, smallest index on ties.
fn project(g: &GapMatrix, a: usize) -> usize {
    let mut best = 0;
    let mut best_gap = f64::INFINITY;
    for b in 0..g.n() {
        let gap = g.gap(a, b);
        if gap < best_gap {
            best_gap = gap;
            best = b;
        }
    }
    best
}

/// Follows the projected orbit from `x0` to its first revisit. Terminates
/// within `n + 1` steps and always produces a nonempty cycle.
pub fn locate_cr(g: &GapMatrix, x0: usize) -> ProjectedOrbit {
    let n = g.n();
    let mut steps = vec![x0];
    let mut pos = vec![usize::MAX; n];
    pos[x0] = 0;
    let mut cur = x0;
    let cycle_start = loop {
        let next = project(g, cur);
        steps.push(next);
        if pos[next] != usize::MAX {
            break pos[next];
        }
        pos[next] = steps.len() - 1;
        cur = next;
    };
    let cycle: Vec<usize> = steps[cycle_start..steps.len() - 1].to_vec();
    let mut eps_star = 0.0f64;
    for i in 0..cycle.len() {
        let a = cycle[i];
        let b = cycle[(i + 1) % cycle.len()];
        eps_star = eps_star.max(g.gap(a, b));
    }
    ProjectedOrbit {
        seed: x0,
        steps,
        cycle_start,
        cycle,
        eps_star,
        rho: g.rho(),
        artifact: eps_star > 0.0,
    }
}

/// A terminal strongly connected component with a witness cycle inside it
/// and the vertices that can reach it.
#[derive(Clone, Debug, Serialize)]
pub struct TerminalComponent {
    pub id: usize,
    pub vertices: Vec<usize>,
    pub witness: Chain,
    pub basin: Vec<usize>,
}

/// All terminal components at `eps`, each with an internal witness cycle.
/// Requires `eps > rho` so that every vertex has an outgoing edge; the
/// basins then jointly cover every vertex.
pub fn locate_all_components(g: &GapMatrix, eps: f64) -> Result<Vec<TerminalComponent>, Error> {
    let rho = g.rho();
    if eps <= rho {
        return Err(Error::EpsBelowResolution { eps, rho });
    }
    let graph = g.eps_graph(eps);
    let d = decompose(&graph);
    let reach = condensation_reach(&d.cond_adj);
    let mut out = Vec::new();
    for cid in d.terminal_ids() {
        let members = &d.components[cid];
        let inside: std::collections::BTreeSet<usize> = members.iter().copied().collect();
        let v = members[0];
        let witness = crate::relations::chain_reaches_within(g, eps, v, v, &inside)
            .expect("terminal components are nontrivial above the resolution");
        let basin = (0..g.n()).filter(|&u| reach[d.comp_of[u]][cid]).collect();
        out.push(TerminalComponent {
            id: cid,
            vertices: members.clone(),
            witness,
            basin,
        });
    }
    Ok(out)
}
