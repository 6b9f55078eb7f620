//! Strongly connected components (iterative Tarjan) and the condensation.

use crate::gap::EpsGraph;

/// SCC structure of an eps-graph. Component ids are renumbered so that
/// components are ordered by their smallest vertex, which keeps all derived
/// output stable across platforms.
#[derive(Clone, Debug)]
pub struct SccDecomposition {
    pub comp_of: Vec<usize>,
    /// Vertices of each component, sorted.
    pub components: Vec<Vec<usize>>,
    /// Condensation adjacency (acyclic, sorted, deduplicated).
    pub cond_adj: Vec<Vec<usize>>,
    /// No outgoing condensation edge.
    pub terminal: Vec<bool>,
    /// Has at least one internal edge (size >= 2, or a self-loop).
    pub nontrivial: Vec<bool>,
}

impl SccDecomposition {
    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    /// Ids of terminal components, ascending.
    pub fn terminal_ids(&self) -> Vec<usize> {
        (0..self.components.len())
            .filter(|&c| self.terminal[c])
            .collect()
    }
}

/// Tarjan's algorithm with an explicit stack (graphs here can be deep chains).
fn tarjan(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut comps: Vec<Vec<usize>> = Vec::new();

    // (vertex, next child position)
    let mut call: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut ci)) = call.last_mut() {
            if *ci < adj[v].len() {
                let w = adj[v][*ci];
                *ci += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

pub fn decompose(graph: &EpsGraph) -> SccDecomposition {
    let mut comps = tarjan(&graph.adj);
    for c in &mut comps {
        c.sort_unstable();
    }
    comps.sort_by_key(|c| c[0]);

    let n = graph.n;
    let mut comp_of = vec![0usize; n];
    for (cid, comp) in comps.iter().enumerate() {
        for &v in comp {
            comp_of[v] = cid;
        }
    }
    let m = comps.len();
    let mut cond_adj = vec![Vec::new(); m];
    let mut nontrivial = vec![false; m];
    for v in 0..n {
        for &w in &graph.adj[v] {
            let (cv, cw) = (comp_of[v], comp_of[w]);
            if cv == cw {
                nontrivial[cv] = true;
            } else {
                cond_adj[cv].push(cw);
            }
        }
    }
    for out in &mut cond_adj {
        out.sort_unstable();
        out.dedup();
    }
    let terminal = cond_adj.iter().map(|out| out.is_empty()).collect();
    SccDecomposition {
        comp_of,
        components: comps,
        cond_adj,
        terminal,
        nontrivial,
    }
}

/// Reachability closure over the condensation: `reach[a]` holds the ids of
/// all components reachable from `a` (including `a` itself).
pub fn condensation_reach(cond_adj: &[Vec<usize>]) -> Vec<Vec<bool>> {
    let m = cond_adj.len();
    let mut reach = vec![vec![false; m]; m];
    // Condensation ids are not topologically ordered after renumbering, so
    // do a DFS per component; m is small in practice.
    for (a, row) in reach.iter_mut().enumerate() {
        let mut stack = vec![a];
        row[a] = true;
        while let Some(c) = stack.pop() {
            for &d in &cond_adj[c] {
                if !row[d] {
                    row[d] = true;
                    stack.push(d);
                }
            }
        }
    }
    reach
}
