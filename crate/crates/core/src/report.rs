//! JSON report schemas (all carry `"schema": 1`) and DOT export of
//! eps-graphs. Reports are deterministic: field order is fixed by the
//! struct definitions and all collections are index-ordered.

use serde::{Serialize, Serializer};

use crate::gap::GapMatrix;
use crate::locator::{ProjectedOrbit, TerminalComponent};
use crate::nested::{NestedOutcome, Schedule, UndecidedReason};
use crate::relations::Verdict;
use crate::scc::SccDecomposition;
use crate::system::State;

pub const SCHEMA_VERSION: u32 = 1;

/// A state rendered for reports: a number for real states, a string for
/// words.
#[derive(Clone, Debug)]
pub struct StateLabel(pub State);

impl Serialize for StateLabel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match &self.0 {
            State::Real(x) => s.serialize_f64(*x),
            State::Word(w) => s.serialize_str(&w.to_string()),
        }
    }
}

pub fn state_labels(g: &GapMatrix) -> Vec<StateLabel> {
    g.labels().iter().cloned().map(StateLabel).collect()
}

#[derive(Serialize)]
pub struct ComponentReport {
    pub id: usize,
    pub vertices: Vec<usize>,
    pub terminal: bool,
    pub nontrivial: bool,
}

impl ComponentReport {
    pub fn from_decomposition(d: &SccDecomposition) -> Vec<ComponentReport> {
        (0..d.num_components())
            .map(|id| ComponentReport {
                id,
                vertices: d.components[id].clone(),
                terminal: d.terminal[id],
                nontrivial: d.nontrivial[id],
            })
            .collect()
    }
}

#[derive(Serialize)]
pub struct CrReport {
    pub schema: u32,
    pub system: String,
    pub eps: f64,
    pub states: Vec<StateLabel>,
    pub cr_set: Vec<usize>,
    pub components: Vec<ComponentReport>,
    /// Shortest self-chain per chain-recurrent vertex.
    pub witnesses: std::collections::BTreeMap<usize, Vec<usize>>,
}

#[derive(Serialize)]
pub struct RelationsReport {
    pub schema: u32,
    pub system: String,
    pub eps: f64,
    pub k_max: usize,
    pub from: usize,
    pub to: usize,
    pub orbit: Verdict,
    pub recurrence: Verdict,
    pub nonwandering: Verdict,
}

#[derive(Serialize)]
pub struct MetricScr {
    pub metric: String,
    pub scr_set: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<Vec<f64>>>,
}

#[derive(Serialize)]
pub struct StrongReport {
    pub schema: u32,
    pub system: String,
    pub eps: f64,
    pub states: Vec<StateLabel>,
    pub metrics: Vec<MetricScr>,
    pub intersection: Vec<usize>,
}

#[derive(Serialize)]
pub struct NestedReport {
    pub schema: u32,
    pub system: String,
    pub levels: Vec<f64>,
    pub from: usize,
    pub to: usize,
    pub mode: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chains: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<Obstruction>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub undecided: Option<String>,
}

#[derive(Serialize)]
pub struct Obstruction {
    pub level: usize,
    pub must_visit: Vec<usize>,
}

impl NestedReport {
    pub fn new(
        system: &str,
        sched: &Schedule,
        from: usize,
        to: usize,
        mode: &str,
        outcome: &NestedOutcome,
    ) -> Self {
        let (status, chains, obstruction, undecided) = match outcome {
            NestedOutcome::Success(fam) => (
                "success",
                Some(fam.chains.iter().map(|c| c.points().to_vec()).collect()),
                None,
                None,
            ),
            NestedOutcome::Infeasible { level, must_visit } => (
                "infeasible",
                None,
                Some(Obstruction {
                    level: *level,
                    must_visit: must_visit.clone(),
                }),
                None,
            ),
            NestedOutcome::Undecided { reason } => (
                "undecided",
                None,
                None,
                Some(match reason {
                    UndecidedReason::NodeBudget { nodes } => {
                        format!("node budget exhausted after {nodes} nodes")
                    }
                    UndecidedReason::GreedyBlocked { level, pair } => format!(
                        "greedy refinement blocked at level {level} between {} and {}",
                        pair.0, pair.1
                    ),
                    UndecidedReason::WalkLengthBound { max_len } => {
                        format!("no witness walk within the length bound {max_len}")
                    }
                    UndecidedReason::TooManyVertices { n, max } => {
                        format!("exact mode supports up to {max} vertices, got {n}")
                    }
                }),
            ),
        };
        NestedReport {
            schema: SCHEMA_VERSION,
            system: system.to_string(),
            levels: sched.levels().to_vec(),
            from,
            to,
            mode: mode.to_string(),
            status: status.to_string(),
            chains,
            obstruction,
            undecided,
        }
    }
}

#[derive(Serialize)]
pub struct LocateReport {
    pub schema: u32,
    pub system: String,
    pub seed: usize,
    pub steps: Vec<usize>,
    pub cycle: Vec<usize>,
    pub eps_star: f64,
    pub rho: f64,
    pub artifact_flag: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terminal_components: Option<Vec<TerminalComponentReport>>,
}

#[derive(Serialize)]
pub struct TerminalComponentReport {
    pub id: usize,
    pub vertices: Vec<usize>,
    pub witness: Vec<usize>,
    pub basin: Vec<usize>,
}

impl LocateReport {
    pub fn new(
        system: &str,
        orbit: &ProjectedOrbit,
        components: Option<&[TerminalComponent]>,
    ) -> Self {
        LocateReport {
            schema: SCHEMA_VERSION,
            system: system.to_string(),
            seed: orbit.seed,
            steps: orbit.steps.clone(),
            cycle: orbit.cycle.clone(),
            eps_star: orbit.eps_star,
            rho: orbit.rho,
            artifact_flag: orbit.artifact,
            terminal_components: components.map(|cs| {
                cs.iter()
                    .map(|c| TerminalComponentReport {
                        id: c.id,
                        vertices: c.vertices.clone(),
                        witness: c.witness.points().to_vec(),
                        basin: c.basin.clone(),
                    })
                    .collect()
            }),
        }
    }
}

/// Graphviz digraph of the eps-graph: vertices filled by component color,
/// terminal components drawn with a double border, edges labeled by gap.
pub fn dot_eps_graph(g: &GapMatrix, eps: f64, d: &SccDecomposition) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let _ = writeln!(out, "digraph eps_graph {{");
    let _ = writeln!(out, "  rankdir=LR;");
    let _ = writeln!(out, "  node [style=filled, colorscheme=set312];");
    for v in 0..g.n() {
        let comp = d.comp_of[v];
        let color = comp % 12 + 1;
        let peripheries = if d.terminal[comp] { 2 } else { 1 };
        let _ = writeln!(
            out,
            "  {v} [label=\"{}\", fillcolor={color}, peripheries={peripheries}];",
            g.labels()[v]
        );
    }
    for a in 0..g.n() {
        for b in 0..g.n() {
            let gap = g.gap(a, b);
            if gap < eps {
                let _ = writeln!(out, "  {a} -> {b} [label=\"{gap}\"];");
            }
        }
    }
    let _ = writeln!(out, "}}");
    out
}

/// Serializes any report to its canonical byte form: two-space pretty JSON
/// plus a trailing newline.
pub fn to_json<T: Serialize>(report: &T) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports are serializable");
    s.push('\n');
    s
}
