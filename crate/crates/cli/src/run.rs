//! Dispatch from a `RunConfig` to reports and exit codes.
//!
//! Exit codes: 0 success (including a definite "infeasible"), 1 failed
//! demonstration cases, 2 validation errors, 3 search budget exhausted.

use std::collections::BTreeSet;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use chainscope_core::report::{
    dot_eps_graph, state_labels, to_json, ComponentReport, CrReport, LocateReport, MetricScr,
    NestedReport, RelationsReport, StrongReport, SCHEMA_VERSION,
};
use chainscope_core::scc::decompose;
use chainscope_core::*;

use crate::config::{parse_state_spec, RunConfig};
use crate::paper::{FaultInjection, PaperReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CASE_FAILURES: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_UNDECIDED: i32 = 3;

const DEFAULT_K_MAX: usize = 10_000;
/// Dense value matrices are only emitted up to this size.
const DENSE_VALUE_LIMIT: usize = 512;

/// Runs one analysis; returns the process exit code.
pub fn run(cfg: &RunConfig) -> Result<i32> {
    if let Some(threads) = cfg.threads {
        if threads == 0 {
            bail!("--threads must be at least 1");
        }
        // ignore failure: the global pool can only be set once per process
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match cfg.analysis.as_str() {
        "relations" => relations(cfg),
        "cr" => cr(cfg),
        "strong" => strong(cfg),
        "nested" => nested(cfg),
        "locate" => locate(cfg),
        "paper" => paper(cfg),
        other => bail!("unknown analysis `{other}`"),
    }
}

fn need_eps(cfg: &RunConfig) -> Result<f64> {
    let eps = cfg
        .eps
        .ok_or_else(|| anyhow!("analysis `{}` needs --eps", cfg.analysis))?;
    if eps.is_nan() || eps <= 0.0 {
        bail!("--eps must be positive, got {eps}");
    }
    Ok(eps)
}

fn emit(cfg: &RunConfig, json: &str, dot: Option<&str>) -> Result<()> {
    match &cfg.out {
        Some(path) => write_file(path, json)?,
        None => {
            use std::io::Write;
            // tolerate a closed pipe (e.g. piping into head)
            if let Err(e) = std::io::stdout().write_all(json.as_bytes()) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    return Err(e.into());
                }
            }
        }
    }
    if let Some(text) = dot {
        let path = cfg
            .dot
            .as_ref()
            .ok_or_else(|| anyhow!("internal: dot text without a path"))?;
        write_file(path, text)?;
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn search_limits(cfg: &RunConfig) -> SearchLimits {
    let mut limits = SearchLimits::default();
    if let Some(n) = cfg.search_max_nodes {
        limits.max_nodes = n;
    }
    if let Some(l) = cfg.search_max_walk_len {
        limits.max_walk_len = Some(l);
    }
    limits
}

fn relations(cfg: &RunConfig) -> Result<i32> {
    let sys = cfg.build_system()?;
    let eps = need_eps(cfg)?;
    let k_max = cfg.k_max.unwrap_or(DEFAULT_K_MAX);
    let from_spec = cfg
        .from
        .as_deref()
        .ok_or_else(|| anyhow!("relations needs --from"))?;
    let to_spec = cfg
        .to
        .as_deref()
        .ok_or_else(|| anyhow!("relations needs --to"))?;
    let from = parse_state_spec(&sys, from_spec)?;
    let to = parse_state_spec(&sys, to_spec)?;
    let x = &sys.samples()[from];
    let y = &sys.samples()[to];
    let report = RelationsReport {
        schema: SCHEMA_VERSION,
        system: sys.name().to_string(),
        eps,
        k_max,
        from,
        to,
        orbit: relation_orbit(&sys, x, y, k_max),
        recurrence: relation_recurrence(&sys, x, y, eps, k_max),
        nonwandering: relation_nonwandering(&sys, x, y, eps, k_max),
    };
    emit(cfg, &to_json(&report), None)?;
    Ok(EXIT_OK)
}

fn cr(cfg: &RunConfig) -> Result<i32> {
    let sys = cfg.build_system()?;
    let eps = need_eps(cfg)?;
    let g = GapMatrix::build(&sys)?;
    let d = decompose(&g.eps_graph(eps));
    let cr_set = chain_recurrent_set(&g, eps);
    let witnesses = cr_set
        .iter()
        .map(|&v| {
            let w = chain_reaches(&g, eps, v, v).expect("recurrent vertices close a chain");
            (v, w.points().to_vec())
        })
        .collect();
    let report = CrReport {
        schema: SCHEMA_VERSION,
        system: sys.name().to_string(),
        eps,
        states: state_labels(&g),
        cr_set,
        components: ComponentReport::from_decomposition(&d),
        witnesses,
    };
    let dot = cfg.dot.is_some().then(|| dot_eps_graph(&g, eps, &d));
    emit(cfg, &to_json(&report), dot.as_deref())?;
    Ok(EXIT_OK)
}

fn strong(cfg: &RunConfig) -> Result<i32> {
    let sys = cfg.build_system()?;
    let eps = need_eps(cfg)?;
    let family = cfg.metric_family()?;
    let dense = cfg.dense.unwrap_or(false);
    let mut metrics = Vec::new();
    for t in &family {
        let g = GapMatrix::build_with_metric(&sys, t)?;
        let v = strong_chain_values(&g);
        let values = if dense {
            if g.n() > DENSE_VALUE_LIMIT {
                bail!(
                    "--dense supports up to {DENSE_VALUE_LIMIT} samples, got {}",
                    g.n()
                );
            }
            Some(v.rows())
        } else {
            None
        };
        metrics.push(MetricScr {
            metric: t.name(),
            scr_set: strong_chain_recurrent_set(&v, eps),
            values,
        });
    }
    let intersection = scr_family_intersection(&sys, &family, eps)?;
    let g = GapMatrix::build(&sys)?;
    let report = StrongReport {
        schema: SCHEMA_VERSION,
        system: sys.name().to_string(),
        eps,
        states: state_labels(&g),
        metrics,
        intersection,
    };
    emit(cfg, &to_json(&report), None)?;
    Ok(EXIT_OK)
}

fn nested(cfg: &RunConfig) -> Result<i32> {
    let sys = cfg.build_system()?;
    let g = GapMatrix::build(&sys)?;
    let sched = cfg
        .schedule
        .as_ref()
        .ok_or_else(|| anyhow!("nested needs --schedule"))?
        .build()?;
    let mode_name = cfg.mode.as_deref().unwrap_or("greedy");
    let mode = match mode_name {
        "greedy" => DecideMode::Greedy,
        "exact" => DecideMode::Exact,
        other => bail!("unknown mode `{other}` (greedy | exact)"),
    };
    let limits = search_limits(cfg);
    if let Some(set) = &cfg.set {
        // transitivity check over a vertex set
        let m: BTreeSet<usize> = set
            .iter()
            .map(|s| parse_state_spec(&sys, s))
            .collect::<Result<_>>()?;
        let ok = nested_transitive_check(&g, &sched, &m, mode, &limits);
        #[derive(serde::Serialize)]
        struct TransitiveReport {
            schema: u32,
            system: String,
            levels: Vec<f64>,
            mode: String,
            set: Vec<usize>,
            transitive: bool,
        }
        let report = TransitiveReport {
            schema: SCHEMA_VERSION,
            system: sys.name().to_string(),
            levels: sched.levels().to_vec(),
            mode: mode_name.to_string(),
            set: m.iter().copied().collect(),
            transitive: ok,
        };
        emit(cfg, &to_json(&report), None)?;
        return Ok(EXIT_OK);
    }
    let from_spec = cfg
        .from
        .as_deref()
        .ok_or_else(|| anyhow!("nested needs --from/--to or --set"))?;
    let to_spec = cfg
        .to
        .as_deref()
        .ok_or_else(|| anyhow!("nested needs --to"))?;
    let from = parse_state_spec(&sys, from_spec)?;
    let to = parse_state_spec(&sys, to_spec)?;
    let outcome = nested_decide(&g, &sched, from, to, mode, &limits);
    let report = NestedReport::new(sys.name(), &sched, from, to, mode_name, &outcome);
    emit(cfg, &to_json(&report), None)?;
    Ok(match outcome {
        NestedOutcome::Undecided { .. } => EXIT_UNDECIDED,
        _ => EXIT_OK,
    })
}

fn locate(cfg: &RunConfig) -> Result<i32> {
    let sys = cfg.build_system()?;
    let g = GapMatrix::build(&sys)?;
    let seed_spec = cfg
        .from
        .as_deref()
        .ok_or_else(|| anyhow!("locate needs --from"))?;
    let seed = parse_state_spec(&sys, seed_spec)?;
    let orbit = locate_cr(&g, seed);
    let components = match cfg.eps {
        Some(eps) => Some(locate_all_components(&g, eps)?),
        None => None,
    };
    let report = LocateReport::new(sys.name(), &orbit, components.as_deref());
    let dot = match (cfg.dot.is_some(), cfg.eps) {
        (true, Some(eps)) => Some(dot_eps_graph(&g, eps, &decompose(&g.eps_graph(eps)))),
        (true, None) => bail!("--dot for locate needs --eps to pick the graph"),
        _ => None,
    };
    emit(cfg, &to_json(&report), dot.as_deref())?;
    Ok(EXIT_OK)
}

fn paper(cfg: &RunConfig) -> Result<i32> {
    let fault = FaultInjection::parse(cfg.fault.as_deref())?;
    let cases = crate::paper::run_paper_suite(cfg.only.as_deref(), &fault);
    if cases.is_empty() {
        bail!(
            "--only `{}` matches no case",
            cfg.only.as_deref().unwrap_or("")
        );
    }
    let report = PaperReport::new(cases);
    let failed = report.failed.clone();
    emit(cfg, &to_json(&report), None)?;
    for case in &report.cases {
        eprintln!(
            "{}: {}",
            case.name,
            if case.passed { "pass" } else { "FAIL" }
        );
    }
    if failed.is_empty() {
        Ok(EXIT_OK)
    } else {
        eprintln!("failing cases: {}", failed.join(", "));
        Ok(EXIT_CASE_FAILURES)
    }
}
