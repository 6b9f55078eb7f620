//! The bundled demonstration suite: desk-scale reproductions of the
//! classical separation examples this toolkit is built around. Each case
//! checks pinned expectations and reports pass/fail; the suite is fully
//! deterministic.

use std::collections::BTreeSet;

use chainscope_core::*;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct CaseResult {
    pub name: String,
    pub passed: bool,
    pub details: Vec<String>,
}

impl CaseResult {
    fn new(name: &str) -> Self {
        CaseResult {
            name: name.to_string(),
            passed: true,
            details: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if ok {
            self.details.push(format!("ok: {what}"));
        } else {
            self.passed = false;
            self.details.push(format!("FAILED: {what}"));
        }
    }
}

/// Named fault injections (test hooks) that deliberately corrupt one case.
#[derive(Clone, Debug, Default)]
pub struct FaultInjection {
    /// Scales the word metric inside the explicit-chain case.
    pub sigma1_metric_scale: Option<f64>,
}

impl FaultInjection {
    pub fn parse(name: Option<&str>) -> anyhow::Result<Self> {
        match name {
            None => Ok(FaultInjection::default()),
            Some("sigma1-metric-scale") => Ok(FaultInjection {
                sigma1_metric_scale: Some(0.5),
            }),
            Some(other) => anyhow::bail!("unknown fault `{other}`"),
        }
    }
}

fn interval(name: &str, grid: usize) -> EvaluableSystem {
    builtin_system(
        name,
        &BuiltinParams {
            grid_n: Some(grid),
            ..Default::default()
        },
    )
    .expect("builtin system")
}

fn cycle(n: usize) -> EvaluableSystem {
    builtin_system(
        "cycle",
        &BuiltinParams {
            cycle_n: Some(n),
            ..Default::default()
        },
    )
    .expect("builtin system")
}

fn subshift(name: &str, k: usize) -> EvaluableSystem {
    builtin_system(
        name,
        &BuiltinParams {
            truncation_k: Some(k),
            ..Default::default()
        },
    )
    .expect("builtin system")
}

/// The discontinuous four-piece map has chain-recurrent points but no
/// non-wandering ones: the four phase points of its recurrence loop all
/// fail the self-relation, while 0 stays chain-recurrent across thresholds.
fn akin_nonwandering_failure() -> CaseResult {
    let mut case = CaseResult::new("akin-ntilde-failure");
    let sys = interval("akin", 1001);
    for v in [0.0, 0.25, 0.5, 0.75] {
        let x = State::Real(v);
        let verdict = relation_nonwandering(&sys, &x, &x, 0.01, 10_000);
        case.check(
            !verdict.holds(),
            format!("no self non-wandering witness at {v} (eps 0.01, k_max 10000)"),
        );
    }
    let g = GapMatrix::build(&sys).expect("gap matrix");
    let zero = sys.sample_index(&State::Real(0.0)).expect("0 sampled");
    for eps in [0.1, 0.05, 0.02, 0.01] {
        let cr = chain_recurrent_set(&g, eps);
        case.check(
            cr.contains(&zero),
            format!("0 chain-recurrent at eps {eps}"),
        );
    }
    case
}

/// On the squaring map, 1 chains to 0 through the ambient grid but never
/// inside the restricted two-point set {0, 1}.
fn square_restriction() -> CaseResult {
    let mut case = CaseResult::new("square-restriction");
    let sys = interval("square", 5);
    let g = GapMatrix::build(&sys).expect("gap matrix");
    let one = sys.sample_index(&State::Real(1.0)).unwrap();
    let zero = sys.sample_index(&State::Real(0.0)).unwrap();
    let ambient = chain_reaches(&g, 0.3, one, zero);
    case.check(ambient.is_some(), "ambient chain 1 -> 0 at eps 0.3");
    if let Some(w) = ambient {
        case.check(w.is_valid(&g, 0.3), "ambient witness validates");
    }
    let endpoints: BTreeSet<usize> = [zero, one].into_iter().collect();
    for eps in [0.99, 0.5, 0.3, 0.1] {
        case.check(
            chain_reaches_within(&g, eps, one, zero, &endpoints).is_none(),
            format!("restricted chain 1 -> 0 blocked at eps {eps}"),
        );
    }
    case
}

/// {0, 3/4} on the logistic map: nested-transitive through ambient points,
/// yet not internally chain transitive.
fn logistic_separation() -> CaseResult {
    let mut case = CaseResult::new("logistic-m-separation");
    let sys = interval("logistic4", 101);
    let g = GapMatrix::build(&sys).expect("gap matrix");
    let m: BTreeSet<usize> = [
        sys.sample_index(&State::Real(0.0)).unwrap(),
        sys.sample_index(&State::Real(0.75)).unwrap(),
    ]
    .into_iter()
    .collect();
    let sched = Schedule::new(vec![0.2, 0.1]).expect("schedule");
    case.check(
        nested_transitive_check(&g, &sched, &m, DecideMode::Greedy, &SearchLimits::default()),
        "nested-transitive over schedule (0.2, 0.1)",
    );
    case.check(
        !internally_chain_transitive(&g, 0.5, &m),
        "not internally chain transitive at eps 0.5",
    );
    case
}

/// Isolated points under the identity: the relation depends on what the
/// ambient discretization offers.
fn identity_isolated_point() -> CaseResult {
    let mut case = CaseResult::new("identity-isolated-point");
    let sched = Schedule::new(vec![0.5]).expect("schedule");
    let coarse = interval("identity", 2);
    let g = GapMatrix::build(&coarse).expect("gap matrix");
    let out = nested_decide(
        &g,
        &sched,
        0,
        1,
        DecideMode::Exact,
        &SearchLimits::default(),
    );
    case.check(out.is_infeasible(), "coarse two-point grid blocks 0 -> 1");

    let fine = interval("identity", 11);
    let g = GapMatrix::build(&fine).expect("gap matrix");
    let one = fine.sample_index(&State::Real(1.0)).unwrap();
    let out = nested_decide(
        &g,
        &sched,
        0,
        one,
        DecideMode::Greedy,
        &SearchLimits::default(),
    );
    case.check(out.is_success(), "0.1-step grid admits 0 -> 1");
    case
}

/// Proper subsets of a rotation: nested-transitive through the ambient
/// cycle, never internally transitive.
fn cycle_proper_subset() -> CaseResult {
    let mut case = CaseResult::new("cycle-proper-subset");
    let sys = cycle(4);
    let g = GapMatrix::build(&sys).expect("gap matrix");
    let m: BTreeSet<usize> = [0, 2].into_iter().collect();
    case.check(
        !internally_chain_transitive(&g, 0.1, &m),
        "{0, 2} not internally transitive at eps 0.1",
    );
    let sched = Schedule::new(vec![0.1, 0.01]).expect("schedule");
    case.check(
        nested_transitive_check(&g, &sched, &m, DecideMode::Greedy, &SearchLimits::default()),
        "{0, 2} nested-transitive via ambient cycle points",
    );
    let full: BTreeSet<usize> = (0..4).collect();
    case.check(
        internally_chain_transitive(&g, 1e-9, &full),
        "full cycle internally transitive at any eps",
    );
    case
}

/// The explicit chain from `1^inf` to `0^inf` through the shifts of
/// `1^n 0^n 1^inf`: endpoint gaps exactly `2^-n`, zeros in between,
/// valid on the whole threshold window `(2^-n, 2^-n+1)`.
fn sigma1_explicit_chain(fault: &FaultInjection) -> CaseResult {
    let mut case = CaseResult::new("sigma1-explicit-chain");
    let scale = fault.sigma1_metric_scale.unwrap_or(1.0);
    for n in 3..=8usize {
        let sys = subshift("sigma1", n);
        let sub = Subshift::new(SubshiftId::Sigma1, n);
        let w = sub.generator(n);
        let mut points = vec![State::Word(Word::constant(1))];
        for j in 0..n {
            points.push(State::Word(w.shift_n(j)));
        }
        points.push(State::Word(Word::constant(0)));
        let chain = StateChain(points);
        let gaps: Vec<f64> = chain.gaps(&sys).into_iter().map(|d| d * scale).collect();
        let expect = 2f64.powi(-(n as i32));
        case.check(
            gaps[0] == expect && *gaps.last().unwrap() == expect,
            format!("endpoint gaps exactly 2^-{n}"),
        );
        case.check(
            gaps[1..gaps.len() - 1].iter().all(|&g| g == 0.0),
            format!("interior gaps vanish for n={n}"),
        );
        let max_gap = gaps.iter().cloned().fold(0.0, f64::max);
        for frac in [1.25, 1.5, 1.75] {
            case.check(
                max_gap < frac * expect,
                format!("chain valid at {frac} * 2^-{n}"),
            );
        }
        case.check(
            max_gap >= expect,
            format!("chain invalid at exactly 2^-{n}"),
        );
    }
    // orbit obstruction: the shifts of 1^5 0^5 1^inf never come closer than
    // 2^-4 to 1^2 0^2 1^inf
    let sub = Subshift::new(SubshiftId::Sigma1, 6);
    let u = sub.generator(2);
    let mut cur = sub.generator(5).shift();
    let mut min = f64::INFINITY;
    loop {
        min = min.min(u.dist(&cur) * scale);
        if cur.is_constant() {
            break;
        }
        cur = cur.shift();
    }
    case.check(min == 2f64.powi(-4), "orbit distance floor is exactly 2^-4");
    case
}

/// On the truncated universe the nested relation from `1^inf` to `0^inf`
/// is infeasible: the exact search names the level where covering
/// collapses.
fn sigma1_nested_infeasible() -> CaseResult {
    let mut case = CaseResult::new("sigma1-nested-infeasible");
    let sys = subshift("sigma1", 6);
    let g = GapMatrix::build(&sys).expect("gap matrix");
    let ones = sys.sample_index(&State::Word(Word::constant(1))).unwrap();
    let zeros = sys.sample_index(&State::Word(Word::constant(0))).unwrap();
    let sched = Schedule::geometric(0.375, 6).expect("schedule");
    let out = nested_decide(
        &g,
        &sched,
        ones,
        zeros,
        DecideMode::Exact,
        &SearchLimits::default(),
    );
    match out {
        NestedOutcome::Infeasible { level, .. } => {
            case.check(
                true,
                format!("exact mode returns infeasible (level {level})"),
            );
        }
        other => case.check(false, format!("expected infeasible, got {other:?}")),
    }
    // the one-level relation still holds at the coarsest threshold
    let single = Schedule::new(vec![0.375]).expect("schedule");
    case.check(
        nested_decide(
            &g,
            &single,
            ones,
            zeros,
            DecideMode::Exact,
            &SearchLimits::default(),
        )
        .is_success(),
        "single coarse level remains feasible",
    );
    case
}

/// The second subshift: every generator word reaches `0^inf` along a
/// zero-cost orbit at every scale, the generators converge to `1^inf`,
/// yet `1^inf` itself fails the nested relation on the truncated universe.
fn sigma2_limit_evidence() -> CaseResult {
    let mut case = CaseResult::new("sigma2-limit-evidence");
    let sys = subshift("sigma2", 8);
    let g = GapMatrix::build(&sys).expect("gap matrix");
    let sub = Subshift::new(SubshiftId::Sigma2, 8);
    let zeros = sys.sample_index(&State::Word(Word::constant(0))).unwrap();
    let ones = sys.sample_index(&State::Word(Word::constant(1))).unwrap();
    let sched = Schedule::geometric(2f64.powi(-9), 6).expect("schedule");
    for k in 1..=8usize {
        let wk = sub.generator(k);
        case.check(
            wk.dist(&Word::constant(1)) == 2f64.powi(-(k as i32)),
            format!("d(w_{k}, 1^inf) = 2^-{k}"),
        );
        let w = sys.sample_index(&State::Word(wk)).unwrap();
        let out = nested_decide(
            &g,
            &sched,
            w,
            zeros,
            DecideMode::Exact,
            &SearchLimits::default(),
        );
        case.check(out.is_success(), format!("w_{k} -> 0^inf succeeds"));
        if let NestedOutcome::Success(fam) = out {
            case.check(
                verify_nested(&fam, &g, &sched),
                format!("w_{k} family verifies"),
            );
        }
    }
    let out = nested_decide(
        &g,
        &sched,
        ones,
        zeros,
        DecideMode::Exact,
        &SearchLimits::default(),
    );
    case.check(
        out.is_infeasible(),
        "limit point 1^inf -> 0^inf infeasible on the truncated universe",
    );
    case
}

/// The containment ladder between the four relation layers, plus the
/// strong-chain set refining the chain-recurrent set across thresholds.
fn containment_ladder() -> CaseResult {
    let mut case = CaseResult::new("containment-ladder");
    let systems: Vec<EvaluableSystem> = vec![
        interval("akin", 101),
        interval("square", 101),
        interval("logistic4", 101),
        interval("identity", 101),
        cycle(7),
        subshift("sigma1", 4),
        subshift("sigma2", 4),
    ];
    for sys in &systems {
        let n = sys.samples().len();
        let k_max = 32;
        let eps = match sys.samples()[0] {
            State::Word(_) => 0.3,
            State::Real(_) => 0.05,
        };
        let stride = (n / 8).max(1);
        let mut violations = Vec::new();
        for x in sys.samples().iter().step_by(stride) {
            for y in sys.samples().iter().step_by(stride) {
                let o = relation_orbit(sys, x, y, k_max);
                let r = relation_recurrence(sys, x, y, eps, k_max);
                let nw = relation_nonwandering(sys, x, y, eps, k_max);
                if o.holds() && !r.holds() {
                    violations.push(format!("O !=> R at ({x}, {y})"));
                }
                if r.holds() && !nw.holds() {
                    violations.push(format!("R !=> N~ at ({x}, {y})"));
                }
                if let Verdict::Found { k, z: Some(zi) } = nw {
                    let z = &sys.samples()[zi];
                    if k >= 1 {
                        // x, z, f(z), ..., f^(k-1)(z), y is an eps-chain
                        let mut pts = vec![x.clone(), z.clone()];
                        let mut cur = z.clone();
                        for _ in 1..k {
                            cur = sys.eval(&cur).expect("orbit state evaluates");
                            pts.push(cur.clone());
                        }
                        pts.push(y.clone());
                        if !StateChain(pts).is_valid(sys, eps) {
                            violations.push(format!("N~ chain invalid at ({x}, {y})"));
                        }
                    } else {
                        // a zero-iteration witness pins y within 2 eps of f(x)
                        if !StateChain(vec![x.clone(), y.clone()]).is_valid(sys, 2.0 * eps) {
                            violations.push(format!("N~ k=0 fallback invalid at ({x}, {y})"));
                        }
                    }
                }
            }
        }
        case.check(
            violations.is_empty(),
            format!(
                "ladder holds on {} ({} pair violations{})",
                sys.name(),
                violations.len(),
                if violations.is_empty() {
                    String::new()
                } else {
                    format!(": {}", violations[0])
                }
            ),
        );
        // strong recurrence refines chain recurrence across thresholds
        let g = GapMatrix::build(sys).expect("gap matrix");
        let v = strong_chain_values(&g);
        let mut ok = true;
        for i in 1..=20 {
            let e = i as f64 * 0.05;
            let scr: BTreeSet<usize> = strong_chain_recurrent_set(&v, e).into_iter().collect();
            let cr: BTreeSet<usize> = chain_recurrent_set(&g, e).into_iter().collect();
            ok &= scr.is_subset(&cr);
        }
        case.check(
            ok,
            format!("strong set refines chain set on {}", sys.name()),
        );
    }
    case
}

type CaseFn = Box<dyn Fn() -> CaseResult>;

/// Runs every case whose name contains `only` (all cases when absent).
pub fn run_paper_suite(only: Option<&str>, fault: &FaultInjection) -> Vec<CaseResult> {
    let cases: Vec<(&str, CaseFn)> = vec![
        ("akin-ntilde-failure", Box::new(akin_nonwandering_failure)),
        ("square-restriction", Box::new(square_restriction)),
        ("logistic-m-separation", Box::new(logistic_separation)),
        ("identity-isolated-point", Box::new(identity_isolated_point)),
        ("cycle-proper-subset", Box::new(cycle_proper_subset)),
        (
            "sigma1-explicit-chain",
            Box::new({
                let fault = fault.clone();
                move || sigma1_explicit_chain(&fault)
            }),
        ),
        (
            "sigma1-nested-infeasible",
            Box::new(sigma1_nested_infeasible),
        ),
        ("sigma2-limit-evidence", Box::new(sigma2_limit_evidence)),
        ("containment-ladder", Box::new(containment_ladder)),
    ];
    cases
        .into_iter()
        .filter(|(name, _)| only.is_none_or(|pat| name.contains(pat)))
        .map(|(_, f)| f())
        .collect()
}

#[derive(Serialize)]
pub struct PaperReport {
    pub schema: u32,
    pub cases: Vec<CaseResult>,
    pub failed: Vec<String>,
}

impl PaperReport {
    pub fn new(cases: Vec<CaseResult>) -> Self {
        let failed = cases
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.clone())
            .collect();
        PaperReport {
            schema: chainscope_core::report::SCHEMA_VERSION,
            cases,
            failed,
        }
    }
}
