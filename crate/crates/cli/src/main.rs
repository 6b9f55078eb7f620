use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use chainscope::config::{RunConfig, ScheduleSpec};
use chainscope::run::{run, EXIT_VALIDATION};

/// Chain-recurrence structure on finite discretizations of compact
/// dynamical systems.
#[derive(Parser)]
#[command(name = "chainscope", version, about)]
struct Cli {
    /// JSON run configuration (same fields as the flags); replaces the
    /// subcommand
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Option<Cmd>,
}

#[derive(Args, Clone)]
struct SystemArgs {
    /// Builtin system: akin | square | logistic4 | identity | cycle |
    /// sigma1 | sigma2
    #[arg(long)]
    system: String,

    /// Grid size for interval systems (>= 2)
    #[arg(long)]
    grid: Option<usize>,

    /// Number of points for the cycle system (>= 2)
    #[arg(long = "cycle-n")]
    cycle_n: Option<usize>,

    /// Universe truncation for the subshifts (>= 1)
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Write the JSON report to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,

    /// Write a DOT rendering of the eps-graph to this file
    #[arg(long)]
    dot: Option<PathBuf>,

    /// Worker threads (results are identical for any value)
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// Orbit, recurrence, and non-wandering relations between two states
    Relations {
        #[command(flatten)]
        system: SystemArgs,
        /// Ball radius for the relation checks
        #[arg(long)]
        eps: f64,
        /// Source state (sample value, word literal, or #index)
        #[arg(long)]
        from: String,
        /// Target state
        #[arg(long)]
        to: String,
        /// Iteration budget
        #[arg(long, default_value_t = 10_000)]
        kmax: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Chain-recurrent set and component structure at a threshold
    Cr {
        #[command(flatten)]
        system: SystemArgs,
        /// Chain threshold
        #[arg(long)]
        eps: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Strong-chain recurrent sets under a metric family
    Strong {
        #[command(flatten)]
        system: SystemArgs,
        /// Cost threshold
        #[arg(long)]
        eps: f64,
        /// Comma list of metric transforms: d | sqrt | cap:C
        #[arg(long, value_delimiter = ',')]
        metrics: Option<Vec<String>>,
        /// Include the dense value matrix (base metric only)
        #[arg(long)]
        dense: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Nested chain families over a decreasing schedule
    Nested {
        #[command(flatten)]
        system: SystemArgs,
        /// Threshold schedule: `geometric:first,count` or `e1,e2,...`
        #[arg(long)]
        schedule: String,
        /// Source state (pair mode)
        #[arg(long)]
        from: Option<String>,
        /// Target state (pair mode)
        #[arg(long)]
        to: Option<String>,
        /// Comma list of states: check transitivity over the whole set
        #[arg(long, value_delimiter = ',')]
        set: Option<Vec<String>>,
        /// greedy | exact
        #[arg(long, default_value = "greedy")]
        mode: String,
        /// Node budget for the exact search
        #[arg(long = "search-nodes")]
        search_nodes: Option<u64>,
        /// Walk-length bound for enumerated witnesses (default 4n)
        #[arg(long = "walk-len")]
        walk_len: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Projected-orbit recurrence location from a seed state
    Locate {
        #[command(flatten)]
        system: SystemArgs,
        /// Seed state
        #[arg(long)]
        from: String,
        /// Also report all terminal components at this threshold
        #[arg(long)]
        eps: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the bundled demonstration suite
    Paper {
        /// Only run cases whose name contains this substring
        #[arg(long)]
        only: Option<String>,
        /// Named fault injection (test hook)
        #[arg(long, hide = true)]
        fault: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn base_config(
    analysis: &str,
    system: Option<&SystemArgs>,
    output: Option<&OutputArgs>,
) -> RunConfig {
    RunConfig {
        analysis: analysis.to_string(),
        system: system.map(|s| s.system.clone()),
        grid_n: system.and_then(|s| s.grid),
        required_points: Vec::new(),
        cycle_n: system.and_then(|s| s.cycle_n),
        truncation_k: system.and_then(|s| s.k),
        eps: None,
        schedule: None,
        from: None,
        to: None,
        set: None,
        mode: None,
        metrics: None,
        k_max: None,
        dense: None,
        out: output.and_then(|o| o.out.clone()),
        dot: output.and_then(|o| o.dot.clone()),
        threads: output.map(|o| o.threads),
        only: None,
        search_max_nodes: None,
        search_max_walk_len: None,
        fault: None,
    }
}

fn to_config(cmd: Cmd) -> RunConfig {
    match cmd {
        Cmd::Relations {
            system,
            eps,
            from,
            to,
            kmax,
            output,
        } => {
            let mut cfg = base_config("relations", Some(&system), Some(&output));
            cfg.eps = Some(eps);
            cfg.from = Some(from);
            cfg.to = Some(to);
            cfg.k_max = Some(kmax);
            cfg
        }
        Cmd::Cr {
            system,
            eps,
            output,
        } => {
            let mut cfg = base_config("cr", Some(&system), Some(&output));
            cfg.eps = Some(eps);
            cfg
        }
        Cmd::Strong {
            system,
            eps,
            metrics,
            dense,
            output,
        } => {
            let mut cfg = base_config("strong", Some(&system), Some(&output));
            cfg.eps = Some(eps);
            cfg.metrics = metrics;
            cfg.dense = Some(dense);
            cfg
        }
        Cmd::Nested {
            system,
            schedule,
            from,
            to,
            set,
            mode,
            search_nodes,
            walk_len,
            output,
        } => {
            let mut cfg = base_config("nested", Some(&system), Some(&output));
            cfg.schedule = Some(ScheduleSpec::Text(schedule));
            cfg.from = from;
            cfg.to = to;
            cfg.set = set;
            cfg.mode = Some(mode);
            cfg.search_max_nodes = search_nodes;
            cfg.search_max_walk_len = walk_len;
            cfg
        }
        Cmd::Locate {
            system,
            from,
            eps,
            output,
        } => {
            let mut cfg = base_config("locate", Some(&system), Some(&output));
            cfg.from = Some(from);
            cfg.eps = eps;
            cfg
        }
        Cmd::Paper {
            only,
            fault,
            output,
        } => {
            let mut cfg = base_config("paper", None, Some(&output));
            cfg.only = only;
            cfg.fault = fault;
            cfg
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match (cli.config, cli.cmd) {
        (Some(path), None) => match RunConfig::load(&path) {
            Ok(cfg) => cfg,
            Err(e) => {
                eprintln!("error: {e:#}");
                return ExitCode::from(EXIT_VALIDATION as u8);
            }
        },
        (None, Some(cmd)) => to_config(cmd),
        (Some(_), Some(_)) => {
            eprintln!("error: pass either --config or a subcommand, not both");
            return ExitCode::from(EXIT_VALIDATION as u8);
        }
        (None, None) => {
            eprintln!("error: a subcommand or --config is required (try --help)");
            return ExitCode::from(EXIT_VALIDATION as u8);
        }
    };
    match run(&cfg) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_VALIDATION as u8)
        }
    }
}
