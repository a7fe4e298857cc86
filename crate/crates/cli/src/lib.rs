//! Command-line front end for `gsio-core`.
//!
//! [`run`] parses an argument vector and returns the exit status together
//! with everything the process would print, so the binary is a thin wrapper
//! and tests can drive commands in-process.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use gsio_core::{
    bounds_dedicated, bounds_direct_measure, check_gsio_both, check_gsio_digraph, check_gsio_dm,
    decomposition_to_dot, digraph_to_dot, dm_decompose, exact_min_with_cap, gen_random,
    min_struct_obs, parse_system, polycase, reduce_setcover, serialize_system, two_stage, BipartiteGraph, Error,
    GsioVerdict, RandomSpec, SetCoverInstance, StructuredSystem, SystemDigraph, DEFAULT_EXACT_CAP,
};
use serde_json::Value;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Parser)]
#[command(name = "gsio", version, about = "Observability of states and unknown inputs in structured systems")]
struct Cli {
    /// Print a human-readable summary on standard error.
    #[arg(short, long, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Dm,
    Digraph,
    Both,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide generic state-and-input observability.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// Compute a dedicated sensor placement (two-stage heuristic by default).
    Place {
        file: PathBuf,
        /// Exhaustive minimum instead of the heuristic.
        #[arg(long)]
        exact: bool,
        /// Allow dedicated sensors on inputs in the exhaustive search.
        #[arg(long, requires = "exact")]
        allow_inputs: bool,
        /// Largest number of candidate positions the exhaustive search accepts.
        #[arg(long, default_value_t = DEFAULT_EXACT_CAP, requires = "exact")]
        cap: usize,
    },
    /// Lower and upper bounds on the minimum number of sensors.
    Bounds {
        file: PathBuf,
        /// Inputs may be measured directly.
        #[arg(long)]
        direct_measure: bool,
    },
    /// Placement for single-input systems with self-loops on every state.
    Polycase { file: PathBuf },
    /// Minimum dedicated outputs for structural observability of A.
    Minobs { file: PathBuf },
    /// Build the system associated with a set-cover instance.
    Reduce { file: PathBuf },
    /// Emit a seeded random system.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        density: f64,
        #[arg(long)]
        dedicated: bool,
        #[arg(long)]
        self_loops: bool,
        #[arg(long)]
        seed: u64,
    },
    /// Graphviz export of the system digraph or of its DM decomposition.
    Dot {
        file: PathBuf,
        #[arg(long)]
        dm: bool,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_input_error() { EXIT_INPUT } else { EXIT_SOLVER };
        Failure { code, message: e.to_string() }
    }
}

struct Report {
    stdout: String,
    summary: String,
    code: i32,
}

impl Report {
    fn json(value: &Value, summary: String) -> Self {
        let mut stdout = serde_json::to_string_pretty(value).expect("reports serialize");
        stdout.push('\n');
        Report { stdout, summary, code: EXIT_OK }
    }
}

/// Runs one command. The first element of `args` is the program name.
pub fn run<I, T>(args: I) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CommandOutcome { exit_code: EXIT_INPUT, stdout: String::new(), stderr: text }
            } else {
                CommandOutcome { exit_code: EXIT_OK, stdout: text, stderr: String::new() }
            };
        }
    };
    match dispatch(&cli.command) {
        Ok(r) => CommandOutcome {
            exit_code: r.code,
            stdout: r.stdout,
            stderr: if cli.verbose || r.code != EXIT_OK { format!("{}\n", r.summary) } else { String::new() },
        },
        Err(f) => CommandOutcome {
            exit_code: f.code,
            stdout: String::new(),
            stderr: format!("error: {}\n", f.message),
        },
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_INPUT,
        message: format!("{}: {e}", path.display()),
    })
}

fn load(path: &Path) -> Result<StructuredSystem, Failure> {
    parse_system(&read(path)?).map_err(|e| Failure {
        code: EXIT_INPUT,
        message: format!("{}: {e}", path.display()),
    })
}

fn names(prefix: char, v: &[usize]) -> String {
    const SHOWN: usize = 8;
    let mut parts: Vec<String> = v.iter().take(SHOWN).map(|i| format!("{prefix}{}", i + 1)).collect();
    if v.len() > SHOWN {
        parts.push(format!("... {} more", v.len() - SHOWN));
    }
    format!("{{{}}}", parts.join(", "))
}

fn dispatch(command: &Command) -> Result<Report, Failure> {
    match command {
        Command::Check { file, method } => {
            let sys = load(file)?;
            let verdict = match method {
                Method::Dm => check_gsio_dm(&sys),
                Method::Digraph => check_gsio_digraph(&sys),
                Method::Both => check_gsio_both(&sys),
            };
            let mut report = Report::json(&verdict.to_json(), check_summary(&verdict));
            if verdict.routes_disagree() {
                report.code = EXIT_INTERNAL;
                report.summary = format!("internal error: verification routes disagree\n{}", report.summary);
            }
            Ok(report)
        }
        Command::Place { file, exact, allow_inputs, cap } => {
            let sys = load(file)?;
            let p = if *exact { exact_min_with_cap(&sys, *allow_inputs, *cap)? } else { two_stage(&sys)? };
            let summary = format!(
                "{} sensors: states {}, inputs {}",
                p.total(),
                names('x', &p.measured_states()),
                names('u', &p.measured_inputs())
            );
            Ok(Report::json(&p.to_json(), summary))
        }
        Command::Bounds { file, direct_measure } => {
            let sys = load(file)?;
            let b = if *direct_measure { bounds_direct_measure(&sys)? } else { bounds_dedicated(&sys)? };
            let summary = format!("minimum lies in [{}, {}]; witness uses {}", b.lower, b.upper, b.witness.total());
            Ok(Report::json(&b.to_json(), summary))
        }
        Command::Polycase { file } => {
            let sys = load(file)?;
            let p = polycase(&sys)?;
            let summary = format!("{} sensors: {}", p.total(), names('x', &p.measured_states()));
            Ok(Report::json(&p.to_json(), summary))
        }
        Command::Minobs { file } => {
            let sys = load(file)?;
            let r = min_struct_obs(sys.a(), None)?;
            let summary = format!("{} dedicated outputs: {}", r.h, names('x', &r.witness));
            Ok(Report::json(&r.to_json(), summary))
        }
        Command::Reduce { file } => {
            let text = read(file)?;
            let inst = SetCoverInstance::parse(&text).map_err(|e| Failure {
                code: EXIT_INPUT,
                message: format!("{}: {e}", file.display()),
            })?;
            let red = reduce_setcover(&inst)?;
            let summary = format!(
                "{} elements, {} subsets -> n = {}, q = {}, m = {}",
                inst.p(),
                inst.q(),
                red.system.n(),
                red.system.q(),
                red.system.m()
            );
            Ok(Report::json(&red.to_json(), summary))
        }
        Command::Gen { n, q, density, dedicated, self_loops, seed } => {
            let sys = gen_random(&RandomSpec {
                n: *n,
                q: *q,
                density: *density,
                dedicated_inputs: *dedicated,
                self_loops: *self_loops,
                seed: *seed,
            })
            .map_err(|e| Failure { code: EXIT_INPUT, message: e.to_string() })?;
            let summary = format!("n = {}, q = {}, nnz(A) = {}", sys.n(), sys.q(), sys.a().nnz());
            let mut stdout = serialize_system(&sys);
            stdout.push('\n');
            Ok(Report { stdout, summary, code: EXIT_OK })
        }
        Command::Dot { file, dm } => {
            let sys = load(file)?;
            let stdout = if *dm {
                let g = BipartiteGraph::from_system(&sys, true);
                decomposition_to_dot(&g, &dm_decompose(&g))
            } else {
                digraph_to_dot(&SystemDigraph::from_system(&sys))
            };
            Ok(Report { stdout, summary: String::from("dot written"), code: EXIT_OK })
        }
    }
}

fn check_summary(v: &GsioVerdict) -> String {
    let mut lines = vec![format!("GSIO: {}", v.overall)];
    if let Some(dm) = &v.dm {
        lines.push(format!(
            "dm route: left-perfect {}, s-edge components {:?}",
            dm.cond1,
            dm.s_edge_components.iter().map(|c| c + 1).collect::<Vec<_>>()
        ));
    }
    if let Some(dg) = &v.digraph {
        lines.push(format!(
            "digraph route: theta {} ({}), unreached {}, offending {}",
            dg.theta,
            dg.cond1,
            names('x', &dg.unreached_states),
            names('x', &dg.offending)
        ));
    }
    lines.join("\n")
}
