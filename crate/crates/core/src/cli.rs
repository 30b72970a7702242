//! The `tdopt` command line: `analyze`, `transform`, `solve` and `verify`.
//!
//! Exit codes: 0 success, 1 other failure (including failed verification),
//! 2 infeasible or branch-depth exceeded, 3 unparseable or invalid input,
//! 4 size limit.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::Read;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::config::Limits;
use crate::decomp::{branch_depth_exact, check, verify_extended};
use crate::error::{Error, Result};
use crate::graphs::{dual_graph, primal_graph, treedepth, verify_td_witness};
use crate::io::{self, AnyDecomposition, Artifact};
use crate::ipsolve::{self, solve_bruteforce, SolveMode, SolveStatus};
use crate::matroid::VectorMatroid;
use crate::ratmat::{RatMatrix, Rat};
use crate::rowtransform::{
    entry_complexity_certificate, transform_pipeline, PipelineOutcome, Strategy, TransformResult,
};

#[derive(Parser, Debug)]
#[command(name = "tdopt", version, about = "Branch-depth, row transformations and small integer programs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Cap on the matroid rank for the exact branch-depth search.
    #[arg(long, global = true)]
    pub max_rank: Option<usize>,
    /// Cap on graph size for the exact tree-depth solver.
    #[arg(long, global = true)]
    pub max_vertices: Option<usize>,
    /// Emit JSON (analyze and verify print text otherwise).
    #[arg(long, global = true)]
    pub json: bool,
    /// Emit indented JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Size, rank, entry complexity, tree-depths and branch-depth of a matrix.
    Analyze { file: String },
    /// Row-equivalent matrix of small dual tree-depth.
    Transform {
        file: String,
        #[arg(long)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = TransformMode::Auto)]
        mode: TransformMode,
    },
    /// Solve an integer program given as instance JSON.
    Solve {
        file: String,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        /// Largest acceptable branch-depth; unlimited by default.
        #[arg(long)]
        depth: Option<usize>,
        /// Also enumerate the box and compare optimal values.
        #[arg(long)]
        oracle: bool,
    },
    /// Re-check every invariant of a decomposition or transform artifact.
    Verify { file: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TransformMode {
    Auto,
    Exact,
    Heuristic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Heuristic,
    None,
}

/// What a command wants printed, and its exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BranchDepthExceeded(_) | Error::Inconsistent => 2,
        Error::Parse(_) | Error::InvalidInstance(_) | Error::NonConvex { .. } => 3,
        Error::SizeLimit { .. } => 4,
        _ => 1,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Output::ok(text)
            } else {
                Output {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match execute(&cli) {
        Ok(out) => out,
        Err(e) => Output {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn limits_for(cli: &Cli) -> Result<Limits> {
    let mut limits = Limits::from_env()?;
    if let Some(r) = cli.max_rank {
        limits.max_rank = r;
    }
    if let Some(k) = cli.max_vertices {
        limits.max_vertices = k;
    }
    Ok(limits)
}

fn read_input(path: &str) -> Result<String> {
    let mut text = String::new();
    if path == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Error::Parse(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
    }
    Ok(text)
}

pub fn execute(cli: &Cli) -> Result<Output> {
    let limits = limits_for(cli)?;
    match &cli.command {
        Command::Analyze { file } => {
            let a = io::parse_matrix(&read_input(file)?)?;
            let report = cmd_analyze(&a, &limits)?;
            Ok(Output::ok(if cli.json || cli.pretty {
                io::render(&report, cli.pretty)
            } else {
                analyze_text(&report)
            }))
        }
        Command::Transform { file, depth, mode } => {
            let a = io::parse_matrix(&read_input(file)?)?;
            match cmd_transform(&a, *depth, *mode, &limits)? {
                PipelineOutcome::Transformed(r) => Ok(Output::ok(io::render(&io::transform_to_json(&r), cli.pretty))),
                PipelineOutcome::BranchDepthExceeded { branch_depth, bound } => Ok(Output {
                    code: 2,
                    stdout: io::render(
                        &json!({"status": "exceeded", "branch_depth": branch_depth, "bound": bound}),
                        cli.pretty,
                    ),
                    stderr: format!("branch-depth {branch_depth} exceeds {bound}\n"),
                }),
            }
        }
        Command::Solve {
            file,
            mode,
            depth,
            oracle,
        } => {
            let inst = io::parse_instance(&read_input(file)?)?;
            let report = cmd_solve(&inst, *mode, depth.unwrap_or(usize::MAX), *oracle, &limits)?;
            let infeasible = report["status"] == "infeasible";
            let disagree = report.get("oracle").is_some_and(|o| o["agree"] == false);
            Ok(Output {
                code: if disagree { 1 } else if infeasible { 2 } else { 0 },
                stdout: io::render(&report, cli.pretty),
                stderr: String::new(),
            })
        }
        Command::Verify { file } => {
            let artifact = io::parse_artifact(&read_input(file)?)?;
            let report = cmd_verify(&artifact, &limits);
            let text = if cli.json || cli.pretty {
                io::render(&report.to_json(), cli.pretty)
            } else {
                report.to_text()
            };
            Ok(Output {
                code: if report.passed() { 0 } else { 1 },
                stdout: text,
                stderr: String::new(),
            })
        }
    }
}

/// `m`, `n`, rank, entry complexity, primal and dual tree-depth, and
/// branch-depth. Quantities beyond the exact-search limits are upper bounds
/// flagged `"exact": false`.
pub fn cmd_analyze(a: &RatMatrix, limits: &Limits) -> Result<Value> {
    let td_p = treedepth(&primal_graph(a), limits.max_vertices);
    let td_d = treedepth(&dual_graph(a), limits.max_vertices);
    let matroid = VectorMatroid::from_columns(a);
    let bd = match branch_depth_exact(&matroid, limits) {
        Ok((bd, _)) => json!({"value": bd, "exact": true}),
        Err(Error::SizeLimit { what, .. }) => {
            let outcome = transform_pipeline(a, usize::MAX, Strategy::Heuristic, limits)?;
            let PipelineOutcome::Transformed(r) = outcome else {
                return Err(Error::Internal("heuristic transform reported excess".into()));
            };
            json!({"value": r.reported_depth, "exact": false, "limited_by": what})
        }
        Err(e) => return Err(e),
    };
    Ok(json!({
        "m": a.rows(),
        "n": a.cols(),
        "rank": a.rank(),
        "ec": a.entry_complexity(),
        "td_primal": {"value": td_p.value, "exact": td_p.exact},
        "td_dual": {"value": td_d.value, "exact": td_d.exact},
        "bd": bd,
    }))
}

fn analyze_text(r: &Value) -> String {
    let flagged = |v: &Value| {
        if v["exact"] == true {
            v["value"].to_string()
        } else {
            format!("<= {} (heuristic bound)", v["value"])
        }
    };
    format!(
        "m = {}\nn = {}\nrank = {}\nec = {}\ntd_P = {}\ntd_D = {}\nbd = {}\n",
        r["m"],
        r["n"],
        r["rank"],
        r["ec"],
        flagged(&r["td_primal"]),
        flagged(&r["td_dual"]),
        flagged(&r["bd"]),
    )
}

pub fn cmd_transform(a: &RatMatrix, depth: usize, mode: TransformMode, limits: &Limits) -> Result<PipelineOutcome> {
    let strategy = match mode {
        TransformMode::Auto => Strategy::Auto,
        TransformMode::Exact => Strategy::Exact,
        TransformMode::Heuristic => Strategy::Heuristic,
    };
    transform_pipeline(a, depth, strategy, limits)
}

pub fn cmd_solve(inst: &ipsolve::IPInstance, mode: Mode, depth: usize, oracle: bool, limits: &Limits) -> Result<Value> {
    let mode = match mode {
        Mode::Exact => SolveMode::Exact,
        Mode::Heuristic => SolveMode::Heuristic,
        Mode::None => SolveMode::None,
    };
    let solution = ipsolve::solve(inst, depth, mode, limits)?;
    let mut report = io::solution_to_json(&solution);
    report["mode"] = json!(mode.as_str());
    if oracle {
        let reference = solve_bruteforce(inst, limits)?;
        let agree = match (solution.status, reference.status) {
            (SolveStatus::Optimal, SolveStatus::Optimal) => solution.value == reference.value,
            (a, b) => a == b,
        };
        report["oracle"] = json!({
            "status": reference.status.as_str(),
            "value": reference.value.as_ref().map(Rat::to_string),
            "x": reference.x,
            "agree": agree,
        });
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub kind: &'static str,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    fn record(&mut self, name: &'static str, outcome: std::result::Result<(), String>) {
        let (passed, detail) = match outcome {
            Ok(()) => (true, String::new()),
            Err(d) => (false, d),
        };
        self.checks.push(CheckResult { name, passed, detail });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            if c.passed {
                let _ = writeln!(s, "PASS {}", c.name);
            } else {
                let _ = writeln!(s, "FAIL {}: {}", c.name, c.detail);
            }
        }
        let _ = writeln!(s, "{} {}", self.kind, if self.passed() { "verified" } else { "rejected" });
        s
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind,
            "passed": self.passed(),
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name, "passed": c.passed, "detail": c.detail,
            })).collect::<Vec<_>>(),
        })
    }
}

fn err_string(e: Error) -> String {
    e.to_string()
}

/// Runs every invariant check that applies to the artifact.
pub fn cmd_verify(artifact: &Artifact, limits: &Limits) -> VerifyReport {
    match artifact {
        Artifact::Decomposition { matrix, decomposition } => {
            let m = VectorMatroid::from_columns(matrix);
            let mut report = VerifyReport::default();
            match decomposition {
                AnyDecomposition::Plain(d) => {
                    report.kind = "decomposition";
                    report.record("rank inequality", check(&m, d, limits.max_validate_leaves).map_err(err_string));
                }
                AnyDecomposition::Extended(e) => {
                    report.kind = "extended decomposition";
                    report.record("basis and root-path spans", verify_extended(&m, e).map_err(err_string));
                    report.record(
                        "rank inequality",
                        check(&m, &e.decomposition(), limits.max_validate_leaves).map_err(err_string),
                    );
                }
            }
            report
        }
        Artifact::Transform(r) => verify_transform(r, limits),
    }
}

fn verify_transform(r: &TransformResult, limits: &Limits) -> VerifyReport {
    let mut report = VerifyReport {
        kind: "transform",
        checks: Vec::new(),
    };
    let rows = r.source.rows();
    let kept: BTreeSet<usize> = r.kept_rows.iter().copied().collect();
    let all: BTreeSet<usize> = kept.iter().chain(&r.removed_rows).copied().collect();
    let partition = kept.len() == r.kept_rows.len()
        && kept.len() + r.removed_rows.len() == rows
        && all == (0..rows).collect();
    if !partition {
        report.record("row partition", Err("kept and removed rows do not partition the rows".into()));
        return report;
    }
    let reduced = r.reduced_source();
    let rank = reduced.rank();
    report.record(
        "kept rows span the row space",
        if rank == r.kept_rows.len() && r.source.rank() == rank {
            Ok(())
        } else {
            Err(format!("kept rows have rank {rank}, matrix rank {}", r.source.rank()))
        },
    );

    let m = VectorMatroid::from_columns(&reduced);
    let e = &r.decomposition;
    report.record("extended decomposition", verify_extended(&m, e).map_err(err_string));
    report.record(
        "rank inequality",
        check(&m, &e.decomposition(), limits.max_validate_leaves).map_err(err_string),
    );
    report.record(
        "reported depth",
        if e.depth() == r.reported_depth {
            Ok(())
        } else {
            Err(format!("tree depth {} but reported {}", e.depth(), r.reported_depth))
        },
    );

    let n_rows = r.kept_rows.len();
    let square = r.b.rows() == n_rows && r.b.cols() == n_rows;
    report.record(
        "B regular",
        if square && r.b.rank() == n_rows {
            Ok(())
        } else {
            Err(format!("B is {}x{} with rank {}", r.b.rows(), r.b.cols(), r.b.rank()))
        },
    );
    report.record(
        "B·A = A'",
        match r.b.mul(&reduced) {
            Ok(p) if p == r.a_prime => Ok(()),
            Ok(_) => Err("product differs from A'".into()),
            Err(e) => Err(e.to_string()),
        },
    );

    let non_root: BTreeSet<usize> = (0..e.tree.node_count()).filter(|&v| v != e.tree.root()).collect();
    let nodes_ok = r.row_nodes.len() == n_rows && r.row_nodes.iter().copied().collect::<BTreeSet<_>>() == non_root;
    report.record(
        "B inverts the node basis",
        if !nodes_ok {
            Err("row_nodes is not a bijection onto the non-root nodes".into())
        } else {
            let cols: Vec<Vec<Rat>> = r
                .row_nodes
                .iter()
                .map(|v| e.basis_map.get(v).cloned().unwrap_or_default())
                .collect();
            match RatMatrix::from_columns(n_rows, &cols).and_then(|bg| r.b.mul(&bg)) {
                Ok(p) if is_identity(&p) => Ok(()),
                Ok(_) => Err("B times the basis matrix is not the identity".into()),
                Err(e) => Err(e.to_string()),
            }
        },
    );
    if nodes_ok && r.a_prime.rows() == n_rows {
        let cert = entry_complexity_certificate(&reduced, r);
        report.record(
            "column support on root paths",
            if cert.supports_on_root_paths {
                Ok(())
            } else {
                Err("a column of A' has support off its root path".into())
            },
        );
    }

    let f = &r.witness_forest;
    report.record(
        "witness forest",
        if f.len() != r.a_prime.rows() {
            Err(format!("forest has {} vertices for {} rows", f.len(), r.a_prime.rows()))
        } else if f.height() > r.reported_depth {
            Err(format!("forest height {} exceeds depth {}", f.height(), r.reported_depth))
        } else if !verify_td_witness(&dual_graph(&r.a_prime), f) {
            Err("closure misses an edge of the dual graph".into())
        } else {
            Ok(())
        },
    );

    if let Some(bd) = r.branch_depth {
        report.record(
            "branch-depth",
            match branch_depth_exact(&m, limits) {
                Ok((found, _)) if found == bd && bd == r.reported_depth => Ok(()),
                Ok((found, _)) => Err(format!(
                    "claimed {bd}, depth {}, recomputed {found}",
                    r.reported_depth
                )),
                Err(Error::SizeLimit { .. }) => Ok(()),
                Err(e) => Err(e.to_string()),
            },
        );
    }
    report
}

fn is_identity(p: &RatMatrix) -> bool {
    (0..p.rows()).all(|i| {
        (0..p.cols()).all(|j| {
            let v = p.get(i, j);
            if i == j {
                v.is_one()
            } else {
                v.is_zero()
            }
        })
    })
}
