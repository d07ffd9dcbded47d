//! File-based experiment pipeline behind the `quasienergy` binary.
//!
//! Exit codes: 0 success, 1 unreadable/unwritable or malformed input file,
//! 2 bad arguments (usage on stderr), 3 internal consistency failure,
//! 4 failed axiom audit or `--assert-triangle`, 5 training diverged.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::audit::{audit_table, DEFAULT_TOLERANCE, DEFAULT_TRIPLE_BUDGET};
use crate::cost::{Finite, Infinite};
use crate::env::{make_fixture, make_gridworld, make_one_way_ring, make_random_digraph};
use crate::error::Error;
use crate::format::{parse_system, parse_table, serialize_system, serialize_table, to_pretty};
use crate::model::{EnergyModel, HeadSpec, DEFAULT_EPSILON};
use crate::solver::{all_pairs_energy, EnergyTable};
use crate::system::{DirectedTransitionSystem, StateId};
use crate::train::{
    evaluate_model, qrl_style_fit, supervised_fit, CappedTable, EvalMetrics, PairEnergy,
    TrainConfig, TrainRecipe, TransitionDataset,
};
use crate::value::value_iteration;

/// Tolerance for the solver / value-iteration cross-check in `solve --goal`.
pub const ORACLE_TOLERANCE: f64 = 1e-9;
/// `eval --assert-triangle` threshold.
pub const TRIANGLE_ASSERT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "quasienergy",
    version,
    about = "Least-action energies, quasimetric audits and energy-model fitting"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a transition-system file
    Gen {
        #[command(subcommand)]
        generator: Generator,
    },
    /// Compute the all-pairs least-action energy table
    Solve(SolveArgs),
    /// Check an energy table against the quasimetric axioms
    Audit(AuditArgs),
    /// Fit an energy model to a system
    Train(TrainArgs),
    /// Score a checkpoint (or a tabulated energy) against the solved system
    Eval(EvalArgs),
}

#[derive(Debug, Subcommand)]
pub enum Generator {
    /// A named fixture system
    Fixture {
        #[arg(long)]
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// 4-neighbour grid with additive wind and one-way doors
    Gridworld {
        #[arg(long)]
        w: usize,
        #[arg(long)]
        h: usize,
        /// Wind as `wx,wy`, each strictly inside (-1, 1)
        #[arg(long, default_value = "0,0", value_parser = parse_pair::<f64>, allow_hyphen_values = true)]
        wind: (f64, f64),
        /// One-way door `a:b` (passable from a to b only); repeatable
        #[arg(long = "door", value_parser = parse_door)]
        doors: Vec<(usize, usize)>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Unit-cost directed cycle
    Ring {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded random digraph
    Digraph {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        seed: u64,
        /// Cost range `lo,hi` with 0 < lo <= hi
        #[arg(long, default_value = "1,10", value_parser = parse_pair::<f64>)]
        costs: (f64, f64),
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub system: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also run value iteration into this goal and check it against the table
    #[arg(long)]
    pub goal: Option<usize>,
    /// Where to write the cost-to-go (stdout when omitted)
    #[arg(long, requires = "goal")]
    pub value_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    pub table: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Report the symmetric obstruction bound at this cap
    #[arg(long)]
    pub cap: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    pub tol: f64,
    /// Largest n^3 checked exhaustively by the triangle audit
    #[arg(long, default_value_t = DEFAULT_TRIPLE_BUDGET)]
    pub budget: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Supervised,
    Qrl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HeadKind {
    Sumrelu,
    Maxrelu,
    L2,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    pub system: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Supervised)]
    pub mode: Mode,
    /// Model shape and optimizer settings from a recipe file; replaces the
    /// model and optimizer flags below
    #[arg(long)]
    pub recipe: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = HeadKind::Sumrelu)]
    pub head: HeadKind,
    #[arg(long, default_value_t = 4)]
    pub dim: usize,
    /// Symmetric term weight for the asymmetric heads
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    pub epsilon: f64,
    /// Output scale of the l2 head
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    #[arg(long, default_value_t = 0.05)]
    pub lr: f64,
    #[arg(long, default_value_t = 2000)]
    pub steps: usize,
    /// Pairs per step; 0 means every ordered pair
    #[arg(long, default_value_t = 0)]
    pub batch_size: usize,
    #[arg(long, default_value_t = 100.0)]
    pub lambda: f64,
    /// Surrogate for unreachable targets; defaults to 10x the largest finite energy
    #[arg(long)]
    pub cap: Option<f64>,
    /// Seeds pair sampling and, unless `--init-seed` is given, initialization
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub init_seed: Option<u64>,
    #[arg(long, default_value_t = 100)]
    pub log_every: usize,
    /// Loss curve as `step,term,value` CSV
    #[arg(long)]
    pub loss_csv: Option<PathBuf>,
    #[arg(long)]
    pub metrics_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    pub system: PathBuf,
    #[arg(long, conflicts_with = "table", required_unless_present = "table")]
    pub checkpoint: Option<PathBuf>,
    /// Evaluate a tabulated energy (unreachable entries capped) instead of a model
    #[arg(long)]
    pub table: Option<PathBuf>,
    #[arg(long)]
    pub cap: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Exit 4 when the model breaks the triangle inequality by more than 1e-9
    #[arg(long)]
    pub assert_triangle: bool,
}

fn parse_pair<T: std::str::FromStr>(s: &str) -> Result<(T, T), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `a,b`, got {s:?}"))?;
    let p = |v: &str| {
        v.trim()
            .parse::<T>()
            .map_err(|_| format!("bad number {v:?}"))
    };
    Ok((p(a)?, p(b)?))
}

fn parse_door(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected `a:b`, got {s:?}"))?;
    let p = |v: &str| {
        v.trim()
            .parse::<usize>()
            .map_err(|_| format!("bad cell {v:?}"))
    };
    Ok((p(a)?, p(b)?))
}

/// Failure of one command, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    Lib(Error),
    Mismatch(String),
    AxiomFailure,
    TriangleAssertion(f64),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Lib(e) => match e {
                Error::Parse { .. }
                | Error::NegativeCost { .. }
                | Error::NonFiniteCost { .. }
                | Error::DuplicateEdge { .. }
                | Error::EdgeOutOfRange { .. } => 1,
                Error::NonFiniteLoss { .. } => 5,
                Error::BudgetExceeded { .. } | Error::NoConvergence { .. } | Error::Stuck(_) => 3,
                _ => 2,
            },
            CliError::Mismatch(_) => 3,
            CliError::AxiomFailure | CliError::TriangleAssertion(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Mismatch(m) => write!(f, "oracle mismatch: {m}"),
            CliError::AxiomFailure => write!(f, "quasimetric audit failed"),
            CliError::TriangleAssertion(v) => {
                write!(
                    f,
                    "triangle violation {v} exceeds {TRIANGLE_ASSERT_TOLERANCE}"
                )
            }
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes to `path`, or to `stdout` when there is none.
fn emit(path: Option<&Path>, text: &str, stdout: &mut dyn Write) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}

fn load_system(path: &Path) -> CliResult<DirectedTransitionSystem> {
    let sys = parse_system(&read(path)?)?;
    sys.validate()?;
    Ok(sys)
}

fn default_cap(t: &EnergyTable) -> f64 {
    match t.max_finite() {
        Some(m) if m > 0.0 => 10.0 * m,
        _ => 10.0,
    }
}

fn cmd_gen(g: &Generator, stdout: &mut dyn Write) -> CliResult<()> {
    let (sys, out) = match g {
        Generator::Fixture { name, out } => (make_fixture(name)?, out),
        Generator::Gridworld {
            w,
            h,
            wind,
            doors,
            out,
        } => (make_gridworld(*w, *h, doors, *wind)?, out),
        Generator::Ring { n, out } => (make_one_way_ring(*n)?, out),
        Generator::Digraph {
            n,
            p,
            seed,
            costs,
            out,
        } => (make_random_digraph(*n, *p, *costs, *seed)?, out),
    };
    emit(out.as_deref(), &serialize_system(&sys), stdout)
}

fn cmd_solve(a: &SolveArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let sys = load_system(&a.system)?;
    let table = all_pairs_energy(&sys)?;
    emit(a.out.as_deref(), &serialize_table(&table), stdout)?;
    let Some(goal) = a.goal else {
        return Ok(());
    };
    let goal = StateId(goal);
    sys.check_state(goal)?;
    // Gauss-Seidel needs at most one sweep per path edge plus a confirming sweep
    let v = value_iteration(&sys, goal, 1e-12, 2 * sys.n_states() + 2)?;
    emit(a.value_out.as_deref(), &to_pretty(&v), stdout)?;
    for (s, &vs) in v.values.iter().enumerate() {
        let e = table.get(s, goal.0);
        let agree = match (vs, e) {
            (Finite(a), Finite(b)) => (a - b).abs() <= ORACLE_TOLERANCE,
            (Infinite, Infinite) => true,
            _ => false,
        };
        if !agree {
            return Err(CliError::Mismatch(format!(
                "V({s}) = {vs} but E({s}, {}) = {e}",
                goal.0
            )));
        }
    }
    Ok(())
}

fn cmd_audit(a: &AuditArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let table = parse_table(&read(&a.table)?)?;
    let report = audit_table(&table, a.tol, a.budget, a.seed, a.cap)?;
    emit(a.out.as_deref(), &to_pretty(&report), stdout)?;
    if report.passed {
        Ok(())
    } else {
        Err(CliError::AxiomFailure)
    }
}

fn metrics_line(m: &EvalMetrics) -> String {
    let sp = m
        .spearman_finite
        .map_or_else(|| "none".to_string(), |v| format!("{v:.6}"));
    format!(
        "mae_finite={:.6} spearman_finite={sp} constraint_violation_mean={:.6} triangle_violation_max={:.3e} one_way_max_error={:.6}\n",
        m.mae_finite, m.constraint_violation_mean, m.triangle_violation_max, m.one_way_max_error
    )
}

fn recipe_from_flags(a: &TrainArgs, cap: f64) -> TrainRecipe {
    let head = match a.head {
        HeadKind::Sumrelu => HeadSpec::SumReluAsym { epsilon: a.epsilon },
        HeadKind::Maxrelu => HeadSpec::MaxReluAsym { epsilon: a.epsilon },
        HeadKind::L2 => HeadSpec::SymmetricL2 { scale: a.scale },
    };
    TrainRecipe {
        dim: a.dim,
        head,
        init_seed: a.init_seed.unwrap_or(a.seed),
        config: TrainConfig {
            learning_rate: a.lr,
            steps: a.steps,
            batch_size: a.batch_size,
            lambda_penalty: a.lambda,
            cap,
            seed: a.seed,
            log_every: a.log_every,
        },
    }
}

fn cmd_train(a: &TrainArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let sys = load_system(&a.system)?;
    let oracle = all_pairs_energy(&sys)?;
    let recipe = match &a.recipe {
        Some(p) => serde_json::from_str::<TrainRecipe>(&read(p)?).map_err(Error::from)?,
        None => recipe_from_flags(a, a.cap.unwrap_or_else(|| default_cap(&oracle))),
    };
    let data = TransitionDataset::from_system(&sys);
    let init = EnergyModel::init(sys.n_states(), recipe.dim, recipe.head, recipe.init_seed)?;
    let (model, curve) = match a.mode {
        Mode::Supervised => supervised_fit(&init, &oracle, &recipe.config)?,
        Mode::Qrl => qrl_style_fit(&init, &data, &recipe.config)?,
    };
    emit(Some(&a.out), &to_pretty(&model), stdout)?;
    if let Some(p) = &a.loss_csv {
        emit(Some(p), &curve.to_csv(), stdout)?;
    }
    let metrics = evaluate_model(
        &model,
        &oracle,
        &data,
        recipe.config.cap,
        recipe.config.seed,
    )?;
    if let Some(p) = &a.metrics_out {
        emit(Some(p), &to_pretty(&metrics), stdout)?;
    }
    emit(None, &metrics_line(&metrics), stdout)
}

fn cmd_eval(a: &EvalArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let sys = load_system(&a.system)?;
    let oracle = all_pairs_energy(&sys)?;
    let cap = a.cap.unwrap_or_else(|| default_cap(&oracle));
    let data = TransitionDataset::from_system(&sys);
    let tabulated;
    let model;
    let energy: &dyn PairEnergy = match (&a.checkpoint, &a.table) {
        (Some(p), _) => {
            model = serde_json::from_str::<EnergyModel>(&read(p)?).map_err(Error::from)?;
            &model
        }
        (None, Some(p)) => {
            tabulated = parse_table(&read(p)?)?;
            &CappedTable {
                table: &tabulated,
                cap,
            }
        }
        (None, None) => unreachable!("clap requires one of --checkpoint or --table"),
    };
    let metrics = evaluate_model(energy, &oracle, &data, cap, a.seed)?;
    emit(a.out.as_deref(), &to_pretty(&metrics), stdout)?;
    if a.assert_triangle && metrics.triangle_violation_max > TRIANGLE_ASSERT_TOLERANCE {
        return Err(CliError::TriangleAssertion(metrics.triangle_violation_max));
    }
    Ok(())
}

/// Runs one parsed command.
pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        Command::Gen { generator } => cmd_gen(generator, stdout),
        Command::Solve(a) => cmd_solve(a, stdout),
        Command::Audit(a) => cmd_audit(a, stdout),
        Command::Train(a) => cmd_train(a, stdout),
        Command::Eval(a) => cmd_eval(a, stdout),
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = if e.use_stderr() {
                e.render().to_string()
            } else {
                e.to_string()
            };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.exit_code() == 2 {
                let _ = writeln!(stderr, "see `quasienergy --help` for usage");
            }
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(
            std::iter::once("quasienergy").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn gen_fixture_to_stdout() {
        let (code, out, _) = run_args(&["gen", "fixture", "--name", "ow2"]);
        assert_eq!(code, 0);
        assert_eq!(out, serialize_system(&make_fixture("ow2").unwrap()));
    }

    #[test]
    fn usage_errors_exit_two() {
        let (code, _, err) = run_args(&["gen", "ring"]);
        assert_eq!(code, 2);
        assert!(err.contains("Usage"), "{err}");
        let (code, _, err) = run_args(&["gen", "fixture", "--name", "nope"]);
        assert_eq!(code, 2);
        assert!(err.contains("nope"));
        let (code, _, _) = run_args(&["gen", "gridworld", "--w", "2", "--h", "2", "--wind", "1,0"]);
        assert_eq!(code, 2);
        let (code, _, _) = run_args(&["frobnicate"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_args(&["train", "--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("--mode"));
    }

    #[test]
    fn pair_parsers() {
        assert_eq!(parse_pair::<f64>("0.5,-0.25"), Ok((0.5, -0.25)));
        assert!(parse_pair::<f64>("0.5").is_err());
        assert_eq!(parse_door("3:4"), Ok((3, 4)));
        assert!(parse_door("3-4").is_err());
    }

    #[test]
    fn exit_code_mapping() {
        assert_eq!(
            CliError::from(Error::NonFiniteLoss { step: 3 }).exit_code(),
            5
        );
        assert_eq!(
            CliError::from(Error::UnknownFixture("x".into())).exit_code(),
            2
        );
        assert_eq!(
            CliError::from(Error::Parse {
                line: 1,
                column: 1,
                message: String::new()
            })
            .exit_code(),
            1
        );
        assert_eq!(CliError::Mismatch(String::new()).exit_code(), 3);
        assert_eq!(CliError::AxiomFailure.exit_code(), 4);
    }
}
