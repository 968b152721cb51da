//! Command-line harness: runs walks from process-spec files, runs the
//! verification suites and writes the comparison data sets.
//!
//! Exit codes: 0 on success, 1 when a verification check fails, 2 on any
//! usage, configuration or domain error.

pub mod emit;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use icowalk::baseline::{classical_rw_distribution, hadamard_walk_distribution};
use icowalk::coin::{load_process_spec, ProcessSpec};
use icowalk::engine::evolve_composition;
use icowalk::measure::{distribution, project_coin, project_order, Distribution};
use icowalk::state::{
    balanced_order, make_initial_state, Chirality, ConditionalState, SystemState,
};
use icowalk::suite::{run_suite, Suite, UniformRun};
use icowalk::switch::apply_nswitch;
use icowalk::{Complex64, WalkError};

use emit::{distribution_text, reports_text, BranchLabel, Format};

#[derive(Parser, Debug)]
#[command(
    name = "icowalk",
    version,
    about = "Quantum walks with switched coin processes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the processes in one cyclic ordering.
    Definite(DefiniteArgs),
    /// Two processes under the 2-switch.
    Switch2(SwitchArgs),
    /// N processes under the cyclic switch.
    Nswitch(SwitchArgs),
    /// Uniform-distribution protocol: one Hadamard process, N−1 diagonal ones.
    Uniform(UniformArgs),
    /// Run verification suites and write their reports.
    Verify(VerifyArgs),
    /// Classical, Hadamard and switched distributions for each step count.
    Figure1(FigureArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum CoinArg {
    Right,
    Left,
}

impl From<CoinArg> for Chirality {
    fn from(c: CoinArg) -> Self {
        match c {
            CoinArg::Right => Chirality::Forward,
            CoinArg::Left => Chirality::Backward,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FormatArg {
    Json,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct WalkerArgs {
    /// Process-spec JSON document.
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    initial_pos: i64,
    #[arg(long, value_enum, default_value = "right")]
    initial_coin: CoinArg,
    /// Keep only this coin outcome; both are summed otherwise.
    #[arg(long, value_enum)]
    coin_outcome: Option<CoinArg>,
    /// Emit raw branch populations instead of renormalizing.
    #[arg(long)]
    unnormalized: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct DefiniteArgs {
    #[command(flatten)]
    walker: WalkerArgs,
    /// Cyclic ordering index: processes n, n+1, … applied in that order.
    #[arg(long, default_value_t = 0)]
    order: usize,
}

#[derive(Args, Debug)]
struct SwitchArgs {
    #[command(flatten)]
    walker: WalkerArgs,
    /// Keep only this Fourier outcome of the order register; all are summed
    /// otherwise.
    #[arg(long)]
    order_outcome: Option<usize>,
}

#[derive(Args, Debug)]
struct UniformArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    sigma: usize,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    initial_pos: i64,
    /// Keep only this Fourier outcome; all successful outcomes are merged
    /// otherwise.
    #[arg(long)]
    order_outcome: Option<usize>,
    #[arg(long)]
    unnormalized: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct FigureArgs {
    /// Comma-separated even step counts.
    #[arg(long, value_delimiter = ',', required = true)]
    steps: Vec<usize>,
    /// Output directory, created if missing.
    #[arg(long, default_value = "figure1")]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Walk(WalkError),
    Io(PathBuf, std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Walk(e) => write!(f, "{e}"),
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
        }
    }
}

impl From<WalkError> for CliError {
    fn from(e: WalkError) -> Self {
        CliError::Walk(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (program name first) and runs the subcommand.
pub fn run_cli<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<i32> {
    match command {
        Command::Definite(a) => run_definite(a, stdout),
        Command::Switch2(a) => run_switch(a, Some(2), stdout),
        Command::Nswitch(a) => run_switch(a, None, stdout),
        Command::Uniform(a) => run_uniform(a, stdout),
        Command::Verify(a) => run_verify(a, stdout, stderr),
        Command::Figure1(a) => run_figure1(a, stderr),
    }
}

fn write_output(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(path.to_path_buf(), e)),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(PathBuf::from("<stdout>"), e)),
    }
}

fn load_config(path: &Path) -> CliResult<Vec<ProcessSpec>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
    Ok(load_process_spec(&text)?)
}

/// Sums the selected branches' populations into one distribution.
fn merge_branches(
    branches: &[ConditionalState],
    origin: i64,
    normalize: bool,
) -> CliResult<(Distribution, f64)> {
    let lattice = branches[0].lattice();
    let mut values = vec![0.0; lattice.len()];
    for b in branches {
        for (v, (_, p)) in values.iter_mut().zip(distribution(b, false)?.iter()) {
            *v += p;
        }
    }
    let mass: f64 = values.iter().sum();
    let d = Distribution::from_values(origin, lattice.min_site(), values, normalize)?;
    Ok((d, mass))
}

fn restrict_coin(state: ConditionalState, coin: Option<CoinArg>) -> ConditionalState {
    match coin {
        Some(c) => project_coin(&state, c.into()),
        None => state,
    }
}

fn emit_walk(
    branches: Vec<ConditionalState>,
    walker: &WalkerArgs,
    order_outcome: Option<usize>,
    stdout: &mut dyn Write,
) -> CliResult<i32> {
    let branches: Vec<_> = branches
        .into_iter()
        .map(|b| restrict_coin(b, walker.coin_outcome))
        .collect();
    let (d, mass) = merge_branches(&branches, walker.initial_pos, !walker.unnormalized)?;
    let label = BranchLabel {
        order_outcome,
        coin_outcome: walker.coin_outcome.map(Into::into),
    };
    let text = distribution_text(&d, label, mass, walker.output.format.into());
    write_output(&text, walker.output.out.as_deref(), stdout)?;
    Ok(0)
}

fn run_definite(a: DefiniteArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let w = &a.walker;
    let ps = load_config(&w.config)?;
    let steps = ps.iter().map(ProcessSpec::steps).sum();
    let one = [Complex64::new(1.0, 0.0)];
    let init = make_initial_state(1, &one, w.initial_pos, w.initial_coin.into(), steps)?;
    let state = evolve_composition(init, &ps, a.order)?;
    emit_walk(
        vec![ConditionalState::from_branch(&state, 0)],
        w,
        None,
        stdout,
    )
}

fn run_switch(a: SwitchArgs, expected: Option<usize>, stdout: &mut dyn Write) -> CliResult<i32> {
    let w = &a.walker;
    let ps = load_config(&w.config)?;
    if let Some(n) = expected {
        if ps.len() != n {
            return Err(CliError::Usage(format!(
                "switch2 needs exactly {n} processes, config has {}",
                ps.len()
            )));
        }
    }
    let n = ps.len();
    let steps = ps.iter().map(ProcessSpec::steps).sum();
    let init = make_initial_state(
        n,
        &balanced_order(n),
        w.initial_pos,
        w.initial_coin.into(),
        steps,
    )?;
    let state = apply_nswitch(init, &ps)?;
    let branches = fourier_branches(&state, a.order_outcome)?;
    emit_walk(branches, w, a.order_outcome, stdout)
}

fn fourier_branches(state: &SystemState, only: Option<usize>) -> CliResult<Vec<ConditionalState>> {
    let outcomes: Vec<usize> = match only {
        Some(m) => vec![m],
        None => (0..state.order_dim()).collect(),
    };
    Ok(outcomes
        .into_iter()
        .map(|m| project_order(state, m))
        .collect::<icowalk::Result<_>>()?)
}

fn run_uniform(a: UniformArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let run = UniformRun::new(a.n, a.sigma, a.initial_pos)?;
    let outcomes: Vec<usize> = match a.order_outcome {
        Some(m) => vec![m],
        None => (0..a.n).collect(),
    };
    let branches = outcomes
        .iter()
        .map(|&m| run.branch(m, Chirality::Backward))
        .collect::<icowalk::Result<Vec<_>>>()?;
    let (d, mass) = merge_branches(&branches, a.initial_pos, !a.unnormalized)?;
    let label = BranchLabel {
        order_outcome: a.order_outcome,
        coin_outcome: Some(Chirality::Backward),
    };
    let text = distribution_text(&d, label, mass, a.output.format.into());
    write_output(&text, a.output.out.as_deref(), stdout)?;
    Ok(0)
}

fn run_verify(a: VerifyArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<i32> {
    let suite: Suite = a.suite.parse().map_err(CliError::Usage)?;
    if a.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let reports = run_suite(suite, a.seed, a.trials)?;
    for r in &reports {
        let _ = writeln!(
            stderr,
            "{} {} max_deviation={:e} tolerance={:e}",
            if r.passed { "PASS" } else { "FAIL" },
            r.check,
            r.max_deviation,
            r.tolerance
        );
    }
    let text = reports_text(&reports, a.output.format.into());
    write_output(&text, a.output.out.as_deref(), stdout)?;
    Ok(if reports.iter().all(|r| r.passed) {
        0
    } else {
        1
    })
}

/// Writes `classical_T`, `hadamard_T` and `ico_T` files for every `T`.
pub fn emit_figure1(
    steps: &[usize],
    out_dir: &Path,
    format: Format,
) -> Result<Vec<PathBuf>, String> {
    if steps.is_empty() {
        return Err("no step counts given".into());
    }
    if let Some(t) = steps.iter().find(|&&t| t < 2 || t % 2 != 0) {
        return Err(format!("step count {t} must be even and at least 2"));
    }
    std::fs::create_dir_all(out_dir).map_err(|e| format!("{}: {e}", out_dir.display()))?;
    let ext = format.extension();
    let whole = BranchLabel::default();
    let mut written = Vec::new();
    for &t in steps {
        let classical = classical_rw_distribution(t, 0).map_err(|e| e.to_string())?;
        let hadamard =
            hadamard_walk_distribution(t, 0, Chirality::Forward).map_err(|e| e.to_string())?;
        let run = UniformRun::new(t / 2, 2, 0).map_err(|e| e.to_string())?;
        let ico = run.success_distribution().map_err(|e| e.to_string())?;
        let success = run.success_probability().map_err(|e| e.to_string())?;
        let ico_label = BranchLabel {
            order_outcome: None,
            coin_outcome: Some(Chirality::Backward),
        };
        let files = [
            (
                "classical",
                distribution_text(&classical, whole, 1.0, format),
            ),
            ("hadamard", distribution_text(&hadamard, whole, 1.0, format)),
            ("ico", distribution_text(&ico, ico_label, success, format)),
        ];
        for (name, text) in files {
            let path = out_dir.join(format!("{name}_{t}.{ext}"));
            std::fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display()))?;
            written.push(path);
        }
    }
    Ok(written)
}

fn run_figure1(a: FigureArgs, stderr: &mut dyn Write) -> CliResult<i32> {
    let start = Instant::now();
    let files = emit_figure1(&a.steps, &a.out, a.format.into()).map_err(CliError::Usage)?;
    let _ = writeln!(
        stderr,
        "wrote {} files to {} in {:.2?}",
        files.len(),
        a.out.display(),
        start.elapsed()
    );
    Ok(0)
}
