//! `intrans`: run dice, election and triplet experiments and the verification
//! suites from the command line.

use clap::{Args, Parser, Subcommand, ValueEnum};
use fnv::FnvHasher;
use intrans_core::experiment::{
    run_experiment, ConditionEvent, Conditioning, Experiment, ExperimentReport, ExperimentSpec,
};
use intrans_core::triplet::{alpha_rho, alpha_star, NoiseEval};
use intrans_core::verify::{run_suite, Suite};
use intrans_core::{CorrelationKernel, DiceModel, Dist, Error, StationaryMethod};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::hash::Hasher;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "intrans",
    version,
    about = "Intransitive dice and Condorcet paradox experiments"
)]
struct Cli {
    /// JSON file whose keys mirror the subcommand's flags; flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample dice triples; report intransitive fraction and CDF-sum agreement.
    Dice(DiceArgs),
    /// Impartial-culture elections, optionally conditioned on close margins.
    Elections(ElectionArgs),
    /// Majority-of-triplets paradox under close sums or noise stability.
    Triplet(TripletArgs),
    /// Run an exact-value / oracle suite.
    Verify(VerifyArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum ModelName {
    Discrete,
    Conditioned,
    Stationary,
    Iid,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum DistName {
    Uniform,
    Gaussian,
    ShiftedExp,
}

impl From<DistName> for Dist {
    fn from(d: DistName) -> Dist {
        match d {
            DistName::Uniform => Dist::UniformSym,
            DistName::Gaussian => Dist::StdGaussian,
            DistName::ShiftedExp => Dist::ShiftedExponential,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum MethodName {
    Circulant,
    Toeplitz,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum Mode {
    Sum,
    Noise,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum EvalName {
    Exact,
    Approx,
    Auto,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum SuiteName {
    Identities,
    Covariances,
    Predictors,
    Samplers,
    All,
}

// Every field is optional so that unset flags can fall back to the config file.

#[derive(Args, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct DiceArgs {
    #[arg(long, value_enum)]
    model: Option<ModelName>,
    #[arg(long, value_enum)]
    dist: Option<DistName>,
    #[arg(long)]
    n: Option<usize>,
    /// Hurst index for the stationary model.
    #[arg(long)]
    hurst: Option<f64>,
    #[arg(long, value_enum)]
    method: Option<MethodName>,
    #[arg(long)]
    triples: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct ElectionArgs {
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// Closeness threshold; omit for unconditioned elections.
    #[arg(long)]
    d: Option<f64>,
    /// Index of the pair left out of the closeness condition.
    #[arg(long)]
    subset_excl: Option<usize>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct TripletArgs {
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    #[arg(long)]
    n: Option<usize>,
    /// Noise correlation (noise mode).
    #[arg(long)]
    rho: Option<f64>,
    /// Closeness threshold; defaults to √n/ln n (sum) or √m/ln m (noise).
    #[arg(long)]
    d: Option<f64>,
    #[arg(long, value_enum)]
    eval: Option<EvalName>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Option<SuiteName>,
}

/// Fills every unset field of `cli` from `file`.
macro_rules! merge {
    ($cli:expr, $file:expr, $($f:ident),+) => {
        $( if $cli.$f.is_none() { $cli.$f = $file.$f.take(); } )+
    };
}

enum Failure {
    Usage(String),
    Runtime(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(m) => Failure::Usage(m),
            other => Failure::Runtime(other),
        }
    }
}

fn io_err(e: impl std::fmt::Display) -> Failure {
    Failure::Io(e.to_string())
}

fn load_config<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T, Failure> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| Failure::Usage(format!("config {}: {e}", p.display())))
        }
    }
}

fn required<T>(v: Option<T>, flag: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("--{flag} is required")))
}

/// One output row; columns follow the fixed CSV layout.
#[derive(Debug, Serialize)]
struct Row {
    experiment_id: String,
    subcommand: &'static str,
    model: String,
    n: Option<usize>,
    k: Option<usize>,
    d: Option<f64>,
    hurst: Option<f64>,
    rho: Option<f64>,
    trials: u64,
    accepted: u64,
    statistic: String,
    estimate: f64,
    stderr: f64,
    seed: u64,
    wall_time_ms: u64,
}

/// Columns shared by every row of one run.
struct RowContext {
    subcommand: &'static str,
    model: String,
    n: Option<usize>,
    k: Option<usize>,
    d: Option<f64>,
    hurst: Option<f64>,
    rho: Option<f64>,
}

fn experiment_id(spec: &ExperimentSpec) -> String {
    // FNV is stable across toolchains, unlike the std hasher
    let mut h = FnvHasher::default();
    h.write(
        serde_json::to_string(spec)
            .expect("spec serializes")
            .as_bytes(),
    );
    format!("{:016x}", h.finish())
}

fn rows_of(report: &ExperimentReport, ctx: &RowContext) -> Vec<Row> {
    let id = experiment_id(&report.spec);
    report
        .statistics
        .iter()
        .map(|s| Row {
            experiment_id: id.clone(),
            subcommand: ctx.subcommand,
            model: ctx.model.clone(),
            n: ctx.n,
            k: ctx.k,
            d: ctx.d,
            hurst: ctx.hurst,
            rho: ctx.rho,
            trials: s.estimate.trials,
            accepted: s.estimate.accepted,
            statistic: s.statistic.clone(),
            estimate: s.estimate.estimate,
            stderr: s.estimate.stderr,
            seed: s.estimate.seed,
            wall_time_ms: s.estimate.wall_time_ms,
        })
        .collect()
}

/// Writes the CSV to `out` (or stdout) and, with `out`, the run metadata to
/// `out` with a `.json` extension.
fn emit(rows: &[Row], reports: &[ExperimentReport], out: Option<&Path>) -> Result<(), Failure> {
    let sink: Box<dyn Write> = match out {
        Some(p) => Box::new(std::fs::File::create(p).map_err(io_err)?),
        None => Box::new(std::io::stdout()),
    };
    let mut w = csv::Writer::from_writer(sink);
    for r in rows {
        w.serialize(r).map_err(io_err)?;
    }
    w.flush().map_err(io_err)?;
    if let Some(p) = out {
        let meta = serde_json::json!({ "version": env!("CARGO_PKG_VERSION"), "runs": reports });
        let text = serde_json::to_string_pretty(&meta).map_err(io_err)?;
        std::fs::write(p.with_extension("json"), text).map_err(io_err)?;
    }
    Ok(())
}

fn dice(mut a: DiceArgs, config: Option<&Path>) -> Result<(), Failure> {
    let mut f: DiceArgs = load_config(config)?;
    merge!(a, f, model, dist, n, hurst, method, triples, seed, out);
    let model_name = a.model.unwrap_or(ModelName::Conditioned);
    let n = required(a.n, "n")?;
    let dist: Dist = a.dist.unwrap_or(DistName::Gaussian).into();
    let hurst = a.hurst.unwrap_or(0.75);
    let model = match model_name {
        ModelName::Discrete => DiceModel::DiscreteConditioned { n },
        ModelName::Conditioned => DiceModel::ContinuousConditioned { n, dist },
        ModelName::Iid => DiceModel::IidContinuous { n, dist },
        ModelName::Stationary => DiceModel::StationaryGaussian {
            n,
            kernel: CorrelationKernel::fbm(hurst)?,
            method: match a.method.unwrap_or(MethodName::Circulant) {
                MethodName::Circulant => StationaryMethod::CirculantEmbedding,
                MethodName::Toeplitz => StationaryMethod::ToeplitzFactorization,
            },
        },
    };
    let label = match model_name {
        ModelName::Discrete | ModelName::Stationary => model.name().to_string(),
        _ => format!("{}-{dist}", model.name()),
    };
    let spec = ExperimentSpec::new(
        Experiment::Dice { model },
        a.triples.unwrap_or(1000),
        a.seed.unwrap_or(0),
    );
    let report = run_experiment(&spec)?;
    let ctx = RowContext {
        subcommand: "dice",
        model: label,
        n: Some(n),
        k: None,
        d: None,
        hurst: (model_name == ModelName::Stationary).then_some(hurst),
        rho: None,
    };
    emit(&rows_of(&report, &ctx), &[report], a.out.as_deref())
}

fn elections(mut a: ElectionArgs, config: Option<&Path>) -> Result<(), Failure> {
    let mut f: ElectionArgs = load_config(config)?;
    merge!(a, f, k, n, d, subset_excl, trials, seed, out);
    let k = a.k.unwrap_or(3);
    let n = required(a.n, "n")?;
    if a.subset_excl.is_some() && a.d.is_none() {
        return Err(Failure::Usage("--subset-excl needs --d".into()));
    }
    let mut spec = ExperimentSpec::new(
        Experiment::Elections { k, n },
        a.trials.unwrap_or(100_000),
        a.seed.unwrap_or(0),
    );
    if let Some(d) = a.d {
        spec = spec.conditioned(Conditioning {
            event: ConditionEvent::CloseMargins,
            d: Some(d),
            subset_excl: a.subset_excl,
        });
    }
    let report = run_experiment(&spec)?;
    let model = match (a.d, a.subset_excl) {
        (None, _) => "impartial".to_string(),
        (Some(_), None) => "close".to_string(),
        (Some(_), Some(j)) => format!("close-excl-{j}"),
    };
    let ctx = RowContext {
        subcommand: "elections",
        model,
        n: Some(n),
        k: Some(k),
        d: a.d,
        hurst: None,
        rho: None,
    };
    emit(&rows_of(&report, &ctx), &[report], a.out.as_deref())
}

fn constant_row(id: &str, ctx: &RowContext, statistic: &str, value: f64) -> Row {
    Row {
        experiment_id: id.to_string(),
        subcommand: ctx.subcommand,
        model: "gaussian-limit".into(),
        n: None,
        k: Some(3),
        d: None,
        hurst: None,
        rho: ctx.rho,
        trials: 0,
        accepted: 0,
        statistic: statistic.into(),
        estimate: value,
        stderr: 0.0,
        seed: 0,
        wall_time_ms: 0,
    }
}

fn triplet(mut a: TripletArgs, config: Option<&Path>) -> Result<(), Failure> {
    let mut f: TripletArgs = load_config(config)?;
    merge!(a, f, mode, n, rho, d, eval, trials, seed, out);
    let mode = a.mode.unwrap_or(Mode::Sum);
    let n = required(a.n, "n")?;
    let trials = a.trials.unwrap_or(100_000);
    let seed = a.seed.unwrap_or(0);
    let (event, model) = match mode {
        Mode::Sum => (ConditionEvent::TripletSum, "sum"),
        Mode::Noise => {
            let rho = required(a.rho, "rho")?;
            let eval = match a.eval.unwrap_or(EvalName::Auto) {
                EvalName::Exact => NoiseEval::Exact,
                EvalName::Approx => NoiseEval::Approx,
                EvalName::Auto => NoiseEval::Auto,
            };
            (ConditionEvent::TripletNoise { rho, eval }, "noise")
        }
    };
    let spec =
        ExperimentSpec::new(Experiment::Triplet { n }, trials, seed).conditioned(Conditioning {
            event,
            d: a.d,
            subset_excl: None,
        });
    let report = run_experiment(&spec)?;
    let baseline = run_experiment(&ExperimentSpec::new(
        Experiment::Triplet { n },
        trials,
        seed ^ 0x5EED,
    ))?;
    let rho = if mode == Mode::Noise { a.rho } else { None };
    let ctx = RowContext {
        subcommand: "triplet",
        model: model.into(),
        n: Some(n),
        k: Some(3),
        d: a.d,
        hurst: None,
        rho,
    };
    let mut rows = rows_of(&report, &ctx);
    let base_ctx = RowContext {
        model: "unconditioned".into(),
        d: None,
        rho: None,
        ..ctx
    };
    rows.extend(rows_of(&baseline, &base_ctx));
    let id = experiment_id(&spec);
    rows.push(constant_row(&id, &base_ctx, "alpha_star", alpha_star()));
    if let Some(r) = rho {
        let ctx = RowContext {
            rho: Some(r),
            ..base_ctx
        };
        rows.push(constant_row(&id, &ctx, "alpha_rho", alpha_rho(r)?));
    }
    emit(&rows, &[report, baseline], a.out.as_deref())
}

fn verify(mut a: VerifyArgs, config: Option<&Path>) -> Result<bool, Failure> {
    let mut f: VerifyArgs = load_config(config)?;
    merge!(a, f, suite);
    let suites: Vec<Suite> = match a.suite.unwrap_or(SuiteName::All) {
        SuiteName::Identities => vec![Suite::Identities],
        SuiteName::Covariances => vec![Suite::Covariances],
        SuiteName::Predictors => vec![Suite::Predictors],
        SuiteName::Samplers => vec![Suite::Samplers],
        SuiteName::All => Suite::ALL.to_vec(),
    };
    let mut all_ok = true;
    let mut out = std::io::stdout().lock();
    for s in suites {
        for c in run_suite(s) {
            all_ok &= c.passed;
            writeln!(out, "[{s}] {c}").map_err(io_err)?;
        }
    }
    Ok(all_ok)
}

fn error_json(kind: &str, message: &str) -> String {
    serde_json::json!({ "error": { "kind": kind, "message": message } }).to_string()
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help and version go to stdout with status 0; real errors exit 2
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let config = cli.config.as_deref();
    let result = match cli.command {
        Command::Dice(a) => dice(a, config).map(|_| true),
        Command::Elections(a) => elections(a, config).map(|_| true),
        Command::Triplet(a) => triplet(a, config).map(|_| true),
        Command::Verify(a) => verify(a, config),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("{}", error_json("usage", &format!("rejected: {m}")));
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            log::debug!("{e:?}");
            eprintln!("{}", error_json("numeric", &e.to_string()));
            ExitCode::from(1)
        }
        Err(Failure::Io(m)) => {
            eprintln!("{}", error_json("io", &m));
            ExitCode::from(1)
        }
    }
}
