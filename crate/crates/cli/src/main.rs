use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use tko_distill::analysis::{
    figure2, figure3, figure4, optimal_fidelity_params, sweep_eta, sweep_p, write_csv, write_json, SweepPoint,
};
use tko_distill::channel::spec::{matrix_to_entries, MatrixEntries};
use tko_distill::channel::{
    canonicalize_or_unitary, kraus_from_params, CanonicalChannelParams, ChannelSpec, KrausPair,
};
use tko_distill::distill::engine_discrepancy;
use tko_distill::state::{canonical_decompose, verify_canonical};
use tko_distill::{average_yield, run, shared_state, DistillationTrace, Engine, Error, Policy, Real, YieldReport};

const THREADS_VAR: &str = "TKO_DISTILL_THREADS";
const ENGINE_TOL: f64 = 1e-9;

/// Canonicalize two-Kraus qubit channels and simulate recurrence distillation
#[derive(Parser)]
#[command(version, about, long_about = None)]
struct Cli {
    /// Output format; defaults to json for single results and csv for tables
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Seed recorded in tabular output
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check Kraus completeness
    Validate(ChannelArgs),
    /// Reduce a channel to its normal form
    Canonicalize(ChannelArgs),
    /// Canonical decomposition of the state shared through the channel
    State(ChannelArgs),
    /// Run one distillation protocol
    Distill {
        #[command(flatten)]
        channel: ChannelArgs,
        #[arg(long)]
        policy: Policy,
        #[command(flatten)]
        run: RunArgs,
        /// Defaults to exact for qpa and analytic otherwise
        #[arg(long)]
        engine: Option<Engine>,
        /// Also run the other engine and fail on disagreement (fp and pp only)
        #[arg(long)]
        check_analytic: bool,
    },
    /// Sweep the damping parameter p at fixed |eta|
    SweepP {
        /// Magnitude of eta
        #[arg(long)]
        eta: f64,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Sweep |eta| at fixed p
    SweepEta {
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Regenerate the data behind a published figure
    Figure {
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=4))]
        id: u8,
        #[arg(long, default_value_t = 64)]
        max_rounds: usize,
    },
}

#[derive(Args)]
struct ChannelArgs {
    /// Channel JSON file, or - for stdin
    #[arg(long = "in", conflicts_with_all = ["p", "eta"], required_unless_present = "p")]
    input: Option<PathBuf>,
    /// Damping parameter of the canonical channel
    #[arg(long, requires = "eta")]
    p: Option<f64>,
    /// Magnitude of eta of the canonical channel
    #[arg(long, requires = "p")]
    eta: Option<f64>,
}

#[derive(Args)]
struct RunArgs {
    /// Target fidelity
    #[arg(long, default_value_t = 0.99)]
    f_th: f64,
    #[arg(long, default_value_t = 64)]
    max_rounds: usize,
}

#[derive(Args)]
struct SweepArgs {
    /// Comma-separated policies
    #[arg(long, value_delimiter = ',', default_values_t = Policy::ALL.to_vec())]
    policies: Vec<Policy>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct GridArgs {
    /// Explicit comma-separated grid; overrides --from/--to/--steps
    #[arg(long, value_delimiter = ',')]
    values: Vec<f64>,
    #[arg(long, default_value_t = 0.0)]
    from: f64,
    /// Defaults to 0.99 for p and 1 for |eta|
    #[arg(long)]
    to: Option<f64>,
    /// Number of evenly spaced points, endpoints included
    #[arg(long, default_value_t = 100)]
    steps: usize,
}

enum Failure {
    Lib(Error),
    Mismatch(f64),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Lib(e) if e.is_domain() => 2,
            Failure::Lib(_) => 1,
            Failure::Mismatch(_) => 3,
        }
    }

    fn code(&self) -> &'static str {
        match self {
            Failure::Lib(e) => e.code(),
            Failure::Mismatch(_) => "engine_mismatch",
        }
    }

    fn detail(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Mismatch(d) => format!("engines disagree by {d:e} (tolerance {ENGINE_TOL:e})"),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let format = cli.format.unwrap_or(match cli.command {
        Command::SweepP { .. } | Command::SweepEta { .. } | Command::Figure { .. } => Format::Csv,
        _ => Format::Json,
    });
    match configure_threads().and_then(|()| dispatch(&cli, format)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if format == Format::Json {
                let body = serde_json::json!({ "error": f.code(), "detail": f.detail() });
                eprintln!("{body}");
            } else {
                eprintln!("error [{}]: {}", f.code(), f.detail());
            }
            ExitCode::from(f.exit_code())
        }
    }
}

fn configure_threads() -> Outcome {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("{THREADS_VAR} = {raw:?} is not a thread count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Io(e.to_string()).into())
}

fn dispatch(cli: &Cli, format: Format) -> Outcome {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match &cli.command {
        Command::Validate(ch) => validate(ch, format, &mut out)?,
        Command::Canonicalize(ch) => canonicalize_cmd(ch, format, &mut out)?,
        Command::State(ch) => state(ch, format, &mut out)?,
        Command::Distill {
            channel,
            policy,
            run,
            engine,
            check_analytic,
        } => distill(channel, *policy, run, *engine, *check_analytic, format, &mut out)?,
        Command::SweepP { eta, grid, sweep } => {
            check_run(&sweep.run)?;
            let values = grid.values(0.99)?;
            let points = sweep_p(*eta, &values, sweep.run.f_th, &sweep.policies, sweep.run.max_rounds);
            emit_points(&points, cli.seed, format, &mut out)?;
        }
        Command::SweepEta { p, grid, sweep } => {
            check_run(&sweep.run)?;
            let values = grid.values(1.0)?;
            let points = sweep_eta(*p, &values, sweep.run.f_th, &sweep.policies, sweep.run.max_rounds);
            emit_points(&points, cli.seed, format, &mut out)?;
        }
        Command::Figure { id, max_rounds } => {
            check_rounds(*max_rounds)?;
            match id {
                2 => emit(&figure2(*max_rounds)?, format, &mut out)?,
                3 => emit_points(&figure3(*max_rounds), cli.seed, format, &mut out)?,
                _ => emit_points(&figure4(*max_rounds), cli.seed, format, &mut out)?,
            }
        }
    }
    out.flush().map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}

impl GridArgs {
    fn values(&self, default_to: f64) -> tko_distill::Result<Vec<f64>> {
        let values = if !self.values.is_empty() {
            self.values.clone()
        } else {
            let to = self.to.unwrap_or(default_to);
            match self.steps {
                0 => return Err(Error::InvalidParameter("--steps must be at least 1".into())),
                1 => vec![self.from],
                n => (0..n)
                    .map(|i| self.from + (to - self.from) * i as f64 / (n - 1) as f64)
                    .collect(),
            }
        };
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("grid value {bad} is not finite")));
        }
        Ok(values)
    }
}

fn check_rounds(max_rounds: usize) -> tko_distill::Result<()> {
    if max_rounds == 0 {
        return Err(Error::InvalidParameter("--max-rounds must be at least 1".into()));
    }
    Ok(())
}

fn check_run(run: &RunArgs) -> tko_distill::Result<()> {
    if !(run.f_th > 0.5 && run.f_th <= 1.0) {
        return Err(Error::InvalidParameter(format!("--f-th {} outside (0.5, 1]", run.f_th)));
    }
    check_rounds(run.max_rounds)
}

fn read_spec(ch: &ChannelArgs) -> tko_distill::Result<ChannelSpec> {
    match (&ch.input, ch.p, ch.eta) {
        (Some(path), _, _) => {
            let mut text = String::new();
            if path.as_os_str() == "-" {
                io::stdin().read_to_string(&mut text)
            } else {
                std::fs::File::open(path).and_then(|mut f| f.read_to_string(&mut text))
            }
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            ChannelSpec::from_json(&text)
        }
        (None, Some(p), Some(eta)) => {
            let cp = CanonicalChannelParams::from_abs_eta(p, eta)?;
            Ok(ChannelSpec::Canonical(tko_distill::channel::CanonicalSpec {
                p: cp.p,
                eta: [cp.eta.re, cp.eta.im],
                u: None,
                v: None,
            }))
        }
        _ => Err(Error::InvalidParameter("give --in or both --p and --eta".into())),
    }
}

fn read_channel(ch: &ChannelArgs) -> tko_distill::Result<CanonicalChannelParams<f64>> {
    canonicalize_or_unitary(&read_spec(ch)?.to_kraus()?)
}

fn emit<S: Serialize, W: Write>(rows: &[S], format: Format, out: W) -> tko_distill::Result<()> {
    match format {
        Format::Csv => write_csv(rows, out),
        Format::Json => write_json(rows, out),
    }
}

fn emit_one<S: Serialize, W: Write>(value: &S, out: &mut W) -> tko_distill::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(out).map_err(|e| Error::Io(e.to_string()))
}

fn emit_points<W: Write>(points: &[SweepPoint<f64>], seed: u64, format: Format, out: W) -> tko_distill::Result<()> {
    let rows: Vec<_> = points.iter().flat_map(|pt| pt.rows(seed)).collect();
    emit(&rows, format, out)
}

#[derive(Serialize)]
struct ValidateOut {
    valid: bool,
    completeness_deviation: f64,
}

fn validate<W: Write>(ch: &ChannelArgs, format: Format, out: &mut W) -> Outcome {
    let kp: KrausPair<f64> = match read_spec(ch)? {
        ChannelSpec::Kraus([a, b]) => {
            use tko_distill::channel::spec::matrix_from_entries;
            KrausPair::new(matrix_from_entries(&a)?, matrix_from_entries(&b)?)?
        }
        ChannelSpec::Canonical(cs) => kraus_from_params(&cs.to_params()?),
    };
    let v = kp.validate();
    let report = ValidateOut {
        valid: v.ok,
        completeness_deviation: v.deviation,
    };
    emit_single(&report, format, out)?;
    if v.ok {
        Ok(())
    } else {
        Err(Error::Incomplete(v.deviation).into())
    }
}

fn emit_single<S: Serialize, W: Write>(value: &S, format: Format, out: &mut W) -> tko_distill::Result<()> {
    match format {
        Format::Json => emit_one(value, out),
        Format::Csv => write_csv(std::slice::from_ref(value), out),
    }
}

#[derive(Serialize)]
struct CanonicalOut {
    p: f64,
    eta: [f64; 2],
    abs_eta: f64,
    zeta: f64,
    u: MatrixEntries,
    v: MatrixEntries,
}

fn canonicalize_cmd<W: Write>(ch: &ChannelArgs, format: Format, out: &mut W) -> Outcome {
    let cp = read_channel(ch)?;
    let report = CanonicalOut {
        p: cp.p,
        eta: [cp.eta.re, cp.eta.im],
        abs_eta: cp.abs_eta(),
        zeta: cp.zeta,
        u: matrix_to_entries(&cp.u),
        v: matrix_to_entries(&cp.v),
    };
    match format {
        Format::Json => emit_one(&report, out)?,
        Format::Csv => write_csv(&[Flat::from(&report)], out)?,
    }
    Ok(())
}

#[derive(Serialize)]
struct Flat {
    p: f64,
    eta_re: f64,
    eta_im: f64,
    abs_eta: f64,
    zeta: f64,
}

impl From<&CanonicalOut> for Flat {
    fn from(c: &CanonicalOut) -> Self {
        Flat {
            p: c.p,
            eta_re: c.eta[0],
            eta_im: c.eta[1],
            abs_eta: c.abs_eta,
            zeta: c.zeta,
        }
    }
}

#[derive(Serialize)]
struct StateOut {
    f: f64,
    alpha: f64,
    beta: f64,
    gamma: f64,
    delta: f64,
    theta: f64,
    optimal_fidelity: f64,
    reconstruction_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    ua: Option<MatrixEntries>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ub: Option<MatrixEntries>,
}

fn state<W: Write>(ch: &ChannelArgs, format: Format, out: &mut W) -> Outcome {
    let kp: KrausPair<f64> = read_spec(ch)?.to_kraus()?;
    let rho = shared_state(&kp)?;
    let params = canonical_decompose(&rho, f64::check_tol())?;
    let mut report = StateOut {
        f: params.f,
        alpha: params.alpha,
        beta: params.beta,
        gamma: params.gamma,
        delta: params.delta,
        theta: params.theta,
        optimal_fidelity: optimal_fidelity_params(&params.coefficients())?,
        reconstruction_error: verify_canonical(&params, &rho),
        ua: Some(matrix_to_entries(&params.ua)),
        ub: Some(matrix_to_entries(&params.ub)),
    };
    if format == Format::Csv {
        report.ua = None;
        report.ub = None;
    }
    emit_single(&report, format, out)?;
    Ok(())
}

#[derive(Serialize)]
struct DistillOut<'a> {
    engine: Engine,
    #[serde(flatten)]
    trace: &'a DistillationTrace<f64>,
    #[serde(rename = "yield")]
    report: Option<YieldReport<f64>>,
}

fn distill<W: Write>(
    ch: &ChannelArgs,
    policy: Policy,
    run_args: &RunArgs,
    engine: Option<Engine>,
    check_analytic: bool,
    format: Format,
    out: &mut W,
) -> Outcome {
    check_run(run_args)?;
    let cp = read_channel(ch)?;
    let engine = engine.unwrap_or(Engine::default_for(policy));
    let trace = run(&cp, policy, run_args.f_th, run_args.max_rounds, engine)?;
    if check_analytic {
        if !matches!(policy, Policy::Fp | Policy::Pp) {
            return Err(Error::Unsupported(format!("--check-analytic needs fp or pp, got {policy}")).into());
        }
        let other = match engine {
            Engine::Exact => Engine::Analytic,
            Engine::Analytic => Engine::Exact,
        };
        let reference = run(&cp, policy, run_args.f_th, run_args.max_rounds, other)?;
        let d = engine_discrepancy(&trace, &reference);
        if d.is_nan() || d > ENGINE_TOL {
            return Err(Failure::Mismatch(d));
        }
    }
    match format {
        Format::Json => emit_one(
            &DistillOut {
                engine,
                trace: &trace,
                report: average_yield(&trace).ok(),
            },
            out,
        )?,
        Format::Csv => write_csv(&trace.records, out)?,
    }
    Ok(())
}
