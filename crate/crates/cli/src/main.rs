//! `disconn`: verify, compare and probe discrete connection forms.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use disconn_core::bundle::{PrincipalBundle, TrivialBundle};
use disconn_core::connection::{
    slice_probe, tangent_split_check, trivial_form_from_c, BasePairDomain, CFamily, ConnectionForm,
    TrivialCForm,
};
use disconn_core::riemannian::{hopf_closed_form, lmw_form, riemannian_form, DEFAULT_STEPS};
use disconn_core::verify::{
    check_axioms, compare_forms, counterexample_sweep, sample_rng, stream_id, theta_grid, Axiom,
    SampleConfig, SampleSpace, Verdict, VerificationReport,
};

#[derive(Parser, Debug)]
#[command(name = "disconn", version, about = "Discrete connections on principal bundles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the connection axioms on random samples; exit 1 on failure.
    Verify(VerifyArgs),
    /// Maximum deviation between two forms on shared samples.
    Compare(CompareArgs),
    /// Tabulate the geodesic-in-S³ counterexample over a θ grid.
    Sweep(SweepArgs),
    /// Slice separation and tangent-split rank at random points.
    SliceProbe(ProbeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BundleKind {
    Hopf,
    Trivial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormKind {
    /// Closed-form Hopf connection.
    Closed,
    /// Horizontal lift of the base geodesic (uses --steps).
    Geodesic,
    /// Geodesic in S³, projected and lifted (uses --steps); not a connection.
    Lmw,
    /// Trivial-bundle form built from a C function (uses --c-family, --c-params).
    TrivialC,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug, Clone)]
struct FormArgs {
    #[arg(long, value_enum, default_value = "hopf")]
    bundle: BundleKind,
    /// Base dimension of the trivial bundle.
    #[arg(long, default_value_t = 1)]
    dim: usize,
    #[arg(long, value_enum, default_value = "closed")]
    form: FormKind,
    /// C family for trivial-c: identity, linear or constant.
    #[arg(long, default_value = "identity")]
    c_family: String,
    /// Comma-separated C parameters; linear takes alpha[,c1,...,cn].
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    c_params: Vec<f64>,
    /// RK4 steps for geodesic-built forms.
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    steps: usize,
}

#[derive(Args, Debug, Clone)]
struct SamplingArgs {
    #[arg(long, env = "DISCONN_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    /// Output path; standard output when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    form: FormArgs,
    #[command(flatten)]
    sampling: SamplingArgs,
    /// Tolerance for every axiom, replacing the provenance default.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Per-axiom tolerance as `id=value`; repeatable.
    #[arg(long = "axiom-tolerance", value_name = "ID=VALUE")]
    axiom_tolerance: Vec<String>,
    /// Restrict to these axioms (comma-separated ids).
    #[arg(long, value_delimiter = ',')]
    axioms: Vec<String>,
    #[command(flatten)]
    output: OutputArgs,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[command(flatten)]
    form: FormArgs,
    /// Second form.
    #[arg(long, value_enum, default_value = "closed")]
    against: FormKind,
    /// C family of the second form when it is trivial-c.
    #[arg(long, default_value = "identity")]
    against_c_family: String,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    against_c_params: Vec<f64>,
    #[command(flatten)]
    sampling: SamplingArgs,
    /// Exit 1 when the maximum deviation exceeds this value.
    #[arg(long)]
    tolerance: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Inclusive grid `start:stop:step`; values outside (−π/4, π/4) are dropped.
    #[arg(long, allow_hyphen_values = true, default_value = "-0.7:0.7:0.05")]
    grid: String,
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    steps: usize,
    #[command(flatten)]
    output: OutputArgs,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args, Debug)]
struct ProbeArgs {
    #[command(flatten)]
    form: FormArgs,
    #[arg(long, env = "DISCONN_SEED", default_value_t = 0)]
    seed: u64,
    /// Number of random points.
    #[arg(long, default_value_t = 100)]
    points: usize,
    /// Slice and orbit samples per point.
    #[arg(long, default_value_t = 64)]
    budget: usize,
    #[command(flatten)]
    output: OutputArgs,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

/// Every error that is not a verdict exits with code 2.
fn config_error(msg: impl Into<String>) -> anyhow::Error {
    anyhow::anyhow!(msg.into())
}

/// Runs `$body` with `$f` bound to the Hopf form selected by `$kind`.
macro_rules! with_hopf_form {
    ($kind:expr, $steps:expr, |$f:ident| $body:expr) => {{
        match $kind {
            FormKind::Closed => {
                let $f = hopf_closed_form();
                $body
            }
            FormKind::Geodesic => {
                let $f = riemannian_form(check_steps($steps)?);
                $body
            }
            FormKind::Lmw => {
                let $f = lmw_form(check_steps($steps)?);
                $body
            }
            FormKind::TrivialC => Err(config_error("form trivial-c needs --bundle trivial")),
        }
    }};
}

/// Runs `$body` with `$f` bound to the form selected by `$sel`.
macro_rules! with_form {
    ($sel:expr, |$f:ident| $body:expr) => {{
        let sel: &FormArgs = $sel;
        match (sel.bundle, sel.form) {
            (BundleKind::Hopf, kind) => with_hopf_form!(kind, sel.steps, |$f| $body),
            (BundleKind::Trivial, FormKind::TrivialC) => {
                let $f = trivial_form(sel.dim, &sel.c_family, &sel.c_params)?;
                $body
            }
            (BundleKind::Trivial, _) => Err(config_error("the trivial bundle only supports --form trivial-c")),
        }
    }};
}

fn check_steps(steps: usize) -> anyhow::Result<usize> {
    if steps == 0 {
        return Err(config_error("--steps must be positive"));
    }
    Ok(steps)
}

fn trivial_form(dim: usize, family: &str, params: &[f64]) -> anyhow::Result<TrivialCForm> {
    if dim == 0 {
        return Err(config_error("--dim must be positive"));
    }
    let c = CFamily::from_name(family, params, dim)?;
    Ok(trivial_form_from_c(TrivialBundle::new(dim), c, BasePairDomain::Everywhere)?)
}

fn emit(output: &OutputArgs, text: &str) -> anyhow::Result<()> {
    match &output.output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(out.flush()?)
        }
    }
}

fn sample_config(args: &VerifyArgs) -> anyhow::Result<SampleConfig> {
    let mut cfg = SampleConfig::new(args.sampling.seed, args.sampling.samples);
    cfg.tolerance = args.tolerance;
    for entry in &args.axiom_tolerance {
        let (id, value) = entry
            .split_once('=')
            .ok_or_else(|| config_error(format!("expected ID=VALUE, got `{entry}`")))?;
        let axiom: Axiom = id.parse()?;
        let value: f64 = value.parse().map_err(|_| config_error(format!("bad tolerance `{value}`")))?;
        cfg.overrides.insert(axiom, value);
    }
    Ok(cfg)
}

fn report_csv(report: &VerificationReport) -> String {
    let mut out = String::from("id,samples,failures,errors,skipped,max_violation,tolerance\n");
    for a in &report.axioms {
        out.push_str(&format!(
            "{},{},{},{},{},{:e},{:e}\n",
            a.id, a.samples, a.failures, a.errors, a.skipped, a.max_violation, a.tolerance
        ));
    }
    out
}

fn run_verify(args: &VerifyArgs) -> anyhow::Result<ExitCode> {
    let cfg = sample_config(args)?;
    let axioms = args.axioms.iter().map(|id| id.parse::<Axiom>()).collect::<Result<Vec<_>, _>>()?;
    let report = with_form!(&args.form, |f| anyhow::Ok(check_axioms(&f, &axioms, &cfg)))?;
    let text = match args.format {
        Format::Json => report.to_json() + "\n",
        Format::Text => report.to_text(),
        Format::Csv => report_csv(&report),
    };
    emit(&args.output, &text)?;
    Ok(match report.verdict {
        Verdict::Pass => ExitCode::SUCCESS,
        Verdict::Fail => ExitCode::from(1),
    })
}

fn run_compare(args: &CompareArgs) -> anyhow::Result<ExitCode> {
    let cfg = SampleConfig::new(args.sampling.seed, args.sampling.samples);
    let sel = &args.form;
    let report = match (sel.bundle, sel.form, args.against) {
        (BundleKind::Hopf, first, second) => with_hopf_form!(first, sel.steps, |a| {
            with_hopf_form!(second, sel.steps, |b| anyhow::Ok(compare_forms(&a, &b, &cfg)?))
        }),
        (BundleKind::Trivial, FormKind::TrivialC, FormKind::TrivialC) => {
            let a = trivial_form(sel.dim, &sel.c_family, &sel.c_params)?;
            let b = trivial_form(sel.dim, &args.against_c_family, &args.against_c_params)?;
            anyhow::Ok(compare_forms(&a, &b, &cfg)?)
        }
        (BundleKind::Trivial, ..) => Err(config_error("the trivial bundle only supports trivial-c forms")),
    }?;
    let text = match args.format {
        Format::Json => report.to_json() + "\n",
        Format::Text => report.to_text(),
        Format::Csv => format!(
            "first,second,samples,max_deviation,mean_deviation\n{},{},{},{:e},{:e}\n",
            report.first, report.second, report.samples, report.max_deviation, report.mean_deviation
        ),
    };
    emit(&args.output, &text)?;
    let exceeded = args.tolerance.is_some_and(|t| report.max_deviation > t);
    Ok(if exceeded { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn parse_grid(spec: &str) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, stop, step] = parts.as_slice() else {
        return Err(config_error(format!("grid must be start:stop:step, got `{spec}`")));
    };
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| config_error(format!("bad grid value `{s}`")));
    theta_grid(num(start)?, num(stop)?, num(step)?).with_context(|| format!("bad grid `{spec}`"))
}

fn run_sweep(args: &SweepArgs) -> anyhow::Result<ExitCode> {
    let steps = check_steps(args.steps)?;
    let full = parse_grid(&args.grid)?;
    let limit = std::f64::consts::FRAC_PI_4;
    let grid: Vec<f64> = full.iter().copied().filter(|t| t.abs() < limit).collect();
    if grid.len() < full.len() {
        eprintln!("warning: dropped {} grid value(s) outside (-pi/4, pi/4)", full.len() - grid.len());
    }
    if grid.is_empty() {
        return Err(config_error("grid has no values inside (-pi/4, pi/4)"));
    }
    let table = counterexample_sweep(&grid, steps)?;
    let text = match args.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json() + "\n",
        Format::Text => table.to_text(),
    };
    emit(&args.output, &text)?;
    if !table.derivative_matches {
        eprintln!("derivative at 0 is {:.6}, expected pi/4", table.derivative_at_zero);
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(serde::Serialize)]
struct ProbeRow {
    point: Vec<f64>,
    min_separation: Option<f64>,
    separated: bool,
    rank: usize,
    expected_rank: usize,
}

/// Stream family for probe points, disjoint from the verifier's.
const PROBE_STREAM: usize = 64;

fn probe_points<F>(form: &F, args: &ProbeArgs) -> anyhow::Result<Vec<ProbeRow>>
where
    F: ConnectionForm,
    F::Bundle: SampleSpace,
{
    let b = form.bundle();
    (0..args.points)
        .map(|i| {
            let mut rng = sample_rng(args.seed, stream_id(PROBE_STREAM, i));
            let q = b.sample_total(&mut rng);
            let slice = slice_probe(form, &q, args.budget, args.seed.wrapping_add(i as u64))?;
            let split = tangent_split_check(form, &q)?;
            Ok(ProbeRow {
                point: b.total_coords(&q),
                min_separation: slice.min_separation,
                separated: slice.separated,
                rank: split.rank,
                expected_rank: b.dim_total(),
            })
        })
        .collect()
}

fn run_probe(args: &ProbeArgs) -> anyhow::Result<ExitCode> {
    let rows = with_form!(&args.form, |f| probe_points(&f, args))?;
    let ok = rows.iter().all(|r| r.separated && r.rank == r.expected_rank);
    let text = match args.format {
        Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
        Format::Csv | Format::Text => {
            let mut s = String::from("point,min_separation,separated,rank,expected_rank\n");
            for r in &rows {
                let point: Vec<String> = r.point.iter().map(|x| format!("{x:.6}")).collect();
                let sep = r.min_separation.map_or("none".to_owned(), |v| format!("{v:e}"));
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    point.join(" "),
                    sep,
                    r.separated,
                    r.rank,
                    r.expected_rank
                ));
            }
            s
        }
    };
    emit(&args.output, &text)?;
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Verify(a) => run_verify(a),
        Command::Compare(a) => run_compare(a),
        Command::Sweep(a) => run_sweep(a),
        Command::SliceProbe(a) => run_probe(a),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::from(2)
    })
}
