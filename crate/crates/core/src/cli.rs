//! Command line front end.
//!
//! Subcommands:
//! - `gen`: sample a point cloud from a built-in model and write it as CSV.
//! - `invariants`: integral invariants (volume, barycenter, covariance) of a
//!   model domain or of a cloud neighborhood.
//! - `estimate`: curvature descriptors at one scale.
//! - `sweep`: estimates across a scale grid with error slopes against the
//!   model oracle.
//! - `riemann`: second fundamental form and Gauss-equation curvature of a
//!   codimension-k point cloud.
//!
//! Exit codes: 0 on success, 2 on usage errors, 3 on runtime failures.
//! Defaults can be overridden from a `key = value` config file (`--config`);
//! explicit flags win over the file.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::descriptors::{curvature_from_invariants, CurvatureEstimate};
use crate::domains::{
    cloud_patch_invariants, component_invariants, component_invariants_qmc, patch_invariants,
    DomainKind, IntegralInvariants, QuadratureConfig,
};
use crate::io::{read_cloud_file, write_cloud};
use crate::models::{GraphSubmanifold, HypersurfaceModel};
use crate::submanifold::estimate_submanifold_curvature;

#[derive(Parser)]
#[command(name = "curvint", version, about = "Curvature estimation from integral invariants")]
struct Cli {
    /// Defaults file with `key = value` lines (flags take precedence).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Treat recoverable degeneracies (singular mean curvature fallbacks) as errors.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample a point cloud from a model patch.
    Gen(GenArgs),
    /// Integral invariants of a ball-induced domain.
    Invariants(InvariantsArgs),
    /// Curvature descriptors at one scale.
    Estimate(EstimateArgs),
    /// Descriptor errors against the model oracle across a scale grid.
    Sweep(SweepArgs),
    /// Second fundamental form and Riemann tensor of a cloud point.
    Riemann(RiemannArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Domain {
    Patch,
    Component,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Quadrature,
    Qmc,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelKind {
    /// Graph of a quadratic with prescribed principal curvatures.
    Graph,
    /// Round sphere in standard position.
    Sphere,
    /// The built-in codimension-2 quadratic submanifold in R^4.
    Codim2,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, value_enum)]
    model: Option<ModelKind>,
    /// Principal curvatures of the graph model, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    kappas: Option<String>,
    /// Sphere radius.
    #[arg(long)]
    radius: Option<f64>,
    /// Ambient dimension (sphere model; default 3).
    #[arg(long)]
    dim: Option<usize>,
}

#[derive(Args)]
struct QuadArgs {
    /// Nodes per angular axis of the sphere rule.
    #[arg(long)]
    angular: Option<usize>,
    /// Gauss-Legendre nodes per radial segment.
    #[arg(long)]
    radial: Option<usize>,
    /// Sample count of the quasi-Monte-Carlo volume path.
    #[arg(long)]
    mc_points: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    eps: Option<f64>,
    /// Number of points to sample (must be positive).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    count: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file (stdout if omitted).
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct InvariantsArgs {
    /// Point cloud CSV (otherwise a model is integrated).
    #[arg(long, short)]
    input: Option<PathBuf>,
    /// Neighborhood center for cloud input, comma separated (default origin).
    #[arg(long, allow_hyphen_values = true)]
    center: Option<String>,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, value_enum, default_value = "patch")]
    domain: Domain,
    #[arg(long, value_enum, default_value = "quadrature")]
    method: Method,
    #[command(flatten)]
    quad: QuadArgs,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EstimateArgs {
    #[arg(long, short)]
    input: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    center: Option<String>,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, value_enum, default_value = "patch")]
    domain: Domain,
    #[command(flatten)]
    quad: QuadArgs,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Base scale; the default grid is eps * 2^-j for j = 0..3.
    #[arg(long)]
    eps: Option<f64>,
    /// Explicit scale grid, comma separated (at least 3 scales).
    #[arg(long)]
    eps_grid: Option<String>,
    #[arg(long, value_enum, default_value = "patch")]
    domain: Domain,
    #[command(flatten)]
    quad: QuadArgs,
    /// Worker threads (results are deterministic regardless of the count).
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct RiemannArgs {
    /// Point cloud CSV.
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    center: Option<String>,
    #[arg(long)]
    eps: Option<f64>,
    /// Intrinsic dimension (inferred from the PCA spectrum if omitted).
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

enum CliError {
    Usage(String),
    Runtime(String),
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    let config = match load_config(cli.config.as_deref()) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return 2;
        }
    };
    let strict = cli.strict;
    let result = match cli.command {
        Cmd::Gen(a) => cmd_gen(a, &config),
        Cmd::Invariants(a) => cmd_invariants(a, &config),
        Cmd::Estimate(a) => cmd_estimate(a, &config, strict),
        Cmd::Sweep(a) => cmd_sweep(a, &config, strict),
        Cmd::Riemann(a) => cmd_riemann(a, &config, strict),
    };
    match result {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            3
        }
    }
}

// ---------------------------------------------------------------------------
// config file and flag resolution
// ---------------------------------------------------------------------------

fn load_config(path: Option<&Path>) -> std::result::Result<HashMap<String, String>, String> {
    let mut map = HashMap::new();
    let Some(path) = path else { return Ok(map) };
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    const KEYS: &[&str] = &[
        "angular", "radial", "rel_tol", "max_refinements", "mc_points", "seed", "eps", "count",
        "jobs",
    ];
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected 'key = value'", i + 1))?;
        let key = key.trim().to_string();
        if !KEYS.contains(&key.as_str()) {
            return Err(format!("config line {}: unknown key '{key}'", i + 1));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

fn config_get<T: std::str::FromStr>(
    config: &HashMap<String, String>,
    key: &str,
) -> CliResult<Option<T>> {
    match config.get(key) {
        None => Ok(None),
        Some(v) => v
            .parse()
            .map(Some)
            .map_err(|_| usage(format!("config key '{key}': cannot parse '{v}'"))),
    }
}

fn resolve_eps(flag: Option<f64>, config: &HashMap<String, String>) -> CliResult<f64> {
    let eps = match flag {
        Some(e) => e,
        None => config_get::<f64>(config, "eps")?
            .ok_or_else(|| usage("--eps is required (flag or config)"))?,
    };
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(usage(format!("eps must be positive and finite, got {eps}")));
    }
    Ok(eps)
}

fn resolve_quadrature(
    quad: &QuadArgs,
    config: &HashMap<String, String>,
) -> CliResult<QuadratureConfig> {
    let mut qc = QuadratureConfig::default();
    if let Some(v) = config_get(config, "angular")? {
        qc.angular = v;
    }
    if let Some(v) = config_get(config, "radial")? {
        qc.radial = v;
    }
    if let Some(v) = config_get(config, "rel_tol")? {
        qc.rel_tol = v;
    }
    if let Some(v) = config_get(config, "max_refinements")? {
        qc.max_refinements = v;
    }
    if let Some(v) = config_get(config, "mc_points")? {
        qc.mc_points = v;
    }
    if let Some(v) = config_get(config, "seed")? {
        qc.seed = v;
    }
    if let Some(v) = quad.angular {
        qc.angular = v;
    }
    if let Some(v) = quad.radial {
        qc.radial = v;
    }
    if let Some(v) = quad.mc_points {
        qc.mc_points = v;
    }
    if let Some(v) = quad.seed {
        qc.seed = v;
    }
    if qc.angular < 2 || qc.radial < 2 {
        return Err(usage("angular and radial node counts must be at least 2"));
    }
    Ok(qc)
}

fn parse_f64_list(s: &str, what: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| usage(format!("{what}: cannot parse '{}': {e}", t.trim())))
        })
        .collect()
}

enum Model {
    Hyper(HypersurfaceModel),
    Codim2(GraphSubmanifold),
}

fn build_model(args: &ModelArgs) -> CliResult<Model> {
    match args.model {
        None => Err(usage("--model is required when no --input cloud is given")),
        Some(ModelKind::Graph) => {
            let spec = args
                .kappas
                .as_deref()
                .ok_or_else(|| usage("--model graph requires --kappas"))?;
            let kappas = parse_f64_list(spec, "--kappas")?;
            Ok(Model::Hyper(HypersurfaceModel::graph(kappas)?))
        }
        Some(ModelKind::Sphere) => {
            let radius = args
                .radius
                .ok_or_else(|| usage("--model sphere requires --radius"))?;
            let dim = args.dim.unwrap_or(3);
            Ok(Model::Hyper(HypersurfaceModel::sphere(dim, radius)?))
        }
        Some(ModelKind::Codim2) => Ok(Model::Codim2(GraphSubmanifold::codim2_quadratic())),
    }
}

fn hypersurface_model(args: &ModelArgs) -> CliResult<HypersurfaceModel> {
    match build_model(args)? {
        Model::Hyper(m) => Ok(m),
        Model::Codim2(_) => Err(usage(
            "this command takes a hypersurface model (graph or sphere); \
             use `riemann` for codimension-2 clouds",
        )),
    }
}

fn open_output(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(std::io::stdout())),
    })
}

fn write_preamble(w: &mut dyn Write, command: &str, extra: &[(&str, String)]) -> CliResult<()> {
    writeln!(w, "# curvint {}", env!("CARGO_PKG_VERSION"))?;
    writeln!(w, "# command = {command}")?;
    for (k, v) in extra {
        writeln!(w, "# {k} = {v}")?;
    }
    Ok(())
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

fn cmd_gen(args: GenArgs, config: &HashMap<String, String>) -> CliResult<()> {
    let eps = resolve_eps(args.eps, config)?;
    let count = match args.count {
        Some(c) => c as usize,
        None => config_get::<usize>(config, "count")?.unwrap_or(100_000),
    };
    if count == 0 {
        return Err(usage("count must be positive"));
    }
    let seed = match args.seed {
        Some(s) => s,
        None => config_get::<u64>(config, "seed")?.unwrap_or(0),
    };
    let cloud = match build_model(&args.model)? {
        Model::Hyper(m) => m.sample_patch(eps, count, seed)?,
        Model::Codim2(m) => m.sample_patch(eps, count, seed)?,
    };
    let mut out = open_output(args.output.as_deref())?;
    write_cloud(&mut out, &cloud)?;
    out.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// invariants
// ---------------------------------------------------------------------------

fn parse_center(spec: Option<&str>, dim: usize) -> CliResult<Vec<f64>> {
    match spec {
        None => Ok(vec![0.0; dim]),
        Some(s) => {
            let c = parse_f64_list(s, "--center")?;
            if c.len() != dim {
                return Err(usage(format!(
                    "--center has {} entries but the cloud is {dim}-dimensional",
                    c.len()
                )));
            }
            Ok(c)
        }
    }
}

fn compute_invariants(
    input: Option<&Path>,
    center: Option<&str>,
    model: &ModelArgs,
    eps: f64,
    domain: Domain,
    method: Method,
    qc: &QuadratureConfig,
) -> CliResult<IntegralInvariants> {
    if let Some(path) = input {
        if domain == Domain::Component {
            return Err(usage(
                "component invariants need a model; clouds only support --domain patch",
            ));
        }
        let cloud = read_cloud_file(path)?;
        let center = parse_center(center, cloud.ambient_dim)?;
        return Ok(cloud_patch_invariants(&cloud, &center, eps)?);
    }
    let model = hypersurface_model(model)?;
    Ok(match (domain, method) {
        (Domain::Patch, _) => patch_invariants(&model, eps, qc)?,
        (Domain::Component, Method::Quadrature) => component_invariants(&model, eps, qc)?,
        (Domain::Component, Method::Qmc) => component_invariants_qmc(&model, eps, qc)?,
    })
}

fn write_invariants(w: &mut dyn Write, inv: &IntegralInvariants) -> CliResult<()> {
    let d = inv.ambient_dim();
    let mut cols = vec!["domain".into(), "eps".into(), "volume".into(), "volume_se".into(), "normalized".into()];
    for i in 0..d {
        cols.push(format!("barycenter_{i}"));
    }
    for i in 0..d {
        for j in i..d {
            cols.push(format!("cov_{i}_{j}"));
        }
    }
    writeln!(w, "{}", cols.join(","))?;
    let mut row = vec![
        match inv.domain_kind {
            DomainKind::Patch => "patch".to_string(),
            DomainKind::Component => "component".to_string(),
        },
        fmt(inv.eps),
        fmt(inv.volume),
        inv.volume_se.map(fmt).unwrap_or_default(),
        inv.normalized.to_string(),
    ];
    row.extend(inv.barycenter.iter().map(|&v| fmt(v)));
    for i in 0..d {
        for j in i..d {
            row.push(fmt(inv.covariance.get(i, j)));
        }
    }
    writeln!(w, "{}", row.join(","))?;
    Ok(())
}

fn cmd_invariants(args: InvariantsArgs, config: &HashMap<String, String>) -> CliResult<()> {
    let eps = resolve_eps(args.eps, config)?;
    let qc = resolve_quadrature(&args.quad, config)?;
    let inv = compute_invariants(
        args.input.as_deref(),
        args.center.as_deref(),
        &args.model,
        eps,
        args.domain,
        args.method,
        &qc,
    )?;
    let mut out = open_output(args.output.as_deref())?;
    write_preamble(
        &mut out,
        "invariants",
        &[
            ("eps", fmt(eps)),
            ("truncation", "moments exact at quadrature tolerance; cloud moments are sample averages".into()),
        ],
    )?;
    write_invariants(&mut *out, &inv)?;
    out.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// estimate
// ---------------------------------------------------------------------------

fn write_estimate(w: &mut dyn Write, est: &CurvatureEstimate) -> CliResult<()> {
    let n = est.kappas.len();
    let d = est.normal.len();
    let mut cols = vec!["eps".into(), "mean".into(), "scalar".into(), "umbilic".into(), "h_singular".into()];
    for i in 0..n {
        cols.push(format!("kappa_{i}"));
    }
    for i in 0..d {
        cols.push(format!("normal_{i}"));
    }
    for i in 0..n {
        for j in 0..d {
            cols.push(format!("dir{i}_{j}"));
        }
    }
    writeln!(w, "{}", cols.join(","))?;
    let mut row = vec![
        fmt(est.eps),
        fmt(est.mean),
        fmt(est.scalar),
        est.umbilic.to_string(),
        est.h_singular.to_string(),
    ];
    row.extend(est.kappas.iter().map(|&v| fmt(v)));
    row.extend(est.normal.iter().map(|&v| fmt(v)));
    for dir in &est.directions {
        row.extend(dir.iter().map(|&v| fmt(v)));
    }
    writeln!(w, "{}", row.join(","))?;
    Ok(())
}

fn check_strict(strict: bool, est: &CurvatureEstimate) -> CliResult<()> {
    if strict && est.h_singular {
        return Err(CliError::Runtime(
            "strict mode: mean curvature too small to resolve principal curvatures \
             (minimal-surface fallback was used)"
                .into(),
        ));
    }
    Ok(())
}

fn cmd_estimate(
    args: EstimateArgs,
    config: &HashMap<String, String>,
    strict: bool,
) -> CliResult<()> {
    let eps = resolve_eps(args.eps, config)?;
    let qc = resolve_quadrature(&args.quad, config)?;
    let inv = compute_invariants(
        args.input.as_deref(),
        args.center.as_deref(),
        &args.model,
        eps,
        args.domain,
        Method::Quadrature,
        &qc,
    )?;
    let est = curvature_from_invariants(&inv)?;
    check_strict(strict, &est)?;
    let mut out = open_output(args.output.as_deref())?;
    write_preamble(
        &mut out,
        "estimate",
        &[
            ("eps", fmt(eps)),
            ("domain", match args.domain {
                Domain::Patch => "patch".into(),
                Domain::Component => "component".into(),
            }),
            ("truncation", "descriptor error O(eps) per curvature, O(eps^2) for mean and scalar".into()),
        ],
    )?;
    write_estimate(&mut *out, &est)?;
    out.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepRow {
    eps: f64,
    mean_est: f64,
    mean_err: f64,
    scalar_est: f64,
    scalar_err: f64,
    kappa_err: f64,
}

fn sweep_grid(args: &SweepArgs, config: &HashMap<String, String>) -> CliResult<Vec<f64>> {
    let grid = match &args.eps_grid {
        Some(spec) => parse_f64_list(spec, "--eps-grid")?,
        None => {
            let eps0 = resolve_eps(args.eps, config)?;
            (0..4).map(|j| eps0 * 0.5f64.powi(j)).collect()
        }
    };
    if grid.len() < 3 {
        return Err(usage(format!(
            "a sweep needs at least 3 scales to fit a slope, got {}",
            grid.len()
        )));
    }
    for &e in &grid {
        if !(e > 0.0) || !e.is_finite() {
            return Err(usage(format!("scales must be positive and finite, got {e}")));
        }
    }
    Ok(grid)
}

/// Least-squares slope of `log err` against `log eps`.
fn loglog_slope(pairs: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = pairs
        .iter()
        .filter(|(_, err)| *err > 0.0)
        .map(|&(eps, err)| (eps.ln(), err.ln()))
        .collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

fn sweep_one(
    model: &HypersurfaceModel,
    eps: f64,
    domain: Domain,
    qc: &QuadratureConfig,
    strict: bool,
) -> CliResult<SweepRow> {
    let inv = match domain {
        Domain::Patch => patch_invariants(model, eps, qc)?,
        Domain::Component => component_invariants(model, eps, qc)?,
    };
    let est = curvature_from_invariants(&inv)?;
    check_strict(strict, &est)?;
    let oracle = model.exact_curvatures(&vec![0.0; model.ambient_dim()])?;
    let mut exact = oracle.kappas.clone();
    let mut got = est.kappas.clone();
    exact.sort_by(|a, b| a.total_cmp(b));
    got.sort_by(|a, b| a.total_cmp(b));
    let kappa_err = exact
        .iter()
        .zip(&got)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(SweepRow {
        eps,
        mean_est: est.mean,
        mean_err: (est.mean - oracle.mean).abs(),
        scalar_est: est.scalar,
        scalar_err: (est.scalar - oracle.scalar).abs(),
        kappa_err,
    })
}

fn cmd_sweep(args: SweepArgs, config: &HashMap<String, String>, strict: bool) -> CliResult<()> {
    let grid = sweep_grid(&args, config)?;
    let qc = resolve_quadrature(&args.quad, config)?;
    let model = hypersurface_model(&args.model)?;
    let jobs = match args.jobs {
        Some(j) => j,
        None => config_get::<usize>(config, "jobs")?.unwrap_or(1),
    }
    .clamp(1, grid.len());

    let mut rows: Vec<Option<CliResult<SweepRow>>> = Vec::new();
    rows.resize_with(grid.len(), || None);
    if jobs == 1 {
        for (i, &eps) in grid.iter().enumerate() {
            rows[i] = Some(sweep_one(&model, eps, args.domain, &qc, strict));
        }
    } else {
        // deterministic: workers pull indices from a shared counter and
        // store results by index, so the output order never depends on
        // scheduling
        let next = std::sync::atomic::AtomicUsize::new(0);
        let slots = std::sync::Mutex::new(&mut rows);
        std::thread::scope(|scope| {
            for _ in 0..jobs {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                    if i >= grid.len() {
                        break;
                    }
                    let r = sweep_one(&model, grid[i], args.domain, &qc, strict);
                    slots.lock().unwrap()[i] = Some(r);
                });
            }
        });
    }
    let rows: Vec<SweepRow> = rows
        .into_iter()
        .map(|r| r.expect("every scale is assigned to a worker"))
        .collect::<CliResult<_>>()?;

    let mut out = open_output(args.output.as_deref())?;
    write_preamble(
        &mut out,
        "sweep",
        &[
            ("domain", match args.domain {
                Domain::Patch => "patch".into(),
                Domain::Component => "component".into(),
            }),
            ("scales", grid.len().to_string()),
            ("truncation", "expected slopes: >=1 for kappa errors, >=2 for mean and scalar".into()),
        ],
    )?;
    writeln!(out, "eps,mean_est,mean_abs_err,scalar_est,scalar_abs_err,max_kappa_abs_err")?;
    for r in &rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt(r.eps),
            fmt(r.mean_est),
            fmt(r.mean_err),
            fmt(r.scalar_est),
            fmt(r.scalar_err),
            fmt(r.kappa_err)
        )?;
    }
    let slope = |f: fn(&SweepRow) -> f64| {
        loglog_slope(&rows.iter().map(|r| (r.eps, f(r))).collect::<Vec<_>>())
    };
    writeln!(out, "# slope mean_abs_err = {:.3}", slope(|r| r.mean_err))?;
    writeln!(out, "# slope scalar_abs_err = {:.3}", slope(|r| r.scalar_err))?;
    writeln!(out, "# slope max_kappa_abs_err = {:.3}", slope(|r| r.kappa_err))?;
    out.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// riemann
// ---------------------------------------------------------------------------

fn cmd_riemann(args: RiemannArgs, config: &HashMap<String, String>, strict: bool) -> CliResult<()> {
    let eps = resolve_eps(args.eps, config)?;
    let cloud = read_cloud_file(&args.input)?;
    let center = parse_center(args.center.as_deref(), cloud.ambient_dim)?;
    let curv = estimate_submanifold_curvature(&cloud, &center, eps, args.dim)?;
    if strict && curv.h_singular.iter().any(|&s| s) {
        return Err(CliError::Runtime(
            "strict mode: a normal projection was mean-curvature singular; \
             its form component carries a sign ambiguity"
                .into(),
        ));
    }
    let n = curv.frame.tangent_dim();
    let k = curv.frame.codim();
    let mut out = open_output(args.output.as_deref())?;
    write_preamble(
        &mut out,
        "riemann",
        &[
            ("eps", fmt(eps)),
            ("tangent_dim", n.to_string()),
            ("codim", k.to_string()),
            ("frame", "tangent/normal indices refer to the PCA-adapted frame of this run".into()),
            ("h_singular", curv
                .h_singular
                .iter()
                .map(|b| b.to_string())
                .collect::<Vec<_>>()
                .join(";")),
        ],
    )?;
    writeln!(out, "quantity,i,j,k,l,value")?;
    writeln!(out, "scalar,,,,,{}", fmt(curv.scalar))?;
    for (j, &m) in curv.mean_vector.iter().enumerate() {
        writeln!(out, "mean_vector,{j},,,,{}", fmt(m))?;
    }
    for (idx, form) in curv.second_fundamental.iter().enumerate() {
        for a in 0..n {
            for b in a..n {
                writeln!(out, "second_fundamental,{idx},{a},{b},,{}", fmt(form.get(a, b)))?;
            }
        }
    }
    for a in 0..n {
        for b in a..n {
            writeln!(out, "ricci,{a},{b},,,{}", fmt(curv.ricci.get(a, b)))?;
        }
    }
    for m in 0..n {
        for nn in (m + 1)..n {
            for a in 0..n {
                for b in (a + 1)..n {
                    writeln!(
                        out,
                        "riemann,{m},{nn},{a},{b},{}",
                        fmt(curv.riemann.get(m, nn, a, b))
                    )?;
                }
            }
        }
    }
    out.flush()?;
    Ok(())
}
