//! Command-line front end: problem ingestion, the built-in example fixtures,
//! separation/classification/density runs, and plot-ready table emission.

mod problem;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use conesep::density::{abb_experiment, section_shrink, DensityParams, LocalOutcome};
use conesep::dilation::{normalize_base, HenigDilation};
use conesep::efficiency::{label_cloud, scalarize_section, CertKind, PointLabel};
use conesep::separation::{find_witness, ssp_gap, Verdict};
use conesep::{Error as CoreError, Norm};
use problem::{fixture_spec, parse, parse_norm, resolve, serialize, ProblemSpec, Resolved};
use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::Instant;

const VERSION: &str = env!("CARGO_PKG_VERSION");

// Exit codes: 0 success / holds_certified, 1 fails_certified,
// 2 inconclusive, 3 parse or validation error, 4 precondition violation,
// 5 internal error.
const EXIT_FAILS: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_PARSE: u8 = 3;
const EXIT_PRECONDITION: u8 = 4;
const EXIT_INTERNAL: u8 = 5;

#[derive(Parser)]
#[command(
    name = "conesep",
    version,
    about = "Cone separation and Henig proper efficiency toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Structured key = value report.
    Structured,
    /// Delimited table only.
    Table,
}

#[derive(Args)]
struct CommonArgs {
    /// Problem file path, or fixture:NAME for a built-in fixture.
    problem: String,
    /// Override the space norm (l1, l2, linf).
    #[arg(long)]
    norm: Option<String>,
    /// Override the sampling mesh.
    #[arg(long)]
    mesh: Option<f64>,
    /// Override the membership tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Override the sampling seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override eps (comma-separated list accepted).
    #[arg(long)]
    eps: Option<String>,
    /// Override delta.
    #[arg(long)]
    delta: Option<f64>,
    /// Override the fixture grid step.
    #[arg(long)]
    h: Option<f64>,
    /// Write the table output to this path.
    #[arg(long)]
    out: Option<String>,
    /// Output format.
    #[arg(long, value_enum, default_value = "structured")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Strict separation property of the problem's cone pair.
    Ssp(CommonArgs),
    /// Pareto/Henig classification of the problem's point cloud.
    Classify(CommonArgs),
    /// Scalarize the Henig section at x0 and certify the minimizer.
    Scalarize(CommonArgs),
    /// Shrink the sections A ∩ (-C_{1/n}) below the eps ball.
    Shrink(CommonArgs),
    /// Density experiment: approximate every minimal point by certified
    /// Henig proper points.
    Density(CommonArgs),
    /// Materialize a built-in fixture as a problem file.
    Fixture {
        /// One of example-3-ssp, example-3-bp, example-4-curve,
        /// example-4-clipped.
        name: String,
        #[arg(long, default_value_t = 0.01)]
        h: f64,
        #[arg(long, default_value = "l2")]
        norm: String,
        #[arg(long)]
        out: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(classify_error(&e))
        }
    }
}

fn classify_error(e: &anyhow::Error) -> u8 {
    if let Some(core) = e.downcast_ref::<CoreError>() {
        return match core {
            CoreError::Precondition(_) | CoreError::NoBoundedBase => EXIT_PRECONDITION,
            CoreError::DimensionMismatch { .. }
            | CoreError::EmptyInput(_)
            | CoreError::InvalidParameter { .. } => EXIT_PARSE,
            CoreError::DegenerateCone(_) => EXIT_INTERNAL,
        };
    }
    EXIT_PARSE
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Fixture { name, h, norm, out } => {
            let spec = fixture_spec(&name, h, parse_norm(&norm)?)?;
            let text = serialize(&spec);
            match out {
                Some(path) => {
                    std::fs::write(&path, &text).with_context(|| format!("writing {path}"))?
                }
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Ssp(args) => cmd_ssp(args),
        Command::Classify(args) => cmd_classify(args),
        Command::Scalarize(args) => cmd_scalarize(args),
        Command::Shrink(args) => cmd_shrink(args),
        Command::Density(args) => cmd_density(args),
    }
}

/// Load the problem, apply flag overrides, resolve to core objects.
fn load(args: &CommonArgs) -> Result<(ProblemSpec, Resolved)> {
    let mut spec = if let Some(name) = args.problem.strip_prefix("fixture:") {
        let h = args.h.unwrap_or(0.01);
        let norm = match &args.norm {
            Some(n) => parse_norm(n)?,
            None => Norm::L2,
        };
        fixture_spec(name, h, norm)?
    } else {
        let text = std::fs::read_to_string(&args.problem)
            .with_context(|| format!("reading problem file {}", args.problem))?;
        parse(&text)?
    };
    if let Some(n) = &args.norm {
        spec.norm = parse_norm(n)?;
    }
    if let Some(v) = args.mesh {
        spec.params.mesh = Some(v);
    }
    if let Some(v) = args.tol {
        spec.params.tol = Some(v);
    }
    if let Some(v) = args.seed {
        spec.params.seed = Some(v);
    }
    if let Some(v) = &args.eps {
        let list: Vec<f64> = v
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|e| anyhow!("bad --eps: {e}"))
            })
            .collect::<Result<_>>()?;
        spec.params.eps = Some(list);
    }
    if let Some(v) = args.delta {
        spec.params.delta = Some(v);
    }
    if let Some(v) = args.h {
        spec.params.h = Some(v);
    }
    let resolved = resolve(&spec)?;
    Ok((spec, resolved))
}

struct Report {
    lines: Vec<(String, String)>,
    table_header: Option<String>,
    table_rows: Vec<String>,
}

impl Report {
    fn new(command: &str, args: &CommonArgs, r: &Resolved) -> Report {
        let mut rep = Report {
            lines: Vec::new(),
            table_header: None,
            table_rows: Vec::new(),
        };
        rep.push("command", command);
        rep.push("problem", &args.problem);
        rep.push("version", VERSION);
        rep.push("dim", r.space.dim);
        rep.push("norm", r.space.norm.name());
        rep.push("mesh", r.mesh);
        rep.push("tol", r.tol);
        rep.push("seed", r.seed);
        rep
    }

    fn push(&mut self, key: &str, value: impl std::fmt::Display) {
        self.lines.push((key.to_string(), value.to_string()));
    }

    fn push_point(&mut self, key: &str, coords: &[f64]) {
        let parts: Vec<String> = coords.iter().map(|x| format!("{x}")).collect();
        self.push(key, format!("({})", parts.join(", ")));
    }

    fn table(&mut self, header: &str) {
        self.table_header = Some(header.to_string());
    }

    fn row(&mut self, row: String) {
        self.table_rows.push(row);
    }

    /// Emit per the format flag; the wall time sits outside the
    /// deterministic payload lines.
    fn emit(&self, format: Format, out: Option<&str>, started: Instant) -> Result<()> {
        let mut table = String::new();
        if let Some(header) = &self.table_header {
            writeln!(table, "{header}").unwrap();
            for row in &self.table_rows {
                writeln!(table, "{row}").unwrap();
            }
        }
        match format {
            Format::Table => {
                if let Some(path) = out {
                    std::fs::write(path, &table).with_context(|| format!("writing {path}"))?;
                } else {
                    print!("{table}");
                }
            }
            Format::Structured => {
                println!("conesep-report");
                for (k, v) in &self.lines {
                    println!("{k} = {v}");
                }
                match (out, self.table_header.is_some()) {
                    (Some(path), true) => {
                        std::fs::write(path, &table).with_context(|| format!("writing {path}"))?;
                        println!("table_file = {path}");
                    }
                    (None, true) => {
                        println!("table:");
                        print!("{table}");
                    }
                    _ => {}
                }
                println!("wall_ms = {}", started.elapsed().as_millis());
            }
        }
        Ok(())
    }
}

fn cmd_ssp(args: CommonArgs) -> Result<ExitCode> {
    let started = Instant::now();
    let (_, r) = load(&args)?;
    let cone = r
        .cone
        .as_ref()
        .ok_or_else(|| anyhow!("problem has no cone"))?;
    let cone2 = r
        .cone2
        .as_ref()
        .ok_or_else(|| anyhow!("ssp needs two cones (cone2 missing)"))?;
    let report = ssp_gap(&r.space, cone, cone2.into(), r.mesh, r.seed)?;
    let mut rep = Report::new("ssp", &args, &r);
    rep.push("result.verdict", report.verdict.name());
    rep.push("result.gap_sampled", report.gap_sampled);
    rep.push("result.covering_radius", report.covering_radius);
    rep.push("result.gap_lower_bound", report.gap_lower_bound);
    rep.push("result.exact", report.exact);
    rep.push_point("result.nearest_p", &report.nearest_pair.0.coords);
    rep.push_point("result.nearest_q", &report.nearest_pair.1.coords);
    rep.push_point(
        "result.separating_functional",
        &report.separating_functional.coeffs,
    );
    rep.emit(args.format, args.out.as_deref(), started)?;
    Ok(match report.verdict {
        Verdict::HoldsCertified => ExitCode::SUCCESS,
        Verdict::FailsCertified => ExitCode::from(EXIT_FAILS),
        Verdict::Inconclusive => ExitCode::from(EXIT_INCONCLUSIVE),
    })
}

fn cmd_classify(args: CommonArgs) -> Result<ExitCode> {
    let started = Instant::now();
    let (_, r) = load(&args)?;
    let cone = r
        .cone
        .as_ref()
        .ok_or_else(|| anyhow!("problem has no cone"))?;
    let cloud = r
        .cloud
        .as_ref()
        .ok_or_else(|| anyhow!("classify needs a point set"))?;
    let ladder: Vec<f64> = if r.eps.is_empty() {
        r.eps_ladder.clone()
    } else {
        r.eps.clone()
    };
    let labels = label_cloud(&r.space, cloud, cone, &ladder, r.tol, r.alpha_grid)?;
    let mut rep = Report::new("classify", &args, &r);
    let mut mins = 0usize;
    let mut ghe = 0usize;
    let coord_cols: Vec<String> = (0..r.space.dim).map(|i| format!("x{i}")).collect();
    rep.table(&format!(
        "{},label,cert_kind,cert_eps,cert_alpha,slack",
        coord_cols.join(",")
    ));
    for (p, label) in cloud.points.iter().zip(&labels) {
        let coords: Vec<String> = p.coords.iter().map(|x| format!("{x}")).collect();
        let row = match label {
            PointLabel::Dominated { .. } => format!("{},dominated,,,,", coords.join(",")),
            PointLabel::MinOnlyAtResolution => {
                mins += 1;
                format!("{},min,,,,", coords.join(","))
            }
            PointLabel::MinAndGhe(cert) => {
                mins += 1;
                ghe += 1;
                match &cert.kind {
                    CertKind::DilatingCone { eps, .. } => format!(
                        "{},min_and_ghe,dilating_cone,{eps},,{}",
                        coords.join(","),
                        cert.slack
                    ),
                    CertKind::BishopPhelps { alpha, .. } => format!(
                        "{},min_and_ghe,bishop_phelps,,{alpha},{}",
                        coords.join(","),
                        cert.slack
                    ),
                }
            }
        };
        rep.row(row);
    }
    rep.push("result.points", cloud.len());
    rep.push("result.min_points", mins);
    rep.push("result.ghe_certified", ghe);
    rep.emit(args.format, args.out.as_deref(), started)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_scalarize(args: CommonArgs) -> Result<ExitCode> {
    let started = Instant::now();
    let (_, r) = load(&args)?;
    let cone = r
        .cone
        .as_ref()
        .ok_or_else(|| anyhow!("problem has no cone"))?;
    let cloud = r
        .cloud
        .as_ref()
        .ok_or_else(|| anyhow!("scalarize needs a point set"))?;
    let x0 = r.x0.as_ref().ok_or_else(|| anyhow!("scalarize needs x0"))?;
    let base = normalize_base(&r.space, cone)?;
    let henig = HenigDilation::build(&r.space, base, r.delta)?;
    let gap = ssp_gap(&r.space, cone, (&henig).into(), r.mesh, r.seed)?;
    if gap.verdict != Verdict::HoldsCertified {
        bail!(CoreError::Precondition(format!(
            "SSP not certified for (C, C_(B,delta)): verdict {}",
            gap.verdict.name()
        )));
    }
    let w = find_witness(
        &r.space,
        cone,
        (&henig).into(),
        &gap,
        r.alpha_grid,
        r.mesh,
        r.seed,
    )?
    .ok_or_else(|| {
        anyhow!(CoreError::Precondition(
            "no witness found on the certified pair".to_string()
        ))
    })?;
    let (x1, cert) = scalarize_section(&r.space, cloud, x0, cone, r.delta, &w, r.tol)?;
    let mut rep = Report::new("scalarize", &args, &r);
    rep.push("result.delta", r.delta);
    rep.push("result.witness_alpha", w.alpha);
    rep.push("result.witness_delta1", w.delta1);
    rep.push("result.witness_delta2", w.delta2);
    rep.push_point("result.x1", &x1.coords);
    rep.push("result.cert_kind", cert.kind.name());
    rep.push("result.cert_slack", cert.slack);
    rep.emit(args.format, args.out.as_deref(), started)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_shrink(args: CommonArgs) -> Result<ExitCode> {
    let started = Instant::now();
    let (_, r) = load(&args)?;
    let cone = r
        .cone
        .as_ref()
        .ok_or_else(|| anyhow!("problem has no cone"))?;
    let cloud = r
        .cloud
        .as_ref()
        .ok_or_else(|| anyhow!("shrink needs a point set"))?;
    // The origin must be the tested minimal point: translate by -x0 if given.
    let cloud = match &r.x0 {
        Some(x0) => {
            let shift: Vec<f64> = x0.coords.iter().map(|v| -v).collect();
            cloud.translated(&shift)
        }
        None => cloud.clone(),
    };
    let eps = *r.eps.first().ok_or_else(|| anyhow!("shrink needs eps"))?;
    let params = DensityParams {
        mesh: r.mesh,
        tol: r.tol,
        seed: r.seed,
        n_max: r.n_max,
        alpha_grid_size: r.alpha_grid,
    };
    let report = section_shrink(&r.space, &cloud, cone, eps, r.n_max, &params)?;
    let mut rep = Report::new("shrink", &args, &r);
    rep.push("result.eps", report.eps);
    match report.n_eps {
        Some(n) => rep.push("result.n_eps", n),
        None => rep.push("result.n_eps", "none"),
    }
    rep.table("n,max_norm_in_section");
    for (i, v) in report.max_norm_trace.iter().enumerate() {
        rep.row(format!("{},{v}", i + 1));
    }
    rep.emit(args.format, args.out.as_deref(), started)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_density(args: CommonArgs) -> Result<ExitCode> {
    let started = Instant::now();
    let (_, r) = load(&args)?;
    let cone = r
        .cone
        .as_ref()
        .ok_or_else(|| anyhow!("problem has no cone"))?;
    let cloud = r
        .cloud
        .as_ref()
        .ok_or_else(|| anyhow!("density needs a point set"))?;
    let params = DensityParams {
        mesh: r.mesh,
        tol: r.tol,
        seed: r.seed,
        n_max: r.n_max,
        alpha_grid_size: r.alpha_grid,
    };
    let eps_list = if r.eps.is_empty() {
        vec![0.05]
    } else {
        r.eps.clone()
    };
    let table = abb_experiment(&r.space, cloud, cone, &eps_list, r.delta, &params)?;
    let mut rep = Report::new("density", &args, &r);
    rep.push("result.rows", table.rows.len());
    rep.push("result.successes", table.successes);
    rep.push("result.failures", table.failures);
    let coord_cols: Vec<String> = (0..r.space.dim).map(|i| format!("xbar{i}")).collect();
    let point_cols: Vec<String> = (0..r.space.dim).map(|i| format!("xeps{i}")).collect();
    rep.table(&format!(
        "{},eps,found,{},distance,cert_kind,fail_stage",
        coord_cols.join(","),
        point_cols.join(",")
    ));
    for row in &table.rows {
        let xbar: Vec<String> = row.xbar.coords.iter().map(|x| format!("{x}")).collect();
        match &row.outcome {
            LocalOutcome::Found {
                point,
                certificate,
                distance,
                ..
            } => {
                let xeps: Vec<String> = point.coords.iter().map(|x| format!("{x}")).collect();
                rep.row(format!(
                    "{},{},1,{},{},{},",
                    xbar.join(","),
                    row.eps,
                    xeps.join(","),
                    distance,
                    certificate.kind.name()
                ));
            }
            LocalOutcome::Failed(stage) => {
                let empty: Vec<String> = (0..r.space.dim).map(|_| String::new()).collect();
                rep.row(format!(
                    "{},{},0,{},,,{}",
                    xbar.join(","),
                    row.eps,
                    empty.join(","),
                    stage.name()
                ));
            }
        }
    }
    rep.emit(args.format, args.out.as_deref(), started)?;
    Ok(ExitCode::SUCCESS)
}
