//! Command-line front end: bodies and curves travel as JSON files, reports as
//! JSON (and optionally CSV).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use sympolar::capacities::{cza_upper, ehz_bracket, BracketOptions, DEFAULT_CHAINS, DEFAULT_CZA_RESTARTS};
use sympolar::characteristics::{
    characteristic_residual, clarke_minimize, h_omega_length, schaffer_min_length, symmetrize, ClarkeConfig,
    ClosedCurve, SchafferConfig,
};
use sympolar::convex::json::{body_from_json_str, body_to_json_string};
use sympolar::harness::{
    generate, verify_capacity_claims, verify_lp_volume, verify_reduction_claims, verify_self_polar_volume,
    verify_tensor_power_identity, CapacityClaimsOptions, CheckKind, ExperimentReport, GeneratorKind, GeneratorSpec,
};
use sympolar::scalar::{parse_rational, Rational};
use sympolar::symplectic::cj::c_j_with;
use sympolar::symplectic::reduction::symplectic_reduction_exact;
use sympolar::symplectic::{
    certificate::certificate_with_directions, squeeze_to_self_polar, symplectic_polar, symplectic_projection,
    symplectic_reduction, SymplecticPlane,
};
use sympolar::{ConvexBody, Error, Result};

#[derive(Parser)]
#[command(name = "sympolar", version, about = "Symplectic polarity toolkit for convex bodies")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Record wall-clock runtime (reports get `runtime_seconds`; other
    /// commands print it on stderr).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Symplectic polar of a body.
    Sympolar { body: PathBuf },
    /// Estimate of `c_J`.
    Cj {
        body: PathBuf,
        #[arg(long, default_value_t = sympolar::symplectic::cj::DEFAULT_RESTARTS)]
        restarts: usize,
    },
    /// Self-polarity certificate.
    Certify {
        body: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Sampled directions for oracle bodies.
        #[arg(long, default_value_t = 2000)]
        directions: usize,
    },
    /// Reduction along a vector (comma separated; rationals like `1/2` keep
    /// exact polytopes exact).
    Reduce {
        body: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        vector: Vec<String>,
    },
    /// ω-orthogonal projection onto `span{u, v}`.
    Project {
        body: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        u: Vec<String>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        v: Vec<String>,
    },
    /// Greedy cuts towards a self-polar body; the body goes to `--out`, the
    /// run summary to `--summary` (or stderr).
    Squeeze {
        body: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        tol: f64,
        #[arg(long, default_value_t = 200)]
        max_iters: usize,
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Capacity estimates.
    Capacity {
        #[command(subcommand)]
        command: CapacityCommand,
    },
    /// Clarke-dual characteristic solver.
    Clarke {
        #[command(subcommand)]
        command: ClarkeCommand,
    },
    /// Shortest symmetric closed curve on the boundary, in the body's gauge.
    Schaffer {
        body: PathBuf,
        #[arg(long, default_value_t = 16)]
        half_points: usize,
        #[arg(long, default_value_t = 4)]
        restarts: usize,
        #[arg(long, default_value_t = 200)]
        max_iters: usize,
    },
    /// Reproducible experiments.
    Verify {
        #[command(subcommand)]
        experiment: Experiment,
    },
    /// Write a generated body.
    Generate(GenerateArgs),
}

#[derive(Subcommand)]
enum CapacityCommand {
    /// Certified lower/upper bracket on the EHZ capacity.
    Bracket {
        body: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CHAINS)]
        chains: usize,
        #[arg(long, default_value_t = sympolar::symplectic::cj::DEFAULT_RESTARTS)]
        cj_restarts: usize,
        /// Also run the Clarke solver (used only if it passes calibration).
        #[arg(long)]
        clarke: bool,
    },
    /// Upper estimate of the cylindrical capacity.
    Cza {
        body: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CZA_RESTARTS)]
        restarts: usize,
    },
}

#[derive(Subcommand)]
enum ClarkeCommand {
    /// Minimize over closed curves; `--trace` writes the objective per iteration as CSV.
    Solve {
        body: PathBuf,
        #[arg(long = "M", alias = "points", default_value_t = 256)]
        points: usize,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[arg(long, default_value_t = 3000)]
        max_iters: usize,
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write the curve alone (JSON array of points).
        #[arg(long)]
        curve_out: Option<PathBuf>,
    },
    /// Symmetrize a curve (JSON array of points) against a body.
    Symmetrize { body: PathBuf, curve: PathBuf },
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, default_value_t = 20)]
    trials: usize,
    /// Also write one CSV row per assertion.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct BodyFamily {
    #[arg(long, default_value = "random-symmetric-polytope")]
    kind: GeneratorKind,
    #[arg(long, default_value_t = 4)]
    dim: usize,
    #[arg(long)]
    vertices: Option<usize>,
    #[arg(long)]
    symplectic_image: bool,
}

impl BodyFamily {
    fn spec(&self, seed: u64) -> GeneratorSpec {
        GeneratorSpec {
            vertices: self.vertices,
            symplectic_image: self.symplectic_image,
            ..GeneratorSpec::new(self.kind, self.dim, seed)
        }
    }
}

#[derive(Subcommand)]
enum Experiment {
    /// Closed-form volumes of l_p-sums.
    LpVolume(ExperimentArgs),
    /// Volumes of ℓ_1-powers and products of a polytope.
    TensorPower {
        /// Base polytope; defaults to the square.
        #[arg(long)]
        body: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Volume bounds for self-polar bodies.
    SelfPolar {
        #[command(flatten)]
        common: ExperimentArgs,
        #[command(flatten)]
        family: BodyFamily,
    },
    /// Capacity brackets and inequalities.
    Capacities {
        #[command(flatten)]
        common: ExperimentArgs,
        #[command(flatten)]
        family: BodyFamily,
        #[arg(long, default_value_t = DEFAULT_CHAINS)]
        chains: usize,
        #[arg(long, default_value_t = sympolar::symplectic::cj::DEFAULT_RESTARTS)]
        cj_restarts: usize,
        #[arg(long, default_value_t = DEFAULT_CZA_RESTARTS)]
        cza_restarts: usize,
        /// Skip the golden bodies and the Clarke cross-check.
        #[arg(long)]
        no_golden: bool,
    },
    /// Self-polarity of reductions and volume bounds.
    Reductions {
        #[command(flatten)]
        common: ExperimentArgs,
        #[command(flatten)]
        family: BodyFamily,
    },
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    kind: GeneratorKind,
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    vertices: Option<usize>,
    /// Exponent for lp-sum.
    #[arg(long)]
    p: Option<f64>,
    /// Rational ε for hexagon-cylinder, e.g. `1/10`.
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    symplectic_image: bool,
}

fn read_body(path: &Path) -> Result<ConvexBody> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    body_from_json_str(&text)
}

fn read_curve(path: &Path) -> Result<ClosedCurve> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))
}

fn write_text(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::Parse(format!("{}: {e}", p.display()))),
        None => {
            use std::io::Write;
            // a closed pipe (`| head`) is not an error
            match writeln!(std::io::stdout().lock(), "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Error::Parse(format!("stdout: {e}"))),
                _ => Ok(()),
            }
        }
    }
}

fn write_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    write_text(out, &text)
}

fn write_body(out: Option<&Path>, body: &ConvexBody) -> Result<()> {
    write_text(out, &body_to_json_string(body))
}

/// Float and, when every entry is rational, exact forms of a vector.
fn parse_vector(entries: &[String]) -> Result<(Vec<f64>, Option<Vec<Rational>>)> {
    if entries.is_empty() {
        return Err(Error::Config("empty vector".into()));
    }
    let exact: Option<Vec<Rational>> = entries.iter().map(|s| parse_rational(s.trim()).ok()).collect();
    let float = match &exact {
        Some(v) => v.iter().map(sympolar::scalar::Field::to_f64).collect(),
        None => entries
            .iter()
            .map(|s| s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{s:?}: {e}"))))
            .collect::<Result<_>>()?,
    };
    Ok((float, exact))
}

#[derive(Serialize)]
struct SymmetrizeOutput {
    curve: ClosedCurve,
    h_omega_length: sympolar::Scalar,
    characteristic_residual: sympolar::Scalar,
    input_length: sympolar::Scalar,
}

/// `Ok(true)` when every asserted check held.
fn run(cli: &Cli) -> Result<bool> {
    let out = cli.out.as_deref();
    let seed = cli.seed;
    match &cli.command {
        Command::Sympolar { body } => write_body(out, &symplectic_polar(&read_body(body)?)?)?,
        Command::Cj { body, restarts } => write_json(out, &c_j_with(&read_body(body)?, *restarts, seed)?)?,
        Command::Certify { body, tol, directions } => {
            write_json(out, &certificate_with_directions(&read_body(body)?, *tol, *directions, seed)?)?
        }
        Command::Reduce { body, vector } => {
            let x = read_body(body)?;
            let (v, exact) = parse_vector(vector)?;
            let reduced = match exact {
                Some(e) if x.as_exact().is_some() => symplectic_reduction_exact(&x, &e)?,
                _ => symplectic_reduction(&x, &v)?,
            };
            write_body(out, &reduced)?
        }
        Command::Project { body, u, v } => {
            let x = read_body(body)?;
            let plane = match (parse_vector(u)?, parse_vector(v)?) {
                ((_, Some(ue)), (_, Some(ve))) => SymplecticPlane::exact(ue, ve)?,
                ((uf, _), (vf, _)) => SymplecticPlane::new(uf, vf)?,
            };
            write_body(out, &symplectic_projection(&x, &plane)?)?
        }
        Command::Squeeze { body, tol, max_iters, summary } => {
            let outcome = squeeze_to_self_polar(&read_body(body)?, *tol, *max_iters)?;
            write_body(out, &outcome.body)?;
            let text = serde_json::to_string_pretty(&outcome).map_err(|e| Error::Parse(e.to_string()))?;
            match summary {
                Some(p) => write_text(Some(p), &text)?,
                None => eprintln!("{text}"),
            }
        }
        Command::Capacity { command } => match command {
            CapacityCommand::Bracket { body, chains, cj_restarts, clarke } => {
                let opts = BracketOptions {
                    chains: *chains,
                    cj_restarts: *cj_restarts,
                    seed,
                    clarke: clarke.then(|| ClarkeConfig { seed, ..ClarkeConfig::default() }),
                    ..BracketOptions::default()
                };
                write_json(out, &ehz_bracket(&read_body(body)?, &opts)?)?
            }
            CapacityCommand::Cza { body, restarts } => write_json(out, &cza_upper(&read_body(body)?, *restarts, seed)?)?,
        },
        Command::Clarke { command } => match command {
            ClarkeCommand::Solve { body, points, restarts, max_iters, trace, curve_out } => {
                let config = ClarkeConfig { points: *points, restarts: *restarts, max_iters: *max_iters, seed, ..ClarkeConfig::default() };
                let est = clarke_minimize(&read_body(body)?, &config)?;
                if let Some(path) = trace {
                    let mut w = csv::Writer::from_path(path).map_err(|e| Error::Parse(e.to_string()))?;
                    w.write_record(["iteration", "objective"]).map_err(|e| Error::Parse(e.to_string()))?;
                    for (i, v) in est.trace.iter().enumerate() {
                        w.write_record([i.to_string(), v.to_string()]).map_err(|e| Error::Parse(e.to_string()))?;
                    }
                    w.flush().map_err(|e| Error::Parse(e.to_string()))?;
                }
                if let Some(path) = curve_out {
                    write_json(Some(path), &est.curve)?;
                }
                write_json(out, &est)?
            }
            ClarkeCommand::Symmetrize { body, curve } => {
                let x = read_body(body)?;
                let c = read_curve(curve)?;
                let sym = symmetrize(&c, &x)?;
                write_json(
                    out,
                    &SymmetrizeOutput {
                        h_omega_length: h_omega_length(&sym, &x)?,
                        characteristic_residual: characteristic_residual(&sym, &x)?,
                        input_length: h_omega_length(&c, &x)?,
                        curve: sym,
                    },
                )?
            }
        },
        Command::Schaffer { body, half_points, restarts, max_iters } => {
            let config = SchafferConfig {
                half_points: *half_points,
                restarts: *restarts,
                max_iters: *max_iters,
                seed,
                ..SchafferConfig::default()
            };
            write_json(out, &schaffer_min_length(&read_body(body)?, &config)?)?
        }
        Command::Generate(a) => {
            let spec = GeneratorSpec {
                vertices: a.vertices,
                p: a.p,
                epsilon: a.epsilon.clone(),
                radius: a.radius,
                symplectic_image: a.symplectic_image,
                ..GeneratorSpec::new(a.kind, a.dim, seed)
            };
            write_body(out, &generate(&spec)?)?
        }
        Command::Verify { experiment } => {
            let start = Instant::now();
            let (mut report, csv_path) = match experiment {
                Experiment::LpVolume(c) => (verify_lp_volume(c.trials, seed)?, c.csv.as_deref()),
                Experiment::TensorPower { body, m, csv } => {
                    let k = match body {
                        Some(p) => read_body(p)?,
                        None => sympolar::harness::cube(2)?,
                    };
                    (verify_tensor_power_identity(&k, *m)?, csv.as_deref())
                }
                Experiment::SelfPolar { common, family } => {
                    (verify_self_polar_volume(&family.spec(seed), common.trials)?, common.csv.as_deref())
                }
                Experiment::Capacities { common, family, chains, cj_restarts, cza_restarts, no_golden } => {
                    let opts = CapacityClaimsOptions {
                        chains: *chains,
                        cj_restarts: *cj_restarts,
                        cza_restarts: *cza_restarts,
                        golden: !no_golden,
                        clarke: !no_golden,
                        seed,
                    };
                    (verify_capacity_claims(&family.spec(seed), common.trials, &opts)?, common.csv.as_deref())
                }
                Experiment::Reductions { common, family } => {
                    (verify_reduction_claims(&family.spec(seed), common.trials)?, common.csv.as_deref())
                }
            };
            if cli.timing {
                report.runtime_seconds = Some(start.elapsed().as_secs_f64());
            }
            write_text(out, &report.to_json())?;
            if let Some(path) = csv_path {
                write_text(Some(path), &report.to_csv()?)?;
            }
            summarize(&report);
            return Ok(report.passed());
        }
    }
    Ok(true)
}

fn summarize(report: &ExperimentReport) {
    let (ap, at) = report.count(CheckKind::Asserted);
    let (op, ot) = report.count(CheckKind::Observed);
    eprintln!("{}: asserted {ap}/{at} passed, observed {op}/{ot} held", report.experiment);
    for f in report.failures() {
        eprintln!("  FAILED {} ({:?} {:?} {:?}, tol {})", f.name, f.observed, f.relation, f.expected, f.tolerance);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = run(&cli);
    if cli.timing && !matches!(cli.command, Command::Verify { .. }) {
        eprintln!("runtime_seconds: {:.6}", start.elapsed().as_secs_f64());
    }
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
