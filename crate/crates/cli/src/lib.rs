//! The `walker` command line: argument table, dispatch and artifact output.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use walker_core::catalog::{self, verify_suite, Budget, Suite, WitnessLaw};
use walker_core::dynamics::{
    integrate_geodesic, monitor, parallel_transport, GeodesicState, IntegrationOptions, Monitor,
};
use walker_core::expression::{format_rational, parse_rational};
use walker_core::geometry::curvature_report;
use walker_core::random::rng;
use walker_core::spectral::{osserman_scan, sample_exact_direction, OperatorKind, SpectralReport};
use walker_core::{Point4, Rational, WalkerMetric};

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20_240_601;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "walker",
    version,
    about = "Curvature, Jordan data and geodesic blowup for Walker metrics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact Christoffel symbols, curvature, Ricci and Weyl tensors at a point.
    Analyze {
        #[command(flatten)]
        source: Source,
        /// Rational point `x1,x2,x3,x4`; entries may be written `p/q`.
        #[arg(long, value_parser = parse_point)]
        point: Point4<Rational>,
        #[command(flatten)]
        output: Output,
    },
    /// Jordan data of the Jacobi and conformal Jacobi operators plus an Osserman scan.
    Spectrum {
        #[command(flatten)]
        source: Source,
        /// Rational point `x1,x2,x3,x4`; entries may be written `p/q`.
        #[arg(long, value_parser = parse_point)]
        point: Point4<Rational>,
        /// Unit vectors sampled per causal class.
        #[arg(long, default_value_t = 16)]
        samples: usize,
        /// Spectrum comparison tolerance.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// RNG seed.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Integrates a geodesic and reports completion or finite-time blowup.
    Geodesic {
        #[command(flatten)]
        source: Source,
        /// Initial position `x1,x2,x3,x4`.
        #[arg(long, value_parser = parse_vector)]
        x0: [f64; 4],
        /// Initial velocity `v1,v2,v3,v4`.
        #[arg(long, value_parser = parse_vector)]
        v0: [f64; 4],
        /// Affine parameter horizon.
        #[arg(long, default_value_t = 10.0)]
        horizon: f64,
        /// Relative tolerance of the adaptive integrator.
        #[arg(long, default_value_t = 1e-8)]
        rtol: f64,
        /// Absolute tolerance of the adaptive integrator.
        #[arg(long, default_value_t = 1e-10)]
        atol: f64,
        /// Also transport the coordinate frame and record R(e1,e3,e3,e4).
        #[arg(long)]
        frame_monitor: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Replays the catalog expectations; exits 1 if any clause fails.
    Verify {
        /// Which group of catalog entries to verify.
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        /// Unit vectors sampled per causal class in spectrum scans.
        #[arg(long, default_value_t = 16)]
        samples: usize,
        /// Spectrum comparison tolerance.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// RNG seed.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Lists catalog ids with one-line descriptions.
    List {
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Metric file (JSON with label, parameters, psi33, psi34, psi44).
    #[arg(long)]
    pub metric: Option<PathBuf>,
    /// Catalog entry id, see `walker list`.
    #[arg(long)]
    pub catalog: Option<String>,
}

#[derive(Args, Debug)]
pub struct Output {
    /// Write the artifact here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Artifact format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    All,
    Thm31,
    Thm51,
    Thm61,
    Thm63,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::All => Suite::All,
            SuiteArg::Thm31 => Suite::Thm31,
            SuiteArg::Thm51 => Suite::Thm51,
            SuiteArg::Thm61 => Suite::Thm61,
            SuiteArg::Thm63 => Suite::Thm63,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

fn split4(s: &str) -> Result<[&str; 4], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    parts
        .try_into()
        .map_err(|p: Vec<&str>| format!("expected 4 comma-separated numbers, got {}", p.len()))
}

fn parse_point(s: &str) -> Result<Point4<Rational>, String> {
    let parts = split4(s)?;
    let mut out = Vec::with_capacity(4);
    for p in parts {
        out.push(parse_rational(p).map_err(|e| format!("{p:?}: {e}"))?);
    }
    let arr: [Rational; 4] = out.try_into().expect("four parts");
    Ok(Point4(arr))
}

fn parse_vector(s: &str) -> Result<[f64; 4], String> {
    match parse_point(s) {
        Ok(p) => Ok(p.to_f64().0),
        Err(_) => {
            let parts = split4(s)?;
            let mut out = [0.0; 4];
            for (o, p) in out.iter_mut().zip(parts) {
                *o = p.parse::<f64>().map_err(|e| format!("{p:?}: {e}"))?;
            }
            Ok(out)
        }
    }
}

struct Resolved {
    metric: WalkerMetric,
    entry: Option<catalog::CatalogEntry>,
}

fn resolve(source: &Source) -> Result<Resolved, CliError> {
    match (&source.metric, &source.catalog) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            let metric = WalkerMetric::from_json(&text).map_err(|e| {
                CliError::Usage(format!("invalid metric file {}: {e}", path.display()))
            })?;
            Ok(Resolved {
                metric,
                entry: None,
            })
        }
        (None, Some(id)) => {
            let entry = catalog::find_entry(id).map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(Resolved {
                metric: entry.metric.clone(),
                entry: Some(entry),
            })
        }
        _ => Err(CliError::Usage(
            "exactly one of --metric and --catalog is required".into(),
        )),
    }
}

fn emit(out: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(path) => write_file(path, text),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Internal(format!("writing output: {e}"))),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text)
        .map_err(|e| CliError::Internal(format!("writing {}: {e}", path.display())))
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn require_json(output: &Output, command: &str) -> Result<(), CliError> {
    if output.format == Format::Csv {
        return Err(CliError::Usage(format!("{command} only produces JSON")));
    }
    Ok(())
}

/// Executes a parsed command, writing artifacts to `stdout` or `--out`.
/// Returns the process exit code on success paths.
pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Analyze {
            source,
            point,
            output,
        } => {
            require_json(&output, "analyze")?;
            let r = resolve(&source)?;
            let report = curvature_report(&r.metric, &point);
            emit(&output.out, &json_text(&report.to_json()), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Spectrum {
            source,
            point,
            samples,
            tol,
            seed,
            output,
        } => {
            require_json(&output, "spectrum")?;
            let r = resolve(&source)?;
            let kinds = match &r.entry {
                Some(e) => vec![e.operator],
                None => vec![OperatorKind::Jacobi, OperatorKind::Conformal],
            };
            let mut ops = serde_json::Map::new();
            for kind in kinds {
                ops.insert(
                    kind.name().into(),
                    spectrum_for(&r.metric, &point, kind, samples, tol, seed)?,
                );
            }
            let v = json!({
                "label": r.metric.label,
                "point": point.0.iter().map(format_rational).collect::<Vec<_>>(),
                "seed": seed,
                "operators": ops,
            });
            emit(&output.out, &json_text(&v), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Geodesic {
            source,
            x0,
            v0,
            horizon,
            rtol,
            atol,
            frame_monitor,
            output,
        } => {
            let r = resolve(&source)?;
            let opts = IntegrationOptions::with_horizon(horizon).with_tolerances(rtol, atol);
            let (mut traj, outcome) =
                integrate_geodesic(&r.metric, &GeodesicState::new(x0, v0), &opts)
                    .map_err(|e| CliError::Usage(e.to_string()))?;
            let internal =
                |e: walker_core::dynamics::DynamicsError| CliError::Internal(e.to_string());
            for which in [Monitor::Energy, Monitor::Ricci] {
                let series = monitor(&r.metric, &traj, which, None).map_err(internal)?;
                traj.monitors.insert(which.name(), series);
            }
            let wants_frame = frame_monitor
                || r.entry
                    .as_ref()
                    .and_then(|e| e.witness.as_ref())
                    .is_some_and(|w| {
                        w.laws
                            .iter()
                            .any(|l| matches!(l, WitnessLaw::FrameCurvature { .. }))
                    });
            if wants_frame {
                let identity: [[f64; 4]; 4] = std::array::from_fn(|a| {
                    std::array::from_fn(|k| if a == k { 1.0 } else { 0.0 })
                });
                let frames = parallel_transport(&r.metric, &traj, &identity).map_err(internal)?;
                let which = Monitor::CurvatureComponent([0, 2, 2, 3]);
                let series = monitor(&r.metric, &traj, which, Some(&frames)).map_err(internal)?;
                traj.monitors.insert(which.name(), series);
            }
            let outcome_json = outcome.to_json();
            match (output.format, &output.out) {
                (Format::Csv, Some(path)) => {
                    write_file(path, &traj.to_csv_string())?;
                    emit(&None, &json_text(&outcome_json), stdout)?;
                }
                (Format::Csv, None) => emit(&None, &traj.to_csv_string(), stdout)?,
                (Format::Json, out) => {
                    let full = json!({
                        "label": r.metric.label,
                        "outcome": outcome_json,
                        "samples": traj.samples.len(),
                        "final_state": { "t": traj.last().t, "x": traj.last().x, "v": traj.last().v },
                    });
                    emit(out, &json_text(&full), stdout)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Verify {
            suite,
            samples,
            tol,
            seed,
            output,
        } => {
            require_json(&output, "verify")?;
            if samples < 2 {
                return Err(CliError::Usage("--samples must be at least 2".into()));
            }
            let budget = Budget {
                scan_samples: samples,
                tol,
                ..Budget::default()
            };
            let report = verify_suite(suite.into(), &budget, seed);
            emit(&output.out, &json_text(&report.to_json()), stdout)?;
            Ok(if report.passed() {
                EXIT_OK
            } else {
                EXIT_VERIFICATION_FAILED
            })
        }
        Command::List { output } => {
            let entries = catalog::catalog_entries();
            let text = match output.format {
                Format::Json => json_text(&Value::Array(
                    entries
                        .iter()
                        .map(|e| json!({ "id": e.id, "description": e.description }))
                        .collect(),
                )),
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    let internal = |e: csv::Error| CliError::Internal(e.to_string());
                    w.write_record(["id", "description"]).map_err(internal)?;
                    for e in &entries {
                        w.write_record([&e.id, &e.description]).map_err(internal)?;
                    }
                    let bytes = w
                        .into_inner()
                        .map_err(|e| CliError::Internal(e.to_string()))?;
                    String::from_utf8(bytes).map_err(|e| CliError::Internal(e.to_string()))?
                }
            };
            emit(&output.out, &text, stdout)?;
            Ok(EXIT_OK)
        }
    }
}

fn spectrum_for(
    m: &WalkerMetric,
    p: &Point4<Rational>,
    kind: OperatorKind,
    samples: usize,
    tol: f64,
    seed: u64,
) -> Result<Value, CliError> {
    let c = m.curvature().at(p);
    let mut r = rng(seed, 1);
    let d = sample_exact_direction(&c.metric(), 1, &mut r)
        .map_err(|e| CliError::Internal(e.to_string()))?;
    let op = match kind {
        OperatorKind::Jacobi => c.jacobi(&d.raw),
        OperatorKind::Conformal => c.conformal_jacobi(&d.raw),
    };
    let report = SpectralReport::analyze(&d.normalize(&op));
    let scan = osserman_scan(m, p, kind, samples, tol, seed)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(json!({
        "direction": d.raw.iter().map(format_rational).collect::<Vec<_>>(),
        "direction_norm2": format_rational(&d.norm2),
        "report": report.to_json(),
        "scan": scan.to_json(),
    }))
}
