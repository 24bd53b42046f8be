//! Command-line pipelines over the Gabor orthonormal-basis toolkit.
//!
//! Every command emits a JSON report (stdout, or `--out`) embedding the
//! resolved configuration hash, seed, and tool version, so runs are
//! reproducible byte-for-byte. Exit codes: 0 = verdict computed (a "false"
//! mathematical verdict is still a successful run), 2 = input error,
//! 3 = numeric precondition violated.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use gabor_onb::density::{
    product_progression_bound, upper_beurling_density, PointSet2D,
};
use gabor_onb::frft::{ChirpedIndicatorTransform, FrftPlan};
use gabor_onb::gram::{onb_certificate, onb_certificate_fn, IndexSet, QuadratureOptions};
use gabor_onb::json as io;
use gabor_onb::lattice::{
    density, normalize_lower_triangular, project_first, rotation_lattice, Lattice2D,
    LatticeError, ProjectionResult,
};
use gabor_onb::scalar::parse_rational;
use gabor_onb::tiling::{classify_cube_tiling, is_cube_tiling, tiles_by, CubeTilingClass, Rect};
use gabor_onb::window::decide_onb;
use gabor_onb::zak::{
    autocorrelation, check_covariance, check_unimodular, compute_d, SpectralSamples, Summation,
};

#[derive(Parser)]
#[command(name = "gabor-onb", version, about = "Gabor orthonormal-basis toolkit")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GlobalArgs {
    /// JSON config file with the same knobs; command-line flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Print a human-readable summary to stdout (JSON still goes to --out).
    #[arg(long, global = true)]
    pretty: bool,

    /// Seed recorded in the report (commands are deterministic given it).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Index-ball truncation radius R.
    #[arg(long, global = true)]
    truncation: Option<i64>,

    /// Sample count N of the transform grid (power of two).
    #[arg(long, global = true, value_name = "N")]
    grid_n: Option<usize>,

    /// Half-width T of the transform grid.
    #[arg(long, global = true, value_name = "T")]
    grid_t: Option<f64>,

    /// Tolerance for pass/fail verdicts.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Cesàro summation for Zak series: on|off.
    #[arg(long, global = true, value_name = "on|off")]
    cesaro: Option<String>,

    /// Series truncation K for Zak diagnostics.
    #[arg(long, global = true, value_name = "K")]
    zak_k: Option<i64>,
}

#[derive(Subcommand)]
enum Command {
    /// Density, projection structure, and normalization of an exact lattice.
    AnalyzeLattice {
        /// Lattice JSON path.
        #[arg(long)]
        lattice: PathBuf,
    },
    /// Full orthonormal-basis decision for a window over a lattice.
    DecideOnb {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long)]
        window: PathBuf,
    },
    /// Interval-set tiling check, or cube-tiling check of a planar point set.
    CheckTiling {
        /// IntervalSet JSON path (with --modulus).
        #[arg(long, conflicts_with = "points")]
        set: Option<PathBuf>,
        /// Translation step a as a rational string.
        #[arg(long)]
        modulus: Option<String>,
        /// Point-list JSON path (cube-tiling mode).
        #[arg(long, requires = "region")]
        points: Option<PathBuf>,
        /// Region x0,x1,y0,y1 for the cube check.
        #[arg(long)]
        region: Option<String>,
        /// Also classify the cube tiling (row/column structure).
        #[arg(long)]
        classify: bool,
    },
    /// Weighted Zak-transform diagnostics bundle.
    Zak {
        #[arg(long)]
        window: PathBuf,
        #[arg(long)]
        alpha: f64,
        /// ω-grid size (default 128).
        #[arg(long)]
        omega_n: Option<usize>,
        /// θ-grid size (default 256).
        #[arg(long)]
        theta_n: Option<usize>,
        /// Also dump the full D-grid (row-major complex pairs) to this path.
        #[arg(long)]
        grid_out: Option<PathBuf>,
    },
    /// Fractional Fourier transform of a CSV-sampled signal.
    Frft {
        /// Input CSV (t,re[,im]) on the plan grid.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        theta: f64,
        /// Output CSV path for the transformed signal.
        #[arg(long)]
        out_csv: Option<PathBuf>,
    },
    /// Gram-matrix orthonormality certificate.
    Gram {
        #[arg(long)]
        window: PathBuf,
        #[arg(long)]
        lattice: PathBuf,
    },
    /// End-to-end rotated-lattice certificate: the window F_{-θ}1_{[0,1)}
    /// over R_θℤ² is orthonormal on the truncation, while product sets are
    /// obstructed by the progression/density arithmetic.
    Counterexample {
        #[arg(long)]
        theta: f64,
        /// Two-grid Richardson extrapolation for the Gram entries.
        #[arg(long)]
        richardson: bool,
    },
}

/// Errors sorted by exit code.
enum CliError {
    /// Exit 2: unreadable/invalid input.
    Input(String),
    /// Exit 3: numeric precondition violated.
    Numeric(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) => m,
            CliError::Numeric(m) => m,
        }
    }
}

fn input_err(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

fn numeric_err(e: impl std::fmt::Display) -> CliError {
    CliError::Numeric(e.to_string())
}

/// Resolved knobs: config file values overridden by flags, with defaults.
#[derive(Debug, Clone)]
struct Knobs {
    seed: u64,
    truncation: i64,
    grid_n: usize,
    grid_t: f64,
    tol: Option<f64>,
    cesaro: bool,
    zak_k: i64,
}

impl Knobs {
    fn resolve(global: &GlobalArgs) -> Result<Self, CliError> {
        let mut file = json!({});
        if let Some(path) = &global.config {
            let text = fs::read_to_string(path)
                .map_err(|e| input_err(format!("config {}: {e}", path.display())))?;
            file = serde_json::from_str(&text)
                .map_err(|e| input_err(format!("config {}: {e}", path.display())))?;
        }
        let get_u64 = |key: &str| file.get(key).and_then(Value::as_u64);
        let get_i64 = |key: &str| file.get(key).and_then(Value::as_i64);
        let get_f64 = |key: &str| file.get(key).and_then(Value::as_f64);
        let get_bool = |key: &str| file.get(key).and_then(Value::as_bool);

        let cesaro = match global.cesaro.as_deref() {
            Some("on") => true,
            Some("off") => false,
            Some(other) => {
                return Err(input_err(format!(
                    "--cesaro expects on|off, got {other:?}"
                )))
            }
            None => get_bool("cesaro").unwrap_or(true),
        };
        let knobs = Self {
            seed: global.seed.or_else(|| get_u64("seed")).unwrap_or(0),
            truncation: global
                .truncation
                .or_else(|| get_i64("truncation"))
                .unwrap_or(3),
            grid_n: global
                .grid_n
                .or_else(|| get_u64("grid_n").map(|v| v as usize))
                .unwrap_or(2048),
            grid_t: global.grid_t.or_else(|| get_f64("grid_t")).unwrap_or(8.0),
            tol: global.tol.or_else(|| get_f64("tol")),
            cesaro,
            zak_k: global.zak_k.or_else(|| get_i64("zak_k")).unwrap_or(4096),
        };
        if knobs.truncation < 0 {
            return Err(input_err("truncation must be nonnegative"));
        }
        Ok(knobs)
    }

    fn as_json(&self, command: &str) -> Value {
        json!({
            "command": command,
            "seed": self.seed,
            "truncation": self.truncation,
            "grid_n": self.grid_n,
            "grid_t": self.grid_t,
            "tol": self.tol,
            "cesaro": self.cesaro,
            "zak_k": self.zak_k,
        })
    }
}

fn fnv1a64(data: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf29ce484222325;
    for &b in data {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| input_err(format!("{}: {e}", path.display())))
}

fn load_lattice(path: &Path) -> Result<Lattice2D, CliError> {
    io::lattice_from_json(&read_file(path)?).map_err(input_err)
}

/// Windows load from the JSON schema, or from t,re[,im] CSV when the path
/// ends in `.csv` (sampled form).
fn load_window(path: &Path) -> Result<gabor_onb::window::Window, CliError> {
    let text = read_file(path)?;
    if path.extension().and_then(|e| e.to_str()) == Some("csv") {
        let signal = io::signal_from_csv(&text).map_err(input_err)?;
        Ok(gabor_onb::window::Window::Sampled(signal))
    } else {
        io::window_from_json(&text).map_err(input_err)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let knobs = match Knobs::resolve(&cli.global) {
        Ok(k) => k,
        Err(e) => {
            eprintln!("error: {}", e.message());
            return ExitCode::from(e.code());
        }
    };

    let (name, result) = match &cli.command {
        Command::AnalyzeLattice { lattice } => ("analyze-lattice", cmd_analyze_lattice(lattice)),
        Command::DecideOnb { lattice, window } => ("decide-onb", cmd_decide_onb(lattice, window)),
        Command::CheckTiling {
            set,
            modulus,
            points,
            region,
            classify,
        } => (
            "check-tiling",
            cmd_check_tiling(&knobs, set, modulus, points, region, *classify),
        ),
        Command::Zak {
            window,
            alpha,
            omega_n,
            theta_n,
            grid_out,
        } => (
            "zak",
            cmd_zak(&knobs, window, *alpha, *omega_n, *theta_n, grid_out),
        ),
        Command::Frft {
            input,
            theta,
            out_csv,
        } => ("frft", cmd_frft(&knobs, input, *theta, out_csv)),
        Command::Gram { window, lattice } => ("gram", cmd_gram(&knobs, window, lattice)),
        Command::Counterexample { theta, richardson } => (
            "counterexample",
            cmd_counterexample(&knobs, *theta, *richardson),
        ),
    };

    match result {
        Ok(payload) => {
            let meta = knobs.as_json(name);
            let config_hash = format!("{:016x}", fnv1a64(meta.to_string().as_bytes()));
            let report = json!({
                "command": name,
                "version": env!("CARGO_PKG_VERSION"),
                "seed": knobs.seed,
                "config_hash": config_hash,
                "result": payload,
            });
            emit(&cli.global, &report);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn emit(global: &GlobalArgs, report: &Value) {
    let serialized =
        serde_json::to_string_pretty(report).expect("report serialization is infallible");
    if let Some(path) = &global.out {
        if let Err(e) = fs::write(path, &serialized) {
            eprintln!("error: writing {}: {e}", path.display());
        }
    }
    if global.pretty {
        print_summary(report);
        if global.out.is_none() {
            println!("{serialized}");
        }
    } else if global.out.is_none() {
        println!("{serialized}");
    }
}

fn print_summary(report: &Value) {
    println!(
        "# {} (v{}, config {})",
        report["command"].as_str().unwrap_or("?"),
        report["version"].as_str().unwrap_or("?"),
        report["config_hash"].as_str().unwrap_or("?"),
    );
    if let Some(obj) = report["result"].as_object() {
        for (k, v) in obj {
            match v {
                Value::Object(_) | Value::Array(_) => println!("  {k}: <structured>"),
                other => println!("  {k}: {other}"),
            }
        }
    }
}

fn cmd_analyze_lattice(path: &Path) -> Result<Value, CliError> {
    let lattice = load_lattice(path)?;
    let dens = density(&lattice).map_err(numeric_err)?;
    let projection = project_first(&lattice).map_err(numeric_err)?;
    let density_is_one = dens.is_one();

    let (proj_json, discrete) = match &projection {
        ProjectionResult::Discrete(g) => (
            json!({"kind": "discrete", "generator": g.to_string(), "generator_float": g.to_f64()}),
            true,
        ),
        ProjectionResult::Dense => (json!({"kind": "dense"}), false),
        ProjectionResult::Zero => (json!({"kind": "zero"}), false),
    };

    let normalization = if density_is_one && discrete {
        match normalize_lower_triangular(&lattice) {
            Ok(n) => {
                let fmt = |m: &gabor_onb::ExactMatrix| {
                    json!([[m.a.to_string(), m.b.to_string()], [m.c.to_string(), m.d.to_string()]])
                };
                json!({
                    "l": fmt(&n.l),
                    "u": fmt(&n.u),
                    "columns_swapped": n.columns_swapped,
                })
            }
            Err(LatticeError::NotDensityOne) => Value::Null,
            Err(e) => return Err(numeric_err(e)),
        }
    } else {
        Value::Null
    };

    Ok(json!({
        "density": dens.to_f64(),
        "density_is_one": density_is_one,
        "projection": proj_json,
        "normalization": normalization,
        "exists_compact_window": density_is_one && discrete,
    }))
}

fn cmd_decide_onb(lattice_path: &Path, window_path: &Path) -> Result<Value, CliError> {
    let lattice = load_lattice(lattice_path)?;
    let window = load_window(window_path)?;
    let verdict = decide_onb(&window, &lattice).map_err(numeric_err)?;
    Ok(json!({
        "is_onb_window": verdict.is_onb_window,
        "reason": verdict.reason.as_str(),
        "generator": verdict.generator.as_ref().map(|g| g.to_string()),
        "fold_profile": verdict.fold_profile.as_ref().map(io::fold_profile_to_json),
    }))
}

fn cmd_check_tiling(
    knobs: &Knobs,
    set: &Option<PathBuf>,
    modulus: &Option<String>,
    points: &Option<PathBuf>,
    region: &Option<String>,
    classify: bool,
) -> Result<Value, CliError> {
    match (set, points) {
        (Some(set_path), None) => {
            let modulus = modulus
                .as_ref()
                .ok_or_else(|| input_err("--modulus is required with --set"))?;
            let a = parse_rational(modulus).map_err(input_err)?;
            let omega = io::interval_set_from_json(&read_file(set_path)?).map_err(input_err)?;
            let (ok, profile) = tiles_by(&omega, &a).map_err(numeric_err)?;
            Ok(json!({
                "mode": "intervals",
                "tiles": ok,
                "profile": io::fold_profile_to_json(&profile),
            }))
        }
        (None, Some(points_path)) => {
            let pts = io::points_from_json(&read_file(points_path)?).map_err(input_err)?;
            let region = parse_region(region.as_ref().expect("clap requires region"))?;
            let tol = knobs.tol.unwrap_or(1e-9);
            let tiles = is_cube_tiling(&pts, region, tol).map_err(numeric_err)?;
            let classification = if classify {
                match classify_cube_tiling(&pts, tol).map_err(numeric_err)? {
                    CubeTilingClass::Lambda1 { z, shifts } => json!({
                        "kind": "Lambda1", "z": z,
                        "shifts": shifts.iter().map(|(k, s)| json!([k, s])).collect::<Vec<_>>(),
                    }),
                    CubeTilingClass::Lambda2 { z, shifts } => json!({
                        "kind": "Lambda2", "z": z,
                        "shifts": shifts.iter().map(|(k, s)| json!([k, s])).collect::<Vec<_>>(),
                    }),
                    CubeTilingClass::Neither => json!({"kind": "Neither"}),
                }
            } else {
                Value::Null
            };
            Ok(json!({
                "mode": "cube",
                "tiles": tiles,
                "classification": classification,
            }))
        }
        _ => Err(input_err(
            "check-tiling needs exactly one of --set (with --modulus) or --points (with --region)",
        )),
    }
}

fn parse_region(text: &str) -> Result<Rect, CliError> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| input_err(format!("region {text:?}: {e}")))?;
    if parts.len() != 4 || parts[0] >= parts[1] || parts[2] >= parts[3] {
        return Err(input_err("region must be x0,x1,y0,y1 with x0<x1, y0<y1"));
    }
    Ok(Rect::new(parts[0], parts[1], parts[2], parts[3]))
}

fn cmd_zak(
    knobs: &Knobs,
    window_path: &Path,
    alpha: f64,
    omega_n: Option<usize>,
    theta_n: Option<usize>,
    grid_out: &Option<PathBuf>,
) -> Result<Value, CliError> {
    let window = load_window(window_path)?;
    let omega_n = omega_n.unwrap_or(128);
    let theta_n = theta_n.unwrap_or(256);
    let spec =
        SpectralSamples::from_window(&window, knobs.zak_k, omega_n).map_err(numeric_err)?;
    let summation = if knobs.cesaro {
        Summation::Cesaro
    } else {
        Summation::Raw
    };
    let zak = compute_d(&spec, alpha, theta_n, summation).map_err(numeric_err)?;
    if let Some(path) = grid_out {
        let grid_json = io::zak_grid_to_json(&zak);
        fs::write(path, grid_json.to_string())
            .map_err(|e| input_err(format!("{}: {e}", path.display())))?;
    }
    let tol = knobs.tol.unwrap_or(0.02);
    let uni = check_unimodular(&zak, tol);
    let cov = check_covariance(&zak, tol, true).map_err(numeric_err)?;

    let mid = omega_n / 2;
    let mut autocorr = Vec::new();
    for n in -4i64..=4 {
        let r = autocorrelation(&spec, alpha, n, mid).map_err(numeric_err)?;
        autocorr.push(json!({"n": n, "re": r.re, "im": r.im, "abs": r.norm()}));
    }

    Ok(json!({
        "alpha": alpha,
        "k": knobs.zak_k,
        "summation": if knobs.cesaro { "cesaro" } else { "raw" },
        "unimodularity": {
            "median_dev": uni.median_dev,
            "max_dev": uni.max_dev,
            "tol": uni.tol,
            "pass": uni.pass,
        },
        "covariance": {
            "median_residual": cov.median_residual,
            "max_residual": cov.max_residual,
            "tol": cov.tol,
            "pass": cov.pass,
        },
        "autocorrelation_at_mid_omega": autocorr,
    }))
}

fn cmd_frft(
    knobs: &Knobs,
    input: &Path,
    theta: f64,
    out_csv: &Option<PathBuf>,
) -> Result<Value, CliError> {
    let signal = io::signal_from_csv(&read_file(input)?).map_err(input_err)?;
    let plan = FrftPlan::<f64>::new(theta, knobs.grid_t, knobs.grid_n).map_err(numeric_err)?;
    let out = plan.transform(&signal).map_err(numeric_err)?;
    if let Some(path) = out_csv {
        fs::write(path, io::signal_to_csv(&out.signal))
            .map_err(|e| input_err(format!("{}: {e}", path.display())))?;
    }
    Ok(json!({
        "theta": theta,
        "n": out.signal.len(),
        "edge_warning": out.edge_warning,
        "norm_in": signal.norm_l2(),
        "norm_out": out.signal.norm_l2(),
        "csv_written": out_csv.as_ref().map(|p| p.display().to_string()),
    }))
}

fn cmd_gram(knobs: &Knobs, window_path: &Path, lattice_path: &Path) -> Result<Value, CliError> {
    let window = load_window(window_path)?;
    let lattice = load_lattice(lattice_path)?;
    let idx = IndexSet::from_lattice(&lattice, knobs.truncation);
    let tol = knobs.tol.unwrap_or(1e-10);
    let cert = onb_certificate(&window, &idx, tol).map_err(numeric_err)?;
    Ok(io::gram_report_to_json(&cert))
}

fn cmd_counterexample(knobs: &Knobs, theta: f64, richardson: bool) -> Result<Value, CliError> {
    // window g = F_{-θ} 1_{[0,1)}, lattice Λ = R_θ ℤ²
    let hull = 5.0 * knobs.grid_t;
    let g = ChirpedIndicatorTransform::new(-theta, hull).map_err(numeric_err)?;
    let lattice = rotation_lattice(theta);
    let idx = IndexSet::from_lattice(&lattice, knobs.truncation);
    let tol = knobs.tol.unwrap_or(5e-3);
    let step = 2.0 * knobs.grid_t / knobs.grid_n as f64;
    let cert = onb_certificate_fn(
        &g,
        &idx,
        tol,
        QuadratureOptions {
            step,
            domain_pad: 0.5,
            richardson,
        },
    )
    .map_err(numeric_err)?;

    // obstruction arithmetic for product sets A × B
    let bound = product_progression_bound(theta).map_err(numeric_err)?;
    let spacing_a = 1.0 / theta.sin().abs();
    let spacing_b = 1.0 / theta.cos().abs();

    // Λ₁ comparison set: the plain integer grid, density ≈ 1
    let comparison = PointSet2D::from_lattice_basis(
        &gabor_onb::FloatMatrix::new(1.0, 0.0, 0.0, 1.0),
        Rect::centered_square(20.0),
    );
    let lambda1_report = upper_beurling_density(&comparison, &[4.0, 8.0]).map_err(numeric_err)?;
    let per_radius: Vec<Value> = lambda1_report
        .per_radius
        .iter()
        .map(|r| {
            json!({
                "radius": r.radius,
                "sup_density": r.sup_density,
                "best_center": r.best_center,
                "center_grid_spacing": r.center_grid_spacing,
            })
        })
        .collect();
    let lambda1_density = lambda1_report.estimate;

    // tail-mass evidence that g is not compactly supported
    let sampled = g.sample(knobs.grid_t, knobs.grid_n);
    let tail_mass = sampled.mass_outside(knobs.grid_t / 2.0);

    Ok(json!({
        "theta": theta,
        "gram": io::gram_report_to_json(&cert),
        "obstruction": {
            "progression_spacing_time": spacing_a,
            "progression_spacing_freq": spacing_b,
            "product_density_bound": bound,
            "bound_at_most_half": bound <= 0.5 + 1e-15,
            "lambda1_density_estimate": lambda1_density,
            "lambda1_density_per_radius": per_radius,
        },
        "unbounded_support": {
            "tail_mass_outside_half_grid": tail_mass,
            "window_grid_half_width": knobs.grid_t,
        },
    }))
}
