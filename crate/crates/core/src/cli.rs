//! Command-line interface: coefficient tables, angle densities, volumes, spectra,
//! energies and the verification table.
//!
//! Exit codes: `0` success, `1` computation or verification failure, `2` invalid
//! configuration (including flags rejected by the parser).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::error::{FinlapError, Result};
use crate::export::{coefficients_csv, fmt_f64, json_document, spectrum_csv, spectrum_rows};
use crate::fiber::{angle_and_volume, total_volume, AngleVolume, FiberQuadrature, DEFAULT_FIBER_NODES};
use crate::fields::{HarmonicSum, HarmonicTerm, TrigPoly, TrigTerm};
use crate::geometry::{Chart, ChartPoint, FinslerMetric};
use crate::grid::BaseGrid;
use crate::katok_ziller::{kz_sphere, kz_torus};
use crate::laplace::{FinslerLaplacian, OperatorCoefficients, OperatorField};
use crate::solvers::sphere::{sphere_spectrum_merged, DEFAULT_L_MAX, DEFAULT_N_QUAD};
use crate::solvers::torus::{torus_spectrum_closed_form, torus_spectrum_numerical, TorusSpectrumRequest};
use crate::verify::{format_report, run_all, run_criterion, CRITERIA};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "finlap", version, about = "Finsler–Laplace operators on the torus and the sphere")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Operator coefficients a^{ij}, b^i and w on a base grid.
    Coeffs(CoeffsArgs),
    /// Normalized angle density ρ on one fiber, and w.
    Angle(AngleArgs),
    /// Total Finsler volume by base quadrature.
    Volume(VolumeArgs),
    /// Spectrum of the Katok–Ziller torus, closed form or Fourier–Galerkin.
    SpectrumTorus(TorusArgs),
    /// Spectrum of the Katok–Ziller sphere from merged azimuthal blocks.
    SpectrumSphere(SphereArgs),
    /// Energy, mass and Rayleigh quotient of a trigonometric or harmonic field.
    Energy(EnergyArgs),
    /// Run the acceptance checks and print a pass/fail table.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    KzTorus,
    KzSphere,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct MetricArgs {
    #[arg(long, value_enum, default_value = "kz-torus")]
    pub preset: Preset,
    /// Katok–Ziller deformation parameter, 0 <= eps < 1.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub eps: f64,
    /// Fiber quadrature nodes.
    #[arg(long = "fiber-n", default_value_t = DEFAULT_FIBER_NODES)]
    pub fiber_n: usize,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    #[command(flatten)]
    pub metric: MetricArgs,
    /// Grid size: n × n on the torus, n Gauss nodes × 2n angles on the sphere.
    #[arg(long, default_value_t = 16)]
    pub grid: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct AngleArgs {
    #[command(flatten)]
    pub metric: MetricArgs,
    /// First chart coordinate (x on the torus, φ on the sphere).
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub x1: f64,
    /// Second chart coordinate (y on the torus, θ on the sphere).
    #[arg(long, default_value_t = 0.25, allow_negative_numbers = true)]
    pub x2: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VolumeArgs {
    #[command(flatten)]
    pub metric: MetricArgs,
    #[arg(long, default_value_t = 32)]
    pub grid: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TorusArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub eps: f64,
    /// Closed form: largest |p|.
    #[arg(long, default_value_t = 3)]
    pub pmax: u32,
    /// Closed form: largest |q|.
    #[arg(long, default_value_t = 3)]
    pub qmax: u32,
    /// Fourier–Galerkin with this many basis functions per axis (even); closed form if absent.
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of eigenvalues reported by the Galerkin solve.
    #[arg(long, default_value_t = 20)]
    pub k: usize,
    #[arg(long = "fiber-n", default_value_t = DEFAULT_FIBER_NODES)]
    pub fiber_n: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SphereArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub eps: f64,
    /// Largest Legendre degree per block.
    #[arg(long, default_value_t = DEFAULT_L_MAX)]
    pub lmax: usize,
    /// Azimuthal blocks m = 0..=m_max, each m > 0 counted twice.
    #[arg(long = "m-max", default_value_t = 5)]
    pub m_max: usize,
    /// Gauss–Legendre nodes in cos φ.
    #[arg(long = "n-quad", default_value_t = DEFAULT_N_QUAD)]
    pub n_quad: usize,
    /// Number of eigenvalues reported.
    #[arg(long, default_value_t = 20)]
    pub k: usize,
    #[arg(long = "fiber-n", default_value_t = DEFAULT_FIBER_NODES)]
    pub fiber_n: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct EnergyArgs {
    #[command(flatten)]
    pub metric: MetricArgs,
    /// Field term `a,b,cos,sin`, repeatable. Torus: cos/sin(2π(ax + by)). Sphere:
    /// P_a^b(cos φ)(cos·cos bθ + sin·sin bθ). Default: sin 2πx, or P_1^0.
    #[arg(long = "term", allow_hyphen_values = true)]
    pub terms: Vec<String>,
    #[arg(long, default_value_t = 32)]
    pub grid: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Run a single criterion (1-10) instead of all.
    #[arg(long)]
    pub criterion: Option<u8>,
    /// Emit the reports as JSON instead of the table.
    #[arg(long)]
    pub json: bool,
}

/// Parse `args` (program name first), run, and return the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return EXIT_CONFIG;
    }
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(&cli, &mut lock) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &FinlapError) -> i32 {
    match e {
        FinlapError::InvalidConfig(_)
        | FinlapError::ConvexityViolation { .. }
        | FinlapError::InvalidIndex { .. }
        | FinlapError::PoleSingularity { .. }
        | FinlapError::WrongChart(_) => EXIT_CONFIG,
        _ => EXIT_FAILURE,
    }
}

/// `FINLAP_THREADS` caps the global rayon pool. Results do not depend on it.
fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("FINLAP_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| FinlapError::InvalidConfig(format!("FINLAP_THREADS must be a positive integer, got {v:?}")))?;
    // A pool may already exist when called twice in one process.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn invalid(msg: String) -> FinlapError {
    FinlapError::InvalidConfig(msg)
}

fn check_eps(eps: f64) -> Result<()> {
    if !(0.0..1.0).contains(&eps) {
        return Err(invalid(format!("--eps must lie in [0, 1), got {eps}")));
    }
    Ok(())
}

fn check_at_least(name: &str, v: usize, min: usize) -> Result<()> {
    if v < min {
        return Err(invalid(format!("{name} must be at least {min}, got {v}")));
    }
    Ok(())
}

fn check_metric(m: &MetricArgs) -> Result<()> {
    check_eps(m.eps)?;
    check_at_least("--fiber-n", m.fiber_n, 8)
}

fn grid_for(preset: Preset, n: usize) -> Result<BaseGrid> {
    match preset {
        Preset::KzTorus => Ok(BaseGrid::torus(n)),
        Preset::KzSphere => BaseGrid::sphere(n, 2 * n),
    }
}

/// Run a parsed command, writing artifacts to `--output` or `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Coeffs(a) => {
            check_metric(&a.metric)?;
            check_at_least("--grid", a.grid, 1)?;
            let grid = grid_for(a.metric.preset, a.grid)?;
            let rows = with_preset(&a.metric, |lap| lap.coefficients(&grid.points))?;
            let params = json!({"preset": preset_name(a.metric.preset), "eps": a.metric.eps,
                "grid": a.grid, "fiber_n": a.metric.fiber_n});
            let text = match a.out.format {
                Format::Csv => coefficients_csv(&rows),
                Format::Json => json_document("coeffs", params, &rows),
            };
            emit(&a.out, &text, out)
        }
        Command::Angle(a) => {
            check_metric(&a.metric)?;
            let av = with_preset(&a.metric, |lap| {
                let x = match a.metric.preset {
                    Preset::KzTorus => ChartPoint::torus(a.x1, a.x2),
                    Preset::KzSphere => ChartPoint::sphere(a.x1, a.x2)?,
                };
                lap.angle(&x)
            })?;
            let text = match a.out.format {
                Format::Csv => {
                    let mut s = String::from("psi,rho,w\n");
                    for (psi, rho) in av.psi.iter().zip(&av.rho) {
                        s.push_str(&format!("{},{},{}\n", fmt_f64(*psi), fmt_f64(*rho), fmt_f64(av.w)));
                    }
                    s
                }
                Format::Json => {
                    let params = json!({"preset": preset_name(a.metric.preset), "eps": a.metric.eps,
                        "x1": a.x1, "x2": a.x2, "fiber_n": a.metric.fiber_n});
                    json_document("angle", params, &av)
                }
            };
            emit(&a.out, &text, out)
        }
        Command::Volume(a) => {
            check_metric(&a.metric)?;
            check_at_least("--grid", a.grid, 1)?;
            let grid = grid_for(a.metric.preset, a.grid)?;
            let vol = with_preset(&a.metric, |lap| lap.volume(&grid))?;
            let text = match a.out.format {
                Format::Csv => format!("preset,eps,volume\n{},{},{}\n", preset_name(a.metric.preset), fmt_f64(a.metric.eps), fmt_f64(vol)),
                Format::Json => {
                    let params = json!({"preset": preset_name(a.metric.preset), "eps": a.metric.eps,
                        "grid": a.grid, "fiber_n": a.metric.fiber_n});
                    json_document("volume", params, &json!({"volume": vol}))
                }
            };
            emit(&a.out, &text, out)
        }
        Command::SpectrumTorus(a) => {
            check_eps(a.eps)?;
            check_at_least("--fiber-n", a.fiber_n, 8)?;
            let (res, params) = match a.n {
                None => {
                    let req = TorusSpectrumRequest { eps: a.eps, p_max: a.pmax, q_max: a.qmax };
                    let params = json!({"eps": a.eps, "pmax": a.pmax, "qmax": a.qmax, "method": "closed-form"});
                    (torus_spectrum_closed_form(&req)?, params)
                }
                Some(n) => {
                    if n < 2 || n % 2 != 0 {
                        return Err(invalid(format!("--n must be even and at least 2, got {n}")));
                    }
                    check_at_least("--k", a.k, 1)?;
                    let params = json!({"eps": a.eps, "n": n, "k": a.k, "fiber_n": a.fiber_n,
                        "method": "fourier-galerkin"});
                    let quad = FiberQuadrature::new(a.fiber_n)?;
                    (torus_spectrum_numerical(kz_torus(a.eps)?, n, a.k, quad)?, params)
                }
            };
            let rows = spectrum_rows(&res, None);
            let text = match a.out.format {
                Format::Csv => spectrum_csv(&rows),
                Format::Json => json_document("spectrum-torus", params, &json!({"basis": res.basis, "eigenvalues": rows})),
            };
            emit(&a.out, &text, out)
        }
        Command::SpectrumSphere(a) => {
            check_eps(a.eps)?;
            check_at_least("--fiber-n", a.fiber_n, 8)?;
            check_at_least("--k", a.k, 1)?;
            if a.m_max > a.lmax {
                return Err(invalid(format!("--m-max = {} exceeds --lmax = {}", a.m_max, a.lmax)));
            }
            if a.n_quad <= a.lmax + 1 {
                return Err(invalid(format!("--n-quad must exceed --lmax + 1 = {}, got {}", a.lmax + 1, a.n_quad)));
            }
            let spec = sphere_spectrum_merged(a.eps, a.m_max, a.lmax, a.n_quad, a.k, a.fiber_n)?;
            let rows = spectrum_rows(&spec.result, Some(&spec.entries));
            let text = match a.out.format {
                Format::Csv => spectrum_csv(&rows),
                Format::Json => {
                    let params = json!({"eps": a.eps, "lmax": a.lmax, "m_max": a.m_max, "n_quad": a.n_quad,
                        "k": a.k, "fiber_n": a.fiber_n});
                    let lambda1 = spec.result.distinct().get(1).copied();
                    json_document(
                        "spectrum-sphere",
                        params,
                        &json!({"basis": spec.result.basis, "lambda1": lambda1, "eigenvalues": rows}),
                    )
                }
            };
            emit(&a.out, &text, out)
        }
        Command::Energy(a) => {
            check_metric(&a.metric)?;
            check_at_least("--grid", a.grid, 2)?;
            let terms = parse_terms(&a.terms)?;
            let grid = grid_for(a.metric.preset, a.grid)?;
            let report = with_preset(&a.metric, |lap| {
                let field = lap.operator_field(&grid)?;
                Ok(match lap.chart() {
                    Chart::Sphere => {
                        let t = if terms.is_empty() { vec![[1.0, 0.0, 1.0, 0.0]] } else { terms.clone() };
                        let u = HarmonicSum::new(
                            t.iter()
                                .map(|t| {
                                    if t[0] < 0.0 || t[1] < 0.0 || t[1] > t[0] {
                                        return Err(FinlapError::InvalidIndex { l: t[0] as i64, m: t[1] as i64 });
                                    }
                                    Ok(HarmonicTerm { l: t[0] as usize, m: t[1] as usize, cos: t[2], sin: t[3] })
                                })
                                .collect::<Result<_>>()?,
                        );
                        EnergyReport::new(field.energy(&u), field.mass(&u, &u))
                    }
                    _ => {
                        let t = if terms.is_empty() { vec![[1.0, 0.0, 0.0, 1.0]] } else { terms.clone() };
                        let u = TrigPoly::new(
                            t.iter().map(|t| TrigTerm { p: t[0] as i32, q: t[1] as i32, cos: t[2], sin: t[3] }).collect(),
                        );
                        EnergyReport::new(field.energy(&u), field.mass(&u, &u))
                    }
                })
            })?;
            let text = match a.out.format {
                Format::Csv => format!(
                    "energy,mass,rayleigh\n{},{},{}\n",
                    fmt_f64(report.energy),
                    fmt_f64(report.mass),
                    fmt_f64(report.rayleigh)
                ),
                Format::Json => {
                    let params = json!({"preset": preset_name(a.metric.preset), "eps": a.metric.eps,
                        "grid": a.grid, "fiber_n": a.metric.fiber_n, "terms": a.terms});
                    json_document("energy", params, &report)
                }
            };
            emit(&a.out, &text, out)
        }
        Command::Verify(a) => {
            let reports = match a.criterion {
                Some(id) if CRITERIA.contains(&id) => vec![run_criterion(id)],
                Some(id) => return Err(invalid(format!("--criterion must be in 1..=10, got {id}"))),
                None => run_all(),
            };
            let text = if a.json {
                let mut s = serde_json::to_string_pretty(&reports).expect("serializable reports");
                s.push('\n');
                s
            } else {
                format_report(&reports)
            };
            out.write_all(text.as_bytes())?;
            let failed: Vec<u8> = reports.iter().filter(|r| !r.passed()).map(|r| r.id).collect();
            if failed.is_empty() {
                Ok(EXIT_OK)
            } else {
                for r in reports.iter().filter(|r| !r.passed()) {
                    for row in r.failures() {
                        eprintln!("criterion {} failed: {} (measured {}, expected {})", r.id, row.check, row.measured, row.expected);
                    }
                }
                Ok(EXIT_FAILURE)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
struct EnergyReport {
    energy: f64,
    mass: f64,
    rayleigh: f64,
}

impl EnergyReport {
    fn new(energy: f64, mass: f64) -> Self {
        Self { energy, mass, rayleigh: energy / mass }
    }
}

fn preset_name(p: Preset) -> &'static str {
    match p {
        Preset::KzTorus => "kz-torus",
        Preset::KzSphere => "kz-sphere",
    }
}

/// Call `f` with the Laplacian of the selected preset.
fn with_preset<T>(m: &MetricArgs, f: impl FnOnce(&dyn PresetLaplacian) -> Result<T>) -> Result<T> {
    let quad = FiberQuadrature::new(m.fiber_n)?;
    match m.preset {
        Preset::KzTorus => f(&FinslerLaplacian::new(kz_torus(m.eps)?, quad)),
        Preset::KzSphere => f(&FinslerLaplacian::new(kz_sphere(m.eps)?, quad)),
    }
}

/// The preset-independent operations the commands need.
trait PresetLaplacian {
    fn chart(&self) -> Chart;
    fn coefficients(&self, points: &[[f64; 2]]) -> Result<Vec<OperatorCoefficients>>;
    fn angle(&self, x: &ChartPoint) -> Result<AngleVolume>;
    fn volume(&self, grid: &BaseGrid) -> Result<f64>;
    fn operator_field(&self, grid: &BaseGrid) -> Result<OperatorField>;
}

impl<M: FinslerMetric + Sync> PresetLaplacian for FinslerLaplacian<M> {
    fn chart(&self) -> Chart {
        FinslerLaplacian::chart(self)
    }

    fn coefficients(&self, points: &[[f64; 2]]) -> Result<Vec<OperatorCoefficients>> {
        self.coefficient_field(points)
    }

    fn angle(&self, x: &ChartPoint) -> Result<AngleVolume> {
        angle_and_volume(&self.metric, x, &self.quad)
    }

    fn volume(&self, grid: &BaseGrid) -> Result<f64> {
        total_volume(&self.metric, grid, &self.quad)
    }

    fn operator_field(&self, grid: &BaseGrid) -> Result<OperatorField> {
        OperatorField::new(self, grid)
    }
}

fn parse_terms(raw: &[String]) -> Result<Vec<[f64; 4]>> {
    raw.iter()
        .map(|s| {
            let parts: Vec<&str> = s.split(',').map(str::trim).collect();
            let bad = || invalid(format!("--term expects `a,b,cos,sin`, got {s:?}"));
            if parts.len() != 4 {
                return Err(bad());
            }
            let a: i32 = parts[0].parse().map_err(|_| bad())?;
            let b: i32 = parts[1].parse().map_err(|_| bad())?;
            let c: f64 = parts[2].parse().map_err(|_| bad())?;
            let d: f64 = parts[3].parse().map_err(|_| bad())?;
            Ok([a as f64, b as f64, c, d])
        })
        .collect()
}

fn emit(args: &OutputArgs, text: &str, out: &mut dyn Write) -> Result<i32> {
    match &args.output {
        Some(path) => fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(EXIT_OK)
}
