//! Command-line front end. Every subcommand builds a [`ResidualReport`],
//! prints it (or its primary table) to stdout and, when an output directory
//! is configured, writes it there.
//!
//! Exit codes: 0 when every check passes, 1 on a failed check or a physics
//! error (reported as a JSON error record), 2 on a usage error.

use std::ffi::OsString;
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::config::{Coupling, RunConfig};
use crate::dyson_schwinger::{scalar_tower_report, ym_two_point_check};
use crate::elliptic::{complete_k, jacobi, Jacobi};
use crate::error::{Error, Result};
use crate::fluctuation::StabilityProblem;
use crate::lattice::{self, Dim, LatticeGrid, TimeSeries};
use crate::report::{emit_report, fmt_f64, to_json_string, Format, ResidualReport, SCHEMA_VERSION};
use crate::selftest;
use crate::solutions::{
    dispersion_p2, max_scalar_residual, max_su2_residual, phase_grid, su2_solve, FourMomentum, ScalarWaveSolution,
    DEFAULT_STEP,
};
use crate::spectral::{mass_gap, propagator_momentum, SpectralSum, DEFAULT_NMAX};

/// Default tolerance on residuals of exact solutions.
const RESIDUAL_TOL: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "massgap", version, about = "Exact elliptic solutions, spectra and Dyson-Schwinger checks")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// key = value configuration file; flags override it
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Output directory for reports (default: $MASSGAP_OUT, else none)
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Report format
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Check tolerance override
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Run the module's self-check suite instead of the command
    #[arg(long, global = true)]
    selftest: bool,
}

#[derive(Debug, Args, Default)]
struct Physics {
    /// Scalar coupling
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    /// Gauge coupling (with --N, lambda = N g^2)
    #[arg(long, allow_negative_numbers = true)]
    g: Option<f64>,
    /// Number of colours
    #[arg(long = "N")]
    n_color: Option<u32>,
    /// Integration constant setting the amplitude
    #[arg(long, allow_negative_numbers = true)]
    mu: Option<f64>,
}

impl Physics {
    fn layer(&self) -> RunConfig {
        RunConfig { lambda: self.lambda, g: self.g, n_color: self.n_color, mu: self.mu, ..Default::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DsMode {
    Scalar,
    Ym,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// sn, cn, dn and K at (u, m) with identity residuals
    Elliptic {
        #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
        u: f64,
        #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
        m: f64,
    },
    /// Finite-difference residuals of the exact classical solutions
    VerifyClassical {
        #[command(flatten)]
        physics: Physics,
        /// Mass term m^2
        #[arg(long, default_value_t = 0.0)]
        msq: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        chi: f64,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        periods: Option<f64>,
        /// Finite-difference step along the wave coordinate
        #[arg(long)]
        h: Option<f64>,
        /// Gauge parameter for the SU(2) check in (g, N) mode
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Amplitudes of the diagonal SU(2) ansatz
    Su2Solve {
        #[arg(long, allow_negative_numbers = true)]
        alpha: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        g: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        mu: Option<f64>,
        /// Energy component (default: on shell, p^2 = mu^2 g)
        #[arg(long, allow_negative_numbers = true)]
        p0: Option<f64>,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        p1: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        p2: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        p3: f64,
    },
    /// Fluctuation eigencheck about the sn background
    Stability {
        #[command(flatten)]
        physics: Physics,
        /// Wave p^2 (default: on shell)
        #[arg(long)]
        p2: Option<f64>,
    },
    /// Mass spectrum and weights as CSV (n, mass, weight)
    Spectrum {
        #[command(flatten)]
        physics: Physics,
        #[arg(long)]
        nmax: Option<usize>,
    },
    /// Momentum-space propagator {re, im, tail_bound}
    Propagator {
        #[command(flatten)]
        physics: Physics,
        #[arg(long, allow_negative_numbers = true)]
        p2: Option<f64>,
        #[arg(long, default_value_t = 1e-9)]
        epsilon: f64,
        #[arg(long)]
        nmax: Option<usize>,
    },
    /// Dyson-Schwinger residual checks
    DsCheck {
        #[arg(value_enum, default_value_t = DsMode::Scalar)]
        mode: DsMode,
        #[command(flatten)]
        physics: Physics,
        /// Spatial momentum of the gauge background
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        px: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        py: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        pz: f64,
    },
    /// Symplectic lattice evolution from exact initial data
    LatticeRun {
        /// 0: rest-frame ODE, 1: 1+1D chain
        #[arg(long, default_value_t = 0)]
        dim: u8,
        #[command(flatten)]
        physics: Physics,
        #[arg(long)]
        periods: Option<f64>,
        /// Sites per wavelength (1+1D)
        #[arg(long)]
        sites: Option<usize>,
        /// dt / spacing (1+1D)
        #[arg(long)]
        dt_frac: Option<f64>,
        /// Steps per period (rest frame)
        #[arg(long, default_value_t = 2048)]
        steps_per_period: usize,
        /// Write the probe-site time series as CSV
        #[arg(long, value_name = "FILE")]
        series: Option<PathBuf>,
    },
    /// Dominant frequency of a t,phi CSV time series
    MeasureGap {
        #[arg(long, value_name = "FILE")]
        input: Option<PathBuf>,
        /// Compare against the mass gap at these parameters
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        mu: Option<f64>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Elliptic { .. } => "elliptic",
            Command::VerifyClassical { .. } => "verify-classical",
            Command::Su2Solve { .. } => "su2-solve",
            Command::Stability { .. } => "stability",
            Command::Spectrum { .. } => "spectrum",
            Command::Propagator { .. } => "propagator",
            Command::DsCheck { .. } => "ds-check",
            Command::LatticeRun { .. } => "lattice-run",
            Command::MeasureGap { .. } => "measure-gap",
        }
    }
}

enum Failure {
    Usage(String),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

#[derive(Serialize)]
struct ErrorRecord<'a> {
    schema: u32,
    command: &'a str,
    error: ErrorBody,
}

#[derive(Serialize)]
struct ErrorBody {
    kind: &'static str,
    message: String,
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Domain(_) => "domain",
        Error::Dispersion { .. } => "dispersion",
        Error::NoRealAnsatz { .. } => "no-real-ansatz",
        Error::Numeric(_) => "numeric",
        Error::Cfl { .. } => "cfl",
        Error::BlowUp { .. } => "blow-up",
        Error::SeriesTooShort { .. } => "series-too-short",
        Error::Underresolved { .. } => "underresolved",
        Error::MasslessPole => "massless-pole",
        Error::Io(_) => "io",
        Error::Serialization(_) => "serialization",
    }
}

/// Where and how results go.
struct Sink<'a, W: Write> {
    stdout: &'a mut W,
    format: Format,
    out_dir: Option<PathBuf>,
}

impl<W: Write> Sink<'_, W> {
    fn file(&self, stem: &str, ext: &str) -> Option<PathBuf> {
        self.out_dir.as_ref().map(|d| d.join(format!("{stem}.{ext}")))
    }

    /// Prints and stores the report; the exit code follows its verdict.
    fn report(&mut self, stem: &str, report: &ResidualReport) -> Result<i32> {
        let body = match self.format {
            Format::Json => report.to_json()? + "\n",
            Format::Csv => report.to_csv()?,
        };
        self.stdout.write_all(body.as_bytes())?;
        self.store(stem, report)?;
        Ok(if report.pass { 0 } else { 1 })
    }

    /// Writes the report to the output directory only.
    fn store(&self, stem: &str, report: &ResidualReport) -> Result<()> {
        if let Some(path) = self.file(stem, self.format.extension()) {
            std::fs::create_dir_all(path.parent().unwrap_or(Path::new(".")))?;
            emit_report(report, self.format, &path)?;
        }
        Ok(())
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, T, W, E>(args: I, stdout: &mut W, stderr: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    W: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let name = cli.command.name();
    match dispatch(cli, stdout) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
        Err(Failure::Run(e)) => {
            let record = ErrorRecord {
                schema: SCHEMA_VERSION,
                command: name,
                error: ErrorBody { kind: error_kind(&e), message: e.to_string() },
            };
            match to_json_string(&record) {
                Ok(s) => {
                    let _ = writeln!(stdout, "{s}");
                }
                Err(_) => {
                    let _ = writeln!(stderr, "error: {e}");
                }
            }
            1
        }
    }
}

fn dispatch<W: Write>(cli: Cli, stdout: &mut W) -> Outcome<i32> {
    let file = match &cli.common.config {
        Some(p) => RunConfig::load(p).map_err(|e| Failure::Usage(format!("config {}: {e}", p.display())))?,
        None => RunConfig::default(),
    };
    let flags = RunConfig {
        output_dir: cli.common.out.clone(),
        format: cli.common.format,
        tolerance: cli.common.tolerance,
        ..Default::default()
    };
    let base = file.overlay(RunConfig::from_env()).overlay(flags);
    base.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let name = cli.command.name();
    let mut sink = Sink { stdout, format: base.format.unwrap_or_default(), out_dir: base.output_dir.clone() };

    if cli.common.selftest {
        let report = match name {
            "elliptic" => selftest::elliptic(),
            "verify-classical" | "su2-solve" => selftest::classical(),
            "stability" => selftest::stability(),
            "spectrum" => selftest::spectrum(),
            "propagator" => selftest::propagator(),
            "ds-check" => selftest::ds_check(),
            "lattice-run" => selftest::lattice(),
            _ => selftest::measure_gap(),
        }?;
        return Ok(sink.report(&format!("{name}-selftest"), &report)?);
    }

    let tol = |default: f64| base.tolerance.unwrap_or(default);
    let with = |layer: RunConfig| -> Outcome<RunConfig> {
        let c = base.clone().overlay(layer);
        c.validate().map_err(|e| Failure::Usage(e.to_string()))?;
        Ok(c)
    };
    let coupling = |c: &RunConfig| c.coupling().map_err(|e| Failure::Usage(e.to_string()));

    let code = match cli.command {
        Command::Elliptic { u, m } => {
            let v = jacobi(u, m)?;
            let k = complete_k(m)?;
            let mut r = ResidualReport::new(name)
                .param("u", u)
                .param("m", m)
                .param("sn", v.sn)
                .param("cn", v.cn)
                .param("dn", v.dn)
                .param("K", k.value());
            r.check("sn^2 + cn^2 - 1", (v.sn * v.sn + v.cn * v.cn - 1.0).abs(), tol(1e-12));
            r.check("dn^2 + m sn^2 - 1", (v.dn * v.dn + m * v.sn * v.sn - 1.0).abs(), tol(1e-12));
            sink.report(name, &r)?
        }
        Command::VerifyClassical { physics, msq, chi, points, periods, h, alpha } => {
            let c = with(RunConfig { points, periods, h, alpha, ..physics.layer() })?;
            let cp = coupling(&c)?;
            let (lambda, mu) = (cp.lambda(), c.mu_or_default());
            let (points, periods, h) =
                (c.points.unwrap_or(2000), c.periods.unwrap_or(2.0), c.h.unwrap_or(DEFAULT_STEP));
            let sol = ScalarWaveSolution::rest_frame(lambda, mu, msq, chi)?;
            let mut r = ResidualReport::new(name)
                .param("lambda", lambda)
                .param("mu", mu)
                .param("msq", msq)
                .param("chi", chi)
                .param("amplitude", sol.amplitude())
                .param("kappa", sol.kappa())
                .param("p2", sol.p2())
                .grid("points", points as f64)
                .grid("periods", periods)
                .grid("h", h);
            r.check("scalar residual", max_scalar_residual(&sol, points, periods, h)?, tol(RESIDUAL_TOL));
            r.check("scalar residual (h/2)", max_scalar_residual(&sol, points, periods, 0.5 * h)?, tol(RESIDUAL_TOL));
            if let Coupling::YangMills { g, .. } = cp {
                let alpha = c.alpha.unwrap_or(1.0);
                let a = su2_solve(FourMomentum::rest((mu * mu * g).sqrt()), alpha, g, mu)?;
                r.check("su2 residual", max_su2_residual(&a, points, periods, h)?, tol(RESIDUAL_TOL));
                r.check("su2 algebraic residual", a.algebraic_residual(), tol(1e-12));
            }
            sink.report(name, &r)?
        }
        Command::Su2Solve { alpha, g, mu, p0, p1, p2, p3 } => {
            let (alpha, g, mu) = (alpha.unwrap_or(1.0), g.unwrap_or(1.0), mu.or(base.mu).unwrap_or(1.0));
            let p = match p0 {
                Some(p0) => FourMomentum::new(p0, p1, p2, p3),
                None if mu > 0.0 && g > 0.0 => FourMomentum::on_shell(mu * mu * g, [p1, p2, p3]),
                None => FourMomentum::new(0.0, p1, p2, p3),
            };
            let a = su2_solve(p, alpha, g, mu)?;
            let residual = max_su2_residual(&a, 2000, 2.0, DEFAULT_STEP)?;
            let mut r = ResidualReport::new(name)
                .param("alpha", alpha)
                .param("g", g)
                .param("mu", mu)
                .param("X", a.x)
                .param("Y", a.y)
                .param("Z", a.z)
                .param("residual", residual)
                .param("p0", a.p.p0)
                .param("p1", p1)
                .param("p2", p2)
                .param("p3", p3);
            r.check("algebraic residual", a.algebraic_residual(), tol(1e-12));
            r.check("su2 residual", residual, tol(RESIDUAL_TOL));
            if alpha == 1.0 {
                let exact = mu / g.sqrt();
                let dev = a.amplitudes().iter().fold(0.0f64, |m, x| m.max((x - exact).abs()));
                r.check("Landau X=Y=Z=mu/sqrt(g)", dev, tol(1e-14));
            }
            sink.report(name, &r)?
        }
        Command::Stability { physics, p2 } => {
            let c = with(physics.layer())?;
            let (lambda, mu) = (coupling(&c)?.lambda(), c.mu_or_default());
            let problem = match p2 {
                Some(p2) => StabilityProblem::new(lambda, mu, p2)?,
                None => StabilityProblem::on_shell(lambda, mu)?,
            };
            let zetas: Vec<f64> = phase_grid(2000, 2.0 * Jacobi::minus_one().period()).collect();
            let check = problem.check(&zetas, DEFAULT_STEP)?;
            let mut r = ResidualReport::new(name)
                .param("lambda", lambda)
                .param("mu", mu)
                .param("p2", p2.unwrap_or(problem.onshell_p2()))
                .param("eigenvalue", check.eigenvalue)
                .param("fitted_eigenvalue", check.fitted_eigenvalue);
            r.check("eigen residual", check.residual, tol(RESIDUAL_TOL));
            r.flag("on shell", check.onshell);
            sink.report(name, &r)?
        }
        Command::Spectrum { physics, nmax } => {
            let c = with(RunConfig { nmax, ..physics.layer() })?;
            let (lambda, mu) = (coupling(&c)?.lambda(), c.mu_or_default());
            let n_max = c.nmax.unwrap_or(DEFAULT_NMAX);
            let s = SpectralSum::new(lambda, mu, n_max)?;
            write_spectrum_csv(&s, &mut *sink.stdout)?;
            if let Some(path) = sink.file(name, "csv") {
                std::fs::create_dir_all(path.parent().unwrap_or(Path::new("."))).map_err(Error::from)?;
                write_spectrum_csv(&s, File::create(&path).map_err(Error::from)?)?;
            }
            let mut r = ResidualReport::new(name).param("lambda", lambda).param("mu", mu).param("nmax", n_max as f64);
            r.check("sum B_n - 1 (truncated)", (s.total_weight() - 1.0).abs(), tol(s.tail_bound.max(1e-12)));
            sink.store(&format!("{name}-report"), &r)?;
            if r.pass {
                0
            } else {
                1
            }
        }
        Command::Propagator { physics, p2, epsilon, nmax } => {
            let c = with(RunConfig { nmax, ..physics.layer() })?;
            let (lambda, mu) = (coupling(&c)?.lambda(), c.mu_or_default());
            let p2 = p2.ok_or_else(|| Failure::Usage("propagator needs --p2".into()))?;
            let v = propagator_momentum(p2, lambda, mu, epsilon, c.nmax.unwrap_or(DEFAULT_NMAX))?;
            writeln!(sink.stdout, "{}", to_json_string(&v)?).map_err(Error::from)?;
            let mut r = ResidualReport::new(name)
                .param("lambda", lambda)
                .param("mu", mu)
                .param("p2", p2)
                .param("epsilon", epsilon)
                .param("re", v.re)
                .param("im", v.im);
            r.check("tail bound", v.tail_bound, tol(1e-6));
            sink.store(name, &r)?;
            if r.pass {
                0
            } else {
                1
            }
        }
        Command::DsCheck { mode, physics, px, py, pz } => {
            let c = with(physics.layer())?;
            let cp = coupling(&c)?;
            let mu = c.mu_or_default();
            let r = match (mode, cp) {
                (DsMode::Scalar, cp) => scalar_tower_report(cp.lambda(), mu)?,
                (DsMode::Ym, Coupling::YangMills { g, n_color }) => {
                    let p2 = dispersion_p2(cp.lambda(), mu, 0.0)?;
                    ym_two_point_check(n_color, g, mu, FourMomentum::on_shell(p2, [px, py, pz]))?
                }
                (DsMode::Ym, Coupling::Scalar { .. }) => {
                    return Err(Failure::Usage("ds-check ym needs --g and --N".into()));
                }
            };
            sink.report(&format!("{name}-{}", if mode == DsMode::Ym { "ym" } else { "scalar" }), &r)?
        }
        Command::LatticeRun { dim, physics, periods, sites, dt_frac, steps_per_period, series } => {
            let c = with(RunConfig { periods, sites, dt_frac, ..physics.layer() })?;
            let (lambda, mu) = (coupling(&c)?.lambda(), c.mu_or_default());
            let dim = Dim::from_int(dim).map_err(|e| Failure::Usage(e.to_string()))?;
            let grid = match dim {
                Dim::Zero => LatticeGrid::rest_frame(lambda, mu, steps_per_period)?,
                Dim::One => LatticeGrid::travelling(
                    lambda,
                    mu,
                    c.sites.unwrap_or(lattice::DEFAULT_SITES),
                    c.dt_frac.unwrap_or(lattice::DEFAULT_DT_FRAC),
                )?,
            };
            let periods = c.periods.unwrap_or(10.0);
            let wave = grid.exact_wave(lambda, mu)?;
            let period = wave.phase_period() / wave.momentum().p0;
            let run = lattice::evolve(&grid, lambda, mu, periods * period)?;
            if let Some(path) = &series {
                run.series.write_csv(File::create(path).map_err(Error::from)?)?;
            }
            let mut r = ResidualReport::new(name)
                .param("lambda", lambda)
                .param("mu", mu)
                .param("dim", if dim == Dim::One { 1.0 } else { 0.0 })
                .param("periods", periods)
                .param("energy", run.energy.initial)
                .param("energy_fluctuation", run.energy.max_fluctuation)
                .grid("n_sites", grid.n_sites as f64)
                .grid("spacing", grid.spacing)
                .grid("dt", grid.dt)
                .grid("steps", run.steps as f64);
            r.check("energy drift", run.energy.drift, 1e-6);
            // the Verlet phase error grows linearly in time
            r.check("trajectory error", run.max_error, tol(1e-5 * periods.max(10.0)));
            sink.report(name, &r)?
        }
        Command::MeasureGap { input, lambda, mu } => {
            let input = input.ok_or_else(|| Failure::Usage("measure-gap needs --input".into()))?;
            let s = TimeSeries::read_csv(File::open(&input).map_err(Error::from)?)?;
            let m = lattice::measure_mass_gap(&s)?;
            let mut r = ResidualReport::new(name)
                .param("omega", m.omega)
                .param("periods", m.periods)
                .param("even_ratio", m.even_ratio())
                .grid("samples", s.len() as f64)
                .grid("sample_dt", s.sample_dt());
            if let Some(lambda) = lambda {
                let mu = mu.unwrap_or(1.0);
                let m0 = mass_gap(lambda, mu)?;
                r = r.param("lambda", lambda).param("mu", mu).param("m0", m0);
                r.check("gap relative error", (m.omega / m0 - 1.0).abs(), tol(1e-3));
                r.check("even-harmonic power ratio", m.even_ratio(), 1e-6);
                r.flag("odd harmonics decreasing", m.odd_powers_decreasing());
            }
            sink.report(name, &r)?
        }
    };
    Ok(code)
}

/// `n,mass,weight` rows.
pub fn write_spectrum_csv<W: Write>(s: &SpectralSum, w: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(w);
    let ser = |e: csv::Error| Error::Serialization(e.to_string());
    w.write_record(["n", "mass", "weight"]).map_err(ser)?;
    for l in &s.lines {
        w.write_record([l.n.to_string(), fmt_f64(l.mass), fmt_f64(l.weight)]).map_err(ser)?;
    }
    w.flush()?;
    Ok(())
}
