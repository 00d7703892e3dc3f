//! The `liouspace` command line.
//!
//! Exit codes: 0 on success, 2 for malformed input or invalid arguments,
//! 1 for numerical failures (tolerance, window, factorization) and I/O.
//! Results go to standard output one line each; diagnostics go to standard
//! error at the level named by `LIOUSPACE_LOG`.

use crate::duality_maps::{f_to_rho, factorize_density, offset_window_for, rho_to_f};
use crate::error::{Error, Result};
use crate::field::PhaseSpaceField;
use crate::fieldfile::{parse_grid_spec, FieldFile, PhaseCurve};
use crate::grid::UniformGrid1D;
use crate::phase_flow::{evolve_gaussian, gaussian_density, GaussianPhaseState, PhasePoint};
use crate::schrodinger_like::{greens, phase_closed, phase_integrate, propagate_psi, DEFAULT_PHASE_STEP};
use crate::verify::{run_suite, Suite};
use clap::{Parser, Subcommand, ValueEnum};
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const LOG_ENV: &str = "LIOUSPACE_LOG";

const DEFAULT_PHASE_GRID: &str = "-6,6,257,-8,8,257";
const DEFAULT_XGRID: &str = "-10,10,321";
const DEFAULT_PGRID: &str = "-8,8,257";
const DEFAULT_FACTOR_TOL: f64 = 1e-8;

#[derive(Parser, Debug)]
#[command(name = "liouspace", version, about = "Classical phase-space dynamics in Hilbert-space form")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evolve a Gaussian phase-space state and sample it on a grid.
    Evolve {
        #[arg(long, allow_hyphen_values = true)]
        q0: f64,
        #[arg(long, allow_hyphen_values = true)]
        p0: f64,
        /// Covariance entries `sqq,sqp,spp`.
        #[arg(long, allow_hyphen_values = true)]
        cov: String,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        /// `qmin,qmax,nq,pmin,pmax,np`.
        #[arg(long, allow_hyphen_values = true, default_value = DEFAULT_PHASE_GRID)]
        grid: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Phase-space distribution to density matrix.
    F2rho {
        #[arg(long = "in")]
        input: PathBuf,
        /// `min,max,n`; defaults to [-10,10] with spacing 1/16.
        #[arg(long, allow_hyphen_values = true, default_value = DEFAULT_XGRID)]
        xgrid: String,
        /// Momentum quadrature `min,max,n`; defaults to the input momentum grid.
        #[arg(long, allow_hyphen_values = true)]
        pquad: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Density matrix to phase-space distribution.
    Rho2f {
        #[arg(long = "in")]
        input: PathBuf,
        /// Defaults to the input position grid.
        #[arg(long, allow_hyphen_values = true)]
        qgrid: Option<String>,
        #[arg(long, allow_hyphen_values = true, default_value = DEFAULT_PGRID)]
        pgrid: String,
        /// Symmetric offset quadrature; defaults to twice the input spacing over its full width.
        #[arg(long, allow_hyphen_values = true)]
        uquad: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rank-one factorization of a pure density matrix.
    Factorize {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_FACTOR_TOL)]
        tol: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Propagate a wave function with the Green kernel.
    Propagate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        /// Output grid; defaults to the input grid.
        #[arg(long, allow_hyphen_values = true)]
        xgrid: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Gauge phase at time t.
    Phase {
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        #[arg(long, value_enum, default_value_t = Method::Closed)]
        method: Method,
        #[arg(long, default_value_t = DEFAULT_PHASE_STEP)]
        step: f64,
        /// Write the curve on [0, t] as a phase_curve file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the Green kernel G(x, x', t).
    GreensEval {
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, allow_hyphen_values = true)]
        xp: f64,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Closed,
    Ode,
}

/// Exit status for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidGrid(_)
        | Error::InvalidCovariance(_)
        | Error::InvalidArgument(_)
        | Error::NonPositiveStep(_)
        | Error::NonHermitian(_)
        | Error::PropagatorSingular(_)
        | Error::GridMismatch(_)
        | Error::Malformed(_) => 2,
        Error::WindowTooSmall { .. }
        | Error::Normalization(_)
        | Error::NotFactorizable(_)
        | Error::DegenerateDiagonal(_)
        | Error::ChirpUndersampled { .. }
        | Error::NotDecayed(_)
        | Error::NonPositiveResidual(..)
        | Error::Io(_) => 1,
    }
}

fn init_logging() {
    let env = env_logger::Env::new().filter_or(LOG_ENV, "error");
    let _ = env_logger::Builder::from_env(env).target(env_logger::Target::Stderr).try_init();
}

/// Parses `args` (program name first), runs the command, and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_logging();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match execute(cli.command, &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn parse_list(s: &str, what: &str, n: usize) -> Result<Vec<f64>> {
    let v = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| Error::Malformed(format!("{what} {s:?}: {e}")))?;
    if v.len() != n {
        return Err(Error::Malformed(format!("{what} {s:?} needs {n} comma-separated values")));
    }
    Ok(v)
}

fn parse_phase_grid(s: &str) -> Result<(UniformGrid1D, UniformGrid1D)> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 6 {
        return Err(Error::Malformed(format!("grid {s:?} is not qmin,qmax,nq,pmin,pmax,np")));
    }
    Ok((parse_grid_spec(&parts[..3].join(","))?, parse_grid_spec(&parts[3..].join(","))?))
}

fn read_kind(path: &Path) -> Result<FieldFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    FieldFile::parse(&text)
}

fn wrong_kind(path: &Path, want: &str, got: &FieldFile) -> Error {
    Error::Malformed(format!("{}: expected {want}, found {}", path.display(), got.kind()))
}

fn write_field(file: &FieldFile, path: &Path) -> Result<()> {
    log::info!("writing {} to {}", file.kind(), path.display());
    file.write(path).map_err(|e| match e {
        Error::Io(m) => Error::Io(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn execute(cmd: Command, out: &mut impl Write) -> Result<i32> {
    match cmd {
        Command::Evolve { q0, p0, cov, t, grid, out: path } => {
            let c = parse_list(&cov, "covariance", 3)?;
            let (qg, pg) = parse_phase_grid(&grid)?;
            let g0 = GaussianPhaseState::from_entries(q0, p0, c[0], c[1], c[2])?;
            let g = evolve_gaussian(&g0, t);
            let mut field = PhaseSpaceField::sample(&|q: f64, p: f64| gaussian_density(&g, PhasePoint::new(q, p)), qg, pg)?;
            field.time = t;
            let field = match field.clone().certify_classical() {
                Ok(f) => f,
                Err(e) => {
                    log::warn!("{e}; field written without the classical flag");
                    field
                }
            };
            write_field(&FieldFile::PhaseSpace(field), &path)?;
            let (m, s) = (g.mean(), g.cov());
            emit(out, &format!("t={t} mean_q={} mean_p={} cov_qq={} cov_qp={} cov_pp={}", m.q, m.p, s[0][0], s[0][1], s[1][1]))?;
        }
        Command::F2rho { input, xgrid, pquad, out: path } => {
            let f = match read_kind(&input)? {
                FieldFile::PhaseSpace(f) => f,
                other => return Err(wrong_kind(&input, "phase_space_field", &other)),
            };
            let xg = parse_grid_spec(&xgrid)?;
            let pq = match pquad {
                Some(s) => parse_grid_spec(&s)?,
                None => f.pgrid,
            };
            let rho = f_to_rho(&f, xg, pq)?;
            emit(out, &format!("kind=density_matrix t={} trace={} hermiticity={:e}", rho.time, rho.trace(), rho.hermiticity_error()))?;
            write_field(&FieldFile::DensityMatrix(rho), &path)?;
        }
        Command::Rho2f { input, qgrid, pgrid, uquad, out: path } => {
            let rho = match read_kind(&input)? {
                FieldFile::DensityMatrix(r) => r,
                other => return Err(wrong_kind(&input, "density_matrix", &other)),
            };
            let qg = match qgrid {
                Some(s) => parse_grid_spec(&s)?,
                None => rho.xgrid,
            };
            let uq = match uquad {
                Some(s) => parse_grid_spec(&s)?,
                None => offset_window_for(&rho.xgrid),
            };
            let f = rho_to_f(&rho, qg, parse_grid_spec(&pgrid)?, uq)?;
            emit(out, &format!("kind=phase_space_field t={} integral={} classical={}", f.time, f.integral(), f.classical))?;
            write_field(&FieldFile::PhaseSpace(f), &path)?;
        }
        Command::Factorize { input, tol, out: path } => {
            let rho = match read_kind(&input)? {
                FieldFile::DensityMatrix(r) => r,
                other => return Err(wrong_kind(&input, "density_matrix", &other)),
            };
            let psi = factorize_density(&rho, tol)?;
            emit(out, &format!("kind=wave_function t={} norm={} gauge_anchor={}", psi.time, psi.norm_sqr(), psi.gauge_anchor.map_or(-1, |a| a as i64)))?;
            write_field(&FieldFile::WaveFunction(psi), &path)?;
        }
        Command::Propagate { input, t, xgrid, out: path } => {
            let psi0 = match read_kind(&input)? {
                FieldFile::WaveFunction(w) => w,
                other => return Err(wrong_kind(&input, "wave_function", &other)),
            };
            let xg = match xgrid {
                Some(s) => parse_grid_spec(&s)?,
                None => psi0.xgrid,
            };
            let psi = propagate_psi(&psi0, t, xg)?;
            emit(out, &format!("kind=wave_function t={} norm={}", psi.time, psi.norm_sqr()))?;
            write_field(&FieldFile::WaveFunction(psi), &path)?;
        }
        Command::Phase { t, method, step, out: path } => {
            if !(step > 0.0) {
                return Err(Error::NonPositiveStep(step));
            }
            let (value, curve): (f64, Box<dyn Fn(f64) -> f64>) = match method {
                Method::Closed => (phase_closed(t), Box::new(phase_closed)),
                Method::Ode => {
                    let phase = phase_integrate(t, step)?;
                    let value = phase.value(t).ok_or_else(|| Error::InvalidArgument(format!("t={t} outside integrated range")))?;
                    (value, Box::new(move |s| phase.value(s).unwrap_or(value)))
                }
            };
            emit(out, &format!("{value}"))?;
            if let Some(p) = path {
                let tgrid = curve_grid(t, step)?;
                let values = tgrid.points().map(curve).collect();
                let name = match method {
                    Method::Closed => "closed",
                    Method::Ode => "ode",
                };
                write_field(&FieldFile::PhaseCurve(PhaseCurve { tgrid, values, method: name.into() }), &p)?;
            }
        }
        Command::GreensEval { x, xp, t } => {
            let g = greens(x, xp, t)?;
            emit(out, &format!("re={} im={} abs={} arg={}", g.re, g.im, g.norm(), g.arg()))?;
        }
        Command::Verify { suite } => {
            let results = run_suite(suite);
            for r in &results {
                emit(out, &r.to_string())?;
            }
            let failed = results.iter().filter(|r| !r.passed()).count();
            if failed > 0 {
                eprintln!("error: {failed} of {} checks failed", results.len());
                return Ok(1);
            }
        }
    }
    Ok(0)
}

/// Grid on [0, t] (or [t, 0]) with spacing at most `step`.
fn curve_grid(t: f64, step: f64) -> Result<UniformGrid1D> {
    if t == 0.0 {
        return Err(Error::InvalidArgument("a phase curve needs t != 0".into()));
    }
    let n = (t.abs() / step).ceil() as usize + 1;
    UniformGrid1D::new(t.min(0.0), t.max(0.0), n.max(2))
}

fn emit(out: &mut impl Write, line: &str) -> Result<()> {
    writeln!(out, "{line}").map_err(|e| Error::Io(e.to_string()))
}
