//! Command-line front end for the diagonal stability toolkit.

mod config;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use diagstab::simulation::{lyapunov_trace, popov_lyapunov_trace, simulate, BlockSpec, Topology};
use diagstab::{
    build_certificate, circulant_spectrum, ifp_certificate, ifp_threshold, popov_comparison,
    secant_report, Error, GainVector, SecantReport, DEFAULT_IFP_HEADROOM, DEFAULT_TOLERANCE,
};
use serde_json::{json, Value};

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_VIOLATED: u8 = 2;
const EXIT_DIVERGED: u8 = 3;

#[derive(Parser)]
#[command(name = "diagstab", version, about = "Stability certificates for cyclic interconnections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the secant condition for a gain vector.
    Check {
        /// Comma-separated positive gains.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        gains: Vec<f64>,
    },
    /// Build and verify a diagonal Lyapunov certificate.
    Certify {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        gains: Vec<f64>,
        /// Minimum accepted negativity margin.
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// Closed-form spectrum of the normalised cyclic matrix.
    Spectrum {
        #[arg(long, allow_hyphen_values = true)]
        r: f64,
        #[arg(long)]
        n: usize,
    },
    /// Compare the secant test with and without a Popov sector relaxation.
    Popov {
        /// Gains of the linear blocks; the last one feeds the nonlinearity.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        gains: Vec<f64>,
        /// Sector bound of the nonlinearity.
        #[arg(long, allow_hyphen_values = true)]
        kappa: f64,
    },
    /// Input-feedforward passivity of a linear cascade.
    Ifp {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        gains: Vec<f64>,
        /// Feedforward gain; defaults to just above the threshold.
        #[arg(long, allow_hyphen_values = true)]
        delta: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// Integrate an interconnection described by a JSON config.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// CSV destination; stdout when omitted (the summary then goes to stderr).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A failure carrying its exit code and a JSON body for stderr.
struct Failure {
    code: u8,
    body: Value,
}

impl Failure {
    fn usage(kind: &str, message: impl ToString) -> Self {
        Self { code: EXIT_USAGE, body: json!({"error": kind, "message": message.to_string()}) }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_condition_violation() { EXIT_VIOLATED } else { EXIT_USAGE };
        let mut body = json!({"error": e.name(), "message": e.to_string()});
        if let Error::SecantViolated(rep) = &e {
            body["secant"] = secant_json(rep);
        }
        Self { code, body }
    }
}

type Outcome = Result<(Value, u8), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    let outcome = match cli.command {
        Command::Check { gains } => check(gains),
        Command::Certify { gains, tol } => certify(gains, tol),
        Command::Spectrum { r, n } => spectrum(r, n),
        Command::Popov { gains, kappa } => popov(gains, kappa),
        Command::Ifp { gains, delta, tol } => ifp(gains, delta, tol),
        Command::Simulate { config, out } => return run_simulate(&config, out.as_deref()),
    };
    match outcome {
        Ok((value, code)) => {
            emit(io::stdout(), &value);
            ExitCode::from(code)
        }
        Err(f) => {
            emit(io::stderr(), &f.body);
            ExitCode::from(f.code)
        }
    }
}

// A closed pipe (e.g. `| head`) is not worth a panic.
fn emit(mut w: impl Write, v: &Value) {
    let text = serde_json::to_string_pretty(v).expect("json values always serialise");
    let _ = writeln!(w, "{text}");
}

fn secant_json(rep: &SecantReport<f64>) -> Value {
    let bound = match rep.bound() {
        Some(b) => json!(b),
        None => json!("+inf"),
    };
    json!({
        "n": rep.n,
        "product": rep.product,
        "r": rep.r,
        "bound": bound,
        "margin": rep.margin,
        "satisfied": rep.satisfied,
    })
}

fn verdict(satisfied: bool) -> u8 {
    if satisfied {
        EXIT_OK
    } else {
        EXIT_VIOLATED
    }
}

fn check(gains: Vec<f64>) -> Outcome {
    let rep = secant_report(&GainVector::new(gains)?);
    Ok((secant_json(&rep), verdict(rep.satisfied)))
}

fn certify(gains: Vec<f64>, tol: f64) -> Outcome {
    let cert = build_certificate(&GainVector::new(gains)?, tol)?;
    let body = json!({
        "d": cert.d,
        "delta": cert.delta.diag,
        "negativity_margin": cert.negativity_margin,
        "epsilon": cert.epsilon(),
        "secant": secant_json(&cert.secant),
    });
    Ok((body, EXIT_OK))
}

fn spectrum(r: f64, n: usize) -> Outcome {
    let s = circulant_spectrum(r, n)?;
    let eigenvalues: Vec<[f64; 2]> = s.eigenvalues.iter().map(|z| [z.re, z.im]).collect();
    let body = json!({
        "n": s.n,
        "r": s.r,
        "eigenvalues": eigenvalues,
        "min_real_part": s.min_real_part,
        "max_residual": s.max_residual(),
        "unitarity_error": s.unitarity_error(),
    });
    Ok((body, EXIT_OK))
}

fn popov(gains: Vec<f64>, kappa: f64) -> Outcome {
    let cmp = popov_comparison(&GainVector::new(gains)?, kappa)?;
    let body = json!({
        "effective_gains": cmp.effective_gains.as_slice(),
        "relaxed": secant_json(&cmp.relaxed),
        "conservative": secant_json(&cmp.conservative),
    });
    Ok((body, verdict(cmp.relaxed.satisfied)))
}

fn ifp(gains: Vec<f64>, delta: Option<f64>, tol: f64) -> Outcome {
    let gains = GainVector::new(gains)?;
    let threshold = ifp_threshold(&gains);
    // A vanishing threshold would make a relative headroom meaningless.
    let delta = delta.unwrap_or(if threshold > DEFAULT_IFP_HEADROOM {
        threshold * (1.0 + DEFAULT_IFP_HEADROOM)
    } else {
        threshold + DEFAULT_IFP_HEADROOM
    });
    let rep = ifp_certificate(&gains, delta, tol)?;
    let body = json!({
        "gains": rep.gains.as_slice(),
        "delta_threshold": rep.delta_threshold,
        "delta": rep.delta,
        "d_tilde": rep.d_tilde,
        "weights": rep.weights(),
        "negativity_margin": rep.negativity_margin,
        "epsilon": rep.epsilon,
    });
    Ok((body, EXIT_OK))
}

fn run_simulate(path: &std::path::Path, out: Option<&std::path::Path>) -> ExitCode {
    match simulate_inner(path, out) {
        Ok((summary, code)) => {
            if out.is_some() {
                emit(io::stdout(), &summary);
            } else {
                emit(io::stderr(), &summary);
            }
            ExitCode::from(code)
        }
        Err(f) => {
            emit(io::stderr(), &f.body);
            ExitCode::from(f.code)
        }
    }
}

fn simulate_inner(path: &std::path::Path, out: Option<&std::path::Path>) -> Outcome {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage("Io", format!("{}: {e}", path.display())))?;
    let invalid = |e: config::ConfigError| {
        Failure {
            code: EXIT_USAGE,
            body: json!({"error": "InvalidConfig", "path": e.path, "message": e.to_string()}),
        }
    };
    let cfg = config::parse(&text).map_err(invalid)?;
    let spec = cfg.validate().map_err(invalid)?;
    let traj = simulate(&spec, &cfg.x0, cfg.dt, cfg.t_end)?;

    let write = |w: &mut dyn Write| traj.write_csv(&mut *w).and_then(|_| w.flush());
    let io_result = match out {
        Some(p) => File::create(p).and_then(|f| write(&mut BufWriter::new(f))),
        None => write(&mut BufWriter::new(io::stdout().lock())),
    };
    match io_result {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => return Err(Failure::usage("Io", e)),
        _ => {}
    }

    let spec = &traj.spec;
    let trace = match spec.topology {
        Topology::Popov => {
            let n = spec.blocks.len();
            let psi = spec.popov_nonlinearity().expect("validated popov loop");
            let tau = match spec.blocks[n - 2] {
                BlockSpec::LinearFirstOrder { tau, .. } => tau,
                _ => unreachable!("validated popov loop"),
            };
            popov_lyapunov_trace(&traj, &traj.weights, psi.sector_bound(), tau, |z| psi.eval(z))?
        }
        _ => lyapunov_trace(&traj, &traj.weights)?,
    };
    let min_vdot_margin = trace
        .supply
        .iter()
        .zip(&trace.vdot)
        .map(|(s, v)| s - v)
        .fold(f64::INFINITY, f64::min);
    let max_residual = traj
        .dissipation_residuals
        .iter()
        .map(|b| b.worst)
        .fold(f64::NEG_INFINITY, f64::max);
    let summary = json!({
        "steps": traj.len(),
        "converged": traj.converged(),
        "diverged": traj.diverged,
        "terminal_state_norm": traj.terminal_state_norm(),
        "weights": traj.weights,
        "max_dissipation_residual": max_residual,
        // Each block's residual judged against its own finite-difference tolerance.
        "dissipation_ok": traj.dissipation_residuals.iter().all(|b| b.satisfied),
        "max_composite_increment": traj.max_composite_increment(),
        "min_vdot_margin": min_vdot_margin,
        // Finite-difference noise bound on the margin above.
        "vdot_tolerance": trace.tolerance,
    });
    let code = if traj.diverged { EXIT_DIVERGED } else { EXIT_OK };
    Ok((summary, code))
}
