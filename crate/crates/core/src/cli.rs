//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::analysis::{
    estimate_gamma, kappa_table, kl_sequence_point, tightness_sequence, write_demo_csv, DemoRow, GammaGrid,
    SequenceKind,
};
use crate::error::{Error, Result};
use crate::faces::classify_exposing;
use crate::feasibility::{analyze, build_chain, classify_regime, FeasibilityProblem, VerifyOptions};
use crate::frf::{default_g, eval_frf, frf_for_exposed, FACE_TOL};
use crate::geometry::project;
use crate::gfun::GFunction;
use crate::parse::{parse_face, parse_gfunction, parse_point};

pub const SCHEMA: &str = "1";

#[derive(Debug, Parser)]
#[command(
    name = "expcone",
    version,
    about = "Exponential cone projections, facial residual functions and error bounds"
)]
struct Cli {
    /// Seed for randomized sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Moreau decomposition of a point.
    Project {
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Face of K exposed by a dual vector.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, default_value_t = FACE_TOL)]
        tol: f64,
    },
    /// One-step facial residual function for the face exposed by `z`.
    Frf {
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        /// Growth function (sqrt, power:<a>, entropy, log, identity).
        #[arg(long)]
        g: Option<String>,
        /// Breakpoints of the step table for κ(t).
        #[arg(long, default_value = "0.5,1,2,4")]
        breakpoints: String,
        /// Evaluate at `eps,t`.
        #[arg(long)]
        eval: Option<String>,
    },
    /// Lower estimate of γ_{z,η}.
    Gamma {
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        /// Face (Full, FBeta:<b>, FInf, FNegInf, Zero); defaults to the one exposed by `z`.
        #[arg(long, allow_hyphen_values = true)]
        face: Option<String>,
        #[arg(long)]
        g: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Facial reduction chain and regime of a problem file.
    Chain {
        #[arg(long)]
        problem: PathBuf,
    },
    /// Chain, assembled bound and its empirical check.
    Verify {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long, default_value_t = 4096)]
        samples: usize,
        #[arg(long, default_value_t = 2.0)]
        radius: f64,
    },
    /// Tightness sequences as CSV.
    Demo {
        #[command(subcommand)]
        kind: Demo,
    },
}

#[derive(Debug, Args)]
struct GridArgs {
    #[arg(long, default_value_t = 60)]
    norm_points: usize,
    #[arg(long, default_value_t = 801)]
    dir_points: usize,
    #[arg(long, default_value_t = 40.0)]
    r_max: f64,
}

#[derive(Debug, Subcommand)]
enum Demo {
    /// `(ln k / k, 0, 1)` against `F_{-∞}`; ratio = lhs / g_{-∞}(dK).
    Entropic {
        #[arg(long, default_value_t = 1e6)]
        kmax: f64,
        #[arg(long, default_value_t = 10)]
        per_decade: usize,
    },
    /// Projected `v^k` against `F_β`; dK = ‖w − v‖, ratio = dK^{1/2} / lhs.
    Beta {
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        beta: f64,
        #[arg(long, default_value_t = 1e6)]
        kmax: f64,
        #[arg(long, default_value_t = 10)]
        per_decade: usize,
    },
    /// `(-1, 1/k, 0)` against `F_∞`; ratio = g_∞(dK) / lhs.
    Log {
        #[arg(long, default_value_t = 50)]
        kmin: u64,
        #[arg(long, default_value_t = 500)]
        kmax: u64,
    },
    /// `(-η/2, η/(2k), 0)` against `F_∞`; ratio = dK^α / lhs.
    Nonholder {
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[arg(long, default_value_t = 60)]
        kmax: u64,
    },
    /// KL quotient at midpoints of the entropic sequence; lhs = f, dK = ‖∇f‖, ratio = ‖∇f‖ / (2√f).
    Kl {
        #[arg(long, default_value_t = 1e6)]
        kmax: f64,
        #[arg(long, default_value_t = 10)]
        per_decade: usize,
    },
}

enum Output {
    Json(Value),
    Csv(Vec<DemoRow>),
}

/// Runs the CLI on `argv` (including the program name) and returns the exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let result = dispatch(&cli).and_then(|out| emit(&cli, out, stdout));
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn emit(cli: &Cli, out: Output, stdout: &mut dyn Write) -> Result<()> {
    let mut buf = Vec::new();
    match out {
        Output::Json(v) => {
            serde_json::to_writer_pretty(&mut buf, &v)?;
            buf.push(b'\n');
        }
        Output::Csv(rows) => write_demo_csv(&mut buf, &rows)?,
    }
    match &cli.out {
        Some(path) => std::fs::write(path, buf)?,
        None => stdout.write_all(&buf)?,
    }
    Ok(())
}

fn envelope<T: Serialize>(seed: u64, body: &T) -> Result<Value> {
    let mut v = serde_json::to_value(body)?;
    if let Value::Object(map) = &mut v {
        map.insert("schema".into(), json!(SCHEMA));
        map.insert("seed".into(), json!(seed));
    }
    Ok(v)
}

fn read_problem(path: &PathBuf) -> Result<FeasibilityProblem> {
    FeasibilityProblem::from_json(&std::fs::read_to_string(path)?)
}

fn reals(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| Error::Parse(format!("not a real number: {t:?}"))))
        .collect()
}

fn log_ks(lo: f64, hi: f64, per_decade: usize) -> Result<Vec<f64>> {
    if !(hi >= lo && hi.is_finite()) || per_decade == 0 {
        return Err(Error::InvalidArgument(format!(
            "bad index range [{lo}, {hi}] with {per_decade} points per decade"
        )));
    }
    let n = ((hi.log10() - lo.log10()) * per_decade as f64).round() as usize;
    Ok((0..=n)
        .map(|i| (lo.log10() + i as f64 / per_decade as f64).min(hi.log10()))
        .map(|e| 10f64.powf(e).round().max(lo))
        .collect())
}

fn dispatch(cli: &Cli) -> Result<Output> {
    let seed = cli.seed;
    let json = |v: Value| Ok(Output::Json(v));
    match &cli.command {
        Command::Project { point } => {
            let p = parse_point(point)?;
            let m = project(p)?;
            json(json!({
                "schema": SCHEMA,
                "seed": seed,
                "point": p,
                "primal": m.primal,
                "polar": m.polar,
                "distance": m.distance(),
            }))
        }
        Command::Classify { z, tol } => {
            let face = classify_exposing(parse_point(z)?, *tol)?;
            json(envelope(seed, &face)?)
        }
        Command::Frf { z, g, breakpoints, eval } => {
            let z = parse_point(z)?;
            let face = classify_exposing(z, FACE_TOL)?;
            let g = match g {
                Some(s) => parse_gfunction(s)?,
                None => default_g(face, z)?,
            };
            let kappa = kappa_table(z, face, g, &reals(breakpoints)?, &GammaGrid::default())?;
            let psi = frf_for_exposed(face, z, &kappa, Some(g))?;
            let value = match eval {
                Some(s) => match reals(s)?[..] {
                    [eps, t] => Some(eval_frf(&psi, eps, t)?),
                    _ => return Err(Error::Parse(format!("--eval needs eps,t; got {s:?}"))),
                },
                None => None,
            };
            json(json!({
                "schema": SCHEMA,
                "seed": seed,
                "face": face,
                "g": g,
                "kappa": kappa,
                "frf": psi,
                "value": value,
            }))
        }
        Command::Gamma { z, face, g, eta, grid } => {
            let z = parse_point(z)?;
            let face = match face {
                Some(s) => parse_face(s)?,
                None => classify_exposing(z, FACE_TOL)?,
            };
            let g: GFunction = match g {
                Some(s) => parse_gfunction(s)?,
                None => default_g(face, z)?,
            };
            let grid = GammaGrid {
                norm_points: grid.norm_points,
                dir_points: grid.dir_points,
                r_max: grid.r_max,
                ..Default::default()
            };
            let est = estimate_gamma(z, face, g, *eta, &grid)?;
            json(envelope(seed, &json!({ "face": face, "estimate": est }))?)
        }
        Command::Chain { problem } => {
            let pr = read_problem(problem)?;
            let chain = build_chain(&pr)?;
            let regime = classify_regime(&chain, &pr)?;
            json(envelope(seed, &json!({ "chain": chain, "regime": regime }))?)
        }
        Command::Verify { problem, samples, radius } => {
            let pr = read_problem(problem)?;
            let opts = VerifyOptions { samples: *samples, b_radius: *radius, seed, ..Default::default() };
            json(envelope(seed, &analyze(&pr, &opts)?)?)
        }
        Command::Demo { kind } => demo(kind).map(Output::Csv),
    }
}

fn demo(kind: &Demo) -> Result<Vec<DemoRow>> {
    let mut rows = Vec::new();
    match *kind {
        Demo::Entropic { kmax, per_decade } => {
            for k in log_ks(10.0, kmax, per_decade)? {
                let p = tightness_sequence(SequenceKind::EntropicA, k)?;
                let ratio = p.lhs / GFunction::EntropyNegInf.eval(p.rhs_input)?;
                rows.push(DemoRow { k, lhs: p.lhs, dk: p.rhs_input, ratio });
            }
        }
        Demo::Beta { beta, kmax, per_decade } => {
            for k in log_ks(1.0, kmax, per_decade)? {
                let p = tightness_sequence(SequenceKind::BetaB { beta }, k)?;
                rows.push(DemoRow { k, lhs: p.lhs, dk: p.rhs_input, ratio: p.rhs_input.sqrt() / p.lhs });
            }
        }
        Demo::Log { kmin, kmax } => {
            if kmin < 1 || kmax < kmin {
                return Err(Error::InvalidArgument(format!("bad index range [{kmin}, {kmax}]")));
            }
            for k in kmin..=kmax {
                let p = tightness_sequence(SequenceKind::LogC, k as f64)?;
                let ratio = GFunction::LogInf.eval(p.rhs_input)? / p.lhs;
                rows.push(DemoRow { k: k as f64, lhs: p.lhs, dk: p.rhs_input, ratio });
            }
        }
        Demo::Nonholder { eta, alpha, kmax } => {
            GFunction::power(alpha)?;
            for k in 1..=kmax {
                let p = tightness_sequence(SequenceKind::NonHoelder { eta }, k as f64)?;
                rows.push(DemoRow { k: k as f64, lhs: p.lhs, dk: p.rhs_input, ratio: p.rhs_input.powf(alpha) / p.lhs });
            }
        }
        Demo::Kl { kmax, per_decade } => {
            for k in log_ks(10.0, kmax, per_decade)? {
                let p = kl_sequence_point(k)?;
                rows.push(DemoRow { k, lhs: p.f_value, dk: p.subgrad_norm, ratio: p.quotient });
            }
        }
    }
    Ok(rows)
}
