//! The `jamesian` command line.
//!
//! Exit codes: 0 success, 1 usage, 2 domain, 3 numerics, 4 condition
//! violations.

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::curves::{
    integrate_level_curve_ode, sample_gradient_field, sample_level_curve, CurveSamples,
    CURVE_MARGIN, DEFAULT_STEP,
};
use crate::domain::Prob;
use crate::error::{Error, ErrorClass};
use crate::format::{fmt_csv, fmt_sig, points_csv};
use crate::generators::{
    builtin_generator, generator_selfcheck, jamesian_from_generator, GeneratorId,
};
use crate::model::JamesianModel;
use crate::verify::{
    algebraic_identity_checks, check_conditions, mc_estimate, z_score, ConditionList,
    DEFAULT_MAX_ROUNDS,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_NUMERICS: i32 = 3;
pub const EXIT_VIOLATIONS: i32 = 4;

/// A model named on the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelSpec {
    James,
    Piecewise,
    Generator(GeneratorId),
}

impl FromStr for ModelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "james" => Ok(ModelSpec::James),
            "piecewise" => Ok(ModelSpec::Piecewise),
            other => {
                let id: GeneratorId = other.parse().map_err(|_| {
                    Error::Param(format!(
                        "unknown model `{other}` (expected james, piecewise, logit, rational, cot, probit or power:<n>)"
                    ))
                })?;
                if let GeneratorId::Power(n) = id {
                    crate::generators::PowerFamilyParam::new(n)?;
                }
                Ok(ModelSpec::Generator(id))
            }
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::James => f.write_str("james"),
            ModelSpec::Piecewise => f.write_str("piecewise"),
            ModelSpec::Generator(GeneratorId::Logit) => f.write_str("logit"),
            ModelSpec::Generator(GeneratorId::Rational) => f.write_str("rational"),
            ModelSpec::Generator(GeneratorId::Cot) => f.write_str("cot"),
            ModelSpec::Generator(GeneratorId::Probit) => f.write_str("probit"),
            ModelSpec::Generator(GeneratorId::Power(n)) => write!(f, "power:{n}"),
        }
    }
}

impl ModelSpec {
    /// Builds the model. Generator ids go through the generator pipeline,
    /// including its self-check.
    pub fn build(self) -> Result<JamesianModel, Error> {
        match self {
            ModelSpec::James => Ok(JamesianModel::james()),
            ModelSpec::Piecewise => Ok(JamesianModel::piecewise()),
            ModelSpec::Generator(id) => jamesian_from_generator(builtin_generator(id)?),
        }
    }
}

fn parse_model(s: &str) -> Result<ModelSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_list(s: &str) -> Result<ConditionList, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "jamesian",
    version,
    about = "Matchup probabilities from winning percentages"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a model at (a, b)
    Eval {
        #[arg(long, value_parser = parse_model)]
        model: ModelSpec,
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Analytic gradient and its unit direction at an interior point
    Grad {
        #[arg(long, value_parser = parse_model)]
        model: ModelSpec,
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Sample a level curve to CSV
    Curve {
        #[arg(long, value_parser = parse_model)]
        model: ModelSpec,
        #[arg(long, allow_negative_numbers = true)]
        c: f64,
        /// number of samples (closed-form sampling)
        #[arg(long, default_value_t = 101)]
        n: usize,
        /// integrate the level-curve equation with RK4 instead
        #[arg(long)]
        ode: bool,
        #[arg(long, default_value_t = DEFAULT_STEP)]
        step: f64,
        /// ODE range start
        #[arg(long, default_value_t = 0.01)]
        a_min: f64,
        /// ODE range end
        #[arg(long, default_value_t = 0.99)]
        a_max: f64,
        /// output file; CSV goes to stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the unit gradient field to CSV
    Field {
        #[arg(long, value_parser = parse_model)]
        model: ModelSpec,
        #[arg(long, default_value_t = 0.05)]
        mesh: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo estimate of the win probability
    Mc {
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_parser = parse_model, default_value = "james")]
        model: ModelSpec,
        #[arg(long, default_value_t = DEFAULT_MAX_ROUNDS)]
        max_rounds: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Audit a model against a condition list on a grid
    Check {
        #[arg(long, value_parser = parse_model)]
        model: ModelSpec,
        /// james, proto, involutive or generator-selfcheck
        #[arg(long, value_parser = parse_list)]
        list: ConditionList,
        /// grid cells per axis
        #[arg(long, default_value_t = 50)]
        mesh: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Check the round-outcome identities behind the closed form
    Identities {
        #[arg(long, default_value_t = 100)]
        cells: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

/// Failure inside a command.
enum Failure {
    Model(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Model(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn exit_code(e: &Error) -> i32 {
    match e.class() {
        ErrorClass::Usage => EXIT_USAGE,
        ErrorClass::Domain => EXIT_DOMAIN,
        ErrorClass::Numerical => EXIT_NUMERICS,
    }
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Failure::Model(e)) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn json_line(out: &mut dyn Write, v: &serde_json::Value) -> std::io::Result<()> {
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(v).expect("json values serialize")
    )
}

fn emit(out: &mut dyn Write, path: Option<&PathBuf>, body: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, body)?,
        None => out.write_all(body.as_bytes())?,
    }
    Ok(())
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Eval {
            model,
            a,
            b,
            format,
        } => {
            let (pa, pb) = (Prob::new(a)?, Prob::new(b)?);
            let m = model.build()?;
            let v = m.evaluate(pa, pb)?.value();
            match format {
                Format::Text => writeln!(out, "{}", fmt_sig(v, 15))?,
                Format::Json => json_line(
                    out,
                    &json!({ "model": m.name(), "a": a, "b": b, "value": v }),
                )?,
            }
        }
        Command::Grad {
            model,
            a,
            b,
            format,
        } => {
            Prob::new(a)?;
            Prob::new(b)?;
            let m = model.build()?;
            let [ga, gb] = m.gradient(a, b)?;
            let norm = ga.hypot(gb);
            let (ua, ub) = (ga / norm, gb / norm);
            match format {
                Format::Text => {
                    writeln!(out, "gradient: ({}, {})", fmt_sig(ga, 15), fmt_sig(gb, 15))?;
                    writeln!(out, "direction: ({}, {})", fmt_sig(ua, 15), fmt_sig(ub, 15))?;
                }
                Format::Json => json_line(
                    out,
                    &json!({
                        "model": m.name(), "a": a, "b": b,
                        "gradient": [ga, gb], "direction": [ua, ub],
                    }),
                )?,
            }
        }
        Command::Curve {
            model,
            c,
            n,
            ode,
            step,
            a_min,
            a_max,
            out: path,
        } => {
            let pc = Prob::new(c)?;
            let m = model.build()?;
            if ode {
                let gen = m.ode_generator().ok_or_else(|| {
                    Error::domain(format!("model {} has no level-curve equation", m.name()))
                })?;
                let samples = integrate_level_curve_ode(&gen, pc, (a_min, a_max), step)?;
                let dev = samples.max_deviation(|a| m.level_curve_point(a, c))?;
                emit(out, path.as_ref(), &points_csv(&samples.points))?;
                writeln!(
                    out,
                    "max deviation from closed-form curve: {}",
                    fmt_sig(dev, 6)
                )?;
            } else {
                let samples = sample_level_curve(&m, pc, n)?;
                emit(out, path.as_ref(), &points_csv(&samples.points))?;
                if let Some(p) = &path {
                    report_written(out, &samples, p)?;
                }
            }
        }
        Command::Field {
            model,
            mesh,
            out: path,
        } => {
            let m = model.build()?;
            let field = sample_gradient_field(&m, mesh)?;
            let mut body = String::from("a,b,ga,gb\n");
            for s in &field {
                body.push_str(&format!(
                    "{},{},{},{}\n",
                    fmt_csv(s.a),
                    fmt_csv(s.b),
                    fmt_csv(s.ga),
                    fmt_csv(s.gb)
                ));
            }
            emit(out, path.as_ref(), &body)?;
            if let Some(p) = &path {
                writeln!(out, "wrote {} vectors to {}", field.len(), p.display())?;
            }
        }
        Command::Mc {
            a,
            b,
            trials,
            seed,
            model,
            max_rounds,
            format,
        } => {
            let (pa, pb) = (Prob::new(a)?, Prob::new(b)?);
            let m = model.build()?;
            let model_value = m.evaluate(pa, pb)?.value();
            let est = mc_estimate(pa, pb, trials, seed, max_rounds)?;
            let z = z_score(&est, model_value);
            match format {
                Format::Text => {
                    write!(out, "{}", est.to_text())?;
                    writeln!(out, "model: {}", m.name())?;
                    writeln!(out, "model_value: {model_value}")?;
                    match z {
                        Some(z) => writeln!(out, "z: {z}")?,
                        None => writeln!(out, "z: n/a")?,
                    }
                }
                Format::Json => json_line(
                    out,
                    &json!({
                        "a": est.a, "b": est.b, "trials": est.trials, "wins": est.wins,
                        "estimate": est.estimate, "std_error": est.std_error, "seed": est.seed,
                        "ties_resampled_total": est.ties_resampled_total,
                        "model": m.name(), "model_value": model_value, "z": z,
                    }),
                )?,
            }
        }
        Command::Check {
            model,
            list,
            mesh,
            tol,
            format,
        } => {
            let report = match list {
                ConditionList::GeneratorSelfcheck => {
                    let ModelSpec::Generator(id) = model else {
                        return Err(Error::Param(format!(
                            "generator-selfcheck needs a generator model, got {model}"
                        ))
                        .into());
                    };
                    generator_selfcheck(&builtin_generator(id)?, mesh, tol)?
                }
                _ => check_conditions(&model.build()?, list, mesh, tol)?,
            };
            match format {
                Format::Text => write!(out, "{}", report.to_text())?,
                Format::Json => {
                    json_line(out, &serde_json::to_value(&report).expect("serializable"))?
                }
            }
            if !report.passed() {
                return Ok(EXIT_VIOLATIONS);
            }
        }
        Command::Identities { cells, format } => {
            let report = algebraic_identity_checks(cells)?;
            match format {
                Format::Text => write!(out, "{}", report.to_text())?,
                Format::Json => {
                    json_line(out, &serde_json::to_value(&report).expect("serializable"))?
                }
            }
            if !report.passed() {
                return Ok(EXIT_VIOLATIONS);
            }
        }
    }
    Ok(EXIT_OK)
}

fn report_written(out: &mut dyn Write, s: &CurveSamples, p: &Path) -> std::io::Result<()> {
    writeln!(
        out,
        "wrote {} points of level {} on [{}, {}] to {}",
        s.points.len(),
        s.level_c,
        CURVE_MARGIN,
        1.0 - CURVE_MARGIN,
        p.display()
    )
}
