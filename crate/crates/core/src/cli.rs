//! The `detvar` command line.
//!
//! [`run`] takes the full argument list and returns what the process should
//! print and its exit code, so it can be driven in-process by tests.
//! Exit codes: 0 success, 2 parse or validation error, 3 covariance
//! disagreement or minor-structure violation.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariants::{
    check_covariance, member_va, schmidt_number, CovarianceOptions, LocalUnitary,
};
use crate::io::{parse_point, read_state, StateFile};
use crate::linalg::RankPolicy;
use crate::linearity::{linearity_diagnostic, LinearityOptions};
use crate::minors::{pencil_minor_polys, separable_minor_structure, MinorCaps, StructureReport};
use crate::pencil::PencilBlocks;
use crate::ppt::ppt_test;
use crate::random::task_rng;
use crate::slice::{slice_csv, slice_line, LineSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Schmidt,
    Membership,
    Covariance,
    Minors,
    Linearity,
    Ppt,
    Slice,
}

#[derive(Debug, Parser)]
#[command(
    name = "detvar",
    version,
    about = "Determinantal-variety invariants of bipartite states"
)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// State file (JSON).
    file: PathBuf,
    #[arg(long, default_value_t = 0)]
    k: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long = "rel-eps", default_value_t = 1e-10)]
    rel_eps: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Projective point, `{"coords": [[re, im], ...]}`, inline or as a path.
    #[arg(long)]
    point: Option<String>,
    /// Line `{"p": [...], "q": [...], "phi": x}`, inline or as a path.
    #[arg(long)]
    line: Option<String>,
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub samples: usize,
    pub rel_eps: f64,
    pub k: usize,
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<RankPolicy> {
        if self.samples == 0 {
            return Err(Error::InvalidConfig("samples must be at least 1".into()));
        }
        RankPolicy::new(self.rel_eps)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            stderr: String::new(),
            code: EXIT_OK,
        }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code: EXIT_INVALID,
                }
            } else {
                Outcome::ok(text)
            };
        }
    };
    match dispatch(&args) {
        Ok(out) => out,
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: EXIT_INVALID,
        },
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports always serialize");
    s.push('\n');
    s
}

/// Inline JSON if the argument looks like an object, else a file path.
fn inline_or_file(arg: &str) -> Result<String> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        Ok(std::fs::read_to_string(arg)?)
    }
}

fn write_out(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents)?;
    Ok(())
}

fn dispatch(args: &Args) -> Result<Outcome> {
    let cfg = RunConfig {
        seed: args.seed,
        samples: args.samples,
        rel_eps: args.rel_eps,
        k: args.k,
        output_path: args.out.clone(),
    };
    let policy = cfg.validate()?;
    let state = read_state(&args.file)?;
    match args.command {
        Command::Schmidt => cmd_schmidt(&state, &policy),
        Command::Membership => {
            let point = args
                .point
                .as_deref()
                .ok_or_else(|| Error::InvalidConfig("membership needs --point".into()))?;
            cmd_membership(&state, &inline_or_file(point)?, &cfg, &policy)
        }
        Command::Covariance => cmd_covariance(&state, &cfg, &policy),
        Command::Minors => cmd_minors(&state, &cfg, &policy),
        Command::Linearity => cmd_linearity(&state, &cfg, &policy),
        Command::Ppt => Ok(Outcome::ok(json(&ppt_test(&state.density()?)))),
        Command::Slice => {
            let line = args
                .line
                .as_deref()
                .ok_or_else(|| Error::InvalidConfig("slice needs --line".into()))?;
            let spec: LineSpec = serde_json::from_str(&inline_or_file(line)?)?;
            cmd_slice(&state, &spec, &cfg, &policy)
        }
    }
}

pub fn cmd_schmidt(state: &StateFile, policy: &RankPolicy) -> Result<Outcome> {
    let v = state.pure(policy)?;
    Ok(Outcome::ok(json(&schmidt_number(&v, policy))))
}

pub fn cmd_membership(
    state: &StateFile,
    point: &str,
    cfg: &RunConfig,
    policy: &RankPolicy,
) -> Result<Outcome> {
    let rho = state.density()?;
    let r = parse_point(point)?;
    Ok(Outcome::ok(json(&member_va(&rho, &r, cfg.k, policy)?)))
}

#[derive(Serialize)]
struct CovarianceOutput {
    k: usize,
    samples: usize,
    seed: u64,
    #[serde(flatten)]
    report: crate::invariants::CovarianceReport,
}

/// Draws `T` from the last stream of `seed`; samples use streams `0..`.
pub fn cmd_covariance(state: &StateFile, cfg: &RunConfig, policy: &RankPolicy) -> Result<Outcome> {
    let rho = state.density()?;
    let mut rng = task_rng(cfg.seed, u64::MAX);
    let t = LocalUnitary::haar(rho.dim_a(), rho.dim_b(), &mut rng);
    let opts = CovarianceOptions {
        samples: cfg.samples,
        seed: cfg.seed,
        ..CovarianceOptions::default()
    };
    let report = check_covariance(&rho, &t, cfg.k, &opts, policy)?;
    let mut out = Outcome::ok(json(&CovarianceOutput {
        k: cfg.k,
        samples: cfg.samples,
        seed: cfg.seed,
        report: report.clone(),
    }));
    if report.disagree > 0 {
        out.code = EXIT_VIOLATION;
        out.stderr = format!(
            "{} samples disagree outside the near-threshold band\n",
            report.disagree
        );
    }
    Ok(out)
}

#[derive(Serialize)]
struct MinorsOutput {
    k: usize,
    minors: usize,
    zero_omitted: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    out: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    structure: Option<StructureReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    polys: Option<Vec<crate::poly::MultiPoly>>,
}

fn structure_check(state: &StateFile, k: usize) -> Result<Option<StructureReport>> {
    match state {
        StateFile::Product(pe) => separable_minor_structure(pe, k, &MinorCaps::default()).map(Some),
        _ => Ok(None),
    }
}

fn flag_structure(out: &mut Outcome, structure: &Option<StructureReport>) {
    if let Some(s) = structure {
        if !s.holds() {
            out.code = EXIT_VIOLATION;
            out.stderr = format!(
                "{} minors violate the separable structure\n",
                s.violations.len()
            );
        }
    }
}

/// Nonzero minors in (row set, column set) order. The list goes to `--out`
/// when given, otherwise into the printed summary.
pub fn cmd_minors(state: &StateFile, cfg: &RunConfig, policy: &RankPolicy) -> Result<Outcome> {
    let e = state.ensemble(policy)?;
    let pb = PencilBlocks::from_ensemble(&e);
    let minors = pencil_minor_polys(&pb, cfg.k, &MinorCaps::default())?;
    let total = minors.len();
    let polys: Vec<_> = minors
        .into_iter()
        .map(|mi| mi.poly)
        .filter(|p| !p.is_zero())
        .collect();
    let structure = structure_check(state, cfg.k)?;
    let mut summary = MinorsOutput {
        k: cfg.k,
        minors: polys.len(),
        zero_omitted: total - polys.len(),
        out: None,
        structure,
        polys: None,
    };
    match &cfg.output_path {
        Some(path) => {
            write_out(path, &json(&polys))?;
            summary.out = Some(path.display().to_string());
        }
        None => summary.polys = Some(polys),
    }
    let mut out = Outcome::ok(json(&summary));
    flag_structure(&mut out, &summary.structure);
    Ok(out)
}

#[derive(Serialize)]
struct LinearityOutput {
    input: &'static str,
    #[serde(flatten)]
    report: crate::linearity::LinearityReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    structure: Option<StructureReport>,
}

/// `--samples` sets the number of witness-search trials.
pub fn cmd_linearity(state: &StateFile, cfg: &RunConfig, policy: &RankPolicy) -> Result<Outcome> {
    let rho = state.density()?;
    let e = state.ensemble(policy)?;
    let opts = LinearityOptions {
        trials: cfg.samples,
        seed: cfg.seed,
        policy: *policy,
        caps: MinorCaps::default(),
    };
    let report = linearity_diagnostic(&rho, &e, cfg.k, &opts)?;
    let structure = structure_check(state, cfg.k)?;
    let mut out = Outcome::ok(json(&LinearityOutput {
        input: state.kind(),
        report,
        structure: structure.clone(),
    }));
    flag_structure(&mut out, &structure);
    Ok(out)
}

pub fn cmd_slice(
    state: &StateFile,
    line: &LineSpec,
    cfg: &RunConfig,
    policy: &RankPolicy,
) -> Result<Outcome> {
    let rho = state.density()?;
    let csv = slice_csv(&slice_line(&rho, cfg.k, line, cfg.samples, policy)?);
    match &cfg.output_path {
        Some(path) => {
            write_out(path, &csv)?;
            Ok(Outcome::ok(String::new()))
        }
        None => Ok(Outcome::ok(csv)),
    }
}
