//! Command-line front end behind the `genconc` binary.
//!
//! A directory argument runs every `*.json` file in it, in parallel, and
//! reports in file-name order. Exit status follows [`Error::exit_code`];
//! a failed healthcheck exits 5.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{witness_bound, witness_dense, BoundReport};
use crate::concurrence::{concurrence_with, Method, COHERENCE_TOL};
use crate::error::{Error, Result};
use crate::io::{self, Input};
use crate::projector::{
    run_healthchecks, ProjectorSpec, ProjectorTag, DEFAULT_DENSE_CAP, HEALTH_GRID, HEALTH_TOL,
};
use crate::report::{
    to_csv, BoundSummary, ConcurrenceReport, CsvRecord, RoofReport, SchmidtReport, Sourced,
};
use crate::roof::{convex_roof_upper, RoofOptions};
use crate::state::{MixedState, PureState};
use crate::tensor::{ParticleKind, SystemShape};

#[derive(Debug, Parser)]
#[command(
    name = "genconc",
    version,
    about = "Generalized concurrence of multi-particle states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Emit one flat CSV row per input instead of JSON.
    #[arg(long)]
    pub csv: bool,
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Concurrence of a pure state file.
    Concurrence {
        /// State file or directory of state files.
        input: PathBuf,
        /// Reinterpret the input as this kind; symmetry is re-checked.
        #[arg(long)]
        kind: Option<ParticleKind>,
        /// Coherence tolerance on the concurrence.
        #[arg(long, default_value_t = COHERENCE_TOL)]
        tol: f64,
        /// purity, two-copy or dense; defaults per kind.
        #[arg(long)]
        method: Option<Method>,
        #[arg(long, default_value_t = DEFAULT_DENSE_CAP)]
        dense_cap: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Two-copy witness lower bound of a density (or state) file.
    Bound {
        input: PathBuf,
        #[arg(long)]
        kind: Option<ParticleKind>,
        /// purity or dense.
        #[arg(long, default_value_t = Method::Purity)]
        method: Method,
        #[arg(long, default_value_t = DEFAULT_DENSE_CAP)]
        dense_cap: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Convex-roof upper estimate of a density (or state) file.
    Roof {
        input: PathBuf,
        #[arg(long)]
        kind: Option<ParticleKind>,
        /// JSON file with any of ensemble_size, restarts, max_iters, tol, seed;
        /// flags override it.
        #[arg(long)]
        options: Option<PathBuf>,
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long)]
        max_iters: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        ensemble_size: Option<usize>,
        /// Defaults to 0.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Dense projector checks over a grid of (L, N).
    Healthcheck {
        /// Restrict to one kind's projector.
        #[arg(long)]
        kind: Option<ParticleKind>,
        #[arg(long = "L", value_name = "L")]
        particles: Option<usize>,
        #[arg(long = "N", value_name = "N")]
        modes: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_DENSE_CAP)]
        dense_cap: usize,
        /// Largest acceptable defect.
        #[arg(long, default_value_t = HEALTH_TOL)]
        tol: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Random state file, or density file with --rank.
    Random {
        #[arg(long)]
        kind: ParticleKind,
        #[arg(long = "L", value_name = "L")]
        particles: usize,
        #[arg(long = "N", value_name = "N")]
        modes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Schmidt coefficients of a pure state across one site.
    Schmidt {
        input: PathBuf,
        /// 1-based site.
        #[arg(long, default_value_t = 1)]
        site: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
}

/// Parses `args` (program name first), runs, and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("genconc: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Concurrence {
            input,
            kind,
            tol,
            method,
            dense_cap,
            out,
        } => batch(&input, &out, |path| {
            let psi = with_kind_pure(expect_state(io::read_input(path)?)?, kind)?;
            let method = method.unwrap_or(crate::concurrence::concurrence_pure(&psi)?.method);
            let result = concurrence_with(&psi, method, dense_cap)?;
            ConcurrenceReport::new(&psi, result, tol)
        }),
        Command::Bound {
            input,
            kind,
            method,
            dense_cap,
            out,
        } => batch(&input, &out, |path| {
            let rho = with_kind_mixed(io::read_input(path)?.into_mixed(), kind)?;
            let report = match method {
                Method::Purity => witness_bound(&rho)?,
                Method::Dense => dense_bound(&rho, dense_cap)?,
                Method::TwoCopy => {
                    return Err(Error::Validation("bound supports purity or dense".into()))
                }
            };
            Ok(BoundSummary::new(&rho, report))
        }),
        Command::Roof {
            input,
            kind,
            options,
            restarts,
            max_iters,
            tol,
            ensemble_size,
            seed,
            out,
        } => {
            let mut opts = match options {
                Some(p) => serde_json::from_str::<RoofOptions>(&fs::read_to_string(p)?)?,
                None => RoofOptions::default(),
            };
            opts.restarts = restarts.unwrap_or(opts.restarts);
            opts.max_iters = max_iters.unwrap_or(opts.max_iters);
            opts.tol = tol.unwrap_or(opts.tol);
            opts.ensemble_size = ensemble_size.or(opts.ensemble_size);
            opts.seed = seed.unwrap_or(opts.seed);
            batch(&input, &out, |path| {
                let rho = with_kind_mixed(io::read_input(path)?.into_mixed(), kind)?;
                Ok(RoofReport::new(&rho, convex_roof_upper(&rho, &opts)?))
            })
        }
        Command::Healthcheck {
            kind,
            particles,
            modes,
            dense_cap,
            tol,
            out,
        } => healthcheck(kind, particles, modes, dense_cap, tol, &out),
        Command::Random {
            kind,
            particles,
            modes,
            seed,
            rank,
            output,
        } => {
            let shape = SystemShape::new(kind, particles, modes)?;
            let text = match rank {
                Some(r) => io::density_to_json(&MixedState::random(shape, r, seed)?)?,
                None => io::state_to_json(&PureState::random(shape, seed)?)?,
            };
            emit_text(&(text + "\n"), output.as_deref())?;
            Ok(0)
        }
        Command::Schmidt { input, site, out } => batch(&input, &out, |path| {
            SchmidtReport::new(&expect_state(io::read_input(path)?)?, site)
        }),
    }
}

fn expect_state(input: Input) -> Result<PureState> {
    match input {
        Input::State(psi) => Ok(psi),
        Input::Density(_) => Err(Error::Validation(
            "expected a state file, got a density file".into(),
        )),
    }
}

fn with_kind_pure(psi: PureState, kind: Option<ParticleKind>) -> Result<PureState> {
    match kind {
        Some(k) if k != psi.kind() => psi.as_kind(k),
        _ => Ok(psi),
    }
}

fn with_kind_mixed(rho: MixedState, kind: Option<ParticleKind>) -> Result<MixedState> {
    match kind {
        Some(k) if k != rho.kind() => {
            MixedState::new(rho.shape().with_kind(k)?, rho.matrix().clone())
        }
        _ => Ok(rho),
    }
}

fn dense_bound(rho: &MixedState, cap: usize) -> Result<BoundReport> {
    let witness = witness_dense(rho, cap)?;
    let mut report = witness_bound(rho)?;
    report.witness = witness;
    report.detected = witness > 0.0;
    report.lower_bound = match rho.kind() {
        ParticleKind::Fermion => crate::bounds::fermionic_root(witness, rho.shape().alpha()),
        _ => witness.max(0.0).sqrt(),
    };
    Ok(report)
}

/// `*.json` files of a directory in name order, or the path itself.
fn collect_inputs(input: &Path) -> Result<(Vec<PathBuf>, bool)> {
    if !input.is_dir() {
        return Ok((vec![input.to_path_buf()], false));
    }
    let mut files: Vec<PathBuf> = fs::read_dir(input)?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<Vec<_>>>()?
        .into_iter()
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e == "json"))
        .collect();
    files.sort();
    Ok((files, true))
}

#[derive(Serialize)]
struct Failure {
    source: String,
    error: String,
    exit_code: i32,
}

/// Runs `f` on every input. A failing input in a batch is reported in
/// place; the exit status is that of the first failure.
fn batch<T, F>(input: &Path, out: &OutputArgs, f: F) -> Result<i32>
where
    T: Serialize + CsvRecord + Sourced + Send,
    F: Fn(&Path) -> Result<T> + Sync,
{
    let (files, is_batch) = collect_inputs(input)?;
    if !is_batch {
        let report = f(&files[0])?;
        let text = if out.csv {
            to_csv(&[report])?
        } else {
            serde_json::to_string_pretty(&report)? + "\n"
        };
        emit_text(&text, out.output.as_deref())?;
        return Ok(0);
    }
    let results: Vec<(String, Result<T>)> = files
        .par_iter()
        .map(|p| (p.display().to_string(), f(p)))
        .collect();
    let mut code = 0;
    let mut ok = Vec::new();
    let mut entries = Vec::new();
    for (source, r) in results {
        match r {
            Ok(mut report) => {
                report.set_source(source);
                entries.push(serde_json::to_value(&report)?);
                ok.push(report);
            }
            Err(e) => {
                eprintln!("genconc: {source}: {e}");
                if code == 0 {
                    code = e.exit_code();
                }
                entries.push(serde_json::to_value(Failure {
                    source,
                    error: e.to_string(),
                    exit_code: e.exit_code(),
                })?);
            }
        }
    }
    let text = if out.csv {
        to_csv(&ok)?
    } else {
        serde_json::to_string_pretty(&entries)? + "\n"
    };
    emit_text(&text, out.output.as_deref())?;
    Ok(code)
}

fn healthcheck(
    kind: Option<ParticleKind>,
    particles: Option<usize>,
    modes: Option<usize>,
    cap: usize,
    tol: f64,
    out: &OutputArgs,
) -> Result<i32> {
    let points: Vec<(usize, usize)> = match (particles, modes) {
        (Some(l), Some(n)) => vec![(l, n)],
        _ => HEALTH_GRID
            .iter()
            .copied()
            .filter(|&(l, n)| particles.is_none_or(|x| x == l) && modes.is_none_or(|x| x == n))
            .collect(),
    };
    let explicit = particles.is_some() && modes.is_some() && kind.is_some();
    let mut specs = Vec::new();
    for (l, n) in points {
        for (k, tag) in [
            (ParticleKind::Distinguishable, ProjectorTag::Pd),
            (ParticleKind::Boson, ProjectorTag::Pb),
            (ParticleKind::Fermion, ProjectorTag::Pf),
        ] {
            if kind.is_some_and(|want| want != k) {
                continue;
            }
            match SystemShape::new(k, l, n) {
                Ok(shape) => specs.push(ProjectorSpec::new(tag, shape)?),
                Err(e) if explicit => return Err(e),
                Err(_) => {}
            }
        }
    }
    if specs.is_empty() {
        return Err(Error::Validation(
            "no applicable (kind, L, N) in the requested grid".into(),
        ));
    }
    let mut reports = run_healthchecks(&specs, cap)?;
    for r in &mut reports {
        r.passed = r.max_defect() <= tol;
    }
    let text = if out.csv {
        to_csv(&reports)?
    } else {
        serde_json::to_string_pretty(&reports)? + "\n"
    };
    emit_text(&text, out.output.as_deref())?;
    for r in reports.iter().filter(|r| !r.passed) {
        eprintln!(
            "genconc: {:?} at L={}, N={} exceeds tolerance {tol:.1e} (max defect {:.3e})",
            r.tag,
            r.particles,
            r.modes,
            r.max_defect()
        );
    }
    Ok(if reports.iter().all(|r| r.passed) {
        0
    } else {
        5
    })
}

fn emit_text(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(p) => io::write_atomic(p, text.as_bytes()),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}
