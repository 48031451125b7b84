//! `orthosplines`: build, verify and probe orthonormal spline systems.
//!
//! Exit codes: 0 success, 1 a verification assertion failed, 2 bad usage or
//! unreadable input.

mod config;
mod report;
mod suites;

use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use orthosplines::analysis::{uncond_experiment_on, CoefficientMode};
use orthosplines::bspline::GramSystem;
use orthosplines::charint::census_sweep;
use orthosplines::gram::decay_profile;
use orthosplines::knots::{partition_at, random_admissible, KnotFile};
use orthosplines::{KnotSequence, OrthoSystem};
use serde_json::json;

use config::{Cli, Command, Flags, RunConfig, DEFAULT_EXPONENTS, DEFAULT_LEVEL, DEFAULT_ORDER};
use report::{emit, sha256_hex, to_json, Envelope};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] orthosplines::Error),
    #[error("verification failed in suite {0}")]
    Failed(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            _ => 2,
        }
    }
}

const THREADS_VAR: &str = "ORTHOSPLINES_THREADS";

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(e.code());
    }
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = v.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Usage(format!(
            "{THREADS_VAR} must be a positive integer, got {v:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

/// The knot sequence a run works on, with the hash of its canonical JSON.
struct Input {
    seq: KnotSequence,
    hash: String,
}

fn load_input(flags: &Flags, n: Option<usize>) -> Result<Input, CliError> {
    let seq = match &flags.points {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            let seq: KnotSequence = serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            if let Some(k) = flags.k {
                if k != seq.order() {
                    return Err(CliError::Usage(format!(
                        "--k {k} disagrees with k = {} in {}",
                        seq.order(),
                        path.display()
                    )));
                }
            }
            seq
        }
        None => {
            let k = flags.k.unwrap_or(DEFAULT_ORDER);
            if k == 0 {
                return Err(CliError::Usage("--k must be at least 1".into()));
            }
            let n = n.unwrap_or(DEFAULT_LEVEL);
            random_admissible(flags.seed, k, n + 1, flags.law)
        }
    };
    let canonical = serde_json::to_string(&KnotFile::from(seq.clone()))
        .map_err(|e| CliError::Io(e.to_string()))?;
    Ok(Input {
        hash: sha256_hex(canonical.as_bytes()),
        seq,
    })
}

fn resolve(command: &Command, input: &Input) -> Result<RunConfig, CliError> {
    let f = command.flags();
    let n = f.n.unwrap_or(if f.points.is_some() {
        input.seq.max_level()
    } else {
        DEFAULT_LEVEL
    });
    if n < 1 || n > input.seq.max_level() {
        return Err(CliError::Usage(format!(
            "--n {n} outside the available levels 1..={}",
            input.seq.max_level()
        )));
    }
    if !(0.0..=0.5).contains(&f.beta) {
        return Err(CliError::Usage(format!(
            "--beta {} must lie in [0, 1/2]",
            f.beta
        )));
    }
    if f.grid == 0 {
        return Err(CliError::Usage("--grid must be positive".into()));
    }
    let default_trials = match command {
        Command::Experiment(_) => 100,
        _ => 1,
    };
    let trials = f.trials.unwrap_or(default_trials);
    if trials == 0 {
        return Err(CliError::Usage("--trials must be positive".into()));
    }
    let p = match command {
        Command::Experiment(_) if f.p.is_empty() => DEFAULT_EXPONENTS.to_vec(),
        _ => f.p.clone(),
    };
    if let Some(bad) = p.iter().find(|&&p| p.is_nan() || p < 1.0) {
        return Err(CliError::Usage(format!("--p {bad} must be at least 1")));
    }
    if matches!(command, Command::Experiment(_)) {
        if let Some(bad) = p.iter().find(|&&p| p == 1.0 || p.is_infinite()) {
            return Err(CliError::Usage(format!(
                "experiment needs 1 < p < inf, got {bad}"
            )));
        }
    }
    Ok(RunConfig {
        command: command.name().into(),
        k: input.seq.order(),
        n,
        p,
        seed: f.seed,
        trials,
        grid: f.grid,
        beta: f.beta,
        law: f.law,
        points: f.points.as_ref().map(|p| p.display().to_string()),
        out: f.out.as_ref().map(|p| p.display().to_string()),
        tol_ortho: f.tol_ortho,
        tol_recon: f.tol_recon,
    })
}

fn wrap<T: serde::Serialize>(
    body: T,
    config: &RunConfig,
    input: &Input,
) -> Result<String, CliError> {
    to_json(&Envelope {
        body,
        config: config.clone(),
        input_hash: input.hash.clone(),
    })
}

fn run(command: &Command) -> Result<(), CliError> {
    let flags = command.flags();
    let input = load_input(flags, flags.n)?;
    let cfg = resolve(command, &input)?;
    let out = flags.out.as_deref();
    match command {
        Command::Gen(_) => {
            // Extra envelope fields are ignored when the file is read back.
            let prefix = input.seq.prefix(cfg.n)?;
            emit(out, &wrap(KnotFile::from(prefix), &cfg, &input)?)
        }
        Command::Build(_) => {
            let system = OrthoSystem::build(&input.seq, cfg.n)?;
            eprintln!(
                "built {} functions of order {} at level {}",
                system.len(),
                cfg.k,
                cfg.n
            );
            emit(
                out,
                &wrap(json!({ "system": system.export() }), &cfg, &input)?,
            )
        }
        Command::Verify(_) => verify(&input, &cfg, out),
        Command::Census(_) => {
            let system = OrthoSystem::build(&input.seq, cfg.n)?;
            let r = census_sweep(&system, cfg.beta)?;
            eprintln!(
                "max census {} on [{}, {}]",
                r.max_count, r.argmax_window[0], r.argmax_window[1]
            );
            emit(out, &wrap(r, &cfg, &input)?)
        }
        Command::Experiment(_) => {
            let system = OrthoSystem::build(&input.seq, cfg.n)?;
            let reports = uncond_experiment_on(
                &system,
                &cfg.p,
                cfg.trials,
                cfg.seed,
                CoefficientMode::Dense,
            )?;
            eprintln!(
                "{:>6} {:>10} {:>10} {:>10}",
                "p", "ratio_max", "ratio_q95", "sq_max"
            );
            for r in &reports {
                eprintln!(
                    "{:>6} {:>10.4} {:>10.4} {:>10.4}",
                    r.p, r.ratio_max, r.ratio_q95, r.sq_ratio_max
                );
            }
            emit(out, &wrap(json!({ "reports": reports }), &cfg, &input)?)
        }
        Command::Decay(_) => decay(flags, &input, &cfg, out),
    }
}

fn verify(input: &Input, cfg: &RunConfig, out: Option<&Path>) -> Result<(), CliError> {
    let results = suites::run_all(&input.seq, cfg)?;
    for r in &results {
        let tag = if !r.hard {
            "info"
        } else if r.pass {
            "pass"
        } else {
            "FAIL"
        };
        eprintln!("{tag:>4}  {}", r.name);
    }
    let first_fail = results.iter().find(|r| !r.pass).map(|r| r.name);
    let body = json!({ "pass": first_fail.is_none(), "suites": results });
    emit(out, &wrap(body, cfg, input)?)?;
    match first_fail {
        Some(name) => Err(CliError::Failed(name.into())),
        None => Ok(()),
    }
}

/// Decay profiles for `trials` sequences; the first is the input itself,
/// later ones are generated with seeds `seed + i`.
fn decay(
    flags: &Flags,
    input: &Input,
    cfg: &RunConfig,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let mut profiles = Vec::with_capacity(cfg.trials);
    for i in 0..cfg.trials {
        let seq = if i == 0 {
            input.seq.clone()
        } else {
            random_admissible(cfg.seed + i as u64, cfg.k, cfg.n + 1, flags.law)
        };
        let mut g = GramSystem::new(&partition_at(&seq, cfg.n)?)?;
        g.materialize_inverse()?;
        let d = decay_profile(&g)?;
        eprintln!("seq {i}: gamma = {:.4}, C = {:.4}", d.gamma_hat, d.c_hat);
        profiles.push(d);
    }
    let gamma_max = profiles.iter().map(|d| d.gamma_hat).fold(0.0, f64::max);
    emit(
        out,
        &wrap(
            json!({ "profiles": profiles, "gamma_max": gamma_max }),
            cfg,
            input,
        )?,
    )
}
