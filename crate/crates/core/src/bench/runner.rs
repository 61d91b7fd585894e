use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use super::config::{BenchConfig, RunConfig};
use crate::baselines::{
    aa_solve, broyden2_solve, lbfgs_solve, ncg_fr_solve, nesterov_solve, newton_krylov_solve, BaselineOptions,
    Forcing,
};
use crate::error::{Error, Result};
use crate::jacobian::JvProbe;
use crate::linesearch::LineSearchOptions;
use crate::nltgcr::nltgcr_solve;
use crate::options::{SolverOptions, Variant};
use crate::problem::{AffineProblem, NonlinearProblem};
use crate::problems::{make_linear_problem, BratuProblem, LennardJonesProblem, LinearKind, LogRegProblem};
use crate::solution::Solution;
use crate::trace::ConvergenceTrace;
use crate::vector::Vector;

pub const SOLVERS: &[&str] = &[
    "nltgcr",
    "nltgcr-nonlinear",
    "nltgcr-linearized",
    "nltgcr-adaptive",
    "aa",
    "newton-krylov",
    "broyden2",
    "nesterov",
    "ncg-fr",
    "lbfgs",
];

pub const PROBLEMS: &[&str] = &["bratu", "lennard-jones", "logreg", "linear"];

pub const SUMMARY_HEADER: [&str; 5] = ["solver", "problem", "fevals_to_tol", "final_resnorm", "wallclock_s"];

/// One (run, solver, repetition) result.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub run: String,
    pub solver: String,
    pub repetition: usize,
    pub trace: Option<ConvergenceTrace>,
    pub fevals_to_tol: Option<usize>,
    pub final_resnorm: f64,
    pub wallclock_s: f64,
    /// Set when the solver stopped with an error (divergence, breakdown...).
    pub error: Option<String>,
}

/// Command-line overrides applied on top of the file.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub tol: Option<f64>,
}

type DynProblem = Box<dyn NonlinearProblem + Send + Sync>;

pub fn build_problem(run: &RunConfig, seed: u64) -> Result<(DynProblem, Vector)> {
    let x0c = run.x0.unwrap_or(0.0);
    Ok(match run.problem.as_str() {
        "bratu" => {
            let mut p = BratuProblem::new(run.grid_n.unwrap_or(100), run.lambda.unwrap_or(0.5));
            if run.scaled.unwrap_or(false) {
                p = p.scaled();
            }
            let n = p.grid_n * p.grid_n;
            (Box::new(p), Vector::from_element(n, x0c))
        }
        "lennard-jones" => {
            let mut p = LennardJonesProblem {
                rng_seed: seed,
                ..Default::default()
            };
            if let Some(c) = run.cells {
                p.cells_per_side = c;
            }
            if let Some(s) = run.perturbation {
                p.perturbation_scale = s;
            }
            let x0 = p.initial_positions();
            (Box::new(p), x0)
        }
        "logreg" => {
            let lambda = run.lambda_reg.unwrap_or(1e-2);
            let p = match &run.data {
                Some(path) => LogRegProblem::from_csv_path(path, lambda)?,
                None => LogRegProblem::synthetic(run.samples.unwrap_or(2000), run.features.unwrap_or(500), lambda, seed),
            };
            let d = p.features.ncols();
            (Box::new(p), Vector::from_element(d, x0c))
        }
        "linear" => {
            let kind = match run.kind.as_deref().unwrap_or("spd") {
                "spd" => LinearKind::Spd,
                "nonsymmetric" => LinearKind::Nonsymmetric,
                "indefinite" => LinearKind::Indefinite,
                other => return Err(Error::Config(format!("unknown linear kind `{other}`"))),
            };
            let n = run.n.unwrap_or(100);
            let (a, b) = make_linear_problem(kind, n, seed);
            let p = AffineProblem::new(a.matrix().clone(), b).with_exact_jv();
            (Box::new(p), Vector::from_element(n, x0c))
        }
        other => {
            return Err(Error::Config(format!(
                "unknown problem `{other}` (expected one of {})",
                PROBLEMS.join(", ")
            )))
        }
    })
}

fn probe(run: &RunConfig) -> Result<JvProbe> {
    match run.jv.as_deref().unwrap_or("frechet") {
        "frechet" => Ok(JvProbe::default()),
        "exact" => Ok(JvProbe::exact()),
        other => Err(Error::Config(format!("unknown jv mode `{other}`"))),
    }
}

fn linesearch(run: &RunConfig) -> Option<LineSearchOptions> {
    run.linesearch.unwrap_or(true).then(LineSearchOptions::default)
}

pub fn nltgcr_options(run: &RunConfig, variant: Variant, tol: f64) -> Result<SolverOptions> {
    let defaults = SolverOptions::default();
    let probe = probe(run)?;
    Ok(SolverOptions {
        window_m: run.m.unwrap_or(1),
        tol_rel: tol,
        max_iters: run.max_iters.unwrap_or(defaults.max_iters),
        restart_every: match run.restart_every {
            Some(0) => None,
            Some(k) => Some(k),
            None => defaults.restart_every,
        },
        variant,
        adaptive_threshold: run.adaptive_threshold.unwrap_or(defaults.adaptive_threshold),
        linesearch: linesearch(run),
        frechet_eps_scale: probe.eps_scale,
        jv_mode: probe.mode,
        ..defaults
    })
}

pub fn baseline_options(run: &RunConfig, tol: f64) -> Result<BaselineOptions> {
    let defaults = BaselineOptions::default();
    Ok(BaselineOptions {
        tol_rel: tol,
        max_iters: run.max_iters.unwrap_or(defaults.max_iters),
        linesearch: linesearch(run),
        probe: probe(run)?,
        ..defaults
    })
}

fn strip<R>(s: Solution<R>) -> ConvergenceTrace {
    s.trace
}

/// Runs one solver. The outer error is a configuration problem; the inner
/// one is the solver's own failure, which is a result.
pub fn solve(
    solver: &str,
    run: &RunConfig,
    prob: &(dyn NonlinearProblem + Send + Sync),
    x0: &Vector,
    tol: f64,
) -> Result<Result<ConvergenceTrace>> {
    let variant = match solver {
        "nltgcr" => Some(SolverOptions::default().variant),
        "nltgcr-nonlinear" => Some(Variant::Nonlinear),
        "nltgcr-linearized" => Some(Variant::Linearized),
        "nltgcr-adaptive" => Some(Variant::Adaptive),
        _ => None,
    };
    if let Some(variant) = variant {
        let opts = nltgcr_options(run, variant, tol)?;
        return Ok(nltgcr_solve(prob, x0, &opts).map(strip));
    }
    let opts = baseline_options(run, tol)?;
    Ok(match solver {
        "aa" => aa_solve(prob, x0, run.m.unwrap_or(10), run.beta.unwrap_or(0.1), &opts).map(strip),
        "newton-krylov" => {
            let eta0 = run.eta0.unwrap_or(0.9);
            let forcing = match run.forcing.as_deref().unwrap_or("ew") {
                "ew" => Forcing::EisenstatWalker { eta0 },
                "fixed" => Forcing::Fixed(eta0),
                other => return Err(Error::Config(format!("unknown forcing `{other}`"))),
            };
            newton_krylov_solve(prob, x0, run.inner_m.unwrap_or(50), forcing, &opts).map(strip)
        }
        "broyden2" => broyden2_solve(prob, x0, run.beta.unwrap_or(0.1), &opts).map(strip),
        "nesterov" => nesterov_solve(prob, x0, &opts).map(strip),
        "ncg-fr" => ncg_fr_solve(prob, x0, &opts).map(strip),
        "lbfgs" => lbfgs_solve(prob, x0, run.m.unwrap_or(10), &opts).map(strip),
        other => {
            return Err(Error::Config(format!(
                "unknown solver `{other}` (expected one of {})",
                SOLVERS.join(", ")
            )))
        }
    })
}

/// Checks names and solver lists before anything runs.
pub fn validate(config: &BenchConfig) -> Result<()> {
    if config.run.is_empty() {
        return Err(Error::Config("no [run.<name>] sections".into()));
    }
    for (name, run) in &config.run {
        if !PROBLEMS.contains(&run.problem.as_str()) {
            return Err(Error::Config(format!("run `{name}`: unknown problem `{}`", run.problem)));
        }
        if run.solvers.is_empty() {
            return Err(Error::Config(format!("run `{name}`: empty solver list")));
        }
        for s in &run.solvers {
            if !SOLVERS.contains(&s.as_str()) {
                return Err(Error::Config(format!("run `{name}`: unknown solver `{s}`")));
            }
        }
        if run.repetitions == Some(0) {
            return Err(Error::Config(format!("run `{name}`: repetitions must be positive")));
        }
    }
    Ok(())
}

pub fn trace_file_name(run: &str, solver: &str, repetition: usize) -> String {
    format!("{run}__{solver}__rep{repetition}.csv")
}

/// Runs every section and writes traces plus `summary.csv` into `out`.
pub fn run_config(config: &BenchConfig, out: &Path, ov: Overrides, log: &mut dyn Write) -> Result<Vec<Outcome>> {
    validate(config)?;
    fs::create_dir_all(out)?;
    let mut outcomes = Vec::new();
    for (name, run) in &config.run {
        let base_seed = ov.seed.or(run.seed).or(config.seed).unwrap_or(7);
        let tol = ov.tol.or(run.tol).or(config.tol).unwrap_or(1e-10);
        for rep in 0..run.repetitions.unwrap_or(1) {
            let (prob, x0) = build_problem(run, base_seed + rep as u64)?;
            for solver in &run.solvers {
                let started = Instant::now();
                let result = solve(solver, run, prob.as_ref(), &x0, tol)?;
                let wallclock_s = started.elapsed().as_secs_f64();
                let outcome = match result {
                    Ok(trace) => {
                        trace.write_csv(fs::File::create(out.join(trace_file_name(name, solver, rep)))?)?;
                        Outcome {
                            run: name.clone(),
                            solver: solver.clone(),
                            repetition: rep,
                            fevals_to_tol: trace.fevals_to(tol),
                            final_resnorm: trace.final_resnorm().unwrap_or(f64::NAN),
                            trace: Some(trace),
                            wallclock_s,
                            error: None,
                        }
                    }
                    Err(e) => {
                        let final_resnorm = match &e {
                            Error::Divergence { relres, .. } => *relres,
                            _ => f64::NAN,
                        };
                        writeln!(log, "{name}/{solver}: {e}")?;
                        Outcome {
                            run: name.clone(),
                            solver: solver.clone(),
                            repetition: rep,
                            trace: None,
                            fevals_to_tol: None,
                            final_resnorm,
                            wallclock_s,
                            error: Some(e.to_string()),
                        }
                    }
                };
                writeln!(
                    log,
                    "{name}/{solver} rep {rep}: fevals_to_tol={} final_resnorm={:.3e}",
                    outcome.fevals_to_tol.map_or("-".to_string(), |f| f.to_string()),
                    outcome.final_resnorm
                )?;
                outcomes.push(outcome);
            }
        }
    }
    write_summary(&outcomes, fs::File::create(out.join("summary.csv"))?)?;
    Ok(outcomes)
}

pub fn write_summary<W: Write>(outcomes: &[Outcome], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_HEADER)?;
    for o in outcomes {
        let problem = if o.repetition == 0 {
            o.run.clone()
        } else {
            format!("{}#{}", o.run, o.repetition)
        };
        w.write_record([
            o.solver.clone(),
            problem,
            o.fevals_to_tol.map_or(String::new(), |f| f.to_string()),
            format!("{:.16e}", o.final_resnorm),
            format!("{:.6}", o.wallclock_s),
        ])?;
    }
    w.flush()?;
    Ok(())
}
