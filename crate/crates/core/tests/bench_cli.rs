use std::path::Path;
use std::process::Command;

use nltgcr::bench::main_with_args;
use nltgcr::ConvergenceTrace;

const CONFIG: &str = r#"
seed = 11
tol = 1e-8

[run.small_bratu]
problem = "bratu"
grid_n = 12
x0 = 1.0
solvers = ["nltgcr-adaptive", "nltgcr-nonlinear", "aa", "lbfgs"]
scaled = true

[run.cluster]
problem = "lennard-jones"
cells = 2
solvers = ["nltgcr", "newton-krylov"]
m = 10
"#;

fn write_config(dir: &Path) -> std::path::PathBuf {
    let p = dir.join("bench.toml");
    std::fs::write(&p, CONFIG).unwrap();
    p
}

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = main_with_args(std::iter::once("bench").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

/// Everything except the timing column.
fn strip_wallclock(text: &str) -> String {
    text.lines()
        .map(|l| l.rsplit_once(',').map_or(l, |(head, _)| head))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn run_writes_traces_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path());
    let out = dir.path().join("out");
    let (code, stdout, err) = run(&["run", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert!(stdout.contains("summary.csv"));

    let summary = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    let mut lines = summary.lines();
    assert_eq!(lines.next().unwrap(), "solver,problem,fevals_to_tol,final_resnorm,wallclock_s");
    assert_eq!(lines.count(), 6);

    let trace_file = out.join("small_bratu__nltgcr-adaptive__rep0.csv");
    let trace = ConvergenceTrace::read_csv(std::fs::File::open(&trace_file).unwrap()).unwrap();
    assert!(trace.final_resnorm().unwrap() <= 1e-8);
}

#[test]
fn runs_are_reproducible_apart_from_timing() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path());
    let outs: Vec<_> = ["a", "b"].iter().map(|s| dir.path().join(s)).collect();
    for o in &outs {
        let (code, _, err) = run(&["run", cfg.to_str().unwrap(), "--out", o.to_str().unwrap(), "--seed", "5"]);
        assert_eq!(code, 0, "{err}");
    }
    let mut names: Vec<_> = std::fs::read_dir(&outs[0]).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 7);
    for name in names {
        let a = std::fs::read_to_string(outs[0].join(&name)).unwrap();
        let b = std::fs::read_to_string(outs[1].join(&name)).unwrap();
        assert_eq!(strip_wallclock(&a), strip_wallclock(&b), "{name:?}");
    }
}

#[test]
fn tol_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path());
    let out = dir.path().join("out");
    let (code, _, _) = run(&["run", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--tol", "1e-3"]);
    assert_eq!(code, 0);
    let trace_file = out.join("small_bratu__nltgcr-nonlinear__rep0.csv");
    let trace = ConvergenceTrace::read_csv(std::fs::File::open(trace_file).unwrap()).unwrap();
    let last = trace.final_resnorm().unwrap();
    assert!(last <= 1e-3 && last > 1e-8, "{last}");
}

#[test]
fn compare_reads_traces_from_a_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path());
    let out = dir.path().join("out");
    assert_eq!(run(&["run", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]).0, 0);
    let a = out.join("small_bratu__nltgcr-adaptive__rep0.csv");
    let b = out.join("small_bratu__aa__rep0.csv");
    let (code, stdout, _) = run(&["compare", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(code, 0);
    let mut lines = stdout.lines();
    assert!(lines.next().unwrap().starts_with("trace,fevals_to_1e-4"));
    assert_eq!(lines.count(), 2);
}

#[test]
fn binary_reports_usage_errors() {
    let bin = env!("CARGO_BIN_EXE_bench");
    let status = Command::new(bin).arg("compare").output().unwrap();
    assert_eq!(status.status.code(), Some(2));
    let help = Command::new(bin).arg("--help").output().unwrap();
    assert!(help.status.success());
    assert!(String::from_utf8_lossy(&help.stdout).contains("run"));
    let missing = Command::new(bin).args(["run", "/nonexistent/config.toml"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(2));
}
