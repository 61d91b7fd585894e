//! The bench harness as a library: runs `examples/bench.toml` into a
//! directory (default `bench_out`) and prints the comparison table, the
//! same as `bench run` followed by `bench compare`.

use std::path::PathBuf;

use ::nltgcr::bench::{compare_paths, run_config, write_compare, BenchConfig, Overrides};

fn main() -> ::nltgcr::Result<()> {
    let config = BenchConfig::load(&PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/bench.toml"))?;
    let out = std::env::args().nth(1).map_or_else(|| PathBuf::from("bench_out"), PathBuf::from);
    let outcomes = run_config(&config, &out, Overrides::default(), &mut std::io::stderr())?;
    let traces: Vec<PathBuf> = std::fs::read_dir(&out)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.file_name().is_some_and(|n| n != "summary.csv"))
        .collect();
    println!("{} runs, summary in {}", outcomes.len(), out.join("summary.csv").display());
    write_compare(&compare_paths(&traces)?, std::io::stdout())
}
