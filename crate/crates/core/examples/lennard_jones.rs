//! Relaxing a perturbed 108-atom FCC Lennard-Jones cluster with nlTGCR(10),
//! stepping the solver by hand to follow the energy.

use ::nltgcr::problems::LennardJonesProblem;
use ::nltgcr::{NltgcrState, SolverOptions, StepStatus};

fn main() -> ::nltgcr::Result<()> {
    let seed = std::env::args().nth(1).map_or(7, |s| s.parse().expect("seed"));
    let lj = LennardJonesProblem {
        rng_seed: seed,
        ..Default::default()
    };
    let opts = SolverOptions {
        window_m: 10,
        restart_every: None,
        ..Default::default()
    };
    let mut state = NltgcrState::new(&lj, &lj.initial_positions(), &opts)?;
    println!("{} atoms, seed {seed}, E0 = {:.4}", lj.atoms(), lj.energy(&state.x)?);
    while state.iter < opts.max_iters {
        let status = state.step(&lj, &opts)?;
        if state.iter % 10 == 0 || status == StepStatus::Converged {
            let g = lj.gradient(&state.x)?;
            println!(
                "iter {:>4}  fevals {:>4}  E {:>12.6}  ‖∇E‖∞ {:.2e}",
                state.iter,
                state.fevals,
                lj.energy(&state.x)?,
                g.amax()
            );
        }
        if status == StepStatus::Converged {
            break;
        }
    }
    Ok(())
}
