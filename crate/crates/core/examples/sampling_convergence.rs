//! Simulated measurement runs: TV distance to the exact bin probabilities
//! as the shot count grows.
//!
//! cargo run --release --example sampling_convergence

use coarse_ur::coarse::BinGrid;
use coarse_ur::sampling::{convergence_study, log_log_slope, simulate_run};
use coarse_ur::state::StateModel;

fn main() -> coarse_ur::Result<()> {
    let state = StateModel::ground_state(1.0)?;
    let grid = BinGrid::centered(1.0)?;
    let schedule = [100, 1_000, 10_000, 100_000, 1_000_000];
    let study = convergence_study(&state.position(), grid, &schedule, 42)?;
    for (n, tv) in &study {
        println!("n = {n:>8}  TV = {tv:.3e}");
    }
    println!("log-log slope {:.3}", log_log_slope(&study).unwrap_or(f64::NAN));

    let run = simulate_run(&state.position(), grid, 1000, 1)?;
    println!("\none run of 1000 shots:");
    for (j, p) in run.empirical.probs().iter().filter(|(_, p)| **p > 0.0) {
        println!("  bin {j:+}: {p:.3} (exact {:.3})", run.theoretical.prob(*j));
    }
    Ok(())
}
