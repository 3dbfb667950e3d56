//! Sweep Δ = aσₓ, δ = aσₚ for a minimum-uncertainty state and print the
//! coarse, trivial and naive products in units of ħ²/4.
//!
//! cargo run --example width_sweep

use coarse_ur::experiments::{sweep, trivial_crossing, SweepSpec};
use coarse_ur::state::StateModel;

fn main() -> coarse_ur::Result<()> {
    let state = StateModel::squeezed_vacuum(0.4, 1.0)?;
    let spec = SweepSpec::geometric(state.clone(), 0.05, 10.0, 24, 6.0)?;
    println!(
        "{:>8} {:>10} {:>10} {:>10} {:>6}",
        "a", "coarse", "trivial", "naive", "bins"
    );
    for r in sweep(&spec)? {
        println!(
            "{:>8.4} {:>10.5} {:>10.5} {:>10.5} {:>6}",
            r.a, r.coarse_product_ratio, r.trivial_term_ratio, r.discrete_product_ratio, r.n_bins
        );
    }
    println!("trivial term reaches 1 at a = {:.9}", trivial_crossing(&state)?);
    Ok(())
}
