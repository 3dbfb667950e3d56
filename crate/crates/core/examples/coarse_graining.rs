//! Bin a marginal, then compare the discrete and histogram moments.
//!
//! cargo run --example coarse_graining

use coarse_ur::coarse::{bin_probabilities, BinGrid};
use coarse_ur::numerics::DEFAULT_MASS_TOL;
use coarse_ur::state::StateModel;

fn main() -> coarse_ur::Result<()> {
    let state = StateModel::ground_state(1.0)?;
    let px = state.position();
    println!("exact: var {:.8}  h {:.8}", px.variance()?, px.entropy()?);
    println!(
        "{:>6} {:>6} {:>12} {:>12} {:>12} {:>12} {:>6}",
        "width", "offset", "disc var", "coarse var", "disc H", "coarse h", "bins"
    );
    for width in [0.1, 0.5, 1.0, 2.0, 5.0] {
        for offset in [0.0, 0.5 * width] {
            let dist = bin_probabilities(&px, BinGrid::new(width, offset)?, DEFAULT_MASS_TOL)?;
            let w = dist.coarse_pdf();
            // variance() and entropy() cross-check the decomposition against direct integration.
            println!(
                "{width:>6} {offset:>6} {:>12.8} {:>12.8} {:>12.8} {:>12.8} {:>6}",
                dist.discrete_variance(),
                w.variance()?,
                dist.discrete_entropy(),
                w.entropy()?,
                dist.probs().len()
            );
        }
    }

    let dist = bin_probabilities(&px, BinGrid::centered(1.0)?, DEFAULT_MASS_TOL)?;
    println!("\nbin record at width 1:\n{}", dist.to_json()?);
    Ok(())
}
