//! Widen the bins until the naive discrete product breaks ħ²/4, while the
//! corrected relation keeps holding.
//!
//! cargo run --example false_violation

use coarse_ur::relations::find_false_violation;
use coarse_ur::state::StateModel;

fn main() -> coarse_ur::Result<()> {
    for (name, state) in [
        ("ground state", StateModel::ground_state(1.0)?),
        ("squeezed, σₓ = 0.2", StateModel::squeezed_vacuum(0.2, 1.0)?),
        ("mixed, σₓσₚ = 2ħ", StateModel::gaussian(1.0, 2.0, 0.0, 0.0, 1.0)?),
    ] {
        let w = find_false_violation(&state)?;
        println!("{name}:");
        println!("  a = {:.4}  Δ = {:.4}  δ = {:.4}", w.a, w.delta_x, w.delta_p);
        println!("  σ²_xΔ σ²_pδ = {:.5} < {:.2}", w.naive_product, w.bound);
        println!(
            "  (σ²_xΔ + Δ²/12)(σ²_pδ + δ²/12) = {:.5} ≥ {:.2}: {}",
            w.coarse_hur.lhs, w.coarse_hur.bound, w.coarse_hur.satisfied
        );
    }
    Ok(())
}
