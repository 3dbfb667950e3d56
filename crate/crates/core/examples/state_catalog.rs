//! Marginal moments and entropies for each kind of state.
//!
//! cargo run --example state_catalog

use coarse_ur::relations::{bbm_bound, hur_bound};
use coarse_ur::state::{StateModel, StateSpec};

fn main() -> coarse_ur::Result<()> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/states");
    for name in ["ground", "squeezed", "thermal", "truncated", "cat"] {
        let state = StateSpec::load(format!("{dir}/{name}.json"))?.build()?;
        report(name, &state)?;
    }
    report("inline squeezed vacuum", &StateModel::squeezed_vacuum(0.1, 1.0)?)
}

fn report(name: &str, state: &StateModel) -> coarse_ur::Result<()> {
    let px = state.position();
    println!("{name} ({})", state.kind().name());
    println!(
        "  x: mean {:+.4}  var {:.6}  h {:.6}",
        px.mean(),
        px.variance()?,
        px.entropy()?
    );
    match state.momentum() {
        Ok(pp) => {
            println!(
                "  p: mean {:+.4}  var {:.6}  h {:.6}",
                pp.mean(),
                pp.variance()?,
                pp.entropy()?
            );
            let product = px.variance()? * pp.variance()?;
            let entropy = px.entropy()? + pp.entropy()?;
            println!(
                "  var product / (ħ²/4) = {:.6}, h sum − ln(πeħ) = {:.3e}",
                product / hur_bound(state.hbar()),
                entropy - bbm_bound(state.hbar())
            );
        }
        Err(e) => println!("  p: {e}"),
    }
    Ok(())
}
