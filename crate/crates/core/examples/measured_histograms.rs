//! Evaluate the relations from measured histograms alone, with no model of
//! the state. The histograms here come from a simulated run and go through
//! the same JSON record a real acquisition would produce.
//!
//! cargo run --release --example measured_histograms

use coarse_ur::coarse::{BinGrid, DiscreteDist};
use coarse_ur::relations::report_from_dists;
use coarse_ur::sampling::simulate_run;
use coarse_ur::state::StateModel;

fn main() -> coarse_ur::Result<()> {
    let state = StateModel::squeezed_vacuum(0.3, 1.0)?;
    let x = simulate_run(&state.position(), BinGrid::centered(0.9)?, 200_000, 1)?;
    let p = simulate_run(&state.momentum()?, BinGrid::centered(1.5)?, 200_000, 2)?;

    let hist_x = DiscreteDist::from_json(&x.empirical.to_json()?)?;
    let hist_p = DiscreteDist::from_json(&p.empirical.to_json()?)?;
    let report = report_from_dists(&hist_x, &hist_p, 1.0, None)?;
    println!(
        "coarse HUR lhs {:.5} (bound {:.2})",
        report.coarse_hur.lhs, report.coarse_hur.bound
    );
    println!("naive product  {:.5}", report.false_violation.naive_lhs);
    println!(
        "coarse BBM     {:.5} ≥ {:.5}",
        report.coarse_bbm.lhs, report.coarse_bbm.bound
    );
    println!("all coarse relations hold: {}", report.theorems_hold());
    Ok(())
}
