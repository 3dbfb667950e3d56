//! Full relation report for one state and a pair of grids.
//!
//! cargo run --example relation_report -- [state.json] [Δ] [δ]

use coarse_ur::coarse::BinGrid;
use coarse_ur::relations::full_report;
use coarse_ur::state::StateSpec;

fn main() -> coarse_ur::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let path = args
        .first()
        .cloned()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/states/squeezed.json").into());
    let dx: f64 = args.get(1).map_or(Ok(0.5), |s| s.parse()).expect("Δ must be a number");
    let dp: f64 = args.get(2).map_or(Ok(3.0), |s| s.parse()).expect("δ must be a number");

    let state = StateSpec::load(&path)?.build()?;
    let report = full_report(&state, BinGrid::new(dx, 0.0)?, BinGrid::new(dp, 0.0)?)?;

    let c = &report.coarse_hur;
    println!(
        "coarse HUR        {:.6} ≥ {:.6}  (trivial term {:.6})",
        c.lhs, c.bound, c.trivial_term
    );
    let b = &report.coarse_bbm;
    println!("coarse BBM        {:.6} ≥ {:.6}", b.lhs, b.bound);
    let s = &report.coarse_sobolev_chain;
    println!("coarse chain      {:.6} ≥ {:.6} ≥ {:.6}", s.upper, s.middle, s.lower);
    let d = &report.discrete_entropic;
    println!("discrete entropic {:.6} ≥ {:.6}", d.lhs, d.bound);
    let f = &report.false_violation;
    println!(
        "naive product     {:.6} vs {:.6}  below: {}",
        f.naive_lhs, f.bound, f.below_hbar_bound
    );
    println!("\n{}", report.to_json()?);
    Ok(())
}
