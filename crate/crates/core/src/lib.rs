//! Uncertainty relations for coarse-grained position and momentum
//! measurements of continuous-variable states.
//!
//! A finite-resolution detector reports bin probabilities `r_k` (position,
//! bin width `Δ`) and `s_l` (momentum, bin width `δ`). Using the discrete
//! variances of those distributions directly can make a physical state
//! appear to violate the Heisenberg relation. The histogram densities built
//! from the same probabilities never do: for every state and every pair of
//! widths,
//!
//! ```text
//! ln(2πe σ_{x,w} σ_{p,w̃}) ≥ h[w_Δ] + h[w̃_δ] ≥ ln(πeħ)
//! (σ²_{x_Δ} + Δ²/12)(σ²_{p_δ} + δ²/12) ≥ ħ²/4
//! ```
//!
//! Modules:
//!
//! - [`numerics`]: adaptive quadrature, `erf`, tail bounds.
//! - [`state`]: Gaussian, truncated-Gaussian and sampled-wavefunction states.
//! - [`coarse`]: bin grids, bin probabilities, histogram densities.
//! - [`relations`]: evaluators for each relation and the combined report.
//! - [`sampling`]: finite-statistics measurement simulation.
//! - [`experiments`]: the histogram, width-sweep and false-violation studies
//!   behind the `coarse-ur` binary.
//!
//! ```
//! use coarse_ur::{coarse::BinGrid, relations::full_report, state::StateModel};
//!
//! let state = StateModel::ground_state(1.0).unwrap();
//! let grid = BinGrid::centered(10.0).unwrap();
//! let report = full_report(&state, grid, grid).unwrap();
//! assert!(report.false_violation.below_hbar_bound);
//! assert!(report.coarse_hur.satisfied);
//! ```

#![forbid(unsafe_code)]
// `!(x > 0.0)` is deliberate: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coarse;
pub mod error;
pub mod experiments;
pub mod numerics;
pub mod relations;
pub mod sampling;
pub mod state;

pub use error::{Error, Result};
