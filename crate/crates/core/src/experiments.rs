//! Data generators for the histogram, width-sweep, false-violation and
//! sampling studies, plus CSV/JSON emitters. Output is plot-ready data;
//! no rendering happens here.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::coarse::{bin_probabilities, BinGrid};
use crate::error::{invalid, Result};
use crate::numerics::{Density, DEFAULT_MASS_TOL};
use crate::relations::{hur_bound, rectangle_variance};
use crate::state::StateModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Writes rows as CSV (header row, RFC-4180 quoting) or a JSON array.
pub fn emit<T: Serialize, W: Write>(rows: &[T], format: Format, out: W) -> Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for row in rows {
                w.serialize(row).map_err(|e| invalid(format!("csv: {e}")))?;
            }
            w.flush()?;
        }
        Format::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, rows)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

/// Width sweep at `Δ = a·σₓ`, `δ = a·σₚ`.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub a_values: Vec<f64>,
    pub state: StateModel,
    /// Half-width of the bin-counting window, in standard deviations.
    pub interval_sigmas: f64,
}

impl SweepSpec {
    pub fn new(state: StateModel, a_values: Vec<f64>, interval_sigmas: f64) -> Result<Self> {
        if a_values.is_empty() {
            return Err(invalid("sweep needs at least one a value"));
        }
        if let Some(a) = a_values.iter().find(|a| !(**a > 0.0 && a.is_finite())) {
            return Err(invalid(format!("a values must be positive, got {a}")));
        }
        if !(interval_sigmas > 0.0) {
            return Err(invalid(format!(
                "interval_sigmas must be positive, got {interval_sigmas}"
            )));
        }
        if !state.has_momentum() {
            return Err(crate::Error::MomentumUndefined(state.kind().name()));
        }
        Ok(Self {
            a_values,
            state,
            interval_sigmas,
        })
    }

    /// `steps` values spaced geometrically over `[a_min, a_max]`.
    pub fn geometric(state: StateModel, a_min: f64, a_max: f64, steps: usize, interval_sigmas: f64) -> Result<Self> {
        if !(a_min > 0.0 && a_max >= a_min) || steps == 0 {
            return Err(invalid(format!(
                "bad sweep range a ∈ [{a_min}, {a_max}] with {steps} steps"
            )));
        }
        let a_values = if steps == 1 {
            vec![a_min]
        } else {
            let r = (a_max / a_min).ln() / (steps - 1) as f64;
            (0..steps).map(|i| a_min * (r * i as f64).exp()).collect()
        };
        Self::new(state, a_values, interval_sigmas)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub a: f64,
    /// `σ²_{x,w} σ²_{p,w̃} / (ħ²/4)`
    pub coarse_product_ratio: f64,
    /// `(Δ²/12)(δ²/12) / (ħ²/4)`
    pub trivial_term_ratio: f64,
    /// `σ²_{x_Δ} σ²_{p_δ} / (ħ²/4)`
    pub discrete_product_ratio: f64,
    pub n_bins_x: usize,
    pub n_bins_p: usize,
    pub n_bins: usize,
}

pub fn trivial_term_ratio(a: f64, sigma_x: f64, sigma_p: f64, hbar: f64) -> f64 {
    rectangle_variance(a * sigma_x) * rectangle_variance(a * sigma_p) / hur_bound(hbar)
}

/// One sweep point. Grids are re-centered so each mean sits on a bin center.
pub fn sweep_row(state: &StateModel, a: f64, interval_sigmas: f64) -> Result<SweepRow> {
    let (px, pp) = (state.position(), state.momentum()?);
    let (sx, sp) = (px.variance()?.sqrt(), pp.variance()?.sqrt());
    let gx = BinGrid::recentered(a * sx, px.mean())?;
    let gp = BinGrid::recentered(a * sp, pp.mean())?;
    let dx = bin_probabilities(&px, gx, DEFAULT_MASS_TOL)?;
    let dp = bin_probabilities(&pp, gp, DEFAULT_MASS_TOL)?;
    let bound = hur_bound(state.hbar());
    let coarse = dx.coarse_pdf().variance()? * dp.coarse_pdf().variance()?;
    let n_bins_x = gx.count_bins_intersecting(px.mean() - interval_sigmas * sx, px.mean() + interval_sigmas * sx);
    let n_bins_p = gp.count_bins_intersecting(pp.mean() - interval_sigmas * sp, pp.mean() + interval_sigmas * sp);
    Ok(SweepRow {
        a,
        coarse_product_ratio: coarse / bound,
        trivial_term_ratio: trivial_term_ratio(a, sx, sp, state.hbar()),
        discrete_product_ratio: dx.discrete_variance() * dp.discrete_variance() / bound,
        n_bins_x,
        n_bins_p,
        n_bins: n_bins_x + n_bins_p,
    })
}

/// Sweep evaluated in parallel; rows come back sorted by `a`.
pub fn sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let mut rows = spec
        .a_values
        .par_iter()
        .map(|&a| sweep_row(&spec.state, a, spec.interval_sigmas))
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|l, r| l.a.total_cmp(&r.a));
    Ok(rows)
}

/// The `a` at which the trivial-term ratio reaches 1, by bisection.
pub fn trivial_crossing(state: &StateModel) -> Result<f64> {
    let sx = state.exact_variance_x()?.sqrt();
    let sp = state.exact_variance_p()?.sqrt();
    let f = |a: f64| trivial_term_ratio(a, sx, sp, state.hbar()) - 1.0;
    let (mut lo, mut hi) = (1e-6, 1.0);
    while f(hi) < 0.0 {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(invalid("trivial-term ratio never reaches 1"));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HistogramPoint {
    pub width: f64,
    pub x: f64,
    /// Histogram density `w_Δ(x)`.
    pub w: f64,
    /// Exact position density `ρ(x)`.
    pub rho: f64,
}

/// Histogram densities of the position marginal for each bin width, on a
/// uniform plotting grid of `points` nodes spanning the distribution.
pub fn histogram_curves(state: &StateModel, widths: &[f64], points: usize) -> Result<Vec<HistogramPoint>> {
    if widths.is_empty() {
        return Err(invalid("at least one width is required"));
    }
    if points < 2 {
        return Err(invalid("plotting grid needs at least two points"));
    }
    let px = state.position();
    let range = px.tail_interval(1e-9)?;
    let step = (range.hi - range.lo) / (points - 1) as f64;
    let mut out = Vec::with_capacity(widths.len() * points);
    for &width in widths {
        let grid = BinGrid::centered(width)?;
        let w = bin_probabilities(&px, grid, DEFAULT_MASS_TOL)?.coarse_pdf();
        out.extend((0..points).map(|i| {
            let x = range.lo + i as f64 * step;
            HistogramPoint {
                width,
                x,
                w: w.density(x),
                rho: px.pdf(x),
            }
        }));
    }
    Ok(out)
}

/// Per-width `(∫|w − ρ|, ∫w)` by the trapezoid rule on the plotting grid.
pub fn curve_summaries(points: &[HistogramPoint]) -> Vec<(f64, f64, f64)> {
    let mut out = Vec::new();
    for chunk in points.chunk_by(|a, b| a.width == b.width) {
        let (mut l1, mut mass) = (0.0, 0.0);
        for pair in chunk.windows(2) {
            let h = pair[1].x - pair[0].x;
            l1 += 0.5 * h * ((pair[0].w - pair[0].rho).abs() + (pair[1].w - pair[1].rho).abs());
            mass += 0.5 * h * (pair[0].w + pair[1].w);
        }
        out.push((chunk[0].width, l1, mass));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergencePoint {
    pub n: u64,
    pub tv_distance: f64,
}
