//! Evaluators for the variance and entropic uncertainty relations, on exact
//! marginals and on coarse-grained data, and the combined [`URReport`].
//!
//! | relation | inequality |
//! |---|---|
//! | HUR | `σ²ₓ σ²ₚ ≥ ħ²/4` |
//! | BBM | `hₓ + hₚ ≥ ln(πeħ)` |
//! | log-Sobolev chain | `ln(2πe σₓσₚ) ≥ hₓ + hₚ ≥ ln(πeħ)` |
//! | coarse HUR | `(σ²_{x_Δ} + Δ²/12)(σ²_{p_δ} + δ²/12) ≥ ħ²/4` |
//! | discrete entropic | `H[r] + H[s] ≥ ln(πeħ) − ln(Δδ)` |
//!
//! The coarse relations are theorems for every physical state and every
//! pair of bin widths. The naive product `σ²_{x_Δ} σ²_{p_δ}` is not, and
//! falls below `ħ²/4` once the bins are wide enough (a false violation).

use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

use crate::coarse::{bin_probabilities, BinGrid, DiscreteDist};
use crate::error::{Error, Result};
use crate::numerics::DEFAULT_MASS_TOL;
use crate::state::StateModel;

/// Absolute slack separating a theorem violation from float noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Slack {
    /// 1e-12, for closed-form inputs.
    Analytic,
    /// 1e-9, for inputs that went through quadrature.
    Quadrature,
}

impl Slack {
    pub fn value(self) -> f64 {
        match self {
            Slack::Analytic => 1e-12,
            Slack::Quadrature => 1e-9,
        }
    }
}

/// `lhs ≥ bound`, with `margin = lhs − bound`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub lhs: f64,
    pub bound: f64,
    pub satisfied: bool,
    pub margin: f64,
}

impl Verdict {
    pub fn new(lhs: f64, bound: f64, slack: Slack) -> Self {
        Self {
            lhs,
            bound,
            satisfied: lhs >= bound - slack.value(),
            margin: lhs - bound,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SobolevChain {
    /// `ln(2πe σₓσₚ)`
    pub upper: f64,
    /// `hₓ + hₚ`
    pub middle: f64,
    /// `ln(πeħ)`
    pub lower: f64,
    pub ordered: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoarseHurVerdict {
    /// Product form `(σ²_{x_Δ} + Δ²/12)(σ²_{p_δ} + δ²/12)`.
    pub lhs: f64,
    /// The same quantity summed term by term.
    pub lhs_expanded: f64,
    pub bound: f64,
    pub satisfied: bool,
    pub margin: f64,
    /// `(Δ²/12)(δ²/12)`, the part that depends on the widths alone.
    pub trivial_term: f64,
    pub trivially_satisfied: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscreteEntropicVerdict {
    pub lhs: f64,
    pub bound: f64,
    pub satisfied: bool,
    pub margin: f64,
    pub trivially_satisfied: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FalseViolation {
    pub naive_lhs: f64,
    pub bound: f64,
    pub below_hbar_bound: bool,
}

/// Variance of `D_η`, the normalized rectangle of width `η`.
pub fn rectangle_variance(width: f64) -> f64 {
    width * width / 12.0
}

pub fn hur_bound(hbar: f64) -> f64 {
    hbar * hbar / 4.0
}

pub fn bbm_bound(hbar: f64) -> f64 {
    (PI * E * hbar).ln()
}

pub fn eval_hur(var_x: f64, var_p: f64, hbar: f64, slack: Slack) -> Verdict {
    Verdict::new(var_x * var_p, hur_bound(hbar), slack)
}

pub fn eval_bbm(h_x: f64, h_p: f64, hbar: f64, slack: Slack) -> Verdict {
    Verdict::new(h_x + h_p, bbm_bound(hbar), slack)
}

/// Single-marginal reversed log-Sobolev inequality `½ ln(2πe σ²) ≥ h`.
pub fn eval_log_sobolev(var: f64, h: f64, slack: Slack) -> Verdict {
    Verdict::new(0.5 * (2.0 * PI * E * var).ln(), h, slack)
}

pub fn eval_sobolev_chain(var_x: f64, var_p: f64, h_x: f64, h_p: f64, hbar: f64, slack: Slack) -> SobolevChain {
    let upper = 0.5 * (2.0 * PI * E * var_x).ln() + 0.5 * (2.0 * PI * E * var_p).ln();
    let middle = h_x + h_p;
    let lower = bbm_bound(hbar);
    let s = slack.value();
    SobolevChain {
        upper,
        middle,
        lower,
        ordered: upper >= middle - s && middle >= lower - s,
    }
}

pub fn eval_coarse_hur(
    dvar_x: f64,
    dvar_p: f64,
    delta_x: f64,
    delta_p: f64,
    hbar: f64,
    slack: Slack,
) -> CoarseHurVerdict {
    let (rx, rp) = (rectangle_variance(delta_x), rectangle_variance(delta_p));
    let lhs = (dvar_x + rx) * (dvar_p + rp);
    let lhs_expanded = dvar_x * dvar_p + (rx * dvar_p + rp * dvar_x) + rx * rp;
    let bound = hur_bound(hbar);
    let trivial_term = rx * rp;
    CoarseHurVerdict {
        lhs,
        lhs_expanded,
        bound,
        satisfied: lhs >= bound - slack.value(),
        margin: lhs - bound,
        trivial_term,
        trivially_satisfied: trivial_term >= bound - slack.value(),
    }
}

pub fn eval_discrete_entropic(
    h_r: f64,
    h_s: f64,
    delta_x: f64,
    delta_p: f64,
    hbar: f64,
    slack: Slack,
) -> DiscreteEntropicVerdict {
    let v = Verdict::new(h_r + h_s, bbm_bound(hbar) - (delta_x * delta_p).ln(), slack);
    // Trivial once the bound is non-positive, i.e. Δδ ≥ πeħ.
    DiscreteEntropicVerdict {
        lhs: v.lhs,
        bound: v.bound,
        satisfied: v.satisfied,
        margin: v.margin,
        trivially_satisfied: v.bound <= slack.value(),
    }
}

pub fn detect_false_violation(dvar_x: f64, dvar_p: f64, hbar: f64) -> FalseViolation {
    let naive_lhs = dvar_x * dvar_p;
    let bound = hur_bound(hbar);
    FalseViolation {
        naive_lhs,
        bound,
        below_hbar_bound: naive_lhs < bound,
    }
}

/// Variances and differential entropies of one position/momentum pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub var_x: f64,
    pub var_p: f64,
    pub entropy_x: f64,
    pub entropy_p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridRecord {
    pub width: f64,
    pub offset: f64,
}

impl From<&BinGrid> for GridRecord {
    fn from(g: &BinGrid) -> Self {
        Self {
            width: g.width(),
            offset: g.offset(),
        }
    }
}

/// Every relation evaluated on one position/momentum measurement pair.
///
/// `exact`, `hur`, `bbm` and `sobolev_chain` describe the underlying state
/// and are absent when the report was built from measured histograms only.
/// `discrete` holds the bin-center variances and Shannon entropies,
/// `coarse` the variances and differential entropies of the histogram
/// densities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct URReport {
    pub hbar: f64,
    pub grid_x: GridRecord,
    pub grid_p: GridRecord,
    pub exact: Option<Moments>,
    pub discrete: Moments,
    pub coarse: Moments,
    pub hur: Option<Verdict>,
    pub bbm: Option<Verdict>,
    pub sobolev_chain: Option<SobolevChain>,
    pub coarse_bbm: Verdict,
    pub coarse_sobolev_chain: SobolevChain,
    pub coarse_hur: CoarseHurVerdict,
    pub discrete_entropic: DiscreteEntropicVerdict,
    pub false_violation: FalseViolation,
}

impl URReport {
    /// The relations that hold for every physical state at any resolution.
    pub fn theorems_hold(&self) -> bool {
        self.coarse_hur.satisfied
            && self.coarse_bbm.satisfied
            && self.coarse_sobolev_chain.ordered
            && self.discrete_entropic.satisfied
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Report from a pair of bin distributions, e.g. measured histograms.
/// Relation failures are reported, not raised.
pub fn report_from_dists(
    dist_x: &DiscreteDist,
    dist_p: &DiscreteDist,
    hbar: f64,
    exact: Option<Moments>,
) -> Result<URReport> {
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(crate::error::invalid(format!("hbar must be positive, got {hbar}")));
    }
    let slack = Slack::Quadrature;
    let (wx, wp) = (dist_x.coarse_pdf(), dist_p.coarse_pdf());
    let (dx, dp) = (dist_x.grid().width(), dist_p.grid().width());
    let discrete = Moments {
        var_x: dist_x.discrete_variance(),
        var_p: dist_p.discrete_variance(),
        entropy_x: dist_x.discrete_entropy(),
        entropy_p: dist_p.discrete_entropy(),
    };
    let coarse = Moments {
        var_x: wx.variance()?,
        var_p: wp.variance()?,
        entropy_x: wx.entropy()?,
        entropy_p: wp.entropy()?,
    };
    Ok(URReport {
        hbar,
        grid_x: dist_x.grid().into(),
        grid_p: dist_p.grid().into(),
        exact,
        discrete,
        coarse,
        hur: exact.map(|m| eval_hur(m.var_x, m.var_p, hbar, slack)),
        bbm: exact.map(|m| eval_bbm(m.entropy_x, m.entropy_p, hbar, slack)),
        sobolev_chain: exact.map(|m| eval_sobolev_chain(m.var_x, m.var_p, m.entropy_x, m.entropy_p, hbar, slack)),
        coarse_bbm: eval_bbm(coarse.entropy_x, coarse.entropy_p, hbar, slack),
        coarse_sobolev_chain: eval_sobolev_chain(
            coarse.var_x,
            coarse.var_p,
            coarse.entropy_x,
            coarse.entropy_p,
            hbar,
            slack,
        ),
        coarse_hur: eval_coarse_hur(discrete.var_x, discrete.var_p, dx, dp, hbar, slack),
        discrete_entropic: eval_discrete_entropic(discrete.entropy_x, discrete.entropy_p, dx, dp, hbar, slack),
        false_violation: detect_false_violation(discrete.var_x, discrete.var_p, hbar),
    })
}

pub fn exact_moments(state: &StateModel) -> Result<Moments> {
    let (px, pp) = (state.position(), state.momentum()?);
    Ok(Moments {
        var_x: px.variance()?,
        var_p: pp.variance()?,
        entropy_x: px.entropy()?,
        entropy_p: pp.entropy()?,
    })
}

/// Bins both marginals of `state` and evaluates every relation. A report in
/// which a theorem-backed relation fails is returned as
/// [`Error::InternalInconsistency`].
pub fn full_report(state: &StateModel, grid_x: BinGrid, grid_p: BinGrid) -> Result<URReport> {
    let pp = state.momentum()?;
    let px = state.position();
    let dist_x = bin_probabilities(&px, grid_x, DEFAULT_MASS_TOL)?;
    let dist_p = bin_probabilities(&pp, grid_p, DEFAULT_MASS_TOL)?;
    let report = report_from_dists(&dist_x, &dist_p, state.hbar(), Some(exact_moments(state)?))?;
    if !report.theorems_hold() {
        return Err(Error::InternalInconsistency(format!(
            "coarse relation failed for a physical state at Δ={}, δ={}: coarse_hur margin {:e}, coarse_bbm margin {:e}",
            grid_x.width(),
            grid_p.width(),
            report.coarse_hur.margin,
            report.coarse_bbm.margin
        )));
    }
    Ok(report)
}

/// Widths at which the naive discrete product falls below `ħ²/4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FalseViolationWitness {
    /// Width in units of the marginal standard deviations.
    pub a: f64,
    pub delta_x: f64,
    pub delta_p: f64,
    pub naive_product: f64,
    pub bound: f64,
    pub coarse_hur: CoarseHurVerdict,
}

/// Largest width searched, in standard deviations.
pub const FALSE_VIOLATION_CAP: f64 = 1e3;

/// Widens `Δ = aσₓ`, `δ = aσₚ` along `a = 2^{k/2}` (grids re-centered on the
/// means) until the naive discrete product drops below `ħ²/4`.
pub fn find_false_violation(state: &StateModel) -> Result<FalseViolationWitness> {
    let (px, pp) = (state.position(), state.momentum()?);
    let (sx, sp) = (px.variance()?.sqrt(), pp.variance()?.sqrt());
    let hbar = state.hbar();
    let mut k = 0;
    loop {
        let a = 2f64.powf(k as f64 / 2.0);
        if a > FALSE_VIOLATION_CAP {
            return Err(Error::SearchExhausted {
                max_delta_x: FALSE_VIOLATION_CAP * sx,
                max_delta_p: FALSE_VIOLATION_CAP * sp,
            });
        }
        let gx = BinGrid::recentered(a * sx, px.mean())?;
        let gp = BinGrid::recentered(a * sp, pp.mean())?;
        let dvx = bin_probabilities(&px, gx, DEFAULT_MASS_TOL)?.discrete_variance();
        let dvp = bin_probabilities(&pp, gp, DEFAULT_MASS_TOL)?.discrete_variance();
        let fv = detect_false_violation(dvx, dvp, hbar);
        if fv.below_hbar_bound {
            return Ok(FalseViolationWitness {
                a,
                delta_x: gx.width(),
                delta_p: gp.width(),
                naive_product: fv.naive_lhs,
                bound: fv.bound,
                coarse_hur: eval_coarse_hur(dvx, dvp, gx.width(), gp.width(), hbar, Slack::Quadrature),
            });
        }
        k += 1;
    }
}
