//! Coarse graining: bin probabilities from the rectangle function, discrete
//! variances and entropies, and the histogram density built from them.
//!
//! Bin `j` of a [`BinGrid`] with width `η` and offset `o` is the half-open
//! interval `[(j−½)η + o, (j+½)η + o)` with center `jη + o`, so the grid
//! partitions the real line.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numerics::{self, breaks_within, neg_p_ln_p, Density, QuadratureSpec};

/// Tolerance on `Σ probs + tail_mass = 1`.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Allowed disagreement between the two routes in [`CoarsePdf::variance`]
/// and [`CoarsePdf::entropy`].
pub const CROSS_CHECK_TOL: f64 = 1e-8;

const MAX_BINS: i64 = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinGrid {
    width: f64,
    offset: f64,
}

impl BinGrid {
    pub fn new(width: f64, offset: f64) -> Result<Self> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(invalid(format!("bin width must be positive and finite, got {width}")));
        }
        if !offset.is_finite() {
            return Err(invalid(format!("bin offset must be finite, got {offset}")));
        }
        Ok(Self { width, offset })
    }

    /// Centers at `jη`.
    pub fn centered(width: f64) -> Result<Self> {
        Self::new(width, 0.0)
    }

    /// Offset in `[0, η)` that puts `mean` on a bin center.
    pub fn recentered(width: f64, mean: f64) -> Result<Self> {
        let g = Self::new(width, 0.0)?;
        Self::new(width, mean.rem_euclid(g.width))
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn center(&self, j: i64) -> f64 {
        j as f64 * self.width + self.offset
    }

    pub fn left(&self, j: i64) -> f64 {
        (j as f64 - 0.5) * self.width + self.offset
    }

    pub fn right(&self, j: i64) -> f64 {
        (j as f64 + 0.5) * self.width + self.offset
    }

    pub fn index_of(&self, z: f64) -> i64 {
        let mut j = ((z - self.offset) / self.width + 0.5).floor() as i64;
        if z < self.left(j) {
            j -= 1;
        } else if z >= self.right(j) {
            j += 1;
        }
        j
    }

    /// Bins `[a, b)` with `a ≤ hi` and `b > lo`, i.e. meeting the closed interval `[lo, hi]`.
    pub fn bins_intersecting(&self, lo: f64, hi: f64) -> RangeInclusive<i64> {
        self.index_of(lo)..=self.index_of(hi)
    }

    pub fn count_bins_intersecting(&self, lo: f64, hi: f64) -> usize {
        let r = self.bins_intersecting(lo, hi);
        (r.end() - r.start() + 1).max(0) as usize
    }
}

/// Bin probabilities over a [`BinGrid`], with the mass that fell outside
/// the enumerated bins tracked separately.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDist {
    grid: BinGrid,
    probs: BTreeMap<i64, f64>,
    tail_mass: f64,
}

impl DiscreteDist {
    pub fn new(grid: BinGrid, probs: BTreeMap<i64, f64>, tail_mass: f64) -> Result<Self> {
        if let Some((j, p)) = probs.iter().find(|(_, p)| !(**p >= 0.0 && p.is_finite())) {
            return Err(invalid(format!("bin {j} has invalid probability {p}")));
        }
        if !(tail_mass >= 0.0 && tail_mass.is_finite()) {
            return Err(invalid(format!("tail_mass must be non-negative, got {tail_mass}")));
        }
        let total: f64 = probs.values().sum::<f64>() + tail_mass;
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(invalid(format!("probabilities sum to {total}, expected 1")));
        }
        if tail_mass >= 1.0 {
            return Err(invalid("all probability mass lies outside the enumerated bins"));
        }
        Ok(Self { grid, probs, tail_mass })
    }

    /// Empirical distribution from bin counts plus `overflow` samples outside
    /// the enumerated bins.
    pub fn from_counts(grid: BinGrid, counts: &BTreeMap<i64, u64>, overflow: u64) -> Result<Self> {
        let n = counts.values().sum::<u64>() + overflow;
        if n == 0 {
            return Err(invalid("no samples"));
        }
        let nf = n as f64;
        let probs = counts.iter().map(|(&j, &c)| (j, c as f64 / nf)).collect();
        Self::new(grid, probs, overflow as f64 / nf)
    }

    pub fn grid(&self) -> &BinGrid {
        &self.grid
    }

    pub fn probs(&self) -> &BTreeMap<i64, f64> {
        &self.probs
    }

    pub fn prob(&self, j: i64) -> f64 {
        self.probs.get(&j).copied().unwrap_or(0.0)
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    /// `(center, probability / (1 − tail_mass))` for each enumerated bin.
    fn normalized(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let norm = 1.0 - self.tail_mass;
        self.probs.iter().map(move |(&j, &p)| (self.grid.center(j), p / norm))
    }

    pub fn mean(&self) -> f64 {
        self.normalized().map(|(z, p)| z * p).sum()
    }

    /// `Σ z_j² p_j − (Σ z_j p_j)²`, evaluated in centered form.
    pub fn discrete_variance(&self) -> f64 {
        let m = self.mean();
        self.normalized()
            .map(|(z, p)| (z - m) * (z - m) * p)
            .sum::<f64>()
            .max(0.0)
    }

    /// `−Σ p_j ln p_j`, with `0 ln 0 = 0`.
    pub fn discrete_entropy(&self) -> f64 {
        self.normalized().map(|(_, p)| neg_p_ln_p(p)).sum::<f64>().max(0.0)
    }

    /// Total-variation distance, including the tail buckets.
    pub fn tv_distance(&self, other: &DiscreteDist) -> f64 {
        let mut keys: Vec<i64> = self.probs.keys().chain(other.probs.keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        let bins: f64 = keys.iter().map(|&j| (self.prob(j) - other.prob(j)).abs()).sum();
        0.5 * (bins + (self.tail_mass - other.tail_mass).abs())
    }

    pub fn coarse_pdf(&self) -> CoarsePdf {
        CoarsePdf { source: self.clone() }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Serialize, Deserialize)]
struct BinEntry {
    j: i64,
    prob: f64,
}

#[derive(Serialize, Deserialize)]
struct DiscreteDistRecord {
    width: f64,
    offset: f64,
    entries: Vec<BinEntry>,
    tail_mass: f64,
}

impl Serialize for DiscreteDist {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DiscreteDistRecord {
            width: self.grid.width,
            offset: self.grid.offset,
            entries: self.probs.iter().map(|(&j, &prob)| BinEntry { j, prob }).collect(),
            tail_mass: self.tail_mass,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DiscreteDist {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let rec = DiscreteDistRecord::deserialize(d)?;
        let grid = BinGrid::new(rec.width, rec.offset).map_err(D::Error::custom)?;
        let mut probs = BTreeMap::new();
        for e in rec.entries {
            if probs.insert(e.j, e.prob).is_some() {
                return Err(D::Error::custom(format!("duplicate bin index {}", e.j)));
            }
        }
        DiscreteDist::new(grid, probs, rec.tail_mass).map_err(D::Error::custom)
    }
}

/// `r_j = ∫_{bin j} ρ`, for every bin meeting the tail interval of `pdf`.
pub fn bin_probabilities<D: Density + ?Sized>(pdf: &D, grid: BinGrid, mass_tol: f64) -> Result<DiscreteDist> {
    let spec = QuadratureSpec::tight();
    let scale = pdf.scale();
    let center = pdf.center();
    let t = numerics::tail_bound_interval(pdf, center, scale, mass_tol, spec)?;
    let range = grid.bins_intersecting(t.lo, t.hi);
    let (first, last) = (*range.start(), *range.end());
    if last - first + 1 > MAX_BINS {
        return Err(invalid(format!(
            "bin width {} would need {} bins to cover the distribution",
            grid.width,
            last - first + 1
        )));
    }

    let support = pdf.support();
    let probs: Vec<(i64, f64)> = (first..=last)
        .into_par_iter()
        .map(|j| {
            let (mut a, mut b) = (grid.left(j), grid.right(j));
            if let Some((s_lo, s_hi)) = support {
                a = a.max(s_lo);
                b = b.min(s_hi);
            }
            if !(a < b) {
                return Ok((j, 0.0));
            }
            let mut breaks = breaks_within(pdf.breakpoints(), a, b).to_vec();
            breaks.extend([t.lo, t.hi, center]);
            let r = numerics::integrate_with_breaks(|z| pdf.pdf(z), a, b, &breaks, spec)?;
            Ok((j, r.value.max(0.0)))
        })
        .collect::<Result<_>>()?;

    let tail = numerics::outside_mass(pdf, grid.left(first), grid.right(last), scale, spec)?;
    DiscreteDist::new(grid, probs.into_iter().collect(), tail)
}

/// The histogram density `w(z) = Σ_j r_j D_η(z, z_j)`, `D_η = I_η / η`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoarsePdf {
    source: DiscreteDist,
}

impl CoarsePdf {
    pub fn source(&self) -> &DiscreteDist {
        &self.source
    }

    pub fn width(&self) -> f64 {
        self.source.grid.width
    }

    pub fn density(&self, z: f64) -> f64 {
        self.source.prob(self.source.grid.index_of(z)) / self.width()
    }

    /// `Σ_j r_j = 1 − tail_mass`.
    pub fn integral(&self) -> f64 {
        self.source.probs.values().sum()
    }

    /// Variance of the normalized histogram, as `discrete_variance + η²/12`,
    /// cross-checked against direct moment integration of the density.
    pub fn variance(&self) -> Result<f64> {
        let w = self.width();
        let via_identity = self.source.discrete_variance() + w * w / 12.0;
        let direct = self.variance_by_integration()?;
        let diff = (direct - via_identity).abs();
        if diff > CROSS_CHECK_TOL {
            return Err(Error::InternalInconsistency(format!(
                "histogram variance: direct integration {direct} vs decomposition {via_identity} (|Δ|={diff:e})"
            )));
        }
        Ok(via_identity)
    }

    /// Differential entropy of the normalized histogram, as
    /// `discrete_entropy + ln η`, cross-checked by direct integration.
    pub fn entropy(&self) -> Result<f64> {
        let via_identity = self.source.discrete_entropy() + self.width().ln();
        let direct = self.entropy_by_integration()?;
        let diff = (direct - via_identity).abs();
        if diff > CROSS_CHECK_TOL {
            return Err(Error::InternalInconsistency(format!(
                "histogram entropy: direct integration {direct} vs identity {via_identity} (|Δ|={diff:e})"
            )));
        }
        Ok(via_identity)
    }

    fn integrate_bins<G: Fn(f64) -> f64 + Sync>(&self, g: G) -> Result<f64> {
        let norm = 1.0 - self.source.tail_mass;
        let grid = self.source.grid;
        let spec = QuadratureSpec::default();
        let parts = self
            .source
            .probs
            .iter()
            .filter(|(_, p)| **p > 0.0)
            .map(|(&j, _)| numerics::integrate(|z| g(z) * self.density(z) / norm, grid.left(j), grid.right(j), spec))
            .map(|r| r.map(|i| i.value))
            .collect::<Result<Vec<f64>>>()?;
        Ok(parts.iter().sum())
    }

    /// Variance from `∫ z w` and `∫ (z − m)² w`, normalized by `1 − tail_mass`.
    pub fn variance_by_integration(&self) -> Result<f64> {
        let m = self.integrate_bins(|z| z)?;
        self.integrate_bins(|z| (z - m) * (z - m))
    }

    pub fn entropy_by_integration(&self) -> Result<f64> {
        let norm = 1.0 - self.source.tail_mass;
        let grid = self.source.grid;
        let spec = QuadratureSpec::default();
        let mut h = 0.0;
        for (&j, _) in self.source.probs.iter().filter(|(_, p)| **p > 0.0) {
            h += numerics::integrate(
                |z| neg_p_ln_p(self.density(z) / norm),
                grid.left(j),
                grid.right(j),
                spec,
            )?
            .value;
        }
        Ok(h)
    }
}
