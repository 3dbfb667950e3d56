//! Continuous-variable states and their position/momentum marginals.
//!
//! A [`StateModel`] is immutable after construction. Each marginal is exposed
//! as a [`Marginal`], which implements [`Density`] and carries the exact
//! moments where they are known in closed form.

mod sampler;
mod spec;
mod wavefunction;

use std::f64::consts::{E, PI};

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::numerics::{self, Density, QuadratureSpec, TailInterval, DEFAULT_MASS_TOL};

pub use sampler::InverseCdfSampler;
pub use spec::{StateParamsSpec, StateSpec};
pub use wavefunction::{NumericWavefunction, TabulatedDensity};

/// Which canonical variable a marginal describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Position,
    Momentum,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianSqueezedParams {
    pub sigma_x: f64,
    pub sigma_p: f64,
    pub mean_x: f64,
    pub mean_p: f64,
}

/// `exp(−κx²)` restricted to `[−width/2, width/2]` and normalized. Position only.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedGaussian {
    kappa: f64,
    width: f64,
    norm: f64,
    variance: f64,
}

impl TruncatedGaussian {
    fn new(kappa: f64, width: f64) -> Result<Self> {
        if !kappa.is_finite() {
            return Err(invalid(format!("kappa must be finite, got {kappa}")));
        }
        if !(width > 0.0 && width.is_finite()) {
            return Err(invalid(format!("width must be positive, got {width}")));
        }
        let half = 0.5 * width;
        let spec = QuadratureSpec::tight();
        let norm = numerics::integrate(|x| (-kappa * x * x).exp(), -half, half, spec)?.value;
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(invalid(format!("kappa={kappa}, width={width} cannot be normalized")));
        }
        let second = numerics::integrate(|x| x * x * (-kappa * x * x).exp(), -half, half, spec)?.value;
        Ok(Self {
            kappa,
            width,
            norm,
            variance: second / norm,
        })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    /// Normalization computed by quadrature; equals `√(π/κ)·erf(width·√κ/2)` for κ>0.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn pdf(&self, x: f64) -> f64 {
        if x.abs() <= 0.5 * self.width {
            (-self.kappa * x * x).exp() / self.norm
        } else {
            0.0
        }
    }

    /// Variance by quadrature of `x²ρ`.
    pub fn variance_by_quadrature(&self) -> f64 {
        self.variance
    }

    pub fn variance(&self) -> f64 {
        // The closed form cancels catastrophically as κ·width² → 0.
        if self.kappa * self.width * self.width >= 1e-3 {
            truncated_gaussian_variance(self.kappa, self.width)
        } else {
            self.variance
        }
    }
}

/// Closed-form variance of the truncated Gaussian, valid for κ > 0:
/// `1/(2κ) − width/(2√(κπ)) · exp(−κ width²/4) / erf(width √κ / 2)`.
pub fn truncated_gaussian_variance(kappa: f64, width: f64) -> f64 {
    let sk = kappa.sqrt();
    1.0 / (2.0 * kappa)
        - width / (2.0 * (kappa * PI).sqrt()) * (-kappa * width * width / 4.0).exp() / numerics::erf(width * sk / 2.0)
}

#[derive(Debug, Clone)]
pub enum StateKind {
    GaussianSqueezed(GaussianSqueezedParams),
    TruncatedGaussian(TruncatedGaussian),
    NumericWavefunction(NumericWavefunction),
}

impl StateKind {
    pub fn name(&self) -> &'static str {
        match self {
            StateKind::GaussianSqueezed(_) => "gaussian_squeezed",
            StateKind::TruncatedGaussian(_) => "truncated_gaussian",
            StateKind::NumericWavefunction(_) => "numeric_wavefunction",
        }
    }
}

#[derive(Debug, Clone)]
pub struct StateModel {
    hbar: f64,
    kind: StateKind,
}

fn check_hbar(hbar: f64) -> Result<()> {
    if hbar > 0.0 && hbar.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("hbar must be positive, got {hbar}")))
    }
}

impl StateModel {
    /// Gaussian state with independent position and momentum spreads.
    /// Requires `sigma_x·sigma_p ≥ ħ/2`.
    pub fn gaussian(sigma_x: f64, sigma_p: f64, mean_x: f64, mean_p: f64, hbar: f64) -> Result<Self> {
        check_hbar(hbar)?;
        for (name, v) in [("sigma_x", sigma_x), ("sigma_p", sigma_p)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(format!("{name} must be positive, got {v}")));
            }
        }
        if !(mean_x.is_finite() && mean_p.is_finite()) {
            return Err(invalid("means must be finite"));
        }
        if sigma_x * sigma_p < 0.5 * hbar * (1.0 - 1e-12) {
            return Err(invalid(format!(
                "sigma_x·sigma_p = {} is below hbar/2 = {}",
                sigma_x * sigma_p,
                0.5 * hbar
            )));
        }
        Ok(Self {
            hbar,
            kind: StateKind::GaussianSqueezed(GaussianSqueezedParams {
                sigma_x,
                sigma_p,
                mean_x,
                mean_p,
            }),
        })
    }

    /// Minimum-uncertainty squeezed vacuum with position spread `sigma_x`.
    pub fn squeezed_vacuum(sigma_x: f64, hbar: f64) -> Result<Self> {
        check_hbar(hbar)?;
        Self::gaussian(sigma_x, 0.5 * hbar / sigma_x, 0.0, 0.0, hbar)
    }

    /// Harmonic-oscillator ground state, `σ_x² = σ_p² = ħ/2`.
    pub fn ground_state(hbar: f64) -> Result<Self> {
        check_hbar(hbar)?;
        Self::squeezed_vacuum((0.5 * hbar).sqrt(), hbar)
    }

    pub fn truncated_gaussian(kappa: f64, width: f64, hbar: f64) -> Result<Self> {
        check_hbar(hbar)?;
        Ok(Self {
            hbar,
            kind: StateKind::TruncatedGaussian(TruncatedGaussian::new(kappa, width)?),
        })
    }

    /// Wavefunction samples `ψ(x_min + n·spacing)`; renormalized so that
    /// `Σ|ψ|²·spacing = 1`.
    pub fn numeric(x_min: f64, spacing: f64, amplitudes: Vec<Complex64>, hbar: f64) -> Result<Self> {
        check_hbar(hbar)?;
        Ok(Self {
            hbar,
            kind: StateKind::NumericWavefunction(NumericWavefunction::new(x_min, spacing, amplitudes, hbar)?),
        })
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn kind(&self) -> &StateKind {
        &self.kind
    }

    pub fn has_momentum(&self) -> bool {
        !matches!(self.kind, StateKind::TruncatedGaussian(_))
    }

    pub fn position(&self) -> Marginal<'_> {
        match &self.kind {
            StateKind::GaussianSqueezed(g) => Marginal::Normal {
                mean: g.mean_x,
                sd: g.sigma_x,
            },
            StateKind::TruncatedGaussian(t) => Marginal::Truncated(t),
            StateKind::NumericWavefunction(w) => Marginal::Tabulated(w.position()),
        }
    }

    pub fn momentum(&self) -> Result<Marginal<'_>> {
        match &self.kind {
            StateKind::GaussianSqueezed(g) => Ok(Marginal::Normal {
                mean: g.mean_p,
                sd: g.sigma_p,
            }),
            StateKind::TruncatedGaussian(_) => Err(Error::MomentumUndefined(self.kind.name())),
            StateKind::NumericWavefunction(w) => Ok(Marginal::Tabulated(w.momentum())),
        }
    }

    pub fn marginal(&self, axis: Axis) -> Result<Marginal<'_>> {
        match axis {
            Axis::Position => Ok(self.position()),
            Axis::Momentum => self.momentum(),
        }
    }

    pub fn position_pdf(&self, x: f64) -> f64 {
        self.position().pdf(x)
    }

    pub fn momentum_pdf(&self, p: f64) -> Result<f64> {
        Ok(self.momentum()?.pdf(p))
    }

    pub fn exact_variance_x(&self) -> Result<f64> {
        self.position().variance()
    }

    pub fn exact_variance_p(&self) -> Result<f64> {
        self.momentum()?.variance()
    }

    /// `n` i.i.d. position draws; deterministic in `seed`.
    pub fn sample_x(&self, seed: u64, n: usize) -> Result<Vec<f64>> {
        self.position().sample(seed, n)
    }

    pub fn sample_p(&self, seed: u64, n: usize) -> Result<Vec<f64>> {
        self.momentum()?.sample(seed, n)
    }
}

/// One marginal density of a [`StateModel`].
#[derive(Debug, Clone, Copy)]
pub enum Marginal<'a> {
    Normal { mean: f64, sd: f64 },
    Truncated(&'a TruncatedGaussian),
    Tabulated(&'a TabulatedDensity),
}

impl Marginal<'_> {
    pub fn mean(&self) -> f64 {
        match self {
            Marginal::Normal { mean, .. } => *mean,
            Marginal::Truncated(_) => 0.0,
            Marginal::Tabulated(t) => t.mean(),
        }
    }

    /// Exact variance: closed form where available, otherwise quadrature.
    pub fn variance(&self) -> Result<f64> {
        match self {
            Marginal::Normal { sd, .. } => Ok(sd * sd),
            Marginal::Truncated(t) => Ok(t.variance()),
            Marginal::Tabulated(_) => self.variance_by_quadrature(),
        }
    }

    /// Differential entropy `h = −∫ρ ln ρ`; closed form for Gaussians.
    pub fn entropy(&self) -> Result<f64> {
        match self {
            Marginal::Normal { sd, .. } => Ok(0.5 * (2.0 * PI * E * sd * sd).ln()),
            _ => self.entropy_by_quadrature(),
        }
    }

    pub fn tail_interval(&self, mass_tol: f64) -> Result<TailInterval> {
        numerics::tail_bound_interval(self, self.center(), self.scale(), mass_tol, QuadratureSpec::tight())
    }

    pub fn mass_by_quadrature(&self) -> Result<f64> {
        let t = self.tail_interval(DEFAULT_MASS_TOL)?;
        numerics::integrate_functional(self, |_, p| p, t, QuadratureSpec::tight())
    }

    pub fn mean_by_quadrature(&self) -> Result<f64> {
        let t = self.tail_interval(DEFAULT_MASS_TOL)?;
        numerics::integrate_functional(self, |z, p| z * p, t, QuadratureSpec::tight())
    }

    pub fn variance_by_quadrature(&self) -> Result<f64> {
        let t = self.tail_interval(DEFAULT_MASS_TOL)?;
        let spec = QuadratureSpec::tight();
        let m = numerics::integrate_functional(self, |z, p| z * p, t, spec)?;
        numerics::integrate_functional(self, |z, p| (z - m) * (z - m) * p, t, spec)
    }

    pub fn entropy_by_quadrature(&self) -> Result<f64> {
        let t = self.tail_interval(DEFAULT_MASS_TOL)?;
        numerics::integrate_functional(self, |_, p| numerics::neg_p_ln_p(p), t, QuadratureSpec::tight())
    }

    /// Inverse-CDF draws from a tabulated CDF; deterministic in `seed`.
    pub fn sample(&self, seed: u64, n: usize) -> Result<Vec<f64>> {
        if n == 0 {
            return Err(invalid("sample count must be at least 1"));
        }
        Ok(InverseCdfSampler::new(self)?.sample(seed, n))
    }
}

impl Density for Marginal<'_> {
    fn pdf(&self, z: f64) -> f64 {
        match self {
            Marginal::Normal { mean, sd } => {
                let u = (z - mean) / sd;
                (-0.5 * u * u).exp() / (sd * (2.0 * PI).sqrt())
            }
            Marginal::Truncated(t) => t.pdf(z),
            Marginal::Tabulated(t) => t.pdf(z),
        }
    }

    fn center(&self) -> f64 {
        self.mean()
    }

    fn scale(&self) -> f64 {
        match self {
            Marginal::Normal { sd, .. } => *sd,
            Marginal::Truncated(t) => t.variance_by_quadrature().sqrt(),
            Marginal::Tabulated(t) => t.std_dev(),
        }
    }

    fn support(&self) -> Option<(f64, f64)> {
        match self {
            Marginal::Normal { .. } => None,
            Marginal::Truncated(t) => Some((-0.5 * t.width(), 0.5 * t.width())),
            Marginal::Tabulated(t) => Some(t.support()),
        }
    }

    fn breakpoints(&self) -> &[f64] {
        match self {
            Marginal::Tabulated(t) => t.nodes(),
            _ => &[],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const INV_SQRT_PI: f64 = 0.564_189_583_547_756_3;

    #[test]
    fn gaussian_pdfs_at_mean() {
        let s = StateModel::gaussian(0.5f64.sqrt(), 0.5f64.sqrt(), 0.0, 0.0, 1.0).unwrap();
        assert!((s.position_pdf(0.0) - INV_SQRT_PI).abs() < 1e-15);
        assert!((s.momentum_pdf(0.0).unwrap() - INV_SQRT_PI).abs() < 1e-15);
    }

    #[test]
    fn unphysical_gaussian_is_rejected() {
        assert!(StateModel::gaussian(0.1, 0.1, 0.0, 0.0, 1.0).is_err());
        assert!(StateModel::gaussian(1.0, 1.0, 0.0, 0.0, -1.0).is_err());
        assert!(StateModel::gaussian(0.0, 1.0, 0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn truncated_outside_support_is_zero() {
        for kappa in [-2.0, 0.0, 1.0, 5.0] {
            let s = StateModel::truncated_gaussian(kappa, 1.5, 1.0).unwrap();
            assert_eq!(s.position_pdf(1.5), 0.0);
            assert_eq!(s.position_pdf(-0.76), 0.0);
        }
    }

    #[test]
    fn truncated_peak_value() {
        // Oracle: 1 / ∫_{-1}^{1} exp(−x²) by Simpson with 20000 panels.
        let n = 20_000;
        let h = 2.0 / n as f64;
        let mut acc = 0.0;
        for i in 0..=n {
            let x = -1.0 + i as f64 * h;
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += w * (-x * x).exp();
        }
        let oracle = 1.0 / (acc * h / 3.0);
        let s = StateModel::truncated_gaussian(1.0, 2.0, 1.0).unwrap();
        assert!((s.position_pdf(0.0) - oracle).abs() < 1e-12);
        assert!((s.position_pdf(0.0) - 0.669_501_664_491_043_5).abs() < 1e-12);
    }

    #[test]
    fn truncated_has_no_momentum() {
        let s = StateModel::truncated_gaussian(1.0, 2.0, 1.0).unwrap();
        assert!(matches!(s.momentum_pdf(0.0), Err(Error::MomentumUndefined(_))));
        assert!(matches!(s.exact_variance_p(), Err(Error::MomentumUndefined(_))));
    }

    #[test]
    fn exact_variances() {
        let g = StateModel::gaussian(2.0, 1.0, 0.3, 0.0, 1.0).unwrap();
        assert_eq!(g.exact_variance_x().unwrap(), 4.0);

        let flat = StateModel::truncated_gaussian(0.0, 3.0, 1.0).unwrap();
        assert!((flat.exact_variance_x().unwrap() - 9.0 / 12.0).abs() < 1e-14);

        let t = StateModel::truncated_gaussian(1.0, 2.0, 1.0).unwrap();
        let v = t.exact_variance_x().unwrap();
        assert!((v - 0.253_704_101_803_684_5).abs() < 1e-12, "{v}");
    }

    #[test]
    fn closed_form_matches_quadrature_for_positive_kappa() {
        for &(k, w) in &[(1.0, 2.0), (0.1, 3.0), (4.0, 1.0), (20.0, 2.0)] {
            let t = TruncatedGaussian::new(k, w).unwrap();
            let closed = truncated_gaussian_variance(k, w);
            assert!((closed - t.variance_by_quadrature()).abs() < 1e-8, "k={k}");
            let norm_closed = (PI / k).sqrt() * numerics::erf(w * k.sqrt() / 2.0);
            assert!((norm_closed - t.norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn normalization_of_analytic_kinds() {
        let states = [
            StateModel::gaussian(0.3, 4.0, -1.0, 2.0, 1.0).unwrap(),
            StateModel::truncated_gaussian(-1.0, 2.0, 1.0).unwrap(),
            StateModel::truncated_gaussian(3.0, 0.5, 1.0).unwrap(),
        ];
        for s in &states {
            let m = s.position().mass_by_quadrature().unwrap();
            assert!((m - 1.0).abs() < 1e-9, "{} mass {m}", s.kind().name());
        }
        let m = states[0].momentum().unwrap().mass_by_quadrature().unwrap();
        assert!((m - 1.0).abs() < 1e-9);
    }

    #[test]
    fn gaussian_self_consistency() {
        let s = StateModel::gaussian(1.7, 0.4, 0.8, -3.0, 1.0).unwrap();
        let q = s.position().variance_by_quadrature().unwrap();
        assert!((q - s.exact_variance_x().unwrap()).abs() < 1e-9);
        let h = s.position().entropy_by_quadrature().unwrap();
        assert!((h - s.position().entropy().unwrap()).abs() < 1e-9);
    }

    #[test]
    fn sampling_contracts() {
        let g = StateModel::gaussian(1.0, 1.0, 0.0, 0.0, 1.0).unwrap();
        let n = 100_000;
        let xs = g.sample_x(7, n).unwrap();
        let mean = xs.iter().sum::<f64>() / n as f64;
        assert!(mean.abs() < 5.0 / (n as f64).sqrt());

        let t = StateModel::truncated_gaussian(1.0, 2.0, 1.0).unwrap();
        assert!(t.sample_x(3, 5000).unwrap().iter().all(|x| (-1.0..=1.0).contains(x)));

        let a = g.sample_x(42, 1).unwrap();
        let b = g.sample_x(42, 1).unwrap();
        assert_eq!(a, b);
        assert!(g.sample_x(1, 0).is_err());
    }
}
