//! Numerical substrate: adaptive Gauss–Kronrod quadrature (finite, with
//! breakpoints, and semi-infinite), the error function, and tail-mass
//! bounds for densities on the real line.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{invalid, Error, Result};

/// Default bound on probability mass left outside enumerated bins.
pub const DEFAULT_MASS_TOL: f64 = 1e-12;

/// Tolerances for [`integrate`]. A result is accepted once the summed error
/// estimate drops below `max(abs_tol, rel_tol * |value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let spec = Self {
            abs_tol,
            rel_tol,
            max_subdivisions,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Tighter tolerances used where bin sums must stay accurate far below
    /// the default tail tolerance.
    pub fn tight() -> Self {
        Self {
            abs_tol: 1e-14,
            rel_tol: 1e-13,
            max_subdivisions: 4000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(invalid(format!(
                "quadrature tolerances must be positive (abs_tol={}, rel_tol={})",
                self.abs_tol, self.rel_tol
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(invalid("max_subdivisions must be at least 1"));
        }
        Ok(())
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// Quadrature result with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub err_est: f64,
}

// Kronrod 15-point abscissae and weights; the Gauss 7-point rule uses the
// odd-indexed abscissae.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    /// `∫|f|` over the segment.
    abs: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

#[allow(clippy::needless_range_loop)]
fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let abs_half = half.abs();

    let fc = f(center);
    let mut res_g = fc * WG[3];
    let mut res_k = fc * WGK[7];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];

    for j in 0..3 {
        let jtw = 2 * j + 1;
        let dx = half * XGK[jtw];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_g += WG[j] * (f1 + f2);
        res_k += WGK[jtw] * (f1 + f2);
        res_abs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    for j in 0..4 {
        let jtwm1 = 2 * j;
        let dx = half * XGK[jtwm1];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        res_k += WGK[jtwm1] * (f1 + f2);
        res_abs += WGK[jtwm1] * (f1.abs() + f2.abs());
    }

    let mean = res_k * 0.5;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_k * half;
    res_abs *= abs_half;
    res_asc *= abs_half;
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Segment {
        a,
        b,
        value,
        err,
        abs: res_abs,
    }
}

/// Adaptive quadrature of `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: QuadratureSpec) -> Result<Integral> {
    integrate_with_breaks(f, a, b, &[], spec)
}

/// Adaptive quadrature with known interior breakpoints (kinks, jumps, peaks).
/// Breakpoints outside `(a, b)` are ignored; order does not matter.
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    spec: QuadratureSpec,
) -> Result<Integral> {
    spec.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(invalid(format!("integration bounds must be finite, got [{a}, {b}]")));
    }
    if !(a < b) {
        return Err(invalid(format!("integration requires a < b, got [{a}, {b}]")));
    }

    let mut points: Vec<f64> = Vec::with_capacity(breaks.len() + 2);
    points.push(a);
    points.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    points.push(b);
    points.sort_by(f64::total_cmp);
    points.dedup();

    let mut heap = BinaryHeap::with_capacity(points.len() + 16);
    let mut frozen: Vec<Segment> = Vec::new();
    let mut value = 0.0;
    let mut err = 0.0;
    let mut abs = 0.0;
    for w in points.windows(2) {
        let seg = kronrod15(&f, w[0], w[1]);
        value += seg.value;
        err += seg.err;
        abs += seg.abs;
        heap.push(seg);
    }
    // Each segment's estimate is floored at 50ε∫|f|, so no subdivision can
    // get below the summed floor; accept anything within twice of it.
    let target = |value: f64, abs: f64| spec.target(value).max(100.0 * f64::EPSILON * abs);

    let mut subdivisions = heap.len();
    loop {
        if err <= target(value, abs) {
            break;
        }
        if subdivisions >= spec.max_subdivisions.max(points.len()) {
            return Err(Error::ToleranceNotMet {
                value: resum(&heap, &frozen).0,
                err_est: err,
            });
        }
        let Some(worst) = heap.pop() else {
            // Every remaining segment is at floating-point resolution.
            let (value, err) = resum(&heap, &frozen);
            if err <= target(value, abs) {
                return Ok(Integral { value, err_est: err });
            }
            return Err(Error::ToleranceNotMet { value, err_est: err });
        };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            frozen.push(worst);
            continue;
        }
        let left = kronrod15(&f, worst.a, mid);
        let right = kronrod15(&f, mid, worst.b);
        value += left.value + right.value - worst.value;
        err += left.err + right.err - worst.err;
        abs += left.abs + right.abs - worst.abs;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
    }

    let (value, err_est) = resum(&heap, &frozen);
    Ok(Integral { value, err_est })
}

fn resum(heap: &BinaryHeap<Segment>, frozen: &[Segment]) -> (f64, f64) {
    heap.iter()
        .chain(frozen)
        .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.err))
}

/// `∫_{b}^{∞} f`, mapped onto `[0, 1)` with `x = b + scale·t/(1−t)`.
pub fn integrate_upper_tail<F: Fn(f64) -> f64>(f: F, b: f64, scale: f64, spec: QuadratureSpec) -> Result<Integral> {
    check_scale(scale)?;
    integrate(
        |t| {
            let s = 1.0 - t;
            f(b + scale * t / s) * scale / (s * s)
        },
        0.0,
        1.0,
        spec,
    )
}

/// `∫_{−∞}^{a} f`, mirrored version of [`integrate_upper_tail`].
pub fn integrate_lower_tail<F: Fn(f64) -> f64>(f: F, a: f64, scale: f64, spec: QuadratureSpec) -> Result<Integral> {
    check_scale(scale)?;
    integrate(
        |t| {
            let s = 1.0 - t;
            f(a - scale * t / s) * scale / (s * s)
        },
        0.0,
        1.0,
        spec,
    )
}

fn check_scale(scale: f64) -> Result<()> {
    if scale > 0.0 && scale.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("tail scale must be positive and finite, got {scale}")))
    }
}

/// The error function. Odd symmetry holds exactly.
pub fn erf(x: f64) -> f64 {
    if x < 0.0 {
        -libm::erf(-x)
    } else {
        libm::erf(x)
    }
}

/// A probability density on the real line, with the hints quadrature needs
/// to find its mass.
pub trait Density: Sync {
    fn pdf(&self, z: f64) -> f64;

    /// A point near the bulk of the mass (the mean, where known).
    fn center(&self) -> f64;

    /// Characteristic spread (the standard deviation, where known).
    fn scale(&self) -> f64;

    /// Compact support, if the density vanishes outside a known interval.
    fn support(&self) -> Option<(f64, f64)> {
        None
    }

    /// Sorted points where the density is not smooth.
    fn breakpoints(&self) -> &[f64] {
        &[]
    }
}

impl<D: Density + ?Sized> Density for &D {
    fn pdf(&self, z: f64) -> f64 {
        (**self).pdf(z)
    }
    fn center(&self) -> f64 {
        (**self).center()
    }
    fn scale(&self) -> f64 {
        (**self).scale()
    }
    fn support(&self) -> Option<(f64, f64)> {
        (**self).support()
    }
    fn breakpoints(&self) -> &[f64] {
        (**self).breakpoints()
    }
}

/// Wraps a closure as a [`Density`].
pub struct FnDensity<F> {
    f: F,
    center: f64,
    scale: f64,
    support: Option<(f64, f64)>,
}

impl<F: Fn(f64) -> f64 + Sync> FnDensity<F> {
    pub fn new(f: F, center: f64, scale: f64) -> Self {
        Self {
            f,
            center,
            scale,
            support: None,
        }
    }

    pub fn with_support(mut self, lo: f64, hi: f64) -> Self {
        self.support = Some((lo, hi));
        self
    }
}

impl<F: Fn(f64) -> f64 + Sync> Density for FnDensity<F> {
    fn pdf(&self, z: f64) -> f64 {
        (self.f)(z)
    }
    fn center(&self) -> f64 {
        self.center
    }
    fn scale(&self) -> f64 {
        self.scale
    }
    fn support(&self) -> Option<(f64, f64)> {
        self.support
    }
}

/// Sub-slice of sorted `breaks` lying strictly inside `(a, b)`.
pub fn breaks_within(breaks: &[f64], a: f64, b: f64) -> &[f64] {
    let lo = breaks.partition_point(|&x| x <= a);
    let hi = breaks.partition_point(|&x| x < b);
    &breaks[lo..hi.max(lo)]
}

/// An interval carrying all but `outside_mass` of a density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailInterval {
    pub lo: f64,
    pub hi: f64,
    pub outside_mass: f64,
}

const MAX_EXPANSIONS: u32 = 48;

/// Smallest symmetric interval `center ± scale·2^k` whose outside mass is at
/// most `mass_tol`. Densities with compact support return the support.
pub fn tail_bound_interval<D: Density + ?Sized>(
    pdf: &D,
    center: f64,
    scale: f64,
    mass_tol: f64,
    spec: QuadratureSpec,
) -> Result<TailInterval> {
    if !(mass_tol > 0.0) {
        return Err(invalid(format!("mass_tol must be positive, got {mass_tol}")));
    }
    check_scale(scale)?;
    if let Some((lo, hi)) = pdf.support() {
        return Ok(TailInterval {
            lo,
            hi,
            outside_mass: 0.0,
        });
    }
    let mut half = scale;
    let mut outside = f64::INFINITY;
    for _ in 0..MAX_EXPANSIONS {
        let lo = center - half;
        let hi = center + half;
        outside = outside_mass(pdf, lo, hi, scale, spec)?;
        if outside <= mass_tol {
            return Ok(TailInterval {
                lo,
                hi,
                outside_mass: outside,
            });
        }
        half *= 2.0;
    }
    Err(Error::ToleranceNotMet {
        value: outside,
        err_est: outside,
    })
}

/// Mass of `pdf` outside `[lo, hi]`.
pub fn outside_mass<D: Density + ?Sized>(pdf: &D, lo: f64, hi: f64, scale: f64, spec: QuadratureSpec) -> Result<f64> {
    if let Some((s_lo, s_hi)) = pdf.support() {
        let mut m = 0.0;
        if s_lo < lo {
            m += integrate_with_breaks(|z| pdf.pdf(z), s_lo, lo.min(s_hi), pdf.breakpoints(), spec)?.value;
        }
        if s_hi > hi {
            m += integrate_with_breaks(|z| pdf.pdf(z), hi.max(s_lo), s_hi, pdf.breakpoints(), spec)?.value;
        }
        return Ok(m);
    }
    let left = integrate_lower_tail(|z| pdf.pdf(z), lo, scale, spec)?;
    let right = integrate_upper_tail(|z| pdf.pdf(z), hi, scale, spec)?;
    Ok(left.value + right.value)
}

/// `∫ g(z, pdf(z)) dz` over the whole line: the tail interval with
/// breakpoints, plus both semi-infinite tails when the support is unbounded.
pub fn integrate_functional<D, G>(pdf: &D, g: G, interval: TailInterval, spec: QuadratureSpec) -> Result<f64>
where
    D: Density + ?Sized,
    G: Fn(f64, f64) -> f64,
{
    let h = |z: f64| g(z, pdf.pdf(z));
    let mut breaks: Vec<f64> = breaks_within(pdf.breakpoints(), interval.lo, interval.hi).to_vec();
    breaks.push(pdf.center());
    let mut total = integrate_with_breaks(h, interval.lo, interval.hi, &breaks, spec)?.value;
    if pdf.support().is_none() {
        let scale = pdf.scale();
        total += integrate_lower_tail(h, interval.lo, scale, spec)?.value;
        total += integrate_upper_tail(h, interval.hi, scale, spec)?.value;
    }
    Ok(total)
}

/// `−p ln p` with the `0 ln 0 = 0` convention.
pub fn neg_p_ln_p(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.ln()
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    // Independent Maclaurin series: erf x = 2/√π Σ (−1)^n x^(2n+1) / (n! (2n+1)).
    fn erf_series(x: f64) -> f64 {
        let mut sum = 0.0;
        let mut term = x;
        for n in 0..60 {
            sum += term / (2 * n + 1) as f64;
            term *= -x * x / (n + 1) as f64;
        }
        2.0 / PI.sqrt() * sum
    }

    fn std_normal(x: f64) -> f64 {
        (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
    }

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| x * x, 0.0, 1.0, QuadratureSpec::default()).unwrap();
        assert!((r.value - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn gaussian_integral_matches_erf() {
        let r = integrate(|x| (-x * x).exp(), -1.0, 1.0, QuadratureSpec::default()).unwrap();
        let expected = PI.sqrt() * erf(1.0);
        assert!((r.value - expected).abs() < 1e-12, "{} vs {}", r.value, expected);
        assert!((r.value - 1.493_648_265_624_854).abs() < 1e-12);
    }

    #[test]
    fn degenerate_interval_is_rejected() {
        let b = 1.0;
        let err = integrate(|x| x, b - 0.0, b, QuadratureSpec::default()).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter(_)));
        assert!(integrate(|x| x, 2.0, 1.0, QuadratureSpec::default()).is_err());
    }

    #[test]
    fn invalid_spec_is_rejected() {
        assert!(QuadratureSpec::new(0.0, 1e-8, 10).is_err());
        assert!(QuadratureSpec::new(1e-8, 1e-8, 0).is_err());
    }

    #[test]
    fn budget_exhaustion_reports_best_estimate() {
        let spec = QuadratureSpec::new(1e-15, 1e-15, 2).unwrap();
        match integrate(|x: f64| x.abs().sqrt().recip().min(1e8), -1.0, 1.3, spec) {
            Err(Error::ToleranceNotMet { value, err_est }) => {
                assert!(value.is_finite() && err_est > 0.0);
            }
            other => panic!("expected ToleranceNotMet, got {other:?}"),
        }
    }

    #[test]
    fn breakpoints_handle_kinks() {
        let f = |x: f64| (x - 0.3).abs();
        let exact = 0.5 * 0.3 * 0.3 + 0.5 * 0.7 * 0.7;
        let r = integrate_with_breaks(f, 0.0, 1.0, &[0.3, 5.0, -1.0], QuadratureSpec::tight()).unwrap();
        assert!((r.value - exact).abs() < 1e-15);
    }

    #[test]
    fn semi_infinite_normal_tail() {
        let spec = QuadratureSpec::tight();
        let upper = integrate_upper_tail(std_normal, 2.0, 1.0, spec).unwrap().value;
        let expected = 0.5 * (1.0 - erf(2.0 / 2f64.sqrt()));
        assert!((upper - expected).abs() < 1e-14);
        let lower = integrate_lower_tail(std_normal, -2.0, 1.0, spec).unwrap().value;
        assert!((lower - expected).abs() < 1e-14);
    }

    #[test]
    fn erf_values() {
        assert_eq!(erf(0.0), 0.0);
        assert!((erf(10.0) - 1.0).abs() <= 1e-15);
        assert!((erf(1.0) - 0.842_700_792_9).abs() < 1e-10);
        for &x in &[0.1, 0.5, 1.0, 1.5, 2.0, 3.0] {
            assert!((erf(x) - erf_series(x)).abs() < 1e-12, "x={x}");
        }
    }

    #[test]
    fn erf_is_odd() {
        for &x in &[1e-8, 0.3, 1.0, 2.5, 7.0] {
            assert_eq!(erf(-x), -erf(x));
        }
    }

    #[test]
    fn normal_tail_interval() {
        let d = FnDensity::new(std_normal, 0.0, 1.0);
        let t = tail_bound_interval(&d, 0.0, 1.0, 1e-9, QuadratureSpec::default()).unwrap();
        assert!(t.lo <= -6.1 && t.hi >= 6.1, "{t:?}");
        assert!(t.outside_mass <= 1e-9);
        assert!(t.lo <= 0.0 && t.hi >= 0.0);
    }

    #[test]
    fn compact_support_interval() {
        let d = FnDensity::new(|x: f64| if x.abs() <= 1.0 { 0.5 } else { 0.0 }, 0.0, 0.5).with_support(-1.0, 1.0);
        let t = tail_bound_interval(&d, 0.0, 0.5, 1e-12, QuadratureSpec::default()).unwrap();
        assert!(t.lo <= -1.0 && t.hi >= 1.0);
        assert_eq!(t.outside_mass, 0.0);
    }

    #[test]
    fn zero_mass_tol_is_rejected() {
        let d = FnDensity::new(std_normal, 0.0, 1.0);
        assert!(tail_bound_interval(&d, 0.0, 1.0, 0.0, QuadratureSpec::default()).is_err());
    }

    #[test]
    fn breaks_within_is_strict() {
        let b = [0.0, 1.0, 2.0, 3.0];
        assert_eq!(breaks_within(&b, 1.0, 3.0), &[2.0]);
        assert_eq!(breaks_within(&b, 0.5, 2.5), &[1.0, 2.0]);
        assert!(breaks_within(&b, 5.0, 6.0).is_empty());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn additive_under_splitting(a in -3.0f64..0.0, len in 0.1f64..5.0, frac in 0.05f64..0.95) {
                let b = a + len;
                let m = a + frac * len;
                let f = |x: f64| (x.sin() + 2.0) * (-0.1 * x * x).exp();
                let spec = QuadratureSpec::default();
                let whole = integrate(f, a, b, spec).unwrap().value;
                let parts = integrate(f, a, m, spec).unwrap().value + integrate(f, m, b, spec).unwrap().value;
                prop_assert!((whole - parts).abs() <= 3e-10);
            }

            #[test]
            fn erf_odd(x in -8.0f64..8.0) {
                prop_assert_eq!(erf(-x), -erf(x));
            }

            #[test]
            fn tail_interval_contains_mean(mu in -50.0f64..50.0, sigma in 0.01f64..20.0) {
                let d = FnDensity::new(
                    move |x: f64| (-0.5 * ((x - mu) / sigma).powi(2)).exp() / (sigma * (2.0 * PI).sqrt()),
                    mu,
                    sigma,
                );
                let t = tail_bound_interval(&d, mu, sigma, 1e-12, QuadratureSpec::tight()).unwrap();
                prop_assert!(t.lo <= mu && mu <= t.hi);
                prop_assert!(t.outside_mass <= 1e-12);
            }
        }
    }
}
