use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{invalid, Result};

/// Piecewise-linear density through `(nodes[i], values[i])` on a uniform
/// grid, zero outside it, scaled to integrate to one.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedDensity {
    nodes: Vec<f64>,
    values: Vec<f64>,
    start: f64,
    step: f64,
    mean: f64,
    std_dev: f64,
}

impl TabulatedDensity {
    pub fn new(start: f64, step: f64, raw: Vec<f64>) -> Result<Self> {
        if raw.len() < 2 {
            return Err(invalid("a tabulated density needs at least two nodes"));
        }
        if !(step > 0.0 && step.is_finite() && start.is_finite()) {
            return Err(invalid(format!(
                "grid must have finite start and positive step, got {start}, {step}"
            )));
        }
        if raw.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
            return Err(invalid("tabulated density values must be finite and non-negative"));
        }
        let nodes: Vec<f64> = (0..raw.len()).map(|i| start + i as f64 * step).collect();
        // Trapezoid rule is exact for the linear interpolant.
        let last = raw.len() - 1;
        let total = step * (raw.iter().sum::<f64>() - 0.5 * (raw[0] + raw[last]));
        if !(total > 0.0) {
            return Err(invalid("tabulated density has zero mass"));
        }
        let values: Vec<f64> = raw.iter().map(|v| v / total).collect();

        // Exact moments of the interpolant on each cell [a, a+h] with end values f0, f1.
        let mut m1 = 0.0;
        for i in 0..last {
            let (a, f0, f1) = (nodes[i], values[i], values[i + 1]);
            m1 += step * (a * (f0 + f1) / 2.0 + step * (f0 + 2.0 * f1) / 6.0);
        }
        let mut var = 0.0;
        for i in 0..last {
            let (a, f0, f1) = (nodes[i] - m1, values[i], values[i + 1]);
            let h = step;
            // ∫_0^h (a+t)² (f0 + (f1−f0) t/h) dt
            var += f0 * (a * a * h + a * h * h + h * h * h / 3.0)
                + (f1 - f0) * (a * a * h / 2.0 + 2.0 * a * h * h / 3.0 + h * h * h / 4.0);
        }
        Ok(Self {
            nodes,
            values,
            start,
            step,
            mean: m1,
            std_dev: if var > 0.0 { var.sqrt() } else { step },
        })
    }

    pub fn pdf(&self, z: f64) -> f64 {
        let last = self.nodes.len() - 1;
        if !(z >= self.start && z <= self.nodes[last]) {
            return 0.0;
        }
        let u = (z - self.start) / self.step;
        let i = (u.floor() as usize).min(last - 1);
        let t = (u - i as f64).clamp(0.0, 1.0);
        self.values[i] * (1.0 - t) + self.values[i + 1] * t
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn support(&self) -> (f64, f64) {
        (self.start, self.nodes[self.nodes.len() - 1])
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn std_dev(&self) -> f64 {
        self.std_dev
    }
}

/// A pure state given by samples of ψ(x) on a uniform grid. The momentum
/// density is `|φ(p)|²` with `φ(p) = (2πħ)^{-1/2} ∫ψ(x) e^{−ipx/ħ} dx`,
/// evaluated by FFT on the conjugate grid `p_m = m·2πħ/(N·spacing)`.
#[derive(Debug, Clone)]
pub struct NumericWavefunction {
    x_min: f64,
    spacing: f64,
    amplitudes: Vec<Complex64>,
    position: TabulatedDensity,
    momentum: TabulatedDensity,
}

impl NumericWavefunction {
    pub fn new(x_min: f64, spacing: f64, mut amplitudes: Vec<Complex64>, hbar: f64) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(invalid("a numeric wavefunction needs at least two samples"));
        }
        if !(spacing > 0.0 && spacing.is_finite() && x_min.is_finite()) {
            return Err(invalid(format!("grid spacing must be positive, got {spacing}")));
        }
        if amplitudes.iter().any(|a| !(a.re.is_finite() && a.im.is_finite())) {
            return Err(invalid("wavefunction amplitudes must be finite"));
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * spacing;
        if !(norm > 0.0) {
            return Err(invalid("wavefunction has zero norm"));
        }
        let scale = norm.sqrt().recip();
        amplitudes.iter_mut().for_each(|a| *a *= scale);

        let position = TabulatedDensity::new(x_min, spacing, amplitudes.iter().map(|a| a.norm_sqr()).collect())?;
        let (p_min, dp, raw_p) = momentum_table(&amplitudes, spacing, hbar);
        let momentum = TabulatedDensity::new(p_min, dp, raw_p)?;
        Ok(Self {
            x_min,
            spacing,
            amplitudes,
            position,
            momentum,
        })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn position(&self) -> &TabulatedDensity {
        &self.position
    }

    pub fn momentum(&self) -> &TabulatedDensity {
        &self.momentum
    }
}

/// `|φ(p_m)|²` for `m = −⌊N/2⌋ … N−1−⌊N/2⌋`, in ascending `p`.
fn momentum_table(psi: &[Complex64], dx: f64, hbar: f64) -> (f64, f64, Vec<f64>) {
    let n = psi.len();
    let mut buf = psi.to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let dp = 2.0 * PI * hbar / (n as f64 * dx);
    let factor = dx * dx / (2.0 * PI * hbar);
    let m_min = -((n / 2) as i64);
    let raw = (0..n as i64)
        .map(|k| {
            let m = m_min + k;
            buf[m.rem_euclid(n as i64) as usize].norm_sqr() * factor
        })
        .collect();
    (m_min as f64 * dp, dp, raw)
}
