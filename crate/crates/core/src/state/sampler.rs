use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::numerics::{self, breaks_within, Density, QuadratureSpec, DEFAULT_MASS_TOL};

const CELLS: usize = 1 << 14;

/// Inverse-transform sampler over a CDF tabulated by quadrature on a
/// uniform cell grid spanning the density's tail interval. Draws are
/// uniform within a cell.
#[derive(Debug, Clone)]
pub struct InverseCdfSampler {
    lo: f64,
    step: f64,
    cdf: Vec<f64>,
}

impl InverseCdfSampler {
    pub fn new<D: Density + ?Sized>(pdf: &D) -> Result<Self> {
        let spec = QuadratureSpec::tight();
        let t = numerics::tail_bound_interval(pdf, pdf.center(), pdf.scale(), DEFAULT_MASS_TOL, spec)?;
        let step = (t.hi - t.lo) / CELLS as f64;
        let cell_spec = QuadratureSpec::new(1e-16, 1e-12, 200)?;
        let mut cdf = Vec::with_capacity(CELLS + 1);
        cdf.push(0.0);
        let mut acc = 0.0;
        for k in 0..CELLS {
            let a = t.lo + k as f64 * step;
            let b = if k + 1 == CELLS { t.hi } else { a + step };
            let breaks = breaks_within(pdf.breakpoints(), a, b);
            acc += numerics::integrate_with_breaks(|z| pdf.pdf(z), a, b, breaks, cell_spec)?
                .value
                .max(0.0);
            cdf.push(acc);
        }
        if !(acc > 0.0) {
            return Err(invalid("density has no mass on its tail interval"));
        }
        Ok(Self { lo: t.lo, step, cdf })
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let total = self.cdf[CELLS];
        let target = rng.random::<f64>() * total;
        let k = (self.cdf.partition_point(|&c| c <= target) - 1).min(CELLS - 1);
        let width = self.cdf[k + 1] - self.cdf[k];
        let frac = if width > 0.0 {
            (target - self.cdf[k]) / width
        } else {
            0.5
        };
        self.lo + (k as f64 + frac) * self.step
    }

    pub fn sample(&self, seed: u64, n: usize) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| self.draw(&mut rng)).collect()
    }
}
