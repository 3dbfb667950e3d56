use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use coarse_ur::coarse::{bin_probabilities, BinGrid};
use coarse_ur::numerics::DEFAULT_MASS_TOL;
use coarse_ur::relations::{full_report, hur_bound};
use coarse_ur::state::StateModel;

fn gaussian_state() -> impl Strategy<Value = StateModel> {
    (-1.0..1.0f64, 1.0..4.0f64, -3.0..3.0f64, -3.0..3.0f64, -0.5..0.5f64).prop_map(|(lsx, f, mx, mp, lh)| {
        let hbar = 10f64.powf(lh);
        let sx = 10f64.powf(lsx);
        let sp = f * hbar / (2.0 * sx);
        StateModel::gaussian(sx, sp, mx * sx, mp * sp, hbar).unwrap()
    })
}

// A two-peak superposition sampled on a fine grid.
fn cat_state(separation: f64, phase: f64, n: usize) -> StateModel {
    let half = separation / 2.0 + 10.0;
    let dx = 2.0 * half / n as f64;
    let amps = (0..n)
        .map(|i| {
            let x = -half + i as f64 * dx;
            let g = |c: f64| (-0.5 * (x - c) * (x - c)).exp();
            Complex64::new(g(-separation / 2.0), 0.0) + Complex64::from_polar(g(separation / 2.0), phase)
        })
        .collect();
    StateModel::numeric(-half, dx, amps, 1.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coarse_relations_hold(s in gaussian_state(), lwx in -2.0..2.0f64, lwp in -2.0..2.0f64, ox in 0.0..1.0f64, op in 0.0..1.0f64) {
        let wx = s.exact_variance_x().unwrap().sqrt() * 10f64.powf(lwx);
        let wp = s.exact_variance_p().unwrap().sqrt() * 10f64.powf(lwp);
        let r = full_report(&s, BinGrid::new(wx, ox * wx).unwrap(), BinGrid::new(wp, op * wp).unwrap()).unwrap();
        prop_assert!(r.theorems_hold());
        prop_assert!(r.coarse_hur.lhs >= r.coarse.var_x * r.coarse.var_p * (1.0 - 1e-9));
        prop_assert!(r.hur.unwrap().satisfied && r.bbm.unwrap().satisfied);
    }

    #[test]
    fn offset_shift_by_one_width_relabels_bins(s in gaussian_state(), lw in -1.5..1.5f64, o in 0.0..1.0f64) {
        let px = s.position();
        let w = s.exact_variance_x().unwrap().sqrt() * 10f64.powf(lw);
        let a = bin_probabilities(&px, BinGrid::new(w, o * w).unwrap(), DEFAULT_MASS_TOL).unwrap();
        let b = bin_probabilities(&px, BinGrid::new(w, o * w + w).unwrap(), DEFAULT_MASS_TOL).unwrap();
        for (&j, &p) in a.probs() {
            prop_assert!((b.prob(j - 1) - p).abs() < 1e-12);
        }
        prop_assert!((a.discrete_variance() - b.discrete_variance()).abs() < 1e-9 * a.discrete_variance().max(1e-3));
        prop_assert!((a.discrete_entropy() - b.discrete_entropy()).abs() < 1e-9);
    }

    #[test]
    fn translating_state_and_grid_together_is_invariant(sx in 0.2..5.0f64, shift in -20.0..20.0f64, lw in -1.0..1.0f64, o in 0.0..1.0f64) {
        let w = sx * 10f64.powf(lw);
        let a = StateModel::gaussian(sx, 0.5 / sx, 0.0, 0.0, 1.0).unwrap();
        let b = StateModel::gaussian(sx, 0.5 / sx, shift, 0.0, 1.0).unwrap();
        let da = bin_probabilities(&a.position(), BinGrid::new(w, o * w).unwrap(), DEFAULT_MASS_TOL).unwrap();
        let db = bin_probabilities(&b.position(), BinGrid::new(w, o * w + shift).unwrap(), DEFAULT_MASS_TOL).unwrap();
        prop_assert!((da.discrete_variance() - db.discrete_variance()).abs() < 1e-8 * sx * sx);
        prop_assert!((da.discrete_entropy() - db.discrete_entropy()).abs() < 1e-8);
    }

    #[test]
    fn entropy_decomposition(s in gaussian_state(), lw in -2.0..2.0f64, o in 0.0..1.0f64) {
        let w = s.exact_variance_p().unwrap().sqrt() * 10f64.powf(lw);
        let d = bin_probabilities(&s.momentum().unwrap(), BinGrid::new(w, o * w).unwrap(), DEFAULT_MASS_TOL).unwrap();
        let direct = d.coarse_pdf().entropy_by_integration().unwrap();
        prop_assert!((direct - (d.discrete_entropy() + w.ln())).abs() < 1e-8);
    }
}

#[test]
fn wide_bins_collapse_the_discrete_variance() {
    let s = StateModel::ground_state(1.0).unwrap();
    let sd = 0.5f64.sqrt();
    let mut last = f64::INFINITY;
    for a in [4.0, 8.0, 16.0] {
        let d = bin_probabilities(&s.position(), BinGrid::centered(a * sd).unwrap(), DEFAULT_MASS_TOL).unwrap();
        let v = d.discrete_variance();
        assert!(v < last, "a={a}: {v}");
        // The coarse variance never drops below the exact one.
        assert!(d.coarse_pdf().variance().unwrap() >= sd * sd);
        last = v;
    }
    // Only the central bin carries mass that matters at 16σ.
    assert!(last < 1e-12, "{last}");
}

#[test]
fn narrow_bins_follow_the_grouping_correction() {
    let s = StateModel::ground_state(1.0).unwrap();
    let var = 0.5;
    let h = 0.5 * (2.0 * PI * std::f64::consts::E * var).ln();
    for a in [1.0, 0.5, 0.25] {
        let w = a * var.sqrt();
        let d = bin_probabilities(&s.position(), BinGrid::new(w, 0.37 * w).unwrap(), DEFAULT_MASS_TOL).unwrap();
        // Grouped variance of a smooth density is σ² + w²/12 up to terms exponentially small in σ/w.
        let expected = var + w * w / 12.0;
        assert!(
            (d.discrete_variance() - expected).abs() < 1e-6,
            "a={a}: {}",
            d.discrete_variance()
        );
        assert!((d.discrete_entropy() + w.ln() - h).abs() < w * w, "a={a}");
    }
}

#[test]
fn rho_kappa_sign_flip_over_widths() {
    for width in [1.0, 2.0, 3.0] {
        for kappa in [0.5, 1.0, 2.0] {
            let up = StateModel::truncated_gaussian(kappa, width, 1.0).unwrap();
            let down = StateModel::truncated_gaussian(-kappa, width, 1.0).unwrap();
            let g = BinGrid::centered(width).unwrap();
            let cu = bin_probabilities(&up.position(), g, DEFAULT_MASS_TOL)
                .unwrap()
                .coarse_pdf()
                .variance()
                .unwrap();
            let cd = bin_probabilities(&down.position(), g, DEFAULT_MASS_TOL)
                .unwrap()
                .coarse_pdf()
                .variance()
                .unwrap();
            // A single bin spanning the support: the coarse variance is the flat width²/12.
            assert!((cu - width * width / 12.0).abs() < 1e-12);
            assert!(cu > up.exact_variance_x().unwrap());
            assert!(cd < down.exact_variance_x().unwrap());
        }
    }
}

#[test]
fn numeric_ground_state_refines_to_analytic_moments() {
    let mut last = f64::INFINITY;
    // The momentum grid step is 2πħ/(n·dx); balance it against dx.
    for n in [256, 1024, 4096] {
        let dx = (2.0 * PI / n as f64).sqrt();
        let half = 0.5 * n as f64 * dx;
        let amps = (0..n)
            .map(|i| {
                let x = -half + i as f64 * dx;
                Complex64::new((-0.5 * x * x).exp(), 0.0)
            })
            .collect();
        let s = StateModel::numeric(-half, dx, amps, 1.0).unwrap();
        let pp = s.momentum().unwrap();
        assert!((pp.mass_by_quadrature().unwrap() - 1.0).abs() < 1e-6);
        assert!((s.position().mass_by_quadrature().unwrap() - 1.0).abs() < 1e-6);
        let err = (pp.variance().unwrap() - 0.5).abs() + (s.position().variance().unwrap() - 0.5).abs();
        assert!(err < last, "n={n}: {err}");
        last = err;
    }
    assert!(last < 1e-3, "{last}");
}

#[test]
fn cat_states_satisfy_the_coarse_relations() {
    for (sep, phase) in [(4.0, 0.0), (6.0, PI), (8.0, PI / 2.0)] {
        let s = cat_state(sep, phase, 2048);
        let exact = coarse_ur::relations::exact_moments(&s).unwrap();
        assert!(exact.var_x * exact.var_p >= hur_bound(1.0));
        for w in [0.1, 1.0, 3.0, 10.0] {
            let r = full_report(&s, BinGrid::new(w, 0.2).unwrap(), BinGrid::new(w, 0.1).unwrap()).unwrap();
            assert!(r.theorems_hold(), "sep={sep}, w={w}");
        }
    }
}
