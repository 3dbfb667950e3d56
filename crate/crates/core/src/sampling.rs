//! Finite-statistics measurement simulation: draw samples from a marginal,
//! bin them, and compare against the theoretical bin probabilities.

use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::coarse::{bin_probabilities, BinGrid, DiscreteDist};
use crate::error::{invalid, Result};
use crate::numerics::{Density, DEFAULT_MASS_TOL};
use crate::state::{InverseCdfSampler, Marginal};

/// One simulated measurement run. Samples outside the enumerated bins of
/// the theoretical distribution are counted into the empirical tail mass.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalRun {
    pub n_shots: u64,
    pub seed: u64,
    pub empirical: DiscreteDist,
    pub theoretical: DiscreteDist,
    pub tv_distance: f64,
}

// Same record as a DiscreteDist, plus the run metadata.
impl Serialize for EmpiricalRun {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let dist = serde_json::to_value(&self.empirical).map_err(serde::ser::Error::custom)?;
        let serde_json::Value::Object(fields) = dist else {
            return Err(serde::ser::Error::custom("distribution did not serialize to an object"));
        };
        let mut map = s.serialize_map(Some(fields.len() + 3))?;
        for (k, v) in &fields {
            map.serialize_entry(k, v)?;
        }
        map.serialize_entry("n_shots", &self.n_shots)?;
        map.serialize_entry("seed", &self.seed)?;
        map.serialize_entry("tv_distance", &self.tv_distance)?;
        map.end()
    }
}

fn bin_samples(theoretical: &DiscreteDist, samples: impl Iterator<Item = f64>) -> Result<DiscreteDist> {
    let grid = *theoretical.grid();
    let (first, last) = match (theoretical.probs().keys().next(), theoretical.probs().keys().last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => return Err(invalid("theoretical distribution has no bins")),
    };
    let mut counts: BTreeMap<i64, u64> = (first..=last).map(|j| (j, 0)).collect();
    let mut overflow = 0;
    for z in samples {
        let j = grid.index_of(z);
        match counts.get_mut(&j) {
            Some(c) => *c += 1,
            None => overflow += 1,
        }
    }
    DiscreteDist::from_counts(grid, &counts, overflow)
}

fn run_with(sampler: &InverseCdfSampler, theoretical: &DiscreteDist, n_shots: u64, seed: u64) -> Result<EmpiricalRun> {
    if n_shots == 0 {
        return Err(invalid("n_shots must be at least 1"));
    }
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let empirical = bin_samples(theoretical, (0..n_shots).map(|_| sampler.draw(&mut rng)))?;
    let tv_distance = empirical.tv_distance(theoretical);
    Ok(EmpiricalRun {
        n_shots,
        seed,
        empirical,
        theoretical: theoretical.clone(),
        tv_distance,
    })
}

/// Draws `n_shots` samples from `marginal`, bins them on `grid`, and
/// measures the total-variation distance to the exact bin probabilities.
pub fn simulate_run(marginal: &Marginal<'_>, grid: BinGrid, n_shots: u64, seed: u64) -> Result<EmpiricalRun> {
    let theoretical = bin_probabilities(marginal, grid, DEFAULT_MASS_TOL)?;
    let sampler = InverseCdfSampler::new(marginal)?;
    run_with(&sampler, &theoretical, n_shots, seed)
}

/// `(n, tv_distance)` for each entry of an increasing shot schedule. Run
/// `i` uses seed `seed + i`.
pub fn convergence_study(
    marginal: &Marginal<'_>,
    grid: BinGrid,
    schedule: &[u64],
    seed: u64,
) -> Result<Vec<(u64, f64)>> {
    if schedule.is_empty() {
        return Err(invalid("shot schedule is empty"));
    }
    if schedule.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("shot schedule must be strictly increasing"));
    }
    let theoretical = bin_probabilities(marginal, grid, DEFAULT_MASS_TOL)?;
    let sampler = InverseCdfSampler::new(marginal)?;
    schedule
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            Ok((
                n,
                run_with(&sampler, &theoretical, n, seed.wrapping_add(i as u64))?.tv_distance,
            ))
        })
        .collect()
}

/// Least-squares slope of `ln tv` against `ln n`. Zero distances are skipped.
pub fn log_log_slope(points: &[(u64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(_, tv)| *tv > 0.0)
        .map(|&(n, tv)| ((n as f64).ln(), tv.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Some(sxy / sxx)
}

/// Grid re-centered on the marginal's mean.
pub fn centered_grid(marginal: &Marginal<'_>, width: f64) -> Result<BinGrid> {
    BinGrid::recentered(width, marginal.center())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::StateModel;

    #[test]
    fn single_shot_lands_in_one_bin() {
        let s = StateModel::ground_state(1.0).unwrap();
        let run = simulate_run(&s.position(), BinGrid::centered(1.0).unwrap(), 1, 9).unwrap();
        let ones: Vec<_> = run.empirical.probs().values().filter(|p| **p == 1.0).collect();
        assert_eq!(ones.len(), 1);
        assert_eq!(run.empirical.probs().values().filter(|p| **p > 0.0).count(), 1);
    }

    #[test]
    fn compact_support_single_bin() {
        let s = StateModel::truncated_gaussian(1.0, 2.0, 1.0).unwrap();
        let g = BinGrid::centered(2.0).unwrap();
        let run = simulate_run(&s.position(), g, 2000, 1).unwrap();
        assert_eq!(run.empirical.prob(0), 1.0);
        let study = convergence_study(&s.position(), g, &[10, 100, 1000], 5).unwrap();
        assert!(study.iter().all(|(_, tv)| *tv < 1e-12));
    }

    #[test]
    fn empirical_probabilities_are_count_fractions() {
        let s = StateModel::gaussian(1.0, 1.0, 0.3, 0.0, 1.0).unwrap();
        let n = 1000;
        let run = simulate_run(&s.position(), BinGrid::new(0.4, 0.1).unwrap(), n, 3).unwrap();
        let total: f64 = run.empirical.probs().values().sum::<f64>() + run.empirical.tail_mass();
        assert!((total - 1.0).abs() < 1e-12);
        for p in run.empirical.probs().values() {
            let c = p * n as f64;
            assert!((c - c.round()).abs() < 1e-9);
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let s = StateModel::ground_state(1.0).unwrap();
        let g = BinGrid::centered(0.5).unwrap();
        let a = simulate_run(&s.position(), g, 5000, 11).unwrap();
        let b = simulate_run(&s.position(), g, 5000, 11).unwrap();
        assert_eq!(a, b);
        let c = simulate_run(&s.position(), g, 5000, 12).unwrap();
        assert_ne!(a.empirical, c.empirical);
    }

    #[test]
    fn schedule_validation() {
        let s = StateModel::ground_state(1.0).unwrap();
        let g = BinGrid::centered(1.0).unwrap();
        assert!(convergence_study(&s.position(), g, &[], 0).is_err());
        assert!(convergence_study(&s.position(), g, &[100, 10], 0).is_err());
        assert_eq!(convergence_study(&s.position(), g, &[50], 0).unwrap().len(), 1);
        assert!(simulate_run(&s.position(), g, 0, 0).is_err());
    }

    #[test]
    fn run_serializes_as_dist_plus_metadata() {
        let s = StateModel::ground_state(1.0).unwrap();
        let run = simulate_run(&s.position(), BinGrid::centered(1.0).unwrap(), 100, 2).unwrap();
        let v = serde_json::to_value(&run).unwrap();
        for key in [
            "width",
            "offset",
            "entries",
            "tail_mass",
            "n_shots",
            "seed",
            "tv_distance",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        let back = DiscreteDist::from_json(&v.to_string()).unwrap();
        assert_eq!(back, run.empirical);
    }

    #[test]
    fn slope_of_exact_power_law() {
        let pts: Vec<(u64, f64)> = [100u64, 10_000, 1_000_000]
            .iter()
            .map(|&n| (n, 3.0 / (n as f64).sqrt()))
            .collect();
        assert!((log_log_slope(&pts).unwrap() + 0.5).abs() < 1e-12);
        assert!(log_log_slope(&pts[..1]).is_none());
    }
}
