use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{StateKind, StateModel};
use crate::error::Result;

fn default_hbar() -> f64 {
    1.0
}

/// JSON state record: `{"kind": ..., "hbar": ..., <kind-specific fields>}`.
///
/// ```json
/// {"kind": "gaussian_squeezed", "hbar": 1.0, "sigma_x": 0.5, "sigma_p": 1.0, "mean_x": 0.0, "mean_p": 0.0}
/// {"kind": "truncated_gaussian", "kappa": -1.0, "width": 2.0}
/// {"kind": "numeric_wavefunction", "x_min": -8.0, "spacing": 0.0625, "amplitudes": [[0.0, 0.0], ...]}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateSpec {
    #[serde(default = "default_hbar")]
    pub hbar: f64,
    #[serde(flatten)]
    pub params: StateParamsSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StateParamsSpec {
    GaussianSqueezed {
        sigma_x: f64,
        /// Defaults to the minimum-uncertainty value ħ/(2σ_x).
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sigma_p: Option<f64>,
        #[serde(default)]
        mean_x: f64,
        #[serde(default)]
        mean_p: f64,
    },
    TruncatedGaussian {
        kappa: f64,
        width: f64,
    },
    NumericWavefunction {
        x_min: f64,
        spacing: f64,
        /// `[re, im]` pairs.
        amplitudes: Vec<[f64; 2]>,
    },
}

impl StateSpec {
    pub fn build(&self) -> Result<StateModel> {
        match &self.params {
            StateParamsSpec::GaussianSqueezed {
                sigma_x,
                sigma_p,
                mean_x,
                mean_p,
            } => {
                let sigma_p = sigma_p.unwrap_or(0.5 * self.hbar / sigma_x);
                StateModel::gaussian(*sigma_x, sigma_p, *mean_x, *mean_p, self.hbar)
            }
            StateParamsSpec::TruncatedGaussian { kappa, width } => {
                StateModel::truncated_gaussian(*kappa, *width, self.hbar)
            }
            StateParamsSpec::NumericWavefunction {
                x_min,
                spacing,
                amplitudes,
            } => StateModel::numeric(
                *x_min,
                *spacing,
                amplitudes.iter().map(|[re, im]| Complex64::new(*re, *im)).collect(),
                self.hbar,
            ),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

impl StateModel {
    pub fn from_json(text: &str) -> Result<Self> {
        StateSpec::from_json(text)?.build()
    }

    pub fn to_spec(&self) -> StateSpec {
        let params = match &self.kind {
            StateKind::GaussianSqueezed(g) => StateParamsSpec::GaussianSqueezed {
                sigma_x: g.sigma_x,
                sigma_p: Some(g.sigma_p),
                mean_x: g.mean_x,
                mean_p: g.mean_p,
            },
            StateKind::TruncatedGaussian(t) => StateParamsSpec::TruncatedGaussian {
                kappa: t.kappa(),
                width: t.width(),
            },
            StateKind::NumericWavefunction(w) => StateParamsSpec::NumericWavefunction {
                x_min: w.x_min(),
                spacing: w.spacing(),
                amplitudes: w.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
            },
        };
        StateSpec {
            hbar: self.hbar,
            params,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_each_kind() {
        let g = StateModel::from_json(r#"{"kind":"gaussian_squeezed","sigma_x":0.5}"#).unwrap();
        assert_eq!(g.hbar(), 1.0);
        assert!((g.exact_variance_p().unwrap() - 1.0).abs() < 1e-15);

        let t = StateModel::from_json(r#"{"kind":"truncated_gaussian","hbar":2.0,"kappa":-1,"width":2}"#).unwrap();
        assert_eq!(t.hbar(), 2.0);
        assert!(!t.has_momentum());

        let w = StateModel::from_json(
            r#"{"kind":"numeric_wavefunction","x_min":-1,"spacing":0.5,"amplitudes":[[0,0],[1,0],[0,1],[0,0]]}"#,
        )
        .unwrap();
        assert!(w.has_momentum());
    }

    #[test]
    fn rejects_bad_records() {
        assert!(StateModel::from_json(r#"{"kind":"cat_state"}"#).is_err());
        assert!(StateModel::from_json(r#"{"kind":"truncated_gaussian","kappa":1}"#).is_err());
        assert!(StateModel::from_json(r#"{"kind":"gaussian_squeezed","sigma_x":0.1,"sigma_p":0.1}"#).is_err());
        assert!(StateModel::from_json("not json").is_err());
    }

    #[test]
    fn spec_round_trip() {
        let s = StateModel::gaussian(0.8, 2.0, 0.1, -0.2, 1.5).unwrap();
        let text = serde_json::to_string(&s.to_spec()).unwrap();
        let back = StateModel::from_json(&text).unwrap();
        assert_eq!(back.to_spec(), s.to_spec());
    }
}
