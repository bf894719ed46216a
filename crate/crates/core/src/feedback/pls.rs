use log::warn;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MIN_SCALE: f64 = 1e-12;

/// Single-response partial least squares fitted by NIPALS on standardized
/// predictors. Stores the final linear map only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlsModel {
    n_predictors: usize,
    /// Indices of predictors with nonzero variance.
    kept: Vec<usize>,
    x_mean: Vec<f64>,
    x_scale: Vec<f64>,
    y_mean: f64,
    /// Coefficients on the standardized kept predictors.
    coef: Vec<f64>,
    components: usize,
}

/// Latent components used when none are requested.
pub fn default_components(predictors: usize, samples: usize) -> usize {
    3.min(predictors).min(samples.saturating_sub(1))
}

impl PlsModel {
    /// Fit on `(x, y)` pairs. `components` is capped at
    /// `min(samples - 1, usable predictors)`.
    pub fn fit(samples: &[(Vec<f64>, f64)], components: Option<usize>) -> Result<Self> {
        let n = samples.len();
        if n < 2 {
            return Err(Error::TooFewSamples { needed: 2, got: n });
        }
        let p = samples[0].0.len();
        if let Some((x, _)) = samples.iter().find(|(x, _)| x.len() != p) {
            return Err(Error::Dimension {
                expected: p,
                actual: x.len(),
            });
        }
        if samples
            .iter()
            .any(|(x, y)| !y.is_finite() || x.iter().any(|v| !v.is_finite()))
        {
            return Err(Error::InvalidFeedback("non-finite training value".into()));
        }

        let mut kept = Vec::new();
        let mut x_mean = Vec::new();
        let mut x_scale = Vec::new();
        for j in 0..p {
            let mean = samples.iter().map(|(x, _)| x[j]).sum::<f64>() / n as f64;
            let var = samples
                .iter()
                .map(|(x, _)| (x[j] - mean).powi(2))
                .sum::<f64>()
                / (n - 1) as f64;
            let sd = var.sqrt();
            if sd > MIN_SCALE {
                kept.push(j);
                x_mean.push(mean);
                x_scale.push(sd);
            } else {
                warn!("dropping predictor {j}: zero variance");
            }
        }
        let y_mean = samples.iter().map(|(_, y)| y).sum::<f64>() / n as f64;

        let q = kept.len();
        let mut x = DMatrix::from_fn(n, q, |i, k| {
            (samples[i].0[kept[k]] - x_mean[k]) / x_scale[k]
        });
        let mut y = DVector::from_fn(n, |i, _| samples[i].1 - y_mean);

        if components == Some(0) {
            return Err(Error::InvalidFeedback(
                "at least one latent component is required".into(),
            ));
        }
        let limit = components
            .unwrap_or_else(|| default_components(q, n))
            .min(q)
            .min(n - 1);

        let mut ws: Vec<DVector<f64>> = Vec::new();
        let mut ps: Vec<DVector<f64>> = Vec::new();
        let mut qs: Vec<f64> = Vec::new();
        for _ in 0..limit {
            let mut w = x.transpose() * &y;
            let norm = w.norm();
            if norm <= MIN_SCALE {
                break;
            }
            w /= norm;
            let t = &x * &w;
            let tt = t.dot(&t);
            if tt <= MIN_SCALE {
                break;
            }
            let load = x.transpose() * &t / tt;
            let yq = y.dot(&t) / tt;
            x -= &t * load.transpose();
            y -= &t * yq;
            ws.push(w);
            ps.push(load);
            qs.push(yq);
        }

        let a = ws.len();
        let coef = if a == 0 {
            vec![0.0; q]
        } else {
            let w = DMatrix::from_columns(&ws);
            let pm = DMatrix::from_columns(&ps);
            let inner = (pm.transpose() * &w)
                .try_inverse()
                .ok_or_else(|| Error::InvalidFeedback("singular PLS loading matrix".into()))?;
            let b = w * inner * DVector::from_vec(qs);
            b.iter().copied().collect()
        };

        Ok(PlsModel {
            n_predictors: p,
            kept,
            x_mean,
            x_scale,
            y_mean,
            coef,
            components: a,
        })
    }

    pub fn n_predictors(&self) -> usize {
        self.n_predictors
    }

    /// Latent components actually extracted.
    pub fn components(&self) -> usize {
        self.components
    }

    /// Unclamped prediction.
    pub fn predict_raw(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n_predictors {
            return Err(Error::Dimension {
                expected: self.n_predictors,
                actual: x.len(),
            });
        }
        Ok(self.y_mean
            + self
                .kept
                .iter()
                .enumerate()
                .map(|(k, &j)| self.coef[k] * (x[j] - self.x_mean[k]) / self.x_scale[k])
                .sum::<f64>())
    }

    /// Prediction clamped to `[0, 1]`.
    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        Ok(self.predict_raw(x)?.clamp(0.0, 1.0))
    }

    /// Coefficients and intercept on the original predictor scale.
    pub fn linear_form(&self) -> (Vec<f64>, f64) {
        let mut beta = vec![0.0; self.n_predictors];
        let mut intercept = self.y_mean;
        for (k, &j) in self.kept.iter().enumerate() {
            beta[j] = self.coef[k] / self.x_scale[k];
            intercept -= beta[j] * self.x_mean[k];
        }
        (beta, intercept)
    }
}
