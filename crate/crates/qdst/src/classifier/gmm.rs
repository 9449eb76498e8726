//! One-dimensional Gaussian mixtures fitted by expectation-maximization.
//!
//! Initialization is deterministic: component means start at evenly spaced
//! quantiles of the sorted sample, every variance starts at the sample's
//! maximum-likelihood variance, and weights start uniform. Each iteration
//! computes responsibilities in log space (so far-tail points don't
//! underflow to 0/0) and then re-estimates weights, means and variances;
//! the variance update measures spread around the previous iteration's
//! means, which still increases the likelihood every step (a generalized EM
//! step), so the reported log-likelihood series is non-decreasing. The fit
//! stops when the log-likelihood moves less than `tol` or after `max_iters`
//! iterations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const LN_2PI: f64 = 1.837877066409345483560659472811;

/// One weighted Gaussian of a mixture.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianComponent {
    pub weight: f64,
    pub mean: f64,
    pub variance: f64,
}

impl GaussianComponent {
    fn log_density(&self, x: f64) -> f64 {
        let d = x - self.mean;
        -0.5 * (LN_2PI + self.variance.ln() + d * d / self.variance)
    }
}

/// A fitted one-dimensional Gaussian mixture.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Gmm {
    components: Vec<GaussianComponent>,
}

impl Gmm {
    pub fn components(&self) -> &[GaussianComponent] {
        &self.components
    }

    /// Mixture density at `x`.
    pub fn pdf(&self, x: f64) -> f64 {
        self.components
            .iter()
            .map(|c| c.weight * c.log_density(x).exp())
            .sum()
    }

    /// Average log-density of the samples under this mixture (the quantity
    /// EM ascends, normalized by sample count for scale-free comparison).
    pub fn mean_log_likelihood(&self, samples: &[f64]) -> f64 {
        let total: f64 = samples
            .iter()
            .map(|&x| {
                let logs: Vec<f64> = self
                    .components
                    .iter()
                    .map(|c| c.weight.ln() + c.log_density(x))
                    .collect();
                log_sum_exp(&logs)
            })
            .sum();
        total / samples.len() as f64
    }
}

/// Fit controls; the defaults match the classifier's training loop.
#[derive(Debug, Clone, Copy)]
pub struct EmOptions {
    pub max_iters: usize,
    pub tol: f64,
}

impl Default for EmOptions {
    fn default() -> Self {
        EmOptions {
            max_iters: 200,
            tol: 1e-6,
        }
    }
}

/// What happened during a fit: the per-iteration total log-likelihood (one
/// entry per E-step, evaluated under the parameters entering that
/// iteration), and whether the tolerance was reached before the cap.
#[derive(Debug, Clone)]
pub struct EmTrace {
    pub log_likelihood: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Fits a mixture of `n_components` Gaussians to `samples`.
pub fn fit_gmm(samples: &[f64], n_components: usize, options: EmOptions) -> Result<Gmm> {
    fit_gmm_traced(samples, n_components, options).map(|(gmm, _)| gmm)
}

/// Like [`fit_gmm`], also returning the iteration trace.
pub fn fit_gmm_traced(
    samples: &[f64],
    n_components: usize,
    options: EmOptions,
) -> Result<(Gmm, EmTrace)> {
    if n_components == 0 {
        return Err(Error::ZeroComponents);
    }
    if samples.len() < n_components {
        return Err(Error::TooFewSamples {
            need: n_components,
            got: samples.len(),
        });
    }

    let n = samples.len() as f64;
    let mean: f64 = samples.iter().sum::<f64>() / n;
    let data_variance: f64 = samples
        .iter()
        .map(|&x| (x - mean) * (x - mean))
        .sum::<f64>()
        / n;
    let variance_floor = (1e-6 * data_variance).max(1e-12);

    // deterministic start: means at the (i+1/2)/N quantiles of the sorted
    // sample, shared MLE variance, uniform weights
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("samples are finite"));
    let mut components: Vec<GaussianComponent> = (0..n_components)
        .map(|i| {
            let q = (i as f64 + 0.5) / n_components as f64;
            let index = ((q * sorted.len() as f64) as usize).min(sorted.len() - 1);
            GaussianComponent {
                weight: 1.0 / n_components as f64,
                mean: sorted[index],
                variance: data_variance.max(variance_floor),
            }
        })
        .collect();

    let mut trace = EmTrace {
        log_likelihood: Vec::new(),
        iterations: 0,
        converged: false,
    };
    let mut responsibilities = vec![0.0f64; samples.len() * n_components];

    for _ in 0..options.max_iters {
        // E-step: responsibilities and the total log-likelihood under the
        // current parameters
        let mut log_likelihood = 0.0;
        for (s, &x) in samples.iter().enumerate() {
            let row = &mut responsibilities[s * n_components..(s + 1) * n_components];
            for (k, c) in components.iter().enumerate() {
                row[k] = if c.weight > 0.0 {
                    c.weight.ln() + c.log_density(x)
                } else {
                    f64::NEG_INFINITY
                };
            }
            let lse = log_sum_exp(row);
            log_likelihood += lse;
            for value in row.iter_mut() {
                *value = (*value - lse).exp();
            }
        }
        trace.log_likelihood.push(log_likelihood);
        trace.iterations += 1;

        // convergence is judged on the E-step likelihood series
        let len = trace.log_likelihood.len();
        if len >= 2
            && (trace.log_likelihood[len - 1] - trace.log_likelihood[len - 2]).abs() < options.tol
        {
            trace.converged = true;
            break;
        }

        // M-step; variances measure spread around the pre-update means
        for k in 0..n_components {
            let total: f64 = (0..samples.len())
                .map(|s| responsibilities[s * n_components + k])
                .sum();
            if total < 1e-300 {
                // the component has lost every sample; freeze it rather
                // than divide by zero — its weight is already ~0
                components[k].weight = total / n;
                continue;
            }
            let old_mean = components[k].mean;
            let new_mean = (0..samples.len())
                .map(|s| responsibilities[s * n_components + k] * samples[s])
                .sum::<f64>()
                / total;
            let new_variance = (0..samples.len())
                .map(|s| {
                    let d = samples[s] - old_mean;
                    responsibilities[s * n_components + k] * d * d
                })
                .sum::<f64>()
                / total;
            components[k].weight = total / n;
            components[k].mean = new_mean;
            components[k].variance = new_variance.max(variance_floor);
        }
    }

    Ok((Gmm { components }, trace))
}

/// `ln Σ exp(vᵢ)`, stable for large negative inputs; `-∞` entries drop out.
fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}
