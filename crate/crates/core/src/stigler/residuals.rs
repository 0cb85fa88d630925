use std::collections::BTreeMap;

use nalgebra::DVector;

use super::{logistic, Comparisons, SimulationEnvelope, StiglerFit};
use crate::error::{CitexError, Result};

#[derive(Debug, Clone)]
pub struct ResidualReport {
    /// `(i, j) -> r_ij`, both orientations.
    pub pearson: BTreeMap<(usize, usize), f64>,
    pub journal_residuals: DVector<f64>,
    pub envelope: Option<SimulationEnvelope>,
}

/// `r_ij = (c_ij - t_ij π_ij) / sqrt(t_ij π_ij (1 - π_ij))`, with `r_ji = -r_ij`.
pub fn pearson_residuals(fit: &StiglerFit, comps: &Comparisons) -> BTreeMap<(usize, usize), f64> {
    let mut out = BTreeMap::new();
    for p in &comps.pairs {
        let pi = logistic(fit.mu[p.i] - fit.mu[p.j]);
        let r = (p.wins_i - p.total * pi) / (p.total * pi * (1.0 - pi)).sqrt();
        out.insert((p.i, p.j), r);
        out.insert((p.j, p.i), -r);
    }
    out
}

/// Standardized regression coefficient of each journal's Pearson residuals
/// on its opponents' scores: `Σ_j mu_j r_ij / sqrt(phi Σ_j mu_j²)`, summing
/// over opponents that exchange citations with `i`.
///
/// Scores are taken under the sum constraint whatever the fit used.
pub fn journal_residuals(fit: &StiglerFit, comps: &Comparisons) -> Result<DVector<f64>> {
    let mu = fit.mu_centered();
    let phi = fit.phi_or_one();
    let n = comps.n();
    let mut num: DVector<f64> = DVector::zeros(n);
    let mut den: DVector<f64> = DVector::zeros(n);
    for p in &comps.pairs {
        let pi = logistic(mu[p.i] - mu[p.j]);
        let r = (p.wins_i - p.total * pi) / (p.total * pi * (1.0 - pi)).sqrt();
        num[p.i] += mu[p.j] * r;
        den[p.i] += mu[p.j] * mu[p.j];
        num[p.j] -= mu[p.i] * r;
        den[p.j] += mu[p.i] * mu[p.i];
    }
    let mut out = DVector::zeros(n);
    for k in 0..n {
        if den[k] <= 0.0 {
            return Err(CitexError::Undefined(format!(
                "journal residual for {} (all opponent scores are zero)",
                comps.labels[k]
            )));
        }
        out[k] = num[k] / (phi * den[k]).sqrt();
    }
    Ok(out)
}
