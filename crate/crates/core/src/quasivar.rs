//! Quasi-variances for contrasts of export scores.
//!
//! `qvar` is chosen so that `qvar_i + qvar_j ≈ var(mu_i - mu_j)` for every
//! pair, minimizing `Σ_{i<j} [ln(qvar_i + qvar_j) - ln var(mu_i - mu_j)]²`
//! over `qvar = exp(eta)` by damped Gauss-Newton (Levenberg-Marquardt).

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{CitexError, Result};
use crate::stigler::StiglerFit;

#[derive(Debug, Clone)]
pub struct QuasiVarianceSet {
    pub labels: Vec<String>,
    pub qvar: DVector<f64>,
    pub worst_rel_error: f64,
    pub per_pair_rel_error: BTreeMap<(usize, usize), f64>,
    pub objective: f64,
    pub initial_objective: f64,
    pub iterations: usize,
    /// Pairs left out because `var(mu_i - mu_j)` vanished.
    pub excluded: Vec<(usize, usize)>,
}

impl QuasiVarianceSet {
    pub fn qse(&self, i: usize) -> f64 {
        self.qvar[i].sqrt()
    }

    pub fn qse_all(&self) -> Vec<f64> {
        self.qvar.iter().map(|q| q.sqrt()).collect()
    }
}

struct Target {
    i: usize,
    j: usize,
    log_var: f64,
}

fn objective(eta: &DVector<f64>, targets: &[Target]) -> f64 {
    targets
        .iter()
        .map(|t| (log_sum_exp(eta[t.i], eta[t.j]) - t.log_var).powi(2))
        .sum()
}

fn log_sum_exp(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

pub fn quasi_variances(fit: &StiglerFit) -> Result<QuasiVarianceSet> {
    let n = fit.n();
    if n < 2 {
        return Err(CitexError::InvalidArgument("quasi-variances need at least two journals".into()));
    }
    let scale = (0..n).map(|i| fit.vcov[(i, i)].abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut targets = Vec::new();
    let mut excluded = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = fit.var_diff(i, j);
            if v > 1e-14 * scale {
                targets.push(Target { i, j, log_var: v.ln() });
            } else {
                log::warn!(
                    "var({} - {}) = {v:e}; pair excluded from quasi-variance fit",
                    fit.labels[i],
                    fit.labels[j]
                );
                excluded.push((i, j));
            }
        }
    }
    if targets.is_empty() {
        return Err(CitexError::Undefined("quasi-variances (no pair with positive variance)".into()));
    }

    let floor = targets.iter().map(|t| t.log_var.exp()).fold(f64::INFINITY, f64::min) / 2.0;
    let mut eta = DVector::from_fn(n, |i, _| {
        let v = fit.vcov[(i, i)];
        if v > 0.0 { v } else { floor }.ln()
    });
    let initial_objective = objective(&eta, &targets);
    let mut f = initial_objective;
    let mut lambda = 1e-3;
    let mut iterations = 0;
    while iterations < 500 {
        iterations += 1;
        let mut jtj = DMatrix::<f64>::zeros(n, n);
        let mut jtr = DVector::<f64>::zeros(n);
        for t in &targets {
            let r = log_sum_exp(eta[t.i], eta[t.j]) - t.log_var;
            let wi = 1.0 / (1.0 + (eta[t.j] - eta[t.i]).exp());
            let wj = 1.0 - wi;
            jtr[t.i] += wi * r;
            jtr[t.j] += wj * r;
            jtj[(t.i, t.i)] += wi * wi;
            jtj[(t.j, t.j)] += wj * wj;
            jtj[(t.i, t.j)] += wi * wj;
            jtj[(t.j, t.i)] += wi * wj;
        }
        if jtr.amax() < 1e-13 {
            break;
        }
        let mut accepted = None;
        for _ in 0..40 {
            let mut a = jtj.clone();
            for k in 0..n {
                a[(k, k)] += lambda * (1.0 + jtj[(k, k)]);
            }
            let Some(chol) = a.cholesky() else {
                lambda *= 10.0;
                continue;
            };
            let step = chol.solve(&(-&jtr));
            let trial = &eta + &step;
            let ft = objective(&trial, &targets);
            if ft <= f {
                lambda = (lambda / 10.0).max(1e-12);
                accepted = Some((trial, ft, step.amax()));
                break;
            }
            lambda *= 10.0;
        }
        let Some((trial, ft, step_max)) = accepted else {
            break;
        };
        let stalled = (f - ft) <= 1e-15 * (1.0 + f) && step_max < 1e-10;
        eta = trial;
        f = ft;
        if stalled {
            break;
        }
    }

    let qvar = eta.map(f64::exp);
    let mut per_pair_rel_error = BTreeMap::new();
    let mut worst = 0.0f64;
    for t in &targets {
        let v = t.log_var.exp();
        let e = ((qvar[t.i] + qvar[t.j]) - v).abs() / v;
        worst = worst.max(e);
        per_pair_rel_error.insert((t.i, t.j), e);
    }
    Ok(QuasiVarianceSet {
        labels: fit.labels.clone(),
        qvar,
        worst_rel_error: worst,
        per_pair_rel_error,
        objective: f,
        initial_objective,
        iterations,
        excluded,
    })
}

/// `(z_approx, z_exact)` for `mu_i - mu_j`.
pub fn z_test(qv: &QuasiVarianceSet, fit: &StiglerFit, i: usize, j: usize) -> Result<(f64, f64)> {
    let n = fit.n();
    if i >= n || j >= n {
        return Err(CitexError::InvalidArgument(format!("journal index out of range ({i}, {j})")));
    }
    if i == j {
        return Ok((0.0, 0.0));
    }
    let diff = fit.mu[i] - fit.mu[j];
    let approx = qv.qvar[i] + qv.qvar[j];
    let exact = fit.var_diff(i, j);
    if approx <= 0.0 || exact <= 0.0 {
        return Err(CitexError::Undefined(format!(
            "z statistic for {} vs {} (zero variance)",
            fit.labels[i], fit.labels[j]
        )));
    }
    Ok((diff / approx.sqrt(), diff / exact.sqrt()))
}

/// Two-sided normal quantile `z_{(1+level)/2}`.
pub fn normal_multiplier(level: f64) -> Result<f64> {
    if !(level > 0.0 && level < 1.0) {
        return Err(CitexError::InvalidArgument(format!("level {level} not in (0, 1)")));
    }
    let std = Normal::standard();
    Ok(std.inverse_cdf((1.0 + level) / 2.0))
}

/// `mu_i ± z · qse_i` for each journal.
pub fn comparison_intervals(qv: &QuasiVarianceSet, fit: &StiglerFit, level: f64) -> Result<Vec<(f64, f64)>> {
    let z = normal_multiplier(level)?;
    Ok((0..fit.n())
        .map(|i| {
            let h = z * qv.qvar[i].sqrt();
            (fit.mu[i] - h, fit.mu[i] + h)
        })
        .collect())
}
