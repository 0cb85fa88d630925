//! Parametric-bootstrap envelope for sorted journal residuals.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;

use super::{fit, journal_residuals, logistic, Comparisons, FitOptions, PairObservation, StiglerFit};
use crate::error::{CitexError, Result};

#[derive(Debug, Clone, Copy)]
pub struct EnvelopeOptions {
    pub n_sim: usize,
    pub level: f64,
    pub seed: u64,
}

impl Default for EnvelopeOptions {
    fn default() -> Self {
        EnvelopeOptions {
            n_sim: 99,
            level: 0.95,
            seed: 20100101,
        }
    }
}

/// Pointwise band for each order statistic of the journal residuals.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationEnvelope {
    pub level: f64,
    pub n_sim: usize,
    pub n_dropped: usize,
    pub lower: Vec<f64>,
    pub median: Vec<f64>,
    pub upper: Vec<f64>,
}

impl SimulationEnvelope {
    /// Number of sorted observed residuals inside the band.
    pub fn count_inside(&self, observed: &[f64]) -> usize {
        let mut sorted = observed.to_vec();
        sorted.sort_by(f64::total_cmp);
        sorted
            .iter()
            .enumerate()
            .filter(|(k, r)| **r >= self.lower[*k] && **r <= self.upper[*k])
            .count()
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of replicate `r`, independent of scheduling.
pub(crate) fn replicate_seed(master: u64, r: usize) -> u64 {
    splitmix64(master ^ splitmix64(r as u64))
}

/// Linear-interpolation quantile of sorted data.
pub(crate) fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn simulate(comps: &Comparisons, fit: &StiglerFit, seed: u64) -> Comparisons {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mu = fit.mu_centered();
    let pairs = comps
        .pairs
        .iter()
        .map(|p| {
            let trials = p.total.round().max(0.0) as u64;
            let pi = logistic(mu[p.i] - mu[p.j]);
            let wins = Binomial::new(trials, pi)
                .map(|b| b.sample(&mut rng) as f64)
                .unwrap_or(0.0);
            PairObservation {
                i: p.i,
                j: p.j,
                wins_i: wins,
                total: trials as f64,
            }
        })
        .collect();
    comps.with_pairs(pairs)
}

/// Simulates `C*_ij ~ Binomial(t_ij, π̂_ij)`, refits and collects sorted
/// journal residuals. Replicates whose refit fails are dropped and counted.
pub fn simulation_envelope(
    fit_result: &StiglerFit,
    comps: &Comparisons,
    opts: &EnvelopeOptions,
) -> Result<SimulationEnvelope> {
    if !(opts.level > 0.0 && opts.level < 1.0) {
        return Err(CitexError::InvalidArgument(format!("level {} not in (0, 1)", opts.level)));
    }
    let min_sim = ((1.0 / (1.0 - opts.level)) - 1e-9).ceil() as usize - 1;
    if opts.n_sim < min_sim {
        return Err(CitexError::InvalidArgument(format!(
            "n_sim = {} is too small for level {} (need >= {min_sim})",
            opts.n_sim, opts.level
        )));
    }
    let fit_opts = FitOptions::default();
    let replicates: Vec<Option<Vec<f64>>> = (0..opts.n_sim)
        .into_par_iter()
        .map(|r| {
            let sim = simulate(comps, fit_result, replicate_seed(opts.seed, r));
            let refit = fit(&sim, &fit_opts).ok()?;
            let mut res: Vec<f64> = journal_residuals(&refit, &sim).ok()?.iter().copied().collect();
            res.sort_by(f64::total_cmp);
            Some(res)
        })
        .collect();
    let kept: Vec<Vec<f64>> = replicates.iter().flatten().cloned().collect();
    let n_dropped = opts.n_sim - kept.len();
    if kept.is_empty() {
        return Err(CitexError::Undefined("simulation envelope (every replicate failed)".into()));
    }
    if n_dropped > 0 {
        log::warn!("{n_dropped} of {} envelope replicates dropped after refit failure", opts.n_sim);
    }
    let n = comps.n();
    let (plo, phi) = ((1.0 - opts.level) / 2.0, (1.0 + opts.level) / 2.0);
    let mut lower = Vec::with_capacity(n);
    let mut median = Vec::with_capacity(n);
    let mut upper = Vec::with_capacity(n);
    for k in 0..n {
        let mut col: Vec<f64> = kept.iter().map(|r| r[k]).collect();
        col.sort_by(f64::total_cmp);
        lower.push(quantile_sorted(&col, plo));
        median.push(quantile_sorted(&col, 0.5));
        upper.push(quantile_sorted(&col, phi));
    }
    Ok(SimulationEnvelope {
        level: opts.level,
        n_sim: opts.n_sim,
        n_dropped,
        lower,
        median,
        upper,
    })
}
