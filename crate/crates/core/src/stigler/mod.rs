//! Stigler (Bradley-Terry) export-score model fitted by quasi-likelihood.
//!
//! Each unordered pair of journals with `t_ij = c_ij + c_ji > 0` is a binomial
//! contest: `c_ij` of the `t_ij` exchanged citations go to `i`, with
//! `P(i cited) = logistic(mu_i - mu_j)`. Quasi-likelihood point estimates
//! coincide with the binomial maximum-likelihood ones; the dispersion only
//! rescales the variance matrix.

mod envelope;
mod residuals;

pub use envelope::{simulation_envelope, EnvelopeOptions, SimulationEnvelope};
pub use residuals::{journal_residuals, pearson_residuals, ResidualReport};

use nalgebra::{DMatrix, DVector};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::corpus::{CitationMatrix, OTHER_KEY};
use crate::error::{CitexError, Result};
use crate::linalg::{center, laplacian_pinv, laplacian_solve};

/// One unordered contest `i < j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairObservation {
    pub i: usize,
    pub j: usize,
    /// `c_ij`: citations of `i` by `j`.
    pub wins_i: f64,
    /// `t_ij = c_ij + c_ji`.
    pub total: f64,
}

impl PairObservation {
    pub fn wins_j(&self) -> f64 {
        self.total - self.wins_i
    }
}

/// Labelled pair data; only pairs that exchange citations are kept.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparisons {
    pub labels: Vec<String>,
    pub pairs: Vec<PairObservation>,
}

impl Comparisons {
    /// Builds contests from a matrix, ignoring the diagonal and the `OTHER` aggregate.
    pub fn from_matrix(c: &CitationMatrix) -> Comparisons {
        let keep: Vec<usize> = (0..c.len())
            .filter(|&k| c.journals()[k].abbrev != OTHER_KEY)
            .collect();
        let labels = keep.iter().map(|&k| c.journals()[k].abbrev.clone()).collect();
        let mut pairs = Vec::new();
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate().skip(a + 1) {
                let (cij, cji) = (c.get(i, j), c.get(j, i));
                if cij + cji > 0.0 {
                    pairs.push(PairObservation {
                        i: a,
                        j: b,
                        wins_i: cij,
                        total: cij + cji,
                    });
                }
            }
        }
        Comparisons { labels, pairs }
    }

    pub fn new(labels: Vec<String>, pairs: Vec<PairObservation>) -> Result<Comparisons> {
        let n = labels.len();
        let mut kept = Vec::with_capacity(pairs.len());
        for p in pairs {
            if p.i >= n || p.j >= n || p.i == p.j {
                return Err(CitexError::InvalidArgument(format!(
                    "pair ({}, {}) out of range for {n} journals",
                    p.i, p.j
                )));
            }
            if !(p.wins_i >= 0.0 && p.wins_i <= p.total) {
                return Err(CitexError::InvalidArgument(format!(
                    "pair ({}, {}): wins {} outside [0, {}]",
                    p.i, p.j, p.wins_i, p.total
                )));
            }
            if p.total <= 0.0 {
                continue;
            }
            kept.push(if p.i < p.j {
                p
            } else {
                PairObservation {
                    i: p.j,
                    j: p.i,
                    wins_i: p.total - p.wins_i,
                    total: p.total,
                }
            });
        }
        Ok(Comparisons { labels, pairs: kept })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Number of pairs that exchange citations.
    pub fn m(&self) -> usize {
        self.pairs.len()
    }

    pub fn with_pairs(&self, pairs: Vec<PairObservation>) -> Comparisons {
        Comparisons {
            labels: self.labels.clone(),
            pairs,
        }
    }
}

/// `exp(d) / (1 + exp(d))` for `d = mu_i - mu_j`, stable for large |d|.
pub fn win_probability(mu_i: f64, mu_j: f64) -> f64 {
    logistic(mu_i - mu_j)
}

pub(crate) fn logistic(d: f64) -> f64 {
    if d >= 0.0 {
        1.0 / (1.0 + (-d).exp())
    } else {
        let e = d.exp();
        e / (1.0 + e)
    }
}

fn log1pexp(d: f64) -> f64 {
    if d > 0.0 {
        d + (-d).exp().ln_1p()
    } else {
        d.exp().ln_1p()
    }
}

/// Binomial log-likelihood `Σ c_ij (mu_i - mu_j) - t_ij ln(1 + exp(mu_i - mu_j))`.
pub fn loglik(mu: &DVector<f64>, comps: &Comparisons) -> f64 {
    comps
        .pairs
        .iter()
        .map(|p| {
            let d = mu[p.i] - mu[p.j];
            p.wins_i * d - p.total * log1pexp(d)
        })
        .sum()
}

/// Score vector `∂ℓ/∂mu`.
pub fn gradient(mu: &DVector<f64>, comps: &Comparisons) -> DVector<f64> {
    let mut g = DVector::zeros(comps.n());
    for p in &comps.pairs {
        let r = p.wins_i - p.total * logistic(mu[p.i] - mu[p.j]);
        g[p.i] += r;
        g[p.j] -= r;
    }
    g
}

/// Expected information `DᵀV⁻¹D`: a weighted graph Laplacian with weights `t π (1 - π)`.
pub fn information(mu: &DVector<f64>, comps: &Comparisons) -> DMatrix<f64> {
    let n = comps.n();
    let mut lap = DMatrix::zeros(n, n);
    for p in &comps.pairs {
        let pi = logistic(mu[p.i] - mu[p.j]);
        let w = p.total * pi * (1.0 - pi);
        lap[(p.i, p.i)] += w;
        lap[(p.j, p.j)] += w;
        lap[(p.i, p.j)] -= w;
        lap[(p.j, p.i)] -= w;
    }
    lap
}

/// Pearson chi-square `Σ (c - tπ)² / (tπ(1-π))` over contests.
pub fn pearson_chi2(mu: &DVector<f64>, comps: &Comparisons) -> f64 {
    comps
        .pairs
        .iter()
        .map(|p| {
            let pi = logistic(mu[p.i] - mu[p.j]);
            let e = p.total * pi;
            (p.wins_i - e).powi(2) / (e * (1.0 - pi))
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    /// `Σ mu_i = 0`.
    Sum,
    /// `mu_ref = 0`.
    Reference(usize),
}

#[derive(Debug, Clone, Copy)]
pub struct FitOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub constraint: Constraint,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            tol: 1e-10,
            max_iter: 100,
            constraint: Constraint::Sum,
        }
    }
}

#[derive(Debug, Clone)]
pub struct StiglerFit {
    pub labels: Vec<String>,
    pub mu: DVector<f64>,
    /// `phi * (DᵀV⁻¹D)⁻` under the chosen constraint.
    pub vcov: DMatrix<f64>,
    /// `None` when `m - n + 1 <= 0` or the fit is exact; `vcov` then uses `phi = 1`.
    pub phi: Option<f64>,
    pub m: usize,
    pub loglik: f64,
    pub converged: bool,
    pub iterations: usize,
    pub score_norm: f64,
    pub constraint: Constraint,
}

impl StiglerFit {
    pub fn n(&self) -> usize {
        self.mu.len()
    }

    pub fn phi_or_one(&self) -> f64 {
        self.phi.unwrap_or(1.0)
    }

    /// Scores re-expressed under the sum constraint.
    pub fn mu_centered(&self) -> DVector<f64> {
        let mut mu = self.mu.clone();
        center(&mut mu);
        mu
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// `var(mu_i - mu_j)`; invariant to the identification constraint.
    pub fn var_diff(&self, i: usize, j: usize) -> f64 {
        self.vcov[(i, i)] + self.vcov[(j, j)] - 2.0 * self.vcov[(i, j)]
    }
}

/// Connected components of the undirected contest graph, as label lists.
pub fn components(comps: &Comparisons) -> Vec<Vec<usize>> {
    let n = comps.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut c = x;
        while parent[c] != r {
            let next = parent[c];
            parent[c] = r;
            c = next;
        }
        r
    }
    for p in &comps.pairs {
        let (a, b) = (find(&mut parent, p.i), find(&mut parent, p.j));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_of = vec![usize::MAX; n];
    for k in 0..n {
        let r = find(&mut parent, k);
        if root_of[r] == usize::MAX {
            root_of[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[root_of[r]].push(k);
    }
    groups
}

/// Journals whose estimates would diverge: the win graph must be strongly connected.
fn separated_journals(comps: &Comparisons) -> Vec<usize> {
    let n = comps.n();
    let mut g = DiGraph::<(), ()>::with_capacity(n, 2 * comps.m());
    let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for p in &comps.pairs {
        // edge loser -> winner for every citation direction observed
        if p.wins_i > 0.0 {
            g.add_edge(nodes[p.j], nodes[p.i], ());
        }
        if p.wins_j() > 0.0 {
            g.add_edge(nodes[p.i], nodes[p.j], ());
        }
    }
    let sccs = tarjan_scc(&g);
    if sccs.len() <= 1 {
        return Vec::new();
    }
    let largest = sccs.iter().map(Vec::len).max().unwrap_or(0);
    let mut seen_largest = false;
    let mut out = Vec::new();
    for scc in &sccs {
        if scc.len() == largest && !seen_largest {
            seen_largest = true;
            continue;
        }
        out.extend(scc.iter().map(|ix| ix.index()));
    }
    out.sort_unstable();
    out
}

/// Fits export scores by damped Newton (Fisher scoring) with step-halving.
pub fn fit(comps: &Comparisons, opts: &FitOptions) -> Result<StiglerFit> {
    let n = comps.n();
    if n < 2 {
        return Err(CitexError::InvalidArgument("at least two journals are required".into()));
    }
    let comp = components(comps);
    if comp.len() > 1 {
        return Err(CitexError::Disconnected {
            components: comp
                .iter()
                .map(|c| c.iter().map(|&k| comps.labels[k].clone()).collect())
                .collect(),
        });
    }
    let sep = separated_journals(comps);
    if !sep.is_empty() {
        return Err(CitexError::Separation {
            journals: sep.iter().map(|&k| comps.labels[k].clone()).collect(),
        });
    }
    if let Constraint::Reference(r) = opts.constraint {
        if r >= n {
            return Err(CitexError::InvalidArgument(format!("reference index {r} out of range")));
        }
    }

    let scale = comps.pairs.iter().map(|p| p.total).fold(1.0, f64::max);
    let mut mu = DVector::zeros(n);
    let mut ll = loglik(&mu, comps);
    let mut g = gradient(&mu, comps);
    let mut iterations = 0;
    let mut converged = g.amax() <= opts.tol * scale;
    while !converged && iterations < opts.max_iter {
        iterations += 1;
        let lap = information(&mu, comps);
        let step = laplacian_solve(&lap, &g)
            .ok_or_else(|| CitexError::Undefined("Newton step (singular information)".into()))?;
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let trial = &mu + &step * t;
            let ll_trial = loglik(&trial, comps);
            if ll_trial >= ll - 1e-12 * ll.abs().max(1.0) {
                mu = trial;
                ll = ll_trial;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        g = gradient(&mu, comps);
        converged = g.amax() <= opts.tol * scale;
        if !accepted {
            break;
        }
        if mu.amax() > 30.0 && !converged {
            let worst = (0..n)
                .filter(|&k| mu[k].abs() > 30.0)
                .map(|k| comps.labels[k].clone())
                .collect();
            return Err(CitexError::Separation { journals: worst });
        }
    }
    if !converged {
        return Err(CitexError::NotConverged {
            what: "Stigler fit",
            iterations,
            residual: g.amax(),
        });
    }

    let m = comps.m();
    let dof = m as i64 - n as i64 + 1;
    let chi2 = pearson_chi2(&mu, comps);
    let phi = if dof <= 0 {
        log::warn!("no residual degrees of freedom (m - n + 1 = {dof}); dispersion unavailable, using phi = 1");
        None
    } else if chi2 <= 1e-20 * m as f64 {
        log::warn!("exact fit (Pearson chi-square {chi2:e}); dispersion unavailable, using phi = 1");
        None
    } else {
        Some(chi2 / dof as f64)
    };
    let info = information(&mu, comps);
    let mut vcov = laplacian_pinv(&info)? * phi.unwrap_or(1.0);

    if let Constraint::Reference(r) = opts.constraint {
        let shift = mu[r];
        mu.add_scalar_mut(-shift);
        // A = I - e e_rᵀ maps the sum-constrained estimate to the reference one.
        let mut a = DMatrix::<f64>::identity(n, n);
        for i in 0..n {
            a[(i, r)] -= 1.0;
        }
        vcov = &a * vcov * a.transpose();
    }

    Ok(StiglerFit {
        labels: comps.labels.clone(),
        score_norm: g.amax(),
        loglik: ll,
        mu,
        vcov,
        phi,
        m,
        converged,
        iterations,
        constraint: opts.constraint,
    })
}

/// Merges journals `i` and `j` into one; their mutual citations become diagonal.
pub fn merge_journals(c: &CitationMatrix, i: usize, j: usize) -> Result<CitationMatrix> {
    let n = c.len();
    if i == j || i >= n || j >= n {
        return Err(CitexError::InvalidArgument(format!("cannot merge journals {i} and {j}")));
    }
    let (keep, drop) = (i.min(j), i.max(j));
    let old: Vec<usize> = (0..n).filter(|&k| k != drop).collect();
    let group = |k: usize| -> Vec<usize> {
        if k == keep {
            vec![keep, drop]
        } else {
            vec![k]
        }
    };
    let counts = DMatrix::from_fn(n - 1, n - 1, |a, b| {
        let mut s = 0.0;
        for r in group(old[a]) {
            for q in group(old[b]) {
                s += c.get(r, q);
            }
        }
        s
    });
    let mut journals: Vec<_> = old.iter().map(|&k| c.journals()[k].clone()).collect();
    let merged = &mut journals[keep];
    merged.abbrev = format!("{}+{}", c.journals()[keep].abbrev, c.journals()[drop].abbrev);
    merged.full_name = format!("{} + {}", c.journals()[keep].full_name, c.journals()[drop].full_name);
    merged.aliases.clear();
    CitationMatrix::new(journals, counts, c.window_label().to_string())
}
