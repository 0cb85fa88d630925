//! Adaptive ranking lasso over the Stigler model.
//!
//! For a bound `s`, maximizes the Stigler log-likelihood subject to
//! `Σ_{i<j} w_ij |mu_i - mu_j| <= s` and `Σ mu_i = 0`. The solver is an
//! augmented-Lagrangian splitting (ADMM) on `z = D mu`, where `D` is the
//! incidence matrix of the complete journal graph and the `z`-step is an
//! exact projection onto the weighted L1 ball. Detected groups are then
//! re-fitted with the group structure imposed, so tied journals share one
//! exact value.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use crate::error::{CitexError, Result};
use crate::linalg::{center, laplacian_solve};
use crate::stigler::{self, gradient, information, loglik, Comparisons, FitOptions, StiglerFit};

/// Weight used when two unpenalized scores coincide.
pub const WEIGHT_CAP: f64 = 1e8;

/// Adaptive weights `w_ij = 1 / |mu_i - mu_j|` over all pairs `i < j`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptiveWeights {
    n: usize,
    pairs: Vec<(usize, usize)>,
    w: Vec<f64>,
}

impl AdaptiveWeights {
    pub fn from_scores(mu: &DVector<f64>) -> AdaptiveWeights {
        let n = mu.len();
        let pairs = all_pairs(n);
        let w = pairs
            .iter()
            .map(|&(i, j)| {
                let d = (mu[i] - mu[j]).abs();
                if d < 1e-8 {
                    WEIGHT_CAP
                } else {
                    (1.0 / d).min(WEIGHT_CAP)
                }
            })
            .collect();
        AdaptiveWeights { n, pairs, w }
    }

    pub fn uniform(n: usize) -> AdaptiveWeights {
        let pairs = all_pairs(n);
        let w = vec![1.0; pairs.len()];
        AdaptiveWeights { n, pairs, w }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.w[pair_index(self.n, a, b)]
    }

    pub fn to_map(&self) -> BTreeMap<(usize, usize), f64> {
        self.pairs.iter().copied().zip(self.w.iter().copied()).collect()
    }

    /// `Σ_{i<j} w_ij |mu_i - mu_j|`.
    pub fn penalty(&self, mu: &DVector<f64>) -> f64 {
        self.pairs
            .iter()
            .zip(&self.w)
            .map(|(&(i, j), w)| w * (mu[i] - mu[j]).abs())
            .sum()
    }
}

pub fn adaptive_weights(fit: &StiglerFit) -> AdaptiveWeights {
    AdaptiveWeights::from_scores(&fit.mu)
}

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect()
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    // row-major index of (i, j), i < j, in the strict upper triangle
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

#[derive(Debug, Clone, Copy)]
pub struct LassoOptions {
    pub group_tol: f64,
    pub rho0: f64,
    pub rho_factor: f64,
    pub inner_tol: f64,
    pub outer_tol: f64,
    pub max_outer: usize,
}

impl Default for LassoOptions {
    fn default() -> Self {
        LassoOptions {
            group_tol: 1e-4,
            rho0: 1.0,
            rho_factor: 10.0,
            inner_tol: 1e-8,
            outer_tol: 1e-6,
            max_outer: 50_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PathPoint {
    pub s: f64,
    pub mu_s: DVector<f64>,
    /// Groups of tied journals, highest score first.
    pub groups: Vec<Vec<usize>>,
    pub p: usize,
    pub tic: f64,
    pub loglik: f64,
    pub penalty: f64,
    /// Splitting iterations used (0 when the solution is closed-form).
    pub iterations: usize,
    /// Whether the group-structured re-fit was accepted.
    pub refitted: bool,
}

#[derive(Debug, Clone)]
pub struct LassoPath {
    pub labels: Vec<String>,
    pub points: Vec<PathPoint>,
    pub weights: AdaptiveWeights,
    pub selected: usize,
    pub phi: f64,
    pub qle_penalty: f64,
}

impl LassoPath {
    pub fn selected_point(&self) -> &PathPoint {
        &self.points[self.selected]
    }
}

/// `-2 ℓ + 2 phi p`.
pub fn tic(loglik: f64, phi: f64, p: usize) -> f64 {
    -2.0 * loglik + 2.0 * phi * p as f64
}

/// Groups by sorting scores and splitting at gaps of at least `tol`.
pub fn detect_groups(mu: &DVector<f64>, tol: f64) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..mu.len()).collect();
    order.sort_by(|&a, &b| mu[b].total_cmp(&mu[a]).then(a.cmp(&b)));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (k, &i) in order.iter().enumerate() {
        if k > 0 && mu[order[k - 1]] - mu[i] < tol {
            groups.last_mut().expect("non-empty").push(i);
        } else {
            groups.push(vec![i]);
        }
    }
    for g in &mut groups {
        g.sort_unstable();
    }
    groups
}

/// Euclidean projection onto `{z : Σ w_k |z_k| <= s}`.
pub fn project_weighted_l1(v: &[f64], w: &[f64], s: f64) -> Vec<f64> {
    let total: f64 = v.iter().zip(w).map(|(x, w)| w * x.abs()).sum();
    if total <= s {
        return v.to_vec();
    }
    if s <= 0.0 {
        return vec![0.0; v.len()];
    }
    let mut bp: Vec<(f64, usize)> = v
        .iter()
        .zip(w)
        .enumerate()
        .filter(|(_, (x, w))| **w > 0.0 && x.abs() > 0.0)
        .map(|(k, (x, w))| (x.abs() / w, k))
        .collect();
    bp.sort_by(|a, b| a.0.total_cmp(&b.0));
    // h(θ) = Σ_{b_k > θ} (w_k |v_k| - θ w_k²); walk the breakpoints upward.
    let mut swv: f64 = bp.iter().map(|&(_, k)| w[k] * v[k].abs()).sum();
    let mut sww: f64 = bp.iter().map(|&(_, k)| w[k] * w[k]).sum();
    let mut theta = 0.0;
    let mut lo = 0.0;
    for &(b, k) in &bp {
        let cand = (swv - s) / sww;
        if cand <= b && cand >= lo {
            theta = cand;
            break;
        }
        swv -= w[k] * v[k].abs();
        sww -= w[k] * w[k];
        lo = b;
        theta = b;
    }
    v.iter()
        .zip(w)
        .map(|(x, w)| x.signum() * (x.abs() - theta * w).max(0.0))
        .collect()
}

/// Splitting on `z = W D mu`, which turns the `z`-step into a projection
/// onto the plain L1 ball of radius `s`.
struct Splitting<'a> {
    comps: &'a Comparisons,
    weights: &'a AdaptiveWeights,
    /// `Dᵀ W² D`, a Laplacian with edge weights `w_ij²`.
    lap_w2: DMatrix<f64>,
    n: usize,
}

impl<'a> Splitting<'a> {
    fn new(comps: &'a Comparisons, weights: &'a AdaptiveWeights) -> Self {
        let n = weights.n;
        let mut lap_w2 = DMatrix::zeros(n, n);
        for (&(i, j), w) in weights.pairs.iter().zip(&weights.w) {
            let w2 = w * w;
            lap_w2[(i, i)] += w2;
            lap_w2[(j, j)] += w2;
            lap_w2[(i, j)] -= w2;
            lap_w2[(j, i)] -= w2;
        }
        Splitting { comps, weights, lap_w2, n }
    }

    fn apply(&self, mu: &DVector<f64>) -> Vec<f64> {
        self.weights
            .pairs
            .iter()
            .zip(&self.weights.w)
            .map(|(&(i, j), w)| w * (mu[i] - mu[j]))
            .collect()
    }

    fn apply_t(&self, v: &[f64]) -> DVector<f64> {
        let mut out = DVector::zeros(self.n);
        for ((&(i, j), w), x) in self.weights.pairs.iter().zip(&self.weights.w).zip(v) {
            out[i] += w * x;
            out[j] -= w * x;
        }
        out
    }

    /// Minimizes `-ℓ(mu) + (rho/2) ||W D mu - target||²` by Newton with step-halving.
    fn mu_step(&self, mu: &mut DVector<f64>, target: &[f64], rho: f64, tol: f64) -> Result<()> {
        let wt_target = self.apply_t(target);
        let objective = |m: &DVector<f64>| {
            let q: f64 = self.apply(m).iter().zip(target).map(|(a, b)| (a - b).powi(2)).sum();
            -loglik(m, self.comps) + 0.5 * rho * q
        };
        let mut f = objective(mu);
        for _ in 0..50 {
            let grad = -gradient(mu, self.comps) + (&self.lap_w2 * &*mu - &wt_target) * rho;
            if grad.amax() <= tol {
                break;
            }
            let h = information(mu, self.comps) + &self.lap_w2 * rho;
            let step = laplacian_solve(&h, &(-&grad))
                .ok_or_else(|| CitexError::Undefined("lasso Newton step".into()))?;
            let mut t = 1.0;
            let mut moved = false;
            for _ in 0..40 {
                let trial = &*mu + &step * t;
                let ft = objective(&trial);
                if ft <= f + 1e-14 * f.abs().max(1.0) {
                    *mu = trial;
                    f = ft;
                    moved = true;
                    break;
                }
                t *= 0.5;
            }
            if !moved {
                break;
            }
        }
        center(mu);
        Ok(())
    }
}

/// Group-structured re-fit: maximizes ℓ over one value per group, keeping
/// the group order, subject to the (then linear) bound and the sum constraint.
fn refit_groups(
    comps: &Comparisons,
    weights: &AdaptiveWeights,
    groups: &[Vec<usize>],
    s: f64,
    start: &DVector<f64>,
    tol: f64,
) -> Option<DVector<f64>> {
    let n = comps.n();
    let p = groups.len();
    let mut member = vec![0usize; n];
    for (g, grp) in groups.iter().enumerate() {
        for &i in grp {
            member[i] = g;
        }
    }
    let sizes = DVector::from_fn(p, |g, _| groups[g].len() as f64);
    // linear penalty coefficients: groups are ordered high to low
    let mut a = DVector::zeros(p);
    for i in 0..n {
        for j in (i + 1)..n {
            let (gi, gj) = (member[i], member[j]);
            if gi == gj {
                continue;
            }
            let w = weights.get(i, j);
            let (hi, lo) = if gi < gj { (gi, gj) } else { (gj, gi) };
            a[hi] += w;
            a[lo] -= w;
        }
    }
    let expand = |theta: &DVector<f64>| DVector::from_fn(n, |i, _| theta[member[i]]);
    let ll = |theta: &DVector<f64>| loglik(&expand(theta), comps);
    let grad_g = |theta: &DVector<f64>| {
        let g = gradient(&expand(theta), comps);
        DVector::from_fn(p, |h, _| groups[h].iter().map(|&i| g[i]).sum::<f64>())
    };
    let info_g = |theta: &DVector<f64>| {
        let full = information(&expand(theta), comps);
        let mut out = DMatrix::zeros(p, p);
        for i in 0..n {
            for j in 0..n {
                out[(member[i], member[j])] += full[(i, j)];
            }
        }
        out
    };
    let ordered = |theta: &DVector<f64>| (1..p).all(|g| theta[g - 1] > theta[g]);

    let mut theta = DVector::from_fn(p, |g, _| {
        groups[g].iter().map(|&i| start[i]).sum::<f64>() / sizes[g]
    });
    let shift = theta.dot(&sizes) / sizes.sum();
    theta.add_scalar_mut(-shift);

    // Newton inside the affine set defined by `constraints`.
    let solve = |theta0: DVector<f64>, constrained: bool| -> Option<DVector<f64>> {
        let mut theta = theta0;
        let mut cons: Vec<DVector<f64>> = vec![sizes.clone()];
        if constrained {
            cons.push(a.clone());
        }
        let k = cons.len();
        let mut f = ll(&theta);
        for _ in 0..100 {
            let g = grad_g(&theta);
            let h = info_g(&theta);
            let mut kkt = DMatrix::zeros(p + k, p + k);
            kkt.view_mut((0, 0), (p, p)).copy_from(&h);
            let mut rhs = DVector::zeros(p + k);
            rhs.rows_mut(0, p).copy_from(&g);
            for (c, v) in cons.iter().enumerate() {
                for r in 0..p {
                    kkt[(r, p + c)] = v[r];
                    kkt[(p + c, r)] = v[r];
                }
            }
            let sol = kkt.clone().lu().solve(&rhs)?;
            let step = sol.rows(0, p).into_owned();
            // projected gradient: g minus its component along the constraints
            let pg = &g - kkt.view((0, p), (p, k)) * sol.rows(p, k);
            if pg.amax() <= tol {
                return Some(theta);
            }
            let mut t = 1.0;
            let mut moved = false;
            for _ in 0..40 {
                let trial = &theta + &step * t;
                let ft = ll(&trial);
                if ft >= f - 1e-13 * f.abs().max(1.0) {
                    theta = trial;
                    f = ft;
                    moved = true;
                    break;
                }
                t *= 0.5;
            }
            if !moved {
                return Some(theta);
            }
        }
        Some(theta)
    };

    if p == 1 {
        return Some(DVector::zeros(n));
    }

    let free = solve(theta.clone(), false)?;
    if ordered(&free) && a.dot(&free) <= s {
        return Some(expand(&free));
    }

    // place the start on the plane aᵀθ = s, Σ n_g θ_g = 0
    let d = &a - &sizes * (sizes.dot(&a) / sizes.dot(&sizes));
    let ad = a.dot(&d);
    if ad <= 0.0 {
        return None;
    }
    theta += &d * ((s - a.dot(&theta)) / ad);
    let bound = solve(theta, true)?;
    if !ordered(&bound) || (a.dot(&bound) - s).abs() > 1e-8 * s.max(1.0) {
        return None;
    }
    Some(expand(&bound))
}

/// Solves the bounded problem at `s`, warm-started from `warm_start`.
pub fn solve_at_bound(
    comps: &Comparisons,
    weights: &AdaptiveWeights,
    s: f64,
    warm_start: Option<&DVector<f64>>,
    opts: &LassoOptions,
) -> Result<PathPoint> {
    let qle = stigler::fit(comps, &FitOptions::default())?;
    solve_with_qle(comps, weights, s, warm_start, opts, &qle.mu, qle.phi_or_one())
}

fn point(comps: &Comparisons, weights: &AdaptiveWeights, s: f64, mu: DVector<f64>, opts: &LassoOptions, phi: f64) -> PathPoint {
    let groups = detect_groups(&mu, opts.group_tol);
    let ll = loglik(&mu, comps);
    PathPoint {
        s,
        p: groups.len(),
        tic: tic(ll, phi, groups.len()),
        loglik: ll,
        penalty: weights.penalty(&mu),
        mu_s: mu,
        groups,
        iterations: 0,
        refitted: false,
    }
}

fn solve_with_qle(
    comps: &Comparisons,
    weights: &AdaptiveWeights,
    s: f64,
    warm_start: Option<&DVector<f64>>,
    opts: &LassoOptions,
    qle: &DVector<f64>,
    phi: f64,
) -> Result<PathPoint> {
    let n = comps.n();
    if weights.n() != n {
        return Err(CitexError::InvalidArgument(format!(
            "weights cover {} journals, data has {n}",
            weights.n()
        )));
    }
    if s.is_nan() || s < 0.0 {
        return Err(CitexError::InvalidArgument(format!("bound s = {s} must be >= 0")));
    }
    if s == 0.0 {
        return Ok(point(comps, weights, s, DVector::zeros(n), opts, phi));
    }
    if weights.penalty(qle) <= s {
        let mut pt = point(comps, weights, s, qle.clone(), opts, phi);
        pt.refitted = true;
        return Ok(pt);
    }

    // Pairs at the weight cap are tied outright and solved as one journal.
    let class = tie_classes(weights);
    let k = class.iter().copied().max().map_or(0, |m| m + 1);
    let (mu, iterations, refitted) = if k < n {
        let (rc, rw) = reduce(comps, weights, &class, k)?;
        let warm = warm_start.map(|w| collapse(w, &class, k));
        let (rmu, it, rf) = solve_split(&rc, &rw, s, warm.as_ref(), opts)?;
        let mut mu = DVector::from_fn(n, |i, _| rmu[class[i]]);
        center(&mut mu);
        (mu, it, rf)
    } else {
        solve_split(comps, weights, s, warm_start, opts)?
    };
    let mut pt = point(comps, weights, s, mu, opts, phi);
    pt.iterations = iterations;
    pt.refitted = refitted;
    Ok(pt)
}

fn tie_classes(weights: &AdaptiveWeights) -> Vec<usize> {
    let n = weights.n;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (&(i, j), w) in weights.pairs.iter().zip(&weights.w) {
        if *w >= WEIGHT_CAP {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    (0..n)
        .map(|i| {
            let r = find(&mut parent, i);
            if label[r] == usize::MAX {
                label[r] = next;
                next += 1;
            }
            label[r]
        })
        .collect()
}

fn collapse(mu: &DVector<f64>, class: &[usize], k: usize) -> DVector<f64> {
    let mut sum = DVector::zeros(k);
    let mut count = DVector::zeros(k);
    for (i, &c) in class.iter().enumerate() {
        sum[c] += mu[i];
        count[c] += 1.0;
    }
    sum.component_div(&count)
}

fn reduce(
    comps: &Comparisons,
    weights: &AdaptiveWeights,
    class: &[usize],
    k: usize,
) -> Result<(Comparisons, AdaptiveWeights)> {
    let mut agg: BTreeMap<(usize, usize), (f64, f64)> = BTreeMap::new();
    for p in &comps.pairs {
        let (a, b) = (class[p.i], class[p.j]);
        if a == b {
            continue;
        }
        let (key, wins) = if a < b { ((a, b), p.wins_i) } else { ((b, a), p.total - p.wins_i) };
        let e = agg.entry(key).or_insert((0.0, 0.0));
        e.0 += wins;
        e.1 += p.total;
    }
    let mut labels = vec![String::new(); k];
    for (i, &c) in class.iter().enumerate().rev() {
        labels[c] = comps.labels[i].clone();
    }
    let pairs = agg
        .into_iter()
        .map(|((i, j), (wins_i, total))| stigler::PairObservation { i, j, wins_i, total })
        .collect();
    let rc = Comparisons::new(labels, pairs)?;
    let rpairs = all_pairs(k);
    let mut rw = vec![0.0; rpairs.len()];
    for (&(i, j), w) in weights.pairs.iter().zip(&weights.w) {
        let (a, b) = (class[i], class[j]);
        if a != b {
            rw[pair_index(k, a.min(b), a.max(b))] += w;
        }
    }
    Ok((rc, AdaptiveWeights { n: k, pairs: rpairs, w: rw }))
}

/// ADMM followed by the group re-fit. Returns scores, iterations and
/// whether the re-fit was accepted.
fn solve_split(
    comps: &Comparisons,
    weights: &AdaptiveWeights,
    s: f64,
    warm_start: Option<&DVector<f64>>,
    opts: &LassoOptions,
) -> Result<(DVector<f64>, usize, bool)> {
    let n = comps.n();
    let split = Splitting::new(comps, weights);
    let m = weights.pairs.len();
    let ones = vec![1.0; m];
    let mut mu = warm_start.cloned().unwrap_or_else(|| DVector::zeros(n));
    center(&mut mu);
    let mut z = project_weighted_l1(&split.apply(&mu), &ones, s);
    let mut u = vec![0.0; m];
    let mut rho = opts.rho0;
    let scale = comps.pairs.iter().map(|p| p.total).fold(1.0, f64::max);
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let eps_rel = opts.outer_tol;
    let eps_abs = opts.outer_tol * 1e-3;
    let mut iterations = 0;
    let mut last_primal = f64::INFINITY;
    let mut converged = false;
    let mut primal = f64::INFINITY;
    while iterations < opts.max_outer {
        iterations += 1;
        let target: Vec<f64> = z.iter().zip(&u).map(|(a, b)| a - b).collect();
        split.mu_step(&mut mu, &target, rho, opts.inner_tol * scale)?;
        let a = split.apply(&mu);
        let v: Vec<f64> = a.iter().zip(&u).map(|(x, y)| x + y).collect();
        let z_new = project_weighted_l1(&v, &ones, s);
        let dz: Vec<f64> = z_new.iter().zip(&z).map(|(x, y)| x - y).collect();
        z = z_new;
        for k in 0..m {
            u[k] += a[k] - z[k];
        }
        let r: Vec<f64> = a.iter().zip(&z).map(|(x, y)| x - y).collect();
        primal = norm(&r);
        let dual = rho * split.apply_t(&dz).norm();
        let eps_pri = (m as f64).sqrt() * eps_abs + eps_rel * norm(&a).max(norm(&z));
        let eps_dual = (n as f64).sqrt() * eps_abs * scale + eps_rel * rho * split.apply_t(&u).norm();
        if primal <= eps_pri && dual <= eps_dual {
            converged = true;
            break;
        }
        if iterations % 10 == 0 {
            let (rp, rd) = (primal / eps_pri, dual / eps_dual);
            let factor = if rp > 10.0 * rd && primal > 0.25 * last_primal {
                opts.rho_factor
            } else if rd > 10.0 * rp {
                1.0 / opts.rho_factor
            } else {
                1.0
            };
            if factor != 1.0 {
                rho *= factor;
                u.iter_mut().for_each(|x| *x /= factor);
            }
            last_primal = primal;
        }
    }
    if !converged {
        let kkt = -gradient(&mu, comps) + split.apply_t(&u) * rho;
        log::warn!(
            "ranking lasso at s = {s}: no convergence after {iterations} iterations \
             (primal {primal:e}, KKT residual {:e})",
            kkt.amax()
        );
        if primal > 1e3 * eps_rel * s.max(1.0) {
            return Err(CitexError::NotConverged {
                what: "ranking lasso",
                iterations,
                residual: kkt.amax(),
            });
        }
    }

    // Feasible iterate: shrink toward zero until the bound holds.
    let pen = weights.penalty(&mu);
    if pen > s {
        mu *= s / pen;
    }
    let admm_ll = loglik(&mu, comps);
    let groups = detect_groups(&mu, opts.group_tol);
    if let Some(polished) = refit_groups(comps, weights, &groups, s, &mu, opts.inner_tol * scale) {
        let pl = loglik(&polished, comps);
        let feasible = weights.penalty(&polished) <= s * (1.0 + 1e-10) + 1e-12;
        if feasible && pl >= admm_ll - 1e-7 * admm_ll.abs().max(1.0) {
            return Ok((polished, iterations, true));
        }
    }
    log::warn!("group re-fit rejected at s = {s}; reporting the splitting iterate");
    Ok((mu, iterations, false))
}

/// Bounds: `0`, then `n_points - 1` geometric steps up to `1.05 * penalty(QLE)`.
pub fn bound_grid(qle_penalty: f64, n_points: usize) -> Vec<f64> {
    let s_max = 1.05 * qle_penalty;
    if n_points <= 1 {
        return vec![s_max];
    }
    let mut grid = vec![0.0];
    let steps = n_points - 1;
    let s_min = s_max * 1e-3;
    for k in 0..steps {
        let frac = if steps == 1 { 1.0 } else { k as f64 / (steps - 1) as f64 };
        grid.push(s_min * (s_max / s_min).powf(frac));
    }
    grid
}

pub fn trace_path(comps: &Comparisons, fit: &StiglerFit, n_points: usize, opts: &LassoOptions) -> Result<LassoPath> {
    if !fit.converged {
        return Err(CitexError::InvalidArgument("unpenalized fit has not converged".into()));
    }
    let mu_qle = fit.mu_centered();
    let weights = AdaptiveWeights::from_scores(&mu_qle);
    let phi = fit.phi_or_one();
    let qle_penalty = weights.penalty(&mu_qle);
    let grid = bound_grid(qle_penalty, n_points);
    let mut points: Vec<PathPoint> = Vec::with_capacity(grid.len());
    for &s in &grid {
        let warm = points.last().map(|p| p.mu_s.clone());
        let pt = solve_with_qle(comps, &weights, s, warm.as_ref(), opts, &mu_qle, phi)?;
        points.push(pt);
    }
    let selected = points
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.tic.total_cmp(&b.1.tic).then(a.0.cmp(&b.0)))
        .map(|(k, _)| k)
        .unwrap_or(0);
    Ok(LassoPath {
        labels: comps.labels.clone(),
        points,
        weights,
        selected,
        phi,
        qle_penalty,
    })
}
