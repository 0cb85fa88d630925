//! Eigenfactor and Article Influence scores.
//!
//! Self-citations are removed and each citing column is normalized to sum
//! to one. The damped chain `P = λ C̃ + (1 - λ) a eᵀ` sends dangling
//! columns (journals citing no other journal) to the article shares `a`.

use nalgebra::{DMatrix, DVector};

use crate::corpus::CitationMatrix;
use crate::error::{CitexError, Result};

pub const DEFAULT_LAMBDA: f64 = 0.85;

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedCitations {
    /// Column-normalized counts; dangling columns are left at zero.
    pub ctilde: DMatrix<f64>,
    pub dangling: Vec<bool>,
}

pub fn normalize_citations(c: &CitationMatrix) -> NormalizedCitations {
    let mut m = c.counts().clone();
    m.fill_diagonal(0.0);
    let n = m.ncols();
    let mut dangling = vec![false; n];
    for (j, d) in dangling.iter_mut().enumerate() {
        let s: f64 = m.column(j).sum();
        if s > 0.0 {
            m.column_mut(j).unscale_mut(s);
        } else {
            *d = true;
        }
    }
    NormalizedCitations { ctilde: m, dangling }
}

/// `P = λ C̃ + (1 - λ) a eᵀ`, with dangling columns of `C̃` replaced by `a`.
pub fn transition_matrix(nc: &NormalizedCitations, a: &DVector<f64>, lambda: f64) -> Result<DMatrix<f64>> {
    let n = nc.ctilde.nrows();
    if a.len() != n {
        return Err(CitexError::InvalidArgument(format!("{} article shares for {n} journals", a.len())));
    }
    if !(0.0..1.0).contains(&lambda) {
        return Err(CitexError::InvalidArgument(format!("damping {lambda} not in [0, 1)")));
    }
    if (a.sum() - 1.0).abs() > 1e-12 || a.iter().any(|x| *x < 0.0) {
        return Err(CitexError::InvalidArgument(format!(
            "article shares must be a probability vector (sum {})",
            a.sum()
        )));
    }
    let mut p = DMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            let cij = if nc.dangling[j] { a[i] } else { nc.ctilde[(i, j)] };
            p[(i, j)] = lambda * cij + (1.0 - lambda) * a[i];
        }
    }
    Ok(p)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    pub labels: Vec<String>,
    pub psi: DVector<f64>,
    pub ef: DVector<f64>,
    pub ai: DVector<f64>,
    pub a: DVector<f64>,
    pub lambda: f64,
    pub iterations: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct EigenOptions {
    pub lambda: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions {
            lambda: DEFAULT_LAMBDA,
            tol: 1e-12,
            max_iter: 10_000,
        }
    }
}

/// Power iteration from the uniform vector until `‖Pψ - ψ‖₁ < tol`.
pub fn eigenfactor_scores(c: &CitationMatrix, articles: &[f64], opts: &EigenOptions) -> Result<EigenResult> {
    let n = c.len();
    if articles.len() != n {
        return Err(CitexError::InvalidArgument(format!("{} article counts for {n} journals", articles.len())));
    }
    if articles.iter().any(|x| x.is_nan() || *x < 0.0) {
        return Err(CitexError::InvalidArgument("article counts must be non-negative".into()));
    }
    let total: f64 = articles.iter().sum();
    if total <= 0.0 {
        return Err(CitexError::InvalidArgument("at least one article count must be positive".into()));
    }
    let a = DVector::from_iterator(n, articles.iter().map(|x| x / total));
    let nc = normalize_citations(c);
    let p = transition_matrix(&nc, &a, opts.lambda)?;

    let mut psi = DVector::from_element(n, 1.0 / n as f64);
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    while iterations < opts.max_iter {
        iterations += 1;
        let mut next = &p * &psi;
        let s = next.sum();
        next.unscale_mut(s);
        residual = (&next - &psi).lp_norm(1);
        psi = next;
        if residual < opts.tol {
            break;
        }
    }
    if residual >= opts.tol {
        return Err(CitexError::NotConverged { what: "eigenfactor power iteration", iterations, residual });
    }
    residual = (&p * &psi - &psi).lp_norm(1);

    let weighted = &nc.ctilde * &psi;
    let ws = weighted.sum();
    if ws <= 0.0 {
        return Err(CitexError::Undefined("eigenfactor (no citations between journals)".into()));
    }
    let ef = weighted * (100.0 / ws);
    let ai = DVector::from_fn(n, |i, _| if a[i] > 0.0 { 0.01 * ef[i] / a[i] } else { f64::NAN });
    Ok(EigenResult {
        labels: c.abbrevs(),
        psi,
        ef,
        ai,
        a,
        lambda: opts.lambda,
        iterations,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn column_normalization_and_dangling() {
        let c = CitationMatrix::from_rows(&["A", "B", "C"], &[vec![3.0, 0.0, 0.0], vec![2.0, 7.0, 1.0], vec![2.0, 0.0, 3.0]])
            .unwrap();
        let nc = normalize_citations(&c);
        assert_eq!(nc.ctilde.column(0).iter().copied().collect::<Vec<_>>(), vec![0.0, 0.5, 0.5]);
        assert!(nc.dangling[1]);
        assert_eq!(nc.ctilde.column(2).iter().copied().collect::<Vec<_>>(), vec![0.0, 1.0, 0.0]);
        let a = DVector::from_vec(vec![0.2, 0.3, 0.5]);
        let p = transition_matrix(&nc, &a, 0.85).unwrap();
        for j in 0..3 {
            assert!((p.column(j).sum() - 1.0).abs() < 1e-15);
        }
        assert!((p[(1, 1)] - 0.3).abs() < 1e-15);
        let p0 = transition_matrix(&nc, &a, 0.0).unwrap();
        for j in 0..3 {
            assert_eq!(p0.column(j).clone_owned(), a);
        }
        assert!(transition_matrix(&nc, &DVector::from_vec(vec![0.5, 0.5, 0.5]), 0.85).is_err());
    }

    #[test]
    fn symmetric_pair() {
        let c = CitationMatrix::from_rows(&["A", "B"], &[vec![9.0, 5.0], vec![5.0, 1.0]]).unwrap();
        let r = eigenfactor_scores(&c, &[10.0, 10.0], &EigenOptions::default()).unwrap();
        assert!((r.ef[0] - 50.0).abs() < 1e-10 && (r.ef[1] - 50.0).abs() < 1e-10);
        assert!((r.ai[0] - r.ai[1]).abs() < 1e-12);
        assert!((r.ai[0] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn article_counts_shift_psi_not_total() {
        let c = CitationMatrix::from_rows(
            &["A", "B", "C"],
            &[vec![0.0, 4.0, 1.0], vec![3.0, 0.0, 6.0], vec![2.0, 5.0, 0.0]],
        )
        .unwrap();
        let r1 = eigenfactor_scores(&c, &[1.0, 1.0, 1.0], &EigenOptions::default()).unwrap();
        let r2 = eigenfactor_scores(&c, &[2.0, 1.0, 1.0], &EigenOptions::default()).unwrap();
        assert!((r1.psi.clone() - r2.psi.clone()).amax() > 1e-6);
        assert!((r2.ef.sum() - 100.0).abs() < 1e-9);
        assert!(r2.residual < 1e-12);
    }

    #[test]
    fn rejects_bad_articles() {
        let c = CitationMatrix::from_rows(&["A", "B"], &[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(eigenfactor_scores(&c, &[0.0, 0.0], &EigenOptions::default()).is_err());
        assert!(eigenfactor_scores(&c, &[1.0], &EigenOptions::default()).is_err());
    }
}
