use nalgebra::{DMatrix, DVector};

use crate::error::{CitexError, Result};

/// Moore-Penrose inverse of a connected graph Laplacian.
///
/// `L` has null space spanned by `e`, so `(L + eeᵀ/n)` is positive definite
/// and `L⁺ = (L + eeᵀ/n)⁻¹ − eeᵀ/n`.
pub fn laplacian_pinv(lap: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = lap.nrows();
    let j = DMatrix::from_element(n, n, 1.0 / n as f64);
    let shifted = lap + &j;
    let chol = shifted
        .cholesky()
        .ok_or_else(|| CitexError::Undefined("inverse of a singular information matrix".into()))?;
    let inv = chol.inverse();
    let mut out = inv - j;
    symmetrize(&mut out);
    Ok(out)
}

/// Solves `L x = b` for `b` summing to zero, returning the zero-sum solution.
pub fn laplacian_solve(lap: &DMatrix<f64>, b: &DVector<f64>) -> Option<DVector<f64>> {
    let n = lap.nrows();
    let shifted = lap + DMatrix::from_element(n, n, 1.0 / n as f64);
    let chol = shifted.cholesky()?;
    let mut x = chol.solve(b);
    let mean = x.mean();
    x.add_scalar_mut(-mean);
    Some(x)
}

pub fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for k in (i + 1)..n {
            let v = 0.5 * (m[(i, k)] + m[(k, i)]);
            m[(i, k)] = v;
            m[(k, i)] = v;
        }
    }
}

pub fn center(v: &mut DVector<f64>) {
    let mean = v.mean();
    v.add_scalar_mut(-mean);
}

pub(crate) fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    if x.len() != y.len() || x.is_empty() {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}
