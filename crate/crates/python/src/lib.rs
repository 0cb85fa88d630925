//! Python bindings: `import citex`.

use citex_core::cluster::{complete_linkage, correlation_distance, cut};
use citex_core::corpus::{exchange_totals, load_matrix};
use citex_core::eigenfactor::{eigenfactor_scores, EigenOptions};
use citex_core::quasivar::{quasi_variances, z_test};
use citex_core::rankinglasso::{trace_path, LassoOptions};
use citex_core::stigler::{self, journal_residuals, Constraint};
use citex_core::{CitexError, Comparisons, FitOptions, MatrixFormat};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn err(e: CitexError) -> PyErr {
    match e {
        CitexError::NotConverged { .. } | CitexError::Undefined(_) => PyRuntimeError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// Directed citation counts; `counts[i][j]` is citations from `j` to `i`.
#[pyclass(frozen)]
struct CitationMatrix {
    inner: citex_core::CitationMatrix,
}

#[pymethods]
impl CitationMatrix {
    #[new]
    fn new(journals: Vec<String>, counts: Vec<Vec<f64>>) -> PyResult<Self> {
        let refs: Vec<&str> = journals.iter().map(String::as_str).collect();
        let inner = citex_core::CitationMatrix::from_rows(&refs, &counts).map_err(err)?;
        Ok(CitationMatrix { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (path, format = "matrix-csv"))]
    fn load(path: &str, format: &str) -> PyResult<Self> {
        let format: MatrixFormat = format.parse().map_err(err)?;
        Ok(CitationMatrix { inner: load_matrix(path, format).map_err(err)? })
    }

    #[getter]
    fn journals(&self) -> Vec<String> {
        self.inner.abbrevs()
    }

    #[getter]
    fn counts(&self) -> Vec<Vec<f64>> {
        let n = self.inner.len();
        (0..n).map(|i| (0..n).map(|j| self.inner.get(i, j)).collect()).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("CitationMatrix({} journals)", self.inner.len())
    }
}

#[pyclass(frozen)]
struct StiglerFit {
    inner: citex_core::StiglerFit,
    comps: Comparisons,
}

#[pymethods]
impl StiglerFit {
    #[getter]
    fn journals(&self) -> Vec<String> {
        self.inner.labels.clone()
    }

    #[getter]
    fn mu(&self) -> Vec<f64> {
        self.inner.mu.iter().copied().collect()
    }

    /// `None` when the dispersion is not estimable.
    #[getter]
    fn phi(&self) -> Option<f64> {
        self.inner.phi
    }

    #[getter]
    fn loglik(&self) -> f64 {
        self.inner.loglik
    }

    #[getter]
    fn vcov(&self) -> Vec<Vec<f64>> {
        let v = &self.inner.vcov;
        (0..v.nrows()).map(|i| v.row(i).iter().copied().collect()).collect()
    }

    fn quasi_se(&self) -> PyResult<Vec<f64>> {
        Ok(quasi_variances(&self.inner).map_err(err)?.qse_all())
    }

    /// `(z_approx, z_exact)` for the difference of two journals.
    fn z_test(&self, a: &str, b: &str) -> PyResult<(f64, f64)> {
        let idx = |k: &str| self.inner.index_of(k).ok_or_else(|| PyValueError::new_err(format!("unknown journal {k:?}")));
        let qv = quasi_variances(&self.inner).map_err(err)?;
        z_test(&qv, &self.inner, idx(a)?, idx(b)?).map_err(err)
    }

    fn journal_residuals(&self) -> PyResult<Vec<f64>> {
        Ok(journal_residuals(&self.inner, &self.comps).map_err(err)?.iter().copied().collect())
    }

    fn __repr__(&self) -> String {
        format!("StiglerFit({} journals, phi={:?})", self.inner.n(), self.inner.phi)
    }
}

/// Fits export scores; `constraint` is `"sum"` or `"ref:ABBREV"`.
#[pyfunction]
#[pyo3(signature = (matrix, constraint = "sum"))]
fn fit(matrix: &CitationMatrix, constraint: &str) -> PyResult<StiglerFit> {
    let comps = Comparisons::from_matrix(&matrix.inner);
    let constraint = match constraint.strip_prefix("ref:") {
        None if constraint == "sum" => Constraint::Sum,
        Some(k) => Constraint::Reference(
            comps.labels.iter().position(|l| l == k).ok_or_else(|| PyValueError::new_err(format!("unknown journal {k:?}")))?,
        ),
        None => return Err(PyValueError::new_err(format!("bad constraint {constraint:?}"))),
    };
    let inner = stigler::fit(&comps, &FitOptions { constraint, ..Default::default() }).map_err(err)?;
    Ok(StiglerFit { inner, comps })
}

#[pyclass(frozen, get_all)]
struct EigenScores {
    journals: Vec<String>,
    eigenfactor: Vec<f64>,
    article_influence: Vec<f64>,
    iterations: usize,
}

#[pyfunction]
#[pyo3(signature = (matrix, articles, damping = 0.85))]
fn eigenfactor(matrix: &CitationMatrix, articles: Vec<f64>, damping: f64) -> PyResult<EigenScores> {
    let m = matrix.inner.without_other();
    let r = eigenfactor_scores(&m, &articles, &EigenOptions { lambda: damping, ..Default::default() }).map_err(err)?;
    Ok(EigenScores {
        journals: r.labels,
        eigenfactor: r.ef.iter().copied().collect(),
        article_influence: r.ai.iter().copied().collect(),
        iterations: r.iterations,
    })
}

/// Complete-linkage clusters of journal names at height `height`.
#[pyfunction]
#[pyo3(signature = (matrix, height = 0.6))]
fn cluster(matrix: &CitationMatrix, height: f64) -> PyResult<Vec<Vec<String>>> {
    let m = matrix.inner.without_other();
    let labels = m.abbrevs();
    let dist = correlation_distance(&exchange_totals(&m), &labels).map_err(err)?;
    let groups = cut(&complete_linkage(&dist), height);
    Ok(groups.into_iter().map(|g| g.into_iter().map(|i| labels[i].clone()).collect()).collect())
}

#[pyclass(frozen, get_all)]
struct LassoResult {
    journals: Vec<String>,
    bounds: Vec<f64>,
    groups: Vec<usize>,
    tic: Vec<f64>,
    path: Vec<Vec<f64>>,
    selected: usize,
    grouped_scores: Vec<f64>,
}

#[pyfunction]
#[pyo3(signature = (matrix, points = 101))]
fn ranking_lasso(matrix: &CitationMatrix, points: usize) -> PyResult<LassoResult> {
    let comps = Comparisons::from_matrix(&matrix.inner);
    let f = stigler::fit(&comps, &FitOptions::default()).map_err(err)?;
    let path = trace_path(&comps, &f, points, &LassoOptions::default()).map_err(err)?;
    Ok(LassoResult {
        journals: path.labels.clone(),
        bounds: path.points.iter().map(|p| p.s).collect(),
        groups: path.points.iter().map(|p| p.p).collect(),
        tic: path.points.iter().map(|p| p.tic).collect(),
        path: path.points.iter().map(|p| p.mu_s.iter().copied().collect()).collect(),
        selected: path.selected,
        grouped_scores: path.selected_point().mu_s.iter().copied().collect(),
    })
}

#[pymodule]
fn citex(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<CitationMatrix>()?;
    m.add_class::<StiglerFit>()?;
    m.add_class::<EigenScores>()?;
    m.add_class::<LassoResult>()?;
    m.add_function(wrap_pyfunction!(fit, m)?)?;
    m.add_function(wrap_pyfunction!(eigenfactor, m)?)?;
    m.add_function(wrap_pyfunction!(cluster, m)?)?;
    m.add_function(wrap_pyfunction!(ranking_lasso, m)?)?;
    Ok(())
}
