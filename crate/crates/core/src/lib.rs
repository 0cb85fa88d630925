//! Journal ranking from cross-citation matrices.
//!
//! The central model is the Stigler (Bradley-Terry) export-score model,
//! fitted by quasi-likelihood, with quasi-variances for comparisons and an
//! adaptive ranking lasso for grouping journals. Comparator indices
//! (Eigenfactor, Article Influence, Impact Factors) and correlation-distance
//! clustering work from the same [`corpus::CitationMatrix`].
//!
//! Orientation throughout: `counts[(i, j)]` is the number of citations made
//! by journal `j` (column, citing) to journal `i` (row, cited).

pub mod assess;
pub mod catalog;
pub mod cluster;
pub mod corpus;
pub mod descriptives;
pub mod eigenfactor;
pub mod error;
pub mod linalg;
pub mod quasivar;
pub mod rankinglasso;
pub mod report;
pub mod stigler;

pub use corpus::{CitationMatrix, Journal, MatrixFormat};
pub use error::{CitexError, Result};
pub use stigler::{Comparisons, FitOptions, StiglerFit};
