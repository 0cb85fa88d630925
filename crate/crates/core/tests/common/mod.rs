#![allow(dead_code)]

use citex_core::stigler::{Comparisons, PairObservation};
use citex_core::CitationMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn labels(n: usize) -> Vec<String> {
    (0..n).map(|k| format!("J{k:02}")).collect()
}

pub fn comps(n: usize, pairs: &[(usize, usize, f64, f64)]) -> Comparisons {
    let pairs = pairs
        .iter()
        .map(|&(i, j, wins_i, total)| PairObservation { i, j, wins_i, total })
        .collect();
    Comparisons::new(labels(n), pairs).unwrap()
}

/// Complete design with binomial-like counts around planted scores.
pub fn planted(scores: &[f64], total: f64, seed: u64) -> Comparisons {
    let n = scores.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let d: f64 = scores[i] - scores[j];
            let p = 1.0 / (1.0 + (-d).exp());
            let sd = (total * p * (1.0 - p)).sqrt();
            let noise: f64 = rng.random_range(-1.5..1.5) * sd;
            let wins = (total * p + noise).round().clamp(1.0, total - 1.0);
            pairs.push(PairObservation { i, j, wins_i: wins, total });
        }
    }
    Comparisons::new(labels(n), pairs).unwrap()
}

/// Random counts with a positive off-diagonal, as a citation matrix.
pub fn random_matrix(n: usize, seed: u64) -> CitationMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { rng.random_range(0..50) as f64 } else { rng.random_range(1..40) as f64 })
                .collect()
        })
        .collect();
    let names = labels(n);
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    CitationMatrix::from_rows(&refs, &rows).unwrap()
}
