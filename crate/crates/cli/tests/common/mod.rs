#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use citex_core::corpus::write_matrix;
use citex_core::CitationMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const NAMES: [&str; 10] = ["JRSS-B", "AoS", "Bka", "JASA", "Bcs", "JSS", "StataJ", "Test", "CSTM", "JAS"];

/// Noisy counts around the model means for decreasing scores.
pub fn synthetic(seed: u64) -> CitationMatrix {
    let n = NAMES.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mu: Vec<f64> = (0..n).map(|k| 1.5 - 3.0 * k as f64 / (n - 1) as f64).collect();
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        rows[i][i] = rng.random_range(20..80) as f64;
        for j in (i + 1)..n {
            let t = rng.random_range(40..160) as f64;
            let pi = 1.0 / (1.0 + (mu[j] - mu[i]).exp());
            let sd = (t * pi * (1.0 - pi)).sqrt();
            let c = (t * pi + sd * rng.random_range(-1.5..1.5)).round().clamp(1.0, t - 1.0);
            rows[i][j] = c;
            rows[j][i] = t - c;
        }
    }
    CitationMatrix::from_rows(&NAMES, &rows).unwrap()
}

pub fn write_synthetic(dir: &Path, seed: u64) -> PathBuf {
    let path = dir.join("matrix.csv");
    let mut f = std::fs::File::create(&path).unwrap();
    write_matrix(&synthetic(seed), &mut f).unwrap();
    path
}

pub fn write_articles(dir: &Path) -> PathBuf {
    let path = dir.join("articles.csv");
    let mut s = String::from("journal,articles\n");
    for (k, n) in NAMES.iter().enumerate() {
        s.push_str(&format!("{n},{}\n", 40 + 13 * k));
    }
    std::fs::write(&path, s).unwrap();
    path
}

pub fn citex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_citex"))
        .args(args)
        .env_remove("CITEX_OUT")
        .output()
        .expect("spawn citex")
}

pub fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Rows of a CSV file as string cells, header included.
pub fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).from_path(path).unwrap();
    rdr.records().map(|r| r.unwrap().iter().map(str::to_string).collect()).collect()
}
