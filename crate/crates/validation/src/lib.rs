//! Published reference values and fixture discovery for the acceptance suite.

use std::path::{Path, PathBuf};

use citex_core::corpus::write_matrix;
use citex_core::CitationMatrix;

/// Journal, SM, QSE and SM grouped, in published rank order.
pub const PUBLISHED: [(&str, f64, f64, f64); 47] = [
    ("JRSS-B", 2.09, 0.11, 1.87),
    ("AoS", 1.38, 0.07, 1.17),
    ("Bka", 1.29, 0.08, 1.11),
    ("JASA", 1.26, 0.06, 1.11),
    ("Bcs", 0.85, 0.07, 0.65),
    ("JRSS-A", 0.70, 0.19, 0.31),
    ("Bern", 0.69, 0.15, 0.31),
    ("SJS", 0.66, 0.12, 0.31),
    ("Biost", 0.66, 0.11, 0.31),
    ("JCGS", 0.64, 0.12, 0.31),
    ("Tech", 0.53, 0.15, 0.31),
    ("AmS", 0.40, 0.18, 0.04),
    ("JTSA", 0.37, 0.20, 0.04),
    ("ISR", 0.33, 0.25, 0.04),
    ("AISM", 0.32, 0.16, 0.04),
    ("CJS", 0.30, 0.14, 0.04),
    ("StSin", 0.29, 0.09, 0.04),
    ("StSci", 0.11, 0.11, -0.04),
    ("LDA", 0.10, 0.17, -0.04),
    ("JRSS-C", 0.09, 0.15, -0.04),
    ("StMed", 0.06, 0.07, -0.04),
    ("ANZS", 0.06, 0.21, -0.04),
    ("StCmp", 0.04, 0.15, -0.04),
    ("StataJ", 0.02, 0.33, -0.04),
    ("SPL", -0.09, 0.09, -0.04),
    ("StNee", -0.10, 0.25, -0.04),
    ("Envr", -0.11, 0.18, -0.04),
    ("JABES", -0.16, 0.23, -0.04),
    ("Mtka", -0.18, 0.17, -0.04),
    ("StMod", -0.22, 0.21, -0.04),
    ("JSPI", -0.33, 0.07, -0.31),
    ("SMMR", -0.35, 0.16, -0.31),
    ("BioJ", -0.40, 0.12, -0.31),
    ("JMA", -0.45, 0.08, -0.36),
    ("EES", -0.48, 0.25, -0.36),
    ("CSDA", -0.52, 0.07, -0.36),
    ("JNS", -0.53, 0.15, -0.36),
    ("CmpSt", -0.64, 0.22, -0.36),
    ("Stats", -0.65, 0.18, -0.36),
    ("Test", -0.70, 0.15, -0.36),
    ("CSTM", -0.74, 0.10, -0.36),
    ("JSS", -0.80, 0.19, -0.36),
    ("JBS", -0.83, 0.16, -0.36),
    ("JSCS", -0.92, 0.15, -0.36),
    ("CSSC", -1.26, 0.14, -0.88),
    ("StPap", -1.35, 0.20, -0.88),
    ("JAS", -1.41, 0.15, -0.88),
];

/// `(SM, QSE, SM grouped)` for one journal.
pub fn published(key: &str) -> Option<(f64, f64, f64)> {
    PUBLISHED.iter().find(|r| r.0 == key).map(|r| (r.1, r.2, r.3))
}

/// `$CITEX_JCR2010`, else `data/jcr2010.csv` in this crate.
pub fn fixture_path() -> PathBuf {
    std::env::var_os("CITEX_JCR2010")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join("jcr2010.csv"))
}

/// `$CITEX_RAE_DIR`, holding `outputs.csv` and `profiles.csv`.
pub fn assessment_dir() -> Option<PathBuf> {
    std::env::var_os("CITEX_RAE_DIR").map(PathBuf::from)
}

/// A 6-journal matrix in matrix CSV form, for runs that need no fixture.
pub fn write_small_matrix(path: &Path) -> std::io::Result<()> {
    let names = ["JRSS-B", "AoS", "Bka", "JASA", "Bcs", "JSS"];
    let rows: Vec<Vec<f64>> = (0..6)
        .map(|i| {
            (0..6)
                .map(|j| if i == j { 40.0 } else { (20 + 7 * ((i * 5 + j * 3) % 11) + 9 * (6 - i)) as f64 })
                .collect()
        })
        .collect();
    let m = CitationMatrix::from_rows(&names, &rows).expect("valid matrix");
    let mut f = std::fs::File::create(path)?;
    write_matrix(&m, &mut f).map_err(std::io::Error::other)
}
