//! Journals, cross-citation matrices and name resolution.
//!
//! Orientation is fixed throughout the crate: `counts[(i, j)]` is the number
//! of citations *from* articles of journal `j` (the citing journal, a column)
//! *to* articles of journal `i` (the cited journal, a row).

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::error::{CitexError, Result};

/// Reserved key for the aggregate of all journals outside the selection.
pub const OTHER_KEY: &str = "OTHER";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Journal {
    pub id: usize,
    pub abbrev: String,
    pub full_name: String,
    pub aliases: Vec<String>,
}

impl Journal {
    pub fn new(id: usize, abbrev: impl Into<String>) -> Self {
        let abbrev = abbrev.into();
        Journal {
            id,
            full_name: abbrev.clone(),
            abbrev,
            aliases: Vec::new(),
        }
    }

    pub fn is_other(&self) -> bool {
        self.abbrev == OTHER_KEY
    }
}

/// Square table of directed citation counts. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct CitationMatrix {
    journals: Vec<Journal>,
    counts: DMatrix<f64>,
    window_label: String,
}

impl CitationMatrix {
    /// Builds a validated matrix. Journal ids are reassigned to positions.
    pub fn new(
        mut journals: Vec<Journal>,
        counts: DMatrix<f64>,
        window_label: impl Into<String>,
    ) -> Result<Self> {
        if counts.nrows() != counts.ncols() {
            return Err(CitexError::NotSquare {
                rows: counts.nrows(),
                cols: counts.ncols(),
            });
        }
        if counts.nrows() != journals.len() {
            return Err(CitexError::NotSquare {
                rows: journals.len(),
                cols: counts.ncols(),
            });
        }
        let mut seen = HashSet::new();
        for j in &journals {
            if !seen.insert(j.abbrev.clone()) {
                return Err(CitexError::DuplicateJournal(j.abbrev.clone()));
            }
        }
        for i in 0..counts.nrows() {
            for j in 0..counts.ncols() {
                let v = counts[(i, j)];
                if !v.is_finite() || v < 0.0 {
                    return Err(CitexError::InvalidCount {
                        cited: journals[i].abbrev.clone(),
                        citing: journals[j].abbrev.clone(),
                        value: v.to_string(),
                    });
                }
            }
        }
        for (k, j) in journals.iter_mut().enumerate() {
            j.id = k;
        }
        Ok(CitationMatrix {
            journals,
            counts,
            window_label: window_label.into(),
        })
    }

    /// Convenience constructor from abbreviations and row-major counts.
    pub fn from_rows(abbrevs: &[&str], rows: &[Vec<f64>]) -> Result<Self> {
        let n = abbrevs.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(CitexError::NotSquare {
                rows: rows.len(),
                cols: rows.first().map_or(0, Vec::len),
            });
        }
        let counts = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        let journals = abbrevs
            .iter()
            .enumerate()
            .map(|(k, a)| Journal::new(k, *a))
            .collect();
        CitationMatrix::new(journals, counts, "")
    }

    pub fn len(&self) -> usize {
        self.journals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.journals.is_empty()
    }

    pub fn journals(&self) -> &[Journal] {
        &self.journals
    }

    pub fn counts(&self) -> &DMatrix<f64> {
        &self.counts
    }

    pub fn window_label(&self) -> &str {
        &self.window_label
    }

    pub fn abbrevs(&self) -> Vec<String> {
        self.journals.iter().map(|j| j.abbrev.clone()).collect()
    }

    /// Citations of `cited` by `citing`.
    pub fn get(&self, cited: usize, citing: usize) -> f64 {
        self.counts[(cited, citing)]
    }

    pub fn index_of(&self, abbrev: &str) -> Option<usize> {
        self.journals.iter().position(|j| j.abbrev == abbrev)
    }

    pub fn with_window_label(mut self, label: impl Into<String>) -> Self {
        self.window_label = label.into();
        self
    }

    /// Replaces journal metadata (full names, aliases) by abbreviation.
    pub fn with_metadata(mut self, catalog: &[Journal]) -> Self {
        for j in &mut self.journals {
            if let Some(c) = catalog.iter().find(|c| c.abbrev == j.abbrev) {
                j.full_name = c.full_name.clone();
                j.aliases = c.aliases.clone();
            }
        }
        self
    }

    /// Principal submatrix in the requested order.
    pub fn subset(&self, keys: &[&str]) -> Result<CitationMatrix> {
        let idx = keys
            .iter()
            .map(|k| {
                self.index_of(k)
                    .ok_or_else(|| CitexError::UnknownJournal((*k).to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        let counts = DMatrix::from_fn(idx.len(), idx.len(), |a, b| self.counts[(idx[a], idx[b])]);
        let journals = idx.iter().map(|&i| self.journals[i].clone()).collect();
        CitationMatrix::new(journals, counts, self.window_label.clone())
    }

    /// Drops the reserved `OTHER` aggregate, if present.
    pub fn without_other(&self) -> CitationMatrix {
        if self.index_of(OTHER_KEY).is_none() {
            return self.clone();
        }
        let keys: Vec<&str> = self
            .journals
            .iter()
            .filter(|j| !j.is_other())
            .map(|j| j.abbrev.as_str())
            .collect();
        self.subset(&keys).expect("keys taken from the matrix")
    }

    /// Returns a copy with a new diagonal (journal self-citations).
    pub fn with_diagonal(&self, diag: &[f64]) -> Result<CitationMatrix> {
        let mut counts = self.counts.clone();
        for (i, &d) in diag.iter().enumerate().take(self.len()) {
            counts[(i, i)] = d;
        }
        CitationMatrix::new(self.journals.clone(), counts, self.window_label.clone())
    }

    pub fn scaled(&self, factor: f64) -> Result<CitationMatrix> {
        CitationMatrix::new(
            self.journals.clone(),
            &self.counts * factor,
            self.window_label.clone(),
        )
    }

    /// Reorders journals: `order[k]` is the old index placed at position `k`.
    pub fn permuted(&self, order: &[usize]) -> Result<CitationMatrix> {
        let keys: Vec<&str> = order.iter().map(|&i| self.journals[i].abbrev.as_str()).collect();
        self.subset(&keys)
    }
}

/// Symmetric table of citations exchanged; the diagonal holds `c_ii`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExchangeTotals {
    pub totals: DMatrix<f64>,
}

pub fn exchange_totals(c: &CitationMatrix) -> ExchangeTotals {
    let m = c.counts();
    let n = m.nrows();
    let totals = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            m[(i, i)]
        } else {
            m[(i, j)] + m[(j, i)]
        }
    });
    ExchangeTotals { totals }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFormat {
    MatrixCsv,
    PairListCsv,
}

impl FromStr for MatrixFormat {
    type Err = CitexError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "matrix-csv" | "matrix" => Ok(MatrixFormat::MatrixCsv),
            "pair-list-csv" | "pairs" | "pair-list" => Ok(MatrixFormat::PairListCsv),
            other => Err(CitexError::UnknownFormat(other.to_string())),
        }
    }
}

pub fn load_matrix(path: impl AsRef<Path>, format: MatrixFormat) -> Result<CitationMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| CitexError::io(path, e))?;
    parse_matrix(&text, format)
}

pub fn parse_matrix(text: &str, format: MatrixFormat) -> Result<CitationMatrix> {
    let mut window = String::new();
    let mut body = String::with_capacity(text.len());
    for line in text.lines() {
        if let Some(comment) = line.trim_start().strip_prefix('#') {
            if let Some(w) = comment.trim().strip_prefix("window:") {
                window = w.trim().to_string();
            }
            body.push('\n');
        } else {
            body.push_str(line);
            body.push('\n');
        }
    }
    let m = match format {
        MatrixFormat::MatrixCsv => parse_matrix_csv(&body)?,
        MatrixFormat::PairListCsv => parse_pair_list(&body)?,
    };
    Ok(m.with_window_label(window))
}

fn parse_count(raw: &str, line: usize, cited: &str, citing: &str) -> Result<f64> {
    let trimmed = raw.trim();
    let v: f64 = trimmed.parse().map_err(|_| CitexError::InvalidCount {
        cited: cited.to_string(),
        citing: citing.to_string(),
        value: trimmed.to_string(),
    })?;
    if !v.is_finite() || v < 0.0 {
        return Err(CitexError::InvalidCount {
            cited: cited.to_string(),
            citing: citing.to_string(),
            value: format!("{trimmed} (line {line})"),
        });
    }
    Ok(v)
}

fn parse_matrix_csv(body: &str) -> Result<CitationMatrix> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(body.as_bytes());
    let mut records = rdr.records();
    let header = loop {
        match records.next() {
            Some(rec) => {
                let rec = rec?;
                if rec.iter().all(|f| f.trim().is_empty()) {
                    continue;
                }
                break rec;
            }
            None => {
                return Err(CitexError::Parse {
                    line: 1,
                    message: "empty matrix file".into(),
                })
            }
        }
    };
    let citing: Vec<String> = header.iter().skip(1).map(|s| s.trim().to_string()).collect();
    let mut cited = Vec::new();
    let mut rows = Vec::new();
    for rec in records {
        let rec = rec?;
        if rec.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let key = rec.get(0).unwrap_or("").trim().to_string();
        if rec.len() - 1 != citing.len() {
            return Err(CitexError::NotSquare {
                rows: cited.len() + 1,
                cols: rec.len() - 1,
            });
        }
        let row = rec
            .iter()
            .skip(1)
            .zip(&citing)
            .map(|(v, c)| parse_count(v, line, &key, c))
            .collect::<Result<Vec<_>>>()?;
        cited.push(key);
        rows.push(row);
    }
    if cited.len() != citing.len() {
        return Err(CitexError::NotSquare {
            rows: cited.len(),
            cols: citing.len(),
        });
    }
    let mut seen = HashSet::new();
    for k in &cited {
        if !seen.insert(k.as_str()) {
            return Err(CitexError::DuplicateJournal(k.clone()));
        }
    }
    let mut seen_cols = HashSet::new();
    for k in &citing {
        if !seen_cols.insert(k.as_str()) {
            return Err(CitexError::DuplicateJournal(k.clone()));
        }
    }
    // Columns may be listed in a different order than rows.
    let col_pos: HashMap<&str, usize> = citing.iter().enumerate().map(|(k, s)| (s.as_str(), k)).collect();
    let mut perm = Vec::with_capacity(cited.len());
    for k in &cited {
        match col_pos.get(k.as_str()) {
            Some(&p) => perm.push(p),
            None => return Err(CitexError::UnknownJournal(k.clone())),
        }
    }
    let n = cited.len();
    let counts = DMatrix::from_fn(n, n, |i, j| rows[i][perm[j]]);
    let journals = cited.iter().enumerate().map(|(k, a)| Journal::new(k, a.clone())).collect();
    CitationMatrix::new(journals, counts, "")
}

fn parse_pair_list(body: &str) -> Result<CitationMatrix> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(body.as_bytes());
    let headers = rdr.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| CitexError::Parse {
                line: 1,
                message: format!("pair-list header must contain cited,citing,count (missing {name})"),
            })
    };
    let (ci, cj, cc) = (col("cited")?, col("citing")?, col("count")?);
    let mut order: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut entries: Vec<(usize, usize, f64)> = Vec::new();
    let mut seen_pairs = HashSet::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let a = rec.get(ci).unwrap_or("").to_string();
        let b = rec.get(cj).unwrap_or("").to_string();
        let v = parse_count(rec.get(cc).unwrap_or(""), line, &a, &b)?;
        let mut id = |k: &str| -> usize {
            if let Some(&i) = index.get(k) {
                i
            } else {
                order.push(k.to_string());
                index.insert(k.to_string(), order.len() - 1);
                order.len() - 1
            }
        };
        let (ia, ib) = (id(&a), id(&b));
        if !seen_pairs.insert((ia, ib)) {
            return Err(CitexError::Parse {
                line,
                message: format!("duplicate pair ({a}, {b})"),
            });
        }
        entries.push((ia, ib, v));
    }
    let n = order.len();
    let mut counts = DMatrix::zeros(n, n);
    for (i, j, v) in entries {
        counts[(i, j)] = v;
    }
    let journals = order.into_iter().enumerate().map(|(k, a)| Journal::new(k, a)).collect();
    CitationMatrix::new(journals, counts, "")
}

fn fmt_count(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

/// Writes matrix-csv with orientation and window comment lines.
pub fn write_matrix<W: Write>(c: &CitationMatrix, out: W) -> Result<()> {
    let mut out = out;
    let io = |e| CitexError::io("<output>", e);
    writeln!(out, "# rows=cited, columns=citing").map_err(io)?;
    if !c.window_label.is_empty() {
        writeln!(out, "# window: {}", c.window_label).map_err(io)?;
    }
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec![String::new()];
    header.extend(c.abbrevs());
    w.write_record(&header)?;
    for (i, j) in c.journals.iter().enumerate() {
        let mut row = vec![j.abbrev.clone()];
        row.extend((0..c.len()).map(|k| fmt_count(c.counts[(i, k)])));
        w.write_record(&row)?;
    }
    w.flush().map_err(io)?;
    Ok(())
}

pub fn write_pair_list<W: Write>(c: &CitationMatrix, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["cited", "citing", "count"])?;
    for i in 0..c.len() {
        for j in 0..c.len() {
            w.write_record([
                c.journals[i].abbrev.as_str(),
                c.journals[j].abbrev.as_str(),
                &fmt_count(c.counts[(i, j)]),
            ])?;
        }
    }
    w.flush().map_err(|e| CitexError::io("<output>", e))?;
    Ok(())
}

/// Reads an alias table `alias,abbrev`.
pub fn load_aliases(path: impl AsRef<Path>) -> Result<Vec<(String, String)>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| CitexError::io(path, e))?;
    parse_aliases(&text)
}

pub fn parse_aliases(text: &str) -> Result<Vec<(String, String)>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        if rec.len() < 2 {
            continue;
        }
        out.push((rec[0].to_string(), rec[1].to_string()));
    }
    Ok(out)
}

/// Attaches alias-table rows to the matching journals.
pub fn apply_aliases(journals: &mut [Journal], aliases: &[(String, String)]) -> Result<()> {
    for (alias, abbrev) in aliases {
        let j = journals
            .iter_mut()
            .find(|j| &j.abbrev == abbrev)
            .ok_or_else(|| CitexError::UnknownJournal(abbrev.clone()))?;
        j.aliases.push(alias.clone());
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Resolution {
    Resolved(Journal),
    /// Nothing matched exactly; `candidates` share the normalized prefix.
    NoMatch { candidates: Vec<String> },
    /// Two or more journals match equally well.
    Ambiguous { candidates: Vec<String> },
}

impl Resolution {
    pub fn journal(&self) -> Option<&Journal> {
        match self {
            Resolution::Resolved(j) => Some(j),
            _ => None,
        }
    }
}

/// Canonical form of a journal name used for matching.
pub fn normalize_name(raw: &str) -> String {
    // Subtitles after a colon (e.g. "Series B: Statistical Methodology") are dropped.
    let head = raw.split(':').next().unwrap_or("");
    let mut expanded = String::with_capacity(head.len());
    for tok in head.split_whitespace() {
        let t = match tok {
            "J." | "J" => "Journal",
            "&" => "and",
            other => other,
        };
        expanded.push_str(t);
        expanded.push(' ');
    }
    let cleaned: String = expanded
        .chars()
        .map(|c| if c.is_alphanumeric() { c.to_ascii_lowercase() } else { ' ' })
        .collect();
    let words: Vec<&str> = cleaned
        .split_whitespace()
        .filter(|w| !matches!(*w, "the" | "of" | "and"))
        .collect();
    let mut out: Vec<&str> = Vec::with_capacity(words.len());
    let mut k = 0;
    while k < words.len() {
        let w = words[k];
        // "Series B", "Ser B", "Part B" -> "b"
        if matches!(w, "series" | "ser" | "part") && k + 1 < words.len() && words[k + 1].len() == 1 {
            k += 1;
            continue;
        }
        out.push(w);
        k += 1;
    }
    out.join(" ")
}

/// Two-stage lookup: exact alias table, then normalized names.
pub fn resolve_name(raw: &str, corpus: &[Journal]) -> Resolution {
    let exact: Vec<&Journal> = corpus
        .iter()
        .filter(|j| j.abbrev == raw || j.aliases.iter().any(|a| a == raw))
        .collect();
    if let Some(r) = unique(&exact) {
        return r;
    }

    let key = normalize_name(raw);
    if key.is_empty() {
        return Resolution::NoMatch { candidates: vec![] };
    }
    let forms = |j: &Journal| -> Vec<String> {
        let mut f = vec![normalize_name(&j.full_name), normalize_name(&j.abbrev)];
        f.extend(j.aliases.iter().map(|a| normalize_name(a)));
        f
    };
    let matched: Vec<&Journal> = corpus.iter().filter(|j| forms(j).contains(&key)).collect();
    if let Some(r) = unique(&matched) {
        return r;
    }

    let prefix = format!("{key} ");
    let candidates: BTreeSet<String> = corpus
        .iter()
        .filter(|j| forms(j).iter().any(|f| f.starts_with(&prefix)))
        .map(|j| j.abbrev.clone())
        .collect();
    Resolution::NoMatch {
        candidates: candidates.into_iter().collect(),
    }
}

fn unique(found: &[&Journal]) -> Option<Resolution> {
    let abbrevs: BTreeSet<&str> = found.iter().map(|j| j.abbrev.as_str()).collect();
    match abbrevs.len() {
        0 => None,
        1 => Some(Resolution::Resolved(found[0].clone())),
        _ => Some(Resolution::Ambiguous {
            candidates: abbrevs.into_iter().map(String::from).collect(),
        }),
    }
}
