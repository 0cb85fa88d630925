//! Rank tables and stable number formatting.

use std::collections::BTreeMap;
use std::io::Write;

use crate::error::{CitexError, Result};

/// Formats with 6 significant digits, like C's `%g`.
pub fn format_sig6(x: f64) -> String {
    if x.is_nan() {
        return "NA".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "Inf".into() } else { "-Inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    // rounding may bump the exponent, e.g. 999999.5
    let rounded: f64 = format!("{:.5e}", x).parse().expect("valid float");
    let exp = if rounded.abs() >= 10f64.powi(exp + 1) { exp + 1 } else { exp };
    if !(-4..6).contains(&exp) {
        let s = format!("{:.5e}", x);
        let (mant, e) = s.split_once('e').expect("exponent form");
        let mant = trim_zeros(mant);
        let e: i32 = e.parse().expect("exponent");
        return format!("{mant}e{}{:02}", if e < 0 { '-' } else { '+' }, e.abs());
    }
    let decimals = (5 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x))
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

pub fn format_opt(x: Option<f64>) -> String {
    x.map(format_sig6).unwrap_or_else(|| "NA".into())
}

/// Ranks `1..n` by descending value; equal values are ordered by label.
pub fn rank_descending(labels: &[String], values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..labels.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then_with(|| labels[a].cmp(&labels[b])));
    let mut rank = vec![0; labels.len()];
    for (r, &k) in order.iter().enumerate() {
        rank[k] = r + 1;
    }
    rank
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankTable {
    pub journals: Vec<String>,
    pub methods: Vec<String>,
    /// `ranks[m][k]`: rank of journal `k` under method `m`, `None` if unscored.
    pub ranks: Vec<Vec<Option<usize>>>,
}

/// One rank column per method; journals missing from a method are unranked.
pub fn rank_table(methods: &[(String, BTreeMap<String, f64>)]) -> Result<RankTable> {
    if methods.is_empty() {
        return Err(CitexError::InvalidArgument("rank table needs at least one method".into()));
    }
    let mut journals: Vec<String> = Vec::new();
    for (_, scores) in methods {
        for k in scores.keys() {
            if !journals.contains(k) {
                journals.push(k.clone());
            }
        }
    }
    journals.sort();
    let ranks = methods
        .iter()
        .map(|(_, scores)| {
            let labels: Vec<String> = scores.iter().filter(|(_, v)| !v.is_nan()).map(|(k, _)| k.clone()).collect();
            let values: Vec<f64> = labels.iter().map(|k| scores[k]).collect();
            let r = rank_descending(&labels, &values);
            let lookup: BTreeMap<&str, usize> = labels.iter().map(String::as_str).zip(r).collect();
            journals.iter().map(|j| lookup.get(j.as_str()).copied()).collect()
        })
        .collect();
    Ok(RankTable {
        journals,
        methods: methods.iter().map(|(m, _)| m.clone()).collect(),
        ranks,
    })
}

pub fn write_rank_table<W: Write>(t: &RankTable, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["journal".to_string()];
    header.extend(t.methods.iter().cloned());
    w.write_record(&header)?;
    for (k, j) in t.journals.iter().enumerate() {
        let mut row = vec![j.clone()];
        row.extend(t.ranks.iter().map(|col| col[k].map(|r| r.to_string()).unwrap_or_else(|| "NA".into())));
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| CitexError::io("<rank table>", e))?;
    Ok(())
}
