//! Citation summaries and Impact-Factor-family indices.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::corpus::CitationMatrix;
use crate::error::{CitexError, Result};

/// Citations made (column totals) and received (row totals) by one journal.
///
/// Proportions are `None` when the corresponding total is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct CitationSummary {
    pub journal: String,
    pub citing_total: f64,
    pub citing_self_prop: Option<f64>,
    pub citing_stat_prop: Option<f64>,
    pub cited_total: f64,
    pub cited_self_prop: Option<f64>,
    pub cited_stat_prop: Option<f64>,
}

fn ratio(num: f64, den: f64) -> Option<f64> {
    (den > 0.0).then(|| num / den)
}

/// One summary per journal other than `OTHER`, in matrix order.
pub fn summarize(c: &CitationMatrix, stat_keys: &[&str]) -> Result<Vec<CitationSummary>> {
    let mut stat = vec![false; c.len()];
    for key in stat_keys {
        let k = c.index_of(key).ok_or_else(|| CitexError::UnknownJournal(key.to_string()))?;
        stat[k] = true;
    }
    let m = c.counts();
    let n = c.len();
    let mut out = Vec::new();
    for (k, journal) in c.journals().iter().enumerate() {
        if journal.is_other() {
            continue;
        }
        let citing_total: f64 = m.column(k).sum();
        let cited_total: f64 = m.row(k).sum();
        let citing_stat: f64 = (0..n).filter(|&i| stat[i]).map(|i| m[(i, k)]).sum();
        let cited_stat: f64 = (0..n).filter(|&j| stat[j]).map(|j| m[(k, j)]).sum();
        let diag = m[(k, k)];
        out.push(CitationSummary {
            journal: journal.abbrev.clone(),
            citing_total,
            citing_self_prop: ratio(diag, citing_total),
            citing_stat_prop: ratio(citing_stat, citing_total),
            cited_total,
            cited_self_prop: ratio(diag, cited_total),
            cited_stat_prop: ratio(cited_stat, cited_total),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IndexKind {
    II,
    IF,
    IFno,
    IF5,
}

impl IndexKind {
    pub const ALL: [IndexKind; 4] = [IndexKind::II, IndexKind::IF, IndexKind::IFno, IndexKind::IF5];
}

impl fmt::Display for IndexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IndexKind::II => "II",
            IndexKind::IF => "IF",
            IndexKind::IFno => "IFno",
            IndexKind::IF5 => "IF5",
        })
    }
}

impl FromStr for IndexKind {
    type Err = CitexError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "II" => Ok(IndexKind::II),
            "IF" => Ok(IndexKind::IF),
            "IFno" => Ok(IndexKind::IFno),
            "IF5" => Ok(IndexKind::IF5),
            other => Err(CitexError::InvalidArgument(format!(
                "unknown index kind `{other}` (expected II, IF, IFno or IF5)"
            ))),
        }
    }
}

/// Citations received during `census_year`, keyed by the cited items'
/// publication year, together with citable items published each year.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct YearlyCounts {
    pub journal: String,
    pub census_year: i32,
    pub citations_by_year: BTreeMap<i32, f64>,
    pub self_citations_by_year: BTreeMap<i32, f64>,
    pub items_by_year: BTreeMap<i32, f64>,
}

impl YearlyCounts {
    pub fn citations_same_year(&self) -> Option<f64> {
        self.citations_by_year.get(&self.census_year).copied()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndexScore {
    pub journal: String,
    pub index: IndexKind,
    pub value: f64,
}

fn window(kind: IndexKind, census: i32) -> Vec<i32> {
    match kind {
        IndexKind::II => vec![census],
        IndexKind::IF | IndexKind::IFno => vec![census - 1, census - 2],
        IndexKind::IF5 => (1..=5).map(|k| census - k).collect(),
    }
}

pub fn impact_family(y: &YearlyCounts, kind: IndexKind) -> Result<IndexScore> {
    let mut num = 0.0;
    let mut den = 0.0;
    for year in window(kind, y.census_year) {
        let missing = || CitexError::MissingData(format!("{}: no {kind} data for {year}", y.journal));
        let cites = *y.citations_by_year.get(&year).ok_or_else(missing)?;
        let items = *y.items_by_year.get(&year).ok_or_else(missing)?;
        num += cites;
        if kind == IndexKind::IFno {
            num -= y.self_citations_by_year.get(&year).copied().ok_or_else(missing)?;
        }
        den += items;
    }
    if den <= 0.0 {
        return Err(CitexError::Undefined(format!("{kind} for {} (no citable items)", y.journal)));
    }
    if num < 0.0 {
        return Err(CitexError::InvalidArgument(format!(
            "{}: self-citations exceed citations in the {kind} window",
            y.journal
        )));
    }
    Ok(IndexScore {
        journal: y.journal.clone(),
        index: kind,
        value: num / den,
    })
}

/// Parses CSV with header `journal,year,citations,self_citations,items`.
///
/// The census year is the latest year present in the file.
pub fn parse_yearly(text: &str) -> Result<Vec<YearlyCounts>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).comment(Some(b'#')).from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CitexError::Parse { line: 1, message: format!("missing column `{name}`") })
    };
    let (cj, cy, cc, cs, ci) = (col("journal")?, col("year")?, col("citations")?, col("self_citations")?, col("items")?);
    let mut by_journal: BTreeMap<String, YearlyCounts> = BTreeMap::new();
    let mut order: Vec<String> = Vec::new();
    let mut census = i32::MIN;
    for (k, rec) in reader.records().enumerate() {
        let rec = rec?;
        let line = k + 2;
        let num = |idx: usize| -> Result<f64> {
            let raw = rec.get(idx).unwrap_or("");
            let v: f64 = raw
                .parse()
                .map_err(|_| CitexError::Parse { line, message: format!("bad number `{raw}`") })?;
            if v.is_nan() || v < 0.0 {
                return Err(CitexError::Parse { line, message: format!("negative count `{raw}`") });
            }
            Ok(v)
        };
        let journal = rec.get(cj).unwrap_or("").to_string();
        let year: i32 = rec
            .get(cy)
            .unwrap_or("")
            .parse()
            .map_err(|_| CitexError::Parse { line, message: "bad year".into() })?;
        census = census.max(year);
        let entry = by_journal.entry(journal.clone()).or_insert_with(|| {
            order.push(journal.clone());
            YearlyCounts { journal: journal.clone(), ..Default::default() }
        });
        entry.citations_by_year.insert(year, num(cc)?);
        entry.self_citations_by_year.insert(year, num(cs)?);
        entry.items_by_year.insert(year, num(ci)?);
    }
    Ok(order
        .into_iter()
        .map(|j| {
            let mut y = by_journal.remove(&j).expect("journal recorded");
            y.census_year = census;
            y
        })
        .collect())
}

pub fn load_yearly(path: impl AsRef<Path>) -> Result<Vec<YearlyCounts>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| CitexError::io(path, e))?;
    parse_yearly(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> CitationMatrix {
        // cited rows, citing columns
        CitationMatrix::from_rows(
            &["A", "B", "C", "OTHER"],
            &[
                vec![4.0, 2.0, 1.0, 3.0],
                vec![1.0, 5.0, 0.0, 2.0],
                vec![0.0, 3.0, 2.0, 0.0],
                vec![5.0, 0.0, 1.0, 0.0],
            ],
        )
        .unwrap()
    }

    #[test]
    fn hand_tally() {
        let s = summarize(&toy(), &["A", "B", "C"]).unwrap();
        assert_eq!(s.len(), 3);
        let a = &s[0];
        assert_eq!(a.citing_total, 10.0);
        assert_eq!(a.citing_self_prop, Some(0.4));
        assert_eq!(a.citing_stat_prop, Some(0.5));
        assert_eq!(a.cited_total, 10.0);
        assert_eq!(a.cited_stat_prop, Some(0.7));
        let c = &s[2];
        assert_eq!(c.citing_total, 4.0);
        assert_eq!(c.citing_stat_prop, Some(0.75));
        assert_eq!(c.cited_self_prop, Some(0.4));
    }

    #[test]
    fn all_self_citation() {
        let m = CitationMatrix::from_rows(&["A", "B"], &[vec![9.0, 0.0], vec![0.0, 0.0]]).unwrap();
        let s = summarize(&m, &["A", "B"]).unwrap();
        assert_eq!(s[0].citing_self_prop, Some(1.0));
        assert_eq!(s[0].citing_stat_prop, Some(1.0));
        assert_eq!(s[1].citing_self_prop, None);
        assert_eq!(s[1].cited_stat_prop, None);
    }

    #[test]
    fn unknown_stat_key() {
        assert!(summarize(&toy(), &["Z"]).is_err());
    }

    fn yearly() -> YearlyCounts {
        let mut y = YearlyCounts { journal: "J".into(), census_year: 2010, ..Default::default() };
        for (year, c, s, i) in [(2010, 0.0, 0.0, 10.0), (2009, 60.0, 12.0, 20.0), (2008, 40.0, 8.0, 30.0)] {
            y.citations_by_year.insert(year, c);
            y.self_citations_by_year.insert(year, s);
            y.items_by_year.insert(year, i);
        }
        y
    }

    #[test]
    fn impact_factor_ratios() {
        let y = yearly();
        assert_eq!(impact_family(&y, IndexKind::IF).unwrap().value, 2.0);
        assert!((impact_family(&y, IndexKind::IFno).unwrap().value - 1.6).abs() < 1e-15);
        assert_eq!(impact_family(&y, IndexKind::II).unwrap().value, 0.0);
        assert!(matches!(impact_family(&y, IndexKind::IF5), Err(CitexError::MissingData(_))));
    }

    #[test]
    fn zero_items_undefined() {
        let mut y = yearly();
        y.items_by_year.insert(2010, 0.0);
        assert!(matches!(impact_family(&y, IndexKind::II), Err(CitexError::Undefined(_))));
    }

    #[test]
    fn parses_yearly_csv() {
        let text = "journal,year,citations,self_citations,items\nJ,2009,60,12,20\nJ,2008,40,8,30\nK,2010,3,0,4\n";
        let ys = parse_yearly(text).unwrap();
        assert_eq!(ys.len(), 2);
        assert_eq!(ys[0].census_year, 2010);
        assert_eq!(impact_family(&ys[0], IndexKind::IF).unwrap().value, 2.0);
        assert_eq!(impact_family(&ys[1], IndexKind::II).unwrap().value, 0.75);
        assert!(parse_yearly("journal,year\nJ,2009\n").is_err());
    }
}
