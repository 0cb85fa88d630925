mod common;

use std::collections::BTreeMap;

use citex_core::assess::{correlate, unit_mean_score, Aggregate, OutputRecord, Transform, UnitScore};
use citex_core::corpus::{exchange_totals, parse_matrix, write_matrix, write_pair_list, MatrixFormat};
use citex_core::descriptives::{impact_family, summarize, IndexKind, YearlyCounts};
use citex_core::report::rank_descending;
use citex_core::CitationMatrix;
use proptest::prelude::*;

fn matrix(n: usize, v: &[u32]) -> CitationMatrix {
    let names = common::labels(n);
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let rows: Vec<Vec<f64>> = v.chunks(n).map(|r| r.iter().map(|x| f64::from(*x)).collect()).collect();
    CitationMatrix::from_rows(&refs, &rows).unwrap()
}

fn square() -> impl Strategy<Value = (usize, Vec<u32>)> {
    (2usize..=7).prop_flat_map(|n| (Just(n), prop::collection::vec(0u32..1000, n * n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn matrices_round_trip((n, v) in square()) {
        let m = matrix(n, &v);
        let mut buf = Vec::new();
        write_matrix(&m, &mut buf).unwrap();
        let back = parse_matrix(std::str::from_utf8(&buf).unwrap(), MatrixFormat::MatrixCsv).unwrap();
        prop_assert_eq!(back.counts(), m.counts());
        prop_assert_eq!(back.abbrevs(), m.abbrevs());
        let mut buf = Vec::new();
        write_pair_list(&m, &mut buf).unwrap();
        let back = parse_matrix(std::str::from_utf8(&buf).unwrap(), MatrixFormat::PairListCsv).unwrap();
        prop_assert_eq!(back.counts(), m.counts());
    }

    #[test]
    fn totals_transpose_and_subset((n, v) in square()) {
        let m = matrix(n, &v);
        let t = exchange_totals(&m);
        let names = common::labels(n);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let tr = CitationMatrix::from_rows(&refs, &(0..n).map(|i| (0..n).map(|j| m.get(j, i)).collect()).collect::<Vec<_>>()).unwrap();
        prop_assert_eq!(&exchange_totals(&tr).totals, &t.totals);
        let keep: Vec<&str> = refs.iter().copied().step_by(2).collect();
        let sub = exchange_totals(&m.subset(&keep).unwrap());
        for (a, ka) in keep.iter().enumerate() {
            for (b, kb) in keep.iter().enumerate() {
                let (i, j) = (m.index_of(ka).unwrap(), m.index_of(kb).unwrap());
                prop_assert_eq!(sub.totals[(a, b)], t.totals[(i, j)]);
            }
        }
    }

    #[test]
    fn summary_proportions_scale_free((n, v) in square(), k in 2u32..9) {
        let m = matrix(n, &v);
        let names = common::labels(n);
        let stat: Vec<&str> = names.iter().map(String::as_str).take(n - 1).collect();
        let a = summarize(&m, &stat).unwrap();
        let b = summarize(&m.scaled(f64::from(k)).unwrap(), &stat).unwrap();
        for (x, y) in a.iter().zip(&b) {
            for (p, q) in [(x.citing_self_prop, y.citing_self_prop), (x.citing_stat_prop, y.citing_stat_prop), (x.cited_self_prop, y.cited_self_prop), (x.cited_stat_prop, y.cited_stat_prop)] {
                match (p, q) {
                    (Some(p), Some(q)) => prop_assert!((p - q).abs() < 1e-12),
                    (None, None) => {}
                    _ => prop_assert!(false, "definedness changed"),
                }
            }
            if let (Some(s), Some(t)) = (x.citing_self_prop, x.citing_stat_prop) {
                prop_assert!((0.0..=1.0).contains(&s) && (0.0..=1.0).contains(&t));
            }
        }
    }

    #[test]
    fn ifno_never_exceeds_if(c in prop::collection::vec(0u32..500, 2), frac in prop::collection::vec(0.0f64..1.0, 2), items in prop::collection::vec(1u32..100, 2)) {
        let mut y = YearlyCounts { journal: "J".into(), census_year: 2010, ..Default::default() };
        for k in 0..2 {
            let year = 2009 - k as i32;
            y.citations_by_year.insert(year, f64::from(c[k]));
            y.self_citations_by_year.insert(year, (f64::from(c[k]) * frac[k]).floor());
            y.items_by_year.insert(year, f64::from(items[k]));
        }
        let a = impact_family(&y, IndexKind::IF).unwrap().value;
        let b = impact_family(&y, IndexKind::IFno).unwrap().value;
        prop_assert!(b <= a && b >= 0.0);
    }

    #[test]
    fn ranks_invariant_under_monotone_maps(v in prop::collection::vec(-5.0f64..5.0, 2..20)) {
        let labels: Vec<String> = (0..v.len()).map(|k| format!("J{k:02}")).collect();
        let r = rank_descending(&labels, &v);
        let mapped: Vec<f64> = v.iter().map(|x| (x * 0.7).exp() + 3.0).collect();
        prop_assert_eq!(&r, &rank_descending(&labels, &mapped));
        let mut sorted = r.clone();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, (1..=v.len()).collect::<Vec<_>>());
    }

    #[test]
    fn correlation_affine_invariant(pts in prop::collection::vec((0.0f64..100.0, -3.0f64..3.0), 3..30), a in 0.1f64..10.0, b in -50.0f64..50.0) {
        let units: Vec<UnitScore> = pts.iter().enumerate().map(|(k, (x, y))| UnitScore {
            unit: k.to_string(), rae_score: Some(*x), mean_journal_score: Some(*y), n_scored: 1, n_total: 1, coverage_ratio: 1.0,
        }).collect();
        let Ok(r) = correlate(&units, 0.5) else { return Ok(()); };
        let moved: Vec<UnitScore> = units.iter().map(|u| UnitScore {
            rae_score: u.rae_score.map(|x| a * x + b),
            mean_journal_score: u.mean_journal_score.map(|y| y / a - b),
            ..u.clone()
        }).collect();
        prop_assert!((correlate(&moved, 0.5).unwrap() - r).abs() < 1e-9);
    }

    #[test]
    fn exponentiated_means_shift_equivariant(scores in prop::collection::vec(-2.0f64..2.0, 6), shift in -3.0f64..3.0, picks in prop::collection::vec(prop::collection::vec(0usize..6, 1..5), 3..6)) {
        let keys: Vec<String> = (0..6).map(|k| format!("J{k}")).collect();
        let base: BTreeMap<String, f64> = keys.iter().cloned().zip(scores.iter().copied()).collect();
        let moved: BTreeMap<String, f64> = base.iter().map(|(k, v)| (k.clone(), v + shift)).collect();
        let units: Vec<Vec<OutputRecord>> = picks.iter().map(|p| p.iter().map(|&j| OutputRecord {
            unit: "u".into(), raw_journal: keys[j].clone(), resolved: Some(keys[j].clone()),
        }).collect()).collect();
        let means = |s: &BTreeMap<String, f64>| -> Vec<f64> {
            units.iter().map(|u| {
                let refs: Vec<&OutputRecord> = u.iter().collect();
                unit_mean_score(&refs, s, Transform::Exponentiate, Aggregate::Mean).value.unwrap()
            }).collect()
        };
        let (m0, m1) = (means(&base), means(&moved));
        for (x, y) in m0.iter().zip(&m1) {
            prop_assert!((y / x - shift.exp()).abs() < 1e-9 * shift.exp());
        }
        let labels: Vec<String> = (0..m0.len()).map(|k| k.to_string()).collect();
        prop_assert_eq!(rank_descending(&labels, &m0), rank_descending(&labels, &m1));
    }

    #[test]
    fn coverage_shrinks_with_scored_set(n_out in 1usize..12, drop in 0usize..6) {
        let keys: Vec<String> = (0..6).map(|k| format!("J{k}")).collect();
        let outs: Vec<OutputRecord> = (0..n_out).map(|k| OutputRecord {
            unit: "u".into(), raw_journal: keys[k % 6].clone(), resolved: Some(keys[k % 6].clone()),
        }).collect();
        let refs: Vec<&OutputRecord> = outs.iter().collect();
        let full: BTreeMap<String, f64> = keys.iter().map(|k| (k.clone(), 0.0)).collect();
        let fewer: BTreeMap<String, f64> = keys.iter().skip(drop).map(|k| (k.clone(), 0.0)).collect();
        let a = unit_mean_score(&refs, &full, Transform::Identity, Aggregate::Mean).coverage_ratio;
        let b = unit_mean_score(&refs, &fewer, Transform::Identity, Aggregate::Mean).coverage_ratio;
        prop_assert!(b <= a && (0.0..=1.0).contains(&b));
    }
}
