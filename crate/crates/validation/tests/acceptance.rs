//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Fixture-based criteria read the JCR 2010 matrix from `$CITEX_JCR2010`
//! or `crates/validation/data/jcr2010.csv`; assessment data from
//! `$CITEX_RAE_DIR/{outputs,profiles}.csv`.

use std::collections::BTreeMap;
use std::process::ExitCode;

use citex_core::assess::{self, rae_score, Aggregate, QualityProfile, Transform, UnitScore};
use citex_core::catalog::statistics_journals;
use citex_core::cluster::{complete_linkage, correlation_distance, cut, DistanceMatrix};
use citex_core::corpus::{exchange_totals, load_matrix};
use citex_core::eigenfactor::{eigenfactor_scores, normalize_citations, transition_matrix, EigenOptions};
use citex_core::quasivar::{quasi_variances, z_test};
use citex_core::rankinglasso::{adaptive_weights, solve_at_bound, trace_path, LassoOptions, LassoPath};
use citex_core::stigler::{self, gradient, journal_residuals, loglik, merge_journals, win_probability};
use citex_core::{CitationMatrix, Comparisons, FitOptions, MatrixFormat, StiglerFit};
use citex_validation::{assessment_dir, fixture_path, published, write_small_matrix, PUBLISHED};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SCORE_TOL: f64 = 0.01;
const PHI_TOL: f64 = 0.01;
const QSE_TOL: f64 = 0.01;
const Z_TOL: f64 = 0.02;
const RESIDUAL_TOL: f64 = 0.05;
const GROUPED_TOL: f64 = 0.02;
const RAE_TOL: f64 = 0.02;

type Check = Result<String, String>;

fn table(key: &str) -> (f64, f64, f64) {
    published(key).expect("journal in table")
}

struct Fixture {
    matrix: CitationMatrix,
    comps: Comparisons,
    fit: StiglerFit,
}

fn load_fixture() -> Result<Fixture, String> {
    let path = fixture_path();
    if !path.exists() {
        return Err(format!("fixture not found at {}", path.display()));
    }
    let matrix = load_matrix(&path, MatrixFormat::MatrixCsv).map_err(|e| e.to_string())?;
    let comps = Comparisons::from_matrix(&matrix);
    let fit = stigler::fit(&comps, &FitOptions::default()).map_err(|e| e.to_string())?;
    Ok(Fixture { matrix, comps, fit })
}

fn idx(fit: &StiglerFit, key: &str) -> Result<usize, String> {
    fit.index_of(key).ok_or_else(|| format!("{key} missing from fixture"))
}

fn within(what: &str, got: f64, want: f64, tol: f64, fails: &mut Vec<String>) -> String {
    let s = format!("{what}={got:.3}");
    if (got - want).abs() > tol || got.is_nan() {
        fails.push(format!("{what}={got:.4} (want {want} ± {tol})"));
    }
    s
}

fn verdict(parts: Vec<String>, fails: Vec<String>) -> Check {
    if fails.is_empty() {
        Ok(parts.join(" "))
    } else {
        Err(fails.join("; "))
    }
}

fn c1(fx: &Result<Fixture, String>) -> Check {
    let fx = fx.as_ref().map_err(Clone::clone)?;
    let mu = fx.fit.mu_centered();
    let (mut parts, mut fails) = (Vec::new(), Vec::new());
    for key in ["JRSS-B", "AoS", "Bka", "JASA", "JAS"] {
        parts.push(within(key, mu[idx(&fx.fit, key)?], table(key).0, SCORE_TOL, &mut fails));
    }
    let mut order: Vec<usize> = (0..fx.fit.n()).collect();
    order.sort_by(|&a, &b| mu[b].total_cmp(&mu[a]));
    let got: Vec<&str> = order.iter().map(|&k| fx.fit.labels[k].as_str()).collect();
    let want: Vec<&str> = PUBLISHED.iter().map(|r| r.0).collect();
    if got != want {
        let first = got.iter().zip(&want).position(|(a, b)| a != b).unwrap_or(0);
        fails.push(format!("rank order differs from position {}: {:?} vs {:?}", first + 1, &got[first..], &want[first..]));
    } else {
        parts.push("47-journal order matches".into());
    }
    verdict(parts, fails)
}

fn c2(fx: &Result<Fixture, String>) -> Check {
    let fx = fx.as_ref().map_err(Clone::clone)?;
    let phi = fx.fit.phi.ok_or("dispersion undefined")?;
    let mut fails = Vec::new();
    let p = within("phi", phi, 1.76, PHI_TOL, &mut fails);
    verdict(vec![p], fails)
}

fn c3(fx: &Result<Fixture, String>) -> Check {
    let fx = fx.as_ref().map_err(Clone::clone)?;
    let qv = quasi_variances(&fx.fit).map_err(|e| e.to_string())?;
    let (mut parts, mut fails) = (Vec::new(), Vec::new());
    for (key, want) in [("JRSS-B", 0.11), ("JASA", 0.06), ("StataJ", 0.33), ("ISR", 0.25)] {
        parts.push(within(key, qv.qse(idx(&fx.fit, key)?), want, QSE_TOL, &mut fails));
    }
    parts.push(format!("worst_rel_error={:.3}", qv.worst_rel_error));
    verdict(parts, fails)
}

fn c4(fx: &Result<Fixture, String>) -> Check {
    let fx = fx.as_ref().map_err(Clone::clone)?;
    let qv = quasi_variances(&fx.fit).map_err(|e| e.to_string())?;
    let (za, ze) = z_test(&qv, &fx.fit, idx(&fx.fit, "Bka")?, idx(&fx.fit, "JASA")?).map_err(|e| e.to_string())?;
    let mut fails = Vec::new();
    let parts = vec![within("z_approx", za, 0.30, Z_TOL, &mut fails), within("z_exact", ze, 0.31, Z_TOL, &mut fails)];
    verdict(parts, fails)
}

fn c5(fx: &Result<Fixture, String>) -> Check {
    let fx = fx.as_ref().map_err(Clone::clone)?;
    let r = journal_residuals(&fx.fit, &fx.comps).map_err(|e| e.to_string())?;
    let mut fails = Vec::new();
    let mut parts = vec![
        within("r_CSTM", r[idx(&fx.fit, "CSTM")?], 2.23, RESIDUAL_TOL, &mut fails),
        within("r_Test", r[idx(&fx.fit, "Test")?], -3.01, RESIDUAL_TOL, &mut fails),
    ];
    let mut big: Vec<&str> = (0..r.len()).filter(|&k| r[k].abs() > 1.96).map(|k| fx.fit.labels[k].as_str()).collect();
    big.sort_unstable();
    if big != ["CSTM", "Test"] {
        fails.push(format!("|r| > 1.96 for {big:?}"));
    } else {
        parts.push("only CSTM and Test exceed 1.96".into());
    }
    verdict(parts, fails)
}

fn c6(fx: &Result<Fixture, String>, path: &Result<LassoPath, String>) -> Check {
    let fx = fx.as_ref().map_err(Clone::clone)?;
    let path = path.as_ref().map_err(Clone::clone)?;
    let sel = path.selected_point();
    let (mut parts, mut fails) = (vec![format!("p={}", sel.p)], Vec::new());
    if sel.p != 10 {
        fails.push(format!("TIC selects {} groups (want 10)", sel.p));
    }
    for key in ["JRSS-B", "AoS", "Bka", "JASA", "Bcs", "CSSC"] {
        parts.push(within(key, sel.mu_s[idx(&fx.fit, key)?], table(key).2, GROUPED_TOL, &mut fails));
    }
    let lead = idx(&fx.fit, "JRSS-B")?;
    for pt in path.points.iter().filter(|p| p.s > 0.0) {
        if pt.groups[0] != [lead] {
            fails.push(format!("JRSS-B not sole leader at s={}", pt.s));
            break;
        }
    }
    verdict(parts, fails)
}

fn c7(fx: &Result<Fixture, String>) -> Check {
    let fx = fx.as_ref().map_err(Clone::clone)?;
    let m = fx.matrix.without_other();
    let labels = m.abbrevs();
    let dist = correlation_distance(&exchange_totals(&m), &labels).map_err(|e| e.to_string())?;
    let groups = cut(&complete_linkage(&dist), 0.6);
    let mut fails = Vec::new();
    if groups.len() != 8 {
        fails.push(format!("{} clusters (want 8)", groups.len()));
    }
    let mut singles: Vec<&str> = groups.iter().filter(|g| g.len() == 1).map(|g| labels[g[0]].as_str()).collect();
    singles.sort_unstable();
    if singles != ["JSS", "StataJ"] {
        fails.push(format!("singletons {singles:?}"));
    }
    let top: Vec<usize> = ["AoS", "Bka", "JASA", "JRSS-B"].iter().filter_map(|k| m.index_of(k)).collect();
    if top.len() != 4 || !groups.iter().any(|g| top.iter().all(|t| g.contains(t))) {
        fails.push("AoS, Bka, JASA, JRSS-B not co-clustered".into());
    }
    verdict(vec![format!("{} clusters, singletons {singles:?}", groups.len())], fails)
}

fn c8(fx: &Result<Fixture, String>, path: &Result<LassoPath, String>) -> Check {
    let oxford = QualityProfile::new("Oxford", [37.0, 49.5, 11.4, 2.1, 0.0]).map_err(|e| e.to_string())?;
    if rae_score(&oxford) != 53.5 {
        return Err(format!("Oxford score {}", rae_score(&oxford)));
    }
    let Some(dir) = assessment_dir() else {
        synthetic_assess()?;
        return Ok("Oxford=53.5; assessment data unavailable, synthetic correlation properties hold".into());
    };
    let fx = fx.as_ref().map_err(Clone::clone)?;
    let path = path.as_ref().map_err(Clone::clone)?;
    let grouped: BTreeMap<String, f64> =
        fx.fit.labels.iter().cloned().zip(path.selected_point().mu_s.iter().copied()).collect();
    let outputs = assess::load_outputs(dir.join("outputs.csv"), &statistics_journals()).map_err(|e| e.to_string())?;
    let profiles = assess::load_profiles(dir.join("profiles.csv")).map_err(|e| e.to_string())?;
    let units = assess::score_units(&outputs, &profiles, &grouped, Transform::Exponentiate, Aggregate::Mean);
    let mut fails = Vec::new();
    let mut parts = vec!["Oxford=53.5".to_string()];
    for (cov, n_want, r_want) in [(0.0, 26, 0.82), (0.5, 13, 0.88)] {
        let n = assess::eligible(&units, cov).len();
        if n != n_want {
            fails.push(format!("{n} units at coverage >= {cov} (want {n_want})"));
        }
        let r = assess::correlate(&units, cov).map_err(|e| e.to_string())?;
        parts.push(within(&format!("r[{n} units]"), r, r_want, RAE_TOL, &mut fails));
    }
    verdict(parts, fails)
}

fn synthetic_assess() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..50 {
        let k = rng.random_range(3..30);
        let units: Vec<UnitScore> = (0..k)
            .map(|j| UnitScore {
                unit: j.to_string(),
                rae_score: Some(rng.random_range(0.0..60.0)),
                mean_journal_score: Some(rng.random_range(0.3..5.0)),
                n_scored: 1,
                n_total: 1,
                coverage_ratio: rng.random_range(0.0..1.0),
            })
            .collect();
        let Ok(r) = assess::correlate(&units, 0.0) else { continue };
        let moved: Vec<UnitScore> = units
            .iter()
            .map(|u| UnitScore { rae_score: u.rae_score.map(|x| 3.0 * x - 7.0), ..u.clone() })
            .collect();
        let r2 = assess::correlate(&moved, 0.0).map_err(|e| e.to_string())?;
        if (r - r2).abs() > 1e-9 || !(-1.0..=1.0).contains(&r) {
            return Err(format!("correlation not affine invariant: {r} vs {r2}"));
        }
        let line: Vec<UnitScore> = units
            .iter()
            .map(|u| UnitScore { rae_score: u.mean_journal_score.map(|x| 10.0 * x + 1.0), ..u.clone() })
            .collect();
        if (assess::correlate(&line, 0.0).map_err(|e| e.to_string())? - 1.0).abs() > 1e-12 {
            return Err("exact linear relation does not give r = 1".into());
        }
        if assess::eligible(&units, 0.5).len() > assess::eligible(&units, 0.25).len() {
            return Err("coverage filter not monotone".into());
        }
    }
    Ok(())
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> CitationMatrix {
    let names = common_names(n);
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| rng.random_range(1..200) as f64).collect()).collect();
    CitationMatrix::from_rows(&refs, &rows).unwrap()
}

fn common_names(n: usize) -> Vec<String> {
    (0..n).map(|k| format!("J{k:02}")).collect()
}

fn fit_of(m: &CitationMatrix) -> StiglerFit {
    stigler::fit(&Comparisons::from_matrix(m), &FitOptions::default()).unwrap()
}

fn newton3(c: &CitationMatrix) -> [f64; 3] {
    // free (mu_0, mu_1), mu_2 = 0
    let mut x = [0.0f64; 3];
    for _ in 0..200 {
        let (mut g, mut h) = ([0.0; 2], [[0.0; 2]; 2]);
        for (i, j) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let t = c.get(i, j) + c.get(j, i);
            let p = 1.0 / (1.0 + (x[j] - x[i]).exp());
            let (r, w) = (c.get(i, j) - t * p, t * p * (1.0 - p));
            let s = |k: usize| if k == i { 1.0 } else if k == j { -1.0 } else { 0.0 };
            for (a, row) in h.iter_mut().enumerate() {
                g[a] += s(a) * r;
                for (b, hab) in row.iter_mut().enumerate() {
                    *hab += s(a) * s(b) * w;
                }
            }
        }
        let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
        x[0] += (h[1][1] * g[0] - h[0][1] * g[1]) / det;
        x[1] += (h[0][0] * g[1] - h[1][0] * g[0]) / det;
    }
    let m = (x[0] + x[1]) / 3.0;
    [x[0] - m, x[1] - m, -m]
}

fn c9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst_grad: f64 = 0.0;
    for _ in 0..20 {
        let n = rng.random_range(3..9);
        let m = random_matrix(&mut rng, n);
        let comps = Comparisons::from_matrix(&m);
        let mu = DVector::from_fn(n, |_, _| rng.random_range(-2.0..2.0));
        let g = gradient(&mu, &comps);
        for k in 0..n {
            let h = 1e-5;
            let (mut up, mut dn) = (mu.clone(), mu.clone());
            up[k] += h;
            dn[k] -= h;
            let fd = (loglik(&up, &comps) - loglik(&dn, &comps)) / (2.0 * h);
            worst_grad = worst_grad.max((fd - g[k]).abs() / g[k].abs().max(1.0));
        }
        for _ in 0..10 {
            let (a, b) = (rng.random_range(-30.0..30.0), rng.random_range(-30.0..30.0));
            if (win_probability(a, b) + win_probability(b, a) - 1.0).abs() > 1e-15 {
                return Err(format!("pi({a},{b}) + pi({b},{a}) != 1"));
            }
        }
        let f = fit_of(&m);
        let diag: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1e4)).collect();
        let fd = fit_of(&m.with_diagonal(&diag).unwrap());
        let fs = fit_of(&m.scaled(7.0).unwrap());
        if (&f.mu - &fd.mu).amax() > 1e-8 || (&f.mu - &fs.mu).amax() > 1e-8 {
            return Err("scores change under diagonal edit or scaling".into());
        }
        let merged = merge_journals(&m, 0, 1).unwrap();
        for k in 2..n {
            let odds = merged.get(0, k - 1) / merged.get(k - 1, 0);
            let (ck0, ck1) = (m.get(k, 0), m.get(k, 1));
            let w = (ck0 * (m.get(0, k) / ck0) + ck1 * (m.get(1, k) / ck1)) / (ck0 + ck1);
            if (odds - w).abs() > 1e-12 {
                return Err("merged odds are not the weighted average".into());
            }
        }
    }
    if worst_grad >= 1e-6 {
        return Err(format!("gradient relative error {worst_grad:e}"));
    }
    for _ in 0..20 {
        let m = random_matrix(&mut rng, 3);
        let (f, o) = (fit_of(&m), newton3(&m));
        if (0..3).any(|k| (f.mu[k] - o[k]).abs() > 1e-6) {
            return Err(format!("3-journal fit {:?} vs oracle {o:?}", f.mu.as_slice()));
        }
    }
    let mut worst_ef: f64 = 0.0;
    for _ in 0..30 {
        let n = rng.random_range(3..11);
        let mut m = random_matrix(&mut rng, n);
        if rng.random_bool(0.3) {
            let names = common_names(n);
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            let mut rows: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| m.get(i, j)).collect()).collect();
            for row in rows.iter_mut() {
                row[n - 1] = 0.0;
            }
            m = CitationMatrix::from_rows(&refs, &rows).unwrap();
        }
        let art: Vec<f64> = (0..n).map(|_| rng.random_range(1.0..300.0)).collect();
        let r = eigenfactor_scores(&m, &art, &EigenOptions::default()).map_err(|e| e.to_string())?;
        if r.residual >= 1e-10 || (r.ef.sum() - 100.0).abs() > 1e-9 {
            return Err(format!("eigenfactor residual {} sum {}", r.residual, r.ef.sum()));
        }
        let p = transition_matrix(&normalize_citations(&m), &r.a, 0.85).unwrap();
        let mut a = p - DMatrix::identity(n, n);
        let mut b = DVector::zeros(n);
        a.row_mut(n - 1).fill(1.0);
        b[n - 1] = 1.0;
        let dense = a.lu().solve(&b).ok_or("singular eigen system")?;
        worst_ef = worst_ef.max((&dense - &r.psi).amax());
    }
    if worst_ef > 1e-8 {
        return Err(format!("eigenvector differs from dense solve by {worst_ef:e}"));
    }
    for _ in 0..5 {
        let m = random_matrix(&mut rng, 6);
        let comps = Comparisons::from_matrix(&m);
        let f = fit_of(&m);
        let opts = LassoOptions::default();
        let zero = solve_at_bound(&comps, &adaptive_weights(&f), 0.0, None, &opts).map_err(|e| e.to_string())?;
        if zero.mu_s.amax() > 1e-12 {
            return Err("s = 0 does not give equal scores".into());
        }
        let big = solve_at_bound(&comps, &adaptive_weights(&f), 1e6, None, &opts).map_err(|e| e.to_string())?;
        if (&big.mu_s - f.mu_centered()).amax() > 1e-6 {
            return Err("large s does not reproduce the unpenalized fit".into());
        }
    }
    for _ in 0..20 {
        let n = rng.random_range(2..15);
        let mut d = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in (i + 1)..n {
                let v = rng.random_range(0.0..2.0);
                d[(i, j)] = v;
                d[(j, i)] = v;
            }
        }
        let dend = complete_linkage(&DistanceMatrix { labels: common_names(n), d });
        if dend.merges.windows(2).any(|w| w[1].height < w[0].height) {
            return Err("merge heights not monotone".into());
        }
        let (h1, h2) = (rng.random_range(0.0..1.0), rng.random_range(1.0..2.0));
        let (fine, coarse) = (cut(&dend, h1), cut(&dend, h2));
        if !fine.iter().all(|g| coarse.iter().any(|c| g.iter().all(|x| c.contains(x)))) {
            return Err("cut at lower height does not refine the higher cut".into());
        }
    }
    for _ in 0..10 {
        let (a, b) = (rng.random_range(1..500) as f64, rng.random_range(1..500) as f64);
        let m = CitationMatrix::from_rows(&["A", "B"], &[vec![0.0, a], vec![b, 0.0]]).unwrap();
        let f = fit_of(&m);
        if quasi_variances(&f).map_err(|e| e.to_string())?.worst_rel_error > 1e-10 {
            return Err("2-journal quasi-variances not exact".into());
        }
        let x = rng.random_range(5..200) as f64;
        let m = CitationMatrix::from_rows(&["A", "B", "C"], &[vec![0.0, x, x], vec![x, 0.0, x], vec![x, x, 0.0]]).unwrap();
        let f = fit_of(&m);
        let qv = quasi_variances(&f).map_err(|e| e.to_string())?;
        let v = f.var_diff(0, 1);
        if (0..3).any(|k| (qv.qvar[k] - v / 2.0).abs() > 1e-10 * v) {
            return Err("exchangeable 3-journal quasi-variances not symmetric".into());
        }
    }
    Ok(format!("gradient rel err {worst_grad:.1e}, eigenvector agreement {worst_ef:.1e}"))
}

fn c10() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let fixture = fixture_path();
    let (input, source) = if fixture.exists() {
        (fixture, "fixture")
    } else {
        let p = dir.path().join("small.csv");
        write_small_matrix(&p).map_err(|e| e.to_string())?;
        (p, "synthetic matrix")
    };
    let input = input.to_str().unwrap().to_string();
    let runs = [dir.path().join("a"), dir.path().join("b")];
    let commands: [&[&str]; 3] = [
        &["stigler", "--nsim", "39", "--qvar", "--seed", "20100101"],
        &["lasso", "--points", "41"],
        &["cluster", "--cut", "0.6"],
    ];
    for out in &runs {
        for cmd in commands {
            let mut args: Vec<&str> = cmd.to_vec();
            args.extend(["--input", &input, "--out", out.to_str().unwrap()]);
            let code = citex_cli::dispatch(std::iter::once("citex").chain(args.iter().copied()));
            if code != 0 {
                return Err(format!("{cmd:?} exited with {code}"));
            }
        }
    }
    let mut n = 0;
    for entry in std::fs::read_dir(&runs[0]).map_err(|e| e.to_string())? {
        let name = entry.map_err(|e| e.to_string())?.file_name();
        let name = name.to_str().unwrap();
        let (a, b) = (std::fs::read(runs[0].join(name)).unwrap(), std::fs::read(runs[1].join(name)).unwrap());
        if name.ends_with(".manifest.json") {
            let strip = |v: &[u8]| -> serde_json::Value {
                let mut j: serde_json::Value = serde_json::from_slice(v).unwrap();
                j.as_object_mut().unwrap().remove("timestamp");
                j
            };
            if strip(&a) != strip(&b) {
                return Err(format!("{name} differs beyond the timestamp"));
            }
        } else if a != b {
            return Err(format!("{name} differs between runs"));
        }
        n += name.ends_with(".csv") as usize;
    }
    if !runs[0].join("envelope.csv").exists() {
        return Err("no envelope output".into());
    }
    Ok(format!("{n} CSV files byte-identical across two runs ({source})"))
}

fn main() -> ExitCode {
    let fx = load_fixture();
    let path = fx.as_ref().map_err(Clone::clone).and_then(|f| {
        trace_path(&f.comps, &f.fit, 101, &LassoOptions::default()).map_err(|e| e.to_string())
    });
    let results: Vec<(&str, Check)> = vec![
        ("1 Stigler scores and rank order", c1(&fx)),
        ("2 dispersion", c2(&fx)),
        ("3 quasi standard errors", c3(&fx)),
        ("4 z-test Bka vs JASA", c4(&fx)),
        ("5 journal residuals", c5(&fx)),
        ("6 ranking lasso selection", c6(&fx, &path)),
        ("7 clustering at cut 0.6", c7(&fx)),
        ("8 assessment comparison", c8(&fx, &path)),
        ("9 property suite", c9()),
        ("10 determinism", c10()),
    ];
    let mut failed = 0;
    for (name, r) in &results {
        match r {
            Ok(d) => println!("PASS  {name}: {d}"),
            Err(e) => {
                failed += 1;
                println!("FAIL  {name}: {e}");
            }
        }
    }
    println!("{} of {} criteria pass", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
