//! One function per subcommand. Each writes its artifacts and a manifest.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use citex_core::assess::{self, Aggregate, Transform};
use citex_core::catalog::statistics_journals;
use citex_core::cluster::{complete_linkage, correlation_distance, cut};
use citex_core::corpus::{apply_aliases, exchange_totals, parse_aliases, parse_matrix};
use citex_core::descriptives::{impact_family, parse_yearly, summarize, IndexKind};
use citex_core::eigenfactor::{eigenfactor_scores, EigenOptions};
use citex_core::quasivar::{quasi_variances, z_test};
use citex_core::rankinglasso::{trace_path, LassoOptions};
use citex_core::report::{format_opt, format_sig6, rank_descending, rank_table, write_rank_table};
use citex_core::stigler::{self, journal_residuals, simulation_envelope, Constraint, EnvelopeOptions};
use citex_core::{CitationMatrix, Comparisons, FitOptions, Journal, MatrixFormat};

use crate::error::CliError;
use crate::output::OutDir;
use crate::svg;
use crate::Io;

type Res = Result<PathBuf, CliError>;

fn f(x: f64) -> String {
    format_sig6(x)
}

fn load(io: &Io, out: &mut OutDir) -> Result<CitationMatrix, CliError> {
    let format: MatrixFormat = io.format.parse().map_err(|_| CliError::Usage(format!("--format: unknown format `{}`", io.format)))?;
    out.param("format", &io.format);
    let text = out.read_input("--input", &io.input)?;
    Ok(parse_matrix(&text, format)?.with_metadata(&statistics_journals()))
}

fn open(io: &Io, command: &str) -> Result<OutDir, CliError> {
    let mut out = OutDir::create(&io.out, command, io.seed)?;
    out.param("seed", io.seed);
    Ok(out)
}

fn parse_constraint(s: &str, labels: &[String]) -> Result<Constraint, CliError> {
    match s {
        "sum" => Ok(Constraint::Sum),
        _ => {
            let key = s
                .strip_prefix("ref:")
                .ok_or_else(|| CliError::Usage(format!("--constraint: expected `sum` or `ref:ABBREV`, got `{s}`")))?;
            labels
                .iter()
                .position(|l| l == key)
                .map(Constraint::Reference)
                .ok_or_else(|| CliError::Usage(format!("--constraint: unknown journal `{key}`")))
        }
    }
}

/// Reads `journal,<value>` using the first column after `journal`.
fn parse_scores(text: &str, flag: &str) -> Result<BTreeMap<String, f64>, CliError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut out = BTreeMap::new();
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Compute(format!("{flag}: {e}")))?;
        let key = rec.get(0).unwrap_or("").to_string();
        let raw = rec.get(1).unwrap_or("");
        if raw == "NA" || raw.is_empty() {
            continue;
        }
        let v: f64 = raw
            .parse()
            .map_err(|_| CliError::Compute(format!("{flag}: line {}: bad number `{raw}`", k + 2)))?;
        out.insert(key, v);
    }
    Ok(out)
}

fn articles_for(text: &str, labels: &[String]) -> Result<Vec<f64>, CliError> {
    let map = parse_scores(text, "--articles")?;
    let missing: Vec<&str> = labels.iter().filter(|l| !map.contains_key(*l)).map(String::as_str).collect();
    if !missing.is_empty() {
        return Err(CliError::Compute(format!("--articles: no count for {}", missing.join(", "))));
    }
    Ok(labels.iter().map(|l| map[l]).collect())
}

fn ranks_of(labels: &[String], values: &[f64]) -> Vec<String> {
    rank_descending(labels, values).iter().map(usize::to_string).collect()
}

pub fn describe(io: &Io, stat: Option<&str>) -> Res {
    let mut out = open(io, "describe")?;
    let c = load(io, &mut out)?;
    let keys: Vec<String> = match stat {
        Some(s) => s.split(',').map(|k| k.trim().to_string()).collect(),
        None => c.journals().iter().filter(|j| !j.is_other()).map(|j| j.abbrev.clone()).collect(),
    };
    out.param("stat", keys.join(","));
    let refs: Vec<&str> = keys.iter().map(String::as_str).collect();
    let rows: Vec<Vec<String>> = summarize(&c, &refs)?
        .into_iter()
        .map(|s| {
            vec![
                s.journal,
                f(s.citing_total),
                format_opt(s.citing_self_prop),
                format_opt(s.citing_stat_prop),
                f(s.cited_total),
                format_opt(s.cited_self_prop),
                format_opt(s.cited_stat_prop),
            ]
        })
        .collect();
    out.write_csv(
        "describe.csv",
        &["journal", "citing_total", "citing_self", "citing_stat", "cited_total", "cited_self", "cited_stat"],
        &rows,
    )?;
    out.finish()
}

pub fn index(io: &Io, kind: &str) -> Res {
    let kind: IndexKind = kind.parse().map_err(|_| CliError::Usage(format!("--kind: expected II, IF, IFno or IF5, got `{kind}`")))?;
    let mut out = open(io, "index")?;
    out.param("kind", kind);
    let text = out.read_input("--input", &io.input)?;
    let yearly = parse_yearly(&text)?;
    let mut labels = Vec::new();
    let mut values = Vec::new();
    let mut rows = Vec::new();
    for y in &yearly {
        match impact_family(y, kind) {
            Ok(s) => {
                labels.push(s.journal.clone());
                values.push(s.value);
            }
            Err(e) => {
                log::warn!("{e}");
                rows.push(vec![y.journal.clone(), "NA".into(), "NA".into()]);
            }
        }
    }
    let ranks = ranks_of(&labels, &values);
    let mut scored: Vec<Vec<String>> = labels.iter().zip(&values).zip(ranks).map(|((l, v), r)| vec![l.clone(), f(*v), r]).collect();
    scored.append(&mut rows);
    out.write_csv(&format!("index_{kind}.csv"), &["journal", "value", "rank"], &scored)?;
    out.finish()
}

pub fn cluster(io: &Io, h: f64) -> Res {
    let mut out = open(io, "cluster")?;
    out.param("cut", f(h));
    let c = load(io, &mut out)?.without_other();
    let labels = c.abbrevs();
    let dist = correlation_distance(&exchange_totals(&c), &labels)?;
    let dend = complete_linkage(&dist);
    let groups = cut(&dend, h);
    let mut cluster_of = vec![0; labels.len()];
    for (g, members) in groups.iter().enumerate() {
        for &i in members {
            cluster_of[i] = g + 1;
        }
    }
    let rows: Vec<Vec<String>> = dend.leaf_order.iter().map(|&i| vec![labels[i].clone(), cluster_of[i].to_string()]).collect();
    out.write_csv("clusters.csv", &["journal", "cluster"], &rows)?;
    let n = labels.len();
    let name = |id: usize| if id < n { labels[id].clone() } else { format!("node{id}") };
    let merges: Vec<Vec<String>> = dend
        .merges
        .iter()
        .enumerate()
        .map(|(k, m)| vec![format!("node{}", n + k), name(m.left), name(m.right), f(m.height), m.size.to_string()])
        .collect();
    out.write_csv("merges.csv", &["node", "left", "right", "height", "size"], &merges)?;
    out.write("dendrogram.svg", svg::dendrogram(&dend, &groups, h).as_bytes())?;
    println!("{} clusters at cut {}", groups.len(), f(h));
    out.finish()
}

pub fn eigenfactor(io: &Io, articles: Option<&Path>, lambda: f64, tol: f64) -> Res {
    let mut out = open(io, "eigenfactor")?;
    out.param("lambda", f(lambda));
    out.param("tol", f(tol));
    let c = load(io, &mut out)?.without_other();
    let labels = c.abbrevs();
    let counts = match articles {
        Some(p) => articles_for(&out.read_input("--articles", p)?, &labels)?,
        None => {
            log::warn!("no --articles given; using equal article counts");
            vec![1.0; labels.len()]
        }
    };
    let r = eigenfactor_scores(&c, &counts, &EigenOptions { lambda, tol, ..Default::default() })?;
    let ef: Vec<f64> = r.ef.iter().copied().collect();
    let ai: Vec<f64> = r.ai.iter().copied().collect();
    let ref_ef = ranks_of(&labels, &ef);
    let ai_defined: Vec<usize> = (0..labels.len()).filter(|&i| !ai[i].is_nan()).collect();
    let ai_ranks = rank_descending(
        &ai_defined.iter().map(|&i| labels[i].clone()).collect::<Vec<_>>(),
        &ai_defined.iter().map(|&i| ai[i]).collect::<Vec<_>>(),
    );
    let mut rank_ai = vec!["NA".to_string(); labels.len()];
    for (k, &i) in ai_defined.iter().enumerate() {
        rank_ai[i] = ai_ranks[k].to_string();
    }
    let rows: Vec<Vec<String>> = (0..labels.len())
        .map(|i| vec![labels[i].clone(), f(ef[i]), f(ai[i]), ref_ef[i].clone(), rank_ai[i].clone()])
        .collect();
    out.write_csv("eigenfactor.csv", &["journal", "EF", "AI", "rank_EF", "rank_AI"], &rows)?;
    out.finish()
}

pub fn stigler(io: &Io, constraint: &str, tol: f64, qvar: bool, ztest: Option<&str>, nsim: usize) -> Res {
    let mut out = open(io, "stigler")?;
    out.param("constraint", constraint);
    out.param("tol", f(tol));
    out.param("qvar", qvar);
    out.param("nsim", nsim);
    let c = load(io, &mut out)?;
    let comps = Comparisons::from_matrix(&c);
    let labels = comps.labels.clone();
    let constraint = parse_constraint(constraint, &labels)?;
    let pair = match ztest {
        Some(z) => {
            out.param("ztest", z);
            let (a, b) = z
                .split_once(',')
                .ok_or_else(|| CliError::Usage(format!("--ztest: expected A,B, got `{z}`")))?;
            let idx = |k: &str| {
                labels
                    .iter()
                    .position(|l| l == k.trim())
                    .ok_or_else(|| CliError::Usage(format!("--ztest: unknown journal `{k}`")))
            };
            Some((idx(a)?, idx(b)?))
        }
        None => None,
    };
    let fit = stigler::fit(&comps, &FitOptions { tol, constraint, ..Default::default() })?;
    if !fit.converged {
        return Err(CliError::Compute(format!("Stigler fit did not converge (score norm {})", f(fit.score_norm))));
    }
    let qv = quasi_variances(&fit)?;
    let mu: Vec<f64> = fit.mu.iter().copied().collect();
    let qse = qv.qse_all();
    let ranks = ranks_of(&labels, &mu);
    let rows: Vec<Vec<String>> = (0..labels.len()).map(|i| vec![labels[i].clone(), f(mu[i]), f(qse[i]), ranks[i].clone()]).collect();
    out.write_csv("stigler.csv", &["journal", "mu", "qse", "rank"], &rows)?;

    let summary = vec![
        vec!["journals".into(), labels.len().to_string()],
        vec!["pairs".into(), fit.m.to_string()],
        vec!["phi".into(), format_opt(fit.phi)],
        vec!["loglik".into(), f(fit.loglik)],
        vec!["iterations".into(), fit.iterations.to_string()],
        vec!["qvar_worst_rel_error".into(), f(qv.worst_rel_error)],
    ];
    out.write_csv("stigler_summary.csv", &["statistic", "value"], &summary)?;

    let res: Vec<f64> = journal_residuals(&fit, &comps)?.iter().copied().collect();
    let rows: Vec<Vec<String>> = (0..labels.len()).map(|i| vec![labels[i].clone(), f(res[i])]).collect();
    out.write_csv("residuals.csv", &["journal", "residual"], &rows)?;
    if nsim > 0 {
        let env = simulation_envelope(&fit, &comps, &EnvelopeOptions { n_sim: nsim, seed: io.seed, ..Default::default() })?;
        let mut sorted = res.clone();
        sorted.sort_by(f64::total_cmp);
        let rows: Vec<Vec<String>> = (0..sorted.len())
            .map(|k| vec![(k + 1).to_string(), f(sorted[k]), f(env.lower[k]), f(env.median[k]), f(env.upper[k])])
            .collect();
        out.write_csv("envelope.csv", &["order", "observed", "lower", "median", "upper"], &rows)?;
        println!("{} of {} sorted residuals inside the {} envelope", env.count_inside(&res), res.len(), f(env.level));
    }
    if qvar {
        let rows: Vec<Vec<String>> = (0..labels.len())
            .map(|i| vec![labels[i].clone(), f(fit.vcov[(i, i)].sqrt()), f(qv.qvar[i]), f(qse[i])])
            .collect();
        out.write_csv("quasivar.csv", &["journal", "se", "qvar", "qse"], &rows)?;
        let rows: Vec<Vec<String>> = qv
            .per_pair_rel_error
            .iter()
            .map(|(&(i, j), e)| vec![labels[i].clone(), labels[j].clone(), f(*e)])
            .collect();
        out.write_csv("quasivar_errors.csv", &["journal_i", "journal_j", "rel_error"], &rows)?;
    }
    if let Some((i, j)) = pair {
        let (za, ze) = z_test(&qv, &fit, i, j)?;
        println!("z({} - {}): approx {} exact {}", labels[i], labels[j], f(za), f(ze));
        out.write_csv(
            "ztest.csv",
            &["journal_i", "journal_j", "difference", "z_approx", "z_exact"],
            &[vec![labels[i].clone(), labels[j].clone(), f(mu[i] - mu[j]), f(za), f(ze)]],
        )?;
    }
    let z = 1.96;
    let half: Vec<f64> = qse.iter().map(|q| z * q).collect();
    out.write("centipede.svg", svg::centipede(&labels, &mu, &half).as_bytes())?;
    out.finish()
}

pub fn lasso(io: &Io, points: usize, tol: f64) -> Res {
    if points < 2 {
        return Err(CliError::Usage("--points: need at least 2".into()));
    }
    let mut out = open(io, "lasso")?;
    out.param("points", points);
    out.param("tol", f(tol));
    let c = load(io, &mut out)?;
    let comps = Comparisons::from_matrix(&c);
    let fit = stigler::fit(&comps, &FitOptions::default())?;
    let path = trace_path(&comps, &fit, points, &LassoOptions { outer_tol: tol, ..Default::default() })?;
    let labels = &path.labels;
    let mut header = vec!["s", "p", "tic", "loglik", "penalty"];
    header.extend(labels.iter().map(String::as_str));
    let rows: Vec<Vec<String>> = path
        .points
        .iter()
        .map(|pt| {
            let mut r = vec![f(pt.s), pt.p.to_string(), f(pt.tic), f(pt.loglik), f(pt.penalty)];
            r.extend(pt.mu_s.iter().map(|v| f(*v)));
            r
        })
        .collect();
    out.write_csv("lasso_path.csv", &header, &rows)?;
    let sel = path.selected_point();
    let mu: Vec<f64> = sel.mu_s.iter().copied().collect();
    let mut group_of = vec![0; labels.len()];
    for (g, members) in sel.groups.iter().enumerate() {
        for &i in members {
            group_of[i] = g + 1;
        }
    }
    let ranks = ranks_of(labels, &mu);
    let mut order: Vec<usize> = (0..labels.len()).collect();
    order.sort_by(|&a, &b| mu[b].total_cmp(&mu[a]).then_with(|| labels[a].cmp(&labels[b])));
    let rows: Vec<Vec<String>> = order.iter().map(|&i| vec![labels[i].clone(), f(mu[i]), group_of[i].to_string(), ranks[i].clone()]).collect();
    out.write_csv("lasso_grouped.csv", &["journal", "mu", "group", "rank"], &rows)?;
    let s: Vec<f64> = path.points.iter().map(|p| p.s).collect();
    let paths: Vec<Vec<f64>> = path.points.iter().map(|p| p.mu_s.iter().copied().collect()).collect();
    let qle: Vec<f64> = fit.mu_centered().iter().copied().collect();
    out.write("lasso_path.svg", svg::lasso_path(labels, &s, &paths, &qle, path.selected).as_bytes())?;
    println!("TIC selects {} groups at s = {}", sel.p, f(sel.s));
    out.finish()
}

pub struct AssessArgs {
    pub out: PathBuf,
    pub scores: PathBuf,
    pub outputs: PathBuf,
    pub profiles: PathBuf,
    pub aliases: Option<PathBuf>,
    pub min_coverage: f64,
    pub seed: u64,
}

pub fn assess(a: &AssessArgs) -> Res {
    let mut out = OutDir::create(&a.out, "assess", a.seed)?;
    out.param("seed", a.seed);
    out.param("min_coverage", f(a.min_coverage));
    let scores = parse_scores(&out.read_input("--scores", &a.scores)?, "--scores")?;
    let mut corpus: Vec<Journal> = statistics_journals();
    for k in scores.keys() {
        if !corpus.iter().any(|j| &j.abbrev == k) {
            corpus.push(Journal::new(corpus.len(), k.clone()));
        }
    }
    if let Some(p) = &a.aliases {
        let text = out.read_input("--aliases", p)?;
        apply_aliases(&mut corpus, &parse_aliases(&text)?)?;
    }
    let outputs = assess::parse_outputs(&out.read_input("--outputs", &a.outputs)?, &corpus)?;
    let profiles = assess::parse_profiles(&out.read_input("--profiles", &a.profiles)?)?;
    let units = assess::score_units(&outputs, &profiles, &scores, Transform::Exponentiate, Aggregate::Mean);
    let rows: Vec<Vec<String>> = units
        .iter()
        .map(|u| vec![u.unit.clone(), format_opt(u.rae_score), format_opt(u.mean_journal_score), f(u.coverage_ratio)])
        .collect();
    out.write_csv("assess.csv", &["unit", "rae_score", "mean_score", "coverage"], &rows)?;
    let mut summary = Vec::new();
    for (name, cov) in [("all", 0.0), ("min_coverage", a.min_coverage)] {
        let n = assess::eligible(&units, cov).len();
        let r = assess::correlate(&units, cov).map(f).unwrap_or_else(|e| {
            log::warn!("{name}: {e}");
            "NA".into()
        });
        println!("{name}: {n} units, correlation {r}");
        summary.push(vec![name.to_string(), f(cov), n.to_string(), r]);
    }
    out.write_csv("assess_summary.csv", &["subset", "min_coverage", "units", "correlation"], &summary)?;
    let kept = assess::eligible(&units, 0.0);
    let labels: Vec<String> = kept.iter().map(|u| u.unit.clone()).collect();
    let x: Vec<f64> = kept.iter().map(|u| u.mean_journal_score.unwrap_or(f64::NAN)).collect();
    let y: Vec<f64> = kept.iter().map(|u| u.rae_score.unwrap_or(f64::NAN)).collect();
    out.write("assess.svg", svg::scatter(&labels, &x, &y, "mean exponentiated journal score", "assessment score").as_bytes())?;
    out.finish()
}

pub fn report(io: &Io, points: usize, yearly: Option<&Path>, articles: Option<&Path>, lambda: f64) -> Res {
    let mut out = open(io, "report")?;
    out.param("points", points);
    out.param("lambda", f(lambda));
    let c = load(io, &mut out)?;
    let comps = Comparisons::from_matrix(&c);
    let fit = stigler::fit(&comps, &FitOptions::default())?;
    let qv = quasi_variances(&fit)?;
    let path = trace_path(&comps, &fit, points, &LassoOptions::default())?;
    let labels = comps.labels.clone();
    let mu: Vec<f64> = fit.mu.iter().copied().collect();
    let qse = qv.qse_all();
    let grouped: Vec<f64> = path.selected_point().mu_s.iter().copied().collect();
    let mut order: Vec<usize> = (0..labels.len()).collect();
    order.sort_by(|&a, &b| mu[b].total_cmp(&mu[a]).then_with(|| labels[a].cmp(&labels[b])));
    let rows: Vec<Vec<String>> = order.iter().map(|&i| vec![labels[i].clone(), f(mu[i]), f(qse[i]), f(grouped[i])]).collect();
    out.write_csv("report.csv", &["journal", "SM", "QSE", "SM_grouped"], &rows)?;

    let mut methods: Vec<(String, BTreeMap<String, f64>)> = Vec::new();
    if let Some(p) = yearly {
        let ys = parse_yearly(&out.read_input("--yearly", p)?)?;
        for kind in IndexKind::ALL {
            let col = ys
                .iter()
                .filter_map(|y| impact_family(y, kind).ok())
                .map(|s| (s.journal, s.value))
                .collect();
            methods.push((kind.to_string(), col));
        }
    }
    if let Some(p) = articles {
        let m = c.without_other();
        let counts = articles_for(&out.read_input("--articles", p)?, &m.abbrevs())?;
        let r = eigenfactor_scores(&m, &counts, &EigenOptions { lambda, ..Default::default() })?;
        methods.push(("AI".into(), m.abbrevs().into_iter().zip(r.ai.iter().copied()).collect()));
    }
    if !methods.is_empty() {
        methods.push(("SM".into(), labels.iter().cloned().zip(mu.iter().copied()).collect()));
        let table = rank_table(&methods)?;
        let mut buf = Vec::new();
        write_rank_table(&table, &mut buf)?;
        out.write("ranks.csv", &buf)?;
    }
    out.finish()
}
