use std::fmt::Write as _;
use std::io::Write as _;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use discrete_gb::corpus;
use discrete_gb::expectation::{exact_expectation_by_permutations, mc_index_expectation, PERMUTATION_LIMIT};
use discrete_gb::io;
use discrete_gb::morse::{index_report, parse_function_file, poincare_hopf_chi};
use discrete_gb::percolation::{clique_survival, exact_survival_polynomial, survival_trials, Mode, PSampler};
use discrete_gb::verify::{run_corpus, run_suite, Status, Suite, VerifyConfig};
use discrete_gb::{
    count_cliques, curvature_field, generate, CliqueCounter, Error, Graph, GraphKind, Rational, TrialPlan,
    VertexOrder,
};

use crate::source::load_graph;
use crate::{ChiMethod, Cli, Command, Format, GlobalArgs, ModeArg, SuiteArg};

/// Result of one subcommand in every output format.
pub struct Outcome {
    pub json: Value,
    pub csv: String,
    pub human: String,
    /// Printed verbatim regardless of `--format`.
    pub raw: Option<String>,
    /// A verification failed; exit code 1.
    pub failed: bool,
}

impl Outcome {
    fn new(json: Value, csv: String, human: String) -> Self {
        Self { json, csv, human, raw: None, failed: false }
    }
}

pub fn emit(global: &GlobalArgs, outcome: &Outcome) -> Result<()> {
    let text = match (&outcome.raw, global.format) {
        (Some(raw), _) => raw.clone(),
        (None, Format::Json) => serde_json::to_string_pretty(&outcome.json)? + "\n",
        (None, Format::Csv) => outcome.csv.clone(),
        (None, Format::Human) => outcome.human.clone(),
    };
    match &global.output {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let seed = cli.global.seed;
    match &cli.command {
        Command::Generate { spec, edges } => {
            let (_, g) = load_graph(spec, seed)?;
            let mut out = Outcome::new(io::to_json_value(&g), io::to_edge_list(&g), io::to_edge_list(&g));
            if *edges {
                out.raw = Some(io::to_edge_list(&g));
            }
            Ok(out)
        }
        Command::Chi { graph, method } => {
            let (name, g) = load_graph(graph, seed)?;
            chi(&name, &g, *method, seed)
        }
        Command::Curvature { graph } => {
            let (name, g) = load_graph(graph, seed)?;
            Ok(curvature(&name, &g))
        }
        Command::Index { graph, function, .. } => {
            let (name, g) = load_graph(graph, seed)?;
            let f = match function {
                Some(path) => {
                    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                    parse_function_file(&text, g.order()).with_context(|| format!("parsing {}", path.display()))?
                }
                None => VertexOrder::seeded(g.order(), seed),
            };
            index(&name, &g, &f)
        }
        Command::Expectation { graph, samples, exact, degree_cap, permutation_oracle } => {
            let (name, g) = load_graph(graph, seed)?;
            expectation(&name, &g, *samples, seed, exact.then_some(*degree_cap), *permutation_oracle)
        }
        Command::Percolation { graph, k, trials, mode, fixed_p, grid, rows } => {
            let (name, g) = load_graph(graph, seed)?;
            let mode = match mode {
                ModeArg::Site => Mode::Site,
                ModeArg::Bond => Mode::Bond,
            };
            let sampler = match (fixed_p, grid) {
                (Some(p), _) => PSampler::Fixed(*p),
                (None, Some(strata)) => PSampler::Stratified { strata: *strata },
                (None, None) => PSampler::Uniform,
            };
            percolation(&name, &g, *k, mode, sampler, &TrialPlan::new(*trials, seed), *rows)
        }
        Command::Verify { suite, graph, orders, degree_cap, percolation_trials } => {
            let config = VerifyConfig {
                seed,
                orders: *orders,
                degree_cap: *degree_cap,
                percolation_trials: *percolation_trials,
                ..VerifyConfig::default()
            };
            let suites = match suite_of(*suite) {
                Some(s) => vec![s],
                None => Suite::ALL.to_vec(),
            };
            let checks = match graph {
                Some(arg) => {
                    let (name, g) = load_graph(arg, seed)?;
                    let mut out = Vec::new();
                    for &s in &suites {
                        out.extend(run_suite(&name, &g, s, &config)?);
                    }
                    out
                }
                None => run_corpus(&corpus::standard(), &suites, &config)?,
            };
            verify(checks)
        }
        Command::Bench { n, q, seeds, repetitions, budget } => bench(*n, *q, seed, *seeds, *repetitions, *budget),
    }
}

fn suite_of(arg: SuiteArg) -> Option<Suite> {
    Some(match arg {
        SuiteArg::GaussBonnet => Suite::GaussBonnet,
        SuiteArg::PoincareHopf => Suite::PoincareHopf,
        SuiteArg::Transfer => Suite::Transfer,
        SuiteArg::Intermediate => Suite::Intermediate,
        SuiteArg::Stability => Suite::Stability,
        SuiteArg::Expectation => Suite::Expectation,
        SuiteArg::Averaging => Suite::Averaging,
        SuiteArg::Percolation => Suite::Percolation,
        SuiteArg::All => return None,
    })
}

fn millis(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn chi(name: &str, g: &Graph, method: ChiMethod, seed: u64) -> Result<Outcome> {
    let methods = match method {
        ChiMethod::All => vec![ChiMethod::Cliques, ChiMethod::Curvature, ChiMethod::Index],
        m => vec![m],
    };
    let mut rows = Vec::new();
    for m in methods {
        let start = Instant::now();
        let (label, value) = match m {
            ChiMethod::Cliques => ("cliques", count_cliques(g).euler_characteristic()),
            ChiMethod::Curvature => {
                let total = curvature_field::<Rational>(g).total;
                if !total.is_integer() {
                    bail!("curvature total {total} is not an integer");
                }
                let value = i64::try_from(total.to_integer()).context("curvature total out of range")?;
                ("curvature", value)
            }
            _ => ("index", poincare_hopf_chi(g, &VertexOrder::seeded(g.order(), seed))?),
        };
        rows.push((label, value, millis(start)));
    }
    let agree = rows.windows(2).all(|w| w[0].1 == w[1].1);
    let json = json!({
        "graph": name,
        "vertices": g.order(),
        "edges": g.size(),
        "methods": rows.iter().map(|(m, chi, ms)| json!({"method": m, "chi": chi, "millis": ms})).collect::<Vec<_>>(),
        "agree": agree,
    });
    let mut csv = String::from("method,chi,millis\n");
    let mut human = format!("{name}: {} vertices, {} edges\n", g.order(), g.size());
    for (m, chi, ms) in &rows {
        writeln!(csv, "{m},{chi},{ms:.3}")?;
        writeln!(human, "  chi ({m}) = {chi}  [{ms:.1} ms]")?;
    }
    if !agree {
        human.push_str("  routes disagree\n");
    }
    let mut out = Outcome::new(json, csv, human);
    out.failed = !agree;
    Ok(out)
}

fn curvature(name: &str, g: &Graph) -> Outcome {
    let field = curvature_field::<Rational>(g);
    let json = json!({ "graph": name, "curvature": field });
    let mut csv = String::from("vertex,curvature\n");
    let mut human = String::new();
    for (x, k) in field.values.iter().enumerate() {
        let _ = writeln!(csv, "{x},{k}");
        let _ = writeln!(human, "K({x}) = {k}");
    }
    let _ = writeln!(csv, "total,{}", field.total);
    let _ = writeln!(human, "sum = {}", field.total);
    Outcome::new(json, csv, human)
}

fn index(name: &str, g: &Graph, f: &VertexOrder) -> Result<Outcome> {
    let report = index_report::<Rational>(g, f)?;
    let chi = count_cliques(g).euler_characteristic();
    let mut json = serde_json::to_value(&report)?;
    json["graph"] = json!(name);
    json["chi"] = json!(chi);
    let mut csv = String::from("vertex,rank,index,symmetric\n");
    let mut human = String::new();
    for x in g.vertices() {
        writeln!(csv, "{x},{},{},{}", f.rank(x), report.index[x], report.symmetric[x])?;
        writeln!(human, "i({x}) = {}  j({x}) = {}", report.index[x], report.symmetric[x])?;
    }
    writeln!(human, "sum i = {}  sum j = {}  chi = {chi}", report.sum_index, report.sum_symmetric)?;
    Ok(Outcome::new(json, csv, human))
}

fn expectation(
    name: &str,
    g: &Graph,
    samples: u64,
    seed: u64,
    exact_cap: Option<usize>,
    permutation_oracle: bool,
) -> Result<Outcome> {
    let mut report = mc_index_expectation::<f64>(g, &TrialPlan::new(samples, seed))?;
    if let Some(cap) = exact_cap {
        report.attach_exact(g, cap)?;
    }
    let by_perm = if permutation_oracle {
        if g.order() > PERMUTATION_LIMIT {
            bail!("permutation oracle needs at most {PERMUTATION_LIMIT} vertices, got {}", g.order());
        }
        Some(exact_expectation_by_permutations(g)?)
    } else {
        None
    };
    let mut json = serde_json::to_value(&report)?;
    if let (Some(values), Some(rows)) = (&by_perm, json["vertices"].as_array_mut()) {
        for (row, v) in rows.iter_mut().zip(values) {
            row["permutation"] = json!(v.to_string());
        }
    }
    json["graph"] = json!(name);

    let mut csv = String::from("vertex,estimate,stderr,samples,exact,permutation,curvature\n");
    let mut human = String::new();
    for row in &report.rows {
        let se = row.stats.stderr.map(|s| s.to_string()).unwrap_or_default();
        let exact = row.exact.as_ref().map(ToString::to_string).unwrap_or_default();
        let perm = by_perm.as_ref().map(|p| p[row.vertex].to_string()).unwrap_or_default();
        writeln!(csv, "{},{},{se},{},{exact},{perm},{}", row.vertex, row.stats.mean, row.stats.samples, row.curvature)?;
        write!(human, "E[i({})] ~ {:.5}", row.vertex, row.stats.mean)?;
        if let Some(s) = row.stats.stderr {
            write!(human, " ± {s:.5}")?;
        }
        if !exact.is_empty() {
            write!(human, "  exact {exact}")?;
        }
        if let Some(reason) = &row.skipped {
            write!(human, "  exact skipped ({reason})")?;
        }
        if !perm.is_empty() {
            write!(human, "  permutations {perm}")?;
        }
        writeln!(human, "  K = {}", row.curvature)?;
    }
    Ok(Outcome::new(json, csv, human))
}

fn percolation(
    name: &str,
    g: &Graph,
    k: usize,
    mode: Mode,
    sampler: PSampler,
    plan: &TrialPlan,
    rows: bool,
) -> Result<Outcome> {
    let est = clique_survival::<f64>(g, k, mode, sampler, plan)?;
    let polynomial = exact_survival_polynomial(g, k, mode)?;
    let mut json = serde_json::to_value(&est)?;
    json["graph"] = json!(name);
    json["polynomial"] = json!({
        "coefficient": polynomial.coefficient,
        "degree": polynomial.degree,
        "normalized_integral": polynomial.normalized_integral::<Rational>().to_string(),
    });
    let se = est.stderr.map(|s| s.to_string()).unwrap_or_default();
    let exact = est.exact.as_ref().map(ToString::to_string).unwrap_or_default();
    let mut csv = String::new();
    if rows {
        let trials = survival_trials(g, k, mode, sampler, plan)?;
        json["rows"] = serde_json::to_value(&trials)?;
        csv.push_str("trial,p,survivors,ratio\n");
        for r in &trials {
            writeln!(csv, "{},{},{},{}", r.trial, r.p, r.survivors, r.ratio)?;
        }
    } else {
        csv.push_str("mode,k,trials,seed,host_count,estimate,stderr,target,exact\n");
        writeln!(
            csv,
            "{},{},{},{},{},{},{se},{},{exact}",
            est.mode, est.k, est.trials, est.seed, est.host_count, est.estimate, est.target
        )?;
    }
    let mut human = format!(
        "{name}: {} survival of K{} ({} host cliques, {} trials)\n  estimate {:.5}",
        est.mode,
        k + 1,
        est.host_count,
        est.trials,
        est.estimate
    );
    if let Some(s) = est.stderr {
        write!(human, " ± {s:.5}")?;
    }
    writeln!(human, "\n  target {:.5}{}", est.target, if exact.is_empty() { String::new() } else { format!(" = {exact}") })?;
    Ok(Outcome::new(json, csv, human))
}

fn verify(checks: Vec<discrete_gb::verify::Check>) -> Result<Outcome> {
    let count = |pred: fn(&Status) -> bool| checks.iter().filter(|c| pred(&c.status)).count();
    let passed = count(|s| *s == Status::Pass);
    let failed = count(|s| *s == Status::Fail);
    let skipped = count(|s| matches!(s, Status::Skipped(_)));
    let json = json!({ "passed": passed, "failed": failed, "skipped": skipped, "checks": checks });
    let mut csv = String::from("graph,suite,check,lhs,rhs,status,reason\n");
    let mut human = String::new();
    for c in &checks {
        let (status, reason) = match &c.status {
            Status::Pass => ("pass", ""),
            Status::Fail => ("fail", ""),
            Status::Skipped(r) => ("skipped", r.as_str()),
        };
        writeln!(csv, "{},{},{},{},{},{status},{}", csv_field(&c.graph), c.suite, csv_field(&c.check), csv_field(&c.lhs), csv_field(&c.rhs), csv_field(reason))?;
        match &c.status {
            Status::Pass => {}
            Status::Fail => writeln!(human, "fail    {} {} {}: {} vs {}", c.graph, c.suite, c.check, c.lhs, c.rhs)?,
            Status::Skipped(r) => writeln!(human, "skipped {} {} {}: {r}", c.graph, c.suite, c.check)?,
        }
    }
    writeln!(human, "{passed} passed, {failed} failed, {skipped} skipped")?;
    let mut out = Outcome::new(json, csv, human);
    out.failed = failed > 0;
    Ok(out)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn bench(n: usize, q: f64, seed: u64, seeds: u64, repetitions: usize, budget: u64) -> Result<Outcome> {
    let mut rows = Vec::new();
    for s in seed..seed + seeds {
        let g = generate(&GraphKind::ErdosRenyi { n, q }, s)?;
        for _ in 0..repetitions {
            let start = Instant::now();
            let cliques = CliqueCounter::new().abort_after(budget).parallel(true).count(&g);
            let clique_ms = millis(start);
            let start = Instant::now();
            let by_index = poincare_hopf_chi(&g, &VertexOrder::seeded(n, s))?;
            let index_ms = millis(start);
            let (clique_chi, clique_status) = match cliques {
                Ok(f) => (Some(f.euler_characteristic()), "ok"),
                Err(Error::BudgetExceeded(_)) => (None, "timeout"),
                Err(e) => return Err(e.into()),
            };
            let index_status = match clique_chi {
                Some(c) if c != by_index => "mismatch",
                _ => "ok",
            };
            rows.push(("cliques", s, clique_ms, clique_chi, clique_status));
            rows.push(("index", s, index_ms, Some(by_index), index_status));
        }
    }
    let mut csv = String::from("method,n,q,seed,millis,chi,status\n");
    let mut human = String::new();
    for (method, s, ms, chi, status) in &rows {
        let chi = chi.map(|c| c.to_string()).unwrap_or_default();
        writeln!(csv, "{method},{n},{q},{s},{ms:.3},{chi},{status}")?;
        writeln!(human, "{method:8} n={n} q={q} seed={s}: {ms:9.2} ms  chi={chi} {status}")?;
    }
    let json = Value::Array(
        rows.iter()
            .map(|(method, s, ms, chi, status)| {
                json!({"method": method, "n": n, "q": q, "seed": s, "millis": ms, "chi": chi, "status": status})
            })
            .collect(),
    );
    let mut out = Outcome::new(json, csv, human);
    out.failed = rows.iter().any(|r| r.4 == "mismatch");
    Ok(out)
}
