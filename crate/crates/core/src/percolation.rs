//! Site and bond decimation of a host graph and the survival rate of
//! cliques when the keep probability `p` is itself uniform on `[0, 1]`.
//!
//! A clique `K_{k+1}` survives site decimation iff all `k + 1` vertices are
//! kept and bond decimation iff all `C(k+1, 2)` edges are kept. By linearity
//! of expectation, overlaps between cliques do not matter:
//! `E_p[v_k^p] = v_k p^{k+1}` (site), `v_k p^{C(k+1,2)}` (bond), and
//! averaging over `p` gives the host-independent rates `1/(k+2)` and
//! `1/(C(k+1,2)+1)`.

use std::fmt;
use std::str::FromStr;

use num_traits::{Float, FromPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::clique::CliqueCounter;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::{binomial, Rational, Scalar};
use crate::seeding::TrialPlan;
use crate::stats::{IntegerMoments, SampleStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Site,
    Bond,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Site => "site",
            Mode::Bond => "bond",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "site" => Ok(Mode::Site),
            "bond" => Ok(Mode::Bond),
            other => Err(Error::Invalid(format!("unknown percolation mode `{other}`"))),
        }
    }
}

impl Mode {
    /// Number of independent keep events a `K_{k+1}` needs to survive.
    pub fn survival_degree(self, k: usize) -> u32 {
        let k = k as u64;
        match self {
            Mode::Site => (k + 1) as u32,
            Mode::Bond => binomial(k + 1, 2).expect("small") as u32,
        }
    }

    /// `∫_0^1 p^degree dp = 1/(degree + 1)`.
    pub fn survival_rate<T: Scalar>(self, k: usize) -> T {
        T::ratio(1, i64::from(self.survival_degree(k)) + 1)
    }
}

/// Result of one decimation.
#[derive(Debug, Clone, PartialEq)]
pub struct PercolationTrial {
    pub mode: Mode,
    pub p: f64,
    pub surviving: Graph,
    /// Host id of each surviving vertex.
    pub kept: Vec<usize>,
}

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Probability(p))
    }
}

/// Keeps each vertex independently with probability `p`.
pub fn site_decimate(graph: &Graph, p: f64, seed: u64) -> Result<PercolationTrial> {
    check_p(p)?;
    Ok(site_decimate_with(graph, p, &mut ChaCha8Rng::seed_from_u64(seed)))
}

/// Keeps each edge independently with probability `p`.
pub fn bond_decimate(graph: &Graph, p: f64, seed: u64) -> Result<PercolationTrial> {
    check_p(p)?;
    Ok(bond_decimate_with(graph, p, &mut ChaCha8Rng::seed_from_u64(seed)))
}

pub fn site_decimate_with<R: Rng + ?Sized>(graph: &Graph, p: f64, rng: &mut R) -> PercolationTrial {
    let kept: Vec<usize> = graph.vertices().filter(|_| rng.random::<f64>() < p).collect();
    PercolationTrial { mode: Mode::Site, p, surviving: graph.induced_unchecked(&kept), kept }
}

pub fn bond_decimate_with<R: Rng + ?Sized>(graph: &Graph, p: f64, rng: &mut R) -> PercolationTrial {
    let edges: Vec<(usize, usize)> = graph.edges().filter(|_| rng.random::<f64>() < p).collect();
    let surviving = Graph::from_edges(graph.order(), edges).expect("subset of a valid edge set");
    PercolationTrial { mode: Mode::Bond, p, surviving, kept: graph.vertices().collect() }
}

fn decimate_with<R: Rng + ?Sized>(graph: &Graph, mode: Mode, p: f64, rng: &mut R) -> PercolationTrial {
    match mode {
        Mode::Site => site_decimate_with(graph, p, rng),
        Mode::Bond => bond_decimate_with(graph, p, rng),
    }
}

fn clique_count(graph: &Graph, k: usize) -> u64 {
    CliqueCounter::new()
        .max_k(k)
        .count(graph)
        .expect("no abort budget")
        .get(k)
}

/// How each trial picks its keep probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PSampler {
    /// `p ~ Uniform[0, 1]`.
    Uniform,
    /// Trial `t` draws `p` uniformly from stratum `t mod strata` of an
    /// equal-width grid.
    Stratified { strata: usize },
    Fixed(f64),
}

impl PSampler {
    fn strata(self) -> usize {
        match self {
            PSampler::Stratified { strata } => strata,
            _ => 1,
        }
    }

    fn draw<R: Rng + ?Sized>(self, trial: u64, rng: &mut R) -> f64 {
        match self {
            PSampler::Uniform => rng.random::<f64>(),
            PSampler::Stratified { strata } => {
                let h = (trial % strata as u64) as f64;
                (h + rng.random::<f64>()) / strata as f64
            }
            PSampler::Fixed(p) => p,
        }
    }

    fn validate(self) -> Result<()> {
        match self {
            PSampler::Uniform => Ok(()),
            PSampler::Stratified { strata } if strata >= 1 => Ok(()),
            PSampler::Stratified { .. } => Err(Error::Invalid("grid needs at least one stratum".into())),
            PSampler::Fixed(p) => check_p(p),
        }
    }
}

/// One Monte Carlo trial: draws `p`, decimates, counts surviving `K_{k+1}`.
fn run_trial<R: Rng + ?Sized>(graph: &Graph, k: usize, mode: Mode, sampler: PSampler, t: u64, rng: &mut R) -> (f64, u64) {
    let p = sampler.draw(t, rng);
    let trial = decimate_with(graph, mode, p, rng);
    (p, clique_count(&trial.surviving, k))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurvivalEstimate<F> {
    pub mode: Mode,
    pub k: usize,
    pub trials: u64,
    pub seed: u64,
    /// `v_k` of the host.
    pub host_count: u64,
    /// Mean and standard error of `v_k^p / v_k`.
    pub estimate: F,
    pub stderr: Option<F>,
    /// Host-independent target: `1/(k+2)` (site) or `1/(C(k+1,2)+1)` (bond);
    /// `p^degree` for a fixed `p`.
    pub target: F,
    /// The target as an exact rational when `p` is averaged.
    #[serde(serialize_with = "serialize_opt_display")]
    pub exact: Option<Rational>,
}

fn serialize_opt_display<S: serde::Serializer>(
    value: &Option<Rational>,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    match value {
        Some(v) => serializer.collect_str(v),
        None => serializer.serialize_none(),
    }
}

impl<F: Float> SurvivalEstimate<F> {
    pub fn stats(&self) -> SampleStats<F> {
        SampleStats { mean: self.estimate, stderr: self.stderr, samples: self.trials }
    }

    pub fn within(&self, sigmas: F) -> bool {
        self.stats().within(self.target, sigmas)
    }
}

/// Monte Carlo estimate of `∫_0^1 E_p[v_k^p] / v_k dp`, or of
/// `E_p[v_k^p]/v_k` at a fixed `p`.
///
/// Survivor counts are accumulated as integers per stratum, so the result
/// does not depend on the thread count.
pub fn clique_survival<F: Float + FromPrimitive>(
    graph: &Graph,
    k: usize,
    mode: Mode,
    sampler: PSampler,
    plan: &TrialPlan,
) -> Result<SurvivalEstimate<F>> {
    sampler.validate()?;
    if plan.samples == 0 {
        return Err(Error::Invalid("percolation needs at least one trial".into()));
    }
    let host_count = clique_count(graph, k);
    if host_count == 0 {
        return Err(Error::NoCliques(k));
    }
    let strata = sampler.strata();
    let moments = plan.run(
        || vec![IntegerMoments::default(); strata],
        |acc, t, rng| {
            let (_, survivors) = run_trial(graph, k, mode, sampler, t, rng);
            acc[(t % strata as u64) as usize].push(survivors as i64);
        },
        |a, b| a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect(),
    );

    let per_stratum: Vec<SampleStats<F>> = moments.iter().map(|m| m.stats(host_count)).collect();
    let (estimate, stderr) = if strata == 1 {
        (per_stratum[0].mean, per_stratum[0].stderr)
    } else {
        let h = F::from_usize(strata).expect("finite");
        let mean = per_stratum.iter().fold(F::zero(), |acc, s| acc + s.mean) / h;
        // Equal-weight stratified variance: Σ_h se_h² / H².
        let var = per_stratum
            .iter()
            .try_fold(F::zero(), |acc, s| s.stderr.map(|se| acc + se * se));
        (mean, var.map(|v| v.sqrt() / h))
    };

    let degree = mode.survival_degree(k);
    let (target, exact) = match sampler {
        PSampler::Fixed(p) => (F::from_f64(p.powi(degree as i32)).expect("finite"), None),
        _ => {
            let exact: Rational = mode.survival_rate(k);
            (F::one() / F::from_u32(degree + 1).expect("finite"), Some(exact))
        }
    };
    Ok(SurvivalEstimate {
        mode,
        k,
        trials: plan.samples,
        seed: plan.master_seed,
        host_count,
        estimate,
        stderr,
        target,
        exact,
    })
}

/// [`clique_survival`] with `p ~ Uniform[0, 1]`.
pub fn clique_survival_integral<F: Float + FromPrimitive>(
    graph: &Graph,
    k: usize,
    trials: u64,
    seed: u64,
    mode: Mode,
) -> Result<SurvivalEstimate<F>> {
    clique_survival(graph, k, mode, PSampler::Uniform, &TrialPlan::new(trials, seed))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialRow {
    pub trial: u64,
    pub p: f64,
    pub survivors: u64,
    pub ratio: f64,
}

/// Per-trial `(p, v_k^p / v_k)`, identical to the trials behind
/// [`clique_survival`] with the same plan.
pub fn survival_trials(graph: &Graph, k: usize, mode: Mode, sampler: PSampler, plan: &TrialPlan) -> Result<Vec<TrialRow>> {
    sampler.validate()?;
    let host_count = clique_count(graph, k);
    if host_count == 0 {
        return Err(Error::NoCliques(k));
    }
    let rows = || {
        (0..plan.samples)
            .into_par_iter()
            .map(|t| {
                let (p, survivors) = run_trial(graph, k, mode, sampler, t, &mut plan.trial_rng(t));
                TrialRow { trial: t, p, survivors, ratio: survivors as f64 / host_count as f64 }
            })
            .collect()
    };
    Ok(match plan.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool builds")
            .install(rows),
        None => rows(),
    })
}

/// `E_p[v_k^p] = coefficient · p^degree`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SurvivalMonomial {
    pub coefficient: u64,
    pub degree: u32,
}

impl SurvivalMonomial {
    pub fn eval<F: Float + FromPrimitive>(&self, p: F) -> F {
        F::from_u64(self.coefficient).expect("finite") * p.powi(self.degree as i32)
    }

    /// `∫_0^1 coefficient · p^degree dp`.
    pub fn integral<T: Scalar>(&self) -> T {
        T::from_count(self.coefficient) / T::from_int(i64::from(self.degree) + 1)
    }

    /// The integral divided by the host count `v_k`.
    pub fn normalized_integral<T: Scalar>(&self) -> T {
        self.integral::<T>() / T::from_count(self.coefficient)
    }
}

pub fn exact_survival_polynomial(graph: &Graph, k: usize, mode: Mode) -> Result<SurvivalMonomial> {
    let coefficient = clique_count(graph, k);
    if coefficient == 0 {
        return Err(Error::NoCliques(k));
    }
    Ok(SurvivalMonomial { coefficient, degree: mode.survival_degree(k) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clique::count_cliques;
    use crate::generate::{generate, GraphKind};
    use crate::scalar::rational;

    fn gen(kind: GraphKind) -> Graph {
        generate(&kind, 0).unwrap()
    }

    #[test]
    fn decimation_extremes() {
        let g = gen(GraphKind::ErdosRenyi { n: 20, q: 0.4 });
        assert_eq!(site_decimate(&g, 1.0, 3).unwrap().surviving, g);
        assert_eq!(site_decimate(&g, 0.0, 3).unwrap().surviving.order(), 0);
        assert_eq!(bond_decimate(&g, 1.0, 3).unwrap().surviving, g);
        let bare = bond_decimate(&g, 0.0, 3).unwrap();
        assert_eq!((bare.surviving.order(), bare.surviving.size()), (20, 0));
        assert_eq!(site_decimate(&g, 1.5, 0).unwrap_err(), Error::Probability(1.5));
        assert!(bond_decimate(&g, -0.1, 0).is_err());
    }

    #[test]
    fn decimation_is_reproducible() {
        let k5 = gen(GraphKind::Complete { n: 5 });
        let a = site_decimate(&k5, 0.5, 17).unwrap();
        assert_eq!(a, site_decimate(&k5, 0.5, 17).unwrap());
        assert_eq!(a.surviving, k5.induced_subgraph(&a.kept.clone().into()).unwrap());
        let b = bond_decimate(&k5, 0.5, 17).unwrap();
        assert_eq!(b, bond_decimate(&k5, 0.5, 17).unwrap());
        assert!(b.surviving.edges().all(|(u, v)| k5.has_edge(u, v)));
    }

    #[test]
    fn exact_rates() {
        assert_eq!(Mode::Site.survival_rate::<Rational>(0), rational(1, 2));
        assert_eq!(Mode::Site.survival_rate::<Rational>(1), rational(1, 3));
        assert_eq!(Mode::Site.survival_rate::<Rational>(2), rational(1, 4));
        assert_eq!(Mode::Bond.survival_rate::<Rational>(2), rational(1, 4));
        assert_eq!(Mode::Bond.survival_rate::<Rational>(3), rational(1, 7));
        assert_eq!(Mode::Bond.survival_rate::<Rational>(0), rational(1, 1));
    }

    #[test]
    fn monomials() {
        let k4 = gen(GraphKind::Complete { n: 4 });
        let m = exact_survival_polynomial(&k4, 2, Mode::Site).unwrap();
        assert_eq!(m, SurvivalMonomial { coefficient: 4, degree: 3 });
        assert_eq!(m.integral::<Rational>(), rational(1, 1));
        let ico = gen(GraphKind::Icosahedron);
        let m = exact_survival_polynomial(&ico, 1, Mode::Site).unwrap();
        assert_eq!(m.integral::<Rational>(), rational(30, 3));
        let m = exact_survival_polynomial(&ico, 0, Mode::Bond).unwrap();
        assert_eq!(m, SurvivalMonomial { coefficient: 12, degree: 0 });
        assert_eq!(m.integral::<Rational>(), rational(12, 1));
        assert_eq!(exact_survival_polynomial(&ico, 3, Mode::Site).unwrap_err(), Error::NoCliques(3));
    }

    #[test]
    fn simpson_quadrature_matches_closed_form() {
        let g = gen(GraphKind::ErdosRenyi { n: 15, q: 0.6 });
        for k in 0..count_cliques(&g).clique_number() {
            let m = exact_survival_polynomial(&g, k, Mode::Site).unwrap();
            let steps = 2000;
            let h = 1.0 / steps as f64;
            let simpson: f64 = (0..=steps)
                .map(|i| {
                    let w = if i == 0 || i == steps { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
                    w * m.eval(i as f64 * h)
                })
                .sum::<f64>()
                * h
                / 3.0;
            let normalized = simpson / m.coefficient as f64;
            assert!((normalized - 1.0 / (k as f64 + 2.0)).abs() < 1e-10, "k={k}");
            assert_eq!(m.normalized_integral::<Rational>(), rational(1, k as i64 + 2));
        }
    }

    #[test]
    fn no_cliques_is_an_error() {
        let c5 = gen(GraphKind::Cycle { n: 5 });
        let err = clique_survival_integral::<f64>(&c5, 2, 10, 0, Mode::Site).unwrap_err();
        assert_eq!(err, Error::NoCliques(2));
    }

    #[test]
    fn fixed_p_converges() {
        let g = gen(GraphKind::Octahedron);
        for p in [0.25, 0.5, 0.75] {
            let plan = TrialPlan::new(20_000, 2);
            let est: SurvivalEstimate<f64> = clique_survival(&g, 1, Mode::Site, PSampler::Fixed(p), &plan).unwrap();
            assert_eq!(est.target, p * p);
            assert!(est.within(4.0), "p={p}: {} vs {}", est.estimate, est.target);
        }
    }

    #[test]
    fn stratified_grid() {
        let g = gen(GraphKind::Icosahedron);
        let plan = TrialPlan::new(20_000, 3);
        let plain: SurvivalEstimate<f64> = clique_survival(&g, 1, Mode::Site, PSampler::Uniform, &plan).unwrap();
        let grid: SurvivalEstimate<f64> =
            clique_survival(&g, 1, Mode::Site, PSampler::Stratified { strata: 20 }, &plan).unwrap();
        assert!(plain.within(4.0));
        assert!(grid.within(4.0));
        assert!(grid.stderr.unwrap() < plain.stderr.unwrap());
    }

    #[test]
    fn rows_match_summary() {
        let g = gen(GraphKind::Complete { n: 6 });
        let plan = TrialPlan::new(500, 8);
        let rows = survival_trials(&g, 2, Mode::Bond, PSampler::Uniform, &plan).unwrap();
        let est: SurvivalEstimate<f64> = clique_survival(&g, 2, Mode::Bond, PSampler::Uniform, &plan).unwrap();
        let total: u64 = rows.iter().map(|r| r.survivors).sum();
        assert_eq!(est.estimate, total as f64 / (500.0 * est.host_count as f64));
        assert!(rows.iter().enumerate().all(|(i, r)| r.trial == i as u64));
    }
}
