//! Expectation of the index `i_f(x)` over uniformly random injective `f`.
//!
//! Values drawn iid from an atomless distribution induce the uniform
//! distribution on vertex orders, so every expectation here is an average
//! over permutations. Three routes are provided:
//!
//! * [`exact_index_expectation`]: the rank of `x` among itself and its `d`
//!   neighbors is uniform on `d + 1` slots; given `m` neighbors below, the
//!   exit set is a uniform `m`-subset of `S(x)`. Enumerating all `2^d`
//!   subsets gives the expectation as an exact rational.
//! * [`exact_expectation_by_permutations`]: average over all `n!` orders.
//! * [`mc_index_expectation`]: seeded Monte Carlo.

use num_traits::Float;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::clique::vertex_clique_degrees;
use crate::curvature::curvature;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::morse::{index, VertexOrder};
use crate::scalar::{binomial, Rational, Scalar};
use crate::seeding::TrialPlan;
use crate::stats::{IntegerMoments, SampleStats};

/// Default cap on `deg(x)` for the subset oracle (`2^20` subsets).
pub const DEFAULT_DEGREE_CAP: usize = 20;
/// Largest cap the subset tables are allowed to grow to.
pub const MAX_DEGREE_CAP: usize = 26;
/// Largest graph the permutation oracle accepts.
pub const PERMUTATION_LIMIT: usize = 8;

/// Unit sphere of `x` as bitmasks over sphere-local ids.
struct SphereMasks {
    nbr: Vec<u32>,
}

impl SphereMasks {
    fn new(graph: &Graph, x: usize, cap: usize) -> Result<Self> {
        graph.check_vertex(x)?;
        let degree = graph.degree(x);
        let cap = cap.min(MAX_DEGREE_CAP);
        if degree > cap {
            return Err(Error::DegreeAboveCap { vertex: x, degree, cap });
        }
        let (sphere, _) = graph.unit_sphere(x)?;
        let nbr = sphere
            .vertices()
            .map(|v| sphere.neighbors(v).iter().fold(0u32, |m, &u| m | 1 << u))
            .collect();
        Ok(Self { nbr })
    }

    fn degree(&self) -> usize {
        self.nbr.len()
    }

    /// `χ` of the subgraph induced on every subset, indexed by bitmask.
    ///
    /// Splitting off the highest vertex `v` of `A`:
    /// `χ(A) = χ(A − v) + 1 − χ(N(v) ∩ (A − v))`, since the cliques through
    /// `v` are `{v}` joined with the cliques of its link inside `A`. Both
    /// smaller masks precede `A`.
    fn chi_table(&self) -> Vec<i32> {
        let mut chi = vec![0i32; 1 << self.degree()];
        for a in 1usize..chi.len() {
            let v = usize::BITS - 1 - a.leading_zeros();
            let rest = a ^ (1 << v);
            chi[a] = chi[rest] + 1 - chi[rest & self.nbr[v as usize] as usize];
        }
        chi
    }

    /// Clique counts of every induced subgraph, `width` entries per mask:
    /// `V_k(A) = V_k(A − v) + V_{k−1}(N(v) ∩ (A − v))`.
    fn fvector_table(&self, width: usize) -> Vec<u32> {
        let size = 1usize << self.degree();
        let mut table = vec![0u32; size * width];
        for a in 1..size {
            let v = usize::BITS - 1 - a.leading_zeros();
            let rest = a ^ (1 << v);
            let link = rest & self.nbr[v as usize] as usize;
            table[a * width] = table[rest * width] + 1;
            for k in 1..width {
                table[a * width + k] = table[rest * width + k] + table[link * width + k - 1];
            }
        }
        table
    }
}

/// `(1/(d+1)) Σ_m C(d,m)⁻¹ Σ_{|A|=m} g(A)` from the per-size sums.
fn average_over_ranks<T: Scalar>(by_size: &[i64]) -> T {
    let d = by_size.len() - 1;
    let sum = by_size.iter().enumerate().fold(T::zero(), |acc, (m, &s)| {
        let c = binomial(d as u64, m as u64).expect("d <= 26");
        acc + T::from_int(s) / T::from_count(c)
    });
    sum / T::from_int(d as i64 + 1)
}

fn sums_by_size<I: Fn(usize) -> i64>(degree: usize, value: I) -> Vec<i64> {
    let mut by_size = vec![0i64; degree + 1];
    for a in 0..1usize << degree {
        by_size[a.count_ones() as usize] += value(a);
    }
    by_size
}

/// `E[i_f(x)] = 1 − E[χ(S⁻(x))]`, enumerating every possible exit set.
pub fn exact_index_expectation<T: Scalar>(graph: &Graph, x: usize, cap: usize) -> Result<T> {
    let (below, _) = exact_exit_entrance_chi(graph, x, cap)?;
    Ok(T::one() - below)
}

/// `(E[χ(S⁻(x))], E[χ(S⁺(x))])`. The entrance set is the complement of
/// the exit set within `S(x)`.
pub fn exact_exit_entrance_chi<T: Scalar>(graph: &Graph, x: usize, cap: usize) -> Result<(T, T)> {
    let masks = SphereMasks::new(graph, x, cap)?;
    let d = masks.degree();
    let chi = masks.chi_table();
    let full = (1usize << d) - 1;
    let below = average_over_ranks(&sums_by_size(d, |a| i64::from(chi[a])));
    let above = average_over_ranks(&sums_by_size(d, |a| i64::from(chi[full ^ a])));
    Ok((below, above))
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
#[serde(bound = "T: std::fmt::Display")]
pub struct AveragingRow<T> {
    pub k: usize,
    /// `E[V_k⁻(x)]` by enumeration.
    #[serde(serialize_with = "crate::scalar::serde_display")]
    pub expected: T,
    /// `V_k(x) / (k + 2)`.
    #[serde(serialize_with = "crate::scalar::serde_display")]
    pub predicted: T,
    pub equal: bool,
}

/// Compares `E[V_k⁻(x)]` with `V_k(x)/(k+2)` for every `k` with
/// `V_k(x) > 0`.
pub fn verify_averaging_equation<T: Scalar>(graph: &Graph, x: usize, cap: usize) -> Result<Vec<AveragingRow<T>>> {
    let masks = SphereMasks::new(graph, x, cap)?;
    let degrees = vertex_clique_degrees(graph, x)?;
    let width = degrees.degrees.clique_number();
    let d = masks.degree();
    let table = masks.fvector_table(width.max(1));
    Ok((0..width)
        .map(|k| {
            let expected: T = average_over_ranks(&sums_by_size(d, |a| i64::from(table[a * width + k])));
            let predicted = T::from_count(degrees.degrees.get(k)) / T::from_int(k as i64 + 2);
            let equal = expected == predicted;
            AveragingRow { k, expected, predicted, equal }
        })
        .collect())
}

/// Averages `i_f(x)` over all `n!` orders, exactly. `n <= 8`.
pub fn exact_expectation_by_permutations(graph: &Graph) -> Result<Vec<Rational>> {
    let n = graph.order();
    if n > PERMUTATION_LIMIT {
        return Err(Error::TooManyVertices { n, limit: PERMUTATION_LIMIT });
    }
    let mut sums = vec![0i64; n];
    let mut count = 0i64;
    let mut rank: Vec<usize> = (0..n).collect();
    // Heap's algorithm.
    let mut visit = |rank: &[usize]| {
        let f = VertexOrder::new(rank.to_vec()).expect("permutation");
        for (x, s) in sums.iter_mut().enumerate() {
            *s += index(graph, &f, x).expect("valid vertex");
        }
        count += 1;
    };
    visit(&rank);
    let mut c = vec![0usize; n];
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                rank.swap(0, i);
            } else {
                rank.swap(c[i], i);
            }
            visit(&rank);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(sums.into_iter().map(|s| Rational::ratio(s, count)).collect())
}

/// One vertex of a Monte Carlo run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectationRow<F> {
    pub vertex: usize,
    pub stats: SampleStats<F>,
    pub exact: Option<Rational>,
    /// Why `exact` is missing when it was requested.
    pub skipped: Option<String>,
    pub curvature: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpectationReport<F> {
    pub samples: u64,
    pub seed: u64,
    pub rows: Vec<ExpectationRow<F>>,
}

/// Averages `i_f(x)` for every vertex over `plan.samples` uniformly random
/// orders. Trial `t` draws its order from the plan's trial seed.
pub fn mc_index_expectation<F: Float + num_traits::FromPrimitive>(
    graph: &Graph,
    plan: &TrialPlan,
) -> Result<ExpectationReport<F>> {
    if plan.samples == 0 {
        return Err(Error::Invalid("Monte Carlo needs at least one sample".into()));
    }
    let n = graph.order();
    let moments = plan.run(
        || vec![IntegerMoments::default(); n],
        |acc, _, rng| {
            let f = VertexOrder::random(n, rng);
            for (x, m) in acc.iter_mut().enumerate() {
                m.push(index(graph, &f, x).expect("valid vertex"));
            }
        },
        |a, b| a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect(),
    );
    let rows = moments
        .into_iter()
        .enumerate()
        .map(|(vertex, m)| {
            Ok(ExpectationRow {
                vertex,
                stats: m.stats(1),
                exact: None,
                skipped: None,
                curvature: curvature(graph, vertex)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ExpectationReport { samples: plan.samples, seed: plan.master_seed, rows })
}

impl<F> ExpectationReport<F> {
    /// Fills the exact column; vertices above the degree cap are marked
    /// skipped instead.
    pub fn attach_exact(&mut self, graph: &Graph, cap: usize) -> Result<()> {
        for row in &mut self.rows {
            match exact_index_expectation::<Rational>(graph, row.vertex, cap) {
                Ok(value) => row.exact = Some(value),
                Err(e @ Error::DegreeAboveCap { .. }) => row.skipped = Some(e.to_string()),
                Err(e) => return Err(e),
            }
        }
        Ok(())
    }
}

impl<F: Float + Serialize> Serialize for ExpectationReport<F> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(serde::Serialize)]
        struct Row<'a, F> {
            vertex: usize,
            estimate: F,
            stderr: Option<F>,
            samples: u64,
            #[serde(skip_serializing_if = "Option::is_none")]
            exact: Option<String>,
            #[serde(skip_serializing_if = "Option::is_none")]
            skipped: Option<&'a str>,
            curvature: String,
        }
        let rows: Vec<Row<F>> = self
            .rows
            .iter()
            .map(|r| Row {
                vertex: r.vertex,
                estimate: r.stats.mean,
                stderr: r.stats.stderr,
                samples: r.stats.samples,
                exact: r.exact.as_ref().map(ToString::to_string),
                skipped: r.skipped.as_deref(),
                curvature: r.curvature.to_string(),
            })
            .collect();
        let mut s = serializer.serialize_struct("ExpectationReport", 3)?;
        s.serialize_field("samples", &self.samples)?;
        s.serialize_field("seed", &self.seed)?;
        s.serialize_field("vertices", &rows)?;
        s.end()
    }
}
