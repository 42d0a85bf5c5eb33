//! Poincaré–Hopf indices of injective vertex functions.
//!
//! An injective `f: V → R` only enters through comparisons, so it is stored
//! as its rank permutation. `−f` is the reversed permutation.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::clique::{count_cliques, for_each_clique};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::scalar::Scalar;

/// `rank[v]` is the position of `f(v)` in increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexOrder {
    rank: Vec<usize>,
}

impl VertexOrder {
    pub fn new(rank: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; rank.len()];
        for &r in &rank {
            if r >= rank.len() || std::mem::replace(&mut seen[r], true) {
                return Err(Error::InvalidOrder(format!("{rank:?} is not a permutation")));
            }
        }
        Ok(Self { rank })
    }

    /// `f(v) = v`.
    pub fn identity(n: usize) -> Self {
        Self { rank: (0..n).collect() }
    }

    /// Uniformly random order.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut rank: Vec<usize> = (0..n).collect();
        rank.shuffle(rng);
        Self { rank }
    }

    pub fn seeded(n: usize, seed: u64) -> Self {
        Self::random(n, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    /// Order of real values; ties and NaN are rejected.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        if let Some(v) = values.iter().position(|x| x.is_nan()) {
            return Err(Error::InvalidOrder(format!("value of vertex {v} is NaN")));
        }
        let mut by_value: Vec<usize> = (0..values.len()).collect();
        by_value.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
        if let Some(w) = by_value.windows(2).find(|w| values[w[0]] == values[w[1]]) {
            let (first, second) = (w[0].min(w[1]), w[0].max(w[1]));
            return Err(Error::Tie { first, second, value: values[first] });
        }
        let mut rank = vec![0; values.len()];
        for (position, &v) in by_value.iter().enumerate() {
            rank[v] = position;
        }
        Ok(Self { rank })
    }

    pub fn len(&self) -> usize {
        self.rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank.is_empty()
    }

    pub fn rank(&self, v: usize) -> usize {
        self.rank[v]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.rank
    }

    /// The order of `−f`.
    pub fn reversed(&self) -> Self {
        let n = self.rank.len();
        Self { rank: self.rank.iter().map(|&r| n - 1 - r).collect() }
    }

    /// Vertex holding rank `r`, for every `r`.
    pub fn by_rank(&self) -> Vec<usize> {
        let mut inv = vec![0; self.rank.len()];
        for (v, &r) in self.rank.iter().enumerate() {
            inv[r] = v;
        }
        inv
    }

    /// Swaps the vertices holding ranks `r` and `r + 1`.
    pub fn swap_adjacent_ranks(&mut self, r: usize) {
        let inv = self.by_rank();
        self.rank.swap(inv[r], inv[r + 1]);
    }

    fn check(&self, graph: &Graph) -> Result<()> {
        if self.rank.len() == graph.order() {
            Ok(())
        } else {
            Err(Error::InvalidOrder(format!(
                "order has {} entries, graph has {} vertices",
                self.rank.len(),
                graph.order()
            )))
        }
    }
}

/// Parses a function file: one `vertex value` pair per line, every vertex
/// of the graph exactly once. `#` comments and blank lines are ignored.
pub fn parse_function_file(text: &str, n: usize) -> Result<VertexOrder> {
    let mut values: Vec<Option<f64>> = vec![None; n];
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse { line, message };
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let [vertex, value] = tokens[..] else {
            return Err(err(format!("expected `vertex value`, found {} tokens", tokens.len())));
        };
        let v: usize = vertex.parse().map_err(|_| err(format!("`{vertex}` is not a vertex id")))?;
        let x: f64 = value.parse().map_err(|_| err(format!("`{value}` is not a number")))?;
        if v >= n {
            return Err(err(format!("vertex {v} out of range for {n} vertices")));
        }
        if values[v].replace(x).is_some() {
            return Err(err(format!("vertex {v} assigned twice")));
        }
    }
    if let Some(v) = values.iter().position(Option::is_none) {
        return Err(Error::InvalidOrder(format!("no value for vertex {v}")));
    }
    VertexOrder::from_values(&values.into_iter().map(Option::unwrap).collect::<Vec<_>>())
}

/// `S⁻(x)`: neighbors of `x` with smaller value.
pub fn exit_set(graph: &Graph, f: &VertexOrder, x: usize) -> Result<VertexSet> {
    graph.check_vertex(x)?;
    f.check(graph)?;
    Ok(exit_members(graph, f, x).into())
}

/// `S⁺(x)`: neighbors of `x` with larger value.
pub fn entrance_set(graph: &Graph, f: &VertexOrder, x: usize) -> Result<VertexSet> {
    graph.check_vertex(x)?;
    f.check(graph)?;
    let rx = f.rank(x);
    Ok(graph.neighbors(x).iter().copied().filter(|&y| f.rank(y) > rx).collect())
}

fn exit_members(graph: &Graph, f: &VertexOrder, x: usize) -> Vec<usize> {
    let rx = f.rank(x);
    graph.neighbors(x).iter().copied().filter(|&y| f.rank(y) < rx).collect()
}

/// `i_f(x) = 1 − χ(S⁻(x))`.
pub fn index(graph: &Graph, f: &VertexOrder, x: usize) -> Result<i64> {
    graph.check_vertex(x)?;
    f.check(graph)?;
    Ok(index_unchecked(graph, f, x))
}

fn index_unchecked(graph: &Graph, f: &VertexOrder, x: usize) -> i64 {
    let exit = graph.induced_unchecked(&exit_members(graph, f, x));
    1 - count_cliques(&exit).euler_characteristic()
}

/// `j_f(x) = (i_f(x) + i_{−f}(x)) / 2`.
pub fn symmetric_index<T: Scalar>(graph: &Graph, f: &VertexOrder, x: usize) -> Result<T> {
    let up = index(graph, f, x)?;
    let down = index(graph, &f.reversed(), x)?;
    Ok(T::ratio(up + down, 2))
}

/// `Σ_x i_f(x)`, which equals `χ(G)` for every injective `f`.
pub fn poincare_hopf_chi(graph: &Graph, f: &VertexOrder) -> Result<i64> {
    f.check(graph)?;
    Ok(graph.vertices().into_par_iter().map(|x| index_unchecked(graph, f, x)).sum())
}

/// Per-vertex `i_f` and `j_f` with their sums.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexReport<T> {
    pub index: Vec<i64>,
    pub symmetric: Vec<T>,
    pub sum_index: i64,
    pub sum_symmetric: T,
}

pub fn index_report<T: Scalar>(graph: &Graph, f: &VertexOrder) -> Result<IndexReport<T>> {
    f.check(graph)?;
    let minus_f = f.reversed();
    let pairs: Vec<(i64, i64)> = graph
        .vertices()
        .into_par_iter()
        .map(|x| (index_unchecked(graph, f, x), index_unchecked(graph, &minus_f, x)))
        .collect();
    let index: Vec<i64> = pairs.iter().map(|&(i, _)| i).collect();
    let symmetric: Vec<T> = pairs.iter().map(|&(i, j)| T::ratio(i + j, 2)).collect();
    let sum_index = index.iter().sum();
    let sum_symmetric = symmetric.iter().fold(T::zero(), |acc, j| acc + j.clone());
    Ok(IndexReport { index, symmetric, sum_index, sum_symmetric })
}

impl<T: Scalar> Serialize for IndexReport<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(serde::Serialize)]
        struct Row {
            vertex: usize,
            index: i64,
            symmetric: String,
        }
        let rows: Vec<Row> = self
            .index
            .iter()
            .zip(&self.symmetric)
            .enumerate()
            .map(|(vertex, (&index, j))| Row { vertex, index, symmetric: j.to_string() })
            .collect();
        let mut s = serializer.serialize_struct("IndexReport", 3)?;
        s.serialize_field("vertices", &rows)?;
        s.serialize_field("sum_index", &self.sum_index)?;
        s.serialize_field("sum_symmetric", &self.sum_symmetric.to_string())?;
        s.end()
    }
}

/// Counts of the k-simplices of `S(x)` by which side of `f(x)` their
/// vertices lie on: `V_k⁻`, `V_k⁺` and the mixed `W_k`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SphereSplit {
    pub total: Vec<u64>,
    pub below: Vec<u64>,
    pub above: Vec<u64>,
    pub mixed: Vec<u64>,
}

pub fn sphere_split(graph: &Graph, f: &VertexOrder, x: usize) -> Result<SphereSplit> {
    graph.check_vertex(x)?;
    f.check(graph)?;
    let (sphere, map) = graph.unit_sphere(x)?;
    let rx = f.rank(x);
    let len = map.len();
    let mut split = SphereSplit {
        total: vec![0; len],
        below: vec![0; len],
        above: vec![0; len],
        mixed: vec![0; len],
    };
    for_each_clique(&sphere, |clique| {
        let k = clique.len() - 1;
        let lower = clique.iter().filter(|&&v| f.rank(map[v]) < rx).count();
        split.total[k] += 1;
        if lower == clique.len() {
            split.below[k] += 1;
        } else if lower == 0 {
            split.above[k] += 1;
        } else {
            split.mixed[k] += 1;
        }
    });
    Ok(split)
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct IntermediateRow {
    pub k: usize,
    pub lhs: u64,
    pub rhs: u64,
    pub equal: bool,
}

/// `Σ_x W_k(x) = k · v_{k+1}` for every `k` up to the clique number. `W_0`
/// is zero since a single vertex cannot lie on both sides.
pub fn verify_intermediate_equations(graph: &Graph, f: &VertexOrder) -> Result<Vec<IntermediateRow>> {
    f.check(graph)?;
    let fv = count_cliques(graph);
    let splits: Vec<SphereSplit> = graph
        .vertices()
        .into_par_iter()
        .map(|x| sphere_split(graph, f, x))
        .collect::<Result<_>>()?;
    let rows = fv.clique_number().max(1);
    Ok((0..rows)
        .map(|k| {
            let lhs = splits.iter().map(|s| s.mixed.get(k).copied().unwrap_or(0)).sum();
            let rhs = k as u64 * fv.get(k + 1);
            IntermediateRow { k, lhs, rhs, equal: lhs == rhs }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct StabilityReport {
    /// Index sums of the random orders.
    pub random_sums: Vec<i64>,
    /// Index sums along the adjacent-transposition path from the first
    /// random order to its reverse.
    pub path_sums: Vec<i64>,
    pub stable: bool,
}

/// Index sums over `trials` random orders, then along a path of
/// `n(n−1)/2` adjacent-rank swaps that reverses the first order. Each swap
/// moves one value past one other.
pub fn verify_index_stability(graph: &Graph, trials: usize, seed: u64) -> Result<StabilityReport> {
    index_stability(graph, trials, seed, true)
}

/// [`verify_index_stability`] with the transposition path optional; it
/// costs `n(n−1)/2` index sums.
pub fn index_stability(graph: &Graph, trials: usize, seed: u64, transposition_path: bool) -> Result<StabilityReport> {
    if trials < 2 {
        return Err(Error::Invalid("index stability needs at least 2 trials".into()));
    }
    let n = graph.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let orders: Vec<VertexOrder> = (0..trials).map(|_| VertexOrder::random(n, &mut rng)).collect();
    let random_sums: Vec<i64> =
        orders.iter().map(|f| poincare_hopf_chi(graph, f)).collect::<Result<_>>()?;

    // Bubble the vertex order into its reverse.
    let mut f = orders[0].clone();
    let mut path_sums = vec![random_sums[0]];
    let passes = if transposition_path { n.saturating_sub(1) } else { 0 };
    for pass in 0..passes {
        for r in 0..n - 1 - pass {
            f.swap_adjacent_ranks(r);
            path_sums.push(poincare_hopf_chi(graph, &f)?);
        }
    }
    debug_assert!(!transposition_path || f == orders[0].reversed());
    let first = random_sums[0];
    let stable = random_sums.iter().chain(&path_sums).all(|&s| s == first);
    Ok(StabilityReport { random_sums, path_sums, stable })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, GraphKind};
    use crate::scalar::{rational, Rational};
    use proptest::prelude::*;

    fn gen(kind: GraphKind) -> Graph {
        generate(&kind, 0).unwrap()
    }

    fn for_each_permutation(n: usize, mut visit: impl FnMut(&VertexOrder)) {
        fn rec(rank: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&VertexOrder)) {
            if k == rank.len() {
                visit(&VertexOrder { rank: rank.clone() });
                return;
            }
            for i in k..rank.len() {
                rank.swap(k, i);
                rec(rank, k + 1, visit);
                rank.swap(k, i);
            }
        }
        rec(&mut (0..n).collect(), 0, &mut visit);
    }

    #[test]
    fn order_validation() {
        assert!(VertexOrder::new(vec![1, 0, 2]).is_ok());
        assert!(VertexOrder::new(vec![1, 1, 2]).is_err());
        assert!(VertexOrder::new(vec![0, 3, 1]).is_err());
        let f = VertexOrder::from_values(&[0.5, -2.0, 3.0]).unwrap();
        assert_eq!(f.ranks(), &[1, 0, 2]);
        assert_eq!(f.reversed().ranks(), &[1, 2, 0]);
    }

    #[test]
    fn ties_are_errors() {
        let err = VertexOrder::from_values(&[1.0, 2.0, 1.0]).unwrap_err();
        assert_eq!(err, Error::Tie { first: 0, second: 2, value: 1.0 });
        assert!(VertexOrder::from_values(&[f64::NAN, 1.0]).is_err());
    }

    #[test]
    fn function_files() {
        let f = parse_function_file("# f\n0 0.3\n2 -1e3\n1 7\n", 3).unwrap();
        assert_eq!(f.ranks(), &[1, 2, 0]);
        assert!(matches!(parse_function_file("0 1\n1 1\n", 2), Err(Error::Tie { .. })));
        assert!(matches!(parse_function_file("0 1\n0 2\n", 2), Err(Error::Parse { line: 2, .. })));
        assert!(parse_function_file("0 1\n", 2).is_err());
        assert!(parse_function_file("0 x\n1 1\n", 2).is_err());
        assert!(parse_function_file("5 1\n", 2).is_err());
    }

    #[test]
    fn exit_sets_at_extremes() {
        let g = gen(GraphKind::ErdosRenyi { n: 12, q: 0.5 });
        let f = VertexOrder::seeded(12, 4);
        let inv = f.by_rank();
        assert!(exit_set(&g, &f, inv[0]).unwrap().is_empty());
        assert_eq!(exit_set(&g, &f, inv[11]).unwrap().members(), g.neighbors(inv[11]));
        assert!(exit_set(&g, &f, 12).is_err());
    }

    #[test]
    fn cycle_four_indices() {
        let c4 = gen(GraphKind::Cycle { n: 4 });
        let f = VertexOrder::identity(4);
        assert_eq!(exit_set(&c4, &f, 3).unwrap().members(), &[0, 2]);
        let indices: Vec<i64> = (0..4).map(|x| index(&c4, &f, x).unwrap()).collect();
        assert_eq!(indices, vec![1, 0, 0, -1]);
        assert_eq!(poincare_hopf_chi(&c4, &f).unwrap(), 0);
    }

    #[test]
    fn local_minimum_has_index_one() {
        let g = gen(GraphKind::Icosahedron);
        let f = VertexOrder::seeded(12, 9);
        for x in g.vertices() {
            if g.neighbors(x).iter().all(|&y| f.rank(y) > f.rank(x)) {
                assert_eq!(index(&g, &f, x).unwrap(), 1);
            }
        }
    }

    #[test]
    fn icosahedron_cyclic_sphere_formula() {
        let g = gen(GraphKind::Icosahedron);
        for seed in 0..20 {
            let f = VertexOrder::seeded(12, seed);
            for x in g.vertices() {
                let exit = exit_set(&g, &f, x).unwrap();
                let inner = exit.members().iter().enumerate().flat_map(|(i, &u)| {
                    exit.members()[i + 1..].iter().map(move |&v| (u, v))
                });
                let edges = inner.filter(|&(u, v)| g.has_edge(u, v)).count() as i64;
                let i = index(&g, &f, x).unwrap();
                assert_eq!(i, 1 - exit.len() as i64 + edges);
                assert_eq!(symmetric_index::<Rational>(&g, &f, x).unwrap(), rational(i, 1));
            }
        }
    }

    #[test]
    fn symmetric_index_on_cycles_and_trees() {
        let c = gen(GraphKind::Cycle { n: 7 });
        let t = generate(&GraphKind::TreeRandom { n: 12 }, 3).unwrap();
        for seed in 0..10 {
            let f = VertexOrder::seeded(7, seed);
            for x in c.vertices() {
                assert_eq!(symmetric_index::<Rational>(&c, &f, x).unwrap(), rational(0, 1));
            }
            let f = VertexOrder::seeded(12, seed);
            for x in t.vertices() {
                let j: Rational = symmetric_index(&t, &f, x).unwrap();
                assert_eq!(j, rational(2 - t.degree(x) as i64, 2));
            }
        }
    }

    #[test]
    fn trees_sum_to_one() {
        let t = generate(&GraphKind::TreeRandom { n: 20 }, 8).unwrap();
        for seed in 0..10 {
            assert_eq!(poincare_hopf_chi(&t, &VertexOrder::seeded(20, seed)).unwrap(), 1);
        }
    }

    #[test]
    fn desk_scale_cross_route() {
        let g = generate(&GraphKind::ErdosRenyi { n: 200, q: 0.1 }, 3).unwrap();
        let chi = count_cliques(&g).euler_characteristic();
        assert_eq!(poincare_hopf_chi(&g, &VertexOrder::seeded(200, 1)).unwrap(), chi);
    }

    #[test]
    fn intermediate_examples() {
        let c6 = gen(GraphKind::Cycle { n: 6 });
        let rows = verify_intermediate_equations(&c6, &VertexOrder::seeded(6, 0)).unwrap();
        assert_eq!(rows[1], IntermediateRow { k: 1, lhs: 0, rhs: 0, equal: true });
        let k3 = gen(GraphKind::Complete { n: 3 });
        let rows = verify_intermediate_equations(&k3, &VertexOrder::identity(3)).unwrap();
        assert_eq!(rows[0], IntermediateRow { k: 0, lhs: 0, rhs: 0, equal: true });
        assert_eq!(rows[1], IntermediateRow { k: 1, lhs: 1, rhs: 1, equal: true });
        let k4 = gen(GraphKind::Complete { n: 4 });
        for_each_permutation(4, |f| {
            let rows = verify_intermediate_equations(&k4, f).unwrap();
            assert_eq!(rows[1], IntermediateRow { k: 1, lhs: 4, rhs: 4, equal: true });
        });
    }

    #[test]
    fn stability_examples() {
        let p3 = gen(GraphKind::Path { n: 3 });
        for_each_permutation(3, |f| assert_eq!(poincare_hopf_chi(&p3, f).unwrap(), 1));
        let k2 = gen(GraphKind::Complete { n: 2 });
        for_each_permutation(2, |f| assert_eq!(poincare_hopf_chi(&k2, f).unwrap(), 1));
        let g = gen(GraphKind::ErdosRenyi { n: 10, q: 0.5 });
        let report = verify_index_stability(&g, 50, 1).unwrap();
        assert!(report.stable);
        assert_eq!(report.random_sums.len(), 50);
        assert_eq!(report.path_sums.len(), 1 + 45);
        assert!(verify_index_stability(&g, 1, 1).is_err());
    }

    #[test]
    fn exhaustive_orders_small_graphs() {
        for (n, q, seed) in [(5, 0.5, 1), (6, 0.7, 2), (7, 0.4, 3), (7, 0.8, 4)] {
            let g = generate(&GraphKind::ErdosRenyi { n, q }, seed).unwrap();
            let chi = count_cliques(&g).euler_characteristic();
            for_each_permutation(n, |f| assert_eq!(poincare_hopf_chi(&g, f).unwrap(), chi));
        }
    }

    #[test]
    fn report_json() {
        let report = index_report::<Rational>(&gen(GraphKind::Path { n: 2 }), &VertexOrder::identity(2)).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        assert_eq!(
            json,
            r#"{"vertices":[{"vertex":0,"index":1,"symmetric":"1/2"},{"vertex":1,"index":0,"symmetric":"1/2"}],"sum_index":1,"sum_symmetric":"1"}"#
        );
    }

    proptest! {
        #[test]
        fn poincare_hopf_and_splits(n in 0usize..22, q in 0.0f64..=1.0, seed in any::<u64>(), fseed in any::<u64>()) {
            let g = generate(&GraphKind::ErdosRenyi { n, q }, seed).unwrap();
            let f = VertexOrder::seeded(n, fseed);
            let chi = count_cliques(&g).euler_characteristic();
            let report = index_report::<Rational>(&g, &f).unwrap();
            prop_assert_eq!(report.sum_index, chi);
            prop_assert_eq!(report.sum_symmetric, rational(chi, 1));
            prop_assert!(verify_intermediate_equations(&g, &f).unwrap().iter().all(|r| r.equal));
            let minus_f = f.reversed();
            for x in g.vertices() {
                prop_assert_eq!(exit_set(&g, &minus_f, x).unwrap(), entrance_set(&g, &f, x).unwrap());
                let split = sphere_split(&g, &f, x).unwrap();
                for k in 0..split.total.len() {
                    prop_assert_eq!(split.total[k], split.below[k] + split.above[k] + split.mixed[k]);
                }
                let exit = g.induced_subgraph(&exit_set(&g, &f, x).unwrap()).unwrap();
                let below = crate::clique::FVector::new(split.below.clone());
                prop_assert_eq!(&count_cliques(&exit), &below);
            }
        }
    }
}
