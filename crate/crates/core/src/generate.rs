//! Deterministic graph generators.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq)]
pub enum GraphKind {
    /// `C_n`, `n >= 3`, edges `i ~ i+1 mod n`.
    Cycle { n: usize },
    /// `P_n` on `n >= 1` vertices.
    Path { n: usize },
    /// Uniform random labelled tree on `n >= 1` vertices (Prüfer code).
    TreeRandom { n: usize },
    Complete { n: usize },
    /// Vertex 0 joined to `1..n`.
    Star { n: usize },
    Octahedron,
    Icosahedron,
    /// `G(n, q)`: each unordered pair independently with probability `q`.
    ErdosRenyi { n: usize, q: f64 },
}

/// Builds the graph described by `kind`. Only the random kinds read `seed`.
pub fn generate(kind: &GraphKind, seed: u64) -> Result<Graph> {
    match *kind {
        GraphKind::Cycle { n } => {
            if n < 3 {
                return Err(Error::InvalidParams(format!("cycle needs n >= 3, got {n}")));
            }
            Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
        }
        GraphKind::Path { n } => {
            if n < 1 {
                return Err(Error::InvalidParams("path needs n >= 1".into()));
            }
            Graph::from_edges(n, (1..n).map(|i| (i - 1, i)))
        }
        GraphKind::TreeRandom { n } => random_tree(n, seed),
        GraphKind::Complete { n } => {
            Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
        }
        GraphKind::Star { n } => {
            if n < 1 {
                return Err(Error::InvalidParams("star needs n >= 1".into()));
            }
            Graph::from_edges(n, (1..n).map(|v| (0, v)))
        }
        GraphKind::Octahedron => {
            // Antipodal pairs (0,1), (2,3), (4,5) are the only non-edges.
            let edges = (0..6usize)
                .flat_map(|u| (u + 1..6).map(move |v| (u, v)))
                .filter(|&(u, v)| u / 2 != v / 2);
            Graph::from_edges(6, edges)
        }
        GraphKind::Icosahedron => Graph::from_edges(12, ICOSAHEDRON_EDGES.iter().copied()),
        GraphKind::ErdosRenyi { n, q } => {
            if !(0.0..=1.0).contains(&q) {
                return Err(Error::InvalidParams(format!("edge probability {q} outside [0, 1]")));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random::<f64>() < q {
                        edges.push((u, v));
                    }
                }
            }
            Graph::from_edges(n, edges)
        }
    }
}

// 0 is the north pole, 1..=5 the upper ring, 6..=10 the lower ring, 11 the
// south pole.
#[rustfmt::skip]
const ICOSAHEDRON_EDGES: [(usize, usize); 30] = [
    (0, 1), (0, 2), (0, 3), (0, 4), (0, 5),
    (1, 2), (2, 3), (3, 4), (4, 5), (5, 1),
    (1, 6), (1, 7), (2, 7), (2, 8), (3, 8),
    (3, 9), (4, 9), (4, 10), (5, 10), (5, 6),
    (6, 7), (7, 8), (8, 9), (9, 10), (10, 6),
    (11, 6), (11, 7), (11, 8), (11, 9), (11, 10),
];

fn random_tree(n: usize, seed: u64) -> Result<Graph> {
    match n {
        0 => Err(Error::InvalidParams("tree needs n >= 1".into())),
        1 => Ok(Graph::empty(1)),
        2 => Graph::from_edges(2, [(0, 1)]),
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let code: Vec<usize> = (0..n - 2).map(|_| rng.random_range(0..n)).collect();
            Graph::from_edges(n, decode_prufer(n, &code))
        }
    }
}

fn decode_prufer(n: usize, code: &[usize]) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &c in code {
        degree[c] += 1;
    }
    let mut leaves: std::collections::BTreeSet<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &c in code {
        let leaf = leaves.pop_first().expect("a Prüfer code always leaves a leaf");
        edges.push((leaf, c));
        degree[c] -= 1;
        if degree[c] == 1 {
            leaves.insert(c);
        }
    }
    let last: Vec<usize> = leaves.into_iter().collect();
    edges.push((last[0], last[1]));
    edges
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphKind::Cycle { n } => write!(f, "cycle:{n}"),
            GraphKind::Path { n } => write!(f, "path:{n}"),
            GraphKind::TreeRandom { n } => write!(f, "tree:{n}"),
            GraphKind::Complete { n } => write!(f, "complete:{n}"),
            GraphKind::Star { n } => write!(f, "star:{n}"),
            GraphKind::Octahedron => write!(f, "octahedron"),
            GraphKind::Icosahedron => write!(f, "icosahedron"),
            GraphKind::ErdosRenyi { n, q } => write!(f, "er:{n}:{q}"),
        }
    }
}

/// Parses `kind[:params]`, e.g. `cycle:6`, `er:200:0.1`, `icosahedron`.
impl FromStr for GraphKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let count = |i: usize| -> Result<usize> {
            parts
                .get(i)
                .ok_or_else(|| Error::InvalidParams(format!("`{s}`: missing vertex count")))?
                .parse()
                .map_err(|_| Error::InvalidParams(format!("`{s}`: bad vertex count")))
        };
        let arity = |expected: usize| -> Result<()> {
            if parts.len() == expected {
                Ok(())
            } else {
                Err(Error::InvalidParams(format!("`{s}`: expected {} parameter(s)", expected - 1)))
            }
        };
        let kind = match parts[0] {
            "cycle" => GraphKind::Cycle { n: count(1)? },
            "path" => GraphKind::Path { n: count(1)? },
            "tree" | "tree_random" => GraphKind::TreeRandom { n: count(1)? },
            "complete" | "K" => GraphKind::Complete { n: count(1)? },
            "star" => GraphKind::Star { n: count(1)? },
            "octahedron" => GraphKind::Octahedron,
            "icosahedron" => GraphKind::Icosahedron,
            "er" | "erdos_renyi" => {
                arity(3)?;
                let q = parts[2]
                    .parse()
                    .map_err(|_| Error::InvalidParams(format!("`{s}`: bad edge probability")))?;
                GraphKind::ErdosRenyi { n: count(1)?, q }
            }
            other => return Err(Error::InvalidParams(format!("unknown graph kind `{other}`"))),
        };
        match kind {
            GraphKind::Octahedron | GraphKind::Icosahedron => arity(1)?,
            GraphKind::ErdosRenyi { .. } => {}
            _ => arity(2)?,
        }
        Ok(kind)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn edge_set(g: &Graph) -> Vec<(usize, usize)> {
        g.edges().collect()
    }

    #[test]
    fn cycle_four() {
        let g = generate(&GraphKind::Cycle { n: 4 }, 0).unwrap();
        assert_eq!(edge_set(&g), vec![(0, 1), (0, 3), (1, 2), (2, 3)]);
        assert!(generate(&GraphKind::Cycle { n: 2 }, 0).is_err());
    }

    #[test]
    fn icosahedron_table() {
        let g = generate(&GraphKind::Icosahedron, 0).unwrap();
        g.validate().unwrap();
        assert_eq!(g.order(), 12);
        assert_eq!(g.size(), 30);
        assert!(g.vertices().all(|v| g.degree(v) == 5));
        // Antipodal vertices are the unique non-neighbors at distance 3.
        for v in g.vertices() {
            let mut near: Vec<usize> = g.neighbors(v).to_vec();
            near.push(v);
            for &u in g.neighbors(v) {
                near.extend_from_slice(g.neighbors(u));
            }
            near.sort_unstable();
            near.dedup();
            assert_eq!(near.len(), 11, "vertex {v}");
        }
    }

    #[test]
    fn octahedron_table() {
        let g = generate(&GraphKind::Octahedron, 0).unwrap();
        assert_eq!((g.order(), g.size()), (6, 12));
        assert!(g.vertices().all(|v| g.degree(v) == 4));
    }

    #[test]
    fn er_extremes() {
        let g = generate(&GraphKind::ErdosRenyi { n: 10, q: 0.0 }, 7).unwrap();
        assert_eq!((g.order(), g.size()), (10, 0));
        let g = generate(&GraphKind::ErdosRenyi { n: 10, q: 1.0 }, 7).unwrap();
        assert_eq!(g.size(), 45);
        assert!(generate(&GraphKind::ErdosRenyi { n: 3, q: 1.5 }, 0).is_err());
    }

    #[test]
    fn trees_are_trees() {
        for n in 1..30 {
            for seed in 0..5 {
                let g = generate(&GraphKind::TreeRandom { n }, seed).unwrap();
                assert_eq!(g.size(), n - 1);
                assert_eq!(crate::clique::count_cliques(&g).euler_characteristic(), 1);
                let mut seen = vec![false; n];
                let mut stack = vec![0];
                seen[0] = true;
                while let Some(v) = stack.pop() {
                    for &u in g.neighbors(v) {
                        if !seen[u] {
                            seen[u] = true;
                            stack.push(u);
                        }
                    }
                }
                assert!(seen.iter().all(|&s| s), "tree n={n} seed={seed} disconnected");
            }
        }
    }

    #[test]
    fn parse_kinds() {
        assert_eq!("cycle:6".parse::<GraphKind>().unwrap(), GraphKind::Cycle { n: 6 });
        assert_eq!("er:200:0.1".parse::<GraphKind>().unwrap(), GraphKind::ErdosRenyi { n: 200, q: 0.1 });
        assert_eq!("icosahedron".parse::<GraphKind>().unwrap(), GraphKind::Icosahedron);
        assert!("cycle".parse::<GraphKind>().is_err());
        assert!("icosahedron:3".parse::<GraphKind>().is_err());
        assert!("moebius:4".parse::<GraphKind>().is_err());
        for kind in ["cycle:5", "tree:9", "er:10:0.25", "octahedron", "star:4"] {
            assert_eq!(kind.parse::<GraphKind>().unwrap().to_string(), kind);
        }
    }

    proptest! {
        #[test]
        fn generators_valid_and_reproducible(n in 1usize..40, q in 0.0f64..=1.0, seed in any::<u64>()) {
            for kind in [
                GraphKind::ErdosRenyi { n, q },
                GraphKind::TreeRandom { n },
                GraphKind::Path { n },
                GraphKind::Star { n },
                GraphKind::Complete { n: n % 12 },
                GraphKind::Cycle { n: n + 2 },
            ] {
                let a = generate(&kind, seed).unwrap();
                a.validate().unwrap();
                prop_assert_eq!(&a, &generate(&kind, seed).unwrap());
            }
        }
    }
}
