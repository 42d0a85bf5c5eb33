//! Built-in graph corpus used by `verify` and the acceptance suite.

use crate::generate::{generate, GraphKind};
use crate::graph::Graph;

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub graph: Graph,
}

impl CorpusEntry {
    fn new(kind: GraphKind, seed: u64) -> Self {
        let graph = generate(&kind, seed).expect("corpus parameters are valid");
        let name = match kind {
            GraphKind::TreeRandom { .. } | GraphKind::ErdosRenyi { .. } => format!("{kind}@{seed}"),
            _ => kind.to_string(),
        };
        Self { name, graph }
    }
}

/// Cycles `C_3..C_12`, paths `P_1..P_10`, 20 random trees with at most 20
/// vertices, `K_2..K_8`, the octahedron, the icosahedron and `er_graphs`
/// Erdős–Rényi graphs with `5 <= n <= 30` and `q` cycling through
/// `0.1, 0.2, ..., 0.9`.
pub fn corpus(er_graphs: usize) -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    out.extend((3..=12).map(|n| CorpusEntry::new(GraphKind::Cycle { n }, 0)));
    out.extend((1..=10).map(|n| CorpusEntry::new(GraphKind::Path { n }, 0)));
    out.extend((0..20u64).map(|i| CorpusEntry::new(GraphKind::TreeRandom { n: 1 + i as usize }, 500 + i)));
    out.extend((2..=8).map(|n| CorpusEntry::new(GraphKind::Complete { n }, 0)));
    out.push(CorpusEntry::new(GraphKind::Octahedron, 0));
    out.push(CorpusEntry::new(GraphKind::Icosahedron, 0));
    out.extend((0..er_graphs as u64).map(|i| {
        let q = (1 + i % 9) as f64 / 10.0;
        let n = 5 + ((i * 7) % 26) as usize;
        CorpusEntry::new(GraphKind::ErdosRenyi { n, q }, 1000 + i)
    }));
    out
}

/// The corpus `verify` runs when no graph is given: 20 random graphs.
pub fn standard() -> Vec<CorpusEntry> {
    corpus(20)
}
