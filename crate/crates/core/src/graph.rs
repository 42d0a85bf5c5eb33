//! Simple undirected graphs on dense vertex ids `0..n`.

use crate::error::{Error, Result};

/// Finite simple graph. Immutable once built.
///
/// Neighbor lists are sorted and free of duplicates, which lets clique
/// enumeration extend a clique by "greater id only".
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

/// Sorted set of distinct vertex ids of some host graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct VertexSet {
    members: Vec<usize>,
}

impl VertexSet {
    /// Sorts and deduplicates `ids`.
    pub fn new(mut ids: Vec<usize>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        Self { members: ids }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }
}

impl From<Vec<usize>> for VertexSet {
    fn from(ids: Vec<usize>) -> Self {
        Self::new(ids)
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

impl Graph {
    /// Graph with `n` isolated vertices.
    pub fn empty(n: usize) -> Self {
        Self { adj: vec![Vec::new(); n] }
    }

    /// Builds a graph from undirected edges. Duplicates and reversed pairs
    /// collapse to one edge.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n {
                return Err(Error::InvalidVertex { vertex: u, n });
            }
            if v >= n {
                return Err(Error::InvalidVertex { vertex: v, n });
            }
            if u == v {
                return Err(Error::Invalid(format!("self-loop at vertex {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self { adj })
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn size(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.order() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.order() {
            Ok(())
        } else {
            Err(Error::InvalidVertex { vertex: v, n: self.order() })
        }
    }

    /// Checks the simple-graph invariants: ids in range, no self-loops,
    /// symmetric and strictly sorted adjacency.
    pub fn validate(&self) -> Result<()> {
        let n = self.order();
        for (v, list) in self.adj.iter().enumerate() {
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Invalid(format!("adjacency of {v} is not strictly sorted")));
            }
            for &u in list {
                if u >= n {
                    return Err(Error::InvalidVertex { vertex: u, n });
                }
                if u == v {
                    return Err(Error::Invalid(format!("self-loop at vertex {v}")));
                }
                if self.adj[u].binary_search(&v).is_err() {
                    return Err(Error::Invalid(format!("edge {v}-{u} is not symmetric")));
                }
            }
        }
        Ok(())
    }

    /// Vertex-induced subgraph, relabeled `0..|set|` in ascending order of
    /// the original ids.
    pub fn induced_subgraph(&self, set: &VertexSet) -> Result<Graph> {
        for &v in set.members() {
            self.check_vertex(v)?;
        }
        Ok(self.induced_unchecked(set.members()))
    }

    /// `members` must be sorted, distinct and in range.
    pub(crate) fn induced_unchecked(&self, members: &[usize]) -> Graph {
        let adj = members
            .iter()
            .map(|&v| {
                let mut local = Vec::new();
                intersect_positions(&self.adj[v], members, &mut local);
                local
            })
            .collect();
        Graph { adj }
    }

    /// Unit sphere `S(x)`: the subgraph induced on the neighbors of `x`,
    /// together with the map from sphere-local ids back to ids of `self`.
    pub fn unit_sphere(&self, x: usize) -> Result<(Graph, Vec<usize>)> {
        self.check_vertex(x)?;
        let members = self.adj[x].clone();
        Ok((self.induced_unchecked(&members), members))
    }

    /// Disjoint union; vertices of `other` are shifted by `self.order()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.order();
        let mut adj = self.adj.clone();
        adj.extend(other.adj.iter().map(|list| list.iter().map(|&v| v + shift).collect()));
        Graph { adj }
    }
}

/// Pushes the positions in `members` of every element of `list` that also
/// occurs in `members`. Both inputs sorted.
fn intersect_positions(list: &[usize], members: &[usize], out: &mut Vec<usize>) {
    let (mut i, mut j) = (0, 0);
    while i < list.len() && j < members.len() {
        match list[i].cmp(&members[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(j);
                i += 1;
                j += 1;
            }
        }
    }
}
