//! Counting complete subgraphs `K_{k+1}` and the Euler characteristic of the
//! clique complex.
//!
//! Cliques are enumerated by ordered extension: `{v_1 < ... < v_j}` is only
//! ever extended by a common neighbor greater than `v_j`, so each clique is
//! reached exactly once. Candidate sets are bitsets over the vertex ids.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// `counts[k]` is the number of `K_{k+1}` subgraphs. Trailing zeros are
/// trimmed, so the length is the clique number.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FVector {
    counts: Vec<u64>,
}

impl FVector {
    pub fn new(mut counts: Vec<u64>) -> Self {
        while counts.last() == Some(&0) {
            counts.pop();
        }
        Self { counts }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// `v_k`, zero past the clique number.
    pub fn get(&self, k: usize) -> u64 {
        self.counts.get(k).copied().unwrap_or(0)
    }

    /// Largest clique size.
    pub fn clique_number(&self) -> usize {
        self.counts.len()
    }

    /// `χ = Σ (−1)^k v_k`.
    pub fn euler_characteristic(&self) -> i64 {
        let chi: i128 = self
            .counts
            .iter()
            .enumerate()
            .map(|(k, &c)| if k % 2 == 0 { i128::from(c) } else { -i128::from(c) })
            .sum();
        i64::try_from(chi).expect("Euler characteristic fits in i64")
    }

    /// Componentwise sum, the f-vector of a disjoint union.
    pub fn checked_add(&self, other: &FVector) -> Result<FVector> {
        let len = self.counts.len().max(other.counts.len());
        let counts = (0..len)
            .map(|k| self.get(k).checked_add(other.get(k)).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(FVector::new(counts))
    }
}

/// Free-function form of [`FVector::euler_characteristic`].
pub fn euler_characteristic(f: &FVector) -> i64 {
    f.euler_characteristic()
}

/// `V[k] = V_k(x)`, the number of `K_{k+1}` in the unit sphere of `x`.
/// `V_{-1}(x) = 1` is implicit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexCliqueDegrees {
    pub x: usize,
    pub degrees: FVector,
}

impl VertexCliqueDegrees {
    /// `V_k(x)` for `k >= -1`.
    pub fn get(&self, k: isize) -> u64 {
        if k < 0 {
            1
        } else {
            self.degrees.get(k as usize)
        }
    }
}

/// Counts every clique of `graph`.
pub fn count_cliques(graph: &Graph) -> FVector {
    CliqueCounter::new()
        .count(graph)
        .expect("uncapped counting without an abort budget only fails on overflow")
}

pub fn vertex_clique_degrees(graph: &Graph, x: usize) -> Result<VertexCliqueDegrees> {
    let (sphere, _) = graph.unit_sphere(x)?;
    Ok(VertexCliqueDegrees { x, degrees: CliqueCounter::new().count(&sphere)? })
}

/// Calls `visit` with every clique of `graph` (sorted member ids).
pub fn for_each_clique<F: FnMut(&[usize])>(graph: &Graph, mut visit: F) {
    fn grow<F: FnMut(&[usize])>(graph: &Graph, clique: &mut Vec<usize>, cand: &[usize], visit: &mut F) {
        for (i, &v) in cand.iter().enumerate() {
            clique.push(v);
            visit(clique);
            let next: Vec<usize> = cand[i + 1..].iter().copied().filter(|&u| graph.has_edge(v, u)).collect();
            grow(graph, clique, &next, visit);
            clique.pop();
        }
    }
    let all: Vec<usize> = graph.vertices().collect();
    grow(graph, &mut Vec::new(), &all, &mut visit);
}

/// Configurable clique counter.
#[derive(Debug, Clone, Default)]
pub struct CliqueCounter {
    max_k: Option<usize>,
    warn_after: Option<u64>,
    abort_after: Option<u64>,
    parallel: bool,
}

impl CliqueCounter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Only count `v_0 ..= v_max_k`. Benchmarks only.
    pub fn max_k(mut self, max_k: usize) -> Self {
        self.max_k = Some(max_k);
        self
    }

    /// Log a warning once enumeration has visited this many cliques.
    pub fn warn_after(mut self, steps: u64) -> Self {
        self.warn_after = Some(steps);
        self
    }

    /// Give up with [`Error::BudgetExceeded`] after this many cliques.
    pub fn abort_after(mut self, steps: u64) -> Self {
        self.abort_after = Some(steps);
        self
    }

    /// Partition the work by smallest clique vertex across the rayon pool.
    /// Results are identical to sequential counting.
    pub fn parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    pub fn count(&self, graph: &Graph) -> Result<FVector> {
        let n = graph.order();
        if n == 0 {
            return Ok(FVector::default());
        }
        let words = n.div_ceil(64);
        let higher = higher_neighbor_bits(graph, words);
        // A clique containing v has at most deg(v) + 1 vertices.
        let depth = match self.max_k {
            Some(k) => (k + 1).min(graph.max_degree() + 1),
            None => graph.max_degree() + 1,
        };
        let ctx = Ctx {
            higher: &higher,
            words,
            depth,
            work: AtomicU64::new(0),
            warned: AtomicBool::new(false),
            warn_after: self.warn_after,
            abort_after: self.abort_after,
        };

        let from_root = |v: usize| -> Result<Vec<u64>> {
            let mut counts = vec![0u64; depth];
            let mut buf = vec![0u64; words * (depth + 1)];
            buf[..words].copy_from_slice(&higher[v * words..(v + 1) * words]);
            counts[0] = 1;
            let mut local_work = 1;
            ctx.extend(&mut buf, 0, 1, &mut counts, &mut local_work)?;
            ctx.charge(local_work)?;
            Ok(counts)
        };

        let per_root: Vec<Vec<u64>> = if self.parallel {
            (0..n).into_par_iter().map(from_root).collect::<Result<_>>()?
        } else {
            (0..n).map(from_root).collect::<Result<_>>()?
        };
        let mut total = vec![0u64; depth];
        for counts in per_root {
            for (t, c) in total.iter_mut().zip(counts) {
                *t = t.checked_add(c).ok_or(Error::Overflow)?;
            }
        }
        Ok(FVector::new(total))
    }
}

/// Row-major bitsets: row `v` has bit `u` set iff `u > v` and `u ~ v`.
fn higher_neighbor_bits(graph: &Graph, words: usize) -> Vec<u64> {
    let mut bits = vec![0u64; graph.order() * words];
    for v in graph.vertices() {
        let row = &mut bits[v * words..(v + 1) * words];
        for &u in graph.neighbors(v).iter().filter(|&&u| u > v) {
            row[u / 64] |= 1 << (u % 64);
        }
    }
    bits
}

struct Ctx<'a> {
    higher: &'a [u64],
    words: usize,
    depth: usize,
    work: AtomicU64,
    warned: AtomicBool,
    warn_after: Option<u64>,
    abort_after: Option<u64>,
}

const CHARGE_EVERY: u64 = 1 << 12;

impl Ctx<'_> {
    /// `buf[level]` holds the candidates extending the current clique of
    /// `size` vertices.
    fn extend(
        &self,
        buf: &mut [u64],
        level: usize,
        size: usize,
        counts: &mut [u64],
        local_work: &mut u64,
    ) -> Result<()> {
        if size >= self.depth {
            return Ok(());
        }
        let w = self.words;
        for i in 0..w {
            let mut word = buf[level * w + i];
            while word != 0 {
                let bit = word.trailing_zeros() as usize;
                word &= word - 1;
                let v = i * 64 + bit;
                counts[size] = counts[size].checked_add(1).ok_or(Error::Overflow)?;
                *local_work += 1;
                if *local_work >= CHARGE_EVERY {
                    self.charge(*local_work)?;
                    *local_work = 0;
                }
                if size + 1 >= self.depth {
                    continue;
                }
                let row = &self.higher[v * w..(v + 1) * w];
                let mut any = 0u64;
                for j in 0..w {
                    let next = buf[level * w + j] & row[j];
                    buf[(level + 1) * w + j] = next;
                    any |= next;
                }
                if any != 0 {
                    self.extend(buf, level + 1, size + 1, counts, local_work)?;
                }
            }
        }
        Ok(())
    }

    fn charge(&self, steps: u64) -> Result<()> {
        let total = self.work.fetch_add(steps, Ordering::Relaxed) + steps;
        if let Some(limit) = self.abort_after {
            if total > limit {
                return Err(Error::BudgetExceeded(limit));
            }
        }
        if let Some(limit) = self.warn_after {
            if total > limit && !self.warned.swap(true, Ordering::Relaxed) {
                log::warn!("clique enumeration passed {limit} steps; dense graphs can take a long time");
            }
        }
        Ok(())
    }
}
