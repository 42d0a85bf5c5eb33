//! Vertex curvature `K(x) = Σ_k (−1)^k V_{k−1}(x) / (k+1)` and the
//! Gauss–Bonnet and transfer identities built on it.

use rayon::prelude::*;
use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::clique::{count_cliques, vertex_clique_degrees, VertexCliqueDegrees};
use crate::error::Result;
use crate::graph::Graph;
use crate::scalar::{Rational, Scalar};

/// Curvature of `x`. An isolated vertex has curvature 1.
pub fn curvature<T: Scalar>(graph: &Graph, x: usize) -> Result<T> {
    Ok(curvature_from_degrees(&vertex_clique_degrees(graph, x)?))
}

/// Curvature from the clique counts of the unit sphere.
pub fn curvature_from_degrees<T: Scalar>(degrees: &VertexCliqueDegrees) -> T {
    let len = degrees.degrees.clique_number() as isize;
    (0..=len).fold(T::zero(), |acc, k| {
        let term = T::from_count(degrees.get(k - 1)) / T::from_int(k as i64 + 1);
        if k % 2 == 0 {
            acc + term
        } else {
            acc - term
        }
    })
}

/// Curvature of every vertex together with their sum.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureField<T> {
    pub values: Vec<T>,
    pub total: T,
}

pub fn curvature_field<T: Scalar>(graph: &Graph) -> CurvatureField<T> {
    let values: Vec<T> = graph
        .vertices()
        .into_par_iter()
        .map(|x| curvature(graph, x).expect("vertex ids come from the graph"))
        .collect();
    let total = values.iter().fold(T::zero(), |acc, k| acc + k.clone());
    CurvatureField { values, total }
}

/// `{"0": "1/6", "1": "1/6", ..., "total": "2"}`.
impl<T: Scalar> Serialize for CurvatureField<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.values.len() + 1))?;
        for (x, k) in self.values.iter().enumerate() {
            map.serialize_entry(&x.to_string(), &k.to_string())?;
        }
        map.serialize_entry("total", &self.total.to_string())?;
        map.end()
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct GaussBonnetReport {
    #[serde(serialize_with = "crate::scalar::serde_display")]
    pub lhs: Rational,
    pub rhs: i64,
    pub equal: bool,
}

/// Compares the exact curvature total with χ from clique counting.
pub fn verify_gauss_bonnet(graph: &Graph) -> GaussBonnetReport {
    let lhs = curvature_field::<Rational>(graph).total;
    let rhs = count_cliques(graph).euler_characteristic();
    let equal = lhs == crate::scalar::integer(rhs);
    GaussBonnetReport { lhs, rhs, equal }
}

/// One row of the transfer identity `Σ_x V_{k−1}(x) = (k+1) v_k`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct TransferRow {
    pub k: usize,
    pub lhs: u64,
    pub rhs: u64,
    pub equal: bool,
}

/// Rows for every `k` where either side is nonzero.
pub fn verify_transfer_equations(graph: &Graph) -> Vec<TransferRow> {
    let f = count_cliques(graph);
    let spheres: Vec<VertexCliqueDegrees> = graph
        .vertices()
        .into_par_iter()
        .map(|x| vertex_clique_degrees(graph, x).expect("vertex ids come from the graph"))
        .collect();
    let top = spheres.iter().map(|d| d.degrees.clique_number() + 1).max().unwrap_or(0);
    let top = top.max(f.clique_number());
    (0..top)
        .map(|k| {
            let lhs: u64 = spheres.iter().map(|d| d.get(k as isize - 1)).sum();
            let rhs = (k as u64 + 1) * f.get(k);
            TransferRow { k, lhs, rhs, equal: lhs == rhs }
        })
        .collect()
}
