#![allow(dead_code)]

use nalgebra::DMatrix;
use proptest::prelude::*;
use teleport_core::{ComplexMat, ComplexVec, ProtocolTable, SchmidtSpectrum, C64};

pub fn complex_vec(dim: usize) -> impl Strategy<Value = ComplexVec> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim)
        .prop_map(|v| v.into_iter().map(|(re, im)| C64::new(re, im)).collect())
}

/// Normalized state, rejecting the (measure-zero) near-zero draws.
pub fn unit_vec(dim: usize) -> impl Strategy<Value = ComplexVec> {
    complex_vec(dim).prop_filter_map("near-zero vector", |v| {
        (v.norm_sqr() > 1e-6).then(|| v.normalized().unwrap())
    })
}

pub fn normalize(weights: &[f64]) -> Vec<f64> {
    let total: f64 = weights.iter().sum();
    weights.iter().map(|w| w / total).collect()
}

/// Random positive weights pulled toward uniform just enough that every
/// entry is at most `1/d` (with a small margin).
pub fn feasible_probs(weights: &[f64], d: usize) -> Vec<f64> {
    let n = weights.len() as f64;
    let q = normalize(weights);
    let qmax = q.iter().copied().fold(0.0, f64::max);
    let cap = 1.0 / d as f64 - 1e-9;
    let t = if qmax <= cap {
        0.0
    } else {
        ((qmax - cap) / (qmax - 1.0 / n)).min(1.0)
    };
    normalize(&q.iter().map(|p| (1.0 - t) * p + t / n).collect::<Vec<_>>())
}

pub fn spectrum(probs: Vec<f64>) -> SchmidtSpectrum {
    SchmidtSpectrum::from_probs(probs).expect("valid spectrum")
}

/// Hermitian eigenvalues in descending order, computed by nalgebra.
pub fn hermitian_eigenvalues(m: &ComplexMat) -> Vec<f64> {
    let dense = DMatrix::from_fn(m.rows(), m.cols(), |i, j| m.get(i, j));
    let mut values: Vec<f64> = dense.symmetric_eigen().eigenvalues.iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

/// Outcome probabilities straight from the table:
/// `Σ_k p_k |Σ_m a_m conj(V_mk)|²`.
pub fn brute_force_probabilities(table: &ProtocolTable, probs: &[f64], amps: &ComplexVec) -> Vec<f64> {
    (0..table.outcomes())
        .map(|j| {
            (0..table.n())
                .map(|k| {
                    let amp: C64 = (0..table.d()).map(|m| amps[m] * table.get(j, m, k).conj()).sum();
                    probs[k] * amp.norm_sqr()
                })
                .sum()
        })
        .collect()
}
