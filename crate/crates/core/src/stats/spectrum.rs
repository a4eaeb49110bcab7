//! Relative variance explained by the leading singular values of the |V|×|E|
//! incidence matrix.
//!
//! The squared singular values are the eigenvalues of the Gram matrix on the
//! smaller side (A·Aᵀ or Aᵀ·A), and Σ s_k² is the Frobenius norm squared,
//! i.e. Σ_e |e|, so the relative variances are exact even when only the top K
//! values are computed.

use nalgebra::{DMatrix, SymmetricEigen};
use rand_distr::{Distribution as _, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::seed;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumStats {
    /// s_i² / Σ_k s_k² for the top K singular values, non-increasing.
    pub rel_variance: Vec<f64>,
    pub k: usize,
    /// Rank proxy used to choose K.
    pub rank_proxy: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumMethod {
    /// Dense Gram eigenvalues for small matrices, subspace iteration otherwise.
    #[default]
    Auto,
    Dense,
    Iterative,
}

/// Largest Gram dimension for which `Auto` goes dense.
const DENSE_LIMIT: usize = 1500;
const MAX_ITERATIONS: usize = 3000;
const TOLERANCE: f64 = 1e-13;

/// min(|V|, |E|), the rank upper bound used as the rank proxy.
pub fn rank_proxy(h: &Hypergraph) -> usize {
    h.num_nodes().min(h.num_edges())
}

pub fn singular_spectrum(h: &Hypergraph, k: usize) -> Result<SpectrumStats> {
    singular_spectrum_with(h, k, SpectrumMethod::Auto)
}

pub fn singular_spectrum_with(h: &Hypergraph, k: usize, method: SpectrumMethod) -> Result<SpectrumStats> {
    if k == 0 {
        return Err(Error::InvalidArgument("spectrum needs K ≥ 1".into()));
    }
    let n = rank_proxy(h);
    let k = k.min(n);
    let frobenius = h.total_size() as f64;
    let dense = match method {
        SpectrumMethod::Dense => true,
        SpectrumMethod::Iterative => false,
        SpectrumMethod::Auto => n <= DENSE_LIMIT || 3 * k >= n,
    };
    let eigenvalues = if dense {
        dense_eigenvalues(h, k)
    } else {
        subspace_iteration(h, k).map_err(|e| match e {
            Error::NoConvergence { iterations, partial } => Error::NoConvergence {
                iterations,
                partial: partial.iter().map(|s| s / frobenius).collect(),
            },
            other => other,
        })?
    };
    Ok(SpectrumStats {
        rel_variance: eigenvalues.iter().map(|&l| l.max(0.0) / frobenius).collect(),
        k,
        rank_proxy: n,
    })
}

fn gram_matrix(h: &Hypergraph) -> DMatrix<f64> {
    if h.num_nodes() <= h.num_edges() {
        let n = h.num_nodes();
        let mut m = DMatrix::zeros(n, n);
        for e in h.edges() {
            for &u in e {
                for &v in e {
                    m[(u as usize, v as usize)] += 1.0;
                }
            }
        }
        m
    } else {
        let n = h.num_edges();
        let mut m = DMatrix::zeros(n, n);
        for v in 0..h.num_nodes() as u32 {
            let inc = h.incident(v);
            for &e in inc {
                for &f in inc {
                    m[(e as usize, f as usize)] += 1.0;
                }
            }
        }
        m
    }
}

fn dense_eigenvalues(h: &Hypergraph, k: usize) -> Vec<f64> {
    let mut values: Vec<f64> = gram_matrix(h).symmetric_eigenvalues().iter().copied().collect();
    values.sort_unstable_by(|a, b| b.total_cmp(a));
    values.truncate(k);
    values
}

/// Applies the Gram operator of the smaller side to each column of `x`.
fn gram_apply(h: &Hypergraph, x: &DMatrix<f64>) -> DMatrix<f64> {
    let cols = x.ncols();
    let node_side = h.num_nodes() <= h.num_edges();
    let mut out = DMatrix::zeros(x.nrows(), cols);
    let mut row = vec![0.0f64; cols];
    if node_side {
        // A·Aᵀ·x: gather per hyperedge, scatter back to members.
        for e in h.edges() {
            row.iter_mut().for_each(|r| *r = 0.0);
            for &v in e {
                for (c, r) in row.iter_mut().enumerate() {
                    *r += x[(v as usize, c)];
                }
            }
            for &v in e {
                for (c, r) in row.iter().enumerate() {
                    out[(v as usize, c)] += r;
                }
            }
        }
    } else {
        for v in 0..h.num_nodes() as u32 {
            let inc = h.incident(v);
            row.iter_mut().for_each(|r| *r = 0.0);
            for &e in inc {
                for (c, r) in row.iter_mut().enumerate() {
                    *r += x[(e as usize, c)];
                }
            }
            for &e in inc {
                for (c, r) in row.iter().enumerate() {
                    out[(e as usize, c)] += r;
                }
            }
        }
    }
    out
}

fn orthonormalize(m: DMatrix<f64>) -> DMatrix<f64> {
    m.qr().q()
}

/// Block subspace iteration with Rayleigh–Ritz extraction.
fn subspace_iteration(h: &Hypergraph, k: usize) -> Result<Vec<f64>> {
    let n = rank_proxy(h);
    let block = (k + k.max(10)).min(n);
    let mut rng = seed::rng(0x5ec7_0000 ^ n as u64);
    let start = DMatrix::from_fn(n, block, |_, _| StandardNormal.sample(&mut rng));
    let mut q = orthonormalize(start);
    let mut previous: Vec<f64> = vec![f64::INFINITY; k];
    let mut ritz: Vec<f64> = Vec::new();
    for _ in 0..MAX_ITERATIONS {
        let z = gram_apply(h, &q);
        let t = q.transpose() * &z;
        let t = (&t + t.transpose()) * 0.5;
        let eig = SymmetricEigen::new(t);
        let mut order: Vec<usize> = (0..block).collect();
        order.sort_unstable_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        ritz = order.iter().take(k).map(|&i| eig.eigenvalues[i]).collect();
        let scale = ritz[0].abs().max(1.0);
        let converged = ritz
            .iter()
            .zip(&previous)
            .all(|(a, b)| (a - b).abs() <= TOLERANCE * scale);
        if converged {
            return Ok(ritz);
        }
        previous.clone_from(&ritz);
        let w = DMatrix::from_fn(block, block, |r, c| eig.eigenvectors[(r, order[c])]);
        q = orthonormalize(z * w);
    }
    Err(Error::NoConvergence {
        iterations: MAX_ITERATIONS,
        partial: ritz,
    })
}
