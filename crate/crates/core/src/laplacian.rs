//! Hodge Laplacians assembled from the boundary operators.

use nalgebra::DMatrix;

use crate::complex::SimplicialComplex;
use crate::error::{Result, ScError};

/// The level-`k` Hodge Laplacian, split into its lower and upper parts.
///
/// `lower = B_k^T B_k` captures lower-adjacency (shared faces) and `upper =
/// B_{k+1} B_{k+1}^T` upper-adjacency (shared cofaces). At `k = 0` the lower
/// part is zero and the upper part is the graph Laplacian; at `k = K` the
/// upper part is zero. Entries are small integers computed exactly, so the
/// identities `lower * upper = 0` and symmetry hold to the last bit.
#[derive(Clone, Debug, PartialEq)]
pub struct HodgeLaplacian {
    level: usize,
    lower: DMatrix<f64>,
    upper: DMatrix<f64>,
}

impl HodgeLaplacian {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn lower(&self) -> &DMatrix<f64> {
        &self.lower
    }

    pub fn upper(&self) -> &DMatrix<f64> {
        &self.upper
    }

    pub fn total(&self) -> DMatrix<f64> {
        &self.lower + &self.upper
    }

    pub fn dim(&self) -> usize {
        self.lower.nrows()
    }

    /// Largest absolute row sum of the total Laplacian: a cheap upper bound
    /// on the spectral radius (Gershgorin).
    pub fn gershgorin_bound(&self) -> f64 {
        let total = self.total();
        (0..total.nrows())
            .map(|i| total.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0f64, f64::max)
    }
}

impl SimplicialComplex {
    /// Assembles the Hodge Laplacian of level `k`, `0 <= k <= K`.
    pub fn hodge_laplacian(&self, k: usize) -> Result<HodgeLaplacian> {
        if k > self.order() {
            return Err(ScError::LevelOutOfRange {
                op: "hodge_laplacian",
                k,
                order: self.order(),
            });
        }
        let n = self.len(k);
        let lower = if k == 0 {
            DMatrix::zeros(n, n)
        } else {
            let b = self.incidence(k)?.to_dense_int();
            int_to_f64(&(b.transpose() * &b))
        };
        let upper = if k == self.order() {
            DMatrix::zeros(n, n)
        } else {
            let b = self.incidence(k + 1)?.to_dense_int();
            int_to_f64(&(&b * b.transpose()))
        };
        Ok(HodgeLaplacian {
            level: k,
            lower,
            upper,
        })
    }
}

fn int_to_f64(m: &DMatrix<i64>) -> DMatrix<f64> {
    m.map(|v| v as f64)
}
