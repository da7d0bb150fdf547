//! Spectral analysis: eigendecomposition of Hodge Laplacians, the simplicial
//! Fourier transform, frequency typing, and the Hodge decomposition of signals.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::error::{Result, ScError};
use crate::signal::SimplicialSignal;

/// Which Hodge subspace an eigenvector lies in.
///
/// Nonzero frequencies of the lower Laplacian are gradient-type, of the upper
/// Laplacian curl-type; the kernel of the total Laplacian is harmonic. At
/// `k = 0` only the upper term exists, so every nonzero frequency is labeled
/// curl; at `k = K` only the lower term exists and they are labeled gradient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FreqType {
    Harmonic,
    Gradient,
    Curl,
}

impl std::fmt::Display for FreqType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FreqType::Harmonic => write!(f, "harmonic"),
            FreqType::Gradient => write!(f, "gradient"),
            FreqType::Curl => write!(f, "curl"),
        }
    }
}

impl std::str::FromStr for FreqType {
    type Err = ScError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "harmonic" => Ok(FreqType::Harmonic),
            "gradient" => Ok(FreqType::Gradient),
            "curl" => Ok(FreqType::Curl),
            other => Err(ScError::Parse {
                line: 0,
                msg: format!("unknown frequency type `{other}`"),
            }),
        }
    }
}

/// Dense symmetric eigendecomposition with a deterministic output convention:
/// eigenvalues ascending, each eigenvector's largest-magnitude entry positive.
///
/// The residual contract is `norm(M u - lambda u) <= 1e-8 * norm(M)` per pair;
/// callers relying on it should check it in their own tests, this routine only
/// guarantees convergence or an explicit error.
pub fn eigendecompose(m: &DMatrix<f64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(ScError::DimensionMismatch {
            what: "eigendecompose input (square matrix)".into(),
            expected: n,
            got: m.ncols(),
        });
    }
    let scale = m.amax().max(1.0);
    let asym = (m - m.transpose()).amax();
    if asym > 1e-10 * scale {
        return Err(ScError::NotSymmetric(asym));
    }
    if n == 0 {
        return Ok((DVector::zeros(0), DMatrix::zeros(0, 0)));
    }
    let eig = nalgebra::SymmetricEigen::try_new(m.clone(), f64::EPSILON, 100 * n.max(10))
        .ok_or(ScError::ConvergenceFailure)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .expect("finite eigenvalues")
    });
    let mut values = DVector::zeros(n);
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        values[dst] = eig.eigenvalues[src];
        let mut col = eig.eigenvectors.column(src).clone_owned();
        fix_sign(&mut col);
        vectors.set_column(dst, &col);
    }
    Ok((values, vectors))
}

/// Makes the largest-magnitude entry positive (first such entry on ties).
fn fix_sign(v: &mut DVector<f64>) {
    let mut best = 0usize;
    for i in 1..v.len() {
        if v[i].abs() > v[best].abs() {
            best = i;
        }
    }
    if v.len() > 0 && v[best] < 0.0 {
        v.neg_mut();
    }
}

/// An orthonormal eigenbasis of a Hodge Laplacian in which every eigenvector
/// lies purely in one Hodge subspace.
///
/// Built by eigendecomposing the lower and upper Laplacian parts separately
/// and completing the kernel from the total Laplacian, so coinciding gradient
/// and curl eigenvalues never mix subspaces. Harmonic frequencies are recorded
/// as exactly zero.
#[derive(Clone, Debug)]
pub struct SpectralBasis {
    level: usize,
    eigenvalues: Vec<f64>,
    types: Vec<FreqType>,
    /// Column `i` is the eigenvector of `eigenvalues[i]`.
    vectors: DMatrix<f64>,
    tol_zero: f64,
}

impl SpectralBasis {
    /// Builds the Hodge-aligned basis at level `k`.
    ///
    /// `tol_zero` separates zero from nonzero eigenvalues; when `None` it
    /// defaults to `1e-8 * max(lambda_max, 1)`, a scale-invariant kernel
    /// threshold with a floor for (near-)zero matrices.
    pub fn build(sc: &SimplicialComplex, k: usize, tol_zero: Option<f64>) -> Result<Self> {
        let lap = sc.hodge_laplacian(k)?;
        let n = lap.dim();
        let total = lap.total();
        let (total_vals, total_vecs) = eigendecompose(&total)?;
        let lambda_max = total_vals.iter().fold(0.0f64, |a, &b| a.max(b));
        let tol = tol_zero.unwrap_or(1e-8 * lambda_max.max(1.0));

        let mut entries: Vec<(f64, FreqType, DVector<f64>)> = Vec::with_capacity(n);
        if k >= 1 {
            let (vals, vecs) = eigendecompose(lap.lower())?;
            for i in 0..n {
                if vals[i] > tol {
                    entries.push((vals[i], FreqType::Gradient, vecs.column(i).clone_owned()));
                }
            }
        }
        if k < sc.order() {
            let (vals, vecs) = eigendecompose(lap.upper())?;
            for i in 0..n {
                if vals[i] > tol {
                    entries.push((vals[i], FreqType::Curl, vecs.column(i).clone_owned()));
                }
            }
        }
        for i in 0..n {
            if total_vals[i] < tol {
                entries.push((0.0, FreqType::Harmonic, total_vecs.column(i).clone_owned()));
            }
        }
        if entries.len() != n {
            return Err(ScError::Numerical(format!(
                "hodge-aligned basis at level {k} has {} vectors for dimension {n}; \
                 tol_zero {tol:.3e} does not separate the spectrum",
                entries.len()
            )));
        }
        entries.sort_by(|a, b| {
            a.0.partial_cmp(&b.0)
                .expect("finite eigenvalues")
                .then(a.1.cmp(&b.1))
        });
        let mut vectors = DMatrix::zeros(n, n);
        let mut eigenvalues = Vec::with_capacity(n);
        let mut types = Vec::with_capacity(n);
        for (i, (val, ty, vec)) in entries.into_iter().enumerate() {
            eigenvalues.push(val);
            types.push(ty);
            vectors.set_column(i, &vec);
        }
        Ok(Self {
            level: k,
            eigenvalues,
            types,
            vectors,
            tol_zero: tol,
        })
    }

    pub fn from_parts(
        level: usize,
        eigenvalues: Vec<f64>,
        types: Vec<FreqType>,
        vectors: DMatrix<f64>,
        tol_zero: f64,
    ) -> Result<Self> {
        let n = vectors.nrows();
        if eigenvalues.len() != n || types.len() != n || vectors.ncols() != n {
            return Err(ScError::DimensionMismatch {
                what: "spectral basis parts".into(),
                expected: n,
                got: eigenvalues.len().min(types.len()).min(vectors.ncols()),
            });
        }
        Ok(Self {
            level,
            eigenvalues,
            types,
            vectors,
            tol_zero,
        })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn types(&self) -> &[FreqType] {
        &self.types
    }

    pub fn vectors(&self) -> &DMatrix<f64> {
        &self.vectors
    }

    pub fn eigenvector(&self, i: usize) -> DVector<f64> {
        self.vectors.column(i).clone_owned()
    }

    pub fn tol_zero(&self) -> f64 {
        self.tol_zero
    }

    pub fn count(&self, ty: FreqType) -> usize {
        self.types.iter().filter(|&&t| t == ty).count()
    }

    /// Frequencies of one type, in ascending order.
    pub fn frequencies(&self, ty: FreqType) -> Vec<f64> {
        self.eigenvalues
            .iter()
            .zip(&self.types)
            .filter(|(_, &t)| t == ty)
            .map(|(&l, _)| l)
            .collect()
    }

    /// The simplicial Fourier transform `U^T x`.
    pub fn sft(&self, x: &SimplicialSignal) -> Result<DVector<f64>> {
        self.check(x.level(), x.len())?;
        Ok(self.vectors.tr_mul(x.values()))
    }

    /// The inverse transform `U c`.
    pub fn isft(&self, coeffs: &DVector<f64>) -> Result<SimplicialSignal> {
        self.check(self.level, coeffs.len())?;
        Ok(SimplicialSignal::from_vector(
            self.level,
            &self.vectors * coeffs,
        ))
    }

    /// Splits a signal into its gradient, curl, and harmonic components.
    ///
    /// Gradient and curl parts are projections onto the labeled eigenvectors;
    /// the harmonic part is the remainder, so the three always reconstruct the
    /// input exactly.
    pub fn hodge_decompose(&self, x: &SimplicialSignal) -> Result<HodgeParts> {
        self.check(x.level(), x.len())?;
        let coeffs = self.vectors.tr_mul(x.values());
        let mut grad_coeffs = coeffs.clone();
        let mut curl_coeffs = coeffs;
        for i in 0..self.dim() {
            if self.types[i] != FreqType::Gradient {
                grad_coeffs[i] = 0.0;
            }
            if self.types[i] != FreqType::Curl {
                curl_coeffs[i] = 0.0;
            }
        }
        let gradient = &self.vectors * grad_coeffs;
        let curl = &self.vectors * curl_coeffs;
        let harmonic = x.values() - &gradient - &curl;
        Ok(HodgeParts {
            gradient: SimplicialSignal::from_vector(self.level, gradient),
            curl: SimplicialSignal::from_vector(self.level, curl),
            harmonic: SimplicialSignal::from_vector(self.level, harmonic),
        })
    }

    fn check(&self, level: usize, len: usize) -> Result<()> {
        if level != self.level {
            return Err(ScError::LevelMismatch {
                what: "spectral basis",
                expected: self.level,
                got: level,
            });
        }
        if len != self.dim() {
            return Err(ScError::DimensionMismatch {
                what: format!("signal against basis at level {}", self.level),
                expected: self.dim(),
                got: len,
            });
        }
        Ok(())
    }
}

/// The three orthogonal components of a `k`-signal.
#[derive(Clone, Debug)]
pub struct HodgeParts {
    pub gradient: SimplicialSignal,
    pub curl: SimplicialSignal,
    pub harmonic: SimplicialSignal,
}

impl HodgeParts {
    /// `gradient + curl + harmonic`, which reconstructs the decomposed signal.
    pub fn sum(&self) -> SimplicialSignal {
        SimplicialSignal::from_vector(
            self.gradient.level(),
            self.gradient.values() + self.curl.values() + self.harmonic.values(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn triangle() -> SimplicialComplex {
        SimplicialComplex::build(&[vec![1, 2, 3]], 2).unwrap()
    }

    #[test]
    fn scalar_matrix_spectrum() {
        let m = DMatrix::from_diagonal_element(3, 3, 3.0);
        let (vals, vecs) = eigendecompose(&m).unwrap();
        for i in 0..3 {
            assert_relative_eq!(vals[i], 3.0, max_relative = 1e-12);
        }
        let gram = vecs.transpose() * &vecs;
        assert!((gram - DMatrix::identity(3, 3)).amax() < 1e-12);
    }

    #[test]
    fn three_cycle_graph_laplacian_spectrum() {
        let l0 = triangle().hodge_laplacian(0).unwrap().total();
        let (vals, _) = eigendecompose(&l0).unwrap();
        assert!(vals[0].abs() < 1e-12);
        assert_relative_eq!(vals[1], 3.0, epsilon = 1e-10);
        assert_relative_eq!(vals[2], 3.0, epsilon = 1e-10);
    }

    #[test]
    fn zero_matrix_gives_identity_basis() {
        let (vals, vecs) = eigendecompose(&DMatrix::zeros(4, 4)).unwrap();
        assert!(vals.iter().all(|&v| v == 0.0));
        assert_eq!(vecs, DMatrix::identity(4, 4));
    }

    #[test]
    fn rejects_asymmetric_input() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(eigendecompose(&m), Err(ScError::NotSymmetric(_))));
    }

    #[test]
    fn triangle_edge_basis_counts_and_curl_frequency() {
        let basis = SpectralBasis::build(&triangle(), 1, None).unwrap();
        assert_eq!(basis.count(FreqType::Gradient), 2);
        assert_eq!(basis.count(FreqType::Curl), 1);
        assert_eq!(basis.count(FreqType::Harmonic), 0);
        assert_eq!(basis.frequencies(FreqType::Curl), vec![3.0]);
        // Ties sort harmonic < gradient < curl.
        assert_eq!(
            basis.types(),
            &[FreqType::Gradient, FreqType::Gradient, FreqType::Curl]
        );
    }

    #[test]
    fn disjoint_triangles_duplicate_the_counts() {
        let sc = SimplicialComplex::build(&[vec![1, 2, 3], vec![4, 5, 6]], 2).unwrap();
        let basis = SpectralBasis::build(&sc, 1, None).unwrap();
        assert_eq!(basis.count(FreqType::Gradient), 4);
        assert_eq!(basis.count(FreqType::Curl), 2);
        assert_eq!(basis.count(FreqType::Harmonic), 0);
    }

    #[test]
    fn vertex_level_labels_nonzero_as_curl() {
        let basis = SpectralBasis::build(&triangle(), 0, None).unwrap();
        assert_eq!(basis.count(FreqType::Harmonic), 1);
        assert_eq!(basis.count(FreqType::Curl), 2);
        assert_eq!(basis.count(FreqType::Gradient), 0);
    }

    #[test]
    fn top_level_labels_nonzero_as_gradient() {
        let basis = SpectralBasis::build(&triangle(), 2, None).unwrap();
        assert_eq!(basis.count(FreqType::Gradient), 1);
        assert_eq!(basis.frequencies(FreqType::Gradient), vec![3.0]);
    }

    #[test]
    fn single_vertex_complex_is_all_harmonic() {
        let sc = SimplicialComplex::build(&[vec![1]], 0).unwrap();
        let basis = SpectralBasis::build(&sc, 0, None).unwrap();
        assert_eq!(basis.eigenvalues(), &[0.0]);
        assert_eq!(basis.types(), &[FreqType::Harmonic]);
    }

    #[test]
    fn sft_of_eigenvector_is_unit_coefficient() {
        let basis = SpectralBasis::build(&triangle(), 1, None).unwrap();
        let u = basis.eigenvector(1);
        let x = SimplicialSignal::from_vector(1, u);
        let coeffs = basis.sft(&x).unwrap();
        assert_relative_eq!(coeffs[1], 1.0, epsilon = 1e-12);
        assert!(coeffs[0].abs() < 1e-12 && coeffs[2].abs() < 1e-12);
    }

    #[test]
    fn sft_isft_round_trip_and_isometry() {
        let basis = SpectralBasis::build(&triangle(), 1, None).unwrap();
        let x = SimplicialSignal::from_vec(1, vec![0.3, -1.2, 2.5]);
        let coeffs = basis.sft(&x).unwrap();
        assert_relative_eq!(coeffs.norm(), x.values().norm(), epsilon = 1e-12);
        let back = basis.isft(&coeffs).unwrap();
        assert_relative_eq!(
            (back.values() - x.values()).norm(),
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn curl_flow_has_single_curl_coefficient() {
        let basis = SpectralBasis::build(&triangle(), 1, None).unwrap();
        let s3 = 3.0f64.sqrt();
        let x = SimplicialSignal::from_vec(1, vec![1.0 / s3, -1.0 / s3, 1.0 / s3]);
        let coeffs = basis.sft(&x).unwrap();
        for i in 0..3 {
            if basis.types()[i] == FreqType::Curl {
                assert_relative_eq!(coeffs[i].abs(), 1.0, epsilon = 1e-12);
            } else {
                assert!(coeffs[i].abs() < 1e-12);
            }
        }
    }

    #[test]
    fn decompose_indicator_edge_signal() {
        let basis = SpectralBasis::build(&triangle(), 1, None).unwrap();
        let x = SimplicialSignal::from_vec(1, vec![1.0, 0.0, 0.0]);
        let parts = basis.hodge_decompose(&x).unwrap();
        let expected_curl = [1.0 / 3.0, -1.0 / 3.0, 1.0 / 3.0];
        for i in 0..3 {
            assert_relative_eq!(parts.curl.values()[i], expected_curl[i], epsilon = 1e-12);
            assert_relative_eq!(
                parts.gradient.values()[i],
                x.values()[i] - expected_curl[i],
                epsilon = 1e-12
            );
            assert!(parts.harmonic.values()[i].abs() < 1e-12);
        }
    }

    #[test]
    fn gradient_input_has_no_curl_or_harmonic_part() {
        let sc = triangle();
        let basis = SpectralBasis::build(&sc, 1, None).unwrap();
        let x0 = SimplicialSignal::from_vec(0, vec![0.7, -0.2, 1.9]);
        let grad_flow = sc.lift_up(&x0).unwrap();
        let parts = basis.hodge_decompose(&grad_flow).unwrap();
        assert!(parts.curl.values().amax() < 1e-10);
        assert!(parts.harmonic.values().amax() < 1e-10);
    }

    #[test]
    fn decomposition_acts_blockwise_on_disjoint_triangles() {
        let sc = SimplicialComplex::build(&[vec![1, 2, 3], vec![4, 5, 6]], 2).unwrap();
        let basis = SpectralBasis::build(&sc, 1, None).unwrap();
        // Signal supported on the first triangle decomposes within it.
        let x = SimplicialSignal::from_vec(1, vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let parts = basis.hodge_decompose(&x).unwrap();
        for i in 3..6 {
            assert!(parts.gradient.values()[i].abs() < 1e-12);
            assert!(parts.curl.values()[i].abs() < 1e-12);
        }
    }
}
