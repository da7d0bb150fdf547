//! Simplicial convolutional filters: two matrix polynomials, one in the lower
//! and one in the upper Hodge Laplacian, applied by repeated sparse shifts.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::error::{Result, ScError};
use crate::signal::SimplicialSignal;
use crate::spectral::FreqType;

/// Coefficients of one simplicial convolutional filter at a fixed level.
///
/// `alpha[l]` weights the `l`-th power of the lower Laplacian and `beta[l]`
/// of the upper Laplacian; both constant terms act on the input, so the
/// effective identity weight is `alpha[0] + beta[0]`. An empty vector is the
/// absent (zero) polynomial. At level 0 the filter is a single polynomial in
/// the graph Laplacian stored in `beta` (the upper term is the only one
/// there); at the top level only `alpha` may be present.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FilterCoeffs {
    pub level: usize,
    #[serde(default)]
    pub alpha: Vec<f64>,
    #[serde(default)]
    pub beta: Vec<f64>,
}

impl FilterCoeffs {
    pub fn new(level: usize, alpha: Vec<f64>, beta: Vec<f64>) -> Self {
        Self { level, alpha, beta }
    }

    /// The identity filter at `level` of `sc`.
    pub fn identity(sc: &SimplicialComplex, level: usize) -> Result<Self> {
        if level > sc.order() {
            return Err(ScError::LevelOutOfRange {
                op: "identity filter",
                k: level,
                order: sc.order(),
            });
        }
        Ok(if level == 0 {
            Self::new(0, vec![], vec![1.0])
        } else {
            Self::new(level, vec![1.0], vec![])
        })
    }

    /// Constant term of the lower polynomial (0 when absent).
    pub fn alpha0(&self) -> f64 {
        self.alpha.first().copied().unwrap_or(0.0)
    }

    /// Constant term of the upper polynomial (0 when absent).
    pub fn beta0(&self) -> f64 {
        self.beta.first().copied().unwrap_or(0.0)
    }

    /// Checks the level exists in `sc` and the polynomial shape is legal
    /// there: `alpha` empty at level 0, `beta` empty at the top level.
    pub fn validate(&self, sc: &SimplicialComplex) -> Result<()> {
        if self.level > sc.order() {
            return Err(ScError::LevelOutOfRange {
                op: "filter",
                k: self.level,
                order: sc.order(),
            });
        }
        if self.level == 0 && !self.alpha.is_empty() {
            return Err(ScError::InvalidFilter {
                level: 0,
                reason: "level 0 has no lower Laplacian; alpha must be empty".into(),
            });
        }
        if self.level == sc.order() && self.level > 0 && !self.beta.is_empty() {
            return Err(ScError::InvalidFilter {
                level: self.level,
                reason: "the top level has no upper Laplacian; beta must be empty".into(),
            });
        }
        Ok(())
    }

    /// Applies the filter by the shift recursion: each Laplacian power acts as
    /// a pair of sparse incidence products, never forming a matrix power. The
    /// cost is linear in the number of simplices per polynomial degree.
    pub fn apply(&self, sc: &SimplicialComplex, x: &SimplicialSignal) -> Result<SimplicialSignal> {
        self.validate(sc)?;
        if x.level() != self.level {
            return Err(ScError::LevelMismatch {
                what: "filter input",
                expected: self.level,
                got: x.level(),
            });
        }
        let k = self.level;
        if x.len() != sc.len(k) {
            return Err(ScError::DimensionMismatch {
                what: format!("filter input at level {k}"),
                expected: sc.len(k),
                got: x.len(),
            });
        }
        let n = sc.len(k);
        let mut acc = vec![0.0; n];
        if !self.alpha.is_empty() {
            let b = sc.incidence(k)?;
            let mut shifted = x.values().as_slice().to_vec();
            let mut tmp = vec![0.0; b.nrows()];
            axpy(&mut acc, self.alpha[0], &shifted);
            for &coeff in &self.alpha[1..] {
                b.mul_vec(&shifted, &mut tmp);
                b.tr_mul_vec(&tmp, &mut shifted);
                axpy(&mut acc, coeff, &shifted);
            }
        }
        if !self.beta.is_empty() {
            let b = sc.incidence(k + 1)?;
            let mut shifted = x.values().as_slice().to_vec();
            let mut tmp = vec![0.0; b.ncols()];
            axpy(&mut acc, self.beta[0], &shifted);
            for &coeff in &self.beta[1..] {
                b.tr_mul_vec(&shifted, &mut tmp);
                b.mul_vec(&tmp, &mut shifted);
                axpy(&mut acc, coeff, &shifted);
            }
        }
        Ok(SimplicialSignal::from_vec(k, acc))
    }

    /// Dense filtering matrix `sum_l alpha_l L_kl^l + sum_l beta_l L_ku^l`.
    ///
    /// This is the independent oracle for `apply`: it goes through explicit
    /// dense matrix powers instead of the shift recursion.
    pub fn matrix(&self, sc: &SimplicialComplex) -> Result<DMatrix<f64>> {
        self.validate(sc)?;
        let lap = sc.hodge_laplacian(self.level)?;
        let n = lap.dim();
        let mut acc = DMatrix::zeros(n, n);
        for (coeffs, part) in [(&self.alpha, lap.lower()), (&self.beta, lap.upper())] {
            if coeffs.is_empty() {
                continue;
            }
            let mut power = DMatrix::identity(n, n);
            acc += &power * coeffs[0];
            for &c in &coeffs[1..] {
                power = part * power;
                acc += &power * c;
            }
        }
        Ok(acc)
    }

    /// The frequency response at eigenvalue `lambda` of the given type.
    ///
    /// Harmonic frequencies see only the two constant terms; gradient ones the
    /// whole lower polynomial plus the upper constant; curl ones the whole
    /// upper polynomial plus the lower constant.
    pub fn response(&self, lambda: f64, ty: FreqType) -> f64 {
        match ty {
            FreqType::Harmonic => self.alpha0() + self.beta0(),
            FreqType::Gradient => self.beta0() + poly_eval(&self.alpha, lambda),
            FreqType::Curl => self.alpha0() + poly_eval(&self.beta, lambda),
        }
    }
}

fn axpy(acc: &mut [f64], coeff: f64, v: &[f64]) {
    for (a, &x) in acc.iter_mut().zip(v) {
        *a += coeff * x;
    }
}

fn poly_eval(coeffs: &[f64], lambda: f64) -> f64 {
    let mut acc = 0.0;
    let mut power = 1.0;
    for &c in coeffs {
        acc += c * power;
        power *= lambda;
    }
    acc
}

/// One application of the lower Laplacian `L_kl = B_k^T B_k` via sparse shifts.
pub(crate) fn shift_lower(
    sc: &SimplicialComplex,
    k: usize,
    v: &DVector<f64>,
) -> Result<DVector<f64>> {
    let b = sc.incidence(k)?;
    let mut tmp = vec![0.0; b.nrows()];
    let mut out = vec![0.0; b.ncols()];
    b.mul_vec(v.as_slice(), &mut tmp);
    b.tr_mul_vec(&tmp, &mut out);
    Ok(DVector::from_vec(out))
}

/// One application of the upper Laplacian `L_ku = B_{k+1} B_{k+1}^T`.
pub(crate) fn shift_upper(
    sc: &SimplicialComplex,
    k: usize,
    v: &DVector<f64>,
) -> Result<DVector<f64>> {
    let b = sc.incidence(k + 1)?;
    let mut tmp = vec![0.0; b.ncols()];
    let mut out = vec![0.0; b.nrows()];
    b.tr_mul_vec(v.as_slice(), &mut tmp);
    b.mul_vec(&tmp, &mut out);
    Ok(DVector::from_vec(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn triangle() -> SimplicialComplex {
        SimplicialComplex::build(&[vec![1, 2, 3]], 2).unwrap()
    }

    #[test]
    fn degree_zero_filter_is_identity() {
        let sc = triangle();
        let x = SimplicialSignal::from_vec(1, vec![0.5, -1.0, 2.0]);
        let h = FilterCoeffs::new(1, vec![1.0], vec![]);
        let y = h.apply(&sc, &x).unwrap();
        assert_eq!(y.values(), x.values());
        let h0 = FilterCoeffs::identity(&sc, 0).unwrap();
        let x0 = SimplicialSignal::from_vec(0, vec![1.0, 2.0, 3.0]);
        assert_eq!(h0.apply(&sc, &x0).unwrap().values(), x0.values());
    }

    #[test]
    fn first_order_filter_on_triangle_edges_triples() {
        // L_1 = 3I, so alpha=[0,1], beta=[0,1] acts as multiplication by 3.
        let sc = triangle();
        let h = FilterCoeffs::new(1, vec![0.0, 1.0], vec![0.0, 1.0]);
        let x = SimplicialSignal::from_vec(1, vec![1.0, -2.0, 0.25]);
        let y = h.apply(&sc, &x).unwrap();
        for i in 0..3 {
            assert_relative_eq!(y.values()[i], 3.0 * x.values()[i], epsilon = 1e-14);
        }
    }

    #[test]
    fn constant_matrix_is_scaled_identity() {
        let sc = triangle();
        let h = FilterCoeffs::new(1, vec![2.5], vec![]);
        let m = h.matrix(&sc).unwrap();
        assert_eq!(m, DMatrix::from_diagonal_element(3, 3, 2.5));
    }

    #[test]
    fn cross_terms_vanish_in_dense_matrix() {
        // With alpha=[0,1] and beta=[0,1] the matrix is L_1l + L_1u; the mixed
        // product contributes nothing because L_kl L_ku = 0.
        let sc = triangle();
        let lap = sc.hodge_laplacian(1).unwrap();
        let cross = lap.lower() * lap.upper();
        assert!(cross.iter().all(|&v| v == 0.0));
        let h = FilterCoeffs::new(1, vec![0.0, 1.0], vec![0.0, 1.0]);
        assert_eq!(h.matrix(&sc).unwrap(), lap.total());
    }

    #[test]
    fn mixed_order_matrix_matches_hand_computation() {
        let sc = triangle();
        let lap = sc.hodge_laplacian(1).unwrap();
        let h = FilterCoeffs::new(1, vec![1.0, 1.0], vec![0.0, 0.0, 1.0]);
        let expected =
            DMatrix::identity(3, 3) + lap.lower() + lap.upper() * lap.upper();
        assert_eq!(h.matrix(&sc).unwrap(), expected);
        // Spot entry: (I + L_1l)[0,0] = 3, (L_1u^2)[0,0] = 3.
        assert_eq!(h.matrix(&sc).unwrap()[(0, 0)], 6.0);
    }

    #[test]
    fn apply_matches_dense_oracle_on_triangle() {
        let sc = triangle();
        let h = FilterCoeffs::new(1, vec![0.3, -0.7, 0.11], vec![0.9, 0.2]);
        let x = SimplicialSignal::from_vec(1, vec![1.0, 2.0, -3.0]);
        let y = h.apply(&sc, &x).unwrap();
        let dense = h.matrix(&sc).unwrap() * x.values();
        assert_relative_eq!((y.values() - dense).norm(), 0.0, epsilon = 1e-13);
    }

    #[test]
    fn response_matches_hand_values() {
        let h = FilterCoeffs::new(1, vec![1.0], vec![1.0]);
        assert_eq!(h.response(0.0, FreqType::Harmonic), 2.0);
        let h = FilterCoeffs::new(1, vec![0.0, 1.0], vec![0.0]);
        assert_eq!(h.response(3.0, FreqType::Gradient), 3.0);
        let h = FilterCoeffs::new(1, vec![0.0], vec![2.0, 1.0]);
        assert_eq!(h.response(3.0, FreqType::Curl), 5.0);
    }

    #[test]
    fn shape_rules_at_boundary_levels() {
        let sc = triangle();
        let bad0 = FilterCoeffs::new(0, vec![1.0], vec![]);
        assert!(matches!(
            bad0.apply(&sc, &SimplicialSignal::zeros(&sc, 0)),
            Err(ScError::InvalidFilter { level: 0, .. })
        ));
        let bad_top = FilterCoeffs::new(2, vec![], vec![1.0]);
        assert!(matches!(
            bad_top.matrix(&sc),
            Err(ScError::InvalidFilter { level: 2, .. })
        ));
    }

    #[test]
    fn level_mismatch_is_reported() {
        let sc = triangle();
        let h = FilterCoeffs::new(1, vec![1.0], vec![]);
        let x0 = SimplicialSignal::zeros(&sc, 0);
        assert!(matches!(
            h.apply(&sc, &x0),
            Err(ScError::LevelMismatch { .. })
        ));
    }
}
