//! Signed incidence matrices: the discrete boundary operators of a complex.

use nalgebra::DMatrix;

use crate::error::{Result, ScError};

/// The boundary operator `B_k` mapping level-`k` simplices to their `(k-1)`-faces.
///
/// Entries are exactly 0 or ±1 and are kept in integer form: each column holds
/// the `k + 1` rows of the faces of one `k`-simplex together with its alternating
/// sign. The column layout doubles as the sparse representation used by the
/// filter shift recursion, so matrix-vector products never materialize a dense
/// matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct IncidenceMatrix {
    k: usize,
    nrows: usize,
    /// `cols[c]` lists `(row, sign)` pairs, exactly `k + 1` per column.
    cols: Vec<Vec<(usize, i8)>>,
}

impl IncidenceMatrix {
    /// Assembles a boundary operator from per-column `(row, sign)` entries.
    ///
    /// Validates the structural shape (k+1 entries per column, signs in {-1, +1},
    /// rows in range) but not the boundary condition itself; `verify_boundary`
    /// checks that separately so tests can build deliberately corrupted fixtures.
    pub fn from_cols(k: usize, nrows: usize, cols: Vec<Vec<(usize, i8)>>) -> Result<Self> {
        if k == 0 {
            return Err(ScError::LevelOutOfRange {
                op: "incidence",
                k,
                order: 0,
            });
        }
        for (c, col) in cols.iter().enumerate() {
            if col.len() != k + 1 {
                return Err(ScError::DimensionMismatch {
                    what: format!("incidence column {c}"),
                    expected: k + 1,
                    got: col.len(),
                });
            }
            for &(r, s) in col {
                if r >= nrows || (s != 1 && s != -1) {
                    return Err(ScError::Numerical(format!(
                        "invalid incidence entry ({r}, {s}) in column {c}"
                    )));
                }
            }
        }
        Ok(Self { k, nrows, cols })
    }

    /// Level index `k` (columns index `k`-simplices, rows `(k-1)`-simplices).
    pub fn level(&self) -> usize {
        self.k
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    /// The `(row, sign)` entries of column `c`.
    pub fn column(&self, c: usize) -> &[(usize, i8)] {
        &self.cols[c]
    }

    /// `y = B_k x`, mapping a `k`-signal down to its `(k-1)`-level net flow.
    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.ncols());
        debug_assert_eq!(y.len(), self.nrows);
        y.fill(0.0);
        for (c, col) in self.cols.iter().enumerate() {
            let xc = x[c];
            for &(r, s) in col {
                y[r] += f64::from(s) * xc;
            }
        }
    }

    /// `y = B_k^T x`, lifting a `(k-1)`-signal into the `k`-level.
    pub fn tr_mul_vec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.nrows);
        debug_assert_eq!(y.len(), self.ncols());
        for (c, col) in self.cols.iter().enumerate() {
            let mut acc = 0.0;
            for &(r, s) in col {
                acc += f64::from(s) * x[r];
            }
            y[c] = acc;
        }
    }

    /// Dense floating-point copy of the operator.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.nrows, self.ncols());
        for (c, col) in self.cols.iter().enumerate() {
            for &(r, s) in col {
                m[(r, c)] = f64::from(s);
            }
        }
        m
    }

    /// Dense integer copy, for exact arithmetic.
    pub fn to_dense_int(&self) -> DMatrix<i64> {
        let mut m = DMatrix::zeros(self.nrows, self.ncols());
        for (c, col) in self.cols.iter().enumerate() {
            for &(r, s) in col {
                m[(r, c)] = i64::from(s);
            }
        }
        m
    }
}

/// Checks `B_k · B_{k+1} = 0` in exact integer arithmetic.
///
/// This is the boundary condition every pair of adjacent incidence matrices of
/// a valid complex satisfies; a single corrupted sign breaks it.
pub fn boundary_condition_holds(lower: &IncidenceMatrix, upper: &IncidenceMatrix) -> bool {
    debug_assert_eq!(lower.ncols(), upper.nrows());
    let mut acc = vec![0i64; lower.nrows()];
    for t in 0..upper.ncols() {
        acc.fill(0);
        for &(e, s_up) in upper.column(t) {
            for &(v, s_low) in lower.column(e) {
                acc[v] += i64::from(s_low) * i64::from(s_up);
            }
        }
        if acc.iter().any(|&v| v != 0) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle_b1() -> IncidenceMatrix {
        // vertices (1),(2),(3); edges (1,2),(1,3),(2,3)
        IncidenceMatrix::from_cols(
            1,
            3,
            vec![
                vec![(1, 1), (0, -1)],
                vec![(2, 1), (0, -1)],
                vec![(2, 1), (1, -1)],
            ],
        )
        .unwrap()
    }

    fn triangle_b2() -> IncidenceMatrix {
        IncidenceMatrix::from_cols(2, 3, vec![vec![(2, 1), (1, -1), (0, 1)]]).unwrap()
    }

    #[test]
    fn dense_matches_hand_computed_triangle() {
        let b1 = triangle_b1().to_dense_int();
        let expected = DMatrix::from_row_slice(3, 3, &[-1, -1, 0, 1, 0, -1, 0, 1, 1]);
        assert_eq!(b1, expected);
        let b2 = triangle_b2().to_dense_int();
        assert_eq!(b2, DMatrix::from_row_slice(3, 1, &[1, -1, 1]));
    }

    #[test]
    fn boundary_condition_on_triangle() {
        assert!(boundary_condition_holds(&triangle_b1(), &triangle_b2()));
    }

    #[test]
    fn corrupted_sign_breaks_boundary_condition() {
        let bad_b2 = IncidenceMatrix::from_cols(2, 3, vec![vec![(2, 1), (1, 1), (0, 1)]]).unwrap();
        assert!(!boundary_condition_holds(&triangle_b1(), &bad_b2));
    }

    #[test]
    fn column_shape_is_validated() {
        assert!(IncidenceMatrix::from_cols(2, 3, vec![vec![(0, 1), (1, -1)]]).is_err());
        assert!(IncidenceMatrix::from_cols(1, 2, vec![vec![(0, 2), (1, -1)]]).is_err());
    }

    #[test]
    fn sparse_products_match_dense() {
        let b1 = triangle_b1();
        let x = [1.0, -2.0, 0.5];
        let mut down = [0.0; 3];
        b1.mul_vec(&x, &mut down);
        let dense = b1.to_dense();
        let expect = &dense * nalgebra::DVector::from_column_slice(&x);
        for i in 0..3 {
            assert!((down[i] - expect[i]).abs() < 1e-15);
        }
        let y = [0.3, 0.0, -1.0];
        let mut up = [0.0; 3];
        b1.tr_mul_vec(&y, &mut up);
        let expect_up = dense.transpose() * nalgebra::DVector::from_column_slice(&y);
        for i in 0..3 {
            assert!((up[i] - expect_up[i]).abs() < 1e-15);
        }
    }
}
