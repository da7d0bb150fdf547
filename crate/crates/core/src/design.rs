//! Least-squares filter design: fitting target frequency responses, fitting
//! input-output data with a filter bank, and rational-filter ground truth.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::bank::{FilterBank, LevelBranches};
use crate::complex::SimplicialComplex;
use crate::error::{Result, ScError};
use crate::filter::{shift_lower, shift_upper, FilterCoeffs};
use crate::signal::{ComplexSignal, SimplicialSignal};
use crate::spectral::{FreqType, SpectralBasis};

/// Default ridge weight; stabilizes the monomial (Vandermonde) conditioning
/// at high orders without visibly biasing the fit.
pub const DEFAULT_RIDGE: f64 = 1e-8;

/// Normalized squared error `norm(estimate - reference)^2 / norm(reference)^2`.
pub fn nmse(estimate: &DVector<f64>, reference: &DVector<f64>) -> Result<f64> {
    if estimate.len() != reference.len() {
        return Err(ScError::DimensionMismatch {
            what: "nmse operands".into(),
            expected: reference.len(),
            got: estimate.len(),
        });
    }
    let denom = reference.norm_squared();
    if denom == 0.0 {
        return Err(ScError::ZeroReference);
    }
    Ok((estimate - reference).norm_squared() / denom)
}

/// One desired response value at a typed frequency.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ResponseSample {
    pub lambda: f64,
    pub freq_type: FreqType,
    pub target: f64,
}

/// A response-fitting problem at one level.
#[derive(Clone, Debug)]
pub struct ResponseTarget {
    pub level: usize,
    pub samples: Vec<ResponseSample>,
    /// Ridge weight `mu >= 0`.
    pub mu: f64,
}

/// Outcome of a least-squares response or data fit.
#[derive(Clone, Debug)]
pub struct ResponseFit {
    pub coeffs: FilterCoeffs,
    /// Largest absolute deviation from the target over the samples.
    pub max_abs_error: f64,
    /// Total squared deviation over the samples.
    pub sum_sq_error: f64,
    /// Numerical rank of the (unaugmented) design matrix.
    pub rank: usize,
    /// Number of free coefficients.
    pub unknowns: usize,
}

impl ResponseFit {
    /// True when the plain least-squares system was rank deficient and the
    /// minimum-norm member of the solution family was returned.
    pub fn rank_deficient(&self) -> bool {
        self.rank < self.unknowns
    }
}

fn poly_lengths(sc: &SimplicialComplex, level: usize, l1: usize, l2: usize) -> (usize, usize) {
    let alpha_len = if level == 0 { 0 } else { l1 + 1 };
    let beta_len = if level == sc.order() && level > 0 {
        0
    } else {
        l2 + 1
    };
    (alpha_len, beta_len)
}

/// Fills one design-matrix row with the response of each coefficient at a
/// typed frequency, following the three-regime frequency response.
fn response_row(
    row: &mut [f64],
    alpha_len: usize,
    beta_len: usize,
    lambda: f64,
    ty: FreqType,
) {
    row.fill(0.0);
    match ty {
        FreqType::Harmonic => {
            if alpha_len > 0 {
                row[0] = 1.0;
            }
            if beta_len > 0 {
                row[alpha_len] = 1.0;
            }
        }
        FreqType::Gradient => {
            let mut power = 1.0;
            for cell in row.iter_mut().take(alpha_len) {
                *cell = power;
                power *= lambda;
            }
            if beta_len > 0 {
                row[alpha_len] = 1.0;
            }
        }
        FreqType::Curl => {
            if alpha_len > 0 {
                row[0] = 1.0;
            }
            let mut power = 1.0;
            for cell in row.iter_mut().skip(alpha_len).take(beta_len) {
                *cell = power;
                power *= lambda;
            }
        }
    }
}

/// Minimum-norm (optionally ridge-regularized) least squares via SVD.
/// Returns the solution and the numerical rank of the unaugmented matrix.
fn solve_least_squares(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    mu: f64,
) -> Result<(DVector<f64>, usize)> {
    let (rows, cols) = a.shape();
    let base_svd = a.clone().svd(false, false);
    let sigma_max = base_svd.singular_values.max();
    let eps = sigma_max * f64::EPSILON * rows.max(cols) as f64;
    let rank = base_svd.rank(eps.max(f64::MIN_POSITIVE));
    let solution = if mu > 0.0 {
        let mut aug = DMatrix::zeros(rows + cols, cols);
        aug.view_mut((0, 0), (rows, cols)).copy_from(a);
        let sqrt_mu = mu.sqrt();
        for j in 0..cols {
            aug[(rows + j, j)] = sqrt_mu;
        }
        let mut b_aug = DVector::zeros(rows + cols);
        b_aug.rows_mut(0, rows).copy_from(b);
        let svd = aug.svd(true, true);
        svd.solve(&b_aug, 0.0)
            .map_err(|e| ScError::Numerical(format!("least-squares solve failed: {e}")))?
    } else {
        let svd = a.clone().svd(true, true);
        svd.solve(b, eps.max(f64::MIN_POSITIVE))
            .map_err(|e| ScError::Numerical(format!("least-squares solve failed: {e}")))?
    };
    Ok((solution, rank))
}

/// Fits filter coefficients to a sampled target response by linear least
/// squares over the monomial basis.
///
/// With `mu = 0` a rank-deficient system is solved in the minimum-norm sense
/// and flagged on the returned fit. `l1` is ignored at level 0 and `l2` at the
/// top level, where the corresponding polynomial does not exist.
pub fn fit_response(
    sc: &SimplicialComplex,
    target: &ResponseTarget,
    l1: usize,
    l2: usize,
) -> Result<ResponseFit> {
    if target.samples.is_empty() {
        return Err(ScError::EmptyTarget);
    }
    if target.level > sc.order() {
        return Err(ScError::LevelOutOfRange {
            op: "fit_response",
            k: target.level,
            order: sc.order(),
        });
    }
    if target.samples.iter().any(|s| s.lambda < 0.0) {
        return Err(ScError::Numerical(
            "response target contains a negative frequency".into(),
        ));
    }
    let (alpha_len, beta_len) = poly_lengths(sc, target.level, l1, l2);
    let unknowns = alpha_len + beta_len;
    let mut a = DMatrix::zeros(target.samples.len(), unknowns);
    let mut b = DVector::zeros(target.samples.len());
    let mut row = vec![0.0; unknowns];
    for (j, s) in target.samples.iter().enumerate() {
        response_row(&mut row, alpha_len, beta_len, s.lambda, s.freq_type);
        for (c, &v) in row.iter().enumerate() {
            a[(j, c)] = v;
        }
        b[j] = s.target;
    }
    let (solution, rank) = solve_least_squares(&a, &b, target.mu)?;
    let coeffs = FilterCoeffs::new(
        target.level,
        solution.as_slice()[..alpha_len].to_vec(),
        solution.as_slice()[alpha_len..].to_vec(),
    );
    let mut max_abs_error = 0.0f64;
    let mut sum_sq_error = 0.0;
    for s in &target.samples {
        let err = coeffs.response(s.lambda, s.freq_type) - s.target;
        max_abs_error = max_abs_error.max(err.abs());
        sum_sq_error += err * err;
    }
    Ok(ResponseFit {
        coeffs,
        max_abs_error,
        sum_sq_error,
        rank,
        unknowns,
    })
}

/// Fits a polynomial filter to the heat kernel `exp(-gamma lambda^2)` sampled
/// at every typed frequency of the level-`k` spectrum.
pub fn fit_heat_kernel(
    sc: &SimplicialComplex,
    k: usize,
    gamma: f64,
    order: usize,
) -> Result<ResponseFit> {
    let basis = SpectralBasis::build(sc, k, None)?;
    fit_heat_kernel_with_basis(sc, &basis, gamma, order, DEFAULT_RIDGE)
}

/// `fit_heat_kernel` against an already-computed basis, with explicit ridge.
pub fn fit_heat_kernel_with_basis(
    sc: &SimplicialComplex,
    basis: &SpectralBasis,
    gamma: f64,
    order: usize,
    mu: f64,
) -> Result<ResponseFit> {
    if gamma <= 0.0 {
        return Err(ScError::Numerical(format!(
            "heat diffusion rate must be positive, got {gamma}"
        )));
    }
    let samples = basis
        .eigenvalues()
        .iter()
        .zip(basis.types())
        .map(|(&lambda, &ty)| ResponseSample {
            lambda,
            freq_type: ty,
            target: (-gamma * lambda * lambda).exp(),
        })
        .collect();
    let target = ResponseTarget {
        level: basis.level(),
        samples,
        mu,
    };
    fit_response(sc, &target, order, order)
}

/// Applies the rational filter `Hm^{-1}(L_k) Hn(L_k)` by a dense linear solve.
///
/// Errors out when the denominator's frequency response comes too close to
/// zero anywhere on the level's spectrum.
pub fn rational_apply(
    sc: &SimplicialComplex,
    hm: &FilterCoeffs,
    hn: &FilterCoeffs,
    x: &SimplicialSignal,
) -> Result<SimplicialSignal> {
    if hm.level != hn.level || hm.level != x.level() {
        return Err(ScError::LevelMismatch {
            what: "rational filter operands",
            expected: hm.level,
            got: if hn.level != hm.level {
                hn.level
            } else {
                x.level()
            },
        });
    }
    let basis = SpectralBasis::build(sc, hm.level, None)?;
    check_invertible(hm, &basis)?;
    let rhs = hn.apply(sc, x)?;
    let denom = hm.matrix(sc)?;
    let solved = denom
        .lu()
        .solve(rhs.values())
        .ok_or(ScError::SingularFilter { min_response: 0.0 })?;
    Ok(SimplicialSignal::from_vector(x.level(), solved))
}

/// A rational filter with its denominator factorized once, for repeated
/// application to many signals at the same level.
#[derive(Clone, Debug)]
pub struct PreparedRational {
    level: usize,
    numerator: DMatrix<f64>,
    denominator_lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
}

impl PreparedRational {
    /// Checks invertibility against the basis and factorizes the denominator.
    pub fn new(
        sc: &SimplicialComplex,
        basis: &SpectralBasis,
        hm: &FilterCoeffs,
        hn: &FilterCoeffs,
    ) -> Result<Self> {
        if hm.level != hn.level || basis.level() != hm.level {
            return Err(ScError::LevelMismatch {
                what: "rational filter operands",
                expected: hm.level,
                got: if hn.level != hm.level {
                    hn.level
                } else {
                    basis.level()
                },
            });
        }
        check_invertible(hm, basis)?;
        Ok(Self {
            level: hm.level,
            numerator: hn.matrix(sc)?,
            denominator_lu: hm.matrix(sc)?.lu(),
        })
    }

    pub fn apply(&self, x: &SimplicialSignal) -> Result<SimplicialSignal> {
        if x.level() != self.level {
            return Err(ScError::LevelMismatch {
                what: "rational filter input",
                expected: self.level,
                got: x.level(),
            });
        }
        let rhs = &self.numerator * x.values();
        let solved = self
            .denominator_lu
            .solve(&rhs)
            .ok_or(ScError::SingularFilter { min_response: 0.0 })?;
        Ok(SimplicialSignal::from_vector(self.level, solved))
    }
}

/// Verifies a filter's response stays away from zero on the whole spectrum.
pub fn check_invertible(h: &FilterCoeffs, basis: &SpectralBasis) -> Result<()> {
    let mut min_abs = f64::INFINITY;
    let mut max_abs = 0.0f64;
    for (&lambda, &ty) in basis.eigenvalues().iter().zip(basis.types()) {
        let r = h.response(lambda, ty).abs();
        min_abs = min_abs.min(r);
        max_abs = max_abs.max(r);
    }
    if min_abs <= 1e-10 * max_abs.max(1.0) {
        return Err(ScError::SingularFilter {
            min_response: min_abs,
        });
    }
    Ok(())
}

/// One input/output pair of whole-complex signals.
#[derive(Clone, Debug)]
pub struct TrainingSample {
    pub input: ComplexSignal,
    pub output: ComplexSignal,
}

/// A set of training pairs with consistent dimensions.
#[derive(Clone, Debug, Default)]
pub struct TrainingSet {
    pub samples: Vec<TrainingSample>,
}

impl TrainingSet {
    pub fn validate(&self, sc: &SimplicialComplex) -> Result<()> {
        if self.samples.is_empty() {
            return Err(ScError::EmptyTarget);
        }
        for s in &self.samples {
            for (k, (x, y)) in s.input.levels().iter().zip(s.output.levels()).enumerate() {
                if x.len() != sc.len(k) || y.len() != sc.len(k) {
                    return Err(ScError::DimensionMismatch {
                        what: format!("training sample at level {k}"),
                        expected: sc.len(k),
                        got: x.len().max(y.len()),
                    });
                }
            }
            if s.input.order() != sc.order() || s.output.order() != sc.order() {
                return Err(ScError::DimensionMismatch {
                    what: "training sample levels".into(),
                    expected: sc.order() + 1,
                    got: s.input.order().min(s.output.order()) + 1,
                });
            }
        }
        Ok(())
    }
}

/// Polynomial order per branch, per level. The same order is used for a
/// branch's lower and upper polynomial where both exist.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BankOrders {
    pub levels: Vec<BranchOrders>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchOrders {
    pub below: usize,
    pub same: usize,
    pub above: usize,
}

impl BankOrders {
    pub fn uniform(complex_order: usize, order: usize) -> Self {
        Self {
            levels: vec![
                BranchOrders {
                    below: order,
                    same: order,
                    above: order,
                };
                complex_order + 1
            ],
        }
    }

    fn validate(&self, sc: &SimplicialComplex) -> Result<()> {
        if self.levels.len() != sc.order() + 1 {
            return Err(ScError::DimensionMismatch {
                what: "bank orders".into(),
                expected: sc.order() + 1,
                got: self.levels.len(),
            });
        }
        Ok(())
    }
}

/// A fitted bank with its per-level training error.
#[derive(Clone, Debug)]
pub struct BankFit {
    pub bank: FilterBank,
    /// Aggregate NMSE per level over the whole training set.
    pub train_nmse: Vec<f64>,
    /// Indices of regressor columns that were identically zero, per level.
    pub zero_columns: Vec<Vec<usize>>,
}

/// Stacks the shifted branch inputs of every training sample and solves one
/// ridge least-squares problem per level for that level's branch coefficients.
///
/// Regressor columns are the Laplacian powers of the lifted below-signal, the
/// level's own signal, and the lifted above-signal; columns that are
/// identically zero (the upper powers of a from-below lift and vice versa)
/// are reported, not dropped, and the minimum-norm solution resolves them.
pub fn fit_bank(
    sc: &SimplicialComplex,
    data: &TrainingSet,
    orders: &BankOrders,
    mu: f64,
) -> Result<BankFit> {
    data.validate(sc)?;
    orders.validate(sc)?;
    let order = sc.order();
    let mut levels = Vec::with_capacity(order + 1);
    let mut train_nmse = Vec::with_capacity(order + 1);
    let mut zero_columns = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let spec = &orders.levels[k];
        // Branch layout: (branch kind, polynomial order, per-sample inputs).
        let mut branches: Vec<(Branch, usize, Vec<DVector<f64>>)> = Vec::new();
        if k > 0 {
            let lifted = data
                .samples
                .iter()
                .map(|s| Ok(sc.lift_up(&s.input.signal(k - 1))?.into_values()))
                .collect::<Result<Vec<_>>>()?;
            branches.push((Branch::Below, spec.below, lifted));
        }
        branches.push((
            Branch::Same,
            spec.same,
            data.samples
                .iter()
                .map(|s| s.input.level(k).clone())
                .collect(),
        ));
        if k < order {
            let lifted = data
                .samples
                .iter()
                .map(|s| Ok(sc.lift_down(&s.input.signal(k + 1))?.into_values()))
                .collect::<Result<Vec<_>>>()?;
            branches.push((Branch::Above, spec.above, lifted));
        }

        let n_k = sc.len(k);
        let rows = n_k * data.samples.len();
        let layout: Vec<(Branch, usize, usize)> = branches
            .iter()
            .map(|(br, o, _)| {
                let (alpha_len, beta_len) = poly_lengths(sc, k, *o, *o);
                (*br, alpha_len, beta_len)
            })
            .collect();
        let cols: usize = layout.iter().map(|(_, a, b)| a + b).sum();
        let mut a = DMatrix::zeros(rows, cols);
        let mut col_idx = 0;
        for ((_, alpha_len, beta_len), (_, _, inputs)) in layout.iter().zip(&branches) {
            for l in 0..*alpha_len {
                for (s, u) in inputs.iter().enumerate() {
                    let shifted = power_shift(sc, k, u, l, Shift::Lower)?;
                    a.view_mut((s * n_k, col_idx), (n_k, 1)).copy_from(&shifted);
                }
                col_idx += 1;
            }
            for l in 0..*beta_len {
                for (s, u) in inputs.iter().enumerate() {
                    let shifted = power_shift(sc, k, u, l, Shift::Upper)?;
                    a.view_mut((s * n_k, col_idx), (n_k, 1)).copy_from(&shifted);
                }
                col_idx += 1;
            }
        }
        let mut b = DVector::zeros(rows);
        for (s, sample) in data.samples.iter().enumerate() {
            b.rows_mut(s * n_k, n_k).copy_from(sample.output.level(k));
        }
        let zeros: Vec<usize> = (0..cols)
            .filter(|&c| a.column(c).amax() == 0.0)
            .collect();
        let (solution, _) = solve_least_squares(&a, &b, mu)?;
        let denom = b.norm_squared();
        if denom == 0.0 {
            return Err(ScError::ZeroReference);
        }
        train_nmse.push((&a * &solution - &b).norm_squared() / denom);
        zero_columns.push(zeros);

        let mut offset = 0;
        let mut from_below = None;
        let mut same = None;
        let mut from_above = None;
        for (br, alpha_len, beta_len) in &layout {
            let alpha = solution.as_slice()[offset..offset + alpha_len].to_vec();
            let beta =
                solution.as_slice()[offset + alpha_len..offset + alpha_len + beta_len].to_vec();
            offset += alpha_len + beta_len;
            let coeffs = FilterCoeffs::new(k, alpha, beta);
            match br {
                Branch::Below => from_below = Some(coeffs),
                Branch::Same => same = Some(coeffs),
                Branch::Above => from_above = Some(coeffs),
            }
        }
        levels.push(LevelBranches {
            from_below,
            same: same.expect("same-level branch always present"),
            from_above,
        });
    }
    Ok(BankFit {
        bank: FilterBank::new(levels)?,
        train_nmse,
        zero_columns,
    })
}

/// Fits a single same-level filter to `(x^k, y^k)` pairs: the baseline that
/// ignores cross-level influence.
pub fn fit_filter(
    sc: &SimplicialComplex,
    data: &TrainingSet,
    k: usize,
    order: usize,
    mu: f64,
) -> Result<(FilterCoeffs, f64)> {
    data.validate(sc)?;
    let (alpha_len, beta_len) = poly_lengths(sc, k, order, order);
    let n_k = sc.len(k);
    let rows = n_k * data.samples.len();
    let cols = alpha_len + beta_len;
    let mut a = DMatrix::zeros(rows, cols);
    for (block, shift, len) in [
        (0, Shift::Lower, alpha_len),
        (alpha_len, Shift::Upper, beta_len),
    ] {
        for l in 0..len {
            for (s, sample) in data.samples.iter().enumerate() {
                let shifted = power_shift(sc, k, sample.input.level(k), l, shift)?;
                a.view_mut((s * n_k, block + l), (n_k, 1)).copy_from(&shifted);
            }
        }
    }
    let mut b = DVector::zeros(rows);
    for (s, sample) in data.samples.iter().enumerate() {
        b.rows_mut(s * n_k, n_k).copy_from(sample.output.level(k));
    }
    let denom = b.norm_squared();
    if denom == 0.0 {
        return Err(ScError::ZeroReference);
    }
    let (solution, _) = solve_least_squares(&a, &b, mu)?;
    let coeffs = FilterCoeffs::new(
        k,
        solution.as_slice()[..alpha_len].to_vec(),
        solution.as_slice()[alpha_len..].to_vec(),
    );
    let err = (&a * &solution - &b).norm_squared() / denom;
    Ok((coeffs, err))
}

/// Aggregate per-level NMSE of a bank against a data set.
pub fn bank_nmse(
    sc: &SimplicialComplex,
    bank: &FilterBank,
    data: &TrainingSet,
) -> Result<Vec<f64>> {
    data.validate(sc)?;
    let order = sc.order();
    let mut num = vec![0.0; order + 1];
    let mut den = vec![0.0; order + 1];
    for sample in &data.samples {
        let predicted = bank.apply(sc, &sample.input)?;
        for k in 0..=order {
            num[k] += (predicted.level(k) - sample.output.level(k)).norm_squared();
            den[k] += sample.output.level(k).norm_squared();
        }
    }
    num.iter()
        .zip(&den)
        .map(|(&n, &d)| {
            if d == 0.0 {
                Err(ScError::ZeroReference)
            } else {
                Ok(n / d)
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Branch {
    Below,
    Same,
    Above,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shift {
    Lower,
    Upper,
}

/// `L^l u` by iterated sparse shifts (`l = 0` returns `u`).
fn power_shift(
    sc: &SimplicialComplex,
    k: usize,
    u: &DVector<f64>,
    l: usize,
    shift: Shift,
) -> Result<DVector<f64>> {
    let mut v = u.clone();
    for _ in 0..l {
        v = match shift {
            Shift::Lower => shift_lower(sc, k, &v)?,
            Shift::Upper => shift_upper(sc, k, &v)?,
        };
    }
    Ok(v)
}
