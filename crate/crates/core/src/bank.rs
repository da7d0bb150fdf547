//! The cross-level filter bank: at every level it filters the level's own
//! signal together with the signals lifted from the levels below and above.

use nalgebra::DVector;

use crate::complex::SimplicialComplex;
use crate::error::{Result, ScError};
use crate::filter::FilterCoeffs;
use crate::signal::{ComplexSignal, SimplicialSignal};
use crate::spectral::{FreqType, SpectralBasis};

/// The three branch filters of one level.
///
/// `from_below` acts on the lifted `(k-1)`-signal (absent at level 0), `same`
/// on the level's own signal, `from_above` on the lifted `(k+1)`-signal
/// (absent at the top level). All three are filters at level `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelBranches {
    pub from_below: Option<FilterCoeffs>,
    pub same: FilterCoeffs,
    pub from_above: Option<FilterCoeffs>,
}

impl LevelBranches {
    /// Constant term of the from-below branch's upper polynomial; the only
    /// upper term that survives on a lifted-from-below input.
    pub fn beta00(&self) -> Option<f64> {
        self.from_below.as_ref().map(FilterCoeffs::beta0)
    }

    /// Constant term of the from-above branch's lower polynomial; the only
    /// lower term that survives on a lifted-from-above input.
    pub fn alpha20(&self) -> Option<f64> {
        self.from_above.as_ref().map(FilterCoeffs::alpha0)
    }
}

/// One `LevelBranches` per level `0..=K`.
#[derive(Clone, Debug, PartialEq)]
pub struct FilterBank {
    levels: Vec<LevelBranches>,
}

impl FilterBank {
    /// Assembles a bank, checking branch presence against the order `K` and
    /// every filter's level tag.
    pub fn new(levels: Vec<LevelBranches>) -> Result<Self> {
        if levels.is_empty() {
            return Err(ScError::EmptyInput);
        }
        let order = levels.len() - 1;
        for (k, branches) in levels.iter().enumerate() {
            let expect_below = k > 0;
            let expect_above = k < order;
            if branches.from_below.is_some() != expect_below {
                return Err(ScError::InvalidFilter {
                    level: k,
                    reason: if expect_below {
                        "missing from-below branch".into()
                    } else {
                        "level 0 admits no from-below branch".into()
                    },
                });
            }
            if branches.from_above.is_some() != expect_above {
                return Err(ScError::InvalidFilter {
                    level: k,
                    reason: if expect_above {
                        "missing from-above branch".into()
                    } else {
                        "the top level admits no from-above branch".into()
                    },
                });
            }
            for filter in branches.from_below.iter().chain(
                std::iter::once(&branches.same).chain(branches.from_above.iter()),
            ) {
                if filter.level != k {
                    return Err(ScError::LevelMismatch {
                        what: "bank branch filter",
                        expected: k,
                        got: filter.level,
                    });
                }
            }
        }
        Ok(Self { levels })
    }

    /// The bank whose every branch is the identity filter, exposing the bare
    /// lifting skeleton.
    pub fn identity(sc: &SimplicialComplex) -> Result<Self> {
        let order = sc.order();
        let levels = (0..=order)
            .map(|k| {
                Ok(LevelBranches {
                    from_below: (k > 0).then(|| FilterCoeffs::identity(sc, k)).transpose()?,
                    same: FilterCoeffs::identity(sc, k)?,
                    from_above: (k < order)
                        .then(|| FilterCoeffs::identity(sc, k))
                        .transpose()?,
                })
            })
            .collect::<Result<_>>()?;
        Self::new(levels)
    }

    pub fn order(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, k: usize) -> &LevelBranches {
        &self.levels[k]
    }

    pub fn levels(&self) -> &[LevelBranches] {
        &self.levels
    }

    fn validate(&self, sc: &SimplicialComplex) -> Result<()> {
        if self.order() != sc.order() {
            return Err(ScError::DimensionMismatch {
                what: "bank order".into(),
                expected: sc.order(),
                got: self.order(),
            });
        }
        Ok(())
    }

    /// Applies the bank: `y^k` sums the filtered lift of `x^{k-1}`, the
    /// filtered `x^k`, and the filtered lift of `x^{k+1}`.
    pub fn apply(&self, sc: &SimplicialComplex, xs: &ComplexSignal) -> Result<ComplexSignal> {
        self.validate(sc)?;
        if xs.order() != sc.order() {
            return Err(ScError::DimensionMismatch {
                what: "bank input levels".into(),
                expected: sc.order() + 1,
                got: xs.order() + 1,
            });
        }
        let mut out = Vec::with_capacity(self.levels.len());
        for (k, branches) in self.levels.iter().enumerate() {
            let mut y = DVector::zeros(sc.len(k));
            if let Some(h0) = &branches.from_below {
                let lifted = sc.lift_up(&xs.signal(k - 1))?;
                y += h0.apply(sc, &lifted)?.values();
            }
            y += branches.same.apply(sc, &xs.signal(k))?.values();
            if let Some(h2) = &branches.from_above {
                let lifted = sc.lift_down(&xs.signal(k + 1))?;
                y += h2.apply(sc, &lifted)?.values();
            }
            out.push(y);
        }
        ComplexSignal::new(sc, out)
    }

    /// Per-frequency output coefficients of `y^k`, computed entirely in the
    /// spectral domain.
    ///
    /// Harmonic frequencies see only the same-level branch; gradient ones add
    /// the from-below branch acting on the lifted signal's coefficients; curl
    /// ones add the from-above branch. This is the spectral oracle against
    /// which `apply` + SFT is checked.
    pub fn branch_spectral_output(
        &self,
        sc: &SimplicialComplex,
        basis: &SpectralBasis,
        xs: &ComplexSignal,
        k: usize,
    ) -> Result<DVector<f64>> {
        self.validate(sc)?;
        if basis.level() != k {
            return Err(ScError::LevelMismatch {
                what: "spectral basis",
                expected: k,
                got: basis.level(),
            });
        }
        let branches = &self.levels[k];
        let x_hat = basis.sft(&xs.signal(k))?;
        let grad_hat = match &branches.from_below {
            Some(_) => Some(basis.sft(&sc.lift_up(&xs.signal(k - 1))?)?),
            None => None,
        };
        let curl_hat = match &branches.from_above {
            Some(_) => Some(basis.sft(&sc.lift_down(&xs.signal(k + 1))?)?),
            None => None,
        };
        let mut y_hat = DVector::zeros(basis.dim());
        for i in 0..basis.dim() {
            let lambda = basis.eigenvalues()[i];
            let ty = basis.types()[i];
            let mut acc = branches.same.response(lambda, ty) * x_hat[i];
            if ty == FreqType::Gradient {
                if let (Some(h0), Some(g)) = (&branches.from_below, &grad_hat) {
                    acc += h0.response(lambda, ty) * g[i];
                }
            }
            if ty == FreqType::Curl {
                if let (Some(h2), Some(c)) = (&branches.from_above, &curl_hat) {
                    acc += h2.response(lambda, ty) * c[i];
                }
            }
            y_hat[i] = acc;
        }
        Ok(y_hat)
    }

    /// The two cross-level branches of an intermediate level in reduced form.
    ///
    /// A lifted-from-below input never meets the upper Laplacian (and vice
    /// versa), so the from-below branch collapses to its lower polynomial
    /// plus `beta00` times the identity, and the from-above branch to its
    /// upper polynomial plus `alpha20` times the identity. Both results equal
    /// the corresponding full-filter branches.
    pub fn reduced_branch_apply(
        &self,
        sc: &SimplicialComplex,
        k: usize,
        x_below: &SimplicialSignal,
        x_above: &SimplicialSignal,
    ) -> Result<(SimplicialSignal, SimplicialSignal)> {
        self.validate(sc)?;
        if k == 0 || k >= sc.order() {
            return Err(ScError::LevelOutOfRange {
                op: "reduced_branch_apply",
                k,
                order: sc.order(),
            });
        }
        let branches = &self.levels[k];
        let h0 = branches.from_below.as_ref().expect("intermediate level");
        let h2 = branches.from_above.as_ref().expect("intermediate level");
        let lifted_below = sc.lift_up(x_below)?;
        let reduced_low = FilterCoeffs::new(k, h0.alpha.clone(), vec![h0.beta0()]);
        let y_low = reduced_low.apply(sc, &lifted_below)?;
        let lifted_above = sc.lift_down(x_above)?;
        let reduced_up = FilterCoeffs::new(k, vec![h2.alpha0()], h2.beta.clone());
        let y_up = reduced_up.apply(sc, &lifted_above)?;
        Ok((y_low, y_up))
    }
}
