//! Signals attached to one simplicial level, and whole-complex signal tuples.

use nalgebra::DVector;

use crate::complex::SimplicialComplex;
use crate::error::{Result, ScError};

/// A real vector indexed by the level-`k` simplices of a complex.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplicialSignal {
    level: usize,
    values: DVector<f64>,
}

impl SimplicialSignal {
    /// Binds `values` to level `k` of `sc`, checking the length.
    pub fn new(sc: &SimplicialComplex, level: usize, values: DVector<f64>) -> Result<Self> {
        if level > sc.order() {
            return Err(ScError::LevelOutOfRange {
                op: "signal",
                k: level,
                order: sc.order(),
            });
        }
        if values.len() != sc.len(level) {
            return Err(ScError::DimensionMismatch {
                what: format!("signal at level {level}"),
                expected: sc.len(level),
                got: values.len(),
            });
        }
        Ok(Self { level, values })
    }

    /// Unchecked variant for internal construction from already-sized data.
    pub fn from_vec(level: usize, values: Vec<f64>) -> Self {
        Self {
            level,
            values: DVector::from_vec(values),
        }
    }

    pub fn from_vector(level: usize, values: DVector<f64>) -> Self {
        Self { level, values }
    }

    /// The all-zeros signal at level `k`.
    pub fn zeros(sc: &SimplicialComplex, level: usize) -> Self {
        Self {
            level,
            values: DVector::zeros(sc.len(level)),
        }
    }

    /// The indicator of one simplex.
    pub fn indicator(sc: &SimplicialComplex, level: usize, index: usize) -> Result<Self> {
        if index >= sc.len(level) {
            return Err(ScError::DimensionMismatch {
                what: format!("indicator index at level {level}"),
                expected: sc.len(level),
                got: index,
            });
        }
        let mut values = DVector::zeros(sc.len(level));
        values[index] = 1.0;
        Ok(Self { level, values })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn values(&self) -> &DVector<f64> {
        &self.values
    }

    pub fn into_values(self) -> DVector<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// One signal per level, `x^0 .. x^K`: a simplicial complex signal.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexSignal {
    levels: Vec<DVector<f64>>,
}

impl ComplexSignal {
    /// Validates one vector per level against the complex's counts.
    pub fn new(sc: &SimplicialComplex, levels: Vec<DVector<f64>>) -> Result<Self> {
        if levels.len() != sc.order() + 1 {
            return Err(ScError::DimensionMismatch {
                what: "complex signal levels".into(),
                expected: sc.order() + 1,
                got: levels.len(),
            });
        }
        for (k, v) in levels.iter().enumerate() {
            if v.len() != sc.len(k) {
                return Err(ScError::DimensionMismatch {
                    what: format!("complex signal at level {k}"),
                    expected: sc.len(k),
                    got: v.len(),
                });
            }
        }
        Ok(Self { levels })
    }

    pub fn zeros(sc: &SimplicialComplex) -> Self {
        Self {
            levels: (0..=sc.order()).map(|k| DVector::zeros(sc.len(k))).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, k: usize) -> &DVector<f64> {
        &self.levels[k]
    }

    pub fn level_mut(&mut self, k: usize) -> &mut DVector<f64> {
        &mut self.levels[k]
    }

    pub fn signal(&self, k: usize) -> SimplicialSignal {
        SimplicialSignal::from_vector(k, self.levels[k].clone())
    }

    pub fn levels(&self) -> &[DVector<f64>] {
        &self.levels
    }
}

impl SimplicialComplex {
    /// `B_k x`: transfers a `k`-signal to the `(k-1)`-level. For `k = 1` this
    /// is the node divergence (net flow) of an edge signal.
    pub fn lift_down(&self, x: &SimplicialSignal) -> Result<SimplicialSignal> {
        let k = x.level();
        if k == 0 || k > self.order() {
            return Err(ScError::LevelOutOfRange {
                op: "lift_down",
                k,
                order: self.order(),
            });
        }
        let b = self.incidence(k)?;
        self.check_len(x, "lift_down input")?;
        let mut out = vec![0.0; b.nrows()];
        b.mul_vec(x.values().as_slice(), &mut out);
        Ok(SimplicialSignal::from_vec(k - 1, out))
    }

    /// `B_{k+1}^T x`: transfers a `k`-signal to the `(k+1)`-level. For `k = 0`
    /// this is the gradient flow of a node signal; for `k = 1` the circulation
    /// along each triangle.
    pub fn lift_up(&self, x: &SimplicialSignal) -> Result<SimplicialSignal> {
        let k = x.level();
        if k >= self.order() {
            return Err(ScError::LevelOutOfRange {
                op: "lift_up",
                k,
                order: self.order(),
            });
        }
        let b = self.incidence(k + 1)?;
        self.check_len(x, "lift_up input")?;
        let mut out = vec![0.0; b.ncols()];
        b.tr_mul_vec(x.values().as_slice(), &mut out);
        Ok(SimplicialSignal::from_vec(k + 1, out))
    }

    fn check_len(&self, x: &SimplicialSignal, what: &str) -> Result<()> {
        if x.len() != self.len(x.level()) {
            return Err(ScError::DimensionMismatch {
                what: format!("{what} at level {}", x.level()),
                expected: self.len(x.level()),
                got: x.len(),
            });
        }
        Ok(())
    }
}
