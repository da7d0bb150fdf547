//! Shared fixtures and independent oracles for the integration suites.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use sc_core::{ComplexSignal, FilterBank, FilterCoeffs, SimplicialComplex, SimplicialSignal};

/// The seeded desk-scale fixture used across suites.
pub const FIXTURE_SEED: u64 = 7;

pub fn triangle() -> SimplicialComplex {
    SimplicialComplex::build(&[vec![1, 2, 3]], 2).unwrap()
}

pub fn two_triangles() -> SimplicialComplex {
    SimplicialComplex::build(&[vec![1, 2, 3], vec![4, 5, 6]], 2).unwrap()
}

/// A filled triangle sharing a vertex with an unfilled 4-cycle: the edge
/// spectrum carries all three frequency types.
pub fn triangle_with_hole() -> SimplicialComplex {
    SimplicialComplex::build(
        &[vec![1, 2, 3], vec![3, 4], vec![4, 5], vec![5, 6], vec![3, 6]],
        2,
    )
    .unwrap()
}

/// The ~30-node seeded clique complex.
pub fn seeded_complex() -> SimplicialComplex {
    sc_core::seeded_clique_complex(30, 0.25, 2, FIXTURE_SEED).unwrap()
}

/// Every fixture with a name, for per-fixture assertions.
pub fn fixtures() -> Vec<(&'static str, SimplicialComplex)> {
    vec![
        ("triangle", triangle()),
        ("two-triangles", two_triangles()),
        ("triangle-with-hole", triangle_with_hole()),
        ("seeded-30", seeded_complex()),
    ]
}

/// Standard-normal signal of length `n`.
pub fn random_signal(rng: &mut impl Rng, n: usize) -> DVector<f64> {
    DVector::from_fn(n, |_, _| StandardNormal.sample(rng))
}

pub fn random_complex_signal(rng: &mut impl Rng, sc: &SimplicialComplex) -> ComplexSignal {
    let levels = (0..=sc.order())
        .map(|k| random_signal(rng, sc.len(k)))
        .collect();
    ComplexSignal::new(sc, levels).unwrap()
}

/// A random filter with a response-normalized coefficient draw.
pub fn random_filter(
    rng: &mut impl Rng,
    sc: &SimplicialComplex,
    k: usize,
    order: usize,
) -> FilterCoeffs {
    sc_core::random::random_filter(rng, sc, k, order).unwrap()
}

/// A random bank with every admissible branch populated.
pub fn random_bank(rng: &mut impl Rng, sc: &SimplicialComplex, order: usize) -> FilterBank {
    sc_core::random::random_bank(rng, sc, order).unwrap()
}

pub fn random_permutation(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    sc_core::random::random_permutation(rng, n)
}

pub fn random_orientation(rng: &mut impl Rng, sc: &SimplicialComplex) -> Vec<Vec<i8>> {
    sc_core::random::random_orientations(rng, sc)
}

/// Dense evaluation of the whole filter bank, the independent oracle for
/// `FilterBank::apply`: explicit filtering matrices times dense lifts.
pub fn dense_bank_apply(
    sc: &SimplicialComplex,
    bank: &FilterBank,
    xs: &ComplexSignal,
) -> Vec<DVector<f64>> {
    let order = sc.order();
    (0..=order)
        .map(|k| {
            let branches = bank.level(k);
            let mut y = branches.same.matrix(sc).unwrap() * xs.level(k);
            if let Some(h0) = &branches.from_below {
                let lifted = sc.incidence(k).unwrap().to_dense().transpose() * xs.level(k - 1);
                y += h0.matrix(sc).unwrap() * lifted;
            }
            if let Some(h2) = &branches.from_above {
                let lifted = sc.incidence(k + 1).unwrap().to_dense() * xs.level(k + 1);
                y += h2.matrix(sc).unwrap() * lifted;
            }
            y
        })
        .collect()
}

/// Exact rank of an integer matrix by fraction-free (Bareiss) elimination
/// over arbitrary-precision integers. Brute force, independent of any
/// floating-point path.
pub fn exact_rank(m: &DMatrix<i64>) -> usize {
    let (rows, cols) = m.shape();
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| (0..cols).map(|j| BigInt::from(m[(i, j)])).collect())
        .collect();
    let zero = BigInt::from(0);
    let mut rank = 0;
    let mut prev_pivot = BigInt::from(1);
    for col in 0..cols {
        let Some(pivot_row) = (rank..rows).find(|&r| a[r][col] != zero) else {
            continue;
        };
        a.swap(rank, pivot_row);
        let pivot = a[rank][col].clone();
        for r in (rank + 1)..rows {
            for c in (col + 1)..cols {
                let num = &pivot * &a[r][c] - &a[r][col] * &a[rank][c];
                a[r][c] = &num / &prev_pivot;
            }
            a[r][col] = zero.clone();
        }
        prev_pivot = pivot;
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

pub fn signal_at(xs: &ComplexSignal, k: usize) -> SimplicialSignal {
    xs.signal(k)
}

/// `norm(a - b) <= tol * (1 + norm(b))`, the mixed absolute/relative bound
/// used throughout the oracle comparisons.
pub fn close(a: &DVector<f64>, b: &DVector<f64>, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + b.norm())
}
