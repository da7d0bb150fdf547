//! Property-based tests over randomly generated small complexes.

mod common;

use common::{close, dense_bank_apply, random_bank, random_complex_signal, random_signal};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sc_core::{ComplexSignal, SimplicialComplex, SimplicialSignal, SpectralBasis};

/// A random order-2 clique complex on up to 7 vertices: edges drawn from a
/// bit vector over the upper triangle, rejecting triangle-free draws.
fn arb_complex() -> impl Strategy<Value = SimplicialComplex> {
    (3usize..=7)
        .prop_flat_map(|n| {
            proptest::collection::vec(proptest::bool::weighted(0.6), n * (n - 1) / 2)
                .prop_map(move |bits| {
                    let mut edges = Vec::new();
                    let mut idx = 0;
                    for u in 1..=n {
                        for v in (u + 1)..=n {
                            if bits[idx] {
                                edges.push((u, v));
                            }
                            idx += 1;
                        }
                    }
                    SimplicialComplex::clique_complex(&edges, 2)
                })
        })
        .prop_filter_map("needs a triangle", |result| result.ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Every generated complex is downward closed with exact boundary
    /// condition and annihilating Laplacian parts.
    #[test]
    fn generated_complexes_satisfy_the_boundary_condition(sc in arb_complex()) {
        prop_assert!(sc.verify_boundary());
        for k in 0..=sc.order() {
            let lap = sc.hodge_laplacian(k).unwrap();
            let cross = lap.lower() * lap.upper();
            prop_assert!(cross.amax() == 0.0);
            prop_assert!((lap.total() - lap.total().transpose()).amax() == 0.0);
        }
        // Downward closure: every face of every simplex is indexed.
        for k in 1..=sc.order() {
            for s in sc.simplices(k).unwrap() {
                for (face, _) in s.faces() {
                    prop_assert!(sc.index_of(&face).is_some());
                }
            }
        }
    }

    /// Decomposing any signal reconstructs it with orthogonal parts.
    #[test]
    fn decomposition_reconstructs(sc in arb_complex(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for k in 0..=sc.order() {
            let basis = SpectralBasis::build(&sc, k, None).unwrap();
            let x = SimplicialSignal::from_vector(k, random_signal(&mut rng, sc.len(k)));
            let parts = basis.hodge_decompose(&x).unwrap();
            let recon = parts.sum();
            prop_assert!((recon.values() - x.values()).norm() <= 1e-10 * (1.0 + x.values().norm()));
            let scale = x.values().norm_squared().max(1.0);
            prop_assert!(parts.gradient.values().dot(parts.curl.values()).abs() <= 1e-10 * scale);
            prop_assert!(parts.gradient.values().dot(parts.harmonic.values()).abs() <= 1e-10 * scale);
            prop_assert!(parts.curl.values().dot(parts.harmonic.values()).abs() <= 1e-10 * scale);
        }
    }

    /// The sparse shift recursion agrees with the dense oracle on any complex.
    #[test]
    fn bank_matches_dense_oracle(sc in arb_complex(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bank = random_bank(&mut rng, &sc, 3);
        let xs = random_complex_signal(&mut rng, &sc);
        let fast = bank.apply(&sc, &xs).unwrap();
        let dense = dense_bank_apply(&sc, &bank, &xs);
        for k in 0..=sc.order() {
            prop_assert!(close(fast.level(k), &dense[k], 1e-12));
        }
    }

    /// Relabeling simplices commutes with applying the bank.
    #[test]
    fn permutation_equivariance_holds(sc in arb_complex(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let perms: Vec<Vec<usize>> = (0..=sc.order())
            .map(|k| common::random_permutation(&mut rng, sc.len(k)))
            .collect();
        let (permuted, record) = sc.permute(&perms).unwrap();
        let bank = random_bank(&mut rng, &sc, 2);
        let xs = random_complex_signal(&mut rng, &sc);
        let ys = bank.apply(&sc, &xs).unwrap();
        let xs_p = ComplexSignal::new(
            &permuted,
            (0..=sc.order()).map(|k| record.apply(&xs.signal(k)).into_values()).collect(),
        ).unwrap();
        let ys_p = bank.apply(&permuted, &xs_p).unwrap();
        for k in 0..=sc.order() {
            let expected = record.apply(&ys.signal(k));
            prop_assert!(close(ys_p.level(k), expected.values(), 1e-10));
        }
    }

    /// Reorienting simplices commutes with applying the bank.
    #[test]
    fn orientation_equivariance_holds(sc in arb_complex(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let flips = common::random_orientation(&mut rng, &sc);
        let (reoriented, record) = sc.reorient(&flips).unwrap();
        let bank = random_bank(&mut rng, &sc, 2);
        let xs = random_complex_signal(&mut rng, &sc);
        let ys = bank.apply(&sc, &xs).unwrap();
        let xs_d = ComplexSignal::new(
            &reoriented,
            (0..=sc.order()).map(|k| record.apply(&xs.signal(k)).into_values()).collect(),
        ).unwrap();
        let ys_d = bank.apply(&reoriented, &xs_d).unwrap();
        for k in 0..=sc.order() {
            let expected = record.apply(&ys.signal(k));
            prop_assert!(close(ys_d.level(k), expected.values(), 1e-10));
        }
    }

    /// The SFT round-trips and preserves energy on any generated complex.
    #[test]
    fn sft_round_trips(sc in arb_complex(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for k in 0..=sc.order() {
            let basis = SpectralBasis::build(&sc, k, None).unwrap();
            let x = SimplicialSignal::from_vector(k, random_signal(&mut rng, sc.len(k)));
            let coeffs = basis.sft(&x).unwrap();
            prop_assert!((coeffs.norm() - x.values().norm()).abs() <= 1e-10 * (1.0 + x.values().norm()));
            let back = basis.isft(&coeffs).unwrap();
            prop_assert!(close(back.values(), x.values(), 1e-10));
        }
    }
}
