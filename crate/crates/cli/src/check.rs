//! Executable invariant suite: boundary condition, Laplacian identities,
//! Hodge decomposition, convolution theorem, equivariances, and the reduced
//! branch identity, all on seeded randomness.

use nalgebra::DVector;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use sc_core::{
    eigendecompose, random, ComplexSignal, Result, SeedSplitter, SimplicialComplex,
    SimplicialSignal, SpectralBasis,
};

/// One row of the pass/fail table.
#[derive(Clone, Debug)]
pub struct CheckRow {
    pub name: &'static str,
    pub deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckRow {
    fn new(name: &'static str, deviation: f64, tolerance: f64) -> Self {
        Self {
            name,
            deviation,
            tolerance,
            passed: deviation <= tolerance,
        }
    }
}

fn normal_signal(rng: &mut impl Rng, n: usize) -> DVector<f64> {
    DVector::from_fn(n, |_, _| StandardNormal.sample(rng))
}

fn normal_complex_signal(rng: &mut impl Rng, sc: &SimplicialComplex) -> Result<ComplexSignal> {
    ComplexSignal::new(
        sc,
        (0..=sc.order()).map(|k| normal_signal(rng, sc.len(k))).collect(),
    )
}

/// Runs every suite and returns the table. A complex passes when every row does.
pub fn run_all(sc: &SimplicialComplex, seed: u64, trials: usize) -> Result<Vec<CheckRow>> {
    let splitter = SeedSplitter::new(seed);
    let bases: Vec<SpectralBasis> = (0..=sc.order())
        .map(|k| SpectralBasis::build(sc, k, None))
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();

    rows.push(CheckRow::new(
        "boundary-condition",
        if sc.verify_boundary() { 0.0 } else { 1.0 },
        0.0,
    ));

    let mut asym = 0.0f64;
    let mut cross = 0.0f64;
    let mut negative = 0.0f64;
    for k in 0..=sc.order() {
        let lap = sc.hodge_laplacian(k)?;
        let total = lap.total();
        asym = asym.max((&total - total.transpose()).amax());
        cross = cross.max((lap.lower() * lap.upper()).amax());
        let (vals, _) = eigendecompose(&total)?;
        negative = negative.max((-vals[0]).max(0.0));
    }
    rows.push(CheckRow::new("laplacian-symmetry", asym, 1e-12));
    rows.push(CheckRow::new("laplacian-annihilation", cross, 1e-12));
    rows.push(CheckRow::new("laplacian-psd", negative, 1e-10));

    let mut recon_dev = 0.0f64;
    let mut orth_dev = 0.0f64;
    let mut isometry_dev = 0.0f64;
    {
        let mut rng = splitter.stream("check-decomposition");
        for (k, basis) in bases.iter().enumerate() {
            for _ in 0..100 {
                let x = SimplicialSignal::from_vector(k, normal_signal(&mut rng, sc.len(k)));
                let parts = basis.hodge_decompose(&x)?;
                let norm = x.values().norm();
                recon_dev =
                    recon_dev.max((parts.sum().values() - x.values()).norm() / norm.max(1e-300));
                let scale = x.values().norm_squared().max(1e-300);
                for (a, b) in [
                    (&parts.gradient, &parts.curl),
                    (&parts.gradient, &parts.harmonic),
                    (&parts.curl, &parts.harmonic),
                ] {
                    orth_dev = orth_dev.max(a.values().dot(b.values()).abs() / scale);
                }
                let coeffs = basis.sft(&x)?;
                isometry_dev = isometry_dev.max((coeffs.norm() - norm).abs() / norm.max(1e-300));
            }
        }
    }
    rows.push(CheckRow::new("hodge-reconstruction", recon_dev, 1e-10));
    rows.push(CheckRow::new("hodge-orthogonality", orth_dev, 1e-10));
    rows.push(CheckRow::new("sft-isometry", isometry_dev, 1e-10));

    let mut conv_dev = 0.0f64;
    let mut oracle_dev = 0.0f64;
    {
        let mut rng = splitter.stream("check-convolution");
        for (k, basis) in bases.iter().enumerate() {
            let h = random::random_filter(&mut rng, sc, k, 3)?;
            let x = SimplicialSignal::from_vector(k, normal_signal(&mut rng, sc.len(k)));
            let filtered = h.apply(sc, &x)?;
            let dense = h.matrix(sc)? * x.values();
            oracle_dev =
                oracle_dev.max((filtered.values() - &dense).norm() / (1.0 + dense.norm()));
            let filtered_hat = basis.sft(&filtered)?;
            let x_hat = basis.sft(&x)?;
            for i in 0..basis.dim() {
                let expect = h.response(basis.eigenvalues()[i], basis.types()[i]) * x_hat[i];
                conv_dev =
                    conv_dev.max((filtered_hat[i] - expect).abs() / (1.0 + expect.abs()));
            }
        }
    }
    rows.push(CheckRow::new("filter-dense-oracle", oracle_dev, 1e-12));
    rows.push(CheckRow::new("convolution-theorem", conv_dev, 1e-10));

    let mut spectral_dev = 0.0f64;
    {
        let mut rng = splitter.stream("check-spectral-bank");
        let bank = random::random_bank(&mut rng, sc, 3)?;
        let xs = normal_complex_signal(&mut rng, sc)?;
        let ys = bank.apply(sc, &xs)?;
        for (k, basis) in bases.iter().enumerate() {
            let direct = basis.sft(&ys.signal(k))?;
            let relation = bank.branch_spectral_output(sc, basis, &xs, k)?;
            spectral_dev =
                spectral_dev.max((direct - relation).norm() / (1.0 + ys.level(k).norm()));
        }
    }
    rows.push(CheckRow::new("spectral-bank-relation", spectral_dev, 1e-10));

    let mut perm_dev = 0.0f64;
    {
        let mut rng = splitter.stream("check-permutation");
        for _ in 0..trials {
            let perms = random::random_permutations(&mut rng, sc);
            let (permuted, record) = sc.permute(&perms)?;
            let bank = random::random_bank(&mut rng, sc, 2)?;
            let xs = normal_complex_signal(&mut rng, sc)?;
            let ys = bank.apply(sc, &xs)?;
            let xs_p = ComplexSignal::new(
                &permuted,
                (0..=sc.order())
                    .map(|k| record.apply(&xs.signal(k)).into_values())
                    .collect(),
            )?;
            let ys_p = bank.apply(&permuted, &xs_p)?;
            for k in 0..=sc.order() {
                let expected = record.apply(&ys.signal(k));
                perm_dev = perm_dev.max(
                    (ys_p.level(k) - expected.values()).norm()
                        / (1.0 + expected.values().norm()),
                );
            }
        }
    }
    rows.push(CheckRow::new("permutation-equivariance", perm_dev, 1e-10));

    let mut orient_dev = 0.0f64;
    {
        let mut rng = splitter.stream("check-orientation");
        for _ in 0..trials {
            let flips = random::random_orientations(&mut rng, sc);
            let (reoriented, record) = sc.reorient(&flips)?;
            let bank = random::random_bank(&mut rng, sc, 2)?;
            let xs = normal_complex_signal(&mut rng, sc)?;
            let ys = bank.apply(sc, &xs)?;
            let xs_d = ComplexSignal::new(
                &reoriented,
                (0..=sc.order())
                    .map(|k| record.apply(&xs.signal(k)).into_values())
                    .collect(),
            )?;
            let ys_d = bank.apply(&reoriented, &xs_d)?;
            for k in 0..=sc.order() {
                let expected = record.apply(&ys.signal(k));
                orient_dev = orient_dev.max(
                    (ys_d.level(k) - expected.values()).norm()
                        / (1.0 + expected.values().norm()),
                );
            }
        }
    }
    rows.push(CheckRow::new("orientation-equivariance", orient_dev, 1e-10));

    let mut remark_dev = 0.0f64;
    if sc.order() >= 2 {
        let mut rng = splitter.stream("check-remark");
        for _ in 0..trials {
            let bank = random::random_bank(&mut rng, sc, 3)?;
            for k in 1..sc.order() {
                let below =
                    SimplicialSignal::from_vector(k - 1, normal_signal(&mut rng, sc.len(k - 1)));
                let above =
                    SimplicialSignal::from_vector(k + 1, normal_signal(&mut rng, sc.len(k + 1)));
                let (red_low, red_up) = bank.reduced_branch_apply(sc, k, &below, &above)?;
                let h0 = bank.level(k).from_below.as_ref().expect("intermediate");
                let full_low = h0.apply(sc, &sc.lift_up(&below)?)?;
                let h2 = bank.level(k).from_above.as_ref().expect("intermediate");
                let full_up = h2.apply(sc, &sc.lift_down(&above)?)?;
                remark_dev = remark_dev.max(
                    (red_low.values() - full_low.values()).norm()
                        / (1.0 + full_low.values().norm()),
                );
                remark_dev = remark_dev.max(
                    (red_up.values() - full_up.values()).norm()
                        / (1.0 + full_up.values().norm()),
                );
            }
        }
    }
    rows.push(CheckRow::new("remark-reduced-branches", remark_dev, 1e-12));

    Ok(rows)
}

pub fn render_table(rows: &[CheckRow]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<26} {:>12} {:>10} {:>6}\n",
        "check", "max_dev", "tol", "status"
    ));
    for row in rows {
        out.push_str(&format!(
            "{:<26} {:>12.3e} {:>10.0e} {:>6}\n",
            row.name,
            row.deviation,
            row.tolerance,
            if row.passed { "PASS" } else { "FAIL" }
        ));
    }
    out
}
