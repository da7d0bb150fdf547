use sc_core::*;
fn main() {
    let sc = seeded_clique_complex(30, 0.25, 2, 7).unwrap();
    for k in 0..=2 {
        let basis = SpectralBasis::build(&sc, k, None).unwrap();
        let mut distinct: Vec<f64> = vec![];
        for &l in basis.eigenvalues() {
            if !distinct.iter().any(|&d| (d - l).abs() < 1e-9) {
                distinct.push(l);
            }
        }
        println!("level {k}: n={} distinct eigenvalues={}", basis.dim(), distinct.len());
    }
}
