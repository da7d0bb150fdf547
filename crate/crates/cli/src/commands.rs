//! Handlers behind each subcommand.

use std::collections::BTreeMap;
use std::path::Path;

use log::info;
use serde::Serialize;

use sc_core::{
    fit_bank, fit_response, io, BankOrders, Result, ScError, SimplicialComplex, SimplicialSignal,
    SpectralBasis,
};

use crate::check;
use crate::cli::*;
use crate::experiment::{self, DiffuseConfig, FitConfig};

/// Exit status of a successfully-parsed command: checks may report failure
/// without it being an input or numerical error.
pub enum Outcome {
    Ok,
    InvariantFailure,
}

fn read(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

fn emit(out: Option<&Path>, contents: &str) -> Result<()> {
    match out {
        Some(path) => {
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            std::fs::write(path, contents)?;
        }
        None => print!("{contents}"),
    }
    Ok(())
}

fn load_complex(path: &Path) -> Result<SimplicialComplex> {
    io::complex_from_json(&read(path)?)
}

fn resolve_source(source: &ComplexSource, seed: u64) -> Result<SimplicialComplex> {
    match &source.complex {
        Some(path) => load_complex(path),
        None => sc_core::seeded_clique_complex(source.nodes, source.edge_prob, source.order, seed),
    }
}

fn counts_line(sc: &SimplicialComplex) -> String {
    sc.counts()
        .iter()
        .enumerate()
        .map(|(k, n)| format!("N{k}={n}"))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn build(args: &BuildArgs) -> Result<Outcome> {
    let sc = match &args.input {
        Some(path) => {
            let text = read(path)?;
            if args.clique {
                SimplicialComplex::clique_complex(&io::parse_edge_list(&text)?, args.order)?
            } else if text.trim_start().starts_with('{') {
                // Canonical JSON re-read: building is a fixed point.
                io::complex_from_json(&text)?
            } else {
                SimplicialComplex::build(&io::parse_simplex_list(&text)?, args.order)?
            }
        }
        None => {
            info!(
                "generating clique complex: n={} p={} K={} seed={}",
                args.nodes, args.edge_prob, args.order, args.seed
            );
            sc_core::seeded_clique_complex(args.nodes, args.edge_prob, args.order, args.seed)?
        }
    };
    println!("{}", counts_line(&sc));
    if let Some(out) = &args.out {
        emit(Some(out), &io::complex_to_json(&sc))?;
    }
    Ok(Outcome::Ok)
}

pub fn spectrum(args: &SpectrumArgs) -> Result<Outcome> {
    let sc = load_complex(&args.complex)?;
    let basis = SpectralBasis::build(&sc, args.level, None)?;
    emit(args.out.as_deref(), &io::spectrum_to_csv(&basis))?;
    if let Some(cache) = &args.basis_cache {
        emit(Some(cache), &io::basis_to_json(&basis))?;
    }
    Ok(Outcome::Ok)
}

pub fn filter_apply(args: &FilterApplyArgs) -> Result<Outcome> {
    let sc = load_complex(&args.complex)?;
    let coeffs = io::coeffs_from_json(&read(&args.coeffs)?)?;
    if let Some(level) = args.level {
        if level != coeffs.level {
            return Err(ScError::LevelMismatch {
                what: "--level against coefficient file",
                expected: coeffs.level,
                got: level,
            });
        }
    }
    let x = io::signal_from_csv(coeffs.level, &read(&args.signal)?)?;
    let x = SimplicialSignal::new(&sc, coeffs.level, x.into_values())?;
    let y = coeffs.apply(&sc, &x)?;
    emit(args.out.as_deref(), &io::signal_to_csv(&y))?;
    Ok(Outcome::Ok)
}

pub fn decompose(args: &DecomposeArgs) -> Result<Outcome> {
    let sc = load_complex(&args.complex)?;
    let x = io::signal_from_csv(args.level, &read(&args.signal)?)?;
    let x = SimplicialSignal::new(&sc, args.level, x.into_values())?;
    let basis = SpectralBasis::build(&sc, args.level, None)?;
    let parts = basis.hodge_decompose(&x)?;
    let mut csv = String::from("index,input,gradient,curl,harmonic\n");
    for i in 0..x.len() {
        csv.push_str(&format!(
            "{i},{},{},{},{}\n",
            x.values()[i],
            parts.gradient.values()[i],
            parts.curl.values()[i],
            parts.harmonic.values()[i]
        ));
    }
    emit(args.out.as_deref(), &csv)?;
    Ok(Outcome::Ok)
}

#[derive(Serialize)]
struct ResponseReport {
    level: usize,
    orders: [usize; 2],
    mu: f64,
    coefficients: sc_core::FilterCoeffs,
    max_spectral_error: f64,
    rank_deficient: bool,
}

pub fn design_fit_response(args: &FitResponseArgs) -> Result<Outcome> {
    let sc = load_complex(&args.complex)?;
    let target = io::target_from_csv(args.level, args.mu, &read(&args.target)?)?;
    let fit = fit_response(&sc, &target, args.l1, args.l2)?;
    if fit.rank_deficient() {
        info!(
            "rank-deficient design ({} of {} unknowns); minimum-norm solution returned",
            fit.rank, fit.unknowns
        );
    }
    let report = ResponseReport {
        level: args.level,
        orders: [args.l1, args.l2],
        mu: args.mu,
        rank_deficient: fit.rank_deficient(),
        max_spectral_error: fit.max_abs_error,
        coefficients: fit.coeffs,
    };
    emit(
        args.out.as_deref(),
        &serde_json::to_string_pretty(&report).expect("report serialization"),
    )?;
    Ok(Outcome::Ok)
}

#[derive(Serialize)]
struct BankLevelReport {
    level: usize,
    train_nmse: f64,
    zero_regressors: Vec<usize>,
}

#[derive(Serialize)]
struct BankReport {
    orders: usize,
    mu: f64,
    levels: Vec<BankLevelReport>,
    bank: serde_json::Value,
}

pub fn design_fit_bank(args: &FitBankArgs) -> Result<Outcome> {
    let sc = load_complex(&args.complex)?;
    let data = io::training_set_from_json(&sc, &read(&args.data)?)?;
    let fit = fit_bank(
        &sc,
        &data,
        &BankOrders::uniform(sc.order(), args.orders),
        args.mu,
    )?;
    let levels = (0..=sc.order())
        .map(|k| BankLevelReport {
            level: k,
            train_nmse: fit.train_nmse[k],
            zero_regressors: fit.zero_columns[k].clone(),
        })
        .collect();
    let report = BankReport {
        orders: args.orders,
        mu: args.mu,
        levels,
        bank: serde_json::from_str(&io::bank_to_json(&fit.bank))?,
    };
    emit(
        args.out.as_deref(),
        &serde_json::to_string_pretty(&report).expect("report serialization"),
    )?;
    Ok(Outcome::Ok)
}

pub fn experiment_fit(args: &ExperimentFitArgs) -> Result<Outcome> {
    let sc = resolve_source(&args.source, args.seed)?;
    let config = FitConfig {
        seed: args.seed,
        orders: args.orders,
        samples: args.samples,
        mu: args.mu,
        out_dir: args.out_dir.clone(),
    };
    let report = experiment::run_fit(&sc, &config)?;
    for level in &report.levels {
        println!(
            "level {}: bank_train_nmse={:.3e} baseline_train_nmse={:.3e} ratio={:.1}",
            level.level,
            level.bank_train_nmse,
            level.baseline_train_nmse,
            level.baseline_to_bank_ratio
        );
    }
    Ok(Outcome::Ok)
}

pub fn experiment_diffuse(args: &ExperimentDiffuseArgs) -> Result<Outcome> {
    let sc = resolve_source(&args.source, args.seed)?;
    let defaults = [args.gamma0, args.gamma1, args.gamma2];
    let gammas: Vec<f64> = (0..=sc.order())
        .map(|k| defaults[k.min(defaults.len() - 1)])
        .collect();
    let indicators: BTreeMap<usize, usize> = args.indicator.iter().copied().collect();
    let config = DiffuseConfig {
        seed: args.seed,
        gammas,
        order: args.orders,
        mu: args.mu,
        indicators,
        out_dir: args.out_dir.clone(),
    };
    let report = experiment::run_diffuse(&sc, &config)?;
    for level in &report.levels {
        println!(
            "level {}: gamma={} max_spectral_error={:.3e} output_energy={:.3e}",
            level.level, level.gamma, level.max_spectral_error, level.output_energy
        );
    }
    Ok(Outcome::Ok)
}

pub fn run_check(args: &CheckArgs) -> Result<Outcome> {
    let sc = match &args.complex {
        Some(path) => load_complex(path)?,
        None => sc_core::seeded_clique_complex(30, 0.25, 2, args.seed)?,
    };
    let rows = check::run_all(&sc, args.seed, args.trials)?;
    print!("{}", check::render_table(&rows));
    if rows.iter().all(|r| r.passed) {
        Ok(Outcome::Ok)
    } else {
        Ok(Outcome::InvariantFailure)
    }
}
