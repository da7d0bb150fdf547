//! File formats: simplex lists, canonical complex JSON, signal CSV/JSON,
//! spectrum CSV, basis caches, and coefficient/bank/training-set JSON.
//!
//! All renderers are deterministic: fixed field and row order, shortest
//! round-trip float formatting. Re-reading anything written here reproduces
//! the original structure exactly.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::bank::{FilterBank, LevelBranches};
use crate::complex::SimplicialComplex;
use crate::design::{ResponseSample, ResponseTarget, TrainingSample, TrainingSet};
use crate::error::{Result, ScError};
use crate::filter::FilterCoeffs;
use crate::signal::{ComplexSignal, SimplicialSignal};
use crate::spectral::{FreqType, SpectralBasis};

/// Strips a `#` comment and surrounding whitespace; `None` for blank lines.
fn payload(line: &str) -> Option<&str> {
    let body = match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    };
    let body = body.trim();
    (!body.is_empty()).then_some(body)
}

/// Parses the simplex-list text format: one simplex per line, vertex ids
/// separated by whitespace, `#` starting a comment.
pub fn parse_simplex_list(text: &str) -> Result<Vec<Vec<usize>>> {
    let mut simplices = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let Some(body) = payload(line) else { continue };
        let vertices = body
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>().map_err(|_| ScError::Parse {
                    line: i + 1,
                    msg: format!("invalid vertex id `{tok}`"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        simplices.push(vertices);
    }
    Ok(simplices)
}

/// Parses an edge list in the same text format, requiring two vertices per line.
pub fn parse_edge_list(text: &str) -> Result<Vec<(usize, usize)>> {
    let mut edges = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let Some(body) = payload(line) else { continue };
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(ScError::Parse {
                line: i + 1,
                msg: format!("expected two vertex ids, got {}", fields.len()),
            });
        }
        let u = fields[0].parse::<usize>().map_err(|_| ScError::Parse {
            line: i + 1,
            msg: format!("invalid vertex id `{}`", fields[0]),
        })?;
        let v = fields[1].parse::<usize>().map_err(|_| ScError::Parse {
            line: i + 1,
            msg: format!("invalid vertex id `{}`", fields[1]),
        })?;
        edges.push((u, v));
    }
    Ok(edges)
}

#[derive(Serialize, Deserialize)]
struct ComplexFile {
    order: usize,
    simplices: Vec<Vec<usize>>,
}

/// Canonical JSON form of a complex: every simplex of every level, listed by
/// ascending dimension then lexicographically. Re-reading is a fixed point.
pub fn complex_to_json(sc: &SimplicialComplex) -> String {
    let mut simplices = Vec::new();
    for k in 0..=sc.order() {
        for s in sc.simplices(k).expect("level in range") {
            simplices.push(s.vertices().to_vec());
        }
    }
    serde_json::to_string_pretty(&ComplexFile {
        order: sc.order(),
        simplices,
    })
    .expect("complex serialization")
}

pub fn complex_from_json(text: &str) -> Result<SimplicialComplex> {
    let file: ComplexFile = serde_json::from_str(text)?;
    SimplicialComplex::build(&file.simplices, file.order)
}

/// `index,value` CSV of one signal.
pub fn signal_to_csv(x: &SimplicialSignal) -> String {
    let mut out = String::from("index,value\n");
    for (i, v) in x.values().iter().enumerate() {
        out.push_str(&format!("{i},{v}\n"));
    }
    out
}

/// Parses `index,value` rows (header optional, indices ascending from 0).
pub fn signal_from_csv(level: usize, text: &str) -> Result<SimplicialSignal> {
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let Some(body) = payload(line) else { continue };
        if i == 0 && body.starts_with("index") {
            continue;
        }
        let (idx_str, val_str) = body.split_once(',').ok_or(ScError::Parse {
            line: i + 1,
            msg: "expected `index,value`".into(),
        })?;
        let idx: usize = idx_str.trim().parse().map_err(|_| ScError::Parse {
            line: i + 1,
            msg: format!("invalid index `{idx_str}`"),
        })?;
        if idx != values.len() {
            return Err(ScError::Parse {
                line: i + 1,
                msg: format!("expected index {}, got {idx}", values.len()),
            });
        }
        let val: f64 = val_str.trim().parse().map_err(|_| ScError::Parse {
            line: i + 1,
            msg: format!("invalid value `{val_str}`"),
        })?;
        values.push(val);
    }
    Ok(SimplicialSignal::from_vec(level, values))
}

/// JSON of a whole-complex signal: arrays keyed by level.
pub fn complex_signal_to_json(xs: &ComplexSignal) -> String {
    let map: BTreeMap<usize, Vec<f64>> = xs
        .levels()
        .iter()
        .enumerate()
        .map(|(k, v)| (k, v.as_slice().to_vec()))
        .collect();
    serde_json::to_string_pretty(&map).expect("signal serialization")
}

pub fn complex_signal_from_json(sc: &SimplicialComplex, text: &str) -> Result<ComplexSignal> {
    let map: BTreeMap<usize, Vec<f64>> = serde_json::from_str(text)?;
    let mut levels = Vec::with_capacity(sc.order() + 1);
    for k in 0..=sc.order() {
        let values = map.get(&k).ok_or(ScError::DimensionMismatch {
            what: format!("signal file missing level {k}"),
            expected: sc.order() + 1,
            got: map.len(),
        })?;
        levels.push(DVector::from_vec(values.clone()));
    }
    ComplexSignal::new(sc, levels)
}

/// `level,index,eigenvalue,freq_type` CSV of a basis's spectrum.
pub fn spectrum_to_csv(basis: &SpectralBasis) -> String {
    let mut out = String::from("level,index,eigenvalue,freq_type\n");
    for i in 0..basis.dim() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            basis.level(),
            i,
            basis.eigenvalues()[i],
            basis.types()[i]
        ));
    }
    out
}

#[derive(Serialize, Deserialize)]
struct BasisFile {
    level: usize,
    tol_zero: f64,
    eigenvalues: Vec<f64>,
    freq_types: Vec<FreqType>,
    /// `eigenvectors[i]` is the eigenvector of `eigenvalues[i]`.
    eigenvectors: Vec<Vec<f64>>,
}

/// JSON cache of a spectral basis, for reuse across CLI invocations.
pub fn basis_to_json(basis: &SpectralBasis) -> String {
    let eigenvectors = (0..basis.dim())
        .map(|i| basis.vectors().column(i).as_slice().to_vec())
        .collect();
    serde_json::to_string_pretty(&BasisFile {
        level: basis.level(),
        tol_zero: basis.tol_zero(),
        eigenvalues: basis.eigenvalues().to_vec(),
        freq_types: basis.types().to_vec(),
        eigenvectors,
    })
    .expect("basis serialization")
}

pub fn basis_from_json(text: &str) -> Result<SpectralBasis> {
    let file: BasisFile = serde_json::from_str(text)?;
    let n = file.eigenvalues.len();
    if file.eigenvectors.len() != n || file.eigenvectors.iter().any(|v| v.len() != n) {
        return Err(ScError::DimensionMismatch {
            what: "basis file eigenvectors".into(),
            expected: n,
            got: file.eigenvectors.len(),
        });
    }
    let mut vectors = DMatrix::zeros(n, n);
    for (i, col) in file.eigenvectors.iter().enumerate() {
        vectors.set_column(i, &DVector::from_vec(col.clone()));
    }
    SpectralBasis::from_parts(
        file.level,
        file.eigenvalues,
        file.freq_types,
        vectors,
        file.tol_zero,
    )
}

/// `{level, alpha, beta}` JSON of one filter.
pub fn coeffs_to_json(coeffs: &FilterCoeffs) -> String {
    serde_json::to_string_pretty(coeffs).expect("coefficient serialization")
}

pub fn coeffs_from_json(text: &str) -> Result<FilterCoeffs> {
    Ok(serde_json::from_str(text)?)
}

#[derive(Serialize, Deserialize)]
struct BranchesFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    from_below: Option<FilterCoeffs>,
    same: FilterCoeffs,
    #[serde(skip_serializing_if = "Option::is_none")]
    from_above: Option<FilterCoeffs>,
}

#[derive(Serialize, Deserialize)]
struct BankFile {
    #[serde(rename = "K")]
    order: usize,
    branches: BTreeMap<usize, BranchesFile>,
}

/// `{K, branches: {k: {from_below, same, from_above}}}` JSON of a bank.
pub fn bank_to_json(bank: &FilterBank) -> String {
    let branches = bank
        .levels()
        .iter()
        .enumerate()
        .map(|(k, b)| {
            (
                k,
                BranchesFile {
                    from_below: b.from_below.clone(),
                    same: b.same.clone(),
                    from_above: b.from_above.clone(),
                },
            )
        })
        .collect();
    serde_json::to_string_pretty(&BankFile {
        order: bank.order(),
        branches,
    })
    .expect("bank serialization")
}

pub fn bank_from_json(text: &str) -> Result<FilterBank> {
    let file: BankFile = serde_json::from_str(text)?;
    let mut levels = Vec::with_capacity(file.order + 1);
    for k in 0..=file.order {
        let entry = file.branches.get(&k).ok_or(ScError::DimensionMismatch {
            what: format!("bank file missing level {k}"),
            expected: file.order + 1,
            got: file.branches.len(),
        })?;
        levels.push(LevelBranches {
            from_below: entry.from_below.clone(),
            same: entry.same.clone(),
            from_above: entry.from_above.clone(),
        });
    }
    FilterBank::new(levels)
}

/// Parses `lambda,freq_type,response` rows into a response target.
pub fn target_from_csv(level: usize, mu: f64, text: &str) -> Result<ResponseTarget> {
    let mut samples = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let Some(body) = payload(line) else { continue };
        if i == 0 && body.starts_with("lambda") {
            continue;
        }
        let fields: Vec<&str> = body.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(ScError::Parse {
                line: i + 1,
                msg: "expected `lambda,freq_type,response`".into(),
            });
        }
        let lambda: f64 = fields[0].parse().map_err(|_| ScError::Parse {
            line: i + 1,
            msg: format!("invalid frequency `{}`", fields[0]),
        })?;
        let freq_type: FreqType = fields[1].parse().map_err(|_| ScError::Parse {
            line: i + 1,
            msg: format!("invalid frequency type `{}`", fields[1]),
        })?;
        let target: f64 = fields[2].parse().map_err(|_| ScError::Parse {
            line: i + 1,
            msg: format!("invalid response `{}`", fields[2]),
        })?;
        samples.push(ResponseSample {
            lambda,
            freq_type,
            target,
        });
    }
    Ok(ResponseTarget { level, samples, mu })
}

#[derive(Serialize, Deserialize)]
struct TrainingSampleFile {
    input: BTreeMap<usize, Vec<f64>>,
    output: BTreeMap<usize, Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct TrainingSetFile {
    samples: Vec<TrainingSampleFile>,
}

pub fn training_set_to_json(data: &TrainingSet) -> String {
    let samples = data
        .samples
        .iter()
        .map(|s| TrainingSampleFile {
            input: level_map(&s.input),
            output: level_map(&s.output),
        })
        .collect();
    serde_json::to_string_pretty(&TrainingSetFile { samples }).expect("training serialization")
}

pub fn training_set_from_json(sc: &SimplicialComplex, text: &str) -> Result<TrainingSet> {
    let file: TrainingSetFile = serde_json::from_str(text)?;
    let samples = file
        .samples
        .into_iter()
        .map(|s| {
            Ok(TrainingSample {
                input: map_to_signal(sc, &s.input)?,
                output: map_to_signal(sc, &s.output)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let set = TrainingSet { samples };
    set.validate(sc)?;
    Ok(set)
}

fn level_map(xs: &ComplexSignal) -> BTreeMap<usize, Vec<f64>> {
    xs.levels()
        .iter()
        .enumerate()
        .map(|(k, v)| (k, v.as_slice().to_vec()))
        .collect()
}

fn map_to_signal(sc: &SimplicialComplex, map: &BTreeMap<usize, Vec<f64>>) -> Result<ComplexSignal> {
    let mut levels = Vec::with_capacity(sc.order() + 1);
    for k in 0..=sc.order() {
        let values = map.get(&k).ok_or(ScError::DimensionMismatch {
            what: format!("training sample missing level {k}"),
            expected: sc.order() + 1,
            got: map.len(),
        })?;
        levels.push(DVector::from_vec(values.clone()));
    }
    ComplexSignal::new(sc, levels)
}
