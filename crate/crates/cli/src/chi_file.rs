//! Premeasurement targets from JSON: `{"chi": [[[re, im] x4] x4]}`, with
//! components in the ordering `|++⟩, |+−⟩, |−+⟩, |−−⟩`.

use std::path::Path;

use num_complex::Complex64;
use qteleport_core::protocol::PremeasurementSpec;
use qteleport_core::tensor::ComplexVector;
use serde::Deserialize;

use crate::error::CliError;

/// Allowed deviation of each vector norm from 1 before renormalization.
pub const CHI_NORM_TOL: f64 = 1e-9;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChiDocument {
    chi: Vec<Vec<[f64; 2]>>,
}

pub fn parse_chi(text: &str, label: &str) -> Result<PremeasurementSpec, CliError> {
    let doc: ChiDocument =
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    match doc.chi.len() {
        n if n < 4 => return Err(CliError::MissingVector(n)),
        4 => {}
        n => return Err(CliError::Parse(format!("expected 4 vectors, found {n}"))),
    }
    let mut vectors = Vec::with_capacity(4);
    for (i, raw) in doc.chi.iter().enumerate() {
        if raw.len() != 4 {
            return Err(CliError::Parse(format!(
                "vector {} has {} components, expected 4",
                i + 1,
                raw.len()
            )));
        }
        let v: ComplexVector = raw.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        let norm = v.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > CHI_NORM_TOL {
            return Err(CliError::Norm(format!(
                "vector {} has norm {norm}, expected 1 within {CHI_NORM_TOL:e}",
                i + 1
            )));
        }
        vectors.push(v.normalized()?);
    }
    let chi: [ComplexVector; 4] = vectors.try_into().expect("exactly four vectors");
    Ok(PremeasurementSpec::new(chi, label)?)
}

pub fn load_chi_file(path: &Path) -> Result<PremeasurementSpec, CliError> {
    let text = std::fs::read_to_string(path)?;
    parse_chi(&text, &path.display().to_string())
}
