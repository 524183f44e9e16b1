//! JSON input for `eval`.
//!
//! ```json
//! {
//!   "state": {"dims": [2, 2], "matrix": [[[0.5, 0], ...], ...]},
//!   "measurements": [{"theta": 1.5707963267948966, "phi": 0}, {"pi2": true}]
//! }
//! ```
//!
//! Complex entries are `[re, im]`. A state may also be given as
//! `{"werner": eta}` or `{"bloch": r3}`; a measurement as
//! `{"vectors": [[[re, im], ...], ...]}` with one basis vector per row.

use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use entropic_core::linalg::ComplexMatrix;
use entropic_core::measure::{pi2_basis, qubit_basis};
use entropic_core::qstate::{bloch_qubit, werner, BlochParams, DensityMatrix, WernerParams};
use entropic_core::ProjectiveMeasurement;

use crate::error::{CliError, Result};

type JsonComplex = [f64; 2];

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum StateSpec {
    Explicit {
        dims: Vec<usize>,
        matrix: Vec<Vec<JsonComplex>>,
    },
    Werner {
        werner: f64,
    },
    Bloch {
        bloch: f64,
    },
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum MeasurementSpec {
    Qubit { theta: f64, phi: f64 },
    Pi2 { pi2: bool },
    Vectors { vectors: Vec<Vec<JsonComplex>> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    state: StateSpec,
    #[serde(default)]
    measurements: Vec<MeasurementSpec>,
}

/// A validated state with its measurements on the measured subsystem.
#[derive(Debug)]
pub struct Problem {
    pub state: DensityMatrix,
    pub measurements: Vec<ProjectiveMeasurement>,
}

fn complex_row(row: &[JsonComplex]) -> Vec<Complex64> {
    row.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
}

impl StateSpec {
    fn build(self) -> Result<DensityMatrix> {
        match self {
            StateSpec::Explicit { dims, matrix } => {
                let rows: Vec<Vec<Complex64>> = matrix.iter().map(|r| complex_row(r)).collect();
                let mat = ComplexMatrix::from_rows(&rows)?;
                if dims.is_empty() || dims.len() > 2 || dims.iter().product::<usize>() != mat.dim()
                {
                    return Err(CliError::Usage(format!(
                        "state dims {dims:?} do not describe a {0}x{0} matrix",
                        mat.dim()
                    )));
                }
                Ok(DensityMatrix::new(dims, mat)?)
            }
            StateSpec::Werner { werner: eta } => Ok(werner(WernerParams::new(eta)?)),
            StateSpec::Bloch { bloch: r3 } => Ok(bloch_qubit(BlochParams::new(r3)?)),
        }
    }
}

impl MeasurementSpec {
    fn build(self) -> Result<ProjectiveMeasurement> {
        match self {
            MeasurementSpec::Qubit { theta, phi } => {
                if !theta.is_finite() || !phi.is_finite() {
                    return Err(CliError::Usage("qubit angles must be finite".into()));
                }
                Ok(qubit_basis(theta, phi))
            }
            MeasurementSpec::Pi2 { pi2: true } => Ok(pi2_basis()),
            MeasurementSpec::Pi2 { pi2: false } => {
                Err(CliError::Usage("\"pi2\" must be true when present".into()))
            }
            MeasurementSpec::Vectors { vectors } => Ok(ProjectiveMeasurement::new(
                vectors.iter().map(|v| complex_row(v)).collect(),
            )?),
        }
    }
}

pub fn parse_problem(json: &str) -> Result<Problem> {
    let doc: Document = serde_json::from_str(json)?;
    let state = doc.state.build()?;
    let measurements = doc
        .measurements
        .into_iter()
        .map(MeasurementSpec::build)
        .collect::<Result<Vec<_>>>()?;
    let d = state.measured_dim();
    if let Some((i, m)) = measurements.iter().enumerate().find(|(_, m)| m.d() != d) {
        return Err(CliError::Usage(format!(
            "measurement {i} acts on dimension {}, the measured subsystem has dimension {d}",
            m.d()
        )));
    }
    Ok(Problem {
        state,
        measurements,
    })
}

pub fn read_problem(path: &Path) -> Result<Problem> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_problem(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_state_and_mixed_measurements() {
        let p = parse_problem(
            r#"{"state": {"dims": [2], "matrix": [[[1,0],[0,0]],[[0,0],[0,0]]]},
                "measurements": [{"theta": 0, "phi": 0}, {"pi2": true},
                                 {"vectors": [[[0,0],[1,0]], [[1,0],[0,0]]]}]}"#,
        )
        .unwrap();
        assert!(!p.state.is_bipartite());
        assert_eq!(p.measurements.len(), 3);
    }

    #[test]
    fn shortcuts() {
        let p = parse_problem(r#"{"state": {"werner": 0.5}, "measurements": []}"#).unwrap();
        assert_eq!(p.state.dims(), &[2, 2]);
        let p = parse_problem(r#"{"state": {"bloch": 0.3}}"#).unwrap();
        assert_eq!(p.state.dim(), 2);
    }

    #[test]
    fn trace_violation_names_the_residual() {
        let err = parse_problem(
            r#"{"state": {"dims": [2], "matrix": [[[0.6,0],[0,0]],[[0,0],[0.6,0]]]}}"#,
        )
        .unwrap_err()
        .to_string();
        assert!(err.contains("trace"), "{err}");
        assert!(err.contains("0.2"), "{err}");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_problem("{"), Err(CliError::Json(_))));
        assert!(parse_problem(r#"{"state": {"dims": [2, 2], "matrix": [[[1,0]]]}}"#).is_err());
        assert!(
            parse_problem(r#"{"state": {"werner": 0.5}, "measurements": [{"pi2": false}]}"#)
                .is_err()
        );
        // qutrit basis against a qubit-measured state
        let err = parse_problem(
            r#"{"state": {"werner": 0.5}, "measurements": [
                {"vectors": [[[1,0],[0,0],[0,0]], [[0,0],[1,0],[0,0]], [[0,0],[0,0],[1,0]]]}]}"#,
        );
        assert!(matches!(err, Err(CliError::Usage(_))));
        assert!(parse_problem(r#"{"state": {"werner": 1.5}}"#).is_err());
    }
}
