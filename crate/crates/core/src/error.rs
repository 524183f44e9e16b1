use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max asymmetry {asymmetry:.3e}")]
    NotHermitian { asymmetry: f64 },

    #[error("matrix has eigenvalue {eigenvalue:.3e} below the allowed floor -{floor:.0e}")]
    NegativeEigenvalue { eigenvalue: f64, floor: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A constructed object failed one of its invariants.
    #[error("{invariant} invariant violated: residual {}", fmt_residual(*residual))]
    Invariant {
        invariant: &'static str,
        residual: f64,
    },
}

fn fmt_residual(r: f64) -> String {
    if r.abs() >= 1e-3 {
        format!("{r:.6}")
    } else {
        format!("{r:.3e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariant_message_cites_residual() {
        let e = Error::Invariant {
            invariant: "trace",
            residual: 1.2 - 1.0,
        };
        assert_eq!(e.to_string(), "trace invariant violated: residual 0.200000");
        let e = Error::Invariant {
            invariant: "hermiticity",
            residual: 3e-7,
        };
        assert!(e.to_string().ends_with("3.000e-7"));
    }
}
