use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Every numerical threshold used by the predicates, the eigensolver and the
/// Gelfand iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawProfile")]
pub struct ToleranceProfile {
    /// Relative slack for operator-class predicates and the Loewner order.
    pub predicate_tol: f64,
    /// Eigenvalues with `|l| <= rank_tol * max|l|` are treated as zero.
    pub rank_tol: f64,
    pub gelfand_tol: f64,
    pub gelfand_max_squarings: u32,
    /// Off-diagonal Frobenius threshold, relative to the input's Frobenius norm.
    pub jacobi_tol: f64,
    pub jacobi_max_sweeps: u32,
}

impl Default for ToleranceProfile {
    fn default() -> Self {
        ToleranceProfile {
            predicate_tol: 1e-9,
            rank_tol: 1e-10,
            gelfand_tol: 1e-8,
            gelfand_max_squarings: 60,
            jacobi_tol: 1e-12,
            jacobi_max_sweeps: 100,
        }
    }
}

impl ToleranceProfile {
    pub fn validate(self) -> Result<Self> {
        let reals = [
            ("predicate_tol", self.predicate_tol),
            ("rank_tol", self.rank_tol),
            ("gelfand_tol", self.gelfand_tol),
            ("jacobi_tol", self.jacobi_tol),
        ];
        for (name, value) in reals {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be positive and finite, got {value}"
                )));
            }
        }
        if self.gelfand_max_squarings == 0 || self.jacobi_max_sweeps == 0 {
            return Err(Error::InvalidArgument(
                "iteration limits must be at least 1".into(),
            ));
        }
        Ok(self)
    }
}

#[derive(Deserialize)]
struct RawProfile {
    predicate_tol: f64,
    rank_tol: f64,
    gelfand_tol: f64,
    gelfand_max_squarings: u32,
    jacobi_tol: f64,
    jacobi_max_sweeps: u32,
}

impl TryFrom<RawProfile> for ToleranceProfile {
    type Error = Error;
    fn try_from(raw: RawProfile) -> Result<Self> {
        ToleranceProfile {
            predicate_tol: raw.predicate_tol,
            rank_tol: raw.rank_tol,
            gelfand_tol: raw.gelfand_tol,
            gelfand_max_squarings: raw.gelfand_max_squarings,
            jacobi_tol: raw.jacobi_tol,
            jacobi_max_sweeps: raw.jacobi_max_sweeps,
        }
        .validate()
    }
}
