//! The JSON report emitted by every campaign.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::linalg::{ComplexMatrix, Vector};
use crate::tolerance::ToleranceProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Violation,
    HypothesisError,
}

impl Verdict {
    /// 0 pass, 1 violation, 2 hypothesis (or usage) error.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Violation => 1,
            Verdict::HypothesisError => 2,
        }
    }
}

/// The instance and vector that produced the worst margin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub trial_index: u64,
    pub dim: usize,
    pub matrices: BTreeMap<String, ComplexMatrix>,
    /// Absent for operator-level certificates whose witness is an eigenvector
    /// computed from the matrices; present otherwise.
    pub vector: Option<Vector>,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub command: String,
    pub check_name: String,
    pub hypothesis_mode: String,
    pub dims: Vec<usize>,
    pub trials: u64,
    pub vectors: u64,
    pub seed: u64,
    pub alpha: Option<f64>,
    pub n_max: Option<usize>,
    pub tolerance_profile: ToleranceProfile,
    /// Margin of the trial with the smallest `margin / tolerance`.
    pub worst_margin: f64,
    /// Check-specific tolerance that `worst_margin` was judged against.
    pub worst_tolerance: f64,
    pub worst_witness: Option<Witness>,
    /// Hypothesis defects of the worst trial.
    pub hypothesis_defects: BTreeMap<String, f64>,
    /// Trials with `margin < -tolerance` and all hypotheses satisfied.
    pub violations: u64,
    /// Trials force-evaluated although a hypothesis failed.
    pub hypothesis_failures: u64,
    /// Per-`n` data of the worst trial, e.g. the chain bounds or Gelfand iterates.
    pub series: BTreeMap<String, Vec<f64>>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report fields are always serializable")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }
}

/// One row of the Gelfand iterate table: `value = ||K^power||^(1/power)`, `power = 2^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GelfandRow {
    pub k: usize,
    pub power: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralRadiusReport {
    pub dim: usize,
    pub radius: f64,
    pub converged: bool,
    pub operator_norm: f64,
    pub iterates: Vec<GelfandRow>,
    pub tolerance_profile: ToleranceProfile,
}

impl SpectralRadiusReport {
    pub fn new(k: &ComplexMatrix, profile: &ToleranceProfile) -> Self {
        let trace = crate::spectra::spectral_radius_gelfand(k, profile);
        SpectralRadiusReport {
            dim: k.dim(),
            radius: trace.radius,
            converged: trace.converged,
            operator_norm: crate::spectra::operator_norm(k),
            iterates: trace
                .iterates
                .iter()
                .enumerate()
                .map(|(i, &value)| GelfandRow {
                    k: i,
                    power: 2f64.powi(i as i32),
                    value,
                })
                .collect(),
            tolerance_profile: *profile,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report fields are always serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectral_radius_table() {
        let k = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let r = SpectralRadiusReport::new(&k, &ToleranceProfile::default());
        assert_eq!(r.radius, 0.0);
        assert_eq!(r.iterates.len(), 2);
        assert_eq!((r.iterates[1].k, r.iterates[1].power, r.iterates[1].value), (1, 2.0, 0.0));
        assert_eq!(r.operator_norm, 1.0);
    }

    #[test]
    fn round_trip_is_lossless() {
        let mut matrices = BTreeMap::new();
        matrices.insert("A".to_string(), ComplexMatrix::diag_real(&[0.1, 1.0 / 3.0]));
        let report = CheckReport {
            command: "check".into(),
            check_name: "reid".into(),
            hypothesis_mode: "classic".into(),
            dims: vec![2, 3],
            trials: 2,
            vectors: 10,
            seed: u64::MAX,
            alpha: Some(2.5),
            n_max: None,
            tolerance_profile: ToleranceProfile::default(),
            worst_margin: -0.1 - 0.2,
            worst_tolerance: 1e-7 * std::f64::consts::PI,
            worst_witness: Some(Witness {
                trial_index: 1,
                dim: 2,
                matrices,
                vector: Some(Vector::from_real(&[0.6, 0.8]).unwrap()),
                lhs: 1.0 / 7.0,
                rhs: 2.0 / 7.0,
            }),
            hypothesis_defects: [("psd(A)".to_string(), 1e-300)].into_iter().collect(),
            violations: 0,
            hypothesis_failures: 0,
            series: [("rhs".to_string(), vec![0.1, 0.7])].into_iter().collect(),
            verdict: Verdict::Pass,
            notes: vec![],
        };
        let text = report.to_json();
        let back = CheckReport::from_json(&text).unwrap();
        assert_eq!(back, report);
        assert_eq!(back.to_json(), text);
        assert!(text.contains("\"verdict\": \"pass\""));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(Verdict::Pass.exit_code(), 0);
        assert_eq!(Verdict::Violation.exit_code(), 1);
        assert_eq!(Verdict::HypothesisError.exit_code(), 2);
    }
}
