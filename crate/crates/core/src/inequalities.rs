//! Checkers for the Reid, Halmos-Reid and Kittaneh inequalities and the
//! Loewner monotonicity certificates.
//!
//! Pointwise inequalities are evaluated on caller-supplied vectors; setups
//! (`ReidSetup` and friends) validate hypotheses and precompute the
//! operator data once so a campaign can evaluate many vectors per instance.
//! Operator-level certificates report the smallest eigenvalue of the
//! relevant difference, evaluated as a quadratic form at its eigenvector.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::{douglas_contraction, Factorization};
use crate::linalg::{ComplexMatrix, Vector};
use crate::matfun::{power_psd, sqrt_psd, PowerExponent};
use crate::predicates::{commute, is_hyponormal, is_normal, is_psd, is_self_adjoint, loewner_leq, Predicate};
use crate::spectra::{
    eig_hermitian, operator_norm, pinv_hermitian, require_self_adjoint, spectral_radius_gelfand, GelfandTrace,
};
use crate::tolerance::ToleranceProfile;

pub const REID_REL_TOL: f64 = 1e-7;
pub const HALMOS_REID_REL_TOL: f64 = 1e-7;
pub const KITTANEH_REL_TOL: f64 = 1e-8;
pub const CHAIN_REL_TOL: f64 = 1e-6;
pub const MONOTONE_REL_TOL: f64 = 1e-7;
pub const NORM_POWER_REL_TOL: f64 = 1e-8;
pub const DOMINANCE_REL_TOL: f64 = 1e-8;
/// Largest admissible imaginary part of `<Ax, x>`, relative to `||A||_F ||x||^2`.
const REAL_FORM_TOL: f64 = 1e-10;
pub const MAX_CHAIN_DEPTH: usize = 20;

/// Structural hypothesis placed on `AK`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HypothesisMode {
    /// `AK` self-adjoint.
    Classic,
    /// `AK` normal.
    Normal,
    /// `(AK)*` hyponormal.
    CoHyponormal,
    /// No hypothesis on `AK`; only `A >= 0` is required.
    None,
}

impl HypothesisMode {
    pub fn as_str(self) -> &'static str {
        match self {
            HypothesisMode::Classic => "classic",
            HypothesisMode::Normal => "normal",
            HypothesisMode::CoHyponormal => "co-hyponormal",
            HypothesisMode::None => "none",
        }
    }
}

impl fmt::Display for HypothesisMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for HypothesisMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classic" => Ok(HypothesisMode::Classic),
            "normal" => Ok(HypothesisMode::Normal),
            "co-hyponormal" => Ok(HypothesisMode::CoHyponormal),
            "none" => Ok(HypothesisMode::None),
            other => Err(Error::Usage(format!("unknown hypothesis mode `{other}`"))),
        }
    }
}

/// `Strict` refuses inputs whose hypotheses fail; `Force` evaluates anyway and
/// reports the defects next to the margin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Enforcement {
    Strict,
    Force,
}

/// Both sides of an inequality `lhs <= rhs` at a witness vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Margin {
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`.
    pub margin: f64,
    pub witness: Vector,
}

impl Margin {
    pub fn new(lhs: f64, rhs: f64, witness: Vector) -> Self {
        Margin {
            lhs,
            rhs,
            margin: rhs - lhs,
            witness,
        }
    }
}

pub type Defects = BTreeMap<String, f64>;

/// A result together with the hypothesis defects of its input.
#[derive(Debug, Clone)]
pub struct Assessed<T> {
    pub value: T,
    pub defects: Defects,
    pub hypotheses_hold: bool,
}

/// Operator-level inequality with its pass threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub margin: Margin,
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Default)]
struct HypothesisLedger {
    defects: Defects,
    failure: Option<(String, f64)>,
}

impl HypothesisLedger {
    fn record(&mut self, name: &str, outcome: Predicate) {
        self.defects.insert(name.to_string(), outcome.defect);
        if !outcome.holds && self.failure.is_none() {
            self.failure = Some((name.to_string(), outcome.defect));
        }
    }

    fn finish(self, enforcement: Enforcement, detail: &str) -> Result<(Defects, bool)> {
        match (self.failure, enforcement) {
            (Some((hypothesis, defect)), Enforcement::Strict) => Err(Error::Hypothesis {
                hypothesis,
                defect,
                detail: detail.to_string(),
            }),
            (failure, _) => Ok((self.defects, failure.is_none())),
        }
    }
}

fn require_dims(a: &ComplexMatrix, b: &ComplexMatrix, context: &'static str) -> Result<()> {
    a.assert_same_dim(b, context)
}

fn require_vector(m: &ComplexMatrix, x: &Vector, context: &'static str) -> Result<()> {
    if m.dim() != x.len() {
        return Err(Error::dimension(context, m.dim(), x.len()));
    }
    Ok(())
}

/// `<Ax, x>` for self-adjoint `A`, after checking its imaginary part is noise.
fn real_form(a: &ComplexMatrix, x: &Vector) -> Result<f64> {
    let q = a.quadratic_form(x)?;
    let scale = a.frobenius_norm() * x.norm_sqr();
    if q.im.abs() > REAL_FORM_TOL * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::Numerical(format!(
            "<Ax, x> has imaginary part {:e} for self-adjoint A",
            q.im
        )));
    }
    Ok(q.re)
}

fn intertwining(a: &ComplexMatrix, k: &ComplexMatrix, ak: &ComplexMatrix, profile: &ToleranceProfile) -> Predicate {
    let defect = (&(&k.adjoint() * a) - ak).frobenius_norm();
    Predicate {
        holds: defect <= profile.predicate_tol * (a.frobenius_norm() * k.frobenius_norm()).max(1.0),
        defect,
    }
}

/// Validated data for `|<AKx, x>| <= ||K|| <Ax, x>`.
#[derive(Debug, Clone)]
pub struct ReidSetup {
    a: ComplexMatrix,
    ak: ComplexMatrix,
    k_norm: f64,
    pub mode: HypothesisMode,
    pub defects: Defects,
    pub hypotheses_hold: bool,
}

impl ReidSetup {
    pub fn new(
        a: &ComplexMatrix,
        k: &ComplexMatrix,
        mode: HypothesisMode,
        enforcement: Enforcement,
        profile: &ToleranceProfile,
    ) -> Result<Self> {
        require_dims(a, k, "reid")?;
        let ak = a * k;
        let mut ledger = HypothesisLedger::default();
        ledger.record("psd(A)", is_psd(a, profile)?);
        match mode {
            HypothesisMode::Classic => ledger.record("self_adjoint(AK)", is_self_adjoint(&ak, profile)),
            HypothesisMode::Normal => ledger.record("normal(AK)", is_normal(&ak, profile)),
            HypothesisMode::CoHyponormal => {
                ledger.record("hyponormal((AK)*)", is_hyponormal(&ak.adjoint(), profile)?)
            }
            HypothesisMode::None => {}
        }
        let (defects, hypotheses_hold) = ledger.finish(enforcement, "")?;
        Ok(ReidSetup {
            a: a.clone(),
            k_norm: operator_norm(k),
            ak,
            mode,
            defects,
            hypotheses_hold,
        })
    }

    pub fn k_norm(&self) -> f64 {
        self.k_norm
    }

    pub fn margin(&self, x: &Vector) -> Result<Margin> {
        require_vector(&self.a, x, "reid vector")?;
        let lhs = self.ak.quadratic_form(x)?.norm();
        let rhs = self.k_norm * real_form(&self.a, x)?;
        Ok(Margin::new(lhs, rhs, x.clone()))
    }
}

/// `|<AKx, x>| <= ||K|| <Ax, x>` under the hypothesis selected by `mode`.
pub fn reid_margin(
    a: &ComplexMatrix,
    k: &ComplexMatrix,
    x: &Vector,
    mode: HypothesisMode,
    enforcement: Enforcement,
    profile: &ToleranceProfile,
) -> Result<Assessed<Margin>> {
    let setup = ReidSetup::new(a, k, mode, enforcement, profile)?;
    Ok(Assessed {
        value: setup.margin(x)?,
        defects: setup.defects,
        hypotheses_hold: setup.hypotheses_hold,
    })
}

/// Both Loewner inequalities behind the co-hyponormal Reid inequality.
#[derive(Debug, Clone)]
pub struct AdjointDominance {
    /// `AKK*A <= ||K||^2 A^2`.
    pub squared: Certificate,
    /// `|(AK)*| <= ||K|| A`; its margin is the headline value.
    pub root: Certificate,
}

/// Smallest eigenvalue of `high - low`, evaluated at its eigenvector.
pub(crate) fn operator_margin(low: &ComplexMatrix, high: &ComplexMatrix, profile: &ToleranceProfile) -> Result<Margin> {
    let diff = (high - low).hermitian_part();
    let w = eig_hermitian(&diff, profile)?.min_vector();
    Ok(Margin::new(real_form(low, &w)?, real_form(high, &w)?, w))
}

fn certificate(margin: Margin, threshold: f64) -> Certificate {
    let passed = margin.margin >= -threshold;
    Certificate {
        margin,
        threshold,
        passed,
    }
}

pub fn abs_adjoint_dominance(a: &ComplexMatrix, k: &ComplexMatrix, profile: &ToleranceProfile) -> Result<AdjointDominance> {
    require_dims(a, k, "abs_adjoint_dominance")?;
    let psd = is_psd(a, profile)?;
    if !psd.holds {
        return Err(Error::hypothesis("psd(A)", psd.defect));
    }
    let k_norm = operator_norm(k);
    let ak = a * k;
    let gram = (&ak * &ak.adjoint()).hermitian_part();
    let a_sq = (a * a).hermitian_part();
    let scale = (operator_norm(a) * k_norm).max(1.0);

    let squared = operator_margin(&gram, &a_sq.scale_real(k_norm * k_norm), profile)?;
    let modulus = sqrt_psd(&gram, profile)?;
    let root = operator_margin(&modulus, &a.scale_real(k_norm), profile)?;
    Ok(AdjointDominance {
        squared: certificate(squared, DOMINANCE_REL_TOL * scale * scale),
        root: certificate(root, DOMINANCE_REL_TOL * scale),
    })
}

/// Validated data for `|<Tx, x>| <= <|T|x, x>`.
#[derive(Debug, Clone)]
pub struct KittanehSetup {
    t: ComplexMatrix,
    modulus: ComplexMatrix,
    pub defects: Defects,
    pub hypotheses_hold: bool,
}

impl KittanehSetup {
    pub fn new(t: &ComplexMatrix, enforcement: Enforcement, profile: &ToleranceProfile) -> Result<Self> {
        let mut ledger = HypothesisLedger::default();
        ledger.record("hyponormal(T)", is_hyponormal(t, profile)?);
        let (defects, hypotheses_hold) = ledger.finish(enforcement, "")?;
        Ok(KittanehSetup {
            t: t.clone(),
            modulus: crate::matfun::abs_value(t, profile)?,
            defects,
            hypotheses_hold,
        })
    }

    pub fn modulus(&self) -> &ComplexMatrix {
        &self.modulus
    }

    pub fn margin(&self, x: &Vector) -> Result<Margin> {
        require_vector(&self.t, x, "kittaneh vector")?;
        let lhs = self.t.quadratic_form(x)?.norm();
        let rhs = real_form(&self.modulus, x)?;
        Ok(Margin::new(lhs, rhs, x.clone()))
    }
}

pub fn kittaneh_margin(
    t: &ComplexMatrix,
    x: &Vector,
    enforcement: Enforcement,
    profile: &ToleranceProfile,
) -> Result<Assessed<Margin>> {
    let setup = KittanehSetup::new(t, enforcement, profile)?;
    Ok(Assessed {
        value: setup.margin(x)?,
        defects: setup.defects,
        hypotheses_hold: setup.hypotheses_hold,
    })
}

fn halmos_hypotheses(
    a: &ComplexMatrix,
    k: &ComplexMatrix,
    ak: &ComplexMatrix,
    enforcement: Enforcement,
    profile: &ToleranceProfile,
) -> Result<(Defects, bool)> {
    require_dims(a, k, "halmos-reid")?;
    let mut ledger = HypothesisLedger::default();
    ledger.record("psd(A)", is_psd(a, profile)?);
    ledger.record("intertwining(K*A = AK)", intertwining(a, k, ak, profile));
    ledger.finish(enforcement, "")
}

/// Validated data for `|<AKx, x>| <= r(K) <Ax, x>`.
#[derive(Debug, Clone)]
pub struct HalmosReidSetup {
    a: ComplexMatrix,
    ak: ComplexMatrix,
    pub trace: GelfandTrace,
    pub k_norm: f64,
    pub defects: Defects,
    pub hypotheses_hold: bool,
}

impl HalmosReidSetup {
    pub fn new(a: &ComplexMatrix, k: &ComplexMatrix, enforcement: Enforcement, profile: &ToleranceProfile) -> Result<Self> {
        let ak = a * k;
        let (defects, hypotheses_hold) = halmos_hypotheses(a, k, &ak, enforcement, profile)?;
        Ok(HalmosReidSetup {
            a: a.clone(),
            ak,
            trace: spectral_radius_gelfand(k, profile),
            k_norm: operator_norm(k),
            defects,
            hypotheses_hold,
        })
    }

    pub fn radius(&self) -> f64 {
        self.trace.radius
    }

    pub fn margin(&self, x: &Vector) -> Result<Margin> {
        require_vector(&self.a, x, "halmos-reid vector")?;
        let lhs = self.ak.quadratic_form(x)?.norm();
        let rhs = self.trace.radius * real_form(&self.a, x)?;
        Ok(Margin::new(lhs, rhs, x.clone()))
    }
}

pub fn halmos_reid_margin(
    a: &ComplexMatrix,
    k: &ComplexMatrix,
    x: &Vector,
    enforcement: Enforcement,
    profile: &ToleranceProfile,
) -> Result<Assessed<Margin>> {
    let setup = HalmosReidSetup::new(a, k, enforcement, profile)?;
    Ok(Assessed {
        value: setup.margin(x)?,
        defects: setup.defects,
        hypotheses_hold: setup.hypotheses_hold,
    })
}

/// `K^(2^n) = exp(log_scale) * unit`, with `unit` of Frobenius norm one (or zero).
#[derive(Debug, Clone)]
struct ScaledPower {
    a_unit: ComplexMatrix,
    unit: ComplexMatrix,
    log_scale: f64,
}

/// Validated data for the bounds
/// `|<AKx, x>| <= <A K^(2^n) x, x>^(1/2^n) <Ax, x>^((2^n - 1)/2^n)`, `n = 1..=n_max`.
#[derive(Debug, Clone)]
pub struct InductionChainSetup {
    a: ComplexMatrix,
    ak: ComplexMatrix,
    powers: Vec<ScaledPower>,
    tol: f64,
    pub defects: Defects,
    pub hypotheses_hold: bool,
}

impl InductionChainSetup {
    pub fn new(
        a: &ComplexMatrix,
        k: &ComplexMatrix,
        n_max: usize,
        enforcement: Enforcement,
        profile: &ToleranceProfile,
    ) -> Result<Self> {
        if n_max == 0 || n_max > MAX_CHAIN_DEPTH {
            return Err(Error::InvalidArgument(format!(
                "chain depth must be in 1..={MAX_CHAIN_DEPTH}, got {n_max}"
            )));
        }
        let ak = a * k;
        let (defects, hypotheses_hold) = halmos_hypotheses(a, k, &ak, enforcement, profile)?;

        let mut powers = Vec::with_capacity(n_max);
        let k_fro = k.frobenius_norm();
        let (mut unit, mut log_scale) = if k_fro == 0.0 {
            (ComplexMatrix::zeros(k.dim()), f64::NEG_INFINITY)
        } else {
            (k.scale_real(1.0 / k_fro), k_fro.ln())
        };
        for _ in 0..n_max {
            let square = &unit * &unit;
            let nu = square.frobenius_norm();
            if nu == 0.0 {
                unit = ComplexMatrix::zeros(k.dim());
                log_scale = f64::NEG_INFINITY;
            } else {
                unit = square.scale_real(1.0 / nu);
                log_scale = 2.0 * log_scale + nu.ln();
            }
            powers.push(ScaledPower {
                a_unit: a * &unit,
                unit: unit.clone(),
                log_scale,
            });
        }
        Ok(InductionChainSetup {
            a: a.clone(),
            ak,
            powers,
            tol: profile.predicate_tol,
            defects,
            hypotheses_hold,
        })
    }

    pub fn depth(&self) -> usize {
        self.powers.len()
    }

    /// One margin per `n = 1..=n_max`; all share the same `lhs`.
    pub fn chain(&self, x: &Vector) -> Result<Vec<Margin>> {
        require_vector(&self.a, x, "induction chain vector")?;
        let lhs = self.ak.quadratic_form(x)?.norm();
        let ax = real_form(&self.a, x)?.max(0.0);
        let scale = self.a.frobenius_norm() * x.norm_sqr();
        let mut out = Vec::with_capacity(self.powers.len());
        for (i, power) in self.powers.iter().enumerate() {
            let exponent = 2f64.powi(i as i32 + 1);
            let q = power.a_unit.quadratic_form(x)?.re;
            if q < -self.tol * scale {
                return Err(Error::Numerical(format!(
                    "<A K^(2^{}) x, x> has negative real part {q:e}",
                    i + 1
                )));
            }
            let rhs = if q <= 0.0 || ax == 0.0 || power.log_scale == f64::NEG_INFINITY {
                0.0
            } else {
                ((power.log_scale + q.ln()) / exponent + (1.0 - 1.0 / exponent) * ax.ln()).exp()
            };
            out.push(Margin::new(lhs, rhs, x.clone()));
        }
        Ok(out)
    }

    /// `||K^(2^n)||^(1/2^n) <Ax, x>` for `n = 1..=n_max`, the bounds the chain
    /// is compared against on the way to `r(K) <Ax, x>`.
    pub fn norm_bounds(&self, x: &Vector) -> Result<Vec<f64>> {
        require_vector(&self.a, x, "induction chain vector")?;
        let ax = real_form(&self.a, x)?.max(0.0);
        Ok(self
            .powers
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let norm = operator_norm(&p.unit);
                if norm == 0.0 || p.log_scale == f64::NEG_INFINITY {
                    0.0
                } else {
                    ((p.log_scale + norm.ln()) / 2f64.powi(i as i32 + 1)).exp() * ax
                }
            })
            .collect())
    }
}

pub fn induction_chain(
    a: &ComplexMatrix,
    k: &ComplexMatrix,
    x: &Vector,
    n_max: usize,
    enforcement: Enforcement,
    profile: &ToleranceProfile,
) -> Result<Assessed<Vec<Margin>>> {
    let setup = InductionChainSetup::new(a, k, n_max, enforcement, profile)?;
    Ok(Assessed {
        value: setup.chain(x)?,
        defects: setup.defects,
        hypotheses_hold: setup.hypotheses_hold,
    })
}

/// Which monotonicity statement `f(A) <= f(B)` to certify.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MonotoneKind {
    Sqrt,
    /// `B^-1 <= A^-1`: the order reverses.
    Inverse,
    Square,
    Power(PowerExponent),
}

impl MonotoneKind {
    fn needs_commuting(self) -> bool {
        matches!(self, MonotoneKind::Square | MonotoneKind::Power(_))
    }
}

/// Certificate for `0 <= A <= B  =>  f(A) <= f(B)` (reversed for the inverse).
pub fn monotonicity_cert(
    kind: MonotoneKind,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    enforcement: Enforcement,
    profile: &ToleranceProfile,
) -> Result<Assessed<Certificate>> {
    require_dims(a, b, "monotonicity_cert")?;
    require_self_adjoint(a, "A", profile)?;
    require_self_adjoint(b, "B", profile)?;
    let mut ledger = HypothesisLedger::default();
    ledger.record("psd(A)", is_psd(a, profile)?);
    ledger.record("psd(B)", is_psd(b, profile)?);
    ledger.record("loewner(A <= B)", loewner_leq(a, b, profile)?);
    if kind == MonotoneKind::Inverse {
        let eigen = eig_hermitian(a, profile)?;
        ledger.record(
            "invertible(A)",
            Predicate {
                holds: eigen.min() > profile.rank_tol * eigen.max_abs(),
                defect: eigen.min(),
            },
        );
    }
    let detail = if kind.needs_commuting() {
        ledger.record("commuting(AB = BA)", commute(a, b, profile)?);
        "powers above one are monotone only on commuting pairs; see counterexample `squaring-noncommuting`"
    } else {
        ""
    };
    let (defects, hypotheses_hold) = ledger.finish(enforcement, detail)?;

    let (low, high) = match kind {
        MonotoneKind::Sqrt => (sqrt_psd(a, profile)?, sqrt_psd(b, profile)?),
        MonotoneKind::Inverse => (pinv_hermitian(b, profile)?, pinv_hermitian(a, profile)?),
        MonotoneKind::Square => ((a * a).hermitian_part(), (b * b).hermitian_part()),
        MonotoneKind::Power(alpha) => (power_psd(a, alpha, profile)?, power_psd(b, alpha, profile)?),
    };
    let f_b = match kind {
        MonotoneKind::Inverse => &low,
        _ => &high,
    };
    let threshold = MONOTONE_REL_TOL * operator_norm(f_b).max(1.0);
    let margin = operator_margin(&low, &high, profile)?;
    Ok(Assessed {
        value: certificate(margin, threshold),
        defects,
        hypotheses_hold,
    })
}

/// `||A^alpha|| = ||A||^alpha`. Passes when `|margin| <= threshold`.
pub fn norm_power_identity(a: &ComplexMatrix, alpha: PowerExponent, profile: &ToleranceProfile) -> Result<Certificate> {
    let psd = is_psd(a, profile)?;
    if !psd.holds {
        return Err(Error::hypothesis("psd(A)", psd.defect));
    }
    let lhs = operator_norm(&power_psd(a, alpha, profile)?);
    let rhs = operator_norm(a).powf(alpha.get());
    let witness = eig_hermitian(a, profile)?.max_vector();
    let margin = Margin::new(lhs, rhs, witness);
    let threshold = NORM_POWER_REL_TOL * rhs.max(1.0);
    let passed = margin.margin.abs() <= threshold;
    Ok(Certificate {
        margin,
        threshold,
        passed,
    })
}

/// The square-root monotonicity argument run through a factorization:
/// `sqrt A = K sqrt B` with `K` a contraction, then Reid applied to
/// `(sqrt B, K*)`, whose product `sqrt B K* = sqrt A` is self-adjoint.
#[derive(Debug, Clone)]
pub struct DouglasRoute {
    pub factorization: Factorization,
    /// `||K sqrt B - (K sqrt B)*||_F`.
    pub self_adjoint_defect: f64,
    /// Worst Reid margin across the probe vectors.
    pub worst: Margin,
    pub passed: bool,
}

pub fn sqrt_monotone_via_douglas(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    probes: &[Vector],
    profile: &ToleranceProfile,
) -> Result<DouglasRoute> {
    require_dims(a, b, "sqrt_monotone_via_douglas")?;
    if probes.is_empty() {
        return Err(Error::InvalidArgument("at least one probe vector is required".into()));
    }
    let root_a = sqrt_psd(a, profile)?;
    let root_b = sqrt_psd(b, profile)?;
    let factorization = douglas_contraction(&root_a, &root_b, profile)?;
    let product = &factorization.factor * &root_b;
    let sa = is_self_adjoint(&product, profile);
    let setup = ReidSetup::new(
        &root_b,
        &factorization.factor.adjoint(),
        HypothesisMode::Classic,
        Enforcement::Strict,
        profile,
    )?;
    let mut worst: Option<(f64, Margin)> = None;
    let mut passed = sa.holds && factorization.factor_norm <= 1.0 + profile.predicate_tol;
    for x in probes {
        let m = setup.margin(x)?;
        // monotonicity reads <sqrt A x, x> <= ||K|| <sqrt B x, x> <= <sqrt B x, x>
        passed &= m.margin >= -REID_REL_TOL * m.rhs.abs();
        let score = m.margin / m.rhs.abs().max(f64::MIN_POSITIVE);
        if worst.as_ref().is_none_or(|(s, _)| score < *s) {
            worst = Some((score, m));
        }
    }
    Ok(DouglasRoute {
        factorization,
        self_adjoint_defect: sa.defect,
        worst: worst.expect("probes is non-empty").1,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counterexamples::truncated_shift;
    use crate::linalg::Complex;

    fn p() -> ToleranceProfile {
        ToleranceProfile::default()
    }

    fn v(values: &[f64]) -> Vector {
        Vector::from_real(values).unwrap()
    }

    #[test]
    fn reid_identity_weight_is_cauchy_schwarz() {
        let k = ComplexMatrix::from_rows(&[
            vec![Complex::new(2.0, 0.0), Complex::new(1.0, -1.0)],
            vec![Complex::new(1.0, 1.0), Complex::new(-3.0, 0.0)],
        ])
        .unwrap();
        let x = Vector::new(vec![Complex::new(0.4, 0.1), Complex::new(-0.7, 0.2)]).unwrap();
        let m = reid_margin(&ComplexMatrix::identity(2), &k, &x, HypothesisMode::Classic, Enforcement::Strict, &p())
            .unwrap();
        assert!(m.hypotheses_hold);
        assert!(m.value.margin >= 0.0);
    }

    #[test]
    fn reid_shift_counterexample_values() {
        let s = truncated_shift(3).unwrap();
        let a = &s * &s.adjoint();
        let x = v(&[2.0, 1.0, 0.0]);
        let m = reid_margin(&a, &s, &x, HypothesisMode::None, Enforcement::Strict, &p()).unwrap();
        assert_eq!((m.value.lhs, m.value.rhs, m.value.margin), (2.0, 1.0, -1.0));
        // the truncated AK is neither self-adjoint nor co-hyponormal
        assert!(reid_margin(&a, &s, &x, HypothesisMode::Classic, Enforcement::Strict, &p()).is_err());
        let forced = reid_margin(&a, &s, &x, HypothesisMode::CoHyponormal, Enforcement::Force, &p()).unwrap();
        assert!(!forced.hypotheses_hold);
        assert_eq!(forced.defects["hyponormal((AK)*)"], -1.0);
        assert_eq!(forced.value.margin, -1.0);
    }

    #[test]
    fn reid_zero_k() {
        let a = ComplexMatrix::diag_real(&[1.0, 2.0]);
        let m = reid_margin(&a, &ComplexMatrix::zeros(2), &v(&[1.0, 1.0]), HypothesisMode::Classic, Enforcement::Strict, &p())
            .unwrap();
        assert_eq!((m.value.lhs, m.value.rhs), (0.0, 0.0));
    }

    #[test]
    fn reid_requires_positive_a() {
        let a = ComplexMatrix::diag_real(&[1.0, -2.0]);
        let err = reid_margin(&a, &ComplexMatrix::identity(2), &v(&[1.0, 0.0]), HypothesisMode::None, Enforcement::Strict, &p());
        assert!(matches!(err, Err(Error::Hypothesis { .. })));
        assert!(reid_margin(&a, &ComplexMatrix::identity(3), &v(&[1.0, 0.0]), HypothesisMode::None, Enforcement::Force, &p()).is_err());
    }

    #[test]
    fn dominance_unitary_and_zero() {
        let a = ComplexMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
        let u = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]).unwrap();
        let d = abs_adjoint_dominance(&a, &u, &p()).unwrap();
        assert!(d.root.margin.margin.abs() < 1e-12 && d.root.passed);
        assert!(d.squared.passed);
        let d = abs_adjoint_dominance(&a, &ComplexMatrix::zeros(2), &p()).unwrap();
        assert_eq!(d.root.margin.margin, 0.0);
    }

    #[test]
    fn kittaneh_examples() {
        let t = ComplexMatrix::diag(&[Complex::new(0.0, 1.0), Complex::new(0.0, -1.0)]);
        let x = v(&[1.0, 1.0]).scale(Complex::new(std::f64::consts::FRAC_1_SQRT_2, 0.0));
        let m = kittaneh_margin(&t, &x, Enforcement::Strict, &p()).unwrap().value;
        assert!(m.lhs.abs() < 1e-15);
        assert!((m.rhs - 1.0).abs() < 1e-15);

        let t = ComplexMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
        let m = kittaneh_margin(&t, &v(&[0.3, -0.8]), Enforcement::Strict, &p()).unwrap().value;
        assert!(m.margin.abs() < 1e-14);

        let s = truncated_shift(3).unwrap();
        let x = v(&[2.0, 1.0, 0.0]).scale(Complex::new(1.0 / 5f64.sqrt(), 0.0));
        assert!(kittaneh_margin(&s, &x, Enforcement::Strict, &p()).is_err());
        let forced = kittaneh_margin(&s, &x, Enforcement::Force, &p()).unwrap();
        assert!(!forced.hypotheses_hold);
        assert!((forced.value.lhs - 0.4).abs() < 1e-15);
        assert!((forced.value.rhs - 1.0).abs() < 1e-15);
        assert_eq!(forced.defects["hyponormal(T)"], -1.0);
    }

    #[test]
    fn halmos_reid_examples() {
        let a = ComplexMatrix::identity(2);
        let k = ComplexMatrix::diag_real(&[0.5, -0.5]);
        let m = halmos_reid_margin(&a, &k, &v(&[1.0, 0.0]), Enforcement::Strict, &p()).unwrap().value;
        assert_eq!((m.lhs, m.rhs, m.margin), (0.5, 0.5, 0.0));

        let k = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, -1.0]]).unwrap();
        let setup = HalmosReidSetup::new(&a, &k, Enforcement::Strict, &p()).unwrap();
        assert!((setup.radius() - setup.k_norm).abs() < 1e-12);
        assert!(setup.margin(&v(&[0.3, 0.4])).unwrap().margin >= 0.0);

        let n = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(HalmosReidSetup::new(&a, &n, Enforcement::Strict, &p()).is_err());
    }

    #[test]
    fn chain_base_case_matches_direct_formula() {
        let a = ComplexMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 3.0]]).unwrap();
        let h = ComplexMatrix::from_real_rows(&[&[1.0, -2.0], &[-2.0, 0.5]]).unwrap();
        let k = &pinv_hermitian(&a, &p()).unwrap() * &h;
        let x = v(&[0.6, -0.2]);
        let chain = induction_chain(&a, &k, &x, 3, Enforcement::Strict, &p()).unwrap().value;
        let k2 = &k * &k;
        let direct = (&a * &k2).quadratic_form(&x).unwrap().re.sqrt() * a.quadratic_form(&x).unwrap().re.sqrt();
        assert!((chain[0].rhs - direct).abs() < 1e-12 * direct);
        let k4 = &k2 * &k2;
        let direct = (&a * &k4).quadratic_form(&x).unwrap().re.powf(0.25) * a.quadratic_form(&x).unwrap().re.powf(0.75);
        assert!((chain[1].rhs - direct).abs() < 1e-12 * direct);
        assert!(chain.iter().all(|m| m.margin >= 0.0));
    }

    #[test]
    fn chain_zero_k_and_zero_vector() {
        let a = ComplexMatrix::identity(3);
        let chain = induction_chain(&a, &ComplexMatrix::zeros(3), &v(&[1.0, 2.0, 3.0]), 4, Enforcement::Strict, &p())
            .unwrap()
            .value;
        assert!(chain.iter().all(|m| m.lhs == 0.0 && m.rhs == 0.0));
        let k = ComplexMatrix::diag_real(&[0.5, 2.0, -1.0]);
        let chain = induction_chain(&a, &k, &Vector::zeros(3), 5, Enforcement::Strict, &p()).unwrap().value;
        assert!(chain.iter().all(|m| m.margin == 0.0));
        assert!(induction_chain(&a, &k, &Vector::zeros(3), 21, Enforcement::Strict, &p()).is_err());
        assert!(induction_chain(&a, &k, &Vector::zeros(3), 0, Enforcement::Strict, &p()).is_err());
    }

    #[test]
    fn chain_block_nilpotent_collapses() {
        // A = diag(1, 0, 0), K = E_{23}: AK = 0 is self-adjoint, K*A = 0, K^2 = 0.
        let a = ComplexMatrix::diag_real(&[1.0, 0.0, 0.0]);
        let mut k = ComplexMatrix::zeros(3);
        k[(1, 2)] = Complex::new(1.0, 0.0);
        let chain = induction_chain(&a, &k, &v(&[1.0, 1.0, 1.0]), 4, Enforcement::Strict, &p()).unwrap().value;
        assert!(chain.iter().all(|m| m.lhs == 0.0 && m.rhs == 0.0));
    }

    #[test]
    fn monotone_examples() {
        let cert = monotonicity_cert(
            MonotoneKind::Sqrt,
            &ComplexMatrix::diag_real(&[1.0, 4.0]),
            &ComplexMatrix::diag_real(&[4.0, 9.0]),
            Enforcement::Strict,
            &p(),
        )
        .unwrap();
        assert!((cert.value.margin.margin - 1.0).abs() < 1e-15 && cert.value.passed);

        let cert = monotonicity_cert(
            MonotoneKind::Inverse,
            &ComplexMatrix::identity(3),
            &ComplexMatrix::identity(3).scale_real(2.0),
            Enforcement::Strict,
            &p(),
        )
        .unwrap();
        assert!((cert.value.margin.margin - 0.5).abs() < 1e-15);

        let cert = monotonicity_cert(
            MonotoneKind::Power(PowerExponent::new(3.0).unwrap()),
            &ComplexMatrix::diag_real(&[1.0, 2.0]),
            &ComplexMatrix::diag_real(&[2.0, 3.0]),
            Enforcement::Strict,
            &p(),
        )
        .unwrap();
        assert!((cert.value.margin.margin - 7.0).abs() < 1e-12);
    }

    #[test]
    fn monotone_guards() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]).unwrap();
        let b = ComplexMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 1.0]]).unwrap();
        let two = MonotoneKind::Power(PowerExponent::new(2.0).unwrap());
        let err = monotonicity_cert(two, &a, &b, Enforcement::Strict, &p()).unwrap_err();
        assert!(err.to_string().contains("squaring-noncommuting"), "{err}");
        let forced = monotonicity_cert(two, &a, &b, Enforcement::Force, &p()).unwrap();
        assert!(!forced.value.passed && !forced.hypotheses_hold);
        // inverse needs an invertible A
        let singular = ComplexMatrix::diag_real(&[1.0, 0.0]);
        assert!(monotonicity_cert(MonotoneKind::Inverse, &singular, &ComplexMatrix::identity(2), Enforcement::Strict, &p()).is_err());
        // A <= B must hold
        assert!(monotonicity_cert(MonotoneKind::Sqrt, &b, &a, Enforcement::Strict, &p()).is_err());
    }

    #[test]
    fn norm_power_examples() {
        let half = PowerExponent::new(0.5).unwrap();
        let c = norm_power_identity(&ComplexMatrix::diag_real(&[4.0, 1.0]), half, &p()).unwrap();
        assert_eq!((c.margin.lhs, c.margin.rhs), (2.0, 2.0));
        for alpha in [0.3, 1.0, 7.0] {
            let c = norm_power_identity(&ComplexMatrix::identity(3), PowerExponent::new(alpha).unwrap(), &p()).unwrap();
            assert_eq!((c.margin.lhs, c.margin.rhs), (1.0, 1.0));
        }
        assert!(norm_power_identity(&ComplexMatrix::diag_real(&[-1.0, 1.0]), half, &p()).is_err());
    }

    #[test]
    fn hypothesis_mode_names_round_trip() {
        for mode in [HypothesisMode::Classic, HypothesisMode::Normal, HypothesisMode::CoHyponormal, HypothesisMode::None] {
            assert_eq!(mode.as_str().parse::<HypothesisMode>().unwrap(), mode);
        }
        assert!("hyponormal".parse::<HypothesisMode>().is_err());
    }
}
