//! Campaign orchestration shared by `check` and `fuzz`.
//!
//! A campaign runs `trials` independent trials. Trial `t` draws everything it
//! needs from `SeededSource::new(seed, t)` and has dimension
//! `lo + t mod (hi - lo + 1)`. Trials run in parallel and are reduced by
//! `(margin / tolerance, trial index)`, a total order, so the report does not
//! depend on scheduling.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counterexamples::{reid_quasinormal_violation, squaring_nonmonotone_pair, GALLERY};
use crate::error::{Error, Result};
use crate::factor::{douglas_contraction, stochel_positive_contraction, Factorization};
use crate::generators::{
    gen_commuting_psd_pair, gen_loewner_pair, gen_matrix, gen_normal, gen_psd, gen_reid_instance, gen_unitary,
    SeededSource,
};
use crate::inequalities::{
    monotonicity_cert, norm_power_identity, Certificate, Defects, Enforcement, HalmosReidSetup, HypothesisMode,
    InductionChainSetup, KittanehSetup, Margin, MonotoneKind, ReidSetup, CHAIN_REL_TOL, HALMOS_REID_REL_TOL,
    KITTANEH_REL_TOL, MAX_CHAIN_DEPTH, MONOTONE_REL_TOL, REID_REL_TOL,
};
use crate::linalg::{ComplexMatrix, Vector};
use crate::matfun::PowerExponent;
use crate::report::{CheckReport, Verdict, Witness};
use crate::spectra::{operator_norm, spectral_radius_gelfand};
use crate::tolerance::ToleranceProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    #[default]
    Reid,
    HalmosReid,
    Kittaneh,
    SqrtMonotone,
    InverseAntitone,
    PowerMonotone,
    NormPower,
    Douglas,
    Stochel,
    InductionChain,
}

impl CheckKind {
    pub const ALL: [CheckKind; 10] = [
        CheckKind::Reid,
        CheckKind::HalmosReid,
        CheckKind::Kittaneh,
        CheckKind::SqrtMonotone,
        CheckKind::InverseAntitone,
        CheckKind::PowerMonotone,
        CheckKind::NormPower,
        CheckKind::Douglas,
        CheckKind::Stochel,
        CheckKind::InductionChain,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Reid => "reid",
            CheckKind::HalmosReid => "halmos-reid",
            CheckKind::Kittaneh => "kittaneh",
            CheckKind::SqrtMonotone => "sqrt-monotone",
            CheckKind::InverseAntitone => "inverse-antitone",
            CheckKind::PowerMonotone => "power-monotone",
            CheckKind::NormPower => "norm-power",
            CheckKind::Douglas => "douglas",
            CheckKind::Stochel => "stochel",
            CheckKind::InductionChain => "induction-chain",
        }
    }

    /// Matrix inputs the check reads, in the order they are reported.
    fn inputs(self) -> &'static [&'static str] {
        match self {
            CheckKind::Reid | CheckKind::HalmosReid | CheckKind::InductionChain => &["A", "K"],
            CheckKind::Kittaneh => &["T"],
            CheckKind::NormPower => &["A"],
            _ => &["A", "B"],
        }
    }

    fn pointwise(self) -> bool {
        matches!(
            self,
            CheckKind::Reid | CheckKind::HalmosReid | CheckKind::Kittaneh | CheckKind::InductionChain
        )
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CheckKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown check `{s}`")))
    }
}

/// Inclusive dimension range written `N` or `A..B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct DimRange {
    pub lo: usize,
    pub hi: usize,
}

impl DimRange {
    pub fn single(n: usize) -> Self {
        DimRange { lo: n, hi: n }
    }

    pub fn dim_for(&self, trial: u64) -> usize {
        let width = (self.hi - self.lo + 1) as u64;
        self.lo + (trial % width) as usize
    }

    pub fn to_vec(&self) -> Vec<usize> {
        (self.lo..=self.hi).collect()
    }
}

impl Default for DimRange {
    fn default() -> Self {
        DimRange::single(4)
    }
}

impl FromStr for DimRange {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::Usage(format!("invalid dimension `{s}`; expected N or A..B")))
        };
        let range = match s.split_once("..") {
            Some((lo, hi)) => DimRange {
                lo: parse(lo)?,
                hi: parse(hi)?,
            },
            None => DimRange::single(parse(s)?),
        };
        if range.lo == 0 || range.lo > range.hi {
            return Err(Error::Usage(format!("invalid dimension range `{s}`")));
        }
        Ok(range)
    }
}

impl TryFrom<String> for DimRange {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<DimRange> for String {
    fn from(d: DimRange) -> String {
        d.to_string()
    }
}

impl fmt::Display for DimRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}..{}", self.lo, self.hi)
        }
    }
}

/// Matrices and a vector supplied instead of generated instances.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExplicitInputs {
    #[serde(rename = "A")]
    pub a: Option<ComplexMatrix>,
    #[serde(rename = "B")]
    pub b: Option<ComplexMatrix>,
    #[serde(rename = "K")]
    pub k: Option<ComplexMatrix>,
    #[serde(rename = "T")]
    pub t: Option<ComplexMatrix>,
    pub x: Option<Vector>,
}

impl ExplicitInputs {
    fn get(&self, name: &str) -> Option<&ComplexMatrix> {
        match name {
            "A" => self.a.as_ref(),
            "B" => self.b.as_ref(),
            "K" => self.k.as_ref(),
            "T" => self.t.as_ref(),
            _ => None,
        }
    }

    fn any_matrix(&self) -> bool {
        ["A", "B", "K", "T"].iter().any(|n| self.get(n).is_some())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CampaignConfig {
    pub check: CheckKind,
    pub mode: HypothesisMode,
    pub dims: DimRange,
    pub trials: u64,
    /// Random unit vectors per trial for pointwise checks.
    pub vectors: u64,
    pub seed: u64,
    pub alpha: Option<f64>,
    /// `power-monotone` only: draw commuting pairs (the default) or general Loewner pairs.
    pub commuting: bool,
    pub n_max: usize,
    pub profile: ToleranceProfile,
    pub inputs: ExplicitInputs,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            check: CheckKind::Reid,
            mode: HypothesisMode::Classic,
            dims: DimRange::default(),
            trials: 100,
            vectors: 10,
            seed: 0,
            alpha: None,
            commuting: true,
            n_max: 10,
            profile: ToleranceProfile::default(),
            inputs: ExplicitInputs::default(),
        }
    }
}

impl CampaignConfig {
    /// Parses a configuration; absent fields take their defaults.
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Outcome of one trial, reduced to its worst vector.
#[derive(Debug)]
struct Trial {
    index: u64,
    dim: usize,
    margin: f64,
    tolerance: f64,
    lhs: f64,
    rhs: f64,
    vector: Option<Vector>,
    matrices: BTreeMap<String, ComplexMatrix>,
    defects: Defects,
    hypotheses_hold: bool,
    series: BTreeMap<String, Vec<f64>>,
}

impl Trial {
    fn score(&self) -> f64 {
        self.margin / self.tolerance.max(f64::MIN_POSITIVE)
    }

    fn is_violation(&self) -> bool {
        self.hypotheses_hold && self.margin < -self.tolerance
    }
}

#[derive(Debug)]
struct TrialError {
    index: u64,
    dim: usize,
    matrices: BTreeMap<String, ComplexMatrix>,
    error: Error,
}

#[derive(Debug, Default)]
struct Summary {
    worst: Option<Trial>,
    violations: u64,
    hypothesis_failures: u64,
    error: Option<TrialError>,
}

impl Summary {
    fn from_outcome(outcome: std::result::Result<Trial, TrialError>) -> Self {
        match outcome {
            Ok(trial) => Summary {
                violations: trial.is_violation() as u64,
                hypothesis_failures: (!trial.hypotheses_hold) as u64,
                worst: Some(trial),
                error: None,
            },
            Err(e) => Summary {
                error: Some(e),
                ..Summary::default()
            },
        }
    }

    fn merge(self, other: Summary) -> Summary {
        let worst = match (self.worst, other.worst) {
            (Some(a), Some(b)) => {
                let b_first = b.score().total_cmp(&a.score()).then(b.index.cmp(&a.index)).is_lt();
                Some(if b_first { b } else { a })
            }
            (a, b) => a.or(b),
        };
        let error = match (self.error, other.error) {
            (Some(a), Some(b)) => Some(if b.index < a.index { b } else { a }),
            (a, b) => a.or(b),
        };
        Summary {
            worst,
            violations: self.violations + other.violations,
            hypothesis_failures: self.hypothesis_failures + other.hypothesis_failures,
            error,
        }
    }
}

/// Validated campaign with its inputs resolved.
struct Plan<'a> {
    config: &'a CampaignConfig,
    alpha: Option<PowerExponent>,
    explicit: Option<BTreeMap<String, ComplexMatrix>>,
    trials: u64,
}

impl<'a> Plan<'a> {
    fn new(config: &'a CampaignConfig) -> Result<Self> {
        config.profile.validate()?;
        let kind = config.check;
        if config.trials == 0 {
            return Err(Error::Usage("--trials must be at least 1".into()));
        }
        if kind.pointwise() && config.vectors == 0 && config.inputs.x.is_none() {
            return Err(Error::Usage("--vectors must be at least 1".into()));
        }
        if kind == CheckKind::InductionChain && !(1..=MAX_CHAIN_DEPTH).contains(&config.n_max) {
            return Err(Error::Usage(format!("--n-max must be in 1..={MAX_CHAIN_DEPTH}")));
        }
        let alpha = match (kind, config.alpha) {
            (CheckKind::PowerMonotone | CheckKind::NormPower, Some(a)) => {
                Some(PowerExponent::new(a).map_err(|e| Error::Usage(e.to_string()))?)
            }
            (CheckKind::PowerMonotone | CheckKind::NormPower, None) => {
                return Err(Error::Usage(format!("check {kind} requires --alpha")))
            }
            _ => None,
        };

        let explicit = if config.inputs.any_matrix() {
            let mut matrices = BTreeMap::new();
            for name in ["A", "B", "K", "T"] {
                let given = config.inputs.get(name);
                let wanted = kind.inputs().contains(&name);
                match (given, wanted) {
                    (Some(m), true) => {
                        matrices.insert(name.to_string(), m.clone());
                    }
                    (None, true) => return Err(Error::Usage(format!("check {kind} needs --{name} as well"))),
                    (Some(_), false) => return Err(Error::Usage(format!("check {kind} does not read --{name}"))),
                    (None, false) => {}
                }
            }
            let dim = matrices.values().next().map(ComplexMatrix::dim).unwrap_or(0);
            if let Some(m) = matrices.values().find(|m| m.dim() != dim) {
                return Err(Error::Usage(format!(
                    "input matrices have dimensions {dim} and {}",
                    m.dim()
                )));
            }
            if let Some(x) = &config.inputs.x {
                if x.len() != dim {
                    return Err(Error::Usage(format!("--x has length {}, matrices have dimension {dim}", x.len())));
                }
            }
            Some(matrices)
        } else {
            if config.inputs.x.is_some() {
                return Err(Error::Usage("--x requires explicit matrices".into()));
            }
            None
        };
        if explicit.is_some() && !kind.pointwise() && config.inputs.x.is_some() {
            return Err(Error::Usage(format!("check {kind} is operator-level and does not read --x")));
        }
        // a fixed instance with a fixed vector (or no vectors at all) is one trial
        let trials = match &explicit {
            Some(_) if config.inputs.x.is_some() || !kind.pointwise() => 1,
            _ => config.trials,
        };
        Ok(Plan {
            config,
            alpha,
            explicit,
            trials,
        })
    }

    fn dims(&self) -> Vec<usize> {
        match &self.explicit {
            Some(m) => vec![m.values().next().map_or(0, ComplexMatrix::dim)],
            None => self.config.dims.to_vec(),
        }
    }

    fn hypothesis_label(&self) -> String {
        let c = self.config;
        match c.check {
            CheckKind::Reid => c.mode.as_str().to_string(),
            CheckKind::Kittaneh if c.mode == HypothesisMode::None => "none".into(),
            CheckKind::Kittaneh => "hyponormal".into(),
            CheckKind::HalmosReid | CheckKind::InductionChain => "intertwining".into(),
            CheckKind::PowerMonotone if c.commuting => "loewner+commuting".into(),
            CheckKind::SqrtMonotone | CheckKind::InverseAntitone | CheckKind::PowerMonotone => "loewner".into(),
            CheckKind::NormPower => "psd".into(),
            CheckKind::Douglas => "domination".into(),
            CheckKind::Stochel => "commuting-positive".into(),
        }
    }

    fn instance(&self, n: usize, src: &mut SeededSource) -> BTreeMap<String, ComplexMatrix> {
        if let Some(m) = &self.explicit {
            return m.clone();
        }
        let c = self.config;
        let pair = |a: ComplexMatrix, b: ComplexMatrix| -> BTreeMap<String, ComplexMatrix> {
            [("A".to_string(), a), ("B".to_string(), b)].into_iter().collect()
        };
        match c.check {
            CheckKind::Reid | CheckKind::HalmosReid | CheckKind::InductionChain => {
                let mode = if c.check == CheckKind::Reid { c.mode } else { HypothesisMode::Classic };
                let inst = gen_reid_instance(n, mode, src);
                [("A".to_string(), inst.a), ("K".to_string(), inst.k)].into_iter().collect()
            }
            CheckKind::Kittaneh => {
                let t = if c.mode == HypothesisMode::None {
                    gen_matrix(n, src)
                } else {
                    gen_normal(n, src)
                };
                [("T".to_string(), t)].into_iter().collect()
            }
            CheckKind::SqrtMonotone => {
                let (a, b) = gen_loewner_pair(n, src);
                pair(a, b)
            }
            CheckKind::InverseAntitone => {
                let a = gen_psd(n, src).shift(0.1);
                let b = &a + &gen_psd(n, src);
                pair(a, b)
            }
            CheckKind::PowerMonotone if c.commuting => {
                let (a, b) = gen_commuting_psd_pair(n, src);
                pair(a, b)
            }
            CheckKind::PowerMonotone => {
                let (a, b) = gen_loewner_pair(n, src);
                pair(a, b)
            }
            CheckKind::NormPower => [("A".to_string(), gen_psd(n, src))].into_iter().collect(),
            CheckKind::Douglas => {
                // B well conditioned, A = C B with ||C|| <= 0.99
                let b = &gen_unitary(n, src) * &gen_psd(n, src).shift(0.1);
                let g = gen_matrix(n, src);
                let c = g.scale_real(0.99 * (1.0 - src.uniform()) / operator_norm(&g));
                let mut m = pair(&c * &b, b);
                m.insert("C".to_string(), c);
                m
            }
            CheckKind::Stochel => {
                let (a, b) = gen_commuting_psd_pair(n, src);
                pair(a, b)
            }
        }
    }

    fn probes(&self, n: usize, src: &mut SeededSource) -> Vec<Vector> {
        match &self.config.inputs.x {
            Some(x) => vec![x.clone()],
            None => (0..self.config.vectors).map(|_| src.unit_vector(n)).collect(),
        }
    }

    fn trial(&self, index: u64) -> std::result::Result<Trial, TrialError> {
        let n = match &self.explicit {
            Some(m) => m.values().next().map_or(0, ComplexMatrix::dim),
            None => self.config.dims.dim_for(index),
        };
        let mut src = SeededSource::new(self.config.seed, index);
        let matrices = self.instance(n, &mut src);
        match self.evaluate(n, &matrices, &mut src) {
            Ok(eval) => Ok(Trial {
                index,
                dim: n,
                margin: eval.margin,
                tolerance: eval.tolerance,
                lhs: eval.lhs,
                rhs: eval.rhs,
                vector: eval.vector,
                matrices,
                defects: eval.defects,
                hypotheses_hold: eval.hypotheses_hold,
                series: eval.series,
            }),
            Err(error) => Err(TrialError {
                index,
                dim: n,
                matrices,
                error,
            }),
        }
    }

    fn evaluate(&self, n: usize, m: &BTreeMap<String, ComplexMatrix>, src: &mut SeededSource) -> Result<Evaluation> {
        let c = self.config;
        let p = &c.profile;
        let strict = Enforcement::Strict;
        match c.check {
            CheckKind::Reid => {
                let enforcement = if c.mode == HypothesisMode::None { Enforcement::Force } else { strict };
                let setup = ReidSetup::new(&m["A"], &m["K"], c.mode, enforcement, p)?;
                let worst = worst_pointwise(&self.probes(n, src), REID_REL_TOL, |x| setup.margin(x))?;
                Ok(Evaluation::pointwise(worst, setup.defects, setup.hypotheses_hold))
            }
            CheckKind::Kittaneh => {
                let enforcement = if c.mode == HypothesisMode::None { Enforcement::Force } else { strict };
                let setup = KittanehSetup::new(&m["T"], enforcement, p)?;
                let worst = worst_pointwise(&self.probes(n, src), KITTANEH_REL_TOL, |x| setup.margin(x))?;
                Ok(Evaluation::pointwise(worst, setup.defects, setup.hypotheses_hold))
            }
            CheckKind::HalmosReid => {
                let setup = HalmosReidSetup::new(&m["A"], &m["K"], strict, p)?;
                let worst = worst_pointwise(&self.probes(n, src), HALMOS_REID_REL_TOL, |x| setup.margin(x))?;
                let mut eval = Evaluation::pointwise(worst, setup.defects.clone(), setup.hypotheses_hold);
                eval.series.insert("gelfand_iterates".into(), setup.trace.iterates.clone());
                eval.series.insert("k_norm".into(), vec![setup.k_norm]);
                Ok(eval)
            }
            CheckKind::InductionChain => {
                let setup = InductionChainSetup::new(&m["A"], &m["K"], c.n_max, strict, p)?;
                let mut worst: Option<(f64, Vec<Margin>, usize)> = None;
                for x in self.probes(n, src) {
                    let chain = setup.chain(&x)?;
                    for (i, step) in chain.iter().enumerate() {
                        let score = step.margin / (CHAIN_REL_TOL * step.rhs.abs()).max(f64::MIN_POSITIVE);
                        if worst.as_ref().is_none_or(|(s, _, _)| score < *s) {
                            worst = Some((score, chain.clone(), i));
                        }
                    }
                }
                let (_, chain, i) = worst.expect("at least one probe vector");
                let x = chain[i].witness.clone();
                let mut eval = Evaluation::from_margin(&chain[i], CHAIN_REL_TOL * chain[i].rhs.abs());
                eval.defects = setup.defects.clone();
                eval.hypotheses_hold = setup.hypotheses_hold;
                let a_form = m["A"].quadratic_form(&x)?.re;
                eval.series.insert("rhs".into(), chain.iter().map(|s| s.rhs).collect());
                eval.series.insert("norm_bounds".into(), setup.norm_bounds(&x)?);
                eval.series.insert(
                    "radius_bound".into(),
                    vec![spectral_radius_gelfand(&m["K"], p).radius * a_form],
                );
                Ok(eval)
            }
            CheckKind::SqrtMonotone => self.certificate(MonotoneKind::Sqrt, m),
            CheckKind::InverseAntitone => self.certificate(MonotoneKind::Inverse, m),
            CheckKind::PowerMonotone => {
                let alpha = self.alpha.expect("validated in Plan::new");
                self.certificate(MonotoneKind::Power(alpha), m)
            }
            CheckKind::NormPower => {
                let cert = norm_power_identity(&m["A"], self.alpha.expect("validated in Plan::new"), p)?;
                // two-sided identity: judged on -|lhs - rhs|
                let mut eval = Evaluation::from_margin(&cert.margin, cert.threshold);
                eval.margin = -cert.margin.margin.abs();
                Ok(eval)
            }
            CheckKind::Douglas => {
                let f = douglas_contraction(&m["A"], &m["B"], p)?;
                let mut eval = Evaluation::factorization(&f, p);
                if let Some(c) = m.get("C") {
                    eval.series.insert("factor_error".into(), vec![(&f.factor - c).frobenius_norm()]);
                }
                Ok(eval)
            }
            CheckKind::Stochel => {
                let f = stochel_positive_contraction(&m["A"], &m["B"], p)?;
                Ok(Evaluation::factorization(&f, p))
            }
        }
    }

    fn certificate(&self, kind: MonotoneKind, m: &BTreeMap<String, ComplexMatrix>) -> Result<Evaluation> {
        let assessed = monotonicity_cert(kind, &m["A"], &m["B"], Enforcement::Strict, &self.config.profile)?;
        let Certificate { margin, threshold, .. } = &assessed.value;
        let mut eval = Evaluation::from_margin(margin, *threshold);
        eval.defects = assessed.defects;
        eval.hypotheses_hold = assessed.hypotheses_hold;
        Ok(eval)
    }
}

/// Worst margin of one trial.
struct Evaluation {
    margin: f64,
    tolerance: f64,
    lhs: f64,
    rhs: f64,
    vector: Option<Vector>,
    defects: Defects,
    hypotheses_hold: bool,
    series: BTreeMap<String, Vec<f64>>,
}

impl Evaluation {
    fn from_margin(m: &Margin, tolerance: f64) -> Self {
        Evaluation {
            margin: m.margin,
            tolerance,
            lhs: m.lhs,
            rhs: m.rhs,
            vector: Some(m.witness.clone()),
            defects: Defects::new(),
            hypotheses_hold: true,
            series: BTreeMap::new(),
        }
    }

    fn pointwise((m, tolerance): (Margin, f64), defects: Defects, hypotheses_hold: bool) -> Self {
        Evaluation {
            defects,
            hypotheses_hold,
            ..Evaluation::from_margin(&m, tolerance)
        }
    }

    /// `||K|| <= 1` judged at `predicate_tol`.
    fn factorization(f: &Factorization, p: &ToleranceProfile) -> Self {
        Evaluation {
            margin: 1.0 - f.factor_norm,
            tolerance: p.predicate_tol,
            lhs: f.factor_norm,
            rhs: 1.0,
            vector: None,
            defects: Defects::new(),
            hypotheses_hold: true,
            series: [("residual".to_string(), vec![f.residual])].into_iter().collect(),
        }
    }
}

/// Worst `margin / (rel_tol |rhs|)` over the probes.
fn worst_pointwise(
    probes: &[Vector],
    rel_tol: f64,
    mut margin: impl FnMut(&Vector) -> Result<Margin>,
) -> Result<(Margin, f64)> {
    let mut worst: Option<(f64, Margin, f64)> = None;
    for x in probes {
        let m = margin(x)?;
        let tol = rel_tol * m.rhs.abs();
        let score = m.margin / tol.max(f64::MIN_POSITIVE);
        if worst.as_ref().is_none_or(|(s, _, _)| score < *s) {
            worst = Some((score, m, tol));
        }
    }
    let (_, m, tol) = worst.ok_or_else(|| Error::Usage("no probe vectors".into()))?;
    Ok((m, tol))
}

fn base_report(command: &str, plan: &Plan<'_>) -> CheckReport {
    let c = plan.config;
    CheckReport {
        command: command.to_string(),
        check_name: c.check.name().to_string(),
        hypothesis_mode: plan.hypothesis_label(),
        dims: plan.dims(),
        trials: plan.trials,
        vectors: if !c.check.pointwise() {
            0
        } else if c.inputs.x.is_some() {
            1
        } else {
            c.vectors
        },
        seed: c.seed,
        alpha: plan.alpha.map(PowerExponent::get),
        n_max: (c.check == CheckKind::InductionChain).then_some(c.n_max),
        tolerance_profile: c.profile,
        worst_margin: 0.0,
        worst_tolerance: 0.0,
        worst_witness: None,
        hypothesis_defects: BTreeMap::new(),
        violations: 0,
        hypothesis_failures: 0,
        series: BTreeMap::new(),
        verdict: Verdict::Pass,
        notes: Vec::new(),
    }
}

fn run(command: &str, config: &CampaignConfig) -> Result<CheckReport> {
    let plan = Plan::new(config)?;
    let summary = (0..plan.trials)
        .into_par_iter()
        .map(|t| Summary::from_outcome(plan.trial(t)))
        .reduce(Summary::default, Summary::merge);

    let mut report = base_report(command, &plan);
    if let Some(e) = summary.error {
        let (hypothesis, defect) = match &e.error {
            Error::Hypothesis { hypothesis, defect, .. } => (hypothesis.clone(), *defect),
            _ => return Err(e.error),
        };
        report.verdict = Verdict::HypothesisError;
        report.hypothesis_defects.insert(hypothesis, defect);
        report.worst_witness = Some(Witness {
            trial_index: e.index,
            dim: e.dim,
            matrices: e.matrices,
            vector: None,
            lhs: 0.0,
            rhs: 0.0,
        });
        report.notes.push(format!("trial {} refused: {}", e.index, e.error));
        return Ok(report);
    }

    let worst = summary.worst.expect("at least one trial ran");
    report.violations = summary.violations;
    report.hypothesis_failures = summary.hypothesis_failures;
    report.verdict = if summary.violations > 0 { Verdict::Violation } else { Verdict::Pass };
    report.worst_margin = worst.margin;
    report.worst_tolerance = worst.tolerance;
    report.hypothesis_defects = worst.defects;
    report.series = worst.series;
    report.worst_witness = Some(Witness {
        trial_index: worst.index,
        dim: worst.dim,
        matrices: worst.matrices,
        vector: worst.vector,
        lhs: worst.lhs,
        rhs: worst.rhs,
    });
    if summary.hypothesis_failures > 0 {
        report.notes.push(format!(
            "{} trials were force-evaluated with a failed hypothesis and are not counted as violations",
            summary.hypothesis_failures
        ));
    }
    if config.check == CheckKind::NormPower {
        report.notes.push("two-sided identity: worst_margin is -|lhs - rhs|".into());
    }
    Ok(report)
}

/// Runs a registered check over generated or explicit instances.
pub fn run_check(config: &CampaignConfig) -> Result<CheckReport> {
    run("check", config)
}

/// Same engine as [`run_check`], labelled as a search.
pub fn run_fuzz(config: &CampaignConfig) -> Result<CheckReport> {
    run("fuzz", config)
}

/// Evaluates a gallery counterexample by name.
pub fn run_counterexample(name: &str, dim: Option<usize>, profile: &ToleranceProfile) -> Result<CheckReport> {
    profile.validate()?;
    let mut report = CheckReport {
        command: "counterexample".into(),
        check_name: name.to_string(),
        hypothesis_mode: "none".into(),
        dims: vec![],
        trials: 1,
        vectors: 1,
        seed: 0,
        alpha: None,
        n_max: None,
        tolerance_profile: *profile,
        worst_margin: 0.0,
        worst_tolerance: 0.0,
        worst_witness: None,
        hypothesis_defects: BTreeMap::new(),
        violations: 0,
        hypothesis_failures: 0,
        series: BTreeMap::new(),
        verdict: Verdict::Pass,
        notes: vec![],
    };
    let (margin, tolerance, matrices) = match name {
        "quasinormal-shift" => {
            let n = dim.unwrap_or(3);
            if n < 3 {
                return Err(Error::Usage("quasinormal-shift needs --dim of at least 3".into()));
            }
            let v = reid_quasinormal_violation(n, profile)?;
            report.dims = vec![n];
            report.hypothesis_defects = v.defects;
            report.notes.push(
                "A = SS*, K = S: on l2 the product AK = S is quasinormal; the truncated S is not, \
                 and its defect is reported"
                    .into(),
            );
            let tol = REID_REL_TOL * v.margin.rhs.abs();
            (v.margin, tol, [("A".to_string(), v.a), ("K".to_string(), v.k)])
        }
        "squaring-noncommuting" => {
            if dim.is_some_and(|n| n != 2) {
                return Err(Error::Usage("squaring-noncommuting is a fixed 2 x 2 pair".into()));
            }
            let pair = squaring_nonmonotone_pair(profile)?;
            report.dims = vec![2];
            report.hypothesis_mode = "loewner".into();
            report.hypothesis_defects = [
                ("loewner(A <= B)".to_string(), pair.order.defect),
                ("loewner(A^2 <= B^2)".to_string(), pair.squares_order.defect),
                ("commuting(AB = BA)".to_string(), pair.commutator.defect),
            ]
            .into_iter()
            .collect();
            report
                .notes
                .push("0 <= A <= B holds but AB != BA, and A^2 <= B^2 fails".into());
            let tol = MONOTONE_REL_TOL * operator_norm(&(&pair.b * &pair.b)).max(1.0);
            (pair.margin, tol, [("A".to_string(), pair.a), ("B".to_string(), pair.b)])
        }
        other => {
            return Err(Error::Usage(format!(
                "unknown counterexample `{other}`; available: {}",
                GALLERY.join(", ")
            )))
        }
    };
    report.worst_margin = margin.margin;
    report.worst_tolerance = tolerance;
    report.violations = (margin.margin < -tolerance) as u64;
    report.verdict = if report.violations > 0 { Verdict::Violation } else { Verdict::Pass };
    report.worst_witness = Some(Witness {
        trial_index: 0,
        dim: report.dims[0],
        matrices: matrices.into_iter().collect(),
        vector: Some(margin.witness),
        lhs: margin.lhs,
        rhs: margin.rhs,
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(check: CheckKind) -> CampaignConfig {
        CampaignConfig {
            check,
            dims: "2..5".parse().unwrap(),
            trials: 40,
            vectors: 4,
            seed: 5,
            ..CampaignConfig::default()
        }
    }

    #[test]
    fn dim_range_parsing() {
        assert_eq!("4".parse::<DimRange>().unwrap(), DimRange::single(4));
        let r: DimRange = "2..10".parse().unwrap();
        assert_eq!((r.lo, r.hi), (2, 10));
        assert_eq!(r.dim_for(0), 2);
        assert_eq!(r.dim_for(9), 2);
        assert_eq!(r.dim_for(12), 5);
        for bad in ["0", "5..2", "a", "2..", ""] {
            assert!(bad.parse::<DimRange>().is_err(), "{bad}");
        }
        assert_eq!(r.to_string(), "2..10");
    }

    #[test]
    fn check_names_round_trip() {
        for kind in CheckKind::ALL {
            assert_eq!(kind.name().parse::<CheckKind>().unwrap(), kind);
        }
        assert!("reid2".parse::<CheckKind>().is_err());
    }

    #[test]
    fn every_check_passes_on_its_generator() {
        for kind in CheckKind::ALL {
            let mut c = config(kind);
            if matches!(kind, CheckKind::PowerMonotone | CheckKind::NormPower) {
                c.alpha = Some(2.5);
            }
            let report = run_check(&c).unwrap();
            assert_eq!(report.verdict, Verdict::Pass, "{kind}: {}", report.to_json());
            assert_eq!(report.violations, 0);
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let c = config(CheckKind::Reid);
        assert_eq!(run_check(&c).unwrap().to_json(), run_check(&c).unwrap().to_json());
    }

    #[test]
    fn unconstrained_reid_is_violated() {
        let c = CampaignConfig {
            mode: HypothesisMode::None,
            dims: DimRange::single(3),
            trials: 200,
            ..config(CheckKind::Reid)
        };
        let report = run_fuzz(&c).unwrap();
        assert_eq!(report.verdict, Verdict::Violation);
        assert!(report.worst_margin < -report.worst_tolerance);
    }

    #[test]
    fn non_commuting_power_is_refused() {
        let c = CampaignConfig {
            alpha: Some(2.0),
            commuting: false,
            ..config(CheckKind::PowerMonotone)
        };
        let report = run_fuzz(&c).unwrap();
        assert_eq!(report.verdict, Verdict::HypothesisError);
        assert!(report.notes[0].contains("squaring-noncommuting"), "{:?}", report.notes);
        assert_eq!(report.exit_code(), 2);
    }

    #[test]
    fn usage_errors() {
        assert!(run_check(&config(CheckKind::NormPower)).is_err());
        let mut c = config(CheckKind::Reid);
        c.trials = 0;
        assert!(run_check(&c).is_err());
        let mut c = config(CheckKind::Kittaneh);
        c.inputs.a = Some(ComplexMatrix::identity(2));
        assert!(matches!(run_check(&c), Err(Error::Usage(_))));
        let mut c = config(CheckKind::Reid);
        c.inputs.a = Some(ComplexMatrix::identity(2));
        c.inputs.k = Some(ComplexMatrix::identity(3));
        assert!(matches!(run_check(&c), Err(Error::Usage(_))));
    }

    #[test]
    fn explicit_inputs() {
        let mut c = config(CheckKind::Reid);
        c.mode = HypothesisMode::None;
        let s = crate::counterexamples::truncated_shift(3).unwrap();
        c.inputs.a = Some(&s * &s.adjoint());
        c.inputs.k = Some(s);
        c.inputs.x = Some(Vector::from_real(&[2.0, 1.0, 0.0]).unwrap());
        let report = run_check(&c).unwrap();
        assert_eq!(report.trials, 1);
        assert_eq!(report.worst_margin, -1.0);
        assert_eq!(report.verdict, Verdict::Violation);
    }

    #[test]
    fn gallery() {
        let p = ToleranceProfile::default();
        for n in [3, 8, 64] {
            let r = run_counterexample("quasinormal-shift", Some(n), &p).unwrap();
            let w = r.worst_witness.as_ref().unwrap();
            assert_eq!((w.lhs, w.rhs, r.worst_margin), (2.0, 1.0, -1.0));
            assert_eq!(r.verdict, Verdict::Violation);
        }
        let r = run_counterexample("squaring-noncommuting", None, &p).unwrap();
        assert!(r.worst_margin <= -0.3);
        assert!(run_counterexample("quasinormal-shift", Some(2), &p).is_err());
        assert!(run_counterexample("nope", None, &p).is_err());
    }

    #[test]
    fn config_json_round_trip() {
        let mut c = config(CheckKind::PowerMonotone);
        c.alpha = Some(0.3);
        let text = serde_json::to_string(&c).unwrap();
        let back: CampaignConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        let minimal: CampaignConfig = serde_json::from_str(r#"{"check": "kittaneh", "dims": "3"}"#).unwrap();
        assert_eq!(minimal.check, CheckKind::Kittaneh);
        assert_eq!(minimal.trials, 100);
    }
}
