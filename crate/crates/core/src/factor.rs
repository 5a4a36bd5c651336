//! Douglas-type factorizations `A = K B` with a contraction `K`.
//!
//! In every variant `K = A B+`, which is zero on `range(B)^perp`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::SeededSource;
use crate::linalg::{ComplexMatrix, Vector};
use crate::matfun::pinv_general;
use crate::predicates::{commute, is_psd, is_self_adjoint, loewner_leq};
use crate::spectra::{eig_hermitian, operator_norm, require_self_adjoint};
use crate::tolerance::ToleranceProfile;

/// Fixed stream used for the sampled half of the domination check.
const SAMPLE_SEED: u64 = 0x5EED_D0061A5;
const SAMPLE_VECTORS: usize = 8;
const RESIDUAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorKind {
    Plain,
    Positive,
    SelfAdjoint,
}

#[derive(Debug, Clone)]
pub struct Factorization {
    pub factor: ComplexMatrix,
    /// `||K B - A||_F`.
    pub residual: f64,
    pub factor_norm: f64,
    pub kind: FactorKind,
}

/// Checks `||Ax|| <= (1 + tol) ||Bx||` on basis and sampled vectors, then
/// certifies it for all `x` through `A*A <= (1 + tol)^2 B*B`.
pub fn certify_domination(a: &ComplexMatrix, b: &ComplexMatrix, profile: &ToleranceProfile) -> Result<()> {
    a.assert_same_dim(b, "norm domination")?;
    let n = a.dim();
    let factor = 1.0 + profile.predicate_tol;
    let slack = profile.predicate_tol * b.frobenius_norm().max(1.0);
    let mut source = SeededSource::new(SAMPLE_SEED, n as u64);
    let samples = (0..n)
        .map(|i| Vector::basis(n, i))
        .chain((0..SAMPLE_VECTORS).map(|_| source.unit_vector(n)));
    for x in samples {
        let lhs = (a * &x).norm();
        let rhs = (b * &x).norm();
        if lhs > factor * rhs + slack * x.norm() {
            return Err(Error::Hypothesis {
                hypothesis: "norm_domination(||Ax|| <= ||Bx||)".into(),
                defect: lhs - rhs,
                detail: format!("sampled vector {x:?} gives ||Ax|| = {lhs:e} > ||Bx|| = {rhs:e}"),
            });
        }
    }

    let gram_a = (&a.adjoint() * a).hermitian_part();
    let gram_b = (&b.adjoint() * b).hermitian_part().scale_real(factor * factor);
    let certificate = loewner_leq(&gram_a, &gram_b, profile)?;
    if !certificate.holds {
        let direction = eig_hermitian(&(&gram_b - &gram_a), profile)?.min_vector();
        return Err(Error::Hypothesis {
            hypothesis: "norm_domination(A*A <= B*B)".into(),
            defect: certificate.defect,
            detail: format!("violating eigendirection {direction:?}"),
        });
    }
    Ok(())
}

fn build(a: &ComplexMatrix, b: &ComplexMatrix, kind: FactorKind, profile: &ToleranceProfile) -> Result<Factorization> {
    let factor = a * &pinv_general(b, profile)?;
    let residual = (&(&factor * b) - a).frobenius_norm();
    let factor_norm = operator_norm(&factor);
    if residual > RESIDUAL_TOL * a.frobenius_norm().max(1.0) {
        return Err(Error::Numerical(format!(
            "factorization residual {residual:e} exceeds bound"
        )));
    }
    if factor_norm > 1.0 + profile.predicate_tol {
        return Err(Error::Numerical(format!(
            "constructed factor has norm {factor_norm} > 1"
        )));
    }
    Ok(Factorization {
        factor,
        residual,
        factor_norm,
        kind,
    })
}

/// Contraction `K` with `A = K B`, given `||Ax|| <= ||Bx||` for all `x`.
pub fn douglas_contraction(a: &ComplexMatrix, b: &ComplexMatrix, profile: &ToleranceProfile) -> Result<Factorization> {
    certify_domination(a, b, profile)?;
    build(a, b, FactorKind::Plain, profile)
}

/// Positive contraction `K` with `A = K B` for self-adjoint `A`, `B` with `BA >= 0`.
pub fn stochel_positive_contraction(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    profile: &ToleranceProfile,
) -> Result<Factorization> {
    a.assert_same_dim(b, "stochel_positive_contraction")?;
    require_self_adjoint(a, "A", profile)?;
    require_self_adjoint(b, "B", profile)?;
    let ba = b * a;
    let sa = is_self_adjoint(&ba, profile);
    if !sa.holds {
        return Err(Error::Hypothesis {
            hypothesis: "psd(BA)".into(),
            defect: sa.defect,
            detail: "BA is not self-adjoint, so A and B do not commute".into(),
        });
    }
    let psd = is_psd(&ba.hermitian_part(), profile)?;
    if !psd.holds {
        return Err(Error::hypothesis("psd(BA)", psd.defect));
    }
    certify_domination(a, b, profile)?;
    let f = build(a, b, FactorKind::Positive, profile)?;
    let sa = is_self_adjoint(&f.factor, profile);
    if !sa.holds {
        return Err(Error::Numerical(format!(
            "positive factor is not self-adjoint (defect {:e})",
            sa.defect
        )));
    }
    let pos = is_psd(&f.factor, profile)?;
    if !pos.holds {
        return Err(Error::Numerical(format!(
            "positive factor has eigenvalue {:e}",
            pos.defect
        )));
    }
    Ok(f)
}

/// Self-adjoint contraction `K` with `A = K B` for commuting self-adjoint `A`, `B`.
pub fn selfadjoint_contraction_variant(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    profile: &ToleranceProfile,
) -> Result<Factorization> {
    a.assert_same_dim(b, "selfadjoint_contraction_variant")?;
    require_self_adjoint(a, "A", profile)?;
    require_self_adjoint(b, "B", profile)?;
    let c = commute(a, b, profile)?;
    if !c.holds {
        return Err(Error::hypothesis("commuting(AB = BA)", c.defect));
    }
    certify_domination(a, b, profile)?;
    let f = build(a, b, FactorKind::SelfAdjoint, profile)?;
    let sa = is_self_adjoint(&f.factor, profile);
    if !sa.holds {
        return Err(Error::Numerical(format!(
            "self-adjoint factor has defect {:e}",
            sa.defect
        )));
    }
    Ok(f)
}
