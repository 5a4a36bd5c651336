//! Spectral matrix functions: positive square root, modulus, fractional
//! powers, polar decomposition and the general pseudoinverse.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::spectra::{eig_hermitian, eig_of_gram, pinv_from_eigen, HermitianEigen};
use crate::tolerance::ToleranceProfile;

/// A strictly positive, finite exponent.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct PowerExponent(f64);

impl PowerExponent {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 0.0 {
            Ok(PowerExponent(alpha))
        } else {
            Err(Error::InvalidArgument(format!(
                "exponent must be positive and finite, got {alpha}"
            )))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for PowerExponent {
    type Error = Error;
    fn try_from(alpha: f64) -> Result<Self> {
        PowerExponent::new(alpha)
    }
}

impl From<PowerExponent> for f64 {
    fn from(alpha: PowerExponent) -> f64 {
        alpha.0
    }
}

/// `T = U |T|` with `U` vanishing on `ker |T|`.
#[derive(Debug, Clone)]
pub struct PolarParts {
    pub isometry_part: ComplexMatrix,
    pub modulus: ComplexMatrix,
}

/// Eigendecomposition of a PSD matrix with noise-level negative eigenvalues
/// zeroed. Anything below `-predicate_tol * max(1, ||A||)` is a hypothesis failure.
pub(crate) fn psd_eigen(a: &ComplexMatrix, name: &str, profile: &ToleranceProfile) -> Result<HermitianEigen> {
    let mut eigen = eig_hermitian(a, profile)?;
    clamp_psd(&mut eigen, name, profile)?;
    Ok(eigen)
}

fn clamp_psd(eigen: &mut HermitianEigen, name: &str, profile: &ToleranceProfile) -> Result<()> {
    let floor = -profile.predicate_tol * eigen.max_abs().max(1.0);
    let min = eigen.min();
    if min < floor {
        return Err(Error::Hypothesis {
            hypothesis: format!("psd({name})"),
            defect: min,
            detail: format!("eigenvalue {min:e} below clamp floor {floor:e}"),
        });
    }
    for l in &mut eigen.values {
        if *l < 0.0 {
            *l = 0.0;
        }
    }
    Ok(())
}

/// The unique PSD square root.
pub fn sqrt_psd(a: &ComplexMatrix, profile: &ToleranceProfile) -> Result<ComplexMatrix> {
    Ok(psd_eigen(a, "A", profile)?.map(f64::sqrt))
}

/// `|T| = (T*T)^(1/2)`.
pub fn abs_value(t: &ComplexMatrix, profile: &ToleranceProfile) -> Result<ComplexMatrix> {
    Ok(abs_eigen(t, profile)?.map(f64::sqrt))
}

/// Eigendecomposition of `T*T` with eigenvalues clamped at zero.
fn abs_eigen(t: &ComplexMatrix, profile: &ToleranceProfile) -> Result<HermitianEigen> {
    let gram = &t.adjoint() * t;
    let mut eigen = eig_of_gram(&gram, profile);
    clamp_psd(&mut eigen, "T*T", profile)?;
    Ok(eigen)
}

/// `A^alpha` through the spectral theorem.
pub fn power_psd(a: &ComplexMatrix, alpha: PowerExponent, profile: &ToleranceProfile) -> Result<ComplexMatrix> {
    let alpha = alpha.get();
    let eigen = psd_eigen(a, "A", profile)?;
    if alpha == 1.0 {
        return Ok(eigen.map(|l| l));
    }
    if alpha == 0.5 {
        return Ok(eigen.map(f64::sqrt));
    }
    Ok(eigen.map(|l| if l == 0.0 { 0.0 } else { l.powf(alpha) }))
}

/// Polar decomposition with `U = T pinv(|T|)`.
pub fn polar_decompose(t: &ComplexMatrix, profile: &ToleranceProfile) -> Result<PolarParts> {
    let eigen = abs_eigen(t, profile)?;
    let root = HermitianEigen {
        values: eigen.values.iter().map(|l| l.sqrt()).collect(),
        vectors: eigen.vectors,
    };
    let modulus = root.map(|l| l);
    let isometry_part = t * &pinv_from_eigen(&root, profile);
    Ok(PolarParts {
        isometry_part,
        modulus,
    })
}

/// Moore-Penrose pseudoinverse `B+ = pinv(B*B) B*`.
pub fn pinv_general(b: &ComplexMatrix, profile: &ToleranceProfile) -> Result<ComplexMatrix> {
    let b_adj = b.adjoint();
    let gram = &b_adj * b;
    let eigen = eig_of_gram(&gram, profile);
    Ok(&pinv_from_eigen(&eigen, profile) * &b_adj)
}
