//! Exact negative results: the truncated-shift Reid violation and a
//! non-commuting pair on which squaring fails to be monotone.

use crate::error::{Error, Result};
use crate::inequalities::{operator_margin, Defects, Margin, ReidSetup, Enforcement, HypothesisMode};
use crate::linalg::{Complex, ComplexMatrix, Vector};
use crate::predicates::{commute, is_hyponormal, is_normal, is_quasinormal, loewner_leq, Predicate};
use crate::tolerance::ToleranceProfile;

/// Names accepted by the `counterexample` subcommand.
pub const GALLERY: &[&str] = &["quasinormal-shift", "squaring-noncommuting"];

/// `n x n` truncation of the unilateral shift: `S e_i = e_{i+1}`, `S e_n = 0`.
pub fn truncated_shift(n: usize) -> Result<ComplexMatrix> {
    if n < 2 {
        return Err(Error::dimension("truncated_shift (minimum)", 2, n));
    }
    Ok(ComplexMatrix::from_fn(n, |i, j| {
        if i == j + 1 {
            Complex::new(1.0, 0.0)
        } else {
            Complex::new(0.0, 0.0)
        }
    }))
}

#[derive(Debug, Clone)]
pub struct ShiftViolation {
    pub a: ComplexMatrix,
    pub k: ComplexMatrix,
    pub x: Vector,
    pub margin: Margin,
    /// Defects of the truncated `AK = S`; all vanish for the shift on l2.
    pub defects: Defects,
}

/// The Reid inequality at `A = SS*`, `K = S`, `x = (2, 1, 0, ...)`: `lhs = 2`, `rhs = 1`.
///
/// On l2 the product `AK = SS*S = S` is quasinormal; after truncation it is
/// not, and the commutator `[S, S*S]` is a single unit entry, so the
/// reported quasinormality defect is 1 at every `n`.
pub fn reid_quasinormal_violation(n: usize, profile: &ToleranceProfile) -> Result<ShiftViolation> {
    if n < 3 {
        return Err(Error::dimension("reid_quasinormal_violation (minimum)", 3, n));
    }
    let s = truncated_shift(n)?;
    let a = &s * &s.adjoint();
    let mut entries = vec![0.0; n];
    entries[0] = 2.0;
    entries[1] = 1.0;
    let x = Vector::from_real(&entries)?;
    let setup = ReidSetup::new(&a, &s, HypothesisMode::None, Enforcement::Force, profile)?;
    let margin = setup.margin(&x)?;

    let ak = &a * &s;
    let mut defects = setup.defects.clone();
    defects.insert("quasinormal(AK)".into(), is_quasinormal(&ak, profile).defect);
    defects.insert("normal(AK)".into(), is_normal(&ak, profile).defect);
    defects.insert("hyponormal((AK)*)".into(), is_hyponormal(&ak.adjoint(), profile)?.defect);
    Ok(ShiftViolation {
        a,
        k: s,
        x,
        margin,
        defects,
    })
}

#[derive(Debug, Clone)]
pub struct NonmonotonePair {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    /// `A <= B`; holds.
    pub order: Predicate,
    /// `A^2 <= B^2`; fails.
    pub squares_order: Predicate,
    pub commutator: Predicate,
    /// Smallest eigenvalue of `B^2 - A^2`, `(3 - sqrt 13) / 2`.
    pub margin: Margin,
}

/// `A = [[1,1],[1,1]] <= B = [[2,1],[1,1]]` with `A^2` not below `B^2`.
pub fn squaring_nonmonotone_pair(profile: &ToleranceProfile) -> Result<NonmonotonePair> {
    let a = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]])?;
    let b = ComplexMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 1.0]])?;
    let a2 = &a * &a;
    let b2 = &b * &b;
    Ok(NonmonotonePair {
        order: loewner_leq(&a, &b, profile)?,
        squares_order: loewner_leq(&a2, &b2, profile)?,
        commutator: commute(&a, &b, profile)?,
        margin: operator_margin(&a2, &b2, profile)?,
        a,
        b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::operator_norm;

    fn p() -> ToleranceProfile {
        ToleranceProfile::default()
    }

    #[test]
    fn shift_structure() {
        assert_eq!(
            truncated_shift(2).unwrap(),
            ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]]).unwrap()
        );
        assert!(truncated_shift(1).is_err());
        for n in 2..9 {
            let s = truncated_shift(n).unwrap();
            let mut ones = vec![1.0; n];
            ones[n - 1] = 0.0;
            assert_eq!(&s.adjoint() * &s, ComplexMatrix::diag_real(&ones));
            ones.rotate_right(1);
            assert_eq!(&s * &s.adjoint(), ComplexMatrix::diag_real(&ones));
            assert_eq!(operator_norm(&s), 1.0);
        }
    }

    #[test]
    fn shift_violation_is_exact() {
        for n in [3, 4, 8, 17, 64] {
            let v = reid_quasinormal_violation(n, &p()).unwrap();
            assert_eq!((v.margin.lhs, v.margin.rhs, v.margin.margin), (2.0, 1.0, -1.0));
            assert_eq!(operator_norm(&v.k), 1.0);
            assert_eq!(v.defects["quasinormal(AK)"], 1.0);
            assert_eq!(v.defects["normal(AK)"], 2f64.sqrt());
        }
        assert!(reid_quasinormal_violation(2, &p()).is_err());
    }

    #[test]
    fn squaring_pair() {
        let pair = squaring_nonmonotone_pair(&p()).unwrap();
        assert_eq!(&pair.b - &pair.a, ComplexMatrix::diag_real(&[1.0, 0.0]));
        assert!(pair.order.holds);
        assert!(!pair.squares_order.holds);
        assert!(!pair.commutator.holds);
        let b2_minus_a2 = &(&pair.b * &pair.b) - &(&pair.a * &pair.a);
        assert_eq!(b2_minus_a2, ComplexMatrix::from_real_rows(&[&[3.0, 1.0], &[1.0, 0.0]]).unwrap());
        let exact = (3.0 - 13f64.sqrt()) / 2.0;
        assert!((pair.margin.margin - exact).abs() < 1e-14, "{}", pair.margin.margin);
    }
}
