//! Operator-class predicates and the Loewner order. Every predicate reports
//! the numerical defect it was decided on.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::ComplexMatrix;
use crate::spectra::{eig_hermitian, operator_norm, require_self_adjoint, self_adjoint_defect};
use crate::tolerance::ToleranceProfile;

/// Verdict of a predicate together with the quantity it was decided on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Predicate {
    pub holds: bool,
    pub defect: f64,
}

/// Defect is `||M - M*||_F`.
pub fn is_self_adjoint(m: &ComplexMatrix, profile: &ToleranceProfile) -> Predicate {
    let defect = self_adjoint_defect(m);
    Predicate {
        holds: defect <= profile.predicate_tol * m.frobenius_norm().max(1.0),
        defect,
    }
}

/// Defect is the smallest eigenvalue.
pub fn is_psd(m: &ComplexMatrix, profile: &ToleranceProfile) -> Result<Predicate> {
    let eigen = eig_hermitian(m, profile)?;
    let min = eigen.min();
    Ok(Predicate {
        holds: min >= -profile.predicate_tol * eigen.max_abs().max(1.0),
        defect: min,
    })
}

/// `A <= B`; defect is the smallest eigenvalue of `B - A`. The slack scales
/// with the larger of the two inputs, which bounds the rounding in `B - A`.
pub fn loewner_leq(a: &ComplexMatrix, b: &ComplexMatrix, profile: &ToleranceProfile) -> Result<Predicate> {
    a.assert_same_dim(b, "loewner_leq")?;
    require_self_adjoint(a, "A", profile)?;
    require_self_adjoint(b, "B", profile)?;
    let diff = b - a;
    let eigen = eig_hermitian(&diff, profile)?;
    let scale = eigen.max_abs().max(a.frobenius_norm()).max(b.frobenius_norm()).max(1.0);
    let min = eigen.min();
    Ok(Predicate {
        holds: min >= -profile.predicate_tol * scale,
        defect: min,
    })
}

fn self_commutator(t: &ComplexMatrix) -> ComplexMatrix {
    let t_adj = t.adjoint();
    &(&t_adj * t) - &(t * &t_adj)
}

/// `TT* <= T*T`; defect is the smallest eigenvalue of `T*T - TT*`.
pub fn is_hyponormal(t: &ComplexMatrix, profile: &ToleranceProfile) -> Result<Predicate> {
    let d = self_commutator(t).hermitian_part();
    let eigen = eig_hermitian(&d, profile)?;
    let min = eigen.min();
    Ok(Predicate {
        holds: min >= -profile.predicate_tol * t.frobenius_norm().powi(2).max(1.0),
        defect: min,
    })
}

/// Defect is `||T*T - TT*||_F`.
pub fn is_normal(t: &ComplexMatrix, profile: &ToleranceProfile) -> Predicate {
    let defect = self_commutator(t).frobenius_norm();
    Predicate {
        holds: defect <= profile.predicate_tol * t.frobenius_norm().powi(2).max(1.0),
        defect,
    }
}

/// `T` commutes with `T*T`; defect is `||T(T*T) - (T*T)T||_F`.
pub fn is_quasinormal(t: &ComplexMatrix, profile: &ToleranceProfile) -> Predicate {
    let gram = &t.adjoint() * t;
    let defect = (&(t * &gram) - &(&gram * t)).frobenius_norm();
    Predicate {
        holds: defect <= profile.predicate_tol * t.frobenius_norm().powi(3).max(1.0),
        defect,
    }
}

/// `||K|| <= 1 + tol`; defect is the operator norm.
pub fn is_contraction(k: &ComplexMatrix, profile: &ToleranceProfile) -> Predicate {
    let norm = operator_norm(k);
    Predicate {
        holds: norm <= 1.0 + profile.predicate_tol,
        defect: norm,
    }
}

/// `||AB - BA||_F` against `predicate_tol * max(1, ||A||_F ||B||_F)`.
pub fn commute(a: &ComplexMatrix, b: &ComplexMatrix, profile: &ToleranceProfile) -> Result<Predicate> {
    let defect = a.commutator(b)?.frobenius_norm();
    Ok(Predicate {
        holds: defect <= profile.predicate_tol * (a.frobenius_norm() * b.frobenius_norm()).max(1.0),
        defect,
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

    fn m(rows: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(rows).unwrap()
    }

    #[test]
    fn self_adjoint_examples() {
        assert!(is_self_adjoint(&m(&[&[1.0, 2.0], &[2.0, 1.0]]), &p()).holds);
        let nil = is_self_adjoint(&m(&[&[0.0, 1.0], &[0.0, 0.0]]), &p());
        assert!(!nil.holds);
        assert_eq!(nil.defect, 2f64.sqrt());
        let h = ComplexMatrix::from_rows(&[
            vec![Complex::new(1.0, 0.0), Complex::new(0.0, 1.0)],
            vec![Complex::new(0.0, -1.0), Complex::new(1.0, 0.0)],
        ])
        .unwrap();
        assert!(is_self_adjoint(&h, &p()).holds);
    }

    #[test]
    fn psd_and_loewner_examples() {
        assert!(is_psd(&ComplexMatrix::diag_real(&[0.0, 1.0]), &p()).unwrap().holds);
        assert!(!is_psd(&ComplexMatrix::diag_real(&[-1.0, 1.0]), &p()).unwrap().holds);
        let leq = loewner_leq(&ComplexMatrix::diag_real(&[1.0, 2.0]), &ComplexMatrix::diag_real(&[2.0, 3.0]), &p()).unwrap();
        assert!(leq.holds);
        assert_eq!(leq.defect, 1.0);
        let a = m(&[&[1.0, 1.0], &[1.0, 1.0]]);
        let b = m(&[&[2.0, 1.0], &[1.0, 1.0]]);
        let sq = loewner_leq(&(&a * &a), &(&b * &b), &p()).unwrap();
        assert!(!sq.holds);
        assert!(sq.defect < 0.0);
        assert!(loewner_leq(&m(&[&[0.0, 1.0], &[0.0, 0.0]]), &ComplexMatrix::identity(2), &p()).is_err());
        assert!(is_psd(&m(&[&[0.0, 1.0], &[0.0, 0.0]]), &p()).is_err());
    }

    #[test]
    fn hyponormal_examples() {
        let u = m(&[&[0.0, -1.0], &[1.0, 0.0]]);
        assert!(is_hyponormal(&u, &p()).unwrap().holds);
        assert!(is_normal(&u, &p()).holds);
        for n in 2..7 {
            let s = truncated_shift(n).unwrap();
            let h = is_hyponormal(&s, &p()).unwrap();
            assert!(!h.holds);
            // S*S - SS* = diag(1, 0, ..., 0, -1)
            assert_eq!(h.defect, -1.0);
        }
        let d = ComplexMatrix::diag(&[Complex::new(0.0, 1.0), Complex::new(2.0, 0.0)]);
        assert!(is_hyponormal(&d, &p()).unwrap().holds);
        assert!(is_normal(&d, &p()).holds);
    }

    #[test]
    fn quasinormal_examples() {
        let d = ComplexMatrix::diag(&[Complex::new(0.0, 1.0), Complex::new(-3.0, 1.0)]);
        assert!(is_quasinormal(&d, &p()).holds);
        assert!(is_quasinormal(&ComplexMatrix::zeros(3), &p()).holds);
        // S(S*S) = S while (S*S)S = S - E_{n,n-1}: the commutator is one unit entry.
        let q = is_quasinormal(&truncated_shift(4).unwrap(), &p());
        assert!(!q.holds);
        assert_eq!(q.defect, 1.0);
    }

    #[test]
    fn contraction_examples() {
        assert!(is_contraction(&m(&[&[0.0, 1.0], &[1.0, 0.0]]), &p()).holds);
        assert!(is_contraction(&ComplexMatrix::diag_real(&[0.5, 1.0]), &p()).holds);
        let c = is_contraction(&m(&[&[0.0, 2.0], &[0.0, 0.0]]), &p());
        assert!(!c.holds);
        assert_eq!(c.defect, 2.0);
    }

    #[test]
    fn commute_examples() {
        let a = ComplexMatrix::diag_real(&[1.0, 2.0]);
        assert!(commute(&a, &ComplexMatrix::diag_real(&[5.0, -1.0]), &p()).unwrap().holds);
        assert!(!commute(&a, &m(&[&[0.0, 1.0], &[1.0, 0.0]]), &p()).unwrap().holds);
    }
}
