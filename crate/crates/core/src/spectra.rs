//! Hermitian eigendecomposition and the norms and radii built on it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Complex, ComplexMatrix, Vector, ZERO};
use crate::tolerance::ToleranceProfile;

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// as the columns of `vectors`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Largest eigenvalue modulus, i.e. the operator norm of the input.
    pub fn max_abs(&self) -> f64 {
        self.min().abs().max(self.max().abs())
    }

    /// Eigenvector of the smallest eigenvalue.
    pub fn min_vector(&self) -> Vector {
        self.vectors.column(0)
    }

    pub fn max_vector(&self) -> Vector {
        self.vectors.column(self.values.len() - 1)
    }

    /// `V diag(f(values)) V*`.
    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let v = &self.vectors;
        let scaled: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = ZERO;
                for (k, &w) in scaled.iter().enumerate() {
                    if w != 0.0 {
                        acc += v[(i, k)] * v[(j, k)].conj() * w;
                    }
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
            out[(i, i)].im = 0.0;
        }
        out
    }
}

pub(crate) fn self_adjoint_defect(m: &ComplexMatrix) -> f64 {
    let n = m.dim();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            sum += (m[(i, j)] - m[(j, i)].conj()).norm_sqr();
        }
    }
    sum.sqrt()
}

pub(crate) fn require_self_adjoint(m: &ComplexMatrix, name: &str, profile: &ToleranceProfile) -> Result<()> {
    let defect = self_adjoint_defect(m);
    if defect > profile.predicate_tol * m.frobenius_norm().max(1.0) {
        return Err(Error::hypothesis(format!("self_adjoint({name})"), defect));
    }
    Ok(())
}

/// Cyclic complex Jacobi on the Hermitian part of `m`. Returns the sorted
/// decomposition and whether the off-diagonal threshold was reached.
pub(crate) fn jacobi(m: &ComplexMatrix, tol: f64, max_sweeps: u32) -> (HermitianEigen, bool) {
    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let threshold = tol * a.frobenius_norm();
    let mut converged = false;

    let sweep = |a: &mut ComplexMatrix, v: &mut ComplexMatrix| {
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                rotate(a, v, p, q);
            }
        }
    };
    for _ in 0..max_sweeps {
        if off_diagonal_norm(&a) <= threshold {
            converged = true;
            break;
        }
        sweep(&mut a, &mut v);
    }
    if !converged {
        converged = off_diagonal_norm(&a) <= threshold;
    }
    // Convergence is quadratic, so one more sweep takes a residual at the
    // threshold down to rounding level. Eigenvector accuracy, not just
    // eigenvalue accuracy, matters for A^-1 H style products.
    if converged && off_diagonal_norm(&a) > 0.0 {
        sweep(&mut a, &mut v);
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    (HermitianEigen { values, vectors }, converged)
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Annihilates `a[p][q]` with the unitary `G = W R W*`, where `W` moves the
/// phase of `a[p][q]` onto the real axis and `R` is a real plane rotation.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let n = a.dim();
    let phase = apq / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let t = 1.0 / (theta.abs() + (theta * theta + 1.0).sqrt());
        if theta < 0.0 {
            -t
        } else {
            t
        }
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let sp = phase * s;
    let sp_conj = sp.conj();

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - sp_conj * akq;
        a[(k, q)] = sp * akp + akq * c;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - sp * aqk;
        a[(q, k)] = sp_conj * apk + aqk * c;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex::new(app - t * r, 0.0);
    a[(q, q)] = Complex::new(aqq + t * r, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - sp_conj * vkq;
        v[(k, q)] = sp * vkp + vkq * c;
    }
}

/// Eigendecomposition of a self-adjoint matrix.
pub fn eig_hermitian(m: &ComplexMatrix, profile: &ToleranceProfile) -> Result<HermitianEigen> {
    require_self_adjoint(m, "M", profile)?;
    let (eigen, converged) = jacobi(m, profile.jacobi_tol, profile.jacobi_max_sweeps);
    if !converged {
        return Err(Error::Numerical(format!(
            "Jacobi iteration did not converge within {} sweeps",
            profile.jacobi_max_sweeps
        )));
    }
    Ok(eigen)
}

/// Eigendecomposition of a matrix that is Hermitian by construction (such as
/// `M*M`); rounding asymmetry is discarded.
pub(crate) fn eig_of_gram(m: &ComplexMatrix, profile: &ToleranceProfile) -> HermitianEigen {
    jacobi(m, profile.jacobi_tol, profile.jacobi_max_sweeps).0
}

/// `sup ||Mx|| / ||x||`, computed as the square root of the top eigenvalue of `M*M`.
pub fn operator_norm(m: &ComplexMatrix) -> f64 {
    if m.is_zero() {
        return 0.0;
    }
    let gram = &m.adjoint() * m;
    eig_of_gram(&gram, &ToleranceProfile::default()).max().max(0.0).sqrt()
}

/// Iterates `r_k = ||K^(2^k)||^(1/2^k)` of the Gelfand formula.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GelfandTrace {
    pub iterates: Vec<f64>,
    pub converged: bool,
    pub radius: f64,
}

/// Spectral radius by repeated squaring. Each square is rescaled to unit
/// operator norm and the logarithm of the scale is carried separately, so
/// `K^(2^60)` stays representable. Iterates are kept non-increasing, which
/// `||K^(2m)|| <= ||K^m||^2` guarantees in exact arithmetic.
pub fn spectral_radius_gelfand(k: &ComplexMatrix, profile: &ToleranceProfile) -> GelfandTrace {
    let norm0 = operator_norm(k);
    let mut iterates = vec![norm0];
    if norm0 == 0.0 {
        return GelfandTrace {
            iterates,
            converged: true,
            radius: 0.0,
        };
    }
    let mut scaled = k.scale_real(1.0 / norm0);
    let mut log_norm = norm0.ln();
    let mut exponent = 1.0_f64;
    let mut converged = false;
    // a nilpotent K of index m keeps ||K^j|| flat until j >= m <= dim,
    // so the stopping rule only applies once 2^k >= dim
    let min_squarings = k.dim().next_power_of_two().trailing_zeros();

    for step in 0..profile.gelfand_max_squarings {
        let prev = *iterates.last().unwrap();
        let square = &scaled * &scaled;
        let nu = operator_norm(&square);
        exponent *= 2.0;
        if nu == 0.0 {
            iterates.push(0.0);
            converged = true;
            break;
        }
        log_norm = 2.0 * log_norm + nu.ln();
        let r = (log_norm / exponent).exp().min(prev);
        iterates.push(r);
        scaled = square.scale_real(1.0 / nu);
        if step + 1 >= min_squarings && (r - prev).abs() <= profile.gelfand_tol * prev.max(1.0) {
            converged = true;
            break;
        }
    }
    let radius = *iterates.last().unwrap();
    GelfandTrace {
        iterates,
        converged,
        radius,
    }
}

/// Spectral pseudoinverse of a self-adjoint matrix.
pub fn pinv_hermitian(m: &ComplexMatrix, profile: &ToleranceProfile) -> Result<ComplexMatrix> {
    let eigen = eig_hermitian(m, profile)?;
    Ok(pinv_from_eigen(&eigen, profile))
}

pub(crate) fn pinv_from_eigen(eigen: &HermitianEigen, profile: &ToleranceProfile) -> ComplexMatrix {
    let cutoff = profile.rank_tol * eigen.max_abs();
    eigen.map(|l| if l.abs() <= cutoff || l == 0.0 { 0.0 } else { 1.0 / l })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counterexamples::truncated_shift;

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
        (a - b).frobenius_norm() <= tol
    }

    fn profile() -> ToleranceProfile {
        ToleranceProfile::default()
    }

    #[test]
    fn eig_diagonal() {
        let e = eig_hermitian(&ComplexMatrix::diag_real(&[9.0, 4.0]), &profile()).unwrap();
        assert_eq!(e.values, vec![4.0, 9.0]);
        let e = eig_hermitian(&ComplexMatrix::diag_real(&[4.0, 9.0]), &profile()).unwrap();
        assert_eq!(e.values, vec![4.0, 9.0]);
        assert_eq!(e.vectors, ComplexMatrix::identity(2));
    }

    #[test]
    fn eig_swap_matrix() {
        // characteristic polynomial l^2 - 1
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let e = eig_hermitian(&m, &profile()).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
        assert!(close(&e.map(|l| l), &m, 1e-14));
    }

    #[test]
    fn eig_identity() {
        for n in 1..6 {
            let e = eig_hermitian(&ComplexMatrix::identity(n), &profile()).unwrap();
            assert!(e.values.iter().all(|&l| l == 1.0));
        }
    }

    #[test]
    fn eig_complex_hermitian() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3
        let m = ComplexMatrix::from_rows(&[
            vec![Complex::new(2.0, 0.0), Complex::new(0.0, 1.0)],
            vec![Complex::new(0.0, -1.0), Complex::new(2.0, 0.0)],
        ])
        .unwrap();
        let e = eig_hermitian(&m, &profile()).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14 && (e.values[1] - 3.0).abs() < 1e-14);
        assert!(close(&e.map(|l| l), &m, 1e-13));
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(eig_hermitian(&m, &profile()), Err(Error::Hypothesis { .. })));
    }

    #[test]
    fn eig_reports_non_convergence() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 2.0, 3.0], &[2.0, 5.0, 1.0], &[3.0, 1.0, 0.0]]).unwrap();
        let tight = ToleranceProfile {
            jacobi_max_sweeps: 1,
            ..profile()
        };
        assert!(matches!(eig_hermitian(&m, &tight), Err(Error::Numerical(_))));
    }

    #[test]
    fn operator_norm_examples() {
        assert_eq!(operator_norm(&ComplexMatrix::diag_real(&[3.0, -4.0])), 4.0);
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap();
        assert_eq!(operator_norm(&m), 2.0);
        for n in 2..10 {
            assert_eq!(operator_norm(&truncated_shift(n).unwrap()), 1.0);
        }
        assert_eq!(operator_norm(&ComplexMatrix::zeros(3)), 0.0);
    }

    #[test]
    fn gelfand_nilpotent_is_exactly_zero() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let trace = spectral_radius_gelfand(&m, &profile());
        assert_eq!(trace.radius, 0.0);
        assert!(trace.converged);
        assert_eq!(trace.iterates, vec![1.0, 0.0]);
        for n in [3, 4, 5, 8, 9, 17] {
            let trace = spectral_radius_gelfand(&truncated_shift(n).unwrap(), &profile());
            assert_eq!(trace.radius, 0.0, "n = {n}");
        }
    }

    #[test]
    fn gelfand_unitary() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]).unwrap();
        let trace = spectral_radius_gelfand(&m, &profile());
        assert!(trace.converged);
        assert!(trace.iterates.iter().all(|&r| (r - 1.0).abs() < 1e-15));
    }

    #[test]
    fn gelfand_triangular() {
        let m = ComplexMatrix::from_real_rows(&[&[0.5, 10.0], &[0.0, 0.25]]).unwrap();
        let trace = spectral_radius_gelfand(&m, &profile());
        assert!(trace.converged);
        assert!((trace.radius - 0.5).abs() <= 1e-4, "{}", trace.radius);
        assert!(trace.iterates.windows(2).all(|w| w[1] <= w[0]));
        assert!(trace.radius <= operator_norm(&m));
    }

    #[test]
    fn gelfand_zero() {
        let trace = spectral_radius_gelfand(&ComplexMatrix::zeros(3), &profile());
        assert_eq!(trace.radius, 0.0);
        assert!(trace.converged);
    }

    #[test]
    fn pinv_hermitian_examples() {
        let p = pinv_hermitian(&ComplexMatrix::diag_real(&[2.0, 0.0]), &profile()).unwrap();
        assert_eq!(p, ComplexMatrix::diag_real(&[0.5, 0.0]));
        let p = pinv_hermitian(&ComplexMatrix::identity(3), &profile()).unwrap();
        assert_eq!(p, ComplexMatrix::identity(3));
        let forced = ToleranceProfile {
            rank_tol: 1e-12,
            ..profile()
        };
        let p = pinv_hermitian(&ComplexMatrix::diag_real(&[4.0, 1e-15]), &forced).unwrap();
        assert_eq!(p, ComplexMatrix::diag_real(&[0.25, 0.0]));
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(pinv_hermitian(&m, &profile()).is_err());
    }
}
