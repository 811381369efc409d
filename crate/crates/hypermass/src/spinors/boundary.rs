//! Boundary operators on spinors: the theta-family interpolating between the
//! chirality condition (theta = 0) and the MIT bag conditions
//! (theta = +-pi/2), with their algebraic identity suite and eigenprojections.

use nalgebra::DVector;
use num_complex::Complex64;

use super::clifford::{hinner, CliffordRep, CMatrix, CVector, I};
use crate::error::{Error, Result};

/// Assembled boundary operator kappa * omega c(nu) + tau * i c(nu) at a
/// point with unit normal direction nu (frame components).
#[derive(Debug, Clone)]
pub struct BoundaryOp {
    pub theta: f64,
    pub nu: DVector<f64>,
    matrix: CMatrix,
    dim: usize,
}

impl BoundaryOp {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn kappa(&self) -> f64 {
        self.theta.cos()
    }

    pub fn tau(&self) -> f64 {
        self.theta.sin()
    }
}

/// Build Q_theta for a unit normal nu.
pub fn q_theta(rep: &CliffordRep, theta: f64, nu: &DVector<f64>) -> Result<BoundaryOp> {
    let norm = nu.norm();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NotUnit { norm });
    }
    let cnu = rep.clifford(nu);
    let kappa = Complex64::new(theta.cos(), 0.0);
    let tau_i = Complex64::new(0.0, theta.sin());
    let matrix = rep.omega() * &cnu * kappa + &cnu * tau_i;
    Ok(BoundaryOp {
        theta,
        nu: nu.clone(),
        matrix,
        dim: rep.spinor_dim(),
    })
}

/// The horospherical (MIT bag) boundary operator +- i c(nu).
pub fn q_mit(rep: &CliffordRep, positive: bool, nu: &DVector<f64>) -> Result<BoundaryOp> {
    let theta = if positive {
        std::f64::consts::FRAC_PI_2
    } else {
        -std::f64::consts::FRAC_PI_2
    };
    q_theta(rep, theta, nu)
}

/// Residual report for the four algebraic identities of the boundary
/// operator.
#[derive(Debug, Clone, Copy)]
pub struct AlgFormReport {
    /// self-adjoint involution: max(|Q - Q^H|, |Q^2 - I|)
    pub involution: f64,
    /// {omega, Q_theta} = 0
    pub chirality_anticommutator: f64,
    /// symbol level: {c(X) c(nu), Q_theta} = 0 for a tangent basis X
    pub dirac_symbol: f64,
    /// {c(nu), Q_theta} + 2 tau i = 0
    pub normal_anticommutator: f64,
}

impl AlgFormReport {
    pub fn worst(&self) -> f64 {
        self.involution
            .max(self.chirality_anticommutator)
            .max(self.dirac_symbol)
            .max(self.normal_anticommutator)
    }
}

/// Verify the four identities at the given (theta, nu).
pub fn verify_alg_form(rep: &CliffordRep, theta: f64, nu: &DVector<f64>) -> Result<AlgFormReport> {
    let op = q_theta(rep, theta, nu)?;
    let q = op.matrix();
    let dim = rep.spinor_dim();
    let id = CMatrix::identity(dim, dim);

    let involution = (q.adjoint() - q).norm().max((q * q - &id).norm());
    let chirality_anticommutator = (rep.omega() * q + q * rep.omega()).norm();

    let cnu = rep.clifford(nu);
    let normal_anticommutator = (&cnu * q + q * &cnu + &id * (2.0 * theta.sin() * I)).norm();

    // orthonormal tangent frame perpendicular to nu
    let n = rep.n();
    let mut tangents: Vec<DVector<f64>> = Vec::with_capacity(n - 1);
    for k in 0..n {
        if tangents.len() == n - 1 {
            break;
        }
        let mut v = DVector::zeros(n);
        v[k] = 1.0;
        v -= nu * nu.dot(&v);
        for t in &tangents {
            let c = t.dot(&v);
            v -= t * c;
        }
        if v.norm() > 1e-8 {
            tangents.push(v.normalize());
        }
    }
    let mut dirac_symbol: f64 = 0.0;
    for t in &tangents {
        let sym = rep.clifford(t) * &cnu;
        dirac_symbol = dirac_symbol.max((&sym * q + q * &sym).norm());
    }

    Ok(AlgFormReport {
        involution,
        chirality_anticommutator,
        dirac_symbol,
        normal_anticommutator,
    })
}

/// Eigenprojections P_+- = (I +- Q_theta)/2 onto the +-1 eigenbundles.
pub fn projections(op: &BoundaryOp) -> (CMatrix, CMatrix) {
    let id = CMatrix::identity(op.dim, op.dim);
    let half = Complex64::new(0.5, 0.0);
    let p_plus = (&id + op.matrix()) * half;
    let p_minus = (&id - op.matrix()) * half;
    (p_plus, p_minus)
}

/// Eigenvalues of Q_theta (real, since it is self-adjoint), ascending.
pub fn eigenvalues(op: &BoundaryOp) -> Vec<f64> {
    let se = op.matrix().clone().symmetric_eigen();
    let mut ev: Vec<f64> = se.eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

/// Block form of Q_theta in the chiral basis adapted to nu: the residual of
/// Q against offdiag(-i e^{i theta}, i e^{-i theta}) blocks.
pub fn block_formula_residual(rep: &CliffordRep, theta: f64, nu: &DVector<f64>) -> Result<f64> {
    let op = q_theta(rep, theta, nu)?;
    let t = rep.chiral_basis(nu)?;
    let b = t.adjoint() * op.matrix() * &t;
    let dim = rep.spinor_dim();
    let m = dim / 2;
    let e_plus = (I * Complex64::new(theta.cos(), theta.sin())) * -1.0; // -i e^{i theta}
    let e_minus = I * Complex64::new(theta.cos(), -theta.sin()); // i e^{-i theta}
    let mut expected = CMatrix::zeros(dim, dim);
    for j in 0..m {
        expected[(j, m + j)] = e_plus;
        expected[(m + j, j)] = e_minus;
    }
    Ok((b - expected).norm())
}

/// Zeroth-order part of the boundary Dirac pairing for an exact eigenvector:
/// residual of <+-((n-1) i / 2) c(nu) psi, psi> = ((n-1) tau / 2) |psi|^2,
/// together with the worst tangential symbol pairing <c(X) c(nu) psi, psi>,
/// which must vanish by the eigenprojection swap.
pub fn boundary_dirac_identity_check(
    rep: &CliffordRep,
    theta: f64,
    nu: &DVector<f64>,
    psi: &CVector,
    positive: bool,
) -> Result<(f64, f64)> {
    let op = q_theta(rep, theta, nu)?;
    let sign = if positive { 1.0 } else { -1.0 };
    let eig = (op.matrix() * psi - psi * Complex64::new(sign, 0.0)).norm();
    if eig > 1e-9 * psi.norm() {
        return Err(Error::NotEigenvector { residual: eig });
    }
    let n = rep.n() as f64;
    let cnu = rep.clifford(nu);
    let lhs = hinner(&(&cnu * psi * (I * (sign * (n - 1.0) / 2.0))), psi);
    let rhs = Complex64::new((n - 1.0) * theta.sin() / 2.0 * psi.norm_squared(), 0.0);
    let zeroth = (lhs - rhs).norm();

    // tangential symbol part
    let ndim = rep.n();
    let mut worst: f64 = 0.0;
    for k in 0..ndim {
        let mut v = DVector::zeros(ndim);
        v[k] = 1.0;
        v -= nu * nu.dot(&v);
        if v.norm() < 1e-8 {
            continue;
        }
        let v = v.normalize();
        let pair = hinner(&(rep.clifford(&v) * &cnu * psi), psi);
        worst = worst.max(pair.norm());
    }
    Ok((zeroth, worst))
}
