//! Concrete complex representations of the Clifford algebra in even
//! dimension, built by iterated 2x2 tensor products with skew-Hermitian
//! normalization c(e_i)^2 = -1.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub(crate) const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
pub(crate) const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Hermitian inner product, conjugate-linear in the second slot.
pub fn hinner(a: &CVector, b: &CVector) -> Complex64 {
    b.dotc(a)
}

fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

fn pauli(k: usize) -> CMatrix {
    let z = Complex64::new(0.0, 0.0);
    match k {
        1 => CMatrix::from_row_slice(2, 2, &[z, ONE, ONE, z]),
        2 => CMatrix::from_row_slice(2, 2, &[z, -I, I, z]),
        3 => CMatrix::from_row_slice(2, 2, &[ONE, z, z, -ONE]),
        _ => unreachable!(),
    }
}

/// Gamma matrices, chirality operator and derived helpers for Cl(n), n even.
#[derive(Debug, Clone)]
pub struct CliffordRep {
    n: usize,
    dim: usize,
    gammas: Vec<CMatrix>,
    omega: CMatrix,
}

impl CliffordRep {
    /// Build the representation; n must be even and between 2 and 6.
    pub fn build(n: usize) -> Result<Self> {
        if n % 2 != 0 {
            return Err(Error::OddDimension(n));
        }
        crate::models::check_dim(n);
        let k = n / 2;
        let dim = 1 << k;

        // Hermitian generators E_i with E_i E_j + E_j E_i = 2 delta_ij:
        // slot a of the tensor product carries sigma_1 or sigma_2, earlier
        // slots carry sigma_3, later slots the identity.
        let mut gammas = Vec::with_capacity(n);
        for i in 0..n {
            let slot = i / 2;
            let which = if i % 2 == 0 { 1 } else { 2 };
            let mut m = CMatrix::identity(1, 1);
            for a in 0..k {
                let factor = if a < slot {
                    pauli(3)
                } else if a == slot {
                    pauli(which)
                } else {
                    CMatrix::identity(2, 2)
                };
                m = kron(&m, &factor);
            }
            // skew-Hermitian normalization
            gammas.push(m * I);
        }

        // omega = i^{n/2} gamma_1 ... gamma_n
        let mut omega = CMatrix::identity(dim, dim) * I.powu(k as u32);
        for g in &gammas {
            omega = omega * g;
        }

        Ok(Self {
            n,
            dim,
            gammas,
            omega,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Spinor-space dimension 2^{n/2}.
    pub fn spinor_dim(&self) -> usize {
        self.dim
    }

    /// Clifford generator for the i-th frame direction, 0-based.
    pub fn gamma(&self, i: usize) -> &CMatrix {
        &self.gammas[i]
    }

    /// The chirality operator (complex volume element).
    pub fn omega(&self) -> &CMatrix {
        &self.omega
    }

    /// Clifford multiplication by a real vector of frame components.
    pub fn clifford(&self, v: &DVector<f64>) -> CMatrix {
        assert_eq!(v.len(), self.n);
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for (i, g) in self.gammas.iter().enumerate() {
            if v[i] != 0.0 {
                m += g * Complex64::new(v[i], 0.0);
            }
        }
        m
    }

    /// Residuals of the construction invariants: worst violation of the
    /// anticommutation relations, skew-Hermitian property, omega^2 = I and
    /// the omega anticommutation.
    pub fn invariant_residuals(&self) -> [f64; 4] {
        let id = CMatrix::identity(self.dim, self.dim);
        let mut anticomm: f64 = 0.0;
        let mut skew: f64 = 0.0;
        for i in 0..self.n {
            skew = skew.max((self.gammas[i].adjoint() + &self.gammas[i]).norm());
            for j in 0..self.n {
                let target = if i == j { -2.0 } else { 0.0 };
                let ac = &self.gammas[i] * &self.gammas[j] + &self.gammas[j] * &self.gammas[i]
                    - &id * Complex64::new(target, 0.0);
                anticomm = anticomm.max(ac.norm());
            }
        }
        let omega_sq = (&self.omega * &self.omega - &id).norm();
        let mut omega_anti: f64 = 0.0;
        for g in &self.gammas {
            omega_anti = omega_anti.max((&self.omega * g + g * &self.omega).norm());
        }
        [anticomm, skew, omega_sq, omega_anti]
    }

    /// Orthonormal basis of the +1 chiral half. The construction makes omega
    /// diagonal with entries +-1, so the basis consists of standard basis
    /// vectors.
    pub fn chiral_plus_basis(&self) -> Vec<CVector> {
        let mut out = Vec::with_capacity(self.dim / 2);
        for idx in 0..self.dim {
            let d = self.omega[(idx, idx)];
            if (d - ONE).norm() < 1e-12 {
                let mut v = CVector::zeros(self.dim);
                v[idx] = ONE;
                out.push(v);
            }
        }
        assert_eq!(out.len(), self.dim / 2, "chirality operator not diagonal");
        out
    }

    /// Unitary change of basis into the split adapted to the normal
    /// direction nu: columns (v_1..v_m, w_1..w_m) with w_j = i c(nu) v_j. In
    /// this basis the chirality operator is diag(I, -I) and c(nu) is
    /// -i * offdiag(I, I).
    pub fn chiral_basis(&self, nu: &DVector<f64>) -> Result<CMatrix> {
        let norm = nu.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotUnit { norm });
        }
        let cnu = self.clifford(nu);
        let vs = self.chiral_plus_basis();
        let m = self.dim / 2;
        let mut t = CMatrix::zeros(self.dim, self.dim);
        for (j, v) in vs.iter().enumerate() {
            t.set_column(j, v);
            let w = &cnu * v * I;
            t.set_column(m + j, &w);
        }
        Ok(t)
    }
}
