//! Clifford representations, theta-boundary operators and imaginary Killing
//! spinors. Restricted to even n; the odd-dimensional doubling construction
//! is out of scope.

pub mod boundary;
pub mod clifford;
pub mod killing;

pub use boundary::{
    block_formula_residual, boundary_dirac_identity_check, eigenvalues, projections, q_mit,
    q_theta, verify_alg_form, AlgFormReport, BoundaryOp,
};
pub use clifford::{hinner, CliffordRep, CMatrix, CVector};
pub use killing::{
    boundary_condition_residual, boundary_killing_residual, boundary_normal_frame,
    boundary_points_sample, gradient_direction_residual, killing_derivative,
    killing_frame_gradient_sq, killing_residual, killing_space_basis, killing_spinor, q_phi,
    spin_connection, type_i_residual, v_phi, v_phi_coefficients, v_phi_ratio, witten_residual,
    BoundaryFlavor, KillingSign, KillingSpinorSeed,
};
