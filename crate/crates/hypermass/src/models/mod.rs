//! Coordinate models of hyperbolic n-space, static potentials and isometries.
//!
//! The three charts are the hyperboloid in Minkowski space, the Poincare ball
//! and the upper half-space. The ball is the canonical internal chart
//! (bounded coordinates); the hyperboloid and half-space are views of it.
//! Dimension n is a runtime parameter with 2 <= n <= 6.

mod charts;
mod domain;
mod isometries;
mod minkowski;
mod potentials;

pub use charts::{ball_radial_coordinate, Chart, ModelPoint};
pub use domain::{DomainKind, DomainSpec};
pub use isometries::{
    random_lorentz_s, random_orthogonal, rho_action_h, rho_action_s, LorentzIsometry,
    ParabolicElement, RhoVariant,
};
pub use minkowski::{minkowski_inner, minkowski_metric, MinkowskiVector};
pub use potentials::{grad_potential_inner, StaticPotential};

/// Inclusive dimension bounds supported by the model layer.
pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 6;

pub(crate) fn check_dim(n: usize) {
    assert!(
        (MIN_DIM..=MAX_DIM).contains(&n),
        "dimension n = {n} outside supported range {MIN_DIM}..={MAX_DIM}"
    );
}
