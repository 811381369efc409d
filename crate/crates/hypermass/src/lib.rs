//! Numerical geometric analysis for asymptotically hyperbolic metrics with a
//! non-compact umbilic boundary.
//!
//! The crate is organized around five layers:
//!
//! - [`models`]: the three coordinate models of hyperbolic n-space
//!   (hyperboloid, Poincare ball, upper half-space), the equidistant and
//!   horospherical domains, static potentials, and the isometries acting on
//!   them.
//! - [`tensors`]: pointwise coordinate tensor calculus (Christoffel symbols,
//!   curvature, hypersurface geometry, static-equation residuals) with an
//!   analytic path for conformally flat metrics and a finite-difference path
//!   for arbitrary perturbations.
//! - [`spinors`]: complex Clifford representations for even n, the
//!   theta-interpolated boundary operators between the chirality and MIT bag
//!   conditions, and the explicit imaginary Killing spinors of the ball model.
//! - [`mass`]: the charge 1-form, hemisphere/corner quadrature, the mass
//!   functionals and mass vectors for equidistant and horospherical models,
//!   energy-condition scanners, and the curvature-flux cross-check formulas.
//! - [`masslab`]: experiment configuration, perturbation generators, and the
//!   invariant-suite/mass/sweep runners behind the `masslab` binary.
//!
//! Everything is pointwise evaluation of smooth fields; there is no mesh, no
//! symbolic algebra, and no PDE solve. All types are immutable values after
//! construction and safe to evaluate from any number of threads.

pub mod error;
pub mod mass;
pub mod masslab;
pub mod models;
pub mod spinors;
pub mod tensors;

pub use error::{Error, Result};
