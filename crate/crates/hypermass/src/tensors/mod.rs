//! Coordinate tensor calculus for model and perturbed metrics.
//!
//! Everything is pointwise: fields are closures over chart coordinates, and
//! derivatives come from analytic closures where the metric is conformally
//! flat and from central finite differences otherwise.

pub mod christoffel;
pub mod curvature;
pub mod fields;
pub mod hypersurface;
pub mod model_fields;
pub mod statics;

pub use christoffel::{
    christoffel, christoffel_derivs, covariant_deriv_tensor2, covariant_deriv_vector,
    covariant_hessian, divergence_tensor2, laplacian, metric_gradient,
};
pub use curvature::{curvature, CurvatureData, Riemann};
pub use fields::{MetricField, Point, ScalarField, TensorField2, VectorField, FD_FIRST, FD_SECOND};
pub use hypersurface::{hypersurface_geometry, HypersurfaceGeometry};
pub use model_fields::{lorentz_generator_field, model_metric, potential_scalar_field};
pub use statics::{boundary_static_residual, lie_derivative_metric, static_residual};
