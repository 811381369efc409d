//! The charge 1-form, hemisphere/corner quadrature, mass functionals and
//! mass vectors, curvature-flux cross-checks and energy-condition scanners.

pub mod charge;
pub mod conventions;
pub mod functional;
pub mod quadrature;

pub use charge::{boundary_two_form, charge_form, divergence_two_form, exactness_residual};
pub use functional::{
    data_potential_field, extrapolate, geometric_schedule, high_order_oracle, horo_invariants,
    mass_at_radius, mass_limit, mass_vector, pull_back_data, AsymptoticData, CausalClass,
    HoroInvariants, MassEstimate, MassVector, QuadOrders, RadiusRow,
};
pub use conventions::{sign_audit, NormalConventions};
pub use quadrature::{
    ball_radius_for, domain_rule, equidistant_rule, gauss_legendre, horospherical_rule,
    sphere_area, sphere_cap_area, sphere_cap_rule, unit_sphere_rule, CornerNode, HemisphereNode,
    QuadratureRule,
};
