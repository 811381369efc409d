//! The single source of truth for normal-direction signs used by every mass
//! integrand, plus the audit that catches a flipped convention.

use crate::error::Result;
use crate::models::{Chart, DomainSpec, StaticPotential};
use crate::tensors::{hypersurface_geometry, model_metric, potential_scalar_field};

/// Orientation constants. `mu`, `eta` and `vartheta` are +1.0 in the
/// reference convention (outward hemisphere normal, outward boundary normal,
/// outward corner conormal). The complement corner flag selects which
/// orientation of the corner integrand the complement-domain mass uses.
#[derive(Debug, Clone, Copy)]
pub struct NormalConventions {
    pub mu_sign: f64,
    pub eta_sign: f64,
    pub vartheta_sign: f64,
    /// Orientation of the corner term in the complement case. `false` keeps
    /// the same outward conormal as the horoball case, which is the choice
    /// that reproduces parabolic invariance.
    pub complement_corner_flip: bool,
}

impl Default for NormalConventions {
    fn default() -> Self {
        Self {
            mu_sign: 1.0,
            eta_sign: 1.0,
            vartheta_sign: 1.0,
            complement_corner_flip: false,
        }
    }
}

impl NormalConventions {
    pub fn flipped_eta() -> Self {
        Self {
            eta_sign: -1.0,
            ..Self::default()
        }
    }
}

/// Residuals of the orientation audit: with the reference convention the
/// boundary of the equidistant domain has umbilicity factor +lambda_s and
/// the horosphere has mean curvature +(n-1); a flipped normal negates them.
pub fn sign_audit(conv: &NormalConventions, n: usize) -> Result<Vec<(String, f64)>> {
    let mut out = Vec::new();

    // equidistant boundary: second form = +lambda gamma for outward eta
    let s = 0.75;
    let domain = DomainSpec::equidistant(n, s);
    let g = model_metric(Chart::Ball, n);
    let f = potential_scalar_field(Chart::Ball, &StaticPotential::basis(n, 1));
    let y = domain.axis_boundary_point().coords();
    let geo = hypersurface_geometry(&g, &f, s, &y)?;
    let lambda = conv.eta_sign * domain.lambda();
    out.push((
        "sign-audit/equidistant-umbilicity".into(),
        geo.umbilicity_residual(lambda),
    ));

    // horosphere: mean curvature +(n-1) for outward eta
    let domain = DomainSpec::horoball(n, 1.0);
    let fh = potential_scalar_field(Chart::Ball, &StaticPotential::horospherical(n));
    let yh = domain.axis_boundary_point().coords();
    let geoh = hypersurface_geometry(&g, &fh, 1.0, &yh)?;
    out.push((
        "sign-audit/horosphere-mean-curvature".into(),
        (geoh.mean_curvature * conv.eta_sign - (n as f64 - 1.0)).abs(),
    ));

    // hemisphere normal points toward larger radius
    out.push((
        "sign-audit/hemisphere-outward".into(),
        if conv.mu_sign > 0.0 { 0.0 } else { 1.0 },
    ));

    Ok(out)
}
