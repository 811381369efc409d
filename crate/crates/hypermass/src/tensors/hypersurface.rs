//! Geometry of a level-set hypersurface at a point: unit normals, induced
//! metric, second fundamental form and mean curvature.
//!
//! Conventions: eta is the outward unit normal (the direction of increasing
//! defining function, domains being sublevel sets), nu = -eta points inward,
//! and Pi(X, Y) = -<nabla_X Y, eta> for tangent X, Y. With these signs the
//! boundary of a round unit ball in flat space has shape operator equal to
//! the identity.

use nalgebra::{DMatrix, DVector};

use super::christoffel::{covariant_hessian, metric_gradient};
use super::fields::{MetricField, Point, ScalarField};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct HypersurfaceGeometry {
    /// Outward unit normal, coordinate components.
    pub eta: DVector<f64>,
    /// Inward unit normal, nu = -eta.
    pub nu: DVector<f64>,
    /// g-orthonormal tangent basis, columns span the tangent space.
    pub tangent_basis: DMatrix<f64>,
    /// Induced metric in the tangent basis (identity by construction).
    pub gamma: DMatrix<f64>,
    /// Second fundamental form in the tangent basis.
    pub second_form: DMatrix<f64>,
    /// Mean curvature H = tr_gamma Pi.
    pub mean_curvature: f64,
    /// |grad f|_g at the point.
    pub grad_norm: f64,
}

impl HypersurfaceGeometry {
    /// Max-norm of Pi - lambda * gamma, the umbilicity defect at factor
    /// lambda.
    pub fn umbilicity_residual(&self, lambda: f64) -> f64 {
        (&self.second_form - &self.gamma * lambda).amax()
    }
}

/// Geometry of {f = level} at p in the metric g.
pub fn hypersurface_geometry(
    g: &MetricField,
    f: &ScalarField,
    level: f64,
    p: &Point,
) -> Result<HypersurfaceGeometry> {
    let n = g.dim();
    let fv = f.eval(p);
    if (fv - level).abs() > 1e-6 * (1.0 + level.abs()) {
        return Err(Error::OutsideChart(format!(
            "point not on level set: f = {fv}, level = {level}"
        )));
    }
    let gv = g.eval_checked(p)?;
    let grad_vec = metric_gradient(g, f, p)?;
    let grad_norm = (grad_vec.dot(&(&gv * &grad_vec))).sqrt();
    if grad_norm < 1e-10 {
        return Err(Error::CriticalPoint { grad_norm });
    }
    let eta = &grad_vec / grad_norm;

    // g-orthonormal tangent basis by projecting coordinate directions
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(n - 1);
    for k in 0..n {
        if basis.len() == n - 1 {
            break;
        }
        let mut v = DVector::zeros(n);
        v[k] = 1.0;
        // remove normal component
        let vn = eta.dot(&(&gv * &v));
        v -= &eta * vn;
        // Gram-Schmidt against accepted tangents
        for t in &basis {
            let c = t.dot(&(&gv * &v));
            v -= t * c;
        }
        let norm = v.dot(&(&gv * &v)).sqrt();
        if norm > 1e-8 {
            basis.push(v / norm);
        }
    }
    assert_eq!(basis.len(), n - 1, "tangent basis construction failed");
    let mut tangent_basis = DMatrix::zeros(n, n - 1);
    for (a, t) in basis.iter().enumerate() {
        tangent_basis.set_column(a, t);
    }

    let gamma = tangent_basis.transpose() * &gv * &tangent_basis;

    // Pi(X, Y) = Hess f (X, Y) / |grad f|
    let hess = covariant_hessian(g, f, p)?;
    let second_form = tangent_basis.transpose() * &hess * &tangent_basis / grad_norm;
    let gamma_inv = gamma
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::DegenerateMetric("induced metric".into()))?;
    let mean_curvature = (gamma_inv * &second_form).trace();

    Ok(HypersurfaceGeometry {
        nu: -&eta,
        eta,
        tangent_basis,
        gamma,
        second_form,
        mean_curvature,
        grad_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn unit_sphere_in_flat_space_has_identity_shape() {
        let n = 3;
        let g = MetricField::euclidean(n);
        let f = ScalarField::from_fn(n, |p: &Point| p.norm());
        let p = DVector::from_row_slice(&[0.6, 0.64, 0.48]);
        let p = &p / p.norm();
        let geo = hypersurface_geometry(&g, &f, 1.0, &p).unwrap();
        assert_abs_diff_eq!(geo.umbilicity_residual(1.0), 0.0, epsilon = 1e-6);
        assert_abs_diff_eq!(geo.mean_curvature, 2.0, epsilon = 1e-6);
        // outward means radial here
        assert!((geo.eta - p).norm() < 1e-6);
    }

    #[test]
    fn critical_point_is_rejected() {
        let n = 2;
        let g = MetricField::euclidean(n);
        let f = ScalarField::from_fn(n, |p: &Point| p.norm_squared());
        let err = hypersurface_geometry(&g, &f, 0.0, &DVector::zeros(n));
        assert!(matches!(err, Err(Error::CriticalPoint { .. })));
    }
}
