//! Residuals of the static equations and the Lie derivative of a metric.

use nalgebra::DMatrix;

use super::christoffel::{covariant_hessian, laplacian, metric_gradient};
use super::curvature::curvature;
use super::fields::{MetricField, Point, ScalarField, VectorField};
use super::hypersurface::hypersurface_geometry;
use crate::error::Result;

/// Residuals of the interior static equations at a point:
/// the tensor Hess V + lambda V g - V Ric and the scalar (Delta + lambda) V.
pub fn static_residual(
    v: &ScalarField,
    g: &MetricField,
    lambda: f64,
    p: &Point,
) -> Result<(DMatrix<f64>, f64)> {
    let val = v.eval(p);
    let hess = covariant_hessian(g, v, p)?;
    let curv = curvature(g, p)?;
    let gv = g.eval_checked(p)?;
    let tensor = &hess + &gv * (lambda * val) - &curv.ricci * val;
    let scalar = laplacian(g, v, p)? + lambda * val;
    Ok((tensor, scalar))
}

/// Residuals of the boundary conditions of a static domain on the level set
/// {f = level}: the umbilicity defect Pi - lambda gamma and the Robin defect
/// dV/d eta - lambda V.
pub fn boundary_static_residual(
    v: &ScalarField,
    g: &MetricField,
    lambda: f64,
    f: &ScalarField,
    level: f64,
    p: &Point,
) -> Result<(DMatrix<f64>, f64)> {
    let geo = hypersurface_geometry(g, f, level, p)?;
    let tensor = &geo.second_form - &geo.gamma * lambda;
    let gv = g.eval_checked(p)?;
    let grad_v = metric_gradient(g, v, p)?;
    let normal_deriv = geo.eta.dot(&(&gv * &grad_v));
    let scalar = normal_deriv - lambda * v.eval(p);
    Ok((tensor, scalar))
}

/// (L_X g)_{ij} = X^k d_k g_ij + g_kj d_i X^k + g_ik d_j X^k.
pub fn lie_derivative_metric(x: &VectorField, g: &MetricField, p: &Point) -> DMatrix<f64> {
    let n = g.dim();
    let gv = g.eval(p);
    let dg = g.derivs(p);
    let xv = x.eval(p);
    let jx = x.jacobian(p);
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut v = 0.0;
            for k in 0..n {
                v += xv[k] * dg[k][(i, j)];
                v += gv[(k, j)] * jx[(k, i)];
                v += gv[(i, k)] * jx[(k, j)];
            }
            out[(i, j)] = v;
        }
    }
    out
}
