//! Bridges between the model layer and the field abstractions: chart metrics,
//! potentials as scalar fields, and Killing fields of the model.

use nalgebra::{DMatrix, DVector};

use super::fields::{MetricField, Point, ScalarField, VectorField};
use crate::models::{minkowski_metric, Chart, ModelPoint, StaticPotential};

/// The model metric in the given chart, with analytic derivatives.
pub fn model_metric(chart: Chart, n: usize) -> MetricField {
    match chart {
        Chart::Ball => MetricField::ball_hyperbolic(n),
        Chart::HalfSpace => MetricField::half_space_hyperbolic(n),
        Chart::Hyperboloid => MetricField::hyperboloid_graph(n),
    }
}

fn point_in_chart(chart: Chart, p: &Point) -> ModelPoint {
    match chart {
        Chart::Ball => ModelPoint::Ball(p.clone()),
        Chart::HalfSpace => ModelPoint::HalfSpace(p.clone()),
        Chart::Hyperboloid => ModelPoint::hyperboloid_from_spatial(p),
    }
}

/// A static potential as a scalar field on the chart coordinates, with
/// analytic gradient and Hessian.
pub fn potential_scalar_field(chart: Chart, v: &StaticPotential) -> ScalarField {
    let n = v.dim();
    let v0 = v.clone();
    let v1 = v.clone();
    let v2 = v.clone();
    let field = ScalarField::from_fn(n, move |p: &Point| {
        v0.eval_native(&point_in_chart(chart, p))
    });
    match chart {
        Chart::Ball => field
            .with_gradient(move |p: &Point| v1.ball_gradient(p))
            .with_hessian(move |p: &Point| v2.ball_hessian(p)),
        Chart::HalfSpace => field
            .with_gradient(move |p: &Point| v1.half_space_gradient(p))
            .with_hessian(move |p: &Point| v2.half_space_hessian(p)),
        Chart::Hyperboloid => {
            // V(x') = c_0 sqrt(1 + |x'|^2) + sum c_k x'_k
            let grad = move |p: &Point| {
                let x0 = (1.0 + p.norm_squared()).sqrt();
                DVector::from_fn(n, |k, _| v1.coeff(0) * p[k] / x0 + v1.coeff(k + 1))
            };
            let hess = move |p: &Point| {
                let x0 = (1.0 + p.norm_squared()).sqrt();
                DMatrix::from_fn(n, n, |i, j| {
                    v2.coeff(0)
                        * ((if i == j { 1.0 } else { 0.0 }) / x0 - p[i] * p[j] / (x0 * x0 * x0))
                })
            };
            field.with_gradient(grad).with_hessian(hess)
        }
    }
}

/// The Killing field of the model induced by a Lorentz-algebra generator
/// (matrix G with G^T eta + eta G = 0), expressed in the ball chart.
pub fn lorentz_generator_field(n: usize, generator: &DMatrix<f64>) -> VectorField {
    let eta = minkowski_metric(n);
    let residual = (generator.transpose() * &eta + &eta * generator).norm();
    assert!(
        residual < 1e-10,
        "generator is not in the Lorentz algebra (residual {residual})"
    );
    let gen = generator.clone();
    VectorField::from_fn(n, move |y: &Point| {
        let x = ModelPoint::Ball(y.clone()).ambient();
        let w = &gen * &x.0;
        let denom = 1.0 + x.0[0];
        DVector::from_fn(n, |i, _| {
            (w[i + 1] * denom - x.0[i + 1] * w[0]) / (denom * denom)
        })
    })
}
