//! Smooth field abstractions: scalars, vectors and symmetric 2-tensors given
//! by pointwise evaluators, with analytic derivative closures when available
//! and central finite differences otherwise.
//!
//! Two step sizes are used for the fallback: `FD_FIRST` for first derivatives
//! and `FD_SECOND` for second derivatives. The analytic path is what gives
//! model metrics their high-precision tier; the finite-difference path
//! handles arbitrary user perturbations.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub type Point = DVector<f64>;

/// Central-difference step for first derivatives.
pub const FD_FIRST: f64 = 1e-4;
/// Central-difference step for second derivatives.
pub const FD_SECOND: f64 = 1e-3;

type ScalarFn = Arc<dyn Fn(&Point) -> f64 + Send + Sync>;
type VecFn = Arc<dyn Fn(&Point) -> DVector<f64> + Send + Sync>;
type MatFn = Arc<dyn Fn(&Point) -> DMatrix<f64> + Send + Sync>;
type MatsFn = Arc<dyn Fn(&Point) -> Vec<DMatrix<f64>> + Send + Sync>;
type Mats2Fn = Arc<dyn Fn(&Point) -> Vec<Vec<DMatrix<f64>>> + Send + Sync>;

fn shifted(p: &Point, k: usize, h: f64) -> Point {
    let mut q = p.clone();
    q[k] += h;
    q
}

/// A scalar field with optional analytic gradient and Hessian.
#[derive(Clone)]
pub struct ScalarField {
    n: usize,
    eval: ScalarFn,
    grad: Option<VecFn>,
    hess: Option<MatFn>,
}

impl ScalarField {
    pub fn from_fn<F>(n: usize, eval: F) -> Self
    where
        F: Fn(&Point) -> f64 + Send + Sync + 'static,
    {
        Self {
            n,
            eval: Arc::new(eval),
            grad: None,
            hess: None,
        }
    }

    pub fn with_gradient<F>(mut self, grad: F) -> Self
    where
        F: Fn(&Point) -> DVector<f64> + Send + Sync + 'static,
    {
        self.grad = Some(Arc::new(grad));
        self
    }

    pub fn with_hessian<F>(mut self, hess: F) -> Self
    where
        F: Fn(&Point) -> DMatrix<f64> + Send + Sync + 'static,
    {
        self.hess = Some(Arc::new(hess));
        self
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn eval(&self, p: &Point) -> f64 {
        (self.eval)(p)
    }

    /// Plain coordinate gradient (partial derivatives).
    pub fn gradient(&self, p: &Point) -> DVector<f64> {
        if let Some(g) = &self.grad {
            return g(p);
        }
        let h = FD_FIRST;
        DVector::from_fn(self.n, |k, _| {
            (self.eval(&shifted(p, k, h)) - self.eval(&shifted(p, k, -h))) / (2.0 * h)
        })
    }

    /// Plain coordinate Hessian (second partials).
    pub fn coordinate_hessian(&self, p: &Point) -> DMatrix<f64> {
        if let Some(h) = &self.hess {
            return h(p);
        }
        if self.grad.is_some() {
            let h = FD_FIRST;
            let mut out = DMatrix::zeros(self.n, self.n);
            for l in 0..self.n {
                let d = (self.gradient(&shifted(p, l, h)) - self.gradient(&shifted(p, l, -h)))
                    / (2.0 * h);
                for i in 0..self.n {
                    out[(i, l)] = d[i];
                }
            }
            // symmetrize against roundoff
            return (&out + out.transpose()) * 0.5;
        }
        let h = FD_SECOND;
        let f0 = self.eval(p);
        let mut out = DMatrix::zeros(self.n, self.n);
        for k in 0..self.n {
            for l in k..self.n {
                let v = if k == l {
                    (self.eval(&shifted(p, k, h)) - 2.0 * f0 + self.eval(&shifted(p, k, -h)))
                        / (h * h)
                } else {
                    let pp = self.eval(&shifted(&shifted(p, k, h), l, h));
                    let pm = self.eval(&shifted(&shifted(p, k, h), l, -h));
                    let mp = self.eval(&shifted(&shifted(p, k, -h), l, h));
                    let mm = self.eval(&shifted(&shifted(p, k, -h), l, -h));
                    (pp - pm - mp + mm) / (4.0 * h * h)
                };
                out[(k, l)] = v;
                out[(l, k)] = v;
            }
        }
        out
    }
}

/// A vector field with optional analytic Jacobian.
#[derive(Clone)]
pub struct VectorField {
    n: usize,
    eval: VecFn,
    jac: Option<MatFn>,
}

impl VectorField {
    pub fn from_fn<F>(n: usize, eval: F) -> Self
    where
        F: Fn(&Point) -> DVector<f64> + Send + Sync + 'static,
    {
        Self {
            n,
            eval: Arc::new(eval),
            jac: None,
        }
    }

    pub fn with_jacobian<F>(mut self, jac: F) -> Self
    where
        F: Fn(&Point) -> DMatrix<f64> + Send + Sync + 'static,
    {
        self.jac = Some(Arc::new(jac));
        self
    }

    pub fn zero(n: usize) -> Self {
        Self::from_fn(n, move |_| DVector::zeros(n))
            .with_jacobian(move |_: &Point| DMatrix::zeros(n, n))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn eval(&self, p: &Point) -> DVector<f64> {
        (self.eval)(p)
    }

    /// Jacobian J[(i, k)] = d X^i / d x^k.
    pub fn jacobian(&self, p: &Point) -> DMatrix<f64> {
        if let Some(j) = &self.jac {
            return j(p);
        }
        let h = FD_FIRST;
        let mut out = DMatrix::zeros(self.n, self.n);
        for k in 0..self.n {
            let d = (self.eval(&shifted(p, k, h)) - self.eval(&shifted(p, k, -h))) / (2.0 * h);
            for i in 0..self.n {
                out[(i, k)] = d[i];
            }
        }
        out
    }
}

/// A symmetric 2-tensor field (coordinate components) with optional analytic
/// first and second derivatives.
#[derive(Clone)]
pub struct TensorField2 {
    n: usize,
    eval: MatFn,
    grad: Option<MatsFn>,
    hess: Option<Mats2Fn>,
}

impl TensorField2 {
    pub fn from_fn<F>(n: usize, eval: F) -> Self
    where
        F: Fn(&Point) -> DMatrix<f64> + Send + Sync + 'static,
    {
        Self {
            n,
            eval: Arc::new(eval),
            grad: None,
            hess: None,
        }
    }

    pub fn with_grad<F>(mut self, grad: F) -> Self
    where
        F: Fn(&Point) -> Vec<DMatrix<f64>> + Send + Sync + 'static,
    {
        self.grad = Some(Arc::new(grad));
        self
    }

    pub fn with_hess<F>(mut self, hess: F) -> Self
    where
        F: Fn(&Point) -> Vec<Vec<DMatrix<f64>>> + Send + Sync + 'static,
    {
        self.hess = Some(Arc::new(hess));
        self
    }

    pub fn zero(n: usize) -> Self {
        Self::from_fn(n, move |_| DMatrix::zeros(n, n))
            .with_grad(move |_: &Point| vec![DMatrix::zeros(n, n); n])
            .with_hess(move |_: &Point| vec![vec![DMatrix::zeros(n, n); n]; n])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn eval(&self, p: &Point) -> DMatrix<f64> {
        (self.eval)(p)
    }

    /// First derivatives: out[k][(i, j)] = d_k T_{ij}.
    pub fn derivs(&self, p: &Point) -> Vec<DMatrix<f64>> {
        if let Some(g) = &self.grad {
            return g(p);
        }
        let h = FD_FIRST;
        (0..self.n)
            .map(|k| (self.eval(&shifted(p, k, h)) - self.eval(&shifted(p, k, -h))) / (2.0 * h))
            .collect()
    }

    /// Second derivatives: out[k][l][(i, j)] = d_k d_l T_{ij}.
    pub fn second_derivs(&self, p: &Point) -> Vec<Vec<DMatrix<f64>>> {
        if let Some(hfn) = &self.hess {
            return hfn(p);
        }
        if self.grad.is_some() {
            let h = FD_FIRST;
            let mut out = vec![vec![DMatrix::zeros(self.n, self.n); self.n]; self.n];
            for l in 0..self.n {
                let dp = self.derivs(&shifted(p, l, h));
                let dm = self.derivs(&shifted(p, l, -h));
                for k in 0..self.n {
                    out[k][l] = (&dp[k] - &dm[k]) / (2.0 * h);
                }
            }
            // symmetrize the kl pair
            for k in 0..self.n {
                for l in 0..k {
                    let s = (&out[k][l] + &out[l][k]) * 0.5;
                    out[k][l] = s.clone();
                    out[l][k] = s;
                }
            }
            return out;
        }
        let h = FD_SECOND;
        let t0 = self.eval(p);
        let mut out = vec![vec![DMatrix::zeros(self.n, self.n); self.n]; self.n];
        for k in 0..self.n {
            for l in k..self.n {
                let v = if k == l {
                    (self.eval(&shifted(p, k, h)) - &t0 * 2.0 + self.eval(&shifted(p, k, -h)))
                        / (h * h)
                } else {
                    let pp = self.eval(&shifted(&shifted(p, k, h), l, h));
                    let pm = self.eval(&shifted(&shifted(p, k, h), l, -h));
                    let mp = self.eval(&shifted(&shifted(p, k, -h), l, h));
                    let mm = self.eval(&shifted(&shifted(p, k, -h), l, -h));
                    (pp - pm - mp + mm) / (4.0 * h * h)
                };
                out[k][l] = v.clone();
                out[l][k] = v;
            }
        }
        out
    }

    /// Pointwise sum; derivative closures delegate so each summand keeps its
    /// own precision tier.
    pub fn add(a: &TensorField2, b: &TensorField2) -> TensorField2 {
        assert_eq!(a.n, b.n);
        let (a1, b1) = (a.clone(), b.clone());
        let (a2, b2) = (a.clone(), b.clone());
        let (a3, b3) = (a.clone(), b.clone());
        TensorField2::from_fn(a.n, move |p| a1.eval(p) + b1.eval(p))
            .with_grad(move |p| {
                let (da, db) = (a2.derivs(p), b2.derivs(p));
                da.into_iter().zip(db).map(|(x, y)| x + y).collect()
            })
            .with_hess(move |p| {
                let (da, db) = (a3.second_derivs(p), b3.second_derivs(p));
                da.into_iter()
                    .zip(db)
                    .map(|(rx, ry)| rx.into_iter().zip(ry).map(|(x, y)| x + y).collect())
                    .collect()
            })
    }

    pub fn scale(a: &TensorField2, c: f64) -> TensorField2 {
        let (a1, a2, a3) = (a.clone(), a.clone(), a.clone());
        TensorField2::from_fn(a.n, move |p| a1.eval(p) * c)
            .with_grad(move |p| a2.derivs(p).into_iter().map(|m| m * c).collect())
            .with_hess(move |p| {
                a3.second_derivs(p)
                    .into_iter()
                    .map(|r| r.into_iter().map(|m| m * c).collect())
                    .collect()
            })
    }
}

/// A Riemannian metric: a symmetric positive-definite tensor field. The
/// positivity check runs on every `eval_checked`; degenerate metrics error
/// out rather than being regularized.
#[derive(Clone)]
pub struct MetricField {
    tensor: TensorField2,
}

impl MetricField {
    pub fn new(tensor: TensorField2) -> Self {
        Self { tensor }
    }

    pub fn dim(&self) -> usize {
        self.tensor.dim()
    }

    pub fn tensor(&self) -> &TensorField2 {
        &self.tensor
    }

    pub fn eval(&self, p: &Point) -> DMatrix<f64> {
        self.tensor.eval(p)
    }

    /// Evaluate and verify positive-definiteness (Cholesky).
    pub fn eval_checked(&self, p: &Point) -> Result<DMatrix<f64>> {
        let g = self.tensor.eval(p);
        if g.clone().cholesky().is_none() {
            return Err(Error::DegenerateMetric(format!("{:?}", p.as_slice())));
        }
        Ok(g)
    }

    pub fn inverse_at(&self, p: &Point) -> Result<DMatrix<f64>> {
        let g = self.eval_checked(p)?;
        g.clone()
            .try_inverse()
            .ok_or_else(|| Error::DegenerateMetric(format!("{:?}", p.as_slice())))
    }

    pub fn derivs(&self, p: &Point) -> Vec<DMatrix<f64>> {
        self.tensor.derivs(p)
    }

    pub fn second_derivs(&self, p: &Point) -> Vec<Vec<DMatrix<f64>>> {
        self.tensor.second_derivs(p)
    }

    /// Flat metric on R^n.
    pub fn euclidean(n: usize) -> Self {
        let eye = move |_: &Point| DMatrix::identity(n, n);
        Self::new(
            TensorField2::from_fn(n, eye)
                .with_grad(move |_: &Point| vec![DMatrix::zeros(n, n); n])
                .with_hess(move |_: &Point| vec![vec![DMatrix::zeros(n, n); n]; n]),
        )
    }

    /// Ball-chart hyperbolic metric Omega^{-2} delta, Omega = (1-|y|^2)/2,
    /// with analytic derivatives.
    pub fn ball_hyperbolic(n: usize) -> Self {
        let omega = |y: &Point| (1.0 - y.norm_squared()) / 2.0;
        let f = move |y: &Point| {
            let w = omega(y);
            DMatrix::identity(n, n) / (w * w)
        };
        let g = move |y: &Point| {
            let w = omega(y);
            (0..n)
                .map(|k| DMatrix::identity(n, n) * (2.0 * y[k] / (w * w * w)))
                .collect()
        };
        let h = move |y: &Point| {
            let w = omega(y);
            let w3 = w * w * w;
            let w4 = w3 * w;
            (0..n)
                .map(|k| {
                    (0..n)
                        .map(|l| {
                            let c = if k == l { 2.0 / w3 } else { 0.0 }
                                + 6.0 * y[k] * y[l] / w4;
                            DMatrix::identity(n, n) * c
                        })
                        .collect()
                })
                .collect()
        };
        Self::new(TensorField2::from_fn(n, f).with_grad(g).with_hess(h))
    }

    /// Half-space hyperbolic metric z_1^{-2} delta with analytic derivatives.
    pub fn half_space_hyperbolic(n: usize) -> Self {
        let f = move |z: &Point| DMatrix::identity(n, n) / (z[0] * z[0]);
        let g = move |z: &Point| {
            let mut out = vec![DMatrix::zeros(n, n); n];
            out[0] = DMatrix::identity(n, n) * (-2.0 / (z[0] * z[0] * z[0]));
            out
        };
        let h = move |z: &Point| {
            let mut out = vec![vec![DMatrix::zeros(n, n); n]; n];
            out[0][0] = DMatrix::identity(n, n) * (6.0 / z[0].powi(4));
            out
        };
        Self::new(TensorField2::from_fn(n, f).with_grad(g).with_hess(h))
    }

    /// Induced metric on the hyperboloid in spatial graph coordinates:
    /// delta_ij - x_i x_j / (1 + |x|^2), with analytic derivatives.
    pub fn hyperboloid_graph(n: usize) -> Self {
        let f = move |x: &Point| {
            let u = 1.0 / (1.0 + x.norm_squared());
            DMatrix::from_fn(n, n, |i, j| {
                (if i == j { 1.0 } else { 0.0 }) - x[i] * x[j] * u
            })
        };
        let g = move |x: &Point| {
            let u = 1.0 / (1.0 + x.norm_squared());
            (0..n)
                .map(|k| {
                    DMatrix::from_fn(n, n, |i, j| {
                        let mut v = 2.0 * x[i] * x[j] * x[k] * u * u;
                        if i == k {
                            v -= x[j] * u;
                        }
                        if j == k {
                            v -= x[i] * u;
                        }
                        v
                    })
                })
                .collect()
        };
        let h = move |x: &Point| {
            let u = 1.0 / (1.0 + x.norm_squared());
            (0..n)
                .map(|k| {
                    (0..n)
                        .map(|l| {
                            DMatrix::from_fn(n, n, |i, j| {
                                let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
                                -(d(i, k) * d(j, l) + d(j, k) * d(i, l)) * u
                                    + 2.0 * (d(i, k) * x[j] + d(j, k) * x[i]) * x[l] * u * u
                                    + 2.0
                                        * (d(i, l) * x[j] * x[k]
                                            + d(j, l) * x[i] * x[k]
                                            + d(k, l) * x[i] * x[j])
                                        * u
                                        * u
                                    - 8.0 * x[i] * x[j] * x[k] * x[l] * u * u * u
                            })
                        })
                        .collect()
                })
                .collect()
        };
        Self::new(TensorField2::from_fn(n, f).with_grad(g).with_hess(h))
    }

    /// g = base + e.
    pub fn perturbed(base: &MetricField, e: &TensorField2) -> Self {
        Self::new(TensorField2::add(&base.tensor, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn analytic_metric_derivs_match_fd() {
        let n = 3;
        for metric in [
            MetricField::ball_hyperbolic(n),
            MetricField::half_space_hyperbolic(n),
            MetricField::hyperboloid_graph(n),
        ] {
            let raw = TensorField2::from_fn(n, {
                let m = metric.clone();
                move |p| m.eval(p)
            });
            // valid in all three charts: |y| < 1 and first coordinate > 0
            let p = DVector::from_row_slice(&[0.45, 0.12, -0.25]);
            let da = metric.derivs(&p);
            let df = raw.derivs(&p);
            for k in 0..n {
                let tol = 1e-4 * (1.0 + da[k].norm());
                assert!((&da[k] - &df[k]).norm() < tol, "first derivs k={k}");
            }
            let ha = metric.second_derivs(&p);
            let hf = raw.second_derivs(&p);
            for k in 0..n {
                for l in 0..n {
                    let tol = 1e-2 * (1.0 + ha[k][l].norm());
                    assert!(
                        (&ha[k][l] - &hf[k][l]).norm() < tol,
                        "second derivs ({k},{l}): {}",
                        (&ha[k][l] - &hf[k][l]).norm()
                    );
                }
            }
        }
    }

    #[test]
    fn degenerate_metric_errors() {
        let m = MetricField::new(TensorField2::from_fn(2, |_| {
            DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0])
        }));
        assert!(m.eval_checked(&DVector::zeros(2)).is_err());
    }

    #[test]
    fn sum_keeps_analytic_parts() {
        let n = 2;
        let b = MetricField::ball_hyperbolic(n);
        let e = TensorField2::zero(n);
        let g = MetricField::perturbed(&b, &e);
        let p = DVector::from_row_slice(&[0.2, -0.1]);
        assert_abs_diff_eq!(
            (g.eval(&p) - b.eval(&p)).norm(),
            0.0,
            epsilon = 1e-15
        );
        let db = b.derivs(&p);
        let dg = g.derivs(&p);
        for k in 0..n {
            assert_abs_diff_eq!((&dg[k] - &db[k]).norm(), 0.0, epsilon = 1e-15);
        }
    }
}
