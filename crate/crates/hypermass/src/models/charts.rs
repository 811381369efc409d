//! The three charts of hyperbolic n-space and the conversions between them.
//!
//! Conventions:
//! - hyperboloid: upper sheet of <x,x>_{1,n} = -1 in R^{1,n};
//! - ball: {|y| < 1} with metric (2/(1-|y|^2))^2 delta;
//! - half-space: {z_1 > 0} with metric z_1^{-2} delta.
//!
//! The hyperboloid <-> ball map is central projection from (-1, 0, ..., 0),
//! which sends the vertex to the ball origin and the level set of the first
//! spatial coordinate function to the corresponding ball level set. The
//! ball <-> half-space map is the inversion centered at the boundary point
//! (1, 0, ..., 0). On the hyperboloid, points carry their full ambient
//! coordinates; Jacobians are taken with respect to the spatial graph
//! coordinates (x_1, ..., x_n).

use nalgebra::{DMatrix, DVector};

use super::minkowski::{minkowski_inner, MinkowskiVector};
use crate::error::{Error, Result};

const HYPERBOLOID_TOL: f64 = 1e-9;

/// Conformal factor of the ball metric, Omega(y) = (1 - |y|^2)/2.
pub(crate) fn omega(y: &DVector<f64>) -> f64 {
    (1.0 - y.norm_squared()) / 2.0
}

/// Hyperboloid radial coordinate r = |x'| expressed in the ball chart,
/// r(y) = 2|y| / (1 - |y|^2).
pub fn ball_radial_coordinate(y: &DVector<f64>) -> f64 {
    2.0 * y.norm() / (1.0 - y.norm_squared())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chart {
    Hyperboloid,
    Ball,
    HalfSpace,
}

/// A point of hyperbolic n-space tagged with its chart.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelPoint {
    Hyperboloid(MinkowskiVector),
    Ball(DVector<f64>),
    HalfSpace(DVector<f64>),
}

impl ModelPoint {
    pub fn hyperboloid(x: MinkowskiVector) -> Result<Self> {
        let q = minkowski_inner(&x, &x);
        if (q + 1.0).abs() > HYPERBOLOID_TOL || x.0[0] <= 0.0 {
            return Err(Error::OutsideChart(format!(
                "<x,x> = {q}, x_0 = {}",
                x.0[0]
            )));
        }
        Ok(Self::Hyperboloid(x))
    }

    pub fn ball(y: DVector<f64>) -> Result<Self> {
        if y.norm() >= 1.0 {
            return Err(Error::OutsideChart(format!("|y| = {} >= 1", y.norm())));
        }
        Ok(Self::Ball(y))
    }

    pub fn half_space(z: DVector<f64>) -> Result<Self> {
        if z[0] <= 0.0 {
            return Err(Error::OutsideChart(format!("z_1 = {} <= 0", z[0])));
        }
        Ok(Self::HalfSpace(z))
    }

    /// Lift spatial graph coordinates x' to the hyperboloid.
    pub fn hyperboloid_from_spatial(xp: &DVector<f64>) -> Self {
        let x0 = (1.0 + xp.norm_squared()).sqrt();
        let mut c = Vec::with_capacity(xp.len() + 1);
        c.push(x0);
        c.extend(xp.iter().copied());
        Self::Hyperboloid(MinkowskiVector::new(c))
    }

    pub fn chart(&self) -> Chart {
        match self {
            Self::Hyperboloid(_) => Chart::Hyperboloid,
            Self::Ball(_) => Chart::Ball,
            Self::HalfSpace(_) => Chart::HalfSpace,
        }
    }

    /// Spatial dimension n.
    pub fn dim(&self) -> usize {
        match self {
            Self::Hyperboloid(x) => x.spatial_dim(),
            Self::Ball(y) | Self::HalfSpace(y) => y.len(),
        }
    }

    /// Chart coordinates as a plain vector: n-dimensional for ball and
    /// half-space, the spatial part (x_1, ..., x_n) for the hyperboloid.
    pub fn coords(&self) -> DVector<f64> {
        match self {
            Self::Hyperboloid(x) => DVector::from_iterator(
                x.spatial_dim(),
                x.0.iter().skip(1).copied(),
            ),
            Self::Ball(y) | Self::HalfSpace(y) => y.clone(),
        }
    }

    /// Full hyperboloid coordinates (x_0, ..., x_n) of this point.
    pub fn ambient(&self) -> MinkowskiVector {
        match self.convert(Chart::Hyperboloid).expect("interior point") {
            Self::Hyperboloid(x) => x,
            _ => unreachable!(),
        }
    }

    pub fn convert(&self, target: Chart) -> Result<Self> {
        if self.chart() == target {
            return Ok(self.clone());
        }
        match (self, target) {
            (Self::Hyperboloid(x), Chart::Ball) => Ok(Self::Ball(hyperboloid_to_ball(x))),
            (Self::Ball(y), Chart::Hyperboloid) => {
                Ok(Self::Hyperboloid(ball_to_hyperboloid(y)))
            }
            (Self::Ball(y), Chart::HalfSpace) => ball_to_half_space(y).map(Self::HalfSpace),
            (Self::HalfSpace(z), Chart::Ball) => half_space_to_ball(z).map(Self::Ball),
            (Self::Hyperboloid(x), Chart::HalfSpace) => {
                ball_to_half_space(&hyperboloid_to_ball(x)).map(Self::HalfSpace)
            }
            (Self::HalfSpace(z), Chart::Hyperboloid) => {
                half_space_to_ball(z).map(|y| Self::Hyperboloid(ball_to_hyperboloid(&y)))
            }
            _ => unreachable!("same-chart case handled above"),
        }
    }

    /// Jacobian of the conversion map from this point's chart coordinates to
    /// the target chart coordinates, evaluated at this point.
    pub fn convert_jacobian(&self, target: Chart) -> Result<DMatrix<f64>> {
        let n = self.dim();
        if self.chart() == target {
            return Ok(DMatrix::identity(n, n));
        }
        match (self, target) {
            (Self::Hyperboloid(x), Chart::Ball) => Ok(jac_hyperboloid_to_ball(x)),
            (Self::Ball(y), Chart::Hyperboloid) => Ok(jac_ball_to_hyperboloid(y)),
            (Self::Ball(y), Chart::HalfSpace) => {
                if (y.clone() - unit_e1(n)).norm() == 0.0 {
                    return Err(Error::OutsideChart("inversion center".into()));
                }
                Ok(jac_ball_to_half_space(y))
            }
            (Self::HalfSpace(z), Chart::Ball) => Ok(jac_half_space_to_ball(z)),
            (Self::Hyperboloid(x), Chart::HalfSpace) => {
                let y = hyperboloid_to_ball(x);
                Ok(jac_ball_to_half_space(&y) * jac_hyperboloid_to_ball(x))
            }
            (Self::HalfSpace(z), Chart::Hyperboloid) => {
                let y = half_space_to_ball(z)?;
                Ok(jac_ball_to_hyperboloid(&y) * jac_half_space_to_ball(z))
            }
            _ => unreachable!(),
        }
    }
}

fn unit_e1(n: usize) -> DVector<f64> {
    let mut e = DVector::zeros(n);
    e[0] = 1.0;
    e
}

fn hyperboloid_to_ball(x: &MinkowskiVector) -> DVector<f64> {
    let n = x.spatial_dim();
    let denom = 1.0 + x.0[0];
    DVector::from_iterator(n, (1..=n).map(|i| x.0[i] / denom))
}

fn ball_to_hyperboloid(y: &DVector<f64>) -> MinkowskiVector {
    let w = omega(y);
    let mut c = Vec::with_capacity(y.len() + 1);
    c.push((1.0 + y.norm_squared()) / (2.0 * w));
    c.extend(y.iter().map(|&yi| yi / w));
    MinkowskiVector::new(c)
}

fn ball_to_half_space(y: &DVector<f64>) -> Result<DVector<f64>> {
    let n = y.len();
    let d = (unit_e1(n) - y).norm_squared();
    if d == 0.0 {
        return Err(Error::OutsideChart("inversion center y = e_1".into()));
    }
    let mut z = DVector::zeros(n);
    z[0] = (1.0 - y.norm_squared()) / d;
    for j in 1..n {
        z[j] = 2.0 * y[j] / d;
    }
    if z[0] <= 0.0 {
        return Err(Error::OutsideChart(format!("z_1 = {} <= 0", z[0])));
    }
    Ok(z)
}

fn half_space_to_ball(z: &DVector<f64>) -> Result<DVector<f64>> {
    if z[0] <= 0.0 {
        return Err(Error::OutsideChart(format!("z_1 = {} <= 0", z[0])));
    }
    let n = z.len();
    let d = (z.clone() + unit_e1(n)).norm_squared();
    let mut y = DVector::zeros(n);
    y[0] = (z.norm_squared() - 1.0) / d;
    for j in 1..n {
        y[j] = 2.0 * z[j] / d;
    }
    if y.norm() >= 1.0 {
        return Err(Error::OutsideChart(format!("|y| = {} >= 1", y.norm())));
    }
    Ok(y)
}

/// d(ball)/d(x') at x, with x_0 = sqrt(1 + |x'|^2) on the hyperboloid.
fn jac_hyperboloid_to_ball(x: &MinkowskiVector) -> DMatrix<f64> {
    let n = x.spatial_dim();
    let x0 = x.0[0];
    let denom = 1.0 + x0;
    let mut j = DMatrix::zeros(n, n);
    for i in 0..n {
        for k in 0..n {
            let mut v = if i == k { 1.0 / denom } else { 0.0 };
            // d/dx'_k of x_0 = x'_k / x_0
            v -= x.0[i + 1] * x.0[k + 1] / (x0 * denom * denom);
            j[(i, k)] = v;
        }
    }
    j
}

/// d(x')/d(y) at y, where x' = y / Omega(y).
fn jac_ball_to_hyperboloid(y: &DVector<f64>) -> DMatrix<f64> {
    let n = y.len();
    let w = omega(y);
    let mut j = DMatrix::zeros(n, n);
    for i in 0..n {
        for k in 0..n {
            let mut v = if i == k { 1.0 / w } else { 0.0 };
            v += y[i] * y[k] / (w * w);
            j[(i, k)] = v;
        }
    }
    j
}

/// d(z)/d(y) for the inversion-type map at y.
fn jac_ball_to_half_space(y: &DVector<f64>) -> DMatrix<f64> {
    let n = y.len();
    let e1 = unit_e1(n);
    let u = &e1 - y;
    let d = u.norm_squared();
    // grad_k d = -2 u_k
    let mut j = DMatrix::zeros(n, n);
    for k in 0..n {
        // z_1 = (1 - |y|^2)/d
        j[(0, k)] = (-2.0 * y[k]) / d + (1.0 - y.norm_squared()) * 2.0 * u[k] / (d * d);
        for i in 1..n {
            let mut v = if i == k { 2.0 / d } else { 0.0 };
            v += 2.0 * y[i] * 2.0 * u[k] / (d * d);
            j[(i, k)] = v;
        }
    }
    j
}

/// d(y)/d(z) for the inverse inversion-type map at z.
fn jac_half_space_to_ball(z: &DVector<f64>) -> DMatrix<f64> {
    let n = z.len();
    let e1 = unit_e1(n);
    let u = z + &e1;
    let d = u.norm_squared();
    let mut j = DMatrix::zeros(n, n);
    for k in 0..n {
        // y_1 = (|z|^2 - 1)/d, grad_k d = 2 u_k
        j[(0, k)] = 2.0 * z[k] / d - (z.norm_squared() - 1.0) * 2.0 * u[k] / (d * d);
        for i in 1..n {
            let mut v = if i == k { 2.0 / d } else { 0.0 };
            v -= 2.0 * z[i] * 2.0 * u[k] / (d * d);
            j[(i, k)] = v;
        }
    }
    j
}
