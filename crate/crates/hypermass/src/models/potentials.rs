//! Static potentials of the model: the span of the ambient coordinate
//! functions restricted to the hyperboloid, with closed forms in every chart.
//!
//! The basis potential V_(i) is the i-th ambient coordinate. The
//! horospherical potential is V_h = V_(0) - V_(1). In the ball chart
//! V_(0) = (1+|y|^2)/(1-|y|^2) and V_(j) = 2 y_j/(1-|y|^2); in the half-space
//! chart V_h = 1/z_1 and V_(j) = z_j/z_1 for j >= 2.

use nalgebra::{DMatrix, DVector};

use super::charts::{omega, ModelPoint};
use super::minkowski::MinkowskiVector;

/// A linear combination sum_i c_i V_(i) over the basis of static potentials.
#[derive(Debug, Clone, PartialEq)]
pub struct StaticPotential {
    /// Coefficients (c_0, ..., c_n).
    coeffs: DVector<f64>,
}

impl StaticPotential {
    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        Self {
            coeffs: DVector::from_vec(coeffs),
        }
    }

    /// The basis potential V_(i) in dimension n.
    pub fn basis(n: usize, i: usize) -> Self {
        assert!(i <= n);
        let mut c = DVector::zeros(n + 1);
        c[i] = 1.0;
        Self { coeffs: c }
    }

    /// The horospherical potential V_h = V_(0) - V_(1).
    pub fn horospherical(n: usize) -> Self {
        let mut c = DVector::zeros(n + 1);
        c[0] = 1.0;
        c[1] = -1.0;
        Self { coeffs: c }
    }

    pub fn zero(n: usize) -> Self {
        Self {
            coeffs: DVector::zeros(n + 1),
        }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &DVector<f64> {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> f64 {
        self.coeffs[i]
    }

    /// Coefficient along V_h when the potential is written in the
    /// horospherical basis {V_h, V_(2), ..., V_(n)}; the potential must have
    /// c_0 + c_1 = 0 for this basis to span it.
    pub fn horospherical_component(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn scale(&self, a: f64) -> Self {
        Self {
            coeffs: &self.coeffs * a,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            coeffs: &self.coeffs + &other.coeffs,
        }
    }

    /// Member of the static span of the equidistant domain (no V_(1) part).
    pub fn admissible_equidistant(&self, tol: f64) -> bool {
        self.coeffs[1].abs() <= tol
    }

    /// Member of the static span of the horospherical domain
    /// (a multiple of V_h plus a combination of V_(j), j >= 2).
    pub fn admissible_horospherical(&self, tol: f64) -> bool {
        (self.coeffs[0] + self.coeffs[1]).abs() <= tol
    }

    /// Reference evaluation: convert to the hyperboloid and contract with the
    /// ambient coordinates.
    pub fn eval(&self, p: &ModelPoint) -> f64 {
        let x = p.ambient();
        self.coeffs.dot(&x.0)
    }

    /// Evaluation through the closed form native to the point's chart,
    /// without converting the point. Agrees with `eval` on the overlaps.
    pub fn eval_native(&self, p: &ModelPoint) -> f64 {
        match p {
            ModelPoint::Hyperboloid(x) => self.coeffs.dot(&x.0),
            ModelPoint::Ball(y) => {
                let w = omega(y);
                let mut v = self.coeffs[0] * (1.0 + y.norm_squared()) / (2.0 * w);
                for j in 0..y.len() {
                    v += self.coeffs[j + 1] * y[j] / w;
                }
                v
            }
            ModelPoint::HalfSpace(z) => {
                let (a, b) = (
                    self.coeffs[0] + self.coeffs[1],
                    self.coeffs[0] - self.coeffs[1],
                );
                let mut num = a * z.norm_squared() + b;
                for j in 1..z.len() {
                    num += 2.0 * self.coeffs[j + 1] * z[j];
                }
                num / (2.0 * z[0])
            }
        }
    }

    /// Coordinate gradient (partial derivatives) in the ball chart.
    pub fn ball_gradient(&self, y: &DVector<f64>) -> DVector<f64> {
        let n = y.len();
        let w = omega(y);
        let mut g = DVector::zeros(n);
        for j in 0..n {
            // V_(0): y_j / Omega^2
            g[j] += self.coeffs[0] * y[j] / (w * w);
            // V_(k): delta_{jk}/Omega + y_k y_j / Omega^2
            for k in 0..n {
                let mut d = if j == k { 1.0 / w } else { 0.0 };
                d += y[k] * y[j] / (w * w);
                g[j] += self.coeffs[k + 1] * d;
            }
        }
        g
    }

    /// Coordinate Hessian (plain second partials) in the ball chart.
    pub fn ball_hessian(&self, y: &DVector<f64>) -> DMatrix<f64> {
        let n = y.len();
        let w = omega(y);
        let w2 = w * w;
        let w3 = w2 * w;
        let mut h = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut v = 0.0;
                // V_(0)
                let d0 = if i == j { 1.0 / w2 } else { 0.0 };
                v += self.coeffs[0] * (d0 + 2.0 * y[i] * y[j] / w3);
                // V_(k)
                for k in 0..n {
                    let mut dk = 2.0 * y[i] * y[j] * y[k] / w3;
                    if i == j {
                        dk += y[k] / w2;
                    }
                    if i == k {
                        dk += y[j] / w2;
                    }
                    if j == k {
                        dk += y[i] / w2;
                    }
                    v += self.coeffs[k + 1] * dk;
                }
                h[(i, j)] = v;
            }
        }
        h
    }

    /// Coordinate gradient in the half-space chart.
    pub fn half_space_gradient(&self, z: &DVector<f64>) -> DVector<f64> {
        let n = z.len();
        let (a, b) = (
            self.coeffs[0] + self.coeffs[1],
            self.coeffs[0] - self.coeffs[1],
        );
        let mut num = a * z.norm_squared() + b;
        for j in 1..n {
            num += 2.0 * self.coeffs[j + 1] * z[j];
        }
        let mut g = DVector::zeros(n);
        for k in 0..n {
            let mut dn = 2.0 * a * z[k];
            if k >= 1 {
                dn += 2.0 * self.coeffs[k + 1];
            }
            g[k] = dn / (2.0 * z[0]);
        }
        g[0] -= num / (2.0 * z[0] * z[0]);
        g
    }

    /// Coordinate Hessian in the half-space chart.
    pub fn half_space_hessian(&self, z: &DVector<f64>) -> DMatrix<f64> {
        let n = z.len();
        let (a, b) = (
            self.coeffs[0] + self.coeffs[1],
            self.coeffs[0] - self.coeffs[1],
        );
        let mut num = a * z.norm_squared() + b;
        for j in 1..n {
            num += 2.0 * self.coeffs[j + 1] * z[j];
        }
        let dn = |k: usize| -> f64 {
            let mut d = 2.0 * a * z[k];
            if k >= 1 {
                d += 2.0 * self.coeffs[k + 1];
            }
            d
        };
        let z1 = z[0];
        let mut h = DMatrix::zeros(n, n);
        for k in 0..n {
            for l in 0..n {
                let mut v = if k == l { 2.0 * a / (2.0 * z1) } else { 0.0 };
                if l == 0 {
                    v -= dn(k) / (2.0 * z1 * z1);
                }
                if k == 0 {
                    v -= dn(l) / (2.0 * z1 * z1);
                }
                if k == 0 && l == 0 {
                    v += 2.0 * num / (2.0 * z1 * z1 * z1);
                }
                h[(k, l)] = v;
            }
        }
        h
    }
}

/// Closed form of <grad V_(i), grad V_(j)>_b at a hyperboloid point:
/// the ambient pairing of the coordinate directions plus x_i x_j.
pub fn grad_potential_inner(i: usize, j: usize, x: &MinkowskiVector) -> f64 {
    let eta = if i == j {
        if i == 0 {
            -1.0
        } else {
            1.0
        }
    } else {
        0.0
    };
    eta + x.0[i] * x.0[j]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::Chart;
    use approx::assert_abs_diff_eq;
    use nalgebra::DVector;

    fn ball(v: &[f64]) -> ModelPoint {
        ModelPoint::ball(DVector::from_row_slice(v)).unwrap()
    }

    #[test]
    fn v0_at_ball_origin() {
        let v0 = StaticPotential::basis(3, 0);
        assert_abs_diff_eq!(v0.eval_native(&ball(&[0.0, 0.0, 0.0])), 1.0);
    }

    #[test]
    fn vh_at_unit_height() {
        let vh = StaticPotential::horospherical(3);
        let p = ModelPoint::half_space(DVector::from_row_slice(&[1.0, 0.0, 0.0])).unwrap();
        assert_abs_diff_eq!(vh.eval_native(&p), 1.0);
    }

    #[test]
    fn vj_in_half_space_is_ratio() {
        let p = ModelPoint::half_space(DVector::from_row_slice(&[0.7, -0.3, 1.2])).unwrap();
        for j in 2..=3 {
            let vj = StaticPotential::basis(3, j);
            let z = p.coords();
            assert_abs_diff_eq!(vj.eval_native(&p), z[j - 1] / z[0], epsilon = 1e-13);
        }
    }

    #[test]
    fn native_matches_reference_across_charts() {
        let p = ball(&[0.2, -0.4, 0.3]);
        for i in 0..=3 {
            let v = StaticPotential::basis(3, i);
            let reference = v.eval(&p);
            for chart in [Chart::Hyperboloid, Chart::Ball, Chart::HalfSpace] {
                let q = p.convert(chart).unwrap();
                assert_abs_diff_eq!(v.eval_native(&q), reference, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn gradients_match_finite_differences() {
        let y = DVector::from_row_slice(&[0.15, -0.25, 0.4]);
        let v = StaticPotential::from_coeffs(vec![0.7, -0.2, 1.1, 0.4]);
        let g = v.ball_gradient(&y);
        let h = 1e-6;
        for k in 0..3 {
            let mut yp = y.clone();
            yp[k] += h;
            let mut ym = y.clone();
            ym[k] -= h;
            let fd = (v.eval_native(&ModelPoint::ball(yp).unwrap())
                - v.eval_native(&ModelPoint::ball(ym).unwrap()))
                / (2.0 * h);
            assert_abs_diff_eq!(g[k], fd, epsilon = 1e-8);
        }

        let z = DVector::from_row_slice(&[0.8, 0.3, -0.5]);
        let gz = v.half_space_gradient(&z);
        for k in 0..3 {
            let mut zp = z.clone();
            zp[k] += h;
            let mut zm = z.clone();
            zm[k] -= h;
            let fd = (v.eval_native(&ModelPoint::half_space(zp).unwrap())
                - v.eval_native(&ModelPoint::half_space(zm).unwrap()))
                / (2.0 * h);
            assert_abs_diff_eq!(gz[k], fd, epsilon = 1e-8);
        }
    }

    #[test]
    fn hessians_match_finite_differences() {
        let y = DVector::from_row_slice(&[0.15, -0.25, 0.4]);
        let v = StaticPotential::from_coeffs(vec![0.7, -0.2, 1.1, 0.4]);
        let hess = v.ball_hessian(&y);
        let h = 1e-5;
        for k in 0..3 {
            let mut yp = y.clone();
            yp[k] += h;
            let mut ym = y.clone();
            ym[k] -= h;
            let fd = (v.ball_gradient(&yp) - v.ball_gradient(&ym)) / (2.0 * h);
            for i in 0..3 {
                assert_abs_diff_eq!(hess[(i, k)], fd[i], epsilon = 1e-7);
            }
        }

        let z = DVector::from_row_slice(&[0.8, 0.3, -0.5]);
        let hz = v.half_space_hessian(&z);
        for k in 0..3 {
            let mut zp = z.clone();
            zp[k] += h;
            let mut zm = z.clone();
            zm[k] -= h;
            let fd = (v.half_space_gradient(&zp) - v.half_space_gradient(&zm)) / (2.0 * h);
            for i in 0..3 {
                assert_abs_diff_eq!(hz[(i, k)], fd[i], epsilon = 1e-7);
            }
        }
    }

    #[test]
    fn formgrad_closed_form() {
        // i = j = 0 at the vertex
        let vertex = MinkowskiVector::new(vec![1.0, 0.0, 0.0, 0.0]);
        assert_abs_diff_eq!(grad_potential_inner(0, 0, &vertex), 0.0);
        // i = j = 1 on the level set x_1 = s
        let s = 0.8_f64;
        let x2 = 0.5_f64;
        let x0 = (1.0 + s * s + x2 * x2).sqrt();
        let x = MinkowskiVector::new(vec![x0, s, x2, 0.0]);
        assert_abs_diff_eq!(grad_potential_inner(1, 1, &x), 1.0 + s * s, epsilon = 1e-15);
        // i = 1, j = 2 at a point with x_2 = 0
        let x = MinkowskiVector::new(vec![(1.0 + s * s).sqrt(), s, 0.0, 0.0]);
        assert_abs_diff_eq!(grad_potential_inner(1, 2, &x), 0.0);
    }
}
