//! Levi-Civita connection coefficients and pointwise covariant operations.

use nalgebra::{DMatrix, DVector};

use super::fields::{MetricField, Point, ScalarField, TensorField2, VectorField};
use crate::error::Result;

/// Christoffel symbols at a point: out[k][(i, j)] = Gamma^k_{ij}.
pub fn christoffel(g: &MetricField, p: &Point) -> Result<Vec<DMatrix<f64>>> {
    let n = g.dim();
    let ginv = g.inverse_at(p)?;
    let dg = g.derivs(p);
    let mut out = vec![DMatrix::zeros(n, n); n];
    for k in 0..n {
        for i in 0..n {
            for j in i..n {
                let mut s = 0.0;
                for m in 0..n {
                    s += ginv[(k, m)] * (dg[i][(j, m)] + dg[j][(i, m)] - dg[m][(i, j)]);
                }
                out[k][(i, j)] = 0.5 * s;
                out[k][(j, i)] = 0.5 * s;
            }
        }
    }
    Ok(out)
}

/// Christoffel symbols together with their coordinate derivatives:
/// second item out[l][k][(i, j)] = d_l Gamma^k_{ij}.
#[allow(clippy::type_complexity)]
pub fn christoffel_derivs(
    g: &MetricField,
    p: &Point,
) -> Result<(Vec<DMatrix<f64>>, Vec<Vec<DMatrix<f64>>>)> {
    let n = g.dim();
    let ginv = g.inverse_at(p)?;
    let dg = g.derivs(p);
    let d2g = g.second_derivs(p);
    let gamma = christoffel(g, p)?;

    // d_l g^{km} = -(g^{-1} dg_l g^{-1})_{km}
    let dginv: Vec<DMatrix<f64>> = (0..n).map(|l| -(&ginv * &dg[l] * &ginv)).collect();

    let mut dgamma = vec![vec![DMatrix::zeros(n, n); n]; n];
    for l in 0..n {
        for k in 0..n {
            for i in 0..n {
                for j in i..n {
                    let mut s = 0.0;
                    for m in 0..n {
                        s += dginv[l][(k, m)]
                            * (dg[i][(j, m)] + dg[j][(i, m)] - dg[m][(i, j)]);
                        s += ginv[(k, m)]
                            * (d2g[l][i][(j, m)] + d2g[l][j][(i, m)] - d2g[l][m][(i, j)]);
                    }
                    dgamma[l][k][(i, j)] = 0.5 * s;
                    dgamma[l][k][(j, i)] = 0.5 * s;
                }
            }
        }
    }
    Ok((gamma, dgamma))
}

/// Covariant Hessian of a scalar: H_{ij} = d_i d_j f - Gamma^k_{ij} d_k f.
pub fn covariant_hessian(g: &MetricField, f: &ScalarField, p: &Point) -> Result<DMatrix<f64>> {
    let n = g.dim();
    let gamma = christoffel(g, p)?;
    let grad = f.gradient(p);
    let mut h = f.coordinate_hessian(p);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                h[(i, j)] -= gamma[k][(i, j)] * grad[k];
            }
        }
    }
    Ok(h)
}

/// Metric gradient vector: (grad f)^i = g^{ij} d_j f.
pub fn metric_gradient(g: &MetricField, f: &ScalarField, p: &Point) -> Result<DVector<f64>> {
    Ok(g.inverse_at(p)? * f.gradient(p))
}

/// Laplace-Beltrami of a scalar.
pub fn laplacian(g: &MetricField, f: &ScalarField, p: &Point) -> Result<f64> {
    let ginv = g.inverse_at(p)?;
    let h = covariant_hessian(g, f, p)?;
    Ok((ginv * h).trace())
}

/// Covariant derivative of a symmetric 2-tensor:
/// out[k][(i, j)] = nabla_k T_{ij}.
pub fn covariant_deriv_tensor2(
    g: &MetricField,
    t: &TensorField2,
    p: &Point,
) -> Result<Vec<DMatrix<f64>>> {
    let n = g.dim();
    let gamma = christoffel(g, p)?;
    let tv = t.eval(p);
    let dt = t.derivs(p);
    let mut out = vec![DMatrix::zeros(n, n); n];
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut v = dt[k][(i, j)];
                for l in 0..n {
                    v -= gamma[l][(k, i)] * tv[(l, j)];
                    v -= gamma[l][(k, j)] * tv[(i, l)];
                }
                out[k][(i, j)] = v;
            }
        }
    }
    Ok(out)
}

/// Divergence of a symmetric 2-tensor: (div T)_i = g^{jk} nabla_j T_{ki}.
pub fn divergence_tensor2(g: &MetricField, t: &TensorField2, p: &Point) -> Result<DVector<f64>> {
    let n = g.dim();
    let ginv = g.inverse_at(p)?;
    let dt = covariant_deriv_tensor2(g, t, p)?;
    let mut out = DVector::zeros(n);
    for i in 0..n {
        let mut v = 0.0;
        for j in 0..n {
            for k in 0..n {
                v += ginv[(j, k)] * dt[j][(k, i)];
            }
        }
        out[i] = v;
    }
    Ok(out)
}

/// Covariant derivative of a vector field: out[(i, k)] = nabla_k X^i.
pub fn covariant_deriv_vector(
    g: &MetricField,
    x: &VectorField,
    p: &Point,
) -> Result<DMatrix<f64>> {
    let n = g.dim();
    let gamma = christoffel(g, p)?;
    let xv = x.eval(p);
    let mut j = x.jacobian(p);
    for i in 0..n {
        for k in 0..n {
            for l in 0..n {
                j[(i, k)] += gamma[i][(k, l)] * xv[l];
            }
        }
    }
    Ok(j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn flat_metric_has_zero_symbols() {
        let g = MetricField::euclidean(3);
        let p = DVector::from_row_slice(&[0.4, -0.7, 2.0]);
        let gamma = christoffel(&g, &p).unwrap();
        for k in 0..3 {
            assert_abs_diff_eq!(gamma[k].norm(), 0.0);
        }
    }

    #[test]
    fn half_space_symbol_at_unit_height() {
        // conformal oracle: Gamma^k_{ij} of z_1^{-2} delta is built from
        // d log z_1 terms; at z = (1, 0, 0) this gives Gamma^1_{11} = -1.
        let g = MetricField::half_space_hyperbolic(3);
        let p = DVector::from_row_slice(&[1.0, 0.0, 0.0]);
        let gamma = christoffel(&g, &p).unwrap();
        assert_abs_diff_eq!(gamma[0][(0, 0)], -1.0, epsilon = 1e-12);
        // phi = -log z_1: Gamma^1_{jj} = +1/z_1 for j != 1
        assert_abs_diff_eq!(gamma[0][(1, 1)], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(gamma[1][(0, 1)], -1.0, epsilon = 1e-12);
    }

    #[test]
    fn ball_symbols_vanish_at_origin() {
        // grad Omega(0) = 0, so the conformal symbols vanish at the center
        let g = MetricField::ball_hyperbolic(4);
        let p = DVector::zeros(4);
        let gamma = christoffel(&g, &p).unwrap();
        for k in 0..4 {
            assert_abs_diff_eq!(gamma[k].norm(), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn metric_compatibility() {
        // nabla g = 0 for both analytic and FD paths
        let n = 3;
        let analytic = MetricField::ball_hyperbolic(n);
        let fd = MetricField::new(TensorField2::from_fn(n, {
            let m = analytic.clone();
            move |p| m.eval(p)
        }));
        let p = DVector::from_row_slice(&[0.3, -0.2, 0.1]);
        for (g, tol) in [(&analytic, 1e-12), (&fd, 1e-6)] {
            let dg = covariant_deriv_tensor2(g, g.tensor(), &p).unwrap();
            for k in 0..n {
                assert!(dg[k].norm() < tol, "compatibility residual {}", dg[k].norm());
            }
        }
    }
}
