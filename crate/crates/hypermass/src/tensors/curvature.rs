//! Riemann, Ricci and scalar curvature at a point.
//!
//! Sign conventions: R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z -
//! nabla_{[X,Y]} Z, components lowered as R_{ijkl} = <R(d_k, d_l) d_j, d_i>.
//! With these signs a space of constant sectional curvature -1 satisfies
//! R_{ijij} = -(g_ii g_jj - g_ij^2) and R = -n(n-1).

use nalgebra::DMatrix;

use super::christoffel::christoffel_derivs;
use super::fields::{MetricField, Point};
use crate::error::Result;

/// Lowered Riemann tensor with flat Vec storage.
#[derive(Debug, Clone)]
pub struct Riemann {
    n: usize,
    data: Vec<f64>,
}

impl Riemann {
    fn idx(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.n + j) * self.n + k) * self.n + l
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.data[self.idx(i, j, k, l)]
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Residuals of the algebraic symmetries: antisymmetry in the first and
    /// last pairs, pair symmetry, and the first Bianchi identity.
    pub fn symmetry_residuals(&self) -> [f64; 4] {
        let n = self.n;
        let mut anti_first: f64 = 0.0;
        let mut anti_last: f64 = 0.0;
        let mut pair: f64 = 0.0;
        let mut bianchi: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let r = self.get(i, j, k, l);
                        anti_first = anti_first.max((r + self.get(j, i, k, l)).abs());
                        anti_last = anti_last.max((r + self.get(i, j, l, k)).abs());
                        pair = pair.max((r - self.get(k, l, i, j)).abs());
                        bianchi = bianchi.max(
                            (r + self.get(i, k, l, j) + self.get(i, l, j, k)).abs(),
                        );
                    }
                }
            }
        }
        [anti_first, anti_last, pair, bianchi]
    }
}

/// Curvature of a metric at a point.
#[derive(Debug, Clone)]
pub struct CurvatureData {
    pub riemann: Riemann,
    pub ricci: DMatrix<f64>,
    pub scalar: f64,
}

impl CurvatureData {
    /// Max residual of R_{ijij} - c (g_ii g_jj - g_ij^2) over all pairs,
    /// i.e. the defect from constant sectional curvature c.
    pub fn constant_curvature_residual(&self, g_at_p: &DMatrix<f64>, c: f64) -> f64 {
        let n = self.riemann.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let expected = c
                    * (g_at_p[(i, i)] * g_at_p[(j, j)] - g_at_p[(i, j)] * g_at_p[(i, j)]);
                worst = worst.max((self.riemann.get(i, j, i, j) - expected).abs());
            }
        }
        worst
    }
}

/// Full curvature computation from Christoffel symbols and their derivatives.
pub fn curvature(g: &MetricField, p: &Point) -> Result<CurvatureData> {
    let n = g.dim();
    let gv = g.eval_checked(p)?;
    let ginv = g.inverse_at(p)?;
    let (gamma, dgamma) = christoffel_derivs(g, p)?;

    // R^m_{jkl} = d_k Gamma^m_{lj} - d_l Gamma^m_{kj}
    //             + Gamma^m_{ks} Gamma^s_{lj} - Gamma^m_{ls} Gamma^s_{kj}
    let mut upper = vec![0.0; n * n * n * n];
    let uidx = |m: usize, j: usize, k: usize, l: usize| ((m * n + j) * n + k) * n + l;
    for m in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut v = dgamma[k][m][(l, j)] - dgamma[l][m][(k, j)];
                    for s in 0..n {
                        v += gamma[m][(k, s)] * gamma[s][(l, j)]
                            - gamma[m][(l, s)] * gamma[s][(k, j)];
                    }
                    upper[uidx(m, j, k, l)] = v;
                }
            }
        }
    }

    let mut riemann = Riemann {
        n,
        data: vec![0.0; n * n * n * n],
    };
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut v = 0.0;
                    for m in 0..n {
                        v += gv[(i, m)] * upper[uidx(m, j, k, l)];
                    }
                    let at = riemann.idx(i, j, k, l);
                    riemann.data[at] = v;
                }
            }
        }
    }

    // Ric_{jl} = R^k_{jkl}
    let mut ricci = DMatrix::zeros(n, n);
    for j in 0..n {
        for l in 0..n {
            let mut v = 0.0;
            for k in 0..n {
                v += upper[uidx(k, j, k, l)];
            }
            ricci[(j, l)] = v;
        }
    }

    let scalar = (ginv * &ricci).trace();

    Ok(CurvatureData {
        riemann,
        ricci,
        scalar,
    })
}
