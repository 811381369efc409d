//! Time-oriented Lorentz isometries, the parabolic subgroup fixing the
//! isotropic line through (1, 1, 0, ..., 0), and the induced actions on
//! static potentials.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use super::charts::{Chart, ModelPoint};
use super::minkowski::{minkowski_metric, MinkowskiVector};
use super::potentials::StaticPotential;
use crate::error::{Error, Result};

const LORENTZ_TOL: f64 = 1e-10;

/// An element of the time-orientation preserving Lorentz group, stored as its
/// (n+1) x (n+1) ambient matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct LorentzIsometry {
    matrix: DMatrix<f64>,
}

impl LorentzIsometry {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let n = matrix.nrows() - 1;
        assert_eq!(matrix.nrows(), matrix.ncols());
        let eta = minkowski_metric(n);
        let residual = (matrix.transpose() * &eta * &matrix - &eta).norm();
        if residual > LORENTZ_TOL || matrix[(0, 0)] <= 0.0 {
            return Err(Error::NotLorentz { residual });
        }
        Ok(Self { matrix })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: DMatrix::identity(n + 1, n + 1),
        }
    }

    /// Boost of rapidity `rho` in the (x_0, x_1) plane.
    pub fn boost(n: usize, rho: f64) -> Self {
        let mut m = DMatrix::identity(n + 1, n + 1);
        m[(0, 0)] = rho.cosh();
        m[(0, 1)] = rho.sinh();
        m[(1, 0)] = rho.sinh();
        m[(1, 1)] = rho.cosh();
        Self { matrix: m }
    }

    /// Block rotation acting on the coordinates (x_2, ..., x_n); `r` must be
    /// an (n-1) x (n-1) orthogonal matrix.
    pub fn rotation(n: usize, r: &DMatrix<f64>) -> Result<Self> {
        assert_eq!(r.nrows(), n - 1);
        let ortho = (r.transpose() * r - DMatrix::identity(n - 1, n - 1)).norm();
        if ortho > LORENTZ_TOL {
            return Err(Error::NotLorentz { residual: ortho });
        }
        let mut m = DMatrix::identity(n + 1, n + 1);
        for i in 0..n - 1 {
            for j in 0..n - 1 {
                m[(i + 2, j + 2)] = r[(i, j)];
            }
        }
        Ok(Self { matrix: m })
    }

    /// Exponential of a translation parameter U in R^{n-1}; fixes the
    /// isotropic direction (1, 1, 0, ..., 0) pointwise.
    pub fn parabolic_translation(n: usize, u: &DVector<f64>) -> Self {
        assert_eq!(u.len(), n - 1);
        let half = u.norm_squared() / 2.0;
        let mut m = DMatrix::identity(n + 1, n + 1);
        m[(0, 0)] = 1.0 + half;
        m[(0, 1)] = -half;
        m[(1, 0)] = half;
        m[(1, 1)] = 1.0 - half;
        for a in 0..n - 1 {
            m[(0, a + 2)] = u[a];
            m[(1, a + 2)] = u[a];
            m[(a + 2, 0)] = u[a];
            m[(a + 2, 1)] = -u[a];
        }
        Self { matrix: m }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows() - 1
    }

    pub fn inverse(&self) -> Self {
        let n = self.dim();
        let eta = minkowski_metric(n);
        Self {
            matrix: &eta * self.matrix.transpose() * &eta,
        }
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self {
            matrix: &self.matrix * &other.matrix,
        }
    }

    /// Apply to a model point (in any chart); the result is returned in the
    /// same chart as the input.
    pub fn apply(&self, p: &ModelPoint) -> Result<ModelPoint> {
        let chart = p.chart();
        let x = p.ambient();
        let image = MinkowskiVector(&self.matrix * &x.0);
        ModelPoint::hyperboloid(image)?.convert(chart)
    }

    /// Differential of the chart realization of this isometry at `p`, as a
    /// matrix acting on chart coordinates.
    pub fn chart_jacobian(&self, p: &ModelPoint) -> Result<DMatrix<f64>> {
        let chart = p.chart();
        let h = p.convert(Chart::Hyperboloid)?;
        let x = h.ambient();
        let image = ModelPoint::hyperboloid(MinkowskiVector(&self.matrix * &x.0))?;
        // spatial part of the linear map, corrected for the graph lift
        let n = self.dim();
        let mut spatial = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                spatial[(i, j)] = self.matrix[(i + 1, j + 1)]
                    + self.matrix[(i + 1, 0)] * x.0[j + 1] / x.0[0];
            }
        }
        let into = h.convert_jacobian(chart)?; // not used; kept for clarity
        let _ = into;
        let j_in = p.convert_jacobian(Chart::Hyperboloid)?;
        let j_out = image.convert_jacobian(chart)?;
        Ok(j_out * spatial * j_in)
    }

    /// Whether this isometry fixes the first spatial coordinate function,
    /// i.e. preserves every equidistant level set.
    pub fn preserves_equidistant(&self) -> bool {
        let n = self.dim();
        let mut residual: f64 = (self.matrix[(1, 1)] - 1.0).abs();
        for i in 0..=n {
            if i != 1 {
                residual = residual
                    .max(self.matrix[(1, i)].abs())
                    .max(self.matrix[(i, 1)].abs());
            }
        }
        residual <= LORENTZ_TOL
    }

    /// Whether this isometry fixes the isotropic line spanned by
    /// (1, 1, 0, ..., 0) (the parabolic condition).
    pub fn fixes_isotropic_line(&self) -> bool {
        let n = self.dim();
        let mut o = DVector::zeros(n + 1);
        o[0] = 1.0;
        o[1] = 1.0;
        let image = &self.matrix * &o;
        // proportionality: image - (image_0) * o must vanish
        let mut res = (image[0] - image[1]).abs();
        for i in 2..=n {
            res = res.max(image[i].abs());
        }
        res <= 1e-12 * image[0].abs().max(1.0)
    }
}

/// Rotation / boost / translation data of an element of the parabolic group,
/// assembled in the Langlands order rotation * boost * translation.
#[derive(Debug, Clone)]
pub struct ParabolicElement {
    pub rotation: DMatrix<f64>,
    pub boost: f64,
    pub translation: DVector<f64>,
}

impl ParabolicElement {
    pub fn new(rotation: DMatrix<f64>, boost: f64, translation: DVector<f64>) -> Result<Self> {
        let m = rotation.nrows();
        assert_eq!(rotation.ncols(), m);
        assert_eq!(translation.len(), m);
        let ortho = (rotation.transpose() * &rotation - DMatrix::identity(m, m)).norm();
        if ortho > LORENTZ_TOL {
            return Err(Error::NotLorentz { residual: ortho });
        }
        Ok(Self {
            rotation,
            boost,
            translation,
        })
    }

    pub fn dim(&self) -> usize {
        self.rotation.nrows() + 1
    }

    pub fn assemble(&self) -> LorentzIsometry {
        let n = self.dim();
        let r = LorentzIsometry::rotation(n, &self.rotation).expect("orthogonal by invariant");
        let b = LorentzIsometry::boost(n, self.boost);
        let t = LorentzIsometry::parabolic_translation(n, &self.translation);
        r.compose(&b).compose(&t)
    }
}

/// Which representation of the isometry group acts on potentials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RhoVariant {
    /// Isometries of the equidistant domain (must fix V_(1)).
    Equidistant,
    /// Isometries intertwining the horospherical leaves (must fix the
    /// isotropic line; boosts rescale the leaf parameter).
    Horospherical,
}

/// rho_A(V) = V o A^{-1} on the coefficient vector: c -> eta A eta c.
fn rho_coeffs(a: &LorentzIsometry, v: &StaticPotential) -> StaticPotential {
    let n = a.dim();
    let eta = minkowski_metric(n);
    let c = &eta * a.matrix() * &eta * v.coeffs();
    StaticPotential::from_coeffs(c.iter().copied().collect())
}

/// Action of an equidistant-domain isometry on a static potential.
pub fn rho_action_s(a: &LorentzIsometry, v: &StaticPotential) -> Result<StaticPotential> {
    if !a.preserves_equidistant() {
        return Err(Error::DomainNotPreserved(
            "matrix does not fix the first spatial coordinate".into(),
        ));
    }
    Ok(rho_coeffs(a, v))
}

/// Action of a parabolic isometry on a static potential.
pub fn rho_action_h(a: &LorentzIsometry, v: &StaticPotential) -> Result<StaticPotential> {
    if !a.fixes_isotropic_line() {
        return Err(Error::DomainNotPreserved(
            "matrix does not fix the isotropic line".into(),
        ));
    }
    Ok(rho_coeffs(a, v))
}

/// Haar-ish random orthogonal matrix via QR of a Gaussian sample.
pub fn random_orthogonal<R: Rng>(m: usize, rng: &mut R) -> DMatrix<f64> {
    let g = DMatrix::from_fn(m, m, |_, _| {
        // Box-Muller from two uniforms
        let u1: f64 = rng.gen_range(1e-12..1.0);
        let u2: f64 = rng.gen_range(0.0..1.0);
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    });
    let qr = g.qr();
    qr.q()
}

/// Matrix exponential by scaling and squaring on a plain series; adequate for
/// the small generator matrices used here.
pub(crate) fn matrix_exp(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let norm = a.norm();
    let k = norm.log2().ceil().max(0.0) as u32 + 4;
    let scaled = a / 2f64.powi(k as i32);
    let mut term = DMatrix::<f64>::identity(n, n);
    let mut sum = DMatrix::<f64>::identity(n, n);
    for j in 1..=16 {
        term = &term * &scaled / j as f64;
        sum += &term;
    }
    let mut result = sum;
    for _ in 0..k {
        result = &result * &result;
    }
    result
}

/// Random element of the time-oriented Lorentz group of the equidistant
/// domain (acting on (x_0, x_2, ..., x_n), fixing x_1), as the exponential
/// of a random Lie-algebra element of the stated scale.
pub fn random_lorentz_s<R: Rng>(n: usize, scale: f64, rng: &mut R) -> LorentzIsometry {
    // antisymmetric-with-respect-to-eta generator on indices {0, 2, .., n}
    let mut gen = DMatrix::zeros(n + 1, n + 1);
    let idx: Vec<usize> = std::iter::once(0).chain(2..=n).collect();
    for (a, &i) in idx.iter().enumerate() {
        for &j in idx.iter().skip(a + 1) {
            let v = rng.gen_range(-scale..scale);
            if i == 0 {
                // boost in the (x_0, x_j) plane: symmetric pair
                gen[(0, j)] = v;
                gen[(j, 0)] = v;
            } else {
                gen[(i, j)] = v;
                gen[(j, i)] = -v;
            }
        }
    }
    LorentzIsometry::new(matrix_exp(&gen)).expect("exponential of a Lorentz generator")
}
