//! Minkowski vectors and the Lorentzian inner product of signature (1, n).

use nalgebra::{DMatrix, DVector};

/// A vector of R^{1,n}, components (x_0, x_1, ..., x_n).
#[derive(Debug, Clone, PartialEq)]
pub struct MinkowskiVector(pub DVector<f64>);

impl MinkowskiVector {
    pub fn new(components: Vec<f64>) -> Self {
        Self(DVector::from_vec(components))
    }

    /// Ambient dimension count n+1.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Spatial dimension n of the hyperbolic space this vector sits over.
    pub fn spatial_dim(&self) -> usize {
        self.0.len() - 1
    }

    /// Euclidean norm of the spatial part (x_1, ..., x_n).
    pub fn spatial_radius(&self) -> f64 {
        self.0.rows(1, self.0.len() - 1).norm()
    }
}

/// -x_0 y_0 + sum_{i>=1} x_i y_i.
pub fn minkowski_inner(x: &MinkowskiVector, y: &MinkowskiVector) -> f64 {
    assert_eq!(x.len(), y.len(), "dimension mismatch");
    let mut s = -x.0[0] * y.0[0];
    for i in 1..x.len() {
        s += x.0[i] * y.0[i];
    }
    s
}

/// The matrix diag(-1, 1, ..., 1) of size (n+1) x (n+1).
pub fn minkowski_metric(n: usize) -> DMatrix<f64> {
    let mut eta = DMatrix::identity(n + 1, n + 1);
    eta[(0, 0)] = -1.0;
    eta
}
