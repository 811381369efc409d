//! Non-compact model domains: the equidistant domain cut out by the first
//! coordinate potential and the horoball family, with their derived
//! geometric parameters.

use nalgebra::DVector;

use super::charts::ModelPoint;
use super::potentials::StaticPotential;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomainKind {
    /// {V_(1) <= s}, boundary the equidistant hypersurface at level s.
    Equidistant { s: f64 },
    /// {V_h <= chi}, a horoball; chi > 0.
    Horoball { chi: f64 },
    /// {V_h >= chi}, the complement of a horoball.
    HoroballComplement { chi: f64 },
}

/// A domain together with the quantities derived from its parameter: the
/// umbilicity factor lambda, the angle theta with lambda = sin(theta), and
/// kappa = cos(theta). These are never set independently, which keeps
/// kappa^2 + tau^2 = 1 automatic.
#[derive(Debug, Clone, Copy)]
pub struct DomainSpec {
    pub n: usize,
    pub kind: DomainKind,
}

impl DomainSpec {
    pub fn equidistant(n: usize, s: f64) -> Self {
        super::check_dim(n);
        Self {
            n,
            kind: DomainKind::Equidistant { s },
        }
    }

    pub fn horoball(n: usize, chi: f64) -> Self {
        super::check_dim(n);
        assert!(chi > 0.0, "horoball parameter must be positive");
        Self {
            n,
            kind: DomainKind::Horoball { chi },
        }
    }

    pub fn horoball_complement(n: usize, chi: f64) -> Self {
        super::check_dim(n);
        assert!(chi > 0.0, "horoball parameter must be positive");
        Self {
            n,
            kind: DomainKind::HoroballComplement { chi },
        }
    }

    pub fn is_equidistant(&self) -> bool {
        matches!(self.kind, DomainKind::Equidistant { .. })
    }

    pub fn is_horospherical(&self) -> bool {
        !self.is_equidistant()
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            DomainKind::Equidistant { .. } => "equidistant",
            DomainKind::Horoball { .. } => "horoball",
            DomainKind::HoroballComplement { .. } => "horoball-complement",
        }
    }

    /// Umbilicity factor of the boundary: s/sqrt(1+s^2) for the equidistant
    /// domain, 1 for horospheres (-1 for the complement orientation).
    pub fn lambda(&self) -> f64 {
        match self.kind {
            DomainKind::Equidistant { s } => s / (1.0 + s * s).sqrt(),
            DomainKind::Horoball { .. } => 1.0,
            DomainKind::HoroballComplement { .. } => -1.0,
        }
    }

    /// Boundary angle with sin(theta) = lambda.
    pub fn theta(&self) -> f64 {
        self.lambda().asin()
    }

    /// tau = sin(theta) = lambda.
    pub fn tau(&self) -> f64 {
        self.lambda()
    }

    /// kappa = cos(theta) = 1/sqrt(1+s^2) in the equidistant case.
    pub fn kappa(&self) -> f64 {
        match self.kind {
            DomainKind::Equidistant { s } => 1.0 / (1.0 + s * s).sqrt(),
            _ => 0.0,
        }
    }

    /// The boundary defining function (V_(1) - s or V_h - chi for the
    /// horoball, chi - V_h for the complement so the domain is always
    /// {f <= 0} with outward normal along grad f).
    pub fn defining_potential(&self) -> (StaticPotential, f64) {
        match self.kind {
            DomainKind::Equidistant { s } => (StaticPotential::basis(self.n, 1), s),
            DomainKind::Horoball { chi } => (StaticPotential::horospherical(self.n), chi),
            DomainKind::HoroballComplement { chi } => (
                StaticPotential::horospherical(self.n).scale(-1.0),
                -chi,
            ),
        }
    }

    /// Signed boundary residual f(p) - level; negative strictly inside.
    pub fn boundary_residual(&self, p: &ModelPoint) -> f64 {
        let (f, level) = self.defining_potential();
        f.eval_native(p) - level
    }

    pub fn contains(&self, p: &ModelPoint) -> bool {
        self.boundary_residual(p) <= 1e-12
    }

    /// A point of the boundary lying on the axis of symmetry, in the ball
    /// chart.
    pub fn axis_boundary_point(&self) -> ModelPoint {
        let n = self.n;
        let mut y = DVector::zeros(n);
        match self.kind {
            DomainKind::Equidistant { s } => {
                // 2t/(1-t^2) = s  =>  t = s/(1+sqrt(1+s^2))
                y[0] = s / (1.0 + (1.0 + s * s).sqrt());
            }
            DomainKind::Horoball { chi } | DomainKind::HoroballComplement { chi } => {
                // bottom point of the horosphere on the axis
                y[0] = (1.0 - chi) / (1.0 + chi);
            }
        }
        ModelPoint::ball(y).expect("axis point is interior")
    }

    /// The admissible static potentials for the mass functional on this
    /// domain: {V_(0), V_(2), ..., V_(n)} in the equidistant case, and
    /// {V_h, V_(2), ..., V_(n)} in the horospherical cases.
    pub fn admissible_basis(&self) -> Vec<StaticPotential> {
        let n = self.n;
        let mut basis = Vec::with_capacity(n);
        match self.kind {
            DomainKind::Equidistant { .. } => {
                basis.push(StaticPotential::basis(n, 0));
            }
            _ => {
                basis.push(StaticPotential::horospherical(n));
            }
        }
        for j in 2..=n {
            basis.push(StaticPotential::basis(n, j));
        }
        basis
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn lambda_theta_kappa_consistent() {
        for &s in &[-2.0, -1.0, 0.0, 1.0, 2.0] {
            let d = DomainSpec::equidistant(3, s);
            assert_abs_diff_eq!(d.lambda(), d.theta().sin(), epsilon = 1e-15);
            assert_abs_diff_eq!(
                d.kappa() * d.kappa() + d.tau() * d.tau(),
                1.0,
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn axis_point_sits_on_boundary() {
        for &s in &[-1.5, 0.0, 0.8] {
            let d = DomainSpec::equidistant(4, s);
            assert_abs_diff_eq!(d.boundary_residual(&d.axis_boundary_point()), 0.0, epsilon = 1e-12);
        }
        for &chi in &[0.5, 1.0, 2.0] {
            let d = DomainSpec::horoball(3, chi);
            assert_abs_diff_eq!(d.boundary_residual(&d.axis_boundary_point()), 0.0, epsilon = 1e-12);
        }
    }
}
