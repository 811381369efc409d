//! The mass functional: hemisphere flux of the charge form minus the corner
//! correction, its limit along a geometric radius schedule, and the derived
//! mass vectors and horospherical invariants.

use nalgebra::DVector;
use rayon::prelude::*;

use super::charge::charge_form;
use super::conventions::NormalConventions;
use super::quadrature::{domain_rule, QuadratureRule};
use crate::error::{Error, Result};
use crate::models::{ball_radial_coordinate, Chart, DomainKind, DomainSpec, StaticPotential};
use crate::tensors::{
    model_metric, potential_scalar_field, MetricField, Point, ScalarField, TensorField2,
};

/// Perturbation data on the exterior region of a model domain. The chart is
/// fixed by the domain kind: ball coordinates for equidistant domains,
/// half-space coordinates for horospherical ones.
#[derive(Clone)]
pub struct AsymptoticData {
    pub domain: DomainSpec,
    pub e: TensorField2,
    /// Stated decay rate of the frame norm of e.
    pub sigma: f64,
    /// Inner cutoff of the radius schedule.
    pub r0: f64,
}

impl AsymptoticData {
    pub fn zero(domain: DomainSpec, sigma: f64, r0: f64) -> Self {
        Self {
            e: TensorField2::zero(domain.n),
            domain,
            sigma,
            r0,
        }
    }

    pub fn chart(&self) -> Chart {
        if self.domain.is_equidistant() {
            Chart::Ball
        } else {
            Chart::HalfSpace
        }
    }

    pub fn background(&self) -> MetricField {
        model_metric(self.chart(), self.domain.n)
    }

    pub fn metric(&self) -> MetricField {
        MetricField::perturbed(&self.background(), &self.e)
    }

    /// Hyperboloid radial coordinate of a chart point.
    pub fn radial(&self, p: &Point) -> f64 {
        match self.chart() {
            Chart::Ball => ball_radial_coordinate(p),
            Chart::HalfSpace => {
                let x0 = (p.norm_squared() + 1.0) / (2.0 * p[0]);
                (x0 * x0 - 1.0).max(0.0).sqrt()
            }
            Chart::Hyperboloid => p.norm(),
        }
    }

    /// Frame norm of e at a chart point (orthonormal-frame components).
    pub fn frame_norm(&self, p: &Point) -> f64 {
        let conf = match self.chart() {
            Chart::Ball => (1.0 - p.norm_squared()) / 2.0,
            Chart::HalfSpace => p[0],
            Chart::Hyperboloid => unreachable!(),
        };
        conf * conf * self.e.eval(p).norm()
    }

    /// Sampled decay estimate sup |e|_b r^sigma over quadrature nodes at a
    /// few radii in [r0, 8 r0].
    pub fn decay_estimate(&self) -> f64 {
        let mut sup: f64 = 0.0;
        for k in 0..=3 {
            let r = self.r0 * 2f64.powi(k);
            let rule = domain_rule(&self.domain, r, 6, 12);
            for node in rule.hemisphere.iter().take(50) {
                let rad = self.radial(&node.point).max(1.0);
                sup = sup.max(self.frame_norm(&node.point) * rad.powf(self.sigma));
            }
        }
        sup
    }
}

/// Quadrature orders for the hemisphere rules.
#[derive(Debug, Clone, Copy)]
pub struct QuadOrders {
    pub polar: usize,
    pub azimuthal: usize,
}

impl Default for QuadOrders {
    fn default() -> Self {
        Self {
            polar: 20,
            azimuthal: 40,
        }
    }
}

/// One row of the per-radius table.
#[derive(Debug, Clone, Copy)]
pub struct RadiusRow {
    pub radius: f64,
    pub hemisphere_term: f64,
    pub corner_term: f64,
    pub total: f64,
}

fn check_admissible(domain: &DomainSpec, v: &StaticPotential) -> Result<()> {
    match domain.kind {
        DomainKind::Equidistant { .. } => {
            if !v.admissible_equidistant(1e-12) {
                return Err(Error::InadmissiblePotential(
                    "the first coordinate potential is not static for the equidistant domain"
                        .into(),
                ));
            }
        }
        _ => {
            if !v.admissible_horospherical(1e-12) {
                return Err(Error::InadmissiblePotential(
                    "horospherical domains admit only the horospherical combination and the \
                     transverse coordinate potentials"
                        .into(),
                ));
            }
        }
    }
    Ok(())
}

/// The bracketed quantity at one radius: the hemisphere integral of
/// <U(V, e), mu> minus the corner integral of V e(eta, vartheta).
pub fn mass_at_radius(
    data: &AsymptoticData,
    v: &StaticPotential,
    r: f64,
    orders: QuadOrders,
    conv: &NormalConventions,
) -> Result<RadiusRow> {
    check_admissible(&data.domain, v)?;
    let rule = domain_rule(&data.domain, r, orders.polar, orders.azimuthal);
    mass_on_rule(data, v, &rule, conv)
}

fn mass_on_rule(
    data: &AsymptoticData,
    v: &StaticPotential,
    rule: &QuadratureRule,
    conv: &NormalConventions,
) -> Result<RadiusRow> {
    let chart = data.chart();
    let b = data.background();
    let vf = potential_scalar_field(chart, v);

    // hemisphere nodes in parallel, reduced in index order so results are
    // identical for every thread count
    let hemi_vals: Vec<Result<f64>> = rule
        .hemisphere
        .par_iter()
        .map(|node| {
            let u = charge_form(&vf, &data.e, &b, &node.point)?;
            Ok(node.weight * conv.mu_sign * u.dot(&node.mu))
        })
        .collect();
    let mut hemisphere_term = 0.0;
    for val in hemi_vals {
        hemisphere_term += val?;
    }

    let corner_sign = match data.domain.kind {
        DomainKind::HoroballComplement { .. } if conv.complement_corner_flip => -1.0,
        _ => 1.0,
    };
    let corner_vals: Vec<f64> = rule
        .corner
        .par_iter()
        .map(|node| {
            let ev = data.e.eval(&node.point);
            let vv = vf.eval(&node.point);
            node.weight
                * vv
                * (node.eta.transpose() * &ev * &node.vartheta)[(0, 0)]
                * conv.eta_sign
                * conv.vartheta_sign
                * corner_sign
        })
        .collect();
    let corner_term: f64 = corner_vals.iter().sum();

    Ok(RadiusRow {
        radius: rule.radius,
        hemisphere_term,
        corner_term,
        total: hemisphere_term - corner_term,
    })
}

/// Limit estimate along a radius schedule.
#[derive(Debug, Clone)]
pub struct MassEstimate {
    pub value: f64,
    pub error_estimate: f64,
    pub converged: bool,
    pub rows: Vec<RadiusRow>,
}

/// Geometric schedule r_k = r0 * 2^k, k = 0..=steps.
pub fn geometric_schedule(r0: f64, steps: usize) -> Vec<f64> {
    (0..=steps).map(|k| r0 * 2f64.powi(k as i32)).collect()
}

/// One elimination pass: each triple is extrapolated with its own locally
/// estimated geometric ratio (Aitken), which removes the leading power-law
/// term of the tail on a doubling radius schedule.
fn aitken_level(vals: &[f64], scale: f64) -> Vec<f64> {
    (0..vals.len() - 2)
        .map(|k| {
            let d1 = vals[k + 1] - vals[k];
            let d2 = vals[k + 2] - vals[k + 1];
            let denom = d2 - d1;
            if denom.abs() < 1e-15 * scale {
                vals[k + 2]
            } else {
                vals[k + 2] - d2 * d2 / denom
            }
        })
        .collect()
}

/// Extrapolation of the per-radius values assuming a power-law tail:
/// iterated per-triple elimination, stopping when a deeper level stops
/// improving the tail spread. Successive level-0 differences must shrink,
/// otherwise the estimate is flagged as non-converged.
pub fn extrapolate(values: &[(f64, f64)]) -> (f64, f64, bool) {
    assert!(values.len() >= 3, "need at least 3 radii");
    let vals: Vec<f64> = values.iter().map(|(_, v)| *v).collect();
    let k = vals.len();
    let scale = vals.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1e-30);
    let d_prev = vals[k - 2] - vals[k - 3];
    let d_last = vals[k - 1] - vals[k - 2];
    if d_last.abs() < 1e-13 * scale {
        // already settled (or identically zero beyond a compact support)
        return (vals[k - 1], d_last.abs(), true);
    }
    if d_last.abs() >= 0.95 * d_prev.abs() {
        // differences not shrinking: no power-law convergence
        return (vals[k - 1], d_last.abs(), false);
    }
    let mut seq = vals;
    let mut tail_spread = d_last.abs();
    while seq.len() >= 3 {
        let next = aitken_level(&seq, scale);
        let new_spread = if next.len() >= 2 {
            (next[next.len() - 1] - next[next.len() - 2]).abs()
        } else {
            (next[0] - seq[seq.len() - 1]).abs().min(tail_spread)
        };
        if new_spread > 0.5 * tail_spread {
            break;
        }
        seq = next;
        tail_spread = new_spread;
    }
    (*seq.last().unwrap(), tail_spread, true)
}

/// Mass estimate for one admissible potential.
pub fn mass_limit(
    data: &AsymptoticData,
    v: &StaticPotential,
    schedule: &[f64],
    orders: QuadOrders,
    conv: &NormalConventions,
) -> Result<MassEstimate> {
    if schedule.len() < 3 {
        return Err(Error::BadSchedule("need at least 3 radii".into()));
    }
    if schedule.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::BadSchedule("schedule must increase".into()));
    }
    let mut rows = Vec::with_capacity(schedule.len());
    for &r in schedule {
        rows.push(mass_at_radius(data, v, r, orders, conv)?);
    }
    let pairs: Vec<(f64, f64)> = rows.iter().map(|row| (row.radius, row.total)).collect();
    let (value, error_estimate, converged) = extrapolate(&pairs);
    Ok(MassEstimate {
        value,
        error_estimate,
        converged,
        rows,
    })
}

/// Causal type of a mass vector under the Lorentzian pairing that makes the
/// admissible basis orthonormal with signature (+, -, ..., -).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CausalClass {
    Zero,
    TimelikeFuture,
    TimelikePast,
    Null,
    Spacelike,
}

impl CausalClass {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Zero => "zero",
            Self::TimelikeFuture => "timelike-future",
            Self::TimelikePast => "timelike-past",
            Self::Null => "null",
            Self::Spacelike => "spacelike",
        }
    }
}

/// Components of the equidistant mass functional over the admissible basis.
#[derive(Debug, Clone)]
pub struct MassVector {
    /// (P_0, P_2, ..., P_n).
    pub components: Vec<f64>,
    pub error_estimate: f64,
    pub converged: bool,
}

impl MassVector {
    /// Lorentzian length^2: P_0^2 - sum of the spatial components squared.
    pub fn norm_squared(&self) -> f64 {
        let head = self.components[0] * self.components[0];
        let tail: f64 = self.components[1..].iter().map(|c| c * c).sum();
        head - tail
    }

    /// Causal classification at the stated tolerance; the Lorentzian length
    /// is defined for the timelike and null classes only.
    pub fn classify(&self, tol: f64) -> (CausalClass, Option<f64>) {
        let mag = self.components.iter().map(|c| c.abs()).fold(0.0, f64::max);
        if mag <= tol {
            return (CausalClass::Zero, Some(0.0));
        }
        let q = self.norm_squared();
        if q.abs() <= tol * tol {
            return (CausalClass::Null, Some(0.0));
        }
        if q > 0.0 {
            let class = if self.components[0] > 0.0 {
                CausalClass::TimelikeFuture
            } else {
                CausalClass::TimelikePast
            };
            (class, Some(q.sqrt()))
        } else {
            (CausalClass::Spacelike, None)
        }
    }
}

/// Assemble the mass vector of an equidistant-domain data set.
pub fn mass_vector(
    data: &AsymptoticData,
    schedule: &[f64],
    orders: QuadOrders,
    conv: &NormalConventions,
) -> Result<MassVector> {
    if !data.domain.is_equidistant() {
        return Err(Error::WrongDomain {
            expected: "equidistant",
            got: data.domain.kind_name(),
        });
    }
    let mut components = Vec::new();
    let mut err: f64 = 0.0;
    let mut converged = true;
    for v in data.domain.admissible_basis() {
        let est = mass_limit(data, &v, schedule, orders, conv)?;
        components.push(est.value);
        err = err.max(est.error_estimate);
        converged &= est.converged;
    }
    Ok(MassVector {
        components,
        error_estimate: err,
        converged,
    })
}

/// The horospherical invariants: the scalar mass along the horospherical
/// potential and the center vector along the transverse potentials (with
/// the degenerate pairing making the transverse basis negative-definite).
#[derive(Debug, Clone)]
pub struct HoroInvariants {
    pub mass: f64,
    pub center: Vec<f64>,
    pub error_estimate: f64,
    pub converged: bool,
}

pub fn horo_invariants(
    data: &AsymptoticData,
    schedule: &[f64],
    orders: QuadOrders,
    conv: &NormalConventions,
) -> Result<HoroInvariants> {
    if data.domain.is_equidistant() {
        return Err(Error::WrongDomain {
            expected: "horoball or horoball-complement",
            got: data.domain.kind_name(),
        });
    }
    let n = data.domain.n;
    let vh = StaticPotential::horospherical(n);
    let est = mass_limit(data, &vh, schedule, orders, conv)?;
    let mut err = est.error_estimate;
    let mut converged = est.converged;
    let mut center = Vec::with_capacity(n - 1);
    for j in 2..=n {
        let cj = mass_limit(data, &StaticPotential::basis(n, j), schedule, orders, conv)?;
        // the transverse pairing is negative-definite
        center.push(-cj.value);
        err = err.max(cj.error_estimate);
        converged &= cj.converged;
    }
    Ok(HoroInvariants {
        mass: est.value,
        center,
        error_estimate: err,
        converged,
    })
}

/// Pull back asymptotic data by a chart self-map given as a closure with its
/// Jacobian: (F^* e)(p) = J^T e(F p) J plus the background pullback defect
/// J^T b(F p) J - b(p) (zero when F is an isometry of the model).
pub fn pull_back_data<F, J>(data: &AsymptoticData, map: F, jac: J) -> AsymptoticData
where
    F: Fn(&Point) -> Point + Send + Sync + 'static,
    J: Fn(&Point) -> nalgebra::DMatrix<f64> + Send + Sync + 'static,
{
    let b = data.background();
    let e = data.e.clone();
    let pulled = TensorField2::from_fn(data.domain.n, move |p: &Point| {
        let q = map(p);
        let j = jac(p);
        j.transpose() * (b.eval(&q) + e.eval(&q)) * &j - b.eval(p)
    });
    AsymptoticData {
        domain: data.domain,
        e: pulled,
        sigma: data.sigma,
        r0: data.r0,
    }
}

/// Scalar field of a potential in the data's chart (convenience used by the
/// runners).
pub fn data_potential_field(data: &AsymptoticData, v: &StaticPotential) -> ScalarField {
    potential_scalar_field(data.chart(), v)
}

/// An independent mass estimate: a one-off window anchored ten inner cutoffs
/// out, evaluated with a much higher-order quadrature rule. Agreement with
/// the default-schedule limit cross-checks both the quadrature orders and
/// the radius window.
pub fn high_order_oracle(
    data: &AsymptoticData,
    v: &StaticPotential,
    conv: &NormalConventions,
) -> Result<f64> {
    let orders = QuadOrders {
        polar: 48,
        azimuthal: 96,
    };
    let anchor = 10.0 * data.r0;
    let schedule = [anchor, 2.0 * anchor, 4.0 * anchor, 8.0 * anchor];
    Ok(mass_limit(data, v, &schedule, orders, conv)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::DMatrix;

    fn conformal_data(domain: DomainSpec, amp: f64, sigma: f64) -> AsymptoticData {
        // e = amp * x_0^{-sigma} * b, with analytic first derivatives; losing
        // them to finite differences would let the area factor amplify the
        // rounding noise at large radii
        let n = domain.n;
        let equi = domain.is_equidistant();
        let v0 = StaticPotential::basis(n, 0);
        let scalars = move |p: &Point| -> (f64, f64, DVector<f64>, DVector<f64>) {
            // (conf, x0, grad conf, grad x0)
            if equi {
                let conf = (1.0 - p.norm_squared()) / 2.0;
                let x0 = (1.0 + p.norm_squared()) / (2.0 * conf);
                let dconf = -p.clone();
                let dx0 = p / (conf * conf);
                (conf, x0, dconf, dx0)
            } else {
                let conf = p[0];
                let x0 = (p.norm_squared() + 1.0) / (2.0 * p[0]);
                let mut dconf = DVector::zeros(p.len());
                dconf[0] = 1.0;
                let mut dx0 = p / p[0];
                dx0[0] -= (p.norm_squared() + 1.0) / (2.0 * p[0] * p[0]);
                (conf, x0, dconf, dx0)
            }
        };
        let e = TensorField2::from_fn(n, move |p: &Point| {
            let (conf, x0, _, _) = scalars(p);
            DMatrix::identity(n, n) * (amp * x0.powf(-sigma) / (conf * conf))
        })
        .with_grad(move |p: &Point| {
            let (conf, x0, dconf, dx0) = scalars(p);
            (0..n)
                .map(|k| {
                    let c = amp
                        * (-sigma * x0.powf(-sigma - 1.0) * dx0[k] / (conf * conf)
                            - 2.0 * x0.powf(-sigma) * dconf[k] / (conf * conf * conf));
                    DMatrix::identity(n, n) * c
                })
                .collect()
        });
        let _ = v0;
        AsymptoticData {
            domain,
            e,
            sigma,
            r0: 4.0,
        }
    }

    #[test]
    fn zero_data_gives_zero_mass() {
        let domain = DomainSpec::equidistant(3, 0.5);
        let data = AsymptoticData::zero(domain, 4.0, 4.0);
        let conv = NormalConventions::default();
        let schedule = geometric_schedule(4.0, 4);
        for v in domain.admissible_basis() {
            let est = mass_limit(&data, &v, &schedule, QuadOrders::default(), &conv).unwrap();
            assert_abs_diff_eq!(est.value, 0.0);
            assert!(est.converged);
        }
        let mv = mass_vector(&data, &schedule, QuadOrders::default(), &conv).unwrap();
        let (class, norm) = mv.classify(1e-10);
        assert_eq!(class, CausalClass::Zero);
        assert_eq!(norm, Some(0.0));
    }

    #[test]
    fn inadmissible_potentials_rejected() {
        let domain = DomainSpec::equidistant(3, 0.0);
        let data = AsymptoticData::zero(domain, 4.0, 4.0);
        let conv = NormalConventions::default();
        let v1 = StaticPotential::basis(3, 1);
        assert!(matches!(
            mass_at_radius(&data, &v1, 4.0, QuadOrders::default(), &conv),
            Err(Error::InadmissiblePotential(_))
        ));
        let horo = DomainSpec::horoball(3, 1.0);
        let datah = AsymptoticData::zero(horo, 4.0, 4.0);
        for i in [0usize, 1] {
            let v = StaticPotential::basis(3, i);
            assert!(matches!(
                mass_at_radius(&datah, &v, 4.0, QuadOrders::default(), &conv),
                Err(Error::InadmissiblePotential(_))
            ));
        }
        // but the horospherical combination passes
        let vh = StaticPotential::horospherical(3);
        assert!(mass_at_radius(&datah, &vh, 4.0, QuadOrders::default(), &conv).is_ok());
    }

    #[test]
    fn conformal_decay_mass_converges() {
        let n = 3;
        let domain = DomainSpec::equidistant(n, 0.6);
        let data = conformal_data(domain, 1e-2, (n + 1) as f64);
        let conv = NormalConventions::default();
        let schedule = geometric_schedule(4.0, 5);
        let v0 = StaticPotential::basis(n, 0);
        let est = mass_limit(&data, &v0, &schedule, QuadOrders::default(), &conv).unwrap();
        assert!(est.converged, "no convergence: rows {:?}", est.rows);
        // independent high-order window far out
        let oracle = high_order_oracle(&data, &v0, &conv).unwrap();
        assert!(
            (est.value - oracle).abs() < 1e-5,
            "limit {} vs oracle {}",
            est.value,
            oracle
        );
        // fast decay forces a vanishing limit
        assert!(est.value.abs() < 1e-4, "limit {}", est.value);
    }

    #[test]
    fn shallow_decay_flags_nonconvergence() {
        // sigma below the finite-mass threshold: the bracket drifts and the
        // extrapolation must flag it
        let n = 3;
        let domain = DomainSpec::equidistant(n, 0.0);
        let data = conformal_data(domain, 1e-2, 1.2);
        let conv = NormalConventions::default();
        let schedule = geometric_schedule(4.0, 5);
        let v0 = StaticPotential::basis(n, 0);
        let est = mass_limit(&data, &v0, &schedule, QuadOrders::default(), &conv).unwrap();
        assert!(
            !est.converged,
            "shallow decay unexpectedly converged: {:?}",
            est.rows
        );
    }

    #[test]
    fn horospherical_zero_data() {
        let domain = DomainSpec::horoball(3, 1.0);
        let data = AsymptoticData::zero(domain, 4.0, 4.0);
        let conv = NormalConventions::default();
        let schedule = geometric_schedule(4.0, 3);
        let inv = horo_invariants(&data, &schedule, QuadOrders::default(), &conv).unwrap();
        assert_abs_diff_eq!(inv.mass, 0.0);
        for c in inv.center {
            assert_abs_diff_eq!(c, 0.0);
        }
    }

    #[test]
    fn wrong_domain_errors() {
        let conv = NormalConventions::default();
        let schedule = geometric_schedule(4.0, 3);
        let eq = AsymptoticData::zero(DomainSpec::equidistant(3, 0.0), 4.0, 4.0);
        assert!(matches!(
            horo_invariants(&eq, &schedule, QuadOrders::default(), &conv),
            Err(Error::WrongDomain { .. })
        ));
        let ho = AsymptoticData::zero(DomainSpec::horoball(3, 1.0), 4.0, 4.0);
        assert!(matches!(
            mass_vector(&ho, &schedule, QuadOrders::default(), &conv),
            Err(Error::WrongDomain { .. })
        ));
    }

    #[test]
    fn schedule_validation() {
        let data = AsymptoticData::zero(DomainSpec::equidistant(3, 0.0), 4.0, 4.0);
        let conv = NormalConventions::default();
        let v0 = StaticPotential::basis(3, 0);
        assert!(matches!(
            mass_limit(&data, &v0, &[4.0, 8.0], QuadOrders::default(), &conv),
            Err(Error::BadSchedule(_))
        ));
        assert!(matches!(
            mass_limit(&data, &v0, &[4.0, 8.0, 6.0], QuadOrders::default(), &conv),
            Err(Error::BadSchedule(_))
        ));
    }
}
