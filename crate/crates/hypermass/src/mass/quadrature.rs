//! Quadrature on the geodesic-sphere portions bounding the exterior region:
//! tensor-product Gauss-Legendre in polar angles, periodic trapezoid in the
//! azimuth, recursively for higher-dimensional factors. Polar directions are
//! parameterized by angle, where the round measure sin^{m-1}(alpha) is
//! analytic and Gauss-Legendre converges spectrally. The half-space
//! hemisphere rule uses composite panels that are dyadic in the height
//! coordinate, which keeps the conformal weight resolved at every radius.

use nalgebra::DVector;

use crate::models::{DomainKind, DomainSpec};

/// One evaluation node of a hemisphere rule: chart coordinates, area weight
/// with respect to the model metric, and the outward unit normal (coordinate
/// components of the model-metric unit vector).
#[derive(Debug, Clone)]
pub struct HemisphereNode {
    pub point: DVector<f64>,
    pub weight: f64,
    pub mu: DVector<f64>,
}

/// One node of the corner-sphere rule on the boundary hypersurface: the
/// outward boundary normal eta and the outward conormal vartheta (both unit
/// for the model metric, coordinate components).
#[derive(Debug, Clone)]
pub struct CornerNode {
    pub point: DVector<f64>,
    pub weight: f64,
    pub eta: DVector<f64>,
    pub vartheta: DVector<f64>,
}

/// Quadrature rule at one radius: the hemisphere portion inside the domain
/// plus its corner sphere on the boundary.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub radius: f64,
    pub hemisphere: Vec<HemisphereNode>,
    pub corner: Vec<CornerNode>,
    /// Exact model area of the hemisphere portion (reference for the
    /// constant-1 test).
    pub exact_hemisphere_area: f64,
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1);
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let nf = order as f64;
    for k in 0..order.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = x;
            for j in 2..=order {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[k] = -x;
        nodes[order - 1 - k] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[k] = w;
        weights[order - 1 - k] = w;
    }
    (nodes, weights)
}

fn gauss_legendre_on(order: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (n, w) = gauss_legendre(order);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    (
        n.iter().map(|x| mid + half * x).collect(),
        w.iter().map(|v| v * half).collect(),
    )
}

/// Quadrature on the unit sphere of dimension m (embedded in R^{m+1}):
/// pairs of (unit vector, weight) integrating smooth functions against the
/// round measure.
pub fn unit_sphere_rule(
    m: usize,
    polar_order: usize,
    azimuthal_order: usize,
) -> Vec<(DVector<f64>, f64)> {
    sphere_cap_rule(m, 1.0, polar_order, azimuthal_order)
}

/// Cap rule on the unit sphere S^m: the portion {x_1 <= c}, the polar
/// direction parameterized by angle with x_1 = cos(alpha),
/// alpha in [acos(c), pi].
pub fn sphere_cap_rule(
    m: usize,
    c: f64,
    polar_order: usize,
    azimuthal_order: usize,
) -> Vec<(DVector<f64>, f64)> {
    let c = c.clamp(-1.0, 1.0);
    if c <= -1.0 {
        return Vec::new();
    }
    if m == 0 {
        let mut out = vec![(DVector::from_row_slice(&[-1.0]), 1.0)];
        if c >= 1.0 {
            out.push((DVector::from_row_slice(&[1.0]), 1.0));
        }
        return out;
    }
    if m == 1 {
        if c >= 1.0 {
            // full circle: periodic trapezoid
            let count = azimuthal_order.max(4);
            return (0..count)
                .map(|k| {
                    let phi = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
                    (
                        DVector::from_row_slice(&[phi.cos(), phi.sin()]),
                        2.0 * std::f64::consts::PI / count as f64,
                    )
                })
                .collect();
        }
        // arc {cos phi <= c}
        let alpha = c.acos();
        let (phis, ws) =
            gauss_legendre_on(polar_order.max(azimuthal_order), alpha, 2.0 * std::f64::consts::PI - alpha);
        return phis
            .iter()
            .zip(ws.iter())
            .map(|(phi, w)| (DVector::from_row_slice(&[phi.cos(), phi.sin()]), *w))
            .collect();
    }
    let alpha_min = c.acos();
    let (alphas, aws) = gauss_legendre_on(polar_order, alpha_min, std::f64::consts::PI);
    let inner = unit_sphere_rule(m - 1, polar_order, azimuthal_order);
    let mut out = Vec::with_capacity(alphas.len() * inner.len());
    for (alpha, wa) in alphas.iter().zip(aws.iter()) {
        let sin_a = alpha.sin();
        let jac = sin_a.powi(m as i32 - 1);
        for (psi, wp) in &inner {
            let mut x = DVector::zeros(m + 1);
            x[0] = alpha.cos();
            for i in 0..m {
                x[i + 1] = sin_a * psi[i];
            }
            out.push((x, jac * wa * wp));
        }
    }
    out
}

/// Total area of the unit sphere S^m.
pub fn sphere_area(m: usize) -> f64 {
    match m {
        0 => 2.0,
        1 => 2.0 * std::f64::consts::PI,
        2 => 4.0 * std::f64::consts::PI,
        3 => 2.0 * std::f64::consts::PI * std::f64::consts::PI,
        4 => 8.0 * std::f64::consts::PI * std::f64::consts::PI / 3.0,
        5 => std::f64::consts::PI.powi(3),
        _ => unreachable!("dimension out of supported range"),
    }
}

/// Closed form of int_{-1}^{c} (1 - u^2)^{(m-2)/2} du, the polar factor of
/// the cap area of S^m, m = 1..5.
pub fn cap_polar_integral(m: usize, c: f64) -> f64 {
    let c = c.clamp(-1.0, 1.0);
    let root = (1.0 - c * c).max(0.0).sqrt();
    match m {
        1 => c.asin() + std::f64::consts::FRAC_PI_2,
        2 => c + 1.0,
        3 => 0.5 * (c * root + c.asin()) + std::f64::consts::FRAC_PI_4,
        4 => c - c * c * c / 3.0 + 2.0 / 3.0,
        5 => {
            ((5.0 * c - 2.0 * c * c * c) * root + 3.0 * c.asin() + 1.5 * std::f64::consts::PI)
                / 8.0
        }
        _ => unreachable!(),
    }
}

/// Exact round area of the spherical cap {x_1 <= c} of S^m.
pub fn sphere_cap_area(m: usize, c: f64) -> f64 {
    if m == 1 {
        // the arc {cos(phi) <= c} has length 2 (pi - acos(c))
        return 2.0 * (-c.clamp(-1.0, 1.0)).acos();
    }
    sphere_area(m - 1) * cap_polar_integral(m, c)
}

fn conformal_omega(rho: f64) -> f64 {
    (1.0 - rho * rho) / 2.0
}

/// Ball-chart radius of the geodesic sphere with radial coordinate r.
pub fn ball_radius_for(r: f64) -> f64 {
    r / (1.0 + (1.0 + r * r).sqrt())
}

/// Rule over the portion of the geodesic sphere of radial coordinate r that
/// lies inside the equidistant domain, built in the ball chart, together
/// with its corner sphere on the boundary.
pub fn equidistant_rule(
    domain: &DomainSpec,
    r: f64,
    polar_order: usize,
    azimuthal_order: usize,
) -> QuadratureRule {
    let n = domain.n;
    let s = match domain.kind {
        DomainKind::Equidistant { s } => s,
        _ => panic!("equidistant rule on a horospherical domain"),
    };
    let rho = ball_radius_for(r);
    let w = conformal_omega(rho);
    // cap condition: first coordinate of the unit direction <= c_u
    let c_u = (s * w / rho).clamp(-1.0, 1.0);

    let mut hemisphere = Vec::new();
    for (dir, wt) in sphere_cap_rule(n - 1, c_u, polar_order, azimuthal_order) {
        let y = &dir * rho;
        let weight = w.powi(-(n as i32 - 1)) * rho.powi(n as i32 - 1) * wt;
        let mu = &dir * w;
        hemisphere.push(HemisphereNode {
            point: y,
            weight,
            mu,
        });
    }
    let exact_hemisphere_area =
        w.powi(-(n as i32 - 1)) * rho.powi(n as i32 - 1) * sphere_cap_area(n - 1, c_u);

    let mut corner = Vec::new();
    if c_u.abs() < 1.0 {
        let s_perp = (1.0 - c_u * c_u).sqrt();
        for (psi, wt) in unit_sphere_rule(n - 2, polar_order, azimuthal_order) {
            let mut dir = DVector::zeros(n);
            dir[0] = c_u;
            for i in 0..n - 1 {
                dir[i + 1] = s_perp * psi[i];
            }
            let y = &dir * rho;
            let weight = w.powi(-(n as i32 - 2)) * (rho * s_perp).powi(n as i32 - 2) * wt;
            // outward boundary normal direction: gradient of the first
            // coordinate potential
            let mut grad = y.clone() * y[0];
            grad[0] += w;
            let eta_dir = grad.normalize();
            // conormal: radial direction projected onto the boundary
            let mut t = dir.clone();
            let c = t.dot(&eta_dir);
            t -= &eta_dir * c;
            let vartheta = t.normalize() * w;
            corner.push(CornerNode {
                point: y,
                weight,
                eta: eta_dir * w,
                vartheta,
            });
        }
    }

    QuadratureRule {
        radius: r,
        hemisphere,
        corner,
        exact_hemisphere_area,
    }
}

/// Composite polar panels for the half-space hemisphere: angle intervals
/// whose images are dyadic in the height coordinate, so the conformal area
/// weight varies by a bounded factor inside each panel. `side` is +1 for the
/// upper hemisphere and -1 for the lower one.
fn horospherical_panels(h0: f64, r: f64, side: f64) -> Vec<(f64, f64)> {
    // beta measured from the boundary plane: z_1 = h0 + side * r * sin(beta)
    let mut cuts = vec![0.0];
    if side > 0.0 {
        let mut v = h0;
        while v < r {
            let beta = (v / r).asin();
            if beta > 1e-12 && beta < std::f64::consts::FRAC_PI_2 - 1e-12 {
                cuts.push(beta);
            }
            v *= 2.0;
        }
    } else {
        // dyadic height levels climbing up from the bottom of the hemisphere
        let z_bot = h0 - r;
        assert!(z_bot > 0.0);
        let mut z = 2.0 * z_bot;
        let mut betas = Vec::new();
        while z < h0 {
            let beta = ((h0 - z) / r).asin();
            if beta > 1e-12 && beta < std::f64::consts::FRAC_PI_2 - 1e-12 {
                betas.push(beta);
            }
            z *= 2.0;
        }
        betas.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.extend(betas);
    }
    cuts.push(std::f64::consts::FRAC_PI_2);
    cuts.windows(2).map(|w| (w[0], w[1])).collect()
}

/// Rule over the Euclidean hemisphere centered at the boundary point of the
/// axis in the half-space chart, lying inside the domain (above the
/// horosphere for the horoball, below for the complement). The parameter r
/// is the radius-schedule coordinate: the Euclidean radius itself for the
/// horoball, and h0 * r / (1 + r) for the complement, whose asymptotic end
/// sits at the chart floor.
pub fn horospherical_rule(
    domain: &DomainSpec,
    r: f64,
    polar_order: usize,
    azimuthal_order: usize,
) -> QuadratureRule {
    let n = domain.n;
    let (upper, chi) = match domain.kind {
        DomainKind::Horoball { chi } => (true, chi),
        DomainKind::HoroballComplement { chi } => (false, chi),
        DomainKind::Equidistant { .. } => panic!("horospherical rule on an equidistant domain"),
    };
    // the horosphere sits at height 1/chi in the half-space chart
    let h0 = 1.0 / chi;
    let mut center = DVector::zeros(n);
    center[0] = h0;
    let side = if upper { 1.0 } else { -1.0 };
    let r_euclid = if upper { r } else { h0 * r / (1.0 + r) };

    let inner = unit_sphere_rule(n - 2, polar_order, azimuthal_order);
    let panels = horospherical_panels(h0, r_euclid, side);
    let mut hemisphere = Vec::new();
    let mut exact = 0.0;
    for &(b0, b1) in &panels {
        let (betas, bws) = gauss_legendre_on(polar_order, b0, b1);
        for (beta, wb) in betas.iter().zip(bws.iter()) {
            let cos_b = beta.cos();
            let jac = cos_b.powi(n as i32 - 2);
            let z1 = h0 + side * r_euclid * beta.sin();
            let conf = z1.powi(-(n as i32 - 1));
            for (psi, wp) in &inner {
                let mut z = DVector::zeros(n);
                z[0] = z1;
                for i in 0..n - 1 {
                    z[i + 1] = r_euclid * cos_b * psi[i];
                }
                let weight = r_euclid.powi(n as i32 - 1) * jac * conf * wb * wp;
                let mu = (&z - &center) * (z1 / r_euclid);
                hemisphere.push(HemisphereNode {
                    point: z,
                    weight,
                    mu,
                });
            }
        }
        // reference area: much higher order on the same panel
        let (rn, rw) = gauss_legendre_on(polar_order * 8 + 200, b0, b1);
        for (beta, wb) in rn.iter().zip(rw.iter()) {
            let z1 = h0 + side * r_euclid * beta.sin();
            exact += beta.cos().powi(n as i32 - 2) * z1.powi(-(n as i32 - 1)) * wb;
        }
    }
    exact *= sphere_area(n - 2) * r_euclid.powi(n as i32 - 1);

    // corner: the (n-2)-sphere inside the horosphere
    let mut corner = Vec::new();
    for (psi, wt) in unit_sphere_rule(n - 2, polar_order, azimuthal_order) {
        let mut z = center.clone();
        for i in 0..n - 1 {
            z[i + 1] = r_euclid * psi[i];
        }
        // model-metric area element and unit vectors at height h0
        let weight = r_euclid.powi(n as i32 - 2) * h0.powi(-(n as i32 - 2)) * wt;
        let mut eta = DVector::zeros(n);
        eta[0] = -side * h0;
        let vartheta = (&z - &center) * (h0 / r_euclid);
        corner.push(CornerNode {
            point: z,
            weight,
            eta,
            vartheta,
        });
    }

    QuadratureRule {
        radius: r,
        hemisphere,
        corner,
        exact_hemisphere_area: exact,
    }
}

/// Dispatch on the domain kind.
pub fn domain_rule(
    domain: &DomainSpec,
    r: f64,
    polar_order: usize,
    azimuthal_order: usize,
) -> QuadratureRule {
    if domain.is_equidistant() {
        equidistant_rule(domain, r, polar_order, azimuthal_order)
    } else {
        horospherical_rule(domain, r, polar_order, azimuthal_order)
    }
}

impl QuadratureRule {
    /// Integral of the constant 1 over the hemisphere, minus the exact area.
    pub fn area_defect(&self) -> f64 {
        let total: f64 = self.hemisphere.iter().map(|n| n.weight).sum();
        total - self.exact_hemisphere_area
    }
}
