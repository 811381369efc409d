use hypermass::mass::*;
use hypermass::models::*;
use hypermass::tensors::*;
use nalgebra::DMatrix;

fn main() {
    let n = 3;
    let domain = DomainSpec::equidistant(n, 0.6);
    let amp = 1e-2;
    let sigma = 4.0;
    let e = TensorField2::from_fn(n, move |p: &Point| {
        let conf = (1.0 - p.norm_squared()) / 2.0;
        let x0 = (1.0 + p.norm_squared()) / (2.0 * conf);
        DMatrix::identity(n, n) * (amp * x0.powf(-sigma) / (conf * conf))
    })
    .with_grad(move |p: &Point| {
        let conf = (1.0 - p.norm_squared()) / 2.0;
        let x0 = (1.0 + p.norm_squared()) / (2.0 * conf);
        let dconf = -p.clone();
        let dx0 = p / (conf * conf);
        (0..n)
            .map(|k| {
                let c = amp
                    * (-sigma * x0.powf(-sigma - 1.0) * dx0[k] / (conf * conf)
                        - 2.0 * x0.powf(-sigma) * dconf[k] / (conf * conf * conf));
                DMatrix::identity(n, n) * c
            })
            .collect()
    });
    let data = AsymptoticData { domain, e, sigma, r0: 4.0 };
    let conv = NormalConventions::default();
    let v0 = StaticPotential::basis(n, 0);
    for orders in [QuadOrders { polar: 20, azimuthal: 40 }, QuadOrders { polar: 48, azimuthal: 96 }] {
        println!("orders {:?}", orders);
        for &r in &[4.0, 8.0, 16.0, 32.0, 64.0, 128.0] {
            let row = mass_at_radius(&data, &v0, r, orders, &conv).unwrap();
            println!("  r={:6.1} hemi={:+.8e} corner={:+.8e} total={:+.8e}", r, row.hemisphere_term, row.corner_term, row.total);
        }
    }
}
