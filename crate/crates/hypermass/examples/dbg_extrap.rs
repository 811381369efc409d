use hypermass::mass::extrapolate;
fn main() {
    let vals = [
        (4.0, 0.160014685f64),
        (8.0, 0.0818524306),
        (16.0, 0.0404260841),
        (32.0, 0.0199640981),
        (64.0, 0.00990467903),
        (128.0, 0.00493114627),
    ];
    let (v, e, c) = extrapolate(&vals);
    println!("value {v:.6e} err {e:.3e} converged {c}");
}
