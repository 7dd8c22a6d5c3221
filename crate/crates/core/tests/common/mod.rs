//! Shared oracles for the integration suites: values computed by methods
//! independent of the library's own quadrature/theta/exchange machinery.

use twogap::Fx;

/// Complete elliptic integral K(k) = ∫₀^{π/2} dθ/√(1−k²sin²θ) by the
/// arithmetic-geometric mean: K = π / (2·AGM(1, √(1−k²))).
pub fn elliptic_k_agm(k: f64) -> f64 {
    assert!((0.0..1.0).contains(&k));
    let mut a = 1.0f64;
    let mut b = (1.0 - k * k).sqrt();
    for _ in 0..64 {
        if (a - b).abs() <= 1e-17 * a {
            break;
        }
        let am = 0.5 * (a + b);
        let gm = (a * b).sqrt();
        a = am;
        b = gm;
    }
    std::f64::consts::PI / (2.0 * a)
}

/// Chebyshev values T_n(3) by the integer recurrence T_{k+1} = 6T_k − T_{k−1}.
pub fn chebyshev_t_at_3(n: u32) -> i64 {
    let (mut t0, mut t1) = (1i64, 3i64);
    match n {
        0 => 1,
        1 => 3,
        _ => {
            for _ in 2..=n {
                let t2 = 6 * t1 - t0;
                t0 = t1;
                t1 = t2;
            }
            t1
        }
    }
}

/// |x − y| / |y| evaluated in fixed point (both operands must share a
/// precision context), reported as f64.
pub fn fx_rel_diff(x: &Fx, y: &Fx) -> f64 {
    let diff = x.sub(y).abs();
    let denom = y.abs();
    diff.div(&denom)
        .expect("reference value must be nonzero")
        .to_f64()
}
