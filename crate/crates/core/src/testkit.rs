//! Independent reference computations used only by this crate's tests.
//!
//! Everything here deliberately avoids the production code paths: complete
//! elliptic integrals come from the arithmetic-geometric mean, and integrals
//! come from adaptive Simpson on manually desingularized integrands.

/// Complete elliptic integral K(k), modulus convention, via the AGM:
/// K(k) = pi / (2 * agm(1, sqrt(1 - k^2))).
pub fn agm_elliptic_k(k: f64) -> f64 {
    assert!((0.0..1.0).contains(&k));
    let mut a = 1.0f64;
    let mut b = (1.0 - k * k).sqrt();
    for _ in 0..64 {
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        if (an - bn).abs() <= 1e-17 * an {
            a = an;
            break;
        }
        a = an;
        b = bn;
    }
    std::f64::consts::PI / (2.0 * a)
}

/// Adaptive Simpson integration of a smooth integrand.
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(a: f64, fa: f64, b: f64, fb: f64, fm: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(a, fa, m, fm, flm);
        let right = simpson(m, fm, b, fb, frm);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1)
                + recurse(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = simpson(a, fa, b, fb, fm);
    recurse(&f, a, fa, b, fb, fm, whole, tol, 48)
}

/// integral_{-1}^{1} g(x) (1-x^2)^{-1/2} dx via x = sin(phi), adaptive Simpson.
pub fn arcsine_integral(g: &impl Fn(f64) -> f64, tol: f64) -> f64 {
    let h = |phi: f64| g(phi.sin());
    adaptive_simpson(
        &h,
        -std::f64::consts::FRAC_PI_2,
        std::f64::consts::FRAC_PI_2,
        tol,
    )
}
