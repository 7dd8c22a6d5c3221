//! Geometry of the two-interval set `[-A,-1] u [1,B]` and the conformal
//! characteristics of its complement that drive the error asymptotics.
//!
//! All quantities reduce to integrals of the Abelian differential with
//! density `w(t) = ((1-t^2)(t+A)(B-t))^{-1/2}` and its continuations:
//!
//! * `c0_abs`:    full mass of `w` over the gap `[-1,1]`,
//! * `C`:         critical point of the Green function, the zero of
//!                `integral (C-t) w(t) dt` (a ratio of two moments),
//! * `green_gap`: Green function `G(x)` of the complement along the gap,
//! * `eta`:       `G(C)`, the exponential decay rate of the approximation,
//! * `eta1`:      `-G''(C)/2 = 1/(2 sqrt((1-C^2)(C+A)(B-C)))`,
//! * `harmonic_measure`: boundary charge `omega(x)` accumulated along the
//!                circuit `B -> +inf -> -A`, with `alpha = omega(inf)`,
//! * `modulus_p`: side ratio of the image rectangle, giving the ring radius
//!                `rho = exp(-pi/p)`.
//!
//! The Robin constant `eta2` is delegated to the ring construction (see the
//! `ring` module) and bundled here into [`GreenCharacteristics`].

use crate::error::{Error, Result};
use crate::quadrature::{integrate_singular, integrate_tail, EndpointWeight, SingularInterval};
use serde::{Deserialize, Serialize};

/// The approximation set `[-A,-1] u [1,B]`, `A > 1`, `B >= 1`.
///
/// `B = 1` is the degenerate pair (right interval collapsed to a point); it
/// is accepted by the Remez solver and the closed-form reference but rejected
/// by every conformal characteristic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoIntervalDomain {
    a: f64,
    b: f64,
}

impl TwoIntervalDomain {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidDomain {
                a,
                b,
                what: "endpoints must be finite",
            });
        }
        if a <= 1.0 {
            return Err(Error::InvalidDomain {
                a,
                b,
                what: "A must exceed 1",
            });
        }
        if b < 1.0 {
            return Err(Error::InvalidDomain {
                a,
                b,
                what: "B must be at least 1",
            });
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// True when the right interval is the single point {1}.
    pub fn is_degenerate(&self) -> bool {
        self.b == 1.0
    }

    fn require_nondegenerate(&self) -> Result<()> {
        if self.is_degenerate() {
            return Err(Error::InvalidDomain {
                a: self.a,
                b: self.b,
                what: "degenerate pair (B = 1) has no conformal characteristics; \
                       use the closed-form reference",
            });
        }
        Ok(())
    }
}

/// Conformal data of the complement of the two intervals.
///
/// Field order matches the serialized layout exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreenCharacteristics {
    pub a: f64,
    pub b: f64,
    /// Critical point C of the Green function, inside the gap (-1,1).
    pub c_crit: f64,
    /// eta = G(C): decay rate of the best-approximation error.
    pub eta: f64,
    /// eta1 = -G''(C)/2.
    pub eta1: f64,
    /// eta2: Robin constant of G(z, C) at C.
    pub eta2: f64,
    /// alpha = omega(inf): harmonic measure of [-A,-1] seen from infinity.
    pub alpha: f64,
    /// omega(C): harmonic measure coordinate of the critical point.
    pub omega_c: f64,
    /// Side ratio of the image rectangle (0, p, p+i, i).
    pub p: f64,
    /// Ring inner radius rho = exp(-pi/p).
    pub rho: f64,
    /// |c_0|: mass of the differential over the gap.
    pub c0_abs: f64,
}

/// Mass of the differential over the gap: `integral_{-1}^{1} w(t) dt`.
pub fn c0_abs(domain: &TwoIntervalDomain, tol: f64) -> Result<f64> {
    domain.require_nondegenerate()?;
    let (a, b) = (domain.a, domain.b);
    let iv = SingularInterval::new(
        -1.0,
        1.0,
        EndpointWeight::InverseSqrt,
        EndpointWeight::InverseSqrt,
    );
    integrate_singular(|t| 1.0 / ((t + a) * (b - t)).sqrt(), &iv, tol)
}

/// Critical point of the Green function: `C = integral t w / integral w`.
pub fn critical_point(domain: &TwoIntervalDomain, tol: f64) -> Result<f64> {
    domain.require_nondegenerate()?;
    let (a, b) = (domain.a, domain.b);
    let iv = SingularInterval::new(
        -1.0,
        1.0,
        EndpointWeight::InverseSqrt,
        EndpointWeight::InverseSqrt,
    );
    let mass = integrate_singular(|t| 1.0 / ((t + a) * (b - t)).sqrt(), &iv, tol)?;
    let moment = integrate_singular(|t| t / ((t + a) * (b - t)).sqrt(), &iv, tol)?;
    Ok(moment / mass)
}

/// Green function of the complement along the gap:
/// `G(x) = integral_{-1}^{x} (c - t) w(t) dt`, `x` in `[-1, 1]`.
///
/// `c` must be the critical point; with that choice `G(1) = 0` up to the
/// defining residual and `G >= 0` with its maximum `eta` at `c`.
pub fn green_gap(domain: &TwoIntervalDomain, c: f64, x: f64, tol: f64) -> Result<f64> {
    domain.require_nondegenerate()?;
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::OutOfDomain {
            x,
            what: "green_gap needs x in [-1, 1]",
        });
    }
    let (a, b) = (domain.a, domain.b);
    if x == -1.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        // Both endpoints singular; the value is the defining residual of c.
        let iv = SingularInterval::new(
            -1.0,
            1.0,
            EndpointWeight::InverseSqrt,
            EndpointWeight::InverseSqrt,
        );
        return integrate_singular(|t| (c - t) / ((t + a) * (b - t)).sqrt(), &iv, tol);
    }
    let iv = SingularInterval::new(
        -1.0,
        x,
        EndpointWeight::InverseSqrt,
        EndpointWeight::Regular,
    );
    integrate_singular(
        |t| (c - t) / ((1.0 - t) * (t + a) * (b - t)).sqrt(),
        &iv,
        tol,
    )
}

/// Decay rate `eta = G(C)`.
pub fn eta(domain: &TwoIntervalDomain, c: f64, tol: f64) -> Result<f64> {
    green_gap(domain, c, c, tol)
}

/// Curvature coefficient `eta1 = 1 / (2 sqrt((1-C^2)(C+A)(B-C)))`.
pub fn eta1(domain: &TwoIntervalDomain, c: f64) -> f64 {
    let (a, b) = (domain.a, domain.b);
    0.5 / ((1.0 - c * c) * (c + a) * (b - c)).sqrt()
}

/// Harmonic measure of `[-A,-1]` seen from `x`, for `x` on the circuit
/// `[B, +inf] u [-inf, -A]` (pass `+inf` or `-inf` for the far point).
///
/// Strictly increases from 0 at `B` to `alpha` at infinity to 1 at `-A`.
pub fn harmonic_measure(domain: &TwoIntervalDomain, c0: f64, x: f64, tol: f64) -> Result<f64> {
    domain.require_nondegenerate()?;
    let (a, b) = (domain.a, domain.b);
    // Integrand on the right ray and its mirror s = -t on the left ray.
    let right = move |t: f64| 1.0 / ((t * t - 1.0) * (t + a) * (t - b)).sqrt();
    let left = move |s: f64| 1.0 / ((s * s - 1.0) * (s - a) * (s + b)).sqrt();
    let alpha = || -> Result<f64> {
        let tail = integrate_tail(
            move |t| 1.0 / ((t * t - 1.0) * (t + a)).sqrt(),
            b,
            EndpointWeight::InverseSqrt,
            tol,
        )?;
        Ok(tail / c0)
    };
    let far = 16.0 * (a + b);
    if x.is_infinite() {
        return alpha();
    }
    if x == b {
        return Ok(0.0);
    }
    if x == -a {
        return Ok(1.0);
    }
    if x > b {
        if x - b <= far {
            let iv =
                SingularInterval::new(b, x, EndpointWeight::InverseSqrt, EndpointWeight::Regular);
            let v = integrate_singular(move |t| 1.0 / ((t * t - 1.0) * (t + a)).sqrt(), &iv, tol)?;
            Ok(v / c0)
        } else {
            let tail = integrate_tail(right, x, EndpointWeight::Regular, tol)?;
            Ok(alpha()? - tail / c0)
        }
    } else if x < -a {
        let s = -x;
        if s - a <= far {
            let iv =
                SingularInterval::new(a, s, EndpointWeight::InverseSqrt, EndpointWeight::Regular);
            let v = integrate_singular(move |t| 1.0 / ((t * t - 1.0) * (t + b)).sqrt(), &iv, tol)?;
            Ok(1.0 - v / c0)
        } else {
            let tail = integrate_tail(left, s, EndpointWeight::Regular, tol)?;
            Ok(alpha()? + tail / c0)
        }
    } else {
        Err(Error::OutOfDomain {
            x,
            what: "harmonic_measure needs x in [B, inf] or [-inf, -A]",
        })
    }
}

/// Harmonic-measure coordinate along the gap:
/// `omega_gap(x) = (1/|c0|) integral_x^1 w(t) dt`, decreasing from 1 to 0.
pub fn harmonic_measure_gap(domain: &TwoIntervalDomain, c0: f64, x: f64, tol: f64) -> Result<f64> {
    domain.require_nondegenerate()?;
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::OutOfDomain {
            x,
            what: "harmonic_measure_gap needs x in [-1, 1]",
        });
    }
    if x == -1.0 {
        return Ok(1.0);
    }
    if x == 1.0 {
        return Ok(0.0);
    }
    let (a, b) = (domain.a, domain.b);
    let iv = SingularInterval::new(x, 1.0, EndpointWeight::Regular, EndpointWeight::InverseSqrt);
    let v = integrate_singular(
        move |t| 1.0 / ((1.0 + t) * (t + a) * (b - t)).sqrt(),
        &iv,
        tol,
    )?;
    Ok(v / c0)
}

/// Rectangle side ratio:
/// `p = (1/|c0|) integral_1^B ((t^2-1)(B-t)(A+t))^{-1/2} dt`.
pub fn modulus_p(domain: &TwoIntervalDomain, c0: f64, tol: f64) -> Result<f64> {
    domain.require_nondegenerate()?;
    let (a, b) = (domain.a, domain.b);
    let iv = SingularInterval::new(
        1.0,
        b,
        EndpointWeight::InverseSqrt,
        EndpointWeight::InverseSqrt,
    );
    let v = integrate_singular(move |t| 1.0 / ((t + 1.0) * (t + a)).sqrt(), &iv, tol)?;
    Ok(v / c0)
}

/// Computes the full characteristic bundle at tolerance `tol`.
pub fn characteristics(domain: &TwoIntervalDomain, tol: f64) -> Result<GreenCharacteristics> {
    domain.require_nondegenerate()?;
    let c0 = c0_abs(domain, tol)?;
    let c = critical_point(domain, tol)?;
    let eta_v = eta(domain, c, tol)?;
    let eta1_v = eta1(domain, c);
    let alpha = harmonic_measure(domain, c0, f64::INFINITY, tol)?;
    let omega_c = harmonic_measure_gap(domain, c0, c, tol)?;
    let p = modulus_p(domain, c0, tol)?;
    let rho = (-std::f64::consts::PI / p).exp();
    let eta2 = crate::ring::robin_constant(p, omega_c, eta1_v, c0, tol)?;
    Ok(GreenCharacteristics {
        a: domain.a,
        b: domain.b,
        c_crit: c,
        eta: eta_v,
        eta1: eta1_v,
        eta2,
        alpha,
        omega_c,
        p,
        rho,
        c0_abs: c0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit::{agm_elliptic_k, arcsine_integral};

    const TOL: f64 = 1e-13;

    fn dom(a: f64, b: f64) -> TwoIntervalDomain {
        TwoIntervalDomain::new(a, b).unwrap()
    }

    #[test]
    fn rejects_invalid_endpoints() {
        assert!(TwoIntervalDomain::new(1.0, 2.0).is_err());
        assert!(TwoIntervalDomain::new(0.5, 2.0).is_err());
        assert!(TwoIntervalDomain::new(2.0, 0.99).is_err());
        assert!(TwoIntervalDomain::new(f64::NAN, 2.0).is_err());
        assert!(TwoIntervalDomain::new(2.0, 1.0).unwrap().is_degenerate());
    }

    #[test]
    fn degenerate_pair_has_no_characteristics() {
        let d = dom(3.0, 1.0);
        assert!(characteristics(&d, TOL).is_err());
        assert!(modulus_p(&d, 1.0, TOL).is_err());
    }

    #[test]
    fn symmetric_critical_point_is_zero() {
        let d = dom(2.0, 2.0);
        let c = critical_point(&d, TOL).unwrap();
        assert!(c.abs() <= 1e-12, "got {c}");
    }

    #[test]
    fn asymmetric_critical_point_matches_bisection_oracle() {
        // Oracle: bisection on the monotone residual r(c) = integral (c-t) w dt,
        // integrals via arcsine substitution + adaptive Simpson.
        let d = dom(2.0, 3.0);
        let c = critical_point(&d, TOL).unwrap();
        assert!(
            c < 0.0,
            "longer interval [1,3] must push C negative, got {c}"
        );
        let residual =
            |cc: f64| arcsine_integral(&|x: f64| (cc - x) / ((x + 2.0) * (3.0 - x)).sqrt(), 1e-14);
        let (mut lo, mut hi) = (-1.0, 1.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if residual(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let oracle = 0.5 * (lo + hi);
        assert!((c - oracle).abs() <= 1e-10, "got {c}, oracle {oracle}");
    }

    #[test]
    fn green_gap_vanishes_at_both_gap_ends() {
        let d = dom(2.0, 3.0);
        let c = critical_point(&d, TOL).unwrap();
        assert_eq!(green_gap(&d, c, -1.0, TOL).unwrap(), 0.0);
        let residual = green_gap(&d, c, 1.0, TOL).unwrap();
        assert!(residual.abs() <= 1e-12, "defining residual {residual}");
    }

    #[test]
    fn eta_symmetric_closed_forms() {
        for a in [1.5f64, 2.0, 5.0] {
            let d = dom(a, a);
            let c = critical_point(&d, TOL).unwrap();
            let e = eta(&d, c, TOL).unwrap();
            let expect = 0.5 * ((a + 1.0) / (a - 1.0)).ln();
            assert!((e - expect).abs() <= 1e-11, "A={a}: got {e}, want {expect}");
        }
    }

    #[test]
    fn eta_is_the_maximum_of_the_gap_green_function() {
        let d = dom(2.0, 3.0);
        let c = critical_point(&d, TOL).unwrap();
        let g_c = green_gap(&d, c, c, TOL).unwrap();
        for dx in [1e-3, 1e-2, 0.1] {
            assert!(green_gap(&d, c, c + dx, TOL).unwrap() < g_c);
            assert!(green_gap(&d, c, c - dx, TOL).unwrap() < g_c);
        }
    }

    #[test]
    fn eta1_symmetric_closed_form_and_curvature() {
        for a in [1.5f64, 2.0, 5.0] {
            let d = dom(a, a);
            let c = critical_point(&d, TOL).unwrap();
            assert!((eta1(&d, c) - 0.5 / a).abs() <= 1e-12);
        }
        // Richardson second difference of green_gap reproduces -2*eta1.
        let d = dom(2.0, 3.0);
        let c = critical_point(&d, TOL).unwrap();
        let g = |x: f64| green_gap(&d, c, x, TOL).unwrap();
        let second = |h: f64| (g(c + h) - 2.0 * g(c) + g(c - h)) / (h * h);
        let (r1, r2) = (second(1e-2), second(5e-3));
        let extrap = (4.0 * r2 - r1) / 3.0;
        let expect = -2.0 * eta1(&d, c);
        assert!(
            (extrap - expect).abs() <= 1e-5 * expect.abs(),
            "curvature {extrap} vs -2*eta1 {expect}"
        );
    }

    #[test]
    fn c0_matches_elliptic_oracle() {
        let d = dom(2.0, 2.0);
        let v = c0_abs(&d, TOL).unwrap();
        let k = agm_elliptic_k(0.5);
        assert!((v - k).abs() <= 1e-11, "got {v}, oracle {k}");
    }

    #[test]
    fn harmonic_measure_circuit_endpoints_and_alpha() {
        let d = dom(2.0, 2.0);
        let c0 = c0_abs(&d, TOL).unwrap();
        assert_eq!(harmonic_measure(&d, c0, 2.0, TOL).unwrap(), 0.0);
        assert_eq!(harmonic_measure(&d, c0, -2.0, TOL).unwrap(), 1.0);
        let alpha = harmonic_measure(&d, c0, f64::INFINITY, TOL).unwrap();
        assert!((alpha - 0.5).abs() <= 1e-12, "alpha {alpha}");
    }

    #[test]
    fn harmonic_measure_increases_along_the_circuit() {
        let d = dom(2.0, 3.0);
        let c0 = c0_abs(&d, TOL).unwrap();
        let xs = [
            3.0,
            3.1,
            4.0,
            10.0,
            1e3,
            1e8,
            f64::INFINITY,
            -1e8,
            -1e3,
            -10.0,
            -2.5,
            -2.1,
            -2.0,
        ];
        let mut prev = -1.0;
        for &x in &xs {
            let v = harmonic_measure(&d, c0, x, TOL).unwrap();
            assert!(v >= prev, "omega({x}) = {v} < previous {prev}");
            assert!((0.0..=1.0).contains(&v));
            prev = v;
        }
    }

    #[test]
    fn harmonic_measure_continuous_at_infinity() {
        let d = dom(2.0, 3.0);
        let c0 = c0_abs(&d, TOL).unwrap();
        let alpha = harmonic_measure(&d, c0, f64::INFINITY, TOL).unwrap();
        let right = harmonic_measure(&d, c0, 1e10, TOL).unwrap();
        let left = harmonic_measure(&d, c0, -1e10, TOL).unwrap();
        assert!((right - alpha).abs() <= 1e-9);
        assert!((left - alpha).abs() <= 1e-9);
        assert!(right <= alpha && alpha <= left);
    }

    #[test]
    fn period_relation_closes_the_circuit() {
        for (a, b) in [(2.0, 3.0), (1.5, 4.0), (3.0, 1.2)] {
            let d = dom(a, b);
            let c0 = c0_abs(&d, TOL).unwrap();
            let tr = integrate_tail(
                move |t| 1.0 / ((t * t - 1.0) * (t + a)).sqrt(),
                b,
                EndpointWeight::InverseSqrt,
                TOL,
            )
            .unwrap();
            let tl = integrate_tail(
                move |s| 1.0 / ((s * s - 1.0) * (s + b)).sqrt(),
                a,
                EndpointWeight::InverseSqrt,
                TOL,
            )
            .unwrap();
            assert!(
                (tr + tl - c0).abs() <= 1e-10 * c0,
                "A={a} B={b}: {tr} + {tl} != {c0}"
            );
        }
    }

    #[test]
    fn gap_measure_runs_from_one_to_zero() {
        let d = dom(2.0, 2.0);
        let c0 = c0_abs(&d, TOL).unwrap();
        assert_eq!(harmonic_measure_gap(&d, c0, -1.0, TOL).unwrap(), 1.0);
        assert_eq!(harmonic_measure_gap(&d, c0, 1.0, TOL).unwrap(), 0.0);
        let mid = harmonic_measure_gap(&d, c0, 0.0, TOL).unwrap();
        assert!((mid - 0.5).abs() <= 1e-12, "omega_gap(0) = {mid}");
        let vs: Vec<f64> = [-0.9, -0.5, 0.0, 0.5, 0.9]
            .iter()
            .map(|&x| harmonic_measure_gap(&d, c0, x, TOL).unwrap())
            .collect();
        for w in vs.windows(2) {
            assert!(w[0] > w[1], "gap measure must decrease: {vs:?}");
        }
    }

    #[test]
    fn modulus_p_matches_elliptic_oracle() {
        // Symmetric A = B: p = K'(1/A) / (2 K(1/A)).
        for a in [2.0f64, 5.0] {
            let d = dom(a, a);
            let c0 = c0_abs(&d, TOL).unwrap();
            let p = modulus_p(&d, c0, TOL).unwrap();
            let k = agm_elliptic_k(1.0 / a);
            let kp = agm_elliptic_k((1.0 - 1.0 / (a * a)).sqrt());
            let expect = kp / (2.0 * k);
            assert!((p - expect).abs() <= 1e-10, "A={a}: p={p}, oracle {expect}");
        }
    }

    #[test]
    fn out_of_domain_points_are_rejected() {
        let d = dom(2.0, 3.0);
        let c0 = c0_abs(&d, TOL).unwrap();
        assert!(harmonic_measure(&d, c0, 0.0, TOL).is_err());
        assert!(harmonic_measure(&d, c0, 2.5, TOL).is_err());
        assert!(harmonic_measure_gap(&d, c0, 1.5, TOL).is_err());
        assert!(green_gap(&d, 0.0, -1.2, TOL).is_err());
    }
}
