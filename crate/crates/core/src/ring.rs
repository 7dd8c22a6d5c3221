//! Green function of the circular ring `rho < |w| < 1` and its pullback to
//! the two-interval geometry.
//!
//! The complement of `[-A,-1] u [1,B]` maps conformally onto the ring: the
//! gap `(-1,1)` becomes the positive real segment `[rho, 1]`, the two outer
//! rays (joined through infinity) become the negative real segment, the
//! interval `[1,B]` the outer circle and `[-A,-1]` the inner circle. Moduli
//! are `exp(-(pi/p) v)` where `v` is the harmonic-measure coordinate.
//!
//! The ring Green function is assembled from the q-product
//!
//! ```text
//! s(w) = (1 - w) * prod_{k>=1} (1 - rho^{2k} w)(1 - rho^{2k} / w)
//! ```
//!
//! which satisfies `s(1/w) = s(rho^2 w) = -s(w)/w`. For a real pole
//! `c` in `(rho, 1)`,
//!
//! ```text
//! G(w, c) = ln|s(w c) / s(w / c)| - ln c + (ln c / ln rho) ln|w|.
//! ```
//!
//! Textbook forms of this kernel are notoriously misprint-prone, so the
//! formula is certified by tests against its defining properties: vanishing
//! on both circles, unit logarithmic pole, and symmetry.

use crate::domain::{self, GreenCharacteristics, TwoIntervalDomain};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_singular, EndpointWeight, SingularInterval};
use num_complex::Complex64;
use std::f64::consts::PI;

fn check_ring(rho: f64) -> Result<()> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::InvalidParameter {
            what: format!("ring radius must lie in (0,1), got {rho}"),
        });
    }
    Ok(())
}

/// The q-product `s(w)`; converges for every `w != 0`.
fn s_product(w: Complex64, rho: f64, tol: f64) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0) - w;
    let winv = w.inv();
    let wmag = w.norm().max(winv.norm()).max(1.0);
    let cutoff = (tol * (1.0 - rho * rho)).max(1e-17);
    let rho2 = rho * rho;
    let mut r2k = rho2;
    while r2k * wmag >= cutoff {
        acc *= (Complex64::new(1.0, 0.0) - r2k * w) * (Complex64::new(1.0, 0.0) - r2k * winv);
        r2k *= rho2;
    }
    acc
}

fn s_product_real(w: f64, rho: f64, tol: f64) -> f64 {
    s_product(Complex64::new(w, 0.0), rho, tol).re
}

/// Green function of the ring `rho < |w| < 1` with real pole `c` in `(rho,1)`:
/// harmonic off the pole, zero on both circles, `-ln|w - c|` singularity.
pub fn ring_green(rho: f64, w: Complex64, c: f64, tol: f64) -> Result<f64> {
    check_ring(rho)?;
    if !(c > rho && c < 1.0) {
        return Err(Error::InvalidParameter {
            what: format!("pole must lie in (rho,1) = ({rho},1), got {c}"),
        });
    }
    let slack = 1e-9;
    let r = w.norm();
    if !(r >= rho * (1.0 - slack) && r <= 1.0 + slack) {
        return Err(Error::OutOfDomain {
            x: r,
            what: "ring_green needs rho <= |w| <= 1",
        });
    }
    let dist = (w - Complex64::new(c, 0.0)).norm();
    if dist < 1e-13 {
        return Err(Error::AtPole { dist });
    }
    let num = s_product(w * c, rho, tol).norm();
    let den = s_product(w / c, rho, tol).norm();
    Ok(num.ln() - den.ln() - c.ln() + (c.ln() / rho.ln()) * r.ln())
}

/// Robin constant of the ring Green function at its pole:
/// `gamma(c) = lim_{w -> c} [ ring_green(w, c) + ln|w - c| ]`, extracted
/// analytically from the product form:
/// `gamma(c) = ln s(c^2) - ln R(1) + (ln c)^2 / ln rho`,
/// where `R(1) = prod (1 - rho^{2k})^2` is the regular part of `s` at 1.
pub fn ring_robin(rho: f64, c: f64, tol: f64) -> Result<f64> {
    check_ring(rho)?;
    if !(c > rho && c < 1.0) {
        return Err(Error::InvalidParameter {
            what: format!("pole must lie in (rho,1) = ({rho},1), got {c}"),
        });
    }
    let s_c2 = s_product_real(c * c, rho, tol);
    if !(s_c2 > 0.0) {
        return Err(Error::ConsistencyCheck {
            what: "ring_robin: s(c^2) must be positive",
            diff: s_c2,
            allowed: 0.0,
        });
    }
    let cutoff = (tol * (1.0 - rho * rho)).max(1e-17);
    let rho2 = rho * rho;
    let mut ln_r1 = 0.0;
    let mut r2k = rho2;
    while r2k >= cutoff {
        ln_r1 += 2.0 * (1.0 - r2k).ln();
        r2k *= rho2;
    }
    Ok(s_c2.ln() - ln_r1 + c.ln() * c.ln() / rho.ln())
}

/// Image of a point under the conformal map onto the rectangle
/// `[0,p] x [0,1]` (coordinates `u + i v`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RectanglePoint {
    pub u: f64,
    pub v: f64,
}

/// Maps a boundary-circuit or gap point into the rectangle:
/// the gap `(-1,1)` to the edge `u = 0`, `[1,B]` to the edge `v = 0`,
/// and the two rays (with `+-inf`) to the edge `u = p`.
pub fn rect_map(
    domain: &TwoIntervalDomain,
    chars: &GreenCharacteristics,
    z: f64,
    tol: f64,
) -> Result<RectanglePoint> {
    let (a, b) = (domain.a(), domain.b());
    if z > -1.0 && z < 1.0 {
        let v = domain::harmonic_measure_gap(domain, chars.c0_abs, z, tol)?;
        return Ok(RectanglePoint { u: 0.0, v });
    }
    if z == 1.0 {
        return Ok(RectanglePoint { u: 0.0, v: 0.0 });
    }
    if z == -1.0 {
        return Ok(RectanglePoint { u: 0.0, v: 1.0 });
    }
    if z > 1.0 && z <= b {
        if z == b {
            return Ok(RectanglePoint { u: chars.p, v: 0.0 });
        }
        let iv =
            SingularInterval::new(1.0, z, EndpointWeight::InverseSqrt, EndpointWeight::Regular);
        let raw = integrate_singular(
            move |t| 1.0 / ((t + 1.0) * (b - t) * (a + t)).sqrt(),
            &iv,
            tol,
        )?;
        return Ok(RectanglePoint {
            u: raw / chars.c0_abs,
            v: 0.0,
        });
    }
    if z >= b || z <= -a {
        let v = domain::harmonic_measure(domain, chars.c0_abs, z, tol)?;
        return Ok(RectanglePoint { u: chars.p, v });
    }
    Err(Error::OutOfDomain {
        x: z,
        what: "rect_map needs z in (-1,1) u [1,B] u [B,inf] u [-inf,-A]",
    })
}

/// Ring coordinate of a rectangle point: `w = exp(-(pi/p)(v + i u))`.
pub fn ring_point(chars: &GreenCharacteristics, pt: RectanglePoint) -> Complex64 {
    let scale = PI / chars.p;
    Complex64::from_polar((-scale * pt.v).exp(), -scale * pt.u)
}

/// Green function `G(D, C)` of the two-interval complement, pole at the
/// critical point, evaluated at `D` on `[B, +inf] u [-inf, -A]` through the
/// ring model. `G(B,C) = G(-A,C) = 0` and `G(inf,C) = eta`.
pub fn green_dc(
    domain: &TwoIntervalDomain,
    chars: &GreenCharacteristics,
    d: f64,
    tol: f64,
) -> Result<f64> {
    if d.is_finite() && d > -domain.a() && d < domain.b() {
        return Err(Error::OutOfDomain {
            x: d,
            what: "green_dc needs D outside (-A, B)",
        });
    }
    let v = domain::harmonic_measure(domain, chars.c0_abs, d, tol)?;
    let scale = PI / chars.p;
    let w_d = Complex64::new(-(-scale * v).exp(), 0.0);
    let w_c = (-scale * chars.omega_c).exp();
    ring_green(chars.rho, w_d, w_c, tol)
}

/// Robin constant `eta2` of `G(z, C)` at the critical point, in the plane
/// metric: `eta2 = gamma_ring(w_C) - ln |w'(C)|` with
/// `|w'(C)| = (pi/p) * (2 eta1 / |c0|) * w_C`.
pub fn robin_constant(p: f64, omega_c: f64, eta1: f64, c0_abs: f64, tol: f64) -> Result<f64> {
    if !(p > 0.0) || !(c0_abs > 0.0) || !(eta1 > 0.0) {
        return Err(Error::InvalidParameter {
            what: format!("robin_constant needs positive p, eta1, c0 (got {p}, {eta1}, {c0_abs})"),
        });
    }
    let rho = (-PI / p).exp();
    let w_c = (-(PI / p) * omega_c).exp();
    let gamma = ring_robin(rho, w_c, tol)?;
    let w_deriv = (PI / p) * (2.0 * eta1 / c0_abs) * w_c;
    Ok(gamma - w_deriv.ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{characteristics, TwoIntervalDomain};
    use crate::testkit::agm_elliptic_k;

    const TOL: f64 = 1e-13;

    #[test]
    fn s_product_functional_equations() {
        let rho = 0.3;
        for &(re, im) in &[(0.7, 0.2), (-0.5, 0.4), (0.35, -0.6), (0.9, 0.0)] {
            let w = Complex64::new(re, im);
            let s_w = s_product(w, rho, TOL);
            let lhs_inv = s_product(w.inv(), rho, TOL);
            let rhs = -s_w / w;
            assert!((lhs_inv - rhs).norm() <= 1e-13 * s_w.norm().max(1.0));
            let lhs_shift = s_product(rho * rho * w, rho, TOL);
            assert!((lhs_shift - rhs).norm() <= 1e-13 * s_w.norm().max(1.0));
        }
    }

    #[test]
    fn green_vanishes_on_both_circles() {
        for &(rho, c) in &[(0.0074, 0.086), (0.3, 0.55), (0.05, 0.9)] {
            for k in 0..32 {
                let th = 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / 32.0;
                let outer = Complex64::from_polar(1.0, th);
                let inner = Complex64::from_polar(rho, th);
                let g_out = ring_green(rho, outer, c, TOL).unwrap();
                let g_in = ring_green(rho, inner, c, TOL).unwrap();
                assert!(
                    g_out.abs() <= 1e-10,
                    "outer circle: rho={rho} c={c} th={th}: {g_out}"
                );
                assert!(
                    g_in.abs() <= 1e-10,
                    "inner circle: rho={rho} c={c} th={th}: {g_in}"
                );
            }
        }
    }

    #[test]
    fn green_positive_inside_and_symmetric() {
        let rho = 0.2;
        let pts: [f64; 4] = [0.3, 0.45, 0.6, 0.85];
        for &x in &pts {
            for &y in &pts {
                if (x - y).abs() < 1e-3 {
                    continue;
                }
                let g_xy = ring_green(rho, Complex64::new(x, 0.0), y, TOL).unwrap();
                let g_yx = ring_green(rho, Complex64::new(y, 0.0), x, TOL).unwrap();
                assert!(g_xy > 0.0);
                assert!(
                    (g_xy - g_yx).abs() <= 1e-10,
                    "G({x},{y})={g_xy} vs G({y},{x})={g_yx}"
                );
            }
        }
    }

    #[test]
    fn robin_matches_richardson_limit_of_the_pole() {
        // gamma = lim [G + ln|w-c|]; even-averaged Richardson in delta^2.
        for &(rho, c) in &[(0.0074, 0.086), (0.25, 0.5), (0.1, 0.35)] {
            let gamma = ring_robin(rho, c, TOL).unwrap();
            let probe = |d: f64| {
                let plus = ring_green(rho, Complex64::new(c * (1.0 + d), 0.0), c, TOL).unwrap();
                let minus = ring_green(rho, Complex64::new(c * (1.0 - d), 0.0), c, TOL).unwrap();
                0.5 * (plus + minus) + (c * d).ln()
            };
            let v1 = probe(1e-3);
            let v2 = probe(5e-4);
            let extrap = (4.0 * v2 - v1) / 3.0;
            assert!(
                (extrap - gamma).abs() <= 1e-8,
                "rho={rho} c={c}: limit {extrap} vs analytic {gamma}"
            );
        }
    }

    #[test]
    fn robin_disk_limit() {
        // rho -> 0: gamma(c) -> ln(1 - c^2) plus the explicit (ln c)^2/ln rho.
        let rho = 1e-8;
        let c = 0.5;
        let gamma = ring_robin(rho, c, TOL).unwrap();
        let expect = (1.0 - c * c).ln() + c.ln() * c.ln() / rho.ln();
        assert!(
            (gamma - expect).abs() <= 1e-12,
            "gamma={gamma}, disk form {expect}"
        );
    }

    #[test]
    fn robin_constant_symmetric_closed_form() {
        // A = B: eta2 = ln(2A / sqrt(A^2 - 1)), assembled from elliptic data.
        for a in [1.5f64, 2.0, 5.0] {
            let k = agm_elliptic_k(1.0 / a);
            let kp = agm_elliptic_k((1.0 - 1.0 / (a * a)).sqrt());
            let p = kp / (2.0 * k);
            let c0 = 2.0 / a * k;
            let eta2 = robin_constant(p, 0.5, 0.5 / a, c0, TOL).unwrap();
            let expect = (2.0 * a / (a * a - 1.0).sqrt()).ln();
            assert!(
                (eta2 - expect).abs() <= 1e-8 * expect.abs(),
                "A={a}: eta2={eta2}, closed form {expect}"
            );
        }
    }

    #[test]
    fn green_dc_boundary_and_infinity_anchors() {
        for (a, b) in [(2.0, 2.0), (2.0, 3.0)] {
            let d = TwoIntervalDomain::new(a, b).unwrap();
            let ch = characteristics(&d, TOL).unwrap();
            let at_b = green_dc(&d, &ch, b, TOL).unwrap();
            let at_ma = green_dc(&d, &ch, -a, TOL).unwrap();
            let at_inf = green_dc(&d, &ch, f64::INFINITY, TOL).unwrap();
            assert!(at_b.abs() <= 1e-10, "G(B,C) = {at_b}");
            assert!(at_ma.abs() <= 1e-10, "G(-A,C) = {at_ma}");
            assert!(
                (at_inf - ch.eta).abs() <= 1e-9,
                "G(inf,C) = {at_inf} vs eta = {}",
                ch.eta
            );
            let right = green_dc(&d, &ch, 1e10, TOL).unwrap();
            let left = green_dc(&d, &ch, -1e10, TOL).unwrap();
            assert!(
                (right - left).abs() <= 1e-9,
                "limits at infinity: {right} vs {left}"
            );
        }
    }

    #[test]
    fn green_dc_profile_is_unimodal_along_the_far_edge() {
        // G along the edge u = p, as a function of v = omega(D): zero at the
        // corners, positive inside, single interior maximum.
        let d = TwoIntervalDomain::new(2.0, 3.0).unwrap();
        let ch = characteristics(&d, TOL).unwrap();
        let scale = std::f64::consts::PI / ch.p;
        let w_c = (-scale * ch.omega_c).exp();
        let g = |v: f64| {
            ring_green(ch.rho, Complex64::new(-(-scale * v).exp(), 0.0), w_c, TOL).unwrap()
        };
        let n = 49;
        let vals: Vec<f64> = (1..=n).map(|i| g(i as f64 / (n + 1) as f64)).collect();
        let peak = vals
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        for i in 1..vals.len() {
            if i <= peak {
                assert!(
                    vals[i] >= vals[i - 1] - 1e-14,
                    "rise violated at {i}: {vals:?}"
                );
            } else {
                assert!(
                    vals[i] <= vals[i - 1] + 1e-14,
                    "fall violated at {i}: {vals:?}"
                );
            }
            assert!(vals[i] > 0.0);
        }
        assert!(g(1e-9) <= 1e-7 && g(1.0 - 1e-9) <= 1e-7);
    }

    #[test]
    fn rect_map_edges_and_corners() {
        let d = TwoIntervalDomain::new(2.0, 2.0).unwrap();
        let ch = characteristics(&d, TOL).unwrap();
        let at = |z: f64| rect_map(&d, &ch, z, TOL).unwrap();
        assert_eq!((at(1.0).u, at(1.0).v), (0.0, 0.0));
        let corner_b = at(2.0);
        assert_eq!((corner_b.u, corner_b.v), (ch.p, 0.0));
        assert_eq!((at(-1.0).u, at(-1.0).v), (0.0, 1.0));
        let corner_ma = at(-2.0);
        assert_eq!((corner_ma.u, corner_ma.v), (ch.p, 1.0));
        // Critical point sits at (0, omega_c); infinity at (p, alpha).
        let at_c = at(ch.c_crit);
        assert_eq!(at_c.u, 0.0);
        assert!((at_c.v - ch.omega_c).abs() <= 1e-12);
        let at_inf = rect_map(&d, &ch, f64::INFINITY, TOL).unwrap();
        assert_eq!(at_inf.u, ch.p);
        assert!((at_inf.v - ch.alpha).abs() <= 1e-12);
        // Bottom edge: u strictly increasing, v = 0.
        let mut prev = 0.0;
        for &z in &[1.2, 1.5, 1.8, 1.95] {
            let pt = at(z);
            assert_eq!(pt.v, 0.0);
            assert!(pt.u > prev && pt.u < ch.p);
            prev = pt.u;
        }
        // Oracle for an interior bottom-edge point: t = 1 + s^2 removes the
        // left singularity, adaptive Simpson does the rest.
        let raw = crate::testkit::adaptive_simpson(
            &|s: f64| {
                let t = 1.0 + s * s;
                2.0 / ((2.0 + s * s) * (4.0 - t * t)).sqrt()
            },
            0.0,
            0.5f64.sqrt(),
            1e-14,
        );
        let mid = at(1.5);
        assert!(
            (mid.u - raw / ch.c0_abs).abs() <= 1e-11,
            "u(1.5) = {} vs oracle {}",
            mid.u,
            raw / ch.c0_abs
        );
        assert!(rect_map(&d, &ch, -1.5, TOL).is_err());
    }

    #[test]
    fn ring_point_matches_edge_conventions() {
        let d = TwoIntervalDomain::new(2.0, 3.0).unwrap();
        let ch = characteristics(&d, TOL).unwrap();
        // Gap points land on the positive real segment [rho, 1].
        let w_gap = ring_point(&ch, rect_map(&d, &ch, 0.2, TOL).unwrap());
        assert!(w_gap.im.abs() <= 1e-15 && w_gap.re > ch.rho && w_gap.re < 1.0);
        // Far-edge points land on the negative real segment.
        let w_ray = ring_point(&ch, rect_map(&d, &ch, 5.0, TOL).unwrap());
        assert!((w_ray.arg().abs() - std::f64::consts::PI).abs() <= 1e-12);
        // [1,B] lands on the unit circle, [-A,-1] endpoints on |w| = rho.
        let w_bottom = ring_point(&ch, rect_map(&d, &ch, 2.0, TOL).unwrap());
        assert!((w_bottom.norm() - 1.0).abs() <= 1e-13);
        let w_ma = ring_point(&ch, rect_map(&d, &ch, -2.0, TOL).unwrap());
        assert!((w_ma.norm() - ch.rho).abs() <= 1e-13 * ch.rho.max(1.0));
    }

    #[test]
    fn pole_proximity_is_reported() {
        let rho = 0.1;
        let err = ring_green(rho, Complex64::new(0.5, 0.0), 0.5, TOL);
        assert!(matches!(err, Err(crate::error::Error::AtPole { .. })));
        assert!(ring_green(rho, Complex64::new(1.5, 0.0), 0.5, TOL).is_err());
        assert!(ring_green(rho, Complex64::new(0.5, 0.0), 1.5, TOL).is_err());
        assert!(ring_robin(0.5, 0.4, TOL).is_err());
    }
}
