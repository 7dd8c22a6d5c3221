//! Gauss quadrature for integrands with inverse-square-root endpoint
//! singularities, plus a compactified rule for tails extending to +infinity.
//!
//! Every integral in this crate has the form
//!
//! ```text
//!   I = integral_a^b f(t) * (t - a)^e_l * (b - t)^e_r dt
//! ```
//!
//! where `f` is smooth on `[a, b]` and each exponent is `0` or `-1/2`.
//! Singular endpoints are absorbed by the quadratic substitution
//! `t = a + (b-a) s^2` (one-sided) or by the transplanted Chebyshev-Gauss
//! rule (both sides), after which Gauss-Legendre applies at spectral rate.
//! Node counts double from 16 until two successive estimates agree to `tol`
//! or the cap of 4096 is hit, in which case the last two estimates are
//! returned inside the error.

use crate::error::{Error, Result};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Endpoint behaviour of the integrand factor attached to the weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndpointWeight {
    /// No singularity: weight factor 1.
    Regular,
    /// Weight factor `|t - endpoint|^{-1/2}`.
    InverseSqrt,
}

/// A finite integration interval with an endpoint weight on each side.
#[derive(Debug, Clone, Copy)]
pub struct SingularInterval {
    pub lower: f64,
    pub upper: f64,
    pub left: EndpointWeight,
    pub right: EndpointWeight,
}

impl SingularInterval {
    pub fn new(lower: f64, upper: f64, left: EndpointWeight, right: EndpointWeight) -> Self {
        Self {
            lower,
            upper,
            left,
            right,
        }
    }
}

const MIN_NODES: usize = 16;
const MAX_NODES: usize = 4096;

fn legendre_cache() -> &'static Mutex<HashMap<usize, Arc<(Vec<f64>, Vec<f64>)>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<(Vec<f64>, Vec<f64>)>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
/// on the three-term recurrence and cached per node count.
fn legendre_rule(n: usize) -> Arc<(Vec<f64>, Vec<f64>)> {
    if let Some(rule) = legendre_cache().lock().unwrap().get(&n) {
        return rule.clone();
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi-style initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 1..n {
                let p2 = ((2 * k + 1) as f64 * x * p1 - k as f64 * p0) / (k + 1) as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                // One clean-up iteration after convergence.
                let mut q0 = 1.0;
                let mut q1 = x;
                for k in 1..n {
                    let q2 = ((2 * k + 1) as f64 * x * q1 - k as f64 * q0) / (k + 1) as f64;
                    q0 = q1;
                    q1 = q2;
                }
                dp = n as f64 * (x * q1 - q0) / (x * x - 1.0);
                x -= q1 / dp;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        weights[i] = w;
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    let rule = Arc::new((nodes, weights));
    legendre_cache().lock().unwrap().insert(n, rule.clone());
    rule
}

/// One Gauss-Legendre pass of `g` over [lo, hi] with `n` nodes.
/// Returns (estimate, sum of |w * g|) so callers can scale the
/// convergence test for integrals that are legitimately zero.
fn legendre_pass(g: &impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> (f64, f64) {
    let rule = legendre_rule(n);
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut acc = 0.0;
    let mut mag = 0.0;
    for (x, w) in rule.0.iter().zip(rule.1.iter()) {
        let v = w * g(mid + half * x);
        acc += v;
        mag += v.abs();
    }
    (acc * half, mag * half.abs())
}

/// One transplanted Chebyshev-Gauss pass: integrates
/// `g(t) * ((t-lo)(hi-t))^{-1/2}` over [lo, hi] with `n` nodes.
fn chebyshev_pass(g: &impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> (f64, f64) {
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let w = std::f64::consts::PI / n as f64;
    let mut acc = 0.0;
    let mut mag = 0.0;
    for i in 0..n {
        let theta = w * (i as f64 + 0.5);
        let v = g(mid + half * theta.cos());
        acc += v;
        mag += v.abs();
    }
    (acc * w, mag * w)
}

/// Runs `pass` with doubling node counts until two successive estimates agree.
fn converge(pass: impl Fn(usize) -> (f64, f64), tol: f64) -> Result<f64> {
    let (mut prev, mut prev_mag) = pass(MIN_NODES);
    let mut n = MIN_NODES * 2;
    while n <= MAX_NODES {
        let (cur, mag) = pass(n);
        // Relative agreement, floored by the roundoff level of the node sums
        // so that integrals which are legitimately zero can converge.
        let thresh = (tol * cur.abs()).max(1e-15 * mag.max(prev_mag));
        if (cur - prev).abs() <= thresh {
            return Ok(cur);
        }
        prev = cur;
        prev_mag = mag;
        n *= 2;
    }
    Err(Error::QuadratureNonConvergence {
        tol,
        previous: prev,
        last: pass(MAX_NODES).0,
    })
}

/// Integrates `f(t)` times the implied endpoint weights over the interval.
///
/// `f` must be smooth on the closed interval; the weight
/// `|t - endpoint|^{-1/2}` at each `InverseSqrt` endpoint is supplied by the
/// rule, not by `f`.
pub fn integrate_singular(
    f: impl Fn(f64) -> f64,
    interval: &SingularInterval,
    tol: f64,
) -> Result<f64> {
    let (a, b) = (interval.lower, interval.upper);
    if !(a < b) {
        if a == b {
            return Ok(0.0);
        }
        return Err(Error::OutOfDomain {
            x: b,
            what: "upper endpoint below lower endpoint",
        });
    }
    use EndpointWeight::*;
    match (interval.left, interval.right) {
        (Regular, Regular) => converge(|n| legendre_pass(&f, a, b, n), tol),
        (InverseSqrt, InverseSqrt) => converge(|n| chebyshev_pass(&f, a, b, n), tol),
        (InverseSqrt, Regular) => {
            // t = a + (b-a) s^2 maps the weight (t-a)^{-1/2} away:
            // integral = 2 sqrt(b-a) * integral_0^1 f(a + (b-a) s^2) ds.
            let c = 2.0 * (b - a).sqrt();
            let g = move |s: f64| c * f(a + (b - a) * s * s);
            converge(|n| legendre_pass(&g, 0.0, 1.0, n), tol)
        }
        (Regular, InverseSqrt) => {
            let c = 2.0 * (b - a).sqrt();
            let g = move |s: f64| c * f(b - (b - a) * s * s);
            converge(|n| legendre_pass(&g, 0.0, 1.0, n), tol)
        }
    }
}

/// Integrates `f(t)` times the lower-endpoint weight from `lower` to +infinity.
///
/// The substitution `t = lower + u/(1-u)` compactifies the tail; after the
/// weight is absorbed the transformed integrand must be smooth up to `u = 1`,
/// which holds when `f(t) * weight(t) = O(t^{-2})` as `t -> infinity`.
pub fn integrate_tail(
    f: impl Fn(f64) -> f64,
    lower: f64,
    weight: EndpointWeight,
    tol: f64,
) -> Result<f64> {
    // Scaling by |lower| keeps the substitution well conditioned when the
    // tail starts far from the origin (the image then varies by O(1)).
    let scale = lower.abs().max(1.0);
    match weight {
        EndpointWeight::Regular => {
            // t = lower + scale u/(1-u):
            // integral = scale * integral_0^1 f(t(u)) (1-u)^{-2} du,
            // analytic up to u = 1 for f decaying like t^{-2}.
            let g = move |u: f64| {
                let r = 1.0 - u;
                scale * f(lower + scale * u / r) / (r * r)
            };
            converge(|n| legendre_pass(&g, 0.0, 1.0, n), tol)
        }
        EndpointWeight::InverseSqrt => {
            // t = lower + scale (s/(1-s))^2 absorbs the (t-lower)^{-1/2}
            // weight and keeps the image analytic up to s = 1 for any f
            // behaving like t^{-3/2} or t^{-2} times a series in 1/t:
            // integral = 2 sqrt(scale) * integral_0^1 f(t(s)) (1-s)^{-2} ds.
            let c = 2.0 * scale.sqrt();
            let g = move |s: f64| {
                let r = 1.0 - s;
                let q = s / r;
                c * f(lower + scale * q * q) / (r * r)
            };
            converge(|n| legendre_pass(&g, 0.0, 1.0, n), tol)
        }
    }
}
