//! Asymptotic predictions of the best-approximation error `L_n`.
//!
//! Two algebraically equivalent routes are produced for each degree `n`:
//!
//! * the direct form `L = c n^{-1/2} e^{-n eta} * theta_ratio` with
//!   `c = 2 (pi eta1)^{-1/2} e^{-eta2}`, and
//! * the refined form `L = sqrt(2/pi) a_n^{-1/2} e^{-a_n}` with
//!   `a_n = eta n - G(D_n, C) - (1/2) ln(2 eta / eta1) + eta2`,
//!
//! whose ratio is exactly `sqrt(n eta / a_n)`. The oscillating factor
//! `e^{G(D_n,C)}` is evaluated two independent ways: through the theta series
//! (`theta_ratio`) and through the ring Green function (`green_dc` after
//! solving `omega(D_n) = phase`); [`Predictor::new`] certifies at
//! construction that both agree.

use crate::domain::{self, GreenCharacteristics, TwoIntervalDomain};
use crate::error::{Error, Result};
use crate::ring;
use crate::theta::ThetaParams;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::f64::consts::PI;

/// A real number extended with the two infinities, serialized as a JSON
/// number when finite and as the strings `"inf"` / `"-inf"` otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtReal(pub f64);

impl ExtReal {
    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }
}

impl std::fmt::Display for ExtReal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0 == f64::INFINITY {
            write!(f, "inf")
        } else if self.0 == f64::NEG_INFINITY {
            write!(f, "-inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0 == f64::INFINITY {
            s.serialize_str("inf")
        } else if self.0 == f64::NEG_INFINITY {
            s.serialize_str("-inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = ExtReal;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a number or \"inf\"/\"-inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<ExtReal, E> {
                Ok(ExtReal(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<ExtReal, E> {
                Ok(ExtReal(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<ExtReal, E> {
                Ok(ExtReal(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<ExtReal, E> {
                match v {
                    "inf" => Ok(ExtReal(f64::INFINITY)),
                    "-inf" => Ok(ExtReal(f64::NEG_INFINITY)),
                    _ => Err(E::custom(format!("not an extended real: {v}"))),
                }
            }
        }
        d.deserialize_any(V)
    }
}

/// Which error law a prediction request is for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// `L = c n^{-1/2} e^{-n eta} * theta_ratio`.
    Theorem,
    /// `L = sqrt(2/pi) a_n^{-1/2} e^{-a_n}`; requires `a_n > 0`.
    Refined,
}

/// Everything the predictor derives for one degree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub n: u32,
    /// Fractional part {alpha n + omega(C)} in [0, 1).
    pub phase: f64,
    /// Circuit point with omega(D_n) = phase.
    pub d_n: ExtReal,
    /// G(D_n, C), as used inside a_n.
    pub g_dc: f64,
    pub a_n: f64,
    pub l_theorem: f64,
    /// Absent when a_n <= 0 (the refined law degenerates).
    pub l_refined: Option<f64>,
    pub theta_ratio: f64,
}

/// Fractional part `{alpha n + omega(C)}` in `[0, 1)`.
pub fn phase(n: u32, chars: &GreenCharacteristics) -> f64 {
    let x = chars.alpha * n as f64 + chars.omega_c;
    x - x.floor()
}

/// Inverts the harmonic measure along the circuit: finds `D` with
/// `omega(D) = phase`. `phase = 0` gives `B`; `phase = alpha` gives infinity;
/// smaller phases live on `[B, inf)`, larger on `(-inf, -A]`.
///
/// Near the corners `omega` behaves like a square root, so its granularity
/// on the double-precision grid is about `sqrt(ulp)`; phases within ~1e-9 of
/// 0 or 1 cannot meet a 1e-12 residual and need a matching `tol` (the solver
/// then collapses onto the corner point).
pub fn solve_dn(
    dom: &TwoIntervalDomain,
    chars: &GreenCharacteristics,
    phase: f64,
    tol: f64,
) -> Result<ExtReal> {
    if !(0.0..1.0).contains(&phase) {
        return Err(Error::InvalidParameter {
            what: format!("phase must lie in [0,1), got {phase}"),
        });
    }
    if phase == 0.0 {
        return Ok(ExtReal(chars.b));
    }
    if (phase - chars.alpha).abs() < 1e-14 {
        return Ok(ExtReal(f64::INFINITY));
    }
    let c0 = chars.c0_abs;
    let qtol = (0.01 * tol).clamp(1e-15, 1e-12);
    // Compactified ray coordinate: u in [0,1) maps to B + u/(1-u) on the
    // right ray (omega rising 0 -> alpha) or to -A - u/(1-u) on the left
    // (omega falling 1 -> alpha).
    let right = phase < chars.alpha;
    let point = |u: f64| {
        if right {
            chars.b + u / (1.0 - u)
        } else {
            -chars.a - u / (1.0 - u)
        }
    };
    let mut lo = 0.0f64;
    let mut hi = 1.0 - 1e-12;
    let mut best = point(0.5 * (lo + hi));
    let mut residual = f64::INFINITY;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let t = point(mid);
        let w = domain::harmonic_measure(dom, c0, t, qtol)?;
        let r = w - phase;
        if r.abs() < residual {
            residual = r.abs();
            best = t;
        }
        if residual <= 0.1 * tol {
            break;
        }
        // omega increases with u on the right ray and decreases on the left.
        if (r < 0.0) == right {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if residual > tol {
        return Err(Error::RootNonConvergence {
            what: "solve_dn: harmonic-measure inversion",
            residual,
            iterations: 200,
        });
    }
    Ok(ExtReal(best))
}

/// The oscillating factor `e^{G(D_n,C)}` through the theta series:
/// `theta0((phase + omega_c)/2) / theta0((phase - omega_c)/2)` at nome
/// `h = e^{-pi p}`.
pub fn theta_ratio(n: u32, chars: &GreenCharacteristics) -> Result<f64> {
    theta_ratio_at_phase(phase(n, chars), chars)
}

/// Same factor as a function of the phase itself.
pub fn theta_ratio_at_phase(phase: f64, chars: &GreenCharacteristics) -> Result<f64> {
    let h = (-PI * chars.p).exp();
    let theta = ThetaParams::new(h, 1e-15)?;
    let num = theta.theta0(0.5 * (phase + chars.omega_c));
    let den = theta.theta0(0.5 * (phase - chars.omega_c));
    Ok(num / den)
}

/// Exponent of the refined law:
/// `a_n = eta n - G(D_n,C) - (1/2) ln(2 eta / eta1) + eta2`.
pub fn a_n(n: u32, chars: &GreenCharacteristics) -> Result<f64> {
    let g = theta_ratio(n, chars)?.ln();
    Ok(chars.eta * n as f64 - g - 0.5 * (2.0 * chars.eta / chars.eta1).ln() + chars.eta2)
}

/// Computes the full record for degree `n`. The `variant` names the law the
/// caller needs: `Refined` fails when `a_n <= 0`, `Theorem` always succeeds
/// (the record carries the refined value whenever it exists).
pub fn predict(
    dom: &TwoIntervalDomain,
    chars: &GreenCharacteristics,
    n: u32,
    variant: Variant,
    tol: f64,
) -> Result<PredictionRecord> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            what: "predict needs n >= 1".into(),
        });
    }
    let ph = phase(n, chars);
    let d_n = solve_dn(dom, chars, ph, tol)?;
    let ratio = theta_ratio(n, chars)?;
    let g_dc = ratio.ln();
    let a = chars.eta * n as f64 - g_dc - 0.5 * (2.0 * chars.eta / chars.eta1).ln() + chars.eta2;
    let c = 2.0 / (PI * chars.eta1).sqrt() * (-chars.eta2).exp();
    let l_theorem = c / (n as f64).sqrt() * (-chars.eta * n as f64).exp() * ratio;
    let l_refined = if a > 0.0 {
        Some((2.0 / PI).sqrt() / a.sqrt() * (-a).exp())
    } else {
        None
    };
    if variant == Variant::Refined && l_refined.is_none() {
        return Err(Error::NonPositiveExponent { n, a_n: a });
    }
    Ok(PredictionRecord {
        n,
        phase: ph,
        d_n,
        g_dc,
        a_n: a,
        l_theorem,
        l_refined,
        theta_ratio: ratio,
    })
}

/// Closed-form asymptote of `L_{2m+1}` for the symmetric domain `A = B`:
/// `sqrt(2/pi) * (A-1)/sqrt(A) * (2m+1)^{-1/2} * ((A-1)/(A+1))^m`.
pub fn symmetric_reference(m: u32, a: f64) -> Result<f64> {
    if !(a > 1.0) || !a.is_finite() {
        return Err(Error::InvalidParameter {
            what: format!("symmetric_reference needs A > 1, got {a}"),
        });
    }
    let q = (a - 1.0) / (a + 1.0);
    Ok((2.0 / PI).sqrt() * (a - 1.0) / a.sqrt() / ((2 * m + 1) as f64).sqrt() * q.powi(m as i32))
}

/// Exact error of the degenerate pair `[-A,-1] u {1}`:
/// `L_n = 2 / (T_n(1 + 4/(A-1)) + 1)` with `T_n` the Chebyshev polynomial.
pub fn degenerate_reference(n: u32, a: f64) -> Result<f64> {
    if !(a > 1.0) || !a.is_finite() {
        return Err(Error::InvalidParameter {
            what: format!("degenerate_reference needs A > 1, got {a}"),
        });
    }
    let x = 1.0 + 4.0 / (a - 1.0);
    let mut t0 = 1.0f64;
    let mut t1 = x;
    let t_n = match n {
        0 => 1.0,
        1 => x,
        _ => {
            for _ in 2..=n {
                let t2 = 2.0 * x * t1 - t0;
                t0 = t1;
                t1 = t2;
            }
            t1
        }
    };
    Ok(2.0 / (t_n + 1.0))
}

/// A characteristics bundle plus a certified theta orientation.
///
/// Construction computes the characteristics and then checks, at three
/// degrees, that the theta route for `e^{G(D_n,C)}` matches the ring-Green
/// route to 1e-8 relative; a mismatch is a hard error, not a warning.
#[derive(Debug, Clone)]
pub struct Predictor {
    dom: TwoIntervalDomain,
    chars: GreenCharacteristics,
    tol: f64,
}

impl Predictor {
    pub fn new(dom: TwoIntervalDomain, tol: f64) -> Result<Self> {
        let chars = domain::characteristics(&dom, tol)?;
        Self::from_chars(dom, chars, tol)
    }

    pub fn from_chars(
        dom: TwoIntervalDomain,
        chars: GreenCharacteristics,
        tol: f64,
    ) -> Result<Self> {
        let p = Self { dom, chars, tol };
        for n in [1u32, 2, 3] {
            let ratio = theta_ratio(n, &p.chars)?;
            let d_n = solve_dn(&p.dom, &p.chars, phase(n, &p.chars), tol)?;
            let via_ring = ring::green_dc(&p.dom, &p.chars, d_n.0, tol)?.exp();
            let diff = (ratio - via_ring).abs();
            if diff > 1e-8 * ratio.abs() {
                return Err(Error::ConsistencyCheck {
                    what: "theta-ratio orientation vs ring Green function",
                    diff,
                    allowed: 1e-8 * ratio.abs(),
                });
            }
        }
        Ok(p)
    }

    pub fn chars(&self) -> &GreenCharacteristics {
        &self.chars
    }

    pub fn domain(&self) -> &TwoIntervalDomain {
        &self.dom
    }

    pub fn predict(&self, n: u32, variant: Variant) -> Result<PredictionRecord> {
        predict(&self.dom, &self.chars, n, variant, self.tol)
    }
}
