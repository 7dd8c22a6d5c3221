//! The theta function `theta0(t | h)` used by the asymptotic error formula,
//! evaluated by its cosine series
//!
//! ```text
//! theta0(t) = 1 + 2 * sum_{k >= 1} (-1)^k h^(k^2) cos(2 pi k t)
//! ```
//!
//! for a real nome `h` in (0, 1). In classical notation this is
//! `vartheta_4(pi t, h)`: 1-periodic, even, positive on the real line,
//! minimal at integers and maximal at half-integers.

use crate::error::{Error, Result};

/// Parameters of the theta evaluation: the nome and the series cutoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaParams {
    pub h: f64,
    pub tol: f64,
}

impl ThetaParams {
    pub fn new(h: f64, tol: f64) -> Result<Self> {
        if !(h > 0.0 && h < 1.0) {
            return Err(Error::InvalidParameter {
                what: format!("theta nome must lie in (0,1), got {h}"),
            });
        }
        if !(tol > 0.0) {
            return Err(Error::InvalidParameter {
                what: format!("tolerance must be positive, got {tol}"),
            });
        }
        Ok(Self { h, tol })
    }

    /// Evaluates the series at `t`. Terms decay like `h^(k^2)`, so the loop
    /// is short for every nome bounded away from 1.
    pub fn theta0(&self, t: f64) -> f64 {
        let h = self.h;
        let cutoff = (self.tol * 1e-3).max(1e-18);
        let mut acc = 1.0;
        let mut sign = -1.0;
        // h^(k^2) built incrementally: h^(k^2) = h^((k-1)^2) * h^(2k-1).
        let mut hk2 = h; // k = 1
        let mut hodd = h; // h^(2k-1)
        let h2 = h * h;
        let mut k = 1u32;
        loop {
            acc += 2.0 * sign * hk2 * (2.0 * std::f64::consts::PI * k as f64 * t).cos();
            if hk2 < cutoff {
                break;
            }
            sign = -sign;
            hodd *= h2;
            hk2 *= hodd;
            k += 1;
        }
        acc
    }
}

/// One-shot evaluation of `theta0(t | h)`.
pub fn theta0(t: f64, h: f64) -> Result<f64> {
    Ok(ThetaParams::new(h, 1e-15)?.theta0(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit::agm_elliptic_k;
    use std::f64::consts::PI;

    #[test]
    fn rejects_bad_nome() {
        assert!(theta0(0.0, 0.0).is_err());
        assert!(theta0(0.0, 1.0).is_err());
        assert!(theta0(0.0, -0.2).is_err());
    }

    #[test]
    fn small_nome_anchor() {
        // 1 - 2(0.1) + 2(0.1)^4 - 2(0.1)^9 + ...
        let v = theta0(0.0, 0.1).unwrap();
        assert!((v - 0.800199998).abs() <= 1e-9, "got {v}");
    }

    #[test]
    fn periodic_and_even() {
        for &h in &[0.05, 0.134, 0.6] {
            for &t in &[0.0, 0.137, 0.25, 0.4999, 0.73] {
                let v = theta0(t, h).unwrap();
                assert!((theta0(t + 1.0, h).unwrap() - v).abs() <= 1e-14);
                assert!((theta0(-t, h).unwrap() - v).abs() <= 1e-14);
                assert!((theta0(1.0 - t, h).unwrap() - v).abs() <= 1e-14);
                assert!(v > 0.0);
            }
        }
    }

    #[test]
    fn extreme_values_at_lattice_points() {
        // Minimum at integers, maximum at half-integers.
        let h = 0.3;
        let at0 = theta0(0.0, h).unwrap();
        let at_half = theta0(0.5, h).unwrap();
        for &t in &[0.1, 0.2, 0.3, 0.4] {
            let v = theta0(t, h).unwrap();
            assert!(v > at0 && v < at_half);
        }
    }

    #[test]
    fn elliptic_identities_pin_the_normalization() {
        // With q = exp(-pi K'/K): theta0(0)^2 = 2 k' K / pi and
        // theta0(1/2)^2 = 2 K / pi.
        let k = 0.6f64;
        let kp = (1.0 - k * k).sqrt();
        let big_k = agm_elliptic_k(k);
        let big_kp = agm_elliptic_k(kp);
        let q = (-PI * big_kp / big_k).exp();
        let t0 = theta0(0.0, q).unwrap();
        let t_half = theta0(0.5, q).unwrap();
        assert!(
            (t0 * t0 - 2.0 * kp * big_k / PI).abs() <= 1e-12,
            "theta0(0)={t0}"
        );
        assert!(
            (t_half * t_half - 2.0 * big_k / PI).abs() <= 1e-12,
            "theta0(1/2)={t_half}"
        );
    }
}
