//! Chebyshev-basis polynomials over fixed-point coefficients.
//!
//! The basis lives on the hull [-A, B] of the approximation set: |T_k| <= 1
//! there, which keeps the levelled alternation system conditioned ~10^O(1)
//! instead of Vandermonde-explosive.

use super::fixed::{Fx, PrecisionContext};

#[derive(Debug, Clone)]
pub struct ChebPoly {
    coefs: Vec<Fx>, // c_0..c_deg of sum c_k T_k(u(x))
    lo: Fx,
    hi: Fx,
}

impl ChebPoly {
    /// `lo`/`hi` are the hull endpoints; `u(x) = (2x - lo - hi)/(hi - lo)`.
    pub fn new(coefs: Vec<Fx>, lo: Fx, hi: Fx) -> Self {
        assert!(!coefs.is_empty());
        assert!(lo < hi);
        Self { coefs, lo, hi }
    }

    pub fn degree(&self) -> usize {
        self.coefs.len() - 1
    }

    pub fn coefficients(&self) -> &[Fx] {
        &self.coefs
    }

    pub fn hull(&self) -> (&Fx, &Fx) {
        (&self.lo, &self.hi)
    }

    fn to_unit(&self, x: &Fx) -> Fx {
        let num = x.mul2().sub(&self.lo).sub(&self.hi);
        let den = self.hi.sub(&self.lo);
        num.div(&den).expect("hull has positive width")
    }

    /// Clenshaw backward recurrence; one rounded product per coefficient.
    pub fn eval(&self, x: &Fx) -> Fx {
        let u = self.to_unit(x);
        let u2 = u.mul2();
        let n = self.degree();
        if n == 0 {
            return self.coefs[0].clone();
        }
        let mut b1 = self.coefs[n].clone();
        let mut b2 = super::fixed::zero_like(&b1);
        for k in (1..n).rev() {
            let next = self.coefs[k].add(&u2.mul(&b1)).sub(&b2);
            b2 = b1;
            b1 = next;
        }
        self.coefs[0].add(&u.mul(&b1)).sub(&b2)
    }

    /// Derivative in the same basis: the usual descending recurrence
    /// `d_{k-1} = d_{k+1} + 2k c_k`, halving d_0, then the chain factor
    /// `2/(hi - lo)` for the affine pullback.
    pub fn derivative(&self, ctx: &PrecisionContext) -> ChebPoly {
        let n = self.degree();
        if n == 0 {
            return ChebPoly::new(vec![ctx.zero()], self.lo.clone(), self.hi.clone());
        }
        let mut d = vec![ctx.zero(); n + 2];
        for k in (1..=n).rev() {
            d[k - 1] = d[k + 1].add(&self.coefs[k].mul_i64(2 * k as i64));
        }
        d.truncate(n);
        d[0] = d[0].half();
        let chain = ctx
            .from_i64(2)
            .div(&self.hi.sub(&self.lo))
            .expect("positive width");
        let coefs = d.iter().map(|c| c.mul(&chain)).collect();
        ChebPoly::new(coefs, self.lo.clone(), self.hi.clone())
    }

    /// Nearest-double image of the coefficients, for scanning work where
    /// fixed point would be wasted.
    pub fn coefs_f64(&self) -> Vec<f64> {
        self.coefs.iter().map(Fx::to_f64).collect()
    }

    pub fn hull_f64(&self) -> (f64, f64) {
        (self.lo.to_f64(), self.hi.to_f64())
    }
}

/// Clenshaw in doubles on the unit variable.
pub fn clenshaw_f64(coefs: &[f64], u: f64) -> f64 {
    let n = coefs.len() - 1;
    if n == 0 {
        return coefs[0];
    }
    let mut b1 = coefs[n];
    let mut b2 = 0.0;
    for k in (1..n).rev() {
        let next = coefs[k] + 2.0 * u * b1 - b2;
        b2 = b1;
        b1 = next;
    }
    coefs[0] + u * b1 - b2
}

pub fn to_unit_f64(lo: f64, hi: f64, x: f64) -> f64 {
    (2.0 * x - lo - hi) / (hi - lo)
}
