//! Fixed-point arithmetic over `BigInt` for the levelled Remez solves.
//!
//! Every value is `m / 2^bits` with a shared, per-run `bits`. The error of
//! the best approximant decays like `e^{-n eta}`, so the working precision
//! must scale with `n`; the auto rule adds 30 guard digits on top of the
//! `n eta / ln 10` digits the answer itself consumes. Fixed point (rather
//! than floating) keeps the alternation solve exactly reproducible: results
//! are a pure function of (domain, n, digits).

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// Decimal working precision for one oracle run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionContext {
    digits: u32,
    bits: u32,
}

impl PrecisionContext {
    pub const MIN_DIGITS: u32 = 30;

    pub fn new(digits: u32) -> Result<Self> {
        if digits < Self::MIN_DIGITS {
            return Err(Error::InvalidParameter {
                what: format!(
                    "precision must be at least {} digits, got {digits}",
                    Self::MIN_DIGITS
                ),
            });
        }
        if digits > 100_000 {
            return Err(Error::InvalidParameter {
                what: format!("precision of {digits} digits is beyond reason"),
            });
        }
        // 64 guard bits on top of the requested decimal width.
        let bits = (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 64;
        Ok(Self { digits, bits })
    }

    /// Auto rule: `ceil(n eta / ln 10) + 30` digits, `eta` the decay rate.
    pub fn auto(n: u32, eta: f64) -> Result<Self> {
        let needed = (n as f64 * eta / std::f64::consts::LN_10).ceil().max(0.0) as u32;
        Self::new(needed + Self::MIN_DIGITS)
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn zero(&self) -> Fx {
        Fx {
            m: BigInt::zero(),
            bits: self.bits,
        }
    }

    pub fn from_i64(&self, v: i64) -> Fx {
        Fx {
            m: BigInt::from(v) << self.bits,
            bits: self.bits,
        }
    }

    /// Exact embedding of a double (every finite f64 is a dyadic rational).
    pub fn from_f64(&self, v: f64) -> Result<Fx> {
        if !v.is_finite() {
            return Err(Error::InvalidParameter {
                what: format!("cannot embed {v} in fixed point"),
            });
        }
        if v == 0.0 {
            return Ok(self.zero());
        }
        let raw = v.to_bits();
        let sign = if v < 0.0 { -1 } else { 1 };
        let exp_bits = ((raw >> 52) & 0x7ff) as i64;
        let frac = raw & ((1u64 << 52) - 1);
        let (mant, exp) = if exp_bits == 0 {
            (frac, -1074i64) // subnormal
        } else {
            (frac | (1u64 << 52), exp_bits - 1075)
        };
        let shift = exp + self.bits as i64;
        let mag = BigInt::from(mant);
        let m = if shift >= 0 {
            mag << shift
        } else {
            shr_round(mag, (-shift) as u64)
        };
        Ok(Fx {
            m: m * sign,
            bits: self.bits,
        })
    }
}

/// Zero at the same precision as an existing value.
pub fn zero_like(x: &Fx) -> Fx {
    Fx {
        m: BigInt::zero(),
        bits: x.bits,
    }
}

/// Shift right by `k` with round-to-nearest (ties away from zero);
/// magnitude-only helper, input must be non-negative.
fn shr_round(mag: BigInt, k: u64) -> BigInt {
    if k == 0 {
        return mag;
    }
    let half = BigInt::from(1) << (k - 1);
    (mag + half) >> k
}

/// A fixed-point real: `m / 2^bits`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fx {
    m: BigInt,
    bits: u32,
}

impl Fx {
    fn check(&self, other: &Fx) {
        debug_assert_eq!(self.bits, other.bits, "mixed fixed-point precisions");
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.m.is_negative()
    }

    pub fn signum(&self) -> i32 {
        if self.m.is_zero() {
            0
        } else if self.m.is_negative() {
            -1
        } else {
            1
        }
    }

    pub fn abs(&self) -> Fx {
        Fx {
            m: self.m.abs(),
            bits: self.bits,
        }
    }

    pub fn neg(&self) -> Fx {
        Fx {
            m: -&self.m,
            bits: self.bits,
        }
    }

    pub fn add(&self, other: &Fx) -> Fx {
        self.check(other);
        Fx {
            m: &self.m + &other.m,
            bits: self.bits,
        }
    }

    pub fn sub(&self, other: &Fx) -> Fx {
        self.check(other);
        Fx {
            m: &self.m - &other.m,
            bits: self.bits,
        }
    }

    pub fn mul(&self, other: &Fx) -> Fx {
        self.check(other);
        let prod = &self.m * &other.m;
        let neg = prod.is_negative();
        let mag = shr_round(prod.abs(), self.bits as u64);
        Fx {
            m: if neg { -mag } else { mag },
            bits: self.bits,
        }
    }

    /// Doubling is a pure shift: exact.
    pub fn mul2(&self) -> Fx {
        Fx {
            m: &self.m << 1,
            bits: self.bits,
        }
    }

    /// Exact product with a small integer.
    pub fn mul_i64(&self, k: i64) -> Fx {
        Fx {
            m: &self.m * k,
            bits: self.bits,
        }
    }

    /// Halving, rounded to nearest.
    pub fn half(&self) -> Fx {
        let neg = self.m.is_negative();
        let mag = shr_round(self.m.abs(), 1);
        Fx {
            m: if neg { -mag } else { mag },
            bits: self.bits,
        }
    }

    pub fn div(&self, other: &Fx) -> Result<Fx> {
        self.check(other);
        if other.m.is_zero() {
            return Err(Error::InvalidParameter {
                what: "fixed-point division by zero".into(),
            });
        }
        let num = &self.m << (self.bits + 1); // one extra bit for rounding
        let q = num / &other.m;
        let neg = q.is_negative();
        let mag = shr_round(q.abs(), 1);
        Ok(Fx {
            m: if neg { -mag } else { mag },
            bits: self.bits,
        })
    }

    /// Nearest double to the exact value, built from the top 53 bits.
    pub fn to_f64(&self) -> f64 {
        if self.m.is_zero() {
            return 0.0;
        }
        let neg = self.m.is_negative();
        let mag = self.m.abs();
        let nbits = mag.bits();
        // Keep 54 bits and round to 53 so the double conversion is exact.
        let (top, shift) = if nbits > 54 {
            let k = nbits - 54;
            (shr_round(mag, k), k as i64)
        } else {
            (mag, 0)
        };
        let v = top.to_f64().unwrap_or(f64::INFINITY);
        let scaled = v * exp2i(shift - self.bits as i64);
        if neg {
            -scaled
        } else {
            scaled
        }
    }

    /// Scientific-notation rendering with `sig` significant digits.
    pub fn to_decimal(&self, sig: u32) -> String {
        assert!(sig >= 1);
        if self.m.is_zero() {
            return "0".to_string();
        }
        let neg = self.m.is_negative();
        let mag = self.m.abs();
        // First guess of the decimal exponent from bit lengths.
        let log10 = (mag.bits() as f64 - 1.0 - self.bits as f64) * std::f64::consts::LOG10_2;
        let mut e10 = log10.floor() as i64;
        // Scaled integer with sig digits: round(mag * 10^(sig-1-e10) / 2^bits).
        let digits_of = |e10: i64| -> BigInt {
            let k = sig as i64 - 1 - e10;
            let (num, den) = if k >= 0 {
                (
                    &mag * BigInt::from(10u32).pow(k as u32),
                    BigInt::from(1) << self.bits,
                )
            } else {
                (
                    mag.clone(),
                    (BigInt::from(1) << self.bits) * BigInt::from(10u32).pow((-k) as u32),
                )
            };
            let q = (&num << 1) / den;
            shr_round(q, 1)
        };
        let mut d = digits_of(e10);
        let lo = BigInt::from(10u32).pow(sig - 1);
        let hi = BigInt::from(10u32).pow(sig);
        while d >= hi {
            e10 += 1;
            d = digits_of(e10);
        }
        while d < lo {
            e10 -= 1;
            d = digits_of(e10);
        }
        let s = d.to_string();
        let (head, tail) = s.split_at(1);
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push_str(head);
        if !tail.is_empty() {
            out.push('.');
            out.push_str(tail);
        }
        out.push('e');
        out.push_str(&e10.to_string());
        out
    }
}

/// `2^e` as a double, saturating to 0 / infinity outside the exponent range.
fn exp2i(e: i64) -> f64 {
    if e < -1100 {
        0.0
    } else if e > 1023 {
        f64::INFINITY
    } else if e >= -1022 {
        f64::from_bits(((e + 1023) as u64) << 52)
    } else {
        // Subnormal range: split the shift so each factor is normal.
        let mut v = f64::from_bits(1u64 << 52); // 2^-1022
        for _ in 0..(-1022 - e) {
            v *= 0.5;
        }
        v
    }
}
