//! Certified two-sided rational bounds for the few irrational quantities the
//! crate must report: natural logarithms, square roots, and their quotients.
//!
//! Every function returns a [`RealBound`] `[lo, hi]` whose endpoints are exact
//! rationals provably bracketing the true real value (directed rounding). The
//! series and integer-root arguments below are elementary and fully
//! self-contained, so each bound is a checkable theorem about its endpoints.

use crate::error::{Error, Result};
use crate::numeric::{rat_int, rational_to_string, serde_rational, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Default precision: bounds tighter than 2^−160 (≈ 10^−48), comfortably
/// below every tolerance used by callers.
pub const DEFAULT_BITS: u32 = 160;

/// An unknown real number confined to the closed interval `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealBound {
    #[serde(with = "serde_rational")]
    pub lo: Rational,
    #[serde(with = "serde_rational")]
    pub hi: Rational,
}

impl RealBound {
    pub fn exact(r: Rational) -> Self {
        RealBound { lo: r.clone(), hi: r }
    }

    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidParams(
                "real bound endpoints out of order".into(),
            ));
        }
        Ok(RealBound { lo, hi })
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn add(&self, other: &RealBound) -> RealBound {
        RealBound {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn add_rat(&self, r: &Rational) -> RealBound {
        RealBound { lo: &self.lo + r, hi: &self.hi + r }
    }

    pub fn scale(&self, r: &Rational) -> RealBound {
        if r.is_negative() {
            RealBound { lo: &self.hi * r, hi: &self.lo * r }
        } else {
            RealBound { lo: &self.lo * r, hi: &self.hi * r }
        }
    }

    /// Reciprocal of a bound known to be strictly positive.
    pub fn recip_pos(&self) -> Result<RealBound> {
        if !self.lo.is_positive() {
            return Err(Error::InvalidParams(
                "reciprocal requires a strictly positive bound".into(),
            ));
        }
        Ok(RealBound {
            lo: Rational::one() / &self.hi,
            hi: Rational::one() / &self.lo,
        })
    }

    /// Quotient of two bounds, both strictly positive.
    pub fn div_pos(&self, other: &RealBound) -> Result<RealBound> {
        if !self.lo.is_positive() || !other.lo.is_positive() {
            return Err(Error::InvalidParams(
                "directed division requires strictly positive bounds".into(),
            ));
        }
        Ok(RealBound {
            lo: &self.lo / &other.hi,
            hi: &self.hi / &other.lo,
        })
    }

    /// True when the whole bound lies strictly below `r`.
    pub fn certainly_lt(&self, r: &Rational) -> bool {
        self.hi < *r
    }

    /// True when the whole bound lies at or above `r`.
    pub fn certainly_ge(&self, r: &Rational) -> bool {
        self.lo >= *r
    }
}

fn precision_eps(bits: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << bits)
}

/// Largest dyadic `n/2^p ≤ r`.
fn dyadic_down(r: &Rational, p: u32) -> Rational {
    let num = r.numer() << p as usize;
    Rational::new(num.div_floor(r.denom()), BigInt::one() << p as usize)
}

/// Smallest dyadic `n/2^p ≥ r`.
fn dyadic_up(r: &Rational, p: u32) -> Rational {
    let num = r.numer() << p as usize;
    Rational::new(num.div_ceil(r.denom()), BigInt::one() << p as usize)
}

/// Inverse-hyperbolic-tangent series for `ln q` on `q ∈ [1, 2]`:
/// `ln q = 2·Σ_{k≥0} z^(2k+1)/(2k+1)` at `z = (q−1)/(q+1) ∈ [0, 1/3]`.
///
/// Two running chains bracket the partial sums, with every intermediate
/// rounded outward to dyadics of `bits + 16` fractional bits so bignum
/// sizes stay fixed across iterations. The tail after the last added term
/// is positive and at most `(next term)/(1 − z²)`, which closes the upper
/// bound.
fn ln_core(q: &Rational, bits: u32) -> Result<RealBound> {
    let one = Rational::one();
    if q == &one {
        return Ok(RealBound::exact(Rational::zero()));
    }
    let p = bits + 16;
    let two = rat_int(2);
    let z = (q - &one) / (q + &one);
    let z2 = &z * &z;
    let tail_factor_hi = dyadic_up(&(&one / (&one - &z2)), p);
    let eps = precision_eps(bits);
    let mut partial_lo = Rational::zero();
    let mut partial_hi = Rational::zero();
    let mut power_lo = dyadic_down(&z, p); // brackets z^(2k+1)
    let mut power_hi = dyadic_up(&z, p);
    for k in 0..100_000i64 {
        let d = rat_int(2 * k + 1);
        partial_lo += dyadic_down(&(&two * &power_lo / &d), p);
        partial_hi += dyadic_up(&(&two * &power_hi / &d), p);
        power_lo = dyadic_down(&(&power_lo * &z2), p);
        power_hi = dyadic_up(&(&power_hi * &z2), p);
        let next = &two * &power_hi / rat_int(2 * k + 3);
        let tail = dyadic_up(&(&next * &tail_factor_hi), p);
        if tail < eps {
            return Ok(RealBound { lo: partial_lo, hi: partial_hi + tail });
        }
    }
    Err(Error::SearchFailed(
        "logarithm series failed to converge".into(),
    ))
}

/// Certified bounds on `ln q` for a rational `q > 0`.
///
/// `q < 1` goes through `ln q = −ln(1/q)`; `q ≥ 1` is reduced by powers of
/// two to `q = 2^m·q'` with `q' ∈ [1, 2)`, and `ln q = m·ln 2 + ln q'` with
/// both logarithms evaluated by [`ln_core`].
pub fn ln_bounds(q: &Rational, bits: u32) -> Result<RealBound> {
    if !q.is_positive() {
        return Err(Error::InvalidParams(format!(
            "logarithm argument must be positive, got {}",
            rational_to_string(q)
        )));
    }
    let one = Rational::one();
    if q == &one {
        return Ok(RealBound::exact(Rational::zero()));
    }
    if *q < one {
        let inv = ln_bounds(&(one / q), bits)?;
        return Ok(RealBound { lo: -inv.hi, hi: -inv.lo });
    }
    let two = rat_int(2);
    let mut m = 0u32;
    let mut reduced = q.clone();
    while reduced >= two {
        reduced /= &two;
        m += 1;
    }
    let core = ln_core(&reduced, bits + 4)?;
    if m == 0 {
        return Ok(core);
    }
    // m·ln2 amplifies the ln2 width by m; ask for log₂(m) extra bits.
    let extra = 33 - m.next_power_of_two().leading_zeros();
    let ln2 = ln_core(&two, bits + 4 + extra)?;
    Ok(core.add(&ln2.scale(&rat_int(i64::from(m)))))
}

/// Certified bounds on `ln x` for a bounded real `x` with `x.lo > 0`,
/// by monotonicity of the logarithm.
pub fn ln_bounds_real(x: &RealBound, bits: u32) -> Result<RealBound> {
    let lo = ln_bounds(&x.lo, bits)?;
    let hi = ln_bounds(&x.hi, bits)?;
    Ok(RealBound { lo: lo.lo, hi: hi.hi })
}

/// Certified bounds on `√q` for a rational `q ≥ 0`, exact when `q` is a
/// perfect square of a rational.
///
/// Writes `q = a/b` and brackets `√(ab)` between consecutive dyadics using the
/// integer square root of `ab·4^k`; dividing by `b` yields `√q` bounds of
/// width at most `2^−bits`.
pub fn sqrt_bounds(q: &Rational, bits: u32) -> Result<RealBound> {
    if q.is_negative() {
        return Err(Error::InvalidParams(format!(
            "square root argument must be nonnegative, got {}",
            rational_to_string(q)
        )));
    }
    if q.is_zero() {
        return Ok(RealBound::exact(Rational::zero()));
    }
    let a = q.numer().clone();
    let b = q.denom().clone();
    let ab = &a * &b;
    // k extra bits so that the final error ≤ 1/(b·2^k) ≤ 2^−bits.
    let k = bits;
    let scaled = &ab << (2 * k as usize);
    let s = scaled.sqrt(); // floor integer square root
    let denom = Rational::from_integer(&b * (BigInt::one() << k as usize));
    if &s * &s == scaled {
        return Ok(RealBound::exact(Rational::from_integer(s) / denom));
    }
    let lo = Rational::from_integer(s.clone()) / &denom;
    let hi = Rational::from_integer(s + BigInt::one()) / denom;
    Ok(RealBound { lo, hi })
}

/// Decimal rendering of a rational truncated toward zero after `places`
/// fractional digits. Truncation makes the printed value a valid lower bound
/// in magnitude for the true one.
pub fn decimal_trunc(r: &Rational, places: usize) -> String {
    let sign = if r.is_negative() { "-" } else { "" };
    let scale = BigInt::from(10u32).pow(places as u32);
    let scaled: BigInt = (r.numer().abs() * &scale) / r.denom();
    let digits = scaled.to_string();
    if places == 0 {
        return format!("{sign}{digits}");
    }
    let padded = if digits.len() <= places {
        format!("{}{}", "0".repeat(places + 1 - digits.len()), digits)
    } else {
        digits
    };
    let split = padded.len() - places;
    format!("{sign}{}.{}", &padded[..split], &padded[split..])
}
