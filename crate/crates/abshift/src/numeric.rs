//! Exact rational scalars and canonical unions of closed rational intervals.
//!
//! Everything downstream (orbits, symbolic certificates, thickness, dimension
//! bounds) is built on the two types here: [`Rational`], an arbitrary-precision
//! fraction, and [`IntervalUnion`], a sorted union of pairwise-disjoint closed
//! intervals with rational endpoints. All operations are pure and exact.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::fmt;
use std::str::FromStr;

/// The universal exact scalar: an arbitrary-precision reduced fraction.
pub type Rational = num_rational::BigRational;

/// Builds a rational from an integer numerator/denominator pair.
///
/// Panics if `den == 0`; use [`parse_rational`] for untrusted input.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds a rational from an integer.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"` (optionally signed, surrounding whitespace allowed)
/// into a reduced [`Rational`]. A zero denominator is a parse error, never a
/// panic.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::ParseError("empty rational literal".into()));
    }
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num_str)
        .map_err(|e| Error::ParseError(format!("bad numerator {num_str:?}: {e}")))?;
    let den = BigInt::from_str(den_str)
        .map_err(|e| Error::ParseError(format!("bad denominator {den_str:?}: {e}")))?;
    if den.is_zero() {
        return Err(Error::ParseError(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Renders a rational as `"p/q"`, or `"p"` when the denominator is one.
/// Round-trips exactly through [`parse_rational`].
pub fn rational_to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Largest integer ≤ q.
pub fn rat_floor(q: &Rational) -> BigInt {
    q.floor().to_integer()
}

/// Smallest integer ≥ q.
pub fn rat_ceil(q: &Rational) -> BigInt {
    q.ceil().to_integer()
}

/// Exact nonnegative integer power of a rational.
pub fn rat_pow(base: &Rational, exp: usize) -> Rational {
    num_traits::pow(base.clone(), exp)
}

/// serde adapter: rationals as `"p/q"` strings in JSON (bit-exact round trip).
pub mod serde_rational {
    use super::{parse_rational, rational_to_string, Rational};
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rational_to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let raw = String::deserialize(d)?;
        parse_rational(&raw).map_err(de::Error::custom)
    }
}

/// Value of the digit series Σ_{n≥1} d_n β^{−n} for an eventually periodic
/// digit sequence given as `preperiod` followed by `period` repeated forever.
///
/// Requires `beta > 1` and a nonempty period (a finite prefix alone does not
/// determine an exact value). The closed form: the preperiod contributes a
/// finite sum, and the periodic tail contributes
/// `β^{−m} · (Σ_j period_j β^{p−j}) / (β^p − 1)` with `m = |preperiod|`,
/// `p = |period|`.
pub fn eventually_periodic_value(
    preperiod: &[u32],
    period: &[u32],
    beta: &Rational,
) -> Result<Rational> {
    if *beta <= Rational::one() {
        return Err(Error::InvalidParams(format!(
            "series base must exceed 1, got {}",
            rational_to_string(beta)
        )));
    }
    if period.is_empty() {
        return Err(Error::InvalidParams(
            "finite digit prefix has no exact series value; an eventually periodic \
             description is required"
                .into(),
        ));
    }
    let mut acc = Rational::zero();
    let mut pow = Rational::one();
    for &d in preperiod {
        pow *= beta; // pow = β^k at digit k
        acc += Rational::from_integer(BigInt::from(d)) / &pow;
    }
    // Periodic tail: Σ_j period_j β^{p−j} / (β^p − 1), scaled by β^{−m}.
    let mut head = Rational::zero();
    for &d in period {
        head = head * beta + Rational::from_integer(BigInt::from(d));
    }
    let beta_p = rat_pow(beta, period.len());
    let tail = head / (beta_p - Rational::one());
    acc += tail / pow;
    Ok(acc)
}

/// A closed interval with rational endpoints; degenerate points allowed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    /// Creates `[lo, hi]`; errors when `lo > hi`.
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidParams(format!(
                "interval endpoints out of order: {} > {}",
                rational_to_string(&lo),
                rational_to_string(&hi)
            )));
        }
        Ok(Interval { lo, hi })
    }

    /// The degenerate interval `[x, x]`.
    pub fn point(x: Rational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / rat_int(2)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// True when the closed intervals share at least one point.
    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Closed-set intersection, or `None` when disjoint.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = if self.lo >= other.lo { self.lo.clone() } else { other.lo.clone() };
        let hi = if self.hi <= other.hi { self.hi.clone() } else { other.hi.clone() };
        if lo <= hi {
            Some(Interval { lo, hi })
        } else {
            None
        }
    }

    /// Image under `x ↦ scale·x + offset` (endpoints swap when `scale < 0`).
    pub fn affine(&self, scale: &Rational, offset: &Rational) -> Interval {
        let a = scale * &self.lo + offset;
        let b = scale * &self.hi + offset;
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    pub fn translate(&self, t: &Rational) -> Interval {
        Interval { lo: &self.lo + t, hi: &self.hi + t }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            rational_to_string(&self.lo),
            rational_to_string(&self.hi)
        )
    }
}

impl serde::Serialize for Interval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeTuple;
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(&rational_to_string(&self.lo))?;
        t.serialize_element(&rational_to_string(&self.hi))?;
        t.end()
    }
}

impl<'de> serde::Deserialize<'de> for Interval {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (lo, hi) = <(String, String)>::deserialize(d)?;
        let lo = parse_rational(&lo).map_err(serde::de::Error::custom)?;
        let hi = parse_rational(&hi).map_err(serde::de::Error::custom)?;
        Interval::new(lo, hi).map_err(serde::de::Error::custom)
    }
}

/// A canonical finite union of closed rational intervals: parts are sorted
/// ascending and pairwise disjoint with strictly positive separation
/// (touching or overlapping inputs are merged on construction).
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
#[serde(transparent)]
pub struct IntervalUnion {
    parts: Vec<Interval>,
}

impl<'de> serde::Deserialize<'de> for IntervalUnion {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        // Arbitrary input is canonicalized on entry, like every constructor.
        let parts = Vec::<Interval>::deserialize(d)?;
        Ok(IntervalUnion::from_intervals(parts))
    }
}

impl IntervalUnion {
    pub fn empty() -> Self {
        IntervalUnion { parts: Vec::new() }
    }

    /// Canonicalizes an arbitrary list of intervals: sorts by endpoints and
    /// merges any pair with a nonpositive gap, so that surviving adjacent
    /// parts are separated by strictly positive gaps.
    pub fn from_intervals(mut v: Vec<Interval>) -> Self {
        v.sort();
        let mut parts: Vec<Interval> = Vec::with_capacity(v.len());
        for iv in v {
            match parts.last_mut() {
                Some(last) if iv.lo <= last.hi => {
                    if iv.hi > last.hi {
                        last.hi = iv.hi;
                    }
                }
                _ => parts.push(iv),
            }
        }
        IntervalUnion { parts }
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Smallest closed interval containing the union, if nonempty.
    pub fn hull(&self) -> Option<Interval> {
        match (self.parts.first(), self.parts.last()) {
            (Some(a), Some(b)) => Some(Interval { lo: a.lo.clone(), hi: b.hi.clone() }),
            _ => None,
        }
    }

    pub fn total_length(&self) -> Rational {
        self.parts
            .iter()
            .fold(Rational::zero(), |acc, iv| acc + iv.length())
    }

    pub fn contains(&self, x: &Rational) -> bool {
        // Binary search on the sorted parts.
        let idx = self.parts.partition_point(|iv| iv.hi < *x);
        idx < self.parts.len() && self.parts[idx].contains(x)
    }

    /// Set inclusion: every part lies inside some part of `other`.
    pub fn is_subset_of(&self, other: &IntervalUnion) -> bool {
        let mut j = 0usize;
        'outer: for p in &self.parts {
            while j < other.parts.len() {
                let q = &other.parts[j];
                if q.hi < p.lo {
                    j += 1;
                } else if q.contains_interval(p) {
                    continue 'outer;
                } else {
                    return false;
                }
            }
            return false;
        }
        true
    }

    /// Exact set intersection of two canonical unions (two-pointer sweep).
    /// Degenerate shared endpoints survive as point intervals.
    pub fn intersect(&self, other: &IntervalUnion) -> IntervalUnion {
        let mut out: Vec<Interval> = Vec::new();
        let (mut i, mut j) = (0usize, 0usize);
        while i < self.parts.len() && j < other.parts.len() {
            let a = &self.parts[i];
            let b = &other.parts[j];
            if let Some(iv) = a.intersect(b) {
                out.push(iv);
            }
            if a.hi <= b.hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalUnion::from_intervals(out)
    }

    /// The bounded complementary gaps between consecutive parts, reported by
    /// their closed endpoints (each has strictly positive length by the
    /// canonical-form invariant).
    pub fn gaps(&self) -> Vec<Interval> {
        self.parts
            .windows(2)
            .map(|w| Interval { lo: w[0].hi.clone(), hi: w[1].lo.clone() })
            .collect()
    }

    pub fn translate(&self, t: &Rational) -> IntervalUnion {
        IntervalUnion {
            parts: self.parts.iter().map(|iv| iv.translate(t)).collect(),
        }
    }

    /// Image under `x ↦ scale·x + offset`.
    pub fn affine(&self, scale: &Rational, offset: &Rational) -> IntervalUnion {
        IntervalUnion::from_intervals(
            self.parts.iter().map(|iv| iv.affine(scale, offset)).collect(),
        )
    }

    /// CSV serialization: one row per part, `lo_num,lo_den,hi_num,hi_den`.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for iv in &self.parts {
            s.push_str(&format!(
                "{},{},{},{}\n",
                iv.lo.numer(),
                iv.lo.denom(),
                iv.hi.numer(),
                iv.hi.denom()
            ));
        }
        s
    }

    /// Parses the CSV form written by [`IntervalUnion::to_csv`]; input rows
    /// are canonicalized.
    pub fn from_csv(s: &str) -> Result<IntervalUnion> {
        let mut intervals = Vec::new();
        for (lineno, line) in s.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 4 {
                return Err(Error::ParseError(format!(
                    "interval CSV line {}: expected 4 fields, got {}",
                    lineno + 1,
                    fields.len()
                )));
            }
            let mut nums = Vec::with_capacity(4);
            for f in &fields {
                let n = BigInt::from_str(f.trim()).map_err(|e| {
                    Error::ParseError(format!("interval CSV line {}: {e}", lineno + 1))
                })?;
                nums.push(n);
            }
            let hi_den = nums.pop().unwrap();
            let hi_num = nums.pop().unwrap();
            let lo_den = nums.pop().unwrap();
            let lo_num = nums.pop().unwrap();
            if lo_den.is_zero() || hi_den.is_zero() {
                return Err(Error::ParseError(format!(
                    "interval CSV line {}: zero denominator",
                    lineno + 1
                )));
            }
            intervals.push(Interval::new(
                Rational::new(lo_num, lo_den),
                Rational::new(hi_num, hi_den),
            )?);
        }
        Ok(IntervalUnion::from_intervals(intervals))
    }
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, iv) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{iv}")?;
        }
        write!(f, "}}")
    }
}

/// Least common multiple of two positive lengths (used to bound comparison
/// windows of eventually periodic sequences).
pub fn lcm_len(a: usize, b: usize) -> usize {
    if a == 0 || b == 0 {
        return a.max(b);
    }
    a.lcm(&b)
}
