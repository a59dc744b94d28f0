//! The two-parameter interval map `T(x) = βx + α − ⌊βx + α⌋` on `[0,1)`,
//! its digit expansions, and the two critical itineraries that pin down the
//! associated symbolic space: the coding `u` of the fixed endpoint `0` and the
//! left-limit coding `v` of `1`.
//!
//! With rational `α`, `β` every orbit stays rational, so digits, partial sums,
//! and remainders are computed bit-exactly. When an orbit revisits a state the
//! itinerary is returned in exact eventually periodic form.

use crate::error::{Error, Result};
use crate::numeric::{rat_ceil, rat_floor, rat_pow, rational_to_string, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// Maximum number of distinct orbit states remembered for exact periodicity
/// detection; beyond it digits are still produced but repeats go unnoticed.
pub const DEFAULT_STATE_CAP: usize = 1_000_000;

/// Validated parameter triple `(α, β, ℓ)` with `α ∈ [0,1)`, `β > 1`, and
/// `ℓ = ⌊α+β⌋` (so the digit alphabet is `{0, …, ℓ}`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Params {
    alpha: Rational,
    beta: Rational,
    ell: u32,
}

impl Params {
    /// Validates `α ∈ [0,1)`, `β > 1` and derives the alphabet top `ℓ`.
    pub fn new(alpha: Rational, beta: Rational) -> Result<Self> {
        if alpha.is_negative() || alpha >= Rational::one() {
            return Err(Error::InvalidParams(format!(
                "offset must lie in [0,1), got {}",
                rational_to_string(&alpha)
            )));
        }
        if beta <= Rational::one() {
            return Err(Error::InvalidParams(format!(
                "slope must exceed 1, got {}",
                rational_to_string(&beta)
            )));
        }
        let ell_big = rat_floor(&(&alpha + &beta));
        let ell = ell_big.to_u32().ok_or_else(|| {
            Error::InvalidParams("alphabet top exceeds the supported range".into())
        })?;
        Ok(Params { alpha, beta, ell })
    }

    /// As [`Params::new`], additionally requiring the laboratory regime used
    /// by the parameter-set construction: `ℓ ≥ 3` and `ℓ−1 < β < ℓ+1`.
    pub fn laboratory(alpha: Rational, beta: Rational) -> Result<Self> {
        let p = Params::new(alpha, beta)?;
        if !p.is_laboratory() {
            return Err(Error::InvalidParams(format!(
                "parameters (α={}, β={}) fall outside the laboratory regime \
                 (alphabet top ≥ 3 and slope within one of it)",
                rational_to_string(&p.alpha),
                rational_to_string(&p.beta)
            )));
        }
        Ok(p)
    }

    pub fn is_laboratory(&self) -> bool {
        if self.ell < 3 {
            return false;
        }
        let lo = Rational::from_integer(BigInt::from(self.ell - 1));
        let hi = Rational::from_integer(BigInt::from(self.ell + 1));
        lo < self.beta && self.beta < hi
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    /// Top digit of the alphabet `{0, …, ℓ}`.
    pub fn ell(&self) -> u32 {
        self.ell
    }
}

/// A digit sequence: a finite prefix (`period` empty) or an eventually
/// periodic sequence `preperiod · period^∞` in canonical form (primitive
/// period, shortest preperiod).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolSeq {
    preperiod: Vec<u32>,
    period: Vec<u32>,
}

impl SymbolSeq {
    /// A finite prefix with no exact tail information.
    pub fn finite(digits: Vec<u32>) -> Self {
        SymbolSeq { preperiod: digits, period: Vec::new() }
    }

    /// A purely periodic sequence `period^∞`; the period must be nonempty.
    pub fn periodic(period: Vec<u32>) -> Result<Self> {
        Self::eventually_periodic(Vec::new(), period)
    }

    /// An eventually periodic sequence `preperiod · period^∞`, canonicalized;
    /// an empty period yields a finite prefix.
    pub fn eventually_periodic(preperiod: Vec<u32>, period: Vec<u32>) -> Result<Self> {
        let mut s = SymbolSeq { preperiod, period };
        s.canonicalize();
        Ok(s)
    }

    fn canonicalize(&mut self) {
        if self.period.is_empty() {
            return;
        }
        // Primitive period: shortest divisor-length block that tiles it.
        let p = self.period.len();
        for d in 1..p {
            if p.is_multiple_of(d) && (d..p).all(|i| self.period[i] == self.period[i % d]) {
                self.period.truncate(d);
                break;
            }
        }
        // Shortest preperiod: absorb trailing preperiod digits that merely
        // repeat the rotated period.
        while let Some(&last) = self.preperiod.last() {
            if last == *self.period.last().unwrap() {
                self.preperiod.pop();
                self.period.rotate_right(1);
            } else {
                break;
            }
        }
    }

    pub fn preperiod(&self) -> &[u32] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u32] {
        &self.period
    }

    /// True when the sequence carries an exact (infinite) description.
    pub fn is_eventually_periodic(&self) -> bool {
        !self.period.is_empty()
    }

    /// Number of digits available: `None` means unbounded.
    pub fn available(&self) -> Option<usize> {
        if self.is_eventually_periodic() {
            None
        } else {
            Some(self.preperiod.len())
        }
    }

    /// Digit at 0-based position `i`, if available.
    pub fn digit_at(&self, i: usize) -> Option<u32> {
        if i < self.preperiod.len() {
            return Some(self.preperiod[i]);
        }
        if self.period.is_empty() {
            return None;
        }
        let k = (i - self.preperiod.len()) % self.period.len();
        Some(self.period[k])
    }

    pub fn first(&self) -> Option<u32> {
        self.digit_at(0)
    }

    /// The first `n` digits; errors when a finite prefix is too short.
    pub fn digits(&self, n: usize) -> Result<Vec<u32>> {
        if let Some(have) = self.available() {
            if have < n {
                return Err(Error::InsufficientDigits { needed: n, have });
            }
        }
        Ok((0..n).map(|i| self.digit_at(i).unwrap()).collect())
    }

    /// The sequence shifted left by one (drops the first digit); `None` for
    /// an empty finite prefix.
    pub fn shift(&self) -> Option<SymbolSeq> {
        if self.preperiod.is_empty() {
            if self.period.is_empty() {
                return None;
            }
            let mut per = self.period.clone();
            per.rotate_left(1);
            return Some(SymbolSeq::eventually_periodic(Vec::new(), per).unwrap());
        }
        Some(
            SymbolSeq::eventually_periodic(self.preperiod[1..].to_vec(), self.period.clone())
                .unwrap(),
        )
    }

    /// The exact set of digits occurring at positions ≥ 1 (i.e. in the
    /// shifted sequence) — available only for eventually periodic input,
    /// where the set is decided by the description.
    pub fn tail_symbols(&self) -> Option<std::collections::BTreeSet<u32>> {
        if !self.is_eventually_periodic() {
            return None;
        }
        let mut set: std::collections::BTreeSet<u32> =
            self.preperiod.iter().skip(1).copied().collect();
        set.extend(self.period.iter().copied());
        Some(set)
    }

    pub fn max_digit(&self) -> Option<u32> {
        self.preperiod.iter().chain(self.period.iter()).max().copied()
    }

    /// Series value Σ d_n β^{−n}; requires an eventually periodic description.
    pub fn series_value(&self, beta: &Rational) -> Result<Rational> {
        crate::numeric::eventually_periodic_value(&self.preperiod, &self.period, beta)
    }
}

impl fmt::Display for SymbolSeq {
    /// Textual form: digits comma-separated with the period parenthesized,
    /// e.g. `0,(1)` for `0·1^∞`, `(1,0)` for `(10)^∞`, `1,1,0` for a finite
    /// prefix.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pre: Vec<String> = self.preperiod.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", pre.join(","))?;
        if !self.period.is_empty() {
            if !self.preperiod.is_empty() {
                write!(f, ",")?;
            }
            let per: Vec<String> = self.period.iter().map(|d| d.to_string()).collect();
            write!(f, "({})", per.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for SymbolSeq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        fn parse_digits(s: &str) -> Result<Vec<u32>> {
            let s = s.trim().trim_end_matches(',');
            if s.trim().is_empty() {
                return Ok(Vec::new());
            }
            s.split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<u32>()
                        .map_err(|e| Error::ParseError(format!("bad digit {tok:?}: {e}")))
                })
                .collect()
        }
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::ParseError("empty digit sequence".into()));
        }
        match s.split_once('(') {
            None => Ok(SymbolSeq::finite(parse_digits(s)?)),
            Some((pre_raw, rest)) => {
                let inner = rest.strip_suffix(')').ok_or_else(|| {
                    Error::ParseError(format!("unterminated period in {s:?}"))
                })?;
                let preperiod = parse_digits(pre_raw)?;
                let period = parse_digits(inner)?;
                if period.is_empty() {
                    return Err(Error::ParseError(format!("empty period in {s:?}")));
                }
                SymbolSeq::eventually_periodic(preperiod, period)
            }
        }
    }
}

impl serde::Serialize for SymbolSeq {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for SymbolSeq {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        raw.parse().map_err(serde::de::Error::custom)
    }
}

fn check_domain(x: &Rational) -> Result<()> {
    if x.is_negative() || *x >= Rational::one() {
        return Err(Error::OutOfDomain);
    }
    Ok(())
}

/// First expansion digit of `x`: `⌊βx + α⌋ ∈ {0, …, ℓ}`.
pub fn digit(p: &Params, x: &Rational) -> Result<u32> {
    check_domain(x)?;
    let d = rat_floor(&(p.beta() * x + p.alpha()));
    Ok(d.to_u32().expect("digit bounded by the alphabet top"))
}

/// One application of the map: returns the digit and `T(x) = βx + α − digit`.
pub fn step(p: &Params, x: &Rational) -> Result<(u32, Rational)> {
    check_domain(x)?;
    let z = p.beta() * x + p.alpha();
    let d = rat_floor(&z);
    let next = z - Rational::from_integer(d.clone());
    Ok((d.to_u32().expect("digit bounded by the alphabet top"), next))
}

fn orbit_digits<F>(n: usize, state_cap: usize, start: Rational, advance: F) -> Result<SymbolSeq>
where
    F: Fn(&Rational) -> (u32, Rational),
{
    let mut digits: Vec<u32> = Vec::with_capacity(n);
    let mut seen: BTreeMap<Rational, usize> = BTreeMap::new();
    let mut state = start;
    for k in 0..n {
        if let Some(&i) = seen.get(&state) {
            // Exact repeat: digits from position i recur forever.
            let period = digits[i..].to_vec();
            digits.truncate(i);
            return SymbolSeq::eventually_periodic(digits, period);
        }
        if seen.len() < state_cap {
            seen.insert(state.clone(), k);
        }
        let (d, next) = advance(&state);
        digits.push(d);
        state = next;
    }
    Ok(SymbolSeq::finite(digits))
}

/// First `n` digits of the coding of `x`, with exact periodicity detection:
/// when the rational orbit revisits a state, the result is the exact
/// eventually periodic itinerary instead of a bare prefix.
pub fn itinerary(p: &Params, x: &Rational, n: usize) -> Result<SymbolSeq> {
    itinerary_capped(p, x, n, DEFAULT_STATE_CAP)
}

/// As [`itinerary`] with an explicit cap on remembered states.
pub fn itinerary_capped(
    p: &Params,
    x: &Rational,
    n: usize,
    state_cap: usize,
) -> Result<SymbolSeq> {
    check_domain(x)?;
    orbit_digits(n, state_cap, x.clone(), |s| {
        let z = p.beta() * s + p.alpha();
        let d = rat_floor(&z);
        let next = &z - Rational::from_integer(d.clone());
        (d.to_u32().expect("digit bounded by the alphabet top"), next)
    })
}

/// The critical itinerary of the left endpoint: `itinerary(p, 0, n)`. Its
/// first digit is always `0` because `⌊α⌋ = 0`.
pub fn zero_critical(p: &Params, n: usize) -> Result<SymbolSeq> {
    itinerary(p, &Rational::zero(), n)
}

/// The left-limit critical itinerary of the right endpoint, via the virtual
/// orbit on `(0, 1]`: starting from `y = 1`, each step takes the digit
/// `d = ⌈βy + α⌉ − 1` and the new state `βy + α − d`.
///
/// The ceiling rule agrees with `⌊βy + α⌋` whenever `βy + α` is not an
/// integer and otherwise assigns the digit of points just below `y`, which is
/// exactly the left-limit convention; the state provably stays in `(0, 1]`.
pub fn left_limit_critical(p: &Params, n: usize) -> Result<SymbolSeq> {
    left_limit_critical_capped(p, n, DEFAULT_STATE_CAP)
}

/// As [`left_limit_critical`] with an explicit cap on remembered states.
pub fn left_limit_critical_capped(p: &Params, n: usize, state_cap: usize) -> Result<SymbolSeq> {
    orbit_digits(n, state_cap, Rational::one(), |y| {
        let z = p.beta() * y + p.alpha();
        let d = rat_ceil(&z) - BigInt::one();
        let next = &z - Rational::from_integer(d.clone());
        debug_assert!(next.is_positive() && next <= Rational::one());
        (d.to_u32().expect("digit bounded by the alphabet top"), next)
    })
}

/// Partial sum `S_n = Σ_{k≤n} (e_k − α) β^{−k}` of the expansion identity;
/// for the true digits of `x` the remainder satisfies
/// `x − S_n = T^n(x) / β^n ∈ [0, β^{−n})`.
pub fn expansion_partial_sum(p: &Params, digits: &[u32]) -> Rational {
    let mut acc = Rational::zero();
    let mut pow = Rational::one();
    for &d in digits {
        pow *= p.beta();
        acc += (Rational::from_integer(BigInt::from(d)) - p.alpha()) / &pow;
    }
    acc
}

/// Exact remainder identity data: given `x` and `n`, returns
/// `(S_n, x − S_n, T^n(x), β^{−n})` so callers can assert
/// `x − S_n = T^n(x)/β^n` and the two-sided remainder bound exactly.
pub fn expansion_remainder(p: &Params, x: &Rational, n: usize) -> Result<(Rational, Rational, Rational, Rational)> {
    check_domain(x)?;
    let mut digits = Vec::with_capacity(n);
    let mut state = x.clone();
    for _ in 0..n {
        let (d, next) = step(p, &state)?;
        digits.push(d);
        state = next;
    }
    let s_n = expansion_partial_sum(p, &digits);
    let beta_inv_n = Rational::one() / rat_pow(p.beta(), n);
    Ok((s_n.clone(), x - s_n, state, beta_inv_n))
}
