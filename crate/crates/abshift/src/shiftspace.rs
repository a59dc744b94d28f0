//! Lexicographic machinery for the symbolic spaces generated by the interval
//! maps: total order on digit sequences, admissibility of finite words against
//! the two critical itineraries, synchronization sets of the critical pair,
//! and the resulting specification-property check.
//!
//! The synchronization set of `u` (written `K(u)` in reports) is the set of
//! lengths `n` for which the first `n` digits of `v` reappear inside the
//! shifted sequence `u`; symmetrically for `K(v)`. Finiteness of both sets is
//! the specification criterion for slopes above 2. Finite window searches can
//! only produce evidence, so every report separates **certified** verdicts
//! (exact, valid for all `n` and `j`, derived from eventually periodic
//! structure or first-digit alphabet certificates) from depth-bounded
//! **found** lists.

use crate::dynamics::{itinerary, left_limit_critical, Params, SymbolSeq};
use crate::error::{Error, Result};
use crate::numeric::{lcm_len, rat_int};
use crate::par::map_vec;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

/// A single synchronization hit: the window equation holds at length `n`
/// with shift offset `j ≥ 1` (the smallest such offset).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KMatch {
    pub n: usize,
    pub j: usize,
}

/// Exactness status of a synchronization-set computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum KVerdict {
    /// The set is empty — proved for all `n`, `j`, not just the window.
    EmptyCertified,
    /// The set is exactly the `found` initial segment — proved for all `n`, `j`.
    FiniteCertified,
    /// Only the depth-bounded window was searched.
    Unknown,
    /// The set provably contains every length (a full shifted copy occurs).
    InfiniteCertified,
}

/// Result of a synchronization-set computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KReport {
    /// Sorted hits with their smallest witnessing offsets, up to the window.
    pub found: Vec<KMatch>,
    /// The window bound on `n` that was searched.
    #[serde(rename = "depth")]
    pub depth_checked: usize,
    /// Certified/evidence status of the result.
    #[serde(rename = "verdict")]
    pub exact_verdict: KVerdict,
}

impl KReport {
    pub fn is_certified_finite(&self) -> bool {
        matches!(
            self.exact_verdict,
            KVerdict::EmptyCertified | KVerdict::FiniteCertified
        )
    }

    pub fn max_found(&self) -> usize {
        self.found.last().map(|m| m.n).unwrap_or(0)
    }
}

/// Exact lexicographic comparison of two digit sequences.
///
/// For two eventually periodic inputs the order is decided within
/// `max(preperiods) + lcm(periods)` symbols (agreement through that window
/// forces equality forever). Finite prefixes are compared as far as their
/// digits go; if they tie through the shorter one's full length and carry no
/// tail information, the order is genuinely undetermined and an
/// [`Error::Incomparable`] is returned (equal-length identical prefixes
/// compare equal).
pub fn lex_cmp(a: &SymbolSeq, b: &SymbolSeq) -> Result<Ordering> {
    let window = match (a.available(), b.available()) {
        (None, None) => {
            let pre = a.preperiod().len().max(b.preperiod().len());
            pre + lcm_len(a.period().len(), b.period().len())
        }
        (Some(la), None) => la,
        (None, Some(lb)) => lb,
        (Some(la), Some(lb)) => la.min(lb),
    };
    for i in 0..window {
        let da = a.digit_at(i).expect("within available window");
        let db = b.digit_at(i).expect("within available window");
        match da.cmp(&db) {
            Ordering::Equal => continue,
            other => return Ok(other),
        }
    }
    match (a.available(), b.available()) {
        (None, None) => Ok(Ordering::Equal),
        (Some(la), Some(lb)) if la == lb => Ok(Ordering::Equal),
        _ => Err(Error::Incomparable),
    }
}

/// Verdict of an admissibility check of a finite word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Admissibility {
    Yes,
    No,
    Unknown,
}

/// Checks the two-sided admissibility inequalities for every shift of `w`
/// against the critical prefixes of length `depth`.
///
/// A shift that differs from a critical prefix inside the comparison window
/// decides that side strictly; a shift that ties through the **word's** end is
/// extendable along the critical sequence itself and is not a violation. The
/// check returns `No` on any strict violation, `Unknown` when some comparison
/// was cut short by `depth` (the word outruns the computed critical prefix
/// while tying), and `Yes` otherwise.
pub fn admissible(p: &Params, w: &[u32], depth: usize) -> Result<Admissibility> {
    if depth == 0 {
        return Err(Error::InvalidParams("depth must be at least 1".into()));
    }
    if let Some(&d) = w.iter().find(|&&d| d > p.ell()) {
        return Err(Error::InvalidParams(format!(
            "digit {d} outside the alphabet 0..={}",
            p.ell()
        )));
    }
    let u = itinerary(p, &rat_int(0), depth)?;
    let v = left_limit_critical(p, depth)?;
    let u_digits = u.digits(depth)?;
    let v_digits = v.digits(depth)?;

    let mut any_undecided = false;
    for s in 0..w.len() {
        let word = &w[s..];
        // Below-side: word must not be lexicographically below u.
        match prefix_cmp(word, &u_digits) {
            PrefixOrder::Less => return Ok(Admissibility::No),
            PrefixOrder::TieToDepth => any_undecided = true,
            _ => {}
        }
        // Above-side: word must not be lexicographically above v.
        match prefix_cmp(word, &v_digits) {
            PrefixOrder::Greater => return Ok(Admissibility::No),
            PrefixOrder::TieToDepth => any_undecided = true,
            _ => {}
        }
    }
    if any_undecided {
        Ok(Admissibility::Unknown)
    } else {
        Ok(Admissibility::Yes)
    }
}

enum PrefixOrder {
    Less,
    Greater,
    /// Word and critical prefix agree through the word's full length.
    TieToWordEnd,
    /// Agreement through the critical prefix; the word continues beyond it.
    TieToDepth,
}

fn prefix_cmp(word: &[u32], critical: &[u32]) -> PrefixOrder {
    let m = word.len().min(critical.len());
    for i in 0..m {
        match word[i].cmp(&critical[i]) {
            Ordering::Less => return PrefixOrder::Less,
            Ordering::Greater => return PrefixOrder::Greater,
            Ordering::Equal => {}
        }
    }
    if word.len() <= critical.len() {
        PrefixOrder::TieToWordEnd
    } else {
        PrefixOrder::TieToDepth
    }
}

/// Length of the common prefix of `pattern` and `host` shifted by `j`,
/// capped at `n_max`; `None` means they agree through the entire cap.
fn bounded_lcp(pattern: &[u32], host: &[u32], j: usize, n_max: usize) -> usize {
    let mut l = 0usize;
    while l < n_max && pattern[l] == host[j + l] {
        l += 1;
    }
    l
}

/// Exact common-prefix length of `pattern` (a full eventually periodic
/// sequence) against `host` shifted by `j`; `None` encodes an infinite match.
fn exact_lcp(pattern: &SymbolSeq, host: &SymbolSeq, j: usize) -> Option<usize> {
    let pre = pattern
        .preperiod()
        .len()
        .max(host.preperiod().len().saturating_sub(j));
    let bound = pre + lcm_len(pattern.period().len(), host.period().len());
    // Both tails are periodic with period dividing the lcm window; agreement
    // through preperiods plus one full joint period forces equality forever.
    (0..bound).find(|&i| pattern.digit_at(i) != host.digit_at(j + i))
}

/// One side of the synchronization computation: lengths `n` whose
/// `pattern`-prefix of length `n` occurs in `host` at some shift `j ≥ 1`.
fn k_side(
    pattern: &SymbolSeq,
    host: &SymbolSeq,
    n_max: usize,
    j_max: usize,
    parallel: bool,
) -> Result<KReport> {
    if let Some(have) = host.available() {
        let needed = n_max + j_max;
        if have < needed {
            return Err(Error::InsufficientDigits { needed, have });
        }
    }
    if let Some(have) = pattern.available() {
        if have < n_max {
            return Err(Error::InsufficientDigits { needed: n_max, have });
        }
    }
    let host_digits = host.digits(n_max + j_max)?;
    let pattern_digits = pattern.digits(n_max)?;

    // Depth-bounded window search, parallel over shift offsets.
    let lcps: Vec<usize> = map_vec((1..=j_max).collect::<Vec<_>>(), parallel, |j| {
        bounded_lcp(&pattern_digits, &host_digits, j, n_max)
    });
    let mut min_j: Vec<Option<usize>> = vec![None; n_max + 1];
    for (idx, &l) in lcps.iter().enumerate() {
        let j = idx + 1;
        for slot in &mut min_j[1..=l] {
            if slot.is_none() {
                *slot = Some(j);
            }
        }
    }
    let found: Vec<KMatch> = (1..=n_max)
        .filter_map(|n| min_j[n].map(|j| KMatch { n, j }))
        .collect();

    // Exact decision for a fully periodic pair: shifts of `host` by
    // j and j + period agree for j past the preperiod, so offsets
    // 1..=preperiod+period represent every shift class (including each
    // class's smallest offset). The maximum match length over those
    // representatives is the exact supremum over all offsets.
    if pattern.is_eventually_periodic() && host.is_eventually_periodic() {
        let j_reps = host.preperiod().len() + host.period().len();
        let mut sup: usize = 0;
        let mut infinite = false;
        for j in 1..=j_reps {
            match exact_lcp(pattern, host, j) {
                None => {
                    infinite = true;
                    break;
                }
                Some(l) => sup = sup.max(l),
            }
        }
        let verdict = if infinite {
            KVerdict::InfiniteCertified
        } else if sup == 0 {
            KVerdict::EmptyCertified
        } else {
            KVerdict::FiniteCertified
        };
        if !infinite {
            debug_assert_eq!(found.last().map(|m| m.n).unwrap_or(0).min(n_max), sup.min(n_max));
        }
        return Ok(KReport { found, depth_checked: n_max, exact_verdict: verdict });
    }

    // First-digit alphabet certificate: every window match at length ≥ 1
    // starts with the pattern's first digit occurring inside the shifted
    // host, so its certified absence proves emptiness even when the pattern
    // itself is only a finite prefix.
    if let (Some(tail), Some(first)) = (host.tail_symbols(), pattern.first()) {
        if !tail.contains(&first) {
            debug_assert!(found.is_empty());
            return Ok(KReport {
                found,
                depth_checked: n_max,
                exact_verdict: KVerdict::EmptyCertified,
            });
        }
    }

    Ok(KReport { found, depth_checked: n_max, exact_verdict: KVerdict::Unknown })
}

/// Computes both synchronization reports for the critical pair `(u, v)`:
/// the first describes `K(u)` (prefixes of `v` occurring in shifted `u`),
/// the second `K(v)`. Hits are searched over `1 ≤ n ≤ n_max`,
/// `1 ≤ j ≤ j_max`; eventually periodic inputs additionally receive an exact
/// verdict valid for **all** `n` and `j`.
pub fn k_sets(
    u: &SymbolSeq,
    v: &SymbolSeq,
    n_max: usize,
    j_max: usize,
) -> Result<(KReport, KReport)> {
    k_sets_impl(u, v, n_max, j_max, true)
}

/// Sequential variant of [`k_sets`] (for benchmarking and reproduction).
pub fn k_sets_seq(
    u: &SymbolSeq,
    v: &SymbolSeq,
    n_max: usize,
    j_max: usize,
) -> Result<(KReport, KReport)> {
    k_sets_impl(u, v, n_max, j_max, false)
}

fn k_sets_impl(
    u: &SymbolSeq,
    v: &SymbolSeq,
    n_max: usize,
    j_max: usize,
    parallel: bool,
) -> Result<(KReport, KReport)> {
    if n_max == 0 || j_max == 0 {
        return Err(Error::InvalidParams(
            "window bounds must be at least 1".into(),
        ));
    }
    let k_u = k_side(v, u, n_max, j_max, parallel)?;
    let k_v = k_side(u, v, n_max, j_max, parallel)?;
    Ok((k_u, k_v))
}

/// First-digit emptiness certificates for the two synchronization sets:
/// `K(u)` is empty when `v`'s first digit never occurs in the shifted `u`
/// (decidable when `u` is eventually periodic), and symmetrically for `K(v)`.
/// Returns `(K(u) = ∅ certified, K(v) = ∅ certified)`; `false` means
/// "not certified by this test", never "nonempty".
pub fn alphabet_certificate(u: &SymbolSeq, v: &SymbolSeq) -> (bool, bool) {
    let ku_empty = match (u.tail_symbols(), v.first()) {
        (Some(tail), Some(first)) => !tail.contains(&first),
        _ => false,
    };
    let kv_empty = match (v.tail_symbols(), u.first()) {
        (Some(tail), Some(first)) => !tail.contains(&first),
        _ => false,
    };
    (ku_empty, kv_empty)
}

/// Outcome of a specification check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SpecVerdict {
    /// Both synchronization sets certified finite: specification holds
    /// (for slopes above 2, by the finiteness criterion).
    #[serde(rename = "SPEC_CERTIFIED")]
    SpecCertified,
    /// No certificate, but all hits lie in a stabilized initial segment well
    /// inside the searched window.
    #[serde(rename = "SPEC_LIKELY")]
    SpecLikely { depth: usize },
    /// A synchronization set is certified infinite; hits grow through `n`.
    /// Reported as evidence against specification (the criterion's
    /// obstruction), with `n` the largest hit in the window.
    #[serde(rename = "NOT_SPEC_AT")]
    NotSpecAt { n: usize },
    /// The window data neither certifies nor clearly stabilizes; `growing`
    /// flags hits reaching the window boundary.
    #[serde(rename = "UNKNOWN")]
    Unknown { growing: bool },
}

impl fmt::Display for SpecVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecVerdict::SpecCertified => write!(f, "SPEC_CERTIFIED"),
            SpecVerdict::SpecLikely { depth } => write!(f, "SPEC_LIKELY(depth={depth})"),
            SpecVerdict::NotSpecAt { n } => write!(f, "NOT_SPEC_AT(n={n})"),
            SpecVerdict::Unknown { growing } => write!(f, "UNKNOWN(growing={growing})"),
        }
    }
}

/// Full result of a specification check at one parameter pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpecCheckReport {
    pub verdict: SpecVerdict,
    pub u: SymbolSeq,
    pub v: SymbolSeq,
    pub k_u: KReport,
    pub k_v: KReport,
}

/// Specification check for the shift of `p`, searching synchronization
/// windows up to `depth` (with offsets up to `4·depth`).
///
/// The critical itineraries are computed to `5·depth` digits with exact
/// periodicity detection, so certified verdicts appear whenever the orbits
/// close up or a first-digit certificate applies. In `certified_only` mode a
/// slope `β ≤ 2` is rejected, because the finiteness criterion this check
/// relies on is a theorem only for `β > 2`; without the flag the same
/// computation runs and the verdict is reported as evidence.
pub fn spec_check(p: &Params, depth: usize, certified_only: bool) -> Result<SpecCheckReport> {
    if depth == 0 {
        return Err(Error::InvalidParams("depth must be at least 1".into()));
    }
    if certified_only && *p.beta() <= rat_int(2) {
        return Err(Error::UnsupportedRegime(
            "certified specification checking requires slope > 2".into(),
        ));
    }
    let n_max = depth;
    let j_max = 4 * depth;
    let u = itinerary(p, &rat_int(0), n_max + j_max)?;
    let v = left_limit_critical(p, n_max + j_max)?;
    let (k_u, k_v) = k_sets(&u, &v, n_max, j_max)?;
    let verdict = classify_k_reports(&k_u, &k_v, depth);
    Ok(SpecCheckReport { verdict, u, v, k_u, k_v })
}

/// Turns a pair of synchronization-set reports into a verdict: certified
/// finiteness on both sides certifies the specification property, a
/// certified-infinite side refutes it, and otherwise the largest
/// uncertified prefix length found decides between "likely" (hits stop
/// well short of the window), "unknown, growing" (hits reach the window
/// edge) and plain "unknown".
pub fn classify_k_reports(k_u: &KReport, k_v: &KReport, depth: usize) -> SpecVerdict {
    if k_u.is_certified_finite() && k_v.is_certified_finite() {
        SpecVerdict::SpecCertified
    } else if k_u.exact_verdict == KVerdict::InfiniteCertified
        || k_v.exact_verdict == KVerdict::InfiniteCertified
    {
        let n = k_u.max_found().max(k_v.max_found());
        SpecVerdict::NotSpecAt { n }
    } else {
        let worst = [k_u, k_v]
            .iter()
            .filter(|r| !r.is_certified_finite())
            .map(|r| r.max_found())
            .max()
            .unwrap_or(0);
        if worst >= depth {
            SpecVerdict::Unknown { growing: true }
        } else if worst <= depth / 2 {
            SpecVerdict::SpecLikely { depth }
        } else {
            SpecVerdict::Unknown { growing: false }
        }
    }
}
