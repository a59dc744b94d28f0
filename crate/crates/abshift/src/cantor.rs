//! Finite-level approximations of self-similar Cantor sets, exact thickness
//! in the bridge/gap (Palis–Takens) convention, the Newhouse dimension bound,
//! interleaving and thickness-product tests, and branch-and-prune refinement
//! of the intersection of two such sets.
//!
//! The generating system is a finite family of contractions
//! `f_j(x) = (x + j)/β` for a contiguous digit range `j ∈ {lo, …, hi}`, whose
//! attractor is an affine image of the value set of digit strings over that
//! range. An optional affine post-map carries the attractor onto translated
//! and scaled copies (the parameter-space sets live at `(β−1)/β · Λ + shift`).

use crate::error::{Error, Result};
use crate::numeric::{rat_int, serde_rational, Interval, IntervalUnion, Rational};
use crate::par::{flat_map_vec, map_vec};
use crate::real::{ln_bounds, RealBound, DEFAULT_BITS};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Default bound on the number of live intervals a refinement may produce.
pub const DEFAULT_INTERVAL_CAP: usize = 1_000_000;

/// Number of subtree roots to accumulate before fanning out in parallel.
const PAR_FANOUT: usize = 64;

/// An iterated function system `x ↦ (x + j)/β` over a contiguous digit range,
/// with an affine post-map applied to all values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IfsSpec {
    #[serde(with = "serde_rational")]
    beta: Rational,
    digit_lo: u32,
    digit_hi: u32,
    #[serde(with = "serde_rational")]
    scale: Rational,
    #[serde(with = "serde_rational")]
    offset: Rational,
}

impl IfsSpec {
    /// A system with identity post-map. Requires at least two branches and
    /// `β > branch count`, which makes sibling cylinders pairwise disjoint
    /// with nonempty gaps.
    pub fn new(beta: Rational, digit_lo: u32, digit_hi: u32) -> Result<Self> {
        if digit_hi <= digit_lo {
            return Err(Error::InvalidParams(format!(
                "need at least two branches, got digits {digit_lo}..={digit_hi}"
            )));
        }
        let m = digit_hi - digit_lo + 1;
        if beta <= rat_int(m as i64) {
            return Err(Error::InvalidParams(format!(
                "contraction base {beta} must exceed the branch count {m}"
            )));
        }
        Ok(IfsSpec {
            beta,
            digit_lo,
            digit_hi,
            scale: Rational::one(),
            offset: Rational::zero(),
        })
    }

    /// Replaces the affine post-map `x ↦ scale·x + offset` (scale ≠ 0).
    pub fn with_affine(mut self, scale: Rational, offset: Rational) -> Result<Self> {
        if scale.is_zero() {
            return Err(Error::InvalidParams("affine scale must be nonzero".into()));
        }
        self.scale = scale;
        self.offset = offset;
        Ok(self)
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    pub fn digit_lo(&self) -> u32 {
        self.digit_lo
    }

    pub fn digit_hi(&self) -> u32 {
        self.digit_hi
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn branch_count(&self) -> usize {
        (self.digit_hi - self.digit_lo + 1) as usize
    }

    /// Attractor hull before the post-map: all-min and all-max digit strings
    /// evaluate to the geometric sums `lo/(β−1)` and `hi/(β−1)`.
    fn base_hull(&self) -> Interval {
        let denom = &self.beta - Rational::one();
        Interval::new(
            rat_int(self.digit_lo as i64) / &denom,
            rat_int(self.digit_hi as i64) / &denom,
        )
        .expect("lo ≤ hi")
    }

    /// Convex hull of the attractor (post-map applied).
    pub fn hull(&self) -> Interval {
        self.base_hull().affine(&self.scale, &self.offset)
    }
}

/// One affine node `x ↦ s·x + c` in the composition tree.
#[derive(Clone)]
struct Node {
    s: Rational,
    c: Rational,
}

impl Node {
    fn child(&self, beta: &Rational, j: u32) -> Node {
        let s = &self.s / beta;
        let c = &s * rat_int(j as i64) + &self.c;
        Node { s, c }
    }

    fn interval(&self, base_hull: &Interval) -> Interval {
        base_hull.affine(&self.s, &self.c)
    }
}

fn checked_branch_power(m: usize, n: usize, cap: usize) -> Result<()> {
    let mut total: u128 = 1;
    for _ in 0..n {
        total = total.saturating_mul(m as u128);
        if total > cap as u128 {
            return Err(Error::CapExceeded { cap });
        }
    }
    Ok(())
}

/// The level-`n` cylinder cover of the attractor: all `mⁿ` compositions
/// applied to the hull, post-map included, as a canonical union.
pub fn lambda_approx(spec: &IfsSpec, n: usize) -> Result<IntervalUnion> {
    lambda_approx_capped(spec, n, DEFAULT_INTERVAL_CAP, true)
}

/// Sequential variant of [`lambda_approx`].
pub fn lambda_approx_seq(spec: &IfsSpec, n: usize) -> Result<IntervalUnion> {
    lambda_approx_capped(spec, n, DEFAULT_INTERVAL_CAP, false)
}

/// [`lambda_approx`] with an explicit interval cap and parallelism switch.
pub fn lambda_approx_capped(
    spec: &IfsSpec,
    n: usize,
    cap: usize,
    parallel: bool,
) -> Result<IntervalUnion> {
    checked_branch_power(spec.branch_count(), n, cap)?;
    let base_hull = spec.base_hull();
    let root = Node { s: spec.scale.clone(), c: spec.offset.clone() };

    // Widen sequentially until there are enough subtree roots to fan out.
    let mut nodes = vec![root];
    let mut remaining = n;
    while remaining > 0 && nodes.len() < PAR_FANOUT {
        nodes = expand_level(&nodes, spec);
        remaining -= 1;
    }
    let depth = remaining;
    let intervals: Vec<Interval> = flat_map_vec(nodes, parallel, |node| {
        let mut sub = vec![node];
        for _ in 0..depth {
            sub = expand_level(&sub, spec);
        }
        sub.into_iter()
            .map(|nd| nd.interval(&base_hull))
            .collect::<Vec<_>>()
    });
    Ok(IntervalUnion::from_intervals(intervals))
}

fn expand_level(nodes: &[Node], spec: &IfsSpec) -> Vec<Node> {
    let mut out = Vec::with_capacity(nodes.len() * spec.branch_count());
    for node in nodes {
        for j in spec.digit_lo..=spec.digit_hi {
            out.push(node.child(&spec.beta, j));
        }
    }
    out
}

/// Bounded complementary components of `u` (reported with closed endpoints),
/// after validating `u ⊆ hull`. Hull-edge slack belongs to the unbounded
/// components and is never a gap.
pub fn gaps(u: &IntervalUnion, hull: &Interval) -> Result<Vec<Interval>> {
    if let Some(h) = u.hull() {
        if !hull.contains_interval(&h) {
            return Err(Error::InvalidParams(format!(
                "union hull {h} is not contained in {hull}"
            )));
        }
    }
    Ok(u.gaps())
}

/// Exact thickness data: the minimizing bounded gap, its bridge, and their
/// length ratio.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThicknessReport {
    #[serde(with = "serde_rational")]
    pub tau: Rational,
    pub minimizing_gap: Interval,
    pub minimizing_bridge: Interval,
    /// Refinement level the union came from, when produced by
    /// [`thickness_at_level`]; absent for directly supplied unions.
    pub level: Option<usize>,
}

/// Thickness of a canonical union with at least two parts, computed from the
/// definition: at each bounded-gap endpoint the bridge is the maximal
/// interval on the far side of the gap that contains no point of a gap at
/// least as long as the given one (the scan stops at such a gap or at the
/// hull boundary), and the thickness is the minimum of |bridge|/|gap| over
/// all gap endpoints — an exact rational.
pub fn thickness(u: &IntervalUnion) -> Result<ThicknessReport> {
    let parts = u.parts();
    if parts.len() < 2 {
        return Err(Error::InvalidParams(
            "thickness needs a union with at least two parts".into(),
        ));
    }
    let gap_list: Vec<Interval> = u.gaps();
    let gap_lens: Vec<Rational> = gap_list.iter().map(|g| g.length()).collect();

    let mut best: Option<(Rational, Interval, Interval)> = None;
    for (i, g) in gap_list.iter().enumerate() {
        let glen = &gap_lens[i];
        // Left endpoint of the gap: bridge extends leftward from parts[i].
        let mut start = i;
        while start > 0 && gap_lens[start - 1] < *glen {
            start -= 1;
        }
        let left_bridge = Interval::new(parts[start].lo.clone(), parts[i].hi.clone())
            .expect("parts are ordered");
        // Right endpoint of the gap: bridge extends rightward from parts[i+1].
        let mut end = i + 1;
        while end + 1 < parts.len() && gap_lens[end] < *glen {
            end += 1;
        }
        let right_bridge = Interval::new(parts[i + 1].lo.clone(), parts[end].hi.clone())
            .expect("parts are ordered");

        for bridge in [left_bridge, right_bridge] {
            let ratio = bridge.length() / glen;
            let better = match &best {
                None => true,
                Some((tau, _, _)) => ratio < *tau,
            };
            if better {
                best = Some((ratio, g.clone(), bridge));
            }
        }
    }
    let (tau, minimizing_gap, minimizing_bridge) = best.expect("≥ 2 parts give ≥ 1 gap");
    Ok(ThicknessReport { tau, minimizing_gap, minimizing_bridge, level: None })
}

/// Thickness of the level-`n` cover of `spec`, tagging the report with the
/// level.
pub fn thickness_at_level(spec: &IfsSpec, n: usize) -> Result<ThicknessReport> {
    let union = lambda_approx(spec, n)?;
    let mut report = thickness(&union)?;
    report.level = Some(n);
    Ok(report)
}

/// The closed-form thickness expression `(⌊β⌋−1)/(1−⌊β⌋+β)` used in the
/// source analysis of these attractors, evaluated verbatim for comparison
/// against the definitional scan of [`thickness`]. The two disagree on some
/// inputs (at β = 3 the scan gives 1, this expression 2); the scan is
/// authoritative and callers are expected to report both. The digit-set
/// cardinality witness `ell` only feeds the chained lower bound
/// `(ℓ−2)/2` sanity check.
pub fn paper_thickness_formula(beta: &Rational, ell: u32) -> Result<Rational> {
    if *beta <= Rational::one() {
        return Err(Error::InvalidParams(format!(
            "contraction base must exceed 1, got {beta}"
        )));
    }
    let floor = Rational::from(crate::numeric::rat_floor(beta));
    let value = (&floor - Rational::one()) / (Rational::one() - &floor + beta);
    // Chain endpoint (ℓ−2)/2: holds whenever ⌊β⌋ ≥ ℓ−1 and the numerator is
    // positive (the fractional part of β keeps the denominator below 2).
    if ell >= 2 && floor >= rat_int(ell as i64 - 1) && floor > Rational::one() {
        debug_assert!(value >= rat(ell as i64 - 2, 2));
    }
    Ok(value)
}

use crate::numeric::rat;

/// Dimension lower bound `log 2 / log(2 + 1/τ)` for a Cantor set of
/// thickness `τ > 0`, as a directed-rounding enclosure (the `lo` end is a
/// certified lower bound).
pub fn newhouse_bound(tau: &Rational) -> Result<RealBound> {
    newhouse_bound_bits(tau, DEFAULT_BITS)
}

/// [`newhouse_bound`] at explicit working precision.
pub fn newhouse_bound_bits(tau: &Rational, bits: u32) -> Result<RealBound> {
    if *tau <= Rational::zero() {
        return Err(Error::InvalidParams(format!(
            "thickness must be positive, got {tau}"
        )));
    }
    let ln2 = ln_bounds(&rat_int(2), bits)?;
    let arg = rat_int(2) + tau.recip();
    let ln_arg = ln_bounds(&arg, bits)?;
    ln2.div_pos(&ln_arg)
}

/// Two unions are interleaved when neither lies inside the closure of a
/// single complementary component (bounded gap or unbounded side) of the
/// other — the positional hypothesis of the thickness intersection lemma.
pub fn interleaved(a: &IntervalUnion, b: &IntervalUnion) -> Result<bool> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidParams(
            "interleaving is defined for nonempty unions".into(),
        ));
    }
    Ok(!inside_complement_component(b, a) && !inside_complement_component(a, b))
}

/// Is `y` contained in the closure of one complementary component of `x`?
fn inside_complement_component(y: &IntervalUnion, x: &IntervalUnion) -> bool {
    let yh = y.hull().expect("nonempty");
    let xp = x.parts();
    if yh.hi <= xp[0].lo || yh.lo >= xp[xp.len() - 1].hi {
        return true; // unbounded side
    }
    x.gaps().iter().any(|g| g.contains_interval(&yh))
}

/// Exact thickness-product test `τ_a · τ_b > 1`: combined with
/// interleaving, it forces two Cantor sets to intersect.
pub fn gap_lemma_test(tau_a: &Rational, tau_b: &Rational) -> bool {
    tau_a * tau_b > Rational::one()
}

/// One surviving cylinder pair of a refinement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefinedPair {
    pub word_a: Vec<u32>,
    pub word_b: Vec<u32>,
    pub interval_a: Interval,
    pub interval_b: Interval,
}

/// Result of branch-and-prune intersection refinement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refinement {
    /// Union of the pairwise cylinder intersections at the final depth — an
    /// enclosure of the attractor intersection.
    pub union: IntervalUnion,
    /// Surviving pairs in lexicographic `(word_a, word_b)` order.
    pub pairs: Vec<RefinedPair>,
    pub depth: usize,
}

/// Refines the intersection of two attractors level by level to `depth`,
/// keeping only cylinder pairs whose intervals overlap (children of
/// non-overlapping pairs cannot overlap, so pruning is lossless).
pub fn intersect_refine(a: &IfsSpec, b: &IfsSpec, depth: usize) -> Result<Refinement> {
    intersect_refine_capped(a, b, depth, DEFAULT_INTERVAL_CAP, true)
}

/// Sequential variant of [`intersect_refine`].
pub fn intersect_refine_seq(a: &IfsSpec, b: &IfsSpec, depth: usize) -> Result<Refinement> {
    intersect_refine_capped(a, b, depth, DEFAULT_INTERVAL_CAP, false)
}

struct PairNode {
    word_a: Vec<u32>,
    word_b: Vec<u32>,
    node_a: Node,
    node_b: Node,
}

/// [`intersect_refine`] with an explicit live-pair cap and parallelism switch.
pub fn intersect_refine_capped(
    a: &IfsSpec,
    b: &IfsSpec,
    depth: usize,
    cap: usize,
    parallel: bool,
) -> Result<Refinement> {
    if depth == 0 {
        return Err(Error::InvalidParams("depth must be at least 1".into()));
    }
    let hull_a = a.base_hull();
    let hull_b = b.base_hull();
    let root = PairNode {
        word_a: vec![],
        word_b: vec![],
        node_a: Node { s: a.scale.clone(), c: a.offset.clone() },
        node_b: Node { s: b.scale.clone(), c: b.offset.clone() },
    };
    let mut live = if root.node_a.interval(&hull_a).overlaps(&root.node_b.interval(&hull_b)) {
        vec![root]
    } else {
        vec![]
    };
    for _ in 0..depth {
        live = flat_map_vec(live, parallel, |pair| {
            // Hoist the child construction: m_a + m_b interval builds per
            // pair, then cheap comparisons over the m_a · m_b grid.
            let kids_a: Vec<(u32, Node, Interval)> = (a.digit_lo..=a.digit_hi)
                .map(|ja| {
                    let nd = pair.node_a.child(&a.beta, ja);
                    let iv = nd.interval(&hull_a);
                    (ja, nd, iv)
                })
                .collect();
            let kids_b: Vec<(u32, Node, Interval)> = (b.digit_lo..=b.digit_hi)
                .map(|jb| {
                    let nd = pair.node_b.child(&b.beta, jb);
                    let iv = nd.interval(&hull_b);
                    (jb, nd, iv)
                })
                .collect();
            let mut children = Vec::new();
            for (ja, na, ia) in &kids_a {
                for (jb, nb, ib) in &kids_b {
                    if ia.overlaps(ib) {
                        let mut wa = pair.word_a.clone();
                        wa.push(*ja);
                        let mut wb = pair.word_b.clone();
                        wb.push(*jb);
                        children.push(PairNode {
                            word_a: wa,
                            word_b: wb,
                            node_a: na.clone(),
                            node_b: nb.clone(),
                        });
                    }
                }
            }
            children
        });
        if live.len() > cap {
            return Err(Error::CapExceeded { cap });
        }
    }
    let results = map_vec(live, parallel, |pair| {
        let interval_a = pair.node_a.interval(&hull_a);
        let interval_b = pair.node_b.interval(&hull_b);
        let overlap = interval_a
            .intersect(&interval_b)
            .expect("surviving pairs overlap");
        (
            RefinedPair {
                word_a: pair.word_a,
                word_b: pair.word_b,
                interval_a,
                interval_b,
            },
            overlap,
        )
    });
    let mut pairs = Vec::with_capacity(results.len());
    let mut overlaps = Vec::with_capacity(results.len());
    for (p, o) in results {
        pairs.push(p);
        overlaps.push(o);
    }
    Ok(Refinement {
        union: IntervalUnion::from_intervals(overlaps),
        pairs,
        depth,
    })
}
