//! Acceptance gate: nine end-to-end criteria, each printing one PASS/FAIL
//! line with its measured runtime against a pinned budget. The process
//! exits nonzero if any criterion fails. All numeric assertions are exact
//! rational comparisons or directed-rounded bounds — no floating point.

use abshift::cantor::{
    gap_lemma_test, interleaved, lambda_approx, paper_thickness_formula, thickness, IfsSpec,
};
use abshift::dynamics::{itinerary, Params, SymbolSeq};
use abshift::numeric::{rat, rat_int, IntervalUnion, Rational};
use abshift::paramlab::{
    dim_lower_bound, find_witness, lab_ifs_pair, lab_stratum, verify_witness, AlphaValue,
};
use abshift::shiftspace::{admissible, k_sets, Admissibility, KMatch, KVerdict};
use num_traits::{One, Zero};
use std::process::Command;
use std::time::Instant;

type Criterion = (&'static str, f64, fn() -> Result<String, String>);

fn main() {
    let criteria: &[Criterion] = &[
        ("expansion remainder identity", 10.0, criterion_1),
        ("itinerary admissibility", 10.0, criterion_2),
        ("synchronization-set oracle equivalence", 30.0, criterion_3),
        ("witness certification", 1.0, criterion_4),
        ("golden-mean fixture", 1.0, criterion_5),
        ("thickness level-independence", 30.0, criterion_6),
        ("dimension bound pipeline", 1.0, criterion_7),
        ("intersection nonemptiness at desk scale", 10.0, criterion_8),
        ("sweep determinism across worker counts", 120.0, criterion_9),
    ];
    let prev_hook = std::panic::take_hook();
    std::panic::set_hook(Box::new(|_| {}));
    let mut all_ok = true;
    for (idx, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run);
        let elapsed = start.elapsed().as_secs_f64();
        let line = match outcome {
            Ok(Ok(detail)) if elapsed <= *budget => format!(
                "criterion {} ({name}): PASS [{elapsed:.2}s <= {budget:.0}s] — {detail}",
                idx + 1
            ),
            Ok(Ok(detail)) => {
                all_ok = false;
                format!(
                    "criterion {} ({name}): FAIL [{elapsed:.2}s exceeds {budget:.0}s budget] — {detail}",
                    idx + 1
                )
            }
            Ok(Err(reason)) => {
                all_ok = false;
                format!("criterion {} ({name}): FAIL [{elapsed:.2}s] — {reason}", idx + 1)
            }
            Err(panic) => {
                all_ok = false;
                format!(
                    "criterion {} ({name}): FAIL [{elapsed:.2}s] — panicked: {}",
                    idx + 1,
                    panic_text(&panic)
                )
            }
        };
        println!("{line}");
    }
    std::panic::set_hook(prev_hook);
    if !all_ok {
        std::process::exit(1);
    }
}

fn panic_text(p: &(dyn std::any::Any + Send)) -> String {
    p.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| p.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "opaque panic payload".into())
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn lib_err(e: abshift::error::Error) -> String {
    e.to_string()
}

/// Deterministic 64-bit generator (SplitMix64) so every run checks the
/// same samples.
struct SplitMix64(u64);

impl SplitMix64 {
    fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }

    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-enough draw in `0..n` for test sampling.
    fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

/// Random parameters in stratum `ell`: slope in `(ℓ−1, ℓ]`, translation in
/// `[0, 1)`, both with denominators small enough to keep orbits cheap.
fn sample_params(rng: &mut SplitMix64, ell: i64) -> (Rational, Rational) {
    let q = 2 + rng.below(28) as i64;
    let p = 1 + rng.below(q as u64) as i64;
    let beta = rat_int(ell - 1) + rat(p, q);
    let ad = 1 + rng.below(40) as i64;
    let an = rng.below(ad as u64) as i64;
    (rat(an, ad), beta)
}

fn sample_point(rng: &mut SplitMix64) -> Rational {
    let d = 1 + rng.below(40) as i64;
    rat(rng.below(d as u64) as i64, d)
}

/// Criterion 1 — for random parameters across strata 3..=10, the exact
/// remainder inequality `0 ≤ x − S_n < β^{−n}` holds for every prefix
/// length `n = 1..=50`.
fn criterion_1() -> Result<String, String> {
    let mut rng = SplitMix64::new(0x5EED_0001);
    let mut checked = 0usize;
    for i in 0..1000 {
        let ell = 3 + (i % 8) as i64;
        let (alpha, beta) = sample_params(&mut rng, ell);
        let x = sample_point(&mut rng);
        let params = Params::new(alpha.clone(), beta.clone()).map_err(lib_err)?;
        let digits = itinerary(&params, &x, 50)
            .and_then(|s| s.digits(50))
            .map_err(lib_err)?;
        let mut sum = Rational::zero();
        let mut pow = Rational::one();
        for (n, &d) in digits.iter().enumerate() {
            pow *= &beta;
            sum += (rat_int(i64::from(d)) - &alpha) / &pow;
            let diff = &x - &sum;
            ensure(
                diff >= Rational::zero() && diff < pow.recip(),
                format!(
                    "remainder out of [0, beta^-{}) at sample {i} (alpha={alpha}, beta={beta}, x={x})",
                    n + 1
                ),
            )?;
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} exact inequalities over 1000 random (alpha, beta, x) in strata 3..=10"
    ))
}

/// Criterion 2 — every generated itinerary is admissible for its own
/// parameters (never rejected) at window depth 100.
fn criterion_2() -> Result<String, String> {
    let mut rng = SplitMix64::new(0x5EED_0002);
    for i in 0..1000 {
        let ell = 3 + (i % 8) as i64;
        let (alpha, beta) = sample_params(&mut rng, ell);
        let x = sample_point(&mut rng);
        let params = Params::new(alpha.clone(), beta.clone()).map_err(lib_err)?;
        let word = itinerary(&params, &x, 100)
            .and_then(|s| s.digits(100))
            .map_err(lib_err)?;
        let verdict = admissible(&params, &word, 100).map_err(lib_err)?;
        ensure(
            verdict != Admissibility::No,
            format!("own itinerary rejected at sample {i} (alpha={alpha}, beta={beta}, x={x})"),
        )?;
    }
    Ok("1000 generated itineraries accepted at depth 100".into())
}

fn random_seq(rng: &mut SplitMix64) -> SymbolSeq {
    let pre_len = rng.below(5) as usize;
    let per_len = 1 + rng.below(7) as usize;
    let pre: Vec<u32> = (0..pre_len).map(|_| rng.below(6) as u32).collect();
    let per: Vec<u32> = (0..per_len).map(|_| rng.below(6) as u32).collect();
    SymbolSeq::eventually_periodic(pre, per).expect("nonempty period")
}

/// Reference quadruple loop: smallest shift `j ∈ 1..=j_max` at which the
/// length-`n` prefix of `pattern` occurs inside `host`, for each `n`.
fn naive_k_side(
    pattern: &SymbolSeq,
    host: &SymbolSeq,
    n_max: usize,
    j_max: usize,
) -> Vec<KMatch> {
    let host_digits = host.digits(n_max + j_max).unwrap();
    let pat_digits = pattern.digits(n_max).unwrap();
    let mut found = Vec::new();
    for n in 1..=n_max {
        for j in 1..=j_max {
            if host_digits[j..j + n] == pat_digits[..n] {
                found.push(KMatch { n, j });
                break;
            }
        }
    }
    found
}

/// Criterion 3 — the synchronization-set computation agrees with the
/// brute-force scan on 200 random eventually periodic pairs at
/// `n_max = j_max = 100`.
fn criterion_3() -> Result<String, String> {
    let mut rng = SplitMix64::new(0x5EED_0003);
    for i in 0..200 {
        let u = random_seq(&mut rng);
        let v = random_seq(&mut rng);
        let (k_u, k_v) = k_sets(&u, &v, 100, 100).map_err(lib_err)?;
        ensure(
            k_u.found == naive_k_side(&v, &u, 100, 100),
            format!("K(u) mismatch at pair {i}: u={u}, v={v}"),
        )?;
        ensure(
            k_v.found == naive_k_side(&u, &v, 100, 100),
            format!("K(v) mismatch at pair {i}: u={u}, v={v}"),
        )?;
    }
    Ok("200 random eventually periodic pairs agree with the quadruple-loop scan".into())
}

/// Criterion 4 — the two constructed translations at slope 29/10 verify
/// exactly: the zero-orbit point pins u = 0,(1) with its synchronization
/// set certified empty, the left-limit point pins v = 3,(1) likewise, and
/// all four defining rational identities have zero residual. (The
/// certificate attaches to the side each family constructs.)
fn criterion_4() -> Result<String, String> {
    let beta = rat(29, 10);
    let omega: SymbolSeq = "(1)".parse().map_err(lib_err)?;

    let r_report =
        verify_witness(&rat(10, 29), &beta, Some(&omega), None, 20).map_err(lib_err)?;
    ensure(r_report.u.to_string() == "0,(1)", "zero itinerary is not 0,(1)")?;
    ensure(
        r_report.k_u.exact_verdict == KVerdict::EmptyCertified && r_report.k_u.found.is_empty(),
        "K(u) at the zero-orbit point is not certified empty",
    )?;

    let s_report =
        verify_witness(&rat(119, 290), &beta, None, Some(&omega), 20).map_err(lib_err)?;
    ensure(s_report.v.to_string() == "3,(1)", "left-limit itinerary is not 3,(1)")?;
    ensure(
        s_report.k_v.exact_verdict == KVerdict::EmptyCertified && s_report.k_v.found.is_empty(),
        "K(v) at the left-limit point is not certified empty",
    )?;

    let mut zero_residuals = 0usize;
    for check in r_report.identities.iter().chain(s_report.identities.iter()) {
        ensure(check.holds, format!("identity '{}' fails", check.name))?;
        if let Some(residual) = &check.residual {
            ensure(
                residual.is_zero(),
                format!("identity '{}' has nonzero residual {residual}", check.name),
            )?;
            zero_residuals += 1;
        }
    }
    ensure(
        zero_residuals >= 4,
        format!("expected at least four rational identities, saw {zero_residuals}"),
    )?;
    Ok(format!(
        "alpha=10/29 pins u with K(u) empty-certified; alpha=119/290 pins v with K(v) \
         empty-certified; {zero_residuals} rational identities, all residuals exactly 0"
    ))
}

/// Criterion 5 — the golden-mean pair u = (0), v = (1,0) yields
/// K(v) = {1} and K(u) = ∅, both certified, at window 10³ — the classical
/// bounded-zero-run criterion.
fn criterion_5() -> Result<String, String> {
    let u = SymbolSeq::periodic(vec![0]).map_err(lib_err)?;
    let v = SymbolSeq::periodic(vec![1, 0]).map_err(lib_err)?;
    let (k_u, k_v) = k_sets(&u, &v, 1000, 4000).map_err(lib_err)?;
    ensure(
        k_u.found.is_empty() && k_u.exact_verdict == KVerdict::EmptyCertified,
        format!("K(u) should be certified empty, got {:?}", k_u.exact_verdict),
    )?;
    ensure(
        k_v.found == vec![KMatch { n: 1, j: 1 }]
            && k_v.exact_verdict == KVerdict::FiniteCertified,
        format!("K(v) should be exactly {{1}}, got {:?}", k_v.found),
    )?;
    Ok("K(v) = {(n=1, j=1)} finite-certified, K(u) = {} empty-certified at n_max = 1000".into())
}

/// Independent bridge scan: for every gap and side, expand across strictly
/// smaller gaps to the first gap at least as long (or the hull end) and
/// take the worst bridge-to-gap ratio.
fn naive_thickness(u: &IntervalUnion) -> Rational {
    let hull = u.hull().expect("nonempty union");
    let gaps = u.gaps();
    let mut best: Option<Rational> = None;
    for (i, gap) in gaps.iter().enumerate() {
        let glen = gap.length();
        let mut left_edge = hull.lo.clone();
        for other in gaps[..i].iter().rev() {
            if other.length() >= glen {
                left_edge = other.hi.clone();
                break;
            }
        }
        let mut right_edge = hull.hi.clone();
        for other in &gaps[i + 1..] {
            if other.length() >= glen {
                right_edge = other.lo.clone();
                break;
            }
        }
        for bridge in [&gap.lo - &left_edge, &right_edge - &gap.hi] {
            let ratio = bridge / &glen;
            if best.as_ref().is_none_or(|b| ratio < *b) {
                best = Some(ratio);
            }
        }
    }
    best.expect("at least one gap")
}

/// Criterion 6 — laboratory thickness is level-independent for covers at
/// levels 1..=6, equals the closed form (ℓ−2)/(β+1−ℓ), stays at or above
/// the chain endpoint (ℓ−2)/2, and matches an independent gap-endpoint
/// scan. The β=3 disagreement with the quoted display formula (computed 1
/// vs formula 2) is asserted as a documented finding.
fn criterion_6() -> Result<String, String> {
    let slopes = [rat(29, 10), rat_int(3), rat(7, 2), rat_int(5), rat(99, 10)];
    let mut finding = String::new();
    for beta in &slopes {
        let ell = lab_stratum(beta).map_err(lib_err)?;
        let expected = rat_int(i64::from(ell) - 2)
            / (beta + Rational::one() - rat_int(i64::from(ell)));
        let spec = IfsSpec::new(beta.clone(), 1, ell - 1).map_err(lib_err)?;
        for level in 1..=6 {
            let cover = lambda_approx(&spec, level).map_err(lib_err)?;
            let tau = thickness(&cover).map_err(lib_err)?.tau;
            ensure(
                tau == expected,
                format!("thickness at beta={beta}, level {level}: {tau} != {expected}"),
            )?;
        }
        ensure(
            expected >= rat(i64::from(ell) - 2, 2),
            format!("thickness at beta={beta} below the chain endpoint"),
        )?;
        let scan = naive_thickness(&lambda_approx(&spec, 3).map_err(lib_err)?);
        ensure(
            scan == expected,
            format!("independent scan disagrees at beta={beta}: {scan} != {expected}"),
        )?;
        let formula = paper_thickness_formula(beta, ell).map_err(lib_err)?;
        if *beta == rat_int(3) {
            ensure(
                expected == Rational::one() && formula == rat_int(2),
                "expected the documented beta=3 disagreement (computed 1, formula 2)",
            )?;
            finding =
                "; finding: at beta=3 the computed thickness is 1 while the quoted display \
                 formula gives 2 — documented disagreement, asserted"
                    .into();
        }
    }
    Ok(format!(
        "5 slopes x 6 levels: thickness equals (l-2)/(beta+1-l) exactly and meets the \
         (l-2)/2 chain bound{finding}"
    ))
}

/// Criterion 7 — the dimension pipeline: the stratum-10 bound equals
/// 1 + log2/log3 to 10⁻¹² with directed rounding; the minimal stratum
/// whose product bound certifies ≥ 1.9 is 315 (314 certifiably misses —
/// documented finding); the bound increases toward 2 along ℓ = 10^k.
fn criterion_7() -> Result<String, String> {
    let nineteen_tenths = rat(19, 10);
    let d10 = dim_lower_bound(10).map_err(lib_err)?;
    ensure(
        d10.product.lo >= rat(1_630_929_753_571, 1_000_000_000_000)
            && d10.product.hi <= rat(1_630_929_753_572, 1_000_000_000_000)
            && d10.product.width() < rat(1, 1_000_000_000_000),
        "stratum-10 product bound does not pin 1 + log2/log3 to 1e-12",
    )?;

    // The fiber bound is strictly increasing in the stratum (the inner
    // radical shrinks), so bisection finds the minimal stratum whose
    // certified lower bound reaches 1.9; the two neighbors are then
    // checked directly with directed rounding on both sides.
    let reaches = |ell: u32| -> Result<bool, String> {
        Ok(dim_lower_bound(ell)
            .map_err(lib_err)?
            .product
            .certainly_ge(&nineteen_tenths))
    };
    let (mut lo, mut hi) = (3u32, 4000u32);
    ensure(!reaches(lo)? && reaches(hi)?, "bisection bracket invalid")?;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if reaches(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    ensure(hi == 315, format!("minimal stratum reaching 1.9 is {hi}, expected 315"))?;
    let d314 = dim_lower_bound(314).map_err(lib_err)?;
    ensure(
        d314.product.certainly_lt(&nineteen_tenths),
        "stratum 314 should certifiably miss 1.9",
    )?;
    let d315 = dim_lower_bound(315).map_err(lib_err)?;
    ensure(
        d315.product.certainly_ge(&nineteen_tenths),
        "stratum 315 should certifiably reach 1.9",
    )?;

    let mut prev = Rational::zero();
    for k in 1..=6u32 {
        let ell = u32::try_from(10u64.pow(k)).map_err(|e| e.to_string())?;
        let d = dim_lower_bound(ell).map_err(lib_err)?;
        ensure(
            d.product.lo > prev && d.product.hi < rat_int(2),
            format!("monotone approach to 2 fails at stratum 10^{k}"),
        )?;
        prev = d.product.lo;
    }
    Ok(format!(
        "stratum 10 bound = 1.630929753571… (width < 1e-12); minimal stratum certifying \
         >= 1.9 is 315; finding: stratum 314 reaches only {} — certifiably below 1.9; \
         bounds increase toward 2 on l = 10^k, k <= 6",
        abshift::real::decimal_trunc(&d314.product.hi, 9)
    ))
}

/// Criterion 8 — at slope 29/10 the two attractor copies intersect at desk
/// scale: depth-8 refinement yields a nonempty nested enclosure chain
/// inside the hull overlap, the thickness product certifies intersection,
/// level-3 covers interleave, and cylinder widths contract by exactly β
/// per level.
fn criterion_8() -> Result<String, String> {
    let beta = rat(29, 10);
    let report = find_witness(&beta, 8).map_err(lib_err)?;
    let chain = match &report.alpha {
        AlphaValue::Enclosure(chain) => chain.clone(),
        AlphaValue::Exact(_) => return Err("expected an enclosure chain".into()),
    };
    ensure(chain.len() == 8, format!("chain has {} levels, expected 8", chain.len()))?;
    let overlap_lo = rat(119, 290);
    let overlap_hi = rat(20, 29);
    for (k, enclosure) in chain.iter().enumerate() {
        ensure(
            enclosure.lo >= overlap_lo && enclosure.hi <= overlap_hi,
            format!("enclosure {k} leaves the hull overlap"),
        )?;
        if k > 0 {
            ensure(
                chain[k - 1].contains_interval(enclosure),
                format!("enclosure {k} is not nested in its predecessor"),
            )?;
        }
    }

    let tau = rat(10, 9);
    ensure(gap_lemma_test(&tau, &tau), "thickness product 100/81 should certify")?;

    let (r_spec, s_spec) = lab_ifs_pair(&beta).map_err(lib_err)?;
    let r3 = lambda_approx(&r_spec, 3).map_err(lib_err)?;
    let s3 = lambda_approx(&s_spec, 3).map_err(lib_err)?;
    ensure(
        interleaved(&r3, &s3).map_err(lib_err)?,
        "level-3 covers should interleave",
    )?;

    // Refinement geometry: cylinder widths contract by exactly beta per
    // level, and each enclosure fits inside its level's cylinders.
    let mut prev_width = r_spec.hull().length();
    for (k, enclosure) in chain.iter().enumerate() {
        let level = k + 1;
        let cover = lambda_approx(&r_spec, level).map_err(lib_err)?;
        let width = cover.parts()[0].length();
        ensure(
            &width * &beta == prev_width,
            format!("cylinder width at level {level} is not previous/beta"),
        )?;
        ensure(
            enclosure.length() <= width,
            format!("enclosure {k} exceeds its cylinder width"),
        )?;
        prev_width = width;
    }
    Ok(
        "depth-8 nested enclosures inside [119/290, 20/29]; gap-lemma certificate at \
         tau = 10/9; level-3 covers interleave; cylinder widths contract by beta exactly"
            .into(),
    )
}

/// Criterion 9 — the sweep command is deterministic: 1000 grid points over
/// stratum 10 produce byte-identical files at worker counts 1, 4, and 16.
fn criterion_9() -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for workers in [1u32, 4, 16] {
        let path = dir.path().join(format!("sweep-{workers}.csv"));
        let status = Command::new(env!("CARGO_BIN_EXE_abshift"))
            .args([
                "sweep", "--ell", "10", "--start", "99/10", "--end", "10", "--steps", "1000",
                "--depth", "2", "--out",
            ])
            .arg(&path)
            .arg("--workers")
            .arg(workers.to_string())
            .status()
            .map_err(|e| e.to_string())?;
        ensure(status.success(), format!("sweep failed at {workers} workers"))?;
        outputs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    ensure(
        outputs[0] == outputs[1] && outputs[1] == outputs[2],
        "sweep output differs across worker counts",
    )?;
    let rows = outputs[0].split(|&b| b == b'\n').filter(|l| !l.is_empty()).count() - 1;
    ensure(rows == 1000, format!("expected 1000 rows, got {rows}"))?;
    Ok("1000-row sweep byte-identical at 1, 4, and 16 workers".into())
}
