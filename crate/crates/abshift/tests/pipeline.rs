//! End-to-end flows across modules: witness construction feeding
//! specification checks, the two attractor families sharing exact
//! geometry, and the dimension chain closing on itself.

use abshift::cantor::{gap_lemma_test, lambda_approx, thickness_at_level};
use abshift::dynamics::{Params, SymbolSeq};
use abshift::numeric::{rat, rat_int, Interval};
use abshift::paramlab::{
    dim_lower_bound, dim_lower_bound_at, find_witness, lab_ifs_pair, r_alpha, s_alpha,
    verify_witness, AlphaValue,
};
use abshift::shiftspace::{spec_check, KVerdict, SpecVerdict};

fn seq(s: &str) -> SymbolSeq {
    s.parse().unwrap()
}

#[test]
fn constructed_translations_feed_the_specification_checker() {
    let beta = rat(29, 10);
    let omega = seq("(1)");

    // The zero-orbit family value pins u; the checker sees the same
    // critical sequence and certifies that side's synchronization set.
    let (alpha_r, ok) = r_alpha(&beta, &omega).unwrap();
    assert!(ok);
    let report = verify_witness(&alpha_r, &beta, Some(&omega), None, 20).unwrap();
    assert!(report.identities.iter().all(|c| c.holds));
    let p = Params::new(alpha_r, beta.clone()).unwrap();
    let check = spec_check(&p, 40, true).unwrap();
    assert_eq!(check.u.to_string(), "0,(1)");
    assert_eq!(check.u.digits(30).unwrap(), report.u.digits(30).unwrap());
    assert_eq!(check.k_u.exact_verdict, KVerdict::EmptyCertified);
    // The other side carries hit evidence but no certificate, so the
    // verdict must stop short of full certification.
    assert!(!matches!(check.verdict, SpecVerdict::SpecCertified));
    assert!(!matches!(check.verdict, SpecVerdict::NotSpecAt { .. }));

    // Same pipeline through the left-limit family.
    let (alpha_s, ok) = s_alpha(&beta, &omega).unwrap();
    assert!(ok);
    assert_eq!(alpha_s, rat(119, 290));
    let report = verify_witness(&alpha_s, &beta, None, Some(&omega), 20).unwrap();
    assert!(report.identities.iter().all(|c| c.holds));
    let p = Params::new(alpha_s, beta).unwrap();
    let check = spec_check(&p, 40, true).unwrap();
    assert_eq!(check.v.to_string(), "3,(1)");
    assert_eq!(check.k_v.exact_verdict, KVerdict::EmptyCertified);
    assert!(!matches!(check.verdict, SpecVerdict::NotSpecAt { .. }));
}

#[test]
fn witness_enclosures_sit_inside_both_attractor_hulls() {
    let beta = rat(29, 10);
    let report = find_witness(&beta, 6).unwrap();
    let chain = match &report.alpha {
        AlphaValue::Enclosure(c) => c.clone(),
        AlphaValue::Exact(_) => unreachable!("rational slope cannot close up exactly"),
    };
    let (r_spec, s_spec) = lab_ifs_pair(&beta).unwrap();
    let innermost = chain.last().unwrap();
    for (spec, level) in [(&r_spec, 6usize), (&s_spec, 6)] {
        let cover = lambda_approx(spec, level).unwrap();
        // The innermost enclosure meets the level-6 cover of each family:
        // some cover part overlaps it.
        assert!(
            cover.parts().iter().any(|part| part.overlaps(innermost)),
            "enclosure escaped the level-{level} cover"
        );
    }
    // Enclosure endpoints are honest parameters: every α in the innermost
    // interval lies in stratum 3's translation window.
    let window = abshift::paramlab::e_ell_window(&beta, 3).unwrap();
    assert!(window.contains(&innermost.lo) && window.contains(&innermost.hi));
}

#[test]
fn the_two_families_share_geometry_exactly() {
    for beta in [rat(29, 10), rat(14, 5), rat(99, 10), rat(49, 10)] {
        let (r_spec, s_spec) = lab_ifs_pair(&beta).unwrap();
        let tr = thickness_at_level(&r_spec, 2).unwrap();
        let ts = thickness_at_level(&s_spec, 2).unwrap();
        assert_eq!(tr.tau, ts.tau, "thickness differs at β={beta}");
        // The S̃ hull is the R hull translated by (β−1)/β·(1−β+⌊β⌋).
        let r_hull = r_spec.hull();
        let s_hull = s_spec.hull();
        assert_eq!(r_hull.length(), s_hull.length());
        let shift = &s_hull.lo - &r_hull.lo;
        assert_eq!(
            r_hull.translate(&shift),
            Interval::new(s_hull.lo.clone(), s_hull.hi.clone()).unwrap()
        );
        // Positive thickness product certifies intersection whenever the
        // sets interleave.
        assert!(gap_lemma_test(&tr.tau, &ts.tau) == (&tr.tau * &ts.tau > rat_int(1)));
    }
}

#[test]
fn dimension_chain_closes_on_the_attractor_thickness() {
    // The per-stratum bound evaluated through the generic thickness form
    // at the chain endpoint τ = (ℓ−2)/2 gives the same enclosure.
    for ell in [3u32, 5, 10, 100] {
        let direct = dim_lower_bound(ell).unwrap();
        let via_tau = dim_lower_bound_at(&rat(i64::from(ell) - 2, 2)).unwrap();
        assert!(direct.fiber.lo <= via_tau.fiber.hi);
        assert!(via_tau.fiber.lo <= direct.fiber.hi);
        // Product bound is exactly fiber + 1.
        assert_eq!(&direct.product.lo - &direct.fiber.lo, rat_int(1));
        assert_eq!(&direct.product.hi - &direct.fiber.hi, rat_int(1));
    }
    // The rigorous level-2 thickness of the laboratory attractor feeds the
    // same bound: at β=29/10 the thickness is 10/9 > 1, so the dimension
    // bound beats the τ=1 value.
    let spec = abshift::cantor::IfsSpec::new(rat(29, 10), 1, 2).unwrap();
    let tau = thickness_at_level(&spec, 2).unwrap().tau;
    assert_eq!(tau, rat(10, 9));
    let at_tau = dim_lower_bound_at(&tau).unwrap();
    let at_one = dim_lower_bound_at(&rat_int(1)).unwrap();
    assert!(at_tau.fiber.lo > at_one.fiber.hi - rat(1, 1000));
}
