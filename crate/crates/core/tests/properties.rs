use std::collections::BTreeMap;

use k3w_core::fiber::{
    classify_all, discriminant, k3_jinfty_configurations, make_nk_data, FiberType, WeierstrassData,
};
use k3w_core::git::{
    classify_git_boundary, hm_candidates, hm_oracle, marked_stability, GitBoundaryClass,
    GitCriterion, MarkedTriple, Stability,
};
use k3w_core::random::Sampler;
use k3w_core::strata::{count_strata, enumerate_strata, Family, StrataQuery};
use k3w_core::surface::{
    attachment_is_lc, check_end_markings, check_k3_budget, check_slc_fibers, check_tsm_conditions,
    stratum_graph, twisted_model_of_nk, ComponentKind, ComponentSpec, FiberEntry, SurfaceGraph,
    Violation,
};
use k3w_core::walls::FiberModel;
use k3w_core::{BinaryForm, ExactField, Form, Order, P1Point, Rational};
use num_rational::Ratio;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64) -> Rational {
    Rational::from_i64(n)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Kodaira type from the discriminant order and the order of `j`, the
/// pole order of `j` separating the multiplicative fibers.
fn kodaira_by_j(v_delta: u32, v_j: i64) -> FiberType {
    if v_j < 0 {
        let n = (-v_j) as u32;
        return match i64::from(v_delta) + v_j {
            0 => FiberType::I(n),
            6 => FiberType::IStar(n),
            other => panic!("no fiber with vΔ + vj = {other}"),
        };
    }
    match v_delta {
        0 => FiberType::Smooth,
        2 => FiberType::II,
        3 => FiberType::III,
        4 => FiberType::IV,
        6 => FiberType::IStar(0),
        8 => FiberType::IVStar,
        9 => FiberType::IIIStar,
        10 => FiberType::IIStar,
        other => panic!("no potentially good fiber with vΔ = {other}"),
    }
}

/// Weierstrass data with prescribed behavior at `T0 = 0`: orders `(va, vb)`,
/// or a multiplicative fiber `I_n` (`star` gives `I_n^*`) built from
/// `A = -3u²`, `B = 2u³ + c T0^n` so the leading terms of `Δ` cancel.
fn local_model(
    r: &mut ChaCha8Rng,
    s: &Sampler,
    shape: (u32, u32, Option<(u32, bool)>),
) -> WeierstrassData<Rational> {
    let t0 = Form::t0();
    let (va, vb, mult) = shape;
    let (a, b) = match mult {
        None => (
            t0.pow(va).mul(&s.form(r, 8 - va as usize)),
            t0.pow(vb).mul(&s.form(r, 12 - vb as usize)),
        ),
        Some((n, star)) => {
            let shift = u32::from(star);
            let u = s.form::<Rational, _>(r, 4 - shift as usize);
            let c = s.form(r, 12 - 3 * shift as usize - n as usize);
            let a = u.pow(2).scale(&q(-3));
            let b = u.pow(3).scale(&q(2)).add(&t0.pow(n).mul(&c)).unwrap();
            (t0.pow(2 * shift).mul(&a), t0.pow(3 * shift).mul(&b))
        }
    };
    WeierstrassData::new(2, a, b).unwrap()
}

fn report_at_zero(w: &WeierstrassData<Rational>) -> Option<FiberType> {
    classify_all(w)
        .unwrap()
        .into_iter()
        .find(|r| !r.place.form.gcd(&Form::t0()).unwrap().is_constant())
        .map(|r| r.fiber)
}

fn shape_strategy() -> impl Strategy<Value = (u32, u32, Option<(u32, bool)>)> {
    prop_oneof![
        (0u32..=4, 0u32..=6)
            .prop_filter("minimal", |(a, b)| *a < 4 || *b < 6)
            .prop_map(|(a, b)| (a, b, None)),
        (1u32..=6, any::<bool>()).prop_map(|(n, star)| (0, 0, Some((n, star)))),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn classification_matches_kodaira_table(shape in shape_strategy(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = Sampler::default();
        let w = local_model(&mut r, &s, shape);
        prop_assume!(!discriminant(&w).is_zero());
        let t0 = Form::t0();
        let v_delta = discriminant(&w).multiplicity(&t0).unwrap();
        let v_j = if w.a().is_zero() {
            0
        } else {
            3 * i64::from(w.a().multiplicity(&t0).unwrap()) - i64::from(v_delta)
        };
        let expected = kodaira_by_j(v_delta, v_j);
        let got = report_at_zero(&w).unwrap_or(FiberType::Smooth);
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn squarefree_decomposition_reconstructs(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = Sampler::default();
        let mut f = Form::constant(s.nonzero(&mut r));
        for _ in 0..r.gen_range(1..=4) {
            let factor: Form = s.point(&mut r).linear_form();
            let factor = if r.gen_bool(0.3) { factor.mul(&s.form(&mut r, 1)) } else { factor };
            f = f.mul(&factor.pow(r.gen_range(1..=4)));
        }
        let d = f.squarefree_decompose().unwrap();
        prop_assert_eq!(d.reconstruct(), f);
        for (i, (g, m)) in d.factors.iter().enumerate() {
            prop_assert!(i == 0 || d.factors[i - 1].1 < *m);
            let dd = g.squarefree_decompose().unwrap();
            prop_assert!(dd.factors.iter().all(|(_, k)| *k == 1));
            for (h, _) in &d.factors[i + 1..] {
                prop_assert!(g.gcd(h).unwrap().is_constant());
            }
        }
    }

    #[test]
    fn multiplication_and_exact_division_round_trip(seed in any::<u64>(), da in 0usize..8, db in 0usize..8) {
        let mut r = rng(seed);
        let s = Sampler::default();
        let a: Form = s.form(&mut r, da);
        let b: Form = s.form(&mut r, db);
        let ab = a.mul(&b);
        prop_assert_eq!(ab.exact_div(&b).unwrap(), a.clone());
        let g = ab.gcd(&a).unwrap();
        prop_assert_eq!(g, a.normalized());
    }

    #[test]
    fn nk_data_round_trips(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = Sampler::default();
        let mut ks = Vec::new();
        let mut left = 4u32;
        while left > 0 {
            let k = r.gen_range(1..=left.min(2));
            ks.push(k);
            left -= k;
        }
        let mut points: Vec<P1Point<Rational>> = Vec::new();
        while points.len() < ks.len() {
            let p = s.point(&mut r);
            if !points.contains(&p) {
                points.push(p);
            }
        }
        let fibers: Vec<_> = points.iter().cloned().zip(ks.iter().copied()).collect();
        let w = make_nk_data(2, &fibers).unwrap();
        prop_assert!(discriminant(&w).is_zero());
        let mut expected: BTreeMap<u32, usize> = BTreeMap::new();
        for &k in &ks {
            *expected.entry(k).or_default() += 1;
        }
        let mut got: BTreeMap<u32, usize> = BTreeMap::new();
        for rep in classify_all(&w).unwrap() {
            match rep.fiber {
                FiberType::N(k) => *got.entry(k).or_default() += rep.place.degree(),
                other => prop_assert!(false, "unexpected {}", other),
            }
        }
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn git_verdict_matches_slc_of_marked_fibration(seed in any::<u64>(), va in 2u32..=8, vb in 3u32..=9, marked in any::<bool>()) {
        let mut r = rng(seed);
        let s = Sampler::default();
        let p: P1Point<Rational> = s.point(&mut r);
        let w = s.planted(&mut r, 2, &p, va, vb);
        prop_assume!(!w.a().is_zero() || !w.b().is_zero());
        let t = if marked {
            MarkedTriple::new(w.clone(), p.linear_form()).unwrap()
        } else {
            s.triple(&mut r, w.clone())
        };
        let l = t.marker().clone();
        let not_slc = classify_all(&w).unwrap().iter().any(|rep| {
            let at_marker = !rep.place.form.gcd(&l).unwrap().is_constant();
            !rep.fiber.is_slc() || (at_marker && rep.fiber.lct_zero())
        });
        let verdict = marked_stability(&t, GitCriterion::Proof).unwrap();
        prop_assert_eq!(verdict.status == Stability::Unstable, not_slc);
        let statement = marked_stability(&t, GitCriterion::Statement).unwrap();
        prop_assert_eq!(statement.status, verdict.status);
        let oracle = hm_oracle(&t, &hm_candidates(&t).unwrap()).unwrap();
        prop_assert_eq!(oracle.status, verdict.status);
    }

    #[test]
    fn classification_is_invariant_under_scaling(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = Sampler::default();
        let w: WeierstrassData<Rational> = s.weierstrass(&mut r, 2);
        let lambda: Rational = s.nonzero(&mut r);
        let fibers = |w: &WeierstrassData<Rational>| {
            let mut v: Vec<_> = classify_all(w).unwrap().into_iter().map(|x| (x.fiber, x.place.form)).collect();
            v.sort();
            v
        };
        prop_assert_eq!(fibers(&w.rescale(&lambda)), fibers(&w));
    }

    #[test]
    fn attachment_is_lc_is_a_threshold(n in -50i64..50, d in 1i64..20) {
        let v = Rational::from_ratio(n, d);
        prop_assert_eq!(attachment_is_lc(&v), v <= q(1));
    }

    #[test]
    fn twisted_model_follows_parity(k in 0u32..100) {
        let t = twisted_model_of_nk(k);
        prop_assert_eq!(t, if k % 2 == 0 { FiberType::N(0) } else { FiberType::N(1) });
        prop_assert_eq!(twisted_model_of_nk(k + 2), t);
    }

    #[test]
    fn strata_counts_match_enumeration(family in prop::sample::select(Family::ALL.to_vec()), r in prop::option::of(1u32..=17), s in prop::option::of(1u32..=17), canonical in any::<bool>()) {
        let query = StrataQuery { family: Some(family), r, s, max_n: Some(6), canonical, ..Default::default() };
        prop_assert_eq!(count_strata(&query), enumerate_strata(&query).count() as u64);
    }
}

fn jinf(ks: &[u32]) -> SurfaceGraph {
    let fibers = ks
        .iter()
        .map(|&k| FiberEntry::bare(FiberType::N(k), FiberModel::Weierstrass))
        .collect();
    SurfaceGraph {
        components: vec![ComponentSpec {
            kind: ComponentKind::IsotrivialJinf,
            j_degree: 0,
            fibers,
            markings: 0,
            section_self_int: Some(q(2)),
        }],
        edges: vec![],
        marked_total: 24,
    }
}

#[test]
fn k3_budget_accepts_exactly_the_slc_configurations() {
    // Every multiset of N_k, 1 ≤ k ≤ 4, with Σ k = 4.
    let mut accepted = Vec::new();
    let mut flagged = Vec::new();
    fn parts(left: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=max.min(left)).rev() {
            cur.push(k);
            parts(left - k, k, cur, out);
            cur.pop();
        }
    }
    let mut all = Vec::new();
    parts(4, 4, &mut vec![], &mut all);
    for ks in all {
        let g = jinf(&ks);
        let v = check_k3_budget(&g);
        if v.is_empty() {
            let mut m = BTreeMap::new();
            for &k in &ks {
                *m.entry(k).or_insert(0) += 1;
            }
            accepted.push(m);
        } else {
            assert!(v
                .iter()
                .all(|x| matches!(x, Violation::RequiresAttachment { .. })));
            assert_eq!(check_slc_fibers(&g).len(), v.len());
            flagged.push(ks);
        }
    }
    accepted.sort();
    let mut expected = k3_jinfty_configurations();
    expected.sort();
    assert_eq!(accepted, expected);
    assert_eq!(flagged, vec![vec![4], vec![3, 1]]);
}

#[test]
fn every_stratum_graph_passes() {
    let mut checked = 0;
    for d in enumerate_strata(&StrataQuery::default()) {
        let g = stratum_graph(&d);
        let mut v = check_tsm_conditions(&g).unwrap();
        v.extend(check_slc_fibers(&g));
        v.extend(check_end_markings(&g).unwrap());
        assert!(v.is_empty(), "{d:?}: {v:?}");
        checked += 1;
    }
    assert_eq!(checked, count_strata(&StrataQuery::default()));
}

#[test]
fn boundary_classes_of_standard_data() {
    let w = make_nk_data(
        2,
        &[
            (P1Point::Affine(q(0)), 1),
            (P1Point::Infinity, 1),
            (P1Point::Affine(q(1)), 1),
            (P1Point::Affine(q(2)), 1),
        ],
    )
    .unwrap();
    assert_eq!(
        classify_git_boundary(&w).unwrap(),
        GitBoundaryClass::SlcJinf
    );
    let w = make_nk_data(2, &[(P1Point::Affine(q(0)), 2), (P1Point::Infinity, 2)]).unwrap();
    assert_eq!(
        classify_git_boundary(&w).unwrap(),
        GitBoundaryClass::PolystableCorner
    );
    let w = make_nk_data(2, &[(P1Point::Affine(q(0)), 3), (P1Point::Infinity, 1)]).unwrap();
    assert_eq!(
        classify_git_boundary(&w).unwrap(),
        GitBoundaryClass::Unstable
    );
    let mut r = rng(1);
    let w: WeierstrassData<Rational> = Sampler::default().weierstrass(&mut r, 2);
    assert_eq!(
        classify_git_boundary(&w).unwrap(),
        GitBoundaryClass::InteriorAde
    );
}

/// The 4N1 discriminant vanishes identically, so no multiplicity is defined.
#[test]
fn vanishing_discriminant_has_no_multiplicity() {
    let w = make_nk_data(
        2,
        &[
            (P1Point::Affine(q(0)), 1),
            (P1Point::Infinity, 1),
            (P1Point::Affine(q(1)), 1),
            (P1Point::Affine(q(2)), 1),
        ],
    )
    .unwrap();
    let delta = discriminant(&w);
    assert!(delta.multiplicity(&Form::t0()).is_err());
    let reports = classify_all(&w).unwrap();
    assert!(reports
        .iter()
        .all(|r| r.discriminant_mult == Order::Infinite));
}

fn small_form<F: ExactField>(roots: &[(i64, u32)]) -> BinaryForm<F> {
    roots
        .iter()
        .fold(BinaryForm::constant(F::from_i64(3)), |acc, &(r, m)| {
            acc.mul(&BinaryForm::from_coeffs(vec![F::from_i64(-r), F::one()]).pow(m))
        })
}

/// The fixed-width scalars run the same algorithms as the default one.
#[test]
fn fixed_width_scalars_agree() {
    let roots_a = [(0, 2), (1, 1), (-2, 3)];
    let roots_b = [(1, 2), (-2, 1), (5, 1)];
    let big = small_form::<Rational>(&roots_a)
        .gcd(&small_form(&roots_b))
        .unwrap();
    let narrow = small_form::<Ratio<i64>>(&roots_a)
        .gcd(&small_form(&roots_b))
        .unwrap();
    let wide = small_form::<Ratio<i128>>(&roots_a)
        .gcd(&small_form(&roots_b))
        .unwrap();
    let text = |f: &[String]| f.join(",");
    let big: Vec<String> = big.coeffs().iter().map(|c| c.to_string()).collect();
    let narrow: Vec<String> = narrow.coeffs().iter().map(|c| c.to_string()).collect();
    let wide: Vec<String> = wide.coeffs().iter().map(|c| c.to_string()).collect();
    assert_eq!(text(&big), text(&narrow));
    assert_eq!(text(&big), text(&wide));

    let origin = P1Point::Affine(Ratio::from_integer(0));
    let w = make_nk_data::<Ratio<i128>>(2, &[(origin, 2), (P1Point::Infinity, 2)]).unwrap();
    let fibers: Vec<_> = classify_all(&w)
        .unwrap()
        .into_iter()
        .map(|r| r.fiber)
        .collect();
    assert_eq!(fibers, vec![FiberType::N(2), FiberType::N(2)]);
}
