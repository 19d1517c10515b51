use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::arith::int::{int, sqrt_mod};
use crate::arith::numfield::NumberField;
use crate::arith::poly::{fp_from_ints, fp_powmod, fp_rem};
use crate::newforms::Character;

fn rational_form(level: u64, ap: &[(u64, i64)]) -> NewformRecord {
    let field = NumberField::from_i64("Q", &[0, 1]).unwrap();
    NewformRecord {
        level,
        weight: 2,
        character: Character {
            modulus: 1,
            order: 1,
            values: BTreeMap::new(),
        },
        ap: ap
            .iter()
            .map(|&(p, a)| (p, NfElem::from_i64(&field, &[a])))
            .collect(),
        field: Arc::clone(&field),
        label: format!("{level}.synthetic"),
        cm: None,
    }
}

fn ctx17() -> EliminationContext {
    context_a1(&int(-17), true, &[])
        .unwrap()
        .with_primes(vec![3, 5, 7])
}

#[test]
fn residual_partition_sizes() {
    let ctx = ctx17();
    let pairs = residual_frey_set(3, &ctx).unwrap();
    assert_eq!(pairs.len(), 8);
    let mult = pairs
        .iter()
        .filter(|p| p.reduction == Reduction::Multiplicative)
        .count();
    // w² = z⁴ mod 3: z ≠ 0 gives w = ±z².
    assert_eq!(mult, 4);

    let ctx = ctx17().with_constraints(&[7]);
    let pairs = residual_frey_set(7, &ctx).unwrap();
    assert!(
        !pairs.is_empty()
            && pairs
                .iter()
                .all(|p| p.reduction == Reduction::Multiplicative)
    );

    let ctx = context_d125_qcurve(&[11]);
    let pairs = residual_frey_set(11, &ctx).unwrap();
    assert!(
        !pairs.is_empty()
            && pairs
                .iter()
                .all(|p| p.reduction == Reduction::Multiplicative)
    );

    assert!(residual_frey_set(2, &ctx).is_err());
    assert!(residual_frey_set(5, &ctx).is_err());
    assert!(residual_frey_set(17, &ctx17()).is_err());
}

/// σ_p(θ) ≡ θ^p modulo p wherever the defining polynomial stays squarefree.
#[test]
fn frobenius_rules_match_power_map() {
    for field in [
        context_d125_qcurve(&[]).field,
        context_dm17_qcurve(&[]).field,
    ] {
        let (gf, _) = field.galois().unwrap();
        let m: Vec<Int> = gf.field.poly.clone();
        for p in primes_upto(120)
            .into_iter()
            .filter(|&p| p > 5 && p != 17 && p != 19)
        {
            let mp = fp_from_ints(&m, p);
            let theta_p = fp_powmod(&[0, 1], Int::from(p), &mp, p);
            let sigma = field.frobenius(p).unwrap();
            let image = gf.autos[sigma].apply(&NfElem::gen(&gf.field));
            let img: Vec<u64> = image.c.iter().map(|c| rat_mod(c, p).unwrap()).collect();
            let mut img = fp_rem(&img, &mp, p);
            let mut lhs = theta_p.clone();
            crate::arith::poly::fp_trim(&mut img);
            crate::arith::poly::fp_trim(&mut lhs);
            assert_eq!(lhs, img, "p = {p}");
        }
    }
}

#[test]
fn frobenius_orders() {
    let f = context_d125_qcurve(&[]).field;
    assert_eq!(f.frobenius_order(41).unwrap(), 1);
    assert_eq!(f.frobenius_order(11).unwrap(), 2);
    assert_eq!(f.frobenius_order(3).unwrap(), 4);
    let f = context_dm17_qcurve(&[]).field;
    // 2 and −17 are both squares mod 67? (2/67) = −1, so the order is 2.
    assert_eq!(f.frobenius_order(67).unwrap(), 2);
    let split: Vec<u64> = primes_upto(400)
        .into_iter()
        .filter(|&p| p > 2 && p != 17 && legendre(2, p) == 1 && legendre(-17, p) == 1)
        .collect();
    for p in split {
        assert_eq!(f.frobenius_order(p).unwrap(), 1);
    }
}

/// For split p the local norm is γ itself: χ(1 + 3√2) with √2 ↦ either root.
#[test]
fn twist_character_dm17() {
    let f = context_dm17_qcurve(&[]).field;
    let mut checked = 0;
    for p in primes_upto(400).into_iter().filter(|&p| p > 2 && p != 17) {
        if f.frobenius_order(p).unwrap() != 1 {
            continue;
        }
        let s = sqrt_mod(2, p).unwrap();
        let direct = legendre(((1 + 3 * s) % p) as i64, p);
        assert_eq!(f.twist_character(p).unwrap(), direct, "p = {p}");
        checked += 1;
    }
    assert!(checked > 5);
}

#[test]
fn power_sums() {
    let field = NumberField::from_i64("Q", &[0, 1]).unwrap();
    let t = NfElem::from_i64(&field, &[3]);
    let d = NfElem::from_i64(&field, &[7]);
    assert_eq!(power_sum(&t, &d, 1), t);
    assert_eq!(power_sum(&t, &d, 2), NfElem::from_i64(&field, &[9 - 14]));
    // s_3 = t³ − 3td.
    assert_eq!(power_sum(&t, &d, 3), NfElem::from_i64(&field, &[27 - 63]));
}

/// With 3 | B only multiplicative pairs remain at 3: l | a₃² − 16.
#[test]
fn multiplicative_condition_at_three() {
    let ctx = ctx17().with_constraints(&[3]);
    let pair = residual_frey_set(3, &ctx).unwrap()[0];
    assert_eq!(pair.reduction, Reduction::Multiplicative);
    for a3 in -3i64..=3 {
        let f = rational_form(17, &[(3, a3), (5, 0), (7, 0)]);
        for l in [5u64, 7, 13] {
            let expect = (a3 * a3 - 16) % l as i64 == 0;
            assert_eq!(
                trace_condition(&f, l, 3, &pair, &ctx).unwrap(),
                expect,
                "a3={a3} l={l}"
            );
        }
        assert!(trace_condition(&f, 3, 3, &pair, &ctx).unwrap());
    }
}

/// a_p far outside every residual trace is eliminated for all large l.
#[test]
fn synthetic_incompatible_form() {
    let ctx = ctx17().with_l_range(3, 200);
    let f = rational_form(34, &[(3, 100), (5, 100), (7, 100)]);
    let r = eliminate(&ctx, &[f]).unwrap();
    let n = &r.newforms[0];
    assert!(n.survivors.iter().all(|&l| l < 120), "{:?}", n.survivors);
    assert!(r.certificates_consistent());
}

#[test]
fn empty_prime_list_rejected() {
    let ctx = ctx17().with_primes(vec![]);
    assert!(eliminate(&ctx, &[]).is_err());
}

/// eliminate agrees with the per-pair trace condition.
fn brute_survives(f: &NewformRecord, l: u64, ctx: &EliminationContext) -> bool {
    ctx.primes.iter().all(|&p| {
        residual_frey_set(p, ctx)
            .unwrap()
            .iter()
            .any(|pair| trace_condition(f, l, p, pair, ctx).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn eliminate_matches_pairwise(a3 in -3i64..=3, a5 in -4i64..=4, a7 in -5i64..=5, c3 in any::<bool>(), c7 in any::<bool>()) {
        let mut qs = vec![];
        if c3 { qs.push(3); }
        if c7 { qs.push(7); }
        let ctx = ctx17().with_constraints(&qs).with_l_range(3, 60);
        let f = rational_form(34, &[(3, a3), (5, a5), (7, a7)]);
        let r = eliminate(&ctx, std::slice::from_ref(&f)).unwrap();
        for l in ctx.exponents() {
            prop_assert_eq!(r.newforms[0].survivors.contains(&l), brute_survives(&f, l, &ctx), "l = {}", l);
        }
        prop_assert!(verify_certificates(&ctx, std::slice::from_ref(&f), &r).unwrap());
    }

    /// Adding a divisor constraint never shrinks the eliminated set.
    #[test]
    fn constraints_are_monotone(a3 in -3i64..=3, a5 in -4i64..=4, a7 in -5i64..=5) {
        let f = rational_form(34, &[(3, a3), (5, a5), (7, a7)]);
        let base = ctx17().with_l_range(3, 200);
        let r0 = eliminate(&base, std::slice::from_ref(&f)).unwrap();
        for qs in [&[3u64][..], &[7], &[3, 5, 7]] {
            let r1 = eliminate(&base.clone().with_constraints(qs), std::slice::from_ref(&f)).unwrap();
            for l in &r1.newforms[0].survivors {
                prop_assert!(r0.newforms[0].survivors.contains(l));
            }
        }
    }
}

#[test]
fn exclusion_rows() {
    assert_eq!(format_exclusion(&[]), "l > 2");
    assert_eq!(format_exclusion(&[3, 5, 11]), "l > 5, l ≠ 11");
    assert_eq!(format_exclusion(&[3, 5, 7, 11, 13, 17]), "l > 17");
    assert_eq!(format_exclusion(&[5, 79]), "l > 2, l ≠ 5, l ≠ 79");
}

#[test]
fn d125_family_is_vacuous() {
    let d = table3_case("i").unwrap();
    let s = bound_exponents(
        &d.d,
        &d.point,
        &PipelineOptions {
            l_max: 200,
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(s.row, "l > 2");
    for c in &s.classes {
        assert_eq!(c.levels, vec![5, 10]);
        assert_eq!(c.newforms, 0);
    }
}

#[test]
fn table3_points_lie_on_curves() {
    for row in TABLE3_NAMES {
        let c = table3_case(row).unwrap();
        assert!(
            crate::curve::ed_curve(&c.d).unwrap().contains(&c.point),
            "{row}"
        );
    }
}
