use eds_core::arith::int::Int;
use eds_core::conductor::{classify_table1, tate_exponent, GAMMAS};
use eds_core::frey::{frey_model_a1, isogenous_model_a1};
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

fn samples() -> Vec<(Int, Int)> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut out = Vec::new();
    // One lift from each of a spread of residue classes mod 2⁹.
    for z0 in (0..512i64).step_by(3) {
        for w0 in (0..512i64).step_by(37) {
            let z = z0 + 512 * rng.gen_range(-20..20);
            let w = w0 + 512 * rng.gen_range(-20..20);
            if Int::from(z).gcd(&Int::from(w)) == Int::from(1) && w * w != z.pow(4) {
                out.push((Int::from(z), Int::from(w)));
            }
        }
    }
    // ord₂(w ± z²) ≥ 7.
    for k in 7..14u32 {
        for _ in 0..12 {
            let z = 2 * rng.gen_range(-400i64..400) + 1;
            let u = 2 * rng.gen_range(-50i64..50) + 1;
            for s in [1i64, -1] {
                let w = -s * z * z + u * (1 << k);
                if Int::from(z).gcd(&Int::from(w)) == Int::from(1) {
                    out.push((Int::from(z), Int::from(w)));
                }
            }
        }
    }
    out
}

#[test]
fn table1_matches_tate() {
    let s = samples();
    assert!(s.len() >= 500, "{}", s.len());
    let two = Int::from(2);
    let bad: Vec<String> = s
        .par_iter()
        .filter_map(|(z, w)| {
            let prof = classify_table1(z, w).unwrap();
            let got: Vec<u32> = GAMMAS
                .iter()
                .map(|&g| tate_exponent(&frey_model_a1(z, w, g), &two).unwrap().0)
                .collect();
            (got != prof.exponents)
                .then(|| format!("z={z} w={w} tate={got:?} table={:?}", prof.exponents))
        })
        .collect();
    assert!(
        bad.is_empty(),
        "{} mismatches, e.g. {:?}",
        bad.len(),
        &bad[..bad.len().min(5)]
    );
}

#[test]
fn isogeny_invariance() {
    let two = Int::from(2);
    for (z, w) in samples().into_iter().step_by(5) {
        for g in GAMMAS {
            let a = tate_exponent(&frey_model_a1(&z, &w, g), &two).unwrap().0;
            let b = tate_exponent(&isogenous_model_a1(&z, &w, g), &two)
                .unwrap()
                .0;
            assert_eq!(a, b, "z={z} w={w} γ={g}");
        }
    }
}

#[test]
fn excluded_exponents_absent_for_powers() {
    // With 8 | B (or B odd), ord₂(w² − z⁴) ∉ {4,…,7}, so no 2, 3 or 5 appears.
    for (z, w) in samples() {
        let v = (&w * &w - z.pow(4)).trailing_zeros().unwrap_or(64);
        if (4..8).contains(&v) {
            continue;
        }
        let m = classify_table1(&z, &w).unwrap().min_exponent();
        assert!(![2, 3, 5].contains(&m), "z={z} w={w}");
    }
}
