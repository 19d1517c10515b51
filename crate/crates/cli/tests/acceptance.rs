//! One status line per acceptance criterion; always exits 0.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use eds_core::arith::int::{integer_nth_root, legendre, Int, Rat};
use eds_core::arith::numfield::{NfElem, NumberField};
use eds_core::conductor::{classify_table1, tate_exponent, GAMMAS};
use eds_core::curve::{ed_curve, pt, torsion_t, CurvePoint, Point};
use eds_core::descent2::alpha_delta;
use eds_core::eds::{abc, check_divisibility, check_identities, eds_sequence};
use eds_core::elimination::*;
use eds_core::frey::{decompose, frey_model_a1};
use eds_core::galois_cocycle::{case_d125, case_dm17, verify_case};
use eds_core::irreducibility::{hilbert_symbol, is_norm_from, norm_search, relevant_places};
use eds_core::newforms::{genus_x0, Character, NewformRecord};
use eds_core::power_descent::{
    descent_curves_d125, genus_hyper, local_points_exist, verify_quotient_identity,
};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Pass,
    Fail,
    SkippedData,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::SkippedData => "skipped: data",
        })
    }
}

struct Outcome {
    status: Status,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            status: Status::Pass,
            notes: vec![],
        }
    }

    /// Record a check; a failure makes the whole criterion FAIL.
    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if ok {
            self.notes.push(format!("ok {what}"));
        } else {
            self.status = Status::Fail;
            self.notes.push(format!("FAILED {what}"));
        }
    }

    /// A check that cannot run for lack of data; only downgrades a PASS.
    fn skip(&mut self, what: impl Into<String>) {
        if self.status == Status::Pass {
            self.status = Status::SkippedData;
        }
        self.notes.push(format!("skipped: data ({})", what.into()));
    }

    fn within(&mut self, start: Instant, limit: Duration) {
        let t = start.elapsed();
        self.check(
            t <= limit,
            format!("time {:.1}s <= {}s", t.as_secs_f64(), limit.as_secs()),
        );
    }
}

fn int(x: i64) -> Int {
    Int::from(x)
}

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(int(n), int(d))
}

fn table3_rows() -> Vec<CaseDescriptor> {
    TABLE3_NAMES
        .iter()
        .map(|r| table3_case(r).unwrap())
        .collect()
}

fn c1_eds() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    for case in table3_rows() {
        let s = eds_sequence(&case.d, &case.point, 12).unwrap();
        o.check(
            check_divisibility(&s) && check_identities(&case.d, &s),
            format!("{} m<=12", case.name),
        );
    }
    o.within(start, Duration::from_secs(10));
    o
}

fn c2_frey() -> Outcome {
    let mut o = Outcome::new();
    for case in table3_rows() {
        let s = eds_sequence(&case.d, &case.point, 12).unwrap();
        let mut a_by_parity: [BTreeSet<Int>; 2] = Default::default();
        let mut ok = true;
        for e in &s {
            let fd = decompose(&case.d, &e.point).unwrap();
            ok &= &fd.w * &fd.w == &fd.a * fd.z.pow(4) + &fd.a_hat * fd.b.pow(4);
            ok &= fd.b == e.b.abs();
            a_by_parity[(e.m % 2) as usize].insert(fd.a.clone());
        }
        let even_one = a_by_parity[0].len() == 1 && a_by_parity[0].contains(&Int::one());
        o.check(
            ok && a_by_parity[1].len() == 1 && even_one,
            case.name.to_string(),
        );
    }
    o
}

fn table1_samples() -> Vec<(Int, Int)> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut out = Vec::new();
    for z0 in (0..512i64).step_by(5) {
        for w0 in (0..512i64).step_by(41) {
            let z = z0 + 512 * rng.gen_range(-20..20);
            let w = w0 + 512 * rng.gen_range(-20..20);
            if int(z).gcd(&int(w)).is_one() && w * w != z.pow(4) {
                out.push((int(z), int(w)));
            }
        }
    }
    // Deep rows: ord₂(w ± z²) large.
    for k in 7..14u32 {
        for _ in 0..8 {
            let z = 2 * rng.gen_range(-400i64..400) + 1;
            let u = 2 * rng.gen_range(-50i64..50) + 1;
            for s in [1i64, -1] {
                let w = -s * z * z + u * (1 << k);
                if int(z).gcd(&int(w)).is_one() {
                    out.push((int(z), int(w)));
                }
            }
        }
    }
    out
}

fn c3_table1() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let s = table1_samples();
    o.check(s.len() >= 500, format!("{} samples", s.len()));
    let two = int(2);
    let results: Vec<([u32; 4], bool)> = s
        .par_iter()
        .map(|(z, w)| {
            let prof = classify_table1(z, w).unwrap();
            let got: Vec<u32> = GAMMAS
                .iter()
                .map(|&g| tate_exponent(&frey_model_a1(z, w, g), &two).unwrap().0)
                .collect();
            let agree = got[..] == prof.exponents[..];
            (prof.exponents, agree)
        })
        .collect();
    let bad = results.iter().filter(|r| !r.1).count();
    let profiles: BTreeSet<&[u32; 4]> = results.iter().map(|r| &r.0).collect();
    o.check(bad == 0, format!("{bad} disagreements"));
    o.notes
        .push(format!("{} distinct exponent profiles", profiles.len()));
    o.within(start, Duration::from_secs(60));
    o
}

fn c4_cocycles() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    for c in [case_d125(), case_dm17()] {
        for line in verify_case(&c).unwrap() {
            o.check(line.pass, format!("{}: {}", c.name, line.name));
        }
    }
    o.within(start, Duration::from_secs(5));
    o
}

fn c5_d125_a1() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let out = run_case(&table3_case("i").unwrap(), &PipelineOptions::default()).unwrap();
    let levels: BTreeSet<u64> = out
        .statement
        .classes
        .iter()
        .flat_map(|c| c.levels.iter().copied())
        .collect();
    o.check(
        levels == BTreeSet::from([5, 10]),
        format!("levels {levels:?}"),
    );
    o.check(
        levels.iter().all(|&n| genus_x0(n).unwrap() == 0),
        "genus X0(N) = 0",
    );
    o.check(
        out.status == CaseStatus::Pass,
        format!("row (i): got \"{}\"", out.statement.row),
    );
    o.within(start, Duration::from_secs(10));
    o
}

fn load(ctx: &EliminationContext) -> (Vec<NewformRecord>, Vec<u64>) {
    load_context_newforms(ctx).unwrap()
}

fn c6_dm17_a1() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let ctx = elimination_case("dm17", true).unwrap();
    let (forms, _) = load(&ctx);
    let r = eliminate(&ctx, &forms).unwrap();
    o.check(
        r.survivors_above(3).is_empty(),
        "constrained: no survivors for 3 < l <= 1000",
    );
    let ctx = elimination_case("dm17", false).unwrap();
    let (forms, _) = load(&ctx);
    let r = eliminate(&ctx, &forms).unwrap();
    let at_4352: Vec<_> = r.newforms.iter().filter(|n| n.level == 4352).collect();
    let gone = at_4352
        .iter()
        .filter(|n| n.survivors.iter().all(|&l| l <= 5))
        .count();
    o.check(
        at_4352.len() == 33 && gone == 25,
        format!(
            "level 4352: {gone} of {} eliminated for l > 5 (expected 25 of 33)",
            at_4352.len()
        ),
    );
    o.within(start, Duration::from_secs(300));
    o
}

fn c7_d125_qcurve() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let ctx = context_d125_qcurve(&[]);
    let (forms, missing) = load(&ctx);
    if !missing.is_empty() {
        o.skip(format!("levels {missing:?}"));
        return o;
    }
    // Coefficient fields contain ℚ(i), the field of the order-4 character.
    let dims: usize = forms.iter().map(|f| f.degree() / 2).sum();
    o.check(
        forms.len() == 144 || dims == 144,
        format!(
            "144 newforms: {} Galois orbits, dimension {dims}",
            forms.len()
        ),
    );
    let r = eliminate(&ctx, &forms).unwrap();
    let n = r.survivors_above(17).len();
    o.check(n == 24, format!("{n} survivors for l > 17 (expected 24)"));
    let ctx = elimination_case("d125T", true).unwrap();
    let r = eliminate(&ctx, &forms).unwrap();
    let open: BTreeSet<u64> = r
        .surviving_exponents()
        .into_iter()
        .filter(|&l| l > 3)
        .collect();
    o.check(
        open.iter().all(|&l| l == 11),
        format!("with 11 | B open exponents > 3: {open:?}"),
    );
    let out = run_case(&table3_case("ii").unwrap(), &PipelineOptions::default()).unwrap();
    o.check(
        out.status == CaseStatus::Pass,
        format!("row (ii): got \"{}\"", out.statement.row),
    );
    o.within(start, Duration::from_secs(600));
    o
}

/// A rational form at level 2⁵·17² whose traces equal those of E_{−17,0,1}
/// (the point T) wherever the Frobenius order allows a rational a_p.
fn synthetic_t_form(ctx: &EliminationContext) -> (NewformRecord, usize, usize) {
    let q = NumberField::from_i64("Q", &[0, 1]).unwrap();
    let mut ap = BTreeMap::new();
    let (mut ord1, mut ord2) = (0, 0);
    for &p in &ctx.primes {
        let pair = ResidualPair {
            z: 0,
            w: 1,
            reduction: Reduction::Good,
        };
        let c = ctx.field.twist_character(p).unwrap();
        let r = ctx.field.frobenius_order(p).unwrap();
        let t = &pair_traces(p, &pair, ctx).unwrap()[0] * int(c);
        let a = match r {
            1 => Some(t),
            2 => integer_nth_root(&(t + int(2 * p as i64)), 2),
            _ => None,
        };
        if let Some(a) = a {
            if r == 1 {
                ord1 += 1;
            } else {
                ord2 += 1;
            }
            ap.insert(p, NfElem::from_rat(&q, Rat::from_integer(a)));
        }
    }
    let character = Character {
        modulus: 1,
        order: 1,
        values: BTreeMap::new(),
    };
    let rec = NewformRecord {
        level: 9248,
        weight: 2,
        character,
        field: q,
        ap,
        label: "synthetic-T".into(),
        cm: None,
    };
    (rec, ord1, ord2)
}

fn c8_dm17_qcurve() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let ctx = context_dm17_qcurve(&[]);
    let (synth, ord1, ord2) = synthetic_t_form(&ctx);
    o.check(
        ord1 > 0 && ord2 > 0,
        format!("synthetic form: {ord1} order-1 and {ord2} order-2 primes"),
    );
    let mut shifted = synth.clone();
    shifted.label = "synthetic-shifted".into();
    let one = NfElem::one(&synth.field);
    for v in shifted.ap.values_mut() {
        *v = v.add(&one.scale(&rat(2, 1)));
    }
    let forms = vec![synth, shifted];
    let r = eliminate(&ctx, &forms).unwrap();
    o.check(
        r.newforms[0].survivors == ctx.exponents(),
        "trace-matching form survives every l",
    );
    o.check(
        r.survivors_above(100).len() == 1,
        "shifted form eliminated for l > 100",
    );
    o.check(
        verify_certificates(&ctx, &forms, &r).unwrap(),
        "certificates verify",
    );

    let (real, missing) = load(&ctx);
    if missing.is_empty() {
        let r = eliminate(&ctx, &real).unwrap();
        let n = r.survivors_above(31).len();
        o.check(n == 10, format!("{n} survivors for l > 31 (expected 10)"));
    } else {
        o.skip(format!("published counts need levels {missing:?}"));
    }
    let ctx7 = elimination_case("dm17T", true).unwrap();
    let r = eliminate(&ctx7, &real).unwrap();
    o.check(
        r.survivors_above(17).is_empty(),
        "with 7 | B no survivors above 17 at the available level",
    );
    o.within(start, Duration::from_secs(300));
    o
}

fn perfect_power(b: &Int) -> bool {
    if *b <= Int::one() {
        return false;
    }
    (2..=b.bits() as u32).any(|l| integer_nth_root(b, l).is_some())
}

fn c9_perfect_powers() -> Outcome {
    let mut o = Outcome::new();
    let d = int(-17);
    let e = ed_curve(&d).unwrap();
    let (p, q, t) = (
        pt(rat(-4, 1), rat(2, 1)),
        pt(rat(-1, 1), rat(4, 1)),
        torsion_t(),
    );
    let comb = |m: i64, n: i64, with_t: bool| -> CurvePoint {
        let a = e.scalar_mul(m, &p).unwrap();
        let b = e.scalar_mul(n, &q).unwrap();
        let s = e.add(&a, &b).unwrap();
        if with_t {
            e.add(&s, &t).unwrap()
        } else {
            s
        }
    };
    let classes = [
        (1, 0, false),
        (0, 1, false),
        (2, 0, false),
        (0, 2, false),
        (1, 0, true),
        (0, 1, true),
        (0, 2, true),
        (1, 1, false),
        (1, -1, false),
        (2, -2, false),
        (1, -1, true),
        (1, -2, true),
    ];
    let mut hits = Vec::new();
    let mut count = 0;
    for (m, n, with_t) in classes {
        for s in [1, -1] {
            // −X + T = −(X + T) on this curve, so the sign covers both readings.
            let pt_ = comb(s * m, s * n, with_t);
            let Point::Affine(..) = pt_ else { continue };
            count += 1;
            let (_, b, _) = abc(&pt_).unwrap();
            if perfect_power(&b) && s == 1 {
                hits.push(b.to_string());
            }
        }
    }
    hits.sort();
    o.check(count == 24, format!("{count} points"));
    o.check(hits == ["4", "4", "9"], format!("perfect powers {hits:?}"));
    o
}

fn c10_descent() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let cs = descent_curves_d125(2).unwrap();
    o.check(
        cs.iter().all(|c| genus_hyper(c).unwrap() == 3),
        "genus 3 for l = 2",
    );
    let c2 = local_points_exist(&cs[1], 2).unwrap().decided();
    o.check(c2 == Some(false), format!("{}: no 2-adic points", cs[1]));
    o.check(verify_quotient_identity(), "quartic -> elliptic identity");
    o.within(start, Duration::from_secs(30));
    o
}

fn c11_properties() -> Outcome {
    let mut o = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut nonzero = || loop {
        let x: i64 = rng.gen_range(-300..300);
        if x != 0 {
            return int(x);
        }
    };
    let product_ok = (0..300).all(|_| {
        let (a, b) = (nonzero(), nonzero());
        relevant_places(&a, &b)
            .iter()
            .map(|v| hilbert_symbol(&a, &b, v))
            .product::<i32>()
            == 1
    });
    o.check(product_ok, "Hilbert product formula");

    let mut norm_ok = true;
    for d in [-1i64, 2, -2, 3, 5, -17] {
        for a in -50i64..=50 {
            if a != 0 && is_norm_from(&int(a), &int(d)).unwrap() != norm_search(a, d, 40) {
                norm_ok = false;
            }
        }
    }
    o.check(norm_ok, "is_norm_from vs brute force, |a| <= 50");

    let mut hom_ok = true;
    let mut assoc_ok = true;
    for d in [-17i64, 125, -2] {
        let d = int(d);
        let e = ed_curve(&d).unwrap();
        let gens: Vec<CurvePoint> = match d.to_i64().unwrap() {
            -17 => vec![
                pt(rat(-4, 1), rat(2, 1)),
                pt(rat(-1, 1), rat(4, 1)),
                torsion_t(),
            ],
            125 => vec![pt(rat(121, 4), rat(1419, 8)), torsion_t()],
            _ => vec![pt(rat(-1, 1), rat(1, 1)), torsion_t()],
        };
        let pts: Vec<CurvePoint> = (0..8)
            .map(|i| {
                let mut x = Point::Infinity;
                for (k, g) in gens.iter().enumerate() {
                    let m = ((i * 7 + k * 3) % 5) as i64 - 2;
                    x = e.add(&x, &e.scalar_mul(m, g).unwrap()).unwrap();
                }
                x
            })
            .collect();
        for x in &pts {
            for y in &pts {
                let s = e.add(x, y).unwrap();
                for delta in [1, -1] {
                    let lhs = alpha_delta(&s, delta, &d).unwrap();
                    let rhs = alpha_delta(x, delta, &d)
                        .unwrap()
                        .mul(&alpha_delta(y, delta, &d).unwrap());
                    hom_ok &= lhs.same_as(&rhs);
                }
                for z in pts.iter().take(3) {
                    let l = e.add(&s, z).unwrap();
                    let r = e.add(x, &e.add(y, z).unwrap()).unwrap();
                    assoc_ok &= l == r;
                }
            }
        }
    }
    o.check(hom_ok, "alpha_delta is a homomorphism");
    o.check(assoc_ok, "group law associativity");

    let mut hasse_ok = true;
    for name in ["dm17", "d125T", "dm17T"] {
        let ctx = elimination_case(name, false).unwrap();
        for &p in ctx.primes.iter().take(6) {
            let r = ctx.field.frobenius_order(p).unwrap();
            let q = int(p as i64).pow(r);
            for pair in residual_frey_set(p, &ctx).unwrap().iter().step_by(7) {
                if pair.reduction != Reduction::Good {
                    continue;
                }
                for t in pair_traces(p, pair, &ctx).unwrap() {
                    hasse_ok &= &t * &t <= int(4) * &q;
                }
            }
        }
        for f in load(&ctx).0.iter().filter(|f| f.is_rational()) {
            for (p, a) in &f.ap {
                let a = a.as_rational().unwrap();
                hasse_ok &= &a * &a <= Rat::from_integer(int(4 * *p as i64));
            }
        }
    }
    o.check(hasse_ok, "Hasse bound on residual and newform traces");

    let mut sound = true;
    let mut matched = 0;
    for two_divides_b in [false, true] {
        let ctx = context_a1(&int(-17), two_divides_b, &[]).unwrap();
        let (forms, _) = load(&ctx);
        let r = eliminate(&ctx, &forms).unwrap();
        for (z, w) in [(12, 145), (15, 353), (23, 495)] {
            for f in matching_forms(&ctx, &forms, z, w) {
                matched += 1;
                let n = r.newforms.iter().find(|n| n.label == f.label).unwrap();
                sound &= n.survivors == ctx.exponents();
            }
        }
    }
    o.check(
        sound && matched > 0,
        format!("{matched} pseudo-solution newforms never eliminated"),
    );
    o
}

/// Newforms whose Frobenius data at every auxiliary prime equals that of E_{a,z,w}.
fn matching_forms<'a>(
    ctx: &EliminationContext,
    forms: &'a [NewformRecord],
    z: i64,
    w: i64,
) -> Vec<&'a NewformRecord> {
    forms
        .iter()
        .filter(|f| {
            let spec = ctx.levels.iter().find(|s| s.level == f.level).unwrap();
            ctx.primes.iter().all(|&p| {
                let pi = int(p as i64);
                let (zp, wp) = (int(z).mod_floor(&pi), int(w).mod_floor(&pi));
                if (&wp * &wp - &ctx.a * zp.pow(4)).mod_floor(&pi).is_zero() {
                    return true;
                }
                let pair = ResidualPair {
                    z: zp.to_u64().unwrap(),
                    w: wp.to_u64().unwrap(),
                    reduction: Reduction::Good,
                };
                let Some(a) = f.ap[&p].as_rational() else {
                    return false;
                };
                let traces = pair_traces(p, &pair, ctx).unwrap();
                spec.twists.iter().any(|&g| {
                    traces
                        .iter()
                        .any(|t| Rat::from_integer(t * int(legendre(g, p))) == a)
                })
            })
        })
        .collect()
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("EDS identities", c1_eds),
        ("Frey identities", c2_frey),
        ("Table-1 vs Tate", c3_table1),
        ("cocycle fixtures", c4_cocycles),
        ("D=125 a=1 pipeline", c5_d125_a1),
        ("D=-17 a=1 elimination", c6_dm17_a1),
        ("D=125 Q-curve elimination", c7_d125_qcurve),
        ("D=-17 Q-curve elimination", c8_dm17_qcurve),
        ("perfect-power scan", c9_perfect_powers),
        ("descent", c10_descent),
        ("property suites", c11_properties),
    ];
    let only: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    for (i, (name, f)) in criteria.iter().enumerate() {
        let n = i + 1;
        if only.is_some_and(|k| k != n) {
            continue;
        }
        let o = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Outcome {
                status: Status::Fail,
                notes: vec![format!("panicked: {msg}")],
            }
        });
        println!("criterion {n} ({name}): {}", o.status);
        for note in &o.notes {
            println!("    {note}");
        }
    }
}
