//! Irreducibility of the mod-l representations attached to the Frey curves.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::int::{
    factor, int, is_prime_u64, is_square, legendre_big, prime_divisors, rat, Int, Rat,
};
use crate::arith::poly::{q_eval, QPoly};
use crate::arith::quad::QuadElem;
use crate::curve::{pt, CurvePoint};
use crate::error::{Error, Result};
use crate::frey::{decompose, sqrt_a, FreyData};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Irreducible,
    Unknown,
    ExcludedPoint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IrredVerdict {
    pub l: u64,
    pub verdict: Verdict,
    pub reason: String,
}

impl IrredVerdict {
    pub fn new(l: u64, verdict: Verdict, reason: impl Into<String>) -> Self {
        IrredVerdict {
            l,
            verdict,
            reason: reason.into(),
        }
    }

    pub fn is_irreducible(&self) -> bool {
        self.verdict == Verdict::Irreducible
    }
}

/// A place of ℚ: a prime, or the real place.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Place {
    Real,
    Prime(Int),
}

/// Hilbert symbol (a, b)_v for nonzero integers.
pub fn hilbert_symbol(a: &Int, b: &Int, v: &Place) -> i32 {
    assert!(!a.is_zero() && !b.is_zero(), "Hilbert symbol of zero");
    let p = match v {
        Place::Real => {
            return if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Prime(p) => p,
    };
    let split = |x: &Int| {
        let mut x = x.clone();
        let mut k = 0u32;
        while (&x % p).is_zero() {
            x /= p;
            k += 1;
        }
        (k, x)
    };
    let (al, u) = split(a);
    let (be, w) = split(b);
    if *p == Int::from(2) {
        let m8 = |x: &Int| x.mod_floor(&Int::from(8)).to_u64().unwrap();
        let eps = |x: u64| ((x - 1) / 2) % 2;
        let omega = |x: u64| ((x * x - 1) / 8) % 2;
        let (u8_, w8) = (m8(&u), m8(&w));
        let e = eps(u8_) * eps(w8) + u64::from(al) * omega(w8) + u64::from(be) * omega(u8_);
        if e % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        let pu = p.to_u64().expect("prime fits in u64");
        let mut s = 1i32;
        if (al * be) % 2 == 1 && pu % 4 == 3 {
            s = -s;
        }
        if be % 2 == 1 {
            s *= legendre_big(&u, pu) as i32;
        }
        if al % 2 == 1 {
            s *= legendre_big(&w, pu) as i32;
        }
        s
    }
}

/// The places where (a, b)_v can be −1.
pub fn relevant_places(a: &Int, b: &Int) -> Vec<Place> {
    let mut ps = prime_divisors(&(a * b * Int::from(2)).abs());
    ps.sort();
    ps.dedup();
    std::iter::once(Place::Real)
        .chain(ps.into_iter().map(Place::Prime))
        .collect()
}

/// Whether a = x² − d y² has a rational solution, i.e. a is a norm from ℚ(√d).
pub fn is_norm_from(a: &Int, d: &Int) -> Result<bool> {
    if a.is_zero() || d.is_zero() {
        return Err(Error::Precondition("a and d must be nonzero".into()));
    }
    if is_square(d) {
        return Ok(true);
    }
    Ok(relevant_places(a, d)
        .iter()
        .all(|v| hilbert_symbol(a, d, v) == 1))
}

/// Bounded search for X² − dY² = aZ² with Z ≠ 0; a positive hit proves solvability.
pub fn norm_search(a: i64, d: i64, bound: i64) -> bool {
    for z in 1..=bound {
        for y in 0..=bound {
            let t = a * z * z + d * y * y;
            if t >= 0 {
                let x = (t as f64).sqrt().round() as i64;
                if (x - 1..=x + 1).any(|x| x >= 0 && x * x == t) {
                    return true;
                }
            }
        }
    }
    false
}

/// Frey ℚ-curve criteria for a non-square: l = 3, 5 via norms, l = 7, 13
/// always, l = 11 or l > 13 when a prime > 3 is known to divide B.
pub fn frey_irreducible(l: u64, a: &Int, known_b_primes: &[Int]) -> Result<IrredVerdict> {
    if l < 3 || !is_prime_u64(l) {
        return Err(Error::Precondition(format!("l = {l} must be an odd prime")));
    }
    if is_square(a) {
        return Ok(IrredVerdict::new(
            l,
            Verdict::Unknown,
            "a is a square; the a = 1 theorem applies instead",
        ));
    }
    let three = Int::from(3);
    Ok(match l {
        3 | 5 => {
            let d = if l == 3 { int(-2) } else { int(-1) };
            if is_norm_from(a, &d)? {
                IrredVerdict::new(
                    l,
                    Verdict::Unknown,
                    format!("{a} is a norm from Q(sqrt({d}))"),
                )
            } else {
                IrredVerdict::new(
                    l,
                    Verdict::Irreducible,
                    format!("{a} is not a norm from Q(sqrt({d}))"),
                )
            }
        }
        7 | 13 => IrredVerdict::new(
            l,
            Verdict::Irreducible,
            "no non-integral exceptional j-invariant with B an l-th power",
        ),
        _ => match known_b_primes.iter().find(|p| **p > three) {
            Some(p) => IrredVerdict::new(
                l,
                Verdict::Irreducible,
                format!("{p} | B gives potentially multiplicative reduction"),
            ),
            None => IrredVerdict::new(l, Verdict::Unknown, "no prime > 3 known to divide B"),
        },
    })
}

/// frey_irreducible with the primes of B taken from the decomposition.
pub fn frey_irreducible_data(l: u64, fd: &FreyData) -> Result<IrredVerdict> {
    if fd.b.abs().is_one() {
        return Err(Error::Precondition("B = ±1".into()));
    }
    let ps: Vec<Int> = factor(&fd.b.abs()).into_iter().map(|(p, _)| p).collect();
    frey_irreducible(l, &fd.a, &ps)
}

/// j_{1,z,w} = 2⁶(3t − 5)³ / ((t − 1)(t + 1)²) with t = w/z².
pub fn j_a1(t: &Rat) -> Option<Rat> {
    let one = Rat::one();
    let den = (t - &one) * (t + &one) * (t + &one);
    if den.is_zero() {
        return None;
    }
    let n = t * rat(3, 1) - rat(5, 1);
    Some(rat(64, 1) * &n * &n * &n / den)
}

/// Non-cuspidal j-invariants of rational points on X₀(14).
pub const X0_14_J: [i64; 2] = [-3375, 16581375];

/// Rational t with j_{1,z,w}(t) ∈ {∞, −3375, 16581375}.
pub fn l7_exceptional_t() -> Vec<Rat> {
    let mut out = vec![Rat::one(), -Rat::one()];
    for j0 in X0_14_J {
        // 64(3t − 5)³ − j0 (t − 1)(t + 1)² = 0.
        let j0 = Int::from(j0);
        let c = [
            Int::from(-8000) + &j0,
            Int::from(14400) + &j0,
            Int::from(-8640) - &j0,
            Int::from(1728) - &j0,
        ];
        out.extend(rational_roots(&c));
    }
    out.sort();
    out.dedup();
    out
}

/// Rational roots of an integer polynomial (coefficients low to high).
fn rational_roots(c: &[Int]) -> Vec<Rat> {
    let q: QPoly = c.iter().map(|x| Rat::from_integer(x.clone())).collect();
    let lead = c.last().unwrap().abs();
    let c0 = c.iter().position(|x| !x.is_zero()).unwrap();
    let mut out = Vec::new();
    if c0 > 0 {
        out.push(Rat::zero());
    }
    let konst = c[c0].abs();
    let divs = |n: &Int| -> Vec<Int> {
        let mut ds = vec![Int::one()];
        for (p, e) in factor(n) {
            let cur = ds.clone();
            for k in 1..=e {
                ds.extend(cur.iter().map(|d| d * p.pow(k)));
            }
        }
        ds
    };
    for num in divs(&konst) {
        for den in divs(&lead) {
            for s in [1i64, -1] {
                let r = Rat::new(&num * Int::from(s), den.clone());
                if q_eval(&q, &r).is_zero() && !out.contains(&r) {
                    out.push(r);
                }
            }
        }
    }
    out
}

/// The a = 1 theorem: l > 7 always; l = 7 by the t-analysis; l = 3, 5 by Table 2.
pub fn a1_irreducible(l: u64, z: &Int, w: &Int, d: &Int) -> Result<IrredVerdict> {
    if l < 3 || !is_prime_u64(l) {
        return Err(Error::Precondition(format!("l = {l} must be an odd prime")));
    }
    let z2 = z * z;
    if w * w == &z2 * &z2 || z.is_zero() {
        return Err(Error::Precondition("w² = z⁴ means B = 0".into()));
    }
    if l > 7 {
        return Ok(IrredVerdict::new(
            l,
            Verdict::Irreducible,
            "X0(2l) has no non-cuspidal rational points for l > 7",
        ));
    }
    if l == 7 {
        let t = Rat::new(w.clone(), z2);
        if l7_exceptional_t().contains(&t) {
            return Ok(IrredVerdict::new(
                l,
                Verdict::ExcludedPoint,
                format!("t = {t} meets X0(14)"),
            ));
        }
        return Ok(IrredVerdict::new(
            l,
            Verdict::Irreducible,
            "j(t) avoids X0(14): exceptional t = ±1, ±65/63 need a square denominator",
        ));
    }
    let Some(points) = table2(d, l) else {
        return Ok(IrredVerdict::new(
            l,
            Verdict::Unknown,
            format!("no Table 2 entry for D = {d}"),
        ));
    };
    for p in points {
        let fd = decompose(d, &p)?;
        if fd.a.is_one() && fd.w == *w && fd.z.abs() == z.abs() {
            return Ok(IrredVerdict::new(
                l,
                Verdict::ExcludedPoint,
                format!("(z, w) comes from a listed point for D = {d}"),
            ));
        }
    }
    Ok(IrredVerdict::new(
        l,
        Verdict::Irreducible,
        format!("not a listed point for D = {d}"),
    ))
}

/// a1_irreducible for the Frey curve of a point on E_D.
pub fn a1_irreducible_point(l: u64, d: &Int, p: &CurvePoint) -> Result<IrredVerdict> {
    let fd = decompose(d, p)?;
    if !fd.a.is_one() {
        return Err(Error::Precondition(format!("a = {} is not 1", fd.a)));
    }
    a1_irreducible(l, &fd.z, &fd.w, d)
}

/// Points of E_D(ℚ) other than O left open for l = 3, 5, with their negatives.
pub fn table2(d: &Int, l: u64) -> Option<Vec<CurvePoint>> {
    let listed: Vec<(i64, i64, i64, i64)> = match (d.to_i64()?, l) {
        (-2 | -17, 3 | 5) | (3, 3) | (125, 5) => vec![],
        (3, 5) => vec![(1, 1, 2, 1), (121, 9, 1342, 27)],
        (125, 3) => vec![(121, 4, 1419, 8)],
        _ => return None,
    };
    let mut out = Vec::new();
    for (xn, xd, yn, yd) in listed {
        out.push(pt(rat(xn, xd), rat(yn, yd)));
        out.push(pt(rat(xn, xd), rat(-yn, yd)));
    }
    Some(out)
}

fn poly2(x: &Rat, y: &Rat, coeffs: &[i64]) -> Rat {
    // Σ c_i x^{n−i} y^i.
    let n = coeffs.len() - 1;
    coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| rat(*c, 1) * x.pow((n - i) as i32) * y.pow(i as i32))
        .fold(Rat::zero(), |a, b| a + b)
}

/// The j-invariants of Q(√a)-curves with reducible mod-l image for l = 3, 5,
/// evaluated at a point of x² + 2y² = a (l = 3) or x² + y² = a (l = 5).
pub fn reducibility_locus_j(l: u64, x: &Rat, y: &Rat, a: &Int) -> Result<QuadElem> {
    let ar = Rat::from_integer(a.clone());
    let conic = match l {
        3 => x * x + rat(2, 1) * y * y,
        5 => x * x + y * y,
        _ => return Err(Error::Precondition("l must be 3 or 5".into())),
    };
    if conic != ar {
        return Err(Error::Invalid(format!(
            "({x}, {y}) is not on the conic for l = {l}"
        )));
    }
    let (lin, pow, rat_part, irr_part) = if l == 3 {
        let lin = rat(4, 1) * x - rat(7, 1) * y;
        let main = poly2(
            x,
            y,
            &[
                512, -6016, 78176, 987032, 30371282, 97063160, 226082780, 227965064, 291927773,
            ],
        );
        let f1 = x - rat(22, 1) * y;
        let f2 = x + rat(5, 1) * y;
        let f3 = poly2(x, y, &[256, -64, 65616, 80372, 187783]);
        (lin, 6, main, f1 * &f2 * &f2 * f3)
    } else {
        let lin = rat(4, 1) * x - rat(3, 1) * y;
        let main = poly2(
            x,
            y,
            &[
                131072,
                -1015808,
                15802368,
                303943680,
                8502563840,
                41661192832,
                122507172512,
                219682233088,
                344561617040,
                329235309720,
                342028231098,
                150869431408,
                111226255277,
            ],
        );
        let f1 = rat(2, 1) * x + rat(11, 1) * y;
        let f2 = poly2(x, y, &[4, -84, -37, -122]);
        let f3 = poly2(
            x,
            y,
            &[4096, 7168, 1058560, 2349440, 4841440, 2594668, 3767779],
        );
        (lin, 10, main, &f1 * &f1 * f2 * f3)
    };
    if y.is_zero() || lin.is_zero() {
        return Err(Error::Invalid("pole of the locus formula".into()));
    }
    let pref = rat(64, 1) / (y * y * lin.pow(pow));
    let s = sqrt_a(a);
    let d = s.d.clone();
    let val = &QuadElem::from_rat(&d, rat_part) + &s.scale(&(rat(2, 1) * irr_part));
    Ok(val.scale(&pref))
}

/// Exceptional j-invariants for l = 7 and l = 13 as (rational part, coefficient, radicand, denominator).
pub fn exceptional_j_constants(l: u64) -> Vec<(i64, i64, i64, i64)> {
    match l {
        7 => vec![
            (-3375, 0, -7, 1),
            (-10529, 16471, -7, 8),
            (-10529, -16471, -7, 8),
            (56437681, 1875341, -7, 32768),
            (56437681, -1875341, -7, 32768),
        ],
        13 => vec![
            (3448440000, 956448000, 13, 1),
            (3448440000, -956448000, 13, 1),
        ],
        _ => vec![],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norms() {
        assert!(is_norm_from(&int(125), &int(-1)).unwrap());
        assert!(!is_norm_from(&int(-1), &int(-2)).unwrap());
        assert!(!is_norm_from(&int(3), &int(-1)).unwrap());
        assert!(is_norm_from(&int(3), &int(-2)).unwrap());
    }

    #[test]
    fn norms_vs_search() {
        for d in [-1i64, -2] {
            for a in -50i64..=50 {
                if a == 0 {
                    continue;
                }
                assert_eq!(
                    is_norm_from(&int(a), &int(d)).unwrap(),
                    norm_search(a, d, 60),
                    "a={a} d={d}"
                );
            }
        }
    }

    #[test]
    fn product_formula() {
        for a in -40i64..40 {
            for b in -40i64..40 {
                if a == 0 || b == 0 {
                    continue;
                }
                let (a, b) = (int(a), int(b));
                let p: i32 = relevant_places(&a, &b)
                    .iter()
                    .map(|v| hilbert_symbol(&a, &b, v))
                    .product();
                assert_eq!(p, 1, "({a},{b})");
            }
        }
    }

    #[test]
    fn corollary_cases() {
        let v = frey_irreducible(5, &int(125), &[int(2), int(11)]).unwrap();
        assert_eq!(v.verdict, Verdict::Unknown);
        let v = frey_irreducible(19, &int(-1), &[int(7)]).unwrap();
        assert!(v.is_irreducible());
        let v = frey_irreducible(19, &int(-1), &[int(2), int(3)]).unwrap();
        assert_eq!(v.verdict, Verdict::Unknown);
        assert!(frey_irreducible(13, &int(125), &[])
            .unwrap()
            .is_irreducible());
        assert!(frey_irreducible(7, &int(-1), &[]).unwrap().is_irreducible());
    }

    #[test]
    fn l7_t_values() {
        let ts = l7_exceptional_t();
        assert_eq!(ts, vec![rat(-65, 63), rat(-1, 1), rat(1, 1), rat(65, 63)]);
        for t in &ts {
            // Only ±1 have square denominators, and they give B = 0.
            if is_square(t.denom()) {
                assert!(t.abs().is_one());
            }
            if !t.abs().is_one() {
                let j = j_a1(t).unwrap();
                assert!(X0_14_J.iter().any(|&v| j == rat(v, 1)));
            }
        }
        let v = a1_irreducible(7, &int(11), &int(129), &int(125)).unwrap();
        assert!(v.is_irreducible());
        assert!(a1_irreducible(7, &int(1), &int(1), &int(1)).is_err());
    }

    #[test]
    fn table2_points() {
        let v = a1_irreducible_point(3, &int(125), &pt(rat(121, 4), rat(1419, 8))).unwrap();
        assert_eq!(v.verdict, Verdict::ExcludedPoint);
        for y in [2, -2] {
            let v = a1_irreducible_point(5, &int(3), &pt(rat(1, 1), rat(y, 1))).unwrap();
            assert_eq!(v.verdict, Verdict::ExcludedPoint);
        }
        let v = a1_irreducible_point(5, &int(125), &pt(rat(121, 4), rat(1419, 8))).unwrap();
        assert!(v.is_irreducible());
        assert_eq!(
            a1_irreducible(3, &int(1), &int(3), &int(7))
                .unwrap()
                .verdict,
            Verdict::Unknown
        );
    }

    #[test]
    fn locus_formulas() {
        // 125 = 11² + 2² and 3 = 1² + 2·1².
        let j5 = reducibility_locus_j(5, &rat(11, 1), &rat(2, 1), &int(125)).unwrap();
        let j5c = reducibility_locus_j(5, &rat(11, 1), &rat(-2, 1), &int(125)).unwrap();
        assert!(!j5.is_rational() && j5 != j5c);
        let j3 = reducibility_locus_j(3, &rat(1, 1), &rat(1, 1), &int(3)).unwrap();
        assert!(!j3.is_rational());
        assert!(reducibility_locus_j(3, &rat(1, 1), &rat(1, 1), &int(4)).is_err());
        assert!(exceptional_j_constants(7)
            .iter()
            .any(|c| c.0 == -3375 && c.1 == 0));
        assert!(exceptional_j_constants(13).contains(&(3448440000, 956448000, 13, 1)));
    }
}
