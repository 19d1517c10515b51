//! Elliptic divisibility sequences: x(mP) = A_m/B_m², y(mP) = C_m/B_m³.

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::int::{integer_nth_root, prime_divisors, Int, Rat};
use crate::curve::{ed_curve, CurvePoint, Point};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdsEntry {
    pub m: i64,
    pub a: Int,
    pub b: Int,
    pub c: Int,
    pub point: CurvePoint,
}

/// A prime q with q | B_n, hence q | B_m for every multiple m of n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivisorConstraint {
    pub q: u64,
    pub n: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PowerHit {
    pub m: i64,
    pub l: u32,
    pub root: String,
}

/// (A, B, C) for an affine rational point with x = A/B², y = C/B³.
pub fn abc(p: &CurvePoint) -> Option<(Int, Int, Int)> {
    let Point::Affine(x, y) = p else { return None };
    let b = integer_nth_root(x.denom(), 2)?;
    let c = y * Rat::from_integer(b.pow(3));
    if !c.is_integer() {
        return None;
    }
    Some((x.numer().clone(), b, c.to_integer()))
}

pub fn entry(m: i64, p: &CurvePoint) -> Result<EdsEntry> {
    let (a, b, c) =
        abc(p).ok_or_else(|| Error::Invalid("point has no EDS denominator form".into()))?;
    Ok(EdsEntry {
        m,
        a,
        b,
        c,
        point: p.clone(),
    })
}

/// Entries for m = 1..=max_index of the multiples of P on E_D.
pub fn eds_sequence(d: &Int, p: &CurvePoint, max_index: usize) -> Result<Vec<EdsEntry>> {
    let e = ed_curve(d)?;
    if !e.contains(p) {
        return Err(Error::NotOnCurve);
    }
    let mut q = Point::Infinity;
    for _ in 0..12 {
        q = e.add_unchecked(&q, p);
        if q.is_infinity() {
            return Err(Error::Torsion);
        }
    }
    let mut out = Vec::with_capacity(max_index);
    let mut cur = Point::Infinity;
    for m in 1..=max_index as i64 {
        cur = e.add_unchecked(&cur, p);
        out.push(entry(m, &cur)?);
    }
    Ok(out)
}

/// B_n | B_m whenever n | m, over the indices present.
pub fn check_divisibility(entries: &[EdsEntry]) -> bool {
    entries.iter().all(|em| {
        entries
            .iter()
            .filter(|en| en.m != 0 && em.m % en.m == 0)
            .all(|en| (&em.b % &en.b).is_zero())
    })
}

/// C² = A³ + D·A·B⁴, gcd(A, B) = gcd(C, B) = 1.
pub fn check_identities(d: &Int, entries: &[EdsEntry]) -> bool {
    entries.iter().all(|e| {
        let b4 = e.b.pow(4);
        &e.c * &e.c == e.a.pow(3) + d * &e.a * b4
            && e.a.gcd(&e.b).is_one()
            && e.c.gcd(&e.b).is_one()
    })
}

/// Entries whose B is an l-th power greater than 1.
pub fn find_perfect_powers(entries: &[EdsEntry], ls: &[u32]) -> Vec<PowerHit> {
    let mut hits = Vec::new();
    for e in entries {
        if e.b <= Int::one() {
            continue;
        }
        for &l in ls {
            if let Some(r) = integer_nth_root(&e.b, l) {
                hits.push(PowerHit {
                    m: e.m,
                    l,
                    root: r.to_string(),
                });
            }
        }
    }
    hits
}

/// Divisor constraints from B_n: every prime dividing it.
pub fn constraints_from(e: &EdsEntry) -> Vec<DivisorConstraint> {
    prime_divisors(&e.b)
        .into_iter()
        .filter_map(|q| num_traits::ToPrimitive::to_u64(&q))
        .map(|q| DivisorConstraint { q, n: e.m })
        .collect()
}

/// B_{−m} = B_m: the index is folded to |m|.
pub fn fold_index(m: i64) -> i64 {
    m.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int::{int, rat};
    use crate::curve::pt;
    use num_traits::Signed;

    #[test]
    fn first_terms() {
        let s = eds_sequence(&int(125), &pt(rat(121, 4), rat(1419, 8)), 12).unwrap();
        assert_eq!(s[0].b, int(2));
        assert!(check_divisibility(&s));
        assert!(check_identities(&int(125), &s));
        let mut bad = s.clone();
        bad[3].b += 1;
        assert!(!check_divisibility(&bad));

        let s = eds_sequence(&int(-17), &pt(rat(-153, 49), rat(1632, 343)), 4).unwrap();
        assert_eq!(s[0].b, int(7));
        let s = eds_sequence(
            &int(-17),
            &pt(rat(3568321, 451584), rat(5750178337, 303464448)),
            2,
        )
        .unwrap();
        assert_eq!(s[0].b, int(672));
        let qs: Vec<u64> = constraints_from(&s[0]).iter().map(|c| c.q).collect();
        assert_eq!(qs, vec![2, 3, 7]);

        let s = eds_sequence(&int(-2), &pt(rat(-1, 1), rat(1, 1)), 12).unwrap();
        assert!(check_divisibility(&s));
    }

    #[test]
    fn torsion_rejected() {
        assert_eq!(
            eds_sequence(&int(125), &pt(rat(0, 1), rat(0, 1)), 5),
            Err(Error::Torsion)
        );
        assert!(eds_sequence(&int(125), &pt(rat(1, 1), rat(1, 1)), 5).is_err());
    }

    #[test]
    fn powers() {
        let s = eds_sequence(&int(-17), &pt(rat(-4, 1), rat(2, 1)), 2).unwrap();
        assert_eq!(s[0].b, int(1));
        let hits = find_perfect_powers(&s, &[2, 3]);
        assert_eq!(
            hits,
            vec![PowerHit {
                m: 2,
                l: 2,
                root: "2".into()
            }]
        );
        assert!(s.iter().all(|e| !e.b.is_negative()));
    }
}
