//! Levels of the newforms left after level lowering.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::int::{prime_divisors, Int};
use crate::conductor::table1::classify_table1;
use crate::error::{Error, Result};
use crate::frey::FreyData;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LevelContext {
    /// a = 1 over ℚ with the Table-1 twist; any D.
    RationalA1,
    /// D = 125, a = 125: the ℚ(√5)-curve.
    D125A125,
    /// D = −17, a = −17: the ℚ(√−17)-curve.
    Dm17Am17,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LoweredLevel {
    /// Candidate levels Ñ; more than one when the newform may live at any of them.
    #[serde(serialize_with = "ser_ints")]
    pub levels: Vec<Int>,
    /// Primes S whose conductor exponents survive.
    #[serde(serialize_with = "ser_ints")]
    pub support: Vec<Int>,
    pub case: String,
}

fn ser_ints<S: serde::Serializer>(v: &[Int], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

fn odd_primes(n: &Int) -> Vec<Int> {
    prime_divisors(&n.abs())
        .into_iter()
        .filter(|p| p.is_odd())
        .collect()
}

/// Ñ for the supported (D, a) pairs.
pub fn lowered_level(fd: &FreyData, ctx: LevelContext) -> Result<LoweredLevel> {
    fd.validate()?;
    let d = fd.d();
    let two = Int::from(2);
    match ctx {
        LevelContext::RationalA1 => {
            if !fd.a.is_one() {
                return Err(unsupported(&d, &fd.a));
            }
            let prof = classify_table1(&fd.z, &fd.w)?;
            let f2 = prof.min_exponent();
            // Odd primes of D are multiplicative for the minimal twist.
            let odd = odd_primes(&d);
            let mut support = odd.clone();
            if f2 > 0 {
                support.insert(0, two.clone());
            }
            let n = odd.iter().fold(two.pow(f2), |acc, p| acc * p);
            Ok(LoweredLevel {
                levels: vec![n],
                support,
                case: format!("a=1, γ={}, f₂={f2}", prof.gamma),
            })
        }
        LevelContext::D125A125 => {
            if d != Int::from(125) || fd.a != Int::from(125) {
                return Err(unsupported(&d, &fd.a));
            }
            Ok(LoweredLevel {
                levels: vec![Int::from(1280), Int::from(6400)],
                support: vec![two, Int::from(5)],
                case: "D=125, a=125".into(),
            })
        }
        LevelContext::Dm17Am17 => {
            if d != Int::from(-17) || fd.a != Int::from(-17) {
                return Err(unsupported(&d, &fd.a));
            }
            let s17 = Int::from(289);
            let levels = if fd.w.is_even() {
                vec![Int::from(256) * &s17]
            } else {
                vec![Int::from(32) * &s17, Int::from(64) * &s17]
            };
            let case = if fd.w.is_even() {
                "D=-17, a=-17, 2|w"
            } else {
                "D=-17, a=-17, 2∤w"
            };
            Ok(LoweredLevel {
                levels,
                support: vec![two, Int::from(17)],
                case: case.into(),
            })
        }
    }
}

fn unsupported(d: &Int, a: &Int) -> Error {
    Error::Unsupported(format!(
        "level for D={d}, a={a}; supported: a=1 (any D), D=125 a=125, D=-17 a=-17"
    ))
}

/// Supported context for a decomposition, if any.
pub fn default_context(fd: &FreyData) -> Option<LevelContext> {
    let d = fd.d();
    if fd.a.is_one() {
        Some(LevelContext::RationalA1)
    } else if d == Int::from(125) && fd.a == Int::from(125) {
        Some(LevelContext::D125A125)
    } else if d == Int::from(-17) && fd.a == Int::from(-17) {
        Some(LevelContext::Dm17Am17)
    } else {
        None
    }
}

/// One candidate level for the a = 1 family together with the twists γ that
/// attain its exponent at 2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct A1Level {
    pub level: u64,
    pub f2: u32,
    pub twists: Vec<i64>,
}

/// Minimal exponents at 2 (with their twists) for pairs with ord₂(w² − z⁴) = v.
pub fn a1_exponents_for_valuation(v: u32) -> BTreeMap<u32, BTreeSet<i64>> {
    let mut out: BTreeMap<u32, BTreeSet<i64>> = BTreeMap::new();
    let mut record = |z: i64, w: i64| {
        if let Ok(p) = classify_table1(&Int::from(z), &Int::from(w)) {
            out.entry(p.min_exponent()).or_default().insert(p.gamma);
        }
    };
    if v == 0 {
        for (z, w) in [(2, 1), (2, 3), (4, 1), (4, 3)] {
            record(z, w);
        }
    } else if v >= 3 {
        // One of w ± z² has valuation v − 1, the other valuation 1.
        for z in [1i64, 3, 5, 7] {
            for s in [1i64, -1] {
                for u in (1..32).step_by(2) {
                    record(z, -s * z * z + (1i64 << (v - 1)) * u);
                }
            }
        }
    }
    out
}

/// Levels of the a = 1 family on E_D. With B = vˡ (l ≥ 2), 2 | B forces
/// ord₂(w² − z⁴) ≥ ord₂(D) + 8; otherwise it equals ord₂(D).
pub fn a1_family_levels(d: &Int, two_divides_b: bool) -> Result<Vec<A1Level>> {
    if d.is_zero() {
        return Err(Error::Precondition("D must be nonzero".into()));
    }
    let e = d.trailing_zeros().unwrap_or(0) as u32;
    let vs: Vec<u32> = if two_divides_b {
        (e + 8..e + 13).collect()
    } else {
        vec![e]
    };
    let mut by_f: BTreeMap<u32, BTreeSet<i64>> = BTreeMap::new();
    for v in vs {
        for (f, g) in a1_exponents_for_valuation(v) {
            by_f.entry(f).or_default().extend(g);
        }
    }
    let odd = odd_primes(d).iter().fold(Int::one(), |acc, p| acc * p);
    by_f.into_iter()
        .map(|(f2, g)| {
            let n = (Int::from(2).pow(f2) * &odd)
                .to_u64()
                .ok_or_else(|| Error::Unsupported("level exceeds u64".into()))?;
            let mut twists: Vec<i64> = g.into_iter().collect();
            twists.sort_by_key(|g| crate::conductor::table1::GAMMAS.iter().position(|x| x == g));
            Ok(A1Level {
                level: n,
                f2,
                twists,
            })
        })
        .collect()
}
