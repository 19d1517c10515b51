//! The decomposition P ↦ (a, â, z, w) with w² = a z⁴ + â B⁴, and the Frey
//! ℚ-curve E^γ_{a,z,w}: Y² = X³ + 4√a zγ X² + 2(a z² + √a w)γ² X.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::int::{
    integer_nth_root, is_prime, prime_divisors, rat_int, squarefree_part, val_int, Int, Rat,
    Valuation,
};
use crate::arith::quad::QuadElem;
use crate::curve::{ed_curve, torsion_t, CurvePoint, Point, Weierstrass, WeierstrassModel};
use crate::eds::abc;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreyData {
    pub a: Int,
    pub a_hat: Int,
    pub z: Int,
    pub w: Int,
    pub b: Int,
    /// Rational twist γ; field-valued twists are handled by the modules that need them.
    pub gamma: Rat,
}

impl FreyData {
    pub fn new(a: Int, a_hat: Int, z: Int, w: Int, b: Int) -> Result<Self> {
        let fd = FreyData {
            a,
            a_hat,
            z,
            w,
            b,
            gamma: Rat::one(),
        };
        fd.validate()?;
        Ok(fd)
    }

    pub fn with_gamma(mut self, gamma: Rat) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn d(&self) -> Int {
        &self.a * &self.a_hat
    }

    /// w² = a z⁴ + â B⁴ and pairwise coprimality of B, z, w.
    pub fn validate(&self) -> Result<()> {
        if &self.w * &self.w != &self.a * self.z.pow(4) + &self.a_hat * self.b.pow(4) {
            return Err(Error::Invalid("w² ≠ a z⁴ + â B⁴".into()));
        }
        let one = Int::one();
        if self.b.gcd(&self.z) != one || self.b.gcd(&self.w) != one || self.z.gcd(&self.w) != one {
            return Err(Error::Invalid("B, z, w are not pairwise coprime".into()));
        }
        Ok(())
    }
}

/// Decompose P ∈ E_D(ℚ) \ {O, T} via P̂ = T − P.
pub fn decompose(d: &Int, p: &CurvePoint) -> Result<FreyData> {
    let e = ed_curve(d)?;
    if !e.contains(p) {
        return Err(Error::NotOnCurve);
    }
    if p.is_infinity() || *p == torsion_t() {
        return Err(Error::Invalid("P must differ from O and T".into()));
    }
    let phat = e.add_unchecked(&torsion_t(), &e.neg(p));
    let (a_big, b, c) =
        abc(p).ok_or_else(|| Error::Internal("P not in lowest-terms form".into()))?;
    let (_, bhat, _) =
        abc(&phat).ok_or_else(|| Error::Internal("P̂ not in lowest-terms form".into()))?;
    let mut a = a_big.gcd(d);
    if a_big.is_negative() {
        a = -a;
    }
    let a_hat = d / &a;
    let den = &a * &bhat;
    if !(&c % &den).is_zero() || a_big != &a * &bhat * &bhat {
        return Err(Error::Internal(
            "decomposition failed: C not divisible by a·B̂".into(),
        ));
    }
    let w = &c / &den;
    let fd = FreyData {
        a,
        a_hat,
        z: bhat,
        w,
        b,
        gamma: Rat::one(),
    };
    fd.validate()
        .map_err(|e| Error::Internal(format!("decomposition check: {e}")))?;
    Ok(fd)
}

/// √a inside ℚ(√sqfree(a)); for square a it is the non-negative integer root, with d = 1.
pub fn sqrt_a(a: &Int) -> QuadElem {
    if let Some(k) = integer_nth_root(a, 2) {
        return QuadElem::raw(&Int::one(), rat_int(&k), Rat::zero());
    }
    let d = squarefree_part(a);
    let s = integer_nth_root(&(a / &d), 2).expect("a/sqfree(a) is a square");
    QuadElem::raw(&d, Rat::zero(), rat_int(&s))
}

fn qc(d: &Int, n: impl Into<BigInt>) -> QuadElem {
    QuadElem::from_rat(d, Rat::from_integer(n.into()))
}

/// Norm to ℚ, reading the degenerate d = 1 representation as ℚ itself.
pub fn frey_norm(x: &QuadElem) -> Rat {
    if x.d.is_one() {
        x.u.clone()
    } else {
        x.norm()
    }
}

/// Frey model over ℚ(√a) with rational twist γ.
pub fn frey_model(fd: &FreyData) -> Weierstrass<QuadElem> {
    let s = sqrt_a(&fd.a);
    let d = s.d.clone();
    let g = QuadElem::from_rat(&d, fd.gamma.clone());
    let z = qc(&d, fd.z.clone());
    let w = qc(&d, fd.w.clone());
    let a2 = &(&(&qc(&d, 4) * &s) * &z) * &g;
    let a4 = &(&qc(&d, 2) * &(&(&qc(&d, fd.a.clone()) * &(&z * &z)) + &(&s * &w))) * &(&g * &g);
    let zero = qc(&d, 0);
    Weierstrass::new([zero.clone(), a2, zero.clone(), a4, zero])
}

/// The a = 1 model over ℚ: Y² = X³ + 4zγX² + 2(z² + w)γ²X.
pub fn frey_model_a1(z: &Int, w: &Int, gamma: i64) -> WeierstrassModel {
    let g = Int::from(gamma);
    let zero = Rat::zero();
    Weierstrass::new([
        zero.clone(),
        rat_int(&(Int::from(4) * z * &g)),
        zero.clone(),
        rat_int(&(Int::from(2) * (z * z + w) * &g * &g)),
        zero,
    ])
}

/// The 2-isogenous a = 1 model: Y² = X³ − 8zγX² + 8(z² − w)γ²X.
pub fn isogenous_model_a1(z: &Int, w: &Int, gamma: i64) -> WeierstrassModel {
    let g = Int::from(gamma);
    let zero = Rat::zero();
    Weierstrass::new([
        zero.clone(),
        rat_int(&(Int::from(-8) * z * &g)),
        zero.clone(),
        rat_int(&(Int::from(8) * (z * z - w) * &g * &g)),
        zero,
    ])
}

/// c4 = −2⁵√a(3w − 5√a z²)γ², Δ = −2⁹√a³(w − √a z²)(w + √a z²)²γ⁶, j = c4³/Δ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreyInvariants {
    pub c4: QuadElem,
    pub delta: QuadElem,
    pub j: QuadElem,
}

pub fn frey_invariants(fd: &FreyData) -> FreyInvariants {
    let s = sqrt_a(&fd.a);
    let d = s.d.clone();
    let g = QuadElem::from_rat(&d, fd.gamma.clone());
    let z2 = qc(&d, &fd.z * &fd.z);
    let w = qc(&d, fd.w.clone());
    let sz2 = &s * &z2;
    let g2 = &g * &g;
    let g6 = &(&g2 * &g2) * &g2;
    let c4 = &(&(&qc(&d, -32) * &s) * &(&(&qc(&d, 3) * &w) - &(&qc(&d, 5) * &sz2))) * &g2;
    let wp = &w + &sz2;
    let wm = &w - &sz2;
    let delta = &(&(&(&qc(&d, -512) * &s.pow(3)) * &wm) * &wp.pow(2)) * &g6;
    let j = c4.pow(3).div(&delta).expect("nonzero discriminant");
    FreyInvariants { c4, delta, j }
}

/// j = 2⁶(3w − 5√a z²)³ / ((w + √a z²)²(w − √a z²)).
pub fn frey_j(fd: &FreyData) -> QuadElem {
    let s = sqrt_a(&fd.a);
    let d = s.d.clone();
    let sz2 = &s * &qc(&d, &fd.z * &fd.z);
    let w = qc(&d, fd.w.clone());
    let num = &qc(&d, 64) * &(&(&qc(&d, 3) * &w) - &(&qc(&d, 5) * &sz2)).pow(3);
    let den = &(&w + &sz2).pow(2) * &(&w - &sz2);
    num.div(&den).expect("nonzero denominator")
}

/// Every common prime of Norm(c4) and Norm(Δ) divides 2·Norm(γ)·a.
pub fn coprime_outside(fi: &FreyInvariants, fd: &FreyData) -> bool {
    let nc = frey_norm(&fi.c4);
    let nd = frey_norm(&fi.delta);
    let g = nc.numer().gcd(nd.numer());
    if g.is_zero() {
        return false;
    }
    let bad = Int::from(2) * fd.gamma.numer() * fd.gamma.denom() * &fd.a;
    prime_divisors(&g).iter().all(|q| (&bad % q).is_zero())
}

/// p-adic square root of a modulo p^k (p ∤ a, a a square mod p or mod 8 for p = 2).
fn padic_sqrt(a: &Int, p: &Int, k: u32) -> Option<Int> {
    let modulus = p.pow(k);
    if *p == Int::from(2) {
        if a.mod_floor(&Int::from(8)) != Int::one() {
            return None;
        }
        // Lift odd square roots bit by bit.
        let mut s = Int::one();
        for j in 3..k.max(3) {
            let m = Int::from(2).pow(j + 1);
            if (&s * &s - a).mod_floor(&m) != Int::zero() {
                s += Int::from(2).pow(j - 1);
            }
        }
        return Some(s.mod_floor(&modulus));
    }
    let pu = p.to_u64()?;
    let a0 = a.mod_floor(p).to_u64()?;
    let mut s = Int::from(crate::arith::int::sqrt_mod(a0, pu)?);
    if s.is_zero() {
        return None;
    }
    let mut pk = p.clone();
    while pk < modulus {
        pk = (&pk * &pk).min(modulus.clone());
        let inv = (Int::from(2) * &s).modpow(&(&pk - (&pk / p) - Int::one()), &pk);
        s = (&s - (&s * &s - a) * inv).mod_floor(&pk);
    }
    Some(s)
}

/// Valuations of x ∈ ℚ(√d) at the primes above p (one entry per prime),
/// normalised so that a uniformiser has valuation 1.
pub fn quad_valuations(x: &QuadElem, p: &Int) -> Vec<Valuation> {
    if x.d.is_one() {
        return vec![rat_valuation(&x.u, p)];
    }
    if x.is_zero() {
        return vec![Valuation::Infinite];
    }
    let nv = rat_valuation(&x.norm(), p).finite().unwrap();
    let d = &x.d;
    let two = Int::from(2);
    let ramified = if *p == two {
        d.mod_floor(&Int::from(4)) != Int::one()
    } else {
        (d % p).is_zero()
    };
    if ramified {
        return vec![Valuation::Finite(nv)];
    }
    let split = if *p == two {
        d.mod_floor(&Int::from(8)) == Int::one()
    } else {
        crate::arith::int::legendre_big(d, p.to_u64().unwrap()) == 1
    };
    if !split {
        return vec![Valuation::Finite(nv / 2)];
    }
    // Split: embed via a p-adic square root of d; x = (U + V√d)/den.
    let den = x.u.denom().lcm(x.v.denom());
    let uu = (&x.u * rat_int(&den)).to_integer();
    let vv = (&x.v * rat_int(&den)).to_integer();
    let dv = val_int(&den, p).unwrap_or(0) as i64;
    let k = (nv + 2 * dv).max(0) as u32 + 2;
    let s = padic_sqrt(d, p, k).expect("split prime has a square root");
    [s.clone(), -s]
        .iter()
        .map(|r| {
            let t = (&uu + &vv * r).mod_floor(&p.pow(k));
            let v = val_int(&t, p).map(|v| v as i64).unwrap_or(k as i64);
            Valuation::Finite(v - dv)
        })
        .collect()
}

fn rat_valuation(x: &Rat, p: &Int) -> Valuation {
    match val_int(x.numer(), p) {
        None => Valuation::Infinite,
        Some(n) => Valuation::Finite(n as i64 - val_int(x.denom(), p).unwrap_or(0) as i64),
    }
}

/// Checks non-integrality of j_{a,z,w} at every prime above p, for p | B
/// (with 8 | B when p = 2).
pub fn j_nonintegral_at(fd: &FreyData, p: &Int) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let two = Int::from(2);
    if !(&fd.b % p).is_zero() || (*p == two && !(&fd.b % Int::from(8)).is_zero()) {
        return Err(Error::Precondition(format!(
            "{p} does not divide B = {} to the required power",
            fd.b
        )));
    }
    let j = frey_j(fd);
    Ok(quad_valuations(&j, p)
        .iter()
        .all(|v| matches!(v, Valuation::Finite(n) if *n < 0)))
}

/// Helper: a point on the curve or an error if not affine.
pub fn affine_xy(p: &CurvePoint) -> Option<(&Rat, &Rat)> {
    match p {
        Point::Affine(x, y) => Some((x, y)),
        Point::Infinity => None,
    }
}
