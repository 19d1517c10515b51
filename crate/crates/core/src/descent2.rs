//! The descent maps α_δ(P) = [x + δ√−D] ∈ ℚ(√−D)*/(ℚ(√−D)*)², whose joint
//! kernel is 2E_D(ℚ).

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::arith::int::{
    integer_nth_root, primes_upto, rat_int, rat_sqrt, squarefree_part, Int, Rat,
};
use crate::arith::quad::{is_square_quad, QuadElem};
use crate::curve::{ed_curve, CurvePoint, Point};
use crate::error::{Error, Result};
use crate::frey::decompose;

/// A class in ℚ(√−D)*/squares. When −D is a rational square the algebra splits
/// as ℚ × ℚ and a class is a pair of rational representatives.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SquareClass {
    Field(QuadElem),
    Split(Rat, Rat),
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SquareClass::Field(q) => write!(f, "[{q}]"),
            SquareClass::Split(a, b) => write!(f, "[({a}, {b})]"),
        }
    }
}

/// Clear denominators and strip square factors from the content (small
/// primes and exact-square cofactors only; equality never depends on this).
fn canonical(x: &QuadElem) -> QuadElem {
    let den = x.u.denom().lcm(x.v.denom());
    let den2 = rat_int(&(&den * &den));
    let (u, v) = ((&x.u * &den2).to_integer(), (&x.v * &den2).to_integer());
    let mut g = u.gcd(&v);
    if g.is_zero() {
        return x.clone();
    }
    let mut k = Int::one();
    for p in primes_upto(1000) {
        let p2 = Int::from(p * p);
        while (&g % &p2).is_zero() {
            g /= &p2;
            k *= p;
        }
    }
    if let Some(r) = integer_nth_root(&g.abs(), 2) {
        k *= r;
    }
    let k2 = &k * &k;
    QuadElem::raw(&x.d, rat_int(&(u / &k2)), rat_int(&(v / &k2)))
}

impl SquareClass {
    pub fn is_trivial(&self) -> bool {
        match self {
            SquareClass::Field(q) => is_square_quad(q).is_some(),
            SquareClass::Split(a, b) => rat_sqrt(a).is_some() && rat_sqrt(b).is_some(),
        }
    }

    pub fn mul(&self, o: &SquareClass) -> SquareClass {
        match (self, o) {
            (SquareClass::Field(a), SquareClass::Field(b)) => {
                SquareClass::Field(canonical(&(a * b)))
            }
            (SquareClass::Split(a1, a2), SquareClass::Split(b1, b2)) => {
                SquareClass::Split(a1 * b1, a2 * b2)
            }
            _ => panic!("square classes from different algebras"),
        }
    }

    pub fn same_as(&self, o: &SquareClass) -> bool {
        self.mul(o).is_trivial()
    }
}

/// −D = s²·d with d squarefree; returns (s, d).
fn sqrt_minus_d(d: &Int) -> (Int, Int) {
    let md = -d;
    let sf = squarefree_part(&md);
    let s = integer_nth_root(&(&md / &sf), 2).expect("square cofactor");
    (s, sf)
}

pub fn alpha_delta(p: &CurvePoint, delta: i64, d: &Int) -> Result<SquareClass> {
    if delta != 1 && delta != -1 {
        return Err(Error::Invalid("δ must be ±1".into()));
    }
    let e = ed_curve(d)?;
    if !e.contains(p) {
        return Err(Error::NotOnCurve);
    }
    let (s, sf) = sqrt_minus_d(d);
    let dl = Int::from(delta);
    if sf.is_one() {
        return Ok(match p {
            Point::Infinity => SquareClass::Split(Rat::one(), Rat::one()),
            Point::Affine(x, _) => {
                let sr = rat_int(&(&dl * &s));
                let two_s2 = rat_int(&(Int::from(2) * &s * &s));
                let c1 = x + &sr;
                let c2 = x - &sr;
                let f = |c: Rat| if c.is_zero() { two_s2.clone() } else { c };
                SquareClass::Split(f(c1), f(c2))
            }
        });
    }
    Ok(SquareClass::Field(match p {
        Point::Infinity => QuadElem::from_rat(&sf, Rat::one()),
        Point::Affine(x, _) => canonical(&QuadElem::raw(&sf, x.clone(), rat_int(&(&dl * &s)))),
    }))
}

pub fn in_double_image(p: &CurvePoint, d: &Int) -> Result<bool> {
    Ok(alpha_delta(p, 1, d)?.is_trivial() && alpha_delta(p, -1, d)?.is_trivial())
}

/// Whether P ≡ Q mod 2E_D(ℚ); when both decompose, a_P = a_Q is asserted.
pub fn same_a_class(p: &CurvePoint, q: &CurvePoint, d: &Int) -> Result<bool> {
    let e = ed_curve(d)?;
    let diff = e.add(p, &e.neg(q))?;
    let same = in_double_image(&diff, d)?;
    if same {
        if let (Ok(fp), Ok(fq)) = (decompose(d, p), decompose(d, q)) {
            if fp.a != fq.a {
                return Err(Error::Internal(format!(
                    "same class but a_P = {} ≠ a_Q = {}",
                    fp.a, fq.a
                )));
            }
        }
    }
    Ok(same)
}

/// Norm α₊(P) ∈ ℚ*, whose square class is that of a_P (−D not a square).
pub fn norm_class(p: &CurvePoint, d: &Int) -> Result<Rat> {
    match alpha_delta(p, 1, d)? {
        SquareClass::Field(q) => Ok(q.norm()),
        SquareClass::Split(a, b) => Ok(a * b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int::{int, rat};
    use crate::curve::{pt, torsion_t};

    #[test]
    fn basic_classes() {
        let d = int(-17);
        assert!(alpha_delta(&Point::Infinity, 1, &d).unwrap().is_trivial());
        let at = alpha_delta(&torsion_t(), 1, &d).unwrap();
        assert_eq!(
            at,
            SquareClass::Field(QuadElem::raw(&int(17), rat(0, 1), rat(1, 1)))
        );
        assert!(!at.is_trivial());

        let d = int(125);
        let e = ed_curve(&d).unwrap();
        let p = pt(rat(121, 4), rat(1419, 8));
        assert!(!in_double_image(&p, &d).unwrap());
        assert!(!in_double_image(&torsion_t(), &d).unwrap());
        assert!(in_double_image(&e.scalar_mul(2, &p).unwrap(), &d).unwrap());
        let p3 = e.scalar_mul(3, &p).unwrap();
        assert!(same_a_class(&p, &p3, &d).unwrap());
        let pt_ = e.add(&p, &torsion_t()).unwrap();
        assert!(!same_a_class(&p, &pt_, &d).unwrap());
    }

    #[test]
    fn norm_matches_a() {
        let d = int(125);
        let e = ed_curve(&d).unwrap();
        let p = pt(rat(121, 4), rat(1419, 8));
        for m in 1..6 {
            let q = e.add(&e.scalar_mul(m, &p).unwrap(), &torsion_t()).unwrap();
            let fd = decompose(&d, &q).unwrap();
            let n = norm_class(&q, &d).unwrap() * rat_int(&fd.a);
            assert!(rat_sqrt(&n).is_some());
        }
    }

    #[test]
    fn split_case() {
        // D = −4: −D = 4 is a square; T± = (±2, 0).
        let d = int(-4);
        let t = pt(rat(2, 1), rat(0, 1));
        let c = alpha_delta(&t, 1, &d).unwrap();
        assert!(c.same_as(&SquareClass::Split(rat(1, 1), rat(2, 1))));
        assert!(!in_double_image(&t, &d).unwrap());
    }
}
