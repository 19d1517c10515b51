//! Weierstrass models, the group law, and Frobenius traces over small finite fields.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt::Debug;

use crate::arith::ff::{Fe, Fq};
use crate::arith::int::{is_fourth_power_free, legendre, rat_mod, Int, Rat};
use crate::arith::numfield::NfElem;
use crate::arith::quad::QuadElem;
use crate::error::{Error, Result};

/// Coefficient domains for Weierstrass models: fields of characteristic zero.
pub trait Coeff: Clone + PartialEq + Debug {
    fn from_i64_like(&self, n: i64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn is_zero(&self) -> bool;
}

impl Coeff for Rat {
    fn from_i64_like(&self, n: i64) -> Self {
        Rat::from_integer(n.into())
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl Coeff for QuadElem {
    fn from_i64_like(&self, n: i64) -> Self {
        QuadElem::from_rat(&self.d, Rat::from_integer(n.into()))
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn inv(&self) -> Option<Self> {
        QuadElem::inv(self)
    }
    fn is_zero(&self) -> bool {
        QuadElem::is_zero(self)
    }
}

impl Coeff for NfElem {
    fn from_i64_like(&self, n: i64) -> Self {
        NfElem::from_rat(&self.field, Rat::from_integer(n.into()))
    }
    fn add(&self, o: &Self) -> Self {
        NfElem::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        NfElem::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        NfElem::mul(self, o)
    }
    fn inv(&self) -> Option<Self> {
        NfElem::inv(self)
    }
    fn is_zero(&self) -> bool {
        NfElem::is_zero(self)
    }
}

/// y² + a1xy + a3y = x³ + a2x² + a4x + a6.
#[derive(Debug, Clone, PartialEq)]
pub struct Weierstrass<R: Coeff> {
    pub a1: R,
    pub a2: R,
    pub a3: R,
    pub a4: R,
    pub a6: R,
}

pub type WeierstrassModel = Weierstrass<Rat>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Point<R> {
    Infinity,
    Affine(R, R),
}

pub type CurvePoint = Point<Rat>;

impl<R> Point<R> {
    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }
}

impl<R: Coeff> Weierstrass<R> {
    pub fn new(a: [R; 5]) -> Self {
        let [a1, a2, a3, a4, a6] = a;
        Weierstrass { a1, a2, a3, a4, a6 }
    }

    fn k(&self, n: i64) -> R {
        self.a1.from_i64_like(n)
    }

    pub fn b2(&self) -> R {
        self.a1.mul(&self.a1).add(&self.k(4).mul(&self.a2))
    }
    pub fn b4(&self) -> R {
        self.a1.mul(&self.a3).add(&self.k(2).mul(&self.a4))
    }
    pub fn b6(&self) -> R {
        self.a3.mul(&self.a3).add(&self.k(4).mul(&self.a6))
    }
    pub fn b8(&self) -> R {
        let a1s = self.a1.mul(&self.a1);
        a1s.mul(&self.a6)
            .add(&self.k(4).mul(&self.a2).mul(&self.a6))
            .sub(&self.a1.mul(&self.a3).mul(&self.a4))
            .add(&self.a2.mul(&self.a3).mul(&self.a3))
            .sub(&self.a4.mul(&self.a4))
    }
    pub fn c4(&self) -> R {
        let b2 = self.b2();
        b2.mul(&b2).sub(&self.k(24).mul(&self.b4()))
    }
    pub fn c6(&self) -> R {
        let b2 = self.b2();
        self.k(0)
            .sub(&b2.mul(&b2).mul(&b2))
            .add(&self.k(36).mul(&b2).mul(&self.b4()))
            .sub(&self.k(216).mul(&self.b6()))
    }
    pub fn disc(&self) -> R {
        let (b2, b4, b6, b8) = (self.b2(), self.b4(), self.b6(), self.b8());
        self.k(0)
            .sub(&b2.mul(&b2).mul(&b8))
            .sub(&self.k(8).mul(&b4).mul(&b4).mul(&b4))
            .sub(&self.k(27).mul(&b6).mul(&b6))
            .add(&self.k(9).mul(&b2).mul(&b4).mul(&b6))
    }
    pub fn j(&self) -> Option<R> {
        let c4 = self.c4();
        Some(c4.mul(&c4).mul(&c4).mul(&self.disc().inv()?))
    }
    pub fn is_nonsingular(&self) -> bool {
        !self.disc().is_zero()
    }

    pub fn contains(&self, p: &Point<R>) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine(x, y) => {
                let lhs = y.mul(y).add(&self.a1.mul(x).mul(y)).add(&self.a3.mul(y));
                let rhs = x
                    .mul(x)
                    .mul(x)
                    .add(&self.a2.mul(x).mul(x))
                    .add(&self.a4.mul(x))
                    .add(&self.a6);
                lhs == rhs
            }
        }
    }

    pub fn neg(&self, p: &Point<R>) -> Point<R> {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(
                x.clone(),
                self.k(0).sub(y).sub(&self.a1.mul(x)).sub(&self.a3),
            ),
        }
    }

    /// Chord-and-tangent addition.
    pub fn add(&self, p: &Point<R>, q: &Point<R>) -> Result<Point<R>> {
        if !self.contains(p) || !self.contains(q) {
            return Err(Error::NotOnCurve);
        }
        Ok(self.add_unchecked(p, q))
    }

    pub fn add_unchecked(&self, p: &Point<R>, q: &Point<R>) -> Point<R> {
        let (x1, y1, x2, y2) = match (p, q) {
            (Point::Infinity, _) => return q.clone(),
            (_, Point::Infinity) => return p.clone(),
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let lambda = if x1 == x2 {
            let s = y1.add(y2).add(&self.a1.mul(x2)).add(&self.a3);
            if s.is_zero() {
                return Point::Infinity;
            }
            let num = self
                .k(3)
                .mul(x1)
                .mul(x1)
                .add(&self.k(2).mul(&self.a2).mul(x1))
                .add(&self.a4)
                .sub(&self.a1.mul(y1));
            let den = self.k(2).mul(y1).add(&self.a1.mul(x1)).add(&self.a3);
            num.mul(&den.inv().expect("tangent denominator"))
        } else {
            y2.sub(y1).mul(&x2.sub(x1).inv().expect("distinct x"))
        };
        let nu = y1.sub(&lambda.mul(x1));
        let x3 = lambda
            .mul(&lambda)
            .add(&self.a1.mul(&lambda))
            .sub(&self.a2)
            .sub(x1)
            .sub(x2);
        let y3 = self
            .k(0)
            .sub(&lambda.add(&self.a1).mul(&x3))
            .sub(&nu)
            .sub(&self.a3);
        Point::Affine(x3, y3)
    }

    /// m·P by double-and-add (negative m allowed).
    pub fn scalar_mul(&self, m: i64, p: &Point<R>) -> Result<Point<R>> {
        if !self.contains(p) {
            return Err(Error::NotOnCurve);
        }
        let mut base = if m < 0 { self.neg(p) } else { p.clone() };
        let mut e = m.unsigned_abs();
        let mut acc = Point::Infinity;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.add_unchecked(&acc, &base);
            }
            base = self.add_unchecked(&base, &base);
            e >>= 1;
        }
        Ok(acc)
    }
}

impl Weierstrass<Rat> {
    pub fn from_i64(a: [i64; 5]) -> Self {
        Self::new(a.map(|c| Rat::from_integer(c.into())))
    }

    pub fn coeffs(&self) -> [Rat; 5] {
        [
            self.a1.clone(),
            self.a2.clone(),
            self.a3.clone(),
            self.a4.clone(),
            self.a6.clone(),
        ]
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs().iter().all(|c| c.is_integer())
    }

    pub fn int_coeffs(&self) -> Option<[Int; 5]> {
        self.is_integral()
            .then(|| self.coeffs().map(|c| c.to_integer()))
    }

    /// Reduction modulo p of a p-integral model.
    pub fn reduce(&self, fq: &Fq) -> Option<FqCurve> {
        let c: Vec<Fe> = self
            .coeffs()
            .iter()
            .map(|c| rat_mod(c, fq.p).map(|a| fq.elem(a, 0)))
            .collect::<Option<_>>()?;
        Some(FqCurve {
            f: *fq,
            a: [c[0], c[1], c[2], c[3], c[4]],
        })
    }
}

/// The curve E_D: y² = x³ + Dx, with D nonzero and fourth-power free.
pub fn ed_curve(d: &Int) -> Result<WeierstrassModel> {
    if d.is_zero() {
        return Err(Error::InvalidCurve("D = 0".into()));
    }
    if !is_fourth_power_free(d) {
        return Err(Error::InvalidCurve(format!(
            "D = {d} is divisible by a fourth power"
        )));
    }
    let z = Rat::zero();
    Ok(Weierstrass::new([
        z.clone(),
        z.clone(),
        z.clone(),
        Rat::from_integer(d.clone()),
        z,
    ]))
}

/// The 2-torsion point T = (0, 0).
pub fn torsion_t() -> CurvePoint {
    Point::Affine(Rat::zero(), Rat::zero())
}

pub fn pt(x: Rat, y: Rat) -> CurvePoint {
    Point::Affine(x, y)
}

pub fn add(p: &CurvePoint, q: &CurvePoint, e: &WeierstrassModel) -> Result<CurvePoint> {
    e.add(p, q)
}

pub fn scalar_mul(m: i64, p: &CurvePoint, e: &WeierstrassModel) -> Result<CurvePoint> {
    e.scalar_mul(m, p)
}

/// A Weierstrass model over 𝔽_p or 𝔽_{p²}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FqCurve {
    pub f: Fq,
    pub a: [Fe; 5],
}

impl FqCurve {
    fn bs(&self) -> (Fe, Fe, Fe, Fe) {
        let f = &self.f;
        let [a1, a2, a3, a4, a6] = self.a;
        let b2 = f.add(f.mul(a1, a1), f.mul(f.from_i64(4), a2));
        let b4 = f.add(f.mul(a1, a3), f.mul(f.from_i64(2), a4));
        let b6 = f.add(f.mul(a3, a3), f.mul(f.from_i64(4), a6));
        let b8 = {
            let t1 = f.mul(f.mul(a1, a1), a6);
            let t2 = f.mul(f.mul(f.from_i64(4), a2), a6);
            let t3 = f.mul(f.mul(a1, a3), a4);
            let t4 = f.mul(f.mul(a2, a3), a3);
            let t5 = f.mul(a4, a4);
            f.sub(f.add(f.sub(f.add(t1, t2), t3), t4), t5)
        };
        (b2, b4, b6, b8)
    }

    pub fn disc(&self) -> Fe {
        let f = &self.f;
        let (b2, b4, b6, b8) = self.bs();
        let t1 = f.mul(f.mul(b2, b2), b8);
        let t2 = f.mul(f.from_i64(8), f.mul(f.mul(b4, b4), b4));
        let t3 = f.mul(f.from_i64(27), f.mul(b6, b6));
        let t4 = f.mul(f.from_i64(9), f.mul(f.mul(b2, b4), b6));
        f.add(f.neg(f.add(f.add(t1, t2), t3)), t4)
    }

    /// a_q = q + 1 − #E(𝔽_q) via Σ_x χ(4x³ + b2x² + 2b4x + b6).
    pub fn frobenius_trace(&self) -> Result<i64> {
        let f = &self.f;
        if f.is_zero(self.disc()) {
            return Err(Error::SingularReduction(f.p));
        }
        let (b2, b4, b6, _) = self.bs();
        let four = f.from_i64(4);
        let b4x2 = f.add(b4, b4);
        let p = f.p;
        let table: Vec<i8> = (0..p).map(|a| legendre(a as i64, p) as i8).collect();
        let mut s: i64 = 0;
        for x in f.elements() {
            let g = f.add(
                f.mul(f.add(f.mul(f.add(f.mul(four, x), b2), x), b4x2), x),
                b6,
            );
            s += table[f.norm(g) as usize] as i64;
        }
        Ok(-s)
    }

    /// Exhaustive count of projective points (oracle for small q).
    pub fn count_points_naive(&self) -> u64 {
        let f = &self.f;
        let [a1, a2, a3, a4, a6] = self.a;
        let elems: Vec<Fe> = f.elements().collect();
        let mut n = 1;
        for &x in &elems {
            let rhs = f.add(
                f.add(
                    f.add(f.mul(f.mul(x, x), x), f.mul(a2, f.mul(x, x))),
                    f.mul(a4, x),
                ),
                a6,
            );
            for &y in &elems {
                let lhs = f.add(f.add(f.mul(y, y), f.mul(f.mul(a1, x), y)), f.mul(a3, y));
                if lhs == rhs {
                    n += 1;
                }
            }
        }
        n
    }
}

pub fn frobenius_trace(e: &FqCurve) -> Result<i64> {
    e.frobenius_trace()
}

/// Trace over 𝔽_{q^k} from the trace over 𝔽_q: s_k = a·s_{k−1} − q·s_{k−2}.
pub fn trace_power(a: i64, q: i64, k: u32) -> BigInt {
    let (a, q) = (BigInt::from(a), BigInt::from(q));
    let (mut s0, mut s1) = (BigInt::from(2), a.clone());
    if k == 0 {
        return s0;
    }
    for _ in 1..k {
        let s2 = &a * &s1 - &q * &s0;
        s0 = s1;
        s1 = s2;
    }
    s1
}

/// Clear denominators: the integral model obtained by (x, y) ↦ (u²x, u³y).
pub fn integral_model(e: &WeierstrassModel) -> (WeierstrassModel, Int) {
    let mut u = Int::one();
    let c = e.coeffs();
    let weights = [1u32, 2, 3, 4, 6];
    loop {
        let ok = c
            .iter()
            .zip(weights)
            .all(|(ci, w)| (ci * Rat::from_integer(u.pow(w))).is_integer());
        if ok {
            break;
        }
        let den = c
            .iter()
            .map(|x| x.denom().clone())
            .fold(Int::one(), |a, b| a.lcm(&b));
        u *= den.abs();
    }
    let scaled: Vec<Rat> = c
        .iter()
        .zip(weights)
        .map(|(ci, w)| ci * Rat::from_integer(u.pow(w)))
        .collect();
    (
        Weierstrass::new([
            scaled[0].clone(),
            scaled[1].clone(),
            scaled[2].clone(),
            scaled[3].clone(),
            scaled[4].clone(),
        ]),
        u,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int::{int, rat};

    #[test]
    fn worked_points() {
        let e = ed_curve(&int(125)).unwrap();
        let p = pt(rat(121, 4), rat(1419, 8));
        assert!(e.contains(&p));
        assert_eq!(
            e.add(&p, &torsion_t()).unwrap(),
            pt(rat(500, 121), rat(-32250, 1331))
        );
        assert_eq!(e.add(&p, &e.neg(&p)).unwrap(), Point::Infinity);

        let e = ed_curve(&int(-17)).unwrap();
        let (p, q) = (pt(rat(-4, 1), rat(2, 1)), pt(rat(-1, 1), rat(4, 1)));
        let s = e
            .add(&e.scalar_mul(2, &p).unwrap(), &e.scalar_mul(2, &q).unwrap())
            .unwrap();
        assert_eq!(s, pt(rat(3568321, 451584), rat(5750178337, 303464448)));

        let e = ed_curve(&int(3)).unwrap();
        assert_eq!(
            e.scalar_mul(2, &pt(rat(3, 1), rat(6, 1))).unwrap(),
            pt(rat(1, 4), rat(7, 8))
        );
        let e = ed_curve(&int(-2)).unwrap();
        assert_eq!(
            e.scalar_mul(3, &pt(rat(-1, 1), rat(1, 1))).unwrap(),
            pt(rat(-1, 169), rat(239, 2197))
        );
        assert_eq!(
            e.scalar_mul(0, &pt(rat(-1, 1), rat(1, 1))).unwrap(),
            Point::Infinity
        );
        assert!(ed_curve(&int(16)).is_err());
        assert!(ed_curve(&int(0)).is_err());
    }

    #[test]
    fn traces() {
        let e = ed_curve(&int(1)).unwrap();
        let f3 = Fq::prime(3).unwrap();
        assert_eq!(e.reduce(&f3).unwrap().frobenius_trace().unwrap(), 0);
        for p in [3u64, 5, 7, 11, 13] {
            for deg in [1, 2] {
                let f = Fq::new(p, deg).unwrap();
                let r = e.reduce(&f).unwrap();
                let a = r.frobenius_trace().unwrap();
                assert_eq!(f.order() as i64 + 1 - a, r.count_points_naive() as i64);
                if deg == 2 {
                    let a1 = e
                        .reduce(&Fq::prime(p).unwrap())
                        .unwrap()
                        .frobenius_trace()
                        .unwrap();
                    assert_eq!(BigInt::from(a), trace_power(a1, p as i64, 2));
                }
            }
        }
        let sing = Weierstrass::from_i64([0, 0, 0, 0, 0])
            .reduce(&Fq::prime(5).unwrap())
            .unwrap();
        assert!(sing.frobenius_trace().is_err());
    }

    #[test]
    fn c4_c6_disc_identity() {
        let e = Weierstrass::from_i64([1, -1, 1, -3, 7]);
        assert_eq!(e.c4().pow(3) - e.c6().pow(2), rat(1728, 1) * e.disc());
    }
}
