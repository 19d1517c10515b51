//! Tate's algorithm over ℤ at a prime p.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::fmt;

use crate::arith::int::{is_prime, val_int, Int};
use crate::curve::WeierstrassModel;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Kodaira {
    I0,
    In(u32),
    II,
    III,
    IV,
    I0Star,
    InStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl fmt::Display for Kodaira {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kodaira::I0 => write!(f, "I0"),
            Kodaira::In(n) => write!(f, "I{n}"),
            Kodaira::II => write!(f, "II"),
            Kodaira::III => write!(f, "III"),
            Kodaira::IV => write!(f, "IV"),
            Kodaira::I0Star => write!(f, "I0*"),
            Kodaira::InStar(n) => write!(f, "I{n}*"),
            Kodaira::IVStar => write!(f, "IV*"),
            Kodaira::IIIStar => write!(f, "III*"),
            Kodaira::IIStar => write!(f, "II*"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TateResult {
    /// Conductor exponent f_p.
    pub exponent: u32,
    pub kodaira: Kodaira,
    /// A p-minimal integral model.
    pub minimal_model: [Int; 5],
    /// ord_p of the minimal discriminant.
    pub disc_valuation: u32,
}

struct M {
    a1: Int,
    a2: Int,
    a3: Int,
    a4: Int,
    a6: Int,
}

impl M {
    fn b2(&self) -> Int {
        &self.a1 * &self.a1 + Int::from(4) * &self.a2
    }
    fn b4(&self) -> Int {
        &self.a1 * &self.a3 + Int::from(2) * &self.a4
    }
    fn b6(&self) -> Int {
        &self.a3 * &self.a3 + Int::from(4) * &self.a6
    }
    fn b8(&self) -> Int {
        &self.a1 * &self.a1 * &self.a6 + Int::from(4) * &self.a2 * &self.a6
            - &self.a1 * &self.a3 * &self.a4
            + &self.a2 * &self.a3 * &self.a3
            - &self.a4 * &self.a4
    }
    fn c4(&self) -> Int {
        let b2 = self.b2();
        &b2 * &b2 - Int::from(24) * self.b4()
    }
    fn c6(&self) -> Int {
        let b2 = self.b2();
        -(&b2 * &b2 * &b2) + Int::from(36) * &b2 * self.b4() - Int::from(216) * self.b6()
    }
    fn disc(&self) -> Int {
        let (b2, b4, b6, b8) = (self.b2(), self.b4(), self.b6(), self.b8());
        -(&b2 * &b2 * &b8) - Int::from(8) * &b4 * &b4 * &b4 - Int::from(27) * &b6 * &b6
            + Int::from(9) * &b2 * &b4 * &b6
    }
    /// (x, y) ↦ (x + r, y + sx + t).
    fn rst(&mut self, r: &Int, s: &Int, t: &Int) {
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        let two = Int::from(2);
        let three = Int::from(3);
        let n1 = a1 + &two * s;
        let n2 = a2 - s * a1 + &three * r - s * s;
        let n3 = a3 + r * a1 + &two * t;
        let n4 = a4 - s * a3 + &two * r * a2 - (t + r * s) * a1 + &three * r * r - &two * s * t;
        let n6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
        *self = M {
            a1: n1,
            a2: n2,
            a3: n3,
            a4: n4,
            a6: n6,
        };
    }
    fn to_array(&self) -> [Int; 5] {
        [
            self.a1.clone(),
            self.a2.clone(),
            self.a3.clone(),
            self.a4.clone(),
            self.a6.clone(),
        ]
    }
}

fn ord(x: &Int, p: &Int) -> u32 {
    val_int(x, p).unwrap_or(u32::MAX)
}

fn inv_mod(a: &Int, p: &Int) -> Int {
    a.mod_floor(p).modpow(&(p - Int::from(2)), p)
}

fn md(a: &Int, p: &Int) -> Int {
    a.mod_floor(p)
}

/// Conductor exponent and a p-minimal model of an integral Weierstrass model.
pub fn tate(coeffs: &[Int; 5], p: &Int) -> Result<TateResult> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let mut e = M {
        a1: coeffs[0].clone(),
        a2: coeffs[1].clone(),
        a3: coeffs[2].clone(),
        a4: coeffs[3].clone(),
        a6: coeffs[4].clone(),
    };
    if e.disc().is_zero() {
        return Err(Error::InvalidCurve("singular model".into()));
    }
    let two = Int::from(2);
    let three = Int::from(3);
    let zero = Int::zero();
    let pu = p.to_u64().unwrap_or(u64::MAX);
    let pdiv = |x: &Int| (x % p).is_zero();
    loop {
        let n = ord(&e.disc(), p);
        if n == 0 {
            return Ok(TateResult {
                exponent: 0,
                kodaira: Kodaira::I0,
                minimal_model: e.to_array(),
                disc_valuation: 0,
            });
        }
        let (b2, b4, b6, c4) = (e.b2(), e.b4(), e.b6(), e.c4());
        let (r, t) = if pu == 2 {
            if pdiv(&b2) {
                let r = md(&e.a4, p);
                let t = md(&(&r * (Int::one() + &e.a2 + &e.a4) + &e.a6), p);
                (r, t)
            } else {
                let r = md(&e.a3, p);
                let t = md(&(&r + &e.a4), p);
                (r, t)
            }
        } else if pu == 3 {
            let r = if pdiv(&b2) {
                md(&-&b6, p)
            } else {
                md(&-(&b2 * &b4), p)
            };
            let t = md(&(&e.a1 * &r + &e.a3), p);
            (r, t)
        } else {
            let r = if pdiv(&c4) {
                md(&(-inv_mod(&Int::from(12), p) * &b2), p)
            } else {
                md(
                    &(-inv_mod(&(Int::from(12) * &c4), p) * (e.c6() + &b2 * &c4)),
                    p,
                )
            };
            let t = md(&(-inv_mod(&two, p) * (&e.a1 * &r + &e.a3)), p);
            (r, t)
        };
        e.rst(&r, &zero, &t);
        if !pdiv(&e.c4()) {
            return Ok(TateResult {
                exponent: 1,
                kodaira: Kodaira::In(n),
                minimal_model: e.to_array(),
                disc_valuation: n,
            });
        }
        let done = |k: Kodaira, f: u32, e: &M| {
            Ok(TateResult {
                exponent: f,
                kodaira: k,
                minimal_model: e.to_array(),
                disc_valuation: n,
            })
        };
        if ord(&e.a6, p) < 2 {
            return done(Kodaira::II, n, &e);
        }
        if ord(&e.b8(), p) < 3 {
            return done(Kodaira::III, n - 1, &e);
        }
        if ord(&e.b6(), p) < 3 {
            return done(Kodaira::IV, n - 2, &e);
        }
        let (s, t) = if pu == 2 {
            (md(&e.a2, p), &two * md(&(&e.a6 / Int::from(4)), p))
        } else {
            let half = (p + Int::one()) / &two;
            (-&e.a1 * &half, -&e.a3 * &half)
        };
        e.rst(&zero, &s, &t);
        let pp = p * p;
        let b = &e.a2 / p;
        let c = &e.a4 / &pp;
        let d = &e.a6 / (&pp * p);
        let w = Int::from(27) * &d * &d - &b * &b * &c * &c + Int::from(4) * &b * &b * &b * &d
            - Int::from(18) * &b * &c * &d
            + Int::from(4) * &c * &c * &c;
        let x = &three * &c - &b * &b;
        if !pdiv(&w) {
            return done(Kodaira::I0Star, n - 4, &e);
        }
        if !pdiv(&x) {
            // Double root: move it to 0 mod p.
            let r0 = if pu == 2 {
                c.clone()
            } else if pu == 3 {
                &b * &c
            } else {
                (&b * &c - Int::from(9) * &d) * inv_mod(&(&two * &x), p)
            };
            let r = p * md(&r0, p);
            e.rst(&r, &zero, &zero);
            let (mut ix, mut iy) = (3u32, 3u32);
            let (mut mx, mut my) = (pp.clone(), pp.clone());
            loop {
                let a3t = &e.a3 / &my;
                let a6t = &e.a6 / (&mx * &my);
                if !pdiv(&(&a3t * &a3t + Int::from(4) * &a6t)) {
                    break;
                }
                let t = if pu == 2 {
                    &my * &a6t
                } else {
                    &my * md(&(-&a3t * inv_mod(&two, p)), p)
                };
                e.rst(&zero, &zero, &t);
                my = &my * p;
                iy += 1;
                let a2t = &e.a2 / p;
                let a4t = &e.a4 / (p * &mx);
                let a6t = &e.a6 / (&mx * &my);
                if !pdiv(&(&a4t * &a4t - Int::from(4) * &a6t * &a2t)) {
                    break;
                }
                let r = if pu == 2 {
                    &mx * &a6t * &a2t
                } else {
                    &mx * md(&(-&a4t * inv_mod(&(&two * &a2t), p)), p)
                };
                e.rst(&r, &zero, &zero);
                mx = &mx * p;
                ix += 1;
            }
            let m = ix + iy - 5;
            return done(Kodaira::InStar(m), n - m - 4, &e);
        }
        // Triple root: move it to 0 mod p.
        let rp = if pu == 2 {
            c.clone()
        } else if pu == 3 {
            -&d
        } else {
            -&b * inv_mod(&three, p)
        };
        let r = p * md(&rp, p);
        e.rst(&r, &zero, &zero);
        let x3 = &e.a3 / &pp;
        let x6 = &e.a6 / (&pp * &pp);
        if !pdiv(&(&x3 * &x3 + Int::from(4) * &x6)) {
            return done(Kodaira::IVStar, n - 6, &e);
        }
        let t0 = if pu == 2 {
            x6.clone()
        } else {
            &x3 * inv_mod(&two, p)
        };
        let t = -&pp * md(&t0, p);
        e.rst(&zero, &zero, &t);
        if ord(&e.a4, p) < 4 {
            return done(Kodaira::IIIStar, n - 7, &e);
        }
        if ord(&e.a6, p) < 6 {
            return done(Kodaira::IIStar, n - 8, &e);
        }
        // Non-minimal: scale down and start again.
        e = M {
            a1: &e.a1 / p,
            a2: &e.a2 / &pp,
            a3: &e.a3 / (&pp * p),
            a4: &e.a4 / (&pp * &pp),
            a6: &e.a6 / (&pp * &pp * &pp),
        };
    }
}

/// Conductor exponent of an integral model at p, with a p-minimal model.
pub fn tate_exponent(e: &WeierstrassModel, p: &Int) -> Result<(u32, WeierstrassModel)> {
    let c = e
        .int_coeffs()
        .ok_or_else(|| Error::Precondition("model must be integral".into()))?;
    let r = tate(&c, p)?;
    let m = r.minimal_model.map(num_rational::BigRational::from_integer);
    Ok((r.exponent, crate::curve::Weierstrass::new(m)))
}

/// Conductor of an integral model (factoring its discriminant).
pub fn conductor(c: &[Int; 5]) -> Result<Int> {
    let m = M {
        a1: c[0].clone(),
        a2: c[1].clone(),
        a3: c[2].clone(),
        a4: c[3].clone(),
        a6: c[4].clone(),
    };
    let d = m.disc();
    let mut n = Int::one();
    for (p, _) in crate::arith::int::factor(&d.abs()) {
        let f = tate(c, &p)?.exponent;
        n *= p.pow(f);
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(a: [i64; 5]) -> [Int; 5] {
        a.map(Int::from)
    }

    #[test]
    fn known_conductors() {
        // Cremona labels: 11a1, 37a1, 17a1, 27a1, 32a1, 64a1, 256a1, 15a1.
        assert_eq!(
            conductor(&ints([0, -1, 1, -10, -20])).unwrap(),
            Int::from(11)
        );
        assert_eq!(conductor(&ints([0, 0, 1, -1, 0])).unwrap(), Int::from(37));
        assert_eq!(
            conductor(&ints([1, -1, 1, -1, -14])).unwrap(),
            Int::from(17)
        );
        assert_eq!(conductor(&ints([0, 0, 1, 0, -7])).unwrap(), Int::from(27));
        assert_eq!(conductor(&ints([0, 0, 0, 4, 0])).unwrap(), Int::from(32));
        assert_eq!(conductor(&ints([0, 0, 0, -4, 0])).unwrap(), Int::from(64));
        assert_eq!(conductor(&ints([0, 0, 0, -2, 0])).unwrap(), Int::from(256));
        assert_eq!(
            conductor(&ints([1, 1, 1, -10, -10])).unwrap(),
            Int::from(15)
        );
    }

    #[test]
    fn nonminimal_is_reduced() {
        // 11a1 scaled by u = 2 and u = 3.
        for u in [2i64, 3] {
            let c = [0, -u * u, u * u * u, -10 * u.pow(4), -20 * u.pow(6)];
            let r = tate(&ints(c), &Int::from(u)).unwrap();
            assert_eq!(r.exponent, 0);
        }
        let r = tate(&ints([0, -1, 1, -10, -20]), &Int::from(11)).unwrap();
        assert_eq!(r.kodaira, Kodaira::In(5));
    }
}
