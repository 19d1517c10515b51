//! Prime fields 𝔽_p and quadratic extensions 𝔽_{p²} = 𝔽_p[t]/(t² − r), with r
//! the least positive quadratic non-residue.

use super::int::{inv_mod, is_prime_u64, legendre, rat_mod, sqrt_mod, Rat};
use crate::error::{Error, Result};

/// A finite field of odd characteristic and degree 1 or 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fq {
    pub p: u64,
    pub degree: u32,
    /// Non-residue defining the quadratic extension (unused for degree 1).
    pub r: u64,
}

/// Element a + b·t (b = 0 in the prime field).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Fe {
    pub a: u64,
    pub b: u64,
}

#[inline]
fn mm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

impl Fq {
    pub fn new(p: u64, degree: u32) -> Result<Self> {
        if !is_prime_u64(p) || p == 2 {
            return Err(Error::NotPrime(format!("{p} (odd prime required)")));
        }
        if !(1..=2).contains(&degree) {
            return Err(Error::Invalid(format!(
                "unsupported extension degree {degree}"
            )));
        }
        let r = (2..p).find(|&r| legendre(r as i64, p) == -1).unwrap_or(0);
        Ok(Fq { p, degree, r })
    }

    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1)
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.degree)
    }

    pub fn elem(&self, a: u64, b: u64) -> Fe {
        Fe {
            a: a % self.p,
            b: if self.degree == 1 { 0 } else { b % self.p },
        }
    }

    pub fn from_i64(&self, x: i64) -> Fe {
        Fe {
            a: x.rem_euclid(self.p as i64) as u64,
            b: 0,
        }
    }

    pub fn from_rat(&self, x: &Rat) -> Option<Fe> {
        Some(Fe {
            a: rat_mod(x, self.p)?,
            b: 0,
        })
    }

    pub fn zero(&self) -> Fe {
        Fe::default()
    }

    pub fn one(&self) -> Fe {
        Fe { a: 1, b: 0 }
    }

    /// The generator t of the quadratic extension.
    pub fn t(&self) -> Fe {
        Fe { a: 0, b: 1 }
    }

    pub fn add(&self, x: Fe, y: Fe) -> Fe {
        Fe {
            a: (x.a + y.a) % self.p,
            b: (x.b + y.b) % self.p,
        }
    }

    pub fn sub(&self, x: Fe, y: Fe) -> Fe {
        Fe {
            a: (x.a + self.p - y.a) % self.p,
            b: (x.b + self.p - y.b) % self.p,
        }
    }

    pub fn neg(&self, x: Fe) -> Fe {
        self.sub(self.zero(), x)
    }

    pub fn mul(&self, x: Fe, y: Fe) -> Fe {
        let p = self.p;
        if self.degree == 1 {
            return Fe {
                a: mm(x.a, y.a, p),
                b: 0,
            };
        }
        let a = (mm(x.a, y.a, p) + mm(mm(x.b, y.b, p), self.r, p)) % p;
        let b = (mm(x.a, y.b, p) + mm(x.b, y.a, p)) % p;
        Fe { a, b }
    }

    pub fn pow(&self, x: Fe, mut e: u64) -> Fe {
        let mut r = self.one();
        let mut b = x;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    /// Norm to 𝔽_p.
    pub fn norm(&self, x: Fe) -> u64 {
        if self.degree == 1 {
            x.a
        } else {
            (mm(x.a, x.a, self.p) + self.p - mm(mm(x.b, x.b, self.p), self.r, self.p)) % self.p
        }
    }

    pub fn inv(&self, x: Fe) -> Option<Fe> {
        let n = self.norm(x);
        if n == 0 {
            return None;
        }
        let ni = inv_mod(n, self.p);
        // (a + bt)⁻¹ = (a − bt)/N
        Some(Fe {
            a: mm(x.a, ni, self.p),
            b: mm((self.p - x.b) % self.p, ni, self.p),
        })
    }

    pub fn is_zero(&self, x: Fe) -> bool {
        x.a == 0 && x.b == 0
    }

    /// Quadratic character χ_q(x) ∈ {−1, 0, 1}; on 𝔽_{p²} it is the Legendre
    /// symbol of the norm.
    pub fn chi(&self, x: Fe) -> i64 {
        legendre(self.norm(x) as i64, self.p)
    }

    /// A square root of an element of 𝔽_p inside this field.
    pub fn sqrt_of_base(&self, a: u64) -> Option<Fe> {
        if let Some(s) = sqrt_mod(a, self.p) {
            return Some(Fe { a: s, b: 0 });
        }
        if self.degree == 1 {
            return None;
        }
        // a = r·c² with c ∈ 𝔽_p, so √a = c·t.
        let c = sqrt_mod(mm(a, inv_mod(self.r, self.p), self.p), self.p)?;
        Some(Fe { a: 0, b: c })
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> + '_ {
        let p = self.p;
        let bmax = if self.degree == 1 { 1 } else { p };
        (0..bmax).flat_map(move |b| (0..p).map(move |a| Fe { a, b }))
    }

    pub fn frobenius(&self, x: Fe) -> Fe {
        self.pow(x, self.p)
    }
}

pub fn legendre_fe(q: &Fq, x: Fe) -> i64 {
    q.chi(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_small() {
        for p in [3u64, 5, 7, 11] {
            let f = Fq::new(p, 2).unwrap();
            let elems: Vec<Fe> = f.elements().collect();
            assert_eq!(elems.len() as u64, p * p);
            for &x in &elems {
                if !f.is_zero(x) {
                    assert_eq!(f.mul(x, f.inv(x).unwrap()), f.one());
                    assert_eq!(f.pow(x, p * p - 1), f.one());
                }
            }
            let t = f.t();
            assert_eq!(f.mul(t, t), f.from_i64(f.r as i64));
            for a in 1..p {
                let s = f.sqrt_of_base(a).unwrap();
                assert_eq!(f.mul(s, s), f.from_i64(a as i64));
            }
        }
        assert!(Fq::new(9, 1).is_err());
    }
}
