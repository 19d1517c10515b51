//! Elements u + v√d of a quadratic field ℚ(√d).

use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::int::{factor, rat_int, rat_sqrt, Int, Rat};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadElem {
    pub d: Int,
    pub u: Rat,
    pub v: Rat,
}

pub fn is_squarefree(d: &Int) -> bool {
    !d.is_zero() && factor(d).iter().all(|(_, e)| *e == 1)
}

impl QuadElem {
    pub fn new(d: Int, u: Rat, v: Rat) -> Result<Self> {
        if !is_squarefree(&d) || d.is_one() {
            return Err(Error::Invalid(format!("{d} is not a squarefree non-unit")));
        }
        Ok(QuadElem { d, u, v })
    }

    /// Constructor without the squarefree check; `d` must already be valid.
    pub fn raw(d: &Int, u: Rat, v: Rat) -> Self {
        QuadElem { d: d.clone(), u, v }
    }

    pub fn from_rat(d: &Int, u: Rat) -> Self {
        Self::raw(d, u, Rat::zero())
    }

    pub fn sqrt_d(d: &Int) -> Self {
        Self::raw(d, Rat::zero(), Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.v.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::raw(&self.d, self.u.clone(), -self.v.clone())
    }

    pub fn norm(&self) -> Rat {
        &self.u * &self.u - rat_int(&self.d) * &self.v * &self.v
    }

    pub fn trace(&self) -> Rat {
        &self.u + &self.u
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        Some(Self::raw(&self.d, &self.u / &n, -&self.v / &n))
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        Some(self * &o.inv()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::from_rat(&self.d, Rat::one());
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::raw(&self.d, &self.u * c, &self.v * c)
    }
}

/// A square root of x in ℚ(√d), if one exists.
///
/// Writing (b + c√d)² = u + v√d gives b² + dc² = u and 2bc = v, so b² is a root
/// of t² − ut + dv²/4, i.e. b² = (u ± √(u² − dv²))/2.
pub fn is_square_quad(x: &QuadElem) -> Option<QuadElem> {
    let d = rat_int(&x.d);
    if x.v.is_zero() {
        if let Some(r) = rat_sqrt(&x.u) {
            return Some(QuadElem::from_rat(&x.d, r));
        }
        let c = rat_sqrt(&(&x.u / &d))?;
        return Some(QuadElem::raw(&x.d, Rat::zero(), c));
    }
    let n = rat_sqrt(&x.norm())?;
    let two = Rat::from_integer(2.into());
    for cand in [(&x.u + &n) / &two, (&x.u - &n) / &two] {
        if cand.is_positive() {
            if let Some(b) = rat_sqrt(&cand) {
                let c = &x.v / (&two * &b);
                return Some(QuadElem::raw(&x.d, b, c));
            }
        }
    }
    None
}

pub fn quad_norm(x: &QuadElem) -> Rat {
    x.norm()
}

fn same_field(a: &QuadElem, b: &QuadElem) {
    assert_eq!(a.d, b.d, "quadratic elements from different fields");
}

impl<'a> Add<&'a QuadElem> for &'a QuadElem {
    type Output = QuadElem;
    fn add(self, o: &QuadElem) -> QuadElem {
        same_field(self, o);
        QuadElem::raw(&self.d, &self.u + &o.u, &self.v + &o.v)
    }
}

impl<'a> Sub<&'a QuadElem> for &'a QuadElem {
    type Output = QuadElem;
    fn sub(self, o: &QuadElem) -> QuadElem {
        same_field(self, o);
        QuadElem::raw(&self.d, &self.u - &o.u, &self.v - &o.v)
    }
}

impl<'a> Mul<&'a QuadElem> for &'a QuadElem {
    type Output = QuadElem;
    fn mul(self, o: &QuadElem) -> QuadElem {
        same_field(self, o);
        let d = rat_int(&self.d);
        QuadElem::raw(
            &self.d,
            &self.u * &o.u + d * &self.v * &o.v,
            &self.u * &o.v + &self.v * &o.u,
        )
    }
}

impl Neg for &QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem::raw(&self.d, -self.u.clone(), -self.v.clone())
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.v.is_zero() {
            write!(f, "{}", self.u)
        } else if self.u.is_zero() {
            write!(f, "{}*sqrt({})", self.v, self.d)
        } else {
            write!(f, "{} + {}*sqrt({})", self.u, self.v, self.d)
        }
    }
}
