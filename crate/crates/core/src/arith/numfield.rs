//! Number fields ℚ[x]/(m(x)) given by a monic integral polynomial, with
//! automorphisms supplied as images of the generator.

use num_traits::{One, Zero};
use std::fmt;
use std::sync::Arc;

use super::int::{Int, Rat};
use super::poly::{charpoly, det, q_from_ints, q_mul, q_rem_monic, q_trim, solve, QPoly};
use crate::error::{Error, Result};

#[derive(Debug, PartialEq, Eq)]
pub struct NumberField {
    pub name: String,
    /// Monic minimal polynomial, constant term first.
    pub poly: Vec<Int>,
    qpoly: QPoly,
}

impl NumberField {
    pub fn new(name: impl Into<String>, poly: Vec<Int>) -> Result<Arc<Self>> {
        if poly.len() < 2 || !poly.last().unwrap().is_one() {
            return Err(Error::Invalid(
                "field polynomial must be monic of degree ≥ 1".into(),
            ));
        }
        let qpoly = q_from_ints(&poly);
        Ok(Arc::new(NumberField {
            name: name.into(),
            poly,
            qpoly,
        }))
    }

    pub fn from_i64(name: impl Into<String>, poly: &[i64]) -> Result<Arc<Self>> {
        Self::new(name, poly.iter().map(|&c| Int::from(c)).collect())
    }

    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NfElem {
    pub field: Arc<NumberField>,
    /// Coordinates in the power basis 1, θ, …, θⁿ⁻¹.
    pub c: Vec<Rat>,
}

impl NfElem {
    pub fn new(field: &Arc<NumberField>, coeffs: Vec<Rat>) -> Self {
        let mut c = q_rem_monic(&coeffs, &field.qpoly);
        c.resize(field.degree(), Rat::zero());
        NfElem {
            field: field.clone(),
            c,
        }
    }

    pub fn from_i64(field: &Arc<NumberField>, coeffs: &[i64]) -> Self {
        Self::new(
            field,
            coeffs
                .iter()
                .map(|&x| Rat::from_integer(x.into()))
                .collect(),
        )
    }

    pub fn from_rat(field: &Arc<NumberField>, r: Rat) -> Self {
        Self::new(field, vec![r])
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        Self::from_rat(field, Rat::one())
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        Self::from_rat(field, Rat::zero())
    }

    pub fn gen(field: &Arc<NumberField>) -> Self {
        Self::new(field, vec![Rat::zero(), Rat::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn as_rational(&self) -> Option<Rat> {
        self.c[1..]
            .iter()
            .all(|x| x.is_zero())
            .then(|| self.c[0].clone())
    }

    fn check(&self, o: &Self) {
        assert!(
            Arc::ptr_eq(&self.field, &o.field) || self.field == o.field,
            "elements of different fields"
        );
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check(o);
        let c = self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect();
        NfElem {
            field: self.field.clone(),
            c,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.check(o);
        let c = self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect();
        NfElem {
            field: self.field.clone(),
            c,
        }
    }

    pub fn neg(&self) -> Self {
        NfElem {
            field: self.field.clone(),
            c: self.c.iter().map(|a| -a.clone()).collect(),
        }
    }

    pub fn scale(&self, r: &Rat) -> Self {
        NfElem {
            field: self.field.clone(),
            c: self.c.iter().map(|a| a * r).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check(o);
        NfElem::new(&self.field, q_mul(&self.c, &o.c))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::one(&self.field);
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        r
    }

    /// Matrix of multiplication by self on the power basis (columns = images of θʲ).
    pub fn mul_matrix(&self) -> Vec<Vec<Rat>> {
        let n = self.field.degree();
        let mut cols = Vec::with_capacity(n);
        let mut cur = self.clone();
        let theta = Self::gen(&self.field);
        for _ in 0..n {
            cols.push(cur.c.clone());
            cur = cur.mul(&theta);
        }
        (0..n)
            .map(|i| (0..n).map(|j| cols[j][i].clone()).collect())
            .collect()
    }

    /// Product of all conjugates (the determinant of multiplication).
    pub fn norm(&self) -> Rat {
        det(self.mul_matrix())
    }

    pub fn trace(&self) -> Rat {
        let m = self.mul_matrix();
        (0..m.len()).map(|i| m[i][i].clone()).sum()
    }

    /// Characteristic polynomial of multiplication by self (monic, degree n).
    pub fn charpoly(&self) -> QPoly {
        charpoly(&self.mul_matrix())
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.field.degree();
        let mut e0 = vec![Rat::zero(); n];
        e0[0] = Rat::one();
        let c = solve(self.mul_matrix(), e0)?;
        Some(NfElem {
            field: self.field.clone(),
            c,
        })
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        Some(self.mul(&o.inv()?))
    }

    /// Evaluate the representing polynomial at `x` (which may lie in another field).
    pub fn eval_at(&self, x: &NfElem) -> NfElem {
        let mut acc = NfElem::zero(&x.field);
        for c in self.c.iter().rev() {
            acc = acc.mul(x).add(&NfElem::from_rat(&x.field, c.clone()));
        }
        acc
    }

    /// Coefficients with trailing zeros removed.
    pub fn poly(&self) -> QPoly {
        let mut p = self.c.clone();
        q_trim(&mut p);
        p
    }
}

pub fn nf_norm(x: &NfElem) -> Rat {
    x.norm()
}

/// A field automorphism θ ↦ image, validated against the minimal polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automorphism {
    pub image: NfElem,
}

impl Automorphism {
    pub fn new(image: NfElem) -> Result<Self> {
        let f = image.field.clone();
        let m = NfElem {
            field: f.clone(),
            c: q_from_ints(&f.poly),
        };
        // m has degree n so it must be evaluated without reduction first.
        let mut acc = NfElem::zero(&f);
        for c in m.c.iter().rev() {
            acc = acc.mul(&image).add(&NfElem::from_rat(&f, c.clone()));
        }
        if !acc.is_zero() {
            return Err(Error::Invalid(format!(
                "image does not satisfy the minimal polynomial of {}",
                f.name
            )));
        }
        Ok(Automorphism { image })
    }

    pub fn identity(field: &Arc<NumberField>) -> Self {
        Automorphism {
            image: NfElem::gen(field),
        }
    }

    pub fn apply(&self, x: &NfElem) -> NfElem {
        x.eval_at(&self.image)
    }

    /// self ∘ other.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            image: self.apply(&other.image),
        }
    }
}

impl fmt::Display for NfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*t"),
                _ => format!("{c}*t^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}
