//! Small exponents for D = 125: the (2, 2, 4l) descent to the hyperelliptic
//! curves C_i: z² = c₂c₅α^{4l} − c₂'c₅'β^{4l}, their local solubility, and the
//! genus-one quotients of diagonal quartics.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::int::{is_prime_u64, Int};
use crate::error::{Error, Result};

/// z² = c₂c₅α^{4l} − c₂'c₅'β^{4l}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DescentCurve {
    pub l: u32,
    #[serde(serialize_with = "crate::arith::int::ser_int")]
    pub c2: Int,
    #[serde(serialize_with = "crate::arith::int::ser_int")]
    pub c5: Int,
    #[serde(serialize_with = "crate::arith::int::ser_int")]
    pub c2_dual: Int,
    #[serde(serialize_with = "crate::arith::int::ser_int")]
    pub c5_dual: Int,
}

impl DescentCurve {
    /// Coefficient of α^{4l}.
    pub fn lead(&self) -> Int {
        &self.c2 * &self.c5
    }

    /// Coefficient of β^{4l}, with the sign of the form.
    pub fn tail(&self) -> Int {
        -(&self.c2_dual * &self.c5_dual)
    }

    pub fn degree(&self) -> u32 {
        4 * self.l
    }

    /// F(α, β).
    pub fn eval(&self, alpha: &Int, beta: &Int) -> Int {
        let n = self.degree();
        self.lead() * alpha.pow(n) + self.tail() * beta.pow(n)
    }
}

impl std::fmt::Display for DescentCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let n = self.degree();
        write!(f, "z^2 = {}*a^{n} - {}*b^{n}", self.lead(), -self.tail())
    }
}

/// The four curves from w ± z² = 2c₂c₅α^{4l}, 2c₂'c₅'β^{4l}, in the order
/// (c₂, c₅) = (1, 1), (1, 5³), (2^{4l−2}, 1), (2^{4l−2}, 5³).
pub fn descent_curves_d125(l: u32) -> Result<[DescentCurve; 4]> {
    if l < 2 {
        return Err(Error::Precondition(format!("l = {l} must exceed 1")));
    }
    let two = Int::one() << (4 * l - 2) as usize;
    let five = Int::from(125);
    let mk = |c2: &Int, c5: &Int| {
        let c2_dual = if c2.is_one() { two.clone() } else { Int::one() };
        let c5_dual = if c5.is_one() {
            five.clone()
        } else {
            Int::one()
        };
        DescentCurve {
            l,
            c2: c2.clone(),
            c5: c5.clone(),
            c2_dual,
            c5_dual,
        }
    };
    let one = Int::one();
    Ok([
        mk(&one, &one),
        mk(&one, &five),
        mk(&two, &one),
        mk(&two, &five),
    ])
}

/// Genus of z² = F(α, β) for a separable binary form of degree 4l: 2l − 1.
/// Aα^{4l} + Bβ^{4l} is separable iff AB ≠ 0 (its roots are the 4l-th roots of −B/A).
pub fn genus_hyper(c: &DescentCurve) -> Result<u32> {
    if c.l < 1 || c.lead().is_zero() || c.tail().is_zero() {
        return Err(Error::Invalid(format!("{c} is not separable")));
    }
    Ok(2 * c.l - 1)
}

/// Outcome of the ℚ_p search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum LocalSolubility {
    /// (α : β) with F(α, β) a p-adic square, certified at the stated precision.
    Soluble {
        alpha: String,
        beta: String,
        precision: u32,
    },
    /// Every residue class was closed before the depth cap.
    Insoluble { classes: usize, depth: u32 },
    /// Some class was still open at the cap.
    Undecided { depth: u32 },
}

impl LocalSolubility {
    pub fn decided(&self) -> Option<bool> {
        match self {
            LocalSolubility::Soluble { .. } => Some(true),
            LocalSolubility::Insoluble { .. } => Some(false),
            LocalSolubility::Undecided { .. } => None,
        }
    }
}

fn val(n: &Int, p: &Int) -> u32 {
    if n.is_zero() {
        return u32::MAX;
    }
    let mut v = 0;
    let mut m = n.clone();
    while (&m % p).is_zero() {
        m /= p;
        v += 1;
    }
    v
}

/// Whether a p-adic unit known modulo p^prec is a square; None if undetermined.
fn unit_is_square(u: &Int, p: u64, prec: u32) -> Option<bool> {
    let need = if p == 2 { 3 } else { 1 };
    if prec < need {
        return None;
    }
    if p == 2 {
        return Some(u.mod_floor(&Int::from(8)) == Int::one());
    }
    let r = u.mod_floor(&Int::from(p)).to_u64().unwrap();
    Some(crate::arith::int::legendre(r as i64, p) == 1)
}

/// Taylor coefficients of f(x₀ + p^k t) in t.
fn shifted(f: &[Int], x0: &Int, pk: &Int) -> Vec<Int> {
    let n = f.len();
    let mut c = f.to_vec();
    // Repeated synthetic division gives the coefficients of f(x₀ + s).
    for i in 0..n {
        for j in (i + 1..n).rev() {
            let t = &c[j] * x0;
            c[j - 1] += t;
        }
    }
    let mut scale = Int::one();
    for ci in c.iter_mut() {
        *ci *= &scale;
        scale *= pk;
    }
    c
}

enum Class {
    Square,
    NoSquare,
    Split,
}

/// Decide whether f takes a square value (possibly 0) on x₀ + p^k ℤ_p.
fn classify(f: &[Int], x0: &Int, k: u32, p: u64) -> Class {
    let pb = Int::from(p);
    let pk = pb.pow(k);
    let c = shifted(f, x0, &pk);
    let v0 = val(&c[0], &pb);
    let mu = c[1..].iter().map(|x| val(x, &pb)).min().unwrap_or(u32::MAX);
    // A simple root in the class: ord f(x₀) > 2·ord(c₁) (Hensel).
    if v0 != u32::MAX && c.len() > 1 {
        let v1 = val(&c[1], &pb);
        if v1 != u32::MAX && v0 > 2 * v1 {
            return Class::Square;
        }
    }
    if v0 == u32::MAX {
        return Class::Square;
    }
    if v0 >= mu {
        return Class::Split;
    }
    if v0 % 2 == 1 {
        return Class::NoSquare;
    }
    let u = &c[0] / pb.pow(v0);
    match unit_is_square(&u, p, mu - v0) {
        Some(true) => Class::Square,
        Some(false) => Class::NoSquare,
        None => Class::Split,
    }
}

/// Search x ∈ x₀ + p^k ℤ_p for a square value, refining residue classes.
fn search(
    f: &[Int],
    x0: Int,
    k: u32,
    p: u64,
    cap: u32,
    closed: &mut usize,
) -> std::result::Result<Option<(Int, u32)>, u32> {
    match classify(f, &x0, k, p) {
        Class::Square => Ok(Some((x0, k))),
        Class::NoSquare => {
            *closed += 1;
            Ok(None)
        }
        Class::Split if k >= cap => Err(k),
        Class::Split => {
            let pk = Int::from(p).pow(k);
            let mut undecided = None;
            for j in 0..p {
                let x = &x0 + &pk * Int::from(j);
                match search(f, x, k + 1, p, cap, closed) {
                    Ok(Some(hit)) => return Ok(Some(hit)),
                    Ok(None) => {}
                    Err(d) => undecided = Some(d),
                }
            }
            undecided.map_or(Ok(None), Err)
        }
    }
}

/// Whether z² = F(α, β) has a point over ℚ_p, by refining residue classes of
/// (α : β) in the charts β = 1 (α ∈ ℤ_p) and α = 1 (β ∈ pℤ_p).
pub fn local_points_exist(c: &DescentCurve, p: u64) -> Result<LocalSolubility> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    genus_hyper(c)?;
    let n = c.degree() as usize;
    let mut chart_beta = vec![Int::zero(); n + 1];
    chart_beta[0] = c.tail();
    chart_beta[n] = c.lead();
    let mut chart_alpha = vec![Int::zero(); n + 1];
    chart_alpha[0] = c.lead();
    chart_alpha[n] = c.tail();
    // The depth needed grows with ord_p of the coefficients and the discriminant.
    let cap = 3 * (val(&c.lead(), &Int::from(p)).min(64) + val(&c.tail(), &Int::from(p)).min(64))
        + 6 * c.degree()
        + 8;
    let starts: Vec<(bool, u64)> = (0..p)
        .map(|r| (true, r))
        .chain(std::iter::once((false, 0)))
        .collect();
    let results: Vec<(bool, usize, std::result::Result<Option<(Int, u32)>, u32>)> = starts
        .par_iter()
        .map(|&(beta_one, r)| {
            let mut closed = 0;
            let f = if beta_one { &chart_beta } else { &chart_alpha };
            let res = search(f, Int::from(r), 1, p, cap, &mut closed);
            (beta_one, closed, res)
        })
        .collect();
    let mut classes = 0;
    let mut undecided = None;
    for (beta_one, closed, res) in results {
        classes += closed;
        match res {
            Ok(Some((x, k))) => {
                let (alpha, beta) = if beta_one {
                    (x, Int::one())
                } else {
                    (Int::one(), x)
                };
                return Ok(LocalSolubility::Soluble {
                    alpha: alpha.to_string(),
                    beta: beta.to_string(),
                    precision: k,
                });
            }
            Ok(None) => {}
            Err(d) => undecided = Some(d),
        }
    }
    Ok(match undecided {
        Some(depth) => LocalSolubility::Undecided { depth },
        None => LocalSolubility::Insoluble {
            classes,
            depth: cap,
        },
    })
}

/// Projective point with integer coordinates.
pub type ProjPoint = [Int; 3];

/// [x : y : z] on A X⁴ + B Y⁴ + C Z⁴ = 0 ↦ [B y² z : B x² y : −A z³] on
/// Y²Z = X³ + (BC/A²) X Z².
pub fn quartic_to_elliptic(a: &Int, b: &Int, c: &Int, point: &ProjPoint) -> Result<ProjPoint> {
    let [x, y, z] = point;
    if a.is_zero() || b.is_zero() || c.is_zero() {
        return Err(Error::Invalid(
            "diagonal quartic needs nonzero coefficients".into(),
        ));
    }
    if a * x.pow(4) + b * y.pow(4) + c * z.pow(4) != Int::zero()
        || (x.is_zero() && y.is_zero() && z.is_zero())
    {
        return Err(Error::NotOnCurve);
    }
    let image = [b * y * y * z, b * x * x * y, -(a * z.pow(3))];
    if image.iter().all(|t| t.is_zero()) {
        return Err(Error::Invalid(
            "the quotient map is undefined at a point with z = 0".into(),
        ));
    }
    Ok(image)
}

/// Whether [X : Y : Z] lies on Y²Z = X³ + (BC/A²) X Z², cleared of denominators.
pub fn on_quotient(a: &Int, b: &Int, c: &Int, q: &ProjPoint) -> bool {
    let [x, y, z] = q;
    a * a * (y * y * z - x.pow(3)) == b * c * x * z * z
}

/// The three quotients obtained by cycling the coordinates: (A, B, C) with
/// [x : y : z], (B, C, A) with [y : z : x], (C, A, B) with [z : x : y].
pub fn quartic_quotients(
    a: &Int,
    b: &Int,
    c: &Int,
    point: &ProjPoint,
) -> Vec<Result<([Int; 3], ProjPoint)>> {
    let [x, y, z] = point.clone();
    let perms = [
        (
            [a.clone(), b.clone(), c.clone()],
            [x.clone(), y.clone(), z.clone()],
        ),
        (
            [b.clone(), c.clone(), a.clone()],
            [y.clone(), z.clone(), x.clone()],
        ),
        ([c.clone(), a.clone(), b.clone()], [z, x, y]),
    ];
    perms
        .into_iter()
        .map(|(k, pt)| quartic_to_elliptic(&k[0], &k[1], &k[2], &pt).map(|img| (k, img)))
        .collect()
}

/// Integer polynomials in (A, B, C, x, y, z).
type Poly6 = BTreeMap<[u32; 6], Int>;

fn var(i: usize) -> Poly6 {
    let mut e = [0; 6];
    e[i] = 1;
    BTreeMap::from([(e, Int::one())])
}

fn pmul(f: &Poly6, g: &Poly6) -> Poly6 {
    let mut out = Poly6::new();
    for (ea, ca) in f {
        for (eb, cb) in g {
            let mut e = [0; 6];
            for i in 0..6 {
                e[i] = ea[i] + eb[i];
            }
            *out.entry(e).or_insert_with(Int::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn padd(f: &Poly6, g: &Poly6, sign: i64) -> Poly6 {
    let mut out = f.clone();
    for (e, c) in g {
        *out.entry(*e).or_insert_with(Int::zero) += c * Int::from(sign);
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn pprod(fs: &[&Poly6]) -> Poly6 {
    fs.iter()
        .fold(BTreeMap::from([([0; 6], Int::one())]), |acc, f| {
            pmul(&acc, f)
        })
}

/// A²(Y²Z − X³) − BC·X·Z² = −A²B²y²z³·(Ax⁴ + By⁴ + Cz⁴) as polynomials in
/// indeterminate A, B, C, x, y, z, for (X, Y, Z) the image of [x : y : z].
pub fn verify_quotient_identity() -> bool {
    let [a, b, c, x, y, z] = [0, 1, 2, 3, 4, 5].map(var);
    let neg = BTreeMap::from([([0; 6], -Int::one())]);
    let xx = pprod(&[&b, &y, &y, &z]);
    let yy = pprod(&[&b, &x, &x, &y]);
    let zz = pprod(&[&neg, &a, &z, &z, &z]);
    let lhs = padd(
        &pmul(
            &pprod(&[&a, &a]),
            &padd(&pprod(&[&yy, &yy, &zz]), &pprod(&[&xx, &xx, &xx]), -1),
        ),
        &pprod(&[&b, &c, &xx, &zz, &zz]),
        -1,
    );
    let quartic = padd(
        &padd(
            &pprod(&[&a, &x, &x, &x, &x]),
            &pprod(&[&b, &y, &y, &y, &y]),
            1,
        ),
        &pprod(&[&c, &z, &z, &z, &z]),
        1,
    );
    let rhs = pprod(&[&neg, &a, &a, &b, &b, &y, &y, &z, &z, &z, &quartic]);
    lhs == rhs
}

/// (w + z²)(w − z²) = 5³B⁴ and gcd(w + z², w − z²) = 2 for the a = 1 class on E₁₂₅ with 2 | B.
pub fn check_d125_factorisation(z: &Int, w: &Int, b: &Int) -> bool {
    let u = w + z * z;
    let v = w - z * z;
    b.is_even() && &u * &v == Int::from(125) * b.pow(4) && u.gcd(&v) == Int::from(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int::{int, legendre, primes_upto};

    #[test]
    fn curves_for_l2() {
        let cs = descent_curves_d125(2).unwrap();
        assert_eq!((cs[1].lead(), cs[1].tail()), (int(125), int(-64)));
        assert_eq!((cs[0].lead(), cs[0].tail()), (int(1), int(-8000)));
        assert_eq!((cs[3].lead(), cs[3].tail()), (int(8000), int(-1)));
        assert_eq!(cs[1].to_string(), "z^2 = 125*a^8 - 64*b^8");
        assert!(descent_curves_d125(1).is_err());
    }

    #[test]
    fn genus() {
        for (l, g) in [(2, 3), (3, 5), (5, 9)] {
            for c in descent_curves_d125(l).unwrap() {
                assert_eq!(genus_hyper(&c).unwrap(), g);
            }
        }
        let mut bad = descent_curves_d125(2).unwrap()[0].clone();
        bad.c5_dual = int(0);
        assert!(genus_hyper(&bad).is_err());
    }

    #[test]
    fn c2_has_no_2adic_points() {
        let cs = descent_curves_d125(2).unwrap();
        assert_eq!(
            local_points_exist(&cs[1], 2).unwrap().decided(),
            Some(false)
        );
        // (α, β) = (1, 0) lies on C₁.
        assert_eq!(local_points_exist(&cs[0], 2).unwrap().decided(), Some(true));
    }

    /// A smooth 𝔽_p point lifts; at p ≥ 37 the Weil bound guarantees one for g = 3.
    #[test]
    fn agrees_with_point_counts() {
        let cs = descent_curves_d125(2).unwrap();
        for p in primes_upto(60).into_iter().filter(|&p| p != 2 && p != 5) {
            for c in &cs {
                let smooth = (0..p).any(|a| {
                    let f = c
                        .eval(&Int::from(a), &Int::one())
                        .mod_floor(&Int::from(p))
                        .to_u64()
                        .unwrap();
                    f != 0 && legendre(f as i64, p) == 1
                }) || legendre(c.lead().mod_floor(&Int::from(p)).to_i64().unwrap(), p)
                    == 1;
                let got = local_points_exist(c, p).unwrap().decided();
                if smooth {
                    assert_eq!(got, Some(true), "{c} at {p}");
                }
                if p >= 37 {
                    assert_eq!(got, Some(true), "{c} at {p}");
                }
                assert!(got.is_some());
            }
        }
    }

    #[test]
    fn hensel_decides_odd_valuations() {
        // z² = 3α⁸ − 9β⁸ at 3: α must be divisible by 3, then 3 ∤ β forces ord = 2 with unit −1.
        let c = DescentCurve {
            l: 2,
            c2: int(3),
            c5: int(1),
            c2_dual: int(9),
            c5_dual: int(1),
        };
        assert_eq!(local_points_exist(&c, 3).unwrap().decided(), Some(false));
    }

    #[test]
    fn quotient_map() {
        let img =
            quartic_to_elliptic(&int(1), &int(1), &int(-2), &[int(1), int(1), int(1)]).unwrap();
        assert_eq!(img, [int(1), int(1), int(-1)]);
        // y² = x³ − 2x at (−1, −1).
        assert!(on_quotient(&int(1), &int(1), &int(-2), &img));
        for r in quartic_quotients(&int(1), &int(1), &int(-2), &[int(-1), int(1), int(1)]) {
            let (k, q) = r.unwrap();
            assert!(on_quotient(&k[0], &k[1], &k[2], &q));
        }
        assert_eq!(
            quartic_to_elliptic(&int(1), &int(1), &int(-2), &[int(1), int(2), int(1)]),
            Err(Error::NotOnCurve)
        );
        assert!(verify_quotient_identity());
    }

    /// Even multiples of (121/4, 1419/8) on E₁₂₅ have a = 1 and 2 | B.
    #[test]
    fn eds_factorisation() {
        use crate::arith::int::{is_square, rat};
        use crate::curve::pt;
        let d = int(125);
        let seq = crate::eds::eds_sequence(&d, &pt(rat(121, 4), rat(1419, 8)), 8).unwrap();
        for e in seq.iter().skip(1).step_by(2) {
            let fd = crate::frey::decompose(&d, &e.point).unwrap();
            assert!(fd.a.is_one());
            assert!(check_d125_factorisation(&fd.z, &fd.w, &fd.b), "m = {}", e.m);
            assert!(!is_square(&fd.b));
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]

        /// A global point is a local point everywhere.
        #[test]
        fn integer_points_are_local(a in 1i64..40, b in -40i64..40, p in proptest::sample::select(vec![2u64, 3, 5, 7])) {
            proptest::prop_assume!(b != 0);
            let c = DescentCurve { l: 1, c2: int(a), c5: int(1), c2_dual: int(b), c5_dual: int(1) };
            let global = (0..6i64).any(|x| (0..6i64).any(|y| {
                let v = c.eval(&int(x), &int(y));
                (x, y) != (0, 0) && v >= int(0) && crate::arith::int::is_square(&v)
            }));
            let got = local_points_exist(&c, p).unwrap().decided();
            proptest::prop_assert!(got.is_some());
            if global {
                proptest::prop_assert_eq!(got, Some(true));
            }
        }
    }
}
