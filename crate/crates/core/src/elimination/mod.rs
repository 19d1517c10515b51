//! Kraus-style elimination: a newform f survives at l when, for every
//! auxiliary prime p, some residual Frey curve mod p has a Frobenius trace
//! congruent to the matching trace of f modulo a prime above l.

mod cases;
mod pipeline;

pub use cases::*;
pub use pipeline::*;

use std::collections::{BTreeSet, HashMap};

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::ff::{Fe, Fq};
use crate::arith::int::{is_prime_u64, legendre, primes_upto, rat_mod, Int, Rat};
use crate::arith::numfield::NfElem;
use crate::arith::poly::{fp_roots, q_eval, QPoly};
use crate::curve::{trace_power, FqCurve};
use crate::eds::DivisorConstraint;
use crate::error::{Error, Result};
use crate::galois_cocycle::{GaloisField, Z40_REPS};
use crate::newforms::NewformRecord;

/// Field of definition of the Frey curve, with its Frobenius rule.
#[derive(Debug, Clone)]
pub enum DefinitionField {
    /// E^γ_{1,z,w} over ℚ with a rational twist chosen per level.
    Rational,
    /// ℚ(ζ₄₀ + ζ₄₀⁻¹), Frob_p = σ_{±p mod 40}.
    K40 { gf: GaloisField, gamma: NfElem },
    /// ℚ(√2, √−17) with σ₂ fixing √2 and σ₁₇ fixing √−17.
    Sqrt2SqrtM17 { gf: GaloisField, gamma: NfElem },
}

impl DefinitionField {
    fn galois(&self) -> Option<(&GaloisField, &NfElem)> {
        match self {
            DefinitionField::Rational => None,
            DefinitionField::K40 { gf, gamma } | DefinitionField::Sqrt2SqrtM17 { gf, gamma } => {
                Some((gf, gamma))
            }
        }
    }

    /// Index of Frob_p in the Galois group (0 over ℚ).
    pub fn frobenius(&self, p: u64) -> Result<usize> {
        match self {
            DefinitionField::Rational => Ok(0),
            DefinitionField::K40 { .. } => {
                if p.is_multiple_of(2) || p.is_multiple_of(5) {
                    return Err(Error::Precondition(format!("{p} ramifies in Q(zeta40)+")));
                }
                let k = p % 40;
                let k = if k > 20 { 40 - k } else { k };
                Ok(Z40_REPS.iter().position(|&r| r == k).expect("unit mod 40"))
            }
            DefinitionField::Sqrt2SqrtM17 { .. } => {
                if p == 2 || p == 17 {
                    return Err(Error::Precondition(format!(
                        "{p} ramifies in Q(sqrt2, sqrt-17)"
                    )));
                }
                let moves_m17 = legendre(-17, p) == -1;
                let moves_2 = legendre(2, p) == -1;
                Ok(moves_m17 as usize | (moves_2 as usize) << 1)
            }
        }
    }

    /// Order of Frob_p in Gal(K/ℚ): the residue degree of p in K.
    pub fn frobenius_order(&self, p: u64) -> Result<u32> {
        let Some((gf, _)) = self.galois() else {
            return Ok(1);
        };
        let s = self.frobenius(p)?;
        let (mut cur, mut r) = (s, 1);
        while cur != gf.group.identity() {
            cur = gf.group.mul(cur, s);
            r += 1;
        }
        Ok(r)
    }

    /// χ_𝔭(γ) on the residue field 𝔽_{p^r}: the Legendre symbol of the local
    /// norm ∏_k Frob^k(γ), read off any root of its characteristic polynomial mod p.
    pub fn twist_character(&self, p: u64) -> Result<i64> {
        let Some((gf, gamma)) = self.galois() else {
            return Ok(1);
        };
        let s = self.frobenius(p)?;
        let r = self.frobenius_order(p)?;
        let mut n = gamma.clone();
        let mut cur = s;
        for _ in 1..r {
            n = n.mul(&gf.act(cur, gamma));
            cur = gf.group.mul(cur, s);
        }
        let cp = n.charpoly();
        let red: Vec<u64> = cp
            .iter()
            .map(|c| {
                rat_mod(c, p)
                    .ok_or_else(|| Error::Precondition(format!("γ is not integral at {p}")))
            })
            .collect::<Result<_>>()?;
        let roots = fp_roots(&red, p);
        let chis: BTreeSet<i64> = roots.iter().map(|&x| legendre(x as i64, p)).collect();
        match chis.into_iter().collect::<Vec<_>>().as_slice() {
            [c] if *c != 0 => Ok(*c),
            other => Err(Error::Internal(format!(
                "local norm of γ at {p} gives characters {other:?}"
            ))),
        }
    }
}

/// A level the newforms may live at, with the twists of E_{1,z,w} that reach it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelSpec {
    pub level: u64,
    /// Character label such as "20.3"; None for trivial character.
    pub character: Option<String>,
    /// Rational twists γ (ignored for field twists).
    pub twists: Vec<i64>,
}

#[derive(Debug, Clone)]
pub struct EliminationContext {
    pub name: String,
    pub a: Int,
    pub a_hat: Int,
    pub field: DefinitionField,
    pub levels: Vec<LevelSpec>,
    pub primes: Vec<u64>,
    pub constraints: Vec<DivisorConstraint>,
    pub l_min: u64,
    pub l_max: u64,
    /// Also require (w² − a z⁴)/â to be a nonzero fourth power mod p when p ∤ B.
    pub fourth_power_filter: bool,
}

impl EliminationContext {
    pub fn with_constraints(mut self, qs: &[u64]) -> Self {
        self.constraints = qs.iter().map(|&q| DivisorConstraint { q, n: 1 }).collect();
        self
    }

    pub fn with_primes(mut self, ps: Vec<u64>) -> Self {
        self.primes = ps;
        self
    }

    pub fn with_l_range(mut self, l_min: u64, l_max: u64) -> Self {
        self.l_min = l_min;
        self.l_max = l_max;
        self
    }

    fn forces_multiplicative(&self, p: u64) -> bool {
        self.constraints.iter().any(|c| c.q == p)
    }

    /// Primes l in range; l = 2 is never processed.
    pub fn exponents(&self) -> Vec<u64> {
        primes_upto(self.l_max)
            .into_iter()
            .filter(|&l| l >= self.l_min.max(3))
            .collect()
    }

    fn level_spec(&self, level: u64) -> Option<&LevelSpec> {
        self.levels.iter().find(|s| s.level == level)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Reduction {
    Good,
    Multiplicative,
}

/// A residue class (z̄, w̄) ∈ 𝔽_p² \ {0}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ResidualPair {
    pub z: u64,
    pub w: u64,
    pub reduction: Reduction,
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn check_aux_prime(p: u64, ctx: &EliminationContext) -> Result<()> {
    if p == 2 || !is_prime_u64(p) {
        return Err(Error::Precondition(format!(
            "auxiliary prime {p} must be an odd prime"
        )));
    }
    let pb = Int::from(p);
    if (&ctx.a % &pb).is_zero() || (&ctx.a_hat % &pb).is_zero() {
        return Err(Error::Precondition(format!("{p} divides a·â")));
    }
    if let Some((_, gamma)) = ctx.field.galois() {
        let n = gamma.norm();
        if (n.numer() % &pb).is_zero() || (n.denom() % &pb).is_zero() {
            return Err(Error::Precondition(format!("{p} divides Norm(γ)")));
        }
        ctx.field.frobenius(p)?;
    }
    Ok(())
}

/// All (z̄, w̄) ≠ (0, 0) mod p split by reduction type; only multiplicative
/// pairs when a constraint forces p | B.
pub fn residual_frey_set(p: u64, ctx: &EliminationContext) -> Result<Vec<ResidualPair>> {
    check_aux_prime(p, ctx)?;
    let am = ctx.a.mod_floor(&Int::from(p)).to_u64().unwrap();
    let ahm = ctx.a_hat.mod_floor(&Int::from(p)).to_u64().unwrap();
    let ah_inv = crate::arith::int::inv_mod(ahm, p);
    let fourth: Vec<bool> = if ctx.fourth_power_filter {
        let mut v = vec![false; p as usize];
        for x in 1..p {
            v[mulmod(mulmod(x, x, p), mulmod(x, x, p), p) as usize] = true;
        }
        v
    } else {
        Vec::new()
    };
    let only_mult = ctx.forces_multiplicative(p);
    let mut out = Vec::new();
    for z in 0..p {
        let z4 = mulmod(mulmod(z, z, p), mulmod(z, z, p), p);
        for w in 0..p {
            if z == 0 && w == 0 {
                continue;
            }
            let diff = (mulmod(w, w, p) + p - mulmod(am, z4, p)) % p;
            let reduction = if diff == 0 {
                Reduction::Multiplicative
            } else {
                Reduction::Good
            };
            if only_mult && reduction == Reduction::Good {
                continue;
            }
            if ctx.fourth_power_filter
                && reduction == Reduction::Good
                && !fourth[mulmod(diff, ah_inv, p) as usize]
            {
                continue;
            }
            out.push(ResidualPair { z, w, reduction });
        }
    }
    Ok(out)
}

/// Per-prime data shared by all newforms.
#[derive(Debug, Clone)]
struct PrimeData {
    p: u64,
    /// Residue degree of p in the definition field.
    r: u32,
    chi_gamma: i64,
    /// Traces over 𝔽_{p^r} of the untwisted E_{a,z̄,w̄} on good pairs.
    base: BTreeSet<Int>,
    has_mult: bool,
}

/// (z, w) = (λz', λ²w') with (z', w') a fixed orbit representative; the curves
/// differ by the quadratic twist by λ.
fn orbit_rep(z: u64, w: u64, p: u64, nonres: u64) -> ((u64, u64), u64) {
    if z != 0 {
        let zi = crate::arith::int::inv_mod(z, p);
        ((1, mulmod(w, mulmod(zi, zi, p), p)), z)
    } else if legendre(w as i64, p) == 1 {
        ((0, 1), crate::arith::int::sqrt_mod(w, p).unwrap())
    } else {
        let q = mulmod(w, crate::arith::int::inv_mod(nonres, p), p);
        ((0, nonres), crate::arith::int::sqrt_mod(q, p).unwrap())
    }
}

/// Trace over 𝔽_{p^s} of Y² = X³ + 4ρz X² + 2(a z² + ρ w) X with ρ² = a.
fn untwisted_trace(f: &Fq, rho: Fe, am: u64, z: u64, w: u64) -> Result<i64> {
    let zf = f.from_i64(z as i64);
    let wf = f.from_i64(w as i64);
    let a2 = f.mul(f.mul(f.from_i64(4), rho), zf);
    let az2 = f.mul(f.from_i64(am as i64), f.mul(zf, zf));
    let a4 = f.mul(f.from_i64(2), f.add(az2, f.mul(rho, wf)));
    FqCurve {
        f: *f,
        a: [f.zero(), a2, f.zero(), a4, f.zero()],
    }
    .frobenius_trace()
}

/// Possible traces of Frobenius over 𝔽_{p^r} of the untwisted Frey curve for one
/// good pair, over both choices of √a mod p.
pub fn pair_traces(p: u64, pair: &ResidualPair, ctx: &EliminationContext) -> Result<Vec<Int>> {
    check_aux_prime(p, ctx)?;
    let r = ctx.field.frobenius_order(p)?;
    let am = ctx.a.mod_floor(&Int::from(p)).to_u64().unwrap();
    let s = if legendre(am as i64, p) == 1 { 1 } else { 2 };
    if r % s != 0 {
        return Err(Error::Internal(format!(
            "√a not in the residue field at {p}"
        )));
    }
    let f = Fq::new(p, s)?;
    let rho = f
        .sqrt_of_base(am)
        .ok_or_else(|| Error::Internal("no square root of a".into()))?;
    let q = (p as i64).pow(s);
    let mut out = Vec::new();
    for root in [rho, f.neg(rho)] {
        let t = untwisted_trace(&f, root, am, pair.z, pair.w)?;
        out.push(trace_power(t, q, r / s));
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn prime_data(p: u64, ctx: &EliminationContext) -> Result<PrimeData> {
    let pairs = residual_frey_set(p, ctx)?;
    let r = ctx.field.frobenius_order(p)?;
    let chi_gamma = ctx.field.twist_character(p)?;
    let am = ctx.a.mod_floor(&Int::from(p)).to_u64().unwrap();
    let s = if legendre(am as i64, p) == 1 { 1 } else { 2 };
    if r % s != 0 {
        return Err(Error::Internal(format!(
            "√a not in the residue field at {p}"
        )));
    }
    let f = Fq::new(p, s)?;
    let nonres = (2..p).find(|&x| legendre(x as i64, p) == -1).unwrap();
    let rho = f
        .sqrt_of_base(am)
        .ok_or_else(|| Error::Internal("no square root of a".into()))?;
    let q = (p as i64).pow(s);
    let mut cache: HashMap<(u64, u64), Vec<i64>> = HashMap::new();
    let mut base = BTreeSet::new();
    let mut has_mult = false;
    for pair in &pairs {
        if pair.reduction == Reduction::Multiplicative {
            has_mult = true;
            continue;
        }
        let (rep, lambda) = orbit_rep(pair.z, pair.w, p, nonres);
        let ts = match cache.get(&rep) {
            Some(t) => t.clone(),
            None => {
                let t = vec![
                    untwisted_trace(&f, rho, am, rep.0, rep.1)?,
                    untwisted_trace(&f, f.neg(rho), am, rep.0, rep.1)?,
                ];
                cache.insert(rep, t.clone());
                t
            }
        };
        // χ_{p^s}(λ) for λ ∈ 𝔽_p^*.
        let chi = if s == 2 {
            1
        } else {
            legendre(lambda as i64, p)
        };
        for t in ts {
            base.insert(trace_power(chi * t, q, r / s));
        }
    }
    Ok(PrimeData {
        p,
        r,
        chi_gamma,
        base,
        has_mult,
    })
}

/// s_r = tr ρ(Frob_p)^r from the trace t and determinant d.
pub fn power_sum(t: &NfElem, d: &NfElem, r: u32) -> NfElem {
    let mut s0 = NfElem::from_rat(&t.field, Rat::from_integer(Int::from(2)));
    let mut s1 = t.clone();
    if r == 0 {
        return s0;
    }
    for _ in 1..r {
        let s2 = t.mul(&s1).sub(&d.mul(&s0));
        s0 = s1;
        s1 = s2;
    }
    s1
}

fn rat_to_int(x: Rat, what: &str) -> Result<Int> {
    if !x.is_integer() {
        return Err(Error::Internal(format!("{what} is not an integer: {x}")));
    }
    Ok(x.to_integer())
}

/// |Norm(s − v)| from the characteristic polynomial of s.
fn norm_shift(cp: &QPoly, v: &Int) -> Result<Int> {
    Ok(rat_to_int(q_eval(cp, &Rat::from_integer(v.clone())), "norm")?.abs())
}

/// Trace data of f at p: s_r(f) and the multiplicative-case element.
struct FormAtPrime {
    charpoly: QPoly,
    mult_norm: Int,
}

fn form_at_prime(f: &NewformRecord, p: u64, r: u32) -> Result<Option<FormAtPrime>> {
    let Some(ap) = f.ap.get(&p) else {
        return Ok(None);
    };
    let Some(eps) = f.character.value(p, &f.field) else {
        return Ok(None);
    };
    let pe = Rat::from_integer(Int::from(p));
    let d = eps.scale(&pe);
    let s = power_sum(ap, &d, r);
    let mult = if r == 1 {
        // a_p² − ε(p)(p + 1)².
        let c = Rat::from_integer(Int::from(p + 1).pow(2));
        ap.mul(ap).sub(&eps.scale(&c))
    } else {
        // Product over the signs of s_r ∓ (p^r + 1).
        let c = Rat::from_integer(Int::from(p).pow(r) + 1u32);
        s.mul(&s).sub(&NfElem::from_rat(&f.field, &c * &c))
    };
    let mult_norm = rat_to_int(mult.norm(), "norm")?.abs();
    Ok(Some(FormAtPrime {
        charpoly: s.charpoly(),
        mult_norm,
    }))
}

fn twisted_values(pd: &PrimeData, twists: &[i64], rational: bool) -> BTreeSet<Int> {
    let mut out = BTreeSet::new();
    if rational {
        for &g in twists {
            let chi = legendre(g, pd.p);
            for v in &pd.base {
                out.insert(v * chi);
            }
        }
    } else {
        for v in &pd.base {
            out.insert(v * pd.chi_gamma);
        }
    }
    out
}

/// B_p(f) = ∏ over residual traces v of Norm(s_r(f) − v), times the
/// multiplicative factor when p | B is possible; None when f has no data at p.
fn prime_product(
    f: &NewformRecord,
    pd: &PrimeData,
    ctx: &EliminationContext,
) -> Result<Option<Int>> {
    let Some(fp) = form_at_prime(f, pd.p, pd.r)? else {
        return Ok(None);
    };
    let spec = ctx
        .level_spec(f.level)
        .ok_or_else(|| Error::Precondition(format!("level {} not in context", f.level)))?;
    let rational = matches!(ctx.field, DefinitionField::Rational);
    let mut b = Int::one();
    for v in twisted_values(pd, &spec.twists, rational) {
        b *= norm_shift(&fp.charpoly, &v)?;
        if b.is_zero() {
            return Ok(Some(b));
        }
    }
    if pd.has_mult {
        b *= &fp.mult_norm;
    }
    Ok(Some(b))
}

/// Whether one residual pair is compatible with f modulo some λ | l.
pub fn trace_condition(
    f: &NewformRecord,
    l: u64,
    p: u64,
    pair: &ResidualPair,
    ctx: &EliminationContext,
) -> Result<bool> {
    check_aux_prime(p, ctx)?;
    if f.level.is_multiple_of(p) {
        return Err(Error::Precondition(format!(
            "{p} divides the level {}",
            f.level
        )));
    }
    if l == p {
        return Ok(true);
    }
    let r = ctx.field.frobenius_order(p)?;
    let Some(fp) = form_at_prime(f, p, r)? else {
        return Ok(true);
    };
    let lb = Int::from(l);
    match pair.reduction {
        Reduction::Multiplicative => Ok((&fp.mult_norm % &lb).is_zero()),
        Reduction::Good => {
            let spec = ctx
                .level_spec(f.level)
                .ok_or_else(|| Error::Precondition(format!("level {} not in context", f.level)))?;
            let chi_gamma = ctx.field.twist_character(p)?;
            let base = pair_traces(p, pair, ctx)?;
            let twists: Vec<i64> = match ctx.field {
                DefinitionField::Rational => spec.twists.iter().map(|&g| legendre(g, p)).collect(),
                _ => vec![chi_gamma],
            };
            for t in twists {
                for v in &base {
                    if (norm_shift(&fp.charpoly, &(v * t))? % &lb).is_zero() {
                        return Ok(true);
                    }
                }
            }
            Ok(false)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub l: u64,
    pub p: u64,
    /// B_p(f) mod l, nonzero.
    pub residue: u64,
}

/// B_p(f) with its factorisation over primes ≤ l_max and the remaining cofactor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeNorm {
    pub p: u64,
    pub value: String,
    pub small_factors: Vec<(u64, u32)>,
    pub cofactor: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NewformOutcome {
    pub label: String,
    pub level: u64,
    pub degree: usize,
    pub survivors: Vec<u64>,
    pub witnesses: Vec<Witness>,
    pub norms: Vec<PrimeNorm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EliminationReport {
    pub case: String,
    pub primes: Vec<u64>,
    pub constraints: Vec<u64>,
    pub l_min: u64,
    pub l_max: u64,
    pub newforms: Vec<NewformOutcome>,
}

impl EliminationReport {
    /// Newforms surviving at some l > bound.
    pub fn survivors_above(&self, bound: u64) -> Vec<&NewformOutcome> {
        self.newforms
            .iter()
            .filter(|n| n.survivors.iter().any(|&l| l > bound))
            .collect()
    }

    /// Every l (in range) at which some newform survives.
    pub fn surviving_exponents(&self) -> BTreeSet<u64> {
        self.newforms
            .iter()
            .flat_map(|n| n.survivors.iter().copied())
            .collect()
    }

    /// Each witness is backed by a stored B_p with l ∤ B_p.
    pub fn certificates_consistent(&self) -> bool {
        self.newforms.iter().all(|n| {
            n.witnesses.iter().all(|w| {
                let Some(pn) = n.norms.iter().find(|x| x.p == w.p) else {
                    return false;
                };
                let Ok(v) = pn.value.parse::<Int>() else {
                    return false;
                };
                let r = (&v % Int::from(w.l)).to_u64().unwrap_or(0);
                w.residue != 0 && r == w.residue && w.l != w.p
            })
        })
    }
}

fn small_factorisation(v: &Int, bound: u64) -> (Vec<(u64, u32)>, Int) {
    let mut rest = v.clone();
    let mut out = Vec::new();
    if rest.is_zero() {
        return (out, rest);
    }
    for q in primes_upto(bound) {
        let qb = Int::from(q);
        let mut e = 0;
        while (&rest % &qb).is_zero() {
            rest /= &qb;
            e += 1;
        }
        if e > 0 {
            out.push((q, e));
        }
    }
    (out, rest)
}

fn eliminate_one(
    f: &NewformRecord,
    data: &[PrimeData],
    ctx: &EliminationContext,
    ls: &[u64],
) -> Result<NewformOutcome> {
    let mut products: Vec<(u64, Option<Int>)> = Vec::with_capacity(data.len());
    for pd in data {
        if f.level.is_multiple_of(pd.p) {
            return Err(Error::Precondition(format!(
                "auxiliary prime {} divides the level {}",
                pd.p, f.level
            )));
        }
        products.push((pd.p, prime_product(f, pd, ctx)?));
    }
    let mut survivors = Vec::new();
    let mut witnesses = Vec::new();
    let mut used = BTreeSet::new();
    for &l in ls {
        let lb = Int::from(l);
        let hit = products.iter().find_map(|(p, b)| {
            let b = b.as_ref()?;
            if *p == l {
                return None;
            }
            let r = (b % &lb).to_u64().unwrap();
            (r != 0).then_some((*p, r))
        });
        match hit {
            Some((p, residue)) => {
                used.insert(p);
                witnesses.push(Witness { l, p, residue });
            }
            None => survivors.push(l),
        }
    }
    let norms = products
        .iter()
        .filter(|(p, _)| used.contains(p))
        .map(|(p, b)| {
            let b = b.clone().unwrap_or_default();
            let (small_factors, cofactor) = small_factorisation(&b, ctx.l_max);
            PrimeNorm {
                p: *p,
                value: b.to_string(),
                small_factors,
                cofactor: cofactor.to_string(),
            }
        })
        .collect();
    Ok(NewformOutcome {
        label: f.label.clone(),
        level: f.level,
        degree: f.degree(),
        survivors,
        witnesses,
        norms,
    })
}

/// Run the elimination for every newform and every prime l in range.
pub fn eliminate(
    ctx: &EliminationContext,
    newforms: &[NewformRecord],
) -> Result<EliminationReport> {
    if ctx.primes.is_empty() {
        return Err(Error::Precondition("empty auxiliary prime list".into()));
    }
    for f in newforms {
        if ctx.level_spec(f.level).is_none() {
            return Err(Error::Precondition(format!(
                "newform {} has level {} outside the context",
                f.label, f.level
            )));
        }
    }
    let data: Vec<PrimeData> = ctx
        .primes
        .par_iter()
        .map(|&p| prime_data(p, ctx))
        .collect::<Result<_>>()?;
    let ls = ctx.exponents();
    let mut out: Vec<NewformOutcome> = newforms
        .par_iter()
        .map(|f| eliminate_one(f, &data, ctx, &ls))
        .collect::<Result<_>>()?;
    out.sort_by(|a, b| (a.level, &a.label).cmp(&(b.level, &b.label)));
    Ok(EliminationReport {
        case: ctx.name.clone(),
        primes: ctx.primes.clone(),
        constraints: ctx.constraints.iter().map(|c| c.q).collect(),
        l_min: ctx.l_min,
        l_max: ctx.l_max,
        newforms: out,
    })
}

/// Recompute B_p for every witness and confirm l ∤ B_p.
pub fn verify_certificates(
    ctx: &EliminationContext,
    newforms: &[NewformRecord],
    report: &EliminationReport,
) -> Result<bool> {
    for n in &report.newforms {
        let f = newforms
            .iter()
            .find(|f| f.label == n.label && f.level == n.level)
            .ok_or_else(|| Error::Invalid(format!("newform {} missing", n.label)))?;
        for w in &n.witnesses {
            let pd = prime_data(w.p, ctx)?;
            let Some(b) = prime_product(f, &pd, ctx)? else {
                return Ok(false);
            };
            if w.l == w.p || (&b % Int::from(w.l)).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests;
