//! Dense univariate polynomials over ℚ and 𝔽_p, little-endian coefficient vectors.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::int::{inv_mod, powmod, Int, Rat};

pub type QPoly = Vec<Rat>;

pub fn q_trim(p: &mut QPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn q_from_ints(c: &[Int]) -> QPoly {
    c.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

pub fn q_mul(a: &[Rat], b: &[Rat]) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    q_trim(&mut r);
    r
}

pub fn q_add(a: &[Rat], b: &[Rat]) -> QPoly {
    let mut r = vec![Rat::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        r[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        r[i] += x;
    }
    q_trim(&mut r);
    r
}

pub fn q_sub(a: &[Rat], b: &[Rat]) -> QPoly {
    let nb: QPoly = b.iter().map(|x| -x.clone()).collect();
    q_add(a, &nb)
}

/// Remainder of `a` modulo a monic polynomial `m`.
pub fn q_rem_monic(a: &[Rat], m: &[Rat]) -> QPoly {
    let n = m.len() - 1;
    let mut r = a.to_vec();
    while r.len() > n {
        let lead = r.pop().unwrap();
        if lead.is_zero() {
            continue;
        }
        let off = r.len() - n;
        for (i, c) in m[..n].iter().enumerate() {
            r[off + i] -= &lead * c;
        }
    }
    q_trim(&mut r);
    r
}

pub fn q_eval(p: &[Rat], x: &Rat) -> Rat {
    p.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
}

/// Integer polynomial evaluation.
pub fn z_eval(p: &[Int], x: &Int) -> Int {
    p.iter().rev().fold(Int::zero(), |acc, c| acc * x + c)
}

/// Determinant over ℚ by Gaussian elimination.
pub fn det(mut m: Vec<Vec<Rat>>) -> Rat {
    let n = m.len();
    let mut d = Rat::one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Rat::zero();
        };
        if piv != c {
            m.swap(piv, c);
            d = -d;
        }
        let pv = m[c][c].clone();
        d *= &pv;
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] / &pv;
            for k in c..n {
                let t = &f * &m[c][k];
                m[r][k] -= t;
            }
        }
    }
    d
}

/// Solve m·x = b over ℚ (m square, invertible).
pub fn solve(mut m: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = m.len();
    for c in 0..n {
        let piv = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(piv, c);
        b.swap(piv, c);
        let pv = m[c][c].clone();
        for k in c..n {
            m[c][k] /= &pv;
        }
        b[c] /= &pv;
        for r in 0..n {
            if r == c || m[r][c].is_zero() {
                continue;
            }
            let f = m[r][c].clone();
            for k in c..n {
                let t = &f * &m[c][k];
                m[r][k] -= t;
            }
            let t = &f * &b[c];
            b[r] -= t;
        }
    }
    Some(b)
}

/// Characteristic polynomial det(X·I − m) via Hessenberg reduction.
pub fn charpoly(m: &[Vec<Rat>]) -> QPoly {
    let n = m.len();
    let mut h: Vec<Vec<Rat>> = m.to_vec();
    for mcol in 1..n.saturating_sub(1) {
        let Some(i) = (mcol..n).find(|&i| !h[i][mcol - 1].is_zero()) else {
            continue;
        };
        if i != mcol {
            h.swap(i, mcol);
            for row in h.iter_mut() {
                row.swap(i, mcol);
            }
        }
        let t = h[mcol][mcol - 1].clone();
        for i in mcol + 1..n {
            let u = &h[i][mcol - 1] / &t;
            if u.is_zero() {
                continue;
            }
            for j in 0..n {
                let s = &u * &h[mcol][j];
                h[i][j] -= s;
            }
            for row in h.iter_mut() {
                let s = &u * &row[i];
                row[mcol] += s;
            }
        }
    }
    // p_k = charpoly of the leading k×k block.
    let mut ps: Vec<QPoly> = vec![vec![Rat::one()]];
    for k in 1..=n {
        let mut pk = q_mul(&[-h[k - 1][k - 1].clone(), Rat::one()], &ps[k - 1]);
        let mut t = Rat::one();
        for i in 1..k {
            t *= &h[k - i][k - i - 1];
            let c = &t * &h[k - i - 1][k - 1];
            let term: QPoly = ps[k - i - 1].iter().map(|x| x * &c).collect();
            pk = q_sub(&pk, &term);
        }
        ps.push(pk);
    }
    let mut r = ps.pop().unwrap();
    r.resize(n + 1, Rat::zero());
    r
}

// ---------- 𝔽_p[x] ----------

pub type FpPoly = Vec<u64>;

pub fn fp_trim(a: &mut FpPoly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub fn fp_from_ints(c: &[Int], p: u64) -> FpPoly {
    use num_integer::Integer;
    use num_traits::ToPrimitive;
    let pb = Int::from(p);
    let mut v: FpPoly = c
        .iter()
        .map(|x| x.mod_floor(&pb).to_u64().unwrap())
        .collect();
    fp_trim(&mut v);
    v
}

pub fn fp_mul(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = ((r[i + j] as u128 + x as u128 * y as u128) % p as u128) as u64;
        }
    }
    fp_trim(&mut r);
    r
}

pub fn fp_sub(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let mut r = vec![0u64; a.len().max(b.len())];
    for (i, &x) in a.iter().enumerate() {
        r[i] = x;
    }
    for (i, &y) in b.iter().enumerate() {
        r[i] = (r[i] + p - y) % p;
    }
    fp_trim(&mut r);
    r
}

/// (quotient, remainder) of a by nonzero b.
pub fn fp_divrem(a: &[u64], b: &[u64], p: u64) -> (FpPoly, FpPoly) {
    let mut r = a.to_vec();
    fp_trim(&mut r);
    let db = b.len() - 1;
    let inv = inv_mod(*b.last().unwrap(), p);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let c = (*r.last().unwrap() as u128 * inv as u128 % p as u128) as u64;
        q[k] = c;
        for (i, &bi) in b.iter().enumerate() {
            r[k + i] = ((r[k + i] as u128 + (p - bi) as u128 * c as u128) % p as u128) as u64;
        }
        fp_trim(&mut r);
    }
    fp_trim(&mut q);
    (q, r)
}

pub fn fp_rem(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    fp_divrem(a, b, p).1
}

pub fn fp_monic(a: &[u64], p: u64) -> FpPoly {
    let inv = inv_mod(*a.last().unwrap(), p);
    a.iter()
        .map(|&c| (c as u128 * inv as u128 % p as u128) as u64)
        .collect()
}

pub fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    fp_trim(&mut a);
    fp_trim(&mut b);
    while !b.is_empty() {
        let r = fp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    if a.is_empty() {
        a
    } else {
        fp_monic(&a, p)
    }
}

pub fn fp_powmod(base: &[u64], mut e: Int, m: &[u64], p: u64) -> FpPoly {
    use num_integer::Integer;
    let mut r: FpPoly = vec![1];
    let mut b = fp_rem(base, m, p);
    let two = Int::from(2);
    while !e.is_zero() {
        if e.is_odd() {
            r = fp_rem(&fp_mul(&r, &b, p), m, p);
        }
        b = fp_rem(&fp_mul(&b, &b, p), m, p);
        e = e.div_floor(&two);
    }
    r
}

pub fn fp_eval(a: &[u64], x: u64, p: u64) -> u64 {
    a.iter().rev().fold(0u64, |acc, &c| {
        ((acc as u128 * x as u128 + c as u128) % p as u128) as u64
    })
}

/// Resultant Res(g, h) for monic g: the product of h over the roots of g.
pub fn fp_resultant_monic(g: &[u64], h: &[u64], p: u64) -> u64 {
    // Res(g,h) = ∏ h(α); computed by the Euclidean recursion.
    fn res(a: &[u64], b: &[u64], p: u64) -> u64 {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        fp_trim(&mut a);
        fp_trim(&mut b);
        if a.is_empty() || b.is_empty() {
            return 0;
        }
        let (da, db) = (a.len() - 1, b.len() - 1);
        if db == 0 {
            return powmod(b[0], da as u64, p);
        }
        if da < db {
            let s = if (da * db) % 2 == 1 { p - 1 } else { 1 };
            return (s as u128 * res(&b, &a, p) as u128 % p as u128) as u64;
        }
        let r = fp_rem(&a, &b, p);
        if r.is_empty() {
            return 0;
        }
        let dr = r.len() - 1;
        let lb = *b.last().unwrap();
        let s = if (da * db) % 2 == 1 { p - 1 } else { 1 };
        let f = powmod(lb, (da - dr) as u64, p);
        (((s as u128 * f as u128) % p as u128) * res(&b, &r, p) as u128 % p as u128) as u64
    }
    res(g, h, p)
}

/// Roots of a in 𝔽_p by exhaustive evaluation (p small).
pub fn fp_roots(a: &[u64], p: u64) -> Vec<u64> {
    (0..p).filter(|&x| fp_eval(a, x, p) == 0).collect()
}

/// Split a squarefree monic f whose irreducible factors all have degree r
/// (Cantor–Zassenhaus, p odd, seeded for reproducibility).
pub fn fp_equal_degree_factors(f: &[u64], r: usize, p: u64) -> Vec<FpPoly> {
    let mut out = Vec::new();
    let mut stack = vec![fp_monic(f, p)];
    let mut rng = ChaCha8Rng::seed_from_u64(p ^ ((r as u64) << 32));
    let e: Int = (Int::from(p).pow(r as u32) - 1u32) / 2u32;
    while let Some(g) = stack.pop() {
        let d = g.len() - 1;
        if d == r {
            out.push(g);
            continue;
        }
        loop {
            let mut h: FpPoly = (0..d).map(|_| rng.gen_range(0..p)).collect();
            fp_trim(&mut h);
            if h.len() < 2 {
                continue;
            }
            let t = fp_sub(&fp_powmod(&h, e.clone(), &g, p), &[1], p);
            let c = fp_gcd(&g, &t, p);
            if c.len() > 1 && c.len() < g.len() {
                let (q, _) = fp_divrem(&g, &c, p);
                stack.push(fp_monic(&q, p));
                stack.push(c);
                break;
            }
        }
    }
    out.sort();
    out
}

/// Degree of the irreducible factors of a squarefree f that splits into
/// factors of equal degree (as for abelian fields), found as the least r with
/// f | x^{p^r} − x.
pub fn fp_common_factor_degree(f: &[u64], p: u64) -> usize {
    let m = fp_monic(f, p);
    let x: FpPoly = vec![0, 1];
    let mut xp = x.clone();
    for r in 1..m.len() {
        xp = fp_powmod(&xp, Int::from(p), &m, p);
        if fp_sub(&xp, &x, p).is_empty() {
            return r;
        }
    }
    m.len() - 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int::rat;

    #[test]
    fn charpoly_matches_det() {
        let m = vec![
            vec![rat(2, 1), rat(1, 1), rat(0, 1)],
            vec![rat(1, 1), rat(3, 1), rat(1, 2)],
            vec![rat(0, 1), rat(4, 1), rat(-1, 1)],
        ];
        let cp = charpoly(&m);
        assert_eq!(cp[3], rat(1, 1));
        assert_eq!(cp[0], -det(m.clone()));
        for t in -3..4 {
            let x = rat(t, 1);
            let mm: Vec<Vec<Rat>> = (0..3)
                .map(|i| {
                    (0..3)
                        .map(|j| {
                            if i == j {
                                &x - &m[i][j]
                            } else {
                                -m[i][j].clone()
                            }
                        })
                        .collect()
                })
                .collect();
            assert_eq!(q_eval(&cp, &x), det(mm));
        }
    }

    #[test]
    fn finite_field_factoring() {
        // x^4 + 1 over F_17 splits into linear factors, over F_3 into quadratics.
        let f = vec![1, 0, 0, 0, 1];
        assert_eq!(fp_common_factor_degree(&f, 17), 1);
        assert_eq!(fp_equal_degree_factors(&f, 1, 17).len(), 4);
        assert_eq!(fp_common_factor_degree(&f, 3), 2);
        let fs = fp_equal_degree_factors(&f, 2, 3);
        assert_eq!(fs.len(), 2);
        assert_eq!(fp_mul(&fs[0], &fs[1], 3), f);
        // Res(x^2+1, x+2) = (2+i)(2-i) = 5
        assert_eq!(fp_resultant_monic(&[1, 0, 1], &[2, 1], 101), 5);
    }
}
