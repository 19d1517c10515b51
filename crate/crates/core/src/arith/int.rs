//! Integers, rationals, valuations and factorisation.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(n: i64) -> Int {
    Int::from(n)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn rat_int(n: &Int) -> Rat {
    Rat::from_integer(n.clone())
}

/// A p-adic valuation; `Infinite` is the valuation of zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// ord_p(n) for nonzero n; `None` for n = 0. `p` is assumed prime (> 1).
pub fn val_int(n: &Int, p: &Int) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return Some(v);
        }
        n = q;
        v += 1;
    }
}

pub fn val_u64(n: &Int, p: u64) -> Option<u32> {
    val_int(n, &Int::from(p))
}

/// ord_p(x) = ord_p(num) − ord_p(den), infinite for zero.
pub fn padic_val(x: &Rat, p: &Int) -> Result<Valuation> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    Ok(match val_int(x.numer(), p) {
        None => Valuation::Infinite,
        Some(vn) => {
            let vd = val_int(x.denom(), p).unwrap_or(0);
            Valuation::Finite(vn as i64 - vd as i64)
        }
    })
}

/// Exact k-th root of a non-negative integer, if it exists.
pub fn integer_nth_root(n: &Int, k: u32) -> Option<Int> {
    if n.is_negative() || k == 0 {
        return None;
    }
    let r = n.nth_root(k);
    (r.pow(k) == *n).then_some(r)
}

pub fn is_square(n: &Int) -> bool {
    integer_nth_root(n, 2).is_some()
}

/// Square root of a rational, if it is a square in ℚ.
pub fn rat_sqrt(q: &Rat) -> Option<Rat> {
    let n = integer_nth_root(q.numer(), 2)?;
    let d = integer_nth_root(q.denom(), 2)?;
    Some(Rat::new(n, d))
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    r
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Miller–Rabin; deterministic below 3.3·10²⁴, overwhelmingly reliable above.
pub fn is_prime(n: &Int) -> bool {
    if let Some(m) = n.to_u64() {
        return is_prime_u64(m);
    }
    if n.is_negative() || n.is_even() {
        return false;
    }
    let one = Int::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'witness: for a in [
        2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
    ] {
        let mut x = Int::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn primes_upto(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if sieve[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
    }
    out
}

/// Brent's variant of Pollard rho with batched gcds.
fn pollard_rho(n: &Int) -> Int {
    let one = Int::one();
    let mut c = Int::one();
    loop {
        let f = |x: &Int| (x * x + &c) % n;
        let (mut y, mut r, mut q) = (Int::from(2), 1u64, one.clone());
        let (mut x, mut ys) = (y.clone(), y.clone());
        let mut g = one.clone();
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..(128.min(r - k)) {
                    y = f(&y);
                    q = (q * (&x - &y).abs()) % n;
                }
                g = q.gcd(n);
                k += 128;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                g = (&x - &ys).abs().gcd(n);
                if g != one {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
        c += 1;
    }
}

/// Prime factorisation of |n| (n ≠ 0), sorted by prime.
pub fn factor(n: &Int) -> Vec<(Int, u32)> {
    let mut n = n.abs();
    let mut out: Vec<(Int, u32)> = Vec::new();
    if n.is_zero() {
        return out;
    }
    for p in primes_upto(10_000) {
        let pb = Int::from(p);
        if &pb * &pb > n {
            break;
        }
        let mut e = 0;
        while (&n % &pb).is_zero() {
            n /= &pb;
            e += 1;
        }
        if e > 0 {
            out.push((pb, e));
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            match out.iter_mut().find(|(q, _)| *q == m) {
                Some(e) => e.1 += 1,
                None => out.push((m, 1)),
            }
            continue;
        }
        let d = pollard_rho(&m);
        stack.push(&m / &d);
        stack.push(d);
    }
    out.sort();
    out
}

pub fn prime_divisors(n: &Int) -> Vec<Int> {
    factor(n).into_iter().map(|(p, _)| p).collect()
}

/// Product of the distinct primes dividing n that divide no element of `s`.
pub fn radical_outside(n: &Int, s: &[Int]) -> Result<Int> {
    if n.is_zero() {
        return Err(Error::Invalid("radical of zero".into()));
    }
    Ok(prime_divisors(n)
        .into_iter()
        .filter(|p| s.iter().all(|q| !(q % p).is_zero()))
        .product())
}

/// Signed squarefree part: n = sign · s · k² with s squarefree positive.
pub fn squarefree_part(n: &Int) -> Int {
    let mut s: Int = factor(n)
        .into_iter()
        .filter(|(_, e)| e % 2 == 1)
        .map(|(p, _)| p)
        .product();
    if n.sign() == Sign::Minus {
        s = -s;
    }
    s
}

pub fn is_fourth_power_free(n: &Int) -> bool {
    factor(n).iter().all(|(_, e)| *e < 4)
}

pub fn legendre(a: i64, p: u64) -> i64 {
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    if powmod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

pub fn legendre_big(a: &Int, p: u64) -> i64 {
    let r = a.mod_floor(&Int::from(p)).to_i64().unwrap();
    legendre(r, p)
}

/// a mod p as u64 for rational a with denominator prime to p.
pub fn rat_mod(a: &Rat, p: u64) -> Option<u64> {
    let pb = Int::from(p);
    let n = a.numer().mod_floor(&pb).to_u64()?;
    let d = a.denom().mod_floor(&pb).to_u64()?;
    if d == 0 {
        return None;
    }
    Some(mulmod(n, inv_mod(d, p), p))
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

/// A square root of a mod p (p odd prime), if a is a square.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if powmod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p)
        .find(|&z| powmod(z, (p - 1) / 2, p) == p - 1)
        .unwrap();
    let (mut m, mut c, mut t, mut r) = (
        s,
        powmod(z, q, p),
        powmod(a, q, p),
        powmod(a, q.div_ceil(2), p),
    );
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mulmod(tt, tt, p);
            i += 1;
        }
        let b = powmod(c, 1 << (m - i - 1), p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    Some(r.min(p - r))
}

/// Serde helper: integers as decimal strings.
pub fn ser_int<S: serde::Serializer>(v: &Int, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations() {
        assert_eq!(
            padic_val(&rat(8, 3), &int(2)).unwrap(),
            Valuation::Finite(3)
        );
        assert_eq!(padic_val(&rat(0, 1), &int(5)).unwrap(), Valuation::Infinite);
        assert_eq!(
            padic_val(&rat(451584, 1), &int(2)).unwrap(),
            Valuation::Finite(10)
        );
        assert_eq!(
            padic_val(&rat(1, 9), &int(3)).unwrap(),
            Valuation::Finite(-2)
        );
        assert!(padic_val(&rat(3, 1), &int(4)).is_err());
    }

    #[test]
    fn nth_roots() {
        assert_eq!(integer_nth_root(&int(4), 2), Some(int(2)));
        assert_eq!(integer_nth_root(&int(9), 2), Some(int(3)));
        assert_eq!(integer_nth_root(&int(7), 3), None);
        assert_eq!(integer_nth_root(&int(0), 5), Some(int(0)));
    }

    #[test]
    fn factorisation() {
        assert_eq!(
            factor(&int(451584)),
            vec![(int(2), 10), (int(3), 2), (int(7), 2)]
        );
        let big = int(1_000_000_007) * int(998_244_353);
        assert_eq!(
            factor(&big),
            vec![(int(998_244_353), 1), (int(1_000_000_007), 1)]
        );
        assert_eq!(radical_outside(&int(200), &[int(10)]).unwrap(), int(1));
        assert_eq!(radical_outside(&int(42), &[int(10)]).unwrap(), int(21));
        assert_eq!(radical_outside(&int(69), &[int(34)]).unwrap(), int(69));
        assert_eq!(squarefree_part(&int(-72)), int(-2));
    }

    #[test]
    fn modular() {
        for p in [3u64, 5, 13, 17, 41, 97, 193] {
            for a in 0..p {
                match sqrt_mod(a, p) {
                    Some(r) => assert_eq!(r * r % p, a),
                    None => assert_eq!(legendre(a as i64, p), -1),
                }
            }
        }
        assert!(is_prime(&(int(2).pow(89u32) - 1)));
        assert!(!is_prime(&(int(2).pow(67u32) - 1)));
    }
}
