//! Modular integer arithmetic over `Z_m`, trial-division factorization and
//! the two-factor Chinese remainder maps used to split composite dimensions.

use crate::error::{Error, Result};

/// Largest supported qudit dimension.
pub const MAX_DIMENSION: u64 = 1 << 31;

/// A qudit dimension together with its prime factorization.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Modulus {
    d: u64,
    factors: Vec<(u64, u32)>,
}

impl Modulus {
    pub fn new(d: u64) -> Result<Self> {
        factorize(d)
    }

    pub fn value(&self) -> u64 {
        self.d
    }

    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> Vec<u64> {
        self.factors.iter().map(|&(p, _)| p).collect()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn is_prime(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }

    pub fn is_prime_power(&self) -> bool {
        self.factors.len() == 1
    }
}

/// Factorizes `d` by trial division.
pub fn factorize(d: u64) -> Result<Modulus> {
    if !(2..=MAX_DIMENSION).contains(&d) {
        return Err(Error::InvalidDimension(d));
    }
    let mut factors = Vec::new();
    let mut rest = d;
    let mut p = 2u64;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(Modulus { d, factors })
}

pub fn is_prime(d: u64) -> bool {
    factorize(d).map(|m| m.is_prime()).unwrap_or(false)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Extended Euclid: returns `(g, s, t)` with `s*a + t*b = g = gcd(a, b)`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    (old_r, old_s, old_t)
}

/// Canonical representative of `a` in `[0, m)`.
pub fn reduce(a: i128, m: u64) -> u64 {
    a.rem_euclid(m as i128) as u64
}

pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    reduce(a as i128 - b as i128, m)
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn neg_mod(a: u64, m: u64) -> u64 {
    reduce(-(a as i128), m)
}

/// Inverse of `a` modulo `m`, in `[0, m)`.
pub fn inv_mod(a: u64, m: u64) -> Result<u64> {
    if m < 2 {
        return Err(Error::InvalidDimension(m));
    }
    let (g, s, _) = ext_gcd(reduce(a as i128, m) as i128, m as i128);
    if g != 1 {
        return Err(Error::NotInvertible { a, m });
    }
    Ok(reduce(s, m))
}

/// A coprime split `D = d1 * d2` with the constants `r_i = (D/d_i)^{-1} mod d_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CrtSplit {
    pub d1: u64,
    pub d2: u64,
    pub r1: u64,
    pub r2: u64,
}

impl CrtSplit {
    pub fn new(d1: u64, d2: u64) -> Result<Self> {
        if d1 == 0 || d2 == 0 || gcd(d1, d2) != 1 {
            return Err(Error::NotCoprime(d1, d2));
        }
        // inv_mod is undefined for modulus 1; every residue mod 1 is 0.
        let r1 = if d1 == 1 { 0 } else { inv_mod(d2 % d1, d1)? };
        let r2 = if d2 == 1 { 0 } else { inv_mod(d1 % d2, d2)? };
        Ok(CrtSplit { d1, d2, r1, r2 })
    }

    pub fn d(&self) -> u64 {
        self.d1 * self.d2
    }

    /// Component-wise reduction `a -> (a mod d1, a mod d2)`.
    pub fn split(&self, a: u64) -> (u64, u64) {
        (a % self.d1, a % self.d2)
    }

    /// The inverse map `a1 r1 d2 + a2 r2 d1 mod D`.
    pub fn combine(&self, a1: u64, a2: u64) -> u64 {
        crt_combine(a1, a2, self)
    }
}

pub fn crt_combine(a1: u64, a2: u64, split: &CrtSplit) -> u64 {
    let d = split.d();
    let t1 = mul_mod(mul_mod(a1, split.r1, d), split.d2, d);
    let t2 = mul_mod(mul_mod(a2, split.r2, d), split.d1, d);
    add_mod(t1, t2, d)
}
