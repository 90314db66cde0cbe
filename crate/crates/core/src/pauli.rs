//! Pauli products `λ^γ ⊗_i X_i^{x_i} Z_i^{z_i}` on `n` qudits of dimension `D`,
//! with `λ = e^{iπ/D}`, `ω = λ²`, `Z|j⟩ = ω^j|j⟩` and `X|j⟩ = |j-1⟩`.
//!
//! Each qudit factor is kept in the normal order `X^x Z^z`. All phase
//! bookkeeping lives in `γ ∈ Z_{2D}`; with the conventions above
//! `Z X = ω^{-1} X Z`, which fixes every sign below.

use std::fmt;

use crate::error::{Error, Result};
use crate::modring::{gcd, reduce};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliProduct {
    d: u64,
    phase: u64,
    x: Vec<u64>,
    z: Vec<u64>,
}

impl PauliProduct {
    /// Builds a product from signed exponents, reducing everything to
    /// canonical representatives.
    pub fn new(d: u64, phase: i128, x: &[i128], z: &[i128]) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        if x.len() != z.len() {
            return Err(Error::ShapeMismatch(format!(
                "x has {} entries but z has {}",
                x.len(),
                z.len()
            )));
        }
        Ok(Self::from_raw(
            d,
            reduce(phase, 2 * d),
            x.iter().map(|&v| reduce(v, d)).collect(),
            z.iter().map(|&v| reduce(v, d)).collect(),
        ))
    }

    /// Internal constructor; the caller guarantees canonical entries.
    pub(crate) fn from_raw(d: u64, phase: u64, x: Vec<u64>, z: Vec<u64>) -> Self {
        debug_assert!(phase < 2 * d);
        debug_assert!(x.iter().chain(z.iter()).all(|&v| v < d));
        debug_assert_eq!(x.len(), z.len());
        PauliProduct { d, phase, x, z }
    }

    pub fn identity(n: usize, d: u64) -> Self {
        Self::from_raw(d, 0, vec![0; n], vec![0; n])
    }

    /// `λ^phase · I`.
    pub fn scalar(n: usize, d: u64, phase: i128) -> Self {
        Self::from_raw(d, reduce(phase, 2 * d), vec![0; n], vec![0; n])
    }

    /// `X_q^e` on `n` qudits.
    pub fn x_on(n: usize, d: u64, q: usize, e: i128) -> Self {
        let mut x = vec![0; n];
        x[q] = reduce(e, d);
        Self::from_raw(d, 0, x, vec![0; n])
    }

    /// `Z_q^e` on `n` qudits.
    pub fn z_on(n: usize, d: u64, q: usize, e: i128) -> Self {
        let mut z = vec![0; n];
        z[q] = reduce(e, d);
        Self::from_raw(d, 0, vec![0; n], z)
    }

    /// Product with phase 0 given per-qudit `(qudit, x, z)` exponents.
    pub fn from_terms(n: usize, d: u64, terms: &[(usize, i128, i128)]) -> Self {
        let mut x = vec![0; n];
        let mut z = vec![0; n];
        for &(q, a, b) in terms {
            x[q] = reduce(a, d);
            z[q] = reduce(b, d);
        }
        Self::from_raw(d, 0, x, z)
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    /// Phase exponent `γ ∈ Z_{2D}`.
    pub fn phase(&self) -> u64 {
        self.phase
    }

    pub fn x(&self) -> &[u64] {
        &self.x
    }

    pub fn z(&self) -> &[u64] {
        &self.z
    }

    pub fn with_phase(mut self, phase: i128) -> Self {
        self.phase = reduce(phase, 2 * self.d);
        self
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.d != other.d || self.n() != other.n() {
            return Err(Error::ShapeMismatch(format!(
                "(n={}, D={}) vs (n={}, D={})",
                self.n(),
                self.d,
                other.n(),
                other.d
            )));
        }
        Ok(())
    }

    /// Normal-ordered product `self · other`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let d = self.d;
        let two_d = 2 * d as u128;
        // Z^z X^x' = ω^{-z x'} X^x' Z^z
        let cross: u128 = self
            .z
            .iter()
            .zip(&other.x)
            .map(|(&a, &b)| a as u128 * b as u128 % d as u128)
            .sum::<u128>()
            % d as u128;
        let phase = (self.phase as u128 + other.phase as u128 + two_d - 2 * cross) % two_d;
        let x = self.x.iter().zip(&other.x).map(|(&a, &b)| (a + b) % d).collect();
        let z = self.z.iter().zip(&other.z).map(|(&a, &b)| (a + b) % d).collect();
        Self::from_raw(d, phase as u64, x, z)
    }

    /// `α ∈ Z_D` with `self · other = ω^α · other · self`.
    pub fn commutation_phase(&self, other: &Self) -> Result<u64> {
        self.check_shape(other)?;
        Ok(self.commutation_unchecked(other))
    }

    pub(crate) fn commutation_unchecked(&self, other: &Self) -> u64 {
        let d = self.d as u128;
        let mut acc: u128 = 0;
        for i in 0..self.n() {
            acc += self.x[i] as u128 * other.z[i] as u128 % d;
            acc += (d - self.z[i] as u128 * other.x[i] as u128 % d) % d;
        }
        (acc % d) as u64
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.n() == other.n() && self.d == other.d && self.commutation_unchecked(other) == 0
    }

    /// Smallest `1 <= k <= D` with `self^k ∝ I`.
    pub fn order(&self) -> u64 {
        let g = self
            .x
            .iter()
            .chain(self.z.iter())
            .fold(self.d, |acc, &v| gcd(acc, v));
        self.d / g
    }

    /// `self^k` for any integer `k` (negative powers invert).
    pub fn power(&self, k: i128) -> Self {
        let d = self.d;
        let two_d = 2 * d as i128;
        if k < 0 {
            return self.inverse().power(-k);
        }
        // (X^x Z^z)^k = ω^{-xz k(k-1)/2} X^{kx} Z^{kz} per qudit
        let s: i128 = self
            .x
            .iter()
            .zip(&self.z)
            .map(|(&a, &b)| (a as i128 * b as i128) % d as i128)
            .sum::<i128>()
            % d as i128;
        let kk = k % two_d;
        let pairs = (kk * (kk - 1)).rem_euclid(two_d);
        let phase = (self.phase as i128 * kk - s * pairs).rem_euclid(two_d);
        let km = (k % d as i128) as u128;
        let x = self.x.iter().map(|&a| (a as u128 * km % d as u128) as u64).collect();
        let z = self.z.iter().map(|&b| (b as u128 * km % d as u128) as u64).collect();
        Self::from_raw(d, phase as u64, x, z)
    }

    pub fn inverse(&self) -> Self {
        let d = self.d;
        let s: i128 = self
            .x
            .iter()
            .zip(&self.z)
            .map(|(&a, &b)| a as i128 * b as i128)
            .sum();
        let phase = reduce(-(self.phase as i128) - 2 * s, 2 * d);
        let x = self.x.iter().map(|&a| (d - a) % d).collect();
        let z = self.z.iter().map(|&b| (d - b) % d).collect();
        Self::from_raw(d, phase, x, z)
    }

    /// Complex conjugate in the computational basis: `λ^{-γ} X^x Z^{-z}`.
    pub fn conjugate(&self) -> Self {
        let d = self.d;
        Self::from_raw(
            d,
            (2 * d - self.phase) % (2 * d),
            self.x.clone(),
            self.z.iter().map(|&b| (d - b) % d).collect(),
        )
    }

    /// `self ⊗ other`, with `other` on the trailing qudits.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.d != other.d {
            return Err(Error::ShapeMismatch(format!("D={} vs D={}", self.d, other.d)));
        }
        let phase = (self.phase + other.phase) % (2 * self.d);
        let mut x = self.x.clone();
        x.extend_from_slice(&other.x);
        let mut z = self.z.clone();
        z.extend_from_slice(&other.z);
        Ok(Self::from_raw(self.d, phase, x, z))
    }

    /// Restriction to the listed qudits (in the given order); the phase is kept.
    pub fn restrict(&self, qudits: &[usize]) -> Result<Self> {
        let n = self.n();
        if let Some(&q) = qudits.iter().find(|&&q| q >= n) {
            return Err(Error::IndexOutOfRange { index: q, n });
        }
        Ok(Self::from_raw(
            self.d,
            self.phase,
            qudits.iter().map(|&q| self.x[q]).collect(),
            qudits.iter().map(|&q| self.z[q]).collect(),
        ))
    }

    /// Embeds `self` (on `qudits.len()` qudits) into `n` qudits at `qudits`.
    pub fn embed(&self, n: usize, qudits: &[usize]) -> Result<Self> {
        if qudits.len() != self.n() {
            return Err(Error::ShapeMismatch(format!(
                "{} qudit labels for a {}-qudit product",
                qudits.len(),
                self.n()
            )));
        }
        let mut x = vec![0; n];
        let mut z = vec![0; n];
        for (i, &q) in qudits.iter().enumerate() {
            if q >= n {
                return Err(Error::IndexOutOfRange { index: q, n });
            }
            x[q] = self.x[i];
            z[q] = self.z[i];
        }
        Ok(Self::from_raw(self.d, self.phase, x, z))
    }

    pub fn is_identity_at(&self, q: usize) -> bool {
        self.x[q] == 0 && self.z[q] == 0
    }

    pub fn is_identity_on(&self, qudits: &[usize]) -> bool {
        qudits.iter().all(|&q| q < self.n() && self.is_identity_at(q))
    }

    /// All exponents vanish (the product is a multiple of the identity).
    pub fn is_scalar(&self) -> bool {
        self.x.iter().chain(self.z.iter()).all(|&v| v == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.phase == 0 && self.is_scalar()
    }

    /// Qudits on which the product acts non-trivially.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n()).filter(|&q| !self.is_identity_at(q)).collect()
    }

    /// Is every `X` exponent zero?
    pub fn is_z_type(&self) -> bool {
        self.x.iter().all(|&v| v == 0)
    }

    /// If `self` and `other` share exponents, returns `δ` with `self = λ^δ other`.
    pub fn proportional(&self, other: &Self) -> Option<u64> {
        if self.d != other.d || self.x != other.x || self.z != other.z {
            return None;
        }
        Some((self.phase + 2 * self.d - other.phase) % (2 * self.d))
    }

    /// `self^{order} = I` exactly, the condition for a stabilizer element.
    pub fn closes_to_identity(&self) -> bool {
        self.power(self.order() as i128).is_identity()
    }

    /// Parses `g | x1 … xn | z1 … zn`.
    pub fn parse(line: &str, d: u64) -> Result<Self> {
        let err = |msg: &str| Error::Parse { line: 0, msg: msg.to_string() };
        let fields: Vec<&str> = line.split('|').collect();
        if fields.len() != 3 {
            return Err(err("expected `g | x.. | z..`"));
        }
        let num = |s: &str| -> Result<i128> {
            s.parse::<i128>()
                .map_err(|_| err(&format!("bad integer `{s}`")))
        };
        let phase = num(fields[0].trim())?;
        let x: Vec<i128> = fields[1].split_whitespace().map(num).collect::<Result<_>>()?;
        let z: Vec<i128> = fields[2].split_whitespace().map(num).collect::<Result<_>>()?;
        if x.len() != z.len() {
            return Err(err("x and z lists differ in length"));
        }
        Self::new(d, phase, &x, &z)
    }

    /// Human-readable form such as `λ^3 X0 Z1^2`.
    pub fn pretty(&self) -> String {
        let mut parts = Vec::new();
        if self.phase != 0 {
            parts.push(format!("λ^{}", self.phase));
        }
        for q in 0..self.n() {
            let term = |name: &str, e: u64| {
                if e == 1 {
                    format!("{name}{q}")
                } else {
                    format!("{name}{q}^{e}")
                }
            };
            if self.x[q] != 0 {
                parts.push(term("X", self.x[q]));
            }
            if self.z[q] != 0 {
                parts.push(term("Z", self.z[q]));
            }
        }
        if parts.is_empty() {
            "I".to_string()
        } else {
            parts.join(" ")
        }
    }
}

impl fmt::Display for PauliProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u64]| {
            v.iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        let xs = join(&self.x);
        let zs = join(&self.z);
        let sep = |s: &str| if s.is_empty() { String::new() } else { format!(" {s} ") };
        write!(f, "{} |{}|{}", self.phase, sep(&xs), sep(&zs).trim_end())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(d: u64) -> PauliProduct {
        PauliProduct::x_on(1, d, 0, 1)
    }
    fn z(d: u64) -> PauliProduct {
        PauliProduct::z_on(1, d, 0, 1)
    }

    #[test]
    fn identity_is_neutral() {
        let p = PauliProduct::new(5, 3, &[1, 4], &[2, 0]).unwrap();
        let id = PauliProduct::identity(2, 5);
        assert_eq!(id.multiply(&p).unwrap(), p);
        assert_eq!(p.multiply(&id).unwrap(), p);
    }

    #[test]
    fn z_times_x_normal_orders() {
        // Z X = ω^{-1} X Z, i.e. λ^{-2} = λ^4 at D=3
        let zx = z(3).multiply(&x(3)).unwrap();
        assert_eq!((zx.phase(), zx.x(), zx.z()), (4, &[1u64][..], &[1u64][..]));
        let xz = x(3).multiply(&z(3)).unwrap();
        assert_eq!(xz.phase(), 0);
    }

    #[test]
    fn inverse_gives_identity() {
        for d in 2..7 {
            let p = PauliProduct::new(d, 5, &[1, 2, 3], &[3, 1, 1]).unwrap();
            assert!(p.multiply(&p.inverse()).unwrap().is_identity());
            assert!(p.inverse().multiply(&p).unwrap().is_identity());
        }
    }

    #[test]
    fn commutation_examples() {
        let p = PauliProduct::new(5, 1, &[1, 2], &[3, 4]).unwrap();
        assert_eq!(p.commutation_phase(&p).unwrap(), 0);
        for d in 2..8 {
            // X Z = ω Z X
            assert_eq!(x(d).commutation_phase(&z(d)).unwrap(), 1);
            assert_eq!(z(d).commutation_phase(&x(d)).unwrap(), d - 1);
            let xx = PauliProduct::from_terms(2, d, &[(0, 1, 0), (1, 1, 0)]);
            let zz = PauliProduct::from_terms(2, d, &[(0, 0, 1), (1, 0, -1)]);
            assert_eq!(xx.commutation_phase(&zz).unwrap(), 0);
        }
    }

    #[test]
    fn shape_mismatch() {
        assert!(matches!(
            x(3).multiply(&x(5)),
            Err(Error::ShapeMismatch(_))
        ));
        let two = PauliProduct::identity(2, 3);
        assert!(x(3).commutation_phase(&two).is_err());
    }

    #[test]
    fn orders_match_repeated_multiplication() {
        // oracle: multiply until the exponents vanish
        fn brute(p: &PauliProduct) -> u64 {
            let mut acc = p.clone();
            let mut k = 1;
            while !acc.is_scalar() {
                acc = acc.multiply(p).unwrap();
                k += 1;
            }
            k
        }
        assert_eq!(PauliProduct::identity(2, 6).order(), 1);
        assert_eq!(x(6).order(), 6);
        assert_eq!(PauliProduct::x_on(1, 6, 0, 2).order(), 3);
        for d in 2..=12u64 {
            for a in 0..d {
                for b in 0..d {
                    let p = PauliProduct::new(d, 1, &[a as i128, 1], &[b as i128, 0])
                        .unwrap()
                        .power(1);
                    let q = PauliProduct::new(d, 0, &[a as i128], &[b as i128]).unwrap();
                    assert_eq!(q.order(), brute(&q));
                    assert!(d % p.order() == 0);
                }
            }
        }
        for p in [2u64, 3, 5, 7] {
            let q = PauliProduct::new(p, 3, &[0, 2], &[1, 0]).unwrap();
            assert_eq!(q.order(), p);
        }
    }

    #[test]
    fn power_matches_repeated_multiplication() {
        for d in 2..=7u64 {
            let p = PauliProduct::new(d, 3, &[1, 2], &[d as i128 - 1, 1]).unwrap();
            let mut acc = PauliProduct::identity(2, d);
            for k in 0..(3 * d as i128) {
                assert_eq!(p.power(k), acc, "d={d} k={k}");
                acc = acc.multiply(&p).unwrap();
            }
            assert_eq!(p.power(-1), p.inverse());
            assert_eq!(p.power(-3), p.inverse().power(3));
        }
    }

    #[test]
    fn power_d_is_plus_minus_identity() {
        for d in 2..=9u64 {
            for g in 0..2 * d as i128 {
                let p = PauliProduct::new(d, g, &[1, 3], &[2, 1]).unwrap();
                let q = p.power(d as i128);
                assert!(q.is_scalar());
                assert!(q.phase() == 0 || q.phase() == d);
                let o = p.order();
                assert!(p.power(o as i128).is_scalar());
            }
        }
    }

    #[test]
    fn tensor_and_restriction() {
        let p = PauliProduct::x_on(1, 3, 0, 1);
        let q = PauliProduct::z_on(1, 3, 0, 1);
        let pq = p.tensor(&PauliProduct::identity(1, 3)).unwrap();
        let iq = PauliProduct::identity(1, 3).tensor(&q).unwrap();
        assert_eq!(pq.commutation_phase(&iq).unwrap(), 0);
        assert!(pq.is_identity_on(&[1]));
        assert!(!pq.is_identity_on(&[0]));
        let r = PauliProduct::new(3, 2, &[1, 0, 2], &[0, 0, 1]).unwrap();
        let sub = r.restrict(&[2, 0]).unwrap();
        assert_eq!(sub.x(), &[2, 1]);
        assert_eq!(sub.embed(3, &[2, 0]).unwrap(), r);
        assert_eq!(r.support(), vec![0, 2]);
    }

    #[test]
    fn proportionality() {
        let p = PauliProduct::new(4, 3, &[1], &[2]).unwrap();
        let q = PauliProduct::new(4, 7, &[1], &[2]).unwrap();
        assert_eq!(p.proportional(&q), Some(4));
        assert_eq!(q.proportional(&p), Some(4));
        assert_eq!(p.proportional(&x(4)), None);
    }

    #[test]
    fn text_round_trip() {
        let p = PauliProduct::new(5, 7, &[1, 0, 4], &[0, 3, 2]).unwrap();
        let s = p.to_string();
        assert_eq!(s, "7 | 1 0 4 | 0 3 2");
        assert_eq!(PauliProduct::parse(&s, 5).unwrap(), p);
        assert!(PauliProduct::parse("1 | 2 | ", 5).is_err());
        let empty = PauliProduct::identity(0, 3);
        assert_eq!(PauliProduct::parse(&empty.to_string(), 3).unwrap(), empty);
    }

    #[test]
    fn complex_conjugate_inverts_phase_and_z() {
        let p = PauliProduct::new(5, 3, &[1, 2], &[4, 0]).unwrap();
        let c = p.conjugate();
        assert_eq!(c.phase(), 7);
        assert_eq!(c.z(), &[1, 0]);
        assert_eq!(c.conjugate(), p);
    }
}
