//! Chinese-remainder factorization of qudits.
//!
//! For coprime `D = d1·d2` the basis map `|a⟩ ↦ |a mod d1⟩|a mod d2⟩` is a
//! unitary `𝕌` with `𝕌 X 𝕌† = X ⊗ X` and `𝕌 Z 𝕌† = Z^{r1} ⊗ Z^{r2}`, where
//! `r_i = (D/d_i)^{-1} mod d_i`. Only exponent vectors are touched here; the
//! dense `𝕌` lives in the oracle.

use crate::error::{Error, Result};
use crate::modring::{ext_gcd, factorize, gcd, inv_mod, mul_mod, CrtSplit};
use crate::pauli::PauliProduct;
use crate::stabilizer::StabilizerGroup;

/// A two-factor split plus Bezout coefficients `u·d2 + v·d1 = 1`, used to
/// share a phase `λ_D^γ = λ_{d1}^{γu} λ_{d2}^{γv}` between the factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrtContext {
    split: CrtSplit,
    u: i128,
    v: i128,
}

/// Per-generator data: `δ = order(g) = δ1·δ2` with `δ1 | d1`, `δ2 | d2` and
/// `μ_i = (δ/δ_i)^{-1} mod δ_i` (zero when `δ_i = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorSplit {
    pub delta: u64,
    pub delta1: u64,
    pub delta2: u64,
    pub mu1: u64,
    pub mu2: u64,
}

impl CrtContext {
    pub fn new(d1: u64, d2: u64) -> Result<Self> {
        let split = CrtSplit::new(d1, d2)?;
        let (g, u, v) = ext_gcd(d2 as i128, d1 as i128);
        debug_assert_eq!(g, 1);
        Ok(CrtContext { split, u, v })
    }

    /// Splits `D` as (first prime power) × (rest).
    pub fn for_dimension(d: u64) -> Result<Self> {
        let m = factorize(d)?;
        let (p, e) = m.factors()[0];
        let d1 = p.pow(e);
        if d1 == d {
            return Err(Error::NotCoprime(d, 1));
        }
        Self::new(d1, d / d1)
    }

    pub fn split(&self) -> &CrtSplit {
        &self.split
    }

    pub fn d(&self) -> u64 {
        self.split.d()
    }

    fn check(&self, p: &PauliProduct) -> Result<()> {
        if p.d() != self.d() {
            return Err(Error::ShapeMismatch(format!(
                "Pauli over D={} split with a context for D={}",
                p.d(),
                self.d()
            )));
        }
        Ok(())
    }

    /// `𝕌 p 𝕌† = p1 ⊗ p2`, exactly.
    pub fn split_pauli(&self, p: &PauliProduct) -> Result<(PauliProduct, PauliProduct)> {
        self.check(p)?;
        let s = &self.split;
        let g = p.phase() as i128;
        let part = |di: u64, ri: u64, coef: i128| {
            let x: Vec<i128> = p.x().iter().map(|&a| (a % di) as i128).collect();
            let z: Vec<i128> = p.z().iter().map(|&b| mul_mod(b, ri, di) as i128).collect();
            PauliProduct::new(di, g * coef, &x, &z).expect("valid factor")
        };
        if s.d1 == 1 || s.d2 == 1 {
            return Err(Error::NotCoprime(s.d1, s.d2));
        }
        Ok((part(s.d1, s.r1, self.u), part(s.d2, s.r2, self.v)))
    }

    pub fn generator_data(&self, g: &PauliProduct) -> Result<GeneratorSplit> {
        self.check(g)?;
        let delta = g.order();
        let delta1 = gcd(delta, self.split.d1);
        let delta2 = delta / delta1;
        let mu = |a: u64, m: u64| if m == 1 { Ok(0) } else { inv_mod(a % m, m) };
        Ok(GeneratorSplit { delta, delta1, delta2, mu1: mu(delta2, delta1)?, mu2: mu(delta1, delta2)? })
    }

    /// `h1 ⊗ I = (𝕌g𝕌†)^{μ1δ2}` and `I ⊗ h2 = (𝕌g𝕌†)^{μ2δ1}`, so that
    /// `𝕌g𝕌† = h1 ⊗ h2` with `order(h_i) = δ_i`.
    pub fn split_generator(&self, g: &PauliProduct) -> Result<(PauliProduct, PauliProduct)> {
        self.check(g)?;
        if !g.closes_to_identity() {
            return Err(Error::InvalidStabilizer(format!("{g} does not satisfy g^order = I")));
        }
        let gs = self.generator_data(g)?;
        let s = &self.split;
        let h1 = self.component(&g.power((gs.mu1 * gs.delta2) as i128), s.d1, s.d2, s.r1)?;
        let h2 = self.component(&g.power((gs.mu2 * gs.delta1) as i128), s.d2, s.d1, s.r2)?;
        Ok((h1, h2))
    }

    /// The `di` factor of an element whose other factor is a pure scalar;
    /// the whole scalar goes to the `di` side.
    fn component(&self, g: &PauliProduct, di: u64, dj: u64, ri: u64) -> Result<PauliProduct> {
        if g.x().iter().chain(g.z()).any(|&a| a % dj != 0) {
            return Err(Error::InternalInvariant("CRT component is not a scalar".into()));
        }
        if !g.phase().is_multiple_of(dj) {
            return Err(Error::InternalInvariant("CRT scalar is not a power of the factor's λ".into()));
        }
        let x: Vec<i128> = g.x().iter().map(|&a| (a % di) as i128).collect();
        let z: Vec<i128> = g.z().iter().map(|&b| mul_mod(b, ri, di) as i128).collect();
        PauliProduct::new(di, (g.phase() / dj) as i128, &x, &z)
    }
}

/// The prime-power factors of `S` in increasing prime order, one image per
/// original generator (some may be the identity).
pub(crate) fn decompose_group_raw(s: &StabilizerGroup) -> Result<Vec<StabilizerGroup>> {
    let m = factorize(s.d())?;
    if m.factors().len() == 1 {
        return Ok(vec![s.clone()]);
    }
    let ctx = CrtContext::for_dimension(s.d())?;
    let mut g1 = Vec::new();
    let mut g2 = Vec::new();
    for g in s.gens() {
        let (h1, h2) = ctx.split_generator(g)?;
        g1.push(h1);
        g2.push(h2);
    }
    let sp = ctx.split();
    let mut out = vec![StabilizerGroup::from_parts(s.n(), sp.d1, g1)];
    out.extend(decompose_group_raw(&StabilizerGroup::from_parts(s.n(), sp.d2, g2))?);
    Ok(out)
}

/// `𝕌 S 𝕌† = ⊗_i S_i`, one group per prime-power factor of `D`, with trivial
/// generator images dropped.
pub fn decompose_group(s: &StabilizerGroup) -> Result<Vec<StabilizerGroup>> {
    Ok(decompose_group_raw(s)?
        .into_iter()
        .map(|c| {
            let gens = c.gens().iter().filter(|g| !g.is_identity()).cloned().collect();
            StabilizerGroup::from_parts(c.n(), c.d(), gens)
        })
        .collect())
}

/// Splits a stabilizer state into one state per prime-power factor.
pub fn decompose_state(s: &StabilizerGroup) -> Result<Vec<StabilizerGroup>> {
    s.require_state()?;
    let parts = decompose_group(s)?;
    for p in &parts {
        if !p.is_state() {
            return Err(Error::InternalInvariant(format!(
                "CRT factor at D={} is not a state",
                p.d()
            )));
        }
    }
    Ok(parts)
}

/// Integers `c_p` with `Σ_p c_p·(D/p) = 1` over the primes of a squarefree
/// `D`, so that `λ_D^γ = Π_p λ_p^{γ c_p}`.
pub fn phase_coefficients(d: u64) -> Result<Vec<(u64, i128)>> {
    let m = factorize(d)?;
    if !m.is_squarefree() {
        return Err(Error::NotSquarefree(d));
    }
    let primes = m.primes();
    let mut out: Vec<(u64, i128)> = Vec::new();
    let mut rest: i128 = 1;
    for &p in &primes[1..] {
        let c = inv_mod((d / p) % p, p)? as i128;
        rest -= c * (d / p) as i128;
        out.push((p, c));
    }
    let m1 = (d / primes[0]) as i128;
    debug_assert_eq!(rest % m1, 0);
    out.insert(0, (primes[0], rest / m1));
    Ok(out)
}

/// Component of `p` over a squarefree `D` on the factor `prime`.
pub fn project_to_prime(p: &PauliProduct, prime: u64) -> Result<PauliProduct> {
    let d = p.d();
    let coef = phase_coefficients(d)?;
    let Some(&(_, c)) = coef.iter().find(|(q, _)| *q == prime) else {
        return Err(Error::NotCoprime(prime, d));
    };
    if d == prime {
        return Ok(p.clone());
    }
    let r = inv_mod((d / prime) % prime, prime)?;
    let x: Vec<i128> = p.x().iter().map(|&a| (a % prime) as i128).collect();
    let z: Vec<i128> = p.z().iter().map(|&b| mul_mod(b, r, prime) as i128).collect();
    PauliProduct::new(prime, p.phase() as i128 * c, &x, &z)
}

/// Inverse of [`project_to_prime`] for an element supported on one factor:
/// the result acts as `h` on the `prime` factor and trivially elsewhere.
pub fn lift_from_prime(h: &PauliProduct, d: u64) -> Result<PauliProduct> {
    let p = h.d();
    if !d.is_multiple_of(p) || gcd(p, d / p) != 1 {
        return Err(Error::NotCoprime(p, d / p));
    }
    let m = d / p;
    let r = if p == d { 1 } else { inv_mod(m % p, p)? };
    let x: Vec<i128> = h.x().iter().map(|&a| (mul_mod(mul_mod(a, r, p), m, d)) as i128).collect();
    let z: Vec<i128> = h.z().iter().map(|&b| mul_mod(b, m, d) as i128).collect();
    PauliProduct::new(d, h.phase() as i128 * m as i128, &x, &z)
}

/// Lifts a per-prime list back to `D` by multiplying the lifted pieces.
pub fn combine_components(parts: &[PauliProduct], d: u64) -> Result<PauliProduct> {
    let n = parts.first().map(|p| p.n()).unwrap_or(0);
    let mut out = PauliProduct::identity(n, d);
    for h in parts {
        out = out.multiply(&lift_from_prime(h, d)?)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modring::reduce;
    use crate::stabilizer::GraphAdjacency;

    #[test]
    fn split_pauli_examples() {
        let ctx = CrtContext::new(2, 3).unwrap();
        let (a, b) = ctx.split_pauli(&PauliProduct::x_on(1, 6, 0, 1)).unwrap();
        assert_eq!((a, b), (PauliProduct::x_on(1, 2, 0, 1), PauliProduct::x_on(1, 3, 0, 1)));
        let (a, b) = ctx.split_pauli(&PauliProduct::z_on(1, 6, 0, 1)).unwrap();
        assert_eq!((a, b), (PauliProduct::z_on(1, 2, 0, 1), PauliProduct::z_on(1, 3, 0, 2)));
        let (a, b) = ctx.split_pauli(&PauliProduct::identity(2, 6)).unwrap();
        assert!(a.is_identity() && b.is_identity());
    }

    #[test]
    fn split_preserves_products_and_commutation() {
        let ctx = CrtContext::new(2, 5).unwrap();
        let d = 10;
        let ps: Vec<PauliProduct> = (0..40)
            .map(|i| {
                PauliProduct::new(d, (i * 7) % 20, &[i % 10, (i * 3) % 10], &[(i * 9) % 10, (i / 2) % 10])
                    .unwrap()
            })
            .collect();
        for p in &ps {
            for q in &ps {
                let (p1, p2) = ctx.split_pauli(p).unwrap();
                let (q1, q2) = ctx.split_pauli(q).unwrap();
                let (r1, r2) = ctx.split_pauli(&p.multiply(q).unwrap()).unwrap();
                // the product's phase is shared the same way only up to the
                // joint scalar, so compare the combined phase
                assert_eq!(p1.multiply(&q1).unwrap().x(), r1.x());
                assert_eq!(p2.multiply(&q2).unwrap().z(), r2.z());
                let joint = |a: &PauliProduct, b: &PauliProduct| {
                    reduce(a.phase() as i128 * 5 + b.phase() as i128 * 2, 20)
                };
                let pq1 = p1.multiply(&q1).unwrap();
                let pq2 = p2.multiply(&q2).unwrap();
                assert_eq!(joint(&pq1, &pq2), joint(&r1, &r2));
                let c = p.commutation_phase(q).unwrap();
                assert_eq!(c % 2, p1.commutation_phase(&q1).unwrap());
                // commutation over Z_5 picks up r2 = 2^{-1} = 3
                assert_eq!(mul_mod(c % 5, 3, 5), p2.commutation_phase(&q2).unwrap());
            }
        }
    }

    #[test]
    fn generator_split_orders() {
        let ctx = CrtContext::new(2, 3).unwrap();
        let x = PauliProduct::x_on(1, 6, 0, 1);
        let gs = ctx.generator_data(&x).unwrap();
        assert_eq!((gs.delta, gs.delta1, gs.delta2), (6, 2, 3));
        let (h1, h2) = ctx.split_generator(&x).unwrap();
        assert_eq!((h1.order(), h2.order()), (2, 3));
        let (h1, h2) = ctx.split_generator(&x.power(3)).unwrap();
        assert_eq!((h1.order(), h2.order()), (2, 1));
        assert!(h2.is_identity());
        // (𝕌g𝕌†) = h1 ⊗ h2 exactly, phases included
        let g = PauliProduct::new(6, 1, &[1, 2], &[5, 3]).unwrap();
        assert!(g.closes_to_identity());
        let (h1, h2) = ctx.split_generator(&g).unwrap();
        let back = combine_components(&[h1, h2], 6).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn lift_and_project_round_trip() {
        for d in [6u64, 10, 15, 30] {
            let primes = factorize(d).unwrap().primes();
            let g = PauliProduct::new(d, 0, &[1, 4, 7], &[2, 0, 5]).unwrap();
            let g = if g.closes_to_identity() { g } else { g.with_phase(d as i128) };
            let parts: Vec<PauliProduct> =
                primes.iter().map(|&p| project_to_prime(&g, p).unwrap()).collect();
            assert_eq!(combine_components(&parts, d).unwrap(), g);
        }
    }

    #[test]
    fn ghz_splits_into_ghz() {
        let ghz6 = StabilizerGroup::ghz_group(6).unwrap();
        let parts = decompose_state(&ghz6).unwrap();
        assert_eq!(parts.len(), 2);
        assert!(parts[0].same_group(&StabilizerGroup::ghz_group(2).unwrap()).unwrap());
        assert!(parts[1].same_group(&StabilizerGroup::ghz_group(3).unwrap()).unwrap());
        let g = GraphAdjacency::from_edges(3, 30, &[(0, 1, 7), (1, 2, 11)]).unwrap();
        let parts = decompose_state(&StabilizerGroup::from_graph(&g)).unwrap();
        assert_eq!(parts.iter().map(|p| p.d()).collect::<Vec<_>>(), vec![2, 3, 5]);
        assert!(parts.iter().all(|p| p.is_state()));
        let single = decompose_group(&ghz6.subgroup_on_part(&[0]).unwrap()).unwrap();
        assert!(single.iter().all(|s| s.gens().is_empty()));
    }
}
