//! Dense-matrix ground truth. Everything here is floating point. State
//! vectors are limited to `D^n <= 65536` and full operators to `D^n <= 4096`;
//! the exact modules never depend on it.
//!
//! Basis states are indexed with qudit 0 as the most significant digit.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::clifford::Gate;
use crate::error::{Error, Result};
use crate::modring::factorize;
use crate::pauli::PauliProduct;
use crate::stabilizer::{GraphAdjacency, StabilizerGroup};

pub type C = Complex64;

/// Largest state-vector length the oracle will build.
pub const MAX_STATE: u128 = 1 << 16;
/// Largest side of a dense operator the oracle will build.
pub const MAX_DENSE: u128 = 4096;
/// Singular values and entries below this count as zero.
pub const RANK_TOL: f64 = 1e-9;
/// Tolerance for entrywise equality.
pub const EQ_TOL: f64 = 1e-10;

fn capped_dim(n: usize, d: u64, cap: u128) -> Result<usize> {
    let mut dim: u128 = 1;
    for _ in 0..n {
        dim = dim.saturating_mul(d as u128);
        if dim > cap {
            return Err(Error::TooLarge(dim));
        }
    }
    Ok(dim as usize)
}

/// `D^n` for a state vector.
pub fn dense_dim(n: usize, d: u64) -> Result<usize> {
    capped_dim(n, d, MAX_STATE)
}

/// `D^n` for a dense operator.
pub fn matrix_dim(n: usize, d: u64) -> Result<usize> {
    capped_dim(n, d, MAX_DENSE)
}

/// `e^{2πi k/denom}`, reducing `k` first so large exponents stay accurate.
fn root(k: i128, denom: u64) -> C {
    let t = 2.0 * std::f64::consts::PI * (k.rem_euclid(denom as i128) as f64) / denom as f64;
    C::new(t.cos(), t.sin())
}

/// `ω^k` for dimension `d`.
pub fn omega(d: u64, k: i128) -> C {
    root(k, d)
}

/// `λ^k` for dimension `d`.
pub fn lambda(d: u64, k: i128) -> C {
    root(k, 2 * d)
}

fn digits(mut idx: usize, n: usize, d: u64) -> Vec<u64> {
    let mut out = vec![0; n];
    for q in (0..n).rev() {
        out[q] = (idx % d as usize) as u64;
        idx /= d as usize;
    }
    out
}

fn index(digs: &[u64], d: u64) -> usize {
    digs.iter().fold(0usize, |acc, &v| acc * d as usize + v as usize)
}

/// `p|ψ⟩` without building the matrix.
pub fn apply_pauli(p: &PauliProduct, psi: &[C]) -> Result<Vec<C>> {
    let (n, d) = (p.n(), p.d());
    let dim = dense_dim(n, d)?;
    if psi.len() != dim {
        return Err(Error::ShapeMismatch("vector length does not match D^n".into()));
    }
    let pre = lambda(d, p.phase() as i128);
    let mut out = vec![C::new(0.0, 0.0); dim];
    for (j, amp) in psi.iter().enumerate() {
        if *amp == C::new(0.0, 0.0) {
            continue;
        }
        let dj = digits(j, n, d);
        // Z^z first, then X^x shifts |j⟩ to |j - x⟩
        let zphase: i128 = dj.iter().zip(p.z()).map(|(&a, &b)| a as i128 * b as i128).sum();
        let target: Vec<u64> = dj.iter().zip(p.x()).map(|(&a, &b)| (a + d - b) % d).collect();
        out[index(&target, d)] += pre * omega(d, zphase) * amp;
    }
    Ok(out)
}

pub fn pauli_matrix(p: &PauliProduct) -> Result<DMatrix<C>> {
    let dim = matrix_dim(p.n(), p.d())?;
    let mut m = DMatrix::zeros(dim, dim);
    for j in 0..dim {
        let mut e = vec![C::new(0.0, 0.0); dim];
        e[j] = C::new(1.0, 0.0);
        let col = apply_pauli(p, &e)?;
        for i in 0..dim {
            m[(i, j)] = col[i];
        }
    }
    Ok(m)
}

/// The single-qudit gate matrices; `None` for two-qudit gates.
fn single_matrix(g: &Gate, d: u64) -> Option<DMatrix<C>> {
    let dd = d as usize;
    let mut m = DMatrix::zeros(dd, dd);
    match *g {
        Gate::Fourier(_) => {
            let s = 1.0 / (d as f64).sqrt();
            for j in 0..dd {
                for k in 0..dd {
                    m[(j, k)] = omega(d, (j * k) as i128) * s;
                }
            }
        }
        Gate::Mult(_, a) => {
            // S = Σ |j⟩⟨αj|
            for j in 0..d {
                m[(j as usize, ((a * j) % d) as usize)] = C::new(1.0, 0.0);
            }
        }
        Gate::Phase(_) => {
            for j in 0..d as i128 {
                let e = if d.is_multiple_of(2) { -j * (j + 2) } else { -j * (j + 1) };
                m[(j as usize, j as usize)] = lambda(d, e);
            }
        }
        Gate::PauliX(_, a) => {
            for j in 0..d {
                m[(j as usize, ((j + a) % d) as usize)] = C::new(1.0, 0.0);
            }
        }
        Gate::PauliZ(_, b) => {
            for j in 0..d {
                m[(j as usize, j as usize)] = omega(d, (b * j) as i128);
            }
        }
        Gate::CPhase(..) | Gate::Cnot(..) => return None,
    }
    Some(m)
}

/// `G|ψ⟩` on `n` qudits.
pub fn apply_gate(g: &Gate, n: usize, d: u64, psi: &[C]) -> Result<Vec<C>> {
    let dim = dense_dim(n, d)?;
    if psi.len() != dim {
        return Err(Error::ShapeMismatch("vector length does not match D^n".into()));
    }
    let mut out = vec![C::new(0.0, 0.0); dim];
    if let Some(m) = single_matrix(g, d) {
        let q = g.qudits()[0];
        for (j, amp) in psi.iter().enumerate() {
            let mut dj = digits(j, n, d);
            let v = dj[q] as usize;
            for r in 0..d as usize {
                let c = m[(r, v)];
                if c != C::new(0.0, 0.0) {
                    dj[q] = r as u64;
                    out[index(&dj, d)] += c * amp;
                }
            }
        }
        return Ok(out);
    }
    for (j, amp) in psi.iter().enumerate() {
        let mut dj = digits(j, n, d);
        match *g {
            Gate::CPhase(q, r, w) => {
                let e = (dj[q] * dj[r] % d * w) as i128;
                out[j] += omega(d, e) * amp;
            }
            Gate::Cnot(q, r) => {
                // |j⟩|k⟩ ↦ |j⟩ X^j |k⟩ = |j⟩|k - j⟩
                dj[r] = (dj[r] + d - dj[q]) % d;
                out[index(&dj, d)] += amp;
            }
            _ => unreachable!(),
        }
    }
    Ok(out)
}

pub fn apply_gates(gates: &[Gate], n: usize, d: u64, psi: &[C]) -> Result<Vec<C>> {
    let mut v = psi.to_vec();
    for g in gates {
        v = apply_gate(g, n, d, &v)?;
    }
    Ok(v)
}

/// The unitary of a time-ordered gate list.
pub fn clifford_matrix(gates: &[Gate], n: usize, d: u64) -> Result<DMatrix<C>> {
    let dim = matrix_dim(n, d)?;
    let mut m = DMatrix::zeros(dim, dim);
    for j in 0..dim {
        let mut e = vec![C::new(0.0, 0.0); dim];
        e[j] = C::new(1.0, 0.0);
        let col = apply_gates(gates, n, d, &e)?;
        for i in 0..dim {
            m[(i, j)] = col[i];
        }
    }
    Ok(m)
}

fn norm(v: &[C]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(v: &mut [C]) {
    let s = norm(v);
    for c in v.iter_mut() {
        *c /= s;
    }
}

pub fn inner(a: &[C], b: &[C]) -> C {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `|⟨a|b⟩|²` for normalized inputs.
pub fn fidelity(a: &[C], b: &[C]) -> f64 {
    inner(a, b).norm_sqr()
}

/// Projects with `Π_i (1/o_i) Σ_c g_i^c`, the product form of the group sum.
fn project(s: &StabilizerGroup, v: &[C]) -> Result<Vec<C>> {
    let mut v = v.to_vec();
    for g in s.gens() {
        let o = g.order();
        let mut acc = v.clone();
        let mut cur = v.clone();
        for _ in 1..o {
            cur = apply_pauli(g, &cur)?;
            for (a, c) in acc.iter_mut().zip(&cur) {
                *a += c;
            }
        }
        for a in acc.iter_mut() {
            *a /= o as f64;
        }
        v = acc;
    }
    Ok(v)
}

/// The state fixed by `S`, from the projector `(1/|S|) Σ_{s∈S} s` applied to
/// seeded random vectors. Rank one is checked by projecting two independent
/// vectors and requiring parallel, non-zero images.
pub fn state_from_group(s: &StabilizerGroup) -> Result<Vec<C>> {
    let dim = dense_dim(s.n(), s.d())?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut draw = || -> Vec<C> {
        (0..dim)
            .map(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect()
    };
    let mut a = project(s, &draw())?;
    let mut b = project(s, &draw())?;
    if norm(&a) < RANK_TOL || norm(&b) < RANK_TOL {
        return Err(Error::NotRankOne("projector annihilated a random vector".into()));
    }
    normalize(&mut a);
    normalize(&mut b);
    if (fidelity(&a, &b) - 1.0).abs() > RANK_TOL {
        return Err(Error::NotRankOne("projector has rank above one".into()));
    }
    // fix the global phase on the largest entry for reproducible output
    let (imax, _) = a
        .iter()
        .enumerate()
        .fold((0, 0.0), |(bi, bv), (i, c)| if c.norm() > bv + EQ_TOL { (i, c.norm()) } else { (bi, bv) });
    let ph = a[imax] / a[imax].norm();
    for c in a.iter_mut() {
        *c /= ph;
    }
    Ok(a)
}

/// Amplitudes `ω^{Σ_{a<b} Γ_ab j_a j_b} / √(D^n)`.
pub fn graph_state(g: &GraphAdjacency) -> Result<Vec<C>> {
    let (n, d) = (g.n(), g.d());
    let dim = dense_dim(n, d)?;
    let s = 1.0 / (dim as f64).sqrt();
    let edges = g.edges();
    Ok((0..dim)
        .map(|j| {
            let dj = digits(j, n, d);
            let e: i128 = edges
                .iter()
                .map(|&(a, b, w)| (dj[a] * dj[b] % d * w) as i128)
                .sum();
            omega(d, e) * s
        })
        .collect())
}

/// `ψ` as a `D^{|part|} × D^{rest}` matrix.
fn bipartite_matrix(psi: &[C], n: usize, d: u64, part: &[usize]) -> Result<DMatrix<C>> {
    let dim = dense_dim(n, d)?;
    if psi.len() != dim {
        return Err(Error::ShapeMismatch("vector length does not match D^n".into()));
    }
    if let Some(&q) = part.iter().find(|&&q| q >= n) {
        return Err(Error::IndexOutOfRange { index: q, n });
    }
    let rest: Vec<usize> = (0..n).filter(|q| !part.contains(q)).collect();
    let rows = (d as usize).pow(part.len() as u32);
    let cols = (d as usize).pow(rest.len() as u32);
    let mut m = DMatrix::zeros(rows, cols);
    for (j, amp) in psi.iter().enumerate() {
        let dj = digits(j, n, d);
        let r = part.iter().fold(0usize, |a, &q| a * d as usize + dj[q] as usize);
        let c = rest.iter().fold(0usize, |a, &q| a * d as usize + dj[q] as usize);
        m[(r, c)] = *amp;
    }
    Ok(m)
}

/// `ρ_part = Tr_rest |ψ⟩⟨ψ|`.
pub fn reduced_density(psi: &[C], n: usize, d: u64, part: &[usize]) -> Result<DMatrix<C>> {
    let m = bipartite_matrix(psi, n, d, part)?;
    Ok(&m * m.adjoint())
}

/// Number of singular values of the `part | rest` reshaping above `RANK_TOL`.
pub fn schmidt_rank(psi: &[C], n: usize, d: u64, part: &[usize]) -> Result<usize> {
    let m = bipartite_matrix(psi, n, d, part)?;
    Ok(matrix_rank(&m))
}

pub fn matrix_rank(m: &DMatrix<C>) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .filter(|&&s| s > RANK_TOL)
        .count()
}

pub fn kron(a: &[C], b: &[C]) -> Vec<C> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

/// `𝕌^{⊗n}|ψ⟩` for squarefree `D`: each `|a⟩` goes to `⊗_p |a mod p⟩`, and
/// the output is ordered as (all qudits at the smallest prime) ⊗ (next prime) ⊗ ….
pub fn crt_relabel(psi: &[C], n: usize, d: u64) -> Result<Vec<C>> {
    let dim = dense_dim(n, d)?;
    if psi.len() != dim {
        return Err(Error::ShapeMismatch("vector length does not match D^n".into()));
    }
    let m = factorize(d)?;
    if !m.is_squarefree() {
        return Err(Error::NotSquarefree(d));
    }
    let primes = m.primes();
    let mut out = vec![C::new(0.0, 0.0); dim];
    for (j, amp) in psi.iter().enumerate() {
        let dj = digits(j, n, d);
        let mut idx = 0usize;
        for &p in &primes {
            let comp: Vec<u64> = dj.iter().map(|a| a % p).collect();
            idx = idx * (p as usize).pow(n as u32) + index(&comp, p);
        }
        out[idx] = *amp;
    }
    Ok(out)
}

/// The isometry `V = Σ_i f_1^{i_1}⋯f_k^{i_k} |G⟩⟨i|` as a `D^n × D^k` matrix.
pub fn code_isometry(graph: &GraphAdjacency, coding: &[PauliProduct]) -> Result<DMatrix<C>> {
    let (n, d) = (graph.n(), graph.d());
    let k = coding.len();
    let rows = matrix_dim(n, d)?;
    let cols = matrix_dim(k, d)?;
    let g = graph_state(graph)?;
    let mut v = DMatrix::zeros(rows, cols);
    for i in 0..cols {
        let di = digits(i, k, d);
        let mut col = g.clone();
        for (f, &e) in coding.iter().zip(&di) {
            for _ in 0..e {
                col = apply_pauli(f, &col)?;
            }
        }
        for r in 0..rows {
            v[(r, i)] = col[r];
        }
    }
    Ok(v)
}

/// `Tr_{others} M` for an operator on `n` qudits, keeping `keep` in order.
pub fn partial_trace(m: &DMatrix<C>, n: usize, d: u64, keep: &[usize]) -> Result<DMatrix<C>> {
    let dim = matrix_dim(n, d)?;
    if m.nrows() != dim || m.ncols() != dim {
        return Err(Error::ShapeMismatch("operator size does not match D^n".into()));
    }
    let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let dk = (d as usize).pow(keep.len() as u32);
    let dt = (d as usize).pow(traced.len() as u32);
    // full index of (kept digits, traced digits)
    let mut full = vec![0usize; dk * dt];
    for j in 0..dim {
        let dj = digits(j, n, d);
        let a = keep.iter().fold(0usize, |acc, &q| acc * d as usize + dj[q] as usize);
        let b = traced.iter().fold(0usize, |acc, &q| acc * d as usize + dj[q] as usize);
        full[a * dt + b] = j;
    }
    let mut out = DMatrix::zeros(dk, dk);
    for a in 0..dk {
        for b in 0..dk {
            let mut s = C::new(0.0, 0.0);
            for t in 0..dt {
                s += m[(full[a * dt + t], full[b * dt + t])];
            }
            out[(a, b)] = s;
        }
    }
    Ok(out)
}

/// `E_B(ρ) = Tr_C{V ρ V†}` with `B` the kept output qudits.
pub fn apply_channel(v: &DMatrix<C>, n: usize, d: u64, keep: &[usize], rho: &DMatrix<C>) -> Result<DMatrix<C>> {
    let out = v * rho * v.adjoint();
    partial_trace(&out, n, d, keep)
}

/// Whether `E_B(p) ≠ 0`, judged on the largest entry.
pub fn pauli_transmitted(v: &DMatrix<C>, n: usize, d: u64, keep: &[usize], p: &PauliProduct) -> Result<bool> {
    let e = apply_channel(v, n, d, keep, &pauli_matrix(p)?)?;
    Ok(e.iter().map(|c| c.norm()).fold(0.0, f64::max) > RANK_TOL)
}

/// All `γ = 0` Paulis on `k` input qudits transmitted to `keep`, as `(x|z)` vectors.
pub fn transmitted_paulis(v: &DMatrix<C>, n: usize, k: usize, d: u64, keep: &[usize]) -> Result<Vec<Vec<u64>>> {
    let total = dense_dim(2 * k, d)?;
    let mut out = Vec::new();
    for idx in 0..total {
        let e = digits(idx, 2 * k, d);
        let x: Vec<i128> = e[..k].iter().map(|&a| a as i128).collect();
        let z: Vec<i128> = e[k..].iter().map(|&a| a as i128).collect();
        let p = PauliProduct::new(d, 0, &x, &z)?;
        if pauli_transmitted(v, n, d, keep, &p)? {
            out.push(e);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::CliffordTableau;

    fn close(a: &DMatrix<C>, b: &DMatrix<C>) -> bool {
        a.shape() == b.shape() && a.iter().zip(b.iter()).all(|(x, y)| (x - y).norm() < EQ_TOL)
    }

    #[test]
    fn small_matrices() {
        let z = pauli_matrix(&PauliProduct::z_on(1, 2, 0, 1)).unwrap();
        assert!((z[(0, 0)] - C::new(1.0, 0.0)).norm() < EQ_TOL);
        assert!((z[(1, 1)] + C::new(1.0, 0.0)).norm() < EQ_TOL);
        let f = clifford_matrix(&[Gate::Fourier(0)], 1, 2).unwrap();
        let h = 1.0 / 2f64.sqrt();
        assert!((f[(1, 1)] + C::new(h, 0.0)).norm() < EQ_TOL);
        for d in 2..6 {
            let x = pauli_matrix(&PauliProduct::x_on(1, d, 0, 1)).unwrap();
            let mut acc = DMatrix::identity(d as usize, d as usize);
            for _ in 0..d {
                acc = &acc * &x;
            }
            assert!(close(&acc, &DMatrix::identity(d as usize, d as usize)));
        }
    }

    #[test]
    fn multiply_matches_matrices() {
        for d in 2..6u64 {
            for s in 0..30i128 {
                let di = d as i128;
                let p = PauliProduct::new(d, s % (2 * di), &[s % di, (s / 2) % di], &[(s * 3) % di, (s / 3) % di]).unwrap();
                let q = PauliProduct::new(d, (s * 5) % (2 * di), &[(s * 7) % di, s % di], &[(s / 5) % di, (s * 2) % di]).unwrap();
                let lhs = pauli_matrix(&p.multiply(&q).unwrap()).unwrap();
                let rhs = pauli_matrix(&p).unwrap() * pauli_matrix(&q).unwrap();
                assert!(close(&lhs, &rhs));
                let a = p.commutation_phase(&q).unwrap();
                let pq = pauli_matrix(&p).unwrap() * pauli_matrix(&q).unwrap();
                let qp = pauli_matrix(&q).unwrap() * pauli_matrix(&p).unwrap() * omega(d, a as i128);
                assert!(close(&pq, &qp));
            }
        }
    }

    #[test]
    fn hilbert_schmidt_orthonormal() {
        for d in 2..5u64 {
            let di = d as i128;
            let all: Vec<PauliProduct> = (0..di.pow(2))
                .map(|c| PauliProduct::new(d, 0, &[c % di], &[c / di]).unwrap())
                .collect();
            for a in &all {
                for b in &all {
                    let t = (pauli_matrix(a).unwrap().adjoint() * pauli_matrix(b).unwrap()).trace() / d as f64;
                    let want = if a == b { 1.0 } else { 0.0 };
                    assert!((t - C::new(want, 0.0)).norm() < EQ_TOL);
                }
            }
        }
    }

    #[test]
    fn gate_tableaux_match_matrices() {
        for d in 2..6u64 {
            let mut gates = vec![Gate::Fourier(0), Gate::Phase(1), Gate::PauliX(0, 1), Gate::PauliZ(1, d - 1)];
            gates.push(Gate::CPhase(0, 1, 1));
            gates.push(Gate::Cnot(1, 0));
            if d > 2 {
                gates.push(Gate::Mult(0, d - 1));
            }
            for g in &gates {
                let t = CliffordTableau::from_gates(2, d, &[*g]).unwrap();
                let u = clifford_matrix(&[*g], 2, d).unwrap();
                for c in 0..(d * d * d * d) as i128 {
                    let di = d as i128;
                    let p = PauliProduct::new(d, 0, &[c % di, (c / di) % di], &[(c / di / di) % di, c / di / di / di]).unwrap();
                    let lhs = &u * pauli_matrix(&p).unwrap() * u.adjoint();
                    let rhs = pauli_matrix(&t.conjugate(&p).unwrap()).unwrap();
                    assert!(close(&lhs, &rhs), "gate {g} on {p} at D={d}");
                }
            }
        }
    }

    #[test]
    fn canonical_states() {
        for d in 2..6u64 {
            let epr = state_from_group(&StabilizerGroup::epr_group(d).unwrap()).unwrap();
            let s = 1.0 / (d as f64).sqrt();
            for j in 0..d as usize {
                assert!((epr[j * d as usize + j] - C::new(s, 0.0)).norm() < 1e-9);
            }
            assert_eq!(schmidt_rank(&epr, 2, d, &[0]).unwrap(), d as usize);
            let rho = reduced_density(&epr, 2, d, &[0]).unwrap();
            assert!(close(&rho, &(DMatrix::identity(d as usize, d as usize) / C::new(d as f64, 0.0))));
        }
        let ghz = state_from_group(&StabilizerGroup::ghz_group(2).unwrap()).unwrap();
        let s = 1.0 / 2f64.sqrt();
        assert!((ghz[0] - C::new(s, 0.0)).norm() < 1e-9 && (ghz[7] - C::new(s, 0.0)).norm() < 1e-9);
        let plus = state_from_group(&StabilizerGroup::plus_state(2, 3)).unwrap();
        assert_eq!(schmidt_rank(&plus, 2, 3, &[0]).unwrap(), 1);
        let bad = StabilizerGroup::new(2, 3, vec![PauliProduct::x_on(2, 3, 0, 1)]).unwrap();
        assert!(matches!(state_from_group(&bad), Err(Error::NotRankOne(_))));
    }

    #[test]
    fn graph_state_is_stabilized() {
        for d in [2u64, 3, 5] {
            let g = GraphAdjacency::from_edges(3, d, &[(0, 1, 1), (1, 2, (d - 1) as i128), (0, 2, 2)]).unwrap();
            let psi = graph_state(&g).unwrap();
            let from_group = state_from_group(&StabilizerGroup::from_graph(&g)).unwrap();
            assert!((fidelity(&psi, &from_group) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn too_large() {
        assert!(matches!(matrix_dim(13, 2), Err(Error::TooLarge(_))));
        assert_eq!(matrix_dim(12, 2).unwrap(), 4096);
        assert_eq!(dense_dim(6, 6).unwrap(), 46656);
        assert!(matches!(dense_dim(17, 2), Err(Error::TooLarge(_))));
    }
}
