//! Seeded random instances: graph states scrambled by local Cliffords, and
//! graph codes with random Z-type coding groups.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::canonicalize::Partition;
use crate::clifford::{CliffordTableau, Gate};
use crate::error::{Error, Result};
use crate::modring::{factorize, gcd};
use crate::pauli::PauliProduct;
use crate::stabilizer::{GraphAdjacency, StabilizerGroup};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Each unordered pair gets a uniform weight in `Z_D` (zero means no edge).
pub fn random_graph<R: Rng>(n: usize, d: u64, rng: &mut R) -> Result<GraphAdjacency> {
    let mut g = GraphAdjacency::empty(n, d);
    for i in 0..n {
        for j in i + 1..n {
            g.set_edge(i, j, rng.gen_range(0..d) as i128)?;
        }
    }
    Ok(g)
}

fn random_unit<R: Rng>(d: u64, rng: &mut R) -> u64 {
    loop {
        let a = rng.gen_range(1..d);
        if gcd(a, d) == 1 {
            return a;
        }
    }
}

fn random_single<R: Rng>(q: usize, d: u64, rng: &mut R) -> Gate {
    match rng.gen_range(0..5) {
        0 => Gate::Fourier(q),
        1 => Gate::Mult(q, random_unit(d, rng)),
        2 => Gate::Phase(q),
        3 => Gate::PauliX(q, rng.gen_range(0..d)),
        _ => Gate::PauliZ(q, rng.gen_range(0..d)),
    }
}

/// `count` random gates, each acting inside one part. Two-qudit gates are
/// drawn only when the chosen part has at least two qudits.
pub fn random_local_gates<R: Rng>(partition: &Partition, d: u64, count: usize, rng: &mut R) -> Vec<Gate> {
    let parts: Vec<&Vec<usize>> = partition.parts().iter().filter(|p| !p.is_empty()).collect();
    let mut out = Vec::with_capacity(count);
    if parts.is_empty() {
        return out;
    }
    for _ in 0..count {
        let part = parts[rng.gen_range(0..parts.len())];
        if part.len() >= 2 && rng.gen_bool(0.4) {
            let pick: Vec<usize> = part.choose_multiple(rng, 2).copied().collect();
            let (q, r) = (pick[0], pick[1]);
            out.push(if rng.gen_bool(0.5) {
                Gate::Cnot(q, r)
            } else {
                Gate::CPhase(q, r, rng.gen_range(1..d))
            });
        } else {
            let q = part[rng.gen_range(0..part.len())];
            out.push(random_single(q, d, rng));
        }
    }
    out
}

/// Conjugates `s` by `gates`.
pub fn scramble(s: &StabilizerGroup, gates: &[Gate]) -> Result<StabilizerGroup> {
    s.conjugated(&CliffordTableau::from_gates(s.n(), s.d(), gates)?)
}

/// A random graph state followed by `2n` random single-qudit Cliffords.
pub fn random_state(n: usize, d: u64, seed: u64) -> Result<StabilizerGroup> {
    let m = factorize(d)?;
    if !m.is_squarefree() {
        return Err(Error::NotSquarefree(d));
    }
    let mut r = rng(seed);
    let g = random_graph(n, d, &mut r)?;
    let singles: Vec<Gate> = (0..2 * n).map(|_| random_single(r.gen_range(0..n), d, &mut r)).collect();
    scramble(&StabilizerGroup::from_graph(&g), &singles)
}

/// A random partition of `n` qudits into `parts` (possibly empty) parts.
pub fn random_partition<R: Rng>(n: usize, parts: usize, rng: &mut R) -> Result<Partition> {
    let mut v = vec![Vec::new(); parts];
    for q in 0..n {
        v[rng.gen_range(0..parts)].push(q);
    }
    Partition::new(n, v)
}

/// A random graph on `n` qudits with `k` independent Z-type coding
/// generators. Prime `D`.
pub fn random_code_parts(n: usize, k: usize, d: u64, seed: u64) -> Result<(GraphAdjacency, Vec<PauliProduct>)> {
    if !factorize(d)?.is_prime() {
        return Err(Error::NonPrimeD(d));
    }
    if k > n {
        return Err(Error::InvalidCode(format!("k = {k} exceeds n = {n}")));
    }
    let mut r = rng(seed);
    let g = random_graph(n, d, &mut r)?;
    loop {
        let rows: Vec<Vec<u64>> = (0..k).map(|_| (0..n).map(|_| r.gen_range(0..d)).collect()).collect();
        if crate::linalg::rank(&rows, n, d) == k {
            let fs = rows
                .iter()
                .map(|z| {
                    let z: Vec<i128> = z.iter().map(|&a| a as i128).collect();
                    PauliProduct::new(d, 0, &vec![0; n], &z)
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok((g, fs));
        }
    }
}
