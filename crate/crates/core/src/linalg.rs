//! Gaussian elimination over `Z_p`, both on plain exponent vectors and on
//! Pauli products (where row operations are group multiplications, so the
//! phases come along for free).

use crate::error::{Error, Result};
use crate::modring::{inv_mod, mul_mod, reduce, sub_mod};
use crate::pauli::PauliProduct;

/// Entry of the symplectic exponent vector: `x_c` for `c < n`, else `z_{c-n}`.
pub(crate) fn col(p: &PauliProduct, c: usize) -> u64 {
    let n = p.n();
    if c < n {
        p.x()[c]
    } else {
        p.z()[c - n]
    }
}

/// The `(x | z)` exponent vector.
pub(crate) fn exponents(p: &PauliProduct) -> Vec<u64> {
    p.x().iter().chain(p.z().iter()).copied().collect()
}

/// Column indices `x_q` then `z_q` for each qudit in `qudits`.
pub(crate) fn qudit_cols(qudits: &[usize], n: usize) -> Vec<usize> {
    qudits.iter().flat_map(|&q| [q, n + q]).collect()
}

/// A reduced row echelon form of Pauli products over a prime dimension.
#[derive(Debug, Clone)]
pub(crate) struct Echelon {
    /// Independent rows, pivot entry 1, zero in every other row's pivot column.
    pub rows: Vec<PauliProduct>,
    /// Pivot column of each row, in the order the columns were scanned.
    pub pivots: Vec<usize>,
    /// Inputs that reduced to zero on all scanned columns.
    pub dropped: Vec<PauliProduct>,
}

impl Echelon {
    /// Eliminates `gens` scanning columns in the order given by `cols`.
    /// The dimension must be prime.
    pub fn new(gens: &[PauliProduct], cols: &[usize]) -> Echelon {
        let mut work: Vec<PauliProduct> = gens.to_vec();
        let mut rows: Vec<PauliProduct> = Vec::new();
        let mut pivots = Vec::new();
        for &c in cols {
            let Some(i) = work.iter().position(|g| col(g, c) != 0) else {
                continue;
            };
            let g = work.remove(i);
            let d = g.d();
            let inv = inv_mod(col(&g, c), d).expect("prime dimension");
            let g = g.power(inv as i128);
            let clear = |h: &PauliProduct| {
                let v = col(h, c);
                if v == 0 {
                    h.clone()
                } else {
                    h.mul_unchecked(&g.power(-(v as i128)))
                }
            };
            for h in work.iter_mut() {
                *h = clear(h);
            }
            for h in rows.iter_mut() {
                *h = clear(h);
            }
            rows.push(g);
            pivots.push(c);
        }
        Echelon { rows, pivots, dropped: work }
    }

    /// Full elimination over every column, rejecting dependent inputs that
    /// reduce to a non-identity scalar.
    pub fn full(gens: &[PauliProduct], n: usize) -> Result<Echelon> {
        let cols: Vec<usize> = (0..2 * n).collect();
        let e = Echelon::new(gens, &cols);
        if let Some(bad) = e.dropped.iter().find(|g| !g.is_identity()) {
            return Err(Error::InvalidStabilizer(format!(
                "generators imply the scalar {bad}, so the group contains a non-trivial multiple of the identity"
            )));
        }
        Ok(e)
    }

    /// Reduces `p` against the rows; returns the remainder (zero on every pivot
    /// column when `p` is in the span on the scanned columns).
    pub fn reduce(&self, p: &PauliProduct) -> PauliProduct {
        let mut r = p.clone();
        for (g, &c) in self.rows.iter().zip(&self.pivots) {
            let v = col(&r, c);
            if v != 0 {
                r = r.mul_unchecked(&g.power(-(v as i128)));
            }
        }
        r
    }

    /// Rows whose pivot lies in `cols[from..]`.
    pub fn rows_pivoting_after(&self, cols: &[usize], from: usize) -> Vec<PauliProduct> {
        let late = &cols[from..];
        self.rows
            .iter()
            .zip(&self.pivots)
            .filter(|(_, c)| late.contains(c))
            .map(|(g, _)| g.clone())
            .collect()
    }
}

/// Finds `c` with `Σ c_i rows_i = target` over `Z_p`, if one exists.
pub(crate) fn solve_combination(rows: &[Vec<u64>], target: &[u64], p: u64) -> Option<Vec<u64>> {
    let m = rows.len();
    let width = target.len();
    // each working row carries its vector and its combination of inputs
    let mut basis: Vec<(Vec<u64>, Vec<u64>, usize)> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let mut v = r.clone();
        let mut comb = vec![0u64; m];
        comb[i] = 1;
        for (bv, bc, piv) in &basis {
            let t = v[*piv];
            if t != 0 {
                axpy(&mut v, bv, t, p);
                axpy(&mut comb, bc, t, p);
            }
        }
        if let Some(piv) = (0..width).find(|&c| v[c] != 0) {
            let inv = inv_mod(v[piv], p).expect("prime modulus");
            scale(&mut v, inv, p);
            scale(&mut comb, inv, p);
            basis.push((v, comb, piv));
        }
    }
    let mut t = target.to_vec();
    let mut comb = vec![0u64; m];
    for (bv, bc, piv) in &basis {
        let s = t[*piv];
        if s != 0 {
            axpy(&mut t, bv, s, p);
            // t -= s*bv corresponds to adding s*bc to the solution
            for (c, b) in comb.iter_mut().zip(bc) {
                *c = (*c + mul_mod(s, *b, p)) % p;
            }
        }
    }
    if t.iter().all(|&v| v == 0) {
        Some(comb)
    } else {
        None
    }
}

/// Basis of `{v : M v = 0}` over `Z_p` for `M` with `ncols` columns.
pub(crate) fn nullspace(mat: &[Vec<u64>], ncols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut rows: Vec<Vec<u64>> = mat.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(i) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, i);
        let inv = inv_mod(rows[r][c], p).expect("prime modulus");
        scale(&mut rows[r], inv, p);
        let pivot_row = rows[r].clone();
        for (j, row) in rows.iter_mut().enumerate() {
            if j != r && row[c] != 0 {
                let t = row[c];
                axpy(row, &pivot_row, t, p);
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; ncols];
            v[f] = 1;
            for (row, &pc) in rows.iter().zip(&pivots) {
                v[pc] = reduce(-(row[f] as i128), p);
            }
            v
        })
        .collect()
}

/// Rank over `Z_p`.
pub(crate) fn rank(mat: &[Vec<u64>], ncols: usize, p: u64) -> usize {
    ncols - nullspace(mat, ncols, p).len()
}

/// `v -= t * w`.
fn axpy(v: &mut [u64], w: &[u64], t: u64, p: u64) {
    for (a, b) in v.iter_mut().zip(w) {
        *a = sub_mod(*a, mul_mod(t, *b, p), p);
    }
}

fn scale(v: &mut [u64], t: u64, p: u64) {
    for a in v.iter_mut() {
        *a = mul_mod(*a, t, p);
    }
}
