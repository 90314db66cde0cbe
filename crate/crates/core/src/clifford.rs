//! Clifford unitaries stored as the images of the `2n` generator Paulis,
//! together with the replayable list of elementary gates that built them.
//!
//! Conjugation rules (`U P U†`) of the elementary gates:
//!
//! | gate        | `X`                      | `Z`            |
//! |-------------|--------------------------|----------------|
//! | `F`         | `Z^{-1}`                 | `X`            |
//! | `S(α)`      | `X^{α⁻¹}`                | `Z^α`          |
//! | `W`         | `λXZ` (even D), `XZ` (odd D) | `Z`        |
//! | `X^a`       | `X`                      | `ω^a Z`        |
//! | `Z^b`       | `ω^{-b} X`               | `Z`            |
//!
//! Two-qudit gates: `CP_{qr}^w` sends `X_q ↦ X_q Z_r^{-w}`, `X_r ↦ X_r Z_q^{-w}`
//! and fixes both `Z`s; `CNOT_{qr}` sends `X_q ↦ X_q X_r^{-1}`,
//! `Z_r ↦ Z_q Z_r` and fixes `X_r`, `Z_q`.

use std::fmt;

use crate::error::{Error, Result};
use crate::modring::{inv_mod, is_prime, neg_mod, reduce};
use crate::pauli::PauliProduct;

/// An elementary gate. Qudit indices are zero-based in memory and
/// one-based in the text format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    Fourier(usize),
    Mult(usize, u64),
    Phase(usize),
    PauliX(usize, u64),
    PauliZ(usize, u64),
    CPhase(usize, usize, u64),
    Cnot(usize, usize),
}

impl Gate {
    pub fn qudits(&self) -> Vec<usize> {
        match *self {
            Gate::Fourier(q)
            | Gate::Mult(q, _)
            | Gate::Phase(q)
            | Gate::PauliX(q, _)
            | Gate::PauliZ(q, _) => vec![q],
            Gate::CPhase(q, r, _) | Gate::Cnot(q, r) => vec![q, r],
        }
    }

    fn validate(&self, n: usize, d: u64) -> Result<()> {
        for q in self.qudits() {
            if q >= n {
                return Err(Error::IndexOutOfRange { index: q, n });
            }
        }
        match *self {
            Gate::Mult(_, a) => {
                inv_mod(a, d)?;
            }
            Gate::CPhase(q, r, _) | Gate::Cnot(q, r) if q == r => {
                return Err(Error::ShapeMismatch(format!(
                    "two-qudit gate with control = target = {}",
                    q + 1
                )))
            }
            _ => {}
        }
        Ok(())
    }

    /// Images `(U X_q U†, U Z_q U†)` for each touched qudit `q`, as products on
    /// `n` qudits.
    fn images(&self, n: usize, d: u64) -> Vec<(usize, PauliProduct, PauliProduct)> {
        let xq = |q: usize, e: i128| PauliProduct::x_on(n, d, q, e);
        let zq = |q: usize, e: i128| PauliProduct::z_on(n, d, q, e);
        match *self {
            Gate::Fourier(q) => vec![(q, zq(q, -1), xq(q, 1))],
            Gate::Mult(q, a) => {
                let inv = inv_mod(a, d).expect("validated multiplier") as i128;
                vec![(q, xq(q, inv), zq(q, a as i128))]
            }
            Gate::Phase(q) => {
                let lam = if d.is_multiple_of(2) { 1 } else { 0 };
                let img = PauliProduct::from_terms(n, d, &[(q, 1, 1)]).with_phase(lam);
                vec![(q, img, zq(q, 1))]
            }
            Gate::PauliX(q, a) => vec![(q, xq(q, 1), zq(q, 1).with_phase(2 * a as i128))],
            Gate::PauliZ(q, b) => vec![(q, xq(q, 1).with_phase(-2 * b as i128), zq(q, 1))],
            Gate::CPhase(q, r, w) => {
                let w = w as i128;
                vec![
                    (q, PauliProduct::from_terms(n, d, &[(q, 1, 0), (r, 0, -w)]), zq(q, 1)),
                    (r, PauliProduct::from_terms(n, d, &[(r, 1, 0), (q, 0, -w)]), zq(r, 1)),
                ]
            }
            Gate::Cnot(q, r) => vec![
                (q, PauliProduct::from_terms(n, d, &[(q, 1, 0), (r, -1, 0)]), zq(q, 1)),
                (r, xq(r, 1), PauliProduct::from_terms(n, d, &[(q, 0, 1), (r, 0, 1)])),
            ],
        }
    }

    /// `G p G†`. Panics if the gate does not fit `p` (callers validate first).
    pub fn conjugate(&self, p: &PauliProduct) -> PauliProduct {
        let n = p.n();
        let d = p.d();
        let imgs = self.images(n, d);
        let touched: Vec<usize> = imgs.iter().map(|(q, _, _)| *q).collect();
        if touched.iter().all(|&q| p.is_identity_at(q)) {
            return p.clone();
        }
        let mut x = p.x().to_vec();
        let mut z = p.z().to_vec();
        for &q in &touched {
            x[q] = 0;
            z[q] = 0;
        }
        let mut out = PauliProduct::from_raw(d, p.phase(), x, z);
        for (q, ix, iz) in &imgs {
            let (a, b) = (p.x()[*q], p.z()[*q]);
            if a != 0 {
                out = out.mul_unchecked(&ix.power(a as i128));
            }
            if b != 0 {
                out = out.mul_unchecked(&iz.power(b as i128));
            }
        }
        out
    }

    /// Gates whose product (in time order) is the inverse unitary, up to a
    /// global phase.
    pub fn inverse(&self, d: u64) -> Vec<Gate> {
        match *self {
            Gate::Fourier(q) => vec![Gate::Fourier(q); 3],
            Gate::Mult(q, a) => vec![Gate::Mult(q, inv_mod(a, d).expect("validated multiplier"))],
            Gate::Phase(q) => {
                let mut v = vec![Gate::Phase(q); (d - 1) as usize];
                if d.is_multiple_of(2) {
                    // W^D = Z^{D/2} for even D
                    v.push(Gate::PauliZ(q, d / 2));
                }
                v
            }
            Gate::PauliX(q, a) => vec![Gate::PauliX(q, neg_mod(a, d))],
            Gate::PauliZ(q, b) => vec![Gate::PauliZ(q, neg_mod(b, d))],
            Gate::CPhase(q, r, w) => vec![Gate::CPhase(q, r, neg_mod(w, d))],
            Gate::Cnot(q, r) => {
                if d == 2 {
                    vec![Gate::Cnot(q, r)]
                } else {
                    let m = d - 1;
                    vec![Gate::Mult(q, m), Gate::Cnot(q, r), Gate::Mult(q, m)]
                }
            }
        }
    }

    /// Parses one line of the gate-list format (`F q`, `CP q r w`, ...).
    pub fn parse(line: &str, d: u64) -> Result<Gate> {
        let err = |msg: String| Error::Parse { line: 0, msg };
        let tok: Vec<&str> = line.split_whitespace().collect();
        let int = |i: usize| -> Result<u64> {
            tok.get(i)
                .ok_or_else(|| err(format!("missing field in `{line}`")))?
                .parse::<u64>()
                .map_err(|_| err(format!("bad integer in `{line}`")))
        };
        let q = |i: usize| -> Result<usize> {
            let v = int(i)?;
            if v == 0 {
                return Err(err("qudit labels are 1-based".into()));
            }
            Ok(v as usize - 1)
        };
        let arity = |k: usize| -> Result<()> {
            if tok.len() != k {
                return Err(err(format!("expected {} fields in `{line}`", k)));
            }
            Ok(())
        };
        let g = match tok.first().copied() {
            Some("F") => {
                arity(2)?;
                Gate::Fourier(q(1)?)
            }
            Some("S") => {
                arity(3)?;
                Gate::Mult(q(1)?, int(2)? % d)
            }
            Some("W") => {
                arity(2)?;
                Gate::Phase(q(1)?)
            }
            Some("X") => {
                arity(3)?;
                Gate::PauliX(q(1)?, int(2)? % d)
            }
            Some("Z") => {
                arity(3)?;
                Gate::PauliZ(q(1)?, int(2)? % d)
            }
            Some("CP") => {
                arity(4)?;
                Gate::CPhase(q(1)?, q(2)?, int(3)? % d)
            }
            Some("CNOT") => {
                arity(3)?;
                Gate::Cnot(q(1)?, q(2)?)
            }
            _ => return Err(err(format!("unknown gate `{line}`"))),
        };
        Ok(g)
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::Fourier(q) => write!(f, "F {}", q + 1),
            Gate::Mult(q, a) => write!(f, "S {} {}", q + 1, a),
            Gate::Phase(q) => write!(f, "W {}", q + 1),
            Gate::PauliX(q, a) => write!(f, "X {} {}", q + 1, a),
            Gate::PauliZ(q, b) => write!(f, "Z {} {}", q + 1, b),
            Gate::CPhase(q, r, w) => write!(f, "CP {} {} {}", q + 1, r + 1, w),
            Gate::Cnot(q, r) => write!(f, "CNOT {} {}", q + 1, r + 1),
        }
    }
}

/// A Clifford unitary `U` on `n` qudits: images `U X_i U†`, `U Z_i U†` and
/// the time-ordered gate list that produced them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliffordTableau {
    n: usize,
    d: u64,
    image_x: Vec<PauliProduct>,
    image_z: Vec<PauliProduct>,
    gates: Vec<Gate>,
}

impl CliffordTableau {
    pub fn identity(n: usize, d: u64) -> Self {
        CliffordTableau {
            n,
            d,
            image_x: (0..n).map(|q| PauliProduct::x_on(n, d, q, 1)).collect(),
            image_z: (0..n).map(|q| PauliProduct::z_on(n, d, q, 1)).collect(),
            gates: Vec::new(),
        }
    }

    /// Replays `gates` from the identity.
    pub fn from_gates(n: usize, d: u64, gates: &[Gate]) -> Result<Self> {
        let mut t = Self::identity(n, d);
        for g in gates {
            t.apply(*g)?;
        }
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn image_x(&self) -> &[PauliProduct] {
        &self.image_x
    }

    pub fn image_z(&self) -> &[PauliProduct] {
        &self.image_z
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Qudits touched by at least one gate.
    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.gates.iter().flat_map(|g| g.qudits()).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// Appends `gate` (applied after everything already in the tableau).
    pub fn apply(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n, self.d)?;
        for img in self.image_x.iter_mut().chain(self.image_z.iter_mut()) {
            *img = gate.conjugate(img);
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn with(mut self, gate: Gate) -> Result<Self> {
        self.apply(gate)?;
        Ok(self)
    }

    /// `U p U†`.
    pub fn conjugate(&self, p: &PauliProduct) -> Result<PauliProduct> {
        if p.n() != self.n || p.d() != self.d {
            return Err(Error::ShapeMismatch(format!(
                "tableau on (n={}, D={}) applied to (n={}, D={})",
                self.n,
                self.d,
                p.n(),
                p.d()
            )));
        }
        let mut out = PauliProduct::scalar(self.n, self.d, p.phase() as i128);
        for q in 0..self.n {
            if p.x()[q] != 0 {
                out = out.mul_unchecked(&self.image_x[q].power(p.x()[q] as i128));
            }
            if p.z()[q] != 0 {
                out = out.mul_unchecked(&self.image_z[q].power(p.z()[q] as i128));
            }
        }
        Ok(out)
    }

    /// `U1 U2`: `t2` acts first.
    pub fn compose(t1: &Self, t2: &Self) -> Result<Self> {
        if t1.n != t2.n || t1.d != t2.d {
            return Err(Error::ShapeMismatch("tableaux of different shape".into()));
        }
        let image_x = t2
            .image_x
            .iter()
            .map(|p| t1.conjugate(p))
            .collect::<Result<_>>()?;
        let image_z = t2
            .image_z
            .iter()
            .map(|p| t1.conjugate(p))
            .collect::<Result<_>>()?;
        let mut gates = t2.gates.clone();
        gates.extend_from_slice(&t1.gates);
        Ok(CliffordTableau { n: t1.n, d: t1.d, image_x, image_z, gates })
    }

    /// Inverse, with the gate list reversed and each gate inverted.
    pub fn inverse(&self) -> Self {
        let gates: Vec<Gate> = self
            .gates
            .iter()
            .rev()
            .flat_map(|g| g.inverse(self.d))
            .collect();
        Self::from_gates(self.n, self.d, &gates).expect("inverse gates are valid")
    }

    /// Same generator images as the identity (gate lists may differ).
    pub fn acts_as_identity(&self) -> bool {
        self.image_x
            .iter()
            .enumerate()
            .all(|(q, p)| *p == PauliProduct::x_on(self.n, self.d, q, 1))
            && self
                .image_z
                .iter()
                .enumerate()
                .all(|(q, p)| *p == PauliProduct::z_on(self.n, self.d, q, 1))
    }

    /// Same action on all generators.
    pub fn same_action(&self, other: &Self) -> bool {
        self.image_x == other.image_x && self.image_z == other.image_z
    }

    /// Checks that all generator commutation phases are preserved.
    pub fn is_symplectic(&self) -> bool {
        let n = self.n;
        let d = self.d;
        let gens: Vec<(&PauliProduct, PauliProduct)> = (0..n)
            .map(|q| (&self.image_x[q], PauliProduct::x_on(n, d, q, 1)))
            .chain((0..n).map(|q| (&self.image_z[q], PauliProduct::z_on(n, d, q, 1))))
            .collect();
        gens.iter().all(|(a, pa)| {
            a.order() == pa.order()
                && gens.iter().all(|(b, pb)| {
                    a.commutation_unchecked(b) == pa.commutation_unchecked(pb)
                })
        })
    }

    /// Gate list in the text format, one gate per line.
    pub fn gate_text(&self) -> String {
        self.gates.iter().map(|g| format!("{g}\n")).collect()
    }
}

/// The single-qudit operator a pivot should leave on its target qudit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotTarget {
    X,
    Z,
    ZInv,
}

/// Gates, all acting inside `part`, that turn the `part` component of `p`
/// into `X_target` (or `Z_target`, `Z_target^{-1}`). When `p^{order} = I`
/// and the remaining phase is a power of `ω`, the phase is removed as well.
/// `D` must be prime.
pub fn pivot_gates(
    p: &PauliProduct,
    part: &[usize],
    target: usize,
    want: PivotTarget,
) -> Result<Vec<Gate>> {
    let d = p.d();
    let n = p.n();
    if !is_prime(d) {
        return Err(Error::NonPrimeD(d));
    }
    if let Some(&q) = part.iter().find(|&&q| q >= n) {
        return Err(Error::IndexOutOfRange { index: q, n });
    }
    if !part.contains(&target) {
        return Err(Error::InvalidPartition(format!(
            "pivot target {} is not in the part",
            target + 1
        )));
    }
    if p.is_identity_on(part) {
        return Err(Error::IdentityOnPart);
    }
    let closes = p.closes_to_identity();
    let mut cur = p.clone();
    let mut gates = Vec::new();
    let mut push = |g: Gate, cur: &mut PauliProduct| {
        *cur = g.conjugate(cur);
        gates.push(g);
    };
    let mut sorted: Vec<usize> = part.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for &q in &sorted {
        if cur.is_identity_at(q) {
            continue;
        }
        if cur.x()[q] == 0 {
            push(Gate::Fourier(q), &mut cur);
        }
        let (x, z) = (cur.x()[q], cur.z()[q]);
        if z != 0 {
            // each W adds x to the Z exponent
            let xinv = inv_mod(x, d)?;
            let times = reduce(-(z as i128) * xinv as i128, d);
            for _ in 0..times {
                push(Gate::Phase(q), &mut cur);
            }
        }
        let x = cur.x()[q];
        if x != 1 {
            push(Gate::Mult(q, x), &mut cur);
        }
    }
    if cur.is_identity_at(target) {
        let src = *sorted
            .iter()
            .find(|&&q| !cur.is_identity_at(q))
            .expect("p is non-trivial on part");
        push(Gate::Cnot(src, target), &mut cur);
        if d != 2 {
            push(Gate::Mult(target, d - 1), &mut cur);
        }
    }
    for &q in &sorted {
        if q != target && !cur.is_identity_at(q) {
            push(Gate::Cnot(target, q), &mut cur);
        }
    }
    debug_assert!(cur.x()[target] == 1 && cur.z()[target] == 0);
    if closes && cur.phase().is_multiple_of(2) && cur.phase() != 0 {
        push(Gate::PauliZ(target, cur.phase() / 2), &mut cur);
    }
    match want {
        PivotTarget::X => {}
        PivotTarget::ZInv => push(Gate::Fourier(target), &mut cur),
        PivotTarget::Z => {
            for _ in 0..3 {
                push(Gate::Fourier(target), &mut cur);
            }
        }
    }
    Ok(gates)
}

/// Tableau supported on `part` with `conjugate(T, p) = X_target` (or `Z_target`
/// when `want_z`) on the part, phase removed where possible. The target
/// defaults to the lowest qudit of `part` on which `p` is non-trivial.
pub fn pivot_to_x1(
    p: &PauliProduct,
    part: &[usize],
    target: Option<usize>,
    want_z: bool,
) -> Result<CliffordTableau> {
    let target = match target {
        Some(t) => t,
        None => part
            .iter()
            .copied()
            .filter(|&q| q < p.n() && !p.is_identity_at(q))
            .min()
            .ok_or(Error::IdentityOnPart)?,
    };
    let want = if want_z { PivotTarget::Z } else { PivotTarget::X };
    let gates = pivot_gates(p, part, target, want)?;
    CliffordTableau::from_gates(p.n(), p.d(), &gates)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x1(d: u64) -> PauliProduct {
        PauliProduct::x_on(1, d, 0, 1)
    }
    fn z1(d: u64) -> PauliProduct {
        PauliProduct::z_on(1, d, 0, 1)
    }

    #[test]
    fn fourier_rows_of_the_table() {
        for d in 2..8 {
            let t = CliffordTableau::identity(1, d).with(Gate::Fourier(0)).unwrap();
            assert_eq!(t.conjugate(&z1(d)).unwrap(), x1(d));
            assert_eq!(t.conjugate(&x1(d)).unwrap(), PauliProduct::z_on(1, d, 0, -1));
        }
    }

    #[test]
    fn phase_gate_rows() {
        let t = CliffordTableau::identity(1, 5).with(Gate::Phase(0)).unwrap();
        let xz = PauliProduct::from_terms(1, 5, &[(0, 1, 1)]);
        assert_eq!(t.conjugate(&x1(5)).unwrap(), xz);
        let t = CliffordTableau::identity(1, 4).with(Gate::Phase(0)).unwrap();
        let lxz = PauliProduct::from_terms(1, 4, &[(0, 1, 1)]).with_phase(1);
        assert_eq!(t.conjugate(&x1(4)).unwrap(), lxz);
        assert_eq!(t.conjugate(&z1(4)).unwrap(), z1(4));
    }

    #[test]
    fn mult_gate_requires_unit() {
        let t = CliffordTableau::identity(1, 6);
        assert!(matches!(t.clone().with(Gate::Mult(0, 2)), Err(Error::NotInvertible { .. })));
        let t = t.with(Gate::Mult(0, 5)).unwrap();
        assert_eq!(t.conjugate(&z1(6)).unwrap(), PauliProduct::z_on(1, 6, 0, 5));
        assert_eq!(t.conjugate(&x1(6)).unwrap(), PauliProduct::x_on(1, 6, 0, 5));
    }

    #[test]
    fn bad_indices() {
        let t = CliffordTableau::identity(2, 3);
        assert!(matches!(
            t.clone().with(Gate::Fourier(2)),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(t.with(Gate::Cnot(1, 1)).is_err());
    }

    #[test]
    fn cnot_is_conjugated_cphase() {
        for d in 2..7 {
            let cnot = CliffordTableau::from_gates(2, d, &[Gate::Cnot(0, 1)]).unwrap();
            let mut gates = Gate::Fourier(1).inverse(d);
            gates.push(Gate::CPhase(0, 1, 1));
            gates.push(Gate::Fourier(1));
            let built = CliffordTableau::from_gates(2, d, &gates).unwrap();
            assert!(cnot.same_action(&built), "d={d}");
        }
    }

    #[test]
    fn fourier_has_order_four() {
        for d in 2..9 {
            let t = CliffordTableau::from_gates(1, d, &[Gate::Fourier(0); 4]).unwrap();
            assert!(t.acts_as_identity());
            let t2 = CliffordTableau::from_gates(1, d, &[Gate::Fourier(0); 2]).unwrap();
            assert_eq!(d == 2, t2.acts_as_identity());
        }
    }

    #[test]
    fn inverse_composes_to_identity() {
        let gates = [
            Gate::Fourier(0),
            Gate::Phase(1),
            Gate::CPhase(0, 2, 2),
            Gate::Cnot(2, 1),
            Gate::Mult(1, 2),
            Gate::PauliX(0, 1),
            Gate::PauliZ(2, 2),
            Gate::Phase(0),
        ];
        for d in [3u64, 4, 5, 6] {
            let gates: Vec<Gate> = gates
                .iter()
                .filter(|g| !matches!(g, Gate::Mult(_, a) if crate::modring::gcd(*a, d) != 1))
                .copied()
                .collect();
            let t = CliffordTableau::from_gates(3, d, &gates).unwrap();
            let inv = t.inverse();
            assert!(CliffordTableau::compose(&t, &inv).unwrap().acts_as_identity());
            assert!(CliffordTableau::compose(&inv, &t).unwrap().acts_as_identity());
            assert!(t.is_symplectic());
        }
    }

    #[test]
    fn compose_matches_sequential_conjugation() {
        let d = 5;
        let t1 = CliffordTableau::from_gates(2, d, &[Gate::Fourier(0), Gate::Cnot(0, 1)]).unwrap();
        let t2 = CliffordTableau::from_gates(2, d, &[Gate::Phase(1), Gate::CPhase(0, 1, 3)]).unwrap();
        let c = CliffordTableau::compose(&t1, &t2).unwrap();
        let p = PauliProduct::new(d, 3, &[1, 2], &[4, 1]).unwrap();
        assert_eq!(
            c.conjugate(&p).unwrap(),
            t1.conjugate(&t2.conjugate(&p).unwrap()).unwrap()
        );
        let replay = CliffordTableau::from_gates(2, d, c.gates()).unwrap();
        assert_eq!(replay, c);
    }

    #[test]
    fn pivot_examples() {
        let p = PauliProduct::x_on(3, 3, 1, 1);
        let t = pivot_to_x1(&p, &[0, 1, 2], None, false).unwrap();
        assert!(t.gates().is_empty());

        let p = PauliProduct::z_on(2, 3, 0, 1);
        let t = pivot_to_x1(&p, &[0, 1], None, false).unwrap();
        assert_eq!(t.gates(), &[Gate::Fourier(0)]);
        assert_eq!(t.conjugate(&p).unwrap(), PauliProduct::x_on(2, 3, 0, 1));
    }

    #[test]
    fn pivot_errors() {
        let p = PauliProduct::x_on(2, 3, 1, 1);
        assert_eq!(pivot_to_x1(&p, &[0], None, false), Err(Error::IdentityOnPart));
        let p = PauliProduct::x_on(2, 6, 1, 1);
        assert_eq!(pivot_to_x1(&p, &[1], None, false), Err(Error::NonPrimeD(6)));
    }

    #[test]
    fn pivot_reaches_target_exhaustively() {
        // every non-identity 2-qudit product at D=3 and D=2, all targets, X and Z
        for d in [2u64, 3] {
            let dd = d as i128;
            for code in 1..(dd.pow(4)) {
                let e = [code % dd, (code / dd) % dd, (code / dd / dd) % dd, code / dd / dd / dd];
                let p = PauliProduct::new(d, 0, &[e[0], e[1]], &[e[2], e[3]]).unwrap();
                for target in 0..2 {
                    for want in [PivotTarget::X, PivotTarget::Z, PivotTarget::ZInv] {
                        let gates = pivot_gates(&p, &[0, 1], target, want).unwrap();
                        let t = CliffordTableau::from_gates(2, d, &gates).unwrap();
                        let img = t.conjugate(&p).unwrap();
                        let expect = match want {
                            PivotTarget::X => PauliProduct::x_on(2, d, target, 1),
                            PivotTarget::Z => PauliProduct::z_on(2, d, target, 1),
                            PivotTarget::ZInv => PauliProduct::z_on(2, d, target, -1),
                        };
                        assert!(img.proportional(&expect).is_some(), "{p} -> {img}");
                        if p.closes_to_identity() {
                            assert_eq!(img, expect);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn pivot_stays_inside_part() {
        let p = PauliProduct::new(5, 4, &[1, 2, 3, 1], &[4, 0, 2, 2]).unwrap();
        let t = pivot_to_x1(&p, &[1, 2], None, false).unwrap();
        assert!(t.support().iter().all(|q| [1, 2].contains(q)));
        let img = t.conjugate(&p).unwrap();
        assert_eq!((img.x()[1], img.z()[1], img.x()[2], img.z()[2]), (1, 0, 0, 0));
        assert_eq!((img.x()[0], img.z()[0]), (1, 4));
        assert_eq!((img.x()[3], img.z()[3]), (1, 2));
    }

    #[test]
    fn gate_text_round_trip() {
        let gates = [
            Gate::Fourier(0),
            Gate::Mult(1, 2),
            Gate::Phase(2),
            Gate::PauliX(0, 3),
            Gate::PauliZ(1, 1),
            Gate::CPhase(0, 2, 4),
            Gate::Cnot(2, 0),
        ];
        for g in gates {
            assert_eq!(Gate::parse(&g.to_string(), 5).unwrap(), g);
        }
        assert!(Gate::parse("F 0", 5).is_err());
        assert!(Gate::parse("Q 1", 5).is_err());
        assert!(Gate::parse("CP 1 2", 5).is_err());
    }
}
