//! Stabilizer groups: independent, commuting Pauli products with `s^D = I`.
//!
//! Linear algebra runs over `Z_p`. For composite squarefree `D` a group is
//! first split into its prime components (see [`crate::crt`]) and results are
//! lifted back.

use std::collections::HashSet;
use std::fmt;

use crate::crt;
use crate::error::{Error, Result};
use crate::linalg::{qudit_cols, Echelon};
use crate::modring::{factorize, reduce, Modulus};
use crate::pauli::PauliProduct;
use crate::text::{at_line, Lines, MAGIC};

/// Symmetric weighted adjacency matrix with zero diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GraphAdjacency {
    n: usize,
    d: u64,
    gamma: Vec<Vec<u64>>,
}

impl GraphAdjacency {
    pub fn empty(n: usize, d: u64) -> Self {
        GraphAdjacency { n, d, gamma: vec![vec![0; n]; n] }
    }

    /// Builds a graph from `(i, j, w)` edges with zero-based endpoints.
    pub fn from_edges(n: usize, d: u64, edges: &[(usize, usize, i128)]) -> Result<Self> {
        let mut g = Self::empty(n, d);
        for &(i, j, w) in edges {
            g.set_edge(i, j, w)?;
        }
        Ok(g)
    }

    pub fn from_matrix(d: u64, gamma: Vec<Vec<u64>>) -> Result<Self> {
        let n = gamma.len();
        for (i, row) in gamma.iter().enumerate() {
            if row.len() != n {
                return Err(Error::ShapeMismatch("adjacency matrix is not square".into()));
            }
            if row[i] != 0 {
                return Err(Error::ShapeMismatch(format!("self-loop on vertex {}", i + 1)));
            }
            for (j, &w) in row.iter().enumerate() {
                if w >= d || gamma[j][i] != w {
                    return Err(Error::ShapeMismatch("adjacency matrix is not symmetric over Z_D".into()));
                }
            }
        }
        Ok(GraphAdjacency { n, d, gamma })
    }

    pub fn set_edge(&mut self, i: usize, j: usize, w: i128) -> Result<()> {
        for q in [i, j] {
            if q >= self.n {
                return Err(Error::IndexOutOfRange { index: q, n: self.n });
            }
        }
        if i == j {
            return Err(Error::ShapeMismatch(format!("self-loop on vertex {}", i + 1)));
        }
        let w = reduce(w, self.d);
        self.gamma[i][j] = w;
        self.gamma[j][i] = w;
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn weight(&self, i: usize, j: usize) -> u64 {
        self.gamma[i][j]
    }

    pub fn matrix(&self) -> &[Vec<u64>] {
        &self.gamma
    }

    /// Non-zero edges `(i, j, w)` with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize, u64)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.gamma[i][j] != 0 {
                    out.push((i, j, self.gamma[i][j]));
                }
            }
        }
        out
    }

    /// Body lines after the header: `D n`, then `i j w` per edge.
    pub(crate) fn write_body(&self, out: &mut String) {
        out.push_str(&format!("{} {}\n", self.d, self.n));
        for (i, j, w) in self.edges() {
            out.push_str(&format!("{} {} {}\n", i + 1, j + 1, w));
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{MAGIC} graph\n");
        self.write_body(&mut s);
        s
    }

    /// Reads `D n` and then edge lines until a line that is not three integers.
    pub(crate) fn read_body(lines: &mut Lines<'_>) -> Result<Self> {
        let (ln, dn) = lines.ints(2)?;
        let d = dn[0];
        factorize(d).map_err(|e| at_line(e, ln))?;
        let n = dn[1] as usize;
        let mut g = Self::empty(n, d);
        while let Some(l) = lines.peek() {
            if l.split_whitespace().next().is_none_or(|t| t.parse::<u64>().is_err()) {
                break;
            }
            let (ln, v) = lines.ints(3)?;
            if v[0] == 0 || v[1] == 0 {
                return Err(Error::Parse { line: ln, msg: "vertex labels are 1-based".into() });
            }
            g.set_edge(v[0] as usize - 1, v[1] as usize - 1, v[2] as i128)
                .map_err(|e| Error::Parse { line: ln, msg: e.to_string() })?;
        }
        Ok(g)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = Lines::new(text);
        lines.header("graph")?;
        let g = Self::read_body(&mut lines)?;
        lines.done()?;
        Ok(g)
    }
}

/// An abelian group of independent Pauli products with `s^D = I`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StabilizerGroup {
    n: usize,
    d: u64,
    gens: Vec<PauliProduct>,
}

/// Largest group for which independence is checked by enumeration when `D`
/// is not squarefree.
const ENUMERATION_LIMIT: u128 = 1 << 20;

impl StabilizerGroup {
    /// Validates commutation, `g^{order} = I` and independence.
    pub fn new(n: usize, d: u64, gens: Vec<PauliProduct>) -> Result<Self> {
        let m = factorize(d)?;
        for g in &gens {
            if g.n() != n || g.d() != d {
                return Err(Error::ShapeMismatch(format!(
                    "generator on (n={}, D={}) in a group on (n={n}, D={d})",
                    g.n(),
                    g.d()
                )));
            }
            if !g.closes_to_identity() {
                return Err(Error::InvalidStabilizer(format!(
                    "generator {g} does not satisfy g^order = I"
                )));
            }
            if g.is_scalar() {
                return Err(Error::InvalidStabilizer(format!("generator {g} is a scalar")));
            }
        }
        for (i, a) in gens.iter().enumerate() {
            for b in &gens[i + 1..] {
                if !a.commutes_with(b) {
                    return Err(Error::InvalidStabilizer(format!("{a} and {b} do not commute")));
                }
            }
        }
        let s = StabilizerGroup { n, d, gens };
        s.check_independent(&m)?;
        Ok(s)
    }

    /// Trusted constructor for groups built by construction.
    pub(crate) fn from_parts(n: usize, d: u64, gens: Vec<PauliProduct>) -> Self {
        StabilizerGroup { n, d, gens }
    }

    fn check_independent(&self, m: &Modulus) -> Result<()> {
        let dependent = || Error::InvalidStabilizer("generators are not independent".into());
        if m.is_squarefree() {
            let comps = crt::decompose_group_raw(self)?;
            for (c, (p, _)) in comps.iter().zip(m.factors()) {
                let e = Echelon::full(&c.gens, self.n)?;
                let nontrivial = c.gens.iter().filter(|g| !g.is_identity()).count();
                if e.rows.len() != nontrivial {
                    return Err(dependent());
                }
                debug_assert_eq!(c.d, *p);
            }
            return Ok(());
        }
        // prime powers: count distinct elements when that is affordable
        let size = self.order_product();
        if size > ENUMERATION_LIMIT {
            return Ok(());
        }
        let mut seen = HashSet::new();
        let mut stack = vec![PauliProduct::identity(self.n, self.d)];
        seen.insert(stack[0].clone());
        while let Some(e) = stack.pop() {
            for g in &self.gens {
                let f = e.mul_unchecked(g);
                if seen.insert(f.clone()) {
                    stack.push(f);
                }
            }
        }
        if seen.len() as u128 != size {
            return Err(dependent());
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn gens(&self) -> &[PauliProduct] {
        &self.gens
    }

    /// `Π order(g_i)`, saturating at `u128::MAX`.
    pub fn order_product(&self) -> u128 {
        self.gens
            .iter()
            .fold(1u128, |acc, g| acc.saturating_mul(g.order() as u128))
    }

    /// `|S| = D^n`, compared on prime exponents so nothing overflows.
    pub fn is_state(&self) -> bool {
        let m = factorize(self.d).expect("validated dimension");
        m.factors().iter().all(|&(p, e)| {
            let have: u64 = self
                .gens
                .iter()
                .map(|g| {
                    let mut o = g.order();
                    let mut k = 0u64;
                    while o % p == 0 {
                        o /= p;
                        k += 1;
                    }
                    k
                })
                .sum();
            have == e as u64 * self.n as u64
        })
    }

    pub fn require_state(&self) -> Result<()> {
        if self.is_state() {
            Ok(())
        } else {
            Err(Error::NotAState(self.n))
        }
    }

    pub fn trivial(n: usize, d: u64) -> Self {
        StabilizerGroup { n, d, gens: Vec::new() }
    }

    /// Graph state group `g_i = X_i Π_j Z_j^{-Γ_ij}`.
    pub fn from_graph(graph: &GraphAdjacency) -> Self {
        let n = graph.n();
        let d = graph.d();
        let gens = (0..n)
            .map(|i| {
                let z: Vec<u64> = graph.matrix()[i].iter().map(|&w| (d - w) % d).collect();
                let mut x = vec![0; n];
                x[i] = 1;
                PauliProduct::from_raw(d, 0, x, z)
            })
            .collect();
        StabilizerGroup { n, d, gens }
    }

    /// `⟨X_1 X_2, Z_1 Z_2^{-1}⟩`.
    pub fn epr_group(d: u64) -> Result<Self> {
        factorize(d)?;
        Ok(StabilizerGroup {
            n: 2,
            d,
            gens: vec![
                PauliProduct::new(d, 0, &[1, 1], &[0, 0])?,
                PauliProduct::new(d, 0, &[0, 0], &[1, -1])?,
            ],
        })
    }

    /// `⟨X_1 X_2 X_3, Z_1 Z_2^{-1}, Z_1 Z_3^{-1}⟩`.
    pub fn ghz_group(d: u64) -> Result<Self> {
        factorize(d)?;
        Ok(StabilizerGroup {
            n: 3,
            d,
            gens: vec![
                PauliProduct::new(d, 0, &[1, 1, 1], &[0, 0, 0])?,
                PauliProduct::new(d, 0, &[0, 0, 0], &[1, -1, 0])?,
                PauliProduct::new(d, 0, &[0, 0, 0], &[1, 0, -1])?,
            ],
        })
    }

    /// `⟨X⟩` on each of `n` qudits.
    pub fn plus_state(n: usize, d: u64) -> Self {
        StabilizerGroup {
            n,
            d,
            gens: (0..n).map(|q| PauliProduct::x_on(n, d, q, 1)).collect(),
        }
    }

    fn check_part(&self, part: &[usize]) -> Result<()> {
        if let Some(&q) = part.iter().find(|&&q| q >= self.n) {
            return Err(Error::IndexOutOfRange { index: q, n: self.n });
        }
        Ok(())
    }

    fn squarefree(&self) -> Result<Modulus> {
        let m = factorize(self.d)?;
        if !m.is_squarefree() {
            return Err(Error::NotSquarefree(self.d));
        }
        Ok(m)
    }

    /// Elements acting as the identity off `part`.
    pub fn subgroup_on_part(&self, part: &[usize]) -> Result<StabilizerGroup> {
        self.check_part(part)?;
        let m = self.squarefree()?;
        if m.is_prime() {
            return Ok(self.prime_subgroup_on_part(part));
        }
        let mut gens = Vec::new();
        for comp in crt::decompose_group(self)? {
            for h in comp.prime_subgroup_on_part(part).gens {
                gens.push(crt::lift_from_prime(&h, self.d)?);
            }
        }
        Ok(StabilizerGroup { n: self.n, d: self.d, gens })
    }

    pub(crate) fn prime_subgroup_on_part(&self, part: &[usize]) -> StabilizerGroup {
        let off: Vec<usize> = (0..self.n).filter(|q| !part.contains(q)).collect();
        let mut cols = qudit_cols(&off, self.n);
        let split = cols.len();
        cols.extend(qudit_cols(part, self.n));
        let e = Echelon::new(&self.gens, &cols);
        StabilizerGroup { n: self.n, d: self.d, gens: e.rows_pivoting_after(&cols, split) }
    }

    /// `log_p |S_part|` for each prime `p` of a squarefree `D`.
    fn part_exponents(&self, part: &[usize]) -> Result<Vec<(u64, usize)>> {
        self.check_part(part)?;
        let m = self.squarefree()?;
        if m.is_prime() {
            return Ok(vec![(self.d, self.prime_subgroup_on_part(part).gens.len())]);
        }
        Ok(crt::decompose_group(self)?
            .iter()
            .map(|c| (c.d, c.prime_subgroup_on_part(part).gens.len()))
            .collect())
    }

    /// `rank(ρ_part) = D^{|part|} / |S_part|`, as `(p, exponent)` pairs.
    pub fn reduced_rank_factors(&self, part: &[usize]) -> Result<Vec<(u64, usize)>> {
        self.require_state()?;
        Ok(self
            .part_exponents(part)?
            .into_iter()
            .map(|(p, k)| (p, part.len() - k))
            .collect())
    }

    /// `rank(ρ_part)`; `TooLarge` if it does not fit in `u128`.
    pub fn reduced_rank(&self, part: &[usize]) -> Result<u128> {
        let mut r: u128 = 1;
        for (p, e) in self.reduced_rank_factors(part)? {
            for _ in 0..e {
                r = r.checked_mul(p as u128).ok_or(Error::TooLarge(u128::MAX))?;
            }
        }
        Ok(r)
    }

    /// Exact membership, phase included. Prime or squarefree `D`.
    pub fn contains(&self, p: &PauliProduct) -> Result<bool> {
        if p.n() != self.n || p.d() != self.d {
            return Err(Error::ShapeMismatch("membership test on a different shape".into()));
        }
        let m = self.squarefree()?;
        if m.is_prime() {
            return Ok(Echelon::new(&self.gens, &all_cols(self.n)).reduce(p).is_identity());
        }
        let single = StabilizerGroup::from_parts(self.n, self.d, vec![p.clone()]);
        let parts = crt::decompose_group_raw(&single)?;
        for (comp, hp) in crt::decompose_group(self)?.iter().zip(parts) {
            let h = &hp.gens[0];
            if !Echelon::new(&comp.gens, &all_cols(self.n)).reduce(h).is_identity() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Canonical generator list: per prime component, the fully reduced
    /// echelon form over all `(x|z)` columns, phases included.
    pub fn canonical_form(&self) -> Result<Vec<(u64, Vec<PauliProduct>)>> {
        let m = self.squarefree()?;
        if m.is_prime() {
            return Ok(vec![(self.d, Echelon::full(&self.gens, self.n)?.rows)]);
        }
        crt::decompose_group(self)?
            .iter()
            .map(|c| Ok((c.d, Echelon::full(&c.gens, self.n)?.rows)))
            .collect()
    }

    /// Group equality, phases included.
    pub fn same_group(&self, other: &StabilizerGroup) -> Result<bool> {
        if self.n != other.n || self.d != other.d {
            return Ok(false);
        }
        Ok(self.canonical_form()? == other.canonical_form()?)
    }

    /// A full generating set of `self` that starts with `partial`. Prime `D`.
    pub fn extend_generators(&self, partial: &[PauliProduct]) -> Result<StabilizerGroup> {
        if !factorize(self.d)?.is_prime() {
            return Err(Error::NonPrimeD(self.d));
        }
        let cols = all_cols(self.n);
        let full = Echelon::new(&self.gens, &cols);
        for t in partial {
            if t.n() != self.n || t.d() != self.d {
                return Err(Error::ShapeMismatch("element of a different shape".into()));
            }
            if !full.reduce(t).is_identity() {
                return Err(Error::NotSubgroup(format!("{t} is not in the group")));
            }
        }
        let mut gens: Vec<PauliProduct> = partial.to_vec();
        let mut span = Echelon::new(&gens, &cols);
        if !span.dropped.is_empty() {
            return Err(Error::InvalidStabilizer("partial generators are not independent".into()));
        }
        for g in &self.gens {
            if span.reduce(g).is_scalar() {
                continue;
            }
            gens.push(g.clone());
            span = Echelon::new(&gens, &cols);
        }
        Ok(StabilizerGroup { n: self.n, d: self.d, gens })
    }

    /// `S ⊗ T` with `T` on the trailing qudits.
    pub fn tensor(&self, other: &StabilizerGroup) -> Result<StabilizerGroup> {
        if self.d != other.d {
            return Err(Error::ShapeMismatch("tensor of groups with different D".into()));
        }
        let n = self.n + other.n;
        let left: Vec<usize> = (0..self.n).collect();
        let right: Vec<usize> = (self.n..n).collect();
        let mut gens = Vec::new();
        for g in &self.gens {
            gens.push(g.embed(n, &left)?);
        }
        for g in &other.gens {
            gens.push(g.embed(n, &right)?);
        }
        Ok(StabilizerGroup { n, d: self.d, gens })
    }

    /// Splits the state as `S_left ⊗ S_right` when possible. Each factor is
    /// expressed on its own qudits, in increasing original order.
    pub fn try_factor(&self, left: &[usize]) -> Result<Option<(StabilizerGroup, StabilizerGroup)>> {
        self.check_part(left)?;
        self.require_state()?;
        let mut l: Vec<usize> = left.to_vec();
        l.sort_unstable();
        l.dedup();
        let r: Vec<usize> = (0..self.n).filter(|q| !l.contains(q)).collect();
        let sl = self.subgroup_on_part(&l)?;
        let sr = self.subgroup_on_part(&r)?;
        // both are states on their parts exactly when the product state splits
        let restrict = |s: &StabilizerGroup, qs: &[usize]| -> Result<StabilizerGroup> {
            let gens = s.gens.iter().map(|g| g.restrict(qs)).collect::<Result<_>>()?;
            Ok(StabilizerGroup { n: qs.len(), d: self.d, gens })
        };
        let a = restrict(&sl, &l)?;
        let b = restrict(&sr, &r)?;
        if a.is_state() && b.is_state() {
            Ok(Some((a, b)))
        } else {
            Ok(None)
        }
    }

    /// Generators conjugated by a Clifford tableau.
    pub fn conjugated(&self, t: &crate::clifford::CliffordTableau) -> Result<StabilizerGroup> {
        let gens = self.gens.iter().map(|g| t.conjugate(g)).collect::<Result<_>>()?;
        Ok(StabilizerGroup { n: self.n, d: self.d, gens })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{MAGIC} stabilizer\n{} {} {}\n", self.d, self.n, self.gens.len());
        for g in &self.gens {
            s.push_str(&format!("{g}\n"));
        }
        s
    }

    pub(crate) fn read_body(lines: &mut Lines<'_>) -> Result<Self> {
        let (ln, h) = lines.ints(3)?;
        let d = h[0];
        factorize(d).map_err(|e| at_line(e, ln))?;
        let n = h[1] as usize;
        let mut gens = Vec::new();
        for _ in 0..h[2] {
            let (ln, l) = lines.next_line()?;
            let g = PauliProduct::parse(l, d).map_err(|e| at_line(e, ln))?;
            if g.n() != n {
                return Err(Error::Parse { line: ln, msg: format!("expected {n} qudits") });
            }
            gens.push(g);
        }
        StabilizerGroup::new(n, d, gens)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = Lines::new(text);
        lines.header("stabilizer")?;
        let s = Self::read_body(&mut lines)?;
        lines.done()?;
        Ok(s)
    }
}

impl fmt::Display for StabilizerGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.gens.iter().map(|g| g.pretty()).collect();
        write!(f, "⟨{}⟩", parts.join(", "))
    }
}

pub(crate) fn all_cols(n: usize) -> Vec<usize> {
    (0..2 * n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s1(d: u64) -> StabilizerGroup {
        // A1 = 0, A2 = 1, B1 = 2
        StabilizerGroup::new(
            3,
            d,
            vec![
                PauliProduct::new(d, 0, &[0, 0, 0], &[1, 0, -1]).unwrap(),
                PauliProduct::new(d, 0, &[1, 0, 1], &[0, 0, 0]).unwrap(),
                PauliProduct::new(d, 0, &[0, 1, 0], &[0, 0, 0]).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn graph_generators() {
        let g = GraphAdjacency::from_edges(2, 2, &[(0, 1, 1)]).unwrap();
        let s = StabilizerGroup::from_graph(&g);
        assert_eq!(s.gens()[0], PauliProduct::new(2, 0, &[1, 0], &[0, -1]).unwrap());
        assert_eq!(s.gens()[1], PauliProduct::new(2, 0, &[0, 1], &[-1, 0]).unwrap());
        assert!(StabilizerGroup::new(2, 2, s.gens().to_vec()).unwrap().is_state());
        let plus = StabilizerGroup::from_graph(&GraphAdjacency::empty(1, 5));
        assert_eq!(plus.gens(), &[PauliProduct::x_on(1, 5, 0, 1)]);
    }

    #[test]
    fn rejects_bad_generators() {
        let x = PauliProduct::x_on(1, 3, 0, 1);
        let z = PauliProduct::z_on(1, 3, 0, 1);
        assert!(matches!(
            StabilizerGroup::new(1, 3, vec![x.clone(), z]),
            Err(Error::InvalidStabilizer(_))
        ));
        assert!(matches!(
            StabilizerGroup::new(1, 3, vec![x.clone(), x.power(2)]),
            Err(Error::InvalidStabilizer(_))
        ));
        // (λ X)^2 = -I at D = 2
        let bad = PauliProduct::new(2, 1, &[1], &[0]).unwrap();
        assert!(StabilizerGroup::new(1, 2, vec![bad]).is_err());
        // D = 6: X^2 and X^3 are independent, X^2 and X^4 are not
        let x6 = PauliProduct::x_on(1, 6, 0, 1);
        assert!(StabilizerGroup::new(1, 6, vec![x6.power(2), x6.power(3)]).is_ok());
        assert!(StabilizerGroup::new(1, 6, vec![x6.power(2), x6.power(4)]).is_err());
        let x4 = PauliProduct::x_on(1, 4, 0, 1);
        assert!(StabilizerGroup::new(1, 4, vec![x4.clone()]).is_ok());
        assert!(StabilizerGroup::new(1, 4, vec![x4.clone(), x4.power(2)]).is_err());
    }

    #[test]
    fn subgroup_examples() {
        for d in [2u64, 3, 5, 6] {
            let epr = StabilizerGroup::epr_group(d).unwrap();
            assert!(epr.subgroup_on_part(&[0]).unwrap().gens().is_empty());
            assert_eq!(epr.reduced_rank(&[0]).unwrap(), d as u128);
            let all = epr.subgroup_on_part(&[0, 1]).unwrap();
            assert!(all.same_group(&epr).unwrap());
            let ghz = StabilizerGroup::ghz_group(d).unwrap();
            assert_eq!(ghz.reduced_rank(&[0]).unwrap(), d as u128);
            assert_eq!(StabilizerGroup::plus_state(3, d).reduced_rank(&[1, 2]).unwrap(), 1);
        }
        let s = s1(3).subgroup_on_part(&[0, 1]).unwrap();
        assert_eq!(s.gens(), &[PauliProduct::x_on(3, 3, 1, 1)]);
    }

    #[test]
    fn composite_subgroup_matches_scan() {
        // D = 6 graph state on 3 qudits; brute force over all 6^3 elements
        let g = GraphAdjacency::from_edges(3, 6, &[(0, 1, 2), (1, 2, 3)]).unwrap();
        let s = StabilizerGroup::from_graph(&g);
        let part = [0usize, 1];
        let sub = s.subgroup_on_part(&part).unwrap();
        assert!(sub.gens().iter().all(|h| h.is_identity_on(&[2])));
        let mut count = 0;
        for a in 0..6 {
            for b in 0..6 {
                for c in 0..6 {
                    let e = s.gens()[0]
                        .power(a)
                        .mul_unchecked(&s.gens()[1].power(b))
                        .mul_unchecked(&s.gens()[2].power(c));
                    if e.is_identity_on(&[2]) {
                        count += 1;
                        assert!(sub.contains(&e).unwrap());
                    }
                }
            }
        }
        assert_eq!(count as u128, sub.order_product());
    }

    #[test]
    fn extend_ghz() {
        let ghz = StabilizerGroup::ghz_group(3).unwrap();
        let xxx = ghz.gens()[0].clone();
        let ext = ghz.extend_generators(std::slice::from_ref(&xxx)).unwrap();
        assert_eq!(ext.gens().len(), 3);
        assert_eq!(ext.gens()[0], xxx);
        assert!(ext.same_group(&ghz).unwrap());
        let stray = PauliProduct::x_on(3, 3, 0, 1);
        assert!(matches!(ghz.extend_generators(&[stray]), Err(Error::NotSubgroup(_))));
        assert!(ghz.extend_generators(&[]).unwrap().same_group(&ghz).unwrap());
    }

    #[test]
    fn factoring() {
        let epr = StabilizerGroup::epr_group(3).unwrap();
        let prod = epr.tensor(&StabilizerGroup::plus_state(1, 3)).unwrap();
        let (a, b) = prod.try_factor(&[0, 1]).unwrap().unwrap();
        assert!(a.same_group(&epr).unwrap());
        assert!(b.same_group(&StabilizerGroup::plus_state(1, 3)).unwrap());
        assert!(StabilizerGroup::ghz_group(3).unwrap().try_factor(&[0]).unwrap().is_none());
        // S1 splits as (A1, B1) ⊗ (A2)
        assert!(s1(5).try_factor(&[0, 2]).unwrap().is_some());
    }

    #[test]
    fn text_round_trip() {
        let s = s1(5);
        assert_eq!(StabilizerGroup::parse(&s.to_text()).unwrap(), s);
        let g = GraphAdjacency::from_edges(3, 5, &[(0, 2, 4), (1, 2, 1)]).unwrap();
        assert_eq!(GraphAdjacency::parse(&g.to_text()).unwrap(), g);
        assert!(matches!(
            StabilizerGroup::parse("QSTAB1 stabilizer\n3 1 1\n0 | 1 |\n"),
            Err(Error::Parse { line: 3, .. })
        ));
    }
}
