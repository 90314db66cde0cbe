//! Bipartition and tripartition normal forms.
//!
//! The engine follows the constructive proofs: split off unentangled qudits
//! from each part, then EPR pairs between every pair of parts, then GHZ
//! triples. All gates act inside a single part, so the time-ordered gate list
//! restricted to a part is that part's local unitary.
//!
//! Prime `D` runs the engine directly. Squarefree composite `D` runs it once
//! per prime factor of the CRT decomposition.

use std::fmt;

use crate::clifford::{pivot_gates, CliffordTableau, Gate, PivotTarget};
use crate::crt;
use crate::error::{Error, Result};
use crate::linalg::{qudit_cols, solve_combination, Echelon};
use crate::modring::{factorize, inv_mod, reduce};
use crate::pauli::PauliProduct;
use crate::stabilizer::StabilizerGroup;
use crate::text::{at_line, format_index_list, parse_index_list, Lines, MAGIC};

const PART_NAMES: [&str; 3] = ["A", "B", "C"];

/// Two or three disjoint parts covering all qudits. Parts may be empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    n: usize,
    parts: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(n: usize, parts: Vec<Vec<usize>>) -> Result<Self> {
        if !(2..=3).contains(&parts.len()) {
            return Err(Error::InvalidPartition(format!(
                "expected 2 or 3 parts, got {}",
                parts.len()
            )));
        }
        let mut seen = vec![false; n];
        for part in &parts {
            for &q in part {
                if q >= n {
                    return Err(Error::IndexOutOfRange { index: q, n });
                }
                if seen[q] {
                    return Err(Error::InvalidPartition(format!("qudit {} appears twice", q + 1)));
                }
                seen[q] = true;
            }
        }
        if let Some(q) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("qudit {} is in no part", q + 1)));
        }
        let parts = parts
            .into_iter()
            .map(|mut p| {
                p.sort_unstable();
                p
            })
            .collect();
        Ok(Partition { n, parts })
    }

    /// Parses `1,2/3/4,5` (1-based, `/` between parts).
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let parts = s.split('/').map(parse_index_list).collect::<Result<Vec<_>>>()?;
        Self::new(n, parts)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn is_tripartition(&self) -> bool {
        self.parts.len() == 3
    }

    pub fn part_of(&self, q: usize) -> usize {
        self.parts.iter().position(|p| p.contains(&q)).expect("exhaustive partition")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| format_index_list(p)).collect();
        write!(f, "{}", s.join("/"))
    }
}

/// One factor of a normal form, by original qudit index. EPR and GHZ qudits
/// are listed in part order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Factor {
    Plus(usize),
    Epr(usize, usize),
    Ghz(usize, usize, usize),
}

impl Factor {
    /// Stabilizer generators of the factor on `n` qudits.
    pub fn generators(&self, n: usize, d: u64) -> Vec<PauliProduct> {
        match *self {
            Factor::Plus(q) => vec![PauliProduct::x_on(n, d, q, 1)],
            Factor::Epr(a, b) => vec![
                PauliProduct::from_terms(n, d, &[(a, 1, 0), (b, 1, 0)]),
                PauliProduct::from_terms(n, d, &[(a, 0, 1), (b, 0, -1)]),
            ],
            Factor::Ghz(a, b, c) => vec![
                PauliProduct::from_terms(n, d, &[(a, 1, 0), (b, 1, 0), (c, 1, 0)]),
                PauliProduct::from_terms(n, d, &[(a, 0, 1), (b, 0, -1)]),
                PauliProduct::from_terms(n, d, &[(a, 0, 1), (c, 0, -1)]),
            ],
        }
    }

    pub fn qudits(&self) -> Vec<usize> {
        match *self {
            Factor::Plus(q) => vec![q],
            Factor::Epr(a, b) => vec![a, b],
            Factor::Ghz(a, b, c) => vec![a, b, c],
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Factor::Plus(q) => write!(f, "PLUS {}", q + 1),
            Factor::Epr(a, b) => write!(f, "EPR {} {}", a + 1, b + 1),
            Factor::Ghz(a, b, c) => write!(f, "GHZ {} {} {}", a + 1, b + 1, c + 1),
        }
    }
}

/// The seven multiplicities of the tripartite normal form.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Counts {
    pub m_a: usize,
    pub m_b: usize,
    pub m_c: usize,
    pub m_ab: usize,
    pub m_ac: usize,
    pub m_bc: usize,
    pub m_abc: usize,
}

impl Counts {
    fn from_factors(factors: &[Factor], partition: &Partition) -> Counts {
        let mut c = Counts::default();
        for f in factors {
            match *f {
                Factor::Plus(q) => match partition.part_of(q) {
                    0 => c.m_a += 1,
                    1 => c.m_b += 1,
                    _ => c.m_c += 1,
                },
                Factor::Epr(a, b) => match (partition.part_of(a), partition.part_of(b)) {
                    (0, 1) => c.m_ab += 1,
                    (0, 2) => c.m_ac += 1,
                    _ => c.m_bc += 1,
                },
                Factor::Ghz(..) => c.m_abc += 1,
            }
        }
        c
    }

    fn min(&self, o: &Counts) -> Counts {
        Counts {
            m_a: self.m_a.min(o.m_a),
            m_b: self.m_b.min(o.m_b),
            m_c: self.m_c.min(o.m_c),
            m_ab: self.m_ab.min(o.m_ab),
            m_ac: self.m_ac.min(o.m_ac),
            m_bc: self.m_bc.min(o.m_bc),
            m_abc: self.m_abc.min(o.m_abc),
        }
    }

    /// Number of factors crossing the cut that puts `side` on one side.
    pub fn crossing(&self, side: &[usize]) -> usize {
        let has = |p: usize| side.contains(&p);
        let mut k = 0;
        for (pair, m) in [((0, 1), self.m_ab), ((0, 2), self.m_ac), ((1, 2), self.m_bc)] {
            if has(pair.0) != has(pair.1) {
                k += m;
            }
        }
        let nontrivial = (0..3).any(has) && !(0..3).all(has);
        if nontrivial {
            k += self.m_abc;
        }
        k
    }

    fn parse(line: &str) -> std::result::Result<Counts, String> {
        let mut c = Counts::default();
        let mut fields = line.split_whitespace();
        if fields.next() != Some("counts") && !line.starts_with("COMPOSITE") {
            return Err("expected a counts line".into());
        }
        for kv in line.split_whitespace().skip(1) {
            let (k, v) = kv.split_once('=').ok_or("expected key=value")?;
            let v: usize = v.parse().map_err(|_| format!("bad count `{v}`"))?;
            match k {
                "m_A" => c.m_a = v,
                "m_B" => c.m_b = v,
                "m_C" => c.m_c = v,
                "m_AB" => c.m_ab = v,
                "m_AC" => c.m_ac = v,
                "m_BC" => c.m_bc = v,
                "m_ABC" => c.m_abc = v,
                _ => return Err(format!("unknown count `{k}`")),
            }
        }
        Ok(c)
    }
}

impl fmt::Display for Counts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "m_A={} m_B={} m_C={} m_AB={} m_AC={} m_BC={} m_ABC={}",
            self.m_a, self.m_b, self.m_c, self.m_ab, self.m_ac, self.m_bc, self.m_abc
        )
    }
}

/// The normal form for one prime factor of `D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeNormalForm {
    pub d: u64,
    pub counts: Counts,
    pub factors: Vec<Factor>,
    /// Time-ordered gates; each acts inside one part.
    pub gates: Vec<Gate>,
}

impl PrimeNormalForm {
    /// The product `⊗` of all factor groups.
    pub fn normal_form_group(&self, n: usize) -> StabilizerGroup {
        let gens = self.factors.iter().flat_map(|f| f.generators(n, self.d)).collect();
        StabilizerGroup::from_parts(n, self.d, gens)
    }

    pub fn tableau(&self, n: usize) -> Result<CliffordTableau> {
        CliffordTableau::from_gates(n, self.d, &self.gates)
    }

    /// Gates acting on the qudits of `part`, in time order.
    pub fn part_gates(&self, part: &[usize]) -> Vec<Gate> {
        self.gates
            .iter()
            .filter(|g| g.qudits().iter().all(|q| part.contains(q)))
            .copied()
            .collect()
    }
}

/// Result of a bipartition or tripartition canonicalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    pub d: u64,
    pub partition: Partition,
    /// The input state, kept so the report can be re-verified on its own.
    pub state: StabilizerGroup,
    /// One entry per prime factor of `D`, in increasing order.
    pub components: Vec<PrimeNormalForm>,
}

impl NormalForm {
    /// Componentwise minimum over the prime factors (equal to the single
    /// component's counts for prime `D`).
    pub fn counts(&self) -> Counts {
        let mut it = self.components.iter().map(|c| c.counts);
        let first = it.next().unwrap_or_default();
        it.fold(first, |a, b| a.min(&b))
    }

    /// Predicted Schmidt rank across the cut separating the parts in `side`.
    pub fn predicted_rank(&self, side: &[usize]) -> u128 {
        self.components
            .iter()
            .map(|c| (c.d as u128).pow(c.counts.crossing(side) as u32))
            .product()
    }

    /// Re-derives every component and checks that the recorded gates carry
    /// the input exactly onto the recorded normal form.
    pub fn verify(&self) -> Result<bool> {
        let inputs = prime_components(&self.state)?;
        if inputs.len() != self.components.len() {
            return Ok(false);
        }
        for (s, c) in inputs.iter().zip(&self.components) {
            if s.d() != c.d || c.counts != Counts::from_factors(&c.factors, &self.partition) || !check_exact(s, c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{MAGIC} normal-form\n");
        out.push_str(&format!("partition {}\n", self.partition));
        out.push_str("STATE\n");
        let st = self.state.to_text();
        out.push_str(st.split_once('\n').map(|x| x.1).unwrap_or(""));
        let nparts = self.partition.parts().len();
        for c in &self.components {
            out.push_str(&format!("FACTOR {}\n", c.d));
            out.push_str(&format!("counts {}\n", c.counts));
            for (i, part) in self.partition.parts().iter().enumerate().take(nparts) {
                let gates = c.part_gates(part);
                out.push_str(&format!("GATES {} {}\n", PART_NAMES[i], gates.len()));
                for g in gates {
                    out.push_str(&format!("{g}\n"));
                }
            }
            out.push_str(&format!("ASSIGN {}\n", c.factors.len()));
            for f in &c.factors {
                out.push_str(&format!("{f}\n"));
            }
        }
        if self.components.len() > 1 {
            out.push_str(&format!("COMPOSITE {}\n", self.counts()));
        }
        out
    }

    pub fn parse(text: &str) -> Result<NormalForm> {
        let mut lines = Lines::new(text);
        lines.header("normal-form")?;
        let (ln, l) = lines.next_line()?;
        let list = l
            .strip_prefix("partition ")
            .ok_or(Error::Parse { line: ln, msg: "expected `partition`".into() })?;
        let (ln2, l) = lines.next_line()?;
        if l != "STATE" {
            return Err(Error::Parse { line: ln2, msg: "expected `STATE`".into() });
        }
        let state = StabilizerGroup::read_body(&mut lines)?;
        let partition = Partition::parse(list, state.n()).map_err(|e| at_line(e, ln))?;
        let n = state.n();
        let mut components = Vec::new();
        while let Some(l) = lines.peek() {
            if l.starts_with("COMPOSITE") {
                lines.next_line()?;
                break;
            }
            let (ln, l) = lines.next_line()?;
            let p: u64 = l
                .strip_prefix("FACTOR ")
                .and_then(|s| s.trim().parse().ok())
                .ok_or(Error::Parse { line: ln, msg: "expected `FACTOR p`".into() })?;
            let (ln, l) = lines.next_line()?;
            let counts = Counts::parse(l).map_err(|msg| Error::Parse { line: ln, msg })?;
            let mut gates = Vec::new();
            for name in PART_NAMES.iter().take(partition.parts().len()) {
                let (ln, l) = lines.next_line()?;
                let k: usize = l
                    .strip_prefix(&format!("GATES {name} "))
                    .and_then(|s| s.trim().parse().ok())
                    .ok_or(Error::Parse { line: ln, msg: format!("expected `GATES {name} k`") })?;
                for _ in 0..k {
                    let (ln, l) = lines.next_line()?;
                    gates.push(Gate::parse(l, p).map_err(|e| at_line(e, ln))?);
                }
            }
            let (ln, l) = lines.next_line()?;
            let k: usize = l
                .strip_prefix("ASSIGN ")
                .and_then(|s| s.trim().parse().ok())
                .ok_or(Error::Parse { line: ln, msg: "expected `ASSIGN k`".into() })?;
            let mut factors = Vec::new();
            for _ in 0..k {
                let (ln, l) = lines.next_line()?;
                factors.push(parse_factor(l, n).map_err(|msg| Error::Parse { line: ln, msg })?);
            }
            components.push(PrimeNormalForm { d: p, counts, factors, gates });
        }
        lines.done()?;
        Ok(NormalForm { d: state.d(), partition, state, components })
    }
}

fn parse_factor(l: &str, n: usize) -> std::result::Result<Factor, String> {
    let tok: Vec<&str> = l.split_whitespace().collect();
    let idx = |i: usize| -> std::result::Result<usize, String> {
        let v: usize = tok
            .get(i)
            .ok_or("missing qudit")?
            .parse()
            .map_err(|_| "bad qudit".to_string())?;
        if v == 0 || v > n {
            return Err(format!("qudit {v} out of range"));
        }
        Ok(v - 1)
    };
    match (tok.first().copied(), tok.len()) {
        (Some("PLUS"), 2) => Ok(Factor::Plus(idx(1)?)),
        (Some("EPR"), 3) => Ok(Factor::Epr(idx(1)?, idx(2)?)),
        (Some("GHZ"), 4) => Ok(Factor::Ghz(idx(1)?, idx(2)?, idx(3)?)),
        _ => Err(format!("bad factor line `{l}`")),
    }
}

/// Prime factors of a state: itself for prime `D`, the CRT pieces otherwise.
fn prime_components(s: &StabilizerGroup) -> Result<Vec<StabilizerGroup>> {
    let m = factorize(s.d())?;
    if !m.is_squarefree() {
        return Err(Error::NotSquarefree(s.d()));
    }
    s.require_state()?;
    if m.is_prime() {
        Ok(vec![s.clone()])
    } else {
        crt::decompose_state(s)
    }
}

fn check_exact(s: &StabilizerGroup, c: &PrimeNormalForm) -> Result<bool> {
    let t = c.tableau(s.n())?;
    s.conjugated(&t)?.same_group(&c.normal_form_group(s.n()))
}

/// Normal form for any 2- or 3-part partition.
pub fn normal_form(s: &StabilizerGroup, partition: &Partition) -> Result<NormalForm> {
    if partition.n() != s.n() {
        return Err(Error::InvalidPartition(format!(
            "partition covers {} qudits, state has {}",
            partition.n(),
            s.n()
        )));
    }
    let comps = prime_components(s)?;
    let mut components = Vec::new();
    for c in &comps {
        let mut e = Engine::new(c, partition)?;
        e.run()?;
        // gates in different parts commute, so grouping them by part keeps the unitary
        e.gates.sort_by_key(|g| partition.part_of(g.qudits()[0]));
        let gates = simplify(&e.gates, c.d());
        let nf = PrimeNormalForm {
            d: c.d(),
            counts: Counts::from_factors(&e.factors, partition),
            factors: e.factors,
            gates,
        };
        if !check_exact(c, &nf)? {
            return Err(Error::InternalInvariant(
                "conjugated state differs from the declared normal form".into(),
            ));
        }
        components.push(nf);
    }
    Ok(NormalForm { d: s.d(), partition: partition.clone(), state: s.clone(), components })
}

pub fn bipartition_normal_form(s: &StabilizerGroup, a: &[usize], b: &[usize]) -> Result<NormalForm> {
    normal_form(s, &Partition::new(s.n(), vec![a.to_vec(), b.to_vec()])?)
}

pub fn tripartition_normal_form(
    s: &StabilizerGroup,
    a: &[usize],
    b: &[usize],
    c: &[usize],
) -> Result<NormalForm> {
    normal_form(s, &Partition::new(s.n(), vec![a.to_vec(), b.to_vec(), c.to_vec()])?)
}

/// Result of a single extraction step: the residual group (still on all `n`
/// qudits, identity on everything extracted so far) and the local gates used.
#[derive(Debug, Clone)]
pub struct Extraction {
    pub residual: StabilizerGroup,
    pub tableau: CliffordTableau,
    pub factors: Vec<Factor>,
}

/// Splits off every unentangled qudit of `part`. Prime `D`.
pub fn extract_unentangled(s: &StabilizerGroup, part: &[usize]) -> Result<Extraction> {
    let rest: Vec<usize> = (0..s.n()).filter(|q| !part.contains(q)).collect();
    let partition = Partition::new(s.n(), vec![part.to_vec(), rest])?;
    let mut e = Engine::new_partial(s, &partition)?;
    while e.step1(0)? {}
    e.finish_step()
}

/// Splits off one EPR pair between parts `x` and `y` (the remaining qudits
/// form the third part), or returns `None`. Prime `D`.
pub fn extract_epr_pair(s: &StabilizerGroup, x: &[usize], y: &[usize]) -> Result<Option<Extraction>> {
    let rest: Vec<usize> = (0..s.n()).filter(|q| !x.contains(q) && !y.contains(q)).collect();
    let partition = Partition::new(s.n(), vec![x.to_vec(), y.to_vec(), rest])?;
    let mut e = Engine::new_partial(s, &partition)?;
    if e.epr(0, 1)? {
        Ok(Some(e.finish_step()?))
    } else {
        Ok(None)
    }
}

/// Splits off one GHZ triple, or returns `None` when nothing is left. Prime `D`;
/// unentangled qudits and EPR pairs must already be gone.
pub fn extract_ghz(s: &StabilizerGroup, a: &[usize], b: &[usize], c: &[usize]) -> Result<Option<Extraction>> {
    let partition = Partition::new(s.n(), vec![a.to_vec(), b.to_vec(), c.to_vec()])?;
    let mut e = Engine::new_partial(s, &partition)?;
    if e.ghz()? {
        Ok(Some(e.finish_step()?))
    } else {
        Ok(None)
    }
}

/// The extraction state for one prime.
struct Engine {
    n: usize,
    p: u64,
    part_of: Vec<usize>,
    nparts: usize,
    active: Vec<bool>,
    /// Residual generators, identity on every inactive qudit.
    gens: Vec<PauliProduct>,
    gates: Vec<Gate>,
    factors: Vec<Factor>,
}

impl Engine {
    fn new(s: &StabilizerGroup, partition: &Partition) -> Result<Engine> {
        let e = Self::new_partial(s, partition)?;
        if e.active.iter().any(|a| !a) {
            return Err(Error::NotAState(s.n()));
        }
        Ok(e)
    }

    /// Qudits outside the support of `s` count as already extracted.
    fn new_partial(s: &StabilizerGroup, partition: &Partition) -> Result<Engine> {
        let p = s.d();
        if !factorize(p)?.is_prime() {
            return Err(Error::NonPrimeD(p));
        }
        let n = s.n();
        let mut active = vec![false; n];
        for g in s.gens() {
            for q in g.support() {
                active[q] = true;
            }
        }
        let mut e = Engine {
            n,
            p,
            part_of: (0..n).map(|q| partition.part_of(q)).collect(),
            nparts: partition.parts().len(),
            active,
            gens: Vec::new(),
            gates: Vec::new(),
            factors: Vec::new(),
        };
        e.gens = e.echelon(s.gens())?;
        if e.gens.len() != e.active_count() {
            return Err(Error::NotAState(n));
        }
        Ok(e)
    }

    fn active_count(&self) -> usize {
        self.active.iter().filter(|a| **a).count()
    }

    fn active_in(&self, part: usize) -> Vec<usize> {
        (0..self.n).filter(|&q| self.active[q] && self.part_of[q] == part).collect()
    }

    fn active_cols(&self, parts: &[usize]) -> Vec<usize> {
        let qs: Vec<usize> = parts.iter().flat_map(|&p| self.active_in(p)).collect();
        qudit_cols(&qs, self.n)
    }

    /// Independent rows of the residual group over the active columns.
    fn echelon(&self, gens: &[PauliProduct]) -> Result<Vec<PauliProduct>> {
        let all: Vec<usize> = (0..self.nparts).collect();
        let e = Echelon::new(gens, &self.active_cols(&all));
        if e.dropped.iter().any(|g| !g.is_identity()) {
            return Err(Error::InvalidStabilizer(
                "generators imply a non-trivial multiple of the identity".into(),
            ));
        }
        Ok(e.rows)
    }

    /// Generators of the residual elements acting trivially on `excluded`.
    fn subgroup_avoiding(&self, excluded: &[usize]) -> Vec<PauliProduct> {
        let mut cols = self.active_cols(excluded);
        let split = cols.len();
        let rest: Vec<usize> = (0..self.nparts).filter(|p| !excluded.contains(p)).collect();
        cols.extend(self.active_cols(&rest));
        Echelon::new(&self.gens, &cols).rows_pivoting_after(&cols, split)
    }

    fn apply(&mut self, gates: &[Gate], extra: &mut [&mut PauliProduct]) {
        for g in gates {
            for h in self.gens.iter_mut() {
                *h = g.conjugate(h);
            }
            for h in extra.iter_mut() {
                **h = g.conjugate(h);
            }
            self.gates.push(*g);
        }
    }

    /// Rewrites every residual generator to act trivially on `qs` using the
    /// extracted group `t`, then retires `qs`.
    fn extract(&mut self, qs: &[usize], t: Vec<PauliProduct>, factor: Factor) -> Result<()> {
        let cols = qudit_cols(qs, self.n);
        let rows: Vec<Vec<u64>> = t.iter().map(|g| cols.iter().map(|&c| col_of(g, c)).collect()).collect();
        let mut next = Vec::with_capacity(self.gens.len());
        for g in &self.gens {
            let target: Vec<u64> = cols.iter().map(|&c| col_of(g, c)).collect();
            let comb = solve_combination(&rows, &target, self.p).ok_or_else(|| {
                Error::InternalInvariant("residual generator is not in the extracted group on its qudits".into())
            })?;
            let mut elem = PauliProduct::identity(self.n, self.p);
            for (ti, &c) in t.iter().zip(&comb) {
                if c != 0 {
                    elem = elem.mul_unchecked(&ti.power(c as i128));
                }
            }
            let h = g.mul_unchecked(&elem.inverse());
            debug_assert!(h.is_identity_on(qs));
            next.push(h);
        }
        for &q in qs {
            self.active[q] = false;
        }
        self.gens = self.echelon(&next).map_err(|_| {
            Error::InternalInvariant("rebasing left a non-trivial scalar".into())
        })?;
        if self.gens.len() != self.active_count() {
            return Err(Error::InternalInvariant("residual group is not a state".into()));
        }
        self.factors.push(factor);
        Ok(())
    }

    /// Splits off one unentangled qudit of `part` if there is one.
    fn step1(&mut self, part: usize) -> Result<bool> {
        let others: Vec<usize> = (0..self.nparts).filter(|&p| p != part).collect();
        let local = self.subgroup_avoiding(&others);
        let Some(mut s) = local.into_iter().next() else {
            return Ok(false);
        };
        let qs = self.active_in(part);
        let target = lowest_nontrivial(&s, &qs);
        let gates = pivot_gates(&s, &qs, target, PivotTarget::X)?;
        self.apply(&gates, &mut [&mut s]);
        let want = PauliProduct::x_on(self.n, self.p, target, 1);
        if s != want {
            return Err(Error::InternalInvariant(format!("local element pivoted to {s}, not X")));
        }
        self.extract(&[target], vec![s], Factor::Plus(target))?;
        Ok(true)
    }

    /// Turns `s` into `X` on qudit `q` with single-qudit gates.
    fn shape_to_x(&self, s: &PauliProduct, q: usize) -> Vec<Gate> {
        let p = self.p;
        let mut cur = s.clone();
        let mut gates = Vec::new();
        let mut push = |g: Gate, cur: &mut PauliProduct| {
            *cur = g.conjugate(cur);
            gates.push(g);
        };
        if cur.x()[q] == 0 {
            push(Gate::Fourier(q), &mut cur);
        }
        let (x, z) = (cur.x()[q], cur.z()[q]);
        if z != 0 {
            let t = reduce(-(z as i128) * inv_mod(x, p).expect("prime") as i128, p);
            for _ in 0..t {
                push(Gate::Phase(q), &mut cur);
            }
        }
        let x = cur.x()[q];
        if x != 1 {
            push(Gate::Mult(q, x), &mut cur);
        }
        gates
    }

    /// `W` applications clearing the `Z` exponent of `X Z^z` on `q`.
    fn clear_z(&self, s: &PauliProduct, q: usize) -> Vec<Gate> {
        let z = s.z()[q];
        vec![Gate::Phase(q); ((self.p - z) % self.p) as usize]
    }

    /// Phase fix for `λ^γ X ⋯` on `q` (even `γ`).
    fn fix_x_phase(&self, s: &PauliProduct, q: usize) -> Result<Vec<Gate>> {
        let g = s.phase();
        if g == 0 {
            return Ok(vec![]);
        }
        if !g.is_multiple_of(2) {
            return Err(Error::InternalInvariant(format!("odd phase on {s}")));
        }
        Ok(vec![Gate::PauliZ(q, g / 2)])
    }

    /// Phase fix for `λ^γ Z^{±1} ⋯` using `X^c` on `q`, where `Z^e` on `q`
    /// picks up `ω^{c e}`.
    fn fix_z_phase(&self, s: &PauliProduct, q: usize) -> Result<Vec<Gate>> {
        let g = s.phase();
        if g == 0 {
            return Ok(vec![]);
        }
        if !g.is_multiple_of(2) {
            return Err(Error::InternalInvariant(format!("odd phase on {s}")));
        }
        let e = s.z()[q];
        // need c·e ≡ -γ/2
        let c = reduce(-((g / 2) as i128) * inv_mod(e, self.p)? as i128, self.p);
        Ok(vec![Gate::PauliX(q, c)])
    }

    /// Shapes every active qudit of `part` other than `anchor` to `X` and
    /// folds it into `anchor` with CNOTs.
    fn fold_into(&mut self, s: &mut PauliProduct, part: usize, anchor: usize, extra: &mut [&mut PauliProduct]) {
        for q in self.active_in(part) {
            if q == anchor || s.is_identity_at(q) {
                continue;
            }
            let mut gates = self.shape_to_x(s, q);
            gates.push(Gate::Cnot(anchor, q));
            let mut all: Vec<&mut PauliProduct> = vec![&mut *s];
            for e in extra.iter_mut() {
                all.push(&mut **e);
            }
            self.apply(&gates, &mut all);
        }
    }

    /// One EPR pair between parts `x` and `y`, if their components do not commute.
    fn epr(&mut self, x: usize, y: usize) -> Result<bool> {
        let others: Vec<usize> = (0..self.nparts).filter(|&p| p != x && p != y).collect();
        let sxy = self.subgroup_avoiding(&others);
        let xs = self.active_in(x);
        let ys = self.active_in(y);
        let mut pair = None;
        'search: for j in 0..sxy.len() {
            for k in j + 1..sxy.len() {
                if comm_on(&sxy[k], &sxy[j], &xs) != 0 {
                    pair = Some((j, k));
                    break 'search;
                }
            }
        }
        let Some((j, k)) = pair else {
            return Ok(false);
        };
        let mut sj = sxy[j].clone();
        let alpha = comm_on(&sxy[k], &sj, &xs);
        let mut sk = sxy[k].power(inv_mod(alpha, self.p)? as i128);

        let x1 = lowest_nontrivial(&sj, &xs);
        let g = pivot_gates(&sj, &xs, x1, PivotTarget::Z)?;
        self.apply(&g, &mut [&mut sj, &mut sk]);
        let y1 = lowest_nontrivial(&sj, &ys);
        let g = pivot_gates(&sj, &ys, y1, PivotTarget::ZInv)?;
        self.apply(&g, &mut [&mut sj, &mut sk]);

        if sk.x()[x1] != 1 || sk.x()[y1] != 1 {
            return Err(Error::InternalInvariant("EPR partner lacks X on the pivot qudits".into()));
        }
        let g = self.clear_z(&sk, x1);
        self.apply(&g, &mut [&mut sj, &mut sk]);
        let g = self.clear_z(&sk, y1);
        self.apply(&g, &mut [&mut sj, &mut sk]);
        self.fold_into(&mut sk, x, x1, &mut [&mut sj]);
        self.fold_into(&mut sk, y, y1, &mut [&mut sj]);
        let g = self.fix_x_phase(&sk, x1)?;
        self.apply(&g, &mut [&mut sj, &mut sk]);
        let g = self.fix_z_phase(&sj, x1)?;
        self.apply(&g, &mut [&mut sj, &mut sk]);

        let f = Factor::Epr(x1, y1);
        let want = f.generators(self.n, self.p);
        if sk != want[0] || sj != want[1] {
            return Err(Error::InternalInvariant(format!("EPR shaping ended at {sk}, {sj}")));
        }
        self.extract(&[x1, y1], vec![sk, sj], f)?;
        Ok(true)
    }

    /// One GHZ triple across the three parts.
    fn ghz(&mut self) -> Result<bool> {
        if self.nparts != 3 {
            return Ok(false);
        }
        let (qa, qb, qc) = (self.active_in(0), self.active_in(1), self.active_in(2));
        if qa.is_empty() && qb.is_empty() && qc.is_empty() {
            return Ok(false);
        }
        if qa.len() != qb.len() || qb.len() != qc.len() {
            return Err(Error::PreconditionViolated(
                "parts have different sizes; unentangled qudits or EPR pairs remain".into(),
            ));
        }
        let missing = || Error::PreconditionViolated("GHZ structure not found; EPR extraction incomplete".into());

        // t1 ∈ S_BC, shaped to Z_B1 Z_C1^{-1}
        let mut t1 = self.subgroup_avoiding(&[0]).into_iter().next().ok_or_else(missing)?;
        if t1.is_identity_on(&qb) || t1.is_identity_on(&qc) {
            return Err(missing());
        }
        let b1 = lowest_nontrivial(&t1, &qb);
        let g = pivot_gates(&t1, &qb, b1, PivotTarget::Z)?;
        self.apply(&g, &mut [&mut t1]);
        let c1 = lowest_nontrivial(&t1, &qc);
        let g = pivot_gates(&t1, &qc, c1, PivotTarget::ZInv)?;
        self.apply(&g, &mut [&mut t1]);

        // t2 ∈ S_AB with B component Z_B1
        let sab = self.subgroup_avoiding(&[2]);
        let bcols = qudit_cols(&qb, self.n);
        let rows: Vec<Vec<u64>> = sab.iter().map(|g| bcols.iter().map(|&c| col_of(g, c)).collect()).collect();
        let target: Vec<u64> = bcols.iter().map(|&c| u64::from(c == self.n + b1)).collect();
        let comb = solve_combination(&rows, &target, self.p).ok_or_else(missing)?;
        let mut t2 = combine(&sab, &comb, self.n, self.p);
        if t2.is_identity_on(&qa) {
            return Err(missing());
        }
        let a1 = lowest_nontrivial(&t2, &qa);
        let g = pivot_gates(&t2, &qa, a1, PivotTarget::ZInv)?;
        self.apply(&g, &mut [&mut t1, &mut t2]);

        // t3 ∈ S with C component X_C1
        let ccols = qudit_cols(&qc, self.n);
        let rows: Vec<Vec<u64>> = self.gens.iter().map(|g| ccols.iter().map(|&c| col_of(g, c)).collect()).collect();
        let target: Vec<u64> = ccols.iter().map(|&c| u64::from(c == c1)).collect();
        let comb = solve_combination(&rows, &target, self.p).ok_or_else(missing)?;
        let mut t3 = combine(&self.gens.clone(), &comb, self.n, self.p);
        if t3.x()[a1] != 1 || t3.x()[b1] != 1 {
            return Err(Error::InternalInvariant("GHZ partner lacks X on the pivot qudits".into()));
        }
        let g = self.clear_z(&t3, a1);
        self.apply(&g, &mut [&mut t1, &mut t2, &mut t3]);
        let g = self.clear_z(&t3, b1);
        self.apply(&g, &mut [&mut t1, &mut t2, &mut t3]);
        self.fold_into(&mut t3, 0, a1, &mut [&mut t1, &mut t2]);
        self.fold_into(&mut t3, 1, b1, &mut [&mut t1, &mut t2]);

        let g = self.fix_x_phase(&t3, a1)?;
        self.apply(&g, &mut [&mut t1, &mut t2, &mut t3]);
        let g = self.fix_z_phase(&t1, c1)?;
        self.apply(&g, &mut [&mut t1, &mut t2, &mut t3]);
        let g = self.fix_z_phase(&t2, a1)?;
        self.apply(&g, &mut [&mut t1, &mut t2, &mut t3]);

        let n = self.n;
        let p = self.p;
        let want1 = PauliProduct::from_terms(n, p, &[(b1, 0, 1), (c1, 0, -1)]);
        let want2 = PauliProduct::from_terms(n, p, &[(a1, 0, -1), (b1, 0, 1)]);
        let want3 = PauliProduct::from_terms(n, p, &[(a1, 1, 0), (b1, 1, 0), (c1, 1, 0)]);
        if t1 != want1 || t2 != want2 || t3 != want3 {
            return Err(Error::InternalInvariant(format!("GHZ shaping ended at {t3}, {t1}, {t2}")));
        }
        self.extract(&[a1, b1, c1], vec![t3, t1, t2], Factor::Ghz(a1, b1, c1))?;
        Ok(true)
    }

    fn run(&mut self) -> Result<()> {
        let pairs: Vec<(usize, usize)> = if self.nparts == 3 {
            vec![(0, 1), (0, 2), (1, 2)]
        } else {
            vec![(0, 1)]
        };
        loop {
            let mut changed = false;
            for part in 0..self.nparts {
                while self.step1(part)? {
                    changed = true;
                }
            }
            for &(x, y) in &pairs {
                while self.epr(x, y)? {
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        while self.ghz()? {}
        if self.active_count() != 0 {
            return Err(Error::InternalInvariant(format!(
                "{} qudits remain after all extraction steps",
                self.active_count()
            )));
        }
        Ok(())
    }

    fn finish_step(self) -> Result<Extraction> {
        let tableau = CliffordTableau::from_gates(self.n, self.p, &self.gates)?;
        Ok(Extraction {
            residual: StabilizerGroup::from_parts(self.n, self.p, self.gens),
            tableau,
            factors: self.factors,
        })
    }
}

/// Merges neighbouring `F` gates (`F^4 = I`) and multipliers on the same
/// qudit. The unitary is unchanged.
fn simplify(gates: &[Gate], d: u64) -> Vec<Gate> {
    let mut out: Vec<Gate> = Vec::with_capacity(gates.len());
    for &g in gates {
        match (out.last().copied(), g) {
            (Some(Gate::Fourier(q)), Gate::Fourier(r)) if q == r => {
                // count the run of F on this qudit at the tail
                let run = out.iter().rev().take_while(|h| **h == Gate::Fourier(q)).count();
                if run == 3 {
                    out.truncate(out.len() - 3);
                } else {
                    out.push(g);
                }
            }
            (Some(Gate::Mult(q, a)), Gate::Mult(r, b)) if q == r => {
                out.pop();
                let m = crate::modring::mul_mod(a, b, d);
                if m != 1 {
                    out.push(Gate::Mult(q, m));
                }
            }
            _ => out.push(g),
        }
    }
    out
}

fn col_of(p: &PauliProduct, c: usize) -> u64 {
    crate::linalg::col(p, c)
}

/// `Σ_{q∈qs} (x_a z_b − z_a x_b) mod p`: the commutation phase of the
/// restrictions of `a` and `b` to `qs`.
fn comm_on(a: &PauliProduct, b: &PauliProduct, qs: &[usize]) -> u64 {
    let p = a.d() as i128;
    let s: i128 = qs
        .iter()
        .map(|&q| a.x()[q] as i128 * b.z()[q] as i128 - a.z()[q] as i128 * b.x()[q] as i128)
        .sum();
    s.rem_euclid(p) as u64
}

fn lowest_nontrivial(s: &PauliProduct, qs: &[usize]) -> usize {
    *qs.iter().find(|&&q| !s.is_identity_at(q)).expect("non-trivial on the part")
}

fn combine(gens: &[PauliProduct], comb: &[u64], n: usize, p: u64) -> PauliProduct {
    gens.iter()
        .zip(comb)
        .filter(|(_, &c)| c != 0)
        .fold(PauliProduct::identity(n, p), |acc, (g, &c)| acc.mul_unchecked(&g.power(c as i128)))
}
