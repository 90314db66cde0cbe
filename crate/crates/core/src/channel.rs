//! Stabilizer code channels through their Choi states.
//!
//! A code is a graph state `|G⟩` on `n` qudits plus `k` independent Z-type
//! Paulis `f_l`; it encodes `|i⟩ ↦ f_1^{i_1}⋯f_k^{i_k}|G⟩`. The Choi state lives
//! on `k + n` qudits with the inputs first. Canonicalizing it for the
//! tripartition (inputs, B, C) gives the channel decomposition.

use std::fmt;

use crate::canonicalize::{normal_form, Counts, Factor, NormalForm, Partition};
use crate::clifford::{CliffordTableau, Gate};
use crate::error::{Error, Result};
use crate::linalg::{exponents, nullspace, rank};
use crate::modring::{factorize, neg_mod};
use crate::pauli::PauliProduct;
use crate::stabilizer::{GraphAdjacency, StabilizerGroup};
use crate::text::{at_line, format_index_list, parse_index_list, Lines, MAGIC};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSpec {
    graph: GraphAdjacency,
    coding: Vec<PauliProduct>,
}

impl CodeSpec {
    pub fn new(graph: GraphAdjacency, coding: Vec<PauliProduct>) -> Result<Self> {
        let (n, d) = (graph.n(), graph.d());
        if !factorize(d)?.is_prime() {
            return Err(Error::NonPrimeD(d));
        }
        for f in &coding {
            if f.n() != n || f.d() != d {
                return Err(Error::InvalidCode(format!("coding generator {f} does not fit {n} qudits at D={d}")));
            }
            if !f.is_z_type() {
                return Err(Error::InvalidCode(format!("coding generator {f} is not Z-type")));
            }
        }
        let rows: Vec<Vec<u64>> = coding.iter().map(|f| f.z().to_vec()).collect();
        if rank(&rows, n, d) != coding.len() {
            return Err(Error::InvalidCode("coding generators are dependent".into()));
        }
        // phases are irrelevant to the code space; keep them at zero
        let coding = coding.into_iter().map(|f| f.with_phase(0)).collect();
        Ok(CodeSpec { graph, coding })
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn k(&self) -> usize {
        self.coding.len()
    }

    pub fn d(&self) -> u64 {
        self.graph.d()
    }

    pub fn graph(&self) -> &GraphAdjacency {
        &self.graph
    }

    pub fn coding(&self) -> &[PauliProduct] {
        &self.coding
    }

    /// `f_l = Z_l` on `k` qudits with no edges: the noiseless channel.
    pub fn identity(k: usize, d: u64) -> Result<Self> {
        Self::new(GraphAdjacency::empty(k, d), (0..k).map(|l| PauliProduct::z_on(k, d, l, 1)).collect())
    }

    /// Two qudits, no edges, `f = Z_1 Z_2`.
    pub fn ghz(d: u64) -> Result<Self> {
        Self::new(
            GraphAdjacency::empty(2, d),
            vec![PauliProduct::from_terms(2, d, &[(0, 0, 1), (1, 0, 1)])],
        )
    }

    pub(crate) fn write_body(&self, out: &mut String) {
        self.graph.write_body(out);
        out.push_str(&format!("CODING {}\n", self.k()));
        for f in &self.coding {
            out.push_str(&format!("{f}\n"));
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{MAGIC} code\n");
        self.write_body(&mut s);
        s
    }

    pub(crate) fn read_body(lines: &mut Lines<'_>) -> Result<Self> {
        let graph = GraphAdjacency::read_body(lines)?;
        let (ln, l) = lines.next_line()?;
        let k: usize = l
            .strip_prefix("CODING ")
            .and_then(|s| s.trim().parse().ok())
            .ok_or(Error::Parse { line: ln, msg: "expected `CODING k`".into() })?;
        let mut coding = Vec::with_capacity(k);
        for _ in 0..k {
            let (ln, l) = lines.next_line()?;
            let f = PauliProduct::parse(l, graph.d()).map_err(|e| at_line(e, ln))?;
            if f.n() != graph.n() {
                return Err(Error::Parse { line: ln, msg: format!("expected {} qudits", graph.n()) });
            }
            coding.push(f);
        }
        Self::new(graph, coding)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = Lines::new(text);
        lines.header("code")?;
        let c = Self::read_body(&mut lines)?;
        lines.done()?;
        Ok(c)
    }
}

/// The Choi state on `k + n` qudits (inputs first).
pub fn code_to_choi_state(code: &CodeSpec) -> Result<StabilizerGroup> {
    let (n, k, d) = (code.n(), code.k(), code.d());
    let graph = StabilizerGroup::from_graph(&code.graph);
    let a = PauliProduct::identity(k, d);
    let mut gens = Vec::with_capacity(n + k);
    for g in graph.gens() {
        let mut za = a.clone();
        for (l, f) in code.coding.iter().enumerate() {
            // g f = ω^β f g
            let beta = g.commutation_phase(f)?;
            za = za.mul_unchecked(&PauliProduct::z_on(k, d, l, -(beta as i128)));
        }
        gens.push(za.tensor(g)?);
    }
    for (l, f) in code.coding.iter().enumerate() {
        gens.push(PauliProduct::x_on(k, d, l, 1).tensor(&f.inverse())?);
    }
    StabilizerGroup::new(k + n, d, gens)
}

/// Reads a code off a graph state on `k + n` qudits whose first `k` qudits
/// are the inputs. The returned gates are the controlled phases among the
/// inputs: applying them on the inputs turns the code's Choi state into the
/// given graph state.
pub fn graph_choi_to_code(graph: &GraphAdjacency, k: usize) -> Result<(CodeSpec, Vec<Gate>)> {
    let total = graph.n();
    let d = graph.d();
    if k > total {
        return Err(Error::InvalidCode(format!("k = {k} exceeds {total} qudits")));
    }
    let inputs: Vec<usize> = (0..k).collect();
    let r = StabilizerGroup::from_graph(graph).reduced_rank(&inputs)?;
    let expected = (d as u128).pow(k as u32);
    if r != expected {
        return Err(Error::NotMaximallyMixedInput { rank: r, expected });
    }
    let n = total - k;
    let mut out = GraphAdjacency::empty(n, d);
    for i in 0..n {
        for j in i + 1..n {
            out.set_edge(i, j, graph.weight(k + i, k + j) as i128)?;
        }
    }
    let coding = (0..k)
        .map(|l| {
            let z: Vec<i128> = (0..n).map(|j| graph.weight(l, k + j) as i128).collect();
            PauliProduct::new(d, 0, &vec![0; n], &z)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut gates = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let w = graph.weight(i, j);
            if w != 0 {
                gates.push(Gate::CPhase(i, j, w));
            }
        }
    }
    Ok((CodeSpec::new(out, coding)?, gates))
}

/// Output side of the channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    B,
    C,
}

/// The channel decomposition of a code for an output split `B ∪ C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelAnalysis {
    pub code: CodeSpec,
    /// Output qudits (0-based within the `n` outputs).
    pub b: Vec<usize>,
    pub c: Vec<usize>,
    pub m_abc: usize,
    pub m_ab: usize,
    pub m_ac: usize,
    pub m_bc: usize,
    pub m_b: usize,
    pub m_c: usize,
    /// Gates on the input qudits taking the Choi state to its normal form.
    pub input_gates: Vec<Gate>,
    /// Information groups in the transformed input basis (`λI` implicit).
    pub g_b_transformed: Vec<PauliProduct>,
    pub g_c_transformed: Vec<PauliProduct>,
    /// The same groups in the original input basis.
    pub g_b: Vec<PauliProduct>,
    pub g_c: Vec<PauliProduct>,
    /// Full normal form of the Choi state.
    pub normal_form: NormalForm,
}

impl ChannelAnalysis {
    pub fn k(&self) -> usize {
        self.code.k()
    }

    pub fn d(&self) -> u64 {
        self.code.d()
    }

    /// Capacities as integer multiples of `log2 D`: `(Q_B, C_B, Q_C, C_C)`.
    pub fn capacities(&self) -> (usize, usize, usize, usize) {
        (self.m_ab, self.m_ab + self.m_abc, self.m_ac, self.m_ac + self.m_abc)
    }

    pub fn info_group(&self, side: Side) -> &[PauliProduct] {
        match side {
            Side::B => &self.g_b,
            Side::C => &self.g_c,
        }
    }

    /// Membership of an original-basis Pauli on the inputs, up to phase.
    pub fn transmits(&self, side: Side, p: &PauliProduct) -> Result<bool> {
        if p.n() != self.k() || p.d() != self.d() {
            return Err(Error::ShapeMismatch(format!("expected a Pauli on {} input qudits", self.k())));
        }
        Ok(in_span(self.info_group(side), p, self.d()))
    }

    fn counts_line(&self) -> String {
        format!(
            "counts m_ABC={} m_AB={} m_AC={} m_BC={} m_B={} m_C={}",
            self.m_abc, self.m_ab, self.m_ac, self.m_bc, self.m_b, self.m_c
        )
    }

    pub fn to_text(&self) -> String {
        self.report(false)
    }

    /// The report; `as_bounds` prints capacities as lower bounds for an
    /// enclosing code.
    pub fn report(&self, as_bounds: bool) -> String {
        let d = self.d();
        let bits = (d as f64).log2();
        let rel = if as_bounds { ">=" } else { "=" };
        let mut s = format!("{MAGIC} channel-analysis\n");
        s.push_str(&format!("B {}\nC {}\nCODE\n", format_index_list(&self.b), format_index_list(&self.c)));
        self.code.write_body(&mut s);
        s.push_str(&self.counts_line());
        s.push('\n');
        let (qb, cb, qc, cc) = self.capacities();
        for (name, v) in [("Q_B", qb), ("C_B", cb), ("Q_C", qc), ("C_C", cc)] {
            s.push_str(&format!("{name} {rel} {v} (log2 units) # {:.3} bits\n", v as f64 * bits));
        }
        s.push_str(&format!("INPUT_GATES {}\n", self.input_gates.len()));
        for g in &self.input_gates {
            s.push_str(&format!("{g}\n"));
        }
        for (name, gens) in [
            ("G_B_TRANSFORMED", &self.g_b_transformed),
            ("G_C_TRANSFORMED", &self.g_c_transformed),
            ("G_B", &self.g_b),
            ("G_C", &self.g_c),
        ] {
            s.push_str(&format!("{name} {}\n", gens.len()));
            for g in gens {
                s.push_str(&format!("{g}\n"));
            }
        }
        s.push_str(&format!("duality {}\n", verify_duality(self)));
        s
    }

    /// Reads a report back. Only the code and the split are authoritative;
    /// everything else is recomputed and compared.
    pub fn parse(text: &str) -> Result<ChannelAnalysis> {
        let mut lines = Lines::new(text);
        lines.header("channel-analysis")?;
        let list = |lines: &mut Lines<'_>, key: &str| -> Result<Vec<usize>> {
            let (ln, l) = lines.next_line()?;
            let rest = l
                .strip_prefix(key)
                .ok_or(Error::Parse { line: ln, msg: format!("expected `{}`", key.trim()) })?;
            parse_index_list(rest.trim()).map_err(|e| at_line(e, ln))
        };
        let b = list(&mut lines, "B")?;
        let c = list(&mut lines, "C")?;
        let (ln, l) = lines.next_line()?;
        if l != "CODE" {
            return Err(Error::Parse { line: ln, msg: "expected `CODE`".into() });
        }
        let code = CodeSpec::read_body(&mut lines)?;
        let fresh = analyze_channel(&code, &b, &c)?;
        let (k, d) = (code.k(), code.d());
        let mismatch = |line: usize, what: &str| Error::Parse {
            line,
            msg: format!("{what} differs from a fresh analysis of the code"),
        };
        while !lines.is_done() {
            let (ln, l) = lines.next_line()?;
            let mut tok = l.split_whitespace();
            let key = tok.next().unwrap_or("");
            if key == "counts" {
                let want = fresh.counts_line();
                if l != want {
                    return Err(mismatch(ln, "counts line"));
                }
                continue;
            }
            let side = match key {
                "G_B" => Some(&fresh.g_b),
                "G_C" => Some(&fresh.g_c),
                "G_B_TRANSFORMED" | "G_C_TRANSFORMED" | "INPUT_GATES" => None,
                _ => continue,
            };
            let count: usize = tok
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or(Error::Parse { line: ln, msg: format!("expected `{key} count`") })?;
            let mut gens = Vec::with_capacity(count);
            for _ in 0..count {
                let (ln2, l2) = lines.next_line()?;
                if side.is_some() {
                    let g = PauliProduct::parse(l2, d).map_err(|e| at_line(e, ln2))?;
                    if g.n() != k {
                        return Err(Error::Parse { line: ln2, msg: format!("expected {k} qudits") });
                    }
                    gens.push(g);
                }
            }
            if let Some(want) = side {
                if !same_span(want, &gens, k, d) {
                    return Err(mismatch(ln, key));
                }
            }
        }
        Ok(fresh)
    }
}

impl fmt::Display for ChannelAnalysis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Decomposes the channels from the `k` inputs to `b` and to `c`.
pub fn analyze_channel(code: &CodeSpec, b: &[usize], c: &[usize]) -> Result<ChannelAnalysis> {
    let (n, k, d) = (code.n(), code.k(), code.d());
    let choi = code_to_choi_state(code)?;
    let shift = |v: &[usize]| v.iter().map(|&q| q + k).collect::<Vec<_>>();
    let partition = Partition::new(n + k, vec![(0..k).collect(), shift(b), shift(c)])?;
    let nf = normal_form(&choi, &partition)?;
    let comp = &nf.components[0];
    let Counts { m_a, m_b, m_c, m_ab, m_ac, m_bc, m_abc } = comp.counts;
    if m_a != 0 {
        return Err(Error::InternalInvariant(format!("{m_a} input qudits decoupled from the outputs")));
    }
    let input_gates = comp.part_gates(&(0..k).collect::<Vec<_>>());

    // generators on the input qudits of the normal-form side groups
    let mut nf_b = Vec::new();
    let mut nf_c = Vec::new();
    for f in &comp.factors {
        match *f {
            Factor::Epr(a, o) if a < k => {
                let target = if partition.part_of(o) == 1 { &mut nf_b } else { &mut nf_c };
                target.push(PauliProduct::x_on(k, d, a, 1));
                target.push(PauliProduct::z_on(k, d, a, 1));
            }
            Factor::Ghz(a, ..) => {
                nf_b.push(PauliProduct::z_on(k, d, a, 1));
                nf_c.push(PauliProduct::z_on(k, d, a, 1));
            }
            _ => {}
        }
    }
    // back to the original input basis: conj(U_A† G U_A)
    let inv = CliffordTableau::from_gates(k, d, &input_gates)?.inverse();
    let original = |gens: &[PauliProduct]| -> Result<Vec<PauliProduct>> {
        gens.iter()
            .map(|g| Ok(inv.conjugate(g)?.conjugate().with_phase(0)))
            .collect()
    };
    let g_b = original(&nf_b)?;
    let g_c = original(&nf_c)?;
    Ok(ChannelAnalysis {
        code: code.clone(),
        b: b.to_vec(),
        c: c.to_vec(),
        m_abc,
        m_ab,
        m_ac,
        m_bc,
        m_b,
        m_c,
        input_gates,
        g_b_transformed: nf_b,
        g_c_transformed: nf_c,
        g_b,
        g_c,
        normal_form: nf,
    })
    .and_then(|a| {
        if a.m_abc + a.m_ab + a.m_ac != k || n != a.b.len() + a.c.len() {
            Err(Error::InternalInvariant("input qudits not fully consumed".into()))
        } else {
            Ok(a)
        }
    })
}

/// The information group of one side, in the original input basis.
pub fn info_group(analysis: &ChannelAnalysis, side: Side) -> Vec<PauliProduct> {
    analysis.info_group(side).to_vec()
}

/// Generators of the Paulis on `k` qudits commuting with every element of
/// `gens` (phases ignored, `λI` implicit).
pub fn centralizer_in_pauli(gens: &[PauliProduct], k: usize, d: u64) -> Result<Vec<PauliProduct>> {
    if !factorize(d)?.is_prime() {
        return Err(Error::NonPrimeD(d));
    }
    // g commutes with (x | z) iff  -z_g · x + x_g · z = 0
    let mat: Vec<Vec<u64>> = gens
        .iter()
        .map(|g| g.z().iter().map(|&a| neg_mod(a, d)).chain(g.x().iter().copied()).collect())
        .collect();
    nullspace(&mat, 2 * k, d)
        .into_iter()
        .map(|v| {
            let x: Vec<i128> = v[..k].iter().map(|&a| a as i128).collect();
            let z: Vec<i128> = v[k..].iter().map(|&a| a as i128).collect();
            PauliProduct::new(d, 0, &x, &z)
        })
        .collect()
}

/// `r` such that the generators span `D^r` Paulis up to phase.
pub fn span_rank(gens: &[PauliProduct], k: usize, d: u64) -> usize {
    let rows: Vec<Vec<u64>> = gens.iter().map(exponents).collect();
    rank(&rows, 2 * k, d)
}

/// Whether two generator lists span the same group up to phases.
pub fn same_span(a: &[PauliProduct], b: &[PauliProduct], k: usize, d: u64) -> bool {
    let both: Vec<PauliProduct> = a.iter().chain(b).cloned().collect();
    let r = span_rank(&both, k, d);
    span_rank(a, k, d) == r && span_rank(b, k, d) == r
}

fn in_span(gens: &[PauliProduct], p: &PauliProduct, d: u64) -> bool {
    same_span(gens, &[gens.to_vec(), vec![p.clone()]].concat(), p.n(), d)
}

/// `G_B = Cent(G_C)` and `G_C = Cent(G_B)`.
pub fn verify_duality(analysis: &ChannelAnalysis) -> bool {
    let (k, d) = (analysis.k(), analysis.d());
    let check = |g: &[PauliProduct], h: &[PauliProduct]| {
        centralizer_in_pauli(h, k, d).map(|c| same_span(g, &c, k, d)).unwrap_or(false)
    };
    check(&analysis.g_b, &analysis.g_c) && check(&analysis.g_c, &analysis.g_b)
}

/// Analyses a subcode; its capacities are lower bounds for any enclosing code.
pub fn subcode_bounds(sub: &CodeSpec, b: &[usize], c: &[usize]) -> Result<ChannelAnalysis> {
    analyze_channel(sub, b, c)
}
