//! Python bindings. Qudit indices are zero-based on this side, unlike the
//! text formats.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use qstab::canonicalize::{self, Partition};
use qstab::channel::{self, CodeSpec};
use qstab::{crt, random, GraphAdjacency, PauliProduct, StabilizerGroup};

fn err(e: qstab::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "Pauli", eq, frozen)]
#[derive(Clone, PartialEq)]
struct PyPauli(PauliProduct);

#[pymethods]
impl PyPauli {
    /// `λ^phase ⊗_q X^{x_q} Z^{z_q}` at dimension `d`.
    #[new]
    #[pyo3(signature = (d, x, z, phase = 0))]
    fn new(d: u64, x: Vec<i64>, z: Vec<i64>, phase: i64) -> PyResult<Self> {
        let x: Vec<i128> = x.into_iter().map(i128::from).collect();
        let z: Vec<i128> = z.into_iter().map(i128::from).collect();
        PauliProduct::new(d, phase as i128, &x, &z).map(PyPauli).map_err(err)
    }

    #[staticmethod]
    fn parse(line: &str, d: u64) -> PyResult<Self> {
        PauliProduct::parse(line, d).map(PyPauli).map_err(err)
    }

    #[getter]
    fn d(&self) -> u64 {
        self.0.d()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn phase(&self) -> u64 {
        self.0.phase()
    }

    #[getter]
    fn x(&self) -> Vec<u64> {
        self.0.x().to_vec()
    }

    #[getter]
    fn z(&self) -> Vec<u64> {
        self.0.z().to_vec()
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        self.0.multiply(&other.0).map(PyPauli).map_err(err)
    }

    fn __pow__(&self, k: i64, _modulo: Option<i64>) -> Self {
        PyPauli(self.0.power(k as i128))
    }

    fn inverse(&self) -> Self {
        PyPauli(self.0.inverse())
    }

    /// `a` with `self · other = ω^a other · self`.
    fn commutation_phase(&self, other: &Self) -> PyResult<u64> {
        self.0.commutation_phase(&other.0).map_err(err)
    }

    fn __str__(&self) -> String {
        self.0.pretty()
    }

    fn __repr__(&self) -> String {
        format!("Pauli({})", self.0)
    }
}

#[pyclass(name = "Stabilizer", eq, frozen)]
#[derive(Clone, PartialEq)]
struct PyStabilizer(StabilizerGroup);

#[pymethods]
impl PyStabilizer {
    #[new]
    fn new(n: usize, d: u64, gens: Vec<PyPauli>) -> PyResult<Self> {
        StabilizerGroup::new(n, d, gens.into_iter().map(|g| g.0).collect())
            .map(PyStabilizer)
            .map_err(err)
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        StabilizerGroup::parse(text).map(PyStabilizer).map_err(err)
    }

    /// Graph state from weighted edges `(i, j, w)`.
    #[staticmethod]
    fn from_graph(n: usize, d: u64, edges: Vec<(usize, usize, i64)>) -> PyResult<Self> {
        let e: Vec<(usize, usize, i128)> = edges.into_iter().map(|(i, j, w)| (i, j, w as i128)).collect();
        let g = GraphAdjacency::from_edges(n, d, &e).map_err(err)?;
        Ok(PyStabilizer(StabilizerGroup::from_graph(&g)))
    }

    #[staticmethod]
    fn ghz(d: u64) -> PyResult<Self> {
        StabilizerGroup::ghz_group(d).map(PyStabilizer).map_err(err)
    }

    #[staticmethod]
    fn epr(d: u64) -> PyResult<Self> {
        StabilizerGroup::epr_group(d).map(PyStabilizer).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (n, d, seed = 0))]
    fn random(n: usize, d: u64, seed: u64) -> PyResult<Self> {
        random::random_state(n, d, seed).map(PyStabilizer).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn d(&self) -> u64 {
        self.0.d()
    }

    #[getter]
    fn generators(&self) -> Vec<PyPauli> {
        self.0.gens().iter().cloned().map(PyPauli).collect()
    }

    fn is_state(&self) -> bool {
        self.0.is_state()
    }

    /// Rank of the reduced state on `part`.
    fn reduced_rank(&self, part: Vec<usize>) -> PyResult<u128> {
        self.0.reduced_rank(&part).map_err(err)
    }

    fn same_group(&self, other: &Self) -> PyResult<bool> {
        self.0.same_group(&other.0).map_err(err)
    }

    fn contains(&self, p: &PyPauli) -> PyResult<bool> {
        self.0.contains(&p.0).map_err(err)
    }

    /// One state per prime factor of a squarefree `D`.
    fn crt_decompose(&self) -> PyResult<Vec<PyStabilizer>> {
        Ok(crt::decompose_state(&self.0).map_err(err)?.into_iter().map(PyStabilizer).collect())
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }

    fn __repr__(&self) -> String {
        format!("Stabilizer({})", self.0)
    }
}

#[pyclass(name = "NormalForm", frozen)]
struct PyNormalForm(canonicalize::NormalForm);

#[pymethods]
impl PyNormalForm {
    /// The seven multiplicities, minimised over prime factors.
    fn counts(&self) -> Vec<(&'static str, usize)> {
        let c = self.0.counts();
        vec![
            ("m_A", c.m_a),
            ("m_B", c.m_b),
            ("m_C", c.m_c),
            ("m_AB", c.m_ab),
            ("m_AC", c.m_ac),
            ("m_BC", c.m_bc),
            ("m_ABC", c.m_abc),
        ]
    }

    /// Schmidt rank predicted for the cut putting the listed parts on one side.
    fn predicted_rank(&self, side: Vec<usize>) -> u128 {
        self.0.predicted_rank(&side)
    }

    fn verify(&self) -> PyResult<bool> {
        self.0.verify().map_err(err)
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }
}

/// Normal form for two or three parts given as lists of qudit indices.
#[pyfunction]
fn normal_form(state: &PyStabilizer, parts: Vec<Vec<usize>>) -> PyResult<PyNormalForm> {
    let p = Partition::new(state.0.n(), parts).map_err(err)?;
    canonicalize::normal_form(&state.0, &p).map(PyNormalForm).map_err(err)
}

#[pyclass(name = "Code", frozen)]
#[derive(Clone)]
struct PyCode(CodeSpec);

#[pymethods]
impl PyCode {
    /// A graph code: weighted edges on `n` qudits and Z-type coding generators.
    #[new]
    fn new(n: usize, d: u64, edges: Vec<(usize, usize, i64)>, coding: Vec<PyPauli>) -> PyResult<Self> {
        let e: Vec<(usize, usize, i128)> = edges.into_iter().map(|(i, j, w)| (i, j, w as i128)).collect();
        let g = GraphAdjacency::from_edges(n, d, &e).map_err(err)?;
        CodeSpec::new(g, coding.into_iter().map(|f| f.0).collect()).map(PyCode).map_err(err)
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        CodeSpec::parse(text).map(PyCode).map_err(err)
    }

    #[staticmethod]
    fn identity(k: usize, d: u64) -> PyResult<Self> {
        CodeSpec::identity(k, d).map(PyCode).map_err(err)
    }

    #[staticmethod]
    fn ghz(d: u64) -> PyResult<Self> {
        CodeSpec::ghz(d).map(PyCode).map_err(err)
    }

    fn choi_state(&self) -> PyResult<PyStabilizer> {
        channel::code_to_choi_state(&self.0).map(PyStabilizer).map_err(err)
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }
}

#[pyclass(name = "ChannelAnalysis", frozen)]
struct PyChannelAnalysis(channel::ChannelAnalysis);

#[pymethods]
impl PyChannelAnalysis {
    /// `(Q_B, C_B, Q_C, C_C)` in units of `log2 D` bits.
    fn capacities(&self) -> (usize, usize, usize, usize) {
        self.0.capacities()
    }

    #[getter]
    fn g_b(&self) -> Vec<PyPauli> {
        self.0.g_b.iter().cloned().map(PyPauli).collect()
    }

    #[getter]
    fn g_c(&self) -> Vec<PyPauli> {
        self.0.g_c.iter().cloned().map(PyPauli).collect()
    }

    fn duality_holds(&self) -> bool {
        channel::verify_duality(&self.0)
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }
}

#[pyfunction]
fn analyze_channel(code: &PyCode, b: Vec<usize>, c: Vec<usize>) -> PyResult<PyChannelAnalysis> {
    channel::analyze_channel(&code.0, &b, &c).map(PyChannelAnalysis).map_err(err)
}

#[pymodule]
fn pyqstab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPauli>()?;
    m.add_class::<PyStabilizer>()?;
    m.add_class::<PyNormalForm>()?;
    m.add_class::<PyCode>()?;
    m.add_class::<PyChannelAnalysis>()?;
    m.add_function(wrap_pyfunction!(normal_form, m)?)?;
    m.add_function(wrap_pyfunction!(analyze_channel, m)?)?;
    Ok(())
}
