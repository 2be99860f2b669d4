//! Python bindings: algebras, bimodules, Frobenius certificates and the analyses on them.

use frob_core::algebra::{AlgRef, Algebra};
use frob_core::bimodule::{self as bm, AdjointPair, Bimodule, FrobeniusCertificate};
use frob_core::exactla::{Field, Matrix};
use frob_core::frobanalysis as fa;
use frob_core::module::IsoSearch;
use frob_core::spectrum::LocalizingSubcat;
use frob_core::{cli, fixtures};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

create_exception!(frob, FrobError, PyException, "Raised for any mathematical failure.");

fn err(e: frob_core::FrobError) -> PyErr {
    FrobError::new_err(format!("{}: {e}", e.kind()))
}

fn field(p: u64) -> PyResult<Field> {
    Field::new(p).map_err(err)
}

/// Any serializable report as plain Python objects.
fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn matrix(f: Field, rows: &[Vec<i64>], cols: usize) -> PyResult<Matrix> {
    Matrix::from_rows(f, rows, cols).map_err(err)
}

#[pyclass(name = "Algebra", frozen, skip_from_py_object, module = "frob")]
#[derive(Clone)]
struct PyAlgebra(AlgRef);

#[pymethods]
impl PyAlgebra {
    #[staticmethod]
    fn ground(p: u64) -> PyResult<Self> {
        Algebra::ground(field(p)?).map(Self).map_err(err)
    }

    #[staticmethod]
    fn lower_triangular(p: u64, n: usize) -> PyResult<Self> {
        Algebra::lower_triangular(field(p)?, n).map(Self).map_err(err)
    }

    /// `F_p[t] / (poly)`, coefficients from the constant term up.
    #[staticmethod]
    fn field_extension(p: u64, poly: Vec<i64>) -> PyResult<Self> {
        Algebra::field_extension(field(p)?, &poly).map(Self).map_err(err)
    }

    #[staticmethod]
    fn linear_quiver(p: u64, n: usize) -> PyResult<Self> {
        fixtures::linear_quiver(p, n).map(Self).map_err(err)
    }

    #[staticmethod]
    fn product(a: &PyAlgebra, b: &PyAlgebra) -> PyResult<Self> {
        Algebra::product(&a.0, &b.0).map(Self).map_err(err)
    }

    #[staticmethod]
    fn tensor(a: &PyAlgebra, b: &PyAlgebra) -> PyResult<Self> {
        Algebra::tensor(&a.0, &b.0).map(Self).map_err(err)
    }

    #[staticmethod]
    fn matrix_over(a: &PyAlgebra, n: usize) -> PyResult<Self> {
        Algebra::matrix_over(&a.0, n).map(Self).map_err(err)
    }

    #[getter]
    fn p(&self) -> u32 {
        self.0.field().p()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.0.labels().to_vec()
    }

    #[getter]
    fn num_points(&self) -> usize {
        self.0.num_points()
    }

    fn mul(&self, x: Vec<u32>, y: Vec<u32>) -> PyResult<Vec<u32>> {
        if x.len() != self.0.dim() || y.len() != self.0.dim() {
            return Err(PyValueError::new_err("coordinate vectors must have length dim"));
        }
        Ok(self.0.mul(&x, &y))
    }

    fn is_commutative(&self) -> bool {
        self.0.is_commutative()
    }

    fn is_local(&self) -> bool {
        self.0.locality_report().is_local
    }

    fn __repr__(&self) -> String {
        format!("Algebra(dim={}, p={}, points={})", self.0.dim(), self.0.field().p(), self.0.num_points())
    }
}

#[pyclass(name = "Bimodule", frozen, skip_from_py_object, module = "frob")]
#[derive(Clone)]
struct PyBimodule(Bimodule);

#[pymethods]
impl PyBimodule {
    /// Explicit actions: one `dim x dim` matrix per basis element of each algebra.
    #[new]
    fn new(
        left: &PyAlgebra,
        right: &PyAlgebra,
        dim: usize,
        lambda: Vec<Vec<Vec<i64>>>,
        rho: Vec<Vec<Vec<i64>>>,
    ) -> PyResult<Self> {
        let f = left.0.field();
        let conv = |ms: Vec<Vec<Vec<i64>>>| -> PyResult<Vec<Matrix>> {
            ms.iter().map(|m| matrix(f, m, dim)).collect()
        };
        Bimodule::new(left.0.clone(), right.0.clone(), dim, conv(lambda)?, conv(rho)?)
            .map(Self)
            .map_err(err)
    }

    #[staticmethod]
    fn regular(a: &PyAlgebra) -> Self {
        Self(Bimodule::regular(a.0.clone()))
    }

    /// `A` with the right action twisted by `phi` (row `i` is `phi(b_i)`).
    #[staticmethod]
    fn twist(a: &PyAlgebra, phi: Vec<Vec<i64>>) -> PyResult<Self> {
        let m = matrix(a.0.field(), &phi, a.0.dim())?;
        Bimodule::twist(a.0.clone(), &m).map(Self).map_err(err)
    }

    #[staticmethod]
    fn diagonal(a: &PyAlgebra) -> PyResult<Self> {
        Bimodule::diagonal(a.0.clone()).map(Self).map_err(err)
    }

    #[staticmethod]
    fn morita(p: u64, n: usize) -> PyResult<Self> {
        fixtures::morita(p, n).map(Self).map_err(err)
    }

    /// `R/I` over `(R, k)` for `R` the lower triangular 2x2 matrices over `F_5`.
    #[staticmethod]
    fn triangular() -> PyResult<Self> {
        fixtures::triangular().map(Self).map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn left(&self) -> PyAlgebra {
        PyAlgebra(self.0.left_algebra().clone())
    }

    #[getter]
    fn right(&self) -> PyAlgebra {
        PyAlgebra(self.0.right_algebra().clone())
    }

    fn direct_sum(&self, other: &PyBimodule) -> PyResult<Self> {
        self.0.direct_sum(&other.0).map(Self).map_err(err)
    }

    fn tensor(&self, other: &PyBimodule) -> PyResult<Self> {
        bm::tensor(&self.0, &other.0).map(|t| Self(t.bimodule)).map_err(err)
    }

    #[pyo3(signature = (other, seed = 0x5eed))]
    fn is_isomorphic(&self, other: &PyBimodule, seed: u64) -> PyResult<bool> {
        let out = self.0.iso_test(&other.0, &IsoSearch::with_seed(seed)).map_err(err)?;
        Ok(out.is_iso())
    }

    fn adjoint_pair(&self) -> PyResult<PyAdjointPair> {
        AdjointPair::new(&self.0).map(PyAdjointPair).map_err(err)
    }

    #[pyo3(signature = (seed = 0x5eed))]
    fn frobenius_check(&self, seed: u64) -> PyResult<PyCertificate> {
        bm::frobenius_check(&self.0, &IsoSearch::with_seed(seed))
            .map(|c| PyCertificate(Box::new(c)))
            .map_err(err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Bimodule(dim={}, left_dim={}, right_dim={})",
            self.0.dim(),
            self.0.left_algebra().dim(),
            self.0.right_algebra().dim()
        )
    }
}

/// Reports shared by a bare adjoint pair and a full certificate.
fn rank_report(py: Python<'_>, pair: &AdjointPair) -> PyResult<Py<PyAny>> {
    let r = fa::rank_report(pair).map_err(err)?;
    Ok(to_py(py, &r)?.unbind())
}

fn classify(py: Python<'_>, pair: &AdjointPair, include_zero: bool) -> PyResult<Py<PyAny>> {
    let r = fa::classify(pair, include_zero).map_err(err)?;
    Ok(to_py(py, &r)?.unbind())
}

fn restrict(py: Python<'_>, pair: &AdjointPair, killed: Vec<usize>, seed: u64) -> PyResult<Py<PyAny>> {
    let u = LocalizingSubcat::new(pair.bimodule.right_algebra().clone(), &killed).map_err(err)?;
    let r = fa::restrict(pair, &u, &IsoSearch::with_seed(seed)).map_err(err)?;
    Ok(to_py(py, &r)?.unbind())
}

/// `F = - (x)_A M` and its right adjoint; needs `M` projective over `B` only.
#[pyclass(name = "AdjointPair", frozen, module = "frob")]
struct PyAdjointPair(AdjointPair);

#[pymethods]
impl PyAdjointPair {
    fn rank_report(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        rank_report(py, &self.0)
    }

    #[pyo3(signature = (include_zero_subcategory = false))]
    fn classify(&self, py: Python<'_>, include_zero_subcategory: bool) -> PyResult<Py<PyAny>> {
        classify(py, &self.0, include_zero_subcategory)
    }

    fn equivalence(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let r = fa::equivalence_test(&self.0).map_err(err)?;
        Ok(to_py(py, &r)?.unbind())
    }

    /// Killed points are 0-based.
    #[pyo3(signature = (killed, seed = 0x5eed))]
    fn restrict(&self, py: Python<'_>, killed: Vec<usize>, seed: u64) -> PyResult<Py<PyAny>> {
        restrict(py, &self.0, killed, seed)
    }
}

#[pyclass(name = "FrobeniusCertificate", frozen, module = "frob")]
struct PyCertificate(Box<FrobeniusCertificate>);

#[pymethods]
impl PyCertificate {
    #[getter]
    fn zigzags(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        Ok(to_py(py, &self.0.adjunction.zigzags)?.unbind())
    }

    /// Rows of the `(B, A)`-isomorphism from the left dual to the right dual.
    #[getter]
    fn theta(&self) -> Vec<Vec<i64>> {
        self.0.theta.to_int_rows()
    }

    fn rank_report(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        rank_report(py, &self.0)
    }

    #[pyo3(signature = (include_zero_subcategory = false))]
    fn classify(&self, py: Python<'_>, include_zero_subcategory: bool) -> PyResult<Py<PyAny>> {
        classify(py, &self.0, include_zero_subcategory)
    }

    #[pyo3(signature = (killed, seed = 0x5eed))]
    fn restrict(&self, py: Python<'_>, killed: Vec<usize>, seed: u64) -> PyResult<Py<PyAny>> {
        restrict(py, &self.0, killed, seed)
    }

    #[pyo3(signature = (seed = 0x5eed))]
    fn partition(&self, py: Python<'_>, seed: u64) -> PyResult<Py<PyAny>> {
        let r = fa::constant_rank_partition(&self.0, &IsoSearch::with_seed(seed)).map_err(err)?;
        Ok(to_py(py, &r)?.unbind())
    }
}

/// Parse a `.frob` document and run one command; returns the JSON report as Python objects.
#[pyfunction]
#[pyo3(signature = (source, command = "report-all", seed = 0x5eed, include_zero_subcategory = false))]
fn run_document(
    py: Python<'_>,
    source: &str,
    command: &str,
    seed: u64,
    include_zero_subcategory: bool,
) -> PyResult<Py<PyAny>> {
    let bad = |e: cli::CliError| PyValueError::new_err(e.to_string());
    let command: cli::Command = command.parse().map_err(bad)?;
    let doc = cli::parse(source).map_err(bad)?;
    let opts = cli::RunOptions { seed, include_zero_subcategory };
    let report = cli::run(&doc, command, opts);
    let json = cli::to_json(&report);
    Ok(py.import("json")?.call_method1("loads", (json,))?.unbind())
}

#[pymodule]
fn frob(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("FrobError", m.py().get_type::<FrobError>())?;
    m.add_class::<PyAlgebra>()?;
    m.add_class::<PyBimodule>()?;
    m.add_class::<PyAdjointPair>()?;
    m.add_class::<PyCertificate>()?;
    m.add_function(wrap_pyfunction!(run_document, m)?)?;
    Ok(())
}
