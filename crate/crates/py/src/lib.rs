//! Python bindings. Polynomials come back as strings plus coefficient maps
//! keyed by half-exponent of z; structured results come back as dicts.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use rand::SeedableRng;

use ruling_lab::dga::{ce_dga, check_equivalence, find_augmentation, DgaRing, DEFAULT_SEARCH_CAP};
use ruling_lab::front::shuffle_moves;
use ruling_lab::kauffman::{check_ruling_coefficient, kauffman_normalized, kauffman_unnormalized};
use ruling_lab::maslov::{solve_maslov, MaslovPotential};
use ruling_lab::pd::ng_resolution;
use ruling_lab::ruling::{per_resolution, ruling_polynomial, transfer_matrix};
use ruling_lab::{FrontDiagram, HalfLaurent, Matching, Ring};

fn err(e: ruling_lab::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json(py: Python<'_>, v: &serde_json::Value) -> PyResult<PyObject> {
    let loads = py.import_bound("json")?.getattr("loads")?;
    Ok(loads.call1((v.to_string(),))?.unbind())
}

fn ring_or(ring: Option<&str>, rho: u64) -> PyResult<Ring> {
    match ring {
        Some(s) => s.parse().map_err(err),
        None => Ok(Ring::Z.graded(rho)),
    }
}

/// Laurent polynomial in z^(1/2) with integer coefficients.
#[pyclass(name = "Poly", module = "ruling_lab", frozen)]
#[derive(Clone)]
struct Poly(HalfLaurent);

#[pymethods]
impl Poly {
    /// {half_exponent: coefficient}
    fn coefficients(&self, py: Python<'_>) -> PyResult<PyObject> {
        let d = PyDict::new_bound(py);
        for (k, c) in self.0.terms() {
            d.set_item(k, c.clone())?;
        }
        Ok(d.into_any().unbind())
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn __eq__(&self, other: &Poly) -> bool {
        self.0 == other.0
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Poly('{}')", self.0)
    }
}

#[pyclass(name = "Front", module = "ruling_lab", frozen)]
#[derive(Clone)]
struct Front(FrontDiagram);

impl Front {
    fn potential(&self, ring: Ring) -> PyResult<MaslovPotential> {
        solve_maslov(&self.0, ring, &[]).map_err(err)
    }
}

#[pymethods]
impl Front {
    /// Parse the text format (`type l r` then one event per line).
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        FrontDiagram::from_text(text).map(Front).map_err(err)
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Self::new(&text)
    }

    #[getter]
    fn left(&self) -> usize {
        self.0.left
    }

    #[getter]
    fn right(&self) -> usize {
        self.0.right
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __str__(&self) -> String {
        self.0.to_text()
    }

    fn __repr__(&self) -> String {
        format!("Front(type {} {}, {} slices)", self.0.left, self.0.right, self.0.len())
    }

    fn __eq__(&self, other: &Front) -> bool {
        self.0 == other.0
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }

    /// Violations as strings; empty when the diagram is valid.
    fn validate(&self) -> Vec<String> {
        match self.0.validate() {
            Ok(()) => vec![],
            Err(v) => v.iter().map(|x| x.to_string()).collect(),
        }
    }

    fn close(&self) -> Front {
        Front(self.0.close())
    }

    /// Total Thurston-Bennequin number.
    fn tb(&self) -> PyResult<i64> {
        ruling_lab::pd::total_tb(&self.0).map_err(err)
    }

    fn writhes(&self) -> PyResult<Vec<i64>> {
        Ok(ng_resolution(&self.0).map_err(err)?.component_writhes())
    }

    /// Ruling polynomial for border matchings such as "1-2,3-4".
    #[pyo3(signature = (rho=1, ring=None, left=None, right=None))]
    fn rulings(&self, rho: u64, ring: Option<&str>, left: Option<&str>, right: Option<&str>) -> PyResult<Poly> {
        let mu = self.potential(ring_or(ring, rho)?)?;
        let m = |s: Option<&str>| s.map_or(Ok(Matching::empty()), |s| Matching::parse(s).map_err(err));
        ruling_polynomial(&self.0, &mu, rho, &m(left)?, &m(right)?).map(Poly).map_err(err)
    }

    /// (vertex matchings, polynomial) per full resolution of a closed front.
    #[pyo3(signature = (rho=1, ring=None))]
    fn per_resolution(&self, rho: u64, ring: Option<&str>) -> PyResult<Vec<(Vec<String>, Poly)>> {
        let mu = self.potential(ring_or(ring, rho)?)?;
        let e = Matching::empty();
        Ok(per_resolution(&self.0, &mu, rho, &e, &e)
            .map_err(err)?
            .into_iter()
            .map(|(c, p)| (c.iter().map(|m| m.to_string()).collect(), Poly(p)))
            .collect())
    }

    #[pyo3(signature = (rho=1, ring=None))]
    fn transfer_matrix(&self, py: Python<'_>, rho: u64, ring: Option<&str>) -> PyResult<PyObject> {
        let mu = self.potential(ring_or(ring, rho)?)?;
        json(py, &transfer_matrix(&self.0, &mu, rho).map_err(err)?.to_json())
    }

    /// Kauffman-Vogel polynomial in a, z, A, B as a string.
    #[pyo3(signature = (normalized=true))]
    fn kauffman(&self, normalized: bool) -> PyResult<String> {
        let f = if normalized { kauffman_normalized(&self.0) } else { kauffman_unnormalized(&self.0) };
        Ok(f.map_err(err)?.to_string())
    }

    fn check_kv(&self, py: Python<'_>) -> PyResult<PyObject> {
        let rep = check_ruling_coefficient(&self.0).map_err(err)?;
        json(py, &serde_json::to_value(&rep).expect("report serializes"))
    }

    #[pyo3(signature = (coeffs="gf2", ring=None))]
    fn dga(&self, py: Python<'_>, coeffs: &str, ring: Option<&str>) -> PyResult<PyObject> {
        let mu = self.potential(ring_or(ring, 0)?)?;
        let coeffs: DgaRing = coeffs.parse().map_err(err)?;
        json(py, &ce_dga(&self.0, &mu, coeffs).map_err(err)?.to_json())
    }

    /// First Z/2 augmentation as {generator: value}, or None.
    #[pyo3(signature = (rho=1, cap=DEFAULT_SEARCH_CAP))]
    fn augmentation(&self, rho: u64, cap: usize) -> PyResult<Option<std::collections::BTreeMap<String, u8>>> {
        let mu = self.potential(Ring::Z.graded(rho))?;
        let a = ce_dga(&self.0, &mu, DgaRing::Gf2).map_err(err)?;
        Ok(find_augmentation(&a, rho, cap).map_err(err)?.map(|x| x.values))
    }

    #[pyo3(signature = (rho=1))]
    fn check_equiv(&self, py: Python<'_>, rho: u64) -> PyResult<PyObject> {
        let rep = check_equivalence(&self.0, Ring::Z.graded(rho), rho).map_err(err)?;
        json(py, &serde_json::to_value(&rep).expect("report serializes"))
    }

    /// Apply `steps` random equivalence moves.
    #[pyo3(signature = (steps, seed=0, max_len=None))]
    fn shuffle(&self, steps: usize, seed: u64, max_len: Option<usize>) -> Front {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let max_len = max_len.unwrap_or(self.0.len() + 8);
        Front(shuffle_moves(&self.0, steps, max_len, &mut rng))
    }
}

#[pymodule]
#[pyo3(name = "ruling_lab")]
fn ruling_lab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Front>()?;
    m.add_class::<Poly>()?;
    Ok(())
}
