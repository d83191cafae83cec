//! Python bindings: `import singular_bgg_py`.

use std::sync::Arc;

use pyo3::create_exception;
use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use singular_bgg::complex::{
    assign_signs, is_kostant, nonkostant_block, regular_skeleton, s_category_has_bgg, singular_skeleton,
    translate_skeleton,
};
use singular_bgg::export::{emit_dot, format_word, to_json, SkeletonJson};
use singular_bgg::klv::klv_dominant;
use singular_bgg::mobius::{mobius_lambda, support_x};
use singular_bgg::{CartanType, Element, Error, Family};

create_exception!(singular_bgg_py, ResourceError, PyRuntimeError, "Element budget exceeded.");

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Resource(_) => ResourceError::new_err(e.to_string()),
        Error::Internal(_) => PyRuntimeError::new_err(e.to_string()),
        Error::Io(_) => PyOSError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

trait OrRaise<T> {
    fn or_raise(self) -> PyResult<T>;
}

impl<T> OrRaise<T> for singular_bgg::Result<T> {
    fn or_raise(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn parse_cartan(name: &str) -> PyResult<CartanType> {
    let mut chars = name.trim().chars();
    let letter = chars.next().ok_or_else(|| PyValueError::new_err("empty Cartan type"))?;
    let rank: usize = chars
        .as_str()
        .parse()
        .map_err(|_| PyValueError::new_err(format!("{name:?} is not a Cartan type such as \"B3\"")))?;
    CartanType::new(Family::from_letter(letter).or_raise()?, rank).or_raise()
}

/// A finite Weyl group, enumerated up to the element budget.
#[pyclass(name = "WeylGroup", module = "singular_bgg_py", frozen)]
struct PyWeylGroup {
    inner: Arc<singular_bgg::WeylGroup>,
}

#[pymethods]
impl PyWeylGroup {
    #[new]
    #[pyo3(signature = (cartan, budget=None))]
    fn new(cartan: &str, budget: Option<usize>) -> PyResult<Self> {
        let cartan = parse_cartan(cartan)?;
        let budget = match budget {
            Some(b) => b,
            None => singular_bgg::weyl::element_budget_from_env().or_raise()?,
        };
        let g = singular_bgg::WeylGroup::build_with_budget(cartan, budget).or_raise()?;
        if !g.is_enumerated() {
            return Err(ResourceError::new_err(format!("{cartan} exceeds the element budget {budget}")));
        }
        Ok(PyWeylGroup { inner: Arc::new(g) })
    }

    #[getter]
    fn cartan(&self) -> String {
        self.inner.cartan().to_string()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    fn __len__(&self) -> PyResult<usize> {
        self.inner.len().or_raise()
    }

    fn __repr__(&self) -> String {
        format!("WeylGroup({:?})", self.inner.cartan().to_string())
    }

    /// The element with the given word; the word need not be reduced.
    #[pyo3(signature = (word=Vec::new()))]
    fn element(&self, word: Vec<usize>) -> PyResult<PyElement> {
        Ok(self.wrap(self.inner.from_word(&word).or_raise()?))
    }

    fn longest(&self) -> PyElement {
        self.wrap(self.inner.longest_element())
    }

    /// All elements in canonical (length, ShortLex) order.
    fn elements(&self) -> PyResult<Vec<PyElement>> {
        Ok(self.inner.elements().or_raise()?.into_iter().map(|w| self.wrap(w)).collect())
    }

    fn leq(&self, u: &PyElement, v: &PyElement) -> PyResult<bool> {
        self.inner.leq(&u.inner, &v.inner).or_raise()
    }

    fn multiply(&self, u: &PyElement, v: &PyElement) -> PyResult<PyElement> {
        Ok(self.wrap(self.inner.multiply(&u.inner, &v.inner).or_raise()?))
    }

    fn inverse(&self, w: &PyElement) -> PyElement {
        self.wrap(self.inner.inverse(&w.inner))
    }
}

impl PyWeylGroup {
    fn wrap(&self, w: Element) -> PyElement {
        PyElement {
            word: self.inner.reduced_word(&w),
            group: self.inner.clone(),
            inner: w,
        }
    }
}

#[pyclass(name = "Element", module = "singular_bgg_py", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone)]
struct PyElement {
    inner: Element,
    group: Arc<singular_bgg::WeylGroup>,
    word: Vec<usize>,
}

impl PartialEq for PyElement {
    fn eq(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

impl std::hash::Hash for PyElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.inner.hash(state)
    }
}

#[pymethods]
impl PyElement {
    /// ShortLex reduced word.
    #[getter]
    fn word(&self) -> Vec<usize> {
        self.word.clone()
    }

    #[getter]
    fn length(&self) -> usize {
        self.inner.length()
    }

    fn __repr__(&self) -> String {
        format!("Element({})", format_word(&self.group, &self.word))
    }

    fn __str__(&self) -> String {
        format_word(&self.group, &self.word)
    }
}

#[pyclass(name = "SingularBlock", module = "singular_bgg_py", frozen)]
struct PySingularBlock {
    inner: singular_bgg::SingularBlock,
    group: Py<PyWeylGroup>,
}

#[pymethods]
impl PySingularBlock {
    #[new]
    #[pyo3(signature = (group, singular=Vec::new()))]
    fn new(group: Py<PyWeylGroup>, singular: Vec<usize>) -> PyResult<Self> {
        let inner = singular_bgg::SingularBlock::new(group.get().inner.clone(), &singular).or_raise()?;
        Ok(PySingularBlock { inner, group })
    }

    #[getter]
    fn singular(&self) -> Vec<usize> {
        self.inner.singular().to_vec()
    }

    #[getter]
    fn group(&self, py: Python<'_>) -> Py<PyWeylGroup> {
        self.group.clone_ref(py)
    }

    fn w0_lambda(&self) -> PyElement {
        self.wrap(self.inner.w0_lambda())
    }

    /// Longest coset representatives, canonical order.
    fn max_reps(&self) -> Vec<PyElement> {
        self.inner.max_reps().into_iter().map(|w| self.wrap(w)).collect()
    }

    fn min_reps(&self) -> Vec<PyElement> {
        self.inner.min_reps().into_iter().map(|w| self.wrap(w)).collect()
    }

    fn is_max_rep(&self, w: &PyElement) -> PyResult<bool> {
        self.inner.is_max_rep(&w.inner).or_raise()
    }

    fn __repr__(&self) -> String {
        format!("SingularBlock({}, {:?})", self.inner.group().cartan(), self.inner.singular())
    }
}

impl PySingularBlock {
    fn wrap(&self, w: Element) -> PyElement {
        self.group.get().wrap(w)
    }
}

/// Kazhdan-Lusztig polynomials of a whole group.
#[pyclass(name = "KLTable", module = "singular_bgg_py", frozen)]
struct PyKLTable {
    inner: singular_bgg::KLTable,
}

#[pymethods]
impl PyKLTable {
    /// Builds the table, or loads it from `cache` when that file exists and
    /// writes it there otherwise.
    #[new]
    #[pyo3(signature = (group, cache=None))]
    fn new(py: Python<'_>, group: &PyWeylGroup, cache: Option<std::path::PathBuf>) -> PyResult<Self> {
        let g = group.inner.clone();
        let inner = py
            .detach(|| -> singular_bgg::Result<_> {
                match cache {
                    Some(path) if path.exists() => singular_bgg::KLTable::read_cache(g, std::fs::File::open(path)?),
                    Some(path) => {
                        let t = singular_bgg::KLTable::build(g)?;
                        t.write_cache(std::io::BufWriter::new(std::fs::File::create(path)?))?;
                        Ok(t)
                    }
                    None => singular_bgg::KLTable::build(g),
                }
            })
            .or_raise()?;
        Ok(PyKLTable { inner })
    }

    /// Coefficients of `P_{y,w}`, constant term first; empty for zero.
    fn kl_polynomial(&self, y: &PyElement, w: &PyElement) -> PyResult<Vec<i64>> {
        Ok(self.inner.kl_polynomial(&y.inner, &w.inner).or_raise()?.coeffs().to_vec())
    }

    fn mu(&self, y: &PyElement, w: &PyElement) -> PyResult<i64> {
        self.inner.mu_coefficient(&y.inner, &w.inner).or_raise()
    }

    fn distinct_polynomials(&self) -> usize {
        self.inner.distinct_polynomials().len()
    }
}

/// Non-Kostant longest representatives of the block of `singular`.
#[pyfunction]
#[pyo3(signature = (table, singular=Vec::new(), threads=None))]
fn nonkostant(py: Python<'_>, table: &PyKLTable, singular: Vec<usize>, threads: Option<usize>) -> PyResult<Vec<Vec<usize>>> {
    let t = &table.inner;
    let g = t.group().clone();
    let found = py.detach(|| nonkostant_block(t, &singular, threads)).or_raise()?;
    Ok(found.iter().map(|w| g.reduced_word(w)).collect())
}

#[pyfunction(name = "is_kostant")]
fn py_is_kostant(w: &PyElement, block: &PySingularBlock, table: &PyKLTable) -> PyResult<bool> {
    is_kostant(&w.inner, &block.inner, &table.inner).or_raise()
}

#[pyfunction(name = "s_category_has_bgg")]
fn py_s_category_has_bgg(w: &PyElement, block: &PySingularBlock, table: &PyKLTable) -> PyResult<bool> {
    s_category_has_bgg(&w.inner, &block.inner, &table.inner).or_raise()
}

/// Restricted Moebius function of two longest representatives.
#[pyfunction]
fn mobius(w: &PyElement, x: &PyElement, block: &PySingularBlock) -> PyResult<i64> {
    mobius_lambda(&w.inner, &x.inner, &block.inner).or_raise()
}

/// Strata of the support of `w`, as lists of reduced words.
#[pyfunction]
fn support(w: &PyElement, block: &PySingularBlock) -> PyResult<Vec<Vec<Vec<usize>>>> {
    Ok(support_x(&w.inner, &block.inner).or_raise()?.strata)
}

/// Coefficients of the singular KLV polynomial of `w <= x`.
#[pyfunction]
fn klv(table: &PyKLTable, block: &PySingularBlock, w: &PyElement, x: &PyElement) -> PyResult<Vec<i64>> {
    Ok(klv_dominant(&table.inner, &block.inner, &w.inner, &x.inner).or_raise()?.coeffs().to_vec())
}

/// The skeleton of the complex of `w` rendered as `"json"` or `"dot"`.
#[pyfunction]
#[pyo3(signature = (w, block, kind="singular", signed=false, format="json"))]
fn complex(w: &PyElement, block: &PySingularBlock, kind: &str, signed: bool, format: &str) -> PyResult<String> {
    let b = &block.inner;
    let sk = match kind {
        "singular" => singular_skeleton(&w.inner, b).or_raise()?,
        "regular" | "translated" => {
            let mut sk = regular_skeleton(&w.group, &w.inner).or_raise()?;
            if signed {
                sk = assign_signs(&sk).or_raise()?;
            }
            if kind == "translated" {
                sk = translate_skeleton(&sk, b).or_raise()?;
            }
            sk
        }
        _ => return Err(PyValueError::new_err(format!("unknown skeleton kind {kind:?}"))),
    };
    match format {
        "json" => Ok(to_json(&SkeletonJson::from_skeleton(&sk))),
        "dot" => Ok(emit_dot(&sk)),
        _ => Err(PyValueError::new_err(format!("unknown format {format:?}"))),
    }
}

#[pymodule]
pub fn singular_bgg_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWeylGroup>()?;
    m.add_class::<PyElement>()?;
    m.add_class::<PySingularBlock>()?;
    m.add_class::<PyKLTable>()?;
    m.add("ResourceError", m.py().get_type::<ResourceError>())?;
    m.add_function(wrap_pyfunction!(nonkostant, m)?)?;
    m.add_function(wrap_pyfunction!(py_is_kostant, m)?)?;
    m.add_function(wrap_pyfunction!(py_s_category_has_bgg, m)?)?;
    m.add_function(wrap_pyfunction!(mobius, m)?)?;
    m.add_function(wrap_pyfunction!(support, m)?)?;
    m.add_function(wrap_pyfunction!(klv, m)?)?;
    m.add_function(wrap_pyfunction!(complex, m)?)?;
    Ok(())
}
