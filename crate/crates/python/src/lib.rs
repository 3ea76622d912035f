//! Python bindings. Extended reals cross the boundary as floats, with
//! `float("inf")` for ∞; sets are lists of atom indices.

use maxmeasure::integral::{measure_with_density as mwd, sweep_integral};
use maxmeasure::maxitive::{atom_decomposition, classify, disjoint_variation};
use maxmeasure::possibility::{conditional as cond, lp_limit_conditional, PossibilitySpace, SubAlgebra};
use maxmeasure::pseudo_mul::{default_grid, verify_axioms};
use maxmeasure::radon_nikodym::rn_density as rn;
use maxmeasure::supmeasure::{mc_frechet_check, sample_many as many, sample_supmeasure, ControlMeasure, SampleMode};
use maxmeasure::{invariants, AdditiveMeasure, AtomSet, ExtReal, MaxitiveMeasure, MeasurableFn, PseudoMul, SemigroupOp, SetFn, SetFunction, Space};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde::Serialize;
use serde_json::Value;

create_exception!(maxmeasure_py, MaxMeasureError, PyValueError);

fn err(e: maxmeasure::Error) -> PyErr {
    MaxMeasureError::new_err(format!("[{}] {e}", e.code()))
}

fn ext(v: f64) -> PyResult<ExtReal> {
    ExtReal::new(v).map_err(err)
}

fn exts(v: &[f64]) -> PyResult<Vec<ExtReal>> {
    v.iter().map(|&x| ext(x)).collect()
}

fn floats(v: &[ExtReal]) -> Vec<f64> {
    v.iter().map(|x| x.get()).collect()
}

fn function(v: &[f64]) -> PyResult<MeasurableFn> {
    Ok(MeasurableFn::new(exts(v)?))
}

fn set(k: usize, atoms: Option<Vec<usize>>) -> PyResult<AtomSet> {
    match atoms {
        None => Ok(AtomSet::full(k)),
        Some(a) => match a.iter().find(|&&i| i >= k) {
            Some(i) => Err(MaxMeasureError::new_err(format!("atom {i} out of range for {k} atoms"))),
            None => Ok(AtomSet::from_atoms(a)),
        },
    }
}

fn atoms_of(s: AtomSet) -> Vec<usize> {
    s.atoms().collect()
}

fn pseudo_mul(name: &str) -> PyResult<PseudoMul> {
    PseudoMul::from_name(name).map_err(err)
}

fn semigroup(name: &str) -> PyResult<SemigroupOp> {
    SemigroupOp::from_name(name).map_err(err)
}

fn subalgebra(k: usize, blocks: Vec<Vec<usize>>) -> PyResult<SubAlgebra> {
    let blocks = blocks.into_iter().map(|b| set(k, Some(b))).collect::<PyResult<Vec<_>>>()?;
    SubAlgebra::new(k, blocks).map_err(err)
}

fn control(masses: Vec<f64>) -> PyResult<ControlMeasure> {
    ControlMeasure::new(masses).map_err(err)
}

fn mode(name: &str, eps: f64) -> PyResult<SampleMode> {
    match name {
        "exact" => Ok(SampleMode::Exact),
        "poisson" => Ok(SampleMode::poisson(eps)),
        other => Err(MaxMeasureError::new_err(format!("unknown sampling mode `{other}`"))),
    }
}

/// JSON to Python, mapping the string "inf" to `float("inf")`.
fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any(),
            None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) if s == "inf" => f64::INFINITY.into_pyobject(py)?.into_any(),
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(a) => {
            let list = PyList::empty(py);
            for x in a {
                list.append(to_py(py, x)?)?;
            }
            list.into_any()
        }
        Value::Object(o) => {
            let dict = PyDict::new(py);
            for (k, x) in o {
                dict.set_item(k, to_py(py, x)?)?;
            }
            dict.into_any()
        }
    })
}

fn report<'py>(py: Python<'py>, r: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let v = serde_json::to_value(r).map_err(|e| MaxMeasureError::new_err(e.to_string()))?;
    to_py(py, &v)
}

/// A finite space: a ground set partitioned into atoms.
#[pyclass(name = "Space", frozen)]
struct PySpace(Space);

#[pymethods]
impl PySpace {
    #[new]
    #[pyo3(signature = (ground, atoms=None))]
    fn new(ground: Vec<String>, atoms: Option<Vec<Vec<String>>>) -> PyResult<Self> {
        let space = match atoms {
            Some(blocks) => Space::new(&ground, &blocks),
            None => Space::discrete(&ground),
        };
        space.map(PySpace).map_err(err)
    }

    #[getter]
    fn atom_count(&self) -> usize {
        self.0.atom_count()
    }

    #[getter]
    fn ground(&self) -> Vec<String> {
        self.0.ground().to_vec()
    }

    fn blocks(&self) -> Vec<Vec<String>> {
        self.0.blocks().into_iter().map(|b| b.into_iter().map(str::to_owned).collect()).collect()
    }

    /// Atom indices of a `+`-joined set of ground labels.
    fn parse_set(&self, text: &str) -> PyResult<Vec<usize>> {
        self.0.parse_set(text).map(atoms_of).map_err(err)
    }

    fn format_set(&self, atoms: Vec<usize>) -> PyResult<String> {
        Ok(self.0.format_set(set(self.0.atom_count(), Some(atoms))?))
    }

    fn __repr__(&self) -> String {
        format!("Space({} atoms)", self.0.atom_count())
    }
}

/// `ν(B) = max_{a ∈ B} ν(a)` from its atom values.
#[pyclass(name = "MaxitiveMeasure", frozen)]
struct PyMaxitive(MaxitiveMeasure);

#[pymethods]
impl PyMaxitive {
    #[new]
    fn new(values: Vec<f64>) -> PyResult<Self> {
        Ok(PyMaxitive(MaxitiveMeasure::new(exts(&values)?)))
    }

    #[getter]
    fn values(&self) -> Vec<f64> {
        floats(self.0.values())
    }

    fn __len__(&self) -> usize {
        self.0.atom_count()
    }

    fn __call__(&self, atoms: Vec<usize>) -> PyResult<f64> {
        Ok(self.0.eval(set(self.0.atom_count(), Some(atoms))?).get())
    }

    fn is_normed(&self) -> bool {
        self.0.is_normed()
    }

    fn classify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let table = SetFunction::tabulate(&self.0).map_err(err)?;
        report(py, &classify(&table).map_err(err)?)
    }

    /// The `ν`-atoms, as atom index lists.
    fn decompose(&self) -> PyResult<Vec<Vec<usize>>> {
        let d = atom_decomposition(&self.0).map_err(err)?;
        Ok(d.atoms.into_iter().map(atoms_of).collect())
    }

    fn variation(&self) -> PyResult<f64> {
        Ok(disjoint_variation(&self.0).map_err(err)?.value.get())
    }

    #[pyo3(signature = (f, atoms=None))]
    fn esssup(&self, f: Vec<f64>, atoms: Option<Vec<usize>>) -> PyResult<f64> {
        let k = self.0.atom_count();
        if f.len() != k {
            return Err(err(maxmeasure::Error::DimensionMismatch { expected: k, found: f.len() }));
        }
        Ok(self.0.essential_supremum(&function(&f)?, set(k, atoms)?).get())
    }

    fn __repr__(&self) -> String {
        format!("MaxitiveMeasure({:?})", self.values())
    }
}

/// `s ⊙ t`.
#[pyfunction]
fn op_eval(op: &str, s: f64, t: f64) -> PyResult<f64> {
    Ok(semigroup(op)?.eval(ext(s)?, ext(t)?).get())
}

/// `(r/s)_⊙`.
#[pyfunction]
fn residual(op: &str, r: f64, s: f64) -> PyResult<f64> {
    semigroup(op)?.residual(ext(r)?, ext(s)?).map(ExtReal::get).map_err(err)
}

#[pyfunction]
fn verify_op<'py>(py: Python<'py>, op: &str) -> PyResult<Bound<'py, PyAny>> {
    report(py, &verify_axioms(&semigroup(op)?, &default_grid()))
}

/// `∫_B f ⊙ dν`, over the whole space when `atoms` is omitted.
#[pyfunction]
#[pyo3(signature = (op, f, nu, atoms=None))]
fn integrate(op: &str, f: Vec<f64>, nu: &PyMaxitive, atoms: Option<Vec<usize>>) -> PyResult<f64> {
    let k = nu.0.atom_count();
    if f.len() != k {
        return Err(err(maxmeasure::Error::DimensionMismatch { expected: k, found: f.len() }));
    }
    Ok(sweep_integral(&pseudo_mul(op)?, &function(&f)?, &nu.0, set(k, atoms)?).get())
}

#[pyfunction]
fn rn_density(op: &str, nu: &PyMaxitive, tau: &PyMaxitive) -> PyResult<Vec<f64>> {
    rn(&pseudo_mul(op)?, &nu.0, &tau.0).map(|c| floats(c.values())).map_err(err)
}

#[pyfunction]
fn measure_with_density(op: &str, c: Vec<f64>, tau: &PyMaxitive) -> PyResult<PyMaxitive> {
    mwd(&pseudo_mul(op)?, &function(&c)?, &tau.0).map(PyMaxitive).map_err(err)
}

/// `Σ[X|𝓕]` with `𝓕` generated by `blocks`.
#[pyfunction]
fn conditional(op: &str, pi: &PyMaxitive, x: Vec<f64>, blocks: Vec<Vec<usize>>) -> PyResult<Vec<f64>> {
    let p = PossibilitySpace::new(pi.0.clone()).map_err(err)?;
    let f = subalgebra(p.atom_count(), blocks)?;
    cond(&pseudo_mul(op)?, &p, &function(&x)?, &f).map(|r| floats(r.y.values())).map_err(err)
}

/// Classical `E[X^p|𝓕]^{1/p}` against the idempotent conditional.
#[pyfunction]
#[pyo3(signature = (m, x, blocks, ps=vec![1.0, 2.0, 5.0, 10.0, 50.0, 200.0]))]
fn lp_limit<'py>(py: Python<'py>, m: Vec<f64>, x: Vec<f64>, blocks: Vec<Vec<usize>>, ps: Vec<f64>) -> PyResult<Bound<'py, PyAny>> {
    let m = AdditiveMeasure::new(exts(&m)?);
    let f = subalgebra(m.atom_count(), blocks)?;
    report(py, &lp_limit_conditional(&m, &function(&x)?, &f, &ps).map_err(err)?)
}

/// Atom values of one realisation of a `p`-Fréchet random sup-measure.
#[pyfunction]
#[pyo3(signature = (masses, p=2.0, mode="exact", eps=1e-3, seed=0, stream=0))]
fn sample(masses: Vec<f64>, p: f64, mode: &str, eps: f64, seed: u64, stream: u64) -> PyResult<Vec<f64>> {
    let s = sample_supmeasure(&control(masses)?, p, self::mode(mode, eps)?, seed, stream).map_err(err)?;
    Ok(floats(&s.values))
}

#[pyfunction]
#[pyo3(signature = (masses, n, p=2.0, mode="exact", eps=1e-3, seed=0, stream=0))]
fn sample_many(masses: Vec<f64>, n: usize, p: f64, mode: &str, eps: f64, seed: u64, stream: u64) -> PyResult<Vec<Vec<f64>>> {
    many(&control(masses)?, p, self::mode(mode, eps)?, n, seed, stream).map_err(err)
}

#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (masses, f, n, p=2.0, atoms=None, seed=0, eps=None))]
fn frechet_check<'py>(
    py: Python<'py>,
    masses: Vec<f64>,
    f: Vec<f64>,
    n: usize,
    p: f64,
    atoms: Option<Vec<usize>>,
    seed: u64,
    eps: Option<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let m = control(masses)?;
    let b = set(m.atom_count(), atoms)?;
    report(py, &mc_frechet_check(&m, p, b, &function(&f)?, n, seed, eps).map_err(err)?)
}

/// Runs the invariant suite; `filters` are ids or module names.
#[pyfunction]
#[pyo3(signature = (seed=7, filters=vec![]))]
fn run_suite<'py>(py: Python<'py>, seed: u64, filters: Vec<String>) -> PyResult<Bound<'py, PyAny>> {
    let f: Vec<&str> = filters.iter().map(String::as_str).collect();
    report(py, &invariants::run(&f, seed))
}

#[pymodule]
fn maxmeasure_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("MaxMeasureError", m.py().get_type::<MaxMeasureError>())?;
    m.add_class::<PySpace>()?;
    m.add_class::<PyMaxitive>()?;
    m.add_function(wrap_pyfunction!(op_eval, m)?)?;
    m.add_function(wrap_pyfunction!(residual, m)?)?;
    m.add_function(wrap_pyfunction!(verify_op, m)?)?;
    m.add_function(wrap_pyfunction!(integrate, m)?)?;
    m.add_function(wrap_pyfunction!(rn_density, m)?)?;
    m.add_function(wrap_pyfunction!(measure_with_density, m)?)?;
    m.add_function(wrap_pyfunction!(conditional, m)?)?;
    m.add_function(wrap_pyfunction!(lp_limit, m)?)?;
    m.add_function(wrap_pyfunction!(sample, m)?)?;
    m.add_function(wrap_pyfunction!(sample_many, m)?)?;
    m.add_function(wrap_pyfunction!(frechet_check, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
