//! Python bindings: `import superplane`.

use std::sync::Arc;

use pyo3::exceptions::{PyTypeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use superplane_core::algebra::{AlgebraKind, Element as CoreElement, Family, Relations};
use superplane_core::calculus;
use superplane_core::cli::{self, Cli, Command, ConventionArg, Derivation, Options, Suite, System};
use superplane_core::coeffs::Bindings;
use superplane_core::forms;
use superplane_core::hopf::{AntipodeConvention, CoStructure};
use superplane_core::report::{CheckRecord, Report as CoreReport};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_family(family: &str) -> PyResult<Family> {
    family.parse().map_err(|_| PyValueError::new_err(format!("unknown family {family:?}; use \"I\" or \"II\"")))
}

fn parse_convention(convention: &str) -> PyResult<ConventionArg> {
    match convention {
        "graded" => Ok(ConventionArg::Graded),
        "ungraded" => Ok(ConventionArg::Ungraded),
        other => Err(PyValueError::new_err(format!("unknown convention {other:?}; use \"graded\" or \"ungraded\""))),
    }
}

fn binding_strings(bindings: Option<&Bound<'_, PyDict>>) -> PyResult<Vec<String>> {
    let Some(d) = bindings else {
        return Ok(Vec::new());
    };
    d.iter()
        .map(|(k, v)| Ok(format!("{}={}", k.extract::<String>()?, v.str()?.to_str()?)))
        .collect()
}

fn parse_bindings(bindings: Option<&Bound<'_, PyDict>>) -> PyResult<Bindings> {
    cli::parse_bindings(&binding_strings(bindings)?).map_err(value_error)
}

/// One check of a report.
#[pyclass(frozen, get_all, skip_from_py_object, module = "superplane")]
#[derive(Clone)]
struct Check {
    name: String,
    paper_eq: String,
    status: String,
    witness: Option<String>,
}

#[pymethods]
impl Check {
    fn __repr__(&self) -> String {
        format!("Check({:?}, status={:?})", self.name, self.status)
    }
}

impl From<&CheckRecord> for Check {
    fn from(r: &CheckRecord) -> Check {
        Check {
            name: r.name.clone(),
            paper_eq: r.paper_eq.clone(),
            status: r.status.to_string(),
            witness: r.witness.clone(),
        }
    }
}

/// Result of a verification, solve or derive run.
#[pyclass(frozen, module = "superplane")]
struct Report {
    inner: CoreReport,
}

#[pymethods]
impl Report {
    #[getter]
    fn command(&self) -> &str {
        &self.inner.command
    }

    #[getter]
    fn family(&self) -> Option<&str> {
        self.inner.family.as_deref()
    }

    #[getter]
    fn seed(&self) -> Option<u64> {
        self.inner.seed
    }

    #[getter]
    fn checks(&self) -> Vec<Check> {
        self.inner.checks.iter().map(Check::from).collect()
    }

    /// True when no check failed.
    fn passed(&self) -> bool {
        !self.inner.failed()
    }

    fn failures(&self) -> Vec<Check> {
        self.inner.checks.iter().filter(|c| !c.passed()).map(Check::from).collect()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!(
            "Report({:?}, checks={}, passed={})",
            self.inner.command,
            self.inner.checks.len(),
            !self.inner.failed()
        )
    }
}

/// The differential algebra of a family, or its forms algebra with
/// `forms=True`. Bindings map parameter names to values, e.g. `{"s": "q*r"}`.
#[pyclass(frozen, module = "superplane")]
struct Algebra {
    costructure: Arc<CoStructure>,
    family: Family,
}

#[pymethods]
impl Algebra {
    #[new]
    #[pyo3(signature = (family = "I", bindings = None, forms = false, convention = "graded"))]
    fn new(family: &str, bindings: Option<&Bound<'_, PyDict>>, forms: bool, convention: &str) -> PyResult<Algebra> {
        let family = parse_family(family)?;
        let bindings = parse_bindings(bindings)?;
        let convention: AntipodeConvention = parse_convention(convention)?.into();
        let costructure = if forms {
            let rels = forms::omega_relations(family, &bindings).map_err(value_error)?;
            CoStructure::forms(&rels, convention)
        } else {
            let rels = Relations::differential(family, &bindings).map_err(value_error)?;
            CoStructure::differential(&rels, convention)
        }
        .map_err(value_error)?;
        Ok(Algebra {
            costructure: Arc::new(costructure),
            family,
        })
    }

    #[getter]
    fn family(&self) -> String {
        self.family.to_string()
    }

    #[getter]
    fn is_forms(&self) -> bool {
        self.costructure.relations().kind() == AlgebraKind::Forms
    }

    /// Parses an expression such as `"x*dx + 2*th"` into a normalised element.
    fn element(&self, expr: &str) -> PyResult<Element> {
        let parsed = cli::parse_expression(expr).map_err(value_error)?;
        let e = parsed.to_element(self.costructure.relations()).map_err(value_error)?;
        Ok(self.wrap(e.normalize()))
    }

    fn normalize(&self, expr: &str) -> PyResult<String> {
        Ok(self.element(expr)?.inner.to_string())
    }

    fn __repr__(&self) -> String {
        format!("Algebra({:?})", self.costructure.relations().label())
    }
}

impl Algebra {
    fn wrap(&self, inner: CoreElement) -> Element {
        Element {
            inner,
            costructure: Arc::clone(&self.costructure),
        }
    }
}

/// An element in normal form.
#[pyclass(frozen, module = "superplane")]
struct Element {
    inner: CoreElement,
    costructure: Arc<CoStructure>,
}

impl Element {
    fn with(&self, inner: CoreElement) -> Element {
        Element {
            inner: inner.normalize(),
            costructure: Arc::clone(&self.costructure),
        }
    }

    fn operand(&self, other: &Bound<'_, PyAny>) -> PyResult<CoreElement> {
        let rels = self.costructure.relations();
        if let Ok(e) = other.cast::<Element>() {
            let e = e.get();
            if !e.inner.relations().same_algebra(rels) {
                return Err(PyValueError::new_err("elements belong to different algebras"));
            }
            return Ok(e.inner.clone());
        }
        if let Ok(n) = other.extract::<i64>() {
            return Ok(CoreElement::scalar(rels, n.into()));
        }
        if let Ok(s) = other.extract::<String>() {
            let c = cli::parse_scalar(&s).map_err(value_error)?;
            return Ok(CoreElement::scalar(rels, c));
        }
        Err(PyTypeError::new_err("expected an Element, an int or a scalar string"))
    }
}

#[pymethods]
impl Element {
    fn __add__(&self, other: &Bound<'_, PyAny>) -> PyResult<Element> {
        Ok(self.with(&self.inner + &self.operand(other)?))
    }

    fn __radd__(&self, other: &Bound<'_, PyAny>) -> PyResult<Element> {
        Ok(self.with(&self.operand(other)? + &self.inner))
    }

    fn __sub__(&self, other: &Bound<'_, PyAny>) -> PyResult<Element> {
        Ok(self.with(&self.inner - &self.operand(other)?))
    }

    fn __rsub__(&self, other: &Bound<'_, PyAny>) -> PyResult<Element> {
        Ok(self.with(&self.operand(other)? - &self.inner))
    }

    fn __mul__(&self, other: &Bound<'_, PyAny>) -> PyResult<Element> {
        Ok(self.with(&self.inner * &self.operand(other)?))
    }

    fn __rmul__(&self, other: &Bound<'_, PyAny>) -> PyResult<Element> {
        Ok(self.with(&self.operand(other)? * &self.inner))
    }

    fn __neg__(&self) -> Element {
        self.with(-&self.inner)
    }

    fn __eq__(&self, other: &Bound<'_, PyAny>) -> bool {
        self.operand(other).is_ok_and(|o| o.normalize() == self.inner)
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.inner.to_string().hash(&mut h);
        h.finish()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Element({:?})", self.inner.to_string())
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    /// Exterior derivative.
    fn d(&self) -> PyResult<Element> {
        Ok(self.with(calculus::differentiate(&self.inner).map_err(value_error)?))
    }

    /// Coproduct, as text in `a (x) b` notation.
    fn coproduct(&self) -> String {
        self.costructure.coproduct(&self.inner).to_string()
    }

    fn counit(&self) -> String {
        self.costructure.counit(&self.inner).to_string()
    }

    fn antipode(&self) -> Element {
        self.with(self.costructure.antipode(&self.inner))
    }
}

fn options(
    family: Option<&str>,
    bindings: Option<&Bound<'_, PyDict>>,
    fuel: usize,
    seed: u64,
    convention: &str,
) -> PyResult<Options> {
    Ok(Options {
        family: family.map(parse_family).transpose()?,
        set: binding_strings(bindings)?,
        fuel,
        seed,
        json: false,
        convention: parse_convention(convention)?,
    })
}

fn execute(py: Python<'_>, command: Command, opts: Options) -> PyResult<Report> {
    let cli = Cli { command, opts };
    let inner = py.detach(|| cli::execute(&cli)).map_err(value_error)?;
    Ok(Report { inner })
}

/// Runs a verification suite: consistency, calculus, hopf, omega, braid or all.
#[pyfunction]
#[pyo3(signature = (suite, family = None, bindings = None, fuel = 200, seed = 0, convention = "graded"))]
fn verify(
    py: Python<'_>,
    suite: &str,
    family: Option<&str>,
    bindings: Option<&Bound<'_, PyDict>>,
    fuel: usize,
    seed: u64,
    convention: &str,
) -> PyResult<Report> {
    let suite = match suite {
        "consistency" => Suite::Consistency,
        "calculus" => Suite::Calculus,
        "hopf" => Suite::Hopf,
        "omega" => Suite::Omega,
        "braid" => Suite::Braid,
        "all" => Suite::All,
        other => return Err(PyValueError::new_err(format!("unknown suite {other:?}"))),
    };
    execute(py, Command::Verify { suite }, options(family, bindings, fuel, seed, convention)?)
}

/// Solves the consistency system for the calculus coefficients.
#[pyfunction]
fn solve_consistency(py: Python<'_>) -> PyResult<Report> {
    execute(py, Command::Solve { system: System::Consistency }, options(None, None, 0, 0, "graded")?)
}

/// Derives the two-form relations (`"twoforms"`) or the relations of the
/// forms algebra (`"forms"`).
#[pyfunction]
#[pyo3(signature = (what, family = None, bindings = None))]
fn derive(py: Python<'_>, what: &str, family: Option<&str>, bindings: Option<&Bound<'_, PyDict>>) -> PyResult<Report> {
    let what = match what {
        "twoforms" => Derivation::Twoforms,
        "forms" => Derivation::Forms,
        other => return Err(PyValueError::new_err(format!("unknown derivation {other:?}"))),
    };
    execute(py, Command::Derive { what }, options(family, bindings, 0, 0, "graded")?)
}

/// Runs the command line with `args` (without the program name) and returns
/// the exit code; output goes to standard output.
#[pyfunction]
fn main(args: Vec<String>) -> i32 {
    cli::run(std::iter::once("superplane".to_string()).chain(args))
}

#[pymodule]
fn superplane(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Algebra>()?;
    m.add_class::<Element>()?;
    m.add_class::<Report>()?;
    m.add_class::<Check>()?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(solve_consistency, m)?)?;
    m.add_function(wrap_pyfunction!(derive, m)?)?;
    m.add_function(wrap_pyfunction!(main, m)?)?;
    Ok(())
}
