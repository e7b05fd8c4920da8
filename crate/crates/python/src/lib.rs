//! Python bindings: processes, strategies and plays, and the checks
//! relating them. Budgets are node counts; every verdict may come back
//! as `"Unknown"` when the budget runs out.

use std::fmt::Display;

use pigame::alphabet::{project_pi, project_sd, weak_bisim, ALts, AVertex, Bisim};
use pigame::crosscheck::{check_theorem1 as cross_check, summary};
use pigame::lts::{Budget, Verdict};
use pigame::play::{normalize_play, parse_play, play_to_dot, play_to_text, views_of, Play};
use pigame::position::Position;
use pigame::process::{debruijn, parse_file, pretty, TypedProcess};
use pigame::reduction::{bot_pi, explore_pi, fair_equiv_pi as equiv_pi, normalize, Equivalence, PiLabel};
use pigame::sd::{bot_general, fair_equiv_d, succ, SDLabel, SDState};
use pigame::strategy::{accepts_play, parse_strategy_file, strategy_file, translate, PositionStrategy, Strategy};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(pigame, PigameError, PyValueError, "Malformed input or an ill-typed operation.");

const DEFAULT_BUDGET: usize = 100_000;

fn err(e: pigame::error::Error) -> PyErr {
    PigameError::new_err(e.to_string())
}

fn nodes(n: usize) -> PyResult<Budget> {
    if n == 0 {
        return Err(PyValueError::new_err("budget must be positive"));
    }
    Ok(Budget::nodes(n))
}

fn verdict(v: Verdict) -> &'static str {
    v.name()
}

/// A process of the calculus, parsed from `.pi` text.
#[pyclass(name = "Process", module = "pigame", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyProcess {
    inner: TypedProcess,
}

#[pymethods]
impl PyProcess {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyProcess { inner: parse_file(text).map_err(err)?.process })
    }

    /// Number of free channels.
    #[getter]
    fn ctx(&self) -> usize {
        self.inner.ctx
    }

    fn debruijn(&self) -> String {
        debruijn(&self.inner.process)
    }

    fn translate(&self) -> PyStrategy {
        PyStrategy { inner: Strategy::single(translate(&self.inner)) }
    }

    /// Whether every reduct can still tick: a dict with `verdict`,
    /// `explored` and, for `"NotInBot"`, a witness path of states.
    #[pyo3(signature = (budget = DEFAULT_BUDGET))]
    fn bot<'py>(&self, py: Python<'py>, budget: usize) -> PyResult<Bound<'py, PyDict>> {
        let r = bot_pi(&normalize(&self.inner), nodes(budget)?);
        let d = PyDict::new(py);
        d.set_item("verdict", verdict(r.verdict))?;
        d.set_item("explored", r.explored)?;
        d.set_item("witness", r.witness.iter().map(|s| s.to_string()).collect::<Vec<_>>())?;
        Ok(d)
    }

    /// The reduction graph: `states`, `edges` as `(from, label, to)` and
    /// whether exploration finished.
    #[pyo3(signature = (budget = DEFAULT_BUDGET))]
    fn reduce<'py>(&self, py: Python<'py>, budget: usize) -> PyResult<Bound<'py, PyDict>> {
        let g = explore_pi(&normalize(&self.inner), nodes(budget)?);
        let label = |l: PiLabel| match l {
            PiLabel::Tau => "tau",
            PiLabel::Heart => "tick",
            PiLabel::Id => "id",
        };
        let d = PyDict::new(py);
        d.set_item("states", g.states.iter().map(|s| s.to_string()).collect::<Vec<_>>())?;
        d.set_item("edges", g.edges.iter().map(|&(i, l, j)| (i, label(l), j)).collect::<Vec<_>>())?;
        d.set_item("saturated", g.saturated)?;
        Ok(d)
    }

    fn __str__(&self) -> String {
        pretty(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Process({:?})", pretty(&self.inner))
    }
}

/// A sum of definite strategies on one player.
#[pyclass(name = "Strategy", module = "pigame", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyStrategy {
    inner: Strategy,
}

impl PyStrategy {
    fn position_strategy(&self) -> PyResult<PositionStrategy> {
        PositionStrategy::new(Position::single(self.inner.arity), vec![self.inner.clone()]).map_err(err)
    }

    fn state(&self) -> PyResult<SDState> {
        match self.inner.summands.as_slice() {
            [d] => SDState::new(Position::single(d.arity()), vec![d.clone()]).map_err(err),
            s => Err(PigameError::new_err(format!("expected a definite strategy, found a sum of {}", s.len()))),
        }
    }
}

#[pymethods]
impl PyStrategy {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyStrategy { inner: parse_strategy_file(text).map_err(err)?.strategy })
    }

    #[getter]
    fn arity(&self) -> usize {
        self.inner.arity
    }

    fn __len__(&self) -> usize {
        self.inner.summands.len()
    }

    /// The table of a definite strategy: each basic seed with the
    /// summands it leads to.
    fn table(&self) -> PyResult<Vec<(String, Vec<String>)>> {
        let d = &self.state()?.assign[0];
        let t = d.resolve().map_err(err)?;
        Ok(t.entries.iter().map(|(b, s)| (b.to_string(), s.summands.iter().map(|d| d.to_string()).collect())).collect())
    }

    /// Transitions of a definite strategy, lone inputs and outputs included.
    fn step<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        let label = |l: SDLabel| match l {
            SDLabel::Silent => "silent",
            SDLabel::Heart => "tick",
            SDLabel::Open => "open",
            SDLabel::Id => "id",
        };
        let mut out = Vec::new();
        for e in succ(&self.state()?).map_err(err)? {
            let Some(mv) = &e.mv else { continue };
            let d = PyDict::new(py);
            d.set_item("seed", mv.kind.to_string())?;
            d.set_item("acting", mv.acting.clone())?;
            d.set_item("choices", e.choices.clone())?;
            d.set_item("label", label(e.label))?;
            d.set_item("target", e.target.to_string())?;
            out.push(d);
        }
        Ok(out)
    }

    /// `⊥` membership; a sum is in `⊥` when each of its summands is.
    #[pyo3(signature = (budget = DEFAULT_BUDGET))]
    fn bot(&self, budget: usize) -> PyResult<&'static str> {
        Ok(verdict(bot_general(&self.position_strategy()?, nodes(budget)?).map_err(err)?))
    }

    fn accepts(&self, play: &PyPlay) -> PyResult<bool> {
        accepts_play(&self.position_strategy()?, &play.inner).map_err(err)
    }

    fn __str__(&self) -> String {
        strategy_file(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Strategy({:?})", self.inner.to_string())
    }
}

/// A play: a position and a sequence of moves.
#[pyclass(name = "Play", module = "pigame", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyPlay {
    inner: Play,
}

#[pymethods]
impl PyPlay {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyPlay { inner: parse_play(text).map_err(err)? })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// Each move as its seed and acting players.
    fn moves(&self) -> Vec<(String, Vec<usize>)> {
        self.inner.moves().into_iter().map(|(k, a)| (k.to_string(), a)).collect()
    }

    fn normalize(&self) -> PyResult<PyPlay> {
        Ok(PyPlay { inner: normalize_play(&self.inner).map_err(err)? })
    }

    fn views(&self, player: usize) -> PyResult<Vec<String>> {
        Ok(views_of(&self.inner, player).map_err(err)?.iter().map(|v| v.to_string()).collect())
    }

    fn to_dot(&self) -> String {
        play_to_dot(&self.inner)
    }

    fn __str__(&self) -> String {
        play_to_text(&self.inner)
    }
}

fn equivalence<'py, T: Display>(py: Python<'py>, e: &Equivalence<T>) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    match e {
        Equivalence::Distinguished { test, left, right } => {
            d.set_item("outcome", "Distinguished")?;
            d.set_item("test", test.to_string())?;
            d.set_item("verdicts", (verdict(*left), verdict(*right)))?;
        }
        Equivalence::AgreeUpTo { k, tests } => {
            d.set_item("outcome", "AgreeUpTo")?;
            d.set_item("k", k)?;
            d.set_item("tests", tests)?;
        }
        Equivalence::Unknown { k, tests, undecided } => {
            d.set_item("outcome", "Unknown")?;
            d.set_item("k", k)?;
            d.set_item("tests", tests)?;
            d.set_item("undecided", undecided)?;
        }
    }
    d.set_item("summary", summary(e))?;
    Ok(d)
}

/// Fair testing of two processes on every test of size at most `k`.
#[pyfunction]
#[pyo3(signature = (p, q, k = 1, budget = DEFAULT_BUDGET))]
fn fair_equiv_pi<'py>(py: Python<'py>, p: &PyProcess, q: &PyProcess, k: usize, budget: usize) -> PyResult<Bound<'py, PyDict>> {
    equivalence(py, &equiv_pi(&p.inner, &q.inner, k, nodes(budget)?).map_err(err)?)
}

/// Fair testing of two strategies on every test of size at most `k`.
#[pyfunction]
#[pyo3(signature = (s, t, k = 1, budget = DEFAULT_BUDGET))]
fn fair_equiv_sd<'py>(py: Python<'py>, s: &PyStrategy, t: &PyStrategy, k: usize, budget: usize) -> PyResult<Bound<'py, PyDict>> {
    let e = fair_equiv_d(&s.position_strategy()?, &t.position_strategy()?, k, nodes(budget)?).map_err(err)?;
    equivalence(py, &e)
}

/// Runs the same tests on two processes and on their translations.
#[pyfunction]
#[pyo3(signature = (p, q, k = 1, budget = DEFAULT_BUDGET))]
fn check_theorem1<'py>(py: Python<'py>, p: &PyProcess, q: &PyProcess, k: usize, budget: usize) -> PyResult<Bound<'py, PyDict>> {
    let r = cross_check(&p.inner, &q.inner, k, nodes(budget)?).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("tests", r.rows.len())?;
    d.set_item("undecided", r.rows.iter().filter(|row| !row.is_exact()).count())?;
    d.set_item("mismatches", r.mismatches().map(|row| row.test.to_string()).collect::<Vec<_>>())?;
    d.set_item("agrees", r.agrees())?;
    d.set_item("processes", summary(&r.pi))?;
    d.set_item("strategies", summary(&r.sd))?;
    Ok(d)
}

#[derive(FromPyObject)]
enum Side {
    Process(PyProcess),
    Strategy(PyStrategy),
}

impl Side {
    fn project(&self, budget: Budget) -> PyResult<ALts> {
        match self {
            Side::Process(p) => project_pi(&p.inner, &AVertex::full(p.inner.ctx), budget).map_err(err),
            Side::Strategy(s) => {
                let st = s.state()?;
                project_sd(&st, &AVertex::full(st.position.channels), budget).map_err(err)
            }
        }
    }
}

/// Weak bisimilarity over `A` of a process and `other`, by default its
/// translation. Returns `result` and, when not bisimilar, a `witness`
/// trace of labels.
#[pyfunction]
#[pyo3(signature = (p, other = None, budget = DEFAULT_BUDGET))]
fn bisim_a<'py>(py: Python<'py>, p: PyProcess, other: Option<Side>, budget: usize) -> PyResult<Bound<'py, PyDict>> {
    let budget = nodes(budget)?;
    let left = Side::Process(p.clone()).project(budget)?;
    let right = match other {
        Some(side) => side.project(budget)?,
        None => Side::Strategy(p.translate()).project(budget)?,
    };
    let d = PyDict::new(py);
    match weak_bisim(&left, &right).map_err(err)? {
        Bisim::Bisimilar => d.set_item("result", "Bisimilar")?,
        Bisim::NotBisimilar { witness } => {
            d.set_item("result", "NotBisimilar")?;
            d.set_item("witness", witness.iter().map(|l| l.to_string()).collect::<Vec<_>>())?;
        }
        Bisim::Unknown => d.set_item("result", "Unknown")?,
    }
    Ok(d)
}

#[pymodule]
#[pyo3(name = "pigame")]
pub fn pigame_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("PigameError", m.py().get_type::<PigameError>())?;
    m.add_class::<PyProcess>()?;
    m.add_class::<PyStrategy>()?;
    m.add_class::<PyPlay>()?;
    m.add_function(wrap_pyfunction!(fair_equiv_pi, m)?)?;
    m.add_function(wrap_pyfunction!(fair_equiv_sd, m)?)?;
    m.add_function(wrap_pyfunction!(check_theorem1, m)?)?;
    m.add_function(wrap_pyfunction!(bisim_a, m)?)?;
    Ok(())
}
