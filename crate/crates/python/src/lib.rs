use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use betarate_core as core;
use core::bayes::FTermBackend;
use core::sequential::{self as seq, Prefactor};

fn to_py<T>(r: core::Result<T>) -> PyResult<T> {
    r.map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Beta posterior `Beta(alpha, beta)` of a win/loss process.
#[pyclass(name = "BetaPosterior", module = "betarate", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyBetaPosterior(core::BetaPosterior);

#[pymethods]
impl PyBetaPosterior {
    #[new]
    fn new(alpha: u64, beta: u64) -> PyResult<Self> {
        to_py(core::BetaPosterior::new(alpha, beta)).map(Self)
    }

    /// Posterior after `wins` and `losses` under a uniform prior.
    #[staticmethod]
    fn from_counts(wins: i64, losses: i64) -> PyResult<Self> {
        to_py(core::posterior_from_counts(wins, losses)).map(Self)
    }

    #[getter]
    fn alpha(&self) -> u64 {
        self.0.alpha()
    }

    #[getter]
    fn beta(&self) -> u64 {
        self.0.beta()
    }

    fn mean(&self) -> f64 {
        self.0.mean()
    }

    fn __repr__(&self) -> String {
        format!("BetaPosterior(alpha={}, beta={})", self.0.alpha(), self.0.beta())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

#[pyclass(name = "ComparisonResult", module = "betarate", frozen)]
struct PyComparisonResult(core::ComparisonResult);

#[pymethods]
impl PyComparisonResult {
    #[getter]
    fn probability(&self) -> f64 {
        self.0.probability
    }

    #[getter]
    fn method(&self) -> &'static str {
        self.0.method.as_str()
    }

    #[getter]
    fn terms_evaluated(&self) -> u64 {
        self.0.terms_evaluated
    }

    #[getter]
    fn cancellation_flag(&self) -> bool {
        self.0.cancellation_flag
    }

    fn __repr__(&self) -> String {
        format!(
            "ComparisonResult(probability={}, method='{}', terms_evaluated={}, cancellation_flag={})",
            self.0.probability,
            self.0.method.as_str(),
            self.0.terms_evaluated,
            if self.0.cancellation_flag { "True" } else { "False" }
        )
    }
}

fn ratio(gamma: f64) -> PyResult<core::PayoutRatio> {
    to_py(core::PayoutRatio::new(gamma))
}

#[pyfunction]
fn pr_rate_greater(a: PyBetaPosterior, b: PyBetaPosterior) -> PyResult<PyComparisonResult> {
    to_py(core::pr_rate_greater(a.0, b.0)).map(PyComparisonResult)
}

/// `Pr(phi_B > gamma * phi_A)`. `backend` is "series", "jacobi" or "cross_checked".
#[pyfunction]
#[pyo3(signature = (a, b, gamma, backend = "series"))]
fn pr_scaled_rate_greater(
    a: PyBetaPosterior,
    b: PyBetaPosterior,
    gamma: f64,
    backend: &str,
) -> PyResult<PyComparisonResult> {
    let backend = match backend {
        "series" => FTermBackend::Series,
        "jacobi" => FTermBackend::Jacobi,
        "cross_checked" => FTermBackend::CrossChecked,
        other => return Err(PyValueError::new_err(format!("unknown backend {other:?}"))),
    };
    to_py(core::bayes::pr_scaled_rate_greater_with(a.0, b.0, ratio(gamma)?, backend))
        .map(PyComparisonResult)
}

#[pyfunction]
fn pr_scaled_double_sum(a: PyBetaPosterior, b: PyBetaPosterior, gamma: f64) -> PyResult<PyComparisonResult> {
    to_py(core::pr_scaled_double_sum(a.0, b.0, ratio(gamma)?)).map(PyComparisonResult)
}

#[pyfunction]
#[pyo3(signature = (a, b, gamma, n_samples, seed = 0))]
fn mc_oracle(
    py: Python<'_>,
    a: PyBetaPosterior,
    b: PyBetaPosterior,
    gamma: f64,
    n_samples: u64,
    seed: u64,
) -> PyResult<PyComparisonResult> {
    let gamma = ratio(gamma)?;
    let r = py.detach(|| core::mc_oracle(a.0, b.0, gamma, n_samples, seed));
    to_py(r).map(PyComparisonResult)
}

/// Returns "prefer_b", "prefer_a" or "undecided".
#[pyfunction]
fn decide(a: PyBetaPosterior, b: PyBetaPosterior, gamma: f64, threshold: f64) -> PyResult<&'static str> {
    let d = to_py(core::decide(a.0, b.0, ratio(gamma)?, threshold))?;
    Ok(match d {
        core::Decision::PreferB => "prefer_b",
        core::Decision::PreferA => "prefer_a",
        core::Decision::Undecided => "undecided",
    })
}

#[pyclass(name = "ContingencyTable", module = "betarate", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyContingencyTable(core::ContingencyTable);

#[pymethods]
impl PyContingencyTable {
    #[new]
    fn new(wins_a: u64, losses_a: u64, wins_b: u64, losses_b: u64) -> Self {
        Self(core::ContingencyTable::new(wins_a, losses_a, wins_b, losses_b))
    }

    #[getter]
    fn wins_a(&self) -> u64 {
        self.0.wins_a
    }

    #[getter]
    fn losses_a(&self) -> u64 {
        self.0.losses_a
    }

    #[getter]
    fn wins_b(&self) -> u64 {
        self.0.wins_b
    }

    #[getter]
    fn losses_b(&self) -> u64 {
        self.0.losses_b
    }

    #[getter]
    fn m_tot(&self) -> u64 {
        self.0.m_tot()
    }

    fn __repr__(&self) -> String {
        let t = self.0;
        format!(
            "ContingencyTable(wins_a={}, losses_a={}, wins_b={}, losses_b={})",
            t.wins_a, t.losses_a, t.wins_b, t.losses_b
        )
    }
}

#[pyfunction]
fn fisher_table_probability(table: PyContingencyTable) -> PyResult<f64> {
    to_py(core::fisher_table_probability(&table.0))
}

/// `tail` is "less", "greater" or "two_sided".
#[pyfunction]
#[pyo3(signature = (table, tail = "greater"))]
fn fisher_exact_p(table: PyContingencyTable, tail: &str) -> PyResult<f64> {
    let tail = match tail {
        "less" => core::Tail::SingleLess,
        "greater" => core::Tail::SingleGreater,
        "two_sided" => core::Tail::TwoSidedMinLikelihood,
        other => return Err(PyValueError::new_err(format!("unknown tail {other:?}"))),
    };
    to_py(core::fisher_exact_p(&table.0, tail))
}

/// `convention` is "beta_of_counts" or "factorial".
#[pyfunction]
#[pyo3(signature = (table, convention = "beta_of_counts"))]
fn log_likelihood(table: PyContingencyTable, convention: &str) -> PyResult<f64> {
    let convention = match convention {
        "beta_of_counts" => core::LikelihoodConvention::BetaOfCounts,
        "factorial" => core::LikelihoodConvention::Factorial,
        other => return Err(PyValueError::new_err(format!("unknown convention {other:?}"))),
    };
    to_py(core::log_likelihood(&table.0, convention))
}

/// Returns `(d_stat, p_value)`.
#[pyfunction]
fn wilks_test(ell_h1: f64, ell_h0: f64, dof_delta: u32) -> PyResult<(f64, f64)> {
    to_py(core::wilks_test(ell_h1, ell_h0, dof_delta))
}

#[pyclass(name = "KsResult", module = "betarate", frozen, get_all)]
struct PyKsResult {
    d_stat: f64,
    threshold: f64,
    reject: bool,
    m_a: usize,
    m_b: usize,
}

#[pyfunction]
#[pyo3(signature = (samples_a, samples_b, alpha = 0.05))]
fn ks_two_sample(samples_a: Vec<f64>, samples_b: Vec<f64>, alpha: f64) -> PyResult<PyKsResult> {
    let r = to_py(core::ks_two_sample(&samples_a, &samples_b, alpha))?;
    Ok(PyKsResult {
        d_stat: r.d_stat,
        threshold: r.threshold,
        reject: r.reject,
        m_a: r.m_a,
        m_b: r.m_b,
    })
}

fn prefactor(name: &str) -> PyResult<Prefactor> {
    match name {
        "margin" => Ok(Prefactor::MarginOverStep),
        "literal" => Ok(Prefactor::LiteralTotalWinsOverStep),
        other => Err(PyValueError::new_err(format!("unknown prefactor {other:?}"))),
    }
}

fn lift(delta: f64) -> PyResult<seq::Lift> {
    to_py(seq::Lift::new(delta))
}

#[pyclass(name = "SequentialConfig", module = "betarate", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PySequentialConfig(seq::SequentialConfig);

#[pymethods]
impl PySequentialConfig {
    /// `d_star` defaults to `ceil(2 sqrt(n_max))`.
    #[new]
    #[pyo3(signature = (n_max, d_star = None))]
    fn new(n_max: u64, d_star: Option<u64>) -> PyResult<Self> {
        let c = match d_star {
            Some(d) => seq::SequentialConfig::new(n_max, d),
            None => seq::SequentialConfig::from_budget(n_max),
        };
        to_py(c).map(Self)
    }

    #[getter]
    fn n_max(&self) -> u64 {
        self.0.n_max()
    }

    #[getter]
    fn d_star(&self) -> u64 {
        self.0.d_star()
    }

    fn __repr__(&self) -> String {
        format!("SequentialConfig(n_max={}, d_star={})", self.0.n_max(), self.0.d_star())
    }
}

#[pyclass(name = "SequentialState", module = "betarate")]
struct PySequentialState(seq::SequentialState);

#[pymethods]
impl PySequentialState {
    #[new]
    fn new(config: PySequentialConfig) -> Self {
        Self(seq::SequentialState::new(config.0))
    }

    /// Records "T" (treatment success) or "C" (control success) and returns
    /// the new status.
    fn record(&mut self, outcome: &str) -> PyResult<&'static str> {
        let outcome = match outcome {
            "T" | "t" => seq::Outcome::TreatmentSuccess,
            "C" | "c" => seq::Outcome::ControlSuccess,
            other => return Err(PyValueError::new_err(format!("outcome must be 'T' or 'C', got {other:?}"))),
        };
        to_py(self.0.record(outcome)).map(|s| s.as_str())
    }

    #[getter]
    fn t_wins(&self) -> u64 {
        self.0.t_wins()
    }

    #[getter]
    fn c_wins(&self) -> u64 {
        self.0.c_wins()
    }

    #[getter]
    fn status(&self) -> &'static str {
        self.0.status().as_str()
    }
}

#[pyfunction]
#[pyo3(signature = (n_max, d_star, prefactor = "margin"))]
fn significance_bound(n_max: u64, d_star: u64, prefactor: &str) -> PyResult<f64> {
    to_py(seq::significance_bound_with(n_max, d_star, self::prefactor(prefactor)?))
}

#[pyfunction]
#[pyo3(signature = (n_max, d_star, delta, prefactor = "margin"))]
fn power_bound(n_max: u64, d_star: u64, delta: f64, prefactor: &str) -> PyResult<f64> {
    to_py(seq::power_bound_with(n_max, d_star, lift(delta)?, self::prefactor(prefactor)?))
}

#[pyfunction]
#[pyo3(signature = (alpha_target, beta_target, delta, prefactor = "margin"))]
fn design_sequential(
    py: Python<'_>,
    alpha_target: f64,
    beta_target: f64,
    delta: f64,
    prefactor: &str,
) -> PyResult<PySequentialConfig> {
    let lift = lift(delta)?;
    let prefactor = self::prefactor(prefactor)?;
    let c = py.detach(|| seq::design_sequential_with(alpha_target, beta_target, lift, prefactor));
    to_py(c).map(PySequentialConfig)
}

/// Runs the benchmark and returns its summary and cases as a dict.
#[pyfunction]
#[pyo3(signature = (n_cases, mc_samples, seed = 0))]
fn run_benchmark<'py>(py: Python<'py>, n_cases: usize, mc_samples: u64, seed: u64) -> PyResult<Bound<'py, PyDict>> {
    let r = to_py(py.detach(|| core::app::run_benchmark(n_cases, mc_samples, seed)))?;
    let out = PyDict::new(py);
    out.set_item("seed", r.seed)?;
    out.set_item("mc_samples", r.mc_samples)?;
    out.set_item("mean_closed_nanos", r.mean_closed_nanos)?;
    out.set_item("mean_mc_nanos", r.mean_mc_nanos)?;
    out.set_item("speedup_orders_of_magnitude", r.speedup_orders_of_magnitude)?;
    out.set_item("max_abs_diff", r.max_abs_diff)?;
    out.set_item("text", r.to_text())?;
    let cases = r
        .cases
        .iter()
        .map(|c| {
            let d = PyDict::new(py);
            d.set_item("alpha_a", c.alpha_a)?;
            d.set_item("beta_a", c.beta_a)?;
            d.set_item("alpha_b", c.alpha_b)?;
            d.set_item("beta_b", c.beta_b)?;
            d.set_item("gamma", c.gamma)?;
            d.set_item("closed_form", c.closed_form)?;
            d.set_item("mc_estimate", c.mc_estimate)?;
            d.set_item("closed_form_nanos", c.closed_form_nanos)?;
            d.set_item("mc_nanos", c.mc_nanos)?;
            Ok(d)
        })
        .collect::<PyResult<Vec<_>>>()?;
    out.set_item("cases", cases)?;
    Ok(out)
}

#[pyfunction]
fn ln_beta(a: f64, b: f64) -> PyResult<f64> {
    to_py(core::specfun::ln_beta(a, b))
}

#[pyfunction]
fn reg_inc_beta_int(x: f64, alpha: u64, beta: f64) -> PyResult<f64> {
    to_py(core::specfun::reg_inc_beta_int(x, alpha, beta))
}

/// `2F1(-m, b; c; z)` as a float.
#[pyfunction]
fn hyp2f1_neg_int_series(m: u64, b: f64, c: f64, z: f64) -> PyResult<f64> {
    to_py(core::specfun::hyp2f1_neg_int_series(m, b, c, z)).map(|e| e.value.to_f64())
}

#[pyfunction]
fn jacobi_poly(n: u64, x: f64, y: f64, t: f64) -> PyResult<f64> {
    to_py(core::specfun::jacobi_poly(n, x, y, t))
}

#[pymodule]
fn betarate(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyBetaPosterior>()?;
    m.add_class::<PyComparisonResult>()?;
    m.add_class::<PyContingencyTable>()?;
    m.add_class::<PyKsResult>()?;
    m.add_class::<PySequentialConfig>()?;
    m.add_class::<PySequentialState>()?;
    m.add_function(wrap_pyfunction!(pr_rate_greater, m)?)?;
    m.add_function(wrap_pyfunction!(pr_scaled_rate_greater, m)?)?;
    m.add_function(wrap_pyfunction!(pr_scaled_double_sum, m)?)?;
    m.add_function(wrap_pyfunction!(mc_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(decide, m)?)?;
    m.add_function(wrap_pyfunction!(fisher_table_probability, m)?)?;
    m.add_function(wrap_pyfunction!(fisher_exact_p, m)?)?;
    m.add_function(wrap_pyfunction!(log_likelihood, m)?)?;
    m.add_function(wrap_pyfunction!(wilks_test, m)?)?;
    m.add_function(wrap_pyfunction!(ks_two_sample, m)?)?;
    m.add_function(wrap_pyfunction!(significance_bound, m)?)?;
    m.add_function(wrap_pyfunction!(power_bound, m)?)?;
    m.add_function(wrap_pyfunction!(design_sequential, m)?)?;
    m.add_function(wrap_pyfunction!(run_benchmark, m)?)?;
    m.add_function(wrap_pyfunction!(ln_beta, m)?)?;
    m.add_function(wrap_pyfunction!(reg_inc_beta_int, m)?)?;
    m.add_function(wrap_pyfunction!(hyp2f1_neg_int_series, m)?)?;
    m.add_function(wrap_pyfunction!(jacobi_poly, m)?)?;
    Ok(())
}
