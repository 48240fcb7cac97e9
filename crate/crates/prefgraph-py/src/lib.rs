//! Python bindings: thin JSON-bridged wrappers over the core library.
//!
//! Structured inputs arrive as JSON strings (one corpus per call) and
//! structured results come back as plain Python objects, so the Python side
//! needs nothing beyond `json` for round-trips.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use prefgraph::corpus;
use prefgraph::graph::Judgment;
use prefgraph::io::TemplateId;
use prefgraph::metrics;
use prefgraph::purify;
use prefgraph::synth::{self, SynthSpec};

fn value_to_py(py: Python<'_>, value: &serde_json::Value) -> PyResult<Py<PyAny>> {
    Ok(match value {
        serde_json::Value::Null => py.None(),
        serde_json::Value::Bool(b) => b.into_pyobject(py)?.to_owned().unbind().into(),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_pyobject(py)?.unbind().into()
            } else {
                n.as_f64()
                    .ok_or_else(|| PyValueError::new_err("non-finite number"))?
                    .into_pyobject(py)?
                    .unbind()
                    .into()
            }
        }
        serde_json::Value::String(s) => s.into_pyobject(py)?.unbind().into(),
        serde_json::Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(value_to_py(py, item)?)?;
            }
            list.unbind().into()
        }
        serde_json::Value::Object(map) => {
            let dict = PyDict::new(py);
            for (key, item) in map {
                dict.set_item(key, value_to_py(py, item)?)?;
            }
            dict.unbind().into()
        }
    })
}

fn to_py<T: serde::Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let json = serde_json::to_value(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    value_to_py(py, &json)
}

fn parse_corpus(judgments_json: &str) -> PyResult<Vec<Judgment>> {
    serde_json::from_str(judgments_json).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn parse_template(template: &str) -> PyResult<TemplateId> {
    match template {
        "cot" => Ok(TemplateId::Cot),
        "cot-tie" => Ok(TemplateId::CotTieAllowed),
        other => Err(PyValueError::new_err(format!(
            "unknown template {other:?}; expected \"cot\" or \"cot-tie\""
        ))),
    }
}

fn err_to_py(err: prefgraph::Error) -> PyErr {
    PyValueError::new_err(err.to_string())
}

/// Corpus metrics (rho, tau_avg, per-question detail) from a JSON array of
/// judgment records.
#[pyfunction]
fn analyze(py: Python<'_>, judgments_json: &str) -> PyResult<Py<PyAny>> {
    let judgments = parse_corpus(judgments_json)?;
    let report = corpus::analyze(&judgments).map_err(err_to_py)?;
    to_py(py, &report)
}

/// Split a corpus into cleaned and discarded records plus a filter report.
#[pyfunction]
fn filter(py: Python<'_>, judgments_json: &str) -> PyResult<Py<PyAny>> {
    let judgments = parse_corpus(judgments_json)?;
    let run = corpus::filter(&judgments).map_err(err_to_py)?;
    let report = corpus::filter_report(&judgments, &run).map_err(err_to_py)?;
    let dict = PyDict::new(py);
    dict.set_item("cleaned", to_py(py, &run.cleaned)?)?;
    dict.set_item("discarded", to_py(py, &run.discarded)?)?;
    dict.set_item("report", to_py(py, &report)?)?;
    Ok(dict.unbind().into())
}

/// Rebuild a cleaned corpus and assert it measures exactly (0, 0).
#[pyfunction]
fn verify_purity(judgments_json: &str) -> PyResult<(f64, f64)> {
    let judgments = parse_corpus(judgments_json)?;
    let report = purify::verify_purity(&judgments).map_err(err_to_py)?;
    Ok((report.rho, report.tau_avg))
}

/// Render a judge prompt; returns {"system": ..., "user": ...}.
#[pyfunction]
fn render_prompt(
    py: Python<'_>,
    template: &str,
    instruction: &str,
    output_1: &str,
    output_2: &str,
) -> PyResult<Py<PyAny>> {
    let bundle =
        prefgraph::io::render_prompt(parse_template(template)?, instruction, output_1, output_2)
            .map_err(err_to_py)?;
    let dict = PyDict::new(py);
    dict.set_item("system", bundle.system)?;
    dict.set_item("user", bundle.user)?;
    Ok(dict.unbind().into())
}

/// Map a judge transcript to "first" / "second" / "tie".
#[pyfunction]
fn parse_judge_reply(reply: &str, template: &str) -> PyResult<String> {
    let verdict =
        prefgraph::io::parse_judge_reply(reply, parse_template(template)?).map_err(err_to_py)?;
    Ok(serde_json::to_value(verdict)
        .expect("verdict serializes")
        .as_str()
        .expect("verdict is a string")
        .to_string())
}

/// Deterministic synthetic corpus as a list of judgment records.
#[pyfunction]
#[pyo3(signature = (models, questions, cycle_rate=0.0, tie_rate=0.0, seed=0))]
fn gen_corpus(
    py: Python<'_>,
    models: usize,
    questions: usize,
    cycle_rate: f64,
    tie_rate: f64,
    seed: u64,
) -> PyResult<Py<PyAny>> {
    let spec = SynthSpec {
        n_models: models,
        n_questions: questions,
        cycle_rate,
        tie_rate,
        seed,
    };
    let (_, judgments) = synth::gen_corpus(&spec).map_err(err_to_py)?;
    to_py(py, &judgments)
}

/// r_adj = (wins + ties/2) / total.
#[pyfunction]
fn adjusted_win_rate(wins: f64, losses: f64, ties: f64) -> PyResult<f64> {
    metrics::adjusted_win_rate(wins, losses, ties).map_err(err_to_py)
}

/// Spearman rank correlation with average-rank tie handling.
#[pyfunction]
fn spearman(a: Vec<f64>, b: Vec<f64>) -> PyResult<f64> {
    metrics::spearman(&a, &b).map_err(err_to_py)
}

/// Symmetrized sentence-level BLEU between two texts.
#[pyfunction]
fn self_bleu(text_a: &str, text_b: &str) -> PyResult<f64> {
    metrics::self_bleu(text_a, text_b).map_err(err_to_py)
}

#[pymodule]
fn prefgraph_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(filter, m)?)?;
    m.add_function(wrap_pyfunction!(verify_purity, m)?)?;
    m.add_function(wrap_pyfunction!(render_prompt, m)?)?;
    m.add_function(wrap_pyfunction!(parse_judge_reply, m)?)?;
    m.add_function(wrap_pyfunction!(gen_corpus, m)?)?;
    m.add_function(wrap_pyfunction!(adjusted_win_rate, m)?)?;
    m.add_function(wrap_pyfunction!(spearman, m)?)?;
    m.add_function(wrap_pyfunction!(self_bleu, m)?)?;
    Ok(())
}
