//! Corpus-level analysis and filtering drivers shared by the CLI and the
//! Python bindings. Questions are processed in sorted id order and results
//! are reduced in that fixed order, so output is independent of scheduling.

use std::path::Path;

use serde::Serialize;

use crate::entropy::structural_entropy;
use crate::error::{Error, Result};
use crate::graph::{Judgment, TournamentGraph};
use crate::io::{write_json, write_jsonl};
use crate::purify::{group_by_question, measure_purity, purify_question, FilterOutcome};
use crate::scc::{tarjan_scc, Classification};

/// Per-question slice of an analysis report.
#[derive(Debug, Clone, Serialize)]
pub struct QuestionAnalysis {
    pub question_id: String,
    pub n: usize,
    pub h2: f64,
    pub tau: f64,
    pub scc_sizes: Vec<usize>,
    pub non_transitive_vertices: usize,
}

/// Corpus metrics over all complete question graphs.
#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub rho: f64,
    pub tau_avg: f64,
    pub question_count: usize,
    pub vertex_total: usize,
    pub per_question: Vec<QuestionAnalysis>,
    /// Questions excluded because at least one pair lacks its swapped order.
    pub incomplete_questions: Vec<String>,
}

/// Map over items with at most `threads` scoped workers, preserving input
/// order in the result so the reduction is schedule-independent.
fn parallel_map<T, R, F>(items: Vec<T>, threads: usize, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync,
{
    let threads = threads.max(1);
    if threads == 1 || items.len() <= 1 {
        return items.into_iter().map(f).collect();
    }
    let chunk = items.len().div_ceil(threads);
    let mut chunks: Vec<Vec<T>> = Vec::new();
    let mut it = items.into_iter();
    loop {
        let batch: Vec<T> = it.by_ref().take(chunk).collect();
        if batch.is_empty() {
            break;
        }
        chunks.push(batch);
    }
    let f = &f;
    std::thread::scope(|scope| {
        let handles: Vec<_> = chunks
            .into_iter()
            .map(|batch| scope.spawn(move || batch.into_iter().map(f).collect::<Vec<R>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

/// Build per-question graphs, separating incomplete ones.
pub fn build_graphs(judgments: &[Judgment]) -> Result<(Vec<TournamentGraph>, Vec<String>)> {
    let mut graphs = Vec::new();
    let mut incomplete = Vec::new();
    for (question_id, js) in group_by_question(judgments) {
        let graph = TournamentGraph::build(&question_id, &js)?;
        if graph.is_complete() {
            graphs.push(graph);
        } else {
            incomplete.push(question_id);
        }
    }
    Ok((graphs, incomplete))
}

/// Non-transitivity and clarity metrics over a judgment corpus.
pub fn analyze(judgments: &[Judgment]) -> Result<AnalysisReport> {
    analyze_with(judgments, 1)
}

enum QuestionStep {
    Complete(QuestionAnalysis),
    Incomplete(String),
}

/// [`analyze`] with a bounded worker pool over questions.
pub fn analyze_with(judgments: &[Judgment], threads: usize) -> Result<AnalysisReport> {
    let groups: Vec<(String, Vec<Judgment>)> = group_by_question(judgments).into_iter().collect();
    let steps = parallel_map(groups, threads, |(question_id, js)| {
        let graph = TournamentGraph::build(&question_id, &js)?;
        if !graph.is_complete() {
            return Ok(QuestionStep::Incomplete(question_id));
        }
        let decomposition = tarjan_scc(&graph);
        let entropy = structural_entropy(&graph);
        let non_transitive_vertices: usize = decomposition
            .components
            .iter()
            .filter(|c| c.classification == Classification::NonTransitive)
            .map(|c| c.size())
            .sum();
        Ok(QuestionStep::Complete(QuestionAnalysis {
            question_id: graph.question_id().to_string(),
            n: graph.n(),
            h2: entropy.h2,
            tau: entropy.tau,
            scc_sizes: decomposition.components.iter().map(|c| c.size()).collect(),
            non_transitive_vertices,
        }))
    });

    let mut per_question = Vec::new();
    let mut incomplete_questions = Vec::new();
    let mut non_transitive_total = 0usize;
    let mut vertex_total = 0usize;
    let mut tau_sum = 0.0f64;
    for step in steps {
        match step? {
            QuestionStep::Complete(q) => {
                non_transitive_total += q.non_transitive_vertices;
                vertex_total += q.n;
                tau_sum += q.tau;
                per_question.push(q);
            }
            QuestionStep::Incomplete(id) => incomplete_questions.push(id),
        }
    }
    if per_question.is_empty() || vertex_total == 0 {
        return Err(Error::EmptyCorpus);
    }

    Ok(AnalysisReport {
        rho: non_transitive_total as f64 / vertex_total as f64,
        tau_avg: tau_sum / per_question.len() as f64,
        question_count: per_question.len(),
        vertex_total,
        per_question,
        incomplete_questions,
    })
}

/// Outcome of filtering a whole corpus.
#[derive(Debug)]
pub struct FilterRun {
    pub outcomes: Vec<FilterOutcome>,
    pub cleaned: Vec<Judgment>,
    pub discarded: Vec<Judgment>,
    pub skipped_incomplete: Vec<String>,
}

impl FilterRun {
    pub fn retention(&self) -> f64 {
        let total = self.cleaned.len() + self.discarded.len();
        if total == 0 {
            return 1.0;
        }
        self.cleaned.len() as f64 / total as f64
    }
}

/// Purify every complete question; incomplete ones are skipped and listed.
pub fn filter(judgments: &[Judgment]) -> Result<FilterRun> {
    filter_with(judgments, 1)
}

/// [`filter`] with a bounded worker pool over questions.
pub fn filter_with(judgments: &[Judgment], threads: usize) -> Result<FilterRun> {
    let groups: Vec<(String, Vec<Judgment>)> = group_by_question(judgments).into_iter().collect();
    let steps = parallel_map(groups, threads, |(question_id, js)| {
        let graph = TournamentGraph::build(&question_id, &js)?;
        if !graph.is_complete() {
            // inner Err marks a skipped question, outer Err a hard failure
            return Ok(Err(question_id));
        }
        Ok(Ok(purify_question(&question_id, &js)?))
    });
    let mut outcomes = Vec::new();
    let mut cleaned = Vec::new();
    let mut discarded = Vec::new();
    let mut skipped_incomplete = Vec::new();
    for step in steps {
        match step? {
            Ok(outcome) => {
                cleaned.extend(outcome.cleaned.iter().cloned());
                discarded.extend(outcome.discarded.iter().cloned());
                outcomes.push(outcome);
            }
            Err(question_id) => skipped_incomplete.push(question_id),
        }
    }
    Ok(FilterRun {
        outcomes,
        cleaned,
        discarded,
        skipped_incomplete,
    })
}

/// Metric block embedded in `report.json` after filtering.
#[derive(Debug, Clone, Serialize)]
pub struct FilterReport {
    pub rho_raw: f64,
    pub tau_avg_raw: f64,
    pub per_question_tau_raw: Vec<(String, f64)>,
    pub retention: f64,
    pub cleaned_records: usize,
    pub discarded_records: usize,
    pub skipped_incomplete: Vec<String>,
    pub cleaned_rho: f64,
    pub cleaned_tau_avg: f64,
    /// Questions whose cleaned data still carries cycles or entropy
    /// (possible only when explicit ties survive filtering).
    pub cleaned_offenders: Vec<String>,
}

pub fn filter_report(judgments: &[Judgment], run: &FilterRun) -> Result<FilterReport> {
    let analysis = analyze(judgments)?;
    let (cleaned_rho, cleaned_tau_avg, cleaned_offenders) = if run.cleaned.is_empty() {
        (0.0, 0.0, Vec::new())
    } else {
        let m = measure_purity(&run.cleaned)?;
        (m.rho, m.tau_avg, m.offenders)
    };
    Ok(FilterReport {
        rho_raw: analysis.rho,
        tau_avg_raw: analysis.tau_avg,
        per_question_tau_raw: analysis
            .per_question
            .iter()
            .map(|q| (q.question_id.clone(), q.tau))
            .collect(),
        retention: run.retention(),
        cleaned_records: run.cleaned.len(),
        discarded_records: run.discarded.len(),
        skipped_incomplete: run.skipped_incomplete.clone(),
        cleaned_rho,
        cleaned_tau_avg,
        cleaned_offenders,
    })
}

/// Write `cleaned.jsonl`, `discarded.jsonl`, and `report.json` into `dir`.
/// `report` is any serializable envelope (the CLI adds provenance fields).
pub fn write_split<T: Serialize>(dir: &Path, run: &FilterRun, report: &T) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io {
        path: dir.display().to_string(),
        source: e,
    })?;
    write_jsonl(&dir.join("cleaned.jsonl"), &run.cleaned)?;
    write_jsonl(&dir.join("discarded.jsonl"), &run.discarded)?;
    write_json(&dir.join("report.json"), report)
}
