//! Two-dimensional structural entropy over the SCC partition.
//!
//! The measure combines inter-community uncertainty (how much external
//! influence each component receives) with intra-community uncertainty (the
//! in-degree distribution inside each component). Interactions between two
//! singleton components are excluded from the external-influence counts:
//! relations among singletons already form a linear order and carry no
//! structural complexity. Volumes, by contrast, always use the full arc set.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::TournamentGraph;
use crate::scc::{tarjan_scc, SccDecomposition};

/// Entropy breakdown for one question graph.
#[derive(Debug, Clone, Serialize)]
pub struct EntropyReport {
    pub question_id: String,
    pub h2: f64,
    pub tau: f64,
    pub component_count: usize,
    pub volumes: Vec<usize>,
    pub external_influence: Vec<usize>,
    pub total_volume: usize,
    /// Set when the graph has no arcs and H2 is 0 by convention.
    pub edgeless: bool,
    /// Set when tau had to be clamped into [0, 1].
    pub clamped: bool,
}

/// Corpus-level clarity summary.
#[derive(Debug, Clone, Serialize)]
pub struct CorpusClarity {
    pub per_question: Vec<EntropyReport>,
    pub tau_avg: f64,
}

/// Volume of component `j`: sum of full-graph in-degrees of its members.
pub fn scc_volume(graph: &TournamentGraph, decomposition: &SccDecomposition, j: usize) -> usize {
    let in_degrees = graph.in_degrees();
    decomposition.components[j]
        .members
        .iter()
        .map(|&v| in_degrees[v])
        .sum()
}

/// Incoming arcs to component `j` from outside it, excluding arcs whose
/// endpoints both lie in singleton components. A bidirectional relation
/// between components contributes one incoming arc to each side.
pub fn external_influence(
    graph: &TournamentGraph,
    decomposition: &SccDecomposition,
    j: usize,
) -> usize {
    external_influences(graph, decomposition)[j]
}

fn external_influences(graph: &TournamentGraph, decomposition: &SccDecomposition) -> Vec<usize> {
    let mut g = vec![0usize; decomposition.len()];
    for (u, v) in graph.arcs() {
        let cu = decomposition.component_of[u];
        let cv = decomposition.component_of[v];
        if cu == cv {
            continue;
        }
        if decomposition.is_singleton(cu) && decomposition.is_singleton(cv) {
            continue;
        }
        g[cv] += 1;
    }
    g
}

fn xlogx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// H^2 of the graph, in bits. Zero-volume graphs yield 0 by convention.
pub fn structural_entropy(graph: &TournamentGraph) -> EntropyReport {
    let decomposition = tarjan_scc(graph);
    structural_entropy_with(graph, &decomposition)
}

/// Same as [`structural_entropy`] but reusing an existing decomposition.
pub fn structural_entropy_with(
    graph: &TournamentGraph,
    decomposition: &SccDecomposition,
) -> EntropyReport {
    let in_degrees = graph.in_degrees();
    let volumes: Vec<usize> = decomposition
        .components
        .iter()
        .map(|c| c.members.iter().map(|&v| in_degrees[v]).sum())
        .collect();
    let g = external_influences(graph, decomposition);
    let total_volume: usize = volumes.iter().sum();

    let mut h2 = 0.0f64;
    let edgeless = total_volume == 0;
    if !edgeless {
        let v_g = total_volume as f64;
        for (j, component) in decomposition.components.iter().enumerate() {
            let v_j = volumes[j] as f64;
            if volumes[j] > 0 {
                // inter-community term
                h2 -= g[j] as f64 / v_g * (v_j / v_g).log2();
                // intra-community term
                let mut inner = 0.0;
                for &v in &component.members {
                    inner += xlogx(in_degrees[v] as f64 / v_j);
                }
                h2 -= v_j / v_g * inner;
            }
        }
        // tiny negative residue from float cancellation rounds up to zero
        if h2 < 0.0 && h2 > -1e-12 {
            h2 = 0.0;
        }
    }

    let n = graph.n();
    let (tau, clamped) = if n <= 1 || edgeless {
        (0.0, false)
    } else {
        let raw = h2 / (n as f64).log2();
        if raw < 0.0 {
            (0.0, true)
        } else if raw > 1.0 {
            (1.0, true)
        } else {
            (raw, false)
        }
    };

    EntropyReport {
        question_id: graph.question_id().to_string(),
        h2,
        tau,
        component_count: decomposition.len(),
        volumes,
        external_influence: g,
        total_volume,
        edgeless,
        clamped,
    }
}

/// tau = H^2 / log2(n), clamped into [0, 1]; 0 for graphs with n <= 1.
pub fn normalized_entropy(graph: &TournamentGraph) -> f64 {
    structural_entropy(graph).tau
}

/// Mean per-question tau over the corpus, with reports retained.
pub fn average_normalized_entropy(graphs: &[TournamentGraph]) -> Result<CorpusClarity> {
    if graphs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let per_question: Vec<EntropyReport> = graphs.iter().map(structural_entropy).collect();
    let tau_avg = per_question.iter().map(|r| r.tau).sum::<f64>() / per_question.len() as f64;
    Ok(CorpusClarity {
        per_question,
        tau_avg,
    })
}
