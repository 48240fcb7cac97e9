//! Cycle-breaking reconstruction and dataset purification.
//!
//! Each multi-vertex SCC is flattened by ranking its members on their global
//! in-degree (win score) in the original graph: higher score beats lower,
//! equal scores tie. Inter-component relations are preserved verbatim, which
//! keeps the condensation order intact, so the reconstructed graph is acyclic
//! up to tie groups. The canonical relations read off that graph decide which
//! judgments survive.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::entropy::average_normalized_entropy;
use crate::error::{Error, Result};
use crate::graph::{Judgment, Relation, TournamentGraph, Verdict};
use crate::scc::{non_transitivity_ratio, tarjan_scc, SccComponent};

/// Resolved outcome for one unordered pair in the reconstructed graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum CanonicalOutcome {
    WinFor(String),
    Tie,
}

/// Canonical relation map: unordered pair (lexicographic) to outcome.
pub type CanonicalRelations = BTreeMap<(String, String), CanonicalOutcome>;

/// Result of purifying one question's judgments.
#[derive(Debug, Clone)]
pub struct FilterOutcome {
    pub question_id: String,
    pub dag: TournamentGraph,
    pub canonical: CanonicalRelations,
    pub cleaned: Vec<Judgment>,
    pub discarded: Vec<Judgment>,
}

impl FilterOutcome {
    pub fn retention(&self) -> f64 {
        let total = self.cleaned.len() + self.discarded.len();
        if total == 0 {
            return 1.0;
        }
        self.cleaned.len() as f64 / total as f64
    }
}

/// Measured purity of a cleaned corpus.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PurityReport {
    pub rho: f64,
    pub tau_avg: f64,
}

/// Replacement relations for the internal pairs of one component, ranked by
/// global in-degree in the original graph.
pub fn reconstruct_scc(graph: &TournamentGraph, component: &SccComponent) -> Vec<Relation> {
    let in_degrees = graph.in_degrees();
    let vertices = graph.vertices();
    let mut relations = Vec::new();
    for (a, &i) in component.members.iter().enumerate() {
        for &j in &component.members[a + 1..] {
            let (wi, wj) = (in_degrees[i], in_degrees[j]);
            relations.push(if wi > wj {
                Relation::Directed {
                    winner: vertices[i].clone(),
                    loser: vertices[j].clone(),
                }
            } else if wj > wi {
                Relation::Directed {
                    winner: vertices[j].clone(),
                    loser: vertices[i].clone(),
                }
            } else {
                Relation::Bidirectional {
                    a: vertices[i].clone(),
                    b: vertices[j].clone(),
                }
            });
        }
    }
    relations
}

/// Rebuild the whole graph with every multi-vertex component flattened.
pub fn build_global_dag(graph: &TournamentGraph) -> Result<TournamentGraph> {
    if !graph.is_complete() {
        return Err(Error::IncompleteGraph {
            question_id: graph.question_id().to_string(),
        });
    }
    let decomposition = tarjan_scc(graph);
    let mut relations = Vec::new();
    // inter-component relations survive verbatim
    for ((i, j), _) in graph.pairings() {
        if decomposition.component_of[i] != decomposition.component_of[j] {
            relations.push(relation_for_pair(graph, i, j));
        }
    }
    for component in &decomposition.components {
        if component.size() > 1 {
            relations.extend(reconstruct_scc(graph, component));
        }
    }
    TournamentGraph::from_relations(
        graph.question_id(),
        graph.vertices().to_vec(),
        &relations,
    )
}

fn relation_for_pair(graph: &TournamentGraph, i: usize, j: usize) -> Relation {
    use crate::graph::Pairing;
    match graph.pairing(i, j).expect("pair present") {
        Pairing::Wins(w) => Relation::Directed {
            winner: graph.vertices()[w].clone(),
            loser: graph.vertices()[if w == i { j } else { i }].clone(),
        },
        Pairing::Tie => Relation::Bidirectional {
            a: graph.vertices()[i].clone(),
            b: graph.vertices()[j].clone(),
        },
    }
}

/// Read the canonical outcome of every pair off the reconstructed graph.
pub fn canonical_relations(dag: &TournamentGraph) -> CanonicalRelations {
    let mut map = BTreeMap::new();
    for relation in dag.relations() {
        match relation {
            Relation::Directed { winner, loser } => {
                let key = ordered_pair(&winner, &loser);
                map.insert(key, CanonicalOutcome::WinFor(winner));
            }
            Relation::Bidirectional { a, b } => {
                map.insert(ordered_pair(&a, &b), CanonicalOutcome::Tie);
            }
        }
    }
    map
}

fn ordered_pair(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

/// Partition judgments into those consistent with the canonical relations
/// and the rest. Input order is preserved within each output.
pub fn split_dataset(
    judgments: &[Judgment],
    canonical: &CanonicalRelations,
) -> Result<(Vec<Judgment>, Vec<Judgment>)> {
    let mut cleaned = Vec::new();
    let mut discarded = Vec::new();
    for j in judgments {
        let key = ordered_pair(&j.first, &j.second);
        let outcome = canonical.get(&key).ok_or_else(|| Error::UncoveredPair {
            question_id: j.question_id.clone(),
            a: key.0.clone(),
            b: key.1.clone(),
        })?;
        let matches = match outcome {
            CanonicalOutcome::WinFor(w) => match j.verdict {
                Verdict::FirstWins => *w == j.first,
                Verdict::SecondWins => *w == j.second,
                Verdict::Tie => false,
            },
            CanonicalOutcome::Tie => j.verdict == Verdict::Tie,
        };
        if matches {
            cleaned.push(j.clone());
        } else {
            discarded.push(j.clone());
        }
    }
    Ok((cleaned, discarded))
}

/// End-to-end purification of one question's judgments.
pub fn purify_question(question_id: &str, judgments: &[Judgment]) -> Result<FilterOutcome> {
    let graph = TournamentGraph::build(question_id, judgments)?;
    let dag = build_global_dag(&graph)?;
    let canonical = canonical_relations(&dag);
    let (cleaned, discarded) = split_dataset(judgments, &canonical)?;
    Ok(FilterOutcome {
        question_id: question_id.to_string(),
        dag,
        canonical,
        cleaned,
        discarded,
    })
}

/// Group judgments by question, preserving record order within a question.
pub fn group_by_question(judgments: &[Judgment]) -> BTreeMap<String, Vec<Judgment>> {
    let mut groups: BTreeMap<String, Vec<Judgment>> = BTreeMap::new();
    for j in judgments {
        groups.entry(j.question_id.clone()).or_default().push(j.clone());
    }
    groups
}

/// Measured purity plus the questions that violate it, without asserting.
#[derive(Debug, Clone)]
pub struct PurityMeasurement {
    pub rho: f64,
    pub tau_avg: f64,
    pub offenders: Vec<String>,
}

/// Rebuild graphs from a cleaned corpus, using only pairs where both prompt
/// orders survived, and measure how transitive and linear they are.
pub fn measure_purity(cleaned: &[Judgment]) -> Result<PurityMeasurement> {
    if cleaned.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut graphs = Vec::new();
    for (question_id, judgments) in group_by_question(cleaned) {
        let mut ordered: BTreeMap<(&str, &str), &Judgment> = BTreeMap::new();
        for j in &judgments {
            ordered.insert((j.first.as_str(), j.second.as_str()), j);
        }
        let survivors: Vec<Judgment> = judgments
            .iter()
            .filter(|j| ordered.contains_key(&(j.second.as_str(), j.first.as_str())))
            .map(|j| (*j).clone())
            .collect();
        if survivors.is_empty() {
            continue;
        }
        graphs.push(TournamentGraph::build(&question_id, &survivors)?);
    }
    if graphs.is_empty() {
        // nothing left with both orders: vacuously pure
        return Ok(PurityMeasurement {
            rho: 0.0,
            tau_avg: 0.0,
            offenders: Vec::new(),
        });
    }

    let rho = non_transitivity_ratio(&graphs)?;
    let clarity = average_normalized_entropy(&graphs)?;
    let mut offenders = Vec::new();
    if rho != 0.0 || clarity.tau_avg != 0.0 {
        for (g, r) in graphs.iter().zip(&clarity.per_question) {
            let has_cycle = tarjan_scc(g)
                .components
                .iter()
                .any(|c| c.classification == crate::scc::Classification::NonTransitive);
            if has_cycle || r.tau != 0.0 {
                offenders.push(g.question_id().to_string());
            }
        }
    }
    Ok(PurityMeasurement {
        rho,
        tau_avg: clarity.tau_avg,
        offenders,
    })
}

/// [`measure_purity`] plus the hard assertion that the result is (0, 0).
pub fn verify_purity(cleaned: &[Judgment]) -> Result<PurityReport> {
    let m = measure_purity(cleaned)?;
    if m.rho != 0.0 || m.tau_avg != 0.0 {
        return Err(Error::PurityViolation {
            rho: m.rho,
            tau_avg: m.tau_avg,
            questions: m.offenders,
        });
    }
    Ok(PurityReport {
        rho: m.rho,
        tau_avg: m.tau_avg,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Verdict;

    fn directed(q: &str, winner: &str, loser: &str) -> [Judgment; 2] {
        [
            Judgment::new(q, winner, loser, Verdict::FirstWins),
            Judgment::new(q, loser, winner, Verdict::SecondWins),
        ]
    }

    fn cycle_judgments(q: &str) -> Vec<Judgment> {
        let mut js = Vec::new();
        js.extend(directed(q, "A", "B"));
        js.extend(directed(q, "B", "C"));
        js.extend(directed(q, "C", "A"));
        js
    }

    #[test]
    fn three_cycle_flattens_to_all_ties() {
        let js = cycle_judgments("q");
        let graph = TournamentGraph::build("q", &js).unwrap();
        let d = tarjan_scc(&graph);
        let rels = reconstruct_scc(&graph, &d.components[0]);
        assert_eq!(rels.len(), 3);
        assert!(rels
            .iter()
            .all(|r| matches!(r, Relation::Bidirectional { .. })));
    }

    #[test]
    fn singleton_component_reconstructs_to_nothing() {
        let mut js = Vec::new();
        js.extend(directed("q", "A", "B"));
        let graph = TournamentGraph::build("q", &js).unwrap();
        let d = tarjan_scc(&graph);
        assert!(reconstruct_scc(&graph, &d.components[0]).is_empty());
    }

    #[test]
    fn in_degree_ranking_trace() {
        // complete 4-tournament forming one SCC with global in-degrees
        // A:3, B:2, C:2, D:1 (ties A-D and B-C keep it strongly connected)
        let tie = |a: &str, b: &str| {
            [
                Judgment::new("q", a, b, Verdict::Tie),
                Judgment::new("q", b, a, Verdict::Tie),
            ]
        };
        let mut js = Vec::new();
        js.extend(directed("q", "A", "B"));
        js.extend(directed("q", "A", "C"));
        js.extend(directed("q", "B", "D"));
        js.extend(directed("q", "C", "D"));
        js.extend(tie("A", "D"));
        js.extend(tie("B", "C"));
        let graph = TournamentGraph::build("q", &js).unwrap();
        assert_eq!(graph.in_degrees(), vec![3, 2, 2, 1]);
        let d = tarjan_scc(&graph);
        assert_eq!(d.len(), 1);

        let dag = build_global_dag(&graph).unwrap();
        let canonical = canonical_relations(&dag);
        let win = |w: &str, l: &str| {
            canonical[&ordered_pair(w, l)] == CanonicalOutcome::WinFor(w.to_string())
        };
        assert!(win("A", "B") && win("A", "C") && win("A", "D"));
        assert_eq!(
            canonical[&ordered_pair("B", "C")],
            CanonicalOutcome::Tie
        );
        assert!(win("B", "D") && win("C", "D"));
    }

    #[test]
    fn dag_input_is_a_fixpoint() {
        let mut js = Vec::new();
        js.extend(directed("q", "A", "B"));
        js.extend(directed("q", "A", "C"));
        js.extend(directed("q", "B", "C"));
        let graph = TournamentGraph::build("q", &js).unwrap();
        let dag = build_global_dag(&graph).unwrap();
        assert_eq!(dag, graph);
        let again = build_global_dag(&dag).unwrap();
        assert_eq!(again, dag);
    }

    #[test]
    fn incomplete_graph_is_rejected() {
        let js: Vec<Judgment> = directed("q", "A", "B")
            .into_iter()
            .chain([Judgment::new("q", "B", "C", Verdict::FirstWins)])
            .collect();
        let graph = TournamentGraph::build("q", &js).unwrap();
        assert!(matches!(
            build_global_dag(&graph),
            Err(Error::IncompleteGraph { .. })
        ));
    }

    #[test]
    fn cycle_corpus_is_fully_discarded() {
        let js = cycle_judgments("q");
        let outcome = purify_question("q", &js).unwrap();
        assert!(outcome.cleaned.is_empty());
        assert_eq!(outcome.discarded.len(), 6);
        assert_eq!(outcome.retention(), 0.0);
    }

    #[test]
    fn linear_corpus_is_fully_retained() {
        let mut js = Vec::new();
        js.extend(directed("q", "A", "B"));
        js.extend(directed("q", "A", "C"));
        js.extend(directed("q", "B", "C"));
        let outcome = purify_question("q", &js).unwrap();
        assert_eq!(outcome.cleaned.len(), 6);
        assert!(outcome.discarded.is_empty());
        assert_eq!(outcome.retention(), 1.0);
        let report = verify_purity(&outcome.cleaned).unwrap();
        assert_eq!(report.rho, 0.0);
        assert_eq!(report.tau_avg, 0.0);
    }

    #[test]
    fn explicit_tie_survives_but_breaks_the_tau_guarantee() {
        // A and B tie, both beat C: perfectly transitive input, everything
        // cleaned. The surviving tie pair forms a two-vertex SCC whose
        // intra-community in-degree distribution carries positive entropy,
        // so the tau side of the purity check fails by construction. The
        // (0, 0) guarantee only holds for tie-free cleaned data.
        let mut js = vec![
            Judgment::new("q", "A", "B", Verdict::Tie),
            Judgment::new("q", "B", "A", Verdict::Tie),
        ];
        js.extend(directed("q", "A", "C"));
        js.extend(directed("q", "B", "C"));
        let outcome = purify_question("q", &js).unwrap();
        assert_eq!(outcome.cleaned.len(), 6);
        assert!(outcome.discarded.is_empty());

        match verify_purity(&outcome.cleaned).unwrap_err() {
            Error::PurityViolation { rho, tau_avg, .. } => {
                assert_eq!(rho, 0.0);
                // H2 = 1 bit, tau = 1 / log2(3)
                assert!((tau_avg - 1.0 / 3f64.log2()).abs() < 1e-12);
            }
            other => panic!("unexpected error: {other:?}"),
        }
    }

    #[test]
    fn verify_purity_flags_cyclic_survivors() {
        let js = cycle_judgments("q");
        let err = verify_purity(&js).unwrap_err();
        match err {
            Error::PurityViolation { rho, questions, .. } => {
                assert!(rho > 0.0);
                assert_eq!(questions, vec!["q".to_string()]);
            }
            other => panic!("unexpected error: {other:?}"),
        }
    }

    #[test]
    fn verify_purity_empty_input_errors() {
        assert!(matches!(verify_purity(&[]), Err(Error::EmptyCorpus)));
    }
}
