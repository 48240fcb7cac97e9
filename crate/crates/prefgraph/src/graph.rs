//! Judgment records and per-question tournament graphs.
//!
//! A tournament graph has one vertex per response and one relation per judged
//! pair. Edges point loser -> winner, so a vertex's in-degree is its win
//! score. A tie (or a position-flip disagreement) is stored as a single
//! bidirectional relation, which counts once toward each endpoint's
//! in-degree and expands to two directed arcs for reachability purposes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// In-degree contribution of a bidirectional relation to each endpoint.
///
/// The underlying formulas never pin this down; the whole library counts a
/// tie as one incoming edge per endpoint.
pub const BIDIRECTIONAL_IN_DEGREE: usize = 1;

/// Outcome of a single ordered pairwise comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    #[serde(rename = "first")]
    FirstWins,
    #[serde(rename = "second")]
    SecondWins,
    Tie,
}

impl Verdict {
    /// The verdict as seen from the swapped prompt order.
    pub fn mirrored(self) -> Self {
        match self {
            Verdict::FirstWins => Verdict::SecondWins,
            Verdict::SecondWins => Verdict::FirstWins,
            Verdict::Tie => Verdict::Tie,
        }
    }
}

/// One ordered pairwise judgment: `first` was shown before `second` in the
/// prompt and `verdict` is the judge's call for that order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Judgment {
    pub question_id: String,
    pub first: String,
    pub second: String,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

impl Judgment {
    pub fn new(
        question_id: impl Into<String>,
        first: impl Into<String>,
        second: impl Into<String>,
        verdict: Verdict,
    ) -> Self {
        Judgment {
            question_id: question_id.into(),
            first: first.into(),
            second: second.into(),
            verdict,
            source: None,
        }
    }
}

/// A combined relation over one unordered vertex pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Relation {
    Directed { winner: String, loser: String },
    Bidirectional { a: String, b: String },
}

/// Combine the two position-swapped verdicts for the unordered pair `(a, b)`.
///
/// `v_ab` is the verdict with `a` shown first, `v_ba` with `b` shown first.
/// The pair resolves to a directed relation only when both orders agree on
/// the same winner; any disagreement or any tie yields a bidirectional
/// relation.
pub fn combine_ordered_verdicts(a: &str, b: &str, v_ab: Verdict, v_ba: Verdict) -> Relation {
    match (v_ab, v_ba) {
        (Verdict::FirstWins, Verdict::SecondWins) => Relation::Directed {
            winner: a.to_string(),
            loser: b.to_string(),
        },
        (Verdict::SecondWins, Verdict::FirstWins) => Relation::Directed {
            winner: b.to_string(),
            loser: a.to_string(),
        },
        _ => {
            let (x, y) = if a <= b { (a, b) } else { (b, a) };
            Relation::Bidirectional {
                a: x.to_string(),
                b: y.to_string(),
            }
        }
    }
}

/// Resolved relation for a vertex pair `(i, j)` with `i < j`, stored by index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pairing {
    /// Index of the winning vertex (either `i` or `j`).
    Wins(usize),
    Tie,
}

/// Per-question directed tournament over response vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TournamentGraph {
    question_id: String,
    vertices: Vec<String>,
    pairings: BTreeMap<(usize, usize), Pairing>,
}

impl TournamentGraph {
    /// Build a graph from all judgments of one question.
    ///
    /// Pairs with only one prompt order present are excluded and leave the
    /// graph incomplete; duplicate ordered records are an error.
    pub fn build(question_id: &str, judgments: &[Judgment]) -> Result<TournamentGraph> {
        let mut vertices: Vec<String> = Vec::new();
        for j in judgments {
            if j.first == j.second {
                return Err(Error::SelfComparison {
                    question_id: question_id.to_string(),
                    id: j.first.clone(),
                    line: None,
                });
            }
            vertices.push(j.first.clone());
            vertices.push(j.second.clone());
        }
        vertices.sort();
        vertices.dedup();

        let index: BTreeMap<&str, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();

        let mut ordered: BTreeMap<(usize, usize), Verdict> = BTreeMap::new();
        for j in judgments {
            let f = index[j.first.as_str()];
            let s = index[j.second.as_str()];
            if ordered.insert((f, s), j.verdict).is_some() {
                return Err(Error::DuplicateJudgment {
                    question_id: question_id.to_string(),
                    first: j.first.clone(),
                    second: j.second.clone(),
                    line: None,
                });
            }
        }

        let mut pairings = BTreeMap::new();
        for (&(f, s), &v_fs) in &ordered {
            if f > s {
                continue; // handled from the (s, f) side
            }
            let Some(&v_sf) = ordered.get(&(s, f)) else {
                continue; // missing swap: pair excluded, graph incomplete
            };
            let pairing = match combine_ordered_verdicts(&vertices[f], &vertices[s], v_fs, v_sf) {
                Relation::Directed { winner, .. } => Pairing::Wins(index[winner.as_str()]),
                Relation::Bidirectional { .. } => Pairing::Tie,
            };
            pairings.insert((f, s), pairing);
        }
        // pairs where only the (s, f) order with s > f exists are also missing
        // their swap; the loop above never inserts them.

        Ok(TournamentGraph {
            question_id: question_id.to_string(),
            vertices,
            pairings,
        })
    }

    /// Build directly from resolved pair relations (used by reconstruction
    /// and synthesis). Endpoints must be known; later relations for the same
    /// pair overwrite earlier ones.
    pub fn from_relations(
        question_id: &str,
        vertices: Vec<String>,
        relations: &[Relation],
    ) -> Result<TournamentGraph> {
        let mut vertices = vertices;
        vertices.sort();
        vertices.dedup();
        let index: BTreeMap<&str, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        let mut pairings = BTreeMap::new();
        for r in relations {
            let (x, y, pairing) = match r {
                Relation::Directed { winner, loser } => {
                    let w = *index.get(winner.as_str()).ok_or_else(|| Error::UnknownVertex {
                        question_id: question_id.to_string(),
                        id: winner.clone(),
                    })?;
                    let l = *index.get(loser.as_str()).ok_or_else(|| Error::UnknownVertex {
                        question_id: question_id.to_string(),
                        id: loser.clone(),
                    })?;
                    (w.min(l), w.max(l), Pairing::Wins(w))
                }
                Relation::Bidirectional { a, b } => {
                    let i = *index.get(a.as_str()).ok_or_else(|| Error::UnknownVertex {
                        question_id: question_id.to_string(),
                        id: a.clone(),
                    })?;
                    let j = *index.get(b.as_str()).ok_or_else(|| Error::UnknownVertex {
                        question_id: question_id.to_string(),
                        id: b.clone(),
                    })?;
                    (i.min(j), i.max(j), Pairing::Tie)
                }
            };
            pairings.insert((x, y), pairing);
        }
        Ok(TournamentGraph {
            question_id: question_id.to_string(),
            vertices,
            pairings,
        })
    }

    pub fn question_id(&self) -> &str {
        &self.question_id
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.binary_search_by(|v| v.as_str().cmp(id)).ok()
    }

    /// True when every unordered vertex pair carries a relation.
    pub fn is_complete(&self) -> bool {
        self.pairings.len() == self.n() * self.n().saturating_sub(1) / 2
    }

    /// Fewer than two vertices: nothing to compare.
    pub fn is_degenerate(&self) -> bool {
        self.n() < 2
    }

    pub fn pairing(&self, i: usize, j: usize) -> Option<Pairing> {
        let key = (i.min(j), i.max(j));
        self.pairings.get(&key).copied()
    }

    pub fn pairings(&self) -> impl Iterator<Item = ((usize, usize), Pairing)> + '_ {
        self.pairings.iter().map(|(&k, &p)| (k, p))
    }

    pub fn relation_count(&self) -> usize {
        self.pairings.len()
    }

    /// Relations in deterministic (index) order, by vertex name.
    pub fn relations(&self) -> Vec<Relation> {
        self.pairings
            .iter()
            .map(|(&(i, j), &p)| match p {
                Pairing::Wins(w) => Relation::Directed {
                    winner: self.vertices[w].clone(),
                    loser: self.vertices[if w == i { j } else { i }].clone(),
                },
                Pairing::Tie => Relation::Bidirectional {
                    a: self.vertices[i].clone(),
                    b: self.vertices[j].clone(),
                },
            })
            .collect()
    }

    /// Directed arcs after expanding each bidirectional relation to two arcs.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let mut arcs = Vec::with_capacity(self.pairings.len() * 2);
        for (&(i, j), &p) in &self.pairings {
            match p {
                Pairing::Wins(w) => {
                    let l = if w == i { j } else { i };
                    arcs.push((l, w));
                }
                Pairing::Tie => {
                    arcs.push((i, j));
                    arcs.push((j, i));
                }
            }
        }
        arcs
    }

    /// In-degree of every vertex: directed wins plus tie incidences.
    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n()];
        for (&(i, j), &p) in &self.pairings {
            match p {
                Pairing::Wins(w) => deg[w] += 1,
                Pairing::Tie => {
                    deg[i] += BIDIRECTIONAL_IN_DEGREE;
                    deg[j] += BIDIRECTIONAL_IN_DEGREE;
                }
            }
        }
        deg
    }

    /// Out-degree of every vertex (losses plus tie incidences). Unused by
    /// the entropy and purification formulas but part of the degree model.
    pub fn out_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n()];
        for (&(i, j), &p) in &self.pairings {
            match p {
                Pairing::Wins(w) => deg[if w == i { j } else { i }] += 1,
                Pairing::Tie => {
                    deg[i] += BIDIRECTIONAL_IN_DEGREE;
                    deg[j] += BIDIRECTIONAL_IN_DEGREE;
                }
            }
        }
        deg
    }

    pub fn in_degree(&self, id: &str) -> Result<usize> {
        let idx = self.vertex_index(id).ok_or_else(|| Error::UnknownVertex {
            question_id: self.question_id.clone(),
            id: id.to_string(),
        })?;
        Ok(self.in_degrees()[idx])
    }

    pub fn out_degree(&self, id: &str) -> Result<usize> {
        let idx = self.vertex_index(id).ok_or_else(|| Error::UnknownVertex {
            question_id: self.question_id.clone(),
            id: id.to_string(),
        })?;
        Ok(self.out_degrees()[idx])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn both_orders(q: &str, winner: &str, loser: &str) -> [Judgment; 2] {
        [
            Judgment::new(q, winner, loser, Verdict::FirstWins),
            Judgment::new(q, loser, winner, Verdict::SecondWins),
        ]
    }

    #[test]
    fn combine_agreeing_orders_gives_directed() {
        let r = combine_ordered_verdicts("A", "B", Verdict::FirstWins, Verdict::SecondWins);
        assert_eq!(
            r,
            Relation::Directed {
                winner: "A".into(),
                loser: "B".into()
            }
        );
        let r = combine_ordered_verdicts("A", "B", Verdict::SecondWins, Verdict::FirstWins);
        assert_eq!(
            r,
            Relation::Directed {
                winner: "B".into(),
                loser: "A".into()
            }
        );
    }

    #[test]
    fn combine_disagreement_or_tie_gives_bidirectional() {
        for (v1, v2) in [
            (Verdict::FirstWins, Verdict::FirstWins),
            (Verdict::SecondWins, Verdict::SecondWins),
            (Verdict::Tie, Verdict::Tie),
            (Verdict::Tie, Verdict::FirstWins),
            (Verdict::FirstWins, Verdict::Tie),
            (Verdict::SecondWins, Verdict::Tie),
            (Verdict::Tie, Verdict::SecondWins),
        ] {
            let r = combine_ordered_verdicts("B", "A", v1, v2);
            assert_eq!(
                r,
                Relation::Bidirectional {
                    a: "A".into(),
                    b: "B".into()
                },
                "({v1:?}, {v2:?})"
            );
        }
    }

    #[test]
    fn builds_three_cycle() {
        let mut js = Vec::new();
        js.extend(both_orders("q", "A", "B"));
        js.extend(both_orders("q", "B", "C"));
        js.extend(both_orders("q", "C", "A"));
        let g = TournamentGraph::build("q", &js).unwrap();
        assert!(g.is_complete());
        assert_eq!(g.n(), 3);
        // loser -> winner arcs: B->A, C->B, A->C
        let mut arcs = g.arcs();
        arcs.sort();
        assert_eq!(arcs, vec![(0, 2), (1, 0), (2, 1)]);
        assert_eq!(g.in_degrees(), vec![1, 1, 1]);
    }

    #[test]
    fn tie_pair_is_complete_with_one_bidirectional() {
        let js = [
            Judgment::new("q", "A", "B", Verdict::Tie),
            Judgment::new("q", "B", "A", Verdict::Tie),
        ];
        let g = TournamentGraph::build("q", &js).unwrap();
        assert!(g.is_complete());
        assert_eq!(
            g.relations(),
            vec![Relation::Bidirectional {
                a: "A".into(),
                b: "B".into()
            }]
        );
        assert_eq!(g.in_degrees(), vec![1, 1]);
    }

    #[test]
    fn missing_swap_excludes_pair_and_flags_incomplete() {
        let mut js = Vec::new();
        js.extend(both_orders("q", "A", "B"));
        js.extend(both_orders("q", "A", "C"));
        js.extend(both_orders("q", "A", "D"));
        js.extend(both_orders("q", "B", "C"));
        js.extend(both_orders("q", "B", "D"));
        js.push(Judgment::new("q", "C", "D", Verdict::FirstWins)); // swap missing
        let g = TournamentGraph::build("q", &js).unwrap();
        assert!(!g.is_complete());
        assert_eq!(g.relation_count(), 5);
    }

    #[test]
    fn duplicate_ordered_record_is_an_error() {
        let js = [
            Judgment::new("q", "A", "B", Verdict::FirstWins),
            Judgment::new("q", "A", "B", Verdict::FirstWins),
        ];
        assert!(matches!(
            TournamentGraph::build("q", &js),
            Err(Error::DuplicateJudgment { .. })
        ));
    }

    #[test]
    fn in_degree_examples() {
        // linear order C beats B beats A, C beats A: arcs C<-B<-A plus C<-A
        let mut js = Vec::new();
        js.extend(both_orders("q", "C", "B"));
        js.extend(both_orders("q", "C", "A"));
        js.extend(both_orders("q", "B", "A"));
        let g = TournamentGraph::build("q", &js).unwrap();
        assert_eq!(g.in_degree("A").unwrap(), 0);
        assert_eq!(g.in_degree("B").unwrap(), 1);
        assert_eq!(g.in_degree("C").unwrap(), 2);
        assert_eq!(g.out_degree("A").unwrap(), 2);
        assert!(g.in_degree("Z").is_err());

        // all-ties triangle
        let js: Vec<_> = [("A", "B"), ("B", "C"), ("A", "C")]
            .into_iter()
            .flat_map(|(x, y)| {
                [
                    Judgment::new("q", x, y, Verdict::Tie),
                    Judgment::new("q", y, x, Verdict::Tie),
                ]
            })
            .collect();
        let g = TournamentGraph::build("q", &js).unwrap();
        assert_eq!(g.in_degrees(), vec![2, 2, 2]);
    }

    #[test]
    fn degenerate_graph_still_builds() {
        let g = TournamentGraph::build("q", &[]).unwrap();
        assert!(g.is_degenerate());
        assert!(g.is_complete());
        assert_eq!(g.n(), 0);
    }
}
