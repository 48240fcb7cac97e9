//! Synthetic corpora with controllable non-transitivity, plus brute-force
//! oracles used by the property and acceptance tests.
//!
//! Generation draws a hidden total order per question and then flips or ties
//! individual pair outcomes. The oracles deliberately re-derive everything
//! from the public relation list with naive algorithms; they share no code
//! with the production SCC or entropy paths.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::graph::{Judgment, Relation, TournamentGraph, Verdict};

const ORACLE_LIMIT: usize = 12;

/// Parameters for corpus generation.
#[derive(Debug, Clone, Copy)]
pub struct SynthSpec {
    pub n_models: usize,
    pub n_questions: usize,
    /// Probability a pair outcome is flipped against the hidden order.
    pub cycle_rate: f64,
    /// Probability a pair outcome becomes a tie.
    pub tie_rate: f64,
    pub seed: u64,
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_models < 2 {
            return Err(Error::BadSpec {
                reason: format!("n_models must be >= 2, got {}", self.n_models),
            });
        }
        if self.n_questions < 1 {
            return Err(Error::BadSpec {
                reason: "n_questions must be >= 1".into(),
            });
        }
        for (name, rate) in [("cycle_rate", self.cycle_rate), ("tie_rate", self.tie_rate)] {
            if !(0.0..=1.0).contains(&rate) || !rate.is_finite() {
                return Err(Error::BadSpec {
                    reason: format!("{name} must be in [0, 1], got {rate}"),
                });
            }
        }
        if self.cycle_rate + self.tie_rate > 1.0 {
            return Err(Error::BadSpec {
                reason: format!(
                    "cycle_rate + tie_rate must be <= 1, got {}",
                    self.cycle_rate + self.tie_rate
                ),
            });
        }
        Ok(())
    }
}

fn question_rng(seed: u64, question: usize) -> ChaCha12Rng {
    // splitmix-style mixing keeps per-question streams independent of
    // scheduling order
    let mut z = seed ^ (question as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    ChaCha12Rng::seed_from_u64(z ^ (z >> 31))
}

pub fn model_id(i: usize) -> String {
    format!("m{i:03}")
}

pub fn question_id(i: usize) -> String {
    format!("q{i:04}")
}

/// Generate per-question graphs and the matching position-swapped records.
pub fn gen_corpus(spec: &SynthSpec) -> Result<(Vec<TournamentGraph>, Vec<Judgment>)> {
    spec.validate()?;
    let models: Vec<String> = (0..spec.n_models).map(model_id).collect();
    let mut graphs = Vec::with_capacity(spec.n_questions);
    let mut judgments = Vec::new();
    for q in 0..spec.n_questions {
        let qid = question_id(q);
        let mut rng = question_rng(spec.seed, q);
        let mut rank: Vec<usize> = (0..spec.n_models).collect();
        rank.shuffle(&mut rng); // rank[i] = hidden quality of model i (higher wins)

        let mut question_judgments = Vec::new();
        for i in 0..spec.n_models {
            for j in i + 1..spec.n_models {
                let (better, worse) = if rank[i] > rank[j] { (i, j) } else { (j, i) };
                let u: f64 = rng.random();
                let outcome = if u < spec.tie_rate {
                    None
                } else if u < spec.tie_rate + spec.cycle_rate {
                    Some((worse, better))
                } else {
                    Some((better, worse))
                };
                match outcome {
                    Some((winner, loser)) => {
                        question_judgments.push(Judgment::new(
                            &qid,
                            &models[winner],
                            &models[loser],
                            Verdict::FirstWins,
                        ));
                        question_judgments.push(Judgment::new(
                            &qid,
                            &models[loser],
                            &models[winner],
                            Verdict::SecondWins,
                        ));
                    }
                    None => {
                        question_judgments.push(Judgment::new(
                            &qid,
                            &models[i],
                            &models[j],
                            Verdict::Tie,
                        ));
                        question_judgments.push(Judgment::new(
                            &qid,
                            &models[j],
                            &models[i],
                            Verdict::Tie,
                        ));
                    }
                }
            }
        }
        graphs.push(TournamentGraph::build(&qid, &question_judgments)?);
        judgments.extend(question_judgments);
    }
    Ok((graphs, judgments))
}

/// A uniformly random complete tournament, for oracle cross-checks.
pub fn random_tournament(question_id: &str, n: usize, tie_prob: f64, seed: u64) -> TournamentGraph {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let vertices: Vec<String> = (0..n).map(model_id).collect();
    let mut relations = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let u: f64 = rng.random();
            relations.push(if u < tie_prob {
                Relation::Bidirectional {
                    a: vertices[i].clone(),
                    b: vertices[j].clone(),
                }
            } else if rng.random::<bool>() {
                Relation::Directed {
                    winner: vertices[i].clone(),
                    loser: vertices[j].clone(),
                }
            } else {
                Relation::Directed {
                    winner: vertices[j].clone(),
                    loser: vertices[i].clone(),
                }
            });
        }
    }
    TournamentGraph::from_relations(question_id, vertices, &relations)
        .expect("vertices cover all relations")
}

/// Expand relations to directed arcs without touching the graph's own arc
/// expansion, so the oracles stay independent.
fn oracle_arcs(graph: &TournamentGraph) -> Vec<(usize, usize)> {
    let index = |id: &str| graph.vertex_index(id).expect("vertex present");
    let mut arcs = Vec::new();
    for relation in graph.relations() {
        match relation {
            Relation::Directed { winner, loser } => arcs.push((index(&loser), index(&winner))),
            Relation::Bidirectional { a, b } => {
                let (i, j) = (index(&a), index(&b));
                arcs.push((i, j));
                arcs.push((j, i));
            }
        }
    }
    arcs
}

/// Mutual-reachability partition via transitive closure (repeated squaring).
pub fn brute_force_scc(graph: &TournamentGraph) -> Result<Vec<Vec<usize>>> {
    let n = graph.n();
    if n > ORACLE_LIMIT {
        return Err(Error::OracleLimit {
            limit: ORACLE_LIMIT,
            got: n,
        });
    }
    let mut reach = vec![vec![false; n]; n];
    for i in 0..n {
        reach[i][i] = true;
    }
    for (u, v) in oracle_arcs(graph) {
        reach[u][v] = true;
    }
    loop {
        let mut next = reach.clone();
        for i in 0..n {
            for j in 0..n {
                if !next[i][j] {
                    next[i][j] = (0..n).any(|k| reach[i][k] && reach[k][j]);
                }
            }
        }
        if next == reach {
            break;
        }
        reach = next;
    }

    let mut assigned = vec![false; n];
    let mut partition = Vec::new();
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        let mut component = Vec::new();
        for j in 0..n {
            if reach[i][j] && reach[j][i] {
                component.push(j);
                assigned[j] = true;
            }
        }
        partition.push(component);
    }
    partition.sort_by_key(|c| c[0]);
    Ok(partition)
}

/// Literal term-by-term evaluation of the two-dimensional entropy formula
/// over the brute-force partition.
pub fn brute_force_entropy(graph: &TournamentGraph) -> Result<f64> {
    let n = graph.n();
    if n > ORACLE_LIMIT {
        return Err(Error::OracleLimit {
            limit: ORACLE_LIMIT,
            got: n,
        });
    }
    let partition = brute_force_scc(graph)?;
    let arcs = oracle_arcs(graph);

    let mut in_degree = vec![0usize; n];
    for &(_, v) in &arcs {
        in_degree[v] += 1;
    }
    let mut component_of = vec![0usize; n];
    for (ci, comp) in partition.iter().enumerate() {
        for &v in comp {
            component_of[v] = ci;
        }
    }
    let volumes: Vec<usize> = partition
        .iter()
        .map(|c| c.iter().map(|&v| in_degree[v]).sum())
        .collect();
    let v_g: usize = volumes.iter().sum();
    if v_g == 0 {
        return Ok(0.0);
    }
    let mut g = vec![0usize; partition.len()];
    for &(u, v) in &arcs {
        let (cu, cv) = (component_of[u], component_of[v]);
        if cu != cv && !(partition[cu].len() == 1 && partition[cv].len() == 1) {
            g[cv] += 1;
        }
    }

    let v_g = v_g as f64;
    let mut h2 = 0.0;
    for (j, comp) in partition.iter().enumerate() {
        let v_j = volumes[j] as f64;
        if volumes[j] == 0 {
            continue;
        }
        h2 -= g[j] as f64 / v_g * (v_j / v_g).log2();
        for &v in comp {
            let d = in_degree[v] as f64;
            if d > 0.0 {
                h2 -= v_j / v_g * (d / v_j) * (d / v_j).log2();
            }
        }
    }
    Ok(h2)
}
