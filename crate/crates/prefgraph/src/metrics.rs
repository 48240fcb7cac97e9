//! Downstream diagnostics: adjusted win rates, annotator agreement,
//! Spearman rank correlation, and symmetrized sentence BLEU.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Verdict;

/// Win/loss/tie tallies for one model, with ties counted as half wins.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WinRateRecord {
    pub model_id: String,
    pub wins: f64,
    pub losses: f64,
    pub ties: f64,
}

impl WinRateRecord {
    pub fn adjusted(&self) -> Result<f64> {
        adjusted_win_rate(self.wins, self.losses, self.ties)
    }
}

/// r_adj = (w + 0.5 t) / (w + l + t).
pub fn adjusted_win_rate(wins: f64, losses: f64, ties: f64) -> Result<f64> {
    let total = wins + losses + ties;
    if total <= 0.0 {
        return Err(Error::NoComparisons);
    }
    Ok((wins + 0.5 * ties) / total)
}

/// Population standard deviation of the adjusted win rates.
pub fn win_rate_dispersion(records: &[WinRateRecord]) -> Result<f64> {
    if records.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: records.len(),
        });
    }
    let rates: Vec<f64> = records
        .iter()
        .map(|r| r.adjusted())
        .collect::<Result<_>>()?;
    let mean = rates.iter().sum::<f64>() / rates.len() as f64;
    let var = rates.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / rates.len() as f64;
    Ok(var.sqrt())
}

/// One item judged by several human annotators and by the model under test.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnnotationItem {
    pub item_id: String,
    pub annotator_verdicts: Vec<Verdict>,
    pub model_verdict: Verdict,
}

/// How inter-annotator consensus is scored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConsistencyMode {
    /// Every annotator gave the same verdict.
    Unanimous,
    /// Some verdict holds a strict majority.
    Majority,
}

fn majority_verdict(verdicts: &[Verdict]) -> Option<Verdict> {
    let mut counts = [0usize; 3];
    for v in verdicts {
        counts[*v as usize] += 1;
    }
    let best = (0..3).max_by_key(|&i| counts[i]).unwrap();
    if counts[best] * 2 > verdicts.len() {
        Some(match best {
            0 => Verdict::FirstWins,
            1 => Verdict::SecondWins,
            _ => Verdict::Tie,
        })
    } else {
        None
    }
}

/// Fraction of items where the annotators agree (per the chosen mode).
pub fn human_consistency(items: &[AnnotationItem], mode: ConsistencyMode) -> Result<f64> {
    if items.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let consistent = items
        .iter()
        .filter(|item| match mode {
            ConsistencyMode::Unanimous => item
                .annotator_verdicts
                .windows(2)
                .all(|w| w[0] == w[1]),
            ConsistencyMode::Majority => majority_verdict(&item.annotator_verdicts).is_some(),
        })
        .count();
    Ok(consistent as f64 / items.len() as f64)
}

/// Model agreement against the annotators' strict-majority verdict.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AgreementReport {
    pub rate: f64,
    pub counted_items: usize,
    /// Items without a strict majority, excluded from the denominator.
    pub excluded_items: usize,
}

pub fn model_human_agreement(items: &[AnnotationItem]) -> Result<AgreementReport> {
    if items.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut counted = 0usize;
    let mut agreed = 0usize;
    for item in items {
        match majority_verdict(&item.annotator_verdicts) {
            Some(majority) => {
                counted += 1;
                if item.model_verdict == majority {
                    agreed += 1;
                }
            }
            None => {}
        }
    }
    if counted == 0 {
        return Err(Error::NoMajorityItems);
    }
    Ok(AgreementReport {
        rate: agreed as f64 / counted as f64,
        counted_items: counted,
        excluded_items: items.len() - counted,
    })
}

/// Average ranks with ties sharing the mean of their positions.
fn average_ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("non-finite rank value"));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation with average-rank tie handling.
pub fn spearman(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::RankMismatch {
            a: a.len(),
            b: b.len(),
        });
    }
    if a.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: a.len(),
        });
    }
    let ra = average_ranks(a);
    let rb = average_ranks(b);
    let n = ra.len() as f64;
    let mean = (n + 1.0) / 2.0;
    let mut cov = 0.0;
    let mut var_a = 0.0;
    let mut var_b = 0.0;
    for i in 0..ra.len() {
        let da = ra[i] - mean;
        let db = rb[i] - mean;
        cov += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if var_a == 0.0 || var_b == 0.0 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: 1,
        });
    }
    Ok(cov / (var_a * var_b).sqrt())
}

const BLEU_MAX_ORDER: usize = 4;

fn tokenize(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split_whitespace()
        .map(|s| s.to_string())
        .collect()
}

fn ngram_counts<'a>(
    tokens: &'a [String],
    order: usize,
) -> std::collections::HashMap<&'a [String], usize> {
    let mut counts = std::collections::HashMap::new();
    if tokens.len() >= order {
        for window in tokens.windows(order) {
            *counts.entry(window).or_insert(0) += 1;
        }
    }
    counts
}

/// Sentence BLEU of `candidate` against `reference`: orders 1..4, uniform
/// weights, add-one smoothing on orders >= 2, standard brevity penalty.
fn sentence_bleu(candidate: &[String], reference: &[String]) -> f64 {
    let mut log_sum = 0.0;
    for order in 1..=BLEU_MAX_ORDER {
        let cand = ngram_counts(candidate, order);
        let reference_counts = ngram_counts(reference, order);
        let total: usize = cand.values().sum();
        let mut matched = 0usize;
        for (gram, &count) in &cand {
            if let Some(&ref_count) = reference_counts.get(gram) {
                matched += count.min(ref_count);
            }
        }
        let precision = if order == 1 {
            if total == 0 {
                return 0.0;
            }
            matched as f64 / total as f64
        } else {
            (matched + 1) as f64 / (total + 1) as f64
        };
        if precision == 0.0 {
            return 0.0;
        }
        log_sum += precision.ln() / BLEU_MAX_ORDER as f64;
    }
    let bp = if candidate.len() >= reference.len() {
        1.0
    } else {
        (1.0 - reference.len() as f64 / candidate.len() as f64).exp()
    };
    bp * log_sum.exp()
}

/// Symmetrized sentence-level BLEU between two texts.
pub fn self_bleu(text_a: &str, text_b: &str) -> Result<f64> {
    let a = tokenize(text_a);
    let b = tokenize(text_b);
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyText);
    }
    Ok(0.5 * (sentence_bleu(&a, &b) + sentence_bleu(&b, &a)))
}
