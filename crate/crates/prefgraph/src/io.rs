//! File formats, judge-prompt rendering, and reply parsing.
//!
//! All corpus files are UTF-8 line-delimited JSON with LF endings and fixed
//! key order, so reruns are byte-stable. Verdicts are stored as
//! "first"/"second"/"tie" regardless of which prompt template produced them;
//! the m/M/D protocol only exists at the rendering and reply-parsing layer.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Judgment, Verdict};

pub const SYSTEM_TEMPLATE: &str = include_str!("../assets/system.txt");
pub const COT_USER_TEMPLATE: &str = include_str!("../assets/cot_user.txt");
pub const COT_TIE_USER_TEMPLATE: &str = include_str!("../assets/cot_tie_user.txt");

/// Which judge-prompt template a record belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TemplateId {
    #[serde(rename = "cot")]
    Cot,
    #[serde(rename = "cot-tie")]
    CotTieAllowed,
}

impl TemplateId {
    pub fn user_template(self) -> &'static str {
        match self {
            TemplateId::Cot => COT_USER_TEMPLATE,
            TemplateId::CotTieAllowed => COT_TIE_USER_TEMPLATE,
        }
    }

    pub fn allows_tie(self) -> bool {
        matches!(self, TemplateId::CotTieAllowed)
    }
}

/// A fully rendered judge prompt.
#[derive(Debug, Clone, Serialize)]
pub struct PromptBundle {
    pub template_id: TemplateId,
    pub system: String,
    pub user: String,
}

/// One question of a corpus manifest.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Question {
    pub question_id: String,
    pub instruction: String,
}

/// One model response to a question.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Response {
    pub question_id: String,
    pub model_id: String,
    pub text: String,
}

/// A raw judge transcript awaiting reply parsing.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReplyRecord {
    pub question_id: String,
    pub first: String,
    pub second: String,
    pub template: TemplateId,
    pub reply: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

/// A reply that violated the last-character protocol, kept for inspection.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuarantinedReply {
    pub record: ReplyRecord,
    pub reason: String,
}

/// Parse line-delimited judgment records, enforcing ordered-pair uniqueness.
pub fn parse_judgments<R: BufRead>(reader: R) -> Result<Vec<Judgment>> {
    let mut judgments: Vec<Judgment> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::ParseError {
            line: line_no,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let j: Judgment = serde_json::from_str(&line).map_err(|e| {
            // surface an unknown verdict token as its own error kind
            if let Ok(v) = serde_json::from_str::<serde_json::Value>(&line) {
                if let Some(tok) = v.get("verdict").and_then(|t| t.as_str()) {
                    if !matches!(tok, "first" | "second" | "tie") {
                        return Error::BadVerdict {
                            line: line_no,
                            token: tok.to_string(),
                        };
                    }
                }
            }
            Error::ParseError {
                line: line_no,
                message: e.to_string(),
            }
        })?;
        if j.first == j.second {
            return Err(Error::SelfComparison {
                question_id: j.question_id,
                id: j.first,
                line: Some(line_no),
            });
        }
        let key = (j.question_id.clone(), j.first.clone(), j.second.clone());
        if !seen.insert(key) {
            return Err(Error::DuplicateJudgment {
                question_id: j.question_id,
                first: j.first,
                second: j.second,
                line: Some(line_no),
            });
        }
        judgments.push(j);
    }
    Ok(judgments)
}

pub fn read_judgments(path: &Path) -> Result<Vec<Judgment>> {
    let file = File::open(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    parse_judgments(BufReader::new(file))
}

/// Render a judge prompt with single-pass slot substitution.
pub fn render_prompt(
    template_id: TemplateId,
    instruction: &str,
    output_1: &str,
    output_2: &str,
) -> Result<PromptBundle> {
    if instruction.is_empty() {
        return Err(Error::EmptyField {
            field: "instruction",
        });
    }
    if output_1.is_empty() {
        return Err(Error::EmptyField { field: "output_1" });
    }
    if output_2.is_empty() {
        return Err(Error::EmptyField { field: "output_2" });
    }
    let user = substitute(template_id.user_template(), instruction, output_1, output_2);
    Ok(PromptBundle {
        template_id,
        system: SYSTEM_TEMPLATE.trim_end_matches('\n').to_string(),
        user,
    })
}

/// Replace the three slots left to right in one pass, so slot-like text
/// inside the substituted values is never re-expanded.
fn substitute(template: &str, instruction: &str, output_1: &str, output_2: &str) -> String {
    let slots = [
        ("{instruction}", instruction),
        ("{output_1}", output_1),
        ("{output_2}", output_2),
    ];
    let mut out = String::with_capacity(template.len());
    let mut rest = template;
    loop {
        let hit = slots
            .iter()
            .filter_map(|&(slot, value)| rest.find(slot).map(|pos| (pos, slot, value)))
            .min_by_key(|&(pos, _, _)| pos);
        match hit {
            Some((pos, slot, value)) => {
                out.push_str(&rest[..pos]);
                out.push_str(value);
                rest = &rest[pos + slot.len()..];
            }
            None => {
                out.push_str(rest);
                break;
            }
        }
    }
    out.trim_end_matches('\n').to_string()
}

/// Map the last non-whitespace character of a judge reply to a verdict.
pub fn parse_judge_reply(reply: &str, template_id: TemplateId) -> Result<Verdict> {
    let last = reply.trim_end().chars().last();
    match last {
        Some('m') => Ok(Verdict::FirstWins),
        Some('M') => Ok(Verdict::SecondWins),
        Some('D') => {
            if template_id.allows_tie() {
                Ok(Verdict::Tie)
            } else {
                Err(Error::UnexpectedTie)
            }
        }
        other => Err(Error::UnparseableReply { found: other }),
    }
}

/// Parse a batch of transcripts, quarantining protocol violations.
pub fn parse_replies(records: Vec<ReplyRecord>) -> (Vec<Judgment>, Vec<QuarantinedReply>) {
    let mut judgments = Vec::new();
    let mut quarantine = Vec::new();
    for record in records {
        match parse_judge_reply(&record.reply, record.template) {
            Ok(verdict) => judgments.push(Judgment {
                question_id: record.question_id,
                first: record.first,
                second: record.second,
                verdict,
                source: record.source,
            }),
            Err(err) => quarantine.push(QuarantinedReply {
                reason: err.to_string(),
                record,
            }),
        }
    }
    (judgments, quarantine)
}

pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let file = File::open(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    let mut items = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::ParseError {
            line: idx + 1,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        items.push(serde_json::from_str(&line).map_err(|e| Error::ParseError {
            line: idx + 1,
            message: e.to_string(),
        })?);
    }
    Ok(items)
}

pub fn write_jsonl<T: Serialize>(path: &Path, items: &[T]) -> Result<()> {
    let io_err = |e: std::io::Error| Error::Io {
        path: path.display().to_string(),
        source: e,
    };
    let file = File::create(path).map_err(io_err)?;
    let mut writer = BufWriter::new(file);
    for item in items {
        let line = serde_json::to_string(item).expect("serializable record");
        writer.write_all(line.as_bytes()).map_err(io_err)?;
        writer.write_all(b"\n").map_err(io_err)?;
    }
    writer.flush().map_err(io_err)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let io_err = |e: std::io::Error| Error::Io {
        path: path.display().to_string(),
        source: e,
    };
    let mut text = serde_json::to_string_pretty(value).expect("serializable value");
    text.push('\n');
    std::fs::write(path, text).map_err(io_err)
}
