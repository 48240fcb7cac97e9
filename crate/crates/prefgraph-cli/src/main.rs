//! Batch command-line interface over the prefgraph library.
//!
//! Every report embeds the tool version, an echo of the semantic
//! configuration, and SHA-256 hashes of the input files, so a report can
//! always be traced back to the exact bytes that produced it. Warnings go to
//! stderr; stdout carries either the human-readable table or the JSON
//! rendering of the same report, selected by `--format`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use prefgraph::corpus::{self, FilterReport};
use prefgraph::error::Error;
use prefgraph::graph::Judgment;
use prefgraph::io::{
    self, Question, ReplyRecord, Response, TemplateId,
};
use prefgraph::metrics::{
    self, AnnotationItem, ConsistencyMode, WinRateRecord,
};
use prefgraph::synth::{self, SynthSpec};

#[derive(Parser)]
#[command(name = "prefgraph", version, about = "Pairwise-preference tournament analysis and purification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute non-transitivity and clarity metrics over a judgment corpus
    Analyze(AnalyzeArgs),
    /// Split a judgment corpus into cleaned and discarded sets
    Filter(FilterArgs),
    /// Evaluate win-rate, agreement, correlation, and similarity metrics
    Metrics(MetricsArgs),
    /// Generate a synthetic corpus with controllable non-transitivity
    Synth(SynthArgs),
    /// Render judge prompts for every ordered response pair
    RenderPrompt(RenderArgs),
    /// Parse judge transcripts into judgment records
    ParseReplies(ParseArgs),
}

#[derive(Args, Clone, Default)]
struct CommonArgs {
    /// Input file (or directory, where a command reads several files)
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Judge prompt template
    #[arg(long, value_enum)]
    template: Option<TemplateArg>,
    /// Generator seed
    #[arg(long)]
    seed: Option<u64>,
    /// Worker pool size (numeric results are thread-count independent)
    #[arg(long)]
    threads: Option<usize>,
    /// Human-consistency scoring mode
    #[arg(long, value_enum)]
    hc_mode: Option<HcModeArg>,
    /// Stdout rendering
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// JSON config file mirroring the flags; explicit flags win
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct FilterArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct MetricsArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct SynthArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Number of models per question
    #[arg(long)]
    models: Option<usize>,
    /// Number of questions
    #[arg(long)]
    questions: Option<usize>,
    /// Probability a pair outcome contradicts the hidden order
    #[arg(long)]
    cycle_rate: Option<f64>,
    /// Probability a pair outcome is a tie
    #[arg(long)]
    tie_rate: Option<f64>,
}

#[derive(Args)]
struct RenderArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct ParseArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum TemplateArg {
    Cot,
    CotTie,
}

impl From<TemplateArg> for TemplateId {
    fn from(value: TemplateArg) -> Self {
        match value {
            TemplateArg::Cot => TemplateId::Cot,
            TemplateArg::CotTie => TemplateId::CotTieAllowed,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum HcModeArg {
    Unanimous,
    Majority,
}

impl From<HcModeArg> for ConsistencyMode {
    fn from(value: HcModeArg) -> Self {
        match value {
            HcModeArg::Unanimous => ConsistencyMode::Unanimous,
            HcModeArg::Majority => ConsistencyMode::Majority,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum FormatArg {
    Json,
    Table,
}

/// JSON config file schema: same names as the flags, everything optional.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    input: Option<PathBuf>,
    out: Option<PathBuf>,
    template: Option<TemplateArg>,
    seed: Option<u64>,
    threads: Option<usize>,
    hc_mode: Option<HcModeArg>,
    format: Option<FormatArg>,
    models: Option<usize>,
    questions: Option<usize>,
    cycle_rate: Option<f64>,
    tie_rate: Option<f64>,
}

/// Fully resolved run configuration (flags over config file over defaults).
struct RunConfig {
    input: Option<PathBuf>,
    out: Option<PathBuf>,
    template: TemplateId,
    template_arg: TemplateArg,
    seed: u64,
    threads: usize,
    hc_mode: ConsistencyMode,
    hc_mode_arg: HcModeArg,
    format: FormatArg,
    models: Option<usize>,
    questions: Option<usize>,
    cycle_rate: Option<f64>,
    tie_rate: Option<f64>,
}

/// Errors carrying the process exit code.
enum CliError {
    Usage(String),
    Purity(String),
}

impl CliError {
    fn code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Purity(_) => ExitCode::from(1),
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Purity(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        match &err {
            Error::PurityViolation { .. } => CliError::Purity(err.to_string()),
            _ => CliError::Usage(err.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(message: impl Into<String>) -> CliError {
    CliError::Usage(message.into())
}

fn resolve_config(common: &CommonArgs, synth: Option<&SynthArgs>) -> CliResult<RunConfig> {
    let file: FileConfig = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| usage(format!("bad config {}: {e}", path.display())))?
        }
        None => FileConfig::default(),
    };
    let template_arg = common
        .template
        .or(file.template)
        .unwrap_or(TemplateArg::Cot);
    let hc_mode_arg = common
        .hc_mode
        .or(file.hc_mode)
        .unwrap_or(HcModeArg::Unanimous);
    Ok(RunConfig {
        input: common.input.clone().or(file.input),
        out: common.out.clone().or(file.out),
        template: template_arg.into(),
        template_arg,
        seed: common.seed.or(file.seed).unwrap_or(0),
        threads: common.threads.or(file.threads).unwrap_or(1).max(1),
        hc_mode: hc_mode_arg.into(),
        hc_mode_arg,
        format: common.format.or(file.format).unwrap_or(FormatArg::Table),
        models: synth.and_then(|s| s.models).or(file.models),
        questions: synth.and_then(|s| s.questions).or(file.questions),
        cycle_rate: synth.and_then(|s| s.cycle_rate).or(file.cycle_rate),
        tie_rate: synth.and_then(|s| s.tie_rate).or(file.tie_rate),
    })
}

impl RunConfig {
    fn input(&self) -> CliResult<&Path> {
        self.input
            .as_deref()
            .ok_or_else(|| usage("--input is required (flag or config file)"))
    }

    fn out(&self) -> CliResult<&Path> {
        self.out
            .as_deref()
            .ok_or_else(|| usage("--out is required (flag or config file)"))
    }

    /// The semantic knobs echoed into reports. Presentation-only options
    /// (format) and performance-only options (threads) are excluded so that
    /// equivalent runs produce byte-identical reports.
    fn echo(&self) -> BTreeMap<&'static str, serde_json::Value> {
        let mut map = BTreeMap::new();
        if let Some(p) = &self.input {
            map.insert("input", serde_json::json!(p.display().to_string()));
        }
        if let Some(p) = &self.out {
            map.insert("out", serde_json::json!(p.display().to_string()));
        }
        map.insert("template", serde_json::to_value(self.template_arg).unwrap());
        map.insert("hc_mode", serde_json::to_value(self.hc_mode_arg).unwrap());
        map.insert("seed", serde_json::json!(self.seed));
        if let Some(m) = self.models {
            map.insert("models", serde_json::json!(m));
        }
        if let Some(q) = self.questions {
            map.insert("questions", serde_json::json!(q));
        }
        if let Some(c) = self.cycle_rate {
            map.insert("cycle_rate", serde_json::json!(c));
        }
        if let Some(t) = self.tie_rate {
            map.insert("tie_rate", serde_json::json!(t));
        }
        map
    }
}

/// Provenance wrapper around every report body.
#[derive(Serialize)]
struct Report<T: Serialize> {
    tool: ToolInfo,
    config: BTreeMap<&'static str, serde_json::Value>,
    inputs: BTreeMap<String, String>,
    report: T,
}

#[derive(Serialize)]
struct ToolInfo {
    name: &'static str,
    version: &'static str,
}

fn envelope<T: Serialize>(
    config: &RunConfig,
    inputs: &[&Path],
    body: T,
) -> CliResult<Report<T>> {
    let mut hashes = BTreeMap::new();
    for path in inputs {
        let bytes = std::fs::read(path)
            .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
        let digest = Sha256::digest(&bytes);
        let hex: String = digest.iter().fold(String::new(), |mut acc, b| {
            let _ = write!(acc, "{b:02x}");
            acc
        });
        hashes.insert(path.display().to_string(), hex);
    }
    Ok(Report {
        tool: ToolInfo {
            name: "prefgraph",
            version: env!("CARGO_PKG_VERSION"),
        },
        config: config.echo(),
        inputs: hashes,
        report: body,
    })
}

fn emit<T: Serialize>(config: &RunConfig, report: &Report<T>, table: String) {
    match config.format {
        FormatArg::Json => {
            println!("{}", serde_json::to_string_pretty(report).expect("serializable report"));
        }
        FormatArg::Table => print!("{table}"),
    }
}

fn read_judgments(path: &Path) -> CliResult<Vec<Judgment>> {
    io::read_judgments(path).map_err(CliError::from)
}

fn cmd_analyze(config: &RunConfig) -> CliResult<()> {
    let input = config.input()?;
    let judgments = read_judgments(input)?;
    let analysis = corpus::analyze_with(&judgments, config.threads)?;
    if !analysis.incomplete_questions.is_empty() {
        eprintln!(
            "warning: {} question(s) excluded for missing swapped orders: {}",
            analysis.incomplete_questions.len(),
            analysis.incomplete_questions.join(", ")
        );
    }

    let mut table = String::new();
    let _ = writeln!(table, "rho        {:.6}", analysis.rho);
    let _ = writeln!(table, "tau_avg    {:.6}", analysis.tau_avg);
    let _ = writeln!(table, "questions  {}", analysis.question_count);
    let _ = writeln!(table, "vertices   {}", analysis.vertex_total);
    let _ = writeln!(table, "excluded   {}", analysis.incomplete_questions.len());
    let _ = writeln!(table);
    let _ = writeln!(table, "{:<16} {:>3} {:>9} {:>9} {:>5} {:>9}", "question", "n", "h2", "tau", "sccs", "nontrans");
    for q in &analysis.per_question {
        let _ = writeln!(
            table,
            "{:<16} {:>3} {:>9.4} {:>9.4} {:>5} {:>9}",
            q.question_id,
            q.n,
            q.h2,
            q.tau,
            q.scc_sizes.len(),
            q.non_transitive_vertices
        );
    }

    let report = envelope(config, &[input], &analysis)?;
    if let Some(out) = config.out.as_deref() {
        std::fs::create_dir_all(out)
            .map_err(|e| usage(format!("cannot create {}: {e}", out.display())))?;
        io::write_json(&out.join("report.json"), &report)?;
    }
    emit(config, &report, table);
    Ok(())
}

fn cmd_filter(config: &RunConfig) -> CliResult<()> {
    let input = config.input()?;
    let out = config.out()?;
    let judgments = read_judgments(input)?;
    let run = corpus::filter_with(&judgments, config.threads)?;
    if !run.skipped_incomplete.is_empty() {
        eprintln!(
            "warning: {} question(s) skipped for missing swapped orders: {}",
            run.skipped_incomplete.len(),
            run.skipped_incomplete.join(", ")
        );
    }
    let body: FilterReport = corpus::filter_report(&judgments, &run)?;
    let report = envelope(config, &[input], &body)?;
    corpus::write_split(out, &run, &report)?;

    let mut table = String::new();
    let _ = writeln!(table, "rho_raw          {:.6}", report.report.rho_raw);
    let _ = writeln!(table, "tau_avg_raw      {:.6}", report.report.tau_avg_raw);
    let _ = writeln!(table, "retention        {:.6}", report.report.retention);
    let _ = writeln!(table, "cleaned_records  {}", report.report.cleaned_records);
    let _ = writeln!(table, "discarded        {}", report.report.discarded_records);
    let _ = writeln!(table, "cleaned_rho      {:.6}", report.report.cleaned_rho);
    let _ = writeln!(table, "cleaned_tau_avg  {:.6}", report.report.cleaned_tau_avg);
    emit(config, &report, table);

    if report.report.cleaned_rho != 0.0 || report.report.cleaned_tau_avg != 0.0 {
        return Err(CliError::Purity(format!(
            "cleaned corpus is not pure: rho={}, tau_avg={} (questions: {})",
            report.report.cleaned_rho,
            report.report.cleaned_tau_avg,
            report.report.cleaned_offenders.join(", ")
        )));
    }
    Ok(())
}

/// Input document for `metrics`: any subset of the sections may be present,
/// and each present section enables the corresponding metric.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MetricsInput {
    #[serde(default)]
    winrates: Option<Vec<WinRateRecord>>,
    #[serde(default)]
    annotations: Option<Vec<AnnotationItem>>,
    #[serde(default)]
    rankings: Option<RankingsInput>,
    #[serde(default)]
    response_pairs: Option<Vec<ResponsePair>>,
}

#[derive(Deserialize)]
struct RankingsInput {
    model_scores: Vec<f64>,
    human_scores: Vec<f64>,
}

#[derive(Deserialize)]
struct ResponsePair {
    pair_id: String,
    text_a: String,
    text_b: String,
}

#[derive(Serialize)]
struct MetricsReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    adjusted_win_rates: Option<Vec<ModelRate>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    win_rate_dispersion: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    human_consistency: Option<HcBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    model_human_agreement: Option<metrics::AgreementReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    spearman: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    self_bleu: Option<SelfBleuBlock>,
}

#[derive(Serialize)]
struct ModelRate {
    model_id: String,
    r_adj: f64,
}

#[derive(Serialize)]
struct HcBlock {
    mode: HcModeArg,
    rate: f64,
}

#[derive(Serialize)]
struct SelfBleuBlock {
    pairs: Vec<PairScore>,
    mean: f64,
}

#[derive(Serialize)]
struct PairScore {
    pair_id: String,
    score: f64,
}

fn cmd_metrics(config: &RunConfig) -> CliResult<()> {
    let input = config.input()?;
    let text = std::fs::read_to_string(input)
        .map_err(|e| usage(format!("cannot read {}: {e}", input.display())))?;
    let parsed: MetricsInput = serde_json::from_str(&text)
        .map_err(|e| usage(format!("bad metrics input {}: {e}", input.display())))?;

    let mut body = MetricsReport {
        adjusted_win_rates: None,
        win_rate_dispersion: None,
        human_consistency: None,
        model_human_agreement: None,
        spearman: None,
        self_bleu: None,
    };

    if let Some(winrates) = &parsed.winrates {
        if winrates.is_empty() {
            return Err(usage("metrics input: winrates section is empty"));
        }
        let mut rates = Vec::new();
        for record in winrates {
            rates.push(ModelRate {
                model_id: record.model_id.clone(),
                r_adj: record.adjusted()?,
            });
        }
        body.adjusted_win_rates = Some(rates);
        if winrates.len() >= 2 {
            body.win_rate_dispersion = Some(metrics::win_rate_dispersion(winrates)?);
        }
    }
    if let Some(annotations) = &parsed.annotations {
        if annotations.is_empty() {
            return Err(usage("metrics input: annotations section is empty"));
        }
        body.human_consistency = Some(HcBlock {
            mode: config.hc_mode_arg,
            rate: metrics::human_consistency(annotations, config.hc_mode)?,
        });
        body.model_human_agreement = Some(metrics::model_human_agreement(annotations)?);
    }
    if let Some(rankings) = &parsed.rankings {
        body.spearman = Some(metrics::spearman(
            &rankings.model_scores,
            &rankings.human_scores,
        )?);
    }
    if let Some(pairs) = &parsed.response_pairs {
        if pairs.is_empty() {
            return Err(usage("metrics input: response_pairs section is empty"));
        }
        let mut scored = Vec::new();
        let mut sum = 0.0;
        for pair in pairs {
            let score = metrics::self_bleu(&pair.text_a, &pair.text_b)?;
            sum += score;
            scored.push(PairScore {
                pair_id: pair.pair_id.clone(),
                score,
            });
        }
        body.self_bleu = Some(SelfBleuBlock {
            mean: sum / scored.len() as f64,
            pairs: scored,
        });
    }

    let report = envelope(config, &[input], &body)?;
    let mut table = String::new();
    if let Some(rates) = &report.report.adjusted_win_rates {
        for rate in rates {
            let _ = writeln!(table, "r_adj[{}]  {:.6}", rate.model_id, rate.r_adj);
        }
    }
    if let Some(sigma) = report.report.win_rate_dispersion {
        let _ = writeln!(table, "win_rate_dispersion  {sigma:.6}");
    }
    if let Some(hc) = &report.report.human_consistency {
        let _ = writeln!(table, "human_consistency    {:.6}", hc.rate);
    }
    if let Some(mha) = &report.report.model_human_agreement {
        let _ = writeln!(table, "model_human_agreement  {:.6} ({} counted, {} excluded)", mha.rate, mha.counted_items, mha.excluded_items);
    }
    if let Some(rho) = report.report.spearman {
        let _ = writeln!(table, "spearman             {rho:.6}");
    }
    if let Some(bleu) = &report.report.self_bleu {
        let _ = writeln!(table, "self_bleu_mean       {:.6}", bleu.mean);
    }
    if let Some(out) = config.out.as_deref() {
        std::fs::create_dir_all(out)
            .map_err(|e| usage(format!("cannot create {}: {e}", out.display())))?;
        io::write_json(&out.join("metrics.json"), &report)?;
    }
    emit(config, &report, table);
    Ok(())
}

#[derive(Serialize)]
struct SynthSummary {
    models: usize,
    questions: usize,
    cycle_rate: f64,
    tie_rate: f64,
    seed: u64,
    rho: f64,
    tau_avg: f64,
    judgment_records: usize,
}

fn cmd_synth(config: &RunConfig) -> CliResult<()> {
    let out = config.out()?;
    let spec = SynthSpec {
        n_models: config.models.ok_or_else(|| usage("--models is required"))?,
        n_questions: config
            .questions
            .ok_or_else(|| usage("--questions is required"))?,
        cycle_rate: config.cycle_rate.unwrap_or(0.0),
        tie_rate: config.tie_rate.unwrap_or(0.0),
        seed: config.seed,
    };
    let (_, judgments) = synth::gen_corpus(&spec)?;
    let analysis = corpus::analyze_with(&judgments, config.threads)?;

    std::fs::create_dir_all(out)
        .map_err(|e| usage(format!("cannot create {}: {e}", out.display())))?;
    let questions: Vec<Question> = (0..spec.n_questions)
        .map(|i| Question {
            question_id: synth::question_id(i),
            instruction: format!("Synthetic instruction {}", synth::question_id(i)),
        })
        .collect();
    let mut responses = Vec::new();
    for q in &questions {
        for m in 0..spec.n_models {
            let model = synth::model_id(m);
            responses.push(Response {
                text: format!("Synthetic response from {model} to {}", q.question_id),
                question_id: q.question_id.clone(),
                model_id: model,
            });
        }
    }
    io::write_jsonl(&out.join("questions.jsonl"), &questions)?;
    io::write_jsonl(&out.join("responses.jsonl"), &responses)?;
    io::write_jsonl(&out.join("judgments.jsonl"), &judgments)?;

    let body = SynthSummary {
        models: spec.n_models,
        questions: spec.n_questions,
        cycle_rate: spec.cycle_rate,
        tie_rate: spec.tie_rate,
        seed: spec.seed,
        rho: analysis.rho,
        tau_avg: analysis.tau_avg,
        judgment_records: judgments.len(),
    };
    let report = envelope(config, &[], body)?;
    let mut table = String::new();
    let _ = writeln!(table, "rho       {:.6}", report.report.rho);
    let _ = writeln!(table, "tau_avg   {:.6}", report.report.tau_avg);
    let _ = writeln!(table, "records   {}", report.report.judgment_records);
    emit(config, &report, table);
    Ok(())
}

#[derive(Serialize)]
struct PromptRecord {
    question_id: String,
    first: String,
    second: String,
    template: TemplateId,
    system: String,
    user: String,
}

fn cmd_render_prompt(config: &RunConfig) -> CliResult<()> {
    let input = config.input()?;
    let out = config.out()?;
    let questions: Vec<Question> = io::read_jsonl(&input.join("questions.jsonl"))?;
    let responses: Vec<Response> = io::read_jsonl(&input.join("responses.jsonl"))?;

    let mut by_question: BTreeMap<&str, Vec<&Response>> = BTreeMap::new();
    for response in &responses {
        by_question
            .entry(&response.question_id)
            .or_default()
            .push(response);
    }
    let mut prompts = Vec::new();
    for question in &questions {
        let Some(rs) = by_question.get(question.question_id.as_str()) else {
            continue;
        };
        for a in rs {
            for b in rs {
                if a.model_id == b.model_id {
                    continue;
                }
                let bundle =
                    io::render_prompt(config.template, &question.instruction, &a.text, &b.text)?;
                prompts.push(PromptRecord {
                    question_id: question.question_id.clone(),
                    first: a.model_id.clone(),
                    second: b.model_id.clone(),
                    template: bundle.template_id,
                    system: bundle.system,
                    user: bundle.user,
                });
            }
        }
    }
    std::fs::create_dir_all(out)
        .map_err(|e| usage(format!("cannot create {}: {e}", out.display())))?;
    io::write_jsonl(&out.join("prompts.jsonl"), &prompts)?;
    eprintln!("rendered {} prompt(s)", prompts.len());
    Ok(())
}

fn cmd_parse_replies(config: &RunConfig) -> CliResult<()> {
    let input = config.input()?;
    let out = config.out()?;
    let records: Vec<ReplyRecord> = io::read_jsonl(input)?;
    let (judgments, quarantined) = io::parse_replies(records);
    std::fs::create_dir_all(out)
        .map_err(|e| usage(format!("cannot create {}: {e}", out.display())))?;
    io::write_jsonl(&out.join("judgments.jsonl"), &judgments)?;
    io::write_jsonl(&out.join("quarantine.jsonl"), &quarantined)?;
    if !quarantined.is_empty() {
        eprintln!(
            "warning: {} repl(ies) quarantined for protocol violations",
            quarantined.len()
        );
    }
    eprintln!("parsed {} judgment(s)", judgments.len());
    Ok(())
}

fn run() -> CliResult<()> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Analyze(args) => cmd_analyze(&resolve_config(&args.common, None)?),
        Command::Filter(args) => cmd_filter(&resolve_config(&args.common, None)?),
        Command::Metrics(args) => cmd_metrics(&resolve_config(&args.common, None)?),
        Command::Synth(args) => cmd_synth(&resolve_config(&args.common, Some(args))?),
        Command::RenderPrompt(args) => cmd_render_prompt(&resolve_config(&args.common, None)?),
        Command::ParseReplies(args) => cmd_parse_replies(&resolve_config(&args.common, None)?),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            err.code()
        }
    }
}
