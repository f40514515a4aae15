//! The `gen` command line.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use log::info;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use gen_core::acquisition::{acquire_patterns, AcquisitionReport, Pattern};
use gen_core::annotation::{default_wh_words, load_corpus, load_seeds_with};
use gen_core::feedback::{SimKind, WeighingStrategy};
use gen_core::generation::{generate_all, GeneratedQuestion, MatchStrategy};
use gen_core::metrics::{evaluate_topn, Hypothesis, MetricScores, Reference};
use gen_core::orchestration::{rank_questions, run_session, session_report, ReferenceOracle, SessionContext};
use gen_core::resources::{EmbeddingTable, Resources};
use gen_core::similarity::EquivConfig;

use crate::api::{self, parse_cuts, ConfigRequest};

#[derive(Debug, Parser)]
#[command(name = "gen", version, about = "Pattern-based question generation with reviewer feedback")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Wma,
    Ewaf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimArg {
    Overlap,
    Lev,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleArg {
    Reference,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Learn patterns from seed question/answer pairs.
    Acquire {
        #[arg(long)]
        seeds: PathBuf,
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        resources: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate questions for a corpus from a pattern file.
    Generate {
        #[arg(long)]
        patterns: PathBuf,
        #[arg(long)]
        corpus: PathBuf,
        /// Comma-separated: strict, subtree, subtree_flex, argument.
        #[arg(long, default_value = "strict,subtree,subtree_flex,argument")]
        strategies: String,
        #[arg(long)]
        resources: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a whole session against a simulated reviewer.
    Simulate {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        seeds: PathBuf,
        #[arg(long)]
        reference: PathBuf,
        #[arg(long)]
        resources: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        batch_size: usize,
        #[arg(long, value_enum, default_value_t = StrategyArg::Ewaf)]
        strategy: StrategyArg,
        #[arg(long, value_enum)]
        sim: Option<SimArg>,
        #[arg(long)]
        th: Option<f64>,
        #[arg(long)]
        penalty: Option<f64>,
        #[arg(long)]
        bonus: Option<f64>,
        #[arg(long)]
        shuffle_seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = OracleArg::Reference)]
        oracle: OracleArg,
        #[arg(long, default_value = "5,10,20")]
        top: String,
        #[arg(long)]
        no_harvest: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score ranked hypotheses against a reference.
    Evaluate {
        #[arg(long)]
        hypotheses: PathBuf,
        #[arg(long)]
        reference: PathBuf,
        /// Comma-separated: bleu1, bleu4, rouge, overlap, lev, eacs, vecs, gms.
        #[arg(long, default_value = "bleu1,bleu4,rouge")]
        metrics: String,
        #[arg(long, default_value = "5,10,20")]
        top: String,
        /// Word vectors in word2vec text format; needed for eacs, vecs, gms.
        #[arg(long)]
        embeddings: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Serve the review API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, env = "GEN_DATA_DIR", default_value = "gen-data")]
        data_dir: PathBuf,
    },
}

/// Pattern file written by `acquire`.
#[derive(Debug, Serialize, Deserialize)]
pub struct PatternFile {
    pub schema_version: u32,
    pub report: AcquisitionReport,
    pub patterns: Vec<Pattern>,
}

const PATTERN_SCHEMA: u32 = 1;

fn resources(dir: Option<&Path>) -> Result<Resources> {
    match dir {
        Some(d) => Resources::load_dir(d).with_context(|| format!("loading resources from {}", d.display())),
        None => Ok(Resources::default()),
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

pub fn parse_strategies(s: &str) -> Result<Vec<MatchStrategy>> {
    let out = s
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            serde_json::from_value(Value::String(t.trim().to_lowercase().replace('-', "_")))
                .with_context(|| format!("unknown strategy `{t}`"))
        })
        .collect::<Result<Vec<_>>>()?;
    if out.is_empty() {
        bail!("no matching strategy given");
    }
    Ok(out)
}

pub const METRICS: [&str; 8] = ["bleu1", "bleu4", "rouge", "overlap", "lev", "eacs", "vecs", "gms"];

fn pick(scores: &MetricScores, metric: &str) -> Option<f64> {
    match metric {
        "bleu1" => Some(scores.bleu1),
        "bleu4" => Some(scores.bleu4),
        "rouge" => Some(scores.rouge_l),
        "overlap" => Some(scores.overlap),
        "lev" => Some(scores.lev),
        "eacs" => scores.embedding.map(|e| e.eacs),
        "vecs" => scores.embedding.map(|e| e.vecs),
        "gms" => scores.embedding.map(|e| e.gms),
        _ => None,
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Acquire {
            seeds,
            corpus,
            resources: res_dir,
            out,
        } => {
            let wh = default_wh_words();
            let corpus = load_corpus(&corpus)?;
            let seeds = load_seeds_with(&seeds, &corpus, &wh)?;
            let res = resources(res_dir.as_deref())?;
            let acq = acquire_patterns(&seeds, &EquivConfig::acquisition(), &res, &wh, 0);
            info!("{} seeds, {} patterns", acq.report.seeds, acq.patterns.len());
            for (seed, frame) in &acq.report.rejected_frames {
                info!("seed {seed}: frame {frame} rejected");
            }
            for seed in &acq.report.incomplete_alignments {
                info!("seed {seed}: incomplete alignment");
            }
            println!("{}", acq.patterns.len());
            write_json(
                &out,
                &PatternFile {
                    schema_version: PATTERN_SCHEMA,
                    report: acq.report,
                    patterns: acq.patterns,
                },
            )
        }
        Command::Generate {
            patterns,
            corpus,
            strategies,
            resources: res_dir,
            out,
        } => {
            let text = fs::read_to_string(&patterns).with_context(|| format!("reading {}", patterns.display()))?;
            let file: PatternFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", patterns.display()))?;
            if file.schema_version != PATTERN_SCHEMA {
                bail!("unsupported pattern schema_version {}", file.schema_version);
            }
            let strategies = parse_strategies(&strategies)?;
            let corpus = load_corpus(&corpus)?;
            let res = resources(res_dir.as_deref())?;
            let cfg = EquivConfig::generation();
            let mut all: Vec<GeneratedQuestion> = Vec::new();
            for s in &corpus {
                all.extend(rank_questions(generate_all(&file.patterns, s, &strategies, &cfg, &res), &file.patterns));
            }
            println!("{}", all.len());
            write_json(&out, &all)
        }
        Command::Simulate {
            corpus,
            seeds,
            reference,
            resources: res_dir,
            batch_size,
            strategy,
            sim,
            th,
            penalty,
            bonus,
            shuffle_seed,
            oracle: OracleArg::Reference,
            top,
            no_harvest,
            out,
        } => {
            let cuts = parse_cuts(&top).map_err(anyhow::Error::msg)?;
            let request = ConfigRequest {
                batch_size: Some(batch_size),
                shuffle_seed,
                strategy: Some(match strategy {
                    StrategyArg::Wma => WeighingStrategy::Wma,
                    StrategyArg::Ewaf => WeighingStrategy::Ewaf,
                }),
                sim: sim.map(|s| match s {
                    SimArg::Overlap => SimKind::Overlap,
                    SimArg::Lev => SimKind::Lev,
                }),
                th,
                penalty,
                bonus,
                harvest: Some(!no_harvest),
                ..ConfigRequest::default()
            };
            let (cfg, _warnings) = request.build()?;
            let corpus = load_corpus(&corpus)?;
            let seeds = load_seeds_with(&seeds, &corpus, &cfg.wh_words)?;
            let reference = Reference::load(&reference)?;
            reference.check_ids(corpus.iter().map(|s| s.id.as_str()))?;
            let res = Arc::new(resources(res_dir.as_deref())?);
            let ctx = Arc::new(SessionContext::new(corpus, seeds, res.clone(), cfg.clone())?);
            let (session, events) = run_session(ctx, &ReferenceOracle::new(reference.clone()))?;
            let table = Some(&res.embeddings).filter(|t| !t.is_empty());
            let report = session_report(session.state(), Some(&reference), &cuts, table)?;
            print!("{}", report.render());
            if let Some(out) = out {
                write_json(
                    &out,
                    &json!({ "config": cfg, "report": report, "events": events.len() }),
                )?;
            }
            Ok(())
        }
        Command::Evaluate {
            hypotheses,
            reference,
            metrics,
            top,
            embeddings,
            out,
        } => {
            let cuts = parse_cuts(&top).map_err(anyhow::Error::msg)?;
            let metrics: Vec<String> = metrics
                .split(',')
                .map(|m| m.trim().to_lowercase())
                .filter(|m| !m.is_empty())
                .collect();
            if let Some(bad) = metrics.iter().find(|m| !METRICS.contains(&m.as_str())) {
                bail!("unknown metric `{bad}`");
            }
            let wants_embeddings = metrics.iter().any(|m| matches!(m.as_str(), "eacs" | "vecs" | "gms"));
            let table = match &embeddings {
                Some(p) => Some(EmbeddingTable::parse(
                    &fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
                )?),
                None if wants_embeddings => bail!("eacs, vecs and gms need --embeddings"),
                None => None,
            };
            let text = fs::read_to_string(&hypotheses).with_context(|| format!("reading {}", hypotheses.display()))?;
            let ranked: Vec<Hypothesis> =
                serde_json::from_str(&text).with_context(|| format!("parsing {}", hypotheses.display()))?;
            let reference = Reference::load(&reference)?;
            let report = evaluate_topn(&ranked, &reference, &cuts, table.as_ref())?;
            let mut rows = Vec::new();
            println!("top\tscored\t{}", metrics.join("\t"));
            for c in &report.cuts {
                let values: Vec<Option<f64>> = metrics
                    .iter()
                    .map(|m| c.scores.as_ref().and_then(|s| pick(s, m)))
                    .collect();
                let cells: Vec<String> = values
                    .iter()
                    .map(|v| v.map_or("-".to_string(), |x| format!("{x:.4}")))
                    .collect();
                let flag = if c.truncated { " (truncated)" } else { "" };
                println!("{}\t{}{flag}\t{}", c.cut, c.scored, cells.join("\t"));
                let scores: serde_json::Map<String, Value> =
                    metrics.iter().cloned().zip(values.iter().map(|v| json!(v))).collect();
                rows.push(json!({ "cut": c.cut, "scored": c.scored, "truncated": c.truncated, "scores": scores }));
            }
            if report.empty {
                eprintln!("no hypotheses to score");
            }
            if let Some(out) = out {
                write_json(&out, &json!({ "cuts": rows }))?;
            }
            Ok(())
        }
        Command::Serve { port, data_dir } => {
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(async move {
                let state = api::AppState::new(&data_dir)?;
                let listener = tokio::net::TcpListener::bind(("0.0.0.0", port)).await?;
                info!("serving on port {port}, data in {}", data_dir.display());
                axum::serve(listener, api::router(state))
                    .with_graceful_shutdown(async {
                        let _ = tokio::signal::ctrl_c().await;
                    })
                    .await?;
                Ok(())
            })
        }
    }
}
