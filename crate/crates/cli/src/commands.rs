use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;

use hyperdoc_core::context::{count_structure, ContextConfig, StructureStats};
use hyperdoc_core::ingest::corpus::parse_tagged_corpus_with_default;
use hyperdoc_core::ingest::text;
use hyperdoc_core::ingest::vocab::DEFAULT_MIN_LENGTH;
use hyperdoc_core::ingest::{
    load_vocabulary, parse_docjson, parse_markdown, to_docjson, write_tagged_corpus, Block, StructuredDocument,
    TokenizedCorpus,
};
use hyperdoc_core::measures::{InclusionMeasure, MeasureConfig};
use hyperdoc_core::pii::{scan_documents, write_report};
use hyperdoc_core::rank::{
    evaluate, read_gold, read_predictions, read_queries, write_predictions, PrecisionNorm, RankedResult, Scorer,
    DEFAULT_TOP_K,
};
use hyperdoc_core::space::{build_matrix, read_space, weight, write_space, SpaceSidecar, WeightedSpace, Weighting};
use hyperdoc_core::par;

use crate::config::{existing, required, RunConfig};
use crate::error::CliError;
use crate::{BuildArgs, EvalArgs, IngestArgs, PiiArgs, RankArgs};

pub const SPACE_FILE: &str = "space.bin";
pub const SPACE_SIDECAR: &str = "space.json";
pub const STATS_FILE: &str = "stats.json";

fn reader(path: &Path) -> anyhow::Result<BufReader<File>> {
    let f = File::open(existing(path)?).with_context(|| format!("opening {}", path.display()))?;
    Ok(BufReader::new(f))
}

fn writer(path: &Path) -> anyhow::Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "doc".into())
}

fn print_json<T: Serialize>(value: &T) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn is_markdown(path: &Path) -> bool {
    matches!(
        path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref(),
        Some("md" | "markdown")
    )
}

/// Doc JSON: a single document, or several concatenated (one per line).
fn read_docjson(path: &Path) -> anyhow::Result<Vec<StructuredDocument>> {
    let text = fs::read_to_string(existing(path)?).with_context(|| format!("reading {}", path.display()))?;
    let stream = serde_json::Deserializer::from_str(&text).into_iter::<serde_json::Value>();
    let mut docs = Vec::new();
    for (i, value) in stream.enumerate() {
        let value = value.with_context(|| format!("{}: document {}", path.display(), i + 1))?;
        let doc = parse_docjson(&value.to_string()).with_context(|| format!("{}: document {}", path.display(), i + 1))?;
        docs.push(doc);
    }
    Ok(docs)
}

fn read_markdown(path: &Path) -> anyhow::Result<StructuredDocument> {
    let text = fs::read_to_string(existing(path)?).with_context(|| format!("reading {}", path.display()))?;
    Ok(parse_markdown(&stem(path), &text))
}

/// Markdown files by extension, everything else as Doc JSON.
pub fn load_docs(paths: &[PathBuf]) -> anyhow::Result<Vec<StructuredDocument>> {
    for p in paths {
        existing(p)?;
    }
    let parsed = par::map(paths, |p| {
        if is_markdown(p) {
            read_markdown(p).map(|d| vec![d])
        } else {
            read_docjson(p)
        }
    });
    let mut docs = Vec::new();
    for part in parsed {
        docs.extend(part?);
    }
    Ok(docs)
}

fn load_corpus(path: &Path) -> anyhow::Result<TokenizedCorpus> {
    parse_tagged_corpus_with_default(reader(path)?, &stem(path)).with_context(|| format!("parsing {}", path.display()))
}

#[derive(Serialize)]
struct IngestSummary {
    docs: usize,
    sentences: usize,
    tokens: usize,
}

fn count_blocks(blocks: &[Block], sentences: &mut usize, tokens: &mut usize) {
    for b in blocks {
        if !b.text.trim().is_empty() {
            *sentences += text::sentences(&b.text).len();
            *tokens += text::words(&b.text).len();
        }
        count_blocks(&b.children, sentences, tokens);
    }
}

pub fn ingest(args: &IngestArgs, cfg: &RunConfig) -> anyhow::Result<()> {
    let format = required(args.format.clone().or_else(|| cfg.format.clone()), "--format")?;
    let inputs = if args.input.is_empty() { cfg.paths.inputs.clone() } else { args.input.clone() };
    if inputs.is_empty() {
        return Err(CliError::MissingSetting("--input").into());
    }
    let output = required(args.output.clone().or_else(|| cfg.paths.output.clone()), "--output")?;
    for p in &inputs {
        existing(p)?;
    }
    let summary = match format.as_str() {
        "tagged" => {
            let parts = par::map(&inputs, |p| load_corpus(p));
            let mut corpus = TokenizedCorpus::default();
            for part in parts {
                corpus.extend(part?)?;
            }
            write_tagged_corpus(&corpus, writer(&output)?)?;
            IngestSummary {
                docs: corpus.documents.len(),
                sentences: corpus.sentence_count(),
                tokens: corpus.token_count(),
            }
        }
        "markdown" | "docjson" => {
            let docs = if format == "markdown" {
                par::map(&inputs, |p| read_markdown(p)).into_iter().collect::<anyhow::Result<Vec<_>>>()?
            } else {
                let mut all = Vec::new();
                for part in par::map(&inputs, |p| read_docjson(p)) {
                    all.extend(part?);
                }
                all
            };
            let mut out = writer(&output)?;
            let (mut sentences, mut tokens) = (0, 0);
            for d in &docs {
                writeln!(out, "{}", to_docjson(d))?;
                count_blocks(&d.blocks, &mut sentences, &mut tokens);
            }
            out.flush()?;
            IngestSummary {
                docs: docs.len(),
                sentences,
                tokens,
            }
        }
        other => {
            return Err(CliError::BadValue {
                name: "--format",
                message: format!("{other:?} is not one of tagged, markdown, docjson"),
            }
            .into())
        }
    };
    print_json(&summary)
}

#[derive(Serialize)]
struct BuildSummary {
    terms: usize,
    features: usize,
    nnz: usize,
    vocabulary: usize,
    context: String,
    weighting: &'static str,
    documents: usize,
    structured_documents: usize,
}

pub fn build(args: &BuildArgs, cfg: &RunConfig) -> anyhow::Result<()> {
    let corpus_path = args.corpus.clone().or_else(|| cfg.paths.corpus.clone());
    let doc_paths = if args.docs.is_empty() { cfg.paths.docs.clone() } else { args.docs.clone() };
    if corpus_path.is_none() && doc_paths.is_empty() {
        return Err(CliError::MissingSetting("--corpus or --docs").into());
    }
    let vocab_path = required(args.vocab.clone().or_else(|| cfg.paths.vocab.clone()), "--vocab")?;
    let out_dir = required(args.output.clone().or_else(|| cfg.paths.model.clone()), "--output")?;
    let context = match &args.context {
        Some(name) => ContextConfig::from_name(name)?,
        None => cfg.context.clone().unwrap_or_default(),
    };
    context.validate()?;
    let structure_cfg = cfg.structure.clone().unwrap_or_default();
    structure_cfg.validate()?;
    let scheme: Weighting = args
        .weighting
        .as_deref()
        .or(cfg.weighting.as_deref())
        .unwrap_or("ppmi")
        .parse()?;
    let min_length = args.min_length.or(cfg.min_length).unwrap_or(DEFAULT_MIN_LENGTH);
    let min_frequency = args.min_frequency.or(cfg.min_frequency).unwrap_or(0);

    if let Some(p) = &corpus_path {
        existing(p)?;
    }
    let vocab = load_vocabulary(reader(&vocab_path)?, min_length, min_frequency)
        .with_context(|| format!("loading vocabulary {}", vocab_path.display()))?;
    let corpus = match &corpus_path {
        Some(p) => load_corpus(p)?,
        None => TokenizedCorpus::default(),
    };
    let docs = load_docs(&doc_paths)?;

    let matrix = build_matrix(&corpus, &vocab, &context);
    let stats = count_structure(&docs, &vocab, &structure_cfg);
    let space = if matrix.total() > 0 {
        weight(&matrix, scheme)?
    } else if !stats.is_empty() {
        WeightedSpace::empty(scheme)
    } else {
        return Err(CliError::EmptyModel.into());
    };

    fs::create_dir_all(&out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let mut w = writer(&out_dir.join(SPACE_FILE))?;
    write_space(&space, &mut w)?;
    w.flush()?;
    let sidecar = SpaceSidecar::describe(&space);
    let mut w = writer(&out_dir.join(SPACE_SIDECAR))?;
    serde_json::to_writer_pretty(&mut w, &sidecar)?;
    writeln!(w)?;
    w.flush()?;
    let mut w = writer(&out_dir.join(STATS_FILE))?;
    w.write_all(stats.to_json().as_bytes())?;
    writeln!(w)?;
    w.flush()?;

    print_json(&BuildSummary {
        terms: sidecar.terms,
        features: sidecar.features,
        nnz: sidecar.nnz,
        vocabulary: vocab.len(),
        context: context.name(),
        weighting: scheme.name(),
        documents: corpus.documents.len(),
        structured_documents: docs.len(),
    })
}

pub fn load_model(dir: &Path) -> anyhow::Result<(WeightedSpace, StructureStats)> {
    let space = read_space(reader(&dir.join(SPACE_FILE))?).with_context(|| format!("reading {}", dir.join(SPACE_FILE).display()))?;
    let stats_path = dir.join(STATS_FILE);
    let text = fs::read_to_string(existing(&stats_path)?)?;
    let stats = StructureStats::from_json(&text).with_context(|| format!("reading {}", stats_path.display()))?;
    Ok((space, stats))
}

#[derive(Serialize)]
struct ScoredLine<'a> {
    query: &'a str,
    candidates: Vec<(&'a str, f64)>,
}

#[derive(Serialize)]
struct RankSummary {
    queries: usize,
    k: usize,
    measure: &'static str,
    alpha: f64,
}

fn measure_config(cfg: &RunConfig, alpha: Option<f64>) -> anyhow::Result<MeasureConfig> {
    let mut m = cfg.measures.clone().unwrap_or_default();
    if let Some(a) = alpha {
        m.alpha = a;
    }
    m.validate()?;
    Ok(m)
}

pub fn rank(args: &RankArgs, cfg: &RunConfig) -> anyhow::Result<()> {
    let model = required(args.model.clone().or_else(|| cfg.paths.model.clone()), "--model")?;
    let queries_path = required(args.queries.clone().or_else(|| cfg.paths.queries.clone()), "--queries")?;
    let output = required(
        args.output.clone().or_else(|| cfg.paths.predictions.clone()).or_else(|| cfg.paths.output.clone()),
        "--output",
    )?;
    let scores_path = args.scores.clone().or_else(|| cfg.paths.scores.clone());
    let measure: InclusionMeasure = args.measure.as_deref().or(cfg.measure.as_deref()).unwrap_or("clarkede").parse()?;
    let k = args.topk.or(cfg.k).unwrap_or(DEFAULT_TOP_K);
    if k == 0 {
        return Err(CliError::BadValue {
            name: "--topk",
            message: "must be at least 1".into(),
        }
        .into());
    }
    let mcfg = measure_config(cfg, args.alpha)?;
    existing(&model)?;
    let queries = read_queries(reader(&queries_path)?).with_context(|| format!("reading {}", queries_path.display()))?;
    let (space, stats) = load_model(&model)?;

    let scorer = Scorer::new(&space, &stats, &mcfg, measure)?;
    let results: Vec<RankedResult> = scorer.rank_all(&queries, k)?;
    let mut out = writer(&output)?;
    write_predictions(&mut out, &results)?;
    if let Some(p) = scores_path {
        let mut w = writer(&p)?;
        for r in &results {
            let line = ScoredLine {
                query: &r.query,
                candidates: r.candidates.iter().map(|(t, s)| (t.as_str(), *s)).collect(),
            };
            serde_json::to_writer(&mut w, &line)?;
            writeln!(w)?;
        }
        w.flush()?;
    }
    print_json(&RankSummary {
        queries: results.len(),
        k,
        measure: measure.name(),
        alpha: mcfg.alpha,
    })
}

fn read_lines_with<T>(path: &Path, f: impl FnOnce(BufReader<File>) -> hyperdoc_core::Result<T>) -> anyhow::Result<T> {
    let r = reader(path)?;
    f(r).with_context(|| format!("reading {}", path.display()))
}

pub fn eval(args: &EvalArgs, cfg: &RunConfig) -> anyhow::Result<()> {
    let queries_path = required(args.queries.clone().or_else(|| cfg.paths.queries.clone()), "--queries")?;
    let gold_path = required(args.gold.clone().or_else(|| cfg.paths.gold.clone()), "--gold")?;
    let pred_path = required(args.predictions.clone().or_else(|| cfg.paths.predictions.clone()), "--predictions")?;
    let k = args.k.or(cfg.eval_k).unwrap_or(5);
    let norm = if args.raw_precision || cfg.raw_precision.unwrap_or(false) {
        PrecisionNorm::Raw
    } else {
        PrecisionNorm::Capped
    };
    for p in [&queries_path, &gold_path, &pred_path] {
        existing(p)?;
    }
    let queries = read_lines_with(&queries_path, read_queries)?;
    let gold = read_lines_with(&gold_path, read_gold)?;
    let predictions = read_lines_with(&pred_path, read_predictions)?;
    let report = evaluate(&queries, &gold, &predictions, k, norm)?;
    print_json(&report)
}

#[derive(Serialize)]
struct PiiSummary {
    spans: usize,
    flagged: usize,
}

pub fn pii_scan(args: &PiiArgs, cfg: &RunConfig) -> anyhow::Result<()> {
    let doc_paths = if args.docs.is_empty() { cfg.paths.docs.clone() } else { args.docs.clone() };
    if doc_paths.is_empty() {
        return Err(CliError::MissingSetting("--docs").into());
    }
    let output = required(args.output.clone().or_else(|| cfg.paths.output.clone()), "--output")?;
    let mut pcfg = cfg.pii.clone().unwrap_or_default();
    if let Some(t) = args.threshold {
        pcfg.threshold = t;
    }
    let docs = load_docs(&doc_paths)?;
    let spans = scan_documents(&docs, &pcfg)?;
    write_report(writer(&output)?, &spans)?;
    print_json(&PiiSummary {
        spans: spans.len(),
        flagged: spans.iter().filter(|s| s.flagged).count(),
    })
}
