#![allow(dead_code)]

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

pub fn hyperdoc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperdoc"))
        .args(args)
        .output()
        .expect("spawn hyperdoc")
}

pub fn code(args: &[&str]) -> i32 {
    hyperdoc(args).status.code().expect("exit code")
}

/// Runs a command that must succeed and returns its JSON summary.
pub fn ok(args: &[&str]) -> Value {
    let out = hyperdoc(args);
    assert!(
        out.status.success(),
        "hyperdoc {args:?} failed with {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("JSON summary")
}

pub fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

pub fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

const FILLER: [(&str, &str); 8] = [
    ("the", "DET"),
    ("of", "ADP"),
    ("large", "ADJ"),
    ("runs", "VERB"),
    ("makes", "VERB"),
    ("green", "ADJ"),
    ("city", "NOUN"),
    ("with", "ADP"),
];

/// Corpus with 20 heads, each followed by a bullet list of its 3 hyponyms,
/// and 200 distractor terms that appear in prose, in distractor lists and in
/// the tagged corpus.
pub struct Planted {
    pub corpus: PathBuf,
    pub docs: Vec<PathBuf>,
    pub vocab: PathBuf,
    pub queries: PathBuf,
    pub gold: PathBuf,
    pub config: PathBuf,
}

pub const HEADS: usize = 20;
pub const DISTRACTORS: usize = 200;

pub fn head(i: usize) -> String {
    format!("head{i:02}")
}

pub fn hyponym(i: usize, j: usize) -> String {
    format!("item{i:02}{}", ['a', 'b', 'c'][j])
}

pub fn distractor(i: usize) -> String {
    format!("noise{i:03}")
}

impl Planted {
    pub fn write(dir: &Path, seed: u64) -> Planted {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let heads: Vec<String> = (0..HEADS).map(head).collect();
        let hypos: Vec<String> = (0..HEADS).flat_map(|i| (0..3).map(move |j| hyponym(i, j))).collect();
        let noise: Vec<String> = (0..DISTRACTORS).map(distractor).collect();
        let all: Vec<&String> = heads.iter().chain(&hypos).chain(&noise).collect();

        let mut tagged = String::new();
        for d in 0..40 {
            writeln!(tagged, "##DOC\tc{d:02}").unwrap();
            for _ in 0..rng.gen_range(2..6) {
                for _ in 0..rng.gen_range(4..16) {
                    if rng.gen_bool(0.5) {
                        let t = all.choose(&mut rng).unwrap();
                        writeln!(tagged, "{t}\t{t}\tNOUN").unwrap();
                    } else {
                        let (w, pos) = FILLER.choose(&mut rng).unwrap();
                        writeln!(tagged, "{w}\t{w}\t{pos}").unwrap();
                    }
                }
                tagged.push('\n');
            }
        }
        let corpus = write(dir, "corpus.tsv", &tagged);

        let mut docs = Vec::new();
        for (i, h) in heads.iter().enumerate() {
            let mut md = String::new();
            let prose: Vec<&String> = noise.choose_multiple(&mut rng, 3).collect();
            writeln!(md, "Notes on {} and {} with {}.\n", prose[0], prose[1], prose[2]).unwrap();
            writeln!(md, "{h} contains the following:").unwrap();
            for j in 0..3 {
                writeln!(md, "- {}", hyponym(i, j)).unwrap();
            }
            md.push('\n');
            let list: Vec<&String> = noise.choose_multiple(&mut rng, 4).collect();
            writeln!(md, "{} has:\n- {}\n- {}\n- {}\n", list[0], list[1], list[2], list[3]).unwrap();
            let other = heads.choose(&mut rng).unwrap();
            writeln!(md, "Also {other} next to {}.", noise.choose(&mut rng).unwrap()).unwrap();
            docs.push(write(dir, &format!("doc{i:02}.md"), &md));
        }

        let vocab_text: String = all.iter().map(|t| format!("{t}\n")).collect();
        let vocab = write(dir, "vocab.txt", &vocab_text);
        let (mut q, mut g) = (String::new(), String::new());
        for (i, h) in heads.iter().enumerate() {
            for j in 0..3 {
                writeln!(q, "{}", hyponym(i, j)).unwrap();
                writeln!(g, "{h}").unwrap();
            }
        }
        let queries = write(dir, "queries.txt", &q);
        let gold = write(dir, "gold.txt", &g);
        let config = write(
            dir,
            "config.json",
            &serde_json::json!({"measures": {"alpha": 0.0, "context_weights": unit_context_weights()}}).to_string(),
        );
        Planted {
            corpus,
            docs,
            vocab,
            queries,
            gold,
            config,
        }
    }

    pub fn doc_args(&self) -> Vec<&str> {
        self.docs.iter().map(|d| p(d)).collect()
    }
}

fn unit_context_weights() -> Value {
    use hyperdoc_core::context::ContextId;
    ContextId::all().map(|c| (c.name().to_string(), Value::from(1.0))).collect::<serde_json::Map<_, _>>().into()
}

/// Runs ingest, build and rank on a planted corpus and returns the
/// predictions path.
pub fn pipeline(dir: &Path, planted: &Planted, jobs: &str) -> PathBuf {
    let normalized = dir.join("normalized.tsv");
    let docjson = dir.join("docs.jsonl");
    let model = dir.join("model");
    let predictions = dir.join("predictions.tsv");
    let cfg = p(&planted.config);
    ok(&["--jobs", jobs, "ingest", "--format", "tagged", "--input", p(&planted.corpus), "--output", p(&normalized)]);
    let mut ingest_docs = vec!["--jobs", jobs, "ingest", "--format", "markdown", "--output", p(&docjson), "--input"];
    ingest_docs.extend(planted.doc_args());
    ok(&ingest_docs);
    ok(&[
        "--jobs", jobs, "build", "--corpus", p(&normalized), "--docs", p(&docjson), "--vocab", p(&planted.vocab),
        "--output", p(&model),
    ]);
    ok(&[
        "--jobs", jobs, "--config", cfg, "rank", "--model", p(&model), "--queries", p(&planted.queries), "--output",
        p(&predictions),
    ]);
    predictions
}

/// Twenty labeled spans, ten of them personal data.
pub const PII_LABELS: [(&str, bool); 20] = [
    ("Employee Record", false),
    ("Welcome to the onboarding packet.", false),
    ("Card on file: ****1234", true),
    ("Reference code XXX-XX-6789", true),
    ("Please sign and date: ________", true),
    ("Attached: passport_scan.pdf", true),
    ("Slides are in overview.pdf", false),
    ("The cafeteria opens at noon on weekdays.", false),
    ("Order a size xxl shirt for the event.", false),
    ("Room 4B", false),
    ("Account number 4417 1234", true),
    ("Patient ID 88231 is printed on the badge.", true),
    ("Personal Information", false),
    ("Name", true),
    ("Date of birth", true),
    ("Medical History", false),
    ("Allergic to penicillin since 2019.", true),
    ("Hi team,", false),
    ("The quarterly review is on Friday.", false),
    ("Jane Roe, 12 Elm Street, +1 555 0100", true),
];

pub fn pii_fixture(dir: &Path) -> Vec<PathBuf> {
    let md = "# Employee Record\n\n\
        Welcome to the onboarding packet.\n\n\
        Card on file: ****1234\n\n\
        Reference code XXX-XX-6789\n\n\
        Please sign and date: ________\n\n\
        Attached: passport_scan.pdf\n\n\
        Slides are in overview.pdf\n\n\
        The cafeteria opens at noon on weekdays.\n\n\
        Order a size xxl shirt for the event.\n\n\
        | Room 4B |\n\n    \
        Account number 4417 1234\n\n\
        ==Patient ID 88231== is printed on the badge.\n\n\
        # Personal Information\n\n\
        | Name | Date of birth |\n\n\
        # Medical History\n\n\
        Allergic to penicillin since 2019.\n";
    let mail = serde_json::json!({
        "id": "mail",
        "genre": "email",
        "blocks": [
            {"kind": "paragraph", "text": "Hi team,"},
            {"kind": "paragraph", "text": "The quarterly review is on Friday."},
            {"kind": "paragraph", "text": "Jane Roe, 12 Elm Street, +1 555 0100"}
        ]
    });
    vec![write(dir, "hr.md", md), write(dir, "mail.json", &mail.to_string())]
}
