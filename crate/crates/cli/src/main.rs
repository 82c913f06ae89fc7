//! `hybridqa`: batch driver for extraction, precision accounting and
//! question answering over a triple store plus a parsed text corpus.

mod config;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use hybridqa::eval::{attach_labels, compute_precision, read_labels};
use hybridqa::ingest::{read_corpus, read_pair};
use hybridqa::{EntityLexicon, Error, ParsedSentence, Resources, SettingSet, SynonymLexicon, TextIndex, TripleStore};

use config::Config;

#[derive(Debug, Parser)]
#[command(name = "hybridqa", version, about = "Relation extraction and hybrid question answering")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Extraction settings, a subset of ABCDEFGH.
    #[arg(long, global = true)]
    settings: Option<String>,
    /// Entity, class and predicate lexicon (TSV).
    #[arg(long, global = true)]
    lexicon: Option<PathBuf>,
    /// Predicate synonym lexicon (TSV).
    #[arg(long, global = true)]
    synlex: Option<PathBuf>,
    /// Knowledge graph triples (TSV).
    #[arg(long, global = true)]
    kg: Option<PathBuf>,
    /// Directory of pre-parsed `.conllu`/`.ptb` documents.
    #[arg(long, global = true)]
    corpus: Option<PathBuf>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// TOML file with default resource paths.
    #[arg(long, env = "HCQA_CONFIG", global = true, hide_env_values = true)]
    config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Extract triples from every sentence of the corpus as JSON lines.
    Extract,
    /// Precision of a labeled extraction file.
    Precision {
        labels: PathBuf,
        /// One row per relation category instead of a single total.
        #[arg(long)]
        by_category: bool,
        #[arg(long)]
        json: bool,
    },
    /// Decompose each question of a parse file into a sub-question tree.
    Decompose(Question),
    /// Query plan for each question of a parse file.
    Plan(Question),
    /// Answer each question of a parse file against the KG and the corpus.
    Answer(Question),
    /// Per-category precision of the corpus under several settings strings.
    Ablate {
        labels: PathBuf,
        /// Settings strings to compare, e.g. `A ABCD ABCDEFH`.
        #[arg(required = true, num_args = 1..)]
        sweep: Vec<String>,
    },
}

#[derive(Debug, Args)]
struct Question {
    /// CoNLL-U file of the question(s).
    conllu: PathBuf,
    /// Bracketed trees; defaults to the `.ptb` file beside the CoNLL-U file.
    #[arg(long)]
    ptb: Option<PathBuf>,
}

/// Paths and settings after merging flags over the config file.
struct Env {
    settings: SettingSet,
    lexicon: Option<PathBuf>,
    synlex: Option<PathBuf>,
    kg: Option<PathBuf>,
    corpus: Option<PathBuf>,
}

impl Env {
    fn resolve(g: &Global) -> Result<Self> {
        let cfg = match &g.config {
            Some(p) => Config::load(p)?,
            None => Config::default(),
        };
        let settings = match g.settings.as_ref().or(cfg.settings.as_ref()) {
            Some(s) => s.parse()?,
            None => SettingSet::default(),
        };
        Ok(Env {
            settings,
            lexicon: g.lexicon.clone().or(cfg.lexicon),
            synlex: g.synlex.clone().or(cfg.synlex),
            kg: g.kg.clone().or(cfg.kg),
            corpus: g.corpus.clone().or(cfg.corpus),
        })
    }

    fn resources(&self) -> Result<Resources> {
        let lexicon = match &self.lexicon {
            Some(p) => EntityLexicon::load(p)?,
            None => EntityLexicon::new(),
        };
        let synonyms = match &self.synlex {
            Some(p) => SynonymLexicon::load(p)?,
            None => SynonymLexicon::default(),
        };
        Ok(Resources::new(lexicon, synonyms).with_settings(self.settings))
    }

    fn corpus(&self) -> Result<&Path> {
        self.corpus.as_deref().ok_or_else(|| missing("--corpus"))
    }
}

/// A required resource named neither by flag nor by the config file.
#[derive(Debug)]
struct Missing(&'static str);

impl std::fmt::Display for Missing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} is required (flag or config file)", self.0)
    }
}

impl std::error::Error for Missing {}

fn missing(flag: &'static str) -> anyhow::Error {
    Missing(flag).into()
}

fn questions(q: &Question) -> Result<Vec<ParsedSentence>> {
    let ptb = q.ptb.clone().unwrap_or_else(|| q.conllu.with_extension("ptb"));
    if q.ptb.is_some() && !ptb.exists() {
        bail!(Error::io(&ptb, std::io::ErrorKind::NotFound.into()));
    }
    Ok(read_pair(&q.conllu, ptb.exists().then_some(ptb.as_path()))?)
}

fn json_lines<'a>(values: impl IntoIterator<Item = &'a Value>) -> String {
    values.into_iter().map(|v| format!("{v}\n")).collect()
}

fn run(cli: Cli) -> Result<String> {
    let env = Env::resolve(&cli.global)?;
    match cli.command {
        Command::Extract => {
            let res = env.resources()?;
            let docs = read_corpus(env.corpus()?)?;
            let mut out = String::new();
            for r in res.extract_corpus(&docs) {
                out.push_str(&serde_json::to_string(&r)?);
                out.push('\n');
            }
            Ok(out)
        }
        Command::Precision { labels, by_category, json } => {
            let table = compute_precision(&read_labels(&labels)?, by_category);
            Ok(if json { format!("{}\n", table.to_json()) } else { table.to_tsv() })
        }
        Command::Decompose(q) => {
            let res = env.resources()?;
            let mut out = Vec::new();
            for sent in questions(&q)? {
                out.push(res.decompose(sent)?.0.to_json());
            }
            Ok(json_lines(&out))
        }
        Command::Plan(q) => {
            let res = env.resources()?;
            let mut out = Vec::new();
            for sent in questions(&q)? {
                out.push(res.plan(sent)?.to_json());
            }
            Ok(json_lines(&out))
        }
        Command::Answer(q) => {
            let res = env.resources()?;
            let store = TripleStore::load(env.kg.as_deref().ok_or_else(|| missing("--kg"))?)?;
            let index = match &env.corpus {
                Some(dir) => res.text_index(read_corpus(dir)?),
                None => TextIndex::new(),
            };
            let mut out = Vec::new();
            for sent in questions(&q)? {
                let id = sent.id.clone();
                let (_, answers) = res.answer(sent, &store, &index)?;
                let mut v = answers.to_json();
                v["sentence_id"] = Value::from(id);
                out.push(v);
            }
            Ok(json_lines(&out))
        }
        Command::Ablate { labels, sweep } => {
            let base = env.resources()?;
            let docs = read_corpus(env.corpus()?)?;
            let annotated = read_labels(&labels)?;
            let mut out = String::from("settings\tbucket\tcounts\tprecision\n");
            for s in &sweep {
                let settings: SettingSet = s.parse()?;
                let res = base.clone().with_settings(settings);
                let records = attach_labels(&res.extract_corpus(&docs), &annotated, &labels);
                let table = compute_precision(&records, true);
                for row in &table.rows {
                    out.push_str(&format!("{settings}\t{}\t{}\t{}\n", row.bucket, row.ratio, row.ratio.format(4)));
                }
            }
            Ok(out)
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let Some(e) = err.chain().find_map(|e| e.downcast_ref::<Error>()) else {
        let input = err.chain().any(|e| e.is::<Missing>() || e.is::<toml::de::Error>() || e.is::<std::io::Error>());
        return if input { 2 } else { 1 };
    };
    match e {
        e if e.is_input_error() => 2,
        Error::NotDecomposable(_) | Error::Trace(_) | Error::Contract(_) => 3,
        Error::Planning { .. } => 4,
        _ => 1,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let out_path = cli.global.out.clone();
    let result = run(cli).and_then(|text| match &out_path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::io(p, e).into()),
        None => std::io::stdout().lock().write_all(text.as_bytes()).context("writing stdout"),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
