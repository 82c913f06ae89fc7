//! Precision accounting over labeled extraction output.

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::extract::{Category, TemplateId, TripleRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    True,
    False,
    Unlabeled,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalRecord {
    pub triple: TripleRecord,
    pub label: Label,
    /// Annotation file the label was read from.
    pub annotator_source: PathBuf,
}

#[derive(Deserialize)]
struct LabeledLine {
    #[serde(flatten)]
    triple: TripleRecord,
    #[serde(default)]
    label: Option<Value>,
}

fn parse_label(v: Option<&Value>) -> std::result::Result<Label, String> {
    match v {
        None | Some(Value::Null) => Ok(Label::Unlabeled),
        Some(Value::Bool(true)) => Ok(Label::True),
        Some(Value::Bool(false)) => Ok(Label::False),
        Some(Value::String(s)) => match s.to_ascii_lowercase().as_str() {
            "true" => Ok(Label::True),
            "false" => Ok(Label::False),
            "" | "unlabeled" => Ok(Label::Unlabeled),
            other => Err(format!("unknown label {other:?}")),
        },
        Some(other) => Err(format!("unknown label {other}")),
    }
}

/// Extraction records (one JSON object per line) with a `label` field of
/// `true`, `false` or absent.
pub fn read_labels_str(text: &str, source: &Path) -> Result<Vec<EvalRecord>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let err = |message: String| Error::Lexicon { path: source.display().to_string(), line: n + 1, message };
        let parsed: LabeledLine = serde_json::from_str(line).map_err(|e| err(e.to_string()))?;
        let label = parse_label(parsed.label.as_ref()).map_err(err)?;
        out.push(EvalRecord { triple: parsed.triple, label, annotator_source: source.to_path_buf() });
    }
    Ok(out)
}

pub fn read_labels(path: &Path) -> Result<Vec<EvalRecord>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    read_labels_str(&text, path)
}

type RecordKey<'a> = (&'a str, TemplateId, &'a str, &'a str, &'a str);

fn record_key(t: &TripleRecord) -> RecordKey<'_> {
    (&t.sentence_id, t.template_id, &t.subject, &t.predicate, &t.object)
}

/// Labels freshly extracted records from an annotated run of the same corpus.
///
/// A record matches a label on sentence, template and the three terms;
/// records nobody annotated stay unlabeled.
pub fn attach_labels(extracted: &[TripleRecord], labels: &[EvalRecord], source: &Path) -> Vec<EvalRecord> {
    let known: HashMap<RecordKey<'_>, &EvalRecord> = labels.iter().map(|r| (record_key(&r.triple), r)).collect();
    extracted
        .iter()
        .map(|t| match known.get(&record_key(t)) {
            Some(r) => EvalRecord { triple: t.clone(), label: r.label, annotator_source: r.annotator_source.clone() },
            None => EvalRecord { triple: t.clone(), label: Label::Unlabeled, annotator_source: source.to_path_buf() },
        })
        .collect()
}

/// Correct over total, kept as integers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ratio {
    pub correct: u64,
    pub total: u64,
}

impl Ratio {
    pub fn new(correct: u64, total: u64) -> Self {
        assert!(correct <= total, "{correct} correct out of {total}");
        Ratio { correct, total }
    }

    /// Decimal rendering rounded half up, or `n/a` for an empty bucket.
    pub fn format(&self, decimals: u32) -> String {
        if self.total == 0 {
            return "n/a".into();
        }
        let scale = 10u128.pow(decimals);
        let (c, t) = (self.correct as u128, self.total as u128);
        let q = (2 * c * scale + t) / (2 * t);
        if decimals == 0 {
            return q.to_string();
        }
        format!("{}.{:0width$}", q / scale, q % scale, width = decimals as usize)
    }

    pub fn value(&self) -> Option<f64> {
        (self.total > 0).then(|| self.correct as f64 / self.total as f64)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.correct, self.total)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrecisionRow {
    pub bucket: String,
    pub ratio: Ratio,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrecisionTable {
    pub rows: Vec<PrecisionRow>,
    /// Records without a label; never counted.
    pub unlabeled: u64,
}

impl PrecisionTable {
    pub fn get(&self, bucket: &str) -> Option<Ratio> {
        self.rows.iter().find(|r| r.bucket == bucket).map(|r| r.ratio)
    }

    /// `bucket<TAB>correct/total<TAB>precision` lines.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("bucket\tcounts\tprecision\n");
        for r in &self.rows {
            out.push_str(&format!("{}\t{}\t{}\n", r.bucket, r.ratio, r.ratio.format(4)));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "unlabeled": self.unlabeled,
            "rows": self.rows.iter().map(|r| json!({
                "bucket": r.bucket,
                "correct": r.ratio.correct,
                "total": r.ratio.total,
                "precision": r.ratio.format(4),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Precision of the labeled records, overall or per relation category
/// (every category listed, empty ones as `n/a`).
pub fn compute_precision(records: &[EvalRecord], by_category: bool) -> PrecisionTable {
    let count = |pred: &dyn Fn(&EvalRecord) -> bool| {
        let mut r = Ratio::default();
        for rec in records.iter().filter(|r| pred(r)) {
            match rec.label {
                Label::True => {
                    r.correct += 1;
                    r.total += 1;
                }
                Label::False => r.total += 1,
                Label::Unlabeled => {}
            }
        }
        r
    };
    let rows = if by_category {
        Category::ALL
            .into_iter()
            .map(|c| PrecisionRow { bucket: c.label().to_string(), ratio: count(&|r| r.triple.category == c) })
            .collect()
    } else {
        vec![PrecisionRow { bucket: "all".into(), ratio: count(&|_| true) }]
    };
    let unlabeled = records.iter().filter(|r| r.label == Label::Unlabeled).count() as u64;
    PrecisionTable { rows, unlabeled }
}
