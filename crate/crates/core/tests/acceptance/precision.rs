//! Per-category precision recomputed from a synthetic label file.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde_json::Value;

use hybridqa::eval::{compute_precision, read_labels};
use hybridqa::extract::TripleRecord;
use hybridqa::ingest::Span;
use hybridqa::{Category, TemplateId};

use crate::common::Report;

/// Correct and total counts per category.
const COUNTS: [(Category, u64, u64); 6] = [
    (Category::GenitivePreposition, 628, 668),
    (Category::Appositive, 43, 65),
    (Category::NounPhrase, 925, 944),
    (Category::ComparativeSuperlative, 12, 12),
    (Category::Verbal, 1491, 2139),
    (Category::PossAdjWhose, 78, 85),
];

const UNLABELED: usize = 37;

fn template_for(c: Category) -> TemplateId {
    TemplateId::all().find(|t| t.category() == c).unwrap()
}

fn line(n: usize, c: Category, label: Option<bool>) -> String {
    let t = template_for(c);
    let rec = TripleRecord {
        sentence_id: format!("s{}", n / 3),
        template_id: t,
        category: c,
        is_key: t.is_key(),
        subject: format!("subject {n}"),
        predicate: "p".into(),
        object: format!("object {n}"),
        span: Span::new(1, 2),
    };
    let mut v = serde_json::to_value(rec).unwrap();
    if let Some(l) = label {
        v["label"] = Value::Bool(l);
    }
    v.to_string()
}

/// Four decimals by exact integer rounding, half up.
fn four_places(correct: u64, total: u64) -> String {
    let scaled = (correct * 100_000 / total + 5) / 10;
    format!("{}.{:04}", scaled / 10_000, scaled % 10_000)
}

pub fn run() -> Result<(), String> {
    let mut r = Report::default();
    let mut lines = Vec::new();
    for &(c, correct, total) in &COUNTS {
        for i in 0..total {
            lines.push((c, Some(i < correct)));
        }
    }
    lines.extend((0..UNLABELED).map(|i| (COUNTS[i % 6].0, None)));
    lines.shuffle(&mut StdRng::seed_from_u64(7));
    let text: String = lines.iter().enumerate().map(|(n, &(c, l))| line(n, c, l) + "\n").collect();

    let path = std::env::temp_dir().join(format!("hybridqa-labels-{}.jsonl", std::process::id()));
    std::fs::write(&path, text).map_err(|e| e.to_string())?;
    let records = read_labels(&path);
    let _ = std::fs::remove_file(&path);
    let records = records.map_err(|e| e.to_string())?;

    let table = compute_precision(&records, true);
    r.check(table.unlabeled == UNLABELED as u64, || format!("{} unlabeled, expected {UNLABELED}", table.unlabeled));
    let tsv = table.to_tsv();
    for &(c, correct, total) in &COUNTS {
        let counts = format!("{correct}/{total}");
        let want = format!("{}\t{counts}\t{}", c.label(), four_places(correct, total));
        r.check(tsv.lines().any(|l| l == want), || format!("no line {want:?} in\n{tsv}"));
        let got = table.get(c.label()).map(|x| (x.to_string(), x.format(4)));
        let float = format!("{:.4}", correct as f64 / total as f64);
        r.check(got == Some((counts.clone(), float.clone())), || format!("{}: {got:?}, expected {counts} {float}", c.label()));
    }
    let (c, t) = COUNTS.iter().fold((0, 0), |(c, t), x| (c + x.1, t + x.2));
    let all = compute_precision(&records, false).get("all");
    r.check(all.map(|x| (x.correct, x.total)) == Some((c, t)), || format!("overall {all:?}, expected {c}/{t}"));
    r.finish()
}
