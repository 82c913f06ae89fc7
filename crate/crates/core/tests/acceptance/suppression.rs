//! Reformation (D) and appositive filtering (E), checked as a diff between
//! the runs with and without the setting.

use std::collections::BTreeSet;

use serde::Deserialize;

use hybridqa::extract::{Extraction, Extractor};
use hybridqa::ingest::annotate_mentions;
use hybridqa::{Category, Setting, SettingSet};

use crate::common::{fixtures, lexicon, load_sentence, Report};

#[derive(Deserialize)]
struct Case {
    file: String,
    settings: String,
    toggle: char,
    lexicon: Vec<[String; 3]>,
    /// Relations only the run without the setting produces.
    removed: Vec<String>,
    /// Relations only the run with the setting produces.
    added: Vec<String>,
}

type Labeled = (u8, Category, [String; 3]);

fn relations(ex: &Extraction) -> BTreeSet<String> {
    ex.relations.iter().map(|r| r.rendered()).collect()
}

fn triples(ex: &Extraction) -> BTreeSet<Labeled> {
    ex.triples
        .iter()
        .map(|t| {
            let (s, p, o) = t.labels();
            (t.template.number(), t.category, [s, p, o])
        })
        .collect()
}

fn diff<T: Ord + Clone>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> BTreeSet<T> {
    a.difference(b).cloned().collect()
}

/// Argument phrases of rendered relations (`arg1, relation, arg2`).
fn arguments(rendered: &[String]) -> BTreeSet<String> {
    rendered
        .iter()
        .flat_map(|r| {
            let parts: Vec<&str> = r.split(", ").collect();
            [parts[0].to_string(), parts[parts.len() - 1].to_string()]
        })
        .collect()
}

/// A triple belongs to a changed relation when it has the toggled category and
/// every non-variable, non-predicate term is one of that relation's arguments.
fn explained(t: &Labeled, category: Category, args: &BTreeSet<String>) -> bool {
    t.1 == category && t.2.iter().all(|x| x.starts_with('?') || args.contains(x))
}

fn run_case(r: &mut Report, case: &Case) {
    let path = fixtures().join("suppression").join(&case.file);
    let lex = lexicon(&case.lexicon);
    let sent = annotate_mentions(load_sentence(&path), &lex);
    let extractor = Extractor::new(lex);
    let setting = Setting::ALL.into_iter().find(|s| s.letter() == case.toggle).expect("setting letter");
    let on: SettingSet = case.settings.parse().expect("settings");
    r.check(on.contains(setting), || format!("{}: {} lacks {}", case.file, case.settings, case.toggle));
    let with = extractor.extract_all(&sent, on);
    let without = extractor.extract_all(&sent, on.without(setting));

    let id = &case.file;
    let removed = diff(&relations(&without), &relations(&with));
    let added = diff(&relations(&with), &relations(&without));
    let want_removed: BTreeSet<String> = case.removed.iter().cloned().collect();
    let want_added: BTreeSet<String> = case.added.iter().cloned().collect();
    r.check(removed == want_removed, || format!("{id}: {} removes {removed:?}, expected {want_removed:?}", case.toggle));
    r.check(added == want_added, || format!("{id}: {} adds {added:?}, expected {want_added:?}", case.toggle));

    let category = if case.toggle == 'D' { Category::GenitivePreposition } else { Category::Appositive };
    let gone = diff(&triples(&without), &triples(&with));
    let new = diff(&triples(&with), &triples(&without));
    let (gone_args, new_args) = (arguments(&case.removed), arguments(&case.added));
    for t in &gone {
        r.check(explained(t, category, &gone_args), || format!("{id}: unrelated triple lost {t:?}"));
    }
    for t in &new {
        r.check(explained(t, category, &new_args), || format!("{id}: unrelated triple gained {t:?}"));
    }
    // each changed relation takes its whole template row with it
    let per_relation = if category == Category::Appositive { 2 } else { 4 };
    r.check(gone.len() == per_relation * case.removed.len(), || format!("{id}: lost triples {gone:?}"));
    r.check(new.len() == per_relation * case.added.len(), || format!("{id}: gained triples {new:?}"));
}

pub fn run() -> Result<(), String> {
    let text = std::fs::read_to_string(fixtures().join("suppression/cases.json")).map_err(|e| e.to_string())?;
    let cases: Vec<Case> = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let mut r = Report::default();
    for toggle in ['D', 'E'] {
        r.check(cases.iter().any(|c| c.toggle == toggle), || format!("no fixture toggles {toggle}"));
    }
    for case in &cases {
        run_case(&mut r, case);
    }
    r.finish()
}
