//! Whole-pipeline answers over the bundled mini KG and corpus.
//!
//! Expected answers are worked out from the raw files: KG triples plus
//! corpus sentences that contain all the words of a fact.

use std::collections::{BTreeMap, BTreeSet};

use hybridqa::ingest::read_corpus;
use hybridqa::par::Schedule;
use hybridqa::{AnswerSet, EntityLexicon, Resources, SynonymLexicon, TripleStore};

use crate::common::{data, question, Report};

fn tsv(name: &str) -> Vec<Vec<String>> {
    std::fs::read_to_string(data().join(name))
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| l.split('\t').map(str::to_string).collect())
        .collect()
}

/// Lower-cased word forms of every corpus sentence.
fn corpus_words() -> Vec<BTreeSet<String>> {
    let mut out = Vec::new();
    let mut files: Vec<_> = std::fs::read_dir(data().join("corpus")).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    for path in files.iter().filter(|p| p.extension().is_some_and(|x| x == "conllu")) {
        for block in std::fs::read_to_string(path).unwrap().split("\n\n") {
            let words: BTreeSet<String> = block
                .lines()
                .filter(|l| !l.starts_with('#'))
                .filter_map(|l| l.split('\t').nth(1))
                .map(str::to_lowercase)
                .collect();
            if !words.is_empty() {
                out.push(words);
            }
        }
    }
    out
}

struct Facts {
    kg: Vec<Vec<String>>,
    surface: BTreeMap<String, String>,
    sentences: Vec<BTreeSet<String>>,
}

impl Facts {
    fn load() -> Self {
        let surface = tsv("lexicon.tsv").into_iter().filter(|r| r[2] == "entity").map(|r| (r[1].clone(), r[0].clone())).collect();
        Facts { kg: tsv("kg.tsv"), surface, sentences: corpus_words() }
    }

    fn kg(&self, s: Option<&str>, p: &str, o: Option<&str>) -> Vec<(String, String)> {
        self.kg
            .iter()
            .filter(|t| t[1] == p && s.is_none_or(|x| t[0] == x) && o.is_none_or(|x| t[2] == x))
            .map(|t| (t[0].clone(), t[2].clone()))
            .collect()
    }

    fn entities(&self) -> impl Iterator<Item = &String> {
        self.surface.keys()
    }

    /// Some corpus sentence holds every word of the entities' names and every extra word.
    fn said(&self, ids: &[&str], words: &[&str]) -> bool {
        let mut need: Vec<String> = words.iter().map(|w| w.to_lowercase()).collect();
        for id in ids {
            let name = self.surface.get(*id).map(String::as_str).unwrap_or(id);
            need.extend(name.split_whitespace().map(str::to_lowercase));
        }
        self.sentences.iter().any(|s| need.iter().all(|w| s.contains(w)))
    }
}

/// (half sibling, birth city) pairs.
fn chaplin_expected(f: &Facts) -> BTreeSet<BTreeSet<String>> {
    let cities: BTreeSet<String> = f.kg(None, "type", Some("City")).into_iter().map(|(s, _)| s).collect();
    let mut siblings: BTreeSet<String> = f.kg(None, "halfSibling", Some("Charlie_Chaplin")).into_iter().map(|(s, _)| s).collect();
    siblings.extend(f.entities().filter(|e| *e != "Charlie_Chaplin" && f.said(&[e, "Charlie_Chaplin"], &["half", "brother"])).cloned());
    let mut out = BTreeSet::new();
    for sib in &siblings {
        for city in &cities {
            if !f.kg(Some(sib), "birthPlace", Some(city)).is_empty() || f.said(&[sib, city], &["born"]) {
                out.insert(BTreeSet::from([sib.clone(), city.clone()]));
            }
        }
    }
    out
}

/// Number of children of the actor who plays Dan White in Milk.
fn q2_expected(f: &Facts) -> usize {
    let actors: Vec<String> = f
        .kg(None, "type", Some("Actor"))
        .into_iter()
        .map(|(s, _)| s)
        .filter(|a| f.said(&[a, "Dan_White", "Milk_(film)"], &["plays"]))
        .collect();
    let mut children = BTreeSet::new();
    for a in &actors {
        children.extend(f.kg(Some(a), "child", None).into_iter().map(|(_, o)| o));
        for kin in ["daughter", "son"] {
            children.extend(f.entities().filter(|e| *e != a && f.said(&[e, a], &[kin])).cloned());
        }
    }
    children.len()
}

fn sources(a: &AnswerSet) -> BTreeSet<&'static str> {
    a.rows()
        .flat_map(|(_, p)| p.iter())
        .map(|s| match s {
            hybridqa::exec::Source::Kg { .. } => "kg",
            hybridqa::exec::Source::Text { .. } => "text",
        })
        .collect()
}

/// Loads everything from disk and answers both questions.
fn answer_all(schedule: Schedule) -> Result<Vec<AnswerSet>, String> {
    let lex = EntityLexicon::load(&data().join("lexicon.tsv")).map_err(|e| e.to_string())?;
    let syn = SynonymLexicon::load(&data().join("synonyms.tsv")).map_err(|e| e.to_string())?;
    let mut res = Resources::new(lex, syn);
    res.schedule = schedule;
    let store = TripleStore::load(&data().join("kg.tsv")).map_err(|e| e.to_string())?;
    let index = res.text_index(read_corpus(&data().join("corpus")).map_err(|e| e.to_string())?);
    ["chaplin", "q2"]
        .iter()
        .map(|q| res.answer(question(q), &store, &index).map(|(_, a)| a).map_err(|e| format!("{q}: {e}")))
        .collect()
}

pub fn run() -> Result<(), String> {
    let mut r = Report::default();
    let facts = Facts::load();
    let passages = read_corpus(&data().join("corpus")).map_err(|e| e.to_string())?.len();
    r.check(passages == 10, || format!("corpus has {passages} passages"));

    let answers = answer_all(Schedule::default())?;
    let (chaplin, q2) = (&answers[0], &answers[1]);

    let want = chaplin_expected(&facts);
    let got: BTreeSet<BTreeSet<String>> = chaplin.rows().map(|(row, _)| row.values().cloned().collect()).collect();
    r.check(want.len() >= 2, || format!("fixture gives only {want:?}"));
    r.check(got == want, || format!("chaplin: {got:?}, expected {want:?}"));

    let n = q2_expected(&facts);
    let got: Vec<String> = q2.rows().flat_map(|(row, _)| row.values().cloned()).collect();
    r.check(got == [n.to_string()], || format!("q2: {got:?}, expected [{n}]"));

    for (name, a) in [("chaplin", chaplin), ("q2", q2)] {
        let s = sources(a);
        r.check(s == BTreeSet::from(["kg", "text"]), || format!("{name}: provenance from {s:?}"));
    }

    let first: Vec<String> = answers.iter().map(|a| a.to_json().to_string()).collect();
    for run in 1..10 {
        let schedule = if run % 2 == 0 { Schedule::Parallel } else { Schedule::Sequential };
        let again: Vec<String> = answer_all(schedule)?.iter().map(|a| a.to_json().to_string()).collect();
        r.check(again == first, || format!("run {run} ({schedule:?}) differs"));
    }
    r.finish()
}
