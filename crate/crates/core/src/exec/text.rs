use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::extract::{Extractor, Term};
use crate::ingest::{annotate_mentions, read_corpus, Document, EntityLexicon, MentionKind, ParsedSentence};
use crate::par::{self, Schedule};
use crate::phrase::Phrase;
use crate::settings::SettingSet;

/// A phrase of a derived triple: its lemma key and, when the lexicon knows it, a store id.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DTerm {
    pub key: String,
    pub id: Option<String>,
}

impl DTerm {
    /// What a variable binds to.
    pub fn value(&self) -> &str {
        self.id.as_deref().unwrap_or(&self.key)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DerivedTriple {
    pub terms: [DTerm; 3],
    pub passage: String,
    pub sentence: String,
}

/// Pre-parsed passages and the phrase triples extracted from them.
#[derive(Debug, Clone, Default)]
pub struct TextIndex {
    passages: BTreeMap<String, Vec<ParsedSentence>>,
    derived: Vec<DerivedTriple>,
}

fn dterm(p: &Phrase, predicate: bool, lexicon: &EntityLexicon) -> DTerm {
    let id = if !predicate && p.text.replace(',', "").parse::<f64>().is_ok() {
        Some(p.text.replace(',', ""))
    } else {
        [p.text.as_str(), p.key.as_str()]
            .into_iter()
            .filter_map(|s| lexicon.lookup(s))
            .find(|e| match e.kind {
                MentionKind::Predicate => predicate,
                MentionKind::Entity | MentionKind::Number => !predicate,
                MentionKind::Class => false,
            })
            .map(|e| e.id.clone())
    };
    DTerm { key: p.key.clone(), id }
}

/// Triples whose three terms are phrases, subject before object in the sentence.
fn derive(passage: &str, sent: &ParsedSentence, extractor: &Extractor, settings: SettingSet) -> Vec<DerivedTriple> {
    let lexicon = &extractor.entities;
    let sent = annotate_mentions(sent.clone(), lexicon);
    let mut out: Vec<DerivedTriple> = extractor
        .extract_all(&sent, settings)
        .triples
        .iter()
        .filter_map(|t| {
            let [s, p, o] = t.terms().map(Term::phrase);
            let (s, p, o) = (s?, p?, o?);
            // reversed row siblings read the sentence against its word order
            if s.span.start > o.span.start {
                return None;
            }
            Some(DerivedTriple {
                terms: [dterm(s, false, lexicon), dterm(p, true, lexicon), dterm(o, false, lexicon)],
                passage: passage.to_string(),
                sentence: sent.id.clone(),
            })
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

impl TextIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn build(docs: Vec<Document>, lexicon: &EntityLexicon, settings: SettingSet) -> Self {
        Self::build_with(Schedule::default(), docs, lexicon, settings)
    }

    /// Extracts every sentence of every passage; sentences are processed independently.
    pub fn build_with(schedule: Schedule, docs: Vec<Document>, lexicon: &EntityLexicon, settings: SettingSet) -> Self {
        let work: Vec<(&str, &ParsedSentence)> =
            docs.iter().flat_map(|d| d.sentences.iter().map(move |s| (d.id.as_str(), s))).collect();
        let extractor = Extractor::new(lexicon.clone());
        let derived = par::map_ordered_with(schedule, &work, |(p, s)| derive(p, s, &extractor, settings));
        let derived = derived.into_iter().flatten().collect();
        let passages = docs.into_iter().map(|d| (d.id, d.sentences)).collect();
        TextIndex { passages, derived }
    }

    pub fn load(dir: &Path, lexicon: &EntityLexicon, settings: SettingSet) -> Result<Self> {
        Ok(Self::build(read_corpus(dir)?, lexicon, settings))
    }

    pub fn derived(&self) -> &[DerivedTriple] {
        &self.derived
    }

    pub fn passage(&self, id: &str) -> Option<&[ParsedSentence]> {
        self.passages.get(id).map(Vec::as_slice)
    }

    pub fn passage_count(&self) -> usize {
        self.passages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.derived.is_empty()
    }
}
