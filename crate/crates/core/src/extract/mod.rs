//! Pattern matching over parsed sentences, producing triple patterns.

mod appositive;
mod comparative;
mod context;
mod genprep;
mod noun_phrase;
mod possessive;
mod template;
mod triple;
mod verbal;

pub use template::{Category, TemplateId};
pub use triple::{plain_var, CompareOp, Comparison, Relation, Term, TriplePattern, VarKind};

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::ingest::{EntityLexicon, ParsedSentence, Span};
use crate::phrase::PhraseLexicons;
use crate::settings::SettingSet;

use context::{Ctx, Emitter};

/// Output of one or more matchers over a sentence.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Extraction {
    pub triples: Vec<TriplePattern>,
    /// Genitive/prepositional and appositive relations as they read in text.
    pub relations: Vec<Relation>,
    pub diagnostics: Vec<String>,
}

impl Extraction {
    fn from_emitter(em: Emitter) -> Self {
        Extraction { triples: em.triples, relations: em.relations, diagnostics: em.diagnostics }
    }

    pub fn key_triples(&self) -> impl Iterator<Item = &TriplePattern> {
        self.triples.iter().filter(|t| t.is_key)
    }

    pub fn of_category(&self, category: Category) -> impl Iterator<Item = &TriplePattern> {
        self.triples.iter().filter(move |t| t.category == category)
    }

    /// Distinct pattern instances per category.
    pub fn instance_count(&self, category: Category) -> usize {
        self.of_category(category).map(|t| t.instance).collect::<HashSet<_>>().len()
    }

    pub fn records(&self, sentence_id: &str) -> Vec<TripleRecord> {
        self.triples.iter().map(|t| TripleRecord::new(sentence_id, t)).collect()
    }

    /// One JSON object per line.
    pub fn to_jsonl(&self, sentence_id: &str) -> String {
        let mut out = String::new();
        for r in self.records(sentence_id) {
            out.push_str(&serde_json::to_string(&r).expect("record serializes"));
            out.push('\n');
        }
        out
    }
}

/// Flat serialization of a triple pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleRecord {
    pub sentence_id: String,
    pub template_id: TemplateId,
    pub category: Category,
    pub is_key: bool,
    pub subject: String,
    pub predicate: String,
    pub object: String,
    pub span: Span,
}

impl TripleRecord {
    pub fn new(sentence_id: &str, t: &TriplePattern) -> Self {
        TripleRecord {
            sentence_id: sentence_id.to_string(),
            template_id: t.template,
            category: t.category,
            is_key: t.is_key,
            subject: t.subject.to_string(),
            predicate: t.predicate.to_string(),
            object: t.object.to_string(),
            span: t.source_span,
        }
    }
}

/// Pattern matchers bound to their word lists and entity lexicon.
#[derive(Debug, Clone, Default)]
pub struct Extractor {
    pub phrase_lexicons: PhraseLexicons,
    pub entities: EntityLexicon,
}

type Matcher = fn(&Ctx, &mut Emitter);

impl Extractor {
    pub fn new(entities: EntityLexicon) -> Self {
        Extractor { phrase_lexicons: PhraseLexicons::default(), entities }
    }

    fn run(&self, sent: &ParsedSentence, settings: SettingSet, matchers: &[Matcher]) -> Extraction {
        let ctx = Ctx::new(sent, settings, &self.phrase_lexicons, &self.entities);
        let mut em = Emitter::default();
        for m in matchers {
            m(&ctx, &mut em);
        }
        Extraction::from_emitter(em)
    }

    pub fn verbal(&self, sent: &ParsedSentence, settings: SettingSet) -> Extraction {
        self.run(sent, settings, &[verbal::extract])
    }

    pub fn poss_adj_whose(&self, sent: &ParsedSentence, settings: SettingSet) -> Extraction {
        self.run(sent, settings, &[possessive::extract])
    }

    pub fn noun_phrase(&self, sent: &ParsedSentence, settings: SettingSet) -> Extraction {
        self.run(sent, settings, &[noun_phrase::extract])
    }

    pub fn genitive_preposition(&self, sent: &ParsedSentence, settings: SettingSet) -> Extraction {
        self.run(sent, settings, &[genprep::extract])
    }

    pub fn appositive(&self, sent: &ParsedSentence, settings: SettingSet) -> Extraction {
        self.run(sent, settings, &[appositive::extract])
    }

    pub fn comparative_superlative(&self, sent: &ParsedSentence, settings: SettingSet) -> Extraction {
        self.run(sent, settings, &[comparative::extract])
    }

    /// All matchers; structurally identical triples are merged keeping the
    /// lowest template, and the result is ordered by span then template.
    pub fn extract_all(&self, sent: &ParsedSentence, settings: SettingSet) -> Extraction {
        let mut out = self.run(
            sent,
            settings,
            &[
                verbal::extract,
                possessive::extract,
                noun_phrase::extract,
                genprep::extract,
                appositive::extract,
                comparative::extract,
            ],
        );
        out.triples.sort_by_key(|t| (t.template, t.instance));
        let mut seen = HashSet::new();
        out.triples.retain(|t| seen.insert(t.structural_key()));
        out.triples.sort_by_key(|t| (t.source_span.start, t.source_span.end, t.template, t.instance));
        out.relations.sort_by_key(|r| (r.span.start, r.span.end, r.instance));
        out
    }
}

pub fn extract_all(sent: &ParsedSentence, settings: SettingSet, entities: &EntityLexicon) -> Extraction {
    Extractor { phrase_lexicons: PhraseLexicons::default(), entities: entities.clone() }.extract_all(sent, settings)
}
