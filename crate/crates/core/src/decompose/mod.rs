//! Sub-question generation and composite-question tree assembly.

mod build;
mod tree;

pub use build::{build_cqtree, build_subtree, insert_functions, trace_spt};
pub use tree::{concat, concat_assign, Function, Link, Node, Operator, Slot, Vertex};

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::extract::{Category, Term, TemplateId, TriplePattern};
use crate::ingest::{ParsedSentence, Span};

/// One key triple standing for a whole pattern instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubQuestion {
    pub id: usize,
    /// The triple as asked, possibly with its subject bound to another sub-question's variable.
    pub triple: TriplePattern,
    /// The key triple as extracted.
    pub original: TriplePattern,
    pub top_depth: usize,
    pub down_depth: usize,
    pub span: Span,
}

impl SubQuestion {
    pub fn new(id: usize, triple: TriplePattern) -> Self {
        let span = triple.source_span;
        SubQuestion { id, original: triple.clone(), triple, top_depth: 0, down_depth: 0, span }
    }

    pub fn template(&self) -> TemplateId {
        self.triple.template
    }

    pub fn text(&self) -> String {
        let (s, p, o) = self.triple.labels();
        format!("({s}, {p}, {o})")
    }

    fn to_json(&self) -> Value {
        let (s, p, o) = self.triple.labels();
        json!({
            "sub_question": self.id,
            "template": self.triple.template,
            "category": self.triple.category,
            "triple": [s, p, o],
            "text": self.text(),
            "top_depth": self.top_depth,
            "down_depth": self.down_depth,
            "span": self.span,
        })
    }
}

impl Vertex for SubQuestion {
    fn vertex_id(&self) -> usize {
        self.id
    }
}

pub type CompositeQuestionTree = Node<SubQuestion>;

/// Which key template stands for a genitive/prepositional instance, where two are marked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyPolicy {
    pub genitive_preposition: TemplateId,
}

impl Default for KeyPolicy {
    fn default() -> Self {
        KeyPolicy { genitive_preposition: TemplateId::t(36) }
    }
}

impl KeyPolicy {
    fn key_for(&self, category: Category, present: &[TemplateId]) -> Option<TemplateId> {
        if category == Category::GenitivePreposition && present.contains(&self.genitive_preposition) {
            return Some(self.genitive_preposition);
        }
        present.iter().copied().filter(|t| t.is_key()).min()
    }
}

/// Whether some phrase term of `t` overlaps a lexicon mention.
fn mapped(t: &TriplePattern, sent: &ParsedSentence) -> bool {
    t.terms()
        .iter()
        .filter_map(|term| term.phrase())
        .any(|p| sent.mentions.iter().any(|m| m.span.overlaps(&p.span)))
}

/// Words of one lexicon name relate to nothing but the name itself.
fn inside_one_mention(t: &TriplePattern, sent: &ParsedSentence) -> bool {
    let spans = phrase_spans(t);
    sent.mentions.iter().any(|m| spans.iter().all(|s| m.span.covers(s)))
}

fn phrase_spans(t: &TriplePattern) -> BTreeSet<Span> {
    t.terms().iter().filter_map(|term| term.phrase()).map(|p| p.span).collect()
}

fn same_phrase(a: &Term, b: &Term) -> bool {
    match (a.phrase(), b.phrase()) {
        (Some(x), Some(y)) => x.span == y.span,
        _ => false,
    }
}

/// One sub-question per pattern instance that still holds its key triple.
///
/// A sub-question whose subject is the predicate phrase of another
/// (`(?s, half brothers, Chaplin)` feeding `(half brothers, born, city)`)
/// has its subject replaced by that sub-question's variable.
pub fn generate_subquestions(triples: &[TriplePattern], sent: &ParsedSentence, policy: KeyPolicy) -> Result<Vec<SubQuestion>> {
    let mut by_instance: BTreeMap<usize, Vec<&TriplePattern>> = BTreeMap::new();
    for t in triples {
        by_instance.entry(t.instance).or_default().push(t);
    }
    // phrase sets already related by a clause
    let clausal: Vec<BTreeSet<Span>> = triples
        .iter()
        .filter(|t| matches!(t.category, Category::Verbal | Category::PossAdjWhose))
        .map(phrase_spans)
        .collect();
    let mut keys: Vec<TriplePattern> = Vec::new();
    for members in by_instance.values() {
        let category = members[0].category;
        let present: Vec<TemplateId> = members.iter().map(|t| t.template).collect();
        let Some(key) = policy.key_for(category, &present) else { continue };
        let Some(t) = members.iter().find(|t| t.template == key) else { continue };
        if category == Category::NounPhrase && (!mapped(t, sent) || inside_one_mention(t, sent)) {
            continue;
        }
        if category == Category::GenitivePreposition {
            let spans = phrase_spans(t);
            if clausal.iter().any(|c| spans.is_subset(c)) {
                continue;
            }
        }
        keys.push((*t).clone());
    }
    if keys.is_empty() {
        return Err(Error::NotDecomposable(format!("sentence {} has no key triple", sent.id)));
    }
    keys.sort_by_key(|t| (t.source_span.start, t.source_span.end, t.template, t.instance));
    let mut out: Vec<SubQuestion> = keys.into_iter().enumerate().map(|(i, t)| SubQuestion::new(i, t)).collect();
    for x in 0..out.len() {
        let producer = (0..out.len()).find(|&p| {
            p != x && out[p].original.subject.is_var() && same_phrase(&out[p].original.predicate, &out[x].original.subject)
        });
        if let Some(p) = producer {
            out[x].triple.subject = out[p].original.subject.clone();
        }
    }
    Ok(out)
}

/// Sub-questions of a sentence arranged in a tree.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub sentence_id: String,
    pub subquestions: Vec<SubQuestion>,
    pub tree: CompositeQuestionTree,
}

impl Decomposition {
    pub fn to_json(&self) -> Value {
        let mut v = self.tree.to_json(&SubQuestion::to_json);
        v["sentence_id"] = json!(self.sentence_id);
        v
    }
}

/// Sub-questions, their tree, and the counting and filtering vertices.
pub fn decompose(sent: &ParsedSentence, triples: &[TriplePattern], policy: KeyPolicy) -> Result<Decomposition> {
    let tree = sent.tree.as_ref().ok_or_else(|| Error::Trace(format!("sentence {} has no constituency tree", sent.id)))?;
    let mut subqs = generate_subquestions(triples, sent, policy)?;
    for q in &mut subqs {
        let (top, down) = trace_spt(q, tree)?;
        q.top_depth = top;
        q.down_depth = down;
    }
    let cqt = build_cqtree(&subqs, sent)?;
    let cqt = insert_functions(cqt, sent);
    Ok(Decomposition { sentence_id: sent.id.clone(), subquestions: subqs, tree: cqt })
}
