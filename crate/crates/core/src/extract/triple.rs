use std::fmt;

use serde::{Deserialize, Serialize};

use super::template::{Category, TemplateId};
use crate::ingest::Span;
use crate::phrase::Phrase;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VarKind {
    /// `?s`
    Subject,
    /// `?o`
    Object,
    /// `?p`
    Predicate,
    /// `?n`, `?n1`, `?n2`
    Numeric,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Term {
    Phrase(Phrase),
    Var { name: String, kind: VarKind },
}

impl Term {
    pub fn phrase(&self) -> Option<&Phrase> {
        match self {
            Term::Phrase(p) => Some(p),
            Term::Var { .. } => None,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var { .. })
    }

    pub fn var_name(&self) -> Option<&str> {
        match self {
            Term::Var { name, .. } => Some(name),
            Term::Phrase(_) => None,
        }
    }

    /// Surface text, or the variable name with its instance suffix removed.
    pub fn label(&self) -> String {
        match self {
            Term::Phrase(p) => p.text.clone(),
            Term::Var { name, .. } => plain_var(name).to_string(),
        }
    }
}

/// `?s_3` -> `?s`.
pub fn plain_var(name: &str) -> &str {
    name.split('_').next().unwrap_or(name)
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Phrase(p) => f.write_str(&p.text),
            Term::Var { name, .. } => f.write_str(name),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CompareOp {
    Gt,
    Lt,
    Eq,
    Max,
    Min,
}

/// Numeric constraint carried by comparative and superlative triples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub op: CompareOp,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriplePattern {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
    pub template: TemplateId,
    pub category: Category,
    pub is_key: bool,
    pub source_span: Span,
    /// Pattern instance this triple came from; shared variables are scoped to it.
    pub instance: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparison: Option<Comparison>,
}

impl TriplePattern {
    pub fn new(template: TemplateId, instance: usize, subject: Term, predicate: Term, object: Term) -> Self {
        let mut span: Option<Span> = None;
        for t in [&subject, &predicate, &object] {
            if let Some(p) = t.phrase() {
                span = Some(span.map_or(p.span, |s| s.union(&p.span)));
            }
        }
        TriplePattern {
            subject,
            predicate,
            object,
            template,
            category: template.category(),
            is_key: template.is_key(),
            source_span: span.unwrap_or(Span::single(1)),
            instance,
            comparison: None,
        }
    }

    pub fn terms(&self) -> [&Term; 3] {
        [&self.subject, &self.predicate, &self.object]
    }

    pub fn pattern(&self) -> u8 {
        self.template.pattern()
    }

    /// `(s, p, o)` labels with instance suffixes removed.
    pub fn labels(&self) -> (String, String, String) {
        (self.subject.label(), self.predicate.label(), self.object.label())
    }

    /// Identity used for deduplication: phrase terms by span and text, variables by kind.
    pub(crate) fn structural_key(&self) -> Vec<(u8, usize, usize, String)> {
        self.terms()
            .iter()
            .map(|t| match t {
                Term::Phrase(p) => (0, p.span.start, p.span.end, p.text.clone()),
                Term::Var { name, .. } => (1, 0, 0, plain_var(name).to_string()),
            })
            .collect()
    }
}

impl fmt::Display for TriplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.subject, self.predicate, self.object)
    }
}

/// A binary relation as it reads in running text, e.g. `(company, has, chairman)`.
///
/// Only the genitive/prepositional and appositive categories produce these.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub category: Category,
    pub instance: usize,
    pub arg1: String,
    pub relation: String,
    pub arg2: String,
    pub span: Span,
}

impl Relation {
    pub fn rendered(&self) -> String {
        format!("{}, {}, {}", self.arg1, self.relation, self.arg2)
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.rendered())
    }
}
