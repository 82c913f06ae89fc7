//! Decomposition of long natural-language questions into triple-pattern
//! sub-questions, and answering them over a knowledge-graph store and a
//! pre-parsed text corpus.
//!
//! Stages:
//!
//! 1. [`ingest`] reads CoNLL-U dependency parses, bracketed constituency
//!    trees and an entity lexicon into a [`ParsedSentence`].
//! 2. [`phrase`] forms minimal noun phrases and classifies verbs and adjectives.
//! 3. [`extract`] matches the linguistic patterns and emits triple patterns.
//! 4. [`decompose`] turns key triples into sub-questions and arranges them
//!    into a binary composite-question tree.
//! 5. [`query`] expands, links and joins the tree into a plan, which
//!    [`exec`] runs bottom-up over a [`TripleStore`] and a [`TextIndex`].
//!
//! [`eval`] holds the precision accounting used by ablation runs and
//! [`pipeline`] wires the stages together.

pub mod decompose;
pub mod error;
pub mod eval;
pub mod exec;
pub mod extract;
pub mod ingest;
pub mod par;
pub mod phrase;
pub mod pipeline;
pub mod query;
pub mod settings;

pub use decompose::{CompositeQuestionTree, Decomposition, KeyPolicy, Operator, SubQuestion};
pub use error::{Error, Result};
pub use exec::{answer, AnswerSet, TextIndex, TripleStore};
pub use extract::{Category, TemplateId, Term, TriplePattern};
pub use ingest::{EntityLexicon, MentionKind, ParsedSentence};
pub use pipeline::Resources;
pub use query::{QueryPlan, QueryVertex, SynonymLexicon};
pub use settings::{Setting, SettingSet};

#[cfg(test)]
mod testutil;
