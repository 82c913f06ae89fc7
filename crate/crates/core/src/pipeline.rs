//! The stages wired together for one question or one corpus.

use crate::decompose::{decompose, Decomposition, KeyPolicy};
use crate::error::Result;
use crate::exec::{answer_with, AnswerSet, TextIndex, TripleStore};
use crate::extract::{Extraction, Extractor, TripleRecord};
use crate::ingest::{annotate_mentions, Document, EntityLexicon, ParsedSentence};
use crate::par::{self, Schedule};
use crate::query::{plan, QueryPlan, SynonymLexicon};
use crate::settings::SettingSet;

/// Lexicons and switches shared by every question.
#[derive(Debug, Clone, Default)]
pub struct Resources {
    pub extractor: Extractor,
    pub synonyms: SynonymLexicon,
    pub settings: SettingSet,
    pub policy: KeyPolicy,
    pub schedule: Schedule,
}

impl Resources {
    pub fn new(lexicon: EntityLexicon, synonyms: SynonymLexicon) -> Self {
        Resources { extractor: Extractor::new(lexicon), synonyms, ..Self::default() }
    }

    pub fn with_settings(mut self, settings: SettingSet) -> Self {
        self.settings = settings;
        self
    }

    pub fn lexicon(&self) -> &EntityLexicon {
        &self.extractor.entities
    }

    /// Marks lexicon mentions and extracts.
    pub fn extract(&self, sent: ParsedSentence) -> (ParsedSentence, Extraction) {
        let sent = annotate_mentions(sent, self.lexicon());
        let ex = self.extractor.extract_all(&sent, self.settings);
        (sent, ex)
    }

    pub fn decompose(&self, sent: ParsedSentence) -> Result<(Decomposition, Extraction)> {
        let (sent, ex) = self.extract(sent);
        let d = decompose(&sent, &ex.triples, self.policy)?;
        Ok((d, ex))
    }

    pub fn plan(&self, sent: ParsedSentence) -> Result<QueryPlan> {
        let (d, ex) = self.decompose(sent)?;
        plan(&d, &ex.triples, self.lexicon(), &self.synonyms)
    }

    pub fn answer(&self, sent: ParsedSentence, store: &TripleStore, index: &TextIndex) -> Result<(QueryPlan, AnswerSet)> {
        let p = self.plan(sent)?;
        let a = answer_with(self.schedule, &p, store, index)?;
        Ok((p, a))
    }

    pub fn text_index(&self, docs: Vec<Document>) -> TextIndex {
        TextIndex::build_with(self.schedule, docs, self.lexicon(), self.settings)
    }

    /// Records for every sentence of every document, in document, sentence and triple order.
    pub fn extract_corpus(&self, docs: &[Document]) -> Vec<TripleRecord> {
        let work: Vec<&ParsedSentence> = docs.iter().flat_map(|d| d.sentences.iter()).collect();
        par::map_ordered_with(self.schedule, &work, |s| {
            let (sent, ex) = self.extract((*s).clone());
            ex.records(&sent.id)
        })
        .into_iter()
        .flatten()
        .collect()
    }
}
