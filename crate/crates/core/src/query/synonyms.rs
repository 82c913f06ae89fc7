use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::ingest::normalize_key;

/// `lemma<TAB>synonym` pairs, several lines per lemma allowed.
#[derive(Debug, Clone, Default)]
pub struct SynonymLexicon {
    map: BTreeMap<String, Vec<String>>,
}

impl SynonymLexicon {
    pub fn from_tsv_str(text: &str, source: &str) -> Result<Self> {
        let mut lex = SynonymLexicon::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((lemma, syn)) = line.split_once('\t') else {
                return Err(Error::Lexicon { path: source.into(), line: n + 1, message: "expected lemma<TAB>synonym".into() });
            };
            if lemma.trim().is_empty() || syn.trim().is_empty() {
                return Err(Error::Lexicon { path: source.into(), line: n + 1, message: "empty field".into() });
            }
            lex.insert(lemma, syn);
        }
        Ok(lex)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_tsv_str(&text, &path.display().to_string())
    }

    pub fn insert(&mut self, lemma: &str, synonym: &str) {
        let syns = self.map.entry(normalize_key(lemma)).or_default();
        let s = normalize_key(synonym);
        if !syns.contains(&s) {
            syns.push(s);
        }
    }

    /// Synonyms in file order.
    pub fn get(&self, lemma: &str) -> &[String] {
        self.map.get(&normalize_key(lemma)).map_or(&[], Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}
