use std::collections::HashSet;
use std::path::Path;

use crate::error::{Error, Result};
use crate::ingest::{ParsedSentence, Span};

const COPULARS: &str = include_str!("../../data/copulars.txt");
const QUANTITY: &str = include_str!("../../data/quantity_adjectives.txt");
const DIMINUTIVES: &str = include_str!("../../data/diminutives.txt");
const EXPRESSIONS: &str = include_str!("../../data/expressions.txt");

/// Word lists steering phrase formation and adjective classes.
#[derive(Debug, Clone)]
pub struct PhraseLexicons {
    copulars: HashSet<String>,
    quantity: HashSet<String>,
    diminutives: HashSet<String>,
    expressions: Vec<Vec<String>>,
}

fn lines(text: &str) -> impl Iterator<Item = String> + '_ {
    text.lines()
        .map(|l| l.trim())
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.to_lowercase())
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

impl Default for PhraseLexicons {
    fn default() -> Self {
        PhraseLexicons {
            copulars: lines(COPULARS).collect(),
            quantity: lines(QUANTITY).collect(),
            diminutives: lines(DIMINUTIVES).collect(),
            expressions: lines(EXPRESSIONS).map(|l| l.split_whitespace().map(str::to_string).collect()).collect(),
        }
    }
}

impl PhraseLexicons {
    pub fn load_copulars(&mut self, path: &Path) -> Result<()> {
        self.copulars = lines(&read(path)?).collect();
        Ok(())
    }

    pub fn load_quantity_adjectives(&mut self, path: &Path) -> Result<()> {
        self.quantity = lines(&read(path)?).collect();
        Ok(())
    }

    pub fn load_expressions(&mut self, path: &Path) -> Result<()> {
        self.expressions =
            lines(&read(path)?).map(|l| l.split_whitespace().map(str::to_string).collect()).collect();
        Ok(())
    }

    pub fn is_copular(&self, lemma: &str) -> bool {
        self.copulars.contains(lemma)
    }

    pub fn is_quantity(&self, word: &str) -> bool {
        self.quantity.contains(word)
    }

    /// Quantity words whose comparative means "less".
    pub fn is_diminutive(&self, word: &str) -> bool {
        self.diminutives.contains(word)
    }

    pub fn copular_count(&self) -> usize {
        self.copulars.len()
    }

    /// Longest non-overlapping matches of listed expressions, by form or lemma.
    pub fn expression_spans(&self, sent: &ParsedSentence) -> Vec<Span> {
        let n = sent.len();
        let mut spans = Vec::new();
        let mut i = 1;
        while i <= n {
            let best = self
                .expressions
                .iter()
                .filter(|e| !e.is_empty() && i + e.len() - 1 <= n)
                .filter(|e| {
                    e.iter().enumerate().all(|(k, w)| {
                        let t = sent.token(i + k);
                        t.lower() == *w || t.lemma_lower() == *w
                    })
                })
                .map(Vec::len)
                .max();
            match best {
                Some(len) if len > 1 => {
                    spans.push(Span::new(i, i + len - 1));
                    i += len;
                }
                _ => i += 1,
            }
        }
        spans
    }
}
