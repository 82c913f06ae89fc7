use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::sentence::{detokenize, Token};
use crate::error::{Error, Result};

/// What a lexicon surface form links to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MentionKind {
    Entity,
    Class,
    Number,
    /// A relation label in the knowledge graph; never produces a mention.
    Predicate,
}

impl fmt::Display for MentionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MentionKind::Entity => "entity",
            MentionKind::Class => "class",
            MentionKind::Number => "number",
            MentionKind::Predicate => "predicate",
        })
    }
}

impl FromStr for MentionKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "entity" => Ok(MentionKind::Entity),
            "class" => Ok(MentionKind::Class),
            "number" => Ok(MentionKind::Number),
            "predicate" => Ok(MentionKind::Predicate),
            other => Err(format!("unknown kind {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexEntry {
    pub surface: String,
    pub id: String,
    pub kind: MentionKind,
}

/// Canonical lookup key: lowercase, whitespace-collapsed, punctuation glued
/// the same way sentence text is rendered.
pub fn normalize_key(text: &str) -> String {
    let lower = text.replace(['\u{2019}', '`'], "'").to_lowercase();
    let mut spaced = String::with_capacity(lower.len() + 4);
    for (i, c) in lower.char_indices() {
        // "ben's" and "ben 's" must meet
        if c == '\'' && lower[i..].starts_with("'s") && i > 0 && !lower[..i].ends_with(' ') {
            spaced.push(' ');
        }
        spaced.push(c);
    }
    detokenize(spaced.split_whitespace())
}

/// Surface-form lexicon mapping phrases to canonical ids.
#[derive(Debug, Clone, Default)]
pub struct EntityLexicon {
    entries: Vec<LexEntry>,
    by_key: HashMap<String, usize>,
    by_id: HashMap<String, Vec<usize>>,
    max_tokens: usize,
}

impl EntityLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds an entry. A later entry for the same surface replaces the earlier one.
    pub fn insert(&mut self, surface: &str, id: &str, kind: MentionKind) {
        let key = normalize_key(surface);
        if key.is_empty() {
            return;
        }
        let tokens = key.split_whitespace().count().max(1);
        // "columbus, new mexico" is four tokens once the comma is split off
        let tokens = tokens + key.matches([',', '.', ';', ':']).count() + key.matches("'s").count();
        self.max_tokens = self.max_tokens.max(tokens);
        let entry = LexEntry { surface: surface.trim().to_string(), id: id.to_string(), kind };
        let idx = match self.by_key.get(&key) {
            Some(&old) => {
                let old_id = self.entries[old].id.clone();
                if let Some(v) = self.by_id.get_mut(&old_id) {
                    v.retain(|&i| i != old);
                }
                self.entries[old] = entry;
                old
            }
            None => {
                self.entries.push(entry);
                self.by_key.insert(key, self.entries.len() - 1);
                self.entries.len() - 1
            }
        };
        self.by_id.entry(id.to_string()).or_default().push(idx);
    }

    /// Parses `surface<TAB>id<TAB>kind` lines. `source` names the input in errors.
    pub fn from_tsv_str(text: &str, source: &str) -> Result<Self> {
        let mut lex = EntityLexicon::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 {
                return Err(Error::Lexicon {
                    path: source.to_string(),
                    line: n + 1,
                    message: format!("expected 3 tab-separated columns, found {}", cols.len()),
                });
            }
            let kind = cols[2].parse::<MentionKind>().map_err(|message| Error::Lexicon {
                path: source.to_string(),
                line: n + 1,
                message,
            })?;
            lex.insert(cols[0], cols[1].trim(), kind);
        }
        Ok(lex)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_tsv_str(&text, &path.display().to_string())
    }

    pub fn len(&self) -> usize {
        self.by_key.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_key.is_empty()
    }

    /// Longest entry, in tokens.
    pub fn max_tokens(&self) -> usize {
        self.max_tokens
    }

    pub fn lookup(&self, text: &str) -> Option<&LexEntry> {
        self.by_key.get(&normalize_key(text)).map(|&i| &self.entries[i])
    }

    /// Looks up a token run by surface form, then by lemmas.
    pub fn lookup_tokens<'a>(&self, tokens: impl IntoIterator<Item = &'a Token>) -> Option<&LexEntry> {
        let tokens: Vec<&Token> = tokens.into_iter().collect();
        if tokens.is_empty() {
            return None;
        }
        let surface = detokenize(tokens.iter().map(|t| t.form.as_str()));
        if let Some(e) = self.lookup(&surface) {
            return Some(e);
        }
        let lemmas: Vec<String> = tokens.iter().map(|t| t.lemma_lower()).collect();
        self.lookup(&detokenize(lemmas.iter().map(String::as_str)))
    }

    /// Entries sharing a canonical id.
    pub fn by_id(&self, id: &str) -> impl Iterator<Item = &LexEntry> {
        self.by_id.get(id).into_iter().flatten().map(move |&i| &self.entries[i])
    }

    pub fn contains_id(&self, id: &str) -> bool {
        self.by_id.get(id).is_some_and(|v| !v.is_empty())
    }

    pub fn iter(&self) -> impl Iterator<Item = &LexEntry> {
        self.by_key.values().map(move |&i| &self.entries[i])
    }
}
