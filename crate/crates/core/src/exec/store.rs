use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Triple {
    pub s: String,
    pub p: String,
    pub o: String,
}

impl Triple {
    pub fn new(s: impl Into<String>, p: impl Into<String>, o: impl Into<String>) -> Self {
        Triple { s: s.into(), p: p.into(), o: o.into() }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}> <{}> <{}>", self.s, self.p, self.o)
    }
}

/// In-memory triple set indexed by subject, predicate and object.
#[derive(Debug, Clone, Default)]
pub struct TripleStore {
    triples: Vec<Triple>,
    seen: HashSet<Triple>,
    by_s: HashMap<String, Vec<usize>>,
    by_p: HashMap<String, Vec<usize>>,
    by_o: HashMap<String, Vec<usize>>,
}

impl TripleStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// False when the triple was already present.
    pub fn insert(&mut self, t: Triple) -> bool {
        if self.seen.contains(&t) {
            return false;
        }
        let i = self.triples.len();
        self.by_s.entry(t.s.clone()).or_default().push(i);
        self.by_p.entry(t.p.clone()).or_default().push(i);
        self.by_o.entry(t.o.clone()).or_default().push(i);
        self.seen.insert(t.clone());
        self.triples.push(t);
        true
    }

    /// `subject<TAB>predicate<TAB>object` lines; `#` starts a comment line.
    pub fn from_tsv_str(text: &str, source: &str) -> Result<Self> {
        let mut store = TripleStore::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let f: Vec<&str> = line.split('\t').collect();
            if f.len() != 3 || f.iter().any(|x| x.trim().is_empty()) {
                return Err(Error::Lexicon {
                    path: source.into(),
                    line: n + 1,
                    message: "expected subject<TAB>predicate<TAB>object".into(),
                });
            }
            store.insert(Triple::new(f[0].trim(), f[1].trim(), f[2].trim()));
        }
        Ok(store)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_tsv_str(&text, &path.display().to_string())
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    pub fn contains(&self, s: &str, p: &str, o: &str) -> bool {
        self.seen.contains(&Triple::new(s, p, o))
    }

    /// Triples agreeing with every bound position, read off the smallest index.
    pub fn matches<'a>(&'a self, s: Option<&str>, p: Option<&str>, o: Option<&str>) -> Vec<&'a Triple> {
        let lists = [(s, &self.by_s), (p, &self.by_p), (o, &self.by_o)];
        let mut smallest: Option<&[usize]> = None;
        for (key, index) in lists {
            if let Some(k) = key {
                let list = index.get(k).map_or(&[][..], Vec::as_slice);
                if smallest.is_none_or(|cur| list.len() < cur.len()) {
                    smallest = Some(list);
                }
            }
        }
        let keep = |t: &Triple| {
            s.is_none_or(|x| t.s == x) && p.is_none_or(|x| t.p == x) && o.is_none_or(|x| t.o == x)
        };
        match smallest {
            Some(list) => list.iter().map(|&i| &self.triples[i]).filter(|t| keep(t)).collect(),
            None => self.triples.iter().collect(),
        }
    }
}

impl FromIterator<Triple> for TripleStore {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        let mut s = TripleStore::new();
        for t in iter {
            s.insert(t);
        }
        s
    }
}
