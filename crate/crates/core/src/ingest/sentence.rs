use std::fmt;

use serde::{Deserialize, Serialize};

use super::lexicon::{EntityLexicon, MentionKind};
use crate::error::{Error, Result};

/// Inclusive, 1-based token range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end, "span {start}..{end}");
        Span { start, end }
    }

    pub fn single(index: usize) -> Self {
        Span { start: index, end: index }
    }

    pub fn contains(&self, index: usize) -> bool {
        self.start <= index && index <= self.end
    }

    pub fn covers(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.start <= other.end && other.start <= self.end
    }

    pub fn union(&self, other: &Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }

    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<usize> {
        self.start..=self.end
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.start, self.end)
    }
}

/// One row of a CoNLL-U block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub index: usize,
    pub form: String,
    pub lemma: String,
    pub upos: String,
    pub xpos: String,
    pub feats: String,
    /// 0 for the root.
    pub head: usize,
    pub deprel: String,
    /// Enhanced dependencies (DEPS column); extra heads beyond `head`.
    pub deps: Vec<(usize, String)>,
    pub misc: String,
}

impl Token {
    /// Penn-Treebank tag, falling back to the universal tag when XPOS is empty.
    pub fn pos(&self) -> &str {
        if self.xpos.is_empty() || self.xpos == "_" {
            &self.upos
        } else {
            &self.xpos
        }
    }

    pub fn lower(&self) -> String {
        self.form.to_lowercase()
    }

    pub fn lemma_lower(&self) -> String {
        if self.lemma.is_empty() || self.lemma == "_" {
            self.form.to_lowercase()
        } else {
            self.lemma.to_lowercase()
        }
    }

    /// Dependency label without its subtype (`nsubj:pass` -> `nsubj`).
    pub fn base_rel(&self) -> &str {
        self.deprel.split(':').next().unwrap_or("")
    }

    pub fn is_noun(&self) -> bool {
        matches!(self.pos(), "NN" | "NNS" | "NNP" | "NNPS" | "NOUN" | "PROPN")
    }

    pub fn is_number(&self) -> bool {
        matches!(self.pos(), "CD" | "NUM")
    }

    /// Tokens that can stand as a noun phrase on their own.
    pub fn is_nominal(&self) -> bool {
        self.is_noun() || self.is_number() || matches!(self.pos(), "PRP" | "WP" | "PRON")
    }

    pub fn is_verb(&self) -> bool {
        self.pos().starts_with("VB") || matches!(self.pos(), "VERB" | "AUX")
    }

    pub fn is_adjective(&self) -> bool {
        matches!(self.pos(), "JJ" | "JJR" | "JJS" | "ADJ")
    }

    pub fn is_punct(&self) -> bool {
        self.deprel == "punct"
            || matches!(self.pos(), "." | "," | ":" | "``" | "''" | "-LRB-" | "-RRB-" | "HYPH" | "PUNCT" | "\"")
    }

    pub fn is_plural(&self) -> bool {
        matches!(self.pos(), "NNS" | "NNPS") || self.feats.contains("Number=Plur")
    }
}

/// Node of a constituency tree. Preterminals carry the word and no children.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstituencyNode {
    pub label: String,
    pub word: Option<String>,
    pub children: Vec<ConstituencyNode>,
    pub span: Span,
    pub depth: usize,
}

impl ConstituencyNode {
    pub fn is_leaf(&self) -> bool {
        self.word.is_some()
    }

    /// Words of the leaves, left to right.
    pub fn leaves(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a str>) {
        match &self.word {
            Some(w) => out.push(w),
            None => self.children.iter().for_each(|c| c.collect_leaves(out)),
        }
    }

    /// Preorder traversal.
    pub fn iter(&self) -> impl Iterator<Item = &ConstituencyNode> {
        let mut stack = vec![self];
        std::iter::from_fn(move || {
            let node = stack.pop()?;
            stack.extend(node.children.iter().rev());
            Some(node)
        })
    }

    /// Preterminal covering token `index`.
    pub fn leaf(&self, index: usize) -> Option<&ConstituencyNode> {
        self.path_to_leaf(index).last().copied()
    }

    /// Nodes from the root down to the preterminal covering `index`.
    pub fn path_to_leaf(&self, index: usize) -> Vec<&ConstituencyNode> {
        let mut path = Vec::new();
        let mut node = self;
        if !node.span.contains(index) {
            return path;
        }
        loop {
            path.push(node);
            match node.children.iter().find(|c| c.span.contains(index)) {
                Some(c) => node = c,
                None => break,
            }
        }
        path
    }

    /// Deepest node whose span covers `span`.
    pub fn lowest_covering(&self, span: &Span) -> Option<&ConstituencyNode> {
        if !self.span.covers(span) {
            return None;
        }
        let mut node = self;
        while let Some(c) = node.children.iter().find(|c| c.span.covers(span)) {
            node = c;
        }
        Some(node)
    }

    /// Recomputes spans and depths from leaf order, starting at token 1.
    pub(crate) fn finalize(&mut self) {
        let mut next = 1;
        self.assign(0, &mut next);
    }

    fn assign(&mut self, depth: usize, next: &mut usize) {
        self.depth = depth;
        if self.word.is_some() {
            self.span = Span::single(*next);
            *next += 1;
            return;
        }
        let start = *next;
        for child in &mut self.children {
            child.assign(depth + 1, next);
        }
        self.span = Span::new(start, (*next - 1).max(start));
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityMention {
    pub span: Span,
    pub canonical_id: String,
    pub kind: MentionKind,
}

/// A sentence with its dependency parse and, when available, constituency tree
/// and entity mentions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParsedSentence {
    pub id: String,
    pub tokens: Vec<Token>,
    pub dep_root: usize,
    pub tree: Option<ConstituencyNode>,
    pub mentions: Vec<EntityMention>,
    pub quoted_spans: Vec<Span>,
    #[serde(skip)]
    pub(crate) comments: Vec<String>,
}

impl ParsedSentence {
    /// Builds a sentence from tokens, checking the dependency invariants.
    pub fn new(id: impl Into<String>, tokens: Vec<Token>) -> Result<Self> {
        validate_tokens(&tokens, 0)?;
        let dep_root = tokens.iter().find(|t| t.head == 0).map(|t| t.index).unwrap_or(0);
        let quoted_spans = detect_quotes(&tokens);
        Ok(ParsedSentence {
            id: id.into(),
            tokens,
            dep_root,
            tree: None,
            mentions: Vec::new(),
            quoted_spans,
            comments: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Token by 1-based index.
    pub fn token(&self, index: usize) -> &Token {
        &self.tokens[index - 1]
    }

    pub fn get(&self, index: usize) -> Option<&Token> {
        index.checked_sub(1).and_then(|i| self.tokens.get(i))
    }

    /// Direct dependents of `head`, in token order.
    pub fn dependents(&self, head: usize) -> impl Iterator<Item = &Token> {
        self.tokens.iter().filter(move |t| t.head == head)
    }

    /// Dependents of `head` whose base relation is one of `rels`.
    pub fn dependents_with<'a>(&'a self, head: usize, rels: &'a [&'a str]) -> impl Iterator<Item = &'a Token> + 'a {
        self.dependents(head).filter(move |t| rels.contains(&t.deprel.as_str()) || rels.contains(&t.base_rel()))
    }

    /// Tokens attached to `head` through an enhanced (DEPS) edge with one of `rels`.
    pub fn enhanced_dependents<'a>(&'a self, head: usize, rels: &'a [&'a str]) -> impl Iterator<Item = &'a Token> + 'a {
        self.tokens.iter().filter(move |t| {
            t.deps.iter().any(|(h, rel)| {
                *h == head && (rels.contains(&rel.as_str()) || rels.contains(&rel.split(':').next().unwrap_or("")))
            })
        })
    }

    /// Tokens conjoined to `index` (its `conj` dependents, transitively).
    pub fn conjuncts(&self, index: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut frontier = vec![index];
        while let Some(i) = frontier.pop() {
            for t in self.dependents_with(i, &["conj"]) {
                if !out.contains(&t.index) {
                    out.push(t.index);
                    frontier.push(t.index);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Whether `ancestor` dominates `index` in the dependency tree.
    pub fn dominates(&self, ancestor: usize, mut index: usize) -> bool {
        while index != 0 {
            if index == ancestor {
                return true;
            }
            index = self.token(index).head;
        }
        false
    }

    /// Contiguous span of the dependency subtree rooted at `index`.
    pub fn subtree_span(&self, index: usize) -> Span {
        let mut span = Span::single(index);
        for t in &self.tokens {
            if self.dominates(index, t.index) {
                span = span.union(&Span::single(t.index));
            }
        }
        span
    }

    pub fn mention_at(&self, index: usize) -> Option<&EntityMention> {
        self.mentions.iter().find(|m| m.span.contains(index))
    }

    pub fn quoted_span_at(&self, index: usize) -> Option<Span> {
        self.quoted_spans.iter().copied().find(|s| s.contains(index))
    }

    pub fn surface(&self, span: &Span) -> String {
        detokenize(span.indices().map(|i| self.token(i).form.as_str()))
    }

    pub fn text(&self) -> String {
        detokenize(self.tokens.iter().map(|t| t.form.as_str()))
    }

    /// Attaches a constituency tree after checking leaf/token alignment.
    pub fn attach_tree(&mut self, tree: ConstituencyNode) -> Result<()> {
        let leaves = tree.leaves();
        if leaves.len() != self.tokens.len() {
            return Err(Error::Alignment(format!(
                "sentence {}: {} leaves vs {} tokens",
                self.id,
                leaves.len(),
                self.tokens.len()
            )));
        }
        for (leaf, tok) in leaves.iter().zip(&self.tokens) {
            if unescape_ptb(leaf) != unescape_ptb(&tok.form) {
                return Err(Error::Alignment(format!(
                    "sentence {}: leaf {:?} vs token {} {:?}",
                    self.id, leaf, tok.index, tok.form
                )));
            }
        }
        self.tree = Some(tree);
        Ok(())
    }
}

pub(crate) fn unescape_ptb(word: &str) -> &str {
    match word {
        "-LRB-" | "-lrb-" => "(",
        "-RRB-" | "-rrb-" => ")",
        "-LCB-" | "-lcb-" => "{",
        "-RCB-" | "-rcb-" => "}",
        "-LSB-" | "-lsb-" => "[",
        "-RSB-" | "-rsb-" => "]",
        "``" | "''" | "\u{201c}" | "\u{201d}" => "\"",
        "`" | "\u{2018}" | "\u{2019}" => "'",
        w => w,
    }
}

/// Joins tokens with spaces, gluing punctuation and clitics to their left.
pub fn detokenize<'a>(tokens: impl IntoIterator<Item = &'a str>) -> String {
    let mut out = String::new();
    for tok in tokens {
        let glue_left = matches!(tok, "," | "." | ";" | ":" | "?" | "!" | ")" | "'s" | "'" | "n't" | "%");
        if !out.is_empty() && !glue_left && !out.ends_with('(') {
            out.push(' ');
        }
        out.push_str(tok);
    }
    out
}

pub(crate) fn validate_tokens(tokens: &[Token], line: usize) -> Result<()> {
    let n = tokens.len();
    let err = |message: String| Error::Structure { line, message };
    for (i, t) in tokens.iter().enumerate() {
        if t.index != i + 1 {
            return Err(err(format!("token ids not contiguous: expected {} got {}", i + 1, t.index)));
        }
        if t.head > n {
            return Err(err(format!("token {} has head {} beyond sentence length {n}", t.index, t.head)));
        }
        if t.head == t.index {
            return Err(err(format!("token {} is its own head", t.index)));
        }
    }
    if n > 0 && !tokens.iter().any(|t| t.head == 0) {
        return Err(err("no root token".into()));
    }
    for t in tokens {
        let mut seen = 0;
        let mut cur = t.head;
        while cur != 0 {
            seen += 1;
            if seen > n {
                return Err(err(format!("cycle through token {}", t.index)));
            }
            cur = tokens[cur - 1].head;
        }
    }
    Ok(())
}

fn detect_quotes(tokens: &[Token]) -> Vec<Span> {
    let mut spans = Vec::new();
    let mut straight: Option<usize> = None;
    let mut typographic: Option<usize> = None;
    let mut latex: Option<usize> = None;
    let mut push = |open: usize, close: usize| {
        if close > open + 1 {
            spans.push(Span::new(open + 1, close - 1));
        }
    };
    for t in tokens {
        match t.form.as_str() {
            "\"" => match straight.take() {
                Some(open) => push(open, t.index),
                None => straight = Some(t.index),
            },
            "\u{201c}" => typographic = Some(t.index),
            "\u{201d}" => {
                if let Some(open) = typographic.take() {
                    push(open, t.index)
                }
            }
            "``" => latex = Some(t.index),
            "''" => {
                if let Some(open) = latex.take() {
                    push(open, t.index)
                }
            }
            _ => {}
        }
    }
    spans.sort();
    spans
}

/// Attaches longest-match, non-overlapping lexicon mentions, and tags every
/// remaining cardinal number as a `number` mention.
pub fn annotate_mentions(mut sent: ParsedSentence, lexicon: &EntityLexicon) -> ParsedSentence {
    let n = sent.tokens.len();
    let mut mentions = Vec::new();
    let mut i = 1;
    while i <= n {
        let mut best: Option<(usize, &super::lexicon::LexEntry)> = None;
        if !sent.token(i).is_punct() {
            let max_end = (i + lexicon.max_tokens().saturating_sub(1)).min(n);
            for end in (i..=max_end).rev() {
                if sent.token(end).is_punct() {
                    continue;
                }
                let span = Span::new(i, end);
                if let Some(entry) = lexicon.lookup_tokens(span.indices().map(|k| sent.token(k))) {
                    if entry.kind != MentionKind::Predicate {
                        best = Some((end, entry));
                        break;
                    }
                }
            }
        }
        match best {
            Some((end, entry)) => {
                mentions.push(EntityMention {
                    span: Span::new(i, end),
                    canonical_id: entry.id.clone(),
                    kind: entry.kind,
                });
                i = end + 1;
            }
            None => {
                let tok = sent.token(i);
                if tok.is_number() {
                    mentions.push(EntityMention {
                        span: Span::single(i),
                        canonical_id: tok.form.clone(),
                        kind: MentionKind::Number,
                    });
                }
                i += 1;
            }
        }
    }
    sent.mentions = mentions;
    sent
}
