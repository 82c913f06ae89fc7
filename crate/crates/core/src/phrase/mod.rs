//! Minimal noun phrases, verb phrases and adjective classes.

mod lexicons;

pub use lexicons::PhraseLexicons;

use serde::{Deserialize, Serialize};

use crate::ingest::{detokenize, MentionKind, ParsedSentence, Span, Token};
use crate::settings::{Setting, SettingSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PhraseKind {
    NP,
    VP,
    ADJP,
    PREP,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Phrase {
    pub span: Span,
    pub head: usize,
    pub kind: PhraseKind,
    /// Surface text without leading determiners, possessives or quotes.
    pub text: String,
    /// Lowercased lemmas of the text tokens; used for matching.
    pub key: String,
    /// Adverbial modifiers of a verb phrase, including ones left out of `text`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub modifiers: Vec<usize>,
}

impl Phrase {
    /// Builds a phrase whose text is the given tokens (in sentence order).
    pub fn from_tokens(sent: &ParsedSentence, kind: PhraseKind, head: usize, tokens: &[usize]) -> Phrase {
        let mut tokens = tokens.to_vec();
        tokens.sort_unstable();
        tokens.dedup();
        let span = Span::new(*tokens.first().unwrap_or(&head), *tokens.last().unwrap_or(&head));
        Phrase {
            span,
            head,
            kind,
            text: detokenize(tokens.iter().map(|&i| sent.token(i).form.as_str())),
            key: detokenize_owned(tokens.iter().map(|&i| sent.token(i).lemma_lower())),
            modifiers: Vec::new(),
        }
    }

    /// A one-token phrase.
    pub fn single(sent: &ParsedSentence, kind: PhraseKind, index: usize) -> Phrase {
        Phrase::from_tokens(sent, kind, index, &[index])
    }
}

fn detokenize_owned(words: impl Iterator<Item = String>) -> String {
    let words: Vec<String> = words.collect();
    detokenize(words.iter().map(String::as_str))
}

/// Adjective classes used by the comparative patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AdjectiveKind {
    /// Comparative of a measurable quantity ("deeper").
    Numerical,
    /// Comparative of a quality ("stronger").
    Quality,
    /// Superlative of a measurable quantity ("tallest").
    Superlative,
    Plain,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AdjectiveClass {
    pub lemma: String,
    pub class: AdjectiveKind,
}

pub fn classify_adjective(token: &Token, lex: &PhraseLexicons) -> AdjectiveClass {
    let lemma = token.lemma_lower();
    let quantity = lex.is_quantity(&lemma) || lex.is_quantity(&token.lower());
    let class = match token.pos() {
        "JJR" | "RBR" if quantity => AdjectiveKind::Numerical,
        "JJR" | "RBR" => AdjectiveKind::Quality,
        "JJS" | "RBS" if quantity => AdjectiveKind::Superlative,
        _ => AdjectiveKind::Plain,
    };
    AdjectiveClass { lemma, class }
}

pub fn is_copular(vp: &Phrase, sent: &ParsedSentence, lex: &PhraseLexicons) -> bool {
    vp.kind == PhraseKind::VP && lex.is_copular(&sent.token(vp.head).lemma_lower())
}

/// Verb phrase for a verb token: the verb and its particles. Auxiliaries are left out.
pub fn verb_phrase(sent: &ParsedSentence, verb: usize) -> Phrase {
    let mut tokens = vec![verb];
    tokens.extend(sent.dependents_with(verb, &["compound:prt"]).map(|t| t.index));
    Phrase::from_tokens(sent, PhraseKind::VP, verb, &tokens)
}

/// Widens a verb phrase with the adverbs modifying its head.
///
/// Wh-adverbs ("when") are only recorded in `modifiers`.
pub fn attach_adverb_modifiers(vp: Phrase, sent: &ParsedSentence) -> Phrase {
    let advmods: Vec<&Token> = sent.dependents_with(vp.head, &["advmod"]).collect();
    if advmods.is_empty() {
        return vp;
    }
    let mut tokens: Vec<usize> = vp.span.indices().filter(|&i| vp_token(sent, &vp, i)).collect();
    let mut modifiers = vp.modifiers.clone();
    for adv in advmods {
        modifiers.push(adv.index);
        if !matches!(adv.pos(), "WRB") {
            tokens.push(adv.index);
        }
    }
    modifiers.sort_unstable();
    let mut out = Phrase::from_tokens(sent, PhraseKind::VP, vp.head, &tokens);
    out.modifiers = modifiers;
    out
}

fn vp_token(sent: &ParsedSentence, vp: &Phrase, i: usize) -> bool {
    i == vp.head || sent.token(i).head == vp.head && matches!(sent.token(i).deprel.as_str(), "compound:prt" | "advmod")
}

/// Verb phrase with adverb modifiers attached.
pub fn full_verb_phrase(sent: &ParsedSentence, verb: usize) -> Phrase {
    attach_adverb_modifiers(verb_phrase(sent, verb), sent)
}

/// POS tags that may sit in a minimal noun phrase next to its noun.
fn admissible_in_run(tok: &Token) -> bool {
    matches!(
        tok.pos(),
        "NN" | "NNS" | "NNP" | "NNPS" | "NOUN" | "PROPN" | "FW" | "CD" | "NUM" | "JJ" | "ADJ" | "VBN" | "VBG"
            | "DT" | "PDT" | "PRP$" | "WP$"
    )
}

fn strippable_lead(tok: &Token) -> bool {
    matches!(tok.pos(), "DT" | "PDT" | "PRP$" | "WP$" | "WDT" | "POS") || tok.is_punct()
}

/// Noun phrases of a sentence with a token-to-phrase map.
#[derive(Debug, Clone, Default)]
pub struct NounPhrases {
    pub phrases: Vec<Phrase>,
    owner: Vec<Option<usize>>,
}

impl NounPhrases {
    pub fn build(sent: &ParsedSentence, settings: SettingSet, lex: &PhraseLexicons) -> NounPhrases {
        let n = sent.len();
        let minimal = settings.contains(Setting::A);
        let mut uf = UnionFind::new(n + 1);
        // tokens taking part in some phrase, and the extra span each group must cover
        let mut member = vec![false; n + 1];
        let mut base_span: Vec<Option<Span>> = vec![None; n + 1];

        for tok in &sent.tokens {
            if !tok.is_nominal() {
                continue;
            }
            let i = tok.index;
            member[i] = true;
            if minimal {
                let run = minimal_run(sent, i);
                base_span[i] = Some(run);
                for j in run.indices() {
                    if sent.token(j).is_nominal() {
                        member[j] = true;
                        uf.union(i, j);
                    }
                }
            } else {
                base_span[i] = Some(dependency_span(sent, i));
                if absorbed_modifier(sent, tok) {
                    uf.union(i, tok.head);
                }
            }
        }

        let mut extra: Vec<Span> = Vec::new();
        if settings.contains(Setting::B) {
            extra.extend(sent.quoted_spans.iter().copied());
            extra.extend(lex.expression_spans(sent));
        }
        if settings.contains(Setting::C) {
            extra.extend(sent.mentions.iter().filter(|m| m.kind == MentionKind::Entity).map(|m| m.span));
        }
        let mut group_extra: Vec<(usize, Span)> = Vec::new();
        for span in extra {
            let nominals: Vec<usize> = span.indices().filter(|&i| member[i]).collect();
            if let Some(&first) = nominals.first() {
                for &j in &nominals[1..] {
                    uf.union(first, j);
                }
                group_extra.push((first, span));
            }
        }

        // collect groups in order of their first member
        let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
        for i in 1..=n {
            if !member[i] {
                continue;
            }
            let root = uf.find(i);
            match groups.iter_mut().find(|(r, _)| *r == root) {
                Some((_, v)) => v.push(i),
                None => groups.push((root, vec![i])),
            }
        }

        let mut phrases = Vec::new();
        let mut owner = vec![None; n + 1];
        for (root, members) in groups {
            let mut span = Span::single(members[0]);
            if minimal {
                for &m in &members {
                    if let Some(s) = base_span[m] {
                        span = span.union(&s);
                    }
                }
            }
            for (first, s) in &group_extra {
                if uf.find(*first) == root {
                    span = span.union(s);
                }
            }
            let head = group_head(sent, &members, &span);
            if !minimal {
                if let Some(s) = base_span[head] {
                    span = span.union(&s);
                }
            }
            let idx = phrases.len();
            phrases.push(np_from_span(sent, span, head));
            if minimal {
                for i in span.indices() {
                    owner[i].get_or_insert(idx);
                }
            } else {
                for &m in &members {
                    owner[m] = Some(idx);
                }
            }
        }
        NounPhrases { phrases, owner }
    }

    /// Index of the phrase owning token `index`.
    pub fn index_of(&self, index: usize) -> Option<usize> {
        self.owner.get(index).copied().flatten()
    }

    pub fn of(&self, index: usize) -> Option<&Phrase> {
        self.index_of(index).map(|i| &self.phrases[i])
    }

    pub fn get(&self, idx: usize) -> &Phrase {
        &self.phrases[idx]
    }
}

/// Each noun token yields exactly one noun phrase; tokens of one run share it.
pub fn form_noun_phrases(sent: &ParsedSentence, settings: SettingSet, lex: &PhraseLexicons) -> Vec<Phrase> {
    NounPhrases::build(sent, settings, lex).phrases
}

fn np_from_span(sent: &ParsedSentence, span: Span, head: usize) -> Phrase {
    let mut start = span.start;
    let mut end = span.end;
    while start < end && start != head && strippable_lead(sent.token(start)) {
        start += 1;
    }
    while end > start && end != head && sent.token(end).is_punct() {
        end -= 1;
    }
    let tokens: Vec<usize> = (start..=end).collect();
    let mut p = Phrase::from_tokens(sent, PhraseKind::NP, head, &tokens);
    p.span = span;
    p
}

fn group_head(sent: &ParsedSentence, members: &[usize], span: &Span) -> usize {
    let depth = |mut i: usize| {
        let mut d = 0;
        while i != 0 {
            i = sent.token(i).head;
            d += 1;
        }
        d
    };
    members
        .iter()
        .copied()
        .filter(|&m| !span.contains(sent.token(m).head))
        .min_by_key(|&m| (depth(m), std::cmp::Reverse(m)))
        .or_else(|| members.iter().copied().min_by_key(|&m| (depth(m), std::cmp::Reverse(m))))
        .expect("non-empty group")
}

/// Contiguous run of admissible preterminal siblings around token `i`.
///
/// Falls back to adjacent compound/amod/flat dependents when there is no tree.
pub fn minimal_run(sent: &ParsedSentence, i: usize) -> Span {
    let Some(tree) = &sent.tree else {
        return dependency_run(sent, i);
    };
    let path = tree.path_to_leaf(i);
    if path.len() < 2 {
        return Span::single(i);
    }
    let parent = path[path.len() - 2];
    let pos = parent.children.iter().position(|c| c.span.contains(i)).expect("leaf under parent");
    let ok = |k: usize| {
        let c = &parent.children[k];
        c.is_leaf() && admissible_in_run(sent.token(c.span.start))
    };
    let mut lo = pos;
    while lo > 0 && ok(lo - 1) {
        lo -= 1;
    }
    let mut hi = pos;
    while hi + 1 < parent.children.len() && ok(hi + 1) {
        hi += 1;
    }
    Span::new(parent.children[lo].span.start, parent.children[hi].span.end)
}

fn dependency_run(sent: &ParsedSentence, i: usize) -> Span {
    const RELS: [&str; 6] = ["compound", "amod", "flat", "nummod", "det", "nmod:poss"];
    let mut span = Span::single(i);
    loop {
        let mut grown = false;
        if span.start > 1 {
            let t = sent.token(span.start - 1);
            if admissible_in_run(t) && span.contains(t.head) && RELS.contains(&t.deprel.as_str()) && flat_modifier(sent, t) {
                span.start -= 1;
                grown = true;
            }
        }
        if span.end < sent.len() {
            let t = sent.token(span.end + 1);
            if admissible_in_run(t) && span.contains(t.head) && matches!(t.base_rel(), "flat" | "compound") {
                span.end += 1;
                grown = true;
            }
        }
        if !grown {
            return span;
        }
    }
}

/// A modifier with clause-level dependents of its own ("how many") sits deeper than the noun.
fn flat_modifier(sent: &ParsedSentence, tok: &Token) -> bool {
    sent.dependents(tok.index).all(|d| matches!(d.base_rel(), "compound" | "flat" | "amod" | "nummod" | "det"))
}

const NON_PHRASAL_RELS: [&str; 11] =
    ["nsubj", "csubj", "cop", "aux", "mark", "punct", "case", "appos", "nmod:poss", "expl", "discourse"];

/// Without the minimality setting a noun spans its whole dependency subtree,
/// minus clause-level attachments.
fn dependency_span(sent: &ParsedSentence, i: usize) -> Span {
    let mut span = Span::single(i);
    for t in sent.dependents(i) {
        if NON_PHRASAL_RELS.contains(&t.deprel.as_str()) || NON_PHRASAL_RELS.contains(&t.base_rel()) {
            continue;
        }
        span = span.union(&sent.subtree_span(t.index));
    }
    span
}

fn absorbed_modifier(sent: &ParsedSentence, tok: &Token) -> bool {
    tok.head != 0
        && matches!(tok.base_rel(), "compound" | "flat" | "nummod" | "amod")
        && sent.token(tok.head).is_nominal()
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller index as root so groups are stable
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}
