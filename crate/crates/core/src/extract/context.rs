use crate::ingest::{EntityLexicon, MentionKind, ParsedSentence, Token};
use crate::phrase::{NounPhrases, Phrase, PhraseLexicons};
use crate::settings::{Setting, SettingSet};

use super::template::TemplateId;
use super::triple::{Term, TriplePattern, VarKind};

/// A predicate with its arguments, read off the dependency tree once per sentence.
#[derive(Debug, Clone)]
pub(crate) struct Frame {
    /// Token carrying the verb phrase (the copula for copular frames).
    pub verb: usize,
    /// Nominal or adjectival predicate of a copular frame; equals `verb` otherwise.
    pub predicate: usize,
    pub copular: bool,
    pub subjects: Vec<usize>,
    pub objects: Vec<usize>,
    /// Prepositional arguments in token order.
    pub obliques: Vec<(usize, String)>,
}

pub(crate) struct Ctx<'a> {
    pub sent: &'a ParsedSentence,
    pub settings: SettingSet,
    pub lex: &'a PhraseLexicons,
    pub entities: &'a EntityLexicon,
    pub nps: NounPhrases,
    pub frames: Vec<Frame>,
}

const RELATIVE_PRONOUNS: [&str; 5] = ["who", "whom", "which", "that", "what"];

/// Argument labels admitted for genitive/prepositional and appositive heads
/// unless setting F widens them to any label.
const BASE_ARGUMENT_RELS: [&str; 5] = ["nsubj", "obj", "obl", "nmod", "root"];

impl<'a> Ctx<'a> {
    pub fn new(sent: &'a ParsedSentence, settings: SettingSet, lex: &'a PhraseLexicons, entities: &'a EntityLexicon) -> Self {
        let nps = NounPhrases::build(sent, settings, lex);
        let mut ctx = Ctx { sent, settings, lex, entities, nps, frames: Vec::new() };
        ctx.frames = ctx.build_frames();
        ctx
    }

    pub fn has(&self, s: Setting) -> bool {
        self.settings.contains(s)
    }

    pub fn tok(&self, i: usize) -> &'a Token {
        self.sent.token(i)
    }

    pub fn np(&self, i: usize) -> Option<&Phrase> {
        if self.tok(i).is_nominal() {
            self.nps.of(i)
        } else {
            None
        }
    }

    pub fn np_term(&self, i: usize) -> Option<Term> {
        self.np(i).cloned().map(Term::Phrase)
    }

    pub fn same_np(&self, a: usize, b: usize) -> bool {
        match (self.nps.index_of(a), self.nps.index_of(b)) {
            (Some(x), Some(y)) => x == y,
            _ => a == b,
        }
    }

    /// Relative pronouns stand for the noun their clause modifies.
    pub fn resolve(&self, i: usize) -> usize {
        let t = self.tok(i);
        if !RELATIVE_PRONOUNS.contains(&t.lower().as_str()) || !matches!(t.pos(), "WDT" | "WP" | "IN" | "DT" | "PRON") {
            return i;
        }
        let clause = t.head;
        if clause != 0 && self.tok(clause).deprel == "acl:relcl" {
            let antecedent = self.tok(clause).head;
            if antecedent != 0 && self.tok(antecedent).is_nominal() {
                return antecedent;
            }
        }
        i
    }

    /// `i` followed by its conjuncts that do not already sit inside its phrase.
    pub fn with_conjuncts(&self, i: usize) -> Vec<usize> {
        let mut out = vec![i];
        let span = self.np(i).map(|p| p.span);
        for c in self.sent.conjuncts(i) {
            let inside = span.is_some_and(|s| s.contains(c));
            if !inside && self.tok(c).is_nominal() && !out.iter().any(|&o| self.same_np(o, c)) {
                out.push(c);
            }
        }
        out
    }

    /// Prepositions of a token, e.g. "of" or "because of". Genitive markers are excluded.
    pub fn case_word(&self, i: usize) -> Option<String> {
        let words: Vec<String> =
            self.sent.dependents_with(i, &["case"]).filter(|t| t.pos() != "POS").map(|t| t.lower()).collect();
        (!words.is_empty()).then(|| words.join(" "))
    }

    pub fn subjects(&self, pred: usize) -> Vec<usize> {
        self.subjects_at(pred, 0)
    }

    fn subjects_at(&self, pred: usize, depth: usize) -> Vec<usize> {
        if depth > 8 || pred == 0 {
            return Vec::new();
        }
        let mut subs: Vec<usize> = self
            .sent
            .dependents_with(pred, &["nsubj"])
            .map(|t| self.resolve(t.index))
            .filter(|&i| self.tok(i).is_nominal())
            .collect();
        if subs.is_empty() {
            subs = self
                .sent
                .enhanced_dependents(pred, &["nsubj"])
                .map(|t| self.resolve(t.index))
                .filter(|&i| self.tok(i).is_nominal())
                .collect();
        }
        if subs.is_empty() {
            let t = self.tok(pred);
            match t.deprel.as_str() {
                "conj" => subs = self.subjects_at(t.head, depth + 1),
                "xcomp" => {
                    let controller: Vec<usize> =
                        self.sent.dependents_with(t.head, &["obj"]).filter(|o| o.is_nominal()).map(|o| o.index).collect();
                    subs = if controller.is_empty() { self.subjects_at(t.head, depth + 1) } else { controller };
                }
                "acl" if t.head != 0 && self.tok(t.head).is_nominal() => subs = vec![t.head],
                _ => {}
            }
        }
        let mut out: Vec<usize> = Vec::new();
        for s in subs {
            for c in self.with_conjuncts(s) {
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
        out
    }

    fn objects(&self, v: usize) -> Vec<usize> {
        let mut objs: Vec<usize> =
            self.sent.dependents_with(v, &["obj"]).map(|t| self.resolve(t.index)).filter(|&i| self.tok(i).is_nominal()).collect();
        for t in self.sent.enhanced_dependents(v, &["obj"]) {
            if t.is_nominal() && t.head != v && !objs.contains(&t.index) {
                objs.push(t.index);
            }
        }
        let mut out = Vec::new();
        for o in objs {
            for c in self.with_conjuncts(o) {
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
        out
    }

    fn obliques(&self, v: usize) -> Vec<(usize, String)> {
        let mut out = Vec::new();
        for t in self.sent.dependents_with(v, &["obl"]) {
            if !t.is_nominal() {
                continue;
            }
            let Some(prep) = self.case_word(t.index) else { continue };
            for c in self.with_conjuncts(t.index) {
                if !out.iter().any(|(o, _)| *o == c) {
                    out.push((c, prep.clone()));
                }
            }
        }
        out.sort_by_key(|(i, _)| *i);
        out
    }

    fn build_frames(&self) -> Vec<Frame> {
        let mut frames = Vec::new();
        for t in &self.sent.tokens {
            let i = t.index;
            if let Some(cop) = self.sent.dependents_with(i, &["cop"]).next() {
                if t.is_nominal() || t.is_adjective() {
                    frames.push(Frame {
                        verb: cop.index,
                        predicate: i,
                        copular: true,
                        subjects: self.subjects(i),
                        objects: Vec::new(),
                        obliques: Vec::new(),
                    });
                }
                continue;
            }
            if !t.is_verb() || matches!(t.base_rel(), "aux" | "cop" | "amod" | "compound") {
                continue;
            }
            let xcomp = self.sent.dependents_with(i, &["xcomp"]).find(|x| x.is_nominal() || x.is_adjective());
            match xcomp {
                Some(x) if self.lex.is_copular(&t.lemma_lower()) => frames.push(Frame {
                    verb: i,
                    predicate: x.index,
                    copular: true,
                    subjects: self.subjects(i),
                    objects: Vec::new(),
                    obliques: Vec::new(),
                }),
                _ => frames.push(Frame {
                    verb: i,
                    predicate: i,
                    copular: false,
                    subjects: self.subjects(i),
                    objects: self.objects(i),
                    obliques: self.obliques(i),
                }),
            }
        }
        frames
    }

    /// Named entity, number, or quoted: the side condition of the indirect templates
    /// and the reformation rule.
    pub fn special(&self, i: usize) -> bool {
        let Some(p) = self.np(i) else { return false };
        let head = p.head;
        self.tok(head).is_number()
            || self.sent.quoted_span_at(head).is_some()
            || self
                .sent
                .mentions
                .iter()
                .any(|m| m.span.contains(head) && matches!(m.kind, MentionKind::Entity | MentionKind::Number))
    }

    /// Whether a token may head the first argument of a genitive/prepositional or appositive relation.
    pub fn admitted(&self, i: usize) -> bool {
        self.has(Setting::F) || {
            let t = self.tok(i);
            t.head == 0 || BASE_ARGUMENT_RELS.contains(&t.base_rel())
        }
    }

    /// Copula agreement for rendered relations.
    pub fn be(&self, i: usize) -> &'static str {
        match self.np(i) {
            Some(p) if self.tok(p.head).is_plural() => "are",
            _ => "is",
        }
    }
}

/// Collects triples, handing out pattern instance ids and instance-scoped variables.
#[derive(Debug, Default)]
pub(crate) struct Emitter {
    pub triples: Vec<TriplePattern>,
    pub relations: Vec<super::triple::Relation>,
    pub diagnostics: Vec<String>,
    next: usize,
}

impl Emitter {
    pub fn instance(&mut self) -> usize {
        self.next += 1;
        self.next
    }

    pub fn var(instance: usize, base: &str) -> Term {
        let kind = match base.as_bytes().first() {
            Some(b's') => VarKind::Subject,
            Some(b'o') => VarKind::Object,
            Some(b'p') => VarKind::Predicate,
            _ => VarKind::Numeric,
        };
        Term::Var { name: format!("?{base}_{instance}"), kind }
    }

    pub fn push(&mut self, template: u8, instance: usize, s: Term, p: Term, o: Term) -> &mut TriplePattern {
        self.triples.push(TriplePattern::new(TemplateId::t(template), instance, s, p, o));
        self.triples.last_mut().expect("just pushed")
    }
}
