//! Turning a composite-question tree into an executable plan: candidate
//! expansion, entity and class linking, predicate synonyms, shared variables.

mod synonyms;

pub use synonyms::SynonymLexicon;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::decompose::{Decomposition, Function, Link, Node, Operator, Slot, SubQuestion, Vertex};
use crate::error::{Error, Result};
use crate::extract::{plain_var, Term, TemplateId, TriplePattern, VarKind};
use crate::ingest::{normalize_key, EntityLexicon, MentionKind, Span};
use crate::phrase::Phrase;

/// Predicate of the class-membership triples in the store.
pub const TYPE_OF: &str = "type";

const WH_WORDS: [&str; 7] = ["who", "whom", "what", "which", "where", "when", "whose"];

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum QTerm {
    Var(String),
    /// Linked to a store id. `key` is the phrase it came from, used to match text.
    Const { id: String, key: Option<String> },
    /// Unlinked phrase key; only text can match it.
    Lexical(String),
}

impl QTerm {
    pub fn var(&self) -> Option<&str> {
        match self {
            QTerm::Var(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for QTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QTerm::Var(v) => f.write_str(v),
            QTerm::Const { id, .. } => write!(f, "<{id}>"),
            QTerm::Lexical(k) => write!(f, "\"{k}\""),
        }
    }
}

/// What a candidate position stands for, so one phrase or variable can be
/// renamed in every candidate at once.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Origin {
    Phrase(Span),
    Var(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TypeConstraint {
    pub var: String,
    pub class: String,
}

/// One triple pattern a vertex may be answered with.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub template: TemplateId,
    pub terms: [QTerm; 3],
    pub origins: [Origin; 3],
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub types: Vec<TypeConstraint>,
    /// Predicate synonym this variant was made from.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub synonym: Option<String>,
}

impl Candidate {
    pub fn new(template: TemplateId, terms: [QTerm; 3], origins: [Origin; 3]) -> Self {
        Candidate { template, terms, origins, types: Vec::new(), synonym: None }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        self.terms.iter().filter_map(|t| t.var().map(str::to_string)).collect()
    }

    fn rename(&mut self, from: &str, to: &str) {
        for t in &mut self.terms {
            if t.var() == Some(from) {
                *t = QTerm::Var(to.to_string());
            }
        }
        for c in &mut self.types {
            if c.var == from {
                c.var = to.to_string();
            }
        }
    }
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.terms[0], self.terms[1], self.terms[2])?;
        for c in &self.types {
            write!(f, " . ({}, {TYPE_OF}, <{}>)", c.var, c.class)?;
        }
        Ok(())
    }
}

/// A sub-question with the candidate patterns it can be answered by.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryVertex {
    pub origin: SubQuestion,
    /// Key triple first, then row siblings in template order, then synonym variants.
    pub candidates: Vec<Candidate>,
    /// Phrase text to linked id.
    pub bindings: BTreeMap<String, String>,
    pub diagnostics: Vec<String>,
    phrases: BTreeMap<Span, Phrase>,
}

impl Vertex for QueryVertex {
    fn vertex_id(&self) -> usize {
        self.origin.id
    }
}

impl QueryVertex {
    /// A vertex with hand-made candidates; the first is the key.
    pub fn new(origin: SubQuestion, candidates: Vec<Candidate>) -> Self {
        assert!(!candidates.is_empty(), "a vertex needs its key candidate");
        QueryVertex { origin, candidates, bindings: BTreeMap::new(), diagnostics: Vec::new(), phrases: BTreeMap::new() }
    }

    pub fn key(&self) -> &Candidate {
        &self.candidates[0]
    }

    fn rename(&mut self, from: &str, to: &str) {
        for c in &mut self.candidates {
            c.rename(from, to);
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "sub_question": self.origin.id,
            "text": self.origin.text(),
            "candidates": self.candidates.iter().map(|c| json!({
                "template": c.template,
                "pattern": c.to_string(),
                "synonym": c.synonym,
            })).collect::<Vec<_>>(),
            "bindings": self.bindings,
            "diagnostics": self.diagnostics,
        })
    }
}

/// `?o_k` and `?s_k` name the same unknown in different row directions.
fn canonical_var(name: &str, kind: VarKind) -> String {
    match kind {
        VarKind::Object => {
            let suffix = name.strip_prefix(plain_var(name)).unwrap_or("");
            format!("?s{suffix}")
        }
        _ => name.to_string(),
    }
}

fn convert(term: &Term, phrases: &mut BTreeMap<Span, Phrase>) -> (QTerm, Origin) {
    match term {
        Term::Phrase(p) => {
            phrases.insert(p.span, p.clone());
            (QTerm::Lexical(p.key.clone()), Origin::Phrase(p.span))
        }
        Term::Var { name, kind } => {
            let v = canonical_var(name, *kind);
            (QTerm::Var(v.clone()), Origin::Var(v))
        }
    }
}

fn same_term(a: &Term, b: &Term) -> bool {
    match (a, b) {
        (Term::Phrase(x), Term::Phrase(y)) => x.span == y.span,
        (Term::Var { name: x, .. }, Term::Var { name: y, .. }) => x == y,
        _ => false,
    }
}

/// The key triple followed by the other triples of its pattern instance.
///
/// A subject bound to another sub-question's variable is bound in the siblings too.
pub fn expand_vertex(v: &SubQuestion, all_triples: &[TriplePattern]) -> QueryVertex {
    let mut siblings: Vec<&TriplePattern> = all_triples
        .iter()
        .filter(|t| t.instance == v.original.instance && t.template != v.original.template)
        .collect();
    siblings.sort_by_key(|t| t.template);
    let rebound = (!same_term(&v.original.subject, &v.triple.subject)).then_some(&v.original.subject);
    let mut phrases = BTreeMap::new();
    let mut candidates = Vec::with_capacity(siblings.len() + 1);
    for t in std::iter::once(&v.triple).chain(siblings.iter().copied()) {
        let parts = t.terms().map(|term| {
            let term = match rebound {
                Some(old) if same_term(term, old) => &v.triple.subject,
                _ => term,
            };
            convert(term, &mut phrases)
        });
        let [(a, oa), (b, ob), (c, oc)] = parts;
        candidates.push(Candidate::new(t.template, [a, b, c], [oa, ob, oc]));
    }
    QueryVertex { origin: v.clone(), candidates, bindings: BTreeMap::new(), diagnostics: Vec::new(), phrases }
}

fn numeric(text: &str) -> bool {
    text.replace(',', "").parse::<f64>().is_ok()
}

fn lookup<'a>(lexicon: &'a EntityLexicon, p: &Phrase, predicate: bool) -> Option<&'a crate::ingest::LexEntry> {
    [p.text.as_str(), p.key.as_str()].into_iter().filter_map(|s| lexicon.lookup(s)).find(|e| {
        if predicate {
            e.kind == MentionKind::Predicate
        } else {
            e.kind != MentionKind::Predicate
        }
    })
}

fn class_var(vertex: usize, candidate: usize, start: usize) -> String {
    format!("?c{vertex}_{candidate}_{start}")
}

/// Gives the class variables of a copied candidate names of its own.
fn freshen(c: &mut Candidate, vertex: usize, candidate: usize) {
    for i in 0..c.types.len() {
        let old = c.types[i].var.clone();
        let Some(start) = old.rsplit('_').next().and_then(|x| x.parse::<usize>().ok()) else { continue };
        c.rename(&old, &class_var(vertex, candidate, start));
    }
}

/// Binds phrases to store ids. Class phrases become a fresh variable with a
/// type constraint; question words become variables.
pub fn link_entities(mut v: QueryVertex, lexicon: &EntityLexicon) -> QueryVertex {
    let id = v.origin.id;
    for (ci, cand) in v.candidates.iter_mut().enumerate() {
        for slot in 0..3 {
            let Origin::Phrase(span) = cand.origins[slot] else { continue };
            let p = &v.phrases[&span];
            let predicate = slot == 1;
            if !predicate && WH_WORDS.contains(&p.key.as_str()) {
                cand.terms[slot] = QTerm::Var(format!("?w{id}_{}", span.start));
                continue;
            }
            if !predicate && numeric(&p.text) {
                cand.terms[slot] = QTerm::Const { id: p.text.replace(',', ""), key: Some(p.key.clone()) };
                continue;
            }
            let Some(entry) = lookup(lexicon, p, predicate) else { continue };
            v.bindings.insert(p.text.clone(), entry.id.clone());
            if entry.kind == MentionKind::Class {
                let var = class_var(id, ci, span.start);
                cand.terms[slot] = QTerm::Var(var.clone());
                cand.types.push(TypeConstraint { var, class: entry.id.clone() });
            } else {
                cand.terms[slot] = QTerm::Const { id: entry.id.clone(), key: Some(p.key.clone()) };
            }
        }
    }
    v
}

/// Adds a variant of every candidate with an unlinked predicate for each of its synonyms.
pub fn expand_predicates(mut v: QueryVertex, synlex: &SynonymLexicon, lexicon: &EntityLexicon) -> QueryVertex {
    let mut variants = Vec::new();
    let mut missing = BTreeSet::new();
    for cand in &v.candidates {
        let QTerm::Lexical(key) = &cand.terms[1] else { continue };
        let syns = synlex.get(key);
        if syns.is_empty() {
            missing.insert(key.clone());
        }
        for syn in syns {
            let mut c = cand.clone();
            c.terms[1] = match lexicon.lookup(syn).filter(|e| e.kind == MentionKind::Predicate) {
                Some(e) => QTerm::Const { id: e.id.clone(), key: Some(syn.clone()) },
                None => QTerm::Lexical(syn.clone()),
            };
            c.synonym = Some(syn.clone());
            if !v.candidates.contains(&c) && !variants.contains(&c) {
                variants.push(c);
            }
        }
    }
    for key in missing {
        log::debug!("no synonyms for predicate {key:?}");
        v.diagnostics.push(format!("no synonyms for predicate \"{key}\""));
    }
    let base = v.candidates.len();
    for (i, mut c) in variants.into_iter().enumerate() {
        freshen(&mut c, v.origin.id, base + i);
        v.candidates.push(c);
    }
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JointKind {
    ObjectSubject,
    ObjectObject,
    SubjectSubject,
    SubjectObject,
}

impl JointKind {
    /// Named parent slot first, child slot second.
    pub fn of(parent: Slot, child: Slot) -> Option<JointKind> {
        Some(match (parent, child) {
            (Slot::Object, Slot::Subject) => JointKind::ObjectSubject,
            (Slot::Object, Slot::Object) => JointKind::ObjectObject,
            (Slot::Subject, Slot::Subject) => JointKind::SubjectSubject,
            (Slot::Subject, Slot::Object) => JointKind::SubjectObject,
            _ => return None,
        })
    }
}

/// Shared variable between two vertices under one operator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Join {
    /// Consumer side for `↑`, left side for `∩`/`∪`.
    pub parent: usize,
    pub child: usize,
    pub parent_slot: Slot,
    pub child_slot: Slot,
    pub kind: JointKind,
    pub var: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryPlan {
    pub sentence_id: String,
    pub tree: Node<QueryVertex>,
    pub joins: Vec<Join>,
}

impl QueryPlan {
    pub fn join_for(&self, link: &Link) -> Option<&Join> {
        self.joins.iter().find(|j| j.parent == link.left && j.child == link.right)
    }

    pub fn vertex(&self, id: usize) -> Option<&QueryVertex> {
        self.tree.leaves().into_iter().find(|v| v.origin.id == id)
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.tree.to_json(&QueryVertex::to_json);
        v["sentence_id"] = json!(self.sentence_id);
        v["joins"] = serde_json::to_value(&self.joins).expect("joins serialize");
        v
    }
}

fn slot_index(slot: Slot) -> usize {
    match slot {
        Slot::Subject => 0,
        Slot::Predicate => 1,
        Slot::Object => 2,
    }
}

fn other(slot: Slot) -> Slot {
    match slot {
        Slot::Subject => Slot::Object,
        _ => Slot::Subject,
    }
}

/// A slot can carry a shared variable unless the key triple pins it to an entity.
fn joinable(v: &QueryVertex, slot: Slot) -> bool {
    !matches!(v.key().terms[slot_index(slot)], QTerm::Const { .. })
}

fn leaf_mut<'a>(tree: &'a mut Node<QueryVertex>, id: usize) -> Option<&'a mut QueryVertex> {
    tree.leaves_mut().into_iter().find(|v| v.origin.id == id)
}

/// Puts `var` at `slot` of the vertex in every candidate holding the same phrase or variable.
fn bind_slot(v: &mut QueryVertex, slot: Slot, var: &str) {
    let i = slot_index(slot);
    let origin = v.key().origins[i].clone();
    for cand in &mut v.candidates {
        for k in 0..3 {
            if cand.origins[k] != origin {
                continue;
            }
            match cand.terms[k].clone() {
                QTerm::Var(old) => cand.rename(&old, var),
                _ => cand.terms[k] = QTerm::Var(var.to_string()),
            }
        }
    }
}

/// Introduces one shared variable per linked operator, choosing the slot pair
/// named by the tree when both can carry a variable, else the nearest pair that can.
pub fn connect_plan(sentence_id: &str, mut tree: Node<QueryVertex>) -> Result<QueryPlan> {
    let links: Vec<Link> = tree.operators().into_iter().filter_map(|(_, l)| l.copied()).collect();
    let mut joins: Vec<Join> = Vec::new();
    for (n, link) in links.iter().enumerate() {
        let err = |message: String| Error::Planning { parent: link.left, child: link.right, message };
        let (pv, cv) = {
            let p = tree.leaves().into_iter().find(|v| v.origin.id == link.left).cloned();
            let c = tree.leaves().into_iter().find(|v| v.origin.id == link.right).cloned();
            (p.ok_or_else(|| err("parent vertex missing".into()))?, c.ok_or_else(|| err("child vertex missing".into()))?)
        };
        let tries = [
            (link.left_slot, link.right_slot),
            (other(link.left_slot), link.right_slot),
            (link.left_slot, other(link.right_slot)),
            (other(link.left_slot), other(link.right_slot)),
        ];
        let Some(&(ps, cs)) = tries.iter().find(|(ps, cs)| joinable(&pv, *ps) && joinable(&cv, *cs)) else {
            return Err(err(format!(
                "no slot pair can share a variable: {} and {}",
                pv.key(),
                cv.key()
            )));
        };
        let kind = JointKind::of(ps, cs).ok_or_else(|| err("predicate slots cannot be joined".into()))?;
        // reuse a shared variable one side already carries
        let existing = |v: &QueryVertex, s: Slot| {
            v.key().terms[slot_index(s)].var().filter(|x| x.starts_with("?j")).map(str::to_string)
        };
        let var = existing(&pv, ps).or_else(|| existing(&cv, cs)).unwrap_or_else(|| format!("?j{}", n + 1));
        for old in [existing(&pv, ps), existing(&cv, cs)].into_iter().flatten().filter(|o| *o != var) {
            for v in tree.leaves_mut() {
                v.rename(&old, &var);
            }
            for j in joins.iter_mut().filter(|j| j.var == old) {
                j.var = var.clone();
            }
        }
        bind_slot(leaf_mut(&mut tree, link.left).expect("checked above"), ps, &var);
        bind_slot(leaf_mut(&mut tree, link.right).expect("checked above"), cs, &var);
        joins.push(Join { parent: link.left, child: link.right, parent_slot: ps, child_slot: cs, kind, var });
    }
    Ok(QueryPlan { sentence_id: sentence_id.to_string(), tree, joins })
}

/// Expansion, linking and synonym variants for every vertex, then shared variables.
pub fn plan(
    d: &Decomposition,
    all_triples: &[TriplePattern],
    lexicon: &EntityLexicon,
    synlex: &SynonymLexicon,
) -> Result<QueryPlan> {
    let tree = d.tree.clone().map(&mut |q: SubQuestion| {
        let v = expand_vertex(&q, all_triples);
        let v = link_entities(v, lexicon);
        expand_predicates(v, synlex, lexicon)
    });
    let mut plan = connect_plan(&d.sentence_id, tree)?;
    resolve_filters(&mut plan.tree);
    Ok(plan)
}

/// Filters name the extracted object variable; point them at the name the plan uses for it.
fn resolve_filters(tree: &mut Node<QueryVertex>) {
    let mut names: BTreeMap<String, String> = BTreeMap::new();
    for v in tree.leaves() {
        let Term::Var { name, kind } = &v.origin.original.object else { continue };
        let canon = Origin::Var(canonical_var(name, *kind));
        let key = v.key();
        if let Some(i) = key.origins.iter().position(|o| *o == canon) {
            if let Some(now) = key.terms[i].var() {
                names.insert(name.clone(), now.to_string());
            }
        }
    }
    fn walk(node: &mut Node<QueryVertex>, names: &BTreeMap<String, String>) {
        if let Node::Op { op, children, .. } = node {
            if let Operator::Function(Function::Filter { var, .. }) = op {
                if let Some(now) = names.get(var.as_str()) {
                    *var = now.clone();
                }
            }
            children.iter_mut().for_each(|c| walk(c, names));
        }
    }
    walk(tree, &names);
}

/// Normalized phrase key for text matching.
pub fn phrase_key(text: &str) -> String {
    normalize_key(text)
}
