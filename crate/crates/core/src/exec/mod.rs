//! Plan execution over a triple store and a text index.

mod answer;
mod store;
mod text;

pub use answer::{apply_operator, parse_number, AnswerSet, Provenance, Row, Source, COUNT_VAR};
pub use store::{Triple, TripleStore};
pub use text::{DTerm, DerivedTriple, TextIndex};

use std::collections::{BTreeMap, BTreeSet};

use crate::decompose::{Node, Operator};
use crate::error::{Error, Result};
use crate::par::{self, Schedule};
use crate::query::{Candidate, QTerm, QueryPlan, QueryVertex, TYPE_OF};

/// Values a vertex's variable may take, set by the producer of a `↑`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Restriction {
    pub vertex: usize,
    pub var: String,
    pub values: BTreeSet<String>,
}

fn bind(row: &mut Row, var: &str, value: &str) -> bool {
    match row.get(var) {
        Some(v) => v == value,
        None => {
            row.insert(var.to_string(), value.to_string());
            true
        }
    }
}

fn allowed(row: &Row, restrictions: &[&Restriction]) -> bool {
    restrictions.iter().all(|r| row.get(&r.var).is_none_or(|v| r.values.contains(v)))
}

/// Keeps rows whose class variables are typed accordingly in the store, adding the type triples as provenance.
fn typed(c: &Candidate, row: &Row, prov: &mut Provenance, store: &TripleStore) -> bool {
    for t in &c.types {
        let Some(value) = row.get(&t.var) else { return false };
        if !store.contains(value, TYPE_OF, &t.class) {
            return false;
        }
        prov.insert(Source::Kg { s: value.clone(), p: TYPE_OF.to_string(), o: t.class.clone() });
    }
    true
}

fn match_kg(c: &Candidate, store: &TripleStore, restrictions: &[&Restriction]) -> AnswerSet {
    let mut out = AnswerSet::new(c.vars());
    let mut fixed: [Option<&str>; 3] = [None; 3];
    for (i, t) in c.terms.iter().enumerate() {
        match t {
            QTerm::Lexical(_) => return out,
            QTerm::Const { id, .. } => fixed[i] = Some(id),
            QTerm::Var(_) => {}
        }
    }
    // enumerate a restricted position value by value instead of scanning
    let seeded = c.terms.iter().enumerate().find_map(|(i, t)| {
        let v = t.var()?;
        restrictions.iter().find(|r| r.var == v).map(|r| (i, &r.values))
    });
    let seeds: Vec<[Option<&str>; 3]> = match seeded {
        Some((i, values)) => values
            .iter()
            .map(|v| {
                let mut f = fixed;
                f[i] = Some(v.as_str());
                f
            })
            .collect(),
        None => vec![fixed],
    };
    for f in seeds {
        for t in store.matches(f[0], f[1], f[2]) {
            let mut row = Row::new();
            let ok = c.terms.iter().zip([&t.s, &t.p, &t.o]).all(|(term, value)| match term.var() {
                Some(v) => bind(&mut row, v, value),
                None => true,
            });
            if !ok || !allowed(&row, restrictions) {
                continue;
            }
            let mut prov = Provenance::from([Source::Kg { s: t.s.clone(), p: t.p.clone(), o: t.o.clone() }]);
            if typed(c, &row, &mut prov, store) {
                out.insert(row, prov);
            }
        }
    }
    out
}

fn text_term_matches(term: &QTerm, d: &DTerm) -> bool {
    match term {
        QTerm::Var(_) => true,
        QTerm::Const { id, key } => d.id.as_deref() == Some(id.as_str()) || key.as_deref() == Some(d.key.as_str()),
        QTerm::Lexical(k) => *k == d.key,
    }
}

fn match_text(c: &Candidate, index: &TextIndex, store: &TripleStore, restrictions: &[&Restriction]) -> AnswerSet {
    let mut out = AnswerSet::new(c.vars());
    for d in index.derived() {
        if !c.terms.iter().zip(&d.terms).all(|(t, dt)| text_term_matches(t, dt)) {
            continue;
        }
        let mut row = Row::new();
        let ok = c.terms.iter().zip(&d.terms).all(|(term, dt)| match term.var() {
            Some(v) => bind(&mut row, v, dt.value()),
            None => true,
        });
        if !ok || !allowed(&row, restrictions) {
            continue;
        }
        let mut prov = Provenance::from([Source::Text { passage: d.passage.clone(), sentence: d.sentence.clone() }]);
        if typed(c, &row, &mut prov, store) {
            out.insert(row, prov);
        }
    }
    out
}

/// Rows for one candidate from both sources.
pub fn eval_candidate(
    c: &Candidate,
    store: &TripleStore,
    index: &TextIndex,
    restrictions: &[&Restriction],
    schedule: Schedule,
) -> AnswerSet {
    let (mut kg, text) =
        par::join_with(schedule, || match_kg(c, store, restrictions), || match_text(c, index, store, restrictions));
    for (row, prov) in text.rows() {
        kg.insert(row.clone(), prov.clone());
    }
    kg
}

/// Answers of the first candidate, in ranking order, that binds every
/// `required` and restricted variable and has at least one row.
pub fn eval_leaf(
    v: &QueryVertex,
    required: &BTreeSet<String>,
    restrictions: &[&Restriction],
    store: &TripleStore,
    index: &TextIndex,
    schedule: Schedule,
) -> AnswerSet {
    let mut fallback: Option<AnswerSet> = None;
    for c in &v.candidates {
        let vars = c.vars();
        if !required.is_subset(&vars) || restrictions.iter().any(|r| !vars.contains(&r.var)) {
            continue;
        }
        let rows = eval_candidate(c, store, index, restrictions, schedule);
        if !rows.is_empty() {
            return rows;
        }
        fallback.get_or_insert(rows);
    }
    fallback.unwrap_or_else(|| AnswerSet::new(required.iter().cloned()))
}

/// One vertex, optionally fed by a producer's answers through `var`.
pub fn eval_vertex(
    v: &QueryVertex,
    store: &TripleStore,
    index: &TextIndex,
    incoming: Option<(&str, &AnswerSet)>,
) -> AnswerSet {
    let Some((var, producer)) = incoming else {
        return eval_leaf(v, &BTreeSet::new(), &[], store, index, Schedule::default());
    };
    let r = Restriction { vertex: v.origin.id, var: var.to_string(), values: producer.values(var) };
    let required = BTreeSet::from([var.to_string()]);
    let own = eval_leaf(v, &required, &[&r], store, index, Schedule::default());
    own.join(producer)
}

struct Executor<'a> {
    plan: &'a QueryPlan,
    store: &'a TripleStore,
    index: &'a TextIndex,
    schedule: Schedule,
    /// Join variables each vertex has to bind.
    required: BTreeMap<usize, BTreeSet<String>>,
}

impl Executor<'_> {
    fn eval(&self, node: &Node<QueryVertex>, restrictions: &[Restriction]) -> Result<AnswerSet> {
        match node {
            Node::Leaf(v) => {
                let id = v.origin.id;
                let own: Vec<&Restriction> = restrictions.iter().filter(|r| r.vertex == id).collect();
                let empty = BTreeSet::new();
                let required = self.required.get(&id).unwrap_or(&empty);
                Ok(eval_leaf(v, required, &own, self.store, self.index, self.schedule))
            }
            Node::Op { op: Operator::Assign, link, children } => {
                let link = link.ok_or_else(|| Error::Execution("↑ without a link".into()))?;
                let join = self
                    .plan
                    .join_for(&link)
                    .ok_or_else(|| Error::Execution(format!("no join between vertices {} and {}", link.left, link.right)))?;
                let producer = self.eval(&children[1], restrictions)?;
                let mut inner = restrictions.to_vec();
                inner.push(Restriction { vertex: link.left, var: join.var.clone(), values: producer.values(&join.var) });
                let consumer = self.eval(&children[0], &inner)?;
                apply_operator(&Operator::Assign, &consumer, Some(&producer))
            }
            Node::Op { op, children, .. } if op.arity() == 2 => {
                let (l, r) = par::join_with(
                    self.schedule,
                    || self.eval(&children[0], restrictions),
                    || self.eval(&children[1], restrictions),
                );
                apply_operator(op, &l?, Some(&r?))
            }
            Node::Op { op, children, .. } => apply_operator(op, &self.eval(&children[0], restrictions)?, None),
        }
    }
}

/// Evaluates the plan bottom-up: producers of `↑` before their consumers,
/// whose joined slot is restricted to the producer's values.
pub fn answer(plan: &QueryPlan, store: &TripleStore, index: &TextIndex) -> Result<AnswerSet> {
    answer_with(Schedule::default(), plan, store, index)
}

pub fn answer_with(schedule: Schedule, plan: &QueryPlan, store: &TripleStore, index: &TextIndex) -> Result<AnswerSet> {
    let mut required: BTreeMap<usize, BTreeSet<String>> = BTreeMap::new();
    for j in &plan.joins {
        for id in [j.parent, j.child] {
            required.entry(id).or_default().insert(j.var.clone());
        }
    }
    Executor { plan, store, index, schedule, required }.eval(&plan.tree, &[])
}
