//! Plan execution against exhaustive enumeration over random stores.
//!
//! The enumerator tries every assignment of a candidate's variables over all
//! values in the store rather than looking triples up, and combines results
//! with its own join, union and count.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::time::Instant;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use hybridqa::decompose::{Function, Link, Node, Operator, Slot};
use hybridqa::exec::{Source, Triple};
use hybridqa::extract::VarKind;
use hybridqa::query::{Candidate, JointKind, Join, Origin, QTerm, TypeConstraint};
use hybridqa::{answer, QueryPlan, QueryVertex, SubQuestion, TemplateId, Term, TextIndex, TripleStore, TriplePattern};

use crate::common::Report;

type Row = BTreeMap<String, String>;

/// Rows with their supporting sources.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub vars: BTreeSet<String>,
    pub rows: BTreeMap<Row, BTreeSet<Source>>,
}

impl Table {
    fn empty(vars: BTreeSet<String>) -> Self {
        Table { vars, rows: BTreeMap::new() }
    }

    fn add(&mut self, row: Row, prov: BTreeSet<Source>) {
        self.rows.entry(row).or_default().extend(prov);
    }

    pub fn of(a: &hybridqa::AnswerSet) -> Self {
        Table { vars: a.vars().clone(), rows: a.rows().map(|(r, p)| (r.clone(), p.clone())).collect() }
    }
}

fn shared(l: &Table, r: &Table) -> Result<BTreeSet<String>, ()> {
    let common: BTreeSet<String> = l.vars.intersection(&r.vars).cloned().collect();
    if common.is_empty() {
        Err(())
    } else {
        Ok(common)
    }
}

/// Every pair of rows, kept when they agree wherever both are bound.
pub fn join(l: &Table, r: &Table) -> Result<Table, ()> {
    shared(l, r)?;
    let mut out = Table::empty(l.vars.union(&r.vars).cloned().collect());
    for (a, pa) in &l.rows {
        for (b, pb) in &r.rows {
            if a.iter().all(|(k, v)| b.get(k).is_none_or(|w| w == v)) {
                let mut row = a.clone();
                row.extend(b.clone());
                out.add(row, pa.union(pb).cloned().collect());
            }
        }
    }
    Ok(out)
}

pub fn union(l: &Table, r: &Table) -> Result<Table, ()> {
    let common = shared(l, r)?;
    let mut out = Table::empty(common.clone());
    for (row, prov) in l.rows.iter().chain(&r.rows) {
        out.add(row.iter().filter(|(k, _)| common.contains(*k)).map(|(k, v)| (k.clone(), v.clone())).collect(), prov.clone());
    }
    Ok(out)
}

pub fn count(t: &Table) -> Table {
    let mut out = Table::empty(BTreeSet::from(["?n".to_string()]));
    let prov = t.rows.values().flatten().cloned().collect();
    out.add(Row::from([("?n".to_string(), t.rows.len().to_string())]), prov);
    out
}

struct Oracle<'a> {
    triples: HashSet<(&'a str, &'a str, &'a str)>,
    domain: Vec<&'a str>,
    plan: &'a QueryPlan,
}

struct Restrict {
    vertex: usize,
    var: String,
    values: BTreeSet<String>,
}

impl<'a> Oracle<'a> {
    fn new(store: &'a TripleStore, plan: &'a QueryPlan) -> Self {
        let triples: HashSet<_> = store.iter().map(|t| (t.s.as_str(), t.p.as_str(), t.o.as_str())).collect();
        let domain: BTreeSet<&str> = triples.iter().flat_map(|&(s, p, o)| [s, p, o]).collect();
        Oracle { triples, domain: domain.into_iter().collect(), plan }
    }

    fn vars(c: &Candidate) -> BTreeSet<String> {
        c.terms.iter().filter_map(|t| if let QTerm::Var(v) = t { Some(v.clone()) } else { None }).collect()
    }

    fn enumerate(&self, c: &Candidate, restrictions: &[&Restrict]) -> Table {
        let vars: Vec<String> = Self::vars(c).into_iter().collect();
        let mut out = Table::empty(vars.iter().cloned().collect());
        let n = self.domain.len();
        let total = n.pow(vars.len() as u32);
        for code in 0..total {
            let mut row = Row::new();
            let mut k = code;
            for v in &vars {
                row.insert(v.clone(), self.domain[k % n].to_string());
                k /= n;
            }
            let ground: Vec<&str> = c
                .terms
                .iter()
                .map(|t| match t {
                    QTerm::Var(v) => row[v].as_str(),
                    QTerm::Const { id, .. } => id.as_str(),
                    QTerm::Lexical(_) => "\u{0}",
                })
                .collect();
            if !self.triples.contains(&(ground[0], ground[1], ground[2])) {
                continue;
            }
            if !restrictions.iter().all(|r| r.values.contains(&row[&r.var])) {
                continue;
            }
            let mut prov = BTreeSet::from([Source::Kg { s: ground[0].into(), p: ground[1].into(), o: ground[2].into() }]);
            let typed = c.types.iter().all(|t| {
                let ok = self.triples.contains(&(row[&t.var].as_str(), "type", t.class.as_str()));
                prov.insert(Source::Kg { s: row[&t.var].clone(), p: "type".into(), o: t.class.clone() });
                ok
            });
            if typed {
                out.add(row, prov);
            }
        }
        out
    }

    fn required(&self, id: usize) -> BTreeSet<String> {
        self.plan.joins.iter().filter(|j| j.parent == id || j.child == id).map(|j| j.var.clone()).collect()
    }

    /// First candidate, in order, that binds the join and restricted variables and finds rows.
    fn leaf(&self, v: &QueryVertex, restrictions: &[Restrict]) -> Table {
        let id = v.origin.id;
        let own: Vec<&Restrict> = restrictions.iter().filter(|r| r.vertex == id).collect();
        let required = self.required(id);
        let mut first_fit = None;
        for c in &v.candidates {
            let vars = Self::vars(c);
            if !required.iter().all(|x| vars.contains(x)) || !own.iter().all(|r| vars.contains(&r.var)) {
                continue;
            }
            let t = self.enumerate(c, &own);
            if !t.rows.is_empty() {
                return t;
            }
            first_fit.get_or_insert(t);
        }
        first_fit.unwrap_or_else(|| Table::empty(required))
    }

    fn eval(&self, node: &Node<QueryVertex>, restrictions: &[Restrict]) -> Result<Table, ()> {
        match node {
            Node::Leaf(v) => Ok(self.leaf(v, restrictions)),
            Node::Op { op, link, children } => match op {
                Operator::Assign => {
                    let link = link.ok_or(())?;
                    let j = self.plan.joins.iter().find(|j| j.parent == link.left && j.child == link.right).ok_or(())?;
                    let producer = self.eval(&children[1], restrictions)?;
                    let values = producer.rows.keys().filter_map(|r| r.get(&j.var).cloned()).collect();
                    let mut inner: Vec<Restrict> = restrictions
                        .iter()
                        .map(|r| Restrict { vertex: r.vertex, var: r.var.clone(), values: r.values.clone() })
                        .collect();
                    inner.push(Restrict { vertex: link.left, var: j.var.clone(), values });
                    let consumer = self.eval(&children[0], &inner)?;
                    join(&consumer, &producer)
                }
                Operator::Intersection => join(&self.eval(&children[0], restrictions)?, &self.eval(&children[1], restrictions)?),
                Operator::Union => union(&self.eval(&children[0], restrictions)?, &self.eval(&children[1], restrictions)?),
                Operator::Function(Function::Count) => Ok(count(&self.eval(&children[0], restrictions)?)),
                Operator::Function(Function::Filter { .. }) => Err(()),
            },
        }
    }
}

const VARS: [&str; 2] = ["?a", "?b"];
const PREDICATES: [&str; 3] = ["p0", "p1", "type"];
const CLASSES: [&str; 2] = ["C0", "C1"];

fn random_store(rng: &mut StdRng) -> TripleStore {
    let entities: Vec<String> = (0..rng.gen_range(2..=8)).map(|i| format!("e{i}")).collect();
    let mut store = TripleStore::new();
    for _ in 0..rng.gen_range(0..=200) {
        let s = entities.choose(rng).unwrap().clone();
        let p = *PREDICATES.choose(rng).unwrap();
        let o = if p == "type" { CLASSES.choose(rng).unwrap().to_string() } else { entities.choose(rng).unwrap().clone() };
        store.insert(Triple::new(s, p, o));
    }
    store
}

fn random_term(rng: &mut StdRng, position: usize) -> QTerm {
    match rng.gen_range(0..10) {
        0..=5 => QTerm::Var(VARS.choose(rng).unwrap().to_string()),
        6 => QTerm::Lexical("unlinked".into()),
        _ => {
            let id = if position == 1 { PREDICATES[rng.gen_range(0..2)].to_string() } else { format!("e{}", rng.gen_range(0..8)) };
            QTerm::Const { id, key: None }
        }
    }
}

fn random_candidate(rng: &mut StdRng) -> Candidate {
    let terms = [random_term(rng, 0), random_term(rng, 1), random_term(rng, 2)];
    let origins = [Origin::Var("?a".into()), Origin::Var("?b".into()), Origin::Var("?c".into())];
    let mut c = Candidate::new(TemplateId::t(16), terms, origins);
    if let Some(v) = c.vars().into_iter().next().filter(|_| rng.gen_bool(0.2)) {
        c.types.push(TypeConstraint { var: v, class: CLASSES.choose(rng).unwrap().to_string() });
    }
    c
}

fn vertex(rng: &mut StdRng, id: usize) -> QueryVertex {
    let var = |n: &str| Term::Var { name: n.into(), kind: VarKind::Subject };
    let origin = SubQuestion::new(id, TriplePattern::new(TemplateId::t(16), id, var("?s"), var("?p"), var("?o")));
    let candidates = (0..rng.gen_range(1..=3)).map(|_| random_candidate(rng)).collect();
    QueryVertex::new(origin, candidates)
}

fn ids(node: &Node<QueryVertex>) -> Vec<usize> {
    node.leaves().iter().map(|v| v.origin.id).collect()
}

/// A random tree over vertex ids `lo..hi`, with a join for every linked operator.
fn random_tree(rng: &mut StdRng, lo: usize, hi: usize, joins: &mut Vec<Join>) -> Node<QueryVertex> {
    let mut node = if hi - lo == 1 {
        Node::Leaf(vertex(rng, lo))
    } else {
        let mid = rng.gen_range(lo + 1..hi);
        let left = random_tree(rng, lo, mid, joins);
        let right = random_tree(rng, mid, hi, joins);
        let op = [Operator::Intersection, Operator::Union, Operator::Assign].choose(rng).unwrap().clone();
        let link = if op == Operator::Assign || rng.gen_bool(0.5) {
            let l = Link {
                left: *ids(&left).choose(rng).unwrap(),
                left_slot: Slot::Subject,
                right: *ids(&right).choose(rng).unwrap(),
                right_slot: Slot::Subject,
            };
            joins.push(Join {
                parent: l.left,
                child: l.right,
                parent_slot: Slot::Subject,
                child_slot: Slot::Subject,
                kind: JointKind::SubjectSubject,
                var: VARS.choose(rng).unwrap().to_string(),
            });
            Some(l)
        } else {
            None
        };
        Node::Op { op, link, children: vec![left, right] }
    };
    if rng.gen_bool(0.1) {
        node = Node::Op { op: Operator::Function(Function::Count), link: None, children: vec![node] };
    }
    node
}

const TRIALS: usize = 600;

pub fn run() -> Result<(), String> {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x0ac1e);
    let mut r = Report::default();
    let index = TextIndex::new();
    let (mut nonempty, mut multi, mut joined) = (0, 0, 0);
    for trial in 0..TRIALS {
        let store = random_store(&mut rng);
        let n = rng.gen_range(1..=4);
        let mut joins = Vec::new();
        let tree = random_tree(&mut rng, 0, n, &mut joins);
        let plan = QueryPlan { sentence_id: format!("t{trial}"), tree, joins };
        let got = answer(&plan, &store, &index).map(|a| Table::of(&a)).map_err(|_| ());
        let want = Oracle::new(&store, &plan).eval(&plan.tree, &[]);
        if let Ok(t) = &want {
            nonempty += !t.rows.is_empty() as usize;
            multi += (n > 1) as usize;
            joined += (n > 1 && !t.rows.is_empty()) as usize;
        }
        r.check(got == want, || format!("trial {trial} ({} triples, {n} vertices):\n  got  {got:?}\n  want {want:?}", store.len()));
    }
    // the comparison means little if nearly every plan errs or comes back empty
    r.check(nonempty >= TRIALS / 4, || format!("only {nonempty} of {TRIALS} plans had answers"));
    r.check(multi >= TRIALS / 3, || format!("only {multi} of {TRIALS} plans combined vertices"));
    r.check(joined >= TRIALS / 10, || format!("only {joined} of {TRIALS} multi-vertex plans had answers"));
    let secs = start.elapsed().as_secs_f64();
    r.check(secs < 60.0, || format!("took {secs:.1}s"));
    r.finish()
}
