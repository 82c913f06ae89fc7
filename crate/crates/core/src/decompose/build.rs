use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::extract::{CompareOp, Term};
use crate::ingest::{ConstituencyNode, ParsedSentence, Span};

use super::tree::{concat, concat_assign, Function, Node, Operator, Slot};
use super::{CompositeQuestionTree, SubQuestion};

/// Constituent standing for a phrase: the lowest node covering it, lifted off the preterminal.
fn constituent<'a>(tree: &'a ConstituencyNode, span: &Span) -> Option<&'a ConstituencyNode> {
    let node = tree.lowest_covering(span)?;
    if !node.is_leaf() {
        return Some(node);
    }
    let path = tree.path_to_leaf(span.start);
    Some(path.len().checked_sub(2).map_or(node, |i| path[i]))
}

/// Depths of the shallowest and deepest constituents holding the sub-question's phrases.
pub fn trace_spt(q: &SubQuestion, tree: &ConstituencyNode) -> Result<(usize, usize)> {
    let mut depths = Vec::new();
    for term in q.original.terms() {
        let Some(p) = term.phrase() else { continue };
        let node = constituent(tree, &p.span)
            .ok_or_else(|| Error::Trace(format!("phrase '{}' ({}) is not in the tree", p.text, p.span)))?;
        depths.push(node.depth);
    }
    match (depths.iter().min(), depths.iter().max()) {
        (Some(&top), Some(&down)) => Ok((top, down)),
        _ => Err(Error::Trace(format!("sub-question {} has no phrase terms", q.text()))),
    }
}

fn order_key(q: &SubQuestion) -> (usize, usize, usize, String, usize) {
    (q.down_depth, q.span.start, q.span.end, q.text(), q.id)
}

/// The producer's predicate phrase is the consumer's original subject.
fn feeds(producer: &SubQuestion, consumer: &SubQuestion) -> bool {
    match (producer.original.predicate.phrase(), consumer.original.subject.phrase()) {
        (Some(p), Some(s)) => p.span == s.span && consumer.triple.subject.is_var(),
        _ => false,
    }
}

fn phrase_tokens(q: &SubQuestion) -> BTreeSet<usize> {
    q.original.terms().iter().filter_map(|t| t.phrase()).flat_map(|p| p.span.indices()).collect()
}

/// A coordinating "or" separating words of one sub-question from words of the other.
fn or_between(sent: &ParsedSentence, a: &SubQuestion, b: &SubQuestion) -> bool {
    let (ta, tb) = (phrase_tokens(a), phrase_tokens(b));
    let only_a: Vec<usize> = ta.difference(&tb).copied().collect();
    let only_b: Vec<usize> = tb.difference(&ta).copied().collect();
    sent.tokens.iter().filter(|t| t.lower() == "or" && !ta.contains(&t.index) && !tb.contains(&t.index)).any(|t| {
        let i = t.index;
        only_a.iter().any(|&x| only_b.iter().any(|&y| (x < i && i < y) || (y < i && i < x)))
    })
}

/// Tree for sub-questions sharing a top depth.
pub fn build_subtree(group: &[SubQuestion], sent: &ParsedSentence) -> Result<CompositeQuestionTree> {
    if group.is_empty() {
        return Err(Error::Contract("empty sub-question group".into()));
    }
    let mut sorted: Vec<&SubQuestion> = group.iter().collect();
    sorted.sort_by_key(|q| order_key(q));
    let mut roots: Vec<Option<CompositeQuestionTree>> = sorted.iter().map(|q| Some(Node::Leaf((*q).clone()))).collect();
    // root index holding each member
    let mut owner: Vec<usize> = (0..sorted.len()).collect();
    for x in 0..sorted.len() {
        let Some(p) = (0..sorted.len()).find(|&p| p != x && feeds(sorted[p], sorted[x])) else { continue };
        let (rx, rp) = (owner[x], owner[p]);
        if rx == rp {
            continue;
        }
        let consumer = roots[rx].take().expect("live root");
        let producer = roots[rp].take().expect("live root");
        roots[rx] = Some(concat_assign(consumer, producer, Slot::Subject, Slot::Subject, Some(sorted[x].id))?);
        for o in owner.iter_mut().filter(|o| **o == rp) {
            *o = rx;
        }
    }
    let mut live = roots.into_iter().flatten();
    let mut acc = live.next().expect("non-empty group");
    for next in live {
        let op = if or_between(sent, acc.head(), next.head()) {
            Operator::Union
        } else {
            Operator::Intersection
        };
        acc = concat(acc, next, op, Slot::Subject, Slot::Subject)?;
    }
    Ok(acc)
}

/// Where the producer's answers enter the consumer subtree: the vertex whose
/// object is the producer head's subject phrase, a vertex sharing its subject
/// variable, or the consumer head's object.
fn attachment(consumer: &CompositeQuestionTree, producer: &SubQuestion) -> (usize, Slot) {
    let leaves = consumer.leaves();
    if let Some(subject) = producer.original.subject.phrase() {
        if let Some(q) = leaves.iter().find(|q| q.original.object.phrase().is_some_and(|o| o.span == subject.span)) {
            return (q.id, Slot::Object);
        }
    }
    if let Term::Var { name, .. } = &producer.triple.subject {
        if let Some(q) = leaves.iter().find(|q| q.triple.subject.var_name() == Some(name)) {
            return (q.id, Slot::Subject);
        }
    }
    (consumer.head().id, Slot::Object)
}

/// Groups by top depth; the deepest group seeds the tree and each shallower
/// group consumes the tree built so far.
pub fn build_cqtree(subqs: &[SubQuestion], sent: &ParsedSentence) -> Result<CompositeQuestionTree> {
    if subqs.is_empty() {
        return Err(Error::NotDecomposable(format!("sentence {} has no sub-questions", sent.id)));
    }
    let tree = sent.tree.as_ref().ok_or_else(|| Error::Trace(format!("sentence {} has no constituency tree", sent.id)))?;
    let mut groups: BTreeMap<usize, Vec<SubQuestion>> = BTreeMap::new();
    for q in subqs {
        let mut q = q.clone();
        (q.top_depth, q.down_depth) = trace_spt(&q, tree)?;
        groups.entry(q.top_depth).or_default().push(q);
    }
    let mut deepest_first = groups.into_values().rev();
    let mut cqt = build_subtree(&deepest_first.next().expect("one group"), sent)?;
    for group in deepest_first {
        let sub = build_subtree(&group, sent)?;
        let (vertex, slot) = attachment(&sub, cqt.head());
        cqt = concat_assign(sub, cqt, slot, Slot::Subject, Some(vertex))?;
    }
    Ok(cqt)
}

fn wrap(tree: &mut CompositeQuestionTree, path: &[usize], f: Function) {
    let node = tree.at_mut(path);
    let inner = std::mem::replace(node, Node::Op { op: Operator::Intersection, link: None, children: Vec::new() });
    *node = Node::Op { op: Operator::Function(f), link: None, children: vec![inner] };
}

/// Shortest prefix of `path` from which the leaf is reached only through
/// consumer sides of `↑` (and, when `through_sets`, either side of `∩`/`∪`).
fn climb(tree: &CompositeQuestionTree, path: &[usize], through_sets: bool) -> usize {
    let mut k = path.len();
    while k > 0 {
        let parent = tree.at(&path[..k - 1]);
        let ok = match parent.op() {
            Some(Operator::Assign) => path[k - 1] == 0,
            Some(Operator::Intersection | Operator::Union) => through_sets,
            _ => false,
        };
        if !ok {
            break;
        }
        k -= 1;
    }
    k
}

fn starts_how_many(sent: &ParsedSentence) -> bool {
    let words: Vec<String> = sent.tokens.iter().filter(|t| !t.is_punct()).take(2).map(|t| t.lower()).collect();
    words == ["how", "many"]
}

/// Adds counting above the "how many" sub-question's consumer chain and a
/// filter above each comparative or superlative sub-question.
pub fn insert_functions(mut tree: CompositeQuestionTree, sent: &ParsedSentence) -> CompositeQuestionTree {
    let filters: Vec<(usize, Function, bool)> = tree
        .leaves()
        .iter()
        .filter_map(|q| {
            let c = q.triple.comparison?;
            let var = q.triple.object.var_name()?.to_string();
            match (c.op, q.triple.template.number()) {
                (CompareOp::Max | CompareOp::Min, _) => {
                    Some((q.id, Function::Filter { var, op: c.op, threshold: None }, true))
                }
                (_, 42) if c.threshold.is_some() => {
                    Some((q.id, Function::Filter { var, op: c.op, threshold: c.threshold }, false))
                }
                _ => None,
            }
        })
        .collect();
    for (id, f, through_sets) in filters {
        let path = tree.path_to(id).expect("leaf present");
        let k = climb(&tree, &path, through_sets);
        wrap(&mut tree, &path[..k], f);
    }
    if starts_how_many(sent) {
        let counted = tree.leaves().iter().filter(|q| q.triple.pattern() == 1).map(|q| q.id).min();
        if let Some(id) = counted {
            let path = tree.path_to(id).expect("leaf present");
            let mut k = path.len();
            // step over a filter directly above the leaf
            while k > 0 && matches!(tree.at(&path[..k - 1]).op(), Some(Operator::Function(Function::Filter { .. }))) {
                k -= 1;
            }
            let k = climb(&tree, &path[..k], false);
            wrap(&mut tree, &path[..k], Function::Count);
        }
    }
    tree
}
