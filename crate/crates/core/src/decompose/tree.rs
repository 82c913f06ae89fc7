use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::extract::CompareOp;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Function {
    Count,
    /// Keeps rows whose `var` satisfies the comparison.
    Filter { var: String, op: CompareOp, threshold: Option<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Operator {
    Intersection,
    Union,
    /// Answers of the second child are assigned into the first.
    Assign,
    Function(Function),
}

impl Operator {
    pub fn symbol(&self) -> &'static str {
        match self {
            Operator::Intersection => "∩",
            Operator::Union => "∪",
            Operator::Assign => "↑",
            Operator::Function(_) => "F",
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Operator::Function(_) => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operator::Function(Function::Count) => f.write_str("F(count)"),
            Operator::Function(Function::Filter { op, .. }) => write!(f, "F({op:?})"),
            o => f.write_str(o.symbol()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Slot {
    Subject,
    Predicate,
    Object,
}

/// Which positions of two sub-questions an operator ties together.
///
/// For `↑` the left side is the consumer and the right side the producer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Link {
    pub left: usize,
    pub left_slot: Slot,
    pub right: usize,
    pub right_slot: Slot,
}

/// Anything stored at a tree leaf.
pub trait Vertex {
    fn vertex_id(&self) -> usize;
}

/// Binary tree with values at the leaves and operators inside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Node<V> {
    Leaf(V),
    Op { op: Operator, link: Option<Link>, children: Vec<Node<V>> },
}

impl<V> Node<V> {
    pub fn leaves(&self) -> Vec<&V> {
        let mut out = Vec::new();
        self.walk_leaves(&mut |v| out.push(v));
        out
    }

    fn walk_leaves<'a>(&'a self, f: &mut impl FnMut(&'a V)) {
        match self {
            Node::Leaf(v) => f(v),
            Node::Op { children, .. } => children.iter().for_each(|c| c.walk_leaves(f)),
        }
    }

    pub fn leaves_mut(&mut self) -> Vec<&mut V> {
        match self {
            Node::Leaf(v) => vec![v],
            Node::Op { children, .. } => children.iter_mut().flat_map(|c| c.leaves_mut()).collect(),
        }
    }

    /// The leaf that represents this subtree when it is linked to another:
    /// the consumer side of `↑`, the left side of `∩`/`∪`.
    pub fn head(&self) -> &V {
        match self {
            Node::Leaf(v) => v,
            Node::Op { children, .. } => children[0].head(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        match self {
            Node::Leaf(_) => 1,
            Node::Op { children, .. } => 1 + children.iter().map(Node::vertex_count).sum::<usize>(),
        }
    }

    pub fn height(&self) -> usize {
        match self {
            Node::Leaf(_) => 0,
            Node::Op { children, .. } => 1 + children.iter().map(Node::height).max().unwrap_or(0),
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Node::Leaf(_))
    }

    pub fn op(&self) -> Option<&Operator> {
        match self {
            Node::Op { op, .. } => Some(op),
            Node::Leaf(_) => None,
        }
    }

    pub fn children(&self) -> &[Node<V>] {
        match self {
            Node::Op { children, .. } => children,
            Node::Leaf(_) => &[],
        }
    }

    /// Every vertex has at most two children, operators at least one, arities respected.
    pub fn is_well_formed(&self) -> bool {
        match self {
            Node::Leaf(_) => true,
            Node::Op { op, children, .. } => {
                children.len() == op.arity() && children.iter().all(Node::is_well_formed)
            }
        }
    }

    pub fn map<U>(self, f: &mut impl FnMut(V) -> U) -> Node<U> {
        match self {
            Node::Leaf(v) => Node::Leaf(f(v)),
            Node::Op { op, link, children } => {
                Node::Op { op, link, children: children.into_iter().map(|c| c.map(f)).collect() }
            }
        }
    }

    pub fn try_map<U>(self, f: &mut impl FnMut(V) -> Result<U>) -> Result<Node<U>> {
        Ok(match self {
            Node::Leaf(v) => Node::Leaf(f(v)?),
            Node::Op { op, link, children } => Node::Op {
                op,
                link,
                children: children.into_iter().map(|c| c.try_map(f)).collect::<Result<_>>()?,
            },
        })
    }

    /// Operator vertices in pre-order.
    pub fn operators(&self) -> Vec<(&Operator, Option<&Link>)> {
        let mut out = Vec::new();
        self.walk_ops(&mut out);
        out
    }

    fn walk_ops<'a>(&'a self, out: &mut Vec<(&'a Operator, Option<&'a Link>)>) {
        if let Node::Op { op, link, children } = self {
            out.push((op, link.as_ref()));
            children.iter().for_each(|c| c.walk_ops(out));
        }
    }

    /// Flat pre-order vertex list; `leaf` renders the leaf payload.
    pub fn to_json(&self, leaf: &impl Fn(&V) -> Value) -> Value {
        let mut vertices = Vec::new();
        self.push_json(leaf, &mut vertices);
        json!({ "root": 0, "vertices": vertices })
    }

    fn push_json(&self, leaf: &impl Fn(&V) -> Value, out: &mut Vec<Value>) -> usize {
        let id = out.len();
        out.push(Value::Null);
        out[id] = match self {
            Node::Leaf(v) => {
                let mut obj = json!({ "id": id, "kind": "leaf" });
                if let (Value::Object(o), Value::Object(extra)) = (&mut obj, leaf(v)) {
                    o.extend(extra);
                }
                obj
            }
            Node::Op { op, link, children } => {
                let ids: Vec<usize> = children.iter().map(|c| c.push_json(leaf, out)).collect();
                let mut obj = json!({ "id": id, "kind": "operator", "op": op.symbol(), "label": op.to_string(), "children": ids });
                if let Some(l) = link {
                    obj["link"] = serde_json::to_value(l).expect("link serializes");
                }
                if let Operator::Function(f) = op {
                    obj["function"] = serde_json::to_value(f).expect("function serializes");
                }
                obj
            }
        };
        id
    }
}

impl<V: Vertex> Node<V> {
    pub fn ids(&self) -> Vec<usize> {
        self.leaves().iter().map(|v| v.vertex_id()).collect()
    }

    pub fn contains_id(&self, id: usize) -> bool {
        self.leaves().iter().any(|v| v.vertex_id() == id)
    }

    /// Child-index path from this node to the leaf with `id`.
    pub fn path_to(&self, id: usize) -> Option<Vec<usize>> {
        match self {
            Node::Leaf(v) => (v.vertex_id() == id).then(Vec::new),
            Node::Op { children, .. } => children.iter().enumerate().find_map(|(k, c)| {
                c.path_to(id).map(|mut p| {
                    p.insert(0, k);
                    p
                })
            }),
        }
    }

    pub fn at_mut(&mut self, path: &[usize]) -> &mut Node<V> {
        match path.split_first() {
            None => self,
            Some((&k, rest)) => match self {
                Node::Op { children, .. } => children[k].at_mut(rest),
                Node::Leaf(_) => panic!("path runs past a leaf"),
            },
        }
    }

    pub fn at(&self, path: &[usize]) -> &Node<V> {
        match path.split_first() {
            None => self,
            Some((&k, rest)) => &self.children()[k].at(rest),
        }
    }
}

fn check_slots(slots: &[Slot]) -> Result<()> {
    if slots.contains(&Slot::Predicate) {
        return Err(Error::Contract("predicate slots cannot be linked".into()));
    }
    Ok(())
}

fn check_disjoint<V: Vertex>(a: &Node<V>, b: &Node<V>) -> Result<()> {
    let ids: HashSet<usize> = a.ids().into_iter().collect();
    if b.ids().iter().any(|id| ids.contains(id)) {
        return Err(Error::Contract("a subtree cannot be joined with itself".into()));
    }
    Ok(())
}

/// A new operator vertex parenting `a` and `b`, linking their heads.
pub fn concat<V: Vertex>(a: Node<V>, b: Node<V>, op: Operator, slot_a: Slot, slot_b: Slot) -> Result<Node<V>> {
    if !matches!(op, Operator::Intersection | Operator::Union) {
        return Err(Error::Contract(format!("concat takes ∩ or ∪, not {op}")));
    }
    check_slots(&[slot_a, slot_b])?;
    check_disjoint(&a, &b)?;
    let link = Link { left: a.head().vertex_id(), left_slot: slot_a, right: b.head().vertex_id(), right_slot: slot_b };
    Ok(Node::Op { op, link: Some(link), children: vec![a, b] })
}

/// `↑` vertex feeding the producer's `producer_slot` answers into `consumer_vertex`'s slot.
///
/// `consumer_vertex` defaults to the head of `consumer`.
pub fn concat_assign<V: Vertex>(
    consumer: Node<V>,
    producer: Node<V>,
    consumer_slot: Slot,
    producer_slot: Slot,
    consumer_vertex: Option<usize>,
) -> Result<Node<V>> {
    check_slots(&[consumer_slot, producer_slot])?;
    check_disjoint(&consumer, &producer)?;
    let left = consumer_vertex.unwrap_or_else(|| consumer.head().vertex_id());
    if !consumer.contains_id(left) {
        return Err(Error::Contract(format!("vertex {left} is not in the consumer subtree")));
    }
    let link = Link { left, left_slot: consumer_slot, right: producer.head().vertex_id(), right_slot: producer_slot };
    Ok(Node::Op { op: Operator::Assign, link: Some(link), children: vec![consumer, producer] })
}
