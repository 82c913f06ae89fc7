use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::decompose::{Function, Operator};
use crate::error::{Error, Result};
use crate::extract::CompareOp;

/// Variable name to value.
pub type Row = BTreeMap<String, String>;

/// Where a row came from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "lowercase")]
pub enum Source {
    Kg { s: String, p: String, o: String },
    Text { passage: String, sentence: String },
}

pub type Provenance = BTreeSet<Source>;

/// Duplicate-free binding rows over one variable set.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AnswerSet {
    vars: BTreeSet<String>,
    rows: BTreeMap<Row, Provenance>,
}

/// Name of the variable a count binds.
pub const COUNT_VAR: &str = "?n";

impl AnswerSet {
    pub fn new<I, S>(vars: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        AnswerSet { vars: vars.into_iter().map(Into::into).collect(), rows: BTreeMap::new() }
    }

    pub fn vars(&self) -> &BTreeSet<String> {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Adds a row, merging provenance with an equal row already present.
    ///
    /// Panics if the row binds a different variable set.
    pub fn insert(&mut self, row: Row, provenance: Provenance) {
        assert!(
            row.len() == self.vars.len() && row.keys().all(|k| self.vars.contains(k)),
            "row {row:?} does not bind {:?}",
            self.vars
        );
        self.rows.entry(row).or_default().extend(provenance);
    }

    pub fn rows(&self) -> impl Iterator<Item = (&Row, &Provenance)> {
        self.rows.iter()
    }

    pub fn contains(&self, row: &Row) -> bool {
        self.rows.contains_key(row)
    }

    pub fn provenance(&self, row: &Row) -> Option<&Provenance> {
        self.rows.get(row)
    }

    /// Distinct values of `var`.
    pub fn values(&self, var: &str) -> BTreeSet<String> {
        self.rows.keys().filter_map(|r| r.get(var).cloned()).collect()
    }

    pub fn project(&self, vars: &BTreeSet<String>) -> AnswerSet {
        let keep: BTreeSet<String> = self.vars.intersection(vars).cloned().collect();
        let mut out = AnswerSet { vars: keep.clone(), rows: BTreeMap::new() };
        for (row, prov) in &self.rows {
            let r: Row = row.iter().filter(|(k, _)| keep.contains(*k)).map(|(k, v)| (k.clone(), v.clone())).collect();
            out.insert(r, prov.clone());
        }
        out
    }

    /// Natural join: rows agreeing on the shared variables, merged.
    pub fn join(&self, other: &AnswerSet) -> AnswerSet {
        let common: Vec<&String> = self.vars.intersection(&other.vars).collect();
        let mut out = AnswerSet { vars: self.vars.union(&other.vars).cloned().collect(), rows: BTreeMap::new() };
        let mut by_key: BTreeMap<Vec<&String>, Vec<(&Row, &Provenance)>> = BTreeMap::new();
        for (row, prov) in &other.rows {
            by_key.entry(common.iter().map(|v| &row[*v]).collect()).or_default().push((row, prov));
        }
        for (row, prov) in &self.rows {
            let key: Vec<&String> = common.iter().map(|v| &row[*v]).collect();
            for (r2, p2) in by_key.get(&key).into_iter().flatten() {
                let mut merged = row.clone();
                merged.extend(r2.iter().map(|(k, v)| (k.clone(), v.clone())));
                out.insert(merged, prov.union(p2).cloned().collect());
            }
        }
        out
    }

    /// Both sides projected on their shared variables, then merged.
    pub fn union(&self, other: &AnswerSet) -> AnswerSet {
        let common: BTreeSet<String> = self.vars.intersection(&other.vars).cloned().collect();
        let mut out = self.project(&common);
        for (row, prov) in other.project(&common).rows {
            out.insert(row, prov);
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "vars": self.vars,
            "rows": self.rows.iter().map(|(row, prov)| json!({
                "bindings": row,
                "provenance": prov,
            })).collect::<Vec<_>>(),
        })
    }
}

fn compatible(l: &AnswerSet, r: &AnswerSet, op: &str) -> Result<()> {
    if l.vars.is_disjoint(&r.vars) {
        return Err(Error::Execution(format!("{op} of answer sets without a shared variable: {:?} and {:?}", l.vars, r.vars)));
    }
    Ok(())
}

/// Reads a decimal number, ignoring thousands separators and a trailing unit word.
pub fn parse_number(value: &str) -> Option<f64> {
    let first = value.split_whitespace().next()?;
    first.replace(',', "").parse::<f64>().ok().filter(|x| x.is_finite())
}

fn filter(input: &AnswerSet, var: &str, op: CompareOp, threshold: Option<f64>) -> Result<AnswerSet> {
    if !input.vars.contains(var) {
        return Err(Error::Execution(format!("filter variable {var} is not bound by {:?}", input.vars)));
    }
    let mut numeric: Vec<(f64, &Row, &Provenance)> = Vec::new();
    for (row, prov) in &input.rows {
        match parse_number(&row[var]) {
            Some(x) => numeric.push((x, row, prov)),
            None => log::debug!("filter on {var}: dropping non-numeric value {:?}", row[var]),
        }
    }
    let keep = |x: f64| -> bool {
        match (op, threshold) {
            (CompareOp::Gt, Some(t)) => x > t,
            (CompareOp::Lt, Some(t)) => x < t,
            (CompareOp::Eq, Some(t)) => x == t,
            (CompareOp::Max, _) => numeric.iter().all(|(y, ..)| x >= *y),
            (CompareOp::Min, _) => numeric.iter().all(|(y, ..)| x <= *y),
            _ => true,
        }
    };
    let mut out = AnswerSet { vars: input.vars.clone(), rows: BTreeMap::new() };
    for (x, row, prov) in &numeric {
        if keep(*x) {
            out.insert((*row).clone(), (*prov).clone());
        }
    }
    Ok(out)
}

/// ∩ is the natural join (row intersection when both sides bind the same
/// variables), ∪ the union over the shared variables, F a count or filter.
/// `↑` needs the producer's bindings before the consumer runs, so it is
/// evaluated by [`super::answer`]; here it is the join of the two results.
pub fn apply_operator(op: &Operator, left: &AnswerSet, right: Option<&AnswerSet>) -> Result<AnswerSet> {
    let need_right = || right.ok_or_else(|| Error::Execution(format!("{op} needs two operands")));
    match op {
        Operator::Intersection => {
            let r = need_right()?;
            compatible(left, r, "∩")?;
            Ok(left.join(r))
        }
        Operator::Union => {
            let r = need_right()?;
            compatible(left, r, "∪")?;
            Ok(left.union(r))
        }
        Operator::Assign => {
            let r = need_right()?;
            compatible(left, r, "↑")?;
            Ok(left.join(r))
        }
        Operator::Function(Function::Count) => {
            let mut out = AnswerSet::new([COUNT_VAR]);
            let prov: Provenance = left.rows.values().flatten().cloned().collect();
            out.insert(Row::from([(COUNT_VAR.to_string(), left.len().to_string())]), prov);
            Ok(out)
        }
        Operator::Function(Function::Filter { var, op, threshold }) => filter(left, var, *op, *threshold),
    }
}
