//! Laws of the answer-set operators over random sets.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use hybridqa::decompose::{Function, Operator};
use hybridqa::exec::{apply_operator, Provenance, Row, Source};
use hybridqa::extract::CompareOp;
use hybridqa::AnswerSet;

use crate::common::Report;
use crate::oracle::{count, join, union, Table};

const VARS: [&str; 3] = ["?x", "?y", "?z"];
const VALUES: [&str; 10] = ["a", "b", "7", "12", "1,200", "3.5 m", "-2", "12.0", "n/a", "0"];

fn random_set(rng: &mut StdRng) -> AnswerSet {
    let k = rng.gen_range(1..=3);
    let vars: Vec<&str> = VARS.choose_multiple(rng, k).copied().collect();
    let mut a = AnswerSet::new(vars.iter().copied());
    for _ in 0..rng.gen_range(0..8) {
        let row: Row = vars.iter().map(|v| (v.to_string(), VALUES.choose(rng).unwrap().to_string())).collect();
        let src = Source::Kg { s: format!("s{}", rng.gen_range(0..4)), p: "p".into(), o: "o".into() };
        a.insert(row, Provenance::from([src]));
    }
    a
}

fn op(o: &Operator, l: &AnswerSet, r: &AnswerSet) -> Result<Table, ()> {
    apply_operator(o, l, Some(r)).map(|a| Table::of(&a)).map_err(|_| ())
}

fn op3(o: &Operator, a: &AnswerSet, b: &AnswerSet, c: &AnswerSet, left_first: bool) -> Option<Table> {
    let inner = if left_first { apply_operator(o, a, Some(b)) } else { apply_operator(o, b, Some(c)) }.ok()?;
    let outer = if left_first { apply_operator(o, &inner, Some(c)) } else { apply_operator(o, a, Some(&inner)) };
    outer.ok().map(|x| Table::of(&x))
}

/// Leading number of a value, commas as thousands separators.
fn number(v: &str) -> Option<f64> {
    let head = v.split(' ').find(|w| !w.is_empty())?;
    let x: f64 = head.chars().filter(|&c| c != ',').collect::<String>().parse().ok()?;
    x.is_finite().then_some(x)
}

/// Row-by-row filter.
fn scan(t: &Table, var: &str, cmp: CompareOp, threshold: Option<f64>) -> Table {
    let nums: Vec<f64> = t.rows.keys().filter_map(|r| number(&r[var])).collect();
    let best_max = nums.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let best_min = nums.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut out = Table { vars: t.vars.clone(), rows: Default::default() };
    for (row, prov) in &t.rows {
        let Some(x) = number(&row[var]) else { continue };
        let keep = match cmp {
            CompareOp::Gt => x > threshold.unwrap(),
            CompareOp::Lt => x < threshold.unwrap(),
            CompareOp::Eq => x == threshold.unwrap(),
            CompareOp::Max => x == best_max,
            CompareOp::Min => x == best_min,
        };
        if keep {
            out.rows.insert(row.clone(), prov.clone());
        }
    }
    out
}

const PAIRS: usize = 1000;

pub fn run() -> Result<(), String> {
    let mut rng = StdRng::seed_from_u64(0xa19);
    let mut r = Report::default();
    let (mut compared, mut assoc) = (0, 0);
    for i in 0..PAIRS {
        let (a, b, c) = (random_set(&mut rng), random_set(&mut rng), random_set(&mut rng));
        let (ta, tb) = (Table::of(&a), Table::of(&b));
        for (o, name) in [(Operator::Intersection, "∩"), (Operator::Union, "∪")] {
            let ab = op(&o, &a, &b);
            r.check(ab == op(&o, &b, &a), || format!("pair {i}: {name} not commutative on {a:?} and {b:?}"));
            let want = if name == "∩" { join(&ta, &tb) } else { union(&ta, &tb) };
            r.check(ab == want, || format!("pair {i}: {name} gave {ab:?}, expected {want:?}"));
            compared += ab.is_ok() as usize;
            if let (Some(x), Some(y)) = (op3(&o, &a, &b, &c, true), op3(&o, &a, &b, &c, false)) {
                assoc += 1;
                r.check(x == y, || format!("pair {i}: {name} not associative"));
            }
        }

        let n = apply_operator(&Operator::Function(Function::Count), &a, None).map(|x| Table::of(&x));
        r.check(n.as_ref().ok() == Some(&count(&ta)), || format!("pair {i}: count of {} rows gave {n:?}", a.len()));

        let var = a.vars().iter().next().unwrap().clone();
        let cmp = *[CompareOp::Gt, CompareOp::Lt, CompareOp::Eq, CompareOp::Max, CompareOp::Min].choose(&mut rng).unwrap();
        let threshold = matches!(cmp, CompareOp::Gt | CompareOp::Lt | CompareOp::Eq).then(|| *[0.0, 7.0, 12.0, 100.0].choose(&mut rng).unwrap());
        let f = Operator::Function(Function::Filter { var: var.clone(), op: cmp, threshold });
        let got = apply_operator(&f, &a, None).map(|x| Table::of(&x)).map_err(|e| e.to_string());
        let want = scan(&ta, &var, cmp, threshold);
        r.check(got.as_ref() == Ok(&want), || format!("pair {i}: filter {cmp:?} {threshold:?} on {var} gave {got:?}, expected {want:?}"));
    }
    r.check(compared >= PAIRS / 2, || format!("only {compared} operator applications had a shared variable"));
    r.check(assoc >= PAIRS / 4, || format!("only {assoc} triples checked for associativity"));
    r.finish()
}
