use crate::settings::Setting;

use super::context::{Ctx, Emitter};
use super::template::Category;
use super::triple::Relation;

const VERB_ARGS: [&str; 3] = ["obj", "iobj", "obl"];

/// Whether `a` attaches to verb `v` as an argument, by a basic or an enhanced edge.
fn argument_of(ctx: &Ctx, v: usize, a: usize) -> bool {
    let t = ctx.tok(a);
    (t.head == v && VERB_ARGS.contains(&t.base_rel()))
        || t.deps.iter().any(|(h, rel)| *h == v && VERB_ARGS.contains(&rel.split(':').next().unwrap_or("")))
}

/// NP1 -> VP <- NP2, appos, NP3 where the verb also takes NP3 directly.
fn verbal_elsewhere(ctx: &Ctx, np2: usize, np3: usize) -> bool {
    ctx.frames
        .iter()
        .filter(|f| !f.copular && !f.subjects.is_empty())
        .any(|f| argument_of(ctx, f.verb, np2) && argument_of(ctx, f.verb, np3))
}

pub(crate) fn instances(ctx: &Ctx) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for t in ctx.sent.tokens.iter().filter(|t| t.base_rel() == "appos" && t.head != 0) {
        let (h, m) = (t.head, t.index);
        if !t.is_nominal() || ctx.np(h).is_none() || ctx.same_np(h, m) || !ctx.admitted(h) {
            continue;
        }
        if ctx.has(Setting::E) && verbal_elsewhere(ctx, h, m) {
            continue;
        }
        if !out.iter().any(|&(a, b)| ctx.same_np(a, h) && ctx.same_np(b, m)) {
            out.push((h, m));
        }
    }
    out
}

pub(crate) fn extract(ctx: &Ctx, em: &mut Emitter) {
    for (h, m) in instances(ctx) {
        let (Some(np1), Some(np2)) = (ctx.np_term(h), ctx.np_term(m)) else { continue };
        let k = em.instance();
        em.push(40, k, np1.clone(), Emitter::var(k, "p"), np2.clone());
        em.push(41, k, np2.clone(), Emitter::var(k, "p"), np1.clone());
        let (p1, p2) = (np1.phrase().expect("phrase"), np2.phrase().expect("phrase"));
        em.relations.push(Relation {
            category: Category::Appositive,
            instance: k,
            arg1: p1.text.clone(),
            relation: "is".into(),
            arg2: p2.text.clone(),
            span: p1.span.union(&p2.span),
        });
    }
}
