use crate::settings::Setting;

use super::context::{Ctx, Emitter};
use super::triple::Relation;
use super::template::Category;
use super::verbal::verb_args;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Link {
    Prep(String),
    Genitive,
}

/// NP1 and NP2 head tokens of one genitive/prepositional relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct GenPrep {
    pub np1: usize,
    pub np2: usize,
    pub link: Link,
}

fn nmod_with_case(ctx: &Ctx, i: usize) -> Option<String> {
    let t = ctx.tok(i);
    if t.base_rel() != "nmod" || t.deprel == "nmod:poss" || !t.is_nominal() || t.head == 0 {
        return None;
    }
    if !ctx.tok(t.head).is_nominal() {
        return None;
    }
    ctx.case_word(i)
}

pub(crate) fn instances(ctx: &Ctx) -> Vec<GenPrep> {
    let d = ctx.has(Setting::D);
    let mut out: Vec<GenPrep> = Vec::new();
    let mut add = |ctx: &Ctx, g: GenPrep| {
        if ctx.same_np(g.np1, g.np2) || !ctx.admitted(g.np1) || ctx.np(g.np1).is_none() || ctx.np(g.np2).is_none() {
            return;
        }
        let (a, b) = (ctx.nps.index_of(g.np1), ctx.nps.index_of(g.np2));
        if !out.iter().any(|o| ctx.nps.index_of(o.np1) == a && ctx.nps.index_of(o.np2) == b) {
            out.push(g);
        }
    };

    for t in &ctx.sent.tokens {
        let m = t.index;
        if let Some(prep) = nmod_with_case(ctx, m) {
            let h = t.head;
            for c in ctx.with_conjuncts(m) {
                // chain NP1 -prep1-> NP2 -prep2-> NP3 with special NP2, NP3: relate NP1 and NP3
                let chain = nmod_with_case(ctx, h).is_some() && ctx.special(h) && ctx.special(c);
                if d && chain {
                    add(ctx, GenPrep { np1: ctx.tok(h).head, np2: c, link: Link::Prep(prep.clone()) });
                } else {
                    add(ctx, GenPrep { np1: h, np2: c, link: Link::Prep(prep.clone()) });
                }
            }
        }
        if t.deprel == "nmod:poss" && t.head != 0 && ctx.sent.dependents(m).any(|c| c.pos() == "POS") {
            add(ctx, GenPrep { np1: t.head, np2: m, link: Link::Genitive });
        }
    }

    for frame in ctx.frames.iter().filter(|f| !f.copular && !f.subjects.is_empty()) {
        for args in verb_args(frame, &[]) {
            for (np3, prep) in &args.np3s {
                // the verb relates NP1 and NP3 directly; the NP2-NP3 link is dropped
                if d && ctx.special(args.np2) && ctx.special(*np3) {
                    continue;
                }
                add(ctx, GenPrep { np1: args.np2, np2: *np3, link: Link::Prep(prep.clone()) });
            }
        }
        if ctx.has(Setting::F) {
            // a prepositional argument of the verb right after its subject
            for &s in &frame.subjects {
                let Some(end) = ctx.np(s).map(|p| p.span.end) else { continue };
                for (o, prep) in &frame.obliques {
                    let first_case = ctx.sent.dependents_with(*o, &["case"]).map(|c| c.index).min();
                    if first_case == Some(end + 1) {
                        add(ctx, GenPrep { np1: s, np2: *o, link: Link::Prep(prep.clone()) });
                    }
                }
            }
        }
    }
    out
}

pub(crate) fn extract(ctx: &Ctx, em: &mut Emitter) {
    for g in instances(ctx) {
        let (Some(np1), Some(np2)) = (ctx.np_term(g.np1), ctx.np_term(g.np2)) else { continue };
        let k = em.instance();
        em.push(36, k, Emitter::var(k, "s"), np1.clone(), np2.clone());
        em.push(37, k, np2.clone(), np1.clone(), Emitter::var(k, "o"));
        em.push(38, k, np1.clone(), Emitter::var(k, "p"), np2.clone());
        em.push(39, k, np2.clone(), Emitter::var(k, "p"), np1.clone());
        let (p1, p2) = (np1.phrase().expect("phrase"), np2.phrase().expect("phrase"));
        let (arg1, relation, arg2) = match &g.link {
            Link::Prep(prep) => (p1.text.clone(), format!("{} {}", ctx.be(g.np1), prep), p2.text.clone()),
            Link::Genitive => (p2.text.clone(), "has".to_string(), p1.text.clone()),
        };
        em.relations.push(Relation {
            category: Category::GenitivePreposition,
            instance: k,
            arg1,
            relation,
            arg2,
            span: p1.span.union(&p2.span),
        });
    }
}
