use crate::phrase::full_verb_phrase;

use super::context::{Ctx, Emitter};
use super::triple::Term;
use super::verbal::verb_args;

/// Resolves a possessive pronoun or "whose" to the noun it stands for.
///
/// "whose" inside a relative clause takes the modified noun. Otherwise the
/// nearest preceding phrase agreeing in number wins, preferring arguments of
/// the clause the pronoun sits in.
pub(crate) fn resolve_pronoun(ctx: &Ctx, pron: usize) -> Option<usize> {
    let t = ctx.tok(pron);
    let owner = t.head;
    if owner == 0 {
        return None;
    }
    let clause = clause_of(ctx, owner);
    if t.lower() == "whose" {
        if let Some(c) = clause {
            let ct = ctx.tok(c);
            if ct.deprel == "acl:relcl" && ct.head != 0 && ctx.tok(ct.head).is_nominal() {
                return Some(ct.head);
            }
        }
    }
    let plural = match t.lower().as_str() {
        "their" | "theirs" => Some(true),
        "his" | "her" | "its" | "my" => Some(false),
        _ => None,
    };
    let owner_span = ctx.np(owner).map(|p| p.span);
    let mut candidates: Vec<usize> = Vec::new();
    for p in &ctx.nps.phrases {
        if p.head >= pron || owner_span.is_some_and(|s| s.overlaps(&p.span)) {
            continue;
        }
        let h = ctx.tok(p.head);
        if matches!(h.pos(), "WP" | "WDT") {
            continue;
        }
        if let Some(pl) = plural {
            if h.is_noun() && h.is_plural() != pl {
                continue;
            }
        }
        candidates.push(p.head);
    }
    let argument = |c: usize| clause.is_some_and(|cl| ctx.tok(c).head == cl);
    let inside = |c: usize| clause.is_some_and(|cl| ctx.sent.dominates(cl, c));
    let nearest = |f: &dyn Fn(usize) -> bool| candidates.iter().rev().copied().find(|&c| f(c));
    nearest(&argument).or_else(|| nearest(&inside)).or_else(|| candidates.last().copied())
}

/// Nearest predicate above a token (the token itself if it heads a frame).
fn clause_of(ctx: &Ctx, mut i: usize) -> Option<usize> {
    while i != 0 {
        if ctx.frames.iter().any(|f| f.predicate == i) {
            return Some(i);
        }
        i = ctx.tok(i).head;
    }
    None
}

pub(crate) fn extract(ctx: &Ctx, em: &mut Emitter) {
    for t in &ctx.sent.tokens {
        if !matches!(t.pos(), "PRP$" | "WP$") || t.head == 0 {
            continue;
        }
        let owner = t.head;
        let Some(np1) = ctx.np_term(owner) else { continue };
        let Some(ref_tok) = resolve_pronoun(ctx, t.index) else {
            em.diagnostics.push(format!("unresolved pronoun {:?} at token {}", t.form, t.index));
            continue;
        };
        let Some(np3) = ctx.np_term(ref_tok) else { continue };
        let frame = ctx
            .frames
            .iter()
            .find(|f| f.subjects.contains(&owner) && ctx.tok(owner).base_rel() == "nsubj");

        match frame {
            Some(f) if f.copular && ctx.tok(f.predicate).is_nominal() => {
                let Some(np2) = ctx.np_term(f.predicate) else { continue };
                let k = em.instance();
                em.push(18, k, np3.clone(), np1.clone(), np2.clone());
                em.push(19, k, np2, np1, np3);
            }
            Some(f) if !f.copular => {
                let np2 = verb_args(f, &[]).first().and_then(|a| ctx.np_term(a.np2));
                let vp = Term::Phrase(full_verb_phrase(ctx.sent, f.verb));
                emit_p7(em, np1, np3, np2.map(|n| (vp, n)));
            }
            _ => emit_p7(em, np1, np3, None),
        }
    }
}

fn emit_p7(em: &mut Emitter, np1: Term, np3: Term, verbal: Option<(Term, Term)>) {
    let k = em.instance();
    let o = Emitter::var(k, "o");
    let s = Emitter::var(k, "s");
    em.push(20, k, np3.clone(), np1.clone(), o.clone());
    em.push(21, k, np3.clone(), Emitter::var(k, "p"), np1.clone());
    if let Some((vp, np2)) = &verbal {
        em.push(22, k, o.clone(), vp.clone(), np2.clone());
        em.push(23, k, np2.clone(), vp.clone(), o);
    }
    em.push(24, k, np1.clone(), Emitter::var(k, "p"), np3.clone());
    em.push(25, k, s.clone(), np1, np3);
    if let Some((vp, np2)) = verbal {
        em.push(26, k, s.clone(), vp.clone(), np2.clone());
        em.push(27, k, np2, vp, s);
    }
}
