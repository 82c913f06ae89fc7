use crate::phrase::{full_verb_phrase, verb_phrase, Phrase, PhraseKind};

use super::context::{Ctx, Emitter, Frame};
use super::triple::Term;

/// Second argument of a verb frame together with the prepositional arguments that follow it.
#[derive(Debug, Clone)]
pub(crate) struct VerbArgs {
    pub np2: usize,
    pub np3s: Vec<(usize, String)>,
}

/// Splits a non-copular frame into P4/P5 argument groups and leftover obliques.
///
/// The object (or, lacking one, the first oblique after the verb) is NP2;
/// obliques after NP2 become NP3. Obliques before it stand alone.
pub(crate) fn verb_args(frame: &Frame, skip: &[usize]) -> Vec<VerbArgs> {
    let objs: Vec<usize> = frame.objects.iter().copied().filter(|o| !skip.contains(o)).collect();
    let mut obls = frame.obliques.clone();
    let np2s: Vec<usize> = if !objs.is_empty() {
        objs
    } else {
        let pick = obls.iter().position(|(i, _)| *i > frame.verb).or(if obls.is_empty() { None } else { Some(0) });
        match pick {
            Some(k) => vec![obls.remove(k).0],
            None => Vec::new(),
        }
    };
    let mut out = Vec::new();
    let mut used = vec![false; obls.len()];
    for &np2 in &np2s {
        let np3s: Vec<(usize, String)> = obls
            .iter()
            .enumerate()
            .filter(|(_, (i, _))| *i > np2)
            .map(|(k, o)| {
                used[k] = true;
                o.clone()
            })
            .collect();
        out.push(VerbArgs { np2, np3s });
    }
    for (k, (i, _)) in obls.iter().enumerate() {
        if !used[k] {
            out.push(VerbArgs { np2: *i, np3s: Vec::new() });
        }
    }
    out
}

/// "how many" inside the object phrase marks a counting question.
fn how_many_object(ctx: &Ctx, frame: &Frame) -> Option<usize> {
    frame.objects.iter().copied().find(|&o| {
        ctx.sent.dependents(o).any(|m| {
            matches!(m.lower().as_str(), "many" | "much") && ctx.sent.dependents(m.index).any(|h| h.lower() == "how")
        })
    })
}

pub(crate) fn extract(ctx: &Ctx, em: &mut Emitter) {
    for frame in &ctx.frames {
        if frame.copular {
            copular(ctx, em, frame);
        } else {
            non_copular(ctx, em, frame);
        }
    }
}

fn copular(ctx: &Ctx, em: &mut Emitter, frame: &Frame) {
    let pred = ctx.tok(frame.predicate);
    let vp = Term::Phrase(verb_phrase(ctx.sent, frame.verb));
    if pred.is_adjective() {
        // P2: How -> ADJP -> VP <- NP1
        let asks_how = ctx.sent.dependents_with(pred.index, &["advmod"]).any(|t| t.lower() == "how");
        if !asks_how {
            return;
        }
        let adjp = Term::Phrase(Phrase::single(ctx.sent, PhraseKind::ADJP, pred.index));
        for &s in &frame.subjects {
            let Some(np1) = ctx.np_term(s) else { continue };
            let k = em.instance();
            em.push(6, k, np1, adjp.clone(), Emitter::var(k, "o"));
        }
        return;
    }
    let Some(np2) = ctx.np_term(pred.index) else { return };
    let mut np3s = Vec::new();
    for t in ctx.sent.dependents_with(pred.index, &["nmod"]) {
        if t.deprel == "nmod:poss" || !t.is_nominal() || ctx.case_word(t.index).is_none() {
            continue;
        }
        for c in ctx.with_conjuncts(t.index) {
            if !ctx.same_np(c, pred.index) {
                np3s.push(c);
            }
        }
    }
    for &s in &frame.subjects {
        if ctx.same_np(s, pred.index) {
            continue;
        }
        let Some(np1) = ctx.np_term(s) else { continue };
        if np3s.is_empty() {
            // P5 with a copular verb
            let k = em.instance();
            em.push(16, k, np1.clone(), vp.clone(), np2.clone());
            em.push(17, k, np2.clone(), vp.clone(), np1);
            continue;
        }
        for &n3 in &np3s {
            let Some(np3) = ctx.np_term(n3) else { continue };
            let k = em.instance();
            em.push(7, k, np1.clone(), np2.clone(), np3.clone());
            em.push(8, k, np3, np2.clone(), np1.clone());
            em.push(9, k, np1.clone(), vp.clone(), np2.clone());
        }
    }
}

fn non_copular(ctx: &Ctx, em: &mut Emitter, frame: &Frame) {
    let vp = Term::Phrase(full_verb_phrase(ctx.sent, frame.verb));
    let counted = how_many_object(ctx, frame);
    for &s in &frame.subjects {
        let Some(np_s) = ctx.np_term(s) else { continue };
        if let Some(o) = counted {
            if let Some(np1) = ctx.np_term(o).filter(|_| !ctx.same_np(o, s)) {
                let np2 = np_s.clone();
                let k = em.instance();
                em.push(1, k, np2.clone(), np1.clone(), Emitter::var(k, "n"));
                em.push(2, k, np2.clone(), np1.clone(), Emitter::var(k, "o"));
                em.push(3, k, Emitter::var(k, "s"), np1.clone(), np2.clone());
                em.push(4, k, np2.clone(), vp.clone(), np1.clone());
                em.push(5, k, np1, vp.clone(), np2);
            }
        }
        let skip: Vec<usize> = counted.into_iter().collect();
        for args in verb_args(frame, &skip) {
            if ctx.same_np(args.np2, s) {
                continue;
            }
            let Some(np2) = ctx.np_term(args.np2) else { continue };
            if args.np3s.is_empty() {
                let k = em.instance();
                em.push(16, k, np_s.clone(), vp.clone(), np2.clone());
                em.push(17, k, np2, vp.clone(), np_s.clone());
                continue;
            }
            for (n3, _) in &args.np3s {
                let Some(np3) = ctx.np_term(*n3) else { continue };
                let k = em.instance();
                em.push(10, k, np_s.clone(), vp.clone(), np2.clone());
                em.push(11, k, np2.clone(), vp.clone(), np_s.clone());
                em.push(12, k, np2.clone(), vp.clone(), np3.clone());
                em.push(13, k, np3.clone(), vp.clone(), np2.clone());
                if ctx.special(args.np2) && ctx.special(*n3) {
                    em.push(14, k, np_s.clone(), vp.clone(), np3.clone());
                    em.push(15, k, np3, vp.clone(), np_s.clone());
                }
            }
        }
    }
}
