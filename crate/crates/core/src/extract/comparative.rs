use crate::phrase::{classify_adjective, AdjectiveKind, Phrase, PhraseKind};

use super::context::{Ctx, Emitter};
use super::triple::{CompareOp, Comparison, Term};

/// The "than X" / "as X" complement of a comparative, with its marker.
fn complement(ctx: &Ctx, adj: usize) -> Option<(usize, String)> {
    ctx.sent.dependents(adj).find_map(|d| {
        if !matches!(d.base_rel(), "obl" | "nmod" | "advcl" | "ccomp" | "dep") {
            return None;
        }
        let marker = ctx
            .sent
            .dependents(d.index)
            .filter(|c| matches!(c.base_rel(), "case" | "mark"))
            .map(|c| c.lower())
            .find(|w| w == "than" || w == "as")?;
        Some((d.index, marker))
    })
}

/// Numeric value of a phrase: its own number or a number modifying it.
fn number_value(ctx: &Ctx, i: usize) -> Option<f64> {
    let parse = |s: &str| s.replace(',', "").parse::<f64>().ok();
    let t = ctx.tok(i);
    if t.is_number() {
        return parse(&t.form);
    }
    ctx.sent.dependents_with(i, &["nummod"]).find_map(|n| parse(&n.form))
}

/// Phrases the adjective describes: the noun it modifies or the subject it is predicated of.
fn described(ctx: &Ctx, adj: usize) -> Vec<usize> {
    let t = ctx.tok(adj);
    if t.base_rel() == "amod" && t.head != 0 && ctx.tok(t.head).is_nominal() {
        return vec![t.head];
    }
    ctx.subjects(adj)
}

pub(crate) fn extract(ctx: &Ctx, em: &mut Emitter) {
    for t in &ctx.sent.tokens {
        if !(t.is_adjective() || matches!(t.pos(), "RBR" | "RBS")) {
            continue;
        }
        let class = classify_adjective(t, ctx.lex);
        let comp = complement(ctx, t.index);
        let equal = comp.as_ref().is_some_and(|(_, m)| m == "as")
            && ctx.sent.dependents_with(t.index, &["advmod"]).any(|a| a.lower() == "as");
        let quantity = ctx.lex.is_quantity(&class.lemma) || ctx.lex.is_quantity(&t.lower());
        let kind = match class.class {
            AdjectiveKind::Plain if equal && quantity => AdjectiveKind::Numerical,
            AdjectiveKind::Plain if equal => AdjectiveKind::Quality,
            k => k,
        };
        let less = ctx.lex.is_diminutive(&t.lower()) || ctx.lex.is_diminutive(&class.lemma);
        let adj = Term::Phrase(Phrase::single(ctx.sent, PhraseKind::ADJP, t.index));
        for np1_tok in described(ctx, t.index) {
            let Some(np1) = ctx.np_term(np1_tok) else { continue };
            match kind {
                AdjectiveKind::Superlative => {
                    let k = em.instance();
                    let op = if less { CompareOp::Min } else { CompareOp::Max };
                    em.push(46, k, np1, adj.clone(), Emitter::var(k, "n")).comparison =
                        Some(Comparison { op, threshold: None });
                }
                AdjectiveKind::Numerical | AdjectiveKind::Quality => {
                    let Some((c, _)) = comp.clone() else { continue };
                    let op = if equal {
                        CompareOp::Eq
                    } else if less {
                        CompareOp::Lt
                    } else {
                        CompareOp::Gt
                    };
                    let value = number_value(ctx, c);
                    if kind == AdjectiveKind::Numerical && value.is_some() {
                        let k = em.instance();
                        em.push(42, k, np1, adj.clone(), Emitter::var(k, "n")).comparison =
                            Some(Comparison { op, threshold: value });
                        continue;
                    }
                    let Some(np2) = ctx.np_term(c) else { continue };
                    let k = em.instance();
                    if kind == AdjectiveKind::Numerical {
                        em.push(43, k, np1, adj.clone(), Emitter::var(k, "n1")).comparison =
                            Some(Comparison { op, threshold: None });
                        em.push(44, k, np2, adj.clone(), Emitter::var(k, "n2")).comparison =
                            Some(Comparison { op, threshold: None });
                    } else {
                        em.push(45, k, np1, adj.clone(), np2);
                    }
                }
                AdjectiveKind::Plain => {}
            }
        }
    }
}
