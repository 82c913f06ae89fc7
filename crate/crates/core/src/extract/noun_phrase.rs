use crate::ingest::{MentionKind, Span};
use crate::phrase::{minimal_run, Phrase, PhraseKind};
use crate::settings::Setting;

use super::context::{Ctx, Emitter};
use super::triple::Term;

#[derive(Debug, Clone)]
struct Unit {
    tokens: Vec<usize>,
    adjective: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mapped {
    Entity,
    Class,
    No,
}

/// Word units of a noun phrase; quoted spans, expressions and entity names count as one noun.
fn units(ctx: &Ctx, np: &Phrase) -> Vec<Unit> {
    let core = if ctx.has(Setting::A) { np.span } else { minimal_run(ctx.sent, np.head) };
    let mut collapsed: Vec<Span> = Vec::new();
    if ctx.has(Setting::B) {
        collapsed.extend(ctx.sent.quoted_spans.iter().copied());
        collapsed.extend(ctx.lex.expression_spans(ctx.sent));
    }
    if ctx.has(Setting::C) {
        collapsed.extend(ctx.sent.mentions.iter().filter(|m| m.kind == MentionKind::Entity).map(|m| m.span));
    }
    let mut out = Vec::new();
    let mut i = core.start;
    while i <= core.end {
        if let Some(span) = collapsed.iter().find(|s| s.contains(i) && core.covers(s)) {
            let tokens: Vec<usize> = span.indices().filter(|&j| !ctx.tok(j).is_punct()).collect();
            if !tokens.is_empty() {
                out.push(Unit { tokens, adjective: false });
            }
            i = span.end + 1;
            continue;
        }
        let t = ctx.tok(i);
        if t.is_noun() || t.pos() == "FW" {
            out.push(Unit { tokens: vec![i], adjective: false });
        } else if matches!(t.pos(), "JJ" | "ADJ" | "VBN" | "VBG") {
            out.push(Unit { tokens: vec![i], adjective: true });
        }
        i += 1;
    }
    out
}

fn pairs(ctx: &Ctx, units: &[Unit]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    if ctx.has(Setting::G) {
        out.extend((1..units.len()).map(|i| (i - 1, i)));
    }
    if ctx.has(Setting::H) {
        let nouns: Vec<usize> = (0..units.len()).filter(|&i| !units[i].adjective).collect();
        out.extend(nouns.windows(2).map(|w| (w[0], w[1])));
        if let Some(&last) = nouns.last() {
            out.extend((0..last).filter(|&i| units[i].adjective).map(|i| (i, last)));
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn mapped(ctx: &Ctx, unit: &Unit) -> Mapped {
    match ctx.entities.lookup_tokens(unit.tokens.iter().map(|&i| ctx.tok(i))).map(|e| e.kind) {
        Some(MentionKind::Entity) => Mapped::Entity,
        Some(MentionKind::Class) => Mapped::Class,
        _ => Mapped::No,
    }
}

fn unit_term(ctx: &Ctx, unit: &Unit) -> Term {
    let kind = if unit.adjective { PhraseKind::ADJP } else { PhraseKind::NP };
    let head = *unit.tokens.last().expect("non-empty unit");
    Term::Phrase(Phrase::from_tokens(ctx.sent, kind, head, &unit.tokens))
}

pub(crate) fn extract(ctx: &Ctx, em: &mut Emitter) {
    if !ctx.has(Setting::G) && !ctx.has(Setting::H) {
        return;
    }
    for np in &ctx.nps.phrases {
        if !ctx.tok(np.head).is_noun() {
            continue;
        }
        let units = units(ctx, np);
        for (a, b) in pairs(ctx, &units) {
            let (e1, e2) = (unit_term(ctx, &units[a]), unit_term(ctx, &units[b]));
            let k = em.instance();
            let templates: &[u8] = match (mapped(ctx, &units[a]), mapped(ctx, &units[b])) {
                (Mapped::Entity, Mapped::Class) => &[28, 29],
                (Mapped::Entity, Mapped::No) => &[30, 31],
                (Mapped::Entity, Mapped::Entity) => &[32, 33, 34, 35],
                _ => &[28, 29, 30, 31, 32, 33, 34, 35],
            };
            for &t in templates {
                let (s, p, o) = match t {
                    28 => (e1.clone(), Emitter::var(k, "p"), e2.clone()),
                    29 => (e2.clone(), Emitter::var(k, "p"), e1.clone()),
                    30 => (e1.clone(), e2.clone(), Emitter::var(k, "o")),
                    31 => (Emitter::var(k, "s"), e2.clone(), e1.clone()),
                    32 => (Emitter::var(k, "s"), Emitter::var(k, "p"), e1.clone()),
                    33 => (e1.clone(), Emitter::var(k, "p"), Emitter::var(k, "o")),
                    34 => (Emitter::var(k, "s"), Emitter::var(k, "p"), e2.clone()),
                    _ => (e2.clone(), Emitter::var(k, "p"), Emitter::var(k, "o")),
                };
                em.push(t, k, s, p, o);
            }
        }
    }
}
