//! Every emitted triple carries one of the 46 templates, with key marking and
//! category fixed by the template table.

use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use hybridqa::extract::Extractor;
use hybridqa::ingest::{annotate_mentions, read_conllu};
use hybridqa::{Category, EntityLexicon, MentionKind, ParsedSentence, Setting, SettingSet};

use crate::common::{fixtures, Report};

/// Bold (key) templates, typed in from the template table.
const KEY: [u8; 19] = [3, 6, 7, 10, 12, 14, 16, 18, 20, 22, 28, 36, 38, 40, 42, 43, 44, 45, 46];

fn category_of(n: u8) -> Category {
    match n {
        1..=17 => Category::Verbal,
        18..=27 => Category::PossAdjWhose,
        28..=35 => Category::NounPhrase,
        36..=39 => Category::GenitivePreposition,
        40 | 41 => Category::Appositive,
        _ => Category::ComparativeSuperlative,
    }
}

const WORDS: &[(&str, &str)] = &[
    ("actor", "NN"),
    ("children", "NNS"),
    ("writers", "NNS"),
    ("Chicago", "NNP"),
    ("Nobel", "NNP"),
    ("Prize", "NNP"),
    ("city", "NN"),
    ("lake", "NN"),
    ("won", "VBD"),
    ("born", "VBN"),
    ("is", "VBZ"),
    ("was", "VBD"),
    ("has", "VBZ"),
    ("fought", "VBD"),
    ("influenced", "VBN"),
    ("Which", "WDT"),
    ("Who", "WP"),
    ("What", "WP"),
    ("whose", "WP$"),
    ("How", "WRB"),
    ("many", "JJ"),
    ("deeper", "JJR"),
    ("more", "JJR"),
    ("than", "IN"),
    ("tallest", "JJS"),
    ("German", "JJ"),
    ("man-made", "JJ"),
    ("of", "IN"),
    ("in", "IN"),
    ("by", "IN"),
    ("the", "DT"),
    ("a", "DT"),
    ("his", "PRP$"),
    ("'s", "POS"),
    ("100", "CD"),
    ("and", "CC"),
    (",", ","),
    ("\"", "``"),
    ("?", "."),
];

const RELS: &[&str] = &[
    "nsubj", "nsubj:pass", "obj", "iobj", "obl", "obl:agent", "nmod", "nmod:poss", "amod", "det", "case", "appos",
    "compound", "acl", "acl:relcl", "conj", "cc", "punct", "nummod", "advmod", "cop", "aux", "aux:pass", "mark",
    "xcomp", "ccomp", "fixed", "flat",
];

fn row(id: usize, form: &str, pos: &str, head: usize, rel: &str, deps: &str) -> String {
    format!("{id}\t{form}\t{}\t_\t{pos}\t_\t{head}\t{rel}\t{deps}\t_\n", form.to_lowercase())
}

/// A random dependency tree over the word list.
fn random_sentence(rng: &mut StdRng, n: usize) -> String {
    let mut order: Vec<usize> = (1..=n).collect();
    order.shuffle(rng);
    let mut heads = vec![0; n + 1];
    for k in 1..n {
        heads[order[k]] = order[rng.gen_range(0..k)];
    }
    let mut text = String::from("# sent_id = fuzz\n");
    for (i, &head) in heads.iter().enumerate().skip(1) {
        let (form, pos) = WORDS.choose(rng).unwrap();
        let rel = if head == 0 { "root" } else { RELS.choose(rng).unwrap() };
        let deps = if head != 0 && rng.gen_bool(0.1) {
            let extra = rng.gen_range(1..=n);
            if extra != i {
                format!("{head}:{rel}|{extra}:{}", RELS.choose(rng).unwrap())
            } else {
                "_".into()
            }
        } else {
            "_".into()
        };
        text.push_str(&row(i, form, pos, head, rel, &deps));
    }
    text
}

/// A seed sentence with some labels, tags and forms swapped; heads are kept.
fn mutate(rng: &mut StdRng, conllu: &str) -> String {
    let mut out = String::new();
    for line in conllu.lines() {
        let mut cols: Vec<String> = line.split('\t').map(str::to_string).collect();
        if cols.len() == 10 && rng.gen_bool(0.25) {
            match rng.gen_range(0..3) {
                0 if cols[6] != "0" => cols[7] = RELS.choose(rng).unwrap().to_string(),
                1 => cols[4] = WORDS.choose(rng).unwrap().1.to_string(),
                _ => {
                    let (form, pos) = WORDS.choose(rng).unwrap();
                    cols[1] = form.to_string();
                    cols[2] = form.to_lowercase();
                    cols[4] = pos.to_string();
                }
            }
        }
        out.push_str(&cols.join("\t"));
        out.push('\n');
    }
    out
}

fn random_settings(rng: &mut StdRng) -> SettingSet {
    Setting::ALL.into_iter().filter(|_| rng.gen_bool(0.5)).fold(SettingSet::empty(), |s, x| s.with(x))
}

fn random_lexicon(rng: &mut StdRng) -> EntityLexicon {
    let mut lex = EntityLexicon::new();
    for (form, pos) in WORDS {
        if pos.starts_with("NN") && rng.gen_bool(0.3) {
            let kind = if rng.gen_bool(0.5) { MentionKind::Entity } else { MentionKind::Class };
            lex.insert(form, form, kind);
        }
    }
    lex
}

fn seeds() -> Vec<String> {
    let mut files: Vec<_> = std::fs::read_dir(fixtures().join("golden"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "conllu"))
        .collect();
    files.sort();
    files.iter().map(|p| std::fs::read_to_string(p).unwrap()).collect()
}

fn check(r: &mut Report, sent: &ParsedSentence, settings: SettingSet, lex: EntityLexicon, seen: &mut BTreeSet<u8>) -> usize {
    let sent = annotate_mentions(sent.clone(), &lex);
    let ex = Extractor::new(lex).extract_all(&sent, settings);
    for t in &ex.triples {
        let n = t.template.number();
        seen.insert(n);
        r.check((1..=46).contains(&n), || format!("template {n} out of range in {:?}", sent.text()));
        r.check(t.is_key == KEY.contains(&n), || format!("T{n} key marking is {} in {:?}", t.is_key, sent.text()));
        r.check(t.category == category_of(n), || format!("T{n} reported as {} in {:?}", t.category, sent.text()));
    }
    ex.triples.len()
}

const FUZZED: usize = 500;

pub fn run() -> Result<(), String> {
    let mut rng = StdRng::seed_from_u64(0x7e4a);
    let mut r = Report::default();
    let mut seen = BTreeSet::new();
    let seeds = seeds();

    // the worked examples themselves reach every template
    for (sent, lex, settings) in crate::golden::worked_examples()? {
        check(&mut r, &sent, settings, lex, &mut seen);
    }
    let missing: Vec<u8> = (1..=46).filter(|n| !seen.contains(n)).collect();
    r.check(missing.is_empty(), || format!("templates never produced: {missing:?}"));

    let mut parsed = 0;
    let mut emitted = 0;
    seen.clear();
    while parsed < FUZZED {
        let text = if rng.gen_bool(0.5) {
            let n = rng.gen_range(2..=14);
            random_sentence(&mut rng, n)
        } else {
            let seed = seeds.choose(&mut rng).unwrap().clone();
            mutate(&mut rng, &seed)
        };
        // mutation can break validity (say a second root); such inputs are rejected, not extracted
        let Ok(sents) = read_conllu(&text) else { continue };
        for sent in sents {
            let settings = random_settings(&mut rng);
            let lex = random_lexicon(&mut rng);
            emitted += check(&mut r, &sent, settings, lex, &mut seen);
            parsed += 1;
        }
    }
    // a fuzzer that never reaches the matchers proves nothing
    r.check(emitted >= FUZZED, || format!("{FUZZED} fuzzed sentences gave only {emitted} triples"));
    r.check(seen.len() >= 20, || format!("fuzzing reached only templates {seen:?}"));
    r.finish()
}
