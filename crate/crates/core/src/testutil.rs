//! Compact sentence builders for unit tests.

use crate::ingest::{annotate_mentions, read_conllu, read_ptb, EntityLexicon, ParsedSentence};

/// Rows of `form lemma xpos head deprel [deps]`, one token per line.
pub fn conllu(rows: &str) -> String {
    let mut out = String::new();
    for (i, line) in rows.lines().map(str::trim).filter(|l| !l.is_empty()).enumerate() {
        let f: Vec<&str> = line.split_whitespace().collect();
        assert!(f.len() == 5 || f.len() == 6, "bad row {line:?}");
        let deps = f.get(5).copied().unwrap_or("_");
        out.push_str(&format!("{}\t{}\t{}\t_\t{}\t_\t{}\t{}\t{}\t_\n", i + 1, f[0], f[1], f[2], f[3], f[4], deps));
    }
    out
}

pub fn sentence(rows: &str, ptb: Option<&str>) -> ParsedSentence {
    let mut sents = read_conllu(&conllu(rows)).expect("valid rows");
    let mut sent = sents.remove(0);
    sent.id = "t".into();
    if let Some(ptb) = ptb {
        sent.attach_tree(read_ptb(ptb).expect("valid tree")).expect("aligned tree");
    }
    sent
}

pub fn with_lexicon(sent: ParsedSentence, tsv: &str) -> ParsedSentence {
    let lex = EntityLexicon::from_tsv_str(tsv, "test").expect("valid lexicon");
    annotate_mentions(sent, &lex)
}

// Question fixtures shared by the decomposition and planning tests.

pub const Q2: &str = "
How how WRB 2 advmod
many many JJ 3 amod
children child NNS 13 obj
does do VBZ 13 aux
the the DT 6 det
actor actor NN 13 nsubj
who who WP 8 nsubj
plays play VBZ 6 acl:relcl
Dan Dan NNP 10 compound
White White NNP 8 obj
in in IN 12 case
Milk Milk NNP 8 obl
have have VB 0 root
? ? . 13 punct";

pub const Q2_TREE: &str = "(ROOT (SBARQ (WHNP (WHADJP (WRB How) (JJ many)) (NNS children)) (SQ (VBZ does) (NP (NP (DT the) (NN actor)) (SBAR (WHNP (WP who)) (S (VP (VBZ plays) (NP (NNP Dan) (NNP White)) (PP (IN in) (NP (NNP Milk))))))) (VP (VB have))) (. ?)))";

pub const Q3: &str = "
How how WRB 2 advmod
many many JJ 5 amod
Golden golden NNP 4 compound
Globes globe NNPS 5 compound
awards award NNS 12 obj
did do VBD 12 aux
the the DT 8 det
daughter daughter NN 12 nsubj
of of IN 10 case
Henry Henry NNP 8 nmod
Fonda Fonda NNP 10 flat
win win VB 0 root
? ? . 12 punct";

pub const Q3_TREE: &str = "(ROOT (SBARQ (WHNP (WHADJP (WRB How) (JJ many)) (NNP Golden) (NNPS Globes) (NNS awards)) (SQ (VBD did) (NP (NP (DT the) (NN daughter)) (PP (IN of) (NP (NNP Henry) (NNP Fonda)))) (VP (VB win))) (. ?)))";

pub const PHILOSOPHER: &str = "
Which which WDT 2 det
writers writer NNS 4 nsubj
had have VBD 4 aux
influenced influence VBN 0 root
the the DT 6 det
philosopher philosopher NN 4 obj
that that WDT 8 nsubj
refused refuse VBD 6 acl:relcl
a a DT 11 det
Nobel Nobel NNP 11 compound
Prize Prize NNP 8 obj
? ? . 4 punct";

pub const PHILOSOPHER_TREE: &str = "(ROOT (SBARQ (WHNP (WDT Which) (NNS writers)) (SQ (VP (VBD had) (VP (VBN influenced) (NP (NP (DT the) (NN philosopher)) (SBAR (WHNP (WDT that)) (S (VP (VBD refused) (NP (DT a) (NNP Nobel) (NNP Prize))))))))) (. ?)))";

pub const CHAPLIN: &str = "
In in IN 3 case
which which WDT 3 det
city city NN 10 obl
were be VBD 10 aux:pass
Charlie Charlie NNP 9 nmod:poss
Chaplin Chaplin NNP 5 flat
's 's POS 5 case
half half JJ 9 amod
brothers brother NNS 10 nsubj:pass
born bear VBN 0 root
? ? . 10 punct";

pub const CHAPLIN_TREE: &str = "(ROOT (SBARQ (WHPP (IN In) (WHNP (WDT which) (NN city))) (SQ (VBD were) (NP (NP (NNP Charlie) (NNP Chaplin) (POS 's)) (JJ half) (NNS brothers)) (VP (VBN born))) (. ?)))";

pub const Q1: &str = "
Who who WP 4 nsubj
was be VBD 4 cop
vice vice NN 4 compound
president president NN 0 root
under under IN 7 case
the the DT 7 det
president president NN 4 nmod
who who WP 9 nsubj
approved approve VBD 7 acl:relcl
the the DT 11 det
use use NN 9 obj
of of IN 14 case
atomic atomic JJ 14 amod
weapons weapon NNS 11 nmod
against against IN 16 case
Japan Japan NNP 9 obl
during during IN 19 case
World World NNP 19 compound
War War NNP 9 obl
II II CD 19 nummod
? ? . 4 punct";

pub const Q1_TREE: &str = "(ROOT (SBARQ (WHNP (WP Who)) (SQ (VBD was) (NP (NP (NN vice) (NN president)) (PP (IN under) (NP (NP (DT the) (NN president)) (SBAR (WHNP (WP who)) (S (VP (VBD approved) (NP (NP (DT the) (NN use)) (PP (IN of) (NP (JJ atomic) (NNS weapons)))) (PP (IN against) (NP (NNP Japan))) (PP (IN during) (NP (NNP World) (NNP War) (CD II)))))))))) (. ?)))";

pub const OR: &str = "
Which which WDT 2 det
movies movie NNS 4 nsubj:pass
were be VBD 4 aux:pass
directed direct VBN 0 root
by by IN 6 case
Nolan Nolan NNP 4 obl
or or CC 8 cc
starred star VBD 4 conj
Bale Bale NNP 8 obj
? ? . 4 punct";

pub const OR_TREE: &str = "(ROOT (SBARQ (WHNP (WDT Which) (NNS movies)) (SQ (VBD were) (VP (VP (VBN directed) (PP (IN by) (NP (NNP Nolan)))) (CC or) (VP (VBD starred) (NP (NNP Bale))))) (. ?)))";

pub const TALLEST: &str = "
Which which WDT 5 nsubj
is be VBZ 5 cop
the the DT 5 det
tallest tall JJS 5 amod
building building NN 0 root
in in IN 7 case
Paris Paris NNP 5 nmod
? ? . 5 punct";

pub const TALLEST_TREE: &str = "(ROOT (SBARQ (WHNP (WDT Which)) (SQ (VBZ is) (NP (NP (DT the) (JJS tallest) (NN building)) (PP (IN in) (NP (NNP Paris))))) (. ?)))";

pub const FLAT: &str = "
John John NNP 2 nsubj
loves love VBZ 0 root
Mary Mary NNP 2 obj";

pub const FLAT_TREE: &str = "(S (NP (NNP John)) (VP (VBZ loves)) (NP (NNP Mary)))";
