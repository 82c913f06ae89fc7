use std::path::{Path, PathBuf};

use hybridqa::ingest::read_pair;
use hybridqa::{EntityLexicon, ParsedSentence};

pub fn data() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

/// The single sentence of a `.conllu` file, with the sibling `.ptb` tree when present.
pub fn load_sentence(conllu: &Path) -> ParsedSentence {
    let ptb = conllu.with_extension("ptb");
    let mut sents = read_pair(conllu, ptb.exists().then_some(ptb.as_path()))
        .unwrap_or_else(|e| panic!("{}: {e}", conllu.display()));
    assert_eq!(sents.len(), 1, "{} holds one sentence", conllu.display());
    sents.remove(0)
}

pub fn question(stem: &str) -> ParsedSentence {
    load_sentence(&data().join("questions").join(format!("{stem}.conllu")))
}

pub fn lexicon(rows: &[[String; 3]]) -> EntityLexicon {
    let tsv: String = rows.iter().map(|r| format!("{}\t{}\t{}\n", r[0], r[1], r[2])).collect();
    EntityLexicon::from_tsv_str(&tsv, "fixture").expect("fixture lexicon")
}

/// Collects failures instead of stopping at the first one.
#[derive(Default)]
pub struct Report(Vec<String>);

impl Report {
    pub fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.0.push(msg());
        }
    }

    pub fn fail(&mut self, msg: String) {
        self.0.push(msg);
    }

    pub fn finish(self) -> Result<(), String> {
        if self.0.is_empty() {
            Ok(())
        } else {
            Err(self.0.join("\n"))
        }
    }
}
