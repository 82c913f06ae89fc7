//! Reading pre-computed linguistic annotations.
//!
//! Dependency parses arrive as CoNLL-U, constituency trees as Penn-Treebank
//! brackets, and named entities through a TSV lexicon. The three are aligned
//! into one [`ParsedSentence`].

mod conllu;
mod lexicon;
mod ptb;
mod sentence;

pub use conllu::{read_conllu, write_conllu};
pub use lexicon::{normalize_key, EntityLexicon, LexEntry, MentionKind};
pub use ptb::{read_ptb, read_ptb_forest};
pub use sentence::{
    annotate_mentions, detokenize, ConstituencyNode, EntityMention, ParsedSentence, Span, Token,
};

use std::path::Path;

use crate::error::{Error, Result};

/// Reads a `<stem>.conllu` / `<stem>.ptb` pair and aligns trees to sentences.
///
/// The PTB file may be missing, in which case sentences carry no tree.
pub fn read_pair(conllu: &Path, ptb: Option<&Path>) -> Result<Vec<ParsedSentence>> {
    let text = std::fs::read_to_string(conllu).map_err(|e| Error::io(conllu, e))?;
    let mut sentences = read_conllu(&text)?;
    let stem = conllu.file_stem().and_then(|s| s.to_str()).unwrap_or("doc").to_string();
    for (i, sent) in sentences.iter_mut().enumerate() {
        if sent.id.is_empty() {
            sent.id = format!("{stem}#{}", i + 1);
        }
    }
    if let Some(ptb) = ptb {
        let trees_text = std::fs::read_to_string(ptb).map_err(|e| Error::io(ptb, e))?;
        let trees = read_ptb_forest(&trees_text)?;
        if trees.len() != sentences.len() {
            return Err(Error::Alignment(format!(
                "{} has {} trees but {} has {} sentences",
                ptb.display(),
                trees.len(),
                conllu.display(),
                sentences.len()
            )));
        }
        for (sent, tree) in sentences.iter_mut().zip(trees) {
            sent.attach_tree(tree)?;
        }
    }
    Ok(sentences)
}

/// One pre-parsed document of a corpus directory.
#[derive(Debug, Clone)]
pub struct Document {
    /// File stem of the `.conllu` file.
    pub id: String,
    pub sentences: Vec<ParsedSentence>,
}

/// Every `*.conllu` file of `dir` in file-name order, each with the
/// `.ptb` file of the same stem when there is one.
pub fn read_corpus(dir: &Path) -> Result<Vec<Document>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.extension().is_some_and(|x| x == "conllu") {
            files.push(path);
        }
    }
    files.sort();
    files
        .into_iter()
        .map(|conllu| {
            let ptb = conllu.with_extension("ptb");
            let sentences = read_pair(&conllu, ptb.exists().then_some(ptb.as_path()))?;
            let id = conllu.file_stem().and_then(|s| s.to_str()).unwrap_or_default().to_string();
            Ok(Document { id, sentences })
        })
        .collect()
}
