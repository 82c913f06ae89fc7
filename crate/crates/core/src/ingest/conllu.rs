use super::sentence::{validate_tokens, ParsedSentence, Token};
use crate::error::{Error, Result};

/// Parses a CoNLL-U stream into sentences.
///
/// Multiword-token ranges (`3-4`) and empty nodes (`5.1`) are skipped; only
/// syntactic words take part in the dependency tree.
pub fn read_conllu(text: &str) -> Result<Vec<ParsedSentence>> {
    let mut sentences = Vec::new();
    let mut tokens: Vec<Token> = Vec::new();
    let mut comments: Vec<String> = Vec::new();
    let mut start_line = 1;

    let mut flush = |tokens: &mut Vec<Token>, comments: &mut Vec<String>, start_line: usize| -> Result<()> {
        if tokens.is_empty() {
            comments.clear();
            return Ok(());
        }
        validate_tokens(tokens, start_line)?;
        let id = comments
            .iter()
            .find_map(|c| c.strip_prefix("sent_id").map(|r| r.trim_start_matches([' ', '=']).trim().to_string()))
            .unwrap_or_default();
        let mut sent = ParsedSentence::new(id, std::mem::take(tokens))?;
        sent.comments = std::mem::take(comments);
        sentences.push(sent);
        Ok(())
    };

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            flush(&mut tokens, &mut comments, start_line)?;
            start_line = lineno + 1;
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if tokens.is_empty() {
                comments.push(comment.trim().to_string());
            }
            continue;
        }
        let fields: Vec<&str> = if line.contains('\t') {
            line.split('\t').collect()
        } else {
            line.split_whitespace().collect()
        };
        if fields.len() != 10 {
            return Err(Error::Conllu {
                line: lineno,
                message: format!("expected 10 columns, found {}", fields.len()),
            });
        }
        if fields[0].contains('-') || fields[0].contains('.') {
            continue;
        }
        let parse_usize = |s: &str, what: &str| {
            s.parse::<usize>().map_err(|_| Error::Conllu {
                line: lineno,
                message: format!("invalid {what} {s:?}"),
            })
        };
        let index = parse_usize(fields[0], "ID")?;
        let head = parse_usize(fields[6], "HEAD")?;
        let deps = parse_deps(fields[8]).ok_or_else(|| Error::Conllu {
            line: lineno,
            message: format!("invalid DEPS {:?}", fields[8]),
        })?;
        if tokens.is_empty() {
            start_line = lineno;
        }
        tokens.push(Token {
            index,
            form: fields[1].to_string(),
            lemma: fields[2].to_string(),
            upos: fields[3].to_string(),
            xpos: fields[4].to_string(),
            feats: fields[5].to_string(),
            head,
            deprel: fields[7].to_string(),
            deps,
            misc: fields[9].to_string(),
        });
    }
    flush(&mut tokens, &mut comments, start_line)?;
    Ok(sentences)
}

fn parse_deps(field: &str) -> Option<Vec<(usize, String)>> {
    if field == "_" || field.is_empty() {
        return Some(Vec::new());
    }
    field
        .split('|')
        .map(|pair| {
            let (head, rel) = pair.split_once(':')?;
            // enhanced heads on empty nodes are not modelled
            let head = head.parse::<usize>().ok()?;
            Some((head, rel.to_string()))
        })
        .collect()
}

/// Serializes sentences back to CoNLL-U.
pub fn write_conllu(sentences: &[ParsedSentence]) -> String {
    let mut out = String::new();
    for sent in sentences {
        let mut wrote_id = false;
        for c in &sent.comments {
            wrote_id |= c.starts_with("sent_id");
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        if !wrote_id && !sent.id.is_empty() {
            out.push_str(&format!("# sent_id = {}\n", sent.id));
        }
        for t in &sent.tokens {
            let deps = if t.deps.is_empty() {
                "_".to_string()
            } else {
                t.deps.iter().map(|(h, r)| format!("{h}:{r}")).collect::<Vec<_>>().join("|")
            };
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                t.index, t.form, t.lemma, t.upos, t.xpos, t.feats, t.head, t.deprel, deps, t.misc
            ));
        }
        out.push('\n');
    }
    out
}
