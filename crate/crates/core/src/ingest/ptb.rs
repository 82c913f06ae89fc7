use super::sentence::{ConstituencyNode, Span};
use crate::error::{Error, Result};

#[derive(Debug, PartialEq)]
enum Tok<'a> {
    Open(usize),
    Close(usize),
    Atom(usize, &'a str),
}

fn lex(text: &str) -> Vec<Tok<'_>> {
    let mut toks = Vec::new();
    let mut atom_start: Option<usize> = None;
    for (i, c) in text.char_indices() {
        let boundary = c == '(' || c == ')' || c.is_whitespace();
        if boundary {
            if let Some(s) = atom_start.take() {
                toks.push(Tok::Atom(s, &text[s..i]));
            }
            match c {
                '(' => toks.push(Tok::Open(i)),
                ')' => toks.push(Tok::Close(i)),
                _ => {}
            }
        } else if atom_start.is_none() {
            atom_start = Some(i);
        }
    }
    if let Some(s) = atom_start {
        toks.push(Tok::Atom(s, &text[s..]));
    }
    toks
}

struct Parser<'a> {
    toks: Vec<Tok<'a>>,
    pos: usize,
    len: usize,
}

impl<'a> Parser<'a> {
    fn offset(&self) -> usize {
        match self.toks.get(self.pos) {
            Some(Tok::Open(o)) | Some(Tok::Close(o)) | Some(Tok::Atom(o, _)) => *o,
            None => self.len,
        }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Ptb { offset: self.offset(), message: message.into() }
    }

    fn node(&mut self) -> Result<ConstituencyNode> {
        match self.toks.get(self.pos) {
            Some(Tok::Open(_)) => self.pos += 1,
            _ => return Err(self.err("expected '('")),
        }
        let label = match self.toks.get(self.pos) {
            Some(Tok::Atom(_, a)) => {
                self.pos += 1;
                a.to_string()
            }
            _ => String::new(),
        };
        let mut children = Vec::new();
        let mut word = None;
        loop {
            match self.toks.get(self.pos) {
                Some(Tok::Close(_)) => {
                    self.pos += 1;
                    break;
                }
                Some(Tok::Open(_)) => {
                    if word.is_some() {
                        return Err(self.err("preterminal mixes a word and subtrees"));
                    }
                    children.push(self.node()?);
                }
                Some(Tok::Atom(_, a)) => {
                    if word.is_some() || !children.is_empty() {
                        return Err(self.err(format!("unexpected word {a:?}")));
                    }
                    word = Some(a.to_string());
                    self.pos += 1;
                }
                None => return Err(self.err("unbalanced parentheses: missing ')'")),
            }
        }
        if word.is_none() && children.is_empty() {
            return Err(self.err(format!("empty constituent {label:?}")));
        }
        Ok(ConstituencyNode { label, word, children, span: Span::single(1), depth: 0 })
    }
}

/// Reads every tree in a PTB bracket stream (one per line or pretty-printed).
pub fn read_ptb_forest(text: &str) -> Result<Vec<ConstituencyNode>> {
    let mut parser = Parser { toks: lex(text), pos: 0, len: text.len() };
    let mut trees = Vec::new();
    while parser.pos < parser.toks.len() {
        match parser.toks[parser.pos] {
            Tok::Open(_) => {
                let mut tree = parser.node()?;
                // "( (S ...) )" wrappers carry no label
                while tree.label.is_empty() && tree.word.is_none() && tree.children.len() == 1 {
                    tree = tree.children.pop().expect("one child");
                }
                tree.finalize();
                trees.push(tree);
            }
            Tok::Close(_) => return Err(parser.err("unbalanced parentheses: unexpected ')'")),
            Tok::Atom(_, a) => return Err(parser.err(format!("word {a:?} outside any constituent"))),
        }
    }
    Ok(trees)
}

/// Reads exactly one PTB tree.
pub fn read_ptb(text: &str) -> Result<ConstituencyNode> {
    let mut trees = read_ptb_forest(text)?;
    match trees.len() {
        1 => Ok(trees.pop().expect("one tree")),
        0 => Err(Error::Ptb { offset: 0, message: "no tree found".into() }),
        n => Err(Error::Ptb { offset: text.len(), message: format!("expected one tree, found {n}") }),
    }
}
