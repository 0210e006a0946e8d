//! Concrete syntax:
//!
//! ```text
//! expr  := intro
//!        | "(" expr "+" expr ")"
//!        | "(" expr "~" expr ")"
//!        | "j" INT "," INT "(" expr ")"
//!        | "r" INT "->" (INT | "{" INT ("," INT)* "}" | "{}") "(" expr ")"
//!        | "f" INT "(" expr ")"
//! intro := TITLE "<" INT ("," INT)* ">"
//! ```
//!
//! Titles are `[A-Za-z0-9_]+`; an identifier followed by `<` is always an
//! introduce, so titles like `f1` stay unambiguous.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::{Dialect, Expression, Node, NodeId, Op, RelabelTarget};
use crate::graph::Label;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("syntax error at {line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    dialect: Dialect,
    max_label: Label,
    next_id: u32,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let mut line = 1;
        let mut col = 1;
        for &b in &self.src[..self.pos.min(self.src.len())] {
            if b == b'\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        Err(ParseError { line, col, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.src.get(self.pos).copied();
        if b.is_some() {
            self.pos += 1;
        }
        b
    }

    fn expect(&mut self, b: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(c) if c == b => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => self.err(format!("expected {:?}, found {:?}", b as char, c as char)),
            None => self.err(format!("expected {:?}, found end of input", b as char)),
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self
            .src
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_')
        {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected identifier");
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn int(&mut self) -> Result<Label, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        match s.parse::<Label>() {
            Ok(v) => Ok(v),
            Err(_) => self.err(format!("integer {s} out of range")),
        }
    }

    fn label(&mut self) -> Result<Label, ParseError> {
        let v = self.int()?;
        if v == 0 {
            return self.err("labels start at 1");
        }
        self.max_label = self.max_label.max(v);
        Ok(v)
    }

    fn label_list(&mut self, close: u8) -> Result<BTreeSet<Label>, ParseError> {
        let mut set = BTreeSet::new();
        loop {
            set.insert(self.label()?);
            match self.peek() {
                Some(b',') => {
                    self.pos += 1;
                }
                Some(c) if c == close => break,
                _ => return self.err(format!("expected ',' or {:?}", close as char)),
            }
        }
        Ok(set)
    }

    fn fresh(&mut self) -> NodeId {
        let id = NodeId(self.next_id);
        self.next_id += 1;
        id
    }

    fn forbid(&mut self, op: &Op) -> Result<(), ParseError> {
        if !op.allowed_in(self.dialect) {
            return self.err(format!(
                "{} node is forbidden in the {} dialect",
                op.name(),
                self.dialect.name()
            ));
        }
        Ok(())
    }

    fn node(&mut self, op: Op, children: Vec<Node>) -> Result<Node, ParseError> {
        self.forbid(&op)?;
        Ok(Node { id: self.fresh(), op, children })
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let left = self.expr()?;
                let op = match self.peek() {
                    Some(b'+') => Op::Union,
                    Some(b'~') => Op::Glue,
                    _ => return self.err("expected '+' or '~'"),
                };
                self.pos += 1;
                let right = self.expr()?;
                self.expect(b')')?;
                self.node(op, vec![left, right])
            }
            Some(_) => {
                let ident = self.ident()?;
                if self.peek() == Some(b'<') {
                    // introduce
                    self.pos += 1;
                    let labels = self.label_list(b'>')?;
                    self.expect(b'>')?;
                    return self.node(Op::Introduce { title: ident, labels }, vec![]);
                }
                let (head, digits) = ident.split_at(1);
                let num: Option<Label> = if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
                    digits.parse().ok()
                } else {
                    None
                };
                match (head, num) {
                    ("j", Some(a)) if self.peek() == Some(b',') => {
                        self.pos += 1;
                        if a == 0 {
                            return self.err("labels start at 1");
                        }
                        self.max_label = self.max_label.max(a);
                        let b = self.label()?;
                        self.expect(b'(')?;
                        let child = self.expr()?;
                        self.expect(b')')?;
                        self.node(Op::Join { a, b }, vec![child])
                    }
                    ("r", Some(from)) if self.peek() == Some(b'-') => {
                        self.pos += 1;
                        self.expect(b'>')?;
                        if from == 0 {
                            return self.err("labels start at 1");
                        }
                        self.max_label = self.max_label.max(from);
                        let to = match self.peek() {
                            Some(b'{') => {
                                self.pos += 1;
                                let set = if self.peek() == Some(b'}') {
                                    BTreeSet::new()
                                } else {
                                    self.label_list(b'}')?
                                };
                                self.expect(b'}')?;
                                RelabelTarget::Set(set)
                            }
                            _ => RelabelTarget::Single(self.label()?),
                        };
                        self.expect(b'(')?;
                        let child = self.expr()?;
                        self.expect(b')')?;
                        self.node(Op::Relabel { from, to }, vec![child])
                    }
                    ("f", Some(label)) if self.peek() == Some(b'(') => {
                        self.pos += 1;
                        if label == 0 {
                            return self.err("labels start at 1");
                        }
                        self.max_label = self.max_label.max(label);
                        let child = self.expr()?;
                        self.expect(b')')?;
                        self.node(Op::Fuse { label }, vec![child])
                    }
                    _ => self.err(format!("unexpected token after identifier {ident:?}")),
                }
            }
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parse a single expression of the given dialect. The label count `k` is the
/// largest label mentioned.
pub fn parse_expression(text: &str, dialect: Dialect) -> Result<Expression, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, dialect, max_label: 1, next_id: 0 };
    let root = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input after expression");
    }
    Ok(Expression::new(dialect, p.max_label, root))
}

struct DisplayNode<'a>(&'a Node);

impl fmt::Display for DisplayNode<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_node(self.0, f)
    }
}

fn write_node(n: &Node, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match &n.op {
        Op::Introduce { title, labels } => {
            let ls: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
            write!(f, "{title}<{}>", ls.join(","))
        }
        Op::Union => {
            write!(f, "(")?;
            write_node(&n.children[0], f)?;
            write!(f, " + ")?;
            write_node(&n.children[1], f)?;
            write!(f, ")")
        }
        Op::Glue => {
            write!(f, "(")?;
            write_node(&n.children[0], f)?;
            write!(f, " ~ ")?;
            write_node(&n.children[1], f)?;
            write!(f, ")")
        }
        Op::Join { a, b } => {
            write!(f, "j{a},{b}(")?;
            write_node(&n.children[0], f)?;
            write!(f, ")")
        }
        Op::Relabel { from, to } => {
            match to {
                RelabelTarget::Single(j) => write!(f, "r{from}->{j}(")?,
                RelabelTarget::Set(s) => {
                    let ls: Vec<String> = s.iter().map(|l| l.to_string()).collect();
                    write!(f, "r{from}->{{{}}}(", ls.join(","))?;
                }
            }
            write_node(&n.children[0], f)?;
            write!(f, ")")
        }
        Op::Fuse { label } => {
            write!(f, "f{label}(")?;
            write_node(&n.children[0], f)?;
            write!(f, ")")
        }
    }
}

/// Canonical serialization; re-parsing yields a structurally identical tree.
pub fn serialize_expression(e: &Expression) -> String {
    serialize_node(&e.root)
}

pub fn serialize_node(n: &Node) -> String {
    format!("{}", DisplayNode(n))
}
