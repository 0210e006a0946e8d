//! Expressions over labeled graphs in the four dialects.

mod eval;
mod parse;

pub use eval::{evaluate, evaluate_node, node_graphs, validate, ValidationReport, Violation};
pub use parse::{parse_expression, serialize_expression, serialize_node, ParseError};

use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph::{Label, LabeledGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dialect {
    Clique,
    Fuse,
    Glue,
    Multi,
}

impl Dialect {
    pub fn name(&self) -> &'static str {
        match self {
            Dialect::Clique => "clique",
            Dialect::Fuse => "fuse",
            Dialect::Glue => "glue",
            Dialect::Multi => "multi",
        }
    }

    pub fn from_name(s: &str) -> Option<Dialect> {
        match s {
            "clique" => Some(Dialect::Clique),
            "fuse" => Some(Dialect::Fuse),
            "glue" => Some(Dialect::Glue),
            "multi" => Some(Dialect::Multi),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelabelTarget {
    Single(Label),
    Set(BTreeSet<Label>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub id: NodeId,
    pub op: Op,
    pub children: Vec<Node>,
}

/// Node operation: the paper dialects share introduce/union/join/relabel and
/// add fuse (fuse dialect) or glue (glue dialect).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Op {
    Introduce { title: String, labels: BTreeSet<Label> },
    Union,
    Glue,
    Join { a: Label, b: Label },
    Relabel { from: Label, to: RelabelTarget },
    Fuse { label: Label },
}

impl Op {
    pub fn arity(&self) -> usize {
        match self {
            Op::Introduce { .. } => 0,
            Op::Union | Op::Glue => 2,
            Op::Join { .. } | Op::Relabel { .. } | Op::Fuse { .. } => 1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Op::Introduce { .. } => "introduce",
            Op::Union => "union",
            Op::Glue => "glue",
            Op::Join { .. } => "join",
            Op::Relabel { to: RelabelTarget::Single(_), .. } => "relabel-single",
            Op::Relabel { to: RelabelTarget::Set(_), .. } => "relabel-set",
            Op::Fuse { .. } => "fuse",
        }
    }

    fn allowed_in(&self, dialect: Dialect) -> bool {
        match (self, dialect) {
            (Op::Introduce { .. }, _) | (Op::Join { .. }, _) => true,
            (Op::Union, Dialect::Clique | Dialect::Fuse | Dialect::Multi) => true,
            (Op::Union, Dialect::Glue) => false,
            (Op::Glue, Dialect::Glue) => true,
            (Op::Glue, _) => false,
            (Op::Relabel { to: RelabelTarget::Single(_), .. }, d) => d != Dialect::Multi,
            (Op::Relabel { to: RelabelTarget::Set(_), .. }, d) => d == Dialect::Multi,
            (Op::Fuse { .. }, Dialect::Fuse) => true,
            (Op::Fuse { .. }, _) => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expression {
    pub dialect: Dialect,
    pub k: Label,
    pub root: Node,
    next_id: u32,
}

#[derive(Debug, Error)]
pub enum ExprError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("expression is not valid:\n{0}")]
    Invalid(ValidationReport),
}

impl Expression {
    pub fn new(dialect: Dialect, k: Label, root: Node) -> Self {
        let mut e = Expression { dialect, k, root, next_id: 0 };
        e.renumber();
        e
    }

    /// Assign fresh consecutive ids in post-order.
    pub fn renumber(&mut self) {
        fn walk(n: &mut Node, next: &mut u32) {
            for c in &mut n.children {
                walk(c, next);
            }
            n.id = NodeId(*next);
            *next += 1;
        }
        let mut next = 0;
        walk(&mut self.root, &mut next);
        self.next_id = next;
    }

    pub fn fresh_id(&mut self) -> NodeId {
        let id = NodeId(self.next_id);
        self.next_id += 1;
        id
    }

    pub fn node(&self, id: NodeId) -> Option<&Node> {
        fn find(n: &Node, id: NodeId) -> Option<&Node> {
            if n.id == id {
                return Some(n);
            }
            n.children.iter().find_map(|c| find(c, id))
        }
        find(&self.root, id)
    }

    pub fn node_count(&self) -> usize {
        fn count(n: &Node) -> usize {
            1 + n.children.iter().map(count).sum::<usize>()
        }
        count(&self.root)
    }

    pub fn nodes_post_order(&self) -> Vec<&Node> {
        fn walk<'a>(n: &'a Node, out: &mut Vec<&'a Node>) {
            for c in &n.children {
                walk(c, out);
            }
            out.push(n);
        }
        let mut out = Vec::new();
        walk(&self.root, &mut out);
        out
    }

    pub fn introduce_titles(&self) -> Vec<String> {
        self.nodes_post_order()
            .into_iter()
            .filter_map(|n| match &n.op {
                Op::Introduce { title, .. } => Some(title.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn contains_fuse(&self) -> bool {
        self.nodes_post_order().iter().any(|n| matches!(n.op, Op::Fuse { .. }))
    }
}

/// The "useless node" predicate: a join creating no new edge, a fuse with
/// fewer than two vertices in its class, an identity relabel, or a relabel
/// with an empty source class. `child` is the labeled graph the operation is
/// applied to.
pub fn op_is_useless(op: &Op, child: &LabeledGraph) -> bool {
    match op {
        Op::Introduce { .. } | Op::Union | Op::Glue => false,
        Op::Fuse { label } => child.class_size(*label) < 2,
        Op::Relabel { from, to } => {
            if child.class_size(*from) == 0 {
                return true;
            }
            match to {
                RelabelTarget::Single(j) => from == j,
                RelabelTarget::Set(s) => s.len() == 1 && s.contains(from),
            }
        }
        Op::Join { a, b } => {
            let ca = child.class(*a);
            let cb = child.class(*b);
            for u in &ca {
                for v in &cb {
                    if u != v && !child.has_edge(u, v) {
                        return false;
                    }
                }
            }
            true
        }
    }
}
