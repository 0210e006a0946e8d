//! Evaluation semantics and well-formedness checking for all four dialects.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{Dialect, ExprError, Expression, Node, NodeId, Op, RelabelTarget};
use crate::graph::{Label, LabeledGraph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub node: NodeId,
    pub rule: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, node: NodeId, rule: &'static str, message: String) {
        self.violations.push(Violation { node, rule, message });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "node {}: [{}] {}", v.node.0, v.rule, v.message)?;
        }
        Ok(())
    }
}

/// Evaluate a single operation leniently: violations do not stop evaluation,
/// they are collected by `validate` separately. Titles that collide across a
/// union are merged rather than rejected here.
pub fn apply_op(op: &Op, k: Label, children: &[LabeledGraph]) -> LabeledGraph {
    match op {
        Op::Introduce { title, labels } => {
            let mut g = LabeledGraph::new(k);
            let ls: BTreeSet<Label> = labels.iter().copied().filter(|l| *l <= k).collect();
            g.add_vertex(title, ls).unwrap();
            g
        }
        Op::Union | Op::Glue => {
            let mut g = children[0].clone();
            g.k = k;
            for (t, ls) in children[1].vertices() {
                if !g.has_vertex(t) {
                    g.add_vertex(t, ls.clone()).unwrap();
                }
            }
            for (a, b) in children[1].edges() {
                g.add_edge(a, b).unwrap();
            }
            g
        }
        Op::Join { a, b } => {
            let mut g = children[0].clone();
            let ca = g.class(*a);
            let cb = g.class(*b);
            for u in &ca {
                for v in &cb {
                    if u != v {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
            g
        }
        Op::Relabel { from, to } => {
            let mut g = LabeledGraph::new(k);
            for (t, ls) in children[0].vertices() {
                let new: BTreeSet<Label> = if ls.contains(from) {
                    let mut s: BTreeSet<Label> = ls.iter().copied().filter(|l| l != from).collect();
                    match to {
                        RelabelTarget::Single(j) => {
                            s.insert(*j);
                        }
                        RelabelTarget::Set(set) => {
                            s.extend(set.iter().copied());
                        }
                    }
                    s
                } else {
                    ls.clone()
                };
                g.add_vertex(t, new).unwrap();
            }
            for (a, b) in children[0].edges() {
                g.add_edge(a, b).unwrap();
            }
            g
        }
        Op::Fuse { label } => {
            let class = children[0].class(*label);
            if class.len() <= 1 {
                let mut g = children[0].clone();
                g.k = k;
                return g;
            }
            // The fused vertex takes the lexicographically smallest title of
            // the class; its neighborhood is the class's outside neighborhood.
            let fused = class.iter().min().unwrap().clone();
            let mut nbrs: BTreeSet<String> = BTreeSet::new();
            for v in &class {
                nbrs.extend(children[0].neighbors(v));
            }
            let mut g = LabeledGraph::new(k);
            for (t, ls) in children[0].vertices() {
                if !class.contains(t) {
                    g.add_vertex(t, ls.clone()).unwrap();
                }
            }
            g.add_vertex(&fused, BTreeSet::from([*label])).unwrap();
            for (a, b) in children[0].edges() {
                if !class.contains(a as &str) && !class.contains(b as &str) {
                    g.add_edge(a, b).unwrap();
                }
            }
            for n in nbrs.difference(&class) {
                g.add_edge(&fused, n).unwrap();
            }
            g
        }
    }
}

/// Evaluate the subtree rooted at `node` leniently.
pub fn evaluate_node(node: &Node, k: Label) -> LabeledGraph {
    let children: Vec<LabeledGraph> =
        node.children.iter().map(|c| evaluate_node(c, k)).collect();
    apply_op(&node.op, k, &children)
}

/// Lenient evaluation of every node, keyed by node id.
pub fn node_graphs(e: &Expression) -> BTreeMap<NodeId, LabeledGraph> {
    let mut out = BTreeMap::new();
    fn walk(n: &Node, k: Label, out: &mut BTreeMap<NodeId, LabeledGraph>) -> LabeledGraph {
        let children: Vec<LabeledGraph> = n.children.iter().map(|c| walk(c, k, out)).collect();
        let g = apply_op(&n.op, k, &children);
        out.insert(n.id, g.clone());
        g
    }
    walk(&e.root, e.k, &mut out);
    out
}

/// Check well-formedness of an expression for its dialect. Violations are
/// data; an empty report means the expression is well-formed.
pub fn validate(e: &Expression) -> ValidationReport {
    let mut rep = ValidationReport::default();
    // Title multiset per subtree for the union-disjointness rule; evaluated
    // graph per subtree for the semantic rules.
    fn walk(
        n: &Node,
        e: &Expression,
        rep: &mut ValidationReport,
    ) -> (LabeledGraph, BTreeSet<String>) {
        let results: Vec<(LabeledGraph, BTreeSet<String>)> =
            n.children.iter().map(|c| walk(c, e, rep)).collect();
        let k = e.k;

        if n.op.arity() != n.children.len() {
            rep.push(
                n.id,
                "arity",
                format!("{} expects {} children, has {}", n.op.name(), n.op.arity(), n.children.len()),
            );
        }
        if !n.op.allowed_in(e.dialect) {
            rep.push(
                n.id,
                "dialect",
                format!("{} node is forbidden in the {} dialect", n.op.name(), e.dialect.name()),
            );
        }

        let mut check_label = |rep: &mut ValidationReport, l: Label| {
            if l < 1 || l > k {
                rep.push(n.id, "label-range", format!("label {l} outside 1..={k}"));
            }
        };

        match &n.op {
            Op::Introduce { title, labels } => {
                if labels.is_empty() {
                    rep.push(n.id, "introduce-labels", "introduce label set is empty".into());
                }
                if labels.len() > 1 && e.dialect != Dialect::Multi {
                    rep.push(
                        n.id,
                        "introduce-labels",
                        format!("introduce of {title:?} uses {} labels in a single-label dialect", labels.len()),
                    );
                }
                for &l in labels {
                    check_label(rep, l);
                }
            }
            Op::Union => {
                if let [(_, t1), (_, t2)] = &results[..] {
                    for shared in t1.intersection(t2) {
                        rep.push(
                            n.id,
                            "union-titles",
                            format!("title {shared:?} introduced on both sides of a union"),
                        );
                    }
                }
            }
            Op::Glue => {
                if let [(g1, _), (g2, _)] = &results[..] {
                    for t in g1.title_set().intersection(&g2.title_set()) {
                        let l1 = g1.labels_of(t).unwrap();
                        let l2 = g2.labels_of(t).unwrap();
                        if l1 != l2 {
                            rep.push(
                                n.id,
                                "glueability",
                                format!("glue vertex {t:?} has labels {l1:?} vs {l2:?}"),
                            );
                            continue;
                        }
                        if let Some(&l) = l1.iter().next() {
                            for (side, g) in [("left", g1), ("right", g2)] {
                                let cnt = g.class_size(l);
                                if cnt != 1 {
                                    rep.push(
                                        n.id,
                                        "glueability",
                                        format!(
                                            "glue vertex {t:?} shares label {l} with {} other {side}-side vertices",
                                            cnt - 1
                                        ),
                                    );
                                }
                            }
                        }
                    }
                }
            }
            Op::Join { a, b } => {
                check_label(rep, *a);
                check_label(rep, *b);
                if a == b {
                    rep.push(n.id, "join-labels", format!("join with equal labels {a}"));
                }
                if e.dialect == Dialect::Multi {
                    if let [(g, _)] = &results[..] {
                        for (t, ls) in g.vertices() {
                            if ls.contains(a) && ls.contains(b) {
                                rep.push(
                                    n.id,
                                    "join-admissibility",
                                    format!("vertex {t:?} holds both joined labels {a} and {b}"),
                                );
                            }
                        }
                    }
                }
            }
            Op::Relabel { from, to } => {
                check_label(rep, *from);
                match to {
                    RelabelTarget::Single(j) => check_label(rep, *j),
                    RelabelTarget::Set(s) => {
                        for &j in s {
                            check_label(rep, j);
                        }
                    }
                }
            }
            Op::Fuse { label } => {
                check_label(rep, *label);
                if let [(g, _)] = &results[..] {
                    if g.class_size(*label) == 0 {
                        rep.push(
                            n.id,
                            "fuse-empty-class",
                            format!("fuse on empty label class {label}"),
                        );
                    }
                }
            }
        }

        // Fuse dialect additionally requires globally distinct titles; with
        // union disjointness checked above, a duplicate inside one union-free
        // branch is the remaining case.
        let mut titles: BTreeSet<String> = BTreeSet::new();
        match &n.op {
            Op::Introduce { title, .. } => {
                titles.insert(title.clone());
            }
            Op::Union | Op::Glue => {
                for (_, t) in &results {
                    titles.extend(t.iter().cloned());
                }
            }
            _ => {
                if let Some((_, t)) = results.first() {
                    titles = t.clone();
                }
            }
        }

        let graphs: Vec<LabeledGraph> = results.into_iter().map(|(g, _)| g).collect();
        (apply_op(&n.op, k, &graphs), titles)
    }

    // Duplicate titles within a union-free / glue-operand branch: two leaves
    // with the same title must have a glue node as their lowest common
    // ancestor. Walk once collecting per-subtree title multisets.
    fn dup_check(n: &Node, rep: &mut ValidationReport) -> BTreeMap<String, usize> {
        let mut mine: BTreeMap<String, usize> = BTreeMap::new();
        match &n.op {
            Op::Introduce { title, .. } => {
                mine.insert(title.clone(), 1);
            }
            Op::Glue => {
                // Shared titles are merged by glue semantics.
                let left = dup_check(&n.children[0], rep);
                let right = dup_check(&n.children[1], rep);
                mine = left;
                for (t, c) in right {
                    let e = mine.entry(t).or_insert(0);
                    *e = (*e).max(c);
                }
            }
            _ => {
                for c in &n.children {
                    let sub = dup_check(c, rep);
                    for (t, cnt) in sub {
                        *mine.entry(t).or_insert(0) += cnt;
                    }
                }
            }
        }
        if matches!(n.op, Op::Glue) {
            // handled above
        } else {
            for (t, cnt) in &mine {
                if *cnt > 1 {
                    rep.push(
                        n.id,
                        "duplicate-title",
                        format!("title {t:?} introduced {cnt} times without an intervening glue"),
                    );
                    // Report once per title at the lowest node where it trips.
                }
            }
            for cnt in mine.values_mut() {
                if *cnt > 1 {
                    *cnt = 1;
                }
            }
        }
        mine
    }

    walk(&e.root, e, &mut rep);
    dup_check(&e.root, &mut rep);
    rep
}

/// Evaluate a validated expression to its labeled graph.
pub fn evaluate(e: &Expression) -> Result<LabeledGraph, ExprError> {
    let rep = validate(e);
    if !rep.is_empty() {
        return Err(ExprError::Invalid(rep));
    }
    Ok(evaluate_node(&e.root, e.k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expression;
    use crate::graph::graphs_equal;

    fn eval(text: &str, dialect: Dialect) -> LabeledGraph {
        evaluate(&parse_expression(text, dialect).unwrap()).unwrap()
    }

    #[test]
    fn fuse_single_pair() {
        let g = eval("f1((a<1> + b<1>))", Dialect::Fuse);
        assert_eq!(g.vertex_count(), 1);
        assert!(g.has_vertex("a"));
        assert_eq!(g.label_of("a"), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn join_semantics() {
        let g = eval("j1,2((a<1> + b<2>))", Dialect::Clique);
        assert!(g.has_edge("a", "b"));
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn fuse_merges_neighborhoods() {
        // Both a and c carry label 1 at the join, so edges {a,b},{c,b} exist;
        // the fuse merges a,c into "a" leaving the single edge {a,b}.
        let g = eval("f1(j1,2((a<1> + b<2>) + c<1>))", Dialect::Fuse);
        assert_eq!(g.vertex_count(), 2);
        assert!(g.has_vertex("a") && g.has_vertex("b"));
        assert!(g.has_edge("a", "b"));
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.label_of("a"), 1);
        assert_eq!(g.label_of("b"), 2);
    }

    #[test]
    fn glue_is_union_of_graphs() {
        let g = eval("(j1,2((a<1> + v<2>)) ~ j2,3((v<2> + b<3>)))", Dialect::Glue);
        assert_eq!(g.vertex_count(), 3);
        assert!(g.has_edge("a", "v"));
        assert!(g.has_edge("v", "b"));
        assert!(!g.has_edge("a", "b"));
    }

    #[test]
    fn glue_shared_title_fuses() {
        let g = eval("(a<1> ~ a<1>)", Dialect::Glue);
        assert_eq!(g.vertex_count(), 1);
    }

    #[test]
    fn relabel_set_semantics() {
        let g = eval("r1->{2,3}(a<1,4>)", Dialect::Multi);
        assert_eq!(g.labels_of("a").unwrap(), &BTreeSet::from([2, 3, 4]));
        let g = eval("r1->{}(a<1>)", Dialect::Multi);
        assert!(g.labels_of("a").unwrap().is_empty());
    }

    #[test]
    fn validate_examples() {
        // Glueable, no shared titles: report is empty.
        let e = parse_expression("(a<1> ~ b<1>)", Dialect::Glue).unwrap();
        assert!(validate(&e).is_empty());

        // Left side has two label-1 vertices while a is shared.
        let e = parse_expression("((a<1> ~ b<1>) ~ a<1>)", Dialect::Glue).unwrap();
        let rep = validate(&e);
        assert!(rep.violations.iter().any(|v| v.rule == "glueability"), "{rep}");

        // Multi-join admissibility.
        let e = parse_expression("j1,2(a<1,2>)", Dialect::Multi).unwrap();
        let rep = validate(&e);
        assert!(rep.violations.iter().any(|v| v.rule == "join-admissibility"));

        // Fuse on empty class.
        let e = parse_expression("f2(a<1>)", Dialect::Fuse).unwrap();
        let rep = validate(&e);
        assert!(rep.violations.iter().any(|v| v.rule == "fuse-empty-class"));

        // Duplicate title under a union.
        let e = parse_expression("(a<1> + a<2>)", Dialect::Clique).unwrap();
        let rep = validate(&e);
        assert!(rep.violations.iter().any(|v| v.rule == "union-titles" || v.rule == "duplicate-title"));
    }

    #[test]
    fn join_idempotent() {
        let g1 = eval("j1,2((a<1> + b<2>))", Dialect::Clique);
        let g2 = eval("j1,2(j1,2((a<1> + b<2>)))", Dialect::Clique);
        assert!(graphs_equal(&g1, &g2));
    }

    #[test]
    fn glue_subgraph_property() {
        // For glue dialect every node graph is a subgraph of the root graph.
        let e = parse_expression(
            "j1,3((j1,2((a<1> + v<2>)) ~ r3->2(j2,3((v<2> + b<3>)))))",
            Dialect::Glue,
        )
        .unwrap();
        assert!(validate(&e).is_empty());
        let graphs = node_graphs(&e);
        let root = &graphs[&e.root.id];
        for g in graphs.values() {
            for t in g.titles() {
                assert!(root.has_vertex(t));
            }
            for (a, b) in g.edges() {
                assert!(root.has_edge(a, b));
            }
        }
    }
}
