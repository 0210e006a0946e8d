//! Seeded random expression generators. Generation is bottom-up and
//! rejection-free: parameters are drawn against the already-built child
//! graphs so every emitted expression passes validation.

use std::collections::BTreeSet;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::expr::{validate, Dialect, Expression, Node, NodeId, Op, RelabelTarget};
use crate::expr::evaluate_node;
use crate::graph::{Label, LabeledGraph};

#[derive(Debug, Clone, Copy)]
pub struct Weights {
    pub union: f64,
    pub join: f64,
    pub relabel: f64,
    pub fuse: f64,
    pub glue: f64,
    /// Weight of the empty target when drawing a relabel-set target (multi).
    pub relabel_empty: f64,
}

impl Default for Weights {
    fn default() -> Self {
        Weights { union: 1.0, join: 1.0, relabel: 1.0, fuse: 1.0, glue: 1.0, relabel_empty: 0.25 }
    }
}

#[derive(Debug, Clone)]
pub struct GenConfig {
    pub dialect: Dialect,
    pub k: Label,
    pub ops: usize,
    pub seed: u64,
    pub weights: Weights,
}

impl GenConfig {
    pub fn new(dialect: Dialect, k: Label, ops: usize, seed: u64) -> Self {
        assert!(k >= 1 && ops >= 1);
        GenConfig { dialect, k, ops, seed, weights: Weights::default() }
    }
}

struct Gen {
    cfg: GenConfig,
    rng: ChaCha8Rng,
    next_title: usize,
    next_id: u32,
}

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    Union,
    Join,
    Relabel,
    Fuse,
    Glue,
}

impl Gen {
    fn fresh_title(&mut self) -> String {
        let t = format!("v{}", self.next_title);
        self.next_title += 1;
        t
    }

    fn node(&mut self, op: Op, children: Vec<Node>) -> Node {
        let id = NodeId(self.next_id);
        self.next_id += 1;
        Node { id, op, children }
    }

    fn intro_labels(&mut self) -> BTreeSet<Label> {
        let k = self.cfg.k;
        if self.cfg.dialect == Dialect::Multi {
            // Biased towards small nonempty label sets.
            let size = 1 + (self.rng.gen::<f64>() * self.rng.gen::<f64>() * k as f64) as usize;
            let size = size.min(k as usize);
            let mut set = BTreeSet::new();
            while set.len() < size {
                set.insert(self.rng.gen_range(1..=k));
            }
            set
        } else {
            BTreeSet::from([self.rng.gen_range(1..=k)])
        }
    }

    fn introduce(&mut self) -> (Node, LabeledGraph) {
        let title = self.fresh_title();
        let labels = self.intro_labels();
        let node = self.node(Op::Introduce { title, labels }, vec![]);
        let g = evaluate_node(&node, self.cfg.k);
        (node, g)
    }

    fn pick_kind(&mut self, budget: usize) -> Kind {
        let w = self.cfg.weights;
        let mut options: Vec<(Kind, f64)> = Vec::new();
        let binary_ok = budget >= 3;
        match self.cfg.dialect {
            Dialect::Clique => {
                if binary_ok {
                    options.push((Kind::Union, w.union));
                }
                options.push((Kind::Join, w.join));
                options.push((Kind::Relabel, w.relabel));
            }
            Dialect::Fuse => {
                if binary_ok {
                    options.push((Kind::Union, w.union));
                }
                options.push((Kind::Join, w.join));
                options.push((Kind::Relabel, w.relabel));
                options.push((Kind::Fuse, w.fuse));
            }
            Dialect::Glue => {
                if binary_ok {
                    options.push((Kind::Glue, w.glue));
                }
                options.push((Kind::Join, w.join));
                options.push((Kind::Relabel, w.relabel));
            }
            Dialect::Multi => {
                if binary_ok {
                    options.push((Kind::Union, w.union));
                }
                options.push((Kind::Join, w.join));
                options.push((Kind::Relabel, w.relabel));
            }
        }
        if self.cfg.k < 2 {
            options.retain(|(kind, _)| *kind != Kind::Join);
        }
        options.retain(|(_, w)| *w > 0.0);
        if options.is_empty() {
            return Kind::Relabel;
        }
        let total: f64 = options.iter().map(|(_, w)| w).sum();
        let mut pick = self.rng.gen::<f64>() * total;
        for (kind, w) in &options {
            pick -= w;
            if pick <= 0.0 {
                return *kind;
            }
        }
        options.last().unwrap().0
    }

    fn gen(&mut self, budget: usize) -> (Node, LabeledGraph) {
        if budget <= 1 {
            return self.introduce();
        }
        let kind = self.pick_kind(budget);
        match kind {
            Kind::Union => {
                let left_budget = 1 + self.rng.gen_range(0..budget - 2);
                let (l, lg) = self.gen(left_budget);
                let (r, rg) = self.gen(budget - 1 - left_budget);
                let node = self.node(Op::Union, vec![l, r]);
                let g = evaluate_node(&node, self.cfg.k);
                debug_assert_eq!(g.vertex_count(), lg.vertex_count() + rg.vertex_count());
                (node, g)
            }
            Kind::Glue => {
                let left_budget = 1 + self.rng.gen_range(0..budget - 2);
                let (l, lg) = self.gen(left_budget);
                let (mut r, rg) = self.gen(budget - 1 - left_budget);
                // Identify uniquely-labeled vertices across the two sides so
                // glueability holds by construction.
                let mut renames: Vec<(String, String)> = Vec::new();
                for label in 1..=self.cfg.k {
                    let lc = lg.class(label);
                    let rc = rg.class(label);
                    if lc.len() == 1 && rc.len() == 1 && self.rng.gen_bool(0.5) {
                        let from = rc.iter().next().unwrap().clone();
                        let to = lc.iter().next().unwrap().clone();
                        if from != to {
                            renames.push((from, to));
                        }
                    }
                }
                for (from, to) in renames {
                    rename_title(&mut r, &from, &to);
                }
                let node = self.node(Op::Glue, vec![l, r]);
                let g = evaluate_node(&node, self.cfg.k);
                (node, g)
            }
            Kind::Join => {
                let (c, cg) = self.gen(budget - 1);
                let pair = self.pick_join_pair(&cg);
                match pair {
                    Some((a, b)) => {
                        let node = self.node(Op::Join { a, b }, vec![c]);
                        let g = evaluate_node(&node, self.cfg.k);
                        (node, g)
                    }
                    None => (c, cg),
                }
            }
            Kind::Relabel => {
                let (c, cg) = self.gen(budget - 1);
                let nonempty: Vec<Label> =
                    (1..=self.cfg.k).filter(|&l| cg.class_size(l) > 0).collect();
                let from = if nonempty.is_empty() {
                    self.rng.gen_range(1..=self.cfg.k)
                } else {
                    nonempty[self.rng.gen_range(0..nonempty.len())]
                };
                let to = if self.cfg.dialect == Dialect::Multi {
                    let w = self.cfg.weights;
                    if self.rng.gen::<f64>() < w.relabel_empty {
                        RelabelTarget::Set(BTreeSet::new())
                    } else {
                        let mut set = BTreeSet::new();
                        let size = 1 + self.rng.gen_range(0..self.cfg.k) as usize;
                        while set.len() < size.min(self.cfg.k as usize) {
                            set.insert(self.rng.gen_range(1..=self.cfg.k));
                        }
                        RelabelTarget::Set(set)
                    }
                } else {
                    if self.cfg.k < 2 {
                        return (c, cg);
                    }
                    let mut j = self.rng.gen_range(1..=self.cfg.k);
                    while j == from {
                        j = self.rng.gen_range(1..=self.cfg.k);
                    }
                    RelabelTarget::Single(j)
                };
                let node = self.node(Op::Relabel { from, to }, vec![c]);
                let g = evaluate_node(&node, self.cfg.k);
                (node, g)
            }
            Kind::Fuse => {
                let (c, cg) = self.gen(budget - 1);
                // Prefer classes that actually fuse something.
                let rich: Vec<Label> =
                    (1..=self.cfg.k).filter(|&l| cg.class_size(l) >= 2).collect();
                let nonempty: Vec<Label> =
                    (1..=self.cfg.k).filter(|&l| cg.class_size(l) >= 1).collect();
                let label = if !rich.is_empty() && self.rng.gen_bool(0.8) {
                    rich[self.rng.gen_range(0..rich.len())]
                } else {
                    nonempty[self.rng.gen_range(0..nonempty.len())]
                };
                let node = self.node(Op::Fuse { label }, vec![c]);
                let g = evaluate_node(&node, self.cfg.k);
                (node, g)
            }
        }
    }

    fn pick_join_pair(&mut self, g: &LabeledGraph) -> Option<(Label, Label)> {
        if self.cfg.k < 2 {
            return None;
        }
        let mut candidates = Vec::new();
        for a in 1..=self.cfg.k {
            for b in 1..=self.cfg.k {
                if a == b {
                    continue;
                }
                if self.cfg.dialect == Dialect::Multi {
                    let admissible =
                        g.vertices().all(|(_, ls)| !(ls.contains(&a) && ls.contains(&b)));
                    if !admissible {
                        continue;
                    }
                }
                // Joins between nonempty classes make denser instances.
                let score = if g.class_size(a) > 0 && g.class_size(b) > 0 { 4 } else { 1 };
                candidates.push(((a, b), score));
            }
        }
        if candidates.is_empty() {
            return None;
        }
        let total: u32 = candidates.iter().map(|(_, s)| s).sum();
        let mut pick = self.rng.gen_range(0..total);
        for ((a, b), s) in candidates {
            if pick < s {
                return Some((a, b));
            }
            pick -= s;
        }
        None
    }
}

fn rename_title(node: &mut Node, from: &str, to: &str) {
    if let Op::Introduce { title, .. } = &mut node.op {
        if title == from {
            *title = to.to_string();
        }
    }
    for c in &mut node.children {
        rename_title(c, from, to);
    }
}

/// Deterministically generate a valid expression of the requested dialect.
pub fn gen_expression(cfg: &GenConfig) -> Expression {
    let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut g = Gen { cfg: cfg.clone(), rng, next_title: 0, next_id: 0 };
    let (root, _) = g.gen(cfg.ops);
    let e = Expression::new(cfg.dialect, cfg.k, root);
    debug_assert!(
        validate(&e).is_empty(),
        "generator produced an invalid expression (seed {}):\n{}",
        cfg.seed,
        validate(&e)
    );
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{evaluate, serialize_expression};

    #[test]
    fn generated_expressions_validate_and_evaluate() {
        for dialect in [Dialect::Clique, Dialect::Fuse, Dialect::Glue, Dialect::Multi] {
            for seed in 0..40 {
                let cfg = GenConfig::new(dialect, 1 + (seed % 4) as Label, 3 + (seed % 20) as usize, seed);
                let e = gen_expression(&cfg);
                assert!(validate(&e).is_empty(), "dialect {dialect:?} seed {seed}");
                let g = evaluate(&e).unwrap();
                assert!(g.vertex_count() >= 1);
            }
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let cfg = GenConfig::new(Dialect::Fuse, 3, 20, 7);
        let a = serialize_expression(&gen_expression(&cfg));
        let b = serialize_expression(&gen_expression(&cfg));
        assert_eq!(a, b);
    }

    #[test]
    fn budget_one_is_single_introduce() {
        let cfg = GenConfig::new(Dialect::Fuse, 3, 1, 11);
        let e = gen_expression(&cfg);
        assert_eq!(e.node_count(), 1);
    }

    #[test]
    fn multi_without_empty_relabels_keeps_labels() {
        for seed in 0..30 {
            let mut cfg = GenConfig::new(Dialect::Multi, 3, 15, seed);
            cfg.weights.relabel_empty = 0.0;
            let e = gen_expression(&cfg);
            let g = evaluate(&e).unwrap();
            for (t, ls) in g.vertices() {
                assert!(!ls.is_empty(), "seed {seed} vertex {t} lost all labels");
            }
        }
    }

    #[test]
    fn every_node_kind_appears_across_corpus() {
        use std::collections::BTreeSet;
        let mut seen: BTreeSet<&'static str> = BTreeSet::new();
        for seed in 0..60 {
            let cfg = GenConfig::new(Dialect::Fuse, 3, 20, seed);
            for n in gen_expression(&cfg).nodes_post_order() {
                seen.insert(n.op.name());
            }
            let cfg = GenConfig::new(Dialect::Glue, 3, 20, seed);
            for n in gen_expression(&cfg).nodes_post_order() {
                seen.insert(n.op.name());
            }
            let cfg = GenConfig::new(Dialect::Multi, 3, 20, seed);
            for n in gen_expression(&cfg).nodes_post_order() {
                seen.insert(n.op.name());
            }
        }
        for kind in ["introduce", "union", "join", "relabel-single", "relabel-set", "fuse", "glue"] {
            assert!(seen.contains(kind), "kind {kind} never generated");
        }
    }
}
