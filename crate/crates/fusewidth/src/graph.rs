//! Labeled graphs: titled vertices carrying label sets, simple undirected edges.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

pub type Label = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("label {0} out of range 1..={1}")]
    LabelOutOfRange(Label, Label),
    #[error("edge endpoint {0:?} is not a vertex")]
    MissingEndpoint(String),
    #[error("self-loop at {0:?}")]
    SelfLoop(String),
    #[error("malformed graph text at line {0}: {1}")]
    Parse(usize, String),
}

/// A k-labeled graph. Vertices are identified by opaque string titles; each
/// vertex carries a set of labels from 1..=k (singleton sets in the
/// single-label dialects, possibly empty sets in the multi dialect).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LabeledGraph {
    pub k: Label,
    vertices: BTreeMap<String, BTreeSet<Label>>,
    edges: BTreeSet<(String, String)>,
}

fn ordered(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

impl LabeledGraph {
    pub fn new(k: Label) -> Self {
        LabeledGraph { k, vertices: BTreeMap::new(), edges: BTreeSet::new() }
    }

    pub fn add_vertex(&mut self, title: &str, labels: BTreeSet<Label>) -> Result<(), GraphError> {
        for &l in &labels {
            if l < 1 || l > self.k {
                return Err(GraphError::LabelOutOfRange(l, self.k));
            }
        }
        self.vertices.insert(title.to_string(), labels);
        Ok(())
    }

    pub fn add_edge(&mut self, a: &str, b: &str) -> Result<(), GraphError> {
        if a == b {
            return Err(GraphError::SelfLoop(a.to_string()));
        }
        for t in [a, b] {
            if !self.vertices.contains_key(t) {
                return Err(GraphError::MissingEndpoint(t.to_string()));
            }
        }
        self.edges.insert(ordered(a, b));
        Ok(())
    }

    pub fn remove_vertex(&mut self, title: &str) {
        self.vertices.remove(title);
        self.edges.retain(|(a, b)| a != title && b != title);
    }

    pub fn has_vertex(&self, title: &str) -> bool {
        self.vertices.contains_key(title)
    }

    pub fn has_edge(&self, a: &str, b: &str) -> bool {
        self.edges.contains(&ordered(a, b))
    }

    pub fn labels_of(&self, title: &str) -> Option<&BTreeSet<Label>> {
        self.vertices.get(title)
    }

    /// The unique label of a vertex in a single-label graph.
    pub fn label_of(&self, title: &str) -> Label {
        let ls = &self.vertices[title];
        debug_assert_eq!(ls.len(), 1, "vertex {title:?} is not singly labeled");
        *ls.iter().next().unwrap()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn titles(&self) -> impl Iterator<Item = &str> {
        self.vertices.keys().map(|s| s.as_str())
    }

    pub fn title_set(&self) -> BTreeSet<String> {
        self.vertices.keys().cloned().collect()
    }

    pub fn vertices(&self) -> impl Iterator<Item = (&str, &BTreeSet<Label>)> {
        self.vertices.iter().map(|(t, ls)| (t.as_str(), ls))
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.edges.iter().map(|(a, b)| (a.as_str(), b.as_str()))
    }

    pub fn edge_set(&self) -> &BTreeSet<(String, String)> {
        &self.edges
    }

    pub fn neighbors(&self, title: &str) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for (a, b) in &self.edges {
            if a == title {
                out.insert(b.clone());
            } else if b == title {
                out.insert(a.clone());
            }
        }
        out
    }

    pub fn degree(&self, title: &str) -> usize {
        self.edges.iter().filter(|(a, b)| a == title || b == title).count()
    }

    /// All titles whose label set contains `i`.
    pub fn label_class(&self, i: Label) -> Result<BTreeSet<String>, GraphError> {
        if i < 1 || i > self.k {
            return Err(GraphError::LabelOutOfRange(i, self.k));
        }
        Ok(self
            .vertices
            .iter()
            .filter(|(_, ls)| ls.contains(&i))
            .map(|(t, _)| t.clone())
            .collect())
    }

    /// Like `label_class` but without the range check; out-of-range labels
    /// simply have empty classes. Used internally by evaluators.
    pub fn class(&self, i: Label) -> BTreeSet<String> {
        self.vertices
            .iter()
            .filter(|(_, ls)| ls.contains(&i))
            .map(|(t, _)| t.clone())
            .collect()
    }

    pub fn class_size(&self, i: Label) -> usize {
        self.vertices.values().filter(|ls| ls.contains(&i)).count()
    }

    pub fn is_connected(&self) -> bool {
        let mut it = self.vertices.keys();
        let start = match it.next() {
            Some(s) => s.clone(),
            None => return true,
        };
        let mut seen = BTreeSet::new();
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            if !seen.insert(v.clone()) {
                continue;
            }
            for u in self.neighbors(&v) {
                if !seen.contains(&u) {
                    stack.push(u);
                }
            }
        }
        seen.len() == self.vertices.len()
    }

    /// Text format: header `k <int>`, then records sorted lexicographically:
    /// `e <t1> <t2>` and `v <title> <labels or ->`.
    pub fn to_text(&self) -> String {
        let mut lines: Vec<String> = Vec::new();
        for (a, b) in &self.edges {
            lines.push(format!("e {a} {b}"));
        }
        for (t, ls) in &self.vertices {
            let labels = if ls.is_empty() {
                "-".to_string()
            } else {
                ls.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",")
            };
            lines.push(format!("v {t} {labels}"));
        }
        lines.sort();
        let mut out = format!("k {}\n", self.k);
        for l in lines {
            out.push_str(&l);
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, GraphError> {
        let mut k: Option<Label> = None;
        let mut verts: Vec<(String, BTreeSet<Label>)> = Vec::new();
        let mut edges: Vec<(String, String)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let lineno = idx + 1;
            let mut parts = line.split_whitespace();
            match parts.next() {
                Some("k") => {
                    let v = parts
                        .next()
                        .ok_or_else(|| GraphError::Parse(lineno, "missing k value".into()))?;
                    k = Some(
                        v.parse()
                            .map_err(|_| GraphError::Parse(lineno, format!("bad k {v:?}")))?,
                    );
                }
                Some("v") => {
                    let title = parts
                        .next()
                        .ok_or_else(|| GraphError::Parse(lineno, "missing title".into()))?;
                    let labels = parts
                        .next()
                        .ok_or_else(|| GraphError::Parse(lineno, "missing labels".into()))?;
                    let set: BTreeSet<Label> = if labels == "-" {
                        BTreeSet::new()
                    } else {
                        labels
                            .split(',')
                            .map(|s| {
                                s.parse().map_err(|_| {
                                    GraphError::Parse(lineno, format!("bad label {s:?}"))
                                })
                            })
                            .collect::<Result<_, _>>()?
                    };
                    verts.push((title.to_string(), set));
                }
                Some("e") => {
                    let a = parts
                        .next()
                        .ok_or_else(|| GraphError::Parse(lineno, "missing endpoint".into()))?;
                    let b = parts
                        .next()
                        .ok_or_else(|| GraphError::Parse(lineno, "missing endpoint".into()))?;
                    edges.push((a.to_string(), b.to_string()));
                }
                Some(other) => {
                    return Err(GraphError::Parse(lineno, format!("unknown record {other:?}")));
                }
                None => unreachable!(),
            }
        }
        let k = k.ok_or_else(|| GraphError::Parse(0, "missing `k` header".into()))?;
        let mut g = LabeledGraph::new(k);
        for (t, ls) in verts {
            g.add_vertex(&t, ls)?;
        }
        for (a, b) in edges {
            g.add_edge(&a, &b)?;
        }
        Ok(g)
    }
}

impl fmt::Display for LabeledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Title-exact equality of vertex sets, per-title label sets, and edge sets.
pub fn graphs_equal(g1: &LabeledGraph, g2: &LabeledGraph) -> bool {
    g1.vertices == g2.vertices && g1.edges == g2.edges
}

/// Equality of titled vertex sets and edge sets, ignoring labels (and k).
pub fn graphs_equal_unlabeled(g1: &LabeledGraph, g2: &LabeledGraph) -> bool {
    g1.title_set() == g2.title_set() && g1.edges == g2.edges
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(title: &str, label: Label) -> LabeledGraph {
        let mut g = LabeledGraph::new(4);
        g.add_vertex(title, BTreeSet::from([label])).unwrap();
        g
    }

    #[test]
    fn equality_examples() {
        let g = single("a", 1);
        assert!(graphs_equal(&g, &g));
        assert!(!graphs_equal(&single("a", 1), &single("a", 2)));

        let mut tri = LabeledGraph::new(1);
        let mut path = LabeledGraph::new(1);
        for t in ["a", "b", "c"] {
            tri.add_vertex(t, BTreeSet::from([1])).unwrap();
            path.add_vertex(t, BTreeSet::from([1])).unwrap();
        }
        tri.add_edge("a", "b").unwrap();
        tri.add_edge("b", "c").unwrap();
        tri.add_edge("a", "c").unwrap();
        path.add_edge("a", "b").unwrap();
        path.add_edge("b", "c").unwrap();
        assert!(!graphs_equal(&tri, &path));
    }

    #[test]
    fn label_class_examples() {
        let g = LabeledGraph::new(2);
        assert_eq!(g.label_class(1).unwrap(), BTreeSet::new());

        let mut g = LabeledGraph::new(2);
        g.add_vertex("a", BTreeSet::from([1, 2])).unwrap();
        g.add_vertex("b", BTreeSet::from([2])).unwrap();
        assert_eq!(
            g.label_class(2).unwrap(),
            BTreeSet::from(["a".to_string(), "b".to_string()])
        );

        let mut g = LabeledGraph::new(2);
        g.add_vertex("a", BTreeSet::from([1])).unwrap();
        g.add_vertex("b", BTreeSet::from([1])).unwrap();
        assert_eq!(g.label_class(2).unwrap(), BTreeSet::new());
        assert!(g.label_class(3).is_err());
    }

    #[test]
    fn edge_invariants() {
        let mut g = single("a", 1);
        assert_eq!(g.add_edge("a", "a"), Err(GraphError::SelfLoop("a".into())));
        assert_eq!(
            g.add_edge("a", "z"),
            Err(GraphError::MissingEndpoint("z".into()))
        );
        g.add_vertex("b", BTreeSet::from([2])).unwrap();
        g.add_edge("a", "b").unwrap();
        g.add_edge("b", "a").unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn text_round_trip() {
        let mut g = LabeledGraph::new(3);
        g.add_vertex("a", BTreeSet::from([1, 3])).unwrap();
        g.add_vertex("b", BTreeSet::new()).unwrap();
        g.add_vertex("c", BTreeSet::from([2])).unwrap();
        g.add_edge("c", "a").unwrap();
        let text = g.to_text();
        let back = LabeledGraph::from_text(&text).unwrap();
        assert!(graphs_equal(&g, &back));
        assert_eq!(text, back.to_text());
        assert_eq!(text, "k 3\ne a c\nv a 1,3\nv b -\nv c 2\n");
    }
}
