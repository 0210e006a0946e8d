//! Path packings, auxiliary multigraphs, the packing equivalence with its
//! reduce operation, and a brute-force red-blue Eulerian trail oracle.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::graph::{Label, LabeledGraph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RepsetError {
    #[error("not a path packing: {0}")]
    NotAPacking(String),
    #[error("rb-trail oracle refuses inputs with more than {0} edges ({1} given)")]
    OracleTooLarge(usize, usize),
}

/// A path packing in a host graph: a subgraph each of whose connected
/// components is a path. Maximal packings span the host's vertex set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathPacking {
    pub vertices: BTreeSet<String>,
    pub edges: BTreeSet<(String, String)>,
}

impl PathPacking {
    pub fn singleton(title: &str) -> Self {
        PathPacking { vertices: BTreeSet::from([title.to_string()]), edges: BTreeSet::new() }
    }

    pub fn degree(&self, v: &str) -> usize {
        self.edges.iter().filter(|(a, b)| a == v || b == v).count()
    }

    fn neighbors(&self, v: &str) -> Vec<&str> {
        let mut out = Vec::new();
        for (a, b) in &self.edges {
            if a == v {
                out.push(b.as_str());
            } else if b == v {
                out.push(a.as_str());
            }
        }
        out
    }

    /// Checks max degree <= 2 and acyclicity.
    pub fn is_path_packing(&self) -> bool {
        for v in &self.vertices {
            if self.degree(v) > 2 {
                return false;
            }
        }
        for (a, b) in &self.edges {
            if !self.vertices.contains(a) || !self.vertices.contains(b) {
                return false;
            }
        }
        // Acyclic iff every component has |E| = |V| - 1.
        let comps = self.components();
        let mut edge_count = 0usize;
        for comp in &comps {
            let e = self
                .edges
                .iter()
                .filter(|(a, b)| comp.contains(a) && comp.contains(b))
                .count();
            if e + 1 != comp.len() {
                return false;
            }
            edge_count += e;
        }
        edge_count == self.edges.len()
    }

    pub fn components(&self) -> Vec<BTreeSet<String>> {
        let mut seen: BTreeSet<String> = BTreeSet::new();
        let mut out = Vec::new();
        for v in &self.vertices {
            if seen.contains(v) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut stack = vec![v.clone()];
            while let Some(u) = stack.pop() {
                if !comp.insert(u.clone()) {
                    continue;
                }
                for w in self.neighbors(&u) {
                    if !comp.contains(w) {
                        stack.push(w.to_string());
                    }
                }
            }
            seen.extend(comp.iter().cloned());
            out.push(comp);
        }
        out
    }

    /// Endpoints of each path component; a zero-length path yields the same
    /// vertex twice.
    pub fn path_endpoints(&self) -> Vec<(String, String)> {
        self.components()
            .into_iter()
            .map(|comp| {
                let ends: Vec<&String> =
                    comp.iter().filter(|v| self.degree(v) <= 1).collect();
                match ends.len() {
                    1 => (ends[0].clone(), ends[0].clone()),
                    2 => (ends[0].clone(), ends[1].clone()),
                    _ => unreachable!("component of a path packing with {} endpoints", ends.len()),
                }
            })
            .collect()
    }

    pub fn is_subgraph_of(&self, host: &LabeledGraph) -> bool {
        self.vertices.iter().all(|v| host.has_vertex(v))
            && self.edges.iter().all(|(a, b)| host.has_edge(a, b))
    }

    pub fn is_maximal_in(&self, host: &LabeledGraph) -> bool {
        self.is_subgraph_of(host)
            && self.is_path_packing()
            && self.vertices == host.title_set()
    }
}

/// Label-level shadow of a path packing: one edge per path between its
/// endpoint labels; loops for same-label or zero-length paths.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct AuxMultigraph {
    pub k: Label,
    /// Multiplicity per unordered label pair (i, j) with i <= j; (i, i) is a loop.
    pub edges: BTreeMap<(Label, Label), usize>,
}

impl AuxMultigraph {
    pub fn new(k: Label) -> Self {
        AuxMultigraph { k, edges: BTreeMap::new() }
    }

    pub fn add_edge(&mut self, i: Label, j: Label) {
        let key = if i <= j { (i, j) } else { (j, i) };
        *self.edges.entry(key).or_insert(0) += 1;
    }

    pub fn edge_count(&self) -> usize {
        self.edges.values().sum()
    }

    /// Loops contribute 2 to their endpoint's degree.
    pub fn degree(&self, i: Label) -> usize {
        let mut d = 0;
        for (&(a, b), &m) in &self.edges {
            if a == i && b == i {
                d += 2 * m;
            } else if a == i || b == i {
                d += m;
            }
        }
        d
    }

    pub fn degree_vector(&self) -> Vec<usize> {
        (1..=self.k).map(|i| self.degree(i)).collect()
    }

    /// Connected components as a partition of 1..=k; isolated label vertices
    /// form singleton components.
    pub fn component_partition(&self) -> BTreeSet<BTreeSet<Label>> {
        let mut adj: BTreeMap<Label, BTreeSet<Label>> = BTreeMap::new();
        for &(a, b) in self.edges.keys() {
            adj.entry(a).or_default().insert(b);
            adj.entry(b).or_default().insert(a);
        }
        let mut seen: BTreeSet<Label> = BTreeSet::new();
        let mut parts = BTreeSet::new();
        for i in 1..=self.k {
            if seen.contains(&i) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut stack = vec![i];
            while let Some(v) = stack.pop() {
                if !comp.insert(v) {
                    continue;
                }
                if let Some(ns) = adj.get(&v) {
                    for &w in ns {
                        if !comp.contains(&w) {
                            stack.push(w);
                        }
                    }
                }
            }
            seen.extend(comp.iter().copied());
            parts.insert(comp);
        }
        parts
    }

    pub fn disjoint_union(&self, other: &AuxMultigraph) -> AuxMultigraph {
        let mut out = self.clone();
        out.k = out.k.max(other.k);
        for (&e, &m) in &other.edges {
            *out.edges.entry(e).or_insert(0) += m;
        }
        out
    }

    /// Sorted edge list with multiplicities, for debugging output.
    pub fn dump(&self) -> String {
        self.edges
            .iter()
            .map(|(&(a, b), &m)| format!("{{{a},{b}}}x{m}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Build the auxiliary multigraph of a path packing under the host labeling.
/// Hosts must be singly labeled.
pub fn aux_multigraph(g: &LabeledGraph, p: &PathPacking) -> Result<AuxMultigraph, RepsetError> {
    if !p.is_path_packing() {
        return Err(RepsetError::NotAPacking("components are not all paths".into()));
    }
    if !p.is_subgraph_of(g) {
        return Err(RepsetError::NotAPacking("not a subgraph of the host".into()));
    }
    let mut aux = AuxMultigraph::new(g.k);
    for (u, v) in p.path_endpoints() {
        aux.add_edge(g.label_of(&u), g.label_of(&v));
    }
    Ok(aux)
}

/// The packing equivalence: equal aux degrees at every label and equal
/// component partitions of the aux multigraphs.
pub fn packings_equivalent(p1: &PathPacking, p2: &PathPacking, g: &LabeledGraph) -> bool {
    let a1 = aux_multigraph(g, p1).expect("p1 must be a packing of g");
    let a2 = aux_multigraph(g, p2).expect("p2 must be a packing of g");
    a1.degree_vector() == a2.degree_vector()
        && a1.component_partition() == a2.component_partition()
}

pub type PackingFamily = BTreeSet<PathPacking>;

/// Size bound kept by `reduce_family`: n^k * 2^(k (log2 k + 1)).
pub fn reduce_bound(n: usize, k: Label) -> f64 {
    let k = k as f64;
    (n as f64).powf(k) * 2f64.powf(k * ((k.max(1.0)).log2() + 1.0))
}

/// One representative per equivalence class: the lexicographically least
/// edge set.
pub fn reduce_family(family: &PackingFamily, g: &LabeledGraph) -> PackingFamily {
    let mut classes: BTreeMap<(Vec<usize>, BTreeSet<BTreeSet<Label>>), PathPacking> =
        BTreeMap::new();
    for p in family {
        let aux = aux_multigraph(g, p).expect("family member must be a packing of g");
        let key = (aux.degree_vector(), aux.component_partition());
        match classes.get(&key) {
            Some(best) if (&best.edges, &best.vertices) <= (&p.edges, &p.vertices) => {}
            _ => {
                classes.insert(key, p.clone());
            }
        }
    }
    classes.into_values().collect()
}

const RB_EDGE_GUARD: usize = 12;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Color {
    Red,
    Blue,
}

/// Exact red-blue Eulerian trail decision by exhaustive alternating-walk
/// search with memoization. A closed walk must contain each edge exactly once
/// with colors alternating cyclically. Test oracle only; hard size guard.
pub fn rb_trail_exists(red: &AuxMultigraph, blue: &AuxMultigraph) -> Result<bool, RepsetError> {
    let total = red.edge_count() + blue.edge_count();
    if total > RB_EDGE_GUARD {
        return Err(RepsetError::OracleTooLarge(RB_EDGE_GUARD, total));
    }
    if red.edge_count() != blue.edge_count() {
        // Cyclic alternation forces equal counts (Kotzig's parity condition
        // per color follows as well).
        return Ok(false);
    }
    if red.edge_count() == 0 {
        return Ok(true);
    }
    // Edge list indexed; multiset state as remaining-count vector.
    let mut edges: Vec<(Label, Label, Color)> = Vec::new();
    let mut counts: Vec<usize> = Vec::new();
    for (&(a, b), &m) in &red.edges {
        edges.push((a, b, Color::Red));
        counts.push(m);
    }
    for (&(a, b), &m) in &blue.edges {
        edges.push((a, b, Color::Blue));
        counts.push(m);
    }

    // The trail is rotated to start with a red edge at its smallest incident
    // vertex.
    let start = red.edges.keys().map(|&(a, b)| a.min(b)).min().unwrap();

    struct Search {
        edges: Vec<(Label, Label, Color)>,
        start: Label,
        memo: HashMap<(Label, bool, Vec<usize>), bool>,
    }

    impl Search {
        fn go(&mut self, at: Label, next_red: bool, counts: &mut Vec<usize>) -> bool {
            if counts.iter().all(|&c| c == 0) {
                return at == self.start;
            }
            let key = (at, next_red, counts.clone());
            if let Some(&v) = self.memo.get(&key) {
                return v;
            }
            let want = if next_red { Color::Red } else { Color::Blue };
            let mut found = false;
            for idx in 0..self.edges.len() {
                if counts[idx] == 0 {
                    continue;
                }
                let (a, b, c) = self.edges[idx];
                if c != want {
                    continue;
                }
                let to = if a == at {
                    b
                } else if b == at {
                    a
                } else {
                    continue;
                };
                counts[idx] -= 1;
                if self.go(to, !next_red, counts) {
                    found = true;
                }
                counts[idx] += 1;
                if found {
                    break;
                }
            }
            self.memo.insert(key, found);
            found
        }
    }

    let mut s = Search { edges, start, memo: HashMap::new() };
    Ok(s.go(start, true, &mut counts))
}

/// Glue two packings from glueable edge-disjoint hosts: union of vertex and
/// edge sets if the result is still a path packing.
pub fn glue_packings(p1: &PathPacking, p2: &PathPacking) -> Option<PathPacking> {
    let mut vertices = p1.vertices.clone();
    vertices.extend(p2.vertices.iter().cloned());
    let mut edges = p1.edges.clone();
    edges.extend(p2.edges.iter().cloned());
    let glued = PathPacking { vertices, edges };
    if glued.is_path_packing() {
        Some(glued)
    } else {
        None
    }
}

/// All maximal path packings of a host graph, by exhaustive edge search.
pub fn all_maximal_packings(g: &LabeledGraph) -> PackingFamily {
    let edges: Vec<(String, String)> =
        g.edges().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    let vertices = g.title_set();
    let mut out = PackingFamily::new();
    fn rec(
        idx: usize,
        edges: &[(String, String)],
        current: &mut PathPacking,
        out: &mut PackingFamily,
    ) {
        if idx == edges.len() {
            out.insert(current.clone());
            return;
        }
        // skip edge idx
        rec(idx + 1, edges, current, out);
        // take edge idx if it keeps the packing valid
        let (a, b) = &edges[idx];
        if current.degree(a) < 2 && current.degree(b) < 2 {
            current.edges.insert((a.clone(), b.clone()));
            if current.is_path_packing() {
                rec(idx + 1, edges, current, out);
            }
            current.edges.remove(&(a.clone(), b.clone()));
        }
    }
    let mut current = PathPacking { vertices, edges: BTreeSet::new() };
    rec(0, &edges, &mut current, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn labeled(verts: &[(&str, Label)], edges: &[(&str, &str)], k: Label) -> LabeledGraph {
        let mut g = LabeledGraph::new(k);
        for (t, l) in verts {
            g.add_vertex(t, BTreeSet::from([*l])).unwrap();
        }
        for (a, b) in edges {
            g.add_edge(a, b).unwrap();
        }
        g
    }

    fn packing(verts: &[&str], edges: &[(&str, &str)]) -> PathPacking {
        PathPacking {
            vertices: verts.iter().map(|s| s.to_string()).collect(),
            edges: edges
                .iter()
                .map(|(a, b)| {
                    if a <= b {
                        (a.to_string(), b.to_string())
                    } else {
                        (b.to_string(), a.to_string())
                    }
                })
                .collect(),
        }
    }

    #[test]
    fn aux_examples() {
        // Single vertex of label 3: loop at 3.
        let g = labeled(&[("a", 3)], &[], 3);
        let aux = aux_multigraph(&g, &packing(&["a"], &[])).unwrap();
        assert_eq!(aux.edges, BTreeMap::from([((3, 3), 1)]));
        assert_eq!(aux.degree(3), 2);

        // Path a(1)-b(2)-c(1): loop at 1.
        let g = labeled(&[("a", 1), ("b", 2), ("c", 1)], &[("a", "b"), ("b", "c")], 2);
        let aux = aux_multigraph(&g, &packing(&["a", "b", "c"], &[("a", "b"), ("b", "c")])).unwrap();
        assert_eq!(aux.edges, BTreeMap::from([((1, 1), 1)]));

        // Two disjoint edges labeled (1,2) and (2,3).
        let g = labeled(
            &[("a", 1), ("b", 2), ("c", 2), ("d", 3)],
            &[("a", "b"), ("c", "d")],
            3,
        );
        let aux =
            aux_multigraph(&g, &packing(&["a", "b", "c", "d"], &[("a", "b"), ("c", "d")])).unwrap();
        assert_eq!(aux.edges, BTreeMap::from([((1, 2), 1), ((2, 3), 1)]));
    }

    #[test]
    fn aux_rejects_non_packing() {
        let g = labeled(
            &[("a", 1), ("b", 1), ("c", 1)],
            &[("a", "b"), ("b", "c"), ("a", "c")],
            1,
        );
        let p = packing(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("a", "c")]);
        assert!(aux_multigraph(&g, &p).is_err());
    }

    #[test]
    fn degree_law() {
        // For a uniquely-labeled vertex v: deg_aux(lab(v)) = 2 - deg_packing(v).
        let g = labeled(&[("a", 1), ("b", 2), ("c", 3)], &[("a", "b"), ("b", "c")], 3);
        for p in all_maximal_packings(&g) {
            let aux = aux_multigraph(&g, &p).unwrap();
            for v in ["a", "b", "c"] {
                assert_eq!(aux.degree(g.label_of(v)), 2 - p.degree(v));
            }
        }
    }

    #[test]
    fn equivalence_examples() {
        let g = labeled(
            &[("a", 1), ("b", 2), ("c", 1), ("d", 2)],
            &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")],
            2,
        );
        let all = all_maximal_packings(&g);
        for p in &all {
            assert!(packings_equivalent(p, p, &g));
        }
        // Two maximal packings of C4 with the same endpoint-label profile.
        let p1 = packing(&["a", "b", "c", "d"], &[("a", "b"), ("c", "d")]);
        let p2 = packing(&["a", "b", "c", "d"], &[("b", "c"), ("d", "a")]);
        assert!(packings_equivalent(&p1, &p2, &g));
        // Degree clause: empty packing vs perfect matching differ at label 1.
        let p3 = packing(&["a", "b", "c", "d"], &[]);
        assert!(!packings_equivalent(&p1, &p3, &g));
    }

    #[test]
    fn reduce_family_examples() {
        let g = labeled(
            &[("a", 1), ("b", 2), ("c", 1), ("d", 2)],
            &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")],
            2,
        );
        let p1 = packing(&["a", "b", "c", "d"], &[("a", "b"), ("c", "d")]);
        let p2 = packing(&["a", "b", "c", "d"], &[("b", "c"), ("d", "a")]);
        let fam: PackingFamily = [p1.clone(), p2].into_iter().collect();
        let red = reduce_family(&fam, &g);
        assert_eq!(red.len(), 1);
        // Deterministic representative: lexicographically least edge set.
        assert_eq!(red.first().unwrap(), &p1);

        assert!(reduce_family(&PackingFamily::new(), &g).is_empty());

        // P4: class count matches brute-force grouping.
        let g = labeled(
            &[("a", 1), ("b", 2), ("c", 1), ("d", 2)],
            &[("a", "b"), ("b", "c"), ("c", "d")],
            2,
        );
        let all = all_maximal_packings(&g);
        let red = reduce_family(&all, &g);
        let mut classes: BTreeSet<(Vec<usize>, BTreeSet<BTreeSet<Label>>)> = BTreeSet::new();
        for p in &all {
            let aux = aux_multigraph(&g, p).unwrap();
            classes.insert((aux.degree_vector(), aux.component_partition()));
        }
        assert_eq!(red.len(), classes.len());
        assert!((red.len() as f64) <= reduce_bound(4, 2));
    }

    #[test]
    fn rb_trail_examples() {
        let mut red = AuxMultigraph::new(2);
        red.add_edge(1, 2);
        let mut blue = AuxMultigraph::new(2);
        blue.add_edge(1, 2);
        assert!(rb_trail_exists(&red, &blue).unwrap());

        let mut red = AuxMultigraph::new(1);
        red.add_edge(1, 1);
        let mut blue = AuxMultigraph::new(1);
        blue.add_edge(1, 1);
        assert!(rb_trail_exists(&red, &blue).unwrap());

        let mut red = AuxMultigraph::new(2);
        red.add_edge(1, 2);
        let blue = AuxMultigraph::new(2);
        assert!(!rb_trail_exists(&red, &blue).unwrap());

        let empty = AuxMultigraph::new(2);
        assert!(rb_trail_exists(&empty, &empty).unwrap());

        let mut big = AuxMultigraph::new(2);
        for _ in 0..13 {
            big.add_edge(1, 2);
        }
        assert!(rb_trail_exists(&big, &AuxMultigraph::new(2)).is_err());
    }

    #[test]
    fn rb_trail_parity_necessary() {
        // If a trail exists then red and blue degrees agree at every vertex.
        let mut red = AuxMultigraph::new(3);
        red.add_edge(1, 2);
        red.add_edge(2, 3);
        let mut blue = AuxMultigraph::new(3);
        blue.add_edge(1, 2);
        blue.add_edge(2, 3);
        if rb_trail_exists(&red, &blue).unwrap() {
            for i in 1..=3 {
                assert_eq!(red.degree(i), blue.degree(i));
            }
        }
    }

    #[test]
    fn glue_packing_cases() {
        // (a) longer paths: a-v and v-b glue to a-v-b.
        let p1 = packing(&["a", "v"], &[("a", "v")]);
        let p2 = packing(&["v", "b"], &[("v", "b")]);
        let glued = glue_packings(&p1, &p2).unwrap();
        assert_eq!(glued.components().len(), 1);
        assert_eq!(glued.edges.len(), 2);

        // (b) cycles: paths between the same pair of glue vertices on both
        // sides (edge-disjoint hosts, so each side is a two-edge path).
        let p1 = packing(&["u", "x", "v"], &[("u", "x"), ("x", "v")]);
        let p2 = packing(&["u", "y", "v"], &[("u", "y"), ("y", "v")]);
        assert_eq!(glue_packings(&p1, &p2), None);

        // (c) degree three: v internal on one side, endpoint on the other.
        let p1 = packing(&["a", "v", "b"], &[("a", "v"), ("v", "b")]);
        let p2 = packing(&["v", "c"], &[("v", "c")]);
        assert_eq!(glue_packings(&p1, &p2), None);
    }
}
