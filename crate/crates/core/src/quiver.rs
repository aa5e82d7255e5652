//! Finite quivers: vertices, arrows, vertex classification, orientation surgery and
//! recognition of the underlying (extended) Dynkin graph.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};

/// An arrow `id: src -> dst`, endpoints stored as vertex indices.
///
/// `reversed` marks an arrow whose orientation was flipped by a reflection or by
/// taking the opposite quiver; flipping twice restores the original arrow exactly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub id: String,
    pub src: usize,
    pub dst: usize,
    pub reversed: bool,
}

impl Arrow {
    /// Identifier as written in the text format (`~` prefix for reversed arrows).
    pub fn label(&self) -> String {
        if self.reversed {
            format!("~{}", self.id)
        } else {
            self.id.clone()
        }
    }

    fn flipped(&self) -> Arrow {
        Arrow {
            id: self.id.clone(),
            src: self.dst,
            dst: self.src,
            reversed: !self.reversed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexKind {
    Sink,
    Source,
    Internal,
    Isolated,
}

impl fmt::Display for VertexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VertexKind::Sink => "sink",
            VertexKind::Source => "source",
            VertexKind::Internal => "internal",
            VertexKind::Isolated => "isolated",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReflectMode {
    Sink,
    Source,
}

/// Underlying undirected graph type. Sizes follow the usual indexing: `A(n)` and `D(n)`
/// have n vertices, `ATilde(n)` and `DTilde(n)` have n + 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphTag {
    A(usize),
    D(usize),
    E6,
    E7,
    E8,
    ATilde(usize),
    DTilde(usize),
    E6Tilde,
    E7Tilde,
    E8Tilde,
    Other,
}

impl fmt::Display for GraphTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphTag::A(n) => write!(f, "A{n}"),
            GraphTag::D(n) => write!(f, "D{n}"),
            GraphTag::E6 => write!(f, "E6"),
            GraphTag::E7 => write!(f, "E7"),
            GraphTag::E8 => write!(f, "E8"),
            GraphTag::ATilde(n) => write!(f, "A~{n}"),
            GraphTag::DTilde(n) => write!(f, "D~{n}"),
            GraphTag::E6Tilde => write!(f, "E~6"),
            GraphTag::E7Tilde => write!(f, "E~7"),
            GraphTag::E8Tilde => write!(f, "E~8"),
            GraphTag::Other => write!(f, "other"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphFamily {
    pub tag: GraphTag,
    pub oriented_cycle: bool,
}

/// A validated quiver. Vertex and arrow order is the declaration order and is
/// significant: it fixes Hom coordinates and direct-sum layouts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    name: String,
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    index: HashMap<String, usize>,
}

impl Quiver {
    /// Build from vertex ids and `(arrow id, source id, range id)` triples.
    pub fn new<V, A>(name: &str, vertices: V, arrows: A) -> Result<Quiver>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        A: IntoIterator<Item = (String, String, String)>,
    {
        let arrows: Vec<(String, String, String, bool)> = arrows
            .into_iter()
            .map(|(a, s, r)| (a, s, r, false))
            .collect();
        Self::with_marks(name, vertices, arrows)
    }

    /// Like [`Quiver::new`] but with explicit reversal marks.
    pub fn with_marks<V>(
        name: &str,
        vertices: V,
        arrows: Vec<(String, String, String, bool)>,
    ) -> Result<Quiver>
    where
        V: IntoIterator,
        V::Item: Into<String>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        if vertices.is_empty() {
            return Err(Error::EmptyQuiver);
        }
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(v.clone()));
            }
        }
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(arrows.len());
        for (id, s, r, reversed) in arrows {
            if !seen.insert(id.clone()) {
                return Err(Error::DuplicateArrow(id));
            }
            let src = *index.get(&s).ok_or_else(|| Error::DanglingEndpoint {
                arrow: id.clone(),
                vertex: s.clone(),
            })?;
            let dst = *index.get(&r).ok_or_else(|| Error::DanglingEndpoint {
                arrow: id.clone(),
                vertex: r.clone(),
            })?;
            out.push(Arrow {
                id,
                src,
                dst,
                reversed,
            });
        }
        Ok(Quiver {
            name: name.to_string(),
            vertices,
            arrows: out,
            index,
        })
    }

    /// Convenience constructor from string slices.
    pub fn from_strs(name: &str, vertices: &[&str], arrows: &[(&str, &str, &str)]) -> Result<Quiver> {
        Quiver::new(
            name,
            vertices.iter().copied(),
            arrows
                .iter()
                .map(|(a, s, r)| (a.to_string(), s.to_string(), r.to_string())),
        )
    }

    /// The Kronecker quiver `1 => 2` with arrows `a`, `b`.
    pub fn kronecker() -> Quiver {
        Quiver::from_strs("kronecker", &["1", "2"], &[("a", "1", "2"), ("b", "1", "2")])
            .expect("static quiver")
    }

    /// The oriented cycle on vertices `1..=n` with arrows `a_i: i -> i+1 mod n`.
    pub fn cycle(n: usize) -> Quiver {
        assert!(n >= 1);
        let vs: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let arrows = (1..=n).map(|i| {
            (
                format!("a{i}"),
                i.to_string(),
                (i % n + 1).to_string(),
            )
        });
        Quiver::new(&format!("C{n}"), vs, arrows).expect("static quiver")
    }

    /// The path `1 -> 2 -> ... -> n` with arrows `a_k: k -> k+1`.
    pub fn path(n: usize) -> Quiver {
        assert!(n >= 1);
        let vs: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let arrows = (1..n).map(|k| (format!("a{k}"), k.to_string(), (k + 1).to_string()));
        Quiver::new(&format!("A{n}"), vs, arrows).expect("static quiver")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, v: &str) -> Result<usize> {
        self.index
            .get(v)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(v.to_string()))
    }

    /// Index of an arrow by base id (without the `~` mark).
    pub fn arrow_index(&self, id: &str) -> Result<usize> {
        let base = id.strip_prefix('~').unwrap_or(id);
        self.arrows
            .iter()
            .position(|a| a.id == base)
            .ok_or_else(|| Error::UnknownArrow(id.to_string()))
    }

    pub fn src_name(&self, a: &Arrow) -> &str {
        &self.vertices[a.src]
    }

    pub fn dst_name(&self, a: &Arrow) -> &str {
        &self.vertices[a.dst]
    }

    /// Indices of arrows with range `v`, in declaration order.
    pub fn incoming(&self, v: usize) -> Vec<usize> {
        (0..self.arrows.len())
            .filter(|&i| self.arrows[i].dst == v)
            .collect()
    }

    /// Indices of arrows with source `v`, in declaration order.
    pub fn outgoing(&self, v: usize) -> Vec<usize> {
        (0..self.arrows.len())
            .filter(|&i| self.arrows[i].src == v)
            .collect()
    }

    pub fn kind_of(&self, v: usize) -> VertexKind {
        let has_out = self.arrows.iter().any(|a| a.src == v);
        let has_in = self.arrows.iter().any(|a| a.dst == v);
        match (has_out, has_in) {
            (false, false) => VertexKind::Isolated,
            (false, true) => VertexKind::Sink,
            (true, false) => VertexKind::Source,
            (true, true) => VertexKind::Internal,
        }
    }

    /// Kind of every vertex, in vertex order.
    pub fn vertex_kinds(&self) -> Vec<(String, VertexKind)> {
        (0..self.vertices.len())
            .map(|v| (self.vertices[v].clone(), self.kind_of(v)))
            .collect()
    }

    /// A vertex with no outgoing arrow (isolated vertices included).
    pub fn is_sink(&self, v: usize) -> bool {
        !self.arrows.iter().any(|a| a.src == v)
    }

    /// A vertex with no incoming arrow (isolated vertices included).
    pub fn is_source(&self, v: usize) -> bool {
        !self.arrows.iter().any(|a| a.dst == v)
    }

    /// True iff the quiver is a single oriented cycle through all vertices.
    pub fn is_oriented_cycle(&self) -> bool {
        self.cycle_order().is_some()
    }

    /// For an oriented cycle, the vertex indices in cyclic order starting at vertex 0
    /// together with the arrow leaving each of them.
    pub fn cycle_order(&self) -> Option<Vec<(usize, usize)>> {
        let n = self.vertices.len();
        if self.arrows.len() != n {
            return None;
        }
        let mut out_arrow = vec![None; n];
        let mut in_count = vec![0usize; n];
        for (i, a) in self.arrows.iter().enumerate() {
            if out_arrow[a.src].is_some() {
                return None;
            }
            out_arrow[a.src] = Some(i);
            in_count[a.dst] += 1;
        }
        if in_count.iter().any(|&c| c != 1) {
            return None;
        }
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        let mut v = 0;
        for _ in 0..n {
            if seen[v] {
                return None;
            }
            seen[v] = true;
            let a = out_arrow[v]?;
            order.push((v, a));
            v = self.arrows[a].dst;
        }
        (v == 0).then_some(order)
    }

    /// Reflect the orientation at a sink (`Sink`) or source (`Source`): every arrow
    /// with range (resp. source) `v` is reversed.
    pub fn reverse_at(&self, v: &str, mode: ReflectMode) -> Result<Quiver> {
        let vi = self.vertex_index(v)?;
        match mode {
            ReflectMode::Sink if !self.is_sink(vi) => return Err(Error::NotSink(v.to_string())),
            ReflectMode::Source if !self.is_source(vi) => {
                return Err(Error::NotSource(v.to_string()))
            }
            _ => {}
        }
        let arrows = self
            .arrows
            .iter()
            .map(|a| {
                let touches = match mode {
                    ReflectMode::Sink => a.dst == vi,
                    ReflectMode::Source => a.src == vi,
                };
                if touches {
                    a.flipped()
                } else {
                    a.clone()
                }
            })
            .collect();
        Ok(self.with_arrows(arrows))
    }

    /// Every arrow reversed.
    pub fn opposite(&self) -> Quiver {
        self.with_arrows(self.arrows.iter().map(Arrow::flipped).collect())
    }

    fn with_arrows(&self, arrows: Vec<Arrow>) -> Quiver {
        Quiver {
            name: self.name.clone(),
            vertices: self.vertices.clone(),
            arrows,
            index: self.index.clone(),
        }
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        let mut adj = vec![Vec::new(); n];
        for a in &self.arrows {
            adj[a.src].push(a.dst);
            adj[a.dst].push(a.src);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Recognise the underlying undirected graph.
    pub fn graph_family(&self) -> Result<GraphFamily> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let oriented_cycle = self.is_oriented_cycle();
        Ok(GraphFamily {
            tag: self.graph_tag(),
            oriented_cycle,
        })
    }

    fn graph_tag(&self) -> GraphTag {
        let n = self.vertices.len();
        let m = self.arrows.len();
        let mut deg = vec![0usize; n];
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for a in &self.arrows {
            deg[a.src] += 1;
            deg[a.dst] += 1;
            if a.src != a.dst {
                adj[a.src].push(a.dst);
                adj[a.dst].push(a.src);
            }
        }
        if m == n {
            // Connected with one independent cycle; all degrees 2 means the cycle is everything.
            return if deg.iter().all(|&d| d == 2) {
                GraphTag::ATilde(n - 1)
            } else {
                GraphTag::Other
            };
        }
        if m + 1 != n {
            return GraphTag::Other;
        }
        // Tree.
        let branch: Vec<usize> = (0..n).filter(|&v| deg[v] >= 3).collect();
        if branch.is_empty() {
            return GraphTag::A(n);
        }
        let arm_len = |start: usize, from: usize| -> usize {
            let (mut prev, mut cur, mut len) = (from, start, 1);
            while deg[cur] == 2 {
                let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
                prev = cur;
                cur = next;
                len += 1;
            }
            if deg[cur] == 1 {
                len
            } else {
                usize::MAX
            }
        };
        match branch.as_slice() {
            [b] if deg[*b] == 4 => {
                if n == 5 {
                    GraphTag::DTilde(4)
                } else {
                    GraphTag::Other
                }
            }
            [b] if deg[*b] == 3 => {
                let mut arms: Vec<usize> = adj[*b].iter().map(|&w| arm_len(w, *b)).collect();
                arms.sort_unstable();
                match arms.as_slice() {
                    [1, 1, r] => GraphTag::D(r + 3),
                    [1, 2, 2] => GraphTag::E6,
                    [1, 2, 3] => GraphTag::E7,
                    [1, 2, 4] => GraphTag::E8,
                    [2, 2, 2] => GraphTag::E6Tilde,
                    [1, 3, 3] => GraphTag::E7Tilde,
                    [1, 2, 5] => GraphTag::E8Tilde,
                    _ => GraphTag::Other,
                }
            }
            [b1, b2] if deg[*b1] == 3 && deg[*b2] == 3 => {
                let leaves = |b: usize| adj[b].iter().filter(|&&w| deg[w] == 1).count();
                if leaves(*b1) == 2 && leaves(*b2) == 2 {
                    GraphTag::DTilde(n - 1)
                } else {
                    GraphTag::Other
                }
            }
            _ => GraphTag::Other,
        }
    }

    /// Vertex-indexed map helper.
    pub fn vertex_map<T: Clone>(&self, f: impl Fn(usize) -> T) -> BTreeMap<String, T> {
        (0..self.vertices.len())
            .map(|i| (self.vertices[i].clone(), f(i)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(vs: &[&str], arrows: &[(&str, &str, &str)]) -> Quiver {
        Quiver::from_strs("q", vs, arrows).unwrap()
    }

    #[test]
    fn construction_and_errors() {
        let k = Quiver::kronecker();
        assert_eq!(k.arrows().len(), 2);
        let jordan = q(&["1"], &[("l", "1", "1")]);
        assert_eq!(jordan.kind_of(0), VertexKind::Internal);
        assert!(matches!(
            Quiver::from_strs("q", &["1", "2"], &[("a", "1", "3")]),
            Err(Error::DanglingEndpoint { .. })
        ));
        assert!(matches!(
            Quiver::from_strs("q", &["1", "1"], &[]),
            Err(Error::DuplicateVertex(_))
        ));
        assert!(matches!(
            Quiver::from_strs("q", &["1", "2"], &[("a", "1", "2"), ("a", "2", "1")]),
            Err(Error::DuplicateArrow(_))
        ));
        assert!(matches!(
            Quiver::from_strs("q", &[], &[]),
            Err(Error::EmptyQuiver)
        ));
    }

    #[test]
    fn kinds() {
        let k = Quiver::kronecker();
        assert_eq!(
            k.vertex_kinds(),
            vec![
                ("1".to_string(), VertexKind::Source),
                ("2".to_string(), VertexKind::Sink)
            ]
        );
        let c3 = Quiver::cycle(3);
        assert!(c3.vertex_kinds().iter().all(|(_, k)| *k == VertexKind::Internal));
        let iso = q(&["x"], &[]);
        assert_eq!(iso.kind_of(0), VertexKind::Isolated);
    }

    #[test]
    fn oriented_cycles() {
        assert!(Quiver::cycle(4).is_oriented_cycle());
        assert!(Quiver::cycle(2).is_oriented_cycle());
        assert!(!Quiver::kronecker().is_oriented_cycle());
        let two_cycles = q(
            &["1", "2", "3", "4"],
            &[("a", "1", "2"), ("b", "2", "1"), ("c", "3", "4"), ("d", "4", "3")],
        );
        assert!(!two_cycles.is_oriented_cycle());
        let relabeled = q(&["x", "y", "z"], &[("p", "z", "x"), ("q", "x", "y"), ("r", "y", "z")]);
        assert!(relabeled.is_oriented_cycle());
    }

    #[test]
    fn reversal() {
        let k = Quiver::kronecker();
        let r = k.reverse_at("2", ReflectMode::Sink).unwrap();
        assert_eq!(r.kind_of(1), VertexKind::Source);
        assert!(r.arrows().iter().all(|a| a.reversed && a.src == 1 && a.dst == 0));
        let p = Quiver::path(3);
        let s = p.reverse_at("1", ReflectMode::Source).unwrap();
        assert_eq!((s.arrows()[0].src, s.arrows()[0].dst), (1, 0));
        assert_eq!((s.arrows()[1].src, s.arrows()[1].dst), (1, 2));
        assert!(matches!(
            p.reverse_at("2", ReflectMode::Sink),
            Err(Error::NotSink(_))
        ));
        let back = r.reverse_at("2", ReflectMode::Source).unwrap();
        assert_eq!(back, k);
    }

    #[test]
    fn opposite_is_involution() {
        let k = Quiver::kronecker();
        let o = k.opposite();
        assert!(o.arrows().iter().all(|a| a.src == 1 && a.dst == 0));
        assert_eq!(o.opposite(), k);
        assert!(Quiver::cycle(3).opposite().is_oriented_cycle());
    }

    #[test]
    fn families() {
        let d4t = q(
            &["1", "2", "3", "4", "5"],
            &[("a1", "1", "5"), ("a2", "2", "5"), ("a3", "3", "5"), ("a4", "4", "5")],
        );
        assert_eq!(d4t.graph_family().unwrap().tag, GraphTag::DTilde(4));
        assert_eq!(Quiver::path(5).graph_family().unwrap().tag, GraphTag::A(5));
        let c3 = Quiver::cycle(3).graph_family().unwrap();
        assert_eq!(c3.tag, GraphTag::ATilde(2));
        assert!(c3.oriented_cycle);
        assert_eq!(
            Quiver::kronecker().graph_family().unwrap(),
            GraphFamily {
                tag: GraphTag::ATilde(1),
                oriented_cycle: false
            }
        );
        let jordan = q(&["1"], &[("l", "1", "1")]);
        assert_eq!(jordan.graph_family().unwrap().tag, GraphTag::ATilde(0));
        let disc = q(&["1", "2"], &[]);
        assert!(matches!(disc.graph_family(), Err(Error::Disconnected)));
        let d5 = q(
            &["1", "2", "3", "4", "5"],
            &[("a", "1", "3"), ("b", "2", "3"), ("c", "3", "4"), ("d", "4", "5")],
        );
        assert_eq!(d5.graph_family().unwrap().tag, GraphTag::D(5));
        let d5t = q(
            &["1", "2", "3", "4", "5", "6"],
            &[
                ("a", "1", "5"),
                ("b", "2", "5"),
                ("c", "3", "6"),
                ("d", "4", "6"),
                ("e", "5", "6"),
            ],
        );
        assert_eq!(d5t.graph_family().unwrap().tag, GraphTag::DTilde(5));
    }
}
