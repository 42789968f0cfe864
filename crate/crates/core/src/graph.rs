//! Simple undirected graphs, paths, and path systems.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A simple undirected graph on vertices `0..n`.
///
/// Adjacency lists are kept sorted; the edge list holds each edge once as
/// `(u, v)` with `u < v`, sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    // neighbours of v are adjacency[offsets[v]..offsets[v + 1]], sorted
    offsets: Vec<usize>,
    adjacency: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut list = Vec::new();
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!(
                "parallel edge {}-{}",
                w[0].0, w[0].1
            )));
        }
        let mut offsets = vec![0; n + 1];
        for &(u, v) in &list {
            offsets[u + 1] += 1;
            offsets[v + 1] += 1;
        }
        for v in 0..n {
            offsets[v + 1] += offsets[v];
        }
        let mut fill = offsets.clone();
        let mut adjacency = vec![0; 2 * list.len()];
        for &(u, v) in &list {
            adjacency[fill[u]] = v;
            fill[u] += 1;
        }
        for &(u, v) in &list {
            adjacency[fill[v]] = u;
            fill[v] += 1;
        }
        for v in 0..n {
            adjacency[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Ok(Graph {
            offsets,
            adjacency,
            edges: list,
        })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            offsets: vec![0; n + 1],
            adjacency: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.vertex_count() && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Index of edge `{u, v}` in [`Graph::edges`].
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    /// The subgraph induced by `vertices`, relabelled to `0..vertices.len()`
    /// in the given order.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|&(u, v)| (index[u], index[v]));
        Graph::new(vertices.len(), edges).expect("induced subgraph of a simple graph is simple")
    }

    pub fn is_connected(&self) -> bool {
        connected_components(self).len() <= 1
    }

    pub fn is_tree(&self) -> bool {
        self.vertex_count() > 0
            && self.edge_count() + 1 == self.vertex_count()
            && self.is_connected()
    }

    /// Parses the PACE `.gr` format (`p tw <n> <m>` header, 1-based edge lines).
    pub fn from_gr(text: &str) -> Result<Graph> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            let parse_err = |msg: &str| Error::Parse {
                line: line_no,
                msg: msg.to_string(),
            };
            let fields: Vec<&str> = line.split_ascii_whitespace().collect();
            if fields[0] == "p" {
                if header.is_some() {
                    return Err(parse_err("duplicate header"));
                }
                if fields.len() != 4 || fields[1] != "tw" {
                    return Err(parse_err("expected `p tw <n> <m>`"));
                }
                let n = fields[2]
                    .parse()
                    .map_err(|_| parse_err("bad vertex count"))?;
                let m = fields[3].parse().map_err(|_| parse_err("bad edge count"))?;
                header = Some((n, m));
                continue;
            }
            let (n, _) = header.ok_or_else(|| parse_err("edge before header"))?;
            if fields.len() != 2 {
                return Err(parse_err("expected `<u> <v>`"));
            }
            let mut ends = [0usize; 2];
            for (slot, f) in ends.iter_mut().zip(&fields) {
                let id: usize = f.parse().map_err(|_| parse_err("bad vertex id"))?;
                if id == 0 || id > n {
                    return Err(parse_err("vertex id out of range"));
                }
                *slot = id - 1;
            }
            edges.push((ends[0], ends[1]));
        }
        let (n, m) = header.ok_or(Error::Parse {
            line: 0,
            msg: "missing `p tw` header".into(),
        })?;
        if edges.len() != m {
            return Err(Error::Parse {
                line: 0,
                msg: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        Graph::new(n, edges)
    }

    pub fn to_gr(&self) -> String {
        let mut out = format!("p tw {} {}\n", self.vertex_count(), self.edge_count());
        for &(u, v) in &self.edges {
            out.push_str(&format!("{} {}\n", u + 1, v + 1));
        }
        out
    }
}

/// Maximal connected vertex sets, each sorted, ordered by smallest vertex.
pub fn connected_components(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        queue.push_back(s);
        let mut comp = Vec::new();
        while let Some(v) = queue.pop_front() {
            comp.push(v);
            for &u in g.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// A sequence of vertices; validity is relative to a host graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Path(pub Vec<usize>);

impl Path {
    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.windows(2).map(|w| (w[0].min(w[1]), w[0].max(w[1])))
    }

    /// The same path read from the other end, if that is lexicographically smaller.
    pub fn canonical(mut self) -> Path {
        if self.0.last() < self.0.first() {
            self.0.reverse();
        }
        self
    }
}

impl From<Vec<usize>> for Path {
    fn from(v: Vec<usize>) -> Self {
        Path(v)
    }
}

/// Whether `p` is a simple path of `g`. Out-of-range ids are an input error.
pub fn validate_path(g: &Graph, p: &Path) -> Result<bool> {
    let n = g.vertex_count();
    if let Some(&v) = p.0.iter().find(|&&v| v >= n) {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    if p.is_empty() {
        return Ok(false);
    }
    let mut seen = HashSet::with_capacity(p.len());
    if !p.0.iter().all(|&v| seen.insert(v)) {
        return Ok(false);
    }
    Ok(p.0.windows(2).all(|w| g.has_edge(w[0], w[1])))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Cover,
    Partition,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Cover => f.write_str("cover"),
            Mode::Partition => f.write_str("partition"),
        }
    }
}

/// Extra restrictions on solution paths.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Variant {
    /// Every path must be an induced path.
    pub induced: bool,
    /// No edge may be used by two paths.
    pub edge_disjoint: bool,
}

impl Variant {
    pub const PLAIN: Variant = Variant {
        induced: false,
        edge_disjoint: false,
    };
    pub const INDUCED: Variant = Variant {
        induced: true,
        edge_disjoint: false,
    };
    pub const EDGE_DISJOINT: Variant = Variant {
        induced: false,
        edge_disjoint: true,
    };
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathSystem {
    pub paths: Vec<Path>,
    pub mode: Mode,
    pub variant: Variant,
}

/// Why a path system failed validation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "code", rename_all = "snake_case")]
pub enum Violation {
    VertexOutOfRange { vertex: usize },
    NotAPath { index: usize },
    Uncovered { vertex: usize },
    VertexReused { vertex: usize },
    Chord { index: usize, u: usize, v: usize },
    EdgeReused { u: usize, v: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::VertexOutOfRange { vertex } => write!(f, "vertex {vertex} out of range"),
            Violation::NotAPath { index } => write!(f, "path #{index} is not a path"),
            Violation::Uncovered { vertex } => write!(f, "vertex {vertex} is not covered"),
            Violation::VertexReused { vertex } => write!(f, "vertex {vertex} lies on two paths"),
            Violation::Chord { index, u, v } => write!(f, "path #{index} has chord {u}-{v}"),
            Violation::EdgeReused { u, v } => write!(f, "edge {u}-{v} used by two paths"),
        }
    }
}

impl PathSystem {
    pub fn new(paths: Vec<Path>, mode: Mode, variant: Variant) -> Self {
        PathSystem {
            paths,
            mode,
            variant,
        }
    }

    pub fn size(&self) -> usize {
        self.paths.len()
    }

    /// Paths reversed into canonical direction and sorted.
    pub fn normalized(mut self) -> Self {
        self.paths = self.paths.into_iter().map(Path::canonical).collect();
        self.paths.sort();
        self
    }

    pub fn check(&self, g: &Graph) -> std::result::Result<(), Violation> {
        let n = g.vertex_count();
        let mut hits = vec![0usize; n];
        let mut used_edges = HashSet::new();
        for (index, p) in self.paths.iter().enumerate() {
            match validate_path(g, p) {
                Err(Error::VertexOutOfRange { vertex, .. }) => {
                    return Err(Violation::VertexOutOfRange { vertex })
                }
                Err(_) | Ok(false) => return Err(Violation::NotAPath { index }),
                Ok(true) => {}
            }
            for &v in p.vertices() {
                hits[v] += 1;
            }
            if self.variant.induced {
                let pos: std::collections::HashMap<usize, usize> =
                    p.0.iter().enumerate().map(|(i, &v)| (v, i)).collect();
                for (i, &u) in p.0.iter().enumerate() {
                    for &v in g.neighbors(u) {
                        if let Some(&j) = pos.get(&v) {
                            if j > i + 1 {
                                return Err(Violation::Chord { index, u, v });
                            }
                        }
                    }
                }
            }
            if self.variant.edge_disjoint {
                for (u, v) in p.edges() {
                    if !used_edges.insert((u, v)) {
                        return Err(Violation::EdgeReused { u, v });
                    }
                }
            }
        }
        if let Some(vertex) = hits.iter().position(|&h| h == 0) {
            return Err(Violation::Uncovered { vertex });
        }
        if self.mode == Mode::Partition {
            if let Some(vertex) = hits.iter().position(|&h| h > 1) {
                return Err(Violation::VertexReused { vertex });
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "mode": self.mode,
            "paths": self.paths,
            "size": self.size(),
        })
    }
}

/// Whether `s` satisfies all of its mode and variant requirements on `g`.
pub fn validate_system(g: &Graph, s: &PathSystem) -> bool {
    s.check(g).is_ok()
}
