//! Tree decompositions: validation, PACE `.td` I/O, and conversion to nice
//! and advanced-nice form.

mod heuristic;
mod nice;

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub use heuristic::heuristic_decomposition;
pub use nice::{
    to_advanced_nice, to_nice, AdvancedNiceTreeDecomposition, NiceNode, NiceTreeDecomposition,
    NodeKind,
};

/// A tree decomposition: bags indexed by node, plus the tree's edges.
///
/// Bag vertex order is kept as given so `.td` files round-trip exactly;
/// algorithms treat bags as sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub vertex_count: usize,
    pub bags: Vec<Vec<usize>>,
    pub edges: Vec<(usize, usize)>,
}

/// A violated tree-decomposition condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TdViolation {
    EdgeNotCovered(usize, usize),
    VertexMissing(usize),
    Disconnected(usize),
}

impl std::fmt::Display for TdViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TdViolation::EdgeNotCovered(u, v) => write!(f, "edge {u}-{v} lies in no bag"),
            TdViolation::VertexMissing(v) => write!(f, "vertex {v} lies in no bag"),
            TdViolation::Disconnected(v) => write!(f, "bags holding vertex {v} are not connected"),
        }
    }
}

impl TreeDecomposition {
    pub fn new(vertex_count: usize, bags: Vec<Vec<usize>>, edges: Vec<(usize, usize)>) -> Self {
        TreeDecomposition {
            vertex_count,
            bags,
            edges,
        }
    }

    pub fn node_count(&self) -> usize {
        self.bags.len()
    }

    /// Largest bag size minus one; `-1` (as `None`) for a decomposition without bags.
    pub fn width(&self) -> Option<usize> {
        self.bags
            .iter()
            .map(Vec::len)
            .max()
            .map(|m| m.saturating_sub(1))
    }

    /// Decomposition of the subgraph induced by `keep`, relabelled so that
    /// `keep[i]` becomes vertex `i`. The tree shape is unchanged.
    pub fn restrict(&self, keep: &[usize]) -> TreeDecomposition {
        let mut new_id = vec![usize::MAX; self.vertex_count];
        for (i, &v) in keep.iter().enumerate() {
            new_id[v] = i;
        }
        let bags = self
            .bags
            .iter()
            .map(|b| {
                b.iter()
                    .filter(|&&v| v < new_id.len() && new_id[v] != usize::MAX)
                    .map(|&v| new_id[v])
                    .collect()
            })
            .collect();
        TreeDecomposition::new(keep.len(), bags, self.edges.clone())
    }

    pub fn tree_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.node_count()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Structural well-formedness: ids in range, no repeated bag entries,
    /// and the node graph is a tree.
    fn check_structure(&self, g: &Graph) -> Result<()> {
        let bad = |node: usize, msg: String| Error::InvalidDecomposition { node, msg };
        if self.vertex_count != g.vertex_count() {
            return Err(bad(
                0,
                format!(
                    "decomposition is for {} vertices, graph has {}",
                    self.vertex_count,
                    g.vertex_count()
                ),
            ));
        }
        let k = self.node_count();
        for (node, bag) in self.bags.iter().enumerate() {
            let mut seen = bag.clone();
            seen.sort_unstable();
            if let Some(&v) = seen.iter().find(|&&v| v >= self.vertex_count) {
                return Err(bad(node, format!("vertex {v} out of range")));
            }
            if seen.windows(2).any(|w| w[0] == w[1]) {
                return Err(bad(node, "repeated vertex in bag".into()));
            }
        }
        for &(a, b) in &self.edges {
            if a >= k || b >= k || a == b {
                return Err(bad(a.min(b), format!("bad tree edge {a}-{b}")));
            }
        }
        if k == 0 {
            return if self.vertex_count == 0 {
                Ok(())
            } else {
                Err(bad(0, "no bags".into()))
            };
        }
        if self.edges.len() + 1 != k {
            return Err(bad(
                0,
                format!("{k} nodes but {} tree edges", self.edges.len()),
            ));
        }
        let adj = self.tree_adjacency();
        let mut seen = vec![false; k];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(a) = queue.pop_front() {
            for &b in &adj[a] {
                if !seen[b] {
                    seen[b] = true;
                    queue.push_back(b);
                }
            }
        }
        if let Some(node) = seen.iter().position(|&s| !s) {
            return Err(bad(node, "tree is disconnected".into()));
        }
        Ok(())
    }

    /// Checks the three decomposition conditions, assuming a well-formed structure.
    fn check_conditions(&self, g: &Graph) -> std::result::Result<(), TdViolation> {
        let n = g.vertex_count();
        let mut holders: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (node, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                holders[v].push(node);
            }
        }
        if let Some(v) = holders.iter().position(Vec::is_empty) {
            return Err(TdViolation::VertexMissing(v));
        }
        let mut in_bag = vec![false; n];
        let mut covered = vec![false; g.edge_count()];
        for bag in &self.bags {
            for &v in bag {
                in_bag[v] = true;
            }
            for &u in bag {
                for &v in g.neighbors(u) {
                    if u < v && in_bag[v] {
                        covered[g.edge_index(u, v).unwrap()] = true;
                    }
                }
            }
            for &v in bag {
                in_bag[v] = false;
            }
        }
        if let Some(e) = covered.iter().position(|&c| !c) {
            let (u, v) = g.edges()[e];
            return Err(TdViolation::EdgeNotCovered(u, v));
        }
        let adj = self.tree_adjacency();
        // holds[a] == 2v+1: node a holds v; 2v+2: node a holds v and was reached.
        let mut holds = vec![0usize; self.node_count()];
        for (v, nodes) in holders.iter().enumerate() {
            for &a in nodes {
                holds[a] = 2 * v + 1;
            }
            holds[nodes[0]] = 2 * v + 2;
            let mut reached = 1;
            let mut stack = vec![nodes[0]];
            while let Some(a) = stack.pop() {
                for &b in &adj[a] {
                    if holds[b] == 2 * v + 1 {
                        holds[b] = 2 * v + 2;
                        reached += 1;
                        stack.push(b);
                    }
                }
            }
            if reached != nodes.len() {
                return Err(TdViolation::Disconnected(v));
            }
        }
        Ok(())
    }

    pub fn check(&self, g: &Graph) -> Result<std::result::Result<(), TdViolation>> {
        self.check_structure(g)?;
        Ok(self.check_conditions(g))
    }

    /// Errors unless `self` is a valid decomposition of `g`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        match self.check(g)? {
            Ok(()) => Ok(()),
            Err(violation) => Err(Error::InvalidDecomposition {
                node: 0,
                msg: violation.to_string(),
            }),
        }
    }

    /// Parses the PACE `.td` format (1-based bag ids and vertices).
    pub fn from_td(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize, usize)> = None;
        let mut bags: Vec<Option<Vec<usize>>> = Vec::new();
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |msg: &str| Error::Parse {
                line: line_no,
                msg: msg.to_string(),
            };
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            let fields: Vec<&str> = line.split_ascii_whitespace().collect();
            let num = |s: &str| s.parse::<usize>().map_err(|_| err("bad number"));
            match fields[0] {
                "s" => {
                    if fields.len() != 5 || fields[1] != "td" || header.is_some() {
                        return Err(err("expected a single `s td <bags> <max_bag> <n>`"));
                    }
                    let h = (num(fields[2])?, num(fields[3])?, num(fields[4])?);
                    bags = vec![None; h.0];
                    header = Some(h);
                }
                "b" => {
                    let (count, _, n) = header.ok_or_else(|| err("bag before header"))?;
                    let id = num(fields.get(1).ok_or_else(|| err("missing bag id"))?)?;
                    if id == 0 || id > count {
                        return Err(err("bag id out of range"));
                    }
                    if bags[id - 1].is_some() {
                        return Err(err("duplicate bag id"));
                    }
                    let mut bag = Vec::new();
                    for f in &fields[2..] {
                        let v = num(f)?;
                        if v == 0 || v > n {
                            return Err(err("vertex out of range"));
                        }
                        bag.push(v - 1);
                    }
                    bags[id - 1] = Some(bag);
                }
                _ => {
                    let (count, _, _) = header.ok_or_else(|| err("edge before header"))?;
                    if fields.len() != 2 {
                        return Err(err("expected `<i> <j>`"));
                    }
                    let (a, b) = (num(fields[0])?, num(fields[1])?);
                    if a == 0 || b == 0 || a > count || b > count {
                        return Err(err("node id out of range"));
                    }
                    edges.push((a - 1, b - 1));
                }
            }
        }
        let (_, max_bag, n) = header.ok_or(Error::Parse {
            line: 0,
            msg: "missing `s td` header".into(),
        })?;
        let bags: Vec<Vec<usize>> = bags
            .into_iter()
            .enumerate()
            .map(|(i, b)| {
                b.ok_or(Error::Parse {
                    line: 0,
                    msg: format!("bag {} missing", i + 1),
                })
            })
            .collect::<Result<_>>()?;
        let largest = bags.iter().map(Vec::len).max().unwrap_or(0);
        if largest != max_bag {
            return Err(Error::Parse {
                line: 0,
                msg: format!("header declares max bag size {max_bag}, found {largest}"),
            });
        }
        Ok(TreeDecomposition::new(n, bags, edges))
    }

    pub fn to_td(&self) -> String {
        let largest = self.bags.iter().map(Vec::len).max().unwrap_or(0);
        let mut out = format!(
            "s td {} {} {}\n",
            self.node_count(),
            largest,
            self.vertex_count
        );
        for (i, bag) in self.bags.iter().enumerate() {
            out.push_str(&format!("b {}", i + 1));
            for v in bag {
                out.push_str(&format!(" {}", v + 1));
            }
            out.push('\n');
        }
        for &(a, b) in &self.edges {
            out.push_str(&format!("{} {}\n", a + 1, b + 1));
        }
        out
    }
}

/// Whether `td` is a valid tree decomposition of `g`. Malformed input
/// (ids out of range, a node graph that is not a tree) is an error.
pub fn validate_decomposition(g: &Graph, td: &TreeDecomposition) -> Result<bool> {
    Ok(td.check(g)?.is_ok())
}

/// Whether removing tree edge `(a, b)` leaves `X_a ∩ X_b` separating the
/// vertices seen on either side.
pub fn separator_check(g: &Graph, td: &TreeDecomposition, a: usize, b: usize) -> bool {
    let adj = td.tree_adjacency();
    let side = |start: usize, blocked: usize| -> Vec<bool> {
        let mut seen = vec![false; td.node_count()];
        let mut vertices = vec![false; g.vertex_count()];
        seen[start] = true;
        seen[blocked] = true;
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for &v in &td.bags[x] {
                vertices[v] = true;
            }
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        vertices
    };
    let va = side(a, b);
    let vb = side(b, a);
    let mut separator = vec![false; g.vertex_count()];
    for &v in &td.bags[a] {
        if td.bags[b].contains(&v) {
            separator[v] = true;
        }
    }
    // BFS in G - separator from V_a \ S; it must never reach V_b \ S.
    let mut seen = vec![false; g.vertex_count()];
    let mut queue: VecDeque<usize> = (0..g.vertex_count())
        .filter(|&v| va[v] && !separator[v])
        .collect();
    for &v in &queue {
        seen[v] = true;
    }
    while let Some(v) = queue.pop_front() {
        if vb[v] {
            return false;
        }
        for &u in g.neighbors(v) {
            if !separator[u] && !seen[u] {
                seen[u] = true;
                queue.push_back(u);
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Graph {
        Graph::new(3, [(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn validation_examples() {
        let td = TreeDecomposition::new(3, vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        assert!(validate_decomposition(&p3(), &td).unwrap());
        assert_eq!(td.width(), Some(1));

        let c4 = Graph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let td = TreeDecomposition::new(4, vec![vec![0, 1], vec![2, 3]], vec![(0, 1)]);
        assert_eq!(
            td.check(&c4).unwrap(),
            Err(TdViolation::EdgeNotCovered(0, 3))
        );

        let k4 = Graph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let td = TreeDecomposition::new(4, vec![vec![0, 1, 2, 3]], vec![]);
        assert!(validate_decomposition(&k4, &td).unwrap());
        assert_eq!(td.width(), Some(3));
    }

    #[test]
    fn connectivity_condition() {
        let g = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        let td = TreeDecomposition::new(
            3,
            vec![vec![0, 1], vec![1, 2], vec![0]],
            vec![(0, 1), (1, 2)],
        );
        assert_eq!(td.check(&g).unwrap(), Err(TdViolation::Disconnected(0)));
        let td = TreeDecomposition::new(3, vec![vec![0, 1]], vec![]);
        assert_eq!(td.check(&g).unwrap(), Err(TdViolation::VertexMissing(2)));
    }

    #[test]
    fn malformed_input_is_an_error() {
        let td = TreeDecomposition::new(3, vec![vec![0, 7]], vec![]);
        assert!(matches!(
            validate_decomposition(&p3(), &td),
            Err(Error::InvalidDecomposition { node: 0, .. })
        ));
        let td = TreeDecomposition::new(3, vec![vec![0, 1], vec![1, 2]], vec![]);
        assert!(validate_decomposition(&p3(), &td).is_err());
    }

    #[test]
    fn separator_on_p3() {
        let td = TreeDecomposition::new(3, vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        assert!(separator_check(&p3(), &td, 0, 1));
        // An invalid decomposition can break the separator property.
        let bad = TreeDecomposition::new(3, vec![vec![0, 1], vec![2]], vec![(0, 1)]);
        assert!(!separator_check(&p3(), &bad, 0, 1));
    }

    #[test]
    fn td_format_round_trip() {
        let text = "s td 3 2 4\nb 1 1 2\nb 2 2 3\nb 3 4 3\n1 2\n2 3\n";
        let td = TreeDecomposition::from_td(text).unwrap();
        assert_eq!(td.bags, vec![vec![0, 1], vec![1, 2], vec![3, 2]]);
        assert_eq!(td.to_td(), text);
        let with_comments = format!("c hello\n{text}");
        assert_eq!(TreeDecomposition::from_td(&with_comments).unwrap(), td);
        assert!(TreeDecomposition::from_td("s td 1 3 2\nb 1 1 2\n").is_err());
        assert!(TreeDecomposition::from_td("s td 1 1 2\nb 1 3\n").is_err());
        assert!(TreeDecomposition::from_td("s td 2 1 2\nb 1 1\n").is_err());
    }
}
