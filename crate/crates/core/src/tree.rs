//! Linear-time minimum path cover on trees.
//!
//! Paths start at leaves and travel upward, children before parents.
//! At each vertex, open paths arriving from different children are combined
//! pairwise until at most two remain; those are extended by the vertex and
//! handed to the parent. At the root every remaining pair is closed, leaving
//! at most one path with a non-leaf endpoint. The result has exactly
//! `ceil(leaves / 2)` paths, which is optimal since every leaf must be an
//! endpoint of some path.
//!
//! An open path is a climb from a leaf, so it is tracked by its two
//! endpoints alone and every combine/extend step is O(1). Full vertex
//! sequences are expanded once at the end by walking parent links.

use crate::error::{Error, Result};
use crate::graph::{Graph, Mode, Path, PathSystem, Variant};
use std::sync::OnceLock;

const NONE: u32 = u32::MAX;

/// A tree rooted at its lowest-numbered internal vertex.
///
/// Vertices are stored in breadth-first order, so the children of each
/// vertex form one contiguous block and the solver walks memory mostly in
/// sequence even when the input labels are random.
#[derive(Clone, Debug)]
pub struct RootedTree {
    root: usize,
    // breadth-first position -> vertex, and back
    order: Vec<usize>,
    // filled on first use; the solver itself never needs it
    index: OnceLock<Vec<usize>>,
    // position of the parent (the root points to itself)
    up: Vec<usize>,
    // children of order[i] are order[child_start[i]..child_start[i + 1]]
    child_start: Vec<usize>,
}

impl RootedTree {
    pub fn from_graph(g: &Graph) -> Result<Self> {
        let n = g.vertex_count();
        if n == 0 {
            return Err(Error::NotATree("empty graph".into()));
        }
        if g.edge_count() + 1 != n {
            return Err(Error::NotATree(format!(
                "{n} vertices but {} edges",
                g.edge_count()
            )));
        }
        let root = (0..n).find(|&v| g.degree(v) >= 2).unwrap_or(0);
        // visited marks as a bitset: it stays in cache where a vertex-indexed
        // parent array would not
        let mut seen = vec![0u64; n.div_ceil(64)];
        seen[root / 64] |= 1 << (root % 64);
        let mut order = Vec::with_capacity(n);
        let mut up = Vec::with_capacity(n);
        order.push(root);
        up.push(0);
        let mut child_start = Vec::with_capacity(n + 1);
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            let pv = order[up[i]];
            child_start.push(order.len());
            for &u in g.neighbors(v) {
                if u == pv && i != 0 {
                    continue;
                }
                let (word, bit) = (u / 64, 1u64 << (u % 64));
                if seen[word] & bit != 0 {
                    return Err(Error::NotATree("contains a cycle".into()));
                }
                seen[word] |= bit;
                order.push(u);
                up.push(i);
            }
            i += 1;
        }
        if order.len() != n {
            return Err(Error::NotATree("disconnected".into()));
        }
        child_start.push(n);
        Ok(RootedTree {
            root,
            up,
            order,
            index: OnceLock::new(),
            child_start,
        })
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn vertex_count(&self) -> usize {
        self.order.len()
    }

    pub fn parent(&self, v: usize) -> usize {
        self.order[self.up[self.index()[v]]]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        let i = self.index()[v];
        &self.order[self.child_start[i]..self.child_start[i + 1]]
    }

    /// A vertex is a leaf of the unrooted tree (degree at most one).
    pub fn is_leaf(&self, v: usize) -> bool {
        self.leaf_at(self.index()[v])
    }

    fn index(&self) -> &[usize] {
        self.index.get_or_init(|| {
            let mut index = vec![0; self.order.len()];
            for (i, &v) in self.order.iter().enumerate() {
                index[v] = i;
            }
            index
        })
    }

    /// Leaf test by breadth-first position.
    fn leaf_at(&self, i: usize) -> bool {
        let degree = self.child_start[i + 1] - self.child_start[i] + usize::from(i != 0);
        degree <= 1
    }

    pub fn leaf_count(&self) -> usize {
        (0..self.vertex_count())
            .filter(|&i| self.leaf_at(i))
            .count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Open,
    Closed,
}

/// A path known by its endpoints.
///
/// An open path climbs from the leaf `start` to its ancestor `end`, so the
/// two endpoints determine it. A combined path climbs from `start` to a
/// turning vertex and descends to `end`; the arena remembers the turn.
/// Closed paths have both endpoints at leaves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EndpointPath {
    pub start: usize,
    pub end: usize,
    pub status: Status,
    record: u32,
}

impl EndpointPath {
    /// The open singleton path at a leaf.
    pub fn singleton(leaf: usize) -> Self {
        EndpointPath {
            start: leaf,
            end: leaf,
            status: Status::Open,
            record: NONE,
        }
    }

    /// Appends the parent of the upper endpoint.
    pub fn extend(self, tree: &RootedTree, v: usize) -> Self {
        assert!(
            self.status == Status::Open && self.record == NONE,
            "only open chains can be extended"
        );
        assert!(
            self.end != tree.root() && tree.parent(self.end) == v,
            "{v} is not the parent of endpoint {}",
            self.end
        );
        EndpointPath { end: v, ..self }
    }
}

/// `P · v`: extends each of at most two open paths by `v`.
pub fn concat(tree: &RootedTree, paths: &[EndpointPath], v: usize) -> Vec<EndpointPath> {
    assert!(paths.len() <= 2, "at most two paths can be forwarded");
    paths.iter().map(|p| p.extend(tree, v)).collect()
}

/// The turn of a combined path: the tops of its two chains and the vertex
/// joining them.
#[derive(Clone, Copy, Debug)]
struct Turn {
    first: u32,
    middle: u32,
    second: u32,
}

/// Storage for combined paths. Open paths need none.
#[derive(Debug, Default)]
pub struct PathArena {
    turns: Vec<Turn>,
}

impl PathArena {
    pub fn new() -> Self {
        Self::default()
    }

    /// Joins two open paths from different children of `v`:
    /// `(a_1..a_j, v, b_k..b_1)`.
    pub fn comb(
        &mut self,
        tree: &RootedTree,
        p1: EndpointPath,
        p2: EndpointPath,
        v: usize,
    ) -> EndpointPath {
        assert!(
            [p1, p2]
                .iter()
                .all(|p| p.status == Status::Open && p.record == NONE),
            "only open chains can be combined"
        );
        assert!(
            [p1, p2]
                .iter()
                .all(|p| p.end != tree.root() && tree.parent(p.end) == v),
            "both paths must end at children of {v}"
        );
        assert_ne!(
            p1.end, p2.end,
            "paths from the same child cannot be combined"
        );
        let closed = tree.is_leaf(p1.start) && tree.is_leaf(p2.start);
        self.comb_unchecked(p1, p2, v, closed)
    }

    fn comb_unchecked(
        &mut self,
        p1: EndpointPath,
        p2: EndpointPath,
        v: usize,
        closed: bool,
    ) -> EndpointPath {
        self.turns.push(Turn {
            first: p1.end as u32,
            middle: v as u32,
            second: p2.end as u32,
        });
        EndpointPath {
            start: p1.start,
            end: p2.start,
            status: if closed { Status::Closed } else { Status::Open },
            record: (self.turns.len() - 1) as u32,
        }
    }

    /// Full vertex sequence of a path.
    pub fn expand(&self, tree: &RootedTree, p: &EndpointPath) -> Path {
        self.expand_with(p, |v| tree.parent(v), |v| v)
    }

    /// Expansion over any labelling: `up` gives the parent and `label` the
    /// vertex id reported for each node.
    fn expand_with(
        &self,
        p: &EndpointPath,
        up: impl Fn(usize) -> usize,
        label: impl Fn(usize) -> usize,
    ) -> Path {
        let climb = |from: usize, to: usize, out: &mut Vec<usize>| {
            let mut v = from;
            out.push(label(v));
            while v != to {
                v = up(v);
                out.push(label(v));
            }
        };
        let mut out = Vec::new();
        if p.record == NONE {
            climb(p.start, p.end, &mut out);
        } else {
            let turn = self.turns[p.record as usize];
            climb(p.start, turn.first as usize, &mut out);
            out.push(label(turn.middle as usize));
            let mid = out.len();
            climb(p.end, turn.second as usize, &mut out);
            out[mid..].reverse();
        }
        Path(out)
    }
}

/// Indices of two paths arriving from different children, looking only at
/// the first three entries. Paths must be grouped by child; each child
/// contributes at most two.
pub fn find_unrelated_pair(paths: &[EndpointPath]) -> (usize, usize) {
    assert!(paths.len() >= 3, "need at least three paths");
    if paths[0].end != paths[1].end {
        (0, 1)
    } else {
        assert_ne!(
            paths[0].end, paths[2].end,
            "a child forwarded more than two paths"
        );
        (0, 2)
    }
}

/// Minimum path cover of a tree.
///
/// Works on breadth-first positions in reverse, which visits children
/// before parents, and translates back to vertex ids when expanding.
pub fn solve_tree(tree: &RootedTree) -> PathSystem {
    let n = tree.vertex_count();
    if n <= 2 {
        let p = Path((0..n).collect());
        return PathSystem::new(vec![p], Mode::Cover, Variant::PLAIN);
    }
    let mut arena = PathArena::new();
    let mut closed: Vec<EndpointPath> = Vec::new();
    // Starts of the open paths handed up by each position (NONE if
    // empty); their upper endpoint is the position itself. Every open path
    // starts at a leaf, so any two combined paths close.
    let mut forwarded: Vec<[u32; 2]> = vec![[NONE; 2]; n];
    let mut incoming: Vec<EndpointPath> = Vec::new();
    for v in (0..n).rev() {
        if tree.leaf_at(v) {
            forwarded[v][0] = v as u32;
            continue;
        }
        incoming.clear();
        let (lo, hi) = (tree.child_start[v], tree.child_start[v + 1]);
        for (c, starts) in (lo..hi).zip(&forwarded[lo..hi]) {
            for &start in starts.iter().filter(|&&s| s != NONE) {
                incoming.push(EndpointPath {
                    start: start as usize,
                    end: c,
                    status: Status::Open,
                    record: NONE,
                });
            }
        }
        if v == 0 {
            close_at_root(&mut arena, &incoming, &mut closed);
            continue;
        }
        // Combine from the front: the first path and one of the next two
        // always come from different children.
        let mut front = 0;
        while incoming.len() - front > 2 {
            let (i, j) = find_unrelated_pair(&incoming[front..]);
            closed.push(arena.comb_unchecked(incoming[front + i], incoming[front + j], v, true));
            if j == 2 {
                incoming[front + 2] = incoming[front + 1];
            }
            front += 2;
        }
        for (slot, p) in forwarded[v].iter_mut().zip(&incoming[front..]) {
            *slot = p.start as u32;
        }
    }
    let paths = closed
        .iter()
        .map(|p| arena.expand_with(p, |i| tree.up[i], |i| tree.order[i]))
        .collect();
    PathSystem::new(paths, Mode::Cover, Variant::PLAIN)
}

/// Closes all paths at the root (position 0). Pairing entry `i` with entry
/// `i + h` (`h = ceil(m / 2)`) never pairs two paths of the same child,
/// because each child contributes at most two consecutive entries and the
/// root has at least two children.
fn close_at_root(arena: &mut PathArena, incoming: &[EndpointPath], closed: &mut Vec<EndpointPath>) {
    let m = incoming.len();
    let h = m.div_ceil(2);
    for i in 0..m / 2 {
        closed.push(arena.comb_unchecked(incoming[i], incoming[i + h], 0, true));
    }
    if m % 2 == 1 {
        closed.push(EndpointPath {
            end: 0,
            ..incoming[h - 1]
        });
    }
}

/// Convenience wrapper: roots `g` and solves it.
pub fn solve_tree_graph(g: &Graph) -> Result<PathSystem> {
    Ok(solve_tree(&RootedTree::from_graph(g)?))
}
