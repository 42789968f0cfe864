use std::collections::BTreeSet;

use super::TreeDecomposition;
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Leaf,
    Introduce(usize),
    Forget(usize),
    Join,
    /// Only present in advanced nice decompositions.
    IntroduceEdge(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NodeKind,
    /// Sorted.
    pub bag: Vec<usize>,
    pub children: Vec<usize>,
}

/// A rooted nice tree decomposition.
///
/// Nodes are stored in post-order: every child precedes its parent and the
/// root is the last node, so a forward scan is a valid bottom-up schedule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceTreeDecomposition {
    vertex_count: usize,
    nodes: Vec<NiceNode>,
}

impl NiceTreeDecomposition {
    pub fn nodes(&self) -> &[NiceNode] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &NiceNode {
        &self.nodes[id]
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn width(&self) -> Option<usize> {
        self.nodes
            .iter()
            .map(|n| n.bag.len())
            .max()
            .filter(|&m| m > 0)
            .map(|m| m - 1)
    }

    /// Parent of each node; the root maps to itself.
    pub fn parents(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.nodes.len()).collect();
        for (id, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                parent[c] = id;
            }
        }
        parent
    }

    fn push(&mut self, kind: NodeKind, bag: Vec<usize>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode {
            kind,
            bag,
            children,
        });
        self.nodes.len() - 1
    }

    /// The underlying plain decomposition (for validation).
    pub fn as_tree_decomposition(&self) -> TreeDecomposition {
        let bags = self.nodes.iter().map(|n| n.bag.clone()).collect();
        let edges = self
            .nodes
            .iter()
            .enumerate()
            .flat_map(|(id, n)| n.children.iter().map(move |&c| (c, id)))
            .collect();
        TreeDecomposition::new(self.vertex_count, bags, edges)
    }

    /// Checks the nice-form invariants and that the bags decompose `g`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        self.validate_kinds(false)?;
        self.as_tree_decomposition().validate(g)
    }

    fn validate_kinds(&self, allow_edges: bool) -> Result<()> {
        let bad = |node: usize, msg: &str| {
            Err(Error::InvalidDecomposition {
                node,
                msg: msg.to_string(),
            })
        };
        if self.nodes.is_empty() {
            return bad(0, "no nodes");
        }
        if !self.nodes[self.root()].bag.is_empty() {
            return bad(self.root(), "root bag must be empty");
        }
        let mut has_parent = vec![false; self.nodes.len()];
        for (id, node) in self.nodes.iter().enumerate() {
            if node.bag.windows(2).any(|w| w[0] >= w[1]) {
                return bad(id, "bag must be sorted without repeats");
            }
            for &c in &node.children {
                if c >= id {
                    return bad(id, "nodes must be in post-order");
                }
                if has_parent[c] {
                    return bad(c, "node has two parents");
                }
                has_parent[c] = true;
            }
            let child_bag = |i: usize| &self.nodes[node.children[i]].bag;
            let ok = match node.kind {
                NodeKind::Leaf => node.children.is_empty() && node.bag.is_empty(),
                NodeKind::Introduce(x) => {
                    node.children.len() == 1 && {
                        let mut expect = child_bag(0).clone();
                        !expect.contains(&x) && {
                            expect.push(x);
                            expect.sort_unstable();
                            expect == node.bag
                        }
                    }
                }
                NodeKind::Forget(x) => {
                    node.children.len() == 1 && child_bag(0).contains(&x) && {
                        let expect: Vec<usize> =
                            child_bag(0).iter().copied().filter(|&v| v != x).collect();
                        expect == node.bag
                    }
                }
                NodeKind::Join => {
                    node.children.len() == 2
                        && *child_bag(0) == node.bag
                        && *child_bag(1) == node.bag
                }
                NodeKind::IntroduceEdge(u, v) => {
                    allow_edges
                        && node.children.len() == 1
                        && *child_bag(0) == node.bag
                        && node.bag.contains(&u)
                        && node.bag.contains(&v)
                }
            };
            if !ok {
                return bad(
                    id,
                    &format!("{:?} node inconsistent with its bags", node.kind),
                );
            }
        }
        if has_parent.iter().filter(|&&p| !p).count() != 1 {
            return bad(0, "more than one root");
        }
        Ok(())
    }
}

/// Merges neighbouring nodes whose bags are nested, so that no bag is a
/// subset of an adjacent one. Returns sorted bags and children lists of a
/// tree rooted at index 0.
fn compress(td: &TreeDecomposition) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let k = td.node_count();
    let adj = td.tree_adjacency();
    let mut bags: Vec<BTreeSet<usize>> = td
        .bags
        .iter()
        .map(|b| b.iter().copied().collect())
        .collect();
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut seen = vec![false; k];
    let mut order = vec![0];
    seen[0] = true;
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        i += 1;
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                children[x].push(y);
                order.push(y);
            }
        }
    }
    let mut alive = vec![true; k];
    for &x in &order {
        if !alive[x] {
            continue;
        }
        let mut idx = 0;
        while idx < children[x].len() {
            let c = children[x][idx];
            let merge = bags[c].is_subset(&bags[x]) || bags[x].is_subset(&bags[c]);
            if merge {
                if bags[x].is_subset(&bags[c]) {
                    bags[x] = std::mem::take(&mut bags[c]);
                }
                alive[c] = false;
                let grand = std::mem::take(&mut children[c]);
                children[x].swap_remove(idx);
                children[x].extend(grand);
                idx = 0;
            } else {
                idx += 1;
            }
        }
    }
    let mut index = vec![usize::MAX; k];
    let mut live = Vec::new();
    for &x in &order {
        if alive[x] {
            index[x] = live.len();
            live.push(x);
        }
    }
    let out_bags = live
        .iter()
        .map(|&x| bags[x].iter().copied().collect())
        .collect();
    let out_children = live
        .iter()
        .map(|&x| {
            let mut c: Vec<usize> = children[x].iter().map(|&c| index[c]).collect();
            c.sort_unstable();
            c
        })
        .collect();
    (out_bags, out_children)
}

fn difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|v| !b.contains(v)).collect()
}

/// Converts a valid decomposition of `g` into nice form of the same width.
///
/// Vertices are forgotten, then introduced, in increasing order along every
/// tree edge; nodes with several children become a chain of binary joins.
pub fn to_nice(g: &Graph, td: &TreeDecomposition) -> Result<NiceTreeDecomposition> {
    td.validate(g)?;
    let mut out = NiceTreeDecomposition {
        vertex_count: g.vertex_count(),
        nodes: Vec::new(),
    };
    if td.node_count() == 0 {
        out.push(NodeKind::Leaf, Vec::new(), Vec::new());
        return Ok(out);
    }
    let (bags, children) = compress(td);
    // Compressed index 0 is the root; children have larger indices in BFS
    // order, so a reverse scan visits children first.
    let mut top = vec![usize::MAX; bags.len()];
    for x in (0..bags.len()).rev() {
        let bag = &bags[x];
        if children[x].is_empty() {
            let id = out.push(NodeKind::Leaf, Vec::new(), Vec::new());
            top[x] = introduce_all(&mut out, id, &[], bag);
            continue;
        }
        // forget down to the shared part, then join; vertices are
        // introduced as late as possible, those new at this node last
        let mut reduced: Vec<(Vec<usize>, usize)> = children[x]
            .iter()
            .map(|&c| {
                let mut id = top[c];
                let mut have = bags[c].clone();
                for v in difference(&bags[c], bag) {
                    have.retain(|&w| w != v);
                    id = out.push(NodeKind::Forget(v), have.clone(), vec![id]);
                }
                (have, id)
            })
            .collect();
        reduced.sort();
        let mut current: Option<(Vec<usize>, usize)> = None;
        for (have, id) in reduced {
            current = Some(match current {
                None => (have, id),
                Some((acc_bag, acc)) => {
                    let mut target = acc_bag.clone();
                    target.extend(difference(&have, &acc_bag));
                    target.sort_unstable();
                    let left = introduce_all(&mut out, acc, &acc_bag, &target);
                    let right = introduce_all(&mut out, id, &have, &target);
                    let joined = out.push(NodeKind::Join, target.clone(), vec![left, right]);
                    (target, joined)
                }
            });
        }
        let (have, id) = current.expect("at least one child");
        top[x] = introduce_all(&mut out, id, &have, bag);
    }
    let mut id = top[0];
    let mut have = bags[0].clone();
    for v in bags[0].clone() {
        have.retain(|&w| w != v);
        id = out.push(NodeKind::Forget(v), have.clone(), vec![id]);
    }
    debug_assert_eq!(id, out.root());
    Ok(out)
}

fn introduce_all(
    out: &mut NiceTreeDecomposition,
    mut id: usize,
    have: &[usize],
    target: &[usize],
) -> usize {
    let mut bag = have.to_vec();
    for v in difference(target, have) {
        bag.push(v);
        bag.sort_unstable();
        id = out.push(NodeKind::Introduce(v), bag.clone(), vec![id]);
    }
    id
}

/// A nice decomposition with one introduce-edge node per graph edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdvancedNiceTreeDecomposition(NiceTreeDecomposition);

impl AdvancedNiceTreeDecomposition {
    pub fn nice(&self) -> &NiceTreeDecomposition {
        &self.0
    }

    pub fn nodes(&self) -> &[NiceNode] {
        self.0.nodes()
    }

    pub fn root(&self) -> usize {
        self.0.root()
    }

    pub fn width(&self) -> Option<usize> {
        self.0.width()
    }

    pub fn validate(&self, g: &Graph) -> Result<()> {
        self.0.validate_kinds(true)?;
        self.0.as_tree_decomposition().validate(g)?;
        let mut count = vec![0usize; g.edge_count()];
        for (id, node) in self.0.nodes.iter().enumerate() {
            if let NodeKind::IntroduceEdge(u, v) = node.kind {
                let e = g.edge_index(u, v).ok_or(Error::InvalidDecomposition {
                    node: id,
                    msg: format!("{u}-{v} is not an edge"),
                })?;
                count[e] += 1;
            }
        }
        if let Some(e) = count.iter().position(|&c| c != 1) {
            let (u, v) = g.edges()[e];
            return Err(Error::InvalidDecomposition {
                node: 0,
                msg: format!("edge {u}-{v} introduced {} times", count[e]),
            });
        }
        Ok(())
    }
}

/// Adds one introduce-edge node per edge of `g`.
///
/// Each edge is placed directly below the forget node of whichever endpoint
/// is forgotten first; at that point both endpoints are in the bag. Edges
/// sharing a position are stacked in lexicographic order, lowest first.
pub fn to_advanced_nice(
    ntd: &NiceTreeDecomposition,
    g: &Graph,
) -> Result<AdvancedNiceTreeDecomposition> {
    ntd.validate_kinds(false)?;
    let n = g.vertex_count();
    let parents = ntd.parents();
    let mut depth = vec![0usize; ntd.len()];
    for id in (0..ntd.len()).rev() {
        if parents[id] != id {
            depth[id] = depth[parents[id]] + 1;
        }
    }
    let mut below_forget = vec![usize::MAX; n];
    for node in ntd.nodes() {
        if let NodeKind::Forget(x) = node.kind {
            below_forget[x] = node.children[0];
        }
    }
    let mut insert_at: Vec<Vec<(usize, usize)>> = vec![Vec::new(); ntd.len()];
    for &(u, v) in g.edges() {
        let (cu, cv) = (below_forget[u], below_forget[v]);
        if cu == usize::MAX || cv == usize::MAX {
            return Err(Error::InvalidDecomposition {
                node: 0,
                msg: format!("an endpoint of {u}-{v} is never forgotten"),
            });
        }
        let at = if depth[cu] >= depth[cv] { cu } else { cv };
        let bag = &ntd.nodes[at].bag;
        if !(bag.contains(&u) && bag.contains(&v)) {
            return Err(Error::InvalidDecomposition {
                node: at,
                msg: format!("endpoints of {u}-{v} never share a bag"),
            });
        }
        insert_at[at].push((u, v));
    }
    let mut out = NiceTreeDecomposition {
        vertex_count: ntd.vertex_count,
        nodes: Vec::with_capacity(ntd.len() + g.edge_count()),
    };
    let mut map = vec![usize::MAX; ntd.len()];
    for (id, node) in ntd.nodes().iter().enumerate() {
        let children = node.children.iter().map(|&c| map[c]).collect();
        let mut last = out.push(node.kind, node.bag.clone(), children);
        for &(u, v) in &insert_at[id] {
            last = out.push(NodeKind::IntroduceEdge(u, v), node.bag.clone(), vec![last]);
        }
        map[id] = last;
    }
    Ok(AdvancedNiceTreeDecomposition(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> Graph {
        Graph::new(3, [(0, 1), (0, 2), (1, 2)]).unwrap()
    }

    #[test]
    fn single_bag_triangle() {
        let g = k3();
        let td = TreeDecomposition::new(3, vec![vec![2, 0, 1]], vec![]);
        let nice = to_nice(&g, &td).unwrap();
        nice.validate(&g).unwrap();
        let kinds: Vec<NodeKind> = nice.nodes().iter().map(|n| n.kind).collect();
        assert_eq!(
            kinds,
            vec![
                NodeKind::Leaf,
                NodeKind::Introduce(0),
                NodeKind::Introduce(1),
                NodeKind::Introduce(2),
                NodeKind::Forget(0),
                NodeKind::Forget(1),
                NodeKind::Forget(2),
            ]
        );
        assert_eq!(nice.width(), Some(2));

        let adv = to_advanced_nice(&nice, &g).unwrap();
        adv.validate(&g).unwrap();
        let edges = adv
            .nodes()
            .iter()
            .filter(|n| matches!(n.kind, NodeKind::IntroduceEdge(..)))
            .count();
        assert_eq!(edges, 3);
    }

    #[test]
    fn p3_nice_and_advanced() {
        let g = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        let td = TreeDecomposition::new(3, vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        let nice = to_nice(&g, &td).unwrap();
        nice.validate(&g).unwrap();
        assert_eq!(nice.width(), Some(1));
        let adv = to_advanced_nice(&nice, &g).unwrap();
        adv.validate(&g).unwrap();
        assert_eq!(adv.nodes().len(), nice.len() + 2);
    }

    #[test]
    fn branching_node_becomes_joins() {
        // star with center 0; bag {0,1} has three neighbours
        let g = Graph::new(5, [(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let td = TreeDecomposition::new(
            5,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![0, 4]],
            vec![(0, 1), (0, 2), (0, 3)],
        );
        let nice = to_nice(&g, &td).unwrap();
        nice.validate(&g).unwrap();
        let joins = nice
            .nodes()
            .iter()
            .filter(|n| n.kind == NodeKind::Join)
            .count();
        assert_eq!(joins, 2);
        let adv = to_advanced_nice(&nice, &g).unwrap();
        adv.validate(&g).unwrap();
    }

    #[test]
    fn nested_bags_are_merged() {
        let g = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        let td = TreeDecomposition::new(
            3,
            vec![vec![1], vec![0, 1], vec![1], vec![1, 2], vec![1]],
            vec![(0, 1), (0, 2), (2, 3), (3, 4)],
        );
        let nice = to_nice(&g, &td).unwrap();
        nice.validate(&g).unwrap();
        assert!(nice.len() <= 4 * 3 + 1);
    }

    #[test]
    fn empty_graph() {
        let g = Graph::empty(0);
        let td = TreeDecomposition::new(0, vec![], vec![]);
        let nice = to_nice(&g, &td).unwrap();
        nice.validate(&g).unwrap();
        assert_eq!(nice.len(), 1);
    }

    #[test]
    fn invalid_input_rejected() {
        let g = k3();
        let td = TreeDecomposition::new(3, vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        assert!(to_nice(&g, &td).is_err());
    }
}
