//! Independent ground truth shared by the integration suites.

#![allow(dead_code)]

use std::collections::BTreeSet;

use pathcover::Graph;

/// `⌈ℓ/2⌉` over the degree-one vertices, and 1 for graphs without any.
pub fn half_leaves(g: &Graph) -> usize {
    let l = (0..g.vertex_count()).filter(|&v| g.degree(v) == 1).count();
    l.div_ceil(2).max(1)
}

/// Every unlabelled tree on `n` vertices, grown leaf by leaf and
/// deduplicated by a centre-rooted canonical string.
pub fn all_trees(n: usize) -> Vec<Graph> {
    assert!(n >= 1);
    let mut layer: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
    for m in 2..=n {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for edges in &layer {
            for attach in 0..m - 1 {
                let mut e = edges.clone();
                e.push((attach, m - 1));
                if seen.insert(tree_code(m, &e)) {
                    next.push(e);
                }
            }
        }
        layer = next;
    }
    layer
        .into_iter()
        .map(|e| Graph::new(n, e).unwrap())
        .collect()
}

fn tree_code(n: usize, edges: &[(usize, usize)]) -> String {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    // Peel leaves to find the centre.
    let mut deg: Vec<usize> = adj.iter().map(|a| a.len()).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    let mut left = n;
    while left > 2 {
        left -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &u in &adj[v] {
                deg[u] -= 1;
                if deg[u] == 1 {
                    next.push(u);
                }
            }
        }
        layer = next;
    }
    layer
        .iter()
        .map(|&c| rooted_code(&adj, c, usize::MAX))
        .min()
        .unwrap()
}

fn rooted_code(adj: &[Vec<usize>], v: usize, parent: usize) -> String {
    let mut parts: Vec<String> = adj[v]
        .iter()
        .filter(|&&u| u != parent)
        .map(|&u| rooted_code(adj, u, v))
        .collect();
    parts.sort();
    format!("({})", parts.concat())
}

/// Vertex sets of all simple paths (single vertices included).
fn path_sets(g: &Graph) -> Vec<u64> {
    let mut out = BTreeSet::new();
    fn walk(g: &Graph, v: usize, mask: u64, out: &mut BTreeSet<u64>) {
        out.insert(mask);
        for &u in g.neighbors(v) {
            if mask >> u & 1 == 0 {
                walk(g, u, mask | 1 << u, out);
            }
        }
    }
    for v in 0..g.vertex_count() {
        walk(g, v, 1 << v, &mut out);
    }
    out.into_iter().collect()
}

/// Among covers by exactly `size` paths, the fewest paths that meet `bag`.
/// `None` when no such cover exists.
pub fn min_paths_meeting(g: &Graph, bag: &[usize], size: usize) -> Option<usize> {
    let sets = path_sets(g);
    let full = (1u64 << g.vertex_count()) - 1;
    let bag_mask = bag.iter().fold(0u64, |m, &v| m | 1 << v);
    let mut best = None;
    search(&sets, full, bag_mask, 0, size, 0, &mut best);
    best
}

fn search(
    sets: &[u64],
    full: u64,
    bag: u64,
    covered: u64,
    left: usize,
    meeting: usize,
    best: &mut Option<usize>,
) {
    if best.is_some_and(|b| meeting >= b) {
        return;
    }
    if covered == full {
        // Fewer than `size` paths is only possible below the optimum.
        *best = Some(meeting);
        return;
    }
    if left == 0 {
        return;
    }
    let v = (!covered & full).trailing_zeros();
    for &s in sets {
        if s >> v & 1 == 1 {
            search(
                sets,
                full,
                bag,
                covered | s,
                left - 1,
                meeting + (s & bag != 0) as usize,
                best,
            );
        }
    }
}
