use std::collections::BTreeSet;

use super::TreeDecomposition;
use crate::graph::Graph;

/// Min-degree elimination. Always valid; the width is only an upper bound
/// on the treewidth. Ties go to the lowest vertex id.
pub fn heuristic_decomposition(g: &Graph) -> TreeDecomposition {
    let n = g.vertex_count();
    let mut adj: Vec<BTreeSet<usize>> = (0..n)
        .map(|v| g.neighbors(v).iter().copied().collect())
        .collect();
    let mut eliminated = vec![false; n];
    let mut position = vec![usize::MAX; n];
    let mut bags = Vec::with_capacity(n);
    let mut order = Vec::with_capacity(n);
    for step in 0..n {
        let v = (0..n)
            .filter(|&v| !eliminated[v])
            .min_by_key(|&v| (adj[v].len(), v))
            .expect("a vertex remains");
        eliminated[v] = true;
        position[v] = step;
        order.push(v);
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        let mut bag = nb.clone();
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
        for (i, &a) in nb.iter().enumerate() {
            adj[a].remove(&v);
            for &b in &nb[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
    }
    // Bag i (for order[i]) attaches to the bag of its earliest-eliminated
    // later neighbour; components without one are chained together.
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    let mut roots = Vec::new();
    for (i, bag) in bags.iter().enumerate() {
        let parent = bag
            .iter()
            .filter(|&&u| u != order[i])
            .map(|&u| position[u])
            .min();
        match parent {
            Some(p) => edges.push((i, p)),
            None => roots.push(i),
        }
    }
    for w in roots.windows(2) {
        edges.push((w[0], w[1]));
    }
    TreeDecomposition::new(n, bags, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::validate_decomposition;

    #[test]
    fn known_widths() {
        let tree = Graph::new(6, [(0, 1), (1, 2), (1, 3), (3, 4), (3, 5)]).unwrap();
        let td = heuristic_decomposition(&tree);
        assert!(validate_decomposition(&tree, &td).unwrap());
        assert_eq!(td.width(), Some(1));

        let c7 = Graph::new(7, (0..7).map(|i| (i, (i + 1) % 7))).unwrap();
        let td = heuristic_decomposition(&c7);
        assert!(validate_decomposition(&c7, &td).unwrap());
        assert_eq!(td.width(), Some(2));

        let k5 = Graph::new(5, (0..5).flat_map(|u| (u + 1..5).map(move |v| (u, v)))).unwrap();
        let td = heuristic_decomposition(&k5);
        assert!(validate_decomposition(&k5, &td).unwrap());
        assert_eq!(td.width(), Some(4));
    }

    #[test]
    fn disconnected_and_tiny() {
        let g = Graph::new(5, [(0, 1), (3, 4)]).unwrap();
        let td = heuristic_decomposition(&g);
        assert!(validate_decomposition(&g, &td).unwrap());
        let g = Graph::empty(1);
        let td = heuristic_decomposition(&g);
        assert!(validate_decomposition(&g, &td).unwrap());
        assert_eq!(td.width(), Some(0));
    }
}
