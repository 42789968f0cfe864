use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::Graph;

use super::WeightAssignment;

/// One member of the family R: a path partition (as edge indices) with `k`
/// markers on its endpoints and isolated vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RscTuple {
    pub edges: Vec<usize>,
    pub markers: Vec<usize>,
    pub weight: u64,
    pub components: usize,
    /// Components without a marker.
    pub unmarked: usize,
}

impl RscTuple {
    /// Member of S: every path carries a marker.
    pub fn in_s(&self) -> bool {
        self.unmarked == 0
    }

    /// Number of consistent cuts with all markers on side 1.
    pub fn cuts(&self) -> u64 {
        1 << self.unmarked
    }
}

/// Sizes of R, S and C for one weight.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Census {
    pub r: u64,
    pub s: u64,
    pub c: u64,
}

/// Lists R by brute force, with the census per weight. Refuses graphs with
/// more than 6 vertices.
pub fn enumerate_rsc(
    g: &Graph,
    w: &WeightAssignment,
    k: usize,
) -> Result<(Vec<RscTuple>, BTreeMap<u64, Census>)> {
    let n = g.vertex_count();
    if n > 6 {
        return Err(Error::BudgetExceeded(format!(
            "enumeration is limited to 6 vertices, got {n}"
        )));
    }
    let m = g.edge_count();
    let mut tuples = Vec::new();
    for mask in 0u32..(1 << m) {
        let Some((comp_of, components)) = forest_components(g, mask) else {
            continue;
        };
        let mut degree = vec![0; n];
        for (i, &(a, b)) in g.edges().iter().enumerate() {
            if mask >> i & 1 == 1 {
                degree[a] += 1;
                degree[b] += 1;
            }
        }
        let ends: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
        let edges: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).collect();
        let edge_weight: u64 = edges.iter().map(|&i| w.edge[i]).sum();
        for pick in 0u32..(1 << ends.len()) {
            if pick.count_ones() as usize != k {
                continue;
            }
            let markers: Vec<usize> = (0..ends.len())
                .filter(|&i| pick >> i & 1 == 1)
                .map(|i| ends[i])
                .collect();
            let mut marked = vec![false; components];
            for &v in &markers {
                marked[comp_of[v]] = true;
            }
            tuples.push(RscTuple {
                weight: edge_weight + markers.iter().map(|&v| w.vertex[v]).sum::<u64>(),
                unmarked: marked.iter().filter(|&&b| !b).count(),
                edges: edges.clone(),
                markers,
                components,
            });
        }
    }
    let mut census: BTreeMap<u64, Census> = BTreeMap::new();
    for t in &tuples {
        let c = census.entry(t.weight).or_default();
        c.r += 1;
        c.s += t.in_s() as u64;
        c.c += t.cuts();
    }
    Ok((tuples, census))
}

/// Component labels when the chosen edges form a linear forest.
fn forest_components(g: &Graph, mask: u32) -> Option<(Vec<usize>, usize)> {
    let n = g.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut degree = vec![0; n];
    for (i, &(a, b)) in g.edges().iter().enumerate() {
        if mask >> i & 1 == 0 {
            continue;
        }
        degree[a] += 1;
        degree[b] += 1;
        if degree[a] > 2 || degree[b] > 2 {
            return None;
        }
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            return None;
        }
        parent[ra] = rb;
    }
    let mut label = vec![usize::MAX; n];
    let mut comp_of = vec![0; n];
    let mut count = 0;
    for (v, c) in comp_of.iter_mut().enumerate() {
        let r = find(&mut parent, v);
        if label[r] == usize::MAX {
            label[r] = count;
            count += 1;
        }
        *c = label[r];
    }
    Some((comp_of, count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::sample_weights;

    #[test]
    fn triangle_counts() {
        let g = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let w = sample_weights(&g, 1);
        // Linear forests of a triangle: empty, 3 single edges, 3 two-edge paths.
        let (r1, _) = enumerate_rsc(&g, &w, 1).unwrap();
        // k=1: empty gives 3 marker choices, one edge gives 2+1, a path gives 2.
        assert_eq!(r1.len(), 3 + 3 * 3 + 3 * 2);
        assert_eq!(r1.iter().filter(|t| t.in_s()).count(), 3 * 2);
    }

    #[test]
    fn single_edge_by_hand() {
        let g = Graph::new(2, [(0, 1)]).unwrap();
        let w = WeightAssignment {
            n_max: 6,
            vertex: vec![1, 2],
            edge: vec![3],
        };
        let (r, census) = enumerate_rsc(&g, &w, 1).unwrap();
        // P empty: mark 0 or 1, the other singleton unmarked.
        // P = {01}: mark 0 (weight 4) or 1 (weight 5), both in S.
        assert_eq!(r.len(), 4);
        assert_eq!(census[&1], Census { r: 1, s: 0, c: 2 });
        assert_eq!(census[&2], Census { r: 1, s: 0, c: 2 });
        assert_eq!(census[&4], Census { r: 1, s: 1, c: 1 });
        assert_eq!(census[&5], Census { r: 1, s: 1, c: 1 });
    }

    #[test]
    fn s_inside_r_and_cut_counts() {
        let g = Graph::new(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]).unwrap();
        let w = sample_weights(&g, 9);
        for k in 1..=5 {
            let (r, census) = enumerate_rsc(&g, &w, k).unwrap();
            for c in census.values() {
                assert!(c.s <= c.r);
                assert_eq!(c.s % 2, c.c % 2);
            }
            let total: u64 = r.iter().map(|t| 1u64 << t.unmarked).sum();
            assert_eq!(total, census.values().map(|c| c.c).sum::<u64>());
        }
    }

    #[test]
    fn refuses_large_graphs() {
        let g = Graph::empty(7);
        let w = sample_weights(&g, 1);
        assert!(enumerate_rsc(&g, &w, 1).is_err());
    }
}
