//! Instance families, with a matching decomposition where one is known.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decomposition::TreeDecomposition;
use crate::error::{Error, Result};
use crate::graph::Graph;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn path(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "a cycle needs at least 3 vertices, got {n}"
        )));
    }
    Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
}

/// `K_{1,k}` with centre 0.
pub fn star(k: usize) -> Graph {
    Graph::new(k + 1, (1..=k).map(|i| (0, i))).expect("valid star")
}

/// Uniform random labelled tree (Prüfer sequence).
pub fn random_tree(n: usize, seed: u64) -> Graph {
    let mut r = rng(seed);
    random_tree_with(n, &mut r)
}

pub fn random_tree_with(n: usize, r: &mut impl Rng) -> Graph {
    if n <= 2 {
        return path(n);
    }
    let code: Vec<usize> = (0..n - 2).map(|_| r.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &c in &code {
        degree[c] += 1;
    }
    let mut leaves: std::collections::BinaryHeap<std::cmp::Reverse<usize>> = (0..n)
        .filter(|&v| degree[v] == 1)
        .map(std::cmp::Reverse)
        .collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &c in &code {
        let std::cmp::Reverse(leaf) = leaves.pop().expect("a leaf remains");
        edges.push((leaf, c));
        degree[c] -= 1;
        if degree[c] == 1 {
            leaves.push(std::cmp::Reverse(c));
        }
    }
    let std::cmp::Reverse(a) = leaves.pop().expect("two leaves remain");
    let std::cmp::Reverse(b) = leaves.pop().expect("two leaves remain");
    edges.push((a, b));
    Graph::new(n, edges).expect("valid tree")
}

/// A random partial `t`-tree on `n` vertices: each new vertex is attached
/// to a random clique of the underlying `t`-tree, and each `t`-tree edge is
/// kept with probability `keep`. Returns the graph and the width-`t`
/// decomposition that the construction yields.
pub fn random_tw_graph(
    n: usize,
    t: usize,
    keep: f64,
    seed: u64,
) -> Result<(Graph, TreeDecomposition)> {
    if t == 0 || !(0.0..=1.0).contains(&keep) {
        return Err(Error::InvalidParameter(
            "need t >= 1 and keep in [0, 1]".into(),
        ));
    }
    let mut r = rng(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut r);
    let first = n.min(t + 1);
    let mut edges = Vec::new();
    let mut bags: Vec<Vec<usize>> = vec![order[..first].to_vec()];
    let mut tree_edges = Vec::new();
    for i in 0..first {
        for j in i + 1..first {
            edges.push((order[i], order[j]));
        }
    }
    // cliques of size t available for attachment, with the bag holding them
    let mut cliques: Vec<(Vec<usize>, usize)> = Vec::new();
    if first == t + 1 {
        for skip in 0..first {
            let c: Vec<usize> = (0..first)
                .filter(|&i| i != skip)
                .map(|i| order[i])
                .collect();
            cliques.push((c, 0));
        }
    }
    for &v in &order[first..] {
        let (clique, at) = cliques[r.gen_range(0..cliques.len())].clone();
        for &u in &clique {
            edges.push((u, v));
        }
        let mut bag = clique.clone();
        bag.push(v);
        let id = bags.len();
        bags.push(bag.clone());
        tree_edges.push((at, id));
        for &skip in &clique {
            let mut c: Vec<usize> = bag.iter().copied().filter(|&w| w != skip).collect();
            c.sort_unstable();
            cliques.push((c, id));
        }
    }
    let kept: Vec<(usize, usize)> = edges.into_iter().filter(|_| r.gen_bool(keep)).collect();
    let g = Graph::new(n, kept)?;
    Ok((g, TreeDecomposition::new(n, bags, tree_edges)))
}

/// The bubble chain: `s` blocks, each a `K_{2,s}` (two cut vertices joined
/// by `s` strands of one inner vertex), consecutive blocks sharing a cut
/// vertex. Treewidth 2, `s^2 + s + 1` vertices.
///
/// Returns the graph, a width-2 decomposition, and the index of its
/// central bag (the one holding both cut vertices of the middle block).
pub fn figure2(s: usize) -> Result<(Graph, TreeDecomposition, usize)> {
    if s < 2 {
        return Err(Error::InvalidParameter(format!(
            "figure2 needs s >= 2, got {s}"
        )));
    }
    // Cut vertices 0..=s, then the strands block by block.
    let n = s * s + s + 1;
    let mut edges = Vec::new();
    let mut bags: Vec<Vec<usize>> = Vec::new();
    let mut tree_edges = Vec::new();
    let mut hub = Vec::with_capacity(s);
    for b in 0..s {
        let (left, right) = (b, b + 1);
        let h = bags.len();
        hub.push(h);
        bags.push(vec![left, right]);
        if b > 0 {
            tree_edges.push((hub[b - 1], h));
        }
        for strand in 0..s {
            let x = s + 1 + b * s + strand;
            edges.extend([(left, x), (x, right)]);
            tree_edges.push((h, bags.len()));
            bags.push(vec![left, right, x]);
        }
    }
    let g = Graph::new(n, edges)?;
    let td = TreeDecomposition::new(n, bags, tree_edges);
    Ok((g, td, hub[s / 2]))
}

/// All graphs on `n` vertices up to isomorphism (`n <= 8`), each in its
/// canonical labelling, built by adding one vertex to every graph on
/// `n - 1` vertices in all possible ways.
pub fn graph_atlas(n: usize) -> Vec<Graph> {
    assert!(n <= 8, "the atlas is only practical for n <= 8");
    let mut layer: Vec<u64> = vec![0];
    for m in 1..=n {
        let perms = permutations(m);
        let mut next = std::collections::BTreeSet::new();
        for &code in &layer {
            for mask in 0..(1u64 << (m - 1)) {
                let mut c = code;
                for u in 0..m - 1 {
                    if mask >> u & 1 == 1 {
                        c |= 1 << pair_bit(u, m - 1);
                    }
                }
                next.insert(canonical_code(c, m, &perms));
            }
        }
        layer = next.into_iter().collect();
    }
    layer.into_iter().map(|code| decode(code, n)).collect()
}

/// Connected members of [`graph_atlas`].
pub fn connected_atlas(n: usize) -> Vec<Graph> {
    graph_atlas(n)
        .into_iter()
        .filter(|g| g.is_connected())
        .collect()
}

fn pair_bit(u: usize, v: usize) -> usize {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    b * (b - 1) / 2 + a
}

fn decode(code: u64, n: usize) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        for u in 0..v {
            if code >> pair_bit(u, v) & 1 == 1 {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).expect("valid code")
}

fn canonical_code(code: u64, m: usize, perms: &[Vec<usize>]) -> u64 {
    let edges: Vec<(usize, usize)> = (1..m)
        .flat_map(|v| (0..v).map(move |u| (u, v)))
        .filter(|&(u, v)| code >> pair_bit(u, v) & 1 == 1)
        .collect();
    perms
        .iter()
        .map(|p| {
            edges
                .iter()
                .fold(0u64, |acc, &(u, v)| acc | 1 << pair_bit(p[u], p[v]))
        })
        .min()
        .unwrap_or(0)
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..m).collect();
    heap(m, &mut cur, &mut out);
    out
}

fn heap(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(cur.clone());
        return;
    }
    for i in 0..k - 1 {
        heap(k - 1, cur, out);
        if k.is_multiple_of(2) {
            cur.swap(i, k - 1);
        } else {
            cur.swap(0, k - 1);
        }
    }
    heap(k - 1, cur, out);
}
