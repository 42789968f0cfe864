use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::decomposition::{AdvancedNiceTreeDecomposition, NodeKind};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Random weights on vertices and edges, uniform in `1..=n_max` with
/// `n_max = 2(|E| + |V|)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightAssignment {
    pub n_max: u64,
    pub vertex: Vec<u64>,
    /// Indexed like [`Graph::edges`].
    pub edge: Vec<u64>,
}

/// Draws vertex weights first, then edge weights in edge order, from a
/// ChaCha8 stream seeded with `seed`.
pub fn sample_weights(g: &Graph, seed: u64) -> WeightAssignment {
    let n_max = 2 * (g.edge_count() + g.vertex_count()) as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hi = n_max.max(1);
    let vertex = (0..g.vertex_count())
        .map(|_| rng.gen_range(1..=hi))
        .collect();
    let edge = (0..g.edge_count()).map(|_| rng.gen_range(1..=hi)).collect();
    WeightAssignment {
        n_max,
        vertex,
        edge,
    }
}

/// Degree of a vertex in the partial solution and its side of the cut.
/// Degree-two vertices take no more edges, so their side is not kept.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DegreeSide {
    Zero1,
    Zero2,
    One1,
    One2,
    Two,
}

impl DegreeSide {
    pub const ALL: [DegreeSide; 5] = [
        DegreeSide::Zero1,
        DegreeSide::Zero2,
        DegreeSide::One1,
        DegreeSide::One2,
        DegreeSide::Two,
    ];

    fn split(self) -> (u8, Option<u8>) {
        match self {
            DegreeSide::Zero1 => (0, Some(1)),
            DegreeSide::Zero2 => (0, Some(2)),
            DegreeSide::One1 => (1, Some(1)),
            DegreeSide::One2 => (1, Some(2)),
            DegreeSide::Two => (2, None),
        }
    }

    fn make(degree: u8, side: u8) -> Option<DegreeSide> {
        match (degree, side) {
            (0, 1) => Some(DegreeSide::Zero1),
            (0, 2) => Some(DegreeSide::Zero2),
            (1, 1) => Some(DegreeSide::One1),
            (1, 2) => Some(DegreeSide::One2),
            (2, _) => Some(DegreeSide::Two),
            _ => None,
        }
    }

    /// Labels after adding one solution edge at this vertex, on `side`.
    fn add_edge(self, side: u8) -> Option<DegreeSide> {
        match self.split() {
            (d, Some(s)) if s == side && d < 2 => DegreeSide::make(d + 1, s),
            _ => None,
        }
    }

    /// Label at a join from the labels on both sides, if compatible.
    /// A vertex of degree two on one side and zero on the other is counted
    /// once, through the `Zero1` representative: the two sides of an
    /// isolated bag vertex are symmetric.
    fn join(a: DegreeSide, b: DegreeSide) -> Option<DegreeSide> {
        match (a.split(), b.split()) {
            ((2, _), (0, Some(1))) | ((0, Some(1)), (2, _)) => Some(DegreeSide::Two),
            ((da, Some(sa)), (db, Some(sb))) if sa == sb => DegreeSide::make(da + db, sa),
            _ => None,
        }
    }
}

/// Parity of the number of (solution, markers, consistent cut) triples at
/// the root, for every total weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityTable {
    pub k: usize,
    pub max_weight: u64,
    bits: Vec<u64>,
}

impl ParityTable {
    pub fn is_odd(&self, omega: u64) -> bool {
        omega <= self.max_weight && self.bits[(omega / 64) as usize] >> (omega % 64) & 1 == 1
    }

    pub fn odd_weights(&self) -> Vec<u64> {
        (0..=self.max_weight).filter(|&w| self.is_odd(w)).collect()
    }

    pub fn any_odd(&self) -> bool {
        self.bits.iter().any(|&w| w != 0)
    }
}

/// GF(2) rows indexed by marker count, each a bitset over weights.
#[derive(Clone)]
struct Rows {
    words: usize,
    data: Vec<u64>,
}

impl Rows {
    fn zero(rows: usize, words: usize) -> Self {
        Rows {
            words,
            data: vec![0; rows * words],
        }
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.words..(i + 1) * self.words]
    }

    fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    fn xor_from(&mut self, other: &Rows) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a ^= b;
        }
    }
}

/// `dst ^= src << shift`, dropping bits past the end.
fn xor_shifted(dst: &mut [u64], src: &[u64], shift: usize) {
    let (ws, bs) = (shift / 64, shift % 64);
    let n = dst.len();
    for (j, &w) in src.iter().enumerate() {
        if w == 0 {
            continue;
        }
        let t = j + ws;
        if t >= n {
            break;
        }
        dst[t] ^= w << bs;
        if bs > 0 && t + 1 < n {
            dst[t + 1] ^= w >> (64 - bs);
        }
    }
}

type Labels = Vec<DegreeSide>;
type Layer = HashMap<Labels, Rows>;

fn add(layer: &mut Layer, key: Labels, rows: &Rows) {
    match layer.get_mut(&key) {
        Some(r) => r.xor_from(rows),
        None => {
            layer.insert(key, rows.clone());
        }
    }
}

/// Counts, modulo 2, the triples (P, M, cut) where P is a set of edges with
/// all degrees at most two, M a set of exactly `k` markers placed on
/// vertices of degree at most one on side 1, and the cut a two-colouring in
/// which no edge of P crosses. Every cycle of P is unmarked and so admits
/// both colours, which makes its contribution even.
pub fn count_parity(
    g: &Graph,
    antd: &AdvancedNiceTreeDecomposition,
    w: &WeightAssignment,
    k: usize,
) -> Result<ParityTable> {
    antd.validate(g)?;
    if w.vertex.len() != g.vertex_count() || w.edge.len() != g.edge_count() {
        return Err(Error::InvalidParameter(
            "weights do not match the graph".into(),
        ));
    }
    let n = g.vertex_count();
    let max_weight = (k + n) as u64 * w.n_max;
    let words = (max_weight as usize + 1).div_ceil(64);
    let rows = k + 1;
    let nodes = antd.nodes();
    let mut layers: Vec<Option<Layer>> = Vec::with_capacity(nodes.len());
    let parents = antd.nice().parents();
    for (id, node) in nodes.iter().enumerate() {
        let mut out = Layer::new();
        match node.kind {
            NodeKind::Leaf => {
                let mut r = Rows::zero(rows, words);
                r.row_mut(0)[0] = 1;
                out.insert(Vec::new(), r);
            }
            NodeKind::Introduce(v) => {
                let child = take(&mut layers, node.children[0]);
                let pos = node
                    .bag
                    .binary_search(&v)
                    .expect("introduced vertex in bag");
                for (labels, r) in child {
                    for label in [DegreeSide::Zero1, DegreeSide::Zero2] {
                        let mut key = labels.clone();
                        key.insert(pos, label);
                        add(&mut out, key, &r);
                    }
                }
            }
            NodeKind::IntroduceEdge(a, b) => {
                let child = take(&mut layers, node.children[0]);
                let e = g.edge_index(a, b).expect("edge of the graph");
                let shift = w.edge[e] as usize;
                let (pa, pb) = (
                    node.bag.binary_search(&a).expect("endpoint in bag"),
                    node.bag.binary_search(&b).expect("endpoint in bag"),
                );
                for (labels, r) in child {
                    for side in [1, 2] {
                        if let (Some(la), Some(lb)) =
                            (labels[pa].add_edge(side), labels[pb].add_edge(side))
                        {
                            let mut key = labels.clone();
                            key[pa] = la;
                            key[pb] = lb;
                            let mut moved = Rows::zero(rows, words);
                            for i in 0..rows {
                                xor_shifted(moved.row_mut(i), r.row(i), shift);
                            }
                            add(&mut out, key, &moved);
                        }
                    }
                    add(&mut out, labels, &r);
                }
            }
            NodeKind::Forget(v) => {
                let child = take(&mut layers, node.children[0]);
                let child_bag = &nodes[node.children[0]].bag;
                let pos = child_bag
                    .binary_search(&v)
                    .expect("forgotten vertex in child bag");
                let shift = w.vertex[v] as usize;
                for (labels, r) in child {
                    let mut key = labels.clone();
                    let label = key.remove(pos);
                    add(&mut out, key.clone(), &r);
                    if matches!(label, DegreeSide::Zero1 | DegreeSide::One1) {
                        let mut marked = Rows::zero(rows, words);
                        for i in 0..rows - 1 {
                            xor_shifted(marked.row_mut(i + 1), r.row(i), shift);
                        }
                        add(&mut out, key, &marked);
                    }
                }
            }
            NodeKind::Join => {
                let left = take(&mut layers, node.children[0]);
                let right = take(&mut layers, node.children[1]);
                for (la, ra) in &left {
                    for (lb, rb) in &right {
                        let Some(key) = la
                            .iter()
                            .zip(lb)
                            .map(|(&a, &b)| DegreeSide::join(a, b))
                            .collect::<Option<Labels>>()
                        else {
                            continue;
                        };
                        let mut prod = Rows::zero(rows, words);
                        for i1 in 0..rows {
                            let a = ra.row(i1);
                            for (wi, &word) in a.iter().enumerate() {
                                let mut bits = word;
                                while bits != 0 {
                                    let shift = wi * 64 + bits.trailing_zeros() as usize;
                                    bits &= bits - 1;
                                    for i2 in 0..rows - i1 {
                                        xor_shifted(prod.row_mut(i1 + i2), rb.row(i2), shift);
                                    }
                                }
                            }
                        }
                        add(&mut out, key, &prod);
                    }
                }
            }
        }
        out.retain(|_, r| !r.is_zero());
        debug_assert!(parents[id] == id || layers.len() == id);
        layers.push(Some(out));
    }
    let root = take(&mut layers, antd.root());
    let bits = match root.get(&Vec::new()) {
        Some(r) => r.row(k).to_vec(),
        None => vec![0; words],
    };
    Ok(ParityTable {
        k,
        max_weight,
        bits,
    })
}

fn take(layers: &mut [Option<Layer>], id: usize) -> Layer {
    layers[id].take().expect("each table is consumed once")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub answer: bool,
    pub k: usize,
    pub reps: usize,
    /// Runs that found an odd weight class.
    pub per_run_hits: usize,
}

impl Decision {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "answer": if self.answer { "yes" } else { "no" },
            "k": self.k,
            "reps": self.reps,
            "per_run_hits": self.per_run_hits,
        })
    }
}

/// Seeds for the repetitions, derived from one master seed.
pub fn repetition_seeds(seed: u64, reps: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..reps).map(|_| rng.gen()).collect()
}

/// Monte-Carlo test for a path partition with at most `k` paths. A "yes"
/// is always correct; a "no" is wrong with probability at most `2^-reps`.
/// `k` above `n` is treated as `n`.
pub fn decide_partition(
    g: &Graph,
    antd: &AdvancedNiceTreeDecomposition,
    k: usize,
    reps: usize,
    seed: u64,
) -> Result<Decision> {
    if k == 0 || reps == 0 {
        return Err(Error::InvalidParameter(
            "k and reps must be at least 1".into(),
        ));
    }
    let kk = k.min(g.vertex_count());
    let mut hits = 0;
    for s in repetition_seeds(seed, reps) {
        let w = sample_weights(g, s);
        if count_parity(g, antd, &w, kk)?.any_odd() {
            hits += 1;
        }
    }
    Ok(Decision {
        answer: hits > 0,
        k,
        reps,
        per_run_hits: hits,
    })
}

/// Smallest `k` accepted by [`decide_partition`], scanning upwards and
/// stopping each `k` at its first hit. Never below the optimum; above it
/// with probability at most `n * 2^-reps`.
pub fn min_partition_cc(
    g: &Graph,
    antd: &AdvancedNiceTreeDecomposition,
    reps: usize,
    seed: u64,
) -> Result<usize> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::InvalidParameter("empty graph".into()));
    }
    if reps == 0 {
        return Err(Error::InvalidParameter("reps must be at least 1".into()));
    }
    for k in 1..=n {
        let seeds = repetition_seeds(seed.wrapping_add(k as u64), reps);
        for s in seeds {
            let w = sample_weights(g, s);
            if count_parity(g, antd, &w, k)?.any_odd() {
                return Ok(k);
            }
        }
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::{heuristic_decomposition, to_advanced_nice, to_nice};

    fn antd(g: &Graph) -> AdvancedNiceTreeDecomposition {
        let ntd = to_nice(g, &heuristic_decomposition(g)).unwrap();
        to_advanced_nice(&ntd, g).unwrap()
    }

    #[test]
    fn weight_range_and_determinism() {
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let w = sample_weights(&g, 7);
        assert_eq!(w.n_max, 14);
        assert_eq!(w, sample_weights(&g, 7));
        assert!(w
            .vertex
            .iter()
            .chain(&w.edge)
            .all(|&x| (1..=14).contains(&x)));
        assert_ne!(w, sample_weights(&g, 8));
    }

    #[test]
    fn edge_weights_look_uniform() {
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let trials = 10_000;
        let mut bins = [0u32; 14];
        for seed in 0..trials {
            bins[sample_weights(&g, seed).edge[0] as usize - 1] += 1;
        }
        let expected = trials as f64 / 14.0;
        let chi2: f64 = bins
            .iter()
            .map(|&o| (o as f64 - expected).powi(2) / expected)
            .sum();
        // 13 degrees of freedom, 0.1% critical value
        assert!(chi2 < 34.53, "chi-square {chi2}");
    }

    #[test]
    fn single_vertex() {
        let g = Graph::empty(1);
        let w = sample_weights(&g, 3);
        let t = count_parity(&g, &antd(&g), &w, 1).unwrap();
        assert_eq!(t.odd_weights(), vec![w.vertex[0]]);
    }

    #[test]
    fn join_labels() {
        use DegreeSide::*;
        assert_eq!(DegreeSide::join(One1, One1), Some(Two));
        assert_eq!(DegreeSide::join(One1, One2), None);
        assert_eq!(DegreeSide::join(Two, Zero1), Some(Two));
        assert_eq!(DegreeSide::join(Two, Zero2), None);
        assert_eq!(DegreeSide::join(Zero2, Zero2), Some(Zero2));
        assert_eq!(DegreeSide::join(Two, One1), None);
    }

    #[test]
    fn star_decisions() {
        let g = Graph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let a = antd(&g);
        assert!(!decide_partition(&g, &a, 1, 20, 1).unwrap().answer);
        assert!(decide_partition(&g, &a, 2, 20, 1).unwrap().answer);
    }

    #[test]
    fn minimum_on_small_graphs() {
        let p5 = Graph::new(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        assert_eq!(min_partition_cc(&p5, &antd(&p5), 20, 5).unwrap(), 1);
        let star = Graph::new(5, [(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert_eq!(min_partition_cc(&star, &antd(&star), 20, 5).unwrap(), 3);
    }
}
