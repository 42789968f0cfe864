//! Exponential-time ground truth.
//!
//! Two deliberately different techniques: covers are found by iterative
//! deepening over explicit path sets, partitions by a dynamic program over
//! vertex subsets. Neither shares code with the decomposition solvers.

use crate::error::{Error, Result};
use crate::graph::{Graph, Mode, Path, PathSystem, Variant};

/// Size limits above which the oracles refuse to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_vertices: usize,
    /// Cap on the number of candidate paths the cover search may enumerate.
    pub max_paths: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_vertices: 10,
            max_paths: 250_000,
        }
    }
}

impl OracleBudget {
    pub fn with_max_vertices(max_vertices: usize) -> Self {
        OracleBudget {
            max_vertices,
            ..Self::default()
        }
    }

    fn admit(&self, g: &Graph, hard_limit: usize) -> Result<()> {
        let n = g.vertex_count();
        if n > self.max_vertices || n > hard_limit {
            return Err(Error::BudgetExceeded(format!(
                "{n} vertices exceeds limit {}",
                self.max_vertices.min(hard_limit)
            )));
        }
        Ok(())
    }
}

struct Candidate {
    vertices: Vec<usize>,
    vmask: u64,
    emask: u128,
}

/// Minimum path cover by exhaustive search; `variant` restricts the paths.
pub fn brute_pathcover(g: &Graph, variant: Variant, budget: OracleBudget) -> Result<PathSystem> {
    budget.admit(g, 64)?;
    if variant.edge_disjoint && g.edge_count() > 128 {
        return Err(Error::BudgetExceeded("more than 128 edges".into()));
    }
    let n = g.vertex_count();
    if n == 0 {
        return Ok(PathSystem::new(Vec::new(), Mode::Cover, variant));
    }
    let mut all = enumerate_paths(g, variant.induced, budget.max_paths)?;
    if !variant.edge_disjoint {
        // Any path extends to a maximal one covering a superset, so only
        // maximal paths need to be considered.
        all.retain(|c| is_maximal(g, &c.vertices, c.vmask, variant.induced));
    }
    let mut by_vertex: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, c) in all.iter().enumerate() {
        for &v in &c.vertices {
            by_vertex[v].push(i);
        }
    }
    let longest = all.iter().map(|c| c.vertices.len()).max().unwrap_or(1);
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut chosen = Vec::new();
    for depth in 1..=n {
        let mut search = CoverSearch {
            all: &all,
            by_vertex: &by_vertex,
            full,
            longest,
            edge_disjoint: variant.edge_disjoint,
        };
        if search.run(0, 0, depth, &mut chosen) {
            let paths = chosen
                .iter()
                .map(|&i| Path(all[i].vertices.clone()))
                .collect();
            return Ok(PathSystem::new(paths, Mode::Cover, variant));
        }
    }
    unreachable!("singleton paths always form a feasible cover")
}

struct CoverSearch<'a> {
    all: &'a [Candidate],
    by_vertex: &'a [Vec<usize>],
    full: u64,
    longest: usize,
    edge_disjoint: bool,
}

impl CoverSearch<'_> {
    fn run(
        &mut self,
        covered: u64,
        used_edges: u128,
        budget: usize,
        chosen: &mut Vec<usize>,
    ) -> bool {
        if covered == self.full {
            return true;
        }
        if budget == 0 {
            return false;
        }
        // Branch on the uncovered vertex with the fewest usable candidates.
        let mut best: Option<(usize, usize)> = None;
        let mut uncovered = !covered & self.full;
        while uncovered != 0 {
            let v = uncovered.trailing_zeros() as usize;
            uncovered &= uncovered - 1;
            let options = self.by_vertex[v]
                .iter()
                .filter(|&&i| !self.edge_disjoint || self.all[i].emask & used_edges == 0)
                .count();
            if options == 0 {
                return false;
            }
            if best.is_none_or(|(_, b)| options < b) {
                best = Some((v, options));
            }
        }
        let (v, _) = best.expect("some vertex is uncovered");
        let missing = (!covered & self.full).count_ones() as usize;
        if self.longest * budget < missing {
            return false;
        }
        for &i in &self.by_vertex[v] {
            let c = &self.all[i];
            if self.edge_disjoint && c.emask & used_edges != 0 {
                continue;
            }
            chosen.push(i);
            if self.run(covered | c.vmask, used_edges | c.emask, budget - 1, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
}

fn enumerate_paths(g: &Graph, induced: bool, cap: usize) -> Result<Vec<Candidate>> {
    let n = g.vertex_count();
    let mut out = Vec::new();
    let mut stack = Vec::with_capacity(n);
    for s in 0..n {
        stack.push(s);
        extend(g, induced, &mut stack, 1u64 << s, 0, &mut out, cap)?;
        stack.pop();
    }
    Ok(out)
}

fn extend(
    g: &Graph,
    induced: bool,
    stack: &mut Vec<usize>,
    vmask: u64,
    emask: u128,
    out: &mut Vec<Candidate>,
    cap: usize,
) -> Result<()> {
    // Each path is emitted once, from its smaller endpoint.
    if stack.len() == 1 || stack[0] < *stack.last().unwrap() {
        if out.len() >= cap {
            return Err(Error::BudgetExceeded(format!(
                "more than {cap} candidate paths"
            )));
        }
        out.push(Candidate {
            vertices: stack.clone(),
            vmask,
            emask,
        });
    }
    let last = *stack.last().unwrap();
    for &u in g.neighbors(last) {
        if vmask >> u & 1 == 1 {
            continue;
        }
        if induced
            && g.neighbors(u)
                .iter()
                .any(|&w| w != last && vmask >> w & 1 == 1)
        {
            continue;
        }
        let e = g.edge_index(last, u).unwrap();
        let bit = if e < 128 { 1u128 << e } else { 0 };
        stack.push(u);
        extend(g, induced, stack, vmask | 1 << u, emask | bit, out, cap)?;
        stack.pop();
    }
    Ok(())
}

fn is_maximal(g: &Graph, path: &[usize], vmask: u64, induced: bool) -> bool {
    let ends = [path[0], *path.last().unwrap()];
    for (k, &end) in ends.iter().enumerate() {
        if k == 1 && path.len() == 1 {
            break;
        }
        for &u in g.neighbors(end) {
            if vmask >> u & 1 == 1 {
                continue;
            }
            if induced
                && g.neighbors(u)
                    .iter()
                    .any(|&w| w != end && vmask >> w & 1 == 1)
            {
                continue;
            }
            return false;
        }
    }
    true
}

/// Minimum path partition by dynamic programming over vertex subsets.
pub fn brute_pathpartition(g: &Graph, budget: OracleBudget) -> Result<PathSystem> {
    brute_pathpartition_with(g, Variant::PLAIN, budget)
}

/// As [`brute_pathpartition`], optionally requiring induced paths.
/// Vertex-disjoint paths are automatically edge-disjoint.
pub fn brute_pathpartition_with(
    g: &Graph,
    variant: Variant,
    budget: OracleBudget,
) -> Result<PathSystem> {
    budget.admit(g, 20)?;
    let n = g.vertex_count();
    let size = 1usize << n;
    let nb: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | 1 << u))
        .collect();
    // reach[S] = bitmask of vertices v such that G[S] has a Hamiltonian path ending at v.
    let mut reach = vec![0u32; size];
    for v in 0..n {
        reach[1 << v] = 1 << v;
    }
    for s in 1..size {
        let mut ends = reach[s];
        while ends != 0 {
            let v = ends.trailing_zeros() as usize;
            ends &= ends - 1;
            let mut next = nb[v] & !(s as u32);
            while next != 0 {
                let u = next.trailing_zeros() as usize;
                next &= next - 1;
                reach[s | 1 << u] |= 1 << u;
            }
        }
    }
    let is_path = |s: usize| -> bool {
        if reach[s] == 0 {
            return false;
        }
        if !variant.induced {
            return true;
        }
        let edges: u32 = (0..n)
            .filter(|&v| s >> v & 1 == 1)
            .map(|v| (nb[v] & s as u32).count_ones())
            .sum::<u32>()
            / 2;
        edges as usize + 1 == (s as u32).count_ones() as usize
    };
    let mut best = vec![u32::MAX; size];
    let mut choice = vec![0u32; size];
    best[0] = 0;
    for s in 1..size {
        let low = s & s.wrapping_neg();
        let rest = s ^ low;
        // Enumerate sub-subsets t of s that contain the lowest vertex.
        let mut sub = rest;
        loop {
            let t = sub | low;
            if best[s ^ t] != u32::MAX && best[s ^ t] + 1 < best[s] && is_path(t) {
                best[s] = best[s ^ t] + 1;
                choice[s] = t as u32;
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    let mut paths = Vec::new();
    let mut s = size - 1;
    while s != 0 {
        let t = choice[s] as usize;
        paths.push(Path(hamiltonian_order(t, &reach, &nb)));
        s ^= t;
    }
    Ok(PathSystem::new(paths, Mode::Partition, variant))
}

fn hamiltonian_order(set: usize, reach: &[u32], nb: &[u32]) -> Vec<usize> {
    let mut order = Vec::new();
    let mut s = set;
    let mut end = reach[s].trailing_zeros() as usize;
    loop {
        order.push(end);
        let rest = s ^ (1 << end);
        if rest == 0 {
            break;
        }
        let candidates = reach[rest] & nb[end];
        end = candidates.trailing_zeros() as usize;
        s = rest;
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::validate_system;

    fn star(k: usize) -> Graph {
        Graph::new(k + 1, (1..=k).map(|i| (0, i))).unwrap()
    }

    fn complete(n: usize) -> Graph {
        Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn cover_examples() {
        let b = OracleBudget::default();
        let s = brute_pathcover(&star(5), Variant::PLAIN, b).unwrap();
        assert_eq!(s.size(), 3);
        assert!(validate_system(&star(5), &s));
        assert_eq!(
            brute_pathcover(&complete(4), Variant::PLAIN, b)
                .unwrap()
                .size(),
            1
        );
        assert_eq!(
            brute_pathcover(&Graph::empty(1), Variant::PLAIN, b)
                .unwrap()
                .size(),
            1
        );
    }

    #[test]
    fn induced_cover_of_k4_needs_two_paths() {
        let g = complete(4);
        let s = brute_pathcover(&g, Variant::INDUCED, OracleBudget::default()).unwrap();
        assert_eq!(s.size(), 2);
        assert!(validate_system(&g, &s));
    }

    #[test]
    fn partition_examples() {
        let b = OracleBudget::default();
        let s = brute_pathpartition(&star(4), b).unwrap();
        assert_eq!(s.size(), 3);
        assert!(validate_system(&star(4), &s));
        assert_eq!(brute_pathpartition(&cycle(6), b).unwrap().size(), 1);
        assert_eq!(brute_pathpartition(&Graph::empty(1), b).unwrap().size(), 1);
        assert_eq!(brute_pathpartition(&Graph::empty(0), b).unwrap().size(), 0);
    }

    #[test]
    fn budget_refusal() {
        let g = cycle(11);
        assert!(matches!(
            brute_pathcover(&g, Variant::PLAIN, OracleBudget::default()),
            Err(Error::BudgetExceeded(_))
        ));
        assert!(brute_pathpartition(&g, OracleBudget::default()).is_err());
        assert_eq!(
            brute_pathpartition(&g, OracleBudget::with_max_vertices(11))
                .unwrap()
                .size(),
            1
        );
    }
}
