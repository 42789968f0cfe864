//! Path Cover by dynamic programming over a nice tree decomposition.
//!
//! A state at a node is the multiset of traces that the solution paths
//! leave on the bag ([`PartialPath`]); its value is the least number of
//! paths meeting the subtree's vertices. States above the budget `kappa`
//! are dropped, so the tables stay small when the optimum is small.

mod dp;
mod state;

use serde::Serialize;

pub use state::{
    enumerate_states, partial_paths, state_admissible, DpConfig, NeighborType, PartialPath, Slot,
    State,
};

use crate::decomposition::{
    heuristic_decomposition, to_nice, NiceTreeDecomposition, TreeDecomposition,
};
use crate::error::{Error, Result};
use crate::graph::{connected_components, Graph, Path, PathSystem, Variant};
use dp::Engine;

/// Table sizes of one DP run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DpStats {
    pub nodes: usize,
    pub peak_states: usize,
    pub total_states: usize,
    /// Largest decomposition width among the runs.
    pub width: Option<usize>,
    /// Largest budget tried.
    pub kappa: usize,
}

impl DpStats {
    fn absorb(&mut self, other: &DpStats) {
        self.nodes += other.nodes;
        self.peak_states = self.peak_states.max(other.peak_states);
        self.total_states += other.total_states;
        self.width = self.width.max(other.width);
        self.kappa = self.kappa.max(other.kappa);
    }
}

#[derive(Clone, Debug)]
pub struct DpSolution {
    pub size: usize,
    pub system: PathSystem,
    pub stats: DpStats,
    /// Number of states kept at each node, in node order.
    pub states_per_node: Vec<usize>,
}

/// Runs the DP with budget `kappa`. Returns `Ok(None)` when every solution
/// needs more than `kappa` paths.
pub fn solve_pathcover(
    g: &Graph,
    ntd: &NiceTreeDecomposition,
    kappa: usize,
    variant: Variant,
) -> Result<Option<DpSolution>> {
    solve_with(g, ntd, kappa, DpConfig::cover(variant))
}

/// As [`solve_pathcover`], for either problem.
///
/// Tables grow quickly with the budget even when the optimum is small, so
/// the budget is raised one step at a time from a lower bound and the first
/// feasible run is returned. The answer is the same as a single run at
/// `kappa`.
pub fn solve_with(
    g: &Graph,
    ntd: &NiceTreeDecomposition,
    kappa: usize,
    cfg: DpConfig,
) -> Result<Option<DpSolution>> {
    if kappa == 0 {
        return Err(Error::InvalidParameter("kappa must be at least 1".into()));
    }
    ntd.validate(g)?;
    for k in lower_bound(g).min(kappa)..=kappa {
        if let Some(sol) = run_once(g, ntd, k, cfg)? {
            return Ok(Some(sol));
        }
    }
    Ok(None)
}

/// One DP run with budget `kappa` on a validated decomposition.
fn run_once(
    g: &Graph,
    ntd: &NiceTreeDecomposition,
    kappa: usize,
    cfg: DpConfig,
) -> Result<Option<DpSolution>> {
    let engine = Engine { g, cfg, kappa };
    let tables = engine.run(ntd);
    let states_per_node: Vec<usize> = tables.iter().map(|t| t.len()).collect();
    let stats = DpStats {
        nodes: ntd.len(),
        peak_states: states_per_node.iter().copied().max().unwrap_or(0),
        total_states: states_per_node.iter().sum(),
        width: ntd.width(),
        kappa,
    };
    let root = &tables[ntd.root()];
    let Some(entry) = root.get(&Vec::new()) else {
        return Ok(None);
    };
    let root_entry = root
        .entries
        .iter()
        .position(|e| e.state.is_empty())
        .expect("present");
    let paths = dp::reconstruct(ntd, &tables, root_entry)?;
    if paths.len() != entry.opt {
        return Err(Error::Internal(format!(
            "witness has {} paths, table says {}",
            paths.len(),
            entry.opt
        )));
    }
    let system = PathSystem::new(paths, cfg.mode, cfg.variant).normalized();
    if let Err(v) = system.check(g) {
        return Err(Error::Internal(format!(
            "reconstructed witness is invalid: {v}"
        )));
    }
    Ok(Some(DpSolution {
        size: entry.opt,
        system,
        stats,
        states_per_node,
    }))
}

/// Per component `⌈(degree-one vertices)/2⌉`, at least 1: each such
/// vertex ends a path. At least 1 overall.
fn lower_bound(g: &Graph) -> usize {
    let total: usize = connected_components(g)
        .iter()
        .map(|c| {
            c.iter()
                .filter(|&&v| g.degree(v) == 1)
                .count()
                .div_ceil(2)
                .max(1)
        })
        .sum();
    total.max(1)
}

/// Optimum over each connected component, raising the budget one step at
/// a time from a lower bound. Uses `td` restricted to each component when
/// given, the min-degree heuristic otherwise.
pub fn min_solve(g: &Graph, td: Option<&TreeDecomposition>, cfg: DpConfig) -> Result<DpSolution> {
    if let Some(td) = td {
        td.validate(g)?;
    }
    let mut paths = Vec::new();
    let mut stats = DpStats::default();
    let mut states_per_node = Vec::new();
    for comp in connected_components(g) {
        let sub = g.induced_subgraph(&comp);
        let sub_td = match td {
            Some(td) => td.restrict(&comp),
            None => heuristic_decomposition(&sub),
        };
        let ntd = to_nice(&sub, &sub_td)?;
        ntd.validate(&sub)?;
        let mut kappa = lower_bound(&sub);
        let sol = loop {
            if let Some(sol) = run_once(&sub, &ntd, kappa, cfg)? {
                break sol;
            }
            if kappa >= sub.vertex_count() {
                return Err(Error::Internal(format!(
                    "no solution with {kappa} paths on a component of {} vertices",
                    sub.vertex_count()
                )));
            }
            kappa += 1;
        };
        stats.absorb(&sol.stats);
        states_per_node.extend(sol.states_per_node);
        paths.extend(
            sol.system
                .paths
                .into_iter()
                .map(|p| Path(p.0.into_iter().map(|v| comp[v]).collect())),
        );
    }
    let system = PathSystem::new(paths, cfg.mode, cfg.variant).normalized();
    Ok(DpSolution {
        size: system.size(),
        system,
        stats,
        states_per_node,
    })
}

/// Minimum path cover of `g` by the DP.
pub fn min_pathcover(
    g: &Graph,
    variant: Variant,
    td: Option<&TreeDecomposition>,
) -> Result<DpSolution> {
    min_solve(g, td, DpConfig::cover(variant))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::TreeDecomposition;
    use crate::oracle::{brute_pathcover, OracleBudget};

    fn nice(g: &Graph) -> NiceTreeDecomposition {
        to_nice(g, &heuristic_decomposition(g)).unwrap()
    }

    fn star(k: usize) -> Graph {
        Graph::new(k + 1, (1..=k).map(|i| (0, i))).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn star_and_cycle() {
        let g = star(5);
        let sol = solve_pathcover(&g, &nice(&g), 5, Variant::PLAIN)
            .unwrap()
            .unwrap();
        assert_eq!(sol.size, 3);
        let g = cycle(6);
        let sol = solve_pathcover(&g, &nice(&g), 2, Variant::PLAIN)
            .unwrap()
            .unwrap();
        assert_eq!(sol.size, 1);
    }

    #[test]
    fn budget_too_small() {
        let g = star(5);
        assert!(solve_pathcover(&g, &nice(&g), 2, Variant::PLAIN)
            .unwrap()
            .is_none());
        assert!(solve_pathcover(&g, &nice(&g), 0, Variant::PLAIN).is_err());
    }

    #[test]
    fn single_introduce_costs_one() {
        let g = Graph::empty(1);
        let sol = solve_pathcover(&g, &nice(&g), 1, Variant::PLAIN)
            .unwrap()
            .unwrap();
        assert_eq!(sol.size, 1);
        assert_eq!(sol.system.paths, vec![Path(vec![0])]);
    }

    #[test]
    fn p4_on_path_decomposition() {
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let td = TreeDecomposition::new(
            4,
            vec![vec![0, 1], vec![1, 2], vec![2, 3]],
            vec![(0, 1), (1, 2)],
        );
        let ntd = to_nice(&g, &td).unwrap();
        let sol = solve_pathcover(&g, &ntd, 4, Variant::PLAIN)
            .unwrap()
            .unwrap();
        assert_eq!(sol.size, 1);
    }

    #[test]
    fn theta_graph() {
        // 0 and 4 joined by three paths of length 2
        let g = Graph::new(5, [(0, 1), (1, 4), (0, 2), (2, 4), (0, 3), (3, 4)]).unwrap();
        let sol = min_pathcover(&g, Variant::PLAIN, None).unwrap();
        let brute = brute_pathcover(&g, Variant::PLAIN, OracleBudget::default()).unwrap();
        assert_eq!(sol.size, brute.size());
        assert_eq!(sol.size, 1);
    }

    #[test]
    fn two_branches_need_split_down_types() {
        // a spider with three legs of length 2 hanging from 0, plus a leaf
        let g = Graph::new(8, [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6), (0, 7)]).unwrap();
        for variant in [Variant::PLAIN, Variant::INDUCED, Variant::EDGE_DISJOINT] {
            let sol = min_pathcover(&g, variant, None).unwrap();
            let brute = brute_pathcover(&g, variant, OracleBudget::default()).unwrap();
            assert_eq!(sol.size, brute.size(), "{variant:?}");
        }
    }

    #[test]
    fn k3_all_budgets() {
        let g = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        for kappa in 1..=3 {
            let sol = solve_pathcover(&g, &nice(&g), kappa, Variant::PLAIN)
                .unwrap()
                .unwrap();
            assert_eq!(sol.size, 1);
        }
        let sol = min_pathcover(&g, Variant::INDUCED, None).unwrap();
        assert_eq!(sol.size, 2);
    }

    #[test]
    fn disconnected_input() {
        let g = Graph::new(6, [(0, 1), (2, 3), (2, 4), (2, 5)]).unwrap();
        let sol = min_pathcover(&g, Variant::PLAIN, None).unwrap();
        assert_eq!(sol.size, 3);
        let ntd = nice(&g);
        let whole = solve_pathcover(&g, &ntd, 6, Variant::PLAIN)
            .unwrap()
            .unwrap();
        assert_eq!(whole.size, 3);
    }
}
