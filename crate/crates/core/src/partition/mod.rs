//! Path Partition: an exact DP and a randomized Cut&Count decision procedure.

mod cutcount;
mod enumerate;

pub use cutcount::{
    count_parity, decide_partition, min_partition_cc, repetition_seeds, sample_weights, Decision,
    DegreeSide, ParityTable, WeightAssignment,
};
pub use enumerate::{enumerate_rsc, Census, RscTuple};

use crate::cover::{min_solve, solve_with, DpConfig, DpSolution};
use crate::decomposition::{NiceTreeDecomposition, TreeDecomposition};
use crate::error::Result;
use crate::graph::{Graph, Variant};

/// The cover DP with every vertex on exactly one path.
pub fn solve_partition_dp(
    g: &Graph,
    ntd: &NiceTreeDecomposition,
    kappa: usize,
    variant: Variant,
) -> Result<Option<DpSolution>> {
    solve_with(g, ntd, kappa, DpConfig::partition(variant))
}

/// Minimum path partition by the DP.
pub fn min_partition_dp(
    g: &Graph,
    variant: Variant,
    td: Option<&TreeDecomposition>,
) -> Result<DpSolution> {
    min_solve(g, td, DpConfig::partition(variant))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::{heuristic_decomposition, to_nice};

    #[test]
    fn star_and_path() {
        let star = Graph::new(5, (1..5).map(|i| (0, i))).unwrap();
        let sol = min_partition_dp(&star, Variant::PLAIN, None).unwrap();
        assert_eq!(sol.size, 3);
        assert_eq!(sol.system.paths.iter().map(|p| p.len()).sum::<usize>(), 5);
        let p7 = Graph::new(7, (0..6).map(|i| (i, i + 1))).unwrap();
        assert_eq!(min_partition_dp(&p7, Variant::PLAIN, None).unwrap().size, 1);
    }

    #[test]
    fn budget_below_optimum() {
        let star = Graph::new(5, (1..5).map(|i| (0, i))).unwrap();
        let ntd = to_nice(&star, &heuristic_decomposition(&star)).unwrap();
        assert!(solve_partition_dp(&star, &ntd, 2, Variant::PLAIN)
            .unwrap()
            .is_none());
        assert_eq!(
            solve_partition_dp(&star, &ntd, 3, Variant::PLAIN)
                .unwrap()
                .unwrap()
                .size,
            3
        );
    }
}
