//! Cross-check of the DP against the exhaustive oracle on every small graph.
use pathcover::cover::min_pathcover;
use pathcover::generators::connected_atlas;
use pathcover::oracle::{brute_pathcover, OracleBudget};
use pathcover::Variant;

fn main() -> pathcover::Result<()> {
    for n in 1..=6 {
        let graphs = connected_atlas(n);
        for g in &graphs {
            let dp = min_pathcover(g, Variant::PLAIN, None)?.size;
            let oracle = brute_pathcover(g, Variant::PLAIN, OracleBudget::default())?.size();
            assert_eq!(dp, oracle, "{:?}", g.edges());
        }
        println!("n={n}: {} connected graphs agree", graphs.len());
    }
    Ok(())
}
