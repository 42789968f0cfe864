//! Randomized Path Partition: parity tables and the Monte-Carlo decision.
use pathcover::decomposition::{heuristic_decomposition, to_advanced_nice, to_nice};
use pathcover::generators::cycle;
use pathcover::partition::{count_parity, decide_partition, min_partition_cc, sample_weights};
use pathcover::Graph;

fn main() -> pathcover::Result<()> {
    // a 6-cycle with a pendant vertex on 0
    let mut edges = cycle(6)?.edges().to_vec();
    edges.push((0, 6));
    let g = Graph::new(7, edges)?;
    let antd = to_advanced_nice(&to_nice(&g, &heuristic_decomposition(&g))?, &g)?;
    let w = sample_weights(&g, 11);
    println!("weights up to {}", w.n_max);
    for k in 1..=3 {
        let table = count_parity(&g, &antd, &w, k)?;
        println!("k={k}: odd weights {:?}", table.odd_weights());
        let d = decide_partition(&g, &antd, k, 20, 11)?;
        println!("  decision {}", d.to_json());
    }
    println!(
        "smallest accepted k: {}",
        min_partition_cc(&g, &antd, 20, 11)?
    );
    Ok(())
}
