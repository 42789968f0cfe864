//! Path Cover by the decomposition DP, in all three variants.
use pathcover::cover::min_pathcover;
use pathcover::{Graph, Variant};

fn main() -> pathcover::Result<()> {
    // a wheel: hub 0 joined to the 6-cycle 1..=6
    let mut edges: Vec<(usize, usize)> = (1..=6).map(|i| (0, i)).collect();
    edges.extend((1..=6).map(|i| (i, i % 6 + 1)));
    let g = Graph::new(7, edges)?;
    for (name, v) in [
        ("plain", Variant::PLAIN),
        ("induced", Variant::INDUCED),
        ("edge-disjoint", Variant::EDGE_DISJOINT),
    ] {
        let sol = min_pathcover(&g, v, None)?;
        println!("{name}: {} paths {:?}", sol.size, sol.system.paths);
        println!(
            "  width {:?}, peak states {}",
            sol.stats.width, sol.stats.peak_states
        );
    }
    Ok(())
}
