//! Chains of bubbles: treewidth 2, yet optimal covers need several paths
//! through the middle, and cover tables grow where partition tables do not.
use pathcover::cover::min_pathcover;
use pathcover::generators::figure2;
use pathcover::partition::min_partition_dp;
use pathcover::Variant;

fn main() -> pathcover::Result<()> {
    for s in 2..=5 {
        let (g, td, centre) = figure2(s)?;
        let cover = min_pathcover(&g, Variant::PLAIN, Some(&td))?;
        let partition = min_partition_dp(&g, Variant::PLAIN, Some(&td))?;
        let bag = &td.bags[centre];
        let through = cover
            .system
            .paths
            .iter()
            .filter(|p| p.vertices().iter().any(|v| bag.contains(v)))
            .count();
        println!(
            "s={s} n={}: cover {} ({} meet the central bag, peak states {}), partition {} (peak states {})",
            g.vertex_count(),
            cover.size,
            through,
            cover.stats.peak_states,
            partition.size,
            partition.stats.peak_states
        );
    }
    Ok(())
}
