//! Stars separate the two problems: ⌈k/2⌉ covering paths against k-1 disjoint ones.
use pathcover::cover::min_pathcover;
use pathcover::generators::star;
use pathcover::partition::min_partition_dp;
use pathcover::Variant;

fn main() -> pathcover::Result<()> {
    for k in 2..=8 {
        let g = star(k);
        let cover = min_pathcover(&g, Variant::PLAIN, None)?.size;
        let partition = min_partition_dp(&g, Variant::PLAIN, None)?.size;
        println!("K_1,{k}: cover {cover}, partition {partition}");
    }
    Ok(())
}
