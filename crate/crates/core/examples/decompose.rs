//! Heuristic tree decomposition, its nice form, and the edge-introducing form.
use pathcover::decomposition::{heuristic_decomposition, to_advanced_nice, to_nice, NodeKind};
use pathcover::generators::random_tw_graph;

fn main() -> pathcover::Result<()> {
    let (g, _) = random_tw_graph(30, 3, 0.7, 5)?;
    let td = heuristic_decomposition(&g);
    println!(
        "{} vertices, {} edges, heuristic width {:?}",
        g.vertex_count(),
        g.edge_count(),
        td.width()
    );
    let ntd = to_nice(&g, &td)?;
    let antd = to_advanced_nice(&ntd, &g)?;
    let mut kinds = [0usize; 5];
    for node in antd.nodes() {
        kinds[match node.kind {
            NodeKind::Leaf => 0,
            NodeKind::Introduce(_) => 1,
            NodeKind::Forget(_) => 2,
            NodeKind::Join => 3,
            NodeKind::IntroduceEdge(..) => 4,
        }] += 1;
    }
    println!(
        "nice: {} nodes; advanced: {} nodes",
        ntd.len(),
        antd.nodes().len()
    );
    println!(
        "leaf {} introduce {} forget {} join {} edge {}",
        kinds[0], kinds[1], kinds[2], kinds[3], kinds[4]
    );
    print!("{}", td.to_td());
    Ok(())
}
