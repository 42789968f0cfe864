//! Linear-time path cover of a random tree, checked against the leaf count.
use pathcover::generators::random_tree;
use pathcover::tree::solve_tree_graph;

fn main() -> pathcover::Result<()> {
    let g = random_tree(20, 1);
    let cover = solve_tree_graph(&g)?;
    let leaves = (0..g.vertex_count()).filter(|&v| g.degree(v) == 1).count();
    println!("{} leaves, {} paths", leaves, cover.size());
    for p in &cover.paths {
        println!("  {:?}", p.vertices());
    }
    assert_eq!(cover.size(), leaves.div_ceil(2));
    Ok(())
}
