use std::path::PathBuf;
use std::process::{Command, Output};

use pathcover::cover::{enumerate_states, DpConfig};
use pathcover::{Graph, Variant};
use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pathcover"))
        .args(args)
        .env_remove("PATHCOVER_SEED")
        .output()
        .expect("binary runs")
}

fn scratch(name: &str, text: &str) -> String {
    let p: PathBuf = [env!("CARGO_TARGET_TMPDIR"), name].iter().collect();
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn cover_of_a_star() {
    let g = scratch("star5.gr", "p tw 6 5\n1 2\n1 3\n1 4\n1 5\n1 6\n");
    let out = bin(&["cover", "--graph", &g]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["size"], 3);
    assert_eq!(r["decomposition"], "heuristic");
    assert_eq!(r["width"], 1);
    assert!(r["stats"]["peak_states"].as_u64().unwrap() > 0);
    let tree = json(&bin(&["tree", "--graph", &g]));
    assert_eq!(tree["size"], 3);
}

#[test]
fn budget_too_small_exits_three() {
    let g = scratch("star5b.gr", "p tw 6 5\n1 2\n1 3\n1 4\n1 5\n1 6\n");
    let out = bin(&["cover", "--graph", &g, "--kappa", "2"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["feasible"], false);
}

#[test]
fn parse_errors_exit_two() {
    let g = scratch("broken.gr", "p tw 3 2\n1 2\n");
    assert_eq!(bin(&["tree", "--graph", &g]).status.code(), Some(2));
    assert_eq!(
        bin(&["cover", "--graph", &g, "--k", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(bin(&["cover"]).status.code(), Some(2));
}

#[test]
fn generated_pairs_validate() {
    let td: PathBuf = [env!("CARGO_TARGET_TMPDIR"), "f3.td"].iter().collect();
    let td = td.to_string_lossy().into_owned();
    let gen = bin(&["gen", "--kind", "figure2", "--n", "3", "--td-out", &td]);
    assert_eq!(gen.status.code(), Some(0));
    let g = scratch("f3.gr", std::str::from_utf8(&gen.stdout).unwrap());
    let out = bin(&["validate", "--graph", &g, "--td", &td]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["valid"], true);
    let bad = scratch("bad.td", "s td 1 2 13\nb 1 1 2\n");
    assert_eq!(
        bin(&["validate", "--graph", &g, "--td", &bad])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn cut_and_count_is_deterministic() {
    let g = scratch("p5.gr", "p tw 5 4\n1 2\n2 3\n3 4\n4 5\n");
    let args = [
        "partition-cc",
        "--graph",
        &g,
        "--k",
        "2",
        "--reps",
        "20",
        "--seed",
        "7",
        "--no-timing",
    ];
    let a = bin(&args);
    let b = bin(&args);
    assert_eq!(a.stdout, b.stdout);
    let r = json(&a);
    assert_eq!(r["answer"], "yes");
    assert_eq!(r["reps"], 20);
    let seeded = Command::new(env!("CARGO_BIN_EXE_pathcover"))
        .args(["partition-cc", "--graph", &g, "--k", "2", "--no-timing"])
        .env("PATHCOVER_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(seeded.stdout, a.stdout);
}

#[test]
fn oracle_and_partition_agree() {
    let g = scratch("star4.gr", "p tw 5 4\n1 2\n1 3\n1 4\n1 5\n");
    assert_eq!(
        json(&bin(&["oracle", "--graph", &g, "--partition"]))["size"],
        3
    );
    assert_eq!(json(&bin(&["partition", "--graph", &g]))["size"], 3);
    assert_eq!(json(&bin(&["partition-cc", "--graph", &g]))["size"], 3);
    assert_eq!(json(&bin(&["oracle", "--graph", &g]))["size"], 2);
}

#[test]
fn bench_suites() {
    let empty = bin(&["bench", "--suite", "empty"]);
    assert_eq!(
        std::str::from_utf8(&empty.stdout).unwrap(),
        "instance,solver,size,time_ms,peak_states,width,nodes\n"
    );
    let fig = bin(&["bench", "--suite", "figure2", "--no-timing"]);
    let text = std::str::from_utf8(&fig.stdout).unwrap();
    let peak = |solver: &str| -> Vec<u64> {
        text.lines()
            .skip(1)
            .map(|l| l.split(',').collect::<Vec<_>>())
            .filter(|c| c[1] == solver)
            .map(|c| c[4].parse().unwrap())
            .collect()
    };
    let cover = peak("cover-dp");
    let partition = peak("partition-dp");
    assert_eq!(cover.len(), 3);
    assert!(cover.windows(2).all(|w| w[0] < w[1]), "{cover:?}");
    // Copies in a partition state are vertex-disjoint, so every table is
    // bounded by the states of a width-2 bag with all edges present.
    let triangle = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
    let bound = enumerate_states(
        &[0, 1, 2],
        &triangle,
        3,
        DpConfig::partition(Variant::PLAIN),
    )
    .len() as u64;
    assert!(
        partition.iter().all(|&p| p <= bound),
        "{partition:?} over {bound}"
    );
    let again = bin(&["bench", "--suite", "figure2", "--no-timing"]);
    assert_eq!(again.stdout, fig.stdout);
}
