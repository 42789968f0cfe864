use clap::Parser;
use pathcover::cli::{run, RunConfig};

fn main() {
    let cfg = RunConfig::parse();
    let out = run(&cfg);
    if out.code == 0 || out.code == pathcover::cli::EXIT_INFEASIBLE || out.code == 1 {
        print!("{}", out.report);
        if !out.report.ends_with('\n') {
            println!();
        }
    } else {
        eprintln!("{}", out.report);
    }
    std::process::exit(out.code);
}
