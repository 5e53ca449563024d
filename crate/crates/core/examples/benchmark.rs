//! Running the matcher comparison programmatically and printing CSV.

use termmatch::bench::{run, to_csv, BenchConfig, Suite};

fn main() {
    for suite in [Suite::Linalg, Suite::Syntactic] {
        let cfg = BenchConfig { suite, patterns: 100, subjects: 200, seed: 1, repetitions: 3 };
        let rows = run(&cfg).unwrap();
        println!("# {suite}");
        print!("{}", to_csv(&rows));
    }
}
