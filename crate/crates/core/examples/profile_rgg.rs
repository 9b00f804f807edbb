//! Times one kernelization of a random geometric graph and prints its stats.
//! Usage: profile_rgg [n] [workers]

use std::time::Instant;

use miskernel::generators::random_geometric;
use miskernel::{kernelize, KernelizerConfig};

fn main() {
    let arg = |i: usize, d: usize| std::env::args().nth(i).and_then(|a| a.parse().ok()).unwrap_or(d);
    let (n, workers) = (arg(1, 100_000), arg(2, 1));
    let t = Instant::now();
    let (g, _) = random_geometric(n, 17.0, 600);
    eprintln!("generate {:.2}s", t.elapsed().as_secs_f64());
    let t = Instant::now();
    let r = kernelize(&g, &KernelizerConfig::with_workers(workers)).unwrap();
    eprintln!("kernelize {:.2}s", t.elapsed().as_secs_f64());
    println!("{}", serde_json::to_string_pretty(&r.stats).unwrap());
}
