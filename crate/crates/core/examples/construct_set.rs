//! Builds a tri-colored sum-free set in F_2^n with the randomized hashing
//! construction and writes it as JSON lines.
//!
//! ```bash
//! cargo run --release --example construct_set -- 15 z15.jsonl
//! ```

use std::fs::File;
use std::io::BufWriter;

use tcsfs::apfree::BMethod;
use tcsfs::bounds::ub_pms;
use tcsfs::construction::{run_trials, ConstructionParams, RunOptions};
use tcsfs::io::write_triple_set;

fn main() -> tcsfs::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(12, |s| s.parse().expect("n"));
    let out = args.next();

    let params = ConstructionParams::with_method(n, None, BMethod::Behrend, 0, 200)?;
    let result = run_trials(&params, RunOptions::default())?;

    println!(
        "n={n} M={} |B|={}: best |Z| = {} at trial {} (upper bound {})",
        params.modulus,
        params.b.len(),
        result.best.len(),
        result.best_trial,
        ub_pms(n as u64, 2)
    );
    for t in result.best.iter().take(5) {
        println!("  a={} b={} c={}", t.a(), t.b(), t.c());
    }

    if let Some(path) = out {
        write_triple_set(&mut BufWriter::new(File::create(&path)?), &result.best)?;
        println!("wrote {path}");
    }
    Ok(())
}
