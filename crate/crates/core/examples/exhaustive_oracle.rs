//! Exact maxima by exhaustive search, next to the polynomial bound.
//!
//! ```bash
//! cargo run --release --example exhaustive_oracle
//! ```

use tcsfs::apfree::max_apfree_mod_exact;
use tcsfs::bounds::ub_pms;
use tcsfs::oracle::max_tcsfs_exact;

fn main() -> tcsfs::Result<()> {
    for n in 0..=3 {
        let r = max_tcsfs_exact(n, None)?;
        println!(
            "n = {n}: max |S| = {} (ub {}), {} nodes, proven {}",
            r.max_size,
            ub_pms(n as u64, 2),
            r.nodes_explored,
            r.proven
        );
        for t in r.witness.iter() {
            println!("    ({}, {}, {})", t.a(), t.b(), t.c());
        }
    }
    for m in [9u64, 19, 27, 39] {
        let s = max_apfree_mod_exact(m)?;
        println!("M = {m}: max AP-free {} {:?}", s.len(), s.elements());
    }
    Ok(())
}
