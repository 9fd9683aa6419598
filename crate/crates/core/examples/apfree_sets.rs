//! 3-AP-free sets in [0, N) and in Z/MZ.
//!
//! ```bash
//! cargo run --example apfree_sets
//! ```

use tcsfs::apfree::{
    behrend_int, elkin_bound, greedy_apfree_int, is_ap_free_int, max_apfree_int_exact, BMethod,
};

fn main() -> tcsfs::Result<()> {
    for n in [10u64, 100, 1_000, 10_000, 100_000] {
        let b = behrend_int(n);
        let g = greedy_apfree_int(n);
        assert!(is_ap_free_int(&b) && is_ap_free_int(&g));
        println!("N = {n:>6}: behrend {:>5}, greedy {:>5}", b.len(), g.len());
    }

    // Exact maxima for small N.
    for n in [10u64, 20, 30] {
        let best = max_apfree_int_exact(n)?;
        println!("r_3({n}) = {} via {best:?}", best.len());
    }

    // Sets B used by the construction live in Z/MZ.
    for m in [81u64, 281, 1009] {
        for method in [BMethod::Behrend, BMethod::Greedy] {
            let set = method.build(m)?;
            println!(
                "M = {m:>4} {method:?}: |B| = {:>3} (Elkin shape, no constant: {:.1})",
                set.len(),
                elkin_bound(m)
            );
        }
    }
    Ok(())
}
