//! Upper and lower bounds on tri-colored sum-free sets in F_2^n.
//!
//! ```bash
//! cargo run --example bounds_table -- 30
//! ```

use tcsfs::bounds::{lb_formula, log2_big, ub_pms, ub_tcsfs_f2};

fn main() {
    let max_n: u64 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("max n must be an integer"))
        .unwrap_or(24);

    println!(
        "{:>4} {:>22} {:>22} {:>10} {:>10}",
        "n", "ub_pms", "6·C(n,n/3)", "log2 ub/n", "lb exp"
    );
    for n in (3..=max_n).step_by(3) {
        let ub = ub_pms(n, 2);
        println!(
            "{n:>4} {ub:>22} {:>22} {:>10.4} {:>10.4}",
            ub_tcsfs_f2(n),
            log2_big(&ub) / n as f64,
            lb_formula(n).log2() / n as f64,
        );
    }
}
