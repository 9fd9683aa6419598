//! Monte Carlo check of E|Y| and the collision bound on E|Y_i|.
//!
//! ```bash
//! cargo run --release --example estimate_expectations -- 9 20000
//! ```

use tcsfs::apfree::BMethod;
use tcsfs::construction::{
    collision_factor, expected_y, rational_to_f64, run_trials, ConstructionParams, RunOptions,
    TrialSummary,
};

fn main() -> tcsfs::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(9, |s| s.parse().expect("n"));
    let trials: u64 = args.next().map_or(20_000, |s| s.parse().expect("trials"));

    let params = ConstructionParams::with_method(n, None, BMethod::Greedy, 1, trials)?;
    let result = run_trials(&params, RunOptions::default())?;
    let s = TrialSummary::from_stats(&result.trials);

    let ey = expected_y(params.n_work, params.modulus, params.b.len())?;
    let f = collision_factor(params.n_work, params.modulus)?;
    println!(
        "M = {}, |B| = {}, T = {trials}",
        params.modulus,
        params.b.len()
    );
    println!(
        "E|Y| = {ey} = {:.4}; observed {:.4} ± {:.4}",
        rational_to_f64(&ey),
        s.y.mean,
        s.y.se
    );
    let bound = rational_to_f64(&f) * s.y.mean;
    for (name, m) in [("Y0", s.y0), ("Y1", s.y1), ("Y2", s.y2)] {
        println!(
            "mean|{name}| = {:.4} ± {:.4}, bound {f}·mean|Y| = {bound:.4}",
            m.mean, m.se
        );
    }
    println!("mean|Z| = {:.4}", s.z.mean);
    Ok(())
}
