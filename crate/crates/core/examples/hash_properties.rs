//! The three hashes on a weight class satisfy h1 - h0 = h2 - h1, so any
//! two equal values force all three equal.
//!
//! ```bash
//! cargo run --example hash_properties
//! ```

use tcsfs::construction::{enumerate_x, trial_rng, HashWeights};
use tcsfs::ModContext;

fn main() -> tcsfs::Result<()> {
    let ctx = ModContext::new(81)?;
    let hw = HashWeights::sample(ctx, 9, &mut trial_rng(0, 1));
    println!("w0 = {}, w = {:?}", hw.w0(), hw.weights());

    let x = enumerate_x(9)?;
    let mut on_ap = 0usize;
    for t in &x {
        let (h0, h1, h2) = (hw.h0(t.a())?, hw.h1(t.b())?, hw.h2(t.c())?);
        assert_eq!(ctx.add(h1, ctx.neg(h0)), ctx.add(h2, ctx.neg(h1)));
        if h0 == h1 {
            on_ap += 1;
        }
    }
    println!(
        "|X| = {}, triples with a constant progression: {on_ap}",
        x.len()
    );
    for t in x.iter().take(3) {
        println!(
            "  {} {} {} -> ({}, {}, {})",
            t.a(),
            t.b(),
            t.c(),
            hw.h0(t.a())?,
            hw.h1(t.b())?,
            hw.h2(t.c())?
        );
    }
    Ok(())
}
