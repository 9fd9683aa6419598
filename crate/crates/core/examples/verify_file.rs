//! Verifies a TripleSet file, or a built-in example when no path is given,
//! and checks its reduction to a perfectly matched sequence.
//!
//! ```bash
//! cargo run --example verify_file -- z15.jsonl
//! ```

use std::fs::File;
use std::io::BufReader;

use tcsfs::io::read_triple_set;
use tcsfs::verify::{tcsfs_to_pms, verify_pms, verify_tcsfs, Verdict};
use tcsfs::{Triple, TripleSet};

fn demo() -> tcsfs::Result<TripleSet> {
    let t = |a: &str, b: &str| Triple::from_pair(a.parse()?, b.parse()?);
    TripleSet::new(2, vec![t("10", "00")?, t("01", "11")?, t("10", "10")?])
}

fn main() -> tcsfs::Result<()> {
    let set = match std::env::args().nth(1) {
        Some(path) => read_triple_set(BufReader::new(File::open(path)?))?,
        None => demo()?,
    };
    println!("n = {}, |S| = {}", set.dim(), set.len());
    match verify_tcsfs(set.triples())? {
        Verdict::Valid => {
            let red = tcsfs_to_pms(set.triples())?;
            println!(
                "valid; pms reduction valid: {}",
                verify_pms(&red.pairs)?.is_valid()
            );
        }
        Verdict::Invalid(v) => println!("invalid: {v}"),
    }
    Ok(())
}
