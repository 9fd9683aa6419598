use proptest::prelude::*;

use tcsfs::apfree::BMethod;
use tcsfs::construction::{run_trials, trial_rng, ConstructionParams, HashWeights, RunOptions};
use tcsfs::oracle::max_tcsfs_exact;
use tcsfs::verify::{tcsfs_to_pms, verify_pms, verify_tcsfs, verify_tcsfs_naive};
use tcsfs::{BitVec, ModContext, Triple};

fn triples(n: usize, max_len: usize) -> impl Strategy<Value = Vec<Triple>> {
    let v = move || (0u64..1 << n).prop_map(move |m| BitVec::from_mask(n, m).unwrap());
    prop::collection::vec((v(), v(), v()), 0..=max_len).prop_map(|rows| {
        rows.into_iter()
            .map(|(a, b, c)| Triple::new(a, b, c).unwrap())
            .collect()
    })
}

/// Sets that satisfy a + b + c = 0 row by row, so cross conditions decide.
fn zero_sum_triples(n: usize, max_len: usize) -> impl Strategy<Value = Vec<Triple>> {
    let v = move || (0u64..1 << n).prop_map(move |m| BitVec::from_mask(n, m).unwrap());
    prop::collection::vec((v(), v()), 0..=max_len).prop_map(|rows| {
        rows.into_iter()
            .map(|(a, b)| Triple::from_pair(a, b).unwrap())
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn verifier_matches_naive(set in (1usize..=3).prop_flat_map(|n| triples(n, 6))) {
        prop_assert_eq!(verify_tcsfs(&set).unwrap(), verify_tcsfs_naive(&set).unwrap());
    }

    #[test]
    fn verifier_matches_naive_zero_sum(set in (1usize..=3).prop_flat_map(|n| zero_sum_triples(n, 6))) {
        prop_assert_eq!(verify_tcsfs(&set).unwrap(), verify_tcsfs_naive(&set).unwrap());
    }

    #[test]
    fn valid_sets_reduce_to_pms(set in (1usize..=3).prop_flat_map(|n| zero_sum_triples(n, 5))) {
        if verify_tcsfs(&set).unwrap().is_valid() {
            let red = tcsfs_to_pms(&set).unwrap();
            prop_assert_eq!(red.targets.len(), set.len());
            prop_assert!(verify_pms(&red.pairs).unwrap().is_valid());
        }
    }

    #[test]
    fn construction_sets_are_valid(n in 1usize..=12, seed in any::<u64>()) {
        let params = ConstructionParams::with_method(n, None, BMethod::Greedy, seed, 4).unwrap();
        let result = run_trials(&params, RunOptions { threads: Some(1), verify_each: true }).unwrap();
        prop_assert_eq!(result.best.dim(), n);
        prop_assert!(verify_tcsfs(result.best.triples()).unwrap().is_valid());
        for s in &result.trials {
            prop_assert!(s.y0 <= s.y && s.y1 <= s.y && s.y2 <= s.y);
            prop_assert!(s.z <= s.y && s.z + s.y0 + s.y1 + s.y2 >= s.y);
        }
        let red = tcsfs_to_pms(result.best.triples()).unwrap();
        prop_assert!(verify_pms(&red.pairs).unwrap().is_valid());
    }
}

#[test]
fn oracle_witnesses_are_valid() {
    for n in 0..=3 {
        let r = max_tcsfs_exact(n, None).unwrap();
        assert!(r.proven);
        assert_eq!(r.witness.len(), r.max_size);
        assert!(
            verify_tcsfs(r.witness.triples()).unwrap().is_valid(),
            "n={n}"
        );
        let red = tcsfs_to_pms(r.witness.triples()).unwrap();
        assert!(verify_pms(&red.pairs).unwrap().is_valid());
    }
}

/// Pearson χ² per coordinate of the sampled weights at M = 9. With 8 degrees
/// of freedom the statistic has mean 8 and sd 4; allow 4 sd.
#[test]
fn sampled_weights_are_uniform() {
    const DRAWS: usize = 100_000;
    let m = 9u64;
    let ctx = ModContext::new(m).unwrap();
    let mut rng = trial_rng(11, 1);
    let mut counts = vec![[0u64; 9]; 4];
    for _ in 0..DRAWS {
        let hw = HashWeights::sample(ctx, 3, &mut rng);
        counts[0][hw.w0() as usize] += 1;
        for (i, &w) in hw.weights().iter().enumerate() {
            counts[i + 1][w as usize] += 1;
        }
    }
    let expected = DRAWS as f64 / m as f64;
    for (coord, c) in counts.iter().enumerate() {
        let chi2: f64 = c
            .iter()
            .map(|&k| (k as f64 - expected).powi(2) / expected)
            .sum();
        assert!(chi2 < 8.0 + 4.0 * 4.0, "coordinate {coord}: chi2 = {chi2}");
    }
}
