//! Decision procedures for tri-colored sum-free sets and perfectly matched
//! sequences.
//!
//! Indices in a [`Violation`] are 1-based, and the reported witness is the
//! lexicographically smallest violating index tuple.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{BitVec, Triple};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    /// `aᵢ + bᵢ + cᵢ ≠ 0`.
    DiagonalNonzero,
    /// `aᵢ + bⱼ + c_k = 0` with `(i, j, k)` not all equal.
    CrossZero,
    /// `a_j + b_k = a_i + b_i` with `j ≠ k`.
    PmsCollision,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub indices: (usize, usize, usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, j, k) = self.indices;
        match self.kind {
            ViolationKind::DiagonalNonzero => write!(f, "a_{i} + b_{j} + c_{k} != 0"),
            ViolationKind::CrossZero => write!(f, "a_{i} + b_{j} + c_{k} = 0"),
            ViolationKind::PmsCollision => write!(f, "a_{j} + b_{k} = a_{i} + b_{i}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid(Violation),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }

    pub fn violation(&self) -> Option<Violation> {
        match self {
            Verdict::Valid => None,
            Verdict::Invalid(v) => Some(*v),
        }
    }
}

fn common_dim<'a>(mut vectors: impl Iterator<Item = &'a BitVec>) -> Result<()> {
    let Some(first) = vectors.next() else {
        return Ok(());
    };
    let n = first.len();
    for v in vectors {
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: v.len(),
            });
        }
    }
    Ok(())
}

fn index_of<'a>(vectors: impl Iterator<Item = &'a BitVec>) -> HashMap<&'a BitVec, Vec<usize>> {
    let mut index: HashMap<&BitVec, Vec<usize>> = HashMap::new();
    for (k, v) in vectors.enumerate() {
        index.entry(v).or_default().push(k);
    }
    index
}

/// Checks that `aᵢ + bⱼ + c_k = 0` holds exactly when `i = j = k`.
///
/// For every `(i, j)` the sum `aᵢ + bⱼ` is looked up in an index of the
/// c-values, so the cost is `O(m²)` lookups. Rows `i` are scanned in
/// parallel and the first violating row wins.
pub fn verify_tcsfs(triples: &[Triple]) -> Result<Verdict> {
    common_dim(triples.iter().flat_map(|t| [t.a(), t.b(), t.c()]))?;
    let c_index = index_of(triples.iter().map(Triple::c));
    let m = triples.len();

    let first = (0..m).into_par_iter().find_map_first(|i| {
        let a = triples[i].a();
        for j in 0..m {
            let sum = a.xor_add(triples[j].b()).expect("dimensions checked");
            let hits = c_index.get(&sum).map(Vec::as_slice).unwrap_or(&[]);
            // smallest k with a_i + b_j = c_k, other than the diagonal itself
            let cross = hits
                .iter()
                .copied()
                .find(|&k| !(i == j && k == i))
                .map(|k| (k, ViolationKind::CrossZero));
            let diagonal =
                (i == j && triples[i].c() != &sum).then_some((i, ViolationKind::DiagonalNonzero));
            let found = match (cross, diagonal) {
                (Some(x), Some(y)) => Some(if x.0 < y.0 { x } else { y }),
                (x, y) => x.or(y),
            };
            if let Some((k, kind)) = found {
                return Some(Violation {
                    kind,
                    indices: (i + 1, j + 1, k + 1),
                });
            }
        }
        None
    });
    Ok(first.map_or(Verdict::Valid, Verdict::Invalid))
}

/// Checks that `a_j + b_k = aᵢ + bᵢ` has no solution with `j ≠ k`.
pub fn verify_pms(pairs: &[(BitVec, BitVec)]) -> Result<Verdict> {
    common_dim(pairs.iter().flat_map(|(a, b)| [a, b]))?;
    let targets: Vec<BitVec> = pairs
        .iter()
        .map(|(a, b)| a.xor_add(b))
        .collect::<Result<_>>()?;
    let t_index = index_of(targets.iter());
    let m = pairs.len();

    let best = (0..m)
        .into_par_iter()
        .filter_map(|j| {
            let mut best: Option<(usize, usize, usize)> = None;
            for k in (0..m).filter(|&k| k != j) {
                let sum = pairs[j].0.xor_add(&pairs[k].1).expect("dimensions checked");
                if let Some(&i) = t_index.get(&sum).and_then(|v| v.first()) {
                    let cand = (i + 1, j + 1, k + 1);
                    if best.is_none_or(|b| cand < b) {
                        best = Some(cand);
                    }
                }
            }
            best
        })
        .min();
    Ok(best.map_or(Verdict::Valid, |indices| {
        Verdict::Invalid(Violation {
            kind: ViolationKind::PmsCollision,
            indices,
        })
    }))
}

/// A perfectly matched sequence and its target set (in index order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PmsReduction {
    pub pairs: Vec<(BitVec, BitVec)>,
    pub targets: Vec<BitVec>,
}

/// Drops the third coordinate of a verified tri-colored sum-free set.
///
/// In characteristic 2, `-cᵢ = cᵢ`, so the target set is `{cᵢ}` and has
/// exactly `|S|` elements.
pub fn tcsfs_to_pms(triples: &[Triple]) -> Result<PmsReduction> {
    if let Verdict::Invalid(v) = verify_tcsfs(triples)? {
        return Err(Error::InvalidSet(v.to_string()));
    }
    Ok(PmsReduction {
        pairs: triples
            .iter()
            .map(|t| (t.a().clone(), t.b().clone()))
            .collect(),
        targets: triples.iter().map(|t| t.c().clone()).collect(),
    })
}

/// Textbook triple loop over all `(i, j, k)`, in lexicographic order.
pub fn verify_tcsfs_naive(triples: &[Triple]) -> Result<Verdict> {
    common_dim(triples.iter().flat_map(|t| [t.a(), t.b(), t.c()]))?;
    let m = triples.len();
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                let zero = triples[i]
                    .a()
                    .xor_add(triples[j].b())?
                    .xor_add(triples[k].c())?
                    .is_zero();
                let diagonal = i == j && j == k;
                if zero != diagonal {
                    let kind = if diagonal {
                        ViolationKind::DiagonalNonzero
                    } else {
                        ViolationKind::CrossZero
                    };
                    return Ok(Verdict::Invalid(Violation {
                        kind,
                        indices: (i + 1, j + 1, k + 1),
                    }));
                }
            }
        }
    }
    Ok(Verdict::Valid)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BitVec {
        s.parse().unwrap()
    }

    fn t(a: &str, b: &str, c: &str) -> Triple {
        Triple::new(bv(a), bv(b), bv(c)).unwrap()
    }

    #[test]
    fn tcsfs_examples() {
        assert_eq!(verify_tcsfs(&[t("0", "0", "0")]).unwrap(), Verdict::Valid);
        let dup_c = [t("00", "00", "00"), t("11", "11", "00")];
        assert_eq!(
            verify_tcsfs(&dup_c).unwrap(),
            Verdict::Invalid(Violation {
                kind: ViolationKind::CrossZero,
                indices: (1, 1, 2)
            })
        );
        let good = [t("10", "01", "11"), t("00", "00", "00")];
        assert_eq!(verify_tcsfs(&good).unwrap(), Verdict::Valid);
        assert_eq!(verify_tcsfs_naive(&good).unwrap(), Verdict::Valid);
        assert_eq!(verify_tcsfs(&[]).unwrap(), Verdict::Valid);
    }

    #[test]
    fn diagonal_failure_reported() {
        let v = verify_tcsfs(&[t("10", "01", "10")]).unwrap();
        assert_eq!(
            v.violation().unwrap(),
            Violation {
                kind: ViolationKind::DiagonalNonzero,
                indices: (1, 1, 1)
            }
        );
    }

    #[test]
    fn duplicate_coordinates_are_violations() {
        // duplicate a: a_1 + b_2 + c_2 = 0
        let dup_a = [t("10", "00", "10"), t("10", "01", "11")];
        assert_eq!(
            verify_tcsfs(&dup_a).unwrap().violation().unwrap().indices,
            (1, 2, 2)
        );
        // duplicate b: a_1 + b_2 + c_1 = 0
        let dup_b = [t("10", "01", "11"), t("00", "01", "01")];
        assert_eq!(
            verify_tcsfs(&dup_b).unwrap().violation().unwrap().indices,
            (1, 2, 1)
        );
        // duplicate c: a_1 + b_1 + c_2 = 0
        let dup_c = [t("10", "01", "11"), t("11", "00", "11")];
        assert_eq!(
            verify_tcsfs(&dup_c).unwrap().violation().unwrap().indices,
            (1, 1, 2)
        );
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let mixed = [t("1", "1", "0"), t("10", "10", "00")];
        assert!(matches!(
            verify_tcsfs(&mixed),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(verify_pms(&[(bv("1"), bv("10"))]).is_err());
    }

    #[test]
    fn pms_examples() {
        assert!(verify_pms(&[(bv("0"), bv("0"))]).unwrap().is_valid());
        assert!(verify_pms(&[(bv("0"), bv("0")), (bv("1"), bv("1"))])
            .unwrap()
            .is_valid());
        assert!(verify_pms(&[(bv("10"), bv("01")), (bv("00"), bv("00"))])
            .unwrap()
            .is_valid());
        // a_1 + b_2 = 0 = t_1
        let bad = [(bv("0"), bv("0")), (bv("1"), bv("0"))];
        assert_eq!(
            verify_pms(&bad).unwrap().violation().unwrap(),
            Violation {
                kind: ViolationKind::PmsCollision,
                indices: (1, 1, 2)
            }
        );
    }

    #[test]
    fn reduction_examples() {
        let r = tcsfs_to_pms(&[t("0", "0", "0")]).unwrap();
        assert_eq!(r.pairs, vec![(bv("0"), bv("0"))]);
        assert_eq!(r.targets, vec![bv("0")]);
        let r = tcsfs_to_pms(&[t("10", "01", "11"), t("00", "00", "00")]).unwrap();
        assert_eq!(r.targets, vec![bv("11"), bv("00")]);
        assert!(verify_pms(&r.pairs).unwrap().is_valid());
        assert!(tcsfs_to_pms(&[t("00", "00", "00"), t("11", "11", "00")]).is_err());
    }

    /// Every list of up to `max_len` candidate triples over F₂ⁿ, including
    /// ones whose diagonal fails, built from an odometer over `values`.
    fn for_each_list(values: &[Triple], max_len: usize, f: &mut impl FnMut(&[Triple])) {
        let mut cur = Vec::new();
        fn rec(
            values: &[Triple],
            max_len: usize,
            cur: &mut Vec<Triple>,
            f: &mut impl FnMut(&[Triple]),
        ) {
            f(cur);
            if cur.len() == max_len {
                return;
            }
            for v in values {
                cur.push(v.clone());
                rec(values, max_len, cur, f);
                cur.pop();
            }
        }
        rec(values, max_len, &mut cur, f);
    }

    #[test]
    fn agrees_with_naive_on_small_inputs() {
        // n = 1, all 8 triples, lists of length ≤ 4
        let n1: Vec<Triple> = (0..8u64)
            .map(|m| {
                Triple::new(
                    BitVec::from_mask(1, m & 1).unwrap(),
                    BitVec::from_mask(1, m >> 1 & 1).unwrap(),
                    BitVec::from_mask(1, m >> 2 & 1).unwrap(),
                )
                .unwrap()
            })
            .collect();
        let mut count = 0;
        for_each_list(&n1, 4, &mut |s| {
            assert_eq!(
                verify_tcsfs(s).unwrap(),
                verify_tcsfs_naive(s).unwrap(),
                "{s:?}"
            );
            count += 1;
        });
        assert_eq!(count, 1 + 8 + 64 + 512 + 4096);
    }
}
