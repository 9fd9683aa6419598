//! Exhaustive search for maximum tri-colored sum-free sets at tiny `n`.

use serde::Serialize;

use crate::bounds::ub_pms;
use crate::error::{Error, Result};
use crate::group::{BitVec, Triple, TripleSet};
use num_traits::ToPrimitive;

pub const CANDIDATE_LIMIT: usize = 8;
pub const SEARCH_LIMIT: usize = 3;

fn check(n: usize, limit: usize, what: &'static str) -> Result<()> {
    if n > limit {
        return Err(Error::LimitExceeded {
            what,
            value: n as u64,
            limit: limit as u64,
        });
    }
    Ok(())
}

/// The `4ⁿ` triples `(a, b, a + b)`, ordered by `(a, b)`. Any member of a
/// tri-colored sum-free set has this form.
pub fn all_candidate_triples(n: usize) -> Result<Vec<Triple>> {
    check(n, CANDIDATE_LIMIT, "n")?;
    let mut vecs: Vec<BitVec> = (0..1u64 << n)
        .map(|m| BitVec::from_mask(n, m))
        .collect::<Result<_>>()?;
    vecs.sort();
    let mut out = Vec::with_capacity(vecs.len() * vecs.len());
    for a in &vecs {
        for b in &vecs {
            out.push(Triple::from_pair(a.clone(), b.clone())?);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleResult {
    pub n: usize,
    pub max_size: usize,
    #[serde(serialize_with = "serialize_witness")]
    pub witness: TripleSet,
    pub nodes_explored: u64,
    /// False when the node budget ran out; `max_size` is then only the best
    /// size found.
    pub proven: bool,
}

fn serialize_witness<S: serde::Serializer>(w: &TripleSet, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(w.triples())
}

struct Search {
    // (a, b, c) masks of the candidates, in branching order
    cands: Vec<(u8, u8, u8)>,
    chosen: Vec<usize>,
    best: Vec<usize>,
    cap: usize,
    nodes: u64,
    budget: Option<u64>,
    exhausted: bool,
}

impl Search {
    /// Whether `t` can join the chosen set: no sum involving `t` in any
    /// position may vanish off the diagonal.
    fn compatible(&self, t: usize) -> bool {
        let (at, bt, ct) = self.cands[t];
        for &x in &self.chosen {
            let (ax, bx, cx) = self.cands[x];
            // tuples using t twice and x once
            if at ^ bt ^ cx == 0 || at ^ bx ^ ct == 0 || ax ^ bt ^ ct == 0 {
                return false;
            }
            for &y in &self.chosen {
                let (_, by, cy) = self.cands[y];
                if at ^ bx ^ cy == 0 || ax ^ bt ^ cy == 0 || ax ^ by ^ ct == 0 {
                    return false;
                }
            }
        }
        true
    }

    fn dfs(&mut self, from: usize) {
        if self.exhausted {
            return;
        }
        self.nodes += 1;
        if self.budget.is_some_and(|b| self.nodes > b) {
            self.exhausted = true;
            return;
        }
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        if self.best.len() >= self.cap {
            return;
        }
        let open: Vec<usize> = (from..self.cands.len())
            .filter(|&t| self.compatible(t))
            .collect();
        if self.chosen.len() + open.len() <= self.best.len() {
            return;
        }
        for (pos, &t) in open.iter().enumerate() {
            if self.chosen.len() + open.len() - pos <= self.best.len() {
                return;
            }
            if !self.compatible(t) {
                continue;
            }
            self.chosen.push(t);
            self.dfs(t + 1);
            self.chosen.pop();
            if self.exhausted || self.best.len() >= self.cap {
                return;
            }
        }
    }
}

/// A maximum tri-colored sum-free set in F₂ⁿ, `n ≤ 3`.
///
/// Depth-first over the candidates in `(a, b)` order, adding a triple only
/// when every new cross sum is nonzero. Branches that cannot beat the best
/// set found are cut, and the search stops early once `ub_pms(n, 2)` is
/// reached. The witness is the first maximum in branching order.
pub fn max_tcsfs_exact(n: usize, budget: Option<u64>) -> Result<OracleResult> {
    check(n, SEARCH_LIMIT, "n")?;
    let cand_triples = all_candidate_triples(n)?;
    let cands = cand_triples
        .iter()
        .map(|t| {
            let m = |v: &BitVec| v.to_mask().expect("n <= 3") as u8;
            (m(t.a()), m(t.b()), m(t.c()))
        })
        .collect();
    // a's of a valid set are distinct, so 2ⁿ is a cap as well
    let cap = ub_pms(n as u64, 2)
        .to_usize()
        .unwrap_or(usize::MAX)
        .min(1 << n)
        .max(1);
    let mut search = Search {
        cands,
        chosen: Vec::new(),
        best: Vec::new(),
        cap,
        nodes: 0,
        budget,
        exhausted: false,
    };
    search.dfs(0);
    let witness = TripleSet::new(
        n,
        search
            .best
            .iter()
            .map(|&i| cand_triples[i].clone())
            .collect(),
    )?;
    Ok(OracleResult {
        n,
        max_size: witness.len(),
        witness,
        nodes_explored: search.nodes,
        proven: !search.exhausted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::verify_tcsfs;

    #[test]
    fn candidates() {
        let c1 = all_candidate_triples(1).unwrap();
        let text: Vec<String> = c1
            .iter()
            .map(|t| format!("{}{}{}", t.a(), t.b(), t.c()))
            .collect();
        assert_eq!(text, ["000", "011", "101", "110"]);
        assert_eq!(all_candidate_triples(2).unwrap().len(), 16);
        assert_eq!(all_candidate_triples(0).unwrap().len(), 1);
        assert!(all_candidate_triples(9).is_err());
    }

    #[test]
    fn tiny_maxima() {
        let r0 = max_tcsfs_exact(0, None).unwrap();
        assert_eq!(r0.max_size, 1);
        let r1 = max_tcsfs_exact(1, None).unwrap();
        assert_eq!(r1.max_size, 1);
        assert!(r1.proven);
        assert!(verify_tcsfs(r1.witness.triples()).unwrap().is_valid());
        assert!(max_tcsfs_exact(4, None).is_err());
    }

    #[test]
    fn every_pair_at_n1_violates() {
        let c = all_candidate_triples(1).unwrap();
        for i in 0..c.len() {
            for j in i + 1..c.len() {
                let pair = [c[i].clone(), c[j].clone()];
                assert!(!verify_tcsfs(&pair).unwrap().is_valid());
            }
        }
    }

    #[test]
    fn budget_is_reported() {
        let r = max_tcsfs_exact(3, Some(5)).unwrap();
        assert!(!r.proven);
        assert!(verify_tcsfs(r.witness.triples()).unwrap().is_valid());
    }
}
