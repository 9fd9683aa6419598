//! Sets with no three distinct elements in arithmetic progression, over the
//! integers and over `ℤ/Mℤ`.
//!
//! The construction needs a large AP-free `B ⊆ ℤ/Mℤ`. Integer sets that lie
//! in `[0, (M-1)/2]` stay AP-free modulo `M` (then `|x + z - 2y| < M`), so
//! the integer constructions here feed [`embed_mod`].

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A subset of `ℤ/Mℤ` with no three distinct elements `x, y, z` such that
/// `x + z ≡ 2y (mod M)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApFreeSet {
    #[serde(rename = "M")]
    modulus: u64,
    elements: Vec<u64>,
}

impl ApFreeSet {
    /// Validates range, distinctness and AP-freeness. Elements may be given
    /// in any order; they are stored ascending.
    pub fn new(modulus: u64, mut elements: Vec<u64>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidModulus(0));
        }
        if !is_ap_free_mod(&elements, modulus)? {
            let (x, y, z) = find_ap_mod(&elements, modulus).expect("AP witness");
            return Err(Error::NotApFree(x, y, z));
        }
        elements.sort_unstable();
        Ok(ApFreeSet { modulus, elements })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// Re-runs [`ApFreeSet::new`]'s checks, for values obtained by
    /// deserialization.
    pub fn validated(self) -> Result<Self> {
        ApFreeSet::new(self.modulus, self.elements)
    }
}

fn check_residues(set: &[u64], modulus: u64) -> Result<HashSet<u64>> {
    let mut seen = HashSet::with_capacity(set.len());
    for &x in set {
        if x >= modulus {
            return Err(Error::OutOfRange {
                value: x,
                bound: modulus,
            });
        }
        if !seen.insert(x) {
            return Err(Error::DuplicateElement(x));
        }
    }
    Ok(seen)
}

/// All `y` in `[0, M)` with `2y ≡ s (mod M)`.
fn midpoints(s: u64, modulus: u64) -> Vec<u64> {
    if modulus % 2 == 1 {
        let inv2 = modulus.div_ceil(2) % modulus;
        vec![((s % modulus) as u128 * inv2 as u128 % modulus as u128) as u64]
    } else {
        let s = s % modulus;
        if s % 2 == 1 {
            return Vec::new();
        }
        let half = modulus / 2;
        vec![s / 2, s / 2 + half]
    }
}

fn find_ap_mod(set: &[u64], modulus: u64) -> Option<(u64, u64, u64)> {
    let members: HashSet<u64> = set.iter().copied().collect();
    for (i, &x) in set.iter().enumerate() {
        for &z in &set[i + 1..] {
            for y in midpoints(x + z, modulus) {
                if y != x && y != z && members.contains(&y) {
                    return Some((x.min(z), y, x.max(z)));
                }
            }
        }
    }
    None
}

/// True iff no distinct `x, y, z ∈ set` satisfy `x + z ≡ 2y (mod M)`.
///
/// Every unordered pair `{x, z}` is tried and `y` solved for, so the check
/// is `O(|set|²)` and valid for even `M` as well.
pub fn is_ap_free_mod(set: &[u64], modulus: u64) -> Result<bool> {
    if modulus == 0 {
        return Err(Error::InvalidModulus(0));
    }
    check_residues(set, modulus)?;
    Ok(find_ap_mod(set, modulus).is_none())
}

/// True iff no distinct integers `x, y, z ∈ set` satisfy `x + z = 2y`.
pub fn is_ap_free_int(set: &[u64]) -> bool {
    let members: HashSet<u64> = set.iter().copied().collect();
    for (i, &x) in set.iter().enumerate() {
        for &z in &set[i + 1..] {
            if x != z && (x + z) % 2 == 0 && members.contains(&((x + z) / 2)) {
                return false;
            }
        }
    }
    true
}

/// Greedy scan of `0..N`: keep `v` unless it completes a three-term
/// progression with two kept elements.
pub fn greedy_apfree_int(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut forbidden = vec![false; n];
    let mut kept: Vec<u64> = Vec::new();
    for v in 0..n {
        if forbidden[v] {
            continue;
        }
        // v is the largest kept element so far; it can only be the middle
        // of a future progression x < v < 2v - x.
        for &x in &kept {
            let next = 2 * v - x as usize;
            if next < n {
                forbidden[next] = true;
            }
        }
        kept.push(v as u64);
    }
    kept
}

/// Behrend's sphere construction on `[0, N)`, with the greedy set standing
/// in for dimension 1.
///
/// For each dimension `d ≥ 2` up to `⌈√log₂N⌉ + 2`, digit vectors
/// `x ∈ {0..D-1}^d` with `(2D-1)^d ≤ N` are mapped to `Σ xᵢ (2D-1)^{i-1}`.
/// Sums of two such numbers never carry, so a progression among them is a
/// progression of digit vectors, which cannot lie on one sphere
/// `Σ xᵢ² = r`. The largest sphere wins; ties go to the smaller `d`, then
/// the smaller `r`.
pub fn behrend_int(n: u64) -> Vec<u64> {
    if n == 0 {
        return Vec::new();
    }
    let mut best = greedy_apfree_int(n);
    let log2n = (n as f64).log2();
    let max_d = log2n.sqrt().ceil() as u32 + 2;
    for d in 2..=max_d {
        let Some(base_digits) = max_digit_count(n, d) else {
            continue;
        };
        if base_digits < 2 {
            continue;
        }
        let candidate = best_sphere(base_digits, d);
        if candidate.len() > best.len() {
            best = candidate;
        }
    }
    best.sort_unstable();
    best
}

/// Largest `D` with `(2D - 1)^d ≤ n`.
fn max_digit_count(n: u64, d: u32) -> Option<u64> {
    let fits = |digits: u64| -> bool { (2 * digits - 1).checked_pow(d).is_some_and(|v| v <= n) };
    if !fits(1) {
        return None;
    }
    let (mut lo, mut hi) = (1u64, 2u64);
    while fits(hi) {
        lo = hi;
        hi *= 2;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

fn best_sphere(digits: u64, d: u32) -> Vec<u64> {
    let base = 2 * digits - 1;
    let mut spheres: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    let mut x = vec![0u64; d as usize];
    loop {
        let radius: u64 = x.iter().map(|&v| v * v).sum();
        let value = x.iter().rev().fold(0u64, |acc, &v| acc * base + v);
        spheres.entry(radius).or_default().push(value);
        // odometer increment
        let mut i = 0;
        loop {
            if i == x.len() {
                return pick_largest(spheres);
            }
            x[i] += 1;
            if x[i] < digits {
                break;
            }
            x[i] = 0;
            i += 1;
        }
    }
}

fn pick_largest(spheres: BTreeMap<u64, Vec<u64>>) -> Vec<u64> {
    let mut best: Vec<u64> = Vec::new();
    // ascending radius; strict comparison keeps the smallest r on ties
    for (_, members) in spheres {
        if members.len() > best.len() {
            best = members;
        }
    }
    best
}

/// Reinterprets an integer AP-free set as a subset of `ℤ/Mℤ`.
///
/// Requires odd `M` and `max(set) ≤ (M-1)/2`; the result is re-checked with
/// [`is_ap_free_mod`].
pub fn embed_mod(set: &[u64], modulus: u64) -> Result<ApFreeSet> {
    if modulus == 0 || modulus.is_multiple_of(2) {
        return Err(Error::InvalidModulus(modulus));
    }
    let bound = (modulus - 1) / 2;
    if let Some(&value) = set.iter().find(|&&x| x > bound) {
        return Err(Error::EmbeddingBound {
            value,
            bound,
            modulus,
        });
    }
    ApFreeSet::new(modulus, set.to_vec())
}

/// Largest modulus accepted by [`max_apfree_mod_exact`].
pub const EXACT_MOD_LIMIT: u64 = 40;
/// Largest `N` accepted by [`max_apfree_int_exact`].
pub const EXACT_INT_LIMIT: u64 = 40;

/// A maximum AP-free subset of `ℤ/Mℤ`, lexicographically smallest among
/// maxima. Branch and bound, `M ≤ 40`.
pub fn max_apfree_mod_exact(modulus: u64) -> Result<ApFreeSet> {
    if modulus == 0 {
        return Err(Error::InvalidModulus(0));
    }
    if modulus > EXACT_MOD_LIMIT {
        return Err(Error::LimitExceeded {
            what: "M",
            value: modulus,
            limit: EXACT_MOD_LIMIT,
        });
    }
    let best = max_apfree_search(modulus as usize, Some(modulus));
    ApFreeSet::new(modulus, best)
}

/// A maximum AP-free subset of `[0, N)` over the integers,
/// lexicographically smallest among maxima. Branch and bound, `N ≤ 40`.
pub fn max_apfree_int_exact(n: u64) -> Result<Vec<u64>> {
    if n > EXACT_INT_LIMIT {
        return Err(Error::LimitExceeded {
            what: "N",
            value: n,
            limit: EXACT_INT_LIMIT,
        });
    }
    Ok(max_apfree_search(n as usize, None))
}

/// Include-first DFS over `0..size` in increasing order, which visits sets
/// in lexicographic order, so the first maximum found is the smallest.
/// Both problems are translation invariant, so the search fixes `0 ∈ S`.
fn max_apfree_search(size: usize, modulus: Option<u64>) -> Vec<u64> {
    if size == 0 {
        return Vec::new();
    }
    struct Search {
        size: usize,
        modulus: Option<u64>,
        chosen: Vec<usize>,
        // number of progressions that already forbid each value
        blocked: Vec<u32>,
        best: Vec<usize>,
    }

    impl Search {
        // values completing a progression with chosen x and new element v
        fn completions(&self, x: usize, v: usize) -> Vec<usize> {
            let mut out = Vec::with_capacity(3);
            match self.modulus {
                None => {
                    let (lo, hi) = (x.min(v), x.max(v));
                    let above = 2 * hi - lo;
                    if above < self.size {
                        out.push(above);
                    }
                    if let Some(below) = (2 * lo).checked_sub(hi) {
                        out.push(below);
                    }
                    if (lo + hi) % 2 == 0 {
                        out.push((lo + hi) / 2);
                    }
                }
                Some(m) => {
                    let m = m as usize;
                    out.push((2 * v + m - x) % m);
                    out.push((2 * x + m - v) % m);
                    out.extend(
                        midpoints((x + v) as u64, m as u64)
                            .into_iter()
                            .map(|y| y as usize),
                    );
                }
            }
            out.retain(|&y| y != x && y != v);
            out
        }

        fn add(&mut self, v: usize, delta: i32) {
            let others: Vec<usize> = self.chosen.clone();
            for x in others {
                for y in self.completions(x, v) {
                    self.blocked[y] = (self.blocked[y] as i32 + delta) as u32;
                }
            }
        }

        fn dfs(&mut self, next: usize) {
            let open = (next..self.size).filter(|&v| self.blocked[v] == 0).count();
            if self.chosen.len() + open <= self.best.len() {
                return;
            }
            let Some(v) = (next..self.size).find(|&v| self.blocked[v] == 0) else {
                self.best = self.chosen.clone();
                return;
            };
            self.add(v, 1);
            self.chosen.push(v);
            self.dfs(v + 1);
            self.chosen.pop();
            self.add(v, -1);
            self.dfs(v + 1);
        }
    }

    let mut search = Search {
        size,
        modulus,
        chosen: vec![0],
        blocked: vec![0; size],
        best: Vec::new(),
    };
    search.dfs(1);
    search.best.into_iter().map(|v| v as u64).collect()
}

/// `log₂(M)^{1/4} · 2^{-√(8 log₂ M)} · M`, the size guaranteed by Elkin's
/// theorem for large `M`. Meaningful only as a comparison at small `M`.
pub fn elkin_bound(modulus: u64) -> f64 {
    let m = modulus as f64;
    let lg = m.log2();
    lg.powf(0.25) * (-(8.0 * lg).sqrt()).exp2() * m
}

/// How to obtain the set `B` for a given modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BMethod {
    /// [`behrend_int`] on `[0, (M+1)/2)`, embedded mod `M`.
    Behrend,
    /// [`greedy_apfree_int`] on `[0, (M+1)/2)`, embedded mod `M`.
    Greedy,
    /// [`max_apfree_mod_exact`], `M ≤ 40`.
    Exact,
}

impl BMethod {
    pub fn build(self, modulus: u64) -> Result<ApFreeSet> {
        match self {
            BMethod::Exact => max_apfree_mod_exact(modulus),
            BMethod::Behrend | BMethod::Greedy => {
                if modulus == 0 || modulus.is_multiple_of(2) {
                    return Err(Error::InvalidModulus(modulus));
                }
                let universe = modulus.div_ceil(2);
                let set = if self == BMethod::Behrend {
                    behrend_int(universe)
                } else {
                    greedy_apfree_int(universe)
                };
                embed_mod(&set, modulus)
            }
        }
    }
}
