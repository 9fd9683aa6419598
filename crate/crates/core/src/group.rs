//! Arithmetic shared by every other module: vectors in F₂ⁿ, residues in
//! `ℤ/Mℤ` for odd `M`, and exact binomial coefficients.
//!
//! Coordinates are numbered `1..=n` in formulas and stored at bit index
//! `s - 1`. The text form of a [`BitVec`] is a string of `'0'`/`'1'` whose
//! character at position `s - 1` holds coordinate `s`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

const WORD: usize = 64;

/// An element of F₂ⁿ, packed 64 coordinates per word.
///
/// Bits at index `>= n` in the last word are always zero, so derived
/// equality and hashing are exact.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    n: usize,
    words: Vec<u64>,
}

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

impl BitVec {
    pub fn zeros(n: usize) -> Self {
        BitVec {
            n,
            words: vec![0; words_for(n)],
        }
    }

    pub fn ones(n: usize) -> Self {
        let mut v = Self::zeros(n);
        for i in 0..n {
            v.set(i, true);
        }
        v
    }

    /// Builds a vector of dimension `n <= 64` from a mask whose bit `i`
    /// holds coordinate `i + 1`. Bits above `n` must be clear.
    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        if n > WORD {
            return Err(Error::LimitExceeded {
                what: "mask dimension",
                value: n as u64,
                limit: WORD as u64,
            });
        }
        if n < WORD && mask >> n != 0 {
            return Err(Error::OutOfRange {
                value: mask,
                bound: 1u64 << n,
            });
        }
        let mut v = Self::zeros(n);
        if n > 0 {
            v.words[0] = mask;
        }
        Ok(v)
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// The dimension `n`.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Coordinate at bit index `i` (coordinate `i + 1`).
    pub fn bit(&self, i: usize) -> bool {
        assert!(i < self.n, "bit index {i} out of range for n = {}", self.n);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.n, "bit index {i} out of range for n = {}", self.n);
        let m = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= m;
        } else {
            self.words[i / WORD] &= !m;
        }
    }

    /// The packed mask when `n <= 64`.
    pub fn to_mask(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    /// Bit indices of the nonzero coordinates, ascending.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&i| self.bit(i))
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn hamming_weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn check_dim(&self, other: &BitVec) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    /// Coordinatewise sum mod 2.
    pub fn xor_add(&self, other: &BitVec) -> Result<BitVec> {
        self.check_dim(other)?;
        Ok(BitVec {
            n: self.n,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(x, y)| x ^ y)
                .collect(),
        })
    }

    /// True iff no coordinate is 1 in both vectors. Exactly then does
    /// `u + v` agree over F₂ and over ℤ.
    pub fn disjoint_supports(&self, other: &BitVec) -> Result<bool> {
        self.check_dim(other)?;
        Ok(self.words.iter().zip(&other.words).all(|(x, y)| x & y == 0))
    }

    /// Appends zero coordinates up to dimension `n`.
    pub fn pad_to(&self, n: usize) -> Result<BitVec> {
        if n < self.n {
            return Err(Error::InvalidParams(format!(
                "cannot pad dimension {} down to {n}",
                self.n
            )));
        }
        let mut words = self.words.clone();
        words.resize(words_for(n), 0);
        Ok(BitVec { n, words })
    }
}

/// Free-function form of [`BitVec::xor_add`].
pub fn xor_add(u: &BitVec, v: &BitVec) -> Result<BitVec> {
    u.xor_add(v)
}

pub fn hamming_weight(u: &BitVec) -> usize {
    u.hamming_weight()
}

pub fn disjoint_supports(u: &BitVec, v: &BitVec) -> Result<bool> {
    u.disjoint_supports(v)
}

/// Orders by dimension, then lexicographically on the text form
/// (coordinate 1 first, `'0' < '1'`).
impl Ord for BitVec {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| {
            self.words
                .iter()
                .map(|w| w.reverse_bits())
                .cmp(other.words.iter().map(|w| w.reverse_bits()))
        })
    }
}

impl PartialOrd for BitVec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.n)
            .map(|i| if self.bit(i) { '1' } else { '0' })
            .collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

impl FromStr for BitVec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut v = BitVec::zeros(s.len());
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => v.set(i, true),
                other => {
                    return Err(Error::Format(format!(
                        "invalid bit character {other:?} in {s:?}"
                    )))
                }
            }
        }
        Ok(v)
    }
}

impl Serialize for BitVec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// An ordered triple `(a, b, c)` of vectors sharing one dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    a: BitVec,
    b: BitVec,
    c: BitVec,
}

impl Triple {
    pub fn new(a: BitVec, b: BitVec, c: BitVec) -> Result<Self> {
        a.check_dim(&b)?;
        a.check_dim(&c)?;
        Ok(Triple { a, b, c })
    }

    /// The triple `(a, b, a + b)`.
    pub fn from_pair(a: BitVec, b: BitVec) -> Result<Self> {
        let c = a.xor_add(&b)?;
        Ok(Triple { a, b, c })
    }

    pub fn a(&self) -> &BitVec {
        &self.a
    }

    pub fn b(&self) -> &BitVec {
        &self.b
    }

    pub fn c(&self) -> &BitVec {
        &self.c
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn pad_to(&self, n: usize) -> Result<Triple> {
        Ok(Triple {
            a: self.a.pad_to(n)?,
            b: self.b.pad_to(n)?,
            c: self.c.pad_to(n)?,
        })
    }
}

/// Serializes as `{"a": "<bits>", "b": "<bits>", "c": "<bits>"}`.
impl Serialize for Triple {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Triple", 3)?;
        st.serialize_field("a", &self.a)?;
        st.serialize_field("b", &self.b)?;
        st.serialize_field("c", &self.c)?;
        st.end()
    }
}

/// A candidate tri-colored sum-free set: triples of a common dimension `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleSet {
    n: usize,
    triples: Vec<Triple>,
}

impl TripleSet {
    pub fn new(n: usize, triples: Vec<Triple>) -> Result<Self> {
        if let Some(t) = triples.iter().find(|t| t.dim() != n) {
            return Err(Error::DimensionMismatch {
                left: n,
                right: t.dim(),
            });
        }
        Ok(TripleSet { n, triples })
    }

    pub fn empty(n: usize) -> Self {
        TripleSet {
            n,
            triples: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Triple> {
        self.triples.iter()
    }

    pub fn into_triples(self) -> Vec<Triple> {
        self.triples
    }

    /// Appends zero coordinates to every vector. Zero coordinates never
    /// affect any sum, so validity is preserved.
    pub fn pad_to(&self, n: usize) -> Result<TripleSet> {
        if n < self.n {
            return Err(Error::InvalidParams(format!(
                "cannot pad dimension {} down to {n}",
                self.n
            )));
        }
        let triples = self
            .triples
            .iter()
            .map(|t| t.pad_to(n))
            .collect::<Result<_>>()?;
        Ok(TripleSet { n, triples })
    }
}

impl<'a> IntoIterator for &'a TripleSet {
    type Item = &'a Triple;
    type IntoIter = std::slice::Iter<'a, Triple>;

    fn into_iter(self) -> Self::IntoIter {
        self.triples.iter()
    }
}

/// `ℤ/Mℤ` for odd `M`, with the inverse of 2 precomputed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModContext {
    modulus: u64,
    inv2: u64,
}

impl ModContext {
    pub fn new(modulus: u64) -> Result<Self> {
        if modulus == 0 || modulus.is_multiple_of(2) {
            return Err(Error::InvalidModulus(modulus));
        }
        Ok(ModContext {
            modulus,
            inv2: modulus.div_ceil(2) % modulus,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The residue `x` with `2x ≡ 1 (mod M)`.
    pub fn inv2(&self) -> u64 {
        self.inv2
    }

    pub fn reduce(&self, x: u64) -> u64 {
        x % self.modulus
    }

    pub fn add(&self, x: u64, y: u64) -> u64 {
        ((x as u128 + y as u128) % self.modulus as u128) as u64
    }

    pub fn neg(&self, x: u64) -> u64 {
        let x = x % self.modulus;
        if x == 0 {
            0
        } else {
            self.modulus - x
        }
    }

    pub fn mul(&self, x: u64, y: u64) -> u64 {
        ((x as u128 * y as u128) % self.modulus as u128) as u64
    }

    pub fn half(&self, x: u64) -> u64 {
        self.mul(x, self.inv2)
    }
}

pub fn make_mod_context(modulus: u64) -> Result<ModContext> {
    ModContext::new(modulus)
}

/// Exact binomial coefficient; `0` when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        // acc = C(n, i) here, and C(n, i) * (n - i) is divisible by i + 1.
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}
