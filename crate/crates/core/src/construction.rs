//! Randomized construction of large tri-colored sum-free sets in F₂ⁿ.
//!
//! For `n′ = 3k`, let `X` be the triples `(a, b, c)` with weights
//! `(k, k, 2k)` and `c = a + b` over the integers (disjoint supports). For
//! random weights `w = (w₀, w₁, …, w_{n′}) ∈ (ℤ/Mℤ)^{n′+1}` and odd `M`:
//!
//! ```text
//! h₀(a) = -Σ a_s w_s
//! h₁(b) = (w₀ + Σ b_s w_s) / 2
//! h₂(c) =  w₀ + Σ c_s w_s
//! ```
//!
//! For every triple of `X`, `h₁ - h₀ = h₂ - h₁`, so the three values are
//! equal or form a progression. With `B` AP-free, all three land in `B`
//! only when they coincide. `Y(w)` collects those triples and `Z(w)` keeps
//! the ones whose `a`, `b` and `c` each occur once in `Y(w)`; `Z(w)` is
//! tri-colored sum-free.
//!
//! The sign on `h₀` is what makes the progression identity hold; with
//! `+Σ a_s w_s` the two differences disagree by `2 Σ a_s w_s`.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::apfree::{ApFreeSet, BMethod};
use crate::error::{Error, Result};
use crate::group::{binomial, BitVec, ModContext, Triple, TripleSet};
use crate::verify::{verify_tcsfs, Verdict};

/// Largest working dimension; vectors are handled as 64-bit masks.
pub const MAX_WORK_DIM: usize = 63;

fn check_work_dim(n_work: usize) -> Result<()> {
    if !n_work.is_multiple_of(3) {
        return Err(Error::BadDimension(n_work));
    }
    if n_work > MAX_WORK_DIM {
        return Err(Error::LimitExceeded {
            what: "working dimension",
            value: n_work as u64,
            limit: MAX_WORK_DIM as u64,
        });
    }
    Ok(())
}

/// `3 ⌊n/3⌋`.
pub fn working_dim(n: usize) -> usize {
    3 * (n / 3)
}

fn central_binomial_u64(n_work: usize) -> u64 {
    let k = (n_work / 3) as u64;
    binomial(2 * k, k).to_u64().expect("fits for n' <= 63")
}

/// `4 · C(2n′/3, n′/3) + 1`, the smallest admissible odd modulus.
pub fn choose_modulus(n_work: usize) -> Result<u64> {
    if n_work < 3 {
        return Err(Error::BadDimension(n_work));
    }
    check_work_dim(n_work)?;
    Ok(4 * central_binomial_u64(n_work) + 1)
}

/// [`choose_modulus`], or `1` when `n′ = 0` (then `X` is the single zero
/// triple and every hash vanishes).
pub fn default_modulus(n_work: usize) -> Result<u64> {
    if n_work == 0 {
        Ok(1)
    } else {
        choose_modulus(n_work)
    }
}

/// All `n`-bit masks of the given weight, in lexicographic order of their
/// text form.
pub(crate) fn weight_class(n: usize, weight: usize) -> Vec<u64> {
    assert!(n <= 64 && weight <= n);
    let mut out = Vec::new();
    if weight == 0 {
        out.push(0);
    } else {
        let limit: u128 = 1u128 << n;
        let mut v: u64 = if weight == 64 {
            u64::MAX
        } else {
            (1u64 << weight) - 1
        };
        while (v as u128) < limit {
            out.push(v);
            // Gosper's hack: next mask with the same popcount
            let c = v & v.wrapping_neg();
            let r = v.wrapping_add(c);
            if r == 0 {
                break;
            }
            v = (((r ^ v) >> 2) / c) | r;
        }
    }
    out.sort_unstable_by_key(|m| m.reverse_bits());
    out
}

/// Every triple of `X` at working dimension `n′`, ordered by `(a, b)`.
pub fn enumerate_x(n_work: usize) -> Result<Vec<Triple>> {
    check_work_dim(n_work)?;
    let k = n_work / 3;
    let vecs = weight_class(n_work, k);
    let mut out = Vec::new();
    for &a in &vecs {
        for &b in vecs.iter().filter(|&&b| a & b == 0) {
            out.push(Triple::new(
                BitVec::from_mask(n_work, a)?,
                BitVec::from_mask(n_work, b)?,
                BitVec::from_mask(n_work, a | b)?,
            )?);
        }
    }
    Ok(out)
}

/// `|X| = C(n′, n′/3) · C(2n′/3, n′/3)`.
pub fn x_size(n_work: usize) -> BigUint {
    let k = (n_work / 3) as u64;
    binomial(n_work as u64, k) * binomial(2 * k, k)
}

/// Uniform residue in `[0, M)` by rejection: values below `2⁶⁴ mod M` are
/// redrawn, leaving a range whose size is a multiple of `M`.
fn uniform_residue(rng: &mut impl RngCore, modulus: u64) -> u64 {
    let reject_below = modulus.wrapping_neg() % modulus;
    loop {
        let x = rng.next_u64();
        if x >= reject_below {
            return x % modulus;
        }
    }
}

/// Weights `(w₀, w₁, …, w_{n′})`; `w[s - 1]` multiplies coordinate `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HashWeights {
    ctx: ModContext,
    w0: u64,
    w: Vec<u64>,
}

impl HashWeights {
    pub fn new(ctx: ModContext, w0: u64, w: Vec<u64>) -> Result<Self> {
        let m = ctx.modulus();
        if let Some(&value) = std::iter::once(&w0).chain(&w).find(|&&x| x >= m) {
            return Err(Error::OutOfRange { value, bound: m });
        }
        Ok(HashWeights { ctx, w0, w })
    }

    /// Draws `w₀` and then `w₁ … w_{n′}`, each exactly uniform.
    pub fn sample(ctx: ModContext, n_work: usize, rng: &mut impl RngCore) -> Self {
        let m = ctx.modulus();
        let w0 = uniform_residue(rng, m);
        let w = (0..n_work).map(|_| uniform_residue(rng, m)).collect();
        HashWeights { ctx, w0, w }
    }

    pub fn ctx(&self) -> ModContext {
        self.ctx
    }

    pub fn w0(&self) -> u64 {
        self.w0
    }

    pub fn weights(&self) -> &[u64] {
        &self.w
    }

    pub fn dim(&self) -> usize {
        self.w.len()
    }

    fn check(&self, v: &BitVec) -> Result<()> {
        if v.len() != self.w.len() {
            return Err(Error::DimensionMismatch {
                left: self.w.len(),
                right: v.len(),
            });
        }
        Ok(())
    }

    fn dot(&self, v: &BitVec) -> u64 {
        v.support().fold(0, |acc, s| self.ctx.add(acc, self.w[s]))
    }

    fn dot_mask(&self, mask: u64) -> u64 {
        let mut acc = 0;
        let mut rest = mask;
        while rest != 0 {
            let s = rest.trailing_zeros() as usize;
            acc = self.ctx.add(acc, self.w[s]);
            rest &= rest - 1;
        }
        acc
    }

    fn h0_mask(&self, a: u64) -> u64 {
        self.ctx.neg(self.dot_mask(a))
    }

    fn h1_mask(&self, b: u64) -> u64 {
        self.ctx.half(self.ctx.add(self.w0, self.dot_mask(b)))
    }

    fn h2_mask(&self, c: u64) -> u64 {
        self.ctx.add(self.w0, self.dot_mask(c))
    }

    /// `h₀(a) = -Σ a_s w_s mod M`.
    pub fn h0(&self, a: &BitVec) -> Result<u64> {
        self.check(a)?;
        Ok(self.ctx.neg(self.dot(a)))
    }

    /// `h₁(b) = (w₀ + Σ b_s w_s) / 2 mod M`.
    pub fn h1(&self, b: &BitVec) -> Result<u64> {
        self.check(b)?;
        Ok(self.ctx.half(self.ctx.add(self.w0, self.dot(b))))
    }

    /// `h₂(c) = w₀ + Σ c_s w_s mod M`.
    pub fn h2(&self, c: &BitVec) -> Result<u64> {
        self.check(c)?;
        Ok(self.ctx.add(self.w0, self.dot(c)))
    }
}

/// Precomputed weight class for one working dimension; the per-trial work
/// is hashing each weight-`k` vector twice and pairing within buckets.
#[derive(Clone, Debug)]
struct Pipeline {
    n_work: usize,
    vecs: Vec<u64>,
}

/// One trial in index form: `(i, j)` stands for `(vecs[i], vecs[j])`.
#[derive(Clone, Debug, Default)]
struct Outcome {
    y: usize,
    y0: usize,
    y1: usize,
    y2: usize,
    z: Vec<(u32, u32)>,
}

impl Outcome {
    fn stats(&self, t: u64) -> TrialStats {
        TrialStats {
            t,
            y: self.y,
            y0: self.y0,
            y1: self.y1,
            y2: self.y2,
            z: self.z.len(),
        }
    }
}

impl Pipeline {
    fn new(n_work: usize) -> Result<Self> {
        check_work_dim(n_work)?;
        Ok(Pipeline {
            n_work,
            vecs: weight_class(n_work, n_work / 3),
        })
    }

    /// `Y(w)` as sorted index pairs.
    fn build_y(&self, hw: &HashWeights, b: &ApFreeSet) -> Vec<(u32, u32)> {
        let slot: HashMap<u64, usize> = b
            .elements()
            .iter()
            .enumerate()
            .map(|(i, &beta)| (beta, i))
            .collect();
        let mut bucket_a: Vec<Vec<u32>> = vec![Vec::new(); b.len()];
        let mut bucket_b: Vec<Vec<u32>> = vec![Vec::new(); b.len()];
        for (i, &v) in self.vecs.iter().enumerate() {
            if let Some(&s) = slot.get(&hw.h0_mask(v)) {
                bucket_a[s].push(i as u32);
            }
            if let Some(&s) = slot.get(&hw.h1_mask(v)) {
                bucket_b[s].push(i as u32);
            }
        }
        let mut y = Vec::new();
        for (ba, bb) in bucket_a.iter().zip(&bucket_b) {
            for &i in ba {
                let a = self.vecs[i as usize];
                for &j in bb {
                    let bv = self.vecs[j as usize];
                    if a & bv == 0 {
                        // h0 = h1 = β forces h2 = β
                        debug_assert_eq!(hw.h2_mask(a | bv), hw.h0_mask(a));
                        y.push((i, j));
                    }
                }
            }
        }
        y.sort_unstable();
        y
    }

    fn prune(&self, y: &[(u32, u32)]) -> Outcome {
        let mut count_a = vec![0u32; self.vecs.len()];
        let mut count_b = vec![0u32; self.vecs.len()];
        let mut count_c: HashMap<u64, u32> = HashMap::new();
        let c_of = |&(i, j): &(u32, u32)| self.vecs[i as usize] | self.vecs[j as usize];
        for p in y {
            count_a[p.0 as usize] += 1;
            count_b[p.1 as usize] += 1;
            *count_c.entry(c_of(p)).or_default() += 1;
        }
        let mut out = Outcome {
            y: y.len(),
            ..Outcome::default()
        };
        for p in y {
            let in0 = count_a[p.0 as usize] > 1;
            let in1 = count_b[p.1 as usize] > 1;
            let in2 = count_c[&c_of(p)] > 1;
            out.y0 += in0 as usize;
            out.y1 += in1 as usize;
            out.y2 += in2 as usize;
            if !(in0 || in1 || in2) {
                out.z.push(*p);
            }
        }
        out
    }

    fn trial(&self, hw: &HashWeights, b: &ApFreeSet) -> Outcome {
        self.prune(&self.build_y(hw, b))
    }

    fn to_triples(&self, pairs: &[(u32, u32)]) -> Result<Vec<Triple>> {
        pairs
            .iter()
            .map(|&(i, j)| {
                let (a, b) = (self.vecs[i as usize], self.vecs[j as usize]);
                Triple::new(
                    BitVec::from_mask(self.n_work, a)?,
                    BitVec::from_mask(self.n_work, b)?,
                    BitVec::from_mask(self.n_work, a | b)?,
                )
            })
            .collect()
    }
}

/// `Y(w) = {(a, b, c) ∈ X : h₀(a), h₁(b), h₂(c) ∈ B}`, ordered by `(a, b)`.
pub fn build_y(hw: &HashWeights, b: &ApFreeSet, n_work: usize) -> Result<Vec<Triple>> {
    if hw.dim() != n_work {
        return Err(Error::DimensionMismatch {
            left: n_work,
            right: hw.dim(),
        });
    }
    if b.modulus() != hw.ctx().modulus() {
        return Err(Error::InvalidParams(format!(
            "B has modulus {}, weights have modulus {}",
            b.modulus(),
            hw.ctx().modulus()
        )));
    }
    let pipeline = Pipeline::new(n_work)?;
    pipeline.to_triples(&pipeline.build_y(hw, b))
}

/// `Z = Y \ (Y₀ ∪ Y₁ ∪ Y₂)` together with `|Y₀|, |Y₁|, |Y₂|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pruned {
    pub z: Vec<Triple>,
    pub y0: usize,
    pub y1: usize,
    pub y2: usize,
}

/// Drops every triple whose `a`, `b` or `c` occurs in another triple of
/// `y`. Within `X`, two triples sharing `a` and `b` also share `c`, so this
/// is exactly removing `Y₀ ∪ Y₁ ∪ Y₂`.
pub fn prune_to_z(y: &[Triple]) -> Pruned {
    fn counts<'a>(it: impl Iterator<Item = &'a BitVec>) -> HashMap<&'a BitVec, usize> {
        let mut m = HashMap::new();
        for v in it {
            *m.entry(v).or_insert(0) += 1;
        }
        m
    }
    let ca = counts(y.iter().map(Triple::a));
    let cb = counts(y.iter().map(Triple::b));
    let cc = counts(y.iter().map(Triple::c));
    let mut out = Pruned {
        z: Vec::new(),
        y0: 0,
        y1: 0,
        y2: 0,
    };
    for t in y {
        let (i0, i1, i2) = (ca[t.a()] > 1, cb[t.b()] > 1, cc[t.c()] > 1);
        out.y0 += i0 as usize;
        out.y1 += i1 as usize;
        out.y2 += i2 as usize;
        if !(i0 || i1 || i2) {
            out.z.push(t.clone());
        }
    }
    out
}

/// Appends zero coordinates to reach dimension `n`.
pub fn pad_to_n(z: &TripleSet, n: usize) -> Result<TripleSet> {
    z.pad_to(n)
}

/// Validated inputs for [`run_trials`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionParams {
    pub n: usize,
    pub n_work: usize,
    #[serde(rename = "M")]
    pub modulus: u64,
    #[serde(rename = "B")]
    pub b: ApFreeSet,
    pub seed: u64,
    pub trials: u64,
}

impl ConstructionParams {
    pub fn new(n: usize, modulus: u64, b: ApFreeSet, seed: u64, trials: u64) -> Result<Self> {
        let n_work = working_dim(n);
        check_work_dim(n_work)?;
        ModContext::new(modulus)?;
        if n_work >= 3 {
            let floor = 4 * central_binomial_u64(n_work);
            if modulus <= floor {
                return Err(Error::InvalidParams(format!(
                    "M = {modulus} must exceed 4·C({}, {}) = {floor}",
                    2 * n_work / 3,
                    n_work / 3
                )));
            }
        }
        if b.modulus() != modulus {
            return Err(Error::InvalidParams(format!(
                "B has modulus {}, expected {modulus}",
                b.modulus()
            )));
        }
        if trials == 0 {
            return Err(Error::InvalidParams("trials must be positive".into()));
        }
        Ok(ConstructionParams {
            n,
            n_work,
            modulus,
            b,
            seed,
            trials,
        })
    }

    /// Builds `B` with `method`; `modulus` defaults to [`default_modulus`].
    pub fn with_method(
        n: usize,
        modulus: Option<u64>,
        method: BMethod,
        seed: u64,
        trials: u64,
    ) -> Result<Self> {
        let modulus = match modulus {
            Some(m) => m,
            None => default_modulus(working_dim(n))?,
        };
        let b = method.build(modulus)?;
        Self::new(n, modulus, b, seed, trials)
    }

    pub fn ctx(&self) -> ModContext {
        ModContext::new(self.modulus).expect("validated")
    }
}

/// Sizes observed in one trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialStats {
    pub t: u64,
    #[serde(rename = "Y")]
    pub y: usize,
    #[serde(rename = "Y0")]
    pub y0: usize,
    #[serde(rename = "Y1")]
    pub y1: usize,
    #[serde(rename = "Y2")]
    pub y2: usize,
    #[serde(rename = "Z")]
    pub z: usize,
}

#[derive(Clone, Debug)]
pub struct ConstructionResult {
    pub params: ConstructionParams,
    pub trials: Vec<TrialStats>,
    /// Trial that produced `best` (first among equals).
    pub best_trial: u64,
    /// The largest `Z(w)`, padded to dimension `n`.
    pub best: TripleSet,
    pub predicted_ey: BigRational,
}

impl ConstructionResult {
    pub fn b_size(&self) -> usize {
        self.params.b.len()
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    /// Worker threads; `None` uses rayon's global pool.
    pub threads: Option<usize>,
    /// Verify every trial's `Z(w)`, not only the returned one.
    pub verify_each: bool,
}

/// The generator for trial `t`: ChaCha8 keyed by `seed`, stream `t`.
pub fn trial_rng(seed: u64, t: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(t);
    rng
}

/// Replays trial `t` of `params` alone, returning its sizes and `Z(w)` at
/// the working dimension.
pub fn single_trial(params: &ConstructionParams, t: u64) -> Result<(TrialStats, TripleSet)> {
    let pipeline = Pipeline::new(params.n_work)?;
    let hw = HashWeights::sample(params.ctx(), params.n_work, &mut trial_rng(params.seed, t));
    let out = pipeline.trial(&hw, &params.b);
    let stats = out.stats(t);
    Ok((
        stats,
        TripleSet::new(params.n_work, pipeline.to_triples(&out.z)?)?,
    ))
}

/// Runs trials `1..=trials`, each with its own generator, and returns the
/// per-trial sizes and the largest `Z(w)`. The result does not depend on
/// the thread count.
/// Stats of one trial and its surviving `(a, b)` index pairs.
type TrialOutput = (TrialStats, Vec<(u32, u32)>);

pub fn run_trials(params: &ConstructionParams, opts: RunOptions) -> Result<ConstructionResult> {
    let pipeline = Pipeline::new(params.n_work)?;
    let ctx = params.ctx();
    let run_one = |t: u64| -> Result<(TrialStats, Vec<(u32, u32)>)> {
        let mut rng = trial_rng(params.seed, t);
        let hw = HashWeights::sample(ctx, params.n_work, &mut rng);
        let out = pipeline.trial(&hw, &params.b);
        if opts.verify_each {
            let z = pipeline.to_triples(&out.z)?;
            if let Verdict::Invalid(v) = verify_tcsfs(&z)? {
                return Err(Error::VerificationFailed {
                    trial: t,
                    detail: v.to_string(),
                });
            }
        }
        Ok((out.stats(t), out.z))
    };
    let collect = || -> Result<Vec<TrialOutput>> {
        (1..=params.trials).into_par_iter().map(run_one).collect()
    };
    let results = match opts.threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .map_err(|e| Error::InvalidParams(e.to_string()))?
            .install(collect)?,
        None => collect()?,
    };

    let mut best_idx = 0;
    for (idx, (stats, _)) in results.iter().enumerate() {
        if stats.z > results[best_idx].0.z {
            best_idx = idx;
        }
    }
    let best_trial = results[best_idx].0.t;
    let best_work = TripleSet::new(params.n_work, pipeline.to_triples(&results[best_idx].1)?)?;
    let best = pad_to_n(&best_work, params.n)?;
    if let Verdict::Invalid(v) = verify_tcsfs(best.triples())? {
        return Err(Error::VerificationFailed {
            trial: best_trial,
            detail: v.to_string(),
        });
    }
    Ok(ConstructionResult {
        params: params.clone(),
        trials: results.into_iter().map(|(s, _)| s).collect(),
        best_trial,
        best,
        predicted_ey: expected_y(params.n_work, params.modulus, params.b.len())?,
    })
}

/// `E|Y| = |X| · |B| / M²`, exactly.
pub fn expected_y(n_work: usize, modulus: u64, b_size: usize) -> Result<BigRational> {
    if !n_work.is_multiple_of(3) {
        return Err(Error::BadDimension(n_work));
    }
    let num = BigInt::from(x_size(n_work)) * BigInt::from(b_size);
    let den = BigInt::from(modulus) * BigInt::from(modulus);
    Ok(BigRational::new(num, den))
}

/// `(C(2n′/3, n′/3) - 1) / M`, the factor bounding `E|Yᵢ| / E|Y|` for each
/// of `Y₀, Y₁, Y₂`.
pub fn collision_factor(n_work: usize, modulus: u64) -> Result<BigRational> {
    if !n_work.is_multiple_of(3) {
        return Err(Error::BadDimension(n_work));
    }
    let k = (n_work / 3) as u64;
    let partners = BigInt::from(binomial(2 * k, k)) - 1;
    Ok(BigRational::new(partners, BigInt::from(modulus)))
}

/// `E|Y| · (C(2n′/3, n′/3) - 1) / M`, an upper bound on `E|Y₀|`.
pub fn expected_y0_bound(
    n_work: usize,
    modulus: u64,
    expected_y: &BigRational,
) -> Result<BigRational> {
    Ok(expected_y * collision_factor(n_work, modulus)?)
}

/// `p/q` in lowest terms, the form used in the stats file.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_zero() {
        return "0/1".into();
    }
    format!("{}/{}", r.numer(), r.denom())
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Sample mean, standard deviation and standard error of one column.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: f64,
    pub sd: f64,
    pub se: f64,
}

impl Moments {
    pub fn of(values: impl Iterator<Item = f64> + Clone) -> Self {
        let n = values.clone().count() as f64;
        if n == 0.0 {
            return Moments {
                mean: f64::NAN,
                sd: f64::NAN,
                se: f64::NAN,
            };
        }
        let mean = values.clone().sum::<f64>() / n;
        let var = if n > 1.0 {
            values.map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        let sd = var.sqrt();
        Moments {
            mean,
            sd,
            se: sd / n.sqrt(),
        }
    }
}

/// Column moments over a batch of trials.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub trials: usize,
    #[serde(rename = "Y")]
    pub y: Moments,
    #[serde(rename = "Y0")]
    pub y0: Moments,
    #[serde(rename = "Y1")]
    pub y1: Moments,
    #[serde(rename = "Y2")]
    pub y2: Moments,
    #[serde(rename = "Z")]
    pub z: Moments,
}

impl TrialSummary {
    pub fn from_stats(stats: &[TrialStats]) -> Self {
        let col = |f: fn(&TrialStats) -> usize| Moments::of(stats.iter().map(move |s| f(s) as f64));
        TrialSummary {
            trials: stats.len(),
            y: col(|s| s.y),
            y0: col(|s| s.y0),
            y1: col(|s| s.y1),
            y2: col(|s| s.y2),
            z: col(|s| s.z),
        }
    }
}
