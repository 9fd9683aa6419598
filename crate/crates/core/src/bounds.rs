//! Closed-form bounds on tri-colored sum-free sets.
//!
//! `L_{n,d}` is the span of monomials `x^α` over F_p with every `αᵢ < p`
//! and total degree at most `d`. The target set of any perfectly matched
//! sequence in F_pⁿ has at most `3 · dim L_{n,d}` elements for
//! `d = ⌊(p-1)n/3⌋`, which bounds tri-colored sum-free sets as well.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::group::binomial;

/// Number of exponent vectors `α ∈ {0..p-1}ⁿ` with `Σ αᵢ ≤ d`.
///
/// Computed as the prefix sum of the coefficients of `(1 + x + … + x^{p-1})ⁿ`
/// truncated at degree `d`. `d < 0` gives 0.
pub fn dim_l(n: u64, d: i64, p: u64) -> BigUint {
    assert!(p >= 2, "p must be at least 2");
    if d < 0 {
        return BigUint::ZERO;
    }
    let top = ((p - 1) * n).min(d as u64) as usize;
    // coeffs[k] = number of α over the first i coordinates with Σα = k
    let mut coeffs = vec![BigUint::ZERO; top + 1];
    coeffs[0] = BigUint::from(1u32);
    for _ in 0..n {
        // multiply by (1 + x + … + x^{p-1}) with a sliding window sum
        let mut next = vec![BigUint::ZERO; top + 1];
        let mut window = BigUint::ZERO;
        for k in 0..=top {
            window += &coeffs[k];
            if k >= p as usize {
                window -= &coeffs[k - p as usize];
            }
            next[k] = window.clone();
        }
        coeffs = next;
    }
    coeffs.into_iter().sum()
}

/// `⌊(p-1)n/3⌋`.
pub fn critical_degree(n: u64, p: u64) -> i64 {
    ((p - 1) * n / 3) as i64
}

/// `3 · dim L_{n,d}` with `d = ⌊(p-1)n/3⌋`.
pub fn ub_pms(n: u64, p: u64) -> BigUint {
    dim_l(n, critical_degree(n, p), p) * 3u32
}

/// `6 · C(n, ⌊n/3⌋)`, the weaker headline bound in F₂ⁿ.
pub fn ub_tcsfs_f2(n: u64) -> BigUint {
    binomial(n, n / 3) * 6u32
}

/// `Σ_{k ≤ ⌊n/3⌋} C(n, k)`, the value of `dim L_{n,⌊n/3⌋}` at `p = 2`.
pub fn dim_l_f2_closed_form(n: u64) -> BigUint {
    (0..=n / 3).map(|k| binomial(n, k)).sum()
}

/// `log₂` of a big integer without overflowing `f64`.
pub fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("finite below 2^1000").log2();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().expect("64-bit value").log2() + shift as f64
}

/// `C(n, ⌊n/3⌋) · 2^{-√(16n/3)}`, the size the randomized construction
/// exceeds in expectation for large `n`.
pub fn lb_formula(n: u64) -> f64 {
    let exponent = log2_big(&binomial(n, n / 3)) - (16.0 * n as f64 / 3.0).sqrt();
    exponent.exp2()
}

/// Every bound for one `(n, p)`; big integers are decimal strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: u64,
    pub p: u64,
    pub d: i64,
    #[serde(rename = "dim_L")]
    pub dim_l: String,
    pub ub_theorem: String,
    /// Only for `p = 2`.
    pub ub_abstract: Option<String>,
    /// Only for `p = 2`.
    pub lb_formula: Option<f64>,
}

impl BoundReport {
    pub fn new(n: u64, p: u64) -> Self {
        let d = critical_degree(n, p);
        let dim = dim_l(n, d, p);
        let ub_theorem = &dim * 3u32;
        let f2 = p == 2;
        BoundReport {
            n,
            p,
            d,
            dim_l: dim.to_string(),
            ub_theorem: ub_theorem.to_string(),
            ub_abstract: f2.then(|| ub_tcsfs_f2(n).to_string()),
            lb_formula: f2.then(|| lb_formula(n)),
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut q = 2;
    while q * q <= p {
        if p.is_multiple_of(q) {
            return false;
        }
        q += 1;
    }
    true
}
