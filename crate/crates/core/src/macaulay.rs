//! Binomial arithmetic, i-binomial expansions and the Macaulay / Kruskal-Katona
//! growth bounds.
//!
//! Every quantity is arbitrary precision. The expansion of a positive integer
//! `n` in base `i` is the unique representation
//!
//! ```text
//! n = C(n_i, i) + C(n_{i-1}, i-1) + ... + C(n_j, j),   n_i > n_{i-1} > ... > n_j >= j >= 1
//! ```
//!
//! obtained greedily. From it, `macaulay_bound` shifts every term up by one in
//! both arguments and `kk_bound` shifts only the bottom.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `C(n, k)`; zero when `k < 0` or `k > n`.
pub fn binom(n: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigUint::one();
    for j in 0..k {
        acc *= n - j;
        acc /= j + 1;
    }
    acc
}

/// `C(n, k)` for a big top.
pub fn binom_big(n: &BigUint, k: u64) -> BigUint {
    if let Some(small) = n.to_u64() {
        return binom(small, k as i64);
    }
    // n does not fit in u64, so k < n always holds here.
    let mut acc = BigUint::one();
    for j in 0..k {
        acc *= n - j;
        acc /= j + 1;
    }
    acc
}

fn factorial(k: u64) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, j| acc * j)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinomialTerm {
    #[serde(with = "crate::json::biguint")]
    pub top: BigUint,
    pub bottom: u32,
}

impl BinomialTerm {
    pub fn value(&self) -> BigUint {
        binom_big(&self.top, self.bottom as u64)
    }
}

/// The i-binomial expansion of a positive integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinomialExpansion {
    #[serde(with = "crate::json::biguint")]
    pub target: BigUint,
    pub index: u32,
    pub terms: Vec<BinomialTerm>,
}

impl BinomialExpansion {
    /// Sum of the terms; equals `target` for every expansion built by [`expand`].
    pub fn reconstruct(&self) -> BigUint {
        self.terms.iter().map(BinomialTerm::value).sum()
    }

    /// Checks the structural invariants of an expansion (strictly decreasing
    /// tops, bottoms stepping down by one and ending at >= 1, top >= bottom,
    /// and the sum matching the target).
    pub fn is_well_formed(&self) -> bool {
        if self.terms.is_empty() {
            return self.target.is_zero();
        }
        if self.terms[0].bottom != self.index {
            return false;
        }
        for w in self.terms.windows(2) {
            if w[1].top >= w[0].top || w[1].bottom + 1 != w[0].bottom {
                return false;
            }
        }
        let last = self.terms.last().unwrap();
        last.bottom >= 1
            && self.terms.iter().all(|t| t.top >= BigUint::from(t.bottom))
            && self.reconstruct() == self.target
    }
}

/// Largest `top` with `C(top, k) <= rem`; requires `rem >= 1`, `k >= 1`.
fn largest_top(rem: &BigUint, k: u32) -> BigUint {
    let k64 = k as u64;
    if k == 1 {
        return rem.clone();
    }
    // C(a, k) lies between (a-k+1)^k/k! and (a-(k-1)/2)^k/k!, so the root
    // of rem*k! is within k/2 of the answer.
    let root = (rem * factorial(k64)).nth_root(k);
    let mut top = root + BigUint::from((k64 - 1) / 2);
    let floor = BigUint::from(k64);
    if top < floor {
        top = floor.clone();
    }
    while binom_big(&top, k64) > *rem {
        top -= 1u32;
    }
    loop {
        let next = &top + 1u32;
        if binom_big(&next, k64) <= *rem {
            top = next;
        } else {
            break;
        }
    }
    top
}

fn expansion_terms(n: &BigUint, i: u32) -> Vec<BinomialTerm> {
    let mut terms = Vec::new();
    let mut rem = n.clone();
    let mut bottom = i;
    while !rem.is_zero() && bottom >= 1 {
        let top = largest_top(&rem, bottom);
        rem -= binom_big(&top, bottom as u64);
        terms.push(BinomialTerm { top, bottom });
        bottom -= 1;
    }
    debug_assert!(rem.is_zero());
    terms
}

/// The greedy i-binomial expansion of `n`.
pub fn expand(n: &BigUint, i: u32) -> Result<BinomialExpansion> {
    if n.is_zero() {
        return Err(Error::InvalidArgument("expand requires n >= 1".into()));
    }
    if i == 0 {
        return Err(Error::InvalidArgument("expand requires i >= 1".into()));
    }
    Ok(BinomialExpansion {
        target: n.clone(),
        index: i,
        terms: expansion_terms(n, i),
    })
}

/// `n^<i>`, the Macaulay bound on the next entry of an O-sequence. Zero for `n = 0`.
pub fn macaulay_bound(n: &BigUint, i: u32) -> BigUint {
    expansion_terms(n, i)
        .iter()
        .map(|t| binom_big(&(&t.top + 1u32), t.bottom as u64 + 1))
        .sum()
}

/// Kruskal-Katona bound: the most (i+1)-sets a complex with `n` i-sets can have.
pub fn kk_bound(n: &BigUint, i: u32) -> BigUint {
    expansion_terms(n, i)
        .iter()
        .map(|t| binom_big(&t.top, t.bottom as u64 + 1))
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ViolationKind {
    Empty,
    LeadingEntry,
    Negative,
    NonPositive,
    Growth {
        #[serde(with = "crate::json::bigint")]
        bound: BigInt,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// Position in the stored vector (index 0 holds h_0 or f_{-1}).
    pub index: usize,
    #[serde(flatten)]
    pub kind: ViolationKind,
}

/// Result of a sequence check: valid, or the first offending position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Validity {
    pub valid: bool,
    pub violation: Option<Violation>,
}

impl Validity {
    fn ok() -> Self {
        Validity {
            valid: true,
            violation: None,
        }
    }

    fn fail(index: usize, kind: ViolationKind) -> Self {
        Validity {
            valid: false,
            violation: Some(Violation { index, kind }),
        }
    }

    pub fn first_violation(&self) -> Option<usize> {
        self.violation.as_ref().map(|v| v.index)
    }
}

fn to_biguint(x: &BigInt) -> Option<BigUint> {
    match x.sign() {
        Sign::Minus => None,
        _ => Some(x.magnitude().clone()),
    }
}

/// Macaulay's growth condition: `h_0 = 1`, every entry nonnegative and
/// `h_{i+1} <= h_i^<i>` for `i >= 1`.
pub fn is_o_sequence(h: &[BigInt]) -> Validity {
    if h.is_empty() {
        return Validity::fail(0, ViolationKind::Empty);
    }
    if !h[0].is_one() {
        return Validity::fail(0, ViolationKind::LeadingEntry);
    }
    for j in 1..h.len() {
        if h[j].is_negative() {
            return Validity::fail(j, ViolationKind::Negative);
        }
        if j >= 2 {
            let prev = to_biguint(&h[j - 1]).expect("checked nonnegative");
            let bound = BigInt::from(macaulay_bound(&prev, (j - 1) as u32));
            if h[j] > bound {
                return Validity::fail(j, ViolationKind::Growth { bound });
            }
        }
    }
    Validity::ok()
}

/// Kruskal-Katona check for `(1, f_0, ..., f_e)`: positive entries and
/// `f_i <= kk_bound(f_{i-1}, i)`.
pub fn is_kk_fvector(f: &[BigInt]) -> Validity {
    if f.is_empty() {
        return Validity::fail(0, ViolationKind::Empty);
    }
    if !f[0].is_one() {
        return Validity::fail(0, ViolationKind::LeadingEntry);
    }
    for j in 1..f.len() {
        if !f[j].is_positive() {
            return Validity::fail(j, ViolationKind::NonPositive);
        }
        if j >= 2 {
            let prev = to_biguint(&f[j - 1]).expect("checked positive");
            let bound = BigInt::from(kk_bound(&prev, (j - 1) as u32));
            if f[j] > bound {
                return Validity::fail(j, ViolationKind::Growth { bound });
            }
        }
    }
    Validity::ok()
}
