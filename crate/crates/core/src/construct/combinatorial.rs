//! Pure f-vectors with peaks at chosen positions, built as disjoint unions
//! of complete skeleta.
//!
//! For `s >= k_N` let `K(s)` be the complex on `s` vertices whose facets are
//! all `k_N`-subsets. The witness is one copy of `K(r)` plus `a_i` copies of
//! `K(2 k_i)`, so `f_m = sum a_i C(2k_i, m+1) + C(r, m+1)`.

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::feasibility::build_feasibility_system;
use crate::error::{Error, Result};
use crate::macaulay::binom;
use crate::peaks::peak_profile;
use crate::pure_decide::{disjoint_union, FacetComplex};
use crate::transform::FVector;

pub const DEFAULT_SOLVER_TRIES: u64 = 100_000;

pub fn default_r_limit(k: &[u64]) -> u64 {
    10 * k.last().copied().unwrap_or(0)
}

/// `copies` disjoint copies of the complex of all `facet_size`-subsets of
/// `vertices` points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexComponent {
    pub vertices: u64,
    pub facet_size: u64,
    #[serde(with = "crate::json::biguint")]
    pub copies: BigUint,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombinatorialRejections {
    /// Values of r with no positive integer point.
    pub infeasible: u64,
    /// Values of r whose solution produced peaks beyond the requested ones.
    pub stray_peaks: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombinatorialPeakCertificate {
    pub k: Vec<u64>,
    #[serde(with = "crate::json::biguint_vec")]
    pub a: Vec<BigUint>,
    pub r: u64,
    pub dimension: u64,
    pub f: FVector,
    pub peak_indices: Vec<u64>,
    pub components: Vec<ComplexComponent>,
    pub rejected: CombinatorialRejections,
}

/// `(1, f_0, ..., f_e)` with `e = k_N - 1`.
pub fn combinatorial_f_vector(k: &[u64], a: &[BigUint], r: u64) -> Result<FVector> {
    let Some(&top) = k.last() else {
        return Err(Error::InvalidArgument("k is empty".into()));
    };
    if a.len() + 1 != k.len() {
        return Err(Error::InvalidArgument(format!(
            "expected {} multiplicities, got {}",
            k.len() - 1,
            a.len()
        )));
    }
    let mut entries = vec![BigInt::from(1)];
    for m in 0..top {
        let idx = m as i64 + 1;
        let mut fm = binom(r, idx);
        for (&ki, ai) in k.iter().zip(a) {
            fm += ai * binom(2 * ki, idx);
        }
        entries.push(BigInt::from(fm));
    }
    FVector::new(entries)
}

pub fn components(k: &[u64], a: &[BigUint], r: u64) -> Vec<ComplexComponent> {
    let facet_size = *k.last().expect("nonempty k");
    std::iter::once(ComplexComponent {
        vertices: r,
        facet_size,
        copies: BigUint::from(1u32),
    })
    .chain(k.iter().zip(a).map(|(&ki, ai)| ComplexComponent {
        vertices: 2 * ki,
        facet_size,
        copies: ai.clone(),
    }))
    .collect()
}

/// Whether the peaks of `f_0..f_e` are exactly the singletons `k_i - 1`.
pub fn has_exact_peaks(f: &FVector, k: &[u64]) -> bool {
    let profile = peak_profile(f.tail());
    let want: Vec<usize> = k.iter().map(|&x| x as usize - 1).collect();
    profile.all_singletons() && profile.positions() == want
}

/// Scans `r = k_N, k_N + 1, ..., r_limit`, solving the peak system at each
/// step, and returns the first witness with exactly the requested peaks.
pub fn construct_combinatorial(k: &[u64], r_limit: Option<u64>) -> Result<CombinatorialPeakCertificate> {
    construct_combinatorial_with(k, r_limit, DEFAULT_SOLVER_TRIES)
}

pub fn construct_combinatorial_with(k: &[u64], r_limit: Option<u64>, tries: u64) -> Result<CombinatorialPeakCertificate> {
    super::feasibility::validate_spacing(k)?;
    let top = *k.last().unwrap();
    let limit = r_limit.unwrap_or_else(|| default_r_limit(k));
    let mut rejected = CombinatorialRejections::default();
    for r in top..=limit {
        let system = build_feasibility_system(k, r)?;
        let Some(a) = system.solve(tries) else {
            rejected.infeasible += 1;
            continue;
        };
        let f = combinatorial_f_vector(k, &a, r)?;
        if !has_exact_peaks(&f, k) {
            rejected.stray_peaks += 1;
            continue;
        }
        return Ok(CombinatorialPeakCertificate {
            k: k.to_vec(),
            components: components(k, &a, r),
            a,
            r,
            dimension: top - 1,
            f,
            peak_indices: k.iter().map(|&x| x - 1).collect(),
            rejected,
        });
    }
    Err(Error::NoWitnessInRange(format!(
        "no r in [{top}, {limit}] admits peaks at {:?} ({} infeasible, {} with stray peaks)",
        k.iter().map(|&x| x - 1).collect::<Vec<_>>(),
        rejected.infeasible,
        rejected.stray_peaks
    )))
}

/// Total facet count of the witness complex.
pub fn facet_count(cert: &CombinatorialPeakCertificate) -> BigUint {
    cert.components
        .iter()
        .map(|c| &c.copies * binom(c.vertices, c.facet_size as i64))
        .sum()
}

fn all_subsets(n: u32, size: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur: Vec<u32> = (0..size as u32).collect();
    if size as u32 > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut p = size;
        loop {
            if p == 0 {
                return out;
            }
            p -= 1;
            if cur[p] < n - (size - p) as u32 {
                cur[p] += 1;
                for q in p + 1..size {
                    cur[q] = cur[q - 1] + 1;
                }
                break;
            }
        }
    }
}

/// The explicit facet list of the witness, or `None` when it has more than
/// `facet_budget` facets.
pub fn materialize(cert: &CombinatorialPeakCertificate, facet_budget: u64) -> Result<Option<FacetComplex>> {
    if facet_count(cert) > BigUint::from(facet_budget) {
        return Ok(None);
    }
    let mut parts = Vec::new();
    for c in &cert.components {
        let copies = c.copies.to_u64().expect("bounded by the facet budget");
        let facets = all_subsets(c.vertices as u32, c.facet_size as usize);
        let part = FacetComplex::new(c.vertices, facets)?;
        parts.extend(std::iter::repeat_n(part, copies as usize));
    }
    disjoint_union(&parts).map(Some)
}
