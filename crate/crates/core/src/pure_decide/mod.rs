//! Deciding whether an f-vector is pure by exhaustive facet search.
//!
//! Verdicts are three-valued: a search that runs out of its node budget
//! reports [`PurityStatus::Unknown`] instead of guessing.

mod ip;
mod search;

use std::collections::HashSet;
use std::hash::Hash;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transform::FVector;

pub use ip::{b0, cm_upper, ip_experiment, parity_obstruction, FPrimeSource, IpReport, SearchSummary};
pub use search::{decide_pure, decide_pure_dim2, decide_pure_general};

/// A pure complex given by its facets, all of the same cardinality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetComplex {
    pub vertex_count: u64,
    pub facets: Vec<Vec<u32>>,
}

impl FacetComplex {
    /// Sorts every facet and the facet list, then checks equal cardinality,
    /// distinctness, the vertex range and that every vertex is used.
    pub fn new(vertex_count: u64, facets: Vec<Vec<u32>>) -> Result<Self> {
        let mut facets: Vec<Vec<u32>> = facets
            .into_iter()
            .map(|mut f| {
                f.sort_unstable();
                f
            })
            .collect();
        facets.sort();
        let Some(first) = facets.first() else {
            return Err(Error::InvalidArgument("a complex needs at least one facet".into()));
        };
        let size = first.len();
        if size == 0 {
            return Err(Error::InvalidArgument("facets must be nonempty".into()));
        }
        let mut used = vec![false; vertex_count as usize];
        for f in &facets {
            if f.len() != size {
                return Err(Error::InvalidArgument(format!(
                    "facet {f:?} has {} vertices, expected {size}",
                    f.len()
                )));
            }
            if f.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidArgument(format!("facet {f:?} repeats a vertex")));
            }
            for &v in f {
                if v as u64 >= vertex_count {
                    return Err(Error::InvalidArgument(format!("vertex {v} out of range 0..{vertex_count}")));
                }
                used[v as usize] = true;
            }
        }
        if facets.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument("duplicate facet".into()));
        }
        if let Some(v) = used.iter().position(|u| !u) {
            return Err(Error::InvalidArgument(format!("vertex {v} lies in no facet")));
        }
        Ok(FacetComplex { vertex_count, facets })
    }

    pub fn facet_size(&self) -> usize {
        self.facets[0].len()
    }
}

fn count_faces<K, F>(facets: &[Vec<u32>], size: usize, key: F) -> Vec<u64>
where
    K: Hash + Eq,
    F: Fn(&[u32]) -> K,
{
    let mut levels: Vec<HashSet<K>> = (0..size).map(|_| HashSet::new()).collect();
    let mut buf = Vec::with_capacity(size);
    for facet in facets {
        for mask in 1u64..1 << size {
            buf.clear();
            buf.extend((0..size).filter(|&j| mask >> j & 1 == 1).map(|j| facet[j]));
            levels[buf.len() - 1].insert(key(&buf));
        }
    }
    levels.iter().map(|s| s.len() as u64).collect()
}

/// The f-vector of the downward closure of the facets.
pub fn complex_f_vector(c: &FacetComplex) -> FVector {
    let size = c.facet_size();
    assert!(size < 64, "facet size {size} too large to enumerate");
    let counts = if size <= 8 && c.vertex_count <= u16::MAX as u64 {
        count_faces(&c.facets, size, |s| {
            s.iter().fold(0u128, |acc, &v| acc << 16 | (v as u128 + 1))
        })
    } else {
        count_faces(&c.facets, size, |s| s.to_vec())
    };
    let mut entries = vec![BigInt::from(1)];
    entries.extend(counts.into_iter().map(BigInt::from));
    FVector::new(entries).expect("face counts of a nonempty complex are positive")
}

/// Disjoint union: vertices of later parts are shifted past earlier ones.
pub fn disjoint_union(parts: &[FacetComplex]) -> Result<FacetComplex> {
    let mut offset = 0u64;
    let mut facets = Vec::new();
    for p in parts {
        facets.extend(
            p.facets
                .iter()
                .map(|f| f.iter().map(|&v| (v as u64 + offset) as u32).collect::<Vec<_>>()),
        );
        offset += p.vertex_count;
    }
    FacetComplex::new(offset, facets)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PurityStatus {
    Pure,
    NotPure,
    Unknown,
}

impl std::fmt::Display for PurityStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PurityStatus::Pure => "Pure",
            PurityStatus::NotPure => "NotPure",
            PurityStatus::Unknown => "Unknown",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PurityVerdict {
    pub status: PurityStatus,
    pub witness: Option<FacetComplex>,
    pub nodes_explored: u64,
    pub budget_hit: bool,
}
