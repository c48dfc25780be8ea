//! The Interval Property experiment for pure f-vectors `(1, r, b, c)`
//! with `c = C(r,2)/3`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{complex_f_vector, decide_pure_dim2, FacetComplex, PurityStatus};
use crate::error::{Error, Result};
use crate::macaulay::is_o_sequence;
use crate::steiner::{is_admissible, sts, verify_sts};
use crate::transform::{is_cm_fvector, FVector};

fn require_admissible(r: u64) -> Result<()> {
    if r < 7 || !is_admissible(r) {
        return Err(Error::NotAdmissible { order: r, residue: r % 6 });
    }
    Ok(())
}

/// `(r-1)(r+6)/6`, the largest `b` for which the CM h-vector has `h_3 >= 0`.
pub fn cm_upper(r: u64) -> u64 {
    (r - 1) * (r + 6) / 6
}

fn cm_h(r: u64, b: u64) -> Vec<BigInt> {
    let (r, b) = (r as i64, b as i64);
    [1, r - 3, b - 2 * r + 3, (r - 1) * (r + 6) / 6 - b]
        .into_iter()
        .map(BigInt::from)
        .collect()
}

/// Smallest `b` making `(1, r-3, b-2r+3, (r-1)(r+6)/6 - b)` an O-sequence.
pub fn b0(r: u64) -> Result<u64> {
    require_admissible(r)?;
    (2 * r - 3..=cm_upper(r))
        .find(|&b| is_o_sequence(&cm_h(r, b)).valid)
        .ok_or_else(|| Error::NoWitnessInRange(format!("no admissible b for r = {r}")))
}

/// A pure `(1, r, b, c)` complex of triples has `3c` pairs counted with
/// multiplicity over its facets. When `b = C(r,2) - 1`, `c = C(r,2)/3` and
/// `r` is odd, exactly one pair is missing and the degrees force a parity
/// contradiction, so no such complex exists.
pub fn parity_obstruction(r: u64, b: u64, c: u64) -> bool {
    let pairs = r * (r - 1) / 2;
    is_admissible(r) && r >= 7 && b + 1 == pairs && 3 * c == pairs
}

fn f_of(r: u64, b: u64, c: u64) -> FVector {
    FVector::from_i64s(&[1, r as i64, b as i64, c as i64]).expect("positive entries")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FPrimeSource {
    Search,
    Parity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub status: PurityStatus,
    pub nodes_explored: u64,
    pub budget_hit: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IpReport {
    pub r: u64,
    pub f: FVector,
    pub f_pure: bool,
    pub sts_blocks: u64,
    pub cm_range: [u64; 2],
    pub cm_confirmed: bool,
    pub f_prime: FVector,
    pub f_prime_verdict: PurityStatus,
    pub f_prime_source: FPrimeSource,
    pub f_prime_search: SearchSummary,
    pub parity_obstruction: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pure_sweep: Option<BTreeMap<u64, PurityStatus>>,
    pub ip_violated: bool,
}

/// Runs the experiment. The Steiner and CM parts always complete; the
/// search parts respect `node_budget` and may come back Unknown.
pub fn ip_experiment(r: u64, node_budget: u64, sweep: bool) -> Result<IpReport> {
    require_admissible(r)?;
    let pairs = r * (r - 1) / 2;
    let c = pairs / 3;

    let system = sts(r)?;
    let check = verify_sts(&system);
    let f = f_of(r, pairs, c);
    let witness = FacetComplex::new(r, system.blocks.iter().map(|t| t.to_vec()).collect())?;
    let f_pure = check.valid && complex_f_vector(&witness) == f;

    let lo = b0(r)?;
    let hi = cm_upper(r);
    let cm_confirmed = (lo..=hi).all(|b| is_cm_fvector(&f_of(r, b, c)).is_cm);

    let f_prime = f_of(r, pairs - 1, c);
    let search = decide_pure_dim2(r, pairs - 1, c, node_budget)?;
    let parity = parity_obstruction(r, pairs - 1, c);
    let (f_prime_verdict, f_prime_source) = match search.status {
        PurityStatus::Unknown if parity => (PurityStatus::NotPure, FPrimeSource::Parity),
        s => (s, FPrimeSource::Search),
    };

    let pure_sweep = sweep.then(|| {
        (1..=pairs)
            .into_par_iter()
            .map(|b| {
                let v = decide_pure_dim2(r, b, c, node_budget).expect("b within range");
                (b, v.status)
            })
            .collect::<BTreeMap<_, _>>()
    });

    let smaller_pure = cm_confirmed && lo < pairs - 1;
    Ok(IpReport {
        r,
        f,
        f_pure,
        sts_blocks: system.blocks.len() as u64,
        cm_range: [lo, hi],
        cm_confirmed,
        f_prime,
        f_prime_verdict,
        f_prime_source,
        f_prime_search: SearchSummary {
            status: search.status,
            nodes_explored: search.nodes_explored,
            budget_hit: search.budget_hit,
        },
        parity_obstruction: parity,
        pure_sweep,
        ip_violated: f_pure && f_prime_verdict == PurityStatus::NotPure && smaller_pure,
    })
}
