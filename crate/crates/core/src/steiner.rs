//! Steiner triple systems: every pair of points lies in exactly one block.
//!
//! Text format: a header line `r <order>` followed by one block per line,
//! three whitespace-separated 0-based vertices. Blank lines and lines
//! starting with `#` are ignored.

use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pure_decide::{complex_f_vector, FacetComplex};
use crate::transform::FVector;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleSystem {
    pub order: u64,
    pub blocks: Vec<[u32; 3]>,
}

impl TripleSystem {
    /// Stores blocks in canonical order. No validity check; see [`verify_sts`].
    pub fn new(order: u64, blocks: Vec<[u32; 3]>) -> Self {
        let mut blocks: Vec<[u32; 3]> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        blocks.sort_unstable();
        TripleSystem { order, blocks }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("r {}\n", self.order);
        for [a, b, c] in &self.blocks {
            writeln!(out, "{a} {b} {c}").unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .enumerate()
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (_, header) = lines.next().ok_or_else(|| Error::Parse("empty input".into()))?;
        let order = match header.split_whitespace().collect::<Vec<_>>()[..] {
            ["r", n] => n
                .parse::<u64>()
                .map_err(|e| Error::Parse(format!("bad order {n:?}: {e}")))?,
            _ => return Err(Error::Parse(format!("expected header `r <order>`, got {header:?}"))),
        };
        let mut blocks = Vec::new();
        for (no, line) in lines {
            let vs: Vec<u32> = line
                .split_whitespace()
                .map(|t| t.parse::<u32>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse(format!("line {}: {e}", no + 1)))?;
            let block: [u32; 3] = vs
                .try_into()
                .map_err(|v: Vec<u32>| Error::Parse(format!("line {}: expected 3 vertices, got {}", no + 1, v.len())))?;
            blocks.push(block);
        }
        Ok(TripleSystem::new(order, blocks))
    }
}

/// True iff `r >= 3` and `r mod 6` is 1 or 3.
pub fn is_admissible(r: u64) -> bool {
    r >= 3 && matches!(r % 6, 1 | 3)
}

fn not_admissible(r: u64) -> Error {
    Error::NotAdmissible { order: r, residue: r % 6 }
}

/// Blocks `{i, i+1, i+3}` mod 7.
pub fn fano() -> TripleSystem {
    let blocks = (0..7u32).map(|i| [i, (i + 1) % 7, (i + 3) % 7]).collect();
    TripleSystem::new(7, blocks)
}

/// Bose's construction for `r = 6t + 3` on `Z_{2t+1} x Z_3`, with the
/// quasigroup `x o y = (x + y)(t + 1) mod (2t + 1)`.
pub fn bose(r: u64) -> Result<TripleSystem> {
    if r < 3 || r % 6 != 3 {
        return Err(not_admissible(r));
    }
    let t = (r - 3) / 6;
    let n = 2 * t + 1;
    let point = |x: u64, k: u64| (x + n * (k % 3)) as u32;
    let op = |x: u64, y: u64| (x + y) * (t + 1) % n;
    let mut blocks = Vec::with_capacity((r * (r - 1) / 6) as usize);
    for x in 0..n {
        blocks.push([point(x, 0), point(x, 1), point(x, 2)]);
    }
    for k in 0..3 {
        for x in 0..n {
            for y in x + 1..n {
                blocks.push([point(x, k), point(y, k), point(op(x, y), k + 1)]);
            }
        }
    }
    Ok(TripleSystem::new(r, blocks))
}

/// Skolem's construction for `r = 6t + 1` on `{inf} + Z_{2t} x Z_3`, with the
/// half-idempotent quasigroup `x o y = s((x + y) mod 2t)` where `s(2k) = k`
/// and `s(2k + 1) = k + t`.
pub fn skolem(r: u64) -> Result<TripleSystem> {
    if r < 7 || r % 6 != 1 {
        return Err(not_admissible(r));
    }
    let n = (r - 1) / 6;
    let q = 2 * n;
    let inf = 0u32;
    let point = |x: u64, k: u64| (1 + x + q * (k % 3)) as u32;
    let half = |z: u64| if z % 2 == 0 { z / 2 } else { z / 2 + n };
    let op = |x: u64, y: u64| half((x + y) % q);
    let mut blocks = Vec::with_capacity((r * (r - 1) / 6) as usize);
    for x in 0..n {
        blocks.push([point(x, 0), point(x, 1), point(x, 2)]);
    }
    for k in 0..3 {
        for x in 0..n {
            blocks.push([inf, point(n + x, k), point(x, k + 1)]);
        }
        for x in 0..q {
            for y in x + 1..q {
                blocks.push([point(x, k), point(y, k), point(op(x, y), k + 1)]);
            }
        }
    }
    Ok(TripleSystem::new(r, blocks))
}

/// The Fano plane at order 7, Bose for `6t + 3`, Skolem otherwise.
pub fn sts(r: u64) -> Result<TripleSystem> {
    match r {
        7 => Ok(fano()),
        _ if r % 6 == 3 => bose(r),
        _ => skolem(r),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StsProblem {
    BadBlock { index: usize, block: [u32; 3] },
    RepeatedPair { pair: [u32; 2] },
    UncoveredPair { pair: [u32; 2] },
    BlockCount { expected: u64, found: u64 },
    Degree { vertex: u32, expected: u64, found: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StsCheck {
    pub valid: bool,
    pub problem: Option<StsProblem>,
}

fn first_problem(ts: &TripleSystem) -> Option<StsProblem> {
    let r = ts.order as usize;
    for (index, &block) in ts.blocks.iter().enumerate() {
        let [a, b, c] = block;
        if !(a < b && b < c && (c as usize) < r) {
            return Some(StsProblem::BadBlock { index, block });
        }
    }
    let mut seen = vec![false; r * r];
    for &[a, b, c] in &ts.blocks {
        for (x, y) in [(a, b), (a, c), (b, c)] {
            let slot = &mut seen[x as usize * r + y as usize];
            if *slot {
                return Some(StsProblem::RepeatedPair { pair: [x, y] });
            }
            *slot = true;
        }
    }
    for x in 0..r {
        for y in x + 1..r {
            if !seen[x * r + y] {
                return Some(StsProblem::UncoveredPair { pair: [x as u32, y as u32] });
            }
        }
    }
    let pairs = (r * r.saturating_sub(1) / 2) as u64;
    if 3 * ts.blocks.len() as u64 != pairs {
        return Some(StsProblem::BlockCount {
            expected: pairs / 3,
            found: ts.blocks.len() as u64,
        });
    }
    let mut degree = vec![0u64; r];
    for b in &ts.blocks {
        for &v in b {
            degree[v as usize] += 1;
        }
    }
    let expected = (ts.order.saturating_sub(1)) / 2;
    degree
        .iter()
        .position(|&d| d != expected)
        .map(|v| StsProblem::Degree {
            vertex: v as u32,
            expected,
            found: degree[v],
        })
}

/// Checks pair coverage, block count and vertex degrees; reports the first
/// problem found.
pub fn verify_sts(ts: &TripleSystem) -> StsCheck {
    let problem = first_problem(ts);
    StsCheck {
        valid: problem.is_none(),
        problem,
    }
}

/// `(1, r, C(r,2), C(r,2)/3)`, cross-checked against the face count of the
/// blocks' downward closure.
pub fn sts_f_vector(ts: &TripleSystem) -> Result<FVector> {
    if let Some(p) = first_problem(ts) {
        return Err(Error::InvalidArgument(format!("not a Steiner triple system: {p:?}")));
    }
    let r = ts.order;
    let pairs = r * (r - 1) / 2;
    let f = FVector::new([1, r, pairs, pairs / 3].into_iter().map(BigInt::from).collect())?;
    let complex = FacetComplex::new(r, ts.blocks.iter().map(|b| b.to_vec()).collect())?;
    assert_eq!(complex_f_vector(&complex), f, "face count disagrees with the closed form");
    Ok(f)
}
