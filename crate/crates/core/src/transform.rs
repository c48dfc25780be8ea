//! The f-vector / h-vector transform and Cohen-Macaulay recognition.
//!
//! Both vectors are stored with their constant leading entry: `f.entries()[0]`
//! is f_{-1} = 1 and `h.entries()[0]` is h_0 = 1. For an e-dimensional complex
//! both have length e + 2 and are related by
//!
//! ```text
//! f_{k-1} = sum_{i=0}^{k} C(e+1-i, k-i) h_i,    k = 0, ..., e+1.
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::macaulay::{binom, is_o_sequence, Validity};

/// A finite sequence of arbitrary-precision integers.
pub type IntSeq = Vec<BigInt>;

/// Parses a whitespace- or comma-separated list of decimal integers.
pub fn parse_int_seq(text: &str) -> Result<IntSeq> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("not an integer: {s:?}")))
        })
        .collect()
}

pub fn int_seq<I: IntoIterator<Item = i64>>(values: I) -> IntSeq {
    values.into_iter().map(BigInt::from).collect()
}

fn fmt_seq(entries: &[BigInt], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    for (j, x) in entries.iter().enumerate() {
        if j > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FVectorJson", into = "FVectorJson")]
pub struct FVector {
    entries: IntSeq,
}

#[derive(Serialize, Deserialize)]
struct FVectorJson {
    e: i64,
    #[serde(with = "crate::json::bigint_vec")]
    f: IntSeq,
}

impl From<FVector> for FVectorJson {
    fn from(v: FVector) -> Self {
        FVectorJson {
            e: v.dimension(),
            f: v.entries,
        }
    }
}

impl TryFrom<FVectorJson> for FVector {
    type Error = Error;
    fn try_from(j: FVectorJson) -> Result<Self> {
        let v = FVector::from_entries_unchecked(j.f)?;
        if v.dimension() != j.e {
            return Err(Error::Malformed(format!("dimension {} does not match length", j.e)));
        }
        Ok(v)
    }
}

impl FVector {
    /// An f-vector `(1, f_0, ..., f_e)` with every entry positive.
    pub fn new(entries: IntSeq) -> Result<Self> {
        let v = Self::from_entries_unchecked(entries)?;
        if let Some(j) = v.entries.iter().position(|x| !x.is_positive()) {
            return Err(Error::Malformed(format!(
                "f-vector entry at position {j} is {} (must be positive)",
                v.entries[j]
            )));
        }
        Ok(v)
    }

    /// Only checks the leading 1 and length; entries may be nonpositive.
    pub fn from_entries_unchecked(entries: IntSeq) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::Malformed("f-vector needs (1, f_0, ...) with at least two entries".into()));
        }
        if !entries[0].is_one() {
            return Err(Error::Malformed(format!("f-vector must start with 1, got {}", entries[0])));
        }
        Ok(FVector { entries })
    }

    pub fn from_i64s(values: &[i64]) -> Result<Self> {
        Self::new(int_seq(values.iter().copied()))
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    /// `f_0, ..., f_e` without the leading 1.
    pub fn tail(&self) -> &[BigInt] {
        &self.entries[1..]
    }

    pub fn into_entries(self) -> IntSeq {
        self.entries
    }

    pub fn dimension(&self) -> i64 {
        self.entries.len() as i64 - 2
    }

    /// f_i for i >= -1.
    pub fn face_count(&self, i: i64) -> Option<&BigInt> {
        self.entries.get((i + 1) as usize)
    }

    pub fn is_positive(&self) -> bool {
        self.entries.iter().all(|x| x.is_positive())
    }
}

impl fmt::Display for FVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_seq(&self.entries, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "HVectorJson", into = "HVectorJson")]
pub struct HVector {
    entries: IntSeq,
}

#[derive(Serialize, Deserialize)]
struct HVectorJson {
    e: i64,
    #[serde(with = "crate::json::bigint_vec")]
    h: IntSeq,
}

impl From<HVector> for HVectorJson {
    fn from(v: HVector) -> Self {
        HVectorJson {
            e: v.dimension(),
            h: v.entries,
        }
    }
}

impl TryFrom<HVectorJson> for HVector {
    type Error = Error;
    fn try_from(j: HVectorJson) -> Result<Self> {
        let v = HVector::new(j.h)?;
        if v.dimension() != j.e {
            return Err(Error::Malformed(format!("dimension {} does not match length", j.e)));
        }
        Ok(v)
    }
}

impl HVector {
    /// `(1, h_1, ..., h_{e+1})`; entries after h_0 may be negative.
    pub fn new(entries: IntSeq) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::Malformed("h-vector needs (1, h_1, ...) with at least two entries".into()));
        }
        if !entries[0].is_one() {
            return Err(Error::Malformed(format!("h-vector must start with 1, got {}", entries[0])));
        }
        Ok(HVector { entries })
    }

    pub fn from_i64s(values: &[i64]) -> Result<Self> {
        Self::new(int_seq(values.iter().copied()))
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn into_entries(self) -> IntSeq {
        self.entries
    }

    pub fn dimension(&self) -> i64 {
        self.entries.len() as i64 - 2
    }
}

impl fmt::Display for HVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_seq(&self.entries, f)
    }
}

/// Forward substitution: h_k carries coefficient 1 in the formula for f_{k-1}.
pub fn f_to_h(f: &FVector) -> HVector {
    let d = (f.entries.len() - 1) as u64;
    let mut h: IntSeq = Vec::with_capacity(f.entries.len());
    for k in 0..f.entries.len() {
        let mut acc = f.entries[k].clone();
        for (i, hi) in h.iter().enumerate() {
            acc -= BigInt::from(binom(d - i as u64, (k - i) as i64)) * hi;
        }
        h.push(acc);
    }
    HVector { entries: h }
}

pub fn h_to_f(h: &HVector) -> FVector {
    let d = (h.entries.len() - 1) as u64;
    let f = (0..h.entries.len())
        .map(|k| {
            h.entries[..=k]
                .iter()
                .enumerate()
                .map(|(i, hi)| BigInt::from(binom(d - i as u64, (k - i) as i64)) * hi)
                .sum()
        })
        .collect();
    FVector { entries: f }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmCheck {
    pub is_cm: bool,
    pub h: HVector,
    pub validity: Validity,
}

/// A vector is a Cohen-Macaulay f-vector iff its h-vector is an O-sequence.
pub fn is_cm_fvector(f: &FVector) -> CmCheck {
    let h = f_to_h(f);
    let validity = is_o_sequence(h.entries());
    CmCheck {
        is_cm: validity.valid,
        h,
        validity,
    }
}
