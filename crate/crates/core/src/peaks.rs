//! Peak and unimodality profiling of integer sequences.

use serde::{Deserialize, Serialize};

use crate::transform::FVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeakRun {
    pub start: usize,
    pub end: usize,
}

/// Maximal constant runs that sit strictly above both neighbours. A sequence
/// boundary counts as a lower neighbour, and a plateau is one peak.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeakProfile {
    pub peaks: Vec<PeakRun>,
    pub peak_count: usize,
    pub unimodal: bool,
}

impl PeakProfile {
    /// Start index of every run, for runs of length one this is the peak position.
    pub fn positions(&self) -> Vec<usize> {
        self.peaks.iter().map(|r| r.start).collect()
    }

    pub fn all_singletons(&self) -> bool {
        self.peaks.iter().all(|r| r.start == r.end)
    }
}

pub fn peak_profile<T: Ord>(v: &[T]) -> PeakProfile {
    let mut peaks = Vec::new();
    let mut start = 0;
    while start < v.len() {
        let mut end = start;
        while end + 1 < v.len() && v[end + 1] == v[start] {
            end += 1;
        }
        let left_lower = start == 0 || v[start - 1] < v[start];
        let right_lower = end + 1 == v.len() || v[end + 1] < v[start];
        if left_lower && right_lower {
            peaks.push(PeakRun { start, end });
        }
        start = end + 1;
    }

    let mut decreased = false;
    let mut rises_after_fall = false;
    for w in v.windows(2) {
        if w[1] < w[0] {
            decreased = true;
        } else if w[1] > w[0] && decreased {
            rises_after_fall = true;
        }
    }

    PeakProfile {
        peak_count: peaks.len(),
        unimodal: peaks.len() <= 1 && !rises_after_fall,
        peaks,
    }
}

/// `f_{-1} < f_0 < ... < f_{ceil(e/2)-1}`.
pub fn first_half_increasing(f: &FVector) -> bool {
    let e = f.dimension().max(0) as usize;
    let last = e.div_ceil(2);
    f.entries()[..=last].windows(2).all(|w| w[0] < w[1])
}
