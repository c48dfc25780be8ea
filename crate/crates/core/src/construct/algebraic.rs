//! Cohen-Macaulay f-vectors with N peaks from a spiked O-sequence.
//!
//! The dimension is `e = 3 * 2^N - 4`. The h-vector is `n` everywhere from
//! index 2 on, except for N spikes: `h_1 = n^(1+eps)` and, for t = 2..N,
//! `h_s = n^(1+t*eps)` at `s = 3(2^(t-1) - 1) 2^(N-t+1) + 1`. The t-th spike
//! pushes a peak to `f_p` with `p = 3(2^t - 1) 2^(N-t) - 2`.
//!
//! With `eps = 1/D` and `n = m^D` every power is an exact integer:
//! `n^(1+t*eps) = m^(D+t)`. The default is `D = (N+1)(e-2)`; the borderline
//! choice `D = N(e-2)` makes the last spike exceed the Macaulay bound for
//! every m.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::macaulay::{binom, is_o_sequence};
use crate::peaks::peak_profile;
use crate::transform::{h_to_f, FVector, HVector};

/// Largest N accepted by the template; e grows like 3 * 2^N.
pub const MAX_TEMPLATE_PEAKS: u32 = 10;
pub const DEFAULT_M_START: u64 = 2;
pub const DEFAULT_M_LIMIT: u64 = 1 << 20;

pub fn dimension_for(n_peaks: u32) -> u64 {
    3 * (1u64 << n_peaks) - 4
}

/// Position of spike t (t = 1..N) in the h-vector.
pub fn spike_index(n_peaks: u32, t: u32) -> u64 {
    3 * ((1u64 << (t - 1)) - 1) * (1u64 << (n_peaks - t + 1)) + 1
}

/// Last index of the constant run that follows spike t.
pub fn run_end(n_peaks: u32, t: u32) -> u64 {
    dimension_for(n_peaks) / 2 + 3 * ((1u64 << (t - 1)) - 1) * (1u64 << (n_peaks - t)) + 2
}

/// f-vector subscript of peak t, i.e. the peak is f_{peak_index}.
pub fn peak_index(n_peaks: u32, t: u32) -> u64 {
    3 * ((1u64 << t) - 1) * (1u64 << (n_peaks - t)) - 2
}

pub fn default_denominator(n_peaks: u32) -> u64 {
    (n_peaks as u64 + 1) * (dimension_for(n_peaks) - 2)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Spike {
    pub t: u32,
    pub index: u64,
    pub run_end: u64,
    pub peak: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpikeLayout {
    pub n_peaks: u32,
    pub dimension: u64,
    pub spikes: Vec<Spike>,
}

impl SpikeLayout {
    pub fn peak_indices(&self) -> Vec<u64> {
        self.spikes.iter().map(|s| s.peak).collect()
    }

    /// Exponent of m above n at each h position (None for h_0).
    fn exponents(&self) -> Vec<Option<u32>> {
        let len = self.dimension as usize + 2;
        let mut x = vec![Some(0); len];
        x[0] = None;
        for s in &self.spikes {
            x[s.index as usize] = Some(s.t);
        }
        x
    }
}

pub fn spike_layout(n_peaks: u32) -> Result<SpikeLayout> {
    if n_peaks < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 peaks, got {n_peaks}")));
    }
    if n_peaks > MAX_TEMPLATE_PEAKS {
        return Err(Error::InvalidArgument(format!(
            "{n_peaks} peaks needs dimension {}; the template supports at most {MAX_TEMPLATE_PEAKS} peaks",
            dimension_for(n_peaks)
        )));
    }
    let e = dimension_for(n_peaks);
    let spikes = (1..=n_peaks)
        .map(|t| {
            let j = spike_index(n_peaks, t) - 1;
            // The binomial row C(e - j, .) must have a single central maximum.
            assert!((e - j) % 2 == 0, "e - j odd at t = {t}");
            Spike {
                t,
                index: spike_index(n_peaks, t),
                run_end: run_end(n_peaks, t),
                peak: peak_index(n_peaks, t),
            }
        })
        .collect();
    Ok(SpikeLayout {
        n_peaks,
        dimension: e,
        spikes,
    })
}

pub fn algebraic_h_template(n_peaks: u32, m: u64) -> Result<HVector> {
    algebraic_h_template_with_denominator(n_peaks, m, default_denominator(n_peaks.max(2)))
}

/// Template with `eps = 1/denominator` and `n = m^denominator`.
pub fn algebraic_h_template_with_denominator(n_peaks: u32, m: u64, denominator: u64) -> Result<HVector> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("base m must be at least 2, got {m}")));
    }
    if denominator == 0 {
        return Err(Error::InvalidArgument("epsilon denominator must be positive".into()));
    }
    let layout = spike_layout(n_peaks)?;
    let base = BigUint::from(m);
    let exp = |extra: u32| BigInt::from(base.pow(denominator as u32 + extra));
    let h = layout
        .exponents()
        .into_iter()
        .map(|x| match x {
            None => BigInt::one(),
            Some(t) => exp(t),
        })
        .collect();
    HVector::new(h)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RejectionTally {
    /// Candidates whose f had the wrong peak layout.
    pub peak_layout: u64,
    /// Candidates with the right layout but h failing Macaulay's condition.
    pub o_sequence: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraicPeakCertificate {
    pub n_peaks: u32,
    pub dimension: u64,
    pub m: u64,
    /// eps = 1 / epsilon_denominator.
    pub epsilon_denominator: u64,
    #[serde(with = "crate::json::bigint")]
    pub n: BigInt,
    pub h: HVector,
    pub f: FVector,
    pub peak_indices: Vec<u64>,
    pub m_start: u64,
    pub rejected: RejectionTally,
}

impl AlgebraicPeakCertificate {
    pub fn epsilon(&self) -> String {
        format!("1/{}", self.epsilon_denominator)
    }
}

/// Exact peak screen. Every h entry past h_0 is `n * m^x`, so
/// `f_k = C(e+1, k) + n * g_k(m)` with `g_k` an integer polynomial of degree
/// at most N. When `n > 2^(e+1)` the order of the f entries is the
/// lexicographic order of the pairs `(g_k(m), C(e+1, k))`.
struct PeakScreen {
    /// coeffs[k][t]: coefficient of m^t in g_k, for k = 1..=e+1.
    coeffs: Vec<Vec<u128>>,
    base_terms: Vec<u128>,
    expected: Vec<usize>,
}

impl PeakScreen {
    fn new(layout: &SpikeLayout) -> Self {
        let d = layout.dimension as usize + 1;
        let x = layout.exponents();
        let degree = layout.n_peaks as usize;
        let small = |n: usize, k: usize| binom(n as u64, k as i64).to_u128().expect("binomial fits u128");
        let coeffs = (1..=d)
            .map(|k| {
                let mut row = vec![0u128; degree + 1];
                for (i, xi) in x.iter().enumerate().take(k + 1).skip(1) {
                    row[xi.unwrap() as usize] += small(d - i, k - i);
                }
                row
            })
            .collect();
        let base_terms = (1..=d).map(|k| small(d, k)).collect();
        let expected = layout.peak_indices().iter().map(|&p| p as usize).collect();
        PeakScreen {
            coeffs,
            base_terms,
            expected,
        }
    }

    fn eval_u128(&self, m: u64) -> Option<Vec<(u128, u128)>> {
        let m = m as u128;
        self.coeffs
            .iter()
            .zip(&self.base_terms)
            .map(|(row, &b)| {
                let mut acc: u128 = 0;
                for &c in row.iter().rev() {
                    acc = acc.checked_mul(m)?.checked_add(c)?;
                }
                Some((acc, b))
            })
            .collect()
    }

    fn eval_big(&self, m: u64) -> Vec<(BigUint, u128)> {
        let m = BigUint::from(m);
        self.coeffs
            .iter()
            .zip(&self.base_terms)
            .map(|(row, &b)| {
                let acc = row
                    .iter()
                    .rev()
                    .fold(BigUint::from(0u32), |acc, &c| acc * &m + BigUint::from(c));
                (acc, b)
            })
            .collect()
    }

    fn passes(&self, m: u64) -> bool {
        let profile = match self.eval_u128(m) {
            Some(keys) => peak_profile(&keys),
            None => peak_profile(&self.eval_big(m)),
        };
        profile.all_singletons() && profile.positions() == self.expected
    }
}

pub(crate) fn layout_matches(f: &FVector, layout: &SpikeLayout) -> bool {
    let profile = peak_profile(f.tail());
    let expected: Vec<usize> = layout.peak_indices().iter().map(|&p| p as usize).collect();
    profile.all_singletons() && profile.positions() == expected
}

/// Scans m upward from `m_start` and returns the certificate for the first m
/// whose template is an O-sequence with exactly the designed peaks.
pub fn construct_algebraic(n_peaks: u32, m_start: u64, m_limit: u64) -> Result<AlgebraicPeakCertificate> {
    let layout = spike_layout(n_peaks)?;
    if m_start < 2 {
        return Err(Error::InvalidArgument(format!("m_start must be at least 2, got {m_start}")));
    }
    let denominator = default_denominator(n_peaks);
    let screen = PeakScreen::new(&layout);
    // The screen is exact once n = m^D exceeds every binomial C(e+1, k).
    let screen_exact = |m: u64| (m as f64).log2() * denominator as f64 > layout.dimension as f64 + 2.0;

    let mut rejected = RejectionTally::default();
    for m in m_start..=m_limit {
        if screen_exact(m) && !screen.passes(m) {
            rejected.peak_layout += 1;
            continue;
        }
        let h = algebraic_h_template(n_peaks, m)?;
        let f = h_to_f(&h);
        if !layout_matches(&f, &layout) {
            rejected.peak_layout += 1;
            continue;
        }
        if !is_o_sequence(h.entries()).valid {
            rejected.o_sequence += 1;
            continue;
        }
        let n = BigInt::from(BigUint::from(m).pow(denominator as u32));
        return Ok(AlgebraicPeakCertificate {
            n_peaks,
            dimension: layout.dimension,
            m,
            epsilon_denominator: denominator,
            n,
            h,
            f,
            peak_indices: layout.peak_indices(),
            m_start,
            rejected,
        });
    }
    Err(Error::NoWitnessInRange(format!(
        "no m in [{m_start}, {m_limit}] gives {n_peaks} peaks with an O-sequence h \
         ({} rejected for peak layout, {} for Macaulay growth)",
        rejected.peak_layout, rejected.o_sequence
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::macaulay::ViolationKind;

    #[test]
    fn layout_closed_forms() {
        assert_eq!(dimension_for(2), 8);
        assert_eq!(dimension_for(3), 20);
        assert_eq!(dimension_for(4), 44);
        let l = spike_layout(2).unwrap();
        assert_eq!(l.spikes.iter().map(|s| s.index).collect::<Vec<_>>(), vec![1, 7]);
        assert_eq!(l.peak_indices(), vec![4, 7]);
        let l = spike_layout(3).unwrap();
        assert_eq!(l.spikes.iter().map(|s| s.index).collect::<Vec<_>>(), vec![1, 13, 19]);
        assert_eq!(l.spikes.iter().map(|s| s.run_end).collect::<Vec<_>>(), vec![12, 18, 21]);
        assert_eq!(l.peak_indices(), vec![10, 16, 19]);
        assert_eq!(spike_layout(4).unwrap().peak_indices(), vec![22, 34, 40, 43]);
        assert!(spike_layout(1).is_err());
    }

    #[test]
    fn layout_runs_tile_the_vector() {
        for n in 2..=8 {
            let l = spike_layout(n).unwrap();
            let e = l.dimension;
            for w in l.spikes.windows(2) {
                assert_eq!(w[1].index, w[0].run_end + 1, "N={n}");
            }
            assert_eq!(l.spikes.last().unwrap().run_end, e + 1);
            assert_eq!(l.spikes.last().unwrap().index, e - 1);
            assert_eq!(l.spikes[0].peak, e / 2);
            assert_eq!(l.spikes.last().unwrap().peak, e - 1);
        }
    }

    #[test]
    fn template_for_two_peaks() {
        let h = algebraic_h_template(2, 2).unwrap();
        let d = default_denominator(2);
        assert_eq!(d, 18);
        let n = BigInt::from(1u64 << 18);
        let mut expected = vec![BigInt::one(), &n * 2];
        expected.extend(std::iter::repeat_n(n.clone(), 5));
        expected.push(&n * 4);
        expected.extend([n.clone(), n.clone()]);
        assert_eq!(h.entries(), &expected[..]);
    }

    #[test]
    fn template_with_borderline_epsilon() {
        // eps = 1/(N(e-2)) = 1/12 for N = 2: n = 2^12, spikes 2^13 and 2^14.
        let h = algebraic_h_template_with_denominator(2, 2, 12).unwrap();
        let e = h.entries();
        assert_eq!(e.len(), 10);
        assert_eq!(e[1], BigInt::from(1u64 << 13));
        assert_eq!(e[7], BigInt::from(1u64 << 14));
        assert!(e[2..7].iter().chain(&e[8..]).all(|x| *x == BigInt::from(4096)));
    }

    #[test]
    fn borderline_epsilon_never_gives_an_o_sequence() {
        for n_peaks in 2..=4u32 {
            let d = n_peaks as u64 * (dimension_for(n_peaks) - 2);
            for m in 2..=64 {
                let h = algebraic_h_template_with_denominator(n_peaks, m, d).unwrap();
                let v = is_o_sequence(h.entries());
                let viol = v.violation.expect("must fail");
                assert_eq!(viol.index as u64, dimension_for(n_peaks) - 1);
                assert!(matches!(viol.kind, ViolationKind::Growth { .. }));
            }
        }
    }

    #[test]
    fn screen_agrees_with_full_transform() {
        for n_peaks in 2..=3u32 {
            let layout = spike_layout(n_peaks).unwrap();
            let screen = PeakScreen::new(&layout);
            for m in (2..40).chain([200, 763, 764, 765]) {
                let f = h_to_f(&algebraic_h_template(n_peaks, m).unwrap());
                assert_eq!(screen.passes(m), layout_matches(&f, &layout), "N={n_peaks} m={m}");
            }
        }
    }

    #[test]
    fn two_peak_certificate_is_minimal() {
        let c = construct_algebraic(2, 2, 64).unwrap();
        assert_eq!(c.m, 22);
        assert_eq!(c.peak_indices, vec![4, 7]);
        assert_eq!(c.rejected.peak_layout + c.rejected.o_sequence, 20);
        for m in 2..22 {
            let h = algebraic_h_template(2, m).unwrap();
            let f = h_to_f(&h);
            assert!(!(layout_matches(&f, &spike_layout(2).unwrap()) && is_o_sequence(h.entries()).valid));
        }
    }

    #[test]
    fn exhausted_range_is_reported() {
        assert!(matches!(construct_algebraic(2, 2, 10), Err(Error::NoWitnessInRange(_))));
        assert!(construct_algebraic(2, 1, 10).is_err());
    }
}
