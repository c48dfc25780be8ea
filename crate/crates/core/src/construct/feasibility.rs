//! Exact linear feasibility for the disjoint-union peak construction.
//!
//! A peak at f_{k_a - 1} asks for `p1(a) = f_{k_a} - f_{k_a - 1} < 0` (for
//! `a < N`) and `p2(a) = f_{k_a - 1} - f_{k_a - 2} > 0` (for `a > 1`). Both are
//! linear in the copy counts `a_1 .. a_{N-1}`. Coefficients are written with
//! the rational identity `C(n,k) - C(n,k-1) = C(n+1,k) (n+1-2k)/(n+1)`.
//!
//! Solutions are found with Fourier-Motzkin elimination over the rationals
//! followed by a lexicographic integer scan.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::macaulay::binom;

/// `C(n,k) - C(n,k-1)` in the form `C(n+1,k) (n+1-2k)/(n+1)`.
pub fn binomial_step(n: u64, k: u64) -> BigRational {
    let top = BigInt::from(binom(n + 1, k as i64)) * (BigInt::from(n + 1) - BigInt::from(2 * k));
    BigRational::new(top, BigInt::from(n + 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PeakSide {
    /// `p1(alpha) < 0`: the entry after the peak is smaller.
    Falling,
    /// `p2(alpha) > 0`: the entry before the peak is smaller.
    Rising,
}

/// One of the `p1`/`p2` polynomials, with its required sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeakInequality {
    /// 1-based peak number.
    pub alpha: usize,
    pub side: PeakSide,
    /// Coefficient of `a_i` in the polynomial, i = 1..N-1.
    pub coeffs: Vec<BigRational>,
    /// The `C(r+1, .)(r+1-2.)/(r+1)` term.
    pub constant: BigRational,
}

impl PeakInequality {
    pub fn evaluate(&self, a: &[BigInt]) -> BigRational {
        self.coeffs
            .iter()
            .zip(a)
            .fold(self.constant.clone(), |acc, (c, x)| acc + c * BigRational::from_integer(x.clone()))
    }

    pub fn holds(&self, a: &[BigInt]) -> bool {
        let v = self.evaluate(a);
        match self.side {
            PeakSide::Falling => v.is_negative(),
            PeakSide::Rising => v.is_positive(),
        }
    }

    /// The same condition as `sum c x + d > 0`.
    fn positive_form(&self) -> Constraint {
        let sign = match self.side {
            PeakSide::Falling => -BigRational::one(),
            PeakSide::Rising => BigRational::one(),
        };
        Constraint {
            coeffs: self.coeffs.iter().map(|c| c * &sign).collect(),
            constant: &self.constant * &sign,
            strict: true,
        }
        .normalized()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearFeasibilitySystem {
    pub k: Vec<u64>,
    pub r: u64,
    pub inequalities: Vec<PeakInequality>,
}

pub fn validate_spacing(k: &[u64]) -> Result<()> {
    if k.len() < 2 {
        return Err(Error::InvalidSpacing(format!("need at least two peak positions, got {}", k.len())));
    }
    if k[0] == 0 {
        return Err(Error::InvalidSpacing("peak positions must be positive".into()));
    }
    for w in k.windows(2) {
        if w[1] < w[0] + 2 {
            return Err(Error::InvalidSpacing(format!(
                "consecutive positions {} and {} differ by less than 2",
                w[0], w[1]
            )));
        }
    }
    let last = *k.last().unwrap();
    if 2 * k[0] < last {
        return Err(Error::InvalidSpacing(format!(
            "first position {} is below half of the last position {}",
            k[0], last
        )));
    }
    Ok(())
}

pub fn build_feasibility_system(k: &[u64], r: u64) -> Result<LinearFeasibilitySystem> {
    validate_spacing(k)?;
    let n = k.len();
    let last = k[n - 1];
    if r < last {
        return Err(Error::InvalidArgument(format!("r = {r} is below k_N = {last}")));
    }
    let mut inequalities = Vec::with_capacity(2 * (n - 1));
    for alpha in 1..=n {
        let ka = k[alpha - 1];
        if alpha < n {
            inequalities.push(PeakInequality {
                alpha,
                side: PeakSide::Falling,
                coeffs: k[..n - 1].iter().map(|&ki| binomial_step(2 * ki, ka + 1)).collect(),
                constant: binomial_step(r, ka + 1),
            });
        }
        if alpha > 1 {
            inequalities.push(PeakInequality {
                alpha,
                side: PeakSide::Rising,
                coeffs: k[..n - 1].iter().map(|&ki| binomial_step(2 * ki, ka)).collect(),
                constant: binomial_step(r, ka),
            });
        }
    }
    Ok(LinearFeasibilitySystem {
        k: k.to_vec(),
        r,
        inequalities,
    })
}

/// `sum coeffs[i] x_i + constant > 0` (or `>= 0` when not strict).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Constraint {
    coeffs: Vec<BigRational>,
    constant: BigRational,
    strict: bool,
}

impl Constraint {
    /// Scales by a positive factor so the first nonzero coefficient is +-1.
    fn normalized(mut self) -> Self {
        let pivot = self
            .coeffs
            .iter()
            .find(|c| !c.is_zero())
            .map(|c| c.abs())
            .unwrap_or_else(|| {
                if self.constant.is_zero() {
                    BigRational::one()
                } else {
                    self.constant.abs()
                }
            });
        for c in &mut self.coeffs {
            *c /= &pivot;
        }
        self.constant /= &pivot;
        self
    }

    fn constant_holds(&self) -> bool {
        if self.strict {
            self.constant.is_positive()
        } else {
            !self.constant.is_negative()
        }
    }

    fn substitute(&self, var: usize, value: &BigInt) -> Constraint {
        let mut out = self.clone();
        out.constant += &out.coeffs[var] * BigRational::from_integer(value.clone());
        out.coeffs[var] = BigRational::zero();
        out
    }
}

fn dedup(cs: Vec<Constraint>) -> Vec<Constraint> {
    let mut out: Vec<Constraint> = Vec::with_capacity(cs.len());
    for c in cs {
        if c.coeffs.iter().all(Zero::is_zero) && c.constant_holds() {
            continue;
        }
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

/// Fourier-Motzkin: removes `var`, keeping the rational projection exact.
fn eliminate(cs: &[Constraint], var: usize) -> Vec<Constraint> {
    let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
    for c in cs {
        if c.coeffs[var].is_positive() {
            pos.push(c);
        } else if c.coeffs[var].is_negative() {
            neg.push(c);
        } else {
            rest.push(c.clone());
        }
    }
    for p in &pos {
        for q in &neg {
            let wp = -&q.coeffs[var];
            let wq = p.coeffs[var].clone();
            let combined = Constraint {
                coeffs: p
                    .coeffs
                    .iter()
                    .zip(&q.coeffs)
                    .map(|(x, y)| &wp * x + &wq * y)
                    .collect(),
                constant: &wp * &p.constant + &wq * &q.constant,
                strict: p.strict || q.strict,
            };
            rest.push(combined.normalized());
        }
    }
    dedup(rest)
}

/// Bounds on variable `var` from constraints in which it is the only live one.
fn interval(cs: &[Constraint], var: usize) -> Option<(BigInt, Option<BigInt>)> {
    // Smallest admissible integer and largest admissible integer.
    let mut lo: Option<BigInt> = None;
    let mut hi: Option<BigInt> = None;
    for c in cs {
        let a = &c.coeffs[var];
        if a.is_zero() {
            if !c.constant_holds() {
                return None;
            }
            continue;
        }
        // a x + d (>|>=) 0  ->  x (>|>=) -d/a when a > 0.
        let t = -&c.constant / a;
        if a.is_positive() {
            let cand = if c.strict { t.floor().to_integer() + 1 } else { t.ceil().to_integer() };
            if lo.as_ref().is_none_or(|l| cand > *l) {
                lo = Some(cand);
            }
        } else {
            let cand = if c.strict { t.ceil().to_integer() - 1 } else { t.floor().to_integer() };
            if hi.as_ref().is_none_or(|h| cand < *h) {
                hi = Some(cand);
            }
        }
    }
    let lo = lo.unwrap_or_else(|| BigInt::from(i64::MIN));
    if let Some(h) = &hi {
        if *h < lo {
            return None;
        }
    }
    Some((lo, hi))
}

fn search(cs: &[Constraint], var: usize, nvars: usize, tries: u64, out: &mut Vec<BigInt>) -> bool {
    if var == nvars {
        return cs.iter().all(Constraint::constant_holds);
    }
    let mut projected = cs.to_vec();
    for v in (var + 1..nvars).rev() {
        projected = eliminate(&projected, v);
    }
    let Some((lo, hi)) = interval(&projected, var) else {
        return false;
    };
    let mut x = lo;
    for _ in 0..tries {
        if hi.as_ref().is_some_and(|h| x > *h) {
            break;
        }
        let next: Vec<Constraint> = cs.iter().map(|c| c.substitute(var, &x)).collect();
        out.push(x.clone());
        if search(&next, var + 1, nvars, tries, out) {
            return true;
        }
        out.pop();
        x += 1;
    }
    false
}

impl LinearFeasibilitySystem {
    pub fn variable_count(&self) -> usize {
        self.k.len() - 1
    }

    /// Whether the strict system plus `a_i >= 1` has a rational solution.
    pub fn rationally_feasible(&self) -> bool {
        let mut cs = self.constraints();
        for v in (0..self.variable_count()).rev() {
            cs = eliminate(&cs, v);
        }
        cs.iter().all(Constraint::constant_holds)
    }

    fn constraints(&self) -> Vec<Constraint> {
        let n = self.variable_count();
        let mut cs: Vec<Constraint> = self.inequalities.iter().map(PeakInequality::positive_form).collect();
        for i in 0..n {
            let mut coeffs = vec![BigRational::zero(); n];
            coeffs[i] = BigRational::one();
            cs.push(Constraint {
                coeffs,
                constant: -BigRational::one(),
                strict: false,
            });
        }
        dedup(cs)
    }

    /// Lexicographically smallest positive integer solution, trying at most
    /// `tries` consecutive values per coordinate before giving up on a branch.
    pub fn solve(&self, tries: u64) -> Option<Vec<BigUint>> {
        let mut out = Vec::new();
        if search(&self.constraints(), 0, self.variable_count(), tries, &mut out) {
            debug_assert!(self.inequalities.iter().all(|q| q.holds(&out)));
            Some(out.into_iter().map(|x| x.to_biguint().expect("positive")).collect())
        } else {
            None
        }
    }

    /// For each coordinate beta, the open interval that the other coordinates
    /// of `a` leave for `a_beta`: every inequality is solved for `a_beta`, the
    /// direction following the sign of its coefficient. Returns
    /// `(lower, upper)` where `None` means unbounded.
    pub fn coordinate_bounds(&self, a: &[BigInt]) -> Vec<(Option<BigRational>, Option<BigRational>)> {
        (0..self.variable_count())
            .map(|beta| {
                let mut lower: Option<BigRational> = None;
                let mut upper: Option<BigRational> = None;
                for q in &self.inequalities {
                    let c = &q.coeffs[beta];
                    if c.is_zero() {
                        continue;
                    }
                    let mut others = a.to_vec();
                    others[beta] = BigInt::zero();
                    // p = c a_beta + rest with rest = p(others)
                    let rest = q.evaluate(&others);
                    let threshold = -rest / c;
                    // Falling needs c a + rest < 0, Rising needs c a + rest > 0.
                    let below = matches!(
                        (q.side, c.is_positive()),
                        (PeakSide::Falling, true) | (PeakSide::Rising, false)
                    );
                    if below {
                        if upper.as_ref().is_none_or(|u| threshold < *u) {
                            upper = Some(threshold);
                        }
                    } else if lower.as_ref().is_none_or(|l| threshold > *l) {
                        lower = Some(threshold);
                    }
                }
                (lower, upper)
            })
            .collect()
    }
}

/// Exact integer coefficient of `a_i` in `f_{m} - f_{m-1}` for a copy of the
/// complex with all `k_N`-subsets of `2 k_i` vertices: `C(2k_i, m+1) - C(2k_i, m)`.
pub fn integer_step(n: u64, k: u64) -> BigInt {
    BigInt::from(binom(n, k as i64)) - BigInt::from(binom(n, k as i64 - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn identity_matches_integer_differences() {
        for n in 0..30u64 {
            for k in 0..=n + 1 {
                let q = binomial_step(n, k);
                assert!(q.is_integer());
                assert_eq!(q.to_integer(), integer_step(n, k), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn system_shape_for_two_peaks() {
        let s = build_feasibility_system(&[4, 8], 8).unwrap();
        assert_eq!(s.variable_count(), 1);
        assert_eq!(s.inequalities.len(), 2);
        assert_eq!((s.inequalities[0].alpha, s.inequalities[0].side), (1, PeakSide::Falling));
        assert_eq!((s.inequalities[1].alpha, s.inequalities[1].side), (2, PeakSide::Rising));
        // p1(1): C(8,5) - C(8,4) = -14 ; constant C(8,5) - C(8,4) = -14 as well.
        assert_eq!(s.inequalities[0].coeffs[0], BigRational::from_integer(BigInt::from(-14)));
        // p2(2): C(8,8) - C(8,7) = -7.
        assert_eq!(s.inequalities[1].coeffs[0], BigRational::from_integer(BigInt::from(-7)));
    }

    #[test]
    fn coefficient_signs_follow_peak_order() {
        let k = [8u64, 10, 13, 16];
        let s = build_feasibility_system(&k, 40).unwrap();
        for q in &s.inequalities {
            for (i0, c) in q.coeffs.iter().enumerate() {
                let i = i0 + 1;
                match q.side {
                    PeakSide::Rising => assert_eq!(c.is_negative(), q.alpha > i, "p2({}) a_{i}", q.alpha),
                    PeakSide::Falling => assert_eq!(c.is_negative(), q.alpha >= i, "p1({}) a_{i}", q.alpha),
                }
            }
        }
    }

    #[test]
    fn spacing_errors() {
        assert!(matches!(validate_spacing(&[4, 5]), Err(Error::InvalidSpacing(_))));
        assert!(matches!(validate_spacing(&[3, 8]), Err(Error::InvalidSpacing(_))));
        assert!(matches!(validate_spacing(&[4]), Err(Error::InvalidSpacing(_))));
        assert!(validate_spacing(&[4, 6, 8]).is_ok());
        assert!(build_feasibility_system(&[4, 6], 5).is_err());
    }

    #[test]
    fn two_peak_solution_is_lexicographically_minimal() {
        // r = 20 is the first r with a solution for k = (4, 6).
        let s = build_feasibility_system(&[4, 6], 19).unwrap();
        assert!(!s.rationally_feasible());
        assert!(s.solve(1000).is_none());
        let s = build_feasibility_system(&[4, 6], 20).unwrap();
        assert!(s.rationally_feasible());
        let a = s.solve(1000).unwrap();
        let a_int: Vec<BigInt> = a.iter().map(|x| BigInt::from(x.clone())).collect();
        assert!(s.inequalities.iter().all(|q| q.holds(&a_int)));
        let smaller = &a_int[0] - 1;
        assert!(!s.inequalities.iter().all(|q| q.holds(std::slice::from_ref(&smaller))));
    }

    #[test]
    fn fourier_motzkin_agrees_with_grid_on_small_systems() {
        // Exhaustive grid over a_1, a_2 in [1, 400] against the FM verdict.
        let k = [4u64, 6, 8];
        for r in [8u64, 12, 16, 20] {
            let s = build_feasibility_system(&k, r).unwrap();
            let mut grid_hit = false;
            'outer: for a1 in 1..=400i64 {
                for a2 in 1..=400i64 {
                    if s.inequalities.iter().all(|q| q.holds(&ints(&[a1, a2]))) {
                        grid_hit = true;
                        break 'outer;
                    }
                }
            }
            assert!(!grid_hit);
            assert!(!s.rationally_feasible(), "r={r}");
        }
    }

    #[test]
    fn coordinate_bounds_bracket_a_solution() {
        let s = build_feasibility_system(&[7, 12, 14], 41).unwrap();
        let a = s.solve(10_000).expect("feasible at r = 41");
        let a_int: Vec<BigInt> = a.iter().map(|x| BigInt::from(x.clone())).collect();
        for (beta, (lo, hi)) in s.coordinate_bounds(&a_int).into_iter().enumerate() {
            let x = BigRational::from_integer(a_int[beta].clone());
            assert!(lo.is_none_or(|l| x > l));
            assert!(hi.is_none_or(|h| x < h));
        }
    }
}
