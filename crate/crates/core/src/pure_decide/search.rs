//! Backtracking over facet sets in lexicographic order.
//!
//! Shared pruning rules:
//! - the first facet is forced to be {0, ..., d-1}; any pure complex can be
//!   relabeled so that one of its facets is this set, which is then the
//!   lexicographically smallest;
//! - later facets are taken in increasing lexicographic order, so once the
//!   candidates start past the smallest uncovered vertex that vertex can
//!   never be covered;
//! - face counts only grow, and each new facet adds at most C(d, s) faces
//!   of size s.

use std::collections::HashMap;

use num_traits::ToPrimitive;

use super::{FacetComplex, PurityStatus, PurityVerdict};
use crate::error::{Error, Result};
use crate::macaulay::binom;
use crate::transform::FVector;

fn small_binom(n: u64, k: u64) -> u64 {
    binom(n, k as i64).to_u64().unwrap_or(u64::MAX)
}

fn finish(found: Option<Vec<Vec<u32>>>, vertices: u64, nodes: u64, budget_hit: bool, query: &FVector) -> PurityVerdict {
    let (status, witness) = match found {
        Some(facets) => {
            let complex = FacetComplex::new(vertices, facets).expect("search builds valid complexes");
            assert_eq!(
                &super::complex_f_vector(&complex),
                query,
                "search witness does not realize the query"
            );
            (PurityStatus::Pure, Some(complex))
        }
        None if budget_hit => (PurityStatus::Unknown, None),
        None => (PurityStatus::NotPure, None),
    };
    PurityVerdict {
        status,
        witness,
        nodes_explored: nodes,
        budget_hit,
    }
}

struct TripleSearch {
    r: usize,
    b: u64,
    c: usize,
    triples: Vec<[u32; 3]>,
    pair_ids: Vec<[usize; 3]>,
    pair_mult: Vec<u32>,
    covered_pairs: u64,
    degree: Vec<u32>,
    uncovered: usize,
    chosen: Vec<usize>,
    nodes: u64,
    budget: u64,
    budget_hit: bool,
}

impl TripleSearch {
    fn pair_id(r: usize, u: usize, v: usize) -> usize {
        u * r + v
    }

    fn apply(&mut self, j: usize) {
        for p in self.pair_ids[j] {
            self.pair_mult[p] += 1;
            if self.pair_mult[p] == 1 {
                self.covered_pairs += 1;
            }
        }
        for v in self.triples[j] {
            self.degree[v as usize] += 1;
            if self.degree[v as usize] == 1 {
                self.uncovered -= 1;
            }
        }
        self.chosen.push(j);
    }

    fn undo(&mut self, j: usize) {
        for p in self.pair_ids[j] {
            self.pair_mult[p] -= 1;
            if self.pair_mult[p] == 0 {
                self.covered_pairs -= 1;
            }
        }
        for v in self.triples[j] {
            self.degree[v as usize] -= 1;
            if self.degree[v as usize] == 0 {
                self.uncovered += 1;
            }
        }
        self.chosen.pop();
    }

    fn dfs(&mut self, start: usize) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.budget_hit = true;
            return false;
        }
        let remaining = self.c - self.chosen.len();
        if remaining == 0 {
            return self.covered_pairs == self.b && self.uncovered == 0;
        }
        if self.covered_pairs > self.b
            || self.covered_pairs + 3 * (remaining as u64) < self.b
            || self.uncovered > 3 * remaining
            || self.triples.len() - start < remaining
        {
            return false;
        }
        let frontier = self.triples[start][0] as usize;
        let min_uncovered = self.degree.iter().position(|&d| d == 0);
        if min_uncovered.is_some_and(|v| v < frontier) {
            return false;
        }
        // Uncovered pairs below the frontier stay uncovered.
        let total_pairs = (self.r * (self.r - 1) / 2) as u64;
        let dead = (0..frontier)
            .flat_map(|u| (u + 1..self.r).map(move |v| (u, v)))
            .filter(|&(u, v)| self.pair_mult[Self::pair_id(self.r, u, v)] == 0)
            .count() as u64;
        if total_pairs - dead < self.b {
            return false;
        }

        for j in start..self.triples.len() {
            if self.triples.len() - j < remaining {
                break;
            }
            if min_uncovered.is_some_and(|v| (self.triples[j][0] as usize) > v) {
                break;
            }
            self.apply(j);
            if self.covered_pairs <= self.b && self.dfs(j + 1) {
                return true;
            }
            self.undo(j);
            if self.budget_hit {
                return false;
            }
        }
        false
    }
}

/// Is `(1, r, b, c)` the f-vector of a pure 2-dimensional complex?
pub fn decide_pure_dim2(r: u64, b: u64, c: u64, node_budget: u64) -> Result<PurityVerdict> {
    if r < 3 {
        return Err(Error::InvalidArgument(format!("need r >= 3, got {r}")));
    }
    if r > 64 {
        return Err(Error::InvalidArgument(format!("r = {r} is beyond the search's vertex limit of 64")));
    }
    let pairs = small_binom(r, 2);
    let triples_total = small_binom(r, 3);
    if b == 0 || b > pairs {
        return Err(Error::InvalidArgument(format!("need 0 < b <= C({r},2) = {pairs}, got {b}")));
    }
    if c == 0 || c > triples_total {
        return Err(Error::InvalidArgument(format!("need 0 < c <= C({r},3) = {triples_total}, got {c}")));
    }
    let query = FVector::from_i64s(&[1, r as i64, b as i64, c as i64])?;
    let n = r as usize;
    let mut triples = Vec::with_capacity(triples_total as usize);
    for x in 0..n {
        for y in x + 1..n {
            for z in y + 1..n {
                triples.push([x as u32, y as u32, z as u32]);
            }
        }
    }
    let pair_ids = triples
        .iter()
        .map(|t| {
            let [x, y, z] = t.map(|v| v as usize);
            [
                TripleSearch::pair_id(n, x, y),
                TripleSearch::pair_id(n, x, z),
                TripleSearch::pair_id(n, y, z),
            ]
        })
        .collect();
    let mut s = TripleSearch {
        r: n,
        b,
        c: c as usize,
        triples,
        pair_ids,
        pair_mult: vec![0; n * n],
        covered_pairs: 0,
        degree: vec![0; n],
        uncovered: n,
        chosen: Vec::new(),
        nodes: 0,
        budget: node_budget,
        budget_hit: false,
    };
    s.apply(0);
    let found = s.dfs(1);
    let facets = found.then(|| s.chosen.iter().map(|&j| s.triples[j].to_vec()).collect());
    Ok(finish(facets, r, s.nodes, s.budget_hit, &query))
}

struct FacetSearch {
    targets: Vec<u64>,
    facet_size: usize,
    candidates: Vec<u64>,
    counts: Vec<HashMap<u64, u32>>,
    distinct: Vec<u64>,
    vertex_count: usize,
    chosen: Vec<usize>,
    nodes: u64,
    budget: u64,
    budget_hit: bool,
}

impl FacetSearch {
    fn apply(&mut self, j: usize) {
        let mask = self.candidates[j];
        let mut sub = mask;
        while sub != 0 {
            let level = sub.count_ones() as usize - 1;
            let e = self.counts[level].entry(sub).or_insert(0);
            *e += 1;
            if *e == 1 {
                self.distinct[level] += 1;
            }
            sub = (sub - 1) & mask;
        }
        self.chosen.push(j);
    }

    fn undo(&mut self, j: usize) {
        let mask = self.candidates[j];
        let mut sub = mask;
        while sub != 0 {
            let level = sub.count_ones() as usize - 1;
            let e = self.counts[level].get_mut(&sub).expect("applied before");
            *e -= 1;
            if *e == 0 {
                self.counts[level].remove(&sub);
                self.distinct[level] -= 1;
            }
            sub = (sub - 1) & mask;
        }
        self.chosen.pop();
    }

    fn min_uncovered(&self) -> Option<usize> {
        (0..self.vertex_count).find(|&v| !self.counts[0].contains_key(&(1u64 << v)))
    }

    fn dfs(&mut self, start: usize) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.budget_hit = true;
            return false;
        }
        let target_facets = *self.targets.last().unwrap() as usize;
        let remaining = target_facets - self.chosen.len();
        if remaining == 0 {
            return self.distinct == self.targets;
        }
        for (level, (&have, &want)) in self.distinct.iter().zip(&self.targets).enumerate() {
            let per_facet = small_binom(self.facet_size as u64, level as u64 + 1);
            if have > want || have.saturating_add(per_facet.saturating_mul(remaining as u64)) < want {
                return false;
            }
        }
        if self.candidates.len() - start < remaining {
            return false;
        }
        let frontier = self.candidates[start].trailing_zeros() as usize;
        let min_uncovered = self.min_uncovered();
        if min_uncovered.is_some_and(|v| v < frontier) {
            return false;
        }
        for j in start..self.candidates.len() {
            if self.candidates.len() - j < remaining {
                break;
            }
            if min_uncovered.is_some_and(|v| self.candidates[j].trailing_zeros() as usize > v) {
                break;
            }
            self.apply(j);
            let ok = self.distinct.iter().zip(&self.targets).all(|(h, w)| h <= w);
            if ok && self.dfs(j + 1) {
                return true;
            }
            self.undo(j);
            if self.budget_hit {
                return false;
            }
        }
        false
    }
}

/// `d`-subsets of `0..n` as bitmasks, in lexicographic order of their sorted
/// vertex lists.
fn lex_subsets(n: usize, d: usize) -> Vec<u64> {
    let mut out = Vec::new();
    if d > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..d).collect();
    loop {
        out.push(idx.iter().fold(0u64, |m, &v| m | 1 << v));
        let mut p = d;
        loop {
            if p == 0 {
                return out;
            }
            p -= 1;
            if idx[p] < n - d + p {
                idx[p] += 1;
                for q in p + 1..d {
                    idx[q] = idx[q - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Purity search in any dimension. Candidate facets count against the
/// budget, so a pool larger than `node_budget` yields Unknown at once.
pub fn decide_pure_general(f: &FVector, node_budget: u64) -> Result<PurityVerdict> {
    let targets: Vec<u64> = f
        .tail()
        .iter()
        .map(|x| x.to_u64().ok_or_else(|| Error::InvalidArgument(format!("entry {x} too large for search"))))
        .collect::<Result<_>>()?;
    if !f.is_positive() {
        return Err(Error::Malformed("f-vector entries must be positive".into()));
    }
    let n = targets[0];
    let d = targets.len();
    if n > 64 {
        return Err(Error::InvalidArgument(format!("{n} vertices is beyond the search's limit of 64")));
    }
    if d > n as usize || targets.iter().enumerate().any(|(i, &t)| t > small_binom(n, i as u64 + 1)) {
        return Ok(finish(None, n, 0, false, f));
    }
    let pool = small_binom(n, d as u64);
    if pool > node_budget {
        return Ok(finish(None, n, node_budget, true, f));
    }
    let mut s = FacetSearch {
        facet_size: d,
        candidates: lex_subsets(n as usize, d),
        counts: vec![HashMap::new(); d],
        distinct: vec![0; d],
        vertex_count: n as usize,
        chosen: Vec::new(),
        nodes: pool,
        budget: node_budget,
        budget_hit: false,
        targets,
    };
    s.apply(0);
    let found = s.dfs(1);
    let facets = found.then(|| {
        s.chosen
            .iter()
            .map(|&j| {
                let m = s.candidates[j];
                (0..64).filter(|v| m >> v & 1 == 1).collect()
            })
            .collect()
    });
    Ok(finish(facets, n, s.nodes, s.budget_hit, f))
}

/// Dispatches dimension 2 to the specialized triple search.
pub fn decide_pure(f: &FVector, node_budget: u64) -> Result<PurityVerdict> {
    if f.dimension() == 2 {
        let t: Vec<u64> = f.tail().iter().filter_map(|x| x.to_u64()).collect();
        if t.len() == 3 && t[0] >= 3 && t[0] <= 64 && t[1] <= small_binom(t[0], 2) && t[2] <= small_binom(t[0], 3) {
            return decide_pure_dim2(t[0], t[1], t[2], node_budget);
        }
    }
    decide_pure_general(f, node_budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    const BUDGET: u64 = 50_000_000;

    fn status(r: u64, b: u64, c: u64) -> PurityStatus {
        decide_pure_dim2(r, b, c, BUDGET).unwrap().status
    }

    #[test]
    fn known_points() {
        assert_eq!(status(7, 20, 7), PurityStatus::NotPure);
        assert_eq!(status(7, 21, 7), PurityStatus::Pure);
        assert_eq!(status(7, 12, 7), PurityStatus::Pure);
        assert_eq!(status(7, 11, 7), PurityStatus::NotPure);
    }

    #[test]
    fn fano_witness_is_a_steiner_system() {
        let v = decide_pure_dim2(7, 21, 7, BUDGET).unwrap();
        let w = v.witness.unwrap();
        let ts = crate::steiner::TripleSystem::new(7, w.facets.iter().map(|f| [f[0], f[1], f[2]]).collect());
        assert!(crate::steiner::verify_sts(&ts).valid);
    }

    #[test]
    fn rejects_bad_bounds() {
        assert!(decide_pure_dim2(2, 1, 1, 10).is_err());
        assert!(decide_pure_dim2(7, 0, 7, 10).is_err());
        assert!(decide_pure_dim2(7, 22, 7, 10).is_err());
        assert!(decide_pure_dim2(7, 21, 36, 10).is_err());
    }

    #[test]
    fn general_examples() {
        let simplex = FVector::from_i64s(&[1, 3, 3, 1]).unwrap();
        assert_eq!(decide_pure(&simplex, 1000).unwrap().status, PurityStatus::Pure);
        let edges = FVector::from_i64s(&[1, 4, 2]).unwrap();
        let v = decide_pure(&edges, 1000).unwrap();
        assert_eq!(v.status, PurityStatus::Pure);
        assert_eq!(v.witness.unwrap().facets, vec![vec![0, 1], vec![2, 3]]);
        let tetra = FVector::from_i64s(&[1, 4, 6, 4, 1]).unwrap();
        assert_eq!(decide_pure(&tetra, 1000).unwrap().status, PurityStatus::Pure);
        // A vertex plus an edge is not pure.
        let mixed = FVector::from_i64s(&[1, 3, 1]).unwrap();
        assert_eq!(decide_pure(&mixed, 1000).unwrap().status, PurityStatus::NotPure);
        let points = FVector::from_i64s(&[1, 5]).unwrap();
        assert_eq!(decide_pure(&points, 1000).unwrap().status, PurityStatus::Pure);
    }

    #[test]
    fn general_search_agrees_with_triple_search() {
        for r in 5..=7u64 {
            for c in 1..=8u64 {
                for b in 1..=small_binom(r, 2) {
                    let f = FVector::from_i64s(&[1, r as i64, b as i64, c as i64]).unwrap();
                    let g = decide_pure_general(&f, BUDGET).unwrap().status;
                    assert_eq!(g, status(r, b, c), "r={r} b={b} c={c}");
                }
            }
        }
    }

    #[test]
    fn tiny_budget_gives_unknown() {
        let v = decide_pure_dim2(13, 77, 26, 1000).unwrap();
        assert_eq!(v.status, PurityStatus::Unknown);
        assert!(v.budget_hit && v.witness.is_none());
        let f = FVector::from_i64s(&[1, 12, 30, 20, 5]).unwrap();
        let v = decide_pure(&f, 100).unwrap();
        assert_eq!(v.status, PurityStatus::Unknown);
    }

    #[test]
    fn relabeling_does_not_change_verdicts() {
        // A pure witness stays a witness under any vertex permutation.
        let v = decide_pure_dim2(7, 15, 7, BUDGET).unwrap();
        let w = v.witness.unwrap();
        let perm = [3u32, 6, 0, 5, 1, 4, 2];
        let relabeled = FacetComplex::new(7, w.facets.iter().map(|f| f.iter().map(|&x| perm[x as usize]).collect()).collect()).unwrap();
        assert_eq!(super::super::complex_f_vector(&relabeled), FVector::from_i64s(&[1, 7, 15, 7]).unwrap());
    }
}
