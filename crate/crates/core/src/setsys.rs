//! Finite set systems over a ground set `{0, …, n-1}` with `n ≤ 64`.
//!
//! Member sets are stored as `u64` bitmasks, sorted ascending and
//! deduplicated, so two systems compare equal exactly when their families
//! are equal as sets of sets.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest ground set a [`SetSystem`] can hold.
pub const MAX_GROUND: usize = 64;

/// Bitmask with the low `n` bits set.
pub fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub fn mask_of(indices: &[usize]) -> u64 {
    indices.iter().fold(0, |m, &i| m | (1u64 << i))
}

pub fn indices_of(mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

/// Gathers the bits of `value` selected by `selector` into the low bits,
/// preserving order (software `pext`).
pub fn compress(value: u64, selector: u64) -> u64 {
    let mut out = 0u64;
    let mut bit = 0;
    let mut sel = selector;
    while sel != 0 {
        let low = sel & sel.wrapping_neg();
        if value & low != 0 {
            out |= 1 << bit;
        }
        bit += 1;
        sel &= sel - 1;
    }
    out
}

/// Iterator over all `m`-element subsets of `{0..n}` as bitmasks, in
/// increasing numeric order (Gosper's hack).
pub fn combinations(n: usize, m: usize) -> impl Iterator<Item = u64> {
    let limit: u128 = 1u128 << n;
    let mut next: Option<u128> = if m > n { None } else { Some((1u128 << m) - 1) };
    std::iter::from_fn(move || {
        let cur = next?;
        if cur >= limit {
            next = None;
            return None;
        }
        next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            Some((((r ^ cur) >> 2) / c) | r)
        };
        Some(cur as u64)
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetSystem {
    ground_size: usize,
    sets: Vec<u64>,
}

/// Result of [`SetSystem::vc_dim`]: the dimension and the lexicographically
/// smallest shattered set of that size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VcDimension {
    pub dim: usize,
    pub witness: Vec<usize>,
}

impl SetSystem {
    /// Builds a system from bitmasks; duplicates are dropped.
    pub fn from_masks(ground_size: usize, masks: impl IntoIterator<Item = u64>) -> Result<Self> {
        if ground_size > MAX_GROUND {
            return Err(Error::Guard {
                what: "ground_size",
                value: ground_size,
                limit: MAX_GROUND,
            });
        }
        let full = full_mask(ground_size);
        let mut sets: Vec<u64> = masks.into_iter().collect();
        if let Some(bad) = sets.iter().find(|&&s| s & !full != 0) {
            return Err(invalid(format!(
                "set {:?} is not a subset of a ground set of size {ground_size}",
                indices_of(*bad)
            )));
        }
        sets.sort_unstable();
        sets.dedup();
        Ok(SetSystem { ground_size, sets })
    }

    /// Builds a system from index lists, rejecting out-of-range and repeated
    /// indices. Also returns how many duplicate member sets were dropped.
    pub fn from_index_lists(ground_size: usize, lists: &[Vec<usize>]) -> Result<(Self, usize)> {
        let mut masks = Vec::with_capacity(lists.len());
        for (pos, list) in lists.iter().enumerate() {
            let mut mask = 0u64;
            for &i in list {
                if i >= ground_size {
                    return Err(invalid(format!(
                        "sets[{pos}] contains index {i}, ground_size is {ground_size}"
                    )));
                }
                if mask & (1 << i) != 0 {
                    return Err(invalid(format!("sets[{pos}] repeats index {i}")));
                }
                mask |= 1 << i;
            }
            masks.push(mask);
        }
        let before = masks.len();
        let sys = Self::from_masks(ground_size, masks)?;
        let dropped = before - sys.sets.len();
        Ok((sys, dropped))
    }

    pub fn powerset(ground_size: usize) -> Result<Self> {
        if ground_size > 24 {
            return Err(Error::Guard {
                what: "powerset ground_size",
                value: ground_size,
                limit: 24,
            });
        }
        Self::from_masks(ground_size, 0..(1u64 << ground_size))
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn sets(&self) -> &[u64] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn contains_set(&self, mask: u64) -> bool {
        self.sets.binary_search(&mask).is_ok()
    }

    pub fn index_lists(&self) -> Vec<Vec<usize>> {
        self.sets.iter().map(|&s| indices_of(s)).collect()
    }

    fn check_subset(&self, y: u64) -> Result<()> {
        if y & !full_mask(self.ground_size) != 0 {
            return Err(invalid(format!(
                "subset {:?} exceeds ground set of size {}",
                indices_of(y),
                self.ground_size
            )));
        }
        Ok(())
    }

    /// Projection onto `y`, re-indexed so the elements of `y` become
    /// `0..|y|` in increasing order.
    pub fn project(&self, y: u64) -> Result<SetSystem> {
        self.check_subset(y)?;
        let ground = y.count_ones() as usize;
        SetSystem::from_masks(ground, self.sets.iter().map(|&s| compress(s, y)))
    }

    /// Number of distinct traces `R ∩ y`.
    fn trace_count(&self, y: u64) -> usize {
        let width = y.count_ones();
        if width <= 20 {
            let mut seen = vec![false; 1 << width];
            let mut count = 0;
            for &s in &self.sets {
                let t = compress(s, y) as usize;
                if !seen[t] {
                    seen[t] = true;
                    count += 1;
                }
            }
            count
        } else {
            self.sets
                .iter()
                .map(|&s| s & y)
                .collect::<HashSet<_>>()
                .len()
        }
    }

    fn shatters_unchecked(&self, y: u64) -> bool {
        let width = y.count_ones();
        if width >= 64 || (self.sets.len() as u128) < (1u128 << width) {
            return false;
        }
        self.trace_count(y) == 1usize << width
    }

    pub fn shatters(&self, y: u64) -> Result<bool> {
        self.check_subset(y)?;
        Ok(self.shatters_unchecked(y))
    }

    /// VC-dimension with a witness. The search walks the subset lattice one
    /// level at a time, extending only shattered sets, and stops at the first
    /// level with no shattered set.
    pub fn vc_dim(&self) -> Result<VcDimension> {
        if self.sets.is_empty() {
            return Err(invalid("VC-dimension of an empty family is undefined"));
        }
        let n = self.ground_size;
        let mut level: Vec<u64> = vec![0];
        loop {
            let known: HashSet<u64> = level.iter().copied().collect();
            let candidates: Vec<u64> = level
                .iter()
                .flat_map(|&y| {
                    let start = if y == 0 {
                        0
                    } else {
                        64 - y.leading_zeros() as usize
                    };
                    (start..n).map(move |e| y | (1u64 << e))
                })
                .filter(|&z| {
                    // every facet of z must already be shattered
                    let mut rest = z;
                    while rest != 0 {
                        let low = rest & rest.wrapping_neg();
                        if !known.contains(&(z & !low)) {
                            return false;
                        }
                        rest &= rest - 1;
                    }
                    true
                })
                .collect();
            let next: Vec<u64> = candidates
                .into_par_iter()
                .filter(|&z| self.shatters_unchecked(z))
                .collect();
            if next.is_empty() {
                let witness = level[0];
                return Ok(VcDimension {
                    dim: witness.count_ones() as usize,
                    witness: indices_of(witness),
                });
            }
            level = next;
        }
    }

    /// All unions of `k` not necessarily distinct members. Computed as a
    /// closure: `k - 1` rounds of joining the current family with the base.
    pub fn k_fold_union(&self, k: usize) -> Result<SetSystem> {
        self.k_fold(k, |a, b| a | b)
    }

    /// All intersections of `k` not necessarily distinct members.
    pub fn k_fold_intersection(&self, k: usize) -> Result<SetSystem> {
        self.k_fold(k, |a, b| a & b)
    }

    fn k_fold(&self, k: usize, op: impl Fn(u64, u64) -> u64) -> Result<SetSystem> {
        if k == 0 {
            return Err(invalid("k must be at least 1"));
        }
        let mut family: HashSet<u64> = self.sets.iter().copied().collect();
        let mut frontier: Vec<u64> = self.sets.clone();
        for _ in 1..k {
            let mut fresh = Vec::new();
            for &a in &frontier {
                for &b in &self.sets {
                    let c = op(a, b);
                    if family.insert(c) {
                        fresh.push(c);
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            frontier = fresh;
        }
        SetSystem::from_masks(self.ground_size, family)
    }

    pub fn complement(&self) -> SetSystem {
        let full = full_mask(self.ground_size);
        let mut sets: Vec<u64> = self.sets.iter().map(|&s| full & !s).collect();
        sets.sort_unstable();
        SetSystem {
            ground_size: self.ground_size,
            sets,
        }
    }

    /// Largest number of distinct traces on any `m`-element subset.
    pub fn growth_function(&self, m: usize) -> Result<usize> {
        if m > self.ground_size {
            return Err(invalid(format!(
                "m = {m} exceeds ground_size {}",
                self.ground_size
            )));
        }
        Ok(combinations(self.ground_size, m)
            .map(|y| self.trace_count(y))
            .max()
            .unwrap_or(0))
    }
}

/// On-disk form: `{"ground_size": n, "sets": [[i, …], …]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SetSystemFile {
    pub ground_size: usize,
    pub sets: Vec<Vec<usize>>,
}

impl From<&SetSystem> for SetSystemFile {
    fn from(s: &SetSystem) -> Self {
        SetSystemFile {
            ground_size: s.ground_size,
            sets: s.index_lists(),
        }
    }
}

impl SetSystemFile {
    /// Validates and canonicalizes; returns the number of duplicate sets
    /// that were dropped.
    pub fn into_system(self) -> Result<(SetSystem, usize)> {
        SetSystem::from_index_lists(self.ground_size, &self.sets)
    }
}
