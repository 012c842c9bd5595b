//! Oracles and generators shared by the integration tests. Nothing here
//! calls into the code paths it is used to check.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use vcfold::scalar::{self, Scalar};
use vcfold::{Point, SetSystem};

/// Largest shattered subset size, by trying every subset and counting
/// traces directly.
pub fn brute_vc(ground: usize, sets: &[u64]) -> usize {
    let mut best = 0;
    for y in 0u64..(1 << ground) {
        let width = y.count_ones() as usize;
        if width <= best {
            continue;
        }
        let traces: HashSet<u64> = sets.iter().map(|&s| s & y).collect();
        if traces.len() == 1 << width {
            best = width;
        }
    }
    best
}

pub fn random_system(rng: &mut ChaCha8Rng, max_n: usize, max_sets: usize) -> SetSystem {
    let n = rng.gen_range(1..=max_n);
    let count = rng.gen_range(1..=max_sets);
    let full = (1u64 << n) - 1;
    let masks: Vec<u64> = (0..count).map(|_| rng.gen::<u64>() & full).collect();
    SetSystem::from_masks(n, masks).unwrap()
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

pub fn random_positive_rational(rng: &mut ChaCha8Rng) -> Scalar {
    scalar::ratio(rng.gen_range(1..60), rng.gen_range(1..12))
}

pub fn random_int_points(rng: &mut ChaCha8Rng, count: usize, dim: usize, span: i64) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::with_capacity(count);
    while out.len() < count {
        let c: Vec<i64> = (0..dim).map(|_| rng.gen_range(-span..=span)).collect();
        let p = Point::from_ints(&c);
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// Exact feasibility of `{z ≥ 0 : A z = b}` by phase-one simplex with
/// Bland's rule.
pub fn lp_feasible(a: &[Vec<Scalar>], b: &[Scalar]) -> bool {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    // tableau rows: [A | I | b] with b >= 0
    let width = n + m + 1;
    let mut t: Vec<Vec<Scalar>> = (0..m)
        .map(|i| {
            let flip = b[i].is_negative();
            let mut row = vec![Scalar::zero(); width];
            for j in 0..n {
                row[j] = if flip {
                    -a[i][j].clone()
                } else {
                    a[i][j].clone()
                };
            }
            row[n + i] = Scalar::one();
            row[width - 1] = if flip { -b[i].clone() } else { b[i].clone() };
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();
    // objective: minimize sum of artificials; reduced costs over all columns
    loop {
        let mut cost = vec![Scalar::zero(); width];
        for j in n..n + m {
            cost[j] = Scalar::one();
        }
        for (i, &bv) in basis.iter().enumerate() {
            let cb = cost[bv].clone();
            if cb.is_zero() {
                continue;
            }
            for j in 0..width {
                let delta = &cb * &t[i][j];
                cost[j] -= delta;
            }
        }
        // cost[width-1] is minus the objective value
        let Some(enter) = (0..n + m).find(|&j| cost[j].is_negative()) else {
            return cost[width - 1].is_zero();
        };
        let mut leave: Option<(usize, Scalar)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let r = &t[i][width - 1] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => r < *lr || (r == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, r));
                }
            }
        }
        let Some((row, _)) = leave else {
            // unbounded below cannot happen for a sum of nonnegatives
            return false;
        };
        let piv = t[row][enter].clone();
        for j in 0..width {
            t[row][j] = &t[row][j] / &piv;
        }
        let prow = t[row].clone();
        for i in 0..m {
            if i != row && !t[i][enter].is_zero() {
                let f = t[i][enter].clone();
                for j in 0..width {
                    let delta = &f * &prow[j];
                    t[i][j] -= delta;
                }
            }
        }
        basis[row] = enter;
    }
}

/// Whether `conv(T)` and `conv(S)` intersect, as an exact LP in the convex
/// weights.
pub fn hulls_intersect(t: &[&Point], s: &[&Point]) -> bool {
    let d = t[0].dim();
    let cols = t.len() + s.len();
    let mut a = vec![vec![Scalar::zero(); cols]; d + 2];
    let mut b = vec![Scalar::zero(); d + 2];
    for (j, p) in t.iter().enumerate() {
        for i in 0..d {
            a[i][j] = p.coords[i].clone();
        }
        a[d][j] = Scalar::one();
    }
    for (j, p) in s.iter().enumerate() {
        for i in 0..d {
            a[i][t.len() + j] = -p.coords[i].clone();
        }
        a[d + 1][t.len() + j] = Scalar::one();
    }
    b[d] = Scalar::one();
    b[d + 1] = Scalar::one();
    lp_feasible(&a, &b)
}

/// Every subset of `points` cut out by a closed half-space, by testing each
/// dichotomy for hull disjointness.
pub fn lp_realizable(points: &[Point]) -> Vec<u64> {
    let n = points.len();
    let mut out = Vec::new();
    for mask in 0u64..(1 << n) {
        let t: Vec<&Point> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| &points[i])
            .collect();
        let s: Vec<&Point> = (0..n)
            .filter(|i| mask & (1 << i) == 0)
            .map(|i| &points[i])
            .collect();
        if t.is_empty() || s.is_empty() || !hulls_intersect(&t, &s) {
            out.push(mask);
        }
    }
    out
}

pub fn big(v: i64) -> BigInt {
    BigInt::from(v)
}
