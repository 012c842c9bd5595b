//! Box gadgets: families of axis-parallel boxes such that, for every
//! sub-family `S`, a few points hit every box outside `S` while missing
//! every box in `S`.
//!
//! A gadget is a certificate. [`BoxGadget::verify`] checks it exhaustively
//! by solving an exact set-cover problem per sub-family, and
//! [`search`] looks for new certificates by seeded local search.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, invalid, Error, Result};
use crate::geometry::{AxisBox, Point};
use crate::scalar::{self, Scalar};
use crate::setsys::full_mask;

/// Hard limit on the number of boxes for exhaustive verification.
pub const VERIFY_LIMIT: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GadgetCertificate", into = "GadgetCertificate")]
pub struct BoxGadget {
    n: usize,
    dim: usize,
    boxes: Vec<AxisBox>,
    witnesses: BTreeMap<u64, Vec<Point>>,
}

/// On-disk form of a gadget. Witness keys are subset bitmasks in decimal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetCertificate {
    pub n: usize,
    pub dim: usize,
    pub boxes: Vec<AxisBox>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub witnesses: BTreeMap<u64, Vec<Point>>,
}

impl TryFrom<GadgetCertificate> for BoxGadget {
    type Error = Error;
    fn try_from(c: GadgetCertificate) -> Result<Self> {
        let mut g = BoxGadget::new(c.n, c.dim, c.boxes)?;
        let full = full_mask(g.boxes.len());
        for (&mask, q) in &c.witnesses {
            if mask & !full != 0 {
                return Err(invalid(format!("witness key {mask} names a missing box")));
            }
            if q.len() > g.cover_limit() {
                return Err(invalid(format!(
                    "witness {mask} has {} points, limit is {}",
                    q.len(),
                    g.cover_limit()
                )));
            }
            for p in q {
                check_dim(g.dim, p.dim())?;
            }
        }
        g.witnesses = c.witnesses;
        Ok(g)
    }
}

impl From<BoxGadget> for GadgetCertificate {
    fn from(g: BoxGadget) -> Self {
        GadgetCertificate {
            n: g.n,
            dim: g.dim,
            boxes: g.boxes,
            witnesses: g.witnesses,
        }
    }
}

/// Outcome of exhaustive verification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetReport {
    pub ok: bool,
    pub boxes: usize,
    pub subsets_checked: usize,
    /// Failing sub-families as bitmasks, ascending.
    pub failing_subsets: Vec<u64>,
    /// Largest witness actually needed.
    pub max_witness_size: usize,
}

/// The nominal family size `⌊dim/2⌋ (n+3) 2^{n-2}`.
pub fn nominal_size(n: usize, dim: usize) -> usize {
    // (n+3) 2^{n-2} is an integer for n >= 2
    (dim / 2) * (n + 3) * (1usize << (n - 2))
}

impl BoxGadget {
    pub fn new(n: usize, dim: usize, boxes: Vec<AxisBox>) -> Result<Self> {
        if n < 2 {
            return Err(invalid("gadget n must be at least 2"));
        }
        if n > 20 {
            return Err(invalid("gadget n must be at most 20"));
        }
        if dim < 2 {
            return Err(invalid("gadget dim must be at least 2"));
        }
        if boxes.len() > 64 {
            return Err(Error::Guard {
                what: "boxes",
                value: boxes.len(),
                limit: 64,
            });
        }
        for (i, b) in boxes.iter().enumerate() {
            check_dim(dim, b.dim())?;
            if !b.is_strictly_positive() {
                return Err(invalid(format!("box {i} has a nonpositive coordinate")));
            }
        }
        Ok(BoxGadget {
            n,
            dim,
            boxes,
            witnesses: BTreeMap::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn boxes(&self) -> &[AxisBox] {
        &self.boxes
    }

    pub fn witnesses(&self) -> &BTreeMap<u64, Vec<Point>> {
        &self.witnesses
    }

    /// Maximum witness size `2^{n-1}`.
    pub fn cover_limit(&self) -> usize {
        1 << (self.n - 1)
    }

    /// One point per cell of the arrangement of box faces: per axis, half
    /// the smallest face value, the midpoints between consecutive face
    /// values, and the largest plus one; then the cross product.
    pub fn candidate_points(&self) -> Vec<Point> {
        let axes: Vec<Vec<Scalar>> = (0..self.dim)
            .map(|axis| {
                let mut vals: Vec<Scalar> = self
                    .boxes
                    .iter()
                    .flat_map(|b| [b.lo()[axis].clone(), b.hi()[axis].clone()])
                    .collect();
                vals.sort();
                vals.dedup();
                axis_menu(&vals)
            })
            .collect();
        let mut out = vec![Vec::with_capacity(self.dim)];
        for menu in &axes {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    menu.iter().map(move |v| {
                        let mut p = prefix.clone();
                        p.push(v.clone());
                        p
                    })
                })
                .collect();
        }
        out.into_iter()
            .map(Point::new)
            .filter(Point::is_strictly_positive)
            .collect()
    }

    fn hit_mask(&self, p: &Point) -> u64 {
        self.boxes
            .iter()
            .enumerate()
            .filter(|(_, b)| b.contains_unchecked(p))
            .fold(0, |m, (i, _)| m | (1 << i))
    }

    fn menu(&self) -> Vec<(Point, u64)> {
        self.candidate_points()
            .into_iter()
            .map(|p| {
                let m = self.hit_mask(&p);
                (p, m)
            })
            .collect()
    }

    /// A point set of size at most `2^{n-1}` missing every box in `excluded`
    /// and hitting every other box, or `None` when no such set exists among
    /// the candidate points.
    pub fn witness_for(&self, excluded: u64) -> Result<Option<Vec<Point>>> {
        if excluded & !full_mask(self.boxes.len()) != 0 {
            return Err(invalid("excluded subset names a missing box"));
        }
        Ok(witness_from_menu(
            &self.menu(),
            self.boxes.len(),
            excluded,
            self.cover_limit(),
        ))
    }

    /// Checks a witness directly against the boxes.
    pub fn check_witness(&self, excluded: u64, q: &[Point]) -> bool {
        if q.len() > self.cover_limit() || q.iter().any(|p| p.dim() != self.dim) {
            return false;
        }
        self.boxes.iter().enumerate().all(|(i, b)| {
            let hit = q.iter().any(|p| b.contains_unchecked(p));
            if excluded & (1 << i) != 0 {
                !hit
            } else {
                hit
            }
        })
    }

    fn solve_all(&self) -> Result<Vec<(u64, Option<Vec<Point>>)>> {
        let count = self.boxes.len();
        if count > VERIFY_LIMIT {
            return Err(Error::Guard {
                what: "boxes",
                value: count,
                limit: VERIFY_LIMIT,
            });
        }
        let menu = self.menu();
        let limit = self.cover_limit();
        Ok((0..(1u64 << count))
            .into_par_iter()
            .map(|s| (s, witness_from_menu(&menu, count, s, limit)))
            .collect())
    }

    /// Solves every sub-family.
    pub fn verify(&self) -> Result<GadgetReport> {
        Ok(report_of(self.boxes.len(), &self.solve_all()?))
    }

    /// Like [`verify`](Self::verify), and on success stores every witness.
    pub fn verify_and_cache(&mut self) -> Result<GadgetReport> {
        let solved = self.solve_all()?;
        let report = report_of(self.boxes.len(), &solved);
        if report.ok {
            self.witnesses = solved
                .into_iter()
                .map(|(s, q)| (s, q.expect("all feasible")))
                .collect();
        }
        Ok(report)
    }

    /// Cached witness when present and valid, otherwise a fresh solve.
    pub fn witness_cached(&self, excluded: u64) -> Result<Option<Vec<Point>>> {
        match self.witnesses.get(&excluded) {
            Some(q) if self.check_witness(excluded, q) => Ok(Some(q.clone())),
            _ => self.witness_for(excluded),
        }
    }

    pub fn clear_witnesses(&mut self) {
        self.witnesses.clear();
    }

    pub fn to_certificate(&self) -> GadgetCertificate {
        self.clone().into()
    }
}

fn report_of(count: usize, solved: &[(u64, Option<Vec<Point>>)]) -> GadgetReport {
    let failing: Vec<u64> = solved
        .iter()
        .filter(|(_, q)| q.is_none())
        .map(|(s, _)| *s)
        .collect();
    GadgetReport {
        ok: failing.is_empty(),
        boxes: count,
        subsets_checked: solved.len(),
        max_witness_size: solved
            .iter()
            .filter_map(|(_, q)| q.as_ref().map(Vec::len))
            .max()
            .unwrap_or(0),
        failing_subsets: failing,
    }
}

fn axis_menu(vals: &[Scalar]) -> Vec<Scalar> {
    let Some(first) = vals.first() else {
        return vec![scalar::int(1)];
    };
    let mut menu = vec![first * scalar::half()];
    for w in vals.windows(2) {
        menu.push((&w[0] + &w[1]) * scalar::half());
    }
    menu.push(vals.last().unwrap() + scalar::int(1));
    menu
}

fn witness_from_menu(
    menu: &[(Point, u64)],
    count: usize,
    excluded: u64,
    limit: usize,
) -> Option<Vec<Point>> {
    let need = full_mask(count) & !excluded;
    let avoiding: Vec<&(Point, u64)> = menu.iter().filter(|(_, m)| m & excluded == 0).collect();
    if need == 0 {
        return avoiding.first().map(|(p, _)| vec![p.clone()]);
    }
    // one representative per distinct useful hit pattern, dominated ones dropped
    let mut options: Vec<(u64, usize)> = Vec::new();
    for (idx, (_, m)) in avoiding.iter().enumerate() {
        let useful = m & need;
        if useful != 0 && !options.iter().any(|&(o, _)| o == useful) {
            options.push((useful, idx));
        }
    }
    let options: Vec<(u64, usize)> = options
        .iter()
        .copied()
        .filter(|&(m, _)| !options.iter().any(|&(o, _)| o != m && o & m == m))
        .collect();
    for depth in 1..=limit {
        let mut chosen = Vec::with_capacity(depth);
        if cover(&options, need, depth, &mut chosen) {
            return Some(
                chosen
                    .into_iter()
                    .map(|i| avoiding[options[i].1].0.clone())
                    .collect(),
            );
        }
    }
    None
}

/// Depth-bounded exact cover search: branch on the candidates covering the
/// uncovered box with fewest options.
fn cover(options: &[(u64, usize)], remaining: u64, depth: usize, chosen: &mut Vec<usize>) -> bool {
    if remaining == 0 {
        return true;
    }
    if depth == 0 {
        return false;
    }
    let best_gain = options
        .iter()
        .map(|&(m, _)| (m & remaining).count_ones())
        .max()
        .unwrap_or(0);
    if (best_gain as usize) * depth < remaining.count_ones() as usize {
        return false;
    }
    let mut pivot = None;
    let mut fewest = usize::MAX;
    let mut bits = remaining;
    while bits != 0 {
        let low = bits & bits.wrapping_neg();
        let c = options.iter().filter(|&&(m, _)| m & low != 0).count();
        if c < fewest {
            fewest = c;
            pivot = Some(low);
        }
        bits &= bits - 1;
    }
    let pivot = pivot.expect("remaining is nonzero");
    for (i, &(m, _)) in options.iter().enumerate() {
        if m & pivot == 0 {
            continue;
        }
        chosen.push(i);
        if cover(options, remaining & !m, depth - 1, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Outcome of [`search`].
#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Found {
        gadget: BoxGadget,
        evaluations: usize,
    },
    Exhausted {
        evaluations: usize,
        best_score: usize,
        total: usize,
    },
}

/// Seeded local search for a gadget of the nominal size. Each evaluation
/// scores a box family by how many sub-families admit a witness; `budget`
/// caps the number of evaluations. Deterministic for a fixed seed.
pub fn search(n: usize, dim: usize, seed: u64, budget: usize) -> Result<SearchOutcome> {
    search_sized(n, dim, nominal_size(n, dim), seed, budget)
}

/// [`search`] with an explicit family size.
pub fn search_sized(
    n: usize,
    dim: usize,
    size: usize,
    seed: u64,
    budget: usize,
) -> Result<SearchOutcome> {
    if size > VERIFY_LIMIT {
        return Err(Error::Guard {
            what: "boxes",
            value: size,
            limit: VERIFY_LIMIT,
        });
    }
    // validates n and dim
    BoxGadget::new(n, dim, Vec::new())?;
    let total = 1usize << size;
    let grid = 2 * size as i64 + 2;
    let limit = 1usize << (n - 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut evaluations = 0;
    let mut best_overall = 0;
    let stall_limit = 60 * size;

    while evaluations < budget {
        let mut current = random_family(&mut rng, size, dim, grid);
        let mut score = family_score(&current, dim, limit);
        evaluations += 1;
        let mut stall = 0;
        while evaluations < budget && stall < stall_limit {
            if score == total {
                break;
            }
            let mut next = current.clone();
            mutate(&mut rng, &mut next, grid);
            let s = family_score(&next, dim, limit);
            evaluations += 1;
            if s > score {
                stall = 0;
            } else {
                stall += 1;
            }
            if s >= score {
                current = next;
                score = s;
            }
        }
        best_overall = best_overall.max(score);
        if score == total {
            let boxes = to_boxes(&current, dim)?;
            let mut gadget = BoxGadget::new(n, dim, boxes)?;
            let report = gadget.verify_and_cache()?;
            if report.ok {
                return Ok(SearchOutcome::Found {
                    gadget,
                    evaluations,
                });
            }
        }
    }
    Ok(SearchOutcome::Exhausted {
        evaluations,
        best_score: best_overall,
        total,
    })
}

/// Integer box family: per box, per axis, `(lo, hi)` with `1 ≤ lo < hi ≤ grid`.
type Family = Vec<Vec<(i64, i64)>>;

fn random_family(rng: &mut ChaCha8Rng, size: usize, dim: usize, grid: i64) -> Family {
    (0..size)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    let a = rng.gen_range(1..grid);
                    let b = rng.gen_range(a + 1..=grid);
                    (a, b)
                })
                .collect()
        })
        .collect()
}

fn mutate(rng: &mut ChaCha8Rng, fam: &mut Family, grid: i64) {
    let b = rng.gen_range(0..fam.len());
    let axis = rng.gen_range(0..fam[b].len());
    let (lo, hi) = fam[b][axis];
    let step = if rng.gen_bool(0.5) { 1 } else { -1 };
    let (nlo, nhi) = match rng.gen_range(0..4) {
        0 => (lo + step, hi),
        1 => (lo, hi + step),
        2 => (lo + step, hi + step),
        _ => {
            let a = rng.gen_range(1..grid);
            (a, rng.gen_range(a + 1..=grid))
        }
    };
    if 1 <= nlo && nlo < nhi && nhi <= grid {
        fam[b][axis] = (nlo, nhi);
    }
}

fn to_boxes(fam: &Family, dim: usize) -> Result<Vec<AxisBox>> {
    fam.iter()
        .map(|axes| {
            let lo: Vec<i64> = axes.iter().map(|a| a.0).collect();
            let hi: Vec<i64> = axes.iter().map(|a| a.1).collect();
            debug_assert_eq!(lo.len(), dim);
            AxisBox::from_ints(&lo, &hi)
        })
        .collect()
}

/// Number of sub-families with a witness. Integer coordinates are doubled
/// so that cell representatives stay integral.
fn family_score(fam: &Family, dim: usize, limit: usize) -> usize {
    let count = fam.len();
    let axes: Vec<Vec<i64>> = (0..dim)
        .map(|axis| {
            let mut vals: Vec<i64> = fam
                .iter()
                .flat_map(|b| [2 * b[axis].0, 2 * b[axis].1])
                .collect();
            vals.sort_unstable();
            vals.dedup();
            let mut menu = vec![vals[0] - 1];
            menu.extend(vals.windows(2).map(|w| (w[0] + w[1]) / 2));
            menu.push(vals[vals.len() - 1] + 1);
            menu
        })
        .collect();
    let mut masks: Vec<u64> = vec![full_mask(count)];
    for (axis, menu) in axes.iter().enumerate() {
        let mut next = Vec::with_capacity(masks.len() * menu.len());
        for &m in &masks {
            for &v in menu {
                let mut keep = m;
                for (i, b) in fam.iter().enumerate() {
                    let (lo, hi) = b[axis];
                    if !(2 * lo <= v && v <= 2 * hi) {
                        keep &= !(1 << i);
                    }
                }
                next.push(keep);
            }
        }
        masks = next;
    }
    masks.sort_unstable();
    masks.dedup();
    (0..(1u64 << count))
        .into_par_iter()
        .filter(|&s| {
            let need = full_mask(count) & !s;
            if need == 0 {
                return true;
            }
            let mut options: Vec<(u64, usize)> = Vec::new();
            for &m in &masks {
                if m & s == 0 && m & need != 0 && !options.iter().any(|&(o, _)| o == m & need) {
                    options.push((m & need, 0));
                }
            }
            let options: Vec<(u64, usize)> = options
                .iter()
                .copied()
                .filter(|&(m, _)| !options.iter().any(|&(o, _)| o != m && o & m == m))
                .collect();
            let mut chosen = Vec::new();
            cover(&options, need, limit, &mut chosen)
        })
        .count()
}
