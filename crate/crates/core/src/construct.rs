//! The two lower-bound pipelines.
//!
//! *Union pipeline.* Boxes of a verified gadget in `R^{d/2}` are lifted to
//! points of `R^d` by interleaving lower corners with reciprocals of upper
//! corners; a query point then becomes an anchored box, and the membership
//! pattern of lifted points in that box equals the membership pattern of
//! the query point in the original boxes. After rescaling every coordinate
//! to powers of `d+1`, each anchored box is replaced by the restricted
//! half-space `Σ x_i/b_i ≤ τ` with `τ ∈ (d, d+1)`, which has the same
//! intersection with the point set. Every subset of the points is then the
//! union of at most `k` such half-spaces.
//!
//! *Simplex pipeline.* Each point `p` is dualized to the hyperplane
//! `x_d = p_1 x_1 + … + p_d`, each witness half-space `H` to the point
//! `D(H)`, and the open simplex spanned by the `D(H)` plus an apex
//! `(0, …, 0, t)` with `0 < t < min p_d` meets exactly the hyperplanes of
//! the chosen subset.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, invalid, Error, Result};
use crate::gadget::BoxGadget;
use crate::geometry::{
    dual_halfspace_to_point, dual_point_to_hyperplane, induced_system_hyperplanes_in_simplices,
    induced_system_points_in_halfspaces, AxisBox, DualHyperplane, OpenSimplex, Point, PointSetFile,
    RestrictedHalfspace,
};
use crate::scalar::{self, Scalar};
use crate::setsys::{full_mask, indices_of, mask_of};

/// Hard limit on `|P|` for exhaustive verification.
pub const EXHAUSTIVE_LIMIT: usize = 24;

/// `(x_1, 1/x_1', x_2, 1/x_2', …)` for `B = [x_1, x_1'] × …`.
pub fn lift_box(b: &AxisBox) -> Result<Point> {
    if !b.is_strictly_positive() {
        return Err(invalid("lifting needs strictly positive box coordinates"));
    }
    let coords = b
        .lo()
        .iter()
        .zip(b.hi())
        .flat_map(|(lo, hi)| [lo.clone(), hi.recip()])
        .collect();
    Ok(Point::new(coords))
}

/// `[0, q_1] × [0, 1/q_1] × … × [0, q_m] × [0, 1/q_m]`.
pub fn anchored_box_of(q: &Point) -> Result<AxisBox> {
    if !q.is_strictly_positive() {
        return Err(invalid("anchored box needs a strictly positive point"));
    }
    let hi = q
        .coords
        .iter()
        .flat_map(|x| [x.clone(), x.recip()])
        .collect();
    AxisBox::anchored(hi)
}

/// One coordinate's value table: original values in increasing order, each
/// paired with its rescaled image `(d+1)^j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaEntry {
    #[serde(with = "scalar::serde_str")]
    pub original: Scalar,
    #[serde(with = "scalar::serde_str")]
    pub rescaled: Scalar,
}

pub type AlphaTables = Vec<Vec<AlphaEntry>>;

fn power(base: i64, exp: usize) -> Scalar {
    let mut acc = Scalar::one();
    let b = scalar::int(base);
    for _ in 0..exp {
        acc *= &b;
    }
    acc
}

/// Per coordinate, replaces the `j`-th smallest distinct value (1-based)
/// by `(d+1)^j`.
pub fn rescale(points: &[Point], d: usize) -> Result<(Vec<Point>, AlphaTables)> {
    for p in points {
        check_dim(d, p.dim())?;
        if !p.is_strictly_positive() {
            return Err(invalid("rescaling needs strictly positive coordinates"));
        }
    }
    let base = d as i64 + 1;
    let tables: AlphaTables = (0..d)
        .map(|i| {
            let mut vals: Vec<Scalar> = points.iter().map(|p| p.coords[i].clone()).collect();
            vals.sort();
            vals.dedup();
            vals.into_iter()
                .enumerate()
                .map(|(j, original)| AlphaEntry {
                    original,
                    rescaled: power(base, j + 1),
                })
                .collect()
        })
        .collect();
    let scaled = points
        .iter()
        .map(|p| {
            Point::new(
                p.coords
                    .iter()
                    .zip(&tables)
                    .map(|(x, table)| {
                        let j = table
                            .binary_search_by(|e| e.original.cmp(x))
                            .expect("value is in its own table");
                        table[j].rescaled.clone()
                    })
                    .collect(),
            )
        })
        .collect();
    Ok((scaled, tables))
}

/// Moves each upper corner of an anchored box (given in original
/// coordinates) to the image of the largest original value not above it,
/// or to `1` when there is none.
pub fn snap_anchored_box(b: &AxisBox, alpha: &AlphaTables) -> Result<AxisBox> {
    check_dim(alpha.len(), b.dim())?;
    if !b.is_anchored() {
        return Err(invalid("snapping expects an anchored box"));
    }
    let hi = b
        .hi()
        .iter()
        .zip(alpha)
        .map(|(h, table)| {
            let below = table.partition_point(|e| &e.original <= h);
            if below == 0 {
                Scalar::one()
            } else {
                table[below - 1].rescaled.clone()
            }
        })
        .collect();
    AxisBox::anchored(hi)
}

/// The default threshold `d + 1/2`.
pub fn default_tau(d: usize) -> Scalar {
    scalar::int(d as i64) + scalar::half()
}

/// `Σ x_i / hi_i ≤ d + 1/2`.
pub fn box_to_halfspace(b: &AxisBox, d: usize) -> Result<RestrictedHalfspace> {
    box_to_halfspace_with_tau(b, d, default_tau(d))
}

pub fn box_to_halfspace_with_tau(
    b: &AxisBox,
    d: usize,
    tau: Scalar,
) -> Result<RestrictedHalfspace> {
    check_dim(d, b.dim())?;
    let low = scalar::int(d as i64);
    if tau <= low || tau >= &low + scalar::int(1) {
        return Err(invalid("tau must lie strictly between d and d+1"));
    }
    RestrictedHalfspace::new(b.hi().to_vec(), tau)
}

/// `⌊log2 k⌋ + 1`.
pub fn gadget_order(k: usize) -> usize {
    (usize::BITS - k.leading_zeros()) as usize
}

/// Union-pipeline instance: lifted and rescaled gadget boxes. Point `i`
/// comes from box `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "InstanceFile", into = "InstanceFile")]
pub struct Theorem1Instance {
    pub d: usize,
    pub k: usize,
    pub gadget: BoxGadget,
    pub points: Vec<Point>,
    pub alpha: AlphaTables,
}

/// On-disk form of [`Theorem1Instance`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceFile {
    pub d: usize,
    pub k: usize,
    pub gadget: BoxGadget,
    pub points: PointSetFile,
    pub alpha: AlphaTables,
}

impl TryFrom<InstanceFile> for Theorem1Instance {
    type Error = Error;
    fn try_from(f: InstanceFile) -> Result<Self> {
        f.points.validate()?;
        check_dim(f.d, f.points.dim)?;
        let inst = Theorem1Instance {
            d: f.d,
            k: f.k,
            gadget: f.gadget,
            points: f.points.points,
            alpha: f.alpha,
        };
        inst.validate()?;
        Ok(inst)
    }
}

impl From<Theorem1Instance> for InstanceFile {
    fn from(i: Theorem1Instance) -> Self {
        InstanceFile {
            d: i.d,
            k: i.k,
            gadget: i.gadget,
            points: PointSetFile::new(i.d, i.points),
            alpha: i.alpha,
        }
    }
}

fn check_parameters(d: usize, k: usize, gadget: &BoxGadget) -> Result<()> {
    if d < 4 || !d.is_multiple_of(2) {
        return Err(invalid(format!("d must be even and at least 4, got {d}")));
    }
    if k < 2 {
        return Err(invalid(format!("k must be at least 2, got {k}")));
    }
    if gadget.dim() != d / 2 {
        return Err(invalid(format!(
            "gadget dim {} does not match d/2 = {}",
            gadget.dim(),
            d / 2
        )));
    }
    if gadget.n() != gadget_order(k) {
        return Err(invalid(format!(
            "gadget n {} does not match floor(log2 k)+1 = {}",
            gadget.n(),
            gadget_order(k)
        )));
    }
    Ok(())
}

/// Checks every cached witness, re-verifying from scratch when the cache is
/// incomplete. Returns the gadget with a full cache.
fn ensure_verified(mut gadget: BoxGadget) -> Result<BoxGadget> {
    let total = 1u64 << gadget.boxes().len();
    let cached_ok = gadget.witnesses().len() as u64 == total
        && gadget
            .witnesses()
            .iter()
            .all(|(&s, q)| gadget.check_witness(s, q));
    if cached_ok {
        return Ok(gadget);
    }
    gadget.clear_witnesses();
    let report = gadget.verify_and_cache()?;
    if !report.ok {
        return Err(invalid(format!(
            "gadget is not verified: {} failing subsets, first {:?}",
            report.failing_subsets.len(),
            indices_of(report.failing_subsets[0])
        )));
    }
    Ok(gadget)
}

pub fn build_theorem1(d: usize, k: usize, gadget: BoxGadget) -> Result<Theorem1Instance> {
    check_parameters(d, k, &gadget)?;
    let gadget = ensure_verified(gadget)?;
    let lifted: Vec<Point> = gadget.boxes().iter().map(lift_box).collect::<Result<_>>()?;
    let (points, alpha) = rescale(&lifted, d)?;
    let inst = Theorem1Instance {
        d,
        k,
        gadget,
        points,
        alpha,
    };
    inst.validate()?;
    Ok(inst)
}

/// Which subsets a verifier visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum VerifyMode {
    Exhaustive,
    Sample { count: usize, seed: u64 },
}

impl VerifyMode {
    fn subsets(self, n: usize) -> Result<Vec<u64>> {
        match self {
            VerifyMode::Exhaustive => {
                if n > EXHAUSTIVE_LIMIT {
                    return Err(Error::Guard {
                        what: "points",
                        value: n,
                        limit: EXHAUSTIVE_LIMIT,
                    });
                }
                Ok((0..(1u64 << n)).collect())
            }
            VerifyMode::Sample { count, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let full = full_mask(n);
                let mut picks: Vec<u64> = (0..count).map(|_| rng.gen::<u64>() & full).collect();
                picks.sort_unstable();
                picks.dedup();
                Ok(picks)
            }
        }
    }
}

/// Verification outcome for either pipeline. Failing subsets are listed as
/// index lists in ascending bitmask order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub points: usize,
    pub k: usize,
    pub subsets_checked: usize,
    pub shattered: bool,
    pub failing_subsets: Vec<Vec<usize>>,
    /// Largest witness size: half-spaces for the union pipeline, simplex
    /// dimension for the simplex pipeline.
    pub max_witness_size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero_sign_evaluations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vc_dim: Option<usize>,
}

impl Theorem1Instance {
    pub fn validate(&self) -> Result<()> {
        if self.points.len() != self.gadget.boxes().len() {
            return Err(invalid(format!(
                "{} points for {} boxes",
                self.points.len(),
                self.gadget.boxes().len()
            )));
        }
        if self.alpha.len() != self.d {
            return Err(invalid("alpha needs one table per coordinate"));
        }
        for (i, p) in self.points.iter().enumerate() {
            check_dim(self.d, p.dim())?;
            if !p.is_strictly_positive() {
                return Err(invalid(format!("point {i} has a nonpositive coordinate")));
            }
            if self.points[..i].contains(p) {
                return Err(invalid(format!("point {i} is a duplicate")));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `ρ(q)`: anchored box of `q`, snapped, turned into a half-space.
    pub fn halfspace_of(&self, q: &Point, tau: Scalar) -> Result<RestrictedHalfspace> {
        let anchored = anchored_box_of(q)?;
        let snapped = snap_anchored_box(&anchored, &self.alpha)?;
        box_to_halfspace_with_tau(&snapped, self.d, tau)
    }

    /// At most `k` half-spaces whose union meets the points exactly in
    /// `subset`.
    pub fn union_witness(&self, subset: u64) -> Result<Vec<RestrictedHalfspace>> {
        self.union_witness_boxes(subset)
            .and_then(|boxes| boxes.iter().map(|b| box_to_halfspace(b, self.d)).collect())
    }

    /// The snapped anchored boxes behind [`union_witness`](Self::union_witness),
    /// with duplicates removed.
    pub fn union_witness_boxes(&self, subset: u64) -> Result<Vec<AxisBox>> {
        let full = full_mask(self.len());
        if subset & !full != 0 {
            return Err(invalid("subset names a missing point"));
        }
        let excluded = full & !subset;
        let q = self.gadget.witness_cached(excluded)?.ok_or_else(|| {
            Error::ConstructionFailure(format!(
                "gadget has no witness for excluded boxes {:?}",
                indices_of(excluded)
            ))
        })?;
        let mut boxes: Vec<AxisBox> = Vec::with_capacity(q.len());
        for point in &q {
            let b = snap_anchored_box(&anchored_box_of(point)?, &self.alpha)?;
            if !boxes.contains(&b) {
                boxes.push(b);
            }
        }
        Ok(boxes)
    }

    fn check_union(&self, subset: u64) -> (bool, usize) {
        match self.union_witness(subset) {
            Ok(w) => {
                let got = induced_system_points_in_halfspaces(&self.points, &w)
                    .map(|sys| sys.sets().iter().fold(0, |acc, &s| acc | s));
                (got == Ok(subset) && w.len() <= self.k, w.len())
            }
            Err(_) => (false, 0),
        }
    }

    pub fn verify(&self, mode: VerifyMode) -> Result<TheoremReport> {
        self.verify_with(mode, false)
    }

    /// Verifies every selected subset; with `with_vc_dim`, also computes the
    /// VC-dimension of the `k`-fold union of all witness half-spaces.
    pub fn verify_with(&self, mode: VerifyMode, with_vc_dim: bool) -> Result<TheoremReport> {
        self.validate()?;
        let subsets = mode.subsets(self.len())?;
        let results: Vec<(u64, bool, usize)> = subsets
            .par_iter()
            .map(|&s| {
                let (ok, size) = self.check_union(s);
                (s, ok, size)
            })
            .collect();
        let failing: Vec<Vec<usize>> = results
            .iter()
            .filter(|r| !r.1)
            .map(|r| indices_of(r.0))
            .collect();
        let vc_dim = if with_vc_dim {
            let family: Vec<RestrictedHalfspace> = subsets
                .iter()
                .filter_map(|&s| self.union_witness(s).ok())
                .flatten()
                .collect();
            let base = induced_system_points_in_halfspaces(&self.points, &family)?;
            let folded = base.k_fold_union(self.k)?;
            Some(folded.vc_dim()?.dim)
        } else {
            None
        };
        Ok(TheoremReport {
            points: self.len(),
            k: self.k,
            subsets_checked: results.len(),
            shattered: failing.is_empty(),
            failing_subsets: failing,
            max_witness_size: results.iter().map(|r| r.2).max().unwrap_or(0),
            zero_sign_evaluations: None,
            vc_dim,
        })
    }
}

/// Simplex-pipeline instance: the dual hyperplanes of a union instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Theorem2File", into = "Theorem2File")]
pub struct Theorem2Instance {
    pub base: Theorem1Instance,
    pub hyperplanes: Vec<DualHyperplane>,
    pub k: usize,
}

#[derive(Serialize, Deserialize)]
struct Theorem2File {
    k: usize,
    base: Theorem1Instance,
    hyperplanes: Vec<DualHyperplane>,
}

impl TryFrom<Theorem2File> for Theorem2Instance {
    type Error = Error;
    fn try_from(f: Theorem2File) -> Result<Self> {
        if f.hyperplanes.len() != f.base.len() {
            return Err(invalid("one hyperplane per point required"));
        }
        for h in &f.hyperplanes {
            check_dim(f.base.d, h.dim())?;
        }
        Ok(Theorem2Instance {
            base: f.base,
            hyperplanes: f.hyperplanes,
            k: f.k,
        })
    }
}

impl From<Theorem2Instance> for Theorem2File {
    fn from(i: Theorem2Instance) -> Self {
        Theorem2File {
            k: i.k,
            base: i.base,
            hyperplanes: i.hyperplanes,
        }
    }
}

pub fn build_theorem2(base: Theorem1Instance, k: usize) -> Result<Theorem2Instance> {
    if k != base.k {
        return Err(invalid(format!(
            "k = {k} differs from the base instance's k = {}",
            base.k
        )));
    }
    base.validate()?;
    let hyperplanes = base
        .points
        .iter()
        .map(dual_point_to_hyperplane)
        .collect::<Result<_>>()?;
    Ok(Theorem2Instance {
        base,
        hyperplanes,
        k,
    })
}

/// Retries over threshold offsets when the simplex vertices come out
/// affinely dependent.
const TAU_ATTEMPTS: usize = 5;

/// Knobs for [`Theorem2Instance::simplex_witness_with`].
#[derive(Debug, Clone, Default)]
pub struct SimplexOptions {
    /// Height `t` of the apex `(0, …, 0, t)`; defaults to `min p_d / 2`.
    pub apex_height: Option<Scalar>,
}

impl Theorem2Instance {
    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    pub fn default_apex_height(&self) -> Scalar {
        let d = self.base.d;
        self.base
            .points
            .iter()
            .map(|p| p.coords[d - 1].clone())
            .min()
            .unwrap_or_else(Scalar::one)
            * scalar::half()
    }

    /// Threshold of the `j`-th witness half-space on retry `attempt`:
    /// `d + 1/2 + j/(4k) + attempt/(16k)`, always inside `(d, d+1)`.
    pub fn witness_tau(&self, j: usize, attempt: usize) -> Scalar {
        let k = self.k as i64;
        default_tau(self.base.d)
            + scalar::ratio(j as i64, 4 * k)
            + scalar::ratio(attempt as i64, 16 * k)
    }

    /// An open simplex of dimension at most `k` meeting exactly the
    /// hyperplanes in `subset`.
    pub fn simplex_witness(&self, subset: u64) -> Result<OpenSimplex> {
        self.simplex_witness_with(subset, &SimplexOptions::default())
    }

    pub fn simplex_witness_with(&self, subset: u64, opts: &SimplexOptions) -> Result<OpenSimplex> {
        let d = self.base.d;
        let boxes = self.base.union_witness_boxes(subset)?;
        let t = opts
            .apex_height
            .clone()
            .unwrap_or_else(|| self.default_apex_height());
        let mut apex = vec![Scalar::zero(); d];
        apex[d - 1] = t;
        let apex = Point::new(apex);
        let mut last_err = None;
        for attempt in 0..TAU_ATTEMPTS {
            let mut vertices = Vec::with_capacity(boxes.len() + 1);
            for (j, b) in boxes.iter().enumerate() {
                let h = box_to_halfspace_with_tau(b, d, self.witness_tau(j, attempt))?;
                vertices.push(dual_halfspace_to_point(&h)?);
            }
            vertices.push(apex.clone());
            match OpenSimplex::new(d, vertices) {
                Ok(s) => return Ok(s),
                Err(e @ Error::Degenerate(_)) => last_err = Some(e),
                Err(e) => return Err(e),
            }
        }
        Err(Error::ConstructionFailure(format!(
            "no affinely independent simplex for subset {:?} after {TAU_ATTEMPTS} threshold offsets ({})",
            indices_of(subset),
            last_err.map(|e| e.to_string()).unwrap_or_default()
        )))
    }

    fn check_simplex(&self, subset: u64, opts: &SimplexOptions) -> (bool, usize, usize) {
        let Ok(s) = self.simplex_witness_with(subset, opts) else {
            return (false, 0, 0);
        };
        let mut zeros = 0;
        let mut hit = 0u64;
        for (i, h) in self.hyperplanes.iter().enumerate() {
            let signs = s.vertex_signs(h).expect("dimensions checked on load");
            zeros += signs.iter().filter(|&&x| x == 0).count();
            if crate::geometry::signs_meet(&signs) {
                hit |= 1 << i;
            }
        }
        (hit == subset && s.dim() <= self.k, s.dim(), zeros)
    }

    pub fn verify(&self, mode: VerifyMode) -> Result<TheoremReport> {
        self.verify_with(mode, &SimplexOptions::default(), false)
    }

    /// Verifies every selected subset. A subset passes only if the witness
    /// simplex meets exactly its hyperplanes; any zero vertex sign seen
    /// along the way also fails the run.
    pub fn verify_with(
        &self,
        mode: VerifyMode,
        opts: &SimplexOptions,
        with_vc_dim: bool,
    ) -> Result<TheoremReport> {
        let subsets = mode.subsets(self.len())?;
        let results: Vec<(u64, bool, usize, usize)> = subsets
            .par_iter()
            .map(|&s| {
                let (ok, dim, zeros) = self.check_simplex(s, opts);
                (s, ok, dim, zeros)
            })
            .collect();
        let zeros: usize = results.iter().map(|r| r.3).sum();
        let failing: Vec<Vec<usize>> = results
            .iter()
            .filter(|r| !r.1)
            .map(|r| indices_of(r.0))
            .collect();
        let vc_dim = if with_vc_dim {
            let simplices: Vec<OpenSimplex> = subsets
                .iter()
                .filter_map(|&s| self.simplex_witness_with(s, opts).ok())
                .collect();
            let sys = induced_system_hyperplanes_in_simplices(&self.hyperplanes, &simplices)?;
            Some(sys.vc_dim()?.dim)
        } else {
            None
        };
        Ok(TheoremReport {
            points: self.len(),
            k: self.k,
            subsets_checked: results.len(),
            shattered: failing.is_empty() && zeros == 0,
            failing_subsets: failing,
            max_witness_size: results.iter().map(|r| r.2).max().unwrap_or(0),
            zero_sign_evaluations: Some(zeros),
            vc_dim,
        })
    }
}

/// `{"subset": [...], "halfspaces": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnionWitnessFile {
    pub subset: Vec<usize>,
    pub halfspaces: Vec<RestrictedHalfspace>,
}

/// `{"subset": [...], "simplex": {...}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplexWitnessFile {
    pub subset: Vec<usize>,
    pub simplex: OpenSimplex,
}

pub fn subset_mask(indices: &[usize], n: usize) -> Result<u64> {
    if let Some(&i) = indices.iter().find(|&&i| i >= n) {
        return Err(invalid(format!("index {i} out of range for {n} elements")));
    }
    Ok(mask_of(indices))
}

/// True when every coordinate of `p` is strictly positive; used by the
/// simplex pipeline to guarantee positive intercepts.
pub fn all_intercepts_positive(inst: &Theorem2Instance) -> bool {
    inst.hyperplanes
        .iter()
        .all(|h| h.p.coords.last().is_some_and(Signed::is_positive))
}
