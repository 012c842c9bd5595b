//! Exact rational geometry: points, closed axis-parallel boxes, restricted
//! half-spaces `Σ x_i / b_i ≤ τ`, dual hyperplanes, open simplices, and the
//! finite set systems they induce.
//!
//! Every predicate is evaluated in exact arithmetic; there is no tolerance
//! anywhere.

use std::collections::{HashMap, HashSet};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, invalid, Error, Result};
use crate::scalar::{self, affine_rank, sign, solve_any, Scalar};
use crate::setsys::{combinations, indices_of, mask_of, SetSystem, MAX_GROUND};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point {
    #[serde(with = "scalar::serde_vec")]
    pub coords: Vec<Scalar>,
}

impl Point {
    pub fn new(coords: Vec<Scalar>) -> Self {
        Point { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point::new(coords.iter().map(|&c| scalar::int(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.coords.iter().all(Signed::is_positive)
    }
}

/// Closed box `[lo_1, hi_1] × … × [lo_d, hi_d]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "AxisBoxRepr", into = "AxisBoxRepr")]
pub struct AxisBox {
    lo: Vec<Scalar>,
    hi: Vec<Scalar>,
}

#[derive(Serialize, Deserialize)]
struct AxisBoxRepr {
    #[serde(with = "scalar::serde_vec")]
    lo: Vec<Scalar>,
    #[serde(with = "scalar::serde_vec")]
    hi: Vec<Scalar>,
}

impl TryFrom<AxisBoxRepr> for AxisBox {
    type Error = Error;
    fn try_from(r: AxisBoxRepr) -> Result<Self> {
        AxisBox::new(r.lo, r.hi)
    }
}

impl From<AxisBox> for AxisBoxRepr {
    fn from(b: AxisBox) -> Self {
        AxisBoxRepr { lo: b.lo, hi: b.hi }
    }
}

impl AxisBox {
    pub fn new(lo: Vec<Scalar>, hi: Vec<Scalar>) -> Result<Self> {
        check_dim(lo.len(), hi.len())?;
        if lo.is_empty() {
            return Err(invalid("box must have dimension at least 1"));
        }
        if let Some(i) = (0..lo.len()).find(|&i| lo[i] > hi[i]) {
            return Err(invalid(format!("box has lo > hi in coordinate {i}")));
        }
        Ok(AxisBox { lo, hi })
    }

    pub fn from_ints(lo: &[i64], hi: &[i64]) -> Result<Self> {
        let conv = |v: &[i64]| v.iter().map(|&c| scalar::int(c)).collect();
        AxisBox::new(conv(lo), conv(hi))
    }

    /// The box `[0, hi_1] × … × [0, hi_d]`.
    pub fn anchored(hi: Vec<Scalar>) -> Result<Self> {
        AxisBox::new(vec![Scalar::zero(); hi.len()], hi)
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[Scalar] {
        &self.lo
    }

    pub fn hi(&self) -> &[Scalar] {
        &self.hi
    }

    pub fn is_anchored(&self) -> bool {
        self.lo.iter().all(Zero::is_zero)
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.lo.iter().all(Signed::is_positive)
    }

    pub fn contains(&self, q: &Point) -> Result<bool> {
        check_dim(self.dim(), q.dim())?;
        Ok(self.contains_unchecked(q))
    }

    pub(crate) fn contains_unchecked(&self, q: &Point) -> bool {
        q.coords
            .iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(x, (lo, hi))| lo <= x && x <= hi)
    }

    /// True when `other` is a subset of `self`.
    pub fn encloses(&self, other: &AxisBox) -> bool {
        self.dim() == other.dim()
            && (0..self.dim()).all(|i| self.lo[i] <= other.lo[i] && other.hi[i] <= self.hi[i])
    }
}

/// The half-space `{x : Σ x_i / b_i ≤ τ}` with every `b_i > 0` and `τ > 0`.
/// It always contains the origin.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "HalfspaceRepr", into = "HalfspaceRepr")]
pub struct RestrictedHalfspace {
    b: Vec<Scalar>,
    tau: Scalar,
}

#[derive(Serialize, Deserialize)]
struct HalfspaceRepr {
    dim: usize,
    #[serde(with = "scalar::serde_vec")]
    b: Vec<Scalar>,
    #[serde(with = "scalar::serde_str")]
    tau: Scalar,
}

impl TryFrom<HalfspaceRepr> for RestrictedHalfspace {
    type Error = Error;
    fn try_from(r: HalfspaceRepr) -> Result<Self> {
        check_dim(r.dim, r.b.len())?;
        RestrictedHalfspace::new(r.b, r.tau)
    }
}

impl From<RestrictedHalfspace> for HalfspaceRepr {
    fn from(h: RestrictedHalfspace) -> Self {
        HalfspaceRepr {
            dim: h.b.len(),
            b: h.b,
            tau: h.tau,
        }
    }
}

impl RestrictedHalfspace {
    pub fn new(b: Vec<Scalar>, tau: Scalar) -> Result<Self> {
        if b.is_empty() {
            return Err(invalid("half-space must have dimension at least 1"));
        }
        if let Some(i) = b.iter().position(|x| !x.is_positive()) {
            return Err(invalid(format!("b[{i}] must be strictly positive")));
        }
        if !tau.is_positive() {
            return Err(invalid("tau must be strictly positive"));
        }
        Ok(RestrictedHalfspace { b, tau })
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    pub fn b(&self) -> &[Scalar] {
        &self.b
    }

    pub fn tau(&self) -> &Scalar {
        &self.tau
    }

    /// `Σ x_i / b_i`.
    pub fn load(&self, x: &Point) -> Result<Scalar> {
        check_dim(self.dim(), x.dim())?;
        Ok(self.load_unchecked(x))
    }

    fn load_unchecked(&self, x: &Point) -> Scalar {
        x.coords
            .iter()
            .zip(&self.b)
            .fold(Scalar::zero(), |acc, (xi, bi)| acc + xi / bi)
    }

    pub fn contains(&self, x: &Point) -> Result<bool> {
        Ok(self.load(x)? <= self.tau)
    }
}

/// The hyperplane `x_d = p_1 x_1 + … + p_{d-1} x_{d-1} + p_d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DualHyperplane {
    pub p: Point,
}

impl DualHyperplane {
    pub fn dim(&self) -> usize {
        self.p.dim()
    }

    /// Height of the hyperplane above `(x_1, …, x_{d-1})`.
    pub fn height(&self, x: &Point) -> Scalar {
        let d = self.dim();
        let mut h = self.p.coords[d - 1].clone();
        for i in 0..d - 1 {
            h += &self.p.coords[i] * &x.coords[i];
        }
        h
    }

    /// `s_p(x) = p_1 x_1 + … + p_{d-1} x_{d-1} + p_d − x_d`.
    pub fn signed_gap(&self, x: &Point) -> Result<Scalar> {
        check_dim(self.dim(), x.dim())?;
        Ok(self.height(x) - &x.coords[self.dim() - 1])
    }

    /// Sign of `s_p(x)`: `+1` when `x_d` lies strictly below the hyperplane,
    /// `-1` strictly above, `0` on it.
    pub fn side_of(&self, x: &Point) -> Result<i8> {
        Ok(sign(&self.signed_gap(x)?))
    }
}

pub fn dual_point_to_hyperplane(p: &Point) -> Result<DualHyperplane> {
    if p.dim() < 2 {
        return Err(invalid("duality needs dimension at least 2"));
    }
    Ok(DualHyperplane { p: p.clone() })
}

/// `D(H) = (b_d/b_1, …, b_d/b_{d-1}, τ·b_d)`. For every `p`,
/// `s_p(D(H)) = b_d · (Σ p_i/b_i − τ)`.
pub fn dual_halfspace_to_point(h: &RestrictedHalfspace) -> Result<Point> {
    let d = h.dim();
    if d < 2 {
        return Err(invalid("duality needs dimension at least 2"));
    }
    let bd = &h.b[d - 1];
    let mut coords: Vec<Scalar> = h.b[..d - 1].iter().map(|bi| bd / bi).collect();
    coords.push(&h.tau * bd);
    Ok(Point::new(coords))
}

/// Relative interior of the convex hull of affinely independent vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SimplexRepr", into = "SimplexRepr")]
pub struct OpenSimplex {
    ambient_dim: usize,
    vertices: Vec<Point>,
}

#[derive(Serialize, Deserialize)]
struct SimplexRepr {
    ambient_dim: usize,
    vertices: Vec<Point>,
}

impl TryFrom<SimplexRepr> for OpenSimplex {
    type Error = Error;
    fn try_from(r: SimplexRepr) -> Result<Self> {
        OpenSimplex::new(r.ambient_dim, r.vertices)
    }
}

impl From<OpenSimplex> for SimplexRepr {
    fn from(s: OpenSimplex) -> Self {
        SimplexRepr {
            ambient_dim: s.ambient_dim,
            vertices: s.vertices,
        }
    }
}

impl OpenSimplex {
    /// Fails with [`Error::Degenerate`] when the vertices are affinely
    /// dependent.
    pub fn new(ambient_dim: usize, vertices: Vec<Point>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(invalid("simplex needs at least one vertex"));
        }
        for v in &vertices {
            check_dim(ambient_dim, v.dim())?;
        }
        if vertices.len() > ambient_dim + 1 {
            return Err(Error::Degenerate(vertices.len()));
        }
        let refs: Vec<&[Scalar]> = vertices.iter().map(|v| v.coords.as_slice()).collect();
        if affine_rank(&refs) != Some(vertices.len() - 1) {
            return Err(Error::Degenerate(vertices.len()));
        }
        Ok(OpenSimplex {
            ambient_dim,
            vertices,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Dimension of the simplex itself (vertex count minus one).
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex_signs(&self, h: &DualHyperplane) -> Result<Vec<i8>> {
        self.vertices.iter().map(|v| h.side_of(v)).collect()
    }
}

/// Whether the open simplex meets the hyperplane. Interior points are
/// strictly positive affine combinations of the vertices and `s_p` is
/// affine, so this holds iff the vertex signs are mixed or all zero.
pub fn simplex_hyperplane_intersects(s: &OpenSimplex, h: &DualHyperplane) -> Result<bool> {
    check_dim(s.ambient_dim, h.dim())?;
    Ok(signs_meet(&s.vertex_signs(h)?))
}

pub(crate) fn signs_meet(signs: &[i8]) -> bool {
    let pos = signs.contains(&1);
    let neg = signs.contains(&-1);
    (pos && neg) || signs.iter().all(|&s| s == 0)
}

fn common_dim(points: &[Point]) -> Result<usize> {
    let d = points.first().map_or(0, Point::dim);
    for p in points {
        check_dim(d, p.dim())?;
    }
    Ok(d)
}

fn guard_ground(n: usize) -> Result<()> {
    if n > MAX_GROUND {
        return Err(Error::Guard {
            what: "point count",
            value: n,
            limit: MAX_GROUND,
        });
    }
    Ok(())
}

/// Every subset of `points` cut out by a closed half-space.
///
/// A subset `T` is realizable iff `T` and its complement can be strictly
/// separated by an affine function. The separable dichotomies of a point
/// set `Z` of affine rank `r` are enumerated through hyperplanes (within
/// `aff Z`) spanned by `r` affinely independent points of `Z`: each such
/// hyperplane contributes its two open sides, and the points lying on it
/// are assigned by every separable dichotomy of that smaller set, found
/// recursively. Point sets that are affinely independent yield every
/// subset directly.
pub fn realizable_halfspace_subsets(points: &[Point]) -> Result<SetSystem> {
    let n = points.len();
    guard_ground(n)?;
    common_dim(points)?;
    let mut seen = HashSet::new();
    for (i, p) in points.iter().enumerate() {
        if !seen.insert(p) {
            return Err(invalid(format!("duplicate point at index {i}")));
        }
    }
    let mut memo = HashMap::new();
    let all: Vec<usize> = (0..n).collect();
    let masks = separable_dichotomies(points, &all, &mut memo);
    SetSystem::from_masks(n, masks.iter().copied())
}

fn separable_dichotomies(
    points: &[Point],
    z: &[usize],
    memo: &mut HashMap<u64, HashSet<u64>>,
) -> HashSet<u64> {
    let zmask = mask_of(z);
    if let Some(hit) = memo.get(&zmask) {
        return hit.clone();
    }
    let mut out: HashSet<u64> = [0, zmask].into_iter().collect();
    let coords: Vec<&[Scalar]> = z.iter().map(|&i| points[i].coords.as_slice()).collect();
    let rank = affine_rank(&coords).unwrap_or(0);
    if z.len() <= rank + 1 {
        // affinely independent: every dichotomy
        for sub in 0..(1u64 << z.len()) {
            out.insert(indices_of(sub).iter().fold(0, |m, &j| m | (1u64 << z[j])));
        }
        memo.insert(zmask, out.clone());
        return out;
    }
    let dim = points[z[0]].dim();
    for combo in combinations(z.len(), rank) {
        let anchor: Vec<usize> = indices_of(combo).iter().map(|&j| z[j]).collect();
        let anchor_coords: Vec<&[Scalar]> = anchor
            .iter()
            .map(|&i| points[i].coords.as_slice())
            .collect();
        if rank > 0 && affine_rank(&anchor_coords) != Some(rank - 1) {
            continue;
        }
        let Some(g) = spanning_function(points, &anchor, z, dim) else {
            continue;
        };
        let (mut neg, mut pos, mut on) = (0u64, 0u64, Vec::new());
        for &i in z {
            match sign(&evaluate_affine(&g, &points[i])) {
                -1 => neg |= 1 << i,
                1 => pos |= 1 << i,
                _ => on.push(i),
            }
        }
        for u in separable_dichotomies(points, &on, memo) {
            out.insert(neg | u);
            out.insert(pos | u);
        }
    }
    memo.insert(zmask, out.clone());
    out
}

/// An affine function `(w, c)` vanishing on `anchor` and equal to 1 at some
/// point of `z` outside `aff(anchor)`.
fn spanning_function(
    points: &[Point],
    anchor: &[usize],
    z: &[usize],
    dim: usize,
) -> Option<Vec<Scalar>> {
    let row = |p: &Point| {
        let mut r = p.coords.clone();
        r.push(scalar::int(1));
        r
    };
    let mut a: Vec<Vec<Scalar>> = anchor.iter().map(|&i| row(&points[i])).collect();
    let mut b = vec![Scalar::zero(); anchor.len()];
    a.push(vec![Scalar::zero(); dim + 1]);
    b.push(scalar::int(1));
    for &o in z {
        if anchor.contains(&o) {
            continue;
        }
        *a.last_mut().unwrap() = row(&points[o]);
        if let Some(g) = solve_any(&a, &b) {
            return Some(g);
        }
    }
    None
}

fn evaluate_affine(g: &[Scalar], p: &Point) -> Scalar {
    let d = p.dim();
    p.coords
        .iter()
        .zip(g)
        .fold(g[d].clone(), |acc, (x, w)| acc + x * w)
}

/// The system `{ {i : P_i ∈ H} : H ∈ F }` on the indices of `points`.
pub fn induced_system_points_in_halfspaces(
    points: &[Point],
    family: &[RestrictedHalfspace],
) -> Result<SetSystem> {
    guard_ground(points.len())?;
    let d = common_dim(points)?;
    let mut masks = Vec::with_capacity(family.len());
    for h in family {
        if !points.is_empty() {
            check_dim(d, h.dim())?;
        }
        let mut m = 0u64;
        for (i, p) in points.iter().enumerate() {
            if h.contains(p)? {
                m |= 1 << i;
            }
        }
        masks.push(m);
    }
    SetSystem::from_masks(points.len(), masks)
}

/// The system `{ {i : S meets H_i} : S ∈ simplices }` on hyperplane indices.
pub fn induced_system_hyperplanes_in_simplices(
    hyperplanes: &[DualHyperplane],
    simplices: &[OpenSimplex],
) -> Result<SetSystem> {
    guard_ground(hyperplanes.len())?;
    let mut masks = Vec::with_capacity(simplices.len());
    for s in simplices {
        let mut m = 0u64;
        for (i, h) in hyperplanes.iter().enumerate() {
            if simplex_hyperplane_intersects(s, h)? {
                m |= 1 << i;
            }
        }
        masks.push(m);
    }
    SetSystem::from_masks(hyperplanes.len(), masks)
}

/// On-disk form `{"dim": d, "points": [["num/den", …], …]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSetFile {
    pub dim: usize,
    pub points: Vec<Point>,
}

impl PointSetFile {
    pub fn new(dim: usize, points: Vec<Point>) -> Self {
        PointSetFile { dim, points }
    }

    pub fn validate(&self) -> Result<()> {
        for p in &self.points {
            check_dim(self.dim, p.dim())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn pt(c: &[(i64, i64)]) -> Point {
        Point::new(c.iter().map(|&(n, d)| ratio(n, d)).collect())
    }

    #[test]
    fn box_membership() {
        let b = AxisBox::from_ints(&[1, 3], &[2, 4]).unwrap();
        assert!(b.contains(&pt(&[(3, 2), (7, 2)])).unwrap());
        assert!(b.contains(&Point::from_ints(&[1, 4])).unwrap());
        assert!(!b.contains(&pt(&[(5, 2), (7, 2)])).unwrap());
        assert!(b.contains(&Point::from_ints(&[1])).is_err());
        assert!(AxisBox::from_ints(&[2], &[1]).is_err());
    }

    #[test]
    fn halfspace_membership() {
        let h = RestrictedHalfspace::new(vec![int(1), int(1)], int(2)).unwrap();
        assert!(h.contains(&Point::from_ints(&[1, 1])).unwrap());
        assert!(h.contains(&Point::from_ints(&[0, 0])).unwrap());
        assert!(!h.contains(&Point::from_ints(&[3, 0])).unwrap());
        assert!(RestrictedHalfspace::new(vec![int(0)], int(1)).is_err());
        assert!(RestrictedHalfspace::new(vec![int(1)], int(0)).is_err());
    }

    #[test]
    fn side_examples() {
        let x = Point::from_ints(&[1, 2]);
        let flat = dual_point_to_hyperplane(&Point::from_ints(&[0, 0])).unwrap();
        assert_eq!(flat.side_of(&x).unwrap(), -1);
        let h = dual_point_to_hyperplane(&pt(&[(1, 1), (1, 2)])).unwrap();
        assert_eq!(h.signed_gap(&x).unwrap(), ratio(-1, 2));
        assert_eq!(h.side_of(&x).unwrap(), -1);
        let far = dual_point_to_hyperplane(&Point::from_ints(&[10, 10])).unwrap();
        assert_eq!(far.side_of(&x).unwrap(), 1);
        assert!(dual_point_to_hyperplane(&Point::from_ints(&[1])).is_err());
    }

    #[test]
    fn dual_point_examples() {
        let h = RestrictedHalfspace::new(vec![int(1), int(1)], int(2)).unwrap();
        let dh = dual_halfspace_to_point(&h).unwrap();
        assert_eq!(dh, Point::from_ints(&[1, 2]));
        let inside = pt(&[(1, 1), (1, 2)]);
        assert!(h.contains(&inside).unwrap());
        assert_eq!(
            dual_point_to_hyperplane(&inside)
                .unwrap()
                .side_of(&dh)
                .unwrap(),
            -1
        );
        let outside = Point::from_ints(&[10, 10]);
        assert!(!h.contains(&outside).unwrap());
        assert_eq!(
            dual_point_to_hyperplane(&outside)
                .unwrap()
                .side_of(&dh)
                .unwrap(),
            1
        );
    }

    #[test]
    fn sign_pattern_rule() {
        assert!(signs_meet(&[1, -1, 1]));
        assert!(!signs_meet(&[1, 1, 0]));
        assert!(signs_meet(&[0, 0, 0]));
        assert!(!signs_meet(&[-1, -1]));
        assert!(signs_meet(&[-1, 0, 1]));
    }

    #[test]
    fn degenerate_simplex_rejected() {
        let v = vec![
            Point::from_ints(&[0, 0]),
            Point::from_ints(&[1, 1]),
            Point::from_ints(&[2, 2]),
        ];
        assert_eq!(OpenSimplex::new(2, v), Err(Error::Degenerate(3)));
        let v = vec![Point::from_ints(&[0, 0]), Point::from_ints(&[0, 0])];
        assert_eq!(OpenSimplex::new(2, v), Err(Error::Degenerate(2)));
        let ok = OpenSimplex::new(
            2,
            vec![Point::from_ints(&[0, 0]), Point::from_ints(&[1, 0])],
        );
        assert_eq!(ok.unwrap().dim(), 1);
    }

    #[test]
    fn simplex_crossing() {
        let s = OpenSimplex::new(
            2,
            vec![Point::from_ints(&[0, 0]), Point::from_ints(&[0, 4])],
        )
        .unwrap();
        // x_2 = 2 crosses the vertical segment; x_2 = 4 touches only a vertex.
        let mid = dual_point_to_hyperplane(&Point::from_ints(&[0, 2])).unwrap();
        let top = dual_point_to_hyperplane(&Point::from_ints(&[0, 4])).unwrap();
        assert!(simplex_hyperplane_intersects(&s, &mid).unwrap());
        assert!(!simplex_hyperplane_intersects(&s, &top).unwrap());
    }

    #[test]
    fn three_points_realize_everything() {
        let p = vec![
            Point::from_ints(&[0, 0]),
            Point::from_ints(&[1, 0]),
            Point::from_ints(&[0, 1]),
        ];
        let sys = realizable_halfspace_subsets(&p).unwrap();
        assert_eq!(sys.len(), 8);
    }

    #[test]
    fn square_diagonals_not_realizable() {
        let p = vec![
            Point::from_ints(&[0, 0]),
            Point::from_ints(&[1, 0]),
            Point::from_ints(&[1, 1]),
            Point::from_ints(&[0, 1]),
        ];
        let sys = realizable_halfspace_subsets(&p).unwrap();
        assert!(!sys.contains_set(mask_of(&[0, 2])));
        assert!(!sys.contains_set(mask_of(&[1, 3])));
        assert_eq!(sys.len(), 14);
        assert_eq!(sys.vc_dim().unwrap().dim, 3);
    }

    #[test]
    fn collinear_points() {
        let p = vec![
            Point::from_ints(&[0, 0]),
            Point::from_ints(&[1, 1]),
            Point::from_ints(&[2, 2]),
        ];
        let sys = realizable_halfspace_subsets(&p).unwrap();
        // prefixes and suffixes along the line
        assert_eq!(sys.len(), 6);
        assert!(!sys.contains_set(mask_of(&[0, 2])));
        assert!(!sys.contains_set(mask_of(&[1])));
    }

    #[test]
    fn single_point_and_duplicates() {
        let one = realizable_halfspace_subsets(&[Point::from_ints(&[3, 3])]).unwrap();
        assert_eq!(one.sets(), &[0, 1]);
        let dup = [Point::from_ints(&[1, 1]), Point::from_ints(&[1, 1])];
        assert!(realizable_halfspace_subsets(&dup).is_err());
    }

    #[test]
    fn induced_systems() {
        let p = vec![Point::from_ints(&[1, 1]), Point::from_ints(&[5, 5])];
        let empty = induced_system_points_in_halfspaces(&p, &[]).unwrap();
        assert!(empty.is_empty());
        let big = RestrictedHalfspace::new(vec![int(100), int(100)], int(1)).unwrap();
        let sys = induced_system_points_in_halfspaces(&p, &[big]).unwrap();
        assert_eq!(sys.sets(), &[0b11]);
        let small = RestrictedHalfspace::new(vec![int(1), int(1)], int(2)).unwrap();
        let sys = induced_system_points_in_halfspaces(&p, &[small]).unwrap();
        assert_eq!(sys.sets(), &[0b01]);

        let hs = vec![
            dual_point_to_hyperplane(&Point::from_ints(&[0, 1])).unwrap(),
            dual_point_to_hyperplane(&Point::from_ints(&[0, 3])).unwrap(),
        ];
        assert!(induced_system_hyperplanes_in_simplices(&hs, &[])
            .unwrap()
            .is_empty());
        let tall = OpenSimplex::new(
            2,
            vec![Point::from_ints(&[0, 0]), Point::from_ints(&[0, 10])],
        )
        .unwrap();
        let sys = induced_system_hyperplanes_in_simplices(&hs, &[tall]).unwrap();
        assert_eq!(sys.sets(), &[0b11]);
    }

    #[test]
    fn json_forms() {
        let h = RestrictedHalfspace::new(vec![int(2), ratio(1, 3)], ratio(9, 2)).unwrap();
        let s = serde_json::to_string(&h).unwrap();
        assert_eq!(s, r#"{"dim":2,"b":["2/1","1/3"],"tau":"9/2"}"#);
        let back: RestrictedHalfspace = serde_json::from_str(&s).unwrap();
        assert_eq!(back, h);
        let bad = r#"{"dim":2,"b":["2/1","-1/3"],"tau":"9/2"}"#;
        assert!(serde_json::from_str::<RestrictedHalfspace>(bad).is_err());
        let hp = dual_point_to_hyperplane(&Point::from_ints(&[1, 2])).unwrap();
        assert_eq!(
            serde_json::to_string(&hp).unwrap(),
            r#"{"p":["1/1","2/1"]}"#
        );
        let b = AxisBox::from_ints(&[1], &[2]).unwrap();
        assert_eq!(
            serde_json::to_string(&b).unwrap(),
            r#"{"lo":["1/1"],"hi":["2/1"]}"#
        );
    }
}
