#![allow(clippy::needless_range_loop)]

mod common;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vcfold::geometry::{
    dual_halfspace_to_point, dual_point_to_hyperplane, realizable_halfspace_subsets,
    simplex_hyperplane_intersects, DualHyperplane, OpenSimplex,
};
use vcfold::scalar::{self, sign, Scalar};
use vcfold::setsys::full_mask;
use vcfold::{Error, Point, RestrictedHalfspace};

use common::{lp_realizable, random_int_points, random_positive_rational};

fn random_positive_point(rng: &mut ChaCha8Rng, d: usize) -> Point {
    Point::new((0..d).map(|_| random_positive_rational(rng)).collect())
}

#[test]
fn duality_identity_random_and_boundary() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for case in 0..1200 {
        let d = rng.gen_range(2..=5);
        let p = random_positive_point(&mut rng, d);
        let b: Vec<Scalar> = (0..d).map(|_| random_positive_rational(&mut rng)).collect();
        let load: Scalar = p.coords.iter().zip(&b).map(|(x, bi)| x / bi).sum();
        let tau = if case % 4 == 0 {
            // engineered boundary case
            load.clone()
        } else {
            random_positive_rational(&mut rng)
        };
        let h = RestrictedHalfspace::new(b.clone(), tau.clone()).unwrap();
        let dh = dual_halfspace_to_point(&h).unwrap();
        let hp = dual_point_to_hyperplane(&p).unwrap();
        // exact identity s_p(D(H)) = b_d (load - tau)
        assert_eq!(hp.signed_gap(&dh).unwrap(), &b[d - 1] * (&load - &tau));
        assert_eq!(sign(&(&load - &tau)), hp.side_of(&dh).unwrap());
        assert_eq!(h.contains(&p).unwrap(), hp.side_of(&dh).unwrap() <= 0);
    }
}

/// Evaluates the hyperplane in normal form `a · x = c` with
/// `a = (p_1, …, p_{d-1}, -1)` and `c = -p_d`.
fn explicit_side(h: &DualHyperplane, x: &Point) -> i8 {
    let d = h.p.dim();
    let mut dot = Scalar::zero();
    for i in 0..d - 1 {
        dot += &h.p.coords[i] * &x.coords[i];
    }
    dot -= &x.coords[d - 1];
    let c = -h.p.coords[d - 1].clone();
    sign(&(dot - c))
}

#[test]
fn side_of_matches_explicit_normal_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..500 {
        let d = rng.gen_range(2..=4);
        let p = Point::new(
            (0..d)
                .map(|_| scalar::ratio(rng.gen_range(-20..20), rng.gen_range(1..6)))
                .collect(),
        );
        let x = Point::new(
            (0..d)
                .map(|_| scalar::ratio(rng.gen_range(-20..20), rng.gen_range(1..6)))
                .collect(),
        );
        let h = dual_point_to_hyperplane(&p).unwrap();
        assert_eq!(h.side_of(&x).unwrap(), explicit_side(&h, &x));
    }
}

/// An interior point of the simplex on the hyperplane, built exactly: start
/// at the barycenter and slide toward a vertex of the opposite sign.
fn interior_point_on(s: &OpenSimplex, h: &DualHyperplane) -> Option<(Vec<Scalar>, Point)> {
    let m = s.vertices().len();
    let d = s.ambient_dim();
    let bary_w = vec![scalar::ratio(1, m as i64); m];
    let combine = |w: &[Scalar]| {
        let mut c = vec![Scalar::zero(); d];
        for (wi, v) in w.iter().zip(s.vertices()) {
            for k in 0..d {
                c[k] += wi * &v.coords[k];
            }
        }
        Point::new(c)
    };
    let bary = combine(&bary_w);
    let g0 = h.signed_gap(&bary).unwrap();
    if g0.is_zero() {
        return Some((bary_w, bary));
    }
    let target = s
        .vertices()
        .iter()
        .position(|v| sign(&h.signed_gap(v).unwrap()) == -sign(&g0))?;
    let gv = h.signed_gap(&s.vertices()[target]).unwrap();
    // gap is affine along the segment: g0 + lambda (gv - g0) = 0
    let lambda = &g0 / (&g0 - &gv);
    let mut w: Vec<Scalar> = bary_w
        .iter()
        .map(|x| x * (Scalar::one() - &lambda))
        .collect();
    w[target] += &lambda;
    let x = combine(&w);
    Some((w, x))
}

#[test]
fn simplex_predicate_matches_constructive_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut seen = [0usize; 2];
    for _ in 0..600 {
        let d = rng.gen_range(2..=3);
        let m = rng.gen_range(1..=d);
        let verts = random_int_points(&mut rng, m + 1, d, 4);
        let s = match OpenSimplex::new(d, verts) {
            Ok(s) => s,
            Err(Error::Degenerate(_)) => continue,
            Err(e) => panic!("{e}"),
        };
        let p = Point::new((0..d).map(|_| scalar::int(rng.gen_range(-3..=3))).collect());
        let h = dual_point_to_hyperplane(&p).unwrap();
        let meets = simplex_hyperplane_intersects(&s, &h).unwrap();
        seen[meets as usize] += 1;
        if meets {
            let (w, x) = interior_point_on(&s, &h).expect("an opposite-sign vertex exists");
            assert!(w.iter().all(Signed::is_positive));
            assert_eq!(w.iter().sum::<Scalar>(), Scalar::one());
            assert!(h.signed_gap(&x).unwrap().is_zero());
        } else {
            let signs: Vec<i8> = s.vertices().iter().map(|v| h.side_of(v).unwrap()).collect();
            let nonzero: Vec<i8> = signs.iter().copied().filter(|&x| x != 0).collect();
            assert!(!nonzero.is_empty());
            assert!(nonzero.iter().all(|&x| x == nonzero[0]));
            // every interior point then has that strict sign
            let (_, bary) = {
                let n = s.vertices().len() as i64;
                let mut c = vec![Scalar::zero(); d];
                for v in s.vertices() {
                    for k in 0..d {
                        c[k] += &v.coords[k] / scalar::int(n);
                    }
                }
                ((), Point::new(c))
            };
            assert_eq!(h.side_of(&bary).unwrap(), nonzero[0]);
        }
    }
    assert!(seen[0] > 50 && seen[1] > 50, "{seen:?}");
}

#[test]
fn realizable_subsets_match_lp_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for trial in 0..60 {
        let d = if trial % 3 == 0 { 3 } else { 2 };
        let n = rng.gen_range(1..=6);
        // small span forces collinear and coplanar configurations
        let pts = random_int_points(&mut rng, n, d, 2);
        let got = realizable_halfspace_subsets(&pts).unwrap();
        assert_eq!(got.sets(), lp_realizable(&pts).as_slice(), "{pts:?}");
    }
}

#[test]
fn four_convex_points_oracle() {
    let pts = vec![
        Point::from_ints(&[0, 0]),
        Point::from_ints(&[2, 0]),
        Point::from_ints(&[3, 2]),
        Point::from_ints(&[0, 3]),
    ];
    let oracle = lp_realizable(&pts);
    let got = realizable_halfspace_subsets(&pts).unwrap();
    assert_eq!(got.sets(), oracle.as_slice());
    assert!(!got.contains_set(0b0101));
    assert!(!got.contains_set(0b1010));
    assert_eq!(got.vc_dim().unwrap().dim, 3);
}

#[test]
fn realizable_closed_under_complement_in_general_position() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for _ in 0..40 {
        let n = rng.gen_range(1..=6);
        let pts = random_int_points(&mut rng, n, 2, 50);
        let sys = realizable_halfspace_subsets(&pts).unwrap();
        let full = full_mask(n);
        for &s in sys.sets() {
            assert!(sys.contains_set(full & !s));
        }
    }
}

#[test]
fn realizable_vc_at_most_d_plus_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    for d in 2..=3 {
        for _ in 0..15 {
            let n = rng.gen_range(1..=d + 3);
            let pts = random_int_points(&mut rng, n, d, 5);
            let vc = realizable_halfspace_subsets(&pts)
                .unwrap()
                .vc_dim()
                .unwrap()
                .dim;
            assert!(vc <= d + 1);
        }
    }
}

#[test]
fn point_set_json() {
    let f = vcfold::geometry::PointSetFile::new(
        2,
        vec![Point::new(vec![scalar::ratio(1, 2), scalar::int(3)])],
    );
    let s = serde_json::to_string(&f).unwrap();
    assert_eq!(s, r#"{"dim":2,"points":[["1/2","3/1"]]}"#);
    let back: vcfold::geometry::PointSetFile = serde_json::from_str(&s).unwrap();
    assert_eq!(back, f);
    let bad: vcfold::geometry::PointSetFile =
        serde_json::from_str(r#"{"dim":3,"points":[["1/2","3"]]}"#).unwrap();
    assert!(bad.validate().is_err());
    assert!(serde_json::from_str::<vcfold::geometry::PointSetFile>(
        r#"{"dim":1,"points":[["1/0"]]}"#
    )
    .is_err());
}

#[test]
fn simplex_json_rejects_degenerate() {
    let raw = r#"{"ambient_dim":2,"vertices":[["0","0"],["1","1"],["2","2"]]}"#;
    assert!(serde_json::from_str::<OpenSimplex>(raw).is_err());
    let raw = r#"{"ambient_dim":2,"vertices":[["0","0"],["1","0"],["0","1"]]}"#;
    let s: OpenSimplex = serde_json::from_str(raw).unwrap();
    assert_eq!(s.dim(), 2);
}
