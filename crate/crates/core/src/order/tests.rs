use std::sync::Arc;

use super::*;
use crate::num::{grid_points, q, qr, Vector};
use crate::oracle;

fn v(xs: &[i64]) -> Vector {
    Vector::from_ints(xs)
}

fn quad() -> Arc<Cone> {
    Arc::new(Cone::orthant(2))
}

fn grid(lo: i64, hi: i64) -> Vec<Vector> {
    grid_points(2, &q(lo), &q(hi), &qr(1, 2)).unwrap()
}

#[test]
fn classify_against_examples() {
    let k = Cone::orthant(2);
    assert_eq!(
        classify_against(&[v(&[0, 0])], &k, &v(&[-1, 0])).unwrap(),
        RegionLabel::Frontier
    );
    let m = [v(&[0, 0]), v(&[2, -1])];
    assert_eq!(classify_against(&m, &k, &v(&[1, -1])).unwrap(), RegionLabel::Frontier);
    assert_eq!(classify_against(&m, &k, &v(&[1, 0])).unwrap(), RegionLabel::Upper);
    assert_eq!(classify_against(&m, &k, &v(&[-1, -1])).unwrap(), RegionLabel::Lower);
    let k1 = Cone::orthant(1);
    let m1 = [v(&[1]), v(&[3]), v(&[2])];
    assert_eq!(classify_against(&m1, &k1, &v(&[3])).unwrap(), RegionLabel::Frontier);
    assert!(classify_against(&m1, &k1, &v(&[3, 1])).is_err());
}

#[test]
fn wsup_drops_dominated_points() {
    let k = quad();
    let s = GenSet::sup(&k, vec![v(&[0, 0]), v(&[-1, -1])]).unwrap();
    assert_eq!(s.generator_points(), &[v(&[0, 0])]);
    let s = GenSet::sup(&k, vec![v(&[0, 1]), v(&[1, 0])]).unwrap();
    assert_eq!(s.generator_points().len(), 2);
}

#[test]
fn wsup_of_three_points_keeps_two() {
    // (1,-2) sits strictly below (2,-1), so it is redundant
    let k = quad();
    let m = vec![v(&[0, 0]), v(&[2, -1]), v(&[1, -2])];
    let s = GenSet::sup(&k, m.clone()).unwrap();
    assert_eq!(s.generator_points(), &[v(&[0, 0]), v(&[2, -1])]);
    let pts = grid(-4, 4);
    let full = oracle::brute_region(&m, &k, &pts);
    for (p, label) in pts.iter().zip(&full) {
        assert_eq!(s.classify(p).unwrap(), *label);
    }
    // dropping either kept generator changes the lower region
    for drop in 0..2 {
        let rest: Vec<Vector> = s
            .generator_points()
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != drop)
            .map(|(_, g)| g.clone())
            .collect();
        let fewer = oracle::brute_region(&rest, &k, &pts);
        assert!(full
            .iter()
            .zip(&fewer)
            .any(|(a, b)| (*a == RegionLabel::Lower) != (*b == RegionLabel::Lower)));
    }
}

#[test]
fn winf_examples() {
    let k = quad();
    let sample = vec![v(&[0, 0]), v(&[1, 0]), v(&[0, 1]), v(&[2, 3]), v(&[1, 1])];
    let w = GenSet::inf(&k, sample).unwrap();
    assert_eq!(w.classify(&v(&[0, 0])).unwrap(), RegionLabel::Frontier);
    assert_eq!(w.classify(&v(&[0, 5])).unwrap(), RegionLabel::Frontier);
    assert_eq!(w.classify(&v(&[1, 1])).unwrap(), RegionLabel::Upper);
    assert_eq!(w.classify(&v(&[-1, 1])).unwrap(), RegionLabel::Lower);

    let k1 = Arc::new(Cone::orthant(1));
    let w = GenSet::inf(&k1, vec![v(&[1]), v(&[3]), v(&[2])]).unwrap();
    assert_eq!(w.generator_points(), &[v(&[1])]);

    let w = GenSet::inf(&k, vec![v(&[0, 2]), v(&[1, 1]), v(&[2, 0])]).unwrap();
    assert_eq!(w.generator_points().len(), 3);
    assert_eq!(w.classify(&v(&[1, 1])).unwrap(), RegionLabel::Frontier);
    // mirror of the negated weak supremum
    let neg = GenSet::sup(&k, vec![v(&[0, -2]), v(&[-1, -1]), v(&[-2, 0])]).unwrap();
    for p in grid(-3, 3) {
        let a = w.classify(&p).unwrap();
        let b = neg.classify(&-&p).unwrap();
        let flipped = match b {
            RegionLabel::Lower => RegionLabel::Upper,
            RegionLabel::Upper => RegionLabel::Lower,
            RegionLabel::Frontier => RegionLabel::Frontier,
        };
        assert_eq!(a, flipped);
    }
}

#[test]
fn wmax_examples() {
    let k = Cone::orthant(2);
    let m = FiniteVecSet::new(vec![v(&[0, 0]), v(&[-1, -1])]).unwrap();
    assert_eq!(wmax_finite(&m, &k).unwrap(), vec![v(&[0, 0])]);
    let m = FiniteVecSet::new(vec![v(&[0, 1]), v(&[1, 0])]).unwrap();
    assert_eq!(wmax_finite(&m, &k).unwrap().len(), 2);
    let m = FiniteVecSet::new(vec![v(&[0, 0]), v(&[2, -1]), v(&[1, 1])]).unwrap();
    assert_eq!(wmax_finite(&m, &k).unwrap(), vec![v(&[1, 1]), v(&[2, -1])]);
    // same answer from the pairwise definition
    let direct: Vec<Vector> = m
        .iter()
        .filter(|p| m.iter().all(|u| !crate::cone::weak_less(&k, p, u).unwrap()))
        .cloned()
        .collect();
    assert_eq!(direct, vec![v(&[1, 1]), v(&[2, -1])]);
}

#[test]
fn preceq_examples() {
    let k = quad();
    let u = GenSet::sup(&k, vec![v(&[0, 0])]).unwrap();
    assert!(u.preceq(&GenSet::sup(&k, vec![v(&[1, 1])]).unwrap()).unwrap());
    let w = GenSet::sup(&k, vec![v(&[1, -1])]).unwrap();
    assert!(!u.preceq(&w).unwrap());
    // the frontier point (-5,-1) of w lies strictly below the origin
    assert_eq!(u.classify(&v(&[-5, -1])).unwrap(), RegionLabel::Lower);
    assert!(w.contains(&v(&[-5, -1])).unwrap());
    assert!(u.preceq(&u).unwrap());
    assert!(u.preceq(&GenSet::plus_inf(&k)).unwrap());
    assert!(GenSet::minus_inf(&k).preceq(&u).unwrap());
    assert!(!GenSet::plus_inf(&k).preceq(&u).unwrap());
    let other = Arc::new(Cone::from_normals(vec![v(&[1, 0]), v(&[1, 1])]).unwrap());
    let x = GenSet::sup(&other, vec![v(&[0, 0])]).unwrap();
    assert_eq!(u.preceq(&x).unwrap_err(), Error::ConeMismatch);
}

#[test]
fn preceq_mixed_orientations() {
    let k = quad();
    let up = GenSet::sup(&k, vec![v(&[0, 0])]).unwrap();
    let low = GenSet::inf(&k, vec![v(&[0, 0])]).unwrap();
    // -bd K ≼ bd K but never the other way round
    assert!(up.preceq(&low).unwrap());
    assert!(!low.preceq(&up).unwrap());
    let low2 = GenSet::inf(&k, vec![v(&[1, 1])]).unwrap();
    assert!(low.preceq(&low2).unwrap());
    assert!(!low2.preceq(&low).unwrap());
    let high = GenSet::sup(&k, vec![v(&[1, 1])]).unwrap();
    assert!(!high.preceq(&low).unwrap());
}

#[test]
fn ws_sum_examples() {
    let k = quad();
    let zero = neutral(&k);
    let u = GenSet::sup(&k, vec![v(&[0, 1]), v(&[1, 0])]).unwrap();
    assert_eq!(u.ws_sum(&zero).unwrap(), u);
    let t = GenSet::sup(&k, vec![v(&[1, 2])]).unwrap();
    assert_eq!(zero.ws_sum(&t).unwrap(), t);
    let uu = u.ws_sum(&u).unwrap();
    assert_eq!(uu.generator_points(), &[v(&[0, 2]), v(&[1, 1]), v(&[2, 0])]);
    let mink = super::minkowski(u.generator_points(), u.generator_points());
    let pts = grid(-4, 4);
    let expected = oracle::brute_region(&mink, &k, &pts);
    for (p, e) in pts.iter().zip(&expected) {
        assert_eq!(uu.classify(p).unwrap(), *e);
    }
}

#[test]
fn ws_sum_infinities() {
    let k = quad();
    let u = neutral(&k);
    assert!(u.ws_sum(&GenSet::plus_inf(&k)).unwrap().is_plus_inf());
    assert!(GenSet::minus_inf(&k).ws_sum(&u).unwrap().is_minus_inf());
    assert_eq!(
        GenSet::plus_inf(&k).ws_sum(&GenSet::minus_inf(&k)).unwrap_err(),
        Error::IllegalInfinitySum
    );
}

#[test]
fn ws_sum_with_infimal_sets() {
    let k = quad();
    let bd = GenSet::inf(&k, vec![v(&[0, 0])]).unwrap();
    // (-bd K) ⊎ bd K = bd K
    assert_eq!(neutral(&k).ws_sum(&bd).unwrap(), bd);
    assert!(bd.ws_sum(&bd).unwrap().is_plus_inf());
    let c = GenSet::sup(&k, vec![v(&[0, 1]), v(&[1, 0])]).unwrap();
    let s = c.ws_sum(&bd).unwrap();
    assert_eq!(s.orientation(), Some(Orientation::Inf));
    assert_eq!(s.generator_points(), &[v(&[1, 1])]);
}

#[test]
fn one_dimensional_sets_are_points() {
    let k = Arc::new(Cone::orthant(1));
    let a = GenSet::sup(&k, vec![v(&[2]), v(&[5])]).unwrap();
    let b = GenSet::inf(&k, vec![v(&[-1]), v(&[4])]).unwrap();
    assert_eq!(a.generator_points(), &[v(&[5])]);
    assert_eq!(b.generator_points(), &[v(&[-1])]);
    assert_eq!(a.ws_sum(&b).unwrap().generator_points(), &[v(&[4])]);
    assert!(b.preceq(&a).unwrap());
    assert!(!a.preceq(&b).unwrap());
    assert_eq!(a.negate().generator_points(), &[v(&[-5])]);
}

#[test]
fn partition_style_examples() {
    let k = Cone::orthant(2);
    let pts = grid_points(2, &q(-2), &q(2), &qr(1, 5)).unwrap();
    // core sample of -bd K reaching past the grid
    let mut core = Vec::new();
    for i in 0..=16 {
        let t = qr(i, 4);
        core.push(Vector(vec![-t, q(0)]));
        core.push(Vector(vec![q(0), -t]));
    }
    let zero = GenSet::sup(&Arc::new(k.clone()), vec![v(&[0, 0])]).unwrap();
    assert!(check_partition_style(|y| zero.contains(y).unwrap(), &core, &k, &pts));
    // a lone point is not partition style
    let single = v(&[0, 0]);
    assert!(!check_partition_style(
        |y| *y == single,
        &[single.clone()],
        &k,
        &[v(&[1, -1])]
    ));
    let s = GenSet::sup(&Arc::new(k.clone()), vec![v(&[0, 0]), v(&[2, -1])]).unwrap();
    let core: Vec<Vector> = grid_points(2, &q(-6), &q(6), &qr(1, 4))
        .unwrap()
        .into_iter()
        .filter(|p| s.contains(p).unwrap())
        .collect();
    assert!(check_partition_style(
        |y| s.contains(y).unwrap(),
        &core,
        &k,
        &grid(-2, 2)
    ));
}

#[test]
fn general_path_matches_staircase() {
    let k2 = Cone::from_normals(vec![v(&[1, 0]), v(&[1, 1])]).unwrap();
    let fast = Arc::new(k2.clone());
    let slow = Arc::new(k2.with_tolerance(crate::cone::Tolerance::Float(1e-12)));
    let m = vec![v(&[0, 0]), v(&[2, -1]), v(&[1, 1]), v(&[-3, 4]), v(&[1, -5])];
    for o in [Orientation::Sup, Orientation::Inf] {
        let a = GenSet::from_points(&fast, o, m.clone()).unwrap();
        let b = GenSet::from_points(&slow, o, m.clone()).unwrap();
        assert_eq!(a.generator_points(), b.generator_points());
        for p in grid(-5, 5) {
            assert_eq!(a.classify(&p).unwrap(), b.classify(&p).unwrap(), "{p} {o:?}");
        }
    }
}

#[test]
fn frontier_point_along_lands_on_the_set() {
    let k = quad();
    let dir = v(&[1, 1]);
    let s = GenSet::sup(&k, vec![v(&[0, 0]), v(&[2, -1])]).unwrap();
    let w = GenSet::inf(&k, vec![v(&[0, 2]), v(&[1, 1])]).unwrap();
    for p in grid(-3, 3) {
        for set in [&s, &w] {
            let (_, hit) = set.frontier_point_along(&p, &dir).unwrap();
            assert!(set.contains(&hit).unwrap(), "{p} -> {hit}");
        }
    }
    let (t, _) = s.frontier_point_along(&v(&[5, 5]), &dir).unwrap();
    assert_eq!(t, q(5));
}

#[test]
fn upper_intersection_on_simplicial_cone() {
    let k = Cone::from_generators(vec![v(&[1, 0]), v(&[1, 2])]).unwrap();
    let a = vec![v(&[0, 0])];
    let b = vec![v(&[1, 0])];
    let c = upper_intersection(&k, &[a, b]).unwrap();
    assert_eq!(c, vec![v(&[1, 0])]);
    let k3 = Cone::from_generators(vec![v(&[1, 0, 1]), v(&[0, 1, 1]), v(&[-1, 0, 1]), v(&[0, -1, 1])]).unwrap();
    assert!(upper_intersection(&k3, &[vec![v(&[0, 0, 0])]]).is_err());
}

#[test]
fn staircase_polyline_touches_every_generator() {
    let k = quad();
    let s = GenSet::sup(&k, vec![v(&[0, 0]), v(&[2, -1])]).unwrap();
    let line = frontier_polyline(&s, &q(3)).unwrap();
    assert_eq!(line.first().unwrap(), &v(&[-3, 0]));
    assert_eq!(line.last().unwrap(), &v(&[2, -4]));
    for p in &line {
        assert!(s.contains(p).unwrap());
    }
    assert!(polyline_csv(&line).starts_with("x,y\n"));
    let csv = region_csv(&s, &[v(&[1, -1])]).unwrap();
    assert_eq!(csv, "x,y,label\n1,-1,FRONTIER\n");
}
