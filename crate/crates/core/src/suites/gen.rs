//! Seeded random data for the suites.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::cone::Cone;
use crate::conjugate::SampledMap;
use crate::error::Result;
use crate::linop::LinOp;
use crate::num::{qr, Vector, Q};
use crate::problem::{Flags, Hints, ProblemInstance};

pub fn rational(rng: &mut ChaCha8Rng, lo: i64, hi: i64, denom: i64) -> Q {
    qr(rng.random_range(lo * denom..=hi * denom), denom)
}

pub fn point(rng: &mut ChaCha8Rng, dim: usize, lo: i64, hi: i64, denom: i64) -> Vector {
    Vector((0..dim).map(|_| rational(rng, lo, hi, denom)).collect())
}

pub fn points(rng: &mut ChaCha8Rng, count: usize, dim: usize, lo: i64, hi: i64, denom: i64) -> Vec<Vector> {
    (0..count).map(|_| point(rng, dim, lo, hi, denom)).collect()
}

/// Distinct points, at most `count` of them.
pub fn distinct_points(rng: &mut ChaCha8Rng, count: usize, dim: usize, lo: i64, hi: i64) -> Vec<Vector> {
    let mut pts = points(rng, count, dim, lo, hi, 1);
    pts.sort();
    pts.dedup();
    pts.shuffle(rng);
    pts
}

/// A solid pointed cone in the plane spanned by two integer rays with
/// positive determinant.
pub fn planar_cone(rng: &mut ChaCha8Rng) -> Cone {
    loop {
        let u = point(rng, 2, -3, 3, 1);
        let v = point(rng, 2, -3, 3, 1);
        if u[0] * v[1] - u[1] * v[0] > Q::from(0) {
            return Cone::from_generators(vec![u, v]).expect("independent rays span a solid cone");
        }
    }
}

/// The orthant half the time, a random planar cone otherwise (`m = 2`).
pub fn cone(rng: &mut ChaCha8Rng, m: usize) -> Cone {
    if m == 2 && rng.random_bool(0.5) {
        planar_cone(rng)
    } else {
        Cone::orthant(m)
    }
}

/// A nonnegative combination of the rays of `k`.
pub fn cone_point(rng: &mut ChaCha8Rng, k: &Cone) -> Vector {
    let mut out = Vector::zeros(k.dim());
    for r in k.extreme_rays() {
        out = &out + &r.scale(&rational(rng, 0, 2, 2));
    }
    out
}

pub fn operator(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64, denom: i64) -> LinOp {
    LinOp::from_entries(
        rows,
        cols,
        (0..rows * cols).map(|_| rational(rng, -bound, bound, denom)).collect(),
    )
    .expect("sizes agree")
}

pub fn sampled_map(rng: &mut ChaCha8Rng, n: usize, m: usize, max_samples: usize) -> SampledMap {
    let count = rng.random_range(1..=max_samples);
    let xs = distinct_points(rng, count, n, -3, 3);
    let samples = xs.into_iter().map(|x| (x, point(rng, m, -3, 3, 2))).collect();
    SampledMap::new(n, m, samples).expect("distinct sample points")
}

/// Random data with a nonempty feasible set; no flags, no hints.
pub fn instance(rng: &mut ChaCha8Rng, name: String) -> Result<ProblemInstance> {
    let n = rng.random_range(1..=2);
    let m = rng.random_range(1..=2);
    let p = rng.random_range(1..=2);
    let k = Arc::new(cone(rng, m));
    let s = Arc::new(cone(rng, p));
    let count = rng.random_range(2..=7);
    let domain = distinct_points(rng, count, n, -2, 2);
    let f: Vec<Vector> = (0..domain.len()).map(|_| point(rng, m, -3, 3, 2)).collect();
    let mut g: Vec<Vector> = (0..domain.len()).map(|_| point(rng, p, -2, 2, 2)).collect();
    let mut c: Vec<usize> = (0..domain.len()).filter(|_| rng.random_bool(0.7)).collect();
    if c.is_empty() {
        c.push(0);
    }
    // make one point of C feasible
    let anchor = c[rng.random_range(0..c.len())];
    g[anchor] = -&cone_point(rng, &s);
    ProblemInstance::new(name, k, s, domain, f, g, c, Hints::default(), Flags::default())
}

/// Scalar data for the regression against the independent evaluator.
pub fn scalar_instance(rng: &mut ChaCha8Rng, name: String) -> Result<ProblemInstance> {
    let n = rng.random_range(1..=2);
    let p = rng.random_range(1..=2);
    let count = rng.random_range(2..=6);
    let domain = distinct_points(rng, count, n, -2, 2);
    let f: Vec<Vector> = (0..domain.len()).map(|_| point(rng, 1, -3, 3, 2)).collect();
    let mut g: Vec<Vector> = (0..domain.len()).map(|_| point(rng, p, -2, 2, 2)).collect();
    let c: Vec<usize> = (0..domain.len()).collect();
    g[0] = Vector((0..p).map(|_| -rational(rng, 0, 2, 2)).collect());
    let one = Arc::new(Cone::orthant(1));
    let s = Arc::new(Cone::orthant(p));
    ProblemInstance::new(name, one, s, domain, f, g, c, Hints::default(), Flags::default())
}
