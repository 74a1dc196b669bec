//! Brute-force reference evaluations. Nothing here calls the engine's region,
//! filtering or WS-sum code: every test is a plain loop over the definitions.

use num_traits::{Signed, Zero};

use crate::cone::Cone;
use crate::linop::LinOp;
use crate::num::{Vector, Q};
use crate::order::RegionLabel;

fn raw_dot(a: &[Q], b: &[Q]) -> Q {
    let mut s = Q::zero();
    for i in 0..a.len() {
        s += a[i] * b[i];
    }
    s
}

fn diff(a: &Vector, b: &Vector) -> Vec<Q> {
    (0..a.dim()).map(|i| a[i] - b[i]).collect()
}

/// `d ∈ int K` straight from the normals.
pub fn in_int(k: &Cone, d: &[Q]) -> bool {
    k.normals().iter().all(|a| raw_dot(&a.0, d).is_positive())
}

/// `d ∈ K` straight from the normals.
pub fn in_cone(k: &Cone, d: &[Q]) -> bool {
    k.normals().iter().all(|a| !raw_dot(&a.0, d).is_negative())
}

/// `y ∈ M - int K`.
pub fn in_lower(m: &[Vector], k: &Cone, y: &Vector) -> bool {
    m.iter().any(|p| in_int(k, &diff(p, y)))
}

/// `y ∈ M - K`, the closure of `M - int K` for finite `M`.
pub fn in_closure(m: &[Vector], k: &Cone, y: &Vector) -> bool {
    m.iter().any(|p| in_cone(k, &diff(p, y)))
}

/// Labels relative to `wsup M` from `cl(M - int K) \ (M - int K)`.
pub fn brute_region(m: &[Vector], k: &Cone, grid: &[Vector]) -> Vec<RegionLabel> {
    grid.iter()
        .map(|y| {
            if in_lower(m, k, y) {
                RegionLabel::Lower
            } else if in_closure(m, k, y) {
                RegionLabel::Frontier
            } else {
                RegionLabel::Upper
            }
        })
        .collect()
}

/// Labels relative to `winf M`, evaluated as `−wsup(−M)` at `−y`.
pub fn brute_region_inf(m: &[Vector], k: &Cone, grid: &[Vector]) -> Vec<RegionLabel> {
    let neg: Vec<Vector> = m.iter().map(|p| -p).collect();
    let flipped: Vec<Vector> = grid.iter().map(|y| -y).collect();
    brute_region(&neg, k, &flipped)
        .into_iter()
        .map(|l| match l {
            RegionLabel::Lower => RegionLabel::Upper,
            RegionLabel::Upper => RegionLabel::Lower,
            RegionLabel::Frontier => RegionLabel::Frontier,
        })
        .collect()
}

/// `y ∈ wsup M + int K`, decided by walking down from `y` along the interior
/// witness to the first point of `cl(M - int K)` and checking that it is
/// reached after a positive step and lies on `wsup M`.
pub fn in_upper(m: &[Vector], k: &Cone, y: &Vector) -> bool {
    let k0 = k.interior_witness();
    let mut t_star: Option<Q> = None;
    for p in m {
        // y - t k0 ∈ p - int K  iff  t > max_i a_i·(y - p) / a_i·k0
        let mut tau: Option<Q> = None;
        for a in k.normals() {
            let r = raw_dot(&a.0, &diff(y, p)) / raw_dot(&a.0, &k0.0);
            tau = Some(match tau {
                Some(t) if t >= r => t,
                _ => r,
            });
        }
        let tau = tau.expect("cone has normals");
        t_star = Some(match t_star {
            Some(t) if t <= tau => t,
            _ => tau,
        });
    }
    let Some(t) = t_star else { return false };
    if !t.is_positive() {
        return false;
    }
    let hit = Vector((0..y.dim()).map(|i| y[i] - t * k0[i]).collect());
    in_closure(m, k, &hit) && !in_lower(m, k, &hit)
}

pub fn minkowski_naive(a: &[Vector], b: &[Vector]) -> Vec<Vector> {
    let mut out = Vec::new();
    for x in a {
        for y in b {
            out.push(Vector((0..x.dim()).map(|i| x[i] + y[i]).collect()));
        }
    }
    out
}

/// Labels of `wsup(U + V)` with `U = wsup MU`, `V = wsup MV`, from the raw
/// Minkowski sum of the generating sets.
pub fn brute_wsum(mu: &[Vector], mv: &[Vector], k: &Cone, grid: &[Vector]) -> Vec<RegionLabel> {
    brute_region(&minkowski_naive(mu, mv), k, grid)
}

fn apply(l: &LinOp, x: &Vector) -> Vector {
    Vector(
        (0..l.rows())
            .map(|i| {
                let mut s = Q::zero();
                for j in 0..l.cols() {
                    s += *l.entry(i, j) * x[j];
                }
                s
            })
            .collect(),
    )
}

/// The cloud `{L(x) - F(x)}` over the samples (its `wsup` is `F*(L)`).
pub fn brute_conjugate(samples: &[(Vector, Vector)], l: &LinOp) -> Vec<Vector> {
    samples
        .iter()
        .map(|(x, fx)| {
            let lx = apply(l, x);
            Vector((0..fx.dim()).map(|i| lx[i] - fx[i]).collect())
        })
        .collect()
}

/// `y ∉ (cloud_1 + … + cloud_k) - int K`, the β inequality on raw clouds.
pub fn brute_beta(clouds: &[Vec<Vector>], k: &Cone, y: &Vector) -> bool {
    let mut acc = vec![Vector::zeros(y.dim())];
    for c in clouds {
        acc = minkowski_naive(&acc, c);
    }
    !in_lower(&acc, k, y)
}

/// Raw data of a scalar problem: min f(x) over x ∈ C with G(x) ∈ −S.
#[derive(Clone, Debug)]
pub struct ScalarProblem {
    pub xs: Vec<Vector>,
    pub f: Vec<Q>,
    pub g: Vec<Vector>,
    pub c: Vec<usize>,
    pub s_normals: Vec<Vector>,
}

fn max_of(vals: impl Iterator<Item = Q>) -> Option<Q> {
    vals.fold(None, |acc, v| {
        Some(match acc {
            Some(a) if a >= v => a,
            _ => v,
        })
    })
}

fn min_of(vals: impl Iterator<Item = Q>) -> Option<Q> {
    vals.fold(None, |acc, v| {
        Some(match acc {
            Some(a) if a <= v => a,
            _ => v,
        })
    })
}

impl ScalarProblem {
    fn feasible(&self, i: usize) -> bool {
        // G(x) ∈ −S  iff  a·(−G(x)) ≥ 0 for every normal a of S
        self.s_normals
            .iter()
            .all(|a| !raw_dot(&a.0, &self.g[i].0).is_positive())
    }

    /// `inf { f(x) − x*·x : x ∈ A }`.
    pub fn primal(&self, xstar: &[Q]) -> Option<Q> {
        min_of(
            self.c
                .iter()
                .filter(|&&i| self.feasible(i))
                .map(|&i| self.f[i] - raw_dot(xstar, &self.xs[i].0)),
        )
    }

    /// `f*(w) = max_x w·x − f(x)` over the whole sample.
    pub fn f_conj(&self, w: &[Q]) -> Q {
        max_of((0..self.xs.len()).map(|i| raw_dot(w, &self.xs[i].0) - self.f[i])).expect("nonempty sample")
    }

    pub fn ic_conj(&self, w: &[Q]) -> Q {
        max_of(self.c.iter().map(|&i| raw_dot(w, &self.xs[i].0))).expect("nonempty C")
    }

    pub fn lg_conj(&self, lambda: &[Q], w: &[Q]) -> Q {
        max_of((0..self.xs.len()).map(|i| raw_dot(w, &self.xs[i].0) - raw_dot(lambda, &self.g[i].0)))
            .expect("nonempty sample")
    }

    pub fn ic_lg_conj(&self, lambda: &[Q], w: &[Q]) -> Q {
        max_of(
            self.c
                .iter()
                .map(|&i| raw_dot(w, &self.xs[i].0) - raw_dot(lambda, &self.g[i].0)),
        )
        .expect("nonempty C")
    }

    /// `max_λ inf_{x∈C} f(x) − x*·x + λ·G(x)`.
    pub fn d1(&self, xstar: &[Q], lambdas: &[Vec<Q>]) -> Option<Q> {
        max_of(lambdas.iter().map(|l| {
            min_of(
                self.c
                    .iter()
                    .map(|&i| self.f[i] - raw_dot(xstar, &self.xs[i].0) + raw_dot(l, &self.g[i].0)),
            )
            .expect("nonempty C")
        }))
    }

    /// `max_{λ,u} −f*(x*+u) − (i_C+λG)*(−u)`.
    pub fn d2(&self, xstar: &[Q], lambdas: &[Vec<Q>], us: &[Vec<Q>]) -> Option<Q> {
        let mut best: Option<Q> = None;
        for l in lambdas {
            for u in us {
                let shifted: Vec<Q> = (0..u.len()).map(|i| xstar[i] + u[i]).collect();
                let neg: Vec<Q> = u.iter().map(|x| -x).collect();
                let val = -self.f_conj(&shifted) - self.ic_lg_conj(l, &neg);
                best = max_of(best.into_iter().chain(std::iter::once(val)));
            }
        }
        best
    }

    /// `max_{λ,u,v} −f*(x*+u) − i_C*(v) − (λG)*(−u−v)`.
    pub fn d3(&self, xstar: &[Q], lambdas: &[Vec<Q>], us: &[Vec<Q>], vs: &[Vec<Q>]) -> Option<Q> {
        let mut best: Option<Q> = None;
        for l in lambdas {
            for u in us {
                let shifted: Vec<Q> = (0..u.len()).map(|i| xstar[i] + u[i]).collect();
                let fc = self.f_conj(&shifted);
                for v in vs {
                    let rest: Vec<Q> = (0..u.len()).map(|i| -u[i] - v[i]).collect();
                    let val = -fc - self.ic_conj(v) - self.lg_conj(l, &rest);
                    best = max_of(best.into_iter().chain(std::iter::once(val)));
                }
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{q, qr};

    fn v(xs: &[i64]) -> Vector {
        Vector::from_ints(xs)
    }

    #[test]
    fn region_examples_rederived() {
        let k = Cone::orthant(2);
        let m = [v(&[0, 0]), v(&[2, -1])];
        let labels = brute_region(&m, &k, &[v(&[1, -1]), v(&[1, 0]), v(&[-1, -1])]);
        assert_eq!(
            labels,
            vec![RegionLabel::Frontier, RegionLabel::Upper, RegionLabel::Lower]
        );
        let single = brute_region(&[v(&[0, 0])], &k, &[v(&[-3, 0]), v(&[0, -2]), v(&[-1, -1])]);
        assert_eq!(
            single,
            vec![RegionLabel::Frontier, RegionLabel::Frontier, RegionLabel::Lower]
        );
        let k1 = Cone::orthant(1);
        let scalar = brute_region(&[v(&[1]), v(&[3]), v(&[2])], &k1, &[v(&[3]), v(&[2]), v(&[4])]);
        assert_eq!(
            scalar,
            vec![RegionLabel::Frontier, RegionLabel::Lower, RegionLabel::Upper]
        );
    }

    #[test]
    fn upper_test_agrees_with_labels() {
        let k = Cone::orthant(2);
        let m = [v(&[0, 0]), v(&[2, -1])];
        assert!(in_upper(&m, &k, &v(&[1, 0])));
        assert!(!in_upper(&m, &k, &v(&[1, -1])));
        assert!(!in_upper(&m, &k, &v(&[-1, -1])));
    }

    #[test]
    fn staircase_wsum_rederived() {
        let k = Cone::orthant(2);
        let u = [v(&[0, 1]), v(&[1, 0])];
        let labels = brute_wsum(
            &u,
            &u,
            &k,
            &[v(&[1, 1]), v(&[0, 2]), v(&[1, 2]), v(&[0, 1]), v(&[0, 0])],
        );
        assert_eq!(
            labels,
            vec![
                RegionLabel::Frontier,
                RegionLabel::Frontier,
                RegionLabel::Upper,
                RegionLabel::Frontier,
                RegionLabel::Lower
            ]
        );
    }

    #[test]
    fn conjugate_of_identity() {
        let samples: Vec<(Vector, Vector)> = (0..3).map(|i| (v(&[i]), v(&[i]))).collect();
        let one = LinOp::from_entries(1, 1, vec![q(1)]).unwrap();
        assert!(brute_conjugate(&samples, &one).iter().all(|p| p.is_zero()));
    }

    fn e1() -> ScalarProblem {
        let xs: Vec<Vector> = (0..5).map(|i| Vector(vec![qr(i, 2)])).collect();
        ScalarProblem {
            f: xs.iter().map(|x| x[0]).collect(),
            g: xs.iter().map(|x| Vector(vec![q(1) - x[0]])).collect(),
            c: (0..5).collect(),
            s_normals: vec![v(&[1])],
            xs,
        }
    }

    #[test]
    fn scalar_example_table() {
        let p = e1();
        let lambdas: Vec<Vec<Q>> = (0..5).map(|i| vec![qr(i, 2)]).collect();
        // inner infimum of f + λG over C for λ = 0, 1/2, 1, 3/2, 2
        let inner: Vec<Q> = lambdas
            .iter()
            .map(|l| p.d1(&[q(0)], std::slice::from_ref(l)).unwrap())
            .collect();
        assert_eq!(inner, vec![q(0), qr(1, 2), q(1), qr(1, 2), q(0)]);
        assert_eq!(p.primal(&[q(0)]), Some(q(1)));
        let us: Vec<Vec<Q>> = (-4..=4).map(|i| vec![qr(i, 2)]).collect();
        assert_eq!(p.d2(&[q(0)], &lambdas, &us), Some(q(1)));
        assert_eq!(p.d3(&[q(0)], &lambdas, &us, &us), Some(q(1)));
        // λ = 1 at x* = 0: (f + i_C + G)*(0) = −1
        assert_eq!(-p.d1(&[q(0)], &[vec![q(1)]]).unwrap(), q(-1));
        assert_eq!(p.ic_lg_conj(&[q(1)], &[q(0)]), q(1));
    }

    #[test]
    fn beta_on_raw_clouds() {
        let k = Cone::orthant(1);
        let cloud = vec![v(&[-1]), v(&[-2])];
        assert!(brute_beta(std::slice::from_ref(&cloud), &k, &v(&[-1])));
        assert!(!brute_beta(&[cloud], &k, &Vector(vec![qr(-3, 2)])));
    }
}
