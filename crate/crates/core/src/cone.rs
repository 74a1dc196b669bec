//! Solid pointed polyhedral cones and the strict order they induce.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::num::{dot, invert, null_direction, q_to_f64, rank, Vector, Q};

/// Decision mode for sign tests against the facet normals.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum Tolerance {
    #[default]
    Exact,
    Float(f64),
}

impl Tolerance {
    pub fn from_f64(tol: f64) -> Tolerance {
        if tol == 0.0 {
            Tolerance::Exact
        } else {
            Tolerance::Float(tol)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PointClass {
    Interior,
    Boundary,
    Outside,
}

#[derive(Clone, Debug)]
pub struct Cone {
    dim: usize,
    normals: Vec<Vector>,
    generators: Vec<Vector>,
    witness: Vector,
    rays: Vec<Vector>,
    // rows of the inverse ray basis, present when K has exactly `dim` extreme rays
    basis_inv: Option<Vec<Vector>>,
    tol: Tolerance,
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.normals == other.normals
            && self.generators == other.generators
            && self.tol == other.tol
    }
}

fn canonical_list(vs: Vec<Vector>) -> Vec<Vector> {
    let mut out: Vec<Vector> = vs.into_iter().map(|v| v.normalized()).collect();
    out.sort();
    out.dedup();
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Directions `d` with every `a·d >= 0` that are cut out by `dim - 1` of the `constraints`.
fn extreme_directions(constraints: &[Vector], dim: usize) -> Vec<Vector> {
    if dim == 1 {
        let pos = constraints.iter().all(|a| !a[0].is_negative());
        let neg = constraints.iter().all(|a| !a[0].is_positive());
        let mut out = Vec::new();
        if pos {
            out.push(Vector::from_ints(&[1]));
        }
        if neg {
            out.push(Vector::from_ints(&[-1]));
        }
        return out;
    }
    let mut out = Vec::new();
    for sub in subsets(constraints.len(), dim - 1) {
        let rows: Vec<Vector> = sub.iter().map(|&i| constraints[i].clone()).collect();
        let Some(d) = null_direction(&rows, dim) else { continue };
        let vals: Vec<Q> = constraints.iter().map(|a| a.dot(&d)).collect();
        if vals.iter().all(|v| !v.is_negative()) {
            out.push(d);
        } else if vals.iter().all(|v| !v.is_positive()) {
            out.push(-&d);
        }
    }
    canonical_list(out)
}

impl Cone {
    /// Validates an H/V pair with an interior witness.
    pub fn new(normals: Vec<Vector>, generators: Vec<Vector>, witness: Vector) -> Result<Cone> {
        let dim = witness.dim();
        if dim == 0 {
            return Err(Error::InvalidCone("zero-dimensional space".into()));
        }
        if normals.is_empty() {
            return Err(Error::InvalidCone("at least one normal is required".into()));
        }
        for a in normals.iter().chain(&generators) {
            check_dim("cone literal", dim, a.dim())?;
        }
        if normals.iter().any(Vector::is_zero) {
            return Err(Error::InvalidCone("zero normal".into()));
        }
        if normals.iter().any(|a| !a.dot(&witness).is_positive()) {
            return Err(Error::InvalidCone(format!(
                "interior witness {witness} does not strictly satisfy every normal"
            )));
        }
        if rank(&normals) < dim {
            return Err(Error::InvalidCone(
                "cone contains a line (normals do not span the space)".into(),
            ));
        }
        if generators.is_empty() {
            return Err(Error::InvalidCone("at least one generator is required".into()));
        }
        for g in &generators {
            if g.is_zero() {
                return Err(Error::InvalidCone("zero generator".into()));
            }
            if normals.iter().any(|a| a.dot(g).is_negative()) {
                return Err(Error::InvalidCone(format!("generator {g} violates a normal")));
            }
        }
        let normals = canonical_list(normals);
        let generators = canonical_list(generators);
        let rays = extreme_directions(&normals, dim);
        for r in &rays {
            if !generators.contains(r) {
                return Err(Error::InvalidCone(format!("generators miss the extreme ray {r}")));
            }
        }
        let basis_inv = if rays.len() == dim {
            // columns are the rays; invert via the transpose
            let cols: Vec<Vector> = (0..dim).map(|i| Vector(rays.iter().map(|r| r[i]).collect())).collect();
            invert(&cols)
        } else {
            None
        };
        Ok(Cone {
            dim,
            normals,
            generators,
            witness,
            rays,
            basis_inv,
            tol: Tolerance::Exact,
        })
    }

    pub fn from_normals(normals: Vec<Vector>) -> Result<Cone> {
        let dim = normals
            .first()
            .map(Vector::dim)
            .ok_or_else(|| Error::InvalidCone("no normals".into()))?;
        for a in &normals {
            check_dim("cone normals", dim, a.dim())?;
        }
        if normals.iter().any(Vector::is_zero) {
            return Err(Error::InvalidCone("zero normal".into()));
        }
        let rays = extreme_directions(&normals, dim);
        if rays.is_empty() {
            return Err(Error::InvalidCone("normals leave only the origin".into()));
        }
        let witness = rays.iter().skip(1).fold(rays[0].clone(), |acc, r| &acc + r);
        Cone::new(normals, rays, witness)
    }

    pub fn from_generators(generators: Vec<Vector>) -> Result<Cone> {
        let dim = generators
            .first()
            .map(Vector::dim)
            .ok_or_else(|| Error::InvalidCone("no generators".into()))?;
        for g in &generators {
            check_dim("cone generators", dim, g.dim())?;
        }
        let normals = extreme_directions(&generators, dim);
        if normals.is_empty() {
            return Err(Error::InvalidCone("generators span every direction".into()));
        }
        let witness = generators.iter().skip(1).fold(generators[0].clone(), |acc, g| &acc + g);
        Cone::new(normals, generators, witness)
    }

    /// The nonnegative orthant of R^m.
    pub fn orthant(m: usize) -> Cone {
        let units: Vec<Vector> = (0..m)
            .map(|i| {
                Vector(
                    (0..m)
                        .map(|j| if i == j { Q::from_integer(1) } else { Q::zero() })
                        .collect(),
                )
            })
            .collect();
        Cone::new(units.clone(), units, Vector(vec![Q::from_integer(1); m])).expect("orthant is a valid cone")
    }

    pub fn with_tolerance(mut self, tol: Tolerance) -> Cone {
        self.tol = tol;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn normals(&self) -> &[Vector] {
        &self.normals
    }

    pub fn generators(&self) -> &[Vector] {
        &self.generators
    }

    pub fn interior_witness(&self) -> &Vector {
        &self.witness
    }

    pub fn extreme_rays(&self) -> &[Vector] {
        &self.rays
    }

    pub fn tolerance(&self) -> Tolerance {
        self.tol
    }

    pub fn is_simplicial(&self) -> bool {
        self.basis_inv.is_some()
    }

    pub fn normal_values(&self, y: &Vector) -> Vec<Q> {
        self.normals.iter().map(|a| dot(&a.0, &y.0)).collect()
    }

    /// Classification from precomputed normal values `a_i·y`.
    pub fn classify_values(&self, vals: &[Q]) -> PointClass {
        match self.tol {
            Tolerance::Exact => {
                let mut all_pos = true;
                for v in vals {
                    if v.is_negative() {
                        return PointClass::Outside;
                    }
                    if v.is_zero() {
                        all_pos = false;
                    }
                }
                if all_pos {
                    PointClass::Interior
                } else {
                    PointClass::Boundary
                }
            }
            Tolerance::Float(t) => {
                let mut all_pos = true;
                for v in vals {
                    let f = q_to_f64(v);
                    if f < -t {
                        return PointClass::Outside;
                    }
                    if f <= t {
                        all_pos = false;
                    }
                }
                if all_pos {
                    PointClass::Interior
                } else {
                    PointClass::Boundary
                }
            }
        }
    }

    /// `a_i·x - a_i·y` for all normals, classified.
    pub(crate) fn classify_diff(&self, x: &[Q], y: &[Q]) -> PointClass {
        let diffs: Vec<Q> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        self.classify_values(&diffs)
    }

    pub fn classify(&self, y: &Vector) -> Result<PointClass> {
        check_dim("classify_point", self.dim, y.dim())?;
        Ok(self.classify_values(&self.normal_values(y)))
    }

    pub fn contains(&self, y: &Vector) -> bool {
        debug_assert_eq!(y.dim(), self.dim);
        self.classify_values(&self.normal_values(y)) != PointClass::Outside
    }

    pub fn contains_interior(&self, y: &Vector) -> bool {
        debug_assert_eq!(y.dim(), self.dim);
        self.classify_values(&self.normal_values(y)) == PointClass::Interior
    }

    /// Coordinates of `y` in the extreme-ray basis; `K` becomes the orthant.
    pub fn to_ray_coords(&self, y: &Vector) -> Option<Vector> {
        let inv = self.basis_inv.as_ref()?;
        Some(Vector(inv.iter().map(|row| row.dot(y)).collect()))
    }

    pub fn from_ray_coords(&self, z: &Vector) -> Vector {
        let mut out = Vector::zeros(self.dim);
        for (r, c) in self.rays.iter().zip(z.iter()) {
            out = &out + &r.scale(c);
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "normals": self.normals.iter().map(Vector::to_exact_json).collect::<Vec<_>>(),
            "generators": self.generators.iter().map(Vector::to_exact_json).collect::<Vec<_>>(),
            "interior_witness": self.witness.to_exact_json(),
        })
    }
}

pub fn classify_point(k: &Cone, y: &Vector, tol: Tolerance) -> Result<PointClass> {
    check_dim("classify_point", k.dim(), y.dim())?;
    let vals = k.normal_values(y);
    Ok(if tol == k.tol {
        k.classify_values(&vals)
    } else {
        k.clone().with_tolerance(tol).classify_values(&vals)
    })
}

/// `y1 <_K y2`, i.e. `y2 - y1` lies in the interior of `K`.
pub fn weak_less(k: &Cone, y1: &Vector, y2: &Vector) -> Result<bool> {
    check_dim("weak_less", k.dim(), y1.dim())?;
    check_dim("weak_less", k.dim(), y2.dim())?;
    Ok(k.contains_interior(&(y2 - y1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{q, qr};

    fn v(xs: &[i64]) -> Vector {
        Vector::from_ints(xs)
    }

    #[test]
    fn orthant_classification() {
        let k = Cone::orthant(2);
        assert_eq!(k.classify(&v(&[1, 1])).unwrap(), PointClass::Interior);
        assert_eq!(k.classify(&v(&[0, 3])).unwrap(), PointClass::Boundary);
        assert_eq!(k.classify(&v(&[-1, 2])).unwrap(), PointClass::Outside);
        assert!(k.classify(&v(&[1])).is_err());
    }

    #[test]
    fn weak_order_examples() {
        let k = Cone::orthant(2);
        assert!(weak_less(&k, &v(&[0, 0]), &v(&[1, 1])).unwrap());
        assert!(!weak_less(&k, &v(&[0, 0]), &v(&[1, 0])).unwrap());
        let k2 = Cone::from_normals(vec![v(&[1, 0]), v(&[1, 1])]).unwrap();
        let y = Vector(vec![q(1), qr(-1, 2)]);
        assert!(weak_less(&k2, &v(&[0, 0]), &y).unwrap());
    }

    #[test]
    fn normals_and_generators_round_trip() {
        let k = Cone::from_normals(vec![v(&[1, 0]), v(&[1, 1])]).unwrap();
        assert_eq!(k.extreme_rays().len(), 2);
        for r in k.extreme_rays() {
            assert!(k.contains(r));
            assert!(!k.contains_interior(r));
        }
        let k2 = Cone::from_generators(k.generators().to_vec()).unwrap();
        assert_eq!(k.normals(), k2.normals());
        assert!(k.is_simplicial());
    }

    #[test]
    fn validation_rejects_bad_cones() {
        assert!(Cone::new(vec![], vec![v(&[1])], v(&[1])).is_err());
        assert!(Cone::new(vec![v(&[1, 0])], vec![v(&[1, 0])], v(&[1, 1])).is_err());
        assert!(Cone::new(vec![v(&[1, 0]), v(&[0, 1])], vec![v(&[1, 0]), v(&[0, 1])], v(&[0, 1])).is_err());
        assert!(Cone::new(vec![v(&[1, 0]), v(&[0, 1])], vec![v(&[1, 0])], v(&[1, 1])).is_err());
        assert!(Cone::new(vec![v(&[1, 0]), v(&[0, 1])], vec![v(&[1, -1]), v(&[0, 1])], v(&[1, 1])).is_err());
    }

    #[test]
    fn ray_coordinates_map_cone_to_orthant() {
        let k = Cone::from_generators(vec![v(&[1, 0]), v(&[1, 2])]).unwrap();
        let y = v(&[3, 2]);
        let z = k.to_ray_coords(&y).unwrap();
        assert_eq!(k.from_ray_coords(&z), y);
        assert!(z.iter().all(|c| !c.is_negative()));
    }

    #[test]
    fn non_simplicial_cone_in_three_dimensions() {
        let k = Cone::from_generators(vec![v(&[1, 0, 1]), v(&[0, 1, 1]), v(&[-1, 0, 1]), v(&[0, -1, 1])]).unwrap();
        assert_eq!(k.normals().len(), 4);
        assert!(!k.is_simplicial());
        assert!(k.contains_interior(&v(&[0, 0, 1])));
    }

    #[test]
    fn float_mode_blurs_small_values() {
        let k = Cone::orthant(2).with_tolerance(Tolerance::Float(1e-6));
        let y = Vector(vec![qr(1, 10_000_000), q(1)]);
        assert_eq!(k.classify(&y).unwrap(), PointClass::Boundary);
        assert_eq!(classify_point(&k, &y, Tolerance::Exact).unwrap(), PointClass::Interior);
    }
}
