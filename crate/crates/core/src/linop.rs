//! Matrices standing for continuous linear maps, and the positive ones.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::cone::Cone;
use crate::error::{check_dim, Error, Result};
use crate::num::{dot, grid_values, q_to_string, Vector, Q};

/// Row-major `rows × cols` matrix, mapping R^cols to R^rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinOp {
    rows: usize,
    cols: usize,
    entries: Vec<Q>,
}

impl LinOp {
    pub fn zeros(rows: usize, cols: usize) -> LinOp {
        LinOp {
            rows,
            cols,
            entries: vec![Q::zero(); rows * cols],
        }
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Q>) -> Result<LinOp> {
        check_dim("matrix entries", rows * cols, entries.len())?;
        Ok(LinOp { rows, cols, entries })
    }

    pub fn from_rows(rows: &[Vector]) -> Result<LinOp> {
        let cols = rows.first().map_or(0, Vector::dim);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            check_dim("matrix row", cols, r.dim())?;
            entries.extend(r.iter().cloned());
        }
        Ok(LinOp {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Q] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> &Q {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        check_dim("operator argument", self.cols, x.dim())?;
        Ok(self.apply_unchecked(x))
    }

    pub(crate) fn apply_unchecked(&self, x: &Vector) -> Vector {
        Vector((0..self.rows).map(|i| dot(self.row(i), &x.0)).collect())
    }

    fn check_same_shape(&self, other: &LinOp) -> Result<()> {
        check_dim("operator rows", self.rows, other.rows)?;
        check_dim("operator columns", self.cols, other.cols)
    }

    pub fn add(&self, other: &LinOp) -> Result<LinOp> {
        self.check_same_shape(other)?;
        Ok(LinOp {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &LinOp) -> Result<LinOp> {
        self.check_same_shape(other)?;
        Ok(LinOp {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn neg(&self) -> LinOp {
        LinOp {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| -a).collect(),
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinOp) -> Result<LinOp> {
        check_dim("operator composition", self.cols, inner.rows)?;
        let mut entries = Vec::with_capacity(self.rows * inner.cols);
        for i in 0..self.rows {
            for j in 0..inner.cols {
                entries.push((0..self.cols).fold(Q::zero(), |acc, k| acc + self.entry(i, k) * inner.entry(k, j)));
            }
        }
        Ok(LinOp {
            rows: self.rows,
            cols: inner.cols,
            entries,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            (0..self.rows)
                .map(|i| Vector(self.row(i).to_vec()).to_exact_json())
                .collect(),
        )
    }

    /// Parses `[[..],..]`; a bare number is read as a 1×1 matrix.
    pub fn from_json(v: &serde_json::Value, rows: usize, cols: usize) -> Result<LinOp> {
        let op = match v {
            serde_json::Value::Array(rs) if rs.iter().all(|r| r.is_array()) => {
                let rows_v: Vec<Vector> = rs.iter().map(Vector::from_json).collect::<Result<_>>()?;
                if rows_v.is_empty() {
                    LinOp::zeros(0, cols)
                } else {
                    LinOp::from_rows(&rows_v)?
                }
            }
            serde_json::Value::Array(_) => {
                // flat list, row-major
                let flat = Vector::from_json(v)?;
                LinOp::from_entries(rows, cols, flat.0)?
            }
            _ => {
                let x = Vector::from_json(v)?;
                LinOp::from_entries(1, 1, x.0)?
            }
        };
        check_dim("operator rows", rows, op.rows)?;
        check_dim("operator columns", cols, op.cols)?;
        Ok(op)
    }
}

impl fmt::Display for LinOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(q_to_string).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// An operator `T: Z → Y` with `T(S) ⊂ K`, checked on the generators of `S`.
#[derive(Clone, Debug)]
pub struct PosOp {
    op: LinOp,
    domain_cone: Arc<Cone>,
    range_cone: Arc<Cone>,
}

impl PartialEq for PosOp {
    fn eq(&self, other: &Self) -> bool {
        self.op == other.op
    }
}

impl PosOp {
    pub fn new(op: LinOp, s: &Arc<Cone>, k: &Arc<Cone>) -> Result<PosOp> {
        if !is_positive_operator(&op, s, k)? {
            return Err(Error::NotPositive);
        }
        Ok(PosOp {
            op,
            domain_cone: s.clone(),
            range_cone: k.clone(),
        })
    }

    pub fn zero(s: &Arc<Cone>, k: &Arc<Cone>) -> PosOp {
        PosOp {
            op: LinOp::zeros(k.dim(), s.dim()),
            domain_cone: s.clone(),
            range_cone: k.clone(),
        }
    }

    pub fn op(&self) -> &LinOp {
        &self.op
    }

    pub fn domain_cone(&self) -> &Arc<Cone> {
        &self.domain_cone
    }

    pub fn range_cone(&self) -> &Arc<Cone> {
        &self.range_cone
    }
}

pub fn is_positive_operator(t: &LinOp, s: &Cone, k: &Cone) -> Result<bool> {
    check_dim("positive operator columns", s.dim(), t.cols())?;
    check_dim("positive operator rows", k.dim(), t.rows())?;
    if s.generators().is_empty() {
        return Err(Error::InvalidCone("domain cone has no generators".into()));
    }
    Ok(s.generators().iter().all(|g| {
        let img = t.apply_unchecked(g);
        k.normals().iter().all(|a| dot(&a.0, &img.0) >= Q::zero())
    }))
}

/// All `rows × cols` matrices with entries on `{-box, -box+step, …, box}`, in
/// lexicographic order of their row-major entries.
pub fn grid_operators(rows: usize, cols: usize, bound: &Q, step: &Q) -> Result<Vec<LinOp>> {
    let axis = grid_values(&-bound, bound, step)?;
    let len = rows * cols;
    let total = (axis.len() as u128).checked_pow(len as u32).unwrap_or(u128::MAX);
    if total > 2_000_000 {
        return Err(Error::Malformed(format!("operator grid too large ({total} matrices)")));
    }
    let mut out = Vec::with_capacity(total as usize);
    let mut idx = vec![0usize; len];
    loop {
        out.push(LinOp {
            rows,
            cols,
            entries: idx.iter().map(|&i| axis[i]).collect(),
        });
        let mut d = len;
        loop {
            if d == 0 {
                return Ok(out);
            }
            d -= 1;
            idx[d] += 1;
            if idx[d] < axis.len() {
                break;
            }
            idx[d] = 0;
        }
    }
}

pub fn sample_positive_operators(s: &Arc<Cone>, k: &Arc<Cone>, bound: &Q, step: &Q) -> Result<Vec<PosOp>> {
    let mut out = Vec::new();
    let mut saw_zero = false;
    for op in grid_operators(k.dim(), s.dim(), bound, step)? {
        if is_positive_operator(&op, s, k)? {
            saw_zero |= op.is_zero();
            out.push(PosOp {
                op,
                domain_cone: s.clone(),
                range_cone: k.clone(),
            });
        }
    }
    if !saw_zero {
        // the grid skipped 0 (step does not divide box); it is positive anyway
        out.insert(0, PosOp::zero(s, k));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{q, qr};

    fn col(xs: &[i64]) -> LinOp {
        LinOp::from_entries(xs.len(), 1, xs.iter().map(|&x| q(x)).collect()).unwrap()
    }

    #[test]
    fn positivity_examples() {
        let s = Cone::orthant(1);
        let k = Cone::orthant(2);
        assert!(is_positive_operator(&LinOp::zeros(2, 1), &s, &k).unwrap());
        assert!(is_positive_operator(&col(&[1, 2]), &s, &k).unwrap());
        assert!(!is_positive_operator(&col(&[1, -1]), &s, &k).unwrap());
        assert!(is_positive_operator(&col(&[1, 2, 3]), &s, &k).is_err());
    }

    #[test]
    fn posop_rejects_negative_entries() {
        let s = Arc::new(Cone::orthant(1));
        let k = Arc::new(Cone::orthant(2));
        assert_eq!(PosOp::new(col(&[1, -1]), &s, &k).unwrap_err(), Error::NotPositive);
    }

    #[test]
    fn positive_operator_samples() {
        let s1 = Arc::new(Cone::orthant(1));
        let k1 = Arc::new(Cone::orthant(1));
        let ops = sample_positive_operators(&s1, &k1, &q(1), &q(1)).unwrap();
        let vals: Vec<Q> = ops.iter().map(|t| *t.op().entry(0, 0)).collect();
        assert_eq!(vals, vec![q(0), q(1)]);

        let k2 = Arc::new(Cone::orthant(2));
        let ops = sample_positive_operators(&s1, &k2, &q(1), &q(1)).unwrap();
        let got: Vec<Vec<Q>> = ops.iter().map(|t| t.op().entries().to_vec()).collect();
        assert_eq!(
            got,
            vec![vec![q(0), q(0)], vec![q(0), q(1)], vec![q(1), q(0)], vec![q(1), q(1)]]
        );

        let s2 = Arc::new(Cone::orthant(2));
        let ops = sample_positive_operators(&s2, &k1, &q(1), &qr(1, 2)).unwrap();
        assert_eq!(ops.len(), 9);
        assert!(ops.iter().all(|t| t.op().entries().iter().all(|x| *x >= q(0))));
    }

    #[test]
    fn composition_and_application() {
        let a = LinOp::from_rows(&[Vector::from_ints(&[1, 2]), Vector::from_ints(&[0, 1])]).unwrap();
        let b = col(&[1, 1]);
        let ab = a.compose(&b).unwrap();
        assert_eq!(ab.apply(&Vector::from_ints(&[2])).unwrap(), Vector::from_ints(&[6, 2]));
        assert!(b.compose(&a).is_err());
    }
}
