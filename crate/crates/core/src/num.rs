//! Exact scalars and coordinate vectors.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{check_dim, Error, Result};

pub type Q = Ratio<i128>;

pub fn q(n: i64) -> Q {
    Q::from_integer(n as i128)
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(n as i128, d as i128)
}

/// Parses `"3"`, `"-0.25"`, `"1e-3"` or `"2/7"` into an exact rational.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Malformed(format!("not a number: {s:?}"));
    if let Some((a, b)) = s.split_once('/') {
        let n: i128 = a.trim().parse().map_err(|_| bad())?;
        let d: i128 = b.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Q::new(n, d));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let digits = digits.trim_start_matches('0');
    if digits.len() > 30 {
        return Err(Error::Malformed(format!("too many digits for exact mode: {s:?}")));
    }
    let mut n: i128 = if digits.is_empty() {
        0
    } else {
        digits.parse().map_err(|_| bad())?
    };
    if neg {
        n = -n;
    }
    let shift = exp - frac_part.len() as i32;
    if shift.unsigned_abs() > 30 {
        return Err(Error::Malformed(format!("exponent out of range: {s:?}")));
    }
    let p = 10i128.pow(shift.unsigned_abs());
    Ok(if shift >= 0 {
        Q::from_integer(n * p)
    } else {
        Q::new(n, p)
    })
}

pub fn q_from_json(v: &serde_json::Value) -> Result<Q> {
    match v {
        serde_json::Value::Number(n) => parse_q(&n.to_string()),
        serde_json::Value::String(s) => parse_q(s),
        other => Err(Error::Malformed(format!("expected a number, found {other}"))),
    }
}

pub fn q_to_f64(x: &Q) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}

pub fn q_to_string(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// JSON number for plots and summaries; exact strings travel separately.
pub fn q_to_json(x: &Q) -> serde_json::Value {
    serde_json::Number::from_f64(q_to_f64(x))
        .map(serde_json::Value::Number)
        .unwrap_or(serde_json::Value::Null)
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Vector(pub Vec<Q>);

impl Vector {
    pub fn zeros(n: usize) -> Self {
        Vector(vec![Q::zero(); n])
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        Vector(xs.iter().map(|&x| q(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Q> {
        self.0.iter()
    }

    pub fn dot(&self, other: &Vector) -> Q {
        dot(&self.0, &other.0)
    }

    pub fn scale(&self, c: &Q) -> Vector {
        Vector(self.0.iter().map(|x| x * c).collect())
    }

    pub fn checked_add(&self, other: &Vector) -> Result<Vector> {
        check_dim("vector sum", self.dim(), other.dim())?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Vector) -> Result<Vector> {
        check_dim("vector difference", self.dim(), other.dim())?;
        Ok(self - other)
    }

    /// Positive rescaling so that the largest absolute entry is 1.
    pub fn normalized(&self) -> Vector {
        let m = self.0.iter().map(|x| x.abs()).max().unwrap_or_else(Q::zero);
        if m.is_zero() {
            self.clone()
        } else {
            self.scale(&m.recip())
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(q_to_f64).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.0.iter().map(q_to_json).collect())
    }

    pub fn to_exact_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.0
                .iter()
                .map(|x| serde_json::Value::String(q_to_string(x)))
                .collect(),
        )
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Vector> {
        match v {
            serde_json::Value::Array(xs) => Ok(Vector(xs.iter().map(q_from_json).collect::<Result<_>>()?)),
            // scalar shorthand for one-dimensional data
            serde_json::Value::Number(_) | serde_json::Value::String(_) => Ok(Vector(vec![q_from_json(v)?])),
            other => Err(Error::Malformed(format!("expected a vector, found {other}"))),
        }
    }
}

pub(crate) fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", q_to_string(x))?;
        }
        write!(f, ")")
    }
}

impl Index<usize> for Vector {
    type Output = Q;
    fn index(&self, i: usize) -> &Q {
        &self.0[i]
    }
}

impl From<Vec<Q>> for Vector {
    fn from(v: Vec<Q>) -> Self {
        Vector(v)
    }
}

impl Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), rhs.dim());
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), rhs.dim());
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        Vector(self.0.iter().map(|a| -a).collect())
    }
}

/// Values `lo, lo+step, …` up to `hi` inclusive.
pub fn grid_values(lo: &Q, hi: &Q, step: &Q) -> Result<Vec<Q>> {
    if step <= &Q::zero() {
        return Err(Error::Malformed("grid step must be positive".into()));
    }
    if hi < lo {
        return Err(Error::Malformed("grid upper bound below lower bound".into()));
    }
    let count = ((hi - lo) / step).floor().to_integer() + 1;
    if count > 100_000 {
        return Err(Error::Malformed(format!("grid too large ({count} values per axis)")));
    }
    Ok((0..count).map(|k| lo + step * Q::from_integer(k)).collect())
}

/// Cartesian grid over `[lo, hi]^dim`, lexicographic order.
pub fn grid_points(dim: usize, lo: &Q, hi: &Q, step: &Q) -> Result<Vec<Vector>> {
    let axis = grid_values(lo, hi, step)?;
    let total = axis.len().checked_pow(dim as u32).unwrap_or(usize::MAX);
    if total > 5_000_000 {
        return Err(Error::Malformed(format!("grid too large ({total} points)")));
    }
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0usize; dim];
    loop {
        out.push(Vector(idx.iter().map(|&i| axis[i]).collect()));
        let mut d = dim;
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

/// Rank of a list of vectors, by exact elimination.
pub fn rank(rows: &[Vector]) -> usize {
    let mut m: Vec<Vec<Q>> = rows.iter().map(|r| r.0.clone()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c];
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c] / pivot;
                for j in c..cols {
                    let v = m[r][j] * f;
                    m[i][j] -= v;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// A nonzero vector orthogonal to all `rows`, when their rank is `dim - 1`.
pub fn null_direction(rows: &[Vector], dim: usize) -> Option<Vector> {
    let mut m: Vec<Vec<Q>> = rows.iter().map(|r| r.0.clone()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..dim {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c];
        for j in 0..dim {
            m[r][j] /= pivot;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c];
                for j in 0..dim {
                    let v = m[r][j] * f;
                    m[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if pivots.len() + 1 != dim {
        return None;
    }
    let free = (0..dim).find(|c| !pivots.contains(c))?;
    let mut v = vec![Q::zero(); dim];
    v[free] = Q::one();
    for (row, &pc) in pivots.iter().enumerate() {
        v[pc] = -m[row][free];
    }
    Some(Vector(v))
}

/// Inverse of a square matrix given by rows, if it is invertible.
pub fn invert(rows: &[Vector]) -> Option<Vec<Vector>> {
    let n = rows.len();
    let mut a: Vec<Vec<Q>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.0.clone();
            row.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let pivot = a[c][c];
        for j in 0..2 * n {
            a[c][j] /= pivot;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c];
                for j in 0..2 * n {
                    let v = a[c][j] * f;
                    a[i][j] -= v;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| Vector(row[n..].to_vec())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_parsing_is_exact() {
        assert_eq!(parse_q("0.1").unwrap(), qr(1, 10));
        assert_eq!(parse_q("-2.50").unwrap(), qr(-5, 2));
        assert_eq!(parse_q("1e-3").unwrap(), qr(1, 1000));
        assert_eq!(parse_q("3/6").unwrap(), qr(1, 2));
        assert_eq!(parse_q("12").unwrap(), q(12));
        assert_eq!(parse_q(".5").unwrap(), qr(1, 2));
        assert!(parse_q("abc").is_err());
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("").is_err());
    }

    #[test]
    fn json_numbers_keep_their_decimal_value() {
        let v: serde_json::Value = serde_json::from_str("[0.1, 2, \"1/3\"]").unwrap();
        let x = Vector::from_json(&v).unwrap();
        assert_eq!(x.0, vec![qr(1, 10), q(2), qr(1, 3)]);
    }

    #[test]
    fn grid_is_inclusive() {
        let g = grid_values(&q(-1), &q(1), &qr(1, 2)).unwrap();
        assert_eq!(g.len(), 5);
        assert_eq!(grid_points(2, &q(0), &q(1), &q(1)).unwrap().len(), 4);
    }

    #[test]
    fn elimination_helpers() {
        let rows = vec![Vector::from_ints(&[1, 1, 0]), Vector::from_ints(&[0, 1, 1])];
        assert_eq!(rank(&rows), 2);
        let d = null_direction(&rows, 3).unwrap();
        assert!(rows.iter().all(|r| r.dot(&d).is_zero()));
        let inv = invert(&[Vector::from_ints(&[2, 1]), Vector::from_ints(&[1, 1])]).unwrap();
        assert_eq!(inv[0], Vector::from_ints(&[1, -1]));
        assert_eq!(inv[1], Vector::from_ints(&[-1, 2]));
    }
}
