//! Sampled vector maps, their conjugates, and extended epigraphs.

use std::sync::Arc;

use crate::cone::{Cone, PointClass};
use crate::error::{check_dim, Error, Result};
use crate::linop::LinOp;
use crate::num::Vector;
use crate::order::{GenSet, RegionLabel};

/// A map `R^n → R^m` known on finitely many points and `+∞` elsewhere.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledMap {
    in_dim: usize,
    out_dim: usize,
    // sorted by x, no repeats
    samples: Vec<(Vector, Vector)>,
}

impl SampledMap {
    pub fn new(in_dim: usize, out_dim: usize, mut samples: Vec<(Vector, Vector)>) -> Result<SampledMap> {
        if samples.is_empty() {
            return Err(Error::EmptyDomain("a sampled map needs at least one sample".into()));
        }
        for (x, y) in &samples {
            check_dim("sample point", in_dim, x.dim())?;
            check_dim("sample value", out_dim, y.dim())?;
        }
        samples.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(w) = samples.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::Malformed(format!("duplicate sample point {}", w[0].0)));
        }
        Ok(SampledMap {
            in_dim,
            out_dim,
            samples,
        })
    }

    /// `I_C`: zero on `C`, `+∞` off it.
    pub fn indicator(points: &[Vector], in_dim: usize, out_dim: usize) -> Result<SampledMap> {
        let mut pts = points.to_vec();
        pts.sort();
        pts.dedup();
        SampledMap::new(
            in_dim,
            out_dim,
            pts.into_iter().map(|x| (x, Vector::zeros(out_dim))).collect(),
        )
    }

    /// The linear map `x ↦ A x` sampled on `points`.
    pub fn linear(a: &LinOp, points: &[Vector]) -> Result<SampledMap> {
        let mut pts = points.to_vec();
        pts.sort();
        pts.dedup();
        let samples = pts
            .into_iter()
            .map(|x| a.apply(&x).map(|y| (x, y)))
            .collect::<Result<Vec<_>>>()?;
        SampledMap::new(a.cols(), a.rows(), samples)
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn samples(&self) -> &[(Vector, Vector)] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn domain(&self) -> Vec<Vector> {
        self.samples.iter().map(|s| s.0.clone()).collect()
    }

    pub fn value(&self, x: &Vector) -> Option<&Vector> {
        self.samples
            .binary_search_by(|s| s.0.cmp(x))
            .ok()
            .map(|i| &self.samples[i].1)
    }

    /// Pointwise sum on the common domain.
    pub fn add(&self, other: &SampledMap) -> Result<SampledMap> {
        check_dim("map sum inputs", self.in_dim, other.in_dim)?;
        check_dim("map sum outputs", self.out_dim, other.out_dim)?;
        let samples: Vec<(Vector, Vector)> = self
            .samples
            .iter()
            .filter_map(|(x, y)| other.value(x).map(|z| (x.clone(), y + z)))
            .collect();
        if samples.is_empty() {
            return Err(Error::EmptyDomain("the two maps have disjoint domains".into()));
        }
        Ok(SampledMap {
            samples,
            ..self.clone()
        })
    }

    /// `T ∘ self`.
    pub fn compose(&self, t: &LinOp) -> Result<SampledMap> {
        check_dim("composition", self.out_dim, t.cols())?;
        Ok(SampledMap {
            in_dim: self.in_dim,
            out_dim: t.rows(),
            samples: self
                .samples
                .iter()
                .map(|(x, z)| (x.clone(), t.apply_unchecked(z)))
                .collect(),
        })
    }

    /// `self + I_C`.
    pub fn restrict(&self, points: &[Vector]) -> Result<SampledMap> {
        let samples: Vec<(Vector, Vector)> = self
            .samples
            .iter()
            .filter(|(x, _)| points.contains(x))
            .cloned()
            .collect();
        if samples.is_empty() {
            return Err(Error::EmptyDomain("restriction misses every sample".into()));
        }
        Ok(SampledMap {
            samples,
            ..self.clone()
        })
    }

    /// `self − L`.
    pub fn sub_linear(&self, l: &LinOp) -> Result<SampledMap> {
        check_dim("linear shift rows", self.out_dim, l.rows())?;
        check_dim("linear shift columns", self.in_dim, l.cols())?;
        Ok(SampledMap {
            samples: self
                .samples
                .iter()
                .map(|(x, y)| (x.clone(), y - &l.apply_unchecked(x)))
                .collect(),
            ..self.clone()
        })
    }

    /// `{L(x) − F(x)}` over the samples.
    pub fn conjugate_cloud(&self, l: &LinOp) -> Result<Vec<Vector>> {
        check_dim("conjugate rows", self.out_dim, l.rows())?;
        check_dim("conjugate columns", self.in_dim, l.cols())?;
        Ok(self.samples.iter().map(|(x, y)| &l.apply_unchecked(x) - y).collect())
    }
}

/// `F*(L) = wsup{L(x) − F(x)}`.
pub fn conjugate(f: &SampledMap, l: &LinOp, k: &Arc<Cone>) -> Result<GenSet> {
    check_dim("conjugate cone", f.out_dim, k.dim())?;
    GenSet::sup(k, f.conjugate_cloud(l)?)
}

/// `(L, y) ∈ epi F*`, straight from the samples.
pub fn epi_membership(f: &SampledMap, l: &LinOp, y: &Vector, k: &Cone) -> Result<bool> {
    check_dim("epigraph cone", f.out_dim, k.dim())?;
    check_dim("epigraph point", f.out_dim, y.dim())?;
    let yd = k.normal_values(y);
    for c in f.conjugate_cloud(l)? {
        if k.classify_diff(&k.normal_values(&c), &yd) == PointClass::Interior {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A pair `(L, U)`; a member of the extended epigraph when `F*(L) ≼ U`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtEpiElement {
    pub op: LinOp,
    pub bound: GenSet,
}

impl ExtEpiElement {
    /// Checked constructor: fails unless `F*(op) ≼ bound`.
    pub fn new(f: &SampledMap, op: LinOp, bound: GenSet) -> Result<ExtEpiElement> {
        let e = ExtEpiElement { op, bound };
        if !exepi_membership(f, &e)? {
            return Err(Error::Malformed("bound lies below the conjugate".into()));
        }
        Ok(e)
    }

    pub fn of_conjugate(f: &SampledMap, op: LinOp, k: &Arc<Cone>) -> Result<ExtEpiElement> {
        let bound = conjugate(f, &op, k)?;
        Ok(ExtEpiElement { op, bound })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({"L": self.op.to_json(), "U": self.bound.to_json()})
    }
}

pub fn exepi_membership(f: &SampledMap, e: &ExtEpiElement) -> Result<bool> {
    if !e.bound.is_finite() {
        return Err(Error::Malformed("extended epigraph bounds must be finite sets".into()));
    }
    conjugate(f, &e.op, e.bound.cone())?.preceq(&e.bound)
}

/// `(L₁ + L₂, U₁ ⊎ U₂)`.
pub fn boxplus(e1: &ExtEpiElement, e2: &ExtEpiElement) -> Result<ExtEpiElement> {
    Ok(ExtEpiElement {
        op: e1.op.add(&e2.op)?,
        bound: e1.bound.ws_sum(&e2.bound)?,
    })
}

/// `A₁ ⊞ A₂ ⊞ …` over sets of pairs, in lexicographic order of the factors.
pub fn boxplus_fold(sets: &[Vec<ExtEpiElement>]) -> Result<Vec<ExtEpiElement>> {
    let (first, rest) = match sets.split_first() {
        Some(s) => s,
        None => return Ok(Vec::new()),
    };
    let mut acc = first.clone();
    for s in rest {
        let mut next = Vec::with_capacity(acc.len() * s.len());
        for a in &acc {
            for b in s {
                next.push(boxplus(a, b)?);
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// A family of pairs `(L, U)` together with a way to propose witnesses `U`.
pub trait WitnessFamily {
    fn admits(&self, op: &LinOp, bound: &GenSet) -> Result<bool>;

    /// Candidate bounds for `(op, y)`, most specific first.
    fn candidates(&self, op: &LinOp, y: &Vector) -> Result<Vec<GenSet>>;
}

/// `𝔈pi F*`.
pub struct ConjugateEpigraph<'a> {
    pub map: &'a SampledMap,
    pub cone: Arc<Cone>,
    pub hints: Vec<GenSet>,
    pub shifts: Vec<Vector>,
}

impl<'a> ConjugateEpigraph<'a> {
    pub fn new(map: &'a SampledMap, cone: &Arc<Cone>) -> Self {
        ConjugateEpigraph {
            map,
            cone: cone.clone(),
            hints: Vec::new(),
            shifts: Vec::new(),
        }
    }
}

impl WitnessFamily for ConjugateEpigraph<'_> {
    fn admits(&self, op: &LinOp, bound: &GenSet) -> Result<bool> {
        if !bound.is_finite() {
            return Ok(false);
        }
        exepi_membership(
            self.map,
            &ExtEpiElement {
                op: op.clone(),
                bound: bound.clone(),
            },
        )
    }

    fn candidates(&self, op: &LinOp, y: &Vector) -> Result<Vec<GenSet>> {
        let mut out = self.hints.clone();
        out.push(GenSet::inf(&self.cone, vec![y.clone()])?);
        let fc = conjugate(self.map, op, &self.cone)?;
        for s in &self.shifts {
            out.push(fc.translate(s)?);
        }
        let k0 = self.cone.interior_witness();
        let (t, _) = fc.frontier_point_along(y, k0)?;
        if t >= num_traits::Zero::zero() {
            out.push(fc.translate(&k0.scale(&t))?);
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PsiOutcome {
    Found { witness: GenSet, tried: usize },
    NotFound { tried: usize, diagnostic: String },
}

impl PsiOutcome {
    pub fn found(&self) -> bool {
        matches!(self, PsiOutcome::Found { .. })
    }
}

/// `(L, y) ∈ Ψ(family)`, trying at most `budget` witnesses.
pub fn psi_contains(family: &dyn WitnessFamily, l: &LinOp, y: &Vector, budget: usize) -> Result<PsiOutcome> {
    if budget == 0 {
        return Ok(PsiOutcome::NotFound {
            tried: 0,
            diagnostic: "empty witness budget".into(),
        });
    }
    let cands = family.candidates(l, y)?;
    let mut tried = 0;
    for u in cands.into_iter().take(budget) {
        tried += 1;
        if u.classify(y)? == RegionLabel::Frontier && family.admits(l, &u)? {
            return Ok(PsiOutcome::Found { witness: u, tried });
        }
    }
    Ok(PsiOutcome::NotFound {
        tried,
        diagnostic: format!("none of {tried} candidate bounds contains y"),
    })
}

/// Witness for `(L, y) ∈ Ψ(𝔈pi F₁* ⊞ 𝔈pi F₂*)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Split {
    pub l1: LinOp,
    pub l2: LinOp,
    pub u1: GenSet,
    pub u2: GenSet,
}

impl Split {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "L1": self.l1.to_json(),
            "L2": self.l2.to_json(),
            "U1": self.u1.to_json(),
            "U2": self.u2.to_json(),
        })
    }
}

/// Tries `L₁` from `candidates` in order with `L₂ = L − L₁`, accepting the first
/// for which `y ∉ F₁*(L₁) ⊎ F₂*(L₂) − int K`.
pub fn find_split(
    f1: &SampledMap,
    f2: &SampledMap,
    k: &Arc<Cone>,
    l: &LinOp,
    y: &Vector,
    candidates: &[LinOp],
) -> Result<Option<Split>> {
    let k0 = k.interior_witness();
    for l1 in candidates {
        let l2 = l.sub(l1)?;
        let c1 = conjugate(f1, l1, k)?;
        let c2 = conjugate(f2, &l2, k)?;
        let w = c1.ws_sum(&c2)?;
        if w.classify(y)? == RegionLabel::Lower {
            continue;
        }
        // lift the second bound along k0 until the sum passes through y
        let (t, _) = w.frontier_point_along(y, k0)?;
        let u2 = c2.translate(&k0.scale(&t))?;
        let split = Split {
            l1: l1.clone(),
            l2,
            u1: c1,
            u2,
        };
        debug_assert!(split.u1.ws_sum(&split.u2)?.contains(y)?);
        return Ok(Some(split));
    }
    Ok(None)
}

/// Recheck of a split against both extended epigraphs and `y ∈ U₁ ⊎ U₂`.
pub fn verify_split(f1: &SampledMap, f2: &SampledMap, l: &LinOp, y: &Vector, s: &Split) -> Result<bool> {
    if s.l1.add(&s.l2)? != *l {
        return Ok(false);
    }
    let e1 = ExtEpiElement {
        op: s.l1.clone(),
        bound: s.u1.clone(),
    };
    let e2 = ExtEpiElement {
        op: s.l2.clone(),
        bound: s.u2.clone(),
    };
    Ok(exepi_membership(f1, &e1)? && exepi_membership(f2, &e2)? && boxplus(&e1, &e2)?.bound.contains(y)?)
}

pub use crate::farkas::script_a_membership;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{q, qr};

    fn v(xs: &[i64]) -> Vector {
        Vector::from_ints(xs)
    }

    fn line_map() -> SampledMap {
        // F(x) = (x, −x) on {−1, 0, 1}
        SampledMap::new(1, 2, (-1..=1).map(|i| (v(&[i]), v(&[i, -i]))).collect()).unwrap()
    }

    #[test]
    fn scalar_identity_conjugate() {
        let k = Arc::new(Cone::orthant(1));
        let f = SampledMap::new(1, 1, (0..3).map(|i| (v(&[i]), v(&[i]))).collect()).unwrap();
        let one = LinOp::from_entries(1, 1, vec![q(1)]).unwrap();
        assert_eq!(conjugate(&f, &one, &k).unwrap().generator_points(), &[v(&[0])]);
        assert!(!epi_membership(&f, &one, &Vector(vec![qr(-1, 2)]), &k).unwrap());
        assert!(epi_membership(&f, &one, &v(&[0]), &k).unwrap());
    }

    #[test]
    fn line_conjugate_keeps_three_generators() {
        let k = Arc::new(Cone::orthant(2));
        let c = conjugate(&line_map(), &LinOp::zeros(2, 1), &k).unwrap();
        assert_eq!(c.generator_points(), &[v(&[-1, 1]), v(&[0, 0]), v(&[1, -1])]);
        let zero = LinOp::zeros(2, 1);
        assert!(epi_membership(&line_map(), &zero, &v(&[1, 1]), &k).unwrap());
        assert!(!epi_membership(&line_map(), &zero, &v(&[0, -2]), &k).unwrap());
    }

    #[test]
    fn singleton_indicator_is_neutral() {
        let k = Arc::new(Cone::orthant(2));
        let ic = SampledMap::indicator(&[v(&[0, 0])], 2, 2).unwrap();
        let l = LinOp::from_entries(2, 2, vec![q(3), q(-1), q(2), q(5)]).unwrap();
        assert_eq!(conjugate(&ic, &l, &k).unwrap(), crate::order::neutral(&k));
    }

    #[test]
    fn extended_epigraph_translations() {
        let k = Arc::new(Cone::orthant(2));
        let f = line_map();
        let zero = LinOp::zeros(2, 1);
        let c = conjugate(&f, &zero, &k).unwrap();
        let up = ExtEpiElement::new(&f, zero.clone(), c.translate(&v(&[1, 1])).unwrap());
        assert!(up.is_ok());
        let down = ExtEpiElement {
            op: zero.clone(),
            bound: c.translate(&v(&[-1, -1])).unwrap(),
        };
        assert!(!exepi_membership(&f, &down).unwrap());
        let e = ExtEpiElement::of_conjugate(&f, zero, &k).unwrap();
        assert!(exepi_membership(&f, &e).unwrap());
        let inf = ExtEpiElement {
            op: e.op.clone(),
            bound: GenSet::plus_inf(&k),
        };
        assert!(exepi_membership(&f, &inf).is_err());
    }

    #[test]
    fn boxplus_with_neutral_pair() {
        let k = Arc::new(Cone::orthant(2));
        let f = line_map();
        let e1 = ExtEpiElement::of_conjugate(&f, LinOp::from_entries(2, 1, vec![q(1), q(0)]).unwrap(), &k).unwrap();
        let e2 = ExtEpiElement {
            op: LinOp::zeros(2, 1),
            bound: crate::order::neutral(&k),
        };
        let s = boxplus(&e1, &e2).unwrap();
        assert_eq!(s.bound, e1.bound);
        assert_eq!(s.op, e1.op);
        let a = ExtEpiElement {
            op: LinOp::zeros(2, 1),
            bound: GenSet::sup(&k, vec![v(&[1, 2])]).unwrap(),
        };
        let b = ExtEpiElement {
            op: LinOp::zeros(2, 1),
            bound: GenSet::sup(&k, vec![v(&[-3, 1])]).unwrap(),
        };
        assert_eq!(boxplus(&a, &b).unwrap().bound.generator_points(), &[v(&[-2, 3])]);
        assert_eq!(boxplus_fold(&[vec![a.clone(), b.clone()], vec![e2]]).unwrap().len(), 2);
    }

    #[test]
    fn psi_matches_epigraph_on_a_grid() {
        let k = Arc::new(Cone::orthant(2));
        let f = line_map();
        let fam = ConjugateEpigraph::new(&f, &k);
        let l = LinOp::from_entries(2, 1, vec![q(1), q(-1)]).unwrap();
        for a in -3..=3 {
            for b in -3..=3 {
                let y = v(&[a, b]);
                let got = psi_contains(&fam, &l, &y, 8).unwrap().found();
                assert_eq!(got, epi_membership(&f, &l, &y, &k).unwrap(), "{y}");
            }
        }
        let none = psi_contains(&fam, &l, &v(&[5, 5]), 0).unwrap();
        assert!(matches!(none, PsiOutcome::NotFound { tried: 0, .. }));
    }

    #[test]
    fn split_for_linear_pair() {
        let k = Arc::new(Cone::orthant(2));
        let pts: Vec<Vector> = (-2..=2).map(|i| v(&[i])).collect();
        let a1 = LinOp::from_entries(2, 1, vec![q(1), q(0)]).unwrap();
        let a2 = LinOp::from_entries(2, 1, vec![q(0), q(2)]).unwrap();
        let f1 = SampledMap::linear(&a1, &pts).unwrap();
        let f2 = SampledMap::linear(&a2, &pts).unwrap();
        let sum = f1.add(&f2).unwrap();
        let l = LinOp::from_entries(2, 1, vec![q(2), q(1)]).unwrap();
        for a in -4..=4 {
            for b in -4..=4 {
                let y = v(&[a, b]);
                let split = find_split(&f1, &f2, &k, &l, &y, std::slice::from_ref(&a1)).unwrap();
                assert_eq!(split.is_some(), epi_membership(&sum, &l, &y, &k).unwrap());
                if let Some(s) = split {
                    assert!(verify_split(&f1, &f2, &l, &y, &s).unwrap());
                }
            }
        }
    }

    #[test]
    fn sums_need_a_common_domain() {
        let f = SampledMap::new(1, 1, vec![(v(&[0]), v(&[1]))]).unwrap();
        let g = SampledMap::new(1, 1, vec![(v(&[1]), v(&[1]))]).unwrap();
        assert!(matches!(f.add(&g), Err(Error::EmptyDomain(_))));
        assert!(SampledMap::new(1, 1, vec![(v(&[0]), v(&[1])), (v(&[0]), v(&[2]))]).is_err());
        assert!(SampledMap::new(1, 1, vec![]).is_err());
    }
}
