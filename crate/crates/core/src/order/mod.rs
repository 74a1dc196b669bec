//! Weak suprema and infima of finite sets, partition-style sets and the WS-sum.
//!
//! A finite [`GenSet`] is stored through an irredundant generator list. With
//! [`Orientation::Sup`] it stands for `wsup(gens)`, with [`Orientation::Inf`]
//! for `winf(gens)`. Inf-oriented sets appear as negated conjugate values
//! (dual objective values) and as the translates `y + bd K`.

mod export;
mod staircase;

use std::sync::Arc;

use serde::Serialize;

use crate::cone::{Cone, PointClass, Tolerance};
use crate::error::{check_dim, Error, Result};
use crate::num::{Vector, Q};

pub use export::{frontier_polyline, polyline_csv, region_csv};
use staircase::Staircase;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, PartialOrd, Ord)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RegionLabel {
    Lower,
    Frontier,
    Upper,
}

impl RegionLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            RegionLabel::Lower => "LOWER",
            RegionLabel::Frontier => "FRONTIER",
            RegionLabel::Upper => "UPPER",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Sup,
    Inf,
}

/// Nonempty, deduplicated, lexicographically sorted point list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteVecSet {
    points: Vec<Vector>,
}

impl FiniteVecSet {
    pub fn new(mut points: Vec<Vector>) -> Result<FiniteVecSet> {
        let dim = points
            .first()
            .map(Vector::dim)
            .ok_or_else(|| Error::Malformed("empty point set".into()))?;
        for p in &points {
            check_dim("point set", dim, p.dim())?;
        }
        points.sort();
        points.dedup();
        Ok(FiniteVecSet { points })
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Vector> {
        self.points.iter()
    }

    pub fn into_vec(self) -> Vec<Vector> {
        self.points
    }
}

/// Region of `y` relative to `wsup M`, scanning the raw points of `M`.
pub fn classify_against(m: &[Vector], k: &Cone, y: &Vector) -> Result<RegionLabel> {
    check_dim("classify_against", k.dim(), y.dim())?;
    let yd = k.normal_values(y);
    let mut closure = false;
    for p in m {
        check_dim("classify_against", k.dim(), p.dim())?;
        match k.classify_diff(&k.normal_values(p), &yd) {
            PointClass::Interior => return Ok(RegionLabel::Lower),
            PointClass::Boundary => closure = true,
            PointClass::Outside => {}
        }
    }
    Ok(if closure {
        RegionLabel::Frontier
    } else {
        RegionLabel::Upper
    })
}

#[derive(Debug)]
struct Finite {
    orientation: Orientation,
    gens: FiniteVecSet,
    dots: Vec<Vec<Q>>,
    stair: Option<Staircase>,
}

#[derive(Clone, Debug)]
enum Kind {
    PlusInf,
    MinusInf,
    Finite(Arc<Finite>),
}

/// A partition-style subset of `Y`, or one of the symbols `{+∞}`, `{−∞}`.
#[derive(Clone, Debug)]
pub struct GenSet {
    cone: Arc<Cone>,
    kind: Kind,
}

impl PartialEq for GenSet {
    fn eq(&self, other: &Self) -> bool {
        if self.cone != other.cone && !Arc::ptr_eq(&self.cone, &other.cone) {
            return false;
        }
        match (&self.kind, &other.kind) {
            (Kind::PlusInf, Kind::PlusInf) | (Kind::MinusInf, Kind::MinusInf) => true,
            (Kind::Finite(a), Kind::Finite(b)) => a.orientation == b.orientation && a.gens == b.gens,
            _ => false,
        }
    }
}

/// Points that are not `K`-dominated by another point (for `Sup`), or that
/// dominate no other point (for `Inf`). Ties under a float tolerance keep the
/// lexicographically first point.
fn extremal(k: &Cone, orientation: Orientation, mut pts: Vec<Vector>) -> Vec<Vector> {
    pts.sort();
    pts.dedup();
    if pts.len() <= 1 {
        return pts;
    }
    if k.dim() == 2 && k.tolerance() == Tolerance::Exact {
        if let Some(out) = staircase::extremal_2d(k, orientation, &pts) {
            return out;
        }
    }
    let dots: Vec<Vec<Q>> = pts.iter().map(|p| k.normal_values(p)).collect();
    let covers = |i: usize, j: usize| -> bool {
        // point i dominates point j in the orientation's sense
        match orientation {
            Orientation::Sup => k.classify_diff(&dots[i], &dots[j]) != PointClass::Outside,
            Orientation::Inf => k.classify_diff(&dots[j], &dots[i]) != PointClass::Outside,
        }
    };
    let keep: Vec<bool> = (0..pts.len())
        .map(|j| !(0..pts.len()).any(|i| i != j && covers(i, j) && (!covers(j, i) || i < j)))
        .collect();
    pts.into_iter().zip(keep).filter_map(|(p, k)| k.then_some(p)).collect()
}

impl GenSet {
    pub fn plus_inf(cone: &Arc<Cone>) -> GenSet {
        GenSet {
            cone: cone.clone(),
            kind: Kind::PlusInf,
        }
    }

    pub fn minus_inf(cone: &Arc<Cone>) -> GenSet {
        GenSet {
            cone: cone.clone(),
            kind: Kind::MinusInf,
        }
    }

    /// `wsup(points)`; the empty set gives `{−∞}`.
    pub fn sup(cone: &Arc<Cone>, points: Vec<Vector>) -> Result<GenSet> {
        GenSet::from_points(cone, Orientation::Sup, points)
    }

    /// `winf(points)`; the empty set gives `{+∞}`.
    pub fn inf(cone: &Arc<Cone>, points: Vec<Vector>) -> Result<GenSet> {
        GenSet::from_points(cone, Orientation::Inf, points)
    }

    pub fn from_points(cone: &Arc<Cone>, orientation: Orientation, points: Vec<Vector>) -> Result<GenSet> {
        for p in &points {
            check_dim("generator set", cone.dim(), p.dim())?;
        }
        if points.is_empty() {
            return Ok(match orientation {
                Orientation::Sup => GenSet::minus_inf(cone),
                Orientation::Inf => GenSet::plus_inf(cone),
            });
        }
        let gens = extremal(cone, orientation, points);
        Ok(GenSet::from_extremal(cone, orientation, gens))
    }

    /// Builds a finite set from an already irredundant generator list.
    fn from_extremal(cone: &Arc<Cone>, orientation: Orientation, gens: Vec<Vector>) -> GenSet {
        // on the line wsup and winf of a finite set are the same single point
        let orientation = if cone.dim() == 1 { Orientation::Sup } else { orientation };
        let gens = FiniteVecSet::new(gens).expect("nonempty generator list");
        let dots = gens.iter().map(|g| cone.normal_values(g)).collect();
        let stair = Staircase::build(cone, gens.points());
        GenSet {
            cone: cone.clone(),
            kind: Kind::Finite(Arc::new(Finite {
                orientation,
                gens,
                dots,
                stair,
            })),
        }
    }

    pub fn cone(&self) -> &Arc<Cone> {
        &self.cone
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.kind, Kind::Finite(_))
    }

    pub fn is_plus_inf(&self) -> bool {
        matches!(self.kind, Kind::PlusInf)
    }

    pub fn is_minus_inf(&self) -> bool {
        matches!(self.kind, Kind::MinusInf)
    }

    pub fn orientation(&self) -> Option<Orientation> {
        match &self.kind {
            Kind::Finite(f) => Some(f.orientation),
            _ => None,
        }
    }

    pub fn generators(&self) -> Option<&FiniteVecSet> {
        match &self.kind {
            Kind::Finite(f) => Some(&f.gens),
            _ => None,
        }
    }

    /// Generator list, empty for the infinite symbols.
    pub fn generator_points(&self) -> &[Vector] {
        match &self.kind {
            Kind::Finite(f) => f.gens.points(),
            _ => &[],
        }
    }

    fn same_cone(&self, other: &GenSet) -> Result<()> {
        if Arc::ptr_eq(&self.cone, &other.cone) || self.cone == other.cone {
            Ok(())
        } else {
            Err(Error::ConeMismatch)
        }
    }

    /// Region of `y`: below the set, on it, or above it.
    pub fn classify(&self, y: &Vector) -> Result<RegionLabel> {
        check_dim("GenSet classification", self.cone.dim(), y.dim())?;
        let f = match &self.kind {
            Kind::PlusInf => return Ok(RegionLabel::Lower),
            Kind::MinusInf => return Ok(RegionLabel::Upper),
            Kind::Finite(f) => f,
        };
        if let Some(st) = &f.stair {
            if let Some(z) = self.cone.to_ray_coords(y) {
                return Ok(st.classify(f.orientation, &z));
            }
        }
        let k = &self.cone;
        let yd = k.normal_values(y);
        let mut closure = false;
        for gd in &f.dots {
            let class = match f.orientation {
                Orientation::Sup => k.classify_diff(gd, &yd),
                Orientation::Inf => k.classify_diff(&yd, gd),
            };
            match class {
                PointClass::Interior => {
                    return Ok(match f.orientation {
                        Orientation::Sup => RegionLabel::Lower,
                        Orientation::Inf => RegionLabel::Upper,
                    })
                }
                PointClass::Boundary => closure = true,
                PointClass::Outside => {}
            }
        }
        Ok(match (closure, f.orientation) {
            (true, _) => RegionLabel::Frontier,
            (false, Orientation::Sup) => RegionLabel::Upper,
            (false, Orientation::Inf) => RegionLabel::Lower,
        })
    }

    pub fn contains(&self, y: &Vector) -> Result<bool> {
        Ok(self.classify(y)? == RegionLabel::Frontier)
    }

    pub fn negate(&self) -> GenSet {
        match &self.kind {
            Kind::PlusInf => GenSet::minus_inf(&self.cone),
            Kind::MinusInf => GenSet::plus_inf(&self.cone),
            Kind::Finite(f) => {
                let flipped = match f.orientation {
                    Orientation::Sup => Orientation::Inf,
                    Orientation::Inf => Orientation::Sup,
                };
                GenSet::from_extremal(&self.cone, flipped, f.gens.iter().map(|g| -g).collect())
            }
        }
    }

    pub fn translate(&self, y: &Vector) -> Result<GenSet> {
        check_dim("translation", self.cone.dim(), y.dim())?;
        Ok(match &self.kind {
            Kind::Finite(f) => GenSet::from_extremal(&self.cone, f.orientation, f.gens.iter().map(|g| g + y).collect()),
            _ => self.clone(),
        })
    }

    /// `self ≼_K other`.
    pub fn preceq(&self, other: &GenSet) -> Result<bool> {
        self.same_cone(other)?;
        let (a, b) = match (&self.kind, &other.kind) {
            (Kind::MinusInf, _) | (_, Kind::PlusInf) => return Ok(true),
            (Kind::PlusInf, _) | (_, Kind::MinusInf) => return Ok(false),
            (Kind::Finite(a), Kind::Finite(b)) => (a, b),
        };
        let k = &self.cone;
        Ok(match (a.orientation, b.orientation) {
            // every generator of U lies below some generator of V
            (Orientation::Sup, Orientation::Sup) => a
                .dots
                .iter()
                .all(|ad| b.dots.iter().any(|bd| k.classify_diff(bd, ad) != PointClass::Outside)),
            // no generator of V lies strictly below a generator of U
            (Orientation::Sup, Orientation::Inf) => a
                .dots
                .iter()
                .all(|ad| b.dots.iter().all(|bd| k.classify_diff(ad, bd) != PointClass::Interior)),
            // every generator of V lies above some generator of U
            (Orientation::Inf, Orientation::Inf) => b
                .dots
                .iter()
                .all(|bd| a.dots.iter().any(|ad| k.classify_diff(bd, ad) != PointClass::Outside)),
            // a weak supremum contains a ray d - t r along an extreme ray r of a
            // pointed cone; no translate of K holds such a ray (needs m >= 2,
            // which the one-dimensional canonical form guarantees)
            (Orientation::Inf, Orientation::Sup) => false,
        })
    }

    /// Mutual `≼`; agrees with `==` on canonical lists.
    pub fn same_set(&self, other: &GenSet) -> Result<bool> {
        Ok(self.preceq(other)? && other.preceq(self)?)
    }

    /// `self ⊎ other = wsup(self + other)`.
    pub fn ws_sum(&self, other: &GenSet) -> Result<GenSet> {
        self.same_cone(other)?;
        let (a, b) = match (&self.kind, &other.kind) {
            (Kind::PlusInf, Kind::MinusInf) | (Kind::MinusInf, Kind::PlusInf) => return Err(Error::IllegalInfinitySum),
            (Kind::PlusInf, _) | (_, Kind::PlusInf) => return Ok(GenSet::plus_inf(&self.cone)),
            (Kind::MinusInf, _) | (_, Kind::MinusInf) => return Ok(GenSet::minus_inf(&self.cone)),
            (Kind::Finite(a), Kind::Finite(b)) => (a, b),
        };
        match (a.orientation, b.orientation) {
            (Orientation::Sup, Orientation::Sup) => {
                GenSet::sup(&self.cone, minkowski(a.gens.points(), b.gens.points()))
            }
            (Orientation::Sup, Orientation::Inf) => self.sup_plus_inf(a, b),
            (Orientation::Inf, Orientation::Sup) => self.sup_plus_inf(b, a),
            // winf P + winf Q contains p + q + t k0 for all t > 0, so its lower
            // region is everything
            (Orientation::Inf, Orientation::Inf) => Ok(GenSet::plus_inf(&self.cone)),
        }
    }

    /// `wsup(c_gens + winf q_gens)` is the boundary of `∩_c (c + Q + K)`.
    fn sup_plus_inf(&self, c: &Finite, q: &Finite) -> Result<GenSet> {
        let lists: Vec<Vec<Vector>> = c
            .gens
            .iter()
            .map(|ci| q.gens.iter().map(|qi| ci + qi).collect())
            .collect();
        let corners = upper_intersection(&self.cone, &lists)?;
        GenSet::inf(&self.cone, corners)
    }

    /// `t*` and the point `y - t*·dir` where the line through `y` along the
    /// interior direction `dir` meets the set.
    pub fn frontier_point_along(&self, y: &Vector, dir: &Vector) -> Result<(Q, Vector)> {
        check_dim("frontier search", self.cone.dim(), y.dim())?;
        check_dim("frontier search", self.cone.dim(), dir.dim())?;
        let k = &self.cone;
        if !k.contains_interior(dir) {
            return Err(Error::Malformed(
                "search direction must be an interior point of K".into(),
            ));
        }
        let f = match &self.kind {
            Kind::Finite(f) => f,
            _ => return Err(Error::Unsupported("frontier search on an infinite symbol".into())),
        };
        let yd = k.normal_values(y);
        let dd = k.normal_values(dir);
        let ratio = |gd: &[Q]| -> Vec<Q> {
            yd.iter()
                .zip(gd)
                .zip(&dd)
                .map(|((yv, gv), dv)| (yv - gv) / dv)
                .collect()
        };
        let t = match f.orientation {
            Orientation::Sup => f
                .dots
                .iter()
                .map(|gd| ratio(gd).into_iter().max().expect("at least one normal"))
                .min(),
            Orientation::Inf => f
                .dots
                .iter()
                .map(|gd| ratio(gd).into_iter().min().expect("at least one normal"))
                .max(),
        }
        .expect("nonempty generator list");
        let p = y - &dir.scale(&t);
        Ok((t, p))
    }

    pub fn to_json(&self) -> serde_json::Value {
        match &self.kind {
            Kind::PlusInf => serde_json::json!({"kind": "plus_inf"}),
            Kind::MinusInf => serde_json::json!({"kind": "minus_inf"}),
            Kind::Finite(f) => serde_json::json!({
                "kind": "finite",
                "orientation": f.orientation,
                "generators": f.gens.iter().map(Vector::to_json).collect::<Vec<_>>(),
                "generators_exact": f.gens.iter().map(Vector::to_exact_json).collect::<Vec<_>>(),
            }),
        }
    }
}

pub(crate) fn minkowski(a: &[Vector], b: &[Vector]) -> Vec<Vector> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x + y);
        }
    }
    out
}

/// Minimal corners of `∩_i (lists[i] + K)` for a simplicial `K`.
pub(crate) fn upper_intersection(k: &Cone, lists: &[Vec<Vector>]) -> Result<Vec<Vector>> {
    if !k.is_simplicial() {
        return Err(Error::Unsupported(
            "intersections of translated cones need a simplicial cone".into(),
        ));
    }
    let to_z = |l: &Vec<Vector>| -> Vec<Vector> { l.iter().map(|y| k.to_ray_coords(y).expect("simplicial")).collect() };
    let mut iter = lists.iter();
    let Some(first) = iter.next() else {
        return Ok(Vec::new());
    };
    let mut cur = staircase::minimal_z(to_z(first));
    for l in iter {
        let z = staircase::minimal_z(to_z(l));
        let mut joined = Vec::with_capacity(cur.len() * z.len());
        for a in &cur {
            for b in &z {
                joined.push(Vector(a.iter().zip(b.iter()).map(|(x, y)| *x.max(y)).collect()));
            }
        }
        cur = staircase::minimal_z(joined);
    }
    Ok(cur.iter().map(|z| k.from_ray_coords(z)).collect())
}

/// `wsup` of a union of partition-style sets of one orientation.
pub fn wsup_union(cone: &Arc<Cone>, sets: &[GenSet]) -> Result<GenSet> {
    if sets.iter().any(GenSet::is_plus_inf) {
        return Ok(GenSet::plus_inf(cone));
    }
    let finite: Vec<&Arc<Finite>> = sets
        .iter()
        .filter_map(|s| match &s.kind {
            Kind::Finite(f) => Some(f),
            _ => None,
        })
        .collect();
    for s in sets {
        if !(Arc::ptr_eq(&s.cone, cone) || *s.cone == **cone) {
            return Err(Error::ConeMismatch);
        }
    }
    if finite.is_empty() {
        return Ok(GenSet::minus_inf(cone));
    }
    if finite.iter().all(|f| f.orientation == Orientation::Sup) {
        let pts = finite.iter().flat_map(|f| f.gens.iter().cloned()).collect();
        return GenSet::sup(cone, pts);
    }
    if finite.iter().all(|f| f.orientation == Orientation::Inf) {
        // the lower region of the union is Y minus the intersection of the
        // upper sets gens + K
        let lists: Vec<Vec<Vector>> = finite.iter().map(|f| f.gens.points().to_vec()).collect();
        return GenSet::inf(cone, upper_intersection(cone, &lists)?);
    }
    Err(Error::Unsupported(
        "weak supremum of a union with mixed orientations".into(),
    ))
}

pub fn wsup_finite(m: &FiniteVecSet, k: &Arc<Cone>) -> Result<GenSet> {
    GenSet::sup(k, m.points().to_vec())
}

pub fn winf_finite(m: &FiniteVecSet, k: &Arc<Cone>) -> Result<GenSet> {
    GenSet::inf(k, m.points().to_vec())
}

/// `M ∩ wsup M`, possibly empty.
pub fn wmax_finite(m: &FiniteVecSet, k: &Cone) -> Result<Vec<Vector>> {
    let mut out = Vec::new();
    for p in m.iter() {
        if classify_against(m.points(), k, p)? == RegionLabel::Frontier {
            out.push(p.clone());
        }
    }
    Ok(out)
}

/// `M ∩ winf M`, possibly empty.
pub fn wmin_finite(m: &FiniteVecSet, k: &Cone) -> Result<Vec<Vector>> {
    let neg: Vec<Vector> = m.iter().map(|p| -p).collect();
    let mut out = Vec::new();
    for p in m.iter() {
        if classify_against(&neg, k, &-p)? == RegionLabel::Frontier {
            out.push(p.clone());
        }
    }
    Ok(out)
}

pub fn set_preceq(u: &GenSet, v: &GenSet) -> Result<bool> {
    u.preceq(v)
}

pub fn ws_sum(u: &GenSet, v: &GenSet) -> Result<GenSet> {
    u.ws_sum(v)
}

/// True iff each grid point lies in exactly one of `U - int K`, `U`,
/// `U + int K`, with the shifted sets searched over the finite `core` of `U`.
pub fn check_partition_style(member: impl Fn(&Vector) -> bool, core: &[Vector], k: &Cone, grid: &[Vector]) -> bool {
    grid.iter().all(|y| {
        let lower = core.iter().any(|u| k.contains_interior(&(u - y)));
        let upper = core.iter().any(|u| k.contains_interior(&(y - u)));
        [lower, member(y), upper].iter().filter(|b| **b).count() == 1
    })
}

/// `−bd K`, the neutral element of `⊎`.
pub fn neutral(k: &Arc<Cone>) -> GenSet {
    GenSet::sup(k, vec![Vector::zeros(k.dim())]).expect("dimension matches")
}

#[cfg(test)]
mod tests;
