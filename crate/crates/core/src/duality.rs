//! The primal value set, the three dual problems, and the duality checks.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::farkas::{candidate, verify_certificate, Certificate, FarkasQuery};
use crate::linop::{LinOp, PosOp};
use crate::num::Vector;
use crate::order::{wsup_union, FiniteVecSet, GenSet, RegionLabel};
use crate::problem::ProblemInstance;
use crate::search::SearchSpace;

pub use crate::problem::{Flags, Hints};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum DualProblem {
    Vd1,
    Vd2,
    Vd3,
}

impl DualProblem {
    pub const ALL: [DualProblem; 3] = [DualProblem::Vd1, DualProblem::Vd2, DualProblem::Vd3];

    pub fn index(self) -> u8 {
        match self {
            DualProblem::Vd1 => 1,
            DualProblem::Vd2 => 2,
            DualProblem::Vd3 => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DualProblem::Vd1 => "VD1",
            DualProblem::Vd2 => "VD2",
            DualProblem::Vd3 => "VD3",
        }
    }

    pub fn parse(s: &str) -> Result<DualProblem> {
        match s.to_ascii_uppercase().as_str() {
            "VD1" | "1" => Ok(DualProblem::Vd1),
            "VD2" | "2" => Ok(DualProblem::Vd2),
            "VD3" | "3" => Ok(DualProblem::Vd3),
            _ => Err(Error::Malformed(format!("unknown dual problem {s:?}"))),
        }
    }
}

pub fn feasible_set(p: &ProblemInstance) -> Result<FiniteVecSet> {
    FiniteVecSet::new(p.feasible_points()?)
}

/// `winf{F(x) − L(x) : x ∈ A}`.
pub fn winf_vp(p: &ProblemInstance, l: &LinOp) -> Result<GenSet> {
    GenSet::inf(p.k(), p.feasible_image(l)?)
}

/// Dual variables in the convention of the perturbed dual: for VD2 and VD3
/// the objective uses `F*(L + L′)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualCertificate {
    pub which: DualProblem,
    pub t: PosOp,
    pub lp: Option<LinOp>,
    pub lpp: Option<LinOp>,
}

impl DualCertificate {
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::json!({"which": self.which, "T": self.t.op().to_json()});
        if let Some(lp) = &self.lp {
            v["Lp"] = lp.to_json();
        }
        if let Some(lpp) = &self.lpp {
            v["Lpp"] = lpp.to_json();
        }
        v
    }
}

/// One dual objective value `−W` together with the certificate producing it.
#[derive(Clone, Debug)]
pub struct AttainedValue {
    pub dual: DualCertificate,
    /// The same point as a certificate for `(L, −z)`, `z` any point of `value`.
    pub farkas: Certificate,
    pub value: GenSet,
}

#[derive(Clone, Debug)]
pub struct DualValue {
    pub which: DualProblem,
    pub perturbation: LinOp,
    /// The `≼`-maximal objective values met, in candidate order.
    pub attained: Vec<AttainedValue>,
    /// `wsup` of all attained values.
    pub frontier: GenSet,
    pub examined: usize,
    pub truncated: bool,
}

impl DualValue {
    /// Generators of the attained values.
    pub fn attained_points(&self) -> Result<FiniteVecSet> {
        let pts: Vec<Vector> = self
            .attained
            .iter()
            .flat_map(|a| a.value.generator_points().iter().cloned())
            .collect();
        FiniteVecSet::new(pts)
    }

    /// The first attained value containing `z`.
    pub fn attaining(&self, z: &Vector) -> Result<Option<&AttainedValue>> {
        for a in &self.attained {
            if a.value.contains(z)? {
                return Ok(Some(a));
            }
        }
        Ok(None)
    }

    /// Every attained generator re-verifies as a certificate for `(L, −z)`.
    pub fn verify_provenance(&self, p: &ProblemInstance) -> Result<bool> {
        for a in &self.attained {
            for z in a.value.generator_points() {
                let q = FarkasQuery::new(self.which.index(), self.perturbation.clone(), -z)?;
                if !verify_certificate(p, &q, &a.farkas)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "format": 1,
            "which": self.which,
            "L": self.perturbation.to_json(),
            "frontier": self.frontier.generator_points().iter().map(Vector::to_json).collect::<Vec<_>>(),
            "frontier_exact": self.frontier.generator_points().iter().map(Vector::to_exact_json).collect::<Vec<_>>(),
            "frontier_set": self.frontier.to_json(),
            "examined": self.examined,
            "truncated": self.truncated,
            "attained": self.attained.iter().map(|a| serde_json::json!({
                "certificate": a.dual.to_json(),
                "value": a.value.to_json(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Keeps the values not `≼`-dominated by another, first occurrence on ties.
fn prune(values: Vec<AttainedValue>) -> Result<Vec<AttainedValue>> {
    let mut kept: Vec<AttainedValue> = Vec::new();
    for v in values {
        let mut dominated = false;
        for k in &kept {
            if v.value.preceq(&k.value)? {
                dominated = true;
                break;
            }
        }
        if dominated {
            continue;
        }
        let mut next = Vec::with_capacity(kept.len() + 1);
        for k in kept {
            if !k.value.preceq(&v.value)? {
                next.push(k);
            }
        }
        next.push(v);
        kept = next;
    }
    Ok(kept)
}

/// Enumerates the candidate space and collects the dual objective values.
pub fn dual_value(p: &ProblemInstance, which: DualProblem, l: &LinOp, space: &SearchSpace) -> Result<DualValue> {
    p.feasible_points()?;
    let index = which.index();
    let budget = space.budget(index);
    // the dual L′ is the certificate L′ shifted by L
    let shifted = shifted_space(space, l, index)?;
    let values: Vec<AttainedValue> = (0..budget)
        .into_par_iter()
        .map(|i| {
            let (ti, a, b) = space.decode(index, i);
            let dual = DualCertificate {
                which,
                t: space.ts[ti].clone(),
                lp: (index >= 2).then(|| space.lps[a].clone()),
                lpp: (index == 3).then(|| space.lpps[b].clone()),
            };
            let farkas = candidate(p, index, l, &shifted, i)?;
            let value = farkas.value_set.negate();
            Ok(AttainedValue { dual, farkas, value })
        })
        .collect::<Result<_>>()?;
    let attained = prune(values)?;
    let sets: Vec<GenSet> = attained.iter().map(|a| a.value.clone()).collect();
    let frontier = wsup_union(p.k(), &sets)?;
    Ok(DualValue {
        which,
        perturbation: l.clone(),
        attained,
        frontier,
        examined: budget,
        truncated: budget < space.size(index),
    })
}

fn shifted_space(space: &SearchSpace, l: &LinOp, index: u8) -> Result<SearchSpace> {
    if index == 1 {
        return Ok(SearchSpace {
            ts: space.ts.clone(),
            lps: Vec::new(),
            lpps: Vec::new(),
            max_candidates: space.max_candidates,
        });
    }
    let lps = space.lps.iter().map(|lp| l.add(lp)).collect::<Result<_>>()?;
    Ok(SearchSpace {
        ts: space.ts.clone(),
        lps,
        lpps: space.lpps.clone(),
        max_candidates: space.max_candidates,
    })
}

/// `wsup(VD₃ᴸ) ≼ wsup(VD₂ᴸ) ≼ wsup(VD₁ᴸ) ≼ winf(VPᴸ)`.
#[derive(Clone, Debug)]
pub struct WeakDuality {
    pub relations: [bool; 3],
    pub values: [DualValue; 3],
    pub primal: GenSet,
}

impl WeakDuality {
    pub fn all(&self) -> bool {
        self.relations.iter().all(|&b| b)
    }
}

/// One candidate space serves all three duals: its product structure is
/// closed under dropping `L″` and then `L′`.
pub fn weak_duality_check(p: &ProblemInstance, l: &LinOp, space: &SearchSpace) -> Result<WeakDuality> {
    let primal = winf_vp(p, l)?;
    let d1 = dual_value(p, DualProblem::Vd1, l, space)?;
    let d2 = dual_value(p, DualProblem::Vd2, l, space)?;
    let d3 = dual_value(p, DualProblem::Vd3, l, space)?;
    let relations = [
        d3.frontier.preceq(&d2.frontier)?,
        d2.frontier.preceq(&d1.frontier)?,
        d1.frontier.preceq(&primal)?,
    ];
    Ok(WeakDuality {
        relations,
        values: [d3, d2, d1],
        primal,
    })
}

#[derive(Clone, Debug)]
pub enum StrongStatus {
    Holds,
    Gap { witness: Vector, query: FarkasQuery },
    Inconclusive { reason: String },
}

impl StrongStatus {
    pub fn label(&self) -> &'static str {
        match self {
            StrongStatus::Holds => "HOLDS",
            StrongStatus::Gap { .. } => "GAP",
            StrongStatus::Inconclusive { .. } => "INCONCLUSIVE",
        }
    }
}

#[derive(Clone, Debug)]
pub struct StrongDuality {
    pub status: StrongStatus,
    pub primal: GenSet,
    pub dual: DualValue,
}

impl StrongDuality {
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::json!({
            "status": self.status.label(),
            "which": self.dual.which,
            "L": self.dual.perturbation.to_json(),
            "primal": self.primal.to_json(),
            "dual_frontier": self.dual.frontier.to_json(),
        });
        match &self.status {
            StrongStatus::Gap { witness, query } => {
                v["witness"] = witness.to_exact_json();
                v["record"] = serde_json::json!({
                    "query": query.to_json(),
                    "alpha": true,
                    "beta_status": "NOT_FOUND",
                });
            }
            StrongStatus::Inconclusive { reason } => v["reason"] = reason.clone().into(),
            StrongStatus::Holds => {}
        }
        v
    }
}

/// Strong duality at `L`: every generator of `winf(VPᴸ)` is an attained dual
/// value and the dual frontier equals the primal one.
pub fn strong_duality_check(
    p: &ProblemInstance,
    which: DualProblem,
    l: &LinOp,
    space: &SearchSpace,
) -> Result<StrongDuality> {
    let primal = winf_vp(p, l)?;
    let dual = dual_value(p, which, l, space)?;
    for a in &dual.attained {
        if !a.value.preceq(&primal)? {
            return Err(Error::Violation(format!(
                "{} value {} lies above the primal frontier of {}",
                which.as_str(),
                serde_json::to_string(&a.value.to_json()).expect("serializable"),
                p.name
            )));
        }
    }
    let mut witness = None;
    for g in primal.generator_points() {
        if dual.attaining(g)?.is_none() {
            witness = Some(g.clone());
            break;
        }
    }
    if witness.is_none() && dual.frontier != primal {
        witness = gap_from_dual_corner(&primal, &dual.frontier, p)?;
    }
    let status = match witness {
        None => StrongStatus::Holds,
        Some(w) if p.flags.convex() && p.hints.is_empty() => StrongStatus::Inconclusive {
            reason: format!("no certificate attains {w} and the instance ships no hints"),
        },
        Some(w) => {
            let query = FarkasQuery::new(which.index(), l.clone(), -&w)?;
            debug_assert!(crate::farkas::alpha_holds(p, l, &query.y)?);
            StrongStatus::Gap { witness: w, query }
        }
    };
    Ok(StrongDuality { status, primal, dual })
}

/// A dual corner strictly under the primal frontier, lifted along `k0` onto it.
fn gap_from_dual_corner(primal: &GenSet, frontier: &GenSet, p: &ProblemInstance) -> Result<Option<Vector>> {
    let k0 = p.k().interior_witness();
    for d in frontier.generator_points() {
        if primal.classify(d)? == RegionLabel::Lower {
            let (_, hit) = primal.frontier_point_along(d, k0)?;
            return Ok(Some(hit));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub instance: String,
    pub which: DualProblem,
    pub rows: Vec<StrongDuality>,
}

impl SweepReport {
    pub fn count(&self, label: &str) -> usize {
        self.rows.iter().filter(|r| r.status.label() == label).count()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "format": 1,
            "instance": self.instance,
            "which": self.which,
            "holds": self.count("HOLDS"),
            "gap": self.count("GAP"),
            "inconclusive": self.count("INCONCLUSIVE"),
            "rows": self.rows.iter().map(StrongDuality::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Strong duality at every `L` of the grid. A gap on a convex instance with a
/// verified Slater point and complete hints is reported as a violation.
pub fn stable_strong_duality_sweep(
    p: &ProblemInstance,
    which: DualProblem,
    l_grid: &[LinOp],
    space: &SearchSpace,
) -> Result<SweepReport> {
    let rows: Vec<StrongDuality> = l_grid
        .par_iter()
        .map(|l| strong_duality_check(p, which, l, space))
        .collect::<Result<_>>()?;
    let strict = p.flags.convex() && p.slater_holds() && p.flags.hints_complete;
    if strict {
        if let Some(r) = rows.iter().find(|r| matches!(r.status, StrongStatus::Gap { .. })) {
            return Err(Error::Violation(format!(
                "duality gap on {} despite convexity, Slater point and complete hints: {}",
                p.name,
                r.to_json()
            )));
        }
    }
    Ok(SweepReport {
        instance: p.name.clone(),
        which,
        rows,
    })
}
