//! The inequality (α) over the feasible set and its certificate conditions.

use rayon::prelude::*;
use serde::Serialize;

use crate::cone::PointClass;
use crate::conjugate::conjugate;
use crate::error::{check_dim, Error, Result};
use crate::linop::{LinOp, PosOp};
use crate::num::Vector;
use crate::order::{GenSet, RegionLabel};
use crate::problem::ProblemInstance;
use crate::search::{SearchConfig, SearchSpace};

#[derive(Clone, Debug, PartialEq)]
pub struct FarkasQuery {
    pub index: u8,
    pub l: LinOp,
    pub y: Vector,
}

impl FarkasQuery {
    pub fn new(index: u8, l: LinOp, y: Vector) -> Result<FarkasQuery> {
        if !(1..=3).contains(&index) {
            return Err(Error::Malformed(format!(
                "certificate index must be 1, 2 or 3, got {index}"
            )));
        }
        Ok(FarkasQuery { index, l, y })
    }

    fn check(&self, p: &ProblemInstance) -> Result<()> {
        check_dim("query operator rows", p.m(), self.l.rows())?;
        check_dim("query operator columns", p.n(), self.l.cols())?;
        check_dim("query point", p.m(), self.y.dim())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({"index": self.index, "L": self.l.to_json(), "y": self.y.to_exact_json()})
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub index: u8,
    pub t: PosOp,
    pub lp: Option<LinOp>,
    pub lpp: Option<LinOp>,
    pub value_set: GenSet,
}

impl Certificate {
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::json!({
            "index": self.index,
            "T": self.t.op().to_json(),
            "value_set": self.value_set.to_json(),
        });
        if let Some(lp) = &self.lp {
            v["Lp"] = lp.to_json();
        }
        if let Some(lpp) = &self.lpp {
            v["Lpp"] = lpp.to_json();
        }
        v
    }

    /// Drops one split: `(L′, L″, T) ↦ (L′, T)` and `(L′, T) ↦ T`.
    pub fn downgrade(&self, p: &ProblemInstance, l: &LinOp) -> Result<Certificate> {
        match self.index {
            3 => {
                let lp = self.lp.clone().expect("index 3 carries L′");
                let value_set = value_set(p, 2, l, &self.t, Some(&lp), None)?;
                Ok(Certificate {
                    index: 2,
                    t: self.t.clone(),
                    lp: Some(lp),
                    lpp: None,
                    value_set,
                })
            }
            2 => Ok(Certificate {
                index: 1,
                t: self.t.clone(),
                lp: None,
                lpp: None,
                value_set: value_set(p, 1, l, &self.t, None, None)?,
            }),
            _ => Err(Error::Unsupported("index 1 certificates have nothing to drop".into())),
        }
    }
}

/// The left-hand set of the certificate condition:
/// 1: `(F + I_C + T∘G)*(L)`,
/// 2: `F*(L′) ⊎ (I_C + T∘G)*(L − L′)`,
/// 3: `F*(L′) ⊎ I_C*(L″) ⊎ (T∘G)*(L − L′ − L″)`.
pub fn value_set(
    p: &ProblemInstance,
    index: u8,
    l: &LinOp,
    t: &PosOp,
    lp: Option<&LinOp>,
    lpp: Option<&LinOp>,
) -> Result<GenSet> {
    let k = p.k();
    let shape = || Error::Malformed(format!("certificate shape does not match index {index}"));
    match index {
        1 => conjugate(&p.f_ic_tg(t)?, l, k),
        2 => {
            let lp = lp.ok_or_else(shape)?;
            let a = conjugate(p.f(), lp, k)?;
            let b = conjugate(&p.ic_tg(t)?, &l.sub(lp)?, k)?;
            a.ws_sum(&b)
        }
        3 => {
            let (lp, lpp) = (lp.ok_or_else(shape)?, lpp.ok_or_else(shape)?);
            let a = conjugate(p.f(), lp, k)?;
            let b = conjugate(p.indicator(), lpp, k)?;
            let c = conjugate(&p.tg(t)?, &l.sub(lp)?.sub(lpp)?, k)?;
            a.ws_sum(&b)?.ws_sum(&c)
        }
        _ => Err(shape()),
    }
}

/// `x ∈ A ⟹ F(x) − L(x) + y ∉ −int K`, by enumeration of `A`.
pub fn alpha_holds(p: &ProblemInstance, l: &LinOp, y: &Vector) -> Result<bool> {
    check_dim("alpha point", p.m(), y.dim())?;
    let k = p.k();
    for v in p.feasible_image(l)? {
        if k.classify_values(&k.normal_values(&-&(&v + y))) == PointClass::Interior {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `y ∉ W − int K` for a finite value set `W`.
fn beta_clause(w: &GenSet, y: &Vector) -> Result<bool> {
    Ok(w.is_finite() && w.classify(y)? != RegionLabel::Lower)
}

pub fn verify_certificate(p: &ProblemInstance, q: &FarkasQuery, c: &Certificate) -> Result<bool> {
    q.check(p)?;
    if c.index != q.index || c.lp.is_some() != (c.index >= 2) || c.lpp.is_some() != (c.index == 3) {
        return Err(Error::Malformed("certificate shape does not match the query".into()));
    }
    let w = value_set(p, c.index, &q.l, &c.t, c.lp.as_ref(), c.lpp.as_ref())?;
    Ok(w == c.value_set && beta_clause(&w, &q.y)?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    pub certificate: Option<Certificate>,
    pub examined: usize,
    /// The candidate lists were cut at the budget cap.
    pub truncated: bool,
}

pub(crate) fn candidate(
    p: &ProblemInstance,
    index: u8,
    l: &LinOp,
    space: &SearchSpace,
    i: usize,
) -> Result<Certificate> {
    let (ti, a, b) = space.decode(index, i);
    let t = &space.ts[ti];
    let lp = (index >= 2).then(|| space.lps[a].clone());
    let lpp = (index == 3).then(|| space.lpps[b].clone());
    let value_set = value_set(p, index, l, t, lp.as_ref(), lpp.as_ref())?;
    Ok(Certificate {
        index,
        t: t.clone(),
        lp,
        lpp,
        value_set,
    })
}

/// First certificate in candidate order. Workers race, the lowest index wins.
pub fn search_certificate(p: &ProblemInstance, q: &FarkasQuery, space: &SearchSpace) -> Result<SearchOutcome> {
    q.check(p)?;
    let budget = space.budget(q.index);
    let hit = (0..budget).into_par_iter().find_map_first(|i| {
        match candidate(p, q.index, &q.l, space, i).and_then(|c| beta_clause(&c.value_set, &q.y).map(|ok| (c, ok))) {
            Ok((c, true)) => Some(Ok((i, c))),
            Ok((_, false)) => None,
            Err(e) => Some(Err(e)),
        }
    });
    let truncated = budget < space.size(q.index);
    match hit.transpose()? {
        Some((i, c)) => Ok(SearchOutcome {
            certificate: Some(c),
            examined: i + 1,
            truncated,
        }),
        None => Ok(SearchOutcome {
            certificate: None,
            examined: budget,
            truncated,
        }),
    }
}

/// `(L, y) ∈ 𝒜ᵢ`, decided by certificate search.
pub fn script_a_membership(
    i: u8,
    p: &ProblemInstance,
    l: &LinOp,
    y: &Vector,
    cfg: &SearchConfig,
) -> Result<Option<Certificate>> {
    let q = FarkasQuery::new(i, l.clone(), y.clone())?;
    let space = SearchSpace::from_config(p, cfg)?;
    Ok(search_certificate(p, &q, &space)?.certificate)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Outcome {
    BothTrue,
    BothFalse,
    /// α holds and the budget produced no certificate.
    NotFound,
    /// A certificate for a false α: impossible for a correct engine.
    Failure,
}

#[derive(Clone, Debug)]
pub struct ReportRow {
    pub query: FarkasQuery,
    pub alpha: bool,
    pub certificate: Option<Certificate>,
    pub examined: usize,
    pub outcome: Outcome,
}

impl ReportRow {
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::json!({
            "query": self.query.to_json(),
            "alpha": self.alpha,
            "beta_status": if self.certificate.is_some() { "FOUND" } else { "NOT_FOUND" },
            "outcome": self.outcome,
        });
        if let Some(c) = &self.certificate {
            v["certificate"] = c.to_json();
        }
        v
    }
}

#[derive(Clone, Debug)]
pub struct FarkasReport {
    pub instance: String,
    pub index: u8,
    pub rows: Vec<ReportRow>,
    pub convex: bool,
    pub slater: bool,
}

impl FarkasReport {
    pub fn count(&self, o: Outcome) -> usize {
        self.rows.iter().filter(|r| r.outcome == o).count()
    }

    /// JSON lines, one per query in input order.
    pub fn to_json_lines(&self) -> String {
        self.rows
            .iter()
            .map(|r| serde_json::to_string(&r.to_json()).expect("serializable") + "\n")
            .collect()
    }

    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "format": 1,
            "instance": self.instance,
            "index": self.index,
            "flags": {"convex": self.convex, "slater": self.slater},
            "both_true": self.count(Outcome::BothTrue),
            "both_false": self.count(Outcome::BothFalse),
            "not_found": self.count(Outcome::NotFound),
            "failure": self.count(Outcome::Failure),
        })
    }
}

/// Evaluates (α) and searches for a certificate for every query. A certificate
/// for a query whose (α) fails aborts with the reproducer in the error.
pub fn farkas_equivalence_report(
    p: &ProblemInstance,
    index: u8,
    queries: &[(LinOp, Vector)],
    space: &SearchSpace,
) -> Result<FarkasReport> {
    if queries.is_empty() {
        return Err(Error::Malformed("a report needs at least one query".into()));
    }
    let rows: Vec<ReportRow> = queries
        .par_iter()
        .map(|(l, y)| {
            let q = FarkasQuery::new(index, l.clone(), y.clone())?;
            let alpha = alpha_holds(p, l, y)?;
            let found = search_certificate(p, &q, space)?;
            let outcome = match (alpha, found.certificate.is_some()) {
                (true, true) => Outcome::BothTrue,
                (false, false) => Outcome::BothFalse,
                (true, false) => Outcome::NotFound,
                (false, true) => Outcome::Failure,
            };
            Ok(ReportRow {
                query: q,
                alpha,
                certificate: found.certificate,
                examined: found.examined,
                outcome,
            })
        })
        .collect::<Result<_>>()?;
    if let Some(bad) = rows.iter().find(|r| r.outcome == Outcome::Failure) {
        let dump = serde_json::json!({"instance": p.name, "row": bad.to_json()});
        return Err(Error::Violation(format!("certificate for a false alpha: {dump}")));
    }
    Ok(FarkasReport {
        instance: p.name.clone(),
        index,
        rows,
        convex: p.flags.convex(),
        slater: p.slater_holds(),
    })
}
