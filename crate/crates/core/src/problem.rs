//! The constrained problem `winf{F(x) : x ∈ C, G(x) ∈ −S}` on sampled data.

use std::sync::Arc;

use crate::cone::{Cone, PointClass};
use crate::conjugate::SampledMap;
use crate::error::{check_dim, Error, Result};
use crate::linop::{LinOp, PosOp};
use crate::num::Vector;

/// Structural facts about the data. Only the Slater point is checked; the
/// rest are declarations carried into reports.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Flags {
    pub is_linear_f: bool,
    pub is_linear_g: bool,
    pub is_convex_c: bool,
    pub slater_point: Option<Vector>,
    /// The shipped hints are meant to certify every query the suites ask.
    pub hints_complete: bool,
}

impl Flags {
    pub fn convex(&self) -> bool {
        self.is_linear_f && self.is_linear_g && self.is_convex_c
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Hints {
    /// Candidate `T: Z → Y`.
    pub t: Vec<LinOp>,
    /// Candidate `L′: X → Y`.
    pub lp: Vec<LinOp>,
    /// Candidate `L″: X → Y`.
    pub lpp: Vec<LinOp>,
    /// Perturbations to sweep.
    pub l: Vec<LinOp>,
}

impl Hints {
    pub fn is_empty(&self) -> bool {
        self.t.is_empty() && self.lp.is_empty() && self.lpp.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct ProblemInstance {
    pub name: String,
    k: Arc<Cone>,
    s: Arc<Cone>,
    domain: Vec<Vector>,
    f: SampledMap,
    g: SampledMap,
    // sorted indices into `domain`
    c: Vec<usize>,
    c_points: Vec<Vector>,
    f_on_c: SampledMap,
    g_on_c: SampledMap,
    ic: SampledMap,
    pub hints: Hints,
    pub flags: Flags,
}

impl ProblemInstance {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        k: Arc<Cone>,
        s: Arc<Cone>,
        domain: Vec<Vector>,
        f_values: Vec<Vector>,
        g_values: Vec<Vector>,
        mut c: Vec<usize>,
        hints: Hints,
        flags: Flags,
    ) -> Result<ProblemInstance> {
        let n = domain.first().map_or(0, Vector::dim);
        check_dim("F values", domain.len(), f_values.len())?;
        check_dim("G values", domain.len(), g_values.len())?;
        c.sort_unstable();
        c.dedup();
        if let Some(&bad) = c.iter().find(|&&i| i >= domain.len()) {
            return Err(Error::Malformed(format!("C index {bad} is outside the domain")));
        }
        if c.is_empty() {
            return Err(Error::EmptyDomain("C is empty".into()));
        }
        let f = SampledMap::new(n, k.dim(), domain.iter().cloned().zip(f_values).collect())?;
        let g = SampledMap::new(n, s.dim(), domain.iter().cloned().zip(g_values).collect())?;
        let c_points: Vec<Vector> = c.iter().map(|&i| domain[i].clone()).collect();
        let f_on_c = f.restrict(&c_points)?;
        let g_on_c = g.restrict(&c_points)?;
        let ic = SampledMap::indicator(&c_points, n, k.dim())?;
        let p = ProblemInstance {
            name: name.into(),
            k,
            s,
            domain,
            f,
            g,
            c,
            c_points,
            f_on_c,
            g_on_c,
            ic,
            hints,
            flags,
        };
        p.check_hints()?;
        if let Some(x1) = &p.flags.slater_point {
            check_dim("Slater point", n, x1.dim())?;
        }
        Ok(p)
    }

    fn check_hints(&self) -> Result<()> {
        let (n, m, pd) = (self.n(), self.m(), self.p());
        for t in &self.hints.t {
            check_dim("T hint rows", m, t.rows())?;
            check_dim("T hint columns", pd, t.cols())?;
            PosOp::new(t.clone(), &self.s, &self.k)?;
        }
        for l in self.hints.lp.iter().chain(&self.hints.lpp).chain(&self.hints.l) {
            check_dim("operator hint rows", m, l.rows())?;
            check_dim("operator hint columns", n, l.cols())?;
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.f.in_dim()
    }

    pub fn m(&self) -> usize {
        self.k.dim()
    }

    pub fn p(&self) -> usize {
        self.s.dim()
    }

    pub fn k(&self) -> &Arc<Cone> {
        &self.k
    }

    pub fn s(&self) -> &Arc<Cone> {
        &self.s
    }

    pub fn domain(&self) -> &[Vector] {
        &self.domain
    }

    pub fn c_indices(&self) -> &[usize] {
        &self.c
    }

    pub fn c_points(&self) -> &[Vector] {
        &self.c_points
    }

    pub fn f(&self) -> &SampledMap {
        &self.f
    }

    pub fn g(&self) -> &SampledMap {
        &self.g
    }

    pub fn f_on_c(&self) -> &SampledMap {
        &self.f_on_c
    }

    pub fn g_on_c(&self) -> &SampledMap {
        &self.g_on_c
    }

    /// `I_C` with values in `Y`.
    pub fn indicator(&self) -> &SampledMap {
        &self.ic
    }

    fn in_minus_s(&self, z: &Vector) -> bool {
        self.s.contains(&-z)
    }

    /// `A = {x ∈ C : G(x) ∈ −S}` as points of the domain.
    pub fn feasible_points(&self) -> Result<Vec<Vector>> {
        let a: Vec<Vector> = self
            .g_on_c
            .samples()
            .iter()
            .filter(|(_, z)| self.in_minus_s(z))
            .map(|(x, _)| x.clone())
            .collect();
        if a.is_empty() {
            return Err(Error::EmptyFeasibleSet);
        }
        Ok(a)
    }

    /// `{F(x) − L(x) : x ∈ A}`.
    pub fn feasible_image(&self, l: &LinOp) -> Result<Vec<Vector>> {
        check_dim("perturbation rows", self.m(), l.rows())?;
        check_dim("perturbation columns", self.n(), l.cols())?;
        let a = self.feasible_points()?;
        Ok(a.iter()
            .map(|x| {
                let fx = self.f.value(x).expect("A lies in the domain");
                fx - &l.apply_unchecked(x)
            })
            .collect())
    }

    /// `G(x₁) ∈ −int S` at a point of `C`.
    pub fn slater_holds(&self) -> bool {
        let Some(x1) = &self.flags.slater_point else {
            return false;
        };
        match self.g_on_c.value(x1) {
            Some(z) => self.s.classify_values(&self.s.normal_values(&-z)) == PointClass::Interior,
            None => false,
        }
    }

    pub fn zero_perturbation(&self) -> LinOp {
        LinOp::zeros(self.m(), self.n())
    }

    /// `T ∘ G` over the whole domain.
    pub fn tg(&self, t: &PosOp) -> Result<SampledMap> {
        self.g.compose(t.op())
    }

    /// `I_C + T ∘ G`.
    pub fn ic_tg(&self, t: &PosOp) -> Result<SampledMap> {
        self.g_on_c.compose(t.op())
    }

    /// `F + I_C + T ∘ G`.
    pub fn f_ic_tg(&self, t: &PosOp) -> Result<SampledMap> {
        self.f_on_c.add(&self.ic_tg(t)?)
    }
}
