//! Suites on the constrained problem: representation sets, the Farkas
//! equivalence, and duality.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{gen, run_trials, SuiteConfig, Tally};
use crate::conjugate::epi_membership;
use crate::duality::{
    dual_value, stable_strong_duality_sweep, strong_duality_check, weak_duality_check, winf_vp, DualProblem,
    StrongStatus,
};
use crate::error::{Error, Result};
use crate::farkas::{
    alpha_holds, farkas_equivalence_report, search_certificate, verify_certificate, Certificate, FarkasQuery, Outcome,
};
use crate::instance::{load_shipped, InstanceFile};
use crate::linop::{sample_positive_operators, LinOp, PosOp};
use crate::num::{grid_values, q, qr, Vector, Q};
use crate::oracle::{brute_beta, brute_conjugate, ScalarProblem};
use crate::problem::ProblemInstance;
use crate::search::{SearchConfig, SearchSpace};

pub const REPRESENTATION_INSTANCES: [&str; 5] = ["e3", "rep_square", "rep_tilted", "rep_cone", "rep_two_constraints"];

/// Nine perturbations: the diagonal entries range over `{−½, 0, ½}`.
fn nine_perturbations(p: &ProblemInstance) -> Vec<LinOp> {
    let vals = [qr(-1, 2), q(0), qr(1, 2)];
    let mut out = Vec::new();
    for a in vals {
        for b in vals {
            let mut entries = vec![q(0); p.m() * p.n()];
            entries[0] = a;
            // second row, last column
            entries[p.m() * p.n() - 1] = b;
            out.push(LinOp::from_entries(p.m(), p.n(), entries).expect("sizes agree"));
        }
    }
    out
}

fn y_grid(m: usize, lo: Q, hi: Q, step: Q) -> Vec<Vector> {
    crate::num::grid_points(m, &lo, &hi, &step).expect("valid grid")
}

/// Rechecks a certificate with the raw-cloud oracle.
fn oracle_beta(p: &ProblemInstance, q: &FarkasQuery, c: &Certificate) -> Result<bool> {
    let t = c.t.op();
    let over_c = |map: &crate::conjugate::SampledMap| -> Vec<(Vector, Vector)> {
        map.samples()
            .iter()
            .filter(|(x, _)| p.c_points().contains(x))
            .cloned()
            .collect()
    };
    let tg_all: Vec<(Vector, Vector)> = p
        .g()
        .samples()
        .iter()
        .map(|(x, z)| t.apply(z).map(|v| (x.clone(), v)))
        .collect::<Result<_>>()?;
    let tg_c: Vec<(Vector, Vector)> = tg_all
        .iter()
        .filter(|(x, _)| p.c_points().contains(x))
        .cloned()
        .collect();
    let f_c = over_c(p.f());
    let clouds = match c.index {
        1 => {
            let fx = brute_conjugate(&f_c, &q.l);
            let gx = brute_conjugate(&tg_c, &LinOp::zeros(p.m(), p.n()));
            vec![fx.iter().zip(&gx).map(|(a, b)| a + b).collect()]
        }
        2 => {
            let lp = c.lp.as_ref().expect("index 2 carries L′");
            vec![
                brute_conjugate(p.f().samples(), lp),
                brute_conjugate(&tg_c, &q.l.sub(lp)?),
            ]
        }
        _ => {
            let lp = c.lp.as_ref().expect("index 3 carries L′");
            let lpp = c.lpp.as_ref().expect("index 3 carries L″");
            let ic: Vec<(Vector, Vector)> = p.c_points().iter().map(|x| (x.clone(), Vector::zeros(p.m()))).collect();
            vec![
                brute_conjugate(p.f().samples(), lp),
                brute_conjugate(&ic, lpp),
                brute_conjugate(&tg_all, &q.l.sub(lp)?.sub(lpp)?),
            ]
        }
    };
    Ok(brute_beta(&clouds, p.k(), &q.y))
}

/// `𝒜₁` against `epi(F + I_A)*`, and the conversions `𝒜₃ → 𝒜₂ → 𝒜₁`.
pub fn representation(_cfg: &SuiteConfig) -> Result<Tally> {
    let mut tally = Tally::default();
    for name in REPRESENTATION_INSTANCES {
        let InstanceFile { problem: p, search } = load_shipped(name)?;
        tally.check(p.slater_holds(), || format!("{name}: the declared Slater point fails"));
        let full = SearchSpace::from_config(&p, &search)?;
        let hinted = SearchSpace::from_config(&p, &SearchConfig::hints_only())?;
        let f_on_a = p.f().restrict(&p.feasible_points()?)?;
        let ys = y_grid(p.m(), q(-3), q(1), qr(1, 2));
        for l in nine_perturbations(&p) {
            for y in &ys {
                let epi = epi_membership(&f_on_a, &l, y, p.k())?;
                let alpha = alpha_holds(&p, &l, y)?;
                tally.check(epi == alpha, || {
                    format!("{name}: alpha {alpha} but epi {epi} at L = {l}, y = {y}")
                });
                let q1 = FarkasQuery::new(1, l.clone(), y.clone())?;
                let a1 = search_certificate(&p, &q1, &full)?.certificate;
                tally.check(a1.is_some() == epi, || {
                    format!("{name}: A1 {} but epi {epi} at L = {l}, y = {y}", a1.is_some())
                });
                tally.bump(if epi { "in_epigraph" } else { "outside" }, 1);
                for index in [3u8, 2] {
                    let qi = FarkasQuery::new(index, l.clone(), y.clone())?;
                    let Some(c) = search_certificate(&p, &qi, &hinted)?.certificate else {
                        continue;
                    };
                    tally.bump(if index == 3 { "a3_found" } else { "a2_found" }, 1);
                    tally.check(epi, || format!("{name}: A{index} certificate outside the epigraph"));
                    let mut cur = c;
                    while cur.index > 1 {
                        cur = cur.downgrade(&p, &l)?;
                        let qd = FarkasQuery::new(cur.index, l.clone(), y.clone())?;
                        let ok = verify_certificate(&p, &qd, &cur)?;
                        tally.check(ok, || {
                            format!("{name}: conversion to index {} fails at L = {l}, y = {y}", cur.index)
                        });
                        tally.bump("conversions", 1);
                    }
                }
            }
        }
    }
    Ok(tally)
}

fn subset<T: Clone>(rng: &mut ChaCha8Rng, items: &[T], max: usize) -> Vec<T> {
    let mut v = items.to_vec();
    v.shuffle(rng);
    v.truncate(rng.random_range(1..=max.min(items.len()).max(1)));
    v
}

fn random_space(rng: &mut ChaCha8Rng, p: &ProblemInstance) -> Result<SearchSpace> {
    let ts = sample_positive_operators(p.s(), p.k(), &q(1), &q(1))?;
    let ls: Vec<LinOp> = (0..6).map(|_| gen::operator(rng, p.m(), p.n(), 1, 2)).collect();
    Ok(SearchSpace::new(
        subset(rng, &ts, 4),
        subset(rng, &ls, 3),
        subset(rng, &ls, 3),
    ))
}

const HINTED: [&str; 7] = [
    "e1",
    "e2",
    "e3",
    "rep_square",
    "rep_tilted",
    "rep_cone",
    "rep_two_constraints",
];

/// Soundness on random data; completeness on the hinted instances.
pub fn farkas(cfg: &SuiteConfig, trials: usize) -> Result<Tally> {
    let mut tally = run_trials(cfg, trials, |t, rng| {
        let mut tally = Tally::default();
        let p = gen::instance(rng, format!("random{t}"))?;
        let space = random_space(rng, &p)?;
        for j in 0..10 {
            let index = rng.random_range(1..=3u8);
            let l = gen::operator(rng, p.m(), p.n(), 1, 2);
            let y = gen::point(rng, p.m(), -4, 4, 2);
            let qr_ = FarkasQuery::new(index, l.clone(), y.clone())?;
            let found = search_certificate(&p, &qr_, &space)?.certificate;
            if let Some(c) = found {
                let alpha = alpha_holds(&p, &l, &y)?;
                let raw = oracle_beta(&p, &qr_, &c)?;
                tally.check(alpha && raw && verify_certificate(&p, &qr_, &c)?, || {
                    format!(
                        "trial {t} query {j}: certificate {} with alpha {alpha}, oracle {raw}",
                        c.to_json()
                    )
                });
                tally.bump("certificates", 1);
            } else {
                tally.bump("no_certificate", 1);
            }
            tally.bump("queries", 1);
        }
        Ok(tally)
    })?;
    for name in HINTED {
        let InstanceFile { problem: p, search } = load_shipped(name)?;
        let space = SearchSpace::from_config(&p, &search)?;
        let mut ls = p.hints.l.clone();
        if ls.is_empty() {
            ls.push(p.zero_perturbation());
        }
        let ys = y_grid(p.m(), q(-3), q(1), qr(1, 2));
        let indices: &[u8] = if p.m() == 1 { &[1, 2, 3] } else { &[1] };
        for &i in indices {
            let queries: Vec<(LinOp, Vector)> = ls
                .iter()
                .flat_map(|l| ys.iter().map(move |y| (l.clone(), y.clone())))
                .collect();
            let report = match farkas_equivalence_report(&p, i, &queries, &space) {
                Ok(r) => r,
                Err(Error::Violation(msg)) => {
                    tally.check(false, || msg);
                    continue;
                }
                Err(e) => return Err(e),
            };
            let nf = report.count(Outcome::NotFound);
            tally.check(nf == 0, || {
                format!("{name}: {nf} alpha-true queries without a β{i} certificate")
            });
            tally.bump("hinted_both_true", report.count(Outcome::BothTrue) as u64);
            tally.bump("hinted_both_false", report.count(Outcome::BothFalse) as u64);
        }
    }
    Ok(tally)
}

/// The chain `VD₃ ≼ VD₂ ≼ VD₁ ≼ VP` for random data and random budgets.
pub fn weak_duality(cfg: &SuiteConfig, trials: usize) -> Result<Tally> {
    run_trials(cfg, trials, |t, rng| {
        let mut tally = Tally::default();
        let p = gen::instance(rng, format!("random{t}"))?;
        for j in 0..5 {
            let l = gen::operator(rng, p.m(), p.n(), 1, 2);
            let space = random_space(rng, &p)?;
            let w = match weak_duality_check(&p, &l, &space) {
                Ok(w) => w,
                Err(Error::Unsupported(_)) => {
                    tally.bump("unsupported", 1);
                    continue;
                }
                Err(e) => return Err(e),
            };
            tally.check(w.all(), || {
                format!("trial {t} perturbation {j}: relations {:?} at L = {l}", w.relations)
            });
            for d in &w.values {
                tally.check(d.verify_provenance(&p)?, || {
                    format!(
                        "trial {t} perturbation {j}: a {} value fails to re-verify",
                        d.which.as_str()
                    )
                });
            }
            tally.bump("runs", 1);
        }
        Ok(tally)
    })
}

fn frontier_is(g: &crate::order::GenSet, value: Q) -> bool {
    g.generator_points() == [Vector(vec![value])]
}

/// Scalar strong duality on E1, vector strong duality on E2 and E3, and a gap
/// on a two-point nonconvex instance.
pub fn strong_duality(_cfg: &SuiteConfig) -> Result<Tally> {
    let mut tally = Tally::default();
    let InstanceFile { problem: e1, search } = load_shipped("e1")?;
    let space = SearchSpace::from_config(&e1, &search)?;
    let zero = e1.zero_perturbation();
    for which in DualProblem::ALL {
        let d = dual_value(&e1, which, &zero, &space)?;
        tally.check(frontier_is(&d.frontier, q(1)) && d.verify_provenance(&e1)?, || {
            format!("e1: {} value {:?}", which.as_str(), d.frontier.generator_points())
        });
        let sweep = stable_strong_duality_sweep(&e1, which, &e1.hints.l, &space)?;
        tally.check(sweep.count("HOLDS") == e1.hints.l.len(), || {
            format!("e1: {} sweep {}", which.as_str(), sweep.to_json())
        });
        tally.bump("e1_holds", sweep.count("HOLDS") as u64);
    }
    for name in ["e2", "e3"] {
        let InstanceFile { problem: p, search } = load_shipped(name)?;
        let space = SearchSpace::from_config(&p, &search)?;
        let ls = if name == "e2" {
            p.hints.l.clone()
        } else {
            vec![p.zero_perturbation()]
        };
        let sweep = stable_strong_duality_sweep(&p, DualProblem::Vd1, &ls, &space)?;
        tally.check(sweep.count("HOLDS") == ls.len(), || {
            format!("{name}: VD1 sweep {}", sweep.to_json())
        });
        tally.bump(&format!("{name}_holds"), sweep.count("HOLDS") as u64);
        for row in &sweep.rows {
            tally.check(row.dual.verify_provenance(&p)?, || format!("{name}: provenance"));
            // attained values reach the dual frontier
            let reach = row
                .dual
                .frontier
                .generator_points()
                .iter()
                .all(|z| row.dual.attaining(z).ok().flatten().is_some());
            tally.check(reach, || format!("{name}: frontier not attained"));
        }
    }
    let InstanceFile { problem: gap, search } = load_shipped("gap_two_points")?;
    let space = SearchSpace::from_config(&gap, &search)?;
    let r = strong_duality_check(&gap, DualProblem::Vd1, &gap.zero_perturbation(), &space)?;
    let ok = match &r.status {
        StrongStatus::Gap { witness, query } => {
            let no_cert = search_certificate(&gap, query, &space)?.certificate.is_none();
            *witness == Vector(vec![q(2)]) && alpha_holds(&gap, &query.l, &query.y)? && no_cert
        }
        _ => false,
    };
    tally.check(ok, || format!("gap_two_points: {}", r.to_json()));
    tally.check(frontier_is(&r.dual.frontier, q(1)), || {
        "gap_two_points: dual value".into()
    });
    Ok(tally)
}

fn scalar_oracle(p: &ProblemInstance) -> ScalarProblem {
    let xs = p.domain().to_vec();
    ScalarProblem {
        f: xs.iter().map(|x| p.f().value(x).expect("sampled")[0]).collect(),
        g: xs.iter().map(|x| p.g().value(x).expect("sampled").clone()).collect(),
        c: (0..xs.len()).filter(|&i| p.c_points().contains(&xs[i])).collect(),
        s_normals: p.s().normals().to_vec(),
        xs,
    }
}

/// `m = 1`: engine dual values against the independent scalar evaluator.
pub fn scalar_regression(cfg: &SuiteConfig, trials: usize) -> Result<Tally> {
    run_trials(cfg, trials, |t, rng| {
        let mut tally = Tally::default();
        let p = gen::scalar_instance(rng, format!("scalar{t}"))?;
        let oracle = scalar_oracle(&p);
        let ts: Vec<PosOp> = sample_positive_operators(p.s(), p.k(), &q(1), &qr(1, 2))?;
        let axis = grid_values(&q(-1), &q(1), &qr(1, 2))?;
        let lvals: Vec<Vec<Q>> = crate::num::grid_points(p.n(), &q(-1), &q(1), &q(1))?
            .into_iter()
            .map(|v| v.0)
            .collect();
        let ls: Vec<LinOp> = lvals
            .iter()
            .map(|v| LinOp::from_entries(1, p.n(), v.clone()).expect("row"))
            .collect();
        let space = SearchSpace::new(ts.clone(), ls.clone(), ls.clone());
        let lambdas: Vec<Vec<Q>> = ts.iter().map(|t| t.op().entries().to_vec()).collect();
        let xstar: Vec<Q> = (0..p.n()).map(|_| axis[rng.random_range(0..axis.len())]).collect();
        let l = LinOp::from_entries(1, p.n(), xstar.clone())?;
        let primal = winf_vp(&p, &l)?;
        let want_p = oracle.primal(&xstar).expect("feasible");
        tally.check(frontier_is(&primal, want_p), || {
            format!("trial {t}: primal {primal:?} vs {want_p}")
        });
        let want = [
            oracle.d1(&xstar, &lambdas),
            oracle.d2(&xstar, &lambdas, &lvals),
            oracle.d3(&xstar, &lambdas, &lvals, &lvals),
        ];
        for (which, w) in DualProblem::ALL.into_iter().zip(want) {
            let d = dual_value(&p, which, &l, &space)?;
            let w = w.expect("nonempty grids");
            tally.check(frontier_is(&d.frontier, w), || {
                format!(
                    "trial {t}: {} engine {:?} oracle {w} at x* = {:?}",
                    which.as_str(),
                    d.frontier.generator_points(),
                    xstar
                )
            });
            tally.check(w <= want_p, || {
                format!("trial {t}: oracle {} above the primal", which.as_str())
            });
        }
        tally.bump("instances", 1);
        Ok(tally)
    })
}
