//! Suites on sets, sums and conjugates.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use super::{gen, run_trials, SuiteConfig, Tally};
use crate::cone::Cone;
use crate::conjugate::{
    boxplus, conjugate, epi_membership, exepi_membership, find_split, psi_contains, verify_split, ConjugateEpigraph,
    ExtEpiElement, PsiOutcome, SampledMap,
};
use crate::error::{Error, Result};
use crate::instance::{parse_cone, read_json, shipped_dir};
use crate::linop::LinOp;
use crate::num::{grid_points, q, qr, Vector};
use crate::oracle::{brute_conjugate, brute_region, brute_region_inf, brute_wsum, in_closure, in_lower};
use crate::order::{classify_against, neutral, GenSet, RegionLabel};

fn square_grid(half_width: i64, step: (i64, i64)) -> Vec<Vector> {
    grid_points(2, &q(-half_width), &q(half_width), &qr(step.0, step.1)).expect("valid grid")
}

/// Labels of `wsup M` and `winf M`: engine against the oracle, grid point by
/// grid point.
pub fn decomposition(cfg: &SuiteConfig, trials: usize) -> Result<Tally> {
    let grid = square_grid(10, (1, 2));
    let coarse = square_grid(10, (1, 1));
    run_trials(cfg, trials, |t, rng| {
        let mut tally = Tally::default();
        let size = rng.random_range(1..=20);
        let m = gen::points(rng, size, 2, -8, 8, 2);
        for c in 0..3 {
            let k = Arc::new(gen::planar_cone(rng));
            let set = GenSet::sup(&k, m.clone())?;
            let oracle = brute_region(&m, &k, &grid);
            let mut mismatches = 0u64;
            for (y, want) in grid.iter().zip(&oracle) {
                let general = classify_against(&m, &k, y)?;
                let fast = set.classify(y)?;
                if general != *want || fast != *want {
                    mismatches += 1;
                }
                tally.bump(want.as_str(), 1);
            }
            tally.bump("points", grid.len() as u64);
            tally.check(mismatches == 0, || {
                format!(
                    "trial {t} cone {c}: {mismatches} sup labels differ; M = {m:?}, K = {}",
                    k.to_json()
                )
            });
            let inf = GenSet::inf(&k, m.clone())?;
            let oracle = brute_region_inf(&m, &k, &coarse);
            let bad = coarse
                .iter()
                .zip(&oracle)
                .filter(|(y, want)| inf.classify(y).ok() != Some(**want))
                .count();
            tally.check(bad == 0, || format!("trial {t} cone {c}: {bad} inf labels differ"));
        }
        Ok(tally)
    })
}

fn labels(set: &GenSet, grid: &[Vector]) -> Result<Vec<RegionLabel>> {
    grid.iter().map(|y| set.classify(y)).collect()
}

/// Monoid laws and order compatibility of `⊎`, and agreement with the raw
/// Minkowski-sum oracle.
pub fn wsum(cfg: &SuiteConfig, trials: usize) -> Result<Tally> {
    let grid = square_grid(10, (1, 2));
    run_trials(cfg, trials, |t, rng| {
        let mut tally = Tally::default();
        let k = Arc::new(gen::planar_cone(rng));
        let raw: Vec<Vec<Vector>> = (0..3)
            .map(|_| {
                let n = rng.random_range(1..=5);
                gen::points(rng, n, 2, -3, 3, 2)
            })
            .collect();
        let sets: Vec<GenSet> = raw.iter().map(|m| GenSet::sup(&k, m.clone())).collect::<Result<_>>()?;
        let (u, v, w) = (&sets[0], &sets[1], &sets[2]);
        let uv = u.ws_sum(v)?;
        let vu = v.ws_sum(u)?;
        tally.check(uv == vu && labels(&uv, &grid)? == labels(&vu, &grid)?, || {
            format!("trial {t}: U ⊎ V differs from V ⊎ U for {raw:?}")
        });
        let left = uv.ws_sum(w)?;
        let right = u.ws_sum(&v.ws_sum(w)?)?;
        tally.check(left == right && labels(&left, &grid)? == labels(&right, &grid)?, || {
            format!("trial {t}: sum is not associative for {raw:?}")
        });
        let e = u.ws_sum(&neutral(&k))?;
        tally.check(e == *u && labels(&e, &grid)? == labels(u, &grid)?, || {
            format!("trial {t}: −bd K is not neutral for {:?}", raw[0])
        });
        let oracle = brute_wsum(&raw[0], &raw[1], &k, &grid);
        tally.check(labels(&uv, &grid)? == oracle, || {
            format!("trial {t}: sum disagrees with the oracle on {raw:?}")
        });
        // U ≼ U' by construction: translate up and add points below
        let shift = gen::cone_point(rng, &k);
        let mut bigger: Vec<Vector> = raw[0].iter().map(|p| p + &shift).collect();
        bigger.push(&raw[0][0] - &gen::cone_point(rng, &k));
        let u2 = GenSet::sup(&k, bigger.clone())?;
        let oracle_le = raw[0].iter().all(|p| in_closure(&bigger, &k, p));
        tally.check(u.preceq(&u2)? && oracle_le, || {
            format!("trial {t}: U ≼ U' fails for {:?}", raw[0])
        });
        let a = u.ws_sum(w)?;
        let b = u2.ws_sum(w)?;
        let sum_le = a
            .generator_points()
            .iter()
            .all(|p| in_closure(b.generator_points(), &k, p));
        tally.check(a.preceq(&b)? && sum_le, || {
            format!("trial {t}: ⊎ is not ≼-monotone on {raw:?}")
        });
        tally.bump("sums", 5);
        Ok(tally)
    })
}

/// `Ψ(𝔈pi F*) = epi F*` with the witness `y + bd K`.
pub fn psi(cfg: &SuiteConfig, trials: usize) -> Result<Tally> {
    run_trials(cfg, trials, |t, rng| {
        let mut tally = Tally::default();
        let n = rng.random_range(1..=2);
        let f = gen::sampled_map(rng, n, 2, 15);
        let k = Arc::new(gen::planar_cone(rng));
        let fam = ConjugateEpigraph::new(&f, &k);
        for j in 0..25 {
            let l = gen::operator(rng, 2, n, 2, 2);
            let y = if j % 3 == 0 {
                // a point of the frontier of F*(L)
                let fc = conjugate(&f, &l, &k)?;
                let from = gen::point(rng, 2, -6, 6, 2);
                fc.frontier_point_along(&from, k.interior_witness())?.1
            } else {
                gen::point(rng, 2, -6, 6, 2)
            };
            let epi = epi_membership(&f, &l, &y, &k)?;
            let oracle = !in_lower(&brute_conjugate(f.samples(), &l), &k, &y);
            let out = psi_contains(&fam, &l, &y, 1)?;
            let witness_ok = match &out {
                PsiOutcome::Found { witness, .. } => *witness == GenSet::inf(&k, vec![y.clone()])?,
                PsiOutcome::NotFound { .. } => true,
            };
            tally.check(out.found() == epi && epi == oracle && witness_ok, || {
                format!(
                    "trial {t} query {j}: psi {} epi {epi} oracle {oracle} at L = {l}, y = {y}",
                    out.found()
                )
            });
            tally.bump(if epi { "in_epigraph" } else { "outside" }, 1);
        }
        Ok(tally)
    })
}

fn random_element(rng: &mut ChaCha8Rng, f: &SampledMap, k: &Arc<Cone>, n: usize, inf: bool) -> Result<ExtEpiElement> {
    let l = gen::operator(rng, 2, n, 2, 2);
    let fc = conjugate(f, &l, k)?;
    let bound = if inf {
        let from = gen::point(rng, 2, -6, 6, 2);
        let hit = fc.frontier_point_along(&from, k.interior_witness())?.1;
        GenSet::inf(k, vec![&hit + &gen::cone_point(rng, k)])?
    } else {
        fc.translate(&gen::cone_point(rng, k))?
    };
    ExtEpiElement::new(f, l, bound)
}

struct Pair {
    name: String,
    k: Arc<Cone>,
    f1: SampledMap,
    f2: SampledMap,
    ls: Vec<LinOp>,
    split: Vec<LinOp>,
}

fn load_pairs() -> Result<Vec<Pair>> {
    let doc = read_json(&shipped_dir().join("basic_lemmas.json"))?;
    let pairs = doc
        .get("pairs")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Malformed("basic_lemmas.json needs a pairs list".into()))?;
    pairs
        .iter()
        .map(|p| {
            let n = p.get("n").and_then(Value::as_u64).unwrap_or(1) as usize;
            let k = Arc::new(parse_cone(&p["K"], 2)?);
            let domain: Vec<Vector> = p["domain"]
                .as_array()
                .ok_or_else(|| Error::Malformed("pair domain must be a list".into()))?
                .iter()
                .map(Vector::from_json)
                .collect::<Result<_>>()?;
            let a1 = LinOp::from_json(&p["A1"], 2, n)?;
            let a2 = LinOp::from_json(&p["A2"], 2, n)?;
            let ops = |key: &str| -> Result<Vec<LinOp>> {
                p[key]
                    .as_array()
                    .map(|xs| xs.iter().map(|x| LinOp::from_json(x, 2, n)).collect())
                    .unwrap_or_else(|| Ok(Vec::new()))
            };
            Ok(Pair {
                name: p["name"].as_str().unwrap_or("pair").to_string(),
                f1: SampledMap::linear(&a1, &domain)?,
                f2: SampledMap::linear(&a2, &domain)?,
                k,
                ls: ops("L")?,
                split: ops("split")?,
            })
        })
        .collect()
}

/// Sums of extended-epigraph elements stay in the extended epigraph of the
/// sum; on the shipped linear pairs every point of `epi(F₁+F₂)*` splits.
pub fn basic_lemmas(cfg: &SuiteConfig, trials: usize) -> Result<Tally> {
    let mut tally = run_trials(cfg, trials, |t, rng| {
        let mut tally = Tally::default();
        let n = rng.random_range(1..=2);
        let k = Arc::new(gen::planar_cone(rng));
        let count = rng.random_range(1..=8);
        let xs = gen::distinct_points(rng, count, n, -3, 3);
        let values = |rng: &mut ChaCha8Rng| -> Result<SampledMap> {
            let s = xs.iter().map(|x| (x.clone(), gen::point(rng, 2, -3, 3, 2))).collect();
            SampledMap::new(n, 2, s)
        };
        let f1 = values(rng)?;
        let f2 = values(rng)?;
        let sum = f1.add(&f2)?;
        let inf_second = rng.random_bool(0.5);
        let e1 = random_element(rng, &f1, &k, n, false)?;
        let e2 = random_element(rng, &f2, &k, n, inf_second)?;
        let e = boxplus(&e1, &e2)?;
        tally.check(exepi_membership(&sum, &e)?, || {
            format!(
                "trial {t}: ⊞-sum left the extended epigraph: {} + {}",
                e1.to_json(),
                e2.to_json()
            )
        });
        tally.bump(if inf_second { "inclusion_mixed" } else { "inclusion_sup" }, 1);
        Ok(tally)
    })?;
    let grid = square_grid(4, (1, 1));
    for pair in load_pairs()? {
        let sum = pair.f1.add(&pair.f2)?;
        for l in &pair.ls {
            let fc = conjugate(&sum, l, &pair.k)?;
            let mut frontier: Vec<Vector> = fc.generator_points().to_vec();
            for from in &grid {
                frontier.push(fc.frontier_point_along(from, pair.k.interior_witness())?.1);
            }
            for y in &frontier {
                let s = find_split(&pair.f1, &pair.f2, &pair.k, l, y, &pair.split)?;
                let ok = match &s {
                    Some(s) => verify_split(&pair.f1, &pair.f2, l, y, s)?,
                    None => false,
                };
                tally.check(ok, || format!("{}: no split at L = {l}, y = {y}", pair.name));
                tally.bump("frontier_queries", 1);
            }
            for y in &grid {
                let s = find_split(&pair.f1, &pair.f2, &pair.k, l, y, &pair.split)?;
                let epi = epi_membership(&sum, l, y, &pair.k)?;
                tally.check(s.is_some() == epi, || {
                    format!(
                        "{}: split {} but epigraph {epi} at L = {l}, y = {y}",
                        pair.name,
                        s.is_some()
                    )
                });
                tally.bump("grid_queries", 1);
            }
        }
    }
    Ok(tally)
}
