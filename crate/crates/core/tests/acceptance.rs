//! One PASS/FAIL line per acceptance criterion. Exact rational mode
//! throughout; the only pinned tolerance is the 30 s runtime budget of the
//! decomposition suite.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use vecdual::duality::{dual_value, strong_duality_check, winf_vp, DualProblem, StrongStatus};
use vecdual::instance::load_shipped;
use vecdual::num::q;
use vecdual::suites::{run_suite, SuiteConfig, SuiteReport};
use vecdual::{LinOp, SearchSpace, Vector};

const SEED: u64 = 7;
const DECOMPOSITION_BUDGET: Duration = Duration::from_secs(30);

struct Line {
    ok: bool,
    detail: String,
}

fn suite(name: &str, jobs: usize) -> SuiteReport {
    let cfg = SuiteConfig {
        seed: SEED,
        trials: None,
        jobs,
    };
    run_suite(name, &cfg).unwrap_or_else(|e| panic!("suite {name}: {e}"))
}

fn stat(r: &SuiteReport, key: &str) -> u64 {
    r.stats.get(key).copied().unwrap_or(0)
}

fn summary(r: &SuiteReport) -> String {
    let mut s = format!("{}: {} checks, {} failed", r.suite, r.checks, r.failed);
    if let Some(f) = r.failures.first() {
        s.push_str(&format!("; first: {f}"));
    }
    s
}

fn c1() -> Line {
    let start = Instant::now();
    let r = suite("decomposition", 1);
    let took = start.elapsed();
    let points = 200 * 3 * 41 * 41;
    let labelled = stat(&r, "FRONTIER") + stat(&r, "LOWER") + stat(&r, "UPPER");
    Line {
        ok: r.passed()
            && r.trials == 200
            && stat(&r, "points") == points
            && labelled == points
            && took < DECOMPOSITION_BUDGET,
        detail: format!(
            "{}; {labelled} of {points} points labelled once; {:.1}s",
            summary(&r),
            took.as_secs_f64()
        ),
    }
}

fn c2() -> Line {
    let r = suite("wsum", 1);
    Line {
        ok: r.passed() && r.trials == 200 && stat(&r, "sums") == 1000,
        detail: summary(&r),
    }
}

fn c3() -> Line {
    let r = suite("psi", 1);
    let queries = stat(&r, "in_epigraph") + stat(&r, "outside");
    Line {
        ok: r.passed() && r.trials == 100 && queries == 2500,
        detail: format!("{}; {queries} queries", summary(&r)),
    }
}

fn c4() -> Line {
    let r = suite("basic-lemmas", 1);
    let inclusion = stat(&r, "inclusion_sup") + stat(&r, "inclusion_mixed");
    Line {
        ok: r.passed() && inclusion == 100 && stat(&r, "frontier_queries") > 0,
        detail: format!(
            "{}; {inclusion} inclusion pairs, {} frontier queries split",
            summary(&r),
            stat(&r, "frontier_queries")
        ),
    }
}

fn c5() -> Line {
    let r = suite("representation", 1);
    let queries = stat(&r, "in_epigraph") + stat(&r, "outside");
    Line {
        ok: r.passed() && queries == 5 * 9 * 81 && stat(&r, "conversions") > 0,
        detail: format!(
            "{}; {queries} queries, {} conversions",
            summary(&r),
            stat(&r, "conversions")
        ),
    }
}

fn c6() -> Line {
    let r = suite("farkas", 1);
    Line {
        ok: r.passed() && stat(&r, "queries") == 1000 && stat(&r, "hinted_both_true") > 0,
        detail: format!(
            "{}; {} random queries, {} certificates, {} hinted alpha-true queries certified",
            summary(&r),
            stat(&r, "queries"),
            stat(&r, "certificates"),
            stat(&r, "hinted_both_true")
        ),
    }
}

fn c7() -> Line {
    let r = suite("weak-duality", 1);
    Line {
        ok: r.passed() && stat(&r, "runs") == 250,
        detail: format!("{}; {} runs", summary(&r), stat(&r, "runs")),
    }
}

fn e1_exact() -> Result<(), String> {
    let file = load_shipped("e1").map_err(|e| e.to_string())?;
    let p = &file.problem;
    let space = SearchSpace::from_config(p, &file.search).map_err(|e| e.to_string())?;
    let zero = LinOp::zeros(1, 1);
    let one = [Vector(vec![q(1)])];
    let primal = winf_vp(p, &zero).map_err(|e| e.to_string())?;
    if primal.generator_points() != one {
        return Err(format!("E1 primal {:?}", primal.generator_points()));
    }
    for which in DualProblem::ALL {
        let d = dual_value(p, which, &zero, &space).map_err(|e| e.to_string())?;
        if d.frontier.generator_points() != one {
            return Err(format!("E1 {} = {:?}", which.as_str(), d.frontier.generator_points()));
        }
        for l in &p.hints.l {
            let s = strong_duality_check(p, which, l, &space).map_err(|e| e.to_string())?;
            if !matches!(s.status, StrongStatus::Holds) {
                return Err(format!("E1 {} at L = {l}: {}", which.as_str(), s.status.label()));
            }
        }
    }
    Ok(())
}

fn c8() -> Line {
    let strong = suite("strong-duality", 1);
    let scalar = suite("scalar-regression", 1);
    let direct = e1_exact();
    Line {
        ok: strong.passed()
            && scalar.passed()
            && direct.is_ok()
            && stat(&strong, "e1_holds") == 9
            && stat(&strong, "e2_holds") == 4
            && stat(&scalar, "instances") == 20,
        detail: format!(
            "{}; {}; E1 direct: {}",
            summary(&strong),
            summary(&scalar),
            direct
                .err()
                .unwrap_or_else(|| "value 1 for VD1, VD2, VD3, HOLDS at L in {-1,0,1}".into())
        ),
    }
}

fn c9() -> Line {
    let mut diverged = Vec::new();
    for name in [
        "wsum",
        "psi",
        "basic-lemmas",
        "representation",
        "farkas",
        "weak-duality",
        "strong-duality",
        "scalar-regression",
    ] {
        let a = suite(name, 1).to_json_string();
        for jobs in [2, 4] {
            if suite(name, jobs).to_json_string() != a {
                diverged.push(format!("{name} jobs={jobs}"));
            }
        }
    }
    let short = |jobs| {
        let cfg = SuiteConfig {
            seed: SEED,
            trials: Some(20),
            jobs,
        };
        run_suite("decomposition", &cfg)
            .expect("decomposition")
            .to_json_string()
    };
    if short(1) != short(3) {
        diverged.push("decomposition (20 trials) jobs=3".into());
    }
    let cli = |jobs: &str| {
        Command::new(env!("CARGO_BIN_EXE_vecdual"))
            .args(["verify", "farkas", "--seed", "11", "--trials", "20", "--jobs", jobs])
            .output()
            .expect("run vecdual")
    };
    let (one, three) = (cli("1"), cli("3"));
    let cli_ok = one.status.success() && one.stdout == three.stdout && !one.stdout.is_empty();
    if !cli_ok {
        diverged.push("cli farkas jobs 1 vs 3".into());
    }
    Line {
        ok: diverged.is_empty(),
        detail: if diverged.is_empty() {
            "8 suites byte-identical for jobs 1, 2, 4, decomposition for jobs 1, 3; CLI reports identical for jobs 1, 3"
                .into()
        } else {
            format!("diverged: {}", diverged.join(", "))
        },
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Line); 9] = [
        ("decomposition", c1),
        ("ws-sum", c2),
        ("psi", c3),
        ("basic lemmas", c4),
        ("representation", c5),
        ("farkas", c6),
        ("weak duality", c7),
        ("strong duality and scalar regression", c8),
        ("determinism", c9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let line = run();
        if !line.ok {
            failed += 1;
        }
        println!(
            "criterion {} {name}: {} ({})",
            i + 1,
            if line.ok { "PASS" } else { "FAIL" },
            line.detail
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
