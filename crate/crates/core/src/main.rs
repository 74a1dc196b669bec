use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use vecdual::conjugate::conjugate;
use vecdual::duality::{dual_value, DualProblem};
use vecdual::farkas::{search_certificate, FarkasQuery};
use vecdual::instance::{self, InstanceFile};
use vecdual::num::{parse_q, Vector};
use vecdual::order::region_csv;
use vecdual::order::Orientation;
use vecdual::suites::{run_suite, SuiteConfig};
use vecdual::{Error, GenSet, LinOp, SearchSpace};

#[derive(Parser)]
#[command(
    name = "vecdual",
    version,
    about = "Cone-ordered sets, vector conjugates and duality checks"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// Float tolerance for cone tests; exact rational arithmetic when absent.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Half-width of the operator grids.
    #[arg(long = "box", global = true)]
    bound: Option<String>,
    /// Step of the operator grids.
    #[arg(long, global = true)]
    step: Option<String>,
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// Label query points against wsup (or winf) of a point set, as CSV.
    Wsup {
        input: PathBuf,
        queries: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Generators of F*(L) for an instance's F.
    Conjugate {
        instance: PathBuf,
        #[arg(long = "L", default_value = "zero", allow_hyphen_values = true)]
        l: String,
        #[command(flatten)]
        common: Common,
    },
    /// Search for a certificate of index 1, 2 or 3 at (L, y).
    Farkas {
        instance: PathBuf,
        #[arg(long, short = 'i', default_value_t = 1)]
        index: u8,
        #[arg(long = "L", default_value = "zero", allow_hyphen_values = true)]
        l: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[command(flatten)]
        common: Common,
    },
    /// Dual value of VD1, VD2 or VD3 at the perturbation L.
    Dual {
        instance: PathBuf,
        which: String,
        #[arg(long = "L", default_value = "zero", allow_hyphen_values = true)]
        l: String,
        #[command(flatten)]
        common: Common,
    },
    /// Run a property suite.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        trials: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
}

enum Failure {
    Input(Error),
    Property(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Violation(msg) => Failure::Property(msg),
            other => Failure::Input(other),
        }
    }
}

fn with_tol(mut v: Value, tol: Option<f64>) -> Value {
    let Some(t) = tol else { return v };
    for key in ["K", "S"] {
        if let Some(c) = v.get_mut(key) {
            if c.is_string() {
                *c = serde_json::json!({"orthant": true});
            }
            if let Some(o) = c.as_object_mut() {
                o.insert("tol".into(), t.into());
            }
        }
    }
    v
}

fn load(path: &Path, common: &Common) -> Result<InstanceFile, Failure> {
    let v = instance::read_json(path)?;
    let mut file = instance::parse_instance(&with_tol(v, common.tol))?;
    if let Some(b) = &common.bound {
        let b = parse_q(b)?;
        file.search.t_bound = b;
        file.search.l_bound = b;
    }
    if let Some(s) = &common.step {
        let s = parse_q(s)?;
        file.search.t_step = s;
        file.search.l_step = s;
    }
    Ok(file)
}

fn parse_json_arg(s: &str) -> Result<Value, Failure> {
    serde_json::from_str(s)
        .or_else(|_| serde_json::from_str(&format!("\"{s}\"")))
        .map_err(|e| Failure::Input(Error::Malformed(format!("cannot read {s:?}: {e}"))))
}

fn parse_l(s: &str, rows: usize, cols: usize) -> Result<LinOp, Failure> {
    if s == "zero" {
        return Ok(LinOp::zeros(rows, cols));
    }
    Ok(LinOp::from_json(&parse_json_arg(s)?, rows, cols)?)
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, Failure> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Failure::Input(Error::Unsupported(format!("thread pool: {e}"))))
}

fn cmd_wsup(input: &Path, queries: &Path, common: &Common) -> Result<(), Failure> {
    let set_doc = instance::read_json(input)?;
    instance::check_format(&set_doc)?;
    let pts_v = set_doc
        .get("points")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Malformed("set file needs a points list".into()))?;
    let pts: Vec<Vector> = pts_v.iter().map(Vector::from_json).collect::<Result<_, _>>()?;
    let m = pts.first().map_or(0, Vector::dim);
    let mut cone_v = set_doc.get("K").cloned().unwrap_or_else(|| "orthant".into());
    if let Some(t) = common.tol {
        if cone_v.is_string() {
            cone_v = serde_json::json!({"orthant": true});
        }
        if let Some(o) = cone_v.as_object_mut() {
            o.insert("tol".into(), t.into());
        }
    }
    let k = Arc::new(instance::parse_cone(&cone_v, m)?);
    let orientation = match set_doc.get("orientation").and_then(Value::as_str) {
        Some("inf") => Orientation::Inf,
        _ => Orientation::Sup,
    };
    let set = GenSet::from_points(&k, orientation, pts)?;
    let q_doc = instance::read_json(queries)?;
    instance::check_format(&q_doc)?;
    let ys: Vec<Vector> = q_doc
        .get("points")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Malformed("query file needs a points list".into()))?
        .iter()
        .map(Vector::from_json)
        .collect::<Result<_, _>>()?;
    print!("{}", region_csv(&set, &ys)?);
    Ok(())
}

fn cmd_conjugate(path: &Path, l: &str, common: &Common) -> Result<(), Failure> {
    let file = load(path, common)?;
    let p = &file.problem;
    let l = parse_l(l, p.m(), p.n())?;
    let c = conjugate(p.f(), &l, p.k())?;
    print_json(&serde_json::json!({
        "format": 1,
        "L": l.to_json(),
        "generators": c.generator_points().iter().map(Vector::to_json).collect::<Vec<_>>(),
        "generators_exact": c.generator_points().iter().map(Vector::to_exact_json).collect::<Vec<_>>(),
    }));
    Ok(())
}

fn cmd_farkas(path: &Path, index: u8, l: &str, y: &str, common: &Common) -> Result<(), Failure> {
    let file = load(path, common)?;
    let p = &file.problem;
    let l = parse_l(l, p.m(), p.n())?;
    let y = Vector::from_json(&parse_json_arg(y)?)?;
    let q = FarkasQuery::new(index, l, y)?;
    let space = SearchSpace::from_config(p, &file.search)?;
    let out = pool(common.jobs)?.install(|| search_certificate(p, &q, &space))?;
    let mut v = serde_json::json!({"format": 1, "query": q.to_json(), "examined": out.examined});
    match out.certificate {
        Some(c) => {
            v["status"] = "FOUND".into();
            v["certificate"] = c.to_json();
        }
        None => {
            v["status"] = "NOT_FOUND".into();
            v["truncated"] = out.truncated.into();
        }
    }
    print_json(&v);
    Ok(())
}

fn cmd_dual(path: &Path, which: &str, l: &str, common: &Common) -> Result<(), Failure> {
    let file = load(path, common)?;
    let p = &file.problem;
    let which = DualProblem::parse(which)?;
    let l = parse_l(l, p.m(), p.n())?;
    let space = SearchSpace::from_config(p, &file.search)?;
    let d = pool(common.jobs)?.install(|| dual_value(p, which, &l, &space))?;
    print_json(&d.to_json());
    Ok(())
}

fn cmd_verify(suite: &str, seed: u64, trials: Option<usize>, common: &Common) -> Result<(), Failure> {
    let cfg = SuiteConfig {
        seed,
        trials,
        jobs: common.jobs,
    };
    let report = run_suite(suite, &cfg)?;
    print!("{}", report.to_json_string());
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Property(format!(
            "suite {suite}: {} of {} checks failed",
            report.failed, report.checks
        )))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Cmd::Wsup { input, queries, common } => cmd_wsup(input, queries, common),
        Cmd::Conjugate { instance, l, common } => cmd_conjugate(instance, l, common),
        Cmd::Farkas {
            instance,
            index,
            l,
            y,
            common,
        } => cmd_farkas(instance, *index, l, y, common),
        Cmd::Dual {
            instance,
            which,
            l,
            common,
        } => cmd_dual(instance, which, l, common),
        Cmd::Verify {
            suite,
            seed,
            trials,
            common,
        } => cmd_verify(suite, *seed, *trials, common),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Property(msg)) => {
            eprintln!("property violated: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
