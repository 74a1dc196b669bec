//! JSON instance files.
//!
//! ```text
//! {"format": 1, "name": "...", "dims": {"n":1,"m":1,"p":1},
//!  "K": "orthant" | {"generators": [...]} | {"normals": [...]}
//!       | {"normals": [...], "generators": [...], "interior_witness": [...]},
//!  "S": same,
//!  "domain": [x...], "F": [y...], "G": [z...], "C": [indices] | "all",
//!  "hints": {"T": [...], "Lp": [...], "Lpp": [...], "L": [...]},
//!  "flags": {"is_linear_F": b, "is_linear_G": b, "is_convex_C": b,
//!            "slater_point": x, "hints_complete": b},
//!  "search": {"t_box": q, "t_step": q, "l_box": q, "l_step": q}}
//! ```

use std::path::Path;
use std::sync::Arc;

use serde_json::Value;

use crate::cone::{Cone, Tolerance};
use crate::error::{check_dim, Error, Result};
use crate::linop::LinOp;
use crate::num::{q_from_json, Vector};
use crate::problem::{Flags, Hints, ProblemInstance};
use crate::search::SearchConfig;

pub const FORMAT: u64 = 1;

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| Error::Malformed(format!("missing field {key:?}")))
}

fn dim_field(v: &Value, key: &str) -> Result<usize> {
    field(v, key)?
        .as_u64()
        .map(|d| d as usize)
        .ok_or_else(|| Error::Malformed(format!("{key:?} must be a nonnegative integer")))
}

fn vectors(v: &Value, key: &str, dim: usize) -> Result<Vec<Vector>> {
    let arr = field(v, key)?
        .as_array()
        .ok_or_else(|| Error::Malformed(format!("{key:?} must be an array")))?;
    arr.iter()
        .map(|x| {
            let p = Vector::from_json(x)?;
            check_dim("vector literal", dim, p.dim())?;
            Ok(p)
        })
        .collect()
}

pub fn check_format(v: &Value) -> Result<()> {
    match v.get("format") {
        None => Ok(()),
        Some(f) if f.as_u64() == Some(FORMAT) => Ok(()),
        Some(f) => Err(Error::Malformed(format!("unsupported format {f}"))),
    }
}

/// `"orthant"`, `{"generators": [...]}`, `{"normals": [...]}`, or both lists with
/// an `"interior_witness"`; each may carry a `"tol"`.
pub fn parse_cone(v: &Value, dim: usize) -> Result<Cone> {
    let cone = match v {
        Value::String(s) if s == "orthant" => Cone::orthant(dim),
        Value::Object(o) => {
            let witness = match o.get("interior_witness") {
                Some(w) => Some(Vector::from_json(w)?),
                None => None,
            };
            let cone =
                if let (true, true, Some(w)) = (o.contains_key("generators"), o.contains_key("normals"), &witness) {
                    Cone::new(vectors(v, "normals", dim)?, vectors(v, "generators", dim)?, w.clone())?
                } else if o.contains_key("generators") {
                    Cone::from_generators(vectors(v, "generators", dim)?)?
                } else if o.contains_key("normals") {
                    Cone::from_normals(vectors(v, "normals", dim)?)?
                } else if o.get("orthant").is_some() {
                    Cone::orthant(dim)
                } else {
                    return Err(Error::Malformed("cone needs generators or normals".into()));
                };
            if let Some(w) = &witness {
                check_dim("interior witness", dim, w.dim())?;
                if !cone.contains_interior(w) {
                    return Err(Error::InvalidCone(format!("interior witness {w} is not interior")));
                }
            }
            match o.get("tol").and_then(Value::as_f64) {
                Some(t) => cone.with_tolerance(Tolerance::from_f64(t)),
                None => cone,
            }
        }
        other => return Err(Error::Malformed(format!("cannot read a cone from {other}"))),
    };
    check_dim("cone literal", dim, cone.dim())?;
    Ok(cone)
}

fn operators(v: Option<&Value>, rows: usize, cols: usize) -> Result<Vec<LinOp>> {
    match v {
        None => Ok(Vec::new()),
        Some(Value::Array(xs)) => xs.iter().map(|x| LinOp::from_json(x, rows, cols)).collect(),
        Some(other) => Err(Error::Malformed(format!("expected a list of matrices, found {other}"))),
    }
}

fn flag(v: &Value, key: &str) -> bool {
    v.get(key).and_then(Value::as_bool).unwrap_or(false)
}

pub fn parse_search(v: &Value) -> Result<SearchConfig> {
    let mut cfg = SearchConfig::default();
    if let Some(x) = v.get("t_box") {
        cfg.t_bound = q_from_json(x)?;
    }
    if let Some(x) = v.get("t_step") {
        cfg.t_step = q_from_json(x)?;
    }
    if let Some(x) = v.get("l_box") {
        cfg.l_bound = q_from_json(x)?;
    }
    if let Some(x) = v.get("l_step") {
        cfg.l_step = q_from_json(x)?;
    }
    if let Some(x) = v.get("grid").and_then(Value::as_bool) {
        cfg.use_grid = x;
    }
    if let Some(x) = v.get("max_candidates").and_then(Value::as_u64) {
        cfg.max_candidates = x as usize;
    }
    Ok(cfg)
}

/// A parsed instance with the search settings it ships (defaults if absent).
#[derive(Clone, Debug)]
pub struct InstanceFile {
    pub problem: ProblemInstance,
    pub search: SearchConfig,
}

pub fn parse_instance(v: &Value) -> Result<InstanceFile> {
    check_format(v)?;
    let dims = field(v, "dims")?;
    let (n, m, p) = (dim_field(dims, "n")?, dim_field(dims, "m")?, dim_field(dims, "p")?);
    let k = Arc::new(parse_cone(field(v, "K")?, m)?);
    let s = Arc::new(parse_cone(field(v, "S")?, p)?);
    let domain = vectors(v, "domain", n)?;
    let f = vectors(v, "F", m)?;
    let g = vectors(v, "G", p)?;
    let c = match field(v, "C")? {
        Value::String(s) if s == "all" => (0..domain.len()).collect(),
        Value::Array(xs) => xs
            .iter()
            .map(|x| {
                x.as_u64()
                    .map(|i| i as usize)
                    .ok_or_else(|| Error::Malformed("C holds domain indices".into()))
            })
            .collect::<Result<Vec<usize>>>()?,
        other => return Err(Error::Malformed(format!("cannot read C from {other}"))),
    };
    let empty = Value::Null;
    let h = v.get("hints").unwrap_or(&empty);
    let hints = Hints {
        t: operators(h.get("T"), m, p)?,
        lp: operators(h.get("Lp"), m, n)?,
        lpp: operators(h.get("Lpp"), m, n)?,
        l: operators(h.get("L"), m, n)?,
    };
    let fl = v.get("flags").unwrap_or(&empty);
    let flags = Flags {
        is_linear_f: flag(fl, "is_linear_F"),
        is_linear_g: flag(fl, "is_linear_G"),
        is_convex_c: flag(fl, "is_convex_C"),
        slater_point: match fl.get("slater_point") {
            Some(Value::Null) | None => None,
            Some(x) => Some(Vector::from_json(x)?),
        },
        hints_complete: flag(fl, "hints_complete"),
    };
    let name = v.get("name").and_then(Value::as_str).unwrap_or("instance").to_string();
    let problem = ProblemInstance::new(name, k, s, domain, f, g, c, hints, flags)?;
    let search = match v.get("search") {
        Some(x) => parse_search(x)?,
        None => SearchConfig::default(),
    };
    Ok(InstanceFile { problem, search })
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Malformed(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))
}

pub fn load_instance(path: &Path) -> Result<InstanceFile> {
    parse_instance(&read_json(path)?)
}

/// Directory of the instances shipped with the crate.
pub fn shipped_dir() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("instances")
}

pub fn load_shipped(name: &str) -> Result<InstanceFile> {
    load_instance(&shipped_dir().join(format!("{name}.json")))
}
