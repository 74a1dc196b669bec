//! CSV tables for plotting.

use std::fmt::Write;

use num_traits::One;

use super::{GenSet, Kind, Orientation};
use crate::error::{Error, Result};
use crate::num::{q_to_f64, Vector, Q};

/// Header `y1,...,ym,label` (`x,y,label` in the plane), one row per point.
pub fn region_csv(set: &GenSet, points: &[Vector]) -> Result<String> {
    let m = set.cone().dim();
    let mut out = String::new();
    if m == 2 {
        out.push_str("x,y,label\n");
    } else {
        let cols: Vec<String> = (1..=m).map(|i| format!("y{i}")).collect();
        let _ = writeln!(out, "{},label", cols.join(","));
    }
    for p in points {
        let label = set.classify(p)?;
        let coords: Vec<String> = p.to_f64().iter().map(|c| c.to_string()).collect();
        let _ = writeln!(out, "{},{}", coords.join(","), label.as_str());
    }
    Ok(out)
}

/// Vertices of the planar frontier, with the two unbounded ends cut at
/// distance `reach` (in extreme-ray coordinates) from the extreme generators.
/// Ordered left to right.
pub fn frontier_polyline(set: &GenSet, reach: &Q) -> Result<Vec<Vector>> {
    let k = set.cone();
    if k.dim() != 2 {
        return Err(Error::Unsupported("frontier polylines are planar only".into()));
    }
    let f = match &set.kind {
        Kind::Finite(f) => f,
        _ => return Err(Error::Unsupported("infinite symbols have no frontier".into())),
    };
    let st = f
        .stair
        .as_ref()
        .ok_or_else(|| Error::Unsupported("polylines need exact mode".into()))?;
    let z = st.vertices();
    let mut pts: Vec<(Q, Q)> = Vec::with_capacity(2 * z.len() + 2);
    let r = (*reach).max(Q::one());
    match f.orientation {
        Orientation::Sup => {
            pts.push((z[0].0 - r, z[0].1));
            for (i, g) in z.iter().enumerate() {
                pts.push(*g);
                if let Some(next) = z.get(i + 1) {
                    pts.push((g.0, next.1));
                }
            }
            let last = z[z.len() - 1];
            pts.push((last.0, last.1 - r));
        }
        Orientation::Inf => {
            pts.push((z[0].0, z[0].1 + r));
            for (i, g) in z.iter().enumerate() {
                pts.push(*g);
                if let Some(next) = z.get(i + 1) {
                    pts.push((next.0, g.1));
                }
            }
            let last = z[z.len() - 1];
            pts.push((last.0 + r, last.1));
        }
    }
    let mut line: Vec<Vector> = pts
        .into_iter()
        .map(|(a, b)| k.from_ray_coords(&Vector(vec![a, b])))
        .collect();
    if line[0][0] > line[line.len() - 1][0] {
        line.reverse();
    }
    Ok(line)
}

pub fn polyline_csv(points: &[Vector]) -> String {
    let mut out = String::from("x,y\n");
    for p in points {
        let _ = writeln!(out, "{},{}", q_to_f64(&p[0]), q_to_f64(&p[1]));
    }
    out
}
