//! Planar fast path: in extreme-ray coordinates `K` is the quadrant and an
//! irredundant generator list is a staircase sorted by its first coordinate.

use super::{Orientation, RegionLabel};
use crate::cone::{Cone, Tolerance};
use crate::num::{Vector, Q};

#[derive(Debug)]
pub(super) struct Staircase {
    // (z1, z2), z1 ascending and z2 strictly descending
    z: Vec<(Q, Q)>,
}

fn coords(k: &Cone, y: &Vector) -> Option<(Q, Q)> {
    let z = k.to_ray_coords(y)?;
    Some((z[0], z[1]))
}

impl Staircase {
    pub(super) fn build(k: &Cone, gens: &[Vector]) -> Option<Staircase> {
        if k.dim() != 2 || k.tolerance() != Tolerance::Exact {
            return None;
        }
        let mut z: Vec<(Q, Q)> = gens.iter().map(|g| coords(k, g)).collect::<Option<_>>()?;
        z.sort();
        debug_assert!(z.windows(2).all(|w| w[0].1 > w[1].1), "generators form an antichain");
        Some(Staircase { z })
    }

    pub(super) fn classify(&self, orientation: Orientation, y: &Vector) -> RegionLabel {
        let (y1, y2) = (y[0], y[1]);
        let z = &self.z;
        match orientation {
            Orientation::Sup => {
                // some generator strictly above in both coordinates
                let i = z.partition_point(|g| g.0 <= y1);
                if i < z.len() && z[i].1 > y2 {
                    return RegionLabel::Lower;
                }
                let j = z.partition_point(|g| g.0 < y1);
                if j < z.len() && z[j].1 >= y2 {
                    RegionLabel::Frontier
                } else {
                    RegionLabel::Upper
                }
            }
            Orientation::Inf => {
                let i = z.partition_point(|g| g.0 < y1);
                if i > 0 && z[i - 1].1 < y2 {
                    return RegionLabel::Upper;
                }
                let j = z.partition_point(|g| g.0 <= y1);
                if j > 0 && z[j - 1].1 <= y2 {
                    RegionLabel::Frontier
                } else {
                    RegionLabel::Lower
                }
            }
        }
    }

    pub(super) fn vertices(&self) -> &[(Q, Q)] {
        &self.z
    }
}

/// Irredundant subset by one sort and sweep; `None` if `K` has no ray basis.
pub(super) fn extremal_2d(k: &Cone, orientation: Orientation, pts: &[Vector]) -> Option<Vec<Vector>> {
    let mut tagged: Vec<((Q, Q), usize)> = pts
        .iter()
        .enumerate()
        .map(|(i, p)| coords(k, p).map(|z| (z, i)))
        .collect::<Option<_>>()?;
    let mut keep = Vec::new();
    match orientation {
        Orientation::Sup => {
            tagged.sort_by(|a, b| b.0.cmp(&a.0));
            let mut best: Option<Q> = None;
            for ((_, z2), i) in tagged {
                if best.is_none_or(|b| z2 > b) {
                    best = Some(z2);
                    keep.push(i);
                }
            }
        }
        Orientation::Inf => {
            tagged.sort_by(|a, b| a.0.cmp(&b.0));
            let mut best: Option<Q> = None;
            for ((_, z2), i) in tagged {
                if best.is_none_or(|b| z2 < b) {
                    best = Some(z2);
                    keep.push(i);
                }
            }
        }
    }
    keep.sort_unstable();
    Some(keep.into_iter().map(|i| pts[i].clone()).collect())
}

/// Componentwise-minimal points (orthant order), any dimension.
pub(super) fn minimal_z(mut pts: Vec<Vector>) -> Vec<Vector> {
    pts.sort();
    pts.dedup();
    if pts.len() <= 1 {
        return pts;
    }
    if pts[0].dim() == 2 {
        // sorted by (z1, z2): keep a point iff its z2 beats every earlier one
        let mut out = Vec::new();
        let mut best: Option<Q> = None;
        for p in pts {
            if best.is_none_or(|b| p[1] < b) {
                best = Some(p[1]);
                out.push(p);
            }
        }
        return out;
    }
    let le = |a: &Vector, b: &Vector| a.iter().zip(b.iter()).all(|(x, y)| x <= y);
    pts.iter()
        .filter(|p| !pts.iter().any(|o| o != *p && le(o, p)))
        .cloned()
        .collect()
}
