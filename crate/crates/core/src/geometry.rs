//! Downward-closed convex polygons in the nonnegative rate quadrant.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::sig9;

const EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatePair {
    pub r1: f64,
    pub r2: f64,
}

impl RatePair {
    pub const ORIGIN: RatePair = RatePair { r1: 0.0, r2: 0.0 };

    pub fn new(r1: f64, r2: f64) -> Self {
        RatePair { r1, r2 }
    }

    pub fn swapped(self) -> Self {
        RatePair::new(self.r2, self.r1)
    }
}

fn cross(o: RatePair, a: RatePair, b: RatePair) -> f64 {
    (a.r1 - o.r1) * (b.r2 - o.r2) - (a.r2 - o.r2) * (b.r1 - o.r1)
}

/// A convex rate region, stored as its vertices in counterclockwise order
/// starting at the origin. A region that is a single point is `[(0,0)]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RateRegion {
    vertices: Vec<RatePair>,
}

impl RateRegion {
    /// The region `{(0,0)}`.
    pub fn degenerate() -> Self {
        RateRegion {
            vertices: vec![RatePair::ORIGIN],
        }
    }

    pub fn vertices(&self) -> &[RatePair] {
        &self.vertices
    }

    /// Largest `r1 + r2` in the region.
    pub fn sum_rate(&self) -> f64 {
        max_weighted_sum(self, 1.0, 1.0)
    }

    /// Mirror image under `(r1, r2) ↦ (r2, r1)`.
    pub fn swapped(&self) -> RateRegion {
        hull_sorted(self.vertices.iter().map(|v| v.swapped()).collect())
    }

    /// Writes the vertex list as CSV with header `r1,r2`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "r1,r2")?;
        for v in &self.vertices {
            writeln!(w, "{},{}", sig9(v.r1), sig9(v.r2))?;
        }
        Ok(())
    }
}

fn check_point(p: &RatePair) -> Result<()> {
    if p.r1.is_finite() && p.r2.is_finite() && p.r1 >= 0.0 && p.r2 >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("rate pair ({}, {}) is not finite and nonnegative", p.r1, p.r2)))
    }
}

/// Monotone chain over points that already include the origin; the result
/// starts at the origin because it is the lexicographic minimum.
fn hull_sorted(mut pts: Vec<RatePair>) -> RateRegion {
    pts.push(RatePair::ORIGIN);
    pts.sort_by(|a, b| a.r1.total_cmp(&b.r1).then(a.r2.total_cmp(&b.r2)));
    pts.dedup_by(|a, b| (a.r1 - b.r1).abs() <= EPS && (a.r2 - b.r2).abs() <= EPS);
    if pts.len() == 1 {
        return RateRegion::degenerate();
    }
    let mut hull: Vec<RatePair> = Vec::with_capacity(pts.len() + 1);
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= EPS {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= EPS {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    RateRegion { vertices: hull }
}

/// Downward-closed convex hull of `points`, their axis projections and the origin.
pub fn hull_of_points(points: &[RatePair]) -> Result<RateRegion> {
    if points.is_empty() {
        return Err(Error::domain("hull of an empty point set"));
    }
    let mut pts = Vec::with_capacity(3 * points.len());
    for p in points {
        check_point(p)?;
        pts.push(*p);
        pts.push(RatePair::new(p.r1, 0.0));
        pts.push(RatePair::new(0.0, p.r2));
    }
    Ok(hull_sorted(pts))
}

/// Pareto corners of `{R ≥ 0 : R1 ≤ a, R2 ≤ b, R1 + R2 ≤ s}` for nonnegative
/// caps. An inactive sum cap yields the single corner `(a, b)` exactly.
pub fn pentagon_corners(a: f64, b: f64, s: f64) -> Vec<RatePair> {
    if a + b <= s {
        return vec![RatePair::new(a, b)];
    }
    vec![
        RatePair::new(a.min(s), b.min(s - a).max(0.0)),
        RatePair::new(a.min(s - b).max(0.0), b.min(s)),
    ]
}

/// `{R ≥ 0 : R1 ≤ cap1, R2 ≤ cap2, R1 + R2 ≤ cap_sum}`.
pub fn region_from_caps(cap1: f64, cap2: f64, cap_sum: f64) -> RateRegion {
    let (a, b, s) = (cap1.max(0.0), cap2.max(0.0), cap_sum.max(0.0));
    let corners = pentagon_corners(a, b, s);
    let mut pts = corners.clone();
    pts.push(RatePair::new(corners[0].r1, 0.0));
    pts.push(RatePair::new(0.0, corners[corners.len() - 1].r2));
    hull_sorted(pts)
}

/// Convex hull of the union of `regions`.
pub fn union_hull(regions: &[RateRegion]) -> Result<RateRegion> {
    if regions.is_empty() {
        return Err(Error::domain("hull of an empty region list"));
    }
    let pts: Vec<RatePair> = regions.iter().flat_map(|r| r.vertices.iter().copied()).collect();
    Ok(hull_sorted(pts))
}

/// `max w1·r1 + w2·r2` over the region.
pub fn max_weighted_sum(region: &RateRegion, w1: f64, w2: f64) -> f64 {
    region
        .vertices
        .iter()
        .map(|v| w1 * v.r1 + w2 * v.r2)
        .fold(f64::NEG_INFINITY, f64::max)
}

fn segment_distance(a: RatePair, b: RatePair, p: RatePair) -> f64 {
    let (dx, dy) = (b.r1 - a.r1, b.r2 - a.r2);
    let len2 = dx * dx + dy * dy;
    let t = (((p.r1 - a.r1) * dx + (p.r2 - a.r2) * dy) / len2).clamp(0.0, 1.0);
    let (ex, ey) = (a.r1 + t * dx - p.r1, a.r2 + t * dy - p.r2);
    (ex * ex + ey * ey).sqrt()
}

/// Whether `p` lies inside `region` or within `tol` of each of its
/// supporting half-planes.
pub fn contains(region: &RateRegion, p: RatePair, tol: f64) -> bool {
    let v = &region.vertices;
    match v.len() {
        1 => (p.r1 - v[0].r1).abs() <= tol && (p.r2 - v[0].r2).abs() <= tol,
        2 => segment_distance(v[0], v[1], p) <= tol,
        n => (0..n).all(|i| {
            let (a, b) = (v[i], v[(i + 1) % n]);
            let len = ((b.r1 - a.r1).powi(2) + (b.r2 - a.r2).powi(2)).sqrt();
            cross(a, b, p) >= -tol * len
        }),
    }
}

/// Whether every vertex of `outer`, moved down by `shift` in both coordinates
/// and clamped at zero, lies in `inner` (tolerance 1e-9).
pub fn uniform_shift_inside(outer: &RateRegion, inner: &RateRegion, shift: f64) -> bool {
    outer.vertices.iter().all(|v| {
        let p = RatePair::new((v.r1 - shift).max(0.0), (v.r2 - shift).max(0.0));
        contains(inner, p, 1e-9)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(f64, f64)]) -> Vec<RatePair> {
        v.iter().map(|&(a, b)| RatePair::new(a, b)).collect()
    }

    #[test]
    fn point_closure_is_a_box() {
        let r = hull_of_points(&pts(&[(1.0, 1.0)])).unwrap();
        assert_eq!(r.vertices(), pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]));
    }

    #[test]
    fn collinear_point_is_dropped() {
        let r = hull_of_points(&pts(&[(2.0, 0.0), (0.0, 2.0), (1.0, 1.0)])).unwrap();
        assert_eq!(r.vertices(), pts(&[(0.0, 0.0), (2.0, 0.0), (0.0, 2.0)]));
    }

    #[test]
    fn empty_and_invalid_inputs() {
        assert!(hull_of_points(&[]).is_err());
        assert!(union_hull(&[]).is_err());
        assert!(hull_of_points(&pts(&[(f64::NAN, 1.0)])).is_err());
        assert!(hull_of_points(&pts(&[(-1.0, 1.0)])).is_err());
    }

    #[test]
    fn caps() {
        assert_eq!(region_from_caps(1.0, 1.0, 2.0), hull_of_points(&pts(&[(1.0, 1.0)])).unwrap());
        assert_eq!(
            region_from_caps(1.0, 1.0, 1.5).vertices(),
            pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 0.5), (0.5, 1.0), (0.0, 1.0)])
        );
        assert_eq!(region_from_caps(1.0, 1.0, 0.8).vertices(), pts(&[(0.0, 0.0), (0.8, 0.0), (0.0, 0.8)]));
        assert_eq!(region_from_caps(0.0, 0.0, 0.0), RateRegion::degenerate());
        assert_eq!(region_from_caps(2.0, 0.0, 5.0).vertices(), pts(&[(0.0, 0.0), (2.0, 0.0)]));
    }

    #[test]
    fn union_of_rectangles_contains_chord() {
        let a = region_from_caps(2.0, 0.5, 9.0);
        let b = region_from_caps(0.5, 2.0, 9.0);
        let u = union_hull(&[a.clone(), a]).unwrap();
        assert_eq!(u, region_from_caps(2.0, 0.5, 9.0));
        let u = union_hull(&[region_from_caps(2.0, 0.5, 9.0), b]).unwrap();
        assert!(contains(&u, RatePair::new(1.25, 1.25), 0.0));
        assert!(!contains(&u, RatePair::new(1.3, 1.25), 1e-9));
    }

    #[test]
    fn sums_and_containment() {
        let p = region_from_caps(1.0, 1.0, 1.5);
        assert_eq!(max_weighted_sum(&p, 1.0, 1.0), 1.5);
        let sq = region_from_caps(1.0, 1.0, 2.0);
        assert_eq!(max_weighted_sum(&sq, 1.0, 0.0), 1.0);
        assert!(contains(&sq, RatePair::new(1.0, 1.0), 0.0));
        assert!(!contains(&sq, RatePair::new(1.0 + 1e-6, 1.0), 1e-9));
        let seg = region_from_caps(2.0, 0.0, 5.0);
        assert!(contains(&seg, RatePair::new(1.0, 0.0), 0.0));
        assert!(!contains(&seg, RatePair::new(1.0, 0.1), 1e-9));
        assert!(contains(&RateRegion::degenerate(), RatePair::ORIGIN, 0.0));
    }

    #[test]
    fn shifts() {
        let sq = |a| region_from_caps(a, a, 2.0 * a);
        assert!(uniform_shift_inside(&sq(1.0), &sq(0.5), 0.5));
        assert!(!uniform_shift_inside(&sq(1.0), &sq(0.4), 0.5));
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        region_from_caps(1.0, 1.0, 1.5).write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "r1,r2\n0,0\n1,0\n1,0.5\n0.5,1\n0,1\n");
    }
}
