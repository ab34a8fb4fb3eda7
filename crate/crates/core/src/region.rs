//! Exact 2-D rate-region primitives: pentagons, convex hulls, unions,
//! containment, and the maximum common rate.
//!
//! All regions live in the first quadrant, contain the origin (time sharing
//! with silence is always allowed), and are represented either as a
//! [`PentagonRegion`] (two individual caps and a sum cap) or as a convex
//! [`RatePolygon`] with counterclockwise vertices.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Collinearity tolerance for hull construction, in cross-product units.
pub const HULL_TOL: f64 = 1e-12;

/// An achievable rate pair in bps/Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePair {
    pub r1: f64,
    pub r2: f64,
}

impl RatePair {
    pub const ORIGIN: RatePair = RatePair { r1: 0.0, r2: 0.0 };

    pub fn new(r1: f64, r2: f64) -> Self {
        Self { r1, r2 }
    }

    /// Component-wise `self >= other`.
    pub fn dominates(&self, other: &RatePair) -> bool {
        self.r1 >= other.r1 && self.r2 >= other.r2
    }
}

/// Two-user MAC region described by its two individual caps and a sum cap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PentagonRegion {
    r1_cap: f64,
    r2_cap: f64,
    sum_cap: f64,
}

impl PentagonRegion {
    /// Builds a pentagon, validating `0 <= r1, 0 <= r2,
    /// max(r1, r2) <= sum <= r1 + r2`. A relative slack of `1e-9` absorbs
    /// round-off from the rate formulas; values inside the slack are clamped
    /// back into the exact range.
    pub fn new(r1_cap: f64, r2_cap: f64, sum_cap: f64) -> Result<Self> {
        if !(r1_cap.is_finite() && r2_cap.is_finite() && sum_cap.is_finite()) {
            return Err(Error::Validation("pentagon caps must be finite"));
        }
        if r1_cap < 0.0 || r2_cap < 0.0 {
            return Err(Error::Validation("pentagon caps must be nonnegative"));
        }
        let lo = r1_cap.max(r2_cap);
        let hi = r1_cap + r2_cap;
        let slack = 1e-9 * (1.0 + hi);
        if sum_cap < lo - slack || sum_cap > hi + slack {
            return Err(Error::Validation(
                "sum cap must lie in [max(r1, r2), r1 + r2]",
            ));
        }
        Ok(Self {
            r1_cap,
            r2_cap,
            sum_cap: sum_cap.clamp(lo, hi),
        })
    }

    pub fn r1_cap(&self) -> f64 {
        self.r1_cap
    }

    pub fn r2_cap(&self) -> f64 {
        self.r2_cap
    }

    pub fn sum_cap(&self) -> f64 {
        self.sum_cap
    }

    /// Largest `c` with `(c, c)` in the region: `min(r1, r2, sum / 2)`.
    pub fn max_common_rate(&self) -> f64 {
        self.r1_cap.min(self.r2_cap).min(0.5 * self.sum_cap)
    }

    /// True iff the pair satisfies all three cap inequalities within `tol`.
    pub fn contains_pair(&self, p: &RatePair, tol: f64) -> bool {
        p.r1 >= -tol
            && p.r2 >= -tol
            && p.r1 <= self.r1_cap + tol
            && p.r2 <= self.r2_cap + tol
            && p.r1 + p.r2 <= self.sum_cap + tol
    }
}

/// Convex rate region as an ordered vertex list, counterclockwise,
/// starting at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct RatePolygon {
    vertices: Vec<RatePair>,
}

impl RatePolygon {
    /// The degenerate region `{(0, 0)}`.
    pub fn origin_only() -> Self {
        Self {
            vertices: vec![RatePair::ORIGIN],
        }
    }

    pub fn vertices(&self) -> &[RatePair] {
        &self.vertices
    }

    pub fn is_degenerate(&self) -> bool {
        self.vertices.len() < 3
    }

    /// Membership test with boundary points counting as contained:
    /// the query must lie on or left of every directed edge, within `tol`
    /// of perpendicular distance.
    pub fn contains_pair(&self, p: &RatePair, tol: f64) -> bool {
        match self.vertices.len() {
            0 => false,
            1 => {
                let v = self.vertices[0];
                dist(p, &v) <= tol
            }
            2 => segment_distance(p, &self.vertices[0], &self.vertices[1]) <= tol,
            n => {
                for i in 0..n {
                    let a = self.vertices[i];
                    let b = self.vertices[(i + 1) % n];
                    let len = dist(&a, &b).max(1e-300);
                    if cross(&a, &b, p) < -tol * len {
                        return false;
                    }
                }
                true
            }
        }
    }

    /// Largest `c` with `(c, c)` in the region.
    pub fn max_common_rate(&self) -> f64 {
        match self.vertices.len() {
            0 | 1 => 0.0,
            2 => {
                // Segment from the origin: the diagonal point survives only
                // on a diagonal segment.
                let v = self.vertices[1].r1.max(self.vertices[0].r1);
                let w = self.vertices[1].r2.max(self.vertices[0].r2);
                if (v - w).abs() <= HULL_TOL * (1.0 + v.abs()) {
                    v.min(w)
                } else {
                    0.0
                }
            }
            n => {
                // Each directed edge (a, b) bounds (c, c) by
                // c * (dx - dy) <= a.r1 * b.r2 - a.r2 * b.r1
                // with dx = b.r1 - a.r1, dy = b.r2 - a.r2.
                let mut best = f64::INFINITY;
                for i in 0..n {
                    let a = self.vertices[i];
                    let b = self.vertices[(i + 1) % n];
                    let coef = (b.r2 - a.r2) - (b.r1 - a.r1);
                    let rhs = a.r1 * b.r2 - a.r2 * b.r1;
                    if coef > HULL_TOL {
                        best = best.min(rhs / coef);
                    } else if coef >= -HULL_TOL && rhs < 0.0 {
                        return 0.0;
                    }
                }
                if best.is_finite() {
                    best.max(0.0)
                } else {
                    0.0
                }
            }
        }
    }
}

fn cross(a: &RatePair, b: &RatePair, c: &RatePair) -> f64 {
    (b.r1 - a.r1) * (c.r2 - a.r2) - (b.r2 - a.r2) * (c.r1 - a.r1)
}

fn dist(a: &RatePair, b: &RatePair) -> f64 {
    libm::hypot(a.r1 - b.r1, a.r2 - b.r2)
}

fn segment_distance(p: &RatePair, a: &RatePair, b: &RatePair) -> f64 {
    let dx = b.r1 - a.r1;
    let dy = b.r2 - a.r2;
    let len2 = dx * dx + dy * dy;
    if len2 <= 1e-300 {
        return dist(p, a);
    }
    let t = (((p.r1 - a.r1) * dx + (p.r2 - a.r2) * dy) / len2).clamp(0.0, 1.0);
    let q = RatePair::new(a.r1 + t * dx, a.r2 + t * dy);
    dist(p, &q)
}

/// Vertices of a pentagon region, counterclockwise from the origin, with
/// degenerate duplicates removed (a non-binding sum cap yields a rectangle;
/// zero caps collapse further).
pub fn pentagon_vertices(p: &PentagonRegion) -> RatePolygon {
    let r1 = p.r1_cap;
    let r2 = p.r2_cap;
    let s = p.sum_cap;
    let candidates = [
        RatePair::ORIGIN,
        RatePair::new(r1, 0.0),
        RatePair::new(r1, s - r1),
        RatePair::new(s - r2, r2),
        RatePair::new(0.0, r2),
    ];
    let mut vertices: Vec<RatePair> = Vec::with_capacity(5);
    for v in candidates {
        if vertices
            .iter()
            .all(|u| dist(u, &v) > HULL_TOL * (1.0 + s.abs()))
        {
            vertices.push(v);
        }
    }
    // The corner list above is already counterclockwise; collinear triples
    // occur when the sum cap is non-binding (rectangle) and are dropped.
    prune_collinear(&mut vertices);
    RatePolygon { vertices }
}

fn prune_collinear(vertices: &mut Vec<RatePair>) {
    if vertices.len() < 3 {
        return;
    }
    let mut out: Vec<RatePair> = Vec::with_capacity(vertices.len());
    let n = vertices.len();
    for i in 0..n {
        let prev = vertices[(i + n - 1) % n];
        let cur = vertices[i];
        let next = vertices[(i + 1) % n];
        if cross(&prev, &cur, &next).abs() > HULL_TOL {
            out.push(cur);
        }
    }
    if out.len() >= 3 {
        // Keep the origin first for a canonical ordering.
        if let Some(pos) = out
            .iter()
            .position(|v| v.r1 == 0.0 && v.r2 == 0.0)
        {
            out.rotate_left(pos);
        }
        *vertices = out;
    }
}

/// 2-D convex hull of the given points (monotone chain), with the origin
/// added if absent. Degenerate inputs yield point or segment polygons.
pub fn convex_hull(points: &[RatePair]) -> Result<RatePolygon> {
    if points.is_empty() {
        return Err(Error::Domain("convex hull of an empty point set"));
    }
    let mut pts: Vec<RatePair> = Vec::with_capacity(points.len() + 1);
    pts.push(RatePair::ORIGIN);
    pts.extend_from_slice(points);
    pts.retain(|p| p.r1.is_finite() && p.r2.is_finite());
    pts.sort_by(|a, b| {
        a.r1.partial_cmp(&b.r1)
            .unwrap()
            .then(a.r2.partial_cmp(&b.r2).unwrap())
    });
    pts.dedup_by(|a, b| dist(a, b) <= HULL_TOL);

    if pts.len() <= 2 {
        return Ok(RatePolygon { vertices: pts });
    }

    let mut lower: Vec<RatePair> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2
            && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], &p) <= HULL_TOL
        {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<RatePair> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2
            && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], &p) <= HULL_TOL
        {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        // All points collinear after pruning.
        lower.sort_by(|a, b| {
            a.r1.partial_cmp(&b.r1)
                .unwrap()
                .then(a.r2.partial_cmp(&b.r2).unwrap())
        });
        return Ok(RatePolygon { vertices: lower });
    }
    let mut vertices = lower;
    if let Some(pos) = vertices
        .iter()
        .position(|v| v.r1.abs() <= HULL_TOL && v.r2.abs() <= HULL_TOL)
    {
        vertices.rotate_left(pos);
    }
    Ok(RatePolygon { vertices })
}

/// True iff every vertex of `inner` lies inside `outer` expanded by `tol`.
pub fn contains(outer: &RatePolygon, inner: &RatePolygon, tol: f64) -> bool {
    inner.vertices.iter().all(|v| outer.contains_pair(v, tol))
}

/// Convex hull of the vertices of all given regions.
pub fn union_hull(regions: &[RatePolygon]) -> Result<RatePolygon> {
    if regions.is_empty() {
        return Err(Error::Domain("union of an empty region list"));
    }
    let pts: Vec<RatePair> = regions
        .iter()
        .flat_map(|r| r.vertices.iter().copied())
        .collect();
    convex_hull(&pts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pentagon_new_validates_caps() {
        assert!(PentagonRegion::new(1.0, 1.0, 2.0).is_ok());
        assert!(PentagonRegion::new(1.0, 1.0, 0.5).is_err());
        assert!(PentagonRegion::new(1.0, 1.0, 2.5).is_err());
        assert!(PentagonRegion::new(-0.1, 1.0, 1.0).is_err());
    }

    #[test]
    fn rectangle_when_sum_cap_not_binding() {
        let p = PentagonRegion::new(1.0, 1.0, 2.0).unwrap();
        let poly = pentagon_vertices(&p);
        assert_eq!(
            poly.vertices(),
            &[
                RatePair::new(0.0, 0.0),
                RatePair::new(1.0, 0.0),
                RatePair::new(1.0, 1.0),
                RatePair::new(0.0, 1.0),
            ]
        );
    }

    #[test]
    fn symmetric_pentagon_vertices() {
        let p = PentagonRegion::new(2.0, 2.0, 3.0).unwrap();
        let poly = pentagon_vertices(&p);
        assert_eq!(
            poly.vertices(),
            &[
                RatePair::new(0.0, 0.0),
                RatePair::new(2.0, 0.0),
                RatePair::new(2.0, 1.0),
                RatePair::new(1.0, 2.0),
                RatePair::new(0.0, 2.0),
            ]
        );
    }

    #[test]
    fn zero_pentagon_is_a_point() {
        let p = PentagonRegion::new(0.0, 0.0, 0.0).unwrap();
        let poly = pentagon_vertices(&p);
        assert_eq!(poly.vertices(), &[RatePair::ORIGIN]);
        assert_eq!(poly.max_common_rate(), 0.0);
    }

    #[test]
    fn collinear_points_give_segment() {
        let pts = [
            RatePair::new(1.0, 0.0),
            RatePair::new(2.0, 0.0),
            RatePair::new(0.5, 0.0),
        ];
        let poly = convex_hull(&pts).unwrap();
        assert_eq!(
            poly.vertices(),
            &[RatePair::new(0.0, 0.0), RatePair::new(2.0, 0.0)]
        );
    }

    #[test]
    fn single_point_hull_is_segment_from_origin() {
        let poly = convex_hull(&[RatePair::new(1.0, 2.0)]).unwrap();
        assert_eq!(
            poly.vertices(),
            &[RatePair::new(0.0, 0.0), RatePair::new(1.0, 2.0)]
        );
        assert!(poly.contains_pair(&RatePair::new(0.5, 1.0), 1e-12));
        assert!(!poly.contains_pair(&RatePair::new(0.5, 0.0), 1e-12));
    }

    #[test]
    fn empty_hull_is_a_domain_error() {
        assert!(matches!(convex_hull(&[]), Err(Error::Domain(_))));
        assert!(matches!(union_hull(&[]), Err(Error::Domain(_))));
    }

    #[test]
    fn contains_is_reflexive_and_scales() {
        let small = pentagon_vertices(&PentagonRegion::new(1.0, 1.0, 1.5).unwrap());
        let big = pentagon_vertices(&PentagonRegion::new(2.0, 2.0, 3.0).unwrap());
        assert!(contains(&small, &small, 0.0));
        assert!(contains(&big, &small, 0.0));
        assert!(!contains(&small, &big, 1e-9));
    }

    #[test]
    fn pentagon_common_rate_closed_form() {
        let p = PentagonRegion::new(2.0, 2.0, 3.0).unwrap();
        assert_eq!(p.max_common_rate(), 1.5);
        let poly = pentagon_vertices(&p);
        assert!((poly.max_common_rate() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn union_hull_is_monotone() {
        let a = pentagon_vertices(&PentagonRegion::new(1.0, 2.0, 2.5).unwrap());
        let b = pentagon_vertices(&PentagonRegion::new(2.0, 1.0, 2.5).unwrap());
        let u = union_hull(&[a.clone(), b.clone()]).unwrap();
        assert!(contains(&u, &a, 1e-12));
        assert!(contains(&u, &b, 1e-12));
        let u2 = union_hull(&[a.clone()]).unwrap();
        assert!(contains(&u, &u2, 1e-12));
    }
}
