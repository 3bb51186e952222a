//! 2D primitives for the image-source tracer.
//!
//! Everything here is a pure function of its inputs. Distances are meters.

use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Self-hit and endpoint tolerance, in meters.
pub const EPSILON: f64 = 1e-9;

/// Slack on the segment parameter so that rays through an endpoint count as hits.
const PARAM_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(self, other: Point2) -> f64 {
        (other - self).norm()
    }

    pub fn to_vec(self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Unit vector at `deg` degrees counter-clockwise from +x.
    pub fn from_angle_deg(deg: f64) -> Self {
        let rad = deg.to_radians();
        Self::new(libm::cos(rad), libm::sin(rad))
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        libm::hypot(self.x, self.y)
    }

    /// Counter-clockwise perpendicular.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn normalized(self) -> Result<Vec2> {
        let n = self.norm();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::DegenerateDirection);
        }
        Ok(Vec2::new(self.x / n, self.y / n))
    }
}

impl Sub for Point2 {
    type Output = Vec2;
    fn sub(self, rhs: Point2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Add<Vec2> for Point2 {
    type Output = Point2;
    fn add(self, rhs: Vec2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub<Vec2> for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Vec2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, rhs: f64) -> Vec2 {
        Vec2::new(self.x * rhs, self.y * rhs)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// A finite segment with distinct endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Point2,
    pub b: Point2,
}

impl Segment {
    pub fn new(a: Point2, b: Point2) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::NonFinite("segment endpoint"));
        }
        if a == b {
            return Err(Error::DegenerateSegment);
        }
        Ok(Self { a, b })
    }

    pub fn length(&self) -> f64 {
        self.a.distance(self.b)
    }

    pub fn midpoint(&self) -> Point2 {
        self.a + (self.b - self.a) * 0.5
    }

    pub fn direction(&self) -> Vec2 {
        let d = self.b - self.a;
        let n = d.norm();
        Vec2::new(d.x / n, d.y / n)
    }

    /// Unit normal (left-hand side of `a -> b`).
    pub fn normal(&self) -> Vec2 {
        self.direction().perp()
    }

    /// Shortest distance from `p` to any point of the segment.
    pub fn distance_to(&self, p: Point2) -> f64 {
        let e = self.b - self.a;
        let t = ((p - self.a).dot(e) / e.dot(e)).clamp(0.0, 1.0);
        p.distance(self.a + e * t)
    }
}

/// A half-line with a unit direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ray {
    pub origin: Point2,
    pub direction: Vec2,
}

impl Ray {
    /// Builds a ray, normalizing `direction`.
    pub fn new(origin: Point2, direction: Vec2) -> Result<Self> {
        if !origin.is_finite() {
            return Err(Error::NonFinite("ray origin"));
        }
        Ok(Self {
            origin,
            direction: direction.normalized()?,
        })
    }

    pub fn at(&self, t: f64) -> Point2 {
        self.origin + self.direction * t
    }
}

/// A ray/segment hit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hit {
    pub point: Point2,
    pub distance: f64,
}

/// Solves `p + t·d = a + s·(b − a)` and returns `(t, s)`, or `None` when the
/// lines are parallel.
fn line_params(p: Point2, d: Vec2, seg: &Segment) -> Option<(f64, f64)> {
    let e = seg.b - seg.a;
    let denom = d.cross(e);
    if denom == 0.0 {
        return None;
    }
    let w = seg.a - p;
    Some((w.cross(e) / denom, w.cross(d) / denom))
}

fn within_segment(s: f64) -> bool {
    (-PARAM_SLACK..=1.0 + PARAM_SLACK).contains(&s)
}

/// Nearest crossing of `ray` with `seg` farther than [`EPSILON`] from the
/// origin. Endpoints count. Parallel and collinear configurations report no
/// hit.
pub fn intersect_ray_segment(ray: &Ray, seg: &Segment) -> Option<Hit> {
    let (t, s) = line_params(ray.origin, ray.direction, seg)?;
    if t > EPSILON && within_segment(s) {
        Some(Hit {
            point: ray.at(t),
            distance: t,
        })
    } else {
        None
    }
}

/// Reflection of `p` across the infinite line through `line_through`.
pub fn mirror_point(p: Point2, line_through: &Segment) -> Point2 {
    let n = line_through.normal();
    let offset = (p - line_through.a).dot(n);
    p - n * (2.0 * offset)
}

/// Specular reflection `d − 2(d·n)n`.
pub fn reflect_direction(d: Vec2, n: Vec2) -> Vec2 {
    d - n * (2.0 * d.dot(n))
}

/// True if the open segment `(p, q)` crosses no occluder whose index is not
/// in `skip`. Crossings within [`EPSILON`] of either end are ignored.
pub fn is_visible(p: Point2, q: Point2, occluders: &[Segment], skip: &[usize]) -> bool {
    let d = q - p;
    let len = d.norm();
    if len <= 2.0 * EPSILON {
        return true;
    }
    let dir = d * (1.0 / len);
    !occluders.iter().enumerate().any(|(i, seg)| {
        if skip.contains(&i) {
            return false;
        }
        match line_params(p, dir, seg) {
            Some((t, s)) => t > EPSILON && t < len - EPSILON && within_segment(s),
            None => false,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(ax: f64, ay: f64, bx: f64, by: f64) -> Segment {
        Segment::new(Point2::new(ax, ay), Point2::new(bx, by)).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn ray_crosses_vertical_segment() {
        let ray = Ray::new(Point2::new(0.0, 0.0), Vec2::new(1.0, 0.0)).unwrap();
        let hit = intersect_ray_segment(&ray, &seg(5.0, -1.0, 5.0, 1.0)).unwrap();
        assert!(close(hit.point.x, 5.0, 1e-12) && close(hit.point.y, 0.0, 1e-12));
        assert!(close(hit.distance, 5.0, 1e-12));
    }

    #[test]
    fn ray_misses_segment_above() {
        let ray = Ray::new(Point2::new(0.0, 0.0), Vec2::new(1.0, 0.0)).unwrap();
        assert!(intersect_ray_segment(&ray, &seg(5.0, 1.0, 5.0, 2.0)).is_none());
    }

    #[test]
    fn ray_ignores_segment_behind() {
        let ray = Ray::new(Point2::new(0.0, 0.0), Vec2::new(-1.0, 0.0)).unwrap();
        assert!(intersect_ray_segment(&ray, &seg(5.0, -1.0, 5.0, 1.0)).is_none());
    }

    #[test]
    fn ray_through_endpoint_counts() {
        let ray = Ray::new(Point2::new(0.0, 0.0), Vec2::new(1.0, 0.0)).unwrap();
        let hit = intersect_ray_segment(&ray, &seg(5.0, 0.0, 5.0, 2.0)).unwrap();
        assert!(close(hit.distance, 5.0, 1e-12));
    }

    #[test]
    fn ray_does_not_hit_its_own_origin_wall() {
        let ray = Ray::new(Point2::new(2.0, 0.0), Vec2::new(1.0, 1.0)).unwrap();
        assert!(intersect_ray_segment(&ray, &seg(-10.0, 0.0, 10.0, 0.0)).is_none());
    }

    #[test]
    fn parallel_ray_has_no_hit() {
        let ray = Ray::new(Point2::new(0.0, 1.0), Vec2::new(1.0, 0.0)).unwrap();
        assert!(intersect_ray_segment(&ray, &seg(2.0, 0.0, 4.0, 0.0)).is_none());
    }

    #[test]
    fn mirror_examples() {
        let p = mirror_point(Point2::new(3.0, 2.0), &seg(0.0, 0.0, 1.0, 0.0));
        assert!(close(p.x, 3.0, 1e-12) && close(p.y, -2.0, 1e-12));
        let p = mirror_point(Point2::new(0.0, 5.0), &seg(2.0, 0.0, 2.0, 1.0));
        assert!(close(p.x, 4.0, 1e-12) && close(p.y, 5.0, 1e-12));
        let p = mirror_point(Point2::new(1.0, 1.0), &seg(0.0, 0.0, 2.0, 2.0));
        assert!(close(p.x, 1.0, 1e-12) && close(p.y, 1.0, 1e-12));
    }

    #[test]
    fn reflect_examples() {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let n = Vec2::new(0.0, 1.0);
        let r = reflect_direction(Vec2::new(h, -h), n);
        assert!(close(r.x, h, 1e-15) && close(r.y, h, 1e-15));
        let r = reflect_direction(Vec2::new(0.0, -1.0), n);
        assert_eq!(r, Vec2::new(0.0, 1.0));
        let r = reflect_direction(Vec2::new(1.0, 0.0), n);
        assert_eq!(r, Vec2::new(1.0, 0.0));
    }

    #[test]
    fn visibility_examples() {
        let p = Point2::new(0.0, 0.0);
        let q = Point2::new(10.0, 0.0);
        let blocking = [seg(5.0, -1.0, 5.0, 1.0)];
        assert!(!is_visible(p, q, &blocking, &[]));
        assert!(is_visible(p, q, &[seg(5.0, 1.0, 5.0, 2.0)], &[]));
        assert!(is_visible(p, q, &blocking, &[0]));
    }

    #[test]
    fn visibility_ignores_hits_at_the_ends() {
        let p = Point2::new(0.0, 0.0);
        let q = Point2::new(10.0, 0.0);
        let at_q = [seg(10.0, -1.0, 10.0, 1.0)];
        assert!(is_visible(p, q, &at_q, &[]));
        let at_p = [seg(0.0, -1.0, 0.0, 1.0)];
        assert!(is_visible(p, q, &at_p, &[]));
    }

    #[test]
    fn degenerate_inputs_are_rejected() {
        let p = Point2::new(1.0, 1.0);
        assert_eq!(Segment::new(p, p), Err(Error::DegenerateSegment));
        assert!(Segment::new(p, Point2::new(f64::NAN, 0.0)).is_err());
        assert_eq!(
            Ray::new(p, Vec2::new(0.0, 0.0)),
            Err(Error::DegenerateDirection)
        );
    }

    #[test]
    fn segment_distance() {
        let s = seg(0.0, 0.0, 4.0, 0.0);
        assert!(close(s.distance_to(Point2::new(2.0, 3.0)), 3.0, 1e-12));
        assert!(close(s.distance_to(Point2::new(7.0, 4.0)), 5.0, 1e-12));
        assert_eq!(s.midpoint(), Point2::new(2.0, 0.0));
    }
}
