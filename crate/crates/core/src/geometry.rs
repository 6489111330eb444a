//! Planar geometry for transport paths: winding numbers, clearance,
//! signed area and seeded path deformation.
//!
//! Closed polylines store their closure explicitly: the last vertex repeats
//! the first (within [`CLOSURE_TOL`]), so every closed path is iterated as a
//! plain sequence of segments.

use std::f64::consts::{PI, TAU};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

/// Minimum path-to-center distance for which a winding number is defined.
pub const EPS_CLEARANCE: f64 = 1e-9;

/// Tolerance for the explicit closure vertex and for on-ray vertex detection.
pub const CLOSURE_TOL: f64 = 1e-12;

/// Relative tolerance on the angle-sum oracle before rounding.
pub const ANGLE_SUM_TOL: f64 = 1e-6;

// Ray rotation used when a vertex sits on the horizontal ray. 1/golden ratio
// radians, so repeated rotations never line up with a rational fraction of 2π.
const RAY_ROTATION: f64 = 0.618_033_988_749_894_9;
const MAX_RAY_ROTATIONS: usize = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("path passes within {clearance:e} of the center; winding number undefined")]
    PathTooClose { clearance: f64 },
    #[error("degenerate path: {0}")]
    DegeneratePath(String),
    #[error("angle sum is {residual:e} turns away from an integer")]
    NonIntegerAngleSum { residual: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, GeometryError>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(&self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn translate(&self, dx: f64, dy: f64) -> Point2 {
        Point2::new(self.x + dx, self.y + dy)
    }
}

/// An ordered list of vertices; see the module docs for the closure rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    vertices: Vec<Point2>,
    closed: bool,
}

impl Polyline {
    pub fn open(vertices: Vec<Point2>) -> Result<Self> {
        let path = Self {
            vertices,
            closed: false,
        };
        path.validate()?;
        Ok(path)
    }

    /// Builds a closed polyline. The closing vertex is appended when the
    /// input does not already end on its first vertex.
    pub fn closed(mut vertices: Vec<Point2>) -> Result<Self> {
        if let (Some(&first), Some(&last)) = (vertices.first(), vertices.last()) {
            if vertices.len() < 2 || first.distance(last) > CLOSURE_TOL {
                vertices.push(first);
            }
        }
        let path = Self {
            vertices,
            closed: true,
        };
        path.validate()?;
        Ok(path)
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn segments(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    /// Vertex list without the repeated closing vertex.
    pub fn distinct_vertices(&self) -> &[Point2] {
        if self.closed {
            &self.vertices[..self.vertices.len() - 1]
        } else {
            &self.vertices
        }
    }

    pub fn reversed(&self) -> Polyline {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Polyline {
            vertices,
            closed: self.closed,
        }
    }

    pub fn translated(&self, dx: f64, dy: f64) -> Polyline {
        Polyline {
            vertices: self.vertices.iter().map(|p| p.translate(dx, dy)).collect(),
            closed: self.closed,
        }
    }

    pub fn scaled(&self, factor: f64) -> Polyline {
        Polyline {
            vertices: self
                .vertices
                .iter()
                .map(|p| Point2::new(p.x * factor, p.y * factor))
                .collect(),
            closed: self.closed,
        }
    }

    /// Largest vertex displacement between two paths of equal length.
    pub fn max_displacement(&self, other: &Polyline) -> f64 {
        self.vertices
            .iter()
            .zip(&other.vertices)
            .map(|(a, b)| a.distance(*b))
            .fold(0.0, f64::max)
    }

    pub fn validate(&self) -> Result<()> {
        if self.vertices.len() < 2 {
            return Err(GeometryError::DegeneratePath(format!(
                "{} vertices, need at least 2",
                self.vertices.len()
            )));
        }
        if !self.vertices.iter().all(Point2::is_finite) {
            return Err(GeometryError::DegeneratePath(
                "non-finite vertex coordinate".into(),
            ));
        }
        if self.closed {
            let first = self.vertices[0];
            let last = self.vertices[self.vertices.len() - 1];
            if first.distance(last) > CLOSURE_TOL {
                return Err(GeometryError::DegeneratePath(
                    "closed path does not end on its first vertex".into(),
                ));
            }
            let distinct = count_distinct(self.distinct_vertices());
            if distinct < 3 {
                return Err(GeometryError::DegeneratePath(format!(
                    "closed path has {distinct} distinct vertices, need at least 3"
                )));
            }
        }
        Ok(())
    }

    fn require_closed(&self) -> Result<()> {
        if !self.closed {
            return Err(GeometryError::DegeneratePath(
                "operation needs a closed path".into(),
            ));
        }
        self.validate()
    }
}

fn count_distinct(points: &[Point2]) -> usize {
    let mut seen: Vec<Point2> = Vec::new();
    for p in points {
        if !seen.iter().any(|q| q.distance(*p) <= CLOSURE_TOL) {
            seen.push(*p);
        }
    }
    seen.len()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindingResult {
    pub n: i64,
    pub clearance: f64,
}

fn checked_clearance(path: &Polyline, center: Point2) -> Result<f64> {
    path.require_closed()?;
    if !center.is_finite() {
        return Err(GeometryError::InvalidParameter("non-finite center".into()));
    }
    let clearance = min_distance(path, center)?;
    if clearance <= EPS_CLEARANCE {
        return Err(GeometryError::PathTooClose { clearance });
    }
    Ok(clearance)
}

/// Signed winding number of a closed path around `center`, counter-clockwise
/// positive, by counting signed crossings of a ray cast from the center.
pub fn winding_number(path: &Polyline, center: Point2) -> Result<WindingResult> {
    let clearance = checked_clearance(path, center)?;

    // Work in center-relative coordinates; rotate the frame if some vertex
    // lies on (or numerically on) the ray along +x.
    let rel: Vec<(f64, f64)> = path
        .vertices
        .iter()
        .map(|p| (p.x - center.x, p.y - center.y))
        .collect();
    let mut angle = 0.0_f64;
    for _ in 0..MAX_RAY_ROTATIONS {
        let (s, c) = angle.sin_cos();
        let rotated: Vec<(f64, f64)> = rel
            .iter()
            .map(|&(x, y)| (c * x + s * y, -s * x + c * y))
            .collect();
        let touches_ray = rotated
            .iter()
            .any(|&(x, y)| y.abs() <= CLOSURE_TOL && x > 0.0);
        if !touches_ray {
            return Ok(WindingResult {
                n: crossing_count(&rotated),
                clearance,
            });
        }
        angle += RAY_ROTATION;
    }
    // Only reachable for adversarial inputs; the half-open rule still gives
    // a consistent count.
    Ok(WindingResult {
        n: crossing_count(&rel),
        clearance,
    })
}

// Half-open crossing rule: an upward edge counts when the origin is to its
// left, a downward edge when it is to its right.
fn crossing_count(rel: &[(f64, f64)]) -> i64 {
    let mut n = 0_i64;
    for w in rel.windows(2) {
        let (x0, y0) = w[0];
        let (x1, y1) = w[1];
        let is_left = x0 * y1 - x1 * y0;
        if y0 <= 0.0 {
            if y1 > 0.0 && is_left > 0.0 {
                n += 1;
            }
        } else if y1 <= 0.0 && is_left < 0.0 {
            n -= 1;
        }
    }
    n
}

/// Independent winding computation: sum of signed angles subtended at the
/// center, divided by 2π and rounded.
pub fn winding_number_oracle(path: &Polyline, center: Point2) -> Result<i64> {
    checked_clearance(path, center)?;
    let total: f64 = path
        .segments()
        .map(|(a, b)| {
            let (ax, ay) = (a.x - center.x, a.y - center.y);
            let (bx, by) = (b.x - center.x, b.y - center.y);
            (ax * by - ay * bx).atan2(ax * bx + ay * by)
        })
        .sum();
    let turns = total / TAU;
    let rounded = turns.round();
    let residual = (turns - rounded).abs();
    if residual > ANGLE_SUM_TOL {
        return Err(GeometryError::NonIntegerAngleSum { residual });
    }
    Ok(rounded as i64)
}

/// Jitters every vertex by i.i.d. Gaussian offsets of standard deviation
/// `sigma` per coordinate. Closed paths move all their distinct vertices and
/// keep the closing vertex on top of the first; open paths keep both
/// endpoints fixed.
pub fn perturb_path(path: &Polyline, sigma: f64, seed: u64) -> Polyline {
    if sigma == 0.0 {
        return path.clone();
    }
    let normal = Normal::new(0.0, sigma.abs()).expect("finite sigma");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vertices = path.vertices.clone();
    let n = vertices.len();
    let range = if path.closed {
        0..n - 1
    } else {
        1..n.saturating_sub(1)
    };
    for v in &mut vertices[range] {
        v.x += normal.sample(&mut rng);
        v.y += normal.sample(&mut rng);
    }
    if path.closed {
        vertices[n - 1] = vertices[0];
    }
    Polyline {
        vertices,
        closed: path.closed,
    }
}

pub fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0);
    p.distance(Point2::new(a.x + t * dx, a.y + t * dy))
}

/// Exact minimum distance from `point` to any segment of `path`.
pub fn min_distance(path: &Polyline, point: Point2) -> Result<f64> {
    path.validate()?;
    Ok(path
        .segments()
        .map(|(a, b)| point_segment_distance(point, a, b))
        .fold(f64::INFINITY, f64::min))
}

/// Shoelace area, counter-clockwise positive.
pub fn enclosed_area(path: &Polyline) -> Result<f64> {
    path.require_closed()?;
    let twice: f64 = path.segments().map(|(a, b)| a.x * b.y - b.x * a.y).sum();
    Ok(0.5 * twice)
}

/// Closed circle sampled at `samples_per_turn` vertices per revolution,
/// wound `|turns|` times in the direction of `sign(turns)`.
pub fn circle_path(
    center: Point2,
    radius: f64,
    turns: i64,
    samples_per_turn: usize,
) -> Result<Polyline> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(GeometryError::InvalidParameter(format!(
            "radius must be positive, got {radius}"
        )));
    }
    if turns == 0 {
        return Err(GeometryError::InvalidParameter(
            "turns must be nonzero".into(),
        ));
    }
    if samples_per_turn < 8 {
        return Err(GeometryError::InvalidParameter(format!(
            "samples_per_turn must be at least 8, got {samples_per_turn}"
        )));
    }
    if !center.is_finite() {
        return Err(GeometryError::InvalidParameter("non-finite center".into()));
    }
    let orientation = turns.signum() as f64;
    let total = turns.unsigned_abs() as usize * samples_per_turn;
    let mut vertices: Vec<Point2> = (0..total)
        .map(|k| {
            let phase = 2.0 * PI * (k % samples_per_turn) as f64 / samples_per_turn as f64;
            let (s, c) = (orientation * phase).sin_cos();
            Point2::new(center.x + radius * c, center.y + radius * s)
        })
        .collect();
    vertices.push(vertices[0]);
    Ok(Polyline {
        vertices,
        closed: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> Polyline {
        Polyline::closed(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ])
        .unwrap()
    }

    #[test]
    fn square_windings() {
        let sq = unit_square();
        let c = Point2::new(0.5, 0.5);
        assert_eq!(winding_number(&sq, c).unwrap().n, 1);
        assert_eq!(winding_number(&sq.reversed(), c).unwrap().n, -1);
        assert_eq!(winding_number(&sq, Point2::new(2.0, 2.0)).unwrap().n, 0);
        assert_eq!(winding_number_oracle(&sq, c).unwrap(), 1);
        assert_eq!(
            winding_number_oracle(&sq, Point2::new(2.0, 2.0)).unwrap(),
            0
        );
    }

    #[test]
    fn double_circle_winds_twice() {
        let circle = circle_path(Point2::new(0.0, 0.0), 1.0, 2, 32).unwrap();
        assert_eq!(circle.distinct_vertices().len(), 64);
        let origin = Point2::new(0.0, 0.0);
        assert_eq!(winding_number_oracle(&circle, origin).unwrap(), 2);
        assert_eq!(winding_number(&circle, origin).unwrap().n, 2);
    }

    #[test]
    fn circle_orientation_follows_turns() {
        let c = Point2::new(3.0, -1.0);
        for turns in [1, -1, -3, 5] {
            let p = circle_path(c, 0.5, turns, 8).unwrap();
            assert_eq!(winding_number(&p, c).unwrap().n, turns);
        }
        let octagon = circle_path(c, 1.0, 1, 8).unwrap();
        assert_eq!(octagon.distinct_vertices().len(), 8);
    }

    #[test]
    fn circle_rejects_bad_parameters() {
        let c = Point2::new(0.0, 0.0);
        assert!(matches!(
            circle_path(c, 1.0, 0, 32),
            Err(GeometryError::InvalidParameter(_))
        ));
        assert!(circle_path(c, -1.0, 1, 32).is_err());
        assert!(circle_path(c, 1.0, 1, 7).is_err());
    }

    #[test]
    fn vertex_on_ray_is_handled() {
        // (1, 0.5) and (2, 0.5) lie exactly on the +x ray from the center.
        let p = Polyline::closed(vec![
            Point2::new(1.0, 0.5),
            Point2::new(2.0, 0.5),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
        ])
        .unwrap();
        let c = Point2::new(0.5, 0.5);
        assert_eq!(
            winding_number(&p, c).unwrap().n,
            winding_number_oracle(&p, c).unwrap()
        );
        assert_eq!(winding_number(&p, c).unwrap().n, 1);
    }

    #[test]
    fn too_close_and_degenerate() {
        let sq = unit_square();
        assert!(matches!(
            winding_number(&sq, Point2::new(0.5, 0.0)),
            Err(GeometryError::PathTooClose { .. })
        ));
        assert!(matches!(
            winding_number_oracle(&sq, Point2::new(1.0, 1.0)),
            Err(GeometryError::PathTooClose { .. })
        ));
        let line = Polyline::closed(vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0)]);
        assert!(matches!(line, Err(GeometryError::DegeneratePath(_))));
        let open = Polyline::open(vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0)]).unwrap();
        assert!(matches!(
            winding_number(&open, Point2::new(0.0, 1.0)),
            Err(GeometryError::DegeneratePath(_))
        ));
        assert!(Polyline::open(vec![Point2::new(f64::NAN, 0.0), Point2::new(1.0, 0.0)]).is_err());
    }

    #[test]
    fn distances() {
        let sq = unit_square();
        assert_eq!(min_distance(&sq, Point2::new(0.5, 0.5)).unwrap(), 0.5);
        assert_eq!(min_distance(&sq, Point2::new(0.5, 0.0)).unwrap(), 0.0);
        assert_eq!(min_distance(&sq, Point2::new(2.0, 0.5)).unwrap(), 1.0);
    }

    #[test]
    fn areas() {
        let sq = unit_square();
        assert_eq!(enclosed_area(&sq).unwrap(), 1.0);
        assert_eq!(enclosed_area(&sq.reversed()).unwrap(), -1.0);
        // Figure eight: CCW lobe on the right, CW lobe on the left, each of
        // area 1 by hand, so the shoelace sum cancels.
        let eight = Polyline::closed(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, -1.0),
            Point2::new(2.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 0.0),
            Point2::new(-1.0, -1.0),
            Point2::new(-2.0, 0.0),
            Point2::new(-1.0, 1.0),
        ])
        .unwrap();
        assert!(enclosed_area(&eight).unwrap().abs() < 1e-12);
        assert!(enclosed_area(&Polyline::open(sq.vertices().to_vec()).unwrap()).is_err());
    }

    #[test]
    fn perturbation_contract() {
        let sq = unit_square();
        assert_eq!(perturb_path(&sq, 0.0, 9), sq);
        let a = perturb_path(&sq, 0.01, 42);
        let b = perturb_path(&sq, 0.01, 42);
        assert_eq!(a, b);
        assert_ne!(a, sq);
        assert_eq!(a.vertices()[0], a.vertices()[4]);
        for seed in 0..200 {
            let p = perturb_path(&sq, 0.01, seed);
            assert_eq!(winding_number(&p, Point2::new(0.5, 0.5)).unwrap().n, 1);
        }
    }

    #[test]
    fn open_perturbation_pins_endpoints() {
        let open = Polyline::open(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(2.0, 0.0),
        ])
        .unwrap();
        let p = perturb_path(&open, 0.1, 3);
        assert_eq!(p.vertices()[0], open.vertices()[0]);
        assert_eq!(p.vertices()[2], open.vertices()[2]);
        assert_ne!(p.vertices()[1], open.vertices()[1]);
    }
}
