//! Euclidean geometry of realized surfaces: dihedral angles, rigid-motion
//! fitting, convex polygon intersection, and regular-polygon validation.

use crate::angle::AnglePi;
use crate::surface::{EdgeId, FaceId, Surface, VertexId};
use nalgebra::{Matrix3, Point3, Vector3};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("polygons need at least 3 sides, got {k}")]
    DegreeTooSmall { k: usize },
    #[error("no closed-form dihedral data for degree {n}")]
    UnsupportedDegree { n: usize },
    #[error("face {face} has a degenerate normal")]
    DegenerateNormal { face: FaceId },
    #[error("point sets admit no rigid motion within tolerance (best residual {residual})")]
    NoIsometry { residual: f64 },
    #[error("correspondence does not determine a rigid motion")]
    DegenerateCorrespondence,
}

/// Interior angle of a regular `k`-gon, exact.
pub fn interior_angle(k: usize) -> Result<AnglePi, GeometryError> {
    if k < 3 {
        return Err(GeometryError::DegreeTooSmall { k });
    }
    Ok(AnglePi::interior_angle(k))
}

/// Circumradius of a regular `k`-gon with unit edges.
pub fn circumradius(k: usize) -> f64 {
    1.0 / (2.0 * (std::f64::consts::PI / k as f64).sin())
}

/// Vertices of the canonical regular `k`-gon with unit edges, counter-
/// clockwise in the `z = 0` plane, centered at the origin.
pub fn canonical_polygon(k: usize) -> Vec<Point3<f64>> {
    let r = circumradius(k);
    (0..k)
        .map(|j| {
            let t = 2.0 * std::f64::consts::PI * j as f64 / k as f64;
            Point3::new(r * t.cos(), r * t.sin(), 0.0)
        })
        .collect()
}

/// Interior dihedral angle at an edge, in degrees in `(0, 360)`: the angle
/// measured through the enclosed side, so convex edges give values below 180
/// and reflex edges values above.
pub fn dihedral_angle(s: &Surface, e: EdgeId, eps: f64) -> Result<f64, GeometryError> {
    let h = e;
    let t = s.halfedge(h).twin;
    let f1 = s.halfedge(h).face;
    let f2 = s.halfedge(t).face;
    let n1 = s.face_normal(f1);
    let n2 = s.face_normal(f2);
    if n1.norm() == 0.0 {
        return Err(GeometryError::DegenerateNormal { face: f1 });
    }
    if n2.norm() == 0.0 {
        return Err(GeometryError::DegenerateNormal { face: f2 });
    }
    let cosang = (-n1.dot(&n2)).clamp(-1.0, 1.0);
    let base = cosang.acos().to_degrees();
    let p = s.position(s.halfedge(h).origin);
    let side = (n1.dot(&(s.face_centroid(f2) - p)) + n2.dot(&(s.face_centroid(f1) - p))) / 2.0;
    if side > eps {
        Ok(360.0 - base)
    } else {
        Ok(base)
    }
}

/// Dihedral angles forced at a vertex where two pentagons and one `n`-gon
/// meet: `(angle between the pentagons, angle between pentagon and n-gon)`,
/// in degrees. Defined for `n` in `{5, 7, 8, 9, 10}`.
pub fn dihedral_table(n: usize) -> Result<(f64, f64), GeometryError> {
    if !matches!(n, 5 | 7 | 8 | 9 | 10) {
        return Err(GeometryError::UnsupportedDegree { n });
    }
    let a5 = 3.0 * std::f64::consts::PI / 5.0;
    let an = (n as f64 - 2.0) * std::f64::consts::PI / n as f64;
    let c55 = (an.cos() - a5.cos() * a5.cos()) / (a5.sin() * a5.sin());
    let c5n = a5.cos() * (1.0 - an.cos()) / (a5.sin() * an.sin());
    Ok((
        c55.clamp(-1.0, 1.0).acos().to_degrees(),
        c5n.clamp(-1.0, 1.0).acos().to_degrees(),
    ))
}

/// A rigid motion of 3-space, possibly orientation-reversing.
#[derive(Debug, Clone, Copy)]
pub struct Isometry {
    pub linear: Matrix3<f64>,
    pub translation: Vector3<f64>,
}

impl Isometry {
    pub fn identity() -> Self {
        Isometry { linear: Matrix3::identity(), translation: Vector3::zeros() }
    }

    pub fn translation(v: Vector3<f64>) -> Self {
        Isometry { linear: Matrix3::identity(), translation: v }
    }

    /// Rotation by `angle` about the axis through `center` along `axis`.
    pub fn rotation_about_axis(center: Point3<f64>, axis: Vector3<f64>, angle: f64) -> Self {
        let r = nalgebra::Rotation3::from_axis_angle(
            &nalgebra::Unit::new_normalize(axis),
            angle,
        );
        let linear = *r.matrix();
        let translation = center.coords - linear * center.coords;
        Isometry { linear, translation }
    }

    /// Reflection through the plane through `point` with normal `normal`.
    pub fn reflection_through_plane(point: Point3<f64>, normal: Vector3<f64>) -> Self {
        let n = normal.normalize();
        let linear = Matrix3::identity() - 2.0 * n * n.transpose();
        let translation = point.coords - linear * point.coords;
        Isometry { linear, translation }
    }

    pub fn apply_point(&self, p: Point3<f64>) -> Point3<f64> {
        Point3::from(self.linear * p.coords + self.translation)
    }

    pub fn apply_vector(&self, v: Vector3<f64>) -> Vector3<f64> {
        self.linear * v
    }

    /// `self` after `other`: applies `other` first.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry {
            linear: self.linear * other.linear,
            translation: self.linear * other.translation + self.translation,
        }
    }

    pub fn inverse(&self) -> Isometry {
        let inv = self.linear.transpose();
        Isometry { linear: inv, translation: -(inv * self.translation) }
    }

    pub fn is_orientation_preserving(&self) -> bool {
        self.linear.determinant() > 0.0
    }
}

/// Least-squares rigid motion taking `a` pointwise onto `b` within `eps`
/// (max pointwise residual). Tries a proper rotation first and falls back to
/// an orientation-reversing motion.
pub fn isometry_from_correspondence(
    a: &[Point3<f64>],
    b: &[Point3<f64>],
    eps: f64,
) -> Result<Isometry, GeometryError> {
    if a.len() != b.len() || a.len() < 3 {
        return Err(GeometryError::DegenerateCorrespondence);
    }
    let n = a.len() as f64;
    let ca = a.iter().fold(Vector3::zeros(), |s, p| s + p.coords) / n;
    let cb = b.iter().fold(Vector3::zeros(), |s, p| s + p.coords) / n;
    let mut h = Matrix3::zeros();
    let mut spread_a: f64 = 0.0;
    for (pa, pb) in a.iter().zip(b) {
        let da = pa.coords - ca;
        let db = pb.coords - cb;
        h += da * db.transpose();
        spread_a = spread_a.max(da.norm());
    }
    let svd = nalgebra::SVD::new(h, true, true);
    let (u, v_t) = match (svd.u, svd.v_t) {
        (Some(u), Some(v_t)) => (u, v_t),
        _ => return Err(GeometryError::DegenerateCorrespondence),
    };
    // Collinear point sets do not pin down the motion.
    if svd.singular_values[1] <= 1e-12 * (1.0 + svd.singular_values[0]) && spread_a > eps {
        return Err(GeometryError::DegenerateCorrespondence);
    }
    let v = v_t.transpose();
    let free = v * u.transpose();
    let mut best: Option<(f64, Isometry)> = None;
    for det_sign in [1.0f64, -1.0] {
        let d = Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, det_sign * free.determinant().signum()));
        let linear = v * d * u.transpose();
        let translation = cb - linear * ca;
        let iso = Isometry { linear, translation };
        let residual = a
            .iter()
            .zip(b)
            .map(|(pa, pb)| (iso.apply_point(*pa) - *pb).norm())
            .fold(0.0f64, f64::max);
        match &best {
            Some((r, _)) if *r <= residual => {}
            _ => best = Some((residual, iso)),
        }
        if residual <= eps && det_sign > 0.0 {
            return Ok(iso); // prefer the proper rotation when it fits
        }
    }
    let (residual, iso) = best.unwrap();
    if residual <= eps {
        Ok(iso)
    } else {
        Err(GeometryError::NoIsometry { residual })
    }
}

/// How the images of two convex planar polygons meet in 3-space.
#[derive(Debug, Clone, PartialEq)]
pub enum PolygonIntersection {
    Disjoint,
    /// Exactly one point.
    Point(Point3<f64>),
    /// A segment of positive length.
    Segment(Point3<f64>, Point3<f64>),
    /// A two-dimensional region.
    Region,
}

fn newell_normal(poly: &[Point3<f64>]) -> Vector3<f64> {
    let mut n = Vector3::zeros();
    for k in 0..poly.len() {
        let p = poly[k];
        let q = poly[(k + 1) % poly.len()];
        n.x += (p.y - q.y) * (p.z + q.z);
        n.y += (p.z - q.z) * (p.x + q.x);
        n.z += (p.x - q.x) * (p.y + q.y);
    }
    n
}

/// Clips the line `o + t d` against a convex polygon (in the polygon's own
/// plane), returning the parameter interval inside the polygon.
fn clip_line_to_polygon(
    poly: &[Point3<f64>],
    normal: &Vector3<f64>,
    o: Point3<f64>,
    d: Vector3<f64>,
    eps: f64,
) -> Option<(f64, f64)> {
    let mut t0 = f64::NEG_INFINITY;
    let mut t1 = f64::INFINITY;
    for k in 0..poly.len() {
        let a = poly[k];
        let b = poly[(k + 1) % poly.len()];
        let inward = normal.cross(&(b - a)).normalize();
        // Half-plane: inward . (x - a) >= 0.
        let num = inward.dot(&(o - a));
        let den = inward.dot(&d);
        if den.abs() <= 1e-14 {
            if num < -eps {
                return None;
            }
        } else {
            let t = -num / den;
            if den > 0.0 {
                t0 = t0.max(t);
            } else {
                t1 = t1.min(t);
            }
        }
    }
    if t0 <= t1 + eps {
        Some((t0, t1))
    } else {
        None
    }
}

fn polygon_area(poly: &[Point3<f64>]) -> f64 {
    newell_normal(poly).norm() / 2.0
}

/// Sutherland–Hodgman clip of `subject` by convex `clip` (both coplanar).
fn clip_polygon_by_polygon(
    subject: &[Point3<f64>],
    clip: &[Point3<f64>],
    normal: &Vector3<f64>,
    eps: f64,
) -> Vec<Point3<f64>> {
    let mut out: Vec<Point3<f64>> = subject.to_vec();
    for k in 0..clip.len() {
        if out.is_empty() {
            return out;
        }
        let a = clip[k];
        let b = clip[(k + 1) % clip.len()];
        let inward = normal.cross(&(b - a)).normalize();
        let side = |p: &Point3<f64>| inward.dot(&(*p - a));
        let input = std::mem::take(&mut out);
        for i in 0..input.len() {
            let p = input[i];
            let q = input[(i + 1) % input.len()];
            let sp = side(&p);
            let sq = side(&q);
            if sp >= -eps {
                out.push(p);
            }
            if (sp > eps && sq < -eps) || (sp < -eps && sq > eps) {
                let t = sp / (sp - sq);
                out.push(p + (q - p) * t);
            }
        }
    }
    out
}

/// Classifies the intersection of the images of two convex planar polygons.
pub fn polygon_intersection(
    p: &[Point3<f64>],
    q: &[Point3<f64>],
    eps: f64,
) -> PolygonIntersection {
    let np_raw = newell_normal(p);
    let nq_raw = newell_normal(q);
    let np = np_raw.normalize();
    let nq = nq_raw.normalize();
    let dp = np.dot(&p[0].coords);
    let coplanar = q.iter().all(|v| (np.dot(&v.coords) - dp).abs() <= eps)
        && p.iter().all(|v| (nq.dot(&v.coords) - nq.dot(&q[0].coords)).abs() <= eps);
    if coplanar {
        let inter = clip_polygon_by_polygon(q, p, &np, eps);
        if inter.is_empty() {
            return PolygonIntersection::Disjoint;
        }
        if polygon_area(&inter) > eps {
            return PolygonIntersection::Region;
        }
        // Flat result: collapse to its extremes.
        let mut far = (inter[0], inter[0], 0.0f64);
        for a in &inter {
            for b in &inter {
                let d = (a - b).norm();
                if d > far.2 {
                    far = (*a, *b, d);
                }
            }
        }
        if far.2 <= eps {
            return PolygonIntersection::Point(inter[0]);
        }
        return PolygonIntersection::Segment(far.0, far.1);
    }
    if np.cross(&nq).norm() <= 1e-9 {
        // Parallel distinct planes.
        return PolygonIntersection::Disjoint;
    }
    // Line of intersection of the two planes.
    let d = np.cross(&nq).normalize();
    let dq = nq.dot(&q[0].coords);
    // Solve o = alpha np + beta nq with np.o = dp, nq.o = dq.
    let nn = np.dot(&nq);
    let det = 1.0 - nn * nn;
    let alpha = (dp - dq * nn) / det;
    let beta = (dq - dp * nn) / det;
    let o = Point3::from(alpha * np + beta * nq);
    let ip = clip_line_to_polygon(p, &np, o, d, eps);
    let iq = clip_line_to_polygon(q, &nq, o, d, eps);
    match (ip, iq) {
        (Some((a0, a1)), Some((b0, b1))) => {
            let t0 = a0.max(b0);
            let t1 = a1.min(b1);
            if t0 > t1 + eps {
                PolygonIntersection::Disjoint
            } else if t1 - t0 <= eps {
                let t = (t0 + t1) / 2.0;
                PolygonIntersection::Point(o + d * t)
            } else {
                PolygonIntersection::Segment(o + d * t0, o + d * t1)
            }
        }
        _ => PolygonIntersection::Disjoint,
    }
}

/// A single defect found in a realization.
#[derive(Debug, Clone, PartialEq)]
pub enum RealizationViolation {
    /// Edge `(a, b)` of `face` has the given length instead of 1.
    EdgeLength { face: FaceId, a: VertexId, b: VertexId, length: f64 },
    /// `vertex` sits at the given distance from the face centroid instead of
    /// the regular circumradius.
    Circumradius { face: FaceId, vertex: VertexId, distance: f64 },
    /// `vertex` lies off the face's best-fit plane by `offset`.
    NonPlanar { face: FaceId, vertex: VertexId, offset: f64 },
    /// Consecutive spokes of the face do not step by the regular central
    /// angle at `vertex`.
    IrregularCorner { face: FaceId, vertex: VertexId },
    /// Faces `f` and `g` share an edge but fold back onto the same plane
    /// with overlapping images.
    FoldedFlat { f: FaceId, g: FaceId },
}

/// Outcome of checking that every face is realized as a regular unit-edge
/// polygon and no edge folds a face back onto its neighbor.
#[derive(Debug, Clone, Default)]
pub struct RealizationReport {
    pub violations: Vec<RealizationViolation>,
}

impl RealizationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every face of `s` against the regular unit-edge model within
/// `eps`, and every edge against folded-flat overlap.
pub fn validate_realization(s: &Surface, eps: f64) -> RealizationReport {
    let mut violations = Vec::new();
    for f in 0..s.face_count() {
        let vs = s.face_vertices(f);
        let k = vs.len();
        let pts: Vec<Point3<f64>> = vs.iter().map(|&v| s.position(v)).collect();
        for i in 0..k {
            let len = (pts[(i + 1) % k] - pts[i]).norm();
            if (len - 1.0).abs() > eps {
                violations.push(RealizationViolation::EdgeLength {
                    face: f,
                    a: vs[i],
                    b: vs[(i + 1) % k],
                    length: len,
                });
            }
        }
        let c = s.face_centroid(f);
        let r = circumradius(k);
        for i in 0..k {
            let d = (pts[i] - c).norm();
            if (d - r).abs() > eps {
                violations.push(RealizationViolation::Circumradius {
                    face: f,
                    vertex: vs[i],
                    distance: d,
                });
            }
        }
        let n = s.face_normal(f);
        if n.norm() > 0.0 {
            for i in 0..k {
                let off = n.dot(&(pts[i] - c)).abs();
                if off > eps {
                    violations.push(RealizationViolation::NonPlanar {
                        face: f,
                        vertex: vs[i],
                        offset: off,
                    });
                }
            }
        }
        let step = (2.0 * std::f64::consts::PI / k as f64).cos() * r * r;
        for i in 0..k {
            let dot = (pts[i] - c).dot(&(pts[(i + 1) % k] - c));
            if (dot - step).abs() > 10.0 * eps {
                violations.push(RealizationViolation::IrregularCorner { face: f, vertex: vs[i] });
            }
        }
    }
    // Folded-flat adjacent pairs: anti-parallel normals in a common plane.
    for (e, _, _) in s.edges() {
        let (f, g) = s.edge_faces(e);
        let nf = s.face_normal(f);
        let ng = s.face_normal(g);
        if nf.dot(&ng) < -1.0 + 1e-6 {
            let p = s.position(s.halfedge(e).origin);
            if nf.dot(&(s.face_centroid(g) - p)).abs() <= eps {
                violations.push(RealizationViolation::FoldedFlat { f: f.min(g), g: f.max(g) });
            }
        }
    }
    RealizationReport { violations }
}
