//! Construction of surfaces: elementary solids, face-to-face gluing, random
//! tree compounds, a closed ring of dodecahedra, the great dodecahedron, and
//! high-genus tube assemblies.

use crate::geometry::{polygon_intersection, Isometry, PolygonIntersection};
use crate::surface::{FaceId, Surface, SurfaceError};
use crate::DEFAULT_EPS;
use nalgebra::{Matrix3, Point3, Vector3};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

const PHI: f64 = 1.618033988749894848204586834365638118;

#[derive(Debug, Clone, Error)]
pub enum GeneratorError {
    #[error("no facet of the solid matches the degree-{degree} target face {face}")]
    DegreeMismatch { face: FaceId, degree: usize },
    #[error("the placed solid's face {new_face} overlaps existing face {old_face}")]
    CollisionDetected { new_face: usize, old_face: usize },
    #[error("several inequivalent facets fit; pass an explicit rotation")]
    AmbiguousFit,
    #[error("no ring of {n} bricks closes up")]
    RingDoesNotClose { n: usize },
    #[error("invalid tube pairing: {reason}")]
    InvalidPairing { reason: String },
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// The convex solids the generators know how to build, all with unit edges
/// and centered at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolidKind {
    Cube,
    Dodecahedron,
    OctagonalPrism,
    HexagonalPrism,
    TruncatedOctahedron,
    TruncatedCuboctahedron,
}

// ----- small geometric utilities -----

/// Merges points that coincide within `tol`. Returns the deduplicated points
/// and the map from old index to new index.
pub(crate) fn merge_positions(
    points: &[Point3<f64>],
    tol: f64,
) -> (Vec<Point3<f64>>, Vec<usize>) {
    use std::collections::HashMap;
    let cell = |p: &Point3<f64>| {
        (
            (p.x / tol).round() as i64,
            (p.y / tol).round() as i64,
            (p.z / tol).round() as i64,
        )
    };
    let mut grid: HashMap<(i64, i64, i64), Vec<usize>> = HashMap::new();
    let mut unique: Vec<Point3<f64>> = Vec::new();
    let mut map = Vec::with_capacity(points.len());
    for p in points {
        let (cx, cy, cz) = cell(p);
        let mut found = None;
        'search: for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(ids) = grid.get(&(cx + dx, cy + dy, cz + dz)) {
                        for &id in ids {
                            if (unique[id] - p).norm() <= tol {
                                found = Some(id);
                                break 'search;
                            }
                        }
                    }
                }
            }
        }
        let id = match found {
            Some(id) => id,
            None => {
                unique.push(*p);
                grid.entry((cx, cy, cz)).or_default().push(unique.len() - 1);
                unique.len() - 1
            }
        };
        map.push(id);
    }
    (unique, map)
}

/// Orders `idx` counter-clockwise around `normal` as seen from the normal's
/// positive side.
fn order_ccw(points: &[Point3<f64>], idx: &mut [usize], normal: &Vector3<f64>) {
    let n = normal.normalize();
    let c: Vector3<f64> =
        idx.iter().map(|&i| points[i].coords).sum::<Vector3<f64>>() / idx.len() as f64;
    let seed = if n.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
    let u = n.cross(&seed).normalize();
    let v = n.cross(&u);
    idx.sort_by(|&a, &b| {
        let pa = points[a].coords - c;
        let pb = points[b].coords - c;
        let ta = f64::atan2(pa.dot(&v), pa.dot(&u));
        let tb = f64::atan2(pb.dot(&v), pb.dot(&u));
        ta.partial_cmp(&tb).unwrap()
    });
    // (u, v, n) is left-handed when n.cross(u) = v points the wrong way;
    // check one cross product and flip if needed.
    if idx.len() >= 3 {
        let a = points[idx[0]].coords - c;
        let b = points[idx[1]].coords - c;
        if a.cross(&b).dot(&n) < 0.0 {
            idx.reverse();
        }
    }
}

fn faces_from_normals(
    verts: &[Point3<f64>],
    normals: &[Vector3<f64>],
) -> Vec<Vec<usize>> {
    let mut faces = Vec::with_capacity(normals.len());
    for n in normals {
        let d = verts
            .iter()
            .map(|v| v.coords.dot(n))
            .fold(f64::NEG_INFINITY, f64::max);
        let mut idx: Vec<usize> = (0..verts.len())
            .filter(|&i| verts[i].coords.dot(n) > d - 1e-9)
            .collect();
        assert!(idx.len() >= 3, "supporting plane holds {} vertices", idx.len());
        order_ccw(verts, &mut idx, n);
        faces.push(idx);
    }
    faces
}

/// Assigns consistent traversal directions to a set of face cycles by
/// propagation, so every edge is walked once in each direction. The first
/// face of each component keeps (or globally sets) its given direction.
fn orient_faces(faces: &[Vec<usize>]) -> Option<Vec<Vec<usize>>> {
    use std::collections::HashMap;
    let mut incident: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (fi, cycle) in faces.iter().enumerate() {
        for k in 0..cycle.len() {
            let a = cycle[k];
            let b = cycle[(k + 1) % cycle.len()];
            incident.entry((a.min(b), a.max(b))).or_default().push(fi);
        }
    }
    let mut flip: Vec<Option<bool>> = vec![None; faces.len()];
    for start in 0..faces.len() {
        if flip[start].is_some() {
            continue;
        }
        flip[start] = Some(false);
        let mut stack = vec![start];
        while let Some(f) = stack.pop() {
            let ff = flip[f].unwrap();
            let cycle = &faces[f];
            for k in 0..cycle.len() {
                let (a, b) = (cycle[k], cycle[(k + 1) % cycle.len()]);
                // Direction of (a, b) in f after flipping: ff false keeps a->b.
                for &g in &incident[&(a.min(b), a.max(b))] {
                    if g == f {
                        continue;
                    }
                    // g must traverse the edge opposite to f.
                    let gc = &faces[g];
                    let pos = (0..gc.len())
                        .find(|&i| {
                            let (x, y) = (gc[i], gc[(i + 1) % gc.len()]);
                            (x == a && y == b) || (x == b && y == a)
                        })
                        .unwrap();
                    let g_forward = gc[pos] == a && gc[(pos + 1) % gc.len()] == b;
                    // f traverses a->b iff !ff; g needs the opposite direction.
                    let needed_flip = g_forward == !ff;
                    match flip[g] {
                        None => {
                            flip[g] = Some(needed_flip);
                            stack.push(g);
                        }
                        Some(x) if x != needed_flip => return None,
                        _ => {}
                    }
                }
            }
        }
    }
    Some(
        faces
            .iter()
            .zip(&flip)
            .map(|(c, f)| {
                if f.unwrap() {
                    let mut r = c.clone();
                    r.reverse();
                    r
                } else {
                    c.clone()
                }
            })
            .collect(),
    )
}

// ----- solids -----

fn cyclic_perms(v: Vector3<f64>) -> [Vector3<f64>; 3] {
    [v, Vector3::new(v.z, v.x, v.y), Vector3::new(v.y, v.z, v.x)]
}

fn sign_spread(base: Vector3<f64>) -> Vec<Vector3<f64>> {
    let mut out = Vec::new();
    for sx in [1.0, -1.0] {
        for sy in [1.0, -1.0] {
            for sz in [1.0, -1.0] {
                let v = Vector3::new(base.x * sx, base.y * sy, base.z * sz);
                if !out.iter().any(|w: &Vector3<f64>| (w - v).norm() < 1e-12) {
                    out.push(v);
                }
            }
        }
    }
    out
}

fn all_perms_signs(base: Vector3<f64>) -> Vec<Point3<f64>> {
    let perms = [
        [0usize, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let b = [base.x, base.y, base.z];
    let mut out: Vec<Point3<f64>> = Vec::new();
    for p in perms {
        let v = Vector3::new(b[p[0]], b[p[1]], b[p[2]]);
        for s in sign_spread(v) {
            if !out.iter().any(|w| (w.coords - s).norm() < 1e-12) {
                out.push(Point3::from(s));
            }
        }
    }
    out
}

fn dodecahedron_normals() -> Vec<Vector3<f64>> {
    let mut out = Vec::new();
    for s1 in [1.0, -1.0] {
        for s2 in [1.0, -1.0] {
            for v in cyclic_perms(Vector3::new(0.0, PHI * s1, s2)) {
                out.push(v);
            }
        }
    }
    out
}

fn prism_data(k: usize) -> (Vec<Point3<f64>>, Vec<Vector3<f64>>) {
    let r = crate::geometry::circumradius(k);
    let mut verts = Vec::new();
    for z in [0.5, -0.5] {
        for j in 0..k {
            let t = 2.0 * std::f64::consts::PI * j as f64 / k as f64;
            verts.push(Point3::new(r * t.cos(), r * t.sin(), z));
        }
    }
    let mut normals = vec![Vector3::z(), -Vector3::z()];
    for j in 0..k {
        let t = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / k as f64;
        normals.push(Vector3::new(t.cos(), t.sin(), 0.0));
    }
    (verts, normals)
}

/// Builds the given solid with unit edges, centered at the origin, faces
/// oriented outward.
pub fn make_solid(kind: SolidKind) -> Surface {
    let (verts, normals) = match kind {
        SolidKind::Cube => {
            let verts = (0..8)
                .map(|i| {
                    Point3::new(
                        (i & 1) as f64 - 0.5,
                        ((i >> 1) & 1) as f64 - 0.5,
                        ((i >> 2) & 1) as f64 - 0.5,
                    )
                })
                .collect();
            let normals = vec![
                Vector3::x(),
                -Vector3::x(),
                Vector3::y(),
                -Vector3::y(),
                Vector3::z(),
                -Vector3::z(),
            ];
            (verts, normals)
        }
        SolidKind::Dodecahedron => {
            let s = PHI / 2.0;
            let mut verts: Vec<Point3<f64>> = Vec::new();
            for sx in [1.0f64, -1.0] {
                for sy in [1.0f64, -1.0] {
                    for sz in [1.0f64, -1.0] {
                        verts.push(Point3::new(sx * s, sy * s, sz * s));
                    }
                }
            }
            for s1 in [1.0f64, -1.0] {
                for s2 in [1.0f64, -1.0] {
                    for v in cyclic_perms(Vector3::new(0.0, s1 / PHI, s2 * PHI)) {
                        verts.push(Point3::from(v * s));
                    }
                }
            }
            (verts, dodecahedron_normals())
        }
        SolidKind::OctagonalPrism => prism_data(8),
        SolidKind::HexagonalPrism => prism_data(6),
        SolidKind::TruncatedOctahedron => {
            let verts = all_perms_signs(Vector3::new(0.0, 1.0, 2.0) / f64::sqrt(2.0));
            let mut normals = vec![
                Vector3::x(),
                -Vector3::x(),
                Vector3::y(),
                -Vector3::y(),
                Vector3::z(),
                -Vector3::z(),
            ];
            normals.extend(sign_spread(Vector3::new(1.0, 1.0, 1.0)));
            (verts, normals)
        }
        SolidKind::TruncatedCuboctahedron => {
            let sq2 = f64::sqrt(2.0);
            let verts =
                all_perms_signs(Vector3::new(1.0, 1.0 + sq2, 1.0 + 2.0 * sq2) / 2.0);
            let mut normals = vec![
                Vector3::x(),
                -Vector3::x(),
                Vector3::y(),
                -Vector3::y(),
                Vector3::z(),
                -Vector3::z(),
            ];
            normals.extend(sign_spread(Vector3::new(1.0, 1.0, 1.0)));
            for s1 in [1.0, -1.0] {
                for s2 in [1.0, -1.0] {
                    for v in cyclic_perms(Vector3::new(s1, s2, 0.0)) {
                        normals.push(v);
                    }
                }
            }
            (verts, normals)
        }
    };
    let faces = faces_from_normals(&verts, &normals);
    Surface::build(verts, faces).expect("reference solids are valid")
}

/// A right octagonal prism of height `k` built from unit squares: two
/// octagons joined by `k` rings of eight wall squares. Height 1 matches
/// [`SolidKind::OctagonalPrism`].
pub fn prism_tower(k: usize) -> Surface {
    assert!(k >= 1, "prism tower needs positive height");
    let r = 0.5 / (std::f64::consts::PI / 8.0).sin();
    let mut verts = Vec::with_capacity(8 * (k + 1));
    for ring in 0..=k {
        for i in 0..8 {
            let a = std::f64::consts::PI * (2.0 * i as f64 + 1.0) / 8.0;
            verts.push(Point3::new(r * a.cos(), r * a.sin(), ring as f64));
        }
    }
    let mut faces = Vec::with_capacity(8 * k + 2);
    // Bottom octagon faces downward, top upward; walls wind outward.
    faces.push((0..8).rev().collect::<Vec<usize>>());
    faces.push((0..8).map(|i| 8 * k + i).collect());
    for ring in 0..k {
        for i in 0..8 {
            let a = 8 * ring + i;
            let b = 8 * ring + (i + 1) % 8;
            faces.push(vec![a, b, b + 8, a + 8]);
        }
    }
    Surface::build(verts, faces).expect("prism towers are valid")
}

/// An axis-aligned `nx` by `ny` by `nz` box whose boundary is subdivided
/// into unit squares. `block(1, 1, 1)` is a unit cube.
pub fn block(nx: usize, ny: usize, nz: usize) -> Surface {
    assert!(nx >= 1 && ny >= 1 && nz >= 1, "block needs positive extents");
    let dims = [nx, ny, nz];
    let mut verts: Vec<Point3<f64>> = Vec::new();
    let mut index: std::collections::BTreeMap<[usize; 3], usize> = std::collections::BTreeMap::new();
    let mut vertex = |p: [usize; 3], verts: &mut Vec<Point3<f64>>| -> usize {
        *index.entry(p).or_insert_with(|| {
            verts.push(Point3::new(p[0] as f64, p[1] as f64, p[2] as f64));
            verts.len() - 1
        })
    };
    let mut faces: Vec<Vec<usize>> = Vec::new();
    // For each axis, two opposite walls of unit squares wound outward.
    for axis in 0..3 {
        let (u, w) = ((axis + 1) % 3, (axis + 2) % 3);
        for (level, outward_flip) in [(0, true), (dims[axis], false)] {
            for i in 0..dims[u] {
                for j in 0..dims[w] {
                    let mut corner = |du: usize, dw: usize| {
                        let mut p = [0usize; 3];
                        p[axis] = level;
                        p[u] = i + du;
                        p[w] = j + dw;
                        vertex(p, &mut verts)
                    };
                    let mut cyc = vec![corner(0, 0), corner(1, 0), corner(1, 1), corner(0, 1)];
                    if outward_flip {
                        cyc.reverse();
                    }
                    faces.push(cyc);
                }
            }
        }
    }
    Surface::build(verts, faces).expect("blocks are valid")
}

// ----- gluing -----

/// Attaches a new solid of `kind` onto face `face` of `base`: a facet of the
/// matching degree is fitted onto the face from outside, both glued faces are
/// removed, and the boundaries are stitched. `rotation` turns the solid by
/// that many edge steps before gluing (modulo the face degree); rotation 0
/// pairs the facet's lowest-index corner with the face's lowest-index corner.
pub fn glue(
    base: &Surface,
    face: FaceId,
    kind: SolidKind,
    rotation: usize,
) -> Result<Surface, GeneratorError> {
    let solid = make_solid(kind);
    let k = base.face_degree(face);
    let facet = (0..solid.face_count())
        .find(|&g| solid.face_degree(g) == k)
        .ok_or(GeneratorError::DegreeMismatch { face, degree: k })?;

    // Fit the facet cycle, reversed, onto the face cycle.
    let target: Vec<Point3<f64>> =
        base.face_vertices(face).iter().map(|&v| base.position(v)).collect();
    let src_cycle = solid.face_vertices(facet);
    let source: Vec<Point3<f64>> = (0..k)
        .map(|j| solid.position(src_cycle[(rotation + k - j) % k]))
        .collect();
    let mut iso = crate::geometry::isometry_from_correspondence(&source, &target, 1e-7)
        .expect("regular polygons of equal degree always fit");
    // The polygon correspondence leaves the side free; put the solid outside.
    let n = base.face_normal(face);
    let p0 = base.face_centroid(face);
    let placed_center = iso.apply_point(Point3::origin());
    if n.dot(&(placed_center - p0)) < 0.0 {
        let refl = Isometry::reflection_through_plane(p0, n);
        iso = refl.compose(&iso);
    }

    let det_flips = !iso.is_orientation_preserving();
    let new_positions: Vec<Point3<f64>> =
        solid.positions().iter().map(|&p| iso.apply_point(p)).collect();

    // Collision scan: every kept new face against every kept old face.
    for g in 0..solid.face_count() {
        if g == facet {
            continue;
        }
        let gp: Vec<Point3<f64>> =
            solid.face_vertices(g).iter().map(|&v| new_positions[v]).collect();
        for f in 0..base.face_count() {
            if f == face {
                continue;
            }
            let fp: Vec<Point3<f64>> =
                base.face_vertices(f).iter().map(|&v| base.position(v)).collect();
            let coincident = gp
                .iter()
                .map(|a| fp.iter().filter(|b| (*a - **b).norm() <= DEFAULT_EPS).count())
                .sum::<usize>();
            match polygon_intersection(&fp, &gp, DEFAULT_EPS) {
                PolygonIntersection::Disjoint => {}
                PolygonIntersection::Point(_) if coincident >= 1 => {}
                PolygonIntersection::Segment(_, _) if coincident >= 2 => {}
                _ => {
                    return Err(GeneratorError::CollisionDetected { new_face: g, old_face: f })
                }
            }
        }
    }

    // Assemble: old faces minus `face`, new faces minus `facet`.
    let mut all_points: Vec<Point3<f64>> = base.positions().to_vec();
    all_points.extend(new_positions.iter().copied());
    let offset = base.positions().len();
    let (points, map) = merge_positions(&all_points, DEFAULT_EPS);
    let mut faces_out: Vec<Vec<usize>> = Vec::new();
    for f in 0..base.face_count() {
        if f == face {
            continue;
        }
        faces_out.push(base.face_vertices(f).iter().map(|&v| map[v]).collect());
    }
    for g in 0..solid.face_count() {
        if g == facet {
            continue;
        }
        let mut cycle: Vec<usize> =
            solid.face_vertices(g).iter().map(|&v| map[offset + v]).collect();
        if det_flips {
            cycle.reverse();
        }
        faces_out.push(cycle);
    }
    Ok(Surface::build(points, faces_out)?)
}

// ----- random tree compounds -----

/// Glues `k` dodecahedra into a random tree; the result has `10 k + 2` faces.
pub fn random_dodec_tree(k: usize, seed: u64) -> Surface {
    assert!(k >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = make_solid(SolidKind::Dodecahedron);
    let mut placed = 1;
    let mut stalls = 0;
    while placed < k {
        let f = rng.gen_range(0..s.face_count());
        let r = rng.gen_range(0..5);
        match glue(&s, f, SolidKind::Dodecahedron, r) {
            Ok(next) => {
                s = next;
                placed += 1;
                stalls = 0;
            }
            Err(_) => {
                stalls += 1;
                assert!(stalls < 10_000, "random tree placement starved");
            }
        }
    }
    s
}

/// Glues `cubes` unit cubes and `prisms` octagonal prisms into a random tree
/// compound of square and octagonal faces.
pub fn random_cube_prism_tree(cubes: usize, prisms: usize, seed: u64) -> Surface {
    assert!(cubes + prisms >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut remaining_cubes = cubes;
    let mut remaining_prisms = prisms;
    let mut s = if cubes > 0 {
        remaining_cubes -= 1;
        make_solid(SolidKind::Cube)
    } else {
        remaining_prisms -= 1;
        make_solid(SolidKind::OctagonalPrism)
    };
    let mut stalls = 0;
    while remaining_cubes + remaining_prisms > 0 {
        let pick_cube = if remaining_cubes == 0 {
            false
        } else if remaining_prisms == 0 {
            true
        } else {
            rng.gen_bool(remaining_cubes as f64 / (remaining_cubes + remaining_prisms) as f64)
        };
        let f = rng.gen_range(0..s.face_count());
        let deg = s.face_degree(f);
        let attempt = if pick_cube {
            if deg != 4 {
                Err(GeneratorError::DegreeMismatch { face: f, degree: deg })
            } else {
                glue(&s, f, SolidKind::Cube, rng.gen_range(0..4))
            }
        } else {
            glue(&s, f, SolidKind::OctagonalPrism, rng.gen_range(0..deg))
        };
        match attempt {
            Ok(next) => {
                s = next;
                if pick_cube {
                    remaining_cubes -= 1;
                } else {
                    remaining_prisms -= 1;
                }
                stalls = 0;
            }
            Err(_) => {
                stalls += 1;
                assert!(stalls < 10_000, "random tree placement starved");
            }
        }
    }
    s
}

// ----- ring of dodecahedra -----

struct GlueMap {
    lin: Matrix3<f64>,
    trans: Vector3<f64>,
    exit: usize,
    entry: usize,
}

impl GlueMap {
    fn compose(&self, other: &GlueMap) -> (Matrix3<f64>, Vector3<f64>) {
        (self.lin * other.lin, self.lin * other.trans + self.trans)
    }
}

fn rotation_group() -> Vec<Matrix3<f64>> {
    let n0 = dodecahedron_normals()[0].normalize();
    let v0 = Vector3::new(1.0, 1.0, 1.0).normalize();
    let g1 = *nalgebra::Rotation3::from_axis_angle(
        &nalgebra::Unit::new_normalize(n0),
        2.0 * std::f64::consts::PI / 5.0,
    )
    .matrix();
    let g2 = *nalgebra::Rotation3::from_axis_angle(
        &nalgebra::Unit::new_normalize(v0),
        2.0 * std::f64::consts::PI / 3.0,
    )
    .matrix();
    let mut group: Vec<Matrix3<f64>> = vec![Matrix3::identity()];
    let mut frontier = vec![Matrix3::identity()];
    while let Some(m) = frontier.pop() {
        for g in [g1, g2] {
            let cand = g * m;
            if !group.iter().any(|x| (x - cand).abs().max() < 1e-8) {
                group.push(cand);
                frontier.push(cand);
            }
        }
    }
    assert_eq!(group.len(), 60, "rotation group of the dodecahedron");
    group
}

/// Inradius of the unit-edge dodecahedron.
fn dodec_inradius() -> f64 {
    0.5 * PHI * PHI / f64::sqrt(3.0 - PHI)
}

fn valid_glue_maps(brick: &Surface, normals: &[Vector3<f64>]) -> Vec<GlueMap> {
    let mut syms: Vec<Matrix3<f64>> = rotation_group();
    let negatives: Vec<Matrix3<f64>> = syms.iter().map(|m| -m).collect();
    syms.extend(negatives);
    let d = dodec_inradius();
    let units: Vec<Vector3<f64>> = normals.iter().map(|n| n.normalize()).collect();
    let mut out = Vec::new();
    for (e, n) in units.iter().enumerate() {
        let refl = Matrix3::identity() - 2.0 * n * n.transpose();
        let facet_pts: Vec<Point3<f64>> = brick
            .face_vertices(e)
            .iter()
            .map(|&v| brick.position(v))
            .collect();
        for s in &syms {
            let lin = refl * s;
            let trans = 2.0 * d * n;
            // Entry facet: the one mapped onto the exit plane, facing back.
            let entry = match units
                .iter()
                .position(|m| (lin * m + n).norm() < 1e-8)
            {
                Some(j) => j,
                None => continue,
            };
            let mapped: Vec<Point3<f64>> = brick
                .face_vertices(entry)
                .iter()
                .map(|&v| Point3::from(lin * brick.position(v).coords + trans))
                .collect();
            let ok = mapped.iter().all(|p| {
                facet_pts.iter().any(|q| (p - q).norm() < 1e-7)
            });
            if ok {
                out.push(GlueMap { lin, trans, exit: e, entry });
            }
        }
    }
    out
}

/// Builds a closed ring of `n` dodecahedra, consecutive bricks glued facet to
/// facet, non-consecutive bricks kept apart. Fails with `RingDoesNotClose`
/// when no such ring exists for this `n`.
pub fn dodecahedral_torus(n: usize) -> Result<Surface, GeneratorError> {
    if n < 3 || !n.is_multiple_of(2) {
        return Err(GeneratorError::RingDoesNotClose { n });
    }
    let brick = make_solid(SolidKind::Dodecahedron);
    let normals = dodecahedron_normals();
    let maps = valid_glue_maps(&brick, &normals);
    let half = n / 2;
    let circumradius = brick.position(0).coords.norm();
    let min_center_gap = 2.0 * circumradius + 0.1;

    // Any closing chain is conjugate, under a symmetry of the brick, to one
    // whose first map exits through facet 0, so the first map's exit facet
    // can be fixed.
    for ga in maps.iter().filter(|g| g.exit == 0) {
        for gb in &maps {
            if ga.entry == gb.exit || gb.entry == ga.exit {
                continue;
            }
            // Period-2 chain: frames I, A, AB, ABA, ... closes iff (AB)^half = I,
            // and half is the primitive order (otherwise bricks coincide).
            let (p_lin, p_trans) = ga.compose(gb);
            let mut lin = Matrix3::identity();
            let mut trans = Vector3::zeros();
            let mut order = 0;
            for k in 1..=half {
                let new_lin = p_lin * lin;
                let new_trans = p_lin * trans + p_trans;
                lin = new_lin;
                trans = new_trans;
                if (lin - Matrix3::identity()).abs().max() < 1e-7 && trans.norm() < 1e-7 {
                    order = k;
                    break;
                }
            }
            if order != half {
                continue;
            }
            // Walk the ring and check geometric separation.
            let mut frames: Vec<(Matrix3<f64>, Vector3<f64>)> =
                vec![(Matrix3::identity(), Vector3::zeros())];
            for k in 0..n - 1 {
                let g = if k % 2 == 0 { ga } else { gb };
                let (fl, ft) = frames[k];
                frames.push((fl * g.lin, fl * g.trans + ft));
            }
            let centers: Vec<Vector3<f64>> = frames.iter().map(|(_, t)| *t).collect();
            let mut separated = true;
            'sep: for i in 0..n {
                for j in i + 2..n {
                    if i == 0 && j == n - 1 {
                        continue; // consecutive around the ring
                    }
                    if (centers[i] - centers[j]).norm() < min_center_gap {
                        separated = false;
                        break 'sep;
                    }
                }
            }
            if !separated {
                continue;
            }
            return Ok(assemble_ring(&brick, &frames, ga, gb));
        }
    }
    Err(GeneratorError::RingDoesNotClose { n })
}

fn assemble_ring(
    brick: &Surface,
    frames: &[(Matrix3<f64>, Vector3<f64>)],
    ga: &GlueMap,
    gb: &GlueMap,
) -> Surface {
    let n = frames.len();
    let nv = brick.vertex_count();
    let mut all_points = Vec::with_capacity(n * nv);
    for (lin, trans) in frames {
        for v in 0..nv {
            all_points.push(Point3::from(lin * brick.position(v).coords + trans));
        }
    }
    let (points, map) = merge_positions(&all_points, 1e-6);
    let mut faces = Vec::new();
    for (k, (lin, _)) in frames.iter().enumerate() {
        let exit = if k % 2 == 0 { ga.exit } else { gb.exit };
        let entry = if k % 2 == 0 { gb.entry } else { ga.entry };
        let mirrored = lin.determinant() < 0.0;
        for f in 0..brick.face_count() {
            if f == exit || f == entry {
                continue;
            }
            let mut cycle: Vec<usize> = brick
                .face_vertices(f)
                .iter()
                .map(|&v| map[k * nv + v])
                .collect();
            if mirrored {
                cycle.reverse();
            }
            faces.push(cycle);
        }
    }
    Surface::build(points, faces).expect("closed ring assembles into a torus")
}

// ----- great dodecahedron -----

/// The great dodecahedron: twelve unit-edge pentagons spanning the neighbor
/// rings of an icosahedron's vertices. Properly self-intersecting, Euler
/// characteristic -6, genus 4.
pub fn great_dodecahedron() -> Surface {
    let mut verts: Vec<Point3<f64>> = Vec::new();
    for s1 in [1.0f64, -1.0] {
        for s2 in [1.0f64, -1.0] {
            for v in cyclic_perms(Vector3::new(0.0, s1, s2 * PHI)) {
                verts.push(Point3::from(v / 2.0));
            }
        }
    }
    let mut faces = Vec::new();
    for v in 0..12 {
        let mut ring: Vec<usize> = (0..12)
            .filter(|&w| w != v && ((verts[w] - verts[v]).norm() - 1.0).abs() < 1e-9)
            .collect();
        assert_eq!(ring.len(), 5);
        let axis = verts[v].coords;
        order_ccw(&verts, &mut ring, &axis);
        faces.push(ring);
    }
    let oriented = orient_faces(&faces).expect("the great dodecahedron is orientable");
    // Fix the global mirror: the first face should look outward.
    let s = Surface::build(verts.clone(), oriented.clone()).unwrap();
    if s.face_normal(0).dot(&s.face_centroid(0).coords) < 0.0 {
        let flipped: Vec<Vec<usize>> = oriented
            .into_iter()
            .map(|mut c| {
                c.reverse();
                c
            })
            .collect();
        Surface::build(verts, flipped).unwrap()
    } else {
        s
    }
}

// ----- combinatorial ring of stacked dodecahedra -----

/// A straight column of `n` dodecahedra glued on opposite facets, with the
/// two open ends identified. The result is a flat torus combinatorially
/// (every face has vertex degrees 3,3,3,4,4 and zero facial curvature), but
/// the positions cannot respect unit lengths at the wrap seam: this fixture
/// exists to exercise combinatorial searches, not metric validation.
pub fn column_ring(n: usize) -> Surface {
    assert!(n >= 2 && n.is_multiple_of(2), "the wrapped column needs an even brick count");
    let brick = make_solid(SolidKind::Dodecahedron);
    let normals = dodecahedron_normals();
    let top = 0usize;
    let unit = normals[top].normalize();
    let bottom = normals
        .iter()
        .position(|m| (m.normalize() + unit).norm() < 1e-9)
        .expect("facets come in opposite pairs");
    let d = dodec_inradius();
    // Stack translated mirror images: each brick is the previous reflected
    // through the shared facet plane, which keeps facet cycles aligned.
    let nv = brick.vertex_count();
    let mut all_points: Vec<Point3<f64>> = Vec::new();
    for k in 0..n {
        let refl = k % 2 == 1;
        for v in 0..nv {
            let p = brick.position(v).coords;
            let q = if refl { p - 2.0 * unit.dot(&p) * unit } else { p };
            all_points.push(Point3::from(q + (2.0 * d * k as f64) * unit));
        }
    }
    let (points, mut map) = merge_positions(&all_points, 1e-6);
    // Identify the top facet of the last brick with the bottom facet of the
    // first brick (the wrap): redirect those vertex ids.
    let top_local = if (n - 1) % 2 == 1 { bottom } else { top };
    let last_top: Vec<usize> = brick
        .face_vertices(top_local)
        .iter()
        .map(|&v| map[(n - 1) * nv + v])
        .collect();
    let first_bottom: Vec<usize> = brick
        .face_vertices(bottom)
        .iter()
        .map(|&v| map[v])
        .collect();
    // Both rims project to the same pentagon in the plane perpendicular to
    // the stacking axis (n is even, so the last brick is a mirror image with
    // matching rim); identify nearest projections.
    for &lt in &last_top {
        let (best, gap) = first_bottom
            .iter()
            .map(|&fb| {
                let d = points[lt] - points[fb];
                let perp = d - unit.dot(&d) * unit;
                (fb, perp.norm())
            })
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        assert!(gap < 1e-6, "wrap rims misaligned by {gap}");
        for m in map.iter_mut() {
            if *m == lt {
                *m = best;
            }
        }
    }
    let mut faces = Vec::new();
    for k in 0..n {
        let (lo, hi) = if k % 2 == 0 { (bottom, top) } else { (top, bottom) };
        let mirrored = k % 2 == 1;
        for f in 0..brick.face_count() {
            if f == lo || f == hi {
                continue;
            }
            let mut cycle: Vec<usize> = brick
                .face_vertices(f)
                .iter()
                .map(|&v| map[k * nv + v])
                .collect();
            if mirrored {
                cycle.reverse();
            }
            faces.push(cycle);
        }
    }
    // Drop unreferenced positions left by the wrap identification.
    let used: std::collections::BTreeSet<usize> = faces.iter().flatten().copied().collect();
    let mut remap = vec![usize::MAX; points.len()];
    let mut final_points = Vec::new();
    for u in used {
        remap[u] = final_points.len();
        final_points.push(points[u]);
    }
    let faces = faces
        .into_iter()
        .map(|c| c.into_iter().map(|v| remap[v]).collect())
        .collect();
    Surface::build(final_points, faces).expect("wrapped column closes combinatorially")
}

// ----- high-genus tube assemblies -----

/// The three tube assemblies: solids placed at hypercube or cube corners,
/// joined by prismatic tubes through removed faces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssemblyKind {
    /// 16 truncated octahedra joined by 64 hexagonal tubes; every remaining
    /// face is a square.
    TruncOctaFourCube,
    /// 16 truncated cuboctahedra joined by 64 hexagonal tubes; squares and
    /// octagons remain.
    TruncCuboctaFourCube,
    /// 8 truncated cuboctahedra joined by 24 octagonal tubes; squares and
    /// hexagons remain.
    TruncCuboctaThreeCube,
}

struct AssemblyPlan {
    solid: SolidKind,
    port_degree: usize,
    /// Unit directions of the connection axes.
    axes: Vec<Vector3<f64>>,
    /// Center-to-center spacing along each axis.
    spacing: f64,
    dims: usize,
}

fn assembly_plan(kind: AssemblyKind) -> AssemblyPlan {
    let sq2 = f64::sqrt(2.0);
    match kind {
        AssemblyKind::TruncOctaFourCube => AssemblyPlan {
            solid: SolidKind::TruncatedOctahedron,
            port_degree: 6,
            axes: vec![
                Vector3::new(1.0, 1.0, 1.0).normalize(),
                Vector3::new(-1.0, 1.0, 1.0).normalize(),
                Vector3::new(1.0, -1.0, 1.0).normalize(),
                Vector3::new(1.0, 1.0, -1.0).normalize(),
            ],
            // Hexagon planes sit sqrt(3/2) from the center; spacing leaves a
            // unit gap so facing tubes are unit cubes of squares.
            spacing: 2.0 * f64::sqrt(1.5) + 1.0,
            dims: 4,
        },
        AssemblyKind::TruncCuboctaFourCube => AssemblyPlan {
            solid: SolidKind::TruncatedCuboctahedron,
            port_degree: 6,
            axes: vec![
                Vector3::new(1.0, 1.0, 1.0).normalize(),
                Vector3::new(-1.0, 1.0, 1.0).normalize(),
                Vector3::new(1.0, -1.0, 1.0).normalize(),
                Vector3::new(1.0, 1.0, -1.0).normalize(),
            ],
            // Hexagon planes sit sqrt(3)(1+sqrt(2))/2 from the center.
            spacing: f64::sqrt(3.0) * (1.0 + sq2) + 1.0,
            dims: 4,
        },
        AssemblyKind::TruncCuboctaThreeCube => AssemblyPlan {
            solid: SolidKind::TruncatedCuboctahedron,
            port_degree: 8,
            axes: vec![Vector3::x(), Vector3::y(), Vector3::z()],
            // Octagon planes sit (1+2sqrt(2))/2 from the center.
            spacing: 2.0 + 2.0 * sq2,
            dims: 3,
        },
    }
}

/// Port faces of one node, in face-index order.
fn port_faces(solid: &Surface, degree: usize) -> Vec<FaceId> {
    (0..solid.face_count()).filter(|&f| solid.face_degree(f) == degree).collect()
}

/// The built-in tube pairing: along every hypercube edge, the facing ports
/// are joined by a straight tube and the two outward ports by a second tube
/// that passes back through the assembly.
pub fn canonical_pairing(kind: AssemblyKind) -> Vec<(usize, usize)> {
    let plan = assembly_plan(kind);
    let solid = make_solid(plan.solid);
    let ports = port_faces(&solid, plan.port_degree);
    let p = ports.len();
    // Local port index facing +axis / -axis for each axis.
    let mut plus = vec![usize::MAX; plan.axes.len()];
    let mut minus = vec![usize::MAX; plan.axes.len()];
    for (li, &f) in ports.iter().enumerate() {
        let n = solid.face_normal(f);
        for (a, axis) in plan.axes.iter().enumerate() {
            if (n - axis).norm() < 1e-9 {
                plus[a] = li;
            }
            if (n + axis).norm() < 1e-9 {
                minus[a] = li;
            }
        }
    }
    assert!(plus.iter().chain(&minus).all(|&x| x != usize::MAX));
    let nodes = 1usize << plan.dims;
    let mut pairs = Vec::new();
    for w in 0..nodes {
        for a in 0..plan.dims {
            if w & (1 << a) != 0 {
                continue;
            }
            let w2 = w | (1 << a);
            // Facing tube and wrap-around tube for this edge.
            pairs.push((w * p + plus[a], w2 * p + minus[a]));
            pairs.push((w * p + minus[a], w2 * p + plus[a]));
        }
    }
    pairs
}

/// Builds a tube assembly. `pairing` joins global port indices
/// (`node * ports_per_node + local_port`); `None` uses
/// [`canonical_pairing`]. Tube walls are quadrilaterals; ports that do not
/// face each other get stretched, self-crossing tubes, which the surface
/// graph tolerates.
pub fn tube_assembly(
    kind: AssemblyKind,
    pairing: Option<&[(usize, usize)]>,
) -> Result<Surface, GeneratorError> {
    let plan = assembly_plan(kind);
    let solid = make_solid(plan.solid);
    let ports = port_faces(&solid, plan.port_degree);
    let p = ports.len();
    let nodes = 1usize << plan.dims;
    let total_ports = nodes * p;

    let canonical;
    let pairs: &[(usize, usize)] = match pairing {
        Some(x) => x,
        None => {
            canonical = canonical_pairing(kind);
            &canonical
        }
    };
    let mut seen = vec![false; total_ports];
    if pairs.len() * 2 != total_ports {
        return Err(GeneratorError::InvalidPairing {
            reason: format!("{} pairs cannot cover {} ports", pairs.len(), total_ports),
        });
    }
    for &(a, b) in pairs {
        if a >= total_ports || b >= total_ports {
            return Err(GeneratorError::InvalidPairing {
                reason: format!("port index out of range: ({a}, {b})"),
            });
        }
        if a == b {
            return Err(GeneratorError::InvalidPairing {
                reason: format!("port {a} paired with itself"),
            });
        }
        for x in [a, b] {
            if seen[x] {
                return Err(GeneratorError::InvalidPairing {
                    reason: format!("port {x} used twice"),
                });
            }
            seen[x] = true;
        }
    }

    // Place the nodes.
    let nv = solid.vertex_count();
    let mut points = Vec::with_capacity(nodes * nv);
    for w in 0..nodes {
        let mut c = Vector3::zeros();
        for a in 0..plan.dims {
            if w & (1 << a) != 0 {
                c += plan.spacing * plan.axes[a];
            }
        }
        for v in 0..nv {
            points.push(solid.position(v) + c);
        }
    }

    // Faces: all node faces except ports, plus tube walls.
    let mut faces: Vec<Vec<usize>> = Vec::new();
    for w in 0..nodes {
        for f in 0..solid.face_count() {
            if ports.contains(&f) {
                continue;
            }
            faces.push(solid.face_vertices(f).iter().map(|&v| w * nv + v).collect());
        }
    }
    for &(pa, pb) in pairs {
        let (wa, la) = (pa / p, pa % p);
        let (wb, lb) = (pb / p, pb % p);
        let va: Vec<usize> =
            solid.face_vertices(ports[la]).iter().map(|&v| wa * nv + v).collect();
        let vb: Vec<usize> =
            solid.face_vertices(ports[lb]).iter().map(|&v| wb * nv + v).collect();
        let k = va.len();
        // Choose the cyclic offset bringing the two rims closest together.
        let offset = (0..k)
            .min_by(|&o1, &o2| {
                let cost = |o: usize| -> f64 {
                    (0..k)
                        .map(|i| (points[va[i]] - points[vb[(o + k - i) % k]]).norm_squared())
                        .sum()
                };
                cost(o1).partial_cmp(&cost(o2)).unwrap()
            })
            .unwrap();
        let sigma = |i: usize| (offset + k - i % k) % k;
        for i in 0..k {
            faces.push(vec![
                va[i],
                va[(i + 1) % k],
                vb[sigma(i + 1)],
                vb[sigma(i)],
            ]);
        }
    }
    Ok(Surface::build(points, faces)?)
}

/// High-genus assemblies that defeat brick decomposition: truncated solids
/// wired together by square tubes. `pairing` overrides the canonical port
/// wiring; entries index ports globally as `node * ports_per_node + local`.
pub fn counterexample(
    kind: AssemblyKind,
    pairing: Option<&[(usize, usize)]>,
) -> Result<Surface, GeneratorError> {
    tube_assembly(kind, pairing)
}
