//! Decomposition drivers and certificates.
//!
//! A decomposition certificate lists unit-edge bricks (cubes, octagonal
//! prisms, dodecahedra) with rigid placements whose union fills the solid
//! bounded by a surface. The pentagon driver peels seven-face dodecahedral
//! caps guided by vertex curvature; the square/octagon driver works down
//! minimal bigons with octagon removals, corner flips, and brick removals.
//! Both fall back to extracting whole embedded bricks, which is what breaks
//! genus-one rings open. Certificates are checked by an independent
//! verifier that reassembles the brick facets and compares the boundary
//! against the original surface.

use crate::angle::AnglePi;
use crate::bands::{find_minimal_bigon, BandError, BigonKind};
use crate::generators::{make_solid, merge_positions, SolidKind};
use crate::geometry::Isometry;
use crate::surface::{FaceId, Surface, SurfaceError};
use crate::surgery::{
    brick_removal_surgery, cube_flip, fit_region, octagon_removal_surgery, polyhedral_surgery,
    prism_flip, replace_by_complement, SurgeryError, SurgeryOutcome,
};
use nalgebra::{Point3, Vector3};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecomposeError {
    #[error("face {face} has degree {degree}, not five")]
    NotPentagonal { face: FaceId, degree: usize },
    #[error("face {face} has degree {degree}, not four or eight")]
    NotSquareOct { face: FaceId, degree: usize },
    #[error("genus {genus} is out of range for this decomposition")]
    GenusOutOfRange { genus: i64 },
    #[error("no dodecahedral cap or embedded brick found to remove")]
    NoReducibleRegion,
    #[error("no volume-removing flip applies at either turning point")]
    FlipStuck,
    #[error("the certificate failed verification: {issues:?}")]
    VerificationFailed { issues: Vec<VerificationIssue> },
    #[error("degrees {degrees:?} are outside the pentagon families")]
    UnsupportedDegrees { degrees: Vec<usize> },
    #[error(transparent)]
    Band(#[from] BandError),
    #[error(transparent)]
    Surgery(#[from] SurgeryError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// The unit-edge brick shapes decompositions are made of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BrickKind {
    Cube,
    OctagonalPrism,
    Dodecahedron,
}

impl BrickKind {
    pub fn solid(self) -> SolidKind {
        match self {
            BrickKind::Cube => SolidKind::Cube,
            BrickKind::OctagonalPrism => SolidKind::OctagonalPrism,
            BrickKind::Dodecahedron => SolidKind::Dodecahedron,
        }
    }
}

/// One brick of a decomposition: a reference solid under a rigid placement.
#[derive(Debug, Clone)]
pub struct Brick {
    pub kind: BrickKind,
    /// Maps the reference solid's coordinates into world coordinates.
    pub place: Isometry,
}

impl Brick {
    /// The brick's boundary surface in world coordinates.
    pub fn realize(&self) -> Surface {
        let model = make_solid(self.kind.solid());
        let verts: Vec<Point3<f64>> = model
            .positions()
            .iter()
            .map(|&p| self.place.apply_point(p))
            .collect();
        let faces: Vec<Vec<usize>> = (0..model.face_count())
            .map(|f| model.face_vertices(f).to_vec())
            .collect();
        Surface::build(verts, faces).expect("rigid images of bricks are valid")
    }

    /// World position of the brick's center.
    pub fn center(&self) -> Point3<f64> {
        self.place.apply_point(Point3::origin())
    }
}

/// A claimed decomposition of a surface's solid into bricks.
#[derive(Debug, Clone, Default)]
pub struct Certificate {
    pub bricks: Vec<Brick>,
}

impl Certificate {
    pub fn count(&self, kind: BrickKind) -> usize {
        self.bricks.iter().filter(|b| b.kind == kind).count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum VerificationIssue {
    /// The certificate has no bricks but the surface has faces.
    EmptyCertificate,
    /// A brick's placement is not a rigid motion.
    ImproperPlacement { brick: usize },
    /// Two brick facets coincide with the same winding: bricks overlap.
    OverlappingBricks { brick_a: usize, brick_b: usize },
    /// The uncancelled facets do not form a closed surface.
    UnionNotClosed { reason: String },
    /// The reassembled boundary has the wrong number of faces.
    FaceCountMismatch { union: usize, surface: usize },
    /// A face of one side has no positional twin on the other.
    UnmatchedFace,
}

/// Outcome of checking a certificate against a surface.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub brick_count: usize,
    pub cubes: usize,
    pub prisms: usize,
    pub dodecahedra: usize,
    /// Facet pairs shared between neighboring bricks.
    pub interface_pairs: usize,
    pub issues: Vec<VerificationIssue>,
}

impl VerificationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

fn polygon_key(cycle: &[usize]) -> Vec<usize> {
    let mut key = cycle.to_vec();
    key.sort_unstable();
    key
}

fn canonical_cycle(cycle: &[usize]) -> Vec<usize> {
    let n = cycle.len();
    let mut best: Option<Vec<usize>> = None;
    for r in 0..n {
        let rot: Vec<usize> = (0..n).map(|i| cycle[(r + i) % n]).collect();
        if best.as_ref().is_none_or(|b| rot < *b) {
            best = Some(rot);
        }
    }
    best.unwrap()
}

/// Checks that the bricks of `cert` tile the solid bounded by `s`: brick
/// facets must cancel in matched interior pairs and the leftover boundary
/// must coincide with `s`, face for face. The check reassembles the facets
/// from scratch and never consults the decomposition machinery.
pub fn verify_certificate(s: &Surface, cert: &Certificate, eps: f64) -> VerificationReport {
    let mut report = VerificationReport {
        brick_count: cert.bricks.len(),
        cubes: cert.count(BrickKind::Cube),
        prisms: cert.count(BrickKind::OctagonalPrism),
        dodecahedra: cert.count(BrickKind::Dodecahedron),
        interface_pairs: 0,
        issues: Vec::new(),
    };
    if cert.bricks.is_empty() {
        if s.face_count() != 0 {
            report.issues.push(VerificationIssue::EmptyCertificate);
        }
        return report;
    }
    for (i, brick) in cert.bricks.iter().enumerate() {
        let l = brick.place.linear;
        let gram = l.transpose() * l;
        if (gram - nalgebra::Matrix3::identity()).norm() > 1e-6 {
            report
                .issues
                .push(VerificationIssue::ImproperPlacement { brick: i });
        }
    }
    if !report.issues.is_empty() {
        return report;
    }

    // Facet soup in world coordinates, tagged by owning brick.
    let mut points: Vec<Point3<f64>> = Vec::new();
    let mut facets: Vec<(usize, Vec<usize>)> = Vec::new();
    for (i, brick) in cert.bricks.iter().enumerate() {
        let model = make_solid(brick.kind.solid());
        let base = points.len();
        points.extend(
            model
                .positions()
                .iter()
                .map(|&p| brick.place.apply_point(p)),
        );
        for f in 0..model.face_count() {
            let cyc: Vec<usize> = model.face_vertices(f).iter().map(|&v| base + v).collect();
            facets.push((i, cyc));
        }
    }
    let (merged, remap) = merge_positions(&points, eps);
    for (_, cyc) in facets.iter_mut() {
        for v in cyc.iter_mut() {
            *v = remap[*v];
        }
    }

    // Cancel interior pairs: same vertex set, opposite winding. Same-set
    // same-winding facets mean two bricks occupy space on the same side.
    let mut by_set: std::collections::BTreeMap<Vec<usize>, Vec<usize>> =
        std::collections::BTreeMap::new();
    for (i, (_, cyc)) in facets.iter().enumerate() {
        by_set.entry(polygon_key(cyc)).or_default().push(i);
    }
    let mut dropped = vec![false; facets.len()];
    for idxs in by_set.values() {
        if idxs.len() == 1 {
            continue;
        }
        for a in 0..idxs.len() {
            if dropped[idxs[a]] {
                continue;
            }
            for b in a + 1..idxs.len() {
                if dropped[idxs[b]] {
                    continue;
                }
                let ca = canonical_cycle(&facets[idxs[a]].1);
                let mut rev = facets[idxs[b]].1.clone();
                rev.reverse();
                if ca == canonical_cycle(&rev) {
                    dropped[idxs[a]] = true;
                    dropped[idxs[b]] = true;
                    report.interface_pairs += 1;
                    break;
                } else if ca == canonical_cycle(&facets[idxs[b]].1) {
                    report.issues.push(VerificationIssue::OverlappingBricks {
                        brick_a: facets[idxs[a]].0,
                        brick_b: facets[idxs[b]].0,
                    });
                    return report;
                }
            }
        }
    }
    let boundary: Vec<Vec<usize>> = facets
        .iter()
        .enumerate()
        .filter(|(i, _)| !dropped[*i])
        .map(|(_, (_, cyc))| cyc.clone())
        .collect();

    // The leftover facets must close up into a surface on their own.
    let union = {
        let mut used = vec![false; merged.len()];
        for cyc in &boundary {
            for &v in cyc {
                used[v] = true;
            }
        }
        let mut remap = vec![usize::MAX; merged.len()];
        let mut compact = Vec::new();
        for (i, &u) in used.iter().enumerate() {
            if u {
                remap[i] = compact.len();
                compact.push(merged[i]);
            }
        }
        let faces: Vec<Vec<usize>> = boundary
            .iter()
            .map(|cyc| cyc.iter().map(|&v| remap[v]).collect())
            .collect();
        match Surface::build(compact, faces) {
            Ok(u) => u,
            Err(e) => {
                report.issues.push(VerificationIssue::UnionNotClosed {
                    reason: e.to_string(),
                });
                return report;
            }
        }
    };

    if union.face_count() != s.face_count() {
        report.issues.push(VerificationIssue::FaceCountMismatch {
            union: union.face_count(),
            surface: s.face_count(),
        });
        return report;
    }
    // Match faces positionally, one to one, with matching winding.
    let mut taken = vec![false; s.face_count()];
    'union_faces: for uf in 0..union.face_count() {
        let ucyc: Vec<Point3<f64>> = union
            .face_vertices(uf)
            .iter()
            .map(|&v| union.position(v))
            .collect();
        let uc = union.face_centroid(uf);
        for (sf, sf_taken) in taken.iter_mut().enumerate() {
            if *sf_taken || s.face_degree(sf) != ucyc.len() {
                continue;
            }
            if (s.face_centroid(sf) - uc).norm() > eps * 10.0 {
                continue;
            }
            let scyc: Vec<Point3<f64>> = s
                .face_vertices(sf)
                .iter()
                .map(|&v| s.position(v))
                .collect();
            let n = ucyc.len();
            for shift in 0..n {
                if (0..n).all(|i| (ucyc[i] - scyc[(i + shift) % n]).norm() <= eps * 10.0) {
                    *sf_taken = true;
                    continue 'union_faces;
                }
            }
        }
        report.issues.push(VerificationIssue::UnmatchedFace);
        return report;
    }
    report
}

// ----- shared driver machinery -----

fn genus_in(s: &Surface, allowed: &[i64]) -> Result<(), DecomposeError> {
    let genus = s.genus()?;
    if allowed.contains(&genus) {
        Ok(())
    } else {
        Err(DecomposeError::GenusOutOfRange { genus })
    }
}

/// Grows the largest face region around `seed` that fits onto one placement
/// of `model`, adding lowest-index neighbors first.
fn grow_brick_region(s: &Surface, seed: FaceId, model: &Surface, eps: f64) -> Vec<FaceId> {
    let mut region = vec![seed];
    if fit_region(s, &region, model, eps).is_none() {
        return Vec::new();
    }
    loop {
        let mut frontier: BTreeSet<FaceId> = BTreeSet::new();
        for &f in &region {
            for g in s.face_neighbors(f) {
                if !region.contains(&g) {
                    frontier.insert(g);
                }
            }
        }
        let mut grew = false;
        for g in frontier {
            region.push(g);
            if fit_region(s, &region, model, eps).is_some() {
                grew = true;
                break;
            }
            region.pop();
        }
        if !grew {
            return region;
        }
    }
}

/// Finds a whole embedded brick: a maximal region fitting one placement of a
/// brick solid, leaving at most two facets uncovered (its interfaces).
/// Replacing the region by those facets removes the brick; this is the move
/// that opens genus-one rings.
fn extract_whole_brick(
    s: &Surface,
    kinds: &[BrickKind],
    eps: f64,
) -> Option<(SurgeryOutcome, BrickKind)> {
    for seed in 0..s.face_count() {
        for &kind in kinds {
            let model = make_solid(kind.solid());
            let region = grow_brick_region(s, seed, &model, eps);
            if region.is_empty() {
                continue;
            }
            let uncovered = model.face_count() - region.len();
            if uncovered > 2 {
                continue;
            }
            match replace_by_complement(s, &region, &model, eps) {
                Ok(out) if out.removed_volume => return Some((out, kind)),
                _ => continue,
            }
        }
    }
    None
}

fn record_brick(bricks: &mut Vec<Brick>, kind: BrickKind, out: &SurgeryOutcome) {
    let place = out
        .model_to_world
        .expect("brick surgeries fit a model");
    bricks.push(Brick { kind, place });
}

// ----- pentagon decomposition -----

/// Finds a face whose vertices all have degree three, takes it with its five
/// neighbors plus one second-generation face, and replaces those seven faces
/// by the five remaining facets of a dodecahedron.
fn try_pent_cap(s: &Surface, eps: f64) -> Option<SurgeryOutcome> {
    for f in 0..s.face_count() {
        if !s
            .face_vertices(f)
            .iter()
            .all(|&v| s.vertex_degree(v) == 3)
        {
            continue;
        }
        let gen1 = s.face_generations(f, 1);
        if gen1.len() != 5 {
            continue;
        }
        let mut region = vec![f];
        region.extend(gen1.iter().copied());
        // Second-generation candidates share edges with two cap neighbors.
        let mut second: Vec<FaceId> = Vec::new();
        for &g in &gen1 {
            for n in s.face_neighbors(g) {
                if !region.contains(&n) && !second.contains(&n) {
                    let touches = gen1
                        .iter()
                        .filter(|&&g2| s.face_neighbors(n).contains(&g2))
                        .count();
                    if touches >= 2 {
                        second.push(n);
                    }
                }
            }
        }
        second.sort_unstable();
        for h in second {
            let mut cap = region.clone();
            cap.push(h);
            match polyhedral_surgery(s, &cap, SolidKind::Dodecahedron, eps) {
                Ok(out) if out.removed_volume => return Some(out),
                _ => continue,
            }
        }
    }
    None
}

/// Decomposes the solid bounded by a surface of unit pentagons into
/// dodecahedra. Handles genus zero and one; the certificate is verified
/// before being returned.
pub fn decompose_pent(s: &Surface, eps: f64) -> Result<Certificate, DecomposeError> {
    genus_in(s, &[0, 1])?;
    for f in 0..s.face_count() {
        if s.face_degree(f) != 5 {
            return Err(DecomposeError::NotPentagonal {
                face: f,
                degree: s.face_degree(f),
            });
        }
    }
    let mut work = s.clone();
    let mut bricks = Vec::new();
    let mut guard = 0usize;
    while work.face_count() > 0 {
        guard += 1;
        if guard > 100_000 {
            return Err(DecomposeError::NoReducibleRegion);
        }
        if let Some(out) = try_pent_cap(&work, eps) {
            record_brick(&mut bricks, BrickKind::Dodecahedron, &out);
            work = out.surface;
            continue;
        }
        if let Some((out, kind)) = extract_whole_brick(&work, &[BrickKind::Dodecahedron], eps) {
            record_brick(&mut bricks, kind, &out);
            work = out.surface;
            continue;
        }
        return Err(DecomposeError::NoReducibleRegion);
    }
    let cert = Certificate { bricks };
    let report = verify_certificate(s, &cert, eps);
    if !report.is_valid() {
        return Err(DecomposeError::VerificationFailed {
            issues: report.issues,
        });
    }
    Ok(cert)
}

// ----- square and octagon decomposition -----

/// Unit prism placements for the segments of a height-`k` prism tower whose
/// placement in the world is `tower_place`.
fn tower_segments(tower_place: &Isometry, k: usize) -> Vec<Isometry> {
    // The reference prism spans z in [-1/2, 1/2] with rim phase zero; tower
    // segment j spans z in [j, j+1] with rim phase an eighth-turn ahead.
    (0..k)
        .map(|j| {
            let lift = Isometry::translation(Vector3::new(0.0, 0.0, j as f64 + 0.5)).compose(
                &Isometry::rotation_about_axis(
                    Point3::origin(),
                    Vector3::z(),
                    std::f64::consts::PI / 8.0,
                ),
            );
            tower_place.compose(&lift)
        })
        .collect()
}

/// Attempts a volume-removing flip at a degree-three corner of face `t`.
fn try_flip_at(
    s: &Surface,
    t: FaceId,
    eps: f64,
) -> Option<(SurgeryOutcome, BrickKind)> {
    for &v in s.face_vertices(t) {
        if s.vertex_degree(v) != 3 {
            continue;
        }
        let fs = s.vertex_faces(v);
        if fs.len() != 3 {
            continue;
        }
        let octs: Vec<FaceId> = fs.iter().copied().filter(|&f| s.face_degree(f) == 8).collect();
        let squares: Vec<FaceId> = fs.iter().copied().filter(|&f| s.face_degree(f) == 4).collect();
        if octs.is_empty() && squares.len() == 3 {
            if let Ok(out) = cube_flip(s, [fs[0], fs[1], fs[2]], eps) {
                if out.removed_volume {
                    return Some((out, BrickKind::Cube));
                }
            }
        } else if octs.len() == 1 && squares.len() == 2 {
            // Extend the two rim squares at this corner to a run of four
            // consecutive rim squares of the octagon.
            let o = octs[0];
            let rim: Vec<FaceId> = s
                .face_halfedges(o)
                .iter()
                .map(|&h| s.halfedge(s.halfedge(h).twin).face)
                .collect();
            let Some(i) = rim.iter().position(|&f| f == squares[0]) else {
                continue;
            };
            let Some(j) = rim.iter().position(|&f| f == squares[1]) else {
                continue;
            };
            let n = rim.len();
            let lead = if (i + 1) % n == j { i } else { j };
            for start_back in 0..3usize {
                let start = (lead + n - start_back) % n;
                let mut half = vec![o];
                half.extend((0..4).map(|step| rim[(start + step) % n]));
                let distinct: BTreeSet<FaceId> = half.iter().copied().collect();
                if distinct.len() != 5 {
                    continue;
                }
                if let Ok(out) = prism_flip(s, &half, eps) {
                    if out.removed_volume {
                        return Some((out, BrickKind::OctagonalPrism));
                    }
                }
            }
        }
    }
    None
}

/// Decomposes the solid bounded by a surface of unit squares and octagons
/// into cubes and octagonal prisms. Handles genus zero and one; the
/// certificate is verified before being returned.
pub fn decompose_square_oct(s: &Surface, eps: f64) -> Result<Certificate, DecomposeError> {
    genus_in(s, &[0, 1])?;
    for f in 0..s.face_count() {
        let d = s.face_degree(f);
        if d != 4 && d != 8 {
            return Err(DecomposeError::NotSquareOct { face: f, degree: d });
        }
    }
    let mut work = s.clone();
    let mut bricks = Vec::new();
    let mut guard = 0usize;
    while work.face_count() > 0 {
        guard += 1;
        if guard > 100_000 {
            return Err(DecomposeError::FlipStuck);
        }
        // Bare bricks and ring segments first: components that fit whole
        // reference solids come off directly.
        if let Some((out, kind)) = extract_whole_brick(
            &work,
            &[BrickKind::Cube, BrickKind::OctagonalPrism],
            eps,
        ) {
            record_brick(&mut bricks, kind, &out);
            work = out.surface;
            continue;
        }
        let bigon = match find_minimal_bigon(&work, eps) {
            Ok(b) => b,
            Err(BandError::NoBigon) => return Err(DecomposeError::FlipStuck),
            Err(e) => return Err(e.into()),
        };
        match bigon.kind {
            BigonKind::Octagon => {
                let out = octagon_removal_surgery(&work, &bigon, eps)?;
                let place = out
                    .model_to_world
                    .expect("octagon removal fits a tower");
                let [o1, o2] = bigon.turning_faces(&work);
                let k = (work.face_centroid(o1) - work.face_centroid(o2))
                    .norm()
                    .round() as usize;
                for seg in tower_segments(&place, k) {
                    bricks.push(Brick {
                        kind: BrickKind::OctagonalPrism,
                        place: seg,
                    });
                }
                work = out.surface;
            }
            BigonKind::Square | BigonKind::Mixed => {
                let [t1, t2] = bigon.turning_faces(&work);
                let has_bridge = bigon
                    .cycle_faces(&work)
                    .into_iter()
                    .filter(|&f| f != t1 && f != t2)
                    .any(|f| {
                        let nb = work.face_neighbors(f);
                        nb.contains(&t1) && nb.contains(&t2)
                    });
                if has_bridge {
                    let bridge = bigon
                        .cycle_faces(&work)
                        .into_iter()
                        .filter(|&f| f != t1 && f != t2)
                        .filter(|&f| {
                            let nb = work.face_neighbors(f);
                            nb.contains(&t1) && nb.contains(&t2)
                        })
                        .min()
                        .unwrap();
                    let kind = if work.face_degree(bridge) == 8 {
                        BrickKind::OctagonalPrism
                    } else {
                        BrickKind::Cube
                    };
                    let out = brick_removal_surgery(&work, &bigon, eps)?;
                    record_brick(&mut bricks, kind, &out);
                    work = out.surface;
                } else if let Some((out, kind)) =
                    try_flip_at(&work, t1, eps).or_else(|| try_flip_at(&work, t2, eps))
                {
                    record_brick(&mut bricks, kind, &out);
                    work = out.surface;
                } else {
                    return Err(DecomposeError::FlipStuck);
                }
            }
        }
    }
    let cert = Certificate { bricks };
    let report = verify_certificate(s, &cert, eps);
    if !report.is_valid() {
        return Err(DecomposeError::VerificationFailed {
            issues: report.issues,
        });
    }
    Ok(cert)
}

// ----- curvature audit for pentagon families -----

/// The largest curvature a degree-`n` face can gather together with its
/// edge-neighbors in a surface of unit pentagons and unit `n`-gons.
pub fn regional_curvature_bound(n: usize) -> AnglePi {
    // 13/3 - 19n/30, in units of pi.
    AnglePi::new(130 - 19 * n as i64, 30)
}

/// Curvature audit of a surface built from unit pentagons and unit
/// `n`-gons.
#[derive(Debug, Clone)]
pub struct AuditReport {
    /// The non-pentagon degree present, if any.
    pub n: Option<usize>,
    pub pentagon_count: usize,
    pub ngon_count: usize,
    /// Vertex degree profiles found at positive-curvature vertices, with
    /// multiplicities.
    pub positive_vertex_types: Vec<(Vec<usize>, usize)>,
    /// Closed-form cap on any `n`-gon's regional curvature.
    pub regional_bound: Option<AnglePi>,
    /// The largest regional curvature actually present at an `n`-gon.
    pub max_regional_curvature: Option<AnglePi>,
    /// Whether a genus-zero surface of this face mix can exist: the sphere
    /// needs positive total curvature, but every region around an `n`-gon
    /// tops out below zero.
    pub genus_zero_feasible: bool,
}

/// Audits vertex curvatures of a surface of unit pentagons mixed with unit
/// `n`-gons (7 <= n <= 10). Reaching total curvature `4 pi` needs positive
/// regions, and each `n`-gon caps its region's curvature at a closed-form
/// bound; the report collects both sides of that comparison.
pub fn curvature_audit_5n(s: &Surface) -> Result<AuditReport, DecomposeError> {
    let mut degrees: BTreeSet<usize> = BTreeSet::new();
    for f in 0..s.face_count() {
        degrees.insert(s.face_degree(f));
    }
    let extra: Vec<usize> = degrees.iter().copied().filter(|&d| d != 5).collect();
    if extra.len() > 1 || extra.iter().any(|&d| !(7..=10).contains(&d)) {
        return Err(DecomposeError::UnsupportedDegrees {
            degrees: degrees.into_iter().collect(),
        });
    }
    let n = extra.first().copied();
    let pentagon_count = (0..s.face_count()).filter(|&f| s.face_degree(f) == 5).count();
    let ngon_count = s.face_count() - pentagon_count;

    let mut type_counts: std::collections::BTreeMap<Vec<usize>, usize> =
        std::collections::BTreeMap::new();
    for v in 0..s.vertex_count() {
        if s.vertex_curvature(v).is_positive() {
            *type_counts.entry(s.vertex_type(v)).or_insert(0) += 1;
        }
    }
    let positive_vertex_types: Vec<(Vec<usize>, usize)> = type_counts.into_iter().collect();

    let regional_bound = n.map(regional_curvature_bound);
    let max_regional_curvature = n.map(|n| {
        (0..s.face_count())
            .filter(|&f| s.face_degree(f) == n)
            .map(|f| {
                s.facial_curvature(f)
                    + s.face_generations(f, 1)
                        .into_iter()
                        .map(|g| s.facial_curvature(g))
                        .sum::<AnglePi>()
            })
            .max_by(|a, b| a.rational().cmp(&b.rational()))
            .expect("ngon_count > 0 when n is present")
    });
    let genus_zero_feasible = match regional_bound {
        None => true,
        Some(bound) => ngon_count == 0 || bound.is_positive(),
    };
    Ok(AuditReport {
        n,
        pentagon_count,
        ngon_count,
        positive_vertex_types,
        regional_bound,
        max_regional_curvature,
        genus_zero_feasible,
    })
}
