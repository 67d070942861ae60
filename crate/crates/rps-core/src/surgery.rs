//! Polyhedral surgery: cutting regions out of a surface and regluing the
//! complementary part of a reference brick.
//!
//! All operations share one engine: a region of faces is rigidly fitted onto
//! facets of a reference solid, the region is deleted, and the solid's
//! remaining facets are glued into the hole (wound so the surface stays
//! orientable). Any face of the result that coincides with another face of
//! opposite orientation encloses no volume; such pairs cancel until none
//! remain. Band surgery is the one exception: it deletes a closed belt of
//! squares and slides one hemisphere onto the other instead of capping.

use crate::bands::{Band, BandError, Bigon, BigonKind};
use crate::generators::{make_solid, merge_positions, prism_tower, SolidKind};
use crate::geometry::{isometry_from_correspondence, Isometry};
use crate::surface::{EdgeId, FaceId, Surface, SurfaceError, VertexId};
use nalgebra::Point3;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SurgeryError {
    #[error("cutting along the cycle does not split the surface in two")]
    NonSeparating,
    #[error("region boundary is not a single simple cycle: {reason}")]
    BoundaryMismatch { reason: &'static str },
    #[error("no rigid fit of the region onto the reference solid")]
    NoIsometry,
    #[error("band passes through degree-eight face {face}")]
    BandHasOctagon { face: FaceId },
    #[error("surgery would reduce the surface below a valid closed shape")]
    OverReduction,
    #[error("bigon interior does not have prism structure at face {face}")]
    NotPrismStructured { face: FaceId },
    #[error("operation requires an octagon bigon")]
    WrongKind,
    #[error("the surface is a single brick; removal would leave nothing")]
    SingleBrick,
    #[error("no cycle face is adjacent to both turning points")]
    NoBridgingFace,
    #[error("faces do not form three squares around a cube corner")]
    NotCubeCorner,
    #[error("faces do not form half of an octagonal prism")]
    NotPrismHalf,
    #[error(transparent)]
    Band(#[from] BandError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// Result of a surgery: the new surface plus bookkeeping for face-count
/// accounting and brick extraction.
#[derive(Debug, Clone)]
pub struct SurgeryOutcome {
    pub surface: Surface,
    /// Coincident opposite-orientation face pairs cancelled during regluing.
    pub absorbed_pairs: usize,
    /// Faces of `surface` that came from the reference solid's complement.
    pub new_faces: Vec<FaceId>,
    /// Placement of the reference solid in world coordinates, when the
    /// surgery fitted one (model point -> world point).
    pub model_to_world: Option<Isometry>,
    /// True when the region was wound outward around the fitted solid, so
    /// the surgery removed that volume; false when it filled a notch.
    pub removed_volume: bool,
}

/// One side of a surface cut along a separating edge cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hemisphere {
    pub faces: Vec<FaceId>,
}

/// Splits the faces of `s` along the given edges. The cut must leave exactly
/// two connected groups of faces.
pub fn cut_along_cycle(
    s: &Surface,
    cut_edges: &[EdgeId],
) -> Result<(Hemisphere, Hemisphere), SurgeryError> {
    let barrier: BTreeSet<EdgeId> = cut_edges.iter().copied().collect();
    let mut comp = vec![usize::MAX; s.face_count()];
    let mut groups: Vec<Vec<FaceId>> = Vec::new();
    for f0 in 0..s.face_count() {
        if comp[f0] != usize::MAX {
            continue;
        }
        let id = groups.len();
        comp[f0] = id;
        let mut stack = vec![f0];
        let mut members = Vec::new();
        while let Some(f) = stack.pop() {
            members.push(f);
            for h in s.face_halfedges(f) {
                if barrier.contains(&s.edge_of(h)) {
                    continue;
                }
                let g = s.halfedge(s.halfedge(h).twin).face;
                if comp[g] == usize::MAX {
                    comp[g] = id;
                    stack.push(g);
                }
            }
        }
        members.sort_unstable();
        groups.push(members);
    }
    if groups.len() != 2 {
        return Err(SurgeryError::NonSeparating);
    }
    let second = groups.pop().unwrap();
    let first = groups.pop().unwrap();
    Ok((Hemisphere { faces: first }, Hemisphere { faces: second }))
}

// ----- shared rebuilding machinery -----

/// Drops unused positions and builds a surface from a face list. An empty
/// face list builds an empty surface.
pub(crate) fn rebuild(
    positions: &[Point3<f64>],
    faces: &[Vec<usize>],
) -> Result<Surface, SurfaceError> {
    let mut used = vec![false; positions.len()];
    for face in faces {
        for &v in face {
            used[v] = true;
        }
    }
    let mut remap = vec![usize::MAX; positions.len()];
    let mut compact = Vec::new();
    for (i, &u) in used.iter().enumerate() {
        if u {
            remap[i] = compact.len();
            compact.push(positions[i]);
        }
    }
    let faces: Vec<Vec<usize>> = faces
        .iter()
        .map(|face| face.iter().map(|&v| remap[v]).collect())
        .collect();
    Surface::build(compact, faces)
}

fn canonical_rotation(cycle: &[usize]) -> Vec<usize> {
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

/// Cancels pairs of faces with the same vertex set and opposite winding.
/// Such a pair bounds no volume: deleting both and stitching their
/// neighborhoods is the combinatorial removal of dangling faces. Returns the
/// number of pairs removed; `tags` is kept parallel to `faces`.
pub(crate) fn cancel_coincident_pairs(faces: &mut Vec<Vec<usize>>, tags: &mut Vec<bool>) -> usize {
    let mut pairs = 0;
    loop {
        let mut by_set: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (i, face) in faces.iter().enumerate() {
            let mut key = face.clone();
            key.sort_unstable();
            by_set.entry(key).or_default().push(i);
        }
        let mut cancel: Option<(usize, usize)> = None;
        'outer: for idxs in by_set.values() {
            if idxs.len() < 2 {
                continue;
            }
            for a in 0..idxs.len() {
                for b in a + 1..idxs.len() {
                    let fa = &faces[idxs[a]];
                    let fb = &faces[idxs[b]];
                    if fa.len() != fb.len() {
                        continue;
                    }
                    let mut rev = fb.clone();
                    rev.reverse();
                    if canonical_rotation(fa) == canonical_rotation(&rev) {
                        cancel = Some((idxs[a], idxs[b]));
                        break 'outer;
                    }
                }
            }
        }
        match cancel {
            Some((i, j)) => {
                faces.remove(j);
                faces.remove(i);
                tags.remove(j);
                tags.remove(i);
                pairs += 1;
            }
            None => return pairs,
        }
    }
}

// ----- fitting a region onto a reference solid -----

pub(crate) struct RegionFit {
    /// Model facet matched by each region face.
    pub(crate) matched_facets: BTreeSet<FaceId>,
    /// Model vertex -> surface vertex, over the region.
    pub(crate) model_to_surface: BTreeMap<usize, VertexId>,
    /// Whether region faces carry the same winding as the model facets.
    pub(crate) aligned: bool,
    /// Maps surface coordinates into model coordinates.
    pub(crate) iso: Isometry,
}

fn find_model_vertex(model: &Surface, p: Point3<f64>, eps: f64) -> Option<usize> {
    (0..model.vertex_count()).find(|&w| (model.position(w) - p).norm() <= eps)
}

/// Checks whether `iso` maps every region face onto a model facet with a
/// uniform winding relation.
fn check_fit(
    s: &Surface,
    region: &[FaceId],
    model: &Surface,
    iso: &Isometry,
    flipped: bool,
    eps: f64,
) -> Option<RegionFit> {
    let mut vmap: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut inverse: BTreeMap<usize, VertexId> = BTreeMap::new();
    for &f in region {
        for &v in s.face_vertices(f) {
            if vmap.contains_key(&v) {
                continue;
            }
            let w = find_model_vertex(model, iso.apply_point(s.position(v)), eps)?;
            if inverse.insert(w, v).is_some() {
                return None;
            }
            vmap.insert(v, w);
        }
    }
    let mut facet_by_set: BTreeMap<Vec<usize>, FaceId> = BTreeMap::new();
    for mf in 0..model.face_count() {
        let mut key: Vec<usize> = model.face_vertices(mf).to_vec();
        key.sort_unstable();
        facet_by_set.insert(key, mf);
    }
    let mut matched = BTreeSet::new();
    for &f in region {
        let image: Vec<usize> = s.face_vertices(f).iter().map(|v| vmap[v]).collect();
        let mut key = image.clone();
        key.sort_unstable();
        let &mf = facet_by_set.get(&key)?;
        let facet = model.face_vertices(mf).to_vec();
        let mut rev = image.clone();
        rev.reverse();
        let face_flipped = if canonical_rotation(&image) == canonical_rotation(&facet) {
            false
        } else if canonical_rotation(&rev) == canonical_rotation(&facet) {
            true
        } else {
            return None;
        };
        if face_flipped != flipped {
            return None;
        }
        if !matched.insert(mf) {
            return None;
        }
    }
    Some(RegionFit {
        matched_facets: matched,
        model_to_surface: inverse,
        aligned: !flipped,
        iso: *iso,
    })
}

/// Finds a rigid motion (reflections allowed) carrying the region onto
/// facets of the model solid, vertex for vertex.
pub(crate) fn fit_region(
    s: &Surface,
    region: &[FaceId],
    model: &Surface,
    eps: f64,
) -> Option<RegionFit> {
    let r0 = region[0];
    let cyc0 = s.face_vertices(r0);
    let d0 = cyc0.len();
    let src: Vec<Point3<f64>> = cyc0.iter().map(|&v| s.position(v)).collect();
    for m0 in 0..model.face_count() {
        let mcyc = model.face_vertices(m0);
        if mcyc.len() != d0 {
            continue;
        }
        for rot in 0..d0 {
            for flip in [false, true] {
                let tgt: Vec<Point3<f64>> = (0..d0)
                    .map(|j| {
                        let k = if flip { (rot + d0 - j) % d0 } else { (rot + j) % d0 };
                        model.position(mcyc[k])
                    })
                    .collect();
                let Ok(base) = isometry_from_correspondence(&src, &tgt, eps) else {
                    continue;
                };
                // A single face pins the motion only up to reflection
                // through its plane; try both sides.
                let refl = Isometry::reflection_through_plane(
                    model.face_centroid(m0),
                    model.face_normal(m0),
                );
                for iso in [base, refl.compose(&base)] {
                    if let Some(fit) = check_fit(s, region, model, &iso, flip, eps) {
                        return Some(fit);
                    }
                }
            }
        }
    }
    None
}

/// Core engine: deletes `region` and glues in the model's unmatched facets,
/// cancelling coincident opposite-orientation pairs.
pub(crate) fn replace_by_complement(
    s: &Surface,
    region: &[FaceId],
    model: &Surface,
    eps: f64,
) -> Result<SurgeryOutcome, SurgeryError> {
    let region_set: BTreeSet<FaceId> = region.iter().copied().collect();
    if region_set.len() != region.len() || region.is_empty() {
        return Err(SurgeryError::NoIsometry);
    }
    let fit = fit_region(s, region, model, eps).ok_or(SurgeryError::NoIsometry)?;
    let inv = fit.iso.inverse();

    let mut positions: Vec<Point3<f64>> = s.positions().to_vec();
    let mut model_vertex: BTreeMap<usize, usize> = fit.model_to_surface.clone();
    let mut faces: Vec<Vec<usize>> = Vec::new();
    let mut tags: Vec<bool> = Vec::new();
    for f in 0..s.face_count() {
        if !region_set.contains(&f) {
            faces.push(s.face_vertices(f).to_vec());
            tags.push(false);
        }
    }
    for mf in 0..model.face_count() {
        if fit.matched_facets.contains(&mf) {
            continue;
        }
        let mut cyc: Vec<usize> = model
            .face_vertices(mf)
            .iter()
            .map(|&w| {
                *model_vertex.entry(w).or_insert_with(|| {
                    positions.push(inv.apply_point(model.position(w)));
                    positions.len() - 1
                })
            })
            .collect();
        // The cap closes the hole from the same side the region did: when
        // the region matched the model's winding, the complement must be
        // wound the other way, and vice versa.
        if fit.aligned {
            cyc.reverse();
        }
        faces.push(cyc);
        tags.push(true);
    }

    let (merged, remap) = merge_positions(&positions, eps);
    for face in &mut faces {
        for v in face.iter_mut() {
            *v = remap[*v];
        }
    }
    let absorbed_pairs = cancel_coincident_pairs(&mut faces, &mut tags);
    let surface = rebuild(&merged, &faces)?;
    let new_faces = tags
        .iter()
        .enumerate()
        .filter_map(|(i, &t)| t.then_some(i))
        .collect();
    Ok(SurgeryOutcome {
        surface,
        absorbed_pairs,
        new_faces,
        model_to_world: Some(inv),
        removed_volume: fit.aligned,
    })
}

/// Checks that the region's boundary half-edges form one simple closed
/// cycle (or none, for a region covering whole components).
fn check_simple_boundary(s: &Surface, region: &BTreeSet<FaceId>) -> Result<(), SurgeryError> {
    let mut boundary: Vec<usize> = Vec::new();
    for &f in region {
        for h in s.face_halfedges(f) {
            let g = s.halfedge(s.halfedge(h).twin).face;
            if !region.contains(&g) {
                boundary.push(h);
            }
        }
    }
    if boundary.is_empty() {
        return Ok(());
    }
    let mut from_origin: BTreeMap<VertexId, usize> = BTreeMap::new();
    for &h in &boundary {
        if from_origin.insert(s.halfedge(h).origin, h).is_some() {
            return Err(SurgeryError::BoundaryMismatch {
                reason: "boundary revisits a vertex",
            });
        }
    }
    let mut h = boundary[0];
    let mut steps = 0;
    loop {
        let Some(&next) = from_origin.get(&s.target(h)) else {
            return Err(SurgeryError::BoundaryMismatch {
                reason: "boundary is not closed",
            });
        };
        steps += 1;
        h = next;
        if h == boundary[0] {
            break;
        }
        if steps > boundary.len() {
            return Err(SurgeryError::BoundaryMismatch {
                reason: "boundary does not close into one cycle",
            });
        }
    }
    if steps != boundary.len() {
        return Err(SurgeryError::BoundaryMismatch {
            reason: "boundary splits into several cycles",
        });
    }
    Ok(())
}

/// Replaces a region that matches part of a reference solid by the rest of
/// that solid. The region's boundary must be empty or one simple cycle.
pub fn polyhedral_surgery(
    s: &Surface,
    region: &[FaceId],
    kind: SolidKind,
    eps: f64,
) -> Result<SurgeryOutcome, SurgeryError> {
    let region_set: BTreeSet<FaceId> = region.iter().copied().collect();
    check_simple_boundary(s, &region_set)?;
    replace_by_complement(s, region, &make_solid(kind), eps)
}

/// Removes every pair of faces whose realizations coincide. Returns the new
/// surface and the number of pairs removed.
pub fn remove_dangling_pairs(s: &Surface, eps: f64) -> Result<(Surface, usize), SurgeryError> {
    let (merged, remap) = merge_positions(s.positions(), eps);
    let mut faces: Vec<Vec<usize>> = (0..s.face_count())
        .map(|f| s.face_vertices(f).iter().map(|&v| remap[v]).collect())
        .collect();
    let mut tags = vec![false; faces.len()];
    let pairs = cancel_coincident_pairs(&mut faces, &mut tags);
    if pairs == 0 {
        return Ok((s.clone(), 0));
    }
    Ok((rebuild(&merged, &faces)?, pairs))
}

/// Deletes an all-square band and slides the hemisphere on its `next` side
/// one edge-length onto the other hemisphere, then removes dangling pairs.
pub fn band_surgery(s: &Surface, band: &Band, eps: f64) -> Result<SurgeryOutcome, SurgeryError> {
    for &h in &band.entries {
        let f = s.halfedge(h).face;
        if s.face_degree(f) == 8 {
            return Err(SurgeryError::BandHasOctagon { face: f });
        }
        if s.face_degree(f) != 4 {
            return Err(SurgeryError::BandHasOctagon { face: f });
        }
    }
    let band_faces: BTreeSet<FaceId> = band.faces(s).into_iter().collect();
    // Components of the rest of the surface.
    let mut comp = vec![usize::MAX; s.face_count()];
    let mut next_id = 0;
    for f0 in 0..s.face_count() {
        if comp[f0] != usize::MAX || band_faces.contains(&f0) {
            continue;
        }
        comp[f0] = next_id;
        let mut stack = vec![f0];
        while let Some(f) = stack.pop() {
            for g in s.face_neighbors(f) {
                if !band_faces.contains(&g) && comp[g] == usize::MAX {
                    comp[g] = next_id;
                    stack.push(g);
                }
            }
        }
        next_id += 1;
    }
    let h0 = band.entries[0];
    let left_face = s.halfedge(s.halfedge(s.halfedge(h0).next).twin).face;
    let right_face = s.halfedge(s.halfedge(s.halfedge(h0).prev).twin).face;
    if comp[left_face] == comp[right_face] {
        return Err(SurgeryError::NonSeparating);
    }
    let slide = comp[left_face];
    // Vertices on the sliding side; shared vertices with the fixed side
    // would be torn by the translation.
    let mut moving: BTreeSet<VertexId> = BTreeSet::new();
    let mut fixed: BTreeSet<VertexId> = BTreeSet::new();
    for (f, &side) in comp.iter().enumerate() {
        if band_faces.contains(&f) {
            continue;
        }
        let set = if side == slide { &mut moving } else { &mut fixed };
        set.extend(s.face_vertices(f).iter().copied());
    }
    if moving.intersection(&fixed).next().is_some() {
        return Err(SurgeryError::NonSeparating);
    }
    let e = s.position(s.target(h0)) - s.position(s.halfedge(h0).origin);
    let mut positions = s.positions().to_vec();
    for &v in &moving {
        positions[v] -= e;
    }
    let mut faces: Vec<Vec<usize>> = Vec::new();
    for f in 0..s.face_count() {
        if !band_faces.contains(&f) {
            faces.push(s.face_vertices(f).to_vec());
        }
    }
    let (merged, remap) = merge_positions(&positions, eps);
    for face in &mut faces {
        for v in face.iter_mut() {
            *v = remap[*v];
        }
    }
    let mut tags = vec![false; faces.len()];
    let absorbed_pairs = cancel_coincident_pairs(&mut faces, &mut tags);
    if faces.len() < 6 {
        return Err(SurgeryError::OverReduction);
    }
    let surface = rebuild(&merged, &faces)?;
    Ok(SurgeryOutcome {
        surface,
        absorbed_pairs,
        new_faces: Vec::new(),
        model_to_world: None,
        removed_volume: false,
    })
}

/// Replaces the interior of a minimal octagon bigon by the complementary
/// hemisphere of an octagonal prism, removing both degree-eight turning
/// faces. Tall interiors (stacked wall squares) fit prisms of matching
/// height.
pub fn octagon_removal_surgery(
    s: &Surface,
    bigon: &Bigon,
    eps: f64,
) -> Result<SurgeryOutcome, SurgeryError> {
    if bigon.kind != BigonKind::Octagon {
        return Err(SurgeryError::WrongKind);
    }
    let [o1, o2] = bigon.turning_faces(s);
    let region = bigon.interior(s);
    for &f in &region {
        if f != o1 && f != o2 && s.face_degree(f) != 4 {
            return Err(SurgeryError::NotPrismStructured { face: f });
        }
    }
    let dist = (s.face_centroid(o1) - s.face_centroid(o2)).norm();
    let k = dist.round();
    if k < 1.0 || (dist - k).abs() > 1e-3 {
        return Err(SurgeryError::NotPrismStructured { face: o1 });
    }
    let model = prism_tower(k as usize);
    let outcome = replace_by_complement(s, &region, &model, eps)
        .map_err(|e| match e {
            SurgeryError::NoIsometry => SurgeryError::NotPrismStructured { face: o1 },
            other => other,
        })?;
    if outcome.surface.face_count() == 0 {
        return Err(SurgeryError::SingleBrick);
    }
    Ok(outcome)
}

/// Endgame of the square-bigon reduction: when a cycle face bridges both
/// turning points, the bigon interior is part of a single brick (a cube for
/// a degree-four bridge, an octagonal prism for degree eight) and is
/// replaced by the rest of that brick, removing two faces.
pub fn brick_removal_surgery(
    s: &Surface,
    bigon: &Bigon,
    eps: f64,
) -> Result<SurgeryOutcome, SurgeryError> {
    let [t1, t2] = bigon.turning_faces(s);
    let bridge = bigon
        .cycle_faces(s)
        .into_iter()
        .filter(|&f| f != t1 && f != t2)
        .filter(|&f| {
            let nb = s.face_neighbors(f);
            nb.contains(&t1) && nb.contains(&t2)
        })
        .min()
        .ok_or(SurgeryError::NoBridgingFace)?;
    let kind = if s.face_degree(bridge) == 8 {
        SolidKind::OctagonalPrism
    } else {
        SolidKind::Cube
    };
    let region = bigon.interior(s);
    let outcome = replace_by_complement(s, &region, &make_solid(kind), eps)?;
    if outcome.surface.face_count() == 0 {
        return Err(SurgeryError::SingleBrick);
    }
    Ok(outcome)
}

/// Replaces three squares around a cube corner by the other half of the
/// cube. Applying the flip to the three new faces undoes it.
pub fn cube_flip(
    s: &Surface,
    corner: [FaceId; 3],
    eps: f64,
) -> Result<SurgeryOutcome, SurgeryError> {
    let [f, g, h] = corner;
    if f == g || g == h || f == h {
        return Err(SurgeryError::NotCubeCorner);
    }
    for face in corner {
        if s.face_degree(face) != 4 {
            return Err(SurgeryError::NotCubeCorner);
        }
    }
    let pairwise = s.face_neighbors(f).contains(&g)
        && s.face_neighbors(g).contains(&h)
        && s.face_neighbors(f).contains(&h);
    if !pairwise {
        return Err(SurgeryError::NotCubeCorner);
    }
    let shared: Vec<VertexId> = s
        .shared_vertices(f, g)
        .into_iter()
        .filter(|v| s.face_vertices(h).contains(v))
        .collect();
    if shared.is_empty() {
        return Err(SurgeryError::NotCubeCorner);
    }
    replace_by_complement(s, &corner, &make_solid(SolidKind::Cube), eps).map_err(|e| match e {
        SurgeryError::NoIsometry => SurgeryError::NotCubeCorner,
        other => other,
    })
}

/// Replaces five faces forming half an octagonal prism (one octagon and
/// four consecutive wall squares) by the other half.
pub fn prism_flip(s: &Surface, half: &[FaceId], eps: f64) -> Result<SurgeryOutcome, SurgeryError> {
    if half.len() != 5 {
        return Err(SurgeryError::NotPrismHalf);
    }
    let set: BTreeSet<FaceId> = half.iter().copied().collect();
    if set.len() != 5 {
        return Err(SurgeryError::NotPrismHalf);
    }
    let octagons: Vec<FaceId> = half
        .iter()
        .copied()
        .filter(|&f| s.face_degree(f) == 8)
        .collect();
    let squares: Vec<FaceId> = half
        .iter()
        .copied()
        .filter(|&f| s.face_degree(f) == 4)
        .collect();
    if octagons.len() != 1 || squares.len() != 4 {
        return Err(SurgeryError::NotPrismHalf);
    }
    // The squares must chain consecutively along the octagon's rim.
    let adjacencies = squares
        .iter()
        .map(|&a| {
            squares
                .iter()
                .filter(|&&b| b != a && s.face_neighbors(a).contains(&b))
                .count()
        })
        .collect::<Vec<_>>();
    let ends = adjacencies.iter().filter(|&&c| c == 1).count();
    let middles = adjacencies.iter().filter(|&&c| c == 2).count();
    if ends != 2 || middles != 2 {
        return Err(SurgeryError::NotPrismHalf);
    }
    if !squares
        .iter()
        .all(|&q| s.face_neighbors(q).contains(&octagons[0]))
    {
        return Err(SurgeryError::NotPrismHalf);
    }
    replace_by_complement(s, half, &make_solid(SolidKind::OctagonalPrism), eps).map_err(|e| {
        match e {
            SurgeryError::NoIsometry => SurgeryError::NotPrismHalf,
            other => other,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bands::{all_bands, all_bigons, find_minimal_bigon};
    use crate::generators::glue;
    use crate::geometry::validate_realization;
    use crate::DEFAULT_EPS as EPS;

    fn box_2x1() -> Surface {
        let c = make_solid(SolidKind::Cube);
        glue(&c, 0, SolidKind::Cube, 0).unwrap()
    }

    #[test]
    fn prism_tower_matches_prism() {
        let t = prism_tower(1);
        let p = make_solid(SolidKind::OctagonalPrism);
        assert!(t.is_isomorphic(&p).is_some());
        assert!(validate_realization(&t, EPS).is_clean());
        let t3 = prism_tower(3);
        assert_eq!(t3.face_count(), 26);
        assert_eq!(t3.vertex_count(), 32);
        assert_eq!(t3.genus().unwrap(), 0);
        assert!(validate_realization(&t3, EPS).is_clean());
    }

    #[test]
    fn cutting_a_face_ring_splits_cube() {
        let s = make_solid(SolidKind::Cube);
        let edges: Vec<EdgeId> = s.face_halfedges(0).iter().map(|&h| s.edge_of(h)).collect();
        let (a, b) = cut_along_cycle(&s, &edges).unwrap();
        let sizes = {
            let mut v = vec![a.faces.len(), b.faces.len()];
            v.sort_unstable();
            v
        };
        assert_eq!(sizes, vec![1, 5]);
    }

    #[test]
    fn cut_needs_a_separating_cycle() {
        let s = crate::generators::dodecahedral_torus(12).unwrap();
        // One face's boundary always separates that face from the rest.
        let f_edges: Vec<EdgeId> = s.face_halfedges(0).iter().map(|&h| s.edge_of(h)).collect();
        assert!(cut_along_cycle(&s, &f_edges).is_ok());
        // An empty cut leaves the surface in one piece.
        assert!(matches!(
            cut_along_cycle(&s, &[]),
            Err(SurgeryError::NonSeparating)
        ));
    }

    #[test]
    fn band_surgery_shrinks_box_to_cube() {
        let s = box_2x1();
        let bands = all_bands(&s, EPS).unwrap();
        let short = bands.iter().find(|b| b.len() == 4).unwrap();
        let out = band_surgery(&s, short, EPS).unwrap();
        assert_eq!(out.absorbed_pairs, 0);
        assert_eq!(out.surface.face_count(), 6);
        assert!(out.surface.is_isomorphic(&make_solid(SolidKind::Cube)).is_some());
        assert!(validate_realization(&out.surface, EPS).is_clean());
        assert_eq!(out.surface.genus().unwrap(), 0);
    }

    #[test]
    fn band_surgery_overreduces_small_surfaces() {
        let s = box_2x1();
        let bands = all_bands(&s, EPS).unwrap();
        let long = bands.iter().find(|b| b.len() == 6).unwrap();
        assert!(matches!(
            band_surgery(&s, long, EPS),
            Err(SurgeryError::OverReduction)
        ));
        let c = make_solid(SolidKind::Cube);
        let cb = all_bands(&c, EPS).unwrap();
        assert!(matches!(
            band_surgery(&c, &cb[0], EPS),
            Err(SurgeryError::OverReduction)
        ));
    }

    #[test]
    fn band_surgery_rejects_octagons() {
        let p = make_solid(SolidKind::OctagonalPrism);
        let bands = all_bands(&p, EPS).unwrap();
        let threaded = bands.iter().find(|b| b.has_octagon(&p)).unwrap();
        assert!(matches!(
            band_surgery(&p, threaded, EPS),
            Err(SurgeryError::BandHasOctagon { .. })
        ));
    }

    #[test]
    fn removing_a_cap_from_a_two_brick_tree_leaves_one_brick() {
        let s = crate::generators::random_dodec_tree(2, 7);
        assert_eq!(s.face_count(), 22);
        // Cap: a face with all-exposed neighborhood, its five neighbors,
        // plus one second-generation face sharing a degree-three vertex.
        let mut result = None;
        'faces: for f in 0..s.face_count() {
            let gen1 = s.face_generations(f, 1);
            if gen1.len() != 5 {
                continue;
            }
            let mut region = vec![f];
            region.extend(gen1.iter().copied());
            for &g in &gen1 {
                for n in s.face_neighbors(g) {
                    if region.contains(&n) {
                        continue;
                    }
                    let mut cap = region.clone();
                    cap.push(n);
                    if let Ok(out) =
                        polyhedral_surgery(&s, &cap, SolidKind::Dodecahedron, EPS)
                    {
                        result = Some(out);
                        break 'faces;
                    }
                }
            }
        }
        let out = result.expect("some seven-face cap must fit a dodecahedron");
        assert_eq!(out.absorbed_pairs, 4);
        assert_eq!(out.surface.face_count(), 12);
        assert!(out
            .surface
            .is_isomorphic(&make_solid(SolidKind::Dodecahedron))
            .is_some());
        assert!(validate_realization(&out.surface, EPS).is_clean());
    }

    #[test]
    fn seven_face_cap_annihilates_a_lone_dodecahedron() {
        let s = make_solid(SolidKind::Dodecahedron);
        let gen1 = s.face_generations(0, 1);
        let mut region = vec![0];
        region.extend(gen1);
        // Add one second-generation face to make a seven-face cap.
        let extra = (0..s.face_count())
            .find(|&f| !region.contains(&f) && s.face_neighbors(f).iter().any(|n| region.contains(n)))
            .unwrap();
        region.push(extra);
        let out = polyhedral_surgery(&s, &region, SolidKind::Dodecahedron, EPS).unwrap();
        assert_eq!(out.absorbed_pairs, 5);
        assert_eq!(out.surface.face_count(), 0);
    }

    #[test]
    fn cube_flip_carves_a_cube_from_a_box_corner() {
        // All three squares at a box corner belong to one end cube; flipping
        // them pushes the surface through that cube, and the two cap faces
        // that land on existing side squares cancel away. The end cube is
        // carved off entirely.
        let s = box_2x1();
        let mut corner = None;
        'v: for v in 0..s.vertex_count() {
            let fs = s.vertex_faces(v);
            if fs.len() == 3 {
                corner = Some([fs[0], fs[1], fs[2]]);
                break 'v;
            }
        }
        let corner = corner.expect("box has degree-three corners");
        let out = cube_flip(&s, corner, EPS).unwrap();
        assert_eq!(out.absorbed_pairs, 2);
        assert_eq!(out.surface.face_count(), 6);
        assert!(out.surface.is_isomorphic(&make_solid(SolidKind::Cube)).is_some());
        assert!(validate_realization(&out.surface, EPS).is_clean());
        assert_eq!(out.surface.genus().unwrap(), 0);
    }

    #[test]
    fn cube_flip_is_an_involution_on_a_block_corner() {
        // On a 2x2x2 block the carved corner cube is backed by material on
        // its other three sides, so the flip is a pure three-for-three
        // replacement and flipping the new faces restores the block.
        let s = crate::generators::block(2, 2, 2);
        assert_eq!(s.face_count(), 24);
        let v = (0..s.vertex_count())
            .find(|&v| {
                let p = s.position(v);
                p.x.abs() < 1e-9 && p.y.abs() < 1e-9 && p.z.abs() < 1e-9
            })
            .unwrap();
        let fs = s.vertex_faces(v);
        assert_eq!(fs.len(), 3);
        let out = cube_flip(&s, [fs[0], fs[1], fs[2]], EPS).unwrap();
        assert_eq!(out.absorbed_pairs, 0);
        assert_eq!(out.surface.face_count(), 24);
        assert_eq!(out.new_faces.len(), 3);
        assert!(validate_realization(&out.surface, EPS).is_clean());
        assert_eq!(out.surface.genus().unwrap(), 0);
        let back = cube_flip(
            &out.surface,
            [out.new_faces[0], out.new_faces[1], out.new_faces[2]],
            EPS,
        )
        .unwrap();
        assert_eq!(back.absorbed_pairs, 0);
        assert!(back.surface.is_isomorphic(&s).is_some());
    }

    #[test]
    fn cube_flip_rejects_non_corners() {
        let s = box_2x1();
        // Two opposite faces and one more cannot share a vertex.
        let f0 = 0;
        let far = (0..s.face_count())
            .find(|&f| !s.face_neighbors(f0).contains(&f) && f != f0)
            .unwrap();
        let n = s.face_neighbors(f0)[0];
        assert!(matches!(
            cube_flip(&s, [f0, far, n], EPS),
            Err(SurgeryError::NotCubeCorner)
        ));
    }

    #[test]
    fn prism_flip_peels_a_prism_off_a_cube() {
        let c = make_solid(SolidKind::Cube);
        let s = glue(&c, 0, SolidKind::OctagonalPrism, 0).unwrap();
        assert_eq!(s.face_count(), 14);
        let oct = (0..s.face_count()).find(|&f| s.face_degree(f) == 8).unwrap();
        // Neighbors of the octagon in rim order; pick four consecutive ones
        // that are squares away from the cube attachment.
        let ring: Vec<FaceId> = s
            .face_halfedges(oct)
            .iter()
            .map(|&h| s.halfedge(s.halfedge(h).twin).face)
            .collect();
        let mut half = None;
        'scan: for start in 0..8 {
            let run: Vec<FaceId> = (0..4).map(|i| ring[(start + i) % 8]).collect();
            let mut region = vec![oct];
            region.extend(run.iter().copied());
            if let Ok(out) = prism_flip(&s, &region, EPS) {
                half = Some(out);
                break 'scan;
            }
        }
        let out = half.expect("a prism half away from the cube must flip");
        assert_eq!(out.absorbed_pairs, 4);
        assert_eq!(out.surface.face_count(), 6);
        assert!(out.surface.is_isomorphic(&make_solid(SolidKind::Cube)).is_some());
    }

    #[test]
    fn octagon_removal_deletes_a_prism_brick() {
        let c = make_solid(SolidKind::Cube);
        let s = glue(&c, 0, SolidKind::OctagonalPrism, 0).unwrap();
        let bigon = all_bigons(&s, EPS)
            .unwrap()
            .into_iter()
            .find(|b| b.kind == BigonKind::Octagon)
            .expect("threading bands cross at both octagons");
        let out = octagon_removal_surgery(&s, &bigon, EPS).unwrap();
        let octs = (0..out.surface.face_count())
            .filter(|&f| out.surface.face_degree(f) == 8)
            .count();
        assert_eq!(octs, 0);
        assert_eq!(out.surface.face_count(), 6);
        assert!(out.surface.is_isomorphic(&make_solid(SolidKind::Cube)).is_some());
        assert_eq!(out.surface.genus().unwrap(), 0);
    }

    #[test]
    fn octagon_removal_refuses_lone_prism_and_square_bigons() {
        let p = make_solid(SolidKind::OctagonalPrism);
        let bigon = find_minimal_bigon(&p, EPS).unwrap();
        assert!(matches!(
            octagon_removal_surgery(&p, &bigon, EPS),
            Err(SurgeryError::SingleBrick)
        ));
        let b = box_2x1();
        let sq = find_minimal_bigon(&b, EPS).unwrap();
        assert_eq!(sq.kind, BigonKind::Square);
        assert!(matches!(
            octagon_removal_surgery(&b, &sq, EPS),
            Err(SurgeryError::WrongKind)
        ));
    }

    #[test]
    fn brick_removal_peels_a_cube_off_a_box() {
        let s = box_2x1();
        let bigon = find_minimal_bigon(&s, EPS).unwrap();
        let out = brick_removal_surgery(&s, &bigon, EPS).unwrap();
        assert_eq!(out.absorbed_pairs, 1);
        assert_eq!(out.surface.face_count(), 6);
        assert!(out.surface.is_isomorphic(&make_solid(SolidKind::Cube)).is_some());
    }

    #[test]
    fn brick_removal_needs_a_bridge() {
        // A three-cube box: the long bigon turning at the two end caps has
        // no single face adjacent to both.
        let b2 = box_2x1();
        let end = (0..b2.face_count())
            .find(|&f| {
                let c = b2.face_centroid(f);
                c.x.abs() > 1.4
            })
            .unwrap();
        let s = glue(&b2, end, SolidKind::Cube, 0).unwrap();
        let bigons = all_bigons(&s, EPS).unwrap();
        let long = bigons
            .iter()
            .find(|b| {
                b.entries.len() == 8 && {
                    let [t1, t2] = b.turning_faces(&s);
                    let d = (s.face_centroid(t1) - s.face_centroid(t2)).norm();
                    d > 2.5
                }
            })
            .expect("end-to-end bigon exists");
        assert!(matches!(
            brick_removal_surgery(&s, long, EPS),
            Err(SurgeryError::NoBridgingFace)
        ));
    }

    #[test]
    fn dangling_pairs_absent_on_clean_solids() {
        let s = make_solid(SolidKind::Dodecahedron);
        let (same, n) = remove_dangling_pairs(&s, EPS).unwrap();
        assert_eq!(n, 0);
        assert_eq!(same.face_count(), 12);
    }
}
