//! Half-edge surface graphs with embedded vertices.
//!
//! A [`Surface`] is a closed, oriented, manifold surface graph — every edge
//! borders exactly two faces with opposite traversal orientations, and the
//! faces around each vertex form a single rotational cycle — together with a
//! position in 3-space for every vertex. Construction validates the manifold
//! conditions and rejects anything else; geometric conditions (unit edges,
//! regular faces, face-image intersections) are checked separately by
//! report-style functions in [`crate::geometry`].

use crate::angle::AnglePi;
use nalgebra::{Point3, Vector3};
use std::collections::BTreeMap;
use thiserror::Error;

pub type VertexId = usize;
pub type FaceId = usize;
pub type HalfEdgeId = usize;
/// Edges are identified by their canonical half-edge: the one with the
/// smaller index of the twin pair.
pub type EdgeId = usize;

const NO_HALFEDGE: usize = usize::MAX;

/// One directed side of an edge.
#[derive(Clone, Copy, Debug)]
pub struct HalfEdge {
    pub origin: VertexId,
    pub face: FaceId,
    pub next: HalfEdgeId,
    pub prev: HalfEdgeId,
    pub twin: HalfEdgeId,
}

/// Errors detected while assembling a surface from face cycles.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("face {face} has degree {degree}, but faces need at least 3 sides")]
    FaceTooSmall { face: FaceId, degree: usize },
    #[error("face {face} references vertex {vertex}, beyond the {count} given positions")]
    VertexOutOfRange { face: FaceId, vertex: VertexId, count: usize },
    #[error("face {face} repeats vertex {vertex} on consecutive corners")]
    DegenerateEdge { face: FaceId, vertex: VertexId },
    #[error("edge {from}-{to} borders only one face; the surface is not closed")]
    OpenEdge { from: VertexId, to: VertexId },
    #[error("edge {from}-{to} borders more than two faces")]
    OverusedEdge { from: VertexId, to: VertexId },
    #[error("edge {from}-{to} is traversed twice in the same direction; the surface is not orientable")]
    NonOrientable { from: VertexId, to: VertexId },
    #[error("the faces around vertex {vertex} do not form a single cycle")]
    NonManifold { vertex: VertexId },
    #[error("vertex {vertex} has degree {degree}, but vertices need degree at least 3")]
    DegreeTooSmall { vertex: VertexId, degree: usize },
    #[error("Euler characteristic {chi} is odd; genus is undefined")]
    OddEulerCharacteristic { chi: i64 },
}

/// A face pair (or single face) violating the intersection rules: two face
/// closures may share at most one edge with its endpoints, or at most one
/// vertex; and each face cycle must visit distinct vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProperViolation {
    /// The two faces share `edges` whole edges and `vertices` vertices,
    /// which is more than one edge, or vertices beyond a single shared
    /// edge/vertex.
    FacePair { f: FaceId, g: FaceId, edges: usize, vertices: usize },
    /// The face visits some vertex more than once, so its closure is not a
    /// closed disk.
    RepeatedVertex { face: FaceId, vertex: VertexId },
}

/// Outcome of the combinatorial properness/regularity scan.
#[derive(Debug, Clone, Default)]
pub struct ProperReport {
    pub violations: Vec<ProperViolation>,
}

impl ProperReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Dual graph: one node per face, one arc per primal edge.
#[derive(Debug, Clone)]
pub struct DualGraph {
    /// `(face, face, primal edge)` per arc, faces in canonical half-edge order.
    pub arcs: Vec<(FaceId, FaceId, EdgeId)>,
    pub node_count: usize,
}

impl DualGraph {
    /// Number of arcs incident to `f`.
    pub fn node_degree(&self, f: FaceId) -> usize {
        self.arcs.iter().filter(|&&(a, b, _)| a == f || b == f).count()
    }
}

/// A closed alternating vertex/edge walk without repeated edges, recorded as
/// the sequence of half-edges walked (each half-edge supplies the edge and
/// its source vertex).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    pub halfedges: Vec<HalfEdgeId>,
}

impl Cycle {
    /// Vertices in walk order (same length as the edge list; the walk is
    /// closed, so the last edge returns to the first vertex).
    pub fn vertices(&self, s: &Surface) -> Vec<VertexId> {
        self.halfedges.iter().map(|&h| s.halfedge(h).origin).collect()
    }

    pub fn len(&self) -> usize {
        self.halfedges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.halfedges.is_empty()
    }
}

/// Bijection between two isomorphic surfaces.
#[derive(Debug, Clone)]
pub struct Correspondence {
    pub vertex_map: Vec<VertexId>,
    pub face_map: Vec<FaceId>,
    pub halfedge_map: Vec<HalfEdgeId>,
}

/// A closed oriented surface graph embedded in 3-space.
#[derive(Clone)]
pub struct Surface {
    positions: Vec<Point3<f64>>,
    faces: Vec<Vec<VertexId>>,
    half: Vec<HalfEdge>,
    face_start: Vec<HalfEdgeId>,
    vertex_start: Vec<HalfEdgeId>,
    n_edges: usize,
}

impl std::fmt::Debug for Surface {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Surface {{ V: {}, E: {}, F: {} }}",
            self.vertex_count(),
            self.edge_count(),
            self.face_count()
        )
    }
}

impl Surface {
    /// Assembles and validates a surface from vertex positions and cyclic
    /// face vertex lists (counter-clockwise seen from outside).
    pub fn build(
        positions: Vec<Point3<f64>>,
        faces: Vec<Vec<VertexId>>,
    ) -> Result<Surface, SurfaceError> {
        let nv = positions.len();
        for (fi, cycle) in faces.iter().enumerate() {
            if cycle.len() < 3 {
                return Err(SurfaceError::FaceTooSmall { face: fi, degree: cycle.len() });
            }
            for (k, &v) in cycle.iter().enumerate() {
                if v >= nv {
                    return Err(SurfaceError::VertexOutOfRange { face: fi, vertex: v, count: nv });
                }
                if v == cycle[(k + 1) % cycle.len()] {
                    return Err(SurfaceError::DegenerateEdge { face: fi, vertex: v });
                }
            }
        }

        // Create half-edges face by face.
        let mut half = Vec::new();
        let mut face_start = Vec::with_capacity(faces.len());
        for (fi, cycle) in faces.iter().enumerate() {
            let base = half.len();
            face_start.push(base);
            let d = cycle.len();
            for (k, &v) in cycle.iter().enumerate() {
                half.push(HalfEdge {
                    origin: v,
                    face: fi,
                    next: base + (k + 1) % d,
                    prev: base + (k + d - 1) % d,
                    twin: NO_HALFEDGE,
                });
            }
        }

        // Pair twins; classify defects deterministically in half-edge order.
        let mut directed: BTreeMap<(VertexId, VertexId), Vec<HalfEdgeId>> = BTreeMap::new();
        for (h, he) in half.iter().enumerate() {
            let a = he.origin;
            let b = half[he.next].origin;
            directed.entry((a, b)).or_default().push(h);
        }
        for h in 0..half.len() {
            let a = half[h].origin;
            let b = half[half[h].next].origin;
            let fwd = directed.get(&(a, b)).map_or(0, |v| v.len());
            let bwd = directed.get(&(b, a)).map_or(0, |v| v.len());
            let (lo, hi) = (a.min(b), a.max(b));
            match fwd + bwd {
                2 if fwd == 1 => {
                    half[h].twin = directed[&(b, a)][0];
                }
                1 => return Err(SurfaceError::OpenEdge { from: lo, to: hi }),
                2 => return Err(SurfaceError::NonOrientable { from: lo, to: hi }),
                _ => return Err(SurfaceError::OverusedEdge { from: lo, to: hi }),
            }
        }

        // Vertex rotations: walking next(twin(h)) from any outgoing half-edge
        // must visit every outgoing half-edge of the vertex.
        let mut degree = vec![0usize; nv];
        let mut vertex_start = vec![NO_HALFEDGE; nv];
        for (h, he) in half.iter().enumerate() {
            degree[he.origin] += 1;
            if vertex_start[he.origin] == NO_HALFEDGE {
                vertex_start[he.origin] = h;
            }
        }
        for v in 0..nv {
            if degree[v] < 3 {
                return Err(SurfaceError::DegreeTooSmall { vertex: v, degree: degree[v] });
            }
            let start = vertex_start[v];
            let mut h = start;
            let mut seen = 0usize;
            loop {
                seen += 1;
                h = half[half[h].twin].next;
                if h == start {
                    break;
                }
                if seen > degree[v] {
                    break;
                }
            }
            if seen != degree[v] {
                return Err(SurfaceError::NonManifold { vertex: v });
            }
        }

        let n_edges = half.len() / 2;
        Ok(Surface { positions, faces, half, face_start, vertex_start, n_edges })
    }

    // ----- counts and raw access -----

    pub fn vertex_count(&self) -> usize {
        self.positions.len()
    }

    pub fn edge_count(&self) -> usize {
        self.n_edges
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn halfedge_count(&self) -> usize {
        self.half.len()
    }

    pub fn position(&self, v: VertexId) -> Point3<f64> {
        self.positions[v]
    }

    pub fn positions(&self) -> &[Point3<f64>] {
        &self.positions
    }

    pub fn halfedge(&self, h: HalfEdgeId) -> &HalfEdge {
        &self.half[h]
    }

    /// Target vertex of a half-edge.
    pub fn target(&self, h: HalfEdgeId) -> VertexId {
        self.half[self.half[h].next].origin
    }

    pub fn face_vertices(&self, f: FaceId) -> &[VertexId] {
        &self.faces[f]
    }

    pub fn face_degree(&self, f: FaceId) -> usize {
        self.faces[f].len()
    }

    pub fn vertex_degree(&self, v: VertexId) -> usize {
        self.vertex_halfedges(v).len()
    }

    /// Half-edges of a face in cycle order, starting at its representative.
    pub fn face_halfedges(&self, f: FaceId) -> Vec<HalfEdgeId> {
        let start = self.face_start[f];
        let mut out = Vec::with_capacity(self.faces[f].len());
        let mut h = start;
        loop {
            out.push(h);
            h = self.half[h].next;
            if h == start {
                break;
            }
        }
        out
    }

    /// Outgoing half-edges around a vertex in rotation order.
    pub fn vertex_halfedges(&self, v: VertexId) -> Vec<HalfEdgeId> {
        let start = self.vertex_start[v];
        let mut out = Vec::new();
        let mut h = start;
        loop {
            out.push(h);
            h = self.half[self.half[h].twin].next;
            if h == start {
                break;
            }
        }
        out
    }

    /// Faces incident to a vertex in rotation order.
    pub fn vertex_faces(&self, v: VertexId) -> Vec<FaceId> {
        self.vertex_halfedges(v).iter().map(|&h| self.half[h].face).collect()
    }

    /// Sorted multiset of face degrees around a vertex, e.g. `[4, 4, 8]`.
    pub fn vertex_type(&self, v: VertexId) -> Vec<usize> {
        let mut t: Vec<usize> =
            self.vertex_faces(v).iter().map(|&f| self.face_degree(f)).collect();
        t.sort_unstable();
        t
    }

    /// Count of faces per degree over the whole surface.
    pub fn face_degree_profile(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for f in &self.faces {
            *m.entry(f.len()).or_insert(0) += 1;
        }
        m
    }

    /// Canonical id of the edge under a half-edge.
    pub fn edge_of(&self, h: HalfEdgeId) -> EdgeId {
        h.min(self.half[h].twin)
    }

    /// All edges as `(edge id, lower endpoint, higher endpoint)`.
    pub fn edges(&self) -> Vec<(EdgeId, VertexId, VertexId)> {
        let mut out = Vec::with_capacity(self.n_edges);
        for h in 0..self.half.len() {
            if h < self.half[h].twin {
                let a = self.half[h].origin;
                let b = self.target(h);
                out.push((h, a.min(b), a.max(b)));
            }
        }
        out
    }

    /// The half-edge from `a` to `b`, if the edge exists.
    pub fn halfedge_between(&self, a: VertexId, b: VertexId) -> Option<HalfEdgeId> {
        self.vertex_halfedges(a).into_iter().find(|&h| self.target(h) == b)
    }

    /// Faces on either side of an edge (canonical half-edge first).
    pub fn edge_faces(&self, e: EdgeId) -> (FaceId, FaceId) {
        (self.half[e].face, self.half[self.half[e].twin].face)
    }

    /// Edge-neighbors of a face, one entry per side in cycle order
    /// (a neighbor sharing several edges appears several times).
    pub fn face_neighbors(&self, f: FaceId) -> Vec<FaceId> {
        self.face_halfedges(f)
            .iter()
            .map(|&h| self.half[self.half[h].twin].face)
            .collect()
    }

    /// Vertices shared by two faces.
    pub fn shared_vertices(&self, f: FaceId, g: FaceId) -> Vec<VertexId> {
        self.faces[f].iter().copied().filter(|v| self.faces[g].contains(v)).collect()
    }

    /// Whole edges shared by two faces.
    pub fn shared_edges(&self, f: FaceId, g: FaceId) -> Vec<EdgeId> {
        self.face_halfedges(f)
            .into_iter()
            .filter(|&h| self.half[self.half[h].twin].face == g)
            .map(|h| self.edge_of(h))
            .collect()
    }

    // ----- topology -----

    /// Face labels of connected components, in first-seen order.
    pub fn connected_components(&self) -> Vec<Vec<FaceId>> {
        let mut comp = vec![usize::MAX; self.faces.len()];
        let mut out: Vec<Vec<FaceId>> = Vec::new();
        for f0 in 0..self.faces.len() {
            if comp[f0] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![f0];
            let mut members = Vec::new();
            comp[f0] = id;
            while let Some(f) = stack.pop() {
                members.push(f);
                for g in self.face_neighbors(f) {
                    if comp[g] == usize::MAX {
                        comp[g] = id;
                        stack.push(g);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.face_count() as i64
    }

    /// Total genus (sum over connected components).
    pub fn genus(&self) -> Result<i64, SurfaceError> {
        let chi = self.euler_characteristic();
        let c = self.connected_components().len() as i64;
        let two_g = 2 * c - chi;
        if two_g % 2 != 0 {
            return Err(SurfaceError::OddEulerCharacteristic { chi });
        }
        Ok(two_g / 2)
    }

    pub fn dual_graph(&self) -> DualGraph {
        let mut arcs = Vec::with_capacity(self.n_edges);
        for h in 0..self.half.len() {
            if h < self.half[h].twin {
                arcs.push((self.half[h].face, self.half[self.half[h].twin].face, h));
            }
        }
        DualGraph { arcs, node_count: self.faces.len() }
    }

    // ----- curvature (exact) -----

    /// `2 pi` minus the interior angles of the faces meeting at `v`.
    pub fn vertex_curvature(&self, v: VertexId) -> AnglePi {
        let mut k = AnglePi::two_pi();
        for f in self.vertex_faces(v) {
            k -= AnglePi::interior_angle(self.face_degree(f));
        }
        k
    }

    /// Vertex curvature spread over faces: sum of `k_v / deg(v)` over the
    /// face's vertices.
    pub fn facial_curvature(&self, f: FaceId) -> AnglePi {
        self.faces[f]
            .iter()
            .map(|&v| self.vertex_curvature(v).div_int(self.vertex_degree(v) as i64))
            .sum()
    }

    pub fn total_curvature(&self) -> AnglePi {
        (0..self.vertex_count()).map(|v| self.vertex_curvature(v)).sum()
    }

    /// `(total, 2 pi chi, total == 2 pi chi)`, all exact.
    pub fn gauss_bonnet_check(&self) -> (AnglePi, AnglePi, bool) {
        let total = self.total_curvature();
        let target = AnglePi::new(2 * self.euler_characteristic(), 1);
        (total, target, total == target)
    }

    // ----- generations -----

    /// `k = 1`: edge-neighbors of `f`. `k = 2`: edge-neighbors of the first
    /// generation, excluding `f` and the first generation. Sorted.
    pub fn face_generations(&self, f: FaceId, k: usize) -> Vec<FaceId> {
        assert!(k == 1 || k == 2, "only generations 1 and 2 are defined");
        let mut first: Vec<FaceId> = self.face_neighbors(f);
        first.sort_unstable();
        first.dedup();
        if k == 1 {
            return first;
        }
        let mut second = Vec::new();
        for &g in &first {
            for h in self.face_neighbors(g) {
                if h != f && !first.contains(&h) && !second.contains(&h) {
                    second.push(h);
                }
            }
        }
        second.sort_unstable();
        second
    }

    // ----- properness -----

    /// Reports faces with repeated vertices and face pairs whose closures
    /// intersect in more than a single shared edge (with endpoints) or a
    /// single shared vertex.
    pub fn validate_proper(&self) -> ProperReport {
        let mut violations = Vec::new();
        for (fi, cycle) in self.faces.iter().enumerate() {
            let mut sorted = cycle.clone();
            sorted.sort_unstable();
            for w in sorted.windows(2) {
                if w[0] == w[1] {
                    violations
                        .push(ProperViolation::RepeatedVertex { face: fi, vertex: w[0] });
                    break;
                }
            }
        }
        // Only face pairs sharing a vertex can violate; enumerate via vertices.
        let mut candidate_pairs: Vec<(FaceId, FaceId)> = Vec::new();
        for v in 0..self.vertex_count() {
            let fs = self.vertex_faces(v);
            for i in 0..fs.len() {
                for j in i + 1..fs.len() {
                    let (a, b) = (fs[i].min(fs[j]), fs[i].max(fs[j]));
                    if a != b {
                        candidate_pairs.push((a, b));
                    }
                }
            }
        }
        candidate_pairs.sort_unstable();
        candidate_pairs.dedup();
        for (f, g) in candidate_pairs {
            let edges = self.shared_edges(f, g).len();
            let vertices = self.shared_vertices(f, g).len();
            let ok = match edges {
                0 => vertices <= 1,
                1 => vertices == 2,
                _ => false,
            };
            if !ok {
                violations.push(ProperViolation::FacePair { f, g, edges, vertices });
            }
        }
        ProperReport { violations }
    }

    // ----- embedded helpers -----

    pub fn face_centroid(&self, f: FaceId) -> Point3<f64> {
        let mut c = Vector3::zeros();
        for &v in &self.faces[f] {
            c += self.positions[v].coords;
        }
        Point3::from(c / self.faces[f].len() as f64)
    }

    /// Face normal by Newell's method (unnormalized direction for degenerate
    /// inputs is avoided by the unit fallback below only when zero).
    pub fn face_normal(&self, f: FaceId) -> Vector3<f64> {
        let vs = &self.faces[f];
        let mut n = Vector3::zeros();
        for k in 0..vs.len() {
            let p = self.positions[vs[k]];
            let q = self.positions[vs[(k + 1) % vs.len()]];
            n.x += (p.y - q.y) * (p.z + q.z);
            n.y += (p.z - q.z) * (p.x + q.x);
            n.z += (p.x - q.x) * (p.y + q.y);
        }
        let len = n.norm();
        if len > 0.0 {
            n / len
        } else {
            n
        }
    }

    /// Unit vector along a half-edge's realization.
    pub fn halfedge_dir(&self, h: HalfEdgeId) -> Vector3<f64> {
        let a = self.positions[self.half[h].origin];
        let b = self.positions[self.target(h)];
        let d = b - a;
        let len = d.norm();
        if len > 0.0 {
            d / len
        } else {
            d
        }
    }

    // ----- isomorphism -----

    /// Searches for an incidence-preserving bijection of vertices, faces, and
    /// half-edges. Purely combinatorial.
    pub fn is_isomorphic(&self, other: &Surface) -> Option<Correspondence> {
        if self.vertex_count() != other.vertex_count()
            || self.edge_count() != other.edge_count()
            || self.face_count() != other.face_count()
            || self.face_degree_profile() != other.face_degree_profile()
        {
            return None;
        }
        let comps1 = self.connected_components();
        let comps2 = other.connected_components();
        if comps1.len() != comps2.len() {
            return None;
        }
        let mut he_map = vec![NO_HALFEDGE; self.half.len()];
        let mut used2 = vec![false; comps2.len()];
        if self.match_components(other, &comps1, &comps2, 0, &mut used2, &mut he_map) {
            let mut vertex_map = vec![usize::MAX; self.vertex_count()];
            let mut face_map = vec![usize::MAX; self.face_count()];
            for (h1, &h2) in he_map.iter().enumerate() {
                vertex_map[self.half[h1].origin] = other.half[h2].origin;
                face_map[self.half[h1].face] = other.half[h2].face;
            }
            Some(Correspondence { vertex_map, face_map, halfedge_map: he_map })
        } else {
            None
        }
    }

    fn match_components(
        &self,
        other: &Surface,
        comps1: &[Vec<FaceId>],
        comps2: &[Vec<FaceId>],
        idx: usize,
        used2: &mut [bool],
        he_map: &mut [HalfEdgeId],
    ) -> bool {
        if idx == comps1.len() {
            return true;
        }
        let seed1 = self.face_start[comps1[idx][0]];
        for c2 in 0..comps2.len() {
            if used2[c2] {
                continue;
            }
            for &f2 in &comps2[c2] {
                for h2 in other.face_halfedges(f2) {
                    if let Some(saved) = self.try_flag_map(other, seed1, h2) {
                        for &(a, b) in &saved {
                            he_map[a] = b;
                        }
                        used2[c2] = true;
                        if self.match_components(other, comps1, comps2, idx + 1, used2, he_map)
                        {
                            return true;
                        }
                        used2[c2] = false;
                        for &(a, _) in &saved {
                            he_map[a] = NO_HALFEDGE;
                        }
                    }
                }
            }
            // All seeds of c2 failed; by symmetry of components only the
            // pairing matters, keep trying other components.
        }
        false
    }

    /// Attempts to extend `seed1 -> seed2` over one connected component by
    /// propagating `next` and `twin`. Returns the half-edge pairs on success.
    fn try_flag_map(
        &self,
        other: &Surface,
        seed1: HalfEdgeId,
        seed2: HalfEdgeId,
    ) -> Option<Vec<(HalfEdgeId, HalfEdgeId)>> {
        let mut map: BTreeMap<HalfEdgeId, HalfEdgeId> = BTreeMap::new();
        let mut inv: BTreeMap<HalfEdgeId, HalfEdgeId> = BTreeMap::new();
        let mut stack = vec![(seed1, seed2)];
        while let Some((a, b)) = stack.pop() {
            match map.get(&a) {
                Some(&b0) => {
                    if b0 != b {
                        return None;
                    }
                    continue;
                }
                None => {
                    if inv.contains_key(&b) {
                        return None;
                    }
                    map.insert(a, b);
                    inv.insert(b, a);
                    stack.push((self.half[a].next, other.half[b].next));
                    stack.push((self.half[a].twin, other.half[b].twin));
                }
            }
        }
        // Vertex consistency: origins must map consistently.
        let mut vmap: BTreeMap<VertexId, VertexId> = BTreeMap::new();
        let mut vinv: BTreeMap<VertexId, VertexId> = BTreeMap::new();
        for (&a, &b) in &map {
            let (va, vb) = (self.half[a].origin, other.half[b].origin);
            if *vmap.entry(va).or_insert(vb) != vb || *vinv.entry(vb).or_insert(va) != va {
                return None;
            }
        }
        Some(map.into_iter().collect())
    }
}
