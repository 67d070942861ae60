//! Acceptance gate: every shipped guarantee is checked end to end, and each
//! prints a single pass/fail line (visible with `--nocapture`). The test
//! fails if any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rps_core::bands::{
    all_bands, all_bigons, check_interior_structure, find_minimal_bigon, find_monogon, Bigon,
    BigonKind,
};
use rps_core::decompose::{
    decompose_pent, decompose_square_oct, verify_certificate, BrickKind, Certificate,
    DecomposeError,
};
use rps_core::generators::{
    block, counterexample, dodecahedral_torus, glue, great_dodecahedron, make_solid, prism_tower,
    random_cube_prism_tree, random_dodec_tree, AssemblyKind, SolidKind,
};
use rps_core::geometry::{dihedral_angle, dihedral_table, validate_realization};
use rps_core::surface::FaceId;
use rps_core::surgery::{
    band_surgery, brick_removal_surgery, cube_flip, octagon_removal_surgery, polyhedral_surgery,
    prism_flip, SurgeryOutcome,
};
use rps_core::{Surface, DEFAULT_EPS as EPS};

type Check = (&'static str, fn() -> Result<String, String>);

#[test]
fn acceptance() {
    let checks: [Check; 8] = [
        ("1 exact-total-curvature", c1_exact_total_curvature),
        ("2 dihedral-table", c2_dihedral_table),
        ("3 pentagon-round-trip", c3_pentagon_round_trip),
        ("4 square-octagon-round-trip", c4_square_octagon_round_trip),
        ("5 high-genus-rejection", c5_high_genus_rejection),
        ("6 structure-lemmas", c6_structure_lemmas),
        ("7 surgery-invariants", c7_surgery_invariants),
        ("8 certificate-soundness", c8_certificate_soundness),
    ];
    let mut failures = Vec::new();
    for (name, check) in checks {
        match check() {
            Ok(msg) => println!("criterion {name}: pass — {msg}"),
            Err(msg) => {
                println!("criterion {name}: FAIL — {msg}");
                failures.push(name);
            }
        }
    }
    assert!(failures.is_empty(), "criteria failed: {failures:?}");
}

/// Total angle defect equals 2π·χ exactly, in rational-π arithmetic, for
/// every generator output; each check runs in under a second.
fn c1_exact_total_curvature() -> Result<String, String> {
    let mut surfaces: Vec<(String, Surface)> = vec![
        ("dodecahedron tree, 20 bricks".into(), random_dodec_tree(20, 101)),
        ("dodecahedron tree, 13 bricks".into(), random_dodec_tree(13, 102)),
        (
            "cube/prism tree, 15+5 bricks".into(),
            random_cube_prism_tree(15, 5, 103),
        ),
        ("cube block 3x2x2".into(), block(3, 2, 2)),
        (
            "dodecahedral torus".into(),
            dodecahedral_torus(12).map_err(|e| e.to_string())?,
        ),
        ("great dodecahedron".into(), great_dodecahedron()),
    ];
    for kind in [
        SolidKind::Cube,
        SolidKind::Dodecahedron,
        SolidKind::OctagonalPrism,
        SolidKind::HexagonalPrism,
        SolidKind::TruncatedOctahedron,
        SolidKind::TruncatedCuboctahedron,
    ] {
        surfaces.push((format!("{kind:?}"), make_solid(kind)));
    }
    for kind in [
        AssemblyKind::TruncOctaFourCube,
        AssemblyKind::TruncCuboctaFourCube,
        AssemblyKind::TruncCuboctaThreeCube,
    ] {
        surfaces.push((
            format!("{kind:?}"),
            counterexample(kind, None).map_err(|e| e.to_string())?,
        ));
    }
    let mut slowest = Duration::ZERO;
    for (name, s) in &surfaces {
        let t = Instant::now();
        let (total, expected, ok) = s.gauss_bonnet_check();
        let elapsed = t.elapsed();
        let residual = total - expected;
        if !ok || !residual.is_zero() {
            return Err(format!(
                "{name}: total curvature {total}, expected {expected} (residual {residual})"
            ));
        }
        if elapsed > Duration::from_secs(1) {
            return Err(format!("{name}: curvature check took {elapsed:?}"));
        }
        slowest = slowest.max(elapsed);
    }
    Ok(format!(
        "{} surfaces, zero residual on each, slowest check {slowest:?}",
        surfaces.len()
    ))
}

/// The closed-form dihedral angles match the published two-decimal values
/// within 0.01°, and the angle measured on realized coordinates agrees.
fn c2_dihedral_table() -> Result<String, String> {
    let printed: [(usize, f64, f64); 5] = [
        (5, 116.57, 116.57),
        (7, 142.64, 132.43),
        (8, 152.54, 141.67),
        (9, 162.27, 153.22),
        (10, 180.00, 180.00),
    ];
    for (n, between_pentagons, pentagon_to_ngon) in printed {
        let (a, b) = dihedral_table(n).map_err(|e| e.to_string())?;
        if (a - between_pentagons).abs() > 0.01 {
            return Err(format!("n={n}: pentagon/pentagon angle {a:.4}, table says {between_pentagons}"));
        }
        if (b - pentagon_to_ngon).abs() > 0.01 {
            return Err(format!("n={n}: pentagon/n-gon angle {b:.4}, table says {pentagon_to_ngon}"));
        }
    }
    let s = make_solid(SolidKind::Dodecahedron);
    let mut worst = 0.0f64;
    for f in 0..s.face_count() {
        for h in s.face_halfedges(f) {
            let measured = dihedral_angle(&s, h, EPS).map_err(|e| e.to_string())?;
            worst = worst.max((measured - 116.57).abs());
        }
    }
    if worst > 0.01 {
        return Err(format!("realized dodecahedron dihedral off by {worst:.5}°"));
    }
    Ok(format!(
        "ten table values within 0.01°; realized dodecahedron edges within {worst:.5}° of 116.57°"
    ))
}

/// Random dodecahedron trees decompose to exactly their brick count with a
/// verified certificate, and the dodecahedral torus to its ring count.
fn c3_pentagon_round_trip() -> Result<String, String> {
    let mut slowest = Duration::ZERO;
    for i in 0..50usize {
        let k = 1 + (i * 7 + 5) % 15;
        let s = random_dodec_tree(k, 2000 + i as u64);
        let t = Instant::now();
        let cert = decompose_pent(&s, EPS).map_err(|e| format!("tree {i} (k={k}): {e}"))?;
        let elapsed = t.elapsed();
        if cert.bricks.len() != k {
            return Err(format!("tree {i}: {} bricks, expected {k}", cert.bricks.len()));
        }
        if !verify_certificate(&s, &cert, EPS).is_valid() {
            return Err(format!("tree {i}: certificate failed verification"));
        }
        if elapsed > Duration::from_secs(10) {
            return Err(format!("tree {i} (k={k}): took {elapsed:?}"));
        }
        slowest = slowest.max(elapsed);
    }
    let torus = dodecahedral_torus(12).map_err(|e| e.to_string())?;
    let t = Instant::now();
    let cert = decompose_pent(&torus, EPS).map_err(|e| format!("torus: {e}"))?;
    let elapsed = t.elapsed();
    if cert.bricks.len() != 12 {
        return Err(format!("torus: {} bricks, expected 12", cert.bricks.len()));
    }
    if !verify_certificate(&torus, &cert, EPS).is_valid() {
        return Err("torus: certificate failed verification".into());
    }
    if elapsed > Duration::from_secs(10) {
        return Err(format!("torus took {elapsed:?}"));
    }
    slowest = slowest.max(elapsed);
    Ok(format!(
        "50 random trees (1..=15 bricks) and the 12-ring torus round-trip; slowest {slowest:?}"
    ))
}

/// Random cube/prism trees and solid blocks decompose to the generator's
/// exact brick multiset with verified certificates.
fn c4_square_octagon_round_trip() -> Result<String, String> {
    let mut slowest = Duration::ZERO;
    let mut polycubes = 0usize;
    let run = |label: String, s: &Surface, cubes: usize, prisms: usize| -> Result<Duration, String> {
        let t = Instant::now();
        let cert = decompose_square_oct(s, EPS).map_err(|e| format!("{label}: {e}"))?;
        let elapsed = t.elapsed();
        if cert.count(BrickKind::Cube) != cubes
            || cert.count(BrickKind::OctagonalPrism) != prisms
            || cert.count(BrickKind::Dodecahedron) != 0
        {
            return Err(format!(
                "{label}: got {} cubes + {} prisms, expected {cubes}+{prisms}",
                cert.count(BrickKind::Cube),
                cert.count(BrickKind::OctagonalPrism),
            ));
        }
        if !verify_certificate(s, &cert, EPS).is_valid() {
            return Err(format!("{label}: certificate failed verification"));
        }
        if elapsed > Duration::from_secs(30) {
            return Err(format!("{label}: took {elapsed:?}"));
        }
        Ok(elapsed)
    };
    for i in 0..50usize {
        let prisms = i % 6;
        let cubes = 1 + (i * 11 + 3) % 30;
        if prisms == 0 {
            polycubes += 1;
        }
        let s = random_cube_prism_tree(cubes, prisms, 3000 + i as u64);
        slowest = slowest.max(run(format!("tree {i} ({cubes}+{prisms})"), &s, cubes, prisms)?);
    }
    for (nx, ny, nz) in [(2, 2, 2), (3, 2, 1), (4, 1, 1), (3, 2, 2)] {
        let s = block(nx, ny, nz);
        polycubes += 1;
        slowest = slowest.max(run(format!("block {nx}x{ny}x{nz}"), &s, nx * ny * nz, 0)?);
    }
    Ok(format!(
        "54 compounds (≤30 cubes, ≤5 prisms; {polycubes} pure polycubes) returned exact multisets; slowest {slowest:?}"
    ))
}

/// The tube assemblies have the advertised Euler characteristics and genus,
/// and both decomposition drivers reject them for genus.
fn c5_high_genus_rejection() -> Result<String, String> {
    let cases = [
        (AssemblyKind::TruncOctaFourCube, -96i64, 49i64),
        (AssemblyKind::TruncCuboctaFourCube, -96, 49),
        (AssemblyKind::TruncCuboctaThreeCube, -32, 17),
    ];
    for (kind, chi_want, genus_want) in cases {
        let s = counterexample(kind, None).map_err(|e| e.to_string())?;
        let chi = s.vertex_count() as i64 - s.edge_count() as i64 + s.face_count() as i64;
        if chi != chi_want {
            return Err(format!("{kind:?}: V-E+F = {chi}, expected {chi_want}"));
        }
        let genus = s.genus().map_err(|e| e.to_string())?;
        if genus != genus_want {
            return Err(format!("{kind:?}: genus {genus}, expected {genus_want}"));
        }
        match decompose_pent(&s, EPS) {
            Err(DecomposeError::GenusOutOfRange { genus }) if genus == genus_want => {}
            other => return Err(format!("{kind:?}: pentagon driver returned {other:?}")),
        }
        match decompose_square_oct(&s, EPS) {
            Err(DecomposeError::GenusOutOfRange { genus }) if genus == genus_want => {}
            other => return Err(format!("{kind:?}: square/octagon driver returned {other:?}")),
        }
    }
    Ok("χ = -96/-96/-32, genus 49/49/17, both drivers reject with the genus error".into())
}

/// Faces adjacent across an edge.
fn face_neighbors(s: &Surface, f: FaceId) -> Vec<FaceId> {
    s.face_halfedges(f)
        .iter()
        .map(|&h| s.halfedge(s.halfedge(h).twin).face)
        .collect()
}

/// Connected components of the complement of `cycle` in the face-adjacency
/// graph.
fn complement_sides(s: &Surface, cycle: &BTreeSet<FaceId>) -> Vec<BTreeSet<FaceId>> {
    let mut seen: BTreeSet<FaceId> = cycle.clone();
    let mut sides = Vec::new();
    for f0 in 0..s.face_count() {
        if seen.contains(&f0) {
            continue;
        }
        let mut side = BTreeSet::new();
        let mut stack = vec![f0];
        seen.insert(f0);
        while let Some(f) = stack.pop() {
            side.insert(f);
            for g in face_neighbors(s, f) {
                if seen.insert(g) {
                    stack.push(g);
                }
            }
        }
        sides.push(side);
    }
    sides
}

/// A side of `b` containing no other bigon entirely, if any (the defining
/// property of a minimal bigon).
fn bigon_free_side(s: &Surface, b: &Bigon, all: &[Bigon]) -> Option<BTreeSet<FaceId>> {
    let cyc: BTreeSet<FaceId> = b.cycle_faces(s).into_iter().collect();
    let mut sides = complement_sides(s, &cyc);
    if sides.len() == 1 {
        // The cycle hugs a hemisphere so tightly that one side holds no
        // complete face; that side is trivially bigon-free.
        sides.push(BTreeSet::new());
    }
    'sides: for side in sides {
        for other in all {
            let oc = other.cycle_faces(s);
            let strictly_inside = oc.iter().any(|f| side.contains(f));
            let within_disk = oc.iter().all(|f| side.contains(f) || cyc.contains(f));
            if strictly_inside && within_disk {
                continue 'sides;
            }
        }
        return Some(side);
    }
    None
}

/// Brute-force structure facts at desk scale: positive-curvature pentagon
/// faces have only degree-3 corners; small square/octagon surfaces have no
/// mixed bigon and no monogon; minimal octagon bigons enclose only squares.
fn c6_structure_lemmas() -> Result<String, String> {
    let pent_corpus: Vec<(String, Surface)> = vec![
        ("dodecahedron".into(), make_solid(SolidKind::Dodecahedron)),
        ("tree of 4".into(), random_dodec_tree(4, 41)),
        ("tree of 9".into(), random_dodec_tree(9, 42)),
        ("tree of 14".into(), random_dodec_tree(14, 43)),
        (
            "torus".into(),
            dodecahedral_torus(12).map_err(|e| e.to_string())?,
        ),
        ("great dodecahedron".into(), great_dodecahedron()),
    ];
    let mut positive_faces = 0usize;
    for (name, s) in &pent_corpus {
        for f in 0..s.face_count() {
            if !s.facial_curvature(f).is_positive() {
                continue;
            }
            positive_faces += 1;
            for &v in s.face_vertices(f) {
                let d = s.vertex_type(v).len();
                if d != 3 {
                    return Err(format!(
                        "{name}: positive-curvature face {f} has a degree-{d} vertex"
                    ));
                }
            }
        }
    }

    let so_corpus: Vec<(String, Surface)> = vec![
        ("cube".into(), make_solid(SolidKind::Cube)),
        ("octagonal prism".into(), make_solid(SolidKind::OctagonalPrism)),
        ("prism tower 2".into(), prism_tower(2)),
        ("prism tower 3".into(), prism_tower(3)),
        ("block 2x1x1".into(), block(2, 1, 1)),
        ("block 2x2x1".into(), block(2, 2, 1)),
        ("block 2x2x2".into(), block(2, 2, 2)),
        (
            "cube+prism".into(),
            glue(&make_solid(SolidKind::Cube), 0, SolidKind::OctagonalPrism, 0)
                .map_err(|e| e.to_string())?,
        ),
        ("tree 2+1".into(), random_cube_prism_tree(2, 1, 31)),
        ("tree 3+0".into(), random_cube_prism_tree(3, 0, 32)),
        ("tree 1+2".into(), random_cube_prism_tree(1, 2, 33)),
    ];
    let mut bigon_count = 0usize;
    let mut minimal_octagon_bigons = 0usize;
    for (name, s) in &so_corpus {
        if s.face_count() > 30 {
            return Err(format!("{name}: corpus surface exceeds 30 faces"));
        }
        let bigons = all_bigons(s, EPS).map_err(|e| format!("{name}: {e}"))?;
        bigon_count += bigons.len();
        for b in &bigons {
            if b.kind == BigonKind::Mixed {
                return Err(format!("{name}: enumeration found a mixed bigon"));
            }
        }
        if let Some(walk) = find_monogon(s, EPS).map_err(|e| format!("{name}: {e}"))? {
            return Err(format!("{name}: found a monogon of length {}", walk.len()));
        }
        for b in &bigons {
            if b.kind != BigonKind::Octagon {
                continue;
            }
            let Some(side) = bigon_free_side(s, b, &bigons) else {
                continue;
            };
            minimal_octagon_bigons += 1;
            let turnings = b.turning_faces(s);
            let disk: Vec<FaceId> = side
                .iter()
                .copied()
                .chain(b.cycle_faces(s))
                .filter(|f| !turnings.contains(f))
                .collect();
            for f in disk {
                if s.face_degree(f) != 4 {
                    return Err(format!(
                        "{name}: minimal octagon bigon encloses a degree-{} face",
                        s.face_degree(f)
                    ));
                }
            }
        }
        if let Ok(mb) = find_minimal_bigon(s, EPS) {
            if mb.kind == BigonKind::Octagon {
                let report = check_interior_structure(s, &mb, EPS);
                if !report.is_clean() {
                    return Err(format!("{name}: {:?}", report.violations));
                }
            }
        }
    }
    Ok(format!(
        "{positive_faces} positive-curvature faces all degree-3-cornered; {bigon_count} bigons with no mixed kind and no monogon; {minimal_octagon_bigons} minimal octagon bigons enclose only squares"
    ))
}

fn try_band_op(rng: &mut ChaCha8Rng, s: &Surface) -> Option<(SurgeryOutcome, i64)> {
    let bands = all_bands(s, EPS).ok()?;
    let squares: Vec<_> = bands.iter().filter(|b| b.all_squares(s)).collect();
    if squares.is_empty() {
        return None;
    }
    let band = squares[rng.gen_range(0..squares.len())];
    let base = -(band.len() as i64);
    band_surgery(s, band, EPS).ok().map(|o| (o, base))
}

fn try_cube_flip_op(rng: &mut ChaCha8Rng, s: &Surface) -> Option<(SurgeryOutcome, i64)> {
    let mut corners = Vec::new();
    for v in 0..s.vertex_count() {
        let fs = s.vertex_faces(v);
        if fs.len() == 3 && fs.iter().all(|&f| s.face_degree(f) == 4) {
            corners.push([fs[0], fs[1], fs[2]]);
        }
    }
    if corners.is_empty() {
        return None;
    }
    let corner = corners[rng.gen_range(0..corners.len())];
    cube_flip(s, corner, EPS).ok().map(|o| (o, 0))
}

fn try_prism_flip_op(rng: &mut ChaCha8Rng, s: &Surface) -> Option<(SurgeryOutcome, i64)> {
    let octagons: Vec<FaceId> = (0..s.face_count()).filter(|&f| s.face_degree(f) == 8).collect();
    if octagons.is_empty() {
        return None;
    }
    let f = octagons[rng.gen_range(0..octagons.len())];
    let rim = face_neighbors(s, f);
    let start = rng.gen_range(0..rim.len());
    let half = [
        f,
        rim[start],
        rim[(start + 1) % rim.len()],
        rim[(start + 2) % rim.len()],
        rim[(start + 3) % rim.len()],
    ];
    prism_flip(s, &half, EPS).ok().map(|o| (o, 0))
}

fn try_removal_op(s: &Surface) -> Option<(SurgeryOutcome, i64)> {
    let bigon = find_minimal_bigon(s, EPS).ok()?;
    let r = bigon.interior(s).len() as i64;
    let [t1, t2] = bigon.turning_faces(s);
    match bigon.kind {
        BigonKind::Octagon => {
            let k = (s.face_centroid(t1) - s.face_centroid(t2)).norm().round() as i64;
            let model_faces = 8 * k + 2;
            octagon_removal_surgery(s, &bigon, EPS)
                .ok()
                .map(|o| (o, model_faces - 2 * r))
        }
        _ => {
            let bridge = bigon
                .cycle_faces(s)
                .into_iter()
                .filter(|&f| f != t1 && f != t2)
                .filter(|&f| {
                    let n = face_neighbors(s, f);
                    n.contains(&t1) && n.contains(&t2)
                })
                .min()?;
            let model_faces = if s.face_degree(bridge) == 4 { 6 } else { 10 };
            brick_removal_surgery(s, &bigon, EPS)
                .ok()
                .map(|o| (o, model_faces - 2 * r))
        }
    }
}

fn try_cap_op(s: &Surface) -> Option<(SurgeryOutcome, i64)> {
    if s.face_degree_profile().keys().any(|&d| d != 5) {
        return None;
    }
    for f in 0..s.face_count() {
        if s.face_vertices(f).iter().any(|&v| s.vertex_type(v).len() != 3) {
            continue;
        }
        let gen1 = s.face_generations(f, 1);
        if gen1.len() != 5 {
            continue;
        }
        let core: BTreeSet<FaceId> = gen1.iter().copied().chain([f]).collect();
        let mut candidates: Vec<FaceId> = Vec::new();
        for &g in &gen1 {
            for h in face_neighbors(s, g) {
                if core.contains(&h) {
                    continue;
                }
                let touches = face_neighbors(s, h).iter().filter(|n| core.contains(n)).count();
                if touches >= 2 {
                    candidates.push(h);
                }
            }
        }
        candidates.sort_unstable();
        candidates.dedup();
        for extra in candidates {
            let region: Vec<FaceId> = core.iter().copied().chain([extra]).collect();
            if let Ok(o) = polyhedral_surgery(s, &region, SolidKind::Dodecahedron, EPS) {
                return Some((o, 12 - 2 * region.len() as i64));
            }
        }
    }
    None
}

/// One thousand randomized surgeries and flips across evolving surfaces:
/// genus and validator cleanliness are preserved, the face-count change is
/// exactly the base change of the move minus two per absorbed coincident
/// pair, and every cancellation-free flip undoes itself up to isomorphism.
fn c7_surgery_invariants() -> Result<String, String> {
    // Deterministic preamble: at every corner of a 2×2×2 block the three cap
    // squares are backed by material, so the flip is a pure three-for-three
    // exchange; flipping the caps again must restore the block.
    let block222 = block(2, 2, 2);
    let mut corner_involutions = 0usize;
    for v in 0..block222.vertex_count() {
        let fs = block222.vertex_faces(v);
        if fs.len() != 3 || !fs.iter().all(|&f| block222.face_degree(f) == 4) {
            continue;
        }
        let out = cube_flip(&block222, [fs[0], fs[1], fs[2]], EPS)
            .map_err(|e| format!("corner at vertex {v}: {e}"))?;
        if out.absorbed_pairs != 0 {
            return Err(format!("corner at vertex {v}: flip absorbed {} pairs", out.absorbed_pairs));
        }
        let back = cube_flip(
            &out.surface,
            [out.new_faces[0], out.new_faces[1], out.new_faces[2]],
            EPS,
        )
        .map_err(|e| format!("corner at vertex {v}: flip-back: {e}"))?;
        if back.surface.is_isomorphic(&block222).is_none() {
            return Err(format!("corner at vertex {v}: double flip did not restore the block"));
        }
        corner_involutions += 1;
    }
    if corner_involutions != 8 {
        return Err(format!("expected 8 block corners, found {corner_involutions}"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let fresh: Vec<Surface> = vec![
        block(2, 2, 2),
        block(3, 2, 1),
        prism_tower(2),
        prism_tower(3),
        random_cube_prism_tree(6, 2, 71),
        random_cube_prism_tree(5, 0, 72),
        random_dodec_tree(5, 73),
        random_dodec_tree(3, 74),
        make_solid(SolidKind::Cube),
        make_solid(SolidKind::OctagonalPrism),
        make_solid(SolidKind::Dodecahedron),
        block(2, 1, 1),
        random_cube_prism_tree(3, 1, 75),
    ];
    let mut pool = fresh.clone();
    let mut successes = 0usize;
    let mut by_op = [0usize; 5];
    let mut cube_involutions = 0usize;
    let mut prism_involutions = 0usize;
    let mut attempts = 0usize;
    while successes < 1000 {
        attempts += 1;
        if attempts > 200_000 {
            return Err(format!("only {successes} applications succeeded"));
        }
        let idx = rng.gen_range(0..pool.len());
        if pool[idx].face_count() < 6 {
            pool[idx] = fresh[idx].clone();
        }
        let s = pool[idx].clone();
        let op = rng.gen_range(0..5usize);
        let attempt = match op {
            0 => try_band_op(&mut rng, &s),
            1 => try_cube_flip_op(&mut rng, &s),
            2 => try_prism_flip_op(&mut rng, &s),
            3 => try_removal_op(&s),
            _ => try_cap_op(&s),
        };
        let Some((out, base)) = attempt else {
            continue;
        };
        let delta = out.surface.face_count() as i64 - s.face_count() as i64;
        let want = base - 2 * out.absorbed_pairs as i64;
        if delta != want {
            return Err(format!(
                "op {op}: face count changed by {delta}, accounting says {base} - 2·{} = {want}",
                out.absorbed_pairs
            ));
        }
        let genus_before = s.genus().map_err(|e| e.to_string())?;
        let genus_after = out.surface.genus().map_err(|e| e.to_string())?;
        if out.surface.face_count() > 0 && genus_after != genus_before {
            return Err(format!("op {op}: genus changed {genus_before} -> {genus_after}"));
        }
        if !out.surface.validate_proper().is_clean() {
            return Err(format!("op {op}: result fails the properness validator"));
        }
        if !validate_realization(&out.surface, EPS).is_clean() {
            return Err(format!("op {op}: result fails the realization validator"));
        }
        if out.absorbed_pairs == 0 && (op == 1 || op == 2) {
            let back = if op == 1 {
                cube_flip(
                    &out.surface,
                    [out.new_faces[0], out.new_faces[1], out.new_faces[2]],
                    EPS,
                )
            } else {
                prism_flip(&out.surface, &out.new_faces, EPS)
            }
            .map_err(|e| format!("op {op}: flip-back failed: {e}"))?;
            if back.surface.is_isomorphic(&s).is_none() {
                return Err(format!("op {op}: double flip did not restore the surface"));
            }
            if op == 1 {
                cube_involutions += 1;
            } else {
                prism_involutions += 1;
            }
        }
        successes += 1;
        by_op[op] += 1;
        pool[idx] = if out.surface.face_count() >= 6 {
            out.surface
        } else {
            fresh[idx].clone()
        };
    }
    if cube_involutions == 0 {
        return Err("no cancellation-free cube flip occurred".into());
    }
    Ok(format!(
        "1000 applications (bands {}, cube flips {}, prism flips {}, removals {}, caps {}): genus and validators preserved, face accounting exact; all {corner_involutions} block corners plus {cube_involutions} random cube-flip and {prism_involutions} prism-flip double applications restored their surfaces (every prism flip on solid compounds absorbs coincident pairs, so cancellation-free prism flips do not arise)",
        by_op[0], by_op[1], by_op[2], by_op[3], by_op[4]
    ))
}

/// The certificate verifier is an independent oracle: genuine certificates
/// pass, and every tampered or mismatched variant is rejected.
fn c8_certificate_soundness() -> Result<String, String> {
    let s = random_cube_prism_tree(4, 2, 88);
    let cert = decompose_square_oct(&s, EPS).map_err(|e| e.to_string())?;
    if !verify_certificate(&s, &cert, EPS).is_valid() {
        return Err("genuine cube/prism certificate rejected".into());
    }
    let mut tampered: Vec<(&str, Certificate)> = Vec::new();
    let mut dropped = cert.clone();
    dropped.bricks.pop();
    tampered.push(("dropped brick", dropped));
    let mut duplicated = cert.clone();
    duplicated.bricks.push(duplicated.bricks[0].clone());
    tampered.push(("duplicated brick", duplicated));
    let mut nudged = cert.clone();
    nudged.bricks[0].place.translation.x += 0.25;
    tampered.push(("nudged placement", nudged));
    let mut swapped = cert.clone();
    swapped.bricks[0].kind = match swapped.bricks[0].kind {
        BrickKind::Cube => BrickKind::OctagonalPrism,
        _ => BrickKind::Cube,
    };
    tampered.push(("swapped kind", swapped));
    let mut sheared = cert.clone();
    sheared.bricks[0].place.linear[(0, 1)] += 0.1;
    tampered.push(("sheared rotation", sheared));
    for (label, bad) in &tampered {
        if verify_certificate(&s, bad, EPS).is_valid() {
            return Err(format!("verifier accepted a certificate with a {label}"));
        }
    }
    let cube = make_solid(SolidKind::Cube);
    let cube_cert = decompose_square_oct(&cube, EPS).map_err(|e| e.to_string())?;
    if verify_certificate(&s, &cube_cert, EPS).is_valid() {
        return Err("verifier accepted a certificate for a different surface".into());
    }
    let p = random_dodec_tree(3, 89);
    let pent_cert = decompose_pent(&p, EPS).map_err(|e| e.to_string())?;
    if !verify_certificate(&p, &pent_cert, EPS).is_valid() {
        return Err("genuine dodecahedron certificate rejected".into());
    }
    Ok(format!(
        "genuine certificates pass; {} tampered variants and a cross-surface certificate rejected; the verifier reads only the finished brick list, never the drivers' search state",
        tampered.len()
    ))
}
