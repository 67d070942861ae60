//! Text formats: the native surface format, certificate files, OFF import,
//! and OBJ export.
//!
//! The native format is line-oriented and diff-friendly:
//!
//! ```text
//! RPS 1
//! <vertex count> <face count>
//! <x> <y> <z>            one line per vertex
//! <i0> <i1> ... <ik>     one line per face, zero-based indices
//! ```
//!
//! Floats are written with seventeen significant digits, enough to
//! round-trip an `f64` exactly. Certificate files list placed bricks plus
//! the facet pairs glued between them.

use crate::decompose::{Brick, BrickKind, Certificate};
use crate::generators::{make_solid, merge_positions};
use crate::geometry::Isometry;
use crate::surface::{Surface, SurfaceError};
use nalgebra::{Matrix3, Point3, Vector3};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IoError {
    #[error("line {line}: {message}")]
    ParseError { line: usize, message: String },
    #[error("line {line}: vertex index {index} out of range (surface has {limit})")]
    IndexOutOfRange {
        line: usize,
        index: usize,
        limit: usize,
    },
    #[error("unsupported OFF feature: {feature}")]
    UnsupportedOffFeature { feature: String },
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

fn parse_err(line: usize, message: impl Into<String>) -> IoError {
    IoError::ParseError {
        line,
        message: message.into(),
    }
}

fn fmt_float(x: f64) -> String {
    // Seventeen significant digits: exact f64 round-trip.
    format!("{x:.16e}")
}

/// Numbered, non-blank, non-comment lines.
fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

fn parse_floats(line: usize, s: &str, want: usize) -> Result<Vec<f64>, IoError> {
    let vals: Result<Vec<f64>, _> = s.split_whitespace().map(str::parse::<f64>).collect();
    match vals {
        Ok(v) if v.len() == want => Ok(v),
        Ok(v) => Err(parse_err(
            line,
            format!("expected {want} numbers, found {}", v.len()),
        )),
        Err(e) => Err(parse_err(line, format!("bad number: {e}"))),
    }
}

/// Serializes a surface in the native text format.
pub fn serialize_rps(s: &Surface) -> String {
    let mut out = String::from("RPS 1\n");
    out.push_str(&format!("{} {}\n", s.vertex_count(), s.face_count()));
    for v in 0..s.vertex_count() {
        let p = s.position(v);
        out.push_str(&format!(
            "{} {} {}\n",
            fmt_float(p.x),
            fmt_float(p.y),
            fmt_float(p.z)
        ));
    }
    for f in 0..s.face_count() {
        let idx: Vec<String> = s.face_vertices(f).iter().map(|v| v.to_string()).collect();
        out.push_str(&idx.join(" "));
        out.push('\n');
    }
    out
}

/// Parses the native text format back into a surface.
pub fn parse_rps(text: &str) -> Result<Surface, IoError> {
    let lines = content_lines(text);
    let mut it = lines.into_iter();
    let (hl, header) = it.next().ok_or_else(|| parse_err(1, "empty file"))?;
    if header != "RPS 1" {
        return Err(parse_err(hl, format!("expected header \"RPS 1\", found \"{header}\"")));
    }
    let (cl, counts) = it.next().ok_or_else(|| parse_err(hl, "missing counts line"))?;
    let parts: Vec<&str> = counts.split_whitespace().collect();
    if parts.len() != 2 {
        return Err(parse_err(cl, "counts line must be \"<vertices> <faces>\""));
    }
    let nv: usize = parts[0]
        .parse()
        .map_err(|e| parse_err(cl, format!("bad vertex count: {e}")))?;
    let nf: usize = parts[1]
        .parse()
        .map_err(|e| parse_err(cl, format!("bad face count: {e}")))?;
    let mut verts = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (ln, l) = it
            .next()
            .ok_or_else(|| parse_err(cl, format!("expected {nv} vertex lines")))?;
        let v = parse_floats(ln, l, 3)?;
        verts.push(Point3::new(v[0], v[1], v[2]));
    }
    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (ln, l) = it
            .next()
            .ok_or_else(|| parse_err(cl, format!("expected {nf} face lines")))?;
        let mut cyc = Vec::new();
        for tok in l.split_whitespace() {
            let i: usize = tok
                .parse()
                .map_err(|e| parse_err(ln, format!("bad index: {e}")))?;
            if i >= nv {
                return Err(IoError::IndexOutOfRange {
                    line: ln,
                    index: i,
                    limit: nv,
                });
            }
            cyc.push(i);
        }
        if cyc.len() < 3 {
            return Err(parse_err(ln, "a face needs at least three vertices"));
        }
        faces.push(cyc);
    }
    if let Some((ln, _)) = it.next() {
        return Err(parse_err(ln, "trailing content after the face list"));
    }
    Ok(Surface::build(verts, faces)?)
}

// ----- certificates -----

fn kind_tag(kind: BrickKind) -> &'static str {
    match kind {
        BrickKind::Cube => "cube",
        BrickKind::OctagonalPrism => "octagonal-prism",
        BrickKind::Dodecahedron => "dodecahedron",
    }
}

fn tag_kind(tag: &str) -> Option<BrickKind> {
    match tag {
        "cube" => Some(BrickKind::Cube),
        "octagonal-prism" => Some(BrickKind::OctagonalPrism),
        "dodecahedron" => Some(BrickKind::Dodecahedron),
        _ => None,
    }
}

/// Facet pairs glued between bricks: ((brick, facet), (brick, facet)),
/// found by matching coincident facet polygons of opposite winding.
pub fn certificate_interfaces(
    cert: &Certificate,
    eps: f64,
) -> Vec<((usize, usize), (usize, usize))> {
    let mut points: Vec<Point3<f64>> = Vec::new();
    let mut facets: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    for (i, brick) in cert.bricks.iter().enumerate() {
        let model = make_solid(brick.kind.solid());
        let base = points.len();
        points.extend(model.positions().iter().map(|&p| brick.place.apply_point(p)));
        for f in 0..model.face_count() {
            let cyc: Vec<usize> = model.face_vertices(f).iter().map(|&v| base + v).collect();
            facets.push((i, f, cyc));
        }
    }
    let (_, remap) = merge_positions(&points, eps);
    let mut by_set: std::collections::BTreeMap<Vec<usize>, Vec<usize>> =
        std::collections::BTreeMap::new();
    for (i, (_, _, cyc)) in facets.iter().enumerate() {
        let mut key: Vec<usize> = cyc.iter().map(|&v| remap[v]).collect();
        key.sort_unstable();
        by_set.entry(key).or_default().push(i);
    }
    let mut pairs = Vec::new();
    for (_, idxs) in by_set {
        if idxs.len() == 2 {
            let (a, b) = (idxs[0], idxs[1]);
            pairs.push(((facets[a].0, facets[a].1), (facets[b].0, facets[b].1)));
        }
    }
    pairs.sort_unstable();
    pairs
}

/// Serializes a certificate: one line per brick (kind tag, nine rotation
/// numbers row-major, three translation numbers), then the glued facet
/// pairs.
pub fn serialize_certificate(cert: &Certificate, eps: f64) -> String {
    let mut out = String::from("CERT 1\n");
    out.push_str(&format!("bricks {}\n", cert.bricks.len()));
    for brick in &cert.bricks {
        let l = brick.place.linear;
        let t = brick.place.translation;
        let mut nums = Vec::with_capacity(12);
        for r in 0..3 {
            for c in 0..3 {
                nums.push(fmt_float(l[(r, c)]));
            }
        }
        for i in 0..3 {
            nums.push(fmt_float(t[i]));
        }
        out.push_str(&format!("{} {}\n", kind_tag(brick.kind), nums.join(" ")));
    }
    let interfaces = certificate_interfaces(cert, eps);
    out.push_str(&format!("interfaces {}\n", interfaces.len()));
    for ((b1, f1), (b2, f2)) in interfaces {
        out.push_str(&format!("{b1} {f1} {b2} {f2}\n"));
    }
    out
}

/// Parses a certificate file, checking that the placements are rigid and
/// the glued facet indices are in range.
pub fn parse_certificate(text: &str) -> Result<Certificate, IoError> {
    let lines = content_lines(text);
    let mut it = lines.into_iter();
    let (hl, header) = it.next().ok_or_else(|| parse_err(1, "empty file"))?;
    if header != "CERT 1" {
        return Err(parse_err(hl, format!("expected header \"CERT 1\", found \"{header}\"")));
    }
    let (bl, bline) = it.next().ok_or_else(|| parse_err(hl, "missing bricks line"))?;
    let count: usize = bline
        .strip_prefix("bricks ")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| parse_err(bl, "expected \"bricks <count>\""))?;
    let mut bricks = Vec::with_capacity(count);
    for _ in 0..count {
        let (ln, l) = it
            .next()
            .ok_or_else(|| parse_err(bl, format!("expected {count} brick lines")))?;
        let mut toks = l.split_whitespace();
        let tag = toks.next().ok_or_else(|| parse_err(ln, "empty brick line"))?;
        let kind = tag_kind(tag)
            .ok_or_else(|| parse_err(ln, format!("unknown brick kind \"{tag}\"")))?;
        let rest: Vec<&str> = toks.collect();
        let nums = parse_floats(ln, &rest.join(" "), 12)?;
        let linear = Matrix3::from_row_slice(&nums[0..9]);
        let gram = linear.transpose() * linear;
        if (gram - Matrix3::identity()).norm() > crate::DEFAULT_EPS {
            return Err(parse_err(ln, "placement rotation is not orthogonal"));
        }
        let translation = Vector3::new(nums[9], nums[10], nums[11]);
        bricks.push(Brick {
            kind,
            place: Isometry { linear, translation },
        });
    }
    let (il, iline) = it.next().ok_or_else(|| parse_err(bl, "missing interfaces line"))?;
    let icount: usize = iline
        .strip_prefix("interfaces ")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| parse_err(il, "expected \"interfaces <count>\""))?;
    for _ in 0..icount {
        let (ln, l) = it
            .next()
            .ok_or_else(|| parse_err(il, format!("expected {icount} interface lines")))?;
        let nums: Result<Vec<usize>, _> = l.split_whitespace().map(str::parse).collect();
        let nums = nums.map_err(|e| parse_err(ln, format!("bad index: {e}")))?;
        if nums.len() != 4 {
            return Err(parse_err(ln, "interface lines carry four indices"));
        }
        for &(b, f) in [(nums[0], nums[1]), (nums[2], nums[3])].iter() {
            if b >= bricks.len() {
                return Err(IoError::IndexOutOfRange {
                    line: ln,
                    index: b,
                    limit: bricks.len(),
                });
            }
            let facets = make_solid(bricks[b].kind.solid()).face_count();
            if f >= facets {
                return Err(IoError::IndexOutOfRange {
                    line: ln,
                    index: f,
                    limit: facets,
                });
            }
        }
    }
    if let Some((ln, _)) = it.next() {
        return Err(parse_err(ln, "trailing content after the interface list"));
    }
    Ok(Certificate { bricks })
}

// ----- OFF import -----

/// Parses an ASCII OFF file. Color payloads after coordinates or face
/// indices are ignored; binary and extended headers are rejected.
pub fn import_off(text: &str) -> Result<Surface, IoError> {
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let l = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if !l.is_empty() {
            lines.push((i + 1, l));
        }
    }
    let mut it = lines.into_iter().peekable();
    let (hl, first) = *it.peek().ok_or_else(|| parse_err(1, "empty file"))?;
    if first.chars().any(|c| c.is_alphabetic()) {
        let header = first.split_whitespace().next().unwrap();
        if header != "OFF" {
            return Err(IoError::UnsupportedOffFeature {
                feature: format!("header \"{header}\""),
            });
        }
        it.next();
        if first != "OFF" {
            // Counts may share the header line in some writers; reject the
            // ambiguity rather than guess.
            return Err(parse_err(hl, "content after OFF header on the same line"));
        }
    }
    let (cl, counts) = it.next().ok_or_else(|| parse_err(hl, "missing counts line"))?;
    let nums: Result<Vec<i64>, _> = counts.split_whitespace().map(str::parse).collect();
    let nums = nums.map_err(|e| parse_err(cl, format!("bad count: {e}")))?;
    if nums.len() != 3 {
        return Err(parse_err(cl, "counts line must be \"<vertices> <faces> <edges>\""));
    }
    let (nv, nf) = (nums[0] as usize, nums[1] as usize);
    let mut verts = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (ln, l) = it
            .next()
            .ok_or_else(|| parse_err(cl, format!("expected {nv} vertex lines")))?;
        let vals: Result<Vec<f64>, _> = l.split_whitespace().map(str::parse).collect();
        let vals = vals.map_err(|e| parse_err(ln, format!("bad number: {e}")))?;
        if vals.len() < 3 {
            return Err(parse_err(ln, "vertex lines need three coordinates"));
        }
        verts.push(Point3::new(vals[0], vals[1], vals[2]));
    }
    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (ln, l) = it
            .next()
            .ok_or_else(|| parse_err(cl, format!("expected {nf} face lines")))?;
        let toks: Vec<&str> = l.split_whitespace().collect();
        let k: usize = toks[0]
            .parse()
            .map_err(|e| parse_err(ln, format!("bad face size: {e}")))?;
        if k < 3 {
            return Err(parse_err(ln, "a face needs at least three vertices"));
        }
        if toks.len() < k + 1 {
            return Err(parse_err(ln, format!("face promises {k} indices")));
        }
        let mut cyc = Vec::with_capacity(k);
        for tok in &toks[1..=k] {
            let i: usize = tok
                .parse()
                .map_err(|e| parse_err(ln, format!("bad index: {e}")))?;
            if i >= nv {
                return Err(IoError::IndexOutOfRange {
                    line: ln,
                    index: i,
                    limit: nv,
                });
            }
            cyc.push(i);
        }
        faces.push(cyc);
    }
    Ok(Surface::build(verts, faces)?)
}

// ----- OBJ export -----

/// Writes a Wavefront OBJ: `v` lines with seventeen-significant-digit
/// floats, then one `f` line per face with one-based indices.
pub fn export_obj(s: &Surface) -> String {
    let mut out = String::new();
    for v in 0..s.vertex_count() {
        let p = s.position(v);
        out.push_str(&format!(
            "v {} {} {}\n",
            fmt_float(p.x),
            fmt_float(p.y),
            fmt_float(p.z)
        ));
    }
    for f in 0..s.face_count() {
        let idx: Vec<String> = s
            .face_vertices(f)
            .iter()
            .map(|&v| (v + 1).to_string())
            .collect();
        out.push_str(&format!("f {}\n", idx.join(" ")));
    }
    out
}
