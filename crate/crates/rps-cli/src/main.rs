//! Command-line front end: validate, inspect, decompose, and convert
//! regular-polygon surfaces.
//!
//! Machine-readable results go to stdout; diagnostics go to stderr. Exit
//! codes: 0 success, 1 validation or verification failure, 2 decomposition
//! failure, 3 parse or usage error. Input files default to stdin (`-` also
//! reads stdin), so commands pipe: `rps gen dodecahedron | rps info`.

use std::fs;
use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rps_core::bands::all_bands;
use rps_core::decompose::{
    curvature_audit_5n, decompose_pent, decompose_square_oct, verify_certificate, BrickKind,
    Certificate, DecomposeError,
};
use rps_core::generators::{
    block, counterexample, dodecahedral_torus, great_dodecahedron, make_solid, prism_tower,
    random_cube_prism_tree, random_dodec_tree, AssemblyKind, SolidKind,
};
use rps_core::geometry::validate_realization;
use rps_core::io::{
    export_obj, import_off, parse_certificate, parse_rps, serialize_certificate, serialize_rps,
    IoError,
};
use rps_core::{AnglePi, Surface};

#[derive(Parser)]
#[command(name = "rps", version, about = "Regular-polygon surface toolkit")]
struct Cli {
    /// Geometric tolerance for coordinate comparisons.
    #[arg(long, global = true, default_value_t = rps_core::DEFAULT_EPS)]
    eps: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Family {
    Pent,
    SquareOct,
    Auto,
}

#[derive(Subcommand)]
enum Command {
    /// Check properness and unit-edge regularity of a surface.
    Validate { file: Option<PathBuf> },
    /// Print counts, Euler characteristic, genus, and curvature summary.
    Info { file: Option<PathBuf> },
    /// Print exact curvature as a rational multiple of pi, plus decimals.
    Curvature {
        file: Option<PathBuf>,
        /// List facial curvature per face instead of per vertex.
        #[arg(long, conflicts_with = "per_vertex")]
        per_face: bool,
        /// List angle defect per vertex (the default listing).
        #[arg(long)]
        per_vertex: bool,
    },
    /// List the parallel bands of quadrilateral faces.
    Bands { file: Option<PathBuf> },
    /// Curvature audit for pentagon-dominated surfaces.
    Audit { file: Option<PathBuf> },
    /// Decompose a surface into bricks and write the certificate.
    Decompose {
        file: Option<PathBuf>,
        /// Brick family to target.
        #[arg(long, value_enum, default_value_t = Family::Auto)]
        family: Family,
        /// Certificate destination (`-` for stdout).
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Check a brick certificate against a surface.
    Verify {
        file: Option<PathBuf>,
        /// Certificate file to check.
        #[arg(long)]
        cert: PathBuf,
    },
    /// Generate a named surface.
    Gen {
        /// cube, dodecahedron, octagonal-prism, hexagonal-prism,
        /// truncated-octahedron, truncated-cuboctahedron, torus,
        /// great-dodecahedron, dodec-tree, cube-prism-tree, prism-tower,
        /// block, to4, tco4, tco3.
        name: String,
        /// Size parameter (torus ring length, tree bricks, tower height).
        #[arg(long)]
        n: Option<usize>,
        /// Cube count for cube-prism-tree.
        #[arg(long)]
        cubes: Option<usize>,
        /// Prism count for cube-prism-tree.
        #[arg(long)]
        prisms: Option<usize>,
        /// Seed for the randomized tree generators.
        #[arg(long)]
        seed: Option<u64>,
        /// Block extents.
        #[arg(long, default_value_t = 1)]
        nx: usize,
        #[arg(long, default_value_t = 1)]
        ny: usize,
        #[arg(long, default_value_t = 1)]
        nz: usize,
        /// Port-pairing file for the tube assemblies: one `a b` pair per
        /// line, ports indexed globally.
        #[arg(long)]
        pairing: Option<PathBuf>,
        /// Output destination (stdout when omitted).
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Export a surface as Wavefront OBJ.
    ExportObj {
        file: Option<PathBuf>,
        /// Output destination (stdout when omitted).
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

/// A command failure with its exit code.
enum Failure {
    /// Validation or verification failed (exit 1).
    Check(String),
    /// Decomposition failed (exit 2).
    Decompose(String),
    /// Parse or usage error (exit 3).
    Usage(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Check(_) => 1,
            Failure::Decompose(_) => 2,
            Failure::Usage(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Check(m) | Failure::Decompose(m) | Failure::Usage(m) => m,
        }
    }
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", f.message());
            f.code()
        }
    }
}

fn read_text(file: &Option<PathBuf>) -> Result<String, Failure> {
    match file {
        Some(p) if p.as_os_str() != "-" => fs::read_to_string(p)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", p.display()))),
        _ => {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Failure::Usage(format!("cannot read stdin: {e}")))?;
            Ok(text)
        }
    }
}

/// Loads a surface, sniffing OFF by its header; anything else is parsed as
/// the native format. Structural defects count as validation failures,
/// malformed text as parse errors.
fn load_surface(file: &Option<PathBuf>) -> Result<Surface, Failure> {
    let text = read_text(file)?;
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    let is_off = first
        .split_whitespace()
        .next()
        .is_some_and(|t| t.ends_with("OFF"));
    let parsed = if is_off { import_off(&text) } else { parse_rps(&text) };
    parsed.map_err(|e| match e {
        IoError::Surface(se) => Failure::Check(se.to_string()),
        other => Failure::Usage(other.to_string()),
    })
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) if p.as_os_str() != "-" => fs::write(p, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        _ => {
            print!("{text}");
            Ok(())
        }
    }
}

fn angle_line(a: AnglePi) -> String {
    format!("{a} ({:.6})", a.to_radians())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let eps = cli.eps;
    match cli.command {
        Command::Validate { file } => {
            let s = load_surface(&file)?;
            let proper = s.validate_proper();
            let real = validate_realization(&s, eps);
            for v in &proper.violations {
                eprintln!("properness: {v:?}");
            }
            for v in &real.violations {
                eprintln!("realization: {v:?}");
            }
            println!("proper {}", verdict(proper.is_clean()));
            println!("realization {}", verdict(real.is_clean()));
            if proper.is_clean() && real.is_clean() {
                Ok(())
            } else {
                Err(Failure::Check("surface failed validation".into()))
            }
        }
        Command::Info { file } => {
            let s = load_surface(&file)?;
            println!("vertices {}", s.vertex_count());
            println!("edges {}", s.edge_count());
            println!("faces {}", s.face_count());
            println!("components {}", s.connected_components().len());
            println!("euler {}", s.euler_characteristic());
            match s.genus() {
                Ok(g) => println!("genus {g}"),
                Err(e) => println!("genus undefined ({e})"),
            }
            let profile: Vec<String> = s
                .face_degree_profile()
                .iter()
                .map(|(k, n)| format!("{k}:{n}"))
                .collect();
            println!("degrees {}", profile.join(" "));
            let (total, expected, ok) = s.gauss_bonnet_check();
            println!("total-curvature {}", angle_line(total));
            println!("expected-curvature {}", angle_line(expected));
            println!("gauss-bonnet {}", verdict(ok));
            Ok(())
        }
        Command::Curvature {
            file,
            per_face,
            per_vertex: _,
        } => {
            let s = load_surface(&file)?;
            if per_face {
                for f in 0..s.face_count() {
                    println!("f {f} {}", angle_line(s.facial_curvature(f)));
                }
            } else {
                for v in 0..s.vertex_count() {
                    println!("v {v} {}", angle_line(s.vertex_curvature(v)));
                }
            }
            println!("total {}", angle_line(s.total_curvature()));
            Ok(())
        }
        Command::Bands { file } => {
            let s = load_surface(&file)?;
            let bands = all_bands(&s, eps).map_err(|e| Failure::Check(e.to_string()))?;
            println!("bands {}", bands.len());
            for (i, band) in bands.iter().enumerate() {
                let faces: Vec<String> =
                    band.faces(&s).iter().map(|f| f.to_string()).collect();
                let texture = if band.all_squares(&s) { "squares" } else { "mixed" };
                println!("band {i} length {} {} faces {}", band.len(), texture, faces.join(" "));
            }
            Ok(())
        }
        Command::Audit { file } => {
            let s = load_surface(&file)?;
            let report = curvature_audit_5n(&s).map_err(|e| Failure::Check(e.to_string()))?;
            match report.n {
                Some(n) => println!("n {n}"),
                None => println!("n none"),
            }
            println!("pentagons {}", report.pentagon_count);
            println!("ngons {}", report.ngon_count);
            for (ty, count) in &report.positive_vertex_types {
                let ty_s: Vec<String> = ty.iter().map(|d| d.to_string()).collect();
                println!("positive-vertex-type {} count {count}", ty_s.join(","));
            }
            match report.regional_bound {
                Some(b) => println!("regional-bound {}", angle_line(b)),
                None => println!("regional-bound none"),
            }
            match report.max_regional_curvature {
                Some(m) => println!("max-regional-curvature {}", angle_line(m)),
                None => println!("max-regional-curvature none"),
            }
            println!(
                "genus-zero-feasible {}",
                if report.genus_zero_feasible { "yes" } else { "no" }
            );
            Ok(())
        }
        Command::Decompose { file, family, out } => {
            let s = load_surface(&file)?;
            let family = resolve_family(&s, family)?;
            let cert = match family {
                Family::Pent => decompose_pent(&s, eps),
                Family::SquareOct => decompose_square_oct(&s, eps),
                Family::Auto => unreachable!("resolved above"),
            }
            .map_err(|e| Failure::Decompose(e.to_string()))?;
            let text = serialize_certificate(&cert, eps);
            if out.as_os_str() == "-" {
                print!("{text}");
                summary_to(&mut std::io::stderr(), &cert);
            } else {
                fs::write(&out, text)
                    .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", out.display())))?;
                summary_to(&mut std::io::stdout(), &cert);
            }
            Ok(())
        }
        Command::Verify { file, cert } => {
            let s = load_surface(&file)?;
            let text = fs::read_to_string(&cert)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", cert.display())))?;
            let cert = parse_certificate(&text).map_err(|e| Failure::Usage(e.to_string()))?;
            let report = verify_certificate(&s, &cert, eps);
            for issue in &report.issues {
                eprintln!("issue: {issue:?}");
            }
            println!("bricks {}", report.brick_count);
            println!("interfaces {}", report.interface_pairs);
            println!("verification {}", verdict(report.is_valid()));
            if report.is_valid() {
                Ok(())
            } else {
                Err(Failure::Check("certificate failed verification".into()))
            }
        }
        Command::Gen {
            name,
            n,
            cubes,
            prisms,
            seed,
            nx,
            ny,
            nz,
            pairing,
            out,
        } => {
            let s = generate(&name, n, cubes, prisms, seed, (nx, ny, nz), &pairing)?;
            write_out(&out, &serialize_rps(&s))
        }
        Command::ExportObj { file, out } => {
            let s = load_surface(&file)?;
            write_out(&out, &export_obj(&s))
        }
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

fn summary_to(w: &mut dyn std::io::Write, cert: &Certificate) {
    let _ = writeln!(w, "bricks {}", cert.bricks.len());
    for (kind, tag) in [
        (BrickKind::Cube, "cube"),
        (BrickKind::OctagonalPrism, "octagonal-prism"),
        (BrickKind::Dodecahedron, "dodecahedron"),
    ] {
        let count = cert.count(kind);
        if count > 0 {
            let _ = writeln!(w, "{tag} {count}");
        }
    }
}

/// Picks the driver for `auto` from the degree profile.
fn resolve_family(s: &Surface, family: Family) -> Result<Family, Failure> {
    if family != Family::Auto {
        return Ok(family);
    }
    let degrees: Vec<usize> = s.face_degree_profile().keys().copied().collect();
    if degrees.iter().all(|&d| d == 5) && !degrees.is_empty() {
        Ok(Family::Pent)
    } else if degrees.iter().all(|&d| d == 4 || d == 8) && !degrees.is_empty() {
        Ok(Family::SquareOct)
    } else {
        Err(Failure::Decompose(
            DecomposeError::UnsupportedDegrees { degrees }.to_string(),
        ))
    }
}

fn parse_pairing(path: &PathBuf) -> Result<Vec<(usize, usize)>, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let nums: Result<Vec<usize>, _> = l.split_whitespace().map(str::parse).collect();
        match nums {
            Ok(v) if v.len() == 2 => pairs.push((v[0], v[1])),
            _ => {
                return Err(Failure::Usage(format!(
                    "pairing line {}: expected two port indices",
                    i + 1
                )))
            }
        }
    }
    Ok(pairs)
}

#[allow(clippy::too_many_arguments)]
fn generate(
    name: &str,
    n: Option<usize>,
    cubes: Option<usize>,
    prisms: Option<usize>,
    seed: Option<u64>,
    extents: (usize, usize, usize),
    pairing: &Option<PathBuf>,
) -> Result<Surface, Failure> {
    let solid = |kind| Ok(make_solid(kind));
    let assembly = |kind| -> Result<Surface, Failure> {
        let pairs = match pairing {
            Some(p) => Some(parse_pairing(p)?),
            None => None,
        };
        counterexample(kind, pairs.as_deref()).map_err(|e| Failure::Usage(e.to_string()))
    };
    match name {
        "cube" => solid(SolidKind::Cube),
        "dodecahedron" => solid(SolidKind::Dodecahedron),
        "octagonal-prism" => solid(SolidKind::OctagonalPrism),
        "hexagonal-prism" => solid(SolidKind::HexagonalPrism),
        "truncated-octahedron" => solid(SolidKind::TruncatedOctahedron),
        "truncated-cuboctahedron" => solid(SolidKind::TruncatedCuboctahedron),
        "torus" => dodecahedral_torus(n.unwrap_or(12)).map_err(|e| Failure::Usage(e.to_string())),
        "great-dodecahedron" => Ok(great_dodecahedron()),
        "dodec-tree" => Ok(random_dodec_tree(n.unwrap_or(5), seed.unwrap_or(0))),
        "cube-prism-tree" => Ok(random_cube_prism_tree(
            cubes.unwrap_or(5),
            prisms.unwrap_or(2),
            seed.unwrap_or(0),
        )),
        "prism-tower" => Ok(prism_tower(n.unwrap_or(2).max(1))),
        "block" => Ok(block(extents.0, extents.1, extents.2)),
        "to4" => assembly(AssemblyKind::TruncOctaFourCube),
        "tco4" => assembly(AssemblyKind::TruncCuboctaFourCube),
        "tco3" => assembly(AssemblyKind::TruncCuboctaThreeCube),
        other => Err(Failure::Usage(format!(
            "unknown generator \"{other}\"; see `rps gen --help`"
        ))),
    }
}
