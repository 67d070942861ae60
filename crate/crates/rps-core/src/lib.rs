//! Regular polygon surfaces: data structures and algorithms for closed
//! orientable surfaces built from unit-edge regular polygons.
//!
//! The crate is organized around a half-edge surface representation
//! ([`surface::Surface`]) together with an embedding of every vertex in
//! three-dimensional space. On top of that sit:
//!
//! - [`angle`]: exact rational multiples of pi, used for discrete curvature
//!   so that Gauss–Bonnet style bookkeeping is integer-exact.
//! - [`geometry`]: floating-point predicates (regular polygon checks, dihedral
//!   angles, isometry fitting, convex polygon intersection).
//! - [`bands`]: parallel bands of even-degree faces and the closed band
//!   bigons/monogons used to locate removable bricks.
//! - [`surgery`]: cutting a fitted brick out of a surface (or flipping it to
//!   the other side) while keeping the result a valid surface.
//! - [`decompose`]: full decomposition drivers for pentagon-built surfaces and
//!   square/octagon surfaces, plus the curvature audit for mixed pentagon
//!   surfaces, and the independent certificate verifier.
//! - [`generators`]: built-in surfaces (Platonic/Archimedean solids, glued
//!   complexes, dodecahedral tori, high-genus counterexamples, random brick
//!   trees).
//! - [`io`]: text formats for surfaces and decomposition certificates, OFF
//!   import and OBJ export.

pub mod angle;
pub mod bands;
pub mod decompose;
pub mod generators;
pub mod geometry;
pub mod io;
pub mod surface;
pub mod surgery;

pub use angle::AnglePi;
pub use surface::{Surface, SurfaceError};

/// Default tolerance for floating-point geometric predicates, in the same
/// units as the (unit) edge length.
pub const DEFAULT_EPS: f64 = 1e-6;
