//! Exact angles as rational multiples of pi.
//!
//! Every angle that appears in the combinatorial side of this crate — interior
//! angles of regular polygons, vertex curvatures, facial curvatures, total
//! curvature — is a rational multiple of pi. Keeping the rational factor exact
//! (via [`num_rational::Rational64`]) makes curvature bookkeeping integer
//! arithmetic: sums that must equal `2 pi chi` do so exactly, with no epsilon.

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// An angle expressed as `value * pi` with `value` an exact rational.
///
/// The usual arithmetic operators act on the rational factor. Use
/// [`AnglePi::to_radians`] only at the boundary where floating-point geometry
/// takes over.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AnglePi(Rational64);

impl AnglePi {
    /// The zero angle.
    pub const fn zero() -> Self {
        AnglePi(Rational64::new_raw(0, 1))
    }

    /// `pi`.
    pub const fn pi() -> Self {
        AnglePi(Rational64::new_raw(1, 1))
    }

    /// `2 pi`, one full turn.
    pub const fn two_pi() -> Self {
        AnglePi(Rational64::new_raw(2, 1))
    }

    /// `(num / den) * pi`. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        AnglePi(Rational64::new(num, den))
    }

    /// Wraps an existing rational factor.
    pub fn from_rational(r: Rational64) -> Self {
        AnglePi(r)
    }

    /// Interior angle of a regular `k`-gon: `(k - 2) / k * pi`.
    ///
    /// Panics if `k < 3`.
    pub fn interior_angle(k: usize) -> Self {
        assert!(k >= 3, "polygon must have at least 3 sides, got {k}");
        let k = k as i64;
        AnglePi(Rational64::new(k - 2, k))
    }

    /// The exact rational factor of pi.
    pub fn rational(self) -> Rational64 {
        self.0
    }

    /// Numerical value in radians.
    pub fn to_radians(self) -> f64 {
        (*self.0.numer() as f64 / *self.0.denom() as f64) * std::f64::consts::PI
    }

    /// Numerical value in degrees.
    pub fn to_degrees(self) -> f64 {
        (*self.0.numer() as f64 / *self.0.denom() as f64) * 180.0
    }

    /// True when the angle is exactly zero.
    pub fn is_zero(self) -> bool {
        self.0.is_zero()
    }

    /// True when the angle is strictly positive.
    pub fn is_positive(self) -> bool {
        self.0.is_positive()
    }

    /// True when the angle is strictly negative.
    pub fn is_negative(self) -> bool {
        self.0.is_negative()
    }

    /// Exact division by a positive integer (used for spreading a vertex
    /// quantity uniformly over the faces meeting the vertex).
    pub fn div_int(self, d: i64) -> Self {
        assert!(d != 0, "division of an angle by zero");
        AnglePi(self.0 / Rational64::from_integer(d))
    }

    /// Exact multiplication by an integer.
    pub fn mul_int(self, m: i64) -> Self {
        AnglePi(self.0 * Rational64::from_integer(m))
    }
}

impl Add for AnglePi {
    type Output = AnglePi;
    fn add(self, rhs: AnglePi) -> AnglePi {
        AnglePi(self.0 + rhs.0)
    }
}

impl AddAssign for AnglePi {
    fn add_assign(&mut self, rhs: AnglePi) {
        self.0 += rhs.0;
    }
}

impl Sub for AnglePi {
    type Output = AnglePi;
    fn sub(self, rhs: AnglePi) -> AnglePi {
        AnglePi(self.0 - rhs.0)
    }
}

impl SubAssign for AnglePi {
    fn sub_assign(&mut self, rhs: AnglePi) {
        self.0 -= rhs.0;
    }
}

impl Neg for AnglePi {
    type Output = AnglePi;
    fn neg(self) -> AnglePi {
        AnglePi(-self.0)
    }
}

impl Mul<i64> for AnglePi {
    type Output = AnglePi;
    fn mul(self, rhs: i64) -> AnglePi {
        self.mul_int(rhs)
    }
}

impl Sum for AnglePi {
    fn sum<I: Iterator<Item = AnglePi>>(iter: I) -> AnglePi {
        iter.fold(AnglePi::zero(), |a, b| a + b)
    }
}

impl fmt::Display for AnglePi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = (*self.0.numer(), *self.0.denom());
        if n == 0 {
            write!(f, "0")
        } else if d == 1 {
            write!(f, "{n} pi")
        } else {
            write!(f, "{n}/{d} pi")
        }
    }
}

impl fmt::Debug for AnglePi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AnglePi({self})")
    }
}
