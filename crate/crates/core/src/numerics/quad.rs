use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{NumericsError, Rational};

/// An element `a + b·sqrt(d)` of a real quadratic field.
///
/// The representation is canonical: `d` is square-free, and `d == 0` exactly
/// when `b == 0`. Structural equality is therefore numeric equality. A
/// rational value (`d == 0`) mixes freely with any field; two irrational
/// values over different `d` do not (see the `try_*` methods).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadNumber {
    a: Rational,
    b: Rational,
    d: u64,
}

fn square_free_split(d: u64) -> (u64, u64) {
    // d = f^2 * rest, rest square-free
    let mut rest = d;
    let mut f = 1u64;
    let mut p = 2u64;
    while p.saturating_mul(p) <= rest {
        while rest % (p * p) == 0 {
            rest /= p * p;
            f *= p;
        }
        p += 1;
    }
    (f, rest)
}

impl QuadNumber {
    pub fn new(a: Rational, b: Rational, d: u64) -> Self {
        if d == 0 || b.is_zero() {
            return Self::from_rational(a);
        }
        let (f, rest) = square_free_split(d);
        let b = b * Rational::from_integer(BigInt::from(f));
        if rest == 1 {
            Self::from_rational(a + b)
        } else {
            QuadNumber { a, b, d: rest }
        }
    }

    pub fn from_rational(a: Rational) -> Self {
        QuadNumber { a, b: Rational::zero(), d: 0 }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// `sqrt(n)` for a non-negative integer `n`.
    pub fn sqrt_of(n: u64) -> Self {
        Self::new(Rational::zero(), Rational::one(), n)
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn sqrt_coefficient(&self) -> &Rational {
        &self.b
    }

    /// The square-free radicand, `0` for rational values.
    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.d == 0
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn common_field(&self, other: &Self) -> Result<u64, NumericsError> {
        match (self.d, other.d) {
            (0, d) | (d, 0) => Ok(d),
            (d, e) if d == e => Ok(d),
            (d, e) => Err(NumericsError::IncompatibleField(d, e)),
        }
    }

    /// Exact sign in the real embedding with `sqrt(d) > 0`.
    pub fn signum(&self) -> i8 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == 0 || sa == sb {
            return if sa == 0 { sb } else { sa };
        }
        if sa == 0 {
            return sb;
        }
        // opposite signs: the larger magnitude wins, compare a^2 with b^2 d
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * Rational::from_integer(BigInt::from(self.d));
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, NumericsError> {
        let d = self.common_field(other)?;
        Ok(Self::new(&self.a + &other.a, &self.b + &other.b, d))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, NumericsError> {
        let d = self.common_field(other)?;
        Ok(Self::new(&self.a - &other.a, &self.b - &other.b, d))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, NumericsError> {
        let d = self.common_field(other)?;
        let dq = Rational::from_integer(BigInt::from(d));
        let a = &self.a * &other.a + &self.b * &other.b * dq;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Self::new(a, b, d))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, NumericsError> {
        self.common_field(other)?;
        let inv = other.recip()?;
        self.try_mul(&inv)
    }

    pub fn try_cmp(&self, other: &Self) -> Result<Ordering, NumericsError> {
        Ok(match self.try_sub(other)?.signum() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        })
    }

    /// The Galois conjugate `a - b·sqrt(d)`.
    pub fn conjugate(&self) -> Self {
        QuadNumber { a: self.a.clone(), b: -self.b.clone(), d: self.d }
    }

    /// Field norm `a^2 - b^2 d`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * Rational::from_integer(BigInt::from(self.d))
    }

    pub fn recip(&self) -> Result<Self, NumericsError> {
        let n = self.norm();
        if n.is_zero() {
            return Err(NumericsError::DivisionByZero);
        }
        Ok(Self::new(&self.a / &n, -(&self.b / &n), self.d))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(&self.a * k, &self.b * k, self.d)
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return self.a.floor().to_integer();
        }
        // start from an integer-sqrt estimate, then settle exactly
        let b2d = &self.b * &self.b * Rational::from_integer(BigInt::from(self.d));
        let scaled = (b2d.numer() * b2d.denom()).sqrt() / b2d.denom();
        let root = if self.b.is_negative() { -scaled } else { scaled };
        let mut g = (&self.a + Rational::from_integer(root)).floor().to_integer();
        let val = |g: &BigInt| Self::from_rational(Rational::from_integer(g.clone()));
        while val(&g) > *self {
            g -= 1;
        }
        while val(&(&g + 1)) <= *self {
            g += 1;
        }
        g
    }

    /// Approximate value; for display and sanity checks only.
    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * (self.d as f64).sqrt()
    }
}

fn sign_of(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_negative() {
        -1
    } else {
        1
    }
}

impl From<Rational> for QuadNumber {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

impl From<i64> for QuadNumber {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl PartialOrd for QuadNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Panics when comparing irrationals over different fields; use
/// [`QuadNumber::try_cmp`] when that can happen.
impl Ord for QuadNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        self.try_cmp(other).expect("comparison across quadratic fields")
    }
}

impl Neg for QuadNumber {
    type Output = QuadNumber;
    fn neg(self) -> QuadNumber {
        QuadNumber { a: -self.a, b: -self.b, d: self.d }
    }
}

impl Neg for &QuadNumber {
    type Output = QuadNumber;
    fn neg(self) -> QuadNumber {
        -self.clone()
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&QuadNumber> for &QuadNumber {
            type Output = QuadNumber;
            fn $method(self, rhs: &QuadNumber) -> QuadNumber {
                self.$try(rhs).expect(concat!("QuadNumber::", stringify!($method)))
            }
        }
        impl $trait<QuadNumber> for QuadNumber {
            type Output = QuadNumber;
            fn $method(self, rhs: QuadNumber) -> QuadNumber {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&QuadNumber> for QuadNumber {
            type Output = QuadNumber;
            fn $method(self, rhs: &QuadNumber) -> QuadNumber {
                (&self).$method(rhs)
            }
        }
        impl $trait<QuadNumber> for &QuadNumber {
            type Output = QuadNumber;
            fn $method(self, rhs: QuadNumber) -> QuadNumber {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);
forward_binop!(Div, div, try_div);

impl fmt::Display for QuadNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.a);
        }
        let mag = self.b.abs();
        let radical = if mag.is_one() {
            format!("sqrt({})", self.d)
        } else {
            format!("{}·sqrt({})", mag, self.d)
        };
        match (self.a.is_zero(), self.b.is_negative()) {
            (true, false) => write!(f, "{radical}"),
            (true, true) => write!(f, "-{radical}"),
            (false, false) => write!(f, "{} + {radical}", self.a),
            (false, true) => write!(f, "{} - {radical}", self.a),
        }
    }
}

impl fmt::Debug for QuadNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadNumber({self})")
    }
}
