//! Monomial (quasimonomial) valuations given by a weight pair at a point.

mod support;

pub use support::PolySupport;

use std::fmt;

use thiserror::Error;

use crate::blowup::{BlowupError, BlowupSequence, QmValuation, ToricSpan};
use crate::numerics::{NumericsError, QuadNumber, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValuationError {
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("the ideal has no generators")]
    EmptyIdeal,
    #[error("anchor does not match the model: {0}")]
    IncompatibleAnchor(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Blowup(#[from] BlowupError),
}

/// Where a weight pair lives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Anchor {
    /// The origin of the smooth germ, coordinates `(z, w)`.
    Origin,
    /// The point `E ∩ F` of a model, with `E = {z = 0}` and `F = {w = 0}`.
    /// Carries `(b_E, b_F)` and `(A(E), A(F))`.
    Satellite { e: String, f: String, b: (u64, u64), a: (Rational, Rational) },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialWeights {
    pub r: QuadNumber,
    pub s: QuadNumber,
    pub anchor: Anchor,
}

/// Value of a valuation: finite or `+∞` (on zero).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Finite(QuadNumber),
    Infinity,
}

impl Value {
    pub fn finite(&self) -> Option<&QuadNumber> {
        match self {
            Value::Finite(x) => Some(x),
            Value::Infinity => None,
        }
    }

    fn min(self, other: Value) -> Value {
        match (self, other) {
            (Value::Infinity, v) | (v, Value::Infinity) => v,
            (Value::Finite(a), Value::Finite(b)) => Value::Finite(if b < a { b } else { a }),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(x) => write!(f, "{x}"),
            Value::Infinity => write!(f, "+inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ValuationType {
    Divisorial,
    Irrational,
}

impl fmt::Display for ValuationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ValuationType::Divisorial => "divisorial",
            ValuationType::Irrational => "irrational",
        })
    }
}

/// Center of a valuation in a model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Center {
    /// The model is the base itself.
    Origin,
    /// Generic point of a curve.
    Prime(String),
    /// Intersection point of two exceptional primes.
    Satellite(String, String),
    /// A point of one exceptional prime lying on no other one.
    Free(String),
}

impl fmt::Display for Center {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Center::Origin => write!(f, "origin"),
            Center::Prime(e) => write!(f, "prime {e}"),
            Center::Satellite(e, g) => write!(f, "satellite point {e} ∩ {g}"),
            Center::Free(e) => write!(f, "free point on {e}"),
        }
    }
}

fn check_pair(r: &QuadNumber, s: &QuadNumber) -> Result<(), ValuationError> {
    if r.signum() < 0 || s.signum() < 0 {
        return Err(ValuationError::InvalidWeights(format!("({r}, {s}) has a negative entry")));
    }
    if r.is_zero() && s.is_zero() {
        return Err(ValuationError::InvalidWeights("both weights are zero".into()));
    }
    // same-field check
    r.try_add(s)?;
    Ok(())
}

impl MonomialWeights {
    pub fn at_origin(r: QuadNumber, s: QuadNumber) -> Result<Self, ValuationError> {
        check_pair(&r, &s)?;
        Ok(MonomialWeights { r, s, anchor: Anchor::Origin })
    }

    /// Weights at the point `e ∩ f` of `model`.
    pub fn at_satellite(model: &BlowupSequence, e: &str, f: &str, r: QuadNumber, s: QuadNumber) -> Result<Self, ValuationError> {
        check_pair(&r, &s)?;
        let (ce, cf) = match (model.curve(e), model.curve(f)) {
            (Some(ce), Some(cf)) => (ce, cf),
            _ => return Err(ValuationError::IncompatibleAnchor(format!("{e} or {f} is not in the model"))),
        };
        if model.meeting_count(e, f) == 0 {
            return Err(ValuationError::IncompatibleAnchor(format!("{e} and {f} do not meet")));
        }
        let anchor = Anchor::Satellite {
            e: e.to_string(),
            f: f.to_string(),
            b: (ce.b, cf.b),
            a: (ce.log_discrepancy.clone(), cf.log_discrepancy.clone()),
        };
        Ok(MonomialWeights { r, s, anchor })
    }

    pub fn from_ints(r: i64, s: i64) -> Result<Self, ValuationError> {
        Self::at_origin(QuadNumber::from(r), QuadNumber::from(s))
    }

    fn with(&self, r: QuadNumber, s: QuadNumber) -> Self {
        MonomialWeights { r, s, anchor: self.anchor.clone() }
    }

    /// `min(r·i + s·j)` over the support; `+∞` on the zero support.
    pub fn evaluate(&self, p: &PolySupport) -> Value {
        p.terms().fold(Value::Infinity, |acc, &(i, j)| {
            let v = self.r.scale(&Rational::from_integer(i.into())) + self.s.scale(&Rational::from_integer(j.into()));
            acc.min(Value::Finite(v))
        })
    }

    /// Minimum over the listed generators. Exact for monomial ideals; for
    /// other ideals it is the value on the given generators only.
    pub fn evaluate_ideal(&self, gens: &[PolySupport]) -> Result<Value, ValuationError> {
        if gens.is_empty() {
            return Err(ValuationError::EmptyIdeal);
        }
        Ok(gens.iter().map(|g| self.evaluate(g)).fold(Value::Infinity, Value::min))
    }

    /// Value on the maximal ideal of the base.
    pub fn value_on_maximal_ideal(&self) -> QuadNumber {
        match &self.anchor {
            Anchor::Origin => {
                if self.s < self.r {
                    self.s.clone()
                } else {
                    self.r.clone()
                }
            }
            Anchor::Satellite { b, .. } => {
                self.r.scale(&Rational::from_integer(b.0.into())) + self.s.scale(&Rational::from_integer(b.1.into()))
            }
        }
    }

    /// Rescale so that the maximal ideal has value 1.
    pub fn normalize(&self) -> Result<Self, ValuationError> {
        let m = self.value_on_maximal_ideal();
        if m.is_zero() {
            return Err(ValuationError::InvalidWeights(format!("{self} vanishes on the maximal ideal")));
        }
        Ok(self.with(self.r.try_div(&m)?, self.s.try_div(&m)?))
    }

    pub fn scale(&self, k: &QuadNumber) -> Result<Self, ValuationError> {
        Ok(self.with(self.r.try_mul(k)?, self.s.try_mul(k)?))
    }

    pub fn classify(&self) -> ValuationType {
        if self.r.is_zero() || self.s.is_zero() {
            return ValuationType::Divisorial;
        }
        match self.s.try_div(&self.r) {
            Ok(t) if t.is_rational() => ValuationType::Divisorial,
            _ => ValuationType::Irrational,
        }
    }

    /// `r·A(E) + s·A(F)`; at the origin `A(axis) = 1` gives `r + s`.
    pub fn log_discrepancy(&self) -> QuadNumber {
        match &self.anchor {
            Anchor::Origin => self.r.clone() + self.s.clone(),
            Anchor::Satellite { a, .. } => self.r.scale(&a.0) + self.s.scale(&a.1),
        }
    }

    /// Slope `s / r`, `None` when `r = 0`.
    pub fn slope(&self) -> Option<QuadNumber> {
        self.s.try_div(&self.r).ok()
    }

    pub fn to_qm(&self) -> QmValuation {
        match &self.anchor {
            Anchor::Origin => QmValuation::Origin { r: self.r.clone(), s: self.s.clone() },
            Anchor::Satellite { e, f, .. } => {
                QmValuation::AtPoint { e: e.clone(), f: f.clone(), r: self.r.clone(), s: self.s.clone() }
            }
        }
    }

    /// Center in `model`.
    pub fn center(&self, model: &BlowupSequence) -> Result<Center, ValuationError> {
        match &self.anchor {
            Anchor::Origin => {
                if !model.is_smooth_base() {
                    return Err(ValuationError::IncompatibleAnchor("origin weights need a smooth base".into()));
                }
                if model.steps().is_empty() {
                    return Ok(Center::Origin);
                }
                let exceptional = |n: &str| model.curve(n).is_some_and(|c| c.is_exceptional());
                Ok(match model.locate_weight(&self.r, &self.s)? {
                    ToricSpan::Curve(x) => Center::Prime(x),
                    ToricSpan::Between { x, y, .. } => match (exceptional(&x), exceptional(&y)) {
                        (true, true) => Center::Satellite(x, y),
                        (true, false) => Center::Free(x),
                        (false, true) => Center::Free(y),
                        (false, false) => Center::Origin,
                    },
                })
            }
            Anchor::Satellite { e, f, b, .. } => {
                let same = |n: &str, bn: u64| model.curve(n).is_some_and(|c| c.b == bn);
                if !same(e, b.0) || !same(f, b.1) || model.meeting_count(e, f) == 0 {
                    return Err(ValuationError::IncompatibleAnchor(format!("{e} ∩ {f} is not a point of the model")));
                }
                Ok(if self.r.is_zero() {
                    Center::Prime(f.clone())
                } else if self.s.is_zero() {
                    Center::Prime(e.clone())
                } else {
                    Center::Satellite(e.clone(), f.clone())
                })
            }
        }
    }
}

impl fmt::Display for MonomialWeights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.r, self.s)?;
        if let Anchor::Satellite { e, f: g, .. } = &self.anchor {
            write!(f, " at {e} ∩ {g}")?;
        }
        Ok(())
    }
}

/// The maximal ideal `(z, w)`.
pub fn maximal_ideal() -> Vec<PolySupport> {
    vec![PolySupport::monomial(1, 0), PolySupport::monomial(0, 1)]
}
