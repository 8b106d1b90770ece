use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

use super::{GermError, GermNormalForm};
use crate::numerics::{QuadNumber, Rational};
use crate::valuation::{Anchor, MonomialWeights};

/// Slope `s/r` of a weight pair; `Infinite` when `r = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Slope {
    Finite(QuadNumber),
    Infinite,
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite(t) => write!(f, "{t}"),
            Slope::Infinite => write!(f, "+inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EigenKind {
    Curve,
    InfinitelySingular,
    Irrational,
    Divisorial,
}

impl fmt::Display for EigenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EigenKind::Curve => "curve",
            EigenKind::InfinitelySingular => "infinitely singular",
            EigenKind::Irrational => "irrational",
            EigenKind::Divisorial => "divisorial",
        })
    }
}

/// How the germ acts on the two sides of the eigenvaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ComponentAction {
    Preserves,
    Switches,
}

impl fmt::Display for ComponentAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ComponentAction::Preserves => "preserves components",
            ComponentAction::Switches => "switches components",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenReport {
    pub kind: EigenKind,
    pub shadow_slope: Slope,
    pub eigenvalue: Option<QuadNumber>,
    pub normalized_weights: Option<MonomialWeights>,
    pub component_action: Option<ComponentAction>,
    pub warnings: Vec<String>,
}

/// Perron data of a nonnegative 2×2 integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerronData {
    pub discriminant: i64,
    pub eigenvalue: QuadNumber,
    /// Eigenvector with smallest entry 1.
    pub weights: (QuadNumber, QuadNumber),
    pub action: ComponentAction,
    pub warnings: Vec<String>,
}

fn q(n: i64) -> QuadNumber {
    QuadNumber::from(n)
}

fn qmin(a: QuadNumber, b: QuadNumber) -> QuadNumber {
    if b < a {
        b
    } else {
        a
    }
}

/// Fixed point of `t ↦ min_i(b_i + m_i·t) / divisor` on `t ≥ 0`, or
/// `Infinite` when every piece runs away (no finite fixed point).
pub fn pl_fixed_point(pieces: &[(Rational, Rational)], divisor: &Rational) -> Slope {
    let eval = |t: &Rational| pieces.iter().map(|(b, m)| b + m * t).min().map(|v| v / divisor);
    let mut candidates: Vec<Rational> = pieces
        .iter()
        .filter(|(_, m)| m != divisor)
        .map(|(b, m)| b / (divisor - m))
        .filter(|t| !t.is_negative() && eval(t).as_ref() == Some(t))
        .collect();
    candidates.sort();
    match candidates.into_iter().next() {
        Some(t) => Slope::Finite(QuadNumber::from(t)),
        None => Slope::Infinite,
    }
}

fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Möbius action `t ↦ (c + d t)/(a + b t)` of a matrix on slopes.
fn mobius(m: &[[i64; 2]; 2], t: &Slope) -> Slope {
    let [[a, b], [c, d]] = *m;
    match t {
        Slope::Finite(t) => {
            let den = q(a) + t.clone() * q(b);
            if den.is_zero() {
                Slope::Infinite
            } else {
                Slope::Finite((q(c) + t.clone() * q(d)) / den)
            }
        }
        Slope::Infinite if b != 0 => Slope::Finite(QuadNumber::from(Rational::new(d.into(), b.into()))),
        Slope::Infinite => Slope::Infinite,
    }
}

/// Perron root, eigen-weights and component action of `m`.
pub fn perron(m: &[[i64; 2]; 2]) -> PerronData {
    let [[a, b], [c, d]] = *m;
    let tr = a + d;
    let det = a * d - b * c;
    let disc = tr * tr - 4 * det;
    let mut warnings = Vec::new();
    let half = Rational::new(1.into(), 2.into());
    let lambda = QuadNumber::new(rat(tr) * &half, half.clone(), disc.max(0) as u64);
    if disc < 0 {
        warnings.push(format!("negative discriminant {disc}; no real eigenvalue"));
    }
    let (x, y) = if b != 0 {
        (q(b), lambda.clone() - q(a))
    } else if c != 0 {
        (lambda.clone() - q(d), q(c))
    } else if a >= d {
        (q(1), q(0))
    } else {
        (q(0), q(1))
    };
    let smallest = qmin(x.clone(), y.clone());
    let (x, y) = if smallest.signum() > 0 {
        (x / smallest.clone(), y / smallest)
    } else {
        warnings.push("eigenvector has a zero entry; the matrix is not primitive".to_string());
        let largest = if x > y { x.clone() } else { y.clone() };
        (x / largest.clone(), y / largest)
    };
    let star = if x.is_zero() { Slope::Infinite } else { Slope::Finite(y.clone() / x.clone()) };
    let action = match probe_action(m, &star) {
        Some(act) => {
            if (act == ComponentAction::Preserves) != (det > 0) {
                warnings.push(format!("probe slopes give `{act}` but det = {det}"));
            }
            act
        }
        None => {
            warnings.push("probe slopes inconclusive; using the sign of det".to_string());
            if det > 0 {
                ComponentAction::Preserves
            } else {
                ComponentAction::Switches
            }
        }
    };
    PerronData { discriminant: disc, eigenvalue: lambda, weights: (x, y), action, warnings }
}

/// Compare the images of two probe slopes on either side of the fixed slope.
fn probe_action(m: &[[i64; 2]; 2], star: &Slope) -> Option<ComponentAction> {
    let Slope::Finite(t) = star else { return None };
    let floor = QuadNumber::from(Rational::from_integer(t.floor()));
    let lo = if &floor < t { floor } else { t.clone() - QuadNumber::from(Rational::new(1.into(), 2.into())) };
    let hi = lo.clone() + q(1);
    if lo.signum() < 0 && t.signum() >= 0 && !t.is_zero() {
        return None;
    }
    let (Slope::Finite(glo), Slope::Finite(ghi)) = (mobius(m, &Slope::Finite(lo)), mobius(m, &Slope::Finite(hi))) else {
        return None;
    };
    if &glo < t && &ghi > t {
        Some(ComponentAction::Preserves)
    } else if &glo > t && &ghi < t {
        Some(ComponentAction::Switches)
    } else {
        None
    }
}

impl GermNormalForm {
    /// Pieces `(intercept, slope)` and divisor of the slope map of Classes 2 and 4.
    fn shadow_pieces(&self) -> Option<(Vec<(Rational, Rational)>, Rational)> {
        let mut pieces = Vec::new();
        let divisor = match self {
            GermNormalForm::Class2 { c, .. } => {
                pieces.push((rat(i64::from(*c)), rat(1)));
                rat(1)
            }
            GermNormalForm::Class4 { a, c, epsilon_nonzero, .. } => {
                pieces.push((rat(i64::from(*c)), rat(1)));
                if *epsilon_nonzero && *a >= 2 {
                    pieces.push((Rational::new(BigInt::from(a * c), BigInt::from(a - 1)), rat(0)));
                }
                rat(i64::from(*a))
            }
            GermNormalForm::Class6 { .. } => return None,
        };
        if let Some(k0) = self.lowest_p() {
            pieces.push((rat(i64::from(k0)), rat(0)));
        }
        Some((pieces, divisor))
    }

    /// Image of weights at the origin.
    pub fn pushforward_weights(&self, w: &MonomialWeights) -> Result<MonomialWeights, GermError> {
        if w.anchor != Anchor::Origin {
            return Err(GermError::NotAtOrigin);
        }
        let (r, s) = (&w.r, &w.s);
        let (r2, s2) = match self {
            GermNormalForm::Class6 { matrix } => {
                let [[a, b], [c, d]] = *matrix;
                (r.clone() * q(a) + s.clone() * q(b), r.clone() * q(c) + s.clone() * q(d))
            }
            _ => {
                let (pieces, divisor) = self.shadow_pieces().expect("classes 2 and 4");
                // value of w∘f = min over the pieces, scaled back by r
                let s2 = pieces
                    .iter()
                    .map(|(b, m)| r.scale(b) + s.scale(m))
                    .reduce(qmin)
                    .expect("at least one piece");
                (r.scale(&divisor), s2)
            }
        };
        Ok(MonomialWeights::at_origin(r2, s2)?)
    }

    /// The induced map on slopes `s/r`.
    pub fn slope_image(&self, t: &Slope) -> Slope {
        match self {
            GermNormalForm::Class6 { matrix } => mobius(matrix, t),
            _ => {
                let (pieces, divisor) = self.shadow_pieces().expect("classes 2 and 4");
                let values = pieces.iter().filter_map(|(b, m)| match t {
                    Slope::Finite(t) => Some(QuadNumber::from(b.clone()) + t.scale(m)),
                    Slope::Infinite if m == &rat(0) => Some(QuadNumber::from(b.clone())),
                    Slope::Infinite => None,
                });
                match values.reduce(qmin) {
                    Some(v) => Slope::Finite(v.scale(&(rat(1) / divisor))),
                    None => Slope::Infinite,
                }
            }
        }
    }

    /// Eigenvaluation report; the form is validated first.
    pub fn eigenvaluation(&self) -> Result<EigenReport, GermError> {
        self.validate()?;
        Ok(self.eigen_unchecked())
    }

    /// Eigenvaluation report without validation. Degenerate Class 6 input
    /// with a square discriminant is reported as divisorial, with a warning.
    pub fn eigen_unchecked(&self) -> EigenReport {
        match self {
            GermNormalForm::Class6 { matrix } => {
                let p = perron(matrix);
                let mut warnings = p.warnings.clone();
                let kind = if p.eigenvalue.is_rational() {
                    warnings.push(format!("discriminant {} is a perfect square; not a strict normal form", p.discriminant));
                    EigenKind::Divisorial
                } else {
                    EigenKind::Irrational
                };
                let shadow_slope =
                    if p.weights.0.is_zero() { Slope::Infinite } else { Slope::Finite(p.weights.1.clone() / p.weights.0.clone()) };
                EigenReport {
                    kind,
                    shadow_slope,
                    eigenvalue: Some(p.eigenvalue),
                    normalized_weights: MonomialWeights::at_origin(p.weights.0, p.weights.1).ok(),
                    component_action: Some(p.action),
                    warnings,
                }
            }
            _ => {
                let (pieces, divisor) = self.shadow_pieces().expect("classes 2 and 4");
                let kind = if self.class_number() == 2 { EigenKind::Curve } else { EigenKind::InfinitelySingular };
                EigenReport {
                    kind,
                    shadow_slope: pl_fixed_point(&pieces, &divisor),
                    eigenvalue: None,
                    normalized_weights: None,
                    component_action: None,
                    warnings: Vec::new(),
                }
            }
        }
    }

    /// `normalize(f_•^k w)` for `k = 0, ..., n-1`.
    pub fn iterate_weights(&self, w: &MonomialWeights, n: usize) -> Result<Vec<MonomialWeights>, GermError> {
        self.validate()?;
        let mut out = Vec::with_capacity(n);
        let mut cur = w.normalize()?;
        for k in 0..n {
            if k > 0 {
                cur = self.pushforward_weights(&cur)?.normalize()?;
            }
            out.push(cur.clone());
        }
        Ok(out)
    }

    /// Contracted curves with the weights of their divisorial images.
    pub fn contracted_curves(&self) -> Vec<(String, MonomialWeights)> {
        let push = |r: i64, s: i64| {
            MonomialWeights::from_ints(r, s).ok().and_then(|w| self.pushforward_weights(&w).ok())
        };
        match self {
            GermNormalForm::Class6 { matrix } => {
                let [[a, b], [c, d]] = *matrix;
                let mut out = Vec::new();
                // {z = 0} is contracted iff z∘f and w∘f both vanish on it
                if a > 0 && c > 0 {
                    out.extend(push(1, 0).map(|w| ("z=0".to_string(), w)));
                }
                if b > 0 && d > 0 {
                    out.extend(push(0, 1).map(|w| ("w=0".to_string(), w)));
                }
                out
            }
            _ => push(1, 0).map(|w| ("z=0".to_string(), w)).into_iter().collect(),
        }
    }

    /// Exponent of the monomial Jacobian determinant of a Class 6 form.
    pub fn jacobian_exponent(&self) -> Option<(i64, i64)> {
        match self {
            GermNormalForm::Class6 { matrix } => {
                let [[a, b], [c, d]] = *matrix;
                Some((a + c - 1, b + d - 1))
            }
            _ => None,
        }
    }
}
