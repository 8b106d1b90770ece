//! Retraction of quasimonomial valuations from a fine model onto the skeleton
//! of a coarser one.
//!
//! Every prime `X` of the fine model has a footprint on the coarse model: the
//! vector of orders `ord_X(eq_C)` of local equations of the coarse curves `C`
//! at the center of `ord_X`. Footprints are linear along the steps (free
//! blow-ups copy, satellite blow-ups add), and a monomial valuation at `E ∩ F`
//! with weights `(r, s)` has footprint `r·fp(E) + s·fp(F)`. The coarse curves
//! with a positive entry are the curves through the center, and the entries
//! themselves are the monomial weights of the retraction.

use std::fmt;

use super::{BlowupError, BlowupSequence, Step, ToricSpan};
use crate::numerics::QuadNumber;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QmValuation {
    /// `ord_E` (up to scaling) for a prime of the model.
    Divisorial(String),
    /// Monomial valuation at `E ∩ F` with weight `r` on the equation of `E` and `s` on that of `F`.
    AtPoint { e: String, f: String, r: QuadNumber, s: QuadNumber },
    /// Monomial valuation `min(r·i + s·j)` in the coordinates of the smooth base.
    Origin { r: QuadNumber, s: QuadNumber },
}

/// Normalized point of a skeleton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SkeletonPoint {
    /// `ν_E = ord_E / b_E`.
    Vertex(String),
    /// Interior segment point with `r·b_E + s·b_F = 1` and `r, s > 0`.
    Segment { e: String, f: String, r: QuadNumber, s: QuadNumber },
}

impl SkeletonPoint {
    pub fn as_valuation(&self) -> QmValuation {
        match self {
            SkeletonPoint::Vertex(e) => QmValuation::Divisorial(e.clone()),
            SkeletonPoint::Segment { e, f, r, s } => {
                QmValuation::AtPoint { e: e.clone(), f: f.clone(), r: r.clone(), s: s.clone() }
            }
        }
    }
}

impl fmt::Display for SkeletonPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SkeletonPoint::Vertex(e) => write!(f, "nu_{e}"),
            SkeletonPoint::Segment { e, f: g, r, s } => write!(f, "segment {e}-{g} at (r, s) = ({r}, {s})"),
        }
    }
}

fn bad(msg: impl Into<String>) -> BlowupError {
    BlowupError::BadValuation(msg.into())
}

fn combine(r: &QuadNumber, x: &[QuadNumber], s: &QuadNumber, y: &[QuadNumber]) -> Result<Vec<QuadNumber>, BlowupError> {
    x.iter()
        .zip(y)
        .map(|(a, b)| r.try_mul(a).and_then(|u| u.try_add(&s.try_mul(b)?)))
        .collect::<Result<_, _>>()
        .map_err(|e| bad(e.to_string()))
}

impl BlowupSequence {
    /// Footprints of all curves of `self` on the coarse curve set (the first
    /// `coarse_len` curves).
    fn footprints(&self, coarse_len: usize) -> Vec<Vec<u64>> {
        let base_len = self.curves.len() - self.steps.len();
        let mut fp: Vec<Vec<u64>> = Vec::with_capacity(self.curves.len());
        for i in 0..self.curves.len() {
            if i < coarse_len {
                fp.push((0..coarse_len).map(|j| u64::from(i == j)).collect());
                continue;
            }
            let v = match &self.steps[i - base_len].step {
                Step::Initial => unreachable!("the initial blow-up belongs to every nonempty coarse model"),
                Step::Free(e) => fp[self.index(e).expect("valid step")].clone(),
                Step::Satellite(e, f) => {
                    let (a, b) = (&fp[self.index(e).expect("valid step")], &fp[self.index(f).expect("valid step")]);
                    a.iter().zip(b).map(|(x, y)| x + y).collect()
                }
            };
            fp.push(v);
        }
        fp
    }

    /// Retract a valuation given on `self` onto the skeleton of `coarse`.
    pub fn retract(&self, val: &QmValuation, coarse: &BlowupSequence) -> Result<SkeletonPoint, BlowupError> {
        if !self.has_prefix(coarse) {
            return Err(BlowupError::NotPrefix);
        }
        if coarse.exceptional().next().is_none() {
            return Err(BlowupError::EmptyModel);
        }
        let nc = coarse.curves.len();
        let fp = self.footprints(nc);
        let as_quad = |v: &Vec<u64>| -> Vec<QuadNumber> { v.iter().map(|&x| QuadNumber::from(x as i64)).collect() };
        let check_weights = |r: &QuadNumber, s: &QuadNumber| {
            if r.signum() < 0 || s.signum() < 0 || (r.is_zero() && s.is_zero()) {
                Err(bad(format!("weights ({r}, {s}) must be nonnegative and not both zero")))
            } else {
                Ok(())
            }
        };
        let footprint: Vec<QuadNumber> = match val {
            QmValuation::Divisorial(x) => as_quad(&fp[self.index(x)?]),
            QmValuation::AtPoint { e, f, r, s } => {
                check_weights(r, s)?;
                let (i, j) = (self.index(e)?, self.index(f)?);
                if self.meeting_count(e, f) == 0 {
                    return Err(BlowupError::NotAdjacent(e.clone(), f.clone()));
                }
                combine(r, &as_quad(&fp[i]), s, &as_quad(&fp[j]))?
            }
            QmValuation::Origin { r, s } => {
                check_weights(r, s)?;
                match self.locate_weight(r, s)? {
                    ToricSpan::Curve(x) => as_quad(&fp[self.index(&x)?]),
                    ToricSpan::Between { x, y, alpha, beta } => {
                        combine(&alpha, &as_quad(&fp[self.index(&x)?]), &beta, &as_quad(&fp[self.index(&y)?]))?
                    }
                }
            }
        };
        let support: Vec<usize> = (0..nc).filter(|&i| footprint[i].signum() > 0).collect();
        let exceptional: Vec<usize> = support.iter().copied().filter(|&i| self.curves[i].is_exceptional()).collect();
        match exceptional[..] {
            [c] => Ok(SkeletonPoint::Vertex(self.curves[c].name.clone())),
            [c, d] => {
                let (be, bf) = (QuadNumber::from(self.curves[c].b as i64), QuadNumber::from(self.curves[d].b as i64));
                let (r, s) = (&footprint[c], &footprint[d]);
                let total = r.try_mul(&be).and_then(|x| x.try_add(&s.try_mul(&bf)?)).map_err(|e| bad(e.to_string()))?;
                let norm = |x: &QuadNumber| x.try_div(&total).map_err(|e| bad(e.to_string()));
                Ok(SkeletonPoint::Segment {
                    e: self.curves[c].name.clone(),
                    f: self.curves[d].name.clone(),
                    r: norm(r)?,
                    s: norm(s)?,
                })
            }
            _ => Err(bad(format!("center meets {} exceptional primes", exceptional.len()))),
        }
    }
}
