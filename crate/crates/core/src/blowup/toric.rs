//! Toric (satellite-only) blow-ups of the smooth germ, driven by the
//! Stern–Brocot tree of monomial weights.

use std::cmp::Ordering;

use num_integer::Integer;

use super::{BlowupError, BlowupSequence, Step};
use crate::numerics::QuadNumber;

pub fn is_coprime(r: u64, s: u64) -> bool {
    r > 0 && s > 0 && r.gcd(&s) == 1
}

/// Position of a monomial weight relative to the toric primes of a model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ToricSpan {
    /// The weight is proportional to the weight of this curve.
    Curve(String),
    /// Strictly between two adjacent toric curves; `alpha·w_x + beta·w_y` is the weight.
    Between { x: String, y: String, alpha: QuadNumber, beta: QuadNumber },
}

fn slope_cmp(a: [u64; 2], b: [u64; 2]) -> Ordering {
    // compare a[1]/a[0] with b[1]/b[0], with x/0 = +inf
    (u128::from(a[1]) * u128::from(b[0])).cmp(&(u128::from(b[1]) * u128::from(a[0])))
}

impl BlowupSequence {
    /// Toric curves (axes included) ordered by slope `ord w / ord z`.
    pub fn toric_curves(&self) -> Vec<(String, [u64; 2])> {
        let mut v: Vec<(String, [u64; 2])> =
            self.curves.iter().filter_map(|c| c.weight.map(|w| (c.name.clone(), w))).collect();
        v.sort_by(|a, b| slope_cmp(a.1, b.1));
        v
    }

    fn toric_curve_with(&self, weight: [u64; 2]) -> Option<String> {
        self.curves.iter().find(|c| c.weight == Some(weight)).map(|c| c.name.clone())
    }

    /// Make sure the toric prime of weight `(r, s)` exists, walking down the
    /// Stern–Brocot tree and blowing up satellite points as needed. Returns its name.
    pub fn ensure_toric_ray(&mut self, r: u64, s: u64) -> Result<String, BlowupError> {
        if !is_coprime(r, s) {
            return Err(BlowupError::NotCoprime(r, s));
        }
        if !self.is_smooth_base() {
            return Err(BlowupError::BadValuation("toric rays need a smooth base".into()));
        }
        if self.steps.is_empty() {
            self.push_step(Step::Initial, None)?;
        }
        let target = [r, s];
        let (mut lo, mut hi) = ([1u64, 0], [0u64, 1]);
        let mut cur = [1u64, 1];
        loop {
            let name = self.toric_curve_with(cur).ok_or(BlowupError::EmptyModel)?;
            let bound = match slope_cmp(target, cur) {
                Ordering::Equal => return Ok(name),
                Ordering::Greater => {
                    lo = cur;
                    hi
                }
                Ordering::Less => {
                    hi = cur;
                    lo
                }
            };
            let next = [cur[0] + bound[0], cur[1] + bound[1]];
            if self.toric_curve_with(next).is_none() {
                let other = self.toric_curve_with(bound).expect("Stern–Brocot bounds exist");
                self.push_step(Step::Satellite(name, other), None)?;
            }
            cur = next;
        }
    }

    /// Locate a nonnegative weight `(r, s)` among the toric primes.
    pub fn locate_weight(&self, r: &QuadNumber, s: &QuadNumber) -> Result<ToricSpan, BlowupError> {
        if !self.is_smooth_base() {
            return Err(BlowupError::BadValuation("origin weights need a smooth base".into()));
        }
        let q = |n: u64| QuadNumber::from(n as i64);
        // sign of s·p - r·q: positive when (r, s) is steeper than (p, q)
        let side = |w: [u64; 2]| -> Result<i8, BlowupError> {
            s.try_mul(&q(w[0]))
                .and_then(|a| a.try_sub(&r.try_mul(&q(w[1]))?))
                .map(|d| d.signum())
                .map_err(|e| BlowupError::BadValuation(e.to_string()))
        };
        let toric = self.toric_curves();
        for (name, w) in &toric {
            if side(*w)? == 0 {
                return Ok(ToricSpan::Curve(name.clone()));
            }
        }
        for pair in toric.windows(2) {
            let ((x, wx), (y, wy)) = (&pair[0], &pair[1]);
            if side(*wx)? > 0 && side(*wy)? < 0 {
                // det [wx; wy] = 1 for adjacent toric primes
                let alpha = r.try_mul(&q(wy[1])).and_then(|a| a.try_sub(&s.try_mul(&q(wy[0]))?));
                let beta = s.try_mul(&q(wx[0])).and_then(|a| a.try_sub(&r.try_mul(&q(wx[1]))?));
                let (alpha, beta) = (alpha.expect("same field"), beta.expect("same field"));
                return Ok(ToricSpan::Between { x: x.clone(), y: y.clone(), alpha, beta });
            }
        }
        Err(BlowupError::BadValuation(format!("weight ({r}, {s}) is not in the positive quadrant")))
    }
}

impl BlowupSequence {
    /// The minimal satellite sequence whose last prime is the exceptional
    /// divisor of the weighted blow-up of weight `(r, s)`.
    pub fn weighted_blowup_divisor(r: u64, s: u64) -> Result<BlowupSequence, BlowupError> {
        let mut seq = BlowupSequence::smooth();
        seq.ensure_toric_ray(r, s)?;
        Ok(seq)
    }
}
