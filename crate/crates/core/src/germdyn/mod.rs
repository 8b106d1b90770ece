//! Normal forms of strict germs and their action on monomial weights.
//!
//! * Class 2: `(λz, z^c w + P(z))` with `0 < |λ| < 1`, `P ∈ z·C[z]`, `deg P ≤ c`.
//! * Class 4: `(z^a, μ z^c w + P(z) + ε z^{ac/(a-1)})`.
//! * Class 6: `(z^a w^b, z^c w^d)` with `det = ±1` and `A²` positive.
//!
//! Only supports of the coefficients enter. For Classes 2 and 4 the weight
//! action computed here is the monomial shadow of the true action: it ignores
//! cancellations along non-monomial curves.

mod dynamics;
mod parse;

pub use dynamics::{perron, pl_fixed_point, ComponentAction, EigenKind, EigenReport, PerronData, Slope};

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use thiserror::Error;

use crate::valuation::ValuationError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GermError {
    #[error("invalid normal form: {}", .0.join("; "))]
    Invalid(Vec<String>),
    #[error("cannot parse germ: {0}")]
    Parse(String),
    #[error("weights must be anchored at the origin")]
    NotAtOrigin,
    #[error(transparent)]
    Valuation(#[from] ValuationError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GermNormalForm {
    Class2 {
        c: u32,
        p_support: BTreeSet<u32>,
        /// `0 < |λ| < 1` is asserted, never computed with.
        lambda_modulus_lt_one: bool,
    },
    Class4 {
        a: u32,
        c: u32,
        p_support: BTreeSet<u32>,
        special: bool,
        epsilon_nonzero: bool,
    },
    Class6 {
        matrix: [[i64; 2]; 2],
    },
}

impl GermNormalForm {
    pub fn class6(a: i64, b: i64, c: i64, d: i64) -> Self {
        GermNormalForm::Class6 { matrix: [[a, b], [c, d]] }
    }

    pub fn class4(a: u32, c: u32, p: &[u32], special: bool, epsilon_nonzero: bool) -> Self {
        GermNormalForm::Class4 { a, c, p_support: p.iter().copied().collect(), special, epsilon_nonzero }
    }

    pub fn class2(c: u32, p: &[u32]) -> Self {
        GermNormalForm::Class2 { c, p_support: p.iter().copied().collect(), lambda_modulus_lt_one: true }
    }

    pub fn class_number(&self) -> u8 {
        match self {
            GermNormalForm::Class2 { .. } => 2,
            GermNormalForm::Class4 { .. } => 4,
            GermNormalForm::Class6 { .. } => 6,
        }
    }

    /// Check every constraint of the normal form; all violations are reported.
    /// On success returns informational notes.
    pub fn validate(&self) -> Result<Vec<String>, GermError> {
        let mut bad = Vec::new();
        let mut notes = Vec::new();
        match self {
            GermNormalForm::Class2 { c, p_support, lambda_modulus_lt_one } => {
                if *c < 1 {
                    bad.push("c must be at least 1".to_string());
                }
                if let Some(k) = p_support.iter().find(|&&k| k < 1 || k > *c) {
                    bad.push(format!("P has a term z^{k} outside 1..={c}"));
                }
                if !lambda_modulus_lt_one {
                    bad.push("|lambda| < 1 must hold".to_string());
                }
            }
            GermNormalForm::Class4 { a, c, p_support, special, epsilon_nonzero } => {
                if *a < 2 {
                    bad.push(format!("a = {a} must be at least 2"));
                }
                if *c < 1 {
                    bad.push("c must be at least 1".to_string());
                }
                if let Some(k) = p_support.iter().find(|&&k| k < 1 || k > *c) {
                    bad.push(format!("P has a term z^{k} outside 1..={c}"));
                }
                let g = p_support.iter().fold(*a, |g, &k| g.gcd(&k));
                if g != 1 {
                    bad.push(format!("gcd of a and the exponents of P is {g}, not 1"));
                }
                if *special && *a >= 2 && (a * c) % (a - 1) != 0 {
                    bad.push(format!("special case needs (a-1) | ac, but ac/(a-1) = {}/{}", a * c, a - 1));
                }
                if *epsilon_nonzero && !special {
                    bad.push("epsilon can be nonzero only in the special case".to_string());
                }
            }
            GermNormalForm::Class6 { matrix } => {
                let [[a, b], [c, d]] = *matrix;
                if [a, b, c, d].iter().any(|&x| x < 0) {
                    bad.push("matrix entries must be nonnegative".to_string());
                }
                let det = a * d - b * c;
                if det.abs() != 1 {
                    bad.push(format!("det = {det}, must be +1 or -1"));
                }
                let sq = [[a * a + b * c, a * b + b * d], [c * a + d * c, c * b + d * d]];
                if sq.iter().flatten().any(|&x| x <= 0) {
                    bad.push(format!("A^2 = [[{}, {}], [{}, {}]] must have positive entries", sq[0][0], sq[0][1], sq[1][0], sq[1][1]));
                }
                if det.abs() == 1 {
                    notes.push(format!("|det A| = 1, so topdeg = 1 and the germ is strict (det = {det})"));
                }
            }
        }
        if bad.is_empty() {
            Ok(notes)
        } else {
            Err(GermError::Invalid(bad))
        }
    }

    /// Topological degree of the normal form.
    pub fn topdeg(&self) -> u64 {
        match self {
            GermNormalForm::Class6 { matrix } => (matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]).unsigned_abs(),
            _ => 1,
        }
    }

    /// Smallest exponent of `P`, if any.
    pub(crate) fn lowest_p(&self) -> Option<u32> {
        match self {
            GermNormalForm::Class2 { p_support, .. } | GermNormalForm::Class4 { p_support, .. } => p_support.first().copied(),
            GermNormalForm::Class6 { .. } => None,
        }
    }
}

/// Topological degree of `f_k(z, w) = (z^a, z^c w + z^k)`.
pub fn topdeg_fk(a: u64, c: u64, k: u64) -> u64 {
    if k <= c {
        a.gcd(&k)
    } else {
        a
    }
}

impl fmt::Display for GermNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |p: &BTreeSet<u32>| p.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        match self {
            GermNormalForm::Class2 { c, p_support, .. } => write!(f, "class2 c={c} P={}", list(p_support)),
            GermNormalForm::Class4 { a, c, p_support, special, epsilon_nonzero } => {
                write!(f, "class4 a={a} c={c} P={} special={special} eps={epsilon_nonzero}", list(p_support))
            }
            GermNormalForm::Class6 { matrix } => {
                write!(f, "class6 {} {} {} {}", matrix[0][0], matrix[0][1], matrix[1][0], matrix[1][1])
            }
        }
    }
}
