//! Kato data at the combinatorial level.
//!
//! A datum is a modification `Y' → (Y, y0)` given by blow-ups, a marked
//! region of `Y'` where a local isomorphism `(Y, y0) → (Y', y1)` lands, the
//! induced correspondence of exceptional primes, and an explicit gluing of the
//! contracted curves. Everything is combinatorial: the gluing is input, not
//! derived from an analytic germ.

mod class6;
mod compose;
mod family;
mod format;
mod surface;

pub use class6::datum_from_class6;
pub use compose::compose;
pub use family::{jacobian_divisor_coeffs, quotient_family_datum};
pub use surface::{classify_configuration, classify_surface, minimal_model, CurveConfig, SurfaceClass, SurfaceCurve};

use std::fmt;

use thiserror::Error;

use crate::blowup::{BlowupError, BlowupSequence};
use crate::dualgraph::{quotient_chain, GraphError};
use crate::germdyn::GermError;
use crate::numerics::{hj_value, NumericsError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KatoError {
    #[error("base germs differ: {0} vs {1}")]
    BaseMismatch(String, String),
    #[error("invalid marked region: {0}")]
    BadMark(String),
    #[error("invalid gluing: {0}")]
    BadGluing(String),
    #[error("gluing is not total: no glued curve for {}", .0.join(", "))]
    PartialGluing(Vec<String>),
    #[error("`{0}` has no divisorial correspondence")]
    NoCorrespondence(String),
    #[error("family parameter k = {0} must be at least 2")]
    BadFamilyParameter(i64),
    #[error("the eigenvaluation is divisorial, which no strict germ has")]
    DivisorialEigenvaluation,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Blowup(#[from] BlowupError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Germ(#[from] GermError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KatoBase {
    Smooth,
    /// Cyclic quotient singularity `1/p (1, q)`, resolved by its minimal chain.
    Quotient { p: u64, q: u64 },
}

impl fmt::Display for KatoBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KatoBase::Smooth => write!(f, "smooth"),
            KatoBase::Quotient { p, q } => write!(f, "quotient {p} {q}"),
        }
    }
}

/// Where the local isomorphism lands in `Y'`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MarkedRegion {
    /// The base point itself (only for the trivial datum over a smooth germ).
    Origin,
    /// A free point of one exceptional prime.
    FreePoint(String),
    /// The intersection point of two exceptional primes.
    Point(String, String),
    /// A chain of primes isomorphic to the resolution chain of the base;
    /// its `i`-th prime is the image of the `i`-th base prime.
    Chain(Vec<String>),
}

impl fmt::Display for MarkedRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MarkedRegion::Origin => write!(f, "origin"),
            MarkedRegion::FreePoint(e) => write!(f, "free point on {e}"),
            MarkedRegion::Point(e, g) => write!(f, "point {e} ∩ {g}"),
            MarkedRegion::Chain(c) => write!(f, "chain {}", c.join(" - ")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GlueSite {
    Free,
    Node,
}

/// A contracted curve of the germ: its image is the germ of `owner` at the
/// marked region, and its strict transform meets `target`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Glue {
    pub tag: String,
    pub owner: String,
    pub target: String,
    pub site: GlueSite,
}

/// A chain of primes of `Y'` contracted to a cyclic quotient point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ContractedChain {
    pub primes: Vec<String>,
    pub p: u64,
    pub q: u64,
    /// `|det|` of the two toric rays bounding the chain.
    pub lattice_index: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KatoDatum {
    base: KatoBase,
    modification: BlowupSequence,
    marked: MarkedRegion,
    correspondence: Vec<(String, String)>,
    gluing: Vec<Glue>,
    contracted: Vec<ContractedChain>,
}

/// Primes of the base resolution, in chain order.
fn base_sequence(base: KatoBase) -> Result<BlowupSequence, KatoError> {
    Ok(match base {
        KatoBase::Smooth => BlowupSequence::smooth(),
        KatoBase::Quotient { p, q } => BlowupSequence::over_singularity(&quotient_chain(p, q)?)?,
    })
}

impl KatoDatum {
    /// Assemble and validate a datum. For chain marks the correspondence is
    /// derived from the chain order.
    pub fn new(base: KatoBase, modification: BlowupSequence, marked: MarkedRegion, gluing: Vec<Glue>) -> Result<Self, KatoError> {
        let base_seq = base_sequence(base)?;
        if modification.base() != base_seq.base() {
            return Err(KatoError::BaseMismatch(base.to_string(), "modification built over another base".into()));
        }
        let correspondence = match &marked {
            MarkedRegion::Chain(primes) => base_seq.exceptional_names().into_iter().zip(primes.iter().cloned()).collect(),
            _ => Vec::new(),
        };
        let datum = KatoDatum { base, modification, marked, correspondence, gluing, contracted: Vec::new() };
        datum.validate()?;
        Ok(datum)
    }

    /// The identity datum: no blow-up, marked region the whole base.
    pub fn trivial(base: KatoBase) -> Result<Self, KatoError> {
        let seq = base_sequence(base)?;
        let marked = match base {
            KatoBase::Smooth => MarkedRegion::Origin,
            KatoBase::Quotient { .. } => MarkedRegion::Chain(seq.exceptional_names()),
        };
        Self::new(base, seq, marked, Vec::new())
    }

    pub(crate) fn with_contracted(mut self, contracted: Vec<ContractedChain>) -> Self {
        self.contracted = contracted;
        self
    }

    fn validate(&self) -> Result<(), KatoError> {
        let seq = &self.modification;
        let exceptional = |n: &str| seq.curve(n).is_some_and(|c| c.is_exceptional());
        match &self.marked {
            MarkedRegion::Origin => {
                if self.base != KatoBase::Smooth || !seq.steps().is_empty() {
                    return Err(KatoError::BadMark("the origin is marked only before any blow-up of a smooth germ".into()));
                }
            }
            MarkedRegion::FreePoint(e) => {
                if !exceptional(e) {
                    return Err(KatoError::BadMark(format!("`{e}` is not an exceptional prime")));
                }
            }
            MarkedRegion::Point(e, f) => {
                if !exceptional(e) || !exceptional(f) || seq.meeting_count(e, f) == 0 {
                    return Err(KatoError::BadMark(format!("`{e}` and `{f}` are not meeting exceptional primes")));
                }
            }
            MarkedRegion::Chain(primes) => {
                let KatoBase::Quotient { p, q } = self.base else {
                    return Err(KatoError::BadMark("chains are marked only over quotient bases".into()));
                };
                if let Some(bad) = primes.iter().find(|e| !exceptional(e)) {
                    return Err(KatoError::BadMark(format!("`{bad}` is not an exceptional prime")));
                }
                for w in primes.windows(2) {
                    if seq.meeting_count(&w[0], &w[1]) != 1 {
                        return Err(KatoError::BadMark(format!("`{}` and `{}` are not consecutive in a chain", w[0], w[1])));
                    }
                }
                let graph = seq.to_dual_graph();
                let ids: Vec<&str> = primes.iter().map(String::as_str).collect();
                let induced = graph.induced(&ids)?;
                if induced.edges().len() + 1 != primes.len() {
                    return Err(KatoError::BadMark("marked primes do not form a chain".into()));
                }
                let expect = quotient_chain(p, q)?;
                let selfs: Vec<i64> = induced.vertices().iter().map(|v| v.self_intersection).collect();
                let want: Vec<i64> = expect.vertices().iter().map(|v| v.self_intersection).collect();
                if selfs != want {
                    return Err(KatoError::BadMark(format!("self-intersections {selfs:?} differ from the base chain {want:?}")));
                }
            }
        }
        for g in &self.gluing {
            for n in [&g.owner, &g.target] {
                if !exceptional(n) {
                    return Err(KatoError::BadGluing(format!("`{n}` is not an exceptional prime")));
                }
            }
            if self.marked_primes().contains(&g.owner) {
                return Err(KatoError::BadGluing(format!("owner `{}` lies in the marked region", g.owner)));
            }
        }
        Ok(())
    }

    pub fn base(&self) -> KatoBase {
        self.base
    }

    pub fn modification(&self) -> &BlowupSequence {
        &self.modification
    }

    pub fn marked(&self) -> &MarkedRegion {
        &self.marked
    }

    pub fn correspondence(&self) -> &[(String, String)] {
        &self.correspondence
    }

    pub fn gluing(&self) -> &[Glue] {
        &self.gluing
    }

    pub fn contracted(&self) -> &[ContractedChain] {
        &self.contracted
    }

    /// Number of blow-ups in the modification.
    pub fn step_count(&self) -> usize {
        self.modification.steps().len()
    }

    /// Primes covered by the marked region.
    pub fn marked_primes(&self) -> Vec<String> {
        match &self.marked {
            MarkedRegion::Chain(c) => c.clone(),
            _ => Vec::new(),
        }
    }

    /// Lattice index of the marked point: `p` for a marked chain, 1 for a smooth point.
    pub fn marked_index(&self) -> u64 {
        self.marked_type().map_or(1, |(p, _)| p)
    }

    /// Quotient type of the marked point of `Y'`, `None` when smooth.
    pub fn marked_type(&self) -> Option<(u64, u64)> {
        match (&self.marked, self.base) {
            (MarkedRegion::Chain(_), KatoBase::Quotient { p, q }) => Some((p, q)),
            _ => None,
        }
    }

    /// `A(σ(E)) − A(E)`, which by the Jacobian formula equals `ord_E(J_f)`.
    pub fn jacobian_gap(&self, prime: &str) -> Result<Rational, KatoError> {
        let image = self
            .correspondence
            .iter()
            .find(|(b, _)| b == prime)
            .map(|(_, m)| m)
            .ok_or_else(|| KatoError::NoCorrespondence(prime.to_string()))?;
        let a = |n: &str| self.modification.curve(n).map(|c| c.log_discrepancy.clone()).expect("validated prime");
        Ok(a(image) - a(prime))
    }

    /// Primes of `Y'` that survive in the surface: exceptional, not marked, not contracted.
    pub fn outside_primes(&self) -> Vec<String> {
        let marked = self.marked_primes();
        let contracted: Vec<&String> = self.contracted.iter().flat_map(|c| c.primes.iter()).collect();
        self.modification
            .exceptional_names()
            .into_iter()
            .filter(|e| !marked.contains(e) && !contracted.contains(&e))
            .collect()
    }
}

/// `(p, q)` of a chain of self-intersections `-a_i`.
pub(crate) fn chain_type(self_ints: &[i64]) -> Result<(u64, u64), KatoError> {
    let chain: Vec<u64> = self_ints.iter().map(|&e| (-e).max(0) as u64).collect();
    Ok(hj_value(&chain)?)
}

#[cfg(test)]
mod tests;
