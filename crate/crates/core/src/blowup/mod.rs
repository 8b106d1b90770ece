//! Point blow-ups over a smooth germ or over a resolved singularity.
//!
//! Every curve carries its maximal-ideal multiplicity `b`, its log-discrepancy
//! `A` and its current self-intersection. The two coordinate axes of a smooth
//! germ are kept as non-exceptional curves with `b = 0` and `A = 1`; with that
//! convention a blow-up of the point `E ∩ axis` obeys the satellite rule and
//! gives the same numbers as a free blow-up on `E`.

mod retract;
mod script;
mod toric;

pub use retract::{QmValuation, SkeletonPoint};
pub use toric::{is_coprime, ToricSpan};

pub(crate) use script::parse_step_line;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use thiserror::Error;

use crate::dualgraph::{DualGraph, GraphError, Vertex};
use crate::numerics::{int, Rational};

pub const AXIS_Z: &str = "axis-z";
pub const AXIS_W: &str = "axis-w";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlowupError {
    #[error("unknown curve `{0}`")]
    UnknownCurve(String),
    #[error("`{0}` is not an exceptional prime")]
    NotExceptional(String),
    #[error("`{0}` and `{1}` do not meet")]
    NotAdjacent(String, String),
    #[error("`init` must be the first step over a smooth germ")]
    MisplacedInitial,
    #[error("the first step over a smooth germ must be `init`")]
    MissingInitial,
    #[error("name `{0}` is already taken")]
    DuplicateName(String),
    #[error("the coarse model is not a prefix of the fine model")]
    NotPrefix,
    #[error("the model has no exceptional prime")]
    EmptyModel,
    #[error("weights ({0}, {1}) are not coprime positive integers")]
    NotCoprime(u64, u64),
    #[error("valuation is not centered on the exceptional locus: {0}")]
    BadValuation(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurveKind {
    Exceptional,
    /// Strict transform of a coordinate axis of the smooth base germ.
    Axis,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Curve {
    pub name: String,
    pub kind: CurveKind,
    /// `ord_E` of the maximal ideal of the base.
    pub b: u64,
    pub log_discrepancy: Rational,
    pub self_intersection: i64,
    pub genus: u32,
    /// Monomial weight `(ord z, ord w)` for toric primes of a smooth germ.
    pub weight: Option<[u64; 2]>,
}

impl Curve {
    pub fn is_exceptional(&self) -> bool {
        self.kind == CurveKind::Exceptional
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Step {
    /// Blow up the origin of the smooth base.
    Initial,
    /// Blow up a free point of an exceptional prime.
    Free(String),
    /// Blow up the intersection point of two curves, at least one exceptional.
    Satellite(String, String),
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Initial => write!(f, "init"),
            Step::Free(e) => write!(f, "free {e}"),
            Step::Satellite(e, g) => write!(f, "sat {e} {g}"),
        }
    }
}

/// A performed step together with the name of the prime it created.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StepRecord {
    pub step: Step,
    pub created: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Base {
    Smooth,
    /// A resolved singularity; the graph lists its exceptional primes.
    Resolution(DualGraph),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupSequence {
    base: Base,
    curves: Vec<Curve>,
    edges: Vec<(usize, usize)>,
    steps: Vec<StepRecord>,
}

impl BlowupSequence {
    /// The smooth germ `(C^2, 0)` with its two coordinate axes and no blow-up yet.
    pub fn smooth() -> Self {
        let axis = |name: &str, weight| Curve {
            name: name.to_string(),
            kind: CurveKind::Axis,
            b: 0,
            log_discrepancy: Rational::one(),
            self_intersection: 0,
            genus: 0,
            weight: Some(weight),
        };
        BlowupSequence {
            base: Base::Smooth,
            curves: vec![axis(AXIS_Z, [1, 0]), axis(AXIS_W, [0, 1])],
            edges: vec![(0, 1)],
            steps: Vec::new(),
        }
    }

    /// Start from a resolution graph with prescribed `A` and `b` on its primes.
    pub fn over_resolution(graph: &DualGraph, a: &[Rational], b: &[u64]) -> Self {
        let curves = graph
            .vertices()
            .iter()
            .zip(a.iter().zip(b))
            .map(|(v, (a, &b))| Curve {
                name: v.id.clone(),
                kind: CurveKind::Exceptional,
                b,
                log_discrepancy: a.clone(),
                self_intersection: v.self_intersection,
                genus: v.genus,
                weight: None,
            })
            .collect();
        BlowupSequence {
            base: Base::Resolution(graph.clone()),
            curves,
            edges: graph.edges().to_vec(),
            steps: Vec::new(),
        }
    }

    /// Start from the resolution graph of a singularity; `A` by adjunction and
    /// `b` from the fundamental cycle (exact for rational singularities).
    pub fn over_singularity(graph: &DualGraph) -> Result<Self, BlowupError> {
        let a = graph.log_discrepancies()?.coefficients();
        let z = graph.fundamental_cycle()?;
        let b: Vec<u64> = z.coefficients().iter().map(|c| c.to_integer().to_u64().unwrap_or(0)).collect();
        Ok(Self::over_resolution(graph, &a, &b))
    }

    pub fn base(&self) -> &Base {
        &self.base
    }

    pub fn is_smooth_base(&self) -> bool {
        self.base == Base::Smooth
    }

    pub fn steps(&self) -> &[StepRecord] {
        &self.steps
    }

    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }

    pub fn exceptional(&self) -> impl Iterator<Item = &Curve> {
        self.curves.iter().filter(|c| c.is_exceptional())
    }

    pub fn exceptional_names(&self) -> Vec<String> {
        self.exceptional().map(|c| c.name.clone()).collect()
    }

    pub fn curve(&self, name: &str) -> Option<&Curve> {
        self.curves.iter().find(|c| c.name == name)
    }

    fn index(&self, name: &str) -> Result<usize, BlowupError> {
        self.curves
            .iter()
            .position(|c| c.name == name)
            .ok_or_else(|| BlowupError::UnknownCurve(name.to_string()))
    }

    /// Number of intersection points between two curves.
    pub fn meeting_count(&self, a: &str, b: &str) -> usize {
        match (self.index(a), self.index(b)) {
            (Ok(i), Ok(j)) => self.edges.iter().filter(|&&e| e == (i.min(j), i.max(j))).count(),
            _ => 0,
        }
    }

    /// Curves meeting `name`, with repetitions for multiple intersection points.
    pub fn neighbors(&self, name: &str) -> Vec<String> {
        let Ok(i) = self.index(name) else { return Vec::new() };
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == i {
                    Some(b)
                } else if b == i {
                    Some(a)
                } else {
                    None
                }
            })
            .map(|k| self.curves[k].name.clone())
            .collect()
    }

    fn fresh_name(&self) -> String {
        let taken: BTreeSet<&str> = self.curves.iter().map(|c| c.name.as_str()).collect();
        let mut n = self.exceptional().count() + 1;
        loop {
            let name = format!("E{n}");
            if !taken.contains(name.as_str()) {
                return name;
            }
            n += 1;
        }
    }

    /// Apply a step, naming the new prime automatically.
    pub fn apply_step(&self, step: Step) -> Result<Self, BlowupError> {
        self.apply_named(step, None)
    }

    /// Apply a step; the new prime gets `name` if given.
    pub fn apply_named(&self, step: Step, name: Option<&str>) -> Result<Self, BlowupError> {
        let mut next = self.clone();
        next.push_step(step, name)?;
        Ok(next)
    }

    pub(crate) fn push_step(&mut self, step: Step, name: Option<&str>) -> Result<String, BlowupError> {
        let created = match name {
            Some(n) if self.curve(n).is_some() => return Err(BlowupError::DuplicateName(n.to_string())),
            Some(n) => n.to_string(),
            None => self.fresh_name(),
        };
        let (through, b, a, weight) = match &step {
            Step::Initial => {
                if !self.is_smooth_base() || !self.steps.is_empty() {
                    return Err(BlowupError::MisplacedInitial);
                }
                (vec![0, 1], 1, int(2), Some([1, 1]))
            }
            _ if self.is_smooth_base() && self.steps.is_empty() => return Err(BlowupError::MissingInitial),
            Step::Free(e) => {
                let i = self.index(e)?;
                let c = &self.curves[i];
                if !c.is_exceptional() {
                    return Err(BlowupError::NotExceptional(e.clone()));
                }
                (vec![i], c.b, &c.log_discrepancy + int(1), None)
            }
            Step::Satellite(e, f) => {
                let (i, j) = (self.index(e)?, self.index(f)?);
                if self.meeting_count(e, f) == 0 {
                    return Err(BlowupError::NotAdjacent(e.clone(), f.clone()));
                }
                let (ce, cf) = (&self.curves[i], &self.curves[j]);
                if !ce.is_exceptional() && !cf.is_exceptional() {
                    return Err(BlowupError::NotExceptional(format!("{e}, {f}")));
                }
                let weight = match (ce.weight, cf.weight) {
                    (Some(x), Some(y)) => Some([x[0] + y[0], x[1] + y[1]]),
                    _ => None,
                };
                (vec![i, j], ce.b + cf.b, &ce.log_discrepancy + &cf.log_discrepancy, weight)
            }
        };
        if let [i, j] = through[..] {
            let key = (i.min(j), i.max(j));
            let pos = self.edges.iter().position(|&e| e == key).expect("adjacency checked");
            self.edges.remove(pos);
        }
        for &i in &through {
            self.curves[i].self_intersection -= 1;
        }
        self.curves.push(Curve {
            name: created.clone(),
            kind: CurveKind::Exceptional,
            b,
            log_discrepancy: a,
            self_intersection: -1,
            genus: 0,
            weight,
        });
        let new = self.curves.len() - 1;
        self.edges.extend(through.iter().map(|&i| (i, new)));
        self.steps.push(StepRecord { step, created: created.clone() });
        Ok(created)
    }

    /// Dual graph of the exceptional primes (axes dropped).
    pub fn to_dual_graph(&self) -> DualGraph {
        let ex: Vec<usize> = (0..self.curves.len()).filter(|&i| self.curves[i].is_exceptional()).collect();
        let vertices = ex
            .iter()
            .map(|&i| {
                let c = &self.curves[i];
                Vertex { id: c.name.clone(), genus: c.genus, self_intersection: c.self_intersection }
            })
            .collect();
        let edges: Vec<(&str, &str)> = self
            .edges
            .iter()
            .filter(|(a, b)| self.curves[*a].is_exceptional() && self.curves[*b].is_exceptional())
            .map(|&(a, b)| (self.curves[a].name.as_str(), self.curves[b].name.as_str()))
            .collect();
        DualGraph::new(vertices, &edges).expect("bookkeeping keeps the graph valid")
    }

    /// Incremental log-discrepancies of the exceptional primes, in graph order.
    pub fn log_discrepancies(&self) -> Vec<Rational> {
        self.exceptional().map(|c| c.log_discrepancy.clone()).collect()
    }

    pub fn multiplicities(&self) -> Vec<u64> {
        self.exceptional().map(|c| c.b).collect()
    }

    pub fn skeleton(&self) -> Skeleton {
        let g = self.to_dual_graph();
        let vertices = self.exceptional().map(|c| (c.name.clone(), c.b)).collect();
        let segments = g
            .edges()
            .iter()
            .map(|&(a, b)| {
                let (e, f) = (&g.vertices()[a].id, &g.vertices()[b].id);
                SkeletonSegment { e: e.clone(), f: f.clone(), b_e: self.curve(e).unwrap().b, b_f: self.curve(f).unwrap().b }
            })
            .collect();
        Skeleton { vertices, segments }
    }

    /// `true` when `self` is obtained from `prefix` by further steps.
    pub fn has_prefix(&self, prefix: &BlowupSequence) -> bool {
        self.base == prefix.base && self.steps.len() >= prefix.steps.len() && self.steps[..prefix.steps.len()] == prefix.steps[..]
    }

    /// The model after the first `n` steps.
    pub fn truncate(&self, n: usize) -> Result<Self, BlowupError> {
        let mut seq = match &self.base {
            Base::Smooth => Self::smooth(),
            Base::Resolution(g) => {
                let base_count = g.len();
                let a: Vec<Rational> = self.curves[..base_count].iter().map(|c| c.log_discrepancy.clone()).collect();
                let b: Vec<u64> = self.curves[..base_count].iter().map(|c| c.b).collect();
                Self::over_resolution(g, &a, &b)
            }
        };
        for rec in self.steps.iter().take(n) {
            seq.push_step(rec.step.clone(), Some(&rec.created))?;
        }
        Ok(seq)
    }

    /// `(Σ E)^2` over the exceptional primes.
    pub fn total_self_intersection(&self) -> BigInt {
        let g = self.to_dual_graph();
        let m = g.intersection_matrix();
        let n = g.len();
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| BigInt::from(m.get(i, j))).sum()
    }
}

/// Skeleton of a model: one vertex per prime, one segment per intersection point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skeleton {
    pub vertices: Vec<(String, u64)>,
    pub segments: Vec<SkeletonSegment>,
}

/// Segment `{(r, s) : r·b_E + s·b_F = 1, r, s ≥ 0}` between two primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletonSegment {
    pub e: String,
    pub f: String,
    pub b_e: u64,
    pub b_f: u64,
}

impl SkeletonSegment {
    /// Normalized `ν_E`, i.e. weights `(1/b_E, 0)`.
    pub fn start(&self) -> (Rational, Rational) {
        (Rational::new(1.into(), self.b_e.into()), int(0))
    }

    /// Normalized `ν_F`, i.e. weights `(0, 1/b_F)`.
    pub fn end(&self) -> (Rational, Rational) {
        (int(0), Rational::new(1.into(), self.b_f.into()))
    }

    pub fn contains(&self, r: &Rational, s: &Rational) -> bool {
        let zero = int(0);
        *r >= zero && *s >= zero && r * int(self.b_e as i64) + s * int(self.b_f as i64) == int(1)
    }
}
