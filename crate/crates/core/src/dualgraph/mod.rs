//! Dual graphs of good resolutions and their lattice invariants.
//!
//! A [`DualGraph`] records one vertex per exceptional prime (genus and
//! self-intersection) and one edge per intersection point. From it we get the
//! intersection matrix, Grauert's negative definiteness test, the
//! log-discrepancies through adjunction (`M·A = 2g - 2 + s`) and the
//! fundamental cycle.

mod format;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;
use thiserror::Error;

use crate::numerics::{hj_expand, IntMatrix, NumericsError, RatMatrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("unknown vertex id `{0}`")]
    UnknownVertex(String),
    #[error("self-loop at `{0}` (good resolutions have no nodal primes)")]
    SelfLoop(String),
    #[error("intersection matrix is not invertible")]
    NotInvertible,
    #[error("intersection form is not negative definite")]
    NotNegativeDefinite,
    #[error("graph is not connected")]
    Disconnected,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub genus: u32,
    pub self_intersection: i64,
}

impl Vertex {
    pub fn rational(id: impl Into<String>, self_intersection: i64) -> Self {
        Vertex { id: id.into(), genus: 0, self_intersection }
    }
}

/// Weighted graph of exceptional primes. Multi-edges are allowed, self-loops are not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    vertices: Vec<Vertex>,
    edges: Vec<(usize, usize)>,
}

/// A divisor supported on the exceptional locus, one coefficient per prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExceptionalDivisor {
    entries: Vec<(String, Rational)>,
}

impl ExceptionalDivisor {
    pub fn new(entries: Vec<(String, Rational)>) -> Self {
        ExceptionalDivisor { entries }
    }

    pub fn get(&self, id: &str) -> Option<&Rational> {
        self.entries.iter().find(|(k, _)| k == id).map(|(_, v)| v)
    }

    pub fn coefficients(&self) -> Vec<Rational> {
        self.entries.iter().map(|(_, v)| v.clone()).collect()
    }

    pub fn entries(&self) -> &[(String, Rational)] {
        &self.entries
    }
}

impl fmt::Display for ExceptionalDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|(k, v)| format!("{k}: {v}")).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl DualGraph {
    pub fn new(vertices: Vec<Vertex>, edges: &[(&str, &str)]) -> Result<Self, GraphError> {
        let mut g = DualGraph { vertices: Vec::new(), edges: Vec::new() };
        for v in vertices {
            g.push_vertex(v)?;
        }
        for (a, b) in edges {
            g.push_edge(a, b)?;
        }
        Ok(g)
    }

    pub(crate) fn empty() -> Self {
        DualGraph { vertices: Vec::new(), edges: Vec::new() }
    }

    pub(crate) fn push_vertex(&mut self, v: Vertex) -> Result<usize, GraphError> {
        if self.index_of(&v.id).is_some() {
            return Err(GraphError::DuplicateVertex(v.id));
        }
        self.vertices.push(v);
        Ok(self.vertices.len() - 1)
    }

    pub(crate) fn push_edge(&mut self, a: &str, b: &str) -> Result<(), GraphError> {
        let i = self.index_of(a).ok_or_else(|| GraphError::UnknownVertex(a.to_string()))?;
        let j = self.index_of(b).ok_or_else(|| GraphError::UnknownVertex(b.to_string()))?;
        if i == j {
            return Err(GraphError::SelfLoop(a.to_string()));
        }
        self.edges.push((i.min(j), i.max(j)));
        Ok(())
    }

    /// Path graph of rational curves `E1 - E2 - ... - En` with the given self-intersections.
    pub fn chain(self_intersections: &[i64]) -> Self {
        let vertices = self_intersections
            .iter()
            .enumerate()
            .map(|(i, &e)| Vertex::rational(format!("E{}", i + 1), e))
            .collect();
        let edges = (1..self_intersections.len()).map(|i| (i - 1, i)).collect();
        DualGraph { vertices, edges }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Edges as index pairs `(i, j)` with `i < j`, repeated for multi-edges.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    /// Number of edge ends at vertex `i` (the `s(E)` of adjunction).
    pub fn degree(&self, i: usize) -> usize {
        self.edges.iter().map(|&(a, b)| usize::from(a == i) + usize::from(b == i)).sum()
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let mut seen = BTreeSet::from([0usize]);
        let mut stack = vec![0usize];
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.edges {
                let other = if a == v { b } else if b == v { a } else { continue };
                if seen.insert(other) {
                    stack.push(other);
                }
            }
        }
        seen.len() == self.vertices.len()
    }

    /// Subgraph induced on the given vertex ids, in the given order.
    pub fn induced(&self, ids: &[&str]) -> Result<DualGraph, GraphError> {
        let idx: Vec<usize> = ids
            .iter()
            .map(|id| self.index_of(id).ok_or_else(|| GraphError::UnknownVertex(id.to_string())))
            .collect::<Result<_, _>>()?;
        let vertices = idx.iter().map(|&i| self.vertices[i].clone()).collect();
        let pos = |i: usize| idx.iter().position(|&k| k == i);
        let edges = self
            .edges
            .iter()
            .filter_map(|&(a, b)| Some((pos(a)?, pos(b)?)))
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        Ok(DualGraph { vertices, edges })
    }

    pub fn intersection_matrix(&self) -> IntMatrix {
        let n = self.vertices.len();
        let mut m = IntMatrix::zeros(n);
        for (i, v) in self.vertices.iter().enumerate() {
            m.set(i, i, v.self_intersection);
        }
        for &(a, b) in &self.edges {
            m.set(a, b, m.get(a, b) + 1);
            m.set(b, a, m.get(b, a) + 1);
        }
        m
    }

    pub fn is_negative_definite(&self) -> bool {
        is_negative_definite(&self.intersection_matrix())
    }

    pub fn inverse_matrix(&self) -> Result<RatMatrix, GraphError> {
        inverse_matrix(&self.intersection_matrix())
    }

    /// Log-discrepancies `A = M^{-1}(2g - 2 + s)`.
    pub fn log_discrepancies(&self) -> Result<ExceptionalDivisor, GraphError> {
        let inv = self.inverse_matrix()?;
        let rhs: Vec<Rational> = (0..self.len())
            .map(|i| {
                let g = i64::from(self.vertices[i].genus);
                Rational::from_integer(BigInt::from(2 * g - 2 + self.degree(i) as i64))
            })
            .collect();
        let a = inv.mul_vec(&rhs);
        Ok(self.divisor(a))
    }

    /// Laufer's fundamental cycle: start from the reduced exceptional divisor
    /// and add `E_i` while `Z·E_i > 0`.
    pub fn fundamental_cycle(&self) -> Result<ExceptionalDivisor, GraphError> {
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        if !self.is_negative_definite() {
            return Err(GraphError::NotNegativeDefinite);
        }
        let m = self.intersection_matrix();
        let n = self.len();
        let mut z = vec![1i64; n];
        loop {
            let bump = (0..n).find(|&i| (0..n).map(|j| z[j] * m.get(j, i)).sum::<i64>() > 0);
            match bump {
                Some(i) => z[i] += 1,
                None => break,
            }
        }
        Ok(self.divisor(z.into_iter().map(|c| Rational::from_integer(c.into())).collect()))
    }

    fn divisor(&self, coeffs: Vec<Rational>) -> ExceptionalDivisor {
        ExceptionalDivisor::new(self.vertices.iter().map(|v| v.id.clone()).zip(coeffs).collect())
    }

    /// Intersection number `D·E_i` for every prime.
    pub fn intersect(&self, d: &[Rational]) -> Vec<Rational> {
        self.intersection_matrix().mul_vec(d)
    }
}

/// Grauert's test: every leading principal minor satisfies `(-1)^k det(M_k) > 0`.
pub fn is_negative_definite(m: &IntMatrix) -> bool {
    if !m.is_symmetric() {
        return false;
    }
    let minors = m.leading_minors();
    minors.len() == m.size()
        && minors.iter().enumerate().all(|(k, d)| {
            // k is zero-based, so M_{k+1} must have sign (-1)^{k+1}
            if k % 2 == 0 {
                d.is_negative()
            } else {
                d.is_positive()
            }
        })
}

pub fn inverse_matrix(m: &IntMatrix) -> Result<RatMatrix, GraphError> {
    m.inverse().map_err(|e| match e {
        NumericsError::Singular => GraphError::NotInvertible,
        other => GraphError::Numerics(other),
    })
}

/// Minimal resolution graph of the cyclic quotient singularity of type `1/p (1, q)`.
pub fn quotient_chain(p: u64, q: u64) -> Result<DualGraph, GraphError> {
    let chain = hj_expand(p, q)?;
    let self_ints: Vec<i64> = chain.iter().map(|&a| -(a as i64)).collect();
    Ok(DualGraph::chain(&self_ints))
}

impl DualGraph {
    pub fn determinant(&self) -> BigInt {
        self.intersection_matrix().determinant()
    }

    pub fn is_rational_tree(&self) -> bool {
        self.vertices.iter().all(|v| v.genus == 0) && self.edges.len() + 1 == self.len() && self.is_connected()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{int, rat};

    #[test]
    fn matrix_examples() {
        let m = DualGraph::chain(&[-3, -2, -2]).intersection_matrix();
        assert_eq!(m.rows(), vec![vec![-3, 1, 0], vec![1, -2, 1], vec![0, 1, -2]]);
        assert_eq!(DualGraph::chain(&[-1]).intersection_matrix().rows(), vec![vec![-1]]);
        let cycle = DualGraph::new(
            vec![Vertex::rational("a", -2), Vertex::rational("b", -2)],
            &[("a", "b"), ("a", "b")],
        )
        .unwrap();
        assert_eq!(cycle.intersection_matrix().rows(), vec![vec![-2, 2], vec![2, -2]]);
        assert!(!cycle.is_negative_definite());
    }

    #[test]
    fn definiteness_examples() {
        for k in 1..12 {
            assert!(DualGraph::chain(&[-3, -2, -k]).is_negative_definite());
        }
        assert!(!is_negative_definite(&IntMatrix::from_rows(&[vec![0]])));
        assert!(!DualGraph::chain(&[-1, -1]).is_negative_definite());
    }

    #[test]
    fn log_discrepancy_examples() {
        let a = DualGraph::chain(&[-3, -2, -2]).log_discrepancies().unwrap();
        assert_eq!(a.coefficients(), vec![rat(4, 7), rat(5, 7), rat(6, 7)]);
        assert_eq!(DualGraph::chain(&[-1]).log_discrepancies().unwrap().coefficients(), vec![int(2)]);
        assert_eq!(DualGraph::chain(&[-2]).log_discrepancies().unwrap().coefficients(), vec![int(1)]);
    }

    #[test]
    fn singular_graph_has_no_discrepancies() {
        let g = DualGraph::chain(&[-1, -1]);
        assert_eq!(g.log_discrepancies(), Err(GraphError::NotInvertible));
    }

    #[test]
    fn inverse_examples() {
        let inv = DualGraph::chain(&[-3, -2, -2]).inverse_matrix().unwrap();
        let expect = RatMatrix::from_int(&IntMatrix::from_rows(&[vec![3, 2, 1], vec![2, 6, 3], vec![1, 3, 5]]))
            .scale(&rat(-1, 7));
        assert_eq!(inv, expect);
        let inv = DualGraph::chain(&[-3, -2, -3]).inverse_matrix().unwrap();
        let expect = RatMatrix::from_int(&IntMatrix::from_rows(&[vec![5, 3, 1], vec![3, 9, 3], vec![1, 3, 5]]))
            .scale(&rat(-1, 12));
        assert_eq!(inv, expect);
        assert_eq!(DualGraph::chain(&[-1]).inverse_matrix().unwrap().get(0, 0), &int(-1));
    }

    #[test]
    fn quotient_chain_examples() {
        assert_eq!(quotient_chain(7, 3).unwrap(), DualGraph::chain(&[-3, -2, -2]));
        assert_eq!(quotient_chain(2, 1).unwrap(), DualGraph::chain(&[-2]));
        for k in 2..=20i64 {
            let g = quotient_chain((5 * k - 3) as u64, (2 * k - 1) as u64).unwrap();
            assert_eq!(g, DualGraph::chain(&[-3, -2, -k]));
            assert_eq!(g.determinant().abs(), BigInt::from(5 * k - 3));
        }
        assert!(quotient_chain(6, 4).is_err());
    }

    #[test]
    fn fundamental_cycle_examples() {
        let ones = vec![int(1), int(1), int(1)];
        assert_eq!(DualGraph::chain(&[-2, -2, -2]).fundamental_cycle().unwrap().coefficients(), ones);
        assert_eq!(DualGraph::chain(&[-3, -2, -2]).fundamental_cycle().unwrap().coefficients(), ones);
        assert_eq!(DualGraph::chain(&[-5]).fundamental_cycle().unwrap().coefficients(), vec![int(1)]);
        assert_eq!(DualGraph::chain(&[0]).fundamental_cycle(), Err(GraphError::NotNegativeDefinite));
    }

    #[test]
    fn d4_fundamental_cycle_has_a_two() {
        let g = DualGraph::new(
            vec![
                Vertex::rational("c", -2),
                Vertex::rational("a", -2),
                Vertex::rational("b", -2),
                Vertex::rational("d", -2),
            ],
            &[("c", "a"), ("c", "b"), ("c", "d")],
        )
        .unwrap();
        assert_eq!(g.fundamental_cycle().unwrap().coefficients(), vec![int(2), int(1), int(1), int(1)]);
    }

    #[test]
    fn construction_errors() {
        let v = || vec![Vertex::rational("a", -2), Vertex::rational("b", -2)];
        assert_eq!(DualGraph::new(v(), &[("a", "a")]), Err(GraphError::SelfLoop("a".into())));
        assert_eq!(DualGraph::new(v(), &[("a", "c")]), Err(GraphError::UnknownVertex("c".into())));
        let dup = vec![Vertex::rational("a", -2), Vertex::rational("a", -3)];
        assert_eq!(DualGraph::new(dup, &[]), Err(GraphError::DuplicateVertex("a".into())));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        /// Connected graph on `n` vertices: a random tree plus optional extra edges.
        fn arb_graph() -> impl Strategy<Value = DualGraph> {
            (1usize..=4)
                .prop_flat_map(|n| {
                    (
                        prop::collection::vec(-5i64..=-1, n),
                        prop::collection::vec(0usize..4, n),
                        prop::collection::vec((0usize..4, 0usize..4), 0..2),
                        prop::collection::vec(0u32..2, n),
                    )
                })
                .prop_map(|(selfs, parents, extra, genera)| {
                    let n = selfs.len();
                    let vertices = selfs
                        .iter()
                        .zip(&genera)
                        .enumerate()
                        .map(|(i, (&e, &g))| Vertex { id: format!("v{i}"), genus: g, self_intersection: e })
                        .collect();
                    let mut edges: Vec<(usize, usize)> = (1..n).map(|i| (parents[i] % i, i)).collect();
                    edges.extend(extra.into_iter().map(|(a, b)| (a % n, b % n)).filter(|(a, b)| a != b).map(|(a, b)| (a.min(b), a.max(b))));
                    DualGraph { vertices, edges }
                })
        }

        fn pairing(m: &IntMatrix, z: &[i64], i: usize) -> i64 {
            (0..z.len()).map(|j| z[j] * m.get(j, i)).sum()
        }

        proptest! {
            #[test]
            fn adjunction_holds(g in arb_graph()) {
                if let Ok(a) = g.log_discrepancies() {
                    let lhs = g.intersect(&a.coefficients());
                    for (i, v) in g.vertices().iter().enumerate() {
                        let rhs = int(2 * i64::from(v.genus) - 2 + g.degree(i) as i64);
                        prop_assert_eq!(&lhs[i], &rhs);
                    }
                } else {
                    prop_assert_eq!(g.determinant(), BigInt::from(0));
                }
            }

            #[test]
            fn fundamental_cycle_is_minimal(g in arb_graph()) {
                let Ok(z) = g.fundamental_cycle() else {
                    prop_assert!(!g.is_negative_definite());
                    return Ok(());
                };
                let m = g.intersection_matrix();
                let n = g.len();
                let zc: Vec<i64> = z.coefficients().iter().map(|c| i64::try_from(c.to_integer()).unwrap()).collect();
                prop_assert!((0..n).all(|i| pairing(&m, &zc, i) <= 0));
                // brute force over coefficient vectors in {0..3}^n
                for code in 1..4usize.pow(n as u32) {
                    let cand: Vec<i64> = (0..n).map(|i| ((code / 4usize.pow(i as u32)) % 4) as i64).collect();
                    if (0..n).all(|i| pairing(&m, &cand, i) <= 0) {
                        prop_assert!(cand.iter().zip(&zc).all(|(c, z)| c >= z), "{:?} below {:?}", cand, zc);
                    }
                }
            }

            #[test]
            fn quotient_chains_are_definite(p in 2u64..200, q in 1u64..200) {
                prop_assume!(q < p && num_integer::Integer::gcd(&p, &q) == 1);
                let g = quotient_chain(p, q).unwrap();
                prop_assert!(g.is_negative_definite());
                prop_assert_eq!(g.determinant().abs(), BigInt::from(p));
            }
        }
    }
}
