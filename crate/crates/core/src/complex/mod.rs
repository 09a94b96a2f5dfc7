//! Finite simplicial complexes, boundary matrices, Betti numbers and
//! integer 1-cocycles.

mod cocycle;
pub mod fixtures;
mod parse;
mod subdivision;

use std::collections::{HashMap, HashSet};

use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::matrix::Matrix;
use crate::algebra::sparse::{self, SparseMatrix};

pub use cocycle::{fundamental_loops, EdgePath, IntegerOneCocycle};
pub use parse::{parse_cocycle, parse_complex};
pub use subdivision::{barycentric_subdivision, Subdivision};

pub type Simplex = Vec<usize>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("boundary matrix needs q >= 1, got {0}")]
    DimensionOutOfRange(usize),
    #[error("({0}, {1}) is not an edge of the complex")]
    NotAnEdge(usize, usize),
    #[error("path is empty")]
    EmptyPath,
    #[error("path is not closed")]
    NotClosed,
    #[error("weights violate the cocycle condition on {0:?}")]
    NotACocycle(Simplex),
    #[error("complex is not connected")]
    Disconnected,
    #[error("complex failed validation: {0}")]
    Invalid(String),
}

#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    simplices: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub dim: Option<usize>,
    pub vertex_count: usize,
    /// `(simplex, missing face)` pairs.
    pub closure_violations: Vec<(Simplex, Simplex)>,
    /// Tuples that are not strictly increasing or are repeated.
    pub orientation_errors: Vec<Simplex>,
    /// Vertex ids in `0..n` with no 0-simplex.
    pub vertex_gaps: Vec<usize>,
    /// Degrees `q` with `d_{q-1} d_q != 0`.
    pub boundary_failures: Vec<usize>,
}

impl SimplicialComplex {
    /// Raw constructor: stores the lists as given (sorted per dimension) and
    /// performs no closure. Use [`validate`](Self::validate) before relying on
    /// the invariants.
    pub fn from_simplices(by_dim: Vec<Vec<Simplex>>) -> Self {
        let mut simplices = by_dim;
        while simplices.last().is_some_and(Vec::is_empty) {
            simplices.pop();
        }
        for list in &mut simplices {
            list.sort();
        }
        let index = simplices
            .iter()
            .map(|list| {
                let mut m = HashMap::with_capacity(list.len());
                for (i, s) in list.iter().enumerate() {
                    m.entry(s.clone()).or_insert(i);
                }
                m
            })
            .collect();
        Self { simplices, index }
    }

    /// Closure of the given simplices under taking faces. Vertex tuples are
    /// sorted.
    pub fn from_facets<I: IntoIterator<Item = Simplex>>(facets: I) -> Self {
        let mut sets: Vec<HashSet<Simplex>> = Vec::new();
        for mut f in facets {
            f.sort_unstable();
            f.dedup();
            add_closure(&mut sets, f);
        }
        Self::from_simplices(sets.into_iter().map(|s| s.into_iter().collect()).collect())
    }

    pub fn dim(&self) -> Option<usize> {
        self.simplices.len().checked_sub(1)
    }

    pub fn vertex_count(&self) -> usize {
        self.count(0)
    }

    pub fn count(&self, q: usize) -> usize {
        self.simplices.get(q).map_or(0, Vec::len)
    }

    pub fn simplices(&self, q: usize) -> &[Simplex] {
        self.simplices.get(q).map_or(&[], Vec::as_slice)
    }

    pub fn index_of(&self, s: &[usize]) -> Option<usize> {
        let q = s.len().checked_sub(1)?;
        self.index.get(q)?.get(s).copied()
    }

    /// Index of the edge `{u, v}` and the orientation sign of `u -> v`.
    pub fn edge(&self, u: usize, v: usize) -> Option<(usize, i64)> {
        if u < v {
            self.index_of(&[u, v]).map(|i| (i, 1))
        } else {
            self.index_of(&[v, u]).map(|i| (i, -1))
        }
    }

    /// Sorted neighbour lists of the 1-skeleton.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for e in self.simplices(1) {
            adj[e[0]].push(e[1]);
            adj[e[1]].push(e[0]);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }

    /// Connected component label per vertex, labels in order of first vertex.
    pub fn components(&self) -> Vec<usize> {
        let adj = self.adjacency();
        let mut label = vec![usize::MAX; adj.len()];
        let mut next = 0;
        for root in 0..adj.len() {
            if label[root] != usize::MAX {
                continue;
            }
            let mut stack = vec![root];
            label[root] = next;
            while let Some(u) = stack.pop() {
                for &w in &adj[u] {
                    if label[w] == usize::MAX {
                        label[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() > 0 && self.components().iter().all(|&c| c == 0)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport {
            dim: self.dim(),
            vertex_count: self.vertex_count(),
            ..Default::default()
        };
        for (q, list) in self.simplices.iter().enumerate() {
            let mut seen = HashSet::new();
            for s in list {
                if s.len() != q + 1 || s.windows(2).any(|w| w[0] >= w[1]) || !seen.insert(s) {
                    report.orientation_errors.push(s.clone());
                    continue;
                }
                if q == 0 {
                    continue;
                }
                for i in 0..=q {
                    let face = face(s, i);
                    if self.index_of(&face).is_none() {
                        report.closure_violations.push((s.clone(), face));
                    }
                }
            }
        }
        let present: HashSet<usize> = self.simplices(0).iter().map(|v| v[0]).collect();
        let n = self
            .simplices
            .iter()
            .flatten()
            .flatten()
            .max()
            .map_or(0, |m| m + 1);
        report.vertex_gaps = (0..n).filter(|v| !present.contains(v)).collect();

        if report.orientation_errors.is_empty() {
            for q in 2..self.simplices.len() {
                let lower = self.boundary_sparse(q - 1);
                let upper = self.boundary_sparse(q);
                if upper.columns().iter().any(|c| !lower.apply(c).is_empty()) {
                    report.boundary_failures.push(q);
                }
            }
        }
        report.ok = report.closure_violations.is_empty()
            && report.orientation_errors.is_empty()
            && report.vertex_gaps.is_empty()
            && report.boundary_failures.is_empty();
        report
    }

    /// Validation as a `Result`, for callers that need the invariants.
    pub fn ensure_valid(&self) -> Result<(), ComplexError> {
        let r = self.validate();
        if r.ok {
            return Ok(());
        }
        let msg = if let Some((s, f)) = r.closure_violations.first() {
            format!("face {f:?} of {s:?} missing")
        } else if let Some(s) = r.orientation_errors.first() {
            format!("bad simplex tuple {s:?}")
        } else if let Some(v) = r.vertex_gaps.first() {
            format!("vertex {v} missing")
        } else {
            format!(
                "boundary of boundary nonzero in degree {:?}",
                r.boundary_failures
            )
        };
        Err(ComplexError::Invalid(msg))
    }

    /// Integer boundary `C_q -> C_{q-1}`, rows indexed by `(q-1)`-simplices.
    pub fn boundary_matrix(&self, q: usize) -> Result<Matrix<i64>, ComplexError> {
        if q == 0 {
            return Err(ComplexError::DimensionOutOfRange(q));
        }
        let mut m = Matrix::zeros(self.count(q - 1), self.count(q));
        for (j, s) in self.simplices(q).iter().enumerate() {
            for (i, sign) in self.faces(s) {
                m.set(i, j, sign);
            }
        }
        Ok(m)
    }

    /// `(face index, sign)` for each face present in the complex.
    pub fn faces<'a>(&'a self, s: &'a [usize]) -> impl Iterator<Item = (usize, i64)> + 'a {
        (0..s.len())
            .filter(move |_| s.len() > 1)
            .filter_map(move |i| {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                self.index_of(&face(s, i)).map(|k| (k, sign))
            })
    }

    /// Rational boundary `C_q -> C_{q-1}` in sparse form; `q = 0` gives the
    /// zero map to the zero space.
    pub fn boundary_sparse(&self, q: usize) -> SparseMatrix {
        if q == 0 {
            return SparseMatrix::new(0, vec![Vec::new(); self.count(0)]);
        }
        let cols = self
            .simplices(q)
            .iter()
            .map(|s| {
                let mut c: Vec<(usize, BigRational)> = self
                    .faces(s)
                    .map(|(i, sg)| (i, BigRational::from_integer(sg.into())))
                    .collect();
                c.sort_by_key(|(i, _)| *i);
                c
            })
            .collect();
        SparseMatrix::new(self.count(q - 1), cols)
    }

    /// Rational Betti numbers `b_0, ..., b_dim`.
    pub fn betti_numbers(&self) -> Vec<usize> {
        let Some(dim) = self.dim() else {
            return Vec::new();
        };
        let ranks: Vec<usize> = (0..=dim + 1)
            .map(|q| {
                if q == 0 {
                    0
                } else {
                    sparse::reduce(&self.boundary_sparse(q), false, None).rank()
                }
            })
            .collect();
        (0..=dim)
            .map(|q| self.count(q) - ranks[q] - ranks[q + 1])
            .collect()
    }

    /// Simplices that are not a face of any other simplex.
    pub fn maximal_simplices(&self) -> Vec<Simplex> {
        let mut out = Vec::new();
        for q in 0..self.simplices.len() {
            let mut covered = vec![false; self.count(q)];
            for s in self.simplices(q + 1) {
                for (i, _) in self.faces(s) {
                    covered[i] = true;
                }
            }
            out.extend(
                self.simplices(q)
                    .iter()
                    .zip(&covered)
                    .filter(|(_, c)| !**c)
                    .map(|(s, _)| s.clone()),
            );
        }
        out
    }

    /// The subcomplex spanned by a vertex set.
    pub fn induced(&self, vertices: &HashSet<usize>) -> Vec<Vec<usize>> {
        (0..self.simplices.len())
            .map(|q| {
                self.simplices(q)
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| s.iter().all(|v| vertices.contains(v)))
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect()
    }
}

/// `s` with its `i`-th vertex removed.
pub fn face(s: &[usize], i: usize) -> Simplex {
    s.iter()
        .enumerate()
        .filter(|(k, _)| *k != i)
        .map(|(_, v)| *v)
        .collect()
}

fn add_closure(sets: &mut Vec<HashSet<Simplex>>, s: Simplex) {
    let q = s.len() - 1;
    while sets.len() <= q {
        sets.push(HashSet::new());
    }
    if sets[q].contains(&s) {
        return;
    }
    if q > 0 {
        for i in 0..=q {
            add_closure(sets, face(&s, i));
        }
    }
    sets[q].insert(s);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_triangle_is_valid() {
        let k = SimplicialComplex::from_facets([vec![0, 1, 2]]);
        assert!(k.validate().ok);
        assert_eq!(k.betti_numbers(), vec![1, 0, 0]);
        let d2 = k.boundary_matrix(2).unwrap();
        // edges sorted: 01, 02, 12
        assert_eq!(d2.column(0), vec![1, -1, 1]);
        let d1 = k.boundary_matrix(1).unwrap();
        for j in 0..3 {
            assert_eq!(d1.column(j).iter().sum::<i64>(), 0);
        }
    }

    #[test]
    fn missing_face_is_reported() {
        let k = SimplicialComplex::from_simplices(vec![
            vec![vec![0], vec![1], vec![2]],
            vec![vec![0, 1], vec![0, 2]],
            vec![vec![0, 1, 2]],
        ]);
        let r = k.validate();
        assert!(!r.ok);
        assert_eq!(r.closure_violations, vec![(vec![0, 1, 2], vec![1, 2])]);
    }

    #[test]
    fn unsorted_tuple_is_an_orientation_error() {
        let k = SimplicialComplex::from_simplices(vec![vec![vec![0], vec![1]], vec![vec![1, 0]]]);
        assert_eq!(k.validate().orientation_errors, vec![vec![1, 0]]);
    }

    #[test]
    fn hollow_triangle() {
        let k = SimplicialComplex::from_facets([vec![0, 1], vec![1, 2], vec![0, 2]]);
        let r = k.validate();
        assert!(r.ok);
        assert_eq!(r.dim, Some(1));
        assert_eq!(k.betti_numbers(), vec![1, 1]);
        let d2 = k.boundary_matrix(2).unwrap();
        assert_eq!((d2.rows(), d2.cols()), (3, 0));
        assert!(k.boundary_matrix(0).is_err());
    }
}
