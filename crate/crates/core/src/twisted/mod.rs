//! Cohomology with coefficients in the rank-one local system `a^xi`, twisted
//! cup products, and the vanishing test for restriction to a subcomplex on
//! which the class is trivial.
//!
//! Cochains are written in the trivialization given by the cover heights: a
//! cochain `u` stands for the equivariant cochain on the cover with
//! `u(t^k s) = a^k u(s)` on the lift `s` of each simplex.

mod cochain;
mod cup;
mod subcomplex;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::laurent::rational_pow;
use crate::algebra::sparse::{SparseMatrix, SparseVec};
use crate::algebra::AlgebraError;
use crate::complex::{ComplexError, EdgePath, IntegerOneCocycle, SimplicialComplex};
use crate::cover::{lift_entries, specialize_entries};

pub use cochain::{CochainComplex, TwistedCohomology};
pub use cup::{cup_product, twisted_cup};
pub use subcomplex::{
    lifting_vanishing_check, relative_cohomology, subcomplex_cohomology, LiftingReport,
    RestrictedComplex, Subcomplex,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TwistedError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("monodromy must be nonzero")]
    ZeroMonodromy,
    #[error("degree {q} cochain is not closed")]
    NotClosed { q: usize },
    #[error("cochain has {got} entries, expected {expected}")]
    WrongLength { got: usize, expected: usize },
    #[error("local systems are built from different classes")]
    ClassMismatch,
    #[error("class does not vanish on the subcomplex")]
    ClassNonzeroOnSubcomplex,
    #[error("monodromy {0} is a Dirichlet unit")]
    DirichletUnit(String),
    #[error("{0:?} is not a simplex of the complex")]
    NotASimplex(Vec<usize>),
}

/// The local system `a^xi` on a complex, trivialized by the heights of the
/// breadth-first spanning forest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalSystem {
    a: BigRational,
    xi: IntegerOneCocycle,
    heights: Vec<i64>,
}

impl LocalSystem {
    pub fn new(
        k: &SimplicialComplex,
        xi: &IntegerOneCocycle,
        a: BigRational,
    ) -> Result<Self, TwistedError> {
        if a.is_zero() {
            return Err(TwistedError::ZeroMonodromy);
        }
        xi.check(k)?;
        Ok(Self {
            a,
            xi: xi.clone(),
            heights: xi.heights(k),
        })
    }

    /// Constant rational coefficients.
    pub fn trivial(k: &SimplicialComplex) -> Self {
        Self {
            a: BigRational::one(),
            xi: IntegerOneCocycle::zero(),
            heights: vec![0; k.vertex_count()],
        }
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn class(&self) -> &IntegerOneCocycle {
        &self.xi
    }

    pub fn heights(&self) -> &[i64] {
        &self.heights
    }

    /// The same class with another monodromy.
    pub fn with_monodromy(&self, a: BigRational) -> Result<Self, TwistedError> {
        if a.is_zero() {
            return Err(TwistedError::ZeroMonodromy);
        }
        Ok(Self { a, ..self.clone() })
    }

    /// `a^{period}` along a closed edge path.
    pub fn monodromy(
        &self,
        k: &SimplicialComplex,
        path: &EdgePath,
    ) -> Result<BigRational, TwistedError> {
        Ok(rational_pow(&self.a, self.xi.period(k, path)?))
    }

    /// Transport factor from the trivialization at `u` to the one at `v`
    /// along the edge `u -> v`.
    pub(crate) fn transport(&self, u: usize, v: usize) -> i64 {
        self.heights[u] + self.xi.weight(u, v) - self.heights[v]
    }
}

/// A cochain of degree `q` in the height trivialization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistedCochain {
    pub q: usize,
    /// Sparse values indexed by `q`-simplex, increasing.
    #[serde(serialize_with = "crate::report::ser_sparse")]
    pub values: SparseVec,
}

impl TwistedCochain {
    pub fn new(q: usize, mut values: SparseVec) -> Self {
        values.retain(|(_, v)| !v.is_zero());
        values.sort_by_key(|(i, _)| *i);
        Self { q, values }
    }

    pub fn zero(q: usize) -> Self {
        Self {
            q,
            values: Vec::new(),
        }
    }

    pub fn from_dense(q: usize, values: &[BigRational]) -> Self {
        Self {
            q,
            values: crate::algebra::sparse::from_dense(values),
        }
    }

    /// The cochain taking value 1 on every vertex.
    pub fn unit(k: &SimplicialComplex) -> Self {
        Self::from_dense(0, &vec![BigRational::one(); k.count(0)])
    }

    pub fn value(&self, i: usize) -> BigRational {
        match self.values.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(p) => self.values[p].1.clone(),
            Err(_) => BigRational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn to_dense(&self, n: usize) -> Vec<BigRational> {
        crate::algebra::sparse::to_dense(&self.values, n)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.q, other.q, "degree mismatch");
        Self {
            q: self.q,
            values: crate::algebra::sparse::axpy(&self.values, &BigRational::one(), &other.values),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self {
            q: self.q,
            values: crate::algebra::sparse::scale(&self.values, c),
        }
    }
}

/// A chain of the dual complex, paired against cochains.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistedChain {
    pub q: usize,
    #[serde(serialize_with = "crate::report::ser_sparse")]
    pub values: SparseVec,
}

/// `delta_q : C^q -> C^{q+1}`, the transpose of the cover boundary
/// `d_{q+1}` at `t = a`. Rows are `(q+1)`-simplices, columns `q`-simplices.
pub fn twisted_coboundary(k: &SimplicialComplex, s: &LocalSystem, q: usize) -> SparseMatrix {
    let entries = lift_entries(k, &s.xi, &s.heights);
    coboundary_from_entries(k, &entries, &s.a, q)
}

pub(crate) fn coboundary_from_entries(
    k: &SimplicialComplex,
    entries: &[Vec<Vec<crate::cover::Entry>>],
    a: &BigRational,
    q: usize,
) -> SparseMatrix {
    specialize_entries(entries, (k.count(q), k.count(q + 1)), q + 1, a).transpose()
}

/// `dim H^q(K; a^xi)`.
pub fn twisted_betti(k: &SimplicialComplex, s: &LocalSystem, q: usize) -> usize {
    TwistedCohomology::new(k, s).betti(q)
}

/// All twisted Betti numbers `b_0, ..., b_dim`.
pub fn twisted_betti_numbers(k: &SimplicialComplex, s: &LocalSystem) -> Vec<usize> {
    TwistedCohomology::new(k, s).betti_numbers()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};
    use crate::complex::fixtures;

    #[test]
    fn circle_coboundary_at_two() {
        let k = fixtures::circle();
        let s = LocalSystem::new(&k, &fixtures::circle_generator(), int(2)).unwrap();
        let d = twisted_coboundary(&k, &s, 0);
        assert_eq!((d.nrows(), d.ncols()), (3, 3));
        assert_eq!(crate::algebra::sparse::reduce(&d, false, None).rank(), 3);
    }

    #[test]
    fn coboundary_at_one_is_ordinary() {
        let k = fixtures::torus(2, 3);
        let xi = fixtures::torus_class(2, 3, &[1, 0]);
        let s = LocalSystem::new(&k, &xi, int(1)).unwrap();
        for q in 0..2 {
            let ordinary = k.boundary_sparse(q + 1).transpose();
            assert_eq!(twisted_coboundary(&k, &s, q), ordinary);
        }
    }

    #[test]
    fn coboundary_squares_to_zero() {
        let (k, xi) = fixtures::doubling_mapping_torus();
        for a in [int(2), rat(1, 2), int(-2)] {
            let s = LocalSystem::new(&k, &xi, a).unwrap();
            let d0 = twisted_coboundary(&k, &s, 0).to_dense();
            let d1 = twisted_coboundary(&k, &s, 1).to_dense();
            assert!((&d1 * &d0).is_zero_matrix());
        }
    }

    #[test]
    fn monodromy_of_generator() {
        let k = fixtures::circle();
        let s = LocalSystem::new(&k, &fixtures::circle_generator(), rat(1, 2)).unwrap();
        let m = s.monodromy(&k, &EdgePath::new(vec![0, 1, 2, 0])).unwrap();
        assert_eq!(m, rat(1, 2));
        assert_eq!(
            s.monodromy(&k, &EdgePath::new(vec![0, 2, 1, 0])).unwrap(),
            int(2)
        );
    }

    #[test]
    fn zero_monodromy_is_rejected() {
        let k = fixtures::circle();
        assert_eq!(
            LocalSystem::new(&k, &fixtures::circle_generator(), int(0)).unwrap_err(),
            TwistedError::ZeroMonodromy
        );
    }
}
