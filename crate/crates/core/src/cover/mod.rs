//! The infinite cyclic cover determined by an integer class, as a finite
//! free chain complex over `Q[t, 1/t]`; its homology module and the
//! movability of classes towards the two ends.

mod homology;
mod movability;
mod reduce;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::algebra::sparse::SparseMatrix;
use crate::algebra::LaurentPoly;
use crate::complex::{ComplexError, IntegerOneCocycle, SimplicialComplex};

pub use homology::{homology_module, ElementaryDivisor, TorsionDecomposition};
pub use movability::{
    movability_verdict, move_cycle_witness, End, Movability, MovabilityVerdict, MoveWitness,
};

use homology::HomologyData;
use reduce::ReducedComplex;

/// Sparse chain over the Laurent ring: simplex index -> coefficient.
pub type LaurentChain = BTreeMap<usize, LaurentPoly>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("complex is not connected")]
    Disconnected,
    #[error("class must be nonzero for cover analysis")]
    ZeroClass,
    #[error("degree {0} out of range")]
    DegreeOutOfRange(usize),
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("class is not movable to the {0} end")]
    EndNotGranted(End),
    #[error("no bounding chain found within the degree window [{lo}, {hi}]")]
    WindowExhausted { lo: i64, hi: i64 },
}

/// Boundary entry `sign * t^exponent` of a simplex on one of its faces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Entry {
    pub row: usize,
    pub sign: i64,
    pub exponent: i64,
}

pub struct LaurentChainComplex {
    complex: SimplicialComplex,
    xi: IntegerOneCocycle,
    heights: Vec<i64>,
    /// `boundaries[q]` holds the columns of `d_q`; `boundaries[0]` is empty.
    boundaries: Vec<Vec<Vec<Entry>>>,
    reduced: OnceLock<ReducedComplex>,
    modules: Vec<OnceLock<HomologyData>>,
}

impl std::fmt::Debug for LaurentChainComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LaurentChainComplex")
            .field("dim", &self.complex.dim())
            .field("heights", &self.heights)
            .finish_non_exhaustive()
    }
}

/// Lifts `k` to the cover of `xi`. Heights come from the breadth-first
/// spanning tree rooted at vertex 0; a simplex `(v_0 < ... < v_q)` meets its
/// 0-th face with exponent `h(v_0) + w(v_0, v_1) - h(v_1)` and all other
/// faces with exponent 0.
pub fn build_laurent_complex(
    k: &SimplicialComplex,
    xi: &IntegerOneCocycle,
) -> Result<LaurentChainComplex, CoverError> {
    k.ensure_valid()?;
    xi.check(k)?;
    if !k.is_connected() {
        return Err(CoverError::Disconnected);
    }
    let heights = xi.heights(k);
    let boundaries = lift_entries(k, xi, &heights);
    let dim = k.dim().unwrap_or(0);
    Ok(LaurentChainComplex {
        complex: k.clone(),
        xi: xi.clone(),
        heights,
        boundaries,
        reduced: OnceLock::new(),
        modules: (0..=dim).map(|_| OnceLock::new()).collect(),
    })
}

/// Monomial boundary entries of the lift, per degree; index 0 is empty.
pub(crate) fn lift_entries(
    k: &SimplicialComplex,
    xi: &IntegerOneCocycle,
    heights: &[i64],
) -> Vec<Vec<Vec<Entry>>> {
    let dim = k.dim().unwrap_or(0);
    let mut boundaries = vec![Vec::new()];
    for q in 1..=dim {
        let cols = k
            .simplices(q)
            .iter()
            .map(|s| {
                let mut col: Vec<Entry> = k
                    .faces(s)
                    .enumerate()
                    .map(|(i, (row, sign))| {
                        let exponent = if i == 0 {
                            heights[s[0]] + xi.weight(s[0], s[1]) - heights[s[1]]
                        } else {
                            0
                        };
                        Entry {
                            row,
                            sign,
                            exponent,
                        }
                    })
                    .collect();
                col.sort_by_key(|e| e.row);
                col
            })
            .collect();
        boundaries.push(cols);
    }
    boundaries
}

/// `d_q` of a lift with `t` specialized to `a`; `q = 0` is the zero map.
pub(crate) fn specialize_entries(
    entries: &[Vec<Vec<Entry>>],
    counts: (usize, usize),
    q: usize,
    a: &BigRational,
) -> SparseMatrix {
    let (rows, ncols) = counts;
    let cols = (0..ncols)
        .map(|j| {
            entries
                .get(q)
                .and_then(|m| m.get(j))
                .map(|col| {
                    col.iter()
                        .map(|e| {
                            let v = crate::algebra::laurent::rational_pow(a, e.exponent)
                                * BigRational::from_integer(e.sign.into());
                            (e.row, v)
                        })
                        .collect()
                })
                .unwrap_or_default()
        })
        .collect();
    SparseMatrix::new(rows, cols)
}

impl LaurentChainComplex {
    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn class(&self) -> &IntegerOneCocycle {
        &self.xi
    }

    pub fn heights(&self) -> &[i64] {
        &self.heights
    }

    pub fn dim(&self) -> usize {
        self.boundaries.len() - 1
    }

    pub fn rank(&self, q: usize) -> usize {
        self.complex.count(q)
    }

    /// Columns of `d_q` as monomial entries; empty for `q = 0` or `q > dim`.
    pub fn entries(&self, q: usize) -> &[Vec<Entry>] {
        self.boundaries.get(q).map_or(&[], Vec::as_slice)
    }

    /// `d_q` as a dense Laurent matrix.
    pub fn boundary(&self, q: usize) -> crate::algebra::Matrix<LaurentPoly> {
        let rows = if q == 0 { 0 } else { self.rank(q - 1) };
        let mut m = crate::algebra::Matrix::zeros(rows, self.rank(q));
        for (j, col) in self.entries(q).iter().enumerate() {
            for e in col {
                m.set(e.row, j, LaurentPoly::from_int(e.sign, e.exponent));
            }
        }
        m
    }

    /// `d_q` applied to a Laurent chain of degree `q`.
    pub fn apply_boundary(&self, q: usize, chain: &LaurentChain) -> LaurentChain {
        let mut out = LaurentChain::new();
        for (j, c) in chain {
            for e in &self.entries(q)[*j] {
                let term = c
                    .mul_t_pow(e.exponent)
                    .scale(&BigRational::from_integer(e.sign.into()));
                add_into(&mut out, e.row, &term);
            }
        }
        out
    }

    /// `d_q` with `t` specialized to a nonzero rational.
    pub fn specialize(&self, q: usize, a: &BigRational) -> SparseMatrix {
        let rows = if q == 0 { 0 } else { self.rank(q - 1) };
        specialize_entries(&self.boundaries, (rows, self.rank(q)), q, a)
    }

    pub(crate) fn reduced(&self) -> &ReducedComplex {
        self.reduced.get_or_init(|| ReducedComplex::new(self))
    }

    pub(crate) fn module_data(&self, q: usize) -> &HomologyData {
        self.modules[q].get_or_init(|| HomologyData::new(self.reduced(), q))
    }
}

pub(crate) fn add_into(chain: &mut LaurentChain, i: usize, term: &LaurentPoly) {
    if term.is_zero() {
        return;
    }
    let cur = chain.remove(&i).unwrap_or_else(LaurentPoly::zero);
    let sum = &cur + term;
    if !sum.is_zero() {
        chain.insert(i, sum);
    }
}

/// An integer chain (coefficients at `t^0`) as a Laurent chain.
pub fn integer_chain(coeffs: &[(usize, i64)]) -> LaurentChain {
    let mut out = LaurentChain::new();
    for (i, c) in coeffs {
        add_into(&mut out, *i, &LaurentPoly::from_int(*c, 0));
    }
    out
}

/// The 1-chain traced by a closed vertex loop, lifted to the cover starting
/// at the lift of its first vertex.
pub fn loop_chain(l: &LaurentChainComplex, vertices: &[usize]) -> Result<LaurentChain, CoverError> {
    let k = l.complex();
    let xi = l.class();
    let h = l.heights();
    let mut out = LaurentChain::new();
    // Height of the current lifted vertex relative to its basis lift.
    let mut level = 0i64;
    for w in vertices.windows(2) {
        let (u, v) = (w[0], w[1]);
        let (idx, sign) = k.edge(u, v).ok_or(ComplexError::NotAnEdge(u, v))?;
        let (lo, _) = if u < v { (u, v) } else { (v, u) };
        // Offset of the basis lift of the edge: its lower vertex sits at
        // height h(lo); our copy starts at level + h(u).
        let start = level + h[u];
        let lo_height = if lo == u {
            start
        } else {
            start + xi.weight(u, v)
        };
        let shift = lo_height - h[lo];
        add_into(&mut out, idx, &LaurentPoly::from_int(sign, shift));
        level = start + xi.weight(u, v) - h[v];
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures;

    #[test]
    fn circle_has_one_twisted_entry() {
        let l = build_laurent_complex(&fixtures::circle(), &fixtures::circle_generator()).unwrap();
        let twisted: usize = l
            .entries(1)
            .iter()
            .flatten()
            .filter(|e| e.exponent != 0)
            .count();
        assert_eq!(twisted, 1);
    }

    #[test]
    fn boundary_squares_to_zero_on_fixtures() {
        let (k, xi) = fixtures::doubling_mapping_torus();
        let l = build_laurent_complex(&k, &xi).unwrap();
        let d1 = l.boundary(1);
        let d2 = l.boundary(2);
        assert!((&d1 * &d2).is_zero_matrix());
    }

    #[test]
    fn specialization_at_one_is_integer_boundary() {
        let k = fixtures::torus(2, 3);
        let l = build_laurent_complex(&k, &fixtures::torus_class(2, 3, &[1, 2])).unwrap();
        for q in 1..=2 {
            let m = l
                .specialize(q, &BigRational::from_integer(1.into()))
                .to_dense();
            let b = k
                .boundary_matrix(q)
                .unwrap()
                .map(|x| BigRational::from_integer((*x).into()));
            assert_eq!(m, b);
        }
    }

    #[test]
    fn lifted_loop_is_a_cycle_only_when_period_vanishes() {
        let l = build_laurent_complex(&fixtures::circle(), &fixtures::circle_generator()).unwrap();
        let z = loop_chain(&l, &[0, 1, 2, 0]).unwrap();
        assert!(!l.apply_boundary(1, &z).is_empty());
        let (k, xi) = fixtures::doubling_mapping_torus();
        let l = build_laurent_complex(&k, &xi).unwrap();
        let z = loop_chain(&l, &fixtures::doubling_fiber_loop()).unwrap();
        assert!(l.apply_boundary(1, &z).is_empty());
    }

    #[test]
    fn disconnected_and_invalid_inputs() {
        let k = SimplicialComplex::from_facets([vec![0, 1], vec![2, 3]]);
        assert_eq!(
            build_laurent_complex(&k, &IntegerOneCocycle::zero()).unwrap_err(),
            CoverError::Disconnected
        );
    }
}
