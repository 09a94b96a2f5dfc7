//! `H_q` of the cover as a module over `Q[t, 1/t]`.
//!
//! With `A = d_q` and `B = d_{q+1}` cleared of negative powers, the Smith
//! form `U A V = D` of rank `r` identifies `ker A` with the last columns of
//! `V`; the rows of `V^{-1} B` past `r` present the homology, and a second
//! Smith form of that block gives invariant factors. Powers of `t` are
//! units of the Laurent ring and are dropped.

use num_traits::{One, Zero};
use serde::Serialize;

use super::reduce::ReducedComplex;
use super::{CoverError, LaurentChain, LaurentChainComplex};
use crate::algebra::factor::factor_over_integers;
use crate::algebra::snf::smith_normal_form;
use crate::algebra::units::{verdict_unchecked, FactorVerdict};
use crate::algebra::{IntPoly, LaurentPoly, Matrix, QPoly};

/// One cyclic summand `R/(p^m)`, with the root flags of `p`.
pub type ElementaryDivisor = FactorVerdict;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionDecomposition {
    pub q: usize,
    pub free_rank: usize,
    /// Invariant factors `d_1 | d_2 | ...` of the torsion part, as primitive
    /// integer polynomials with nonzero constant term.
    #[serde(serialize_with = "ser_polys")]
    pub invariant_factors: Vec<IntPoly>,
    /// Elementary divisors: one entry per summand `R/(p^m)`.
    pub factors: Vec<ElementaryDivisor>,
}

fn ser_polys<S: serde::Serializer>(v: &[IntPoly], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

impl TorsionDecomposition {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.factors.is_empty()
    }

    /// Number of summands `R/((t - 1)^m)`; each adds one dimension to both
    /// the kernel and the cokernel of `t - 1`.
    pub fn count_divisible_by_t_minus_one(&self) -> usize {
        let t1 = IntPoly::from_i64(&[-1, 1]);
        self.factors.iter().filter(|f| f.factor == t1).count()
    }
}

/// Cached Smith data for one degree of the reduced complex.
#[derive(Clone, Debug)]
pub(crate) struct HomologyData {
    q: usize,
    rank_a: usize,
    v_inv: Matrix<QPoly>,
    u2: Matrix<QPoly>,
    /// Diagonal of the second Smith form, zeros included, length
    /// `dim ker A`.
    d2: Vec<QPoly>,
    rank_p: usize,
}

/// Multiply every entry by the smallest `t^k` making all of them polynomials.
fn clear_negative_powers(m: &Matrix<LaurentPoly>) -> Matrix<QPoly> {
    let lowest = (0..m.rows())
        .flat_map(|i| m.row(i).iter().filter_map(LaurentPoly::min_degree))
        .min()
        .unwrap_or(0);
    let k = (-lowest).max(0);
    m.map(|x| laurent_to_poly(&x.mul_t_pow(k)))
}

fn laurent_to_poly(x: &LaurentPoly) -> QPoly {
    if x.is_zero() {
        return QPoly::zero();
    }
    assert!(x.shift() >= 0, "negative power left");
    x.poly().shift_up(x.shift() as usize)
}

impl HomologyData {
    pub fn new(red: &ReducedComplex, q: usize) -> Self {
        let n = red.rank(q);
        let a = clear_negative_powers(&red.boundary[q]);
        let b = match red.boundary.get(q + 1) {
            Some(m) => clear_negative_powers(m),
            None => Matrix::zeros(n, 0),
        };
        let s1 = smith_normal_form(&a);
        let rank_a = s1.rank();
        let vb = &s1.v_inv * &b;
        debug_assert!((0..rank_a).all(|i| vb.row(i).iter().all(Zero::is_zero)));
        let p = vb.row_range(rank_a, n);
        let s2 = smith_normal_form(&p);
        let rank_p = s2.rank();
        let mut d2 = s2.diagonal();
        d2.resize(n - rank_a, QPoly::zero());
        Self {
            q,
            rank_a,
            v_inv: s1.v_inv,
            u2: s2.u,
            d2,
            rank_p,
        }
    }

    pub fn decomposition(&self) -> TorsionDecomposition {
        let free_rank = self.d2.len() - self.rank_p;
        let mut invariant_factors = Vec::new();
        let mut factors = Vec::new();
        for d in &self.d2[..self.rank_p] {
            let p = d.to_primitive_int();
            let stripped = strip_t(&p);
            if stripped.degree().unwrap_or(0) == 0 {
                continue;
            }
            let f = factor_over_integers(&stripped).expect("nonzero");
            for (g, m) in &f.factors {
                factors.push(verdict_unchecked(g, *m));
            }
            invariant_factors.push(stripped);
        }
        factors.sort_by(|x, y| {
            x.factor
                .degree()
                .cmp(&y.factor.degree())
                .then_with(|| {
                    x.factor
                        .coeffs()
                        .iter()
                        .rev()
                        .cmp(y.factor.coeffs().iter().rev())
                })
                .then(x.multiplicity.cmp(&y.multiplicity))
        });
        TorsionDecomposition {
            q: self.q,
            free_rank,
            invariant_factors,
            factors,
        }
    }

    /// Annihilator of the torsion component of a cycle (monic, `t`-free) and
    /// whether its free component is nonzero.
    pub fn class_data(&self, projected: &[LaurentPoly]) -> (QPoly, bool) {
        let lowest = projected
            .iter()
            .filter_map(LaurentPoly::min_degree)
            .min()
            .unwrap_or(0);
        let z: Vec<QPoly> = projected
            .iter()
            .map(|x| laurent_to_poly(&x.mul_t_pow(-lowest)))
            .collect();
        let y = self.v_inv.mul_vec(&z);
        debug_assert!(y[..self.rank_a].iter().all(Zero::is_zero), "not a cycle");
        let w = self.u2.mul_vec(&y[self.rank_a..]);
        let mut ann = QPoly::one();
        let mut free = false;
        for (i, wi) in w.iter().enumerate() {
            if i >= self.rank_p {
                free |= !wi.is_zero();
                continue;
            }
            let d = &self.d2[i];
            let r = wi.div_rem(d).1;
            if r.is_zero() {
                continue;
            }
            let g = d.gcd(&r);
            let part = d.div_exact(&g).expect("gcd divides");
            ann = ann.lcm(&part);
        }
        (ann.strip_t().monic(), free)
    }
}

fn strip_t(p: &IntPoly) -> IntPoly {
    let v = p.coeffs().iter().take_while(|c| c.is_zero()).count();
    IntPoly::new(p.coeffs()[v..].to_vec())
}

pub fn homology_module(
    l: &LaurentChainComplex,
    q: usize,
) -> Result<TorsionDecomposition, CoverError> {
    if q > l.dim() {
        return Err(CoverError::DegreeOutOfRange(q));
    }
    if l.class().is_zero() {
        return Err(CoverError::ZeroClass);
    }
    Ok(l.module_data(q).decomposition())
}

/// Annihilator and free-part flag of the homology class of a cycle.
pub(crate) fn class_data(
    l: &LaurentChainComplex,
    q: usize,
    z: &LaurentChain,
) -> Result<(QPoly, bool), CoverError> {
    if q > l.dim() {
        return Err(CoverError::DegreeOutOfRange(q));
    }
    if q > 0 && !l.apply_boundary(q, z).is_empty() {
        return Err(CoverError::NotACycle);
    }
    let projected = l.reduced().project(q, z);
    Ok(l.module_data(q).class_data(&projected))
}
