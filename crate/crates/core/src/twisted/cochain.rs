use num_rational::BigRational;

use super::{coboundary_from_entries, LocalSystem, TwistedChain, TwistedCochain, TwistedError};
use crate::algebra::sparse::{
    self, quotient_basis, quotient_coordinates, reduce, Reduction, SparseMatrix,
};
use crate::complex::SimplicialComplex;
use crate::cover::lift_entries;

/// A finite cochain complex of rational vector spaces with reduced
/// coboundaries. `reductions[q]` reduces `delta_q`, cleared by
/// `delta_{q-1}` and tracking `V`, so kernels and cohomology bases come for
/// free.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    counts: Vec<usize>,
    coboundary: Vec<SparseMatrix>,
    reductions: Vec<Reduction>,
    /// Reduction of the zero map into degree 0.
    empty: Reduction,
}

impl CochainComplex {
    /// `coboundary[q] : C^q -> C^{q+1}` for `q = 0..=top`; the last map
    /// goes to the zero space.
    pub fn new(coboundary: Vec<SparseMatrix>) -> Self {
        let counts: Vec<usize> = coboundary.iter().map(SparseMatrix::ncols).collect();
        let empty = reduce(
            &SparseMatrix::new(counts.first().copied().unwrap_or(0), Vec::new()),
            false,
            None,
        );
        let mut reductions: Vec<Reduction> = Vec::with_capacity(coboundary.len());
        for (q, d) in coboundary.iter().enumerate() {
            let clear = if q == 0 {
                None
            } else {
                Some(&reductions[q - 1])
            };
            let r = reduce(d, true, clear);
            reductions.push(r);
        }
        Self {
            counts,
            coboundary,
            reductions,
            empty,
        }
    }

    pub fn top(&self) -> usize {
        self.counts.len().saturating_sub(1)
    }

    pub fn count(&self, q: usize) -> usize {
        self.counts.get(q).copied().unwrap_or(0)
    }

    pub fn coboundary(&self, q: usize) -> &SparseMatrix {
        &self.coboundary[q]
    }

    fn previous(&self, q: usize) -> &Reduction {
        if q == 0 {
            &self.empty
        } else {
            &self.reductions[q - 1]
        }
    }

    pub fn betti(&self, q: usize) -> usize {
        if q >= self.counts.len() {
            return 0;
        }
        let rank_in = if q == 0 {
            0
        } else {
            self.reductions[q - 1].rank()
        };
        self.counts[q] - self.reductions[q].rank() - rank_in
    }

    pub fn betti_numbers(&self) -> Vec<usize> {
        (0..self.counts.len()).map(|q| self.betti(q)).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.betti_numbers()
            .iter()
            .enumerate()
            .map(|(q, b)| if q % 2 == 0 { *b as i64 } else { -(*b as i64) })
            .sum()
    }

    fn check_length(&self, u: &TwistedCochain) -> Result<(), TwistedError> {
        let n = self.count(u.q);
        match u.values.last() {
            Some((i, _)) if *i >= n => Err(TwistedError::WrongLength {
                got: i + 1,
                expected: n,
            }),
            _ => Ok(()),
        }
    }

    pub fn apply(&self, u: &TwistedCochain) -> TwistedCochain {
        if u.q >= self.coboundary.len() {
            return TwistedCochain::zero(u.q + 1);
        }
        TwistedCochain::new(u.q + 1, self.coboundary[u.q].apply(&u.values))
    }

    pub fn is_cocycle(&self, u: &TwistedCochain) -> bool {
        self.apply(u).is_zero()
    }

    /// Whether `u = delta x` for some cochain `x`.
    pub fn is_coboundary(&self, u: &TwistedCochain) -> bool {
        u.is_zero()
            || (u.q > 0 && u.q <= self.top() && self.reductions[u.q - 1].in_image(&u.values))
    }

    /// Some `x` with `delta x = u`, if one exists.
    pub fn primitive(&self, u: &TwistedCochain) -> Option<TwistedCochain> {
        if u.is_zero() {
            return Some(TwistedCochain::zero(u.q.saturating_sub(1)));
        }
        if u.q == 0 || u.q > self.top() {
            return None;
        }
        self.reductions[u.q - 1]
            .solve(&u.values)
            .map(|x| TwistedCochain::new(u.q - 1, x))
    }

    /// Cocycles whose classes form a basis of `H^q`.
    pub fn basis(&self, q: usize) -> Vec<TwistedCochain> {
        if q > self.top() {
            return Vec::new();
        }
        quotient_basis(&self.reductions[q], self.previous(q))
            .into_iter()
            .map(|v| TwistedCochain::new(q, v))
            .collect()
    }

    /// Coordinates of the class of a cocycle in [`CochainComplex::basis`].
    pub fn coordinates(&self, u: &TwistedCochain) -> Result<Vec<BigRational>, TwistedError> {
        self.check_length(u)?;
        if !self.is_cocycle(u) {
            return Err(TwistedError::NotClosed { q: u.q });
        }
        if u.q > self.top() {
            return Ok(Vec::new());
        }
        Ok(quotient_coordinates(
            &self.reductions[u.q],
            self.previous(u.q),
            &u.values,
        ))
    }

    /// Cycles of the dual chain complex (`d = delta^T`) in degree `q`.
    pub fn dual_cycles(&self, q: usize) -> Vec<TwistedChain> {
        if q > self.top() {
            return Vec::new();
        }
        let d = if q == 0 {
            SparseMatrix::new(0, vec![Vec::new(); self.count(0)])
        } else {
            self.coboundary[q - 1].transpose()
        };
        let red = reduce(&d, true, None);
        red.zero_columns()
            .map(|j| TwistedChain {
                q,
                values: red.v_column(j).expect("V tracked").clone(),
            })
            .collect()
    }
}

impl TwistedChain {
    pub fn pair(&self, u: &TwistedCochain) -> BigRational {
        sparse::dot(&self.values, &u.values)
    }
}

/// `C^*(K; a^xi)` with its reductions.
#[derive(Clone, Debug)]
pub struct TwistedCohomology {
    system: LocalSystem,
    complex: CochainComplex,
}

impl TwistedCohomology {
    pub fn new(k: &SimplicialComplex, s: &LocalSystem) -> Self {
        let entries = lift_entries(k, s.class(), s.heights());
        let top = k.dim().unwrap_or(0);
        let maps = (0..=top)
            .map(|q| coboundary_from_entries(k, &entries, s.a(), q))
            .collect();
        Self {
            system: s.clone(),
            complex: CochainComplex::new(maps),
        }
    }

    pub fn system(&self) -> &LocalSystem {
        &self.system
    }
}

impl std::ops::Deref for TwistedCohomology {
    type Target = CochainComplex;

    fn deref(&self) -> &CochainComplex {
        &self.complex
    }
}
