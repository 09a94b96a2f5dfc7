//! Elimination of unit entries from the Laurent chain complex.
//!
//! A unit entry `b = d_q[i, j]` lets the pair `(e_j, e_i)` be cancelled:
//! quotienting by the acyclic subcomplex spanned by `e_j` and `d e_j` gives a
//! smaller complex with the same homology. The quotient map is recorded so
//! cycles of the original complex can be carried over.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use super::{LaurentChain, LaurentChainComplex};
use crate::algebra::{LaurentPoly, Matrix};

/// `x <- x - x_i * coef * col`, after which coordinate `i` is gone.
#[derive(Clone, Debug)]
struct Pivot {
    i: usize,
    coef: LaurentPoly,
    col: LaurentChain,
}

#[derive(Clone, Debug)]
pub(crate) struct ReducedComplex {
    /// Surviving original basis indices per degree, increasing.
    pub alive: Vec<Vec<usize>>,
    /// `boundary[q]`: rows `alive[q-1]`, columns `alive[q]`.
    pub boundary: Vec<Matrix<LaurentPoly>>,
    ops: Vec<Vec<Pivot>>,
}

struct Work {
    cols: Vec<Vec<Option<BTreeMap<usize, LaurentPoly>>>>,
    rows: Vec<Vec<BTreeSet<usize>>>,
    alive: Vec<BTreeSet<usize>>,
    ops: Vec<Vec<Pivot>>,
}

fn inverse_unit(b: &LaurentPoly) -> LaurentPoly {
    LaurentPoly::monomial(b.poly().coeff(0).recip(), -b.shift())
}

impl Work {
    fn eliminate(&mut self, q: usize, i: usize, j: usize) {
        let col_j = self.cols[q][j].take().expect("live column");
        let binv = inverse_unit(&col_j[&i]);
        for &r in col_j.keys() {
            self.rows[q][r].remove(&j);
        }
        let others: Vec<usize> = self.rows[q][i].iter().copied().collect();
        for jp in others {
            let col = self.cols[q][jp].as_mut().expect("live column");
            let factor = &col[&i] * &binv;
            for (r, v) in &col_j {
                let cur = col.remove(r).unwrap_or_else(LaurentPoly::zero);
                let next = &cur - &(&factor * v);
                if next.is_zero() {
                    self.rows[q][*r].remove(&jp);
                } else {
                    col.insert(*r, next);
                    self.rows[q][*r].insert(jp);
                }
            }
            debug_assert!(!col.contains_key(&i));
        }
        debug_assert!(self.rows[q][i].is_empty());

        if q + 1 < self.cols.len() {
            for c in std::mem::take(&mut self.rows[q + 1][j]) {
                self.cols[q + 1][c]
                    .as_mut()
                    .expect("live column")
                    .remove(&j);
            }
        }
        if q >= 2 {
            if let Some(col) = self.cols[q - 1][i].take() {
                for r in col.keys() {
                    self.rows[q - 1][*r].remove(&i);
                }
            }
        }
        self.alive[q].remove(&j);
        self.alive[q - 1].remove(&i);
        self.ops[q - 1].push(Pivot {
            i,
            coef: binv,
            col: col_j.into_iter().collect(),
        });
    }

    fn find_unit(&self, q: usize) -> Option<(usize, usize)> {
        self.alive[q].iter().find_map(|&j| {
            let col = self.cols[q][j].as_ref()?;
            col.iter().find(|(_, v)| v.is_unit()).map(|(i, _)| (*i, j))
        })
    }
}

impl ReducedComplex {
    pub fn new(l: &LaurentChainComplex) -> Self {
        let dim = l.dim();
        let mut w = Work {
            cols: vec![Vec::new(); dim + 1],
            rows: (0..=dim)
                .map(|q| vec![BTreeSet::new(); if q == 0 { 0 } else { l.rank(q - 1) }])
                .collect(),
            alive: (0..=dim).map(|q| (0..l.rank(q)).collect()).collect(),
            ops: vec![Vec::new(); dim + 1],
        };
        for q in 1..=dim {
            w.cols[q] = l
                .entries(q)
                .iter()
                .enumerate()
                .map(|(j, col)| {
                    let mut m = BTreeMap::new();
                    for e in col {
                        m.insert(e.row, LaurentPoly::from_int(e.sign, e.exponent));
                        w.rows[q][e.row].insert(j);
                    }
                    Some(m)
                })
                .collect();
        }
        loop {
            let mut progress = false;
            for q in (1..=dim).rev() {
                while let Some((i, j)) = w.find_unit(q) {
                    w.eliminate(q, i, j);
                    progress = true;
                }
            }
            if !progress {
                break;
            }
        }

        let alive: Vec<Vec<usize>> = w
            .alive
            .iter()
            .map(|s| s.iter().copied().collect())
            .collect();
        let boundary = (0..=dim)
            .map(|q| {
                let rows = if q == 0 { 0 } else { alive[q - 1].len() };
                let mut m = Matrix::zeros(rows, alive[q].len());
                if q > 0 {
                    for (jj, j) in alive[q].iter().enumerate() {
                        let col = w.cols[q][*j].as_ref().expect("live column");
                        for (r, v) in col {
                            let ii = alive[q - 1].binary_search(r).expect("row alive");
                            m.set(ii, jj, v.clone());
                        }
                    }
                }
                m
            })
            .collect();
        Self {
            alive,
            boundary,
            ops: w.ops,
        }
    }

    /// Image of a degree-`q` chain under the quotient map, as a dense vector
    /// over `alive[q]`.
    pub fn project(&self, q: usize, chain: &LaurentChain) -> Vec<LaurentPoly> {
        let mut x = chain.clone();
        for op in &self.ops[q] {
            let Some(xi) = x.get(&op.i).cloned() else {
                continue;
            };
            let f = &xi * &op.coef;
            for (r, v) in &op.col {
                super::add_into(&mut x, *r, &-(&f * v));
            }
            debug_assert!(!x.contains_key(&op.i));
        }
        self.alive[q]
            .iter()
            .map(|i| x.get(i).cloned().unwrap_or_else(LaurentPoly::zero))
            .collect()
    }

    pub fn rank(&self, q: usize) -> usize {
        self.alive.get(q).map_or(0, Vec::len)
    }
}
