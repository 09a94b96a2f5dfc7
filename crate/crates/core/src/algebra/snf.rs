//! Smith normal form over `Q[t]`.
//!
//! Returns unimodular `U`, `V` with `U * A * V = D`, `D` diagonal with monic
//! entries `d_1 | d_2 | ...` followed by zeros. The inverses of `U` and `V` are
//! tracked alongside so callers can move between bases without a second
//! inversion.

use num_traits::{One, Zero};

use super::matrix::Matrix;
use super::poly::QPoly;

#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: Matrix<QPoly>,
    pub u_inv: Matrix<QPoly>,
    pub d: Matrix<QPoly>,
    pub v: Matrix<QPoly>,
    pub v_inv: Matrix<QPoly>,
}

impl SmithForm {
    /// Diagonal entries `d_1, ..., d_min(m,n)` (zeros included).
    pub fn diagonal(&self) -> Vec<QPoly> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }

    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

struct Work {
    a: Matrix<QPoly>,
    u: Matrix<QPoly>,
    u_inv: Matrix<QPoly>,
    v: Matrix<QPoly>,
    v_inv: Matrix<QPoly>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    /// `row[dst] += c * row[src]`.
    fn row_op(&mut self, dst: usize, src: usize, c: &QPoly) {
        self.a.add_row_multiple(dst, src, c);
        self.u.add_row_multiple(dst, src, c);
        self.u_inv.add_col_multiple(src, dst, &-c);
    }

    /// `col[dst] += c * col[src]`.
    fn col_op(&mut self, dst: usize, src: usize, c: &QPoly) {
        self.a.add_col_multiple(dst, src, c);
        self.v.add_col_multiple(dst, src, c);
        self.v_inv.add_row_multiple(src, dst, &-c);
    }

    fn scale_row(&mut self, i: usize, c: &QPoly, c_inv: &QPoly) {
        self.a.scale_row(i, c);
        self.u.scale_row(i, c);
        self.u_inv.scale_col(i, c_inv);
    }

    /// Minimal-degree nonzero entry in the trailing block, ties broken by
    /// smallest `(row, col)`.
    fn pivot(&self, k: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, usize)> = None;
        for i in k..self.a.rows() {
            for j in k..self.a.cols() {
                if let Some(deg) = self.a.get(i, j).degree() {
                    if best.is_none_or(|(d, _, _)| deg < d) {
                        best = Some((deg, i, j));
                    }
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }
}

pub fn smith_normal_form(a: &Matrix<QPoly>) -> SmithForm {
    let (m, n) = (a.rows(), a.cols());
    let mut w = Work {
        a: a.clone(),
        u: Matrix::identity(m),
        u_inv: Matrix::identity(m),
        v: Matrix::identity(n),
        v_inv: Matrix::identity(n),
    };

    for k in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = w.pivot(k) else {
                return finish(w);
            };
            w.swap_rows(k, pi);
            w.swap_cols(k, pj);
            let pivot = w.a.get(k, k).clone();

            let mut dirty = false;
            for i in k + 1..m {
                if w.a.get(i, k).is_zero() {
                    continue;
                }
                let (q, r) = w.a.get(i, k).div_rem(&pivot);
                w.row_op(i, k, &-q);
                dirty |= !r.is_zero();
            }
            for j in k + 1..n {
                if w.a.get(k, j).is_zero() {
                    continue;
                }
                let (q, r) = w.a.get(k, j).div_rem(&pivot);
                w.col_op(j, k, &-q);
                dirty |= !r.is_zero();
            }
            if dirty {
                continue;
            }

            let offender = (k + 1..m).find(|&i| {
                (k + 1..n).any(|j| {
                    let e = w.a.get(i, j);
                    !e.is_zero() && !e.div_rem(&pivot).1.is_zero()
                })
            });
            match offender {
                Some(i) => w.row_op(k, i, &QPoly::one()),
                None => break,
            }
        }
        let lc = w.a.get(k, k).leading();
        let c = QPoly::constant(lc.recip());
        let c_inv = QPoly::constant(lc);
        w.scale_row(k, &c, &c_inv);
    }
    finish(w)
}

fn finish(w: Work) -> SmithForm {
    SmithForm {
        u: w.u,
        u_inv: w.u_inv,
        d: w.a,
        v: w.v,
        v_inv: w.v_inv,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(c: &[i64]) -> QPoly {
        QPoly::from_i64(c)
    }

    fn check(a: &Matrix<QPoly>, s: &SmithForm) {
        assert_eq!(&(&s.u * a) * &s.v, s.d);
        assert_eq!(&s.u * &s.u_inv, Matrix::identity(a.rows()));
        assert_eq!(&s.v * &s.v_inv, Matrix::identity(a.cols()));
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d.get(i, j).is_zero());
                }
            }
        }
    }

    #[test]
    fn already_diagonal() {
        let a = Matrix::from_rows(vec![vec![q(&[0, 1]), q(&[])], vec![q(&[]), q(&[0, 1])]]);
        let s = smith_normal_form(&a);
        check(&a, &s);
        assert_eq!(s.diagonal(), vec![q(&[0, 1]), q(&[0, 1])]);
    }

    #[test]
    fn jordan_block() {
        let a = Matrix::from_rows(vec![vec![q(&[0, 1]), q(&[1])], vec![q(&[]), q(&[0, 1])]]);
        let s = smith_normal_form(&a);
        check(&a, &s);
        assert_eq!(s.diagonal(), vec![q(&[1]), q(&[0, 0, 1])]);
    }

    #[test]
    fn zero_matrix() {
        let a: Matrix<QPoly> = Matrix::zeros(2, 3);
        let s = smith_normal_form(&a);
        check(&a, &s);
        assert_eq!(s.u, Matrix::identity(2));
        assert_eq!(s.v, Matrix::identity(3));
        assert_eq!(s.rank(), 0);
    }

    #[test]
    fn divisibility_fix_up() {
        // diag(t-1, t-2) must become diag(1, (t-1)(t-2)).
        let a = Matrix::from_rows(vec![vec![q(&[-1, 1]), q(&[])], vec![q(&[]), q(&[-2, 1])]]);
        let s = smith_normal_form(&a);
        check(&a, &s);
        assert_eq!(s.diagonal(), vec![q(&[1]), q(&[2, -3, 1])]);
    }
}
