//! Sparse rational column reduction.
//!
//! Columns are reduced left to right with the pivot taken at the largest
//! nonzero row index. Optionally the change-of-basis matrix `V` with
//! `R = A V` is tracked, and pivots from a previous reduction of the adjacent
//! map can be used to clear columns that are known to vanish.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::Zero;

use super::matrix::Matrix;

/// `(row, value)` pairs, strictly increasing rows, no explicit zeros.
pub type SparseVec = Vec<(usize, BigRational)>;

/// `x + c * y`.
pub fn axpy(x: &SparseVec, c: &BigRational, y: &SparseVec) -> SparseVec {
    if c.is_zero() {
        return x.clone();
    }
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j == y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i == x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push(x[i].clone());
            i += 1;
        } else if take_y {
            out.push((y[j].0, c * &y[j].1));
            j += 1;
        } else {
            let v = &x[i].1 + c * &y[j].1;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale(x: &SparseVec, c: &BigRational) -> SparseVec {
    if c.is_zero() {
        return Vec::new();
    }
    x.iter().map(|(i, v)| (*i, v * c)).collect()
}

pub fn dot(x: &SparseVec, y: &SparseVec) -> BigRational {
    let mut acc = BigRational::zero();
    let (mut i, mut j) = (0, 0);
    while i < x.len() && j < y.len() {
        match x[i].0.cmp(&y[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc += &x[i].1 * &y[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

pub fn from_dense(v: &[BigRational]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn to_dense(v: &SparseVec, n: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// Column-major sparse matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    cols: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn new(nrows: usize, cols: Vec<SparseVec>) -> Self {
        debug_assert!(cols
            .iter()
            .all(|c| c.last().is_none_or(|(i, _)| *i < nrows)));
        Self { nrows, cols }
    }

    pub fn from_dense(m: &Matrix<BigRational>) -> Self {
        let cols = (0..m.cols()).map(|j| from_dense(&m.column(j))).collect();
        Self {
            nrows: m.rows(),
            cols,
        }
    }

    pub fn to_dense(&self) -> Matrix<BigRational> {
        let mut m = Matrix::zeros(self.nrows, self.cols.len());
        for (j, c) in self.cols.iter().enumerate() {
            for (i, v) in c {
                m.set(*i, j, v.clone());
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn col(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut cols: Vec<SparseVec> = vec![Vec::new(); self.nrows];
        for (j, c) in self.cols.iter().enumerate() {
            for (i, v) in c {
                cols[*i].push((j, v.clone()));
            }
        }
        Self {
            nrows: self.cols.len(),
            cols,
        }
    }

    /// `A x` for a sparse `x` indexed by columns.
    pub fn apply(&self, x: &SparseVec) -> SparseVec {
        let mut acc: HashMap<usize, BigRational> = HashMap::new();
        for (j, xj) in x {
            for (i, a) in &self.cols[*j] {
                *acc.entry(*i).or_insert_with(BigRational::zero) += a * xj;
            }
        }
        let mut out: SparseVec = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        out.sort_by_key(|(i, _)| *i);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }
}

/// Result of reducing the columns of `A`: `R = A V` with `V` upper
/// triangular, `V[j][j] != 0`, and the nonzero columns of `R` having
/// pairwise distinct pivot rows.
#[derive(Clone, Debug)]
pub struct Reduction {
    nrows: usize,
    r: Vec<SparseVec>,
    v: Option<Vec<SparseVec>>,
    /// pivot row -> column of `R` owning it.
    owner: HashMap<usize, usize>,
}

impl Reduction {
    pub fn rank(&self) -> usize {
        self.owner.len()
    }

    pub fn ncols(&self) -> usize {
        self.r.len()
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn reduced(&self, j: usize) -> &SparseVec {
        &self.r[j]
    }

    pub fn v_column(&self, j: usize) -> Option<&SparseVec> {
        self.v.as_ref().map(|v| &v[j])
    }

    /// Row indices that are pivots of nonzero reduced columns.
    pub fn pivot_rows(&self) -> impl Iterator<Item = usize> + '_ {
        self.owner.keys().copied()
    }

    pub fn is_pivot_row(&self, i: usize) -> bool {
        self.owner.contains_key(&i)
    }

    /// Columns whose reduced column vanishes; their `V` columns span the
    /// kernel.
    pub fn zero_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.r
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_empty())
            .map(|(j, _)| j)
    }

    /// Reduces `y` against the pivots of `R`. Returns the remainder and the
    /// coefficients `c_k` with `y = sum c_k R_k + remainder`.
    pub fn reduce_vector(&self, y: &SparseVec) -> (SparseVec, Vec<(usize, BigRational)>) {
        let mut y = y.clone();
        let mut coeffs = Vec::new();
        // Remainder entries below a non-pivot row are kept aside; reduction
        // proceeds from the largest row downwards.
        let mut rest: SparseVec = Vec::new();
        while let Some((low, val)) = y.last().cloned() {
            match self.owner.get(&low) {
                Some(&k) => {
                    let col = &self.r[k];
                    let c = &val / &col.last().expect("pivot column is nonzero").1;
                    y = axpy(&y, &-c.clone(), col);
                    coeffs.push((k, c));
                }
                None => {
                    rest.push((low, val));
                    y.pop();
                }
            }
        }
        rest.reverse();
        (rest, coeffs)
    }

    /// Whether `y` lies in the column span of `A`.
    pub fn in_image(&self, y: &SparseVec) -> bool {
        self.reduce_vector(y).0.is_empty()
    }

    /// Some `x` with `A x = y`, if it exists. Requires tracked `V`.
    pub fn solve(&self, y: &SparseVec) -> Option<SparseVec> {
        let v = self.v.as_ref().expect("solve needs a reduction with V");
        let (rest, coeffs) = self.reduce_vector(y);
        if !rest.is_empty() {
            return None;
        }
        let mut x = Vec::new();
        for (k, c) in coeffs {
            x = axpy(&x, &c, &v[k]);
        }
        Some(x)
    }
}

/// Reduces the columns of `a`.
///
/// `clear` is a reduction of a map `B` with `A B = 0` whose row space is the
/// column space of `a`: any pivot row `i` of `clear` names a column of `a`
/// that must vanish after reduction, and the corresponding reduced column of
/// `B` is a valid `V` column for it.
pub fn reduce(a: &SparseMatrix, track_v: bool, clear: Option<&Reduction>) -> Reduction {
    let n = a.ncols();
    let mut r: Vec<SparseVec> = Vec::with_capacity(n);
    let mut v: Option<Vec<SparseVec>> = track_v.then(|| Vec::with_capacity(n));
    let mut owner: HashMap<usize, usize> = HashMap::new();

    for j in 0..n {
        if let Some(k) = clear.and_then(|c| c.owner.get(&j)) {
            r.push(Vec::new());
            if let Some(v) = v.as_mut() {
                v.push(clear.expect("checked").r[*k].clone());
            }
            continue;
        }
        let mut col = a.cols[j].clone();
        let mut vj: SparseVec = if track_v {
            vec![(j, BigRational::from_integer(1.into()))]
        } else {
            Vec::new()
        };
        while let Some((low, val)) = col.last() {
            let Some(&k) = owner.get(low) else { break };
            let c = -(val / &r[k].last().expect("pivot column is nonzero").1);
            col = axpy(&col, &c, &r[k]);
            if let Some(v) = v.as_ref() {
                vj = axpy(&vj, &c, &v[k]);
            }
        }
        if let Some((low, _)) = col.last() {
            owner.insert(*low, j);
        }
        r.push(col);
        if let Some(v) = v.as_mut() {
            v.push(vj);
        }
    }
    Reduction {
        nrows: a.nrows(),
        r,
        v,
        owner,
    }
}

/// Basis of `ker A / im B` for `A B = 0`, given reductions of both maps.
/// The reduction of `A` must track `V`.
pub fn quotient_basis(red_a: &Reduction, red_b: &Reduction) -> Vec<SparseVec> {
    red_a
        .zero_columns()
        .filter(|j| !red_b.is_pivot_row(*j))
        .map(|j| red_a.v_column(j).expect("V tracked").clone())
        .collect()
}

/// Coordinates of a kernel element `y` of `A` in the quotient basis of
/// [`quotient_basis`], as a dense vector in basis order.
pub fn quotient_coordinates(
    red_a: &Reduction,
    red_b: &Reduction,
    y: &SparseVec,
) -> Vec<BigRational> {
    let basis_cols: Vec<usize> = red_a
        .zero_columns()
        .filter(|j| !red_b.is_pivot_row(*j))
        .collect();
    let index: HashMap<usize, usize> = basis_cols
        .iter()
        .enumerate()
        .map(|(k, j)| (*j, k))
        .collect();
    let mut out = vec![BigRational::zero(); basis_cols.len()];
    let mut y = y.clone();
    while let Some((low, val)) = y.last().cloned() {
        if let Some(&k) = red_b.owner.get(&low) {
            let col = &red_b.r[k];
            let c = &val / &col.last().expect("nonzero").1;
            y = axpy(&y, &-c, col);
        } else if let Some(&k) = index.get(&low) {
            let col = red_a.v_column(low).expect("V tracked");
            let c = &val / &col.last().expect("nonzero").1;
            y = axpy(&y, &-c.clone(), col);
            out[k] = c;
        } else {
            panic!("vector is not in the kernel");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;

    fn sv(entries: &[(usize, i64)]) -> SparseVec {
        entries.iter().map(|(i, v)| (*i, int(*v))).collect()
    }

    #[test]
    fn axpy_cancels() {
        let x = sv(&[(0, 1), (2, 3)]);
        let y = sv(&[(2, 1), (5, 1)]);
        assert_eq!(axpy(&x, &int(-3), &y), sv(&[(0, 1), (5, -3)]));
    }

    #[test]
    fn rank_and_kernel_of_circle_boundary() {
        // edges 01, 02, 12 of the hollow triangle
        let d1 = SparseMatrix::new(
            3,
            vec![
                sv(&[(0, -1), (1, 1)]),
                sv(&[(0, -1), (2, 1)]),
                sv(&[(1, -1), (2, 1)]),
            ],
        );
        let red = reduce(&d1, true, None);
        assert_eq!(red.rank(), 2);
        let ker: Vec<usize> = red.zero_columns().collect();
        assert_eq!(ker, vec![2]);
        let z = red.v_column(2).unwrap();
        assert!(d1.apply(z).is_empty());
        let y = sv(&[(0, -1), (2, 1)]);
        let x = red.solve(&y).unwrap();
        assert_eq!(d1.apply(&x), y);
        assert!(red.solve(&sv(&[(0, 1)])).is_none());
    }

    #[test]
    fn clearing_matches_plain_reduction() {
        // full triangle: d2 column (+1,-1,+1) on edges 01,02,12 = rows 0,1,2
        let d1 = SparseMatrix::new(
            3,
            vec![
                sv(&[(0, -1), (1, 1)]),
                sv(&[(0, -1), (2, 1)]),
                sv(&[(1, -1), (2, 1)]),
            ],
        );
        let d2 = SparseMatrix::new(3, vec![sv(&[(0, 1), (1, -1), (2, 1)])]);
        let red2 = reduce(&d2, false, None);
        let red1 = reduce(&d1, true, Some(&red2));
        assert_eq!(red1.rank(), 2);
        assert!(quotient_basis(&red1, &red2).is_empty());
    }
}
