//! Independent oracles shared by the integration tests and the acceptance run.
#![allow(dead_code)]

use catxi::algebra::rational::rat;
use catxi::algebra::snf::smith_normal_form;
use catxi::algebra::{BigRational, LaurentPoly, Matrix, QPoly};
use catxi::cover::{End, LaurentChain, LaurentChainComplex, MoveWitness};
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn random_poly(rng: &mut ChaCha8Rng, max_deg: usize) -> QPoly {
    if rng.gen_bool(0.3) {
        return QPoly::zero();
    }
    let deg = rng.gen_range(0..=max_deg);
    QPoly::new(
        (0..=deg)
            .map(|_| rat(rng.gen_range(-3..=3), rng.gen_range(1..=3)))
            .collect(),
    )
}

/// Random `m x n` matrix of degree at most 2; every third one is a product
/// of two constant-by-linear factors so that rank drops occur.
pub fn random_matrix(rng: &mut ChaCha8Rng, index: usize) -> Matrix<QPoly> {
    let (m, n) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
    if index % 3 == 2 {
        let k = rng.gen_range(1..=m.min(n));
        let left = Matrix::from_rows(
            (0..m)
                .map(|_| (0..k).map(|_| random_poly(rng, 1)).collect())
                .collect(),
        );
        let right = Matrix::from_rows(
            (0..k)
                .map(|_| (0..n).map(|_| random_poly(rng, 1)).collect())
                .collect(),
        );
        return &left * &right;
    }
    Matrix::from_rows(
        (0..m)
            .map(|_| (0..n).map(|_| random_poly(rng, 2)).collect())
            .collect(),
    )
}

/// Rank over `Q` by plain Gaussian elimination.
pub fn rank_q(mut rows: Vec<Vec<BigRational>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let f = &rows[r][c] / &pivot;
                for j in c..ncols {
                    let delta = &f * &rows[rank][j];
                    rows[r][j] -= delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn evaluate(a: &Matrix<QPoly>, x: &BigRational) -> Vec<Vec<BigRational>> {
    (0..a.rows())
        .map(|i| (0..a.cols()).map(|j| a.get(i, j).eval(x)).collect())
        .collect()
}

/// Checks the Smith form of `a`: `U A V = D`, invertibility of the
/// transforms, diagonal shape, monic divisibility chain, and rank agreement
/// with Gaussian elimination at `points` random rationals.
pub fn check_smith(a: &Matrix<QPoly>, rng: &mut ChaCha8Rng, points: usize) -> Result<(), String> {
    let s = smith_normal_form(a);
    if &(&s.u * a) * &s.v != s.d {
        return Err("U A V != D".into());
    }
    if &s.u * &s.u_inv != Matrix::identity(a.rows())
        || &s.v * &s.v_inv != Matrix::identity(a.cols())
    {
        return Err("transform is not inverted by its partner".into());
    }
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            if i != j && !s.d.get(i, j).is_zero() {
                return Err(format!("off-diagonal entry at ({i}, {j})"));
            }
        }
    }
    let diag = s.diagonal();
    let r = s.rank();
    if !diag[..r]
        .iter()
        .all(|d| !d.is_zero() && d.leading().is_one())
        || !diag[r..].iter().all(Zero::is_zero)
    {
        return Err("diagonal is not monic followed by zeros".into());
    }
    for w in diag[..r].windows(2) {
        if !w[1].div_rem(&w[0]).1.is_zero() {
            return Err(format!("{:?} does not divide {:?}", w[0], w[1]));
        }
    }
    for _ in 0..points {
        let x = rat(rng.gen_range(-7..=7), rng.gen_range(1..=4));
        let expected = diag.iter().filter(|d| !d.eval(&x).is_zero()).count();
        let got = rank_q(evaluate(a, &x));
        if got != expected {
            return Err(format!("rank {got} at {x}, Smith form predicts {expected}"));
        }
    }
    Ok(())
}

/// `d c` computed column by column from the boundary entries.
pub fn boundary_of(l: &LaurentChainComplex, q: usize, c: &LaurentChain) -> LaurentChain {
    let mut out = LaurentChain::new();
    for (j, coeff) in c {
        for e in &l.entries(q)[*j] {
            let term = coeff * &LaurentPoly::from_int(e.sign, e.exponent);
            let slot = out.entry(e.row).or_insert_with(LaurentPoly::zero);
            *slot = &*slot + &term;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Checks `d c = k z - z_moved` and the support of `z_moved` beyond height `n`.
pub fn check_witness(
    l: &LaurentChainComplex,
    w: &MoveWitness,
    z: &LaurentChain,
    n: i64,
) -> Result<(), String> {
    let k = LaurentPoly::monomial(BigRational::from_integer(w.multiplier.clone()), 0);
    let mut expected = LaurentChain::new();
    for (i, v) in z {
        expected.insert(*i, v * &k);
    }
    for (i, v) in &w.moved {
        let slot = expected.entry(*i).or_insert_with(LaurentPoly::zero);
        *slot = &*slot - v;
    }
    expected.retain(|_, v| !v.is_zero());
    if boundary_of(l, w.q + 1, &w.bounding) != expected {
        return Err(format!(
            "boundary of the bounding chain differs from k z - z_moved ({} end)",
            w.end
        ));
    }
    for v in w.moved.values() {
        let ok = match w.end {
            End::Minus => v.max_degree().is_some_and(|d| d <= -n),
            End::Plus => v.min_degree().is_some_and(|d| d >= n),
        };
        if !ok {
            return Err(format!("moved cycle reaches {v} inside the threshold {n}"));
        }
    }
    if !w.verify(l) {
        return Err("witness fails its own verification".into());
    }
    Ok(())
}
