//! Factorization of integer polynomials into irreducibles over the rationals.
//!
//! Squarefree decomposition by repeated gcd with the derivative, then
//! rational-root stripping, then Kronecker's interpolation search for factors
//! of degree two and up. Inputs are desk-sized (degree ~12 at most).

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::{IntPoly, QPoly};
use super::AlgebraError;

/// `p = content * prod(factor_i ^ multiplicity_i)` with every factor
/// irreducible, primitive and with positive leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub content: BigInt,
    pub factors: Vec<(IntPoly, u32)>,
}

impl Factorization {
    pub fn reconstruct(&self) -> IntPoly {
        let mut acc = IntPoly::new(vec![self.content.clone()]);
        for (f, m) in &self.factors {
            acc = &acc * &f.pow(*m);
        }
        acc
    }
}

pub fn factor_over_integers(p: &IntPoly) -> Result<Factorization, AlgebraError> {
    if p.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let mut content = p.content();
    if p.leading().is_negative() {
        content = -content;
    }
    let prim = p.primitive_part();
    let mut factors: Vec<(IntPoly, u32)> = Vec::new();
    for (part, mult) in squarefree_decomposition(&prim) {
        for f in factor_squarefree(&part) {
            match factors.iter_mut().find(|(g, _)| *g == f) {
                Some((_, m)) => *m += mult,
                None => factors.push((f, mult)),
            }
        }
    }
    factors.sort_by(|(a, _), (b, _)| poly_order(a, b));
    Ok(Factorization { content, factors })
}

fn poly_order(a: &IntPoly, b: &IntPoly) -> std::cmp::Ordering {
    a.degree()
        .cmp(&b.degree())
        .then_with(|| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev()))
}

/// Squarefree parts `(f_i, i)` of a primitive polynomial, each primitive and
/// nonconstant, with `p = ± prod f_i^i`.
pub fn squarefree_decomposition(p: &IntPoly) -> Vec<(IntPoly, u32)> {
    let f = QPoly::from(p);
    if f.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut c = f.gcd(&f.derivative());
    let mut w = f.div_exact(&c).expect("gcd divides");
    let mut i = 1;
    while !w.is_constant() {
        let y = w.gcd(&c);
        let z = w.div_exact(&y).expect("gcd divides");
        if !z.is_constant() {
            out.push((z.to_primitive_int(), i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w).expect("gcd divides");
    }
    out
}

/// Irreducible factors of a squarefree primitive polynomial.
fn factor_squarefree(p: &IntPoly) -> Vec<IntPoly> {
    let mut out = Vec::new();
    let mut rest = p.clone();

    // Linear factors (q t - r) from the rational root test.
    if rest.constant_term().is_zero() {
        let t = IntPoly::from_i64(&[0, 1]);
        rest = rest.div_exact(&t).expect("t divides");
        out.push(t);
    }
    if rest.degree().unwrap_or(0) >= 1 {
        for (num, den) in rational_root_candidates(&rest) {
            let lin = IntPoly::new(vec![-num.clone(), den.clone()]);
            if rest.degree() == Some(0) {
                break;
            }
            if let Some(q) = rest.div_exact(&lin) {
                rest = q;
                out.push(lin);
            }
        }
    }

    match rest.degree() {
        None | Some(0) => {}
        Some(1..=3) => out.push(rest.primitive_part()),
        Some(_) => out.extend(kronecker(&rest.primitive_part())),
    }
    out
}

fn positive_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let other = &n / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out.sort();
    out
}

fn rational_root_candidates(p: &IntPoly) -> Vec<(BigInt, BigInt)> {
    let a0 = p.constant_term();
    let an = p.leading();
    let mut seen = BTreeSet::new();
    for num in positive_divisors(&a0) {
        for den in positive_divisors(&an) {
            for s in [1, -1] {
                let n: BigInt = &num * BigInt::from(s);
                let g = n.gcd(&den);
                seen.insert((&n / &g, &den / &g));
            }
        }
    }
    seen.into_iter().collect()
}

/// Kronecker's method on a primitive squarefree polynomial without rational
/// roots. Searches factor degrees `2..=deg/2`.
fn kronecker(p: &IntPoly) -> Vec<IntPoly> {
    let n = p.degree().unwrap_or(0);
    for d in 2..=n / 2 {
        if let Some(f) = kronecker_factor_of_degree(p, d) {
            let g = p.div_exact(&f).expect("interpolated factor divides");
            let mut out = kronecker(&f.primitive_part());
            out.extend(kronecker(&g.primitive_part()));
            return out;
        }
    }
    vec![p.primitive_part()]
}

fn kronecker_factor_of_degree(p: &IntPoly, d: usize) -> Option<IntPoly> {
    // d + 1 integer points where p does not vanish (p has no rational roots).
    let xs: Vec<BigInt> = (0i64..)
        .flat_map(|k| if k == 0 { vec![0] } else { vec![k, -k] })
        .take(d + 1)
        .map(BigInt::from)
        .collect();
    let divisor_sets: Vec<Vec<BigInt>> = xs
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let pos = positive_divisors(&p.eval(x));
            if i == 0 {
                // Fixing the sign at the first point removes the ±f symmetry.
                pos
            } else {
                pos.iter().flat_map(|v| [v.clone(), -v]).collect()
            }
        })
        .collect();

    let mut idx = vec![0usize; d + 1];
    loop {
        let ys: Vec<BigInt> = idx
            .iter()
            .enumerate()
            .map(|(i, &k)| divisor_sets[i][k].clone())
            .collect();
        if let Some(f) = interpolate_integer(&xs, &ys) {
            if f.degree() == Some(d) && p.div_exact(&f).is_some() {
                return Some(f);
            }
        }
        // Odometer increment.
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return None;
            }
            idx[pos] += 1;
            if idx[pos] < divisor_sets[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Lagrange interpolation; `Some` only when the result has integer
/// coefficients.
fn interpolate_integer(xs: &[BigInt], ys: &[BigInt]) -> Option<IntPoly> {
    let mut acc = QPoly::zero();
    for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
        let mut basis = QPoly::one();
        let mut denom = BigInt::one();
        for (j, xj) in xs.iter().enumerate() {
            if i == j {
                continue;
            }
            basis = &basis * &QPoly::new(vec![BigRational::from_integer(-xj), BigRational::one()]);
            denom *= xi - xj;
        }
        acc = &acc + &basis.scale(&BigRational::new(yi.clone(), denom));
    }
    acc.coeffs()
        .iter()
        .all(|c| c.is_integer())
        .then(|| IntPoly::new(acc.coeffs().iter().map(|c| c.to_integer()).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn difference_of_squares() {
        let f = factor_over_integers(&ip(&[-1, 0, 1])).unwrap();
        assert_eq!(f.content, BigInt::one());
        assert_eq!(f.factors, vec![(ip(&[-1, 1]), 1), (ip(&[1, 1]), 1)]);
    }

    #[test]
    fn rational_roots_half_and_one() {
        let f = factor_over_integers(&ip(&[1, -3, 2])).unwrap();
        assert_eq!(f.factors, vec![(ip(&[-1, 1]), 1), (ip(&[-1, 2]), 1)]);
    }

    #[test]
    fn golden_ratio_polynomial_is_irreducible() {
        let f = factor_over_integers(&ip(&[-1, -1, 1])).unwrap();
        assert_eq!(f.factors, vec![(ip(&[-1, -1, 1]), 1)]);
    }

    #[test]
    fn zero_is_an_error() {
        assert!(matches!(
            factor_over_integers(&IntPoly::zero()),
            Err(AlgebraError::ZeroPolynomial)
        ));
    }

    #[test]
    fn kronecker_splits_quartic_without_roots() {
        // (t^2 + 1)(t^2 - 2)
        let p = &ip(&[1, 0, 1]) * &ip(&[-2, 0, 1]);
        let f = factor_over_integers(&p).unwrap();
        assert_eq!(f.factors, vec![(ip(&[-2, 0, 1]), 1), (ip(&[1, 0, 1]), 1)]);
        assert_eq!(f.reconstruct(), p);
    }

    #[test]
    fn multiplicities_and_content() {
        // -6 (t - 1)^3 (t^2 + t + 1) t
        let base = &(&ip(&[-1, 1]).pow(3) * &ip(&[1, 1, 1])) * &ip(&[0, 1]);
        let p = &ip(&[-6]) * &base;
        let f = factor_over_integers(&p).unwrap();
        assert_eq!(f.content, BigInt::from(-6));
        assert_eq!(f.reconstruct(), p);
        assert!(f.factors.contains(&(ip(&[-1, 1]), 3)));
        assert!(f.factors.contains(&(ip(&[0, 1]), 1)));
    }

    #[test]
    fn irreducible_quartic_stays_whole() {
        // t^4 + 1 has no factorization over Q.
        let f = factor_over_integers(&ip(&[1, 0, 0, 0, 1])).unwrap();
        assert_eq!(f.factors, vec![(ip(&[1, 0, 0, 0, 1]), 1)]);
    }
}
