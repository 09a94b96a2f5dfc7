//! Algebraic-integer and Dirichlet-unit tests, performed on irreducible
//! factors rather than on numerically computed roots.
//!
//! A primitive irreducible integer polynomial has algebraic-integer roots iff
//! its leading coefficient is ±1, and roots with algebraic-integer inverses iff
//! its constant term is ±1.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::factor::factor_over_integers;
use super::poly::IntPoly;
use super::rational::is_plus_minus_one;
use super::AlgebraError;

/// Verdict for one irreducible factor, standing for its whole Galois orbit of
/// roots.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorVerdict {
    #[serde(serialize_with = "crate::report::ser_display")]
    pub factor: IntPoly,
    pub multiplicity: u32,
    pub roots_are_algebraic_integers: bool,
    pub roots_are_inverse_algebraic_integers: bool,
    pub roots_are_dirichlet_units: bool,
}

fn is_unit_int(c: &BigInt) -> bool {
    c.abs().is_one()
}

/// Flags for a primitive polynomial with nonzero constant term. Irreducibility
/// is the caller's responsibility; see [`classify_factor`].
pub(crate) fn verdict_unchecked(p: &IntPoly, multiplicity: u32) -> FactorVerdict {
    let alg = is_unit_int(&p.leading());
    let inv = is_unit_int(&p.constant_term());
    FactorVerdict {
        factor: p.clone(),
        multiplicity,
        roots_are_algebraic_integers: alg,
        roots_are_inverse_algebraic_integers: inv,
        roots_are_dirichlet_units: alg && inv,
    }
}

pub fn classify_factor(p: &IntPoly) -> Result<FactorVerdict, AlgebraError> {
    if p.degree().unwrap_or(0) == 0 {
        return Err(AlgebraError::Constant);
    }
    if p.constant_term().is_zero() {
        return Err(AlgebraError::ZeroRoot);
    }
    let f = factor_over_integers(p)?;
    let irreducible = f.factors.len() == 1 && f.factors[0].1 == 1 && is_unit_int(&f.content);
    if !irreducible || p.primitive_part() != *p {
        return Err(AlgebraError::NotIrreducible(p.to_string()));
    }
    Ok(verdict_unchecked(p, 1))
}

/// The only rational Dirichlet units are ±1.
pub fn is_dirichlet_unit_rational(a: &BigRational) -> Result<bool, AlgebraError> {
    if a.is_zero() {
        return Err(AlgebraError::ZeroMonodromy);
    }
    Ok(is_plus_minus_one(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn linear_factors() {
        let v = classify_factor(&ip(&[-2, 1])).unwrap();
        assert!(v.roots_are_algebraic_integers);
        assert!(!v.roots_are_inverse_algebraic_integers);
        assert!(!v.roots_are_dirichlet_units);

        let v = classify_factor(&ip(&[-1, 2])).unwrap();
        assert!(!v.roots_are_algebraic_integers);
        assert!(v.roots_are_inverse_algebraic_integers);
        assert!(!v.roots_are_dirichlet_units);
    }

    #[test]
    fn golden_ratio_is_a_unit() {
        let v = classify_factor(&ip(&[-1, -1, 1])).unwrap();
        assert!(v.roots_are_dirichlet_units);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            classify_factor(&ip(&[-1, 0, 1])),
            Err(AlgebraError::NotIrreducible(_))
        ));
        assert!(matches!(
            classify_factor(&ip(&[0, 1])),
            Err(AlgebraError::ZeroRoot)
        ));
        assert!(matches!(
            classify_factor(&ip(&[3])),
            Err(AlgebraError::Constant)
        ));
        assert!(classify_factor(&ip(&[-2, 2])).is_err());
    }

    #[test]
    fn rational_units() {
        assert!(is_dirichlet_unit_rational(&int(-1)).unwrap());
        assert!(is_dirichlet_unit_rational(&int(1)).unwrap());
        assert!(!is_dirichlet_unit_rational(&int(2)).unwrap());
        assert!(!is_dirichlet_unit_rational(&rat(3, 2)).unwrap());
        assert!(is_dirichlet_unit_rational(&int(0)).is_err());
    }

    /// Brute-force oracle: cyclotomic polynomials divide t^n - 1, so their
    /// roots are roots of unity and hence units.
    #[test]
    fn cyclotomic_products_are_units() {
        let cyclo = [
            ip(&[-1, 1]),
            ip(&[1, 1]),
            ip(&[1, 1, 1]),
            ip(&[1, 0, 1]),
            ip(&[1, 1, 1, 1, 1]),
            ip(&[1, -1, 1]),
        ];
        for c in &cyclo {
            let v = classify_factor(c).unwrap();
            assert!(v.roots_are_dirichlet_units, "{c}");
            let divides_some = (1..=12u32).any(|n| {
                let tn = &ip(&[0, 1]).pow(n) - &IntPoly::one();
                tn.div_exact(c).is_some()
            });
            assert!(divides_some, "{c} is not cyclotomic");
        }
        let prod = cyclo.iter().fold(IntPoly::one(), |acc, c| &acc * c);
        for (f, _) in factor_over_integers(&prod).unwrap().factors {
            assert!(classify_factor(&f).unwrap().roots_are_dirichlet_units);
        }
        for n in [2i64, 3, -2, -5, 7] {
            let v = classify_factor(&ip(&[-n, 1])).unwrap();
            assert!(v.roots_are_algebraic_integers && !v.roots_are_dirichlet_units);
        }
    }
}
