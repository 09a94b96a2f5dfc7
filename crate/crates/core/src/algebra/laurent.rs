//! Laurent polynomials `Q[t, 1/t]`, stored as `t^shift * p(t)` with `p(0) != 0`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::QPoly;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    shift: i64,
    poly: QPoly,
}

impl LaurentPoly {
    /// Canonicalizes `t^shift * poly`.
    pub fn new(shift: i64, poly: QPoly) -> Self {
        if poly.is_zero() {
            return Self::zero();
        }
        let v = poly.t_valuation();
        Self {
            shift: shift + v as i64,
            poly: poly.strip_t(),
        }
    }

    /// `c * t^e`.
    pub fn monomial(c: BigRational, e: i64) -> Self {
        Self::new(e, QPoly::constant(c))
    }

    pub fn from_int(c: i64, e: i64) -> Self {
        Self::monomial(BigRational::from_integer(c.into()), e)
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// Polynomial part; its constant term is nonzero.
    pub fn poly(&self) -> &QPoly {
        &self.poly
    }

    pub fn min_degree(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.shift)
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.poly.degree().map(|d| self.shift + d as i64)
    }

    /// Nonzero `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> + '_ {
        self.poly
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.shift + i as i64, c))
    }

    pub fn coeff(&self, e: i64) -> BigRational {
        let i = e - self.shift;
        if i < 0 {
            BigRational::zero()
        } else {
            self.poly.coeff(i as usize)
        }
    }

    /// Multiply by `t^k`.
    pub fn mul_t_pow(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self {
            shift: self.shift + k,
            poly: self.poly.clone(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.shift, self.poly.scale(c))
    }

    /// Units of `Q[t, 1/t]` are the nonzero monomials.
    pub fn is_unit(&self) -> bool {
        self.poly.is_unit()
    }

    pub fn is_integral(&self) -> bool {
        self.poly.coeffs().iter().all(|c| c.is_integer())
    }

    /// Specialize `t = a` for nonzero `a`.
    pub fn eval(&self, a: &BigRational) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        self.poly.eval(a) * rational_pow(a, self.shift)
    }

    /// `t -> 1/t`.
    pub fn invert_variable(&self) -> Self {
        let Some(d) = self.poly.degree() else {
            return Self::zero();
        };
        let mut c = self.poly.coeffs().to_vec();
        c.reverse();
        Self::new(-self.shift - d as i64, QPoly::new(c))
    }

    /// Exact division by a polynomial, allowing the quotient to have negative
    /// powers of `t`.
    pub fn div_exact(&self, d: &QPoly) -> Option<Self> {
        assert!(!d.is_zero(), "division by zero");
        if self.is_zero() {
            return Some(Self::zero());
        }
        let v = d.t_valuation() as i64;
        let q = self.poly.div_exact(&d.strip_t())?;
        Some(Self::new(self.shift - v, q))
    }

    /// `(t^s * self)` as a polynomial where `s` is the smallest shift making
    /// it one: returns `(s, polynomial)`.
    pub fn to_poly_with_offset(&self) -> (i64, QPoly) {
        (-self.shift, self.poly.clone())
    }
}

/// `a^e` for a nonzero rational and any integer exponent.
pub fn rational_pow(a: &BigRational, e: i64) -> BigRational {
    let base = if e < 0 { a.recip() } else { a.clone() };
    let mut acc = BigRational::one();
    let mut b = base;
    let mut n = e.unsigned_abs();
    while n > 0 {
        if n & 1 == 1 {
            acc *= &b;
        }
        b = &b * &b;
        n >>= 1;
    }
    acc
}

impl Zero for LaurentPoly {
    fn zero() -> Self {
        Self {
            shift: 0,
            poly: QPoly::zero(),
        }
    }
    fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }
}

impl One for LaurentPoly {
    fn one() -> Self {
        Self {
            shift: 0,
            poly: QPoly::one(),
        }
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let s = self.shift.min(rhs.shift);
        let a = self.poly.shift_up((self.shift - s) as usize);
        let b = rhs.poly.shift_up((rhs.shift - s) as usize);
        LaurentPoly::new(s, &a + &b)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            shift: self.shift,
            poly: -&self.poly,
        }
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::new(self.shift + rhs.shift, &self.poly * &rhs.poly)
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Add<&LaurentPoly> for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        &self + rhs
    }
}

impl Sub<&LaurentPoly> for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        &self - rhs
    }
}

impl Mul<&LaurentPoly> for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        &self * rhs
    }
}

impl From<QPoly> for LaurentPoly {
    fn from(p: QPoly) -> Self {
        Self::new(0, p)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let neg = *c < BigRational::zero();
            let abs = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            if e == 0 || !abs.is_one() {
                write!(f, "{abs}")?;
            }
            match e {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Laurent({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn canonical_form_strips_t() {
        let p = LaurentPoly::new(-2, QPoly::from_i64(&[0, 0, 1, 1]));
        assert_eq!(p.shift(), 0);
        assert_eq!(p.poly(), &QPoly::from_i64(&[1, 1]));
    }

    #[test]
    fn cancellation_to_zero() {
        let a = LaurentPoly::from_int(3, -4);
        assert!((&a - &a).is_zero());
        assert_eq!((&a + &LaurentPoly::zero()), a);
    }

    #[test]
    fn eval_negative_powers() {
        let p = &LaurentPoly::from_int(1, -2) + &LaurentPoly::from_int(1, 1);
        // 2^-2 + 2 = 9/4
        assert_eq!(p.eval(&r(2)), BigRational::new(9.into(), 4.into()));
    }

    #[test]
    fn invert_variable_roundtrip() {
        let p = &LaurentPoly::from_int(2, -1) + &LaurentPoly::from_int(-5, 3);
        assert_eq!(p.invert_variable().invert_variable(), p);
        assert_eq!(p.invert_variable().coeff(1), r(2));
    }

    #[test]
    fn laurent_division() {
        let d = QPoly::from_i64(&[0, -1, 1]); // t^2 - t = t (t - 1)
        let num = LaurentPoly::new(-3, QPoly::from_i64(&[-1, 1]));
        let q = num.div_exact(&d).unwrap();
        assert_eq!(q, LaurentPoly::from_int(1, -4));
        assert!(LaurentPoly::from_int(1, 0).div_exact(&d).is_none());
    }
}
