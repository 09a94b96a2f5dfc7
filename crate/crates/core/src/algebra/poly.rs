//! Dense univariate polynomials over the rationals and the integers.
//!
//! Coefficients are stored lowest degree first and are always trimmed, so the
//! zero polynomial is the empty vector and `degree` is well defined for every
//! nonzero value.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

fn trim<T: Zero>(c: &mut Vec<T>) {
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
}

/// Polynomial with rational coefficients in one variable `t`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        trim(&mut coeffs);
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// `c * t^k`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.push(c);
        Self { coeffs }
    }

    /// The variable `t`.
    pub fn t() -> Self {
        Self::monomial(BigRational::one(), 1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Nonzero constant, i.e. a unit of `Q[t]`.
    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Multiply by `t^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// Largest `k` with `t^k` dividing `self` (0 for the zero polynomial).
    pub fn t_valuation(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Divide out the largest power of `t`.
    pub fn strip_t(&self) -> Self {
        let v = self.t_valuation();
        Self {
            coeffs: self.coeffs[v..].to_vec(),
        }
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let inv = self.leading().recip();
        self.scale(&inv)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let lead_inv = d.leading().recip();
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                let sub = &c * dc;
                rem[k + i] -= sub;
            }
            quot[k] = c;
        }
        (Self::new(quot), Self::new(rem))
    }

    /// Exact quotient if `d` divides `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Least common multiple, monic.
    pub fn lcm(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let g = self.gcd(other);
        (self * other)
            .div_exact(&g)
            .expect("gcd divides product")
            .monic()
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Clear denominators and divide by the content, giving a primitive integer
    /// polynomial with positive leading coefficient. The zero polynomial maps
    /// to zero.
    pub fn to_primitive_int(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        IntPoly::new(ints).primitive_part()
    }
}

impl Zero for QPoly {
    fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for QPoly {
    fn one() -> Self {
        Self {
            coeffs: vec![BigRational::one()],
        }
    }
}

impl From<&IntPoly> for QPoly {
    fn from(p: &IntPoly) -> Self {
        Self::new(
            p.coeffs()
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }
}

/// Polynomial with arbitrary precision integer coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        trim(&mut coeffs);
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    /// Non-negative gcd of the coefficients (0 for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// `self / content`, normalized to a positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading().is_negative() {
            c = -c;
        }
        Self {
            coeffs: self.coeffs.iter().map(|x| x / &c).collect(),
        }
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// `t^deg p(1/t)`: the polynomial whose roots are the inverses of the
    /// nonzero roots of `self`.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(c)
    }

    /// Substitute `t -> -t`.
    pub fn negate_variable(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Exact quotient over the integers, if it exists.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let q = QPoly::from(self).div_exact(&QPoly::from(d))?;
        if q.coeffs().iter().all(|c| c.is_integer()) {
            Some(Self::new(
                q.coeffs().iter().map(|c| c.to_integer()).collect(),
            ))
        } else {
            None
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl Zero for IntPoly {
    fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for IntPoly {
    fn one() -> Self {
        Self {
            coeffs: vec![BigInt::one()],
        }
    }
}

macro_rules! ring_ops {
    ($ty:ident, $c:ty) => {
        impl Add<&$ty> for &$ty {
            type Output = $ty;
            fn add(self, rhs: &$ty) -> $ty {
                let n = self.coeffs.len().max(rhs.coeffs.len());
                let mut out: Vec<$c> = Vec::with_capacity(n);
                for i in 0..n {
                    let mut c = self.coeffs.get(i).cloned().unwrap_or_else(<$c>::zero);
                    if let Some(r) = rhs.coeffs.get(i) {
                        c += r;
                    }
                    out.push(c);
                }
                $ty::new(out)
            }
        }
        impl Sub<&$ty> for &$ty {
            type Output = $ty;
            fn sub(self, rhs: &$ty) -> $ty {
                self + &(-rhs)
            }
        }
        impl Neg for &$ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                $ty {
                    coeffs: self.coeffs.iter().map(|c| -c).collect(),
                }
            }
        }
        impl Mul<&$ty> for &$ty {
            type Output = $ty;
            fn mul(self, rhs: &$ty) -> $ty {
                if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
                    return $ty::zero();
                }
                let mut out = vec![<$c>::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
                for (i, a) in self.coeffs.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (j, b) in rhs.coeffs.iter().enumerate() {
                        out[i + j] += a * b;
                    }
                }
                $ty::new(out)
            }
        }
        impl Add for $ty {
            type Output = $ty;
            fn add(self, rhs: $ty) -> $ty {
                &self + &rhs
            }
        }
        impl Sub for $ty {
            type Output = $ty;
            fn sub(self, rhs: $ty) -> $ty {
                &self - &rhs
            }
        }
        impl Mul for $ty {
            type Output = $ty;
            fn mul(self, rhs: $ty) -> $ty {
                &self * &rhs
            }
        }
        impl Neg for $ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                -&self
            }
        }
        impl Add<&$ty> for $ty {
            type Output = $ty;
            fn add(self, rhs: &$ty) -> $ty {
                &self + rhs
            }
        }
        impl Sub<&$ty> for $ty {
            type Output = $ty;
            fn sub(self, rhs: &$ty) -> $ty {
                &self - rhs
            }
        }
        impl Mul<&$ty> for $ty {
            type Output = $ty;
            fn mul(self, rhs: &$ty) -> $ty {
                &self * rhs
            }
        }
        impl AddAssign<&$ty> for $ty {
            fn add_assign(&mut self, rhs: &$ty) {
                *self = &*self + rhs;
            }
        }
        impl SubAssign<&$ty> for $ty {
            fn sub_assign(&mut self, rhs: &$ty) {
                *self = &*self - rhs;
            }
        }
    };
}

ring_ops!(QPoly, BigRational);
ring_ops!(IntPoly, BigInt);

fn write_poly<C: fmt::Display + Zero + One + PartialEq + Signed + Clone>(
    f: &mut fmt::Formatter<'_>,
    coeffs: &[C],
    var: &str,
) -> fmt::Result {
    if coeffs.is_empty() {
        return write!(f, "0");
    }
    let mut first = true;
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let abs = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { "-" } else { "+" })?;
        }
        first = false;
        let show_coeff = i == 0 || !abs.is_one();
        if show_coeff {
            write!(f, "{abs}")?;
        }
        match i {
            0 => {}
            1 => write!(f, "{var}")?,
            _ => write!(f, "{var}^{i}")?,
        }
    }
    Ok(())
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, &self.coeffs, "t")
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly({self})")
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, &self.coeffs, "t")
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(c: &[i64]) -> QPoly {
        QPoly::from_i64(c)
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = q(&[1, 0, -3, 2, 5]);
        let b = q(&[2, 1, 3]);
        let (qq, r) = a.div_rem(&b);
        assert!(r.degree().unwrap_or(0) < 2);
        assert_eq!(&(&qq * &b) + &r, a);
    }

    #[test]
    fn gcd_is_monic_common_factor() {
        let f = q(&[-1, 1]); // t - 1
        let a = &f * &q(&[2, 1]);
        let b = &f * &q(&[-3, 0, 1]);
        assert_eq!(a.gcd(&b), f);
        assert!(q(&[]).gcd(&q(&[])).is_zero());
    }

    #[test]
    fn primitive_int_normalizes_sign_and_content() {
        let p = QPoly::new(vec![
            BigRational::new(1.into(), 2.into()),
            BigRational::from_integer((-3).into()),
        ]);
        // -3t + 1/2 -> 6t - 1
        assert_eq!(p.to_primitive_int(), IntPoly::from_i64(&[-1, 6]));
    }

    #[test]
    fn display() {
        assert_eq!(IntPoly::from_i64(&[-1, 0, 1]).to_string(), "t^2 - 1");
        assert_eq!(IntPoly::from_i64(&[1, -3, 2]).to_string(), "2t^2 - 3t + 1");
        assert_eq!(IntPoly::zero().to_string(), "0");
    }

    #[test]
    fn reversed_and_strip() {
        assert_eq!(
            IntPoly::from_i64(&[-2, 1]).reversed(),
            IntPoly::from_i64(&[1, -2])
        );
        assert_eq!(q(&[0, 0, 3, 1]).strip_t(), q(&[3, 1]));
        assert_eq!(q(&[0, 0, 3, 1]).t_valuation(), 2);
    }
}
