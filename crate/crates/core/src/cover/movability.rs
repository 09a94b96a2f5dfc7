//! Movability of homology classes of the cover towards its ends, and
//! explicit witnesses pushing a cycle past a chosen height.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::homology::class_data;
use super::{add_into, CoverError, LaurentChain, LaurentChainComplex};
use crate::algebra::factor::factor_over_integers;
use crate::algebra::sparse::{self, SparseMatrix};
use crate::algebra::units::{verdict_unchecked, FactorVerdict};
use crate::algebra::{IntPoly, LaurentPoly, QPoly};

/// `Minus` is the end reached by `t^{-r}` for `r -> infinity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum End {
    Minus,
    Plus,
}

impl fmt::Display for End {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            End::Minus => "-inf",
            End::Plus => "+inf",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Movability {
    /// Movable as it stands: the bounding chains are integral.
    Yes,
    /// Movable after multiplying by the reported nonzero integer.
    AfterMultiple,
    No,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MovabilityVerdict {
    pub minus_end: Movability,
    pub plus_end: Movability,
    pub both: Movability,
    pub free_component: bool,
    /// Annihilator of the torsion component, primitive with positive leading
    /// coefficient.
    #[serde(serialize_with = "crate::report::ser_display")]
    pub annihilator: IntPoly,
    pub annihilator_factors: Vec<FactorVerdict>,
    /// Denominator-clearing multiplier `k`, when the class is torsion.
    #[serde(serialize_with = "ser_opt_display")]
    pub multiplier: Option<BigInt>,
}

fn ser_opt_display<T: fmt::Display, S: serde::Serializer>(
    v: &Option<T>,
    s: S,
) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_str(&x.to_string()),
        None => s.serialize_none(),
    }
}

impl MovabilityVerdict {
    pub fn at(&self, end: End) -> Movability {
        match end {
            End::Minus => self.minus_end,
            End::Plus => self.plus_end,
        }
    }
}

const DEFAULT_WINDOW_CAP: i64 = 64;

fn grade(granted: bool, k: &BigInt) -> Movability {
    match (granted, k.is_one()) {
        (false, _) => Movability::No,
        (true, true) => Movability::Yes,
        (true, false) => Movability::AfterMultiple,
    }
}

/// Verdict for the class of the degree-`q` cycle `z`.
pub fn movability_verdict(
    l: &LaurentChainComplex,
    q: usize,
    z: &LaurentChain,
) -> Result<MovabilityVerdict, CoverError> {
    if l.class().is_zero() {
        return Err(CoverError::ZeroClass);
    }
    let (ann, free) = class_data(l, q, z)?;
    let p = ann.to_primitive_int();
    let factors: Vec<FactorVerdict> = if p.degree().unwrap_or(0) == 0 {
        Vec::new()
    } else {
        factor_over_integers(&p)
            .expect("nonzero")
            .factors
            .iter()
            .map(|(g, m)| verdict_unchecked(g, *m))
            .collect()
    };
    if free {
        return Ok(MovabilityVerdict {
            minus_end: Movability::No,
            plus_end: Movability::No,
            both: Movability::No,
            free_component: true,
            annihilator: p,
            annihilator_factors: factors,
            multiplier: None,
        });
    }
    let (c0, _) = solve_bounding(
        l,
        q,
        &mul_chain(&poly_to_laurent(&p), z),
        DEFAULT_WINDOW_CAP,
    )?;
    let k = denominator_lcm(&c0);
    let minus = factors.iter().all(|f| f.roots_are_algebraic_integers);
    let plus = factors
        .iter()
        .all(|f| f.roots_are_inverse_algebraic_integers);
    Ok(MovabilityVerdict {
        minus_end: grade(minus, &k),
        plus_end: grade(plus, &k),
        both: grade(minus && plus, &k),
        free_component: false,
        annihilator: p,
        annihilator_factors: factors,
        multiplier: Some(k),
    })
}

/// Constructive relocation of `k z` beyond height `N` towards an end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveWitness {
    pub end: End,
    pub q: usize,
    pub threshold: i64,
    pub cycle: LaurentChain,
    pub multiplier: BigInt,
    /// For the minus end, the monic annihilator `p(t)`; for the plus end, the
    /// reversed polynomial, monic in `s = 1/t`.
    pub polynomial: IntPoly,
    /// Exponent `M` with `x^M = sum_j b_j x^j` modulo `polynomial`,
    /// `x = t` or `x = 1/t` by end.
    pub exponent: i64,
    pub b: Vec<BigInt>,
    pub moved: LaurentChain,
    pub bounding: LaurentChain,
    /// Degree window in which the auxiliary linear solve succeeded.
    pub window: (i64, i64),
}

impl MoveWitness {
    /// Exact check of `d c = k z - z_moved` and of the support bound.
    pub fn verify(&self, l: &LaurentChainComplex) -> bool {
        let k = LaurentPoly::monomial(BigRational::from_integer(self.multiplier.clone()), 0);
        let mut rhs = mul_chain(&k, &self.cycle);
        for (i, v) in &self.moved {
            add_into(&mut rhs, *i, &-v);
        }
        let lhs = l.apply_boundary(self.q + 1, &self.bounding);
        lhs == rhs && self.support_ok()
    }

    pub fn support_ok(&self) -> bool {
        self.moved.values().all(|v| match self.end {
            End::Minus => v.max_degree().is_some_and(|d| d <= -self.threshold),
            End::Plus => v.min_degree().is_some_and(|d| d >= self.threshold),
        })
    }
}

pub fn move_cycle_witness(
    l: &LaurentChainComplex,
    q: usize,
    z: &LaurentChain,
    end: End,
    threshold: i64,
) -> Result<MoveWitness, CoverError> {
    let verdict = movability_verdict(l, q, z)?;
    if verdict.at(end) == Movability::No {
        return Err(CoverError::EndNotGranted(end));
    }
    let p = verdict.annihilator.clone();
    let (c0, window) = solve_bounding(
        l,
        q,
        &mul_chain(&poly_to_laurent(&p), z),
        DEFAULT_WINDOW_CAP,
    )?;
    let k = denominator_lcm(&c0);
    let kr = BigRational::from_integer(k.clone());
    let d = p.degree().unwrap_or(0) as i64;
    let lo_z = z
        .values()
        .filter_map(LaurentPoly::min_degree)
        .min()
        .unwrap_or(0);
    let hi_z = z
        .values()
        .filter_map(LaurentPoly::max_degree)
        .max()
        .unwrap_or(0);

    // Work in x = t (minus end) or x = 1/t (plus end) with a monic modulus.
    let (modulus, exponent) = match end {
        End::Minus => (p.clone(), (threshold + hi_z + d - 1).max(0)),
        End::Plus => {
            let p0 = p.constant_term();
            let rev: Vec<BigInt> = p.coeffs().iter().rev().map(|c| c * &p0).collect();
            (IntPoly::new(rev), (threshold + d - 1 - lo_z).max(0))
        }
    };
    let m = QPoly::from(&modulus);
    let x_pow = QPoly::monomial(BigRational::one(), exponent as usize);
    let (quot, rem) = x_pow.div_rem(&m);
    let b: Vec<BigInt> = (0..d as usize).map(|j| rem.coeff(j).to_integer()).collect();

    // x^M - sum b_j x^j = quot(x) * modulus(x), so
    // k z - z_moved = k x^{-M} quot(x) modulus(x) z.
    let in_t = |poly: &QPoly, e_sign: i64| -> LaurentPoly {
        let mut acc = LaurentPoly::zero();
        for (j, c) in poly.coeffs().iter().enumerate() {
            acc = &acc + &LaurentPoly::monomial(c.clone(), e_sign * j as i64);
        }
        acc
    };
    let (moved_factor, c_factor) = match end {
        End::Minus => {
            let mf = in_t(&rem, 1).mul_t_pow(-exponent).scale(&kr);
            let cf = in_t(&quot, 1).mul_t_pow(-exponent).scale(&kr);
            (mf, cf)
        }
        End::Plus => {
            // modulus(1/t) = t^{-d} p(t) / p(0)
            let p0 = BigRational::from_integer(p.constant_term());
            let mf = in_t(&rem, -1).mul_t_pow(exponent).scale(&kr);
            let cf = in_t(&quot, -1)
                .mul_t_pow(exponent - d)
                .scale(&(kr.clone() / p0));
            (mf, cf)
        }
    };
    Ok(MoveWitness {
        end,
        q,
        threshold,
        cycle: z.clone(),
        multiplier: k,
        polynomial: modulus,
        exponent,
        b,
        moved: mul_chain(&moved_factor, z),
        bounding: mul_chain(&c_factor, &c0),
        window,
    })
}

fn poly_to_laurent(p: &IntPoly) -> LaurentPoly {
    LaurentPoly::from(QPoly::from(p))
}

pub(crate) fn mul_chain(f: &LaurentPoly, chain: &LaurentChain) -> LaurentChain {
    let mut out = LaurentChain::new();
    for (i, v) in chain {
        add_into(&mut out, *i, &(f * v));
    }
    out
}

fn denominator_lcm(chain: &LaurentChain) -> BigInt {
    chain
        .values()
        .flat_map(|v| {
            v.terms()
                .map(|(_, c)| c.denom().clone())
                .collect::<Vec<_>>()
        })
        .fold(BigInt::one(), |acc, d| acc.lcm(&d))
}

/// Some degree-`(q+1)` chain `c` with `d c = target`, searched among chains
/// supported in a degree window that grows until `cap`.
fn solve_bounding(
    l: &LaurentChainComplex,
    q: usize,
    target: &LaurentChain,
    cap: i64,
) -> Result<(LaurentChain, (i64, i64)), CoverError> {
    if target.is_empty() {
        return Ok((LaurentChain::new(), (0, 0)));
    }
    let tlo = target
        .values()
        .filter_map(LaurentPoly::min_degree)
        .min()
        .unwrap_or(0);
    let thi = target
        .values()
        .filter_map(LaurentPoly::max_degree)
        .max()
        .unwrap_or(0);
    let cols = l.entries(q + 1);
    if cols.is_empty() {
        return Err(CoverError::WindowExhausted { lo: tlo, hi: thi });
    }
    let emin = cols.iter().flatten().map(|e| e.exponent).min().unwrap_or(0);
    let emax = cols.iter().flatten().map(|e| e.exponent).max().unwrap_or(0);
    let (nq, nq1) = (l.rank(q), l.rank(q + 1));

    let mut slack = 2;
    loop {
        let lo = tlo - emax - slack;
        let hi = thi - emin + slack;
        let rlo = lo + emin;
        let rhi = hi + emax;
        let row_count = ((rhi - rlo + 1) as usize) * nq;
        let mut columns = Vec::with_capacity(((hi - lo + 1) as usize) * nq1);
        for e in lo..=hi {
            for col in cols {
                let mut c: Vec<(usize, BigRational)> = col
                    .iter()
                    .map(|en| {
                        let row = ((e + en.exponent - rlo) as usize) * nq + en.row;
                        (row, BigRational::from_integer(en.sign.into()))
                    })
                    .collect();
                c.sort_by_key(|(r, _)| *r);
                columns.push(c);
            }
        }
        let a = SparseMatrix::new(row_count, columns);
        let mut y: Vec<(usize, BigRational)> = target
            .iter()
            .flat_map(|(i, v)| {
                v.terms()
                    .map(move |(deg, c)| (((deg - rlo) as usize) * nq + *i, c.clone()))
                    .collect::<Vec<_>>()
            })
            .collect();
        y.sort_by_key(|(r, _)| *r);
        let red = sparse::reduce(&a, true, None);
        if let Some(x) = red.solve(&y) {
            let mut c = LaurentChain::new();
            for (idx, v) in x {
                let e = lo + (idx / nq1) as i64;
                add_into(&mut c, idx % nq1, &LaurentPoly::monomial(v, e));
            }
            return Ok((c, (lo, hi)));
        }
        if slack >= cap {
            return Err(CoverError::WindowExhausted { lo, hi });
        }
        slack *= 2;
    }
}
