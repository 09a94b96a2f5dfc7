//! Certified intervals for `Cat(X, xi)`: cup-product lower bounds, upper
//! bounds from the category of `X`, class normalization, and the wedge
//! formula.

mod search;
mod wedge;

use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::rational::{int, rat};
use crate::algebra::AlgebraError;
use crate::complex::{ComplexError, IntegerOneCocycle, SimplicialComplex};
use crate::twisted::TwistedError;

pub use search::{
    cup_length, search_certificate, CupCertificate, CupLengthCertificate, BACKTRACK_BUDGET,
};
pub use wedge::{detect_wedge, wedge_formula, WedgeBound, WedgeSplit};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Twisted(#[from] TwistedError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("class is zero; use the cup-length bound")]
    ZeroClass,
    #[error("class is divisible by {0}; normalize it first")]
    Divisible(i64),
    #[error("monodromy pool contains the Dirichlet unit {0}")]
    UnitInPool(String),
    #[error("certificate failed verification: {0}")]
    InvalidCertificate(String),
    #[error("no wedge decomposition with the class on a circle summand")]
    NoWedge,
    #[error("class does not vanish on the complement of the circle summand")]
    ClassOnWedgeSummand,
    #[error("category {value} lies outside the bracket [{lower}, {upper}]")]
    CatOutOfRange {
        value: usize,
        lower: usize,
        upper: usize,
    },
    #[error("lower bound {lower} exceeds upper bound {upper}")]
    Inconsistent { lower: usize, upper: usize },
}

/// `xi = multiplier * sign * class`, with `class` indivisible and its first
/// nonzero edge value positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalization {
    pub class: IntegerOneCocycle,
    pub gcd: i64,
    pub sign: i64,
}

/// Divides the class by the gcd of its periods. The result vanishes on the
/// spanning forest; a cohomologically trivial class comes back unchanged
/// with multiplier 0.
pub fn normalize_class(k: &SimplicialComplex, xi: &IntegerOneCocycle) -> Normalization {
    let g = xi.period_gcd(k);
    if g == 0 {
        return Normalization {
            class: xi.clone(),
            gcd: 0,
            sign: 1,
        };
    }
    let gauged = xi.tree_gauge(k);
    let sign = gauged.entries().next().map_or(1, |(_, _, w)| w.signum());
    let class =
        IntegerOneCocycle::from_weights(gauged.entries().map(|(i, j, w)| (i, j, w / (g * sign))));
    Normalization {
        class,
        gcd: g,
        sign,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UpperProvenance {
    /// `cat(X) <= dim X + 1`.
    Dimension,
    /// Category of `X` supplied by the user.
    UserCat,
    /// `cat(Y) - 1` for a wedge `Y v S^1`.
    Wedge,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UpperBound {
    pub bound: usize,
    pub provenance: UpperProvenance,
}

/// Category bounds `dim + 1` and, if given, `user_cat`, each lowered by one
/// when the complex is connected and the class is nonzero.
pub fn upper_bounds(
    k: &SimplicialComplex,
    xi: &IntegerOneCocycle,
    user_cat: Option<usize>,
) -> Vec<UpperBound> {
    let drop = usize::from(k.is_connected() && xi.period_gcd(k) != 0);
    let dim = k.dim().unwrap_or(0);
    let mut out = vec![UpperBound {
        bound: dim + 1 - drop,
        provenance: UpperProvenance::Dimension,
    }];
    if let Some(c) = user_cat {
        out.push(UpperBound {
            bound: c.saturating_sub(drop),
            provenance: UpperProvenance::UserCat,
        });
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LowerCertificate {
    /// Nonvanishing twisted product; the bound is `r + 1`.
    Twisted(CupCertificate),
    /// Zero class: nonvanishing rational product; the bound is `r + 1`.
    CupLength(CupLengthCertificate),
}

impl LowerCertificate {
    pub fn r(&self) -> usize {
        match self {
            Self::Twisted(c) => c.r,
            Self::CupLength(c) => c.r,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReportOptions {
    pub pool: Vec<BigRational>,
    pub max_r: Option<usize>,
    /// Category of `X`.
    pub user_cat: Option<usize>,
    /// Category of `Y` when `X` is a wedge `Y v S^1`.
    pub cat_y: Option<usize>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            pool: default_pool(),
            max_r: None,
            user_cat: None,
            cat_y: None,
        }
    }
}

pub fn default_pool() -> Vec<BigRational> {
    vec![int(2), rat(1, 2), int(3), int(-2)]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalizationReport {
    pub gcd: i64,
    pub sign: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatBoundReport {
    pub lower: usize,
    pub lower_certificate: Option<LowerCertificate>,
    pub upper: usize,
    pub upper_provenance: Vec<UpperBound>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wedge: Option<WedgeBound>,
    pub normalization: NormalizationReport,
    pub notes: Vec<String>,
}

impl CatBoundReport {
    /// The bounds with the normalization data left out; invariant under
    /// rescaling the class.
    pub fn bounds(&self) -> (usize, usize, Option<usize>, Option<&LowerCertificate>) {
        (
            self.lower,
            self.upper,
            self.exact,
            self.lower_certificate.as_ref(),
        )
    }
}

/// Rejects a supplied category below the rational cup-length bound or above
/// the dimension bound.
fn check_user_cat(
    k: &SimplicialComplex,
    user_cat: Option<usize>,
    cl: usize,
) -> Result<(), CatError> {
    if let Some(c) = user_cat {
        let (lo, hi) = (cl + 1, k.dim().unwrap_or(0) + 1);
        if c < lo || c > hi {
            return Err(CatError::CatOutOfRange {
                value: c,
                lower: lo,
                upper: hi,
            });
        }
    }
    Ok(())
}

pub fn report(
    k: &SimplicialComplex,
    xi: &IntegerOneCocycle,
    opts: &ReportOptions,
) -> Result<CatBoundReport, CatError> {
    k.ensure_valid()?;
    xi.check(k)?;
    let norm = normalize_class(k, xi);
    let dim = k.dim().unwrap_or(0);
    let max_r = opts.max_r.unwrap_or(dim);
    let mut notes = Vec::new();

    let classical = cup_length(k);
    check_user_cat(k, opts.user_cat, classical.r)?;

    let mut upper_provenance = upper_bounds(k, &norm.class, opts.user_cat);
    let mut wedge = None;
    let mut exact = None;

    let (lower, lower_certificate) = if norm.gcd == 0 {
        notes.push("zero class: Cat equals cat, bounded below by rational cup length + 1".into());
        (
            classical.r + 1,
            Some(LowerCertificate::CupLength(classical)),
        )
    } else {
        match search_certificate(k, &norm.class, &opts.pool, max_r)? {
            Some(c) => (c.r + 1, Some(LowerCertificate::Twisted(c))),
            None => (0, None),
        }
    };
    if norm.gcd != 0 {
        notes.push("greedy certificate search: lower bound, not maximal".into());
        match detect_wedge(k, &norm.class) {
            Ok(split) if split.y.count(1) > 0 => {
                let y_cl = cup_length(&split.y).r;
                // cat(Y v S^1) = max(cat Y, 2), so cat(X) determines cat(Y)
                // once cat(Y) >= 2.
                let cat_y = opts.cat_y.or(opts.user_cat.filter(|_| y_cl + 1 >= 2));
                let b = wedge_formula(k, &norm.class, cat_y)?;
                upper_provenance.push(UpperBound {
                    bound: b.upper,
                    provenance: UpperProvenance::Wedge,
                });
                exact = b.exact;
                wedge = Some(b);
            }
            Ok(_) => {
                notes.push("wedge with a point: full rotation not certified by the tool".into())
            }
            Err(CatError::NoWedge | CatError::ClassOnWedgeSummand) => {}
            Err(e) => return Err(e),
        }
    }
    let upper = upper_provenance
        .iter()
        .map(|u| u.bound)
        .min()
        .expect("dimension bound present");
    if lower > upper {
        return Err(CatError::Inconsistent { lower, upper });
    }
    if exact.is_none() && lower == upper {
        exact = Some(lower);
    }
    if let Some(e) = exact {
        if e < lower || e > upper {
            return Err(CatError::Inconsistent {
                lower: e.max(lower),
                upper: e.min(upper),
            });
        }
    }
    Ok(CatBoundReport {
        lower,
        lower_certificate,
        upper,
        upper_provenance,
        exact,
        wedge,
        normalization: NormalizationReport {
            gcd: norm.gcd,
            sign: norm.sign,
        },
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures;

    #[test]
    fn normalization_examples() {
        let k = fixtures::circle();
        let xi = IntegerOneCocycle::from_weights([(0, 1, 1), (1, 2, 1), (2, 0, 1)]);
        let n = normalize_class(&k, &xi);
        assert_eq!(n.gcd, 3);
        assert_eq!(n.class.period_gcd(&k), 1);
        let z = normalize_class(&k, &IntegerOneCocycle::zero());
        assert_eq!((z.gcd, z.class.is_zero()), (0, true));
        assert_eq!(normalize_class(&k, &fixtures::circle_generator()).gcd, 1);
        let neg = normalize_class(&k, &fixtures::circle_generator().scaled(-2));
        assert_eq!((neg.gcd, neg.sign), (2, -1));
        assert_eq!(
            neg.class,
            normalize_class(&k, &fixtures::circle_generator()).class
        );
    }

    #[test]
    fn upper_bound_examples() {
        let k = fixtures::circle();
        let xi = fixtures::circle_generator();
        let b = upper_bounds(&k, &xi, Some(2));
        assert_eq!(b.iter().map(|u| u.bound).collect::<Vec<_>>(), vec![1, 1]);
        let t = fixtures::torus(2, 3);
        let b = upper_bounds(&t, &fixtures::torus_class(2, 3, &[1, 0]), Some(3));
        assert_eq!(b.iter().map(|u| u.bound).min(), Some(2));
        let b = upper_bounds(&t, &IntegerOneCocycle::zero(), Some(3));
        assert_eq!(b.iter().map(|u| u.bound).min(), Some(3));
    }

    #[test]
    fn circle_report_is_an_interval() {
        let r = report(
            &fixtures::circle(),
            &fixtures::circle_generator(),
            &ReportOptions::default(),
        )
        .unwrap();
        assert_eq!((r.lower, r.upper, r.exact), (0, 1, None));
    }

    #[test]
    fn torus_reports() {
        let t = fixtures::torus(2, 3);
        let r = report(&t, &IntegerOneCocycle::zero(), &ReportOptions::default()).unwrap();
        assert_eq!((r.lower, r.upper, r.exact), (3, 3, Some(3)));
        let r = report(
            &t,
            &fixtures::torus_class(2, 3, &[1, 0]),
            &ReportOptions::default(),
        )
        .unwrap();
        assert_eq!((r.lower, r.upper), (0, 2));
        assert!(r.lower_certificate.is_none());
    }

    #[test]
    fn user_category_below_cup_length_is_rejected() {
        let t = fixtures::torus(2, 3);
        let opts = ReportOptions {
            user_cat: Some(2),
            ..ReportOptions::default()
        };
        assert!(matches!(
            report(&t, &IntegerOneCocycle::zero(), &opts),
            Err(CatError::CatOutOfRange { .. })
        ));
    }
}
