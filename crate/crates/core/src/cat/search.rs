//! Search for nonvanishing cup products of twisted and rational classes.

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::CatError;
use crate::algebra::units::is_dirichlet_unit_rational;
use crate::complex::{IntegerOneCocycle, SimplicialComplex};
use crate::twisted::{
    cup_product, twisted_coboundary, LocalSystem, TwistedChain, TwistedCochain, TwistedCohomology,
};

/// A nonvanishing product `u v w_1 ... w_r` with `u` twisted by `a^xi`, `v`
/// by `b^xi` and `w_j` rational classes of positive degree. The dual cycle
/// pairs nontrivially with the product, which proves it is not exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CupCertificate {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub a: BigRational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub b: BigRational,
    pub u: TwistedCochain,
    pub v: TwistedCochain,
    pub w_list: Vec<TwistedCochain>,
    pub product_class: TwistedCochain,
    pub r: usize,
    pub dual_cycle: TwistedChain,
}

/// A nonvanishing product of `r` rational classes of positive degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CupLengthCertificate {
    pub classes: Vec<TwistedCochain>,
    pub product_class: TwistedCochain,
    pub r: usize,
    pub dual_cycle: TwistedChain,
}

/// `u_0 w_1 ... w_r`, with every `w_j` read in the untwisted system.
fn product(
    k: &SimplicialComplex,
    s_one: &LocalSystem,
    start: &TwistedCochain,
    ws: &[TwistedCochain],
) -> TwistedCochain {
    ws.iter()
        .fold(start.clone(), |p, w| cup_product(k, s_one, &p, w))
}

/// Checks `d c = 0` for the chain boundary dual to `delta` and
/// `<p, c> != 0`, using only matrix-vector products.
fn check_dual_cycle(
    k: &SimplicialComplex,
    s: &LocalSystem,
    p: &TwistedCochain,
    c: &TwistedChain,
) -> bool {
    if c.q != p.q || c.pair(p).is_zero() {
        return false;
    }
    p.q == 0
        || twisted_coboundary(k, s, p.q - 1)
            .transpose()
            .apply(&c.values)
            .is_empty()
}

fn find_dual_cycle(h: &TwistedCohomology, p: &TwistedCochain) -> Option<TwistedChain> {
    h.dual_cycles(p.q)
        .into_iter()
        .find(|c| !c.pair(p).is_zero())
}

struct Extender<'a> {
    k: &'a SimplicialComplex,
    s_one: &'a LocalSystem,
    target: &'a TwistedCohomology,
    ws: &'a [TwistedCochain],
    dim: usize,
    max_r: usize,
}

impl Extender<'_> {
    /// Greedy extension of a nonexact product by classes from `ws`, taken
    /// in nondecreasing index order; trying an alternative after the first
    /// successful choice at a level consumes one unit of `budget`.
    fn extend(
        &self,
        p: &TwistedCochain,
        start: usize,
        depth: usize,
        budget: &mut usize,
    ) -> Vec<usize> {
        let mut best = Vec::new();
        if depth == self.max_r {
            return best;
        }
        let mut tried = 0;
        for idx in start..self.ws.len() {
            let w = &self.ws[idx];
            if p.q + w.q > self.dim {
                continue;
            }
            let next = cup_product(self.k, self.s_one, p, w);
            if self.target.is_coboundary(&next) {
                continue;
            }
            if tried > 0 {
                if *budget == 0 {
                    break;
                }
                *budget -= 1;
            }
            tried += 1;
            let mut chain = vec![idx];
            chain.extend(self.extend(&next, idx, depth + 1, budget));
            if chain.len() > best.len() {
                best = chain;
            }
            if depth + best.len() == self.max_r {
                break;
            }
        }
        best
    }
}

/// Number of alternatives the greedy extension may try beyond its first
/// choices.
pub const BACKTRACK_BUDGET: usize = 2;

fn rational_basis(h: &TwistedCohomology, dim: usize) -> Vec<TwistedCochain> {
    (1..=dim).flat_map(|d| h.basis(d)).collect()
}

/// Largest `r` with a nonvanishing product of `r` rational classes of
/// positive degree, within the search budget.
pub fn cup_length(k: &SimplicialComplex) -> CupLengthCertificate {
    let dim = k.dim().unwrap_or(0);
    let s_one = LocalSystem::trivial(k);
    let h = TwistedCohomology::new(k, &s_one);
    let ws = rational_basis(&h, dim);
    let unit = TwistedCochain::unit(k);
    let ext = Extender {
        k,
        s_one: &s_one,
        target: &h,
        ws: &ws,
        dim,
        max_r: dim,
    };
    let mut budget = BACKTRACK_BUDGET;
    let chosen = ext.extend(&unit, 0, 0, &mut budget);
    let classes: Vec<TwistedCochain> = chosen.iter().map(|i| ws[*i].clone()).collect();
    let product_class = product(k, &s_one, &unit, &classes);
    let dual_cycle =
        find_dual_cycle(&h, &product_class).expect("nonexact product pairs with a cycle");
    CupLengthCertificate {
        r: classes.len(),
        classes,
        product_class,
        dual_cycle,
    }
}

impl CupLengthCertificate {
    pub fn verify(&self, k: &SimplicialComplex) -> Result<(), CatError> {
        let s_one = LocalSystem::trivial(k);
        let h = TwistedCohomology::new(k, &s_one);
        if self.r != self.classes.len() {
            return Err(CatError::InvalidCertificate("length mismatch".into()));
        }
        for w in &self.classes {
            if w.q == 0 || !h.is_cocycle(w) {
                return Err(CatError::InvalidCertificate(
                    "class is not a positive-degree cocycle".into(),
                ));
            }
        }
        if product(k, &s_one, &TwistedCochain::unit(k), &self.classes) != self.product_class {
            return Err(CatError::InvalidCertificate(
                "product does not match".into(),
            ));
        }
        if !check_dual_cycle(k, &s_one, &self.product_class, &self.dual_cycle) {
            return Err(CatError::InvalidCertificate(
                "dual cycle does not detect the product".into(),
            ));
        }
        Ok(())
    }
}

impl CupCertificate {
    /// Re-checks every claim from scratch.
    pub fn verify(&self, k: &SimplicialComplex, xi: &IntegerOneCocycle) -> Result<(), CatError> {
        let bad = |m: &str| Err(CatError::InvalidCertificate(m.into()));
        for x in [&self.a, &self.b] {
            if is_dirichlet_unit_rational(x).unwrap_or(true) {
                return bad("monodromy is a Dirichlet unit or zero");
            }
        }
        if self.r != self.w_list.len() {
            return bad("length mismatch");
        }
        let sa = LocalSystem::new(k, xi, self.a.clone())?;
        let sb = LocalSystem::new(k, xi, self.b.clone())?;
        let s_one = LocalSystem::new(k, xi, BigRational::one())?;
        let sab = LocalSystem::new(k, xi, &self.a * &self.b)?;
        let closed = |s: &LocalSystem, c: &TwistedCochain| {
            twisted_coboundary(k, s, c.q).apply(&c.values).is_empty()
        };
        if !closed(&sa, &self.u) || !closed(&sb, &self.v) {
            return bad("u or v is not closed");
        }
        if self.w_list.iter().any(|w| w.q == 0 || !closed(&s_one, w)) {
            return bad("w is not a positive-degree cocycle");
        }
        let p = product(
            k,
            &s_one,
            &cup_product(k, &sb, &self.u, &self.v),
            &self.w_list,
        );
        if p != self.product_class {
            return bad("product does not match");
        }
        if !check_dual_cycle(k, &sab, &p, &self.dual_cycle) {
            return bad("dual cycle does not detect the product");
        }
        Ok(())
    }
}

/// Twisted cohomology for every monodromy in the pool and every product of
/// two of them, keyed by monodromy.
fn systems(
    k: &SimplicialComplex,
    xi: &IntegerOneCocycle,
    pool: &[BigRational],
) -> Result<Vec<(BigRational, TwistedCohomology)>, CatError> {
    let mut keys: Vec<BigRational> = pool.to_vec();
    for a in pool {
        for b in pool {
            keys.push(a * b);
        }
    }
    keys.push(BigRational::one());
    keys.sort();
    keys.dedup();
    keys.into_par_iter()
        .map(|a| {
            let s = LocalSystem::new(k, xi, a.clone())?;
            Ok((a, TwistedCohomology::new(k, &s)))
        })
        .collect()
}

fn lookup<'a>(
    table: &'a [(BigRational, TwistedCohomology)],
    a: &BigRational,
) -> &'a TwistedCohomology {
    &table
        .iter()
        .find(|(x, _)| x == a)
        .expect("monodromy tabulated")
        .1
}

struct Candidate {
    u: TwistedCochain,
    v: TwistedCochain,
    ws: Vec<usize>,
}

/// Best certificate over the pool, or `None` when no product of a twisted
/// pair survives. Ties between pairs go to the first pair in pool order.
pub fn search_certificate(
    k: &SimplicialComplex,
    xi: &IntegerOneCocycle,
    pool: &[BigRational],
    max_r: usize,
) -> Result<Option<CupCertificate>, CatError> {
    let g = xi.period_gcd(k);
    if g == 0 {
        return Err(CatError::ZeroClass);
    }
    if g != 1 {
        return Err(CatError::Divisible(g));
    }
    for a in pool {
        if is_dirichlet_unit_rational(a)? {
            return Err(CatError::UnitInPool(
                crate::algebra::rational::format_rational(a),
            ));
        }
    }
    let dim = k.dim().unwrap_or(0);
    let table = systems(k, xi, pool)?;
    let s_one = LocalSystem::new(k, xi, BigRational::one())?;
    let ws = rational_basis(lookup(&table, &BigRational::one()), dim);

    let pairs: Vec<(usize, usize)> = (0..pool.len())
        .flat_map(|i| (0..pool.len()).map(move |j| (i, j)))
        .collect();
    let found: Vec<Option<Candidate>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (a, b) = (&pool[i], &pool[j]);
            let (ha, hb, hab) = (
                lookup(&table, a),
                lookup(&table, b),
                lookup(&table, &(a * b)),
            );
            let sb = hb.system();
            let ext = Extender {
                k,
                s_one: &s_one,
                target: hab,
                ws: &ws,
                dim,
                max_r,
            };
            let mut best: Option<Candidate> = None;
            for q in 0..=dim {
                for u in ha.basis(q) {
                    for qv in 0..=dim - q {
                        for v in hb.basis(qv) {
                            let p = cup_product(k, sb, &u, &v);
                            if hab.is_coboundary(&p) {
                                continue;
                            }
                            let mut budget = BACKTRACK_BUDGET;
                            let chosen = ext.extend(&p, 0, 0, &mut budget);
                            if best.as_ref().map_or(true, |c| chosen.len() > c.ws.len()) {
                                best = Some(Candidate {
                                    u: u.clone(),
                                    v,
                                    ws: chosen,
                                });
                            }
                        }
                    }
                }
            }
            best
        })
        .collect();

    let mut winner: Option<(usize, Candidate)> = None;
    for (n, c) in found.into_iter().enumerate() {
        if let Some(c) = c {
            if winner
                .as_ref()
                .map_or(true, |(_, w)| c.ws.len() > w.ws.len())
            {
                winner = Some((n, c));
            }
        }
    }
    let Some((n, c)) = winner else {
        return Ok(None);
    };
    let (a, b) = (pool[pairs[n].0].clone(), pool[pairs[n].1].clone());
    let hab = lookup(&table, &(&a * &b));
    let w_list: Vec<TwistedCochain> = c.ws.iter().map(|i| ws[*i].clone()).collect();
    let sb = lookup(&table, &b).system();
    let product_class = product(k, &s_one, &cup_product(k, sb, &c.u, &c.v), &w_list);
    let dual_cycle =
        find_dual_cycle(hab, &product_class).expect("nonexact product pairs with a cycle");
    let cert = CupCertificate {
        a,
        b,
        u: c.u,
        v: c.v,
        r: w_list.len(),
        w_list,
        product_class,
        dual_cycle,
    };
    cert.verify(k, xi)?;
    Ok(Some(cert))
}
