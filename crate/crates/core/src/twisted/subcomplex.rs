use std::collections::VecDeque;

use super::{LocalSystem, TwistedCochain, TwistedCohomology, TwistedError};
use crate::algebra::sparse::{from_dense, reduce, SparseMatrix};
use crate::algebra::units::is_dirichlet_unit_rational;
use crate::complex::{face, IntegerOneCocycle, SimplicialComplex};

use super::cochain::CochainComplex;

/// A face-closed set of simplices, with the flag recording whether the
/// class restricts to zero on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subcomplex {
    members: Vec<Vec<bool>>,
    xi_vanishes: bool,
}

impl Subcomplex {
    /// Closure under faces of the given simplices.
    pub fn from_simplices<I>(
        k: &SimplicialComplex,
        simplices: I,
        xi: &IntegerOneCocycle,
    ) -> Result<Self, TwistedError>
    where
        I: IntoIterator<Item = Vec<usize>>,
    {
        let top = k.dim().map_or(0, |d| d + 1);
        let mut members: Vec<Vec<bool>> = (0..top).map(|q| vec![false; k.count(q)]).collect();
        let mut stack: Vec<Vec<usize>> = Vec::new();
        for mut s in simplices {
            s.sort_unstable();
            stack.push(s);
        }
        while let Some(s) = stack.pop() {
            let Some(i) = k.index_of(&s) else {
                return Err(TwistedError::NotASimplex(s));
            };
            let q = s.len() - 1;
            if members[q][i] {
                continue;
            }
            members[q][i] = true;
            if q > 0 {
                stack.extend((0..s.len()).map(|j| face(&s, j)));
            }
        }
        Ok(Self::with_flag(k, members, xi))
    }

    /// The full subcomplex on a vertex set.
    pub fn induced(k: &SimplicialComplex, vertices: &[usize], xi: &IntegerOneCocycle) -> Self {
        let set: std::collections::HashSet<usize> = vertices.iter().copied().collect();
        let mut members: Vec<Vec<bool>> = (0..k.dim().map_or(0, |d| d + 1))
            .map(|q| vec![false; k.count(q)])
            .collect();
        for (q, idx) in k.induced(&set).into_iter().enumerate() {
            for i in idx {
                members[q][i] = true;
            }
        }
        Self::with_flag(k, members, xi)
    }

    fn with_flag(k: &SimplicialComplex, members: Vec<Vec<bool>>, xi: &IntegerOneCocycle) -> Self {
        let mut f = Self {
            members,
            xi_vanishes: false,
        };
        f.xi_vanishes = f.class_vanishes(k, xi);
        f
    }

    /// Whether `xi` has a potential on every component of the subcomplex.
    fn class_vanishes(&self, k: &SimplicialComplex, xi: &IntegerOneCocycle) -> bool {
        let n = k.vertex_count();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, e) in k.simplices(1).iter().enumerate() {
            if self.contains(1, i) {
                adj[e[0]].push(e[1]);
                adj[e[1]].push(e[0]);
            }
        }
        let mut pot: Vec<Option<i64>> = vec![None; n];
        for root in 0..n {
            if !self.contains(0, root) || pot[root].is_some() {
                continue;
            }
            pot[root] = Some(0);
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                let pu = pot[u].expect("visited");
                for &v in &adj[u] {
                    let want = pu + xi.weight(u, v);
                    match pot[v] {
                        None => {
                            pot[v] = Some(want);
                            queue.push_back(v);
                        }
                        Some(pv) if pv != want => return false,
                        Some(_) => {}
                    }
                }
            }
        }
        true
    }

    pub fn contains(&self, q: usize, i: usize) -> bool {
        self.members
            .get(q)
            .and_then(|m| m.get(i))
            .copied()
            .unwrap_or(false)
    }

    pub fn count(&self, q: usize) -> usize {
        self.members
            .get(q)
            .map_or(0, |m| m.iter().filter(|b| **b).count())
    }

    /// Indices of the member `q`-simplices, increasing.
    pub fn indices(&self, q: usize) -> Vec<usize> {
        self.members.get(q).map_or(Vec::new(), |m| {
            m.iter()
                .enumerate()
                .filter(|(_, b)| **b)
                .map(|(i, _)| i)
                .collect()
        })
    }

    pub fn xi_vanishes(&self) -> bool {
        self.xi_vanishes
    }
}

/// The cochain complex on a selection of simplices (the subcomplex itself,
/// or its complement for the relative complex), with index maps to the
/// ambient complex.
#[derive(Clone, Debug)]
pub struct RestrictedComplex {
    pub complex: CochainComplex,
    kept: Vec<Vec<usize>>,
    local: Vec<Vec<Option<usize>>>,
}

impl RestrictedComplex {
    fn new(full: &CochainComplex, keep: impl Fn(usize, usize) -> bool) -> Self {
        let top = full.top();
        let kept: Vec<Vec<usize>> = (0..=top)
            .map(|q| (0..full.count(q)).filter(|i| keep(q, *i)).collect())
            .collect();
        let local: Vec<Vec<Option<usize>>> = (0..=top)
            .map(|q| {
                let mut m = vec![None; full.count(q)];
                for (li, gi) in kept[q].iter().enumerate() {
                    m[*gi] = Some(li);
                }
                m
            })
            .collect();
        let maps = (0..=top)
            .map(|q| {
                let d = full.coboundary(q);
                let rows = if q < top { kept[q + 1].len() } else { 0 };
                let cols = kept[q]
                    .iter()
                    .map(|g| {
                        d.col(*g)
                            .iter()
                            .filter_map(|(r, v)| {
                                local
                                    .get(q + 1)
                                    .and_then(|m| m[*r])
                                    .map(|lr| (lr, v.clone()))
                            })
                            .collect()
                    })
                    .collect();
                SparseMatrix::new(rows, cols)
            })
            .collect();
        Self {
            complex: CochainComplex::new(maps),
            kept,
            local,
        }
    }

    /// Restriction of an ambient cochain.
    pub fn restrict(&self, u: &TwistedCochain) -> TwistedCochain {
        let m = &self.local[u.q];
        TwistedCochain::new(
            u.q,
            u.values
                .iter()
                .filter_map(|(i, v)| m[*i].map(|l| (l, v.clone())))
                .collect(),
        )
    }

    /// Extension by zero of a local cochain.
    pub fn extend(&self, u: &TwistedCochain) -> TwistedCochain {
        TwistedCochain::new(
            u.q,
            u.values
                .iter()
                .map(|(i, v)| (self.kept[u.q][*i], v.clone()))
                .collect(),
        )
    }
}

/// Cochains on the ambient complex vanishing on `f`, computing
/// `H^*(K, F; a^xi)`.
pub fn relative_cohomology(full: &TwistedCohomology, f: &Subcomplex) -> RestrictedComplex {
    RestrictedComplex::new(full, |q, i| !f.contains(q, i))
}

/// Cochains on `f`, computing `H^*(F; a^xi)`.
pub fn subcomplex_cohomology(full: &TwistedCohomology, f: &Subcomplex) -> RestrictedComplex {
    RestrictedComplex::new(full, |q, i| f.contains(q, i))
}

/// Outcome of testing that `H^i(K; a^xi) -> H^i(F; a^xi)` vanishes.
#[derive(Clone, Debug)]
pub struct LiftingReport {
    pub degree: usize,
    pub pass: bool,
    pub betti: usize,
    pub betti_subcomplex: usize,
    pub betti_relative: usize,
    pub restriction_rank: usize,
    /// Rank of `H^i(K, F) -> H^i(K)`; exactness forces
    /// `betti = relative_image_rank + restriction_rank`.
    pub relative_image_rank: usize,
    /// A cocycle of `K` whose restriction is not exact, on failure.
    pub witness: Option<TwistedCochain>,
}

fn rank_of(vectors: &[Vec<crate::algebra::BigRational>], n: usize) -> usize {
    let cols = vectors.iter().map(|v| from_dense(v)).collect();
    reduce(&SparseMatrix::new(n, cols), false, None).rank()
}

/// Restriction to `f` in degree `i`. Passing means every class of `K` with
/// coefficients in `a^xi` lifts to a relative class.
pub fn lifting_vanishing_check(
    k: &SimplicialComplex,
    s: &LocalSystem,
    f: &Subcomplex,
    i: usize,
) -> Result<LiftingReport, TwistedError> {
    if !f.xi_vanishes() {
        return Err(TwistedError::ClassNonzeroOnSubcomplex);
    }
    if is_dirichlet_unit_rational(s.a())? {
        return Err(TwistedError::DirichletUnit(
            crate::algebra::rational::format_rational(s.a()),
        ));
    }
    let full = TwistedCohomology::new(k, s);
    let sub = subcomplex_cohomology(&full, f);
    let rel = relative_cohomology(&full, f);

    let basis = full.basis(i);
    let mut images = Vec::new();
    let mut witness = None;
    for u in &basis {
        let r = sub.restrict(u);
        let coords = sub.complex.coordinates(&r)?;
        if witness.is_none() && coords.iter().any(|c| !num_traits::Zero::is_zero(c)) {
            witness = Some(u.clone());
        }
        images.push(coords);
    }
    let restriction_rank = rank_of(&images, sub.complex.betti(i));

    let lifted: Vec<_> = rel
        .complex
        .basis(i)
        .iter()
        .map(|w| full.coordinates(&rel.extend(w)))
        .collect::<Result<_, _>>()?;
    let relative_image_rank = rank_of(&lifted, full.betti(i));

    Ok(LiftingReport {
        degree: i,
        pass: restriction_rank == 0,
        betti: full.betti(i),
        betti_subcomplex: sub.complex.betti(i),
        betti_relative: rel.complex.betti(i),
        restriction_rank,
        relative_image_rank,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;
    use crate::complex::fixtures;

    #[test]
    fn arc_of_circle_passes() {
        let k = fixtures::circle();
        let xi = fixtures::circle_generator();
        let f = Subcomplex::from_simplices(&k, [vec![0, 1], vec![1, 2]], &xi).unwrap();
        assert!(f.xi_vanishes());
        let s = LocalSystem::new(&k, &xi, int(2)).unwrap();
        let r = lifting_vanishing_check(&k, &s, &f, 1).unwrap();
        assert!(r.pass);
        assert_eq!(r.betti_subcomplex, 0);
    }

    #[test]
    fn torus_part_of_wedge_fails_with_witness() {
        let y = fixtures::torus(2, 3);
        let (k, xi) = fixtures::wedge_with_circle(&y);
        let torus_vertices: Vec<usize> = (0..y.vertex_count()).collect();
        let f = Subcomplex::induced(&k, &torus_vertices, &xi);
        assert!(f.xi_vanishes());
        let s = LocalSystem::new(&k, &xi, int(2)).unwrap();
        let r = lifting_vanishing_check(&k, &s, &f, 1).unwrap();
        assert_eq!((r.betti, r.betti_subcomplex), (2, 2));
        assert_eq!(r.restriction_rank, 2);
        assert!(!r.pass);
        assert!(r.witness.is_some());
        assert_eq!(r.betti, r.restriction_rank + r.relative_image_rank);
    }

    #[test]
    fn preconditions() {
        let k = fixtures::circle();
        let xi = fixtures::circle_generator();
        let whole = Subcomplex::from_simplices(&k, k.maximal_simplices(), &xi).unwrap();
        assert!(!whole.xi_vanishes());
        let s = LocalSystem::new(&k, &xi, int(2)).unwrap();
        assert_eq!(
            lifting_vanishing_check(&k, &s, &whole, 1).unwrap_err(),
            TwistedError::ClassNonzeroOnSubcomplex
        );
        let arc = Subcomplex::from_simplices(&k, [vec![0, 1]], &xi).unwrap();
        let s1 = LocalSystem::new(&k, &xi, int(1)).unwrap();
        assert!(matches!(
            lifting_vanishing_check(&k, &s1, &arc, 0),
            Err(TwistedError::DirichletUnit(_))
        ));
        assert!(matches!(
            Subcomplex::from_simplices(&k, [vec![0, 1, 2]], &xi),
            Err(TwistedError::NotASimplex(_))
        ));
    }

    #[test]
    fn relative_sequence_is_exact_on_mapping_torus() {
        let (k, xi) = fixtures::doubling_mapping_torus();
        let f = Subcomplex::induced(&k, &[0, 1, 2], &xi);
        assert!(f.xi_vanishes());
        for a in [int(2), int(3)] {
            let s = LocalSystem::new(&k, &xi, a).unwrap();
            for i in 0..=2 {
                let r = lifting_vanishing_check(&k, &s, &f, i).unwrap();
                assert_eq!(r.betti, r.restriction_rank + r.relative_image_rank);
            }
        }
    }
}
