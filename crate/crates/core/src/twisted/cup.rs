use num_traits::Zero;

use super::{LocalSystem, TwistedCochain, TwistedCohomology, TwistedError};
use crate::algebra::laurent::rational_pow;
use crate::complex::SimplicialComplex;

/// Cochain-level cup product `C^p(a^xi) x C^q(b^xi) -> C^{p+q}((ab)^xi)`:
///
/// `(u v)(v_0..v_{p+q}) = u(v_0..v_p) * b^e * v(v_p..v_{p+q})`,
/// `e = h(v_0) + xi(v_0, v_p) - h(v_p)`, which carries the back face into
/// the trivialization at the front vertex.
pub fn cup_product(
    k: &SimplicialComplex,
    sb: &LocalSystem,
    u: &TwistedCochain,
    v: &TwistedCochain,
) -> TwistedCochain {
    let (p, q) = (u.q, v.q);
    let ud = u.to_dense(k.count(p));
    let vd = v.to_dense(k.count(q));
    let mut out = Vec::new();
    for (idx, s) in k.simplices(p + q).iter().enumerate() {
        let front = &s[..=p];
        let fu = &ud[k.index_of(front).expect("face of a simplex")];
        if fu.is_zero() {
            continue;
        }
        let back = &s[p..];
        let bv = &vd[k.index_of(back).expect("face of a simplex")];
        if bv.is_zero() {
            continue;
        }
        let e = if p == 0 { 0 } else { sb.transport(s[0], s[p]) };
        out.push((idx, fu * rational_pow(sb.a(), e) * bv));
    }
    TwistedCochain::new(p + q, out)
}

/// Cup product of two cocycles, landing in the system `(ab)^xi`.
pub fn twisted_cup(
    k: &SimplicialComplex,
    sa: &LocalSystem,
    sb: &LocalSystem,
    u: &TwistedCochain,
    v: &TwistedCochain,
) -> Result<(LocalSystem, TwistedCochain), TwistedError> {
    if sa.class() != sb.class() {
        return Err(TwistedError::ClassMismatch);
    }
    for (s, c) in [(sa, u), (sb, v)] {
        let h = TwistedCohomology::new(k, s);
        if c.values.last().is_some_and(|(i, _)| *i >= k.count(c.q)) {
            return Err(TwistedError::WrongLength {
                got: c.values.last().map_or(0, |x| x.0 + 1),
                expected: k.count(c.q),
            });
        }
        if !h.is_cocycle(c) {
            return Err(TwistedError::NotClosed { q: c.q });
        }
    }
    Ok((product_system(sa, sb), cup_product(k, sb, u, v)))
}

pub(crate) fn product_system(sa: &LocalSystem, sb: &LocalSystem) -> LocalSystem {
    sa.with_monodromy(sa.a() * sb.a())
        .expect("product of nonzero monodromies")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};
    use crate::algebra::BigRational;
    use crate::complex::fixtures;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_cochain(k: &SimplicialComplex, q: usize, rng: &mut ChaCha8Rng) -> TwistedCochain {
        let vals: Vec<BigRational> = (0..k.count(q))
            .map(|_| int(rng.gen_range(-3..=3)))
            .collect();
        TwistedCochain::from_dense(q, &vals)
    }

    #[test]
    fn torus_generators_multiply_to_fundamental_class() {
        let k = fixtures::torus(2, 3);
        let s = LocalSystem::trivial(&k);
        let h = TwistedCohomology::new(&k, &s);
        let b1 = h.basis(1);
        assert_eq!(b1.len(), 2);
        let top = cup_product(&k, &s, &b1[0], &b1[1]);
        assert!(h.is_cocycle(&top));
        assert!(!h.is_coboundary(&top));
        // Graded commutativity in cohomology: u v + v u is exact.
        let swapped = cup_product(&k, &s, &b1[1], &b1[0]);
        assert!(h.is_coboundary(&top.add(&swapped)));
        // Squares of degree-one classes vanish.
        assert!(h.is_coboundary(&cup_product(&k, &s, &b1[0], &b1[0])));
    }

    #[test]
    fn unit_is_a_left_identity() {
        let k = fixtures::torus(2, 3);
        let s = LocalSystem::trivial(&k);
        let h = TwistedCohomology::new(&k, &s);
        for v in h.basis(1) {
            assert_eq!(cup_product(&k, &s, &TwistedCochain::unit(&k), &v), v);
        }
    }

    #[test]
    fn associativity_on_random_cochains() {
        let k = fixtures::torus(3, 3);
        let xi = fixtures::torus_class(3, 3, &[1, 0, 0]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        // The first factor's monodromy does not enter the formula.
        let (sb, sc) = (
            LocalSystem::new(&k, &xi, rat(1, 3)).unwrap(),
            LocalSystem::new(&k, &xi, int(-2)).unwrap(),
        );
        let sbc = product_system(&sb, &sc);
        for _ in 0..3 {
            let (u, v, w) = (
                random_cochain(&k, 1, &mut rng),
                random_cochain(&k, 1, &mut rng),
                random_cochain(&k, 1, &mut rng),
            );
            let left = cup_product(&k, &sc, &cup_product(&k, &sb, &u, &v), &w);
            let right = cup_product(&k, &sbc, &u, &cup_product(&k, &sc, &v, &w));
            assert_eq!(left, right);
        }
    }

    #[test]
    fn leibniz_rule_for_twisted_cochains() {
        let (k, xi) = fixtures::doubling_mapping_torus();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let sa = LocalSystem::new(&k, &xi, int(3)).unwrap();
        let sb = LocalSystem::new(&k, &xi, rat(-1, 2)).unwrap();
        let sab = product_system(&sa, &sb);
        let (ha, hb, hab) = (
            TwistedCohomology::new(&k, &sa),
            TwistedCohomology::new(&k, &sb),
            TwistedCohomology::new(&k, &sab),
        );
        for _ in 0..3 {
            let u = random_cochain(&k, 0, &mut rng);
            let v = random_cochain(&k, 1, &mut rng);
            // d(u v) = du v + (-1)^p u dv
            let lhs = hab.apply(&cup_product(&k, &sb, &u, &v));
            let rhs = cup_product(&k, &sb, &ha.apply(&u), &v).add(&cup_product(
                &k,
                &sb,
                &u,
                &hb.apply(&v),
            ));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn exact_factor_gives_exact_product() {
        let (k, xi) = fixtures::wedge_with_circle(&fixtures::torus(2, 3));
        let sa = LocalSystem::new(&k, &xi, int(2)).unwrap();
        let sb = LocalSystem::new(&k, &xi, int(1)).unwrap();
        let ha = TwistedCohomology::new(&k, &sa);
        let hb = TwistedCohomology::new(&k, &sb);
        let x = TwistedCochain::from_dense(
            0,
            &(0..k.count(0))
                .map(|i| int(i as i64 % 3))
                .collect::<Vec<_>>(),
        );
        let u = ha.apply(&x);
        for v in hb.basis(1) {
            let (sab, p) = twisted_cup(&k, &sa, &sb, &u, &v).unwrap();
            assert!(TwistedCohomology::new(&k, &sab).is_coboundary(&p));
        }
    }

    #[test]
    fn open_cochains_are_rejected() {
        let k = fixtures::circle();
        let s = LocalSystem::trivial(&k);
        let u = TwistedCochain::from_dense(0, &[int(1), int(0), int(0)]);
        assert_eq!(
            twisted_cup(&k, &s, &s, &u, &u).unwrap_err(),
            TwistedError::NotClosed { q: 0 }
        );
    }
}
