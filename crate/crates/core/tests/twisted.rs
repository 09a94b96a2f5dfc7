use catxi::algebra::rational::{int, rat};
use catxi::algebra::BigRational;
use catxi::cat::{report, ReportOptions};
use catxi::complex::{barycentric_subdivision, fixtures, IntegerOneCocycle, SimplicialComplex};
use catxi::twisted::{twisted_betti_numbers, twisted_coboundary, LocalSystem, TwistedCohomology};

fn tori() -> Vec<(SimplicialComplex, IntegerOneCocycle)> {
    vec![
        (fixtures::circle(), fixtures::circle_generator()),
        (fixtures::torus(2, 3), fixtures::torus_class(2, 3, &[1, 0])),
        (
            fixtures::torus(3, 3),
            fixtures::torus_class(3, 3, &[0, 1, 0]),
        ),
    ]
}

fn betti(k: &SimplicialComplex, xi: &IntegerOneCocycle, a: BigRational) -> Vec<usize> {
    twisted_betti_numbers(k, &LocalSystem::new(k, xi, a).unwrap())
}

#[test]
fn nontrivial_monodromy_kills_torus_cohomology() {
    for (k, xi) in tori() {
        for a in [int(2), rat(1, 2), int(3)] {
            assert!(betti(&k, &xi, a.clone()).iter().all(|b| *b == 0), "a = {a}");
        }
        assert_eq!(betti(&k, &xi, int(1)), k.betti_numbers());
    }
}

#[test]
fn euler_characteristic_ignores_monodromy() {
    let mut cases = tori();
    cases.push(fixtures::wedge_with_circle(&fixtures::torus(2, 3)));
    cases.push(fixtures::doubling_mapping_torus());
    for (k, xi) in cases {
        let chi = |a: BigRational| {
            TwistedCohomology::new(&k, &LocalSystem::new(&k, &xi, a).unwrap())
                .euler_characteristic()
        };
        let base = chi(int(1));
        let ordinary: i64 = k
            .betti_numbers()
            .iter()
            .enumerate()
            .map(|(q, b)| if q % 2 == 0 { *b as i64 } else { -(*b as i64) })
            .sum();
        assert_eq!(base, ordinary);
        for a in [int(2), rat(1, 2), int(3), int(-2)] {
            assert_eq!(chi(a), base);
        }
    }
}

#[test]
fn wedge_keeps_the_torus_part_away_from_one() {
    let (k, xi) = fixtures::wedge_with_circle(&fixtures::torus(2, 3));
    // Mayer-Vietoris over the wedge point: the circle is acyclic at a = 2,
    // so only H^1 and H^2 of the torus remain.
    assert_eq!(betti(&k, &xi, int(2)), vec![0, 2, 1]);
    assert_eq!(betti(&k, &xi, int(1)), vec![1, 3, 1]);
}

#[test]
fn subdivision_keeps_betti_numbers_and_lower_bounds() {
    let mut cases = tori();
    cases.truncate(2);
    cases.push(fixtures::wedge_with_circle(&fixtures::torus(2, 3)));
    let opts = ReportOptions {
        pool: vec![int(2), rat(1, 2)],
        ..ReportOptions::default()
    };
    for (k, xi) in cases {
        let sd = barycentric_subdivision(&k);
        let xi_sd = sd.pull_back(&xi);
        for a in [int(1), int(2), rat(1, 2), int(-2)] {
            assert_eq!(betti(&k, &xi, a.clone()), betti(&sd.complex, &xi_sd, a));
        }
        let before = report(&k, &xi, &opts).unwrap();
        let after = report(&sd.complex, &xi_sd, &opts).unwrap();
        assert_eq!(before.lower, after.lower);
    }
}

mod properties {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn coboundary_squares_to_zero(which in 0usize..4, p in -4i64..=4, d in 1i64..=3) {
            prop_assume!(p != 0);
            let (k, xi) = match which {
                0 => (fixtures::circle(), fixtures::circle_generator()),
                1 => (fixtures::torus(2, 3), fixtures::torus_class(2, 3, &[1, -1])),
                2 => fixtures::doubling_mapping_torus(),
                _ => fixtures::wedge_with_circle(&fixtures::torus(2, 3)),
            };
            let s = LocalSystem::new(&k, &xi, rat(p, d)).unwrap();
            for q in 0..k.dim().unwrap().saturating_sub(1) {
                let first = twisted_coboundary(&k, &s, q).to_dense();
                let second = twisted_coboundary(&k, &s, q + 1).to_dense();
                prop_assert!((&second * &first).is_zero_matrix(), "degree {}", q);
            }
        }
    }
}
