mod common;

use catxi::algebra::rational::{int, rat};
use catxi::algebra::{BigRational, IntPoly};
use catxi::complex::{barycentric_subdivision, fixtures, IntegerOneCocycle, SimplicialComplex};
use catxi::cover::{
    build_laurent_complex, homology_module, integer_chain, loop_chain, movability_verdict,
    move_cycle_witness, End, LaurentChain, LaurentChainComplex, Movability, MoveWitness,
};
use catxi::twisted::{twisted_betti, LocalSystem};
use num_traits::Zero;

fn poly(c: &[i64]) -> IntPoly {
    IntPoly::from_i64(c)
}

fn circle() -> (LaurentChainComplex, LaurentChain) {
    (
        build_laurent_complex(&fixtures::circle(), &fixtures::circle_generator()).unwrap(),
        integer_chain(&[(0, 1)]),
    )
}

fn doubling(sign: i64) -> (LaurentChainComplex, LaurentChain) {
    let (k, xi) = fixtures::doubling_mapping_torus();
    let l = build_laurent_complex(&k, &xi.scaled(sign)).unwrap();
    let z = loop_chain(&l, &fixtures::doubling_fiber_loop()).unwrap();
    (l, z)
}

#[test]
fn circle_module_is_a_unit_factor() {
    let (l, z) = circle();
    let h0 = homology_module(&l, 0).unwrap();
    assert_eq!(h0.free_rank, 0);
    assert_eq!(h0.factors.len(), 1);
    assert_eq!(h0.factors[0].factor, poly(&[-1, 1]));
    assert!(h0.factors[0].roots_are_dirichlet_units);
    assert!(homology_module(&l, 1).unwrap().is_zero());
    let v = movability_verdict(&l, 0, &z).unwrap();
    assert_eq!(
        (v.minus_end, v.plus_end),
        (Movability::Yes, Movability::Yes)
    );
}

#[test]
fn doubling_moves_down_and_negation_swaps_ends() {
    let (l, z) = doubling(1);
    let h1 = homology_module(&l, 1).unwrap();
    assert_eq!(h1.factors.len(), 1);
    let f = &h1.factors[0];
    assert_eq!(f.factor, poly(&[-2, 1]));
    assert!(
        f.roots_are_algebraic_integers
            && !f.roots_are_inverse_algebraic_integers
            && !f.roots_are_dirichlet_units
    );
    let v = movability_verdict(&l, 1, &z).unwrap();
    assert_eq!((v.minus_end, v.plus_end), (Movability::Yes, Movability::No));

    let (l, z) = doubling(-1);
    assert_eq!(
        homology_module(&l, 1).unwrap().factors[0].factor,
        poly(&[-1, 2])
    );
    let v = movability_verdict(&l, 1, &z).unwrap();
    assert_eq!((v.minus_end, v.plus_end), (Movability::No, Movability::Yes));

    let (k, xi) = (fixtures::circle(), fixtures::circle_generator().scaled(-1));
    let l = build_laurent_complex(&k, &xi).unwrap();
    let v = movability_verdict(&l, 0, &integer_chain(&[(0, 1)])).unwrap();
    assert_eq!(
        (v.minus_end, v.plus_end),
        (Movability::Yes, Movability::Yes)
    );
}

#[test]
fn zero_class_is_refused() {
    let l = build_laurent_complex(&fixtures::circle(), &IntegerOneCocycle::zero()).unwrap();
    assert!(movability_verdict(&l, 0, &integer_chain(&[(0, 1)])).is_err());
}

fn check_witness(l: &LaurentChainComplex, w: &MoveWitness, z: &LaurentChain, n: i64) {
    common::check_witness(l, w, z, n).unwrap();
}

#[test]
fn witnesses_are_exact() {
    for n in [3, 5] {
        let (l, z) = circle();
        for end in [End::Minus, End::Plus] {
            check_witness(&l, &move_cycle_witness(&l, 0, &z, end, n).unwrap(), &z, n);
        }
        let (l, z) = doubling(1);
        check_witness(
            &l,
            &move_cycle_witness(&l, 1, &z, End::Minus, n).unwrap(),
            &z,
            n,
        );
        assert!(move_cycle_witness(&l, 1, &z, End::Plus, n).is_err());
        let (l, z) = doubling(-1);
        check_witness(
            &l,
            &move_cycle_witness(&l, 1, &z, End::Plus, n).unwrap(),
            &z,
            n,
        );
    }
}

/// `b_q(a) = free_q + #{d | H_q : d(a) = 0} + #{d | H_{q-1} : d(a) = 0}`.
fn check_universal_coefficients(
    k: &SimplicialComplex,
    xi: &IntegerOneCocycle,
    points: &[BigRational],
) {
    let l = build_laurent_complex(k, xi).unwrap();
    let dim = k.dim().unwrap();
    let modules: Vec<_> = (0..=dim).map(|q| homology_module(&l, q).unwrap()).collect();
    let vanishing = |q: usize, a: &BigRational| -> usize {
        modules[q]
            .invariant_factors
            .iter()
            .filter(|d| eval(d, a).is_zero())
            .count()
    };
    for a in points {
        let s = LocalSystem::new(k, xi, a.clone()).unwrap();
        for q in 0..=dim {
            let expected = modules[q].free_rank
                + vanishing(q, a)
                + if q > 0 { vanishing(q - 1, a) } else { 0 };
            assert_eq!(twisted_betti(k, &s, q), expected, "degree {q} at a = {a}");
        }
    }
    let chi: i64 = k
        .betti_numbers()
        .iter()
        .enumerate()
        .map(|(q, b)| if q % 2 == 0 { *b as i64 } else { -(*b as i64) })
        .sum();
    let free_chi: i64 = modules
        .iter()
        .map(|m| {
            if m.q % 2 == 0 {
                m.free_rank as i64
            } else {
                -(m.free_rank as i64)
            }
        })
        .sum();
    assert_eq!(chi, free_chi);
}

fn eval(p: &IntPoly, a: &BigRational) -> BigRational {
    p.coeffs().iter().rev().fold(BigRational::zero(), |acc, c| {
        acc * a + BigRational::from_integer(c.clone())
    })
}

#[test]
fn modules_agree_with_twisted_betti_numbers() {
    let points = [int(1), int(2), rat(1, 2), int(3), int(-1)];
    check_universal_coefficients(&fixtures::circle(), &fixtures::circle_generator(), &points);
    let (k, xi) = fixtures::doubling_mapping_torus();
    check_universal_coefficients(&k, &xi, &points);
    check_universal_coefficients(
        &fixtures::torus(2, 3),
        &fixtures::torus_class(2, 3, &[1, 0]),
        &points,
    );
    let (k, xi) = fixtures::wedge_with_circle(&fixtures::torus(2, 3));
    check_universal_coefficients(&k, &xi, &points);
}

#[test]
fn subdivision_keeps_the_module() {
    let cases = [
        (fixtures::circle(), fixtures::circle_generator()),
        fixtures::doubling_mapping_torus(),
    ];
    for (k, xi) in cases {
        let sd = barycentric_subdivision(&k);
        let a = build_laurent_complex(&k, &xi).unwrap();
        let b = build_laurent_complex(&sd.complex, &sd.pull_back(&xi)).unwrap();
        for q in 0..=k.dim().unwrap() {
            let (ma, mb) = (
                homology_module(&a, q).unwrap(),
                homology_module(&b, q).unwrap(),
            );
            assert_eq!(
                (ma.free_rank, &ma.invariant_factors),
                (mb.free_rank, &mb.invariant_factors),
                "degree {q}"
            );
        }
    }
}
