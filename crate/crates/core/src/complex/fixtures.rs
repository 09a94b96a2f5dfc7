//! Small complexes with known answers, used by tests and the CLI.

use super::{IntegerOneCocycle, Simplex, SimplicialComplex};

/// Hollow triangle.
pub fn circle() -> SimplicialComplex {
    SimplicialComplex::from_facets([vec![0, 1], vec![1, 2], vec![0, 2]])
}

/// Generator of `H^1` of [`circle`]: the loop `0 -> 1 -> 2 -> 0` has period 1.
pub fn circle_generator() -> IntegerOneCocycle {
    IntegerOneCocycle::from_weights([(0, 1, 1)])
}

pub fn full_triangle() -> SimplicialComplex {
    SimplicialComplex::from_facets([vec![0, 1, 2]])
}

/// Kuhn triangulation of the `n`-torus on the `m^n` grid (`m >= 3`).
/// Grid point `(x_1, ..., x_n)` has id `sum x_k m^(k-1)`.
pub fn torus(n: usize, m: usize) -> SimplicialComplex {
    assert!(m >= 3, "grid too coarse for a simplicial torus");
    let total = m.pow(n as u32);
    let mut facets = Vec::new();
    for base in 0..total {
        let coords = grid_coords(base, n, m);
        for perm in permutations(n) {
            let mut cur = coords.clone();
            let mut s = vec![grid_id(&cur, m)];
            for &axis in &perm {
                cur[axis] = (cur[axis] + 1) % m;
                s.push(grid_id(&cur, m));
            }
            facets.push(s);
        }
    }
    SimplicialComplex::from_facets(facets)
}

/// Integer cocycle on [`torus`] with period `c_k` around the `k`-th circle.
pub fn torus_class(n: usize, m: usize, c: &[i64]) -> IntegerOneCocycle {
    assert_eq!(c.len(), n);
    let k = torus(n, m);
    IntegerOneCocycle::from_weights(k.simplices(1).iter().map(|e| {
        let (u, v) = (grid_coords(e[0], n, m), grid_coords(e[1], n, m));
        let mut w = 0i64;
        for axis in 0..n {
            let raw = v[axis] as i64 - u[axis] as i64;
            // The step along the edge is -1, 0 or +1; wrapping contributes
            // one full turn.
            let step = (raw + 1).rem_euclid(m as i64) - 1;
            w += c[axis] * (step - raw) / m as i64;
        }
        (e[0], e[1], w)
    }))
}

fn grid_coords(mut id: usize, n: usize, m: usize) -> Vec<usize> {
    (0..n)
        .map(|_| {
            let x = id % m;
            id /= m;
            x
        })
        .collect()
}

fn grid_id(coords: &[usize], m: usize) -> usize {
    coords.iter().rev().fold(0, |acc, &x| acc * m + x)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// `Y v S^1`: a hollow triangle glued to vertex 0 of `y`. Returns the complex
/// and the generator of the circle summand (zero on `Y`).
pub fn wedge_with_circle(y: &SimplicialComplex) -> (SimplicialComplex, IntegerOneCocycle) {
    let n = y.vertex_count();
    let mut facets: Vec<Simplex> = y.maximal_simplices();
    facets.extend([vec![0, n], vec![n, n + 1], vec![0, n + 1]]);
    let xi = IntegerOneCocycle::from_weights([(0, n, 1)]);
    (SimplicialComplex::from_facets(facets), xi)
}

/// Mapping torus of the degree-2 self-map of the circle, with the class
/// dual to the fiber.
///
/// Layers, each a circle: `a` (3 vertices), `b` (6, a subdivision of `a`),
/// `c` (6, a copy of `b`), `d` (3). `c_i` collapses onto `d_{i mod 3}`, so
/// the fiber wraps twice; `d` is glued back to `a` by a product cylinder,
/// across which the class is `+1` on `a -> d`.
pub fn doubling_mapping_torus() -> (SimplicialComplex, IntegerOneCocycle) {
    let a = |j: usize| j % 3;
    let b = |j: usize| 3 + j % 6;
    let c = |j: usize| 9 + j % 6;
    let d = |j: usize| 15 + j % 3;
    let mut f: Vec<Simplex> = Vec::new();
    for j in 0..3 {
        f.push(vec![a(j), b(2 * j), b(2 * j + 1)]);
        f.push(vec![a(j), b(2 * j + 1), a(j + 1)]);
        f.push(vec![a(j + 1), b(2 * j + 1), b(2 * j + 2)]);
    }
    for i in 0..6 {
        f.push(vec![b(i), b(i + 1), c(i + 1)]);
        f.push(vec![b(i), c(i), c(i + 1)]);
    }
    for i in 0..6 {
        f.push(vec![c(i), c(i + 1), d(i + 1)]);
        f.push(vec![c(i), d(i), d(i + 1)]);
    }
    let mut xi = IntegerOneCocycle::zero();
    for i in 0..3 {
        f.push(vec![d(i), d(i + 1), a(i + 1)]);
        f.push(vec![d(i), a(i), a(i + 1)]);
        xi.set(a(i), d(i), 1);
        xi.set(a(i + 1), d(i), 1);
    }
    (SimplicialComplex::from_facets(f), xi)
}

/// The fiber circle `a_0 -> a_1 -> a_2 -> a_0` of [`doubling_mapping_torus`]
/// as a vertex loop.
pub fn doubling_fiber_loop() -> Vec<usize> {
    vec![0, 1, 2, 0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_vertex_torus() {
        let k = torus(2, 3);
        assert_eq!((k.count(0), k.count(1), k.count(2)), (9, 27, 18));
        assert!(k.validate().ok);
        assert_eq!(k.betti_numbers(), vec![1, 2, 1]);
    }

    #[test]
    fn three_torus() {
        let k = torus(3, 3);
        assert_eq!(k.count(0), 27);
        assert_eq!(k.count(3), 162);
        assert!(k.validate().ok);
        assert_eq!(k.betti_numbers(), vec![1, 3, 3, 1]);
    }

    #[test]
    fn torus_classes_are_cocycles() {
        let k = torus(2, 3);
        let xi = torus_class(2, 3, &[1, 0]);
        xi.check(&k).unwrap();
        assert_eq!(xi.period_gcd(&k), 1);
        let k3 = torus(3, 3);
        torus_class(3, 3, &[2, -1, 4]).check(&k3).unwrap();
    }

    #[test]
    fn doubling_mapping_torus_homology() {
        let (k, xi) = doubling_mapping_torus();
        assert!(k.validate().ok);
        xi.check(&k).unwrap();
        // f_* - 1 = 1 on the fiber, so only the base circle survives in H_1.
        assert_eq!(k.betti_numbers(), vec![1, 1, 0]);
        assert_eq!(xi.period_gcd(&k), 1);
    }

    #[test]
    fn wedge_betti() {
        let (k, xi) = wedge_with_circle(&torus(2, 3));
        xi.check(&k).unwrap();
        assert_eq!(k.betti_numbers(), vec![1, 3, 1]);
    }
}
