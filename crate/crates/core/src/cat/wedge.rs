//! Recognition of `Y v S^1` with the class carried by the circle, and the
//! resulting value `cat(Y) - 1`.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use super::search::cup_length;
use super::CatError;
use crate::complex::{EdgePath, IntegerOneCocycle, SimplicialComplex};
use crate::twisted::Subcomplex;

/// A cut vertex splitting off a circle that carries the whole class.
#[derive(Clone, Debug)]
pub struct WedgeSplit {
    pub vertex: usize,
    /// The circle as a closed vertex loop starting and ending at `vertex`.
    pub circle: Vec<usize>,
    /// Vertices of `Y`, increasing; `vertex` is among them.
    pub y_vertices: Vec<usize>,
    /// `Y` relabelled onto `0..y_vertices.len()`.
    pub y: SimplicialComplex,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WedgeBound {
    pub cut_vertex: usize,
    pub y_dim: usize,
    pub y_cup_length: usize,
    /// Bracket for `cat(Y)`.
    pub cat_y_lower: usize,
    pub cat_y_upper: usize,
    pub cat_y_supplied: Option<usize>,
    /// Resulting interval for the category of the class.
    pub lower: usize,
    pub upper: usize,
    pub exact: Option<usize>,
}

fn components_without(adj: &[Vec<usize>], cut: usize) -> Vec<Vec<usize>> {
    let mut seen = vec![false; adj.len()];
    seen[cut] = true;
    let mut out = Vec::new();
    for s in 0..adj.len() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    comp.push(v);
                    queue.push_back(v);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Walks the cycle through `cut` and `comp`, if the simplices meeting
/// `comp` are exactly the edges of such a cycle.
fn circle_through(
    k: &SimplicialComplex,
    adj: &[Vec<usize>],
    cut: usize,
    comp: &[usize],
) -> Option<Vec<usize>> {
    let inside: BTreeSet<usize> = comp.iter().copied().collect();
    for q in 2..=k.dim().unwrap_or(0) {
        if k.simplices(q)
            .iter()
            .any(|s| s.iter().any(|v| inside.contains(v)))
        {
            return None;
        }
    }
    if comp.iter().any(|v| adj[*v].len() != 2) {
        return None;
    }
    let entries: Vec<usize> = adj[cut]
        .iter()
        .copied()
        .filter(|v| inside.contains(v))
        .collect();
    if entries.len() != 2 {
        return None;
    }
    let mut path = vec![cut, entries[0]];
    while *path.last().expect("nonempty") != cut {
        let cur = path[path.len() - 1];
        let prev = path[path.len() - 2];
        let next = adj[cur].iter().copied().find(|v| *v != prev)?;
        path.push(next);
        if path.len() > comp.len() + 2 {
            return None;
        }
    }
    (path.len() == comp.len() + 2).then_some(path)
}

fn relabel(k: &SimplicialComplex, vertices: &[usize]) -> SimplicialComplex {
    let mut map = vec![usize::MAX; k.vertex_count()];
    for (i, v) in vertices.iter().enumerate() {
        map[*v] = i;
    }
    let facets = k
        .maximal_simplices()
        .into_iter()
        .filter(|s| s.iter().all(|v| map[*v] != usize::MAX))
        .map(|s| s.iter().map(|v| map[*v]).collect::<Vec<_>>());
    let mut y = SimplicialComplex::from_facets(facets);
    if y.vertex_count() == 0 && vertices.len() == 1 {
        y = SimplicialComplex::from_facets([vec![0]]);
    }
    y
}

/// Finds the first cut vertex (in vertex order) splitting off a circle on
/// which the class has nonzero period while vanishing on the rest.
pub fn detect_wedge(k: &SimplicialComplex, xi: &IntegerOneCocycle) -> Result<WedgeSplit, CatError> {
    let adj = k.adjacency();
    let mut class_on_rest = false;
    for cut in 0..k.vertex_count() {
        for comp in components_without(&adj, cut) {
            let Some(circle) = circle_through(k, &adj, cut, &comp) else {
                continue;
            };
            if xi.period(k, &EdgePath::new(circle.clone()))? == 0 {
                continue;
            }
            let inside: BTreeSet<usize> = comp.iter().copied().collect();
            let y_vertices: Vec<usize> = (0..k.vertex_count())
                .filter(|v| !inside.contains(v))
                .collect();
            if !Subcomplex::induced(k, &y_vertices, xi).xi_vanishes() {
                class_on_rest = true;
                continue;
            }
            let y = relabel(k, &y_vertices);
            return Ok(WedgeSplit {
                vertex: cut,
                circle,
                y_vertices,
                y,
            });
        }
    }
    Err(if class_on_rest {
        CatError::ClassOnWedgeSummand
    } else {
        CatError::NoWedge
    })
}

/// `cat(Y) - 1`, exact when `cat(Y)` is supplied or pinned down by the
/// bracket `cup_length(Y) + 1 <= cat(Y) <= dim Y + 1`, otherwise the
/// induced interval.
pub fn wedge_formula(
    k: &SimplicialComplex,
    xi: &IntegerOneCocycle,
    cat_y: Option<usize>,
) -> Result<WedgeBound, CatError> {
    let split = detect_wedge(k, xi)?;
    let y_dim = split.y.dim().unwrap_or(0);
    let y_cup_length = cup_length(&split.y).r;
    let (lo, hi) = (y_cup_length + 1, y_dim + 1);
    if let Some(c) = cat_y {
        if c < lo || c > hi {
            return Err(CatError::CatOutOfRange {
                value: c,
                lower: lo,
                upper: hi,
            });
        }
    }
    let (lower, upper) = match cat_y {
        Some(c) => (c - 1, c - 1),
        None => (lo - 1, hi - 1),
    };
    Ok(WedgeBound {
        cut_vertex: split.vertex,
        y_dim,
        y_cup_length,
        cat_y_lower: lo,
        cat_y_upper: hi,
        cat_y_supplied: cat_y,
        lower,
        upper,
        exact: (lower == upper).then_some(lower),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures;

    #[test]
    fn torus_wedge_circle() {
        let (k, xi) = fixtures::wedge_with_circle(&fixtures::torus(2, 3));
        let split = detect_wedge(&k, &xi).unwrap();
        assert_eq!(split.vertex, 0);
        assert_eq!(split.y.betti_numbers(), vec![1, 2, 1]);
        let b = wedge_formula(&k, &xi, Some(3)).unwrap();
        assert_eq!(b.exact, Some(2));
        // The bracket alone already pins cat(T^2) = 3.
        assert_eq!(wedge_formula(&k, &xi, None).unwrap().exact, Some(2));
    }

    #[test]
    fn bare_circle_is_a_wedge_with_a_point() {
        let k = fixtures::circle();
        let b = wedge_formula(&k, &fixtures::circle_generator(), None).unwrap();
        assert_eq!((b.y_dim, b.exact), (0, Some(0)));
    }

    #[test]
    fn class_on_the_torus_part_is_rejected() {
        let y = fixtures::torus(2, 3);
        let (k, _) = fixtures::wedge_with_circle(&y);
        let mut xi = fixtures::torus_class(2, 3, &[1, 0]);
        let n = y.vertex_count();
        xi.set(0, n, 1);
        assert_eq!(
            detect_wedge(&k, &xi).unwrap_err(),
            CatError::ClassOnWedgeSummand
        );
        assert_eq!(
            detect_wedge(&y, &fixtures::torus_class(2, 3, &[1, 0])).unwrap_err(),
            CatError::NoWedge
        );
    }

    #[test]
    fn supplied_category_must_fit_the_bracket() {
        let (k, xi) = fixtures::wedge_with_circle(&fixtures::torus(2, 3));
        assert!(matches!(
            wedge_formula(&k, &xi, Some(5)),
            Err(CatError::CatOutOfRange { .. })
        ));
    }
}
