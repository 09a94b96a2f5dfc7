use super::{IntegerOneCocycle, Simplex, SimplicialComplex};

/// Barycentric subdivision together with the simplicial map back to the
/// original complex sending each barycenter to the smallest vertex of its
/// carrier.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub complex: SimplicialComplex,
    /// Simplex of the original complex whose barycenter is each new vertex.
    pub carrier: Vec<Simplex>,
}

impl Subdivision {
    /// Image of a new vertex under the simplicial approximation of the
    /// identity.
    pub fn vertex_image(&self, v: usize) -> usize {
        self.carrier[v][0]
    }

    /// Pullback of a cocycle along [`vertex_image`](Self::vertex_image);
    /// represents the same class.
    pub fn pull_back(&self, xi: &IntegerOneCocycle) -> IntegerOneCocycle {
        IntegerOneCocycle::from_weights(self.complex.simplices(1).iter().map(|e| {
            (
                e[0],
                e[1],
                xi.weight(self.vertex_image(e[0]), self.vertex_image(e[1])),
            )
        }))
    }
}

pub fn barycentric_subdivision(k: &SimplicialComplex) -> Subdivision {
    let dim = k.dim().unwrap_or(0);
    let mut offset = vec![0usize; dim + 2];
    for q in 0..=dim {
        offset[q + 1] = offset[q] + k.count(q);
    }
    let carrier: Vec<Simplex> = (0..=dim)
        .flat_map(|q| k.simplices(q).iter().cloned())
        .collect();
    let id = |s: &[usize]| offset[s.len() - 1] + k.index_of(s).expect("face present");

    let mut facets = Vec::new();
    for top in k.maximal_simplices() {
        // Every ordering of the vertices gives one maximal flag.
        for perm in permutations(&top) {
            let flag: Vec<usize> = (1..=perm.len())
                .map(|len| {
                    let mut s = perm[..len].to_vec();
                    s.sort_unstable();
                    id(&s)
                })
                .collect();
            facets.push(flag);
        }
    }
    Subdivision {
        complex: SimplicialComplex::from_facets(facets),
        carrier,
    }
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, head);
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_subdivides_into_six() {
        let k = SimplicialComplex::from_facets([vec![0, 1, 2]]);
        let sd = barycentric_subdivision(&k);
        assert_eq!(sd.complex.count(0), 7);
        assert_eq!(sd.complex.count(2), 6);
        assert!(sd.complex.validate().ok);
        assert_eq!(sd.complex.betti_numbers(), vec![1, 0, 0]);
    }

    #[test]
    fn circle_pullback_keeps_period() {
        let k = SimplicialComplex::from_facets([vec![0, 1], vec![1, 2], vec![0, 2]]);
        let xi = IntegerOneCocycle::from_weights([(0, 1, 1)]);
        let sd = barycentric_subdivision(&k);
        let pulled = sd.pull_back(&xi);
        pulled.check(&sd.complex).unwrap();
        assert_eq!(sd.complex.betti_numbers(), vec![1, 1]);
        assert_eq!(pulled.period_gcd(&sd.complex), 1);
    }
}
