use std::collections::{BTreeMap, VecDeque};

use num_integer::Integer;

use super::{ComplexError, SimplicialComplex};

/// Integer weights on oriented edges; `w(j, i) = -w(i, j)`, absent edges
/// weigh zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntegerOneCocycle {
    weights: BTreeMap<(usize, usize), i64>,
}

impl IntegerOneCocycle {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_weights<I: IntoIterator<Item = (usize, usize, i64)>>(weights: I) -> Self {
        let mut c = Self::zero();
        for (i, j, w) in weights {
            c.set(i, j, w);
        }
        c
    }

    /// Sets `w(i, j) = value`, hence `w(j, i) = -value`.
    pub fn set(&mut self, i: usize, j: usize, value: i64) {
        let (key, v) = if i < j {
            ((i, j), value)
        } else {
            ((j, i), -value)
        };
        if v == 0 {
            self.weights.remove(&key);
        } else {
            self.weights.insert(key, v);
        }
    }

    pub fn weight(&self, i: usize, j: usize) -> i64 {
        if i < j {
            self.weights.get(&(i, j)).copied().unwrap_or(0)
        } else {
            -self.weights.get(&(j, i)).copied().unwrap_or(0)
        }
    }

    /// Nonzero weights on positively oriented edges `(i < j)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.weights.iter().map(|(&(i, j), &w)| (i, j, w))
    }

    pub fn is_zero(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn scaled(&self, lambda: i64) -> Self {
        Self::from_weights(self.entries().map(|(i, j, w)| (i, j, w * lambda)))
    }

    /// Checks that every weighted pair is an edge and that the cocycle
    /// condition holds on every 2-simplex.
    pub fn check(&self, k: &SimplicialComplex) -> Result<(), ComplexError> {
        if let Some((i, j, _)) = self
            .entries()
            .find(|(i, j, _)| k.index_of(&[*i, *j]).is_none())
        {
            return Err(ComplexError::NotAnEdge(i, j));
        }
        for t in k.simplices(2) {
            let (a, b, c) = (t[0], t[1], t[2]);
            if self.weight(a, b) + self.weight(b, c) - self.weight(a, c) != 0 {
                return Err(ComplexError::NotACocycle(t.clone()));
            }
        }
        Ok(())
    }

    /// Values on the edges of `k` in edge order.
    pub fn edge_values(&self, k: &SimplicialComplex) -> Vec<i64> {
        k.simplices(1)
            .iter()
            .map(|e| self.weight(e[0], e[1]))
            .collect()
    }

    /// Sum of the weights along a path.
    pub fn integrate(&self, k: &SimplicialComplex, path: &EdgePath) -> Result<i64, ComplexError> {
        path.check(k)?;
        Ok(path.0.windows(2).map(|w| self.weight(w[0], w[1])).sum())
    }

    /// Value on a closed path.
    pub fn period(&self, k: &SimplicialComplex, path: &EdgePath) -> Result<i64, ComplexError> {
        if !path.is_closed() {
            return Err(ComplexError::NotClosed);
        }
        self.integrate(k, path)
    }

    /// Integer heights from a breadth-first spanning forest: each component
    /// is rooted at its smallest vertex with height 0 and
    /// `h(child) = h(parent) + w(parent, child)`.
    pub fn heights(&self, k: &SimplicialComplex) -> Vec<i64> {
        let forest = SpanningForest::new(k);
        let mut h = vec![0i64; k.vertex_count()];
        for &v in &forest.order {
            if let Some(p) = forest.parent[v] {
                h[v] = h[p] + self.weight(p, v);
            }
        }
        h
    }

    /// Potential `h` with `w(i, j) = h(j) - h(i)` on every edge, if one
    /// exists.
    pub fn potential(&self, k: &SimplicialComplex) -> Option<Vec<i64>> {
        let h = self.heights(k);
        k.simplices(1)
            .iter()
            .all(|e| self.weight(e[0], e[1]) == h[e[1]] - h[e[0]])
            .then_some(h)
    }

    /// The cohomologous cocycle vanishing on the spanning forest:
    /// `w'(u, v) = w(u, v) + h(u) - h(v)`.
    pub fn tree_gauge(&self, k: &SimplicialComplex) -> Self {
        let h = self.heights(k);
        Self::from_weights(
            k.simplices(1)
                .iter()
                .map(|e| (e[0], e[1], self.weight(e[0], e[1]) + h[e[0]] - h[e[1]])),
        )
    }

    /// Gcd of the periods over the fundamental loops of the spanning forest;
    /// these loops generate the first homology.
    pub fn period_gcd(&self, k: &SimplicialComplex) -> i64 {
        self.tree_gauge(k)
            .entries()
            .fold(0i64, |g, (_, _, w)| g.gcd(&w))
    }
}

/// A vertex sequence along edges of a complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgePath(pub Vec<usize>);

impl EdgePath {
    pub fn new(vertices: Vec<usize>) -> Self {
        Self(vertices)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn is_closed(&self) -> bool {
        !self.0.is_empty() && self.0.first() == self.0.last()
    }

    pub fn reversed(&self) -> Self {
        Self(self.0.iter().rev().copied().collect())
    }

    /// `self` followed by `other`; the end of `self` must be the start of
    /// `other`.
    pub fn concat(&self, other: &Self) -> Self {
        assert_eq!(self.0.last(), other.0.first(), "paths do not meet");
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0[1..]);
        Self(v)
    }

    pub fn check(&self, k: &SimplicialComplex) -> Result<(), ComplexError> {
        if self.0.is_empty() {
            return Err(ComplexError::EmptyPath);
        }
        for w in self.0.windows(2) {
            if w[0] == w[1] || k.edge(w[0], w[1]).is_none() {
                return Err(ComplexError::NotAnEdge(w[0], w[1]));
            }
        }
        Ok(())
    }
}

/// Breadth-first spanning forest of the 1-skeleton, neighbours visited in
/// increasing order.
pub(crate) struct SpanningForest {
    pub parent: Vec<Option<usize>>,
    /// Vertices in visiting order; parents precede children.
    pub order: Vec<usize>,
}

impl SpanningForest {
    pub fn new(k: &SimplicialComplex) -> Self {
        let adj = k.adjacency();
        let n = adj.len();
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                order.push(u);
                for &w in &adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        parent[w] = Some(u);
                        queue.push_back(w);
                    }
                }
            }
        }
        Self { parent, order }
    }

    /// Tree path from the root of `v`'s component to `v`.
    pub fn path_from_root(&self, v: usize) -> Vec<usize> {
        let mut p = vec![v];
        let mut cur = v;
        while let Some(u) = self.parent[cur] {
            p.push(u);
            cur = u;
        }
        p.reverse();
        p
    }

    pub fn is_tree_edge(&self, u: usize, v: usize) -> bool {
        self.parent[v] == Some(u) || self.parent[u] == Some(v)
    }

    /// Closed loop `root -> u -> v -> root` through the non-tree edge `(u, v)`.
    pub fn fundamental_loop(&self, u: usize, v: usize) -> EdgePath {
        let mut p = self.path_from_root(u);
        let mut back = self.path_from_root(v);
        back.reverse();
        p.extend(back);
        EdgePath(p)
    }
}

/// Fundamental loops of the spanning forest, one per non-tree edge.
pub fn fundamental_loops(k: &SimplicialComplex) -> Vec<EdgePath> {
    let forest = SpanningForest::new(k);
    k.simplices(1)
        .iter()
        .filter(|e| !forest.is_tree_edge(e[0], e[1]))
        .map(|e| forest.fundamental_loop(e[0], e[1]))
        .collect()
}
