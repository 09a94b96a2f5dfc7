use std::collections::VecDeque;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use rayon::prelude::*;
use serde::Serialize;

use super::field::{flow_map, torus_dist, TorusVectorField, STEP};
use super::DynError;

/// Slack for comparing box-center distances against multiples of `delta`.
const DIST_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridParams {
    /// Requested box side; the grid uses `1 / round(1 / delta)`.
    pub delta: f64,
    pub time: f64,
    /// Sample points per box along each axis.
    pub samples_per_box: usize,
    /// Radius around each image point, as a fraction of the box side.
    pub fattening: f64,
    /// Cap on the total number of RK4 steps.
    pub step_budget: u64,
}

impl Default for GridParams {
    fn default() -> Self {
        Self {
            delta: 0.05,
            time: 1.0,
            samples_per_box: 2,
            fattening: 0.5,
            step_budget: 50_000_000,
        }
    }
}

impl GridParams {
    pub fn new(delta: f64, time: f64) -> Self {
        Self {
            delta,
            time,
            ..Self::default()
        }
    }
}

/// Boxes of side `delta` on `T^n` with an edge `A -> B` whenever the time-T
/// image of a sample of `A` lies within the fattening radius of `B`.
#[derive(Clone, Debug)]
pub struct BoxDigraph {
    dim: usize,
    per_axis: usize,
    time: f64,
    fattening: f64,
    succ: Vec<Vec<usize>>,
    component: Vec<usize>,
    recurrent: Vec<bool>,
}

impl BoxDigraph {
    /// Assembles the graph from explicit successor lists and labels its
    /// strongly connected components.
    pub fn from_successors(
        dim: usize,
        per_axis: usize,
        time: f64,
        mut succ: Vec<Vec<usize>>,
    ) -> Self {
        assert_eq!(
            succ.len(),
            per_axis.pow(dim as u32),
            "one successor list per box"
        );
        for s in &mut succ {
            s.sort_unstable();
            s.dedup();
        }
        let mut g = DiGraph::<(), ()>::with_capacity(succ.len(), 0);
        let nodes: Vec<_> = (0..succ.len()).map(|_| g.add_node(())).collect();
        for (a, s) in succ.iter().enumerate() {
            for &b in s {
                g.add_edge(nodes[a], nodes[b], ());
            }
        }
        let mut component = vec![0; succ.len()];
        let mut recurrent = vec![false; succ.len()];
        let mut sccs: Vec<Vec<usize>> = tarjan_scc(&g)
            .into_iter()
            .map(|c| c.into_iter().map(|n| n.index()).collect())
            .collect();
        for c in &mut sccs {
            c.sort_unstable();
        }
        sccs.sort_unstable();
        for (id, c) in sccs.iter().enumerate() {
            for &b in c {
                component[b] = id;
                recurrent[b] = c.len() > 1 || succ[b].binary_search(&b).is_ok();
            }
        }
        Self {
            dim,
            per_axis,
            time,
            fattening: 0.0,
            succ,
            component,
            recurrent,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn per_axis(&self) -> usize {
        self.per_axis
    }

    /// Box side.
    pub fn delta(&self) -> f64 {
        1.0 / self.per_axis as f64
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn fattening_radius(&self) -> f64 {
        self.fattening
    }

    pub fn node_count(&self) -> usize {
        self.succ.len()
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn successors(&self, b: usize) -> &[usize] {
        &self.succ[b]
    }

    /// Component ids are ordered by the smallest box they contain.
    pub fn component(&self, b: usize) -> usize {
        self.component[b]
    }

    pub fn is_chain_recurrent(&self, b: usize) -> bool {
        self.recurrent[b]
    }

    fn coords(&self, b: usize) -> Vec<usize> {
        (0..self.dim)
            .map(|k| (b / self.per_axis.pow(k as u32)) % self.per_axis)
            .collect()
    }

    fn index(&self, c: &[usize]) -> usize {
        c.iter().rev().fold(0, |acc, i| acc * self.per_axis + i)
    }

    pub fn center(&self, b: usize) -> Vec<f64> {
        let h = self.delta();
        self.coords(b)
            .into_iter()
            .map(|i| (i as f64 + 0.5) * h)
            .collect()
    }

    pub fn box_of(&self, x: &[f64]) -> usize {
        let c: Vec<usize> = x
            .iter()
            .map(|t| {
                ((t.rem_euclid(1.0) * self.per_axis as f64).floor() as usize).min(self.per_axis - 1)
            })
            .collect();
        self.index(&c)
    }

    /// Torus distance from `x` to the closed box `b`.
    pub fn distance_to_box(&self, b: usize, x: &[f64]) -> f64 {
        let h = self.delta();
        self.coords(b)
            .into_iter()
            .zip(x)
            .map(|(i, t)| {
                let d = (t - (i as f64 + 0.5) * h).rem_euclid(1.0);
                let d = d.min(1.0 - d);
                (d - 0.5 * h).max(0.0).powi(2)
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Boxes at distance at most `r` from `x`.
    pub fn boxes_within(&self, x: &[f64], r: f64) -> Vec<usize> {
        let m = self.per_axis as i64;
        let h = self.delta();
        let ranges: Vec<Vec<usize>> = x
            .iter()
            .map(|t| {
                let lo = ((t - r) / h).floor() as i64;
                let hi = ((t + r) / h).floor() as i64;
                let mut v: Vec<usize> = (lo..=hi.min(lo + m - 1))
                    .map(|i| i.rem_euclid(m) as usize)
                    .collect();
                v.sort_unstable();
                v.dedup();
                v
            })
            .collect();
        let mut out = Vec::new();
        let mut idx = vec![0usize; self.dim];
        'outer: loop {
            let c: Vec<usize> = (0..self.dim).map(|k| ranges[k][idx[k]]).collect();
            let b = self.index(&c);
            if self.distance_to_box(b, x) <= r + DIST_SLACK {
                out.push(b);
            }
            for k in 0..self.dim {
                idx[k] += 1;
                if idx[k] < ranges[k].len() {
                    continue 'outer;
                }
                idx[k] = 0;
            }
            break;
        }
        out.sort_unstable();
        out
    }

    /// Boxes whose centers lie at distance in `(lo, hi]` from `x`.
    pub fn boxes_with_center_within(&self, x: &[f64], lo: f64, hi: f64) -> Vec<usize> {
        (0..self.node_count())
            .filter(|&b| {
                let d = torus_dist(&self.center(b), x);
                d > lo + DIST_SLACK && d <= hi + DIST_SLACK
            })
            .collect()
    }

    /// Boxes whose center is within one box side of `zero`.
    pub fn cluster(&self, zero: &[f64]) -> Vec<usize> {
        let mut c = self.boxes_with_center_within(zero, -1.0, self.delta());
        let own = self.box_of(zero);
        if let Err(pos) = c.binary_search(&own) {
            c.insert(pos, own);
        }
        c
    }

    /// Shortest path of at least one edge from `from` to a box in
    /// `targets`, inside the component of `from`.
    fn path_within(&self, from: usize, targets: &[usize]) -> Option<Vec<usize>> {
        let comp = self.component[from];
        let mut prev = vec![usize::MAX; self.node_count()];
        let mut queue = VecDeque::new();
        let visit = |u: usize, prev: &mut Vec<usize>, queue: &mut VecDeque<usize>| {
            for &w in &self.succ[u] {
                if self.component[w] == comp && prev[w] == usize::MAX {
                    prev[w] = u;
                    queue.push_back(w);
                }
            }
        };
        visit(from, &mut prev, &mut queue);
        while let Some(u) = queue.pop_front() {
            if targets.binary_search(&u).is_ok() {
                let mut path = vec![u];
                let mut w = u;
                loop {
                    w = prev[w];
                    path.push(w);
                    if w == from {
                        break;
                    }
                }
                path.reverse();
                return Some(path);
            }
            visit(u, &mut prev, &mut queue);
        }
        None
    }
}

/// Integrates a regular grid of samples in every box for time `T` and links
/// the box to all boxes near each image. The radius is `fattening * delta`
/// plus the half-diagonal of the largest image of a sample cell, so that
/// the image of the whole box is covered where the flow is tame. Declared
/// zeros are added as samples with the plain radius.
pub fn build_box_digraph(
    v: &TorusVectorField,
    params: &GridParams,
) -> Result<BoxDigraph, DynError> {
    let GridParams {
        delta,
        time,
        samples_per_box,
        fattening,
        step_budget,
    } = params.clone();
    if !(delta > 0.0 && delta <= 0.5) {
        return Err(DynError::DeltaOutOfRange(delta));
    }
    if !(time > 0.0 && time.is_finite()) {
        return Err(DynError::TimeNotPositive(time));
    }
    if samples_per_box == 0 || !(fattening >= 0.0 && fattening.is_finite()) {
        return Err(DynError::InvalidParameter(
            "samples_per_box must be positive and fattening finite".into(),
        ));
    }
    let n = v.dim();
    let per_axis = (1.0 / delta).round().max(2.0) as usize;
    let boxes = per_axis.pow(n as u32);
    let per_sample = (time / STEP).ceil() as u64;
    let samples = boxes as u64 * (samples_per_box as u64).pow(n as u32) + v.zeros().len() as u64;
    let required = samples.saturating_mul(per_sample);
    if required > step_budget {
        return Err(DynError::BudgetExceeded {
            required,
            cap: step_budget,
        });
    }
    let mut skeleton = BoxDigraph::from_successors(n, per_axis, time, vec![Vec::new(); boxes]);
    let h = skeleton.delta();
    skeleton.fattening = fattening * h;
    let radius = skeleton.fattening;
    let m = samples_per_box;
    let offsets: Vec<f64> = (0..m).map(|j| (j as f64 + 0.5) / m as f64).collect();

    let succ: Vec<Vec<usize>> = (0..boxes)
        .into_par_iter()
        .map(|b| {
            let corner: Vec<f64> = skeleton
                .coords(b)
                .into_iter()
                .map(|i| i as f64 * h)
                .collect();
            let mut points: Vec<Vec<f64>> = Vec::with_capacity(m.pow(n as u32));
            for s in 0..m.pow(n as u32) {
                points.push(
                    (0..n)
                        .map(|k| corner[k] + offsets[(s / m.pow(k as u32)) % m] * h)
                        .collect(),
                );
            }
            let images = points
                .iter()
                .map(|p| flow_map(v, p, time))
                .collect::<Result<Vec<_>, _>>()?;
            // Half-diagonal of a sample cell, measured on the image side.
            let mut spread: f64 = 0.0;
            for (s, y) in images.iter().enumerate() {
                for k in 0..n {
                    if (s / m.pow(k as u32)) % m + 1 < m {
                        spread = spread.max(torus_dist(y, &images[s + m.pow(k as u32)]));
                    }
                }
            }
            let cover = radius + spread * (n as f64).sqrt() / 2.0;
            let mut out = Vec::new();
            for y in &images {
                out.extend(skeleton.boxes_within(y, cover));
            }
            for z in v.zeros().iter().filter(|z| skeleton.box_of(z) == b) {
                out.extend(skeleton.boxes_within(&flow_map(v, z, time)?, radius));
            }
            Ok(out)
        })
        .collect::<Result<_, DynError>>()?;
    let mut g = BoxDigraph::from_successors(n, per_axis, time, succ);
    g.fattening = radius;
    Ok(g)
}

/// Boxes on directed cycles, increasing.
pub fn chain_recurrent_set(g: &BoxDigraph) -> Vec<usize> {
    (0..g.node_count())
        .filter(|&b| g.is_chain_recurrent(b))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Isolation {
    #[serde(rename = "ISOLATED")]
    Isolated,
    #[serde(rename = "NOT-ISOLATED")]
    NotIsolated,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IsolationVerdict {
    pub zero: usize,
    pub position: Vec<f64>,
    pub status: Isolation,
    /// Box side the verdict refers to.
    pub resolution: f64,
    pub cluster: Vec<usize>,
    /// Chain-recurrent boxes in the annulus.
    pub offending: Vec<usize>,
}

fn check_separation(g: &BoxDigraph, zeros: &[Vec<f64>]) -> Result<(), DynError> {
    let limit = 8.0 * g.delta();
    for (i, a) in zeros.iter().enumerate() {
        for (j, b) in zeros.iter().enumerate().skip(i + 1) {
            if torus_dist(a, b) < limit - DIST_SLACK {
                return Err(DynError::ZerosTooClose(i, j));
            }
        }
    }
    Ok(())
}

/// A zero is NOT-ISOLATED at resolution `delta` when some box whose center
/// lies at distance in `(delta, 4 delta]` from it is chain-recurrent.
pub fn zero_isolation_check(
    g: &BoxDigraph,
    zeros: &[Vec<f64>],
) -> Result<Vec<IsolationVerdict>, DynError> {
    check_separation(g, zeros)?;
    let h = g.delta();
    Ok(zeros
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let offending: Vec<usize> = g
                .boxes_with_center_within(z, h, 4.0 * h)
                .into_iter()
                .filter(|&b| g.is_chain_recurrent(b))
                .collect();
            IsolationVerdict {
                zero: i,
                position: z.clone(),
                status: if offending.is_empty() {
                    Isolation::Isolated
                } else {
                    Isolation::NotIsolated
                },
                resolution: h,
                cluster: g.cluster(z),
                offending,
            }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomoclinicCycle {
    /// Zero indices in the order the walk enters their clusters.
    pub clusters: Vec<usize>,
    /// Closed walk of boxes; the last box equals the first.
    pub boxes: Vec<usize>,
    /// A box on the walk outside every cluster.
    pub outside_box: usize,
}

/// One closed walk per strongly connected component that contains both a
/// zero's cluster box and a box outside all clusters. The walk visits each
/// such cluster in zero order, then the first outside box.
pub fn homoclinic_cycle_detect(g: &BoxDigraph, zeros: &[Vec<f64>]) -> Vec<HomoclinicCycle> {
    let clusters: Vec<Vec<usize>> = zeros.iter().map(|z| g.cluster(z)).collect();
    let outside = |b: usize| clusters.iter().all(|c| c.binary_search(&b).is_err());
    let mut by_comp: std::collections::BTreeMap<usize, (Vec<usize>, Option<usize>)> =
        Default::default();
    for (i, c) in clusters.iter().enumerate() {
        for &b in c {
            if g.is_chain_recurrent(b) {
                let e = by_comp.entry(g.component(b)).or_default();
                if !e.0.contains(&i) {
                    e.0.push(i);
                }
            }
        }
    }
    for b in 0..g.node_count() {
        if g.is_chain_recurrent(b) && outside(b) {
            if let Some(e) = by_comp.get_mut(&g.component(b)) {
                e.1.get_or_insert(b);
            }
        }
    }
    let mut out = Vec::new();
    for (comp, (mut zs, outside_box)) in by_comp {
        let Some(outside_box) = outside_box else {
            continue;
        };
        zs.sort_unstable();
        let in_comp = |i: usize| -> Vec<usize> {
            clusters[i]
                .iter()
                .copied()
                .filter(|&b| g.component(b) == comp)
                .collect()
        };
        let start = in_comp(zs[0])[0];
        let mut walk = vec![start];
        let mut targets: Vec<Vec<usize>> = zs[1..].iter().map(|&i| in_comp(i)).collect();
        targets.push(vec![outside_box]);
        targets.push(vec![start]);
        for t in &targets {
            let from = *walk.last().expect("nonempty");
            let path = g.path_within(from, t).expect("strongly connected");
            walk.extend_from_slice(&path[1..]);
        }
        let mut seq: Vec<usize> = Vec::new();
        for &b in &walk[..walk.len() - 1] {
            if let Some(i) = clusters.iter().position(|c| c.binary_search(&b).is_ok()) {
                if seq.last() != Some(&i) {
                    seq.push(i);
                }
            }
        }
        if seq.len() > 1 && seq.first() == seq.last() {
            seq.pop();
        }
        out.push(HomoclinicCycle {
            clusters: seq,
            boxes: walk,
            outside_box,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(edges: &[(usize, usize)]) -> BoxDigraph {
        let mut succ = vec![Vec::new(); 4];
        for &(a, b) in edges {
            succ[a].push(b);
        }
        BoxDigraph::from_successors(2, 2, 1.0, succ)
    }

    #[test]
    fn two_cycle_is_flagged() {
        let g = graph(&[(0, 1), (1, 0), (1, 2), (2, 3)]);
        assert_eq!(chain_recurrent_set(&g), vec![0, 1]);
    }

    #[test]
    fn self_loops_count_and_dags_do_not() {
        assert_eq!(
            chain_recurrent_set(&graph(&[(0, 1), (1, 2), (2, 3)])),
            Vec::<usize>::new()
        );
        assert_eq!(chain_recurrent_set(&graph(&[(0, 1), (3, 3)])), vec![3]);
    }

    #[test]
    fn geometry_wraps() {
        let g = BoxDigraph::from_successors(2, 4, 1.0, vec![Vec::new(); 16]);
        assert_eq!(g.box_of(&[0.99, 0.0]), 3);
        assert_eq!(g.box_of(&[0.0, 0.3]), 4);
        assert_eq!(g.boxes_within(&[0.0, 0.0], 0.1), vec![0, 3, 12, 15]);
        assert!((g.distance_to_box(3, &[0.1, 0.1]) - 0.1).abs() < 1e-12);
        assert_eq!(g.cluster(&[0.0, 0.0]), vec![0, 3, 12, 15]);
    }

    #[test]
    fn parameters_are_checked() {
        let v = TorusVectorField::parse(&["1", "0.5"], vec![]).unwrap();
        assert!(matches!(
            build_box_digraph(&v, &GridParams::new(0.0, 1.0)),
            Err(DynError::DeltaOutOfRange(_))
        ));
        assert!(matches!(
            build_box_digraph(&v, &GridParams::new(0.6, 1.0)),
            Err(DynError::DeltaOutOfRange(_))
        ));
        assert!(matches!(
            build_box_digraph(&v, &GridParams::new(0.1, 0.0)),
            Err(DynError::TimeNotPositive(_))
        ));
        let tight = GridParams {
            step_budget: 10,
            ..GridParams::new(0.1, 1.0)
        };
        assert!(matches!(
            build_box_digraph(&v, &tight),
            Err(DynError::BudgetExceeded { .. })
        ));
    }
}
