//! Undirected graphs, their consensus mixing matrices, and spectral
//! quantities.
//!
//! The two-cliques graph built by [`build_gn_prime`] is the worst-case
//! topology used throughout: two complete graphs on `n` nodes joined by a
//! perfect matching. Its node indexing is fixed as u-block first
//! (`0..n`), v-block second (`n..2n`); the adversarial trajectory code
//! relies on that convention.

use crate::{invalid, Result};
use nalgebra::{DMatrix, DVector};
use std::collections::BTreeSet;
use std::fmt::Write as _;

/// Simple undirected graph: no self-loops, no duplicate edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n_nodes: usize,
    edges: Vec<(usize, usize)>, // each stored with i < j, sorted
}

/// Standard topologies for [`build_standard`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    Line,
    Complete,
    Star,
    Ring,
}

impl Graph {
    /// Builds a graph from an edge list, validating endpoints and rejecting
    /// self-loops. Duplicate edges (in either orientation) collapse.
    pub fn new(n_nodes: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n_nodes == 0 {
            return invalid("graph needs at least one node");
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return invalid(format!("self-loop at node {a}"));
            }
            if a >= n_nodes || b >= n_nodes {
                return invalid(format!(
                    "edge ({a}, {b}) leaves the node range 0..{n_nodes}"
                ));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(Graph {
            n_nodes,
            edges: set.into_iter().collect(),
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, node: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == node || b == node)
            .count()
    }

    pub fn max_degree(&self) -> usize {
        let mut deg = vec![0usize; self.n_nodes];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg.into_iter().max().unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        if self.n_nodes == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.n_nodes];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; self.n_nodes];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Edge-list text: first line `n <node-count>`, then one `i j` pair per
    /// line, 0-based.
    pub fn to_edge_list_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n {}", self.n_nodes);
        for &(a, b) in &self.edges {
            let _ = writeln!(out, "{a} {b}");
        }
        out
    }

    pub fn from_edge_list_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| crate::Error::InvalidArgument("empty edge-list text".into()))?;
        let n_nodes = match header.split_whitespace().collect::<Vec<_>>()[..] {
            ["n", count] => count
                .parse::<usize>()
                .map_err(|_| crate::Error::InvalidArgument(format!("bad node count '{count}'")))?,
            _ => {
                return invalid(format!(
                    "edge-list header must be 'n <count>', got '{header}'"
                ))
            }
        };
        let mut edges = Vec::new();
        for line in lines {
            let mut it = line.split_whitespace();
            let (a, b) = (it.next(), it.next());
            match (a, b) {
                (Some(a), Some(b)) => {
                    let a = a.parse::<usize>();
                    let b = b.parse::<usize>();
                    match (a, b) {
                        (Ok(a), Ok(b)) => edges.push((a, b)),
                        _ => return invalid(format!("bad edge line '{line}'")),
                    }
                }
                _ => return invalid(format!("bad edge line '{line}'")),
            }
        }
        Graph::new(n_nodes, edges)
    }
}

/// Two complete graphs on `n` nodes each, joined by the perfect matching
/// `u_i -- v_i`. Nodes `0..n` are the u-block, `n..2n` the v-block; every
/// node has degree exactly `n`.
pub fn build_gn_prime(n: usize) -> Result<Graph> {
    if n < 2 {
        return invalid(format!("two-cliques graph needs n >= 2, got {n}"));
    }
    let mut edges = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in (i + 1)..n {
            edges.push((i, j)); // u-clique
            edges.push((n + i, n + j)); // v-clique
        }
        edges.push((i, n + i)); // matching
    }
    Graph::new(2 * n, edges)
}

/// Standard simple topology on `n >= 2` nodes.
pub fn build_standard(topology: Topology, n: usize) -> Result<Graph> {
    if n < 2 {
        return invalid(format!("{topology:?} graph needs n >= 2, got {n}"));
    }
    let edges: Vec<(usize, usize)> = match topology {
        Topology::Line => (0..n - 1).map(|i| (i, i + 1)).collect(),
        Topology::Complete => (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .collect(),
        Topology::Star => (1..n).map(|i| (0, i)).collect(),
        Topology::Ring => (0..n).map(|i| (i, (i + 1) % n)).collect(),
    };
    Graph::new(n, edges)
}

/// Doubly stochastic mixing matrix with its second-largest singular value
/// cached.
#[derive(Debug, Clone, PartialEq)]
pub struct MixingMatrix {
    entries: DMatrix<f64>,
    sigma: f64,
}

const STOCHASTIC_TOL: f64 = 1e-12;

impl MixingMatrix {
    /// Validates a doubly stochastic matrix (row and column sums within
    /// 1e-12 of one, nonnegative entries) and caches its second singular
    /// value.
    pub fn from_entries(entries: DMatrix<f64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() == 0 {
            return invalid("mixing matrix must be square and non-empty");
        }
        let n = entries.nrows();
        for i in 0..n {
            let mut row = 0.0;
            let mut col = 0.0;
            for j in 0..n {
                if entries[(i, j)] < 0.0 {
                    return invalid(format!("negative weight at ({i}, {j})"));
                }
                row += entries[(i, j)];
                col += entries[(j, i)];
            }
            if (row - 1.0).abs() > STOCHASTIC_TOL || (col - 1.0).abs() > STOCHASTIC_TOL {
                return invalid(format!(
                    "matrix is not doubly stochastic: row {i} sums to {row}, column to {col}"
                ));
            }
        }
        let sigma = second_singular_value_of(&entries);
        Ok(MixingMatrix { entries, sigma })
    }

    /// The trivial 1x1 matrix used by the centralized solver path.
    pub fn identity_single() -> Self {
        MixingMatrix {
            entries: DMatrix::from_element(1, 1, 1.0),
            sigma: 0.0,
        }
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    /// Second-largest singular value; for symmetric matrices this is the
    /// largest |eigenvalue| off the all-ones direction.
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Spectral gap `1 - sigma`.
    pub fn spectral_gap(&self) -> f64 {
        1.0 - self.sigma
    }

    /// Whether every diagonal entry is strictly positive. Weight `eps`
    /// exactly at `1/max_degree` zeroes the busiest diagonal, which the
    /// worst-case construction exploits; runs that rely on the positive-
    /// diagonal assumption should check this first.
    pub fn satisfies_positive_diagonal(&self) -> bool {
        (0..self.n()).all(|i| self.entries[(i, i)] > 0.0)
    }

    /// `W * x` for an agents-by-dimension iterate block.
    pub fn mix(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        &self.entries * x
    }
}

/// Equal-weight mixing matrix of a graph: weight `eps` on every edge,
/// `1 - deg(i) * eps` on the diagonal. Symmetric, hence doubly stochastic.
///
/// Requires `eps * max_degree <= 1`; at equality the busiest diagonals are
/// zero, which the worst-case runs use, while strictly below it the matrix
/// also satisfies the positive-diagonal assumption.
pub fn mixing_matrix(g: &Graph, eps: f64) -> Result<MixingMatrix> {
    if !eps.is_finite() || eps <= 0.0 {
        return invalid(format!("edge weight must be positive, got {eps}"));
    }
    let n = g.n_nodes();
    let max_deg = g.max_degree();
    if eps * max_deg as f64 > 1.0 + 1e-15 {
        return invalid(format!(
            "eps * max_degree = {} * {} > 1 would make a diagonal negative",
            eps, max_deg
        ));
    }
    let mut entries = DMatrix::zeros(n, n);
    for &(a, b) in g.edges() {
        entries[(a, b)] = eps;
        entries[(b, a)] = eps;
    }
    for i in 0..n {
        entries[(i, i)] = (1.0 - g.degree(i) as f64 * eps).max(0.0);
    }
    MixingMatrix::from_entries(entries)
}

/// Closed-form eigenvalue multiset of the two-cliques mixing matrix:
/// `{1, 1-2eps, 1-n*eps (n-1 times), 1-(n+2)*eps (n-1 times)}`, sorted
/// descending. The second-largest eigenvalue is `1 - 2eps`.
pub fn gn_prime_spectrum(n: usize, eps: f64) -> Result<Vec<f64>> {
    if n < 2 {
        return invalid(format!("two-cliques graph needs n >= 2, got {n}"));
    }
    if !eps.is_finite() || eps <= 0.0 || eps * n as f64 >= 1.0 {
        return invalid(format!(
            "need 0 < eps and eps * n < 1 for the closed-form spectrum, got eps = {eps}, n = {n}"
        ));
    }
    let nf = n as f64;
    let mut eigs = Vec::with_capacity(2 * n);
    eigs.push(1.0);
    eigs.push(1.0 - 2.0 * eps);
    for _ in 0..n - 1 {
        eigs.push(1.0 - nf * eps);
    }
    for _ in 0..n - 1 {
        eigs.push(1.0 - (nf + 2.0) * eps);
    }
    eigs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(eigs)
}

/// Largest singular value of `w` restricted to the subspace orthogonal to
/// the all-ones vector.
pub fn second_singular_value(w: &MixingMatrix) -> f64 {
    second_singular_value_of(w.entries())
}

const POWER_TOL: f64 = 1e-12;
const POWER_MAX_ITERS: usize = 100_000;

/// Power iteration on `W^T W` with the all-ones direction deflated each
/// step. For a doubly stochastic `W` the ones vector is the principal
/// singular pair, so the deflated fixed point is the second singular value.
fn second_singular_value_of(w: &DMatrix<f64>) -> f64 {
    let n = w.nrows();
    if n <= 1 {
        return 0.0;
    }
    // Deterministic, generic start vector.
    let mut v = DVector::from_fn(n, |i, _| (1.0 + i as f64).sin());
    deflate_ones(&mut v);
    if normalize(&mut v).is_none() {
        return 0.0;
    }
    let mut sigma_sq_prev = f64::INFINITY;
    for _ in 0..POWER_MAX_ITERS {
        let mut next = w.transpose() * (w * &v);
        deflate_ones(&mut next);
        let sigma_sq = v.dot(&next); // Rayleigh quotient, ||v|| = 1
        if sigma_sq <= f64::EPSILON {
            return 0.0;
        }
        v = next;
        if normalize(&mut v).is_none() {
            return 0.0;
        }
        if (sigma_sq - sigma_sq_prev).abs() <= POWER_TOL * sigma_sq.max(1.0) {
            return sigma_sq.max(0.0).sqrt();
        }
        sigma_sq_prev = sigma_sq;
    }
    sigma_sq_prev.max(0.0).sqrt()
}

fn deflate_ones(v: &mut DVector<f64>) {
    let mean = v.mean();
    for x in v.iter_mut() {
        *x -= mean;
    }
}

fn normalize(v: &mut DVector<f64>) -> Option<()> {
    let norm = v.norm();
    if norm <= 1e-300 {
        return None;
    }
    *v /= norm;
    Some(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::SymmetricEigen;

    fn dense_symmetric_eigs(w: &MixingMatrix) -> Vec<f64> {
        let eig = SymmetricEigen::new(w.entries().clone());
        let mut v: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        v.sort_by(|a, b| b.partial_cmp(a).unwrap());
        v
    }

    #[test]
    fn gn_prime_smallest_instance() {
        let g = build_gn_prime(2).unwrap();
        assert_eq!(g.n_nodes(), 4);
        assert_eq!(g.edge_count(), 4);
        let expect: Vec<(usize, usize)> = vec![(0, 1), (0, 2), (1, 3), (2, 3)];
        assert_eq!(g.edges(), &expect[..]);
    }

    #[test]
    fn gn_prime_counts_by_hand() {
        // 2 * C(4, 2) + 4 = 16 edges, every node degree exactly 4
        let g = build_gn_prime(4).unwrap();
        assert_eq!(g.n_nodes(), 8);
        assert_eq!(g.edge_count(), 16);
        for v in 0..8 {
            assert_eq!(g.degree(v), 4);
        }
    }

    #[test]
    fn gn_prime_max_degree_caps_eps() {
        let g = build_gn_prime(10).unwrap();
        assert_eq!(g.max_degree(), 10);
        assert!(mixing_matrix(&g, 0.1).is_ok()); // boundary 1/n admitted
        assert!(mixing_matrix(&g, 0.11).is_err());
    }

    #[test]
    fn gn_prime_rejects_tiny_n() {
        assert!(build_gn_prime(1).is_err());
        assert!(build_gn_prime(0).is_err());
    }

    #[test]
    fn standard_topologies() {
        let line = build_standard(Topology::Line, 3).unwrap();
        assert_eq!(line.edges(), &[(0, 1), (1, 2)]);
        let complete = build_standard(Topology::Complete, 4).unwrap();
        assert_eq!(complete.edge_count(), 6);
        let star = build_standard(Topology::Star, 4).unwrap();
        assert_eq!(star.edge_count(), 3);
        assert_eq!(star.degree(0), 3);
        let ring = build_standard(Topology::Ring, 5).unwrap();
        assert_eq!(ring.edge_count(), 5);
        assert!(build_standard(Topology::Line, 1).is_err());
    }

    #[test]
    fn graph_validation() {
        assert!(Graph::new(3, [(0, 0)]).is_err());
        assert!(Graph::new(3, [(0, 3)]).is_err());
        // duplicates collapse regardless of orientation
        let g = Graph::new(3, [(0, 1), (1, 0), (1, 2)]).unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn single_edge_mixing_matrix_by_hand() {
        let k2 = build_standard(Topology::Complete, 2).unwrap();
        let w = mixing_matrix(&k2, 0.3).unwrap();
        let e = w.entries();
        assert_eq!(
            [e[(0, 0)], e[(0, 1)], e[(1, 0)], e[(1, 1)]],
            [0.7, 0.3, 0.3, 0.7]
        );
        // eigenvalues 1 and 0.4
        assert!((w.sigma() - 0.4).abs() < 1e-12);
    }

    #[test]
    fn gn_prime_mixing_diagonals() {
        let g = build_gn_prime(4).unwrap();
        let w = mixing_matrix(&g, 0.125).unwrap();
        for i in 0..8 {
            assert!((w.entries()[(i, i)] - 0.5).abs() < 1e-15);
        }
        assert!(w.satisfies_positive_diagonal());
        // boundary weight zeroes every diagonal here (regular graph)
        let wb = mixing_matrix(&g, 0.25).unwrap();
        assert!(!wb.satisfies_positive_diagonal());
        assert!((wb.entries()[(0, 0)]).abs() < 1e-15);
    }

    #[test]
    fn complete_graph_extreme_weight_is_averaging() {
        let n = 5;
        let g = build_standard(Topology::Complete, n).unwrap();
        let w = mixing_matrix(&g, 1.0 / n as f64).unwrap();
        for i in 0..n {
            for j in 0..n {
                assert!((w.entries()[(i, j)] - 0.2).abs() < 1e-15);
            }
        }
        assert!(w.sigma().abs() < 1e-9);
    }

    #[test]
    fn mixing_matrix_rejects_overweight() {
        let g = build_gn_prime(4).unwrap();
        assert!(mixing_matrix(&g, 0.26).is_err());
        assert!(mixing_matrix(&g, 0.0).is_err());
        assert!(mixing_matrix(&g, -0.1).is_err());
    }

    #[test]
    fn gn_prime_spectrum_closed_form_values() {
        let eigs = gn_prime_spectrum(4, 0.125).unwrap();
        let expect = [1.0, 0.75, 0.5, 0.5, 0.5, 0.25, 0.25, 0.25];
        for (a, b) in eigs.iter().zip(expect.iter()) {
            assert!((a - b).abs() < 1e-15);
        }
        // second-largest is always 1 - 2 eps
        assert!((eigs[1] - (1.0 - 2.0 * 0.125)).abs() < 1e-15);
    }

    #[test]
    fn gn_prime_spectrum_n2_multiplicities() {
        let eigs = gn_prime_spectrum(2, 0.1).unwrap();
        let expect = [1.0, 0.8, 0.8, 0.6];
        for (a, b) in eigs.iter().zip(expect.iter()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn gn_prime_spectrum_tends_to_identity() {
        let eigs = gn_prime_spectrum(8, 1e-9).unwrap();
        for e in eigs {
            assert!((e - 1.0).abs() < 1e-7);
        }
    }

    #[test]
    fn gn_prime_spectrum_precondition() {
        assert!(gn_prime_spectrum(4, 0.25).is_err()); // eps * n = 1 excluded here
        assert!(gn_prime_spectrum(4, 0.249).is_ok());
    }

    #[test]
    fn spectrum_matches_dense_eigensolver() {
        for n in [2usize, 4, 8, 16] {
            let eps = 0.5 / n as f64;
            let closed = gn_prime_spectrum(n, eps).unwrap();
            let w = mixing_matrix(&build_gn_prime(n).unwrap(), eps).unwrap();
            let dense = dense_symmetric_eigs(&w);
            assert_eq!(closed.len(), dense.len());
            for (a, b) in closed.iter().zip(dense.iter()) {
                assert!((a - b).abs() < 1e-9, "n={n}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn sigma_closed_form_on_gn_prime() {
        for (n, eps) in [(2usize, 0.2), (4, 0.125), (8, 0.1), (16, 0.05)] {
            let w = mixing_matrix(&build_gn_prime(n).unwrap(), eps).unwrap();
            let expect = (1.0 - 2.0 * eps)
                .abs()
                .max((1.0 - (n as f64 + 2.0) * eps).abs());
            assert!(
                (w.sigma() - expect).abs() < 1e-10,
                "n={n} eps={eps}: {} vs {expect}",
                w.sigma()
            );
        }
    }

    #[test]
    fn sigma_cross_checked_against_dense_svd() {
        let line = build_standard(Topology::Line, 3).unwrap();
        let w = mixing_matrix(&line, 0.25).unwrap();
        // Dense oracle: full SVD, drop the principal value.
        let svd = w.entries().clone().svd(false, false);
        let mut vals: Vec<f64> = svd.singular_values.iter().copied().collect();
        vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert!((vals[0] - 1.0).abs() < 1e-12);
        assert!((w.sigma() - vals[1]).abs() < 1e-10);
        assert!((w.sigma() - 0.75).abs() < 1e-10); // eigenvalues {1, 3/4, 1/4}
    }

    #[test]
    fn contraction_and_mean_preservation() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for (graph, eps) in [
            (build_gn_prime(4).unwrap(), 0.125),
            (build_standard(Topology::Line, 5).unwrap(), 0.3),
            (build_standard(Topology::Ring, 6).unwrap(), 0.2),
        ] {
            let w = mixing_matrix(&graph, eps).unwrap();
            let n = w.n();
            for _ in 0..1000 {
                let y = DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
                let mean = y.mean();
                let centered = y.add_scalar(-mean);
                let mixed = w.entries() * &centered;
                assert!(mixed.norm() <= w.sigma() * centered.norm() + 1e-10);
                let my = (w.entries() * &y).mean();
                assert!((my - mean).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn edge_list_round_trip() {
        let g = build_gn_prime(3).unwrap();
        let text = g.to_edge_list_text();
        assert!(text.starts_with("n 6\n"));
        let back = Graph::from_edge_list_text(&text).unwrap();
        assert_eq!(g, back);
        assert!(Graph::from_edge_list_text("x 4\n0 1").is_err());
        assert!(Graph::from_edge_list_text("").is_err());
    }

    #[test]
    fn connectivity() {
        assert!(build_gn_prime(4).unwrap().is_connected());
        let disconnected = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert!(!disconnected.is_connected());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn edge_list_text_round_trips(
                n in 2usize..20,
                raw in proptest::collection::vec((0usize..20, 0usize..20), 0..40),
            ) {
                let edges: Vec<(usize, usize)> = raw
                    .into_iter()
                    .filter(|(a, b)| a != b && *a < n && *b < n)
                    .collect();
                let g = Graph::new(n, edges).unwrap();
                let back = Graph::from_edge_list_text(&g.to_edge_list_text()).unwrap();
                prop_assert_eq!(g, back);
            }
        }
    }
}
