//! Instance families: independent chains, posets of graphs, stacking and
//! OR-composition, plus seeded random posets and graphs.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bits::BitMatrix;
use crate::poset::Poset;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    OutOfRange { vertex: usize, n: usize },
}

/// Undirected loopless graph on `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl SimpleGraph {
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            for vertex in [u, v] {
                if vertex >= n {
                    return Err(GraphError::OutOfRange { vertex, n });
                }
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(SimpleGraph { n, edges: set })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Edges as `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }
}

/// `I_k`: `k` pairwise incomparable 3-chains; chain `i` is `3i < 3i+1 < 3i+2`.
pub fn independent_poset(k: usize) -> Poset {
    (0..k).fold(Poset::antichain(0), |acc, _| {
        acc.disjoint_union(&Poset::chain(3))
    })
}

/// The poset of a graph: a 3-chain `a_v < b_v < c_v` per vertex (elements
/// `3v`, `3v+1`, `3v+2`) and `a_v < c_u` for every edge `{u, v}`.
pub fn poset_of_graph(g: &SimpleGraph) -> Poset {
    let n = 3 * g.vertex_count();
    let mut leq = BitMatrix::new(n, n);
    for v in 0..g.vertex_count() {
        let (a, b, c) = (3 * v, 3 * v + 1, 3 * v + 2);
        for (x, y) in [(a, a), (b, b), (c, c), (a, b), (a, c), (b, c)] {
            leq.set(x, y);
        }
    }
    for (u, v) in g.edges() {
        leq.set(3 * v, 3 * u + 2);
        leq.set(3 * u, 3 * v + 2);
    }
    // a_v minimal and c_v maximal: nothing to close.
    Poset::from_closed_matrix(leq)
}

/// Ordinal sum: every element of an earlier poset lies below every element
/// of a later one.
pub fn stack_posets(parts: &[Poset]) -> Poset {
    let n: usize = parts.iter().map(Poset::len).sum();
    let mut leq = BitMatrix::new(n, n);
    let mut offset = 0;
    for part in parts {
        for (a, b) in part.pairs() {
            leq.set(offset + a, offset + b);
        }
        for a in 0..part.len() {
            for later in offset + part.len()..n {
                leq.set(offset + a, later);
            }
        }
        offset += part.len();
    }
    Poset::from_closed_matrix(leq)
}

/// Result of [`or_compose`].
#[derive(Debug, Clone)]
pub struct Composition {
    pub poset: Poset,
    pub k: usize,
    /// The padded instances, in input order. Their stack is `poset` except
    /// when `k == 1`.
    pub padded: Vec<Poset>,
}

/// Pads each `(P_i, k_i)` with `I_{k−k_i}` to the common `k = max k_i` and
/// stacks the results. For `k ≥ 2`, `I_k` embeds into the stack iff it
/// embeds into some padded `P_i`, iff `I_{k_i}` embeds into some `P_i`.
///
/// With `k == 1` a 3-chain could climb through several blocks of the stack,
/// so each instance is decided directly and the result is a constant
/// instance: a 3-chain if some `P_i` has one, else a 2-chain.
pub fn or_compose(instances: &[(Poset, usize)]) -> Composition {
    let k = instances.iter().map(|(_, k)| *k).max().unwrap_or(0);
    let padded: Vec<Poset> = instances
        .iter()
        .map(|(p, ki)| p.disjoint_union(&independent_poset(k - ki)))
        .collect();
    let poset = if k == 1 {
        let yes = instances.iter().any(|(p, _)| has_three_chain(p));
        Poset::chain(if yes { 3 } else { 2 })
    } else {
        stack_posets(&padded)
    };
    Composition { poset, k, padded }
}

fn has_three_chain(p: &Poset) -> bool {
    let n = p.len();
    (0..n).any(|b| (0..n).any(|a| p.lt(a, b)) && (0..n).any(|c| p.lt(b, c)))
}

/// Each pair `i < j` becomes `i ≤ j` with probability `density`, then the
/// transitive closure is taken. Index order is a linear extension.
pub fn random_poset(n: usize, density: f64, seed: u64) -> Poset {
    assert!((0.0..=1.0).contains(&density), "density must lie in [0, 1]");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut leq = BitMatrix::new(n, n);
    for i in 0..n {
        leq.set(i, i);
        for j in i + 1..n {
            if rng.gen_bool(density) {
                leq.set(i, j);
            }
        }
    }
    close_forward(&mut leq);
    Poset::from_closed_matrix(leq)
}

/// Random poset of width at most `width`: elements are dealt to `width`
/// chains along a random linear order, and each element additionally points
/// to a later element of another chain with probability `cross`.
pub fn random_width_poset(n: usize, width: usize, cross: f64, seed: u64) -> Poset {
    assert!(width >= 1, "width must be positive");
    assert!(
        (0.0..=1.0).contains(&cross),
        "cross probability must lie in [0, 1]"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chain_of: Vec<usize> = (0..n).map(|_| rng.gen_range(0..width)).collect();
    let mut leq = BitMatrix::new(n, n);
    let mut last: Vec<Option<usize>> = vec![None; width];
    for (i, &c) in chain_of.iter().enumerate() {
        leq.set(i, i);
        if let Some(prev) = last[c] {
            leq.set(prev, i);
        }
        last[c] = Some(i);
    }
    for i in 0..n {
        if i + 1 < n && rng.gen_bool(cross) {
            let j = rng.gen_range(i + 1..n);
            leq.set(i, j);
        }
    }
    close_forward(&mut leq);
    Poset::from_closed_matrix(leq)
}

/// One benchmark instance: a random pattern on `q` elements and a host on
/// `n` elements of width at most `width`, both derived from `seed`.
pub fn bench_instance(q: usize, n: usize, width: usize, seed: u64) -> (Poset, Poset) {
    let pattern = random_poset(q, 0.5, seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ 0x5EED);
    let cross = (4.0 / n.max(1) as f64).min(1.0);
    (pattern, random_width_poset(n, width, cross, seed))
}

/// Transitive closure of a relation whose arcs all go from lower to higher
/// index: process rows from the top down, each absorbing its successors.
fn close_forward(leq: &mut BitMatrix) {
    let n = leq.rows();
    for i in (0..n).rev() {
        let succ: Vec<usize> = leq.row_ones(i).filter(|&j| j > i).collect();
        let mut done = BitMatrix::new(1, n);
        for j in succ {
            if !done.get(0, j) {
                leq.or_row_into(j, i);
                // j's row is closed, so everything above j is already in i's row
                for x in leq.row_ones(j).collect::<Vec<_>>() {
                    done.set(0, x);
                }
            }
        }
    }
}

/// Erdős–Rényi graph `G(n, p)`.
pub fn random_graph(n: usize, p: f64, seed: u64) -> SimpleGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    SimpleGraph::new(n, edges).expect("generated edges are in range")
}
