//! Compatible embeddings as interval-monotone multicoloured clique instances.
//!
//! For a compatibility function `f`, colour class `V_i` is a copy of the
//! host chain `C_f(i)` in chain order, and two copies in different classes
//! are adjacent when the host elements relate exactly as the two pattern
//! elements do. A `k`-clique is then an `f`-compatible embedding.
//!
//! Such graphs are interval-monotone: every vertex's neighbours in another
//! class form an interval of that class, and crossing edges between two
//! classes imply the two parallel ones. Under those conditions the
//! coordinatewise minimum (or maximum) of any family of cliques on the same
//! classes is again a clique, and [`clique_table`] fills, class by class, the
//! least and greatest cliques ending in each vertex in `O(k·|E|)` steps.

use thiserror::Error;

use crate::bits::{first_one, last_one, BitMatrix};
use crate::embedding::{
    CompatibilityFunction, CompatibilityFunctions, EmbeddingHost, EmbeddingMap, SolveStats,
};
use crate::poset::{ElementId, Poset};

/// Largest class size for which the debug build re-checks interval
/// monotonicity before running the table.
const MONOTONE_ASSERT_LIMIT: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliqueError {
    #[error("vertices {0:?} and {1:?} share a colour class")]
    SameClass(Vertex, Vertex),
    #[error("vertex {0:?} does not exist")]
    NoSuchVertex(Vertex),
    #[error("input is not a clique on the requested classes: {0}")]
    PreconditionViolation(String),
    #[error("graph is not interval-monotone")]
    NotIntervalMonotone,
}

/// A vertex identified by colour class and position in that class's order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub class: usize,
    pub pos: usize,
}

impl Vertex {
    pub fn new(class: usize, pos: usize) -> Self {
        Vertex { class, pos }
    }
}

/// Properly `k`-coloured graph whose classes carry a linear order (position).
/// Each vertex is labelled with the host element it copies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredGraph {
    classes: Vec<Vec<ElementId>>,
    // adj[i * k + j]: |V_i| x |V_j| adjacency, empty on the diagonal
    adj: Vec<BitMatrix>,
}

impl ColoredGraph {
    /// Edgeless graph with the given labelled classes.
    pub fn new(classes: Vec<Vec<ElementId>>) -> Self {
        let k = classes.len();
        let mut adj = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                adj.push(if i == j {
                    BitMatrix::new(0, 0)
                } else {
                    BitMatrix::new(classes[i].len(), classes[j].len())
                });
            }
        }
        ColoredGraph { classes, adj }
    }

    /// Classes of the given sizes labelled `0..size`, plus explicit edges.
    pub fn from_edges(
        class_sizes: &[usize],
        edges: &[(Vertex, Vertex)],
    ) -> Result<Self, CliqueError> {
        let mut g = ColoredGraph::new(class_sizes.iter().map(|&s| (0..s).collect()).collect());
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<(), CliqueError> {
        for w in [u, v] {
            if !self.contains(w) {
                return Err(CliqueError::NoSuchVertex(w));
            }
        }
        if u.class == v.class {
            return Err(CliqueError::SameClass(u, v));
        }
        let k = self.k();
        self.adj[u.class * k + v.class].set(u.pos, v.pos);
        self.adj[v.class * k + u.class].set(v.pos, u.pos);
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.classes.len()
    }

    pub fn class(&self, i: usize) -> &[ElementId] {
        &self.classes[i]
    }

    pub fn class_len(&self, i: usize) -> usize {
        self.classes[i].len()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v.class < self.k() && v.pos < self.classes[v.class].len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.k()).flat_map(move |i| (0..self.class_len(i)).map(move |p| Vertex::new(i, p)))
    }

    pub fn adjacent(&self, u: Vertex, v: Vertex) -> bool {
        u.class != v.class && self.adj[u.class * self.k() + v.class].get(u.pos, v.pos)
    }

    /// Positions of `v`'s neighbours in class `j`, ascending.
    pub fn neighbours(&self, v: Vertex, j: usize) -> Vec<usize> {
        if v.class == j {
            return Vec::new();
        }
        self.adj[v.class * self.k() + j].row_ones(v.pos).collect()
    }

    pub fn edge_count(&self) -> usize {
        let k = self.k();
        (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .map(|(i, j)| self.adj[i * k + j].count_ones())
            .sum()
    }

    fn row(&self, v: Vertex, j: usize) -> &[u64] {
        self.adj[v.class * self.k() + j].row(v.pos)
    }

    pub fn is_clique(&self, vs: &[Vertex]) -> bool {
        vs.iter().all(|&v| self.contains(v))
            && vs
                .iter()
                .enumerate()
                .all(|(a, &u)| vs[a + 1..].iter().all(|&v| self.adjacent(u, v)))
    }
}

/// Builds `G(P, Q, f)` over the host's chain partition.
pub fn build_colored_graph(
    pattern: &Poset,
    host: &EmbeddingHost<'_>,
    f: &CompatibilityFunction,
    stats: &mut SolveStats,
) -> ColoredGraph {
    let k = pattern.len();
    assert_eq!(f.len(), k, "compatibility function must cover the pattern");
    let p = host.poset;
    let mut g = ColoredGraph::new(
        (0..k)
            .map(|i| host.chains().chain(f.chain(i)).to_vec())
            .collect(),
    );
    for i in 0..k {
        for j in i + 1..k {
            let up = pattern.leq(i, j);
            let down = pattern.leq(j, i);
            let mut m = BitMatrix::new(g.class_len(i), g.class_len(j));
            for (a, &x) in g.classes[i].iter().enumerate() {
                for (b, &y) in g.classes[j].iter().enumerate() {
                    if p.leq(x, y) == up && p.leq(y, x) == down {
                        m.set(a, b);
                    }
                }
            }
            stats.tick((g.class_len(i) * g.class_len(j)) as u64);
            g.adj[j * k + i] = m.transpose();
            g.adj[i * k + j] = m;
        }
    }
    g
}

/// Exhaustive check of both interval-monotonicity conditions:
/// (a) `p~q1, p~q3, q1 ≤ q2 ≤ q3 ⇒ p~q2`;
/// (b) `p1 ≤ p2, q1 ≤ q2, p1~q2, p2~q1 ⇒ p1~q1, p2~q2`.
pub fn is_interval_monotone(g: &ColoredGraph) -> bool {
    let k = g.k();
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            let (ni, nj) = (g.class_len(i), g.class_len(j));
            let e = |a: usize, b: usize| g.adjacent(Vertex::new(i, a), Vertex::new(j, b));
            for p in 0..ni {
                for q1 in 0..nj {
                    for q2 in q1..nj {
                        for q3 in q2..nj {
                            if e(p, q1) && e(p, q3) && !e(p, q2) {
                                return false;
                            }
                        }
                    }
                }
            }
            for p1 in 0..ni {
                for p2 in p1..ni {
                    for q1 in 0..nj {
                        for q2 in q1..nj {
                            if e(p1, q2) && e(p2, q1) && !(e(p1, q1) && e(p2, q2)) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
    }
    true
}

/// `N↑_j(v)`: positions in class `j` lying above some neighbour of `v`.
pub fn neighbours_above(g: &ColoredGraph, v: Vertex, j: usize) -> Vec<usize> {
    let ns = g.neighbours(v, j);
    (0..g.class_len(j))
        .filter(|&w| ns.iter().any(|&n| n <= w))
        .collect()
}

/// `N↓_j(v)`: positions in class `j` lying below some neighbour of `v`.
pub fn neighbours_below(g: &ColoredGraph, v: Vertex, j: usize) -> Vec<usize> {
    let ns = g.neighbours(v, j);
    (0..g.class_len(j))
        .filter(|&w| ns.iter().any(|&n| w <= n))
        .collect()
}

fn check_clique_family(
    cliques: &[Vec<Vertex>],
    classes: &[usize],
    g: &ColoredGraph,
) -> Result<(), CliqueError> {
    let mut want = classes.to_vec();
    want.sort_unstable();
    want.dedup();
    if want.len() != classes.len() {
        return Err(CliqueError::PreconditionViolation(
            "repeated class index".into(),
        ));
    }
    for c in cliques {
        let mut got: Vec<usize> = c.iter().map(|v| v.class).collect();
        got.sort_unstable();
        if got != want {
            return Err(CliqueError::PreconditionViolation(format!(
                "{c:?} does not have one vertex per class of {classes:?}"
            )));
        }
        if !g.is_clique(c) {
            return Err(CliqueError::PreconditionViolation(format!(
                "{c:?} is not a clique"
            )));
        }
    }
    Ok(())
}

fn clique_extreme(
    cliques: &[Vec<Vertex>],
    classes: &[usize],
    g: &ColoredGraph,
    pick: fn(usize, usize) -> usize,
) -> Result<Vec<Vertex>, CliqueError> {
    check_clique_family(cliques, classes, g)?;
    let mut sorted = classes.to_vec();
    sorted.sort_unstable();
    Ok(sorted
        .into_iter()
        .filter_map(|i| {
            cliques
                .iter()
                .flatten()
                .filter(|v| v.class == i)
                .map(|v| v.pos)
                .reduce(pick)
                .map(|pos| Vertex::new(i, pos))
        })
        .collect())
}

/// Classwise minimum of a family of cliques on the classes `classes`,
/// listed by ascending class.
pub fn clique_min(
    cliques: &[Vec<Vertex>],
    classes: &[usize],
    g: &ColoredGraph,
) -> Result<Vec<Vertex>, CliqueError> {
    clique_extreme(cliques, classes, g, usize::min)
}

/// Classwise maximum; the twin of [`clique_min`].
pub fn clique_max(
    cliques: &[Vec<Vertex>],
    classes: &[usize],
    g: &ColoredGraph,
) -> Result<Vec<Vertex>, CliqueError> {
    clique_extreme(cliques, classes, g, usize::max)
}

/// Least and greatest cliques per vertex. `min_k[i][v]` holds positions for
/// classes `0..=i` of the classwise least clique that uses vertex `v` of
/// class `i` and one vertex from each lower class; `None` if there is none.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueTable {
    pub min_k: Vec<Vec<Option<Vec<usize>>>>,
    pub max_k: Vec<Vec<Option<Vec<usize>>>>,
}

/// Per-vertex neighbour intervals into every other class.
struct Intervals {
    k: usize,
    offset: Vec<usize>,
    span: Vec<Option<(usize, usize)>>,
}

impl Intervals {
    fn new(g: &ColoredGraph, stats: &mut SolveStats) -> Self {
        let k = g.k();
        let mut offset = Vec::with_capacity(k);
        let mut span = Vec::new();
        for i in 0..k {
            offset.push(span.len());
            for p in 0..g.class_len(i) {
                let v = Vertex::new(i, p);
                // only lower classes are ever consulted
                for j in 0..k {
                    if j >= i {
                        span.push(None);
                        continue;
                    }
                    let row = g.row(v, j);
                    stats.tick(row.len() as u64);
                    span.push(first_one(row).zip(last_one(row)));
                }
            }
        }
        Intervals { k, offset, span }
    }

    #[inline]
    fn get(&self, v: Vertex, j: usize) -> Option<(usize, usize)> {
        self.span[self.offset[v.class] + v.pos * self.k + j]
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Extreme {
    Min,
    Max,
}

/// Greedy descent for one table entry: starting from `{v}`, walk the lower
/// classes top-down and take the least (greatest) common neighbour whose
/// opposite-extreme clique stays above (below) the current neighbourhoods.
fn table_entry(
    g: &ColoredGraph,
    iv: &Intervals,
    opposite: &[Vec<Option<Vec<usize>>>],
    v: Vertex,
    dir: Extreme,
    stats: &mut SolveStats,
) -> Option<Vec<usize>> {
    let i = v.class;
    let mut chosen = vec![usize::MAX; i + 1];
    chosen[i] = v.pos;
    // Intersection of the chosen vertices' neighbour intervals per lower class.
    let mut lo = vec![0usize; i];
    let mut hi: Vec<usize> = (0..i).map(|l| g.class_len(l).wrapping_sub(1)).collect();
    let mut dead = vec![false; i];
    let absorb = |u: Vertex,
                  lo: &mut [usize],
                  hi: &mut [usize],
                  dead: &mut [bool],
                  stats: &mut SolveStats| {
        stats.tick(u.class as u64);
        for l in 0..u.class {
            match iv.get(u, l) {
                None => dead[l] = true,
                Some((a, b)) => {
                    lo[l] = lo[l].max(a);
                    hi[l] = hi[l].min(b);
                }
            }
        }
    };
    absorb(v, &mut lo, &mut hi, &mut dead, stats);

    for j in (0..i).rev() {
        if dead[j] || lo[j] > hi[j] {
            return None;
        }
        let passes = |x: usize, stats: &mut SolveStats| -> bool {
            stats.tick(1 + j as u64);
            if j == 0 {
                return true;
            }
            let Some(other) = &opposite[j][x] else {
                return false;
            };
            debug_assert_eq!(other[j], x, "table entry must contain its own vertex");
            (0..j).all(|l| {
                !dead[l]
                    && match dir {
                        Extreme::Min => other[l] >= lo[l],
                        Extreme::Max => other[l] <= hi[l],
                    }
            })
        };
        let pick = match dir {
            Extreme::Min => (lo[j]..=hi[j]).find(|&x| passes(x, stats)),
            Extreme::Max => (lo[j]..=hi[j]).rev().find(|&x| passes(x, stats)),
        };
        let x = pick?;
        chosen[j] = x;
        absorb(Vertex::new(j, x), &mut lo, &mut hi, &mut dead, stats);
    }
    Some(chosen)
}

fn fill_table(g: &ColoredGraph, stats: &mut SolveStats, last_max_row: bool) -> CliqueTable {
    debug_assert!(
        (0..g.k()).any(|i| g.class_len(i) > MONOTONE_ASSERT_LIMIT) || is_interval_monotone(g),
        "clique table requires an interval-monotone graph"
    );
    let k = g.k();
    let iv = Intervals::new(g, stats);
    let mut min_k: Vec<Vec<Option<Vec<usize>>>> = Vec::with_capacity(k);
    let mut max_k: Vec<Vec<Option<Vec<usize>>>> = Vec::with_capacity(k);
    for i in 0..k {
        let n = g.class_len(i);
        if i == 0 {
            min_k.push((0..n).map(|p| Some(vec![p])).collect());
            max_k.push((0..n).map(|p| Some(vec![p])).collect());
            continue;
        }
        let mins = (0..n)
            .map(|p| table_entry(g, &iv, &max_k, Vertex::new(i, p), Extreme::Min, stats))
            .collect();
        let maxs = if i + 1 < k || last_max_row {
            (0..n)
                .map(|p| table_entry(g, &iv, &min_k, Vertex::new(i, p), Extreme::Max, stats))
                .collect()
        } else {
            vec![None; n]
        };
        min_k.push(mins);
        max_k.push(maxs);
    }
    CliqueTable { min_k, max_k }
}

/// Fills both tables completely.
pub fn clique_table(g: &ColoredGraph, stats: &mut SolveStats) -> CliqueTable {
    fill_table(g, stats, true)
}

/// Finds a clique with one vertex per class in an interval-monotone graph.
/// The answer, as positions indexed by class, is the least-clique entry of
/// the lowest vertex of the last class that has one.
pub fn solve_multicolored_clique(g: &ColoredGraph) -> Option<Vec<usize>> {
    solve_multicolored_clique_counted(g, &mut SolveStats::default())
}

pub fn solve_multicolored_clique_counted(
    g: &ColoredGraph,
    stats: &mut SolveStats,
) -> Option<Vec<usize>> {
    let k = g.k();
    if k == 0 {
        return Some(Vec::new());
    }
    if (0..k).any(|i| g.class_len(i) == 0) {
        return None;
    }
    let mut table = fill_table(g, stats, false);
    table.min_k.pop()?.into_iter().flatten().next()
}

/// Like [`solve_multicolored_clique`], but first verifies interval
/// monotonicity exhaustively; for graphs of unknown origin.
pub fn solve_checked(g: &ColoredGraph) -> Result<Option<Vec<usize>>, CliqueError> {
    if !is_interval_monotone(g) {
        return Err(CliqueError::NotIntervalMonotone);
    }
    Ok(solve_multicolored_clique(g))
}

/// Embedding search over all compatibility functions, clique engine.
pub fn embed_via_clique(pattern: &Poset, host: &EmbeddingHost<'_>) -> Option<EmbeddingMap> {
    embed_via_clique_counted(pattern, host, &mut SolveStats::default())
}

pub fn embed_via_clique_counted(
    pattern: &Poset,
    host: &EmbeddingHost<'_>,
    stats: &mut SolveStats,
) -> Option<EmbeddingMap> {
    if pattern.is_empty() {
        return Some(EmbeddingMap(Vec::new()));
    }
    for f in CompatibilityFunctions::new(pattern.len(), host.width()) {
        stats.branches += 1;
        let g = build_colored_graph(pattern, host, &f, stats);
        if let Some(positions) = solve_multicolored_clique_counted(&g, stats) {
            let map = EmbeddingMap(
                positions
                    .iter()
                    .enumerate()
                    .map(|(i, &pos)| g.class(i)[pos])
                    .collect(),
            );
            assert!(
                map.is_embedding(pattern, host.poset),
                "clique does not correspond to an embedding"
            );
            return Some(map);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(class: usize, pos: usize) -> Vertex {
        Vertex::new(class, pos)
    }

    #[test]
    fn chain_pattern_on_chain_host() {
        let p = Poset::chain(3);
        let h = EmbeddingHost::new(&p).unwrap();
        let g = build_colored_graph(
            &Poset::chain(2),
            &h,
            &CompatibilityFunction(vec![0, 0]),
            &mut SolveStats::default(),
        );
        let edges: Vec<(usize, usize)> = (0..3)
            .flat_map(|a| g.neighbours(v(0, a), 1).into_iter().map(move |b| (a, b)))
            .collect();
        assert_eq!(edges, vec![(0, 1), (0, 2), (1, 2)]);
        assert!(is_interval_monotone(&g));
        assert_eq!(solve_multicolored_clique(&g), Some(vec![0, 1]));
    }

    #[test]
    fn hole_breaks_condition_a() {
        let g =
            ColoredGraph::from_edges(&[1, 3], &[(v(0, 0), v(1, 0)), (v(0, 0), v(1, 2))]).unwrap();
        assert!(!is_interval_monotone(&g));
        assert_eq!(solve_checked(&g), Err(CliqueError::NotIntervalMonotone));
    }

    #[test]
    fn crossing_breaks_condition_b() {
        let g =
            ColoredGraph::from_edges(&[2, 2], &[(v(0, 0), v(1, 1)), (v(0, 1), v(1, 0))]).unwrap();
        assert!(!is_interval_monotone(&g));
    }

    #[test]
    fn same_class_edge_rejected() {
        assert!(matches!(
            ColoredGraph::from_edges(&[2], &[(v(0, 0), v(0, 1))]),
            Err(CliqueError::SameClass(..))
        ));
        assert!(matches!(
            ColoredGraph::from_edges(&[2], &[(v(0, 0), v(1, 0))]),
            Err(CliqueError::NoSuchVertex(..))
        ));
    }

    #[test]
    fn single_class_takes_least_vertex() {
        let g = ColoredGraph::from_edges(&[3], &[]).unwrap();
        assert_eq!(solve_multicolored_clique(&g), Some(vec![0]));
    }

    #[test]
    fn two_singletons() {
        let with = ColoredGraph::from_edges(&[1, 1], &[(v(0, 0), v(1, 0))]).unwrap();
        assert_eq!(solve_multicolored_clique(&with), Some(vec![0, 0]));
        let without = ColoredGraph::from_edges(&[1, 1], &[]).unwrap();
        assert_eq!(solve_multicolored_clique(&without), None);
        let empty_class = ColoredGraph::from_edges(&[1, 0], &[]).unwrap();
        assert_eq!(solve_multicolored_clique(&empty_class), None);
    }

    #[test]
    fn rectangle_minimum() {
        // a1 < a1' in class 0, b2' < b2 in class 1, full rectangle of edges.
        let edges = [
            (v(0, 0), v(1, 0)),
            (v(0, 0), v(1, 1)),
            (v(0, 1), v(1, 0)),
            (v(0, 1), v(1, 1)),
        ];
        let g = ColoredGraph::from_edges(&[2, 2], &edges).unwrap();
        assert!(is_interval_monotone(&g));
        let k1 = vec![v(0, 0), v(1, 1)];
        let k2 = vec![v(0, 1), v(1, 0)];
        let m = clique_min(&[k1.clone(), k2.clone()], &[0, 1], &g).unwrap();
        assert_eq!(m, vec![v(0, 0), v(1, 0)]);
        assert!(g.is_clique(&m));
        let m = clique_max(&[k1.clone(), k2], &[0, 1], &g).unwrap();
        assert_eq!(m, vec![v(0, 1), v(1, 1)]);
        assert_eq!(
            clique_min(std::slice::from_ref(&k1), &[0, 1], &g).unwrap(),
            k1
        );
    }

    #[test]
    fn clique_min_rejects_non_cliques() {
        let g = ColoredGraph::from_edges(&[2, 2], &[(v(0, 0), v(1, 0))]).unwrap();
        assert!(matches!(
            clique_min(&[vec![v(0, 1), v(1, 1)]], &[0, 1], &g),
            Err(CliqueError::PreconditionViolation(_))
        ));
        assert!(matches!(
            clique_min(&[vec![v(0, 0)]], &[0, 1], &g),
            Err(CliqueError::PreconditionViolation(_))
        ));
    }

    #[test]
    fn antichain_into_chain_has_no_embedding() {
        let p = Poset::chain(4);
        let h = EmbeddingHost::new(&p).unwrap();
        assert_eq!(embed_via_clique(&Poset::antichain(2), &h), None);
    }

    #[test]
    fn three_chain_into_five_chain() {
        let p = Poset::chain(5);
        let h = EmbeddingHost::new(&p).unwrap();
        let e = embed_via_clique(&Poset::chain(3), &h).unwrap();
        assert_eq!(e.0, vec![0, 1, 2]);
    }

    #[test]
    fn neighbours_above_is_suffix() {
        let g =
            ColoredGraph::from_edges(&[1, 4], &[(v(0, 0), v(1, 1)), (v(0, 0), v(1, 2))]).unwrap();
        assert_eq!(neighbours_above(&g, v(0, 0), 1), vec![1, 2, 3]);
        assert_eq!(neighbours_below(&g, v(0, 0), 1), vec![0, 1, 2]);
    }
}
