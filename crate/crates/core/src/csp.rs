//! Compatible embeddings as binary CSPs closed under the chain minimum.
//!
//! For a fixed compatibility function `f`, every pattern element `q` becomes
//! a variable ranging over the chain `C_f(q)` and every pair of pattern
//! elements gets a constraint admitting exactly the host pairs that relate
//! the way the pattern pair does. Those relations are closed under taking
//! coordinatewise minima along the chains, so arc consistency decides the
//! instance and the least surviving value of every domain is a solution.

use std::collections::VecDeque;

use crate::bits::{BitMatrix, BitSet};
use crate::embedding::{
    CompatibilityFunction, CompatibilityFunctions, EmbeddingHost, EmbeddingMap, SolveStats,
};
use crate::poset::{ElementId, Poset};

/// Tuple count above which the exhaustive min-closure assertion is skipped.
const CLOSURE_ASSERT_LIMIT: usize = 1024;

/// Binary constraint between `left` and `right`, stored over domain positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub left: usize,
    pub right: usize,
    // forward[i][j]: (left = D_left[i], right = D_right[j]) is allowed
    forward: BitMatrix,
    backward: BitMatrix,
}

impl Constraint {
    pub fn new(left: usize, right: usize, relation: BitMatrix) -> Self {
        Constraint {
            left,
            right,
            backward: relation.transpose(),
            forward: relation,
        }
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.forward.get(i, j)
    }

    pub fn relation(&self) -> &BitMatrix {
        &self.forward
    }

    pub fn tuples(&self) -> Vec<(usize, usize)> {
        (0..self.forward.rows())
            .flat_map(|i| self.forward.row_ones(i).map(move |j| (i, j)))
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.count_ones() == 0
    }
}

/// Each domain is a host chain listed bottom to top; position order is the
/// order the minimum polymorphism uses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CspInstance {
    pub domains: Vec<Vec<ElementId>>,
    pub constraints: Vec<Constraint>,
    by_var: Vec<Vec<usize>>,
}

impl CspInstance {
    pub fn new(domains: Vec<Vec<ElementId>>, constraints: Vec<Constraint>) -> Self {
        let mut by_var = vec![Vec::new(); domains.len()];
        for (c, con) in constraints.iter().enumerate() {
            assert!(con.left < domains.len() && con.right < domains.len() && con.left != con.right);
            assert_eq!(con.forward.rows(), domains[con.left].len());
            assert_eq!(con.forward.cols(), domains[con.right].len());
            by_var[con.left].push(c);
            by_var[con.right].push(c);
        }
        CspInstance {
            domains,
            constraints,
            by_var,
        }
    }

    pub fn var_count(&self) -> usize {
        self.domains.len()
    }

    /// The constraint on `(a, b)` in either orientation.
    pub fn constraint(&self, a: usize, b: usize) -> Option<&Constraint> {
        self.by_var[a]
            .iter()
            .map(|&c| &self.constraints[c])
            .find(|c| (c.left == a && c.right == b) || (c.left == b && c.right == a))
    }

    /// Whether an assignment of domain positions satisfies every constraint.
    pub fn satisfied_by(&self, positions: &[usize]) -> bool {
        positions.len() == self.var_count()
            && positions
                .iter()
                .zip(&self.domains)
                .all(|(&i, d)| i < d.len())
            && self
                .constraints
                .iter()
                .all(|c| c.contains(positions[c.left], positions[c.right]))
    }
}

/// Exhaustive two-tuple check that every relation is closed under the
/// coordinatewise minimum of domain positions.
pub fn is_min_closed(inst: &CspInstance) -> bool {
    inst.constraints.iter().all(relation_is_min_closed)
}

pub fn relation_is_min_closed(c: &Constraint) -> bool {
    let tuples = c.tuples();
    tuples.iter().all(|&(a, b)| {
        tuples
            .iter()
            .all(|&(a2, b2)| c.contains(a.min(a2), b.min(b2)))
    })
}

/// Builds the CSP whose solutions are exactly the `f`-compatible embeddings
/// of `pattern` into `host`.
pub fn build_csp(
    pattern: &Poset,
    host: &EmbeddingHost<'_>,
    f: &CompatibilityFunction,
    stats: &mut SolveStats,
) -> CspInstance {
    let k = pattern.len();
    assert_eq!(f.len(), k, "compatibility function must cover the pattern");
    let p = host.poset;
    let domains: Vec<Vec<ElementId>> = (0..k)
        .map(|q| host.chains().chain(f.chain(q)).to_vec())
        .collect();
    let mut constraints = Vec::with_capacity(k * k.saturating_sub(1) / 2);
    for q in 0..k {
        for q2 in q + 1..k {
            let want_up = pattern.leq(q, q2);
            let want_down = pattern.leq(q2, q);
            let (d1, d2) = (&domains[q], &domains[q2]);
            let mut rel = BitMatrix::new(d1.len(), d2.len());
            for (i, &a) in d1.iter().enumerate() {
                for (j, &b) in d2.iter().enumerate() {
                    if p.leq(a, b) == want_up && p.leq(b, a) == want_down {
                        rel.set(i, j);
                    }
                }
            }
            stats.tick((d1.len() * d2.len()) as u64);
            constraints.push(Constraint::new(q, q2, rel));
        }
    }
    CspInstance::new(domains, constraints)
}

/// Arc consistency to fixpoint. Returns the surviving domain positions, or
/// `None` once some domain is wiped out.
pub fn arc_consistency(inst: &CspInstance, stats: &mut SolveStats) -> Option<Vec<BitSet>> {
    let mut alive: Vec<BitSet> = inst.domains.iter().map(|d| BitSet::full(d.len())).collect();
    if alive.iter().any(|d| d.is_empty()) {
        return None;
    }
    // Arc (c, false) revises c.left against c.right; (c, true) the reverse.
    let mut queue: VecDeque<(usize, bool)> = VecDeque::new();
    let mut queued = vec![[true; 2]; inst.constraints.len()];
    for c in 0..inst.constraints.len() {
        queue.extend([(c, false), (c, true)]);
    }
    while let Some((c, side)) = queue.pop_front() {
        queued[c][side as usize] = false;
        let con = &inst.constraints[c];
        let (x, y, rel) = if side {
            (con.right, con.left, &con.backward)
        } else {
            (con.left, con.right, &con.forward)
        };
        let mut removed = Vec::new();
        for i in alive[x].ones() {
            let row = rel.row(i);
            stats.tick(row.len() as u64);
            if !alive[y].intersects(row) {
                removed.push(i);
            }
        }
        if removed.is_empty() {
            continue;
        }
        for i in removed {
            alive[x].remove(i);
        }
        if alive[x].is_empty() {
            return None;
        }
        for &c2 in &inst.by_var[x] {
            if c2 == c {
                continue;
            }
            // revise the other end of c2 against the shrunken x
            let side2 = inst.constraints[c2].left == x;
            if !queued[c2][side2 as usize] {
                queued[c2][side2 as usize] = true;
                queue.push_back((c2, side2));
            }
        }
    }
    Some(alive)
}

/// Solves a min-closed binary CSP; the answer is the least solution, given as
/// host elements per variable.
pub fn solve_min_closed(inst: &CspInstance, stats: &mut SolveStats) -> Option<Vec<ElementId>> {
    debug_assert!(
        inst.constraints
            .iter()
            .all(|c| c.forward.count_ones() > CLOSURE_ASSERT_LIMIT || relation_is_min_closed(c)),
        "CSP instance is not closed under the chain minimum"
    );
    let alive = arc_consistency(inst, stats)?;
    let positions: Vec<usize> = alive
        .iter()
        .map(|d| d.first().expect("arc consistency leaves nonempty domains"))
        .collect();
    debug_assert!(
        inst.satisfied_by(&positions),
        "domain minima do not form a solution"
    );
    Some(
        positions
            .iter()
            .zip(&inst.domains)
            .map(|(&i, d)| d[i])
            .collect(),
    )
}

/// Embedding search over all compatibility functions, CSP engine.
pub fn embed_via_csp(pattern: &Poset, host: &EmbeddingHost<'_>) -> Option<EmbeddingMap> {
    embed_via_csp_counted(pattern, host, &mut SolveStats::default())
}

pub fn embed_via_csp_counted(
    pattern: &Poset,
    host: &EmbeddingHost<'_>,
    stats: &mut SolveStats,
) -> Option<EmbeddingMap> {
    if pattern.is_empty() {
        return Some(EmbeddingMap(Vec::new()));
    }
    for f in CompatibilityFunctions::new(pattern.len(), host.width()) {
        stats.branches += 1;
        let inst = build_csp(pattern, host, &f, stats);
        if let Some(images) = solve_min_closed(&inst, stats) {
            let map = EmbeddingMap(images);
            assert!(
                map.is_embedding(pattern, host.poset),
                "CSP solution is not an embedding"
            );
            return Some(map);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn host(p: &Poset) -> EmbeddingHost<'_> {
        EmbeddingHost::new(p).unwrap()
    }

    #[test]
    fn chain_into_chain_relation() {
        let p = Poset::chain(3);
        let h = host(&p);
        let inst = build_csp(
            &Poset::chain(2),
            &h,
            &CompatibilityFunction(vec![0, 0]),
            &mut SolveStats::default(),
        );
        assert_eq!(inst.constraints.len(), 1);
        assert_eq!(inst.constraints[0].tuples(), vec![(0, 1), (0, 2), (1, 2)]);
        assert!(is_min_closed(&inst));
    }

    #[test]
    fn antichain_into_chain_is_empty() {
        let p = Poset::chain(4);
        let h = host(&p);
        let inst = build_csp(
            &Poset::antichain(2),
            &h,
            &CompatibilityFunction(vec![0, 0]),
            &mut SolveStats::default(),
        );
        assert!(inst.constraints[0].is_empty());
        assert_eq!(solve_min_closed(&inst, &mut SolveStats::default()), None);
    }

    #[test]
    fn unconstrained_takes_minima() {
        let inst = CspInstance::new(vec![vec![4, 7], vec![2, 3, 9]], vec![]);
        assert_eq!(
            solve_min_closed(&inst, &mut SolveStats::default()),
            Some(vec![4, 2])
        );
    }

    #[test]
    fn empty_relation_fails() {
        let inst = CspInstance::new(
            vec![vec![0, 1], vec![2]],
            vec![Constraint::new(0, 1, BitMatrix::new(2, 1))],
        );
        assert_eq!(solve_min_closed(&inst, &mut SolveStats::default()), None);
    }

    #[test]
    fn propagation_moves_minimum_up() {
        // x < y on positions: x in {0,1,2}, y in {0,1,2}, allowed i < j; plus y >= 2 forced by z.
        let mut lt = BitMatrix::new(3, 3);
        for i in 0..3 {
            for j in i + 1..3 {
                lt.set(i, j);
            }
        }
        let mut only_top = BitMatrix::new(3, 1);
        only_top.set(2, 0);
        let inst = CspInstance::new(
            vec![vec![10, 11, 12], vec![20, 21, 22], vec![30]],
            vec![Constraint::new(0, 1, lt), Constraint::new(1, 2, only_top)],
        );
        assert!(is_min_closed(&inst));
        assert_eq!(
            solve_min_closed(&inst, &mut SolveStats::default()),
            Some(vec![10, 22, 30])
        );
    }

    #[test]
    fn non_min_closed_relation_is_detected() {
        let mut rel = BitMatrix::new(2, 2);
        rel.set(0, 1);
        rel.set(1, 0);
        assert!(!relation_is_min_closed(&Constraint::new(0, 1, rel)));
    }

    #[test]
    fn embed_single_element() {
        let p = Poset::close_and_validate(4, [(1, 0), (2, 3)]).unwrap();
        let h = host(&p);
        let e = embed_via_csp(&Poset::chain(1), &h).unwrap();
        assert_eq!(e.0, vec![h.chains().chain(0)[0]]);
    }

    #[test]
    fn antichain_does_not_fit_chain() {
        let p = Poset::chain(2);
        assert_eq!(embed_via_csp(&Poset::antichain(2), &host(&p)), None);
    }

    #[test]
    fn counts_branches() {
        let p = Poset::antichain(3);
        let h = host(&p);
        let mut stats = SolveStats::default();
        assert!(embed_via_csp_counted(&Poset::chain(2), &h, &mut stats).is_none());
        assert_eq!(stats.branches, 9);
        assert!(stats.ops > 0);
    }
}
