//! Finite posets stored as a dense `≤` matrix.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::bits::{BitMatrix, Ones};

/// Index of an element of a poset, dense in `[0, n)`.
pub type ElementId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("element index {index} out of range for a poset of {n} elements")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("antisymmetry violated by the cycle {}", format_cycle(.cycle))]
    AntisymmetryViolation { cycle: Vec<ElementId> },
    #[error("operation requires a nonempty poset")]
    Empty,
}

fn format_cycle(cycle: &[ElementId]) -> String {
    cycle
        .iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join(" <= ")
}

/// How two elements of a poset relate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    LessThan,
    GreaterThan,
    Equal,
    Incomparable,
}

/// A finite partially ordered set on `{0, …, n-1}`.
///
/// The relation is kept reflexive, antisymmetric and transitive by every
/// constructor; `leq.get(a, b)` holds iff `a ≤ b`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    n: usize,
    leq: BitMatrix,
    // transpose of `leq`
    geq: BitMatrix,
}

impl Poset {
    /// The reflexive-transitive closure of `pairs` on `n` elements.
    pub fn close_and_validate(
        n: usize,
        pairs: impl IntoIterator<Item = (ElementId, ElementId)>,
    ) -> Result<Poset, PosetError> {
        let mut leq = BitMatrix::new(n, n);
        let mut arcs = Vec::new();
        for (a, b) in pairs {
            for index in [a, b] {
                if index >= n {
                    return Err(PosetError::IndexOutOfRange { index, n });
                }
            }
            leq.set(a, b);
            arcs.push((a, b));
        }
        for a in 0..n {
            leq.set(a, a);
        }
        // Warshall over packed rows.
        for k in 0..n {
            for i in 0..n {
                if i != k && leq.get(i, k) {
                    leq.or_row_into(k, i);
                }
            }
        }
        for a in 0..n {
            for b in leq.row_ones(a) {
                if b != a && leq.get(b, a) {
                    return Err(PosetError::AntisymmetryViolation {
                        cycle: find_cycle(n, &arcs, a, b),
                    });
                }
            }
        }
        Ok(Poset::from_closed_matrix(leq))
    }

    /// Wraps a relation that the caller guarantees is already a partial order.
    pub(crate) fn from_closed_matrix(leq: BitMatrix) -> Poset {
        debug_assert_eq!(leq.rows(), leq.cols());
        let p = Poset {
            n: leq.rows(),
            geq: leq.transpose(),
            leq,
        };
        debug_assert!(p.n > 64 || p.satisfies_axioms());
        p
    }

    pub fn antichain(n: usize) -> Poset {
        Poset::close_and_validate(n, []).expect("antichain is a poset")
    }

    pub fn chain(n: usize) -> Poset {
        let mut leq = BitMatrix::new(n, n);
        for a in 0..n {
            for b in a..n {
                leq.set(a, b);
            }
        }
        Poset::from_closed_matrix(leq)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn leq(&self, a: ElementId, b: ElementId) -> bool {
        self.leq.get(a, b)
    }

    #[inline]
    pub fn lt(&self, a: ElementId, b: ElementId) -> bool {
        a != b && self.leq.get(a, b)
    }

    #[inline]
    pub fn comparable(&self, a: ElementId, b: ElementId) -> bool {
        self.leq.get(a, b) || self.leq.get(b, a)
    }

    pub fn relate(&self, a: ElementId, b: ElementId) -> Relation {
        if a == b {
            Relation::Equal
        } else if self.leq(a, b) {
            Relation::LessThan
        } else if self.leq(b, a) {
            Relation::GreaterThan
        } else {
            Relation::Incomparable
        }
    }

    /// Packed row of `a`: bit `b` is set iff `a ≤ b`.
    pub fn up_row(&self, a: ElementId) -> &[u64] {
        self.leq.row(a)
    }

    /// Packed row of `b`: bit `a` is set iff `a ≤ b`.
    pub fn down_row(&self, b: ElementId) -> &[u64] {
        self.geq.row(b)
    }

    /// Elements `b` with `a ≤ b`, ascending by index (includes `a`).
    pub fn up_set(&self, a: ElementId) -> Ones<'_> {
        self.leq.row_ones(a)
    }

    /// Number of pairs in the relation, reflexive pairs included.
    pub fn relation_size(&self) -> usize {
        self.leq.count_ones()
    }

    /// All pairs `(a, b)` with `a ≤ b`.
    pub fn pairs(&self) -> impl Iterator<Item = (ElementId, ElementId)> + '_ {
        (0..self.n).flat_map(move |a| self.leq.row_ones(a).map(move |b| (a, b)))
    }

    /// The Hasse diagram: pairs `(a, b)` where `b` covers `a`.
    pub fn cover_pairs(&self) -> Vec<(ElementId, ElementId)> {
        let mut covers = Vec::new();
        for a in 0..self.n {
            let up = self.leq.row(a);
            for b in self.leq.row_ones(a) {
                if b == a {
                    continue;
                }
                // the interval [a, b] always holds a and b themselves
                let interval: u32 = up
                    .iter()
                    .zip(self.geq.row(b))
                    .map(|(x, y)| (x & y).count_ones())
                    .sum();
                if interval == 2 {
                    covers.push((a, b));
                }
            }
        }
        covers
    }

    /// Disjoint union; `other`'s elements are shifted by `self.len()`.
    pub fn disjoint_union(&self, other: &Poset) -> Poset {
        let n = self.n + other.n;
        let mut leq = BitMatrix::new(n, n);
        for (a, b) in self.pairs() {
            leq.set(a, b);
        }
        for (a, b) in other.pairs() {
            leq.set(a + self.n, b + self.n);
        }
        Poset::from_closed_matrix(leq)
    }

    /// Full cubic check of the three partial-order axioms.
    pub fn satisfies_axioms(&self) -> bool {
        let n = self.n;
        for a in 0..n {
            if !self.leq(a, a) {
                return false;
            }
            for b in 0..n {
                if a != b && self.leq(a, b) && self.leq(b, a) {
                    return false;
                }
                if !self.leq(a, b) {
                    continue;
                }
                for c in 0..n {
                    if self.leq(b, c) && !self.leq(a, c) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poset(n={}, covers={:?})", self.n, self.cover_pairs())
    }
}

/// Shortest cycle through `a` and `b` in the arc graph, as `a … b … a`.
fn find_cycle(
    n: usize,
    arcs: &[(ElementId, ElementId)],
    a: ElementId,
    b: ElementId,
) -> Vec<ElementId> {
    let mut out = vec![Vec::new(); n];
    for &(u, v) in arcs {
        out[u].push(v);
    }
    let path = |from: ElementId, to: ElementId| -> Vec<ElementId> {
        let mut prev = vec![usize::MAX; n];
        prev[from] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            if u == to {
                break;
            }
            for &v in &out[u] {
                if prev[v] == usize::MAX {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        let mut p = vec![to];
        let mut cur = to;
        while cur != from {
            cur = prev[cur];
            p.push(cur);
        }
        p.reverse();
        p
    };
    let mut cycle = path(a, b);
    cycle.extend(path(b, a).into_iter().skip(1));
    cycle
}
