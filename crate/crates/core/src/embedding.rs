//! Shared vocabulary of the embedding solvers.

use std::fmt;
use std::str::FromStr;

use crate::chains::{dilworth, ChainPartition, WidthCertificate};
use crate::poset::{ElementId, Poset, PosetError};

/// Injective map from pattern elements to host elements, indexed by pattern
/// element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EmbeddingMap(pub Vec<ElementId>);

impl EmbeddingMap {
    pub fn image(&self, q: ElementId) -> ElementId {
        self.0[q]
    }

    pub fn as_slice(&self) -> &[ElementId] {
        &self.0
    }

    /// Checks injectivity and `q ≤ q' ⇔ e(q) ≤ e(q')` for every pair.
    pub fn is_embedding(&self, pattern: &Poset, host: &Poset) -> bool {
        is_embedding(pattern, host, &self.0)
    }
}

pub fn is_embedding(pattern: &Poset, host: &Poset, map: &[ElementId]) -> bool {
    if map.len() != pattern.len() || map.iter().any(|&p| p >= host.len()) {
        return false;
    }
    for a in 0..map.len() {
        for b in 0..map.len() {
            if a != b && map[a] == map[b] {
                return false;
            }
            if pattern.leq(a, b) != host.leq(map[a], map[b]) {
                return false;
            }
        }
    }
    true
}

/// Assignment of each pattern element to a host chain.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompatibilityFunction(pub Vec<usize>);

impl CompatibilityFunction {
    pub fn chain(&self, q: ElementId) -> usize {
        self.0[q]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// All `w^k` compatibility functions in lexicographic order, reading `f` as a
/// base-`w` numeral with pattern element 0 most significant.
pub struct CompatibilityFunctions {
    next: Option<Vec<usize>>,
    chains: usize,
}

impl CompatibilityFunctions {
    pub fn new(pattern_size: usize, chains: usize) -> Self {
        let next = (chains > 0 || pattern_size == 0).then(|| vec![0; pattern_size]);
        CompatibilityFunctions { next, chains }
    }
}

impl Iterator for CompatibilityFunctions {
    type Item = CompatibilityFunction;

    fn next(&mut self) -> Option<CompatibilityFunction> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut i = succ.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            succ[i] += 1;
            if succ[i] < self.chains {
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(CompatibilityFunction(current))
    }
}

/// A host poset together with its minimum chain partition, computed once and
/// shared by every solver call against that host.
#[derive(Debug, Clone)]
pub struct EmbeddingHost<'a> {
    pub poset: &'a Poset,
    pub width: WidthCertificate,
}

impl<'a> EmbeddingHost<'a> {
    pub fn new(poset: &'a Poset) -> Result<Self, PosetError> {
        Ok(EmbeddingHost {
            poset,
            width: dilworth(poset)?,
        })
    }

    pub fn chains(&self) -> &ChainPartition {
        &self.width.partition
    }

    pub fn width(&self) -> usize {
        self.width.width()
    }
}

/// Work counters filled in by the solvers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Compatibility functions examined.
    pub branches: u64,
    /// Elementary steps: relation lookups while building instances, word
    /// operations in support checks, candidate tests in the clique tables.
    pub ops: u64,
}

impl SolveStats {
    #[inline]
    pub fn tick(&mut self, n: u64) {
        self.ops += n;
    }
}

/// Embedding engines selectable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SolverKind {
    #[default]
    Clique,
    Csp,
    Brute,
}

impl SolverKind {
    pub const ALL: [SolverKind; 3] = [SolverKind::Clique, SolverKind::Csp, SolverKind::Brute];

    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Clique => "clique",
            SolverKind::Csp => "csp",
            SolverKind::Brute => "brute",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "clique" => Ok(SolverKind::Clique),
            "csp" => Ok(SolverKind::Csp),
            "brute" => Ok(SolverKind::Brute),
            other => Err(format!(
                "unknown solver `{other}` (expected clique, csp or brute)"
            )),
        }
    }
}
