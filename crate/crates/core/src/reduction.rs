//! From existential sentences to embedding instances.
//!
//! A sentence `∃x₁…∃x_q. ψ` holds in `P` iff some finite poset on the
//! variables, taken modulo equality, satisfies `ψ` and embeds into `P`.
//! [`enumerate_templates`] lists every such quotient poset; [`model_check`]
//! tries them in order against a chosen embedding engine.

use std::ops::ControlFlow;

use thiserror::Error;

use crate::bits::BitMatrix;
use crate::clique::embed_via_clique_counted;
use crate::csp::embed_via_csp_counted;
use crate::embedding::{EmbeddingHost, EmbeddingMap, SolveStats, SolverKind};
use crate::logic::{eval_matrix, Atom, AtomKind, Matrix, Sentence};
use crate::oracle::{brute_force_embed, OracleCaps, OracleError};
use crate::poset::{ElementId, Poset};

pub const DEFAULT_MAX_VARS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("sentence has {q} variables, more than the cap of {cap}")]
    TooManyVariables { q: usize, cap: usize },
    #[error("sentence has no quantified variables")]
    NoVariables,
    #[error("host poset is empty")]
    EmptyHost,
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// A partition of the variables into blocks plus a partial order on the
/// blocks under which the matrix holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientTemplate {
    pub blocks: Vec<Vec<usize>>,
    pub block_of: Vec<usize>,
    pub pattern: Poset,
}

impl QuotientTemplate {
    /// `(partition, relation)` key; equal keys mean identical templates.
    pub fn key(&self) -> (Vec<usize>, Vec<(ElementId, ElementId)>) {
        (self.block_of.clone(), self.pattern.pairs().collect())
    }

    /// Whether the matrix holds when `x ≤ y` is read as the block order and
    /// `x = y` as sharing a block.
    pub fn satisfies(&self, m: &Matrix) -> bool {
        eval_matrix(m, &self.pattern, &self.block_of).unwrap_or(false)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Truth {
    True,
    False,
    Unknown,
}

fn eval3(m: &Matrix, atom: &impl Fn(&Atom) -> Truth) -> Truth {
    match m {
        Matrix::Literal { atom: a, negated } => match (atom(a), negated) {
            (Truth::Unknown, _) => Truth::Unknown,
            (t, false) => t,
            (Truth::True, true) => Truth::False,
            (Truth::False, true) => Truth::True,
        },
        Matrix::And(l, r) => match (eval3(l, atom), eval3(r, atom)) {
            (Truth::False, _) | (_, Truth::False) => Truth::False,
            (Truth::True, Truth::True) => Truth::True,
            _ => Truth::Unknown,
        },
        Matrix::Or(l, r) => match (eval3(l, atom), eval3(r, atom)) {
            (Truth::True, _) | (_, Truth::True) => Truth::True,
            (Truth::False, Truth::False) => Truth::False,
            _ => Truth::Unknown,
        },
    }
}

/// Every satisfying template, in enumeration order, with the default cap.
pub fn enumerate_templates(s: &Sentence) -> Result<Vec<QuotientTemplate>, ReductionError> {
    enumerate_templates_capped(s, DEFAULT_MAX_VARS)
}

pub fn enumerate_templates_capped(
    s: &Sentence,
    max_vars: usize,
) -> Result<Vec<QuotientTemplate>, ReductionError> {
    let mut out = Vec::new();
    for_each_template(s, max_vars, |t| {
        out.push(t);
        ControlFlow::Continue(())
    })?;
    #[cfg(debug_assertions)]
    {
        let keys: std::collections::HashSet<_> = out.iter().map(|t| t.key()).collect();
        assert_eq!(keys.len(), out.len(), "duplicate quotient template");
    }
    Ok(out)
}

/// Streams templates in order: set partitions as restricted-growth strings in
/// lexicographic order, then for each partition the labelled partial orders
/// on its blocks, built one block at a time. Block `j` is related to each
/// earlier block `i` by a digit (0 incomparable, 1 `i < j`, 2 `j < i`) and
/// digit vectors are visited lexicographically. Branches on which the matrix
/// is already false are cut.
pub fn for_each_template(
    s: &Sentence,
    max_vars: usize,
    mut visit: impl FnMut(QuotientTemplate) -> ControlFlow<()>,
) -> Result<(), ReductionError> {
    let q = s.var_count();
    if q == 0 {
        return Err(ReductionError::NoVariables);
    }
    if q > max_vars {
        return Err(ReductionError::TooManyVariables { q, cap: max_vars });
    }
    let mut rgs = vec![0usize; q];
    let _ = partitions(s, 1, &mut rgs, &mut visit);
    Ok(())
}

fn partitions(
    s: &Sentence,
    i: usize,
    rgs: &mut Vec<usize>,
    visit: &mut impl FnMut(QuotientTemplate) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if i == rgs.len() {
        let b = rgs.iter().max().map_or(0, |m| m + 1);
        let block_of = rgs.clone();
        let by_partition = |a: &Atom| -> Truth {
            let same = block_of[a.left] == block_of[a.right];
            match (a.kind, same) {
                (_, true) => Truth::True,
                (AtomKind::Eq, false) => Truth::False,
                (AtomKind::Leq, false) => Truth::Unknown,
            }
        };
        if eval3(&s.matrix, &by_partition) == Truth::False {
            return ControlFlow::Continue(());
        }
        let mut le = vec![vec![false; b]; b];
        for (x, row) in le.iter_mut().enumerate() {
            row[x] = true;
        }
        return orders(s, &block_of, b, 1, &mut le, visit);
    }
    let top = rgs[..i].iter().max().copied().unwrap_or(0) + 1;
    for c in 0..=top {
        rgs[i] = c;
        partitions(s, i + 1, rgs, visit)?;
    }
    ControlFlow::Continue(())
}

/// Extends a partial order on blocks `0..j` by block `j`.
fn orders(
    s: &Sentence,
    block_of: &[usize],
    b: usize,
    j: usize,
    le: &mut Vec<Vec<bool>>,
    visit: &mut impl FnMut(QuotientTemplate) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let decided = j.min(b);
    let truth = eval3(&s.matrix, &|a: &Atom| {
        let (x, y) = (block_of[a.left], block_of[a.right]);
        match a.kind {
            AtomKind::Eq => {
                if x == y {
                    Truth::True
                } else {
                    Truth::False
                }
            }
            AtomKind::Leq if x == y => Truth::True,
            AtomKind::Leq if x < decided && y < decided => {
                if le[x][y] {
                    Truth::True
                } else {
                    Truth::False
                }
            }
            AtomKind::Leq => Truth::Unknown,
        }
    });
    if truth == Truth::False {
        return ControlFlow::Continue(());
    }
    if j >= b {
        debug_assert_eq!(truth, Truth::True);
        return visit(template(block_of, b, le));
    }
    let mut digits = vec![0u8; j];
    loop {
        if extension_is_order(le, &digits) {
            for (i, &d) in digits.iter().enumerate() {
                le[i][j] = d == 1;
                le[j][i] = d == 2;
            }
            let flow = orders(s, block_of, b, j + 1, le, visit);
            for row in le.iter_mut().take(j) {
                row[j] = false;
            }
            le[j][..j].fill(false);
            flow?;
        }
        // odometer, last digit fastest
        let mut pos = j;
        loop {
            if pos == 0 {
                return ControlFlow::Continue(());
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < 3 {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// Whether placing a new element below the blocks marked 2 and above the
/// blocks marked 1 keeps the relation a partial order.
fn extension_is_order(le: &[Vec<bool>], digits: &[u8]) -> bool {
    let j = digits.len();
    for i in 0..j {
        for i2 in 0..j {
            if i == i2 {
                continue;
            }
            // below-set is a down-set, above-set an up-set
            if digits[i] == 1 && le[i2][i] && digits[i2] != 1 {
                return false;
            }
            if digits[i] == 2 && le[i][i2] && digits[i2] != 2 {
                return false;
            }
            // everything below the new element is below everything above it
            if digits[i] == 1 && digits[i2] == 2 && !le[i][i2] {
                return false;
            }
        }
    }
    true
}

fn template(block_of: &[usize], b: usize, le: &[Vec<bool>]) -> QuotientTemplate {
    let mut m = BitMatrix::new(b, b);
    for (x, row) in le.iter().enumerate().take(b) {
        for (y, &v) in row.iter().enumerate().take(b) {
            if v {
                m.set(x, y);
            }
        }
    }
    let mut blocks = vec![Vec::new(); b];
    for (var, &blk) in block_of.iter().enumerate() {
        blocks[blk].push(var);
    }
    QuotientTemplate {
        blocks,
        block_of: block_of.to_vec(),
        pattern: Poset::from_closed_matrix(m),
    }
}

/// Settings for [`model_check_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    pub solver: SolverKind,
    pub max_vars: usize,
    pub caps: OracleCaps,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            solver: SolverKind::default(),
            max_vars: DEFAULT_MAX_VARS,
            caps: OracleCaps::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub holds: bool,
    /// Host element per variable, when `holds`.
    pub witness: Option<Vec<ElementId>>,
    /// Templates handed to the embedding engine.
    pub templates_tried: usize,
}

/// Decides `p ⊨ s` with the given engine.
pub fn model_check(
    s: &Sentence,
    p: &Poset,
    solver: SolverKind,
) -> Result<CheckOutcome, ReductionError> {
    let opts = CheckOptions {
        solver,
        ..CheckOptions::default()
    };
    model_check_with(s, p, &opts, &mut SolveStats::default())
}

pub fn model_check_with(
    s: &Sentence,
    p: &Poset,
    opts: &CheckOptions,
    stats: &mut SolveStats,
) -> Result<CheckOutcome, ReductionError> {
    if p.is_empty() {
        return Err(ReductionError::EmptyHost);
    }
    let host = EmbeddingHost::new(p).map_err(|_| ReductionError::EmptyHost)?;
    let mut found: Option<Vec<ElementId>> = None;
    let mut failure: Option<ReductionError> = None;
    let mut tried = 0;
    for_each_template(s, opts.max_vars, |t| {
        tried += 1;
        match embed_with(opts, &t.pattern, &host, stats) {
            Ok(Some(e)) => {
                found = Some(t.block_of.iter().map(|&blk| e.image(blk)).collect());
                ControlFlow::Break(())
            }
            Ok(None) => ControlFlow::Continue(()),
            Err(err) => {
                failure = Some(err);
                ControlFlow::Break(())
            }
        }
    })?;
    if let Some(err) = failure {
        return Err(err);
    }
    if let Some(w) = &found {
        debug_assert!(
            eval_matrix(&s.matrix, p, w).unwrap_or(false),
            "witness does not satisfy the matrix"
        );
    }
    Ok(CheckOutcome {
        holds: found.is_some(),
        witness: found,
        templates_tried: tried,
    })
}

/// Runs one embedding query with the selected engine.
pub fn embed_with(
    opts: &CheckOptions,
    pattern: &Poset,
    host: &EmbeddingHost<'_>,
    stats: &mut SolveStats,
) -> Result<Option<EmbeddingMap>, ReductionError> {
    Ok(match opts.solver {
        SolverKind::Clique => embed_via_clique_counted(pattern, host, stats),
        SolverKind::Csp => embed_via_csp_counted(pattern, host, stats),
        SolverKind::Brute => {
            stats.branches += 1;
            brute_force_embed(pattern, host.poset, &opts.caps)?
        }
    })
}
