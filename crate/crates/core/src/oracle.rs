//! Exhaustive reference implementations.
//!
//! Nothing here shares code with the solvers beyond the plain `leq` and
//! `adjacent` accessors: no chain partitions, no bit-row tricks, no pruning.

use thiserror::Error;

use crate::clique::{ColoredGraph, Vertex};
use crate::embedding::EmbeddingMap;
use crate::logic::{eval_matrix, Sentence};
use crate::poset::{ElementId, Poset};

/// Environment variable overriding [`OracleCaps`].
pub const CAP_ENV: &str = "POSETMC_ORACLE_CAP";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle cap exceeded: {what} is {actual}, cap {cap}")]
    CapExceeded {
        what: &'static str,
        actual: u128,
        cap: u128,
    },
    #[error("invalid {CAP_ENV} value `{0}`")]
    BadCaps(String),
}

/// Size limits keeping oracle runs short.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleCaps {
    pub pattern: usize,
    pub host: usize,
    pub assignments: u128,
    pub transversals: u128,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps {
            pattern: 6,
            host: 16,
            assignments: 1_000_000,
            transversals: 1_000_000,
        }
    }
}

impl OracleCaps {
    /// Parses either a bare number (overrides both enumeration-count caps) or
    /// a comma list of `pattern=`, `host=`, `assignments=`, `transversals=`.
    pub fn parse(text: &str) -> Result<Self, OracleError> {
        let bad = || OracleError::BadCaps(text.to_string());
        let mut caps = OracleCaps::default();
        if let Ok(n) = text.trim().parse::<u128>() {
            caps.assignments = n;
            caps.transversals = n;
            return Ok(caps);
        }
        for item in text.split(',') {
            let (key, value) = item.split_once('=').ok_or_else(bad)?;
            let value: u128 = value.trim().parse().map_err(|_| bad())?;
            match key.trim() {
                "pattern" => caps.pattern = value as usize,
                "host" => caps.host = value as usize,
                "assignments" => caps.assignments = value,
                "transversals" => caps.transversals = value,
                _ => return Err(bad()),
            }
        }
        Ok(caps)
    }

    /// Defaults, overridden by `POSETMC_ORACLE_CAP` when set.
    pub fn from_env() -> Result<Self, OracleError> {
        match std::env::var(CAP_ENV) {
            Ok(text) => OracleCaps::parse(&text),
            Err(_) => Ok(OracleCaps::default()),
        }
    }
}

fn cap(what: &'static str, actual: u128, cap: u128) -> Result<(), OracleError> {
    if actual > cap {
        Err(OracleError::CapExceeded { what, actual, cap })
    } else {
        Ok(())
    }
}

/// First injective map, in lexicographic order, that is an embedding.
pub fn brute_force_embed(
    pattern: &Poset,
    host: &Poset,
    caps: &OracleCaps,
) -> Result<Option<EmbeddingMap>, OracleError> {
    cap("pattern size", pattern.len() as u128, caps.pattern as u128)?;
    cap("host size", host.len() as u128, caps.host as u128)?;
    let (k, n) = (pattern.len(), host.len());
    if k > n {
        return Ok(None);
    }
    let mut map = vec![0; k];
    let mut used = vec![false; n];
    Ok(injective_maps(pattern, host, 0, &mut map, &mut used).then_some(EmbeddingMap(map)))
}

/// Whether the newest image `map[d]` agrees with every earlier one.
fn consistent(pattern: &Poset, host: &Poset, map: &[ElementId], d: usize) -> bool {
    (0..=d).all(|a| {
        pattern.leq(a, d) == host.leq(map[a], map[d])
            && pattern.leq(d, a) == host.leq(map[d], map[a])
    })
}

/// Depth-first over injective maps in lexicographic order; stops with `map`
/// holding the first embedding. A prefix that already breaks the definition
/// is abandoned, which skips only failing maps.
fn injective_maps(
    pattern: &Poset,
    host: &Poset,
    depth: usize,
    map: &mut [ElementId],
    used: &mut [bool],
) -> bool {
    if depth == map.len() {
        return true;
    }
    for p in 0..used.len() {
        if used[p] {
            continue;
        }
        map[depth] = p;
        if !consistent(pattern, host, map, depth) {
            continue;
        }
        used[p] = true;
        if injective_maps(pattern, host, depth + 1, map, used) {
            return true;
        }
        used[p] = false;
    }
    false
}

/// Whether some assignment of host elements to the variables satisfies the
/// matrix.
pub fn brute_force_model_check(
    s: &Sentence,
    p: &Poset,
    caps: &OracleCaps,
) -> Result<bool, OracleError> {
    brute_force_witness(s, p, caps).map(|w| w.is_some())
}

/// First satisfying assignment in lexicographic order.
pub fn brute_force_witness(
    s: &Sentence,
    p: &Poset,
    caps: &OracleCaps,
) -> Result<Option<Vec<ElementId>>, OracleError> {
    let q = s.var_count();
    let n = p.len();
    let total = (n as u128).checked_pow(q as u32).unwrap_or(u128::MAX);
    cap("assignment count", total, caps.assignments)?;
    if n == 0 {
        return Ok(None);
    }
    let mut a = vec![0; q];
    loop {
        if eval_matrix(&s.matrix, p, &a).expect("assignment covers every variable") {
            return Ok(Some(a));
        }
        let mut i = q;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            a[i] += 1;
            if a[i] < n {
                break;
            }
            a[i] = 0;
        }
    }
}

/// Size of the largest pairwise-incomparable subset.
pub fn brute_force_width(p: &Poset, caps: &OracleCaps) -> Result<usize, OracleError> {
    cap("poset size", p.len() as u128, caps.host as u128)?;
    let n = p.len();
    let mut best = 0;
    for mask in 0u32..(1u32 << n) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let antichain = members.iter().all(|&a| {
            members
                .iter()
                .all(|&b| a == b || (!p.leq(a, b) && !p.leq(b, a)))
        });
        if antichain {
            best = size;
        }
    }
    Ok(best)
}

/// First pairwise-adjacent transversal (one vertex per class) in
/// lexicographic order of positions.
pub fn brute_force_clique(
    g: &ColoredGraph,
    caps: &OracleCaps,
) -> Result<Option<Vec<usize>>, OracleError> {
    let k = g.k();
    let total = (0..k).fold(1u128, |acc, i| acc.saturating_mul(g.class_len(i) as u128));
    cap("transversal count", total, caps.transversals)?;
    if total == 0 {
        return Ok(None);
    }
    let mut t = vec![0; k];
    loop {
        let ok = (0..k)
            .all(|i| (i + 1..k).all(|j| g.adjacent(Vertex::new(i, t[i]), Vertex::new(j, t[j]))));
        if ok {
            return Ok(Some(t));
        }
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            t[i] += 1;
            if t[i] < g.class_len(i) {
                break;
            }
            t[i] = 0;
        }
    }
}

/// All cliques using vertex `v` of class `i` plus one vertex from each class
/// below `i`, as positions for classes `0..=i`.
pub fn brute_force_prefix_cliques(g: &ColoredGraph, i: usize, v: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut t = vec![0; i + 1];
    t[i] = v;
    prefix_rec(g, 0, &mut t, &mut out);
    out
}

fn prefix_rec(g: &ColoredGraph, c: usize, t: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let i = t.len() - 1;
    if c == i {
        let ok = (0..=i)
            .all(|a| (a + 1..=i).all(|b| g.adjacent(Vertex::new(a, t[a]), Vertex::new(b, t[b]))));
        if ok {
            out.push(t.clone());
        }
        return;
    }
    for p in 0..g.class_len(c) {
        t[c] = p;
        prefix_rec(g, c + 1, t, out);
    }
}

/// Classwise extreme of a list of position vectors.
pub fn coordinatewise(
    cliques: &[Vec<usize>],
    pick: fn(usize, usize) -> usize,
) -> Option<Vec<usize>> {
    let first = cliques.first()?.clone();
    Some(cliques[1..].iter().fold(first, |acc, c| {
        acc.iter().zip(c).map(|(&a, &b)| pick(a, b)).collect()
    }))
}
