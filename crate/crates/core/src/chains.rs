//! Width and minimum chain partition via maximum bipartite matching.
//!
//! The comparability relation is split into a bipartite graph with a left
//! and a right copy of every element and an edge `a → b` whenever `a < b`.
//! A maximum matching links each element to its successor on a chain, so the
//! number of chains is `n − |M|`. König's theorem turns the same matching into
//! a minimum vertex cover, and the elements with neither copy in the cover
//! form an antichain of size `n − |M|`, certifying optimality.

use std::collections::VecDeque;

use crate::poset::{ElementId, Poset, PosetError};

/// A partition of a poset into chains, each listed bottom to top.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainPartition {
    chains: Vec<Vec<ElementId>>,
    chain_of: Vec<usize>,
    position: Vec<usize>,
}

impl ChainPartition {
    /// Builds a partition from explicit chains. Each chain must be listed in
    /// ascending order; the chains must cover `[0, p.len())` exactly once.
    pub fn from_chains(p: &Poset, chains: Vec<Vec<ElementId>>) -> Option<ChainPartition> {
        let n = p.len();
        let mut chain_of = vec![usize::MAX; n];
        let mut position = vec![usize::MAX; n];
        for (c, chain) in chains.iter().enumerate() {
            if chain.is_empty() {
                return None;
            }
            for (i, &e) in chain.iter().enumerate() {
                if e >= n || chain_of[e] != usize::MAX {
                    return None;
                }
                if i > 0 && !p.lt(chain[i - 1], e) {
                    return None;
                }
                chain_of[e] = c;
                position[e] = i;
            }
        }
        if chain_of.contains(&usize::MAX) {
            return None;
        }
        Some(ChainPartition {
            chains,
            chain_of,
            position,
        })
    }

    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    pub fn chains(&self) -> &[Vec<ElementId>] {
        &self.chains
    }

    pub fn chain(&self, c: usize) -> &[ElementId] {
        &self.chains[c]
    }

    pub fn chain_of(&self, e: ElementId) -> usize {
        self.chain_of[e]
    }

    /// Position of `e` inside its chain, 0 being the bottom.
    pub fn position(&self, e: ElementId) -> usize {
        self.position[e]
    }
}

/// Width of a poset together with a chain partition and an antichain that
/// witness each other.
#[derive(Debug, Clone)]
pub struct WidthCertificate {
    pub partition: ChainPartition,
    pub antichain: Vec<ElementId>,
}

impl WidthCertificate {
    pub fn width(&self) -> usize {
        self.partition.len()
    }

    /// Checks that the antichain is pairwise incomparable and as large as the
    /// partition.
    pub fn verify(&self, p: &Poset) -> bool {
        use crate::poset::Relation;
        let a = &self.antichain;
        a.len() == self.partition.len()
            && a.iter().enumerate().all(|(i, &x)| {
                a[i + 1..]
                    .iter()
                    .all(|&y| p.relate(x, y) == Relation::Incomparable)
            })
    }
}

/// Computes `width(p)` and a partition into exactly that many chains.
pub fn width_and_chain_partition(p: &Poset) -> Result<(usize, ChainPartition), PosetError> {
    let cert = dilworth(p)?;
    Ok((cert.width(), cert.partition))
}

/// Minimum chain partition plus maximum antichain.
pub fn dilworth(p: &Poset) -> Result<WidthCertificate, PosetError> {
    let n = p.len();
    if n == 0 {
        return Err(PosetError::Empty);
    }
    let adj: Vec<Vec<u32>> = (0..n)
        .map(|a| p.up_set(a).filter(|&b| b != a).map(|b| b as u32).collect())
        .collect();
    let matching = hopcroft_karp(&adj, n);

    let mut chains = Vec::new();
    for start in 0..n {
        if matching.right_to_left[start].is_some() {
            continue;
        }
        let mut chain = vec![start];
        let mut cur = start;
        while let Some(next) = matching.left_to_right[cur] {
            chain.push(next);
            cur = next;
        }
        chains.push(chain);
    }
    // `start` ascends, so chains come out ordered by their least element.
    let partition = ChainPartition::from_chains(p, chains).expect("matched paths form chains");

    // König: alternating reachability from unmatched left vertices.
    let mut seen_left = vec![false; n];
    let mut seen_right = vec![false; n];
    let mut queue: VecDeque<usize> = (0..n)
        .filter(|&a| matching.left_to_right[a].is_none())
        .collect();
    for &a in &queue {
        seen_left[a] = true;
    }
    while let Some(a) = queue.pop_front() {
        for &b in &adj[a] {
            let b = b as usize;
            if seen_right[b] {
                continue;
            }
            seen_right[b] = true;
            if let Some(a2) = matching.right_to_left[b] {
                if !seen_left[a2] {
                    seen_left[a2] = true;
                    queue.push_back(a2);
                }
            }
        }
    }
    let antichain: Vec<ElementId> = (0..n).filter(|&x| seen_left[x] && !seen_right[x]).collect();

    let cert = WidthCertificate {
        partition,
        antichain,
    };
    debug_assert!(cert.verify(p), "König antichain has the wrong size");
    Ok(cert)
}

struct Matching {
    left_to_right: Vec<Option<usize>>,
    right_to_left: Vec<Option<usize>>,
}

fn hopcroft_karp(adj: &[Vec<u32>], n_right: usize) -> Matching {
    const INF: u32 = u32::MAX;
    let n_left = adj.len();
    let mut m = Matching {
        left_to_right: vec![None; n_left],
        right_to_left: vec![None; n_right],
    };
    let mut dist = vec![INF; n_left];
    let mut next_edge = vec![0usize; n_left];

    loop {
        // BFS layering from free left vertices.
        let mut queue = VecDeque::new();
        for (u, d) in dist.iter_mut().enumerate() {
            if m.left_to_right[u].is_none() {
                *d = 0;
                queue.push_back(u);
            } else {
                *d = INF;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                match m.right_to_left[v as usize] {
                    None => found = true,
                    Some(u2) if dist[u2] == INF => {
                        dist[u2] = dist[u] + 1;
                        queue.push_back(u2);
                    }
                    Some(_) => {}
                }
            }
        }
        if !found {
            return m;
        }
        next_edge.iter_mut().for_each(|e| *e = 0);
        for u in 0..n_left {
            if m.left_to_right[u].is_none() {
                augment(u, adj, &mut m, &mut dist, &mut next_edge);
            }
        }
    }
}

/// Iterative layered DFS for one augmenting path starting at `root`.
fn augment(
    root: usize,
    adj: &[Vec<u32>],
    m: &mut Matching,
    dist: &mut [u32],
    next_edge: &mut [usize],
) -> bool {
    let mut stack: Vec<(usize, usize)> = vec![(root, usize::MAX)];
    while let Some(&(u, _)) = stack.last() {
        if next_edge[u] >= adj[u].len() {
            dist[u] = u32::MAX;
            stack.pop();
            continue;
        }
        let v = adj[u][next_edge[u]] as usize;
        next_edge[u] += 1;
        match m.right_to_left[v] {
            None => {
                // Flip the path recorded on the stack.
                let mut right = v;
                while let Some((left, via)) = stack.pop() {
                    m.left_to_right[left] = Some(right);
                    m.right_to_left[right] = Some(left);
                    right = via;
                }
                return true;
            }
            Some(u2) if dist[u2] == dist[u] + 1 => {
                stack.push((u2, v));
            }
            Some(_) => {}
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_chains() -> Poset {
        Poset::close_and_validate(9, [(0, 1), (1, 2), (3, 4), (4, 5), (6, 7), (7, 8)]).unwrap()
    }

    #[test]
    fn independent_chains() {
        let (w, cp) = width_and_chain_partition(&three_chains()).unwrap();
        assert_eq!(w, 3);
        assert_eq!(cp.chains(), &[vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8]]);
        assert_eq!(cp.chain_of(4), 1);
        assert_eq!(cp.position(8), 2);
    }

    #[test]
    fn single_chain() {
        let (w, cp) = width_and_chain_partition(&Poset::chain(6)).unwrap();
        assert_eq!(w, 1);
        assert_eq!(cp.chain(0), &[0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn antichain_needs_n_chains() {
        let cert = dilworth(&Poset::antichain(4)).unwrap();
        assert_eq!(cert.width(), 4);
        assert_eq!(cert.antichain, vec![0, 1, 2, 3]);
    }

    #[test]
    fn empty_is_rejected() {
        assert_eq!(
            width_and_chain_partition(&Poset::antichain(0)).unwrap_err(),
            PosetError::Empty
        );
    }

    #[test]
    fn certificate_on_diamond() {
        let p = Poset::close_and_validate(4, [(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let cert = dilworth(&p).unwrap();
        assert_eq!(cert.width(), 2);
        assert!(cert.verify(&p));
        let mut anti = cert.antichain.clone();
        anti.sort();
        assert_eq!(anti, vec![1, 2]);
    }

    #[test]
    fn from_chains_rejects_bad_input() {
        let p = Poset::antichain(2);
        assert!(ChainPartition::from_chains(&p, vec![vec![0, 1]]).is_none());
        assert!(ChainPartition::from_chains(&p, vec![vec![0]]).is_none());
        assert!(ChainPartition::from_chains(&p, vec![vec![0], vec![1]]).is_some());
    }
}
