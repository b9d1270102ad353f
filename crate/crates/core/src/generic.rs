//! Exact breadth-first search over (covered set, last bag) states.
//!
//! Every transition appends one bag made of the border of the covered set
//! plus some uncovered vertices. When the last bag is over its cap, one extra
//! single-vertex bag closes the decomposition.

use std::collections::{HashMap, HashSet};

use crate::bits::{self, Mask, MaskGraph};
use crate::decomposition::PathDecomposition;
use crate::graph::Graph;
use crate::SolveError;

/// Vertex limit for the exact search.
pub const MAX_VERTICES: usize = bits::MAX_VERTICES;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct State {
    covered: Mask,
    last: Mask,
}

struct Search<'a> {
    g: &'a MaskGraph,
    cap: usize,
    first_cap: usize,
    last_cap: usize,
}

impl<'a> Search<'a> {
    /// Caps above `k + 1` are lowered to it; a zero cap is an error.
    fn new(
        g: &'a MaskGraph,
        k: usize,
        lambda1: Option<usize>,
        lambda2: Option<usize>,
    ) -> Result<Self, SolveError> {
        let cap = k + 1;
        for l in [lambda1, lambda2].into_iter().flatten() {
            if l == 0 {
                return Err(SolveError::InvalidCap { cap: l, max: cap });
            }
        }
        Ok(Search {
            g,
            cap,
            first_cap: lambda1.unwrap_or(cap).min(cap),
            last_cap: lambda2.unwrap_or(cap).min(cap),
        })
    }

    fn is_goal(&self, s: State) -> bool {
        s.covered == self.g.all() && bits::count(s.last) <= self.last_cap
    }

    /// Successor bags; the successor state follows from the bag.
    fn successors(&self, s: State) -> Vec<Mask> {
        let all = self.g.all();
        if s.covered == all {
            if bits::count(s.last) > self.last_cap {
                return vec![bits::bit(bits::lowest(s.last).unwrap())];
            }
            return Vec::new();
        }
        let frontier = self.g.border(s.covered);
        let cap = if s.covered == 0 {
            self.first_cap
        } else {
            self.cap
        };
        let room = cap.saturating_sub(bits::count(frontier));
        bits::subsets_up_to(all & !s.covered, room)
            .into_iter()
            .map(|new| frontier | new)
            .collect()
    }

    fn step(s: State, bag: Mask) -> State {
        State {
            covered: s.covered | bag,
            last: bag,
        }
    }
}

/// Minimum-length decomposition of width at most `k` whose first and last
/// bags hold at most `lambda1` / `lambda2` vertices (default `k + 1`).
/// `Ok(None)` means infeasible. Among optimal answers the lexicographically
/// smallest bag sequence is returned.
pub fn solve_exact(
    g: &Graph,
    k: usize,
    lambda1: Option<usize>,
    lambda2: Option<usize>,
) -> Result<Option<PathDecomposition>, SolveError> {
    let mg = MaskGraph::new(g).ok_or(SolveError::TooLarge {
        n: g.n(),
        limit: MAX_VERTICES,
    })?;
    let search = Search::new(&mg, k, lambda1, lambda2)?;
    let source = State {
        covered: 0,
        last: 0,
    };
    if mg.n == 0 {
        return Ok(Some(PathDecomposition::default()));
    }

    let mut layers: Vec<Vec<State>> = vec![vec![source]];
    let mut seen: HashSet<State> = HashSet::from([source]);
    loop {
        let current = layers.last().unwrap();
        if current.iter().any(|&s| search.is_goal(s)) {
            break;
        }
        let mut next = Vec::new();
        for &s in current {
            for bag in search.successors(s) {
                let t = Search::step(s, bag);
                if seen.insert(t) {
                    next.push(t);
                }
            }
        }
        if next.is_empty() {
            return Ok(None);
        }
        layers.push(next);
    }

    // states lying on some shortest path, layer by layer from the end
    let depth = layers.len() - 1;
    let mut good: Vec<HashSet<State>> = vec![HashSet::new(); depth + 1];
    good[depth] = layers[depth]
        .iter()
        .copied()
        .filter(|&s| search.is_goal(s))
        .collect();
    for d in (0..depth).rev() {
        let keep: HashSet<State> = layers[d]
            .iter()
            .copied()
            .filter(|&s| {
                search
                    .successors(s)
                    .into_iter()
                    .any(|b| good[d + 1].contains(&Search::step(s, b)))
            })
            .collect();
        good[d] = keep;
    }

    let mut bags = Vec::with_capacity(depth);
    let mut s = source;
    for d in 0..depth {
        let best = search
            .successors(s)
            .into_iter()
            .filter(|&b| good[d + 1].contains(&Search::step(s, b)))
            .map(|b| (bits::to_vec(b), b))
            .min()
            .expect("shortest path continues");
        bags.push(best.0);
        s = Search::step(s, best.1);
    }
    Ok(Some(PathDecomposition::new(bags)))
}

/// Minimum length only.
pub fn min_length(
    g: &Graph,
    k: usize,
    lambda1: Option<usize>,
    lambda2: Option<usize>,
) -> Result<Option<usize>, SolveError> {
    let mg = MaskGraph::new(g).ok_or(SolveError::TooLarge {
        n: g.n(),
        limit: MAX_VERTICES,
    })?;
    let search = Search::new(&mg, k, lambda1, lambda2)?;
    let mut dist: HashMap<State, usize> = HashMap::new();
    let source = State {
        covered: 0,
        last: 0,
    };
    if mg.n == 0 {
        return Ok(Some(0));
    }
    dist.insert(source, 0);
    let mut current = vec![source];
    let mut d = 0;
    while !current.is_empty() {
        if current.iter().any(|&s| search.is_goal(s)) {
            return Ok(Some(d));
        }
        let mut next = Vec::new();
        for &s in &current {
            for bag in search.successors(s) {
                let t = Search::step(s, bag);
                if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(t) {
                    e.insert(d + 1);
                    next.push(t);
                }
            }
        }
        current = next;
        d += 1;
    }
    Ok(None)
}

/// Whether some decomposition of width at most `k` exists.
pub fn is_pathwidth_at_most(g: &Graph, k: usize) -> Result<bool, SolveError> {
    Ok(min_length(g, k, None, None)?.is_some())
}
