//! Width at most three on arbitrary graphs.
//!
//! Big components (three or more vertices) are solved one at a time together
//! with some of the isolated vertices and edges. A dynamic program decides how
//! many small components each big one absorbs, tracking how many boundary-bag
//! merges the final concatenation can realise.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use crate::bits::MaskGraph;
use crate::connected::Engine;
use crate::decomposition::{
    classify_type, concat, concat_capped, reverse, DecompositionType, PathDecomposition,
};
use crate::graph::{classify_components, induced_subgraph, Graph};
use crate::symmetry::Symmetry;
use crate::SolveError;

/// Largest width handled by the polynomial pipeline.
pub const MAX_WIDTH: usize = 3;

/// Merge opportunities available to `a` decompositions of class A and `b` of
/// class B.
pub fn mu(a: usize, b: usize) -> usize {
    if b == 0 {
        a.saturating_sub(1)
    } else {
        a + b / 2
    }
}

/// Boundary class of a decomposition; B covers both orientations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Class {
    A,
    B,
    C,
}

impl From<DecompositionType> for Class {
    fn from(t: DecompositionType) -> Self {
        match t {
            DecompositionType::A => Class::A,
            DecompositionType::B1 | DecompositionType::B2 => Class::B,
            DecompositionType::C => Class::C,
        }
    }
}

/// Configuration in `1..=4` summarising the A and B counts.
pub fn config_of(a: usize, b: usize) -> u8 {
    match (a, b) {
        (0, 0) => 1,
        (_, 0) => 2,
        (_, b) if b % 2 == 1 => 3,
        _ => 4,
    }
}

/// Next configuration and the number of merges gained by adding one item of
/// `class`.
pub fn transition(t: u8, class: Class) -> (u8, usize) {
    match class {
        Class::A => ([0, 2, 2, 3, 4][t as usize], usize::from(t != 1)),
        Class::B => ([0, 3, 3, 4, 3][t as usize], usize::from(t != 1 && t != 4)),
        Class::C => (t, 0),
    }
}

/// Adjacent pairs whose facing boundary bags are both small.
pub fn matchups(types: &[DecompositionType]) -> usize {
    types
        .windows(2)
        .filter(|w| {
            let last_small = matches!(w[0], DecompositionType::A | DecompositionType::B2);
            let first_small = matches!(w[1], DecompositionType::A | DecompositionType::B1);
            last_small && first_small
        })
        .count()
}

/// Order and orientation (index, reversed) attaining `mu` matchups.
pub fn normal_form_plan(types: &[DecompositionType]) -> Vec<(usize, bool)> {
    let pick = |class: Class| -> Vec<usize> {
        (0..types.len())
            .filter(|&i| Class::from(types[i]) == class)
            .collect()
    };
    let (a, b, c) = (pick(Class::A), pick(Class::B), pick(Class::C));
    let as_b2 = |i: usize| (i, types[i] == DecompositionType::B1);
    let as_b1 = |i: usize| (i, types[i] == DecompositionType::B2);
    let plain = |i: &usize| (*i, false);
    let mut out = Vec::with_capacity(types.len());
    match b.len() {
        0 => {
            out.extend(a.iter().map(plain));
            out.extend(c.iter().map(plain));
        }
        1 => {
            out.extend(c.iter().map(plain));
            out.push(as_b2(b[0]));
            out.extend(a.iter().map(plain));
        }
        _ => {
            out.push(as_b2(b[0]));
            out.extend(a.iter().map(plain));
            out.push(as_b1(b[1]));
            out.extend(c.iter().map(plain));
            for pair in b[2..].chunks(2) {
                out.push(as_b2(pair[0]));
                if let Some(&second) = pair.get(1) {
                    out.push(as_b1(second));
                }
            }
        }
    }
    out
}

fn flipped(t: DecompositionType) -> DecompositionType {
    match t {
        DecompositionType::B1 => DecompositionType::B2,
        DecompositionType::B2 => DecompositionType::B1,
        other => other,
    }
}

/// Items reordered and reversed into normal form.
pub fn normal_form_order(
    items: &[(PathDecomposition, DecompositionType)],
) -> Vec<(PathDecomposition, DecompositionType)> {
    let types: Vec<_> = items.iter().map(|(_, t)| *t).collect();
    normal_form_plan(&types)
        .into_iter()
        .map(|(i, rev)| {
            let (p, t) = &items[i];
            if rev {
                (reverse(p), flipped(*t))
            } else {
                (p.clone(), *t)
            }
        })
        .collect()
}

/// Table of minimum assembled lengths per prefix of big components, small
/// counts used, and configuration.
#[derive(Clone, Debug)]
pub struct DpTable {
    c: usize,
    q1: usize,
    q2: usize,
    value: Vec<Option<usize>>,
    back: Vec<(usize, usize, u8)>,
}

impl DpTable {
    fn idx(&self, m: usize, r1: usize, r2: usize, t: u8) -> usize {
        (((m * (self.q1 + 1) + r1) * (self.q2 + 1) + r2) * 4) + (t as usize - 1)
    }

    /// Minimum over assignments of the first `m` components using exactly
    /// `r1` isolated vertices and `r2` isolated edges, ending in
    /// configuration `t`.
    pub fn get(&self, m: usize, r1: usize, r2: usize, t: u8) -> Option<usize> {
        self.value[self.idx(m, r1, r2, t)]
    }

    /// Best value over configurations using every small component, with the
    /// winning configuration.
    pub fn best(&self) -> Option<(usize, u8)> {
        (1..=4u8)
            .filter_map(|t| self.get(self.c, self.q1, self.q2, t).map(|v| (v, t)))
            .min()
    }

    /// Per-component `(isolated vertices, isolated edges)` behind
    /// `get(c, q1, q2, t)`.
    pub fn assignment(&self, t: u8) -> Vec<(usize, usize)> {
        let (mut r1, mut r2, mut t) = (self.q1, self.q2, t);
        let mut out = vec![(0, 0); self.c];
        for m in (1..=self.c).rev() {
            let (i, j, prev) = self.back[self.idx(m, r1, r2, t)];
            out[m - 1] = (i, j);
            r1 -= i;
            r2 -= j;
            t = prev;
        }
        out
    }
}

/// Fills the table; `entry(m, i, j)` gives the length and class of component
/// `m` (0-based) absorbing `i` isolated vertices and `j` isolated edges.
#[allow(clippy::needless_range_loop)] // i and j also index the remainder
pub fn fill_dp(
    c: usize,
    q1: usize,
    q2: usize,
    mut entry: impl FnMut(usize, usize, usize) -> Option<(usize, Class)>,
) -> DpTable {
    let cells = (c + 1) * (q1 + 1) * (q2 + 1) * 4;
    let mut table = DpTable {
        c,
        q1,
        q2,
        value: vec![None; cells],
        back: vec![(0, 0, 0); cells],
    };
    let base = table.idx(0, 0, 0, 1);
    table.value[base] = Some(0);
    for m in 1..=c {
        let entries: Vec<Vec<Option<(usize, Class)>>> = (0..=q1)
            .map(|i| (0..=q2).map(|j| entry(m - 1, i, j)).collect())
            .collect();
        for r1 in 0..=q1 {
            for r2 in 0..=q2 {
                for i in 0..=r1 {
                    for j in 0..=r2 {
                        let Some((len, class)) = entries[i][j] else {
                            continue;
                        };
                        for prev in 1..=4u8 {
                            let Some(before) = table.get(m - 1, r1 - i, r2 - j, prev) else {
                                continue;
                            };
                            let (t, gain) = transition(prev, class);
                            let v = before + len - gain;
                            let at = table.idx(m, r1, r2, t);
                            if table.value[at].is_none_or(|old| v < old) {
                                table.value[at] = Some(v);
                                table.back[at] = (i, j, prev);
                            }
                        }
                    }
                }
            }
        }
    }
    table
}

type ChunkKey = (Graph, usize, usize, usize, usize, usize);
type Typed = Option<(PathDecomposition, DecompositionType)>;

/// Memoising solver context shared by the recursive sub-solves.
#[derive(Default)]
pub struct Solver {
    general: RefCell<HashMap<(Graph, usize), Option<PathDecomposition>>>,
    chunk: RefCell<HashMap<ChunkKey, Option<PathDecomposition>>>,
    typed: RefCell<HashMap<(Graph, usize, usize, usize), Typed>>,
    symmetry: RefCell<HashMap<Graph, Rc<Symmetry>>>,
}

impl Solver {
    pub fn new() -> Self {
        Self::default()
    }

    pub(crate) fn symmetry(&self, g: &Graph, mg: &MaskGraph) -> Rc<Symmetry> {
        if let Some(s) = self.symmetry.borrow().get(g) {
            return s.clone();
        }
        let s = Rc::new(Symmetry::new(mg));
        self.symmetry.borrow_mut().insert(g.clone(), s.clone());
        s
    }

    /// Minimum-length `(lambda1, lambda2)`-decomposition of the connected
    /// graph `big` plus `q1` isolated vertices and `q2` isolated edges.
    pub(crate) fn chunk(
        &self,
        big: &Graph,
        k: usize,
        q1: usize,
        q2: usize,
        lambda1: usize,
        lambda2: usize,
    ) -> Result<Option<PathDecomposition>, SolveError> {
        let key = (big.clone(), k, q1, q2, lambda1, lambda2);
        if let Some(p) = self.chunk.borrow().get(&key) {
            return Ok(p.clone());
        }
        let p = Engine::new(self, big, k, q1, q2, lambda1, lambda2)?.run()?;
        self.chunk.borrow_mut().insert(key, p.clone());
        Ok(p)
    }

    /// Minimum-length decomposition preferring small boundary bags, with
    /// class B returned as B2.
    pub(crate) fn typed(
        &self,
        big: &Graph,
        k: usize,
        q1: usize,
        q2: usize,
    ) -> Result<Typed, SolveError> {
        let key = (big.clone(), k, q1, q2);
        if let Some(t) = self.typed.borrow().get(&key) {
            return Ok(t.clone());
        }
        let full = k + 1;
        let result = match self.chunk(big, k, q1, q2, full, full)? {
            None => None,
            Some(best) if full <= 2 => {
                let t = classify_type(&best).expect("non-empty");
                Some((best, t))
            }
            Some(best) => {
                let len = best.len();
                let hits =
                    |p: &Option<PathDecomposition>| p.as_ref().is_some_and(|p| p.len() == len);
                let a = self.chunk(big, k, q1, q2, 2, 2)?;
                if hits(&a) {
                    Some((a.unwrap(), DecompositionType::A))
                } else {
                    let b2 = self.chunk(big, k, q1, q2, full, 2)?;
                    if hits(&b2) {
                        Some((b2.unwrap(), DecompositionType::B2))
                    } else {
                        let b1 = self.chunk(big, k, q1, q2, 2, full)?;
                        if hits(&b1) {
                            Some((reverse(&b1.unwrap()), DecompositionType::B2))
                        } else {
                            Some((best, DecompositionType::C))
                        }
                    }
                }
            }
        };
        self.typed.borrow_mut().insert(key, result.clone());
        Ok(result)
    }

    /// Minimum-length decomposition of width at most `k <= 3`.
    pub fn solve_general(
        &self,
        g: &Graph,
        k: usize,
    ) -> Result<Option<PathDecomposition>, SolveError> {
        if k > MAX_WIDTH {
            return Err(SolveError::UnsupportedWidth(k));
        }
        let key = (g.clone(), k);
        if let Some(p) = self.general.borrow().get(&key) {
            return Ok(p.clone());
        }
        let p = self.solve_uncached(g, k)?;
        self.general.borrow_mut().insert(key, p.clone());
        Ok(p)
    }

    fn solve_uncached(&self, g: &Graph, k: usize) -> Result<Option<PathDecomposition>, SolveError> {
        if k == 0 {
            return Ok((g.edge_count() == 0)
                .then(|| PathDecomposition::new((0..g.n()).map(|v| vec![v]).collect())));
        }
        let split = classify_components(g);
        let (q1, q2) = (split.k1.len(), split.k2.len());
        let small_id = |x: usize, p1: usize, k1: &[usize], k2: &[(usize, usize)]| -> usize {
            if x < p1 {
                k1[x]
            } else {
                let e = k2[(x - p1) / 2];
                if (x - p1).is_multiple_of(2) {
                    e.0
                } else {
                    e.1
                }
            }
        };
        if split.big.is_empty() {
            return Ok(solve_small_only(q1, q2, k)
                .map(|p| p.relabel(|x| small_id(x, q1, &split.k1, &split.k2))));
        }

        let locals: Vec<Graph> = split
            .big
            .iter()
            .map(|comp| induced_subgraph(g, comp).expect("component ids").0)
            .collect();
        for local in &locals {
            if self.typed(local, k, 0, 0)?.is_none() {
                return Ok(None);
            }
        }
        let mut failure = None;
        let table = fill_dp(locals.len(), q1, q2, |m, i, j| {
            match self.typed(&locals[m], k, i, j) {
                Ok(t) => t.map(|(p, ty)| {
                    let class = if k < MAX_WIDTH {
                        Class::C
                    } else {
                        Class::from(ty)
                    };
                    (p.len(), class)
                }),
                Err(e) => {
                    failure.get_or_insert(e);
                    None
                }
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        let Some((value, t)) = table.best() else {
            return Ok(None);
        };

        let mut items = Vec::with_capacity(locals.len());
        let (mut used1, mut used2) = (0, 0);
        for (m, &(i, j)) in table.assignment(t).iter().enumerate() {
            let (p, ty) = self.typed(&locals[m], k, i, j)?.expect("feasible entry");
            let comp = &split.big[m];
            let nb = comp.len();
            let k1 = &split.k1[used1..used1 + i];
            let k2 = &split.k2[used2..used2 + j];
            let p = p.relabel(|x| {
                if x < nb {
                    comp[x]
                } else {
                    small_id(x - nb, i, k1, k2)
                }
            });
            items.push((p, ty));
            used1 += i;
            used2 += j;
        }

        let mut out = PathDecomposition::default();
        if k == MAX_WIDTH {
            for (p, _) in normal_form_order(&items) {
                out = concat(&out, &p).expect("disjoint components");
            }
        } else {
            for (p, _) in &items {
                out = concat_capped(&out, p, k + 1).expect("disjoint components");
            }
        }
        debug_assert!(out.len() <= value);
        Ok(Some(out))
    }
}

/// Minimum-length decomposition of width at most `k <= 3`, or `None` when the
/// pathwidth exceeds `k`.
pub fn solve(g: &Graph, k: usize) -> Result<Option<PathDecomposition>, SolveError> {
    Solver::new().solve_general(g, k)
}

/// Fewest bags of capacity `k + 1` holding `q1` isolated vertices (ids
/// `0..q1`) and `q2` isolated edges (ids `q1 + 2p`, `q1 + 2p + 1`).
pub fn solve_small_only(q1: usize, q2: usize, k: usize) -> Option<PathDecomposition> {
    let cap = k + 1;
    if q2 > 0 && cap < 2 {
        return None;
    }
    let patterns: Vec<(usize, usize)> = (0..=cap / 2)
        .flat_map(|b| (0..=cap - 2 * b).map(move |a| (a, b)))
        .filter(|&p| p != (0, 0))
        .collect();
    let w = q2 + 1;
    let mut best = vec![usize::MAX; (q1 + 1) * w];
    let mut choice = vec![(0, 0); (q1 + 1) * w];
    best[0] = 0;
    for x in 0..=q1 {
        for y in 0..=q2 {
            for &(a, b) in &patterns {
                if a > x || b > y {
                    continue;
                }
                let prev = best[(x - a) * w + y - b];
                if prev != usize::MAX && prev + 1 < best[x * w + y] {
                    best[x * w + y] = prev + 1;
                    choice[x * w + y] = (a, b);
                }
            }
        }
    }
    let (mut x, mut y) = (q1, q2);
    let (mut next1, mut next2) = (0, 0);
    let mut bags = Vec::new();
    while x + y > 0 {
        let (a, b) = choice[x * w + y];
        let mut bag: Vec<usize> = (next1..next1 + a).collect();
        for p in next2..next2 + b {
            bag.extend([q1 + 2 * p, q1 + 2 * p + 1]);
        }
        bags.push(bag);
        next1 += a;
        next2 += b;
        x -= a;
        y -= b;
    }
    Some(PathDecomposition::new(bags))
}
