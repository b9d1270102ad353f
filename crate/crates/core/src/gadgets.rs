//! Width-4 instances built from 3-PARTITION.
//!
//! Each weight `w` becomes a chain of `w` triangles linked by `w - 1` copies
//! of K4. A spine of `m + 1` copies of K5 joined by paths with `b` edges
//! forces any width-4 decomposition of the target length to pack the chains
//! between consecutive K5s, one group of total weight `b` per gap.
//!
//! Piece, part and clique indices are 0-based throughout.

use thiserror::Error;

use crate::decomposition::{reverse, validate, PathDecomposition};
use crate::graph::Graph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GadgetError {
    #[error("weight count {0} is not a positive multiple of three")]
    WeightCount(usize),
    #[error("weights and target must be positive")]
    NonPositive,
    #[error("parts do not partition the pieces")]
    NotAPartition,
    #[error("part {part} sums to {sum}, expected {b}")]
    PartSum { part: usize, sum: usize, b: usize },
    #[error("decomposition does not have the forced structure")]
    NotConforming,
    #[error("brute force is limited to m <= {0}")]
    TooLarge(usize),
}

/// Largest `m` accepted by [`solve_three_partition`].
pub const BRUTE_FORCE_MAX_M: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreePartitionInstance {
    weights: Vec<usize>,
    b: usize,
}

impl ThreePartitionInstance {
    pub fn new(weights: Vec<usize>, b: usize) -> Result<Self, GadgetError> {
        if weights.is_empty() || !weights.len().is_multiple_of(3) {
            return Err(GadgetError::WeightCount(weights.len()));
        }
        if b == 0 || weights.contains(&0) {
            return Err(GadgetError::NonPositive);
        }
        Ok(ThreePartitionInstance { weights, b })
    }

    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn m(&self) -> usize {
        self.weights.len() / 3
    }

    /// Every weight strictly between `b/4` and `b/2`.
    pub fn is_strict(&self) -> bool {
        self.weights
            .iter()
            .all(|&w| 4 * w > self.b && 2 * w < self.b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Clique {
    K3 { piece: usize, q: usize },
    K4 { piece: usize, q: usize },
    K5 { j: usize },
}

impl std::fmt::Display for Clique {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Clique::K3 { piece, q } => write!(f, "K3 {piece} {q}"),
            Clique::K4 { piece, q } => write!(f, "K4 {piece} {q}"),
            Clique::K5 { j } => write!(f, "K5 {j}"),
        }
    }
}

/// Cliques with their vertex sets.
pub type CliqueList = Vec<(Clique, Vec<usize>)>;

/// Chain for one weight, in local ids: triangle `q` is `3q..3q+3`, link `q`
/// joins the next free triangle vertices `q` and `q+1` with two new vertices.
pub fn build_hi(w: usize) -> (Graph, CliqueList) {
    let mut cliques = Vec::new();
    for q in 0..w {
        cliques.push((
            Clique::K3 { piece: 0, q },
            vec![3 * q, 3 * q + 1, 3 * q + 2],
        ));
    }
    for q in 0..w.saturating_sub(1) {
        let left = 3 * q + usize::from(q > 0);
        let right = 3 * (q + 1);
        let fresh = 3 * w + 2 * q;
        cliques.push((
            Clique::K4 { piece: 0, q },
            vec![left, right, fresh, fresh + 1],
        ));
    }
    let n = if w == 0 { 0 } else { 5 * w - 2 };
    (clique_graph(n, &cliques), cliques)
}

/// Spine in local ids: K5 number `j` is `5j..5j+5`; path `j` runs from the
/// next free vertex of K5 `j` to the lowest vertex of K5 `j+1`.
pub fn build_hmb(m: usize, b: usize) -> (Graph, CliqueList, Vec<Vec<usize>>) {
    let cliques: Vec<_> = (0..=m)
        .map(|j| (Clique::K5 { j }, (5 * j..5 * j + 5).collect()))
        .collect();
    let interior = 5 * (m + 1);
    let paths: Vec<Vec<usize>> = (0..m)
        .map(|j| {
            let start = 5 * j + usize::from(j > 0);
            let inner = (0..b.saturating_sub(1)).map(|d| interior + j * (b - 1) + d);
            std::iter::once(start)
                .chain(inner)
                .chain([5 * (j + 1)])
                .collect()
        })
        .collect();
    let n = interior + m * b.saturating_sub(1);
    let mut g = clique_graph(n, &cliques);
    let mut edges = g.edges();
    for p in &paths {
        edges.extend(p.windows(2).map(|w| (w[0], w[1])));
    }
    g = Graph::from_edges(n, &edges).expect("ids in range");
    (g, cliques, paths)
}

fn clique_graph(n: usize, cliques: &[(Clique, Vec<usize>)]) -> Graph {
    let mut edges = Vec::new();
    for (_, vs) in cliques {
        for (i, &u) in vs.iter().enumerate() {
            edges.extend(vs[i + 1..].iter().map(|&v| (u, v)));
        }
    }
    Graph::from_edges(n, &edges).expect("ids in range")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetGraph {
    pub instance: ThreePartitionInstance,
    pub graph: Graph,
    pub cliques: CliqueList,
    /// Vertices of path `j`, starting in K5 `j`.
    pub paths: Vec<Vec<usize>>,
    /// Vertex set of the chain for each weight.
    pub pieces: Vec<Vec<usize>>,
    /// Length any width-4 decomposition has exactly when a partition exists.
    pub target_length: usize,
}

impl GadgetGraph {
    pub fn clique(&self, c: Clique) -> &[usize] {
        &self
            .cliques
            .iter()
            .find(|(l, _)| *l == c)
            .expect("clique exists")
            .1
    }

    /// One line per clique and per path.
    pub fn label_text(&self) -> String {
        let mut out = String::new();
        let join = |vs: &[usize]| {
            vs.iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        for (c, vs) in &self.cliques {
            out.push_str(&format!("{c}: {}\n", join(vs)));
        }
        for (j, p) in self.paths.iter().enumerate() {
            out.push_str(&format!("P {j}: {}\n", join(p)));
        }
        out
    }
}

/// Disjoint union of the chains followed by the spine.
pub fn build_gadget(inst: &ThreePartitionInstance) -> GadgetGraph {
    let mut edges = Vec::new();
    let mut cliques = Vec::new();
    let mut pieces = Vec::new();
    let mut offset = 0;
    for (i, &w) in inst.weights.iter().enumerate() {
        let (h, cs) = build_hi(w);
        edges.extend(h.edges().into_iter().map(|(u, v)| (u + offset, v + offset)));
        for (c, vs) in cs {
            let c = match c {
                Clique::K3 { q, .. } => Clique::K3 { piece: i, q },
                Clique::K4 { q, .. } => Clique::K4 { piece: i, q },
                other => other,
            };
            cliques.push((c, vs.iter().map(|v| v + offset).collect()));
        }
        pieces.push((offset..offset + h.n()).collect());
        offset += h.n();
    }
    let (spine, cs, paths) = build_hmb(inst.m(), inst.b);
    edges.extend(
        spine
            .edges()
            .into_iter()
            .map(|(u, v)| (u + offset, v + offset)),
    );
    cliques.extend(
        cs.into_iter()
            .map(|(c, vs)| (c, vs.iter().map(|v| v + offset).collect())),
    );
    let paths = paths
        .into_iter()
        .map(|p| p.into_iter().map(|v| v + offset).collect())
        .collect();
    let n = offset + spine.n();
    let total: usize = inst.weights.iter().sum();
    GadgetGraph {
        graph: Graph::from_edges(n, &edges).expect("ids in range"),
        cliques,
        paths,
        pieces,
        target_length: 1 + 2 * total - 2 * inst.m(),
        instance: inst.clone(),
    }
}

fn check_partition(inst: &ThreePartitionInstance, parts: &[Vec<usize>]) -> Result<(), GadgetError> {
    let mut seen = vec![false; inst.weights.len()];
    if parts.len() != inst.m() {
        return Err(GadgetError::NotAPartition);
    }
    for part in parts {
        for &i in part {
            if i >= seen.len() || seen[i] {
                return Err(GadgetError::NotAPartition);
            }
            seen[i] = true;
        }
    }
    if seen.contains(&false) {
        return Err(GadgetError::NotAPartition);
    }
    for (j, part) in parts.iter().enumerate() {
        let sum: usize = part.iter().map(|&i| inst.weights[i]).sum();
        if sum != inst.b {
            return Err(GadgetError::PartSum {
                part: j,
                sum,
                b: inst.b,
            });
        }
    }
    Ok(())
}

/// Width-4 decomposition of length `target_length` walking each path once:
/// K5 `j`, then the chains of part `j` interleaved with the path vertices,
/// then the next K5.
pub fn decomposition_from_partition(
    gg: &GadgetGraph,
    parts: &[Vec<usize>],
) -> Result<PathDecomposition, GadgetError> {
    check_partition(&gg.instance, parts)?;
    let w = &gg.instance.weights;
    let mut bags = Vec::with_capacity(gg.target_length);
    for (j, part) in parts.iter().enumerate() {
        bags.push(gg.clique(Clique::K5 { j }).to_vec());
        let path = &gg.paths[j];
        let mut p = 0;
        let mut order = part.clone();
        order.sort_unstable();
        for i in order {
            for q in 0..w[i] {
                let mut bag = gg.clique(Clique::K3 { piece: i, q }).to_vec();
                bag.extend([path[p + q], path[p + q + 1]]);
                bags.push(bag);
                if q + 1 < w[i] {
                    let mut bag = gg.clique(Clique::K4 { piece: i, q }).to_vec();
                    bag.push(path[p + q + 1]);
                    bags.push(bag);
                }
            }
            p += w[i];
        }
    }
    bags.push(gg.clique(Clique::K5 { j: gg.instance.m() }).to_vec());
    Ok(PathDecomposition::new(bags))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetReport {
    pub valid: bool,
    pub width: isize,
    pub length_matches: bool,
    pub one_clique_per_bag: bool,
    pub spine_monotone: bool,
    pub pieces_between_spine: bool,
}

impl GadgetReport {
    pub fn all_pass(&self) -> bool {
        self.valid
            && self.width <= 4
            && self.length_matches
            && self.one_clique_per_bag
            && self.spine_monotone
            && self.pieces_between_spine
    }
}

fn contains_all(bag: &[usize], vs: &[usize]) -> bool {
    vs.iter().all(|v| bag.binary_search(v).is_ok())
}

/// Bag index holding each K5, when every K5 sits in exactly one bag.
fn spine_positions(gg: &GadgetGraph, p: &PathDecomposition) -> Option<Vec<usize>> {
    (0..=gg.instance.m())
        .map(|j| {
            let vs = gg.clique(Clique::K5 { j });
            let mut hits = p
                .bags()
                .iter()
                .enumerate()
                .filter(|(_, b)| contains_all(b, vs));
            let first = hits.next()?.0;
            hits.next().is_none().then_some(first)
        })
        .collect()
}

/// First and last bag meeting `vs`, when every bag in between meets it too.
fn interval(p: &PathDecomposition, vs: &[usize]) -> Option<(usize, usize)> {
    let meets: Vec<bool> = p
        .bags()
        .iter()
        .map(|b| vs.iter().any(|v| b.binary_search(v).is_ok()))
        .collect();
    let s = meets.iter().position(|&x| x)?;
    let t = meets.iter().rposition(|&x| x)?;
    meets[s..=t].iter().all(|&x| x).then_some((s, t))
}

/// Checks the structure every width-4 decomposition of the target length has.
pub fn verify_gadget_properties(gg: &GadgetGraph, p: &PathDecomposition) -> GadgetReport {
    let one_clique_per_bag = p.bags().iter().all(|b| {
        gg.cliques
            .iter()
            .filter(|(_, vs)| contains_all(b, vs))
            .count()
            == 1
    });
    let spine = spine_positions(gg, p);
    let spine_monotone = spine
        .as_ref()
        .is_some_and(|c| c.windows(2).all(|w| w[0] < w[1]) || c.windows(2).all(|w| w[0] > w[1]));
    let spine_bags: Vec<usize> = spine.unwrap_or_default();
    let pieces_between_spine = gg.pieces.iter().all(|vs| match interval(p, vs) {
        Some((s, t)) => !spine_bags.iter().any(|&c| s <= c && c <= t),
        None => false,
    });
    GadgetReport {
        valid: validate(&gg.graph, p).is_ok(),
        width: p.width(),
        length_matches: p.len() == gg.target_length,
        one_clique_per_bag,
        spine_monotone,
        pieces_between_spine,
    }
}

/// Reads the partition off the gaps between consecutive K5 bags.
pub fn extract_partition(
    gg: &GadgetGraph,
    p: &PathDecomposition,
) -> Result<Vec<Vec<usize>>, GadgetError> {
    if !verify_gadget_properties(gg, p).all_pass() {
        return Err(GadgetError::NotConforming);
    }
    let mut spine = spine_positions(gg, p).ok_or(GadgetError::NotConforming)?;
    let p = if spine[0] > spine[spine.len() - 1] {
        let r = reverse(p);
        spine = spine_positions(gg, &r).ok_or(GadgetError::NotConforming)?;
        r
    } else {
        p.clone()
    };
    let mut parts = vec![Vec::new(); gg.instance.m()];
    for (i, vs) in gg.pieces.iter().enumerate() {
        let (s, t) = interval(&p, vs).ok_or(GadgetError::NotConforming)?;
        let j = spine
            .windows(2)
            .position(|w| w[0] < s && t < w[1])
            .ok_or(GadgetError::NotConforming)?;
        parts[j].push(i);
    }
    check_partition(&gg.instance, &parts)?;
    Ok(parts)
}

/// Exhaustive search for a partition into triples summing to `b`.
pub fn solve_three_partition(
    inst: &ThreePartitionInstance,
) -> Result<Option<Vec<Vec<usize>>>, GadgetError> {
    if inst.m() > BRUTE_FORCE_MAX_M {
        return Err(GadgetError::TooLarge(BRUTE_FORCE_MAX_M));
    }
    fn go(w: &[usize], b: usize, used: &mut Vec<bool>, parts: &mut Vec<Vec<usize>>) -> bool {
        let Some(first) = used.iter().position(|&u| !u) else {
            return true;
        };
        used[first] = true;
        for x in first + 1..w.len() {
            for y in x + 1..w.len() {
                if used[x] || used[y] || w[first] + w[x] + w[y] != b {
                    continue;
                }
                used[x] = true;
                used[y] = true;
                parts.push(vec![first, x, y]);
                if go(w, b, used, parts) {
                    return true;
                }
                parts.pop();
                used[x] = false;
                used[y] = false;
            }
        }
        used[first] = false;
        false
    }
    let mut used = vec![false; inst.weights.len()];
    let mut parts = Vec::new();
    Ok(go(&inst.weights, inst.b, &mut used, &mut parts).then_some(parts))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> GadgetGraph {
        build_gadget(&ThreePartitionInstance::new(vec![1, 1, 1, 2, 2, 3], 5).unwrap())
    }

    #[test]
    fn chain_sizes() {
        assert_eq!(build_hi(1).0.n(), 3);
        assert_eq!(build_hi(2).0.n(), 8);
        let (g, cliques) = build_hi(3);
        assert_eq!((g.n(), cliques.len()), (13, 5));
        assert_eq!(g.edge_count(), 3 * 3 + 2 * 6);
    }

    #[test]
    fn spine_sizes() {
        assert_eq!(build_hmb(1, 1).0.n(), 10);
        let (g, _, paths) = build_hmb(2, 4);
        assert_eq!(g.n(), 15 + 2 * 3);
        assert_eq!(paths[1][0], 6);
        assert_eq!(paths[1][4], 10);
    }

    #[test]
    fn example_instance() {
        let gg = example();
        assert_eq!(gg.target_length, 17);
        assert_eq!(gg.cliques.len(), 17);
        let p = decomposition_from_partition(&gg, &[vec![0, 1, 5], vec![2, 3, 4]]).unwrap();
        assert_eq!(p.len(), 17);
        assert!(p.bags().iter().all(|b| b.len() == 5));
        assert!(verify_gadget_properties(&gg, &p).all_pass());
        assert!(verify_gadget_properties(&gg, &reverse(&p)).all_pass());
        let mut parts = extract_partition(&gg, &reverse(&p)).unwrap();
        parts.sort();
        assert_eq!(parts, vec![vec![0, 1, 5], vec![2, 3, 4]]);
    }

    #[test]
    fn bad_parts_rejected() {
        let gg = example();
        assert_eq!(
            decomposition_from_partition(&gg, &[vec![0, 1, 2], vec![3, 4, 5]]),
            Err(GadgetError::PartSum {
                part: 0,
                sum: 3,
                b: 5
            })
        );
        assert_eq!(
            decomposition_from_partition(&gg, &[vec![0, 1, 5]]),
            Err(GadgetError::NotAPartition)
        );
    }

    #[test]
    fn brute_force() {
        let inst = ThreePartitionInstance::new(vec![1, 1, 1, 2, 2, 3], 5).unwrap();
        assert!(solve_three_partition(&inst).unwrap().is_some());
        let inst = ThreePartitionInstance::new(vec![1, 1, 1, 1, 1, 4], 4).unwrap();
        assert_eq!(solve_three_partition(&inst), Ok(None));
    }
}
