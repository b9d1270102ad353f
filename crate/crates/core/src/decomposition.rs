//! Path decompositions: data model, validation, metrics and the structural
//! diagnostics around bottleneck sets.

use std::fmt;

use thiserror::Error;

use crate::graph::{is_bottleneck, membership, s_components, Graph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecompositionError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("decompositions share vertex {0}")]
    Overlap(usize),
    #[error("empty decomposition has no type")]
    Empty,
    #[error("vertex set does not meet any bag")]
    Disjoint,
    #[error("not a bottleneck set")]
    NotBottleneck,
    #[error("bottleneck interval is undefined")]
    UndefinedInterval,
}

/// Ordered sequence of bags; each bag is kept sorted and duplicate-free.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathDecomposition {
    bags: Vec<Vec<usize>>,
}

impl PathDecomposition {
    pub fn new(bags: Vec<Vec<usize>>) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        PathDecomposition { bags }
    }

    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    pub fn into_bags(self) -> Vec<Vec<usize>> {
        self.bags
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    pub fn width(&self) -> isize {
        self.bags
            .iter()
            .map(|b| b.len() as isize)
            .max()
            .unwrap_or(0)
            - 1
    }

    pub fn size(&self) -> usize {
        self.bags.iter().map(Vec::len).sum()
    }

    pub fn first_bag(&self) -> Option<&[usize]> {
        self.bags.first().map(Vec::as_slice)
    }

    pub fn last_bag(&self) -> Option<&[usize]> {
        self.bags.last().map(Vec::as_slice)
    }

    /// Applies `f` to every vertex id.
    pub fn relabel(&self, f: impl Fn(usize) -> usize) -> Self {
        Self::new(
            self.bags
                .iter()
                .map(|b| b.iter().map(|&v| f(v)).collect())
                .collect(),
        )
    }

    /// Union of all bags, sorted.
    pub fn span(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.bags.iter().flatten().copied().collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// One bag per line, ids separated by spaces.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for b in &self.bags {
            let line: Vec<String> = b.iter().map(usize::to_string).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }
}

/// Reads one bag per non-empty line; `#` lines are comments.
pub fn parse_decomposition(text: &str) -> Result<PathDecomposition, DecompositionError> {
    let mut bags = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bag = line
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| DecompositionError::Malformed {
                        line: i + 1,
                        reason: format!("bad vertex id {t:?}"),
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        bags.push(bag);
    }
    Ok(PathDecomposition::new(bags))
}

/// First violated axiom with its lexicographically smallest witness.
/// Bag indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    UnknownVertex {
        vertex: usize,
        bag: usize,
    },
    Pd1 {
        vertex: usize,
    },
    Pd2 {
        edge: (usize, usize),
    },
    Pd3 {
        vertex: usize,
        bags: (usize, usize, usize),
    },
}

impl Violation {
    pub fn axiom(&self) -> &'static str {
        match self {
            Violation::UnknownVertex { .. } => "RANGE",
            Violation::Pd1 { .. } => "PD1",
            Violation::Pd2 { .. } => "PD2",
            Violation::Pd3 { .. } => "PD3",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownVertex { vertex, bag } => {
                write!(f, "RANGE vertex {vertex} in bag {bag}")
            }
            Violation::Pd1 { vertex } => write!(f, "PD1 vertex {vertex}"),
            Violation::Pd2 { edge: (u, v) } => write!(f, "PD2 edge ({u},{v})"),
            Violation::Pd3 {
                vertex,
                bags: (i, j, k),
            } => {
                write!(f, "PD3 vertex {vertex} bags ({i},{j},{k})")
            }
        }
    }
}

/// Occurrence list per vertex (0-based bag indices, ascending).
fn occurrences(n: usize, p: &PathDecomposition) -> Result<Vec<Vec<usize>>, Violation> {
    let mut occ = vec![Vec::new(); n];
    for (t, bag) in p.bags.iter().enumerate() {
        for &v in bag {
            if v >= n {
                return Err(Violation::UnknownVertex {
                    vertex: v,
                    bag: t + 1,
                });
            }
            occ[v].push(t);
        }
    }
    Ok(occ)
}

fn check_edges_and_contiguity(
    g: &Graph,
    occ: &[Vec<usize>],
    relevant: impl Fn(usize) -> bool,
) -> Result<(), Violation> {
    for (u, v) in g.edges() {
        if !relevant(u) || !relevant(v) {
            continue;
        }
        let (a, b) = (&occ[u], &occ[v]);
        let (mut i, mut j) = (0, 0);
        let mut shared = false;
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    shared = true;
                    break;
                }
            }
        }
        if !shared {
            return Err(Violation::Pd2 { edge: (u, v) });
        }
    }
    for (v, o) in occ.iter().enumerate() {
        if let Some(w) = o.windows(2).find(|w| w[1] != w[0] + 1) {
            return Err(Violation::Pd3 {
                vertex: v,
                bags: (o[0] + 1, w[0] + 2, w[1] + 1),
            });
        }
    }
    Ok(())
}

/// Checks PD1, PD2 and contiguity, in that order.
pub fn validate(g: &Graph, p: &PathDecomposition) -> Result<(), Violation> {
    let occ = occurrences(g.n(), p)?;
    if let Some(v) = occ.iter().position(Vec::is_empty) {
        return Err(Violation::Pd1 { vertex: v });
    }
    check_edges_and_contiguity(g, &occ, |_| true)
}

/// Checks the partial conditions: edges inside the span are covered and
/// occurrences are contiguous.
pub fn validate_partial(g: &Graph, p: &PathDecomposition) -> Result<(), Violation> {
    let occ = occurrences(g.n(), p)?;
    check_edges_and_contiguity(g, &occ, |v| !occ[v].is_empty())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Metrics {
    pub width: isize,
    pub length: usize,
    pub size: usize,
}

pub fn metrics(p: &PathDecomposition) -> Metrics {
    Metrics {
        width: p.width(),
        length: p.len(),
        size: p.size(),
    }
}

/// Span of a partial decomposition and its border in `g`.
pub fn span_and_frontier(
    g: &Graph,
    p: &PathDecomposition,
) -> Result<(Vec<usize>, Vec<usize>), Violation> {
    validate_partial(g, p)?;
    let span = p.span();
    let frontier = crate::graph::border(g, &span);
    Ok((span, frontier))
}

pub fn reverse(p: &PathDecomposition) -> PathDecomposition {
    let mut bags = p.bags.clone();
    bags.reverse();
    PathDecomposition { bags }
}

/// Concatenation that merges the facing boundary bags when both hold at most
/// two vertices.
pub fn concat(
    p1: &PathDecomposition,
    p2: &PathDecomposition,
) -> Result<PathDecomposition, DecompositionError> {
    concat_capped(p1, p2, usize::MAX)
}

/// Like [`concat`], but only merges when the merged bag has at most
/// `max_merged` vertices.
pub fn concat_capped(
    p1: &PathDecomposition,
    p2: &PathDecomposition,
    max_merged: usize,
) -> Result<PathDecomposition, DecompositionError> {
    let s1 = p1.span();
    let s2 = p2.span();
    let (mut i, mut j) = (0, 0);
    while i < s1.len() && j < s2.len() {
        match s1[i].cmp(&s2[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return Err(DecompositionError::Overlap(s1[i])),
        }
    }
    let mut bags = p1.bags.clone();
    let mut rest = p2.bags.iter();
    if let (Some(last), Some(first)) = (p1.bags.last(), p2.bags.first()) {
        if merges(last.len(), first.len(), max_merged) {
            let merged = [last.as_slice(), first.as_slice()].concat();
            *bags.last_mut().unwrap() = merged;
            rest.next();
        }
    }
    bags.extend(rest.cloned());
    Ok(PathDecomposition::new(bags))
}

pub(crate) fn merges(last: usize, first: usize, max_merged: usize) -> bool {
    last <= 2 && first <= 2 && last + first <= max_merged
}

/// Boundary-bag class: small means at most two vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DecompositionType {
    /// Both boundary bags small.
    A,
    /// Small first bag, big last bag.
    B1,
    /// Big first bag, small last bag.
    B2,
    /// Both boundary bags big.
    C,
}

impl fmt::Display for DecompositionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DecompositionType::A => "A",
            DecompositionType::B1 => "B1",
            DecompositionType::B2 => "B2",
            DecompositionType::C => "C",
        };
        f.write_str(s)
    }
}

pub fn classify_type(p: &PathDecomposition) -> Result<DecompositionType, DecompositionError> {
    let first = p.first_bag().ok_or(DecompositionError::Empty)?.len();
    let last = p.last_bag().ok_or(DecompositionError::Empty)?.len();
    Ok(match (first <= 2, last <= 2) {
        (true, true) => DecompositionType::A,
        (true, false) => DecompositionType::B1,
        (false, true) => DecompositionType::B2,
        (false, false) => DecompositionType::C,
    })
}

/// First and last (1-based) bag indices meeting `h`.
pub fn alpha_beta(
    p: &PathDecomposition,
    h: &[usize],
) -> Result<(usize, usize), DecompositionError> {
    let n = h.iter().max().map_or(0, |&m| m + 1);
    let inside = membership(n, h);
    let hits: Vec<usize> = p
        .bags
        .iter()
        .enumerate()
        .filter(|(_, b)| b.iter().any(|&v| v < n && inside[v]))
        .map(|(t, _)| t + 1)
        .collect();
    match (hits.first(), hits.last()) {
        (Some(&a), Some(&b)) => Ok((a, b)),
        _ => Err(DecompositionError::Disjoint),
    }
}

/// 1-based inclusive bag range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BottleneckInterval {
    pub t1: usize,
    pub t2: usize,
}

fn bag_contains_all(p: &PathDecomposition, t: usize, s: &[usize]) -> bool {
    // t is 1-based; 0 and len+1 denote the empty sentinel bags
    t >= 1 && t <= p.len() && s.iter().all(|v| p.bags[t - 1].binary_search(v).is_ok())
}

/// `Ok(None)` when no branch qualifies for one of the two ends.
pub fn bottleneck_interval(
    g: &Graph,
    p: &PathDecomposition,
    s: &[usize],
) -> Result<Option<BottleneckInterval>, DecompositionError> {
    if !is_bottleneck(g, s) {
        return Err(DecompositionError::NotBottleneck);
    }
    let branches = s_components(g, s)
        .map_err(|_| DecompositionError::NotBottleneck)?
        .branches;
    let mut t1 = None;
    let mut t2 = None;
    for h in &branches {
        let (a, b) = alpha_beta(p, h)?;
        if bag_contains_all(p, a, s) && bag_contains_all(p, a - 1, s) {
            t1 = Some(t1.map_or(a, |x: usize| x.min(a)));
        }
        if bag_contains_all(p, b, s) && bag_contains_all(p, b + 1, s) {
            t2 = Some(t2.map_or(b, |x: usize| x.max(b)));
        }
    }
    Ok(match (t1, t2) {
        (Some(t1), Some(t2)) => Some(BottleneckInterval { t1, t2 }),
        _ => None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BranchColor {
    Green,
    Red,
    Blue,
    Purple,
    Gray,
    Black,
}

pub fn color_of(alpha: usize, beta: usize, iv: BottleneckInterval) -> BranchColor {
    let BottleneckInterval { t1, t2 } = iv;
    if beta < t1 {
        BranchColor::Gray
    } else if alpha > t2 {
        BranchColor::Black
    } else if alpha < t1 && beta > t2 {
        BranchColor::Purple
    } else if alpha < t1 {
        BranchColor::Red
    } else if beta > t2 {
        BranchColor::Blue
    } else {
        BranchColor::Green
    }
}

/// Colour of every branch of `s`, in the branch order of `s_components`.
pub fn color_branches(
    g: &Graph,
    p: &PathDecomposition,
    s: &[usize],
) -> Result<Vec<(Vec<usize>, BranchColor)>, DecompositionError> {
    let iv = bottleneck_interval(g, p, s)?.ok_or(DecompositionError::UndefinedInterval)?;
    let branches = s_components(g, s)
        .map_err(|_| DecompositionError::NotBottleneck)?
        .branches;
    branches
        .into_iter()
        .map(|h| {
            let (a, b) = alpha_beta(p, &h)?;
            Ok((h, color_of(a, b, iv)))
        })
        .collect()
}

/// Repeatedly drops a bag covered by its two neighbours, provided every edge
/// inside it is also inside one of the neighbours.
pub fn remove_redundant_bags(g: &Graph, p: &PathDecomposition) -> PathDecomposition {
    let mut bags = p.bags.clone();
    let empty: Vec<usize> = Vec::new();
    'outer: loop {
        for t in 0..bags.len() {
            let prev = if t > 0 { &bags[t - 1] } else { &empty };
            let next = bags.get(t + 1).unwrap_or(&empty);
            let has = |b: &Vec<usize>, v: &usize| b.binary_search(v).is_ok();
            let bag = &bags[t];
            if !bag.iter().all(|v| has(prev, v) || has(next, v)) {
                continue;
            }
            let edges_kept = bag.iter().all(|&u| {
                g.neighbors(u)
                    .iter()
                    .filter(|&&w| w > u && has(bag, &w))
                    .all(|w| (has(prev, &u) && has(prev, w)) || (has(next, &u) && has(next, w)))
            });
            if edges_kept {
                bags.remove(t);
                continue 'outer;
            }
        }
        break;
    }
    PathDecomposition { bags }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pd(b: &[&[usize]]) -> PathDecomposition {
        PathDecomposition::new(b.iter().map(|x| x.to_vec()).collect())
    }

    fn p3() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn validate_examples() {
        let g = p3();
        assert_eq!(validate(&g, &pd(&[&[0, 1], &[1, 2]])), Ok(()));
        assert_eq!(
            validate(&g, &pd(&[&[0, 1], &[2]])),
            Err(Violation::Pd2 { edge: (1, 2) })
        );
        assert_eq!(
            validate(&g, &pd(&[&[0], &[1], &[0, 2]]))
                .unwrap_err()
                .axiom(),
            "PD2"
        );
        let g2 = Graph::from_edges(3, &[(0, 2)]).unwrap();
        assert_eq!(
            validate(&g2, &pd(&[&[0], &[1], &[0, 2]])),
            Err(Violation::Pd3 {
                vertex: 0,
                bags: (1, 2, 3)
            })
        );
        assert_eq!(
            validate(&g, &pd(&[&[0, 1]])),
            Err(Violation::Pd1 { vertex: 2 })
        );
        assert_eq!(
            validate(&g, &pd(&[&[0, 7]])),
            Err(Violation::UnknownVertex { vertex: 7, bag: 1 })
        );
        assert_eq!(
            Violation::Pd2 { edge: (1, 2) }.to_string(),
            "PD2 edge (1,2)"
        );
    }

    #[test]
    fn metric_examples() {
        let m = metrics(&pd(&[&[0, 1], &[1, 2]]));
        assert_eq!((m.width, m.length, m.size), (1, 2, 4));
        let m = metrics(&PathDecomposition::default());
        assert_eq!((m.width, m.length, m.size), (-1, 0, 0));
    }

    #[test]
    fn span_frontier() {
        let g = p3();
        assert_eq!(
            span_and_frontier(&g, &pd(&[&[0, 1]])),
            Ok((vec![0, 1], vec![1]))
        );
        assert_eq!(
            span_and_frontier(&g, &PathDecomposition::default()),
            Ok((vec![], vec![]))
        );
        let (_, f) = span_and_frontier(&g, &pd(&[&[0, 1], &[1, 2]])).unwrap();
        assert!(f.is_empty());
    }

    #[test]
    fn concat_examples() {
        let c = concat(&pd(&[&[0, 1]]), &pd(&[&[2, 3]])).unwrap();
        assert_eq!(c, pd(&[&[0, 1, 2, 3]]));
        let c = concat(&pd(&[&[0, 1, 2]]), &pd(&[&[3, 4]])).unwrap();
        assert_eq!(c.len(), 2);
        let a3 = pd(&[&[0, 1], &[1, 2, 3], &[3, 4]]);
        let a2 = pd(&[&[5, 6], &[6, 7]]);
        assert_eq!(concat(&a3, &a2).unwrap().len(), 4);
        assert_eq!(
            concat(&pd(&[&[0]]), &pd(&[&[0]])),
            Err(DecompositionError::Overlap(0))
        );
        assert_eq!(
            concat_capped(&pd(&[&[0, 1]]), &pd(&[&[2, 3]]), 3)
                .unwrap()
                .len(),
            2
        );
    }

    #[test]
    fn types() {
        use DecompositionType::*;
        assert_eq!(classify_type(&pd(&[&[0, 1], &[1, 2]])), Ok(A));
        assert_eq!(classify_type(&pd(&[&[0, 1], &[1, 2, 3, 4]])), Ok(B1));
        assert_eq!(classify_type(&pd(&[&[0, 1, 2], &[2, 3, 4]])), Ok(C));
        let b1 = pd(&[&[0, 1], &[1, 2, 3, 4]]);
        assert_eq!(classify_type(&reverse(&b1)), Ok(B2));
        assert_eq!(reverse(&reverse(&b1)), b1);
        assert_eq!(
            classify_type(&PathDecomposition::default()),
            Err(DecompositionError::Empty)
        );
    }

    #[test]
    fn alpha_beta_examples() {
        let p = pd(&[&[0], &[0, 1], &[1], &[1], &[1, 2]]);
        assert_eq!(alpha_beta(&p, &[1]), Ok((2, 5)));
        assert_eq!(alpha_beta(&p, &[0, 1, 2]), Ok((1, 5)));
        assert_eq!(alpha_beta(&pd(&[&[0, 1], &[1, 2]]), &[1]), Ok((1, 2)));
        assert_eq!(alpha_beta(&p, &[9]), Err(DecompositionError::Disjoint));
    }

    #[test]
    fn redundant_examples() {
        let g = p3();
        assert_eq!(
            remove_redundant_bags(&g, &pd(&[&[0, 1], &[0, 1], &[1, 2]])),
            pd(&[&[0, 1], &[1, 2]])
        );
        let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(
            remove_redundant_bags(&k2, &pd(&[&[0], &[0, 1]])),
            pd(&[&[0, 1]])
        );
        let p = pd(&[&[0, 1], &[1, 2]]);
        assert_eq!(remove_redundant_bags(&g, &p), p);
        // the middle bag is the only one holding edge {0,1}
        assert_eq!(
            remove_redundant_bags(&k2, &pd(&[&[0], &[0, 1], &[1]])),
            pd(&[&[0, 1]])
        );
    }

    #[test]
    fn text_roundtrip() {
        let p = pd(&[&[3, 1], &[2]]);
        assert_eq!(parse_decomposition(&p.to_text()), Ok(p));
        assert_eq!(parse_decomposition(""), Ok(PathDecomposition::default()));
        assert!(parse_decomposition("1 x").is_err());
    }
}
