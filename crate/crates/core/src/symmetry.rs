//! Interchangeable pieces of a graph: twin leaves and isomorphic branches
//! hanging off the same small separator. Permuting the members of such a
//! class is an automorphism, which the searches use to merge equivalent
//! covered sets.

use std::collections::HashMap;

use crate::bits::{self, Mask, MaskGraph};

const MAX_SEPARATOR: usize = 2;
const MAX_BRANCH: usize = 16;

#[derive(Clone, Debug)]
struct Class {
    /// `members[p][r]` is the vertex of member `p` playing role `r`.
    members: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct Symmetry {
    classes: Vec<Class>,
    branch_class: HashMap<(Mask, Mask), usize>,
}

/// Vertex permutation produced by canonicalisation.
pub(crate) type Perm = Vec<u8>;

impl Symmetry {
    pub(crate) fn new(g: &MaskGraph) -> Self {
        let mut sym = Symmetry::default();
        for sep in separators(g.n) {
            let branches: Vec<Mask> = g
                .components_within(g.all() & !sep)
                .into_iter()
                .filter(|&h| bits::count(h) >= 2 && g.neighborhood(h) == sep)
                .collect();
            if branches.len() < 2 {
                continue;
            }
            let mut groups: Vec<(Mask, Vec<Vec<usize>>)> = Vec::new();
            for &h in &branches {
                if bits::count(h) > MAX_BRANCH {
                    continue;
                }
                let placed = groups.iter_mut().find_map(|(rep, members)| {
                    isomorphism(g, sep, *rep, h).map(|m| members.push(m))
                });
                if placed.is_none() {
                    groups.push((h, vec![reference_order(g, h)]));
                }
            }
            for (_, members) in groups {
                if members.len() < 2 {
                    continue;
                }
                let id = sym.classes.len();
                for m in &members {
                    sym.branch_class.insert((sep, bits::from_slice(m)), id);
                }
                sym.classes.push(Class { members });
            }
        }
        // vertices with identical neighbourhoods
        let mut by_nbhd: HashMap<Mask, Vec<usize>> = HashMap::new();
        for v in 0..g.n {
            if g.adj[v] != 0 {
                by_nbhd.entry(g.adj[v]).or_default().push(v);
            }
        }
        let mut twins: Vec<Vec<usize>> = by_nbhd.into_values().filter(|t| t.len() >= 2).collect();
        twins.sort();
        for t in twins {
            sym.classes.push(Class {
                members: t.into_iter().map(|v| vec![v]).collect(),
            });
        }
        sym
    }

    /// Class id of branch `h` of separator `s`, when it has isomorphic siblings.
    pub(crate) fn branch_class(&self, s: Mask, h: Mask) -> Option<usize> {
        self.branch_class.get(&(s, h)).copied()
    }

    /// Image of `covered` under a deterministic automorphism that sorts every
    /// class so that more-covered members come first. The permutation is
    /// returned unless it is the identity.
    pub(crate) fn canonicalize(&self, covered: Mask, n: usize) -> (Mask, Option<Perm>) {
        let mut c = covered;
        let mut sigma: Option<Perm> = None;
        for class in &self.classes {
            let sigs: Vec<Mask> = class
                .members
                .iter()
                .map(|m| {
                    m.iter()
                        .enumerate()
                        .fold(0, |acc, (r, &v)| acc | (((c >> v) & 1) << r))
                })
                .collect();
            let mut order: Vec<usize> = (0..sigs.len()).collect();
            order.sort_by_key(|&p| std::cmp::Reverse(sigs[p]));
            if order
                .iter()
                .enumerate()
                .all(|(q, &p)| q == p || sigs[q] == sigs[p])
            {
                continue;
            }
            let mut pi: Vec<u8> = (0..n as u8).collect();
            for (q, &p) in order.iter().enumerate() {
                for (r, &v) in class.members[p].iter().enumerate() {
                    pi[v] = class.members[q][r] as u8;
                }
            }
            c = apply(&pi, c);
            sigma = Some(match sigma {
                None => pi,
                Some(s) => s.iter().map(|&v| pi[v as usize]).collect(),
            });
        }
        (c, sigma)
    }
}

pub(crate) fn apply(pi: &[u8], m: Mask) -> Mask {
    bits::iter(m).fold(0, |acc, v| acc | bits::bit(pi[v] as usize))
}

pub(crate) fn invert(pi: &[u8]) -> Perm {
    let mut inv = vec![0u8; pi.len()];
    for (v, &w) in pi.iter().enumerate() {
        inv[w as usize] = v as u8;
    }
    inv
}

fn separators(n: usize) -> Vec<Mask> {
    let mut out = Vec::new();
    for a in 0..n {
        out.push(bits::bit(a));
        if MAX_SEPARATOR >= 2 {
            for b in a + 1..n {
                out.push(bits::bit(a) | bits::bit(b));
            }
        }
    }
    out
}

/// Breadth-first order of `h` from its lowest vertex.
fn reference_order(g: &MaskGraph, h: Mask) -> Vec<usize> {
    let mut order = vec![bits::lowest(h).unwrap()];
    let mut seen = bits::bit(order[0]);
    let mut i = 0;
    while i < order.len() {
        for w in bits::iter(g.adj[order[i]] & h & !seen) {
            seen |= bits::bit(w);
            order.push(w);
        }
        i += 1;
    }
    order
}

/// Images in `h2` of `reference_order(h1)` under an isomorphism fixing the
/// separator pointwise.
fn isomorphism(g: &MaskGraph, sep: Mask, h1: Mask, h2: Mask) -> Option<Vec<usize>> {
    if bits::count(h1) != bits::count(h2) {
        return None;
    }
    let order = reference_order(g, h1);
    let profile = |v: usize, h: Mask| (bits::count(g.adj[v] & h), g.adj[v] & sep);
    let mut image = vec![usize::MAX; order.len()];
    fn extend(
        g: &MaskGraph,
        order: &[usize],
        image: &mut Vec<usize>,
        used: Mask,
        at: usize,
        h2: Mask,
        fits: &dyn Fn(usize, usize) -> bool,
    ) -> bool {
        if at == order.len() {
            return true;
        }
        let v = order[at];
        for w in bits::iter(h2 & !used) {
            if !fits(v, w) {
                continue;
            }
            let consistent = (0..at).all(|p| {
                let adj1 = g.adj[v] >> order[p] & 1;
                let adj2 = g.adj[w] >> image[p] & 1;
                adj1 == adj2
            });
            if consistent {
                image[at] = w;
                if extend(g, order, image, used | bits::bit(w), at + 1, h2, fits) {
                    return true;
                }
            }
        }
        false
    }
    let fits = |v: usize, w: usize| profile(v, h1) == profile(w, h2);
    extend(g, &order, &mut image, 0, 0, h2, &fits).then_some(image)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn spider(legs: usize, len: usize) -> Graph {
        let mut e = Vec::new();
        let mut next = 1;
        for _ in 0..legs {
            let mut prev = 0;
            for _ in 0..len {
                e.push((prev, next));
                prev = next;
                next += 1;
            }
        }
        Graph::from_edges(next, &e).unwrap()
    }

    #[test]
    fn spider_legs_are_one_class() {
        let g = spider(4, 2);
        let mg = MaskGraph::new(&g).unwrap();
        let sym = Symmetry::new(&mg);
        let ids: Vec<_> = (0..4)
            .map(|l| sym.branch_class(1, bits::bit(1 + 2 * l) | bits::bit(2 + 2 * l)))
            .collect();
        assert!(ids.iter().all(|&i| i.is_some() && i == ids[0]));
        // covering legs 3 and 4 is equivalent to covering legs 1 and 2
        let a = sym.canonicalize(1 | 0b1_1000_0000 | 0b110_0000, g.n()).0;
        let b = sym.canonicalize(1 | 0b110 | 0b1_1000, g.n()).0;
        assert_eq!(a, b);
    }

    #[test]
    fn canonical_image_is_an_automorphism_image() {
        let g = spider(3, 3);
        let mg = MaskGraph::new(&g).unwrap();
        let sym = Symmetry::new(&mg);
        let c = bits::from_slice(&[0, 7, 8]);
        let (img, perm) = sym.canonicalize(c, g.n());
        let perm = perm.unwrap();
        assert_eq!(apply(&perm, c), img);
        for (u, v) in g.edges() {
            assert!(g.has_edge(perm[u] as usize, perm[v] as usize));
        }
        assert_eq!(apply(&invert(&perm), img), c);
    }

    #[test]
    fn twin_leaves_sort_covered_first() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let mg = MaskGraph::new(&g).unwrap();
        let sym = Symmetry::new(&mg);
        let (img, _) = sym.canonicalize(bits::from_slice(&[0, 3]), 4);
        assert_eq!(img, bits::from_slice(&[0, 1]));
    }
}
