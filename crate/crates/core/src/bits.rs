//! Fixed-width vertex bitsets used by the exponential searches.

use crate::graph::Graph;

pub type Mask = u128;

/// Largest vertex count a [`Mask`] can index.
pub const MAX_VERTICES: usize = 128;

#[inline]
pub fn bit(v: usize) -> Mask {
    1 << v
}

#[inline]
pub fn count(m: Mask) -> usize {
    m.count_ones() as usize
}

#[inline]
pub fn lowest(m: Mask) -> Option<usize> {
    (m != 0).then(|| m.trailing_zeros() as usize)
}

pub fn full(n: usize) -> Mask {
    if n >= MAX_VERTICES {
        Mask::MAX
    } else {
        (1 << n) - 1
    }
}

pub fn from_slice(xs: &[usize]) -> Mask {
    xs.iter().fold(0, |m, &v| m | bit(v))
}

pub fn to_vec(m: Mask) -> Vec<usize> {
    iter(m).collect()
}

pub fn iter(mut m: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        let v = lowest(m)?;
        m &= m - 1;
        Some(v)
    })
}

/// Every subset of `m` with between 1 and `max` members.
pub fn subsets_up_to(m: Mask, max: usize) -> Vec<Mask> {
    let items = to_vec(m);
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Mask, usize)> = vec![(0, 0, 0)];
    while let Some((start, acc, size)) = stack.pop() {
        if size > 0 {
            out.push(acc);
        }
        if size == max {
            continue;
        }
        for i in (start..items.len()).rev() {
            stack.push((i + 1, acc | bit(items[i]), size + 1));
        }
    }
    out
}

/// Adjacency as bitsets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MaskGraph {
    pub n: usize,
    pub adj: Vec<Mask>,
}

impl MaskGraph {
    /// `None` when the graph has more than [`MAX_VERTICES`] vertices.
    pub fn new(g: &Graph) -> Option<Self> {
        if g.n() > MAX_VERTICES {
            return None;
        }
        let adj = (0..g.n()).map(|v| from_slice(g.neighbors(v))).collect();
        Some(MaskGraph { n: g.n(), adj })
    }

    pub fn all(&self) -> Mask {
        full(self.n)
    }

    /// Members of `c` with a neighbour outside `c`.
    pub fn border(&self, c: Mask) -> Mask {
        iter(c)
            .filter(|&v| self.adj[v] & !c != 0)
            .fold(0, |m, v| m | bit(v))
    }

    pub fn neighborhood(&self, c: Mask) -> Mask {
        iter(c).fold(0, |m, v| m | self.adj[v]) & !c
    }

    pub fn has_edge_inside(&self, c: Mask) -> bool {
        iter(c).any(|v| self.adj[v] & c != 0)
    }

    /// Components of `G[c]`, ordered by lowest member.
    pub fn components_within(&self, c: Mask) -> Vec<Mask> {
        let mut rest = c;
        let mut out = Vec::new();
        while let Some(s) = lowest(rest) {
            let mut comp = bit(s);
            let mut frontier = comp;
            while frontier != 0 {
                let grow = self.neighborhood_of(frontier) & rest & !comp;
                comp |= grow;
                frontier = grow;
            }
            rest &= !comp;
            out.push(comp);
        }
        out
    }

    fn neighborhood_of(&self, c: Mask) -> Mask {
        iter(c).fold(0, |m, v| m | self.adj[v])
    }
}
