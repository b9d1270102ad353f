//! Simple undirected graphs on dense vertex ids `0..n`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    OutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("empty separator set")]
    EmptySet,
}

/// Immutable simple graph with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut sets = vec![BTreeSet::new(); n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::OutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            sets[u].insert(v);
            sets[v].insert(u);
        }
        Ok(Graph {
            adj: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// All edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, nb) in self.adj.iter().enumerate() {
            out.extend(nb.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    /// Edge-list text accepted by [`parse_graph`].
    pub fn to_edge_list(&self) -> String {
        let edges = self.edges();
        let mut s = format!("{} {}\n", self.n(), edges.len());
        for (u, v) in edges {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }
}

/// Parses the edge-list format: a header `n m`, then `m` lines `u v`.
/// Blank lines and lines starting with `#` are skipped; repeated edges collapse.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or(GraphError::Malformed {
        line: 0,
        reason: "missing header".into(),
    })?;
    let (n, m) = parse_pair(hline, header)?;

    let mut edges = Vec::with_capacity(m);
    for (line, l) in lines {
        edges.push(parse_pair(line, l)?);
    }
    if edges.len() != m {
        return Err(GraphError::Malformed {
            line: hline,
            reason: format!("header announces {m} edges, found {}", edges.len()),
        });
    }
    Graph::from_edges(n, &edges)
}

fn parse_pair(line: usize, l: &str) -> Result<(usize, usize), GraphError> {
    let bad = |reason: &str| GraphError::Malformed {
        line,
        reason: reason.to_string(),
    };
    let mut it = l.split_whitespace();
    let a = it.next().ok_or_else(|| bad("expected two integers"))?;
    let b = it.next().ok_or_else(|| bad("expected two integers"))?;
    if it.next().is_some() {
        return Err(bad("trailing tokens"));
    }
    let a = a.parse().map_err(|_| bad("not a non-negative integer"))?;
    let b = b.parse().map_err(|_| bad("not a non-negative integer"))?;
    Ok((a, b))
}

/// Connected components, each sorted, ordered by smallest member.
pub fn connected_components(g: &Graph) -> Vec<Vec<usize>> {
    components_avoiding(g, &vec![false; g.n()])
}

/// Components of `g` minus the vertices flagged in `removed`.
fn components_avoiding(g: &Graph, removed: &[bool]) -> Vec<Vec<usize>> {
    let mut seen = removed.to_vec();
    let mut out = Vec::new();
    for start in 0..g.n() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut i = 0;
        while i < comp.len() {
            let v = comp[i];
            i += 1;
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// `G[x]` with vertices renumbered in ascending order of `x`; the second value
/// maps new ids to old ones.
pub fn induced_subgraph(g: &Graph, x: &[usize]) -> Result<(Graph, Vec<usize>), GraphError> {
    let mut map: Vec<usize> = x.to_vec();
    map.sort_unstable();
    map.dedup();
    let mut index = vec![usize::MAX; g.n()];
    for (i, &v) in map.iter().enumerate() {
        if v >= g.n() {
            return Err(GraphError::OutOfRange {
                vertex: v,
                n: g.n(),
            });
        }
        index[v] = i;
    }
    let adj = map
        .iter()
        .map(|&v| {
            g.neighbors(v)
                .iter()
                .filter(|&&w| index[w] != usize::MAX)
                .map(|&w| index[w])
                .collect()
        })
        .collect();
    Ok((Graph { adj }, map))
}

/// Vertices of `h` with a neighbour outside `h`.
pub fn border(g: &Graph, h: &[usize]) -> Vec<usize> {
    let inside = membership(g.n(), h);
    let mut out: Vec<usize> = h
        .iter()
        .copied()
        .filter(|&v| g.neighbors(v).iter().any(|&w| !inside[w]))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Components of `G - S` whose neighbourhood is exactly `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SComponents {
    /// Single-vertex components in ascending id order.
    pub leaves: Vec<usize>,
    /// Components with at least two vertices, ordered by smallest member.
    pub branches: Vec<Vec<usize>>,
}

pub fn s_components(g: &Graph, s: &[usize]) -> Result<SComponents, GraphError> {
    if s.is_empty() {
        return Err(GraphError::EmptySet);
    }
    if let Some(&v) = s.iter().find(|&&v| v >= g.n()) {
        return Err(GraphError::OutOfRange {
            vertex: v,
            n: g.n(),
        });
    }
    let in_s = membership(g.n(), s);
    let s_size = in_s.iter().filter(|&&b| b).count();
    let mut out = SComponents {
        leaves: Vec::new(),
        branches: Vec::new(),
    };
    for comp in components_avoiding(g, &in_s) {
        let mut touched = BTreeSet::new();
        for &v in &comp {
            touched.extend(g.neighbors(v).iter().copied().filter(|&w| in_s[w]));
        }
        if touched.len() != s_size {
            continue;
        }
        if comp.len() == 1 {
            out.leaves.push(comp[0]);
        } else {
            out.branches.push(comp);
        }
    }
    Ok(out)
}

/// Partition of the vertex set into big components and isolated vertices/edges.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ComponentSplit {
    pub big: Vec<Vec<usize>>,
    pub k1: Vec<usize>,
    pub k2: Vec<(usize, usize)>,
}

pub fn classify_components(g: &Graph) -> ComponentSplit {
    let mut split = ComponentSplit::default();
    for comp in connected_components(g) {
        match comp.len() {
            1 => split.k1.push(comp[0]),
            2 => split.k2.push((comp[0], comp[1])),
            _ => split.big.push(comp),
        }
    }
    split
}

/// `g` plus a new vertex `n` adjacent to every old vertex.
pub fn add_universal_vertex(g: &Graph) -> Graph {
    let n = g.n();
    let mut adj = g.adj.clone();
    for nb in adj.iter_mut() {
        nb.push(n);
    }
    adj.push((0..n).collect());
    Graph { adj }
}

pub const BOTTLENECK_BRANCHES: usize = 13;

pub fn is_bottleneck(g: &Graph, s: &[usize]) -> bool {
    match s_components(g, s) {
        Ok(sc) => sc.branches.len() >= BOTTLENECK_BRANCHES,
        Err(_) => false,
    }
}

/// Disjoint union, renumbering each part after the previous ones.
pub fn disjoint_union(parts: &[&Graph]) -> Graph {
    let mut adj = Vec::new();
    for g in parts {
        let off = adj.len();
        adj.extend(g.adj.iter().map(|nb| nb.iter().map(|&w| w + off).collect()));
    }
    Graph { adj }
}

pub(crate) fn membership(n: usize, xs: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &x in xs {
        if x < n {
            m[x] = true;
        }
    }
    m
}
