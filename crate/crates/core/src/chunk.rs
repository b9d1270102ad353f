//! One big component plus isolated vertices and edges, with caps on the
//! first and last bag.
//!
//! Small components are interchangeable, so the search state only counts how
//! many of each kind are already placed.

use crate::bits::{self, MaskGraph};
use crate::connected::{Engine, St};
use crate::decomposition::{DecompositionType, PathDecomposition};
use crate::general::Solver;
use crate::graph::{connected_components, disjoint_union, Graph};
use crate::SolveError;

/// A connected graph with at least three vertices plus `q1` isolated vertices
/// and `q2` isolated edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChunkGraph {
    big: Graph,
    q1: usize,
    q2: usize,
}

impl ChunkGraph {
    pub fn new(big: Graph, q1: usize, q2: usize) -> Result<Self, SolveError> {
        if big.n() < 3 || connected_components(&big).len() != 1 {
            return Err(SolveError::NotAChunk);
        }
        Ok(ChunkGraph { big, q1, q2 })
    }

    pub fn big(&self) -> &Graph {
        &self.big
    }

    pub fn q1(&self) -> usize {
        self.q1
    }

    pub fn q2(&self) -> usize {
        self.q2
    }

    /// The whole graph. Big vertices keep their ids, isolated vertex `p` is
    /// `n + p` and isolated edge `p` joins `n + q1 + 2p` and `n + q1 + 2p + 1`.
    pub fn to_graph(&self) -> Graph {
        let pairs: Vec<(usize, usize)> = (0..self.q2).map(|p| (2 * p, 2 * p + 1)).collect();
        let k2s = Graph::from_edges(2 * self.q2, &pairs).expect("pairs in range");
        disjoint_union(&[&self.big, &Graph::empty(self.q1), &k2s])
    }
}

/// Covered big vertices plus the number of isolated vertices and edges
/// already placed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChunkState {
    pub covered: Vec<usize>,
    pub i: usize,
    pub j: usize,
}

impl ChunkState {
    pub fn source() -> Self {
        ChunkState {
            covered: Vec::new(),
            i: 0,
            j: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChunkEdge {
    /// `None` when the edge completes the decomposition.
    pub to: Option<ChunkState>,
    pub weight: usize,
    /// Bags in the ids of [`ChunkGraph::to_graph`].
    pub bags: Vec<Vec<usize>>,
}

fn check_caps(k: usize, lambda1: usize, lambda2: usize) -> Result<(), SolveError> {
    if k > 3 {
        return Err(SolveError::UnsupportedWidth(k));
    }
    for cap in [lambda1, lambda2] {
        if !(2..=k + 1).contains(&cap) {
            return Err(SolveError::InvalidCap { cap, max: k + 1 });
        }
    }
    Ok(())
}

fn to_st(c: &ChunkGraph, x: &ChunkState) -> Result<St, SolveError> {
    if x.i > c.q1 || x.j > c.q2 || x.covered.iter().any(|&v| v >= c.big.n()) {
        return Err(SolveError::MalformedState(format!("{x:?}")));
    }
    Ok(St {
        c: bits::from_slice(&x.covered),
        i: x.i as u16,
        j: x.j as u16,
    })
}

fn convert(edges: Vec<crate::connected::Edge>) -> Vec<ChunkEdge> {
    edges
        .into_iter()
        .map(|e| ChunkEdge {
            to: e.target.map(|t| ChunkState {
                covered: bits::to_vec(t.c),
                i: t.i as usize,
                j: t.j as usize,
            }),
            weight: e.weight,
            bags: e.bags,
        })
        .collect()
}

fn engine<'a>(
    solver: &'a Solver,
    c: &'a ChunkGraph,
    k: usize,
    lambda1: usize,
    lambda2: usize,
) -> Result<Engine<'a>, SolveError> {
    check_caps(k, lambda1, lambda2)?;
    Engine::new(solver, &c.big, k, c.q1, c.q2, lambda1, lambda2)
}

/// Single-bag edges out of `x`: the border of the covered set, new big
/// vertices, and whole small components, within the bag cap that applies.
pub fn step_and_fill_successors(
    c: &ChunkGraph,
    k: usize,
    lambda1: usize,
    lambda2: usize,
    x: &ChunkState,
) -> Result<Vec<ChunkEdge>, SolveError> {
    let solver = Solver::new();
    let e = engine(&solver, c, k, lambda1, lambda2)?;
    Ok(convert(e.step_edges(to_st(c, x)?)))
}

/// Jump edges out of `x`, each covering green branches, some leaves and some
/// small components with one lower-width sub-decomposition.
pub fn jump_with_fill(
    c: &ChunkGraph,
    k: usize,
    x: &ChunkState,
    solver: &Solver,
) -> Result<Vec<ChunkEdge>, SolveError> {
    let e = engine(solver, c, k, k + 1, k + 1)?;
    Ok(convert(e.jump_edges(to_st(c, x)?)?))
}

/// Minimum-length decomposition of `c.to_graph()` with width at most `k`,
/// first bag at most `lambda1` and last bag at most `lambda2` vertices.
pub fn solve_chunk(
    c: &ChunkGraph,
    k: usize,
    lambda1: usize,
    lambda2: usize,
) -> Result<Option<PathDecomposition>, SolveError> {
    solve_chunk_with(&Solver::new(), c, k, lambda1, lambda2)
}

pub fn solve_chunk_with(
    solver: &Solver,
    c: &ChunkGraph,
    k: usize,
    lambda1: usize,
    lambda2: usize,
) -> Result<Option<PathDecomposition>, SolveError> {
    check_caps(k, lambda1, lambda2)?;
    MaskGraph::new(&c.big).ok_or(SolveError::TooLarge {
        n: c.big.n(),
        limit: bits::MAX_VERTICES,
    })?;
    solver.chunk(&c.big, k, c.q1, c.q2, lambda1, lambda2)
}

/// Minimum-length decomposition preferring both boundary bags small, then
/// one (returned with the small bag last), then neither.
pub fn type_optimal(
    c: &ChunkGraph,
    k: usize,
) -> Result<Option<(PathDecomposition, DecompositionType)>, SolveError> {
    check_caps(k, k + 1, k + 1)?;
    Solver::new().typed(&c.big, k, c.q1, c.q2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::{classify_type, validate};

    fn triangle() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn triangle_plus_vertex() {
        let c = ChunkGraph::new(triangle(), 1, 0).unwrap();
        let g = c.to_graph();
        let p = solve_chunk(&c, 3, 4, 4).unwrap().unwrap();
        assert_eq!(p.bags(), &[vec![0, 1, 2, 3]]);
        let p = solve_chunk(&c, 3, 2, 4).unwrap().unwrap();
        assert_eq!(p.len(), 2);
        assert!(p.first_bag().unwrap().len() <= 2);
        assert!(validate(&g, &p).is_ok());
        assert_eq!(solve_chunk(&c, 2, 3, 3).unwrap().unwrap().len(), 2);
        assert!(matches!(
            solve_chunk(&c, 2, 1, 3),
            Err(SolveError::InvalidCap { .. })
        ));
    }

    #[test]
    fn first_fill_respects_first_cap() {
        let c = ChunkGraph::new(triangle(), 4, 0).unwrap();
        let edges = step_and_fill_successors(&c, 3, 2, 4, &ChunkState::source()).unwrap();
        assert!(edges.iter().all(|e| e.bags[0].len() <= 2));
        assert!(edges
            .iter()
            .any(|e| e.to.as_ref().is_some_and(|s| s.i == 2)));
    }

    #[test]
    fn type_examples() {
        let p4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let (p, t) = type_optimal(&ChunkGraph::new(p4, 0, 0).unwrap(), 1)
            .unwrap()
            .unwrap();
        assert_eq!((p.len(), t), (3, DecompositionType::A));
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let (p, t) = type_optimal(&ChunkGraph::new(k4, 0, 0).unwrap(), 3)
            .unwrap()
            .unwrap();
        assert_eq!((p.len(), t), (1, DecompositionType::C));
        assert_eq!(classify_type(&p).unwrap(), t);
    }

    #[test]
    fn rejects_non_chunks() {
        let two = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(ChunkGraph::new(two, 0, 0), Err(SolveError::NotAChunk));
        assert_eq!(
            ChunkGraph::new(Graph::from_edges(2, &[(0, 1)]).unwrap(), 0, 0),
            Err(SolveError::NotAChunk)
        );
    }
}
