mod common;

use pathdecomp::graph::{
    add_universal_vertex, border, classify_components, connected_components, induced_subgraph,
    is_bottleneck, parse_graph, s_components,
};
use pathdecomp::Graph;
use proptest::prelude::*;

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (0..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        let m = pairs.len();
        proptest::collection::vec(any::<bool>(), m).prop_map(move |keep| {
            let edges: Vec<_> = pairs
                .iter()
                .zip(&keep)
                .filter(|(_, k)| **k)
                .map(|(e, _)| *e)
                .collect();
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

#[test]
fn parse_examples() {
    let p3 = parse_graph("3 2\n0 1\n1 2\n").unwrap();
    assert_eq!(p3.edges(), vec![(0, 1), (1, 2)]);
    assert_eq!(parse_graph("1 0\n").unwrap().n(), 1);
    let k4 = parse_graph("4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n").unwrap();
    assert_eq!(k4.edge_count(), 6);
    assert!(parse_graph("2 1\n0 0\n").is_err());
    assert!(parse_graph("2 1\n0 5\n").is_err());
    assert!(parse_graph("2 1\n0 x\n").is_err());
}

#[test]
fn component_examples() {
    let g = Graph::from_edges(4, &[(0, 1), (1, 2), (0, 2)]).unwrap();
    let comps = connected_components(&g);
    assert_eq!(comps, vec![vec![0, 1, 2], vec![3]]);
    assert!(connected_components(&Graph::empty(0)).is_empty());

    let g = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4)]).unwrap();
    let split = classify_components(&g);
    assert_eq!(split.big, vec![vec![0, 1, 2]]);
    assert_eq!(split.k2, vec![(3, 4)]);
    assert_eq!(split.k1, vec![5]);
}

#[test]
fn set_primitives() {
    let p4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
    let (sub, map) = induced_subgraph(&p4, &[0, 2]).unwrap();
    assert_eq!((sub.n(), sub.edge_count(), map), (2, 0, vec![0, 2]));
    assert_eq!(induced_subgraph(&p4, &[]).unwrap().0.n(), 0);
    assert_eq!(border(&p4, &[0, 1]), vec![1]);
    assert!(border(&p4, &[0, 1, 2, 3]).is_empty());
    let sc = s_components(&p4, &[1]).unwrap();
    assert_eq!(sc.leaves, vec![0]);
    assert_eq!(sc.branches, vec![vec![2, 3]]);
    assert!(s_components(&p4, &[]).is_err());
}

#[test]
fn bottleneck_threshold() {
    assert!(is_bottleneck(&common::spider(13, 2), &[0]));
    assert!(!is_bottleneck(&common::spider(12, 2), &[0]));
    assert!(!is_bottleneck(&common::spider(13, 2), &[]));
    let star = common::spider(20, 1);
    assert!(!is_bottleneck(&star, &[0]));
}

#[test]
fn universal_vertex_examples() {
    assert_eq!(add_universal_vertex(&Graph::empty(1)).edge_count(), 1);
    assert_eq!(add_universal_vertex(&Graph::empty(0)).n(), 1);
    assert_eq!(add_universal_vertex(&common::clique(3)), common::clique(4));
}

proptest! {
    #[test]
    fn components_have_empty_border(g in arb_graph(10)) {
        for c in connected_components(&g) {
            prop_assert!(border(&g, &c).is_empty());
        }
    }

    #[test]
    fn branches_see_exactly_s(g in arb_graph(9), s_bits in 1u32..512) {
        let s: Vec<usize> = (0..g.n()).filter(|&v| s_bits >> v & 1 == 1).collect();
        prop_assume!(!s.is_empty());
        let sc = s_components(&g, &s).unwrap();
        let again = s_components(&g, &s).unwrap();
        prop_assert_eq!(&sc, &again);
        let leaves = sc.leaves.iter().map(|&v| vec![v]);
        for h in sc.branches.iter().cloned().chain(leaves) {
            let mut nb: Vec<usize> = h.iter().flat_map(|&v| g.neighbors(v).iter().copied())
                .filter(|w| !h.contains(w)).collect();
            nb.sort_unstable();
            nb.dedup();
            prop_assert_eq!(&nb, &s);
        }
        prop_assert!(sc.leaves.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn universal_vertex_edge_count(g in arb_graph(10)) {
        prop_assert_eq!(add_universal_vertex(&g).edge_count(), g.edge_count() + g.n());
    }

    #[test]
    fn edge_list_roundtrip(g in arb_graph(10)) {
        prop_assert_eq!(parse_graph(&g.to_edge_list()).unwrap(), g);
    }
}
