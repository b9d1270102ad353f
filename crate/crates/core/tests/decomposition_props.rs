mod common;

use pathdecomp::decomposition::{
    alpha_beta, bottleneck_interval, classify_type, color_branches, concat, remove_redundant_bags,
    reverse, validate, BottleneckInterval, BranchColor, DecompositionType, PathDecomposition,
    Violation,
};
use pathdecomp::generic::solve_exact;
use pathdecomp::graph::connected_components;
use pathdecomp::Graph;
use proptest::prelude::*;

fn pd(b: &[&[usize]]) -> PathDecomposition {
    PathDecomposition::new(b.iter().map(|x| x.to_vec()).collect())
}

/// Contiguity checked on every index triple.
fn triple_condition(n: usize, p: &PathDecomposition) -> bool {
    let has = |t: usize, v: usize| p.bags()[t].binary_search(&v).is_ok();
    let l = p.len();
    (0..n).all(|v| {
        (0..l).all(|i| (i..l).all(|j| (j..l).all(|k| !(has(i, v) && has(k, v)) || has(j, v))))
    })
}

fn covers(g: &Graph, p: &PathDecomposition) -> bool {
    let has = |b: &Vec<usize>, v: usize| b.binary_search(&v).is_ok();
    (0..g.n()).all(|v| p.bags().iter().any(|b| has(b, v)))
        && g.edges()
            .iter()
            .all(|&(u, v)| p.bags().iter().any(|b| has(b, u) && has(b, v)))
}

fn arb_sequence() -> impl Strategy<Value = (Graph, PathDecomposition)> {
    (1usize..=6, 0usize..=6).prop_flat_map(|(n, l)| {
        let edges = proptest::collection::vec((0..n, 0..n), 0..8);
        let bags = proptest::collection::vec(proptest::collection::vec(0..n, 0..4), l);
        (edges, bags).prop_map(move |(e, b)| {
            let e: Vec<_> = e.into_iter().filter(|(u, v)| u != v).collect();
            (Graph::from_edges(n, &e).unwrap(), PathDecomposition::new(b))
        })
    })
}

/// Two-leg-vertex branches `{a_i, b_i}` on a shared centre `x = 0`, with
/// `a_i = 2i - 1` adjacent to the centre and `b_i = 2i`.
fn branches_on_centre(count: usize) -> Graph {
    let mut e = Vec::new();
    for i in 1..=count {
        e.push((0, 2 * i - 1));
        e.push((2 * i - 1, 2 * i));
    }
    Graph::from_edges(2 * count + 1, &e).unwrap()
}

#[test]
fn interval_and_colours_of_a_staggered_sweep() {
    let g = branches_on_centre(13);
    let (a, b) = (|i: usize| 2 * i - 1, |i: usize| 2 * i);
    let mut bags = vec![vec![a(1), b(1)], vec![0, a(1), a(2), b(2)]];
    for i in 3..=11 {
        bags.push(vec![0, a(i), b(i)]);
    }
    bags.push(vec![0, a(12), b(12), a(13)]);
    bags.push(vec![a(13), b(13)]);
    let p = PathDecomposition::new(bags);
    assert!(validate(&g, &p).is_ok());
    assert_eq!(p.width(), 3);
    let iv = bottleneck_interval(&g, &p, &[0]).unwrap().unwrap();
    assert_eq!(iv, BottleneckInterval { t1: 3, t2: 11 });
    let colours = color_branches(&g, &p, &[0]).unwrap();
    let count = |c: BranchColor| colours.iter().filter(|(_, x)| *x == c).count();
    assert_eq!(count(BranchColor::Gray), 2);
    assert_eq!(count(BranchColor::Black), 2);
    assert_eq!(count(BranchColor::Green), 9);
}

#[test]
fn interval_of_the_natural_sweep() {
    // legs one after another, the centre in every bag but the outer two
    let g = common::spider(13, 2);
    let mut bags = vec![vec![1, 2]];
    bags.push(vec![0, 1]);
    for leg in 1..13 {
        bags.push(vec![0, 1 + 2 * leg, 2 + 2 * leg]);
    }
    let p = PathDecomposition::new(bags);
    assert!(validate(&g, &p).is_ok());
    let second = alpha_beta(&p, &[3, 4]).unwrap().0;
    let second_last = alpha_beta(&p, &[23, 24]).unwrap().1;
    let iv = bottleneck_interval(&g, &p, &[0]).unwrap().unwrap();
    assert_eq!((iv.t1, iv.t2), (second, second_last));
    assert!(bottleneck_interval(&g, &p, &[1]).is_err());
}

#[test]
fn colour_rules() {
    use pathdecomp::decomposition::color_of;
    let iv = BottleneckInterval { t1: 3, t2: 6 };
    assert_eq!(color_of(3, 6, iv), BranchColor::Green);
    assert_eq!(color_of(1, 2, iv), BranchColor::Gray);
    assert_eq!(color_of(7, 9, iv), BranchColor::Black);
    assert_eq!(color_of(2, 4, iv), BranchColor::Red);
    assert_eq!(color_of(4, 8, iv), BranchColor::Blue);
    assert_eq!(color_of(1, 8, iv), BranchColor::Purple);
}

#[test]
fn reverse_examples() {
    let p = pd(&[&[0, 1], &[1, 2, 3, 4]]);
    assert_eq!(reverse(&reverse(&p)), p);
    assert_eq!(classify_type(&reverse(&p)), Ok(DecompositionType::B2));
    let single = pd(&[&[0, 1, 2]]);
    assert_eq!(reverse(&single), single);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn contiguity_matches_triples((g, p) in arb_sequence()) {
        let expected = covers(&g, &p) && triple_condition(g.n(), &p);
        prop_assert_eq!(validate(&g, &p).is_ok(), expected);
    }

    #[test]
    fn contiguity_witness_is_the_smallest_triple((g, p) in arb_sequence()) {
        if let Err(Violation::Pd3 { vertex, bags }) = validate(&g, &p) {
            let has = |t: usize, v: usize| p.bags()[t].binary_search(&v).is_ok();
            let l = p.len();
            let smallest = (0..g.n()).find_map(|v| {
                (0..l).flat_map(|i| (i..l).flat_map(move |j| (j..l).map(move |k| (i, j, k))))
                    .find(|&(i, j, k)| has(i, v) && !has(j, v) && has(k, v))
                    .map(|(i, j, k)| (v, (i + 1, j + 1, k + 1)))
            });
            prop_assert_eq!(Some((vertex, bags)), smallest);
        }
    }

    #[test]
    fn reversal_swaps_b_types((_, p) in arb_sequence()) {
        prop_assume!(!p.is_empty());
        let t = classify_type(&p).unwrap();
        let r = classify_type(&reverse(&p)).unwrap();
        let swapped = match t {
            DecompositionType::B1 => DecompositionType::B2,
            DecompositionType::B2 => DecompositionType::B1,
            other => other,
        };
        prop_assert_eq!(r, swapped);
    }

    #[test]
    fn concat_length_accounts_for_merge(l1 in 0usize..4, l2 in 0usize..4, s1 in 1usize..4, s2 in 1usize..4) {
        let make = |len: usize, size: usize, base: usize| {
            PathDecomposition::new((0..len).map(|t| (0..size).map(|x| base + 10 * t + x).collect()).collect())
        };
        let p1 = make(l1, s1, 0);
        let p2 = make(l2, s2, 100);
        let c = concat(&p1, &p2).unwrap();
        let merged = usize::from(l1 > 0 && l2 > 0 && s1 <= 2 && s2 <= 2);
        prop_assert_eq!(c.len() + merged, l1 + l2);
    }
}

fn small_graph() -> impl Strategy<Value = Graph> {
    (1usize..=7).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..12).prop_map(move |e| {
            let e: Vec<_> = e.into_iter().filter(|(u, v)| u != v).collect();
            Graph::from_edges(n, &e).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn redundant_bag_removal(g in small_graph(), k in 1usize..=3) {
        let Some(p) = solve_exact(&g, k, None, None).unwrap() else { return Ok(()) };
        // pad with copies of existing bags so there is something to remove
        let mut bags = p.bags().to_vec();
        let dup = bags[0].clone();
        bags.insert(0, dup);
        let padded = PathDecomposition::new(bags);
        prop_assert!(validate(&g, &padded).is_ok());
        let r = remove_redundant_bags(&g, &padded);
        prop_assert!(validate(&g, &r).is_ok());
        prop_assert!(r.width() <= padded.width());
        prop_assert!(r.len() < padded.len());
        prop_assert_eq!(remove_redundant_bags(&g, &r), r);
    }

    #[test]
    fn connected_pieces_meet_every_bag_in_their_range(g in small_graph(), k in 1usize..=3) {
        let Some(p) = solve_exact(&g, k, None, None).unwrap() else { return Ok(()) };
        for comp in connected_components(&g) {
            let (a, b) = alpha_beta(&p, &comp).unwrap();
            for t in a..b {
                let meet = p.bags()[t - 1].iter().any(|v| p.bags()[t].contains(v) && comp.contains(v));
                prop_assert!(meet, "component {:?} breaks between bags {} and {}", comp, t, t + 1);
            }
        }
    }
}
