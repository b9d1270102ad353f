#![allow(dead_code)]

use pathdecomp::Graph;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

/// Random graph that is often disconnected: a few dense pieces plus some
/// isolated vertices and edges.
pub fn mixed_graph(rng: &mut ChaCha8Rng, max_n: usize) -> Graph {
    let n = rng.gen_range(1..=max_n);
    match rng.gen_range(0..3) {
        0 => {
            let p = [0.2, 0.3, 0.45, 0.6][rng.gen_range(0..4)];
            random_graph(rng, n, p)
        }
        1 => {
            // pieces on consecutive id blocks
            let mut edges = Vec::new();
            let mut start = 0;
            while start < n {
                let len = rng.gen_range(1..=(n - start).min(5));
                for u in start..start + len {
                    for v in u + 1..start + len {
                        if rng.gen_bool(0.6) {
                            edges.push((u, v));
                        }
                    }
                }
                start += len;
            }
            Graph::from_edges(n, &edges).unwrap()
        }
        _ => {
            // connected core, shuffled ids
            let mut perm: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            let mut edges = Vec::new();
            for v in 1..n {
                edges.push((perm[v], perm[rng.gen_range(0..v)]));
            }
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.15) {
                        edges.push((u, v));
                    }
                }
            }
            Graph::from_edges(n, &edges).unwrap()
        }
    }
}

pub fn connected_random(rng: &mut ChaCha8Rng, n: usize, extra: f64) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((v, rng.gen_range(0..v)));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(extra) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

pub fn spider(legs: usize, len: usize) -> Graph {
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

pub fn clique(n: usize) -> Graph {
    let mut e = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            e.push((u, v));
        }
    }
    Graph::from_edges(n, &e).unwrap()
}

use pathdecomp::decomposition::{alpha_beta, DecompositionType};
use pathdecomp::general::{config_of, mu, Class};
use pathdecomp::graph::classify_components;
use pathdecomp::PathDecomposition;
use std::collections::HashMap;

fn flip(t: DecompositionType) -> DecompositionType {
    match t {
        DecompositionType::B1 => DecompositionType::B2,
        DecompositionType::B2 => DecompositionType::B1,
        other => other,
    }
}

fn joins(left: DecompositionType, right: DecompositionType) -> bool {
    matches!(left, DecompositionType::A | DecompositionType::B2)
        && matches!(right, DecompositionType::A | DecompositionType::B1)
}

/// Most merges over every order and every reversal of the B items.
pub fn best_matchups(types: &[DecompositionType]) -> usize {
    fn go(
        types: &[DecompositionType],
        used: &mut Vec<bool>,
        last: Option<DecompositionType>,
    ) -> usize {
        let mut best = 0;
        for i in 0..types.len() {
            if used[i] {
                continue;
            }
            used[i] = true;
            let options = if matches!(types[i], DecompositionType::B1 | DecompositionType::B2) {
                vec![types[i], flip(types[i])]
            } else {
                vec![types[i]]
            };
            for t in options {
                let gain = usize::from(last.is_some_and(|l| joins(l, t)));
                best = best.max(gain + go(types, used, Some(t)));
            }
            used[i] = false;
        }
        best
    }
    go(types, &mut vec![false; types.len()], None)
}

/// Minimum of `sum of lengths - mu` per `(r1, r2, configuration)` over every
/// distribution of small components to `c` items.
pub fn brute_phi(
    c: usize,
    q1: usize,
    q2: usize,
    entry: &dyn Fn(usize, usize, usize) -> Option<(usize, Class)>,
) -> HashMap<(usize, usize, u8), usize> {
    let mut out: HashMap<(usize, usize, u8), usize> = HashMap::new();
    let mut split = vec![(0usize, 0usize); c];
    fn go(
        m: usize,
        split: &mut Vec<(usize, usize)>,
        q1: usize,
        q2: usize,
        entry: &dyn Fn(usize, usize, usize) -> Option<(usize, Class)>,
        out: &mut HashMap<(usize, usize, u8), usize>,
    ) {
        if m == split.len() {
            let (mut len, mut a, mut b) = (0, 0, 0);
            for (idx, &(i, j)) in split.iter().enumerate() {
                let Some((l, class)) = entry(idx, i, j) else {
                    return;
                };
                len += l;
                match class {
                    Class::A => a += 1,
                    Class::B => b += 1,
                    Class::C => {}
                }
            }
            let r1 = split.iter().map(|s| s.0).sum();
            let r2 = split.iter().map(|s| s.1).sum();
            let key = (r1, r2, config_of(a, b));
            let v = len - mu(a, b);
            let slot = out.entry(key).or_insert(v);
            *slot = (*slot).min(v);
            return;
        }
        let used1: usize = split[..m].iter().map(|s| s.0).sum();
        let used2: usize = split[..m].iter().map(|s| s.1).sum();
        for i in 0..=q1 - used1 {
            for j in 0..=q2 - used2 {
                split[m] = (i, j);
                go(m + 1, split, q1, q2, entry, out);
            }
        }
        split[m] = (0, 0);
    }
    go(0, &mut split, q1, q2, entry, &mut out);
    out
}

/// Whether two big components are ever active in two common bags.
pub fn processed_in_parallel(g: &Graph, p: &PathDecomposition) -> bool {
    let big = classify_components(g).big;
    let spans: Vec<(usize, usize)> = big.iter().map(|c| alpha_beta(p, c).unwrap()).collect();
    spans.iter().enumerate().any(|(x, &(a1, b1))| {
        spans[x + 1..].iter().any(|&(a2, b2)| {
            let overlap = b1.min(b2) as isize - a1.max(a2) as isize + 1;
            overlap > 1
        })
    })
}
