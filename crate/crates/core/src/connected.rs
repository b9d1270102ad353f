//! Shortest-path search over boundary states for width at most three.
//!
//! A state records the last bag `X` and, for every non-empty `S ⊆ X`, which
//! components hanging off `S` are already covered. Step edges append one bag;
//! jump edges cover many branches of a bottleneck set at once with a
//! lower-width decomposition solved recursively.
//!
//! The search itself runs on covered sets: every transition depends on the
//! last bag only through the border of the covered set, which the bag always
//! contains.

use std::cell::RefCell;
use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap};
use std::rc::Rc;

use crate::bits::{self, Mask, MaskGraph};
use crate::decomposition::PathDecomposition;
use crate::general::Solver;
use crate::graph::{
    border, connected_components, disjoint_union, induced_subgraph, s_components, Graph,
    BOTTLENECK_BRANCHES,
};
use crate::symmetry::{self, Perm, Symmetry};
use crate::SolveError;

/// Branches of a bottleneck set that may stay outside the green group.
pub const NON_GREEN_SLACK: usize = BOTTLENECK_BRANCHES - 1;

/// Coverage record for one subset `S` of the last bag. Branch ids index the
/// branches of `S` ordered by smallest vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoverTriple {
    pub greens: BTreeSet<usize>,
    pub flags: Vec<bool>,
    pub leaf_count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AuxState {
    pub x: Vec<usize>,
    pub r: BTreeMap<Vec<usize>, CoverTriple>,
}

impl AuxState {
    pub fn source() -> Self {
        AuxState {
            x: Vec::new(),
            r: BTreeMap::new(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    Step,
    Jump,
    Sink,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedAuxEdge {
    pub from: AuxState,
    /// `None` for the sink.
    pub to: Option<AuxState>,
    pub weight: usize,
    pub witness: Option<PathDecomposition>,
    pub kind: EdgeKind,
}

fn malformed(msg: impl Into<String>) -> SolveError {
    SolveError::MalformedState(msg.into())
}

fn nonempty_subsets(x: &[usize]) -> Vec<Vec<usize>> {
    (1u32..1 << x.len())
        .map(|m| {
            x.iter()
                .enumerate()
                .filter(|(i, _)| m >> i & 1 == 1)
                .map(|(_, &v)| v)
                .collect()
        })
        .collect()
}

/// Vertex set represented by `v`: its bag, the first `leaf_count` leaves of
/// every recorded `S`, and every branch flagged as covered.
pub fn cover_set(g: &Graph, v: &AuxState) -> Result<Vec<usize>, SolveError> {
    let mut covered: BTreeSet<usize> = BTreeSet::new();
    for &x in &v.x {
        if x >= g.n() {
            return Err(malformed(format!("vertex {x} out of range")));
        }
        covered.insert(x);
    }
    let mut x = v.x.clone();
    x.sort_unstable();
    x.dedup();
    for s in nonempty_subsets(&x) {
        let t =
            v.r.get(&s)
                .ok_or_else(|| malformed(format!("no record for {s:?}")))?;
        let sc = s_components(g, &s).map_err(|e| malformed(e.to_string()))?;
        if t.flags.len() != sc.branches.len() || t.leaf_count > sc.leaves.len() {
            return Err(malformed(format!(
                "record for {s:?} does not fit its components"
            )));
        }
        if t.greens.iter().any(|&h| h >= sc.branches.len()) {
            return Err(malformed(format!("green id out of range for {s:?}")));
        }
        if sc.branches.len() >= BOTTLENECK_BRANCHES {
            let mut fl = t.greens.iter().map(|&h| t.flags[h]);
            let first = fl.next();
            if t.greens.len() + NON_GREEN_SLACK < sc.branches.len() || fl.any(|f| Some(f) != first)
            {
                return Err(malformed(format!("green group of {s:?} is invalid")));
            }
        } else if !t.greens.is_empty() {
            return Err(malformed(format!(
                "{s:?} is not a bottleneck but has greens"
            )));
        }
        covered.extend(sc.leaves[..t.leaf_count].iter().copied());
        for (h, b) in sc.branches.iter().enumerate() {
            if t.flags[h] {
                covered.extend(b.iter().copied());
            }
        }
    }
    if v.r.len() != (1usize << x.len()) - 1 {
        return Err(malformed("records for sets outside the bag"));
    }
    Ok(covered.into_iter().collect())
}

/// Canonical state with bag `x` representing `covered ∪ x`: branches are
/// flagged exactly when covered and leaf counts are maximal. `None` when no
/// state has this cover set.
pub fn represent(g: &Graph, x: &[usize], covered: &[usize]) -> Option<AuxState> {
    let mut xs = x.to_vec();
    xs.sort_unstable();
    xs.dedup();
    let mut cov: BTreeSet<usize> = covered.iter().copied().collect();
    cov.extend(xs.iter().copied());
    let cov_vec: Vec<usize> = cov.iter().copied().collect();
    if border(g, &cov_vec)
        .iter()
        .any(|v| xs.binary_search(v).is_err())
    {
        return None;
    }
    let mut r = BTreeMap::new();
    for s in nonempty_subsets(&xs) {
        let sc = s_components(g, &s).ok()?;
        let flags: Vec<bool> = sc
            .branches
            .iter()
            .map(|b| b.iter().all(|v| cov.contains(v)))
            .collect();
        let leaf_count = sc.leaves.iter().take_while(|v| cov.contains(v)).count();
        let mut greens = BTreeSet::new();
        let c = sc.branches.len();
        if c >= BOTTLENECK_BRANCHES {
            let untouched: BTreeSet<usize> = (0..c)
                .filter(|&h| sc.branches[h].iter().all(|v| !cov.contains(v)))
                .collect();
            let done: BTreeSet<usize> = (0..c).filter(|&h| flags[h]).collect();
            let need = c - NON_GREEN_SLACK;
            greens = if untouched.len() >= need {
                untouched
            } else if done.len() >= need {
                done
            } else {
                return None;
            };
        }
        r.insert(
            s,
            CoverTriple {
                greens,
                flags,
                leaf_count,
            },
        );
    }
    let v = AuxState { x: xs, r };
    (cover_set(g, &v).ok()? == cov_vec).then_some(v)
}

/// Step edges out of `v`: one canonical target per admissible next bag.
pub fn step_successors(g: &Graph, k: usize, v: &AuxState) -> Result<Vec<AuxState>, SolveError> {
    let covered = cover_set(g, v)?;
    let mg = mask_graph(g)?;
    let c = bits::from_slice(&covered);
    let d = mg.border(c);
    let room = (k + 1).saturating_sub(bits::count(d));
    let mut out = Vec::new();
    for n in bits::subsets_up_to(mg.all() & !c, room) {
        if let Some(t) = represent(g, &bits::to_vec(d | n), &bits::to_vec(c | n)) {
            out.push(t);
        }
    }
    Ok(out)
}

/// Jump edges out of `v`, using the green group recorded in `v` for each
/// bottleneck set inside the border.
pub fn jump_successors(
    g: &Graph,
    k: usize,
    v: &AuxState,
    solver: &Solver,
) -> Result<Vec<WeightedAuxEdge>, SolveError> {
    let covered = cover_set(g, v)?;
    let d = border(g, &covered);
    let mut out = Vec::new();
    if d.is_empty() || d.len() > k {
        return Ok(out);
    }
    let width = k - d.len();
    let cov: BTreeSet<usize> = covered.iter().copied().collect();
    for s in nonempty_subsets(&d) {
        let sc = s_components(g, &s).map_err(|e| malformed(e.to_string()))?;
        if sc.branches.len() < BOTTLENECK_BRANCHES {
            continue;
        }
        let t = &v.r[&s];
        if t.greens.iter().any(|&h| t.flags[h]) {
            continue;
        }
        let greens: Vec<usize> = t
            .greens
            .iter()
            .flat_map(|&h| sc.branches[h].iter().copied())
            .collect();
        if greens.iter().any(|x| cov.contains(x)) {
            continue;
        }
        for l2 in t.leaf_count..=sc.leaves.len() {
            let extra = &sc.leaves[t.leaf_count..l2];
            if extra.iter().any(|x| cov.contains(x)) {
                break;
            }
            let mut y: Vec<usize> = greens.iter().chain(extra).copied().collect();
            y.sort_unstable();
            if y.is_empty() {
                continue;
            }
            let (sub, map) = induced_subgraph(g, &y).expect("subset of g");
            let Some(dec) = solver.solve_general(&sub, width)? else {
                continue;
            };
            let witness = PathDecomposition::new(
                dec.bags()
                    .iter()
                    .map(|b| b.iter().map(|&i| map[i]).chain(d.iter().copied()).collect())
                    .collect(),
            );
            let mut after: Vec<usize> = covered.iter().chain(&y).copied().collect();
            after.sort_unstable();
            let Some(mut to) = represent(g, &d, &after) else {
                continue;
            };
            if let Some(tt) = to.r.get_mut(&s) {
                tt.greens = t.greens.clone();
            }
            out.push(WeightedAuxEdge {
                from: v.clone(),
                to: Some(to),
                weight: witness.len(),
                witness: Some(witness),
                kind: EdgeKind::Jump,
            });
        }
    }
    Ok(out)
}

fn mask_graph(g: &Graph) -> Result<MaskGraph, SolveError> {
    MaskGraph::new(g).ok_or(SolveError::TooLarge {
        n: g.n(),
        limit: bits::MAX_VERTICES,
    })
}

/// Minimum-length decomposition of a connected graph with width at most `k`.
pub fn solve_connected(g: &Graph, k: usize) -> Result<Option<PathDecomposition>, SolveError> {
    solve_connected_with(&Solver::new(), g, k)
}

pub fn solve_connected_with(
    solver: &Solver,
    g: &Graph,
    k: usize,
) -> Result<Option<PathDecomposition>, SolveError> {
    if k > 3 {
        return Err(SolveError::UnsupportedWidth(k));
    }
    if connected_components(g).len() > 1 {
        return Err(SolveError::Disconnected);
    }
    Engine::new(solver, g, k, 0, 0, k + 1, k + 1)?.run()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) struct St {
    pub(crate) c: Mask,
    pub(crate) i: u16,
    pub(crate) j: u16,
}

/// Edge of the search; `target` is `None` for a completing edge.
pub(crate) struct Edge {
    pub(crate) target: Option<St>,
    pub(crate) weight: usize,
    pub(crate) bags: Vec<Vec<usize>>,
}

struct Node {
    st: Option<St>,
    parent: usize,
    bags: Vec<Vec<usize>>,
    sigma: Option<Perm>,
}

struct SInfo {
    leaves: Vec<usize>,
    branches: Vec<Mask>,
    classes: Vec<Option<usize>>,
}

/// Search over states `(covered big vertices, K1s used, K2s used)` for one
/// connected graph plus `q1` isolated vertices and `q2` isolated edges.
///
/// Output ids: the connected graph keeps `0..nb`, isolated vertex `p` is
/// `nb + p`, isolated edge `p` is `nb + q1 + 2p` and `nb + q1 + 2p + 1`.
pub(crate) struct Engine<'a> {
    solver: &'a Solver,
    g: &'a Graph,
    mg: MaskGraph,
    sym: Rc<Symmetry>,
    k: usize,
    q1: usize,
    q2: usize,
    first_cap: usize,
    last_cap: usize,
    sinfo: RefCell<HashMap<Mask, Rc<SInfo>>>,
}

impl<'a> Engine<'a> {
    pub(crate) fn new(
        solver: &'a Solver,
        g: &'a Graph,
        k: usize,
        q1: usize,
        q2: usize,
        first_cap: usize,
        last_cap: usize,
    ) -> Result<Self, SolveError> {
        let mg = mask_graph(g)?;
        let sym = solver.symmetry(g, &mg);
        Ok(Engine {
            solver,
            g,
            mg,
            sym,
            k,
            q1,
            q2,
            first_cap: first_cap.min(k + 1),
            last_cap: last_cap.min(k + 1),
            sinfo: RefCell::new(HashMap::new()),
        })
    }

    fn k1(&self, p: usize) -> usize {
        self.g.n() + p
    }

    fn k2(&self, p: usize) -> [usize; 2] {
        let a = self.g.n() + self.q1 + 2 * p;
        [a, a + 1]
    }

    fn complete(&self, s: St) -> bool {
        s.c == self.mg.all() && s.i as usize == self.q1 && s.j as usize == self.q2
    }

    fn edge(&self, target: St, mut weight: usize, mut bags: Vec<Vec<usize>>) -> Edge {
        if !self.complete(target) {
            return Edge {
                target: Some(target),
                weight,
                bags,
            };
        }
        let last = bags.last().expect("edges carry bags");
        if last.len() > self.last_cap {
            let keep = *last.iter().min().unwrap();
            bags.push(vec![keep]);
            weight += 1;
        }
        Edge {
            target: None,
            weight,
            bags,
        }
    }

    fn smalls(&self, from: St, di: usize, dj: usize) -> impl Iterator<Item = usize> + '_ {
        let i = from.i as usize;
        let j = from.j as usize;
        (i..i + di)
            .map(|p| self.k1(p))
            .chain((j..j + dj).flat_map(|p| self.k2(p)))
    }

    fn edges(&self, st: St) -> Result<Vec<Edge>, SolveError> {
        let mut out = self.step_edges(st);
        out.extend(self.jump_edges(st)?);
        Ok(out)
    }

    /// Single-bag edges: the border plus new big vertices and small
    /// components.
    pub(crate) fn step_edges(&self, st: St) -> Vec<Edge> {
        let mut out = Vec::new();
        let source = st == St { c: 0, i: 0, j: 0 };
        let d = self.mg.border(st.c);
        let theta = if source { self.first_cap } else { self.k + 1 };
        let free = self.mg.all() & !st.c;
        let qi = self.q1 - st.i as usize;
        let qj = self.q2 - st.j as usize;

        if bits::count(d) <= theta {
            let room = theta - bits::count(d);
            let news = std::iter::once(0).chain(bits::subsets_up_to(free, room));
            for n in news {
                let rem = room - bits::count(n);
                for dj in 0..=qj.min(rem / 2) {
                    for di in 0..=qi.min(rem - 2 * dj) {
                        if n == 0 && di == 0 && dj == 0 {
                            continue;
                        }
                        let mut bag = bits::to_vec(d | n);
                        bag.extend(self.smalls(st, di, dj));
                        let target = St {
                            c: st.c | n,
                            i: st.i + di as u16,
                            j: st.j + dj as u16,
                        };
                        out.push(self.edge(target, 1, vec![bag]));
                    }
                }
            }
        }

        out
    }

    /// Edges covering green branches of a bottleneck set in one sub-solve.
    pub(crate) fn jump_edges(&self, st: St) -> Result<Vec<Edge>, SolveError> {
        let mut out = Vec::new();
        let d = self.mg.border(st.c);
        let dn = bits::count(d);
        if st.c != 0 && dn >= 1 && dn <= self.k && self.g.n() > 2 * BOTTLENECK_BRANCHES {
            self.jumps(st, d, &mut out)?;
        }
        Ok(out)
    }

    fn info(&self, s: Mask) -> Rc<SInfo> {
        if let Some(i) = self.sinfo.borrow().get(&s) {
            return i.clone();
        }
        let mut leaves = Vec::new();
        let mut branches = Vec::new();
        for h in self.mg.components_within(self.mg.all() & !s) {
            if self.mg.neighborhood(h) != s {
                continue;
            }
            if bits::count(h) == 1 {
                leaves.push(bits::lowest(h).unwrap());
            } else {
                branches.push(h);
            }
        }
        let classes = branches
            .iter()
            .map(|&h| self.sym.branch_class(s, h))
            .collect();
        let info = Rc::new(SInfo {
            leaves,
            branches,
            classes,
        });
        self.sinfo.borrow_mut().insert(s, info.clone());
        info
    }

    fn jumps(&self, st: St, d: Mask, out: &mut Vec<Edge>) -> Result<(), SolveError> {
        let width = self.k - bits::count(d);
        for s in bits::subsets_up_to(d, bits::count(d)) {
            let info = self.info(s);
            let c = info.branches.len();
            if c < BOTTLENECK_BRANCHES {
                continue;
            }
            // untouched branches, grouped by interchangeability
            let mut groups: Vec<(Option<usize>, Vec<Mask>)> = Vec::new();
            for (h, &b) in info.branches.iter().enumerate() {
                if b & st.c != 0 {
                    continue;
                }
                let class = info.classes[h];
                match groups
                    .iter_mut()
                    .find(|(cl, _)| class.is_some() && *cl == class)
                {
                    Some((_, members)) => members.push(b),
                    None => groups.push((class, vec![b])),
                }
            }
            let need = c - NON_GREEN_SLACK;
            let mut choices = Vec::new();
            choose_greens(&groups, 0, 0, 0, need, &mut choices);
            let open_leaves: Vec<usize> = info
                .leaves
                .iter()
                .copied()
                .filter(|&v| st.c >> v & 1 == 0)
                .collect();
            for greens in choices {
                for r in 0..=open_leaves.len() {
                    let y = greens | bits::from_slice(&open_leaves[..r]);
                    self.jump_targets(st, d, y, width, out)?;
                }
            }
        }
        Ok(())
    }

    fn jump_targets(
        &self,
        st: St,
        d: Mask,
        y: Mask,
        width: usize,
        out: &mut Vec<Edge>,
    ) -> Result<(), SolveError> {
        let (sub_big, map) = induced_subgraph(self.g, &bits::to_vec(y)).expect("subset");
        let ny = sub_big.n();
        for dj in 0..=self.q2 - st.j as usize {
            for di in 0..=self.q1 - st.i as usize {
                let pairs: Vec<(usize, usize)> = (0..dj).map(|p| (2 * p, 2 * p + 1)).collect();
                let k2s = Graph::from_edges(2 * dj, &pairs).expect("pairs");
                let sub = disjoint_union(&[&sub_big, &Graph::empty(di), &k2s]);
                let Some(dec) = self.solver.solve_general(&sub, width)? else {
                    continue;
                };
                let (i0, j0) = (st.i as usize, st.j as usize);
                let bags: Vec<Vec<usize>> = dec
                    .bags()
                    .iter()
                    .map(|b| {
                        let mut bag: Vec<usize> = b
                            .iter()
                            .map(|&x| {
                                if x < ny {
                                    map[x]
                                } else if x < ny + di {
                                    self.k1(i0 + x - ny)
                                } else {
                                    let p = (x - ny - di) / 2;
                                    self.k2(j0 + p)[(x - ny - di) % 2]
                                }
                            })
                            .collect();
                        bag.extend(bits::iter(d));
                        bag.sort_unstable();
                        bag
                    })
                    .collect();
                let target = St {
                    c: st.c | y,
                    i: (i0 + di) as u16,
                    j: (j0 + dj) as u16,
                };
                let w = bags.len();
                out.push(self.edge(target, w, bags));
            }
        }
        Ok(())
    }

    /// Minimum-length decomposition in output ids, or `None` when infeasible.
    pub(crate) fn run(&self) -> Result<Option<PathDecomposition>, SolveError> {
        let source = St { c: 0, i: 0, j: 0 };
        if self.complete(source) {
            return Ok(Some(PathDecomposition::default()));
        }
        let mut nodes = vec![Node {
            st: Some(source),
            parent: usize::MAX,
            bags: Vec::new(),
            sigma: None,
        }];
        let mut dist: HashMap<St, usize> = HashMap::from([(source, 0)]);
        let mut heap = BinaryHeap::from([Reverse((0usize, 0usize))]);
        let mut best_sink = usize::MAX;
        while let Some(Reverse((cost, id))) = heap.pop() {
            let Some(st) = nodes[id].st else {
                return Ok(Some(self.extract(&nodes, id)));
            };
            if dist.get(&st).is_some_and(|&d| d < cost) {
                continue;
            }
            for e in self.edges(st)? {
                let nc = cost + e.weight;
                match e.target {
                    None => {
                        if nc < best_sink {
                            best_sink = nc;
                            nodes.push(Node {
                                st: None,
                                parent: id,
                                bags: e.bags,
                                sigma: None,
                            });
                            heap.push(Reverse((nc, nodes.len() - 1)));
                        }
                    }
                    Some(raw) => {
                        let (c, sigma) = self.sym.canonicalize(raw.c, self.mg.n);
                        let t = St { c, ..raw };
                        if dist.get(&t).is_some_and(|&d| d <= nc) || nc >= best_sink {
                            continue;
                        }
                        dist.insert(t, nc);
                        nodes.push(Node {
                            st: Some(t),
                            parent: id,
                            bags: e.bags,
                            sigma,
                        });
                        heap.push(Reverse((nc, nodes.len() - 1)));
                    }
                }
            }
        }
        Ok(None)
    }

    fn extract(&self, nodes: &[Node], sink: usize) -> PathDecomposition {
        let mut chain = vec![sink];
        while nodes[*chain.last().unwrap()].parent != usize::MAX {
            chain.push(nodes[*chain.last().unwrap()].parent);
        }
        chain.reverse();
        let nb = self.g.n();
        let mut phi: Vec<usize> = (0..nb).collect();
        let mut bags = Vec::new();
        for &id in &chain[1..] {
            let node = &nodes[id];
            for b in &node.bags {
                bags.push(b.iter().map(|&v| if v < nb { phi[v] } else { v }).collect());
            }
            if let Some(sigma) = &node.sigma {
                let inv = symmetry::invert(sigma);
                phi = (0..nb).map(|x| phi[inv[x] as usize]).collect();
            }
        }
        PathDecomposition::new(bags)
    }
}

/// All unions taking a prefix of each group with at least `need` branches in
/// total.
fn choose_greens(
    groups: &[(Option<usize>, Vec<Mask>)],
    at: usize,
    acc: Mask,
    taken: usize,
    need: usize,
    out: &mut Vec<Mask>,
) {
    if at == groups.len() {
        if taken >= need.max(1) {
            out.push(acc);
        }
        return;
    }
    let members = &groups[at].1;
    let mut m = acc;
    for r in 0..=members.len() {
        if r > 0 {
            m |= members[r - 1];
        }
        choose_greens(groups, at + 1, m, taken + r, need, out);
    }
}
