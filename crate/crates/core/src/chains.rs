//! Facet chains: components of the facet dependency relation, their
//! adjacency tree and the boundary sequence of short chains.

use serde::Serialize;

use crate::autgroup::Automorphism;
use crate::error::{Error, Result};
use crate::grid::{GammaGrid, GridEdge};
use crate::ladder::{self, LadderDiagram};

fn facet_bit(f: usize) -> u128 {
    1u128 << f
}

fn meet_dim(grid: &GammaGrid, facets: u128) -> Option<usize> {
    ladder::face_of_facets(grid, facets).map(|l| grid.regions_of_valid(l.edges()))
}

/// Two facets are dependent when they meet in a face of dimension `d - 3`.
pub fn dependent(grid: &GammaGrid, f1: usize, f2: usize) -> bool {
    let d = grid.dimension();
    f1 != f2 && d >= 3 && meet_dim(grid, facet_bit(f1) | facet_bit(f2)) == Some(d - 3)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", content = "index")]
pub enum ChainClass {
    /// The chain at the origin cell.
    Corner,
    /// `C_{2k-1}`, at the corner of the `k`-th fixed triangle.
    TypeA(usize),
    /// `C_{2k}`, next to terminal `t_k`.
    TypeB(usize),
    D1,
    D2,
    /// Other singletons left of `t_1`.
    LeftSingle,
    /// Other singletons below `t_{m-1}`.
    LowSingle,
    /// Chains of length at least three.
    Long,
    Unclassified,
}

impl ChainClass {
    pub fn name(&self) -> String {
        match self {
            ChainClass::Corner => "C0".into(),
            ChainClass::TypeA(k) => format!("C{}", 2 * k - 1),
            ChainClass::TypeB(k) => format!("C{}", 2 * k),
            ChainClass::D1 => "D1".into(),
            ChainClass::D2 => "D2".into(),
            ChainClass::LeftSingle => "left".into(),
            ChainClass::LowSingle => "low".into(),
            ChainClass::Long => "long".into(),
            ChainClass::Unclassified => "unclassified".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FacetChain {
    /// Facet indices in chain order.
    pub facets: Vec<usize>,
    pub class: ChainClass,
}

impl FacetChain {
    pub fn len(&self) -> usize {
        self.facets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn mask(&self) -> u128 {
        self.facets.iter().fold(0, |acc, &f| acc | facet_bit(f))
    }
}

fn facet_key(grid: &GammaGrid, f: usize) -> (usize, usize) {
    grid.edge(grid.facet_edge(f)).midpoint2()
}

/// Connected components of the dependency graph. Each must be a path; it is
/// listed from the end whose edge lies furthest left, then lowest.
pub fn partition_chains(grid: &GammaGrid) -> Result<Vec<FacetChain>> {
    let nf = grid.facet_count();
    let mut adj = vec![Vec::new(); nf];
    for a in 0..nf {
        for b in a + 1..nf {
            if dependent(grid, a, b) {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
    }
    let mut seen = vec![false; nf];
    let mut chains = Vec::new();
    for start in 0..nf {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < comp.len() {
            for &b in &adj[comp[i]] {
                if !std::mem::replace(&mut seen[b], true) {
                    comp.push(b);
                }
            }
            i += 1;
        }
        let edges: usize = comp.iter().map(|&f| adj[f].len()).sum::<usize>() / 2;
        if edges + 1 != comp.len() || comp.iter().any(|&f| adj[f].len() > 2) {
            return Err(Error::Internal(format!("dependency component at facet {start} is not a path")));
        }
        let first = *comp
            .iter()
            .filter(|&&f| adj[f].len() <= 1)
            .min_by_key(|&&f| facet_key(grid, f))
            .unwrap();
        let mut order = vec![first];
        while order.len() < comp.len() {
            let last = *order.last().unwrap();
            let prev = order.len().checked_sub(2).map(|i| order[i]);
            let next = adj[last].iter().copied().find(|&b| Some(b) != prev).unwrap();
            order.push(next);
        }
        chains.push(FacetChain { facets: order, class: ChainClass::Unclassified });
    }
    classify(grid, &mut chains);
    chains.sort_by(|a, b| (a.class, facet_key(grid, a.facets[0])).cmp(&(b.class, facet_key(grid, b.facets[0]))));
    Ok(chains)
}

fn classify(grid: &GammaGrid, chains: &mut [FacetChain]) {
    let mv = grid.mv();
    let (n, m) = (grid.n(), mv.m());
    let s = |k: usize| mv.s(k);
    let holds = |c: &FacetChain, e: GridEdge| {
        grid.edge_index(&e).and_then(|i| grid.facet_of_edge(i)).is_some_and(|f| c.facets.contains(&f))
    };
    for c in chains.iter_mut() {
        if m < 2 {
            break;
        }
        if c.len() >= 3 {
            c.class = ChainClass::Long;
        }
        if c.len() >= 2 && (holds(c, GridEdge::horizontal(0, 1)) || holds(c, GridEdge::vertical(1, 0))) {
            c.class = ChainClass::Corner;
            continue;
        }
        if c.len() == 2 {
            let at = |x: usize, y: usize| holds(c, GridEdge::horizontal(x, y)) || holds(c, GridEdge::vertical(x, y));
            if let Some(k) = (2..m).find(|&k| at(s(k - 1), n - s(k))) {
                c.class = ChainClass::TypeA(k);
                continue;
            }
            if let Some(k) = mv.corner_indices().into_iter().find(|&k| at(s(k) - 1, n - s(k) - 1)) {
                c.class = ChainClass::TypeB(k);
            }
        }
    }
    // D1: singleton left of t_1 with the smallest y. D2 is its mirror image:
    // below t_{m-1}, smallest x.
    let left = |c: &FacetChain| 2 * s(1) > facet_key(grid, c.facets[0]).0;
    let right = |c: &FacetChain| facet_key(grid, c.facets[0]).1 < 2 * (n - s(m - 1));
    if m >= 2 {
        if let Some(i) = (0..chains.len())
            .filter(|&i| chains[i].len() == 1 && left(&chains[i]))
            .min_by_key(|&i| facet_key(grid, chains[i].facets[0]).1)
        {
            chains[i].class = ChainClass::D1;
        }
        if let Some(i) = (0..chains.len())
            .filter(|&i| chains[i].len() == 1 && right(&chains[i]) && chains[i].class == ChainClass::Unclassified)
            .min_by_key(|&i| facet_key(grid, chains[i].facets[0]).0)
        {
            chains[i].class = ChainClass::D2;
        }
        for c in chains.iter_mut().filter(|c| c.len() == 1 && c.class == ChainClass::Unclassified) {
            if left(c) {
                c.class = ChainClass::LeftSingle;
            } else if right(c) {
                c.class = ChainClass::LowSingle;
            }
        }
    }
}

/// Number of distinct faces that are both a meet of two facets of `c1` and
/// a meet of two facets of `c2`.
pub fn chains_adjacent(grid: &GammaGrid, c1: &FacetChain, c2: &FacetChain) -> usize {
    let meets = |c: &FacetChain| {
        let mut out: Vec<LadderDiagram> = Vec::new();
        for (i, &a) in c.facets.iter().enumerate() {
            for &b in &c.facets[i + 1..] {
                if let Some(f) = ladder::face_of_facets(grid, facet_bit(a) | facet_bit(b)) {
                    out.push(f);
                }
            }
        }
        out.sort();
        out.dedup();
        out
    };
    let (a, b) = (meets(c1), meets(c2));
    a.iter().filter(|f| b.binary_search(f).is_ok()).count()
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainGraph {
    /// Indices into the chain list of chains with at least two facets.
    pub nodes: Vec<usize>,
    /// Pairs of node positions with their adjacency point counts.
    pub edges: Vec<(usize, usize, usize)>,
    pub root: Option<usize>,
}

impl ChainGraph {
    pub fn degree(&self, node: usize) -> usize {
        self.edges.iter().filter(|&&(a, b, _)| a == node || b == node).count()
    }

    pub fn is_tree(&self) -> bool {
        let k = self.nodes.len();
        if k == 0 {
            return true;
        }
        if self.edges.len() + 1 != k {
            return false;
        }
        let mut seen = vec![false; k];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &(a, b, _) in &self.edges {
                for (x, y) in [(a, b), (b, a)] {
                    if x == u && !std::mem::replace(&mut seen[y], true) {
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Leaves (nodes of degree at most one) are exactly the two-facet chains.
    pub fn leaves_are_length_two(&self, chains: &[FacetChain]) -> bool {
        (0..self.nodes.len()).all(|i| (self.degree(i) <= 1) == (chains[self.nodes[i]].len() == 2))
    }
}

/// Adjacency graph on chains with at least two facets, without checking the
/// tree property.
pub fn chain_graph(grid: &GammaGrid, chains: &[FacetChain]) -> ChainGraph {
    let nodes: Vec<usize> = (0..chains.len()).filter(|&i| chains[i].len() >= 2).collect();
    let mut edges = Vec::new();
    for a in 0..nodes.len() {
        for b in a + 1..nodes.len() {
            let k = chains_adjacent(grid, &chains[nodes[a]], &chains[nodes[b]]);
            if k > 0 {
                edges.push((a, b, k));
            }
        }
    }
    let root = nodes.iter().position(|&i| chains[i].class == ChainClass::Corner);
    ChainGraph { nodes, edges, root }
}

/// [`chain_graph`], rejecting graphs that are not trees with the two-facet
/// chains as leaves.
pub fn build_chain_graph(grid: &GammaGrid, chains: &[FacetChain]) -> Result<ChainGraph> {
    if grid.mv().m() < 2 {
        return Err(Error::Precondition("chain graph needs at least two distinct parts".into()));
    }
    let g = chain_graph(grid, chains);
    if !g.is_tree() {
        return Err(Error::Internal("chain adjacency graph is not a tree".into()));
    }
    if !g.leaves_are_length_two(chains) {
        return Err(Error::Internal("chain tree leaves differ from the two-facet chains".into()));
    }
    Ok(g)
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundarySequence {
    /// Chain indices in sequence order.
    pub chains: Vec<usize>,
    pub names: Vec<String>,
    /// Every consecutive pair has no common vertex.
    pub consecutive_incompatible: bool,
    /// Smallest number of extra facets cutting `D1` and a facet of `C3`
    /// down to the empty face.
    pub low_distance: Option<usize>,
    /// The same between `D2` and `C_{2m-3}`.
    pub high_distance: Option<usize>,
}

/// No vertex lies on every facet of both chains.
pub fn incompatible(grid: &GammaGrid, a: &FacetChain, b: &FacetChain) -> bool {
    ladder::face_of_facets(grid, a.mask() | b.mask()).is_none()
}

pub fn boundary_sequence(grid: &GammaGrid, chains: &[FacetChain]) -> Result<BoundarySequence> {
    let m = grid.mv().m();
    if m < 3 {
        return Err(Error::Precondition("boundary sequence needs at least three distinct parts".into()));
    }
    let find = |class: ChainClass| chains.iter().position(|c| c.class == class);
    let mut order = vec![ChainClass::D1];
    for j in 2..=2 * m - 2 {
        order.push(if j % 2 == 0 { ChainClass::TypeB(j / 2) } else { ChainClass::TypeA(j.div_ceil(2)) });
    }
    order.push(ChainClass::D2);
    let seq: Vec<usize> = order.iter().filter_map(|&c| find(c)).collect();
    let consecutive_incompatible = seq.windows(2).all(|w| incompatible(grid, &chains[w[0]], &chains[w[1]]));
    let sequence_mask = seq.iter().fold(0u128, |acc, &i| acc | chains[i].mask());
    let distance = |d: ChainClass, a: ChainClass| -> Option<usize> {
        let (d, a) = (&chains[find(d)?], &chains[find(a)?]);
        let others: Vec<usize> = (0..grid.facet_count()).filter(|&f| sequence_mask & facet_bit(f) == 0).collect();
        a.facets.iter().filter_map(|&fa| cut_distance(grid, d.mask() | facet_bit(fa), &others)).min()
    };
    Ok(BoundarySequence {
        names: seq.iter().map(|&i| chains[i].class.name()).collect(),
        chains: seq,
        consecutive_incompatible,
        low_distance: distance(ChainClass::D1, ChainClass::TypeA(2)),
        high_distance: distance(ChainClass::D2, ChainClass::TypeA(m - 1)),
    })
}

/// Fewest facets from `pool` whose addition to `base` leaves no common vertex.
fn cut_distance(grid: &GammaGrid, base: u128, pool: &[usize]) -> Option<usize> {
    fn search(grid: &GammaGrid, mask: u128, pool: &[usize], left: usize) -> bool {
        if ladder::face_of_facets(grid, mask).is_none() {
            return true;
        }
        if left == 0 {
            return false;
        }
        (0..pool.len()).any(|i| search(grid, mask | facet_bit(pool[i]), &pool[i + 1..], left - 1))
    }
    (0..=pool.len()).find(|&k| search(grid, base, pool, k))
}

/// How an automorphism moves the boundary sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SequenceAction {
    Fixed,
    Reversed,
    Scrambled,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrientationReport {
    /// Chains go to chains of the same length.
    pub chains_to_chains: bool,
    /// Adjacency point counts between long chains are preserved.
    pub adjacency_preserved: bool,
    /// Each chain is mapped in order or in reverse, never mixed.
    pub whole_orientation: bool,
    /// When every long chain is fixed, all chains longer than two share one
    /// orientation. Vacuous otherwise.
    pub common_orientation: bool,
    pub sequence: Option<SequenceAction>,
}

impl OrientationReport {
    pub fn all_pass(&self) -> bool {
        self.chains_to_chains && self.adjacency_preserved && self.whole_orientation && self.common_orientation
    }
}

pub fn check_orientation_lemmas(
    grid: &GammaGrid,
    chains: &[FacetChain],
    graph: &ChainGraph,
    seq: Option<&BoundarySequence>,
    aut: &Automorphism,
) -> OrientationReport {
    let owner = |f: usize| chains.iter().position(|c| c.facets.contains(&f)).unwrap();
    let image: Vec<usize> = chains.iter().map(|c| owner(aut.perm[c.facets[0]])).collect();
    let chains_to_chains = chains.iter().zip(&image).all(|(c, &j)| {
        let mut mapped: Vec<usize> = c.facets.iter().map(|&f| aut.perm[f]).collect();
        let mut target = chains[j].facets.clone();
        mapped.sort_unstable();
        target.sort_unstable();
        mapped == target
    });
    // orientation: +1 in order, -1 reversed, 0 mixed; palindromic cases count as both
    let orientation = |i: usize| -> (bool, bool) {
        let (c, t) = (&chains[i].facets, &chains[image[i]].facets);
        let fwd = c.iter().zip(t).all(|(&f, &g)| aut.perm[f] == g);
        let rev = c.iter().zip(t.iter().rev()).all(|(&f, &g)| aut.perm[f] == g);
        (fwd, rev)
    };
    let whole_orientation = chains_to_chains && (0..chains.len()).all(|i| {
        let (f, r) = orientation(i);
        f || r
    });
    let adjacency_preserved = chains_to_chains
        && graph.edges.iter().all(|&(a, b, k)| {
            let (ia, ib) = (graph.nodes[a], graph.nodes[b]);
            chains_adjacent(grid, &chains[image[ia]], &chains[image[ib]]) == k
        })
        && {
            let count: usize = graph.nodes.len();
            let mut total = 0;
            for a in 0..count {
                for b in a + 1..count {
                    if chains_adjacent(grid, &chains[image[graph.nodes[a]]], &chains[image[graph.nodes[b]]]) > 0 {
                        total += 1;
                    }
                }
            }
            total == graph.edges.len()
        };
    let fixes_nodes = graph.nodes.iter().all(|&i| image[i] == i);
    let common_orientation = !(chains_to_chains && fixes_nodes) || {
        let long: Vec<(bool, bool)> = graph.nodes.iter().filter(|&&i| chains[i].len() > 2).map(|&i| orientation(i)).collect();
        long.iter().all(|&(f, _)| f) || long.iter().all(|&(_, r)| r)
    };
    // singletons on one side may be permuted among themselves, so D1 and D2
    // stand for their whole side
    let slot = |i: usize| match chains[i].class {
        ChainClass::D1 | ChainClass::LeftSingle => ChainClass::D1,
        ChainClass::D2 | ChainClass::LowSingle => ChainClass::D2,
        c => c,
    };
    let sequence = seq.filter(|_| chains_to_chains).map(|s| {
        let mapped: Vec<ChainClass> = s.chains.iter().map(|&i| slot(image[i])).collect();
        let own: Vec<ChainClass> = s.chains.iter().map(|&i| slot(i)).collect();
        if mapped == own {
            SequenceAction::Fixed
        } else if mapped.iter().eq(own.iter().rev()) {
            SequenceAction::Reversed
        } else {
            SequenceAction::Scrambled
        }
    });
    OrientationReport { chains_to_chains, adjacency_preserved, whole_orientation, common_orientation, sequence }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::MultiplicityVector;

    fn grid(v: &[usize]) -> GammaGrid {
        GammaGrid::build(&MultiplicityVector::new(v.to_vec()).unwrap()).unwrap()
    }

    fn names(chains: &[FacetChain]) -> Vec<String> {
        chains.iter().map(|c| format!("{}:{}", c.class.name(), c.len())).collect()
    }

    #[test]
    fn segment_has_two_singletons() {
        let g = grid(&[1, 1]);
        let chains = partition_chains(&g).unwrap();
        assert_eq!(chains.len(), 2);
        assert!(chains.iter().all(|c| c.len() == 1));
        assert!(!dependent(&g, 0, 1));
        assert!(chain_graph(&g, &chains).nodes.is_empty());
    }

    #[test]
    fn gt123_chains() {
        let g = grid(&[1, 1, 1]);
        let chains = partition_chains(&g).unwrap();
        assert_eq!(names(&chains), ["C0:2", "C3:2", "D1:1", "D2:1"]);
        let seq = boundary_sequence(&g, &chains).unwrap();
        assert_eq!(seq.names, ["D1", "C3", "D2"]);
        assert!(seq.consecutive_incompatible);
        assert_eq!(seq.low_distance, Some(0));
    }

    #[test]
    fn square_has_type_b() {
        let g = grid(&[2, 2]);
        let chains = partition_chains(&g).unwrap();
        assert!(chains.iter().any(|c| c.class == ChainClass::TypeB(1)));
        assert!(chains.iter().all(|c| c.class != ChainClass::Unclassified), "{:?}", names(&chains));
        let dep = (0..g.facet_count()).flat_map(|a| (0..g.facet_count()).map(move |b| (a, b)));
        let (yes, no): (Vec<_>, Vec<_>) = dep.filter(|(a, b)| a < b).partition(|&(a, b)| dependent(&g, a, b));
        assert!(!yes.is_empty() && !no.is_empty());
    }

    #[test]
    fn type_a_count() {
        let g = grid(&[2, 1, 2, 3, 1]);
        let chains = partition_chains(&g).unwrap();
        let a = chains.iter().filter(|c| matches!(c.class, ChainClass::TypeA(_))).count();
        assert_eq!(a, 3);
        let total: usize = chains.iter().map(FacetChain::len).sum();
        assert_eq!(total, g.facet_count());
        build_chain_graph(&g, &chains).unwrap();
    }

    #[test]
    fn two_part_graph_is_a_path() {
        let g = grid(&[5, 4]);
        let chains = partition_chains(&g).unwrap();
        let graph = build_chain_graph(&g, &chains).unwrap();
        assert!((0..graph.nodes.len()).all(|i| graph.degree(i) <= 2));
    }

    #[test]
    fn boundary_sequence_of_even_parts() {
        let g = grid(&[2, 2, 2]);
        let chains = partition_chains(&g).unwrap();
        let seq = boundary_sequence(&g, &chains).unwrap();
        assert_eq!(seq.names, ["D1", "C2", "C3", "C4", "D2"]);
        assert_eq!((seq.low_distance, seq.high_distance), (Some(2), Some(2)));
        assert!(boundary_sequence(&grid(&[2, 2]), &chains).is_err());
    }

    #[test]
    fn four_singletons_sequence_is_incompatible() {
        let g = grid(&[1, 1, 1, 1]);
        let seq = boundary_sequence(&g, &partition_chains(&g).unwrap()).unwrap();
        assert_eq!(seq.names, ["D1", "C3", "C5", "D2"]);
        assert!(seq.consecutive_incompatible);
    }

    #[test]
    fn low_distance_example() {
        let g = grid(&[2, 1, 2]);
        let seq = boundary_sequence(&g, &partition_chains(&g).unwrap()).unwrap();
        assert_eq!(seq.low_distance, Some(1));
    }
}

#[cfg(test)]
mod orientation_tests {
    use super::*;
    use crate::autgroup::{generators, Incidence};
    use crate::partition::MultiplicityVector;

    fn reports(v: &[usize]) -> Vec<(String, OrientationReport)> {
        let g = GammaGrid::build(&MultiplicityVector::new(v.to_vec()).unwrap()).unwrap();
        let inc = Incidence::build(&g, 100_000).unwrap();
        let chains = partition_chains(&g).unwrap();
        let graph = build_chain_graph(&g, &chains).unwrap();
        let seq = boundary_sequence(&g, &chains).ok();
        generators(&g, &inc)
            .unwrap()
            .iter()
            .map(|a| (a.label.clone(), check_orientation_lemmas(&g, &chains, &graph, seq.as_ref(), a)))
            .collect()
    }

    #[test]
    fn flip_reverses_symmetric_sequence() {
        for (label, r) in reports(&[1, 1, 1]) {
            assert!(r.all_pass(), "{label}");
            let want = if label == "rho" { SequenceAction::Reversed } else { SequenceAction::Fixed };
            assert_eq!(r.sequence, Some(want), "{label}");
        }
    }

    #[test]
    fn generators_keep_sequence_order() {
        for v in [&[2, 1, 3][..], &[1, 2, 2, 1], &[2, 2]] {
            for (label, r) in reports(v) {
                assert!(r.all_pass(), "{v:?} {label}");
                assert_ne!(r.sequence, Some(SequenceAction::Scrambled), "{v:?} {label}");
            }
        }
    }
}
