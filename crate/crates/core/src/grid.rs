//! The staircase grid of a multiplicity vector: points and unit edges lying on
//! some North-East path from the origin to a terminal vertex.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::MultiplicityVector;

/// Largest partition length for which grids are built. Edge sets are stored
/// in a 128-bit mask and the all-distinct staircase of length 10 has 110 edges.
pub const MAX_N: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GridPoint {
    /// East coordinate.
    pub x: usize,
    /// North coordinate.
    pub y: usize,
}

impl GridPoint {
    pub const fn new(x: usize, y: usize) -> Self {
        Self { x, y }
    }

    pub fn transpose(self) -> Self {
        Self { x: self.y, y: self.x }
    }
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Orientation {
    Horizontal,
    Vertical,
}

/// A unit edge stored by its lower-left endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GridEdge {
    pub from: GridPoint,
    pub orientation: Orientation,
}

impl GridEdge {
    pub const fn horizontal(x: usize, y: usize) -> Self {
        Self { from: GridPoint::new(x, y), orientation: Orientation::Horizontal }
    }

    pub const fn vertical(x: usize, y: usize) -> Self {
        Self { from: GridPoint::new(x, y), orientation: Orientation::Vertical }
    }

    pub fn to(&self) -> GridPoint {
        match self.orientation {
            Orientation::Horizontal => GridPoint::new(self.from.x + 1, self.from.y),
            Orientation::Vertical => GridPoint::new(self.from.x, self.from.y + 1),
        }
    }

    pub fn transpose(&self) -> Self {
        match self.orientation {
            Orientation::Horizontal => Self::vertical(self.from.y, self.from.x),
            Orientation::Vertical => Self::horizontal(self.from.y, self.from.x),
        }
    }

    pub fn on_axis(&self) -> bool {
        match self.orientation {
            Orientation::Horizontal => self.from.y == 0,
            Orientation::Vertical => self.from.x == 0,
        }
    }

    /// Twice the midpoint, so coordinates stay integral.
    pub fn midpoint2(&self) -> (usize, usize) {
        let t = self.to();
        (self.from.x + t.x, self.from.y + t.y)
    }
}

impl fmt::Display for GridEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.from, self.to())
    }
}

/// A set of grid edges, indexed by the grid's canonical edge order.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSet(pub u128);

impl EdgeSet {
    pub const EMPTY: EdgeSet = EdgeSet(0);

    pub fn single(i: usize) -> Self {
        EdgeSet(1u128 << i)
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u128 << i;
    }

    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1u128 << i);
    }

    pub fn without(self, i: usize) -> Self {
        EdgeSet(self.0 & !(1u128 << i))
    }

    pub fn with(self, i: usize) -> Self {
        EdgeSet(self.0 | 1u128 << i)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        EdgeSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        EdgeSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        EdgeSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }
}

impl FromIterator<usize> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = EdgeSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

/// Edge set keyed by geometry rather than canonical index; see
/// [`GammaGrid::to_planar`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Planar {
    pub h: u128,
    pub v: u128,
}

/// Result of splitting the grid's edges by single-deletion removability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeClassification {
    pub removable: Vec<usize>,
    pub forced: Vec<usize>,
}

/// The grid for one multiplicity vector.
#[derive(Debug, Clone)]
pub struct GammaGrid {
    mv: MultiplicityVector,
    n: usize,
    /// Points sorted by `(x + y, x)`, a topological order for NE steps.
    points: Vec<GridPoint>,
    point_index: Vec<Option<usize>>,
    /// Edges sorted by `(x, y, orientation)` of the lower-left endpoint.
    edges: Vec<GridEdge>,
    edge_index: std::collections::HashMap<GridEdge, usize>,
    tail: Vec<usize>,
    head: Vec<usize>,
    in_edges: Vec<Vec<usize>>,
    out_edges: Vec<Vec<usize>>,
    endpoint_mask: Vec<u128>,
    /// Geometric encoding: point `(x, y)` is bit `x * (n + 1) + y`; an edge
    /// is stored at the bit of its lower-left endpoint.
    planar_bit: Vec<(Orientation, u32)>,
    planar_h_edge: Vec<usize>,
    planar_v_edge: Vec<usize>,
    planar_terminals: u128,
    /// Edge indices sorted by the tail's position in `points`.
    edges_by_tail: Vec<usize>,
    terminals: Vec<GridPoint>,
    terminal_mask: u128,
    virtual_terminals: Vec<GridPoint>,
    full: EdgeSet,
    axis: EdgeSet,
    removable: Vec<usize>,
    facet_of_edge: Vec<Option<usize>>,
    removable_mask: EdgeSet,
}

impl GammaGrid {
    /// Builds the grid, its terminals and its removable (facet) edges.
    pub fn build(mv: &MultiplicityVector) -> Result<Self> {
        let n = mv.n();
        if n > MAX_N {
            return Err(Error::TooLarge { n, max: MAX_N });
        }
        let s = mv.prefix_sums();
        let terminals: Vec<GridPoint> = s.iter().map(|&sj| GridPoint::new(sj, n - sj)).collect();
        // (x, y) lies on an origin -> t_j path iff x <= s_j and y <= n - s_j
        let in_box = |x: usize, y: usize| s.iter().any(|&sj| x <= sj && y + sj <= n);

        let mut points = Vec::new();
        for x in 0..=n {
            for y in 0..=n {
                if in_box(x, y) {
                    points.push(GridPoint::new(x, y));
                }
            }
        }
        points.sort_by_key(|p| (p.x + p.y, p.x));
        let mut point_index = vec![None; (n + 1) * (n + 1)];
        for (i, p) in points.iter().enumerate() {
            point_index[p.x * (n + 1) + p.y] = Some(i);
        }

        let mut edges = Vec::new();
        for p in &points {
            if in_box(p.x + 1, p.y) {
                edges.push(GridEdge::horizontal(p.x, p.y));
            }
            if in_box(p.x, p.y + 1) {
                edges.push(GridEdge::vertical(p.x, p.y));
            }
        }
        edges.sort();
        let idx = |p: GridPoint| point_index[p.x * (n + 1) + p.y].expect("endpoint in grid");
        let tail: Vec<usize> = edges.iter().map(|e| idx(e.from)).collect();
        let head: Vec<usize> = edges.iter().map(|e| idx(e.to())).collect();
        let mut in_edges = vec![Vec::new(); points.len()];
        let mut out_edges = vec![Vec::new(); points.len()];
        for e in 0..edges.len() {
            in_edges[head[e]].push(e);
            out_edges[tail[e]].push(e);
        }
        let mut edges_by_tail: Vec<usize> = (0..edges.len()).collect();
        edges_by_tail.sort_by_key(|&e| (tail[e], e));
        let edge_index = edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();

        let terminal_mask = terminals.iter().fold(0u128, |acc, &t| acc | 1u128 << idx(t));
        let mut virtual_terminals = Vec::new();
        if n >= 2 && mv.a(1) > 1 {
            virtual_terminals.push(GridPoint::new(1, n - 1));
        }
        if n >= 2 && mv.a(mv.m()) > 1 {
            virtual_terminals.push(GridPoint::new(n - 1, 1));
        }
        let full = EdgeSet((0..edges.len()).fold(0u128, |acc, i| acc | 1u128 << i));
        let axis = edges.iter().enumerate().filter(|(_, e)| e.on_axis()).map(|(i, _)| i).collect();

        let stride = n + 1;
        let mut planar_h_edge = vec![usize::MAX; stride * stride];
        let mut planar_v_edge = vec![usize::MAX; stride * stride];
        let planar_bit: Vec<(Orientation, u32)> = edges
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let b = e.from.x * stride + e.from.y;
                match e.orientation {
                    Orientation::Horizontal => planar_h_edge[b] = i,
                    Orientation::Vertical => planar_v_edge[b] = i,
                }
                (e.orientation, b as u32)
            })
            .collect();
        let planar_terminals = terminals.iter().fold(0u128, |acc, t| acc | 1u128 << (t.x * stride + t.y));
        let endpoint_mask = (0..edges.len()).map(|e| 1u128 << tail[e] | 1u128 << head[e]).collect();
        let mut grid = GammaGrid {
            mv: mv.clone(),
            n,
            points,
            point_index,
            edges,
            edge_index,
            tail,
            head,
            in_edges,
            out_edges,
            endpoint_mask,
            planar_bit,
            planar_h_edge,
            planar_v_edge,
            planar_terminals,
            edges_by_tail,
            terminals,
            terminal_mask,
            virtual_terminals,
            full,
            axis,
            removable: Vec::new(),
            facet_of_edge: Vec::new(),
            removable_mask: EdgeSet::EMPTY,
        };
        let classes = grid.classify_edges();
        grid.facet_of_edge = vec![None; grid.edges.len()];
        for (f, &e) in classes.removable.iter().enumerate() {
            grid.facet_of_edge[e] = Some(f);
        }
        grid.removable_mask = classes.removable.iter().copied().collect();
        grid.removable = classes.removable;
        Ok(grid)
    }

    /// Splits edges into those whose single deletion from the full grid
    /// leaves a valid ladder diagram, and the rest.
    pub fn classify_edges(&self) -> EdgeClassification {
        let (removable, forced) =
            (0..self.edges.len()).partition(|&e| self.is_valid(self.full.without(e)));
        EdgeClassification { removable, forced }
    }

    pub fn mv(&self) -> &MultiplicityVector {
        &self.mv
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dimension(&self) -> usize {
        self.mv.dimension()
    }

    pub fn points(&self) -> &[GridPoint] {
        &self.points
    }

    pub fn edges(&self) -> &[GridEdge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> GridEdge {
        self.edges[i]
    }

    pub fn edge_index(&self, e: &GridEdge) -> Option<usize> {
        self.edge_index.get(e).copied()
    }

    pub fn h(&self, x: usize, y: usize) -> Option<usize> {
        self.edge_index(&GridEdge::horizontal(x, y))
    }

    pub fn v(&self, x: usize, y: usize) -> Option<usize> {
        self.edge_index(&GridEdge::vertical(x, y))
    }

    pub fn point_index(&self, p: GridPoint) -> Option<usize> {
        if p.x > self.n || p.y > self.n {
            return None;
        }
        self.point_index[p.x * (self.n + 1) + p.y]
    }

    pub fn contains_point(&self, p: GridPoint) -> bool {
        self.point_index(p).is_some()
    }

    pub fn tail(&self, e: usize) -> usize {
        self.tail[e]
    }

    pub fn head(&self, e: usize) -> usize {
        self.head[e]
    }

    pub fn in_edges(&self, p: usize) -> &[usize] {
        &self.in_edges[p]
    }

    pub fn out_edges(&self, p: usize) -> &[usize] {
        &self.out_edges[p]
    }

    pub fn point(&self, p: usize) -> GridPoint {
        self.points[p]
    }

    pub fn terminal_mask(&self) -> u128 {
        self.terminal_mask
    }

    pub fn terminals(&self) -> &[GridPoint] {
        &self.terminals
    }

    pub fn terminal(&self, j: usize) -> GridPoint {
        self.terminals[j]
    }

    pub fn virtual_terminals(&self) -> &[GridPoint] {
        &self.virtual_terminals
    }

    pub fn full(&self) -> EdgeSet {
        self.full
    }

    pub fn axis(&self) -> EdgeSet {
        self.axis
    }

    /// Removable edges in canonical order; position in this list is the facet index.
    pub fn removable_edges(&self) -> &[usize] {
        &self.removable
    }

    pub fn removable_mask(&self) -> EdgeSet {
        self.removable_mask
    }

    pub fn facet_count(&self) -> usize {
        self.removable.len()
    }

    pub fn facet_edge(&self, f: usize) -> usize {
        self.removable[f]
    }

    pub fn facet_of_edge(&self, e: usize) -> Option<usize> {
        self.facet_of_edge[e]
    }

    /// Whether the unit cell with lower-left corner `(c, r)` lies inside the grid.
    pub fn has_cell(&self, c: usize, r: usize) -> bool {
        self.mv.prefix_sums().iter().any(|&sj| c < sj && r + sj < self.n)
    }

    /// Points reachable from the origin and co-reachable to a terminal, as
    /// bitmasks over point indices.
    fn reach(&self, set: EdgeSet) -> (u128, u128) {
        let mut fwd = 1u128; // the origin is point 0
        for &e in &self.edges_by_tail {
            if set.contains(e) && fwd >> self.tail[e] & 1 == 1 {
                fwd |= 1u128 << self.head[e];
            }
        }
        let mut back = self.terminal_mask;
        for &e in self.edges_by_tail.iter().rev() {
            if set.contains(e) && back >> self.head[e] & 1 == 1 {
                back |= 1u128 << self.tail[e];
            }
        }
        (fwd, back)
    }

    /// Largest edge subset of `set` in which every edge lies on an origin to
    /// terminal NE path. Does not check that every terminal is reached.
    pub fn prune(&self, set: EdgeSet) -> EdgeSet {
        let (fwd, back) = self.reach(set);
        self.keep_reached(set, fwd, back)
    }

    fn keep_reached(&self, set: EdgeSet, fwd: u128, back: u128) -> EdgeSet {
        set.iter()
            .filter(|&e| fwd >> self.tail[e] & 1 == 1 && back >> self.head[e] & 1 == 1)
            .collect()
    }

    /// Both ladder conditions.
    pub fn is_valid(&self, set: EdgeSet) -> bool {
        if !set.is_subset(self.full) {
            return false;
        }
        let (fwd, back) = self.reach(set);
        if fwd & self.terminal_mask != self.terminal_mask {
            return false;
        }
        set.iter().all(|e| fwd >> self.tail[e] & 1 == 1 && back >> self.head[e] & 1 == 1)
    }

    /// The maximal valid ladder diagram inside `set`, or `None` when some
    /// terminal is cut off.
    pub fn largest_valid_subset(&self, set: EdgeSet) -> Option<EdgeSet> {
        let set = set.intersection(self.full);
        let (fwd, back) = self.reach(set);
        if fwd & self.terminal_mask != self.terminal_mask {
            return None;
        }
        Some(self.keep_reached(set, fwd, back))
    }

    pub fn point_mask(&self, set: EdgeSet) -> u128 {
        set.iter().fold(0u128, |acc, e| acc | self.endpoint_mask[e])
    }

    /// Bounded faces of the planar drawing of `set`: `E - V + C` summed over
    /// connected components.
    pub fn bounded_regions(&self, set: EdgeSet) -> usize {
        let v = self.point_mask(set).count_ones() as usize;
        if self.is_valid(set) {
            // a ladder diagram is connected through the origin
            return set.len() + 1 - v;
        }
        let mut parent: Vec<usize> = (0..self.points.len()).collect();
        fn find(parent: &mut [usize], mut a: usize) -> usize {
            while parent[a] != a {
                parent[a] = parent[parent[a]];
                a = parent[a];
            }
            a
        }
        let mut components = v;
        for e in set.iter() {
            let (a, b) = (find(&mut parent, self.tail[e]), find(&mut parent, self.head[e]));
            if a != b {
                parent[a] = b;
                components -= 1;
            }
        }
        (set.len() + components).saturating_sub(v)
    }

    pub fn to_planar(&self, set: EdgeSet) -> Planar {
        let mut p = Planar::default();
        for e in set.iter() {
            match self.planar_bit[e] {
                (Orientation::Horizontal, b) => p.h |= 1u128 << b,
                (Orientation::Vertical, b) => p.v |= 1u128 << b,
            }
        }
        p
    }

    pub fn from_planar(&self, p: Planar) -> EdgeSet {
        let mut s = EdgeSet::EMPTY;
        for (mut bits, table) in [(p.h, &self.planar_h_edge), (p.v, &self.planar_v_edge)] {
            while bits != 0 {
                s.insert(table[bits.trailing_zeros() as usize]);
                bits &= bits - 1;
            }
        }
        s
    }

    fn planar_reach(&self, p: Planar) -> (u128, u128) {
        let stride = self.n + 1;
        let mut fwd = 1u128;
        loop {
            let next = fwd | (fwd & p.h) << stride | (fwd & p.v) << 1;
            if next == fwd {
                break;
            }
            fwd = next;
        }
        let mut back = self.planar_terminals;
        loop {
            let next = back | (back >> stride) & p.h | (back >> 1) & p.v;
            if next == back {
                break;
            }
            back = next;
        }
        (fwd, back)
    }

    /// [`GammaGrid::largest_valid_subset`] on the geometric encoding. The
    /// input must be a subset of the full grid.
    pub fn planar_largest_valid(&self, p: Planar) -> Option<Planar> {
        let stride = self.n + 1;
        let (fwd, back) = self.planar_reach(p);
        if fwd & self.planar_terminals != self.planar_terminals {
            return None;
        }
        Some(Planar { h: p.h & fwd & back >> stride, v: p.v & fwd & back >> 1 })
    }

    /// Bounded regions of a valid diagram in the geometric encoding.
    pub fn planar_regions(&self, p: Planar) -> usize {
        let points = 1u128 | p.h << (self.n + 1) | p.v << 1;
        (p.h.count_ones() + p.v.count_ones() + 1 - points.count_ones()) as usize
    }

    /// Bounded regions of a set already known to be a ladder diagram.
    pub fn regions_of_valid(&self, set: EdgeSet) -> usize {
        set.len() + 1 - self.point_mask(set).count_ones() as usize
    }

    /// Edge index of the image under `(x, y) -> (y, x)` in `other`.
    pub fn transpose_edge_into(&self, e: usize, other: &GammaGrid) -> Option<usize> {
        other.edge_index(&self.edges[e].transpose())
    }

    /// Maps an edge set of this grid into the grid of the reversed vector.
    pub fn transpose_set_into(&self, set: EdgeSet, other: &GammaGrid) -> Option<EdgeSet> {
        let mut out = EdgeSet::EMPTY;
        for e in set.iter() {
            out.insert(self.transpose_edge_into(e, other)?);
        }
        Some(out)
    }

    /// Edges listed explicitly as interior (the corner edges at the shaded
    /// triangles) plus every edge with grid cells on both sides.
    pub fn literal_interior_edges(&self) -> EdgeSet {
        let s = self.mv.prefix_sums();
        let n = self.n;
        let mut out = EdgeSet::EMPTY;
        for j in 0..self.mv.m() {
            let (x, y) = (s[j], n - s[j + 1]);
            if let Some(e) = self.v(x, y) {
                out.insert(e);
            }
            if let Some(e) = self.h(x, y) {
                out.insert(e);
            }
        }
        for (i, e) in self.edges.iter().enumerate() {
            let (x, y) = (e.from.x, e.from.y);
            let both = match e.orientation {
                Orientation::Horizontal => y > 0 && self.has_cell(x, y - 1) && self.has_cell(x, y),
                Orientation::Vertical => x > 0 && self.has_cell(x - 1, y) && self.has_cell(x, y),
            };
            if both {
                out.insert(i);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(v: &[usize]) -> GammaGrid {
        GammaGrid::build(&MultiplicityVector::new(v.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn segment_grid() {
        let g = grid(&[1, 1]);
        assert_eq!(g.terminals(), &[GridPoint::new(0, 2), GridPoint::new(1, 1), GridPoint::new(2, 0)]);
        assert_eq!(g.edges().len(), 6);
        let removable: Vec<GridEdge> = g.removable_edges().iter().map(|&e| g.edge(e)).collect();
        assert_eq!(removable, vec![GridEdge::horizontal(0, 1), GridEdge::vertical(1, 0)]);
        for &e in &g.classify_edges().forced {
            assert!(g.edge(e).on_axis());
        }
    }

    #[test]
    fn terminals_from_prefix_sums() {
        let g = grid(&[2, 1, 2, 3, 1]);
        let t: Vec<(usize, usize)> = g.terminals().iter().map(|p| (p.x, p.y)).collect();
        assert_eq!(t, vec![(0, 9), (2, 7), (3, 6), (5, 4), (8, 1), (9, 0)]);
        assert_eq!(g.virtual_terminals(), &[GridPoint::new(1, 8)]);
    }

    #[test]
    fn point_grid_is_two_axes() {
        let g = grid(&[1]);
        assert_eq!(g.terminals(), &[GridPoint::new(0, 1), GridPoint::new(1, 0)]);
        assert_eq!(g.edges(), &[GridEdge::horizontal(0, 0), GridEdge::vertical(0, 0)]);
        assert!(g.removable_edges().is_empty());
        assert_eq!(g.bounded_regions(g.full()), 0);
    }

    #[test]
    fn removable_count_and_regions() {
        let g = grid(&[1, 1, 1]);
        assert_eq!(g.facet_count(), 6);
        assert_eq!(g.bounded_regions(g.full()), 3);
        for &e in g.removable_edges() {
            assert_eq!(g.bounded_regions(g.full().without(e)), 2);
        }
        assert_eq!(grid(&[2, 2]).bounded_regions(grid(&[2, 2]).full()), 4);
    }

    #[test]
    fn axis_edge_removal_is_invalid() {
        let g = grid(&[1, 1, 1]);
        let e = g.v(0, 2).unwrap();
        assert!(!g.is_valid(g.full().without(e)));
        assert!(g.is_valid(g.full()));
    }

    #[test]
    fn literal_interior_matches_off_axis() {
        for mv in crate::partition::all_up_to(6) {
            let g = GammaGrid::build(&mv).unwrap();
            let diff = g.literal_interior_edges().0 ^ g.removable_mask().0;
            for e in EdgeSet(diff).iter() {
                assert!(g.edge(e).on_axis(), "{mv}: {} differs", g.edge(e));
            }
        }
    }

    #[test]
    fn grid_of_reverse_is_transpose() {
        for mv in crate::partition::all_up_to(6) {
            let g = GammaGrid::build(&mv).unwrap();
            let r = GammaGrid::build(&mv.reverse()).unwrap();
            assert_eq!(g.edges().len(), r.edges().len());
            let t = g.transpose_set_into(g.full(), &r).unwrap();
            assert_eq!(t, r.full());
            let rem = g.transpose_set_into(g.removable_mask(), &r).unwrap();
            assert_eq!(rem, r.removable_mask());
        }
    }

    #[test]
    fn too_large_is_refused() {
        let mv = MultiplicityVector::new(vec![1; MAX_N + 1]).unwrap();
        assert!(matches!(GammaGrid::build(&mv), Err(Error::TooLarge { .. })));
    }
}
