//! The 1-skeleton: vertices joined when their union has one bounded region.

use std::collections::VecDeque;

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::grid::{EdgeSet, GammaGrid, GridPoint};
use crate::ladder::{self, LadderDiagram};

#[derive(Debug, Clone)]
pub struct SkeletonGraph {
    vertices: Vec<LadderDiagram>,
    index: FxHashMap<EdgeSet, usize>,
    adjacency: Vec<Vec<u32>>,
}

impl SkeletonGraph {
    pub fn vertices(&self) -> &[LadderDiagram] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, v: &LadderDiagram) -> Option<usize> {
        self.index.get(&v.edges()).copied()
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[i].iter().map(|&j| j as usize)
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(i, j)` with `i < j`, ascending.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (i, adj) in self.adjacency.iter().enumerate() {
            out.extend(adj.iter().map(|&j| j as usize).filter(|&j| j > i).map(|j| (i, j)));
        }
        out
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].binary_search(&(j as u32)).is_ok()
    }

    /// Shortest-path distances from `source`; `usize::MAX` marks unreachable.
    pub fn distances(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.len()];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            for w in self.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn distance(&self, a: usize, b: usize) -> Result<usize> {
        match self.distances(a)[b] {
            usize::MAX => Err(Error::Disconnected),
            d => Ok(d),
        }
    }

    fn eccentricity(&self, source: usize) -> Result<usize> {
        let dist = self.distances(source);
        if dist.contains(&usize::MAX) {
            return Err(Error::Disconnected);
        }
        Ok(dist.into_iter().max().unwrap_or(0))
    }
}

/// Skeleton over [`ladder::enumerate_vertices`], with `v ~ w` iff the
/// union of their diagrams has one bounded region.
///
/// Every edge of the polytope at `v` is `v` plus an ear: a monotone path of
/// new edges between two tree points whose inner points avoid the tree.
/// The neighbour is the other vertex of that one-dimensional face.
pub fn build_skeleton(grid: &GammaGrid, max_vertices: usize) -> Result<SkeletonGraph> {
    let vertices = ladder::enumerate_vertices(grid, max_vertices)?;
    let index: FxHashMap<EdgeSet, usize> = vertices.iter().enumerate().map(|(i, v)| (v.edges(), i)).collect();
    let adjacency: Result<Vec<Vec<u32>>> = vertices
        .par_iter()
        .map(|v| {
            let mut adj = Vec::new();
            for face in ears(grid, v) {
                let w = other_vertex(grid, face, v)?;
                let j = index.get(&w.edges()).ok_or_else(|| Error::Internal("neighbour is not an enumerated vertex".into()))?;
                adj.push(*j as u32);
            }
            adj.sort_unstable();
            adj.dedup();
            Ok(adj)
        })
        .collect();
    let adjacency = adjacency?;
    for (i, adj) in adjacency.iter().enumerate() {
        if adj.iter().any(|&j| adjacency[j as usize].binary_search(&(i as u32)).is_err()) {
            return Err(Error::Internal("edge relation is not symmetric".into()));
        }
    }
    Ok(SkeletonGraph { vertices, index, adjacency })
}

/// The one-dimensional faces containing vertex `v`, as edge sets.
pub fn ears(grid: &GammaGrid, v: &LadderDiagram) -> Vec<EdgeSet> {
    let tree = grid.point_mask(v.edges()) | 1;
    let mut out = Vec::new();
    let mut stack: Vec<(usize, EdgeSet)> = Vec::new();
    for start in 0..grid.points().len() {
        if tree >> start & 1 == 0 {
            continue;
        }
        stack.push((start, EdgeSet::EMPTY));
        while let Some((p, path)) = stack.pop() {
            for &e in grid.out_edges(p) {
                if v.edges().contains(e) {
                    continue;
                }
                let h = grid.head(e);
                if tree >> h & 1 == 1 {
                    out.push(v.edges().union(path).with(e));
                } else {
                    stack.push((h, path.with(e)));
                }
            }
        }
    }
    out
}

/// Reference construction testing every pair of vertices.
pub fn build_skeleton_pairwise(grid: &GammaGrid, max_vertices: usize) -> Result<SkeletonGraph> {
    let vertices = ladder::enumerate_vertices(grid, max_vertices)?;
    let adjacency: Vec<Vec<u32>> = (0..vertices.len())
        .into_par_iter()
        .map(|i| {
            (0..vertices.len())
                .filter(|&j| j != i && ladder::is_edge(grid, &vertices[i], &vertices[j]))
                .map(|j| j as u32)
                .collect()
        })
        .collect();
    let index = vertices.iter().enumerate().map(|(i, v)| (v.edges(), i)).collect();
    Ok(SkeletonGraph { vertices, index, adjacency })
}

/// Largest distance between two vertices, by a breadth-first search from
/// every vertex.
pub fn bfs_diameter(g: &SkeletonGraph) -> Result<usize> {
    if g.is_empty() {
        return Ok(0);
    }
    let eccs: Result<Vec<usize>> = (0..g.len()).into_par_iter().map(|s| g.eccentricity(s)).collect();
    Ok(eccs?.into_iter().max().unwrap_or(0))
}

/// Same value as [`bfs_diameter`], usually with far fewer searches.
///
/// A lower bound comes from a double sweep. A vertex `x` is then certified
/// once some searched source `s` has `ecc(s) + d(s, x)` within the bound;
/// searches run 64 sources at a time as bit-parallel breadth-first searches,
/// from uncertified vertices, until every vertex is certified.
pub fn bounded_diameter(g: &SkeletonGraph) -> Result<usize> {
    let n = g.len();
    if n == 0 {
        return Ok(0);
    }
    let first = g.distances(0);
    if first.contains(&usize::MAX) {
        return Err(Error::Disconnected);
    }
    let far = (0..n).max_by_key(|&v| (first[v], usize::MAX - v)).unwrap();
    let mut bound = g.eccentricity(far)?;
    let mut certified = vec![false; n];
    let mut levels = vec![u8::MAX; n * 64];
    loop {
        let mut sources = Vec::with_capacity(64);
        let mut claimed = vec![false; n];
        for v in 0..n {
            if sources.len() == 64 {
                break;
            }
            if !certified[v] && !claimed[v] {
                sources.push(v);
                claimed[v] = true;
                for w in g.neighbors(v) {
                    claimed[w] = true;
                }
            }
        }
        if sources.is_empty() {
            break;
        }
        let eccs = multi_source_levels(g, &sources, &mut levels)?;
        bound = bound.max(eccs.iter().copied().max().unwrap());
        for x in 0..n {
            if certified[x] {
                continue;
            }
            let row = &levels[x * 64..x * 64 + sources.len()];
            certified[x] = row.iter().zip(&eccs).any(|(&d, &e)| e + d as usize <= bound);
        }
    }
    Ok(bound)
}

/// Breadth-first search from up to 64 sources at once. Fills
/// `levels[x * 64 + b]` with the distance from source `b` to `x` and
/// returns each source's eccentricity.
fn multi_source_levels(g: &SkeletonGraph, sources: &[usize], levels: &mut [u8]) -> Result<Vec<usize>> {
    let n = g.len();
    let mut seen = vec![0u64; n];
    let mut frontier = vec![0u64; n];
    for (b, &s) in sources.iter().enumerate() {
        seen[s] |= 1 << b;
        frontier[s] |= 1 << b;
        levels[s * 64 + b] = 0;
    }
    let mut eccs = vec![0usize; sources.len()];
    let mut level = 0usize;
    let mut next = vec![0u64; n];
    loop {
        level += 1;
        let mut any = false;
        for v in 0..n {
            let mut reach = 0u64;
            for u in g.neighbors(v) {
                reach |= frontier[u];
            }
            let fresh = reach & !seen[v];
            next[v] = fresh;
            if fresh != 0 {
                any = true;
                seen[v] |= fresh;
                let mut bits = fresh;
                while bits != 0 {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    levels[v * 64 + b] = level as u8;
                    eccs[b] = level;
                }
            }
        }
        if !any {
            break;
        }
        std::mem::swap(&mut frontier, &mut next);
    }
    let all = if sources.len() == 64 { u64::MAX } else { (1u64 << sources.len()) - 1 };
    if seen.iter().any(|&s| s != all) {
        return Err(Error::Disconnected);
    }
    Ok(eccs)
}

/// Turning columns and rows for the zigzag paths: those of terminal and
/// virtual terminal vertices.
fn zigzag_lines(grid: &GammaGrid) -> (Vec<usize>, Vec<usize>) {
    let mut cols: Vec<usize> = grid.terminals().iter().map(|t| t.x).collect();
    let mut rows: Vec<usize> = grid.terminals().iter().map(|t| t.y).collect();
    for t in grid.virtual_terminals() {
        cols.push(t.x);
        rows.push(t.y);
    }
    cols.sort_unstable();
    rows.sort_unstable();
    (cols, rows)
}

/// Path from `t` back to the origin alternating horizontal and vertical
/// runs, each stopping at the next turning line; returned origin first.
fn zigzag_path(t: GridPoint, horizontal_first: bool, cols: &[usize], rows: &[usize]) -> Vec<GridPoint> {
    let mut path = vec![t];
    let (mut x, mut y) = (t.x, t.y);
    let mut horizontal = horizontal_first;
    while x > 0 && y > 0 {
        if horizontal {
            let next = cols.iter().rev().copied().find(|&c| c < x).unwrap_or(0);
            path.extend((next..x).rev().map(|c| GridPoint::new(c, y)));
            x = next;
        } else {
            let next = rows.iter().rev().copied().find(|&r| r < y).unwrap_or(0);
            path.extend((next..y).rev().map(|r| GridPoint::new(x, r)));
            y = next;
        }
        horizontal = !horizontal;
    }
    path.extend((0..x).rev().map(|c| GridPoint::new(c, 0)));
    path.extend((0..y).rev().map(|r| GridPoint::new(0, r)));
    path.reverse();
    path
}

/// The two zigzag vertices `(z_h, z_v)`, built from paths that leave each
/// interior terminal horizontally, respectively vertically.
pub fn zigzag_vertices(grid: &GammaGrid) -> Result<(LadderDiagram, LadderDiagram)> {
    let m = grid.mv().m();
    if m < 2 {
        return Err(Error::Precondition("zigzag vertices need at least two distinct parts".into()));
    }
    let (cols, rows) = zigzag_lines(grid);
    let build = |horizontal_first: bool| -> Result<LadderDiagram> {
        let mut edges = grid.axis();
        for j in 1..m {
            let path = zigzag_path(grid.terminal(j), horizontal_first, &cols, &rows);
            let e = ladder::path_edges(grid, &path)
                .ok_or_else(|| Error::Internal(format!("zigzag path to t_{j} leaves the grid")))?;
            edges = edges.union(e);
        }
        let v = LadderDiagram::new(grid, edges)?;
        if grid.regions_of_valid(edges) != 0 {
            return Err(Error::Internal("zigzag diagram is not a vertex".into()));
        }
        Ok(v)
    };
    Ok((build(true)?, build(false)?))
}

/// The vertex at the other end of the one-dimensional face `face` containing
/// vertex `v`: the cycle closes at the unique point where an edge of
/// `face` outside `v` enters the tree, and cutting `v`'s edge into that
/// point releases the other tree.
pub fn other_vertex(grid: &GammaGrid, face: EdgeSet, v: &LadderDiagram) -> Result<LadderDiagram> {
    if !v.edges().is_subset(face) || !grid.is_valid(face) || grid.regions_of_valid(face) != 1 {
        return Err(Error::Precondition("not an edge of the polytope containing the vertex".into()));
    }
    let tree = grid.point_mask(v.edges()) | 1;
    let parents = ladder::tree_parents(grid, v)?;
    let mut closing = face.difference(v.edges()).iter().map(|e| grid.head(e)).filter(|&h| tree >> h & 1 == 1);
    let q = closing.next().ok_or_else(|| Error::Internal("edge face adds no cycle".into()))?;
    if closing.next().is_some() {
        return Err(Error::Internal("edge face closes more than one cycle".into()));
    }
    let cut = parents[q].ok_or_else(|| Error::Internal("closing point is the origin".into()))?;
    let w = grid
        .largest_valid_subset(face.without(cut))
        .ok_or_else(|| Error::Internal("cutting the cycle loses a terminal".into()))?;
    if grid.regions_of_valid(w) != 0 || w == v.edges() {
        return Err(Error::Internal("other end of the edge is not a new vertex".into()));
    }
    Ok(LadderDiagram::from_valid(w))
}

/// Row where the path to `t_1` steps from column 0 to column 1.
fn first_crossing_row(path: &[GridPoint]) -> usize {
    path.windows(2).find(|w| w[0].x == 0 && w[1].x == 1).map(|w| w[0].y).unwrap()
}

/// Column where the path to `t_{m-1}` steps from row 0 to row 1.
fn last_crossing_col(path: &[GridPoint]) -> usize {
    path.windows(2).find(|w| w[0].y == 0 && w[1].y == 1).map(|w| w[0].x).unwrap()
}

/// A walk of polytope edges from `v` to `w`, meeting in the middle at a
/// canonical vertex. Its length is at most the diameter formula, except on
/// the segment `(1,1)` where the two vertices are one step apart.
pub fn connect(grid: &GammaGrid, v: &LadderDiagram, w: &LadderDiagram) -> Result<Vec<LadderDiagram>> {
    for x in [v, w] {
        if !grid.is_valid(x.edges()) || grid.regions_of_valid(x.edges()) != 0 {
            return Err(Error::GridMismatch);
        }
    }
    let mv = grid.mv();
    let m = mv.m();
    let (mut a, mut b) = (*v, *w);
    let (mut walk_a, mut walk_b) = (vec![a], vec![b]);
    if m >= 2 && mv.a(1) == 1 {
        let ra = first_crossing_row(&ladder::vertex_paths(grid, &a)?[1]);
        let rb = first_crossing_row(&ladder::vertex_paths(grid, &b)?[1]);
        if ra != rb {
            // the lower crossing moves up: one added edge, one closed cycle
            let (mover, trail, row) = if ra < rb { (&mut a, &mut walk_a, rb) } else { (&mut b, &mut walk_b, ra) };
            let e = grid.h(0, row).expect("crossing edge in grid");
            *mover = other_vertex(grid, mover.edges().with(e), mover)?;
            trail.push(*mover);
        }
    }
    if m >= 2 && mv.a(m) == 1 {
        let ca = last_crossing_col(&ladder::vertex_paths(grid, &a)?[m - 1]);
        let cb = last_crossing_col(&ladder::vertex_paths(grid, &b)?[m - 1]);
        if ca != cb {
            let (mover, trail, col) = if ca < cb { (&mut a, &mut walk_a, cb) } else { (&mut b, &mut walk_b, ca) };
            let e = grid.v(col, 0).expect("crossing edge in grid");
            *mover = other_vertex(grid, mover.edges().with(e), mover)?;
            trail.push(*mover);
        }
    }
    let start = if mv.a(1) == 1 { 2 } else { 1 };
    let end = if mv.a(m) == 1 { m.saturating_sub(2) } else { m - 1 };
    for i in start..=end {
        for (x, trail) in [(&mut a, &mut walk_a), (&mut b, &mut walk_b)] {
            if let Some(next) = merge_left(grid, x, i)? {
                *x = next;
                trail.push(next);
            }
        }
    }
    if a != b {
        return Err(Error::Internal("connecting walks end at different vertices".into()));
    }
    walk_b.pop();
    walk_a.extend(walk_b.into_iter().rev());
    walk_a.dedup();
    Ok(walk_a)
}

/// Reroutes the path to `t_i` to run straight left from `t_i` until it meets
/// the path to `t_{i-1}`. `None` when the path already does.
fn merge_left(grid: &GammaGrid, v: &LadderDiagram, i: usize) -> Result<Option<LadderDiagram>> {
    let mut paths = ladder::vertex_paths(grid, v)?;
    let t = grid.terminal(i);
    let meet_x = paths[i - 1].iter().filter(|p| p.y == t.y).map(|p| p.x).max().unwrap_or(0);
    let join = GridPoint::new(meet_x, t.y);
    let cut = paths[i - 1].iter().position(|&p| p == join).unwrap();
    let mut rerouted = paths[i - 1][..=cut].to_vec();
    rerouted.extend((meet_x + 1..=t.x).map(|x| GridPoint::new(x, t.y)));
    if rerouted == paths[i] {
        return Ok(None);
    }
    paths[i] = rerouted;
    let mut edges = grid.axis();
    for p in &paths[1..paths.len() - 1] {
        edges = edges.union(ladder::path_edges(grid, p).ok_or_else(|| Error::Internal("rerouted path leaves the grid".into()))?);
    }
    let next = LadderDiagram::new(grid, edges)?;
    if grid.regions_of_valid(edges) != 0 || !ladder::is_edge(grid, v, &next) {
        return Err(Error::Internal(format!("rerouting the path to t_{i} is not a polytope edge")));
    }
    Ok(Some(next))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::MultiplicityVector;

    fn grid(v: &[usize]) -> GammaGrid {
        GammaGrid::build(&MultiplicityVector::new(v.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn segment_is_k2() {
        let g = grid(&[1, 1]);
        let s = build_skeleton(&g, 100).unwrap();
        assert_eq!((s.len(), s.edge_count()), (2, 1));
        assert_eq!(bfs_diameter(&s).unwrap(), 1);
        assert_eq!(bounded_diameter(&s).unwrap(), 1);
    }

    #[test]
    fn point_has_one_vertex() {
        let g = grid(&[3]);
        let s = build_skeleton(&g, 100).unwrap();
        assert_eq!((s.len(), s.edge_count()), (1, 0));
        assert_eq!(bfs_diameter(&s).unwrap(), 0);
        assert!(zigzag_vertices(&g).is_err());
    }

    #[test]
    fn gt123_skeleton() {
        let g = grid(&[1, 1, 1]);
        let s = build_skeleton(&g, 100).unwrap();
        assert_eq!(s.len(), 7);
        assert_eq!(bfs_diameter(&s).unwrap(), 2);
        assert!((0..7).all(|i| s.degree(i) >= 3));
    }

    #[test]
    fn square_diameter() {
        let s = build_skeleton(&grid(&[2, 2]), 100).unwrap();
        assert_eq!(bfs_diameter(&s).unwrap(), 2);
    }

    #[test]
    fn zigzag_gt123() {
        let g = grid(&[1, 1, 1]);
        let (zh, zv) = zigzag_vertices(&g).unwrap();
        let e = |pts: &[(usize, usize)]| {
            let p: Vec<GridPoint> = pts.iter().map(|&(x, y)| GridPoint::new(x, y)).collect();
            ladder::path_edges(&g, &p).unwrap()
        };
        let want_h = g.axis().union(e(&[(0, 2), (1, 2)])).union(e(&[(0, 0), (1, 0), (1, 1), (2, 1)]));
        let want_v = g.axis().union(e(&[(0, 1), (1, 1), (1, 2)])).union(e(&[(2, 0), (2, 1)]));
        assert_eq!(zh.edges(), want_h);
        assert_eq!(zv.edges(), want_v);
    }

    #[test]
    fn zigzag_segment_turns_once() {
        let g = grid(&[1, 1]);
        let (zh, zv) = zigzag_vertices(&g).unwrap();
        assert!(zh.edges().contains(g.h(0, 1).unwrap()));
        assert!(zv.edges().contains(g.v(1, 0).unwrap()));
    }

    #[test]
    fn connect_to_self_is_trivial() {
        let g = grid(&[1, 2, 1]);
        let v = ladder::enumerate_vertices(&g, 100).unwrap()[3];
        assert_eq!(connect(&g, &v, &v).unwrap(), vec![v]);
    }

    #[test]
    fn connect_zigzags_gt123() {
        let g = grid(&[1, 1, 1]);
        let (zh, zv) = zigzag_vertices(&g).unwrap();
        let walk = connect(&g, &zh, &zv).unwrap();
        assert_eq!((walk[0], *walk.last().unwrap()), (zh, zv));
        assert!(walk.len() - 1 <= 2);
        assert!(walk.windows(2).all(|p| ladder::is_edge(&g, &p[0], &p[1])));
    }

    #[test]
    fn connect_all_pairs_small() {
        for mv in crate::partition::all_up_to(5).into_iter().filter(|mv| mv.m() >= 2) {
            let g = GammaGrid::build(&mv).unwrap();
            let vs = ladder::enumerate_vertices(&g, 10_000).unwrap();
            let bound = if crate::partition::is_known_diameter_exception(&mv) { 1 } else { mv.diameter_formula() };
            for v in &vs {
                for w in &vs {
                    let walk = connect(&g, v, w).unwrap_or_else(|e| panic!("{mv}: {e}"));
                    assert_eq!((walk[0], *walk.last().unwrap()), (*v, *w));
                    assert!(walk.len() - 1 <= bound, "{mv}");
                    assert!(walk.windows(2).all(|p| ladder::is_edge(&g, &p[0], &p[1])), "{mv}");
                }
            }
        }
    }

    #[test]
    fn higher_crossing_cannot_absorb_lower_path() {
        // moving the walker whose first path crosses higher would close two cycles
        let g = grid(&[1, 1, 2]);
        let pts = |v: &[(usize, usize)]| -> Vec<GridPoint> { v.iter().map(|&(x, y)| GridPoint::new(x, y)).collect() };
        let v = g
            .axis()
            .union(ladder::path_edges(&g, &pts(&[(0, 3), (1, 3)])).unwrap())
            .union(ladder::path_edges(&g, &pts(&[(0, 1), (1, 1), (2, 1), (2, 2)])).unwrap());
        let w1 = ladder::path_edges(&g, &pts(&[(0, 0), (1, 0), (1, 1), (1, 2), (1, 3)])).unwrap();
        let v = LadderDiagram::new(&g, v).unwrap();
        assert_eq!(g.regions_of_valid(v.edges()), 0);
        assert_eq!(g.bounded_regions(v.edges().union(w1)), 2);
        let w = g.axis().union(w1).union(ladder::path_edges(&g, &pts(&[(1, 1), (2, 1), (2, 2)])).unwrap());
        let w = LadderDiagram::new(&g, w).unwrap();
        let walk = connect(&g, &v, &w).unwrap();
        assert!(walk.windows(2).all(|p| ladder::is_edge(&g, &p[0], &p[1])));
    }

    #[test]
    fn other_vertex_swaps_segment_ends() {
        let g = grid(&[1, 1]);
        let vs = ladder::enumerate_vertices(&g, 10).unwrap();
        assert_eq!(other_vertex(&g, g.full(), &vs[0]).unwrap(), vs[1]);
        assert_eq!(other_vertex(&g, g.full(), &vs[1]).unwrap(), vs[0]);
    }

    #[test]
    fn ears_match_pairwise() {
        for mv in crate::partition::all_up_to(5) {
            let g = GammaGrid::build(&mv).unwrap();
            let a = build_skeleton(&g, 10_000).unwrap();
            let b = build_skeleton_pairwise(&g, 10_000).unwrap();
            assert_eq!(a.edges(), b.edges(), "{mv}");
        }
    }

    #[test]
    fn bounded_matches_exhaustive() {
        for mv in crate::partition::all_up_to(5) {
            let s = build_skeleton(&GammaGrid::build(&mv).unwrap(), 10_000).unwrap();
            assert_eq!(bounded_diameter(&s).unwrap(), bfs_diameter(&s).unwrap(), "{mv}");
        }
    }
}
