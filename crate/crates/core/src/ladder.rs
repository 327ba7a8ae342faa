//! Ladder diagrams as faces of the polytope: validation, grading, lattice
//! operations, vertex and face enumeration, and the map from points of the
//! polytope to diagrams.

use num_rational::Rational64;
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::grid::{EdgeSet, GammaGrid, GridEdge, GridPoint, Orientation, Planar};

/// An edge subset of the grid satisfying both ladder conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LadderDiagram {
    edges: EdgeSet,
}

impl LadderDiagram {
    pub fn new(grid: &GammaGrid, edges: EdgeSet) -> Result<Self> {
        if grid.is_valid(edges) {
            Ok(Self { edges })
        } else {
            Err(Error::Precondition(format!("edge set {:#x} is not a ladder diagram", edges.0)))
        }
    }

    /// Wraps an edge set the caller has already validated.
    pub(crate) fn from_valid(edges: EdgeSet) -> Self {
        Self { edges }
    }

    pub fn full(grid: &GammaGrid) -> Self {
        Self { edges: grid.full() }
    }

    pub fn edges(&self) -> EdgeSet {
        self.edges
    }

    /// Canonical edge indices, ascending.
    pub fn edge_indices(&self) -> Vec<usize> {
        self.edges.iter().collect()
    }

    /// Facets containing this face: removable edges absent from the diagram,
    /// as a bitmask over facet indices.
    pub fn facet_set(&self, grid: &GammaGrid) -> u128 {
        grid.removable_mask()
            .difference(self.edges)
            .iter()
            .fold(0u128, |acc, e| acc | 1u128 << grid.facet_of_edge(e).unwrap())
    }
}

pub fn validate(grid: &GammaGrid, edges: EdgeSet) -> bool {
    grid.is_valid(edges)
}

/// Face dimension.
pub fn bounded_regions(grid: &GammaGrid, ld: &LadderDiagram) -> usize {
    grid.bounded_regions(ld.edges)
}

/// `a <= b` in the face order.
pub fn includes(a: &LadderDiagram, b: &LadderDiagram) -> bool {
    a.edges.is_subset(b.edges)
}

/// Lattice join: the edge-set union.
pub fn superimpose(a: &LadderDiagram, b: &LadderDiagram) -> LadderDiagram {
    LadderDiagram { edges: a.edges.union(b.edges) }
}

/// Lattice meet. `None` is the empty face.
pub fn meet(grid: &GammaGrid, a: &LadderDiagram, b: &LadderDiagram) -> Option<LadderDiagram> {
    grid.largest_valid_subset(a.edges.intersection(b.edges)).map(LadderDiagram::from_valid)
}

/// The face cut out by a set of facets: the largest diagram avoiding all of
/// their edges. `None` is the empty face.
pub fn face_of_facets(grid: &GammaGrid, facets: u128) -> Option<LadderDiagram> {
    let mut avoid = EdgeSet::EMPTY;
    let mut bits = facets;
    while bits != 0 {
        let f = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        avoid.insert(grid.facet_edge(f));
    }
    grid.largest_valid_subset(grid.full().difference(avoid)).map(LadderDiagram::from_valid)
}

/// Two vertices span an edge of the polytope iff their union has exactly one
/// bounded region.
pub fn is_edge(grid: &GammaGrid, v: &LadderDiagram, w: &LadderDiagram) -> bool {
    grid.bounded_regions(v.edges.union(w.edges)) == 1
}

/// Faces covered by `ld`, ascending. Every proper face misses some edge of
/// `ld`, so it lies below one of the pruned single-edge deletions; the
/// covers are the maximal ones among those.
pub fn children(grid: &GammaGrid, ld: &LadderDiagram) -> Vec<LadderDiagram> {
    let mut out: Vec<LadderDiagram> = planar_children(grid, grid.to_planar(ld.edges))
        .into_iter()
        .map(|p| LadderDiagram::from_valid(grid.from_planar(p)))
        .collect();
    out.sort();
    out
}

fn planar_children(grid: &GammaGrid, p: Planar) -> Vec<Planar> {
    let mut cands = Vec::new();
    for (bits, horizontal) in [(p.h, true), (p.v, false)] {
        let mut rest = bits;
        while rest != 0 {
            let bit = 1u128 << rest.trailing_zeros();
            rest &= rest - 1;
            let q = if horizontal { Planar { h: p.h & !bit, v: p.v } } else { Planar { h: p.h, v: p.v & !bit } };
            if let Some(c) = grid.planar_largest_valid(q) {
                cands.push(c);
            }
        }
    }
    cands.sort_unstable();
    cands.dedup();
    let below = |a: &Planar, b: &Planar| a != b && a.h & !b.h == 0 && a.v & !b.v == 0;
    cands.iter().filter(|c| !cands.iter().any(|d| below(c, d))).copied().collect()
}

/// All vertices (0-dimensional faces), as unions of noncrossing paths from
/// the origin to every terminal. Sorted by edge bitmask.
pub fn enumerate_vertices(grid: &GammaGrid, max_vertices: usize) -> Result<Vec<LadderDiagram>> {
    let mut out = Vec::new();
    let axis = grid.axis();
    let points = grid.point_mask(axis) | 1;
    extend_tree(grid, 1, axis, points, &mut out, max_vertices)?;
    out.sort();
    Ok(out)
}

fn extend_tree(
    grid: &GammaGrid,
    j: usize,
    tree: EdgeSet,
    tree_points: u128,
    out: &mut Vec<LadderDiagram>,
    max: usize,
) -> Result<()> {
    let m = grid.mv().m();
    if j >= m {
        if out.len() >= max {
            return Err(Error::BudgetExceeded { what: "vertex", limit: max });
        }
        out.push(LadderDiagram { edges: tree });
        return Ok(());
    }
    let target = grid.terminal(j);
    let mut walker = PathWalker { grid, target, tree, tree_points, out, max, j };
    walker.walk(0, false, EdgeSet::EMPTY, 0)
}

struct PathWalker<'a> {
    grid: &'a GammaGrid,
    target: GridPoint,
    tree: EdgeSet,
    tree_points: u128,
    out: &'a mut Vec<LadderDiagram>,
    max: usize,
    j: usize,
}

impl PathWalker<'_> {
    /// Extends a path from point `p`; once the path has left the current tree
    /// it may never touch it again.
    fn walk(&mut self, p: usize, left: bool, path: EdgeSet, path_points: u128) -> Result<()> {
        let here = self.grid.point(p);
        if here == self.target {
            return extend_tree(
                self.grid,
                self.j + 1,
                self.tree.union(path),
                self.tree_points | path_points,
                self.out,
                self.max,
            );
        }
        for &e in self.grid.out_edges(p) {
            let h = self.grid.head(e);
            let hp = self.grid.point(h);
            if hp.x > self.target.x || hp.y > self.target.y {
                continue;
            }
            let in_tree = self.tree_points >> h & 1 == 1;
            if !left && self.tree.contains(e) {
                self.walk(h, false, path, path_points)?;
            } else if !in_tree {
                self.walk(h, true, path.with(e), path_points | 1u128 << h)?;
            }
        }
        Ok(())
    }
}

/// The face lattice. The empty face is the implicit bottom and is not stored.
#[derive(Debug, Clone)]
pub struct FaceLattice {
    faces: Vec<LadderDiagram>,
    dims: Vec<usize>,
    index: FxHashMap<EdgeSet, usize>,
    /// Covering relation: `covers[i]` are the faces directly below face `i`.
    covers: Vec<Vec<u32>>,
    dimension: usize,
}

impl FaceLattice {
    pub fn faces(&self) -> &[LadderDiagram] {
        &self.faces
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn dim(&self, i: usize) -> usize {
        self.dims[i]
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn index_of(&self, ld: &LadderDiagram) -> Option<usize> {
        self.index.get(&ld.edges).copied()
    }

    pub fn covers(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.covers[i].iter().map(|&c| c as usize)
    }

    pub fn top(&self) -> usize {
        0
    }

    /// `f_0, ..., f_d` (the top face counts as `f_d = 1`).
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.dimension + 1];
        for &d in &self.dims {
            f[d] += 1;
        }
        f
    }

    pub fn faces_of_dim(&self, d: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.faces.len()).filter(move |&i| self.dims[i] == d)
    }

    /// `sum_{i<d} (-1)^i f_i == 1 - (-1)^d`.
    pub fn euler_holds(&self) -> bool {
        let d = self.dimension;
        if d == 0 {
            return self.faces.len() == 1;
        }
        let f = self.f_vector();
        let lhs: i64 = (0..d).map(|i| if i % 2 == 0 { f[i] as i64 } else { -(f[i] as i64) }).sum();
        let rhs = if d.is_multiple_of(2) { 0 } else { 2 };
        lhs == rhs
    }

    /// Every covering pair differs by exactly one bounded region, and only
    /// vertices cover nothing but the empty face.
    pub fn is_graded(&self) -> bool {
        (0..self.faces.len()).all(|i| {
            (self.dims[i] == 0) == self.covers[i].is_empty()
                && self.covers[i].iter().all(|&c| self.dims[c as usize] + 1 == self.dims[i])
        })
    }
}

/// Closure downward from the full grid under [`children`].
pub fn enumerate_faces(grid: &GammaGrid, max_faces: usize) -> Result<FaceLattice> {
    let top = grid.to_planar(grid.full());
    let mut planar = vec![top];
    let mut dims = vec![grid.planar_regions(top)];
    let mut index: FxHashMap<Planar, u32> = FxHashMap::default();
    index.insert(top, 0);
    let mut covers: Vec<Vec<u32>> = vec![Vec::new()];
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let kids: Vec<Vec<Planar>> = frontier.par_iter().map(|&i| planar_children(grid, planar[i])).collect();
        let mut next = Vec::new();
        for (&parent, ks) in frontier.iter().zip(kids) {
            let mut ids = Vec::with_capacity(ks.len());
            for k in ks {
                let id = match index.get(&k) {
                    Some(&id) => id,
                    None => {
                        if planar.len() >= max_faces {
                            return Err(Error::BudgetExceeded { what: "face", limit: max_faces });
                        }
                        let id = planar.len() as u32;
                        planar.push(k);
                        dims.push(grid.planar_regions(k));
                        covers.push(Vec::new());
                        index.insert(k, id);
                        next.push(id as usize);
                        id
                    }
                };
                ids.push(id);
            }
            ids.sort_unstable();
            covers[parent] = ids;
        }
        frontier = next;
    }
    drop(index);
    let faces: Vec<LadderDiagram> = planar.iter().map(|&p| LadderDiagram::from_valid(grid.from_planar(p))).collect();
    let index = faces.iter().enumerate().map(|(i, f)| (f.edges, i)).collect();
    Ok(FaceLattice { faces, dimension: dims[0], dims, index, covers })
}

/// Splits a vertex diagram into its paths `p_0, ..., p_m`, each given as the
/// list of points from the origin to `t_j`.
pub fn vertex_paths(grid: &GammaGrid, v: &LadderDiagram) -> Result<Vec<Vec<GridPoint>>> {
    let parents = tree_parents(grid, v)?;
    grid.terminals()
        .iter()
        .map(|&t| {
            let mut p = grid.point_index(t).expect("terminal in grid");
            let mut path = vec![grid.point(p)];
            while p != 0 {
                let e = parents[p].ok_or_else(|| Error::Internal("terminal unreachable".into()))?;
                p = grid.tail(e);
                path.push(grid.point(p));
            }
            path.reverse();
            Ok(path)
        })
        .collect()
}

/// For a vertex diagram (a tree), the unique in-edge of every covered point.
pub(crate) fn tree_parents(grid: &GammaGrid, v: &LadderDiagram) -> Result<Vec<Option<usize>>> {
    let mut parents = vec![None; grid.points().len()];
    for e in v.edges.iter() {
        let h = grid.head(e);
        if parents[h].replace(e).is_some() {
            return Err(Error::Precondition("diagram is not a vertex".into()));
        }
    }
    Ok(parents)
}

/// Edge set of a monotone lattice path given by its points.
pub fn path_edges(grid: &GammaGrid, points: &[GridPoint]) -> Option<EdgeSet> {
    let mut s = EdgeSet::EMPTY;
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        let e = if b.x == a.x + 1 && b.y == a.y {
            GridEdge::horizontal(a.x, a.y)
        } else if b.y == a.y + 1 && b.x == a.x {
            GridEdge::vertical(a.x, a.y)
        } else {
            return None;
        };
        s.insert(grid.edge_index(&e)?);
    }
    Some(s)
}

/// A point of the polytope: the triangular array `x_{i,j}`, `1 <= j <= i <= n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GtPoint {
    rows: Vec<Vec<Rational64>>,
}

impl GtPoint {
    pub fn new(rows: Vec<Vec<Rational64>>) -> Result<Self> {
        for (i, row) in rows.iter().enumerate() {
            if row.len() != i + 1 {
                return Err(Error::PointRejected(format!("row {} has {} entries", i + 1, row.len())));
            }
        }
        Ok(Self { rows })
    }

    pub fn from_integers(rows: Vec<Vec<i64>>) -> Result<Self> {
        Self::new(rows.into_iter().map(|r| r.into_iter().map(Rational64::from_integer).collect()).collect())
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// `x_{i,j}`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> Rational64 {
        self.rows[i - 1][j - 1]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational64) {
        self.rows[i - 1][j - 1] = v;
    }

    pub fn rows(&self) -> &[Vec<Rational64>] {
        &self.rows
    }

    /// Checks the boundary `x_{i,i} = lambda_i` and the row/column inequalities.
    pub fn check(&self, lambda: &[u64]) -> Result<()> {
        let n = self.n();
        if lambda.len() != n {
            return Err(Error::PointRejected(format!("expected {} rows, got {n}", lambda.len())));
        }
        for i in 1..=n {
            if self.get(i, i) != Rational64::from_integer(lambda[i - 1] as i64) {
                return Err(Error::PointRejected(format!("x_{{{i},{i}}} = lambda_{i}")));
            }
            for j in 1..i {
                if self.get(i, j) > self.get(i, j + 1) {
                    return Err(Error::PointRejected(format!("x_{{{i},{j}}} <= x_{{{i},{}}}", j + 1)));
                }
                if self.get(i - 1, j) > self.get(i, j) {
                    return Err(Error::PointRejected(format!("x_{{{},{j}}} <= x_{{{i},{j}}}", i - 1)));
                }
            }
        }
        Ok(())
    }

    /// Value in the unit cell with lower-left corner `(c, r)`, `c + r <= n - 1`.
    pub fn cell(&self, c: usize, r: usize) -> Rational64 {
        self.get(self.n() - r, c + 1)
    }
}

/// Minimal face containing `p`: an edge is drawn wherever it separates two
/// unequal entries, and along both axes.
pub fn point_to_ladder(grid: &GammaGrid, p: &GtPoint) -> Result<LadderDiagram> {
    let lambda = grid.mv().canonical_partition();
    p.check(lambda.parts())?;
    let mut edges = EdgeSet::EMPTY;
    for (i, e) in grid.edges().iter().enumerate() {
        let (x, y) = (e.from.x, e.from.y);
        let present = match e.orientation {
            Orientation::Horizontal => y == 0 || p.cell(x, y - 1) != p.cell(x, y),
            Orientation::Vertical => x == 0 || p.cell(x - 1, y) != p.cell(x, y),
        };
        if present {
            edges.insert(i);
        }
    }
    LadderDiagram::new(grid, edges).map_err(|_| Error::Internal("point produced an invalid diagram".into()))
}

/// Equality classes of cells of the triangular array under a diagram: cells
/// are merged across every unit segment the diagram does not draw. Returns
/// the class id of each cell `(c, r)` (indexed `c * n + r`) and the class count.
pub fn cell_classes(grid: &GammaGrid, edges: EdgeSet) -> (Vec<usize>, usize) {
    let n = grid.n();
    let id = |c: usize, r: usize| c * n + r;
    let mut parent: Vec<usize> = (0..n * n).collect();
    fn find(parent: &mut [usize], mut a: usize) -> usize {
        while parent[a] != a {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        a
    }
    let drawn = |e: GridEdge| grid.edge_index(&e).is_some_and(|i| edges.contains(i));
    for c in 0..n {
        for r in 0..n - c {
            // right neighbour (c+1, r), separated by the vertical segment at x = c+1
            if c + 1 + r < n && !drawn(GridEdge::vertical(c + 1, r)) {
                let (a, b) = (find(&mut parent, id(c, r)), find(&mut parent, id(c + 1, r)));
                parent[a] = b;
            }
            // upper neighbour (c, r+1), separated by the horizontal segment at y = r+1
            if c + r + 1 < n && !drawn(GridEdge::horizontal(c, r + 1)) {
                let (a, b) = (find(&mut parent, id(c, r)), find(&mut parent, id(c, r + 1)));
                parent[a] = b;
            }
        }
    }
    let mut label = vec![usize::MAX; n * n];
    let mut classes = vec![usize::MAX; n * n];
    let mut count = 0;
    for c in 0..n {
        for r in 0..n - c {
            let root = find(&mut parent, id(c, r));
            if label[root] == usize::MAX {
                label[root] = count;
                count += 1;
            }
            classes[id(c, r)] = label[root];
        }
    }
    (classes, count)
}

/// Number of equality classes of cells not pinned to a partition value.
pub fn free_class_count(grid: &GammaGrid, edges: EdgeSet) -> usize {
    let n = grid.n();
    let (classes, count) = cell_classes(grid, edges);
    let mut pinned = vec![false; count];
    for c in 0..n {
        pinned[classes[c * n + (n - 1 - c)]] = true;
    }
    pinned.iter().filter(|&&p| !p).count()
}

/// The integral point of a vertex diagram: every cell takes the partition
/// value of its class. `None` unless `v` is a vertex.
pub fn vertex_point(grid: &GammaGrid, v: &LadderDiagram) -> Option<GtPoint> {
    let n = grid.n();
    let lambda = grid.mv().canonical_partition();
    let (classes, count) = cell_classes(grid, v.edges);
    let mut value: Vec<Option<u64>> = vec![None; count];
    for c in 0..n {
        let k = classes[c * n + (n - 1 - c)];
        let lam = lambda.parts()[c];
        match value[k] {
            Some(x) if x != lam => return None,
            _ => value[k] = Some(lam),
        }
    }
    let mut rows = Vec::with_capacity(n);
    for i in 1..=n {
        let mut row = Vec::with_capacity(i);
        for j in 1..=i {
            let (c, r) = (j - 1, n - i);
            row.push(value[classes[c * n + r]]? as i64);
        }
        rows.push(row);
    }
    GtPoint::from_integers(rows).ok()
}
