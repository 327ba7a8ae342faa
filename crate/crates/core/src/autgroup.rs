//! Combinatorial automorphisms as permutations of facets: the generator
//! families, group closure, and an exhaustive search used as an oracle.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigUint;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{EdgeSet, GammaGrid, GridPoint};
use crate::ladder::{self, FaceLattice, LadderDiagram};

/// A facet permutation: facet `f` is sent to `perm[f]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Automorphism {
    pub perm: Vec<usize>,
    pub label: String,
}

impl Automorphism {
    pub fn identity(facets: usize) -> Self {
        Self { perm: (0..facets).collect(), label: "id".into() }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            perm: other.perm.iter().map(|&f| self.perm[f]).collect(),
            label: format!("{}*{}", self.label, other.label),
        }
    }

    pub fn inverse(&self) -> Automorphism {
        let mut perm = vec![0; self.perm.len()];
        for (f, &g) in self.perm.iter().enumerate() {
            perm[g] = f;
        }
        Automorphism { perm, label: format!("{}^-1", self.label) }
    }

    pub fn order(&self) -> usize {
        let mut k = 1;
        let mut p = self.perm.clone();
        while !p.iter().enumerate().all(|(i, &x)| i == x) {
            p = p.iter().map(|&f| self.perm[f]).collect();
            k += 1;
        }
        k
    }

    pub fn same_map(&self, other: &Automorphism) -> bool {
        self.perm == other.perm
    }

    pub fn map_facets(&self, mask: u128) -> u128 {
        let mut out = 0u128;
        let mut bits = mask;
        while bits != 0 {
            let f = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            out |= 1u128 << self.perm[f];
        }
        out
    }

    /// Image of a face: the meet of the images of the facets containing it.
    pub fn apply(&self, grid: &GammaGrid, face: &LadderDiagram) -> Option<LadderDiagram> {
        ladder::face_of_facets(grid, self.map_facets(face.facet_set(grid)))
    }
}

/// Vertices of a grid together with the facets through each of them.
#[derive(Debug, Clone)]
pub struct Incidence {
    pub vertices: Vec<LadderDiagram>,
    pub masks: Vec<u128>,
    index: FxHashMap<EdgeSet, usize>,
    mask_set: FxHashSet<u128>,
    facets: usize,
}

impl Incidence {
    pub fn build(grid: &GammaGrid, max_vertices: usize) -> Result<Self> {
        let vertices = ladder::enumerate_vertices(grid, max_vertices)?;
        let masks: Vec<u128> = vertices.iter().map(|v| v.facet_set(grid)).collect();
        let index = vertices.iter().enumerate().map(|(i, v)| (v.edges(), i)).collect();
        let mask_set = masks.iter().copied().collect();
        Ok(Self { vertices, masks, index, mask_set, facets: grid.facet_count() })
    }

    pub fn facet_count(&self) -> usize {
        self.facets
    }

    pub fn index_of(&self, v: &LadderDiagram) -> Option<usize> {
        self.index.get(&v.edges()).copied()
    }

    /// Whether `aut` sends the facet set of every vertex to the facet set of
    /// a vertex. For a polytope this makes it a face-lattice automorphism.
    pub fn preserves_vertices(&self, aut: &Automorphism) -> bool {
        aut.perm.len() == self.facets && self.masks.iter().all(|&m| self.mask_set.contains(&aut.map_facets(m)))
    }

    /// Turns a bijection of vertices into the facet permutation it induces.
    pub fn lift(&self, name: &str, map: impl Fn(&LadderDiagram) -> Result<LadderDiagram>) -> Result<Automorphism> {
        let bad = |reason: String| Error::InvalidAutomorphism { name: name.to_string(), reason };
        let mut image = Vec::with_capacity(self.vertices.len());
        for v in &self.vertices {
            let w = map(v)?;
            image.push(self.index_of(&w).ok_or_else(|| bad("a vertex is sent outside the vertex set".into()))?);
        }
        let mut hit = vec![false; image.len()];
        for &i in &image {
            if std::mem::replace(&mut hit[i], true) {
                return Err(bad("not injective on vertices".into()));
            }
        }
        let all = if self.facets == 128 { u128::MAX } else { (1u128 << self.facets) - 1 };
        let mut perm = Vec::with_capacity(self.facets);
        for f in 0..self.facets {
            let mut cand = all;
            for (v, &w) in image.iter().enumerate() {
                if self.masks[v] >> f & 1 == 1 {
                    cand &= self.masks[w];
                } else {
                    cand &= !self.masks[w];
                }
            }
            if cand.count_ones() != 1 {
                return Err(bad(format!("facet {f} has {} candidate images", cand.count_ones())));
            }
            perm.push(cand.trailing_zeros() as usize);
        }
        let aut = Automorphism { perm, label: name.to_string() };
        if (0..self.vertices.len()).any(|v| aut.map_facets(self.masks[v]) != self.masks[image[v]]) {
            return Err(bad("facet images disagree with the vertex map".into()));
        }
        Ok(aut)
    }
}

/// Checks `aut` against an enumerated lattice: every face goes to a face of
/// the same dimension, bijectively, and covering pairs go to covering pairs.
pub fn check_on_lattice(grid: &GammaGrid, lattice: &FaceLattice, aut: &Automorphism) -> Result<()> {
    let bad = |reason: &str| Error::InvalidAutomorphism { name: aut.label.clone(), reason: reason.into() };
    let sets: Vec<u128> = lattice.faces().iter().map(|f| f.facet_set(grid)).collect();
    let by_set: FxHashMap<u128, usize> = sets.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut image = vec![0usize; sets.len()];
    let mut hit = vec![false; sets.len()];
    for (i, &s) in sets.iter().enumerate() {
        let j = *by_set.get(&aut.map_facets(s)).ok_or_else(|| bad("a face is sent to a non-face"))?;
        if lattice.dim(i) != lattice.dim(j) {
            return Err(bad("dimension not preserved"));
        }
        if std::mem::replace(&mut hit[j], true) {
            return Err(bad("not injective on faces"));
        }
        image[i] = j;
    }
    for i in 0..sets.len() {
        let mut mapped: Vec<usize> = lattice.covers(i).map(|c| image[c]).collect();
        let mut target: Vec<usize> = lattice.covers(image[i]).collect();
        mapped.sort_unstable();
        target.sort_unstable();
        if mapped != target {
            return Err(bad("covering relation not preserved"));
        }
    }
    Ok(())
}

fn precondition(name: &str, reason: impl Into<String>) -> Error {
    Error::Precondition(format!("{name}: {}", reason.into()))
}

/// Face-level action of the corner involution: swaps the presence of the
/// top and right edges of the cell at the origin.
pub fn corner_action(grid: &GammaGrid, edges: EdgeSet) -> EdgeSet {
    let (t, r) = (grid.h(0, 1).unwrap(), grid.v(1, 0).unwrap());
    swap_presence(edges, t, r)
}

fn swap_presence(edges: EdgeSet, a: usize, b: usize) -> EdgeSet {
    let mut out = edges.without(a).without(b);
    if edges.contains(a) {
        out.insert(b);
    }
    if edges.contains(b) {
        out.insert(a);
    }
    out
}

/// Face-level action of the involution at the reflex corner below-left of
/// `t_k`. With `C` the cell there, `L` and `B` its left and lower
/// neighbours, the entry of `C` becomes `L + B - C`; on edges this swaps the
/// left and bottom edges of `C` and redraws its top and right edges.
pub fn k_corner_action(grid: &GammaGrid, k: usize, edges: EdgeSet) -> EdgeSet {
    let (n, s) = (grid.n(), grid.mv().s(k));
    let (cx, cy) = (s - 1, n - s - 1);
    let t = grid.h(cx, cy + 1).unwrap();
    let r = grid.v(cx + 1, cy).unwrap();
    let l = grid.v(cx, cy).unwrap();
    let b = grid.h(cx, cy).unwrap();
    let lt = grid.h(cx - 1, cy + 1).unwrap();
    let br = grid.v(cx + 1, cy - 1).unwrap();
    let has = |e: usize| edges.contains(e);
    let mut out = edges.without(t).without(r).without(l).without(b);
    for (e, on) in [(l, has(b)), (b, has(l)), (t, has(lt) || has(b)), (r, has(br) || has(l))] {
        if on {
            out.insert(e);
        }
    }
    out
}

pub fn gen_corner(grid: &GammaGrid, inc: &Incidence) -> Result<Automorphism> {
    if grid.mv().m() < 2 {
        return Err(precondition("mu", "the polytope is a point"));
    }
    inc.lift("mu", |v| Ok(LadderDiagram::from_valid(corner_action(grid, v.edges()))))
}

pub fn gen_k_corner(grid: &GammaGrid, inc: &Incidence, k: usize) -> Result<Automorphism> {
    let mv = grid.mv();
    if k == 0 || k >= mv.m() || mv.a(k) < 2 || mv.a(k + 1) < 2 {
        return Err(precondition(&format!("mu_{k}"), format!("needs a_{k} >= 2 and a_{} >= 2", k + 1)));
    }
    inc.lift(&format!("mu_{k}"), |v| Ok(LadderDiagram::from_valid(k_corner_action(grid, k, v.edges()))))
}

/// Which end of the grid a symmetric-group generator acts at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum End {
    Low,
    High,
}

/// Reroutes the path to `t_1` so that a crossing from column 0 to column 1
/// at one of the top `a_2` rows moves to the row given by `sigma`.
/// `sigma` is 0-based over crossing positions counted from the top.
fn permute_first_crossing(grid: &GammaGrid, v: &LadderDiagram, sigma: &[usize]) -> Result<LadderDiagram> {
    let n = grid.n();
    let mut paths = ladder::vertex_paths(grid, v)?;
    let row = paths[1].windows(2).find(|w| w[0].x == 0 && w[1].x == 1).map(|w| w[0].y).unwrap();
    if row + sigma.len() < n {
        return Ok(*v);
    }
    let to = n - 1 - sigma[n - 1 - row];
    let mut p: Vec<GridPoint> = (0..=to).map(|y| GridPoint::new(0, y)).collect();
    p.extend((to..n).map(|y| GridPoint::new(1, y)));
    paths[1] = p;
    let mut edges = grid.axis();
    for p in &paths[1..paths.len() - 1] {
        edges = edges.union(ladder::path_edges(grid, p).unwrap());
    }
    LadderDiagram::new(grid, edges)
}

fn is_permutation(sigma: &[usize]) -> bool {
    let mut seen = vec![false; sigma.len()];
    sigma.iter().all(|&s| s < seen.len() && !std::mem::replace(&mut seen[s], true))
}

/// The symmetric group acting on the top crossings at one end. `sigma` is a
/// 0-based permutation of `0..a_2` (low end) or `0..a_{m-1}` (high end).
pub fn gen_symmetric(grid: &GammaGrid, inc: &Incidence, end: End, sigma: &[usize]) -> Result<Automorphism> {
    let mv = grid.mv();
    let m = mv.m();
    let name = format!("sigma_{}{:?}", if end == End::Low { "low" } else { "high" }, sigma);
    let (outer, inner) = match end {
        End::Low if m >= 2 => (mv.a(1), mv.a(2)),
        End::High if m >= 2 => (mv.a(m), mv.a(m - 1)),
        _ => return Err(precondition(&name, "needs at least two distinct parts")),
    };
    if outer != 1 {
        return Err(precondition(&name, "the end multiplicity must be 1"));
    }
    if sigma.len() != inner || !is_permutation(sigma) {
        return Err(precondition(&name, format!("expected a permutation of {inner} points")));
    }
    match end {
        End::Low => inc.lift(&name, |v| permute_first_crossing(grid, v, sigma)),
        End::High => {
            let rev = GammaGrid::build(&mv.reverse())?;
            inc.lift(&name, |v| {
                let t = grid.transpose_set_into(v.edges(), &rev).ok_or(Error::GridMismatch)?;
                let moved = permute_first_crossing(&rev, &LadderDiagram::new(&rev, t)?, sigma)?;
                LadderDiagram::new(grid, rev.transpose_set_into(moved.edges(), grid).ok_or(Error::GridMismatch)?)
            })
        }
    }
}

/// Transpositions of adjacent crossing positions, which generate the
/// symmetric group at that end.
pub fn symmetric_generators(grid: &GammaGrid, inc: &Incidence, end: End) -> Result<Vec<Automorphism>> {
    let mv = grid.mv();
    let m = mv.m();
    let size = match end {
        End::Low => mv.a(2),
        End::High => mv.a(m - 1),
    };
    (0..size.saturating_sub(1))
        .map(|i| {
            let mut sigma: Vec<usize> = (0..size).collect();
            sigma.swap(i, i + 1);
            let mut g = gen_symmetric(grid, inc, end, &sigma)?;
            g.label = format!("s{}_{}", if end == End::Low { "l" } else { "h" }, i + 1);
            Ok(g)
        })
        .collect()
}

/// Reflection in `y = x`.
pub fn gen_flip(grid: &GammaGrid, inc: &Incidence) -> Result<Automorphism> {
    if !grid.mv().is_reverse_symmetric() {
        return Err(precondition("rho", "the multiplicity vector is not reverse symmetric"));
    }
    inc.lift("rho", |v| LadderDiagram::new(grid, grid.transpose_set_into(v.edges(), grid).ok_or(Error::GridMismatch)?))
}

fn require_two_parts(grid: &GammaGrid, name: &str) -> Result<()> {
    if grid.mv().m() != 2 {
        return Err(precondition(name, "needs exactly two distinct parts"));
    }
    Ok(())
}

/// Half-turn of the path to `t_1` about the centre of its bounding box.
pub fn gen_rotation(grid: &GammaGrid, inc: &Incidence) -> Result<Automorphism> {
    require_two_parts(grid, "tau")?;
    let t = grid.terminal(1);
    inc.lift("tau", |v| {
        let paths = ladder::vertex_paths(grid, v)?;
        let rotated: Vec<GridPoint> = paths[1].iter().rev().map(|p| GridPoint::new(t.x - p.x, t.y - p.y)).collect();
        LadderDiagram::new(grid, grid.axis().union(ladder::path_edges(grid, &rotated).ok_or(Error::GridMismatch)?))
    })
}

/// Swaps the two vertices whose path to `t_1` turns exactly once, fixing all
/// other vertices.
pub fn gen_vertex_swap(grid: &GammaGrid, inc: &Incidence) -> Result<Automorphism> {
    require_two_parts(grid, "alpha")?;
    let t = grid.terminal(1);
    let up_right: Vec<GridPoint> =
        (0..t.y).map(|y| GridPoint::new(0, y)).chain((0..=t.x).map(|x| GridPoint::new(x, t.y))).collect();
    let right_up: Vec<GridPoint> =
        (0..t.x).map(|x| GridPoint::new(x, 0)).chain((0..=t.y).map(|y| GridPoint::new(t.x, y))).collect();
    let a = grid.axis().union(ladder::path_edges(grid, &up_right).unwrap());
    let b = grid.axis().union(ladder::path_edges(grid, &right_up).unwrap());
    inc.lift("alpha", |v| {
        Ok(LadderDiagram::from_valid(if v.edges() == a {
            b
        } else if v.edges() == b {
            a
        } else {
            v.edges()
        }))
    })
}

/// All applicable generators, in a fixed order.
pub fn generators(grid: &GammaGrid, inc: &Incidence) -> Result<Vec<Automorphism>> {
    let mv = grid.mv();
    let m = mv.m();
    let mut out = Vec::new();
    if m < 2 {
        return Ok(out);
    }
    out.push(gen_corner(grid, inc)?);
    for k in mv.corner_indices() {
        out.push(gen_k_corner(grid, inc, k)?);
    }
    if mv.a(1) == 1 {
        out.extend(symmetric_generators(grid, inc, End::Low)?);
    }
    if mv.a(m) == 1 {
        out.extend(symmetric_generators(grid, inc, End::High)?);
    }
    if mv.is_reverse_symmetric() {
        out.push(gen_flip(grid, inc)?);
    }
    if m == 2 {
        out.push(gen_rotation(grid, inc)?);
        out.push(gen_vertex_swap(grid, inc)?);
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct AutGroup {
    pub generators: Vec<Automorphism>,
    pub elements: Vec<Automorphism>,
}

impl AutGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, perm: &[usize]) -> bool {
        self.elements.iter().any(|e| e.perm == perm)
    }
}

/// Breadth-first closure of the generators under composition. Every
/// generator must preserve vertex facet sets.
pub fn close_group(inc: &Incidence, gens: &[Automorphism], max_order: usize) -> Result<AutGroup> {
    for g in gens {
        if !inc.preserves_vertices(g) {
            return Err(Error::InvalidAutomorphism { name: g.label.clone(), reason: "vertex incidences not preserved".into() });
        }
    }
    let id = Automorphism::identity(inc.facet_count());
    let mut seen: FxHashSet<Vec<usize>> = FxHashSet::default();
    seen.insert(id.perm.clone());
    let mut elements = vec![id];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in gens {
            let h = g.compose(&elements[i]);
            if seen.insert(h.perm.clone()) {
                if elements.len() >= max_order {
                    return Err(Error::BudgetExceeded { what: "group element", limit: max_order });
                }
                elements.push(h);
                queue.push_back(elements.len() - 1);
            }
        }
    }
    elements.sort_by(|a, b| a.perm.cmp(&b.perm));
    Ok(AutGroup { generators: gens.to_vec(), elements })
}

/// All facet permutations preserving the set of vertex facet sets, found
/// by backtracking over facet images. Candidates are pruned by the number
/// of vertices on each facet and on each pair of facets.
pub fn brute_force_aut(inc: &Incidence, max_order: usize) -> Result<AutGroup> {
    let f = inc.facet_count();
    let words = inc.vertices.len().div_ceil(64);
    let mut on: Vec<Vec<u64>> = vec![vec![0; words]; f];
    for (v, &mask) in inc.masks.iter().enumerate() {
        for (g, row) in on.iter_mut().enumerate() {
            if mask >> g & 1 == 1 {
                row[v / 64] |= 1 << (v % 64);
            }
        }
    }
    let mut co = vec![vec![0u32; f]; f];
    for a in 0..f {
        for b in 0..f {
            co[a][b] = on[a].iter().zip(&on[b]).map(|(x, y)| (x & y).count_ones()).sum();
        }
    }
    let mut search = Search { inc, co: &co, perm: vec![usize::MAX; f], used: vec![false; f], found: Vec::new(), max_order };
    search.extend(0)?;
    let mut elements = search.found;
    elements.sort_by(|a, b| a.perm.cmp(&b.perm));
    Ok(AutGroup { generators: Vec::new(), elements })
}

struct Search<'a> {
    inc: &'a Incidence,
    co: &'a [Vec<u32>],
    perm: Vec<usize>,
    used: Vec<bool>,
    found: Vec<Automorphism>,
    max_order: usize,
}

impl Search<'_> {
    fn extend(&mut self, a: usize) -> Result<()> {
        let f = self.perm.len();
        if a == f {
            let aut = Automorphism { perm: self.perm.clone(), label: format!("g{}", self.found.len()) };
            if self.inc.preserves_vertices(&aut) {
                if self.found.len() >= self.max_order {
                    return Err(Error::BudgetExceeded { what: "group element", limit: self.max_order });
                }
                self.found.push(aut);
            }
            return Ok(());
        }
        for b in 0..f {
            if self.used[b] || self.co[a][a] != self.co[b][b] {
                continue;
            }
            if (0..a).any(|p| self.co[a][p] != self.co[b][self.perm[p]]) {
                continue;
            }
            self.perm[a] = b;
            self.used[b] = true;
            self.extend(a + 1)?;
            self.used[b] = false;
        }
        self.perm[a] = usize::MAX;
        Ok(())
    }
}

/// Summary of a closed group against the closed-form order.
#[derive(Debug, Clone, Serialize)]
pub struct StructureReport {
    pub order: usize,
    pub formula_order: String,
    pub matches_formula: bool,
    pub abelian: bool,
    /// Element order to number of elements with that order.
    pub element_orders: BTreeMap<usize, usize>,
    /// `rho mu_k rho = mu_{m-k}` and `rho mu rho = mu`, when both sides exist.
    pub flip_conjugation: Option<bool>,
}

pub fn structure_report(group: &AutGroup, mv: &crate::partition::MultiplicityVector) -> StructureReport {
    let formula: BigUint = mv.aut_order_formula();
    let mut element_orders = BTreeMap::new();
    for e in &group.elements {
        *element_orders.entry(e.order()).or_insert(0) += 1;
    }
    let abelian = group
        .generators
        .iter()
        .all(|a| group.generators.iter().all(|b| a.compose(b).same_map(&b.compose(a))));
    let find = |label: &str| group.generators.iter().find(|g| g.label == label);
    let flip_conjugation = find("rho").map(|rho| {
        let mut ok = find("mu").is_none_or(|mu| rho.compose(mu).compose(rho).same_map(mu));
        for k in mv.corner_indices() {
            if let (Some(a), Some(b)) = (find(&format!("mu_{k}")), find(&format!("mu_{}", mv.m() - k))) {
                ok &= rho.compose(a).compose(rho).same_map(b);
            }
        }
        ok
    });
    StructureReport {
        order: group.order(),
        formula_order: formula.to_string(),
        matches_formula: BigUint::from(group.order()) == formula,
        abelian,
        element_orders,
        flip_conjugation,
    }
}

/// One defining relation between generators and whether it holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub name: String,
    pub holds: bool,
}

/// Involution and conjugation relations among the generators that exist
/// for this multiplicity vector.
pub fn relations(gens: &[Automorphism], mv: &crate::partition::MultiplicityVector) -> Vec<Relation> {
    let find = |label: &str| gens.iter().find(|g| g.label == label);
    let mut out = Vec::new();
    for g in gens.iter().filter(|g| g.label.starts_with("mu") || ["rho", "tau", "alpha"].contains(&g.label.as_str())) {
        out.push(Relation { name: format!("{}^2 = id", g.label), holds: g.compose(g).is_identity() });
    }
    if let (Some(mu), Some(tau), Some(mu1)) = (find("mu"), find("tau"), find("mu_1")) {
        out.push(Relation { name: "mu tau = tau mu_1".into(), holds: mu.compose(tau).same_map(&tau.compose(mu1)) });
    }
    if let Some(rho) = find("rho") {
        for k in mv.corner_indices() {
            if let (Some(a), Some(b)) = (find(&format!("mu_{k}")), find(&format!("mu_{}", mv.m() - k))) {
                out.push(Relation {
                    name: format!("rho mu_{k} rho = mu_{}", mv.m() - k),
                    holds: rho.compose(a).compose(rho).same_map(b),
                });
            }
        }
    }
    out
}
