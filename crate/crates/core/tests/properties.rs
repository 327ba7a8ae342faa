use std::sync::OnceLock;

use gtpoly::autgroup::{self, Incidence};
use gtpoly::ladder::{self, FaceLattice, GtPoint, LadderDiagram};
use gtpoly::partition::{all_up_to, parse_partition};
use gtpoly::{GammaGrid, MultiplicityVector};
use num_rational::Rational64;
use proptest::prelude::*;

/// Every multiplicity vector with `n <= 5`, with its grid and lattice.
fn lattices() -> &'static [(GammaGrid, FaceLattice)] {
    static CELL: OnceLock<Vec<(GammaGrid, FaceLattice)>> = OnceLock::new();
    CELL.get_or_init(|| {
        all_up_to(5)
            .iter()
            .map(|mv| {
                let g = GammaGrid::build(mv).unwrap();
                let l = ladder::enumerate_faces(&g, 100_000).unwrap();
                (g, l)
            })
            .collect()
    })
}

fn mv_strategy(max_n: usize) -> impl Strategy<Value = MultiplicityVector> {
    prop::collection::vec(1usize..=3, 1..=max_n)
        .prop_filter("size", move |v| v.iter().sum::<usize>() <= max_n)
        .prop_map(|v| MultiplicityVector::new(v).unwrap())
}

/// A point of the polytope built row by row. Each free entry is drawn from
/// its feasible interval, often landing on an endpoint so that ties occur.
fn point(lambda: &[u64], picks: &[(u8, i64)]) -> GtPoint {
    let n = lambda.len();
    let mut rows: Vec<Vec<Rational64>> = Vec::with_capacity(n);
    let mut k = 0;
    for i in 1..=n {
        let mut row = vec![Rational64::from_integer(0); i];
        row[i - 1] = Rational64::from_integer(lambda[i - 1] as i64);
        for j in (1..i).rev() {
            let lo = rows[i - 2][j - 1];
            let hi = row[j];
            let (mode, num) = picks[k % picks.len()];
            k += 1;
            row[j - 1] = match mode % 4 {
                0 => lo,
                1 => hi,
                _ => lo + (hi - lo) * Rational64::new(num.rem_euclid(7) + 1, 8),
            };
        }
        rows.push(row);
    }
    GtPoint::new(rows).unwrap()
}

fn cells_equal_within_classes(grid: &GammaGrid, face: &LadderDiagram, p: &GtPoint) -> bool {
    let n = grid.n();
    let (classes, count) = ladder::cell_classes(grid, face.edges());
    let mut value: Vec<Option<Rational64>> = vec![None; count];
    for c in 0..n {
        for r in 0..n - c {
            let k = classes[c * n + r];
            match value[k] {
                Some(v) if v != p.cell(c, r) => return false,
                _ => value[k] = Some(p.cell(c, r)),
            }
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn point_lies_in_its_face_and_in_no_smaller(
        mv in mv_strategy(6),
        picks in prop::collection::vec((any::<u8>(), any::<i64>()), 1..20),
    ) {
        let g = GammaGrid::build(&mv).unwrap();
        let lambda = mv.canonical_partition();
        let p = point(lambda.parts(), &picks);
        let face = ladder::point_to_ladder(&g, &p).unwrap();
        prop_assert!(cells_equal_within_classes(&g, &face, &p));
        prop_assert_eq!(ladder::bounded_regions(&g, &face), ladder::free_class_count(&g, face.edges()));
        for child in ladder::children(&g, &face) {
            prop_assert!(!cells_equal_within_classes(&g, &child, &p));
        }
    }

    #[test]
    fn join_is_least_upper_bound(case in 0usize..1000, a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let all = lattices();
        let (_, l) = &all[case % all.len()];
        let (x, y) = (&l.faces()[a.index(l.len())], &l.faces()[b.index(l.len())]);
        let join = ladder::superimpose(x, y);
        prop_assert!(l.index_of(&join).is_some());
        prop_assert!(ladder::includes(x, &join) && ladder::includes(y, &join));
        for z in l.faces() {
            if ladder::includes(x, z) && ladder::includes(y, z) {
                prop_assert!(ladder::includes(&join, z));
            }
        }
    }

    #[test]
    fn meet_is_greatest_lower_bound(case in 0usize..1000, a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let all = lattices();
        let (g, l) = &all[case % all.len()];
        let (x, y) = (&l.faces()[a.index(l.len())], &l.faces()[b.index(l.len())]);
        let lower: Vec<&LadderDiagram> = l.faces().iter().filter(|z| ladder::includes(z, x) && ladder::includes(z, y)).collect();
        match ladder::meet(g, x, y) {
            None => prop_assert!(lower.is_empty()),
            Some(m) => {
                prop_assert!(l.index_of(&m).is_some());
                prop_assert!(lower.iter().all(|z| ladder::includes(z, &m)));
                prop_assert!(lower.contains(&&m));
            }
        }
    }

    #[test]
    fn partition_text_round_trips(runs in prop::collection::vec((1u64..4, 1u64..4), 1..5)) {
        let mut value = 0;
        let mut parts = Vec::new();
        for (step, count) in &runs {
            value += step;
            parts.push(format!("{value}^{count}"));
        }
        let p = parse_partition(&parts.join(",")).unwrap();
        let counts: Vec<usize> = runs.iter().map(|&(_, c)| c as usize).collect();
        let mv = p.normalize();
        prop_assert_eq!(mv.mults(), &counts[..]);
        let again = parse_partition(p.to_string().trim_matches(['(', ')'])).unwrap();
        prop_assert_eq!(again, p);
    }

    #[test]
    fn vertex_maps_are_lattice_automorphisms(case in 0usize..1000) {
        let all = lattices();
        let (g, l) = &all[case % all.len()];
        let inc = Incidence::build(g, 10_000).unwrap();
        for a in autgroup::generators(g, &inc).unwrap() {
            prop_assert!(autgroup::check_on_lattice(g, l, &a).is_ok(), "{} on {}", a.label, g.mv());
        }
    }
}

#[test]
fn transpose_maps_vertices_into_reversed_grid() {
    for mv in all_up_to(6) {
        let g = GammaGrid::build(&mv).unwrap();
        let r = GammaGrid::build(&mv.reverse()).unwrap();
        let theirs = ladder::enumerate_vertices(&r, 100_000).unwrap();
        let mut mapped: Vec<LadderDiagram> = ladder::enumerate_vertices(&g, 100_000)
            .unwrap()
            .iter()
            .map(|v| LadderDiagram::new(&r, g.transpose_set_into(v.edges(), &r).unwrap()).unwrap())
            .collect();
        mapped.sort();
        assert_eq!(mapped, theirs, "{mv}");
    }
}
