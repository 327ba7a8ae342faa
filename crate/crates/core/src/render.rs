//! Text, SVG and DOT drawings of grids, diagrams, skeletons and chain trees.

use std::fmt::Write;

use crate::chains::{ChainGraph, FacetChain};
use crate::grid::{EdgeSet, GammaGrid, GridPoint, Orientation};
use crate::skeleton::SkeletonGraph;

/// Character drawing with the origin bottom left. Grid points are `.`,
/// terminals `o`; the drawn edges are those of `edges` (all edges when `None`).
pub fn ascii(grid: &GammaGrid, edges: Option<EdgeSet>) -> String {
    let n = grid.n();
    let set = edges.unwrap_or_else(|| grid.full());
    let has = |h: bool, x: usize, y: usize| {
        let e = if h { grid.h(x, y) } else { grid.v(x, y) };
        e.is_some_and(|e| set.contains(e))
    };
    let mut out = String::new();
    for y in (0..=n).rev() {
        let mut line = String::new();
        for x in 0..=n {
            let p = GridPoint::new(x, y);
            line.push(if grid.terminals().contains(&p) {
                'o'
            } else if grid.contains_point(p) {
                '.'
            } else {
                ' '
            });
            if x < n {
                line.push_str(if has(true, x, y) { "---" } else { "   " });
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
        if y > 0 {
            let mut line = String::new();
            for x in 0..=n {
                line.push(if has(false, x, y - 1) { '|' } else { ' ' });
                line.push_str("   ");
            }
            let line = line.trim_end();
            if !line.is_empty() {
                out.push_str(line);
            }
            out.push('\n');
        }
    }
    out
}

const CELL: usize = 40;
const MARGIN: usize = 20;

/// SVG drawing: grey grid, the diagram's edges in black, terminals filled.
pub fn svg(grid: &GammaGrid, edges: Option<EdgeSet>, title: &str) -> String {
    let n = grid.n();
    let size = n * CELL + 2 * MARGIN;
    let px = |x: usize| MARGIN + x * CELL;
    let py = |y: usize| MARGIN + (n - y) * CELL;
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{}" viewBox="0 0 {size} {}">"#, size + 20, size + 20);
    let _ = writeln!(s, "<title>{}</title>", escape(title));
    let set = edges.unwrap_or_else(|| grid.full());
    for (i, e) in grid.edges().iter().enumerate() {
        let t = e.to();
        let (stroke, width) = if edges.is_some() && !set.contains(i) { ("#cccccc", 1) } else { ("#000000", 3) };
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{stroke}" stroke-width="{width}"/>"#,
            px(e.from.x),
            py(e.from.y),
            px(t.x),
            py(t.y)
        );
    }
    for p in grid.points() {
        let terminal = grid.terminals().contains(p);
        let _ = writeln!(
            s,
            r#"<circle cx="{}" cy="{}" r="{}" fill="{}"/>"#,
            px(p.x),
            py(p.y),
            if terminal { 6 } else { 3 },
            if terminal { "#c0392b" } else { "#000000" }
        );
    }
    let _ = writeln!(s, r#"<text x="{MARGIN}" y="{}" font-family="monospace" font-size="12">{}</text>"#, size + 10, escape(title));
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn edge_label(grid: &GammaGrid, set: EdgeSet) -> String {
    let mut parts = Vec::new();
    for i in set.iter() {
        let e = grid.edge(i);
        if grid.facet_of_edge(i).is_some() {
            let c = if e.orientation == Orientation::Horizontal { 'h' } else { 'v' };
            parts.push(format!("{c}{}{}", e.from.x, e.from.y));
        }
    }
    parts.join(" ")
}

/// Skeleton as an undirected DOT graph. Node labels list the interior
/// edges of each vertex diagram.
pub fn skeleton_dot(grid: &GammaGrid, g: &SkeletonGraph) -> String {
    let mut s = format!("graph skeleton {{\n  label=\"{}\";\n  node [shape=box, fontname=monospace];\n", grid.mv().label());
    for (i, v) in g.vertices().iter().enumerate() {
        let _ = writeln!(s, "  v{i} [label=\"{i}: {}\"];", edge_label(grid, v.edges()));
    }
    for (a, b) in g.edges() {
        let _ = writeln!(s, "  v{a} -- v{b};");
    }
    s.push_str("}\n");
    s
}

/// Chain tree as DOT, with adjacency point counts on the edges.
pub fn chains_dot(grid: &GammaGrid, chains: &[FacetChain], graph: &ChainGraph) -> String {
    let mut s = format!("graph chains {{\n  label=\"{}\";\n  node [shape=ellipse, fontname=monospace];\n", grid.mv().label());
    for (pos, &i) in graph.nodes.iter().enumerate() {
        let c = &chains[i];
        let shape = if graph.root == Some(pos) { ", shape=doubleoctagon" } else { "" };
        let _ = writeln!(s, "  c{i} [label=\"{} len {}\"{shape}];", c.class.name(), c.len());
    }
    for &(a, b, k) in &graph.edges {
        let _ = writeln!(s, "  c{} -- c{} [label=\"{k}\"];", graph.nodes[a], graph.nodes[b]);
    }
    s.push_str("}\n");
    s
}

/// Chains drawn on the grid: each chain's edges tagged with its position in
/// the chain list.
pub fn chains_ascii(grid: &GammaGrid, chains: &[FacetChain]) -> String {
    let mut out = ascii(grid, None);
    out.push('\n');
    for (i, c) in chains.iter().enumerate() {
        let edges: Vec<String> = c.facets.iter().map(|&f| grid.edge(grid.facet_edge(f)).to_string()).collect();
        let _ = writeln!(out, "{i:>3} {:<6} {}", c.class.name(), edges.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::{build_chain_graph, partition_chains};
    use crate::partition::MultiplicityVector;
    use crate::skeleton::build_skeleton;

    fn grid(v: &[usize]) -> GammaGrid {
        GammaGrid::build(&MultiplicityVector::new(v.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn segment_ascii() {
        let g = grid(&[1, 1]);
        assert_eq!(ascii(&g, None), "o\n|\n.---o\n|   |\n.---.---o\n");
    }

    #[test]
    fn staircase_rows_shrink() {
        let g = grid(&[2, 1, 2, 3, 1]);
        let text = ascii(&g, None);
        let points: Vec<usize> = text.lines().step_by(2).map(|l| l.matches(['.', 'o']).count()).collect();
        assert_eq!(points.len(), 10);
        assert!(points.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(points.iter().sum::<usize>(), g.points().len());
    }

    #[test]
    fn skeleton_dot_counts() {
        let g = grid(&[1, 1, 1]);
        let sk = build_skeleton(&g, 100).unwrap();
        let dot = skeleton_dot(&g, &sk);
        assert_eq!(dot.matches("[label=").count(), 7);
        assert_eq!(dot.matches(" -- ").count(), sk.edge_count());
    }

    #[test]
    fn svg_is_closed() {
        let g = grid(&[2, 2]);
        let s = svg(&g, None, "a<b");
        assert!(s.starts_with("<svg") && s.ends_with("</svg>\n"));
        assert!(s.contains("a&lt;b"));
        assert_eq!(s.matches("<line").count(), g.edges().len());
    }

    #[test]
    fn chain_tree_dot() {
        let g = grid(&[5, 4]);
        let chains = partition_chains(&g).unwrap();
        let graph = build_chain_graph(&g, &chains).unwrap();
        let dot = chains_dot(&g, &chains, &graph);
        assert_eq!(dot.matches(" -- ").count(), graph.nodes.len() - 1);
        assert!(dot.contains("doubleoctagon"));
    }
}
