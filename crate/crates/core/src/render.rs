//! Static SVG and ASCII renderings of diagrams, plabic graphs, permutations, lattice-path
//! pairs, Dyck paths, binary trees and plane partitions.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::catalan::{young_rows, BinaryTree, DyckPath, PathPair, PlanePartition, Step};
use crate::diagrams::{BorderStep, OPlusDiagram};
use crate::permutations::{Color, DecoratedPermutation};
use crate::plabic::{PlabicGraph, VertexKind};

const CELL: f64 = 30.0;
const MARGIN: f64 = 24.0;

fn svg_open(width: f64, height: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.0} {h:.0}\" \
         font-family=\"sans-serif\" font-size=\"12\">\n",
        w = width,
        h = height
    )
}

fn line(out: &mut String, x1: f64, y1: f64, x2: f64, y2: f64, style: &str) {
    let _ = writeln!(
        out,
        "<line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" {style}/>"
    );
}

fn text(out: &mut String, x: f64, y: f64, s: &str) {
    let _ = writeln!(
        out,
        "<text x=\"{x:.2}\" y=\"{y:.2}\" text-anchor=\"middle\" dominant-baseline=\"central\">{s}</text>"
    );
}

fn circle(out: &mut String, x: f64, y: f64, r: f64, fill: &str) {
    let _ = writeln!(
        out,
        "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"{r:.1}\" fill=\"{fill}\" stroke=\"black\"/>"
    );
}

fn polyline(out: &mut String, pts: &[(f64, f64)], style: &str) {
    let pts: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
    let _ = writeln!(
        out,
        "<polyline points=\"{}\" fill=\"none\" {style}/>",
        pts.join(" ")
    );
}

// ---------------------------------------------------------------------------------------
// Diagrams

/// The diagram in its `k × (n-k)` rectangle: boxes with `+` or `0`, southeast border labels.
pub fn diagram_svg(d: &OPlusDiagram) -> String {
    let (k, w) = (d.k(), d.width());
    let mut out = svg_open(
        2.0 * MARGIN + CELL * w as f64,
        2.0 * MARGIN + CELL * k as f64,
    );
    let (x0, y0) = (MARGIN, MARGIN);
    let _ = writeln!(
        out,
        "<rect x=\"{x0}\" y=\"{y0}\" width=\"{:.0}\" height=\"{:.0}\" fill=\"none\" stroke=\"#bbb\" stroke-dasharray=\"3,3\"/>",
        CELL * w as f64,
        CELL * k as f64
    );
    for (r, row) in d.rows().iter().enumerate() {
        for (c, &plus) in row.iter().enumerate() {
            let (x, y) = (x0 + CELL * c as f64, y0 + CELL * r as f64);
            let _ = writeln!(
                out,
                "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{CELL}\" height=\"{CELL}\" fill=\"white\" stroke=\"black\"/>"
            );
            text(
                &mut out,
                x + CELL / 2.0,
                y + CELL / 2.0,
                if plus { "+" } else { "0" },
            );
        }
    }
    for (j, step) in d.border().iter().enumerate() {
        let label = (j + 1).to_string();
        match *step {
            BorderStep::H { col, row_below } => text(
                &mut out,
                x0 + CELL * (col as f64 + 0.5),
                y0 + CELL * row_below as f64 + 10.0,
                &label,
            ),
            BorderStep::V { row, x } => text(
                &mut out,
                x0 + CELL * x as f64 + 10.0,
                y0 + CELL * (row as f64 + 0.5),
                &label,
            ),
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Boxed grid of the diagram; empty rows are shown as `.`.
pub fn diagram_ascii(d: &OPlusDiagram) -> String {
    let mut out = format!("k={} n={}\n", d.k(), d.n());
    for row in d.rows() {
        if row.is_empty() {
            out.push_str(".\n");
            continue;
        }
        let sep: String = "+---".repeat(row.len()) + "+";
        let cells: String = row
            .iter()
            .map(|&p| if p { "| + " } else { "| 0 " })
            .collect::<String>()
            + "|";
        let _ = writeln!(out, "{sep}\n{cells}");
    }
    if let Some(last) = d.rows().iter().rev().find(|r| !r.is_empty()) {
        let _ = writeln!(out, "{}+", "+---".repeat(last.len()));
    }
    out
}

// ---------------------------------------------------------------------------------------
// Plabic graphs and permutations

fn boundary_position(i: usize, n: usize, radius: f64, center: f64) -> (f64, f64) {
    // Label 1 at the top, increasing clockwise.
    let theta = PI / 2.0 - 2.0 * PI * (i as f64 - 1.0) / n as f64;
    (center + radius * theta.cos(), center - radius * theta.sin())
}

/// Vertex positions: boundary vertices on a circle, internal vertices by barycentric
/// (Tutte) relaxation, lollipops pulled inward from their boundary vertex.
pub fn graph_layout(g: &PlabicGraph, radius: f64, center: f64) -> Vec<(f64, f64)> {
    let nv = g.vertex_count();
    let mut pos = vec![(center, center); nv];
    let mut fixed = vec![false; nv];
    for i in 1..=g.n() {
        let b = g.boundary_vertex(i);
        pos[b] = boundary_position(i, g.n(), radius, center);
        fixed[b] = true;
    }
    let mut nbrs = vec![Vec::new(); nv];
    for &[u, v] in g.edges() {
        nbrs[u].push(v);
        nbrs[v].push(u);
    }
    for _ in 0..400 {
        for v in 0..nv {
            if fixed[v] || nbrs[v].is_empty() {
                continue;
            }
            let (sx, sy) = nbrs[v]
                .iter()
                .fold((0.0, 0.0), |(a, b), &u| (a + pos[u].0, b + pos[u].1));
            let len = nbrs[v].len() as f64;
            pos[v] = (sx / len, sy / len);
        }
    }
    for v in 0..nv {
        if !fixed[v] && nbrs[v].len() == 1 {
            let (x, y) = pos[nbrs[v][0]];
            pos[v] = (center + 0.8 * (x - center), center + 0.8 * (y - center));
        }
    }
    pos
}

/// The graph in a disk with boundary vertices on the circle, labeled clockwise from the top.
pub fn graph_svg(g: &PlabicGraph) -> String {
    let size = 320.0;
    let (center, radius) = (size / 2.0, size / 2.0 - 2.0 * MARGIN);
    let pos = graph_layout(g, radius, center);
    let mut out = svg_open(size, size);
    let _ = writeln!(
        out,
        "<circle cx=\"{center}\" cy=\"{center}\" r=\"{radius}\" fill=\"none\" stroke=\"#bbb\"/>"
    );
    for &[u, v] in g.edges() {
        line(
            &mut out,
            pos[u].0,
            pos[u].1,
            pos[v].0,
            pos[v].1,
            "stroke=\"black\" stroke-width=\"1.5\"",
        );
    }
    for (v, &(x, y)) in pos.iter().enumerate() {
        match g.kind(v) {
            VertexKind::Boundary(i) => {
                circle(&mut out, x, y, 2.0, "black");
                let (lx, ly) = boundary_position(i, g.n(), radius + 14.0, center);
                text(&mut out, lx, ly, &i.to_string());
            }
            VertexKind::Internal(Color::Black) => circle(&mut out, x, y, 6.0, "black"),
            VertexKind::Internal(Color::White) => circle(&mut out, x, y, 6.0, "white"),
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Vertex and edge listing with rotations.
pub fn graph_ascii(g: &PlabicGraph) -> String {
    format!("{g}\n")
}

/// Chord diagram `i → π(i)` on a circle; fixed points are drawn as filled (black) or hollow
/// (white) markers.
pub fn permutation_svg(p: &DecoratedPermutation) -> String {
    let size = 320.0;
    let (center, radius) = (size / 2.0, size / 2.0 - 2.0 * MARGIN);
    let n = p.n();
    let mut out = svg_open(size, size);
    out.push_str(
        "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" \
         orient=\"auto-start-reverse\"><path d=\"M 0 0 L 10 5 L 0 10 z\"/></marker></defs>\n",
    );
    let _ = writeln!(
        out,
        "<circle cx=\"{center}\" cy=\"{center}\" r=\"{radius}\" fill=\"none\" stroke=\"#bbb\"/>"
    );
    for i in 1..=n {
        let (x, y) = boundary_position(i, n, radius, center);
        let (lx, ly) = boundary_position(i, n, radius + 14.0, center);
        text(&mut out, lx, ly, &i.to_string());
        match p.color(i) {
            Some(Color::Black) => circle(&mut out, x, y, 5.0, "black"),
            Some(Color::White) => circle(&mut out, x, y, 5.0, "white"),
            None => {
                let (tx, ty) = boundary_position(p.image(i), n, radius, center);
                let _ = writeln!(
                    out,
                    "<path d=\"M {x:.2} {y:.2} Q {center} {center} {tx:.2} {ty:.2}\" fill=\"none\" stroke=\"black\" marker-end=\"url(#arrow)\"/>"
                );
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

pub fn permutation_ascii(p: &DecoratedPermutation) -> String {
    let mut out = format!("{p}\n");
    for i in 1..=p.n() {
        let mark = match p.color(i) {
            Some(Color::Black) => " (black)",
            Some(Color::White) => " (white)",
            None => "",
        };
        let _ = writeln!(out, "{i} -> {}{mark}", p.image(i));
    }
    out
}

// ---------------------------------------------------------------------------------------
// Lattice paths

fn path_points(word: &[Step], b: usize, x0: f64, y0: f64) -> Vec<(f64, f64)> {
    let (mut x, mut y) = (b as f64, 0.0);
    let mut pts = vec![(x0 + CELL * x, y0 + CELL * y)];
    for s in word {
        match s {
            Step::H => x -= 1.0,
            Step::V => y += 1.0,
        }
        pts.push((x0 + CELL * x, y0 + CELL * y));
    }
    pts
}

/// The `k × b` rectangle with the region between the two paths shaded, the upper path in
/// blue and the lower path in red.
pub fn path_pair_svg(p: &PathPair) -> String {
    let (k, b) = (p.k(), p.b());
    let mut out = svg_open(
        2.0 * MARGIN + CELL * b as f64,
        2.0 * MARGIN + CELL * k as f64,
    );
    let (x0, y0) = (MARGIN, MARGIN);
    let (yu, yl) = (young_rows(p.wu(), b), young_rows(p.wl(), b));
    for r in 0..k {
        for c in yu[r]..yl[r] {
            let _ = writeln!(
                out,
                "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{CELL}\" height=\"{CELL}\" fill=\"#ddd\"/>",
                x0 + CELL * c as f64,
                y0 + CELL * r as f64
            );
        }
    }
    for i in 0..=b {
        let x = x0 + CELL * i as f64;
        line(&mut out, x, y0, x, y0 + CELL * k as f64, "stroke=\"#bbb\"");
    }
    for j in 0..=k {
        let y = y0 + CELL * j as f64;
        line(&mut out, x0, y, x0 + CELL * b as f64, y, "stroke=\"#bbb\"");
    }
    polyline(
        &mut out,
        &path_points(p.wu(), b, x0, y0),
        "stroke=\"blue\" stroke-width=\"3\"",
    );
    polyline(
        &mut out,
        &path_points(p.wl(), b, x0, y0),
        "stroke=\"red\" stroke-width=\"2\" stroke-dasharray=\"6,3\"",
    );
    out.push_str("</svg>\n");
    out
}

/// The rectangle with `#` between the paths and `.` elsewhere, followed by both words.
pub fn path_pair_ascii(p: &PathPair) -> String {
    let (k, b) = (p.k(), p.b());
    let (yu, yl) = (young_rows(p.wu(), b), young_rows(p.wl(), b));
    let mut out = String::new();
    for r in 0..k {
        let row: String = (0..b)
            .map(|c| if yu[r] <= c && c < yl[r] { '#' } else { '.' })
            .collect();
        let _ = writeln!(out, "{row}");
    }
    let _ = writeln!(out, "{p}");
    out
}

/// The Dyck path as a polyline over its grid.
pub fn dyck_svg(p: &DyckPath) -> String {
    let len = p.steps().len();
    let heights = p.heights();
    let top = heights.iter().copied().max().unwrap_or(0) as f64;
    let unit = CELL / 1.5;
    let mut out = svg_open(
        2.0 * MARGIN + unit * len as f64,
        2.0 * MARGIN + unit * top.max(1.0),
    );
    let base = MARGIN + unit * top;
    line(
        &mut out,
        MARGIN,
        base,
        MARGIN + unit * len as f64,
        base,
        "stroke=\"#bbb\"",
    );
    let pts: Vec<(f64, f64)> = heights
        .iter()
        .enumerate()
        .map(|(i, &h)| (MARGIN + unit * i as f64, base - unit * h as f64))
        .collect();
    polyline(&mut out, &pts, "stroke=\"black\" stroke-width=\"2\"");
    for &(x, y) in &pts {
        circle(&mut out, x, y, 2.0, "black");
    }
    out.push_str("</svg>\n");
    out
}

/// Mountain drawing with `/` and `\`.
pub fn dyck_ascii(p: &DyckPath) -> String {
    let heights = p.heights();
    let top = heights.iter().copied().max().unwrap_or(0) as usize;
    let len = p.steps().len();
    let mut grid = vec![vec![' '; len]; top.max(1)];
    for (i, &up) in p.steps().iter().enumerate() {
        let level = if up { heights[i] } else { heights[i + 1] } as usize;
        grid[top - 1 - level][i] = if up { '/' } else { '\\' };
    }
    let mut out: String = grid
        .iter()
        .map(|r| r.iter().collect::<String>().trim_end().to_string() + "\n")
        .collect();
    let _ = writeln!(out, "{p}");
    out
}

// ---------------------------------------------------------------------------------------
// Trees and plane partitions

fn tree_layout(
    t: &BinaryTree,
    depth: usize,
    next_leaf: &mut usize,
    out: &mut Vec<(f64, f64, Option<char>, usize)>,
) -> usize {
    // Entries: (x, depth, label of the edge from the parent, parent index).
    let me = out.len();
    out.push((0.0, depth as f64, None, usize::MAX));
    match t {
        BinaryTree::Leaf => {
            out[me].0 = *next_leaf as f64;
            *next_leaf += 1;
        }
        BinaryTree::Node(h, v) => {
            let hi = tree_layout(h, depth + 1, next_leaf, out);
            let vi = tree_layout(v, depth + 1, next_leaf, out);
            out[hi].2 = Some('H');
            out[hi].3 = me;
            out[vi].2 = Some('V');
            out[vi].3 = me;
            out[me].0 = (out[hi].0 + out[vi].0) / 2.0;
        }
    }
    me
}

/// The tree drawn top-down with leaves evenly spaced; edges carry their `H`/`V` label.
pub fn tree_svg(t: &BinaryTree) -> String {
    let mut nodes = Vec::new();
    tree_layout(t, 0, &mut 0, &mut nodes);
    let leaves = t.leaf_count().max(1) as f64;
    let depth = nodes.iter().map(|n| n.1).fold(0.0, f64::max);
    let mut out = svg_open(
        2.0 * MARGIN + CELL * leaves,
        2.0 * MARGIN + CELL * (depth + 1.0),
    );
    let at = |x: f64, d: f64| (MARGIN + CELL * (x + 0.5), MARGIN + CELL * (d + 0.5));
    for n in &nodes {
        if let Some(label) = n.2 {
            let p = &nodes[n.3];
            let ((x1, y1), (x2, y2)) = (at(p.0, p.1), at(n.0, n.1));
            line(&mut out, x1, y1, x2, y2, "stroke=\"black\"");
            text(
                &mut out,
                (x1 + x2) / 2.0 + if label == 'H' { -8.0 } else { 8.0 },
                (y1 + y2) / 2.0,
                &label.to_string(),
            );
        }
    }
    for n in &nodes {
        let (x, y) = at(n.0, n.1);
        circle(&mut out, x, y, 3.0, "black");
    }
    out.push_str("</svg>\n");
    out
}

/// Indented outline: `H`/`V` edges, `*` for leaves.
pub fn tree_ascii(t: &BinaryTree) -> String {
    fn go(t: &BinaryTree, prefix: &str, label: &str, out: &mut String) {
        match t {
            BinaryTree::Leaf => {
                let _ = writeln!(out, "{prefix}{label}*");
            }
            BinaryTree::Node(h, v) => {
                let _ = writeln!(out, "{prefix}{label}o");
                let inner = format!("{prefix}  ");
                go(h, &inner, "H-", out);
                go(v, &inner, "V-", out);
            }
        }
    }
    let mut out = String::new();
    go(t, "", "", &mut out);
    let _ = writeln!(out, "{t}");
    out
}

/// The entries of the plane partition in its `a × b` grid.
pub fn plane_partition_svg(pp: &PlanePartition) -> String {
    let mut out = svg_open(
        2.0 * MARGIN + CELL * pp.b.max(1) as f64,
        2.0 * MARGIN + CELL * pp.a.max(1) as f64,
    );
    for r in 0..pp.a {
        for c in 0..pp.b {
            let (x, y) = (MARGIN + CELL * c as f64, MARGIN + CELL * r as f64);
            let e = pp.entry(r, c);
            let shade = 255 - (200 * e / pp.c.max(1)) as u8;
            let _ = writeln!(
                out,
                "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{CELL}\" height=\"{CELL}\" fill=\"rgb({shade},{shade},255)\" stroke=\"black\"/>"
            );
            text(&mut out, x + CELL / 2.0, y + CELL / 2.0, &e.to_string());
        }
    }
    out.push_str("</svg>\n");
    out
}

pub fn plane_partition_ascii(pp: &PlanePartition) -> String {
    let mut out = format!("a={} b={} c={}\n", pp.a, pp.b, pp.c);
    for r in 0..pp.a {
        let row: Vec<String> = (0..pp.b).map(|c| pp.entry(r, c).to_string()).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}
