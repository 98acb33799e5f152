//! Plabic graphs as rotation systems: trip permutations, the k-statistic, split and
//! blow-up moves, the BCFW recursions, and the graph and network of a Le-diagram.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::diagrams::OPlusDiagram;
use crate::error::{Error, Result};
use crate::permutations::{Color, DecoratedPermutation};

/// A vertex is either a boundary vertex carrying its label or a coloured internal vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexKind {
    Boundary(usize),
    Internal(Color),
}

/// A planar bicoloured graph embedded in a disk.
///
/// Half-edge `h` is the end `edges[h / 2][h % 2]`; its twin is `h ^ 1`. `rot[v]` lists the
/// half-edges at `v` in clockwise order. Boundary vertices `1..=n` sit clockwise on the disk.
#[derive(Debug, Clone)]
pub struct PlabicGraph {
    kinds: Vec<VertexKind>,
    edges: Vec<[usize; 2]>,
    rot: Vec<Vec<usize>>,
    boundary: Vec<usize>,
}

impl PartialEq for PlabicGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n() == other.n() && self.canonical_key() == other.canonical_key()
    }
}

impl Eq for PlabicGraph {}

impl Hash for PlabicGraph {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical_key().hash(state);
    }
}

#[derive(Serialize, Deserialize)]
struct InternalJson {
    id: String,
    color: Color,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    internal: Vec<InternalJson>,
    edges: Vec<[String; 2]>,
    rotation: BTreeMap<String, Vec<usize>>,
}

/// Incremental construction of a graph; rotations are filled in by the caller.
#[derive(Default)]
struct Builder {
    kinds: Vec<VertexKind>,
    edges: Vec<[usize; 2]>,
    rot: Vec<Vec<usize>>,
}

impl Builder {
    fn vertex(&mut self, kind: VertexKind) -> usize {
        self.kinds.push(kind);
        self.rot.push(Vec::new());
        self.kinds.len() - 1
    }

    /// Adds edge `u–v`; returns the half-edges at `u` and at `v`.
    fn edge(&mut self, u: usize, v: usize) -> (usize, usize) {
        self.edges.push([u, v]);
        let h = 2 * (self.edges.len() - 1);
        (h, h + 1)
    }

    fn finish(self) -> Result<PlabicGraph> {
        let n = self
            .kinds
            .iter()
            .filter(|k| matches!(k, VertexKind::Boundary(_)))
            .count();
        let mut boundary = vec![usize::MAX; n];
        for (v, k) in self.kinds.iter().enumerate() {
            if let VertexKind::Boundary(i) = *k {
                if i == 0 || i > n || boundary[i - 1] != usize::MAX {
                    return Err(Error::Invalid(format!("boundary labels are not 1..{n}")));
                }
                boundary[i - 1] = v;
            }
        }
        let g = PlabicGraph {
            kinds: self.kinds,
            edges: self.edges,
            rot: self.rot,
            boundary,
        };
        g.validate()?;
        Ok(g)
    }
}

impl PlabicGraph {
    /// Builds and validates a graph from explicit data.
    pub fn from_parts(
        kinds: Vec<VertexKind>,
        edges: Vec<[usize; 2]>,
        rot: Vec<Vec<usize>>,
    ) -> Result<Self> {
        Builder { kinds, edges, rot }.finish()
    }

    pub fn n(&self) -> usize {
        self.boundary.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.kinds.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn kind(&self, v: usize) -> VertexKind {
        self.kinds[v]
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rot[v]
    }

    pub fn boundary_vertex(&self, i: usize) -> usize {
        self.boundary[i - 1]
    }

    /// Vertex at which half-edge `h` sits.
    pub fn head(&self, h: usize) -> usize {
        self.edges[h / 2][h % 2]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rot[v].len()
    }

    pub fn black_count(&self) -> usize {
        self.kinds
            .iter()
            .filter(|k| **k == VertexKind::Internal(Color::Black))
            .count()
    }

    pub fn white_degree_excess(&self) -> usize {
        (0..self.kinds.len())
            .filter(|&v| self.kinds[v] == VertexKind::Internal(Color::White))
            .map(|v| self.degree(v) - 1)
            .sum()
    }

    /// `#edges − #black − Σ_white (deg − 1)`.
    pub fn k_statistic(&self) -> usize {
        self.edge_count()
            .checked_sub(self.black_count() + self.white_degree_excess())
            .expect("k-statistic is nonnegative for plabic graphs")
    }

    fn validate(&self) -> Result<()> {
        let nv = self.kinds.len();
        if self.rot.len() != nv {
            return Err(Error::Invalid("rotation missing for some vertex".into()));
        }
        let mut seen = vec![false; 2 * self.edges.len()];
        for (v, r) in self.rot.iter().enumerate() {
            for &h in r {
                if h >= seen.len() || seen[h] || self.head(h) != v {
                    return Err(Error::Invalid(format!(
                        "bad half-edge {h} in rotation of {v}"
                    )));
                }
                seen[h] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Invalid(
                "some half-edge is missing from the rotations".into(),
            ));
        }
        for (i, &b) in self.boundary.iter().enumerate() {
            if self.degree(b) != 1 {
                return Err(Error::Invalid(format!(
                    "boundary vertex {} has degree {}",
                    i + 1,
                    self.degree(b)
                )));
            }
        }
        for v in 0..nv {
            if matches!(self.kinds[v], VertexKind::Internal(_)) && self.degree(v) == 0 {
                return Err(Error::Invalid("isolated internal vertex".into()));
            }
        }
        // Close the disk with the boundary cycle and check connectivity and Euler's formula.
        let n = self.n();
        if n < 2 {
            return self.check_connected_from_boundary();
        }
        let mut edges = self.edges.clone();
        let mut rot = self.rot.clone();
        let base = edges.len();
        for i in 0..n {
            edges.push([self.boundary[i], self.boundary[(i + 1) % n]]);
        }
        for i in 0..n {
            let b = self.boundary[i];
            let next = 2 * (base + i);
            let prev = 2 * (base + (i + n - 1) % n) + 1;
            let inner = rot[b][0];
            rot[b] = vec![next, inner, prev];
        }
        let head = |h: usize| edges[h / 2][h % 2];
        let mut pos = vec![0usize; 2 * edges.len()];
        for r in &rot {
            for (p, &h) in r.iter().enumerate() {
                pos[h] = p;
            }
        }
        let mut visited = vec![false; 2 * edges.len()];
        let mut faces = 0;
        for start in 0..visited.len() {
            if visited[start] {
                continue;
            }
            faces += 1;
            let mut h = start;
            while !visited[h] {
                visited[h] = true;
                let t = h ^ 1;
                let r = &rot[head(t)];
                h = r[(pos[t] + 1) % r.len()];
            }
        }
        self.check_connected_from_boundary()?;
        let euler = nv as isize - edges.len() as isize + faces as isize;
        if euler != 2 {
            return Err(Error::Invalid(format!(
                "rotation system is not planar (V-E+F = {euler})"
            )));
        }
        Ok(())
    }

    fn check_connected_from_boundary(&self) -> Result<()> {
        let mut seen = vec![false; self.kinds.len()];
        let mut queue: VecDeque<usize> = self.boundary.iter().copied().collect();
        for &b in &self.boundary {
            seen[b] = true;
        }
        while let Some(v) = queue.pop_front() {
            for &h in &self.rot[v] {
                let u = self.head(h ^ 1);
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        if seen.iter().all(|&s| s) {
            Ok(())
        } else {
            Err(Error::Invalid(
                "some internal vertex is not connected to the boundary".into(),
            ))
        }
    }

    /// Boundary-anchored canonical serialization. Vertices are numbered in order of discovery
    /// by a breadth-first search from boundary vertices `1..n`, reading each rotation from the
    /// half-edge of first arrival; two graphs are equal iff their keys coincide.
    pub fn canonical_key(&self) -> Vec<u32> {
        let nv = self.kinds.len();
        let mut order = vec![usize::MAX; nv];
        let mut entry = vec![usize::MAX; nv];
        let mut queue = VecDeque::new();
        let mut next = 0;
        for &b in &self.boundary {
            order[b] = next;
            entry[b] = self.rot[b][0];
            next += 1;
            queue.push_back(b);
        }
        let mut discovered = Vec::with_capacity(nv);
        while let Some(v) = queue.pop_front() {
            discovered.push(v);
            let r = &self.rot[v];
            let start = r.iter().position(|&h| h == entry[v]).unwrap_or(0);
            for j in 0..r.len() {
                let t = r[(start + j) % r.len()] ^ 1;
                let u = self.head(t);
                if order[u] == usize::MAX {
                    order[u] = next;
                    entry[u] = t;
                    next += 1;
                    queue.push_back(u);
                }
            }
        }
        let mut key = vec![self.n() as u32, nv as u32];
        for &v in &discovered {
            key.push(match self.kinds[v] {
                VertexKind::Boundary(i) => 2 + i as u32,
                VertexKind::Internal(Color::Black) => 0,
                VertexKind::Internal(Color::White) => 1,
            });
            let r = &self.rot[v];
            key.push(r.len() as u32);
            let start = r.iter().position(|&h| h == entry[v]).unwrap_or(0);
            for j in 0..r.len() {
                let t = r[(start + j) % r.len()] ^ 1;
                let u = self.head(t);
                let ru = &self.rot[u];
                let su = ru.iter().position(|&h| h == entry[u]).unwrap_or(0);
                let pu = ru.iter().position(|&h| h == t).expect("twin in rotation");
                key.push(order[u] as u32);
                key.push(((pu + ru.len() - su) % ru.len()) as u32);
            }
        }
        key
    }

    /// Follows the trip from boundary `i`; returns the end label and whether it bounced off a
    /// lollipop, together with that lollipop's colour.
    fn trip(&self, i: usize) -> (usize, Option<Color>) {
        let mut h = self.rot[self.boundary[i - 1]][0];
        let mut lollipop = None;
        loop {
            let t = h ^ 1;
            let v = self.head(t);
            match self.kinds[v] {
                VertexKind::Boundary(j) => return (j, lollipop),
                VertexKind::Internal(color) => {
                    let r = &self.rot[v];
                    let d = r.len();
                    if d == 1 {
                        lollipop = Some(color);
                        h = t;
                        continue;
                    }
                    let p = r.iter().position(|&x| x == t).expect("twin in rotation");
                    h = match color {
                        Color::Black => r[(p + d - 1) % d],
                        Color::White => r[(p + 1) % d],
                    };
                }
            }
        }
    }

    /// The trip permutation: right at black vertices, left at white ones.
    pub fn trip_permutation(&self) -> Result<DecoratedPermutation> {
        let n = self.n();
        let mut images = Vec::with_capacity(n);
        let mut white = Vec::new();
        for i in 1..=n {
            let (j, lollipop) = self.trip(i);
            if j == i {
                match lollipop {
                    None => return Err(Error::NonLollipopFixedPoint(i)),
                    Some(Color::White) => white.push(i),
                    Some(Color::Black) => {}
                }
            }
            images.push(j);
        }
        DecoratedPermutation::new(images, &white)
    }

    /// The unique internal vertex attached to boundary `i`, with the half-edge from it to `i`.
    fn attachment(&self, i: usize) -> Result<(usize, usize)> {
        if i == 0 || i > self.n() {
            return Err(Error::BadBoundary(i));
        }
        let t = self.rot[self.boundary[i - 1]][0] ^ 1;
        Ok((self.head(t), t))
    }

    /// Colour of the internal vertex attached to boundary `i`, if it is internal.
    pub fn attached_color(&self, i: usize) -> Option<Color> {
        let (v, _) = self.attachment(i).ok()?;
        match self.kinds[v] {
            VertexKind::Internal(c) => Some(c),
            VertexKind::Boundary(_) => None,
        }
    }

    fn shifted_label(label: usize, after: usize) -> usize {
        if label > after {
            label + 1
        } else {
            label
        }
    }

    /// Replaces the edge at boundary `i` by a trivalent vertex of the given colour joined to
    /// new adjacent boundary vertices `i`, `i+1`; labels beyond `i` increase by one.
    pub fn split(&self, i: usize, color: Color) -> Result<Self> {
        let (_, t) = self.attachment(i)?;
        let h_e = t ^ 1;
        let old_b = self.boundary[i - 1];
        let mut b = Builder {
            kinds: self.kinds.clone(),
            edges: self.edges.clone(),
            rot: self.rot.clone(),
        };
        for k in b.kinds.iter_mut() {
            if let VertexKind::Boundary(j) = k {
                *j = Self::shifted_label(*j, i);
            }
        }
        let v = b.vertex(VertexKind::Internal(color));
        b.edges[h_e / 2][h_e % 2] = v;
        let new_b = b.vertex(VertexKind::Boundary(i + 1));
        let (hv_i, hb_i) = b.edge(v, old_b);
        let (hv_next, hb_next) = b.edge(v, new_b);
        b.rot[old_b] = vec![hb_i];
        b.rot[new_b] = vec![hb_next];
        b.rot[v] = vec![h_e, hv_i, hv_next];
        b.finish()
    }

    /// Replaces the trivalent vertex `v` attached to boundary `i` by a square whose black
    /// corner meets `i` and whose white corner meets the new boundary `i+1`.
    pub fn blow_up(&self, i: usize) -> Result<Self> {
        let (v, t) = self.attachment(i)?;
        if !matches!(self.kinds[v], VertexKind::Internal(_)) || self.degree(v) != 3 {
            return Err(Error::BadAttachment(i));
        }
        let r = &self.rot[v];
        let p = r.iter().position(|&x| x == t).expect("twin in rotation");
        let (h_i, h_l, h_r) = (r[p], r[(p + 1) % 3], r[(p + 2) % 3]);
        let mut g = Builder {
            kinds: self.kinds.clone(),
            edges: self.edges.clone(),
            rot: self.rot.clone(),
        };
        for k in g.kinds.iter_mut() {
            if let VertexKind::Boundary(j) = k {
                *j = Self::shifted_label(*j, i);
            }
        }
        let a = v;
        g.kinds[a] = VertexKind::Internal(Color::Black);
        let b = g.vertex(VertexKind::Internal(Color::White));
        let c = g.vertex(VertexKind::Internal(Color::Black));
        let d = g.vertex(VertexKind::Internal(Color::White));
        let bn = g.vertex(VertexKind::Boundary(i + 1));
        g.edges[h_r / 2][h_r % 2] = b;
        g.edges[h_i / 2][h_i % 2] = c;
        let (ab_a, ab_b) = g.edge(a, b);
        let (ad_a, ad_d) = g.edge(a, d);
        let (bc_b, bc_c) = g.edge(b, c);
        let (cd_c, cd_d) = g.edge(c, d);
        let (db_d, db_b) = g.edge(d, bn);
        g.rot[a] = vec![h_l, ab_a, ad_a];
        g.rot[b] = vec![h_r, bc_b, ab_b];
        g.rot[c] = vec![bc_c, h_i, cd_c];
        g.rot[d] = vec![ad_d, cd_d, db_d];
        g.rot[bn] = vec![db_b];
        g.finish()
    }

    /// Inverse of [`blow_up`](Self::blow_up) at `i`, restoring the collapsed vertex with the
    /// given colour; `None` if no blown-up square sits at `i`, `i+1`.
    pub fn blow_down(&self, i: usize, color: Color) -> Option<Self> {
        if i == 0 || i + 1 > self.n() {
            return None;
        }
        let is =
            |v: usize, c: Color| self.kinds[v] == VertexKind::Internal(c) && self.degree(v) == 3;
        let from = |v: usize, h: usize| -> [usize; 3] {
            let r = &self.rot[v];
            let p = r.iter().position(|&x| x == h).expect("half-edge at vertex");
            [r[p], r[(p + 1) % 3], r[(p + 2) % 3]]
        };
        let (c, t_c) = self.attachment(i).ok()?;
        if !is(c, Color::Black) {
            return None;
        }
        let [h_i, cd_c, cb_c] = from(c, t_c);
        let (d, t_d) = self.attachment(i + 1).ok()?;
        if !is(d, Color::White) || self.head(cd_c ^ 1) != d {
            return None;
        }
        let [_, da_d, dc_d] = from(d, t_d);
        if dc_d != cd_c ^ 1 {
            return None;
        }
        let a = self.head(da_d ^ 1);
        let b = self.head(cb_c ^ 1);
        if !is(a, Color::Black) || !is(b, Color::White) {
            return None;
        }
        let [_, ba_b, h_r] = from(b, cb_c ^ 1);
        if self.head(ba_b ^ 1) != a {
            return None;
        }
        let [_, h_l, ab_a] = from(a, da_d ^ 1);
        if ab_a != ba_b ^ 1 {
            return None;
        }
        let verts = [a, b, c, d];
        if (0..4).any(|x| (x + 1..4).any(|y| verts[x] == verts[y])) {
            return None;
        }
        // Rebuild without b, c, d, boundary i+1 and the five square/leg edges.
        let b_next = self.boundary[i];
        let dead_v = [b, c, d, b_next];
        let dead_e = [ab_a / 2, da_d / 2, cb_c / 2, cd_c / 2, t_d / 2];
        let mut edges = self.edges.clone();
        let mut rot = self.rot.clone();
        edges[h_i / 2][h_i % 2] = a;
        edges[h_r / 2][h_r % 2] = a;
        rot[a] = vec![h_i, h_l, h_r];
        let mut kinds = self.kinds.clone();
        kinds[a] = VertexKind::Internal(color);
        for k in kinds.iter_mut() {
            if let VertexKind::Boundary(j) = k {
                if *j > i + 1 {
                    *j -= 1;
                }
            }
        }
        Self::compact(kinds, edges, rot, &dead_v, &dead_e).ok()
    }

    fn compact(
        kinds: Vec<VertexKind>,
        edges: Vec<[usize; 2]>,
        rot: Vec<Vec<usize>>,
        dead_v: &[usize],
        dead_e: &[usize],
    ) -> Result<Self> {
        let mut vmap = vec![usize::MAX; kinds.len()];
        let mut b = Builder::default();
        for (v, k) in kinds.iter().enumerate() {
            if !dead_v.contains(&v) {
                vmap[v] = b.vertex(*k);
            }
        }
        let mut emap = vec![usize::MAX; edges.len()];
        for (e, ends) in edges.iter().enumerate() {
            if !dead_e.contains(&e) {
                emap[e] = b.edges.len();
                b.edges.push([vmap[ends[0]], vmap[ends[1]]]);
            }
        }
        for (v, r) in rot.iter().enumerate() {
            if vmap[v] != usize::MAX {
                b.rot[vmap[v]] = r.iter().map(|&h| 2 * emap[h / 2] + h % 2).collect();
            }
        }
        b.finish()
    }

    /// The `n = 4` square: boundaries `1..4` attached alternately to white and black corners.
    pub fn base_square() -> Self {
        let mut g = Builder::default();
        let bs: Vec<usize> = (1..=4).map(|i| g.vertex(VertexKind::Boundary(i))).collect();
        let colors = [Color::White, Color::Black, Color::White, Color::Black];
        let iv: Vec<usize> = colors
            .iter()
            .map(|&c| g.vertex(VertexKind::Internal(c)))
            .collect();
        let legs: Vec<(usize, usize)> = (0..4).map(|j| g.edge(iv[j], bs[j])).collect();
        let sides: Vec<(usize, usize)> = (0..4).map(|j| g.edge(iv[j], iv[(j + 1) % 4])).collect();
        for j in 0..4 {
            g.rot[bs[j]] = vec![legs[j].1];
        }
        // i1: [b1, i2, i4]; i2: [i1, b2, i3]; i3: [i2, b3, i4]; i4: [b4, i1, i3].
        g.rot[iv[0]] = vec![legs[0].0, sides[0].0, sides[3].1];
        g.rot[iv[1]] = vec![sides[0].1, legs[1].0, sides[1].0];
        g.rot[iv[2]] = vec![sides[1].1, legs[2].0, sides[2].0];
        g.rot[iv[3]] = vec![legs[3].0, sides[3].0, sides[2].1];
        g.finish().expect("base square is valid")
    }

    /// The `n = 2` graph: a single edge joining the two boundary vertices.
    pub fn single_edge() -> Self {
        let mut g = Builder::default();
        let b1 = g.vertex(VertexKind::Boundary(1));
        let b2 = g.vertex(VertexKind::Boundary(2));
        let (h1, h2) = g.edge(b1, b2);
        g.rot[b1] = vec![h1];
        g.rot[b2] = vec![h2];
        g.finish().expect("single edge is valid")
    }

    /// The caterpillar: a path `v_1 – … – v_{n-2}` with `v_1` joined to boundaries `1, 2`,
    /// `v_j` to `j+1`, and `v_{n-2}` to `n-1, n`; `colors[j-1]` colours `v_j`.
    pub fn caterpillar(colors: &[Color]) -> Result<Self> {
        let len = colors.len();
        if len == 0 {
            return Ok(Self::single_edge());
        }
        let n = len + 2;
        let mut g = Builder::default();
        let bs: Vec<usize> = (1..=n).map(|i| g.vertex(VertexKind::Boundary(i))).collect();
        let vs: Vec<usize> = colors
            .iter()
            .map(|&c| g.vertex(VertexKind::Internal(c)))
            .collect();
        let leg = |g: &mut Builder, v: usize, label: usize| {
            let (hv, hb) = g.edge(v, bs[label - 1]);
            g.rot[bs[label - 1]] = vec![hb];
            hv
        };
        if len == 1 {
            let hs: Vec<usize> = (1..=3).map(|l| leg(&mut g, vs[0], l)).collect();
            g.rot[vs[0]] = hs;
            return g.finish();
        }
        let spine: Vec<(usize, usize)> = (0..len - 1).map(|j| g.edge(vs[j], vs[j + 1])).collect();
        let h1 = leg(&mut g, vs[0], 1);
        let h2 = leg(&mut g, vs[0], 2);
        g.rot[vs[0]] = vec![h1, h2, spine[0].0];
        for j in 1..len - 1 {
            let h = leg(&mut g, vs[j], j + 2);
            g.rot[vs[j]] = vec![spine[j - 1].1, h, spine[j].0];
        }
        let hl1 = leg(&mut g, vs[len - 1], n - 1);
        let hl2 = leg(&mut g, vs[len - 1], n);
        g.rot[vs[len - 1]] = vec![spine[len - 2].1, hl1, hl2];
        g.finish()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let name = |v: usize| match self.kinds[v] {
            VertexKind::Boundary(i) => format!("b{i}"),
            VertexKind::Internal(_) => format!("v{v}"),
        };
        let internal = (0..self.kinds.len())
            .filter_map(|v| match self.kinds[v] {
                VertexKind::Internal(color) => Some(InternalJson { id: name(v), color }),
                VertexKind::Boundary(_) => None,
            })
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|e| [name(e[0]), name(e[1])])
            .collect();
        let rotation = (0..self.kinds.len())
            .map(|v| (name(v), self.rot[v].clone()))
            .collect();
        serde_json::to_value(GraphJson {
            n: self.n(),
            internal,
            edges,
            rotation,
        })
        .expect("serializable")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let j: GraphJson =
            serde_json::from_value(value.clone()).map_err(|e| Error::Invalid(e.to_string()))?;
        let mut ids: HashMap<String, usize> = HashMap::new();
        let mut kinds = Vec::new();
        for i in 1..=j.n {
            ids.insert(format!("b{i}"), kinds.len());
            kinds.push(VertexKind::Boundary(i));
        }
        for v in &j.internal {
            if ids.insert(v.id.clone(), kinds.len()).is_some() {
                return Err(Error::Invalid(format!("duplicate vertex id {}", v.id)));
            }
            kinds.push(VertexKind::Internal(v.color));
        }
        let lookup = |s: &str| {
            ids.get(s)
                .copied()
                .ok_or_else(|| Error::Invalid(format!("unknown vertex {s}")))
        };
        let edges = j
            .edges
            .iter()
            .map(|[a, b]| Ok([lookup(a)?, lookup(b)?]))
            .collect::<Result<Vec<_>>>()?;
        let mut rot = vec![Vec::new(); kinds.len()];
        for (name, r) in &j.rotation {
            rot[lookup(name)?] = r.clone();
        }
        Self::from_parts(kinds, edges, rot)
    }
}

impl fmt::Display for PlabicGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

fn sorted_unique(mut gs: Vec<PlabicGraph>) -> Vec<PlabicGraph> {
    let mut keyed: Vec<(Vec<u32>, PlabicGraph)> =
        gs.drain(..).map(|g| (g.canonical_key(), g)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.dedup_by(|a, b| a.0 == b.0);
    keyed.into_iter().map(|(_, g)| g).collect()
}

/// `G̃_{n,k,4}` for all `k` at once, indexed by `k`.
fn bcfw4_level(n: usize) -> Result<BTreeMap<usize, Vec<PlabicGraph>>> {
    let mut level = BTreeMap::new();
    level.insert(2, vec![PlabicGraph::base_square()]);
    for size in 5..=n {
        let mut next: BTreeMap<usize, Vec<PlabicGraph>> = BTreeMap::new();
        for graphs in level.values() {
            for g in graphs {
                for i in 2..=size - 2 {
                    let h = g.blow_up(i)?;
                    next.entry(h.k_statistic()).or_default().push(h);
                }
            }
        }
        level = next
            .into_iter()
            .map(|(k, gs)| (k, sorted_unique(gs)))
            .collect();
    }
    Ok(level)
}

/// `G̃_{n,k,2}` for all `k` at once, indexed by `k`.
fn bcfw2_level(n: usize) -> Result<BTreeMap<usize, Vec<PlabicGraph>>> {
    let mut level = BTreeMap::new();
    level.insert(1, vec![PlabicGraph::single_edge()]);
    for size in 3..=n {
        let mut next: BTreeMap<usize, Vec<PlabicGraph>> = BTreeMap::new();
        for (&k, graphs) in &level {
            for g in graphs {
                next.entry(k)
                    .or_default()
                    .push(g.split(size - 1, Color::White)?);
                next.entry(k + 1)
                    .or_default()
                    .push(g.split(size - 1, Color::Black)?);
            }
        }
        level = next
            .into_iter()
            .map(|(k, gs)| (k, sorted_unique(gs)))
            .collect();
    }
    Ok(level)
}

/// `G̃_{n,k,m}` for `m ∈ {2, 4}`, deduplicated and sorted by canonical key.
pub fn enumerate_bcfw_graphs(n: usize, k: usize, m: usize) -> Result<Vec<PlabicGraph>> {
    match m {
        4 if n >= 4 && (2..=n - 2).contains(&k) => {
            Ok(bcfw4_level(n)?.remove(&k).unwrap_or_default())
        }
        2 if n >= 2 && (1..=n - 1).contains(&k) => {
            Ok(bcfw2_level(n)?.remove(&k).unwrap_or_default())
        }
        _ => Err(Error::BadRange(format!(
            "no BCFW graphs for n={n}, k={k}, m={m}"
        ))),
    }
}

/// `G̃_{n,k,m}` for every `k` in one pass of the recursion, indexed by `k`.
pub fn bcfw_graphs_by_k(n: usize, m: usize) -> Result<BTreeMap<usize, Vec<PlabicGraph>>> {
    match m {
        4 if n >= 4 => bcfw4_level(n),
        2 if n >= 2 => bcfw2_level(n),
        _ => Err(Error::BadRange(format!("no BCFW graphs for n={n}, m={m}"))),
    }
}

/// `Π_{n,k,m}`: the shifted trip permutations of `G̃_{n,k+m/2,m}`, sorted.
pub fn bcfw_permutations(n: usize, k: usize, m: usize) -> Result<Vec<DecoratedPermutation>> {
    if !(m == 2 || m == 4) || k + m > n {
        return Err(Error::BadRange(format!(
            "need m in {{2,4}} and 0 <= k <= n-m; got n={n}, k={k}, m={m}"
        )));
    }
    let shift = m / 2;
    let mut perms = enumerate_bcfw_graphs(n, k + shift, m)?
        .iter()
        .map(|g| Ok(g.trip_permutation()?.left_shift(shift)))
        .collect::<Result<Vec<_>>>()?;
    perms.sort();
    perms.dedup();
    Ok(perms)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Port {
    N,
    E,
    S,
    W,
}

impl Port {
    fn angle(self) -> i32 {
        match self {
            Port::N => 90,
            Port::E => 0,
            Port::S => -90,
            Port::W => 180,
        }
    }
}

fn require_le(d: &OPlusDiagram) -> Result<()> {
    if d.is_le_diagram() {
        Ok(())
    } else {
        Err(Error::NotLe)
    }
}

fn next_plus_right(d: &OPlusDiagram, r: usize, c: usize) -> Option<usize> {
    (c + 1..d.rows()[r].len()).find(|&x| d.is_plus(r, x))
}

fn next_plus_below(d: &OPlusDiagram, r: usize, c: usize) -> Option<usize> {
    (r + 1..d.k())
        .take_while(|&y| d.has_box(y, c))
        .find(|&y| d.is_plus(y, c))
}

fn has_plus_left(d: &OPlusDiagram, r: usize, c: usize) -> bool {
    (0..c).any(|x| d.is_plus(r, x))
}

fn has_plus_above(d: &OPlusDiagram, r: usize, c: usize) -> bool {
    (0..r).any(|y| d.is_plus(y, c))
}

/// `G(D)`: the plabic graph of a Le-diagram built from its hook diagram, with lollipops at
/// the labels of empty rows (white) and empty columns (black).
pub fn graph_from_le(d: &OPlusDiagram) -> Result<PlabicGraph> {
    require_le(d)?;
    let pd = d.pipe_dream();
    let mut g = Builder::default();
    let bs: Vec<usize> = (1..=d.n())
        .map(|i| g.vertex(VertexKind::Boundary(i)))
        .collect();
    // (vertex, angle) for every port of every + that owns a vertex.
    let mut owner: HashMap<(usize, usize, u8), usize> = HashMap::new();
    let mut half_edges: Vec<Vec<(i32, usize)>> = Vec::new();
    let port_id = |p: Port| p as u8;
    let mut pass_through = Vec::new();
    for r in 0..d.k() {
        for c in 0..d.rows()[r].len() {
            if !d.is_plus(r, c) {
                continue;
            }
            let w = has_plus_left(d, r, c);
            let nn = has_plus_above(d, r, c);
            match (nn, w) {
                (false, false) => pass_through.push((r, c)),
                (false, true) => {
                    let v = g.vertex(VertexKind::Internal(Color::White));
                    for p in [Port::W, Port::E, Port::S] {
                        owner.insert((r, c, port_id(p)), v);
                    }
                }
                (true, false) => {
                    let v = g.vertex(VertexKind::Internal(Color::Black));
                    for p in [Port::N, Port::E, Port::S] {
                        owner.insert((r, c, port_id(p)), v);
                    }
                }
                (true, true) => {
                    let b = g.vertex(VertexKind::Internal(Color::Black));
                    let wv = g.vertex(VertexKind::Internal(Color::White));
                    owner.insert((r, c, port_id(Port::N)), b);
                    owner.insert((r, c, port_id(Port::E)), b);
                    owner.insert((r, c, port_id(Port::S)), wv);
                    owner.insert((r, c, port_id(Port::W)), wv);
                    half_edges.resize(g.kinds.len(), Vec::new());
                    let (hb, hw) = g.edge(b, wv);
                    half_edges[b].push((-135, hb));
                    half_edges[wv].push((45, hw));
                }
            }
        }
    }
    half_edges.resize(g.kinds.len(), Vec::new());
    // Endpoint targets: (vertex, angle at that vertex).
    let east_target = |r: usize, c: usize| -> (usize, i32) {
        match next_plus_right(d, r, c) {
            Some(x) => (owner[&(r, x, port_id(Port::W))], Port::W.angle()),
            None => (bs[pd.row_labels[r] - 1], 0),
        }
    };
    let south_target = |r: usize, c: usize| -> (usize, i32) {
        match next_plus_below(d, r, c) {
            Some(y) => (owner[&(y, c, port_id(Port::N))], Port::N.angle()),
            None => (bs[pd.column_labels[c] - 1], 0),
        }
    };
    let mut links: Vec<((usize, i32), (usize, i32))> = Vec::new();
    for r in 0..d.k() {
        for c in 0..d.rows()[r].len() {
            if !d.is_plus(r, c) {
                continue;
            }
            let e = east_target(r, c);
            let s = south_target(r, c);
            if pass_through.contains(&(r, c)) {
                links.push((e, s));
            } else {
                links.push(((owner[&(r, c, port_id(Port::E))], Port::E.angle()), e));
                links.push(((owner[&(r, c, port_id(Port::S))], Port::S.angle()), s));
            }
        }
    }
    for r in 0..d.k() {
        if !d.rows()[r].iter().any(|&p| p) {
            let v = g.vertex(VertexKind::Internal(Color::White));
            half_edges.resize(g.kinds.len(), Vec::new());
            links.push(((v, 0), (bs[pd.row_labels[r] - 1], 0)));
        }
    }
    for c in 0..d.width() {
        if !(0..d.k()).any(|r| d.is_plus(r, c)) {
            let v = g.vertex(VertexKind::Internal(Color::Black));
            half_edges.resize(g.kinds.len(), Vec::new());
            links.push(((v, 0), (bs[pd.column_labels[c] - 1], 0)));
        }
    }
    for ((u, au), (v, av)) in links {
        let (hu, hv) = g.edge(u, v);
        half_edges[u].push((au, hu));
        half_edges[v].push((av, hv));
    }
    for (v, mut hs) in half_edges.into_iter().enumerate() {
        hs.sort_by_key(|&(angle, _)| std::cmp::Reverse(angle));
        g.rot[v] = hs.into_iter().map(|(_, h)| h).collect();
    }
    g.finish()
}

/// A horizontal hook edge, identified by the `+` at its west end; its variable is
/// `a_{index+1}` with the numbering row by row, east to west.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeVariable {
    pub row: usize,
    pub col: usize,
    /// Position counted from the east end of the row, starting at 1.
    pub position_from_east: usize,
}

/// The hook network of a Le-diagram: paths travel west and south along hooks, horizontal
/// edges carry the variables, and the sources are the labels of the vertical border steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    diagram: OPlusDiagram,
    variables: Vec<EdgeVariable>,
    sources: Vec<usize>,
}

/// `N(D)` for a Le-diagram.
pub fn build_network(d: &OPlusDiagram) -> Result<Network> {
    require_le(d)?;
    let mut variables = Vec::new();
    for r in 0..d.k() {
        let pluses: Vec<usize> = (0..d.rows()[r].len())
            .filter(|&c| d.is_plus(r, c))
            .rev()
            .collect();
        for (j, &c) in pluses.iter().enumerate() {
            variables.push(EdgeVariable {
                row: r,
                col: c,
                position_from_east: j + 1,
            });
        }
    }
    Ok(Network {
        diagram: d.clone(),
        variables,
        sources: d.vertical_labels(),
    })
}

impl Network {
    pub fn diagram(&self) -> &OPlusDiagram {
        &self.diagram
    }

    pub fn variables(&self) -> &[EdgeVariable] {
        &self.variables
    }

    pub fn variable_count(&self) -> usize {
        self.variables.len()
    }

    pub fn sources(&self) -> &[usize] {
        &self.sources
    }

    /// `path_sums[i][j-1]`: the sum over directed paths from source `s_i` to boundary `j` of
    /// the product of edge weights (unsigned; no identity entries).
    pub fn path_sums(&self, vals: &[BigRational]) -> Result<Vec<Vec<BigRational>>> {
        if vals.len() < self.variables.len() {
            return Err(Error::MissingVariable(format!("a{}", vals.len() + 1)));
        }
        let d = &self.diagram;
        let pd = d.pipe_dream();
        let mut var_of = HashMap::new();
        for (idx, v) in self.variables.iter().enumerate() {
            var_of.insert((v.row, v.col), idx);
        }
        let n = d.n();
        // reach[(r,c)]: vector over labels of path sums from the + at (r,c).
        let mut reach: HashMap<(usize, usize), Vec<BigRational>> = HashMap::new();
        // Rows bottom to top, and left to right within a row, so every continuation is ready.
        for r in (0..d.k()).rev() {
            for c in 0..d.rows()[r].len() {
                if !d.is_plus(r, c) {
                    continue;
                }
                let mut acc = vec![BigRational::zero(); n];
                match next_plus_below(d, r, c) {
                    Some(y) => add_into(&mut acc, &reach[&(y, c)], &BigRational::one()),
                    None => acc[pd.column_labels[c] - 1] += BigRational::one(),
                }
                if let Some(x) = (0..c).rev().find(|&x| d.is_plus(r, x)) {
                    let w = &vals[var_of[&(r, x)]];
                    add_into(&mut acc, &reach[&(r, x)], w);
                }
                reach.insert((r, c), acc);
            }
        }
        Ok((0..d.k())
            .map(
                |r| match (0..d.rows()[r].len()).rev().find(|&c| d.is_plus(r, c)) {
                    Some(c) => {
                        let mut out = vec![BigRational::zero(); n];
                        add_into(&mut out, &reach[&(r, c)], &vals[var_of[&(r, c)]]);
                        out
                    }
                    None => vec![BigRational::zero(); n],
                },
            )
            .collect())
    }
}

fn add_into(acc: &mut [BigRational], v: &[BigRational], w: &BigRational) {
    for (a, b) in acc.iter_mut().zip(v) {
        if !b.is_zero() {
            *a += b * w;
        }
    }
}
