//! Catalan families indexing BCFW cells (binary trees, noncrossing lattice-path pairs,
//! Dyck paths), the bijections among them and to plabic graphs, and plane partitions.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::permutations::Color;
use crate::plabic::PlabicGraph;

/// A lattice step read from the northeast corner: `H` goes west, `V` goes south.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Step {
    H,
    V,
}

pub fn parse_word(s: &str) -> Result<Vec<Step>> {
    s.chars()
        .map(|c| match c {
            'H' | 'h' => Ok(Step::H),
            'V' | 'v' => Ok(Step::V),
            _ => Err(Error::Invalid(format!("bad lattice step {c:?}"))),
        })
        .collect()
}

pub fn word_string(w: &[Step]) -> String {
    w.iter()
        .map(|s| if *s == Step::H { 'H' } else { 'V' })
        .collect()
}

/// `#H` before the `i`-th `V` of a word, for each `V`.
pub fn row_offsets(word: &[Step]) -> Vec<usize> {
    let mut h = 0;
    let mut out = Vec::new();
    for s in word {
        match s {
            Step::H => h += 1,
            Step::V => out.push(h),
        }
    }
    out
}

/// Row lengths of the Young diagram northwest of the path in a rectangle of width `b`.
pub fn young_rows(word: &[Step], b: usize) -> Vec<usize> {
    row_offsets(word).into_iter().map(|h| b - h).collect()
}

/// Every prefix of `wl` has at least as many `V`'s as the same prefix of `wu`.
pub fn is_noncrossing(wu: &[Step], wl: &[Step]) -> bool {
    let (mut vu, mut vl) = (0usize, 0usize);
    for (a, b) in wu.iter().zip(wl) {
        vu += (*a == Step::V) as usize;
        vl += (*b == Step::V) as usize;
        if vl < vu {
            return false;
        }
    }
    true
}

/// A pair of noncrossing lattice paths in the `k × b` rectangle, `b = n - k - m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathPair {
    k: usize,
    b: usize,
    m: usize,
    wu: Vec<Step>,
    wl: Vec<Step>,
}

#[derive(Serialize, Deserialize)]
struct PathPairJson {
    n: usize,
    k: usize,
    #[serde(default = "default_m")]
    m: usize,
    wu: String,
    wl: String,
}

fn default_m() -> usize {
    4
}

impl PathPair {
    pub fn new(k: usize, b: usize, m: usize, wu: Vec<Step>, wl: Vec<Step>) -> Result<Self> {
        for w in [&wu, &wl] {
            if w.len() != k + b || w.iter().filter(|&&s| s == Step::V).count() != k {
                return Err(Error::Invalid(format!(
                    "word {} does not fit a {k} × {b} rectangle",
                    word_string(w)
                )));
            }
        }
        let p = PathPair { k, b, m, wu, wl };
        p.check_noncrossing()?;
        Ok(p)
    }

    pub fn from_words(n: usize, k: usize, m: usize, wu: &str, wl: &str) -> Result<Self> {
        if k + m > n {
            return Err(Error::BadRange(format!(
                "need k <= n-m, got n={n}, k={k}, m={m}"
            )));
        }
        Self::new(k, n - k - m, m, parse_word(wu)?, parse_word(wl)?)
    }

    pub fn check_noncrossing(&self) -> Result<()> {
        if is_noncrossing(&self.wu, &self.wl) {
            Ok(())
        } else {
            Err(Error::Crossing(format!(
                "W_L = {} is not weakly below W_U = {}",
                word_string(&self.wl),
                word_string(&self.wu)
            )))
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }
    pub fn b(&self) -> usize {
        self.b
    }
    pub fn m(&self) -> usize {
        self.m
    }
    pub fn n(&self) -> usize {
        self.k + self.b + self.m
    }
    pub fn wu(&self) -> &[Step] {
        &self.wu
    }
    pub fn wl(&self) -> &[Step] {
        &self.wl
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(PathPairJson {
            n: self.n(),
            k: self.k,
            m: self.m,
            wu: word_string(&self.wu),
            wl: word_string(&self.wl),
        })
        .expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let p: PathPairJson =
            serde_json::from_value(v.clone()).map_err(|e| Error::Invalid(e.to_string()))?;
        Self::from_words(p.n, p.k, p.m, &p.wu, &p.wl)
    }
}

impl fmt::Display for PathPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", word_string(&self.wu), word_string(&self.wl))
    }
}

/// All words with `k` V's and `b` H's.
pub fn lattice_words(k: usize, b: usize) -> Vec<Vec<Step>> {
    crate::util::binary_words(k + b, k)
        .into_iter()
        .map(|w| {
            w.into_iter()
                .map(|v| if v { Step::V } else { Step::H })
                .collect()
        })
        .collect()
}

/// The set `L_{n,k,m}` of noncrossing pairs in the `k × (n-k-m)` rectangle.
pub fn enumerate_path_pairs(n: usize, k: usize, m: usize) -> Result<Vec<PathPair>> {
    if k + m > n {
        return Err(Error::BadRange(format!(
            "need k <= n-m, got n={n}, k={k}, m={m}"
        )));
    }
    let b = n - k - m;
    let words = lattice_words(k, b);
    let mut out = Vec::new();
    for wu in &words {
        for wl in &words {
            if is_noncrossing(wu, wl) {
                out.push(PathPair {
                    k,
                    b,
                    m,
                    wu: wu.clone(),
                    wl: wl.clone(),
                });
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------------------
// Binary trees

/// A complete binary tree; each internal node has a horizontal and a vertical child.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinaryTree {
    Leaf,
    Node(Box<BinaryTree>, Box<BinaryTree>),
}

impl BinaryTree {
    pub fn node(h: BinaryTree, v: BinaryTree) -> Self {
        BinaryTree::Node(Box::new(h), Box::new(v))
    }

    /// The tree with a root and two leaves (`n = 4`, `k = 0`).
    pub fn base() -> Self {
        Self::node(BinaryTree::Leaf, BinaryTree::Leaf)
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, BinaryTree::Leaf)
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            BinaryTree::Leaf => 1,
            BinaryTree::Node(h, v) => h.leaf_count() + v.leaf_count(),
        }
    }

    /// Boundary size: leaves are labelled `2..=n-1`.
    pub fn n(&self) -> usize {
        self.leaf_count() + 2
    }

    /// Orientation of each leaf in label order: `H` if it is a horizontal child.
    pub fn leaf_orientations(&self) -> Vec<Step> {
        fn go(t: &BinaryTree, dir: Step, out: &mut Vec<Step>) {
            match t {
                BinaryTree::Leaf => out.push(dir),
                BinaryTree::Node(h, v) => {
                    go(h, Step::H, out);
                    go(v, Step::V, out);
                }
            }
        }
        let mut out = Vec::new();
        if let BinaryTree::Node(h, v) = self {
            go(h, Step::H, &mut out);
            go(v, Step::V, &mut out);
        }
        out
    }

    /// `k = (#horizontal leaves) - 1`.
    pub fn k(&self) -> usize {
        self.leaf_orientations()
            .iter()
            .filter(|&&s| s == Step::H)
            .count()
            - 1
    }

    /// Swaps horizontal and vertical children everywhere.
    pub fn reflect(&self) -> Self {
        match self {
            BinaryTree::Leaf => BinaryTree::Leaf,
            BinaryTree::Node(h, v) => Self::node(v.reflect(), h.reflect()),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            BinaryTree::Leaf => serde_json::json!([]),
            BinaryTree::Node(h, v) => serde_json::json!([h.to_json(), v.to_json()]),
        }
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Invalid("tree node must be an array".into()))?;
        match arr.len() {
            0 => Ok(BinaryTree::Leaf),
            2 => Ok(Self::node(
                Self::from_json(&arr[0])?,
                Self::from_json(&arr[1])?,
            )),
            _ => Err(Error::Invalid("tree node must have 0 or 2 children".into())),
        }
    }

    /// Replaces the leaf with the given 0-based position by `t`.
    fn replace_leaf(&self, pos: usize, t: &BinaryTree) -> Self {
        fn go(cur: &BinaryTree, pos: usize, t: &BinaryTree, seen: &mut usize) -> BinaryTree {
            match cur {
                BinaryTree::Leaf => {
                    *seen += 1;
                    if *seen - 1 == pos {
                        t.clone()
                    } else {
                        BinaryTree::Leaf
                    }
                }
                BinaryTree::Node(h, v) => {
                    let h2 = go(h, pos, t, seen);
                    let v2 = go(v, pos, t, seen);
                    BinaryTree::node(h2, v2)
                }
            }
        }
        go(self, pos, t, &mut 0)
    }

    /// Positions `p` (0-based leaf index) of non-root internal nodes whose children are both
    /// leaves; the cherry covers leaf labels `p+2` and `p+3`.
    pub fn cherries(&self) -> Vec<usize> {
        fn go(t: &BinaryTree, is_root: bool, offset: &mut usize, out: &mut Vec<usize>) {
            match t {
                BinaryTree::Leaf => *offset += 1,
                BinaryTree::Node(h, v) => {
                    if !is_root && h.is_leaf() && v.is_leaf() {
                        out.push(*offset);
                    }
                    go(h, false, offset, out);
                    go(v, false, offset, out);
                }
            }
        }
        let mut out = Vec::new();
        go(self, true, &mut 0, &mut out);
        out
    }

    /// Collapses the cherry at leaf position `p` to a single leaf.
    fn collapse_cherry(&self, p: usize) -> Self {
        fn go(t: &BinaryTree, p: usize, is_root: bool, offset: &mut usize) -> BinaryTree {
            match t {
                BinaryTree::Leaf => {
                    *offset += 1;
                    BinaryTree::Leaf
                }
                BinaryTree::Node(h, v) => {
                    if !is_root && h.is_leaf() && v.is_leaf() && *offset == p {
                        *offset += 2;
                        return BinaryTree::Leaf;
                    }
                    let h2 = go(h, p, false, offset);
                    let v2 = go(v, p, false, offset);
                    BinaryTree::node(h2, v2)
                }
            }
        }
        go(self, p, true, &mut 0)
    }
}

impl fmt::Display for BinaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

impl FromStr for BinaryTree {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let v: serde_json::Value =
            serde_json::from_str(s).map_err(|e| Error::Invalid(e.to_string()))?;
        Self::from_json(&v)
    }
}

/// All complete binary trees with `leaves` leaves.
pub fn trees_with_leaves(leaves: usize) -> Vec<BinaryTree> {
    let mut memo: Vec<Vec<BinaryTree>> = vec![Vec::new(), vec![BinaryTree::Leaf]];
    for l in 2..=leaves.max(1) {
        let mut level = Vec::new();
        for a in 1..l {
            for h in &memo[a] {
                for v in &memo[l - a] {
                    level.push(BinaryTree::node(h.clone(), v.clone()));
                }
            }
        }
        memo.push(level);
    }
    memo.get(leaves).cloned().unwrap_or_default()
}

/// The set `𝒯_{n,k,4}` of trees with `n-2` leaves and `k+1` horizontal leaves.
pub fn enumerate_trees(n: usize, k: usize) -> Result<Vec<BinaryTree>> {
    if n < 4 || k + 4 > n {
        return Err(Error::BadRange(format!(
            "need 0 <= k <= n-4, got n={n}, k={k}"
        )));
    }
    Ok(trees_with_leaves(n - 2)
        .into_iter()
        .filter(|t| t.k() == k)
        .collect())
}

/// `Ω_TL` via the recursive definition.
pub fn omega_tl(t: &BinaryTree) -> Result<PathPair> {
    fn words(t: &BinaryTree) -> (Vec<Step>, Vec<Step>) {
        let BinaryTree::Node(h, v) = t else {
            unreachable!("root is internal")
        };
        match (h.as_ref(), v.as_ref()) {
            (BinaryTree::Leaf, BinaryTree::Leaf) => (Vec::new(), Vec::new()),
            (BinaryTree::Node(..), BinaryTree::Leaf) => {
                let (u, l) = words(h);
                let mut wu = vec![Step::H];
                wu.extend(u);
                let mut wl = l;
                wl.push(Step::H);
                (wu, wl)
            }
            (BinaryTree::Leaf, BinaryTree::Node(..)) => {
                let (u, l) = words(v);
                let mut wu = vec![Step::V];
                wu.extend(u);
                let mut wl = vec![Step::V];
                wl.extend(l);
                (wu, wl)
            }
            (BinaryTree::Node(..), BinaryTree::Node(..)) => {
                let (mut u1, mut l1) = words(&BinaryTree::node((**h).clone(), BinaryTree::Leaf));
                let (u2, l2) = words(&BinaryTree::node(BinaryTree::Leaf, (**v).clone()));
                u1.extend(u2);
                l1.extend(l2);
                (u1, l1)
            }
        }
    }
    tree_path_pair(t, words)
}

/// `Ω_TL` via the read-off: `W_U` lists internal edges depth-first (horizontal child
/// first), `W_L` lists leaves `3..=n-2`, writing `H` for a vertical leaf and `V` for a
/// horizontal one.
pub fn omega_tl_readoff(t: &BinaryTree) -> Result<PathPair> {
    tree_path_pair(t, |t| {
        fn dfs(t: &BinaryTree, out: &mut Vec<Step>) {
            if let BinaryTree::Node(h, v) = t {
                if !h.is_leaf() {
                    out.push(Step::H);
                    dfs(h, out);
                }
                if !v.is_leaf() {
                    out.push(Step::V);
                    dfs(v, out);
                }
            }
        }
        let mut wu = Vec::new();
        dfs(t, &mut wu);
        let leaves = t.leaf_orientations();
        let wl = leaves[1..leaves.len() - 1]
            .iter()
            .map(|&s| if s == Step::V { Step::H } else { Step::V })
            .collect();
        (wu, wl)
    })
}

fn tree_path_pair(
    t: &BinaryTree,
    words: impl Fn(&BinaryTree) -> (Vec<Step>, Vec<Step>),
) -> Result<PathPair> {
    if t.is_leaf() {
        return Err(Error::Invalid("the root must be internal".into()));
    }
    let n = t.n();
    let k = t.k();
    let (wu, wl) = words(t);
    PathPair::new(k, n - k - 4, 4, wu, wl)
}

/// `G(T)`: the square for the base tree; otherwise collapse a non-root cherry `(i, i+1)`
/// to leaf `i` and blow up the resulting graph at `i`.
pub fn tree_to_graph(t: &BinaryTree) -> Result<PlabicGraph> {
    tree_to_graph_with(t, |cs| cs[0])
}

/// [`tree_to_graph`] collapsing the cherry chosen by `pick` at every stage.
pub fn tree_to_graph_with(
    t: &BinaryTree,
    mut pick: impl FnMut(&[usize]) -> usize,
) -> Result<PlabicGraph> {
    fn go(t: &BinaryTree, pick: &mut dyn FnMut(&[usize]) -> usize) -> Result<PlabicGraph> {
        if t.is_leaf() {
            return Err(Error::Invalid("the root must be internal".into()));
        }
        let cherries = t.cherries();
        if cherries.is_empty() {
            if *t == BinaryTree::base() {
                return Ok(PlabicGraph::base_square());
            }
            // A tree with no non-root cherry is the base tree.
            unreachable!("every larger complete binary tree has a non-root cherry");
        }
        let p = pick(&cherries);
        let smaller = t.collapse_cherry(p);
        go(&smaller, pick)?.blow_up(p + 2)
    }
    go(t, &mut pick)
}

/// Inverse of [`tree_to_graph`], by repeatedly blowing down squares at adjacent boundary
/// vertices and reading off the tree.
pub fn graph_to_tree(g: &PlabicGraph) -> Result<BinaryTree> {
    let mut memo = HashMap::new();
    let t = graph_to_tree_rec(g, &mut memo).ok_or(Error::NotBcfwGraph)?;
    if tree_to_graph(&t)? == *g {
        Ok(t)
    } else {
        Err(Error::NotBcfwGraph)
    }
}

fn graph_to_tree_rec(
    g: &PlabicGraph,
    memo: &mut HashMap<Vec<u32>, Option<BinaryTree>>,
) -> Option<BinaryTree> {
    let key = g.canonical_key();
    if let Some(r) = memo.get(&key) {
        return r.clone();
    }
    let result = if g.n() == 4 {
        (*g == PlabicGraph::base_square()).then(BinaryTree::base)
    } else if g.n() < 4 {
        None
    } else {
        let mut found = None;
        'outer: for i in 2..=g.n() - 2 {
            for color in [Color::Black, Color::White] {
                if let Some(smaller) = g.blow_down(i, color) {
                    if let Some(t) = graph_to_tree_rec(&smaller, memo) {
                        let orient = t.leaf_orientations()[i - 2];
                        let expect = if color == Color::Black {
                            Step::H
                        } else {
                            Step::V
                        };
                        if orient == expect {
                            found = Some(t.replace_leaf(i - 2, &BinaryTree::base()));
                            break 'outer;
                        }
                    }
                }
            }
        }
        found
    };
    memo.insert(key, result.clone());
    result
}

// ---------------------------------------------------------------------------------------
// Dyck paths

/// A Dyck path as a sequence of steps, `true` for an up step.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyckPath {
    steps: Vec<bool>,
}

impl DyckPath {
    pub fn new(steps: Vec<bool>) -> Result<Self> {
        let mut h: i64 = 0;
        for &s in &steps {
            h += if s { 1 } else { -1 };
            if h < 0 {
                return Err(Error::Invalid("Dyck path dips below the axis".into()));
            }
        }
        if h != 0 {
            return Err(Error::Invalid(
                "Dyck path does not return to the axis".into(),
            ));
        }
        Ok(DyckPath { steps })
    }

    pub fn steps(&self) -> &[bool] {
        &self.steps
    }

    pub fn semilength(&self) -> usize {
        self.steps.len() / 2
    }

    /// Boundary size of the BCFW cells it labels: `n = semilength + 3`.
    pub fn n(&self) -> usize {
        self.semilength() + 3
    }

    pub fn k(&self) -> usize {
        self.semilength() - self.peaks()
    }

    pub fn peaks(&self) -> usize {
        self.steps.windows(2).filter(|w| w[0] && !w[1]).count()
    }

    /// Heights at lattice points `0..=len`.
    pub fn heights(&self) -> Vec<i64> {
        let mut h = vec![0];
        for &s in &self.steps {
            let last = *h.last().unwrap();
            h.push(last + if s { 1 } else { -1 });
        }
        h
    }

    /// `UD` word, as used in JSON.
    pub fn to_ud(&self) -> String {
        self.steps
            .iter()
            .map(|&s| if s { 'U' } else { 'D' })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_ud())
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        v.as_str()
            .ok_or_else(|| Error::Invalid("Dyck path must be a string".into()))?
            .parse()
    }
}

impl fmt::Display for DyckPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self
            .steps
            .iter()
            .map(|&s| if s { '+' } else { '-' })
            .collect();
        write!(f, "{s}")
    }
}

impl FromStr for DyckPath {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let steps = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '+' | 'U' | 'u' => Ok(true),
                '-' | '−' | 'D' | 'd' => Ok(false),
                _ => Err(Error::Invalid(format!("bad Dyck step {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        DyckPath::new(steps)
    }
}

/// The set `𝒫_{n,k,4}`: Dyck paths with `2(n-3)` steps and `n-3-k` peaks.
pub fn enumerate_dyck(n: usize, k: usize) -> Result<Vec<DyckPath>> {
    if n < 4 || k + 4 > n {
        return Err(Error::BadRange(format!(
            "need 0 <= k <= n-4, got n={n}, k={k}"
        )));
    }
    let s = n - 3;
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(2 * s);
    fn go(s: usize, up: usize, down: usize, cur: &mut Vec<bool>, out: &mut Vec<Vec<bool>>) {
        if up == s && down == s {
            out.push(cur.clone());
            return;
        }
        if up < s {
            cur.push(true);
            go(s, up + 1, down, cur, out);
            cur.pop();
        }
        if down < up {
            cur.push(false);
            go(s, up, down + 1, cur, out);
            cur.pop();
        }
    }
    let mut raw = Vec::new();
    go(s, 0, 0, &mut cur, &mut raw);
    for steps in raw {
        let p = DyckPath { steps };
        if p.peaks() == s - k {
            out.push(p);
        }
    }
    Ok(out)
}

/// `Ω_LP`: the recursive map from path pairs to Dyck paths.
pub fn omega_lp(paths: &PathPair) -> Result<DyckPath> {
    paths.check_noncrossing()?;
    fn p(wu: &[Step], wl: &[Step], out: &mut Vec<bool>) {
        if wu.is_empty() && wl.is_empty() {
            out.extend([true, false]);
            return;
        }
        if wu.first() == Some(&Step::V) && wl.first() == Some(&Step::V) {
            out.push(true);
            p(&wu[1..], &wl[1..], out);
            out.push(false);
            return;
        }
        let b = wu.iter().filter(|&&s| s == Step::H).count();
        let mut hu = row_offsets(wu);
        let mut hl = row_offsets(wl);
        hu.push(b);
        hl.push(b);
        let i = (0..hu.len())
            .find(|&i| hu[i] == hl[i])
            .expect("rows end together");
        let pos = hu[i] + i;
        p(&wu[1..pos], &wl[..pos - 1], out);
        p(&wu[pos..], &wl[pos..], out);
    }
    let mut steps = Vec::new();
    p(&paths.wu, &paths.wl, &mut steps);
    DyckPath::new(steps)
}

/// `shadow_p(P)` for the point at step index `t`: the waterline of the inverted path
/// filled without submerging `p`.
pub fn shadow(path: &DyckPath, t: usize) -> Vec<i64> {
    let h = path.heights();
    let mut s = h.clone();
    for x in (0..t).rev() {
        s[x] = s[x + 1].min(h[x]);
    }
    for x in t + 1..h.len() {
        s[x] = s[x - 1].min(h[x]);
    }
    s
}

/// `touch_p(P)`: down steps whose right endpoint lies on the shadow strictly right of `p`
/// and which otherwise avoid the shadow.
pub fn shadow_touch(path: &DyckPath, t: usize) -> Result<usize> {
    if t > path.steps.len() {
        return Err(Error::Invalid(format!("point {t} is not on the path")));
    }
    let h = path.heights();
    let s = shadow(path, t);
    Ok((t + 1..h.len())
        .filter(|&x| !path.steps[x - 1] && s[x] == h[x] && s[x - 1] != h[x - 1])
        .count())
}

/// Left endpoints (step indices) of up steps followed by an up step.
pub fn double_up_points(path: &DyckPath) -> Vec<usize> {
    path.steps
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] && w[1])
        .map(|(i, _)| i)
        .collect()
}

/// `Ω_PL`: the inverse map, using `touch` to place the upper path.
pub fn omega_pl(path: &DyckPath) -> Result<PathPair> {
    let n = path.n();
    let k = path.k();
    if n < 4 {
        return Err(Error::BadRange(
            "Dyck path must have at least one up step".into(),
        ));
    }
    let ups: Vec<usize> = (0..path.steps.len()).filter(|&i| path.steps[i]).collect();
    let wl: Vec<Step> = ups[..ups.len() - 1]
        .iter()
        .map(|&i| if path.steps[i + 1] { Step::V } else { Step::H })
        .collect();
    let b = n - k - 4;
    let hl = row_offsets(&wl);
    let mut hu = Vec::with_capacity(k);
    for (i, &t) in double_up_points(path).iter().enumerate() {
        let gap = shadow_touch(path, t)?
            .checked_sub(1)
            .ok_or_else(|| Error::Invalid("touch must be positive".into()))?;
        hu.push(hl[i] + gap);
    }
    let mut wu = Vec::with_capacity(k + b);
    let mut h = 0;
    for &target in &hu {
        if target < h || target > b {
            return Err(Error::Invalid(
                "touch values do not define a lattice path".into(),
            ));
        }
        wu.extend(std::iter::repeat(Step::H).take(target - h));
        wu.push(Step::V);
        h = target;
    }
    wu.extend(std::iter::repeat(Step::H).take(b - h));
    PathPair::new(k, b, 4, wu, wl)
}

/// Edge labels of a Dyck path and the distinguished up/down pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyckLabels {
    /// Label of each step, in path order.
    pub step_labels: Vec<usize>,
    /// Labels of up steps followed by an up step.
    pub up: Vec<usize>,
    /// Labels of the down steps matched to those up steps.
    pub down: Vec<usize>,
    /// Step indices of the distinguished up steps.
    pub up_steps: Vec<usize>,
    /// Whether each distinguished up step begins on the axis.
    pub on_axis: Vec<bool>,
    /// For distinguished up steps off the axis: the index `i'` (0-based) of the last earlier
    /// distinguished up step ending at the height where this one begins.
    pub previous: Vec<Option<usize>>,
}

pub fn dyck_step_labels(path: &DyckPath) -> DyckLabels {
    let steps = &path.steps;
    let len = steps.len();
    let mut step_labels = vec![0; len];
    let mut next_up = 0;
    for (i, &s) in steps.iter().enumerate() {
        if s {
            next_up += 1;
            step_labels[i] = next_up;
        }
    }
    let total_ups = next_up;
    let mut following = total_ups + 1;
    for i in (0..len).rev() {
        if steps[i] {
            following = step_labels[i];
        } else {
            step_labels[i] = following;
        }
    }
    let h = path.heights();
    let mut up = Vec::new();
    let mut down = Vec::new();
    let mut up_steps = Vec::new();
    let mut on_axis = Vec::new();
    let mut previous = Vec::new();
    for i in 0..len.saturating_sub(1) {
        if !(steps[i] && steps[i + 1]) {
            continue;
        }
        let start = h[i];
        let matched = (i + 1..len)
            .find(|&j| !steps[j] && h[j + 1] == start)
            .expect("balanced");
        let prev = if start == 0 {
            None
        } else {
            up_steps.iter().rposition(|&j: &usize| h[j + 1] == start)
        };
        up.push(step_labels[i]);
        down.push(step_labels[matched]);
        up_steps.push(i);
        on_axis.push(start == 0);
        previous.push(prev);
    }
    DyckLabels {
        step_labels,
        up,
        down,
        up_steps,
        on_axis,
        previous,
    }
}

// ---------------------------------------------------------------------------------------
// Plane partitions and MacMahon's formula

/// A plane partition in an `a × b` box with entries at most `c`; zero entries and empty
/// rows are dropped.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PlanePartition {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub rows: Vec<Vec<usize>>,
}

impl PlanePartition {
    pub fn entry(&self, r: usize, col: usize) -> usize {
        self.rows
            .get(r)
            .and_then(|row| row.get(col))
            .copied()
            .unwrap_or(0)
    }

    pub fn is_valid(&self) -> bool {
        self.rows.len() <= self.a
            && self
                .rows
                .iter()
                .all(|r| r.len() <= self.b && r.iter().all(|&x| x >= 1 && x <= self.c))
            && (0..self.a).all(|r| {
                (0..self.b).all(|col| {
                    let x = self.entry(r, col);
                    (col + 1 >= self.b || self.entry(r, col + 1) <= x)
                        && (r + 1 >= self.a || self.entry(r + 1, col) <= x)
                })
            })
    }
}

/// Writes in each box of the `a × b` rectangle the number of paths passing below it.
/// Paths are words from the northeast corner and must be weakly nested, the first
/// being the lowest.
pub fn paths_to_plane_partition(a: usize, b: usize, paths: &[Vec<Step>]) -> Result<PlanePartition> {
    let c = paths.len();
    let mut shapes = Vec::with_capacity(c);
    for w in paths {
        if w.len() != a + b || w.iter().filter(|&&s| s == Step::V).count() != a {
            return Err(Error::Invalid("path does not fit the rectangle".into()));
        }
        shapes.push(young_rows(w, b));
    }
    for t in 1..c {
        if (0..a).any(|r| shapes[t][r] > shapes[t - 1][r]) {
            return Err(Error::Crossing(format!("paths {} and {} cross", t, t + 1)));
        }
    }
    let rows = (0..a)
        .map(|r| {
            (1..=b)
                .map(|col| shapes.iter().filter(|s| s[r] >= col).count())
                .take_while(|&x| x > 0)
                .collect::<Vec<_>>()
        })
        .filter(|row| !row.is_empty())
        .collect();
    Ok(PlanePartition { a, b, c, rows })
}

/// Inverse of [`paths_to_plane_partition`].
pub fn plane_partition_to_paths(pp: &PlanePartition) -> Result<Vec<Vec<Step>>> {
    if !pp.is_valid() {
        return Err(Error::Invalid("not a plane partition in the box".into()));
    }
    Ok((1..=pp.c)
        .map(|t| {
            let lens: Vec<usize> = (0..pp.a)
                .map(|r| (0..pp.b).filter(|&col| pp.entry(r, col) >= t).count())
                .collect();
            word_from_rows(&lens, pp.b)
        })
        .collect())
}

/// The word whose Young rows (top first) are `rows` in a rectangle of width `b`.
pub fn word_from_rows(rows: &[usize], b: usize) -> Vec<Step> {
    let mut w = Vec::with_capacity(rows.len() + b);
    let mut x = b;
    for &len in rows {
        while x > len {
            w.push(Step::H);
            x -= 1;
        }
        w.push(Step::V);
    }
    while x > 0 {
        w.push(Step::H);
        x -= 1;
    }
    w
}

/// Calls `f` on every weakly nested `c`-tuple of lattice paths in the `a × b` rectangle.
pub fn for_each_path_tuple(a: usize, b: usize, c: usize, mut f: impl FnMut(&[Vec<usize>])) {
    let shapes: Vec<Vec<usize>> = lattice_words(a, b)
        .iter()
        .map(|w| young_rows(w, b))
        .collect();
    let mut chosen: Vec<Vec<usize>> = Vec::with_capacity(c);
    fn go(
        shapes: &[Vec<usize>],
        c: usize,
        chosen: &mut Vec<Vec<usize>>,
        f: &mut dyn FnMut(&[Vec<usize>]),
    ) {
        if chosen.len() == c {
            f(chosen);
            return;
        }
        for s in shapes {
            if chosen
                .last()
                .map_or(true, |prev| prev.iter().zip(s).all(|(p, q)| q <= p))
            {
                chosen.push(s.clone());
                go(shapes, c, chosen, f);
                chosen.pop();
            }
        }
    }
    go(&shapes, c, &mut chosen, &mut f);
}

/// `M(a,b,c) = ∏_{i,j,l} (i+j+l-1)/(i+j+l-2)`, evaluated as an exact rational product.
pub fn macmahon(a: usize, b: usize, c: usize) -> BigUint {
    let mut acc = BigRational::one();
    for i in 1..=a {
        for j in 1..=b {
            for l in 1..=c {
                let s = i + j + l;
                acc *= BigRational::new((s - 1).into(), (s - 2).into());
            }
        }
    }
    assert!(acc.is_integer(), "MacMahon product must be an integer");
    acc.to_integer().to_biguint().expect("positive")
}

/// `macmahon` as a machine integer where it fits.
pub fn macmahon_u128(a: usize, b: usize, c: usize) -> Option<u128> {
    macmahon(a, b, c).to_u128()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::narayana;
    use proptest::prelude::*;

    fn small_tree() -> BinaryTree {
        "[[[],[]],[[],[]]]".parse().unwrap()
    }

    fn final_v() -> BinaryTree {
        "[[[],[]],[[[[],[]],[[],[]]],[]]]".parse().unwrap()
    }

    #[test]
    fn tree_basics() {
        assert_eq!(small_tree().n(), 6);
        assert_eq!(small_tree().k(), 1);
        assert_eq!(final_v().n(), 9);
        assert_eq!(final_v().k(), 2);
        assert_eq!(BinaryTree::base().k(), 0);
        assert_eq!(small_tree().to_string(), "[[[],[]],[[],[]]]");
    }

    #[test]
    fn omega_tl_fixtures() {
        let p = omega_tl(&small_tree()).unwrap();
        assert_eq!(
            (word_string(p.wu()), word_string(p.wl())),
            ("HV".into(), "HV".into())
        );
        let p = omega_tl(&final_v()).unwrap();
        assert_eq!(
            (word_string(p.wu()), word_string(p.wl())),
            ("HVHHV".into(), "HVHVH".into())
        );
        let p = omega_tl(&BinaryTree::base()).unwrap();
        assert!(p.wu().is_empty() && p.wl().is_empty());
        // The words written in the other order cross.
        assert!(!is_noncrossing(
            &parse_word("HVHVH").unwrap(),
            &parse_word("HVHHV").unwrap()
        ));
    }

    #[test]
    fn omega_tl_bijective_and_readoff_agrees() {
        for n in 4..=10 {
            for k in 0..=n - 4 {
                let trees = enumerate_trees(n, k).unwrap();
                let mut images = std::collections::HashSet::new();
                for t in &trees {
                    let p = omega_tl(t).unwrap();
                    assert_eq!(p, omega_tl_readoff(t).unwrap());
                    images.insert(p);
                }
                assert_eq!(images.len(), trees.len());
                assert_eq!(images.len(), enumerate_path_pairs(n, k, 4).unwrap().len());
                assert_eq!(trees.len() as u128, narayana(n - 3, k + 1));
            }
        }
    }

    #[test]
    fn reflection_swaps_k() {
        for t in enumerate_trees(8, 1).unwrap() {
            assert_eq!(t.reflect().k(), 8 - 1 - 4);
        }
    }

    #[test]
    fn dyck_touches_and_labels() {
        let p = PathPair::from_words(12, 3, 4, "HHVHHVVH", "VVHVHHHH").unwrap();
        let d = omega_lp(&p).unwrap();
        assert_eq!(d.to_string(), "+++--++-+--+--+-+-");
        let touches: Vec<usize> = double_up_points(&d)
            .iter()
            .map(|&t| shadow_touch(&d, t).unwrap())
            .collect();
        assert_eq!(touches, vec![3, 5, 4]);
        assert_eq!(omega_pl(&d).unwrap(), p);
    }

    #[test]
    fn base_cases() {
        let e = PathPair::from_words(4, 0, 4, "", "").unwrap();
        assert_eq!(omega_lp(&e).unwrap().to_string(), "+-");
        assert_eq!(omega_pl(&"+-".parse().unwrap()).unwrap(), e);
        let arch: DyckPath = "+++---".parse().unwrap();
        assert_eq!(shadow_touch(&arch, 0).unwrap(), 1);
    }

    #[test]
    fn example_labels() {
        let d: DyckPath = "+++--++-+--+--+-+-".parse().unwrap();
        let l = dyck_step_labels(&d);
        assert_eq!(l.up, vec![1, 2, 4]);
        assert_eq!(l.down, vec![8, 4, 7]);
        assert_eq!(
            l.step_labels,
            vec![1, 2, 3, 4, 4, 4, 5, 6, 6, 7, 7, 7, 8, 8, 8, 9, 9, 10]
        );
        assert_eq!(l.on_axis, vec![true, false, false]);
        assert_eq!(l.previous, vec![None, Some(0), Some(0)]);
        let stair: DyckPath = "+-+-+-".parse().unwrap();
        assert!(dyck_step_labels(&stair).up.is_empty());
    }

    #[test]
    fn dyck_roundtrip_exhaustive() {
        for n in 4..=10 {
            for k in 0..=n - 4 {
                let pairs = enumerate_path_pairs(n, k, 4).unwrap();
                let mut seen = std::collections::HashSet::new();
                for p in &pairs {
                    let d = omega_lp(p).unwrap();
                    assert_eq!(d.peaks(), n - 3 - k);
                    assert_eq!(omega_pl(&d).unwrap(), *p);
                    seen.insert(d);
                }
                assert_eq!(seen.len(), enumerate_dyck(n, k).unwrap().len());
            }
        }
    }

    #[test]
    fn matched_pairs_bound_balanced_words() {
        for n in 4..=9 {
            for k in 0..=n - 4 {
                for d in enumerate_dyck(n, k).unwrap() {
                    let l = dyck_step_labels(&d);
                    assert_eq!(l.up.len(), k);
                    let h = d.heights();
                    for (idx, &i) in l.up_steps.iter().enumerate() {
                        let j = (i + 1..d.steps().len())
                            .find(|&j| !d.steps()[j] && h[j + 1] == h[i])
                            .unwrap();
                        assert!((i + 1..=j).all(|x| h[x] > h[i]));
                        assert_eq!(l.step_labels[j], l.down[idx]);
                        assert!(l.down[idx] >= l.up[idx] + 2);
                    }
                }
            }
        }
    }

    #[test]
    fn plane_partition_of_three_paths() {
        let paths: Vec<Vec<Step>> = [vec![4, 3], vec![4, 0], vec![2, 0]]
            .iter()
            .map(|r| word_from_rows(r, 4))
            .collect();
        let pp = paths_to_plane_partition(2, 4, &paths).unwrap();
        assert_eq!(pp.rows, vec![vec![3, 3, 2, 2], vec![1, 1, 1]]);
        assert_eq!(plane_partition_to_paths(&pp).unwrap(), paths);
        let hugging = vec![word_from_rows(&[0, 0], 4); 3];
        assert!(paths_to_plane_partition(2, 4, &hugging)
            .unwrap()
            .rows
            .is_empty());
        let crossing = vec![word_from_rows(&[1, 1], 4), word_from_rows(&[2, 0], 4)];
        assert!(matches!(
            paths_to_plane_partition(2, 4, &crossing),
            Err(Error::Crossing(_))
        ));
    }

    #[test]
    fn macmahon_values() {
        assert_eq!(macmahon(3, 5, 0), BigUint::from(1u32));
        assert_eq!(macmahon(1, 1, 2), BigUint::from(3u32));
        assert_eq!(macmahon(4, 4, 4), BigUint::from(232848u32));
        for n in 4..=12 {
            for k in 0..=n - 4 {
                assert_eq!(
                    macmahon_u128(k, n - k - 4, 2).unwrap(),
                    narayana(n - 3, k + 1)
                );
            }
        }
        for a in 0..=6 {
            for b in 0..=6 {
                for c in 0..=6 {
                    let m = macmahon(a, b, c);
                    for (x, y, z) in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                        assert_eq!(macmahon(x, y, z), m);
                    }
                }
            }
        }
    }

    #[test]
    fn path_tuples_match_macmahon_small() {
        for a in 0..=3 {
            for b in 0..=3 {
                for c in 0..=3 {
                    let mut count = 0u128;
                    for_each_path_tuple(a, b, c, |_| count += 1);
                    assert_eq!(count, macmahon_u128(a, b, c).unwrap());
                }
            }
        }
    }

    #[test]
    fn tree_graphs_are_the_recursion_graphs() {
        use crate::plabic::enumerate_bcfw_graphs;
        for n in 4..=8 {
            for k in 0..=n - 4 {
                let mut images: Vec<Vec<u32>> = enumerate_trees(n, k)
                    .unwrap()
                    .iter()
                    .map(|t| tree_to_graph(t).unwrap().canonical_key())
                    .collect();
                images.sort();
                let expected: Vec<Vec<u32>> = enumerate_bcfw_graphs(n, k + 2, 4)
                    .unwrap()
                    .iter()
                    .map(|g| g.canonical_key())
                    .collect();
                assert_eq!(images, expected);
            }
        }
    }

    #[test]
    fn cherry_order_does_not_matter() {
        for t in enumerate_trees(8, 2).unwrap() {
            let first = tree_to_graph(&t).unwrap();
            let last = tree_to_graph_with(&t, |cs| cs[cs.len() - 1]).unwrap();
            assert_eq!(first, last);
        }
    }

    #[test]
    fn graph_to_tree_inverts() {
        use crate::plabic::enumerate_bcfw_graphs;
        assert_eq!(
            graph_to_tree(&PlabicGraph::base_square()).unwrap(),
            BinaryTree::base()
        );
        assert_eq!(
            graph_to_tree(&tree_to_graph(&small_tree()).unwrap()).unwrap(),
            small_tree()
        );
        for n in 4..=8 {
            for k in 2..=n - 2 {
                for g in enumerate_bcfw_graphs(n, k, 4).unwrap() {
                    let t = graph_to_tree(&g).unwrap();
                    assert_eq!(tree_to_graph(&t).unwrap(), g);
                }
            }
        }
        assert_eq!(
            graph_to_tree(&PlabicGraph::single_edge()),
            Err(Error::NotBcfwGraph)
        );
    }

    #[test]
    fn shifted_trip_equals_diagram_permutation() {
        for n in 4..=8 {
            for k in 0..=n - 4 {
                for t in enumerate_trees(n, k).unwrap() {
                    let d = crate::diagrams::omega_ld(&omega_tl(&t).unwrap()).unwrap();
                    let pi = tree_to_graph(&t).unwrap().trip_permutation().unwrap();
                    assert_eq!(d.pipe_dream_permutation(), pi.left_shift(2), "{t}");
                }
            }
        }
    }

    #[test]
    fn reflected_tree_reflects_trip() {
        for n in 4..=8 {
            for k in 0..=n - 4 {
                for t in enumerate_trees(n, k).unwrap() {
                    let pi = tree_to_graph(&t).unwrap().trip_permutation().unwrap();
                    let pr = tree_to_graph(&t.reflect())
                        .unwrap()
                        .trip_permutation()
                        .unwrap();
                    assert_eq!(pr, pi.reverse_conjugate());
                }
            }
        }
    }

    proptest! {
        #[test]
        fn tree_json_roundtrip(leaves in 2usize..9, idx in any::<prop::sample::Index>()) {
            let ts = trees_with_leaves(leaves);
            let t = &ts[idx.index(ts.len())];
            prop_assert_eq!(&BinaryTree::from_json(&t.to_json()).unwrap(), t);
        }

        #[test]
        fn plane_partition_roundtrip(a in 0usize..4, b in 0usize..4, rows in proptest::collection::vec(0usize..4, 3)) {
            let mut shapes: Vec<Vec<usize>> = rows.iter().map(|&x| vec![x.min(b); a]).collect();
            shapes.sort_by(|x, y| y.cmp(x));
            let paths: Vec<Vec<Step>> = shapes.iter().map(|s| word_from_rows(s, b)).collect();
            let pp = paths_to_plane_partition(a, b, &paths).unwrap();
            prop_assert!(pp.is_valid());
            prop_assert_eq!(plane_partition_to_paths(&pp).unwrap(), paths);
        }
    }
}
