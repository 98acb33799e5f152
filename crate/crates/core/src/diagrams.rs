//! ⊕-diagrams and Le-diagrams, pipe dreams, Le-moves and the BCFW diagram families.

use std::collections::HashSet;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::catalan::{enumerate_path_pairs, young_rows, PathPair, Step};
use crate::error::{Error, Result};
use crate::permutations::{Color, DecoratedPermutation};

/// A `{0,+}` filling of a Young diagram inside the `k × (n-k)` rectangle.
///
/// `rows[r][c]` is `true` for a `+`. There are always exactly `k` rows; rows may be empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OPlusDiagram {
    k: usize,
    n: usize,
    rows: Vec<Vec<bool>>,
}

/// One step of the southeast border, walked from the northeast corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BorderStep {
    /// Horizontal step lying under column `col`; `row_below` is the row whose top edge it is
    /// (`k` for the bottom edge of the rectangle).
    H { col: usize, row_below: usize },
    /// Vertical step closing row `row` at horizontal position `x` (= row length).
    V { row: usize, x: usize },
}

/// The elbow/cross tiling of a diagram with its pipe trajectories.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipeDream {
    pub border: Vec<BorderStep>,
    /// Label on top of each column (northwest border).
    pub column_labels: Vec<usize>,
    /// Label on the left of each row (northwest border).
    pub row_labels: Vec<usize>,
    /// `images[i-1]` is the northwest label reached by the pipe entering at southeast label `i`.
    pub images: Vec<usize>,
    /// For every cross tile `(r, c)`, the pipes (by starting label) passing vertically and horizontally.
    pub crossings: Vec<((usize, usize), usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct DiagramJson {
    k: usize,
    n: usize,
    shape: Vec<usize>,
    rows: Vec<String>,
}

impl OPlusDiagram {
    pub fn new(k: usize, n: usize, rows: Vec<Vec<bool>>) -> Result<Self> {
        if k > n {
            return Err(Error::Invalid(format!("k={k} exceeds n={n}")));
        }
        if rows.len() > k {
            return Err(Error::Invalid(format!("{} rows exceed k={k}", rows.len())));
        }
        let mut rows = rows;
        rows.resize(k, Vec::new());
        for r in 0..k {
            if rows[r].len() > n - k {
                return Err(Error::Invalid(format!(
                    "row {} longer than n-k={}",
                    r + 1,
                    n - k
                )));
            }
            if r > 0 && rows[r].len() > rows[r - 1].len() {
                return Err(Error::Invalid("row lengths must weakly decrease".into()));
            }
        }
        Ok(OPlusDiagram { k, n, rows })
    }

    /// Parses rows written over `{0,+}`, top row first.
    pub fn parse(k: usize, n: usize, rows: &[&str]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|s| {
                s.chars()
                    .map(|ch| match ch {
                        '+' => Ok(true),
                        '0' => Ok(false),
                        _ => Err(Error::Invalid(format!("bad diagram symbol {ch:?}"))),
                    })
                    .collect::<Result<Vec<bool>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(k, n, parsed)
    }

    pub fn empty(k: usize, n: usize) -> Result<Self> {
        Self::new(k, n, Vec::new())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn width(&self) -> usize {
        self.n - self.k
    }

    pub fn rows(&self) -> &[Vec<bool>] {
        &self.rows
    }

    pub fn shape(&self) -> Vec<usize> {
        self.rows.iter().map(Vec::len).collect()
    }

    pub fn is_plus(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c).copied().unwrap_or(false)
    }

    pub fn has_box(&self, r: usize, c: usize) -> bool {
        r < self.k && c < self.rows[r].len()
    }

    pub fn plus_count(&self) -> usize {
        self.rows.iter().flatten().filter(|&&p| p).count()
    }

    pub fn row_strings(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&p| if p { '+' } else { '0' }).collect())
            .collect()
    }

    /// The southeast border walked from the northeast corner; step `j` carries label `j+1`.
    pub fn border(&self) -> Vec<BorderStep> {
        let mut steps = Vec::with_capacity(self.n);
        let mut x = self.width();
        for r in 0..self.k {
            let len = self.rows[r].len();
            while x > len {
                x -= 1;
                steps.push(BorderStep::H {
                    col: x,
                    row_below: r,
                });
            }
            steps.push(BorderStep::V { row: r, x });
        }
        while x > 0 {
            x -= 1;
            steps.push(BorderStep::H {
                col: x,
                row_below: self.k,
            });
        }
        steps
    }

    /// Labels of the vertical border steps, i.e. the sources `s_1 < ... < s_k`.
    pub fn vertical_labels(&self) -> Vec<usize> {
        self.border()
            .iter()
            .enumerate()
            .filter(|(_, s)| matches!(s, BorderStep::V { .. }))
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn pipe_dream(&self) -> PipeDream {
        let border = self.border();
        let w = self.width();
        let mut column_labels = vec![0; w];
        let mut row_labels = vec![0; self.k];
        for (i, s) in border.iter().enumerate() {
            match *s {
                BorderStep::H { col, .. } => column_labels[col] = i + 1,
                BorderStep::V { row, .. } => row_labels[row] = i + 1,
            }
        }
        let mut images = vec![0; self.n];
        let mut vertical = std::collections::HashMap::new();
        let mut horizontal = std::collections::HashMap::new();
        for (i, s) in border.iter().enumerate() {
            let label = i + 1;
            // Position as signed (row, col) of the box being entered, and heading.
            let (mut r, mut c, mut up) = match *s {
                BorderStep::H { col, row_below } => (row_below as isize - 1, col as isize, true),
                BorderStep::V { row, x } => (row as isize, x as isize - 1, false),
            };
            while r >= 0 && c >= 0 {
                let (ru, cu) = (r as usize, c as usize);
                if self.rows[ru][cu] {
                    up = !up;
                } else if up {
                    vertical.insert((ru, cu), label);
                } else {
                    horizontal.insert((ru, cu), label);
                }
                if up {
                    r -= 1;
                } else {
                    c -= 1;
                }
            }
            images[i] = if r < 0 {
                column_labels[c as usize]
            } else {
                row_labels[r as usize]
            };
        }
        let mut crossings: Vec<_> = vertical
            .iter()
            .map(|(&pos, &v)| (pos, v, horizontal[&pos]))
            .collect();
        crossings.sort_unstable();
        PipeDream {
            border,
            column_labels,
            row_labels,
            images,
            crossings,
        }
    }

    /// The decorated permutation read from the pipe dream. Fixed points on horizontal
    /// border steps are black, those on vertical steps white.
    pub fn pipe_dream_permutation(&self) -> DecoratedPermutation {
        let pd = self.pipe_dream();
        let white: Vec<usize> = pd
            .border
            .iter()
            .enumerate()
            .filter(|&(i, s)| matches!(s, BorderStep::V { .. }) && pd.images[i] == i + 1)
            .map(|(i, _)| i + 1)
            .collect();
        DecoratedPermutation::new(pd.images, &white).expect("pipe dreams define permutations")
    }

    /// No `0` has a `+` above it in its column and a `+` to its left in its row.
    pub fn is_le_diagram(&self) -> bool {
        self.first_le_violation().is_none()
    }

    fn first_le_violation(&self) -> Option<(usize, usize)> {
        (0..self.k)
            .flat_map(|r| (0..self.rows[r].len()).map(move |c| (r, c)))
            .find(|&(r, c)| self.is_l_configuration(r, c))
    }

    fn is_l_configuration(&self, r: usize, c: usize) -> bool {
        !self.rows[r][c] && (0..r).any(|rr| self.rows[rr][c]) && (0..c).any(|cc| self.rows[r][cc])
    }

    /// No two pipes cross twice.
    pub fn is_reduced(&self) -> bool {
        let mut seen = HashSet::new();
        self.pipe_dream()
            .crossings
            .iter()
            .all(|&(_, a, b)| seen.insert((a.min(b), a.max(b))))
    }

    /// The Le-move whose offending `0` sits at `(r, c)`, as `(top row, left column)`.
    fn le_move_at(&self, r: usize, c: usize) -> Option<(usize, usize)> {
        if !self.is_l_configuration(r, c) {
            return None;
        }
        let top = (0..r).rev().find(|&rr| self.rows[rr][c])?;
        let left = (0..c).rev().find(|&cc| self.rows[r][cc])?;
        if !self.rows[top][left] {
            return None;
        }
        for rr in top..=r {
            for cc in left..=c {
                let corner = (rr == top || rr == r) && (cc == left || cc == c);
                if !corner && self.rows[rr][cc] {
                    return None;
                }
            }
        }
        Some((top, left))
    }

    /// All applicable Le-moves, keyed by the offending `0`, in row-major order.
    pub fn applicable_le_moves(&self) -> Vec<(usize, usize)> {
        (0..self.k)
            .flat_map(|r| (0..self.rows[r].len()).map(move |c| (r, c)))
            .filter(|&(r, c)| self.le_move_at(r, c).is_some())
            .collect()
    }

    /// Applies the Le-move at offending `0` `(r, c)`: the top-left `+` becomes `0` and the
    /// offending `0` becomes `+`.
    pub fn apply_le_move(&self, r: usize, c: usize) -> Option<Self> {
        let (top, left) = self.le_move_at(r, c)?;
        let mut out = self.clone();
        out.rows[top][left] = false;
        out.rows[r][c] = true;
        Some(out)
    }

    /// `Σ_{+} (row · width + col)`; every Le-move strictly increases it, and it is bounded
    /// by the rectangle, which gives termination.
    pub fn le_move_potential(&self) -> usize {
        let w = self.width();
        let mut total = 0;
        for (r, row) in self.rows.iter().enumerate() {
            for (c, &p) in row.iter().enumerate() {
                if p {
                    total += r * w + c;
                }
            }
        }
        total
    }

    /// Applies Le-moves, scanning for the offending `0` in row-major order, until none applies.
    pub fn le_normalize(&self) -> Result<Self> {
        self.le_normalize_with(|moves| moves[0])
    }

    /// As [`le_normalize`](Self::le_normalize), choosing among applicable moves at random.
    pub fn le_normalize_random<R: Rng>(&self, rng: &mut R) -> Result<Self> {
        self.le_normalize_with(|moves| moves[rng.gen_range(0..moves.len())])
    }

    fn le_normalize_with(
        &self,
        mut choose: impl FnMut(&[(usize, usize)]) -> (usize, usize),
    ) -> Result<Self> {
        if !self.is_reduced() {
            return Err(Error::NotReduced);
        }
        let mut cur = self.clone();
        loop {
            let moves = cur.applicable_le_moves();
            if moves.is_empty() {
                break;
            }
            let (r, c) = choose(&moves);
            let next = cur.apply_le_move(r, c).expect("move is applicable");
            debug_assert!(next.le_move_potential() > cur.le_move_potential());
            cur = next;
        }
        if cur.is_le_diagram() {
            Ok(cur)
        } else {
            // An L-configuration with no applicable move only occurs for non-reduced input.
            Err(Error::NotReduced)
        }
    }

    /// Deletes the leftmost column (every row must be non-empty).
    pub fn delete_first_column(&self) -> Result<Self> {
        if self.rows.iter().any(Vec::is_empty) {
            return Err(Error::Invalid(
                "cannot delete a column from an empty row".into(),
            ));
        }
        let rows = self.rows.iter().map(|r| r[1..].to_vec()).collect();
        Self::new(self.k, self.n - 1, rows)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(DiagramJson {
            k: self.k,
            n: self.n,
            shape: self.shape(),
            rows: self.row_strings(),
        })
        .expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let d: DiagramJson =
            serde_json::from_value(v.clone()).map_err(|e| Error::Invalid(e.to_string()))?;
        let rows: Vec<&str> = d.rows.iter().map(String::as_str).collect();
        let out = Self::parse(d.k, d.n, &rows)?;
        if out.shape() != d.shape && !d.shape.is_empty() {
            let mut padded = d.shape.clone();
            padded.resize(d.k, 0);
            if padded != out.shape() {
                return Err(Error::Invalid("shape disagrees with rows".into()));
            }
        }
        Ok(out)
    }

    /// Every Le-diagram of type `(k, n)`.
    pub fn enumerate_le_diagrams(k: usize, n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        if k > n {
            return out;
        }
        let w = n - k;
        for word in crate::util::binary_words(n, k) {
            // Word over border steps: `true` = vertical. Row lengths follow from it.
            let mut x = w;
            let mut shape = Vec::with_capacity(k);
            for &v in &word {
                if v {
                    shape.push(x);
                } else {
                    x -= 1;
                }
            }
            let mut rows: Vec<Vec<bool>> = shape.iter().map(|&l| vec![false; l]).collect();
            fill_le(&mut rows, 0, 0, &mut |rows| {
                out.push(OPlusDiagram {
                    k,
                    n,
                    rows: rows.to_vec(),
                });
            });
        }
        out
    }
}

fn fill_le(rows: &mut Vec<Vec<bool>>, r: usize, c: usize, emit: &mut dyn FnMut(&[Vec<bool>])) {
    if r == rows.len() {
        emit(rows);
        return;
    }
    if c == rows[r].len() {
        fill_le(rows, r + 1, 0, emit);
        return;
    }
    rows[r][c] = true;
    fill_le(rows, r, c + 1, emit);
    rows[r][c] = false;
    let above = (0..r).any(|rr| rows[rr][c]);
    let left = (0..c).any(|cc| rows[r][cc]);
    if !(above && left) {
        fill_le(rows, r, c + 1, emit);
    }
}

impl fmt::Display for OPlusDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = self.row_strings();
        let shown: Vec<&str> = rows
            .iter()
            .map(|s| if s.is_empty() { "." } else { s.as_str() })
            .collect();
        write!(f, "[{}]", shown.join(" / "))
    }
}

/// The ⊕-diagram built from a pair of noncrossing lattice paths by the four-step procedure:
/// rows of length `λ_L + 4` with `+` at both ends, `0`-columns from the columns of `Y_U`
/// right-justified, two more `+`'s per row as far right as possible, then `0` elsewhere.
pub fn omega_ld(paths: &PathPair) -> Result<OPlusDiagram> {
    if paths.m() != 4 {
        return Err(Error::BadRange(format!(
            "expected m=4 lattice paths, got m={}",
            paths.m()
        )));
    }
    paths.check_noncrossing()?;
    let k = paths.k();
    let b = paths.b();
    let lower = young_rows(paths.wl(), b);
    let upper = young_rows(paths.wu(), b);
    // None = not yet filled.
    let mut cells: Vec<Vec<Option<bool>>> = lower.iter().map(|&l| vec![None; l + 4]).collect();
    for row in cells.iter_mut() {
        let last = row.len() - 1;
        row[0] = Some(true);
        row[last] = Some(true);
    }
    let max_col = upper.first().copied().unwrap_or(0);
    for col in 0..max_col {
        let h = upper.iter().take_while(|&&l| l > col).count();
        let width = cells.get(h.saturating_sub(1)).map_or(0, Vec::len);
        let target = (0..width)
            .rev()
            .find(|&c| (0..h).all(|r| c < cells[r].len() && cells[r][c].is_none()))
            .ok_or_else(|| Error::Crossing("no room for a column of the upper diagram".into()))?;
        for row in cells.iter_mut().take(h) {
            row[target] = Some(false);
        }
    }
    for row in cells.iter_mut() {
        let mut placed = 0;
        for c in (0..row.len()).rev() {
            if placed == 2 {
                break;
            }
            if row[c].is_none() {
                row[c] = Some(true);
                placed += 1;
            }
        }
        if placed < 2 {
            return Err(Error::Crossing("row has no room for two +'s".into()));
        }
    }
    let rows = cells
        .into_iter()
        .map(|row| row.into_iter().map(|x| x.unwrap_or(false)).collect())
        .collect();
    OPlusDiagram::new(k, paths.n(), rows)
}

/// Two-plus-per-row diagram of type `(k, n)` for `m=2` indexed by a single lattice path
/// in the `k × (n-k-2)` rectangle.
pub fn m2_diagram(n: usize, k: usize, word: &[Step]) -> Result<OPlusDiagram> {
    if k + 2 > n {
        return Err(Error::BadRange(format!("need k <= n-2, got n={n}, k={k}")));
    }
    let b = n - k - 2;
    if word.len() != k + b || word.iter().filter(|&&s| s == Step::V).count() != k {
        return Err(Error::Invalid(
            "word does not fit the k × (n-k-2) rectangle".into(),
        ));
    }
    let rows = young_rows(word, b)
        .into_iter()
        .map(|l| {
            let mut row = vec![false; l + 2];
            row[0] = true;
            row[l + 1] = true;
            row
        })
        .collect();
    OPlusDiagram::new(k, n, rows)
}

/// The family `D_{n,k,m}` for `m ∈ {1,2,3,4}`, in a deterministic order.
pub fn enumerate_diagrams(n: usize, k: usize, m: usize) -> Result<Vec<OPlusDiagram>> {
    if !(1..=4).contains(&m) || k + m > n {
        return Err(Error::BadRange(format!(
            "need 0 <= k <= n-m, m in 1..=4; got n={n}, k={k}, m={m}"
        )));
    }
    match m {
        4 => enumerate_path_pairs(n, k, 4)?
            .iter()
            .map(omega_ld)
            .collect(),
        2 => crate::util::binary_words(n - 2, k)
            .into_iter()
            .map(|w| {
                let word: Vec<Step> = w
                    .into_iter()
                    .map(|v| if v { Step::V } else { Step::H })
                    .collect();
                m2_diagram(n, k, &word)
            })
            .collect(),
        _ => enumerate_diagrams(n + 1, k, m + 1)?
            .iter()
            .map(OPlusDiagram::delete_first_column)
            .collect(),
    }
}

/// Colour of the fixed point at label `i` of a diagram (`None` if not fixed).
pub fn fixed_point_color(d: &OPlusDiagram, i: usize) -> Option<Color> {
    d.pipe_dream_permutation().color(i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::binomial;
    use proptest::prelude::*;

    fn reference_diagram() -> OPlusDiagram {
        OPlusDiagram::parse(4, 10, &["0+0+0", "+++++", "000", "++"]).unwrap()
    }

    #[test]
    fn reference_diagram_pipe_dream() {
        assert_eq!(
            reference_diagram().pipe_dream_permutation().to_string(),
            "(1_,5,4,9,7,6^,2,10,3,8)"
        );
        assert!(reference_diagram().is_le_diagram());
        assert_eq!(reference_diagram().vertical_labels(), vec![2, 3, 6, 8]);
    }

    #[test]
    fn empty_diagram_is_identity() {
        let d = OPlusDiagram::empty(0, 4).unwrap();
        assert_eq!(d.pipe_dream_permutation().to_string(), "(1_,2_,3_,4_)");
        let d = OPlusDiagram::empty(2, 3).unwrap();
        assert_eq!(d.pipe_dream_permutation().to_string(), "(1_,2^,3^)");
    }

    #[test]
    fn m2_diagram_matches_caterpillar() {
        let d = OPlusDiagram::parse(4, 11, &["+00000+", "+00+", "+0+", "++"]).unwrap();
        assert_eq!(
            d.pipe_dream_permutation().to_string(),
            "(2,11,3_,4_,6,1,8,5,10,7,9)"
        );
    }

    #[test]
    fn le_move_chain() {
        let d = OPlusDiagram::parse(2, 8, &["+0++0+", "+000+"]).unwrap();
        assert!(!d.is_le_diagram());
        let d1 = d.apply_le_move(1, 2).unwrap();
        assert_eq!(d1.row_strings(), vec!["00++0+", "+0+0+"]);
        let d2 = d1.apply_le_move(1, 3).unwrap();
        assert_eq!(d2.row_strings(), vec!["000+0+", "+0+++"]);
        assert_eq!(d.le_normalize().unwrap(), d2);
        assert_eq!(d2.pipe_dream_permutation(), d.pipe_dream_permutation());
    }

    #[test]
    fn class8_normalizes() {
        let d = OPlusDiagram::parse(2, 7, &["+++0+", "+0+++"]).unwrap();
        assert_eq!(
            d.le_normalize().unwrap().row_strings(),
            vec!["0++0+", "+++++"]
        );
    }

    #[test]
    fn single_row_is_reduced() {
        assert!(OPlusDiagram::parse(1, 3, &["0+"]).unwrap().is_reduced());
    }

    #[test]
    fn non_reduced_is_rejected() {
        // Two pipes crossing in two 0 tiles of a 2x2 block.
        let d = OPlusDiagram::parse(2, 4, &["00", "00"]).unwrap();
        assert!(d.is_reduced());
        let d = OPlusDiagram::parse(2, 4, &["+0", "0+"]).unwrap();
        assert_eq!(d.is_reduced(), d.le_normalize().is_ok());
    }

    #[test]
    fn omega_ld_example() {
        let p = PathPair::from_words(12, 3, 4, "HHVHHVVH", "VVHVHHHH").unwrap();
        let d = omega_ld(&p).unwrap();
        assert_eq!(d.row_strings(), vec!["+00++000+", "+0000+0++", "+000++0+"]);
    }

    #[test]
    fn final_v_example() {
        let p = PathPair::from_words(9, 2, 4, "HVHHV", "HVHVH").unwrap();
        let d = omega_ld(&p).unwrap();
        assert_eq!(d.row_strings(), vec!["+++00+", "+0+++"]);
        assert_eq!(d.shape(), vec![6, 5]);
    }

    #[test]
    fn k0_omega_ld() {
        let p = PathPair::from_words(5, 0, 4, "H", "H").unwrap();
        assert_eq!(omega_ld(&p).unwrap(), OPlusDiagram::empty(0, 5).unwrap());
    }

    #[test]
    fn family_sizes() {
        for n in 2..=10 {
            for k in 0..=n - 2 {
                assert_eq!(
                    enumerate_diagrams(n, k, 2).unwrap().len() as u128,
                    binomial(n - 2, k)
                );
            }
        }
        assert_eq!(enumerate_diagrams(6, 1, 4).unwrap().len(), 3);
        for m in 1..=4 {
            assert_eq!(enumerate_diagrams(7, 0, m).unwrap().len(), 1);
        }
        assert!(enumerate_diagrams(4, 1, 4).is_err());
    }

    #[test]
    fn m4_family_is_reduced_with_4k_pluses() {
        for n in 4..=9 {
            for k in 0..=n - 4 {
                let ds = enumerate_diagrams(n, k, 4).unwrap();
                let perms: HashSet<_> = ds.iter().map(|d| d.pipe_dream_permutation()).collect();
                assert_eq!(perms.len(), ds.len());
                for d in &ds {
                    assert!(d.is_reduced());
                    assert_eq!(d.plus_count(), 4 * k);
                }
            }
        }
    }

    #[test]
    fn column_deleted_families_have_mk_pluses() {
        for n in 3..=8 {
            for k in 0..=n - 3 {
                for d in enumerate_diagrams(n, k, 3).unwrap() {
                    assert_eq!(d.plus_count(), 3 * k);
                }
            }
            for k in 0..n {
                for d in enumerate_diagrams(n, k, 1).unwrap() {
                    assert_eq!(d.plus_count(), k);
                }
            }
        }
    }

    #[test]
    fn le_diagrams_biject_onto_decorated_permutations() {
        for n in 1..=7 {
            let mut all = HashSet::new();
            for k in 0..=n {
                for d in OPlusDiagram::enumerate_le_diagrams(k, n) {
                    let p = d.pipe_dream_permutation();
                    assert_eq!(p.anti_excedance_count(), k);
                    assert!(all.insert(p));
                }
            }
            // Decorated permutations: choose the fixed points, colour them, derange the rest.
            let expected: u128 = (0..=n)
                .map(|j| binomial(n, j) * (1u128 << j) * derangements(n - j))
                .sum();
            assert_eq!(all.len() as u128, expected);
        }
    }

    fn derangements(m: usize) -> u128 {
        let mut d = vec![1u128, 0];
        for i in 2..=m {
            d.push((i as u128 - 1) * (d[i - 1] + d[i - 2]));
        }
        d[m]
    }

    #[test]
    fn json_roundtrip() {
        let d = reference_diagram();
        assert_eq!(OPlusDiagram::from_json(&d.to_json()).unwrap(), d);
    }

    fn arb_diagram() -> impl Strategy<Value = OPlusDiagram> {
        (1usize..=4, 1usize..=4).prop_flat_map(|(k, w)| {
            let shape = proptest::collection::vec(0..=w, k).prop_map(|mut v| {
                v.sort_unstable_by(|a, b| b.cmp(a));
                v
            });
            shape.prop_flat_map(move |shape| {
                let cells: Vec<_> = shape
                    .iter()
                    .map(|&l| proptest::collection::vec(any::<bool>(), l))
                    .collect();
                cells.prop_map(move |rows| OPlusDiagram::new(k, k + w, rows).unwrap())
            })
        })
    }

    proptest! {
        #[test]
        fn anti_excedances_are_vertical_steps(d in arb_diagram()) {
            prop_assert_eq!(d.pipe_dream_permutation().anti_excedances(), d.vertical_labels());
        }

        #[test]
        fn le_normalize_preserves_permutation(d in arb_diagram(), seed in any::<u64>()) {
            use rand::SeedableRng;
            if d.is_reduced() {
                let le = d.le_normalize().unwrap();
                prop_assert!(le.is_le_diagram());
                prop_assert_eq!(le.pipe_dream_permutation(), d.pipe_dream_permutation());
                prop_assert_eq!(le.plus_count(), d.plus_count());
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                prop_assert_eq!(d.le_normalize_random(&mut rng).unwrap(), le);
            } else {
                prop_assert_eq!(d.le_normalize(), Err(Error::NotReduced));
            }
        }

        #[test]
        fn le_moves_increase_potential(d in arb_diagram()) {
            for (r, c) in d.applicable_le_moves() {
                let e = d.apply_le_move(r, c).unwrap();
                prop_assert!(e.le_move_potential() > d.le_move_potential());
            }
        }
    }
}
