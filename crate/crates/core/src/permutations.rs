//! Decorated permutations, anti-excedances, cyclic shifts and reflections.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Colour of a fixed point (or of an internal plabic-graph vertex).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn flip(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
}

/// A permutation of `[n]` whose fixed points carry a colour.
///
/// Values are 1-based: `image(i)` is `π(i)` for `1 <= i <= n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DecoratedPermutation {
    images: Vec<usize>,
    colors: Vec<Option<Color>>,
}

#[derive(Serialize, Deserialize)]
struct PermJson {
    n: usize,
    images: Vec<usize>,
    #[serde(default)]
    white_fixed: Vec<usize>,
}

impl DecoratedPermutation {
    /// Builds a decorated permutation; fixed points listed in `white` are white, all others black.
    pub fn new(images: Vec<usize>, white: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &v in &images {
            if v == 0 || v > n || seen[v] {
                return Err(Error::Invalid(format!(
                    "{images:?} is not a permutation of [{n}]"
                )));
            }
            seen[v] = true;
        }
        let mut colors: Vec<Option<Color>> = images
            .iter()
            .enumerate()
            .map(|(i, &v)| (v == i + 1).then_some(Color::Black))
            .collect();
        for &w in white {
            if w == 0 || w > n || images[w - 1] != w {
                return Err(Error::Invalid(format!("{w} is not a fixed point")));
            }
            colors[w - 1] = Some(Color::White);
        }
        Ok(DecoratedPermutation { images, colors })
    }

    /// Builds from images and an explicit colour per fixed point (ignored elsewhere).
    pub fn with_colors(images: Vec<usize>, color_of: impl Fn(usize) -> Color) -> Result<Self> {
        let white: Vec<usize> = images
            .iter()
            .enumerate()
            .filter(|&(i, &v)| v == i + 1 && color_of(i + 1) == Color::White)
            .map(|(i, _)| i + 1)
            .collect();
        Self::new(images, &white)
    }

    pub fn identity(n: usize, color: Color) -> Self {
        let images: Vec<usize> = (1..=n).collect();
        DecoratedPermutation {
            images,
            colors: vec![Some(color); n],
        }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Colour of `i` if it is a fixed point.
    pub fn color(&self, i: usize) -> Option<Color> {
        self.colors[i - 1]
    }

    pub fn white_fixed(&self) -> Vec<usize> {
        (1..=self.n())
            .filter(|&i| self.color(i) == Some(Color::White))
            .collect()
    }

    pub fn inverse_images(&self) -> Vec<usize> {
        let mut inv = vec![0; self.n()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        inv
    }

    /// The anti-excedances: `i` with `π⁻¹(i) > i`, or `i` a white fixed point.
    pub fn anti_excedances(&self) -> Vec<usize> {
        let inv = self.inverse_images();
        (1..=self.n())
            .filter(|&i| inv[i - 1] > i || self.color(i) == Some(Color::White))
            .collect()
    }

    pub fn anti_excedance_count(&self) -> usize {
        self.anti_excedances().len()
    }

    /// `c_n^r ∘ π` with `c_n = (n n-1 ... 1)`; every fixed point of the result is black.
    pub fn left_shift(&self, r: usize) -> Self {
        let n = self.n();
        if n == 0 {
            return self.clone();
        }
        let images: Vec<usize> = self.images.iter().map(|&v| shift_down(v, r, n)).collect();
        let colors = images
            .iter()
            .enumerate()
            .map(|(i, &v)| (v == i + 1).then_some(Color::Black))
            .collect();
        DecoratedPermutation { images, colors }
    }

    /// `w_n π w_n` with `w_n(i) = n + 1 - i`; fixed-point colours travel with their points.
    pub fn reverse_conjugate(&self) -> Self {
        let n = self.n();
        let images = (1..=n).map(|i| n + 1 - self.image(n + 1 - i)).collect();
        let colors = (1..=n).map(|i| self.color(n + 1 - i)).collect();
        DecoratedPermutation { images, colors }
    }

    /// `c_n^r w_n π w_n`. Newly created fixed points are black; when `c_n^r` is the identity
    /// the reflected colours are kept.
    pub fn cyclic_reflection(&self, r: usize) -> Self {
        let reflected = self.reverse_conjugate();
        if self.n() == 0 || r % self.n() == 0 {
            reflected
        } else {
            reflected.left_shift(r)
        }
    }

    /// The parity involution `π ↦ c_n^m w_n π w_n` for even `m`.
    pub fn parity_involution(&self, m: usize) -> Result<Self> {
        if m % 2 != 0 {
            return Err(Error::BadRange(format!(
                "parity involution needs even m, got {m}"
            )));
        }
        Ok(self.cyclic_reflection(m))
    }

    /// Underlying permutation as a product of disjoint cycles, fixed points omitted.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n + 1];
        let mut out = Vec::new();
        for s in 1..=n {
            if seen[s] || self.image(s) == s {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                cyc.push(x);
                x = self.image(x);
            }
            out.push(cyc);
        }
        out
    }

    /// Positroid of the cell: all `k`-subsets that dominate every Grassmann-necklace
    /// element in the corresponding cyclically rotated Gale order.
    pub fn positroid(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let k = self.anti_excedance_count();
        let necklace = self.grassmann_necklace();
        crate::util::k_subsets(n, k)
            .into_iter()
            .filter(|b| {
                necklace
                    .iter()
                    .enumerate()
                    .all(|(i, ni)| gale_leq_rotated(ni, b, i + 1, n))
            })
            .collect()
    }

    /// `I_i = {j : j <_i π⁻¹(j)} ∪ {white fixed points}` for each `i`, sorted increasingly.
    pub fn grassmann_necklace(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let inv = self.inverse_images();
        (1..=n)
            .map(|i| {
                (1..=n)
                    .filter(|&j| {
                        let pj = inv[j - 1];
                        if pj == j {
                            self.color(j) == Some(Color::White)
                        } else {
                            rot(j, i, n) < rot(pj, i, n)
                        }
                    })
                    .collect()
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(PermJson {
            n: self.n(),
            images: self.images.clone(),
            white_fixed: self.white_fixed(),
        })
        .expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let p: PermJson =
            serde_json::from_value(v.clone()).map_err(|e| Error::Invalid(e.to_string()))?;
        if p.images.len() != p.n {
            return Err(Error::Invalid("images length differs from n".into()));
        }
        Self::new(p.images, &p.white_fixed)
    }
}

/// Position of `j` in the order `i < i+1 < ... < n < 1 < ... < i-1`.
fn rot(j: usize, i: usize, n: usize) -> usize {
    (j + n - i) % n
}

fn gale_leq_rotated(a: &[usize], b: &[usize], i: usize, n: usize) -> bool {
    let mut ra: Vec<usize> = a.iter().map(|&x| rot(x, i, n)).collect();
    let mut rb: Vec<usize> = b.iter().map(|&x| rot(x, i, n)).collect();
    ra.sort_unstable();
    rb.sort_unstable();
    ra.iter().zip(&rb).all(|(x, y)| x <= y)
}

fn shift_down(v: usize, r: usize, n: usize) -> usize {
    (v - 1 + n - r % n) % n + 1
}

impl fmt::Display for DecoratedPermutation {
    /// One-line notation; black fixed points print as `i_`, white ones as `i^`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, &v) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
            match self.colors[i] {
                Some(Color::Black) => write!(f, "_")?,
                Some(Color::White) => write!(f, "^")?,
                None => {}
            }
        }
        write!(f, ")")
    }
}

impl FromStr for DecoratedPermutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let mut images = Vec::new();
        let mut white = Vec::new();
        if !body.trim().is_empty() {
            for tok in body.split(',') {
                let tok = tok.trim();
                let (num, is_white) = match tok.strip_suffix('^') {
                    Some(t) => (t, true),
                    None => (tok.trim_end_matches('_'), false),
                };
                let v: usize = num
                    .parse()
                    .map_err(|_| Error::Invalid(format!("bad entry {tok:?}")))?;
                if is_white {
                    white.push(v);
                }
                images.push(v);
            }
        }
        let p = DecoratedPermutation::new(images, &white)?;
        for (i, tok) in body.split(',').enumerate() {
            let tok = tok.trim();
            let marked = tok.ends_with('_') || tok.ends_with('^');
            if !tok.is_empty() && marked != (p.image(i + 1) == i + 1) {
                return Err(Error::Invalid(format!(
                    "fixed-point marking wrong at {tok:?}"
                )));
            }
        }
        Ok(p)
    }
}
