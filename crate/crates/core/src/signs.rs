//! Sign vectors and sign variation, dominoes, the nine-class description of `k=2` BCFW cells
//! with their standard bases and fundamental dominoes, `m=2` domino bases, alternating domino
//! sequences, shuffles and the Dyck-path domino bases.

use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use num_traits::{Signed, Zero};
use regex::Regex;

use crate::catalan::{dyck_step_labels, DyckPath};
use crate::diagrams::OPlusDiagram;
use crate::error::{Error, Result};
use crate::linalg::{q, RationalMatrix, Q};

pub fn sign(x: &Q) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// A vector over `{0, +, −}`, written as a string over `"0+-"`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.iter().any(|s| !(-1..=1).contains(s)) {
            return Err(Error::Invalid("signs must be -1, 0 or 1".into()));
        }
        Ok(SignVector(signs))
    }

    pub fn of(v: &[Q]) -> Self {
        SignVector(v.iter().map(sign).collect())
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn has_zero(&self) -> bool {
        self.0.contains(&0)
    }

    pub fn negate(&self) -> Self {
        SignVector(self.0.iter().map(|s| -s).collect())
    }

    pub fn var(&self) -> usize {
        var_signs(&self.0)
    }

    pub fn var_bar(&self) -> usize {
        var_bar_signs(&self.0)
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.0 {
            f.write_str(match s {
                1 => "+",
                -1 => "-",
                _ => "0",
            })?;
        }
        Ok(())
    }
}

impl FromStr for SignVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' | '−' => Ok(-1),
                '0' => Ok(0),
                _ => Err(Error::Invalid(format!("bad sign character {c:?}"))),
            })
            .collect::<Result<Vec<i8>>>()
            .map(SignVector)
    }
}

fn var_signs(s: &[i8]) -> usize {
    let nonzero: Vec<i8> = s.iter().copied().filter(|&x| x != 0).collect();
    nonzero.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Maximum sign variation over all ways of giving the zero entries a sign.
fn var_bar_signs(s: &[i8]) -> usize {
    // best[c]: most changes so far with the last entry of sign c (0 → −, 1 → +).
    let mut best: [Option<usize>; 2] = [None, None];
    for (i, &x) in s.iter().enumerate() {
        let allowed: &[usize] = match x {
            1 => &[1],
            -1 => &[0],
            _ => &[0, 1],
        };
        let mut next = [None, None];
        for &c in allowed {
            next[c] = Some(if i == 0 {
                0
            } else {
                let same = best[c];
                let flip = best[1 - c].map(|v| v + 1);
                same.max(flip).expect("some state reachable")
            });
        }
        best = next;
    }
    best.iter().flatten().copied().max().unwrap_or(0)
}

/// Number of sign changes of `v`, ignoring zeros.
pub fn var(v: &[Q]) -> usize {
    SignVector::of(v).var()
}

/// Largest number of sign changes over all sign assignments to the zero entries of `v`.
pub fn var_bar(v: &[Q]) -> usize {
    SignVector::of(v).var_bar()
}

/// `v` restricted to the 1-based indices `idx` is nonzero and alternates in sign.
pub fn alternates_on(v: &[Q], idx: &[usize]) -> bool {
    let s: Vec<i8> = idx.iter().map(|&i| sign(&v[i - 1])).collect();
    s.iter().all(|&x| x != 0) && s.windows(2).all(|w| w[0] != w[1])
}

/// `v` with coordinate `n` set to zero.
pub fn bar(v: &[Q]) -> Vec<Q> {
    let mut out = v.to_vec();
    if let Some(last) = out.last_mut() {
        *last = Q::zero();
    }
    out
}

/// A domino: supported on two adjacent coordinates with equal signs, on coordinate `n` alone,
/// or the zero vector (with sign 0).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Domino {
    values: Vec<Q>,
    index: Option<usize>,
    sign: i8,
}

impl Domino {
    pub fn new(values: Vec<Q>) -> Result<Self> {
        let n = values.len();
        let support: Vec<usize> = (1..=n).filter(|&i| !values[i - 1].is_zero()).collect();
        let (index, s) = match support.as_slice() {
            [] => (None, 0),
            [i] if *i == n => (Some(n), sign(&values[n - 1])),
            [i, j] if *j == i + 1 && sign(&values[i - 1]) == sign(&values[j - 1]) => {
                (Some(*i), sign(&values[i - 1]))
            }
            _ => return Err(Error::Invalid(format!("not a domino: support {support:?}"))),
        };
        Ok(Domino {
            values,
            index,
            sign: s,
        })
    }

    /// The `i`-domino with entries `a, b` at `i, i+1`.
    pub fn pair(n: usize, i: usize, a: Q, b: Q) -> Result<Self> {
        if i == 0 || i >= n {
            return Err(Error::BadBoundary(i));
        }
        let mut v = vec![Q::zero(); n];
        v[i - 1] = a;
        v[i] = b;
        Self::new(v)
    }

    pub fn zero(n: usize) -> Self {
        Domino {
            values: vec![Q::zero(); n],
            index: None,
            sign: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    /// Leftmost support coordinate; `None` for the zero domino.
    pub fn index(&self) -> Option<usize> {
        self.index
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn scaled(&self, c: &Q) -> Self {
        let values = self.values.iter().map(|x| x * c).collect();
        if c.is_zero() {
            return Self::zero(self.n());
        }
        Domino {
            values,
            index: self.index,
            sign: self.sign * sign(c),
        }
    }
}

pub fn domino_sum(ds: &[Domino]) -> Result<Vec<Q>> {
    let n = ds.first().map_or(0, Domino::n);
    if ds.iter().any(|d| d.n() != n) {
        return Err(Error::ShapeMismatch("dominoes of different lengths".into()));
    }
    let mut v = vec![Q::zero(); n];
    for d in ds {
        for (x, y) in v.iter_mut().zip(&d.values) {
            *x += y;
        }
    }
    Ok(v)
}

/// A sum of `k ≥ 1` dominoes has at most `k − 1` sign changes.
pub fn domino_sum_bound_holds(ds: &[Domino]) -> Result<bool> {
    if ds.is_empty() {
        return Ok(true);
    }
    Ok(var(&domino_sum(ds)?) < ds.len())
}

/// Adding an `i`-domino raises `var` by at most 2, and by at most 1 when `v` vanishes on
/// `[1, i]` or on `(i, n]`.
pub fn add_single_bound_holds(v: &[Q], d: &Domino) -> bool {
    let Some(i) = d.index() else { return true };
    let sum: Vec<Q> = v.iter().zip(d.values()).map(|(a, b)| a + b).collect();
    let before = var(v);
    let after = var(&sum);
    let separated = v[..i].iter().all(Zero::is_zero) || v[i..].iter().all(Zero::is_zero);
    after <= before + if separated { 1 } else { 2 }
}

/// An `I`-alternating domino sequence for `v = Σ ds`, as positions in `ds`: the `j`-th
/// domino is nonzero at `i_j` with the sign of `v_{i_j}`, and the signs alternate.
pub fn alternating_domino_sequence(
    ds: &[Domino],
    v: &[Q],
    idx: &[usize],
) -> Result<Option<Vec<usize>>> {
    if domino_sum(ds)? != v {
        return Err(Error::SumMismatch);
    }
    if idx.windows(2).any(|w| w[0] >= w[1]) || idx.iter().any(|&i| i == 0 || i > v.len()) {
        return Err(Error::Invalid(
            "index set must be strictly increasing within 1..=n".into(),
        ));
    }
    if !alternates_on(v, idx) {
        return Ok(None);
    }
    let seq: Vec<usize> = idx
        .iter()
        .map(|&i| {
            let s = sign(&v[i - 1]);
            ds.iter()
                .position(|d| sign(&d.values[i - 1]) == s)
                .expect("a summand carries the sign")
        })
        .collect();
    Ok(Some(seq))
}

/// `u` is a shuffle of `s` and `t`.
pub fn shuffle_check<T: PartialEq>(s: &[T], t: &[T], u: &[T]) -> bool {
    if u.len() != s.len() + t.len() {
        return false;
    }
    // ok[j]: u[..i+j] is a shuffle of s[..i] and t[..j].
    let mut ok = vec![false; t.len() + 1];
    for i in 0..=s.len() {
        for j in 0..=t.len() {
            ok[j] = if i == 0 && j == 0 {
                true
            } else {
                (i > 0 && ok[j] && s[i - 1] == u[i + j - 1])
                    || (j > 0 && ok[j - 1] && t[j - 1] == u[i + j - 1])
            };
        }
    }
    ok[t.len()]
}

// ---------------------------------------------------------------------------------------
// k = 2: the nine classes

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    Orthodox,
    Deviant,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Orthodox => "orthodox",
            Flavor::Deviant => "deviant",
        })
    }
}

/// Per class: ⊕-diagram rows (top, bottom) and standard basis rows (d, e). A `|` stands for
/// a possibly empty block of zero columns; in the diagram a bar with no bottom entry has
/// height one.
const TEMPLATES: [(&str, &str, &str, &str); 9] = [
    ("+|00|0|++|+", "+|++|+", "|++|++|00|00|-", "|00|00|++|++|+"),
    ("+|00|++|+", "+|++|+", "|++|++0|00|-", "|00|0++|++|+"),
    ("+|0+|+|+", "+|++|+", "|++|++|00|-", "|00|++|++|+"),
    ("+|++|0|+", "+|++|+", "|++|00|--|-", "|++|++|++|0"),
    ("+|++0|0|+", "+|0++|+", "|++|00|0--|-", "|++|++|++0|0"),
    (
        "+|++|00|0|+",
        "+|00|++|+",
        "|++|00|00|--|-",
        "|++|++|++|00|0",
    ),
    ("+|++|00|+", "+|00|++|+", "|++0|00|--|-", "|+++|++|00|0"),
    ("+|++0|+", "+|0++|+", "|++0|0--|-", "|+++|++0|0"),
    ("+|++|+", "+|++|+", "|++0|--|-", "|+++|++|0"),
];

pub fn class_flavor(class: u8) -> Flavor {
    if class <= 3 {
        Flavor::Orthodox
    } else {
        Flavor::Deviant
    }
}

/// Letter for a diagram column (top, bottom-or-missing).
fn diagram_letter(top: char, bottom: Option<char>) -> char {
    match (top, bottom) {
        ('+', Some('+')) => 'A',
        ('0', Some('0')) => 'B',
        ('0', Some('+')) => 'C',
        ('+', Some('0')) => 'D',
        ('+', None) => 'E',
        ('0', None) => 'F',
        _ => '?',
    }
}

/// Letter for a matrix column (sign of d, sign of e).
fn matrix_letter(sd: char, se: char) -> char {
    let idx = |c: char| match c {
        '+' => 0,
        '0' => 1,
        _ => 2,
    };
    (b'a' + (3 * idx(sd) + idx(se)) as u8) as char
}

fn diagram_regex(top: &str, bottom: &str) -> Regex {
    let b: Vec<char> = bottom.chars().collect();
    let mut pat = String::from("^");
    for (i, t) in top.chars().enumerate() {
        let bt = b.get(i).copied();
        if t == '|' {
            pat.push_str(if bt == Some('|') { "B*" } else { "F*" });
        } else {
            pat.push(diagram_letter(t, bt));
        }
    }
    pat.push('$');
    Regex::new(&pat).expect("valid template")
}

fn matrix_regex(d: &str, e: &str) -> Regex {
    let zero = matrix_letter('0', '0');
    let mut pat = String::from("^");
    for (a, b) in d.chars().zip(e.chars()) {
        if a == '|' {
            pat.push(zero);
            pat.push('*');
        } else {
            pat.push(matrix_letter(a, b));
        }
    }
    pat.push('$');
    Regex::new(&pat).expect("valid template")
}

static DIAGRAM_TEMPLATES: LazyLock<Vec<Regex>> = LazyLock::new(|| {
    TEMPLATES
        .iter()
        .map(|(t, b, _, _)| diagram_regex(t, b))
        .collect()
});

static MATRIX_TEMPLATES: LazyLock<Vec<Regex>> = LazyLock::new(|| {
    TEMPLATES
        .iter()
        .map(|(_, _, d, e)| matrix_regex(d, e))
        .collect()
});

fn diagram_word(d: &OPlusDiagram) -> Option<String> {
    let rows = d.rows();
    if rows.len() != 2 {
        return None;
    }
    let ch = |b: bool| if b { '+' } else { '0' };
    Some(
        (0..rows[0].len())
            .map(|c| diagram_letter(ch(rows[0][c]), rows[1].get(c).map(|&b| ch(b))))
            .collect(),
    )
}

fn sign_char(x: &Q) -> char {
    match sign(x) {
        1 => '+',
        -1 => '-',
        _ => '0',
    }
}

fn matrix_word(d: &[Q], e: &[Q]) -> String {
    d.iter()
        .zip(e)
        .map(|(a, b)| matrix_letter(sign_char(a), sign_char(b)))
        .collect()
}

/// Every class (1..=9) whose diagram template `d` matches.
pub fn matching_classes(d: &OPlusDiagram) -> Vec<u8> {
    let Some(word) = diagram_word(d) else {
        return Vec::new();
    };
    (1..=9)
        .filter(|&c| DIAGRAM_TEMPLATES[c as usize - 1].is_match(&word))
        .collect()
}

/// The class of a diagram in `D_{n,2,4}`.
pub fn classify_k2(d: &OPlusDiagram) -> Result<u8> {
    match matching_classes(d).as_slice() {
        [c] => Ok(*c),
        _ => Err(Error::NotK2Bcfw),
    }
}

/// `d` and `e` fit the sign template of a class.
pub fn fits_matrix_template(class: u8, d: &[Q], e: &[Q]) -> bool {
    (1..=9).contains(&class) && MATRIX_TEMPLATES[class as usize - 1].is_match(&matrix_word(d, e))
}

/// Standard basis vectors and fundamental dominoes of a point in a `k=2` BCFW cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct K2Classification {
    pub class: u8,
    pub flavor: Flavor,
    pub d: Vec<Q>,
    pub e: Vec<Q>,
    pub dominoes: [Domino; 4],
}

impl K2Classification {
    pub fn indices(&self) -> [usize; 4] {
        self.dominoes
            .clone()
            .map(|d| d.index().expect("fundamental dominoes are nonzero"))
    }

    /// The index inequalities of the flavor.
    pub fn indices_ok(&self) -> bool {
        let [i1, i2, i3, i4] = self.indices();
        match self.flavor {
            Flavor::Orthodox => i1 + 1 < i2 && i2 <= i3 && i3 + 1 < i4,
            Flavor::Deviant => i1 + 1 < i2 + 1 && i2 + 1 < i3 && i3 <= i4,
        }
    }

    pub fn dominoes_independent(&self) -> bool {
        let n = self.d.len();
        let m = RationalMatrix::from_rows(
            n,
            self.dominoes.iter().map(|d| d.values().to_vec()).collect(),
        )
        .expect("equal lengths");
        m.rank() == 4
    }
}

/// Splits `w` into consecutive same-sign pairs from the left.
fn split_pairs(w: &[Q]) -> Option<Vec<Domino>> {
    let n = w.len();
    let mut out = Vec::new();
    let mut i = 0;
    while i < n {
        if w[i].is_zero() {
            i += 1;
            continue;
        }
        if i + 1 >= n || sign(&w[i]) != sign(&w[i + 1]) {
            return None;
        }
        out.push(Domino::pair(n, i + 1, w[i].clone(), w[i + 1].clone()).ok()?);
        i += 2;
    }
    Some(out)
}

/// Up to scale, the vectors of a 2-dimensional row space vanishing at a single coordinate,
/// in order of that coordinate.
fn vanishing_directions(v: &RationalMatrix) -> Vec<Vec<Q>> {
    let mut out: Vec<Vec<Q>> = Vec::new();
    for j in 0..v.cols() {
        let (a, b) = (v.get(0, j), v.get(1, j));
        if a.is_zero() && b.is_zero() {
            continue;
        }
        let c: Vec<Q> = (0..v.cols())
            .map(|l| b * v.get(0, l) - a * v.get(1, l))
            .collect();
        let lead = c.iter().find(|x| !x.is_zero()).expect("rank two").clone();
        let c: Vec<Q> = c.iter().map(|x| x / &lead).collect();
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

/// Finds the standard basis `d, e` of `V ∈ S_D` for `D ∈ D_{n,2,4}` and its fundamental
/// dominoes. Both `d` and `e` vanish at a coordinate where `V` does not, so they are among the
/// vectors of `V` vanishing at one coordinate; the class template picks them out.
pub fn standard_basis_k2(v: &RationalMatrix, diagram: &OPlusDiagram) -> Result<K2Classification> {
    let class = classify_k2(diagram)?;
    if v.rows() != 2 || v.cols() != diagram.n() {
        return Err(Error::ShapeMismatch(format!(
            "expected a 2×{} matrix",
            diagram.n()
        )));
    }
    if v.rank() != 2 {
        return Err(Error::RankDeficient);
    }
    let mismatch = |why: &str| Error::TemplateMismatch(format!("class {class}: {why}"));
    let mut candidates = Vec::new();
    for c in vanishing_directions(v) {
        candidates.push(c.iter().map(|x| -x).collect::<Vec<Q>>());
        candidates.push(c);
    }
    let (d, e) = candidates
        .iter()
        .flat_map(|d| candidates.iter().map(move |e| (d, e)))
        .find(|(d, e)| fits_matrix_template(class, d, e))
        .ok_or_else(|| mismatch("no basis fits the sign template"))?;
    let flavor = class_flavor(class);
    let (d, e) = (d.clone(), e.clone());
    let (d, dominoes) = match flavor {
        Flavor::Orthodox => {
            let first = split_pairs(&bar(&d))
                .filter(|p| p.len() == 2)
                .ok_or_else(|| mismatch("d̄ is not two dominoes"))?;
            let second = split_pairs(&bar(&e))
                .filter(|p| p.len() == 2)
                .ok_or_else(|| mismatch("ē is not two dominoes"))?;
            let [d1, d2]: [Domino; 2] = first.try_into().expect("two");
            let [d3, d4]: [Domino; 2] = second.try_into().expect("two");
            (d, [d1, d2, d3, d4])
        }
        Flavor::Deviant => {
            let i1 = d.iter().position(|x| !x.is_zero()).expect("nonzero");
            let scale = &e[i1] / &d[i1];
            let d: Vec<Q> = d.iter().map(|x| x * &scale).collect();
            let pairs = split_pairs(&bar(&d))
                .filter(|p| p.len() == 2)
                .ok_or_else(|| mismatch("d̄ is not two dominoes"))?;
            let [d1, minus_d4]: [Domino; 2] = pairs.try_into().expect("two");
            let rest: Vec<Q> = e.iter().zip(d1.values()).map(|(a, b)| a - b).collect();
            let pairs = split_pairs(&rest)
                .filter(|p| p.len() == 2)
                .ok_or_else(|| mismatch("e − d⁽¹⁾ is not two dominoes"))?;
            let [d2, d3]: [Domino; 2] = pairs.try_into().expect("two");
            (d, [d1, d2, d3, minus_d4.scaled(&q(-1))])
        }
    };
    let out = K2Classification {
        class,
        flavor,
        d,
        e,
        dominoes,
    };
    if out.dominoes.iter().any(|x| x.sign() != 1) {
        return Err(mismatch("fundamental dominoes are not positive"));
    }
    if !out.indices_ok() {
        return Err(mismatch("index inequalities fail"));
    }
    if !out.dominoes_independent() {
        return Err(mismatch("fundamental dominoes are dependent"));
    }
    Ok(out)
}

/// The coefficients `α` with `v̄ = Σ α_j d⁽ʲ⁾`.
pub fn dom_alphas(c: &K2Classification, v: &[Q]) -> Result<Vec<Q>> {
    let n = c.d.len();
    if v.len() != n {
        return Err(Error::ShapeMismatch(format!(
            "vector of length {} for n = {n}",
            v.len()
        )));
    }
    let cols =
        RationalMatrix::from_rows(n, c.dominoes.iter().map(|d| d.values().to_vec()).collect())?
            .transpose();
    cols.solve_unique(&bar(v))?.ok_or(Error::NotInSpan)
}

/// `dom_V(v)`: the sign vector of the fundamental-domino coefficients of `v̄`.
pub fn dom_coordinates(c: &K2Classification, v: &[Q]) -> Result<SignVector> {
    Ok(SignVector::of(&dom_alphas(c, v)?))
}

/// The sign patterns a zero-free `dom_V(v)` can take for each flavor.
pub fn allowed_dom_patterns(flavor: Flavor) -> Vec<SignVector> {
    let base: &[&str] = match flavor {
        Flavor::Orthodox => &["++++", "++--"],
        Flavor::Deviant => &["+++-", "-+++", "++++"],
    };
    base.iter()
        .flat_map(|s| {
            let p: SignVector = s.parse().expect("valid");
            [p.negate(), p]
        })
        .collect()
}

fn proportional(a: &[Q], b: &[Q]) -> bool {
    let Some(i) = b.iter().position(|x| !x.is_zero()) else {
        return a.iter().all(Zero::is_zero);
    };
    let r = &a[i] / &b[i];
    a.iter().zip(b).all(|(x, y)| *x == &r * y)
}

/// Vectors `v ∈ V` with `|supp(v̄)| ≤ 4` that are not multiples of `d` or `e` (orthodox)
/// or of `d` or `d − e` (deviant). Exhaustive: a direction with small support either vanishes
/// at a coordinate where `V` does not, or every direction has small support (then a generic
/// combination is returned).
pub fn low_support_counterexamples(c: &K2Classification) -> Result<Vec<Vec<Q>>> {
    let n = c.d.len();
    let v = RationalMatrix::from_rows(n, vec![c.d.clone(), c.e.clone()])?;
    let small = |x: &[Q]| bar(x).iter().filter(|y| !y.is_zero()).count() <= 4;
    let generic: Vec<Q> =
        c.d.iter()
            .zip(&c.e)
            .map(|(a, b)| a * q(7919) + b * q(104729))
            .collect();
    let union = (0..n - 1)
        .filter(|&i| !c.d[i].is_zero() || !c.e[i].is_zero())
        .count();
    if union <= 4 && small(&generic) {
        return Ok(vec![generic]);
    }
    let allowed: Vec<Vec<Q>> = match c.flavor {
        Flavor::Orthodox => vec![c.d.clone(), c.e.clone()],
        Flavor::Deviant => vec![
            c.d.clone(),
            c.d.iter().zip(&c.e).map(|(a, b)| a - b).collect(),
        ],
    };
    Ok(vanishing_directions(&v)
        .into_iter()
        .chain([c.d.clone(), c.e.clone()])
        .filter(|x| small(x) && !allowed.iter().any(|a| proportional(x, a)))
        .collect())
}

/// `v̄` is a sum or difference of two nonzero same-sign dominoes with disjoint supports.
pub fn is_orthodox_or_deviant(v: &[Q]) -> bool {
    split_pairs(&bar(v)).is_some_and(|p| p.len() == 2 && p[0].index() < p[1].index().map(|i| i - 1))
}

// ---------------------------------------------------------------------------------------
// m = 2

/// The basis `v⁽¹⁾..v⁽ᵏ⁾` of `V ∈ S_D` (`D ∈ D_{n,k,2}`) with `v⁽ⁱ⁾` supported on
/// `{s_i, s_i+1, n}`, `v⁽ⁱ⁾_{s_i} = 1`, `v⁽ⁱ⁾_{s_i+1} > 0` and `(−1)^{k−i} v⁽ⁱ⁾_n > 0`.
pub fn m2_standard_basis(v: &RationalMatrix, d: &OPlusDiagram) -> Result<Vec<Vec<Q>>> {
    let k = d.k();
    let n = d.n();
    if v.rows() != k || v.cols() != n {
        return Err(Error::ShapeMismatch(format!("expected a {k}×{n} matrix")));
    }
    let sources = d.vertical_labels();
    sources
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let mismatch = || Error::TemplateMismatch(format!("row {}", i + 1));
            let outside: Vec<usize> = (1..=n)
                .filter(|&j| j != s && j != s + 1 && j != n)
                .collect();
            let system = RationalMatrix::from_rows(
                k,
                outside
                    .iter()
                    .map(|&j| (0..k).map(|r| v.get(r, j - 1).clone()).collect())
                    .collect(),
            )?;
            let kernel = system.kernel_basis();
            if kernel.len() != 1 {
                return Err(mismatch());
            }
            let w: Vec<Q> = (0..n)
                .map(|j| (0..k).map(|r| &kernel[0][r] * v.get(r, j)).sum())
                .collect();
            if w[s - 1].is_zero() {
                return Err(mismatch());
            }
            let lead = w[s - 1].clone();
            let w: Vec<Q> = w.iter().map(|x| x / &lead).collect();
            let last_sign = if (k - i - 1) % 2 == 0 { 1 } else { -1 };
            let ok = (s == n - 1 || w[s].is_positive()) && sign(&w[n - 1]) == last_sign;
            if ok {
                Ok(w)
            } else {
                Err(mismatch())
            }
        })
        .collect()
}

// ---------------------------------------------------------------------------------------
// Dyck-path domino bases

/// The pieces `v⁽ⁱ⁾ = d⁽ⁱ⁾ + e⁽ⁱ⁾ + f⁽ⁱ⁾` of a `P`-domino basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PDominoBasis {
    pub vectors: Vec<Vec<Q>>,
    pub d: Vec<Domino>,
    pub e: Vec<Domino>,
    pub f: Vec<Domino>,
}

/// Solves for a `P`-domino basis of the row span of `v`, row by row: `v⁽ⁱ⁾ ∈ V` minus its two
/// unknown dominoes must equal the known `f⁽ⁱ⁾`. `None` when the template has no solution with
/// the required signs.
pub fn p_domino_basis(v: &RationalMatrix, p: &DyckPath) -> Result<Option<PDominoBasis>> {
    let labels = dyck_step_labels(p);
    let k = labels.up.len();
    let n = p.n();
    if v.rows() != k || v.cols() != n {
        return Err(Error::ShapeMismatch(format!(
            "expected a {k}×{n} matrix for this Dyck path"
        )));
    }
    let mut out = PDominoBasis {
        vectors: Vec::new(),
        d: Vec::new(),
        e: Vec::new(),
        f: Vec::new(),
    };
    for i in 0..k {
        let (up, down) = (labels.up[i], labels.down[i]);
        let inside = labels.up.iter().filter(|&&u| up < u && u < down).count();
        let e_sign = if inside % 2 == 0 { 1 } else { -1 };
        let f = if labels.on_axis[i] {
            let mut x = vec![Q::zero(); n];
            x[n - 1] = q(if (k - i - 1) % 2 == 0 { 1 } else { -1 });
            Domino::new(x)?
        } else {
            let prev = labels.previous[i].expect("an earlier up step at this height");
            out.d[prev].scaled(&q(if (i - prev - 1) % 2 == 0 { 1 } else { -1 }))
        };
        // Unknowns: k row coefficients, then d⁽ⁱ⁾ at up, up+1 and e⁽ⁱ⁾ at down, down+1.
        let rows: Vec<Vec<Q>> = (1..=n)
            .map(|j| {
                let mut row: Vec<Q> = (0..k).map(|r| v.get(r, j - 1).clone()).collect();
                for col in [up, up + 1, down, down + 1] {
                    row.push(if col == j { q(-1) } else { Q::zero() });
                }
                row
            })
            .collect();
        let system = RationalMatrix::from_rows(k + 4, rows)?;
        let Some(x) = system.solve(f.values())? else {
            return Ok(None);
        };
        let (di, ei) = (&x[k..k + 2], &x[k + 2..]);
        if !di.iter().all(Signed::is_positive) || !ei.iter().all(|y| sign(y) == e_sign) {
            return Ok(None);
        }
        let vec_i: Vec<Q> = (0..n)
            .map(|j| (0..k).map(|r| &x[r] * v.get(r, j)).sum())
            .collect();
        out.d
            .push(Domino::pair(n, up, di[0].clone(), di[1].clone())?);
        out.e
            .push(Domino::pair(n, down, ei[0].clone(), ei[1].clone())?);
        out.f.push(f);
        out.vectors.push(vec_i);
    }
    let m = RationalMatrix::from_rows(n, out.vectors.clone())?;
    if m.rank() != k {
        return Ok(None);
    }
    Ok(Some(out))
}

/// `v = c·w` for some `c > 0`.
pub fn positively_proportional(v: &[Q], w: &[Q]) -> bool {
    let Some(i) = w.iter().position(|x| !x.is_zero()) else {
        return false;
    };
    let r = &v[i] / &w[i];
    r.is_positive() && v.iter().zip(w).all(|(x, y)| *x == &r * y)
}
