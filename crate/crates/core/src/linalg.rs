//! Exact rational matrices, Plücker coordinates, network parameterizations of positroid
//! cells, totally positive matrices, the amplituhedron map and kernel sign-pattern search.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde_json::json;

use crate::diagrams::OPlusDiagram;
use crate::error::{Error, Result};
use crate::plabic::build_network;
use crate::util::k_subsets;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|e| Error::Invalid(format!("bad rational {s:?}: {e}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::Invalid(format!("zero denominator in {s:?}")));
            }
            Ok(Q::new(parse_int(n)?, d))
        }
        None => Ok(Q::from_integer(parse_int(s)?)),
    }
}

pub fn q_string(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// A dense matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<Q>>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![vec![Q::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = Q::one();
        }
        m
    }

    /// Builds from rows; `cols` is needed when there are no rows.
    pub fn from_rows(cols: usize, data: Vec<Vec<Q>>) -> Result<Self> {
        if data.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch(format!(
                "every row must have {cols} entries"
            )));
        }
        Ok(RationalMatrix {
            rows: data.len(),
            cols,
            data,
        })
    }

    pub fn from_i64(cols: usize, data: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            cols,
            data.iter()
                .map(|r| r.iter().map(|&x| q(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Q {
        &self.data[r][c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        self.data[r][c] = v;
    }

    pub fn row(&self, r: usize) -> &[Q] {
        &self.data[r]
    }

    pub fn data(&self) -> &[Vec<Q>] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let data = (0..self.cols)
            .map(|c| (0..self.rows).map(|r| self.data[r][c].clone()).collect())
            .collect();
        RationalMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}×{} by {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = (0..self.rows)
            .map(|i| {
                (0..other.cols)
                    .map(|j| {
                        let mut acc = Q::zero();
                        for l in 0..self.cols {
                            if !self.data[i][l].is_zero() && !other.data[l][j].is_zero() {
                                acc += &self.data[i][l] * &other.data[l][j];
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        Ok(RationalMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    pub fn mul_vec(&self, v: &[Q]) -> Result<Vec<Q>> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok(self.data.iter().map(|r| dot(r, v)).collect())
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.data.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            let inv = m[r][c].recip();
            for x in m[r].iter_mut() {
                *x *= &inv;
            }
            for i in 0..self.rows {
                if i != r && !m[i][c].is_zero() {
                    let f = m[i][c].clone();
                    let pivot_row = m[r].clone();
                    for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                        if !y.is_zero() {
                            *x -= &f * y;
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (
            RationalMatrix {
                rows: self.rows,
                cols: self.cols,
                data: m,
            },
            pivots,
        )
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of the right null space, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<Q>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Q::zero(); self.cols];
                v[f] = Q::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r.data[i][f].clone();
                }
                v
            })
            .collect()
    }

    /// A solution of `self · x = b` (free variables set to zero), or `None` if inconsistent.
    pub fn solve(&self, b: &[Q]) -> Result<Option<Vec<Q>>> {
        if b.len() != self.rows {
            return Err(Error::ShapeMismatch(
                "right-hand side length differs from row count".into(),
            ));
        }
        let aug = RationalMatrix {
            rows: self.rows,
            cols: self.cols + 1,
            data: self
                .data
                .iter()
                .zip(b)
                .map(|(r, x)| r.iter().cloned().chain([x.clone()]).collect())
                .collect(),
        };
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Q::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.data[i][self.cols].clone();
        }
        Ok(Some(x))
    }

    /// Solves `self · x = b` requiring a unique solution.
    pub fn solve_unique(&self, b: &[Q]) -> Result<Option<Vec<Q>>> {
        if self.rank() < self.cols {
            return Ok(None);
        }
        self.solve(b)
    }

    /// Each row scaled to integers by the lcm of its denominators.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        self.data
            .iter()
            .map(|r| {
                let l = r.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                r.iter()
                    .map(|x| (x * Q::from_integer(l.clone())).to_integer())
                    .collect()
            })
            .collect()
    }

    /// Maximal minor on the given 1-based columns.
    pub fn minor(&self, cols: &[usize]) -> Q {
        let sub = RationalMatrix {
            rows: self.rows,
            cols: cols.len(),
            data: self
                .data
                .iter()
                .map(|r| cols.iter().map(|&c| r[c - 1].clone()).collect())
                .collect(),
        };
        sub.det()
    }

    /// Determinant of a square matrix, by fraction-free elimination.
    pub fn det(&self) -> Q {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let scale = self.data.iter().fold(Q::one(), |acc, r| {
            let l = r.iter().fold(BigInt::one(), |a, x| a.lcm(x.denom()));
            acc * Q::from_integer(l)
        });
        Q::from_integer(bareiss_det(self.integer_rows())) / scale
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.data
                .iter()
                .map(|r| serde_json::Value::Array(r.iter().map(|x| json!(q_string(x))).collect()))
                .collect(),
        )
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let rows = v
            .as_array()
            .ok_or_else(|| Error::Invalid("matrix must be an array of rows".into()))?;
        let data = rows
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| Error::Invalid("row must be an array".into()))?
                    .iter()
                    .map(|x| match x {
                        serde_json::Value::String(s) => parse_q(s),
                        serde_json::Value::Number(n) => parse_q(&n.to_string()),
                        _ => Err(Error::Invalid("entries must be \"num/den\" strings".into())),
                    })
                    .collect::<Result<Vec<Q>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let cols = data.first().map_or(0, Vec::len);
        Self::from_rows(cols, data)
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .data
            .iter()
            .map(|r| r.iter().map(q_string).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "[{}]", rows.join(" ; "))
    }
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// A point of `Gr_{k,n}` as its Plücker vector over lexicographic `k`-subsets, stored as a
/// primitive integer vector whose first nonzero entry is positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GrassmannPoint {
    k: usize,
    n: usize,
    coords: Vec<BigInt>,
}

impl GrassmannPoint {
    pub fn new(k: usize, n: usize, coords: Vec<Q>) -> Result<Self> {
        if coords.len() as u128 != crate::util::binomial(n, k) {
            return Err(Error::ShapeMismatch(format!("need C({n},{k}) coordinates")));
        }
        if coords.iter().all(Zero::is_zero) {
            return Err(Error::RankDeficient);
        }
        let l = coords.iter().fold(BigInt::one(), |a, x| a.lcm(x.denom()));
        let mut ints: Vec<BigInt> = coords
            .iter()
            .map(|x| (x * Q::from_integer(l.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |a, x| a.gcd(x));
        let first_negative = ints
            .iter()
            .find(|x| !x.is_zero())
            .is_some_and(|x| x.is_negative());
        for x in ints.iter_mut() {
            *x = &*x / &g;
            if first_negative {
                *x = -&*x;
            }
        }
        Ok(GrassmannPoint { k, n, coords: ints })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    /// Coordinate `Δ_I` for a sorted 1-based subset `I`.
    pub fn coordinate(&self, subset: &[usize]) -> Option<&BigInt> {
        k_subsets(self.n, self.k)
            .iter()
            .position(|s| s == subset)
            .map(|i| &self.coords[i])
    }

    /// Subsets with nonzero coordinate.
    pub fn support(&self) -> Vec<Vec<usize>> {
        k_subsets(self.n, self.k)
            .into_iter()
            .zip(&self.coords)
            .filter(|(_, x)| !x.is_zero())
            .map(|(s, _)| s)
            .collect()
    }

    /// All nonzero coordinates share a sign.
    pub fn is_nonnegative(&self) -> bool {
        self.coords.iter().all(|x| !x.is_negative())
    }

    pub fn is_positive(&self) -> bool {
        self.coords.iter().all(|x| x.is_positive())
    }

    /// The three-term Plücker relation `Δ_{Sac}Δ_{Sbd} = Δ_{Sab}Δ_{Scd} + Δ_{Sad}Δ_{Sbc}` for
    /// `a < b < c < d` outside the `(k-2)`-set `S`.
    pub fn three_term_relation_holds(
        &self,
        s: &[usize],
        a: usize,
        b: usize,
        c: usize,
        d: usize,
    ) -> bool {
        let co = |x: usize, y: usize| {
            let mut v: Vec<usize> = s.iter().copied().chain([x, y]).collect();
            v.sort_unstable();
            self.coordinate(&v).cloned().unwrap_or_default()
        };
        co(a, c) * co(b, d) == co(a, b) * co(c, d) + co(a, d) * co(b, c)
    }

    /// JSON with the first nonzero coordinate scaled to 1; zero coordinates are omitted.
    pub fn to_json(&self) -> serde_json::Value {
        let first = self
            .coords
            .iter()
            .find(|x| !x.is_zero())
            .cloned()
            .expect("nonzero point");
        let mut map = serde_json::Map::new();
        for (s, x) in k_subsets(self.n, self.k).iter().zip(&self.coords) {
            if !x.is_zero() {
                let key = s
                    .iter()
                    .map(|i| i.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                map.insert(key, json!(q_string(&Q::new(x.clone(), first.clone()))));
            }
        }
        json!({"k": self.k, "n": self.n, "plucker": map})
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let get = |f: &str| v.get(f).and_then(|x| x.as_u64()).map(|x| x as usize);
        let (k, n) = get("k")
            .zip(get("n"))
            .ok_or_else(|| Error::Invalid("missing k or n".into()))?;
        let map = v
            .get("plucker")
            .and_then(|x| x.as_object())
            .ok_or_else(|| Error::Invalid("missing plucker".into()))?;
        let coords = k_subsets(n, k)
            .iter()
            .map(|s| {
                let key = s
                    .iter()
                    .map(|i| i.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                match map.get(&key) {
                    Some(serde_json::Value::String(x)) => parse_q(x),
                    Some(_) => Err(Error::Invalid("coordinates must be strings".into())),
                    None => Ok(Q::zero()),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(k, n, coords)
    }
}

/// All maximal minors in lexicographic order, normalized projectively.
pub fn plucker(m: &RationalMatrix) -> Result<GrassmannPoint> {
    let k = m.rows();
    let n = m.cols();
    if k > n {
        return Err(Error::RankDeficient);
    }
    let ints = m.integer_rows();
    let coords = k_subsets(n, k)
        .iter()
        .map(|s| {
            let sub = ints
                .iter()
                .map(|r| s.iter().map(|&c| r[c - 1].clone()).collect())
                .collect();
            Q::from_integer(bareiss_det(sub))
        })
        .collect();
    GrassmannPoint::new(k, n, coords)
}

/// Projective equality of two Plücker vectors.
pub fn gr_equal(p: &GrassmannPoint, q: &GrassmannPoint) -> Result<bool> {
    if p.k != q.k || p.n != q.n {
        return Err(Error::ShapeMismatch(format!(
            "Gr({},{}) vs Gr({},{})",
            p.k, p.n, q.k, q.n
        )));
    }
    Ok(p == q)
}

/// The matrix `A` of a Le-diagram's network at the given edge weights: row `s_i` has 1 in
/// column `s_i` and `(−1)^{#sources strictly between s_i and j}` times the path sum in column `j`.
pub fn parameterize(d: &OPlusDiagram, vals: &[Q]) -> Result<RationalMatrix> {
    let net = build_network(d)?;
    let sums = net.path_sums(vals)?;
    let sources = net.sources();
    let n = d.n();
    let data = sources
        .iter()
        .zip(sums)
        .map(|(&s, row)| {
            (1..=n)
                .map(|j| {
                    if j == s {
                        return Q::one();
                    }
                    if sources.contains(&j) || row[j - 1].is_zero() {
                        return Q::zero();
                    }
                    let between = sources
                        .iter()
                        .filter(|&&x| s.min(j) < x && x < s.max(j))
                        .count();
                    if between % 2 == 0 {
                        row[j - 1].clone()
                    } else {
                        -row[j - 1].clone()
                    }
                })
                .collect()
        })
        .collect();
    RationalMatrix::from_rows(n, data)
}

/// A positive rational `p/q` with `p, q` uniform in `[1, 50]`.
pub fn random_positive<R: Rng>(rng: &mut R) -> Q {
    q_frac(rng.gen_range(1..=50), rng.gen_range(1..=50))
}

/// A point of a positroid cell: the diagram, the edge weights and the resulting matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellSample {
    pub diagram: OPlusDiagram,
    pub values: Vec<Q>,
    pub matrix: RationalMatrix,
}

impl CellSample {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "diagram": self.diagram.to_json(),
            "values": self.values.iter().map(q_string).collect::<Vec<_>>(),
            "matrix": self.matrix.to_json(),
        })
    }
}

/// Samples the cell of a Le-diagram at random positive edge weights.
pub fn sample_cell<R: Rng>(d: &OPlusDiagram, rng: &mut R) -> Result<CellSample> {
    let net = build_network(d)?;
    let values: Vec<Q> = (0..net.variable_count())
        .map(|_| random_positive(rng))
        .collect();
    let matrix = parameterize(d, &values)?;
    Ok(CellSample {
        diagram: d.clone(),
        values,
        matrix,
    })
}

/// The Le-diagram of a diagram's cell (normalizing by Le-moves if needed).
pub fn le_form(d: &OPlusDiagram) -> Result<OPlusDiagram> {
    if d.is_le_diagram() {
        Ok(d.clone())
    } else {
        d.le_normalize()
    }
}

/// `V` lies in the cell `S_D`: its Plücker coordinates are nonnegative (up to a global sign)
/// and their support is the positroid of `π_D`.
pub fn positroid_membership(m: &RationalMatrix, d: &OPlusDiagram) -> Result<bool> {
    let p = plucker(m)?;
    if p.k() != d.k() || p.n() != d.n() {
        return Err(Error::ShapeMismatch(format!(
            "matrix is {}×{}, diagram has type ({},{})",
            p.k(),
            p.n(),
            d.k(),
            d.n()
        )));
    }
    Ok(p.is_nonnegative() && p.support() == d.pipe_dream_permutation().positroid())
}

/// Generalized Vandermonde matrix `Z_{ij} = t_j^{i-1}` (nodes `1..n` by default), returned
/// only after every maximal minor has been checked positive.
pub fn make_tp_matrix(rows: usize, n: usize, nodes: Option<&[Q]>) -> Result<RationalMatrix> {
    if rows > n {
        return Err(Error::BadRange(format!("need rows <= n, got {rows} > {n}")));
    }
    let t: Vec<Q> = match nodes {
        Some(t) if t.len() == n => t.to_vec(),
        Some(_) => return Err(Error::ShapeMismatch(format!("need {n} nodes"))),
        None => (1..=n as i64).map(q).collect(),
    };
    let data = (0..rows)
        .map(|i| t.iter().map(|x| num_traits::pow(x.clone(), i)).collect())
        .collect();
    let z = RationalMatrix::from_rows(n, data)?;
    let p = plucker(&z).map_err(|_| Error::NotTotallyPositive)?;
    // `plucker` fixes the sign of the first coordinate, so also check that one directly.
    if !p.is_positive() || z.minor(&(1..=rows).collect::<Vec<_>>()) <= Q::zero() {
        return Err(Error::NotTotallyPositive);
    }
    Ok(z)
}

/// `Z̃(V)`: the row span of `V · Zᵀ`.
pub fn z_map(z: &RationalMatrix, v: &RationalMatrix) -> Result<GrassmannPoint> {
    if z.cols() != v.cols() {
        return Err(Error::ShapeMismatch(format!(
            "Z has {} columns, V has {}",
            z.cols(),
            v.cols()
        )));
    }
    let image = v.mul(&z.transpose())?;
    plucker(&image).map_err(|_| Error::RankLoss)
}

/// Searches `ker Z` for a vector with the given strict sign pattern (entries ±1): first by
/// projecting random vectors with those signs onto the kernel, then by an exact phase-1
/// simplex on `Z v = 0, pattern_i · v_i ≥ 1`. `None` means no such vector exists.
pub fn find_kernel_vector_with_signs<R: Rng>(
    z: &RationalMatrix,
    pattern: &[i8],
    rng: &mut R,
    attempts: usize,
) -> Result<Option<Vec<Q>>> {
    if pattern.len() != z.cols() || pattern.iter().any(|&s| s != 1 && s != -1) {
        return Err(Error::ShapeMismatch(
            "pattern must have one ±1 per column".into(),
        ));
    }
    let basis = z.kernel_basis();
    if basis.is_empty() {
        return Ok(None);
    }
    let has_pattern = |v: &[Q]| {
        v.iter().zip(pattern).all(|(x, &s)| {
            if s > 0 {
                x.is_positive()
            } else {
                x.is_negative()
            }
        })
    };
    for b in &basis {
        for sign in [1, -1] {
            let v: Vec<Q> = b.iter().map(|x| x * q(sign)).collect();
            if has_pattern(&v) {
                return Ok(Some(v));
            }
        }
    }
    // Projection onto ker Z along its orthogonal complement: x - Zᵀ (Z Zᵀ)⁺ Z x.
    let (zr, pivots) = z.rref();
    let zr = RationalMatrix::from_rows(z.cols(), zr.data[..pivots.len()].to_vec())?;
    let gram = zr.mul(&zr.transpose())?;
    for _ in 0..attempts {
        let x: Vec<Q> = pattern
            .iter()
            .map(|&s| q(s as i64) * random_positive(rng))
            .collect();
        let zx = zr.mul_vec(&x)?;
        let y = gram.solve(&zx)?.expect("Gram matrix is invertible");
        let correction = zr.transpose().mul_vec(&y)?;
        let v: Vec<Q> = x.iter().zip(&correction).map(|(a, b)| a - b).collect();
        if has_pattern(&v) {
            return Ok(Some(v));
        }
    }
    // v_i = s_i (1 + u_i) with u ≥ 0: Z diag(s) u = -Z s.
    let a = RationalMatrix::from_rows(
        z.cols(),
        zr.data
            .iter()
            .map(|r| {
                r.iter()
                    .zip(pattern)
                    .map(|(x, &s)| x * q(s as i64))
                    .collect()
            })
            .collect(),
    )?;
    let s: Vec<Q> = pattern.iter().map(|&x| q(x as i64)).collect();
    let b: Vec<Q> = zr.mul_vec(&s)?.into_iter().map(|x| -x).collect();
    Ok(phase_one_feasible(&a, &b).map(|u| {
        u.iter()
            .zip(&s)
            .map(|(ui, si)| si * (Q::one() + ui))
            .collect()
    }))
}

/// A nonnegative solution of `A u = b` by the phase-1 simplex method with Bland's rule.
pub fn phase_one_feasible(a: &RationalMatrix, b: &[Q]) -> Option<Vec<Q>> {
    let m = a.rows();
    let n = a.cols();
    // Tableau columns: n originals, m artificials, rhs.
    let mut t: Vec<Vec<Q>> = (0..m)
        .map(|i| {
            let flip = if b[i].is_negative() { q(-1) } else { q(1) };
            let mut row: Vec<Q> = a.row(i).iter().map(|x| x * &flip).collect();
            row.extend((0..m).map(|j| if i == j { Q::one() } else { Q::zero() }));
            row.push(&b[i] * &flip);
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();
    let width = n + m;
    loop {
        // Reduced costs for minimizing the sum of artificials.
        let cost = |j: usize| -> Q {
            let c_j = if j >= n { Q::one() } else { Q::zero() };
            let mut z_j = Q::zero();
            for (i, &bi) in basis.iter().enumerate() {
                if bi >= n {
                    z_j += &t[i][j];
                }
            }
            c_j - z_j
        };
        let Some(enter) = (0..width).find(|&j| !basis.contains(&j) && cost(j).is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Q)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (r, _) = leave?;
        let inv = t[r][enter].recip();
        for x in t[r].iter_mut() {
            *x *= &inv;
        }
        let pivot = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != r && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        basis[r] = enter;
    }
    let infeasibility: Q = basis
        .iter()
        .enumerate()
        .filter(|(_, &bi)| bi >= n)
        .map(|(i, _)| t[i][width].clone())
        .sum();
    if !infeasibility.is_zero() {
        return None;
    }
    let mut u = vec![Q::zero(); n];
    for (i, &bi) in basis.iter().enumerate() {
        if bi < n {
            u[bi] = t[i][width].clone();
        }
    }
    Some(u)
}
