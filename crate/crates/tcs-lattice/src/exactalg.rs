//! Exact integer and rational linear algebra.
//!
//! Vectors are rows throughout: a matrix acts on the right of a row vector,
//! and a lattice element `x` pairs with `y` as `x·G·yᵀ`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Int = BigInt;
pub type Rat = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("cannot parse matrix: {0}")]
    Parse(String),
    #[error("matrix is singular")]
    Singular,
}

pub fn int(v: i64) -> Int {
    BigInt::from(v)
}

pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_from_int(v: &Int) -> Rat {
    BigRational::from_integer(v.clone())
}

/// Dense integer matrix in row-major order. Zero-row matrices are allowed and
/// represent empty bases.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMat {
    pub fn new(rows: usize, cols: usize, data: Vec<Int>) -> Result<Self, MatError> {
        if data.len() != rows * cols {
            return Err(MatError::Dimension(format!(
                "{} entries for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(IntMat { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            data: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Int::one();
        }
        m
    }

    /// Builds a matrix from rows of equal length. The column count of an
    /// empty row list is taken from `cols`.
    pub fn from_rows(rows: Vec<Vec<Int>>, cols: usize) -> Result<Self, MatError> {
        let r = rows.len();
        let c = if r == 0 { cols } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != c {
                return Err(MatError::Dimension(format!(
                    "row {i} has {} entries, expected {c}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(IntMat {
            rows: r,
            cols: c,
            data,
        })
    }

    /// Convenience constructor for small literal matrices. Panics on ragged input.
    pub fn from_i64<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let c = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let v = rows
            .iter()
            .map(|r| {
                assert_eq!(r.as_ref().len(), c, "ragged literal matrix");
                r.as_ref().iter().map(|&x| int(x)).collect()
            })
            .collect();
        Self::from_rows(v, c).expect("literal matrix")
    }

    pub fn row_vector(v: &[Int]) -> Self {
        IntMat {
            rows: 1,
            cols: v.len(),
            data: v.to_vec(),
        }
    }

    pub fn diagonal(entries: &[Int]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[Int] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn try_mul(&self, other: &IntMat) -> Result<IntMat, MatError> {
        if self.cols != other.rows {
            return Err(MatError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix product; panics on dimension mismatch.
    pub fn mul(&self, other: &IntMat) -> IntMat {
        self.try_mul(other).expect("matrix product dimensions")
    }

    /// `B·G·Bᵀ`, the Gram matrix of the rows of `self` under `g`.
    pub fn congruence(&self, g: &IntMat) -> IntMat {
        self.mul(g).mul(&self.transpose())
    }

    pub fn scale(&self, k: &Int) -> IntMat {
        IntMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    pub fn neg(&self) -> IntMat {
        self.scale(&int(-1))
    }

    pub fn add(&self, other: &IntMat) -> IntMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn vstack(parts: &[&IntMat]) -> Result<IntMat, MatError> {
        let cols = parts.first().map(|m| m.cols).unwrap_or(0);
        let mut data = Vec::new();
        let mut rows = 0;
        for p in parts {
            if p.cols != cols {
                return Err(MatError::Dimension(format!(
                    "vstack of {} and {} columns",
                    cols, p.cols
                )));
            }
            rows += p.rows;
            data.extend(p.data.iter().cloned());
        }
        Ok(IntMat { rows, cols, data })
    }

    pub fn hstack(parts: &[&IntMat]) -> Result<IntMat, MatError> {
        let rows = parts.first().map(|m| m.rows).unwrap_or(0);
        if parts.iter().any(|p| p.rows != rows) {
            return Err(MatError::Dimension("hstack with unequal row counts".into()));
        }
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for p in parts {
                data.extend(p.row(i).iter().cloned());
            }
        }
        Ok(IntMat { rows, cols, data })
    }

    /// Block-diagonal sum.
    pub fn block_diag(parts: &[&IntMat]) -> IntMat {
        let n: usize = parts.iter().map(|p| p.rows).sum();
        let m: usize = parts.iter().map(|p| p.cols).sum();
        let mut out = Self::zeros(n, m);
        let (mut r0, mut c0) = (0, 0);
        for p in parts {
            for i in 0..p.rows {
                for j in 0..p.cols {
                    out.set(r0 + i, c0 + j, p.get(i, j).clone());
                }
            }
            r0 += p.rows;
            c0 += p.cols;
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> IntMat {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend(self.row(i).iter().cloned());
        }
        IntMat {
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn select_cols(&self, idx: &[usize]) -> IntMat {
        let mut data = Vec::with_capacity(idx.len() * self.rows);
        for i in 0..self.rows {
            for &j in idx {
                data.push(self.get(i, j).clone());
            }
        }
        IntMat {
            rows: self.rows,
            cols: idx.len(),
            data,
        }
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> IntMat {
        let r: Vec<usize> = rows.collect();
        let c: Vec<usize> = cols.collect();
        self.select_rows(&r).select_cols(&c)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += k·row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &Int) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * k;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += k·col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &Int) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * k;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self.data[i * self.cols + j];
            self.data[i * self.cols + j] = v;
        }
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> Int {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut a = self.clone();
        let mut sign = Int::one();
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return Int::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1)
    }

    /// Rank over ℚ.
    pub fn rank(&self) -> usize {
        hnf_full(self).rank
    }

    pub fn to_rat(&self) -> RatMat {
        RatMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(rat_from_int).collect(),
        }
    }

    /// Parses `[[a, b], [c, d]]`. An empty list `[]` parses as a 0×0 matrix.
    pub fn parse(s: &str) -> Result<IntMat, MatError> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "[]" {
            return Ok(IntMat::zeros(0, 0));
        }
        let inner = t
            .strip_prefix("[[")
            .and_then(|x| x.strip_suffix("]]"))
            .ok_or_else(|| MatError::Parse(format!("expected [[...]], got {s:?}")))?;
        let mut rows = Vec::new();
        for part in inner.split("],[") {
            rows.push(parse_int_list_body(part)?);
        }
        let cols = rows[0].len();
        IntMat::from_rows(rows, cols)
    }
}

fn parse_int_list_body(body: &str) -> Result<Vec<Int>, MatError> {
    if body.is_empty() {
        return Ok(Vec::new());
    }
    body.split(',')
        .map(|x| Int::from_str(x).map_err(|_| MatError::Parse(format!("bad integer {x:?}"))))
        .collect()
}

/// Parses `[a, b, c]`.
pub fn parse_int_list(s: &str) -> Result<Vec<Int>, MatError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let body = t
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(']'))
        .ok_or_else(|| MatError::Parse(format!("expected [...], got {s:?}")))?;
    parse_int_list_body(body)
}

pub fn format_int_list(v: &[Int]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

impl fmt::Display for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| format_int_list(self.row(i)))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

impl FromStr for IntMat {
    type Err = MatError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        IntMat::parse(s)
    }
}

/// `x·A` for a row vector `x`.
pub fn vec_mat(x: &[Int], a: &IntMat) -> Vec<Int> {
    assert_eq!(x.len(), a.rows(), "vector-matrix dimensions");
    let mut out = vec![Int::zero(); a.cols()];
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, o) in out.iter_mut().enumerate() {
            *o += xi * a.get(i, j);
        }
    }
    out
}

pub fn dot(x: &[Int], y: &[Int]) -> Int {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// `x·G·yᵀ`
pub fn bilinear(x: &[Int], g: &IntMat, y: &[Int]) -> Int {
    dot(&vec_mat(x, g), y)
}

pub fn gcd_all<'a, I: IntoIterator<Item = &'a Int>>(it: I) -> Int {
    it.into_iter().fold(Int::zero(), |acc, x| acc.gcd(x))
}

/// Smith normal form with transforms: `U·A·V = D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub u: IntMat,
    pub d: IntMat,
    pub v: IntMat,
}

impl SnfResult {
    /// Diagonal entries `d₁ | d₂ | …`, including trailing zeros up to `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<Int> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }

    /// Nonzero diagonal entries greater than one.
    pub fn torsion(&self) -> Vec<Int> {
        self.diagonal()
            .into_iter()
            .filter(|x| !x.is_zero() && !x.is_one())
            .collect()
    }
}

fn smallest_nonzero(
    m: &IntMat,
    r0: usize,
    c0: usize,
    by_rows_only_col: Option<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    let cols: Vec<usize> = match by_rows_only_col {
        Some(c) => vec![c],
        None => (c0..m.cols()).collect(),
    };
    for i in r0..m.rows() {
        for &j in &cols {
            let v = m.get(i, j);
            if v.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if m.get(bi, bj).abs() <= v.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// Smith normal form. Pivots are chosen as the smallest nonzero absolute value
/// in the remaining block, ties broken by lowest row-major index.
pub fn snf(a: &IntMat) -> SnfResult {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMat::identity(m);
    let mut v = IntMat::identity(n);
    for t in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = smallest_nonzero(&d, t, t, None) else {
                return SnfResult { u, d, v };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let p = d.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..m {
                let q = d.get(i, t) / &p;
                if !q.is_zero() {
                    d.add_row(i, t, &-&q);
                    u.add_row(i, t, &-&q);
                }
                if !d.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                let q = d.get(t, j) / &p;
                if !q.is_zero() {
                    d.add_col(j, t, &-&q);
                    v.add_col(j, t, &-&q);
                }
                if !d.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d.get(i, j).is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    d.add_row(t, i, &Int::one());
                    u.add_row(t, i, &Int::one());
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SnfResult { u, d, v }
}

/// Row Hermite normal form together with the unimodular transform `T·A = H`.
#[derive(Clone, Debug)]
pub struct HnfResult {
    pub h: IntMat,
    pub transform: IntMat,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Row-style Hermite normal form: pivots positive, entries above a pivot
/// reduced into `[0, pivot)`, zero rows at the bottom.
pub fn hnf_full(a: &IntMat) -> HnfResult {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut t = IntMat::identity(m);
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..n {
        if r == m {
            break;
        }
        while let Some((pi, _)) = smallest_nonzero(&h, r, c, Some(c)) {
            h.swap_rows(r, pi);
            t.swap_rows(r, pi);
            let p = h.get(r, c).clone();
            let mut clean = true;
            for i in r + 1..m {
                let q = h.get(i, c) / &p;
                if !q.is_zero() {
                    h.add_row(i, r, &-&q);
                    t.add_row(i, r, &-&q);
                }
                if !h.get(i, c).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h.get(r, c).is_zero() {
            continue;
        }
        if h.get(r, c).is_negative() {
            h.negate_row(r);
            t.negate_row(r);
        }
        let p = h.get(r, c).clone();
        for i in 0..r {
            let q = h.get(i, c).div_floor(&p);
            if !q.is_zero() {
                h.add_row(i, r, &-&q);
                t.add_row(i, r, &-&q);
            }
        }
        pivots.push(c);
        r += 1;
    }
    HnfResult {
        h,
        transform: t,
        rank: r,
        pivots,
    }
}

/// Row Hermite normal form, zero rows kept at the bottom.
pub fn hnf(a: &IntMat) -> IntMat {
    hnf_full(a).h
}

/// Row Hermite normal form with zero rows removed.
pub fn hnf_nonzero(a: &IntMat) -> IntMat {
    let r = hnf_full(a);
    r.h.select_rows(&(0..r.rank).collect::<Vec<_>>())
}

/// Basis of the integer left kernel `{x : x·A = 0}`, in Hermite normal form.
/// The basis is saturated by construction.
pub fn kernel_basis(a: &IntMat) -> IntMat {
    let r = hnf_full(a);
    let idx: Vec<usize> = (r.rank..a.rows()).collect();
    let k = r.transform.select_rows(&idx);
    if k.rows() == 0 {
        return k;
    }
    hnf_nonzero(&k)
}

/// Some integer `x` with `x·A = b`, or `None` when no integer solution exists.
pub fn solve_integer(a: &IntMat, b: &[Int]) -> Option<Vec<Int>> {
    assert_eq!(b.len(), a.cols(), "right-hand side length");
    let s = snf(a);
    let c = vec_mat(b, &s.v);
    let diag = s.diagonal();
    let mut y = vec![Int::zero(); a.rows()];
    for (j, cj) in c.iter().enumerate() {
        let dj = diag.get(j).cloned().unwrap_or_else(Int::zero);
        if dj.is_zero() {
            if !cj.is_zero() {
                return None;
            }
        } else {
            let (q, rem) = cj.div_rem(&dj);
            if !rem.is_zero() {
                return None;
            }
            y[j] = q;
        }
    }
    Some(vec_mat(&y, &s.u))
}

/// Completes a primitive set of rows `k` to a basis of `ℤⁿ`; returns the added rows.
pub fn complete_basis(k: &IntMat) -> IntMat {
    let n = k.cols();
    if k.rows() == 0 {
        return IntMat::identity(n);
    }
    let s = snf(k);
    let vinv = unimodular_inverse(&s.v);
    let idx: Vec<usize> = (k.rows()..n).collect();
    vinv.select_rows(&idx)
}

/// Inverse of a unimodular integer matrix.
pub fn unimodular_inverse(a: &IntMat) -> IntMat {
    let inv = a
        .to_rat()
        .inverse()
        .expect("unimodular matrix is invertible");
    inv.to_int()
        .expect("inverse of a unimodular matrix is integral")
}

/// Dense rational matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatMat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let data = rows.into_iter().flatten().collect();
        RatMat {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.cols, other.rows, "rational product dimensions");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = a * other.get(k, j);
                    out.data[i * other.cols + j] += v;
                }
            }
        }
        out
    }

    pub fn scale(&self, k: &Rat) -> RatMat {
        RatMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Integer matrix when every entry is integral.
    pub fn to_int(&self) -> Option<IntMat> {
        if self.data.iter().all(|x| x.is_integer()) {
            Some(IntMat {
                rows: self.rows,
                cols: self.cols,
                data: self.data.iter().map(|x| x.to_integer()).collect(),
            })
        } else {
            None
        }
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            for j in 0..self.cols {
                self.data.swap(r * self.cols + j, p * self.cols + j);
            }
            let inv = self.get(r, c).recip();
            for j in 0..self.cols {
                let v = self.get(r, j) * &inv;
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i != r && !self.get(i, c).is_zero() {
                    let f = self.get(i, c).clone();
                    for j in 0..self.cols {
                        let v = self.get(i, j) - &f * self.get(r, j);
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Rat::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a.get(i, c).is_zero()) else {
                return Rat::zero();
            };
            if p != c {
                for j in 0..n {
                    a.data.swap(c * n + j, p * n + j);
                }
                det = -det;
            }
            let piv = a.get(c, c).clone();
            det *= &piv;
            for i in c + 1..n {
                let f = a.get(i, c) / &piv;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = a.get(i, j) - &f * a.get(c, j);
                    a.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<RatMat, MatError> {
        if self.rows != self.cols {
            return Err(MatError::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Rat::one());
        }
        let piv = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return Err(MatError::Singular);
        }
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Ok(out)
    }

    /// Basis of the rational left kernel `{x : x·A = 0}`.
    pub fn left_kernel(&self) -> Vec<Vec<Rat>> {
        let mut t = self.transpose();
        let piv = t.rref();
        let free: Vec<usize> = (0..t.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![Rat::zero(); t.cols];
                x[f] = Rat::one();
                for (r, &pc) in piv.iter().enumerate() {
                    x[pc] = -t.get(r, f).clone();
                }
                x
            })
            .collect()
    }
}

/// `x·A` for a rational row vector.
pub fn rat_vec_mat(x: &[Rat], a: &RatMat) -> Vec<Rat> {
    assert_eq!(x.len(), a.rows());
    (0..a.cols())
        .map(|j| x.iter().enumerate().map(|(i, xi)| xi * a.get(i, j)).sum())
        .collect()
}

pub fn rat_dot(x: &[Rat], y: &[Rat]) -> Rat {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Representative of `x mod m` in `[0, m)`.
pub fn rat_mod(x: &Rat, m: &Rat) -> Rat {
    let q = (x / m).floor();
    x - q * m
}

/// Counts of positive, negative and zero pivots of a symmetric rational
/// matrix under congruence (Sylvester's law of inertia).
pub fn inertia(g: &RatMat) -> (usize, usize, usize) {
    assert!(g.is_symmetric(), "inertia of a non-symmetric matrix");
    let mut a = g.clone();
    let mut n = a.rows();
    let (mut pos, mut neg) = (0, 0);
    let mut active: Vec<usize> = (0..n).collect();
    while n > 0 {
        let pivot = active.iter().copied().find(|&i| !a.get(i, i).is_zero());
        let p = match pivot {
            Some(p) => p,
            None => {
                // every remaining diagonal entry vanishes: replace e_i by e_i + e_j
                let pair = active
                    .iter()
                    .flat_map(|&i| active.iter().map(move |&j| (i, j)))
                    .find(|&(i, j)| i != j && !a.get(i, j).is_zero());
                let Some((i, j)) = pair else { break };
                let size = a.rows();
                for k in 0..size {
                    let v = a.get(i, k) + a.get(j, k);
                    a.set(i, k, v);
                }
                for k in 0..size {
                    let v = a.get(k, i) + a.get(k, j);
                    a.set(k, i, v);
                }
                i
            }
        };
        let d = a.get(p, p).clone();
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        active.retain(|&x| x != p);
        for &i in &active {
            let f = a.get(i, p) / &d;
            if f.is_zero() {
                continue;
            }
            for &j in &active {
                let v = a.get(i, j) - &f * a.get(p, j);
                a.set(i, j, v);
            }
            a.set(i, p, Rat::zero());
        }
        for &j in &active {
            a.set(p, j, Rat::zero());
        }
        n -= 1;
    }
    let rank = pos + neg;
    (pos, neg, g.rows() - rank)
}

/// Exact `k`-th root of a nonnegative integer, if it exists.
pub fn exact_root(x: &Int, k: u32) -> Option<Int> {
    if x.is_negative() {
        return None;
    }
    let r = x.nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == *x {
        Some(r)
    } else {
        None
    }
}

pub fn to_i64(x: &Int) -> Option<i64> {
    x.to_i64()
}
