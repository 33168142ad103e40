//! Exact integer and rational linear algebra.
//!
//! Everything here works over `BigInt` / `BigRational`; nothing is ever
//! rounded. Matrices are small (rank at most a few dozen), so the routines
//! favour clarity and deterministic output over asymptotic speed.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Anything we can run Gaussian elimination over.
pub trait FieldElem:
    Clone
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> FieldElem for T where
    T: Clone
        + PartialEq
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Div<Output = T>
        + Neg<Output = T>
{
}

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_from_int(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}

/// Parses `"a"` or `"a/b"` into a reduced rational.
pub fn parse_rat(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// `a/b` in lowest terms, or just `a` when the denominator is one.
pub fn fmt_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Reduces `r` into `[0, m)`.
pub fn rat_mod(r: &BigRational, m: &BigInt) -> BigRational {
    let m = rat_from_int(m);
    let q = (r / &m).floor();
    r - q * m
}

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.row_vecs()).finish()
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let r: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
                format!("[{}]", r.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

impl IntegerMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of machine integers. Panics on ragged input.
    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let data = rows.iter().flat_map(|r| r.iter().map(|&x| BigInt::from(x))).collect();
        Self { rows: rows.len(), cols, data }
    }

    /// Builds a matrix from rows; `cols` is needed when there are no rows.
    pub fn from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Result<Self> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let n = rows.len();
        Ok(Self { rows: n, cols, data: rows.into_iter().flatten().collect() })
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

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn to_i64(&self) -> Option<Vec<Vec<i64>>> {
        use num_traits::ToPrimitive;
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_i64()).collect())
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
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

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
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

    /// Matrix product; panics on mismatched dimensions.
    pub fn mul(&self, other: &Self) -> Self {
        self.checked_mul(other).expect("matrix dimensions")
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&int(-1))
    }

    /// Block-diagonal matrix with the given blocks.
    pub fn block_diag(blocks: &[&IntegerMatrix]) -> Self {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.data[(r0 + i) * c + c0 + j] = b.get(i, j).clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Stacks rows of `self` on top of rows of `other`.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::Dimension("vstack column mismatch".into()));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Self { rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += vi * self.get(i, j);
            }
        }
        out
    }

    /// Bilinear value `x · M · yᵀ`.
    pub fn bilinear(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        self.left_apply(x).iter().zip(y).map(|(a, b)| a * b).sum()
    }

    pub fn to_rational(&self) -> RationalMatrix {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(rat_from_int).collect(),
        }
    }

    pub fn determinant(&self) -> Result<BigInt> {
        determinant(self)
    }

    pub fn rank(&self) -> usize {
        self.to_rational().rank()
    }
}

/// Dense rational matrix, row-major, entries always in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigRational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        IntegerMatrix::identity(n).to_rational()
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>, cols: usize) -> Result<Self> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let n = rows.len();
        Ok(Self { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        IntegerMatrix::from_i64(rows).to_rational()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
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

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
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
                        let idx = i * other.cols + j;
                        out.data[idx] = &out.data[idx] + a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.checked_mul(other).expect("matrix dimensions")
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![BigRational::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = &*o + vi * self.get(i, j);
            }
        }
        out
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.denom().is_one())
    }

    pub fn to_integer(&self) -> Option<IntegerMatrix> {
        if !self.is_integral() {
            return None;
        }
        Some(IntegerMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.numer().clone()).collect(),
        })
    }

    /// Least common multiple of all denominators.
    pub fn common_denominator(&self) -> BigInt {
        self.data.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }

    pub fn rank(&self) -> usize {
        let mut m = self.row_vecs();
        rref(&mut m, self.cols).len()
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
                r
            })
            .collect();
        let piv = rref(&mut aug, n);
        if piv.len() < n {
            return Err(Error::Domain("singular matrix".into()));
        }
        let rows = aug.into_iter().map(|r| r[n..].to_vec()).collect();
        Self::from_rows(rows, n)
    }
}

/// Reduced row echelon form in place over the first `cols` columns.
/// Returns the pivot columns; zero rows are moved to the bottom.
pub fn rref<F: FieldElem>(m: &mut [Vec<F>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = F::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..m[i].len() {
                    let v = m[r][j].clone();
                    m[i][j] = m[i][j].clone() - f.clone() * v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the right nullspace `{x : a·x = 0}`.
pub fn nullspace<F: FieldElem>(a: &[Vec<F>], cols: usize) -> Vec<Vec<F>> {
    let mut m = a.to_vec();
    let piv = rref(&mut m, cols);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !piv.contains(c)) {
        let mut v = vec![F::zero(); cols];
        v[free] = F::one();
        for (r, &pc) in piv.iter().enumerate() {
            v[pc] = -m[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Outcome of solving `a·x = b`.
#[derive(Clone, Debug, PartialEq)]
pub enum LinearSolution<F> {
    Inconsistent,
    Solved {
        /// One solution, `cols(a) × cols(b)`.
        particular: Vec<Vec<F>>,
        /// Basis of the homogeneous solution space (vectors of length `cols(a)`).
        nullspace: Vec<Vec<F>>,
    },
}

pub fn solve_linear<F: FieldElem>(
    a: &[Vec<F>],
    a_cols: usize,
    b: &[Vec<F>],
    b_cols: usize,
) -> Result<LinearSolution<F>> {
    if a.len() != b.len() {
        return Err(Error::Dimension(format!("{} equations but {} right-hand rows", a.len(), b.len())));
    }
    let mut aug: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().chain(rb.iter()).cloned().collect())
        .collect();
    let piv = rref(&mut aug, a_cols + b_cols);
    if piv.iter().any(|&c| c >= a_cols) {
        return Ok(LinearSolution::Inconsistent);
    }
    let mut particular = vec![vec![F::zero(); b_cols]; a_cols];
    for (r, &pc) in piv.iter().enumerate() {
        particular[pc] = aug[r][a_cols..].to_vec();
    }
    Ok(LinearSolution::Solved { particular, nullspace: nullspace(a, a_cols) })
}

/// Solves `a·x = b` exactly over the rationals.
pub fn solve_linear_rational(
    a: &RationalMatrix,
    b: &RationalMatrix,
) -> Result<LinearSolution<BigRational>> {
    solve_linear(&a.row_vecs(), a.cols, &b.row_vecs(), b.cols)
}

/// Fraction-free (Bareiss) determinant.
pub fn determinant(m: &IntegerMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("determinant of a {}x{} matrix", m.rows, m.cols)));
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.row_vecs();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    Ok(sign * &a[n - 1][n - 1])
}

/// `diagonal = left · m · right` with `left`, `right` unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub diagonal: IntegerMatrix,
    pub left: IntegerMatrix,
    pub right: IntegerMatrix,
}

impl SmithForm {
    /// The `min(rows, cols)` diagonal entries, nonnegative, each dividing the next.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let k = self.diagonal.rows.min(self.diagonal.cols);
        (0..k).map(|i| self.diagonal.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().iter().filter(|d| !d.is_zero()).count()
    }
}

pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let (r, c) = (m.rows, m.cols);
    let mut a = m.row_vecs();
    let mut u = IntegerMatrix::identity(r).row_vecs();
    // columns of v are tracked as rows of vt
    let mut vt = IntegerMatrix::identity(c).row_vecs();

    fn row_axpy(rows: &mut [Vec<BigInt>], dst: usize, src: usize, f: &BigInt) {
        let s = rows[src].clone();
        for (d, x) in rows[dst].iter_mut().zip(s) {
            *d -= f * x;
        }
    }
    fn col_axpy(a: &mut [Vec<BigInt>], dst: usize, src: usize, f: &BigInt) {
        for row in a.iter_mut() {
            let s = row[src].clone();
            row[dst] -= f * s;
        }
    }
    fn col_swap(a: &mut [Vec<BigInt>], x: usize, y: usize) {
        for row in a.iter_mut() {
            row.swap(x, y);
        }
    }

    for t in 0..r.min(c) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    let better = match best {
                        None => true,
                        Some((bi, bj)) => a[i][j].abs() < a[bi][bj].abs(),
                    };
                    if better {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish_snf(a, u, vt, r, c);
            };
            a.swap(t, pi);
            u.swap(t, pi);
            col_swap(&mut a, t, pj);
            vt.swap(t, pj);

            let mut clean = true;
            for i in t + 1..r {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    row_axpy(&mut a, i, t, &q);
                    row_axpy(&mut u, i, t, &q);
                    clean &= a[i][t].is_zero();
                }
            }
            for j in t + 1..c {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    col_axpy(&mut a, j, t, &q);
                    row_axpy(&mut vt, j, t, &q);
                    clean &= a[t][j].is_zero();
                }
            }
            if !clean {
                continue;
            }
            let p = a[t][t].clone();
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a[i][j].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    let m1 = int(-1);
                    row_axpy(&mut a, t, i, &m1);
                    row_axpy(&mut u, t, i, &m1);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    finish_snf(a, u, vt, r, c)
}

fn finish_snf(
    a: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    vt: Vec<Vec<BigInt>>,
    r: usize,
    c: usize,
) -> SmithForm {
    SmithForm {
        diagonal: IntegerMatrix::from_rows(a, c).expect("shape"),
        left: IntegerMatrix::from_rows(u, r).expect("shape"),
        right: IntegerMatrix::from_rows(vt, c).expect("shape").transpose(),
    }
}

/// Inertia of a symmetric form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Signature {
    pub positive: usize,
    pub zero: usize,
    pub negative: usize,
}

impl Signature {
    pub fn new(positive: usize, zero: usize, negative: usize) -> Self {
        Self { positive, zero, negative }
    }

    pub fn rank(&self) -> usize {
        self.positive + self.zero + self.negative
    }

    pub fn is_negative_definite(&self) -> bool {
        self.positive == 0 && self.zero == 0
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.positive, self.zero, self.negative)
    }
}

/// Inertia by exact congruence diagonalisation over the rationals.
pub fn signature(m: &IntegerMatrix) -> Result<Signature> {
    if !m.is_symmetric() {
        return Err(Error::Shape("signature needs a square symmetric matrix".into()));
    }
    let n = m.rows;
    let mut a = m.to_rational().row_vecs();
    let mut sig = Signature::new(0, 0, 0);
    let mut k = 0;
    while k < n {
        let diag = (k..n).find(|&i| !a[i][i].is_zero());
        let p = match diag {
            Some(p) => p,
            None => {
                let off = (k..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero());
                let Some((i, j)) = off else {
                    sig.zero += n - k;
                    break;
                };
                // replace e_i by e_i + e_j: the new diagonal entry is 2·a_ij
                for t in 0..n {
                    let v = a[j][t].clone();
                    a[i][t] = &a[i][t] + v;
                }
                for t in 0..n {
                    let v = a[t][j].clone();
                    a[t][i] = &a[t][i] + v;
                }
                i
            }
        };
        a.swap(k, p);
        for row in a.iter_mut() {
            row.swap(k, p);
        }
        let piv = a[k][k].clone();
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &piv;
            for t in k..n {
                let v = &f * &a[k][t];
                a[i][t] = &a[i][t] - v;
            }
            for t in k..n {
                let v = &f * &a[t][k];
                a[t][i] = &a[t][i] - v;
            }
        }
        if piv.is_positive() {
            sig.positive += 1;
        } else {
            sig.negative += 1;
        }
        k += 1;
    }
    Ok(sig)
}

/// Row-style Hermite normal form of the lattice spanned by the rows.
/// Zero rows are dropped; pivots are positive and entries above a pivot lie in `[0, pivot)`.
pub fn hermite_normal_form(m: &IntegerMatrix) -> IntegerMatrix {
    let c = m.cols;
    let mut a = m.row_vecs();
    let mut r = 0;
    for col in 0..c {
        loop {
            let best = (r..a.len())
                .filter(|&i| !a[i][col].is_zero())
                .min_by(|&x, &y| a[x][col].abs().cmp(&a[y][col].abs()));
            let Some(p) = best else { break };
            a.swap(r, p);
            let mut done = true;
            for i in r + 1..a.len() {
                if !a[i][col].is_zero() {
                    let q = a[i][col].div_floor(&a[r][col]);
                    let src = a[r].clone();
                    for (d, s) in a[i].iter_mut().zip(&src) {
                        *d -= &q * s;
                    }
                    done &= a[i][col].is_zero();
                }
            }
            if done {
                break;
            }
        }
        if r < a.len() && !a[r][col].is_zero() {
            if a[r][col].is_negative() {
                for x in a[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            for i in 0..r {
                let q = a[i][col].div_floor(&a[r][col]);
                if !q.is_zero() {
                    let src = a[r].clone();
                    for (d, s) in a[i].iter_mut().zip(&src) {
                        *d -= &q * s;
                    }
                }
            }
            r += 1;
        }
    }
    a.truncate(r);
    IntegerMatrix::from_rows(a, c).expect("shape")
}

/// Basis (as rows, in Hermite form) of `{x ∈ Zⁿ : m·x = 0}`.
pub fn integer_kernel(m: &IntegerMatrix) -> IntegerMatrix {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    let vt = snf.right.transpose();
    let rows: Vec<Vec<BigInt>> = (rank..m.cols).map(|i| vt.row(i).to_vec()).collect();
    hermite_normal_form(&IntegerMatrix::from_rows(rows, m.cols).expect("shape"))
}

/// Basis (rows, Hermite form) of `span_Q(rows of m) ∩ Zⁿ`.
pub fn saturate(m: &IntegerMatrix) -> IntegerMatrix {
    let k = integer_kernel(m);
    if k.rows == 0 {
        return IntegerMatrix::identity(m.cols);
    }
    integer_kernel(&k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cofactor_det(m: &[Vec<i64>]) -> i64 {
        let n = m.len();
        if n == 0 {
            return 1;
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect()).collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * cofactor_det(&minor)
            })
            .sum()
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(determinant(&IntegerMatrix::from_i64(&[vec![0, 1], vec![1, 0]])).unwrap(), int(-1));
        let a2 = vec![vec![-2, 1], vec![1, -2]];
        assert_eq!(cofactor_det(&a2), 3);
        assert_eq!(determinant(&IntegerMatrix::from_i64(&a2)).unwrap(), int(3));
        assert_eq!(determinant(&IntegerMatrix::zeros(3, 3)).unwrap(), int(0));
        assert!(matches!(determinant(&IntegerMatrix::zeros(2, 3)), Err(Error::Dimension(_))));
    }

    #[test]
    fn determinant_needs_pivoting() {
        let m = vec![vec![0, 2, 1], vec![3, 0, 4], vec![1, 1, 0]];
        assert_eq!(determinant(&IntegerMatrix::from_i64(&m)).unwrap(), int(cofactor_det(&m)));
    }

    #[test]
    fn smith_examples() {
        let id = IntegerMatrix::identity(3);
        let s = smith_normal_form(&id);
        assert_eq!(s.diagonal, id);
        assert_eq!(s.left, id);
        assert_eq!(s.right, id);

        let s = smith_normal_form(&IntegerMatrix::from_i64(&[vec![0, 2], vec![2, 0]]));
        assert_eq!(s.invariant_factors(), vec![int(2), int(2)]);

        let m = IntegerMatrix::from_i64(&[vec![-2, 1], vec![1, -2]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.invariant_factors(), vec![int(1), int(3)]);
        assert_eq!(s.left.mul(&m).mul(&s.right), s.diagonal);
    }

    #[test]
    fn signature_examples() {
        let u = IntegerMatrix::from_i64(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(signature(&u).unwrap(), Signature::new(1, 0, 1));
        let a2 = IntegerMatrix::from_i64(&[vec![-2, 1], vec![1, -2]]);
        assert_eq!(signature(&a2).unwrap(), Signature::new(0, 0, 2));
        let deg = IntegerMatrix::from_i64(&[vec![0, 0], vec![0, 0]]);
        assert_eq!(signature(&deg).unwrap(), Signature::new(0, 2, 0));
        let asym = IntegerMatrix::from_i64(&[vec![0, 1], vec![2, 0]]);
        assert!(matches!(signature(&asym), Err(Error::Shape(_))));
    }

    #[test]
    fn solve_examples() {
        let id = RationalMatrix::identity(2);
        let b = RationalMatrix::from_i64(&[vec![3], vec![-1]]);
        match solve_linear_rational(&id, &b).unwrap() {
            LinearSolution::Solved { particular, nullspace } => {
                assert_eq!(particular, vec![vec![rat(3, 1)], vec![rat(-1, 1)]]);
                assert!(nullspace.is_empty());
            }
            LinearSolution::Inconsistent => panic!(),
        }
        let zero = RationalMatrix::zeros(2, 2);
        assert_eq!(solve_linear_rational(&zero, &b).unwrap(), LinearSolution::Inconsistent);

        let d = RationalMatrix::from_i64(&[vec![2, 0], vec![0, 3]]);
        let ones = RationalMatrix::from_i64(&[vec![1], vec![1]]);
        match solve_linear_rational(&d, &ones).unwrap() {
            LinearSolution::Solved { particular, .. } => {
                assert_eq!(particular, vec![vec![rat(1, 2)], vec![rat(1, 3)]])
            }
            LinearSolution::Inconsistent => panic!(),
        }
    }

    #[test]
    fn underdetermined_system_has_nullspace() {
        let a = RationalMatrix::from_i64(&[vec![1, 1]]);
        let b = RationalMatrix::from_i64(&[vec![2]]);
        let LinearSolution::Solved { particular, nullspace } = solve_linear_rational(&a, &b).unwrap() else {
            panic!()
        };
        assert_eq!(particular, vec![vec![rat(2, 1)], vec![rat(0, 1)]]);
        assert_eq!(nullspace, vec![vec![rat(-1, 1), rat(1, 1)]]);
    }

    #[test]
    fn hnf_and_saturation() {
        let m = IntegerMatrix::from_i64(&[vec![2, 4], vec![0, 6]]);
        assert_eq!(hermite_normal_form(&m), IntegerMatrix::from_i64(&[vec![2, 4], vec![0, 6]]));
        let m = IntegerMatrix::from_i64(&[vec![2, 0], vec![0, 0]]);
        assert_eq!(saturate(&m), IntegerMatrix::from_i64(&[vec![1, 0]]));
        let k = integer_kernel(&IntegerMatrix::from_i64(&[vec![1, 1, 0]]));
        assert_eq!(k.rows(), 2);
        for i in 0..k.rows() {
            assert_eq!(&k.row(i)[0] + &k.row(i)[1], int(0));
        }
    }

    #[test]
    fn rational_inverse() {
        let m = RationalMatrix::from_i64(&[vec![-2, 1], vec![1, -2]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), RationalMatrix::identity(2));
        assert_eq!(*inv.get(0, 0), rat(-2, 3));
    }

    #[test]
    fn rational_formatting() {
        assert_eq!(fmt_rat(&rat(4, 6)), "2/3");
        assert_eq!(fmt_rat(&rat(-4, 2)), "-2");
        assert_eq!(parse_rat(" -4/6").unwrap(), rat(-2, 3));
        assert!(parse_rat("1/0").is_err());
        assert_eq!(rat_mod(&rat(-2, 3), &int(2)), rat(4, 3));
    }
}
