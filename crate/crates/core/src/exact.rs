//! Exact integer and rational linear algebra.
//!
//! Everything here works over [`BigInt`] and [`BigRational`]; there is no
//! floating point anywhere in the crate. The two workhorses are the row
//! Hermite normal form, used to put lattices into a canonical shape, and the
//! Smith normal form, used to solve linear congruences.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn rat_of(v: &Int) -> Rat {
    Rat::from_integer(v.clone())
}

/// Errors raised by the exact layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("modulus must be positive, got {0}")]
    NonPositiveModulus(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("cannot parse `{0}` as a rational number")]
    Parse(String),
}

/// Parses `"a/b"`, `"a"` or `"-a/b"` into a reduced rational.
pub fn parse_rat(s: &str) -> Result<Rat, ExactError> {
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: Int = n.parse().map_err(|_| ExactError::Parse(s.to_string()))?;
    let d: Int = d.parse().map_err(|_| ExactError::Parse(s.to_string()))?;
    if d.is_zero() {
        return Err(ExactError::ZeroDenominator(s.to_string()));
    }
    Ok(Rat::new(n, d))
}

/// Formats a rational as `"a/b"`, or `"a"` when integral.
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Fractional part in `[0, 1)`.
pub fn frac(r: &Rat) -> Rat {
    r - r.floor()
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(it: impl IntoIterator<Item = &'a Rat>) -> Int {
    it.into_iter().fold(Int::one(), |acc, r| acc.lcm(r.denom()))
}

/// An element of Q/Z in lowest terms: `0 <= num < den`, `gcd(num, den) = 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct QmodZ {
    num: Int,
    den: Int,
}

impl QmodZ {
    pub fn zero() -> Self {
        QmodZ { num: Int::zero(), den: Int::one() }
    }

    pub fn new(r: &Rat) -> Self {
        let f = frac(r);
        QmodZ { num: f.numer().clone(), den: f.denom().clone() }
    }

    pub fn parse(s: &str) -> Result<Self, ExactError> {
        parse_rat(s).map(|r| Self::new(&r))
    }

    pub fn num(&self) -> &Int {
        &self.num
    }

    pub fn den(&self) -> &Int {
        &self.den
    }

    /// The representative in `[0, 1)`.
    pub fn lift(&self) -> Rat {
        Rat::new(self.num.clone(), self.den.clone())
    }

    /// Order in Q/Z; the zero element has order 1.
    pub fn order(&self) -> Int {
        self.den.clone()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn mul_int(&self, k: &Int) -> Self {
        Self::new(&(self.lift() * rat_of(k)))
    }
}

impl Add for &QmodZ {
    type Output = QmodZ;
    fn add(self, o: &QmodZ) -> QmodZ {
        QmodZ::new(&(self.lift() + o.lift()))
    }
}

impl Neg for &QmodZ {
    type Output = QmodZ;
    fn neg(self) -> QmodZ {
        QmodZ::new(&-self.lift())
    }
}

impl fmt::Display for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<Int>;
pub type RatMatrix = Matrix<Rat>;

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from rows; `cols` is needed for the zero-row case.
    pub fn from_rows(rows: &[Vec<T>], cols: usize) -> Result<Self, ExactError> {
        if let Some(bad) = rows.iter().position(|r| r.len() != cols) {
            return Err(ExactError::DimensionMismatch(format!(
                "row {bad} has length {}, expected {cols}",
                rows[bad].len()
            )));
        }
        Ok(Matrix { rows: rows.len(), cols, data: rows.iter().flatten().cloned().collect() })
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_cols(cols: &[Vec<T>], rows: usize) -> Result<Self, ExactError> {
        Ok(Self::from_rows(cols, rows)?.transpose())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// Submatrix on the given row and column indices.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + One + Add<Output = T> + Mul<Output = T> + Sub<Output = T> + Neg<Output = T>,
{
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix product dimension mismatch");
        Self::from_fn(self.rows, o.cols, |i, j| {
            let mut acc = T::zero();
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if !a.is_zero() {
                    acc = acc + a.clone() * o[(k, j)].clone();
                }
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.rows, v.len(), "vector-matrix dimension mismatch");
        (0..self.cols)
            .map(|j| {
                let mut acc = T::zero();
                for (i, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        acc = acc + x.clone() * self[(i, j)].clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert!(self.rows == o.rows && self.cols == o.cols);
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() + o[(i, j)].clone())
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert!(self.rows == o.rows && self.cols == o.cols);
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() - o[(i, j)].clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| s.clone() * x.clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x.clone())
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::identity(self.rows);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Block matrix `[[a, b], [c, d]]`.
    pub fn block(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        assert!(a.rows == b.rows && c.rows == d.rows && a.cols == c.cols && b.cols == d.cols);
        Self::from_fn(a.rows + c.rows, a.cols + b.cols, |i, j| match (i < a.rows, j < a.cols) {
            (true, true) => a[(i, j)].clone(),
            (true, false) => b[(i, j - a.cols)].clone(),
            (false, true) => c[(i - a.rows, j)].clone(),
            (false, false) => d[(i - a.rows, j - a.cols)].clone(),
        })
    }

    /// Block-diagonal sum.
    pub fn direct_sum(a: &Self, b: &Self) -> Self {
        Self::block(a, &Self::zeros(a.rows, b.cols), &Self::zeros(b.rows, a.cols), b)
    }
}

pub fn dot<T>(a: &[T], b: &[T]) -> T
where
    T: Clone + Zero + Add<Output = T> + Mul<Output = T>,
{
    assert_eq!(a.len(), b.len(), "dot product length mismatch");
    let mut acc = T::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = acc + x.clone() * y.clone();
        }
    }
    acc
}

pub fn vadd<T: Clone + Add<Output = T>>(a: &[T], b: &[T]) -> Vec<T> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn vsub<T: Clone + Sub<Output = T>>(a: &[T], b: &[T]) -> Vec<T> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn vscale<T: Clone + Mul<Output = T>>(s: &T, a: &[T]) -> Vec<T> {
    a.iter().map(|x| s.clone() * x.clone()).collect()
}

pub fn vneg<T: Clone + Neg<Output = T>>(a: &[T]) -> Vec<T> {
    a.iter().map(|x| -x.clone()).collect()
}

pub fn ivec(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| int(x)).collect()
}

pub fn to_rat_vec(v: &[Int]) -> Vec<Rat> {
    v.iter().map(rat_of).collect()
}

/// Converts to integers when every entry is integral.
pub fn to_int_vec(v: &[Rat]) -> Option<Vec<Int>> {
    v.iter().map(|r| r.is_integer().then(|| r.to_integer())).collect()
}

impl IntMatrix {
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let v: Vec<Vec<Int>> = rows.iter().map(|r| ivec(r)).collect();
        Self::from_rows(&v, cols).expect("ragged literal matrix")
    }

    pub fn to_rat(&self) -> RatMatrix {
        self.map(rat_of)
    }

    pub fn det(&self) -> Int {
        self.to_rat().det().to_integer()
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.det().abs().is_one()
    }

    /// Inverse of a unimodular matrix.
    pub fn unimodular_inverse(&self) -> Option<IntMatrix> {
        let inv = self.to_rat().inverse()?;
        inv.to_int()
    }
}

impl RatMatrix {
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        IntMatrix::from_i64(rows).to_rat()
    }

    pub fn to_int(&self) -> Option<IntMatrix> {
        self.data.iter().all(|x| x.is_integer()).then(|| self.map(|x| x.to_integer()))
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else { continue };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = m[(r, j)].clone() * inv.clone();
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let v = m[(i, j)].clone() - f.clone() * m[(r, j)].clone();
                        m[(i, j)] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn det(&self) -> Rat {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Rat::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else { return Rat::zero() };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= piv.clone();
            for i in c + 1..n {
                if !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone() / piv.clone();
                    for j in c..n {
                        let v = m[(i, j)].clone() - f.clone() * m[(c, j)].clone();
                        m[(i, j)] = v;
                    }
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<RatMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = RatMatrix::block(
            self,
            &RatMatrix::identity(n),
            &RatMatrix::zeros(0, n),
            &RatMatrix::zeros(0, n),
        );
        let (r, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        Some(RatMatrix::from_fn(n, n, |i, j| r[(i, n + j)].clone()))
    }

    /// Basis of the right kernel `{x : self * x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Rat>> {
        let (r, piv) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![Rat::zero(); self.cols];
                x[f] = Rat::one();
                for (k, &p) in piv.iter().enumerate() {
                    x[p] = -r[(k, f)].clone();
                }
                x
            })
            .collect()
    }

    /// Some solution of `self * x = b`, if one exists.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(b.len(), self.rows);
        let col = RatMatrix::from_fn(self.rows, 1, |i, _| b[i].clone());
        let aug = RatMatrix::block(self, &col, &RatMatrix::zeros(0, self.cols), &RatMatrix::zeros(0, 1));
        let (r, piv) = aug.rref();
        if piv.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (k, &p) in piv.iter().enumerate() {
            x[p] = r[(k, self.cols)].clone();
        }
        Some(x)
    }
}

/// Row Hermite normal form `u * m = h`.
#[derive(Clone, Debug)]
pub struct Hermite {
    pub h: IntMatrix,
    pub u: IntMatrix,
    pub rank: usize,
}

fn row_axpy(m: &mut IntMatrix, dst: usize, q: &Int, src: usize) {
    // row[dst] -= q * row[src]
    for j in 0..m.cols() {
        let v = m[(dst, j)].clone() - q.clone() * m[(src, j)].clone();
        m[(dst, j)] = v;
    }
}

fn col_axpy(m: &mut IntMatrix, dst: usize, q: &Int, src: usize) {
    for i in 0..m.rows() {
        let v = m[(i, dst)].clone() - q.clone() * m[(i, src)].clone();
        m[(i, dst)] = v;
    }
}

fn negate_row(m: &mut IntMatrix, i: usize) {
    for j in 0..m.cols() {
        let v = -m[(i, j)].clone();
        m[(i, j)] = v;
    }
}

/// Row-style Hermite normal form: pivots positive and strictly increasing
/// in column, entries above a pivot reduced into `[0, pivot)`, zero rows last.
pub fn hermite(m: &IntMatrix) -> Hermite {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut r = 0;
    for c in 0..h.cols() {
        if r == h.rows() {
            break;
        }
        loop {
            let piv = (r..h.rows())
                .filter(|&i| !h[(i, c)].is_zero())
                .min_by(|&a, &b| h[(a, c)].abs().cmp(&h[(b, c)].abs()));
            let Some(p) = piv else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..h.rows() {
                if !h[(i, c)].is_zero() {
                    let q = h[(i, c)].div_floor(&h[(r, c)]);
                    row_axpy(&mut h, i, &q, r);
                    row_axpy(&mut u, i, &q, r);
                    done &= h[(i, c)].is_zero();
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            negate_row(&mut h, r);
            negate_row(&mut u, r);
        }
        for i in 0..r {
            let q = h[(i, c)].div_floor(&h[(r, c)]);
            if !q.is_zero() {
                row_axpy(&mut h, i, &q, r);
                row_axpy(&mut u, i, &q, r);
            }
        }
        r += 1;
    }
    Hermite { h, u, rank: r }
}

/// Smith normal form `u * m * v = d` with `d_1 | d_2 | ...`, all `d_i >= 0`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

impl Smith {
    pub fn diagonal(&self) -> Vec<Int> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).collect()
    }
}

pub fn smith(m: &IntMatrix) -> Smith {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut rank = 0;
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !d[(i, j)].is_zero()
                        && best.map_or(true, |(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return Smith { u, d, v, rank };
            };
            d.swap_rows(t, bi);
            u.swap_rows(t, bi);
            d.swap_cols(t, bj);
            v.swap_cols(t, bj);
            let mut clean = true;
            for i in t + 1..rows {
                if !d[(i, t)].is_zero() {
                    let q = d[(i, t)].div_floor(&d[(t, t)]);
                    row_axpy(&mut d, i, &q, t);
                    row_axpy(&mut u, i, &q, t);
                    clean &= d[(i, t)].is_zero();
                }
            }
            for j in t + 1..cols {
                if !d[(t, j)].is_zero() {
                    let q = d[(t, j)].div_floor(&d[(t, t)]);
                    col_axpy(&mut d, j, &q, t);
                    col_axpy(&mut v, j, &q, t);
                    clean &= d[(t, j)].is_zero();
                }
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&d[(t, t)])));
            match bad {
                Some(i) => {
                    // Pull the offending row up; the next pass shrinks the pivot.
                    let minus_one = -Int::one();
                    row_axpy(&mut d, t, &minus_one, i);
                    row_axpy(&mut u, t, &minus_one, i);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            negate_row(&mut d, t);
            negate_row(&mut u, t);
        }
        rank += 1;
    }
    Smith { u, d, v, rank }
}

/// Both normal forms at once.
pub fn normal_forms(m: &IntMatrix) -> (IntMatrix, (IntMatrix, IntMatrix, IntMatrix)) {
    let h = hermite(m).h;
    let s = smith(m);
    (h, (s.u, s.d, s.v))
}

/// Basis of `{x in Z^n : m x = 0}`.
pub fn integer_kernel(m: &IntMatrix) -> Vec<Vec<Int>> {
    let s = smith(m);
    (s.rank..m.cols()).map(|j| s.v.col(j)).collect()
}

/// All integer solutions of `a x = b`: a particular one and a kernel basis.
pub fn solve_integer_linear(a: &IntMatrix, b: &[Int]) -> Option<(Vec<Int>, Vec<Vec<Int>>)> {
    assert_eq!(a.rows(), b.len());
    let s = smith(a);
    let ub = s.u.mul_vec(b);
    let mut y = vec![Int::zero(); a.cols()];
    for (i, ubi) in ub.iter().enumerate() {
        if i < s.rank {
            let di = &s.d[(i, i)];
            if !ubi.is_multiple_of(di) {
                return None;
            }
            y[i] = ubi / di;
        } else if !ubi.is_zero() {
            return None;
        }
    }
    let x = s.v.mul_vec(&y);
    let ker = (s.rank..a.cols()).map(|j| s.v.col(j)).collect();
    Some((x, ker))
}

/// Canonical basis (nonzero Hermite rows) of the lattice spanned by `gens` in `Z^n`.
pub fn lattice_basis(gens: &[Vec<Int>], n: usize) -> Vec<Vec<Int>> {
    if gens.is_empty() {
        return Vec::new();
    }
    let m = IntMatrix::from_rows(gens, n).expect("generator length mismatch");
    let h = hermite(&m);
    (0..h.rank).map(|i| h.h.row(i).to_vec()).collect()
}

/// Index of a full-rank sublattice of `Z^n`, `None` if not full rank.
pub fn lattice_index(basis: &[Vec<Int>], n: usize) -> Option<Int> {
    if basis.len() != n {
        return None;
    }
    let d = IntMatrix::from_rows(basis, n).ok()?.det().abs();
    (!d.is_zero()).then_some(d)
}

/// Reduces `x` modulo the lattice with the given Hermite basis.
pub fn reduce_mod_lattice(x: &[Int], hnf_basis: &[Vec<Int>]) -> Vec<Int> {
    let mut x = x.to_vec();
    for row in hnf_basis {
        let Some(p) = row.iter().position(|e| !e.is_zero()) else { continue };
        let q = x[p].div_floor(&row[p]);
        if !q.is_zero() {
            for (xi, ri) in x.iter_mut().zip(row) {
                *xi -= q.clone() * ri;
            }
        }
    }
    x
}

/// A lattice coset `particular + span_Z(basis)` in `Z^n`, basis in Hermite form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Coset {
    pub particular: Vec<Int>,
    pub basis: Vec<Vec<Int>>,
}

impl Coset {
    pub fn new(particular: Vec<Int>, gens: &[Vec<Int>]) -> Self {
        let basis = lattice_basis(gens, particular.len());
        let particular = reduce_mod_lattice(&particular, &basis);
        Coset { particular, basis }
    }

    pub fn dim(&self) -> usize {
        self.particular.len()
    }

    pub fn contains(&self, x: &[Int]) -> bool {
        let d = vsub(x, &self.particular);
        reduce_mod_lattice(&d, &self.basis).iter().all(|e| e.is_zero())
    }

    pub fn is_full_lattice(&self) -> bool {
        lattice_index(&self.basis, self.dim()).is_some_and(|i| i.is_one())
    }
}

/// Solves `a x = b (mod moduli)` row by row over `x in Z^n`.
///
/// Returns `Ok(None)` when there is no solution. Each row is scaled to clear
/// denominators, slack variables absorb the moduli, and the kernel of the
/// enlarged system is projected back onto the `x` coordinates.
pub fn solve_integer_affine(
    a: &IntMatrix,
    b: &[Rat],
    moduli: &[Rat],
) -> Result<Option<Coset>, ExactError> {
    let (m, n) = (a.rows(), a.cols());
    if b.len() != m || moduli.len() != m {
        return Err(ExactError::DimensionMismatch(format!(
            "{m} congruences but {} right-hand sides and {} moduli",
            b.len(),
            moduli.len()
        )));
    }
    if let Some(bad) = moduli.iter().find(|q| !q.is_positive()) {
        return Err(ExactError::NonPositiveModulus(fmt_rat(bad)));
    }
    let mut big = IntMatrix::zeros(m, n + m);
    let mut rhs = Vec::with_capacity(m);
    for i in 0..m {
        let l = b[i].denom().lcm(moduli[i].denom());
        for j in 0..n {
            big[(i, j)] = a[(i, j)].clone() * l.clone();
        }
        big[(i, n + i)] = -(moduli[i].clone() * rat_of(&l)).to_integer();
        rhs.push((b[i].clone() * rat_of(&l)).to_integer());
    }
    let Some((x, ker)) = solve_integer_linear(&big, &rhs) else { return Ok(None) };
    let proj: Vec<Vec<Int>> = ker.iter().map(|k| k[..n].to_vec()).collect();
    Ok(Some(Coset::new(x[..n].to_vec(), &proj)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64(rows)
    }

    #[test]
    fn smith_examples() {
        assert_eq!(smith(&m(&[&[2, 0], &[0, 2]])).diagonal(), ivec(&[2, 2]));
        assert_eq!(smith(&m(&[&[1, 0], &[0, 1]])).diagonal(), ivec(&[1, 1]));
        let s = smith(&m(&[&[2, 4], &[6, 8]]));
        assert_eq!(s.diagonal(), ivec(&[2, 4]));
        assert_eq!(s.u.mul(&m(&[&[2, 4], &[6, 8]])).mul(&s.v), s.d);
    }

    #[test]
    fn hermite_is_canonical() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let h = hermite(&a);
        assert_eq!(h.u.mul(&a), h.h);
        assert!(h.u.is_unimodular());
        assert_eq!(h.h, m(&[&[2, 4, 4], &[0, 6, 0], &[0, 0, 12]]));
    }

    #[test]
    fn congruence_examples() {
        let one = m(&[&[1]]);
        let two = m(&[&[2]]);
        assert_eq!(solve_integer_affine(&two, &[rat(1, 1)], &[rat(4, 1)]).unwrap(), None);
        let all = solve_integer_affine(&one, &[rat(0, 1)], &[rat(1, 1)]).unwrap().unwrap();
        assert_eq!(all, Coset { particular: ivec(&[0]), basis: vec![ivec(&[1])] });
        let odd = solve_integer_affine(&one, &[rat(1, 1)], &[rat(2, 1)]).unwrap().unwrap();
        assert_eq!(odd, Coset { particular: ivec(&[1]), basis: vec![ivec(&[2])] });
    }

    #[test]
    fn congruence_rejects_bad_shapes() {
        let one = m(&[&[1]]);
        assert!(matches!(
            solve_integer_affine(&one, &[], &[rat(1, 1)]),
            Err(ExactError::DimensionMismatch(_))
        ));
        assert!(matches!(
            solve_integer_affine(&one, &[rat(0, 1)], &[rat(0, 1)]),
            Err(ExactError::NonPositiveModulus(_))
        ));
    }

    #[test]
    fn qmodz_normalizes() {
        let q = QmodZ::parse("-1/3").unwrap();
        assert_eq!(q.to_string(), "2/3");
        assert_eq!(q.order(), int(3));
        assert_eq!(QmodZ::parse("4/2").unwrap(), QmodZ::zero());
        assert!(matches!(QmodZ::parse("1/0"), Err(ExactError::ZeroDenominator(_))));
    }

    #[test]
    fn rational_inverse_and_kernel() {
        let a = RatMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.mul(&a.inverse().unwrap()), RatMatrix::identity(2));
        let b = RatMatrix::from_i64(&[&[1, 2, 3]]);
        for k in b.kernel() {
            assert!(b.mul_vec(&k).iter().all(|x| x.is_zero()));
        }
    }
}
