//! Exact integer and rational linear algebra.
//!
//! Everything here works over arbitrary-precision integers ([`BigInt`]) or
//! exact rationals ([`Rational`]); there is no floating point anywhere.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::Rational;

/// A dense integer matrix stored in row-major order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from row vectors. All rows must have the same length.
    pub fn from_rows<R: AsRef<[BigInt]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
            }
            data.extend_from_slice(r);
        }
        Ok(IntMatrix { rows: rows.len(), cols, data })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns<C: AsRef<[BigInt]>>(columns: &[C]) -> Result<Self> {
        Ok(Self::from_rows(columns)?.transpose())
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        let rows: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Self::from_rows(&rows)
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

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
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
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(p) => {
                    a.swap_rows(k, p);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[(k, k)] * &a[(i, j)] - &a[(i, k)] * &a[(k, j)];
                // Sylvester's identity guarantees exact division.
                a[(i, j)] = v / &prev;
            }
        }
        prev = a[(k, k)].clone();
    }
    Ok(sign * &a[(n - 1, n - 1)])
}

/// The nonzero invariant factors of the Smith normal form, each dividing the
/// next. Their product is the index of the column lattice in its saturation.
pub fn elementary_divisors(m: &IntMatrix) -> Vec<BigInt> {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // Pivot: the entry of minimal absolute value in the trailing block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[(i, j)].is_zero() && pivot.is_none_or(|(pi, pj)| a[(i, j)].abs() < a[(pi, pj)].abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);

        let mut clean = true;
        for i in t + 1..rows {
            if a[(i, t)].is_zero() {
                continue;
            }
            let q = a[(i, t)].div_floor(&a[(t, t)]);
            for j in t..cols {
                let v = &a[(i, j)] - &q * &a[(t, j)];
                a[(i, j)] = v;
            }
            if !a[(i, t)].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..cols {
            if a[(t, j)].is_zero() {
                continue;
            }
            let q = a[(t, j)].div_floor(&a[(t, t)]);
            for i in t..rows {
                let v = &a[(i, j)] - &q * &a[(i, t)];
                a[(i, j)] = v;
            }
            if !a[(t, j)].is_zero() {
                clean = false;
            }
        }
        if !clean {
            // Remainders are smaller than the pivot; repeat with a new pivot.
            continue;
        }
        // Enforce divisibility of the trailing block by the pivot.
        let p = a[(t, t)].clone();
        let offender = (t + 1..rows)
            .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
            .find(|&(i, j)| !a[(i, j)].is_multiple_of(&p));
        if let Some((i, _)) = offender {
            for j in t..cols {
                let v = &a[(t, j)] + &a[(i, j)];
                a[(t, j)] = v;
            }
            continue;
        }
        diag.push(p.abs());
        t += 1;
    }
    diag
}

/// Rank over the rationals of a list of integer vectors.
pub fn rank<R: AsRef<[BigInt]>>(vectors: &[R]) -> usize {
    let rows: Vec<Vec<Rational>> =
        vectors.iter().map(|v| v.as_ref().iter().map(|x| Rational::from_integer(x.clone())).collect()).collect();
    rank_rational(&rows)
}

pub fn rank_rational(rows: &[Vec<Rational>]) -> usize {
    let mut a = rows.to_vec();
    row_reduce(&mut a).len()
}

/// Reduces `a` in place to reduced row echelon form and returns the pivot
/// columns. Zero rows end up at the bottom.
fn row_reduce(a: &mut [Vec<Rational>]) -> Vec<usize> {
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pivot_row = a[r].clone();
                for (x, p) in a[i].iter_mut().zip(&pivot_row) {
                    *x = &*x - &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    pivots
}

/// A basis of the rational nullspace `{x : A x = 0}` of the matrix with the
/// given rows. `cols` is needed when `rows` is empty.
pub fn kernel(rows: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let mut a = rows.to_vec();
    let pivots = row_reduce(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rational::zero(); cols];
            x[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                x[p] = -a[r][f].clone();
            }
            x
        })
        .collect()
}

/// Integer kernel vectors, obtained by clearing denominators of [`kernel`].
pub fn integer_kernel<R: AsRef<[BigInt]>>(rows: &[R], cols: usize) -> Vec<Vec<BigInt>> {
    let q: Vec<Vec<Rational>> =
        rows.iter().map(|v| v.as_ref().iter().map(|x| Rational::from_integer(x.clone())).collect()).collect();
    kernel(&q, cols).into_iter().map(|v| clear_denominators(&v)).collect()
}

/// Scales a rational vector to a primitive integer vector with the same
/// direction.
pub fn clear_denominators(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

/// Solves `target + sum_i b_i * basis_i = 0` for the unique coefficients `b`.
///
/// `basis` must consist of `d` linearly independent vectors of length `d`.
pub fn solve_unique<B: AsRef<[BigInt]>>(basis: &[B], target: &[BigInt]) -> Result<Vec<Rational>> {
    let d = target.len();
    if basis.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: basis.len() });
    }
    for b in basis {
        if b.as_ref().len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: b.as_ref().len() });
        }
    }
    // Augmented system with the basis vectors as columns and -target on the right.
    let mut a: Vec<Vec<Rational>> = (0..d)
        .map(|i| {
            let mut row: Vec<Rational> = basis.iter().map(|b| Rational::from_integer(b.as_ref()[i].clone())).collect();
            row.push(Rational::from_integer(-target[i].clone()));
            row
        })
        .collect();
    let pivots = row_reduce(&mut a);
    if pivots.len() != d || pivots.iter().any(|&p| p >= d) {
        return Err(Error::Singular);
    }
    Ok(a.into_iter().map(|row| row[d].clone()).collect())
}

/// Dot product of an integer covector with an integer vector.
pub fn pairing(m: &[BigInt], v: &[BigInt]) -> BigInt {
    m.iter().zip(v).map(|(a, b)| a * b).sum()
}
