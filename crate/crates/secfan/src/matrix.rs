//! Dense integer matrices with exact normal forms.

use crate::prelude::*;
use core::fmt;
use num_integer::Integer;

/// Rectangular matrix over arbitrary-precision integers, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Int>,
}

/// Smith normal form `U * m * V = D` with `U`, `V` unimodular and `D`
/// diagonal with `d_i | d_{i+1}`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatrixError {
    ZeroVector,
    ShapeMismatch,
    Singular,
    Inconsistent,
}

impl fmt::Display for MatrixError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixError::ZeroVector => write!(f, "zero vector"),
            MatrixError::ShapeMismatch => write!(f, "matrix shape mismatch"),
            MatrixError::Singular => write!(f, "matrix is singular"),
            MatrixError::Inconsistent => write!(f, "inconsistent linear system"),
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Int::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Int>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().cloned());
        }
        IntMatrix { rows: r, cols: c, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let v: Vec<Vec<Int>> =
            rows.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect();
        IntMatrix::from_rows(&v)
    }

    pub fn at(&self, i: usize, j: usize) -> &Int {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Int {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> Vec<Int> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *t.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * other.at(k, j);
                    *out.at_mut(i, j) += add;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[a] += k * row[b]
    fn add_row(&mut self, a: usize, b: usize, k: &Int) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let add = k * self.at(b, j);
            *self.at_mut(a, j) += add;
        }
    }

    fn add_col(&mut self, a: usize, b: usize, k: &Int) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let add = k * self.at(i, b);
            *self.at_mut(i, a) += add;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = -self.at(a, j).clone();
            *self.at_mut(a, j) = v;
        }
    }

    /// Smith normal form with a fixed, deterministic pivoting order
    /// (smallest absolute value, ties broken by position).
    pub fn smith_normal_form(&self) -> Snf {
        let mut d = self.clone();
        let mut u = IntMatrix::identity(self.rows);
        let mut v = IntMatrix::identity(self.cols);
        let rank_bound = self.rows.min(self.cols);
        let mut t = 0usize;
        while t < rank_bound {
            // find pivot: nonzero entry of minimal |.| in d[t.., t..]
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..d.rows {
                for j in t..d.cols {
                    if !d.at(i, j).is_zero() {
                        let better = match &pivot {
                            None => true,
                            Some((pi, pj)) => d.at(i, j).abs() < d.at(*pi, *pj).abs(),
                        };
                        if better {
                            pivot = Some((i, j));
                        }
                    }
                }
            }
            let (pi, pj) = match pivot {
                None => break,
                Some(p) => p,
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            // clear row and column t
            let mut dirty = true;
            while dirty {
                dirty = false;
                for i in t + 1..d.rows {
                    if !d.at(i, t).is_zero() {
                        let q = d.at(i, t).div_floor(d.at(t, t));
                        let k = -q;
                        d.add_row(i, t, &k);
                        u.add_row(i, t, &k);
                        if !d.at(i, t).is_zero() {
                            // remainder smaller than pivot: swap up and restart
                            d.swap_rows(t, i);
                            u.swap_rows(t, i);
                            dirty = true;
                        }
                    }
                }
                for j in t + 1..d.cols {
                    if !d.at(t, j).is_zero() {
                        let q = d.at(t, j).div_floor(d.at(t, t));
                        let k = -q;
                        d.add_col(j, t, &k);
                        v.add_col(j, t, &k);
                        if !d.at(t, j).is_zero() {
                            d.swap_cols(t, j);
                            v.swap_cols(t, j);
                            dirty = true;
                        }
                    }
                }
            }
            // divisibility: ensure d[t][t] divides everything below-right
            let mut needs_restart = false;
            'outer: for i in t + 1..d.rows {
                for j in t + 1..d.cols {
                    if !(d.at(i, j) % d.at(t, t)).is_zero() {
                        // add row i to row t to bring the bad entry into play
                        d.add_row(t, i, &Int::one());
                        u.add_row(t, i, &Int::one());
                        needs_restart = true;
                        break 'outer;
                    }
                }
            }
            if needs_restart {
                continue;
            }
            if d.at(t, t).is_negative() {
                d.negate_row(t);
                u.negate_row(t);
            }
            t += 1;
        }
        Snf { u, d, v }
    }

    pub fn rank(&self) -> usize {
        let snf = self.smith_normal_form();
        let mut r = 0;
        for i in 0..snf.d.rows.min(snf.d.cols) {
            if !snf.d.at(i, i).is_zero() {
                r += 1;
            }
        }
        r
    }

    /// |det| for square matrices, as the product of SNF invariant factors.
    pub fn det_abs(&self) -> Result<Int, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::ShapeMismatch);
        }
        let snf = self.smith_normal_form();
        let mut p = Int::one();
        for i in 0..self.rows {
            p *= snf.d.at(i, i);
        }
        Ok(p.abs())
    }

    /// Signed determinant via fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<Int, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::ShapeMismatch);
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Int::one());
        }
        let mut m = self.clone();
        let mut sign = 1i32;
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if m.at(k, k).is_zero() {
                let swap = (k + 1..n).find(|&i| !m.at(i, k).is_zero());
                match swap {
                    None => return Ok(Int::zero()),
                    Some(i) => {
                        m.swap_rows(k, i);
                        sign = -sign;
                    }
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let val = (m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j)) / &prev;
                    *m.at_mut(i, j) = val;
                }
                *m.at_mut(i, k) = Int::zero();
            }
            prev = m.at(k, k).clone();
        }
        let d = m.at(n - 1, n - 1).clone();
        Ok(if sign < 0 { -d } else { d })
    }

    /// Basis of the saturated integer kernel `{ x : m x = 0 }`, as columns.
    /// The result spans the full lattice kernel (not just a finite-index
    /// sublattice).
    pub fn kernel_basis(&self) -> Vec<Vec<Int>> {
        // U m V = D  =>  m (V e_j) = U^{-1} D e_j; kernel spanned by V's
        // columns past the rank.
        let snf = self.smith_normal_form();
        let r = {
            let mut r = 0;
            for i in 0..snf.d.rows.min(snf.d.cols) {
                if !snf.d.at(i, i).is_zero() {
                    r += 1;
                }
            }
            r
        };
        (r..self.cols).map(|j| snf.v.col(j)).collect()
    }

    /// Solve `x^T * self = rhs^T` over the rationals (least structure: any
    /// solution), returning `x` with `len == self.rows`.
    pub fn solve_left_rational(&self, rhs: &[Rat]) -> Result<Vec<Rat>, MatrixError> {
        if rhs.len() != self.cols {
            return Err(MatrixError::ShapeMismatch);
        }
        // Gaussian elimination on the transposed augmented system:
        // self^T (rows x) ... we solve A^T x = rhs with A = self.
        let n = self.rows;
        let m = self.cols;
        let mut a: Vec<Vec<Rat>> = (0..m)
            .map(|j| {
                let mut row: Vec<Rat> = (0..n).map(|i| rat_int(self.at(i, j))).collect();
                row.push(rhs[j].clone());
                row
            })
            .collect();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut prow = 0usize;
        for col in 0..n {
            let found = (prow..m).find(|&i| !a[i][col].is_zero());
            let Some(pr) = found else { continue };
            a.swap(prow, pr);
            let inv = a[prow][col].clone();
            for v in a[prow].iter_mut() {
                *v = &*v / &inv;
            }
            for i in 0..m {
                if i != prow && !a[i][col].is_zero() {
                    let f = a[i][col].clone();
                    for k in 0..n + 1 {
                        let sub = &f * &a[prow][k];
                        a[i][k] = &a[i][k] - &sub;
                    }
                }
            }
            pivots.push((prow, col));
            prow += 1;
            if prow == m {
                break;
            }
        }
        for i in prow..m {
            if !a[i][n].is_zero() {
                return Err(MatrixError::Inconsistent);
            }
        }
        let mut x = vec![Rat::zero(); n];
        for (r, c) in pivots {
            x[c] = a[r][n].clone();
        }
        Ok(x)
    }
}

/// Divide a nonzero integer vector by the gcd of its entries, preserving
/// direction. Errors on the zero vector.
pub fn primitive(v: &[Int]) -> Result<Vec<Int>, MatrixError> {
    let mut g = Int::zero();
    for x in v {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return Err(MatrixError::ZeroVector);
    }
    Ok(v.iter().map(|x| x / &g).collect())
}

/// Clear denominators of a rational vector and primitivize, preserving
/// direction.
pub fn primitive_from_rational(v: &[Rat]) -> Result<Vec<Int>, MatrixError> {
    let mut lcm = Int::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<Int> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    primitive(&ints)
}

pub fn dot(a: &[Int], b: &[Int]) -> Int {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_rat(a: &[Int], b: &[Rat]) -> Rat {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| rat_int(x) * y).sum()
}
