//! Dense integer matrices plus the exact rational and big-integer routines
//! (rank, inverse, determinant, Hermite normal form, signature, integer
//! solving) the rest of the crate is built on.
//!
//! `IMat` stores `i64` entries and uses checked arithmetic; an overflow is a
//! bug in the caller's sizing assumptions and panics with a clear message.
//! Everything that can grow (elimination, HNF) runs over `BigInt`/`BigRational`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IMat {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

#[inline]
fn add(a: i64, b: i64) -> i64 {
    a.checked_add(b)
        .expect("integer overflow in lattice arithmetic")
}

#[inline]
fn mul(a: i64, b: i64) -> i64 {
    a.checked_mul(b)
        .expect("integer overflow in lattice arithmetic")
}

impl IMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IMat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IMat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from row vectors. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix rows");
            data.extend_from_slice(row);
        }
        IMat {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn from_cols(cols: &[Vec<i64>]) -> Self {
        IMat::from_rows(cols).transpose()
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

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn data(&self) -> &[i64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> Vec<i64> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn col(&self, c: usize) -> Vec<i64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn transpose(&self) -> IMat {
        let mut t = IMat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &IMat) -> IMat {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut out = IMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = add(out.data[idx], mul(a, other.get(k, j)));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, v.len(), "matrix/vector shape mismatch");
        (0..self.rows)
            .map(|r| {
                let mut s = 0i64;
                for c in 0..self.cols {
                    s = add(s, mul(self.get(r, c), v[c]));
                }
                s
            })
            .collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.rows, v.len(), "vector/matrix shape mismatch");
        (0..self.cols)
            .map(|c| {
                let mut s = 0i64;
                for r in 0..self.rows {
                    s = add(s, mul(v[r], self.get(r, c)));
                }
                s
            })
            .collect()
    }

    pub fn sub(&self, other: &IMat) -> IMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                a.checked_sub(*b)
                    .expect("integer overflow in lattice arithmetic")
            })
            .collect();
        IMat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn neg(&self) -> IMat {
        IMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| (0..self.cols).all(|c| self.get(r, c) == i64::from(r == c)))
    }

    pub fn pow(&self, mut e: u32) -> IMat {
        let mut base = self.clone();
        let mut acc = IMat::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiplicative order, searched up to `limit`.
    pub fn order(&self, limit: u32) -> Option<u32> {
        let mut p = self.clone();
        for k in 1..=limit {
            if p.is_identity() {
                return Some(k);
            }
            p = p.mul(self);
        }
        None
    }

    /// Top-left `k x k` block.
    pub fn leading_block(&self, k: usize) -> IMat {
        let mut out = IMat::zeros(k, k);
        for r in 0..k {
            for c in 0..k {
                out.set(r, c, self.get(r, c));
            }
        }
        out
    }

    pub fn to_rational(&self) -> QMat {
        QMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect(),
        }
    }
}

impl fmt::Debug for IMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_rows())
    }
}

impl fmt::Display for IMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            writeln!(f, "{:?}", self.row(r))?;
        }
        Ok(())
    }
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0i64, |s, (x, y)| add(s, mul(*x, *y)))
}

/// Dense rational matrix, used where denominators genuinely appear.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<BigRational>,
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigRational::one();
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigRational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.rows);
        let mut out = QMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Inverse by Gauss-Jordan; `None` when singular.
    pub fn inverse(&self) -> Option<QMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = QMat::identity(n);
        for col in 0..n {
            let piv = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if piv != col {
                for j in 0..n {
                    a.data.swap(piv * n + j, col * n + j);
                    inv.data.swap(piv * n + j, col * n + j);
                }
            }
            let p = a.get(col, col).clone();
            for j in 0..n {
                let v = a.get(col, j) / &p;
                a.set(col, j, v);
                let v = inv.get(col, j) / &p;
                inv.set(col, j, v);
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for j in 0..n {
                    let v = a.get(r, j) - &f * a.get(col, j);
                    a.set(r, j, v);
                    let v = inv.get(r, j) - &f * inv.get(col, j);
                    inv.set(r, j, v);
                }
            }
        }
        Some(inv)
    }

    /// Converts back to integers if every entry is integral.
    pub fn to_integer(&self) -> Option<IMat> {
        let mut out = IMat::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let q = self.get(r, c);
                if !q.is_integer() {
                    return None;
                }
                out.set(r, c, q.to_integer().to_i64()?);
            }
        }
        Some(out)
    }
}

/// Rank over Q.
pub fn rank(m: &IMat) -> usize {
    let mut a = m.to_rational();
    let (rows, cols) = (a.rows, a.cols);
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !a.get(r, col).is_zero()) else {
            continue;
        };
        for j in 0..cols {
            a.data.swap(piv * cols + j, rank * cols + j);
        }
        for r in rank + 1..rows {
            if a.get(r, col).is_zero() {
                continue;
            }
            let f = a.get(r, col) / a.get(rank, col);
            for j in col..cols {
                let v = a.get(r, j) - &f * a.get(rank, j);
                a.set(r, j, v);
            }
        }
        rank += 1;
    }
    rank
}

/// Determinant by fraction-free Bareiss elimination.
pub fn det(m: &IMat) -> BigInt {
    assert!(m.is_square());
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|r| (0..n).map(|c| BigInt::from(m.get(r, c))).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Determinant of a small square matrix given by rows, fraction-free in
/// `i128`; panics on overflow rather than wrapping.
pub fn det_small(rows: &[Vec<i64>]) -> i128 {
    let n = rows.len();
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n.saturating_sub(1) {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j]
                    .checked_mul(a[k][k])
                    .and_then(|x| x.checked_sub(a[i][k].checked_mul(a[k][j])?))
                    .expect("integer overflow in determinant");
                a[i][j] = v / prev;
            }
        }
        prev = a[k][k];
    }
    if n == 0 {
        1
    } else {
        sign * a[n - 1][n - 1]
    }
}

/// Inverse of a unimodular integer matrix, `None` if singular or non-integral.
pub fn inverse_integer(m: &IMat) -> Option<IMat> {
    m.to_rational().inverse()?.to_integer()
}

/// Counts of positive, zero and negative entries after congruence
/// diagonalization of a symmetric matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub positive: usize,
    pub zero: usize,
    pub negative: usize,
}

/// Sylvester signature by symmetric Gaussian elimination over Q. Each step
/// applies the same row and column operation, so the result is congruent to
/// the input and inertia is preserved.
pub fn signature(m: &IMat) -> Signature {
    assert!(m.is_square());
    let n = m.rows();
    let mut a = m.to_rational();
    for i in 0..n {
        for j in 0..n {
            assert_eq!(
                m.get(i, j),
                m.get(j, i),
                "signature needs a symmetric matrix"
            );
        }
    }
    let add_row_col = |a: &mut QMat, dst: usize, src: usize, f: &BigRational| {
        for j in 0..n {
            let v = a.get(dst, j) + f * a.get(src, j);
            a.set(dst, j, v);
        }
        for j in 0..n {
            let v = a.get(j, dst) + f * a.get(j, src);
            a.set(j, dst, v);
        }
    };
    let swap = |a: &mut QMat, x: usize, y: usize| {
        for j in 0..n {
            a.data.swap(x * n + j, y * n + j);
        }
        for j in 0..n {
            a.data.swap(j * n + x, j * n + y);
        }
    };
    for k in 0..n {
        if a.get(k, k).is_zero() {
            if let Some(p) = (k + 1..n).find(|&r| !a.get(r, r).is_zero()) {
                swap(&mut a, k, p);
            } else if let Some(p) = (k + 1..n).find(|&r| !a.get(k, r).is_zero()) {
                // diagonal is zero but an off-diagonal entry is not: e_k + e_p
                // has value 2 a_kp, which is nonzero
                add_row_col(&mut a, k, p, &BigRational::one());
            } else {
                continue;
            }
        }
        let p = a.get(k, k).clone();
        for r in k + 1..n {
            if a.get(r, k).is_zero() {
                continue;
            }
            let f = -(a.get(r, k) / &p);
            add_row_col(&mut a, r, k, &f);
        }
    }
    let mut s = Signature {
        positive: 0,
        zero: 0,
        negative: 0,
    };
    for k in 0..n {
        let d = a.get(k, k);
        if d.is_positive() {
            s.positive += 1;
        } else if d.is_negative() {
            s.negative += 1;
        } else {
            s.zero += 1;
        }
    }
    s
}

/// Row Hermite normal form of the integer span of `vs` (non-zero rows only):
/// pivots positive, entries above a pivot reduced into `[0, pivot)`.
pub fn hermite_rows(vs: &[Vec<i64>], dim: usize) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigInt>> = vs
        .iter()
        .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    for v in &a {
        assert_eq!(v.len(), dim, "vector dimension mismatch");
    }
    let mut out_rows = 0;
    for col in 0..dim {
        // Euclid down the column until one non-zero entry remains
        loop {
            let mut best: Option<usize> = None;
            for r in out_rows..a.len() {
                if a[r][col].is_zero() {
                    continue;
                }
                match best {
                    Some(b) if a[b][col].abs() <= a[r][col].abs() => {}
                    _ => best = Some(r),
                }
            }
            let Some(b) = best else { break };
            a.swap(out_rows, b);
            let mut done = true;
            for r in out_rows + 1..a.len() {
                if a[r][col].is_zero() {
                    continue;
                }
                let q = a[r][col].div_floor(&a[out_rows][col]);
                for j in col..dim {
                    let v = &a[r][j] - &q * &a[out_rows][j];
                    a[r][j] = v;
                }
                if !a[r][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if out_rows < a.len() && !a[out_rows][col].is_zero() {
            if a[out_rows][col].is_negative() {
                for j in col..dim {
                    a[out_rows][j] = -&a[out_rows][j];
                }
            }
            for r in 0..out_rows {
                let q = a[r][col].div_floor(&a[out_rows][col]);
                if q.is_zero() {
                    continue;
                }
                for j in col..dim {
                    let v = &a[r][j] - &q * &a[out_rows][j];
                    a[r][j] = v;
                }
            }
            out_rows += 1;
        }
    }
    a.truncate(out_rows);
    a
}

/// Solution set of `A y = d` over the integers: a particular solution plus a
/// basis of the integer kernel, or `None` when no integer solution exists.
///
/// Works by column operations `A V = H` with `V` unimodular and `H` in column
/// echelon form, tracked in `i128`.
pub fn solve_integer(a: &IMat, d: &[i64]) -> Option<(Vec<i64>, Vec<Vec<i64>>)> {
    let (r, m) = (a.rows(), a.cols());
    assert_eq!(d.len(), r);
    let mut h: Vec<Vec<i128>> = (0..r)
        .map(|i| (0..m).map(|j| a.get(i, j) as i128).collect())
        .collect();
    let mut v: Vec<Vec<i128>> = (0..m)
        .map(|i| (0..m).map(|j| i128::from(i == j)).collect())
        .collect();
    let col_op =
        |h: &mut Vec<Vec<i128>>, v: &mut Vec<Vec<i128>>, dst: usize, src: usize, q: i128| {
            for row in h.iter_mut() {
                row[dst] -= q * row[src];
            }
            for row in v.iter_mut() {
                row[dst] -= q * row[src];
            }
        };
    let col_swap = |h: &mut Vec<Vec<i128>>, v: &mut Vec<Vec<i128>>, x: usize, y: usize| {
        for row in h.iter_mut() {
            row.swap(x, y);
        }
        for row in v.iter_mut() {
            row.swap(x, y);
        }
    };
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut next_col = 0;
    for row in 0..r {
        if next_col == m {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for c in next_col..m {
                if h[row][c] != 0 && best.is_none_or(|b| h[row][c].abs() < h[row][b].abs()) {
                    best = Some(c);
                }
            }
            let Some(b) = best else { break };
            col_swap(&mut h, &mut v, next_col, b);
            let mut done = true;
            for c in next_col + 1..m {
                if h[row][c] == 0 {
                    continue;
                }
                let q = h[row][c].div_euclid(h[row][next_col]);
                col_op(&mut h, &mut v, c, next_col, q);
                if h[row][c] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[row][next_col] != 0 {
            pivots.push((row, next_col));
            next_col += 1;
        }
    }
    // forward substitution for z with H z = d
    let mut z = vec![0i128; m];
    let mut residual: Vec<i128> = d.iter().map(|&x| x as i128).collect();
    let mut pi = 0;
    for row in 0..r {
        if pi < pivots.len() && pivots[pi].0 == row {
            let c = pivots[pi].1;
            if residual[row] % h[row][c] != 0 {
                return None;
            }
            z[c] = residual[row] / h[row][c];
            for rr in 0..r {
                residual[rr] -= h[rr][c] * z[c];
            }
            pi += 1;
        } else if residual[row] != 0 {
            return None;
        }
    }
    if residual.iter().any(|&x| x != 0) {
        return None;
    }
    let to64 = |x: i128| i64::try_from(x).expect("integer overflow in lattice arithmetic");
    let particular: Vec<i64> = (0..m)
        .map(|i| to64((0..m).map(|j| v[i][j] * z[j]).sum()))
        .collect();
    let kernel: Vec<Vec<i64>> = (next_col..m)
        .map(|c| (0..m).map(|i| to64(v[i][c])).collect())
        .collect();
    Some((particular, kernel))
}

/// All points `p + sum k_i b_i` (integer `k_i`) whose coordinates lie in
/// `[-bound, bound]`. The basis must be linearly independent.
pub fn lattice_points_in_box(p: &[i64], basis: &[Vec<i64>], bound: i64) -> Vec<Vec<i64>> {
    let m = p.len();
    let k = basis.len();
    if k == 0 {
        return if p.iter().all(|x| x.abs() <= bound) {
            vec![p.to_vec()]
        } else {
            vec![]
        };
    }
    // choose k coordinates on which the basis is invertible
    let bt = IMat::from_rows(basis); // k x m
    let mut chosen: Vec<usize> = Vec::new();
    for c in 0..m {
        let mut trial = chosen.clone();
        trial.push(c);
        let sub = IMat::from_rows(
            &basis
                .iter()
                .map(|b| trial.iter().map(|&t| b[t]).collect())
                .collect::<Vec<_>>(),
        );
        if rank(&sub) == trial.len() {
            chosen = trial;
        }
        if chosen.len() == k {
            break;
        }
    }
    assert_eq!(chosen.len(), k, "kernel basis is not independent");
    let sub = IMat::from_rows(
        &chosen
            .iter()
            .map(|&c| (0..k).map(|i| bt.get(i, c)).collect())
            .collect::<Vec<_>>(),
    ); // k x k, rows = chosen coords
    let inv = sub
        .to_rational()
        .inverse()
        .expect("independent by construction");
    let mut out = Vec::new();
    let mut target = vec![-bound; k];
    loop {
        // coefficients reproducing the target values on the chosen coords
        let rhs: Vec<BigRational> = chosen
            .iter()
            .zip(&target)
            .map(|(&c, &t)| BigRational::from_integer((t - p[c]).into()))
            .collect();
        let mut coeff = Vec::with_capacity(k);
        let mut integral = true;
        for i in 0..k {
            let mut s = BigRational::zero();
            for j in 0..k {
                s += inv.get(i, j) * &rhs[j];
            }
            if !s.is_integer() {
                integral = false;
                break;
            }
            coeff.push(s.to_integer().to_i64().expect("small coefficient"));
        }
        if integral {
            let pt: Vec<i64> = (0..m)
                .map(|c| p[c] + (0..k).map(|i| coeff[i] * basis[i][c]).sum::<i64>())
                .collect();
            if pt.iter().all(|x| x.abs() <= bound) {
                out.push(pt);
            }
        }
        // odometer over target values
        let mut i = 0;
        loop {
            if i == k {
                return out;
            }
            target[i] += 1;
            if target[i] <= bound {
                break;
            }
            target[i] = -bound;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_inverse_agree() {
        let m = IMat::from_rows(&[vec![2, 1, 0], vec![1, 1, 0], vec![0, 3, 1]]);
        assert_eq!(det(&m), BigInt::from(1));
        let inv = inverse_integer(&m).unwrap();
        assert!(m.mul(&inv).is_identity());
    }

    #[test]
    fn singular_has_no_inverse() {
        let m = IMat::from_rows(&[vec![1, 2], vec![2, 4]]);
        assert!(inverse_integer(&m).is_none());
        assert_eq!(rank(&m), 1);
        assert_eq!(det(&m), BigInt::zero());
    }

    #[test]
    fn signature_of_hyperbolic_plane() {
        let m = IMat::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(
            signature(&m),
            Signature {
                positive: 1,
                zero: 0,
                negative: 1
            }
        );
    }

    #[test]
    fn hermite_of_two_e1() {
        let h = hermite_rows(&[vec![2, 0, 0]], 3);
        assert_eq!(
            h,
            vec![vec![BigInt::from(2), BigInt::zero(), BigInt::zero()]]
        );
    }

    #[test]
    fn solve_simple_system() {
        // x + 2y = 5 over Z
        let a = IMat::from_rows(&[vec![1, 2]]);
        let (p, k) = solve_integer(&a, &[5]).unwrap();
        assert_eq!(p[0] + 2 * p[1], 5);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0][0] + 2 * k[0][1], 0);
        let b = IMat::from_rows(&[vec![2, 4]]);
        assert!(solve_integer(&b, &[3]).is_none());
    }

    #[test]
    fn box_points_on_a_line() {
        let pts = lattice_points_in_box(&[0, 0], &[vec![1, 1]], 2);
        assert_eq!(pts.len(), 5);
    }
}
