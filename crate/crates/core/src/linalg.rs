//! Exact rational linear algebra on small dense matrices, plus the few
//! integer-lattice routines (primitive vectors, span saturation) the
//! polyhedral kernel needs.

use crate::rat::Rat;
use num::{BigInt, Integer, One, Signed, Zero};

pub type QVector = Vec<Rat>;

pub fn vec_add(a: &[Rat], b: &[Rat]) -> QVector {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Rat], b: &[Rat]) -> QVector {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(c: &Rat, a: &[Rat]) -> QVector {
    a.iter().map(|x| c * x).collect()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_int(a: &[BigInt], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(Rat::zero(), |acc, (x, y)| acc + Rat::from_integer(x.clone()) * y)
}

pub fn is_zero_vec(a: &[Rat]) -> bool {
    a.iter().all(|x| x.is_zero())
}

/// Dense row-major rational matrix with immutable shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl QMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    /// Builds from rows; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        QMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rat::from_integer(BigInt::from(x))).collect())
                .collect(),
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
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

    pub fn col(&self, j: usize) -> QVector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[Rat]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn matvec(&self, v: &[Rat]) -> QVector {
        assert_eq!(self.cols, v.len(), "matvec shape mismatch");
        self.rows_iter().map(|r| dot(r, v)).collect()
    }

    pub fn matmul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = QMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Rat::zero();
                for k in 0..self.cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// In-place reduced row echelon form; returns the pivot columns.
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
            self.swap_rows(r, p);
            let inv = self.get(r, c).recip();
            for j in c..self.cols {
                let v = self.get(r, j) * &inv;
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i != r && !self.get(i, c).is_zero() {
                    let f = self.get(i, c).clone();
                    for j in c..self.cols {
                        let v = self.get(i, j) - &f * self.get(r, j);
                        self.set(i, j, v);
                    }
                    self.set(i, c, Rat::zero());
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel `{x : A x = 0}`, in the canonical
    /// free-column form produced by RREF.
    pub fn kernel_basis(&self) -> Vec<QVector> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_of_col: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut x = vec![Rat::zero(); self.cols];
            x[free] = Rat::one();
            for (r, &c) in pivots.iter().enumerate() {
                x[c] = -m.get(r, free).clone();
            }
            basis.push(x);
        }
        basis
    }

    /// One solution of `A x = b`, or `None` if inconsistent.
    pub fn solve(&self, b: &[Rat]) -> Option<QVector> {
        assert_eq!(self.rows, b.len(), "solve shape mismatch");
        let mut aug = QMatrix::zero(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, self.cols).clone();
        }
        Some(x)
    }

    /// Exact inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<QMatrix> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let mut aug = QMatrix::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Rat::one());
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut inv = QMatrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rat::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Rat::zero();
            };
            if p != c {
                m.swap_rows(c, p);
                det = -det;
            }
            let pv = m.get(c, c).clone();
            det *= &pv;
            let inv = pv.recip();
            for i in (c + 1)..n {
                if !m.get(i, c).is_zero() {
                    let f = m.get(i, c) * &inv;
                    for j in c..n {
                        let v = m.get(i, j) - &f * m.get(c, j);
                        m.set(i, j, v);
                    }
                }
            }
        }
        det
    }
}

/// Scales a rational vector to the unique primitive integer vector with the
/// same direction. Returns `None` for the zero vector.
pub fn primitive_integer(v: &[Rat]) -> Option<Vec<BigInt>> {
    if is_zero_vec(v) {
        return None;
    }
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    Some(ints.iter().map(|x| x / &gcd).collect())
}

/// Same as [`primitive_integer`] but also flips the sign so the first
/// nonzero entry is positive (canonical form for equations).
pub fn primitive_integer_signed(v: &[Rat]) -> Option<Vec<BigInt>> {
    let p = primitive_integer(v)?;
    let flip = p
        .iter()
        .find(|x| !x.is_zero())
        .map(|x| x.is_negative())
        .unwrap_or(false);
    Some(if flip { p.iter().map(|x| -x).collect() } else { p })
}

/// Integer basis of `span_Q(columns) ∩ Z^n` (the saturated lattice of a
/// rational subspace), as columns. Uses integer diagonalization with a
/// tracked left inverse: if `S = U A V` is diagonal of rank r, the first r
/// columns of `U^{-1}` span the saturation.
pub fn span_saturation_basis(columns: &[QVector], n: usize) -> Vec<Vec<BigInt>> {
    // Clear denominators column by column; scaling does not change the span.
    let int_cols: Vec<Vec<BigInt>> = columns
        .iter()
        .filter_map(|c| primitive_integer(c))
        .collect();
    if int_cols.is_empty() {
        return Vec::new();
    }
    let m = int_cols.len();
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..m).map(|j| int_cols[j][i].clone()).collect())
        .collect();
    // u_inv accumulates the inverses of the row operations applied to `a`.
    let mut u_inv: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();

    let mut t = 0usize;
    while t < n && t < m {
        // Pick the nonzero entry of smallest magnitude in the remaining block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..n {
            for j in t..m {
                if !a[i][j].is_zero()
                    && best
                        .map(|(bi, bj)| a[i][j].magnitude() < a[bi][bj].magnitude())
                        .unwrap_or(true)
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        u_inv.iter_mut().for_each(|row| row.swap(t, pi));
        for row in a.iter_mut() {
            row.swap(t, pj);
        }

        let mut clean = true;
        for i in (t + 1)..n {
            if !a[i][t].is_zero() {
                let q = div_round(&a[i][t], &a[t][t]);
                if !q.is_zero() {
                    for j in t..m {
                        let v = &a[i][j] - &q * &a[t][j];
                        a[i][j] = v;
                    }
                    // Row op R_i -= q R_t has inverse R_i += q R_t, which acts
                    // on u_inv as the column op C_t += q C_i.
                    for r in 0..n {
                        let v = &u_inv[r][t] + &q * &u_inv[r][i];
                        u_inv[r][t] = v;
                    }
                }
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
        }
        for j in (t + 1)..m {
            if !a[t][j].is_zero() {
                let q = div_round(&a[t][j], &a[t][t]);
                if !q.is_zero() {
                    for i in t..n {
                        let v = &a[i][j] - &q * &a[i][t];
                        a[i][j] = v;
                    }
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
        }
        if clean {
            t += 1;
        }
    }

    (0..t).map(|j| (0..n).map(|i| u_inv[i][j].clone()).collect()).collect()
}

fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    // Truncated division; the remainder magnitude stays below |b|, which is
    // all the diagonalization loop needs to terminate.
    a.div_rem(b).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rint};

    #[test]
    fn rank_and_kernel() {
        let m = QMatrix::from_int_rows(&[vec![1, 1], vec![2, 2]]);
        assert_eq!(m.rank(), 1);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        assert!(is_zero_vec(&m.matvec(&k[0])));

        assert_eq!(QMatrix::identity(3).rank(), 3);
        assert_eq!(QMatrix::zero(2, 3).rank(), 0);
    }

    #[test]
    fn solve_and_inverse() {
        let m = QMatrix::from_int_rows(&[vec![2, 1], vec![1, 3]]);
        let x = m.solve(&[rint(5), rint(10)]).unwrap();
        assert_eq!(m.matvec(&x), vec![rint(5), rint(10)]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.matmul(&inv), QMatrix::identity(2));
        assert_eq!(m.det(), rint(5));

        let sing = QMatrix::from_int_rows(&[vec![1, 2], vec![2, 4]]);
        assert!(sing.inverse().is_none());
        assert!(sing.solve(&[rint(1), rint(0)]).is_none());
    }

    #[test]
    fn primitive_vectors() {
        assert_eq!(
            primitive_integer(&[rat(1, 2), rat(1, 3)]).unwrap(),
            vec![BigInt::from(3), BigInt::from(2)]
        );
        assert_eq!(
            primitive_integer_signed(&[rat(-2, 1), rint(4)]).unwrap(),
            vec![BigInt::from(1), BigInt::from(-2)]
        );
        assert!(primitive_integer(&[rint(0), rint(0)]).is_none());
    }

    #[test]
    fn saturation_of_skew_line() {
        // span{(2,2)} saturates to Z·(1,1).
        let basis = span_saturation_basis(&[vec![rint(2), rint(2)]], 2);
        assert_eq!(basis.len(), 1);
        let v = &basis[0];
        assert_eq!(v[0].magnitude(), v[1].magnitude());
        assert_eq!(v[0].magnitude(), &num::BigUint::from(1u32));

        // span{(1/2, 1/3)} = span{(3,2)} is already saturated.
        let basis = span_saturation_basis(&[vec![rat(1, 2), rat(1, 3)]], 2);
        assert_eq!(basis.len(), 1);
        let m: Vec<BigInt> = basis[0].clone();
        assert_eq!(m.iter().map(|x| x.magnitude().clone()).max().unwrap(), num::BigUint::from(3u32));
    }

    #[test]
    fn saturation_of_plane() {
        // Full plane in R^2: saturation is all of Z^2 (determinant ±1).
        let basis = span_saturation_basis(&[vec![rint(2), rint(0)], vec![rint(0), rint(3)]], 2);
        assert_eq!(basis.len(), 2);
        let det = &basis[0][0] * &basis[1][1] - &basis[0][1] * &basis[1][0];
        assert_eq!(det.magnitude(), &num::BigUint::from(1u32));
    }
}
