//! Exact integer matrices, exchange-matrix seeds and Fomin–Zelevinsky mutation.
//!
//! Every entry is a [`BigInt`]. Entries of mutated seeds and C-matrices grow
//! exponentially along mutation paths, so there is no fixed-width fast path.

use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{check_index, Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
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
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    /// Builds a matrix from row vectors; all rows must have equal length.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has length {} but row 0 has length {cols}",
                    row.len()
                )));
            }
            data.extend(row.iter().cloned().map(Into::into));
        }
        Ok(IntMatrix { rows: rows.len(), cols, data })
    }

    /// Square matrix with the given diagonal.
    pub fn diagonal(diag: &[BigInt]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in diag.iter().enumerate() {
            m.data[i * n + i] = d.clone();
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

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [BigInt] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Row-major `i64` view, `None` if some entry does not fit.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        use num_traits::ToPrimitive;
        (0..self.rows)
            .map(|i| self.row(i).iter().map(ToPrimitive::to_i64).collect())
            .collect()
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

    pub fn neg(&self) -> Self {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * factor).collect(),
        }
    }

    pub fn add(&self, other: &IntMatrix) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(IntMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, other: &IntMatrix) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(IntMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(l, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against a {}x{} matrix",
                v.len(),
                self.rows,
                self.cols
            )));
        }
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += vi * self.get(i, j);
            }
        }
        Ok(out)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn is_skew_symmetric(&self) -> bool {
        self.first_skew_violation().is_none()
    }

    fn first_skew_violation(&self) -> Option<(usize, usize)> {
        if !self.is_square() {
            return Some((0, 0));
        }
        for i in 0..self.rows {
            for j in i..self.cols {
                if self.get(i, j) != &-self.get(j, i) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Removes the listed columns (in any order), keeping the rest in order.
    pub fn without_columns(&self, drop: &[usize]) -> Self {
        let keep: Vec<usize> = (0..self.cols).filter(|j| !drop.contains(j)).collect();
        self.select_columns(&keep)
    }

    pub fn select_columns(&self, keep: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, keep.len());
        for i in 0..self.rows {
            for (jj, &j) in keep.iter().enumerate() {
                out.set(i, jj, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn select_rows(&self, keep: &[usize]) -> Self {
        let mut data = Vec::with_capacity(keep.len() * self.cols);
        for &i in keep {
            data.extend_from_slice(self.row(i));
        }
        IntMatrix { rows: keep.len(), cols: self.cols, data }
    }

    /// Principal submatrix on the complement of `drop`.
    pub fn delete_index(&self, drop: usize) -> Self {
        let keep: Vec<usize> = (0..self.rows).filter(|&i| i != drop).collect();
        self.select_rows(&keep).select_columns(&keep)
    }

    /// Simultaneous row/column permutation: `out[a][b] = self[perm[a]][perm[b]]`.
    pub fn permute_symmetric(&self, perm: &[usize]) -> Self {
        self.select_rows(perm).select_columns(perm)
    }

    fn check_same_shape(&self, other: &IntMatrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        self.get(i, j)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Entrywise positive part `[A]_+`.
pub fn plus_part(a: &IntMatrix) -> IntMatrix {
    IntMatrix {
        rows: a.rows,
        cols: a.cols,
        data: a.data.iter().map(pos).collect(),
    }
}

pub(crate) fn pos(x: &BigInt) -> BigInt {
    if x.is_positive() {
        x.clone()
    } else {
        BigInt::zero()
    }
}

/// Identity with the `(k, k)` entry replaced by −1.
pub fn jk_matrix(n: usize, k: usize) -> Result<IntMatrix> {
    check_index(k, n)?;
    let mut j = IntMatrix::identity(n);
    j.set(k, k, -BigInt::one());
    Ok(j)
}

/// Keeps only row `k`; everything else becomes zero.
pub fn row_mask(a: &IntMatrix, k: usize) -> IntMatrix {
    let mut out = IntMatrix::zeros(a.rows, a.cols);
    out.row_mut(k).clone_from_slice(a.row(k));
    out
}

/// Keeps only column `k`; everything else becomes zero.
pub fn column_mask(a: &IntMatrix, k: usize) -> IntMatrix {
    let mut out = IntMatrix::zeros(a.rows, a.cols);
    for i in 0..a.rows {
        out.set(i, k, a.get(i, k).clone());
    }
    out
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.to_rows();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num.div_floor(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    Ok(sign * &a[n - 1][n - 1])
}

/// Exact inverse of a unimodular integer matrix.
pub fn unimodular_inverse(m: &IntMatrix) -> Result<IntMatrix> {
    let det = determinant(m)?;
    if !det.abs().is_one() {
        return Err(Error::NotUnimodular { det: det.to_string() });
    }
    let n = m.rows;
    // Gauss–Jordan over Q; the result is integral because det = ±1.
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> =
                m.row(i).iter().map(|x| BigRational::from_integer(x.clone())).collect();
            row.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("nonsingular matrix has a pivot in every column");
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in col..2 * n {
                    let delta = &factor * &a[col][c];
                    a[r][c] -= delta;
                }
            }
        }
    }
    let mut out = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let x = &a[i][n + j];
            debug_assert!(x.is_integer());
            out.set(i, j, x.to_integer());
        }
    }
    Ok(out)
}

/// A skew-symmetric exchange matrix with vertex labels.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Seed {
    b: IntMatrix,
    labels: Vec<String>,
}

impl Seed {
    /// Labels default to `1..=n`.
    pub fn new(b: IntMatrix) -> Result<Self> {
        let labels = (1..=b.rows()).map(|i| i.to_string()).collect();
        Self::with_labels(b, labels)
    }

    pub fn with_labels(b: IntMatrix, labels: Vec<String>) -> Result<Self> {
        if !b.is_square() {
            return Err(Error::NotSquare { rows: b.rows(), cols: b.cols() });
        }
        if let Some((i, j)) = b.first_skew_violation() {
            return Err(Error::NotSkewSymmetric(i, j));
        }
        if labels.len() != b.rows() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {} vertices",
                labels.len(),
                b.rows()
            )));
        }
        Ok(Seed { b, labels })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(IntMatrix::from_rows(rows)?)
    }

    pub fn n(&self) -> usize {
        self.b.rows()
    }

    pub fn b(&self) -> &IntMatrix {
        &self.b
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `b_{ij}`.
    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        self.b.get(i, j)
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.b
    }

    /// Mutation at `k`, entrywise:
    /// `b'_{ij} = -b_{ij}` if `k ∈ {i, j}`, else `b_{ij} + (|b_{ik}| b_{kj} + b_{ik} |b_{kj}|) / 2`.
    pub fn mutate(&self, k: usize) -> Result<Seed> {
        let n = self.n();
        check_index(k, n)?;
        let b = &self.b;
        let mut out = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let v = if i == k || j == k {
                    -b.get(i, j)
                } else {
                    let (bik, bkj) = (b.get(i, k), b.get(k, j));
                    let bump: BigInt = (bik.abs() * bkj + bik * bkj.abs()) / 2;
                    b.get(i, j) + bump
                };
                out.set(i, j, v);
            }
        }
        Ok(Seed { b: out, labels: self.labels.clone() })
    }

    /// Applies `sequence` left to right.
    pub fn mutate_along(&self, sequence: &[usize]) -> Result<Seed> {
        let mut s = self.clone();
        for &k in sequence {
            s = s.mutate(k)?;
        }
        Ok(s)
    }
}

/// Mutation by matrix conjugation, `E^T B E` with `E = J_k + [sign·B]_+^{k•}`.
///
/// Both signs give the same matrix; this is kept as an independent route to
/// [`Seed::mutate`].
pub fn mutate_b_sandwich(seed: &Seed, k: usize, positive: bool) -> Result<Seed> {
    let n = seed.n();
    let signed = if positive { seed.b.clone() } else { seed.b.neg() };
    let e = jk_matrix(n, k)?.add(&row_mask(&plus_part(&signed), k))?;
    let b = e.transpose().mul(&seed.b)?.mul(&e)?;
    Seed::with_labels(b, seed.labels.clone())
}

/// Mutation of an exchange matrix at `k`.
pub fn mutate_b(seed: &Seed, k: usize) -> Result<Seed> {
    seed.mutate(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn plus_part_examples() {
        assert_eq!(plus_part(&m(&[vec![0, -2], vec![3, 0]])), m(&[vec![0, 0], vec![3, 0]]));
        assert_eq!(plus_part(&IntMatrix::zeros(3, 2)), IntMatrix::zeros(3, 2));
    }

    #[test]
    fn rank_two_mutation_negates() {
        let s = Seed::from_rows(&[vec![0, 3], vec![-3, 0]]).unwrap();
        assert_eq!(s.mutate(0).unwrap().b(), &m(&[vec![0, -3], vec![3, 0]]));
        assert!(matches!(s.mutate(2), Err(Error::IndexOutOfRange { index: 2, size: 2 })));
    }

    #[test]
    fn jk_examples() {
        assert_eq!(jk_matrix(2, 0).unwrap(), m(&[vec![-1, 0], vec![0, 1]]));
        assert_eq!(
            jk_matrix(3, 2).unwrap(),
            m(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, -1]])
        );
        for n in 1..=8 {
            for k in 0..n {
                let j = jk_matrix(n, k).unwrap();
                assert!(j.mul(&j).unwrap().is_identity());
            }
        }
        assert!(jk_matrix(3, 3).is_err());
    }

    #[test]
    fn unimodular_inverse_examples() {
        assert_eq!(unimodular_inverse(&IntMatrix::identity(4)).unwrap(), IntMatrix::identity(4));
        assert_eq!(
            unimodular_inverse(&m(&[vec![1, 1], vec![0, 1]])).unwrap(),
            m(&[vec![1, -1], vec![0, 1]])
        );
        assert!(matches!(
            unimodular_inverse(&m(&[vec![2, 0], vec![0, 1]])),
            Err(Error::NotUnimodular { .. })
        ));
        assert!(matches!(
            unimodular_inverse(&m(&[vec![1, 2, 3]])),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let a = m(&[vec![2, -1, 0, 3], vec![1, 4, -2, 0], vec![0, 5, 1, -1], vec![3, 0, 2, 2]]);
        // reference value by cofactor expansion
        assert_eq!(determinant(&a).unwrap(), BigInt::from(-74));
        assert_eq!(determinant(&m(&[vec![0, 1], vec![1, 0]])).unwrap(), BigInt::from(-1));
        assert_eq!(determinant(&m(&[vec![1, 2], vec![2, 4]])).unwrap(), BigInt::zero());
    }

    #[test]
    fn seed_rejects_non_skew() {
        assert!(matches!(
            Seed::from_rows(&[vec![0, 1], vec![1, 0]]),
            Err(Error::NotSkewSymmetric(0, 1))
        ));
        assert!(matches!(Seed::from_rows(&[vec![1]]), Err(Error::NotSkewSymmetric(0, 0))));
    }

    #[test]
    fn masks() {
        let a = m(&[vec![1, 2], vec![3, 4]]);
        assert_eq!(row_mask(&a, 1), m(&[vec![0, 0], vec![3, 4]]));
        assert_eq!(column_mask(&a, 1), m(&[vec![0, 2], vec![0, 4]]));
    }
}
