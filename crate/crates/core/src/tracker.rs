//! Lockstep mutation of δ-vectors and of Δ/C cluster frames.
//!
//! A [`ClusterFrame`] holds the Δ-matrix of an ordered cluster (one δ-vector
//! per row) together with its inverse, the C-matrix. Every operation here
//! keeps `Δ·C = I` and re-checks it on the result.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{check_index, Error, Result};
use crate::matrix::{pos, unimodular_inverse, IntMatrix, Seed};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn of(x: &BigInt) -> Option<Sign> {
        if x.is_positive() {
            Some(Sign::Plus)
        } else if x.is_negative() {
            Some(Sign::Minus)
        } else {
            None
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn to_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.to_i64())
    }

    pub fn apply(self, x: &BigInt) -> BigInt {
        match self {
            Sign::Plus => x.clone(),
            Sign::Minus => -x,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Weight vector of a presentation relative to a seed (a row vector).
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct DeltaVector(pub Vec<BigInt>);

impl DeltaVector {
    pub fn new(v: Vec<BigInt>) -> Self {
        DeltaVector(v)
    }

    pub fn from_i64(v: &[i64]) -> Self {
        DeltaVector(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// `sign · e_i` in dimension `n`.
    pub fn unit(n: usize, i: usize, sign: Sign) -> Self {
        let mut v = vec![BigInt::zero(); n];
        v[i] = sign.to_bigint();
        DeltaVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn neg(&self) -> Self {
        DeltaVector(self.0.iter().map(|x| -x).collect())
    }

    pub fn dot(&self, other: &[BigInt]) -> BigInt {
        self.0.iter().zip(other).map(|(a, b)| a * b).sum()
    }

    /// If the vector is `sign · m · e_i` with `m ≥ 1`, returns `(i, sign, m)`.
    pub fn as_signed_unit_multiple(&self) -> Option<(usize, Sign, BigInt)> {
        let mut found = None;
        for (i, x) in self.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            if found.is_some() {
                return None;
            }
            found = Some((i, Sign::of(x)?, x.abs()));
        }
        found
    }

    pub fn to_i64(&self) -> Option<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.0.iter().map(ToPrimitive::to_i64).collect()
    }
}

impl fmt::Display for DeltaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Mutation of a δ-vector at `k` relative to `seed`:
/// coordinate `k` is negated and every other coordinate `i` gains
/// `[sgn(−δ(k))·b_{ik}]_+ · δ(k)`.
pub fn mutate_delta(seed: &Seed, d: &DeltaVector, k: usize) -> Result<DeltaVector> {
    let n = seed.n();
    check_index(k, n)?;
    if d.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "δ-vector of length {} on a seed with {n} vertices",
            d.len()
        )));
    }
    Ok(DeltaVector(mutate_delta_raw(seed.b(), d.as_slice(), k)))
}

pub(crate) fn mutate_delta_raw(b: &IntMatrix, d: &[BigInt], k: usize) -> Vec<BigInt> {
    let dk = &d[k];
    if dk.is_zero() {
        return d.to_vec();
    }
    // sgn(−δ(k)) = −sgn(δ(k))
    let flip = dk.is_positive();
    d.iter()
        .enumerate()
        .map(|(i, x)| {
            if i == k {
                -x
            } else {
                let bik = b.get(i, k);
                let coeff = if flip { pos(&-bik) } else { pos(bik) };
                x + coeff * dk
            }
        })
        .collect()
}

/// Coherent sign of column `k`.
pub fn column_sign(m: &IntMatrix, k: usize) -> Result<Sign> {
    check_index(k, m.cols())?;
    let mut sign = None;
    for i in 0..m.rows() {
        if let Some(s) = Sign::of(m.get(i, k)) {
            match sign {
                None => sign = Some(s),
                Some(prev) if prev != s => return Err(Error::MixedSigns { column: k }),
                _ => {}
            }
        }
    }
    sign.ok_or(Error::ZeroColumn { column: k })
}

/// An ordered cluster of δ-vectors (rows of `delta`) and its C-matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ClusterFrame {
    delta: IntMatrix,
    c: IntMatrix,
}

impl ClusterFrame {
    /// Builds a frame from its Δ-matrix; C is the exact inverse.
    pub fn from_delta(delta: IntMatrix) -> Result<Self> {
        let c = unimodular_inverse(&delta)?;
        let f = ClusterFrame { delta, c };
        f.check_sign_coherence()?;
        Ok(f)
    }

    /// Builds a frame from both matrices and validates every invariant.
    pub fn from_parts(delta: IntMatrix, c: IntMatrix) -> Result<Self> {
        let f = ClusterFrame { delta, c };
        f.validate()?;
        Ok(f)
    }

    /// The negative cluster `{−e_1, …, −e_n}` in vertex order.
    pub fn negative(n: usize) -> Self {
        let m = IntMatrix::identity(n).neg();
        ClusterFrame { delta: m.clone(), c: m }
    }

    /// The positive cluster `{e_1, …, e_n}` in vertex order.
    pub fn positive(n: usize) -> Self {
        ClusterFrame { delta: IntMatrix::identity(n), c: IntMatrix::identity(n) }
    }

    pub fn unit(n: usize, sign: Sign) -> Self {
        match sign {
            Sign::Plus => Self::positive(n),
            Sign::Minus => Self::negative(n),
        }
    }

    pub fn n(&self) -> usize {
        self.delta.rows()
    }

    pub fn delta(&self) -> &IntMatrix {
        &self.delta
    }

    pub fn c(&self) -> &IntMatrix {
        &self.c
    }

    pub fn row(&self, i: usize) -> DeltaVector {
        DeltaVector(self.delta.row(i).to_vec())
    }

    pub fn validate(&self) -> Result<()> {
        if !self.delta.is_square() || !self.c.is_square() || self.delta.rows() != self.c.rows() {
            return Err(Error::InvalidFrame("Δ and C must be square of equal size".into()));
        }
        if !self.delta.mul(&self.c)?.is_identity() {
            return Err(Error::InvalidFrame("Δ·C ≠ I".into()));
        }
        self.check_sign_coherence()
    }

    pub fn check_sign_coherence(&self) -> Result<()> {
        for k in 0..self.n() {
            column_sign(&self.delta, k)
                .map_err(|e| Error::InvalidFrame(format!("Δ column {}: {e}", k + 1)))?;
            column_sign(&self.c, k)
                .map_err(|e| Error::InvalidFrame(format!("C column {}: {e}", k + 1)))?;
        }
        Ok(())
    }

    #[cfg(test)]
    pub(crate) fn from_parts_unchecked(delta: IntMatrix, c: IntMatrix) -> Self {
        ClusterFrame { delta, c }
    }

    /// Frame with rows (and the matching C columns) reordered so that the
    /// columns of `sign·C` are lexicographically increasing.
    pub fn canonical(&self, sign: Sign) -> ClusterFrame {
        let n = self.n();
        let signed = if sign == Sign::Plus { self.c.clone() } else { self.c.neg() };
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| signed.column(a).cmp(&signed.column(b)));
        ClusterFrame {
            delta: self.delta.select_rows(&order),
            c: self.c.select_columns(&order),
        }
    }
}

fn check_frame_size(seed: &Seed, f: &ClusterFrame) -> Result<()> {
    if seed.n() != f.n() {
        return Err(Error::DimensionMismatch(format!(
            "frame of size {} on a seed with {} vertices",
            f.n(),
            seed.n()
        )));
    }
    Ok(())
}

/// Mutation of a frame at `k`. Δ rows follow [`mutate_delta`]; C changes only
/// in row `k`: `C'(k, i) = [sgn(k)·b_k]_+ · γ_i − γ_i(k)` where `sgn(k)` is the
/// sign of column `k` of Δ.
pub fn mutate_frame(seed: &Seed, f: &ClusterFrame, k: usize) -> Result<ClusterFrame> {
    check_frame_size(seed, f)?;
    check_index(k, seed.n())?;
    let sgn = column_sign(&f.delta, k)?;
    let out = mutate_frame_with_sign(seed, f, k, sgn);
    if !out.delta.mul(&out.c)?.is_identity() {
        return Err(Error::InvalidFrame(format!("Δ·C ≠ I after mutation at {}", k + 1)));
    }
    Ok(out)
}

fn mutate_frame_with_sign(seed: &Seed, f: &ClusterFrame, k: usize, sgn: Sign) -> ClusterFrame {
    let n = seed.n();
    let b = seed.b();
    let mut delta = IntMatrix::zeros(n, n);
    for r in 0..n {
        let row = mutate_delta_raw(b, f.delta.row(r), k);
        delta.row_mut(r).clone_from_slice(&row);
    }
    let weights: Vec<BigInt> = (0..n).map(|l| pos(&sgn.apply(b.get(k, l)))).collect();
    let mut c = f.c.clone();
    let new_row = c_row_update(&f.c, &weights, k);
    c.row_mut(k).clone_from_slice(&new_row);
    ClusterFrame { delta, c }
}

/// `w · γ_i − γ_i(k)` for every column `γ_i` of `c`.
pub(crate) fn c_row_update(c: &IntMatrix, w: &[BigInt], k: usize) -> Vec<BigInt> {
    let n = c.cols();
    let combo = c.left_mul_vec(w).expect("weight length matches");
    (0..n).map(|i| &combo[i] - c.get(k, i)).collect()
}

/// The `j`-th exchange: replaces the `j`-th cluster element by its other
/// complement. With `S = Cᵀ·B·C`, `š` the sign of column `j` of C and
/// `E = J_j + [−š·S]_+^{j•}`, the new frame is `(E·Δ, C·E)`. Only row `j`
/// of Δ changes.
pub fn exchange_frame(seed: &Seed, f: &ClusterFrame, j: usize) -> Result<ClusterFrame> {
    check_frame_size(seed, f)?;
    check_index(j, seed.n())?;
    let n = seed.n();
    let check_sign = column_sign(&f.c, j)?;
    // row j of Cᵀ B C = (column j of C)ᵀ · B · C
    let cj = f.c.column(j);
    let cj_b = seed.b().left_mul_vec(&cj)?;
    let s_row = f.c.left_mul_vec(&cj_b)?;
    let e_row: Vec<BigInt> = s_row
        .iter()
        .enumerate()
        .map(|(l, s)| if l == j { -BigInt::one() } else { pos(&check_sign.flip().apply(s)) })
        .collect();

    let mut delta = f.delta.clone();
    let new_row = f.delta.left_mul_vec(&e_row)?;
    delta.row_mut(j).clone_from_slice(&new_row);

    let mut c = f.c.clone();
    for l in 0..n {
        if l == j {
            for i in 0..n {
                let v = -f.c.get(i, j);
                c.set(i, j, v);
            }
        } else if !e_row[l].is_zero() {
            for i in 0..n {
                let v = f.c.get(i, l) + f.c.get(i, j) * &e_row[l];
                c.set(i, l, v);
            }
        }
    }
    let out = ClusterFrame { delta, c };
    if !out.delta.mul(&out.c)?.is_identity() {
        return Err(Error::InvalidFrame(format!("Δ·C ≠ I after exchange at {}", j + 1)));
    }
    Ok(out)
}

/// Transports a frame along `sequence`, returning every intermediate
/// `(seed, frame)` pair including the start.
pub fn track_frame(
    seed: &Seed,
    f: &ClusterFrame,
    sequence: &[usize],
) -> Result<Vec<(Seed, ClusterFrame)>> {
    let mut out = vec![(seed.clone(), f.clone())];
    for &k in sequence {
        let (s, fr) = out.last().expect("nonempty");
        let next_frame = mutate_frame(s, fr, k)?;
        let next_seed = s.mutate(k)?;
        out.push((next_seed, next_frame));
    }
    Ok(out)
}
