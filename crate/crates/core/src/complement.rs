//! Positive and negative completions of a rigid weight and their mutation.
//!
//! A [`ComplementFrame`] is a cluster frame in which one row (`eps_row`) is
//! the weight ε and the other rows form its ±-complement. Two mutation rules
//! are provided: [`mutate_complement`] (frame mutation followed by an exchange
//! when ε(k) = 0) and [`mutate_simples`] (a piecewise-linear update of row k of
//! C alone). They agree on every valid input.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{check_index, Error, Result};
use crate::matrix::{pos, unimodular_inverse, IntMatrix, Seed};
use crate::tracker::{
    c_row_update, exchange_frame, mutate_frame, ClusterFrame, DeltaVector, Sign,
};

/// Dimension vector of a stable/Schur reduction, `γ_±`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GammaVector(pub Vec<BigInt>);

impl GammaVector {
    pub fn from_i64(v: &[i64]) -> Self {
        GammaVector(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|x| !x.is_negative())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ComplementFrame {
    frame: ClusterFrame,
    eps_row: usize,
    sign: Sign,
}

impl ComplementFrame {
    pub fn new(frame: ClusterFrame, eps_row: usize, sign: Sign) -> Result<Self> {
        check_index(eps_row, frame.n())?;
        Ok(ComplementFrame { frame, eps_row, sign })
    }

    /// Completion of `sign·e_vertex` to the unit cluster `sign·I`.
    pub fn terminal(n: usize, vertex: usize, sign: Sign) -> Result<Self> {
        check_index(vertex, n)?;
        Ok(ComplementFrame { frame: ClusterFrame::unit(n, sign), eps_row: vertex, sign })
    }

    pub fn frame(&self) -> &ClusterFrame {
        &self.frame
    }

    pub fn eps_row(&self) -> usize {
        self.eps_row
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn n(&self) -> usize {
        self.frame.n()
    }

    pub fn eps(&self) -> DeltaVector {
        self.frame.row(self.eps_row)
    }

    pub fn complement_indices(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| i != self.eps_row).collect()
    }

    /// The complement rows `ε_i^±` in frame order.
    pub fn complement_rows(&self) -> Vec<DeltaVector> {
        self.complement_indices().into_iter().map(|i| self.frame.row(i)).collect()
    }

    /// Δ-matrix of the complement alone, `(n−1)×n`.
    pub fn complement_delta(&self) -> IntMatrix {
        self.frame.delta().select_rows(&self.complement_indices())
    }

    /// The ε-column read as a reduction vector: the ε-column of C for a
    /// negative completion (γ_+), of −C for a positive one.
    pub fn gamma(&self) -> GammaVector {
        let col = self.frame.c().column(self.eps_row);
        GammaVector(col.iter().map(|x| self.sign.flip().apply(x)).collect())
    }
}

/// Index `j` of the complement row whose δ-vector is the only one supported
/// at `k`, for `ε(k) = 0`.
pub fn find_exchange_index(cf: &ComplementFrame, k: usize) -> Result<usize> {
    let n = cf.n();
    check_index(k, n)?;
    let delta = cf.frame.delta();
    if !delta.get(cf.eps_row, k).is_zero() {
        return Err(Error::PreconditionViolated(format!(
            "ε({}) = {} is nonzero",
            k + 1,
            delta.get(cf.eps_row, k)
        )));
    }
    let unit = cf.sign.to_bigint();
    let mut found = None;
    for r in 0..n {
        let x = delta.get(r, k);
        if x.is_zero() {
            continue;
        }
        if *x != unit || found.is_some() {
            return Err(Error::NotUnitColumn { column: k });
        }
        found = Some(r);
    }
    let j = found.ok_or(Error::NotUnitColumn { column: k })?;
    let c = cf.frame.c();
    let column_ok = (0..n).all(|i| {
        let x = cf.sign.apply(c.get(i, j));
        if i == k {
            x.is_one()
        } else {
            x.is_zero()
        }
    });
    if !column_ok {
        return Err(Error::NotUnitColumn { column: k });
    }
    Ok(j)
}

/// Transports the ±-completion of ε to the ±-completion of μ_k(ε).
pub fn mutate_complement(seed: &Seed, cf: &ComplementFrame, k: usize) -> Result<ComplementFrame> {
    check_index(k, seed.n())?;
    let eps_k_zero = cf.frame.delta().get(cf.eps_row, k).is_zero();
    let frame = if eps_k_zero {
        let j = find_exchange_index(cf, k)?;
        let mutated = mutate_frame(seed, &cf.frame, k)?;
        exchange_frame(&seed.mutate(k)?, &mutated, j)?
    } else {
        mutate_frame(seed, &cf.frame, k)?
    };
    let out = ComplementFrame { frame, eps_row: cf.eps_row, sign: cf.sign };
    if !bongartz_certificate(&out) {
        return Err(Error::InvalidFrame(format!(
            "{}-completion lost its sign pattern after mutation at {}",
            cf.sign,
            k + 1
        )));
    }
    Ok(out)
}

/// New entry at coordinate `k` of one C-column under mutation at `k`.
///
/// `frame_sign` selects max (negative completion) or min (positive
/// completion) in the ε(k) = 0 branch.
fn simple_entry(
    column: &[BigInt],
    b_row: &[BigInt],
    k: usize,
    eps_k: &BigInt,
    frame_sign: Sign,
) -> BigInt {
    let dot = |w: &mut dyn Iterator<Item = BigInt>| -> BigInt {
        w.zip(column).map(|(a, b)| a * b).sum()
    };
    match Sign::of(eps_k) {
        Some(s) => {
            let v = dot(&mut b_row.iter().map(|x| pos(&s.apply(x))));
            v - &column[k]
        }
        None => {
            let neg = dot(&mut b_row.iter().map(|x| pos(&-x)));
            let plus = dot(&mut b_row.iter().map(pos));
            let pick = match frame_sign {
                Sign::Minus => neg.max(plus),
                Sign::Plus => neg.min(plus),
            };
            pick - &column[k]
        }
    }
}

/// Mutation of the completion via the C-matrix alone: only row `k` of C
/// changes, and Δ is recomputed as the exact inverse.
pub fn mutate_simples(seed: &Seed, cf: &ComplementFrame, k: usize) -> Result<ComplementFrame> {
    let n = seed.n();
    check_index(k, n)?;
    if cf.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "frame of size {} on a seed with {n} vertices",
            cf.n()
        )));
    }
    let c = cf.frame.c();
    let b_row = seed.b().row(k);
    let eps_k = cf.frame.delta().get(cf.eps_row, k).clone();
    let mut new_c = c.clone();
    if let Some(s) = Sign::of(&eps_k) {
        let w: Vec<BigInt> = b_row.iter().map(|x| pos(&s.apply(x))).collect();
        let row = c_row_update(c, &w, k);
        new_c.row_mut(k).clone_from_slice(&row);
    } else {
        let j = find_exchange_index(cf, k)?;
        for i in 0..n {
            let v = if i == j {
                cf.sign.to_bigint()
            } else {
                simple_entry(&c.column(i), b_row, k, &eps_k, cf.sign)
            };
            new_c.set(k, i, v);
        }
    }
    let delta = unimodular_inverse(&new_c)?;
    let frame = ClusterFrame::from_parts(delta, new_c)?;
    Ok(ComplementFrame { frame, eps_row: cf.eps_row, sign: cf.sign })
}

/// Mutation of a single reduction vector γ_± at `k`, where `eps` is the
/// weight at `seed` and `reduction` says which of γ_+ / γ_− is given.
///
/// γ_+ is the ε-column of a negative completion's C and γ_− the ε-column
/// of −C for a positive completion, so this is the same update that
/// [`mutate_simples`] applies to that column.
pub fn mutate_gamma(
    seed: &Seed,
    eps: &DeltaVector,
    g: &GammaVector,
    k: usize,
    reduction: Sign,
) -> Result<GammaVector> {
    let n = seed.n();
    check_index(k, n)?;
    if eps.len() != n || g.0.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "ε has length {}, γ has length {}, seed has {n} vertices",
            eps.len(),
            g.0.len()
        )));
    }
    let frame_sign = reduction.flip();
    let column: Vec<BigInt> = g.0.iter().map(|x| reduction.apply(x)).collect();
    let entry = simple_entry(&column, seed.b().row(k), k, &eps.0[k], frame_sign);
    let mut out = g.0.clone();
    out[k] = reduction.apply(&entry);
    Ok(GammaVector(out))
}

/// Sign certificate of a completion: every complement column of `sign·C` is
/// nonnegative; for a negative completion the ε-column of C is nonnegative
/// too, except when ε = −e_t, where it equals −e_t.
pub fn bongartz_certificate(cf: &ComplementFrame) -> bool {
    let c = cf.frame.c();
    let n = cf.n();
    for i in 0..n {
        if i == cf.eps_row {
            continue;
        }
        if (0..n).any(|r| cf.sign.apply(c.get(r, i)).is_negative()) {
            return false;
        }
    }
    if cf.sign == Sign::Minus {
        let col = c.column(cf.eps_row);
        if col.iter().any(Signed::is_negative) {
            let eps = cf.eps();
            let negative_unit = match eps.as_signed_unit_multiple() {
                Some((t, Sign::Minus, m)) if m.is_one() => Some(t),
                _ => None,
            };
            match negative_unit {
                Some(t) => {
                    let expected = DeltaVector::unit(n, t, Sign::Minus);
                    if col != expected.0 {
                        return false;
                    }
                }
                None => return false,
            }
        }
    }
    true
}

/// Dimension vectors of the simples of the projected category: the
/// complement columns of `sign·C`, as an `n × (n−1)` matrix.
pub fn extract_ceperp(cf: &ComplementFrame) -> IntMatrix {
    let signed = match cf.sign {
        Sign::Plus => cf.frame.c().clone(),
        Sign::Minus => cf.frame.c().neg(),
    };
    signed.without_columns(&[cf.eps_row])
}
