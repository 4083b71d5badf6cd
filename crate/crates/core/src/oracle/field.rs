use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, RngCore};

use crate::error::{Error, Result};

/// Coefficient field for the oracle's linear algebra.
///
/// Presentations are sampled as small integers (see [`Field::sample`]) and
/// mapped into the field with [`Field::from_i64`].
pub trait Field: Sync + Send {
    type Elem: Clone + PartialEq + Send + Sync + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, x: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// A random coefficient for a generic presentation.
    fn sample(&self, rng: &mut dyn RngCore) -> i64;
    fn describe(&self) -> String;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        let is_prime = p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d));
        if !is_prime || p >= 1 << 31 {
            return Err(Error::PreconditionViolated(format!(
                "{p} is not a prime below 2^31"
            )));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn from_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.p
    }

    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        let (mut base, mut exp, mut acc) = (*a, self.p - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn sample(&self, rng: &mut dyn RngCore) -> i64 {
        rng.gen_range(0..self.p as i64)
    }

    fn describe(&self) -> String {
        format!("F_{}", self.p)
    }
}

/// Exact rationals; coefficients are sampled from `[-bound, bound]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rationals {
    pub bound: i64,
}

impl Default for Rationals {
    fn default() -> Self {
        Rationals { bound: 1000 }
    }
}

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, x: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(x))
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn sample(&self, rng: &mut dyn RngCore) -> i64 {
        rng.gen_range(-self.bound..=self.bound)
    }

    fn describe(&self) -> String {
        "Q".to_string()
    }
}

/// Reduced row echelon form of `rows` (each of length `width`), computed in
/// place. Zero rows are dropped; returns the pivot column of each kept row.
pub fn rref<F: Field>(f: &F, rows: &mut Vec<Vec<F::Elem>>, width: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..width {
        let Some(found) = (r..rows.len()).find(|&i| !f.is_zero(&rows[i][col])) else {
            continue;
        };
        rows.swap(r, found);
        let inv = f.inv(&rows[r][col]);
        for x in rows[r].iter_mut() {
            *x = f.mul(x, &inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || f.is_zero(&row[col]) {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = f.sub(x, &f.mul(&factor, p));
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank<F: Field>(f: &F, mut rows: Vec<Vec<F::Elem>>, width: usize) -> usize {
    rref(f, &mut rows, width).len()
}

/// The quotient `F^width / span(generators)`, with coordinates on the
/// non-pivot standard vectors.
#[derive(Clone, Debug)]
pub struct Quotient<E> {
    width: usize,
    rows: Vec<Vec<E>>,
    pivots: Vec<usize>,
    free: Vec<usize>,
}

impl<E: Clone> Quotient<E> {
    pub fn new<F: Field<Elem = E>>(f: &F, mut generators: Vec<Vec<E>>, width: usize) -> Self {
        let pivots = rref(f, &mut generators, width);
        let free = (0..width).filter(|c| !pivots.contains(c)).collect();
        Quotient { width, rows: generators, pivots, free }
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    /// Ambient coordinate of the `j`-th quotient basis vector.
    pub fn basis_coordinate(&self, j: usize) -> usize {
        self.free[j]
    }

    pub fn project<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Vec<E> {
        debug_assert_eq!(v.len(), self.width);
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if f.is_zero(&v[p]) {
                continue;
            }
            let factor = v[p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                *x = f.sub(x, &f.mul(&factor, r));
            }
        }
        self.free.iter().map(|&c| v[c].clone()).collect()
    }
}
