use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::field::{rank, Field, PrimeField, Quotient, Rationals};
use super::path::PathAlgebra;
use crate::error::{Error, Result};
use crate::tracker::DeltaVector;

/// Cap on the number of projective summands on either side.
pub const MULTIPLICITY_CAP: usize = 12;

/// A projective presentation `P(β_−) → P(β_+)` with integer coefficients.
///
/// `blocks[a][b][p]` is the coefficient of the `p`-th path `plus[b] → minus[a]`
/// in the component from the `a`-th summand of `P(β_−)` to the `b`-th summand
/// of `P(β_+)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationSample {
    algebra: (usize, Vec<(usize, usize)>),
    minus: Vec<usize>,
    plus: Vec<usize>,
    blocks: Vec<Vec<Vec<i64>>>,
}

fn summands(beta: &[usize]) -> Vec<usize> {
    beta.iter().enumerate().flat_map(|(v, &m)| std::iter::repeat_n(v, m)).collect()
}

fn split(delta: &DeltaVector) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut minus = Vec::with_capacity(delta.len());
    let mut plus = Vec::with_capacity(delta.len());
    for x in delta.as_slice() {
        let m = x.magnitude().to_usize().unwrap_or(usize::MAX);
        if x.sign() == num_bigint::Sign::Minus {
            minus.push(m);
            plus.push(0);
        } else {
            minus.push(0);
            plus.push(m);
        }
    }
    for side in [&minus, &plus] {
        let total = side.iter().fold(0usize, |acc, &m| acc.saturating_add(m));
        if total > MULTIPLICITY_CAP {
            return Err(Error::TooLarge { total, cap: MULTIPLICITY_CAP });
        }
    }
    Ok((minus, plus))
}

impl PresentationSample {
    /// A presentation with the given multiplicities and explicit coefficients.
    pub fn from_parts(
        pa: &PathAlgebra,
        beta_minus: &[usize],
        beta_plus: &[usize],
        blocks: Vec<Vec<Vec<i64>>>,
    ) -> Result<Self> {
        let n = pa.n();
        if beta_minus.len() != n || beta_plus.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "multiplicity vectors of lengths {} and {} for {n} vertices",
                beta_minus.len(),
                beta_plus.len()
            )));
        }
        let minus = summands(beta_minus);
        let plus = summands(beta_plus);
        let shape_ok = blocks.len() == minus.len()
            && blocks.iter().zip(&minus).all(|(row, &u)| {
                row.len() == plus.len()
                    && row.iter().zip(&plus).all(|(blk, &v)| blk.len() == pa.paths(v, u).len())
            });
        if !shape_ok {
            return Err(Error::DimensionMismatch("block shapes do not match path spaces".into()));
        }
        Ok(PresentationSample { algebra: pa.id(), minus, plus, blocks })
    }

    /// A random presentation of weight `delta`, `P(δ_−) → P(δ_+)`, with
    /// coefficients drawn by `field`.
    pub fn sample<F: Field>(
        pa: &PathAlgebra,
        delta: &DeltaVector,
        field: &F,
        rng: &mut ChaCha8Rng,
    ) -> Result<Self> {
        if delta.len() != pa.n() {
            return Err(Error::DimensionMismatch(format!(
                "weight of length {} for {} vertices",
                delta.len(),
                pa.n()
            )));
        }
        let (beta_minus, beta_plus) = split(delta)?;
        let minus = summands(&beta_minus);
        let plus = summands(&beta_plus);
        let blocks = minus
            .iter()
            .map(|&u| {
                plus.iter()
                    .map(|&v| (0..pa.paths(v, u).len()).map(|_| field.sample(rng)).collect())
                    .collect()
            })
            .collect();
        Ok(PresentationSample { algebra: pa.id(), minus, plus, blocks })
    }

    pub fn beta_minus(&self) -> Vec<usize> {
        count(&self.minus, self.algebra.0)
    }

    pub fn beta_plus(&self) -> Vec<usize> {
        count(&self.plus, self.algebra.0)
    }

    pub fn delta(&self) -> Vec<i64> {
        self.beta_plus()
            .iter()
            .zip(self.beta_minus())
            .map(|(&p, m)| p as i64 - m as i64)
            .collect()
    }

    pub fn blocks(&self) -> &[Vec<Vec<i64>>] {
        &self.blocks
    }
}

fn count(vertices: &[usize], n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for &v in vertices {
        out[v] += 1;
    }
    out
}

/// A representation given by vector space dimensions and one matrix per
/// arrow, stored as columns.
#[derive(Clone, Debug)]
pub struct Representation<E> {
    pub dims: Vec<usize>,
    pub maps: Vec<Vec<Vec<E>>>,
}

impl<E: Clone> Representation<E> {
    pub fn dim_vector(&self) -> Vec<usize> {
        self.dims.clone()
    }

    fn apply_arrow<F: Field<Elem = E>>(&self, f: &F, arrow: usize, v: &[E], target_dim: usize) -> Vec<E> {
        let mut out = vec![f.zero(); target_dim];
        for (x, col) in v.iter().zip(&self.maps[arrow]) {
            if f.is_zero(x) {
                continue;
            }
            for (o, c) in out.iter_mut().zip(col) {
                *o = f.add(o, &f.mul(x, c));
            }
        }
        out
    }
}

/// Cokernel of a presentation as a representation.
pub fn cokernel<F: Field>(f: &F, pa: &PathAlgebra, d: &PresentationSample) -> Result<Representation<F::Elem>> {
    if d.algebra != pa.id() {
        return Err(Error::AlgebraMismatch);
    }
    let n = pa.n();
    // offsets[x][b]: start of summand b inside P_+(x)
    let mut offsets = vec![Vec::with_capacity(d.plus.len()); n];
    let mut widths = vec![0usize; n];
    for x in 0..n {
        for &v in &d.plus {
            offsets[x].push(widths[x]);
            widths[x] += pa.paths(v, x).len();
        }
    }
    let mut quotients = Vec::with_capacity(n);
    for x in 0..n {
        let mut gens = Vec::new();
        for (a, &u) in d.minus.iter().enumerate() {
            for q in pa.paths(u, x) {
                let mut g = vec![f.zero(); widths[x]];
                for (b, &v) in d.plus.iter().enumerate() {
                    for (p, &coef) in pa.paths(v, u).iter().zip(&d.blocks[a][b]) {
                        if coef == 0 {
                            continue;
                        }
                        let idx = offsets[x][b] + pa.concat_index(p, q);
                        g[idx] = f.add(&g[idx], &f.from_i64(coef));
                    }
                }
                gens.push(g);
            }
        }
        quotients.push(Quotient::new(f, gens, widths[x]));
    }
    let mut maps = Vec::with_capacity(pa.quiver().arrows.len());
    for (arrow, &(x, y)) in pa.quiver().arrows.iter().enumerate() {
        let mut cols = Vec::with_capacity(quotients[x].dim());
        for j in 0..quotients[x].dim() {
            let coord = quotients[x].basis_coordinate(j);
            let b = offsets[x].iter().rposition(|&o| o <= coord).expect("coordinate inside a summand");
            let path = &pa.paths(d.plus[b], x)[coord - offsets[x][b]];
            let mut image = vec![f.zero(); widths[y]];
            image[offsets[y][b] + pa.extend_index(path, arrow)] = f.one();
            cols.push(quotients[y].project(f, &image));
        }
        maps.push(cols);
    }
    Ok(Representation { dims: quotients.iter().map(Quotient::dim).collect(), maps })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomE {
    pub hom: usize,
    pub e: usize,
    pub dim_n: Vec<usize>,
    /// `δ · dim N` for the first presentation's weight.
    pub pairing: i64,
}

impl HomE {
    /// `hom − e = δ · dim N`.
    pub fn euler_identity_holds(&self) -> bool {
        self.hom as i64 - self.e as i64 == self.pairing
    }
}

/// `Hom(d, N)` and `E(d, N)` for `N = coker(dprime)`, as kernel and cokernel
/// of `Hom(P_+, N) → Hom(P_−, N)`.
pub fn hom_e_dims<F: Field>(
    f: &F,
    pa: &PathAlgebra,
    d: &PresentationSample,
    dprime: &PresentationSample,
) -> Result<HomE> {
    if d.algebra != dprime.algebra || d.algebra != pa.id() {
        return Err(Error::AlgebraMismatch);
    }
    let nrep = cokernel(f, pa, dprime)?;
    let row_offsets: Vec<usize> = d
        .minus
        .iter()
        .scan(0, |acc, &u| {
            let start = *acc;
            *acc += nrep.dims[u];
            Some(start)
        })
        .collect();
    let height: usize = d.minus.iter().map(|&u| nrep.dims[u]).sum();
    let width: usize = d.plus.iter().map(|&v| nrep.dims[v]).sum();
    let mut columns = Vec::with_capacity(width);
    for (b, &v) in d.plus.iter().enumerate() {
        for j in 0..nrep.dims[v] {
            let mut col = vec![f.zero(); height];
            for (a, &u) in d.minus.iter().enumerate() {
                for (p, &coef) in pa.paths(v, u).iter().zip(&d.blocks[a][b]) {
                    if coef == 0 {
                        continue;
                    }
                    let mut vec = vec![f.zero(); nrep.dims[v]];
                    vec[j] = f.one();
                    let mut dim = nrep.dims[v];
                    let mut at = v;
                    for &arrow in &p.arrows {
                        let (_, next) = pa.quiver().arrows[arrow];
                        vec = nrep.apply_arrow(f, arrow, &vec, nrep.dims[next]);
                        dim = nrep.dims[next];
                        at = next;
                    }
                    debug_assert_eq!((at, dim), (u, nrep.dims[u]));
                    let c = f.from_i64(coef);
                    for (k, x) in vec.iter().enumerate() {
                        let slot = &mut col[row_offsets[a] + k];
                        *slot = f.add(slot, &f.mul(&c, x));
                    }
                }
            }
            columns.push(col);
        }
    }
    let r = rank(f, columns, height);
    let pairing = d.delta().iter().zip(&nrep.dims).map(|(&x, &m)| x * m as i64).sum();
    Ok(HomE { hom: width - r, e: height - r, dim_n: nrep.dims, pairing })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldChoice {
    Prime(u64),
    /// Exact rationals with sampled coefficients in `[-bound, bound]`.
    Rational { bound: i64 },
}

impl FieldChoice {
    pub fn describe(&self) -> String {
        match self {
            FieldChoice::Prime(p) => format!("F_{p}"),
            FieldChoice::Rational { .. } => "Q".to_string(),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, FieldChoice::Prime(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleOptions {
    pub trials: usize,
    pub seed: u64,
    pub field: FieldChoice,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { trials: 7, seed: 0, field: FieldChoice::Prime(32003) }
    }
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn trials_in<F: Field>(
    f: &F,
    pa: &PathAlgebra,
    d1: &DeltaVector,
    d2: &DeltaVector,
    opts: &OracleOptions,
) -> Result<Vec<HomE>> {
    (0..opts.trials.max(1))
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(opts.seed, t);
            let a = PresentationSample::sample(pa, d1, f, &mut rng)?;
            let b = PresentationSample::sample(pa, d2, f, &mut rng)?;
            hom_e_dims(f, pa, &a, &b)
        })
        .collect()
}

/// Per-trial `(hom, e)` of `E(δ₁, δ₂)` on independent samples. Trial `t`
/// draws from a ChaCha stream keyed by `(opts.seed, t)`, so results do not
/// depend on scheduling.
pub fn sample_trials(
    pa: &PathAlgebra,
    d1: &DeltaVector,
    d2: &DeltaVector,
    opts: &OracleOptions,
) -> Result<Vec<HomE>> {
    match opts.field {
        FieldChoice::Prime(p) => trials_in(&PrimeField::new(p)?, pa, d1, d2, opts),
        FieldChoice::Rational { bound } => trials_in(&Rationals { bound }, pa, d1, d2, opts),
    }
}

/// Generic value of `E(δ₁, δ₂)`: the minimum over `opts.trials` samples.
pub fn generic_e(pa: &PathAlgebra, d1: &DeltaVector, d2: &DeltaVector, opts: &OracleOptions) -> Result<usize> {
    let trials = sample_trials(pa, d1, d2, opts)?;
    Ok(trials.iter().map(|h| h.e).min().expect("at least one trial"))
}

/// Whether `generic_e(δ_i, δ_j) = 0` for every ordered pair, diagonal included.
pub fn is_rigid_family(pa: &PathAlgebra, deltas: &[DeltaVector], opts: &OracleOptions) -> Result<bool> {
    for a in deltas {
        for b in deltas {
            if generic_e(pa, a, b, opts)? != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::super::path::{ArrowConvention, Quiver};
    use super::*;

    fn a2() -> PathAlgebra {
        PathAlgebra::new(Quiver::new(2, vec![(0, 1)]).unwrap(), ArrowConvention::RowToColumn).unwrap()
    }

    fn a3() -> PathAlgebra {
        PathAlgebra::new(Quiver::new(3, vec![(0, 1), (1, 2)]).unwrap(), ArrowConvention::RowToColumn)
            .unwrap()
    }

    fn dv(v: &[i64]) -> DeltaVector {
        DeltaVector::from_i64(v)
    }

    #[test]
    fn unit_weights_have_unique_presentations() {
        let pa = a2();
        let f = PrimeField::new(32003).unwrap();
        let mut rng = trial_rng(0, 0);
        let pos = PresentationSample::sample(&pa, &dv(&[1, 0]), &f, &mut rng).unwrap();
        assert!(pos.blocks().is_empty());
        assert_eq!(pos.beta_plus(), vec![1, 0]);
        let neg = PresentationSample::sample(&pa, &dv(&[0, -1]), &f, &mut rng).unwrap();
        assert_eq!(neg.beta_minus(), vec![0, 1]);
        assert!(neg.blocks()[0].is_empty());
    }

    #[test]
    fn equal_seeds_give_equal_samples() {
        let pa = a3();
        let f = PrimeField::new(32003).unwrap();
        let d = dv(&[1, -2, 1]);
        let x = PresentationSample::sample(&pa, &d, &f, &mut trial_rng(9, 3)).unwrap();
        let y = PresentationSample::sample(&pa, &d, &f, &mut trial_rng(9, 3)).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn cokernel_of_projective_is_projective() {
        // P_0 on 0 -> 1 -> 2 is (1,1,1); P_2 is simple.
        let pa = a3();
        let f = PrimeField::new(5).unwrap();
        let d = PresentationSample::from_parts(&pa, &[0, 0, 0], &[1, 0, 0], vec![]).unwrap();
        assert_eq!(cokernel(&f, &pa, &d).unwrap().dim_vector(), vec![1, 1, 1]);
        let d = PresentationSample::from_parts(&pa, &[0, 0, 0], &[0, 0, 1], vec![]).unwrap();
        assert_eq!(cokernel(&f, &pa, &d).unwrap().dim_vector(), vec![0, 0, 1]);
    }

    #[test]
    fn simple_as_cokernel() {
        // P_1 -> P_0 by the arrow has cokernel S_0.
        let pa = a2();
        let f = PrimeField::new(3).unwrap();
        let d = PresentationSample::from_parts(&pa, &[0, 1], &[1, 0], vec![vec![vec![1]]]).unwrap();
        assert_eq!(cokernel(&f, &pa, &d).unwrap().dim_vector(), vec![1, 0]);
        assert_eq!(d.delta(), vec![1, -1]);
    }

    #[test]
    fn shifted_projective_e_is_dimension() {
        let pa = a3();
        let opts = OracleOptions::default();
        for i in 0..3 {
            let shifted = DeltaVector::unit(3, i, crate::tracker::Sign::Minus);
            let n = dv(&[1, 1, 0]);
            for h in sample_trials(&pa, &shifted, &n, &opts).unwrap() {
                assert_eq!(h.e, h.dim_n[i]);
                assert!(h.euler_identity_holds());
            }
        }
    }

    #[test]
    fn projective_source_has_no_e() {
        let pa = a3();
        for d2 in [dv(&[1, -1, 0]), dv(&[0, 1, -1]), dv(&[-1, 0, 1])] {
            assert_eq!(generic_e(&pa, &dv(&[0, 2, 1]), &d2, &Default::default()).unwrap(), 0);
        }
    }

    #[test]
    fn algebra_mismatch() {
        let f = PrimeField::new(7).unwrap();
        let x = PresentationSample::from_parts(&a2(), &[0, 0], &[1, 0], vec![]).unwrap();
        let y = PresentationSample::from_parts(&a3(), &[0, 0, 0], &[1, 0, 0], vec![]).unwrap();
        assert_eq!(hom_e_dims(&f, &a2(), &x, &y).unwrap_err(), Error::AlgebraMismatch);
    }

    #[test]
    fn multiplicity_cap() {
        let pa = a2();
        let err = generic_e(&pa, &dv(&[13, 0]), &dv(&[1, 0]), &Default::default()).unwrap_err();
        assert_eq!(err, Error::TooLarge { total: 13, cap: MULTIPLICITY_CAP });
    }

    #[test]
    fn rational_and_prime_agree_on_small_cases() {
        let pa = a3();
        let q = OracleOptions { field: FieldChoice::Rational { bound: 50 }, ..Default::default() };
        for (x, y) in [(dv(&[1, -1, 0]), dv(&[0, 1, -1])), (dv(&[-1, 1, 0]), dv(&[1, 0, -1]))] {
            let p = generic_e(&pa, &x, &y, &Default::default()).unwrap();
            assert_eq!(generic_e(&pa, &x, &y, &q).unwrap(), p);
        }
    }
}
