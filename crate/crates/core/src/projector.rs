//! Projection of an exchange matrix along a rigid weight ε, together with the
//! induced maps on δ-vectors.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::complement::{
    bongartz_certificate, extract_ceperp, mutate_complement, mutate_simples, ComplementFrame,
};
use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, Seed};
use crate::search::{bfs, encode_state, search_to_sign, MutationSequence, SearchOptions};
use crate::tracker::{mutate_delta_raw, DeltaVector, Sign};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionResult {
    pub b_proj: IntMatrix,
    pub c_eperp: IntMatrix,
    pub sequence: MutationSequence,
    pub terminal_sign: Sign,
    pub terminal_vertex: usize,
    pub complement: ComplementFrame,
    /// Labels of the surviving vertices, one per column of `c_eperp`.
    pub labels: Vec<String>,
}

impl ProjectionResult {
    /// `(C_eperp, B_proj)` with the columns of `C_eperp` sorted
    /// lexicographically and `B_proj` permuted to match. Two projections of
    /// the same weight agree up to relabeling iff their canonical forms are
    /// equal.
    pub fn canonical(&self) -> (IntMatrix, IntMatrix) {
        canonical_pair(&self.c_eperp, &self.b_proj)
    }

    pub fn seed(&self) -> Result<Seed> {
        Seed::with_labels(self.b_proj.clone(), self.labels.clone())
    }
}

pub fn canonical_pair(c: &IntMatrix, b: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut order: Vec<usize> = (0..c.cols()).collect();
    order.sort_by(|&x, &y| c.column(x).cmp(&c.column(y)));
    (c.select_columns(&order), b.permute_symmetric(&order))
}

/// Whether two projections agree up to a simultaneous permutation of the
/// surviving vertices.
pub fn equivalent_up_to_permutation(a: &ProjectionResult, b: &ProjectionResult) -> bool {
    a.canonical() == b.canonical()
}

/// `Cᵀ B C`.
pub fn pushforward_b(b: &IntMatrix, c: &IntMatrix) -> Result<IntMatrix> {
    if !b.is_square() || b.rows() != c.rows() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} exchange matrix against {}x{} transport matrix",
            b.rows(),
            b.cols(),
            c.rows(),
            c.cols()
        )));
    }
    c.transpose().mul(b)?.mul(c)
}

/// `δ · C_eperp`.
pub fn pushforward_delta(d: &DeltaVector, c_eperp: &IntMatrix) -> Result<DeltaVector> {
    Ok(DeltaVector(c_eperp.left_mul_vec(&d.0)?))
}

/// The affine family `a ↦ s·(d_perp · Δ_c) + a·ε` of candidate lifts, where
/// `Δ_c` stacks the complement rows and `s` is the completion sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftFamily {
    pub base: DeltaVector,
    pub eps: DeltaVector,
}

impl LiftFamily {
    pub fn at(&self, a: u64) -> DeltaVector {
        let a = BigInt::from(a);
        DeltaVector(self.base.0.iter().zip(&self.eps.0).map(|(x, e)| x + &a * e).collect())
    }
}

pub fn lift_delta_candidates(cf: &ComplementFrame, d_perp: &DeltaVector) -> Result<LiftFamily> {
    let rows = cf.complement_delta();
    let lifted = rows.left_mul_vec(&d_perp.0)?;
    let base = DeltaVector(lifted.iter().map(|x| cf.sign().apply(x)).collect());
    Ok(LiftFamily { base, eps: cf.eps() })
}

fn as_invalid(step: usize, e: Error) -> Error {
    match e {
        Error::InvalidFrame(_) => e,
        other => Error::InvalidFrame(format!("transport step {step}: {other}")),
    }
}

/// Finds a sign sequence for `eps` and transports the unit completion at
/// its end back to `seed`, one step at a time, with `mutate` applied at the
/// intermediate seeds.
fn transport_back(
    seed: &Seed,
    eps: &DeltaVector,
    opts: &SearchOptions,
    mutate: fn(&Seed, &ComplementFrame, usize) -> Result<ComplementFrame>,
) -> Result<(crate::search::SearchOutcome, ComplementFrame)> {
    let outcome = search_to_sign(seed, eps, opts)?;
    let seeds = outcome.sequence.seeds(seed)?;
    let mut cf = ComplementFrame::terminal(seed.n(), outcome.vertex, outcome.sign)?;
    for (t, &k) in outcome.sequence.steps.iter().enumerate().rev() {
        cf = mutate(&seeds[t + 1], &cf, k).map_err(|e| as_invalid(t + 1, e))?;
        if !bongartz_certificate(&cf) {
            return Err(Error::InvalidFrame(format!(
                "completion lost its sign pattern at transport step {}",
                t + 1
            )));
        }
    }
    let scaled = cf.eps().0.iter().map(|x| x * &outcome.multiplicity).collect::<Vec<_>>();
    if scaled != eps.0 {
        return Err(Error::InvalidFrame(format!(
            "transported row {} does not return to the weight {}",
            cf.eps(),
            eps
        )));
    }
    Ok((outcome, cf))
}

/// The ±-completion of `eps` at `seed`, built by frame mutation plus exchange
/// along the reversed search witness, together with the search outcome.
pub fn find_complement(
    seed: &Seed,
    eps: &DeltaVector,
    opts: &SearchOptions,
) -> Result<(crate::search::SearchOutcome, ComplementFrame)> {
    transport_back(seed, eps, opts, mutate_complement)
}

fn finish(
    seed: &Seed,
    c_eperp: IntMatrix,
    sequence: MutationSequence,
    terminal_sign: Sign,
    terminal_vertex: usize,
    complement: ComplementFrame,
    labels: Vec<String>,
) -> Result<ProjectionResult> {
    let b_proj = pushforward_b(seed.b(), &c_eperp)?;
    if !b_proj.is_skew_symmetric() {
        return Err(Error::InvalidFrame("projected matrix is not skew-symmetric".into()));
    }
    Ok(ProjectionResult {
        b_proj,
        c_eperp,
        sequence,
        terminal_sign,
        terminal_vertex,
        complement,
        labels,
    })
}

fn surviving_labels(seed: &Seed, skip: usize) -> Vec<String> {
    seed.labels()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != skip)
        .map(|(_, l)| l.clone())
        .collect()
}

/// Projection via the C-matrix update rule: search, transport the unit
/// completion back, read off `C_eperp` and form `C_eperpᵀ B C_eperp`.
pub fn project_simple(seed: &Seed, eps: &DeltaVector, opts: &SearchOptions) -> Result<ProjectionResult> {
    let (outcome, cf) = transport_back(seed, eps, opts, mutate_simples)?;
    let c_eperp = extract_ceperp(&cf);
    let labels = surviving_labels(seed, outcome.vertex);
    finish(seed, c_eperp, outcome.sequence, outcome.sign, outcome.vertex, cf, labels)
}

/// Projection via the whole completion: build the completion by frame
/// transport, search for a sequence taking all of it to `±` a permutation
/// matrix, mutate the seed along it and delete the ε-vertex.
pub fn project_full(seed: &Seed, eps: &DeltaVector, opts: &SearchOptions) -> Result<ProjectionResult> {
    let n = seed.n();
    let (_, cf) = transport_back(seed, eps, opts, mutate_complement)?;
    let sign = cf.sign();

    let start = (seed.b().clone(), cf.frame().delta().to_rows());
    let step = |(b, rows): &(IntMatrix, Vec<Vec<BigInt>>), k: usize| {
        let next_rows: Vec<Vec<BigInt>> = rows.iter().map(|r| mutate_delta_raw(b, r, k)).collect();
        let next_b = Seed::new(b.clone())?.mutate(k)?.into_matrix();
        Ok((next_b, next_rows))
    };
    let encode = |(b, rows): &(IntMatrix, Vec<Vec<BigInt>>)| {
        let refs: Vec<&[BigInt]> = rows.iter().map(Vec::as_slice).collect();
        encode_state(b, &refs)
    };
    let goal = |(b, rows): &(IntMatrix, Vec<Vec<BigInt>>)| {
        signed_permutation(rows, sign).map(|perm| (b.clone(), perm))
    };
    let (sequence, (b_final, perm), _) = bfs(start, n, opts, step, encode, goal)?;

    let eps_vertex = perm[cf.eps_row()];
    let mut order: Vec<usize> = cf.complement_indices();
    order.sort_by_key(|&r| perm[r]);
    let signed_c = match sign {
        Sign::Plus => cf.frame().c().clone(),
        Sign::Minus => cf.frame().c().neg(),
    };
    let c_eperp = signed_c.select_columns(&order);
    let deleted = b_final.delete_index(eps_vertex);
    let labels = surviving_labels(seed, eps_vertex);
    let result = finish(seed, c_eperp, sequence, sign, eps_vertex, cf, labels)?;
    if result.b_proj != deleted {
        return Err(Error::InvalidFrame(format!(
            "deleting vertex {} of the mutated seed gives {} but the completion gives {}",
            eps_vertex + 1,
            deleted,
            result.b_proj
        )));
    }
    Ok(result)
}

/// `perm[r] = i` when row `r` equals `sign·e_i` and the rows form a
/// permutation.
fn signed_permutation(rows: &[Vec<BigInt>], sign: Sign) -> Option<Vec<usize>> {
    let n = rows.len();
    let unit = sign.to_bigint();
    let mut seen = vec![false; n];
    let mut perm = Vec::with_capacity(n);
    for row in rows {
        let mut hit = None;
        for (i, x) in row.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            if *x != unit || hit.is_some() {
                return None;
            }
            hit = Some(i);
        }
        let i = hit?;
        if seen[i] {
            return None;
        }
        seen[i] = true;
        perm.push(i);
    }
    Some(perm)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiProjectionResult {
    pub stages: Vec<ProjectionResult>,
    /// Product of the stage matrices, `n × (n − len)`.
    pub c_eperp: IntMatrix,
    pub b_proj: IntMatrix,
    pub labels: Vec<String>,
}

/// Iterated projection: project by the first weight, push the rest forward,
/// and repeat on the projected seed.
pub fn project_multi(
    seed: &Seed,
    eps_list: &[DeltaVector],
    opts: &SearchOptions,
) -> Result<MultiProjectionResult> {
    if eps_list.is_empty() {
        return Err(Error::PreconditionViolated("no weights to project by".into()));
    }
    let mut current = seed.clone();
    let mut pending: Vec<DeltaVector> = eps_list.to_vec();
    let mut total = IntMatrix::identity(seed.n());
    let mut stages = Vec::with_capacity(eps_list.len());
    while !pending.is_empty() {
        let eps = pending.remove(0);
        if eps.is_zero() {
            return Err(Error::PreconditionViolated(format!(
                "weight {} of the list vanishes after the earlier projections",
                stages.len() + 1
            )));
        }
        let stage = project_simple(&current, &eps, opts)?;
        pending = pending
            .iter()
            .map(|d| pushforward_delta(d, &stage.c_eperp))
            .collect::<Result<_>>()?;
        total = total.mul(&stage.c_eperp)?;
        current = stage.seed()?;
        stages.push(stage);
    }
    let b_proj = current.b().clone();
    debug_assert_eq!(pushforward_b(seed.b(), &total).ok().as_ref(), Some(&b_proj));
    Ok(MultiProjectionResult { stages, c_eperp: total, b_proj, labels: current.labels().to_vec() })
}

/// Transport matrix `C_d` of a sequence: the C-matrix of the completion of
/// the negative unit cluster at the end of `sequence`, carried back to `seed`.
/// Satisfies `C_dᵀ B C_d = μ_sequence(B)`.
pub fn sequence_c_matrix(seed: &Seed, sequence: &MutationSequence) -> Result<IntMatrix> {
    sequence.check(seed.n())?;
    let seeds = sequence.seeds(seed)?;
    let mut frame = crate::tracker::ClusterFrame::negative(seed.n());
    for (t, &k) in sequence.steps.iter().enumerate().rev() {
        frame = crate::tracker::mutate_frame(&seeds[t + 1], &frame, k)?;
    }
    Ok(frame.c().clone())
}

/// Whether `x` and `y` agree up to a simultaneous permutation of indices.
pub fn permutation_equivalent(x: &IntMatrix, y: &IntMatrix) -> bool {
    if x.rows() != y.rows() || !x.is_square() || !y.is_square() {
        return false;
    }
    let n = x.rows();
    let mut assign = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        x: &IntMatrix,
        y: &IntMatrix,
        i: usize,
        assign: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        let n = x.rows();
        if i == n {
            return true;
        }
        for j in 0..n {
            if used[j] || x.get(i, i) != y.get(j, j) {
                continue;
            }
            let consistent = (0..i).all(|p| {
                x.get(i, p) == y.get(j, assign[p]) && x.get(p, i) == y.get(assign[p], j)
            });
            if !consistent {
                continue;
            }
            assign[i] = j;
            used[j] = true;
            if go(x, y, i + 1, assign, used) {
                return true;
            }
            used[j] = false;
        }
        false
    }
    go(x, y, 0, &mut assign, &mut used)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn golden() -> Seed {
        Seed::from_rows(&[
            vec![0, 2, -1, 0],
            vec![-2, 0, 2, -2],
            vec![1, -2, 0, 2],
            vec![0, 2, -2, 0],
        ])
        .unwrap()
    }

    fn markov() -> IntMatrix {
        m(&[vec![0, -2, 2], vec![2, 0, -2], vec![-2, 2, 0]])
    }

    #[test]
    fn golden_simple_projection() {
        let eps = DeltaVector::from_i64(&[0, 0, 1, -2]);
        let r = project_simple(&golden(), &eps, &SearchOptions::default()).unwrap();
        let expected_c = m(&[vec![0, 1, 0, 0], vec![1, 0, 0, 0], vec![0, 0, 2, 1]]).transpose();
        let (c, b) = r.canonical();
        let (c2, b2) = canonical_pair(&expected_c, &markov());
        assert_eq!((c, b), (c2, b2));
        assert!(permutation_equivalent(&r.b_proj, &markov()));
    }

    #[test]
    fn full_matches_simple_on_golden() {
        let eps = DeltaVector::from_i64(&[0, 0, 1, -2]);
        let a = project_simple(&golden(), &eps, &SearchOptions::default()).unwrap();
        let b = project_full(&golden(), &eps, &SearchOptions::default()).unwrap();
        assert!(equivalent_up_to_permutation(&a, &b));
    }

    #[test]
    fn negative_unit_restricts() {
        let s = golden();
        for i in 0..4 {
            let r = project_simple(&s, &DeltaVector::unit(4, i, Sign::Minus), &Default::default())
                .unwrap();
            assert_eq!(r.b_proj, s.b().delete_index(i));
            let f = project_full(&s, &DeltaVector::unit(4, i, Sign::Minus), &Default::default())
                .unwrap();
            assert!(f.sequence.is_empty());
            assert_eq!(f.b_proj, s.b().delete_index(i));
        }
    }

    #[test]
    fn pushforward_of_weight_vanishes() {
        let eps = DeltaVector::from_i64(&[0, 0, 1, -2]);
        let r = project_simple(&golden(), &eps, &SearchOptions::default()).unwrap();
        assert!(pushforward_delta(&eps, &r.c_eperp).unwrap().is_zero());
        let fam = lift_delta_candidates(&r.complement, &DeltaVector::from_i64(&[1, 0, -2])).unwrap();
        for a in 0..4 {
            assert_eq!(
                pushforward_delta(&fam.at(a), &r.c_eperp).unwrap(),
                DeltaVector::from_i64(&[1, 0, -2])
            );
        }
    }

    #[test]
    fn sequence_matrix_reproduces_mutation() {
        let s = golden();
        let seq = MutationSequence::new(vec![2, 0, 3, 1, 2]);
        let c = sequence_c_matrix(&s, &seq).unwrap();
        assert_eq!(pushforward_b(s.b(), &c).unwrap(), s.mutate_along(&seq.steps).unwrap().into_matrix());
    }

    #[test]
    fn two_negative_units_delete_both() {
        let s = golden();
        let list = [DeltaVector::unit(4, 1, Sign::Minus), DeltaVector::unit(4, 3, Sign::Minus)];
        let r = project_multi(&s, &list, &Default::default()).unwrap();
        assert_eq!(r.b_proj, s.b().delete_index(3).delete_index(1));
        assert_eq!(r.labels, vec!["1".to_string(), "3".to_string()]);
    }

    #[test]
    fn permutation_matching() {
        let x = markov();
        let y = x.permute_symmetric(&[2, 0, 1]);
        assert!(permutation_equivalent(&x, &y));
        // reversing the 3-cycle is a relabeling
        assert!(permutation_equivalent(&x, &x.neg()));
        assert!(!permutation_equivalent(&x, &m(&[vec![0, 1, 0], vec![-1, 0, 0], vec![0, 0, 0]])));
    }
}
