use std::collections::HashSet;
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};

use super::field::PrimeField;
use super::path::{ArrowConvention, PathAlgebra};
use super::present::{cokernel, generic_e, sample_trials, OracleOptions, PresentationSample};
use crate::complement::{bongartz_certificate, ComplementFrame};
use crate::error::{Error, Result};
use crate::matrix::{determinant, Seed};
use crate::projector::{
    equivalent_up_to_permutation, lift_delta_candidates, project_simple, pushforward_b,
    ProjectionResult,
};
use crate::search::{SearchOptions, Targets};
use crate::tracker::{exchange_frame, ClusterFrame, DeltaVector, Sign};

/// All clusters of `seed` reachable from the negative cluster by exchanges at
/// the seed itself, in discovery order.
fn clusters_by_exchange(seed: &Seed, limit: usize) -> Result<Vec<ClusterFrame>> {
    let n = seed.n();
    let start = ClusterFrame::negative(n);
    let mut seen = HashSet::new();
    seen.insert(start.canonical(Sign::Minus).delta().clone());
    let mut queue = vec![start];
    let mut i = 0;
    while i < queue.len() && queue.len() < limit {
        let f = queue[i].clone();
        i += 1;
        for j in 0..n {
            let g = exchange_frame(seed, &f, j)?;
            if seen.insert(g.canonical(Sign::Minus).delta().clone()) {
                queue.push(g);
            }
        }
    }
    Ok(queue)
}

fn consistent(convention: ArrowConvention, opts: &OracleOptions) -> Result<bool> {
    for rows in [vec![vec![0, 1], vec![-1, 0]], vec![vec![0, -1], vec![1, 0]]] {
        let seed = Seed::from_rows(&rows)?;
        let pa = PathAlgebra::from_b(seed.b(), convention)?;
        for i in 0..2 {
            let mut beta = [0usize; 2];
            beta[i] = 1;
            let shifted = PresentationSample::from_parts(&pa, &beta, &[0, 0], vec![vec![]])?;
            let field = PrimeField::new(32003)?;
            if cokernel(&field, &pa, &shifted)?.dims.iter().any(|&d| d != 0) {
                return Ok(false);
            }
        }
        for frame in clusters_by_exchange(&seed, 16)? {
            let rows: Vec<DeltaVector> = (0..2).map(|r| frame.row(r)).collect();
            for a in &rows {
                for b in &rows {
                    let trials = sample_trials(&pa, a, b, opts)?;
                    if !trials.iter().all(|h| h.euler_identity_holds()) {
                        return Ok(false);
                    }
                    if trials.iter().map(|h| h.e).min() != Some(0) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Determines which arrow convention makes every cluster of the two A_2
/// seeds (found by exchanges) a rigid family for the oracle, and checks
/// `P_i → 0` has zero cokernel. Exactly one convention must pass.
pub fn calibrate_convention(opts: &OracleOptions) -> Result<ArrowConvention> {
    let passing: Vec<ArrowConvention> = [ArrowConvention::RowToColumn, ArrowConvention::ColumnToRow]
        .into_iter()
        .map(|c| consistent(c, opts).map(|ok| (c, ok)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter_map(|(c, ok)| ok.then_some(c))
        .collect();
    match passing.as_slice() {
        [c] => Ok(*c),
        [] => Err(Error::ConventionMismatch("no arrow convention is consistent on A_2".into())),
        _ => Err(Error::ConventionMismatch("both arrow conventions pass on A_2".into())),
    }
}

/// The calibrated convention under default oracle options, computed once.
pub fn locked_convention() -> Result<ArrowConvention> {
    static LOCK: OnceLock<Result<ArrowConvention>> = OnceLock::new();
    LOCK.get_or_init(|| calibrate_convention(&OracleOptions::default())).clone()
}

/// Path algebra of an acyclic seed under the calibrated convention.
pub fn path_algebra_for(seed: &Seed) -> Result<PathAlgebra> {
    PathAlgebra::from_b(seed.b(), locked_convention()?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairReport {
    pub row_i: usize,
    pub row_j: usize,
    pub per_trial_e: Vec<usize>,
    pub generic_e: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub convention: ArrowConvention,
    pub field: String,
    /// The oracle works over a finite field or with sampled integer
    /// coefficients; generic values are a probabilistic stand-in.
    pub heuristic: bool,
    pub trials: usize,
    pub rng_seed: u64,
    pub sign: Sign,
    pub eps_matches: bool,
    pub rigid_family: bool,
    pub unimodular: bool,
    pub sign_pattern: bool,
    pub euler_identity: bool,
    /// Whether projections found with only `+` and only `−` targets agree up
    /// to relabeling; `None` if one of them is not reachable.
    pub sign_agreement: Option<bool>,
    /// For a positive completion the three checks above are equivalent to the
    /// completion being correct; for a negative one they are necessary only.
    pub exact: bool,
    pub passed: bool,
    pub pairs: Vec<PairReport>,
}

/// Cross-checks a projection on an acyclic seed with the representation
/// oracle.
pub fn verify_projection(
    pa: &PathAlgebra,
    eps: &DeltaVector,
    result: &ProjectionResult,
    opts: &OracleOptions,
    search: &SearchOptions,
) -> Result<VerifyReport> {
    let convention = locked_convention()?;
    if pa.convention() != convention {
        return Err(Error::ConventionMismatch(format!(
            "path algebra built with '{}' but calibration locked '{}'",
            pa.convention(),
            convention
        )));
    }
    let seed = Seed::new(pa.exchange_matrix())?;
    if pushforward_b(seed.b(), &result.c_eperp)? != result.b_proj {
        return Err(Error::ConventionMismatch(
            "projection does not come from this path algebra's exchange matrix".into(),
        ));
    }
    let cf = &result.complement;
    let rows: Vec<DeltaVector> = (0..cf.n()).map(|r| cf.frame().row(r)).collect();
    let mut pairs = Vec::with_capacity(rows.len() * rows.len());
    let mut euler_identity = true;
    for (i, a) in rows.iter().enumerate() {
        for (j, b) in rows.iter().enumerate() {
            let trials = sample_trials(pa, a, b, opts)?;
            euler_identity &= trials.iter().all(|h| h.euler_identity_holds());
            let per_trial_e: Vec<usize> = trials.iter().map(|h| h.e).collect();
            let generic = *per_trial_e.iter().min().expect("at least one trial");
            pairs.push(PairReport { row_i: i, row_j: j, per_trial_e, generic_e: generic });
        }
    }
    let rigid_family = pairs.iter().all(|p| p.generic_e == 0);
    let unimodular = determinant(cf.frame().delta())?.abs().is_one();
    let sign_pattern = bongartz_certificate(cf);
    let eps_matches = eps_is_primitive_of(&cf.eps(), eps);

    let probe = SearchOptions { max_states: search.max_states.min(50_000), ..search.clone() };
    let by_sign = |t: Targets| project_simple(&seed, eps, &SearchOptions { targets: t, ..probe.clone() });
    let sign_agreement = match (by_sign(Targets::Plus), by_sign(Targets::Minus)) {
        (Ok(p), Ok(m)) => Some(equivalent_up_to_permutation(&p, &m)),
        _ => None,
    };
    let mut passed = rigid_family && unimodular && sign_pattern && euler_identity && eps_matches;
    if cf.sign() == Sign::Minus {
        passed &= sign_agreement != Some(false);
    }
    Ok(VerifyReport {
        convention,
        field: opts.field.describe(),
        heuristic: true,
        trials: opts.trials,
        rng_seed: opts.seed,
        sign: cf.sign(),
        eps_matches,
        rigid_family,
        unimodular,
        sign_pattern,
        euler_identity,
        sign_agreement,
        exact: cf.sign() == Sign::Plus,
        passed,
        pairs,
    })
}

fn eps_is_primitive_of(row: &DeltaVector, eps: &DeltaVector) -> bool {
    if row.len() != eps.len() {
        return false;
    }
    // eps = m · row for some m ≥ 1
    let Some(k) = row.0.iter().position(|x| !x.is_zero()) else {
        return false;
    };
    let m = &eps.0[k] / &row.0[k];
    m.is_positive() && row.0.iter().zip(&eps.0).all(|(r, e)| r * &m == *e)
}

/// Least `a ∈ [0, a_max]` such that `δ'_a = ±d_perp·Δ_c + a·ε` satisfies
/// `e(δ'_a, ε) = e(ε, δ'_a) = 0` generically.
pub fn minimal_lift_a(
    pa: &PathAlgebra,
    cf: &ComplementFrame,
    d_perp: &DeltaVector,
    a_max: u64,
    opts: &OracleOptions,
) -> Result<u64> {
    let family = lift_delta_candidates(cf, d_perp)?;
    let eps = cf.eps();
    for a in 0..=a_max {
        let lift = family.at(a);
        if generic_e(pa, &lift, &eps, opts)? == 0 && generic_e(pa, &eps, &lift, opts)? == 0 {
            return Ok(a);
        }
    }
    Err(Error::NotFound(a_max as usize))
}
