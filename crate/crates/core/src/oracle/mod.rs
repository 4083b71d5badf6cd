//! Representation-theoretic cross-checks on acyclic quivers.
//!
//! Presentations of δ-vectors are sampled with random coefficients, their
//! cokernels are computed as explicit representations, and `Hom`/`E`
//! dimensions come from ranks of the induced maps between `Hom` spaces.
//! Generic values are minima over independent samples.

pub mod field;
pub mod path;
pub mod present;
pub mod verify;

pub use field::{Field, PrimeField, Rationals};
pub use path::{ArrowConvention, Path, PathAlgebra, Quiver, MAX_VERTICES};
pub use present::{
    cokernel, generic_e, hom_e_dims, is_rigid_family, sample_trials, FieldChoice, HomE,
    OracleOptions, PresentationSample, Representation, MULTIPLICITY_CAP,
};
pub use verify::{
    calibrate_convention, locked_convention, minimal_lift_a, path_algebra_for, verify_projection,
    PairReport, VerifyReport,
};
