//! Best-approximation-preserving Hadamard convolution operators on Hardy
//! spaces of the unit disc.
//!
//! Functions are power series or boundary samples; kernels `K_n` act by
//! coefficientwise multiplication. The crate certifies when such operators
//! bound the best polynomial approximation `E_n(f)_q` from below, computes
//! `E_n(f)_q` itself by convex optimisation, and evaluates the resulting
//! coefficient inequalities of Landau and Bohr type.

pub mod approx;
pub mod corpus;
pub mod error;
pub mod inequalities;
pub mod kernels;
pub mod series;
pub mod solver;
pub mod special;

pub use approx::{
    best_approx, best_approx_with, convolution_lower_bound, mixed_approx_l1, mixed_approx_l1_with,
    ApproxInput, ApproxResult, Linearization, SolveOptions,
};
pub use error::{HardyError, Result};
pub use kernels::{
    apply_operator, certify_bap, certify_pair, certify_theorem3, kernel_coefficients,
    kernel_from_measure, min_real_part, moment_check, Certificate, DiscreteMeasure, KernelForm,
    KernelSpec, SweepConfig, Verdict,
};
pub use series::{
    evaluate, fourier_coefficients, hadamard, hardy_norm, sample_boundary, BoundaryGrid,
    DiscFunction, HardyExponent, PowerSeries, TailKind, C64,
};
pub use solver::{ClarabelSolver, ConvexSolver};
pub use special::{
    bohr_threshold, elliptic_k, family_coefficients, ClosedForm, ExtremalFamily, FamilyKind,
    PsiWeights, TestFunction,
};
