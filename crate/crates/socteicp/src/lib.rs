//! Solvers and certificates for second-order cone tensor eigenvalue
//! complementarity problems: given two m-th order n-dimensional tensors A
//! and B and a product of second-order cones K, find a nonzero x ∈ K with
//! `w = (λA − B)x^{m−1} ∈ K` and `⟨x, w⟩ = 0`.
//!
//! The crate provides sparse tensor contraction kernels, the cone algebra
//! (spectral factorization, projection, Jordan product), a
//! scaling-and-projection solver, a projected fixed-point solver on the
//! compact basis `K₀`, KKT residual certificates for both nonlinear
//! programming reformulations, a variational-inequality residual check, and
//! the plain-text instance formats used by the command-line driver.
//!
//! Everything numeric is generic over the scalar (`f32`/`f64`); the aliases
//! below fix `f64`, which the bundled instances and the CLI use.

pub mod basis;
pub mod cone;
pub mod instances;
pub mod io;
pub mod linalg;
pub mod nlp;
pub mod problem;
pub mod scalar;
pub mod spa;
pub mod subsym;
pub mod tensor;

pub use basis::{project_basis, vi_residual, BasisError, BasisSet};
pub use cone::{
    jordan_product, membership_margins, project_cone, project_soc, spectral_decompose,
    BlockVector, ConeError, ConeStructure, SpectralDecomp,
};
pub use io::{
    emit_problem_inline, emit_tensor, generate_random_problem, load_problem, parse_problem,
    parse_problem_with, parse_tensor, IoError, RandomSpec,
};
pub use nlp::{nlp1_kkt_residual, nlp1_solve, nlp2_restrict, KktCertificate, KktError, Nlp1Config};
pub use problem::{
    EigenPair, PositivityReport, Problem, ProblemError, ResidualReport, POSITIVITY_GUARD,
};
pub use scalar::{odd_root, Real};
pub use spa::{spa_solve, SolveError, SolveReport, SpaConfig, Start, Termination};
pub use subsym::{
    subsym_kkt_residual, subsym_lift, subsym_objective, subsym_solve, LiftedPoint, SubsymConfig,
    SubsymError, SubsymReport, SubsymStart,
};
pub use tensor::{SymTensor, Symmetry, TensorError};

/// Concrete aliases for the default scalar.
pub type SymTensor64 = SymTensor<f64>;
pub type BlockVector64 = BlockVector<f64>;
pub type Problem64 = Problem<f64>;
pub type EigenPair64 = EigenPair<f64>;
pub type SolveReport64 = SolveReport<f64>;
pub type SpaConfig64 = SpaConfig<f64>;
