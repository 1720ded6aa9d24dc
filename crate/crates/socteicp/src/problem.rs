//! The problem instance: two tensors over a product of second-order cones,
//! the generalized Rayleigh quotient, the complementarity residual and the
//! solution verifier.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::cone::{membership_margins_slice, project_cone_slice, BlockVector, ConeStructure};
use crate::linalg::{dot, norm2};
use crate::scalar::Real;
use crate::tensor::{SymTensor, TensorError};

/// Relative floor on `|A x^m| / ‖x‖^m` below which quotients are refused.
pub const POSITIVITY_GUARD: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProblemError {
    #[error("tensor orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("tensor dims {a_dim}/{b_dim} do not match cone total {cone}")]
    DimMismatch { a_dim: usize, b_dim: usize, cone: usize },
    #[error("|A x^m| = {value:e} is below the positivity guard at this point")]
    PositivityViolated { value: f64 },
    #[error("zero vector")]
    ZeroVector,
    #[error("tolerance must be positive")]
    BadTolerance,
    #[error("A x^m changes sign on the cone: {pos:e} at one sample, {neg:e} at another")]
    SignIndefinite { pos: f64, neg: f64 },
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// A second-order cone tensor eigenvalue complementarity instance:
/// find x ∈ K, w = (λA − B)x^{m−1} ∈ K, ⟨x, w⟩ = 0, x ≠ 0.
#[derive(Debug, Clone)]
pub struct Problem<T> {
    a: SymTensor<T>,
    b: SymTensor<T>,
    structure: ConeStructure,
    positivity_sign: i8,
}

impl<T: Real> Problem<T> {
    pub fn new(
        a: SymTensor<T>,
        b: SymTensor<T>,
        structure: ConeStructure,
    ) -> Result<Self, ProblemError> {
        if a.order() != b.order() {
            return Err(ProblemError::OrderMismatch(a.order(), b.order()));
        }
        if a.dim() != b.dim() || a.dim() != structure.total() {
            return Err(ProblemError::DimMismatch {
                a_dim: a.dim(),
                b_dim: b.dim(),
                cone: structure.total(),
            });
        }
        Ok(Problem { a, b, structure, positivity_sign: 1 })
    }

    pub fn a(&self) -> &SymTensor<T> {
        &self.a
    }

    pub fn b(&self) -> &SymTensor<T> {
        &self.b
    }

    pub fn structure(&self) -> &ConeStructure {
        &self.structure
    }

    pub fn order(&self) -> usize {
        self.a.order()
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    /// Sign established by `check_strict_positivity` (+1 unless recorded
    /// otherwise). Informational; quotients are evaluated as-is.
    pub fn positivity_sign(&self) -> i8 {
        self.positivity_sign
    }

    pub fn with_positivity_sign(mut self, sign: i8) -> Self {
        self.positivity_sign = sign;
        self
    }

    fn guarded_a_form(&self, x: &[T]) -> Result<T, ProblemError> {
        let ax = self.a.contract_full(x)?;
        let nx = norm2(x);
        let floor = T::c(POSITIVITY_GUARD) * nx.powi(self.order() as i32);
        if ax.abs() < floor || nx == T::zero() {
            return Err(ProblemError::PositivityViolated {
                value: ax.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(ax)
    }

    /// Generalized Rayleigh quotient `λ(x) = B x^m / A x^m`.
    pub fn rayleigh(&self, x: &[T]) -> Result<T, ProblemError> {
        let ax = self.guarded_a_form(x)?;
        Ok(self.b.contract_full(x)? / ax)
    }

    /// `∇λ(x) = (m / A x^m) (B x^{m−1} − λ(x) A x^{m−1})`.
    ///
    /// This is the exact gradient when A and B are symmetric; it is evaluated
    /// verbatim for every symmetry class, which keeps its zeros aligned with
    /// the complementarity residual.
    pub fn rayleigh_gradient(&self, x: &[T]) -> Result<Vec<T>, ProblemError> {
        let ax = self.guarded_a_form(x)?;
        let lam = self.b.contract_full(x)? / ax;
        let bx1 = self.b.contract_once(x)?;
        let ax1 = self.a.contract_once(x)?;
        let scale = T::from_count(self.order()) / ax;
        Ok(bx1.iter().zip(&ax1).map(|(&b, &a)| scale * (b - lam * a)).collect())
    }

    /// The variational-inequality map `F(x) = λ(x) A x^{m−1} − B x^{m−1}`.
    pub fn eicp_map(&self, x: &[T]) -> Result<Vec<T>, ProblemError> {
        let ax = self.guarded_a_form(x)?;
        let lam = self.b.contract_full(x)? / ax;
        let bx1 = self.b.contract_once(x)?;
        let ax1 = self.a.contract_once(x)?;
        Ok(ax1.iter().zip(&bx1).map(|(&a, &b)| lam * a - b).collect())
    }

    /// Complementarity residual report at `(x, λ)`.
    pub fn residual(&self, x: &[T], lambda: T) -> Result<ResidualReport<T>, ProblemError> {
        if norm2(x) == T::zero() {
            return Err(ProblemError::ZeroVector);
        }
        let ax1 = self.a.contract_once(x)?;
        let bx1 = self.b.contract_once(x)?;
        let w: Vec<T> = ax1.iter().zip(&bx1).map(|(&a, &b)| lambda * a - b).collect();
        let lam_ax1: Vec<T> = ax1.iter().map(|&a| lambda * a).collect();
        let scale = norm2(&lam_ax1) + norm2(&bx1);
        let relerr = norm2(&w);
        let complementarity = dot(x, &w);
        let membership_x = membership_margins_slice(&self.structure, x);
        let membership_w = membership_margins_slice(&self.structure, &w);
        let block_complementarity = (0..self.structure.num_blocks())
            .map(|b| {
                let r = self.structure.block_range(b);
                dot(&x[r.clone()], &w[r])
            })
            .collect();
        let w = BlockVector::new(self.structure.clone(), w).expect("length preserved");
        Ok(ResidualReport {
            w,
            relerr,
            complementarity,
            membership_x,
            membership_w,
            block_complementarity,
            scale,
        })
    }

    /// Scale-invariant verification of a candidate eigenpair. True iff the
    /// cone memberships and the complementarity hold within `tol`, measured
    /// relative to `‖x‖` and to `scale = ‖λAx^{m−1}‖ + ‖Bx^{m−1}‖`.
    pub fn verify(
        &self,
        x: &[T],
        lambda: T,
        tol: T,
    ) -> Result<(bool, ResidualReport<T>), ProblemError> {
        if tol <= T::zero() {
            return Err(ProblemError::BadTolerance);
        }
        let report = self.residual(x, lambda)?;
        let nx = norm2(x);
        let min_mx = report.membership_x.iter().cloned().fold(T::infinity(), T::min);
        let min_mw = report.membership_w.iter().cloned().fold(T::infinity(), T::min);
        let ok = min_mx >= -tol * nx
            && min_mw >= -tol * report.scale
            && report.complementarity.abs() <= tol * report.scale * nx;
        Ok((ok, report))
    }

    /// Sample `A x^m` at unit-norm points of the cone (projected Gaussian
    /// draws plus every block apex) and report the consistent sign.
    ///
    /// Exact zeros at sampled points (e.g. a missing diagonal entry at a
    /// block apex) do not decide a sign; they are surfaced through
    /// `min_observed = 0` and the witness.
    pub fn check_strict_positivity(
        &self,
        samples: usize,
        seed: u64,
    ) -> Result<PositivityReport<T>, ProblemError> {
        let n = self.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut points: Vec<Vec<T>> = Vec::new();
        for b in 0..self.structure.num_blocks() {
            let mut apex = vec![T::zero(); n];
            apex[self.structure.block_range(b).start] = T::one();
            points.push(apex);
        }
        let mut produced = 0;
        while produced < samples {
            let z: Vec<T> = (0..n)
                .map(|_| {
                    // Box-Muller from two uniform draws
                    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
                    let u2: f64 = rng.gen_range(0.0..1.0);
                    T::c((-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos())
                })
                .collect();
            let p = project_cone_slice(&self.structure, &z);
            let np = norm2(&p);
            if np > T::c(1e-12) {
                points.push(p.iter().map(|&v| v / np).collect());
                produced += 1;
            }
        }

        let mut best_pos: Option<(T, Vec<T>)> = None;
        let mut best_neg: Option<(T, Vec<T>)> = None;
        let mut min_abs: Option<(T, Vec<T>)> = None;
        for p in points {
            let v = self.a.contract_full(&p)?;
            if min_abs.as_ref().is_none_or(|(m, _)| v.abs() < m.abs()) {
                min_abs = Some((v, p.clone()));
            }
            if v > T::zero() && best_pos.as_ref().is_none_or(|(m, _)| v > *m) {
                best_pos = Some((v, p.clone()));
            }
            if v < T::zero() && best_neg.as_ref().is_none_or(|(m, _)| v < *m) {
                best_neg = Some((v, p));
            }
        }
        match (best_pos, best_neg) {
            (Some((p, _)), Some((n_, _))) => Err(ProblemError::SignIndefinite {
                pos: p.to_f64().unwrap_or(f64::NAN),
                neg: n_.to_f64().unwrap_or(f64::NAN),
            }),
            (pos, neg) => {
                let sign = if pos.is_some() { 1 } else if neg.is_some() { -1 } else { 0 };
                let (value, witness) = min_abs.expect("at least the apex points were sampled");
                Ok(PositivityReport { sign, min_observed: value.abs(), witness_value: value, witness })
            }
        }
    }
}

/// Verification margins of a candidate pair.
#[derive(Debug, Clone)]
pub struct ResidualReport<T> {
    /// w = (λA − B)x^{m−1}, blocked by the cone structure.
    pub w: BlockVector<T>,
    /// RelErr = ‖Bx^{m−1} − λAx^{m−1}‖ at (x, λ).
    pub relerr: T,
    /// ⟨x, w⟩.
    pub complementarity: T,
    /// Cone margins of x, per block.
    pub membership_x: Vec<T>,
    /// Cone margins of w, per block.
    pub membership_w: Vec<T>,
    /// ⟨x^i, w^i⟩ per block.
    pub block_complementarity: Vec<T>,
    /// ‖λAx^{m−1}‖ + ‖Bx^{m−1}‖; the reference scale for tolerances.
    pub scale: T,
}

/// An eigenpair normalized to ‖x‖ = 1, with its residual report.
#[derive(Debug, Clone)]
pub struct EigenPair<T> {
    pub lambda: T,
    pub x: BlockVector<T>,
    pub report: ResidualReport<T>,
}

/// Outcome of strict-positivity sampling.
#[derive(Debug, Clone)]
pub struct PositivityReport<T> {
    /// +1 / −1 when the nonzero samples agree; 0 if every sample was zero.
    pub sign: i8,
    /// Minimum |A x^m| over the sample set (0 flags a boundary zero).
    pub min_observed: T,
    /// Signed value at the minimizing point.
    pub witness_value: T,
    /// The sampled point achieving the minimum.
    pub witness: Vec<T>,
}
