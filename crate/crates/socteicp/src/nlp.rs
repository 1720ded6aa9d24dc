//! The fractional-programming reformulation over the compact basis: a
//! projected fixed-point solver for `max λ(x)` on `K₀`, the closed-form
//! multiplier certificate at candidate stationary points, and restriction
//! to a subset of cone blocks.

use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::basis::{project_basis, BasisError, BasisSet};
use crate::cone::{project_soc, BlockVector};
use crate::linalg::{dot, norm2, sub};
use crate::problem::{EigenPair, Problem, ProblemError};
use crate::scalar::Real;
use crate::spa::{SolveReport, Start, Termination};
use crate::tensor::TensorError;

#[derive(Debug, thiserror::Error)]
pub enum KktError {
    #[error("point is not on the basis K0 within 1e-8")]
    NotOnBasis,
    #[error("degenerate support: every block head is zero")]
    DegenerateSupport,
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Basis(#[from] BasisError),
}

/// Configuration of the projected fixed-point solver on `K₀`.
#[derive(Debug, Clone)]
pub struct Nlp1Config<T> {
    /// Stopping tolerance on the natural residual `‖x − Π_{K₀}(x + ∇λ(x))‖`.
    pub tol: T,
    pub max_iter: usize,
    pub start: Start<T>,
}

impl<T: Real> Default for Nlp1Config<T> {
    fn default() -> Self {
        Nlp1Config { tol: T::c(1e-6), max_iter: 200_000, start: Start::Ones }
    }
}

const BASIS_PROJ_TOL: f64 = 1e-12;

/// Maximize the generalized Rayleigh quotient over `K₀` by the projected
/// fixed-point iteration `x ← Π_{K₀}(x + τ ∇λ(x))`, with the gradient
/// formula of the symmetric case. Stops when the natural residual at the
/// unit reference step `t = 1` reaches `tol`.
pub fn nlp1_solve<T: Real>(
    p: &Problem<T>,
    cfg: &Nlp1Config<T>,
) -> Result<SolveReport<T>, KktError> {
    let t0 = Instant::now();
    let n = p.dim();
    let proj_tol = T::c(BASIS_PROJ_TOL);

    let (z0, escape_seed): (Vec<T>, u64) = match &cfg.start {
        Start::Ones => (vec![T::one(); n], 0x1cafe),
        Start::Random(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            ((0..n).map(|_| T::c(rng.gen_range(0.0..1.0))).collect(), seed ^ 0x1cafe)
        }
        Start::Point(z) => (z.clone(), 0x1cafe),
    };
    let mut escape_rng = ChaCha8Rng::seed_from_u64(escape_seed);
    let mut x = project_basis(&z0, p.structure(), proj_tol)?;

    let mut tau = T::one();
    let mut stage = 0usize;
    let mut stage_budget = 400usize;
    let mut in_stage = 0usize;
    let mut stagnant = 0usize;
    let mut best: Option<(T, Vec<T>)> = None;

    let mut iterations = 0usize;
    let mut nat = T::infinity();
    while iterations < cfg.max_iter {
        let grad = p.rayleigh_gradient(&x)?;
        let shifted: Vec<T> = x.iter().zip(&grad).map(|(&xi, &gi)| xi + gi).collect();
        let reference = project_basis(&shifted, p.structure(), proj_tol)?;
        nat = norm2(&sub(&x, &reference));
        if best.as_ref().is_none_or(|(b, _)| nat < *b) {
            best = Some((nat, x.clone()));
        }
        if nat <= cfg.tol {
            return finish(p, &x, iterations, true, t0.elapsed());
        }

        if in_stage >= stage_budget {
            stage += 1;
            in_stage = 0;
            tau = tau * T::c(0.5);
            stage_budget = 400 + 200 * stage;
        }
        let next = if tau == T::one() {
            reference
        } else {
            let trial: Vec<T> =
                x.iter().zip(&grad).map(|(&xi, &gi)| xi + tau * gi).collect();
            project_basis(&trial, p.structure(), proj_tol)?
        };

        let moved = norm2(&sub(&next, &x));
        if moved <= T::c(1e-13) * (T::one() + norm2(&x)) {
            stagnant += 1;
            if stagnant >= 30 {
                stagnant = 0;
                let kick: Vec<T> = x
                    .iter()
                    .map(|&xi| {
                        let u1: f64 = escape_rng.gen_range(f64::EPSILON..1.0);
                        let u2: f64 = escape_rng.gen_range(0.0..1.0);
                        xi + T::c(
                            0.5 * (-2.0 * u1.ln()).sqrt()
                                * (2.0 * std::f64::consts::PI * u2).cos(),
                        )
                    })
                    .collect();
                x = project_basis(&kick, p.structure(), proj_tol)?;
                iterations += 1;
                in_stage += 1;
                continue;
            }
        } else {
            stagnant = 0;
        }
        x = next;
        iterations += 1;
        in_stage += 1;
    }

    let (_, xb) = best.unwrap_or((nat, x));
    finish(p, &xb, iterations, false, t0.elapsed())
}

fn finish<T: Real>(
    p: &Problem<T>,
    x_basis: &[T],
    iterations: usize,
    converged: bool,
    elapsed: std::time::Duration,
) -> Result<SolveReport<T>, KktError> {
    let lambda = p.rayleigh(x_basis)?;
    let nx = norm2(x_basis);
    let unit: Vec<T> = x_basis.iter().map(|&v| v / nx).collect();
    let report = p.residual(&unit, lambda)?;
    let x = BlockVector::new(p.structure().clone(), unit).expect("length preserved");
    Ok(SolveReport {
        pair: EigenPair { lambda, x, report },
        iterations,
        relerr_history: None,
        lambda_history: None,
        elapsed,
        converged,
        termination: if converged { Termination::Tolerance } else { Termination::MaxIter },
    })
}

/// Lagrange multipliers and residuals backing a stationarity claim.
#[derive(Debug, Clone)]
pub struct KktCertificate<T> {
    /// Cone-constraint multipliers, one per block (zero off the support).
    pub beta: Vec<T>,
    /// Head-nonnegativity multipliers, one per block.
    pub gamma: Vec<T>,
    /// Multiplier of the normalization `e^⊤x = 1`.
    pub delta: T,
    /// Equality multipliers of the lifted system (sub-symmetric path only).
    pub alpha: Option<Vec<T>>,
    /// w-cone multipliers (sub-symmetric path only).
    pub mu: Option<Vec<T>>,
    /// w-head multipliers (sub-symmetric path only).
    pub theta: Option<Vec<T>>,
    /// Multiplier of `e^⊤y = λ^{1/(m−1)}` (sub-symmetric path only).
    pub eta: Option<T>,
    pub stationarity_residual: T,
    pub complementarity_residual: T,
    pub feasibility_residual: T,
}

impl<T: Real> KktCertificate<T> {
    /// All inequality multipliers on the right side of zero.
    pub fn multipliers_nonnegative(&self, tol: T) -> bool {
        let ok = |v: &[T]| v.iter().all(|&m| m >= -tol);
        ok(&self.beta)
            && ok(&self.gamma)
            && self.mu.as_deref().is_none_or(ok)
            && self.theta.as_deref().is_none_or(ok)
    }
}

/// Closed-form multiplier certificate at a point of `K₀` with positive
/// support: on blocks with `x◦ > 0` take `β = ȳ◦/(2x◦)`, `γ = 0`, `δ = 0`,
/// where `ȳ = (m/Ax^m)(λAx^{m−1} − Bx^{m−1})`; the stationarity residual
/// measures the per-block discrepancy `ȳⁱ − 2β(x◦, −x•)ⁱ` plus the distance
/// of off-support blocks of ȳ from the cone.
#[allow(clippy::needless_range_loop)]
pub fn nlp1_kkt_residual<T: Real>(p: &Problem<T>, x: &[T]) -> Result<KktCertificate<T>, KktError> {
    let basis = BasisSet::new(p.structure().clone());
    if !basis.contains(x, T::c(1e-8)) {
        return Err(KktError::NotOnBasis);
    }
    let st = p.structure();
    let r = st.num_blocks();
    let m = T::from_count(p.order());
    let a_form = p.a().contract_full(x)?;
    let lambda = p.rayleigh(x)?;
    let ax1 = p.a().contract_once(x)?;
    let bx1 = p.b().contract_once(x)?;
    let ybar: Vec<T> =
        ax1.iter().zip(&bx1).map(|(&a, &b)| m / a_form * (lambda * a - b)).collect();

    let support_tol = T::c(1e-12);
    let mut beta = vec![T::zero(); r];
    let gamma = vec![T::zero(); r];
    let mut stationarity = T::zero();
    let mut complementarity = T::zero();
    let mut any_support = false;
    for bidx in 0..r {
        let range = st.block_range(bidx);
        let head = x[range.start];
        let yb = &ybar[range.clone()];
        if head > support_tol {
            any_support = true;
            let bi = yb[0] / (T::c(2.0) * head);
            beta[bidx] = bi;
            // residual of ȳ = 2β (x◦, −x•) on this block
            let mut block_res = T::zero();
            for (k, pos) in range.clone().enumerate() {
                let model = if k == 0 {
                    T::c(2.0) * bi * x[pos]
                } else {
                    -T::c(2.0) * bi * x[pos]
                };
                block_res = block_res + (yb[k] - model).powi(2);
            }
            stationarity = stationarity.max(block_res.sqrt());
            let quad = head * head - dot(&x[range.start + 1..range.end], &x[range.start + 1..range.end]);
            complementarity = complementarity.max((bi * quad).abs());
        } else {
            // off the support the stationarity system needs ȳ ∈ K
            let proj = project_soc(yb);
            stationarity = stationarity.max(norm2(&sub(yb, &proj)));
        }
    }
    if !any_support {
        return Err(KktError::DegenerateSupport);
    }
    let e: Vec<T> = st.basis_vector();
    let margins = crate::cone::membership_margins_slice(st, x);
    let feasibility = (dot(&e, x) - T::one()).abs()
        + margins.iter().map(|&v| (-v).max(T::zero())).fold(T::zero(), T::max);

    Ok(KktCertificate {
        beta,
        gamma,
        delta: T::zero(),
        alpha: None,
        mu: None,
        theta: None,
        eta: None,
        stationarity_residual: stationarity,
        complementarity_residual: complementarity,
        feasibility_residual: feasibility,
    })
}

/// Restrict the problem to the blocks of `keep`: principal sub-tensors over
/// the restricted cone. Solving or certifying on the result realizes the
/// block-restricted program.
pub fn nlp2_restrict<T: Real>(p: &Problem<T>, keep: &[usize]) -> Result<Problem<T>, KktError> {
    let a = p.a().principal_subtensor(p.structure(), keep)?;
    let b = p.b().principal_subtensor(p.structure(), keep)?;
    let structure = p
        .structure()
        .restrict(keep)
        .map_err(|_| KktError::Problem(ProblemError::ZeroVector))?;
    Ok(Problem::new(a, b, structure)?.with_positivity_sign(p.positivity_sign()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::ConeStructure;
    use crate::tensor::{SymTensor, Symmetry};

    fn toy() -> Problem<f64> {
        let a = SymTensor::build(
            4,
            2,
            Symmetry::Full,
            vec![(vec![1, 1, 1, 1], 1.0), (vec![2, 2, 2, 2], 1.0)],
        )
        .unwrap();
        let b = SymTensor::build(4, 2, Symmetry::Full, vec![(vec![1, 1, 1, 1], 2.0)]).unwrap();
        Problem::new(a, b, ConeStructure::single(2)).unwrap()
    }

    #[test]
    fn toy_stationary_at_apex() {
        let p = toy();
        let cfg = Nlp1Config { tol: 1e-8, ..Default::default() };
        let rep = nlp1_solve(&p, &cfg).unwrap();
        assert!(rep.converged);
        assert!((rep.pair.lambda - 2.0).abs() <= 1e-5, "lam = {}", rep.pair.lambda);
        let (ok, _) = p.verify(rep.pair.x.values(), rep.pair.lambda, 1e-6).unwrap();
        assert!(ok);
    }

    #[test]
    fn identical_tensors_apex_start_stationary_immediately() {
        let a: SymTensor<f64> = SymTensor::build(
            4,
            2,
            Symmetry::Full,
            vec![(vec![1, 1, 1, 1], 1.0), (vec![2, 2, 2, 2], 1.0)],
        )
        .unwrap();
        let p = Problem::new(a.clone(), a, ConeStructure::single(2)).unwrap();
        let cfg = Nlp1Config { tol: 1e-10, ..Default::default() };
        let rep = nlp1_solve(&p, &cfg).unwrap();
        assert!(rep.converged);
        assert_eq!(rep.iterations, 0);
        assert!((rep.pair.lambda - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kkt_zero_residuals_at_toy_solution() {
        let p = toy();
        let cert = nlp1_kkt_residual(&p, &[1.0, 0.0]).unwrap();
        assert!(cert.stationarity_residual <= 1e-12);
        assert!(cert.complementarity_residual <= 1e-12);
        assert!(cert.feasibility_residual <= 1e-12);
        assert!(cert.multipliers_nonnegative(1e-12));
        assert_eq!(cert.delta, 0.0);
    }

    #[test]
    fn kkt_zero_for_identical_tensors() {
        let a: SymTensor<f64> = SymTensor::build(
            4,
            2,
            Symmetry::Full,
            vec![(vec![1, 1, 1, 1], 1.0), (vec![2, 2, 2, 2], 1.0)],
        )
        .unwrap();
        let p = Problem::new(a.clone(), a, ConeStructure::single(2)).unwrap();
        let cert = nlp1_kkt_residual(&p, &[1.0, 0.3]).unwrap();
        assert!(cert.stationarity_residual <= 1e-12);
        assert!(cert.beta.iter().all(|&b| b.abs() <= 1e-13));
    }

    #[test]
    fn kkt_rejects_off_basis_points() {
        let p = toy();
        assert!(matches!(nlp1_kkt_residual(&p, &[2.0, 0.0]), Err(KktError::NotOnBasis)));
    }

    #[test]
    fn restriction_to_full_block_set_is_identity() {
        let p = toy();
        // single block: restriction keeps everything
        let q = nlp2_restrict(&p, &[1]).unwrap();
        assert_eq!(q.a(), p.a());
        assert_eq!(q.dim(), p.dim());
    }

    #[test]
    fn restriction_of_diagonal_toy_is_scalar_problem() {
        let a: SymTensor<f64> = SymTensor::build(
            4,
            2,
            Symmetry::Full,
            vec![(vec![1, 1, 1, 1], 1.0), (vec![2, 2, 2, 2], 5.0)],
        )
        .unwrap();
        let b = SymTensor::build(
            4,
            2,
            Symmetry::Full,
            vec![(vec![1, 1, 1, 1], 3.0), (vec![2, 2, 2, 2], 10.0)],
        )
        .unwrap();
        let p = Problem::new(a, b, ConeStructure::new(vec![1, 1]).unwrap()).unwrap();
        let q = nlp2_restrict(&p, &[2]).unwrap();
        assert_eq!(q.dim(), 1);
        let lam = q.rayleigh(&[1.0]).unwrap();
        assert!((lam - 2.0).abs() < 1e-14); // 10 / 5
    }
}
