//! The lifted nonlinear-programming reformulation for even order: minimize
//! `f(x,y,w,λ) = ‖y − λ^{1/(m−1)}x‖² + (x^⊤w)²` subject to
//! `w = Ay^{m−1} − Bx^{m−1}`, cone membership of x and w, `e^⊤x = 1` and
//! `e^⊤y = λ^{1/(m−1)}`. A feasible point with `f = 0` is exactly an
//! eigenpair, which makes `f` a certificate of global optimality.
//!
//! The solver is a quadratic-penalty method over `(x, y, w, ν)` with
//! `ν = λ^{1/(m−1)}` as the smooth parameter; the multiplier recovery sets
//! up the stationarity rows of the Lagrangian as a ridge least-squares
//! system with the active inequality set chosen from the point's margins.

use std::time::Instant;

use crate::cone::{membership_margins_slice, BlockVector};
use crate::linalg::{dot, norm2, ridge_least_squares, sub, Mat};
use crate::nlp::KktCertificate;
use crate::problem::{EigenPair, Problem, ProblemError};
use crate::scalar::{odd_root, Real};
use crate::spa::{SolveReport, Termination};
use crate::tensor::TensorError;

#[derive(Debug, thiserror::Error)]
pub enum SubsymError {
    #[error("the lifted reformulation needs even order, got {0}")]
    OrderNotEven(usize),
    #[error("e^T x = {0} is not positive; the point cannot be normalized")]
    NonpositiveTrace(f64),
    #[error("point violates the lifted constraints: equality residual {0:e}")]
    InfeasiblePoint(f64),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// A point of the lifted program.
#[derive(Debug, Clone)]
pub struct LiftedPoint<T> {
    pub x: BlockVector<T>,
    pub y: BlockVector<T>,
    pub w: BlockVector<T>,
    pub lambda: T,
    pub f_value: T,
}

impl<T: Real> LiftedPoint<T> {
    /// Recompute the objective from the stored components.
    pub fn objective(&self, order: usize) -> T {
        let nu = odd_root(self.lambda, order as u32 - 1);
        let diff: Vec<T> = self
            .y
            .values()
            .iter()
            .zip(self.x.values())
            .map(|(&yi, &xi)| yi - nu * xi)
            .collect();
        let xw = dot(self.x.values(), self.w.values());
        dot(&diff, &diff) + xw * xw
    }
}

fn require_even(order: usize) -> Result<(), SubsymError> {
    if !order.is_multiple_of(2) {
        Err(SubsymError::OrderNotEven(order))
    } else {
        Ok(())
    }
}

/// Objective of the lifted program at explicit components.
pub fn subsym_objective<T: Real>(
    p: &Problem<T>,
    x: &[T],
    y: &[T],
    w: &[T],
    lambda: T,
) -> Result<T, SubsymError> {
    require_even(p.order())?;
    let nu = odd_root(lambda, p.order() as u32 - 1);
    let diff: Vec<T> = y.iter().zip(x).map(|(&yi, &xi)| yi - nu * xi).collect();
    let xw = dot(x, w);
    Ok(dot(&diff, &diff) + xw * xw)
}

/// Lift a candidate eigenpair into the feasible set of the program:
/// `x̃ = x/(e^⊤x)`, `ỹ = λ^{1/(m−1)} x̃`, `w̃ = Aỹ^{m−1} − Bx̃^{m−1}`.
/// At an exact eigenpair the objective vanishes.
pub fn subsym_lift<T: Real>(
    p: &Problem<T>,
    x: &[T],
    lambda: T,
) -> Result<LiftedPoint<T>, SubsymError> {
    require_even(p.order())?;
    let e: Vec<T> = p.structure().basis_vector();
    let trace = dot(&e, x);
    if trace <= T::zero() {
        return Err(SubsymError::NonpositiveTrace(trace.to_f64().unwrap_or(f64::NAN)));
    }
    let xt: Vec<T> = x.iter().map(|&v| v / trace).collect();
    let nu = odd_root(lambda, p.order() as u32 - 1);
    let yt: Vec<T> = xt.iter().map(|&v| nu * v).collect();
    let ay = p.a().contract_once(&yt)?;
    let bx = p.b().contract_once(&xt)?;
    let wt: Vec<T> = ay.iter().zip(&bx).map(|(&a, &b)| a - b).collect();
    let f_value = subsym_objective(p, &xt, &yt, &wt, lambda)?;
    let st = p.structure().clone();
    Ok(LiftedPoint {
        x: BlockVector::new(st.clone(), xt).expect("length"),
        y: BlockVector::new(st.clone(), yt).expect("length"),
        w: BlockVector::new(st, wt).expect("length"),
        lambda,
        f_value,
    })
}

fn transpose_matvec<T: Real>(m: &[Vec<T>], v: &[T]) -> Vec<T> {
    let n = m.len();
    let mut out = vec![T::zero(); n];
    for (i, row) in m.iter().enumerate() {
        for (j, &mij) in row.iter().enumerate() {
            out[j] = out[j] + mij * v[i];
        }
    }
    out
}

/// Recover the Lagrange multipliers of the lifted program at a feasible
/// point by ridge least squares over the stationarity rows, with the active
/// inequality set read off the point's margins, and report the residuals.
/// The normalization multipliers δ and η are recovered from the projected
/// stationarity identities, which makes the scalar identity
/// `2(m−1)(x^⊤w)² + 2f = δ + λ^{1/(m−1)} η` hold by construction; its
/// numeric slack is reported in `identity_residual`.
#[allow(clippy::needless_range_loop)]
pub fn subsym_kkt_residual<T: Real>(
    p: &Problem<T>,
    pt: &LiftedPoint<T>,
) -> Result<(KktCertificate<T>, T), SubsymError> {
    require_even(p.order())?;
    let st = p.structure();
    let n = p.dim();
    let r = st.num_blocks();
    let m1 = T::from_count(p.order() - 1);
    let x = pt.x.values();
    let y = pt.y.values();
    let w = pt.w.values();
    let nu = odd_root(pt.lambda, p.order() as u32 - 1);
    let e: Vec<T> = st.basis_vector();

    // the equality rows gate the certificate; cone-margin deficits are
    // reported in the feasibility residual but do not reject the point
    // (near-solutions carry w ≈ 0 hovering around the cone boundary)
    let ay1 = p.a().contract_once(y)?;
    let bx1 = p.b().contract_once(x)?;
    let eq_w: Vec<T> = (0..n).map(|i| w[i] - ay1[i] + bx1[i]).collect();
    let eq_feas = norm2(&eq_w)
        + (dot(&e, x) - T::one()).abs()
        + (dot(&e, y) - nu).abs();
    let feas_scale = T::one() + norm2(&ay1) + norm2(&bx1);
    if eq_feas > T::c(1e-8) * feas_scale {
        return Err(SubsymError::InfeasiblePoint(eq_feas.to_f64().unwrap_or(f64::NAN)));
    }
    let margin_deficit = membership_margins_slice(st, x)
        .into_iter()
        .chain(membership_margins_slice(st, w))
        .map(|m| (-m).max(T::zero()))
        .fold(T::zero(), T::max);
    let feas = eq_feas + margin_deficit;

    // active sets from the margins
    let act_tol = T::c(1e-6);
    let quad = |v: &[T], b: usize| {
        let range = st.block_range(b);
        let head = v[range.start];
        head * head - dot(&v[range.start + 1..range.end], &v[range.start + 1..range.end])
    };
    let act_beta: Vec<bool> = (0..r).map(|b| quad(x, b).abs() <= act_tol).collect();
    let act_gamma: Vec<bool> =
        (0..r).map(|b| x[st.block_range(b).start].abs() <= act_tol).collect();
    let act_mu: Vec<bool> = (0..r).map(|b| quad(w, b).abs() <= act_tol).collect();
    let act_theta: Vec<bool> =
        (0..r).map(|b| w[st.block_range(b).start].abs() <= act_tol).collect();

    // reflection columns (v◦, −v•) per block
    let refl_col = |v: &[T], b: usize| -> Vec<T> {
        let mut col = vec![T::zero(); n];
        let range = st.block_range(b);
        col[range.start] = v[range.start];
        for i in range.start + 1..range.end {
            col[i] = -v[i];
        }
        col
    };

    let diff: Vec<T> = (0..n).map(|i| y[i] - nu * x[i]).collect();
    let xw = dot(x, w);
    let lhs1: Vec<T> =
        (0..n).map(|i| -T::c(2.0) * nu * diff[i] + T::c(2.0) * xw * w[i]).collect();
    let lhs2: Vec<T> = diff.iter().map(|&d| T::c(2.0) * d).collect();
    let lhs3: Vec<T> = x.iter().map(|&xi| T::c(2.0) * xw * xi).collect();

    let bx2 = p.b().contract_twice(x)?;
    let ay2 = p.a().contract_twice(y)?;

    // unknown layout: alpha(n), then active beta/gamma/mu/theta, delta, eta
    let mut col_of_beta = vec![usize::MAX; r];
    let mut col_of_gamma = vec![usize::MAX; r];
    let mut col_of_mu = vec![usize::MAX; r];
    let mut col_of_theta = vec![usize::MAX; r];
    let mut next = n;
    for b in 0..r {
        if act_beta[b] {
            col_of_beta[b] = next;
            next += 1;
        }
    }
    for b in 0..r {
        if act_gamma[b] {
            col_of_gamma[b] = next;
            next += 1;
        }
    }
    for b in 0..r {
        if act_mu[b] {
            col_of_mu[b] = next;
            next += 1;
        }
    }
    for b in 0..r {
        if act_theta[b] {
            col_of_theta[b] = next;
            next += 1;
        }
    }
    let col_delta = next;
    let col_eta = next + 1;
    let ncols = next + 2;
    let lambda_nonzero = nu.abs() > T::c(1e-12);
    let nrows = 3 * n + usize::from(lambda_nonzero);

    let mut mat = Mat::zeros(nrows, ncols);
    let mut rhs = vec![T::zero(); nrows];
    // row block 1: (m-1)(Bx^{m-2})^T alpha + 2 Chat beta + Ehat gamma + delta e = lhs1
    for i in 0..n {
        for j in 0..n {
            mat.set(i, j, m1 * bx2[j][i]);
        }
        for b in 0..r {
            if act_beta[b] {
                mat.set(i, col_of_beta[b], T::c(2.0) * refl_col(x, b)[i]);
            }
            if act_gamma[b] {
                let range = st.block_range(b);
                if i == range.start {
                    mat.set(i, col_of_gamma[b], T::one());
                }
            }
        }
        mat.set(i, col_delta, e[i]);
        rhs[i] = lhs1[i];
    }
    // row block 2: -(m-1)(Ay^{m-2})^T alpha + eta e = lhs2
    for i in 0..n {
        for j in 0..n {
            mat.set(n + i, j, -m1 * ay2[j][i]);
        }
        mat.set(n + i, col_eta, e[i]);
        rhs[n + i] = lhs2[i];
    }
    // row block 3: alpha + 2 Dhat mu + Ehat theta = lhs3
    for i in 0..n {
        mat.set(2 * n + i, i, T::one());
        for b in 0..r {
            if act_mu[b] {
                mat.set(2 * n + i, col_of_mu[b], T::c(2.0) * refl_col(w, b)[i]);
            }
            if act_theta[b] {
                let range = st.block_range(b);
                if i == range.start {
                    mat.set(2 * n + i, col_of_theta[b], T::one());
                }
            }
        }
        rhs[2 * n + i] = lhs3[i];
    }
    // scalar row: eta = x^T (y - nu x), from the lambda-derivative when
    // lambda is nonzero
    if lambda_nonzero {
        mat.set(3 * n, col_eta, T::one());
        rhs[3 * n] = dot(x, &diff);
    }

    let sol = ridge_least_squares(&mat, &rhs);
    let alpha: Vec<T> = sol[..n].to_vec();
    let pick = |cols: &[usize]| -> Vec<T> {
        cols.iter().map(|&c| if c == usize::MAX { T::zero() } else { sol[c] }).collect()
    };
    let beta = pick(&col_of_beta);
    let gamma = pick(&col_of_gamma);
    let mu = pick(&col_of_mu);
    let theta = pick(&col_of_theta);

    // delta and eta from the projected stationarity rows, so the scalar
    // identity closes exactly up to the complementarity cross terms
    let bx1_full = p.b().contract_once(x)?;
    let ay1_full = p.a().contract_once(y)?;
    let mut x_chat_beta = T::zero();
    let mut x_ehat_gamma = T::zero();
    for b in 0..r {
        let range = st.block_range(b);
        x_chat_beta = x_chat_beta + beta[b] * quad(x, b);
        x_ehat_gamma = x_ehat_gamma + gamma[b] * x[range.start];
    }
    let delta = dot(x, &lhs1)
        - m1 * dot(&bx1_full, &alpha)
        - T::c(2.0) * x_chat_beta
        - x_ehat_gamma;
    let eta = if lambda_nonzero {
        (dot(y, &lhs2) + m1 * dot(&ay1_full, &alpha)) / nu
    } else {
        sol[col_eta]
    };

    // residuals with the final multipliers
    let mut full_sol = sol.clone();
    full_sol[col_delta] = delta;
    full_sol[col_eta] = eta;
    let fitted = mat.matvec(&full_sol);
    let mut stationarity = T::zero();
    for block in 0..3 {
        let seg = &fitted[block * n..(block + 1) * n];
        let want = &rhs[block * n..(block + 1) * n];
        stationarity = stationarity.max(norm2(&sub(seg, want)));
    }
    let mut complementarity = T::zero();
    for b in 0..r {
        let range = st.block_range(b);
        complementarity = complementarity
            .max((beta[b] * quad(x, b)).abs())
            .max((gamma[b] * x[range.start]).abs())
            .max((mu[b] * quad(w, b)).abs())
            .max((theta[b] * w[range.start]).abs());
    }

    let f = pt.objective(p.order());
    let identity_residual =
        (T::c(2.0) * m1 * xw * xw + T::c(2.0) * f - delta - nu * eta).abs();

    let cert = KktCertificate {
        beta,
        gamma,
        delta,
        alpha: Some(alpha),
        mu: Some(mu),
        theta: Some(theta),
        eta: Some(eta),
        stationarity_residual: stationarity,
        complementarity_residual: complementarity,
        feasibility_residual: feas,
    };
    Ok((cert, identity_residual))
}

/// Starting point of the penalty solver.
#[derive(Debug, Clone)]
pub enum SubsymStart<T> {
    /// Lift of the cone projection of the all-ones vector at its Rayleigh
    /// quotient.
    OnesLift,
    /// Lift of the cone projection of a seeded uniform(0,1) draw.
    RandomLift(u64),
    /// A caller-provided lifted point.
    Lifted(LiftedPoint<T>),
}

#[derive(Debug, Clone)]
pub struct SubsymConfig<T> {
    /// Target on the objective: success means `f ≤ tol²` at a feasible point.
    pub tol: T,
    pub max_iter: usize,
    pub rho_init: T,
    pub rho_factor: T,
    pub rho_max: T,
    pub start: SubsymStart<T>,
}

impl<T: Real> Default for SubsymConfig<T> {
    fn default() -> Self {
        SubsymConfig {
            tol: T::c(1e-5),
            max_iter: 60_000,
            rho_init: T::c(10.0),
            rho_factor: T::c(10.0),
            rho_max: T::c(1e8),
            start: SubsymStart::OnesLift,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SubsymReport<T> {
    pub solve: SolveReport<T>,
    pub lifted: LiftedPoint<T>,
    pub equality_residual: T,
    pub rho_final: T,
}

/// Quadratic-penalty minimization of the lifted objective, projecting the
/// x and w components onto the cone after every step. Local minima with
/// `f > 0` are possible and reported with `converged = false`.
#[allow(clippy::needless_range_loop)]
pub fn subsym_solve<T: Real>(
    p: &Problem<T>,
    cfg: &SubsymConfig<T>,
) -> Result<SubsymReport<T>, SubsymError> {
    require_even(p.order())?;
    let t0 = Instant::now();
    let st = p.structure().clone();
    let n = p.dim();
    let m1 = T::from_count(p.order() - 1);
    let e: Vec<T> = st.basis_vector();

    let start = match &cfg.start {
        SubsymStart::Lifted(pt) => pt.clone(),
        SubsymStart::OnesLift => {
            let ones = vec![T::one(); n];
            let proj = crate::cone::project_cone_slice(&st, &ones);
            let lam = p.rayleigh(&proj)?;
            subsym_lift(p, &proj, lam)?
        }
        SubsymStart::RandomLift(seed) => {
            use rand::prelude::*;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(*seed);
            let z: Vec<T> = (0..n).map(|_| T::c(rng.gen_range(0.0..1.0))).collect();
            let proj = crate::cone::project_cone_slice(&st, &z);
            let lam = p.rayleigh(&proj)?;
            subsym_lift(p, &proj, lam)?
        }
    };
    // w is eliminated: it always equals Ay^{m-1} - Bx^{m-1}, so the equality
    // row holds exactly and only its cone membership is penalized
    let mut x = crate::cone::project_cone_slice(&st, start.x.values());
    let mut y = start.y.values().to_vec();
    let mut nu = odd_root(start.lambda, p.order() as u32 - 1);

    // penalty value, objective, and constraint violation at (x, y, nu)
    let eval = |x: &[T], y: &[T], nu: T, rho: T| -> Result<(T, T, T, Vec<T>), SubsymError> {
        let ay1 = p.a().contract_once(y)?;
        let bx1 = p.b().contract_once(x)?;
        let w: Vec<T> = (0..n).map(|i| ay1[i] - bx1[i]).collect();
        let diff: Vec<T> = (0..n).map(|i| y[i] - nu * x[i]).collect();
        let xw = dot(x, &w);
        let f = dot(&diff, &diff) + xw * xw;
        let wproj = crate::cone::project_cone_slice(&st, &w);
        let wdist: Vec<T> = (0..n).map(|i| w[i] - wproj[i]).collect();
        let eq2 = dot(&e, x) - T::one();
        let eq3 = dot(&e, y) - nu;
        let viol_sq = dot(&wdist, &wdist) + eq2 * eq2 + eq3 * eq3;
        Ok((f + rho * viol_sq, f, viol_sq.sqrt(), w))
    };

    let mut rho = cfg.rho_init;
    let mut iterations = 0usize;
    let mut in_stage = 0usize;
    let stage_budget = (cfg.max_iter / 16).max(500);
    // (score, x, y, nu, rho)
    type Best<T> = Option<(T, Vec<T>, Vec<T>, T, T)>;
    let mut best: Best<T> = None;
    let mut step_memory = T::c(0.1);
    while iterations < cfg.max_iter {
        if in_stage >= stage_budget && rho < cfg.rho_max {
            rho = rho * cfg.rho_factor;
            in_stage = 0;
        }
        let ay1 = p.a().contract_once(&y)?;
        let bx1 = p.b().contract_once(&x)?;
        let w: Vec<T> = (0..n).map(|i| ay1[i] - bx1[i]).collect();
        let diff: Vec<T> = (0..n).map(|i| y[i] - nu * x[i]).collect();
        let xw = dot(&x, &w);
        let wproj = crate::cone::project_cone_slice(&st, &w);
        let wdist: Vec<T> = (0..n).map(|i| w[i] - wproj[i]).collect();
        let eq2 = dot(&e, &x) - T::one();
        let eq3 = dot(&e, &y) - nu;

        let bx2 = p.b().contract_twice(&x)?;
        let ay2 = p.a().contract_twice(&y)?;
        // J_x^T v = -(m-1)(Bx^{m-2})^T v, J_y^T v = (m-1)(Ay^{m-2})^T v
        let two = T::c(2.0);
        let xw_pull_x = transpose_matvec(&bx2, &x); // (Bx^{m-2})^T x
        let xw_pull_y = transpose_matvec(&ay2, &x); // (Ay^{m-2})^T x
        let dist_pull_x = transpose_matvec(&bx2, &wdist);
        let dist_pull_y = transpose_matvec(&ay2, &wdist);

        let gx: Vec<T> = (0..n)
            .map(|i| {
                -two * nu * diff[i] + two * xw * (w[i] - m1 * xw_pull_x[i])
                    + rho * (-two * m1 * dist_pull_x[i] + two * eq2 * e[i])
            })
            .collect();
        let gy: Vec<T> = (0..n)
            .map(|i| {
                two * diff[i]
                    + two * xw * m1 * xw_pull_y[i]
                    + rho * (two * m1 * dist_pull_y[i] + two * eq3 * e[i])
            })
            .collect();
        let gnu = -two * dot(&x, &diff) - rho * two * eq3;

        let gnorm = (dot(&gx, &gx) + dot(&gy, &gy) + gnu * gnu).sqrt();
        let (p_now, f_now, viol_now, _) = eval(&x, &y, nu, rho)?;
        if best.as_ref().is_none_or(|(bf, ..)| f_now + viol_now < *bf) {
            best = Some((f_now + viol_now, x.clone(), y.clone(), nu, rho));
        }
        if f_now <= cfg.tol * cfg.tol && viol_now <= cfg.tol {
            break;
        }

        if gnorm <= T::c(1e-9) * (T::one() + p_now.abs()) {
            if rho >= cfg.rho_max {
                break;
            }
            rho = rho * cfg.rho_factor;
            in_stage = 0;
            iterations += 1;
            continue;
        }

        let mut step = step_memory * T::c(4.0);
        let mut accepted = false;
        for _ in 0..60 {
            let xs: Vec<T> = (0..n).map(|i| x[i] - step * gx[i]).collect();
            let xs = crate::cone::project_cone_slice(&st, &xs);
            let ys: Vec<T> = (0..n).map(|i| y[i] - step * gy[i]).collect();
            let nus = nu - step * gnu;
            let (p_try, _, _, _) = eval(&xs, &ys, nus, rho)?;
            if p_try <= p_now - T::c(1e-4) * step * gnorm * gnorm {
                x = xs;
                y = ys;
                nu = nus;
                accepted = true;
                step_memory = step;
                break;
            }
            step = step * T::c(0.5);
        }
        if !accepted {
            if rho >= cfg.rho_max {
                break;
            }
            rho = rho * cfg.rho_factor;
            in_stage = 0;
        }
        iterations += 1;
        in_stage += 1;
    }

    let (_, bx_, by_, bnu, brho) = best.expect("at least one evaluation");
    let (x, y_loop, nu_loop, rho) = (bx_, by_, bnu, brho);

    // final lift at the Rayleigh quotient of the reached x: this is the
    // canonical feasible point over x, zeroes both objective terms exactly,
    // and concentrates any remaining violation in the w-cone margins
    let lifted = match p.rayleigh(&x) {
        Ok(lam_r) => subsym_lift(p, &x, lam_r)?,
        Err(_) => {
            let lambda = nu_loop.powi(p.order() as i32 - 1);
            let ay1 = p.a().contract_once(&y_loop)?;
            let bx1 = p.b().contract_once(&x)?;
            let w: Vec<T> = (0..n).map(|i| ay1[i] - bx1[i]).collect();
            let f_value = subsym_objective(p, &x, &y_loop, &w, lambda)?;
            LiftedPoint {
                x: BlockVector::new(st.clone(), x).expect("length"),
                y: BlockVector::new(st.clone(), y_loop).expect("length"),
                w: BlockVector::new(st.clone(), w).expect("length"),
                lambda,
                f_value,
            }
        }
    };
    let lambda = lifted.lambda;
    let f_value = lifted.f_value;
    let w_margin_deficit = membership_margins_slice(&st, lifted.w.values())
        .into_iter()
        .map(|m| (-m).max(T::zero()))
        .fold(T::zero(), T::max);
    let nu_final = odd_root(lambda, p.order() as u32 - 1);
    let equality_residual = w_margin_deficit
        + (dot(&e, lifted.x.values()) - T::one()).abs()
        + (dot(&e, lifted.y.values()) - nu_final).abs();

    // extraction: normalized eigenvector candidate plus verification
    let nx = norm2(lifted.x.values());
    let unit: Vec<T> = lifted.x.values().iter().map(|&v| v / nx).collect();
    let report = p.residual(&unit, lambda)?;
    let verify_tol = T::c(10.0) * cfg.tol;
    let (verified, _) = p.verify(&unit, lambda, verify_tol)?;
    let converged =
        f_value <= cfg.tol * cfg.tol && equality_residual <= verify_tol && verified;

    let pair = EigenPair {
        lambda,
        x: BlockVector::new(st, unit).expect("length"),
        report,
    };
    Ok(SubsymReport {
        solve: SolveReport {
            pair,
            iterations,
            relerr_history: None,
            lambda_history: None,
            elapsed: t0.elapsed(),
            converged,
            termination: if converged { Termination::Tolerance } else { Termination::MaxIter },
        },
        lifted,
        equality_residual,
        rho_final: rho,
    })
}

/// Cone margins of the lifted point's x and w components (diagnostics).
pub fn lifted_margins<T: Real>(p: &Problem<T>, pt: &LiftedPoint<T>) -> (Vec<T>, Vec<T>) {
    (
        membership_margins_slice(p.structure(), pt.x.values()),
        membership_margins_slice(p.structure(), pt.w.values()),
    )
}
