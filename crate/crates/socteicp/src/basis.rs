//! The compact basis `K₀ = {x ∈ K : e^⊤x = 1}` and the natural residual of
//! the variational inequality VIP(F, K₀).
//!
//! Projection onto `K₀` runs Dykstra's alternating scheme between the cone
//! (closed-form blockwise) and the hyperplane (closed-form affine), which
//! converges to the exact intersection projection.

use crate::cone::{membership_margins_slice, project_cone_slice, ConeStructure};
use crate::linalg::{dot, norm2, sub};
use crate::problem::{Problem, ProblemError};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BasisError {
    #[error("Dykstra projection did not settle within {0} cycles")]
    MaxIterExceeded(usize),
    #[error("point is not on the basis K0: |e^T x - 1| = {off_hyperplane:e}, min margin = {min_margin:e}")]
    NotOnBasis { off_hyperplane: f64, min_margin: f64 },
    #[error(transparent)]
    Problem(#[from] ProblemError),
}

/// The basis set `K₀` of a cone structure.
#[derive(Debug, Clone)]
pub struct BasisSet {
    structure: ConeStructure,
}

impl BasisSet {
    pub fn new(structure: ConeStructure) -> Self {
        BasisSet { structure }
    }

    pub fn structure(&self) -> &ConeStructure {
        &self.structure
    }

    pub fn contains<T: Real>(&self, x: &[T], tol: T) -> bool {
        let e: Vec<T> = self.structure.basis_vector();
        let margins = membership_margins_slice(&self.structure, x);
        (dot(&e, x) - T::one()).abs() <= tol && margins.iter().all(|&m| m >= -tol)
    }

    pub fn project<T: Real>(&self, x: &[T], tol: T) -> Result<Vec<T>, BasisError> {
        project_basis(x, &self.structure, tol)
    }
}

const DYKSTRA_CYCLE_CAP: usize = 100_000;

/// Dykstra projection of `x` onto `K ∩ {e^⊤x = 1}`; iterates until one full
/// cycle moves the point by at most `tol`.
pub fn project_basis<T: Real>(
    x: &[T],
    structure: &ConeStructure,
    tol: T,
) -> Result<Vec<T>, BasisError> {
    debug_assert_eq!(x.len(), structure.total());
    let e: Vec<T> = structure.basis_vector();
    let r = T::from_count(structure.num_blocks());
    let n = x.len();
    let mut y = x.to_vec();
    let mut p = vec![T::zero(); n];
    let mut q = vec![T::zero(); n];
    for _ in 0..DYKSTRA_CYCLE_CAP {
        let yp: Vec<T> = y.iter().zip(&p).map(|(&a, &b)| a + b).collect();
        let y1 = project_cone_slice(structure, &yp);
        for i in 0..n {
            p[i] = yp[i] - y1[i];
        }
        let wq: Vec<T> = y1.iter().zip(&q).map(|(&a, &b)| a + b).collect();
        // affine projection onto {e^T v = 1}: v + (1 - e.v)/r * e
        let shift = (T::one() - dot(&e, &wq)) / r;
        let y2: Vec<T> = wq.iter().zip(&e).map(|(&v, &ei)| v + shift * ei).collect();
        for i in 0..n {
            q[i] = wq[i] - y2[i];
        }
        // stop only when the cycle is stationary AND the two per-set
        // projections agree; the iterate distance alone can vanish while
        // the increments are still moving
        let moved = norm2(&sub(&y2, &y)).max(norm2(&sub(&y2, &y1)));
        y = y2;
        if moved <= tol {
            return Ok(y);
        }
    }
    Err(BasisError::MaxIterExceeded(DYKSTRA_CYCLE_CAP))
}

/// Natural residual `‖x − Π_{K₀}(x − F(x))‖` of VIP(F, K₀) at a point of the
/// basis; zero exactly at VI solutions up to the projection tolerance.
pub fn vi_residual<T: Real>(p: &Problem<T>, x: &[T]) -> Result<T, BasisError> {
    let basis = BasisSet::new(p.structure().clone());
    let feas_tol = T::c(1e-8);
    if !basis.contains(x, feas_tol) {
        let e: Vec<T> = p.structure().basis_vector();
        let margins = membership_margins_slice(p.structure(), x);
        return Err(BasisError::NotOnBasis {
            off_hyperplane: (dot(&e, x) - T::one()).abs().to_f64().unwrap_or(f64::NAN),
            min_margin: margins
                .iter()
                .cloned()
                .fold(T::infinity(), T::min)
                .to_f64()
                .unwrap_or(f64::NAN),
        });
    }
    let f = p.eicp_map(x)?;
    let shifted: Vec<T> = x.iter().zip(&f).map(|(&xi, &fi)| xi - fi).collect();
    let proj = project_basis(&shifted, p.structure(), T::c(1e-12))?;
    Ok(norm2(&sub(x, &proj)))
}
