//! Small dense vector/matrix helpers shared by the solvers.

use crate::scalar::Real;

pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

pub fn norm2<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

pub fn axpy<T: Real>(alpha: T, x: &[T], y: &mut [T]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = *yi + alpha * xi;
    }
}

pub fn scaled<T: Real>(alpha: T, x: &[T]) -> Vec<T> {
    x.iter().map(|&v| alpha * v).collect()
}

pub fn sub<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

/// Dense row-major matrix, just enough for the certificate solvers.
#[derive(Debug, Clone)]
pub struct Mat<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
}

impl<T: Real> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> T {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        debug_assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| dot(&self.data[r * self.cols..(r + 1) * self.cols], x))
            .collect()
    }

    #[allow(clippy::needless_range_loop)]
    pub fn transpose_matvec(&self, x: &[T]) -> Vec<T> {
        debug_assert_eq!(x.len(), self.rows);
        let mut out = vec![T::zero(); self.cols];
        for r in 0..self.rows {
            let xr = x[r];
            for c in 0..self.cols {
                out[c] = out[c] + self.at(r, c) * xr;
            }
        }
        out
    }
}

/// Least-squares solve of `A x = b` by ridge-regularized normal equations.
///
/// The certificate systems are small (tens of unknowns) and can be rank
/// deficient when a multiplier column degenerates (e.g. a zero cone block),
/// so a tiny ridge keeps the solve well posed and pulls the unconstrained
/// components to zero.
pub fn ridge_least_squares<T: Real>(a: &Mat<T>, b: &[T]) -> Vec<T> {
    let n = a.cols;
    let mut ata = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut s = T::zero();
            for r in 0..a.rows {
                s = s + a.at(r, i) * a.at(r, j);
            }
            ata.set(i, j, s);
        }
    }
    let mut trace = T::zero();
    for i in 0..n {
        trace = trace + ata.at(i, i);
    }
    let ridge = T::c(1e-12) * (T::one() + trace / T::from_count(n.max(1)));
    for i in 0..n {
        ata.set(i, i, ata.at(i, i) + ridge);
    }
    let atb = a.transpose_matvec(b);
    cholesky_solve(&mut ata, &atb)
}

/// Solve s.p.d. `M x = b` in place via Cholesky.
fn cholesky_solve<T: Real>(m: &mut Mat<T>, b: &[T]) -> Vec<T> {
    let n = m.rows;
    for j in 0..n {
        for k in 0..j {
            let mjk = m.at(j, k);
            for i in j..n {
                let v = m.at(i, j) - m.at(i, k) * mjk;
                m.set(i, j, v);
            }
        }
        let d = m.at(j, j).max(T::c(1e-300)).sqrt();
        for i in j..n {
            m.set(i, j, m.at(i, j) / d);
        }
    }
    // forward then backward substitution with the lower factor
    let mut y = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            y[i] = y[i] - m.at(i, k) * y[k];
        }
        y[i] = y[i] / m.at(i, i);
    }
    for i in (0..n).rev() {
        for k in i + 1..n {
            y[i] = y[i] - m.at(k, i) * y[k];
        }
        y[i] = y[i] / m.at(i, i);
    }
    y
}
