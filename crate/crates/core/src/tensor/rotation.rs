//! The O(m) action on tensors.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use super::biform::{AlgebraicCurvatureTensor, Biform};
use super::phi::PhiTensor;
use super::sym2::{check_dim, Sym2Form};
use super::sym4::Sym4Form;
use crate::{Error, Result};

pub const ORTHOGONALITY_TOL: f64 = 1e-10;

/// Fails with the deviation `‖q qᵀ − I‖` when it exceeds `tol`.
pub fn check_orthogonal(q: &DMatrix<f64>, tol: f64) -> Result<()> {
    if q.nrows() != q.ncols() {
        return Err(Error::InvalidInput(format!("rotation must be square, got {}x{}", q.nrows(), q.ncols())));
    }
    let dev = (q * q.transpose() - DMatrix::identity(q.nrows(), q.nrows())).norm();
    if dev > tol || !dev.is_finite() {
        return Err(Error::NotOrthogonal(dev));
    }
    Ok(())
}

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix with the
/// sign of R's diagonal fixed).
pub fn random_orthogonal<R: Rng + ?Sized>(m: usize, rng: &mut R) -> DMatrix<f64> {
    let g = DMatrix::from_fn(m, m, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..m {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// Pullback `t ↦ t(q·, q·, …)` by an orthogonal `q`.
pub trait Conjugate: Sized {
    fn conjugate(&self, q: &DMatrix<f64>) -> Result<Self>;
}

impl Conjugate for Sym2Form {
    fn conjugate(&self, q: &DMatrix<f64>) -> Result<Self> {
        check_orthogonal(q, ORTHOGONALITY_TOL)?;
        self.pullback(q)
    }
}

impl Conjugate for Biform {
    fn conjugate(&self, q: &DMatrix<f64>) -> Result<Self> {
        check_orthogonal(q, ORTHOGONALITY_TOL)?;
        check_dim(self.dim(), q.nrows())?;
        let l = Biform::lambda2(q);
        let b = l.transpose() * self.matrix() * &l;
        Ok(Biform::from_matrix_unchecked(self.dim(), (&b + b.transpose()) * 0.5))
    }
}

impl Conjugate for AlgebraicCurvatureTensor {
    fn conjugate(&self, q: &DMatrix<f64>) -> Result<Self> {
        Ok(AlgebraicCurvatureTensor::from_biform_unchecked(self.biform().conjugate(q)?))
    }
}

impl Conjugate for Sym4Form {
    fn conjugate(&self, q: &DMatrix<f64>) -> Result<Self> {
        check_orthogonal(q, ORTHOGONALITY_TOL)?;
        self.pullback(q)
    }
}

impl Conjugate for PhiTensor {
    fn conjugate(&self, q: &DMatrix<f64>) -> Result<Self> {
        check_orthogonal(q, ORTHOGONALITY_TOL)?;
        self.pullback(q)
    }
}

/// Free-function form of [`Conjugate::conjugate`].
pub fn conjugate<T: Conjugate>(t: &T, q: &DMatrix<f64>) -> Result<T> {
    t.conjugate(q)
}
