use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::frame::LinearFormFrame;
use crate::{Error, Result};

/// A smooth map `ℝ^q → ℝ^{q′}` sampled by the finite-difference probes.
pub trait SmoothMap: Sync {
    fn source_dim(&self) -> usize;
    fn target_dim(&self) -> usize;
    fn eval(&self, x: &DVector<f64>) -> DVector<f64>;
}

/// `x ↦ A x + t`.
#[derive(Debug, Clone)]
pub struct AffineMap {
    pub matrix: DMatrix<f64>,
    pub offset: DVector<f64>,
}

impl AffineMap {
    pub fn linear(matrix: DMatrix<f64>) -> Self {
        let offset = DVector::zeros(matrix.nrows());
        Self { matrix, offset }
    }
}

impl SmoothMap for AffineMap {
    fn source_dim(&self) -> usize {
        self.matrix.ncols()
    }

    fn target_dim(&self) -> usize {
        self.matrix.nrows()
    }

    fn eval(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.matrix * x + &self.offset
    }
}

/// Powers of two tried for `b` by [`make_twist`].
pub const B_SCHEDULE: [f64; 7] = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0];

/// `x ↦ (Lx, τ₁(x), …, τₙ(x))` with `τᵢ(x) = (a sin(b lᵢ(x)), a cos(b lᵢ(x)))`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TwistMap {
    pub frame: LinearFormFrame,
    pub a: f64,
    pub b: f64,
    /// Symmetric PSD square root of `I − a²b² Σ lᵢlᵢᵀ`.
    pub linear: DMatrix<f64>,
}

/// Uniform amplitudes with `a²b⁴λ = c`, taking the first `b` of
/// [`B_SCHEDULE`] with `a²b²‖Σ lᵢlᵢᵀ‖ ≤ ½`.
pub fn make_twist(frame: &LinearFormFrame, c: f64) -> Result<TwistMap> {
    if !(c >= 0.0 && c.is_finite()) {
        return Err(Error::InfeasibleTwist(format!("target constant must be a finite c ≥ 0, got {c}")));
    }
    let g = SymmetricEigen::new(frame.gram()).eigenvalues.max();
    for &b in &B_SCHEDULE {
        let a2 = c / (frame.lambda * b.powi(4));
        if a2 * b * b * g <= 0.5 {
            return make_twist_with(frame, a2.sqrt(), b);
        }
    }
    Err(Error::InfeasibleTwist(format!(
        "c = {c} needs b > {}; pass a larger frequency to make_twist_with",
        B_SCHEDULE[B_SCHEDULE.len() - 1]
    )))
}

/// Explicit parameters; needs `a²b² Σ lᵢlᵢᵀ ≤ I`.
pub fn make_twist_with(frame: &LinearFormFrame, a: f64, b: f64) -> Result<TwistMap> {
    if !(a >= 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::InfeasibleTwist(format!("need a ≥ 0 and b > 0, got a = {a}, b = {b}")));
    }
    let q = frame.dim;
    let m = DMatrix::identity(q, q) - frame.gram() * (a * a * b * b);
    let eig = SymmetricEigen::new(m);
    let lo = eig.eigenvalues.min();
    if lo < -1e-12 {
        return Err(Error::InfeasibleTwist(format!("I − a²b²Σ lᵢlᵢᵀ has eigenvalue {lo:e} < 0; increase b")));
    }
    let root = DMatrix::from_diagonal(&eig.eigenvalues.map(|v| v.max(0.0).sqrt()));
    let l = &eig.eigenvectors * root * eig.eigenvectors.transpose();
    Ok(TwistMap { frame: frame.clone(), a, b, linear: (&l + l.transpose()) * 0.5 })
}

impl TwistMap {
    /// `a²b⁴λ`.
    pub fn c(&self) -> f64 {
        self.a * self.a * self.b.powi(4) * self.frame.lambda
    }

    /// Closed form `Σ a²b⁴ lᵢ(X)⁴`.
    pub fn exact_e(&self, x: &DVector<f64>) -> f64 {
        self.a * self.a * self.b.powi(4) * self.frame.quartic(x)
    }
}

impl SmoothMap for TwistMap {
    fn source_dim(&self) -> usize {
        self.frame.dim
    }

    fn target_dim(&self) -> usize {
        self.frame.dim + 2 * self.frame.len()
    }

    fn eval(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut out = Vec::with_capacity(self.target_dim());
        out.extend((&self.linear * x).iter());
        for f in self.frame.forms() {
            let t = self.b * f.dot(x);
            out.push(self.a * t.sin());
            out.push(self.a * t.cos());
        }
        DVector::from_vec(out)
    }
}

#[cfg(test)]
mod tests {
    use super::super::frame::fourth_power_frame;
    use super::*;

    #[test]
    fn constraint_algebra() {
        let f = fourth_power_frame(2, false).unwrap();
        let t = make_twist(&f, 1.0).unwrap();
        assert!((t.c() - 1.0).abs() < 1e-14);
        let t2 = make_twist_with(&f, t.a / 4.0, 2.0 * t.b).unwrap();
        assert!((t2.c() - 1.0).abs() < 1e-14);
        assert!((t2.a * t2.a - t.a * t.a / 16.0).abs() < 1e-15);
        let z = make_twist(&f, 0.0).unwrap();
        assert_eq!(z.a, 0.0);
        assert!((&z.linear - DMatrix::identity(2, 2)).norm() < 1e-15);
        assert!(matches!(make_twist(&f, 1e7), Err(Error::InfeasibleTwist(_))));
    }
}
