//! Local refinement of an active set ("sliding" step): Levenberg–Marquardt on
//! unconstrained factor parameters of all atoms jointly.
//!
//! Atom `j` with weight `μ_j` is written as a polynomial map `a(θ_j)` that
//! absorbs the weight (e.g. `u uᵀ` with `u = √μ·σ`), so the problem
//! `min ‖t − Σ_j a(θ_j)‖²` has no constraints.

use nalgebra::{DMatrix, DVector};

use super::certificate::Generator;

pub(crate) trait Factorized {
    fn params_of(&self, weight: f64, generator: &Generator) -> DVector<f64>;
    /// Packed atom (weight included) and its Jacobian in θ.
    fn eval(&self, theta: &DVector<f64>) -> (DVector<f64>, DMatrix<f64>);
    /// Back to a unit generator and its weight.
    fn generator_of(&self, theta: &DVector<f64>) -> Option<(f64, Generator)>;
}

fn model(f: &impl Factorized, target: &DVector<f64>, thetas: &[DVector<f64>]) -> (DVector<f64>, DMatrix<f64>) {
    let n = target.len();
    let q: usize = thetas.iter().map(|t| t.len()).sum();
    let mut r = target.clone();
    let mut jac = DMatrix::zeros(n, q);
    let mut col = 0;
    for t in thetas {
        let (a, j) = f.eval(t);
        r -= a;
        jac.view_mut((0, col), (n, t.len())).copy_from(&j);
        col += t.len();
    }
    (r, jac)
}

fn residual(f: &impl Factorized, target: &DVector<f64>, thetas: &[DVector<f64>]) -> f64 {
    let mut r = target.clone();
    for t in thetas {
        r -= f.eval(t).0;
    }
    r.norm()
}

/// Runs up to `steps` LM iterations; returns the refined atoms only if the
/// residual strictly improved on `current`.
pub(crate) fn polish(
    f: &impl Factorized,
    target: &DVector<f64>,
    atoms: &[(f64, Generator)],
    current: f64,
    steps: usize,
) -> Option<(Vec<(f64, Generator)>, f64)> {
    if atoms.is_empty() {
        return None;
    }
    let mut thetas: Vec<DVector<f64>> = atoms.iter().map(|(w, g)| f.params_of(*w, g)).collect();
    let sizes: Vec<usize> = thetas.iter().map(|t| t.len()).collect();
    let mut res = residual(f, target, &thetas);
    let start = res;
    let mut lambda = 1e-3;
    for _ in 0..steps {
        let (r, j) = model(f, target, &thetas);
        let (n, q) = j.shape();
        let jtj_scale = j.norm_squared() / q as f64;
        let mut improved = false;
        for _ in 0..12 {
            let mu = lambda * jtj_scale.max(1e-300);
            // Solve the damped normal equations in whichever space is smaller.
            let delta = if q <= n {
                let a = j.transpose() * &j + DMatrix::identity(q, q) * mu;
                a.cholesky().map(|c| c.solve(&(j.transpose() * &r)))
            } else {
                let a = &j * j.transpose() + DMatrix::identity(n, n) * mu;
                a.cholesky().map(|c| j.transpose() * c.solve(&r))
            };
            let Some(delta) = delta else {
                lambda *= 10.0;
                continue;
            };
            let mut off = 0;
            let trial: Vec<DVector<f64>> = thetas
                .iter()
                .zip(&sizes)
                .map(|(t, &s)| {
                    let d = t + delta.rows(off, s);
                    off += s;
                    d
                })
                .collect();
            let tr = residual(f, target, &trial);
            if tr < res {
                thetas = trial;
                let gain = res - tr;
                res = tr;
                lambda = (lambda / 3.0).max(1e-12);
                improved = gain > 1e-15 * start;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    if !(res < current) {
        return None;
    }
    let atoms: Option<Vec<_>> = thetas.iter().map(|t| f.generator_of(t)).collect();
    atoms.map(|a| (a, res))
}
