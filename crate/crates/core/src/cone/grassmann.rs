//! Optimization of biform quadratic forms over unit simple bivectors, i.e.
//! over the Grassmannian of oriented 2-planes.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::SolverConfig;
use crate::tensor::bivector::wedge_coords;
use crate::tensor::index::pairs;
use crate::tensor::{Biform, Bivector};

/// An extremal plane `span(x, y)` with `x, y` orthonormal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaneExtremum {
    pub value: f64,
    pub x: DVector<f64>,
    pub y: DVector<f64>,
}

impl PlaneExtremum {
    pub fn bivector(&self) -> Bivector {
        Bivector::wedge(&self.x, &self.y).expect("same dim")
    }
}

/// `W_x` with `W_x y = x∧y` in bivector coordinates.
fn wedge_operator(x: &DVector<f64>, p: &[(usize, usize)]) -> DMatrix<f64> {
    let m = x.len();
    let mut w = DMatrix::zeros(p.len(), m);
    for (a, &(i, j)) in p.iter().enumerate() {
        w[(a, j)] += x[i];
        w[(a, i)] -= x[j];
    }
    w
}

/// Top eigenvector of `Wᵀ M W` restricted to `x^⊥`.
fn best_partner(mat: &DMatrix<f64>, x: &DVector<f64>, p: &[(usize, usize)]) -> DVector<f64> {
    let m = x.len();
    let w = wedge_operator(x, p);
    let a = w.transpose() * mat * &w;
    let proj = DMatrix::identity(m, m) - x * x.transpose();
    let mut b = &proj * a * &proj;
    let shift = 2.0 * (b.norm() + 1.0);
    b -= x * x.transpose() * shift;
    let b = (&b + b.transpose()) * 0.5;
    let eig = SymmetricEigen::new(b);
    let k = eig.eigenvalues.imax();
    let mut y: DVector<f64> = eig.eigenvectors.column(k).into_owned();
    // Re-orthogonalize against rounding.
    y -= x * x.dot(&y);
    y.normalize()
}

fn plane_value(mat: &DMatrix<f64>, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    let s = wedge_coords(x, y);
    s.dot(&(mat * &s))
}

/// Block-coordinate ascent: alternately replace `y` (then `x`) by the best
/// partner of the other. Each step is an exact maximization over planes
/// containing the fixed vector, so the value never decreases.
fn ascend(mat: &DMatrix<f64>, mut x: DVector<f64>, mut y: DVector<f64>, p: &[(usize, usize)]) -> PlaneExtremum {
    let scale = mat.norm().max(f64::MIN_POSITIVE);
    let mut value = plane_value(mat, &x, &y);
    for _ in 0..500 {
        let y_new = best_partner(mat, &x, p);
        let x_new = best_partner(mat, &y_new, p);
        let v_new = plane_value(mat, &x_new, &y_new);
        if v_new < value {
            break;
        }
        let gain = v_new - value;
        x = x_new;
        y = y_new;
        value = v_new;
        if gain <= 1e-15 * scale {
            break;
        }
    }
    PlaneExtremum { value, x, y }
}

/// Orthonormal basis `(x, y)` of the plane of a nonzero simple bivector.
pub fn plane_of(sigma: &Bivector) -> (DVector<f64>, DVector<f64>) {
    let svd = sigma.to_skew().svd(true, false);
    let u = svd.u.expect("requested");
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let x: DVector<f64> = u.column(idx[0]).into_owned();
    let mut y: DVector<f64> = u.column(idx[1]).into_owned();
    y -= &x * x.dot(&y);
    let y = y.normalize();
    // Orient so that x∧y has the sign of sigma.
    if wedge_coords(&x, &y).dot(&sigma.as_vector()) < 0.0 {
        (x, -y)
    } else {
        (x, y)
    }
}

fn random_frame<R: Rng>(m: usize, rng: &mut R) -> (DVector<f64>, DVector<f64>) {
    loop {
        let x = DVector::from_fn(m, |_, _| rng.sample::<f64, _>(StandardNormal));
        let y = DVector::from_fn(m, |_, _| rng.sample::<f64, _>(StandardNormal));
        if x.norm() < 1e-8 {
            continue;
        }
        let x = x.normalize();
        let y = &y - &x * x.dot(&y);
        if y.norm() > 1e-8 {
            return (x, y.normalize());
        }
    }
}

/// Maximize `σᵀ M σ` over unit simple `σ` for the symmetric matrix `mat`
/// acting on Λ²(ℝ^dim).
///
/// Starts: all coordinate planes, the `hints`, and `random_starts` random
/// frames from streams `salt·2³² + k`. Ties are broken by start index so the
/// result does not depend on thread scheduling.
pub(crate) fn maximize_simple(
    mat: &DMatrix<f64>,
    dim: usize,
    hints: &[(DVector<f64>, DVector<f64>)],
    random_starts: usize,
    config: &SolverConfig,
    salt: u64,
) -> PlaneExtremum {
    let p = pairs(dim);
    let e = |i: usize| DVector::from_fn(dim, |k, _| if k == i { 1.0 } else { 0.0 });
    let mut starts: Vec<(DVector<f64>, DVector<f64>)> = p.iter().map(|&(i, j)| (e(i), e(j))).collect();
    starts.extend(hints.iter().cloned());
    let fixed = starts.len();
    let results: Vec<(usize, PlaneExtremum)> = (0..fixed + random_starts)
        .into_par_iter()
        .map(|k| {
            let (x, y) = if k < fixed {
                starts[k].clone()
            } else {
                let mut rng = config.rng((salt << 32) | (k - fixed) as u64);
                random_frame(dim, &mut rng)
            };
            (k, ascend(mat, x, y, &p))
        })
        .collect();
    results
        .into_iter()
        .max_by(|(ka, a), (kb, b)| a.value.total_cmp(&b.value).then(kb.cmp(ka)))
        .expect("at least one start")
        .1
}

/// Smallest sectional curvature of `rm` with a witnessing orthonormal pair.
pub fn min_sectional(rm: &Biform, config: &SolverConfig) -> PlaneExtremum {
    let neg = -rm.matrix();
    let mut best = maximize_simple(&neg, rm.dim(), &[], config.multistart_count, config, 0x5ec);
    best.value = -best.value;
    best
}

/// Largest sectional curvature of `rm` with a witnessing orthonormal pair.
pub fn max_sectional(rm: &Biform, config: &SolverConfig) -> PlaneExtremum {
    maximize_simple(rm.matrix(), rm.dim(), &[], config.multistart_count, config, 0x5ed)
}
