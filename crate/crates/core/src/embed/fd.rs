//! Finite-difference probes of induced metric and second fundamental form.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::twist::SmoothMap;
use crate::tensor::{decompose_phi, phi_from_forms, PhiTensor, Sym2Form, Sym4Form};
use crate::{Error, Result};

fn check_step(h: f64) -> Result<()> {
    if (1e-6..=1e-2).contains(&h) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("step must lie in [1e-6, 1e-2], got {h}")))
    }
}

fn check_point(map: &dyn SmoothMap, x: &DVector<f64>) -> Result<()> {
    if x.len() != map.source_dim() {
        return Err(Error::DimMismatch { expected: map.source_dim(), got: x.len() });
    }
    Ok(())
}

/// Central-difference Jacobian, `target × source`.
pub fn numeric_jacobian(map: &dyn SmoothMap, x: &DVector<f64>, h: f64) -> DMatrix<f64> {
    let q = map.source_dim();
    let mut j = DMatrix::zeros(map.target_dim(), q);
    for i in 0..q {
        let mut e = DVector::zeros(q);
        e[i] = h;
        j.set_column(i, &((map.eval(&(x + &e)) - map.eval(&(x - &e))) / (2.0 * h)));
    }
    j
}

/// `JᵀJ` from the central-difference Jacobian.
pub fn numeric_metric(map: &dyn SmoothMap, x: &DVector<f64>, h: f64) -> Result<Sym2Form> {
    check_step(h)?;
    check_point(map, x)?;
    let j = numeric_jacobian(map, x, h);
    Sym2Form::new(j.transpose() * j)
}

/// Second difference `∂ᵢ∂ⱼ f`, vector-valued.
fn hessian_entries(map: &dyn SmoothMap, x: &DVector<f64>, h: f64) -> Vec<DVector<f64>> {
    let q = map.source_dim();
    let unit = |i: usize| {
        let mut e = DVector::zeros(q);
        e[i] = h;
        e
    };
    let f0 = map.eval(x);
    let mut out = Vec::new();
    for i in 0..q {
        for j in i..q {
            let d = if i == j {
                let e = unit(i);
                (map.eval(&(x + &e)) - &f0 * 2.0 + map.eval(&(x - &e))) / (h * h)
            } else {
                let (ei, ej) = (unit(i), unit(j));
                (map.eval(&(x + &ei + &ej)) - map.eval(&(x + &ei - &ej)) - map.eval(&(x - &ei + &ej)) + map.eval(&(x - &ei - &ej)))
                    / (4.0 * h * h)
            };
            out.push(d);
        }
    }
    out
}

fn stack_norm(v: &[DVector<f64>]) -> f64 {
    v.iter().map(|d| d.norm_squared()).sum::<f64>().sqrt()
}

/// Output of [`numeric_e`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NumericE {
    pub e: Sym4Form,
    pub phi: PhiTensor,
    /// `‖D(h) − D(h/2)‖ / ‖D(h/2) − D(h/4)‖`; 4 for clean second-order
    /// truncation, `None` when both differences are below `1e-7·(|f(x)| + 1)`.
    pub richardson_ratio: Option<f64>,
}

/// Normal part of the Hessian `s(eᵢ, eⱼ)` on steps `h, h/2, h/4`, combined
/// by two rounds of Richardson extrapolation. The forms in the returned Φ
/// are the ambient coordinates of `s`, so `Φ = ⟨s, s⟩` and `E` is its
/// total symmetrization.
pub fn numeric_e(map: &dyn SmoothMap, x: &DVector<f64>, h: f64) -> Result<NumericE> {
    check_step(h)?;
    check_point(map, x)?;
    let q = map.source_dim();
    let steps = [h, h / 2.0, h / 4.0];
    let d: Vec<Vec<DVector<f64>>> = steps.iter().map(|&s| hessian_entries(map, x, s)).collect();

    let fscale = map.eval(x).norm() + 1.0;
    let d01: Vec<_> = d[0].iter().zip(&d[1]).map(|(a, b)| a - b).collect();
    let d12: Vec<_> = d[1].iter().zip(&d[2]).map(|(a, b)| a - b).collect();
    let (n01, n12) = (stack_norm(&d01), stack_norm(&d12));
    // Differences this small do not move the result; skip the ratio test.
    let floor = 1e-7 * fscale;
    let richardson_ratio = if n01.max(n12) <= floor {
        None
    } else {
        let rho = n01 / n12;
        if !(0.4..=40.0).contains(&rho) {
            return Err(Error::NoiseDominated(format!(
                "successive second differences shrink by {rho:.3} (expected ≈ 4); use a larger step than {h}"
            )));
        }
        Some(rho)
    };
    let extrap: Vec<DVector<f64>> = (0..d[0].len())
        .map(|k| {
            let r1 = &d[1][k] + (&d[1][k] - &d[0][k]) / 3.0;
            let r2 = &d[2][k] + (&d[2][k] - &d[1][k]) / 3.0;
            &r2 + (&r2 - &r1) / 15.0
        })
        .collect();

    // Tangent space from the extrapolated Jacobian.
    let j1 = numeric_jacobian(map, x, steps[1]);
    let j2 = numeric_jacobian(map, x, steps[2]);
    let j = &j2 + (&j2 - &j1) / 3.0;
    let qr = j.qr();
    let basis = qr.q();
    let normal = |v: &DVector<f64>| v - &basis * (basis.transpose() * v);
    let s: Vec<DVector<f64>> = extrap.iter().map(normal).collect();

    let n = map.target_dim();
    let mut forms = Vec::with_capacity(n);
    for alpha in 0..n {
        let mut m = DMatrix::zeros(q, q);
        let mut k = 0;
        for i in 0..q {
            for jx in i..q {
                m[(i, jx)] = s[k][alpha];
                m[(jx, i)] = s[k][alpha];
                k += 1;
            }
        }
        forms.push(Sym2Form::new(m)?);
    }
    let phi = phi_from_forms(&forms)?;
    let (e, _) = decompose_phi(&phi);
    Ok(NumericE { e, phi, richardson_ratio })
}
