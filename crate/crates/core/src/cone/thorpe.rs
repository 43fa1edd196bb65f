use serde::{Deserialize, Serialize};

use crate::config::SolverConfig;
use crate::tensor::Biform;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThorpeShift {
    pub f_star: f64,
    pub min_eig: f64,
    /// Every `(f, λ_min(rm + f·ω))` evaluated by the search, in order.
    pub trace: Vec<(f64, f64)>,
}

fn min_eig(rm: &Biform, w: &Biform, f: f64) -> f64 {
    rm.add(&w.scale(f)).expect("same dim").spectrum()[0]
}

/// Maximize `λ_min(rm + f·ω)` over `f`, with ω the embedded volume form.
///
/// The objective is a minimum of affine functions of `f`, hence concave, and
/// it drops at unit slope once `|f| > 2‖rm‖`, which bounds the search.
pub fn thorpe_shift(rm: &Biform, config: &SolverConfig) -> Result<ThorpeShift> {
    if rm.dim() != 4 {
        return Err(Error::ThorpeDimension);
    }
    let w = Biform::four_form_embedding(4, [0, 1, 2, 3]);
    let half = 2.0 * rm.norm() + 1.0;
    let (mut a, mut b) = (-half, half);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut trace = Vec::new();
    let eval = |f: f64, trace: &mut Vec<(f64, f64)>| {
        let v = min_eig(rm, &w, f);
        trace.push((f, v));
        v
    };
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let mut fc = eval(c, &mut trace);
    let mut fd = eval(d, &mut trace);
    let iters = config.max_iterations.clamp(100, 400);
    for _ in 0..iters {
        if b - a <= 1e-13 * half {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = eval(c, &mut trace);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = eval(d, &mut trace);
        }
    }
    let f_star = 0.5 * (a + b);
    let v = eval(f_star, &mut trace);
    Ok(ThorpeShift { f_star, min_eig: v, trace })
}

/// Checks that the sampled points of a search trace are consistent with a
/// concave function whose values are known to within `tol`: after sorting
/// by `f`, consecutive slopes may increase only by what perturbing the values
/// by `tol` could explain.
pub fn trace_is_concave(trace: &[(f64, f64)], tol: f64) -> bool {
    let mut pts: Vec<(f64, f64)> = trace.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    pts.dedup_by(|a, b| a.0 == b.0);
    let slopes: Vec<(f64, f64)> = pts.windows(2).map(|p| ((p[1].1 - p[0].1) / (p[1].0 - p[0].0), p[1].0 - p[0].0)).collect();
    slopes.windows(2).all(|s| s[1].0 <= s[0].0 + 2.0 * tol / s[0].1 + 2.0 * tol / s[1].1)
}
