use nalgebra::DVector;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::SolverConfig;
use crate::tensor::Sym4Form;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuarticMin {
    pub value: f64,
    pub argmin: DVector<f64>,
}

/// Riemannian gradient descent on the unit sphere with Armijo backtracking.
fn descend(e: &Sym4Form, mut x: DVector<f64>, scale: f64) -> (f64, DVector<f64>) {
    let mut f = e.quartic(&x);
    let mut step = 1.0 / scale;
    for _ in 0..20_000 {
        let g = e.quartic_gradient(&x);
        let rg = &g - &x * g.dot(&x);
        let gn2 = rg.norm_squared();
        if gn2.sqrt() <= 1e-13 * scale {
            break;
        }
        let mut accepted = false;
        for _ in 0..60 {
            let cand = (&x - &rg * step).normalize();
            let fc = e.quartic(&cand);
            if fc <= f - 1e-4 * step * gn2 {
                x = cand;
                f = fc;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
        step *= 2.0;
    }
    (f, x)
}

/// Minimum of `E(X,X,X,X)` over the unit sphere. `E` lies in the interior of
/// the cone of positive quartics iff the value is positive.
pub fn quartic_min(e: &Sym4Form, config: &SolverConfig) -> QuarticMin {
    let m = e.dim();
    let scale = e.norm().max(f64::MIN_POSITIVE);
    let mut starts: Vec<DVector<f64>> = Vec::new();
    for i in 0..m {
        starts.push(DVector::from_fn(m, |k, _| if k == i { 1.0 } else { 0.0 }));
        for j in i + 1..m {
            for s in [1.0, -1.0] {
                starts.push(DVector::from_fn(m, |k, _| if k == i { 1.0 } else if k == j { s } else { 0.0 }).normalize());
            }
        }
    }
    let fixed = starts.len();
    let results: Vec<(usize, f64, DVector<f64>)> = (0..fixed + config.multistart_count)
        .into_par_iter()
        .map(|k| {
            let x0 = if k < fixed {
                starts[k].clone()
            } else {
                let mut rng = config.rng((0x9a << 32) | (k - fixed) as u64);
                loop {
                    let v = DVector::from_fn(m, |_, _| StandardNormal.sample(&mut rng));
                    if v.norm() > 1e-8 {
                        break v.normalize();
                    }
                }
            };
            let (f, x) = descend(e, x0, scale);
            (k, f, x)
        })
        .collect();
    let (_, value, argmin) = results
        .into_iter()
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
        .expect("at least one start");
    QuarticMin { value, argmin }
}
