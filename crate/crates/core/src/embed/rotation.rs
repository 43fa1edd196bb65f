//! Rotating a normal frame so every component of the second fundamental
//! form becomes positive definite.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::tensor::{random_orthogonal, Sym2Form};
use crate::{Error, Result, SolverConfig};

/// Components `sᵢ` of `s = Σ eᵢ·sᵢ` in one orthonormal normal frame.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormalFrameProblem {
    components: Vec<Sym2Form>,
}

impl NormalFrameProblem {
    pub fn new(components: Vec<Sym2Form>) -> Result<Self> {
        let first = components.first().ok_or(Error::NoForms)?;
        if let Some(c) = components.iter().find(|c| c.dim() != first.dim()) {
            return Err(Error::DimMismatch { expected: first.dim(), got: c.dim() });
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[Sym2Form] {
        &self.components
    }

    pub fn normal_dim(&self) -> usize {
        self.components.len()
    }

    /// Components in the frame `e′_α = Σ_β R_αβ e_β`: `s′_α = Σ_β R_αβ s_β`.
    pub fn rotated(&self, r: &DMatrix<f64>) -> Vec<Sym2Form> {
        let m = self.components[0].dim();
        (0..self.normal_dim())
            .map(|a| {
                let mut acc = DMatrix::zeros(m, m);
                for (b, s) in self.components.iter().enumerate() {
                    acc += s.matrix() * r[(a, b)];
                }
                Sym2Form::new(acc).expect("combination of symmetric forms")
            })
            .collect()
    }

    /// Smallest eigenvalue among the rotated components and where it occurs.
    pub fn margin(&self, r: &DMatrix<f64>) -> (f64, Witness) {
        self.rotated(r)
            .iter()
            .enumerate()
            .map(|(k, s)| {
                let (v, x) = s.min_eigenpair();
                (v, Witness { component: k, direction: x.iter().copied().collect(), eigenvalue: v })
            })
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .expect("nonempty problem")
    }

    /// [`Self::margin`] without eigenvectors.
    fn margin_value(&self, r: &DMatrix<f64>) -> f64 {
        let m = self.components[0].dim();
        let mut worst = f64::INFINITY;
        for a in 0..self.normal_dim() {
            let mut acc = DMatrix::zeros(m, m);
            for (b, s) in self.components.iter().enumerate() {
                acc += s.matrix() * r[(a, b)];
            }
            worst = worst.min(acc.symmetric_eigenvalues().min());
        }
        worst
    }

    fn scale(&self) -> f64 {
        self.components.iter().map(|s| s.norm()).fold(0.0, f64::max)
    }
}

/// Component and unit direction attaining the smallest eigenvalue.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Witness {
    pub component: usize,
    pub direction: Vec<f64>,
    pub eigenvalue: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RotationSearchReport {
    /// `margin > strict_margin · max‖sᵢ‖`.
    pub success: bool,
    pub margin: f64,
    pub rotation: DMatrix<f64>,
    pub rotated: Vec<Sym2Form>,
    pub witness: Witness,
}

fn skew_from(params: &[f64], k: usize) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(k, k);
    let mut n = 0;
    for i in 0..k {
        for j in i + 1..k {
            a[(i, j)] = params[n];
            a[(j, i)] = -params[n];
            n += 1;
        }
    }
    a
}

/// Nelder–Mead minimization with the standard coefficients.
fn nelder_mead(f: &dyn Fn(&[f64]) -> f64, x0: &[f64], step: f64, max_evals: usize) -> (Vec<f64>, f64) {
    let n = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), f(x0)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step;
        let v = f(&x);
        simplex.push((x, v));
    }
    let mut evals = n + 1;
    let lerp = |a: &[f64], b: &[f64], t: f64| a.iter().zip(b).map(|(p, q)| p + t * (q - p)).collect::<Vec<_>>();
    while evals < max_evals {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[n].1 - simplex[0].1;
        let size = simplex[1..].iter().map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)).fold(0.0, f64::max);
        if spread <= 1e-15 * (1.0 + simplex[0].1.abs()) && size < 1e-10 {
            break;
        }
        let centroid: Vec<f64> = (0..n).map(|d| simplex[..n].iter().map(|(x, _)| x[d]).sum::<f64>() / n as f64).collect();
        let worst = simplex[n].clone();
        let refl = lerp(&centroid, &worst.0, -1.0);
        let fr = f(&refl);
        evals += 1;
        if fr < simplex[0].1 {
            let exp = lerp(&centroid, &worst.0, -2.0);
            let fe = f(&exp);
            evals += 1;
            simplex[n] = if fe < fr { (exp, fe) } else { (refl, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (refl, fr);
        } else {
            let (cx, fc) = if fr < worst.1 {
                let c = lerp(&centroid, &refl, 0.5);
                let v = f(&c);
                (c, v)
            } else {
                let c = lerp(&centroid, &worst.0, 0.5);
                let v = f(&c);
                (c, v)
            };
            evals += 1;
            if fc < worst.1.min(fr) {
                simplex[n] = (cx, fc);
            } else {
                let best = simplex[0].0.clone();
                for s in simplex.iter_mut().skip(1) {
                    s.0 = lerp(&best, &s.0, 0.5);
                    s.1 = f(&s.0);
                }
                evals += n;
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    simplex.swap_remove(0)
}

/// Local ascent from `r0`: Nelder–Mead on `R = r0·exp(A)`, restarted from
/// the best point with a shrinking simplex until the step reaches `min_step`.
fn ascend(problem: &NormalFrameProblem, r0: DMatrix<f64>, min_step: f64) -> (f64, DMatrix<f64>) {
    let k = problem.normal_dim();
    let np = k * (k - 1) / 2;
    let mut r = r0;
    let mut best = problem.margin_value(&r);
    if np == 0 {
        return (best, r);
    }
    let mut step = 0.5;
    let mut rounds = 0;
    while step >= min_step && rounds < 200 {
        rounds += 1;
        let anchor = r.clone();
        let obj = |p: &[f64]| -problem.margin_value(&(&anchor * skew_from(p, k).exp()));
        let (p, v) = nelder_mead(&obj, &vec![0.0; np], step, 200 * np);
        let moved = p.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        let improved = -v > best;
        if improved {
            best = -v;
            r = &anchor * skew_from(&p, k).exp();
        }
        if moved < step || !improved {
            step *= 0.1;
        }
    }
    (best, r)
}

/// Starts refined to full precision after the coarse pass.
const REFINED_STARTS: usize = 4;

/// Maximize `min_α λ_min(s′_α)` over `O(k)` from the identity, a reflection
/// and `multistart_count` random orthogonal starts.
pub fn frame_rotation_search(problem: &NormalFrameProblem, config: &SolverConfig) -> Result<RotationSearchReport> {
    config.validate()?;
    let k = problem.normal_dim();
    let mut starts = vec![DMatrix::identity(k, k)];
    let mut refl = DMatrix::identity(k, k);
    refl[(0, 0)] = -1.0;
    starts.push(refl);
    for s in 0..config.multistart_count as u64 {
        starts.push(random_orthogonal(k, &mut config.rng(0x0f5e_0000 | s)));
    }
    let mut coarse: Vec<(usize, f64, DMatrix<f64>)> =
        starts.into_par_iter().enumerate().map(|(i, r0)| {
            let (v, r) = ascend(problem, r0, 1e-3);
            (i, v, r)
        }).collect();
    coarse.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    coarse.truncate(REFINED_STARTS);
    let refined: Vec<(f64, DMatrix<f64>)> = coarse.into_par_iter().map(|(_, _, r)| ascend(problem, r, 1e-10)).collect();
    let (margin, rotation) = refined
        .into_iter()
        .enumerate()
        .max_by(|(i, a), (j, b)| a.0.total_cmp(&b.0).then(j.cmp(i)))
        .map(|(_, r)| r)
        .expect("at least one start");
    let (_, witness) = problem.margin(&rotation);
    Ok(RotationSearchReport {
        success: margin > config.strict_margin * problem.scale(),
        margin,
        rotated: problem.rotated(&rotation),
        rotation,
        witness,
    })
}

/// Brute force over rotations and reflections of a 2-dimensional normal
/// space on a grid of `step_degrees`. Returns the best margin and matrix.
pub fn plane_grid_search(problem: &NormalFrameProblem, step_degrees: f64) -> Result<(f64, DMatrix<f64>)> {
    if problem.normal_dim() != 2 {
        return Err(Error::InvalidInput(format!("grid search needs a 2-dimensional normal space, got {}", problem.normal_dim())));
    }
    let n = (360.0 / step_degrees).round() as usize;
    let mut best = (f64::NEG_INFINITY, DMatrix::identity(2, 2));
    for det in [1.0, -1.0] {
        for i in 0..n {
            let t = (i as f64 * step_degrees).to_radians();
            let r = DMatrix::from_row_slice(2, 2, &[t.cos(), -t.sin(), det * t.sin(), det * t.cos()]);
            let m = problem.margin_value(&r);
            if m > best.0 {
                best = (m, r);
            }
        }
    }
    Ok(best)
}

/// Direction vectors as unit `DVector`s, checked to 1e-8.
fn unit_vectors(sample: &[Vec<f64>]) -> Result<Vec<DVector<f64>>> {
    sample
        .iter()
        .map(|v| {
            let d = DVector::from_column_slice(v);
            if (d.norm() - 1.0).abs() > 1e-8 {
                Err(Error::InvalidInput(format!("normal {v:?} is not unit (norm {})", d.norm())))
            } else {
                Ok(d)
            }
        })
        .collect()
}

/// Largest pairwise inner product of normals at one sample point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ObtuseCheck {
    pub holds: bool,
    /// `(sample, i, j, ⟨nᵢ, nⱼ⟩)` for the least obtuse pair.
    pub worst: Option<(usize, usize, usize, f64)>,
}

/// Every pair of normals at every sample meets at an obtuse angle.
pub fn obtuse_normals_check(samples: &[Vec<Vec<f64>>]) -> Result<ObtuseCheck> {
    let mut worst: Option<(usize, usize, usize, f64)> = None;
    for (p, sample) in samples.iter().enumerate() {
        let n = unit_vectors(sample)?;
        for i in 0..n.len() {
            for j in i + 1..n.len() {
                if n[i].len() != n[j].len() {
                    return Err(Error::DimMismatch { expected: n[i].len(), got: n[j].len() });
                }
                let d = n[i].dot(&n[j]);
                if worst.is_none_or(|w| d > w.3) {
                    worst = Some((p, i, j, d));
                }
            }
        }
    }
    Ok(ObtuseCheck { holds: worst.is_none_or(|w| w.3 < 0.0), worst })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn already_positive() {
        let p = NormalFrameProblem::new(vec![Sym2Form::diag(&[2.0, 1.0]), Sym2Form::diag(&[1.0, 2.0])]).unwrap();
        let r = frame_rotation_search(&p, &SolverConfig::rotation_search()).unwrap();
        assert!(r.success);
        assert!(r.margin >= 1.0 - 1e-12);
    }

    #[test]
    fn indefinite_fails() {
        let p = NormalFrameProblem::new(vec![Sym2Form::diag(&[1.0, -1.0]), Sym2Form::zeros(2)]).unwrap();
        let r = frame_rotation_search(&p, &SolverConfig::rotation_search()).unwrap();
        assert!(!r.success);
        assert!(r.margin < 0.0);
        assert!(r.witness.eigenvalue <= r.margin + 1e-15);
    }

    #[test]
    fn obtuse_examples() {
        let eps = 1e-3;
        let v = DVector::from_vec(vec![-1.0, eps]).normalize();
        assert!(obtuse_normals_check(&[vec![vec![1.0, 0.0], vec![v[0], v[1]]]]).unwrap().holds);
        let right = obtuse_normals_check(&[vec![vec![1.0, 0.0], vec![0.0, 1.0]]]).unwrap();
        assert!(!right.holds && right.worst.unwrap().3 == 0.0);
        let third = |k: f64| {
            let t = k * std::f64::consts::TAU / 3.0 + 0.1;
            vec![t.cos(), t.sin()]
        };
        assert!(obtuse_normals_check(&[vec![third(0.0), third(1.0), third(2.0)]]).unwrap().holds);
        assert!(obtuse_normals_check(&[vec![vec![2.0, 0.0]]]).is_err());
    }
}
