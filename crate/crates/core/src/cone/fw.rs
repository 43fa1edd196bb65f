//! Fully corrective Frank–Wolfe for projecting onto a conic hull of unit
//! atoms, with dual certificates.
//!
//! Everything runs on packed coordinates whose Euclidean inner product is
//! the tensor inner product. Each iteration asks the family for the atom
//! most aligned with the residual, then re-solves NNLS over all active atoms.

use nalgebra::{DMatrix, DVector};

use super::certificate::{Generator, TraceRow};
use crate::config::SolverConfig;

pub(crate) struct Atom {
    pub vec: DVector<f64>,
    /// `⟨g, vec⟩` for the direction the oracle was asked about.
    pub value: f64,
    pub generator: Generator,
}

pub(crate) trait AtomFamily: Sync {
    /// Approximately maximize `⟨g, atom⟩` over unit atoms. `active` lists the
    /// generators currently in use (useful as warm starts).
    fn lmo(&self, g: &DVector<f64>, active: &[Generator], starts: usize, salt: u64) -> Atom;

    /// Packed `E` with `⟨E, atom⟩ ≥ 1` for every unit atom.
    fn repair_direction(&self) -> DVector<f64>;

    /// Packed unit atom of a generator.
    fn atom_of(&self, generator: &Generator) -> DVector<f64>;

    /// Optional local refinement of the active set; see `polish`.
    fn polish(&self, _target: &DVector<f64>, _atoms: &[(f64, Generator)], _current: f64) -> Option<Vec<(f64, Generator)>> {
        None
    }
}

pub(crate) struct FwOutcome {
    pub atoms: Vec<(f64, Generator)>,
    pub projection: DVector<f64>,
    /// Relative residual `‖t − p‖ / ‖t‖`.
    pub residual: f64,
    pub iterations: usize,
    pub trace: Vec<TraceRow>,
    /// Best dual candidate, packed and normalized, with its distance bound.
    pub dual: Option<(DVector<f64>, f64)>,
}

/// Repaired dual `G' = −r/‖r‖ + δE` and the relative distance bound it implies.
pub(crate) fn repaired_dual(r: &DVector<f64>, lmo_value: f64, repair: &DVector<f64>, target: &DVector<f64>) -> (DVector<f64>, f64) {
    let rn = r.norm();
    let delta = (lmo_value / rn).max(0.0) * (1.0 + 1e-9) + 1e-15;
    let g = -r / rn + repair * delta;
    let g = &g / g.norm();
    let bound = -g.dot(target) / target.norm();
    (g, bound)
}

pub(crate) fn conic_fw<F: AtomFamily>(target: &DVector<f64>, family: &F, config: &SolverConfig) -> FwOutcome {
    let tnorm = target.norm();
    let n = target.len();
    let mut out = FwOutcome {
        atoms: Vec::new(),
        projection: DVector::zeros(n),
        residual: if tnorm > 0.0 { 1.0 } else { 0.0 },
        iterations: 0,
        trace: Vec::new(),
        dual: None,
    };
    if tnorm == 0.0 {
        return out;
    }
    let repair = family.repair_direction();
    let mut vecs: Vec<DVector<f64>> = Vec::new();
    let mut gens: Vec<Generator> = Vec::new();
    let mut weights = DVector::<f64>::zeros(0);
    let mut r = target.clone();
    let mut stall = 0usize;

    for it in 1..=config.max_iterations {
        out.iterations = it;
        let atom = family.lmo(&r, &gens, config.multistart_count, it as u64);
        let (g, bound) = repaired_dual(&r, atom.value, &repair, target);
        if out.dual.as_ref().is_none_or(|(_, b)| bound > *b) {
            out.dual = Some((g, bound));
        }
        let best_bound = out.dual.as_ref().map_or(f64::NEG_INFINITY, |d| d.1);
        if out.residual - best_bound <= config.tol || atom.value <= 1e-14 * r.norm() {
            break;
        }
        let duplicate = vecs.iter().any(|v| v.dot(&atom.vec) > 1.0 - 1e-13);
        if duplicate {
            break;
        }
        vecs.push(atom.vec);
        gens.push(atom.generator);
        let a = DMatrix::from_columns(&vecs);
        let mut x0 = weights.clone().insert_row(weights.len(), 0.0);
        if x0.len() != vecs.len() {
            x0 = DVector::zeros(vecs.len());
        }
        let w = super::nnls::nnls(&a, target, Some(&x0));
        let p = &a * &w;
        let res_new = (target - &p).norm() / tnorm;
        // Warm-started NNLS is a descent method; guard against rounding.
        debug_assert!(res_new <= out.residual * (1.0 + 1e-9) + 1e-15, "FW residual increased");
        if res_new > out.residual {
            vecs.pop();
            gens.pop();
            break;
        }
        let step = *w.as_slice().last().unwrap();
        // Drop atoms whose weight vanished.
        let keep: Vec<usize> = (0..w.len()).filter(|&j| w[j] > 0.0).collect();
        vecs = keep.iter().map(|&j| vecs[j].clone()).collect();
        gens = keep.iter().map(|&j| gens[j].clone()).collect();
        weights = DVector::from_iterator(keep.len(), keep.iter().map(|&j| w[j]));
        let mut res_new = res_new;
        let mut p = p;
        if res_new > config.tol {
            let active: Vec<(f64, Generator)> = weights.iter().copied().zip(gens.iter().cloned()).collect();
            if let Some(moved) = family.polish(target, &active, res_new * tnorm) {
                let mv: Vec<DVector<f64>> = moved.iter().map(|(_, g)| family.atom_of(g)).collect();
                let a = DMatrix::from_columns(&mv);
                let w0 = DVector::from_iterator(moved.len(), moved.iter().map(|(w, _)| *w));
                let w = super::nnls::nnls(&a, target, Some(&w0));
                let pm = &a * &w;
                let rm = (target - &pm).norm() / tnorm;
                if rm < res_new {
                    let keep: Vec<usize> = (0..w.len()).filter(|&j| w[j] > 0.0).collect();
                    vecs = keep.iter().map(|&j| mv[j].clone()).collect();
                    gens = keep.iter().map(|&j| moved[j].1.clone()).collect();
                    weights = DVector::from_iterator(keep.len(), keep.iter().map(|&j| w[j]));
                    res_new = rm;
                    p = pm;
                }
            }
        }
        let gain = out.residual - res_new;
        out.residual = res_new;
        out.projection = p;
        r = target - &out.projection;
        if config.trace {
            out.trace.push(TraceRow { iteration: it, residual: res_new, step_size: step });
        }
        if res_new <= config.tol {
            break;
        }
        stall = if gain <= 1e-13 * res_new { stall + 1 } else { 0 };
        if stall >= 25 {
            break;
        }
    }
    out.atoms = weights.iter().copied().zip(gens).collect();
    out
}
