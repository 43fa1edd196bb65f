//! Cones generated by `s⊗s` (inside S²(S²)) and `s∘²` (inside S⁴) over
//! positive semidefinite forms `s`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::certificate::{ConicCertificate, DualCheck, DualFunctional, Generator, Verdict, WeightedGenerator};
use super::cosec::verification_config;
use super::cosec::POLISH_STEPS;
use super::fw::{conic_fw, Atom, AtomFamily};
use super::polish::{polish, Factorized};
use crate::config::SolverConfig;
use crate::embed::{frame_rotation_search, NormalFrameProblem};
use crate::tensor::biform::{pack_symmetric, unpack_symmetric};
use crate::tensor::index::sym_pair_count;
use crate::tensor::{PhiTensor, Sym2Form, Sym4Form};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Ambient {
    Phi,
    Sym4,
}

/// Nearest PSD matrix in Frobenius norm.
pub fn project_psd(a: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = SymmetricEigen::new((a + a.transpose()) * 0.5);
    let clipped = eig.eigenvalues.map(|l| l.max(0.0));
    let v = &eig.eigenvectors;
    let r = v * DMatrix::from_diagonal(&clipped) * v.transpose();
    (&r + r.transpose()) * 0.5
}

fn form_of(dim: usize, coords: &DVector<f64>) -> Sym2Form {
    Sym2Form::from_coords(dim, coords).expect("sized by sym_pair_count")
}

/// Projected power ascent for `max sᵀ M s` over unit PSD `s` (in S² coordinates).
///
/// With `M + αI ⪰ 0` the objective is convex on the unit ball, and each step
/// maximizes its linearization over PSD ∩ ball exactly (normalized PSD part
/// of the gradient), so the value is non-decreasing.
fn ascend_psd(mat: &DMatrix<f64>, shifted: &DMatrix<f64>, dim: usize, start: DVector<f64>) -> (f64, DVector<f64>) {
    let scale = mat.norm().max(f64::MIN_POSITIVE);
    let mut s = start;
    let mut value = s.dot(&(mat * &s));
    for _ in 0..2000 {
        let grad = shifted * &s;
        let p = project_psd(form_of(dim, &grad).matrix());
        let pn = p.norm();
        if pn <= 1e-300 {
            break;
        }
        let s_new = Sym2Form::new(p / pn).expect("symmetric").to_coords();
        let v_new = s_new.dot(&(mat * &s_new));
        if v_new < value {
            break;
        }
        let gain = v_new - value;
        s = s_new;
        value = v_new;
        if gain <= 1e-15 * scale {
            break;
        }
    }
    (value, s)
}

fn random_psd<R: Rng>(dim: usize, rng: &mut R) -> DVector<f64> {
    let rank = rng.gen_range(1..=dim);
    let g = DMatrix::from_fn(dim, rank, |_, _| rng.sample::<f64, _>(StandardNormal));
    let s = &g * g.transpose();
    let n = s.norm();
    Sym2Form::new(s / n).expect("symmetric").to_coords()
}

/// Approximately maximize `sᵀ M s` over unit PSD forms `s`.
pub(crate) fn maximize_psd(
    mat: &DMatrix<f64>,
    dim: usize,
    hints: &[DVector<f64>],
    random_starts: usize,
    config: &SolverConfig,
    salt: u64,
) -> (f64, DVector<f64>) {
    let eig = SymmetricEigen::new(mat.clone());
    let alpha = (-eig.eigenvalues.min()).max(0.0) + 1e-12 * mat.norm();
    let d = mat.nrows();
    let shifted = mat + DMatrix::identity(d, d) * alpha;

    let mut starts: Vec<DVector<f64>> = Vec::new();
    starts.push(Sym2Form::identity(dim).scale(1.0 / (dim as f64).sqrt()).to_coords());
    for i in 0..dim {
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        starts.push(Sym2Form::diag(&v).to_coords());
    }
    let top = eig.eigenvectors.column(eig.eigenvalues.imax()).into_owned();
    for sign in [1.0, -1.0] {
        let p = project_psd(form_of(dim, &(&top * sign)).matrix());
        if p.norm() > 1e-12 {
            starts.push(Sym2Form::new(&p / p.norm()).expect("symmetric").to_coords());
        }
    }
    starts.extend(hints.iter().cloned());
    let fixed = starts.len();
    let results: Vec<(usize, f64, DVector<f64>)> = (0..fixed + random_starts)
        .into_par_iter()
        .map(|k| {
            let s0 = if k < fixed {
                starts[k].clone()
            } else {
                random_psd(dim, &mut config.rng((salt << 32) | (k - fixed) as u64))
            };
            let (v, s) = ascend_psd(mat, &shifted, dim, s0);
            (k, v, s)
        })
        .collect();
    let (_, v, s) = results
        .into_iter()
        .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)))
        .expect("at least one start");
    (v, s)
}

struct PsdSquares<'a> {
    dim: usize,
    ambient: Ambient,
    config: &'a SolverConfig,
}

impl PsdSquares<'_> {
    /// Matrix on S² coordinates representing `s ↦ ⟨g, atom(s)⟩`.
    fn quadratic(&self, g: &DVector<f64>) -> DMatrix<f64> {
        match self.ambient {
            Ambient::Phi => unpack_symmetric(sym_pair_count(self.dim), g),
            Ambient::Sym4 => PhiTensor::from_sym4(&Sym4Form::from_packed(self.dim, g)).matrix().clone(),
        }
    }

    fn atom(&self, s: &DVector<f64>) -> DVector<f64> {
        match self.ambient {
            Ambient::Phi => pack_symmetric(&(s * s.transpose())),
            Ambient::Sym4 => Sym4Form::sym_square(&form_of(self.dim, s)).packed(),
        }
    }
}

impl AtomFamily for PsdSquares<'_> {
    fn lmo(&self, g: &DVector<f64>, active: &[Generator], starts: usize, salt: u64) -> Atom {
        let mat = self.quadratic(g);
        let hints: Vec<_> = active
            .iter()
            .filter_map(|gen| match gen {
                Generator::Form(s) => Some(s.to_coords()),
                Generator::Plane(_) => None,
            })
            .collect();
        let (_, s) = maximize_psd(&mat, self.dim, &hints, starts, self.config, salt);
        let vec = self.atom(&s);
        Atom { value: g.dot(&vec), vec, generator: Generator::Form(form_of(self.dim, &s)) }
    }

    fn repair_direction(&self) -> DVector<f64> {
        match self.ambient {
            Ambient::Phi => {
                let d = sym_pair_count(self.dim);
                pack_symmetric(&DMatrix::identity(d, d))
            }
            // ⟨h∘², s∘²⟩ = ((tr s)² + 2|s|²)/3 ≥ 2/3 for unit PSD s.
            Ambient::Sym4 => Sym4Form::sym_square(&Sym2Form::identity(self.dim)).scale(1.5).packed(),
        }
    }

    fn atom_of(&self, generator: &Generator) -> DVector<f64> {
        match generator {
            Generator::Form(s) => self.atom(&s.to_coords()),
            Generator::Plane(_) => unreachable!("form family"),
        }
    }

    fn polish(&self, target: &DVector<f64>, atoms: &[(f64, Generator)], current: f64) -> Option<Vec<(f64, Generator)>> {
        polish(self, target, atoms, current, POLISH_STEPS).map(|(a, _)| a)
    }
}

/// Atom with weight absorbed into `s̃ = √μ·s = L Lᵀ`, `θ = vec(L)`; the
/// factorization keeps every refined generator PSD.
impl Factorized for PsdSquares<'_> {
    fn params_of(&self, weight: f64, generator: &Generator) -> DVector<f64> {
        let Generator::Form(s) = generator else { unreachable!("form family") };
        let eig = SymmetricEigen::new(s.matrix() * weight.sqrt());
        let root = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
        let l = &eig.eigenvectors * DMatrix::from_diagonal(&root);
        DVector::from_column_slice(l.as_slice())
    }

    fn eval(&self, theta: &DVector<f64>) -> (DVector<f64>, DMatrix<f64>) {
        let m = self.dim;
        let l = DMatrix::from_column_slice(m, m, theta.as_slice());
        let st = Sym2Form::new(&l * l.transpose()).expect("symmetric");
        let c = st.to_coords();
        let atom = self.atom(&c);
        let mut jac = DMatrix::zeros(atom.len(), m * m);
        for b in 0..m {
            for a in 0..m {
                let mut d = DMatrix::zeros(m, m);
                for j in 0..m {
                    d[(a, j)] += l[(j, b)];
                    d[(j, a)] += l[(j, b)];
                }
                let ds = Sym2Form::new(d).expect("symmetric");
                let col = match self.ambient {
                    Ambient::Phi => {
                        let v = ds.to_coords();
                        let t = &v * c.transpose();
                        pack_symmetric(&(&t + t.transpose()))
                    }
                    Ambient::Sym4 => {
                        let plus = Sym4Form::sym_square(&st.add(&ds).expect("same dim"));
                        let minus = Sym4Form::sym_square(&st.add(&ds.scale(-1.0)).expect("same dim"));
                        (plus.packed() - minus.packed()) * 0.5
                    }
                };
                jac.set_column(b * m + a, &col);
            }
        }
        (atom, jac)
    }

    fn generator_of(&self, theta: &DVector<f64>) -> Option<(f64, Generator)> {
        let m = self.dim;
        let l = DMatrix::from_column_slice(m, m, theta.as_slice());
        let st = Sym2Form::new(&l * l.transpose()).ok()?;
        let n = st.norm();
        (n > 0.0 && n.is_finite()).then(|| (n * n, Generator::Form(st.scale(1.0 / n))))
    }
}

fn min_eigenvalue_of(generator: &Generator) -> f64 {
    match generator {
        Generator::Form(s) => s.min_eigenvalue(),
        Generator::Plane(_) => f64::NAN,
    }
}

fn apex_certificate() -> ConicCertificate {
    ConicCertificate {
        verdict: Verdict::NonMember,
        decomposition: None,
        dual_functional: None,
        residual: 0.0,
        iterations: 0,
        margin: None,
        dual_check: None,
        trace: Vec::new(),
    }
}

/// Eigen-split shortcut for Φ: PSD matrix whose eigenvectors are PSD forms.
fn spectral_phi(phi: &PhiTensor, tol: f64) -> Option<Vec<WeightedGenerator>> {
    let scale = phi.norm();
    let eig = SymmetricEigen::new(phi.matrix().clone());
    if eig.eigenvalues.iter().any(|l| *l < -tol * scale) {
        return None;
    }
    let dropped: f64 = eig.eigenvalues.iter().filter(|l| **l <= tol * scale).map(|l| l * l).sum();
    if dropped.sqrt() > tol * scale {
        return None;
    }
    let mut parts = Vec::new();
    for (k, &l) in eig.eigenvalues.iter().enumerate() {
        if l <= tol * scale {
            continue;
        }
        let mut s = form_of(phi.dim(), &eig.eigenvectors.column(k).into_owned());
        if s.matrix().trace() < 0.0 {
            s = s.scale(-1.0);
        }
        if s.min_eigenvalue() < -1e-12 {
            return None;
        }
        parts.push(WeightedGenerator { weight: l, generator: Generator::Form(s) });
    }
    Some(parts)
}

fn run(dim: usize, ambient: Ambient, target: DVector<f64>, config: &SolverConfig) -> ConicCertificate {
    let family = PsdSquares { dim, ambient, config };
    let fw = conic_fw(&target, &family, config);
    let mut cert = ConicCertificate {
        verdict: Verdict::Inconclusive,
        decomposition: None,
        dual_functional: None,
        residual: fw.residual,
        iterations: fw.iterations,
        margin: None,
        dual_check: None,
        trace: fw.trace,
    };
    if fw.residual <= config.tol {
        let margin = fw.atoms.iter().map(|(_, g)| min_eigenvalue_of(g)).fold(f64::INFINITY, f64::min);
        cert.margin = Some(margin);
        if margin >= config.strict_margin - 1e-12 {
            cert.verdict = Verdict::Member;
            cert.decomposition = Some(fw.atoms.into_iter().map(|(weight, generator)| WeightedGenerator { weight, generator }).collect());
        }
        return cert;
    }
    if let Some((g, bound)) = fw.dual {
        let vcfg = verification_config(config);
        let mat = family.quadratic(&g);
        let (v, _) = maximize_psd(&-mat, dim, &[], vcfg.multistart_count, &vcfg, 0xfeed);
        let pairing = g.dot(&target) / target.norm();
        cert.dual_check = Some(DualCheck { pairing, min_generator_pairing: -v, distance_lower_bound: bound });
        if -v >= -config.tol && pairing < -config.tol {
            cert.verdict = Verdict::NonMember;
            cert.dual_functional = Some(match ambient {
                Ambient::Phi => DualFunctional::Phi(PhiTensor::from_packed(dim, &g)),
                Ambient::Sym4 => DualFunctional::Sym4(Sym4Form::from_packed(dim, &g)),
            });
        }
    }
    cert
}

/// Membership of Φ in the cone of sums `Σ s_i ⊗ s_i` with PSD `s_i`.
///
/// `Φ = 0` is the apex: it lies in the closed cone but not in the open cone
/// of positive-definite sums, so it is reported as a non-member without a
/// separating functional.
///
/// When a decomposition exists but its generators miss `strict_margin`, the
/// factorization `Φ = BBᵀ` is searched for a better one: every decomposition
/// into `rank Φ` squares is `t_j = B u_j` for an orthogonal `U`.
pub fn phi_positive_membership(phi: &PhiTensor, config: &SolverConfig) -> Result<ConicCertificate> {
    config.validate()?;
    if phi.norm() == 0.0 {
        return Ok(apex_certificate());
    }
    if let Some(parts) = spectral_phi(phi, config.tol) {
        let margin = parts.iter().map(|p| min_eigenvalue_of(&p.generator)).fold(f64::INFINITY, f64::min);
        if margin >= config.strict_margin - 1e-12 {
            return Ok(ConicCertificate {
                verdict: Verdict::Member,
                residual: reconstruction_residual(phi, &parts),
                decomposition: Some(parts),
                dual_functional: None,
                iterations: 0,
                margin: Some(margin),
                dual_check: None,
                trace: Vec::new(),
            });
        }
    }
    let mut cert = run(phi.dim(), Ambient::Phi, phi.packed(), config);
    if cert.verdict == Verdict::Inconclusive && cert.residual <= config.tol {
        if let Some((parts, margin)) = rotate_factor(phi, config)? {
            if margin > cert.margin.unwrap_or(f64::NEG_INFINITY) {
                cert.margin = Some(margin);
                let residual = reconstruction_residual(phi, &parts);
                if margin >= config.strict_margin - 1e-12 && residual <= config.tol {
                    cert.verdict = Verdict::Member;
                    cert.residual = residual;
                    cert.decomposition = Some(parts);
                }
            }
        }
    }
    Ok(cert)
}

fn reconstruction_residual(phi: &PhiTensor, parts: &[WeightedGenerator]) -> f64 {
    let recon = parts.iter().fold(DMatrix::zeros(phi.matrix().nrows(), phi.matrix().ncols()), |acc, p| match &p.generator {
        Generator::Form(s) => {
            let v = s.to_coords();
            acc + &v * v.transpose() * p.weight
        }
        Generator::Plane(_) => acc,
    });
    (recon - phi.matrix()).norm() / phi.norm()
}

/// Best orthogonal remix of the eigen-factor of Φ, by the normal-frame
/// rotation search. Returns unit generators and their smallest eigenvalue.
fn rotate_factor(phi: &PhiTensor, config: &SolverConfig) -> Result<Option<(Vec<WeightedGenerator>, f64)>> {
    let eig = SymmetricEigen::new(phi.matrix().clone());
    let scale = phi.norm();
    let forms: Vec<Sym2Form> = (0..eig.eigenvalues.len())
        .filter(|&k| eig.eigenvalues[k] > config.tol * scale)
        .map(|k| form_of(phi.dim(), &(eig.eigenvectors.column(k) * eig.eigenvalues[k].sqrt())))
        .collect();
    if forms.is_empty() {
        return Ok(None);
    }
    let problem = NormalFrameProblem::new(forms)?;
    let search = SolverConfig { strict_margin: 0.0, ..config.clone() };
    let report = frame_rotation_search(&problem, &search)?;
    let mut margin = f64::INFINITY;
    let mut parts = Vec::new();
    for s in report.rotated {
        let n = s.norm();
        if n == 0.0 {
            continue;
        }
        let unit = s.scale(1.0 / n);
        margin = margin.min(unit.min_eigenvalue());
        parts.push(WeightedGenerator { weight: n * n, generator: Generator::Form(unit) });
    }
    Ok(Some((parts, margin)))
}

/// Membership of `E` in the cone of sums `Σ s_i∘²` with PSD `s_i`.
pub fn sym4_sos_membership(e: &Sym4Form, config: &SolverConfig) -> Result<ConicCertificate> {
    config.validate()?;
    if e.norm() == 0.0 {
        return Ok(apex_certificate());
    }
    Ok(run(e.dim(), Ambient::Sym4, e.packed(), config))
}
