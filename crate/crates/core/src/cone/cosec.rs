//! The cone S̄* spanned by squares of unit simple bivectors, and the
//! cosectional-curvature bounds defined through it.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::certificate::{ConicCertificate, DualCheck, DualFunctional, Generator, Verdict, WeightedGenerator};
use super::fw::{conic_fw, Atom, AtomFamily};
use super::polish::{polish, Factorized};
use super::grassmann::{maximize_simple, plane_of};
use crate::config::SolverConfig;
use crate::tensor::biform::{pack_symmetric, unpack_symmetric};
use crate::tensor::bivector::wedge_coords;
use crate::tensor::{bianchi_residual, is_simple, AlgebraicCurvatureTensor, Biform, Bivector, ALGEBRA_TOL};
use crate::{Error, Result};

/// Eigenvalues of the curvature operator on Λ², ascending.
pub fn curvature_operator_spectrum(rm: &AlgebraicCurvatureTensor) -> Vec<f64> {
    rm.spectrum()
}

struct SimpleSquares<'a> {
    dim: usize,
    config: &'a SolverConfig,
}

impl AtomFamily for SimpleSquares<'_> {
    fn lmo(&self, g: &DVector<f64>, active: &[Generator], starts: usize, salt: u64) -> Atom {
        let n = self.dim * (self.dim - 1) / 2;
        let mat = unpack_symmetric(n, g);
        let hints: Vec<_> = active
            .iter()
            .filter_map(|gen| match gen {
                Generator::Plane(s) => Some(plane_of(s)),
                Generator::Form(_) => None,
            })
            .collect();
        let best = maximize_simple(&mat, self.dim, &hints, starts, self.config, salt);
        let s = wedge_coords(&best.x, &best.y);
        Atom {
            vec: pack_symmetric(&(&s * s.transpose())),
            value: best.value,
            generator: Generator::Plane(Bivector::wedge(&best.x, &best.y).expect("same dim").canonical_sign()),
        }
    }

    fn repair_direction(&self) -> DVector<f64> {
        let n = self.dim * (self.dim - 1) / 2;
        pack_symmetric(&DMatrix::identity(n, n))
    }

    fn atom_of(&self, generator: &Generator) -> DVector<f64> {
        match generator {
            Generator::Plane(s) => {
                let v = s.as_vector();
                pack_symmetric(&(&v * v.transpose()))
            }
            Generator::Form(_) => unreachable!("plane family"),
        }
    }

    fn polish(&self, target: &DVector<f64>, atoms: &[(f64, Generator)], current: f64) -> Option<Vec<(f64, Generator)>> {
        polish(self, target, atoms, current, POLISH_STEPS).map(|(a, _)| a)
    }
}

pub(crate) const POLISH_STEPS: usize = 20;

/// Atom `u uᵀ` with `u = x̃∧y`, `θ = (x̃, y)`.
impl Factorized for SimpleSquares<'_> {
    fn params_of(&self, weight: f64, generator: &Generator) -> DVector<f64> {
        let Generator::Plane(s) = generator else { unreachable!("plane family") };
        let (x, y) = plane_of(s);
        let mut t = DVector::zeros(2 * self.dim);
        t.rows_mut(0, self.dim).copy_from(&(x * weight.sqrt()));
        t.rows_mut(self.dim, self.dim).copy_from(&y);
        t
    }

    fn eval(&self, theta: &DVector<f64>) -> (DVector<f64>, DMatrix<f64>) {
        let m = self.dim;
        let x: DVector<f64> = theta.rows(0, m).into_owned();
        let y: DVector<f64> = theta.rows(m, m).into_owned();
        let u = wedge_coords(&x, &y);
        let atom = pack_symmetric(&(&u * u.transpose()));
        let mut jac = DMatrix::zeros(atom.len(), 2 * m);
        for k in 0..m {
            let e = DVector::from_fn(m, |i, _| if i == k { 1.0 } else { 0.0 });
            for (col, v) in [(k, wedge_coords(&e, &y)), (m + k, wedge_coords(&x, &e))] {
                let d = &v * u.transpose();
                jac.set_column(col, &pack_symmetric(&(&d + d.transpose())));
            }
        }
        (atom, jac)
    }

    fn generator_of(&self, theta: &DVector<f64>) -> Option<(f64, Generator)> {
        let m = self.dim;
        let u = Bivector::wedge(&theta.rows(0, m).into_owned(), &theta.rows(m, m).into_owned()).ok()?;
        let n = u.norm();
        (n > 0.0 && n.is_finite()).then(|| (n * n, Generator::Plane(u.scale(1.0 / n).canonical_sign())))
    }
}

fn check_bianchi(rm: &Biform) -> Result<()> {
    let res = bianchi_residual(rm);
    if res > ALGEBRA_TOL {
        return Err(Error::BianchiViolation(res));
    }
    Ok(())
}

/// Eigen-split shortcut: a PSD operator whose eigenvectors (for nonzero
/// eigenvalues) are all simple is already a decomposition.
fn spectral_member(rm: &Biform, tol: f64) -> Option<ConicCertificate> {
    let scale = rm.norm();
    let eig = SymmetricEigen::new(rm.matrix().clone());
    if eig.eigenvalues.iter().any(|l| *l < -tol * scale) {
        return None;
    }
    let mut parts = Vec::new();
    for (k, &l) in eig.eigenvalues.iter().enumerate() {
        if l <= tol * scale {
            continue;
        }
        let v = Bivector::new(rm.dim(), eig.eigenvectors.column(k).iter().copied().collect()).ok()?;
        if !is_simple(&v, 1e-10) {
            return None;
        }
        parts.push(WeightedGenerator { weight: l, generator: Generator::Plane(v.canonical_sign()) });
    }
    let dropped: f64 = eig.eigenvalues.iter().filter(|l| **l <= tol * scale).map(|l| l * l).sum();
    let residual = if scale > 0.0 { dropped.sqrt() / scale } else { 0.0 };
    (residual <= tol).then(|| ConicCertificate {
        verdict: Verdict::Member,
        decomposition: Some(parts),
        dual_functional: None,
        residual,
        iterations: 0,
        margin: None,
        dual_check: None,
        trace: Vec::new(),
    })
}

/// Config used for independent re-verification of a dual functional.
pub(crate) fn verification_config(config: &SolverConfig) -> SolverConfig {
    SolverConfig {
        rng_seed: config.rng_seed ^ 0x9e37_79b9_7f4a_7c15,
        multistart_count: 2 * config.multistart_count,
        ..config.clone()
    }
}

/// Membership of `rm` in the closed cone generated by `(x∧y)⊗(x∧y)`.
pub fn cosec_membership(rm: &Biform, config: &SolverConfig) -> Result<ConicCertificate> {
    config.validate()?;
    check_bianchi(rm)?;
    if rm.dim() < 2 {
        return Err(Error::InvalidDim { dim: rm.dim(), reason: "curvature tensors need dim ≥ 2" });
    }
    if let Some(cert) = spectral_member(rm, config.tol) {
        return Ok(cert);
    }
    let family = SimpleSquares { dim: rm.dim(), config };
    let target = pack_symmetric(rm.matrix());
    let fw = conic_fw(&target, &family, config);
    let n = rm.matrix().nrows();
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
        cert.verdict = Verdict::Member;
        cert.decomposition = Some(fw.atoms.into_iter().map(|(weight, generator)| WeightedGenerator { weight, generator }).collect());
        return Ok(cert);
    }
    if let Some((g, bound)) = fw.dual {
        let vcfg = verification_config(config);
        let gm = unpack_symmetric(n, &g);
        let min_pair = -maximize_simple(&-&gm, rm.dim(), &[], vcfg.multistart_count, &vcfg, 0xfeed).value;
        let pairing = g.dot(&target) / target.norm();
        let check = DualCheck { pairing, min_generator_pairing: min_pair, distance_lower_bound: bound };
        cert.dual_check = Some(check);
        if min_pair >= -config.tol && pairing < -config.tol {
            cert.verdict = Verdict::NonMember;
            cert.dual_functional = Some(DualFunctional::Biform(Biform::from_matrix_unchecked(rm.dim(), gm)));
        }
    }
    Ok(cert)
}

/// A functional `G` with `⟨G, rm⟩ < 0` and nonnegative sectional curvature,
/// when one is certified.
pub fn dual_separation(rm: &Biform, config: &SolverConfig) -> Result<Option<Biform>> {
    let cert = cosec_membership(rm, config)?;
    Ok(match cert.dual_functional {
        Some(DualFunctional::Biform(g)) if cert.verdict == Verdict::NonMember => Some(g),
        _ => None,
    })
}

/// `sup{κ : rm − κ·Q_{S^m} ∈ S̄*}` by bisection; `−∞` if no member is found.
/// Inconclusive verdicts count as non-membership.
pub fn cosec_lower_bound(rm: &Biform, config: &SolverConfig) -> Result<f64> {
    config.validate()?;
    check_bianchi(rm)?;
    let m = rm.dim();
    let n = m * (m - 1) / 2;
    let q = Biform::from_matrix_unchecked(m, DMatrix::identity(n, n));
    let member = |k: f64| -> Result<bool> { Ok(cosec_membership(&rm.sub(&q.scale(k))?, config)?.is_member()) };
    let radius = rm.norm().max(1.0) * (m * m) as f64;
    let mut lo = -radius;
    let mut hi = radius;
    let mut found = false;
    for _ in 0..40 {
        if member(lo)? {
            found = true;
            break;
        }
        hi = lo;
        lo *= 2.0;
    }
    if !found {
        return Ok(f64::NEG_INFINITY);
    }
    let mut bounded = false;
    for _ in 0..40 {
        if !member(hi)? {
            bounded = true;
            break;
        }
        lo = hi;
        hi = if hi > 0.0 { hi * 2.0 } else { radius };
    }
    if !bounded {
        return Ok(f64::INFINITY);
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if member(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// `sup{κ : −rm − κ·Q_{S^m} ∈ S̄*}`, the mirrored bound.
pub fn cosec_upper_bound(rm: &Biform, config: &SolverConfig) -> Result<f64> {
    cosec_lower_bound(&rm.scale(-1.0), config)
}
