//! The bi-invariant curvature of SU(3): a nonnegative curvature operator
//! whose image contains no simple bivectors.

mod basis;

pub use basis::{bracket, exp_matrix, killing_inner, CMatrix, LieBasis};

use nalgebra::{Complex, DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::tensor::{AlgebraicCurvatureTensor, Biform, Bivector, Conjugate, FourVector};
use crate::{Error, Result};

/// `x = diag(ai, bi, ci)` with `a + b + c = 0`; only `a` and `b` are stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorusElement {
    a: f64,
    b: f64,
}

impl TorusElement {
    pub fn new(a: f64, b: f64) -> Self {
        Self { a, b }
    }

    pub fn from_triple(a: f64, b: f64, c: f64) -> Result<Self> {
        let scale = a.abs().max(b.abs()).max(c.abs()).max(1.0);
        if (a + b + c).abs() > 1e-12 * scale {
            return Err(Error::InvalidInput(format!("torus element needs a + b + c = 0, got {}", a + b + c)));
        }
        Ok(Self { a, b })
    }

    /// Unit-norm element at angle `t` in the torus plane.
    pub fn on_unit_circle(t: f64) -> Self {
        // Orthonormal basis of {a+b+c = 0} ⊂ ℝ³ is (1,−1,0)/√2, (1,1,−2)/√6;
        // |x|² = (a² + b² + c²)/2, hence the factor √2.
        let (s, c) = t.sin_cos();
        let u = c / 2f64.sqrt();
        let v = s / 6f64.sqrt();
        let k = 2f64.sqrt();
        Self { a: k * (u + v), b: k * (-u + v) }
    }

    pub fn triple(&self) -> (f64, f64, f64) {
        (self.a, self.b, -self.a - self.b)
    }

    pub fn norm(&self) -> f64 {
        let (a, b, c) = self.triple();
        ((a * a + b * b + c * c) / 2.0).sqrt()
    }

    pub fn matrix(&self) -> CMatrix {
        let (a, b, c) = self.triple();
        CMatrix::from_diagonal(&DVector::from_vec(vec![Complex::new(0.0, a), Complex::new(0.0, b), Complex::new(0.0, c)]))
    }
}

// Positions of F_k and E_k in the su(3) basis.
const F: [usize; 3] = [2, 3, 4];
const E: [usize; 3] = [5, 6, 7];

/// `ad_x` as a bivector over the orthonormal basis of su(3), coordinate
/// `(p, q)` being `⟨b_p, [x, b_q]⟩`.
pub fn ad_bivector(basis: &LieBasis, x: &CMatrix) -> Bivector {
    let m = basis.ad_matrix(x);
    Bivector::from_skew(&m)
}

/// `ad_x` on the torus; nonzero only along `F_k∧E_k`.
pub fn torus_ad_bivector(x: &TorusElement) -> Bivector {
    ad_bivector(&LieBasis::su3(), &x.matrix())
}

/// The `F_k∧E_k` coordinates of `ad_x`, in order `k = 1, 2, 3`.
pub fn torus_ad_coefficients(x: &TorusElement) -> [f64; 3] {
    let phi = torus_ad_bivector(x);
    let skew = phi.to_skew();
    [0, 1, 2].map(|k| skew[(F[k], E[k])])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdxWedge {
    /// `ad_x∧ad_x`, equal to `wedge_square(ad_x)`.
    pub four_vector: FourVector,
    /// `d₁d₂, d₂d₃, d₃d₁` for `d = (c−b, a−c, b−a)`: the coefficients of
    /// `F₁E₁F₂E₂, F₂E₂F₃E₃, F₃E₃F₁E₁` in `½·ad_x∧ad_x` (the expansion of a
    /// square doubles every cross term).
    pub products: [f64; 3],
}

pub fn adx_wedge_square(x: &TorusElement) -> AdxWedge {
    let w = crate::tensor::wedge_square(&torus_ad_bivector(x));
    let read = |k: usize, l: usize| 0.5 * w.component([F[k], E[k], F[l], E[l]]);
    let products = [read(0, 1), read(1, 2), read(2, 0)];
    AdxWedge { four_vector: w, products }
}

/// The orthogonal projection of Λ²(su(n)) onto `Im(ad)`, the curvature
/// operator of the bi-invariant metric up to a positive constant.
pub fn biinvariant_operator(n: usize) -> Result<AlgebraicCurvatureTensor> {
    let basis = LieBasis::su(n)?;
    let cols: Vec<DVector<f64>> = basis.basis.iter().map(|b| ad_bivector(&basis, b).as_vector()).collect();
    let a = DMatrix::from_columns(&cols);
    let svd = a.svd(true, false);
    let u = svd.u.expect("requested");
    let smax = svd.singular_values.max();
    let keep: Vec<usize> = (0..svd.singular_values.len()).filter(|&k| svd.singular_values[k] > 1e-8 * smax).collect();
    let ur = u.select_columns(&keep);
    let p = &ur * ur.transpose();
    let p = (&p + p.transpose()) * 0.5;
    AlgebraicCurvatureTensor::with_tolerance(Biform::new(basis.dim(), p)?, 1e-8)
}

/// `max_k ‖conjugate(P, Ad_g) − P‖` over `g = exp(t·b_k)` for all basis
/// elements `b_k` and the given `t` values.
pub fn ad_invariance_defect(n: usize, ts: &[f64]) -> Result<f64> {
    let basis = LieBasis::su(n)?;
    let p = biinvariant_operator(n)?;
    let mut worst = 0.0f64;
    for b in &basis.basis {
        for &t in ts {
            let g = exp_matrix(&(b * Complex::new(t, 0.0)));
            let q = basis.adjoint_action(&g);
            let moved = p.conjugate(&q)?;
            worst = worst.max((moved.matrix() - p.matrix()).norm());
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorusWedgeMin {
    pub value: f64,
    pub argmin: TorusElement,
}

/// Minimum of `‖ad_x∧ad_x‖` over unit torus elements: a grid of
/// `resolution` angles followed by golden-section refinement around the best
/// grid point.
pub fn min_wedge_on_torus(resolution: usize) -> Result<TorusWedgeMin> {
    if resolution < 8 {
        return Err(Error::InvalidInput(format!("resolution must be at least 8, got {resolution}")));
    }
    let f = |t: f64| adx_wedge_square(&TorusElement::on_unit_circle(t)).four_vector.norm();
    let h = std::f64::consts::TAU / resolution as f64;
    let (k, _) = (0..resolution)
        .map(|k| (k, f(k as f64 * h)))
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
        .expect("resolution ≥ 8");
    let (mut lo, mut hi) = ((k as f64 - 1.0) * h, (k as f64 + 1.0) * h);
    let r = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..80 {
        let c = hi - r * (hi - lo);
        let d = lo + r * (hi - lo);
        if f(c) <= f(d) {
            hi = d;
        } else {
            lo = c;
        }
    }
    let t = 0.5 * (lo + hi);
    let grid_best = f(k as f64 * h);
    let (t, value) = if f(t) <= grid_best { (t, f(t)) } else { (k as f64 * h, grid_best) };
    Ok(TorusWedgeMin { value, argmin: TorusElement::on_unit_circle(t) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_is_orthonormal_and_closed() {
        let b = LieBasis::su3();
        assert!(b.orthonormality_defect() < 1e-14);
        assert!(b.structure_defect() < 1e-12);
        assert!(b.jacobi_defect() < 1e-12);
        let b4 = LieBasis::su(4).unwrap();
        assert_eq!(b4.dim(), 15);
        assert!(b4.orthonormality_defect() < 1e-14);
        assert!(LieBasis::su(1).is_err());
    }

    #[test]
    fn torus_coefficients() {
        let c = torus_ad_coefficients(&TorusElement::from_triple(1.0, -1.0, 0.0).unwrap());
        assert_eq!(c, [1.0, 1.0, -2.0]);
        let c = torus_ad_coefficients(&TorusElement::from_triple(2.0, -1.0, -1.0).unwrap());
        assert_eq!(c, [0.0, 3.0, -3.0]);
        assert!(torus_ad_bivector(&TorusElement::new(0.0, 0.0)).norm() == 0.0);
    }

    #[test]
    fn wedge_products() {
        let w = adx_wedge_square(&TorusElement::from_triple(1.0, -1.0, 0.0).unwrap());
        assert_eq!(w.products, [1.0, -2.0, -2.0]);
        let w = adx_wedge_square(&TorusElement::from_triple(2.0, -1.0, -1.0).unwrap());
        assert_eq!(w.products, [0.0, -9.0, 0.0]);
        assert!(w.four_vector.norm() > 0.0);
    }

    #[test]
    fn unit_circle_is_unit() {
        for k in 0..10 {
            let x = TorusElement::on_unit_circle(0.37 * k as f64);
            assert!((x.norm() - 1.0).abs() < 1e-14);
        }
    }
}
