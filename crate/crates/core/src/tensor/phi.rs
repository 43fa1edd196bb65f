//! Φ-curvature tensors in S²(S²(T)) and their split into the extrinsic part
//! `E ∈ S⁴(T)` and the intrinsic curvature `Rm ∈ A⁴(T)`:
//!
//! ```text
//! Φ(X,Y,Z,W) = E(X,Y,Z,W) + ⅓(Rm(X,Z,Y,W) + Rm(X,W,Y,Z))
//! E          = total symmetrization of Φ
//! Rm(X,Y,Z,W) = Φ(X,Z,Y,W) − Φ(X,W,Y,Z)
//! ```

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::biform::{pack_symmetric, unpack_symmetric, AlgebraicCurvatureTensor, Biform};
use super::index::{pair_count, pairs, sym_pair_count, sym_pair_index, sym_pairs, sym_quads};
use super::sym2::{check_dim, symmetrize_checked, Sym2Form};
use super::sym4::Sym4Form;
use crate::{Error, Result};

/// An element of S²(S²(ℝ^dim)) written in the orthonormal S² basis
/// `{e_i⊗e_i} ∪ {(e_i⊗e_j + e_j⊗e_i)/√2}`, so the Frobenius product of
/// matrices is the induced inner product.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "super::io::TensorDoc", into = "super::io::TensorDoc")]
pub struct PhiTensor {
    dim: usize,
    matrix: DMatrix<f64>,
}

fn basis_weight(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        std::f64::consts::SQRT_2
    }
}

impl PhiTensor {
    pub fn new(dim: usize, matrix: DMatrix<f64>) -> Result<Self> {
        let n = sym_pair_count(dim);
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimMismatch { expected: n, got: matrix.nrows() });
        }
        Ok(Self { dim, matrix: symmetrize_checked(matrix)? })
    }

    pub fn zeros(dim: usize) -> Self {
        let n = sym_pair_count(dim);
        Self { dim, matrix: DMatrix::zeros(n, n) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn norm(&self) -> f64 {
        self.matrix.norm()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { dim: self.dim, matrix: &self.matrix * c }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        Ok(Self { dim: self.dim, matrix: &self.matrix + &other.matrix })
    }

    pub fn inner(&self, other: &Self) -> Result<f64> {
        check_dim(self.dim, other.dim)?;
        Ok(self.matrix.dot(&other.matrix))
    }

    /// `Φ(e_i, e_j, e_k, e_l)`.
    pub fn component(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let m = self.dim;
        self.matrix[(sym_pair_index(i, j, m), sym_pair_index(k, l, m))] / (basis_weight(i, j) * basis_weight(k, l))
    }

    pub fn eval(&self, x: &DVector<f64>, y: &DVector<f64>, z: &DVector<f64>, w: &DVector<f64>) -> f64 {
        let a = sym_coords_of_product(x, y);
        let b = sym_coords_of_product(z, w);
        a.dot(&(&self.matrix * b))
    }

    /// Build from a function of the 4 indices that already carries the
    /// S²(S²) symmetries.
    fn from_components(dim: usize, f: impl Fn(usize, usize, usize, usize) -> f64) -> Self {
        let sp = sym_pairs(dim);
        let matrix = DMatrix::from_fn(sp.len(), sp.len(), |a, b| {
            let (i, j) = sp[a];
            let (k, l) = sp[b];
            basis_weight(i, j) * basis_weight(k, l) * f(i, j, k, l)
        });
        Self { dim, matrix: (&matrix + matrix.transpose()) * 0.5 }
    }

    /// `s ⊗ s`.
    pub fn square(s: &Sym2Form) -> Self {
        let v = s.to_coords();
        Self { dim: s.dim(), matrix: &v * v.transpose() }
    }

    /// `E` viewed inside S²(S²).
    pub fn from_sym4(e: &Sym4Form) -> Self {
        Self::from_components(e.dim(), |i, j, k, l| e.get(i, j, k, l))
    }

    pub(crate) fn packed(&self) -> DVector<f64> {
        pack_symmetric(&self.matrix)
    }

    pub(crate) fn from_packed(dim: usize, v: &DVector<f64>) -> Self {
        Self { dim, matrix: unpack_symmetric(sym_pair_count(dim), v) }
    }

    /// `Φ'(X,Y,Z,W) = Φ(qX, qY, qZ, qW)`.
    pub fn pullback(&self, q: &DMatrix<f64>) -> Result<Self> {
        check_dim(self.dim, q.nrows())?;
        let s2 = sym2_action(q);
        let m = s2.transpose() * &self.matrix * &s2;
        Ok(Self { dim: self.dim, matrix: (&m + m.transpose()) * 0.5 })
    }
}

/// Induced action of `q` on S² coordinates,
/// arranged so that `coords(sym(qx ⊗ qy)) = S²(q) coords(sym(x ⊗ y))`.
fn sym2_action(q: &DMatrix<f64>) -> DMatrix<f64> {
    let m = q.nrows();
    let sp = sym_pairs(m);
    DMatrix::from_fn(sp.len(), sp.len(), |a, b| {
        let (i, j) = sp[a];
        let (k, l) = sp[b];
        // Image of the basis element b under s ↦ q s qᵀ, read in coordinate a.
        let v = if k == l {
            q[(i, k)] * q[(j, k)]
        } else {
            (q[(i, k)] * q[(j, l)] + q[(i, l)] * q[(j, k)]) / std::f64::consts::SQRT_2
        };
        v * basis_weight(i, j)
    })
}

/// S² coordinates of `(x⊗y + y⊗x)/2`.
fn sym_coords_of_product(x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
    let m = x.len();
    DVector::from_iterator(
        sym_pair_count(m),
        sym_pairs(m).into_iter().map(|(i, j)| {
            if i == j {
                x[i] * y[i]
            } else {
                std::f64::consts::SQRT_2 * 0.5 * (x[i] * y[j] + x[j] * y[i])
            }
        }),
    )
}

/// `Φ = Σ_i s_i ⊗ s_i`.
pub fn phi_from_forms(forms: &[Sym2Form]) -> Result<PhiTensor> {
    let first = forms.first().ok_or(Error::NoForms)?;
    let mut phi = PhiTensor::zeros(first.dim());
    for s in forms {
        check_dim(first.dim(), s.dim())?;
        let v = s.to_coords();
        phi.matrix += &v * v.transpose();
    }
    Ok(phi)
}

/// Split Φ into its total symmetrization `E` and curvature `Rm`.
pub fn decompose_phi(phi: &PhiTensor) -> (Sym4Form, AlgebraicCurvatureTensor) {
    let m = phi.dim;
    let values = sym_quads(m)
        .into_iter()
        .map(|[i, j, k, l]| (phi.component(i, j, k, l) + phi.component(i, k, j, l) + phi.component(i, l, j, k)) / 3.0)
        .collect();
    let e = Sym4Form::from_values(m, values).expect("sized by sym_quads");
    let p = pairs(m);
    let rm = DMatrix::from_fn(pair_count(m), pair_count(m), |a, b| {
        let (i, j) = p[a];
        let (k, l) = p[b];
        phi.component(i, k, j, l) - phi.component(i, l, j, k)
    });
    let rm = AlgebraicCurvatureTensor::from_biform_unchecked(Biform::from_matrix_unchecked(m, rm));
    (e, rm)
}

/// Inverse of [`decompose_phi`].
pub fn recompose_phi(e: &Sym4Form, rm: &AlgebraicCurvatureTensor) -> Result<PhiTensor> {
    check_dim(e.dim(), rm.dim())?;
    Ok(PhiTensor::from_components(e.dim(), |i, j, k, l| {
        e.get(i, j, k, l) + (rm.component(i, k, j, l) + rm.component(i, l, j, k)) / 3.0
    }))
}

/// The curvature part `⅓(Rm(X,Z,Y,W) + Rm(X,W,Y,Z))` as an element of S²(S²),
/// i.e. the projection of Φ onto the orthogonal complement of S⁴.
pub fn curvature_part(rm: &AlgebraicCurvatureTensor) -> PhiTensor {
    PhiTensor::from_components(rm.dim(), |i, j, k, l| (rm.component(i, k, j, l) + rm.component(i, l, j, k)) / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::biform::{kn_square, sphere_tensor};

    #[test]
    fn identity_form_gives_round_sphere() {
        let phi = phi_from_forms(&[Sym2Form::identity(2)]).unwrap();
        let x = DVector::from_vec(vec![1.0, 2.0]);
        let y = DVector::from_vec(vec![-1.0, 0.5]);
        let z = DVector::from_vec(vec![0.3, 0.3]);
        let w = DVector::from_vec(vec![2.0, -1.0]);
        assert!((phi.eval(&x, &y, &z, &w) - x.dot(&y) * z.dot(&w)).abs() < 1e-14);
        let (e, rm) = decompose_phi(&phi);
        assert!((rm.matrix() - sphere_tensor(2, 1.0).unwrap().matrix()).norm() < 1e-15);
        let h2 = Sym4Form::sym_square(&Sym2Form::identity(2));
        assert!(e.add(&h2.scale(-1.0)).unwrap().norm() < 1e-15);
    }

    #[test]
    fn diagonal_pair_phi() {
        let phi = phi_from_forms(&[Sym2Form::diag(&[1.0, 0.0]), Sym2Form::diag(&[0.0, 1.0])]).unwrap();
        let x = DVector::from_vec(vec![0.7, -1.3]);
        let z = DVector::from_vec(vec![2.0, 0.4]);
        // Φ(X,X,Z,Z) on "diagonal arguments" x_i = X_i² etc.
        let lhs = phi.eval(&x, &x, &z, &z);
        let rhs = x[0].powi(2) * z[0].powi(2) + x[1].powi(2) * z[1].powi(2);
        assert!((lhs - rhs).abs() < 1e-14);
    }

    #[test]
    fn gauss_equation() {
        let s = Sym2Form::from_rows(&[&[2.0, 0.5, 0.0], &[0.5, -1.0, 0.3], &[0.0, 0.3, 1.5]]).unwrap();
        let (_, rm) = decompose_phi(&PhiTensor::square(&s));
        assert!((rm.matrix() - kn_square(&s).matrix()).norm() < 1e-13);
    }

    #[test]
    fn components_respect_symmetries() {
        let phi = phi_from_forms(&[
            Sym2Form::from_rows(&[&[1.0, 2.0, 0.0], &[2.0, 0.0, 1.0], &[0.0, 1.0, 3.0]]).unwrap(),
            Sym2Form::diag(&[1.0, -1.0, 0.5]),
        ])
        .unwrap();
        let (i, j, k, l) = (0, 1, 2, 1);
        let v = phi.component(i, j, k, l);
        assert_eq!(phi.component(j, i, k, l), v);
        assert_eq!(phi.component(i, j, l, k), v);
        assert!((phi.component(k, l, i, j) - v).abs() < 1e-15);
    }

    #[test]
    fn empty_list_errors() {
        assert!(matches!(phi_from_forms(&[]), Err(Error::NoForms)));
        assert!(phi_from_forms(&[Sym2Form::identity(2), Sym2Form::identity(3)]).is_err());
    }

    #[test]
    fn sym4_round_trip_through_phi() {
        let e = Sym4Form::sym_square(&Sym2Form::diag(&[1.0, 2.0, 3.0]));
        let (e2, rm) = decompose_phi(&PhiTensor::from_sym4(&e));
        assert!(e2.add(&e.scale(-1.0)).unwrap().norm() < 1e-14);
        assert!(rm.norm() < 1e-14);
    }
}
