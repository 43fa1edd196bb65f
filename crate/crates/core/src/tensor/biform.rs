use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::bivector::{wedge_coords, Bivector, FourVector};
use super::index::{pair_count, pair_index, pairs, quads, signed_pair};
use super::sym2::{check_dim, symmetrize_checked, Sym2Form};
use crate::{Error, Result};

/// Default tolerance for exact-algebra identities.
pub const ALGEBRA_TOL: f64 = 1e-10;

/// A symmetric bilinear form on Λ²(ℝ^dim), i.e. an element of S²(Λ²).
///
/// The matrix is written in the orthonormal basis `{e_i∧e_j : i<j}`; the
/// associated 4-tensor is `R(X,Y,Z,W) = (X∧Y)ᵀ B (Z∧W)`. With this
/// normalization `pairing((x∧y)², (x∧y)²) = 1` for orthonormal `x, y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "super::io::TensorDoc", into = "super::io::TensorDoc")]
pub struct Biform {
    dim: usize,
    matrix: DMatrix<f64>,
}

impl Biform {
    pub fn new(dim: usize, matrix: DMatrix<f64>) -> Result<Self> {
        let n = pair_count(dim);
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimMismatch { expected: n, got: matrix.nrows() });
        }
        Ok(Self { dim, matrix: symmetrize_checked(matrix)? })
    }

    pub fn zeros(dim: usize) -> Self {
        let n = pair_count(dim);
        Self { dim, matrix: DMatrix::zeros(n, n) }
    }

    /// `φ ⊗ φ`.
    pub fn square(phi: &Bivector) -> Self {
        let v = phi.as_vector();
        Self { dim: phi.dim(), matrix: &v * v.transpose() }
    }

    pub(crate) fn from_matrix_unchecked(dim: usize, matrix: DMatrix<f64>) -> Self {
        debug_assert_eq!(matrix.nrows(), pair_count(dim));
        Self { dim, matrix: (&matrix + matrix.transpose()) * 0.5 }
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

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        Ok(Self { dim: self.dim, matrix: &self.matrix - &other.matrix })
    }

    /// `R(e_i, e_j, e_k, e_l)` with the antisymmetries applied.
    pub fn component(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        match (signed_pair(i, j, self.dim), signed_pair(k, l, self.dim)) {
            (Some((s1, a)), Some((s2, b))) => s1 * s2 * self.matrix[(a, b)],
            _ => 0.0,
        }
    }

    pub fn eval(&self, x: &DVector<f64>, y: &DVector<f64>, z: &DVector<f64>, w: &DVector<f64>) -> f64 {
        let xy = wedge_coords(x, y);
        let zw = wedge_coords(z, w);
        xy.dot(&(&self.matrix * zw))
    }

    /// `φᵀ B φ`.
    pub fn quadratic(&self, phi: &DVector<f64>) -> f64 {
        phi.dot(&(&self.matrix * phi))
    }

    /// Ascending eigenvalues of the matrix on Λ².
    pub fn spectrum(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.matrix.clone()).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }

    /// Orthogonal projection onto the Λ⁴ direction `e_i∧e_j∧e_k∧e_l`, as a
    /// biform with ±1 at the three pairings.
    pub fn four_form_embedding(dim: usize, q: [usize; 4]) -> Self {
        let mut b = Self::zeros(dim);
        let [i, j, k, l] = q;
        let mut set = |p: (usize, usize), r: (usize, usize), v: f64| {
            let a = pair_index(p.0, p.1, dim);
            let c = pair_index(r.0, r.1, dim);
            b.matrix[(a, c)] = v;
            b.matrix[(c, a)] = v;
        };
        set((i, j), (k, l), 1.0);
        set((i, k), (j, l), -1.0);
        set((i, l), (j, k), 1.0);
        b
    }

    /// Embedding of a four-vector ω = Σ c_q e_q as `Σ c_q · four_form_embedding(q)`.
    pub fn from_four_vector(w: &FourVector) -> Self {
        let mut b = Self::zeros(w.dim());
        for (q, c) in quads(w.dim()).into_iter().zip(w.coords()) {
            if *c != 0.0 {
                b.matrix += Self::four_form_embedding(w.dim(), q).matrix * *c;
            }
        }
        b
    }

    /// The induced action of `q` on Λ²: `(Λ²q)_{(ij),(kl)} = q_ik q_jl − q_il q_jk`.
    pub(crate) fn lambda2(q: &DMatrix<f64>) -> DMatrix<f64> {
        let m = q.nrows();
        let p = pairs(m);
        DMatrix::from_fn(p.len(), p.len(), |a, b| {
            let (i, j) = p[a];
            let (k, l) = p[b];
            q[(i, k)] * q[(j, l)] - q[(i, l)] * q[(j, k)]
        })
    }
}

/// An algebraic curvature tensor: a biform satisfying the first Bianchi identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Biform", into = "Biform")]
pub struct AlgebraicCurvatureTensor {
    biform: Biform,
}

impl TryFrom<Biform> for AlgebraicCurvatureTensor {
    type Error = Error;
    fn try_from(b: Biform) -> Result<Self> {
        Self::new(b)
    }
}

impl From<AlgebraicCurvatureTensor> for Biform {
    fn from(r: AlgebraicCurvatureTensor) -> Self {
        r.biform
    }
}

impl AlgebraicCurvatureTensor {
    /// Checks the Bianchi residual against [`ALGEBRA_TOL`].
    pub fn new(biform: Biform) -> Result<Self> {
        Self::with_tolerance(biform, ALGEBRA_TOL)
    }

    pub fn with_tolerance(biform: Biform, tol: f64) -> Result<Self> {
        let r = bianchi_residual(&biform);
        if r > tol {
            return Err(Error::BianchiViolation(r));
        }
        Ok(Self { biform })
    }

    pub(crate) fn from_biform_unchecked(biform: Biform) -> Self {
        Self { biform }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { biform: Biform::zeros(dim) }
    }

    pub fn biform(&self) -> &Biform {
        &self.biform
    }

    pub fn into_biform(self) -> Biform {
        self.biform
    }

    pub fn dim(&self) -> usize {
        self.biform.dim
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.biform.matrix
    }

    pub fn norm(&self) -> f64 {
        self.biform.norm()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { biform: self.biform.scale(c) }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self { biform: self.biform.add(&other.biform)? })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(Self { biform: self.biform.sub(&other.biform)? })
    }

    pub fn component(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.biform.component(i, j, k, l)
    }

    pub fn eval(&self, x: &DVector<f64>, y: &DVector<f64>, z: &DVector<f64>, w: &DVector<f64>) -> f64 {
        self.biform.eval(x, y, z, w)
    }

    /// `(x∧y)²` for orthonormal x, y: the curvature tensor of S²×ℝ^{m−2}
    /// with the S² factor along span(x, y).
    pub fn simple_square(phi: &Bivector) -> Result<Self> {
        Self::with_tolerance(Biform::square(phi), 1e-8 * phi.norm().powi(2).max(1.0))
    }
}

impl std::ops::Deref for AlgebraicCurvatureTensor {
    type Target = Biform;
    fn deref(&self) -> &Biform {
        &self.biform
    }
}

/// Relative size of the Λ⁴ component of `b`.
pub fn bianchi_residual(b: &Biform) -> f64 {
    let (_, four) = bianchi_split(b);
    let lam = Biform::from_four_vector(&four);
    lam.norm() / b.norm().max(f64::MIN_POSITIVE)
}

fn bianchi_split(b: &Biform) -> (Biform, FourVector) {
    let m = b.dim;
    let qs = quads(m);
    let mut lam = DMatrix::zeros(b.matrix.nrows(), b.matrix.ncols());
    let mut coeffs = Vec::with_capacity(qs.len());
    for q in qs {
        let [i, j, k, l] = q;
        let g = |a: (usize, usize), c: (usize, usize)| b.matrix[(pair_index(a.0, a.1, m), pair_index(c.0, c.1, m))];
        // ⟨B, W_q⟩ / ‖W_q‖² with ‖W_q‖² = 6 and ⟨B, W_q⟩ = 2(B_ij,kl − B_ik,jl + B_il,jk).
        let c = (g((i, j), (k, l)) - g((i, k), (j, l)) + g((i, l), (j, k))) / 3.0;
        coeffs.push(c);
        if c != 0.0 {
            lam += Biform::four_form_embedding(m, q).matrix * c;
        }
    }
    (Biform { dim: m, matrix: &b.matrix - lam }, FourVector::new(m, coeffs).expect("sized by quads"))
}

/// Orthogonal split `b = A + ι(ω)` into its algebraic-curvature part and its
/// Λ⁴ part, where `ι` is [`Biform::from_four_vector`].
pub fn bianchi_project(b: &Biform) -> (AlgebraicCurvatureTensor, FourVector) {
    let (a, w) = bianchi_split(b);
    (AlgebraicCurvatureTensor { biform: a }, w)
}

/// `R(X,Y,Z,W) = s(X,Z)s(Y,W) − s(X,W)s(Y,Z)`.
pub fn kn_square(s: &Sym2Form) -> AlgebraicCurvatureTensor {
    AlgebraicCurvatureTensor { biform: Biform { dim: s.dim(), matrix: Biform::lambda2(s.matrix()) } }
}

/// The constant-curvature tensor `κ·Q_{S^dim}`.
pub fn sphere_tensor(dim: usize, kappa: f64) -> Result<AlgebraicCurvatureTensor> {
    if dim < 2 {
        return Err(Error::InvalidDim { dim, reason: "sphere tensor needs dim ≥ 2" });
    }
    let n = pair_count(dim);
    Ok(AlgebraicCurvatureTensor { biform: Biform { dim, matrix: DMatrix::identity(n, n) * kappa } })
}

/// Curvature tensor of S²×ℝ^{dim−2}, the S² factor along `e_1, e_2`.
pub fn product_tensor(dim: usize) -> Result<AlgebraicCurvatureTensor> {
    if dim < 2 {
        return Err(Error::InvalidDim { dim, reason: "product tensor needs dim ≥ 2" });
    }
    Ok(AlgebraicCurvatureTensor { biform: Biform::square(&Bivector::basis(dim, 0, 1)) })
}

/// Frobenius pairing of the biform matrices.
pub fn pairing(a: &Biform, b: &Biform) -> Result<f64> {
    check_dim(a.dim, b.dim)?;
    Ok(a.matrix.dot(&b.matrix))
}

/// `Rm(x,y,x,y) / |x∧y|²`.
pub fn sectional(rm: &Biform, x: &DVector<f64>, y: &DVector<f64>) -> Result<f64> {
    check_dim(rm.dim, x.len())?;
    check_dim(rm.dim, y.len())?;
    let xy = wedge_coords(x, y);
    let n2 = xy.norm_squared();
    if n2.sqrt() < 1e-12 {
        return Err(Error::DegeneratePlane(n2.sqrt()));
    }
    Ok(rm.quadratic(&xy) / n2)
}

/// Pack a symmetric matrix so the Euclidean dot product of packings equals
/// the Frobenius product: diagonal as is, off-diagonal times √2.
pub(crate) fn pack_symmetric(a: &DMatrix<f64>) -> DVector<f64> {
    let n = a.nrows();
    let mut v = DVector::zeros(n * (n + 1) / 2);
    let mut p = 0;
    for i in 0..n {
        for j in i..n {
            v[p] = if i == j { a[(i, i)] } else { std::f64::consts::SQRT_2 * a[(i, j)] };
            p += 1;
        }
    }
    v
}

pub(crate) fn unpack_symmetric(n: usize, v: &DVector<f64>) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(n, n);
    let mut p = 0;
    for i in 0..n {
        for j in i..n {
            if i == j {
                a[(i, i)] = v[p];
            } else {
                let x = v[p] / std::f64::consts::SQRT_2;
                a[(i, j)] = x;
                a[(j, i)] = x;
            }
            p += 1;
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(m: usize, i: usize) -> DVector<f64> {
        let mut v = DVector::zeros(m);
        v[i] = 1.0;
        v
    }

    #[test]
    fn kn_square_of_identity_is_round_sphere() {
        let r = kn_square(&Sym2Form::identity(3));
        assert_eq!(r, sphere_tensor(3, 1.0).unwrap());
        let x = DVector::from_vec(vec![1.0, 2.0, -1.0]);
        let y = DVector::from_vec(vec![0.5, 0.0, 3.0]);
        assert!((sectional(&r, &x, &y).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn kn_square_diag_sectionals() {
        let l = [1.0, 2.0, 3.0, -0.5];
        let r = kn_square(&Sym2Form::diag(&l));
        for i in 0..4 {
            for j in i + 1..4 {
                let k = sectional(&r, &unit(4, i), &unit(4, j)).unwrap();
                assert_eq!(k, l[i] * l[j]);
            }
        }
        // Σ_{i<j} λ_iλ_j (e_i∧e_j)², coefficient-wise.
        let mut expected = Biform::zeros(4);
        for i in 0..4 {
            for j in i + 1..4 {
                expected = expected.add(&Biform::square(&Bivector::basis(4, i, j)).scale(l[i] * l[j])).unwrap();
            }
        }
        assert_eq!(r.biform(), &expected);
    }

    #[test]
    fn projection_square_is_product_tensor() {
        let p = Sym2Form::projection(5, &[unit(5, 0), unit(5, 1)]).unwrap();
        let r = kn_square(&p);
        assert!((r.matrix() - product_tensor(5).unwrap().matrix()).norm() < 1e-15);
    }

    #[test]
    fn bianchi_split_of_mixed_square() {
        // (e1∧e2)⊗(e3∧e4) symmetrized: its Λ⁴ part is along the volume form.
        let a = Bivector::basis(4, 0, 1).as_vector();
        let b = Bivector::basis(4, 2, 3).as_vector();
        let m = (&a * b.transpose() + &b * a.transpose()) * 0.5;
        let bf = Biform::new(4, m).unwrap();
        let (rm, w) = bianchi_project(&bf);
        // Brute-force projection onto span(W) with ‖W‖² = 6: ⟨b, W⟩ = 1, so c = 1/6.
        let wf = Biform::four_form_embedding(4, [0, 1, 2, 3]);
        let c = pairing(&bf, &wf).unwrap() / pairing(&wf, &wf).unwrap();
        assert!((c - 1.0 / 6.0).abs() < 1e-15);
        assert!((w.coords()[0] - c).abs() < 1e-15);
        assert!(pairing(rm.biform(), &wf).unwrap().abs() < 1e-15);
        assert!(bianchi_residual(rm.biform()) < 1e-15);
    }

    #[test]
    fn pairing_examples() {
        let s12 = Biform::square(&Bivector::basis(4, 0, 1));
        let s34 = Biform::square(&Bivector::basis(4, 2, 3));
        assert_eq!(pairing(&s12, &s12).unwrap(), 1.0);
        assert_eq!(pairing(&s12, &s34).unwrap(), 0.0);
        assert_eq!(pairing(sphere_tensor(4, 1.0).unwrap().biform(), &s12).unwrap(), 1.0);
        assert!(pairing(&s12, &Biform::zeros(3)).is_err());
    }

    #[test]
    fn sectional_errors_on_degenerate_plane() {
        let r = sphere_tensor(3, 1.0).unwrap();
        let x = unit(3, 0);
        assert!(matches!(sectional(&r, &x, &(&x * 2.0)), Err(Error::DegeneratePlane(_))));
    }

    #[test]
    fn sphere_tensor_constant_curvature() {
        assert!(sphere_tensor(1, 1.0).is_err());
        assert_eq!(sphere_tensor(5, 0.0).unwrap().norm(), 0.0);
        let r = sphere_tensor(4, -1.0).unwrap();
        let x = DVector::from_vec(vec![1.0, 0.3, 0.0, 2.0]);
        let y = DVector::from_vec(vec![0.0, 1.0, 1.0, -1.0]);
        assert!((sectional(&r, &x, &y).unwrap() + 1.0).abs() < 1e-14);
    }

    #[test]
    fn component_antisymmetry() {
        let r = kn_square(&Sym2Form::from_rows(&[&[2.0, 1.0, 0.0], &[1.0, 3.0, 0.5], &[0.0, 0.5, 1.0]]).unwrap());
        for (i, j, k, l) in [(0, 1, 0, 2), (1, 2, 0, 1), (0, 2, 1, 2)] {
            let v = r.component(i, j, k, l);
            assert_eq!(r.component(j, i, k, l), -v);
            assert_eq!(r.component(i, j, l, k), -v);
            assert_eq!(r.component(k, l, i, j), v);
        }
    }
}
