use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::index::{pair_count, pair_index, pairs, quads, sort4_signed};
use crate::{Error, Result};

/// An element of Λ²(ℝ^dim) in the orthonormal basis `{e_i∧e_j : i < j}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bivector {
    dim: usize,
    coords: Vec<f64>,
}

impl Bivector {
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != pair_count(dim) {
            return Err(Error::DimMismatch { expected: pair_count(dim), got: coords.len() });
        }
        Ok(Self { dim, coords })
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, coords: vec![0.0; pair_count(dim)] }
    }

    /// The basis element `e_i ∧ e_j` (sign-adjusted when `i > j`).
    pub fn basis(dim: usize, i: usize, j: usize) -> Self {
        let mut b = Self::zeros(dim);
        if i < j {
            b.coords[pair_index(i, j, dim)] = 1.0;
        } else if j < i {
            b.coords[pair_index(j, i, dim)] = -1.0;
        }
        b
    }

    /// `x ∧ y` with coordinates `x_i y_j − x_j y_i`.
    pub fn wedge(x: &DVector<f64>, y: &DVector<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::DimMismatch { expected: x.len(), got: y.len() });
        }
        Ok(Self::from_vector(x.len(), wedge_coords(x, y)))
    }

    pub(crate) fn from_vector(dim: usize, v: DVector<f64>) -> Self {
        Self { dim, coords: v.iter().copied().collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn as_vector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.coords)
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { dim: self.dim, coords: self.coords.iter().map(|v| v * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        super::sym2::check_dim(self.dim, other.dim)?;
        Ok(Self { dim: self.dim, coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect() })
    }

    /// Skew matrix `A` with `A[i][j] = φ_ij`, `A[j][i] = −φ_ij`.
    pub fn to_skew(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.dim, self.dim);
        for (n, (i, j)) in pairs(self.dim).into_iter().enumerate() {
            a[(i, j)] = self.coords[n];
            a[(j, i)] = -self.coords[n];
        }
        a
    }

    pub fn from_skew(a: &DMatrix<f64>) -> Self {
        let dim = a.nrows();
        let coords = pairs(dim).into_iter().map(|(i, j)| 0.5 * (a[(i, j)] - a[(j, i)])).collect();
        Self { dim, coords }
    }

    /// Flip the sign so the first coordinate with |c| > 1e-12 is positive.
    pub fn canonical_sign(&self) -> Self {
        match self.coords.iter().find(|c| c.abs() > 1e-12) {
            Some(c) if *c < 0.0 => self.scale(-1.0),
            _ => self.clone(),
        }
    }
}

/// An element of Λ⁴(ℝ^dim) in the orthonormal basis `{e_i∧e_j∧e_k∧e_l : i<j<k<l}`.
/// Empty when `dim < 4`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourVector {
    dim: usize,
    coords: Vec<f64>,
}

impl FourVector {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, coords: vec![0.0; quads(dim).len()] }
    }

    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        let n = quads(dim).len();
        if coords.len() != n {
            return Err(Error::DimMismatch { expected: n, got: coords.len() });
        }
        Ok(Self { dim, coords })
    }

    /// The volume form `e_1∧…∧e_4` in dimension 4.
    pub fn volume_form() -> Self {
        Self { dim: 4, coords: vec![1.0] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Coefficient of `e_a∧e_b∧e_c∧e_d` for arbitrary (distinct) indices,
    /// accounting for the reordering sign.
    pub fn component(&self, idx: [usize; 4]) -> f64 {
        match sort4_signed(idx) {
            None => 0.0,
            Some((sign, sorted)) => {
                let pos = quads(self.dim).iter().position(|q| *q == sorted).expect("index in range");
                sign * self.coords[pos]
            }
        }
    }
}

pub(crate) fn wedge_coords(x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
    let m = x.len();
    DVector::from_iterator(pair_count(m), pairs(m).into_iter().map(|(i, j)| x[i] * y[j] - x[j] * y[i]))
}

/// `φ ∧ φ`. The coefficient on `e_i∧e_j∧e_k∧e_l` is
/// `2(φ_ij φ_kl − φ_ik φ_jl + φ_il φ_jk)`: cross terms of the expansion appear twice,
/// so `(e1∧e2 + e3∧e4)∧(e1∧e2 + e3∧e4) = 2·e1∧e2∧e3∧e4`.
pub fn wedge_square(phi: &Bivector) -> FourVector {
    let m = phi.dim;
    let c = |i, j| phi.coords[pair_index(i, j, m)];
    let coords = quads(m)
        .into_iter()
        .map(|[i, j, k, l]| 2.0 * (c(i, j) * c(k, l) - c(i, k) * c(j, l) + c(i, l) * c(j, k)))
        .collect();
    FourVector { dim: m, coords }
}

/// `‖φ∧φ‖ ≤ tol·‖φ‖²`.
pub fn is_simple(phi: &Bivector, tol: f64) -> bool {
    let n = phi.norm();
    wedge_square(phi).norm() <= tol * n * n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wedge_square_examples() {
        let e12 = Bivector::basis(4, 0, 1);
        assert_eq!(wedge_square(&e12).norm(), 0.0);
        let phi = e12.add(&Bivector::basis(4, 2, 3)).unwrap();
        assert_eq!(wedge_square(&phi).coords(), &[2.0]);
        assert!(is_simple(&e12, 1e-10));
        assert!(!is_simple(&phi, 1e-10));
        assert!(is_simple(&Bivector::zeros(5), 1e-10));
    }

    #[test]
    fn dim_below_four_has_empty_four_vectors() {
        let phi = Bivector::new(3, vec![1.0, 2.0, 3.0]).unwrap();
        assert!(wedge_square(&phi).coords().is_empty());
        assert!(is_simple(&phi, 1e-10));
    }

    #[test]
    fn component_reorders_with_sign() {
        let w = FourVector::new(5, (0..5).map(|v| v as f64 + 1.0).collect()).unwrap();
        assert_eq!(w.component([1, 0, 2, 3]), -1.0);
        assert_eq!(w.component([0, 1, 2, 4]), 2.0);
        assert_eq!(w.component([0, 0, 2, 4]), 0.0);
    }

    #[test]
    fn skew_roundtrip() {
        let phi = Bivector::new(4, vec![1.0, -2.0, 3.0, 0.5, -0.25, 7.0]).unwrap();
        assert_eq!(Bivector::from_skew(&phi.to_skew()), phi);
    }
}
