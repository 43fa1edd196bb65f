use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::index::{sym_pair_count, sym_pairs};
use crate::{Error, Result};

/// A quadratic form `s` on ℝ^dim, stored in the standard orthonormal frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "super::io::TensorDoc", into = "super::io::TensorDoc")]
pub struct Sym2Form {
    entries: DMatrix<f64>,
}

impl Sym2Form {
    /// Accepts matrices symmetric to within 1e-12 of their norm and
    /// symmetrizes them exactly.
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::InvalidInput(format!(
                "form must be square, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if entries.nrows() == 0 {
            return Err(Error::InvalidDim { dim: 0, reason: "forms need dim ≥ 1" });
        }
        Ok(Self { entries: symmetrize_checked(entries)? })
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let m = rows.len();
        let mut e = DMatrix::zeros(m, m);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::DimMismatch { expected: m, got: row.len() });
            }
            for (j, v) in row.iter().enumerate() {
                e[(i, j)] = *v;
            }
        }
        Self::new(e)
    }

    pub fn identity(dim: usize) -> Self {
        Self { entries: DMatrix::identity(dim, dim) }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { entries: DMatrix::zeros(dim, dim) }
    }

    pub fn diag(values: &[f64]) -> Self {
        Self { entries: DMatrix::from_diagonal(&DVector::from_column_slice(values)) }
    }

    /// Orthogonal projection onto the span of the given vectors.
    pub fn projection(dim: usize, span: &[DVector<f64>]) -> Result<Self> {
        let mut basis: Vec<DVector<f64>> = Vec::new();
        for v in span {
            if v.len() != dim {
                return Err(Error::DimMismatch { expected: dim, got: v.len() });
            }
            let mut w = v.clone();
            for b in &basis {
                w -= b * b.dot(&w);
            }
            let n = w.norm();
            if n > 1e-12 {
                basis.push(w / n);
            }
        }
        let mut p = DMatrix::zeros(dim, dim);
        for b in &basis {
            p += b * b.transpose();
        }
        Ok(Self { entries: (&p + p.transpose()) * 0.5 })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn eval(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        x.dot(&(&self.entries * y))
    }

    pub fn norm(&self) -> f64 {
        self.entries.norm()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { entries: &self.entries * c }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim(), other.dim())?;
        Ok(Self { entries: &self.entries + &other.entries })
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.entries.clone()).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// Minimum eigenvalue and a unit eigenvector attaining it.
    pub fn min_eigenpair(&self) -> (f64, DVector<f64>) {
        let eig = SymmetricEigen::new(self.entries.clone());
        let (k, v) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(k, v)| (k, *v))
            .expect("non-empty form");
        (v, eig.eigenvectors.column(k).into_owned())
    }

    /// Coordinates in the orthonormal S² basis
    /// `{e_i⊗e_i} ∪ {(e_i⊗e_j + e_j⊗e_i)/√2}`.
    pub fn to_coords(&self) -> DVector<f64> {
        let m = self.dim();
        let mut c = DVector::zeros(sym_pair_count(m));
        for (n, (i, j)) in sym_pairs(m).into_iter().enumerate() {
            c[n] = if i == j { self.entries[(i, i)] } else { std::f64::consts::SQRT_2 * self.entries[(i, j)] };
        }
        c
    }

    pub fn from_coords(dim: usize, coords: &DVector<f64>) -> Result<Self> {
        if coords.len() != sym_pair_count(dim) {
            return Err(Error::DimMismatch { expected: sym_pair_count(dim), got: coords.len() });
        }
        let mut e = DMatrix::zeros(dim, dim);
        for (n, (i, j)) in sym_pairs(dim).into_iter().enumerate() {
            if i == j {
                e[(i, i)] = coords[n];
            } else {
                let v = coords[n] / std::f64::consts::SQRT_2;
                e[(i, j)] = v;
                e[(j, i)] = v;
            }
        }
        Ok(Self { entries: e })
    }

    /// `qᵀ s q`: the form pulled back along `x ↦ q x`.
    pub fn pullback(&self, q: &DMatrix<f64>) -> Result<Self> {
        check_dim(self.dim(), q.nrows())?;
        let e = q.transpose() * &self.entries * q;
        Ok(Self { entries: (&e + e.transpose()) * 0.5 })
    }
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimMismatch { expected, got })
    }
}

/// Symmetrize after checking the asymmetry is at rounding level.
pub(crate) fn symmetrize_checked(m: DMatrix<f64>) -> Result<DMatrix<f64>> {
    let asym = (&m - m.transpose()).norm();
    let scale = m.norm().max(f64::MIN_POSITIVE);
    if !m.iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidInput("non-finite entry".into()));
    }
    if asym > 1e-12 * scale {
        return Err(Error::InvalidInput(format!("matrix is not symmetric (asymmetry {asym:e})")));
    }
    Ok((&m + m.transpose()) * 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coords_roundtrip_and_isometry() {
        let s = Sym2Form::from_rows(&[&[1.0, 2.0, 0.5], &[2.0, -1.0, 3.0], &[0.5, 3.0, 4.0]]).unwrap();
        let c = s.to_coords();
        assert!((c.norm() - s.norm()).abs() < 1e-14);
        assert_eq!(Sym2Form::from_coords(3, &c).unwrap(), s);
    }

    #[test]
    fn rejects_asymmetric() {
        assert!(Sym2Form::from_rows(&[&[1.0, 2.0], &[0.0, 1.0]]).is_err());
    }

    #[test]
    fn projection_is_idempotent() {
        let v1 = DVector::from_vec(vec![1.0, 1.0, 0.0]);
        let v2 = DVector::from_vec(vec![0.0, 1.0, 1.0]);
        let p = Sym2Form::projection(3, &[v1, v2]).unwrap();
        let p2 = p.matrix() * p.matrix();
        assert!((p2 - p.matrix()).norm() < 1e-14);
        assert!((p.matrix().trace() - 2.0).abs() < 1e-14);
    }
}
