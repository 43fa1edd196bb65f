//! Orthonormal real bases of su(n) and their structure constants.

use nalgebra::{Complex, DMatrix, DVector};

use crate::{Error, Result};

pub type CMatrix = DMatrix<Complex<f64>>;

/// `⟨X, Y⟩ = −½ Re tr(XY)`, bi-invariant on su(n). The off-diagonal basis
/// elements `E_jk − E_kj` and `i(E_jk + E_kj)` have unit length under it.
pub fn killing_inner(x: &CMatrix, y: &CMatrix) -> f64 {
    -0.5 * (x * y).trace().re
}

pub fn bracket(x: &CMatrix, y: &CMatrix) -> CMatrix {
    x * y - y * x
}

#[derive(Debug, Clone)]
pub struct LieBasis {
    pub n: usize,
    pub names: Vec<String>,
    pub basis: Vec<CMatrix>,
    /// `c[i][j][k]` with `[b_i, b_j] = Σ_k c_ijk b_k`.
    pub structure: Vec<Vec<Vec<f64>>>,
}

fn unit(n: usize, i: usize, j: usize, v: Complex<f64>) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    m[(i, j)] = v;
    m
}

fn real_skew(n: usize, j: usize, k: usize) -> CMatrix {
    unit(n, j, k, Complex::new(1.0, 0.0)) - unit(n, k, j, Complex::new(1.0, 0.0))
}

fn imag_sym(n: usize, j: usize, k: usize) -> CMatrix {
    unit(n, j, k, Complex::new(0.0, 1.0)) + unit(n, k, j, Complex::new(0.0, 1.0))
}

fn idiag(values: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&DVector::from_iterator(values.len(), values.iter().map(|v| Complex::new(0.0, *v))))
}

impl LieBasis {
    /// The su(3) basis `A₁, A₂', F₁, F₂, F₃, E₁, E₂, E₃` with
    /// `A₁ = diag(i, 0, −i)`, `A₂' = (2A₂ − A₁)/√3` for `A₂ = diag(0, i, −i)`,
    /// `F₁ = e₂∧e₃, F₂ = e₃∧e₁, F₃ = e₁∧e₂` and `E_k = i·(symmetric product)`.
    ///
    /// `A₁` and `A₂` are not orthogonal (`⟨A₁, A₂⟩ = ½`), hence the
    /// replacement of `A₂`; it does not affect any `F_k∧E_k` coordinate.
    pub fn su3() -> Self {
        let s3 = 3f64.sqrt();
        let a1 = idiag(&[1.0, 0.0, -1.0]);
        let a2 = idiag(&[-1.0 / s3, 2.0 / s3, -1.0 / s3]);
        let pairs = [(1, 2), (2, 0), (0, 1)];
        let mut basis = vec![a1, a2];
        basis.extend(pairs.iter().map(|&(j, k)| real_skew(3, j, k)));
        basis.extend(pairs.iter().map(|&(j, k)| imag_sym(3, j, k)));
        let names = ["A1", "A2'", "F1", "F2", "F3", "E1", "E2", "E3"].iter().map(|s| s.to_string()).collect();
        Self::from_basis(3, names, basis)
    }

    /// Generic su(n) basis: orthonormalized traceless diagonals, then
    /// `E_jk − E_kj` and `i(E_jk + E_kj)` for `j < k`.
    pub fn su(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDim { dim: n, reason: "su(n) needs n ≥ 2" });
        }
        if n == 3 {
            return Ok(Self::su3());
        }
        let mut basis = Vec::new();
        let mut names = Vec::new();
        // diag(1, …, 1, −k, 0, …) normalized: an orthogonal family.
        for k in 1..n {
            let mut d = vec![0.0; n];
            for v in d.iter_mut().take(k) {
                *v = 1.0;
            }
            d[k] = -(k as f64);
            let norm = (d.iter().map(|v| v * v).sum::<f64>() / 2.0).sqrt();
            basis.push(idiag(&d.iter().map(|v| v / norm).collect::<Vec<_>>()));
            names.push(format!("H{k}"));
        }
        for j in 0..n {
            for k in j + 1..n {
                basis.push(real_skew(n, j, k));
                names.push(format!("F{}{}", j + 1, k + 1));
            }
        }
        for j in 0..n {
            for k in j + 1..n {
                basis.push(imag_sym(n, j, k));
                names.push(format!("E{}{}", j + 1, k + 1));
            }
        }
        Ok(Self::from_basis(n, names, basis))
    }

    fn from_basis(n: usize, names: Vec<String>, basis: Vec<CMatrix>) -> Self {
        let d = basis.len();
        let structure = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let br = bracket(&basis[i], &basis[j]);
                        (0..d).map(|k| killing_inner(&basis[k], &br)).collect()
                    })
                    .collect()
            })
            .collect();
        Self { n, names, basis, structure }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of an element of su(n) in this (orthonormal) basis.
    pub fn coords(&self, x: &CMatrix) -> DVector<f64> {
        DVector::from_iterator(self.dim(), self.basis.iter().map(|b| killing_inner(b, x)))
    }

    pub fn element(&self, coords: &DVector<f64>) -> CMatrix {
        self.basis
            .iter()
            .zip(coords.iter())
            .fold(CMatrix::zeros(self.n, self.n), |acc, (b, c)| acc + b * Complex::new(*c, 0.0))
    }

    /// Matrix of `ad_x` on coordinates: `M_pq = ⟨b_p, [x, b_q]⟩`.
    pub fn ad_matrix(&self, x: &CMatrix) -> DMatrix<f64> {
        let d = self.dim();
        let images: Vec<CMatrix> = self.basis.iter().map(|b| bracket(x, b)).collect();
        DMatrix::from_fn(d, d, |p, q| killing_inner(&self.basis[p], &images[q]))
    }

    /// Matrix of `Ad_g : Y ↦ g Y g⁻¹` for unitary `g`.
    pub fn adjoint_action(&self, g: &CMatrix) -> DMatrix<f64> {
        let ginv = g.adjoint();
        let d = self.dim();
        let images: Vec<CMatrix> = self.basis.iter().map(|b| g * b * &ginv).collect();
        DMatrix::from_fn(d, d, |p, q| killing_inner(&self.basis[p], &images[q]))
    }

    /// Largest deviation of the basis Gram matrix from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((killing_inner(&self.basis[i], &self.basis[j]) - target).abs());
            }
        }
        worst
    }

    /// Largest deviation of `[b_i, b_j]` from `Σ_k c_ijk b_k`.
    pub fn structure_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let br = bracket(&self.basis[i], &self.basis[j]);
                let rebuilt = self.element(&DVector::from_vec(self.structure[i][j].clone()));
                worst = worst.max((br - rebuilt).iter().map(|z| z.norm()).fold(0.0, f64::max));
            }
        }
        worst
    }

    /// Largest Jacobi-identity residual `Σ_l (c_ijl c_lkm + c_jkl c_lim + c_kil c_ljm)`.
    pub fn jacobi_defect(&self) -> f64 {
        let d = self.dim();
        let c = &self.structure;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for m in 0..d {
                        let s: f64 = (0..d).map(|l| c[i][j][l] * c[l][k][m] + c[j][k][l] * c[l][i][m] + c[k][i][l] * c[l][j][m]).sum();
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }
}

/// Exponential of a skew-Hermitian matrix by scaling and squaring of the
/// Taylor series.
pub fn exp_matrix(x: &CMatrix) -> CMatrix {
    let n = x.nrows();
    let norm = x.iter().map(|z| z.norm()).fold(0.0, f64::max) * n as f64;
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let y = x * Complex::new(0.5f64.powi(squarings as i32), 0.0);
    let mut term = CMatrix::identity(n, n);
    let mut sum = term.clone();
    for k in 1..30 {
        term = &term * &y * Complex::new(1.0 / k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}
