use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::index::{multiplicity, sym_quads};
use super::sym2::{check_dim, Sym2Form};
use crate::{Error, Result};

/// A totally symmetric 4-tensor `E` on ℝ^dim.
///
/// Stored once per sorted multi-index `i ≤ j ≤ k ≤ l`; the quartic
/// `X ↦ E(X,X,X,X)` determines it completely. The inner product is the
/// one induced from T⁴, `⟨E, F⟩ = Σ_{ijkl} E_ijkl F_ijkl`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "super::io::TensorDoc", into = "super::io::TensorDoc")]
pub struct Sym4Form {
    dim: usize,
    values: Vec<f64>,
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r = 1usize;
    for t in 0..k {
        r = r * (n - t) / (t + 1);
    }
    r
}

/// Lexicographic rank of a weakly increasing multi-index.
fn rank(q: [usize; 4], m: usize) -> usize {
    // Multisets of size r over an alphabet of size a: C(a + r − 1, r).
    let mut r = 0;
    let mut prev = 0;
    for (p, &v) in q.iter().enumerate() {
        let rem = 3 - p;
        for u in prev..v {
            r += binom(m - u + rem - 1, rem);
        }
        prev = v;
    }
    r
}

fn sorted(mut q: [usize; 4]) -> [usize; 4] {
    q.sort_unstable();
    q
}

impl Sym4Form {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, values: vec![0.0; sym_quads(dim).len()] }
    }

    /// Values on the sorted multi-indices of [`super::index::sym_quads`].
    pub fn from_values(dim: usize, values: Vec<f64>) -> Result<Self> {
        let n = sym_quads(dim).len();
        if values.len() != n {
            return Err(Error::DimMismatch { expected: n, got: values.len() });
        }
        Ok(Self { dim, values })
    }

    /// From a dense row-major `dim⁴` array, which must be totally symmetric
    /// to within 1e-12 of its largest entry.
    pub fn from_full(dim: usize, data: &[f64]) -> Result<Self> {
        let n = dim.pow(4);
        if data.len() != n {
            return Err(Error::DimMismatch { expected: n, got: data.len() });
        }
        let scale = data.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(f64::MIN_POSITIVE);
        let mut out = Self::zeros(dim);
        let mut count = vec![0usize; out.values.len()];
        let mut first = vec![f64::NAN; out.values.len()];
        for (flat, v) in data.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::InvalidInput("non-finite entry".into()));
            }
            let q = [flat / dim.pow(3), (flat / dim.pow(2)) % dim, (flat / dim) % dim, flat % dim];
            let r = rank(sorted(q), dim);
            if count[r] == 0 {
                first[r] = *v;
            } else if (first[r] - v).abs() > 1e-12 * scale {
                return Err(Error::InvalidInput(format!("4-tensor is not totally symmetric at {q:?}")));
            }
            out.values[r] += v;
            count[r] += 1;
        }
        for (v, c) in out.values.iter_mut().zip(count) {
            *v /= c as f64;
        }
        Ok(out)
    }

    /// From the monomial coefficients of the quartic `E(X,X,X,X)`, keyed by
    /// exponent multi-index (sorted variable list, e.g. `[0,0,1,1]` ↔ x₀²x₁²).
    pub fn from_quartic(dim: usize, terms: &[([usize; 4], f64)]) -> Result<Self> {
        let mut out = Self::zeros(dim);
        for (q, c) in terms {
            if q.iter().any(|&i| i >= dim) {
                return Err(Error::InvalidInput(format!("monomial index {q:?} out of range")));
            }
            let q = sorted(*q);
            out.values[rank(q, dim)] += c / multiplicity(&q);
        }
        Ok(out)
    }

    /// The symmetric square `s∘²`, the total symmetrization of `s ⊗ s`;
    /// its quartic is `s(X,X)²`.
    pub fn sym_square(s: &Sym2Form) -> Self {
        let m = s.dim();
        let values = sym_quads(m)
            .into_iter()
            .map(|[i, j, k, l]| (s.get(i, j) * s.get(k, l) + s.get(i, k) * s.get(j, l) + s.get(i, l) * s.get(j, k)) / 3.0)
            .collect();
        Self { dim: m, values }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.values[rank(sorted([i, j, k, l]), self.dim)]
    }

    pub fn quartic(&self, x: &DVector<f64>) -> f64 {
        sym_quads(self.dim)
            .iter()
            .zip(&self.values)
            .map(|(q, v)| multiplicity(q) * v * x[q[0]] * x[q[1]] * x[q[2]] * x[q[3]])
            .sum()
    }

    /// Full multilinear evaluation `E(X, Y, Z, W)`.
    pub fn eval(&self, x: &DVector<f64>, y: &DVector<f64>, z: &DVector<f64>, w: &DVector<f64>) -> f64 {
        let m = self.dim;
        let mut acc = 0.0;
        for i in 0..m {
            for j in 0..m {
                let xy = x[i] * y[j];
                if xy == 0.0 {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        acc += xy * z[k] * w[l] * self.get(i, j, k, l);
                    }
                }
            }
        }
        acc
    }

    /// `∇ E(X,X,X,X) = 4 E(X,X,X,·)`.
    pub fn quartic_gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        let m = self.dim;
        let mut g = DVector::zeros(m);
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    let xyz = x[i] * x[j] * x[k];
                    for l in 0..m {
                        g[l] += xyz * self.get(i, j, k, l);
                    }
                }
            }
        }
        g * 4.0
    }

    pub fn inner(&self, other: &Self) -> Result<f64> {
        check_dim(self.dim, other.dim)?;
        Ok(sym_quads(self.dim)
            .iter()
            .zip(self.values.iter().zip(&other.values))
            .map(|(q, (a, b))| multiplicity(q) * a * b)
            .sum())
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).expect("same dim").sqrt()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { dim: self.dim, values: self.values.iter().map(|v| v * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        Ok(Self { dim: self.dim, values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect() })
    }

    /// Dense row-major `dim⁴` array.
    pub fn to_full(&self) -> Vec<f64> {
        let m = self.dim;
        let mut out = vec![0.0; m.pow(4)];
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    for l in 0..m {
                        out[((i * m + j) * m + k) * m + l] = self.get(i, j, k, l);
                    }
                }
            }
        }
        out
    }

    /// Packed coordinates (weighted by √multiplicity) whose Euclidean dot
    /// product equals [`Sym4Form::inner`].
    pub(crate) fn packed(&self) -> DVector<f64> {
        DVector::from_iterator(
            self.values.len(),
            sym_quads(self.dim).iter().zip(&self.values).map(|(q, v)| multiplicity(q).sqrt() * v),
        )
    }

    pub(crate) fn from_packed(dim: usize, v: &DVector<f64>) -> Self {
        let values = sym_quads(dim).iter().zip(v.iter()).map(|(q, x)| x / multiplicity(q).sqrt()).collect();
        Self { dim, values }
    }

    /// `E'(X,Y,Z,W) = E(qX, qY, qZ, qW)`.
    pub fn pullback(&self, q: &DMatrix<f64>) -> Result<Self> {
        check_dim(self.dim, q.nrows())?;
        let m = self.dim;
        let mut t = self.to_full();
        // Contract one mode at a time: t'[.., a, ..] = Σ_b q[b, a] t[.., b, ..].
        for mode in 0..4 {
            let stride = m.pow(3 - mode as u32);
            let mut next = vec![0.0; t.len()];
            for (flat, slot) in next.iter_mut().enumerate() {
                let a = (flat / stride) % m;
                let base = flat - a * stride;
                let mut acc = 0.0;
                for b in 0..m {
                    acc += q[(b, a)] * t[base + b * stride];
                }
                *slot = acc;
            }
            t = next;
        }
        Self::from_full(m, &t)
    }
}
