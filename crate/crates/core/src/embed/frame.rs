use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Relative tolerance of the quartic identity `Σ lᵢ(x)⁴ = λ|x|⁴`.
pub const FRAME_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameKind {
    Coordinate,
    Circle,
    Icosahedral,
    /// Sign vectors plus weighted axes, for any dimension.
    Composed,
}

/// Linear forms `lᵢ(x) = wᵢ⟨uᵢ, x⟩` with `Σ lᵢ(x)⁴ = λ|x|⁴`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinearFormFrame {
    pub kind: FrameKind,
    pub dim: usize,
    /// Unit vectors `uᵢ`.
    pub directions: Vec<Vec<f64>>,
    /// Weights `wᵢ` (1 for the designed frames).
    pub weights: Vec<f64>,
    pub lambda: f64,
}

impl LinearFormFrame {
    fn checked(kind: FrameKind, dim: usize, forms: Vec<DVector<f64>>, lambda: f64) -> Result<Self> {
        let weights: Vec<f64> = forms.iter().map(|f| f.norm()).collect();
        let directions = forms.iter().zip(&weights).map(|(f, w)| (f / *w).iter().copied().collect()).collect();
        let frame = Self { kind, dim, directions, weights, lambda };
        let residual = frame.identity_residual(64);
        if residual > FRAME_TOL {
            return Err(Error::UnsupportedFrame(format!("{kind:?} frame in dim {dim}: quartic identity residual {residual:e}")));
        }
        Ok(frame)
    }

    /// The forms `wᵢuᵢ` as vectors.
    pub fn forms(&self) -> Vec<DVector<f64>> {
        self.directions.iter().zip(&self.weights).map(|(u, w)| DVector::from_column_slice(u) * *w).collect()
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn quartic(&self, x: &DVector<f64>) -> f64 {
        self.forms().iter().map(|f| f.dot(x).powi(4)).sum()
    }

    /// `Σ lᵢ lᵢᵀ`.
    pub fn gram(&self) -> DMatrix<f64> {
        let mut g = DMatrix::zeros(self.dim, self.dim);
        for f in self.forms() {
            g += &f * f.transpose();
        }
        g
    }

    /// Max over `samples` fixed pseudo-random points of `|Σ lᵢ⁴ − λ|x|⁴| / |x|⁴`.
    pub fn identity_residual(&self, samples: usize) -> f64 {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xf0f0);
        (0..samples)
            .map(|_| {
                let x: DVector<f64> = DVector::from_iterator(self.dim, (0..self.dim).map(|_| StandardNormal.sample(&mut rng)));
                let n4 = x.norm_squared().powi(2);
                (self.quartic(&x) - self.lambda * n4).abs() / n4
            })
            .fold(0.0, f64::max)
    }
}

/// `k` directions at angles `2πj/k` in the plane; `λ = 3k/8` when `k ≥ 5`.
pub fn circle_frame(k: usize) -> Result<LinearFormFrame> {
    if k == 0 {
        return Err(Error::UnsupportedFrame("circle frame needs at least one direction".into()));
    }
    let forms = (0..k)
        .map(|j| {
            let t = std::f64::consts::TAU * j as f64 / k as f64;
            DVector::from_vec(vec![t.cos(), t.sin()])
        })
        .collect();
    LinearFormFrame::checked(FrameKind::Circle, 2, forms, 3.0 * k as f64 / 8.0)
}

/// The 6 diagonals of the icosahedron; `λ = 6/5`.
pub fn icosahedral_frame() -> LinearFormFrame {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let forms = [[0.0, 1.0, t], [0.0, 1.0, -t], [1.0, t, 0.0], [1.0, -t, 0.0], [t, 0.0, 1.0], [-t, 0.0, 1.0]]
        .iter()
        .map(|v| DVector::from_column_slice(v).normalize())
        .collect();
    LinearFormFrame::checked(FrameKind::Icosahedral, 3, forms, 1.2).expect("icosahedral axes form a 4-design")
}

/// Any dimension: the `2^{q−1}` sign vectors `ε` (up to ±) give
/// `Σ(ε·x)⁴ = N(Σxᵢ⁴ + 6Σ_{i<j}xᵢ²xⱼ²)` with `N = 2^{q−1}`; adding the axes
/// with weight `(2N)^{1/4}` completes it to `3N|x|⁴`.
pub fn composed_frame(q: usize) -> Result<LinearFormFrame> {
    if !(1..=12).contains(&q) {
        return Err(Error::UnsupportedFrame(format!("composed frames support 1 ≤ q ≤ 12, got {q}")));
    }
    if q == 1 {
        return LinearFormFrame::checked(FrameKind::Coordinate, 1, vec![DVector::from_element(1, 1.0)], 1.0);
    }
    let n = 1usize << (q - 1);
    let mut forms = Vec::with_capacity(n + q);
    for mask in 0..n {
        forms.push(DVector::from_iterator(q, (0..q).map(|i| if i > 0 && mask >> (i - 1) & 1 == 1 { -1.0 } else { 1.0 })));
    }
    let w = (2.0 * n as f64).powf(0.25);
    for i in 0..q {
        let mut e = DVector::zeros(q);
        e[i] = w;
        forms.push(e);
    }
    LinearFormFrame::checked(FrameKind::Composed, q, forms, 3.0 * n as f64)
}

/// The designed frame for `q ∈ {1, 2, 3}`; other dimensions need `compose`.
pub fn fourth_power_frame(q: usize, compose: bool) -> Result<LinearFormFrame> {
    match q {
        1 => composed_frame(1),
        2 => circle_frame(5),
        3 => Ok(icosahedral_frame()),
        _ if compose => composed_frame(q),
        _ => Err(Error::UnsupportedFrame(format!("no designed frame for q = {q}; enable composition"))),
    }
}
