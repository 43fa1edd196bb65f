use serde::{Deserialize, Serialize};

use crate::tensor::{Biform, Bivector, PhiTensor, Sym2Form, Sym4Form};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Member,
    NonMember,
    Inconclusive,
}

/// A cone generator: a unit simple bivector σ (atom σ⊗σ) or a unit PSD form
/// `s` (atom `s⊗s` or `s∘²`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "snake_case")]
pub enum Generator {
    Plane(Bivector),
    Form(Sym2Form),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedGenerator {
    pub weight: f64,
    pub generator: Generator,
}

/// Linear functional separating the input from the cone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "snake_case")]
pub enum DualFunctional {
    Biform(Biform),
    Sym4(Sym4Form),
    Phi(PhiTensor),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iteration: usize,
    pub residual: f64,
    pub step_size: f64,
}

/// Independent re-check of a dual functional.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualCheck {
    /// `⟨dual, input⟩ / ‖input‖`, negative for a separating functional.
    pub pairing: f64,
    /// Smallest pairing of the dual with a unit generator found by a fresh
    /// multistart search.
    pub min_generator_pairing: f64,
    /// Lower bound on the relative distance from the input to the cone.
    pub distance_lower_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConicCertificate {
    pub verdict: Verdict,
    pub decomposition: Option<Vec<WeightedGenerator>>,
    pub dual_functional: Option<DualFunctional>,
    /// `‖input − Σ μ_j atom_j‖ / ‖input‖` for the best combination found.
    pub residual: f64,
    pub iterations: usize,
    /// Smallest eigenvalue among the (unit) PSD generators, when applicable.
    pub margin: Option<f64>,
    pub dual_check: Option<DualCheck>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub trace: Vec<TraceRow>,
}

impl ConicCertificate {
    pub fn is_member(&self) -> bool {
        self.verdict == Verdict::Member
    }

    pub fn trace_csv(&self) -> String {
        let mut out = String::from("iteration,residual,step_size\n");
        for row in &self.trace {
            out.push_str(&format!("{},{:e},{:e}\n", row.iteration, row.residual, row.step_size));
        }
        out
    }
}
