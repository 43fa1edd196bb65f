use serde::{Deserialize, Serialize};

/// Knobs shared by every iterative solver in the crate.
///
/// All solvers are deterministic functions of their input and this struct:
/// multistart `k` draws from its own ChaCha stream seeded by `(rng_seed, k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub max_iterations: usize,
    /// Verdict tolerance. Cone residuals are relative to the input norm.
    pub tol: f64,
    pub multistart_count: usize,
    pub rng_seed: u64,
    /// Minimum eigenvalue (relative to the Frobenius norm) each PSD generator
    /// must reach before a decomposition counts as strictly positive.
    pub strict_margin: f64,
    /// Record the per-iteration trace in certificates.
    pub trace: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            tol: 1e-6,
            multistart_count: 32,
            rng_seed: 0,
            strict_margin: 0.0,
            trace: false,
        }
    }
}

impl SolverConfig {
    /// Defaults for the normal-frame rotation search (64 restarts).
    pub fn rotation_search() -> Self {
        Self {
            multistart_count: 64,
            strict_margin: 1e-9,
            ..Self::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_multistarts(mut self, count: usize) -> Self {
        self.multistart_count = count.max(1);
        self
    }

    pub fn validate(&self) -> crate::Result<()> {
        if !(self.tol > 0.0) {
            return Err(crate::Error::InvalidInput(format!("tol must be positive, got {}", self.tol)));
        }
        if self.multistart_count == 0 {
            return Err(crate::Error::InvalidInput("multistart_count must be at least 1".into()));
        }
        Ok(())
    }

    /// RNG for the `stream`-th independent random draw of this run.
    pub fn rng(&self, stream: u64) -> rand_chacha::ChaCha8Rng {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(self.rng_seed);
        rng.set_stream(stream);
        rng
    }
}
