//! Fixtures shared by the benchmarks.

use curvcone::{kn_square, random_orthogonal, AlgebraicCurvatureTensor, SolverConfig, Sym2Form};
use nalgebra::{DMatrix, DVector};

/// `Σ_k kn(π_k)` over `count` random rank-2 projections: a member of the
/// simple-square cone that the spectral shortcut does not decide.
pub fn simple_square_sum(dim: usize, count: usize, seed: u64) -> AlgebraicCurvatureTensor {
    let mut rng = SolverConfig::default().with_seed(seed).rng(0);
    let mut acc = AlgebraicCurvatureTensor::zeros(dim);
    for k in 0..count {
        let q = random_orthogonal(dim, &mut rng);
        let mut d = DVector::zeros(dim);
        d[0] = 1.0;
        d[1] = 1.0;
        let p = Sym2Form::new(&q * DMatrix::from_diagonal(&d) * q.transpose()).expect("symmetric");
        acc = acc.add(&kn_square(&p).scale(1.0 + k as f64 / count as f64)).expect("same dim");
    }
    acc
}

/// `kn(s)` for a random indefinite diagonal form in a random frame.
pub fn generic_tensor(dim: usize, seed: u64) -> AlgebraicCurvatureTensor {
    let mut rng = SolverConfig::default().with_seed(seed).rng(1);
    let q = random_orthogonal(dim, &mut rng);
    let d = DVector::from_iterator(dim, (0..dim).map(|i| if i % 2 == 0 { 1.0 + i as f64 } else { -0.5 }));
    kn_square(&Sym2Form::new(&q * DMatrix::from_diagonal(&d) * q.transpose()).expect("symmetric"))
}
