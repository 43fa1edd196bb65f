//! Multilinear algebra on a Euclidean space ℝ^m.

pub mod biform;
pub mod bivector;
pub mod index;
pub mod io;
pub mod phi;
pub mod rotation;
pub mod sym2;
pub mod sym4;

pub use biform::{
    bianchi_project, bianchi_residual, kn_square, pairing, product_tensor, sectional, sphere_tensor,
    AlgebraicCurvatureTensor, Biform, ALGEBRA_TOL,
};
pub use bivector::{is_simple, wedge_square, Bivector, FourVector};
pub use io::{AnyTensor, TensorDoc, TensorKind};
pub use phi::{curvature_part, decompose_phi, phi_from_forms, recompose_phi, PhiTensor};
pub use rotation::{check_orthogonal, conjugate, random_orthogonal, Conjugate};
pub use sym2::Sym2Form;
pub use sym4::Sym4Form;
