//! Membership, separation and bounds for the curvature cones.

mod certificate;
mod cosec;
mod fw;
mod grassmann;
mod nnls;
mod polish;
mod psd;
mod quartic;
mod thorpe;

pub use certificate::{ConicCertificate, DualCheck, DualFunctional, Generator, TraceRow, Verdict, WeightedGenerator};
pub use cosec::{cosec_lower_bound, cosec_membership, cosec_upper_bound, curvature_operator_spectrum, dual_separation};
pub use grassmann::{max_sectional, min_sectional, plane_of, PlaneExtremum};
pub use nnls::nnls;
pub use psd::{phi_positive_membership, project_psd, sym4_sos_membership};
pub use quartic::{quartic_min, QuarticMin};
pub use thorpe::{thorpe_shift, trace_is_concave, ThorpeShift};
