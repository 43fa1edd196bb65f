//! Fourth-power frames, twist embeddings with prescribed extrinsic
//! curvature, finite-difference probes, and the normal-frame rotation search.

mod fd;
mod frame;
mod rotation;
mod twist;

pub use fd::{numeric_e, numeric_jacobian, numeric_metric, NumericE};
pub use frame::{circle_frame, composed_frame, fourth_power_frame, icosahedral_frame, FrameKind, LinearFormFrame, FRAME_TOL};
pub use rotation::{
    frame_rotation_search, obtuse_normals_check, plane_grid_search, NormalFrameProblem, ObtuseCheck, RotationSearchReport, Witness,
};
pub use twist::{make_twist, make_twist_with, AffineMap, SmoothMap, TwistMap, B_SCHEDULE};
