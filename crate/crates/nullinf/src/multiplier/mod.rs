//! Multiplier vector fields, deformation tensors, definiteness scans and the
//! weight conditions of the estimates near null infinity.

pub mod causal;
pub mod deformation;
pub mod field;
pub mod positivity;
pub mod thresholds;

pub use causal::{causal_character, future_generators, pairing, CausalCharacter};
pub use deformation::{
    deformation_tensor, deformation_tensor_fd, deformation_tensor_symbolic, determinant_slope, minor_trace_det,
    DeformationTensor,
};
pub use field::{w_components, MultiplierField};
pub use positivity::{default_c_grid, log_c_grid, positivity_boundary, positivity_scan, PositivityReport, Side, WeightName, Weights};
pub use thresholds::{threshold_evaluate, threshold_evaluate_named, InequalityRecord, ThresholdInput, ThresholdReport, TheoremTag};
