//! Null-bicharacteristic flows: explicit model flows, numerical integration
//! with chart hand-offs, asymptotic classification and the phase portrait.

pub mod classify;
pub mod closed;
pub mod integrate;
pub mod locate;
pub mod portrait;

pub use classify::{classify_asymptotics, classify_point, radial_distances, Classification};
pub use closed::{closed_form_flow, model_symbol, FlowState};
pub use integrate::{integrate_flow, Direction, FlowDiagnostics, FlowParams, FlowResult, TimeParam, TrajectoryPoint};
pub use locate::{locate_radial_sets, LocatedRadialSet, RadialSearch};
pub use portrait::{expected_classification, phase_portrait, portrait_start, PortraitEntry, PortraitReport, PortraitSpec};
