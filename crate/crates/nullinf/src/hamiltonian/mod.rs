//! Edge-b principal symbols and Hamiltonian vector fields.

pub mod field;
pub mod phase;
pub mod radial;

pub use field::{
    characteristic_component, compact_coordinate_names, compact_from_state, compact_state, compact_symbol,
    hamiltonian_field, hamiltonian_field_fd, linearize_at_point, rescaled_field, symbol_value, Characteristic,
    Dynamics, Linearization, CRITICAL_TOL,
};
pub use phase::{CompactPhasePoint, FiberChart, PhasePoint, Sign};
pub use radial::{RadialKind, RadialSetId};
