//! The reduced normal operator at future timelike infinity: boundary
//! spectrum, weighted collocation solves, conjugation to the simplified
//! operator, Mellin transforms and semiclassical radial sets.

pub mod conj;
pub mod mellin;
pub mod op;
pub mod reduced;
pub mod semiclassical;

pub use conj::{
    apply_simplified, conjugate, conjugation_residual, injectivity_identity, simplified_kernel, two_path_defect, unconjugate,
    InjectivityIdentity,
};
pub use mellin::{line_norm, mellin_transform, weighted_norm, Direction, MellinGrid, MellinPair};
pub use op::{boundary_spectrum, shoot_exponent, BoundarySpectrum, ExponentFit, ReducedNormalOp};
pub use reduced::{sigma_scan, solve_reduced, Collocation, ReducedGrid, ReducedSolution, SigmaSample};
pub use semiclassical::{hamiltonian_field, semiclassical_radial_points, symbol, PhasePoint, RadialSetReport};
