//! Forward solutions of the Minkowski and p1-modified wave operators for
//! single spherical modes on double-null grids, weighted norms, decay fits
//! and sharpness scans.

pub mod decay;
pub mod forcing;
pub mod grid;
pub mod norm;
pub mod oracle;
pub mod solve;

pub use decay::{
    decay_fit, default_alpha_grid, fit_power_law, sharpness_scan, DecayCurve, DecayFit, FitWindow, SharpnessEntry,
    SharpnessReport,
};
pub use forcing::{mode_potential, sphere_eigenvalue, ForcingSpec, WaveOperator, MAX_MODE};
pub use grid::{GridSpec, NullGrid};
pub use norm::{apply_field, divergent_trend, weighted_norm, x_hat, Family, NormReport, NormSpec, Region, VectorField};
pub use oracle::{dalembert_oracle, dalembert_psi, dalembert_value};
pub use solve::{default_u_min, solve_spherical_forward, SolutionField};
