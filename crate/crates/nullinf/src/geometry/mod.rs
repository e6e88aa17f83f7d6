//! Compactified coordinates near null infinity, edge-b frames and metrics.

pub mod chart;
pub mod expr;
pub mod metric;
pub mod orders;
pub mod sphere;

pub use chart::{eb_frame_in_spacetime, from_chart, to_chart, transition, ChartId, ChartPoint, FrameMatrix, SpacetimePoint};
pub use expr::{Expr, ExprEnv};
pub use metric::{
    covariant_metric_eb, dual_metric_eb, quadratic_form, signature, DecayOrders, MetricKind, MetricSpec, Perturbation,
    PerturbationTerm,
};
pub use orders::{fit_admissibility_orders, Approach, OrderReport, SamplePath};
pub use sphere::{Hemisphere, SpherePoint};
