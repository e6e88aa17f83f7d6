//! Small numerical kernels shared by the topic modules.

pub mod cheb;
pub mod diff;
pub mod fit;
pub mod ode;
pub mod quad;
pub mod special;
