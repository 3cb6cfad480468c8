//! Independent numeric oracles used by the workspace test suites.
//!
//! Everything here is deliberately written from first principles (literal
//! double sums, dense matrices, finite differences, bisection on KKT
//! conditions) so that the library crates can be checked against code that
//! shares none of their implementation shortcuts. Frozen expected values in
//! the test suites were produced by these oracles.

pub mod conv;
pub mod dd;
pub mod dense;
pub mod dft;
pub mod fd;
pub mod palmref;
pub mod project;
pub mod rng;

pub use conv::{conv_same_brute, conv_with_center_brute};
pub use dd::{exact_sum, exact_sum_sq};
pub use dense::{dense_matrix, spectral_norm};
pub use dft::{dft_bin_hz, dft_magnitudes};
pub use fd::{fd_gradient, fd_hessian};
pub use palmref::{palm_reference, projected_gradient_dense, PalmRefParams};
pub use project::{argmin_1d, project_box_ball_kkt, soft_threshold_oracle};
pub use rng::SplitMix64;
