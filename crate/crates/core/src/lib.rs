//! Rotation-sensitive, permutation-invariant comparison of neural
//! representations.
//!
//! Activation matrices hold responses of `N` units (columns) to `M` stimuli
//! (rows). The crate provides:
//!
//! * [`transport`]: soft matching distance and soft matching correlation,
//!   solved exactly by a network simplex over the transportation polytope;
//! * [`assignment`]: one-to-one matching distance, semi-matching and
//!   rectangular matching scores;
//! * [`metrics`]: Procrustes distance, a uniform dispatcher, and a metric
//!   axiom harness;
//! * [`experiments`]: rotation sweeps over SO(N), the semi-matching
//!   counterexample fixture, and ridge linear predictivity;
//! * [`linalg`]: the dense linear algebra these need (Jacobi SVD, QR,
//!   exponential and logarithm of rotations, Haar sampling).

pub mod assignment;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod io;
pub mod linalg;
pub mod metrics;
pub mod preprocess;
pub mod rng;
pub mod transport;

pub use error::{Error, Result};
pub use linalg::{Matrix, OrthogonalMatrix};
pub use metrics::{MetricKind, MetricReport};
pub use preprocess::{preprocess, ActivationMatrix, Preprocessing};
