//! Computable pieces of Denjoy-Carleman quasi-analyticity.
//!
//! - [`sequences`]: weight sequences, their log-convex regularization
//!   (the Newton polygon of `n -> ln M_n`), the `beta_n` sequence, the three
//!   equivalent divergence criteria and an explicit classification policy.
//! - [`bang_space`]: Bang's norm and metric on real sequences and the vectors
//!   `X_f(t)` built from derivative data.
//! - [`smooth_functions`]: a catalog of smooth functions with exact
//!   derivatives of every order, plus grid sup-norm estimation.
//! - [`quasianalysis`]: the majorants `B_{f,n}`, their continuity estimate
//!   and positivity certificates.
//! - [`gontcharoff`]: exact Gontcharoff polynomials and the generalized
//!   Taylor expansion built on them.
//!
//! All sequence arithmetic is carried out on logarithms so that weights such
//! as `(n!)^2` can be handled far beyond the range of `f64`.

pub mod bang_space;
pub mod error;
pub mod gontcharoff;
pub mod numeric;
pub mod quasianalysis;
pub mod sequences;
pub mod smooth_functions;

pub use error::{Error, Result};
