//! Deformed Fock spaces for generalized particle statistics.
//!
//! A statistics is specified by a *cross operator* `T: E* (x) E -> E (x) E*`
//! on a one-particle space `E = C^N`, optionally together with a *braid
//! operator* `B` on `E (x) E`. From `T` the crate builds the deformed Fock
//! space level by level: the symmetrization operators
//!
//! ```text
//! R_n = id + Ttilde^(1) + Ttilde^(1) Ttilde^(2) + ... + Ttilde^(1) ... Ttilde^(n-1)
//! P_1 = id,    P_(n+1) = (id (x) P_n) R_(n+1)
//! ```
//!
//! give the level-`n` Gram matrix `G_n = P_n`, whose positivity makes the
//! deformed inner product a genuine one. Creation operators prepend a letter;
//! annihilation operators are the pairing contraction composed with `R_n`.
//! When a braid is present, the ideals `I_n = sum_i Im(place(id - B, i, n))`
//! are quotiented away, which is well defined exactly when the consistency
//! conditions between `T` and `B` hold.
//!
//! The crate verifies, numerically and with explicit residuals: the
//! Yang-Baxter and braid relations, the `T`/`B` consistency conditions, Gram
//! positivity and kernel structure, adjointness of creation and annihilation,
//! and the commutation relations of the generalized creation/annihilation
//! algebra. Preset statistics cover Boltzmann, boson, fermion, quon `q`, and
//! color (bicharacter-graded) families.
//!
//! Start with the `examples/` directory for runnable tours of each
//! capability, or with [`statistics_zoo`] for the preset families. The
//! `gsfock` binary exposes the same checks on JSON configs.

pub mod cli;
pub mod config;
pub mod error;
pub mod fock_space;
pub mod multilinear;
pub mod report;
pub mod runner;
pub mod statistics_ops;
pub mod statistics_zoo;
pub mod wick_ops;

pub use error::{Error, Result};
pub use multilinear::CMatrix;
pub use num_complex::Complex64;
