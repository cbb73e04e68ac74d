//! Directed harmonic currents near the linear singularity `z∂/∂z + λw∂/∂w`.
//!
//! The crate models a discretized current `T = Σ_j w_j h_j [P_{α_j}]` on the
//! unit bidisc, computes its mass on `rD²` both by adaptive quadrature and by
//! elementary closed forms, estimates the Lelong number from the normalized
//! masses `ν(r) = ‖T‖_{rD²} / (πr²)`, and runs the verification suite over a
//! deterministic corpus of currents.
//!
//! Everything here is pure computation. File formats, parallel execution and
//! the command-line front end live in the `lelonglab` crate.

#![no_std]
#![warn(missing_docs)]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

extern crate alloc;

pub mod corpus;
pub mod current;
pub mod error;
pub mod exec;
pub mod foliation;
pub mod harmonic;
pub mod lelong;
pub mod lemmas;
pub mod mass;
pub mod quadrature;
pub mod theorem;

pub use crate::current::{Current, TransversalAtom};
pub use crate::error::{Error, Result};
pub use crate::exec::{Executor, Sequential};
pub use crate::foliation::{EigenClass, Eigenvalue, LeafDomain, LeafPoint};
pub use crate::harmonic::{FourierSpec, HarmonicSpec, Mode, PoissonSpec};
pub use crate::lelong::{LelongEstimate, Schedule};
pub use crate::mass::{MassResult, QuadratureConfig};
pub use crate::theorem::{Claim, VerificationReport, Verdict, VerifyConfig};

pub use num_complex::Complex64;
