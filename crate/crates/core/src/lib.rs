//! # eca-core
//!
//! Algebra and experiments for elementary cellular automata, built around the
//! comparison of rule 22 (`a + b + c + abc`, fully symmetric) with rule 30
//! (`a + b + c + bc`, left-permutive only).
//!
//! | module | what it covers |
//! |---|---|
//! | [`rule_algebra`] | truth tables, ANF by Möbius inversion, symmetry and permutivity, the 256-rule census |
//! | [`evolution`] | bit-packed single-seed and windowed evolution, supports, centre column, PBM output |
//! | [`rule22`] | rule 22 cardinality formula, support recursion, generating polynomials |
//! | [`continuum`] | blow-up ODE, Duffing oscillator, reaction-diffusion solver |
//! | [`statistics`] | deviation fit, sensitivity profiles, equidistribution, mutual information, block entropy |
//! | [`cli`] | the `eca` command-line front end and the `reproduce` bundle |
//!
//! Runnable walkthroughs live in the crate's `examples/` directory:
//!
//! ```bash
//! cargo run -p eca-core --example rule_census
//! cargo run -p eca-core --example rule22_closed_forms
//! cargo run -p eca-core --example seed_patterns -- out/
//! cargo run -p eca-core --example deviation_fit
//! cargo run -p eca-core --release --example sensitivity
//! cargo run -p eca-core --example entropy
//! cargo run -p eca-core --release --example continuum
//! cargo run -p eca-core --release --example reproduce -- out/
//! ```

// NaN must fail range checks, so negated comparisons are intentional.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod continuum;
pub mod error;
pub mod evolution;
pub mod rule22;
pub mod rule_algebra;
pub mod statistics;

pub use error::{EcaError, Result};
pub use evolution::{Row, SupportSet, View};
pub use rule22::PolyF2;
pub use rule_algebra::{AnfMask, RuleSpec};

/// Version string embedded in JSON outputs.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
