//! Numerical laboratory for prime-generating integer sequences.
//!
//! The crate combines certified real arithmetic (exact rationals, quadratic
//! irrationals and adaptive-precision expression trees) with segmented sieves,
//! floor-sequence indicators, continued-fraction machinery, a sawtooth
//! approximation toolkit, exponential-sum evaluators and the divisor-slice
//! census experiment that ties them together.
//!
//! Modules:
//! - [`exactreal`]: bit-exact floors and comparisons over algebraic inputs
//! - [`arith`]: segmented prime sieve and the Lambda/mu/Omega functions
//! - [`seq`]: floor-of-linear and floor-of-power sequence generators and
//!   their membership indicators
//! - [`dioph`]: continued fractions, convergents, irrationality measure
//! - [`sawtooth`]: sawtooth approximation by trigonometric polynomials and a
//!   posynomial optimization bound
//! - [`expsum`]: weighted exponential sums, a combinatorial identity for the
//!   von Mangoldt function, and explicit bound calculators
//! - [`sievelab`]: the divisor-slice census, main-term estimates, and the
//!   admissibility arithmetic for almost-prime sieving

pub mod arith;
pub mod dioph;
pub mod error;
pub mod exactreal;
pub mod expsum;
pub mod sawtooth;
pub mod seq;
pub mod sievelab;

pub use error::{Error, Result};
pub use exactreal::{
    certified_compare, certified_floor, floor_power, parse_real, CertifiedReal,
};

/// Version tag stamped into every JSON report.
pub const REPORT_SCHEMA: &str = "psbeatty.report.v1";
