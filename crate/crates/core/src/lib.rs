//! Certified counting of Euler configurations: collinear central
//! configurations of three particles with arbitrary real masses under the
//! interaction law `ρ(x) = x|x|^{b-1}` for any real exponent `b`.
//!
//! The crate is organized bottom-up:
//!
//! - [`signomial`]: sums of real-exponent monomials on `x > 0`, sign-rule
//!   bounds and certified root isolation through the derivative chain.
//! - [`euler`]: the configuration function `g`, its transforms, the
//!   degenerate families and per-cell counts with isolated solutions.
//! - [`classifier`]: closed-form classification of the `(m₂, b)` plane for
//!   equal exterior masses, with a grid scanner cross-checked numerically.
//! - [`qps`]: two-equation quasi-polynomial systems whose first equation is a
//!   trinomial, reduced to a function on a segment.
//! - [`verify`]: the property suites exercised by the acceptance tests and
//!   the `verify` command.

mod bracket;
mod error;
mod numeric;
mod sign;

pub mod classifier;
pub mod euler;
pub mod qps;
pub mod signomial;
pub mod verify;

pub use error::{Error, Result};
pub use sign::{Endpoint, Sign};
pub use signomial::{count_and_isolate, Isolation, RootCount, RootRecord, Signomial, Term};
